//! Finite approximations of the Cantor sets built from nested `q` windows.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::address::{ScheduleMode, Tower};
use crate::error::{Error, Result};

/// A schedule whose levels fit in machine integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stages {
    pub mode: ScheduleMode,
    pub n0: usize,
    /// `(n_k, m_k)` for `k = 1, 2, ...`.
    pub pairs: Vec<(usize, usize)>,
}

impl Stages {
    pub fn compute(tower: &Tower, n0: usize, kmax: usize, mode: ScheduleMode) -> Result<Self> {
        let pairs = tower
            .schedule(n0, kmax, mode)?
            .into_iter()
            .map(|p| {
                let n = p.n.to_usize().ok_or_else(|| Error::LevelOutOfReach(p.n.clone()))?;
                let m = p.m.to_usize().ok_or_else(|| Error::LevelOutOfReach(p.m.clone()))?;
                Ok((n, m))
            })
            .collect::<Result<_>>()?;
        Ok(Stages { mode, n0, pairs })
    }

    /// `(n_k, m_k)`, `k >= 1`.
    pub fn stage(&self, k: usize) -> Result<(usize, usize)> {
        k.checked_sub(1)
            .and_then(|i| self.pairs.get(i))
            .copied()
            .ok_or_else(|| Error::Precondition(format!("schedule has no stage {k}")))
    }
}

/// Stage `k` approximation of `C_N`: intervals of positions in
/// `p_{1,m_k}`, one per branch of the triple refinement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CantorApprox {
    pub big_n: usize,
    pub k: usize,
    /// `m_k`, the level the intervals live on.
    pub level: usize,
    pub cylinders: Vec<(BigUint, BigUint)>,
}

impl CantorApprox {
    pub fn build(tower: &Tower, stages: &Stages, big_n: usize, k: usize) -> Result<Self> {
        if big_n == 0 || k < big_n {
            return Err(Error::Precondition(format!("need 1 <= N <= k, got N={big_n} k={k}")));
        }
        let (n_first, m_first) = stages.stage(big_n)?;
        let mut cylinders = vec![tower.q_interval(m_first, n_first)?];
        let mut level = m_first;
        for j in big_n..k {
            let (n_next, m_next) = stages.stage(j + 1)?;
            if n_next != level + 1 {
                return Err(Error::Precondition(format!(
                    "stage {} starts at level {n_next}, expected {}",
                    j + 1,
                    level + 1
                )));
            }
            let (q_lo, _) = tower.q_interval(m_next, n_next)?;
            let copies = tower.first_path_copies(level)?;
            let mut next = Vec::with_capacity(cylinders.len() * copies.len());
            for (a, b) in &cylinders {
                for o in &copies {
                    let base = &q_lo + o;
                    next.push((&base + a, &base + b));
                }
            }
            next.sort();
            cylinders = next;
            level = m_next;
        }
        Ok(CantorApprox { big_n, k, level, cylinders })
    }

    /// Endpoints and midpoints of every cylinder, plus `extra` seeded
    /// random positions; sorted and deduplicated.
    pub fn samples(&self, extra: usize, seed: u64) -> Vec<BigUint> {
        let mut out = Vec::with_capacity(self.cylinders.len() * 3 + extra);
        for (a, b) in &self.cylinders {
            out.push(a.clone());
            out.push(b.clone());
            out.push((a + b) >> 1);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..extra {
            let (a, b) = &self.cylinders[rng.gen_range(0..self.cylinders.len())];
            let width = (b - a).to_u64().unwrap_or(u64::MAX);
            out.push(a + rng.gen_range(0..=width));
        }
        out.sort();
        out.dedup();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::address::{Address, PathId};
    use crate::generators::CyclicOdometer;
    use num_traits::One;
    use std::sync::Arc;

    fn towers() -> Vec<Tower> {
        vec![
            Tower::new(Arc::new(CyclicOdometer::fixed_point())),
            Tower::new(Arc::new(CyclicOdometer::binary())),
        ]
    }

    #[test]
    fn counts_triple() {
        for t in towers() {
            let s = Stages::compute(&t, 1, 3, ScheduleMode::Relaxed).unwrap();
            for big_n in 1..=3 {
                for k in big_n..=3 {
                    let c = CantorApprox::build(&t, &s, big_n, k).unwrap();
                    assert_eq!(c.cylinders.len(), 3usize.pow((k - big_n) as u32));
                    assert_eq!(c.level, s.stage(k).unwrap().1);
                }
            }
        }
    }

    /// Every stage-(k+1) interval decodes, position by position, onto some
    /// stage-k interval.
    #[test]
    fn refinement_decodes_into_previous_stage() {
        for t in towers() {
            let s = Stages::compute(&t, 1, 3, ScheduleMode::Relaxed).unwrap();
            for k in 1..3 {
                let coarse = CantorApprox::build(&t, &s, 1, k).unwrap();
                let fine = CantorApprox::build(&t, &s, 1, k + 1).unwrap();
                for (a, b) in &fine.cylinders {
                    let first = t.decode(&Address::on_path(fine.level, PathId::First, a.clone()), coarse.level).unwrap();
                    let target = coarse
                        .cylinders
                        .iter()
                        .find(|(c, _)| t.path_point(coarse.level, c).unwrap() == first)
                        .expect("lands on a coarse interval");
                    let mut x = a.clone();
                    let mut y = target.0.clone();
                    while &x <= b {
                        let got = t.decode(&Address::on_path(fine.level, PathId::First, x.clone()), coarse.level).unwrap();
                        assert_eq!(got, t.path_point(coarse.level, &y).unwrap());
                        x += 1u32;
                        y += 1u32;
                    }
                    assert_eq!(&y - BigUint::one(), target.1);
                }
            }
        }
    }

    #[test]
    fn sets_are_nested() {
        let t = &towers()[0];
        let s = Stages::compute(t, 1, 3, ScheduleMode::Relaxed).unwrap();
        let c1 = CantorApprox::build(t, &s, 1, 3).unwrap();
        let c2 = CantorApprox::build(t, &s, 2, 3).unwrap();
        for (a, b) in &c1.cylinders {
            assert!(c2.cylinders.iter().any(|(c, d)| c <= a && b <= d));
        }
    }

    #[test]
    fn samples_are_deterministic() {
        let t = &towers()[1];
        let s = Stages::compute(t, 1, 2, ScheduleMode::Relaxed).unwrap();
        let c = CantorApprox::build(t, &s, 1, 2).unwrap();
        assert_eq!(c.samples(5, 7), c.samples(5, 7));
        for x in c.samples(20, 1) {
            assert!(c.cylinders.iter().any(|(a, b)| a <= &x && &x <= b));
        }
    }

    #[test]
    fn strict_stages() {
        let t = &towers()[0];
        let s = Stages::compute(t, 1, 2, ScheduleMode::Strict).unwrap();
        assert_eq!(s.pairs, [(1, 3), (4, 254)]);
        let c = CantorApprox::build(t, &s, 1, 2).unwrap();
        assert_eq!(c.cylinders.len(), 3);
        assert!(matches!(Stages::compute(t, 1, 3, ScheduleMode::Strict), Err(Error::LevelOutOfReach(_))));
    }
}
