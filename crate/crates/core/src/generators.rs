//! Built-in inputs that work at any depth: cycles of length `b^n` with
//! residue maps. Base 1 gives the fixed point (every level a single loop),
//! base 2 the binary odometer.

use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::covering::{CoveringSequence, GraphHom};
use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, VertexId};
use crate::provider::{check_anchor_level, LevelProvider};

/// Largest level size [`CyclicOdometer::graph`] will materialize.
pub const MATERIALIZE_LIMIT: usize = 1 << 22;

/// Level `n` is the cycle `0 -> 1 -> ... -> b^n - 1 -> 0`, mapped to level
/// `n - 1` by reduction mod `b^(n-1)`.
///
/// Anchors follow the orbit of 0: the forward walk is `0, 1, ..., n + 1` and
/// the backward walk `0, -1, ..., -(n + 1)` (mod `b^n`). The covering walk
/// runs once around the cycle from `n` and then on to `-n`.
#[derive(Debug, Clone)]
pub struct CyclicOdometer {
    base: u32,
    name: String,
}

impl CyclicOdometer {
    pub fn new(base: u32) -> Self {
        assert!(base >= 1, "base must be positive");
        let name = match base {
            1 => "fixed-point".to_string(),
            2 => "odometer".to_string(),
            b => format!("odometer-{b}"),
        };
        CyclicOdometer { base, name }
    }

    pub fn fixed_point() -> Self {
        CyclicOdometer::new(1)
    }

    pub fn binary() -> Self {
        CyclicOdometer::new(2)
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    fn modulus(&self, level: usize) -> BigUint {
        BigUint::from(self.base).pow(level as u32)
    }

    fn parse(&self, level: usize, v: &VertexId) -> Result<BigUint> {
        let unknown = || Error::UnknownVertex { level, vertex: v.clone() };
        let s = v.as_str();
        if s.is_empty() || (s.len() > 1 && s.starts_with('0')) || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(unknown());
        }
        let x: BigUint = s.parse().map_err(|_| unknown())?;
        if x >= self.modulus(level) {
            return Err(unknown());
        }
        Ok(x)
    }

    fn id(x: &BigUint) -> VertexId {
        VertexId::new(x.to_string())
    }

    /// `(x + d) mod b^n` for signed `d`.
    fn offset(&self, level: usize, x: &BigUint, d: i64) -> BigUint {
        let m = self.modulus(level);
        let d_abs = BigUint::from(d.unsigned_abs()) % &m;
        if d >= 0 {
            (x + d_abs) % m
        } else {
            (x + &m - d_abs) % m
        }
    }

    fn walk_ends(&self, level: usize) -> (BigUint, BigUint) {
        let zero = BigUint::zero();
        (self.offset(level, &zero, level as i64), self.offset(level, &zero, -(level as i64)))
    }

    /// Explicit levels `0..=levels` as a covering sequence.
    pub fn materialize(&self, levels: usize) -> Result<CoveringSequence> {
        let graphs = (0..=levels).map(|n| self.graph(n)).collect::<Result<Vec<_>>>()?;
        let mut homs = Vec::with_capacity(levels);
        for n in 1..=levels {
            let below = graphs[n - 1].vertex_count();
            let map = graphs[n]
                .vertices()
                .iter()
                .map(|v| {
                    let x: usize = v.as_str().parse().expect("numeric id");
                    let image = VertexId::new((x % below).to_string());
                    graphs[n - 1].index_of(&image).expect("residue exists")
                })
                .collect();
            homs.push(GraphHom::from_indices(graphs[n].clone(), graphs[n - 1].clone(), map)?);
        }
        Ok(CoveringSequence::new(self.name.clone(), graphs, homs)?)
    }
}

impl LevelProvider for CyclicOdometer {
    fn name(&self) -> &str {
        &self.name
    }

    fn depth(&self) -> Option<usize> {
        None
    }

    fn is_bidirectional(&self) -> bool {
        true
    }

    fn vertex_count(&self, level: usize) -> Result<BigUint> {
        Ok(self.modulus(level))
    }

    fn graph(&self, level: usize) -> Result<Arc<DirectedGraph>> {
        let size = self.modulus(level);
        let n = size.to_usize().filter(|&n| n <= MATERIALIZE_LIMIT).ok_or_else(|| {
            Error::BudgetExceeded { level, size: size.clone(), budget: MATERIALIZE_LIMIT }
        })?;
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let edges: Vec<(String, String)> =
            (0..n).map(|i| (names[i].clone(), names[(i + 1) % n].clone())).collect();
        Ok(Arc::new(DirectedGraph::new(names, edges)?))
    }

    fn contains(&self, level: usize, v: &VertexId) -> Result<bool> {
        Ok(self.parse(level, v).is_ok())
    }

    fn map_down(&self, level: usize, v: &VertexId) -> Result<VertexId> {
        if level == 0 {
            return Err(Error::Precondition("level 0 has no map below it".into()));
        }
        let x = self.parse(level, v)?;
        Ok(Self::id(&(x % self.modulus(level - 1))))
    }

    fn successors(&self, level: usize, v: &VertexId) -> Result<Vec<VertexId>> {
        let x = self.parse(level, v)?;
        Ok(vec![Self::id(&self.offset(level, &x, 1))])
    }

    fn predecessors(&self, level: usize, v: &VertexId) -> Result<Vec<VertexId>> {
        let x = self.parse(level, v)?;
        Ok(vec![Self::id(&self.offset(level, &x, -1))])
    }

    fn forward_anchor(&self, level: usize, i: usize) -> Result<VertexId> {
        check_anchor_level(level)?;
        if i > level + 1 {
            return Err(Error::IndexOutOfRange {
                level,
                index: BigUint::from(i),
                len: BigUint::from(level + 1),
            });
        }
        Ok(Self::id(&self.offset(level, &BigUint::zero(), i as i64)))
    }

    fn backward_anchor(&self, level: usize, i: usize) -> Result<VertexId> {
        check_anchor_level(level)?;
        if i > level + 1 {
            return Err(Error::IndexOutOfRange {
                level,
                index: BigUint::from(i),
                len: BigUint::from(level + 1),
            });
        }
        Ok(Self::id(&self.offset(level, &BigUint::zero(), -(i as i64))))
    }

    fn covering_walk_len(&self, level: usize) -> Result<BigUint> {
        check_anchor_level(level)?;
        let m = self.modulus(level);
        let (s, t) = self.walk_ends(level);
        let gap = (t + &m - s).mod_floor(&m);
        Ok(m + gap)
    }

    fn covering_walk_vertex(&self, level: usize, pos: &BigUint) -> Result<VertexId> {
        let len = self.covering_walk_len(level)?;
        if *pos > len {
            return Err(Error::IndexOutOfRange { level, index: pos.clone(), len });
        }
        let (s, _) = self.walk_ends(level);
        Ok(Self::id(&((s + pos) % self.modulus(level))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::validate_covering;

    #[test]
    fn walk_lengths() {
        let fp = CyclicOdometer::fixed_point();
        for n in 1..8 {
            assert!(fp.covering_walk_len(n).unwrap() == BigUint::from(1u32));
        }
        let od = CyclicOdometer::binary();
        let lens: Vec<u64> = (1..=6).map(|n| od.covering_walk_len(n).unwrap().to_u64().unwrap()).collect();
        assert_eq!(lens, [2, 4, 10, 24, 54, 116]);
    }

    #[test]
    fn arithmetic_walk_matches_explicit_covering_walk() {
        let od = CyclicOdometer::binary();
        for n in 1..=7 {
            let g = od.graph(n).unwrap();
            let from = g.index_of(&od.forward_anchor(n, n).unwrap()).unwrap();
            let to = g.index_of(&od.backward_anchor(n, n).unwrap()).unwrap();
            let explicit: Vec<VertexId> = g.edge_covering_walk(from, to).unwrap().names().cloned().collect();
            assert_eq!(explicit, od.covering_walk(n, 1 << 20).unwrap(), "level {n}");
        }
    }

    #[test]
    fn materialized_coverings_validate() {
        for gen in [CyclicOdometer::fixed_point(), CyclicOdometer::binary(), CyclicOdometer::new(3)] {
            let r = validate_covering(&gen.materialize(4).unwrap());
            assert!(r.is_ok() && r.chain_transitive && r.bidirectional, "{r}");
        }
    }

    #[test]
    fn deep_levels_are_arithmetic() {
        let od = CyclicOdometer::binary();
        let v = od.forward_anchor(300, 301).unwrap();
        assert_eq!(v.as_str(), "301");
        let back = od.backward_anchor(300, 1).unwrap();
        assert_eq!(BigUint::parse_bytes(back.as_str().as_bytes(), 10).unwrap() + 1u32, od.vertex_count(300).unwrap());
        assert!(matches!(od.graph(300), Err(Error::BudgetExceeded { .. })));
        assert!(!od.contains(3, &"8".into()).unwrap());
        assert!(!od.contains(3, &"07".into()).unwrap());
    }
}
