//! Re-running a check from the parameters recorded in its report.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;

use crate::address::Tower;
use crate::embed::{build_embedding, verify_construction, verify_outside_bidirectional};
use crate::error::{Error, Result};
use crate::verify::cantor::Stages;
use crate::verify::checks::{self, Sampling};
use crate::verify::report::{Claim, WitnessReport};

struct Params<'r>(&'r WitnessReport);

impl Params<'_> {
    fn big(&self, key: &str) -> Result<&BigInt> {
        self.0
            .get(&format!("param.{key}"))
            .ok_or_else(|| Error::Precondition(format!("report has no param.{key}")))
    }

    fn uint(&self, key: &str) -> Result<BigUint> {
        self.big(key)?
            .to_biguint()
            .ok_or_else(|| Error::Precondition(format!("param.{key} is negative")))
    }

    fn small(&self, key: &str) -> Result<usize> {
        self.big(key)?
            .to_usize()
            .ok_or_else(|| Error::Precondition(format!("param.{key} does not fit a level")))
    }

    fn sampling(&self) -> Result<Sampling> {
        Ok(Sampling {
            extra: self.small("samples")?,
            seed: self.big("seed")?.to_u64().ok_or_else(|| Error::Precondition("bad param.seed".into()))?,
        })
    }
}

/// Runs the check described by `report` again on `tower`.
pub fn replay(tower: &Tower, report: &WitnessReport) -> Result<WitnessReport> {
    let p = Params(report);
    let mode = report.mode;
    let stages = |kmax: usize| Stages::compute(tower, p.small("n0")?, kmax, mode);
    match report.claim {
        Claim::WellDefined | Claim::OutsideHomeo => {
            let provider = Arc::clone(tower.provider());
            let e = build_embedding(provider, report.level, p.small("l11")?, p.small("l21")?)?;
            Ok(if report.claim == Claim::WellDefined {
                verify_construction(&e)
            } else {
                verify_outside_bidirectional(&e, report.level)
            })
        }
        Claim::FixedPointPattern => checks::verify_fixed_point_pattern(tower, p.small("m")?, p.small("n")?),
        Claim::Property1 => checks::verify_property1(tower, p.small("m")?, p.small("n")?, mode),
        Claim::Property2 => checks::verify_property2(tower, p.small("m")?, p.small("n")?, mode),
        Claim::TripleCover => {
            let k = p.small("k")?;
            checks::verify_triple_cover(tower, &stages(k + 1)?, k)
        }
        Claim::Density => {
            let k = p.small("k")?;
            checks::verify_density(tower, &stages(k + 1)?, k)
        }
        Claim::Proximal | Claim::Recurrent => {
            let k = p.small("k")?;
            let s = stages(k)?;
            let f = if report.claim == Claim::Proximal {
                checks::proximality_witness
            } else {
                checks::recurrence_witness
            };
            f(tower, &s, p.small("N")?, k, report.level, p.sampling()?)
        }
        Claim::Invariant => {
            let k = p.small("k")?;
            checks::verify_invariance(tower, &stages(k + 1)?, p.small("N")?, k)
        }
        Claim::Scrambled => checks::scrambled_pair_witness(
            tower,
            p.small("level")?,
            &p.uint("a")?,
            &p.uint("b")?,
            report.level,
            Some(p.uint("horizon")?),
            mode,
        ),
        Claim::Transitive => {
            checks::transitivity_witness(tower, p.small("level")?, &p.uint("a")?, report.level, mode)
        }
    }
}

/// True when replaying `report` reproduces its verdict and witnesses.
pub fn replays_exactly(tower: &Tower, report: &WitnessReport) -> Result<bool> {
    let again = replay(tower, report)?;
    Ok(again.to_text() == report.to_text())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::address::ScheduleMode;
    use crate::generators::CyclicOdometer;

    #[test]
    fn reports_replay_from_their_text() {
        let t = Tower::new(Arc::new(CyclicOdometer::binary()));
        let s1 = Stages::compute(&t, 1, 1, ScheduleMode::Relaxed).unwrap();
        let s2 = Stages::compute(&t, 1, 2, ScheduleMode::Relaxed).unwrap();
        let (level, a, b) = checks::stage_points(&t, &s1, 1).unwrap();
        let e = build_embedding(Arc::clone(t.provider()), 3, 1, 1).unwrap();
        let reports = [
            verify_construction(&e),
            verify_outside_bidirectional(&e, 3),
            checks::verify_fixed_point_pattern(&t, 4, 2).unwrap(),
            checks::verify_property2(&t, 3, 1, ScheduleMode::Relaxed).unwrap(),
            checks::verify_triple_cover(&t, &s2, 1).unwrap(),
            checks::verify_density(&t, &s2, 1).unwrap(),
            checks::proximality_witness(&t, &s1, 1, 1, 1, Sampling { extra: 4, seed: 9 }).unwrap(),
            checks::recurrence_witness(&t, &s1, 1, 1, 2, Sampling::default()).unwrap(),
            checks::verify_invariance(&t, &s2, 1, 1).unwrap(),
            checks::scrambled_pair_witness(&t, level, &a, &b, 1, None, ScheduleMode::Relaxed).unwrap(),
            checks::transitivity_witness(&t, level, &a, 2, ScheduleMode::Relaxed).unwrap(),
        ];
        for r in reports {
            let parsed = WitnessReport::parse(&r.to_text()).unwrap();
            assert!(replays_exactly(&t, &parsed).unwrap(), "{}", r.claim);
        }
    }

    #[test]
    fn missing_params_are_reported() {
        let t = Tower::new(Arc::new(CyclicOdometer::fixed_point()));
        let r = WitnessReport::new(Claim::Property2, 1, ScheduleMode::Relaxed);
        assert!(matches!(replay(&t, &r), Err(Error::Precondition(_))));
    }
}
