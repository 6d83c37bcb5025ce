//! Witness reports and their line-oriented text form:
//!
//! ```text
//! CLAIM property2 LEVEL 1 VERDICT pass MODE relaxed
//! WITNESS t_left=-3
//! WITNESS t_right=3
//! ```

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use num_bigint::BigInt;

use crate::address::ScheduleMode;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Claim {
    WellDefined,
    FixedPointPattern,
    Property1,
    Property2,
    TripleCover,
    Density,
    Proximal,
    Recurrent,
    Invariant,
    Scrambled,
    OutsideHomeo,
    Transitive,
}

impl Claim {
    pub const ALL: [Claim; 12] = [
        Claim::WellDefined,
        Claim::FixedPointPattern,
        Claim::Property1,
        Claim::Property2,
        Claim::TripleCover,
        Claim::Density,
        Claim::Proximal,
        Claim::Recurrent,
        Claim::Invariant,
        Claim::Scrambled,
        Claim::OutsideHomeo,
        Claim::Transitive,
    ];

    /// The checks behind the headline result, in the order it states them:
    /// homeomorphism off the input, Cantor structure, proximality,
    /// recurrence, invariance, density and transitivity.
    pub const SUITE: [Claim; 7] = [
        Claim::OutsideHomeo,
        Claim::TripleCover,
        Claim::Proximal,
        Claim::Recurrent,
        Claim::Invariant,
        Claim::Density,
        Claim::Transitive,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Claim::WellDefined => "well-defined",
            Claim::FixedPointPattern => "fixed-point-pattern",
            Claim::Property1 => "property1",
            Claim::Property2 => "property2",
            Claim::TripleCover => "triple-cover",
            Claim::Density => "density",
            Claim::Proximal => "proximal",
            Claim::Recurrent => "recurrent",
            Claim::Invariant => "invariant",
            Claim::Scrambled => "scrambled",
            Claim::OutsideHomeo => "outside-homeo",
            Claim::Transitive => "transitive",
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Claim {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Claim::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown claim `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Cost {
    pub elapsed: Duration,
    pub nodes: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessReport {
    pub claim: Claim,
    /// Resolution level.
    pub level: usize,
    pub mode: ScheduleMode,
    pub verdict: Verdict,
    pub witnesses: Vec<(String, BigInt)>,
    /// Human-readable reasons for a fail verdict. Not serialized.
    pub failures: Vec<String>,
    /// Not serialized.
    pub cost: Cost,
}

impl WitnessReport {
    pub fn new(claim: Claim, level: usize, mode: ScheduleMode) -> Self {
        WitnessReport {
            claim,
            level,
            mode,
            verdict: Verdict::Pass,
            witnesses: Vec::new(),
            failures: Vec::new(),
            cost: Cost::default(),
        }
    }

    pub fn witness(&mut self, key: impl Into<String>, value: impl Into<BigInt>) {
        let key = key.into();
        debug_assert!(!key.contains(['=', ' ', '\n']), "bad witness key {key:?}");
        self.witnesses.push((key, value.into()));
    }

    pub fn param(&mut self, key: &str, value: impl Into<BigInt>) {
        self.witness(format!("param.{key}"), value);
    }

    pub fn get(&self, key: &str) -> Option<&BigInt> {
        self.witnesses.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn fail(&mut self, reason: impl Into<String>) {
        self.failures.push(reason.into());
        self.verdict = Verdict::Fail;
    }

    /// Sets the verdict from the failure list.
    pub fn finish(&mut self) {
        self.verdict = if self.failures.is_empty() { Verdict::Pass } else { Verdict::Fail };
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = |line: usize, what: &str| Error::Precondition(format!("report line {line}: {what}"));
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| bad(1, "empty report"))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 8
            || parts[0] != "CLAIM"
            || parts[2] != "LEVEL"
            || parts[4] != "VERDICT"
            || parts[6] != "MODE"
        {
            return Err(bad(1, "malformed header"));
        }
        let claim: Claim = parts[1].parse()?;
        let level: usize = parts[3].parse().map_err(|_| bad(1, "bad level"))?;
        let verdict = match parts[5] {
            "pass" => Verdict::Pass,
            "fail" => Verdict::Fail,
            _ => return Err(bad(1, "bad verdict")),
        };
        let mode: ScheduleMode = parts[7].parse()?;
        let mut r = WitnessReport::new(claim, level, mode);
        r.verdict = verdict;
        for (i, line) in lines {
            let body = line.strip_prefix("WITNESS ").ok_or_else(|| bad(i + 1, "expected WITNESS"))?;
            let (k, v) = body.split_once('=').ok_or_else(|| bad(i + 1, "expected key=value"))?;
            let v: BigInt = v.parse().map_err(|_| bad(i + 1, "value is not a decimal integer"))?;
            r.witnesses.push((k.to_string(), v));
        }
        Ok(r)
    }
}

impl fmt::Display for WitnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CLAIM {} LEVEL {} VERDICT {} MODE {}",
            self.claim,
            self.level,
            self.verdict.as_str(),
            self.mode.as_str()
        )?;
        for (k, v) in &self.witnesses {
            write!(f, "\nWITNESS {k}={v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn text_form() {
        let mut r = WitnessReport::new(Claim::Property2, 1, ScheduleMode::Relaxed);
        r.witness("t_left", -3);
        r.witness("t_right", 3);
        assert_eq!(
            r.to_text(),
            "CLAIM property2 LEVEL 1 VERDICT pass MODE relaxed\nWITNESS t_left=-3\nWITNESS t_right=3"
        );
    }

    #[test]
    fn big_values_are_exact() {
        let mut r = WitnessReport::new(Claim::Property1, 4, ScheduleMode::Strict);
        let v: BigInt = BigInt::from(5).pow(250) * -2;
        r.witness("t", v.clone());
        let text = r.to_text();
        assert_eq!(WitnessReport::parse(&text).unwrap().get("t"), Some(&v));
    }

    #[test]
    fn claims_parse() {
        for c in Claim::ALL {
            assert_eq!(c.id().parse::<Claim>().unwrap(), c);
        }
        assert!("all".parse::<Claim>().is_err());
    }

    proptest! {
        #[test]
        fn round_trip(vals in proptest::collection::vec((any::<i128>(), "[a-z][a-z0-9_.:-]{0,12}"), 0..8),
                      level in 0usize..300, strict in any::<bool>(), pass in any::<bool>()) {
            let mode = if strict { ScheduleMode::Strict } else { ScheduleMode::Relaxed };
            let mut r = WitnessReport::new(Claim::Transitive, level, mode);
            for (v, k) in &vals {
                r.witness(k.clone(), *v);
            }
            if !pass {
                r.verdict = Verdict::Fail;
            }
            prop_assert_eq!(WitnessReport::parse(&r.to_text()).unwrap(), r);
        }
    }
}
