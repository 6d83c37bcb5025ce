use std::fmt::Write as _;
use std::fs;
use std::sync::Arc;

use num_bigint::BigUint;

use chaosembed_core::embed::{build_embedding_with, EmbedConfig};
use chaosembed_core::verify::{self, Sampling, Stages};
use chaosembed_core::{
    validate_covering, verify_construction, verify_outside_bidirectional, Address, Claim, CoveringSequence,
    CyclicOdometer, Error, ExplicitProvider, LevelProvider, PathId, ScheduleMode, Tower, WitnessReport,
};

use crate::args::{BuildArgs, ClaimArg, Generator, Input, Lengths, ScheduleArgs, SimulateArgs, ValidateArgs, VerifyArgs};
use crate::{covfile, dot};

pub const PASS: u8 = 0;
pub const FAIL: u8 = 1;
pub const USAGE: u8 = 2;
pub const LIMIT: u8 = 3;

/// What a command printed and how it exits.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub status: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn out(&mut self, line: impl AsRef<str>) {
        self.stdout.push_str(line.as_ref());
        self.stdout.push('\n');
    }

    fn err(&mut self, line: impl AsRef<str>) {
        self.stderr.push_str(line.as_ref());
        self.stderr.push('\n');
    }

    fn worsen(&mut self, status: u8) {
        self.status = self.status.max(status);
    }

    /// Records `e` and returns `self` for early exit.
    fn error(mut self, e: &Error) -> Self {
        self.err(format!("error: {e}"));
        self.worsen(status_of(e));
        self
    }
}

pub fn status_of(e: &Error) -> u8 {
    if e.is_resource_limit() {
        return LIMIT;
    }
    match e {
        Error::Precondition(_)
        | Error::UnknownVertex { .. }
        | Error::IndexOutOfRange { .. }
        | Error::LevelMismatch { .. }
        | Error::InsufficientDepth { .. } => USAGE,
        _ => FAIL,
    }
}

fn generator(g: Generator) -> CyclicOdometer {
    match g {
        Generator::FixedPoint => CyclicOdometer::fixed_point(),
        Generator::Odometer => CyclicOdometer::binary(),
    }
}

fn read_file(input: &Input, o: &mut Outcome) -> Option<CoveringSequence> {
    let path = input.file.as_ref()?;
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            o.err(format!("error: {}: {e}", path.display()));
            o.worsen(USAGE);
            return None;
        }
    };
    match covfile::parse(&text) {
        Ok(seq) => Some(seq),
        Err(e) => {
            o.err(format!("error: {}: {e}", path.display()));
            o.worsen(USAGE);
            None
        }
    }
}

fn provider(input: &Input, o: &mut Outcome) -> Option<Arc<dyn LevelProvider>> {
    if let Some(g) = input.generator {
        return Some(Arc::new(generator(g)));
    }
    let seq = read_file(input, o)?;
    match ExplicitProvider::new(seq) {
        Ok(p) => Some(Arc::new(p)),
        Err(e) => {
            *o = std::mem::take(o).error(&e);
            None
        }
    }
}

fn tower(p: Arc<dyn LevelProvider>, lengths: &Lengths) -> Tower {
    Tower::with_lengths(p, lengths.l11 as usize, lengths.l21 as usize)
}

pub fn validate(args: &ValidateArgs) -> Outcome {
    let mut o = Outcome::default();
    let seq = match args.input.generator {
        Some(g) => match generator(g).materialize(args.levels) {
            Ok(seq) => seq,
            Err(e) => return o.error(&e),
        },
        None => match read_file(&args.input, &mut o) {
            Some(seq) => seq,
            None => return o,
        },
    };
    let report = validate_covering(&seq);
    o.out(report.to_string());
    for f in report.failures() {
        o.err(format!("FAIL {f}"));
    }
    o.out(format!("CHAIN TRANSITIVE: {}", if report.chain_transitive { "yes" } else { "no" }));
    if !report.is_ok() || !report.chain_transitive {
        o.worsen(FAIL);
    }
    o
}

pub fn build(args: &BuildArgs) -> Outcome {
    let mut o = Outcome::default();
    let Some(p) = provider(&args.input, &mut o) else { return o };
    let config = EmbedConfig {
        l11: args.lengths.l11 as usize,
        l21: args.lengths.l21 as usize,
        budget: args.budget,
        sabotage: None,
    };
    let e = match build_embedding_with(p, args.levels, config) {
        Ok(e) => e,
        Err(e) => return o.error(&e),
    };
    for lv in e.levels() {
        let (l1, l2) = lv.path_lengths();
        let mut line = format!("level {} vertices={} edges={}", lv.level, lv.graph.vertex_count(), lv.graph.edge_count());
        if lv.level > 0 {
            write!(line, " f_vertices={} l1={l1} l2={l2}", lv.f_graph.vertex_count()).unwrap();
        }
        o.out(line);
    }
    let table = |pick: fn((usize, usize)) -> usize| {
        e.levels()[1..].iter().map(|lv| pick(lv.path_lengths()).to_string()).collect::<Vec<_>>().join(" ")
    };
    o.out(format!("l1: {}", table(|l| l.0)));
    o.out(format!("l2: {}", table(|l| l.1)));
    if let Some(dir) = &args.dot {
        if let Err(err) = fs::create_dir_all(dir) {
            o.err(format!("error: {}: {err}", dir.display()));
            o.worsen(USAGE);
            return o;
        }
        for lv in e.levels() {
            let path = dir.join(format!("level_{}.dot", lv.level));
            if let Err(err) = fs::write(&path, dot::level_to_dot(lv)) {
                o.err(format!("error: {}: {err}", path.display()));
                o.worsen(USAGE);
                return o;
            }
        }
    }
    let report = verify_construction(&e);
    emit(&mut o, &report);
    o
}

fn emit(o: &mut Outcome, r: &WitnessReport) {
    if !o.stdout.is_empty() {
        o.stdout.push('\n');
    }
    o.out(r.to_text());
    for f in &r.failures {
        o.err(format!("FAIL {}: {f}", r.claim));
    }
    o.err(format!("cost {}: {:.3} ms, {} nodes", r.claim, r.cost.elapsed.as_secs_f64() * 1e3, r.cost.nodes));
    if !r.passed() {
        o.worsen(FAIL);
    }
}

struct VerifyContext<'a> {
    args: &'a VerifyArgs,
    provider: Arc<dyn LevelProvider>,
    tower: Tower,
}

impl VerifyContext<'_> {
    fn n(&self) -> usize {
        self.args.n.unwrap_or(self.args.n0)
    }

    fn stages(&self, kmax: usize) -> Result<Stages, Error> {
        Stages::compute(&self.tower, self.args.n0, kmax, self.args.mode)
    }

    fn pair(&self) -> Result<(usize, usize), Error> {
        let n = self.n();
        let m = match (self.args.m, self.args.mode) {
            (Some(m), _) => m,
            (None, ScheduleMode::Relaxed) => n + 1,
            (None, ScheduleMode::Strict) => {
                let l1 = self.tower.path_length(n, PathId::First)?;
                let m = BigUint::from(n) + l1 + 1u32;
                usize::try_from(&m).map_err(|_| Error::LevelOutOfReach(m.clone()))?
            }
        };
        Ok((m, n))
    }

    fn run(&self, claim: Claim) -> Result<WitnessReport, Error> {
        let a = self.args;
        let t = &self.tower;
        let sampling = Sampling { extra: a.samples, seed: a.seed };
        match claim {
            Claim::WellDefined | Claim::OutsideHomeo => {
                let levels = self.provider.depth().map_or(a.levels, |d| d.min(a.levels));
                let config = EmbedConfig { l11: a.lengths.l11 as usize, l21: a.lengths.l21 as usize, ..EmbedConfig::default() };
                let e = build_embedding_with(Arc::clone(&self.provider), levels, config)?;
                Ok(if claim == Claim::WellDefined {
                    verify_construction(&e)
                } else {
                    verify_outside_bidirectional(&e, levels)
                })
            }
            Claim::FixedPointPattern => {
                let n = a.n.unwrap_or(1);
                verify::verify_fixed_point_pattern(t, a.m.unwrap_or(n + 2), n)
            }
            Claim::Property1 => {
                let (m, n) = self.pair()?;
                verify::verify_property1(t, m, n, a.mode)
            }
            Claim::Property2 => {
                let (m, n) = self.pair()?;
                verify::verify_property2(t, m, n, a.mode)
            }
            Claim::TripleCover => verify::verify_triple_cover(t, &self.stages(a.k + 1)?, a.k),
            Claim::Density => verify::verify_density(t, &self.stages(a.k + 1)?, a.k),
            Claim::Proximal => verify::proximality_witness(t, &self.stages(a.k)?, a.big_n, a.k, self.n(), sampling),
            Claim::Recurrent => verify::recurrence_witness(t, &self.stages(a.k)?, a.big_n, a.k, self.n(), sampling),
            Claim::Invariant => verify::verify_invariance(t, &self.stages(a.k + 1)?, a.big_n, a.k),
            Claim::Scrambled => {
                let (level, x, y) = verify::stage_points(t, &self.stages(a.k)?, a.k)?;
                verify::scrambled_pair_witness(t, level, &x, &y, self.n(), None, a.mode)
            }
            Claim::Transitive => {
                let (level, x, _) = verify::stage_points(t, &self.stages(a.k)?, a.k)?;
                verify::transitivity_witness(t, level, &x, self.n(), a.mode)
            }
        }
    }
}

pub fn verify(args: &VerifyArgs) -> Outcome {
    let mut o = Outcome::default();
    let Some(p) = provider(&args.input, &mut o) else { return o };
    let ctx = VerifyContext { args, tower: tower(Arc::clone(&p), &args.lengths), provider: p };
    let claims: Vec<Claim> = match args.claim {
        ClaimArg::All => Claim::SUITE.to_vec(),
        ClaimArg::One(c) => vec![c],
    };
    for claim in claims {
        match ctx.run(claim) {
            Ok(r) => emit(&mut o, &r),
            Err(e) => {
                o.err(format!("error: {claim}: {e}"));
                o.worsen(status_of(&e));
            }
        }
    }
    o
}

pub fn schedule(args: &ScheduleArgs) -> Outcome {
    let mut o = Outcome::default();
    let Some(p) = provider(&args.input, &mut o) else { return o };
    let t = tower(p, &args.lengths);
    for mode in [ScheduleMode::Strict, ScheduleMode::Relaxed] {
        // Stages are computed one at a time so the reachable prefix is shown
        // even when a later stage is out of reach.
        let mut pairs = Vec::new();
        let mut stop = None;
        for k in 1..=args.k {
            match t.schedule(args.n0, k, mode) {
                Ok(s) => pairs = s,
                Err(e) => {
                    stop = Some((k, e));
                    break;
                }
            }
        }
        let summary: Vec<String> = pairs.iter().map(|p| format!("({},{})", p.n, p.m)).collect();
        o.out(format!("{} {}", mode.as_str(), summary.join(" ")));
        for (k, p) in pairs.iter().enumerate() {
            let l1 = usize::try_from(&p.n)
                .ok()
                .and_then(|n| t.path_length(n, PathId::First).ok())
                .map_or_else(|| "?".to_string(), |l| l.to_string());
            o.out(format!("  k={} n={} m={} l1={l1}", k + 1, p.n, p.m));
        }
        if let Some((k, e)) = stop {
            o.err(format!("error: {} stage {k}: {e}", mode.as_str()));
            o.worsen(status_of(&e));
        }
    }
    o
}

pub fn simulate(args: &SimulateArgs) -> Outcome {
    let mut o = Outcome::default();
    if args.depth < args.steps {
        o.err(format!("error: depth {} is smaller than steps {}", args.depth, args.steps));
        o.worsen(USAGE);
        return o;
    }
    let Some(p) = provider(&args.input, &mut o) else { return o };
    let t = tower(p, &args.lengths);
    let run = || -> Result<Vec<String>, Error> {
        let top = Address::parse(args.depth, &args.thread)?;
        let prefix = t.thread(&top)?;
        (0..=args.steps).map(|s| Ok(format!("t={s} {}", t.push_forward(&prefix, s)?))).collect()
    };
    match run() {
        Ok(lines) => lines.iter().for_each(|l| o.out(l)),
        Err(e) => return o.error(&e),
    }
    o
}
