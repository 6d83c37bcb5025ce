//! Finite-resolution checks of the chaotic-set structure.
//!
//! Points are positions on the first connector path of some level `M`; a
//! time shift by `t` moves position `x` to `x + t`, which is exact while the
//! shifted position stays on the path. Resolution `n` means comparing the
//! level-`n` coordinates of points.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::address::{Address, PathId, ScheduleMode, Tower};
use crate::error::{Error, Result};
use crate::fault::Fault;
use crate::verify::cantor::{CantorApprox, Stages};
use crate::verify::report::{Claim, Cost, WitnessReport};

/// Longest window a checker will walk position by position.
pub const SCAN_CAP: usize = 4_000_000;

/// Explicit vertex budget for level enumeration.
pub const LEVEL_BUDGET: usize = 200_000;

fn small(x: &BigUint, what: &str) -> Result<usize> {
    x.to_usize()
        .filter(|&v| v <= SCAN_CAP)
        .ok_or_else(|| Error::Precondition(format!("{what} of {x} is too long to scan")))
}

fn signed(x: &BigUint) -> BigInt {
    BigInt::from(x.clone())
}

/// Position `x + t` on `p_{1,level}` if it stays on the path.
fn shifted(tower: &Tower, level: usize, x: &BigUint, t: &BigInt) -> Result<Option<BigUint>> {
    let y = signed(x) + t;
    if y < BigInt::zero() {
        return Ok(None);
    }
    let y = y.to_biguint().expect("non-negative");
    let len = tower.path_length(level, PathId::First)?;
    Ok((y <= len).then_some(y))
}

struct Decoder<'t> {
    tower: &'t Tower,
    level: usize,
    target: usize,
    visited: u64,
}

impl<'t> Decoder<'t> {
    fn new(tower: &'t Tower, level: usize, target: usize) -> Self {
        Decoder { tower, level, target, visited: 0 }
    }

    fn at(&mut self, x: &BigUint) -> Result<Address> {
        self.visited += 1;
        self.tower.decode(&self.tower.path_point(self.level, x)?, self.target)
    }

    fn at_shift(&mut self, x: &BigUint, t: &BigInt) -> Result<Option<Address>> {
        match shifted(self.tower, self.level, x, t)? {
            Some(y) => self.at(&y).map(Some),
            None => Ok(None),
        }
    }
}

fn show(a: &Option<Address>) -> String {
    a.as_ref().map_or_else(|| "off the path".to_string(), Address::to_string)
}

fn done(mut r: WitnessReport, started: Instant, nodes: u64) -> WitnessReport {
    r.cost = Cost { elapsed: started.elapsed(), nodes };
    r.finish();
    r
}

/// `φ_{m,n}(p_{1,m})` starts with `m - n` hub loops followed by `p_{1,n}`,
/// and the junction `p_{2,m} p_{1,m}` maps onto `p_{2,n}`, `2(m - n)` hub
/// loops, then `p_{1,n}`. When `m - n >= 2` the same holds around the last
/// junction inside the image of `p_{1,m}`.
pub fn verify_fixed_point_pattern(tower: &Tower, m: usize, n: usize) -> Result<WitnessReport> {
    if n == 0 || m <= n {
        return Err(Error::Precondition(format!("pattern needs 1 <= n < m, got ({m}, {n})")));
    }
    let started = Instant::now();
    let mut r = WitnessReport::new(Claim::FixedPointPattern, n, ScheduleMode::Relaxed);
    r.param("m", m);
    r.param("n", n);
    let d = m - n;
    let (l1n, l2n) = tower.path_lengths(n)?;
    let (l1n, l2n) = (small(&l1n, "path length")?, small(&l2n, "path length")?);
    let l2m = tower.path_length(m, PathId::Second)?;
    let mut visited = 0u64;

    let mut expect = |r: &mut WitnessReport, path: PathId, x: BigUint, want: Address, what: &str| -> Result<()> {
        visited += 1;
        let got = tower.decode(&tower.normalize(&Address::on_path(m, path, x.clone()))?, n)?;
        if got != want {
            r.fail(format!("{what}: p{}:{x} decodes to {got}, expected {want}", path.number()));
        }
        Ok(())
    };
    let hub = Address::hub(n);
    let p1 = |j: usize| tower.normalize(&Address::on_path(n, PathId::First, j));
    let p2 = |j: usize| tower.normalize(&Address::on_path(n, PathId::Second, j));

    for j in 0..=d {
        expect(&mut r, PathId::First, BigUint::from(j), hub.clone(), "prefix")?;
    }
    for j in 0..=l1n {
        expect(&mut r, PathId::First, BigUint::from(d + j), p1(j)?, "prefix")?;
    }
    for j in 0..=d {
        expect(&mut r, PathId::Second, &l2m - j, hub.clone(), "junction")?;
    }
    for j in 0..=l2n {
        expect(&mut r, PathId::Second, &l2m - (d + j), p2(l2n - j)?, "junction")?;
    }
    r.witness("prefix.hubs", d);
    r.witness("junction.block", 2 * d);

    if d >= 2 {
        let copies = tower.first_path_copies(m - 1)?;
        let s = copies.last().expect("at least one copy").clone();
        let h = d - 1;
        for j in 0..=h {
            expect(&mut r, PathId::First, &s + j, hub.clone(), "inner junction")?;
            expect(&mut r, PathId::First, &s - j, hub.clone(), "inner junction")?;
        }
        for j in 0..=l1n {
            expect(&mut r, PathId::First, &s + (h + j), p1(j)?, "inner junction")?;
        }
        for j in 0..=l2n {
            expect(&mut r, PathId::First, &s - (h + j), p2(l2n - j)?, "inner junction")?;
        }
        r.witness("inner.start", s);
        r.witness("inner.block", 2 * h);
    }
    Ok(done(r, started, visited))
}

/// Length in edges of the maximal hub run containing the window
/// `[start, start + width]` at resolution `n`, scanning at most `reach`
/// positions beyond either end. `None` if the window itself leaves the hub.
fn hub_run(
    dec: &mut Decoder<'_>,
    start: &BigUint,
    width: usize,
    reach: usize,
) -> Result<Option<usize>> {
    let len = dec.tower.path_length(dec.level, PathId::First)?;
    for j in 0..=width {
        if !dec.at(&(start + j))?.is_hub() {
            return Ok(None);
        }
    }
    let mut left = 0;
    while left < reach && start > &BigUint::from(left) && dec.at(&(start - (left + 1)))?.is_hub() {
        left += 1;
    }
    let mut right = 0;
    let end = start + width;
    while right < reach && end.clone() + (right + 1) <= len && dec.at(&(&end + (right + 1)))?.is_hub() {
        right += 1;
    }
    Ok(Some(left + width + right))
}

fn strict_precondition(tower: &Tower, m: usize, n: usize) -> Result<()> {
    let l1 = tower.path_length(n, PathId::First)?;
    if BigUint::from(m) <= BigUint::from(n) + l1 {
        return Err(Error::Precondition(format!("strict mode needs m > n + l_1 at ({m}, {n})")));
    }
    Ok(())
}

/// The `q_m` window can be translated left and right onto stretches where
/// every position decodes to the hub at level `n`.
///
/// The left translation lands on the hub loops at the start of `p_{1,m}`,
/// the right one on the hub block around the last junction inside it. In
/// strict mode the surrounding hub run must also be at least `m - n` long.
pub fn verify_property1(tower: &Tower, m: usize, n: usize, mode: ScheduleMode) -> Result<WitnessReport> {
    if mode == ScheduleMode::Strict {
        strict_precondition(tower, m, n)?;
    }
    let started = Instant::now();
    let mut r = WitnessReport::new(Claim::Property1, n, mode);
    r.param("m", m);
    r.param("n", n);
    let (lo, hi) = tower.q_interval(m, n)?;
    r.witness("q.lo", lo.clone());
    r.witness("q.hi", hi.clone());
    let width = small(&(&hi - &lo), "window")?;
    let reach = 4 * (m - n) + 4;
    let mut dec = Decoder::new(tower, m, n);

    let copies = tower.first_path_copies(m - 1)?;
    let junction = copies.last().expect("at least one copy");
    let half = m - 1 - n;
    let mut candidates = vec![("left", BigUint::zero())];
    if junction >= &BigUint::from(half) {
        candidates.push(("right", junction - half));
    }
    for (side, start) in &candidates {
        let t = signed(start) - signed(&lo);
        match hub_run(&mut dec, start, width, reach)? {
            Some(block) => {
                r.witness(format!("t_{side}"), t);
                r.witness(format!("{side}.block"), block);
                if mode == ScheduleMode::Strict && block < m - n {
                    r.fail(format!("{side} hub run has {block} edges, fewer than m - n = {}", m - n));
                }
            }
            None => r.fail(format!("{side} translation by {t} does not land on hubs")),
        }
    }
    if candidates.len() < 2 {
        r.fail("no right translation exists");
    }
    let visited = dec.visited;
    Ok(done(r, started, visited))
}

/// The `q_m` window can be translated left and right onto other copies of
/// `p_{1,n}`: each translated window decodes position by position onto
/// `p_{1,n}`. The translations are the spacings between the copies of
/// `p_{1,m-1}` inside `p_{1,m}`.
pub fn verify_property2(tower: &Tower, m: usize, n: usize, mode: ScheduleMode) -> Result<WitnessReport> {
    if mode == ScheduleMode::Strict {
        strict_precondition(tower, m, n)?;
    }
    let started = Instant::now();
    let mut r = WitnessReport::new(Claim::Property2, n, mode);
    r.param("m", m);
    r.param("n", n);
    let (lo, hi) = tower.q_interval(m, n)?;
    let width = small(&(&hi - &lo), "window")?;
    let target: Vec<Address> =
        (0..=width).map(|j| tower.path_point(n, &BigUint::from(j))).collect::<Result<_>>()?;
    let copies = tower.first_path_copies(m - 1)?;
    let mid = copies.len() / 2;
    let mut dec = Decoder::new(tower, m, n);
    let mut magnitudes = Vec::new();
    for (side, other) in [("left", mid.checked_sub(1)), ("right", Some(mid + 1))] {
        let Some(other) = other.filter(|&i| i < copies.len()) else {
            r.fail(format!("no {side} copy of p_1 at level {}", m - 1));
            continue;
        };
        let t = signed(&copies[other]) - signed(&copies[mid]);
        let mut seen = BTreeSet::new();
        let mut ok = true;
        for (j, want) in target.iter().enumerate() {
            let got = dec.at_shift(&(&lo + j), &t)?;
            if got.as_ref() != Some(want) {
                r.fail(format!("{side} translation {t}: offset {j} decodes to {}, expected {want}", show(&got)));
                ok = false;
                break;
            }
            seen.insert(want.clone());
        }
        if ok && seen.len() != target.len() {
            r.fail(format!("{side} translation {t}: image repeats a vertex"));
        }
        magnitudes.push(t.magnitude().clone());
        r.witness(format!("t_{side}"), t);
    }
    if let Some(min) = magnitudes.iter().min() {
        r.witness("magnitude", min.clone());
    }
    let visited = dec.visited;
    Ok(done(r, started, visited))
}

/// The window of `q_{m(k+1)}` contains exactly three disjoint sub-windows
/// that decode onto `q_{m(k)}` position by position.
pub fn verify_triple_cover(tower: &Tower, stages: &Stages, k: usize) -> Result<WitnessReport> {
    let started = Instant::now();
    let (n0, m0) = stages.stage(k)?;
    let (n1, m1) = stages.stage(k + 1)?;
    let mut r = WitnessReport::new(Claim::TripleCover, m0, stages.mode);
    r.param("n0", stages.n0);
    r.param("k", k);
    let (qlo, qhi) = tower.q_interval(m0, n0)?;
    let (wlo, whi) = tower.q_interval(m1, n1)?;
    let width = small(&(&qhi - &qlo), "window")?;
    let span = small(&(&whi - &wlo), "window")?;
    let target: Vec<Address> =
        (0..=width).map(|j| tower.path_point(m0, &(&qlo + j))).collect::<Result<_>>()?;
    let mut dec = Decoder::new(tower, m1, m0);
    let decoded: Vec<Address> = (0..=span).map(|j| dec.at(&(&wlo + j))).collect::<Result<_>>()?;
    let hits: Vec<usize> = (0..decoded.len().saturating_sub(width))
        .filter(|&i| decoded[i..=i + width] == target[..])
        .collect();
    for (idx, &i) in hits.iter().enumerate() {
        r.witness(format!("interval.{}.lo", idx + 1), &wlo + i);
        r.witness(format!("interval.{}.hi", idx + 1), &wlo + i + width);
    }
    r.witness("count", hits.len());
    if hits.len() != 3 {
        r.fail(format!("q window at level {m1} covers q at level {m0} {} times", hits.len()));
    }
    if hits.windows(2).any(|w| w[1] <= w[0] + width) {
        r.fail("covering sub-windows overlap");
    }
    let visited = dec.visited;
    Ok(done(r, started, visited))
}

/// The `q_{m(k+1)}` window decodes onto every vertex of `G_{m(k)}`.
pub fn verify_density(tower: &Tower, stages: &Stages, k: usize) -> Result<WitnessReport> {
    let started = Instant::now();
    let (_, m0) = stages.stage(k)?;
    let (n1, m1) = stages.stage(k + 1)?;
    let mut r = WitnessReport::new(Claim::Density, m0, stages.mode);
    r.param("n0", stages.n0);
    r.param("k", k);
    let all = tower.enumerate_level(m0, LEVEL_BUDGET)?;
    let (wlo, whi) = tower.q_interval(m1, n1)?;
    let span = small(&(&whi - &wlo), "window")?;
    let mut dec = Decoder::new(tower, m1, m0);
    let mut first: BTreeMap<Address, BigUint> = BTreeMap::new();
    for j in 0..=span {
        let x = &wlo + j;
        let a = dec.at(&x)?;
        first.entry(a).or_insert(x);
    }
    let mut missed = 0;
    for v in &all {
        match first.get(v) {
            Some(x) => r.witness(format!("hit.{v}"), x.clone()),
            None => {
                missed += 1;
                if missed <= 10 {
                    r.fail(format!("vertex {v} of G_{m0} is never hit"));
                }
            }
        }
    }
    if missed > 10 {
        r.fail(format!("{} more vertices are never hit", missed - 10));
    }
    r.witness("vertices", all.len());
    let visited = dec.visited;
    Ok(done(r, started, visited))
}

/// Parameters shared by the sample-based checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sampling {
    pub extra: usize,
    pub seed: u64,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling { extra: 16, seed: 0 }
    }
}

fn sample_report(
    claim: Claim,
    stages: &Stages,
    big_n: usize,
    k: usize,
    n: usize,
    sampling: Sampling,
) -> WitnessReport {
    let mut r = WitnessReport::new(claim, n, stages.mode);
    r.param("n0", stages.n0);
    r.param("N", big_n);
    r.param("k", k);
    r.param("samples", sampling.extra);
    r.param("seed", sampling.seed);
    r
}

/// All sampled points of the stage-`k` approximation of `C_N` are at the
/// hub at level `n` simultaneously, at some positive and some negative time.
pub fn proximality_witness(
    tower: &Tower,
    stages: &Stages,
    big_n: usize,
    k: usize,
    n: usize,
    sampling: Sampling,
) -> Result<WitnessReport> {
    let started = Instant::now();
    let approx = CantorApprox::build(tower, stages, big_n, k)?;
    let level = approx.level;
    if n == 0 || n >= level {
        return Err(Error::Precondition(format!("resolution {n} must lie in 1..{level}")));
    }
    let mut r = sample_report(Claim::Proximal, stages, big_n, k, n, sampling);
    let points = approx.samples(sampling.extra, sampling.seed);
    r.witness("points", points.len());
    let first = points.first().expect("samples are non-empty");
    let copies = tower.first_path_copies(level - 1)?;
    let junction = copies.last().expect("at least one copy");
    let half = BigUint::from(level - 1 - n);
    let candidates = [
        ("t_minus", -signed(first)),
        ("t_plus", signed(junction) - signed(&half) - signed(first)),
    ];
    let mut dec = Decoder::new(tower, level, n);
    for (key, t) in candidates {
        let sign_ok = if key == "t_plus" { t > BigInt::zero() } else { t < BigInt::zero() };
        if !sign_ok {
            r.fail(format!("{key} candidate {t} has the wrong sign"));
            continue;
        }
        let mut bad = None;
        for x in &points {
            match dec.at_shift(x, &t)? {
                Some(a) if a.is_hub() => {}
                other => {
                    bad = Some((x.clone(), other));
                    break;
                }
            }
        }
        match bad {
            None => r.witness(key, t),
            Some((x, got)) => r.fail(format!("at time {t} point {x} is at {}, not at the hub", show(&got))),
        }
    }
    let visited = dec.visited;
    Ok(done(r, started, visited))
}

/// All sampled points return to their own level-`n` vertex at common
/// positive and negative times, and at a second, larger pair of times.
pub fn recurrence_witness(
    tower: &Tower,
    stages: &Stages,
    big_n: usize,
    k: usize,
    n: usize,
    sampling: Sampling,
) -> Result<WitnessReport> {
    let started = Instant::now();
    let approx = CantorApprox::build(tower, stages, big_n, k)?;
    let level = approx.level;
    if n == 0 || n >= level {
        return Err(Error::Precondition(format!("resolution {n} must lie in 1..{level}")));
    }
    let mut r = sample_report(Claim::Recurrent, stages, big_n, k, n, sampling);
    let points = approx.samples(sampling.extra, sampling.seed);
    let spacing = |lvl: usize| -> Result<Option<(BigInt, BigInt)>> {
        let c = tower.first_path_copies(lvl)?;
        let mid = c.len() / 2;
        if mid == 0 || mid + 1 >= c.len() {
            return Ok(None);
        }
        Ok(Some((signed(&c[mid + 1]) - signed(&c[mid]), signed(&c[mid - 1]) - signed(&c[mid]))))
    };
    let mut times = Vec::new();
    match spacing(level - 1)? {
        Some((fwd, back)) => {
            times.push(("t_plus", fwd.clone()));
            times.push(("t_minus", back.clone()));
            let (n_k, _) = stages.stage(k)?;
            if level >= 2 + n_k.max(1) {
                if let Some((f2, b2)) = spacing(level - 2)? {
                    times.push(("t_plus_2", fwd + f2));
                    times.push(("t_minus_2", back + b2));
                }
            }
        }
        None => r.fail(format!("no return translation at level {}", level - 1)),
    }
    if times.len() == 2 {
        r.fail("no second, larger return time at this stage");
    }
    let mut dec = Decoder::new(tower, level, n);
    let home: Vec<Address> = points.iter().map(|x| dec.at(x)).collect::<Result<_>>()?;
    for (key, t) in times {
        let mut ok = true;
        for (x, want) in points.iter().zip(&home) {
            let got = dec.at_shift(x, &t)?;
            if got.as_ref() != Some(want) {
                r.fail(format!("at time {t} point {x} is at {}, expected {want}", show(&got)));
                ok = false;
                break;
            }
        }
        if ok {
            r.witness(key, t);
        }
    }
    let visited = dec.visited;
    Ok(done(r, started, visited))
}

/// Two distinct points of `p_{1,level}` are at the same level-`n` vertex at
/// some time and at different vertices at another, within `horizon` steps.
/// The default horizon is `4 l_{1,level}`.
pub fn scrambled_pair_witness(
    tower: &Tower,
    level: usize,
    a: &BigUint,
    b: &BigUint,
    n: usize,
    horizon: Option<BigUint>,
    mode: ScheduleMode,
) -> Result<WitnessReport> {
    if a == b {
        return Err(Error::Precondition("a scrambled pair needs two distinct points".into()));
    }
    let started = Instant::now();
    let len = tower.path_length(level, PathId::First)?;
    let horizon = horizon.unwrap_or_else(|| &len * 4u32);
    let mut r = WitnessReport::new(Claim::Scrambled, n, mode);
    r.param("level", level);
    r.param("a", a.clone());
    r.param("b", b.clone());
    r.param("horizon", horizon.clone());
    let mut dec = Decoder::new(tower, level, n);
    let (mut prox, mut sep) = (None, None);
    let mut t = BigUint::zero();
    let far = a.max(b);
    while t <= horizon && far + &t <= len && (prox.is_none() || sep.is_none()) {
        if dec.visited as usize > 2 * SCAN_CAP {
            break;
        }
        let (x, y) = (dec.at(&(a + &t))?, dec.at(&(b + &t))?);
        if x == y {
            prox.get_or_insert_with(|| t.clone());
        } else {
            sep.get_or_insert_with(|| t.clone());
        }
        t += 1u32;
    }
    match prox {
        Some(t) => r.witness("t_prox", t),
        None => r.fail("no time within the horizon brings the pair together"),
    }
    match sep {
        Some(t) => r.witness("t_sep", t),
        None => r.fail("no time within the horizon separates the pair"),
    }
    let visited = dec.visited;
    Ok(done(r, started, visited))
}

/// Shifting any point of the stage-`k` approximation by one step in either
/// direction keeps it inside a `q` window, and no position of the window is
/// a vertex of `F`.
///
/// Points interior to `q_{m(k)}` are shifted at level `m(k)`. The two edge
/// vertices of the window are lifted through the middle copy into
/// `q_{m(k+1)}`, where they are interior, and shifted there; `stages` must
/// therefore reach stage `k + 1`.
pub fn verify_invariance(tower: &Tower, stages: &Stages, big_n: usize, k: usize) -> Result<WitnessReport> {
    let started = Instant::now();
    let approx = CantorApprox::build(tower, stages, big_n, k)?;
    let level = approx.level;
    let (n_k, _) = stages.stage(k)?;
    let (n_next, m_next) = stages.stage(k + 1)?;
    let mut r = WitnessReport::new(Claim::Invariant, level, stages.mode);
    r.param("n0", stages.n0);
    r.param("N", big_n);
    r.param("k", k);
    let (qlo, qhi) = tower.q_interval(level, n_k)?;
    r.witness("q.lo", qlo.clone());
    r.witness("q.hi", qhi.clone());
    let (next_lo, next_hi) = tower.q_interval(m_next, n_next)?;
    let copies = tower.first_path_copies(level)?;
    let lift = &next_lo + &copies[copies.len() / 2];
    let defer = !tower.has_fault(&Fault::IgnoreInteriority);

    let mut checked = 0u64;
    let mut deferred = 0u64;
    let mut shift = |r: &mut WitnessReport, at: usize, x: &BigUint, lo: &BigUint, hi: &BigUint| -> Result<()> {
        let here = tower.path_point(at, x)?;
        for forward in [true, false] {
            checked += 1;
            let dir = if forward { "forward" } else { "backward" };
            if !forward && x.is_zero() {
                r.fail(format!("shifting p1:0 at level {at} {dir} leaves the path"));
                continue;
            }
            let next = if forward { x + 1u32 } else { x - 1u32 };
            let got = tower.step(&here, forward)?;
            let want = tower.path_point(at, &next)?;
            if next < *lo || next > *hi || got.len() != 1 || !got.contains(&want) {
                r.fail(format!("shifting p1:{x} at level {at} {dir} leaves the q window"));
            }
        }
        Ok(())
    };
    for (a, b) in &approx.cylinders {
        let mut x = a.clone();
        while &x <= b {
            let interior = x > qlo && x < qhi;
            if interior || !defer {
                shift(&mut r, level, &x, &qlo, &qhi)?;
            } else {
                deferred += 1;
                let y = &lift + &x;
                if y <= next_lo || y >= next_hi {
                    r.fail(format!("p1:{x} lifts to the edge of the next q window"));
                }
                shift(&mut r, m_next, &y, &next_lo, &next_hi)?;
            }
            x += 1u32;
        }
    }
    let width = small(&(&qhi - &qlo), "window")?;
    for j in 0..=width {
        let a = tower.path_point(level, &(&qlo + j))?;
        if a.is_in_f() {
            r.fail(format!("window position {} is the F vertex {a}", &qlo + j));
        }
    }
    r.witness("checked", checked);
    r.witness("deferred", deferred);
    Ok(done(r, started, checked))
}

/// Position `a` on `p_{1,level}` visits every vertex of `G_n` both forward
/// and backward in time. Witnesses are the first hitting times.
pub fn transitivity_witness(
    tower: &Tower,
    level: usize,
    a: &BigUint,
    n: usize,
    mode: ScheduleMode,
) -> Result<WitnessReport> {
    let started = Instant::now();
    let mut r = WitnessReport::new(Claim::Transitive, n, mode);
    r.param("level", level);
    r.param("a", a.clone());
    let all = tower.enumerate_level(n, LEVEL_BUDGET)?;
    let len = tower.path_length(level, PathId::First)?;
    let mut dec = Decoder::new(tower, level, n);
    for forward in [true, false] {
        let mut todo: BTreeSet<Address> = all.iter().cloned().collect();
        let mut hit: BTreeMap<Address, BigInt> = BTreeMap::new();
        let mut t = 0usize;
        loop {
            let x = if forward {
                let x = a + t;
                if x > len {
                    break;
                }
                x
            } else {
                if BigUint::from(t) > *a {
                    break;
                }
                a - t
            };
            if todo.is_empty() || t > SCAN_CAP {
                break;
            }
            let v = dec.at(&x)?;
            if todo.remove(&v) {
                let time = if forward { BigInt::from(t) } else { -BigInt::from(t) };
                hit.insert(v, time);
            }
            t += 1;
        }
        let dir = if forward { "fwd" } else { "bwd" };
        for v in &all {
            if let Some(time) = hit.get(v) {
                r.witness(format!("{dir}.{v}"), time.clone());
            }
        }
        for v in todo.iter().take(10) {
            r.fail(format!("{dir}: vertex {v} of G_{n} is never visited"));
        }
    }
    let visited = dec.visited;
    Ok(done(r, started, visited))
}

/// A stage-`k` sample point used as the base of scrambled-pair and
/// transitivity checks: the left end of the first cylinder, and a second
/// point one step to its right.
pub fn stage_points(tower: &Tower, stages: &Stages, k: usize) -> Result<(usize, BigUint, BigUint)> {
    let approx = CantorApprox::build(tower, stages, 1, k)?;
    let (a, b) = approx.cylinders[0].clone();
    let second = if b > a { &a + 1u32 } else { b };
    Ok((approx.level, a, second))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::CyclicOdometer;
    use std::sync::Arc;

    fn fixed() -> Tower {
        Tower::new(Arc::new(CyclicOdometer::fixed_point()))
    }

    fn odometer() -> Tower {
        Tower::new(Arc::new(CyclicOdometer::binary()))
    }

    fn faulty(base: fn() -> Tower, faults: Vec<Fault>) -> Tower {
        base().with_faults(faults)
    }

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn relaxed(t: &Tower, kmax: usize) -> Stages {
        Stages::compute(t, 1, kmax, ScheduleMode::Relaxed).unwrap()
    }

    #[test]
    fn property2_on_level_two_word() {
        let r = verify_property2(&fixed(), 2, 1, ScheduleMode::Relaxed).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.get("t_left"), Some(&int(-3)));
        assert_eq!(r.get("t_right"), Some(&int(3)));
    }

    #[test]
    fn property2_magnitudes_grow() {
        for t in [fixed(), odometer()] {
            let mags: Vec<BigInt> = (2..=5)
                .map(|m| verify_property2(&t, m, 1, ScheduleMode::Relaxed).unwrap().get("magnitude").unwrap().clone())
                .collect();
            assert!(mags.windows(2).all(|w| w[0] < w[1]), "{mags:?}");
        }
    }

    #[test]
    fn property1_strict_and_relaxed() {
        let t = fixed();
        let r = verify_property1(&t, 3, 1, ScheduleMode::Strict).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.get("t_left"), Some(&int(-24)));
        assert!(r.get("left.block").unwrap() >= &int(2));
        assert!(r.get("right.block").unwrap() >= &int(2));

        let r = verify_property1(&t, 2, 1, ScheduleMode::Relaxed).unwrap();
        assert_eq!(r.get("t_left"), Some(&int(-4)));
        // p_{1,2} has no hub edge to the right of q.
        assert!(!r.passed());

        assert!(matches!(verify_property1(&t, 2, 1, ScheduleMode::Strict), Err(Error::Precondition(_))));
    }

    #[test]
    fn pattern_holds_on_both_generators() {
        for t in [fixed(), odometer()] {
            for m in 2..=4 {
                for n in 1..m {
                    let r = verify_fixed_point_pattern(&t, m, n).unwrap();
                    assert!(r.passed(), "({m},{n}) {:?}", r.failures);
                }
            }
        }
    }

    #[test]
    fn cantor_checks_pass_at_first_stage() {
        for t in [fixed(), odometer()] {
            let s = relaxed(&t, 2);
            let r = verify_triple_cover(&t, &s, 1).unwrap();
            assert!(r.passed(), "{:?}", r.failures);
            assert_eq!(r.get("count"), Some(&int(3)));
            let r = verify_density(&t, &s, 1).unwrap();
            assert!(r.passed(), "{:?}", r.failures);
        }
    }

    #[test]
    fn witness_suite_passes_at_first_stage() {
        for t in [fixed(), odometer()] {
            let s = relaxed(&t, 1);
            let sampling = Sampling::default();
            for r in [
                proximality_witness(&t, &s, 1, 1, 1, sampling).unwrap(),
                recurrence_witness(&t, &s, 1, 1, 1, sampling).unwrap(),
                verify_invariance(&t, &relaxed(&t, 2), 1, 1).unwrap(),
            ] {
                assert!(r.passed(), "{}: {:?}", r.claim, r.failures);
            }
            let (level, a, b) = stage_points(&t, &s, 1).unwrap();
            let r = scrambled_pair_witness(&t, level, &a, &b, 1, None, ScheduleMode::Relaxed).unwrap();
            assert!(r.passed(), "{:?}", r.failures);
            for n in 1..level {
                let r = transitivity_witness(&t, level, &a, n, ScheduleMode::Relaxed).unwrap();
                assert!(r.passed(), "{:?}", r.failures);
                assert!(r.get("fwd.H").is_some() && r.get("bwd.H").is_some());
            }
        }
    }

    #[test]
    fn scrambled_pair_needs_two_points() {
        let t = fixed();
        let x = BigUint::from(3u32);
        assert!(scrambled_pair_witness(&t, 3, &x, &x, 1, None, ScheduleMode::Relaxed).is_err());
    }

    #[test]
    fn designed_faults_are_caught() {
        for base in [fixed as fn() -> Tower, odometer] {
            let s1 = relaxed(&base(), 2);
            let (_, m1) = s1.stage(1).unwrap();
            let sampling = Sampling::default();

            let t = faulty(base, vec![Fault::SegmentOffByOne { level: 1 }]);
            assert!(!verify_fixed_point_pattern(&t, 3, 1).unwrap().passed());

            let t = faulty(base, vec![Fault::NoLoopPadding { level: None }]);
            assert!(!verify_property1(&t, 3, 1, ScheduleMode::Relaxed).unwrap().passed());
            let s = relaxed(&t, 1);
            assert!(!proximality_witness(&t, &s, 1, 1, 1, sampling).unwrap().passed());

            let t = faulty(base, vec![Fault::SingleRepeat { level: None }]);
            assert!(!verify_property2(&t, 3, 1, ScheduleMode::Relaxed).unwrap().passed());
            let s = relaxed(&t, 2);
            assert!(!verify_triple_cover(&t, &s, 1).unwrap().passed());
            assert!(!recurrence_witness(&t, &s, 1, 1, 1, sampling).unwrap().passed());

            let t = faulty(base, vec![Fault::SkipConnector { level: m1 }]);
            assert!(!verify_density(&t, &relaxed(&t, 2), 1).unwrap().passed());

            // p_{2,1} has no interior, so the connector is dropped one level up.
            let t = faulty(base, vec![Fault::SkipConnector { level: 2 }]);
            let (level, a, _) = stage_points(&t, &relaxed(&t, 1), 1).unwrap();
            let r = transitivity_witness(&t, level, &a, 2, ScheduleMode::Relaxed).unwrap();
            assert!(r.failures.iter().any(|f| f.contains("p2:")), "{:?}", r.failures);

            let t = faulty(base, vec![Fault::CollapseToHub { level: 1 }]);
            let (level, a, b) = stage_points(&t, &relaxed(&t, 1), 1).unwrap();
            assert!(!scrambled_pair_witness(&t, level, &a, &b, 1, None, ScheduleMode::Relaxed).unwrap().passed());

            let t = faulty(base, vec![Fault::IgnoreInteriority]);
            assert!(!verify_invariance(&t, &relaxed(&t, 2), 1, 1).unwrap().passed());
        }
        let t = faulty(odometer, vec![Fault::TruncatedWalk { level: 3, len: BigUint::from(1u32) }]);
        let s = relaxed(&t, 2);
        assert_eq!(s.stage(1).unwrap().1, 3);
        let r = verify_density(&t, &s, 1).unwrap();
        assert!(r.failures.iter().any(|f| f.contains("F:")), "{:?}", r.failures);
    }
}
