//! Symbolic vertices of the embedding tower at any depth.
//!
//! A vertex of `G_n` is the hub, a vertex of `F_n`, or an interior position
//! on one of the two connector paths. Path positions are big integers, so
//! levels whose paths are far too long to materialize can still be handled:
//! the covering maps are evaluated by locating a position inside the image
//! word of the path one level up.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use parking_lot::RwLock;

use crate::error::{Error, Result};
use crate::fault::Fault;
use crate::graph::VertexId;
use crate::provider::LevelProvider;

/// Levels beyond this are refused rather than memoized.
pub const REACH_LIMIT: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PathId {
    /// Runs from the hub into `F_n`.
    First,
    /// Runs from `F_n` back to the hub.
    Second,
}

impl PathId {
    pub fn number(self) -> u8 {
        match self {
            PathId::First => 1,
            PathId::Second => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AddressKind {
    Hub,
    InF(VertexId),
    OnPath(PathId, BigUint),
}

/// A vertex of `G_level`. Addresses produced by [`Tower`] are normalized:
/// path endpoints are replaced by the hub or `F` vertex they coincide with.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Address {
    level: usize,
    kind: AddressKind,
}

impl Address {
    /// An address as given, not yet normalized.
    pub fn new(level: usize, kind: AddressKind) -> Self {
        Address { level, kind }
    }

    pub fn hub(level: usize) -> Self {
        Address { level, kind: AddressKind::Hub }
    }

    pub fn in_f(level: usize, v: impl Into<VertexId>) -> Self {
        Address { level, kind: AddressKind::InF(v.into()) }
    }

    pub fn on_path(level: usize, path: PathId, index: impl Into<BigUint>) -> Self {
        Address { level, kind: AddressKind::OnPath(path, index.into()) }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn kind(&self) -> &AddressKind {
        &self.kind
    }

    pub fn is_hub(&self) -> bool {
        self.kind == AddressKind::Hub
    }

    pub fn is_in_f(&self) -> bool {
        matches!(self.kind, AddressKind::InF(_))
    }

    /// Parses `H`, `F:<vertex>`, `p1:<j>` or `p2:<j>`.
    pub fn parse(level: usize, s: &str) -> Result<Self> {
        let bad = || Error::Precondition(format!("cannot parse address `{s}`"));
        let kind = if s == "H" {
            AddressKind::Hub
        } else if let Some(v) = s.strip_prefix("F:") {
            if v.is_empty() {
                return Err(bad());
            }
            AddressKind::InF(VertexId::new(v))
        } else if let Some((p, j)) = s.split_once(':') {
            let path = match p {
                "p1" => PathId::First,
                "p2" => PathId::Second,
                _ => return Err(bad()),
            };
            let j = BigUint::from_str(j).map_err(|_| bad())?;
            AddressKind::OnPath(path, j)
        } else {
            return Err(bad());
        };
        Ok(Address { level, kind })
    }
}

/// Same spelling as the vertex names of an explicit embedding level.
impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            AddressKind::Hub => f.write_str("H"),
            AddressKind::InF(v) => write!(f, "F:{v}"),
            AddressKind::OnPath(p, j) => write!(f, "p{}:{j}", p.number()),
        }
    }
}

/// One block of an image word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Segment {
    /// The hub loop, one edge.
    Loop,
    /// A whole connector path.
    Path(PathId),
    /// The edge-covering walk in `F_n`.
    Walk,
    /// The single `F` edge that continues an anchor walk by one step.
    Link(PathId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentSpan {
    pub segment: Segment,
    pub start: BigUint,
    pub len: BigUint,
}

#[derive(Debug)]
struct Layout {
    spans: Vec<SegmentSpan>,
    total: BigUint,
}

#[derive(Debug)]
struct LevelLayouts {
    first: Layout,
    second: Layout,
}

#[derive(Debug, Default)]
struct Memo {
    lengths: Vec<(BigUint, BigUint)>,
    layouts: Vec<Arc<LevelLayouts>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScheduleMode {
    /// `m_k` is the least level above `n_k + l_{1,n_k}`.
    Strict,
    /// First pair as in strict mode, then consecutive levels two apart.
    Relaxed,
}

impl ScheduleMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ScheduleMode::Strict => "strict",
            ScheduleMode::Relaxed => "relaxed",
        }
    }
}

impl FromStr for ScheduleMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(ScheduleMode::Strict),
            "relaxed" => Ok(ScheduleMode::Relaxed),
            _ => Err(Error::Precondition(format!("unknown mode `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchedulePair {
    pub n: BigUint,
    pub m: BigUint,
}

/// The embedding tower over a provider, evaluated symbolically.
///
/// Path lengths and image-word layouts are memoized per level behind a lock;
/// inserts are idempotent, so concurrent readers are fine.
pub struct Tower {
    provider: Arc<dyn LevelProvider>,
    first_lengths: (BigUint, BigUint),
    faults: Vec<Fault>,
    memo: RwLock<Memo>,
}

impl fmt::Debug for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Tower")
            .field("provider", &self.provider.name())
            .field("first_lengths", &self.first_lengths)
            .field("faults", &self.faults)
            .finish()
    }
}

impl Tower {
    pub fn new(provider: Arc<dyn LevelProvider>) -> Self {
        Tower::with_lengths(provider, 1, 1)
    }

    /// `l11` and `l21` are the path lengths at level 1 (both at least 1).
    pub fn with_lengths(provider: Arc<dyn LevelProvider>, l11: usize, l21: usize) -> Self {
        assert!(l11 >= 1 && l21 >= 1, "level-1 paths need at least one edge");
        Tower {
            provider,
            first_lengths: (BigUint::from(l11), BigUint::from(l21)),
            faults: Vec::new(),
            memo: RwLock::new(Memo::default()),
        }
    }

    pub fn with_faults(mut self, faults: Vec<Fault>) -> Self {
        self.faults = faults;
        *self.memo.get_mut() = Memo::default();
        self
    }

    pub fn provider(&self) -> &Arc<dyn LevelProvider> {
        &self.provider
    }

    pub fn faults(&self) -> &[Fault] {
        &self.faults
    }

    pub fn has_fault(&self, f: &Fault) -> bool {
        self.faults.contains(f)
    }

    fn check_reach(level: usize) -> Result<()> {
        if level > REACH_LIMIT {
            return Err(Error::LevelOutOfReach(BigUint::from(level)));
        }
        Ok(())
    }

    /// `(l_{1,n}, l_{2,n})` for `n >= 1`.
    pub fn path_lengths(&self, n: usize) -> Result<(BigUint, BigUint)> {
        if n == 0 {
            return Err(Error::Precondition("connector paths start at level 1".into()));
        }
        Self::check_reach(n)?;
        if let Some(l) = self.memo.read().lengths.get(n - 1) {
            return Ok(l.clone());
        }
        if n > 1 {
            self.layouts(n - 1)?;
        }
        let mut memo = self.memo.write();
        while memo.lengths.len() < n {
            let k = memo.lengths.len() + 1;
            let next = if k == 1 {
                self.first_lengths.clone()
            } else {
                let lay = &memo.layouts[k - 2];
                (lay.first.total.clone(), lay.second.total.clone())
            };
            memo.lengths.push(next);
        }
        Ok(memo.lengths[n - 1].clone())
    }

    pub fn path_length(&self, n: usize, path: PathId) -> Result<BigUint> {
        let (l1, l2) = self.path_lengths(n)?;
        Ok(match path {
            PathId::First => l1,
            PathId::Second => l2,
        })
    }

    /// Length of the covering walk at level `n` as used in image words.
    pub fn walk_len(&self, n: usize) -> Result<BigUint> {
        let len = self.provider.covering_walk_len(n)?;
        Ok(self
            .faults
            .iter()
            .filter_map(|f| match f {
                Fault::TruncatedWalk { level, len } if *level == n => Some(len.clone()),
                _ => None,
            })
            .fold(len, |a, b| a.min(b)))
    }

    fn segment_order(&self, n: usize, path: PathId) -> Vec<Segment> {
        use Segment::*;
        let single = self.faults.iter().any(|f| matches!(f, Fault::SingleRepeat { level } if Fault::hits(*level, n)));
        let no_loop = self.faults.iter().any(|f| matches!(f, Fault::NoLoopPadding { level } if Fault::hits(*level, n)));
        let skip = self.faults.iter().any(|f| matches!(f, Fault::SkipConnector { level } if *level == n));
        let (p1, p2) = (Path(PathId::First), Path(PathId::Second));
        let block = [p1, Walk, p2];
        let repeats = if single { 1 } else { 2 };
        let mut order = Vec::new();
        match path {
            PathId::First => {
                order.push(Loop);
                for _ in 0..repeats {
                    order.extend_from_slice(&block);
                }
                order.push(p1);
                order.push(Link(PathId::First));
            }
            PathId::Second => {
                order.push(Link(PathId::Second));
                order.push(p2);
                for _ in 0..repeats {
                    order.extend_from_slice(&[p1, Walk, p2]);
                }
                order.push(Loop);
            }
        }
        if no_loop {
            order.retain(|s| *s != Loop);
        }
        if skip {
            order.retain(|s| *s != p2);
        }
        order
    }

    fn layouts(&self, n: usize) -> Result<Arc<LevelLayouts>> {
        Self::check_reach(n)?;
        if let Some(l) = self.memo.read().layouts.get(n - 1) {
            return Ok(l.clone());
        }
        // Build bottom-up; each level needs the lengths of the one below.
        let have = self.memo.read().layouts.len();
        for k in have + 1..=n {
            let (l1, l2) = self.path_lengths(k)?;
            let lw = self.walk_len(k)?;
            let build = |path: PathId| {
                let mut spans = Vec::new();
                let mut pos = BigUint::zero();
                for seg in self.segment_order(k, path) {
                    let len = match seg {
                        Segment::Loop | Segment::Link(_) => BigUint::one(),
                        Segment::Path(PathId::First) => l1.clone(),
                        Segment::Path(PathId::Second) => l2.clone(),
                        Segment::Walk => lw.clone(),
                    };
                    let start = pos.clone();
                    pos += &len;
                    spans.push(SegmentSpan { segment: seg, start, len });
                }
                Layout { spans, total: pos }
            };
            let lay = Arc::new(LevelLayouts { first: build(PathId::First), second: build(PathId::Second) });
            let mut memo = self.memo.write();
            if memo.layouts.len() == k - 1 {
                memo.layouts.push(lay);
            }
        }
        Ok(self.memo.read().layouts[n - 1].clone())
    }

    /// The image word of `p_{path, n+1}` in `G_n`, as spans.
    pub fn image_word(&self, n: usize, path: PathId) -> Result<Vec<SegmentSpan>> {
        if n == 0 {
            return Err(Error::Precondition("image words start at level 1".into()));
        }
        let lay = self.layouts(n)?;
        Ok(match path {
            PathId::First => lay.first.spans.clone(),
            PathId::Second => lay.second.spans.clone(),
        })
    }

    /// Start positions of the copies of `p_{1,n}` inside `p_{1,n+1}`.
    pub fn first_path_copies(&self, n: usize) -> Result<Vec<BigUint>> {
        Ok(self
            .image_word(n, PathId::First)?
            .into_iter()
            .filter(|s| s.segment == Segment::Path(PathId::First))
            .map(|s| s.start)
            .collect())
    }

    /// Canonical form: endpoint positions become the hub or `F` vertex they
    /// coincide with; everything is range checked.
    pub fn normalize(&self, a: &Address) -> Result<Address> {
        let n = a.level;
        if let Some(depth) = self.provider.depth() {
            if n > depth {
                return Err(Error::ProviderDepthExceeded {
                    provider: self.provider.name().to_string(),
                    level: n,
                    depth,
                });
            }
        }
        if n == 0 {
            return match &a.kind {
                AddressKind::Hub => Ok(a.clone()),
                AddressKind::OnPath(..) => Err(Error::Precondition("level 0 has no paths".into())),
                AddressKind::InF(v) => Err(Error::UnknownVertex { level: 0, vertex: v.clone() }),
            };
        }
        match &a.kind {
            AddressKind::Hub => Ok(a.clone()),
            AddressKind::InF(v) => {
                if self.provider.contains(n, v)? {
                    Ok(a.clone())
                } else {
                    Err(Error::UnknownVertex { level: n, vertex: v.clone() })
                }
            }
            AddressKind::OnPath(p, j) => {
                let len = self.path_length(n, *p)?;
                if *j > len {
                    return Err(Error::IndexOutOfRange { level: n, index: j.clone(), len });
                }
                Ok(match (p, j.is_zero(), *j == len) {
                    (PathId::First, true, _) => Address::hub(n),
                    (PathId::First, _, true) => Address::in_f(n, self.provider.forward_anchor(n, n)?),
                    (PathId::Second, true, _) => Address::in_f(n, self.provider.backward_anchor(n, n)?),
                    (PathId::Second, _, true) => Address::hub(n),
                    _ => a.clone(),
                })
            }
        }
    }

    /// Position `j` of `p_{1,n}`, normalized.
    pub fn path_point(&self, n: usize, j: &BigUint) -> Result<Address> {
        self.normalize(&Address::on_path(n, PathId::First, j.clone()))
    }

    fn path_vertex(&self, n: usize, path: PathId, r: BigUint) -> Result<Address> {
        self.normalize(&Address::on_path(n, path, r))
    }

    /// `φ_{n+1}` applied to an address at level `n + 1`.
    pub fn decode_step(&self, a: &Address) -> Result<Address> {
        if a.level == 0 {
            return Err(Error::LevelMismatch { from: 0, to: 0 });
        }
        let a = self.normalize(a)?;
        let n = a.level - 1;
        if self.faults.iter().any(|f| matches!(f, Fault::CollapseToHub { level } if *level == n)) {
            return Ok(Address::hub(n));
        }
        if n == 0 {
            return Ok(Address::hub(0));
        }
        match &a.kind {
            AddressKind::Hub => Ok(Address::hub(n)),
            AddressKind::InF(v) => Ok(Address::in_f(n, self.provider.map_down(n + 1, v)?)),
            AddressKind::OnPath(p, j) => {
                let mut j = j.clone();
                if *p == PathId::First
                    && self.faults.iter().any(|f| matches!(f, Fault::SegmentOffByOne { level } if *level == n))
                {
                    let len = self.path_length(n + 1, PathId::First)?;
                    if j < len {
                        j += 1u32;
                    }
                }
                let lay = self.layouts(n)?;
                let spans = match p {
                    PathId::First => &lay.first.spans,
                    PathId::Second => &lay.second.spans,
                };
                let span = spans.iter().rev().find(|s| s.start <= j).expect("first span starts at 0");
                let r = &j - &span.start;
                match span.segment {
                    Segment::Loop => Ok(Address::hub(n)),
                    Segment::Path(q) => self.path_vertex(n, q, r),
                    Segment::Walk => Ok(Address::in_f(n, self.provider.covering_walk_vertex(n, &r)?)),
                    Segment::Link(PathId::First) => {
                        let i = if r.is_zero() { n } else { n + 1 };
                        Ok(Address::in_f(n, self.provider.forward_anchor(n, i)?))
                    }
                    Segment::Link(PathId::Second) => {
                        let i = if r.is_zero() { n + 1 } else { n };
                        Ok(Address::in_f(n, self.provider.backward_anchor(n, i)?))
                    }
                }
            }
        }
    }

    /// `φ_{level(a), target}(a)`.
    pub fn decode(&self, a: &Address, target: usize) -> Result<Address> {
        if target > a.level {
            return Err(Error::LevelMismatch { from: a.level, to: target });
        }
        let mut cur = self.normalize(a)?;
        while cur.level > target {
            cur = self.decode_step(&cur)?;
        }
        Ok(cur)
    }

    /// Out-neighbours (`forward`) or in-neighbours of `a` in `G_level`.
    pub fn step(&self, a: &Address, forward: bool) -> Result<BTreeSet<Address>> {
        let a = self.normalize(a)?;
        let n = a.level;
        let mut out = BTreeSet::new();
        if n == 0 {
            out.insert(a);
            return Ok(out);
        }
        let (l1, l2) = self.path_lengths(n)?;
        match &a.kind {
            AddressKind::Hub => {
                out.insert(Address::hub(n));
                let next = if forward {
                    Address::on_path(n, PathId::First, 1u32)
                } else {
                    Address::on_path(n, PathId::Second, &l2 - 1u32)
                };
                out.insert(self.normalize(&next)?);
            }
            AddressKind::OnPath(p, j) => {
                let next = if forward { j + 1u32 } else { j - 1u32 };
                out.insert(self.path_vertex(n, *p, next)?);
            }
            AddressKind::InF(v) => {
                let nbrs = if forward {
                    self.provider.successors(n, v)?
                } else {
                    self.provider.predecessors(n, v)?
                };
                out.extend(nbrs.into_iter().map(|w| Address::in_f(n, w)));
                if forward && *v == self.provider.backward_anchor(n, n)? {
                    out.insert(self.path_vertex(n, PathId::Second, BigUint::one())?);
                }
                if !forward && *v == self.provider.forward_anchor(n, n)? {
                    out.insert(self.path_vertex(n, PathId::First, &l1 - 1u32)?);
                }
            }
        }
        Ok(out)
    }

    /// Number of vertices of `G_n`.
    pub fn vertex_count(&self, n: usize) -> Result<BigUint> {
        if n == 0 {
            return Ok(BigUint::one());
        }
        let (l1, l2) = self.path_lengths(n)?;
        Ok(l1 + l2 - 1u32 + self.provider.vertex_count(n)?)
    }

    /// Every vertex of `G_n`: hub, path interiors, then `F_n`.
    pub fn enumerate_level(&self, n: usize, budget: usize) -> Result<Vec<Address>> {
        let size = self.vertex_count(n)?;
        if size > BigUint::from(budget) {
            return Err(Error::BudgetExceeded { level: n, size, budget });
        }
        let mut out = vec![Address::hub(n)];
        if n == 0 {
            return Ok(out);
        }
        let (l1, l2) = self.path_lengths(n)?;
        for (p, l) in [(PathId::First, l1), (PathId::Second, l2)] {
            let l = l.to_usize().expect("within budget");
            out.extend((1..l).map(|j| Address::on_path(n, p, j)));
        }
        for v in self.provider.graph(n)?.vertices() {
            out.push(Address::in_f(n, v.clone()));
        }
        Ok(out)
    }

    /// The compatible prefix `(φ_{n,0}(a), ..., φ_{n,n-1}(a), a)`.
    pub fn thread(&self, a: &Address) -> Result<ThreadPrefix> {
        let mut entries = vec![self.normalize(a)?];
        while entries.last().expect("non-empty").level > 0 {
            let next = self.decode_step(entries.last().expect("non-empty"))?;
            entries.push(next);
        }
        entries.reverse();
        Ok(ThreadPrefix { entries })
    }

    /// Checks compatibility of explicit entries (`entries[k]` at level `k`).
    pub fn prefix(&self, entries: Vec<Address>) -> Result<ThreadPrefix> {
        for (k, e) in entries.iter().enumerate() {
            if e.level != k {
                return Err(Error::Precondition(format!("entry {k} is at level {}", e.level)));
            }
        }
        let entries = entries.iter().map(|e| self.normalize(e)).collect::<Result<Vec<_>>>()?;
        for k in 1..entries.len() {
            if self.decode_step(&entries[k])? != entries[k - 1] {
                return Err(Error::Precondition(format!("entries {} and {k} are not compatible", k - 1)));
            }
        }
        Ok(ThreadPrefix { entries })
    }

    /// Prefix of `f^steps(x)` for any `x` extending `t`; one level is lost
    /// per step.
    pub fn push_forward(&self, t: &ThreadPrefix, steps: usize) -> Result<ThreadPrefix> {
        if steps > t.depth() {
            return Err(Error::InsufficientDepth { depth: t.depth(), steps });
        }
        let mut cur = t.entries.clone();
        for _ in 0..steps {
            let mut next = Vec::with_capacity(cur.len() - 1);
            for j in 0..cur.len() - 1 {
                let mut images = self
                    .step(&cur[j + 1], true)?
                    .iter()
                    .map(|s| self.decode_step(s))
                    .collect::<Result<BTreeSet<_>>>()?;
                if images.len() != 1 {
                    return Err(Error::Precondition(format!(
                        "successors of {} at level {} disagree below",
                        cur[j + 1],
                        j + 1
                    )));
                }
                next.push(images.pop_first().expect("one image"));
            }
            cur = next;
        }
        Ok(ThreadPrefix { entries: cur })
    }

    /// Index interval `[lo, hi]` of `q_m` inside `p_{1,m}`: the chain of
    /// middle copies of `p_{1,k}`, `k = m-1, ..., n`.
    pub fn q_interval(&self, m: usize, n: usize) -> Result<(BigUint, BigUint)> {
        if n == 0 || m <= n {
            return Err(Error::Precondition(format!("q interval needs m > n >= 1, got ({m}, {n})")));
        }
        let mut lo = BigUint::zero();
        for k in n..m {
            let copies = self.first_path_copies(k)?;
            let mid = copies.get(copies.len() / 2).ok_or_else(|| {
                Error::Precondition(format!("image word at level {k} has no first-path copy"))
            })?;
            lo += mid;
        }
        let hi = &lo + self.path_length(n, PathId::First)?;
        Ok((lo, hi))
    }

    /// Level pairs `(n_k, m_k)`, `k = 1..=kmax`, starting from `n_1 = n0`.
    pub fn schedule(&self, n0: usize, kmax: usize, mode: ScheduleMode) -> Result<Vec<SchedulePair>> {
        if n0 == 0 || kmax == 0 {
            return Err(Error::Precondition("schedule needs n0 >= 1 and kmax >= 1".into()));
        }
        let mut out: Vec<SchedulePair> = Vec::with_capacity(kmax);
        let mut n = BigUint::from(n0);
        for k in 1..=kmax {
            let m = match (mode, out.last()) {
                (ScheduleMode::Relaxed, Some(prev)) if k > 1 => &prev.m + 2u32,
                _ => {
                    let level = n.to_usize().filter(|&l| l <= REACH_LIMIT);
                    let level = level.ok_or_else(|| Error::LevelOutOfReach(n.clone()))?;
                    &n + self.path_length(level, PathId::First)? + 1u32
                }
            };
            out.push(SchedulePair { n: n.clone(), m: m.clone() });
            n = m + 1u32;
        }
        Ok(out)
    }
}

/// `(v_0, ..., v_n)` with `v_k` a vertex of `G_k` and `φ_{k+1}(v_{k+1}) = v_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreadPrefix {
    entries: Vec<Address>,
}

impl ThreadPrefix {
    pub fn depth(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn entries(&self) -> &[Address] {
        &self.entries
    }

    pub fn top(&self) -> &Address {
        self.entries.last().expect("non-empty")
    }

    /// The first `depth + 1` entries.
    pub fn truncate(&self, depth: usize) -> ThreadPrefix {
        ThreadPrefix { entries: self.entries[..=depth.min(self.depth())].to_vec() }
    }
}

impl fmt::Display for ThreadPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        write!(f, "depth={} ({})", self.depth(), parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::CyclicOdometer;
    use proptest::prelude::*;

    fn fixed() -> Tower {
        Tower::new(Arc::new(CyclicOdometer::fixed_point()))
    }

    fn odometer() -> Tower {
        Tower::new(Arc::new(CyclicOdometer::binary()))
    }

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    /// Direct evaluation of the two length recurrences.
    fn recurrence(l11: u64, l21: u64, walks: &[u64], n: usize) -> (u64, u64) {
        let (mut a, mut b) = (l11, l21);
        for &w in &walks[..n - 1] {
            (a, b) = (2 + 3 * a + 2 * (w + b), 2 + 3 * b + 2 * (a + w));
        }
        (a, b)
    }

    #[test]
    fn fixed_point_lengths() {
        let t = fixed();
        let got: Vec<_> = (1..=7).map(|n| t.path_lengths(n).unwrap().0).collect();
        let want: Vec<_> = [1u64, 9, 49, 249, 1249, 6249, 31249].map(big).to_vec();
        assert_eq!(got, want);
        for n in 1..=7 {
            let (a, b) = t.path_lengths(n).unwrap();
            assert_eq!(a, b);
            // Closed form 2·5^(n-1) - 1.
            assert_eq!(a, big(2) * big(5).pow(n as u32 - 1) - 1u32);
        }
    }

    #[test]
    fn odometer_lengths_follow_recurrence() {
        let t = odometer();
        let walks = [2, 4, 10, 24, 54, 116];
        for n in 1..=7 {
            let (a, b) = recurrence(1, 1, &walks, n);
            assert_eq!(t.path_lengths(n).unwrap(), (big(a), big(b)), "level {n}");
        }
        assert_eq!(t.path_lengths(2).unwrap().0, big(11));
    }

    #[test]
    fn configured_base_lengths() {
        let t = Tower::with_lengths(Arc::new(CyclicOdometer::fixed_point()), 3, 2);
        assert_eq!(t.path_lengths(1).unwrap(), (big(3), big(2)));
        let (a, b) = recurrence(3, 2, &[1, 1, 1], 3);
        assert_eq!(t.path_lengths(3).unwrap(), (big(a), big(b)));
    }

    #[test]
    fn fixed_point_level_two_word() {
        let t = fixed();
        let word: Vec<String> = (0..=9u64)
            .map(|j| t.decode_step(&Address::on_path(2, PathId::First, j)).unwrap().to_string())
            .collect();
        assert_eq!(word, ["H", "H", "F:0", "F:0", "H", "F:0", "F:0", "H", "F:0", "F:0"]);
        assert_eq!(t.decode_step(&Address::on_path(2, PathId::First, 4u32)).unwrap(), Address::hub(1));
        assert_eq!(t.decode_step(&Address::on_path(2, PathId::First, 2u32)).unwrap(), Address::in_f(1, "0"));
        assert_eq!(t.decode_step(&Address::hub(5)).unwrap(), Address::hub(4));
    }

    #[test]
    fn normalization_rules() {
        let t = odometer();
        let l1 = t.path_length(3, PathId::First).unwrap();
        let l2 = t.path_length(3, PathId::Second).unwrap();
        assert_eq!(t.normalize(&Address::on_path(3, PathId::First, 0u32)).unwrap(), Address::hub(3));
        assert_eq!(t.normalize(&Address::on_path(3, PathId::First, l1.clone())).unwrap(), Address::in_f(3, "3"));
        assert_eq!(t.normalize(&Address::on_path(3, PathId::Second, 0u32)).unwrap(), Address::in_f(3, "5"));
        assert_eq!(t.normalize(&Address::on_path(3, PathId::Second, l2)).unwrap(), Address::hub(3));
        assert!(matches!(
            t.normalize(&Address::on_path(3, PathId::First, l1 + 1u32)),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(t.normalize(&Address::in_f(3, "8")).is_err());
    }

    #[test]
    fn decode_identity_and_range() {
        let t = fixed();
        let a = Address::on_path(3, PathId::First, 24u32);
        assert_eq!(t.decode(&a, 3).unwrap(), a);
        assert!(matches!(t.decode(&a, 4), Err(Error::LevelMismatch { .. })));
    }

    #[test]
    fn step_examples() {
        let t = odometer();
        let l1 = t.path_length(3, PathId::First).unwrap();
        let l2 = t.path_length(3, PathId::Second).unwrap();
        let s = t.step(&Address::on_path(3, PathId::First, 5u32), true).unwrap();
        assert_eq!(s.into_iter().collect::<Vec<_>>(), [Address::on_path(3, PathId::First, 6u32)]);
        let s = t.step(&Address::hub(3), true).unwrap();
        assert_eq!(s, BTreeSet::from([Address::hub(3), Address::on_path(3, PathId::First, 1u32)]));
        let s = t.step(&Address::hub(3), false).unwrap();
        assert_eq!(s, BTreeSet::from([Address::hub(3), Address::on_path(3, PathId::Second, l2 - 1u32)]));
        let end = Address::in_f(3, "3");
        assert!(t.step(&end, false).unwrap().contains(&Address::on_path(3, PathId::First, l1 - 1u32)));
        // The second path leaves F at -3 = 5.
        assert!(t.step(&Address::in_f(3, "5"), true).unwrap().contains(&Address::on_path(3, PathId::Second, 1u32)));
    }

    #[test]
    fn q_interval_examples() {
        let t = fixed();
        assert_eq!(t.q_interval(2, 1).unwrap(), (big(4), big(5)));
        assert_eq!(t.q_interval(3, 1).unwrap(), (big(24), big(25)));
        assert!(t.q_interval(2, 2).is_err());
        for (m, n) in [(3, 2), (5, 1), (6, 4)] {
            let (lo, hi) = t.q_interval(m, n).unwrap();
            assert_eq!(hi - lo, t.path_length(n, PathId::First).unwrap());
        }
        let od = odometer();
        for (m, n) in [(2, 1), (4, 2), (6, 3)] {
            let (lo, hi) = od.q_interval(m, n).unwrap();
            assert_eq!(&hi - &lo, od.path_length(n, PathId::First).unwrap());
            for r in 0..=(&hi - &lo).to_u64().unwrap() {
                let a = Address::on_path(m, PathId::First, &lo + r);
                assert_eq!(od.decode(&a, n).unwrap(), od.path_point(n, &big(r)).unwrap());
            }
        }
    }

    #[test]
    fn schedules() {
        let t = fixed();
        let s = t.schedule(1, 2, ScheduleMode::Strict).unwrap();
        assert_eq!(s, [SchedulePair { n: big(1), m: big(3) }, SchedulePair { n: big(4), m: big(254) }]);
        let s = t.schedule(1, 3, ScheduleMode::Strict).unwrap();
        assert_eq!(s[2].n, big(255));
        assert_eq!(s[2].m, big(256) + big(2) * big(5).pow(254) - 1u32);
        assert!(matches!(t.schedule(1, 4, ScheduleMode::Strict), Err(Error::LevelOutOfReach(_))));
        let r = t.schedule(1, 3, ScheduleMode::Relaxed).unwrap();
        let pairs: Vec<(u64, u64)> = r.iter().map(|p| (p.n.to_u64().unwrap(), p.m.to_u64().unwrap())).collect();
        assert_eq!(pairs, [(1, 3), (4, 5), (6, 7)]);
        for p in odometer().schedule(2, 2, ScheduleMode::Strict).unwrap() {
            assert!(p.m > p.n);
        }
    }

    #[test]
    fn deep_decode_is_arithmetic() {
        let t = fixed();
        let (lo, hi) = t.q_interval(254, 4).unwrap();
        let mid: BigUint = (&lo + &hi) >> 1;
        let a = Address::on_path(254, PathId::First, mid.clone());
        let r = t.decode(&a, 4).unwrap();
        assert_eq!(r, t.path_point(4, &(mid - lo)).unwrap());
    }

    #[test]
    fn fixed_point_thread_is_fixed() {
        let t = fixed();
        let p = t.thread(&Address::hub(3)).unwrap();
        assert_eq!(t.push_forward(&p, 1).unwrap(), p.truncate(2));
        assert_eq!(t.push_forward(&p, 0).unwrap(), p);
        assert!(matches!(t.push_forward(&p, 4), Err(Error::InsufficientDepth { .. })));
    }

    #[test]
    fn interior_thread_advances() {
        let t = odometer();
        let p = t.thread(&Address::on_path(5, PathId::First, 100u32)).unwrap();
        let q = t.push_forward(&p, 2).unwrap();
        assert_eq!(q, t.thread(&Address::on_path(5, PathId::First, 102u32)).unwrap().truncate(3));
    }

    #[test]
    fn enumeration_counts() {
        let t = fixed();
        assert_eq!(t.enumerate_level(3, 1000).unwrap().len(), 98);
        assert!(matches!(t.enumerate_level(6, 1000), Err(Error::BudgetExceeded { .. })));
        let od = odometer();
        let all = od.enumerate_level(2, 1000).unwrap();
        let set: BTreeSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), all.len());
        for a in &all {
            assert_eq!(&od.normalize(a).unwrap(), a);
        }
    }

    #[test]
    fn faults_change_layouts() {
        let p = Arc::new(CyclicOdometer::fixed_point());
        let single = Tower::new(p.clone()).with_faults(vec![Fault::SingleRepeat { level: None }]);
        assert_eq!(single.first_path_copies(1).unwrap().len(), 2);
        let bare = Tower::new(p).with_faults(vec![Fault::NoLoopPadding { level: None }]);
        assert_eq!(bare.path_length(2, PathId::First).unwrap(), big(8));
    }

    fn arb_address(t: &Tower, level: usize) -> impl Strategy<Value = Address> {
        let (l1, l2) = t.path_lengths(level).unwrap();
        let (l1, l2) = (l1.to_u64().unwrap(), l2.to_u64().unwrap());
        let f = t.provider().vertex_count(level).unwrap().to_u64().unwrap();
        prop_oneof![
            Just(Address::hub(level)),
            (0..=l1).prop_map(move |j| Address::on_path(level, PathId::First, j)),
            (0..=l2).prop_map(move |j| Address::on_path(level, PathId::Second, j)),
            (0..f).prop_map(move |v| Address::in_f(level, v.to_string())),
        ]
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent(a in arb_address(&odometer(), 4)) {
            let t = odometer();
            let once = t.normalize(&a).unwrap();
            prop_assert_eq!(t.normalize(&once).unwrap(), once);
        }

        #[test]
        fn step_round_trips(a in arb_address(&odometer(), 4), forward in any::<bool>()) {
            let t = odometer();
            let a = t.normalize(&a).unwrap();
            for b in t.step(&a, forward).unwrap() {
                prop_assert!(t.step(&b, !forward).unwrap().contains(&a));
            }
        }

        #[test]
        fn push_forward_semigroup(j in 0u64..2000, i in 0usize..4, k in 0usize..4) {
            let t = odometer();
            let p = t.thread(&Address::on_path(8, PathId::First, j)).unwrap();
            let lhs = t.push_forward(&p, i + k).unwrap();
            let rhs = t.push_forward(&t.push_forward(&p, i).unwrap(), k).unwrap();
            prop_assert_eq!(lhs.depth(), 8 - i - k);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
