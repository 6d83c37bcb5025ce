//! Graph homomorphisms, their structural flags and composition, and
//! sequences of covers `G_0 <- G_1 <- G_2 <- ...`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::graph::{DirectedGraph, SurjectivityReport, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("map is undefined on `{0}`")]
    PartialMap(VertexId),
    #[error("map sends `{0}` to unknown vertex `{1}`")]
    UnknownTarget(VertexId, VertexId),
    #[error("map mentions unknown source vertex `{0}`")]
    UnknownSource(VertexId),
    #[error("map defines `{0}` twice")]
    DuplicateEntry(VertexId),
    #[error("map is not a homomorphism: edge ({0}, {1}) has no image edge")]
    NotHomomorphism(VertexId, VertexId),
    #[error("chain breaks at position {0}: target of one map is not the source of the next")]
    ChainMismatch(usize),
    #[error("cannot compose an empty chain")]
    EmptyChain,
    #[error("covering needs {levels} levels but {homs} maps were given")]
    ShapeMismatch { levels: usize, homs: usize },
    #[error("level {0} is out of range")]
    NoSuchLevel(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct HomFlags {
    pub is_hom: bool,
    pub edge_surjective: bool,
    pub plus_directional: bool,
    pub bidirectional: bool,
}

impl HomFlags {
    /// Edge-surjective and +directional.
    pub fn is_cover(&self) -> bool {
        self.is_hom && self.edge_surjective && self.plus_directional
    }
}

/// A total vertex map between two graphs, with its flags computed once.
#[derive(Clone)]
pub struct GraphHom {
    source: Arc<DirectedGraph>,
    target: Arc<DirectedGraph>,
    map: Vec<usize>,
    flags: HomFlags,
}

impl GraphHom {
    pub fn from_indices(
        source: Arc<DirectedGraph>,
        target: Arc<DirectedGraph>,
        map: Vec<usize>,
    ) -> Result<Self, CoverError> {
        if map.len() != source.vertex_count() {
            let missing = source.name(map.len().min(source.vertex_count().saturating_sub(1)));
            return Err(CoverError::PartialMap(missing.clone()));
        }
        if let Some((v, &u)) = map.iter().enumerate().find(|(_, &u)| u >= target.vertex_count()) {
            return Err(CoverError::UnknownTarget(
                source.name(v).clone(),
                VertexId::new(format!("#{u}")),
            ));
        }
        let mut hom = GraphHom { source, target, map, flags: HomFlags::default() };
        hom.flags = hom.recompute_flags();
        Ok(hom)
    }

    pub fn from_names<A, B>(
        source: Arc<DirectedGraph>,
        target: Arc<DirectedGraph>,
        pairs: impl IntoIterator<Item = (A, B)>,
    ) -> Result<Self, CoverError>
    where
        A: Into<VertexId>,
        B: Into<VertexId>,
    {
        let mut slots = vec![None; source.vertex_count()];
        for (a, b) in pairs {
            let (a, b) = (a.into(), b.into());
            let v = source.index_of(&a).ok_or_else(|| CoverError::UnknownSource(a.clone()))?;
            let u = target.index_of(&b).ok_or_else(|| CoverError::UnknownTarget(a.clone(), b))?;
            if slots[v].replace(u).is_some() {
                return Err(CoverError::DuplicateEntry(a));
            }
        }
        let map = slots
            .iter()
            .enumerate()
            .map(|(v, u)| u.ok_or_else(|| CoverError::PartialMap(source.name(v).clone())))
            .collect::<Result<Vec<_>, _>>()?;
        GraphHom::from_indices(source, target, map)
    }

    pub fn identity(graph: Arc<DirectedGraph>) -> Self {
        let map = (0..graph.vertex_count()).collect();
        GraphHom::from_indices(graph.clone(), graph, map).expect("identity is total")
    }

    /// The constant map onto vertex 0 of `target` (normally a singleton).
    pub fn constant(source: Arc<DirectedGraph>, target: Arc<DirectedGraph>) -> Self {
        let map = vec![0; source.vertex_count()];
        GraphHom::from_indices(source, target, map).expect("constant map is total")
    }

    pub fn source(&self) -> &Arc<DirectedGraph> {
        &self.source
    }

    pub fn target(&self) -> &Arc<DirectedGraph> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn image(&self, v: usize) -> usize {
        self.map[v]
    }

    pub fn image_of(&self, v: &VertexId) -> Option<&VertexId> {
        self.source.index_of(v).map(|i| self.target.name(self.map[i]))
    }

    /// Cached flags.
    pub fn flags(&self) -> HomFlags {
        self.flags
    }

    pub fn is_cover(&self) -> bool {
        self.flags.is_cover()
    }

    /// Flags computed from scratch, ignoring the cache.
    pub fn recompute_flags(&self) -> HomFlags {
        let is_hom = self.homomorphism_violations().is_empty();
        if !is_hom {
            return HomFlags::default();
        }
        let edge_surjective = self.image_edges().len() == self.target.edge_count();
        let plus_directional = self.plus_directional_violations().is_empty();
        let minus = self.minus_directional_violations().is_empty();
        HomFlags { is_hom, edge_surjective, plus_directional, bidirectional: plus_directional && minus }
    }

    pub fn check_homomorphism(&self) -> bool {
        self.flags.is_hom
    }

    pub fn check_edge_surjective(&self) -> Result<bool, CoverError> {
        self.require_hom()?;
        Ok(self.flags.edge_surjective)
    }

    pub fn check_plus_directional(&self) -> Result<bool, CoverError> {
        self.require_hom()?;
        Ok(self.flags.plus_directional)
    }

    pub fn check_bidirectional(&self) -> Result<bool, CoverError> {
        self.require_hom()?;
        Ok(self.flags.bidirectional)
    }

    fn require_hom(&self) -> Result<(), CoverError> {
        match self.homomorphism_violations().first() {
            None => Ok(()),
            Some(&(u, v)) => Err(CoverError::NotHomomorphism(
                self.source.name(u).clone(),
                self.source.name(v).clone(),
            )),
        }
    }

    /// Source edges whose image is not an edge.
    pub fn homomorphism_violations(&self) -> Vec<(usize, usize)> {
        self.source
            .edges()
            .filter(|&(u, v)| !self.target.has_edge(self.map[u], self.map[v]))
            .collect()
    }

    pub fn image_edges(&self) -> BTreeSet<(usize, usize)> {
        self.source.edges().map(|(u, v)| (self.map[u], self.map[v])).collect()
    }

    /// Target edges never hit.
    pub fn missed_edges(&self) -> Vec<(usize, usize)> {
        let hit = self.image_edges();
        self.target.edges().filter(|e| !hit.contains(e)).collect()
    }

    /// Source vertices whose out-neighbours do not share one image.
    pub fn plus_directional_violations(&self) -> Vec<usize> {
        (0..self.source.vertex_count())
            .filter(|&u| !self.is_locally_plus_directional(u))
            .collect()
    }

    /// Source vertices whose in-neighbours do not share one image.
    pub fn minus_directional_violations(&self) -> Vec<usize> {
        (0..self.source.vertex_count())
            .filter(|&v| !self.is_locally_minus_directional(v))
            .collect()
    }

    pub fn is_locally_plus_directional(&self, u: usize) -> bool {
        same_image(self.source.successors(u), &self.map)
    }

    pub fn is_locally_minus_directional(&self, v: usize) -> bool {
        same_image(self.source.predecessors(v), &self.map)
    }

    pub fn preimage_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.target.vertex_count()];
        for &u in &self.map {
            counts[u] += 1;
        }
        counts
    }
}

fn same_image(vs: &[usize], map: &[usize]) -> bool {
    vs.windows(2).all(|w| map[w[0]] == map[w[1]])
}

impl fmt::Debug for GraphHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GraphHom")
            .field("source", &self.source)
            .field("target", &self.target)
            .field("flags", &self.flags)
            .finish()
    }
}

impl PartialEq for GraphHom {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map && self.source == other.source && self.target == other.target
    }
}

/// Composes a chain given source-first: `hs[0]: G_m -> G_{m-1}`, then
/// `hs[1]: G_{m-1} -> G_{m-2}`, and so on. The result maps the first source
/// to the last target.
pub fn compose(hs: &[GraphHom]) -> Result<GraphHom, CoverError> {
    let first = hs.first().ok_or(CoverError::EmptyChain)?;
    let mut map = first.map.clone();
    for (i, pair) in hs.windows(2).enumerate() {
        let (prev, next) = (&pair[0], &pair[1]);
        if !Arc::ptr_eq(&prev.target, &next.source) && prev.target != next.source {
            return Err(CoverError::ChainMismatch(i + 1));
        }
        for u in map.iter_mut() {
            *u = next.map[*u];
        }
    }
    let last = hs.last().expect("non-empty");
    GraphHom::from_indices(first.source.clone(), last.target.clone(), map)
}

/// `G_0 <- G_1 <- ... <- G_L` with `homs[n - 1] = φ_n: G_n -> G_{n-1}`.
#[derive(Clone, Debug)]
pub struct CoveringSequence {
    name: String,
    levels: Vec<Arc<DirectedGraph>>,
    homs: Vec<GraphHom>,
    anchor_hints: Vec<Option<(VertexId, VertexId)>>,
}

impl CoveringSequence {
    /// Checks only the shape (consecutive sources and targets line up).
    /// Whether the maps are covers is reported by [`validate_covering`].
    pub fn new(
        name: impl Into<String>,
        levels: Vec<Arc<DirectedGraph>>,
        homs: Vec<GraphHom>,
    ) -> Result<Self, CoverError> {
        if levels.len() != homs.len() + 1 {
            return Err(CoverError::ShapeMismatch { levels: levels.len(), homs: homs.len() });
        }
        for (i, h) in homs.iter().enumerate() {
            let lines_up = (Arc::ptr_eq(&h.source, &levels[i + 1]) || *h.source == *levels[i + 1])
                && (Arc::ptr_eq(&h.target, &levels[i]) || *h.target == *levels[i]);
            if !lines_up {
                return Err(CoverError::ChainMismatch(i + 1));
            }
        }
        let anchor_hints = vec![None; levels.len()];
        Ok(CoveringSequence { name: name.into(), levels, homs, anchor_hints })
    }

    /// Preferred `(v_{n,1}, v_{n,2})` at level `n`, honoured by anchor
    /// selection when coherent.
    pub fn with_anchor_hint(mut self, level: usize, v1: VertexId, v2: VertexId) -> Result<Self, CoverError> {
        let slot = self.anchor_hints.get_mut(level).ok_or(CoverError::NoSuchLevel(level))?;
        *slot = Some((v1, v2));
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Deepest level index.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> Option<&Arc<DirectedGraph>> {
        self.levels.get(n)
    }

    pub fn levels(&self) -> &[Arc<DirectedGraph>] {
        &self.levels
    }

    /// `φ_n: G_n -> G_{n-1}` for `n >= 1`.
    pub fn hom(&self, n: usize) -> Option<&GraphHom> {
        n.checked_sub(1).and_then(|i| self.homs.get(i))
    }

    pub fn homs(&self) -> &[GraphHom] {
        &self.homs
    }

    pub fn anchor_hint(&self, n: usize) -> Option<&(VertexId, VertexId)> {
        self.anchor_hints.get(n).and_then(Option::as_ref)
    }

    /// `φ_{m,n}`; the identity when `m == n`.
    pub fn compose_down(&self, m: usize, n: usize) -> Result<GraphHom, CoverError> {
        if m > self.depth() || n > m {
            return Err(CoverError::NoSuchLevel(m.max(n)));
        }
        if m == n {
            return Ok(GraphHom::identity(self.levels[m].clone()));
        }
        let chain: Vec<GraphHom> = (n + 1..=m).rev().map(|k| self.homs[k - 1].clone()).collect();
        compose(&chain)
    }

    /// `φ_{m,n}(v)` on indices without building the composite.
    pub fn project(&self, m: usize, n: usize, mut v: usize) -> usize {
        for k in (n + 1..=m).rev() {
            v = self.homs[k - 1].map[v];
        }
        v
    }

    pub fn is_bidirectional(&self) -> bool {
        self.homs.iter().all(|h| h.flags.bidirectional)
    }
}

impl PartialEq for CoveringSequence {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.levels.len() == other.levels.len()
            && self.levels.iter().zip(&other.levels).all(|(a, b)| a == b)
            && self.homs == other.homs
            && self.anchor_hints == other.anchor_hints
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelReport {
    pub level: usize,
    pub vertices: usize,
    pub edges: usize,
    pub surjective: SurjectivityReport,
    /// `None` when irreducibility is undefined (not a surjective relation).
    pub irreducible: Option<bool>,
    /// Flags of `φ_level`; `None` at level 0.
    pub hom: Option<HomFlags>,
    pub missed_edges: Vec<(VertexId, VertexId)>,
    pub non_directional: Vec<VertexId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringReport {
    pub name: String,
    pub singleton_base: bool,
    pub levels: Vec<LevelReport>,
    pub chain_transitive: bool,
    pub bidirectional: bool,
}

impl CoveringReport {
    pub fn is_ok(&self) -> bool {
        self.failures().is_empty()
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.singleton_base {
            out.push("level 0 is not the one-vertex loop graph".to_string());
        }
        for lv in &self.levels {
            let n = lv.level;
            if !lv.surjective.is_ok() {
                out.push(format!("level {n}: not a surjective relation ({})", lv.surjective));
            }
            if lv.irreducible == Some(false) {
                out.push(format!("level {n}: not irreducible"));
            }
            if let Some(f) = lv.hom {
                if !f.is_hom {
                    out.push(format!("level {n}: phi_{n} is not a homomorphism"));
                    continue;
                }
                if !f.edge_surjective {
                    let missed: Vec<String> =
                        lv.missed_edges.iter().map(|(a, b)| format!("({a}, {b})")).collect();
                    out.push(format!(
                        "level {n}: phi_{n} is not edge-surjective, missing {}",
                        missed.join(" ")
                    ));
                }
                if !f.plus_directional {
                    let vs: Vec<&str> = lv.non_directional.iter().map(VertexId::as_str).collect();
                    out.push(format!("level {n}: phi_{n} is not +directional at {}", vs.join(" ")));
                }
            }
        }
        out
    }
}

impl fmt::Display for CoveringReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "covering {}", self.name)?;
        for lv in &self.levels {
            let irr = match lv.irreducible {
                Some(true) => "yes",
                Some(false) => "no",
                None => "n/a",
            };
            write!(
                f,
                "level {} vertices={} edges={} surjective={} irreducible={}",
                lv.level,
                lv.vertices,
                lv.edges,
                lv.surjective.is_ok(),
                irr
            )?;
            if let Some(h) = lv.hom {
                write!(f, " cover={} bidirectional={}", h.is_cover(), h.bidirectional)?;
            }
            writeln!(f)?;
        }
        for line in self.failures() {
            writeln!(f, "FAIL {line}")?;
        }
        writeln!(f, "bidirectional={}", self.bidirectional)?;
        write!(f, "chain_transitive={}", self.chain_transitive)
    }
}

/// Structural checks on every level and map. Never fails; problems are
/// collected in the report.
pub fn validate_covering(c: &CoveringSequence) -> CoveringReport {
    let singleton_base = c.levels[0].is_singleton();
    let mut levels = Vec::with_capacity(c.levels.len());
    for (n, g) in c.levels.iter().enumerate() {
        let surjective = g.validate_surjective();
        let irreducible = g.is_irreducible().ok();
        let (hom, missed_edges, non_directional) = match c.hom(n) {
            None => (None, Vec::new(), Vec::new()),
            Some(h) => {
                let flags = h.flags();
                let missed = if flags.is_hom && !flags.edge_surjective {
                    h.missed_edges()
                        .into_iter()
                        .map(|(a, b)| (h.target.name(a).clone(), h.target.name(b).clone()))
                        .collect()
                } else {
                    Vec::new()
                };
                let bad = h
                    .plus_directional_violations()
                    .into_iter()
                    .map(|v| h.source.name(v).clone())
                    .collect();
                (Some(flags), missed, bad)
            }
        };
        levels.push(LevelReport {
            level: n,
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            surjective,
            irreducible,
            hom,
            missed_edges,
            non_directional,
        });
    }
    let chain_transitive = levels.iter().all(|l| l.irreducible == Some(true));
    let bidirectional = levels.iter().filter_map(|l| l.hom).all(|h| h.bidirectional);
    CoveringReport { name: c.name.clone(), singleton_base, levels, chain_transitive, bidirectional }
}
