//! Access to the levels of an input covering `F`, either from an explicit
//! [`CoveringSequence`] or from a generator that answers arithmetically at
//! any depth.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::covering::{validate_covering, CoveringSequence};
use crate::embed::select_anchor_threads;
use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, VertexId};

/// The two anchor walks of one level.
///
/// `forward[i]` is the `i`-th vertex of the forward walk (`0 <= i <= n + 1`,
/// the last one being the extension vertex). `backward[i]` is the vertex `i`
/// steps before the backward anchor, so `backward[0]` is the anchor itself
/// and `backward[n + 1]` the extension vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnchorLevel {
    pub level: usize,
    pub forward: Vec<VertexId>,
    pub backward: Vec<VertexId>,
}

impl AnchorLevel {
    /// Where the first connector path lands in `F_n`.
    pub fn path1_end(&self) -> &VertexId {
        &self.forward[self.level]
    }

    /// Where the second connector path leaves `F_n`.
    pub fn path2_start(&self) -> &VertexId {
        &self.backward[self.level]
    }

    pub fn forward_extension(&self) -> &VertexId {
        &self.forward[self.level + 1]
    }

    pub fn backward_extension(&self) -> &VertexId {
        &self.backward[self.level + 1]
    }
}

/// Read access to the levels of `F`.
///
/// Level 0 is always the one-vertex loop graph. Anchors and covering walks
/// are defined for levels `>= 1`.
pub trait LevelProvider: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;

    /// Deepest available level, or `None` when unbounded.
    fn depth(&self) -> Option<usize>;

    /// Whether every map `F_{n+1} -> F_n` is bidirectional.
    fn is_bidirectional(&self) -> bool;

    fn vertex_count(&self, level: usize) -> Result<BigUint>;

    fn graph(&self, level: usize) -> Result<Arc<DirectedGraph>>;

    fn contains(&self, level: usize, v: &VertexId) -> Result<bool>;

    /// Image of `v` in level `level - 1`.
    fn map_down(&self, level: usize, v: &VertexId) -> Result<VertexId>;

    fn successors(&self, level: usize, v: &VertexId) -> Result<Vec<VertexId>>;

    fn predecessors(&self, level: usize, v: &VertexId) -> Result<Vec<VertexId>>;

    /// `i`-th vertex of the forward anchor walk, `0 <= i <= level + 1`.
    fn forward_anchor(&self, level: usize, i: usize) -> Result<VertexId>;

    /// Vertex `i` steps before the backward anchor, `0 <= i <= level + 1`.
    fn backward_anchor(&self, level: usize, i: usize) -> Result<VertexId>;

    /// Length of the edge-covering walk from `forward_anchor(level, level)`
    /// to `backward_anchor(level, level)`.
    fn covering_walk_len(&self, level: usize) -> Result<BigUint>;

    fn covering_walk_vertex(&self, level: usize, pos: &BigUint) -> Result<VertexId>;

    fn anchors(&self, level: usize) -> Result<AnchorLevel> {
        let forward = (0..=level + 1).map(|i| self.forward_anchor(level, i)).collect::<Result<_>>()?;
        let backward = (0..=level + 1).map(|i| self.backward_anchor(level, i)).collect::<Result<_>>()?;
        Ok(AnchorLevel { level, forward, backward })
    }

    /// The covering walk as a vertex list. Bounded by `limit` vertices.
    fn covering_walk(&self, level: usize, limit: usize) -> Result<Vec<VertexId>> {
        let len = self.covering_walk_len(level)?;
        let n = len.to_usize().filter(|&n| n < limit).ok_or_else(|| Error::BudgetExceeded {
            level,
            size: len.clone() + 1u32,
            budget: limit,
        })?;
        (0..=n).map(|j| self.covering_walk_vertex(level, &BigUint::from(j))).collect()
    }
}

pub(crate) fn check_depth(p: &dyn LevelProvider, level: usize) -> Result<()> {
    match p.depth() {
        Some(depth) if level > depth => Err(Error::ProviderDepthExceeded {
            provider: p.name().to_string(),
            level,
            depth,
        }),
        _ => Ok(()),
    }
}

pub(crate) fn check_anchor_level(level: usize) -> Result<()> {
    if level == 0 {
        return Err(Error::Precondition("anchors start at level 1".into()));
    }
    Ok(())
}

/// A provider backed by an explicit, validated covering sequence.
#[derive(Debug)]
pub struct ExplicitProvider {
    seq: CoveringSequence,
    anchors: Vec<AnchorLevel>,
    walks: Vec<Vec<usize>>,
    bidirectional: bool,
}

impl ExplicitProvider {
    /// Validates `seq` (covers, chain transitivity), then fixes anchors and
    /// edge-covering walks for every level.
    pub fn new(seq: CoveringSequence) -> Result<Self> {
        let report = validate_covering(&seq);
        if let Some(lv) = report.levels.iter().find(|l| l.irreducible == Some(false)) {
            return Err(Error::NotChainTransitive(lv.level));
        }
        if !report.is_ok() {
            return Err(Error::InvalidCovering(report.failures().join("; ")));
        }
        let depth = seq.depth();
        let anchors = if depth == 0 { Vec::new() } else { select_anchor_threads(&seq, depth)? };
        let mut walks = vec![Vec::new()];
        for a in &anchors {
            let g = seq.level(a.level).expect("anchor level exists");
            let from = g.index_of(a.path1_end()).expect("anchor vertex exists");
            let to = g.index_of(a.path2_start()).expect("anchor vertex exists");
            walks.push(g.edge_covering_walk(from, to)?.into_indices());
        }
        Ok(ExplicitProvider { bidirectional: report.bidirectional, seq, anchors, walks })
    }

    pub fn sequence(&self) -> &CoveringSequence {
        &self.seq
    }

    fn level(&self, level: usize) -> Result<&Arc<DirectedGraph>> {
        check_depth(self, level)?;
        Ok(self.seq.level(level).expect("checked depth"))
    }

    fn index(&self, level: usize, v: &VertexId) -> Result<usize> {
        self.level(level)?
            .index_of(v)
            .ok_or_else(|| Error::UnknownVertex { level, vertex: v.clone() })
    }

    fn anchor_level(&self, level: usize) -> Result<&AnchorLevel> {
        check_anchor_level(level)?;
        check_depth(self, level)?;
        Ok(&self.anchors[level - 1])
    }
}

impl LevelProvider for ExplicitProvider {
    fn name(&self) -> &str {
        self.seq.name()
    }

    fn depth(&self) -> Option<usize> {
        Some(self.seq.depth())
    }

    fn is_bidirectional(&self) -> bool {
        self.bidirectional
    }

    fn vertex_count(&self, level: usize) -> Result<BigUint> {
        Ok(BigUint::from(self.level(level)?.vertex_count()))
    }

    fn graph(&self, level: usize) -> Result<Arc<DirectedGraph>> {
        self.level(level).cloned()
    }

    fn contains(&self, level: usize, v: &VertexId) -> Result<bool> {
        Ok(self.level(level)?.index_of(v).is_some())
    }

    fn map_down(&self, level: usize, v: &VertexId) -> Result<VertexId> {
        if level == 0 {
            return Err(Error::Precondition("level 0 has no map below it".into()));
        }
        let i = self.index(level, v)?;
        let h = self.seq.hom(level).expect("checked depth");
        Ok(h.target().name(h.image(i)).clone())
    }

    fn successors(&self, level: usize, v: &VertexId) -> Result<Vec<VertexId>> {
        let g = self.level(level)?;
        let i = self.index(level, v)?;
        Ok(g.successors(i).iter().map(|&j| g.name(j).clone()).collect())
    }

    fn predecessors(&self, level: usize, v: &VertexId) -> Result<Vec<VertexId>> {
        let g = self.level(level)?;
        let i = self.index(level, v)?;
        Ok(g.predecessors(i).iter().map(|&j| g.name(j).clone()).collect())
    }

    fn forward_anchor(&self, level: usize, i: usize) -> Result<VertexId> {
        let a = self.anchor_level(level)?;
        a.forward.get(i).cloned().ok_or_else(|| anchor_range(level, i))
    }

    fn backward_anchor(&self, level: usize, i: usize) -> Result<VertexId> {
        let a = self.anchor_level(level)?;
        a.backward.get(i).cloned().ok_or_else(|| anchor_range(level, i))
    }

    fn anchors(&self, level: usize) -> Result<AnchorLevel> {
        self.anchor_level(level).cloned()
    }

    fn covering_walk_len(&self, level: usize) -> Result<BigUint> {
        self.anchor_level(level)?;
        Ok(BigUint::from(self.walks[level].len() - 1))
    }

    fn covering_walk_vertex(&self, level: usize, pos: &BigUint) -> Result<VertexId> {
        self.anchor_level(level)?;
        let walk = &self.walks[level];
        let j = pos.to_usize().filter(|&j| j < walk.len()).ok_or_else(|| Error::IndexOutOfRange {
            level,
            index: pos.clone(),
            len: BigUint::from(walk.len() - 1),
        })?;
        Ok(self.seq.level(level).expect("checked depth").name(walk[j]).clone())
    }
}

fn anchor_range(level: usize, i: usize) -> Error {
    Error::IndexOutOfRange { level, index: BigUint::from(i), len: BigUint::from(level + 1) }
}
