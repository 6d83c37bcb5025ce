//! Explicit construction of the augmented covering `G` for shallow levels.
//!
//! Level `n` of `G` is `F_n` plus a hub vertex with a loop, a path from the
//! hub into `F_n` and a path from `F_n` back to the hub. The map down one
//! level sends each new path onto a fixed concatenation of the paths,
//! the hub loop and an edge-covering walk of `F_n` one level below.
//!
//! Vertex names: `H` for the hub, `p1:<j>` and `p2:<j>` for path interiors,
//! `F:<v>` for vertices of `F_n`.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};

use crate::address::{Address, AddressKind, ScheduleMode};
use crate::covering::{compose, CoveringSequence, GraphHom};
use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, VertexId};
use crate::provider::{AnchorLevel, LevelProvider};
use crate::verify::report::{Claim, Cost, WitnessReport};

pub const DEFAULT_BUDGET: usize = 200_000;

/// Anchor walks for levels `1..=depth`, chosen on the deepest level of `f`
/// and projected down, so they are coherent by construction.
///
/// The forward walk starts at the smallest vertex consistent with the anchor
/// hints and repeatedly moves to the smallest successor; the backward walk
/// ends at the smallest consistent vertex and moves to the smallest
/// predecessor. Surjectivity of every level means neither walk gets stuck.
pub fn select_anchor_threads(f: &CoveringSequence, depth: usize) -> Result<Vec<AnchorLevel>> {
    let top = f.depth();
    if depth == 0 || depth > top {
        return Err(Error::Precondition(format!("anchor depth {depth} outside 1..={top}")));
    }
    let g = f.level(top).expect("top level exists");
    let mut hints = Vec::new();
    for n in 1..=top {
        if let Some((v1, v2)) = f.anchor_hint(n) {
            let lv = f.level(n).expect("hinted level exists");
            let find = |v: &VertexId| {
                lv.index_of(v).ok_or_else(|| Error::AnchorIncoherent {
                    level: n,
                    detail: format!("hinted vertex `{v}` is not in F_{n}"),
                })
            };
            hints.push((n, find(v1)?, find(v2)?));
        }
    }
    let pick = |which: usize| {
        (0..g.vertex_count())
            .find(|&v| {
                hints.iter().all(|&(n, h1, h2)| f.project(top, n, v) == if which == 1 { h1 } else { h2 })
            })
            .ok_or_else(|| Error::AnchorIncoherent {
                level: top,
                detail: format!("no vertex of F_{top} lies over every hinted anchor {which}"),
            })
    };
    let mut forward = vec![pick(1)?];
    let mut backward = vec![pick(2)?];
    for _ in 0..=top {
        let cur = *forward.last().expect("non-empty");
        forward.push(g.successors(cur)[0]);
        let cur = *backward.last().expect("non-empty");
        backward.push(g.predecessors(cur)[0]);
    }
    Ok((1..=depth)
        .map(|n| {
            let lv = f.level(n).expect("level exists");
            let down = |v: &usize| lv.name(f.project(top, n, *v)).clone();
            AnchorLevel {
                level: n,
                forward: forward[..=n + 1].iter().map(down).collect(),
                backward: backward[..=n + 1].iter().map(down).collect(),
            }
        })
        .collect())
}

/// Deliberate construction defects for checking the verifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sabotage {
    /// The first interior vertex of `p_{1,level}` whose image is not the hub
    /// is sent to the hub instead.
    FlipPathImage { level: usize },
    /// `G_level` gets an extra edge from the end of `p_{1,level}` to the
    /// third vertex of that path.
    ExtraEdge { level: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmbedConfig {
    pub l11: usize,
    pub l21: usize,
    /// Largest vertex count of a single explicit level.
    pub budget: usize,
    pub sabotage: Option<Sabotage>,
}

impl Default for EmbedConfig {
    fn default() -> Self {
        EmbedConfig { l11: 1, l21: 1, budget: DEFAULT_BUDGET, sabotage: None }
    }
}

#[derive(Debug, Clone)]
pub struct EmbeddingLevel {
    pub level: usize,
    pub graph: Arc<DirectedGraph>,
    pub f_graph: Arc<DirectedGraph>,
    pub hub: usize,
    /// Vertex indices of `p_1`, hub first.
    pub path1: Vec<usize>,
    /// Vertex indices of `p_2`, hub last.
    pub path2: Vec<usize>,
    pub covering_walk: Vec<usize>,
    /// Index in `graph` of each vertex of `f_graph`.
    pub f_index: Vec<usize>,
    pub anchors: Option<AnchorLevel>,
}

impl EmbeddingLevel {
    pub fn path_lengths(&self) -> (usize, usize) {
        (self.path1.len().saturating_sub(1), self.path2.len().saturating_sub(1))
    }

    pub fn is_f_vertex(&self, v: usize) -> bool {
        self.graph.name(v).as_str().starts_with("F:")
    }

    fn zero(f_graph: Arc<DirectedGraph>) -> Self {
        EmbeddingLevel {
            level: 0,
            graph: Arc::new(DirectedGraph::singleton("H")),
            f_index: vec![0; f_graph.vertex_count()],
            f_graph,
            hub: 0,
            path1: Vec::new(),
            path2: Vec::new(),
            covering_walk: Vec::new(),
            anchors: None,
        }
    }
}

fn f_name(v: &VertexId) -> String {
    format!("F:{v}")
}

fn assemble(
    level: usize,
    provider: &dyn LevelProvider,
    l1: usize,
    l2: usize,
    budget: usize,
    extra_edge: bool,
) -> Result<EmbeddingLevel> {
    let f_size = provider.vertex_count(level)?;
    let size = f_size.clone() + (l1 + l2 - 1);
    if size > BigUint::from(budget) {
        return Err(Error::BudgetExceeded { level, size, budget });
    }
    let f_graph = provider.graph(level)?;
    let anchors = provider.anchors(level)?;
    let mut names: Vec<String> = vec!["H".to_string()];
    names.extend((1..l1).map(|j| format!("p1:{j}")));
    names.extend((1..l2).map(|j| format!("p2:{j}")));
    names.extend(f_graph.vertices().iter().map(f_name));

    let p1: Vec<String> = (0..=l1)
        .map(|j| match j {
            0 => "H".to_string(),
            j if j == l1 => f_name(anchors.path1_end()),
            j => format!("p1:{j}"),
        })
        .collect();
    let p2: Vec<String> = (0..=l2)
        .map(|j| match j {
            0 => f_name(anchors.path2_start()),
            j if j == l2 => "H".to_string(),
            j => format!("p2:{j}"),
        })
        .collect();
    let mut edges: Vec<(String, String)> = vec![("H".into(), "H".into())];
    edges.extend(p1.windows(2).map(|w| (w[0].clone(), w[1].clone())));
    edges.extend(p2.windows(2).map(|w| (w[0].clone(), w[1].clone())));
    edges.extend(f_graph.edges().map(|(u, v)| (f_name(f_graph.name(u)), f_name(f_graph.name(v)))));
    if extra_edge && l1 > 2 {
        edges.push((p1[l1].clone(), p1[2].clone()));
    }
    let graph = Arc::new(DirectedGraph::new(names, edges)?);
    let idx = |s: &str| graph.index_of_str(s).expect("vertex was just added");
    let path1 = p1.iter().map(|s| idx(s)).collect();
    let path2 = p2.iter().map(|s| idx(s)).collect();
    let f_index = f_graph.vertices().iter().map(|v| idx(&f_name(v))).collect();
    let covering_walk = provider
        .covering_walk(level, budget.saturating_mul(4))?
        .iter()
        .map(|v| idx(&f_name(v)))
        .collect::<Vec<_>>();
    let hub = idx("H");
    Ok(EmbeddingLevel {
        level,
        graph,
        f_graph,
        hub,
        path1,
        path2,
        covering_walk,
        f_index,
        anchors: Some(anchors),
    })
}

/// Joins walks at shared endpoints.
fn concat(level: usize, g: &DirectedGraph, parts: &[&[usize]]) -> Result<Vec<usize>> {
    let mut out = parts[0].to_vec();
    for part in &parts[1..] {
        if out.last() != part.first() {
            return Err(Error::AnchorIncoherent {
                level,
                detail: format!(
                    "image word breaks between {} and {}",
                    g.name(*out.last().expect("non-empty")),
                    g.name(part[0])
                ),
            });
        }
        out.extend_from_slice(&part[1..]);
    }
    if let Some(w) = out.windows(2).find(|w| !g.has_edge(w[0], w[1])) {
        return Err(Error::AnchorIncoherent {
            level,
            detail: format!("image word uses a non-edge ({}, {})", g.name(w[0]), g.name(w[1])),
        });
    }
    Ok(out)
}

/// The image words of `p_{1,n+1}` and `p_{2,n+1}` in `G_n`, as vertex lists.
pub fn image_words(prev: &EmbeddingLevel) -> Result<(Vec<usize>, Vec<usize>)> {
    let n = prev.level;
    let g = &prev.graph;
    let a = prev.anchors.as_ref().expect("levels >= 1 carry anchors");
    let loop_ = [prev.hub, prev.hub];
    let f = |v: &VertexId| g.index_of_str(&f_name(v)).expect("anchor in F");
    let link1 = [f(a.path1_end()), f(a.forward_extension())];
    let link2 = [f(a.backward_extension()), f(a.path2_start())];
    let (p1, w, p2) = (&prev.path1[..], &prev.covering_walk[..], &prev.path2[..]);
    let first = concat(n, g, &[&loop_, p1, w, p2, p1, w, p2, p1, &link1])?;
    let second = concat(n, g, &[&link2, p2, p1, w, p2, p1, w, p2, &loop_])?;
    Ok((first, second))
}

/// `G_1` and the constant map onto `G_0`.
pub fn build_first_level(
    provider: &dyn LevelProvider,
    config: &EmbedConfig,
) -> Result<(EmbeddingLevel, EmbeddingLevel, GraphHom)> {
    if config.l11 == 0 || config.l21 == 0 {
        return Err(Error::Precondition("level-1 paths need at least one edge".into()));
    }
    let zero = EmbeddingLevel::zero(provider.graph(0)?);
    let extra = config.sabotage == Some(Sabotage::ExtraEdge { level: 1 });
    let one = assemble(1, provider, config.l11, config.l21, config.budget, extra)?;
    let hom = GraphHom::constant(one.graph.clone(), zero.graph.clone());
    Ok((zero, one, hom))
}

/// `G_{n+1}` and `φ_{n+1}: G_{n+1} -> G_n`.
pub fn build_level(
    prev: &EmbeddingLevel,
    provider: &dyn LevelProvider,
    config: &EmbedConfig,
) -> Result<(EmbeddingLevel, GraphHom)> {
    let n = prev.level;
    let (first, second) = image_words(prev)?;
    let (l1, l2) = (first.len() - 1, second.len() - 1);
    let extra = config.sabotage == Some(Sabotage::ExtraEdge { level: n + 1 });
    let next = assemble(n + 1, provider, l1, l2, config.budget, extra)?;

    let g = &prev.graph;
    let mut map = vec![usize::MAX; next.graph.vertex_count()];
    map[next.hub] = prev.hub;
    for (v, name) in next.f_graph.vertices().iter().enumerate() {
        let below = provider.map_down(n + 1, name)?;
        map[next.f_index[v]] = g.index_of_str(&f_name(&below)).expect("image in F_n");
    }
    for (path, word) in [(&next.path1, &first), (&next.path2, &second)] {
        for (j, &v) in path.iter().enumerate() {
            if next.is_f_vertex(v) || v == next.hub {
                if map[v] != word[j] {
                    return Err(Error::AnchorIncoherent {
                        level: n + 1,
                        detail: format!(
                            "{} maps to {} but the image word has {}",
                            next.graph.name(v),
                            g.name(map[v]),
                            g.name(word[j])
                        ),
                    });
                }
            } else {
                map[v] = word[j];
            }
        }
    }
    if config.sabotage == Some(Sabotage::FlipPathImage { level: n + 1 }) {
        if let Some(&v) = next.path1[1..l1].iter().find(|&&v| map[v] != prev.hub) {
            map[v] = prev.hub;
        }
    }
    let hom = GraphHom::from_indices(next.graph.clone(), g.clone(), map)?;
    Ok((next, hom))
}

/// An explicit tower `G_0, ..., G_max` with its maps.
#[derive(Debug, Clone)]
pub struct Embedding {
    provider: Arc<dyn LevelProvider>,
    config: EmbedConfig,
    levels: Vec<EmbeddingLevel>,
    homs: Vec<GraphHom>,
}

pub fn build_embedding(
    provider: Arc<dyn LevelProvider>,
    max_level: usize,
    l11: usize,
    l21: usize,
) -> Result<Embedding> {
    build_embedding_with(provider, max_level, EmbedConfig { l11, l21, ..EmbedConfig::default() })
}

pub fn build_embedding_with(
    provider: Arc<dyn LevelProvider>,
    max_level: usize,
    config: EmbedConfig,
) -> Result<Embedding> {
    if max_level == 0 {
        return Err(Error::Precondition("embedding needs at least one level".into()));
    }
    let (zero, one, hom) = build_first_level(provider.as_ref(), &config)?;
    let mut levels = vec![zero, one];
    let mut homs = vec![hom];
    for _ in 1..max_level {
        let (next, hom) = build_level(levels.last().expect("non-empty"), provider.as_ref(), &config)?;
        levels.push(next);
        homs.push(hom);
    }
    Ok(Embedding { provider, config, levels, homs })
}

impl Embedding {
    pub fn provider(&self) -> &Arc<dyn LevelProvider> {
        &self.provider
    }

    pub fn config(&self) -> &EmbedConfig {
        &self.config
    }

    pub fn max_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> &EmbeddingLevel {
        &self.levels[n]
    }

    pub fn levels(&self) -> &[EmbeddingLevel] {
        &self.levels
    }

    /// `φ_n: G_n -> G_{n-1}`.
    pub fn hom(&self, n: usize) -> &GraphHom {
        &self.homs[n - 1]
    }

    /// `φ_{m,n}`.
    pub fn compose_down(&self, m: usize, n: usize) -> Result<GraphHom> {
        if n > m || m > self.max_level() {
            return Err(Error::LevelMismatch { from: m, to: n });
        }
        if m == n {
            return Ok(GraphHom::identity(self.levels[m].graph.clone()));
        }
        let chain: Vec<GraphHom> = (n + 1..=m).rev().map(|k| self.homs[k - 1].clone()).collect();
        Ok(compose(&chain)?)
    }

    pub fn to_covering(&self) -> CoveringSequence {
        let graphs = self.levels.iter().map(|l| l.graph.clone()).collect();
        CoveringSequence::new(format!("{}-embedded", self.provider.name()), graphs, self.homs.clone())
            .expect("levels and maps line up")
    }

    pub fn vertex_address(&self, n: usize, v: usize) -> Address {
        Address::parse(n, self.levels[n].graph.name(v).as_str()).expect("vertex names are addresses")
    }

    pub fn address_vertex(&self, a: &Address) -> Option<usize> {
        let lv = self.levels.get(a.level())?;
        let name = match a.kind() {
            AddressKind::Hub => "H".to_string(),
            _ => a.to_string(),
        };
        lv.graph.index_of_str(&name)
    }
}

fn push_bool(r: &mut WitnessReport, key: String, v: bool) {
    r.witness(key, BigInt::from(v as u8));
}

/// Per-level checks on an explicit tower: every map is a cover, bidirectional
/// when `F` is, the three vertices where the new paths attach are certified
/// individually, `F` is embedded with its own maps, the hub's three edges
/// map to the hub loop and every vertex below has at least two preimages.
pub fn verify_construction(e: &Embedding) -> WitnessReport {
    let started = std::time::Instant::now();
    let mut r = WitnessReport::new(Claim::WellDefined, e.max_level(), ScheduleMode::Relaxed);
    r.param("l11", e.config.l11);
    r.param("l21", e.config.l21);
    let bidirectional_input = e.provider.is_bidirectional();
    let mut visited = 0u64;
    for k in 1..=e.max_level() {
        let h = e.hom(k);
        let (lv, below) = (&e.levels[k], &e.levels[k - 1]);
        let g = &lv.graph;
        visited += g.vertex_count() as u64;
        let flags = h.recompute_flags();
        r.witness(format!("level.{k}.vertices"), BigInt::from(g.vertex_count()));
        r.witness(format!("level.{k}.edges"), BigInt::from(g.edge_count()));
        let (l1, l2) = lv.path_lengths();
        r.witness(format!("level.{k}.l1"), BigInt::from(l1));
        r.witness(format!("level.{k}.l2"), BigInt::from(l2));
        push_bool(&mut r, format!("level.{k}.cover"), flags.is_cover());
        push_bool(&mut r, format!("level.{k}.bidirectional"), flags.bidirectional);

        let name = |v: usize| g.name(v).to_string();
        for (u, v) in h.homomorphism_violations() {
            r.fail(format!("level {k}: edge ({}, {}) has no image edge", name(u), name(v)));
        }
        if flags.is_hom {
            for (u, v) in h.missed_edges() {
                r.fail(format!(
                    "level {k}: edge ({}, {}) of G_{} is not covered",
                    below.graph.name(u),
                    below.graph.name(v),
                    k - 1
                ));
            }
        }
        for v in h.plus_directional_violations() {
            r.fail(format!("level {k}: out-neighbours of {} have different images", name(v)));
        }
        if bidirectional_input {
            for v in h.minus_directional_violations() {
                r.fail(format!("level {k}: in-neighbours of {} have different images", name(v)));
            }
        }

        let mut critical = vec![lv.hub, *lv.path1.last().expect("path"), lv.path2[0]];
        critical.dedup();
        for &v in &critical {
            let plus = h.is_locally_plus_directional(v);
            let minus = h.is_locally_minus_directional(v);
            let ok = plus && (minus || !bidirectional_input);
            push_bool(&mut r, format!("level.{k}.critical.{}", name(v)), ok);
            if !ok {
                r.fail(format!("level {k}: critical vertex {} is not certified", name(v)));
            }
        }

        let hub_edges = [
            (lv.hub, lv.hub),
            (lv.path1[0], lv.path1[1]),
            (lv.path2[lv.path2.len() - 2], *lv.path2.last().expect("path")),
        ];
        for (u, v) in hub_edges {
            if (h.image(u), h.image(v)) != (below.hub, below.hub) {
                r.fail(format!("level {k}: hub edge ({}, {}) does not map to the hub loop", name(u), name(v)));
            }
        }

        if k >= 2 {
            for (i, fv) in lv.f_graph.vertices().iter().enumerate() {
                let want = e.provider.map_down(k, fv).ok().map(|w| f_name(&w));
                let got = below.graph.name(h.image(lv.f_index[i])).to_string();
                if want.as_deref() != Some(got.as_str()) {
                    r.fail(format!("level {k}: F:{fv} maps to {got}, not to its image in F"));
                }
            }
            match image_words(below) {
                Ok((w1, w2)) => {
                    for (path, word) in [(&lv.path1, w1), (&lv.path2, w2)] {
                        let bad = path.iter().zip(&word).find(|(&v, &want)| h.image(v) != want);
                        if let Some((&v, &want)) = bad {
                            r.fail(format!(
                                "level {k}: {} maps to {}, expected {}",
                                name(v),
                                below.graph.name(h.image(v)),
                                below.graph.name(want)
                            ));
                        }
                    }
                }
                Err(err) => r.fail(format!("level {k}: no image words: {err}")),
            }
            let counts = h.preimage_counts();
            for (u, &c) in counts.iter().enumerate() {
                if c < 2 {
                    r.fail(format!(
                        "level {k}: {} has {c} preimage(s)",
                        below.graph.name(u)
                    ));
                }
            }
            if let Ok(lw) = e.provider.covering_walk_len(k - 1) {
                let (a, b) = below.path_lengths();
                let lw: usize = lw.try_into().unwrap_or(usize::MAX);
                let want1 = 2 + 3 * a + 2 * (lw + b);
                let want2 = 2 + 3 * b + 2 * (a + lw);
                if (l1, l2) != (want1, want2) {
                    r.fail(format!("level {k}: path lengths ({l1}, {l2}) differ from ({want1}, {want2})"));
                }
            }
        }
    }
    r.cost = Cost { elapsed: started.elapsed(), nodes: visited };
    r.finish();
    r
}

/// Every vertex of `G_n` outside `F_n` has in- and out-neighbours with a
/// common image under `φ_n`, and the hub's three edges map to the hub loop.
pub fn verify_outside_bidirectional(e: &Embedding, n: usize) -> WitnessReport {
    let started = std::time::Instant::now();
    let mut r = WitnessReport::new(Claim::OutsideHomeo, n, ScheduleMode::Relaxed);
    r.param("l11", e.config.l11);
    r.param("l21", e.config.l21);
    if n == 0 || n > e.max_level() {
        r.fail(format!("level {n} is not an explicit level >= 1"));
        r.finish();
        return r;
    }
    let h = e.hom(n);
    let lv = &e.levels[n];
    let below = &e.levels[n - 1];
    let mut checked = 0u64;
    for v in 0..lv.graph.vertex_count() {
        if lv.is_f_vertex(v) {
            continue;
        }
        checked += 1;
        if !h.is_locally_plus_directional(v) {
            r.fail(format!("{}: out-neighbours have different images", lv.graph.name(v)));
        }
        if !h.is_locally_minus_directional(v) {
            r.fail(format!("{}: in-neighbours have different images", lv.graph.name(v)));
        }
    }
    let hub_edges = [
        (lv.hub, lv.hub),
        (lv.path1[0], lv.path1[1]),
        (lv.path2[lv.path2.len() - 2], *lv.path2.last().expect("path")),
    ];
    let mut hub_ok = 0;
    for (u, v) in hub_edges {
        if (h.image(u), h.image(v)) == (below.hub, below.hub) {
            hub_ok += 1;
        } else {
            r.fail(format!(
                "hub edge ({}, {}) does not map to the hub loop",
                lv.graph.name(u),
                lv.graph.name(v)
            ));
        }
    }
    r.witness("checked", BigInt::from(checked));
    r.witness("hub.edges", BigInt::from(hub_ok));
    r.cost = Cost { elapsed: started.elapsed(), nodes: checked };
    r.finish();
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::validate_covering;
    use crate::generators::CyclicOdometer;
    use crate::provider::ExplicitProvider;
    use crate::verify::report::Verdict;

    fn fixed() -> Arc<dyn LevelProvider> {
        Arc::new(CyclicOdometer::fixed_point())
    }

    fn odometer() -> Arc<dyn LevelProvider> {
        Arc::new(CyclicOdometer::binary())
    }

    fn names(e: &Embedding, n: usize, word: &[usize]) -> Vec<String> {
        word.iter().map(|&v| e.level(n).graph.name(v).to_string()).collect()
    }

    #[test]
    fn anchors_on_fixed_point_are_trivial() {
        let seq = CyclicOdometer::fixed_point().materialize(4).unwrap();
        for a in select_anchor_threads(&seq, 4).unwrap() {
            assert!(a.forward.iter().chain(&a.backward).all(|v| v.as_str() == "0"));
            assert_eq!(a.forward.len(), a.level + 2);
        }
    }

    #[test]
    fn anchors_on_odometer_are_coherent() {
        let seq = CyclicOdometer::binary().materialize(4).unwrap();
        let anchors = select_anchor_threads(&seq, 3).unwrap();
        assert_eq!(anchors.len(), 3);
        assert_eq!(anchors[0].forward.len(), 3);
        for w in anchors.windows(2) {
            let (lo, hi) = (&w[0], &w[1]);
            let h = seq.hom(hi.level).unwrap();
            for i in 0..=lo.level + 1 {
                assert_eq!(h.image_of(&hi.forward[i]).unwrap(), &lo.forward[i]);
                assert_eq!(h.image_of(&hi.backward[i]).unwrap(), &lo.backward[i]);
            }
        }
        for a in &anchors {
            let g = seq.level(a.level).unwrap();
            for p in a.forward.windows(2) {
                assert!(g.has_edge(g.index_of(&p[0]).unwrap(), g.index_of(&p[1]).unwrap()));
            }
            for p in a.backward.windows(2) {
                assert!(g.has_edge(g.index_of(&p[1]).unwrap(), g.index_of(&p[0]).unwrap()));
            }
        }
    }

    #[test]
    fn anchor_hints_are_honoured() {
        let seq = CyclicOdometer::binary()
            .materialize(3)
            .unwrap()
            .with_anchor_hint(2, "1".into(), "3".into())
            .unwrap();
        let anchors = select_anchor_threads(&seq, 3).unwrap();
        assert_eq!(anchors[1].forward[0].as_str(), "1");
        assert_eq!(anchors[1].backward[0].as_str(), "3");
        let bad = CyclicOdometer::binary()
            .materialize(3)
            .unwrap()
            .with_anchor_hint(1, "0".into(), "0".into())
            .unwrap()
            .with_anchor_hint(2, "1".into(), "0".into())
            .unwrap();
        assert!(matches!(select_anchor_threads(&bad, 3), Err(Error::AnchorIncoherent { .. })));
    }

    #[test]
    fn fixed_point_lengths_and_word() {
        let e = build_embedding(fixed(), 3, 1, 1).unwrap();
        assert_eq!(e.level(1).path_lengths(), (1, 1));
        assert_eq!(e.level(2).path_lengths(), (9, 9));
        assert_eq!(e.level(3).path_lengths(), (49, 49));
        let (first, _) = image_words(e.level(1)).unwrap();
        assert_eq!(names(&e, 1, &first), ["H", "H", "F:0", "F:0", "H", "F:0", "F:0", "H", "F:0", "F:0"]);
        let h = e.hom(2);
        let at = |j: usize| e.level(1).graph.name(h.image(e.level(2).path1[j])).to_string();
        assert_eq!(at(4), "H");
        assert_eq!(at(2), "F:0");
    }

    #[test]
    fn vertex_count_of_fixed_point_level_three() {
        let e = build_embedding(fixed(), 3, 1, 1).unwrap();
        // 48 interior vertices per path, the hub and the single F vertex.
        assert_eq!(e.level(3).graph.vertex_count(), 48 + 48 + 1 + 1);
    }

    #[test]
    fn first_level_shape() {
        let e = build_embedding(odometer(), 1, 3, 2).unwrap();
        let lv = e.level(1);
        assert_eq!(lv.path_lengths(), (3, 2));
        assert!(lv.graph.has_edge(lv.hub, lv.hub));
        assert_eq!(lv.graph.vertex_count(), 1 + 2 + 1 + 2);
        assert_eq!(lv.graph.edge_count(), 1 + 3 + 2 + 2);
    }

    #[test]
    fn embedded_coverings_validate() {
        for p in [fixed(), odometer()] {
            let e = build_embedding(p, 4, 1, 1).unwrap();
            let r = validate_covering(&e.to_covering());
            assert!(r.is_ok() && r.chain_transitive && r.bidirectional, "{r}");
            let report = verify_construction(&e);
            assert_eq!(report.verdict, Verdict::Pass, "{:?}", report.failures);
        }
    }

    #[test]
    fn explicit_provider_gives_the_same_tower() {
        let gen = CyclicOdometer::binary();
        let explicit: Arc<dyn LevelProvider> = Arc::new(ExplicitProvider::new(gen.materialize(4).unwrap()).unwrap());
        let a = build_embedding(explicit, 4, 1, 1).unwrap();
        let b = build_embedding(Arc::new(gen), 4, 1, 1).unwrap();
        for n in 0..=4 {
            assert_eq!(*a.level(n).graph, *b.level(n).graph);
        }
        for n in 1..=4 {
            assert_eq!(a.hom(n).map(), b.hom(n).map());
        }
    }

    #[test]
    fn budget_is_enforced() {
        let cfg = EmbedConfig { budget: 1000, ..EmbedConfig::default() };
        let err = build_embedding_with(fixed(), 6, cfg).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { level: 5, .. }), "{err}");
    }

    #[test]
    fn flipped_path_image_is_reported() {
        for p in [fixed(), odometer()] {
            let cfg = EmbedConfig { sabotage: Some(Sabotage::FlipPathImage { level: 2 }), ..EmbedConfig::default() };
            let e = build_embedding_with(p, 3, cfg).unwrap();
            let r = verify_construction(&e);
            assert_eq!(r.verdict, Verdict::Fail);
            assert!(r.failures.iter().any(|f| f.starts_with("level 2:") && f.contains("p1:")), "{:?}", r.failures);
        }
    }

    #[test]
    fn outside_bidirectional() {
        for p in [fixed(), odometer()] {
            let e = build_embedding(p.clone(), 4, 1, 1).unwrap();
            for n in 1..=4 {
                assert_eq!(verify_outside_bidirectional(&e, n).verdict, Verdict::Pass);
            }
            let cfg = EmbedConfig { sabotage: Some(Sabotage::ExtraEdge { level: 2 }), ..EmbedConfig::default() };
            let e = build_embedding_with(p, 3, cfg).unwrap();
            let r = verify_outside_bidirectional(&e, 2);
            assert_eq!(r.verdict, Verdict::Fail);
            assert!(r.failures.iter().any(|f| f.starts_with("p1:2")), "{:?}", r.failures);
        }
    }

    #[test]
    fn addresses_round_trip() {
        let e = build_embedding(odometer(), 3, 1, 1).unwrap();
        for n in 0..=3 {
            for v in 0..e.level(n).graph.vertex_count() {
                let a = e.vertex_address(n, v);
                assert_eq!(e.address_vertex(&a), Some(v));
            }
        }
    }
}
