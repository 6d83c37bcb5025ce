//! Finite directed graphs viewed as relations on a vertex set, walks over
//! them, and the few combinatorial primitives the embedding needs:
//! surjectivity, irreducibility and edge-covering walks.
//!
//! Vertices carry opaque string ids. Internally every graph stores its
//! vertices sorted lexicographically, so vertex indices, adjacency lists and
//! the edge iteration order are all canonical.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Opaque vertex token. Ordered lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(Arc<str>);

impl VertexId {
    pub fn new(name: impl AsRef<str>) -> Self {
        VertexId(Arc::from(name.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl From<&str> for VertexId {
    fn from(s: &str) -> Self {
        VertexId::new(s)
    }
}

impl From<String> for VertexId {
    fn from(s: String) -> Self {
        VertexId(Arc::from(s))
    }
}

impl From<&VertexId> for VertexId {
    fn from(v: &VertexId) -> Self {
        v.clone()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(VertexId),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(VertexId, VertexId),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(VertexId),
    #[error("graph is not a surjective relation: {0}")]
    NotSurjective(String),
    #[error("graph is not irreducible")]
    NotIrreducible,
    #[error("({0}, {1}) is not an edge")]
    NotAnEdge(VertexId, VertexId),
    #[error("walk ends at `{0}` but the next one starts at `{1}`")]
    EndpointMismatch(VertexId, VertexId),
    #[error("walks belong to different graphs")]
    GraphMismatch,
    #[error("range [{a}, {b}] is invalid for a walk of length {len}")]
    IndexOutOfRange { a: usize, b: usize, len: usize },
    #[error("a walk needs at least one vertex")]
    EmptyWalk,
}

/// A finite directed graph `(V, E)` with `E ⊆ V × V`.
///
/// Construction checks that edges reference known vertices and that nothing
/// is duplicated. It does not require surjectivity; use
/// [`DirectedGraph::validate_surjective`] for that, so invalid inputs can be
/// reported rather than rejected.
#[derive(Clone)]
pub struct DirectedGraph {
    names: Vec<VertexId>,
    index: HashMap<VertexId, usize>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
    edge_count: usize,
}

impl DirectedGraph {
    pub fn new<V, A, B>(
        vertices: impl IntoIterator<Item = V>,
        edges: impl IntoIterator<Item = (A, B)>,
    ) -> Result<Self, GraphError>
    where
        V: Into<VertexId>,
        A: Into<VertexId>,
        B: Into<VertexId>,
    {
        let mut names: Vec<VertexId> = vertices.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(GraphError::Empty);
        }
        names.sort();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateVertex(w[0].clone()));
        }
        let index: HashMap<VertexId, usize> =
            names.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();

        let mut succ = vec![Vec::new(); names.len()];
        let mut pred = vec![Vec::new(); names.len()];
        let mut edge_count = 0;
        for (a, b) in edges {
            let (a, b) = (a.into(), b.into());
            let u = *index.get(&a).ok_or_else(|| GraphError::UnknownVertex(a.clone()))?;
            let v = *index.get(&b).ok_or_else(|| GraphError::UnknownVertex(b.clone()))?;
            succ[u].push(v);
            pred[v].push(u);
            edge_count += 1;
        }
        for (u, list) in succ.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateEdge(names[u].clone(), names[w[0]].clone()));
            }
        }
        for list in pred.iter_mut() {
            list.sort_unstable();
        }
        Ok(DirectedGraph { names, index, succ, pred, edge_count })
    }

    /// The one-vertex graph `({v}, {(v, v)})`.
    pub fn singleton(name: impl Into<VertexId>) -> Self {
        let v = name.into();
        DirectedGraph::new([v.clone()], [(v.clone(), v)]).expect("singleton graph is well formed")
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Vertex ids in canonical (sorted) order; position = vertex index.
    pub fn vertices(&self) -> &[VertexId] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &VertexId {
        &self.names[v]
    }

    pub fn index_of(&self, v: &VertexId) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn index_of_str(&self, v: &str) -> Option<usize> {
        self.index.get(&VertexId::new(v)).copied()
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    pub fn predecessors(&self, v: usize) -> &[usize] {
        &self.pred[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.succ[u].binary_search(&v).is_ok()
    }

    /// All edges in canonical order (by source, then target).
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ.iter().enumerate().flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v)))
    }

    pub fn is_singleton(&self) -> bool {
        self.names.len() == 1 && self.edge_count == 1
    }

    /// Lists every vertex lacking an incoming or an outgoing edge.
    pub fn validate_surjective(&self) -> SurjectivityReport {
        let violations = (0..self.names.len())
            .filter_map(|v| {
                let no_in = self.pred[v].is_empty();
                let no_out = self.succ[v].is_empty();
                (no_in || no_out).then(|| SurjectivityViolation {
                    vertex: self.names[v].clone(),
                    no_in_edge: no_in,
                    no_out_edge: no_out,
                })
            })
            .collect();
        SurjectivityReport { violations }
    }

    /// Strong connectivity. Rejects graphs that are not surjective relations.
    pub fn is_irreducible(&self) -> Result<bool, GraphError> {
        let report = self.validate_surjective();
        if !report.is_ok() {
            return Err(GraphError::NotSurjective(report.to_string()));
        }
        let n = self.names.len();
        let forward = reach_count(n, 0, |v| &self.succ[v]);
        let backward = reach_count(n, 0, |v| &self.pred[v]);
        Ok(forward == n && backward == n)
    }

    /// Breadth-first shortest walk from `from` to `to` (neighbours visited in
    /// canonical order). `Some(vec![from])` when `from == to`.
    pub fn shortest_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        if from == to {
            return Some(vec![from]);
        }
        let mut parent = vec![usize::MAX; self.names.len()];
        parent[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.succ[u] {
                if parent[v] != usize::MAX {
                    continue;
                }
                parent[v] = u;
                if v == to {
                    let mut path = vec![to];
                    let mut cur = to;
                    while cur != from {
                        cur = parent[cur];
                        path.push(cur);
                    }
                    path.reverse();
                    return Some(path);
                }
                queue.push_back(v);
            }
        }
        None
    }

    /// A walk from `from` to `to` that traverses every edge at least once.
    ///
    /// Greedy and deterministic: while the current vertex has an unused
    /// out-edge, take it (its self-loop first, otherwise the smallest
    /// target); when stuck, travel along a shortest path to the source of
    /// the smallest unused edge. Finally travel to `to` along a shortest path.
    pub fn edge_covering_walk(&self, from: usize, to: usize) -> Result<Walk<'_>, GraphError> {
        if !self.is_irreducible()? {
            return Err(GraphError::NotIrreducible);
        }
        let mut used: Vec<Vec<bool>> = self.succ.iter().map(|s| vec![false; s.len()]).collect();
        let mut remaining = self.edge_count;
        let mark = |used: &mut Vec<Vec<bool>>, u: usize, v: usize, remaining: &mut usize| {
            let k = self.succ[u].binary_search(&v).expect("edge exists");
            if !used[u][k] {
                used[u][k] = true;
                *remaining -= 1;
            }
        };

        let edge_list: Vec<(usize, usize)> = self.edges().collect();
        let mut cursor = 0;
        let mut seq = vec![from];
        let mut cur = from;
        while remaining > 0 {
            let local = {
                let out = &self.succ[cur];
                let self_loop = out.binary_search(&cur).ok().filter(|&k| !used[cur][k]);
                self_loop.or_else(|| (0..out.len()).find(|&k| !used[cur][k]))
            };
            if let Some(k) = local {
                let next = self.succ[cur][k];
                mark(&mut used, cur, next, &mut remaining);
                seq.push(next);
                cur = next;
                continue;
            }
            while {
                let (u, v) = edge_list[cursor];
                used[u][self.succ[u].binary_search(&v).expect("edge exists")]
            } {
                cursor += 1;
            }
            let (source, _) = edge_list[cursor];
            let path = self.shortest_path(cur, source).ok_or(GraphError::NotIrreducible)?;
            for pair in path.windows(2) {
                mark(&mut used, pair[0], pair[1], &mut remaining);
                seq.push(pair[1]);
            }
            cur = source;
        }
        let tail = self.shortest_path(cur, to).ok_or(GraphError::NotIrreducible)?;
        seq.extend_from_slice(&tail[1..]);
        Ok(Walk { graph: self, vertices: seq })
    }
}

fn reach_count<'a>(n: usize, start: usize, next: impl Fn(usize) -> &'a [usize]) -> usize {
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut stack = vec![start];
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &v in next(u) {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                stack.push(v);
            }
        }
    }
    count
}

impl PartialEq for DirectedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.succ == other.succ
    }
}

impl Eq for DirectedGraph {}

impl fmt::Debug for DirectedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DirectedGraph")
            .field("vertices", &self.names.len())
            .field("edges", &self.edge_count)
            .finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurjectivityViolation {
    pub vertex: VertexId,
    pub no_in_edge: bool,
    pub no_out_edge: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SurjectivityReport {
    pub violations: Vec<SurjectivityViolation>,
}

impl SurjectivityReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for SurjectivityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        let parts: Vec<String> = self
            .violations
            .iter()
            .map(|v| match (v.no_in_edge, v.no_out_edge) {
                (true, true) => format!("{} has no in-edge and no out-edge", v.vertex),
                (true, false) => format!("{} has no in-edge", v.vertex),
                _ => format!("{} has no out-edge", v.vertex),
            })
            .collect();
        f.write_str(&parts.join("; "))
    }
}

/// A walk `(v_0, ..., v_l)` in a graph; length `l` counts edges.
#[derive(Clone)]
pub struct Walk<'g> {
    graph: &'g DirectedGraph,
    vertices: Vec<usize>,
}

impl<'g> Walk<'g> {
    pub fn from_indices(graph: &'g DirectedGraph, vertices: Vec<usize>) -> Result<Self, GraphError> {
        if vertices.is_empty() {
            return Err(GraphError::EmptyWalk);
        }
        for pair in vertices.windows(2) {
            if !graph.has_edge(pair[0], pair[1]) {
                return Err(GraphError::NotAnEdge(
                    graph.name(pair[0]).clone(),
                    graph.name(pair[1]).clone(),
                ));
            }
        }
        Ok(Walk { graph, vertices })
    }

    pub fn from_names<V: Into<VertexId>>(
        graph: &'g DirectedGraph,
        names: impl IntoIterator<Item = V>,
    ) -> Result<Self, GraphError> {
        let vertices = names
            .into_iter()
            .map(|n| {
                let id = n.into();
                graph.index_of(&id).ok_or(GraphError::UnknownVertex(id))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Walk::from_indices(graph, vertices)
    }

    pub fn graph(&self) -> &'g DirectedGraph {
        self.graph
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn indices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn into_indices(self) -> Vec<usize> {
        self.vertices
    }

    pub fn names(&self) -> impl Iterator<Item = &'g VertexId> + '_ {
        self.vertices.iter().map(|&v| self.graph.name(v))
    }

    pub fn first(&self) -> usize {
        self.vertices[0]
    }

    pub fn last(&self) -> usize {
        *self.vertices.last().expect("walks are non-empty")
    }

    /// True when all vertices are mutually distinct.
    pub fn is_path(&self) -> bool {
        let set: BTreeSet<usize> = self.vertices.iter().copied().collect();
        set.len() == self.vertices.len()
    }

    pub fn vertex_set(&self) -> BTreeSet<usize> {
        self.vertices.iter().copied().collect()
    }

    pub fn edge_set(&self) -> BTreeSet<(usize, usize)> {
        self.vertices.windows(2).map(|p| (p[0], p[1])).collect()
    }

    pub fn covers_all_edges(&self) -> bool {
        self.edge_set().len() == self.graph.edge_count()
    }

    /// `w1 w2`: the junction vertex appears once.
    pub fn concat(&self, other: &Walk<'g>) -> Result<Walk<'g>, GraphError> {
        if !std::ptr::eq(self.graph, other.graph) && self.graph != other.graph {
            return Err(GraphError::GraphMismatch);
        }
        if self.last() != other.first() {
            return Err(GraphError::EndpointMismatch(
                self.graph.name(self.last()).clone(),
                other.graph.name(other.first()).clone(),
            ));
        }
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&other.vertices[1..]);
        Ok(Walk { graph: self.graph, vertices })
    }

    /// `w[a, b]`, of length `b - a`.
    pub fn subwalk(&self, a: usize, b: usize) -> Result<Walk<'g>, GraphError> {
        if a > b || b > self.len() {
            return Err(GraphError::IndexOutOfRange { a, b, len: self.len() });
        }
        Ok(Walk { graph: self.graph, vertices: self.vertices[a..=b].to_vec() })
    }
}

impl PartialEq for Walk<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.graph == other.graph
    }
}

impl fmt::Debug for Walk<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.names()).finish()
    }
}
