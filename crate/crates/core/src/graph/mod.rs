//! Simple undirected graphs on dense vertex indices `0..n`, stored as one
//! adjacency bit-mask per vertex.
//!
//! Graph values are immutable once built. Every mutating operation
//! (`join`, `delete_vertex`, ...) returns a fresh graph, and deletions
//! renumber the survivors so that indices stay dense.

mod parse;

pub use parse::{parse_edge_list, parse_family_expr, FamilyExpr, ParseError};

use std::fmt;

use thiserror::Error;

/// Largest supported vertex count. Vertex sets are `u64` bit-masks.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has {0} vertices, at most {MAX_VERTICES} are supported")]
    TooManyVertices(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("no edge {0}-{1}")]
    NoSuchEdge(usize, usize),
    #[error("a cycle needs at least 3 vertices, got {0}")]
    CycleTooSmall(usize),
    #[error("relabeling is not a permutation of 0..{0}")]
    NotAPermutation(usize),
}

/// Bit-mask with the low `n` bits set.
#[inline]
pub fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterates the set bits of a mask in increasing order.
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(v)
        }
    })
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

/// Old-to-new index mapping produced by deletions and induced subgraphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Remap {
    forward: Vec<Option<usize>>,
    backward: Vec<usize>,
}

impl Remap {
    fn from_kept(n: usize, kept: u64) -> Self {
        let mut forward = vec![None; n];
        let mut backward = Vec::new();
        for v in bits(kept & full_mask(n)) {
            forward[v] = Some(backward.len());
            backward.push(v);
        }
        Remap { forward, backward }
    }

    /// New index of an old vertex, `None` if it was removed.
    pub fn new_index(&self, old: usize) -> Option<usize> {
        self.forward.get(old).copied().flatten()
    }

    /// Old index of a surviving vertex.
    pub fn old_index(&self, new: usize) -> usize {
        self.backward[new]
    }

    pub fn surviving(&self) -> &[usize] {
        &self.backward
    }
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Result<Self, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        Ok(Graph { n, adj: vec![0; n] })
    }

    /// Builds a graph from an edge list, rejecting loops and repeated edges.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::new(n)?;
        for (u, v) in edges {
            g.insert_edge(u, v)?;
        }
        Ok(g)
    }

    /// Builds a graph directly from adjacency masks. Masks must be symmetric
    /// and loop-free; only used by enumerators that construct them that way.
    pub(crate) fn from_adjacency(adj: Vec<u64>) -> Self {
        debug_assert!(adj.len() <= MAX_VERTICES);
        let g = Graph { n: adj.len(), adj };
        debug_assert!(g.is_consistent());
        g
    }

    fn insert_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
        }
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
        Ok(())
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    /// Mask of all vertices.
    #[inline]
    pub fn vertex_mask(&self) -> u64 {
        full_mask(self.n)
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u] & (1 << v) != 0
    }

    /// Neighborhood of `v` as a bit-mask.
    #[inline]
    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            bits(self.adj[u] & !full_mask(u + 1)).map(move |v| (u, v))
        })
    }

    /// Symmetric, loop-free adjacency with no bits beyond `n`.
    pub fn is_consistent(&self) -> bool {
        (0..self.n).all(|u| {
            self.adj[u] & (1 << u) == 0
                && self.adj[u] & !self.vertex_mask() == 0
                && bits(self.adj[u]).all(|v| self.adj[v] & (1 << u) != 0)
        })
    }

    /// Vertices of `G` and `H` side by side, plus every edge between the
    /// two sides. `H`'s vertices are shifted up by `|G|`.
    pub fn join(&self, other: &Graph) -> Result<Graph, GraphError> {
        let n = self.n + other.n;
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        let left = full_mask(self.n);
        let right = full_mask(n) & !left;
        let mut adj = Vec::with_capacity(n);
        adj.extend(self.adj.iter().map(|m| m | right));
        adj.extend(other.adj.iter().map(|m| (m << self.n) | left));
        Ok(Graph { n, adj })
    }

    /// Removes `x`; later vertices shift down by one.
    pub fn delete_vertex(&self, x: usize) -> Result<(Graph, Remap), GraphError> {
        self.check_vertex(x)?;
        Ok(self.induced_by_mask(self.vertex_mask() & !(1 << x)))
    }

    /// Removes the edge `uv`, keeping all vertex indices.
    pub fn delete_edge(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if !self.has_edge(u, v) {
            return Err(GraphError::NoSuchEdge(u.min(v), u.max(v)));
        }
        let mut g = self.clone();
        g.adj[u] &= !(1 << v);
        g.adj[v] &= !(1 << u);
        Ok(g)
    }

    pub fn induced_subgraph(&self, keep: &[usize]) -> Result<(Graph, Remap), GraphError> {
        let mut mask = 0u64;
        for &v in keep {
            self.check_vertex(v)?;
            mask |= 1 << v;
        }
        Ok(self.induced_by_mask(mask))
    }

    /// Induced subgraph on the vertices in `keep` (bits beyond `n` ignored).
    pub fn induced_by_mask(&self, keep: u64) -> (Graph, Remap) {
        let remap = Remap::from_kept(self.n, keep);
        let adj = remap
            .backward
            .iter()
            .map(|&old| {
                bits(self.adj[old] & keep)
                    .fold(0u64, |m, u| m | 1 << remap.forward[u].expect("kept"))
            })
            .collect();
        (Graph { n: remap.backward.len(), adj }, remap)
    }

    /// `G` plus one isolated vertex with index `n`.
    pub fn augment_isolated(&self) -> Result<Graph, GraphError> {
        if self.n + 1 > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(self.n + 1));
        }
        let mut adj = self.adj.clone();
        adj.push(0);
        Ok(Graph { n: self.n + 1, adj })
    }

    /// Relabels vertex `v` as `perm[v]`. `perm` must be a permutation of `0..n`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph, GraphError> {
        let mut seen = 0u64;
        for &p in perm {
            if p >= self.n || seen & (1 << p) != 0 {
                return Err(GraphError::NotAPermutation(self.n));
            }
            seen |= 1 << p;
        }
        if perm.len() != self.n {
            return Err(GraphError::NotAPermutation(self.n));
        }
        Graph::from_edges(self.n, self.edges().map(|(u, v)| (perm[u], perm[v])))
    }

    /// Replayable description in the family grammar: `E<n>`, `K<n>`, or a
    /// chain of `minus_edge` applied to `K<n>`.
    pub fn to_family_expr(&self) -> String {
        if self.edge_count() == 0 {
            return format!("E{}", self.n);
        }
        let mut expr = format!("K{}", self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    expr = format!("minus_edge({expr},{u},{v})");
                }
            }
        }
        expr
    }

    /// Edge-list text: vertex count line followed by one `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=[", self.n)?;
        for (i, (u, v)) in self.edges().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{u}-{v}")?;
        }
        write!(f, "])")
    }
}

pub fn make_complete(n: usize) -> Result<Graph, GraphError> {
    if n > MAX_VERTICES {
        return Err(GraphError::TooManyVertices(n));
    }
    let all = full_mask(n);
    Ok(Graph { n, adj: (0..n).map(|v| all & !(1 << v)).collect() })
}

pub fn make_empty(n: usize) -> Result<Graph, GraphError> {
    Graph::new(n)
}

pub fn make_cycle(n: usize) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(GraphError::CycleTooSmall(n));
    }
    Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n)))
}

pub fn make_path(n: usize) -> Result<Graph, GraphError> {
    Graph::from_edges(n, (1..n).map(|v| (v - 1, v)))
}
