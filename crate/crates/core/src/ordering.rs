//! Partial linear orderings of vertices (k-permutations) and the
//! back-neighbor scores they induce.
//!
//! The score of a vertex is `1 +` the number of its neighbors ordered
//! before it. A vertex's score is fixed the moment it is ordered.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{bits, Graph, MAX_VERTICES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderingError {
    #[error("vertex {0} appears twice")]
    Repeated(usize),
    #[error("vertex {vertex} is not a vertex of a graph on {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
    #[error("vertex {0} has not been ordered")]
    Unordered(usize),
    #[error("ordering has {len} of {n} vertices, a complete ordering is required")]
    Incomplete { len: usize, n: usize },
}

/// A sequence of distinct vertices. Range membership is tracked as a bit-mask.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Ordering {
    seq: Vec<usize>,
    #[serde(skip)]
    range: u64,
}

impl Ordering {
    pub fn empty() -> Self {
        Ordering::default()
    }

    pub fn new(seq: Vec<usize>) -> Result<Self, OrderingError> {
        let mut range = 0u64;
        for &v in &seq {
            if v >= MAX_VERTICES {
                return Err(OrderingError::OutOfRange { vertex: v, n: MAX_VERTICES });
            }
            if range & (1 << v) != 0 {
                return Err(OrderingError::Repeated(v));
            }
            range |= 1 << v;
        }
        Ok(Ordering { seq, range })
    }

    /// Like [`Ordering::new`], additionally requiring every entry to be a
    /// vertex of `graph`.
    pub fn for_graph(seq: Vec<usize>, graph: &Graph) -> Result<Self, OrderingError> {
        let ord = Ordering::new(seq)?;
        ord.check_within(graph)?;
        Ok(ord)
    }

    pub fn check_within(&self, graph: &Graph) -> Result<(), OrderingError> {
        let n = graph.vertex_count();
        match self.seq.iter().find(|&&v| v >= n) {
            Some(&vertex) => Err(OrderingError::OutOfRange { vertex, n }),
            None => Ok(()),
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.seq.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    /// The set of ordered vertices as a bit-mask.
    #[inline]
    pub fn range(&self) -> u64 {
        self.range
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < MAX_VERTICES && self.range & (1 << v) != 0
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.seq
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.seq.iter().copied()
    }

    pub fn last(&self) -> Option<usize> {
        self.seq.last().copied()
    }

    pub fn position(&self, v: usize) -> Option<usize> {
        self.seq.iter().position(|&u| u == v)
    }

    pub fn push(&mut self, v: usize) -> Result<(), OrderingError> {
        if v >= MAX_VERTICES {
            return Err(OrderingError::OutOfRange { vertex: v, n: MAX_VERTICES });
        }
        if self.contains(v) {
            return Err(OrderingError::Repeated(v));
        }
        self.seq.push(v);
        self.range |= 1 << v;
        Ok(())
    }

    /// Appends `v`, returning the extended ordering.
    pub fn with(&self, v: usize) -> Result<Ordering, OrderingError> {
        let mut out = self.clone();
        out.push(v)?;
        Ok(out)
    }

    /// `self` followed by `other`; the two ranges must be disjoint.
    pub fn concat(&self, other: &Ordering) -> Result<Ordering, OrderingError> {
        if let Some(v) = bits(self.range & other.range).next() {
            return Err(OrderingError::Repeated(v));
        }
        let mut seq = self.seq.clone();
        seq.extend_from_slice(&other.seq);
        Ok(Ordering { seq, range: self.range | other.range })
    }

    pub fn prefix(&self, len: usize) -> Ordering {
        Ordering::new(self.seq[..len].to_vec()).expect("prefix of a valid ordering")
    }

    /// Applies a vertex relabeling, dropping vertices mapped to `None`.
    pub fn map_vertices(&self, f: impl Fn(usize) -> Option<usize>) -> Ordering {
        Ordering::new(self.seq.iter().filter_map(|&v| f(v)).collect())
            .expect("relabeling must be injective")
    }
}

impl TryFrom<Vec<usize>> for Ordering {
    type Error = OrderingError;

    fn try_from(seq: Vec<usize>) -> Result<Self, Self::Error> {
        Ordering::new(seq)
    }
}

impl From<Ordering> for Vec<usize> {
    fn from(o: Ordering) -> Self {
        o.seq
    }
}

impl fmt::Debug for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.seq.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Score `v` would get if ordered right after the vertices in `before`.
#[inline]
pub fn score_against(graph: &Graph, before: u64, v: usize) -> usize {
    1 + (graph.neighbors(v) & before).count_ones() as usize
}

/// `1 +` the number of neighbors of `v` that precede it in `tau`.
pub fn back_score(graph: &Graph, tau: &Ordering, v: usize) -> Result<usize, OrderingError> {
    graph
        .check_vertex(v)
        .map_err(|_| OrderingError::OutOfRange { vertex: v, n: graph.vertex_count() })?;
    let pos = tau.position(v).ok_or(OrderingError::Unordered(v))?;
    let before = tau.seq[..pos].iter().fold(0u64, |m, &u| m | 1 << u);
    Ok(score_against(graph, before, v))
}

/// Back-scores of every ordered vertex, in ordering sequence.
pub fn back_scores(graph: &Graph, tau: &Ordering) -> Vec<usize> {
    let mut before = 0u64;
    tau.iter()
        .map(|v| {
            let s = score_against(graph, before, v);
            before |= 1 << v;
            s
        })
        .collect()
}

/// Maximum back-score over a (possibly partial) ordering; 0 when empty.
pub fn max_back_score(graph: &Graph, tau: &Ordering) -> usize {
    back_scores(graph, tau).into_iter().max().unwrap_or(0)
}

/// Coloring number of `graph` with respect to a complete ordering.
pub fn col_of_ordering(graph: &Graph, tau: &Ordering) -> Result<usize, OrderingError> {
    tau.check_within(graph)?;
    if tau.len() != graph.vertex_count() {
        return Err(OrderingError::Incomplete { len: tau.len(), n: graph.vertex_count() });
    }
    Ok(max_back_score(graph, tau))
}

/// Smallest-last ordering: repeatedly strip a vertex of minimum remaining
/// degree (lowest index on ties) and order the stripped vertices in reverse.
pub fn smallest_last_ordering(graph: &Graph) -> Ordering {
    let mut remaining = graph.vertex_mask();
    let mut stripped = Vec::with_capacity(graph.vertex_count());
    while remaining != 0 {
        let v = bits(remaining)
            .min_by_key(|&v| (graph.neighbors(v) & remaining).count_ones())
            .expect("nonempty");
        stripped.push(v);
        remaining &= !(1 << v);
    }
    stripped.reverse();
    Ordering::new(stripped).expect("each vertex stripped once")
}

/// Degeneracy of the graph; 0 for graphs without edges.
pub fn degeneracy(graph: &Graph) -> usize {
    coloring_number(graph).saturating_sub(1)
}

/// Exact coloring number: degeneracy + 1, or 0 for the empty graph.
pub fn coloring_number(graph: &Graph) -> usize {
    max_back_score(graph, &smallest_last_ordering(graph))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_complete, make_cycle, make_empty};

    fn ord(v: &[usize]) -> Ordering {
        Ordering::new(v.to_vec()).unwrap()
    }

    fn all_orderings(n: usize) -> Vec<Vec<usize>> {
        fn rec(n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == n {
                out.push(cur.clone());
                return;
            }
            for v in 0..n {
                if !cur.contains(&v) {
                    cur.push(v);
                    rec(n, cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        rec(n, &mut Vec::new(), &mut out);
        out
    }

    /// Brute-force minimum over every complete ordering.
    fn brute_col(g: &Graph) -> usize {
        all_orderings(g.vertex_count())
            .into_iter()
            .map(|t| col_of_ordering(g, &ord(&t)).unwrap())
            .min()
            .unwrap_or(0)
    }

    #[test]
    fn concatenation() {
        assert_eq!(ord(&[0, 1]).concat(&ord(&[2])).unwrap(), ord(&[0, 1, 2]));
        assert_eq!(Ordering::empty().concat(&ord(&[4, 2])).unwrap(), ord(&[4, 2]));
        assert_eq!(ord(&[0]).concat(&ord(&[0])), Err(OrderingError::Repeated(0)));
        assert_eq!(Ordering::new(vec![1, 2, 1]), Err(OrderingError::Repeated(1)));
    }

    #[test]
    fn back_scores_of_small_graphs() {
        let k3 = make_complete(3).unwrap();
        assert_eq!(back_score(&k3, &ord(&[0, 1, 2]), 2), Ok(3));
        let e3 = make_empty(3).unwrap();
        for v in 0..3 {
            assert_eq!(back_score(&e3, &ord(&[2, 0, 1]), v), Ok(1));
        }
        let c5 = make_cycle(5).unwrap();
        assert_eq!(back_score(&c5, &ord(&[0, 2, 4, 1, 3]), 3), Ok(3));
        assert_eq!(back_score(&k3, &ord(&[0, 1]), 2), Err(OrderingError::Unordered(2)));
    }

    #[test]
    fn coloring_number_of_orderings() {
        let k3 = make_complete(3).unwrap();
        for t in all_orderings(3) {
            assert_eq!(col_of_ordering(&k3, &ord(&t)), Ok(3));
        }
        let c5 = make_cycle(5).unwrap();
        assert_eq!(col_of_ordering(&c5, &ord(&[0, 1, 2, 3, 4])), Ok(3));
        let j = k3.join(&make_empty(2).unwrap()).unwrap();
        assert_eq!(col_of_ordering(&j, &ord(&[0, 1, 2, 3, 4])), Ok(4));
        assert_eq!(
            col_of_ordering(&k3, &ord(&[0, 1])),
            Err(OrderingError::Incomplete { len: 2, n: 3 })
        );
        assert_eq!(col_of_ordering(&make_empty(0).unwrap(), &Ordering::empty()), Ok(0));
    }

    #[test]
    fn coloring_numbers() {
        for n in 0..7 {
            assert_eq!(coloring_number(&make_complete(n).unwrap()), n);
        }
        let c5 = make_cycle(5).unwrap();
        assert_eq!(brute_col(&c5), 3);
        assert_eq!(coloring_number(&c5), 3);
        let j = make_complete(3).unwrap().join(&make_empty(2).unwrap()).unwrap();
        assert_eq!(brute_col(&j), 4);
        assert_eq!(coloring_number(&j), 4);
        assert_eq!(degeneracy(&j), 3);
        assert_eq!(coloring_number(&make_empty(0).unwrap()), 0);
        assert_eq!(coloring_number(&make_empty(4).unwrap()), 1);
    }

    #[test]
    fn smallest_last_is_optimal_on_all_small_graphs() {
        for n in 0..=5 {
            let orders = all_orderings(n);
            for g in crate::harness::enumerate::labeled_graphs(n) {
                let col = coloring_number(&g);
                let mut best = usize::MAX;
                for t in &orders {
                    let t = ord(t);
                    let c = col_of_ordering(&g, &t).unwrap();
                    assert!(c >= col, "{g:?} {t}");
                    for v in t.iter() {
                        assert!(back_score(&g, &t, v).unwrap() <= g.degree(v) + 1);
                    }
                    best = best.min(c);
                }
                if n > 0 {
                    assert_eq!(best, col, "{g:?}");
                }
                let sl = smallest_last_ordering(&g);
                assert_eq!(col_of_ordering(&g, &sl).unwrap(), col);
            }
        }
    }
}
