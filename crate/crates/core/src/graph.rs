//! Oriented multigraphs and the elementary moves on them.
//!
//! A graph is stored as a vertex count together with a sequence of directed
//! edges. The vertex labels and the edge directions together form the
//! orientation representative; there is no global sign stored on a graph.
//! Signs only appear in [`SignedGraph`] and in the outputs of the moves.

use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;

use crate::error::GraphError;
use crate::faults::Faults;

/// A 1-based vertex label.
pub type Vertex = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn from_odd(odd: bool) -> Sign {
        if odd {
            Sign::Neg
        } else {
            Sign::Pos
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn is_neg(self) -> bool {
        self == Sign::Neg
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_odd(self != rhs)
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Pos => "+1",
            Sign::Neg => "-1",
        })
    }
}

/// Sign of a permutation given as a sequence of distinct values.
///
/// Only the relative order of the values matters, so both 0-based and 1-based
/// images are accepted.
pub fn permutation_sign(images: &[Vertex]) -> Sign {
    let mut inversions = 0usize;
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            if images[i] > images[j] {
                inversions += 1;
            }
        }
    }
    Sign::from_odd(inversions % 2 == 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum End {
    Src,
    Tgt,
}

/// One end of an edge. `edge` is the 0-based position in the edge sequence;
/// the text form `e<k>.s` / `e<k>.t` uses the 1-based index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfEdge {
    pub edge: usize,
    pub end: End,
}

impl HalfEdge {
    pub fn src(edge: usize) -> HalfEdge {
        HalfEdge { edge, end: End::Src }
    }

    pub fn tgt(edge: usize) -> HalfEdge {
        HalfEdge { edge, end: End::Tgt }
    }

    pub fn bar(self) -> HalfEdge {
        HalfEdge {
            edge: self.edge,
            end: match self.end {
                End::Src => End::Tgt,
                End::Tgt => End::Src,
            },
        }
    }

    /// Dense index `2 * edge + end`.
    pub fn index(self) -> usize {
        2 * self.edge + usize::from(self.end == End::Tgt)
    }

    pub fn from_index(index: usize) -> HalfEdge {
        HalfEdge {
            edge: index / 2,
            end: if index.is_multiple_of(2) { End::Src } else { End::Tgt },
        }
    }
}

impl fmt::Display for HalfEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let end = match self.end {
            End::Src => 's',
            End::Tgt => 't',
        };
        write!(f, "e{}.{}", self.edge + 1, end)
    }
}

impl FromStr for HalfEdge {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GraphError::Parse(format!("bad half-edge `{s}`, expected e<k>.s or e<k>.t"));
        let rest = s.trim().strip_prefix('e').ok_or_else(bad)?;
        let (index, end) = rest.split_once('.').ok_or_else(bad)?;
        let k: usize = index.parse().map_err(|_| bad())?;
        if k == 0 {
            return Err(bad());
        }
        let end = match end {
            "s" => End::Src,
            "t" => End::Tgt,
            _ => return Err(bad()),
        };
        Ok(HalfEdge { edge: k - 1, end })
    }
}

/// Loop-permitting multigraph with labeled vertices and directed edges.
///
/// `PartialEq` compares representatives literally (same labels, same edge
/// sequence). Equality in the graph complex goes through
/// [`canonicalize`](crate::canonical::canonicalize).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrientedGraph {
    vertex_count: u32,
    edges: Vec<(Vertex, Vertex)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SignedGraph {
    Zero,
    Signed(Sign, OrientedGraph),
}

impl SignedGraph {
    pub fn sign(&self) -> Option<Sign> {
        match self {
            SignedGraph::Zero => None,
            SignedGraph::Signed(s, _) => Some(*s),
        }
    }

    pub fn graph(&self) -> Option<&OrientedGraph> {
        match self {
            SignedGraph::Zero => None,
            SignedGraph::Signed(_, g) => Some(g),
        }
    }

    pub fn times(self, sign: Sign) -> SignedGraph {
        match self {
            SignedGraph::Zero => SignedGraph::Zero,
            SignedGraph::Signed(s, g) => SignedGraph::Signed(s * sign, g),
        }
    }
}

/// How labels and half-edges of a graph correspond to those of the result of
/// a move.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    /// Indexed by old label - 1.
    pub vertex_map: Vec<Option<Vertex>>,
    /// Indexed by [`HalfEdge::index`] of the old graph.
    pub half_edge_map: Vec<Option<HalfEdge>>,
    /// Half-edges of the result that have no preimage.
    pub fresh_halves: Vec<HalfEdge>,
    pub merged_vertex: Option<Vertex>,
}

impl Provenance {
    pub fn vertex(&self, v: Vertex) -> Option<Vertex> {
        self.vertex_map.get(v as usize - 1).copied().flatten()
    }

    pub fn half(&self, h: HalfEdge) -> Option<HalfEdge> {
        self.half_edge_map.get(h.index()).copied().flatten()
    }

    /// Provenance of `self` followed by `next`.
    pub fn then(&self, next: &Provenance) -> Provenance {
        Provenance {
            vertex_map: self
                .vertex_map
                .iter()
                .map(|v| v.and_then(|v| next.vertex(v)))
                .collect(),
            half_edge_map: self
                .half_edge_map
                .iter()
                .map(|h| h.and_then(|h| next.half(h)))
                .collect(),
            fresh_halves: self
                .fresh_halves
                .iter()
                .filter_map(|&h| next.half(h))
                .chain(next.fresh_halves.iter().copied())
                .collect(),
            merged_vertex: next.merged_vertex,
        }
    }
}

/// Result of a move that did not produce the zero class.
#[derive(Clone, Debug)]
pub struct Derived {
    pub sign: Sign,
    pub graph: OrientedGraph,
    pub provenance: Provenance,
}

impl Derived {
    pub fn signed(&self) -> SignedGraph {
        SignedGraph::Signed(self.sign, self.graph.clone())
    }
}

impl OrientedGraph {
    /// Builds a graph, checking labels and the valency bound.
    pub fn new(vertex_count: u32, edges: Vec<(Vertex, Vertex)>) -> Result<Self, GraphError> {
        if vertex_count == 0 {
            return Err(GraphError::NoVertices);
        }
        for &(s, t) in &edges {
            for v in [s, t] {
                if v == 0 || v > vertex_count {
                    return Err(GraphError::VertexOutOfRange {
                        vertex: v,
                        vertex_count,
                    });
                }
            }
        }
        let g = OrientedGraph {
            vertex_count,
            edges,
        };
        for (i, val) in g.valencies().into_iter().enumerate() {
            if val < 3 {
                return Err(GraphError::LowValency {
                    vertex: i as Vertex + 1,
                    valency: val,
                });
            }
        }
        Ok(g)
    }

    /// Builds a graph without validation. Labels must lie in `1..=vertex_count`.
    pub(crate) fn from_raw(vertex_count: u32, edges: Vec<(Vertex, Vertex)>) -> Self {
        debug_assert!(edges
            .iter()
            .all(|&(s, t)| s >= 1 && t >= 1 && s <= vertex_count && t <= vertex_count));
        OrientedGraph {
            vertex_count,
            edges,
        }
    }

    pub fn vertex_count(&self) -> u32 {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn vertex_of(&self, h: HalfEdge) -> Vertex {
        let (s, t) = self.edges[h.edge];
        match h.end {
            End::Src => s,
            End::Tgt => t,
        }
    }

    pub fn is_loop(&self, edge: usize) -> bool {
        let (s, t) = self.edges[edge];
        s == t
    }

    pub fn has_loop(&self) -> bool {
        self.edges.iter().any(|&(s, t)| s == t)
    }

    /// Half-edge incidences per vertex, indexed by label - 1. A loop counts twice.
    pub fn valencies(&self) -> Vec<usize> {
        let mut val = vec![0; self.vertex_count as usize];
        for &(s, t) in &self.edges {
            val[s as usize - 1] += 1;
            val[t as usize - 1] += 1;
        }
        val
    }

    pub fn halves(&self) -> impl Iterator<Item = HalfEdge> {
        (0..2 * self.edges.len()).map(HalfEdge::from_index)
    }

    fn check_edge(&self, edge: usize) -> Result<(), GraphError> {
        if edge >= self.edges.len() {
            return Err(GraphError::EdgeOutOfRange {
                edge: edge + 1,
                edge_count: self.edges.len(),
            });
        }
        Ok(())
    }

    /// Component id of every vertex (indexed by label - 1), numbered in order
    /// of first appearance, together with the number of components.
    pub fn components(&self) -> (Vec<usize>, usize) {
        self.components_without(None)
    }

    fn components_without(&self, skip: Option<usize>) -> (Vec<usize>, usize) {
        let n = self.vertex_count as usize;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (i, &(s, t)) in self.edges.iter().enumerate() {
            if Some(i) == skip {
                continue;
            }
            let a = find(&mut parent, s as usize - 1);
            let b = find(&mut parent, t as usize - 1);
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut ids = vec![usize::MAX; n];
        let mut root_id = vec![usize::MAX; n];
        let mut count = 0;
        for v in 0..n {
            let r = find(&mut parent, v);
            if root_id[r] == usize::MAX {
                root_id[r] = count;
                count += 1;
            }
            ids[v] = root_id[r];
        }
        (ids, count)
    }

    pub fn is_connected(&self) -> bool {
        self.components().1 == 1
    }

    /// Connected and bridgeless. Loops are never bridges.
    pub fn is_one_pi(&self) -> bool {
        if !self.is_connected() {
            return false;
        }
        (0..self.edges.len())
            .filter(|&e| !self.is_loop(e))
            .all(|e| self.components_without(Some(e)).1 == 1)
    }

    /// Disjoint union; the labels of `other` are shifted by this graph's
    /// vertex count and its edges come after ours.
    pub fn product(&self, other: &OrientedGraph) -> OrientedGraph {
        let shift = self.vertex_count;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(s, t)| (s + shift, t + shift)));
        OrientedGraph::from_raw(self.vertex_count + other.vertex_count, edges)
    }

    /// Relabels every vertex `v` as `perm[v - 1]`.
    pub fn relabel(&self, perm: &[Vertex]) -> Result<SignedGraph, GraphError> {
        let n = self.vertex_count as usize;
        let mut seen = vec![false; n];
        if perm.len() != n {
            return Err(GraphError::NotAPermutation);
        }
        for &p in perm {
            if p == 0 || p as usize > n || seen[p as usize - 1] {
                return Err(GraphError::NotAPermutation);
            }
            seen[p as usize - 1] = true;
        }
        let edges = self
            .edges
            .iter()
            .map(|&(s, t)| (perm[s as usize - 1], perm[t as usize - 1]))
            .collect();
        Ok(SignedGraph::Signed(
            permutation_sign(perm),
            OrientedGraph::from_raw(self.vertex_count, edges),
        ))
    }

    pub fn reverse_edge(&self, edge: usize) -> Result<SignedGraph, GraphError> {
        self.check_edge(edge)?;
        let mut edges = self.edges.clone();
        let (s, t) = edges[edge];
        edges[edge] = (t, s);
        Ok(SignedGraph::Signed(
            Sign::Neg,
            OrientedGraph::from_raw(self.vertex_count, edges),
        ))
    }

    /// Contracts `edge`. Returns `None` (the zero class) for a loop.
    pub fn contract(&self, edge: usize) -> Result<Option<Derived>, GraphError> {
        self.check_edge(edge)?;
        Ok(self.contract_with(edge, Faults::NONE))
    }

    pub(crate) fn contract_with(&self, edge: usize, faults: Faults) -> Option<Derived> {
        let (s, t) = self.edges[edge];
        if s == t {
            return None;
        }
        // Order-preserving permutation sending s to 1 and t to 2.
        let n = self.vertex_count as usize;
        let mut sigma = vec![0; n];
        sigma[s as usize - 1] = 1;
        sigma[t as usize - 1] = 2;
        let mut next = 3;
        for slot in sigma.iter_mut() {
            if *slot == 0 {
                *slot = next;
                next += 1;
            }
        }
        let sign = if faults.drop_contraction_sign {
            Sign::Pos
        } else {
            permutation_sign(&sigma)
        };
        let vertex_map: Vec<Option<Vertex>> = sigma
            .iter()
            .map(|&p| Some(if p <= 2 { 1 } else { p - 1 }))
            .collect();
        let image = |v: Vertex| vertex_map[v as usize - 1].unwrap();
        let mut edges = Vec::with_capacity(self.edges.len() - 1);
        let mut half_edge_map = vec![None; 2 * self.edges.len()];
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            if i == edge {
                continue;
            }
            let j = edges.len();
            edges.push((image(a), image(b)));
            half_edge_map[2 * i] = Some(HalfEdge::src(j));
            half_edge_map[2 * i + 1] = Some(HalfEdge::tgt(j));
        }
        Some(Derived {
            sign,
            graph: OrientedGraph::from_raw(self.vertex_count - 1, edges),
            provenance: Provenance {
                vertex_map,
                half_edge_map,
                fresh_halves: Vec::new(),
                merged_vertex: Some(1),
            },
        })
    }

    /// Replaces `e(h1)`, `e(h2)` by the crossed edges `e1: v(h1) -> v(h̄2)` and
    /// `e2: v(h2) -> v(h̄1)`, appended in that order. The fresh halves are
    /// reported as `[h1', h̄1', h2', h̄2']`.
    pub fn splice(&self, h1: HalfEdge, h2: HalfEdge) -> Result<Derived, GraphError> {
        self.check_edge(h1.edge)?;
        self.check_edge(h2.edge)?;
        if h1.edge == h2.edge {
            return Err(GraphError::SameEdge);
        }
        for h in [h1, h2] {
            if self.is_loop(h.edge) {
                return Err(GraphError::LoopEdge { edge: h.edge + 1 });
            }
        }
        Ok(self.splice_raw(h1, h2))
    }

    /// Splice with no admissibility checks. `h1 == h2` replaces the edge by two
    /// parallel copies.
    pub(crate) fn splice_raw(&self, h1: HalfEdge, h2: HalfEdge) -> Derived {
        debug_assert!(h2 != h1.bar());
        let mut sign = Sign::Pos;
        // Pick the representative in which v(h) is the source of e(h).
        if h1.end == End::Tgt {
            sign = -sign;
        }
        if h2.end == End::Tgt && h2.edge != h1.edge {
            sign = -sign;
        }
        let a = self.vertex_of(h1);
        let b = self.vertex_of(h1.bar());
        let c = self.vertex_of(h2);
        let d = self.vertex_of(h2.bar());
        let mut edges = Vec::with_capacity(self.edges.len());
        let mut half_edge_map = vec![None; 2 * self.edges.len()];
        for (i, &e) in self.edges.iter().enumerate() {
            if i == h1.edge || i == h2.edge {
                continue;
            }
            let j = edges.len();
            edges.push(e);
            half_edge_map[2 * i] = Some(HalfEdge::src(j));
            half_edge_map[2 * i + 1] = Some(HalfEdge::tgt(j));
        }
        let e1 = edges.len();
        edges.push((a, d));
        edges.push((c, b));
        Derived {
            sign,
            graph: OrientedGraph::from_raw(self.vertex_count, edges),
            provenance: Provenance {
                vertex_map: (1..=self.vertex_count).map(Some).collect(),
                half_edge_map,
                fresh_halves: vec![
                    HalfEdge::src(e1),
                    HalfEdge::tgt(e1),
                    HalfEdge::src(e1 + 1),
                    HalfEdge::tgt(e1 + 1),
                ],
                merged_vertex: None,
            },
        }
    }

    /// Splice followed by contraction of `e1`.
    ///
    /// `None` is the zero class: either input edge is a loop, or `e1` is.
    /// The provenance reports `[h2', h̄2']` as fresh halves and the contracted
    /// vertex (always label 1) as `merged_vertex`.
    pub fn surgery(&self, h1: HalfEdge, h2: HalfEdge) -> Result<Option<Derived>, GraphError> {
        self.check_edge(h1.edge)?;
        self.check_edge(h2.edge)?;
        if h1.edge == h2.edge {
            return Err(GraphError::SameEdge);
        }
        if self.is_loop(h1.edge) || self.is_loop(h2.edge) {
            return Ok(None);
        }
        Ok(self.surgery_raw(h1, h2, Faults::NONE))
    }

    /// Surgery without admissibility checks; `None` only when `e1` is a loop.
    pub(crate) fn surgery_raw(&self, h1: HalfEdge, h2: HalfEdge, faults: Faults) -> Option<Derived> {
        let spliced = self.splice_raw(h1, h2);
        let e1 = spliced.graph.edge_count() - 2;
        let contracted = spliced.graph.contract_with(e1, faults)?;
        let provenance = spliced.provenance.then(&contracted.provenance);
        debug_assert_eq!(provenance.fresh_halves.len(), 2);
        Some(Derived {
            sign: spliced.sign * contracted.sign,
            graph: contracted.graph,
            provenance,
        })
    }

    /// Literal text form `V;s>t,s>t,...`.
    pub fn to_literal(&self) -> String {
        let edges: Vec<String> = self.edges.iter().map(|(s, t)| format!("{s}>{t}")).collect();
        format!("{};{}", self.vertex_count, edges.join(","))
    }
}

impl fmt::Display for OrientedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}

/// Product of a sequence of graphs, left to right.
pub fn product_all<'a>(graphs: impl IntoIterator<Item = &'a OrientedGraph>) -> Option<OrientedGraph> {
    graphs
        .into_iter()
        .fold(None, |acc: Option<OrientedGraph>, g| match acc {
            None => Some(g.clone()),
            Some(p) => Some(p.product(g)),
        })
}
