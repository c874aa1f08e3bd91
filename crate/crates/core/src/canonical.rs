//! Canonical forms modulo relabeling and edge reversal.
//!
//! The canonical representative of a loop-free graph is the lexicographically
//! least sorted edge list, with every edge directed from the smaller to the
//! larger label, over all vertex relabelings. Its sign is `sgn(σ)·(-1)^r`
//! for a relabeling `σ` reaching it with `r` reversals. If the least list is
//! reached with both signs the graph has an orientation-reversing automorphism
//! and is zero.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::GraphError;
use crate::graph::{permutation_sign, OrientedGraph, Sign, Vertex};

/// Identity of a nonzero basis element. Rendered as `V:E:(s,t)(s,t)...`.
///
/// Ordering is by vertex count, then edge count, then the edge list; for
/// single-digit labels this coincides with the order of the rendered strings.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Arc<[u8]>);

impl CanonicalKey {
    fn from_parts(vertex_count: usize, edges: &[(u8, u8)]) -> CanonicalKey {
        let mut bytes = Vec::with_capacity(2 + 2 * edges.len());
        bytes.push(vertex_count as u8);
        bytes.push(edges.len() as u8);
        for &(s, t) in edges {
            bytes.push(s);
            bytes.push(t);
        }
        CanonicalKey(bytes.into())
    }

    pub fn vertex_count(&self) -> u32 {
        u32::from(self.0[0])
    }

    pub fn edge_count(&self) -> usize {
        usize::from(self.0[1])
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.0[2..]
            .chunks_exact(2)
            .map(|c| (Vertex::from(c[0]), Vertex::from(c[1])))
    }

    /// The representative graph; it canonicalizes to `(+1, self)`.
    pub fn to_graph(&self) -> OrientedGraph {
        OrientedGraph::from_raw(self.vertex_count(), self.edges().collect())
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:", self.vertex_count(), self.edge_count())?;
        for (s, t) in self.edges() {
            write!(f, "({s},{t})")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for CanonicalKey {
    type Err = GraphError;

    /// Parses a rendered key and checks that it is in canonical form.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |why: &str| GraphError::Parse(format!("bad key `{s}`: {why}"));
        let mut parts = s.trim().splitn(3, ':');
        let v: u32 = parts
            .next()
            .and_then(|p| p.parse().ok())
            .ok_or_else(|| bad("vertex count"))?;
        let e: usize = parts
            .next()
            .and_then(|p| p.parse().ok())
            .ok_or_else(|| bad("edge count"))?;
        let body = parts.next().ok_or_else(|| bad("missing edge list"))?;
        let mut edges = Vec::with_capacity(e);
        for chunk in body.split(')').filter(|c| !c.is_empty()) {
            let pair = chunk.strip_prefix('(').ok_or_else(|| bad("edge syntax"))?;
            let (a, b) = pair.split_once(',').ok_or_else(|| bad("edge syntax"))?;
            let a: Vertex = a.parse().map_err(|_| bad("edge label"))?;
            let b: Vertex = b.parse().map_err(|_| bad("edge label"))?;
            edges.push((a, b));
        }
        if edges.len() != e {
            return Err(bad("edge count does not match"));
        }
        let g = OrientedGraph::new(v, edges)?;
        match canonicalize(&g) {
            Canonical::Class(Sign::Pos, key) if key.to_string() == s.trim() => Ok(key),
            _ => Err(bad("not a canonical nonzero key")),
        }
    }
}

impl Serialize for CanonicalKey {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CanonicalKey {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Canonical {
    Zero,
    Class(Sign, CanonicalKey),
}

impl Canonical {
    pub fn times(self, sign: Sign) -> Canonical {
        match self {
            Canonical::Zero => Canonical::Zero,
            Canonical::Class(s, k) => Canonical::Class(s * sign, k),
        }
    }

    pub fn key(&self) -> Option<&CanonicalKey> {
        match self {
            Canonical::Zero => None,
            Canonical::Class(_, k) => Some(k),
        }
    }
}

impl fmt::Display for Canonical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Canonical::Zero => f.write_str("0"),
            Canonical::Class(s, k) => write!(f, "{s} * {k}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Parity of the class in the graph complex (vertex count mod 2) and in its
/// parity-shifted copy.
pub fn parity(key: &CanonicalKey) -> (Parity, Parity) {
    if key.vertex_count().is_multiple_of(2) {
        (Parity::Even, Parity::Odd)
    } else {
        (Parity::Odd, Parity::Even)
    }
}

/// Edges directed min -> max (0-based labels), sorted, with the number of
/// reversals that took.
fn normalize(g: &OrientedGraph) -> (Vec<(u8, u8)>, Sign) {
    let mut reversals = 0;
    let mut edges: Vec<(u8, u8)> = g
        .edges()
        .iter()
        .map(|&(s, t)| {
            if s > t {
                reversals += 1;
                ((t - 1) as u8, (s - 1) as u8)
            } else {
                ((s - 1) as u8, (t - 1) as u8)
            }
        })
        .collect();
    edges.sort_unstable();
    (edges, Sign::from_odd(reversals % 2 == 1))
}

thread_local! {
    static CACHE: RefCell<HashMap<(u8, Vec<(u8, u8)>), Canonical>> = RefCell::new(HashMap::new());
}

const CACHE_LIMIT: usize = 1 << 20;

pub fn canonicalize(g: &OrientedGraph) -> Canonical {
    if g.has_loop() {
        return Canonical::Zero;
    }
    assert!(g.vertex_count() < 256 && g.edge_count() < 256);
    let (edges, sign) = normalize(g);
    let n = g.vertex_count() as u8;
    let key = (n, edges);
    if let Some(hit) = CACHE.with(|c| c.borrow().get(&key).cloned()) {
        return hit.times(sign);
    }
    let result = Search::new(n as usize, &key.1).run();
    CACHE.with(|c| {
        let mut c = c.borrow_mut();
        if c.len() >= CACHE_LIMIT {
            c.clear();
        }
        c.insert(key, result.clone());
    });
    result.times(sign)
}

/// Reference semantics: every vertex permutation is tried.
pub fn canonicalize_exhaustive(g: &OrientedGraph) -> Canonical {
    if g.has_loop() {
        return Canonical::Zero;
    }
    let n = g.vertex_count() as usize;
    let mut perm: Vec<Vertex> = (1..=n as Vertex).collect();
    let mut best: Option<(Vec<(u8, u8)>, Sign)> = None;
    let mut conflict = false;
    let mut visit = |perm: &[Vertex]| {
        let mut reversals = 0;
        let mut edges: Vec<(u8, u8)> = g
            .edges()
            .iter()
            .map(|&(s, t)| {
                let (a, b) = (perm[s as usize - 1], perm[t as usize - 1]);
                if a > b {
                    reversals += 1;
                    (b as u8, a as u8)
                } else {
                    (a as u8, b as u8)
                }
            })
            .collect();
        edges.sort_unstable();
        let sign = permutation_sign(perm) * Sign::from_odd(reversals % 2 == 1);
        match &best {
            None => best = Some((edges, sign)),
            Some((b, s)) => match edges.cmp(b) {
                Ordering::Less => {
                    best = Some((edges, sign));
                    conflict = false;
                }
                Ordering::Equal if *s != sign => conflict = true,
                _ => {}
            },
        }
    };
    // Heap's algorithm.
    let mut c = vec![0usize; n];
    visit(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            visit(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    let (edges, sign) = best.expect("at least one permutation");
    if conflict {
        Canonical::Zero
    } else {
        Canonical::Class(sign, CanonicalKey::from_parts(n, &edges))
    }
}

/// Branch and bound over label assignments. A branch is cut only when every
/// completion is strictly worse than the best complete encoding, so all
/// labelings reaching the minimum are visited and sign conflicts are seen.
struct Search<'a> {
    n: usize,
    edges: &'a [(u8, u8)],
    mult: Vec<u8>,
    degree: Vec<usize>,
    order: Vec<usize>,
    used: Vec<bool>,
    prefix: Vec<(u8, u8)>,
    best: Option<Vec<(u8, u8)>>,
    best_sign: Sign,
    conflict: bool,
}

impl<'a> Search<'a> {
    fn new(n: usize, edges: &'a [(u8, u8)]) -> Self {
        let mut mult = vec![0u8; n * n];
        let mut degree = vec![0; n];
        for &(a, b) in edges {
            let (a, b) = (a as usize, b as usize);
            mult[a * n + b] += 1;
            mult[b * n + a] += 1;
            degree[a] += 1;
            degree[b] += 1;
        }
        Search {
            n,
            edges,
            mult,
            degree,
            order: Vec::with_capacity(n),
            used: vec![false; n],
            prefix: Vec::with_capacity(edges.len()),
            best: None,
            best_sign: Sign::Pos,
            conflict: false,
        }
    }

    fn run(mut self) -> Canonical {
        self.descend();
        let best = self.best.expect("search reaches a leaf");
        if self.conflict {
            Canonical::Zero
        } else {
            // Stored labels are 0-based.
            let shifted: Vec<(u8, u8)> = best.iter().map(|&(s, t)| (s + 1, t + 1)).collect();
            Canonical::Class(self.best_sign, CanonicalKey::from_parts(self.n, &shifted))
        }
    }

    fn m(&self, u: usize, v: usize) -> u8 {
        self.mult[u * self.n + v]
    }

    /// Fills `self.prefix` with the determined part of the encoding and
    /// returns the open row (first label whose row still has undetermined
    /// entries) together with a lower bound on the next entry.
    fn partial(&mut self) -> (Option<usize>, Option<(u8, u8)>) {
        let k = self.order.len();
        self.prefix.clear();
        for s in 0..k {
            let u = self.order[s];
            let mut assigned = 0usize;
            for t in 0..k {
                if t != s {
                    assigned += self.m(u, self.order[t]) as usize;
                }
            }
            for t in s + 1..k {
                for _ in 0..self.m(u, self.order[t]) {
                    self.prefix.push((s as u8, t as u8));
                }
            }
            if self.degree[u] > assigned {
                return (Some(s), Some((s as u8, k as u8)));
            }
        }
        if self.prefix.len() == self.edges.len() {
            (None, None)
        } else {
            (None, Some((k as u8, k as u8 + 1)))
        }
    }

    fn descend(&mut self) {
        let k = self.order.len();
        let (open_row, bound) = self.partial();
        if let Some(best) = &self.best {
            let len = self.prefix.len();
            match self.prefix[..].cmp(&best[..len]) {
                Ordering::Greater => return,
                Ordering::Equal => {
                    if let Some(b) = bound {
                        if b > best[len] {
                            return;
                        }
                    }
                }
                Ordering::Less => {}
            }
        }
        if k == self.n {
            self.leaf();
            return;
        }
        let mut candidates: Vec<usize> = (0..self.n).filter(|&v| !self.used[v]).collect();
        if let Some(row) = open_row {
            let anchor = self.order[row];
            candidates.sort_by_key(|&v| (std::cmp::Reverse(self.m(anchor, v)), std::cmp::Reverse(self.degree[v])));
        }
        for v in candidates {
            self.order.push(v);
            self.used[v] = true;
            self.descend();
            self.used[v] = false;
            self.order.pop();
        }
    }

    fn leaf(&mut self) {
        let mut position = vec![0u32; self.n];
        for (label, &v) in self.order.iter().enumerate() {
            position[v] = label as u32;
        }
        let reversals = self
            .edges
            .iter()
            .filter(|&&(a, b)| position[a as usize] > position[b as usize])
            .count();
        let sign = permutation_sign(&position) * Sign::from_odd(reversals % 2 == 1);
        match &self.best {
            Some(best) if self.prefix == *best => {
                if sign != self.best_sign {
                    self.conflict = true;
                }
            }
            Some(best) if self.prefix > *best => {}
            _ => {
                self.best = Some(self.prefix.clone());
                self.best_sign = sign;
                self.conflict = false;
            }
        }
    }
}
