//! Bases of the graph complex at fixed `(V, E)`, the matrices of the
//! differential between them, and rational Betti numbers.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::alpha::differential;
use crate::canonical::{canonicalize, Canonical, CanonicalKey};
use crate::error::CorpusError;
use crate::graph::{OrientedGraph, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Bidegree {
    pub v: u32,
    pub e: usize,
}

impl Bidegree {
    pub fn new(v: u32, e: usize) -> Bidegree {
        Bidegree { v, e }
    }

    /// Where the differential lands.
    pub fn below(self) -> Option<Bidegree> {
        (self.v > 1 && self.e > 0).then(|| Bidegree::new(self.v - 1, self.e - 1))
    }

    pub fn above(self) -> Bidegree {
        Bidegree::new(self.v + 1, self.e + 1)
    }

    /// Valency at least 3 needs `2E >= 3V`.
    pub fn admits_graphs(self) -> bool {
        self.v >= 1 && 2 * self.e >= 3 * self.v as usize
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.v, self.e)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Filter {
    pub connected: bool,
    pub one_pi: bool,
}

impl Filter {
    pub const ALL: Filter = Filter {
        connected: false,
        one_pi: false,
    };

    fn accepts(self, g: &OrientedGraph) -> bool {
        (!self.connected || g.is_connected()) && (!self.one_pi || g.is_one_pi())
    }
}

/// Nonzero classes at one bidegree, sorted by key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Basis {
    pub bidegree: Bidegree,
    pub keys: Vec<CanonicalKey>,
}

impl Basis {
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn index(&self) -> HashMap<&CanonicalKey, usize> {
        self.keys.iter().enumerate().map(|(i, k)| (k, i)).collect()
    }

    pub fn graphs(&self) -> impl Iterator<Item = OrientedGraph> + '_ {
        self.keys.iter().map(CanonicalKey::to_graph)
    }

    /// One key per line.
    pub fn to_text(&self) -> String {
        self.keys.iter().map(|k| format!("{k}\n")).collect()
    }
}

/// Backtracking over edge multiplicities on the pairs `i < j`, visiting every
/// loop-free multigraph with valencies at least 3 whose valency sequence is
/// nonincreasing. Every isomorphism class has such a labeling.
struct Generator {
    v: usize,
    pairs: Vec<(usize, usize)>,
    /// `later[p][x]`: some pair at index `>= p` touches vertex `x`.
    later: Vec<Vec<bool>>,
    valency: Vec<usize>,
    edges: Vec<(Vertex, Vertex)>,
}

impl Generator {
    fn new(v: usize) -> Generator {
        let pairs: Vec<(usize, usize)> = (0..v).flat_map(|i| (i + 1..v).map(move |j| (i, j))).collect();
        let mut later = vec![vec![false; v]; pairs.len() + 1];
        for p in (0..pairs.len()).rev() {
            later[p] = later[p + 1].clone();
            later[p][pairs[p].0] = true;
            later[p][pairs[p].1] = true;
        }
        Generator {
            v,
            pairs,
            later,
            valency: vec![0; v],
            edges: Vec::new(),
        }
    }

    fn run(&mut self, remaining: usize, p: usize, visit: &mut impl FnMut(&[(Vertex, Vertex)])) {
        let deficit: usize = self.valency.iter().map(|&d| 3usize.saturating_sub(d)).sum();
        if deficit > 2 * remaining {
            return;
        }
        if (0..self.v).any(|x| self.valency[x] < 3 && !self.later[p][x]) {
            return;
        }
        if remaining == 0 {
            if self.valency.windows(2).all(|w| w[0] >= w[1]) {
                visit(&self.edges);
            }
            return;
        }
        if p == self.pairs.len() {
            return;
        }
        let (i, j) = self.pairs[p];
        for k in (0..=remaining).rev() {
            for _ in 0..k {
                self.edges.push((i as Vertex + 1, j as Vertex + 1));
            }
            self.valency[i] += k;
            self.valency[j] += k;
            self.run(remaining - k, p + 1, visit);
            self.valency[i] -= k;
            self.valency[j] -= k;
            self.edges.truncate(self.edges.len() - k);
        }
    }
}

pub fn enumerate_graphs(v: u32, e: usize, filter: Filter) -> Basis {
    let bidegree = Bidegree::new(v, e);
    let mut keys = BTreeSet::new();
    if bidegree.admits_graphs() && v >= 2 {
        let mut generator = Generator::new(v as usize);
        generator.run(e, 0, &mut |edges| {
            let g = OrientedGraph::from_raw(v, edges.to_vec());
            if !filter.accepts(&g) {
                return;
            }
            if let Canonical::Class(_, key) = canonicalize(&g) {
                keys.insert(key);
            }
        });
    }
    Basis {
        bidegree,
        keys: keys.into_iter().collect(),
    }
}

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<i64>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix {
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: i64) {
        self.entries[r * self.cols + c] = value;
    }

    /// `self · rhs`, or `None` when the shapes do not chain.
    pub fn mul(&self, rhs: &IntMatrix) -> Option<IntMatrix> {
        if self.cols != rhs.rows {
            return None;
        }
        let mut out = IntMatrix::zero(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..rhs.cols {
                    out.entries[r * rhs.cols + c] += a * rhs.get(k, c);
                }
            }
        }
        Some(out)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    /// Header `rows cols nonzeros`, then one `row col value` line per nonzero
    /// entry (1-based).
    pub fn to_triplets(&self) -> String {
        let nonzero: Vec<(usize, usize, i64)> = (0..self.rows)
            .flat_map(|r| (0..self.cols).map(move |c| (r, c)))
            .map(|(r, c)| (r, c, self.get(r, c)))
            .filter(|t| t.2 != 0)
            .collect();
        let mut out = format!("{} {} {}\n", self.rows, self.cols, nonzero.len());
        for (r, c, x) in nonzero {
            out.push_str(&format!("{} {} {}\n", r + 1, c + 1, x));
        }
        out
    }

    /// Rank over the rationals by fraction-free elimination.
    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| BigInt::from(self.get(r, c))).collect())
            .collect();
        let mut rank = 0;
        let mut prev = BigInt::from(1);
        for c in 0..self.cols {
            let Some(pivot) = (rank..self.rows).find(|&r| !a[r][c].is_zero()) else {
                continue;
            };
            a.swap(rank, pivot);
            for r in rank + 1..self.rows {
                for k in c + 1..self.cols {
                    let v = (&a[rank][c] * &a[r][k] - &a[r][c] * &a[rank][k]) / &prev;
                    a[r][k] = v;
                }
                a[r][c] = BigInt::zero();
            }
            prev = a[rank][c].abs();
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }
}

/// Column `j` holds the coordinates of `d(source_j)` in `target`.
pub fn differential_matrix(source: &Basis, target: &Basis) -> Result<IntMatrix, CorpusError> {
    let index = target.index();
    let columns: Vec<Result<Vec<(usize, i64)>, CorpusError>> = source
        .keys
        .par_iter()
        .map(|key| {
            let image = differential(&key.to_graph());
            image
                .iter()
                .map(|(tuple, c)| {
                    index
                        .get(&tuple[0])
                        .map(|&r| (r, c))
                        .ok_or_else(|| CorpusError::MissingBasisElement {
                            source_key: key.to_string(),
                            key: tuple[0].to_string(),
                        })
                })
                .collect()
        })
        .collect();
    let mut m = IntMatrix::zero(target.len(), source.len());
    for (c, column) in columns.into_iter().enumerate() {
        for (r, x) in column? {
            m.set(r, c, x);
        }
    }
    Ok(m)
}

/// One row of the homology table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyRow {
    pub bidegree: Bidegree,
    pub dim: usize,
    /// Rank of the differential leaving this bidegree.
    pub rank_out: usize,
    /// Rank of the differential arriving from `(V+1, E+1)`, when that
    /// bidegree is within the computed range.
    pub rank_in: Option<usize>,
    pub betti: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct Complex {
    pub max_v: u32,
    pub max_e: usize,
    pub bases: HashMap<Bidegree, Basis>,
    /// Differential leaving each bidegree with a nonempty target range.
    pub matrices: HashMap<Bidegree, IntMatrix>,
}

impl Complex {
    /// Every bidegree `(V, E)` with `2 <= V <= max_v`, `E <= max_e` and
    /// `2E >= 3V`, over all graphs (no filter).
    pub fn build(max_v: u32, max_e: usize) -> Result<Complex, CorpusError> {
        let degrees: Vec<Bidegree> = (2..=max_v)
            .flat_map(|v| (0..=max_e).map(move |e| Bidegree::new(v, e)))
            .filter(|b| b.admits_graphs())
            .collect();
        let bases: HashMap<Bidegree, Basis> = degrees
            .par_iter()
            .map(|&b| (b, enumerate_graphs(b.v, b.e, Filter::ALL)))
            .collect();
        let empty = |b: Bidegree| Basis {
            bidegree: b,
            keys: Vec::new(),
        };
        let matrices = degrees
            .par_iter()
            .filter_map(|&b| {
                let below = b.below()?;
                let target = bases.get(&below).cloned().unwrap_or_else(|| empty(below));
                Some(differential_matrix(&bases[&b], &target).map(|m| (b, m)))
            })
            .collect::<Result<HashMap<_, _>, _>>()?;
        Ok(Complex {
            max_v,
            max_e,
            bases,
            matrices,
        })
    }

    pub fn degrees(&self) -> Vec<Bidegree> {
        let mut d: Vec<Bidegree> = self.bases.keys().copied().collect();
        d.sort();
        d
    }

    /// Pairs `(b, d_b ∘ d_{b+1})` for every bidegree where both are computed.
    pub fn squares(&self) -> Vec<(Bidegree, IntMatrix)> {
        self.degrees()
            .into_iter()
            .filter_map(|b| {
                let lower = self.matrices.get(&b)?;
                let upper = self.matrices.get(&b.above())?;
                Some((b, lower.mul(upper).expect("consecutive shapes chain")))
            })
            .collect()
    }

    pub fn homology(&self) -> Vec<HomologyRow> {
        let degrees = self.degrees();
        let ranks: HashMap<Bidegree, usize> = degrees
            .par_iter()
            .map(|b| (*b, self.matrices.get(b).map_or(0, IntMatrix::rank)))
            .collect();
        degrees
            .into_iter()
            .map(|b| {
                let dim = self.bases[&b].len();
                let rank_out = ranks[&b];
                let above = b.above();
                let rank_in = if above.v <= self.max_v && above.e <= self.max_e {
                    Some(ranks.get(&above).copied().unwrap_or(0))
                } else {
                    None
                };
                HomologyRow {
                    bidegree: b,
                    dim,
                    rank_out,
                    rank_in,
                    betti: rank_in.map(|r| dim - rank_out - r),
                }
            })
            .collect()
    }
}
