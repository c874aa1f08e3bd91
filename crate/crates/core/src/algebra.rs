//! Integer linear combinations of canonical graphs and of ordered tuples of
//! them, and the splitting of a graph into an ordered product of factors.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::canonical::{canonicalize, Canonical, CanonicalKey};
use crate::error::AlgebraError;
use crate::faults::Faults;
use crate::graph::{permutation_sign, OrientedGraph, Sign, SignedGraph, Vertex};

/// Finitely supported map from canonical keys to nonzero integers.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraphVector {
    terms: HashMap<CanonicalKey, i64>,
}

impl GraphVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, key: CanonicalKey, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let entry = self.terms.entry(key.clone()).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn add_canonical(&mut self, c: &Canonical, coeff: i64) {
        if let Canonical::Class(s, key) = c {
            self.add_term(key.clone(), s.as_i64() * coeff);
        }
    }

    pub fn coefficient(&self, key: &CanonicalKey) -> i64 {
        self.terms.get(key).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CanonicalKey, i64)> {
        self.terms.iter().map(|(k, &c)| (k, c))
    }

    pub fn sorted(&self) -> Vec<(&CanonicalKey, i64)> {
        let mut v: Vec<_> = self.iter().collect();
        v.sort();
        v
    }
}

impl TryFrom<TensorVector> for GraphVector {
    type Error = AlgebraError;

    fn try_from(t: TensorVector) -> Result<Self, Self::Error> {
        if t.arity != 1 {
            return Err(AlgebraError::ArityMismatch {
                expected: 1,
                found: t.arity,
            });
        }
        Ok(GraphVector {
            terms: t
                .terms
                .into_iter()
                .map(|(mut k, c)| (k.pop().unwrap(), c))
                .collect(),
        })
    }
}

/// Finitely supported map from ordered `arity`-tuples of canonical keys to
/// nonzero integers. Tuples are never reordered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorVector {
    arity: usize,
    terms: HashMap<Vec<CanonicalKey>, i64>,
}

#[derive(Serialize)]
struct JsonTerm<'a> {
    coeff: i64,
    factors: &'a [CanonicalKey],
}

impl TensorVector {
    pub fn zero(arity: usize) -> Self {
        TensorVector {
            arity,
            terms: HashMap::new(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, tuple: &[CanonicalKey]) -> i64 {
        self.terms.get(tuple).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, tuple: Vec<CanonicalKey>, coeff: i64) {
        assert_eq!(tuple.len(), self.arity, "tuple length must equal the arity");
        if coeff == 0 {
            return;
        }
        match self.terms.get_mut(&tuple) {
            Some(c) => {
                *c += coeff;
                if *c == 0 {
                    self.terms.remove(&tuple);
                }
            }
            None => {
                self.terms.insert(tuple, coeff);
            }
        }
    }

    pub fn add_assign(&mut self, other: &TensorVector) -> Result<(), AlgebraError> {
        self.check_arity(other)?;
        for (k, &c) in &other.terms {
            self.add_term(k.clone(), c);
        }
        Ok(())
    }

    pub fn add(&self, other: &TensorVector) -> Result<TensorVector, AlgebraError> {
        let mut out = self.clone();
        out.add_assign(other)?;
        Ok(out)
    }

    pub fn scale(&self, c: i64) -> TensorVector {
        if c == 0 {
            return TensorVector::zero(self.arity);
        }
        TensorVector {
            arity: self.arity,
            terms: self.terms.iter().map(|(k, &v)| (k.clone(), v * c)).collect(),
        }
    }

    fn check_arity(&self, other: &TensorVector) -> Result<(), AlgebraError> {
        if self.arity != other.arity {
            return Err(AlgebraError::ArityMismatch {
                expected: self.arity,
                found: other.arity,
            });
        }
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[CanonicalKey], i64)> {
        self.terms.iter().map(|(k, &c)| (k.as_slice(), c))
    }

    /// Terms ordered by factor tuple.
    pub fn sorted(&self) -> Vec<(&[CanonicalKey], i64)> {
        let mut v: Vec<_> = self.iter().collect();
        v.sort();
        v
    }

    /// Applies a permutation of tensor slots: slot `i` of the result holds
    /// slot `perm[i]` of each tuple. Coefficients are unchanged.
    pub fn permute_slots(&self, perm: &[usize]) -> TensorVector {
        assert_eq!(perm.len(), self.arity);
        TensorVector {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(k, &c)| (perm.iter().map(|&p| k[p].clone()).collect(), c))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.json_value()).expect("vectors serialize")
    }

    pub fn json_value(&self) -> serde_json::Value {
        let terms: Vec<JsonTerm<'_>> = self
            .sorted()
            .into_iter()
            .map(|(factors, coeff)| JsonTerm { coeff, factors })
            .collect();
        serde_json::to_value(terms).expect("vectors serialize")
    }
}

impl fmt::Display for TensorVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (factors, coeff)) in self.sorted().into_iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let names: Vec<String> = factors.iter().map(|k| k.to_string()).collect();
            write!(f, "{coeff:+} * {}", names.join(" ⊗ "))?;
        }
        Ok(())
    }
}

/// Canonicalizes each factor; a single term with the product of the signs,
/// or the zero vector if any factor is zero.
pub fn tensor_term(factors: &[SignedGraph]) -> TensorVector {
    let mut out = TensorVector::zero(factors.len());
    let mut sign = Sign::Pos;
    let mut keys = Vec::with_capacity(factors.len());
    for f in factors {
        let SignedGraph::Signed(s, g) = f else {
            return out;
        };
        match canonicalize(g) {
            Canonical::Zero => return out,
            Canonical::Class(c, key) => {
                sign = sign * *s * c;
                keys.push(key);
            }
        }
    }
    out.add_term(keys, sign.as_i64());
    out
}

/// Which slot assignments of connected components are allowed.
#[derive(Clone, Copy, Debug)]
pub enum SplitMode<'a> {
    /// Every slot must receive at least one marked vertex.
    Free,
    /// `blocks[i]` is a bitmask of mark indices that must land in slot `i`.
    Prescribed(&'a [u8]),
}

/// One way of writing a graph as an ordered product of factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedSplit {
    pub sign: Sign,
    pub factors: Vec<OrientedGraph>,
    /// Slot of each connected component, components numbered as in
    /// [`OrientedGraph::components`].
    pub assignment: Vec<usize>,
}

/// All ways to write `z` as `Y_1 ⋯ Y_m` subject to the mark constraints.
///
/// For each assignment, the sign is that of the shuffle sorting the labels of
/// `z` into slot blocks (relative order kept within each block), and each
/// factor is the induced subgraph on its block with labels compressed.
/// In prescribed mode, two marks required in different slots but lying in one
/// component give no splits.
pub fn split_with_marks(
    z: &OrientedGraph,
    marks: &[Vertex],
    slots: usize,
    mode: SplitMode<'_>,
) -> Vec<MarkedSplit> {
    split_with_marks_with(z, marks, slots, mode, Faults::NONE)
}

pub(crate) fn split_with_marks_with(
    z: &OrientedGraph,
    marks: &[Vertex],
    slots: usize,
    mode: SplitMode<'_>,
    faults: Faults,
) -> Vec<MarkedSplit> {
    assert!(slots >= 1);
    let (comp, count) = z.components();
    let mark_comp: Vec<usize> = marks.iter().map(|&v| comp[v as usize - 1]).collect();
    let mut required: Vec<Option<usize>> = vec![None; count];
    if let SplitMode::Prescribed(blocks) = mode {
        assert_eq!(blocks.len(), slots);
        for (slot, &mask) in blocks.iter().enumerate() {
            for (j, &c) in mark_comp.iter().enumerate() {
                if mask & (1 << j) != 0 {
                    match required[c] {
                        Some(other) if other != slot => return Vec::new(),
                        _ => required[c] = Some(slot),
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    let mut assignment = vec![0usize; count];
    loop {
        let respects_requirements = assignment
            .iter()
            .zip(&required)
            .all(|(a, r)| r.is_none_or(|r| r == *a));
        let valid = respects_requirements
            && match mode {
                SplitMode::Free => (0..slots).all(|s| mark_comp.iter().any(|&c| assignment[c] == s)),
                SplitMode::Prescribed(_) => true,
            };
        if valid {
            out.push(build_split(z, &comp, &assignment, slots, faults));
        }
        // next assignment (odometer)
        let mut i = 0;
        while i < count {
            assignment[i] += 1;
            if assignment[i] < slots {
                break;
            }
            assignment[i] = 0;
            i += 1;
        }
        if i == count {
            break;
        }
    }
    out
}

fn build_split(
    z: &OrientedGraph,
    comp: &[usize],
    assignment: &[usize],
    slots: usize,
    faults: Faults,
) -> MarkedSplit {
    let n = z.vertex_count() as usize;
    let slot_of = |v: Vertex| assignment[comp[v as usize - 1]];
    let mut local = vec![0 as Vertex; n];
    let mut sizes = vec![0 as Vertex; slots];
    let mut sequence = Vec::with_capacity(n);
    for s in 0..slots {
        for v in 1..=n as Vertex {
            if slot_of(v) == s {
                sizes[s] += 1;
                local[v as usize - 1] = sizes[s];
                sequence.push(v);
            }
        }
    }
    let mut edges: Vec<Vec<(Vertex, Vertex)>> = vec![Vec::new(); slots];
    for &(a, b) in z.edges() {
        edges[slot_of(a)].push((local[a as usize - 1], local[b as usize - 1]));
    }
    let mut sign = if faults.drop_shuffle_sign {
        Sign::Pos
    } else {
        permutation_sign(&sequence)
    };
    if faults.flip_shuffle_sign {
        sign = -sign;
    }
    MarkedSplit {
        sign,
        factors: edges
            .into_iter()
            .zip(sizes)
            .map(|(e, size)| OrientedGraph::from_raw(size, e))
            .collect(),
        assignment: assignment.to_vec(),
    }
}

/// Adds `coeff · Σ sign · Y_1 ⊗ ⋯ ⊗ Y_m` over the splits of `z` to `target`.
pub(crate) fn accumulate_splits(
    target: &mut TensorVector,
    coeff: Sign,
    z: &OrientedGraph,
    marks: &[Vertex],
    mode: SplitMode<'_>,
    faults: Faults,
) {
    let slots = target.arity();
    if slots == 1 {
        if let Canonical::Class(s, key) = canonicalize(z) {
            let shuffle = if faults.flip_shuffle_sign { Sign::Neg } else { Sign::Pos };
            target.add_term(vec![key], (coeff * s * shuffle).as_i64());
        }
        return;
    }
    'splits: for split in split_with_marks_with(z, marks, slots, mode, faults) {
        let mut sign = coeff * split.sign;
        let mut keys = Vec::with_capacity(slots);
        for f in &split.factors {
            match canonicalize(f) {
                Canonical::Zero => continue 'splits,
                Canonical::Class(s, key) => {
                    sign = sign * s;
                    keys.push(key);
                }
            }
        }
        target.add_term(keys, sign.as_i64());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta() -> OrientedGraph {
        OrientedGraph::new(2, vec![(1, 2); 3]).unwrap()
    }

    fn k4() -> OrientedGraph {
        OrientedGraph::new(4, vec![(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).unwrap()
    }

    fn key(g: &OrientedGraph) -> CanonicalKey {
        canonicalize(g).key().cloned().unwrap()
    }

    #[test]
    fn tensor_term_signs() {
        let t = tensor_term(&[
            SignedGraph::Signed(Sign::Pos, theta()),
            SignedGraph::Signed(Sign::Neg, theta()),
        ]);
        assert_eq!(t.coefficient(&[key(&theta()), key(&theta())]), -1);
        assert_eq!(t.len(), 1);

        let looped = OrientedGraph::from_raw(1, vec![(1, 1), (1, 1)]);
        assert!(tensor_term(&[SignedGraph::Signed(Sign::Pos, looped)]).is_zero());

        let t = tensor_term(&[
            SignedGraph::Signed(Sign::Neg, theta()),
            SignedGraph::Signed(Sign::Neg, k4()),
        ]);
        assert_eq!(t.coefficient(&[key(&theta()), key(&k4())]), 1);
    }

    #[test]
    fn add_scale_zero() {
        let t = tensor_term(&[SignedGraph::Signed(Sign::Pos, theta())]);
        assert!(t.add(&t.scale(-1)).unwrap().is_zero());
        assert!(t.scale(0).is_zero());
        let u = TensorVector::zero(2);
        assert_eq!(
            t.add(&u),
            Err(AlgebraError::ArityMismatch {
                expected: 1,
                found: 2
            })
        );
    }

    #[test]
    fn json_rendering_is_sorted() {
        let mut t = TensorVector::zero(2);
        t.add_term(vec![key(&k4()), key(&theta())], 2);
        t.add_term(vec![key(&theta()), key(&k4())], -1);
        assert_eq!(
            t.to_json(),
            r#"[{"coeff":-1,"factors":["2:3:(1,2)(1,2)(1,2)","4:6:(1,2)(1,3)(1,4)(2,3)(2,4)(3,4)"]},{"coeff":2,"factors":["4:6:(1,2)(1,3)(1,4)(2,3)(2,4)(3,4)","2:3:(1,2)(1,2)(1,2)"]}]"#
        );
    }

    #[test]
    fn split_theta_squared_free() {
        let tt = theta().product(&theta());
        let splits = split_with_marks(&tt, &[1, 3], 2, SplitMode::Free);
        assert_eq!(splits.len(), 2);
        let mut assignments: Vec<_> = splits.iter().map(|s| s.assignment.clone()).collect();
        assignments.sort();
        assert_eq!(assignments, vec![vec![0, 1], vec![1, 0]]);
        for s in &splits {
            assert_eq!(s.sign, Sign::Pos);
            assert_eq!(s.factors, vec![theta(), theta()]);
        }
    }

    #[test]
    fn split_connected_two_marks_is_empty() {
        assert!(split_with_marks(&k4(), &[1, 2], 2, SplitMode::Free).is_empty());
        let single = split_with_marks(&k4(), &[1, 2], 1, SplitMode::Free);
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].sign, Sign::Pos);
        assert_eq!(single[0].factors, vec![k4()]);
    }

    #[test]
    fn split_shuffle_sign() {
        // theta on {1,3}, theta on {2,4}: block {1,3},{2,4} is one transposition
        let z = OrientedGraph::new(4, vec![(1, 3), (1, 3), (1, 3), (2, 4), (2, 4), (2, 4)]).unwrap();
        let splits = split_with_marks(&z, &[1, 2], 2, SplitMode::Free);
        assert_eq!(splits.len(), 2);
        assert!(splits.iter().all(|s| s.sign == Sign::Neg));
    }

    #[test]
    fn prescribed_mode() {
        let tt = theta().product(&theta());
        // marks 0 and 1 both in the first component but required in different slots
        assert!(split_with_marks(&tt, &[1, 2], 2, SplitMode::Prescribed(&[0b01, 0b10])).is_empty());
        let s = split_with_marks(&tt, &[3, 1], 2, SplitMode::Prescribed(&[0b01, 0b10]));
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].assignment, vec![1, 0]);
        // unmarked components range over all slots
        let ttt = tt.product(&theta());
        let s = split_with_marks(&ttt, &[1, 3], 2, SplitMode::Prescribed(&[0b01, 0b10]));
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn free_mode_count_formula() {
        // three thetas, marks in components 0 and 1, one unmarked component
        let z = theta().product(&theta()).product(&theta());
        for slots in 1..=3usize {
            let splits = split_with_marks(&z, &[1, 3], slots, SplitMode::Free);
            // placements of the two marked components covering every slot
            let mut placements = 0;
            for a in 0..slots {
                for b in 0..slots {
                    let covered = (0..slots).all(|s| a == s || b == s);
                    if covered {
                        placements += 1;
                    }
                }
            }
            assert_eq!(splits.len(), slots * placements);
        }
    }
}
