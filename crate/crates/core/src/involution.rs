//! The set of composite surgery data that indexes the terms of the strong
//! homotopy identity, and the sign-reversing involution pairing them.
//!
//! An element is `(h1, h2, h3, h4, U_1, …, U_m)`: a first surgery at
//! `(h1, h2)` on the product `P` of the inputs gives `P1`, a second surgery
//! at `(h3, h4)` on `P1` gives `P2`, and the ordered partition `U` of
//! `{1,2,3,4}` says which output slot holds each marked vertex `v(h'_j)`.
//!
//! Half-edges of `P1` are named by origin ([`StageHalf`]) so that conditions
//! like "`h3` is the fresh half `h2'`" are syntactic.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{accumulate_splits, SplitMode, TensorVector};
use crate::alpha::AlphaInput;
use crate::error::AlgebraError;
use crate::faults::Faults;
use crate::flowchart::Flowchart;
use crate::graph::{Derived, HalfEdge, OrientedGraph, Sign, Vertex};

/// A half-edge of the first surgery result, named by where it came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StageHalf {
    /// Image of a half-edge of the original product.
    Orig(HalfEdge),
    /// `h2'`, the source end of the new edge `e2`.
    Fresh,
    /// `h̄2'`, the target end of `e2`.
    FreshBar,
}

impl StageHalf {
    pub fn bar(self) -> StageHalf {
        match self {
            StageHalf::Orig(h) => StageHalf::Orig(h.bar()),
            StageHalf::Fresh => StageHalf::FreshBar,
            StageHalf::FreshBar => StageHalf::Fresh,
        }
    }
}

impl fmt::Display for StageHalf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StageHalf::Orig(h) => write!(f, "{h}"),
            StageHalf::Fresh => f.write_str("h2'"),
            StageHalf::FreshBar => f.write_str("~h2'"),
        }
    }
}

/// The membership conditions, in the order they are listed for the set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bullet {
    /// `h1`, `h2` lie on distinct edges.
    FirstDistinct,
    /// `e(h1')`, `e(h2')` are not loops after the first splice.
    FirstNotLoops,
    /// `h3`, `h4` lie on distinct edges of `P1`.
    SecondDistinct,
    /// `e(h3)`, `e(h4)` are not loops in `P1`, nor `e(h3')`, `e(h4')` after
    /// the second splice.
    SecondNotLoops,
    /// Every `S_i` is nonempty; together they cover `{1,2,3,4}` disjointly.
    SCover,
    /// Some `S_i` meeting `{1,2}` also meets `{3,4}`.
    SLinked,
    /// Every `U_i` is nonempty; together they cover `{1,2,3,4}` disjointly.
    UCover,
    /// Some `U_i` meeting `{3,4}` also meets `{1,2}`.
    ULinked,
    /// Marks in one connected component of `P2` share their `U_i`.
    UComponents,
}

impl Bullet {
    pub const ALL: [Bullet; 9] = [
        Bullet::FirstDistinct,
        Bullet::FirstNotLoops,
        Bullet::SecondDistinct,
        Bullet::SecondNotLoops,
        Bullet::SCover,
        Bullet::SLinked,
        Bullet::UCover,
        Bullet::ULinked,
        Bullet::UComponents,
    ];
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FError {
    #[error("input graphs contain a loop")]
    InputHasLoop,
    #[error("the proof set is only defined for m, n <= 3 (got m={m}, n={n})")]
    OutOfRange { m: usize, n: usize },
    #[error(transparent)]
    Arity(#[from] AlgebraError),
}

/// Why a datum is not an element of the set.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("condition {0:?} fails")]
    Bullet(Bullet),
    #[error("half-edge {0} does not exist")]
    NoSuchHalf(String),
    #[error("the surgery cannot be formed: {0}")]
    Unconstructible(&'static str),
    #[error("partition has {found} blocks, expected {expected}")]
    WrongBlockCount { expected: usize, found: usize },
}

/// The identifying data of an element: four half-edges and the partition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FDatum {
    pub h1: HalfEdge,
    pub h2: HalfEdge,
    pub h3: StageHalf,
    pub h4: StageHalf,
    /// `blocks[i]` has bit `j - 1` set when `j ∈ U_{i+1}`.
    pub blocks: Vec<u8>,
}

fn render_set(mask: u8) -> String {
    let items: Vec<String> = (0..4)
        .filter(|j| mask & (1 << j) != 0)
        .map(|j| (j + 1).to_string())
        .collect();
    format!("{{{}}}", items.join(","))
}

impl fmt::Display for FDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self.blocks.iter().map(|&b| render_set(b)).collect();
        write!(
            f,
            "({}, {}, {}, {} | {})",
            self.h1,
            self.h2,
            self.h3,
            self.h4,
            blocks.join(" ")
        )
    }
}

impl Serialize for FDatum {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// The double surgery shared by all partitions with the same half-edges.
#[derive(Debug)]
pub struct DoubleSurgery {
    /// Accumulated orientation sign of both surgeries.
    pub sign: Sign,
    pub graph: OrientedGraph,
    /// `v(h'_1)`, …, `v(h'_4)` as labels of `graph`.
    pub marks: [Vertex; 4],
    pub components: Vec<usize>,
}

/// A validated element together with the data derived from it.
#[derive(Clone, Debug)]
pub struct FElement {
    pub datum: FDatum,
    /// `S_i` as bitmasks over `{1,2,3,4}`.
    pub s_sets: Vec<u8>,
    /// `None` when the second contraction hits a loop, which only happens
    /// with [`Bullet::SecondNotLoops`] disabled.
    pub surgery: Option<Arc<DoubleSurgery>>,
}

impl FElement {
    /// `T_f`: inputs whose `S_i` meets `{1,2}` enter the source corolla;
    /// outputs whose `U_i` meets `{3,4}` leave the target corolla.
    pub fn flowchart(&self) -> Flowchart {
        let mut source_inputs = 0u8;
        for (i, &s) in self.s_sets.iter().enumerate() {
            if s & 0b0011 != 0 {
                source_inputs |= 1 << i;
            }
        }
        let mut target_outputs = 0u8;
        for (i, &u) in self.datum.blocks.iter().enumerate() {
            if u & 0b1100 != 0 {
                target_outputs |= 1 << i;
            }
        }
        Flowchart {
            m: self.datum.blocks.len(),
            n: self.s_sets.len(),
            source_inputs,
            target_outputs,
        }
    }

    /// The signed sum over splittings of `P2` placing each marked vertex in
    /// the slot its partition block prescribes.
    pub fn term(&self) -> TensorVector {
        let mut out = TensorVector::zero(self.datum.blocks.len());
        term_into(self, &mut out, Faults::NONE);
        out
    }
}

pub(crate) fn term_into(f: &FElement, target: &mut TensorVector, faults: Faults) {
    let Some(s) = &f.surgery else {
        return;
    };
    accumulate_splits(
        target,
        s.sign,
        &s.graph,
        &s.marks,
        SplitMode::Prescribed(&f.datum.blocks),
        faults,
    );
}

/// The first surgery with its half-edge naming.
struct FirstStage {
    derived: Derived,
    /// Name of each half of `P1`, indexed by [`HalfEdge::index`].
    names: Vec<StageHalf>,
    /// `e(h2')` is a loop after the splice.
    second_new_edge_loop: bool,
}

impl FirstStage {
    fn build(p: &OrientedGraph, h1: HalfEdge, h2: HalfEdge, faults: Faults) -> Option<FirstStage> {
        if h1.edge == h2.edge && !(h1 == h2 && faults.skips(Bullet::FirstDistinct)) {
            return None;
        }
        let second_new_edge_loop = p.vertex_of(h2) == p.vertex_of(h1.bar());
        let derived = p.surgery_raw(h1, h2, faults)?;
        let mut names = vec![StageHalf::Fresh; 2 * derived.graph.edge_count()];
        for h in p.halves() {
            if let Some(image) = derived.provenance.half(h) {
                names[image.index()] = StageHalf::Orig(h);
            }
        }
        names[derived.provenance.fresh_halves[0].index()] = StageHalf::Fresh;
        names[derived.provenance.fresh_halves[1].index()] = StageHalf::FreshBar;
        Some(FirstStage {
            derived,
            names,
            second_new_edge_loop,
        })
    }

    fn resolve(&self, h: StageHalf) -> Option<HalfEdge> {
        match h {
            StageHalf::Orig(h) => self.derived.provenance.half(h),
            StageHalf::Fresh => Some(self.derived.provenance.fresh_halves[0]),
            StageHalf::FreshBar => Some(self.derived.provenance.fresh_halves[1]),
        }
    }

    fn graph(&self) -> &OrientedGraph {
        &self.derived.graph
    }
}

/// Second surgery on `P1`; `Err` when the datum fails a condition, `Ok(None)`
/// when the element exists but its double surgery is zero.
fn second_stage(
    first: &FirstStage,
    h3: HalfEdge,
    h4: HalfEdge,
    faults: Faults,
) -> Result<Option<Arc<DoubleSurgery>>, Violation> {
    let p1 = first.graph();
    if h3.edge == h4.edge {
        if h3 == h4 && faults.skips(Bullet::SecondDistinct) {
            // admitted literally below
        } else if h3 == h4 || !faults.skips(Bullet::SecondDistinct) {
            return Err(Violation::Bullet(Bullet::SecondDistinct));
        } else {
            return Err(Violation::Unconstructible("h4 is the other end of e(h3)"));
        }
    }
    let new_loop = p1.vertex_of(h3) == p1.vertex_of(h4.bar()) || p1.vertex_of(h4) == p1.vertex_of(h3.bar());
    if (p1.is_loop(h3.edge) || p1.is_loop(h4.edge) || new_loop) && !faults.skips(Bullet::SecondNotLoops) {
        return Err(Violation::Bullet(Bullet::SecondNotLoops));
    }
    let Some(d) = p1.surgery_raw(h3, h4, faults) else {
        return Ok(None);
    };
    let m1 = first.derived.provenance.merged_vertex.expect("contracted");
    let m2 = p1.vertex_of(first.derived.provenance.fresh_halves[0]);
    let marks = [
        d.provenance.vertex(m1).expect("vertices survive"),
        d.provenance.vertex(m2).expect("vertices survive"),
        d.provenance.merged_vertex.expect("contracted"),
        d.graph.vertex_of(d.provenance.fresh_halves[0]),
    ];
    let (components, _) = d.graph.components();
    Ok(Some(Arc::new(DoubleSurgery {
        sign: first.derived.sign * d.sign,
        graph: d.graph,
        marks,
        components,
    })))
}

/// Input factor holding a named half-edge of `P1`.
fn owner(input: &AlphaInput, h1: HalfEdge, h2: HalfEdge, h: StageHalf) -> usize {
    match h {
        StageHalf::Orig(h) => input.factor_of(h),
        StageHalf::Fresh => input.factor_of(h2),
        StageHalf::FreshBar => input.factor_of(h1),
    }
}

fn s_sets(input: &AlphaInput, h1: HalfEdge, h2: HalfEdge, h3: StageHalf, h4: StageHalf) -> Vec<u8> {
    let mut s = vec![0u8; input.arity()];
    s[input.factor_of(h1)] |= 0b0001;
    s[input.factor_of(h2)] |= 0b0010;
    s[owner(input, h1, h2, h3)] |= 0b0100;
    s[owner(input, h1, h2, h4)] |= 0b1000;
    s
}

fn check_s(s: &[u8], faults: Faults) -> Result<(), Violation> {
    if !faults.skips(Bullet::SCover) && s.contains(&0) {
        return Err(Violation::Bullet(Bullet::SCover));
    }
    if !faults.skips(Bullet::SLinked) && !s.iter().any(|&x| x & 0b0011 != 0 && x & 0b1100 != 0) {
        return Err(Violation::Bullet(Bullet::SLinked));
    }
    Ok(())
}

fn check_u(blocks: &[u8], surgery: Option<&DoubleSurgery>, faults: Faults) -> Result<(), Violation> {
    if !faults.skips(Bullet::UCover) {
        let mut seen = 0u8;
        for &b in blocks {
            if b == 0 || b & seen != 0 {
                return Err(Violation::Bullet(Bullet::UCover));
            }
            seen |= b;
        }
        if seen != 0b1111 {
            return Err(Violation::Bullet(Bullet::UCover));
        }
    }
    if !faults.skips(Bullet::ULinked) && !blocks.iter().any(|&x| x & 0b0011 != 0 && x & 0b1100 != 0) {
        return Err(Violation::Bullet(Bullet::ULinked));
    }
    if !faults.skips(Bullet::UComponents) {
        if let Some(s) = surgery {
            for j in 0..4 {
                for k in 0..4 {
                    let same = s.components[s.marks[j] as usize - 1] == s.components[s.marks[k] as usize - 1];
                    if same {
                        for &b in blocks {
                            if b & (1 << j) != 0 && b & (1 << k) == 0 {
                                return Err(Violation::Bullet(Bullet::UComponents));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Candidate partitions: every map `{1,2,3,4} → {1..m}`, in lexicographic
/// order of `(slot of 1, …, slot of 4)`. Empty blocks are filtered by
/// [`Bullet::UCover`].
fn partitions(m: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let total = m.pow(4);
    for code in 0..total {
        let mut blocks = vec![0u8; m];
        let mut c = code;
        let mut slots = [0usize; 4];
        for j in (0..4).rev() {
            slots[j] = c % m;
            c /= m;
        }
        for (j, &s) in slots.iter().enumerate() {
            blocks[s] |= 1 << j;
        }
        out.push(blocks);
    }
    out
}

fn check_input(m: usize, input: &AlphaInput) -> Result<(), FError> {
    let n = input.arity();
    if m == 0 || m > 3 || n > 3 {
        return Err(FError::OutOfRange { m, n });
    }
    if input.product().has_loop() {
        return Err(FError::InputHasLoop);
    }
    Ok(())
}

/// Visits every element in a fixed order: `h1`, `h2` over the halves of `P`,
/// then `h3`, `h4` over the halves of `P1`, then the partitions.
pub(crate) fn for_each_f(
    m: usize,
    input: &AlphaInput,
    faults: Faults,
    mut visit: impl FnMut(&FElement),
) -> Result<(), FError> {
    check_input(m, input)?;
    let p = input.product();
    let parts = partitions(m);
    for h1 in p.halves() {
        for h2 in p.halves() {
            let Some(first) = FirstStage::build(p, h1, h2, faults) else {
                continue;
            };
            if first.second_new_edge_loop && !faults.skips(Bullet::FirstNotLoops) {
                continue;
            }
            let p1 = first.graph();
            for c3 in p1.halves() {
                for c4 in p1.halves() {
                    let (h3, h4) = (first.names[c3.index()], first.names[c4.index()]);
                    let s = s_sets(input, h1, h2, h3, h4);
                    if check_s(&s, faults).is_err() {
                        continue;
                    }
                    let Ok(surgery) = second_stage(&first, c3, c4, faults) else {
                        continue;
                    };
                    for blocks in &parts {
                        if check_u(blocks, surgery.as_deref(), faults).is_err() {
                            continue;
                        }
                        visit(&FElement {
                            datum: FDatum {
                                h1,
                                h2,
                                h3,
                                h4,
                                blocks: blocks.clone(),
                            },
                            s_sets: s.clone(),
                            surgery: surgery.clone(),
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

/// Materializes the set for outputs `m` and the given inputs.
pub fn build_f(m: usize, input: &AlphaInput) -> Result<Vec<FElement>, FError> {
    build_f_with(m, input, Faults::NONE)
}

pub(crate) fn build_f_with(m: usize, input: &AlphaInput, faults: Faults) -> Result<Vec<FElement>, FError> {
    let mut out = Vec::new();
    for_each_f(m, input, faults, |f| out.push(f.clone()))?;
    Ok(out)
}

/// Checks every condition for `datum` from scratch.
pub fn evaluate(m: usize, input: &AlphaInput, datum: &FDatum) -> Result<FElement, Violation> {
    evaluate_with(m, input, datum, Faults::NONE)
}

pub(crate) fn evaluate_with(
    m: usize,
    input: &AlphaInput,
    datum: &FDatum,
    faults: Faults,
) -> Result<FElement, Violation> {
    let p = input.product();
    if datum.blocks.len() != m {
        return Err(Violation::WrongBlockCount {
            expected: m,
            found: datum.blocks.len(),
        });
    }
    for h in [datum.h1, datum.h2] {
        if h.edge >= p.edge_count() {
            return Err(Violation::NoSuchHalf(h.to_string()));
        }
    }
    if datum.h1.edge == datum.h2.edge && !(datum.h1 == datum.h2 && faults.skips(Bullet::FirstDistinct)) {
        return Err(Violation::Bullet(Bullet::FirstDistinct));
    }
    let Some(first) = FirstStage::build(p, datum.h1, datum.h2, faults) else {
        return Err(Violation::Unconstructible("e(h1') is a loop"));
    };
    if first.second_new_edge_loop && !faults.skips(Bullet::FirstNotLoops) {
        return Err(Violation::Bullet(Bullet::FirstNotLoops));
    }
    let c3 = first
        .resolve(datum.h3)
        .ok_or_else(|| Violation::NoSuchHalf(datum.h3.to_string()))?;
    let c4 = first
        .resolve(datum.h4)
        .ok_or_else(|| Violation::NoSuchHalf(datum.h4.to_string()))?;
    let s = s_sets(input, datum.h1, datum.h2, datum.h3, datum.h4);
    check_s(&s, faults)?;
    let surgery = second_stage(&first, c3, c4, faults)?;
    check_u(&datum.blocks, surgery.as_deref(), faults)?;
    Ok(FElement {
        datum: datum.clone(),
        s_sets: s,
        surgery,
    })
}

/// Which branch of the involution produced an image.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum MuCase {
    /// Neither `h3` nor `h4` is a fresh half of `e2`; subcase 1..=3.
    I(u8),
    /// `h3 = h2'`; subcase 1..=5.
    Ii(u8),
    /// `h4 = h2'`; subcase 1..=5.
    Iii(u8),
    /// `h3 = h̄2'`, reduced to the `h4 = h2'` table; subcase of that table.
    Iv(u8),
    /// `h4 = h̄2'`, reduced to the `h3 = h2'` table; subcase of that table.
    V(u8),
}

impl fmt::Display for MuCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MuCase::I(k) => write!(f, "i.{k}"),
            MuCase::Ii(k) => write!(f, "ii.{k}"),
            MuCase::Iii(k) => write!(f, "iii.{k}"),
            MuCase::Iv(k) => write!(f, "iv.{k}"),
            MuCase::V(k) => write!(f, "v.{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MuError {
    #[error("both h3 and h4 lie on the new edge e2")]
    BothFresh,
}

type Xi = [u8; 4];
const XI_ID: Xi = [1, 2, 3, 4];

/// `U∨_i = { j | ξ(j) ∈ U_i }`.
fn pull_back(blocks: &[u8], xi: Xi) -> Vec<u8> {
    blocks
        .iter()
        .map(|&b| {
            let mut out = 0u8;
            for j in 0..4 {
                if b & (1 << (xi[j] - 1)) != 0 {
                    out |= 1 << j;
                }
            }
            out
        })
        .collect()
}

/// The involution. Only vertex incidences of the original product are
/// consulted, so the image is computed without building any surgery.
pub fn mu(input: &AlphaInput, f: &FDatum) -> Result<(FDatum, MuCase), MuError> {
    mu_at(input, f, VertexLevel::Product)
}

/// Graph in which the vertex conditions of the involution are read.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexLevel {
    /// The product `P` of the inputs.
    Product,
    /// The first surgery `P1`, where `v(h1)` and `v(h̄2)` name one vertex.
    FirstSurgery,
}

pub fn mu_at(input: &AlphaInput, f: &FDatum, level: VertexLevel) -> Result<(FDatum, MuCase), MuError> {
    let p = input.product();
    let first = match level {
        VertexLevel::Product => None,
        VertexLevel::FirstSurgery => FirstStage::build(p, f.h1, f.h2, Faults::NONE),
    };
    let v = |h: HalfEdge| match &first {
        None => p.vertex_of(h),
        Some(s) => s.derived.provenance.vertex(p.vertex_of(h)).expect("vertices survive"),
    };
    let (h1, h2) = (f.h1, f.h2);
    use StageHalf::{Fresh, FreshBar, Orig};
    let (h1v, h2v, h3v, h4v, xi, case) = match (f.h3, f.h4) {
        (Orig(h3), Orig(h4)) => {
            let joins = |e: HalfEdge| {
                let (x, y) = (v(e), v(e.bar()));
                let (a, b) = (v(h3), v(h4.bar()));
                (x == a && y == b) || (x == b && y == a)
            };
            if joins(h1) {
                (h1.bar(), h2, f.h3, f.h4, XI_ID, MuCase::I(1))
            } else if joins(h2) {
                (h1, h2.bar(), f.h3, f.h4, XI_ID, MuCase::I(2))
            } else {
                (h3, h4, Orig(h1), Orig(h2), [3, 4, 1, 2], MuCase::I(3))
            }
        }
        (Fresh, Orig(h4)) => {
            let (a, b, c, xi, k) = fresh_third(v, h1, h2, h4);
            (a, b, c, Fresh, xi, MuCase::Ii(k))
        }
        (Orig(h3), Fresh) => {
            let (a, b, d, xi, k) = fresh_fourth(v, h1, h2, h3);
            (a, b, Fresh, d, xi, MuCase::Iii(k))
        }
        (FreshBar, Orig(h4)) => {
            // μ(h1, h2, h̄4, h̄3, U) through the h4 = h2' table, then bar and swap.
            let (a, b, d, xi, k) = fresh_fourth(v, h1, h2, h4.bar());
            (a, b, d.bar(), Fresh.bar(), xi, MuCase::Iv(k))
        }
        (Orig(h3), FreshBar) => {
            let (a, b, c, xi, k) = fresh_third(v, h1, h2, h3.bar());
            (a, b, Fresh.bar(), c.bar(), xi, MuCase::V(k))
        }
        _ => return Err(MuError::BothFresh),
    };
    Ok((
        FDatum {
            h1: h1v,
            h2: h2v,
            h3: h3v,
            h4: h4v,
            blocks: pull_back(&f.blocks, xi),
        },
        case,
    ))
}

/// Table for `h3 = h2'`: returns `(h1∨, h2∨, h3∨, ξ, subcase)`; `h4∨` is the
/// fresh half of the new first surgery.
fn fresh_third(
    v: impl Fn(HalfEdge) -> Vertex,
    h1: HalfEdge,
    h2: HalfEdge,
    h4: HalfEdge,
) -> (HalfEdge, HalfEdge, StageHalf, Xi, u8) {
    use StageHalf::Orig;
    if v(h1) == v(h2) && v(h1.bar()) == v(h4.bar()) {
        (h1, h4, Orig(h2.bar()), XI_ID, 1)
    } else if v(h2.bar()) == v(h4) && v(h1) == v(h2) {
        (h4.bar(), h2, Orig(h1), XI_ID, 2)
    } else if v(h2.bar()) == v(h4) && v(h1.bar()) == v(h4.bar()) {
        (h1.bar(), h2.bar(), Orig(h4), XI_ID, 3)
    } else if v(h2.bar()) == v(h4) && v(h1) != v(h2) && v(h1.bar()) != v(h4.bar()) {
        (h4, h1.bar(), Orig(h2), [1, 1, 3, 4], 4)
    } else {
        (h2, h4, Orig(h1), [2, 4, 1, 4], 5)
    }
}

/// Table for `h4 = h2'`: returns `(h1∨, h2∨, h4∨, ξ, subcase)`; `h3∨` is the
/// fresh half of the new first surgery.
fn fresh_fourth(
    v: impl Fn(HalfEdge) -> Vertex,
    h1: HalfEdge,
    h2: HalfEdge,
    h3: HalfEdge,
) -> (HalfEdge, HalfEdge, StageHalf, Xi, u8) {
    use StageHalf::Orig;
    if v(h2) == v(h3) && v(h2.bar()) == v(h1.bar()) {
        (h3, h2, Orig(h1.bar()), XI_ID, 1)
    } else if v(h3.bar()) == v(h1) && v(h2.bar()) == v(h1.bar()) {
        (h1, h3.bar(), Orig(h2), XI_ID, 2)
    } else if v(h3.bar()) == v(h1) && v(h2) == v(h3) {
        (h1.bar(), h2.bar(), Orig(h3), XI_ID, 3)
    } else if v(h3.bar()) == v(h1) && v(h2.bar()) != v(h1.bar()) && v(h2) != v(h3) {
        (h2.bar(), h3, Orig(h1), [1, 3, 3, 4], 4)
    } else {
        (h3, h1, Orig(h2), [3, 1, 1, 2], 5)
    }
}

/// What happened to one element under the involution.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Outcome {
    Cancels,
    FixedWithZeroTerm,
    FixedWithTerm,
    Dispatch,
    ImageNotInSet(String),
    NotInvolutive,
    NoCancellation,
}

/// Non-aborting tally of the involution over the whole set.
#[derive(Clone, Debug, Default, Serialize)]
pub struct PairingAudit {
    pub size: usize,
    /// `(case, outcome, term of f is zero) → count`.
    pub tally: std::collections::BTreeMap<String, usize>,
    pub failures: usize,
    pub first_failures: Vec<String>,
    /// Failures whose own term is nonzero.
    pub failures_with_term: usize,
    #[serde(skip)]
    pub total: Option<TensorVector>,
    /// `Σ term(f)` over the elements the involution fails on.
    #[serde(skip)]
    pub unpaired_total: Option<TensorVector>,
}

pub fn audit_pairing(m: usize, input: &AlphaInput, level: VertexLevel) -> Result<PairingAudit, FError> {
    let elements = build_f(m, input)?;
    let mut audit = PairingAudit {
        size: elements.len(),
        total: Some(TensorVector::zero(m)),
        unpaired_total: Some(TensorVector::zero(m)),
        ..PairingAudit::default()
    };
    for f in &elements {
        let term_f = f.term();
        audit.total.as_mut().unwrap().add_assign(&term_f).expect("same arity");
        let (case, outcome) = match mu_at(input, &f.datum, level) {
            Err(_) => ("-".to_string(), Outcome::Dispatch),
            Ok((image, case)) => {
                let outcome = match evaluate(m, input, &image) {
                    Err(v) => Outcome::ImageNotInSet(v.to_string()),
                    Ok(g) => match mu_at(input, &image, level) {
                        Ok((back, _)) if back == f.datum => {
                            if image == f.datum {
                                if term_f.is_zero() {
                                    Outcome::FixedWithZeroTerm
                                } else {
                                    Outcome::FixedWithTerm
                                }
                            } else if term_f.add(&g.term()).expect("same arity").is_zero() {
                                Outcome::Cancels
                            } else {
                                Outcome::NoCancellation
                            }
                        }
                        _ => Outcome::NotInvolutive,
                    },
                };
                (case.to_string(), outcome)
            }
        };
        let bad = !matches!(outcome, Outcome::Cancels | Outcome::FixedWithZeroTerm);
        if bad {
            audit.failures += 1;
            if !term_f.is_zero() {
                audit.failures_with_term += 1;
            }
            audit.unpaired_total.as_mut().unwrap().add_assign(&term_f).expect("same arity");
            if audit.first_failures.len() < 5 {
                audit.first_failures.push(format!("{} [{case}] {outcome:?}", f.datum));
            }
        }
        let looped = f.surgery.as_ref().is_none_or(|s| s.graph.has_loop());
        *audit
            .tally
            .entry(format!("{case} {outcome:?} zero_term={} p2_loop={looped}", term_f.is_zero()))
            .or_default() += 1;
    }
    Ok(audit)
}

/// One checked pair `{f, μ(f)}`.
#[derive(Clone, Debug, Serialize)]
pub struct CertifiedPair {
    pub f: FDatum,
    pub mu: FDatum,
    pub case: MuCase,
    #[serde(serialize_with = "serialize_vector")]
    pub term_f: TensorVector,
    #[serde(serialize_with = "serialize_vector")]
    pub term_mu: TensorVector,
}

fn serialize_vector<S: serde::Serializer>(v: &TensorVector, s: S) -> Result<S::Ok, S::Error> {
    v.json_value().serialize(s)
}

#[derive(Clone, Debug)]
pub struct PairingCertificate {
    pub m: usize,
    pub n: usize,
    /// Each orbit of the involution once, keyed by its smaller datum. A fixed
    /// point appears as a pair with `f == mu`.
    pub pairs: Vec<CertifiedPair>,
    pub fixed_points: usize,
    pub size: usize,
    /// `Σ_F term(f)`.
    pub total: TensorVector,
}

#[derive(Serialize)]
struct CertificateJson<'a> {
    m: usize,
    n: usize,
    size: usize,
    fixed_points: usize,
    total: serde_json::Value,
    pairs: &'a [CertifiedPair],
}

impl PairingCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&CertificateJson {
            m: self.m,
            n: self.n,
            size: self.size,
            fixed_points: self.fixed_points,
            total: self.total.json_value(),
            pairs: &self.pairs,
        })
        .expect("certificates serialize")
    }
}

#[derive(Debug, Clone, Error)]
pub enum PairingFailure {
    #[error(transparent)]
    Input(#[from] FError),
    #[error("dispatch failed on {f}: {error}")]
    Dispatch { f: FDatum, error: MuError },
    #[error("μ({f}) = {image} is not in the set: {violation}")]
    ImageNotInSet { f: FDatum, image: FDatum, violation: Violation },
    #[error("μ(μ({f})) = {back} differs from {f}")]
    NotInvolutive { f: FDatum, back: FDatum },
    #[error("terms of {f} and μ(f) = {image} do not cancel: {sum}")]
    NoCancellation { f: FDatum, image: FDatum, sum: TensorVector },
    #[error("{f} is a fixed point with nonzero term {term}")]
    FixedPointWithTerm { f: FDatum, term: TensorVector },
}

pub fn verify_pairing(m: usize, input: &AlphaInput) -> Result<PairingCertificate, PairingFailure> {
    verify_pairing_with(m, input, Faults::NONE)
}

pub(crate) fn verify_pairing_with(
    m: usize,
    input: &AlphaInput,
    faults: Faults,
) -> Result<PairingCertificate, PairingFailure> {
    let elements = build_f_with(m, input, faults)?;
    let mut pairs = Vec::new();
    let mut fixed_points = 0;
    let mut total = TensorVector::zero(m);
    for f in &elements {
        let mut term_f = TensorVector::zero(m);
        term_into(f, &mut term_f, faults);
        total.add_assign(&term_f).expect("same arity");
        let (image, case) = mu(input, &f.datum).map_err(|error| PairingFailure::Dispatch {
            f: f.datum.clone(),
            error,
        })?;
        let g = evaluate_with(m, input, &image, faults).map_err(|violation| PairingFailure::ImageNotInSet {
            f: f.datum.clone(),
            image: image.clone(),
            violation,
        })?;
        let (back, _) = mu(input, &image).map_err(|error| PairingFailure::Dispatch {
            f: image.clone(),
            error,
        })?;
        if back != f.datum {
            return Err(PairingFailure::NotInvolutive {
                f: f.datum.clone(),
                back,
            });
        }
        let mut term_mu = TensorVector::zero(m);
        term_into(&g, &mut term_mu, faults);
        if image == f.datum {
            if !term_f.is_zero() {
                return Err(PairingFailure::FixedPointWithTerm {
                    f: f.datum.clone(),
                    term: term_f,
                });
            }
            fixed_points += 1;
        } else {
            let sum = term_f.add(&term_mu).expect("same arity");
            if !sum.is_zero() {
                return Err(PairingFailure::NoCancellation {
                    f: f.datum.clone(),
                    image,
                    sum,
                });
            }
        }
        if f.datum <= image {
            pairs.push(CertifiedPair {
                f: f.datum.clone(),
                mu: image,
                case,
                term_f,
                term_mu,
            });
        }
    }
    Ok(PairingCertificate {
        m,
        n: input.arity(),
        pairs,
        fixed_points,
        size: elements.len(),
        total,
    })
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

    #[test]
    fn theta_has_empty_set() {
        let f = build_f(1, &AlphaInput::new(vec![theta()])).unwrap();
        assert!(f.is_empty());
    }

    #[test]
    fn k4_set_is_nonempty_and_covers() {
        let f = build_f(1, &AlphaInput::new(vec![k4()])).unwrap();
        assert!(!f.is_empty());
        for e in &f {
            assert_eq!(e.s_sets, vec![0b1111]);
            assert_eq!(e.flowchart().source_input_labels(), vec![1]);
            assert_eq!(e.flowchart().target_output_labels(), vec![1]);
        }
    }

    #[test]
    fn theta_pair_sets() {
        let f = build_f(2, &AlphaInput::new(vec![theta(), theta()])).unwrap();
        for e in &f {
            assert_eq!(e.s_sets.len(), 2);
            assert!(e.s_sets.iter().all(|&s| s != 0));
            assert_eq!(e.s_sets[0] | e.s_sets[1], 0b1111);
            assert_eq!(e.s_sets[0] & e.s_sets[1], 0);
        }
    }

    #[test]
    fn loops_rejected() {
        let looped = OrientedGraph::from_raw(2, vec![(1, 1), (1, 2), (2, 2)]);
        assert_eq!(
            build_f(1, &AlphaInput::new(vec![looped])).unwrap_err(),
            FError::InputHasLoop
        );
        assert!(matches!(
            build_f(4, &AlphaInput::new(vec![k4()])),
            Err(FError::OutOfRange { .. })
        ));
    }

    #[test]
    fn partition_count() {
        let count = |m| {
            partitions(m)
                .into_iter()
                .filter(|b| b.iter().all(|&x| x != 0))
                .count()
        };
        // surjections {1,2,3,4} -> {1..m}
        assert_eq!(count(1), 1);
        assert_eq!(count(2), 14);
        assert_eq!(count(3), 36);
    }

    #[test]
    fn pull_back_identity_and_swap() {
        assert_eq!(pull_back(&[0b0101, 0b1010], XI_ID), vec![0b0101, 0b1010]);
        // ξ = (1 3)(2 4) exchanges the roles of {1,2} and {3,4}
        assert_eq!(pull_back(&[0b0011, 0b1100], [3, 4, 1, 2]), vec![0b1100, 0b0011]);
    }

    #[test]
    fn k4_pairing_breaks_only_on_zero_terms() {
        let input = AlphaInput::new(vec![k4()]);
        let audit = audit_pairing(1, &input, VertexLevel::Product).unwrap();
        assert_eq!(audit.size, 2496);
        assert_eq!(audit.failures, 480);
        assert_eq!(audit.failures_with_term, 0);
        assert!(audit.total.unwrap().is_zero());
        assert!(matches!(
            verify_pairing(1, &input),
            Err(PairingFailure::ImageNotInSet { .. })
        ));
    }

    #[test]
    fn degenerate_case_one_leaves_the_set() {
        // e(h1) joins v(h3), v(h̄4) and e(h4) joins v(h̄1), v(h̄2): flipping h1
        // turns e(h4) into a loop of the new first surgery.
        let g = OrientedGraph::new(
            5,
            vec![(1, 2), (1, 2), (1, 2), (1, 3), (1, 4), (2, 3), (3, 5), (4, 5), (4, 5)],
        )
        .unwrap();
        let input = AlphaInput::new(vec![g]);
        let f = FDatum {
            h1: HalfEdge::src(3),
            h2: HalfEdge::src(7),
            h3: StageHalf::Orig(HalfEdge::src(0)),
            h4: StageHalf::Orig(HalfEdge::tgt(6)),
            blocks: vec![0b1111],
        };
        let element = evaluate(1, &input, &f).unwrap();
        assert!(!element.term().is_zero());
        let (image, case) = mu(&input, &f).unwrap();
        assert_eq!(case, MuCase::I(1));
        assert_eq!(image.h1, HalfEdge::tgt(3));
        assert_eq!(
            evaluate(1, &input, &image).unwrap_err(),
            Violation::Bullet(Bullet::SecondNotLoops)
        );
    }

    #[test]
    fn case_one_swap_is_involutive_on_generic_data() {
        let input = AlphaInput::new(vec![k4()]);
        for f in build_f(1, &input).unwrap() {
            let (image, case) = mu(&input, &f.datum).unwrap();
            if case == MuCase::I(3) {
                let (back, _) = mu(&input, &image).unwrap();
                assert_eq!(back, f.datum);
            }
        }
    }
}
