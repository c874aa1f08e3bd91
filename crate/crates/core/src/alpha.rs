//! The operations `α_{m,n}` from `n` graphs to `m`-fold tensors.
//!
//! `α_{m,n}(X_1 ⊗ ⋯ ⊗ X_n)` sums, over ordered pairs of half-edges `(h1, h2)`
//! of the product `X_1 ⋯ X_n` lying on distinct edges and touching every
//! factor, all ways of writing the surgery result as `Y_1 ⋯ Y_m` with each
//! `Y_i` holding one of the two marked vertices. It vanishes when `m > 2` or
//! `n > 2`.

use crate::algebra::{accumulate_splits, SplitMode, TensorVector};
use crate::error::AlgebraError;
use crate::faults::Faults;
use crate::graph::{product_all, HalfEdge, OrientedGraph};

/// Ordered input factors, their product, and which factor each edge of the
/// product came from.
#[derive(Clone, Debug)]
pub struct AlphaInput {
    factors: Vec<OrientedGraph>,
    product: OrientedGraph,
    factor_of_edge: Vec<usize>,
}

impl AlphaInput {
    pub fn new(factors: Vec<OrientedGraph>) -> AlphaInput {
        assert!(!factors.is_empty(), "at least one input graph");
        let product = product_all(&factors).expect("nonempty");
        let factor_of_edge = factors
            .iter()
            .enumerate()
            .flat_map(|(i, g)| std::iter::repeat_n(i, g.edge_count()))
            .collect();
        AlphaInput {
            factors,
            product,
            factor_of_edge,
        }
    }

    pub fn arity(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[OrientedGraph] {
        &self.factors
    }

    pub fn product(&self) -> &OrientedGraph {
        &self.product
    }

    /// Index of the input factor containing `h` (a half-edge of the product).
    pub fn factor_of(&self, h: HalfEdge) -> usize {
        self.factor_of_edge[h.edge]
    }
}

/// `α_{m,n}` applied to `input`, where `n` must equal the number of inputs.
pub fn alpha(m: usize, n: usize, input: &AlphaInput) -> Result<TensorVector, AlgebraError> {
    alpha_with(m, n, input, Faults::NONE)
}

pub(crate) fn alpha_with(
    m: usize,
    n: usize,
    input: &AlphaInput,
    faults: Faults,
) -> Result<TensorVector, AlgebraError> {
    if n != input.arity() {
        return Err(AlgebraError::ArityMismatch {
            expected: n,
            found: input.arity(),
        });
    }
    assert!(m >= 1);
    let mut out = TensorVector::zero(m);
    if m > 2 || n > 2 {
        return Ok(out);
    }
    let p = input.product();
    for h1 in p.halves() {
        for h2 in p.halves() {
            if h1.edge == h2.edge {
                continue;
            }
            if n == 2 && input.factor_of(h1) == input.factor_of(h2) {
                continue;
            }
            if p.is_loop(h1.edge) || p.is_loop(h2.edge) {
                continue;
            }
            let Some(d) = p.surgery_raw(h1, h2, faults) else {
                continue;
            };
            let merged = d.provenance.merged_vertex.expect("surgery contracts");
            let second = d.graph.vertex_of(d.provenance.fresh_halves[0]);
            accumulate_splits(&mut out, d.sign, &d.graph, &[merged, second], SplitMode::Free, faults);
        }
    }
    Ok(out)
}

/// `α_{1,1}`.
pub fn differential(x: &OrientedGraph) -> TensorVector {
    alpha(1, 1, &AlphaInput::new(vec![x.clone()])).expect("arity 1")
}

/// `α_{1,2}`.
pub fn bracket(x: &OrientedGraph, y: &OrientedGraph) -> TensorVector {
    alpha(1, 2, &AlphaInput::new(vec![x.clone(), y.clone()])).expect("arity 2")
}

/// `α_{2,1}`.
pub fn cobracket(x: &OrientedGraph) -> TensorVector {
    alpha(2, 1, &AlphaInput::new(vec![x.clone()])).expect("arity 1")
}

/// `α_{2,2}`.
pub fn alpha22(x: &OrientedGraph, y: &OrientedGraph) -> TensorVector {
    alpha(2, 2, &AlphaInput::new(vec![x.clone(), y.clone()])).expect("arity 2")
}
