//! Two-corolla flowcharts and the composed identity they index.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::TensorVector;
use crate::alpha::AlphaInput;
use crate::error::AlgebraError;
use crate::faults::Faults;
use crate::involution::{for_each_f, term_into, FError};

/// A flowchart in `T(m, n)`: which labeled inputs enter the source corolla
/// and which labeled outputs leave the target corolla. The remaining inputs
/// enter the target, the remaining outputs leave the source, and the internal
/// edge runs from source to target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flowchart {
    pub m: usize,
    pub n: usize,
    /// Bit `i` set when input `i + 1` enters the source corolla.
    pub source_inputs: u8,
    /// Bit `i` set when output `i + 1` leaves the target corolla.
    pub target_outputs: u8,
}

impl Flowchart {
    /// `(outputs, inputs)` of the source corolla.
    pub fn source_arity(&self) -> (usize, usize) {
        let o = self.target_outputs.count_ones() as usize;
        (self.m - o + 1, self.source_inputs.count_ones() as usize)
    }

    /// `(outputs, inputs)` of the target corolla.
    pub fn target_arity(&self) -> (usize, usize) {
        let i = self.source_inputs.count_ones() as usize;
        (self.target_outputs.count_ones() as usize, self.n - i + 1)
    }

    /// Both corollas carry a nonzero map, i.e. all their arities are at most 2.
    pub fn is_admissible(&self) -> bool {
        let (so, si) = self.source_arity();
        let (to, ti) = self.target_arity();
        so <= 2 && si <= 2 && to <= 2 && ti <= 2
    }

    pub fn source_input_labels(&self) -> Vec<usize> {
        bits(self.source_inputs)
    }

    pub fn target_output_labels(&self) -> Vec<usize> {
        bits(self.target_outputs)
    }
}

fn bits(mask: u8) -> Vec<usize> {
    (0..8).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect()
}

impl fmt::Display for Flowchart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let set = |v: Vec<usize>| {
            v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        };
        write!(
            f,
            "T({},{})[in→s: {{{}}}, t→out: {{{}}}]",
            self.m,
            self.n,
            set(self.source_input_labels()),
            set(self.target_output_labels())
        )
    }
}

/// All of `T(m, n)`, ordered by source inputs then target outputs.
pub fn enumerate_flowcharts(m: usize, n: usize) -> Vec<Flowchart> {
    assert!((1..=8).contains(&m) && (1..=8).contains(&n));
    let mut out = Vec::with_capacity(((1 << n) - 1) * ((1 << m) - 1));
    for source_inputs in 1..(1u16 << n) {
        for target_outputs in 1..(1u16 << m) {
            out.push(Flowchart {
                m,
                n,
                source_inputs: source_inputs as u8,
                target_outputs: target_outputs as u8,
            });
        }
    }
    out
}

/// The identities obtained by fixing `(m, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NamedIdentity {
    DSquared,
    Leibniz,
    Jacobi,
    Coderivation,
    CoJacobi,
    Bialgebra22,
    Id23,
    Id32,
    Id33,
}

impl NamedIdentity {
    pub const ALL: [NamedIdentity; 9] = [
        NamedIdentity::DSquared,
        NamedIdentity::Leibniz,
        NamedIdentity::Jacobi,
        NamedIdentity::Coderivation,
        NamedIdentity::CoJacobi,
        NamedIdentity::Bialgebra22,
        NamedIdentity::Id23,
        NamedIdentity::Id32,
        NamedIdentity::Id33,
    ];

    /// `(m, n)`: outputs, inputs.
    pub fn arity(self) -> (usize, usize) {
        match self {
            NamedIdentity::DSquared => (1, 1),
            NamedIdentity::Leibniz => (1, 2),
            NamedIdentity::Jacobi => (1, 3),
            NamedIdentity::Coderivation => (2, 1),
            NamedIdentity::CoJacobi => (3, 1),
            NamedIdentity::Bialgebra22 => (2, 2),
            NamedIdentity::Id23 => (2, 3),
            NamedIdentity::Id32 => (3, 2),
            NamedIdentity::Id33 => (3, 3),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NamedIdentity::DSquared => "d_squared",
            NamedIdentity::Leibniz => "leibniz",
            NamedIdentity::Jacobi => "jacobi",
            NamedIdentity::Coderivation => "coderivation",
            NamedIdentity::CoJacobi => "cojacobi",
            NamedIdentity::Bialgebra22 => "bialgebra22",
            NamedIdentity::Id23 => "id23",
            NamedIdentity::Id32 => "id32",
            NamedIdentity::Id33 => "id33",
        }
    }

    pub fn from_name(name: &str) -> Option<NamedIdentity> {
        NamedIdentity::ALL.into_iter().find(|i| i.name() == name)
    }
}

impl fmt::Display for NamedIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `α ∘_T α` on `input`, defined as the sum of the proof-set terms whose
/// flowchart is `t`. Zero when a corolla of `t` has arity above 2.
pub fn compose_along(t: &Flowchart, input: &AlphaInput) -> Result<TensorVector, FError> {
    compose_along_with(t, input, Faults::NONE)
}

pub(crate) fn compose_along_with(
    t: &Flowchart,
    input: &AlphaInput,
    faults: Faults,
) -> Result<TensorVector, FError> {
    if !t.is_admissible() {
        return Ok(TensorVector::zero(t.m));
    }
    Ok(residual_by_flowchart_with(t.m, t.n, input, faults)?
        .remove(t)
        .unwrap_or_else(|| TensorVector::zero(t.m)))
}

/// Every admissible flowchart's composed term in one pass over the proof set.
pub(crate) fn residual_by_flowchart_with(
    m: usize,
    n: usize,
    input: &AlphaInput,
    faults: Faults,
) -> Result<BTreeMap<Flowchart, TensorVector>, FError> {
    if n != input.arity() {
        return Err(FError::Arity(AlgebraError::ArityMismatch {
            expected: n,
            found: input.arity(),
        }));
    }
    let mut groups: BTreeMap<Flowchart, TensorVector> = enumerate_flowcharts(m, n)
        .into_iter()
        .filter(Flowchart::is_admissible)
        .map(|t| (t, TensorVector::zero(m)))
        .collect();
    if groups.is_empty() {
        return Ok(groups);
    }
    for_each_f(m, input, faults, |f| {
        let t = f.flowchart();
        // Elements whose flowchart is not admissible would need a zero map.
        if let Some(acc) = groups.get_mut(&t) {
            term_into(f, acc, faults);
        }
    })?;
    Ok(groups)
}

/// Left side of the strong homotopy identity at `(m, n)`: the sum over all
/// flowcharts. Zero without work when every flowchart has a corolla of arity
/// above 2 (in particular for `m > 3` or `n > 3`).
pub fn shlb_residual(m: usize, n: usize, input: &AlphaInput) -> Result<TensorVector, FError> {
    shlb_residual_with(m, n, input, Faults::NONE)
}

pub(crate) fn shlb_residual_with(
    m: usize,
    n: usize,
    input: &AlphaInput,
    faults: Faults,
) -> Result<TensorVector, FError> {
    let mut out = TensorVector::zero(m);
    for v in residual_by_flowchart_with(m, n, input, faults)?.values() {
        out.add_assign(v).expect("same arity");
    }
    Ok(out)
}

pub fn named_identity(identity: NamedIdentity, input: &AlphaInput) -> Result<TensorVector, FError> {
    let (m, n) = identity.arity();
    shlb_residual(m, n, input)
}
