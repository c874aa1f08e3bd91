//! Entry points that run with a chosen [`Faults`] setting.

use std::collections::BTreeMap;

use crate::algebra::TensorVector;
use crate::alpha::{alpha_with, AlphaInput};
use crate::error::AlgebraError;
use crate::faults::Faults;
use crate::flowchart::{residual_by_flowchart_with, shlb_residual_with, Flowchart};
use crate::involution::{
    build_f_with, evaluate_with, term_into, verify_pairing_with, FDatum, FElement, FError, PairingCertificate,
    PairingFailure, Violation,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Engine {
    pub faults: Faults,
}

impl Engine {
    pub fn new(faults: Faults) -> Engine {
        Engine { faults }
    }

    pub fn alpha(&self, m: usize, n: usize, input: &AlphaInput) -> Result<TensorVector, AlgebraError> {
        alpha_with(m, n, input, self.faults)
    }

    pub fn shlb_residual(&self, m: usize, n: usize, input: &AlphaInput) -> Result<TensorVector, FError> {
        shlb_residual_with(m, n, input, self.faults)
    }

    pub fn residual_by_flowchart(
        &self,
        m: usize,
        n: usize,
        input: &AlphaInput,
    ) -> Result<BTreeMap<Flowchart, TensorVector>, FError> {
        residual_by_flowchart_with(m, n, input, self.faults)
    }

    pub fn build_f(&self, m: usize, input: &AlphaInput) -> Result<Vec<FElement>, FError> {
        build_f_with(m, input, self.faults)
    }

    pub fn verify_pairing(&self, m: usize, input: &AlphaInput) -> Result<PairingCertificate, PairingFailure> {
        verify_pairing_with(m, input, self.faults)
    }

    /// Membership test and evaluation of one datum.
    pub fn evaluate(&self, m: usize, input: &AlphaInput, datum: &FDatum) -> Result<FElement, Violation> {
        evaluate_with(m, input, datum, self.faults)
    }

    pub fn term(&self, f: &FElement) -> TensorVector {
        let mut out = TensorVector::zero(f.datum.blocks.len());
        term_into(f, &mut out, self.faults);
        out
    }
}
