//! Oriented graphs, the odd operations `α_{m,n}` on the graph complex, and
//! machinery for checking the strong homotopy Lie bialgebra identities.

pub mod algebra;
pub mod alpha;
pub mod canonical;
pub mod corpus;
pub mod engine;
pub mod error;
pub mod faults;
pub mod flowchart;
pub mod graph;
pub mod involution;
pub mod text;

pub use algebra::{GraphVector, TensorVector};
pub use alpha::{alpha, alpha22, bracket, cobracket, differential, AlphaInput};
pub use canonical::{canonicalize, Canonical, CanonicalKey};
pub use engine::Engine;
pub use error::{AlgebraError, CorpusError, GraphError};
pub use faults::Faults;
pub use flowchart::{compose_along, enumerate_flowcharts, named_identity, shlb_residual, Flowchart, NamedIdentity};
pub use graph::{End, HalfEdge, OrientedGraph, Sign, SignedGraph};
pub use involution::{
    build_f, evaluate, mu, verify_pairing, Bullet, FDatum, FElement, PairingCertificate, PairingFailure, StageHalf,
};
