//! Exact-arithmetic toolkit for the masked LP outsourcing transformation
//! and an audit harness that shows where it breaks.
//!
//! A client holding `min cᵀx s.t. A x = b, B x ≥ 0` masks it with a secret
//! key and ships the result to a server. A simplex server has to add
//! nonnegativity on the masked variables before it can pivot, and that
//! constraint does not correspond to `x ≥ 0` on the client side. The crate
//! provides:
//!
//! * [`numerics`]: exact rationals, vectors and matrices.
//! * [`model`]: problem forms and conversions between them.
//! * [`simplex`]: two-phase Bland simplex and a vertex-enumeration oracle.
//! * [`masking`]: key generation, encryption and decryption.
//! * [`audit`]: trial classification, seeded audits and the built-in
//!   counterexample.
//! * [`io`] and [`cli`]: canonical JSON files and the `lpmask` command.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod audit;
pub mod cli;
pub mod io;
pub mod masking;
pub mod model;
pub mod numerics;
pub mod random;
pub mod simplex;

pub use audit::{AuditReport, AuditTrial, BMode, TrialTag};
pub use masking::MaskingKey;
pub use model::{GeneralLP, MaskedProblem, PeculiarProblem, Sign};
pub use numerics::{RatMatrix, RatVector, Rational};
pub use simplex::{SolveOutcome, Verdict};
