//! Executable machinery for mixed-trace upper bounds on counting number fields.
//!
//! * [`combinat`]: exponent vectors, the ordered pair set `A_n`, exact binomials.
//! * [`trace_jacobian`]: mixed-trace maps, their Jacobians, and nonvanishing
//!   certificates over a prime field.
//! * [`bounds`]: every discriminant-exponent bound and the constant scan.
//! * [`field_lab`]: small totally real fields, trace-form reduction and
//!   mixed-trace fingerprints.

pub mod bounds;
pub mod combinat;
pub mod field_lab;
pub mod linalg;
pub mod modp;
pub mod poly;
pub mod trace_jacobian;

mod error;

pub use bounds::{BoundReport, FeasibilityMode};
pub use combinat::{ExponentSet, ExponentVector};
pub use error::Error;
pub use field_lab::{FieldSample, Fingerprint, IntPolynomial};
pub use trace_jacobian::{CertificateMode, EvaluationPoint, JacobianCertificate};

/// `2^61 - 1`, the default certification modulus.
pub const DEFAULT_PRIME: u64 = (1 << 61) - 1;
