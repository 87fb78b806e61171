//! Invariant factors and higher-order Alexander polynomials of knots.
//!
//! The pipeline goes PD code → Wirtinger presentation → Fox Jacobian →
//! square Alexander matrix over ℤ[t], then reads off the φ-primary
//! structure of the Alexander module one irreducible factor at a time.

pub mod error;
pub mod exactla;
pub mod factorint;
pub mod invariants;
pub mod knotdiag;
pub mod numberfield;
pub mod polyring;
pub mod smithoracle;

pub use error::{Error, Result};
pub use exactla::{det_poly, PolyMatrix};
pub use factorint::{factor, squarefree_decompose, Factorization};
pub use invariants::{
    analyze, compute_invariants, invariants_of_pd, partitions_with, resolve_partition,
    AlexanderInvariants, Analysis, Method, Partition, PartitionSource, PhiEvidence, PhiReport,
    Policy, Resolution,
};
pub use knotdiag::{alexander_matrix, parse_pd, AlexanderMatrix, PDCode};
pub use numberfield::{NFElem, NumberField};
pub use polyring::{normalize_delta, IntPoly, RatPoly};
pub use smithoracle::{smith_form, SmithResult};
