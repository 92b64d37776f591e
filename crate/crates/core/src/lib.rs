//! Numerical toolkit for studying how a quantum switch of two global
//! unitaries acts on absolutely separable (AS) qubit-qudit states.
//!
//! The crate is organised bottom-up:
//!
//! - [`linalg`]: dense complex matrices, Kronecker products, Hermitian
//!   spectra, partial transpose and rank.
//! - [`states`]: boundary rank-3, modified Werner, Bell-diagonal and
//!   maximally mixed states.
//! - [`unitaries`]: CNOT, the one-parameter `U(θ)` family and a seeded Haar
//!   sampler.
//! - [`switch`]: the switch superchannel in Kraus form, control
//!   measurement and the closed form for unitary channels.
//! - [`criteria`]: the spectral AS test, PPT and combined classification.
//! - [`experiments`]: parameter scans and random-unitary sampling that emit
//!   [`experiments::ScanRecord`] rows.
//! - [`cli`]: the `abssep` command-line front end, CSV and manifest output.

// `!(x <= tol)` comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod criteria;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod states;
pub mod switch;
pub mod unitaries;

pub use criteria::{
    classify, is_absolutely_separable, is_ppt, Classification, SpectrumReport, Tolerances, Verdict,
};
pub use error::{Error, Result};
pub use linalg::{BipartiteDims, ComplexMatrix};
pub use states::DensityMatrix;
pub use switch::{Branch, SwitchOutcome};
pub use unitaries::{RngSeed, UnitaryMatrix};
