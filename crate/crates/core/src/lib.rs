//! Wiener–Hopf embedding formulas for diffraction directivities.
//!
//! The crate covers three scatterers with a Dirichlet boundary: the half-plane,
//! the finite strip and the right-angled wedge. For each one it builds the
//! spectral data of the Wiener–Hopf problem, evaluates the embedding formula
//! that expresses the directivity `S(θ, θi)` through a few edge directivities,
//! and checks the result against an independent reference:
//!
//! * [`halfplane`]: closed-form spectra, the embedding formula and a fully
//!   numerical Wiener–Hopf solve built on [`numerics::CauchySplitter`].
//! * [`strip`]: the matrix kernel and a boundary-integral solver used as the
//!   reference for the rank-2 embedding and the plane-wave embedding.
//! * [`wedge`]: the reduced 2×2 kernel, its explicit factorization, the
//!   canonical embedding and the mapped scalar route.
//! * [`oracles`]: classical diffraction coefficients and ratio calibration.
//!
//! Every verification routine returns an [`EmbeddingReport`] listing each
//! residual next to its tolerance.

// `!(x > 0.0)` is used deliberately so NaN inputs are rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod halfplane;
pub mod numerics;
pub mod oracles;
pub mod report;
pub mod strip;
pub mod wedge;
pub mod wh_core;

pub use error::{Result, WhError};
pub use num_complex::Complex64;
pub use numerics::{ContourSpec, HalfPlane, MediumConfig, SpectralFunction};
pub use report::{Calibration, Check, EmbeddingReport};
pub use strip::DirectivityGrid;

/// Shorthand used throughout the crate.
pub type C64 = Complex64;
