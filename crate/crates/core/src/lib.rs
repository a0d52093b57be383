//! Numerical laboratory for critical semilinear elliptic equations on balls
//! of R^n.
//!
//! The crate works with positive radial solutions of
//!
//! ```text
//! -Δu = V(r) u^{(n+2)/(n-2)} + σ u^{n/(n-2)},   σ ∈ {0, 1}
//! ```
//!
//! and provides the machinery needed to probe sup × inf Harnack-type bounds
//! for them: the closed-form bubble family, a shooting solver, the blow-up
//! selection and rescaling, Emden-Fowler coordinates with the operator
//! `L = ∂tt - (n-2)²/4`, the moving-plane comparison toolkit and sweep
//! harnesses that report empirical constants.
//!
//! Sign convention: every equation is stored in classical form, with the
//! Euclidean Laplacian `Δ = Σ ∂ᵢ²` and the minus sign written explicitly.
//! See [`domain::radial_laplacian`].

// `!(x > 0.0)` rejects NaN together with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod blowup;
pub mod bubble;
pub mod curvature;
pub mod domain;
pub mod emden_fowler;
mod error;
pub mod io;
pub mod moving_plane;
pub mod solver;
pub mod supinf;

pub use blowup::{BlowupDiagnostics, BlowupReport};
pub use bubble::BubbleParams;
pub use curvature::{CurvatureFamily, CurvatureProfile};
pub use domain::{
    Exponents, Extremum, RadialGrid, RegionKind, RegionSpec, Residual, Sampled, SolutionProfile, StepPolicy,
};
pub use emden_fowler::EFProfile;
pub use moving_plane::MovingPlaneReport;
pub use supinf::{Family, SweepConfig, SweepReport, Theorem};

pub use error::{Error, ErrorCategory, Result};

pub use solver::ShootingConfig;
