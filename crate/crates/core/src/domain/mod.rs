//! Shared numeric vocabulary: exponents, radial grids, sampled functions,
//! solution profiles and the regions over which sup/inf are taken.

mod exponents;
mod grid;
mod profile;
mod region;
mod sampled;

pub use exponents::Exponents;
pub use grid::{RadialGrid, StepPolicy, MIN_NODES};
pub(crate) use profile::equation_rhs;
pub use profile::{pde_residual_with, radial_laplacian, Residual, SolutionProfile};
pub use region::{extremum_on, Extremum, RegionKind, RegionSpec};
pub use sampled::{cubic_lagrange, Sampled};
