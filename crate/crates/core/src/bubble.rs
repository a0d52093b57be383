//! The standard bubble `(1 + |y|²)^{-(n-2)/2}` and its scaling family.
//!
//! `u_λ(r) = λ^{(n-2)/2} (1 + λ² r²)^{-(n-2)/2}` solves
//! `-Δu = n(n-2) u^{(n+2)/(n-2)}` on all of R^n for every `λ > 0`.

use serde::Serialize;

use crate::domain::pde_residual_with;
use crate::{CurvatureProfile, Error, Exponents, RadialGrid, Residual, Result, SolutionProfile};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BubbleParams {
    pub exponents: Exponents,
    pub lambda: f64,
    /// Distance of the bubble's center from the domain origin, measured
    /// along the sampled ray.
    pub center_offset: f64,
}

impl BubbleParams {
    pub fn new(n: i64, lambda: f64) -> Result<Self> {
        Self::with_offset(n, lambda, 0.0)
    }

    pub fn with_offset(n: i64, lambda: f64, center_offset: f64) -> Result<Self> {
        let exponents = Exponents::new(n)?;
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "bubble scale must be positive, got {lambda}"
            )));
        }
        if !(center_offset >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "center offset must be >= 0, got {center_offset}"
            )));
        }
        Ok(Self {
            exponents,
            lambda,
            center_offset,
        })
    }

    /// Curvature for which the bubble is an exact solution.
    pub fn curvature(&self) -> CurvatureProfile {
        CurvatureProfile::constant(self.exponents.bubble_curvature())
    }
}

/// `(1 + y²)^{-(n-2)/2}`.
pub fn bubble_eval(y_norm: f64, exponents: Exponents) -> f64 {
    (1.0 + y_norm * y_norm).powf(-exponents.half_power())
}

/// `λ^{(n-2)/2} (1 + λ² ρ²)^{-(n-2)/2}` with `ρ` the distance to the bubble
/// center.
pub fn bubble_family_eval(r: f64, params: &BubbleParams) -> f64 {
    let rho = (r - params.center_offset).abs();
    params.lambda.powf(params.exponents.half_power()) * bubble_eval(params.lambda * rho, params.exponents)
}

/// Bubble samples on `grid`, tagged with the critical equation it solves.
pub fn bubble_profile(params: &BubbleParams, grid: RadialGrid) -> Result<SolutionProfile> {
    SolutionProfile::from_fn(grid, params.exponents, false, params.curvature(), |r| {
        bubble_family_eval(r, params)
    })
}

/// Residual of `-(u'' + (n-1)/r u') - n(n-2) u^{(n+2)/(n-2)}` for the
/// sampled bubble, by second-order central differences.
///
/// Meaningful for centered bubbles (`center_offset = 0`).
pub fn bubble_pde_residual(params: &BubbleParams, grid: &RadialGrid) -> Result<Residual> {
    let p = bubble_profile(params, grid.clone())?;
    Ok(pde_residual_with(&p, &params.curvature(), false))
}

/// Closed form of `sup_{B(0,ρ)} u_λ × inf_{B(0,1)} u_λ` for the centered
/// family: `(λ²/(1+λ²))^{(n-2)/2}` at `ρ` arbitrary (the sup sits at 0).
pub fn bubble_product_closed_form(params: &BubbleParams) -> f64 {
    let l2 = params.lambda * params.lambda;
    (l2 / (1.0 + l2)).powf(params.exponents.half_power())
}
