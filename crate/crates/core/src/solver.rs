//! Radial shooting for `-Δu = V(r) u^crit + σ u^sub`, `u(0) = u0`, `u'(0) = 0`.
//!
//! The singular point is handled by a Taylor start through `r⁴`; from the
//! first node on, a fixed-step classical Runge-Kutta scheme integrates
//! `u'' = -(n-1)/r u' - V u^crit - σ u^sub` node by node.

use serde::Serialize;

use crate::domain::{equation_rhs, MIN_NODES};
use crate::{CurvatureProfile, Error, Exponents, RadialGrid, Result, SolutionProfile};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShootingConfig {
    pub u0: f64,
    pub r_max: f64,
    pub step: f64,
    /// Integration stops at the first node where `u <= tolerance`.
    pub tolerance: f64,
    pub include_subcritical: bool,
    pub exponents: Exponents,
    pub curvature: CurvatureProfile,
}

impl ShootingConfig {
    pub fn new(exponents: Exponents, curvature: CurvatureProfile, u0: f64, r_max: f64, step: f64) -> Self {
        Self {
            u0,
            r_max,
            step,
            tolerance: 1e-9,
            include_subcritical: false,
            exponents,
            curvature,
        }
    }

    pub fn with_subcritical(mut self, on: bool) -> Self {
        self.include_subcritical = on;
        self
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.u0 > 0.0 && self.u0.is_finite()) {
            return bad(format!("u0 must be positive, got {}", self.u0));
        }
        if !(self.r_max > 0.0 && self.r_max.is_finite()) {
            return bad(format!("r_max must be positive, got {}", self.r_max));
        }
        if !(self.step > 0.0 && self.step <= self.r_max / 100.0 * (1.0 + 1e-12)) {
            return bad(format!(
                "step must lie in (0, r_max/100], got {} with r_max = {}",
                self.step, self.r_max
            ));
        }
        if !(self.tolerance > 0.0 && self.tolerance <= 1e-3) {
            return bad(format!("tolerance must lie in (0, 1e-3], got {}", self.tolerance));
        }
        Ok(())
    }

    fn rhs(&self, r: f64, u: f64) -> f64 {
        equation_rhs(&self.curvature, self.exponents, self.include_subcritical, r, u.max(0.0))
    }

    /// Taylor expansion `u0 + a2 r² + a3 r³ + a4 r⁴` of the regular solution.
    fn series_coefficients(&self) -> [f64; 3] {
        let n = self.exponents.n_f64();
        let u0 = self.u0;
        let c = self.exponents.critical();
        let s = self.exponents.subcritical();
        let v = &self.curvature;
        let sigma = if self.include_subcritical { 1.0 } else { 0.0 };
        let f0 = self.rhs(0.0, u0);
        let a2 = -f0 / (2.0 * n);
        let a3 = -v.derivative(0.0) * u0.powf(c) / (3.0 * (n + 1.0));
        let a4 = match v.second_derivative_at_origin() {
            Some(v2) => {
                let f2 =
                    0.5 * v2 * u0.powf(c) + (v.value(0.0) * c * u0.powf(c - 1.0) + sigma * s * u0.powf(s - 1.0)) * a2;
                -f2 / (4.0 * (n + 2.0))
            }
            None => 0.0,
        };
        [a2, a3, a4]
    }
}

/// Integrates the shooting problem and returns the positive part of the
/// solution as a profile on `[0, r*]`, `r* <= r_max`.
pub fn solve_shoot(config: &ShootingConfig) -> Result<SolutionProfile> {
    config.validate()?;
    let grid = RadialGrid::uniform(config.r_max, config.step)?;
    let h = grid.uniform_step().expect("uniform grid");
    let nodes = grid.nodes();
    let n = config.exponents.n_f64();

    let [a2, a3, a4] = config.series_coefficients();
    let mut u = config.u0 + h * h * (a2 + h * (a3 + h * a4));
    let mut du = h * (2.0 * a2 + h * (3.0 * a3 + h * 4.0 * a4));
    let mut values = Vec::with_capacity(nodes.len());
    values.push(config.u0);

    let deriv = |r: f64, u: f64, du: f64| -> (f64, f64) { (du, -(n - 1.0) / r * du - config.rhs(r, u)) };

    let mut i = 1;
    loop {
        if !(u.is_finite() && du.is_finite()) {
            return Err(Error::StepInstability { r: nodes[i] });
        }
        if u <= config.tolerance {
            break;
        }
        values.push(u);
        if i + 1 == nodes.len() {
            break;
        }
        let r = nodes[i];
        let (k1u, k1v) = deriv(r, u, du);
        let (k2u, k2v) = deriv(r + 0.5 * h, u + 0.5 * h * k1u, du + 0.5 * h * k1v);
        let (k3u, k3v) = deriv(r + 0.5 * h, u + 0.5 * h * k2u, du + 0.5 * h * k2v);
        let (k4u, k4v) = deriv(r + h, u + h * k3u, du + h * k3v);
        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        du += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        i += 1;
    }

    if values.len() < MIN_NODES {
        return Err(Error::DomainTooLarge {
            r: nodes[values.len()],
            nodes: values.len(),
        });
    }
    let grid = grid.truncated(values.len())?;
    SolutionProfile::new(
        grid,
        values,
        config.exponents,
        config.include_subcritical,
        config.curvature,
    )
}

/// Central-difference residual of the profile's own equation.
pub fn pde_residual(p: &SolutionProfile) -> crate::Residual {
    p.pde_residual()
}
