use serde::Serialize;

use super::{cubic_lagrange, Exponents, RadialGrid, Sampled, MIN_NODES};
use crate::{CurvatureProfile, Error, Result};

/// A sampled positive radial solution `u(r)` on the ball `B(0, ball_radius)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionProfile {
    grid: RadialGrid,
    values: Vec<f64>,
    exponents: Exponents,
    has_subcritical_term: bool,
    curvature: CurvatureProfile,
}

impl SolutionProfile {
    pub fn new(
        grid: RadialGrid,
        values: Vec<f64>,
        exponents: Exponents,
        has_subcritical_term: bool,
        curvature: CurvatureProfile,
    ) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "{} values for {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
            return Err(Error::Domain(format!(
                "profile must be strictly positive, u({}) = {v}",
                grid.nodes()[i]
            )));
        }
        Ok(Self {
            grid,
            values,
            exponents,
            has_subcritical_term,
            curvature,
        })
    }

    /// Samples `f` on `grid`.
    pub fn from_fn(
        grid: RadialGrid,
        exponents: Exponents,
        has_subcritical_term: bool,
        curvature: CurvatureProfile,
        f: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let values = grid.nodes().iter().map(|&r| f(r)).collect();
        Self::new(grid, values, exponents, has_subcritical_term, curvature)
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn nodes(&self) -> &[f64] {
        self.grid.nodes()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn exponents(&self) -> Exponents {
        self.exponents
    }

    pub fn has_subcritical_term(&self) -> bool {
        self.has_subcritical_term
    }

    pub fn curvature(&self) -> &CurvatureProfile {
        &self.curvature
    }

    pub fn ball_radius(&self) -> f64 {
        self.grid.r_max()
    }

    pub fn center_value(&self) -> f64 {
        self.values[0]
    }

    /// Cubic interpolation of the samples; exact at nodes, no extrapolation.
    pub fn eval(&self, r: f64) -> Result<f64> {
        cubic_lagrange(self.grid.nodes(), &self.values, r)
    }

    pub fn to_sampled(&self) -> Sampled {
        Sampled {
            nodes: self.grid.nodes().to_vec(),
            values: self.values.clone(),
        }
    }

    /// Right-hand side `V(r) u^crit + σ u^sub` of the stored equation.
    pub fn rhs(&self, r: f64, u: f64) -> f64 {
        equation_rhs(&self.curvature, self.exponents, self.has_subcritical_term, r, u)
    }

    /// Residual of `-Δu = V u^crit + σ u^sub` with the profile's own data.
    pub fn pde_residual(&self) -> Residual {
        pde_residual_with(self, &self.curvature, self.has_subcritical_term)
    }
}

pub(crate) fn equation_rhs(
    curvature: &CurvatureProfile,
    exponents: Exponents,
    subcritical: bool,
    r: f64,
    u: f64,
) -> f64 {
    let mut rhs = curvature.value(r) * u.powf(exponents.critical());
    if subcritical {
        rhs += u.powf(exponents.subcritical());
    }
    rhs
}

/// Maximum pointwise residual together with the size of the right-hand side
/// it should be compared against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residual {
    pub max_abs: f64,
    /// Abscissa where `max_abs` is attained.
    pub at: f64,
    /// Largest `|RHS|` over the evaluated nodes.
    pub rhs_scale: f64,
}

impl Residual {
    pub fn relative(&self) -> f64 {
        if self.rhs_scale > 0.0 {
            self.max_abs / self.rhs_scale
        } else {
            self.max_abs
        }
    }

    pub(crate) fn from_pointwise(points: impl Iterator<Item = (f64, f64, f64)>) -> Residual {
        let mut out = Residual {
            max_abs: 0.0,
            at: f64::NAN,
            rhs_scale: 0.0,
        };
        for (x, res, rhs) in points {
            let a = res.abs();
            if a > out.max_abs || out.at.is_nan() {
                out.max_abs = a;
                out.at = x;
            }
            out.rhs_scale = out.rhs_scale.max(rhs.abs());
        }
        out
    }
}

/// Discrete classical Laplacian `u'' + (n-1)/r u'` of a radial function at
/// every node except the last.
///
/// Three-point second-order formulas on (possibly non-uniform) nodes. At
/// `r = 0` the even extension gives `Δu(0) = n u''(0) ≈ 2n (u_1 - u_0)/h²`.
pub fn radial_laplacian(nodes: &[f64], values: &[f64], n: u32) -> Vec<f64> {
    let dim = n as f64;
    let len = nodes.len();
    let mut out = Vec::with_capacity(len.saturating_sub(1));
    for i in 0..len.saturating_sub(1) {
        if i == 0 {
            let h = nodes[1] - nodes[0];
            out.push(dim * 2.0 * (values[1] - values[0]) / (h * h));
            continue;
        }
        let hm = nodes[i] - nodes[i - 1];
        let hp = nodes[i + 1] - nodes[i];
        let denom = hm * hp * (hm + hp);
        let (um, u0, up) = (values[i - 1], values[i], values[i + 1]);
        let (dp, dm) = (up - u0, u0 - um);
        let d2 = 2.0 * (hm * dp - hp * dm) / denom;
        let d1 = (hm * hm * dp + hp * hp * dm) / denom;
        out.push(d2 + (dim - 1.0) / nodes[i] * d1);
    }
    out
}

/// Residual of `-Δu - V u^crit - σ u^sub` for a caller-chosen curvature and
/// subcritical flag. The last node is excluded; `r = 0` is included through
/// the regularized Laplacian.
pub fn pde_residual_with(p: &SolutionProfile, curvature: &CurvatureProfile, subcritical: bool) -> Residual {
    debug_assert!(p.nodes().len() >= MIN_NODES);
    let lap = radial_laplacian(p.nodes(), p.values(), p.exponents().n());
    Residual::from_pointwise(lap.iter().enumerate().map(|(i, l)| {
        let r = p.nodes()[i];
        let rhs = equation_rhs(curvature, p.exponents(), subcritical, r, p.values()[i]);
        (r, -l - rhs, rhs)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant_profile(c: f64, sub: bool) -> SolutionProfile {
        let e = Exponents::new(4).unwrap();
        let grid = RadialGrid::uniform(1.0, 0.01).unwrap();
        SolutionProfile::from_fn(grid, e, sub, CurvatureProfile::constant(8.0), |_| c).unwrap()
    }

    #[test]
    fn rejects_nonpositive_values() {
        let e = Exponents::new(3).unwrap();
        let grid = RadialGrid::uniform(1.0, 0.1).unwrap();
        let err = SolutionProfile::from_fn(grid, e, false, CurvatureProfile::constant(3.0), |r| 0.5 - r);
        assert!(matches!(err, Err(Error::Domain(_))));
    }

    #[test]
    fn constant_profile_residual_is_the_rhs() {
        let c: f64 = 0.7;
        for sub in [false, true] {
            let p = constant_profile(c, sub);
            let res = p.pde_residual();
            let expected = 8.0 * c.powi(3) + if sub { c * c } else { 0.0 };
            assert!((res.max_abs - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn laplacian_of_r_squared() {
        // Δ r² = 2n exactly for second-order formulas
        let grid = RadialGrid::geometric(2.0, 1e-3, 1.1, 0.05).unwrap();
        let vals: Vec<f64> = grid.nodes().iter().map(|r| r * r).collect();
        for n in 3..7 {
            for l in radial_laplacian(grid.nodes(), &vals, n) {
                assert!((l - 2.0 * n as f64).abs() < 1e-8, "{l}");
            }
        }
    }

    #[test]
    fn eval_is_exact_at_nodes_and_errors_outside() {
        let e = Exponents::new(4).unwrap();
        let grid = RadialGrid::uniform(2.0, 0.01).unwrap();
        let p =
            SolutionProfile::from_fn(grid, e, false, CurvatureProfile::constant(8.0), |r| 1.0 / (1.0 + r * r)).unwrap();
        for (r, u) in p.nodes().iter().zip(p.values()) {
            assert_eq!(p.eval(*r).unwrap(), *u);
        }
        assert!(p.eval(2.0 + 1e-9).is_err());
        assert!(p.eval(-1e-9).is_err());
    }
}
