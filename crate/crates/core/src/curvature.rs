//! Prescribed radial curvature `V(r)` with declared bounds `a <= V <= b` and
//! a declared `C^{1,α}` modulus `A`.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum CurvatureFamily {
    Constant {
        v0: f64,
    },
    /// `V0 (1 + ε r^k)`, `k >= 1`.
    Polynomial {
        v0: f64,
        eps: f64,
        k: f64,
    },
    /// `V0 (1 + ε sin(ω r))`.
    Sinusoidal {
        v0: f64,
        eps: f64,
        omega: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureProfile {
    pub family: CurvatureFamily,
    /// Declared lower bound `a`.
    pub a: f64,
    /// Declared upper bound `b`.
    pub b: f64,
    /// Declared Hölder modulus `A` of the gradient.
    pub holder_constant: f64,
    /// Declared Hölder exponent `α ∈ (0, 1]`.
    pub alpha: f64,
}

impl CurvatureProfile {
    pub fn new(family: CurvatureFamily, a: f64, b: f64, holder_constant: f64, alpha: f64) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match family {
            CurvatureFamily::Constant { v0 } if !(v0 > 0.0) => {
                return bad(format!("constant curvature must be positive, got {v0}"))
            }
            CurvatureFamily::Polynomial { v0, k, eps } if !(v0 > 0.0 && k >= 1.0 && eps.is_finite()) => {
                return bad(format!(
                    "polynomial family needs V0 > 0 and k >= 1 (V0 = {v0}, k = {k})"
                ))
            }
            CurvatureFamily::Sinusoidal { v0, omega, eps } if !(v0 > 0.0 && omega >= 0.0 && eps.is_finite()) => {
                return bad(format!(
                    "sinusoidal family needs V0 > 0 and ω >= 0 (V0 = {v0}, ω = {omega})"
                ))
            }
            _ => {}
        }
        if !(a > 0.0 && a <= b) {
            return bad(format!("declared bounds need 0 < a <= b (a = {a}, b = {b})"));
        }
        if !(holder_constant >= 0.0) {
            return bad(format!("Hölder modulus must be >= 0, got {holder_constant}"));
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return bad(format!("Hölder exponent must lie in (0, 1], got {alpha}"));
        }
        Ok(Self {
            family,
            a,
            b,
            holder_constant,
            alpha,
        })
    }

    /// Constant curvature with the tight declaration `a = b = v0`, `A = 0`.
    pub fn constant(v0: f64) -> Self {
        Self {
            family: CurvatureFamily::Constant { v0 },
            a: v0,
            b: v0,
            holder_constant: 0.0,
            alpha: 1.0,
        }
    }

    pub fn value(&self, r: f64) -> f64 {
        match self.family {
            CurvatureFamily::Constant { v0 } => v0,
            CurvatureFamily::Polynomial { v0, eps, k } => v0 * (1.0 + eps * r.powf(k)),
            CurvatureFamily::Sinusoidal { v0, eps, omega } => v0 * (1.0 + eps * (omega * r).sin()),
        }
    }

    /// Radial derivative `V'(r)`.
    pub fn derivative(&self, r: f64) -> f64 {
        match self.family {
            CurvatureFamily::Constant { .. } => 0.0,
            CurvatureFamily::Polynomial { v0, eps, k } => {
                if k == 1.0 {
                    v0 * eps
                } else {
                    v0 * eps * k * r.powf(k - 1.0)
                }
            }
            CurvatureFamily::Sinusoidal { v0, eps, omega } => v0 * eps * omega * (omega * r).cos(),
        }
    }

    /// `V''(0)` when it exists.
    pub fn second_derivative_at_origin(&self) -> Option<f64> {
        match self.family {
            CurvatureFamily::Constant { .. } | CurvatureFamily::Sinusoidal { .. } => Some(0.0),
            CurvatureFamily::Polynomial { v0, eps, k } => {
                if k == 2.0 {
                    Some(2.0 * v0 * eps)
                } else if k == 1.0 || k > 2.0 {
                    Some(0.0)
                } else {
                    None
                }
            }
        }
    }

    /// Size of the absolute rounding error made when evaluating `V'` near `r`.
    fn derivative_rounding_scale(&self, r: f64) -> f64 {
        match self.family {
            CurvatureFamily::Constant { .. } => 0.0,
            CurvatureFamily::Polynomial { v0, eps, k } => (v0 * eps * k).abs() * (1.0 + r).powf(k - 1.0) * k,
            CurvatureFamily::Sinusoidal { v0, eps, omega } => (v0 * eps * omega).abs() * (1.0 + omega * r),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.family, CurvatureFamily::Constant { .. })
    }

    /// Short human-readable tag for file headers.
    pub fn label(&self) -> String {
        let fam = match self.family {
            CurvatureFamily::Constant { v0 } => format!("constant(v0={v0})"),
            CurvatureFamily::Polynomial { v0, eps, k } => format!("polynomial(v0={v0},eps={eps},k={k})"),
            CurvatureFamily::Sinusoidal { v0, eps, omega } => {
                format!("sinusoidal(v0={v0},eps={eps},omega={omega})")
            }
        };
        format!(
            "{fam};a={};b={};A={};alpha={}",
            self.a, self.b, self.holder_constant, self.alpha
        )
    }
}

/// Analytic radial derivative of the curvature at `r`.
pub fn curvature_gradient_at(v: &CurvatureProfile, r: f64) -> f64 {
    v.derivative(r)
}

/// Where a pointwise check failed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HolderViolation {
    pub t: f64,
    /// `+1` or `-1`: the radial direction of the displacement.
    pub theta: f64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HolderReport {
    pub holds: bool,
    pub checked: usize,
    pub skipped: usize,
    pub first_violation: Option<HolderViolation>,
}

/// Checks `|V'(y + θ e^t) - V'(y)| <= A e^{α t}` at every sampled `t` for
/// `θ = ±1`. Displacements that would leave `r >= 0` are skipped and counted.
pub fn holder_bound_check(v: &CurvatureProfile, y: f64, a_bound: f64, alpha: f64, t_samples: &[f64]) -> HolderReport {
    let base = v.derivative(y);
    let mut report = HolderReport {
        holds: true,
        checked: 0,
        skipped: 0,
        first_violation: None,
    };
    for &t in t_samples {
        let s = t.exp();
        for theta in [1.0, -1.0] {
            let r = y + theta * s;
            if r < 0.0 {
                report.skipped += 1;
                continue;
            }
            report.checked += 1;
            let moved = v.derivative(r);
            let lhs = (moved - base).abs();
            let rhs = a_bound * (alpha * t).exp();
            // equality cases (polynomial k = 2) must not trip on rounding
            let slack = 32.0 * f64::EPSILON * v.derivative_rounding_scale(r.max(y));
            if lhs > rhs * (1.0 + 1e-12) + slack && report.first_violation.is_none() {
                report.holds = false;
                report.first_violation = Some(HolderViolation { t, theta, lhs, rhs });
            }
        }
    }
    report
}

/// A sampled point where the declared bounds `a <= V <= b` fail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundViolation {
    pub r: f64,
    pub value: f64,
    pub bound: f64,
    pub lower: bool,
}

/// Samples `V` on `[0, radius]` with the given step and lists the first
/// violation of each declared bound.
pub fn bound_violations(v: &CurvatureProfile, radius: f64, step: f64) -> Vec<BoundViolation> {
    let cells = (radius / step).ceil().max(1.0) as usize;
    let mut lower = None;
    let mut upper = None;
    for i in 0..=cells {
        let r = (i as f64 * step).min(radius);
        let value = v.value(r);
        if lower.is_none() && value < v.a {
            lower = Some(BoundViolation {
                r,
                value,
                bound: v.a,
                lower: true,
            });
        }
        if upper.is_none() && value > v.b {
            upper = Some(BoundViolation {
                r,
                value,
                bound: v.b,
                lower: false,
            });
        }
    }
    lower.into_iter().chain(upper).collect()
}
