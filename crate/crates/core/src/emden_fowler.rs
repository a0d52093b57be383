//! Emden-Fowler (cylindrical) coordinates.
//!
//! For a radial profile `u` and an expansion point `y`,
//! `w(t) = e^{(n-2)t/2} u(y + e^t)`. When `y = 0` and `u` solves
//! `-Δu = V u^crit + σ u^sub`, `w` solves
//!
//! ```text
//! -L w = V̄(t) w^crit + σ e^t w^sub,   L = ∂tt - (n-2)²/4,   V̄(t) = V(y + e^t).
//! ```
//!
//! The discrete `L` uses the exponentially fitted three-point stencil
//! `(w₊ - 2w + w₋)/h² - (4/h²) sinh²(a h/2) w`, `a = (n-2)/2`, which is
//! second-order consistent with `L` and annihilates `e^{±a t}` exactly.

use serde::Serialize;

use crate::bubble::{bubble_family_eval, BubbleParams};
use crate::domain::{cubic_lagrange, equation_rhs, MIN_NODES};
use crate::{CurvatureProfile, Error, Exponents, Residual, Result, Sampled, SolutionProfile};

/// Right end of the analysis domain `t ∈ (-∞, -log 2]`.
pub fn t_cap() -> f64 {
    -std::f64::consts::LN_2
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EFProfile {
    t: Vec<f64>,
    step: f64,
    w: Vec<f64>,
    origin: f64,
    exponents: Exponents,
    curvature: CurvatureProfile,
    has_subcritical_term: bool,
    /// Grid allowed past `-log 2` (test and symmetry use).
    extended: bool,
}

fn uniform_t(t_min: f64, t_max: f64, m: usize) -> Result<(Vec<f64>, f64)> {
    if m < MIN_NODES || !(t_min < t_max) || !t_min.is_finite() || !t_max.is_finite() {
        return Err(Error::InvalidGrid(format!(
            "t-grid needs t_min < t_max and at least {MIN_NODES} nodes \
             (t_min = {t_min}, t_max = {t_max}, m = {m})"
        )));
    }
    let h = (t_max - t_min) / (m - 1) as f64;
    let mut t: Vec<f64> = (0..m).map(|k| t_min + k as f64 * h).collect();
    t[m - 1] = t_max;
    Ok((t, h))
}

impl EFProfile {
    /// Builds a profile from explicit `w` values on a uniform t-grid.
    #[allow(clippy::too_many_arguments)]
    pub fn from_values(
        t_min: f64,
        t_max: f64,
        w: Vec<f64>,
        origin: f64,
        exponents: Exponents,
        curvature: CurvatureProfile,
        has_subcritical_term: bool,
        extended: bool,
    ) -> Result<Self> {
        let (t, step) = uniform_t(t_min, t_max, w.len())?;
        if !extended && t_max > t_cap() + 1e-12 {
            return Err(Error::Domain(format!(
                "t_max = {t_max} exceeds -log 2; use an extended profile"
            )));
        }
        if let Some((k, v)) = w.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
            return Err(Error::Domain(format!("w must be positive, w({}) = {v}", t[k])));
        }
        Ok(Self {
            t,
            step,
            w,
            origin,
            exponents,
            curvature,
            has_subcritical_term,
            extended,
        })
    }

    /// Samples `w(t) = e^{(n-2)t/2} u(origin + e^t)` for a radial function `u`.
    #[allow(clippy::too_many_arguments)]
    pub fn from_radial_fn(
        u: impl Fn(f64) -> Result<f64>,
        origin: f64,
        t_min: f64,
        t_max: f64,
        m: usize,
        exponents: Exponents,
        curvature: CurvatureProfile,
        has_subcritical_term: bool,
        extended: bool,
    ) -> Result<Self> {
        let (t, _) = uniform_t(t_min, t_max, m)?;
        let a = exponents.half_power();
        let w = t
            .iter()
            .map(|&tk| Ok((a * tk).exp() * u(origin + tk.exp())?))
            .collect::<Result<Vec<_>>>()?;
        Self::from_values(
            t_min,
            t_max,
            w,
            origin,
            exponents,
            curvature,
            has_subcritical_term,
            extended,
        )
    }

    pub fn t(&self) -> &[f64] {
        &self.t
    }

    pub fn w(&self) -> &[f64] {
        &self.w
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn t_min(&self) -> f64 {
        self.t[0]
    }

    pub fn t_max(&self) -> f64 {
        self.t[self.t.len() - 1]
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn exponents(&self) -> Exponents {
        self.exponents
    }

    pub fn curvature(&self) -> &CurvatureProfile {
        &self.curvature
    }

    pub fn has_subcritical_term(&self) -> bool {
        self.has_subcritical_term
    }

    pub fn is_extended(&self) -> bool {
        self.extended
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Cubic interpolation of `w`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        cubic_lagrange(&self.t, &self.w, t)
    }

    pub fn to_sampled(&self) -> Sampled {
        Sampled {
            nodes: self.t.clone(),
            values: self.w.clone(),
        }
    }

    /// `V̄(t) = V(origin + e^t)`, evaluated analytically.
    pub fn curvature_at(&self, v: &CurvatureProfile, t: f64) -> f64 {
        v.value(self.origin + t.exp())
    }

    /// Same profile with its nodes mirrored about `lambda`: nodes
    /// `2λ - t_k` (reordered increasingly) carry the values `w(t_k)`.
    /// Applying it twice restores the original nodes and values.
    pub fn mirrored(&self, lambda: f64) -> Self {
        let t: Vec<f64> = self.t.iter().rev().map(|tk| 2.0 * lambda - tk).collect();
        let w: Vec<f64> = self.w.iter().rev().copied().collect();
        Self {
            t,
            w,
            extended: true,
            ..self.clone()
        }
    }
}

/// Strict transform onto `[t_min, t_max]`, `t_max <= -log 2`.
pub fn to_ef(p: &SolutionProfile, origin: f64, t_min: f64, t_max: f64, m_nodes: usize) -> Result<EFProfile> {
    if t_max > t_cap() + 1e-12 {
        return Err(Error::Domain(format!("t_max = {t_max} exceeds -log 2")));
    }
    transform(p, origin, t_min, t_max, m_nodes, false)
}

/// Transform without the `-log 2` cap, for symmetry checks.
pub fn to_ef_extended(p: &SolutionProfile, origin: f64, t_min: f64, t_max: f64, m_nodes: usize) -> Result<EFProfile> {
    transform(p, origin, t_min, t_max, m_nodes, true)
}

fn transform(
    p: &SolutionProfile,
    origin: f64,
    t_min: f64,
    t_max: f64,
    m_nodes: usize,
    extended: bool,
) -> Result<EFProfile> {
    if !(origin >= 0.0) || origin + t_max.exp() > p.ball_radius() * (1.0 + 1e-12) {
        return Err(Error::Domain(format!(
            "origin + e^t_max = {} leaves the ball of radius {}",
            origin + t_max.exp(),
            p.ball_radius()
        )));
    }
    let ball = p.ball_radius();
    EFProfile::from_radial_fn(
        |r| p.eval(r.min(ball)),
        origin,
        t_min,
        t_max,
        m_nodes,
        p.exponents(),
        *p.curvature(),
        p.has_subcritical_term(),
        extended,
    )
}

/// Closed-form EF profile of a bubble.
pub fn bubble_ef(
    params: &BubbleParams,
    origin: f64,
    t_min: f64,
    t_max: f64,
    m_nodes: usize,
    extended: bool,
) -> Result<EFProfile> {
    EFProfile::from_radial_fn(
        |r| Ok(bubble_family_eval(r, params)),
        origin,
        t_min,
        t_max,
        m_nodes,
        params.exponents,
        params.curvature(),
        false,
        extended,
    )
}

/// Inverse transform `u(r) = r^{-(n-2)/2} w(log r)` on `r_k = e^{t_k}`,
/// `r` measured from the profile's origin.
pub fn from_ef(w: &EFProfile) -> Sampled {
    let a = w.exponents.half_power();
    let (nodes, values) =
        w.t.iter()
            .zip(&w.w)
            .map(|(&t, &v)| (t.exp(), (-a * t).exp() * v))
            .unzip();
    Sampled { nodes, values }
}

/// Fitted stencil for `L` on the interior of a uniformly sampled field.
pub fn l_stencil(values: &[f64], h: f64, exponents: Exponents) -> Vec<f64> {
    let a = exponents.half_power();
    let kappa = (2.0 * (0.5 * a * h).sinh() / h).powi(2);
    values
        .windows(3)
        .map(|s| ((s[2] - s[1]) - (s[1] - s[0])) / (h * h) - kappa * s[1])
        .collect()
}

/// `L w` at the interior nodes.
pub fn apply_l(w: &EFProfile) -> Sampled {
    Sampled {
        nodes: w.t[1..w.t.len() - 1].to_vec(),
        values: l_stencil(&w.w, w.step, w.exponents),
    }
}

/// Max over interior nodes of `|-Lw - V̄ w^crit - σ e^t w^sub|`.
pub fn ef_residual(w: &EFProfile, v: &CurvatureProfile, include_subcritical: bool) -> Residual {
    let lw = l_stencil(&w.w, w.step, w.exponents);
    Residual::from_pointwise(lw.iter().enumerate().map(|(i, l)| {
        let k = i + 1;
        let t = w.t[k];
        let wk = w.w[k];
        // σ e^t w^sub: the subcritical term picks up the weight e^t
        let crit = equation_rhs(v, w.exponents, false, w.origin + t.exp(), wk);
        let sub = if include_subcritical {
            t.exp() * wk.powf(w.exponents.subcritical())
        } else {
            0.0
        };
        (t, -l - crit - sub, crit + sub)
    }))
}

/// `w̄(t) = w(t) - (m/2) e^t`, dimension four only. The result may change sign.
pub fn shift_profile(w: &EFProfile, m: f64) -> Result<Sampled> {
    if w.exponents.n() != 4 {
        return Err(Error::RequiresDimensionFour(w.exponents.n()));
    }
    if !(m > 0.0) {
        return Err(Error::InvalidParameter(format!("shift m must be positive, got {m}")));
    }
    Ok(Sampled {
        nodes: w.t.clone(),
        values: w.t.iter().zip(&w.w).map(|(t, v)| v - 0.5 * m * t.exp()).collect(),
    })
}
