//! Moving-plane comparison in Emden-Fowler coordinates.
//!
//! The reflection about `λ` is `t^λ = 2λ - t`, `w^λ(t) = w(t^λ)`. The
//! critical plane `ξ` is the supremum of the `λ` for which `w^λ - w < 0`
//! on the window `(λ, t1]`. All θ-dependence is absent: profiles are
//! radial, so minima and maxima over the sphere are point values.

use serde::Serialize;

use crate::domain::extremum_on;
use crate::emden_fowler::{l_stencil, EFProfile};
use crate::{CurvatureProfile, Error, Extremum, RegionSpec, Result, Sampled, SolutionProfile};

/// Coarse step of the downward λ-scan that brackets `ξ`.
pub const SCAN_STEP: f64 = 0.1;
/// `w^λ - w` counts as strictly negative below `-CONTACT_TOL`.
pub const CONTACT_TOL: f64 = 1e-12;
/// Allowance for stencil error when checking the sign of `-L(w^λ - w)`.
pub const STENCIL_TOL: f64 = 1e-6;

fn window(w: &EFProfile, lambda: f64, t1: f64) -> Result<(usize, usize)> {
    let t = w.t();
    let first = t.partition_point(|&x| x <= lambda);
    let last = t.partition_point(|&x| x <= t1 + 1e-12);
    if first >= last {
        return Err(Error::Domain(format!(
            "comparison window ({lambda}, {t1}] holds no node"
        )));
    }
    Ok((first, last))
}

fn admissible(w: &EFProfile, lambda: f64, t_hi: f64) -> Result<()> {
    let required = 2.0 * lambda - t_hi;
    if required < w.t_min() - 1e-12 {
        return Err(Error::ReflectionOutOfGrid {
            lambda,
            required,
            t_min: w.t_min(),
        });
    }
    Ok(())
}

fn reflected_value(w: &EFProfile, lambda: f64, t: f64) -> Result<f64> {
    let s = (2.0 * lambda - t).clamp(w.t_min(), w.t_max());
    w.eval(s)
}

/// `w^λ` sampled on the grid nodes of `(λ, t_max]`.
pub fn reflect(w: &EFProfile, lambda: f64) -> Result<Sampled> {
    admissible(w, lambda, w.t_max())?;
    let (first, last) = window(w, lambda, w.t_max())?;
    let nodes = w.t()[first..last].to_vec();
    let values = nodes
        .iter()
        .map(|&t| reflected_value(w, lambda, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(Sampled { nodes, values })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Comparison {
    /// `max (w^λ - w)` over the window nodes.
    pub max_gap: f64,
    /// Node where `max_gap` is attained.
    pub first_contact: f64,
}

impl Comparison {
    /// Property `A_λ`: the reflection touches or crosses `w` in the window.
    pub fn touches(&self) -> bool {
        self.max_gap >= 0.0
    }
}

pub fn compare(w: &EFProfile, lambda: f64, t1: f64) -> Result<Comparison> {
    if !(lambda < t1 && t1 <= w.t_max() + 1e-12) {
        return Err(Error::Domain(format!(
            "comparison needs lambda < t1 <= t_max (lambda = {lambda}, t1 = {t1}, t_max = {})",
            w.t_max()
        )));
    }
    admissible(w, lambda, t1)?;
    let (first, last) = window(w, lambda, t1)?;
    let mut best = Comparison {
        max_gap: f64::NEG_INFINITY,
        first_contact: f64::NAN,
    };
    for k in first..last {
        let t = w.t()[k];
        let gap = reflected_value(w, lambda, t)? - w.w()[k];
        if gap > best.max_gap {
            best = Comparison {
                max_gap: gap,
                first_contact: t,
            };
        }
    }
    Ok(best)
}

/// Max of `w^λ - w` over window nodes at least half a step from the plane.
/// The gap vanishes linearly as `t → λ`, so nodes hugging the plane would
/// register as spurious contacts under any fixed tolerance.
fn separated_gap(w: &EFProfile, lambda: f64, t1: f64) -> Result<f64> {
    compare(w, lambda, t1)?;
    let (first, last) = window(w, lambda, t1)?;
    let cut = lambda + 0.5 * w.step();
    let mut best = f64::NEG_INFINITY;
    for k in first..last {
        let t = w.t()[k];
        if t >= cut {
            best = best.max(reflected_value(w, lambda, t)? - w.w()[k]);
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MovingPlaneReport {
    pub xi: f64,
    /// Upper end of the search, `2 + log η`.
    pub lambda_bar: f64,
    /// `u(y)^{-2/(n-2)}`, recovered as `e^{λ̄ - 2}`.
    pub eta: f64,
    pub t1: f64,
    pub first_contact: f64,
    pub max_gap: f64,
    /// First plane the scan tried (`min(λ̄, t1 - h)`).
    pub scan_start: f64,
    /// The scan met a touching plane, so `ξ` is a genuine supremum rather
    /// than the starting plane. Without contact the Hopf step has nothing
    /// to act on and its check is expected to fail.
    pub contact_found: bool,
    pub z1_max: Option<f64>,
    pub z2_max: Option<f64>,
    pub lemma_holds: Option<bool>,
    pub hopf_holds: Option<bool>,
    /// `l^{(n-2)/2} u(y) min u` when the blow-up context is known.
    pub product: Option<f64>,
}

/// `λ̄ = 2 + log η` with `η = u(y)^{-2/(n-2)}`.
pub fn lambda_bar_for(u_at_y: f64, n: u32) -> f64 {
    2.0 - 2.0 / (n as f64 - 2.0) * u_at_y.ln()
}

/// Critical plane by a downward scan in steps of [`SCAN_STEP`] followed by
/// bisection to grid resolution. The returned `xi` is the last plane found
/// strictly negative.
pub fn find_xi(w: &EFProfile, lambda_bar: f64, t1: f64) -> Result<MovingPlaneReport> {
    let h = w.step();
    let floor = 0.5 * (w.t_min() + t1);
    let start = lambda_bar.min(t1 - h);
    let strict = |lambda: f64| -> Result<bool> { Ok(separated_gap(w, lambda, t1)? < -CONTACT_TOL) };
    if start < floor {
        return Err(Error::NoAdmissiblePlane { from: start, to: floor });
    }

    let xi = if strict(start)? {
        start
    } else {
        let mut hi = start;
        let mut lam = start - SCAN_STEP;
        loop {
            if lam < floor {
                if hi > floor && strict(floor)? {
                    lam = floor;
                    break;
                }
                return Err(Error::NoAdmissiblePlane { from: start, to: floor });
            }
            if strict(lam)? {
                break;
            }
            hi = lam;
            lam -= SCAN_STEP;
        }
        let mut lo = lam;
        while hi - lo > h {
            let mid = 0.5 * (lo + hi);
            if strict(mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    };

    let cmp = compare(w, xi, t1)?;
    Ok(MovingPlaneReport {
        xi,
        lambda_bar,
        eta: (lambda_bar - 2.0).exp(),
        t1,
        first_contact: cmp.first_contact,
        max_gap: cmp.max_gap,
        scan_start: start,
        contact_found: xi < start,
        z1_max: None,
        z2_max: None,
        lemma_holds: None,
        hopf_holds: None,
        product: None,
    })
}

/// The two parts of `-L(w^ξ - w)` split by the comparison argument.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZFields {
    pub t: Vec<f64>,
    pub z1: Vec<f64>,
    pub z2: Vec<f64>,
}

impl ZFields {
    pub fn z1_max(&self) -> f64 {
        self.z1.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn z2_max(&self) -> f64 {
        self.z2.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn sum(&self) -> Vec<f64> {
        self.z1.iter().zip(&self.z2).map(|(a, b)| a + b).collect()
    }
}

/// ```text
/// Z1 = (V̄^ξ - V̄)(w^ξ)^crit + V̄ [(w^ξ)^crit - w^crit]
/// Z2 = e^{t^ξ}[(w^ξ)^sub - w^sub] + w^sub (e^{t^ξ} - e^t)     (σ = 1 only)
/// ```
/// on the window nodes of `(ξ, t1]`.
pub fn z_decomposition(
    w: &EFProfile,
    xi: f64,
    v: &CurvatureProfile,
    include_subcritical: bool,
    t1: f64,
) -> Result<ZFields> {
    admissible(w, xi, t1)?;
    let (first, last) = window(w, xi, t1)?;
    let c = w.exponents().critical();
    let s = w.exponents().subcritical();
    let mut out = ZFields {
        t: Vec::with_capacity(last - first),
        z1: Vec::with_capacity(last - first),
        z2: Vec::with_capacity(last - first),
    };
    for k in first..last {
        let t = w.t()[k];
        let tr = 2.0 * xi - t;
        let wk = w.w()[k];
        let wr = reflected_value(w, xi, t)?;
        let vbar = w.curvature_at(v, t);
        let vbar_r = w.curvature_at(v, tr);
        let z1 = (vbar_r - vbar) * wr.powf(c) + vbar * (wr.powf(c) - wk.powf(c));
        let z2 = if include_subcritical {
            tr.exp() * (wr.powf(s) - wk.powf(s)) + wk.powf(s) * (tr.exp() - t.exp())
        } else {
            0.0
        };
        out.t.push(t);
        out.z1.push(z1);
        out.z2.push(z2);
    }
    Ok(out)
}

/// `-L(w^λ - w)` by the stencil, on window nodes whose neighbours are
/// available.
pub fn reflected_gap_operator(w: &EFProfile, lambda: f64, t1: f64) -> Result<Sampled> {
    shifted_gap_operator(w, lambda, t1, 0.0)
}

/// `-L(w̄^λ - w̄)` for `w̄ = w - (m/2) e^t`; `m = 0` gives the unshifted gap.
fn shifted_gap_operator(w: &EFProfile, lambda: f64, t1: f64, m: f64) -> Result<Sampled> {
    admissible(w, lambda, t1)?;
    let (first, last) = window(w, lambda, t1)?;
    let t = w.t();
    let lo = first.saturating_sub(1);
    let hi = (last + 1).min(t.len());
    let mut gap = Vec::with_capacity(hi - lo);
    for (&tk, &wk) in t[lo..hi].iter().zip(&w.w()[lo..hi]) {
        let tr = 2.0 * lambda - tk;
        let wr = if tr < w.t_min() - 1e-12 || tr > w.t_max() + 1e-12 {
            f64::NAN
        } else {
            reflected_value(w, lambda, tk)?
        };
        gap.push(wr - wk - 0.5 * m * (tr.exp() - tk.exp()));
    }
    let lw = l_stencil(&gap, w.step(), w.exponents());
    let mut nodes = Vec::new();
    let mut values = Vec::new();
    for (i, l) in lw.iter().enumerate() {
        let k = lo + i + 1;
        if k >= first && k < last && l.is_finite() {
            nodes.push(t[k]);
            values.push(-l);
        }
    }
    Ok(Sampled { nodes, values })
}

/// `sup |V̄^λ - V̄| / (e^t - e^{t^λ})` over the window, with the analytic
/// curvature.
pub fn reflection_modulus(w: &EFProfile, lambda: f64, v: &CurvatureProfile, t1: f64) -> Result<f64> {
    let (first, last) = window(w, lambda, t1)?;
    let mut eps: f64 = 0.0;
    for &t in &w.t()[first..last] {
        let ratio = if t - lambda < 1e-8 {
            v.derivative(w.origin() + lambda.exp()).abs()
        } else {
            let tr = 2.0 * lambda - t;
            (w.curvature_at(v, tr) - w.curvature_at(v, t)).abs() / (t.exp() - tr.exp())
        };
        eps = eps.max(ratio);
    }
    Ok(eps)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma2Report {
    pub lambda: f64,
    /// No comparison configuration (`max_gap > 0`): nothing to check.
    pub vacuous: bool,
    pub max_gap: f64,
    /// Max of the stenciled `-L(w^λ - w)` over the window.
    pub max_operator: f64,
    pub conclusion_holds: bool,
    /// Measured `|o(1)|` coefficient.
    pub epsilon: f64,
    pub bound_chain_holds: bool,
    /// `ε (w^λ)^{2/(n-2)} <= 1` everywhere on the window.
    pub sufficient_condition_holds: bool,
    pub first_sufficient_failure: Option<f64>,
    pub z1_max: f64,
    pub z2_max: f64,
    /// Max of `w^λ` over the window against `2^{(n-2)/2} e^{n-2}`.
    pub max_reflected: f64,
    pub reflected_bound_holds: bool,
}

impl Lemma2Report {
    pub fn holds(&self) -> bool {
        self.vacuous || self.conclusion_holds
    }
}

/// Checks `w^λ - w <= 0 ⇒ -L(w^λ - w) <= 0` on `(λ, t1]`, together with the
/// bound chain used to prove it.
pub fn lemma2_check(
    w: &EFProfile,
    lambda: f64,
    v: &CurvatureProfile,
    include_subcritical: bool,
    t1: f64,
) -> Result<Lemma2Report> {
    let cmp = compare(w, lambda, t1)?;
    let z = z_decomposition(w, lambda, v, include_subcritical, t1)?;
    let op = reflected_gap_operator(w, lambda, t1)?;
    let epsilon = reflection_modulus(w, lambda, v, t1)?;
    let p = w.exponents().scale_power();
    let mut bound_chain_holds = true;
    let mut first_sufficient_failure = None;
    let mut max_reflected: f64 = 0.0;
    for &t in &z.t {
        let tr = 2.0 * lambda - t;
        let dv = (w.curvature_at(v, tr) - w.curvature_at(v, t)).abs();
        let gap = t.exp() - tr.exp();
        if dv > epsilon * gap * (1.0 + 1e-9) + 1e-14 {
            bound_chain_holds = false;
        }
        let wr = reflected_value(w, lambda, t)?;
        max_reflected = max_reflected.max(wr);
        if first_sufficient_failure.is_none() && epsilon * wr.powf(p) > 1.0 {
            first_sufficient_failure = Some(t);
        }
    }
    let max_operator = op.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(Lemma2Report {
        lambda,
        vacuous: cmp.max_gap > 0.0,
        max_gap: cmp.max_gap,
        max_operator,
        conclusion_holds: max_operator <= STENCIL_TOL,
        epsilon,
        bound_chain_holds,
        sufficient_condition_holds: first_sufficient_failure.is_none(),
        first_sufficient_failure,
        z1_max: z.z1_max(),
        z2_max: z.z2_max(),
        max_reflected,
        reflected_bound_holds: max_reflected <= reflected_bound(w.exponents().n()),
    })
}

/// `2^{(n-2)/2} e^{n-2}`, the bound on `w^ξ` for `ξ <= log η + 2`.
pub fn reflected_bound(n: u32) -> f64 {
    let k = n as f64 - 2.0;
    2f64.powf(0.5 * k) * k.exp()
}

/// `2 e² √(8/a)`.
pub fn apriori_bound(a: f64) -> f64 {
    2.0 * std::f64::consts::E.powi(2) * (8.0 / a).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LemmaN4Report {
    pub lambda: f64,
    pub m: f64,
    /// `w̄^λ - w̄ <= 0` on the window.
    pub shifted_comparison_holds: bool,
    /// `w^λ - w <= (m/2)(e^{2λ-t} - e^t) < 0`.
    pub gap_chain_holds: bool,
    /// `(w^λ)³ - w³ <= 3 (w^λ - w)(w^λ)²`.
    pub cubic_holds: bool,
    /// `(3m/2 V̄ - ε w^λ)(e^{2λ-t} - e^t) <= 0`.
    pub final_sign_holds: bool,
    pub epsilon: f64,
    pub apriori_bound: f64,
    pub max_reflected: f64,
    pub apriori_holds: bool,
    /// Max of the stenciled `-L(w̄^λ - w̄)`.
    pub max_operator: f64,
    pub conclusion_holds: bool,
    /// `max |L(w̄^λ - w̄) - L(w^λ - w)|`; zero up to rounding since `L e^t = 0`.
    pub shift_invariance: f64,
}

impl LemmaN4Report {
    pub fn all_hold(&self) -> bool {
        self.shifted_comparison_holds
            && self.gap_chain_holds
            && self.cubic_holds
            && self.final_sign_holds
            && self.apriori_holds
            && self.conclusion_holds
            && self.shift_invariance <= 1e-10
    }
}

/// The dimension-four lemma for the shifted field `w̄ = w - (m/2) e^t`.
pub fn lemma_n4_check(w: &EFProfile, lambda: f64, v: &CurvatureProfile, m: f64, t1: f64) -> Result<LemmaN4Report> {
    if w.exponents().n() != 4 {
        return Err(Error::RequiresDimensionFour(w.exponents().n()));
    }
    if !(m > 0.0) {
        return Err(Error::InvalidParameter(format!("shift m must be positive, got {m}")));
    }
    admissible(w, lambda, t1)?;
    let (first, last) = window(w, lambda, t1)?;
    let epsilon = reflection_modulus(w, lambda, v, t1)?;
    let bound = apriori_bound(v.a);

    let mut shifted_ok = true;
    let mut chain_ok = true;
    let mut cubic_ok = true;
    let mut sign_ok = true;
    let mut max_reflected: f64 = 0.0;
    for k in first..last {
        let t = w.t()[k];
        let wk = w.w()[k];
        let wr = reflected_value(w, lambda, t)?;
        let drift = 0.5 * m * ((2.0 * lambda - t).exp() - t.exp());
        let slack = 1e-14 * wk.max(wr);
        if (wr - wk) - drift > CONTACT_TOL {
            shifted_ok = false;
        }
        if !(wr - wk <= drift + slack && drift < 0.0) {
            chain_ok = false;
        }
        let (lhs, rhs) = cubic_bound_sides(wr, wk);
        if lhs > rhs + 1e-14 * wk.powi(3).max(1e-300) {
            cubic_ok = false;
        }
        let vbar = w.curvature_at(v, t);
        if (1.5 * m * vbar - epsilon * wr) * ((2.0 * lambda - t).exp() - t.exp()) > 0.0 {
            sign_ok = false;
        }
        max_reflected = max_reflected.max(wr);
    }

    let shifted = shifted_gap_operator(w, lambda, t1, m)?;
    let plain = shifted_gap_operator(w, lambda, t1, 0.0)?;
    let shift_invariance = shifted
        .values
        .iter()
        .zip(&plain.values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let max_operator = shifted.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    Ok(LemmaN4Report {
        lambda,
        m,
        shifted_comparison_holds: shifted_ok,
        gap_chain_holds: chain_ok,
        cubic_holds: cubic_ok,
        final_sign_holds: sign_ok,
        epsilon,
        apriori_bound: bound,
        max_reflected,
        apriori_holds: max_reflected <= bound,
        max_operator,
        conclusion_holds: max_operator <= STENCIL_TOL,
        shift_invariance,
    })
}

/// `((w^λ)³ - w³, 3 (w^λ - w)(w^λ)²)`; the first is at most the second
/// whenever `w^λ <= w`.
pub fn cubic_bound_sides(reflected: f64, w: f64) -> (f64, f64) {
    (
        reflected.powi(3) - w.powi(3),
        3.0 * (reflected - w) * reflected * reflected,
    )
}

/// Blow-up data needed to turn the Hopf conclusion into a product.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HopfContext {
    pub l: f64,
    pub u_at_y: f64,
    pub min_u: f64,
}

impl HopfContext {
    /// Selects the blow-up point of `p` on `B(0, radius)` and takes the
    /// minimum of `p` over the same ball.
    pub fn from_profile(p: &SolutionProfile, radius: f64) -> Result<Self> {
        let s = crate::blowup::concentration_function(p, radius)?;
        let pt = crate::blowup::select_blowup_point(&s, p, radius)?;
        Ok(Self {
            l: pt.l,
            u_at_y: pt.u_at_y,
            min_u: extremum_on(p, &RegionSpec::ball(radius), Extremum::Inf)?,
        })
    }

    pub fn product(&self, half_power: f64) -> f64 {
        self.l.powf(half_power) * self.u_at_y * self.min_u
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HopfReport {
    /// `w(t1) <= w(2ξ - t1)`.
    pub holds: bool,
    pub w_t1: f64,
    pub w_mirror: f64,
    pub product: Option<f64>,
}

pub fn hopf_conclusion_check(w: &EFProfile, xi: f64, t1: f64, context: Option<&HopfContext>) -> Result<HopfReport> {
    admissible(w, xi, t1)?;
    let w_t1 = w.eval(t1.min(w.t_max()))?;
    let w_mirror = reflected_value(w, xi, t1)?;
    Ok(HopfReport {
        holds: w_t1 <= w_mirror + 1e-12 * w_mirror.abs().max(w_t1.abs()),
        w_t1,
        w_mirror,
        product: context.map(|c| c.product(w.exponents().half_power())),
    })
}

/// Full pipeline: critical plane, Z-fields, Lemma 2 and the Hopf check.
pub fn analyze(
    w: &EFProfile,
    lambda_bar: f64,
    t1: f64,
    v: &CurvatureProfile,
    include_subcritical: bool,
    context: Option<&HopfContext>,
) -> Result<(MovingPlaneReport, ZFields)> {
    let mut report = find_xi(w, lambda_bar, t1)?;
    let z = z_decomposition(w, report.xi, v, include_subcritical, t1)?;
    let lemma = lemma2_check(w, report.xi, v, include_subcritical, t1)?;
    let hopf = hopf_conclusion_check(w, report.xi, t1, context)?;
    report.z1_max = Some(z.z1_max());
    report.z2_max = Some(z.z2_max());
    report.lemma_holds = Some(lemma.holds());
    report.hopf_holds = Some(hopf.holds);
    report.product = hopf.product;
    Ok((report, z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bubble::{bubble_profile, BubbleParams};
    use crate::emden_fowler::{bubble_ef, t_cap};
    use crate::{CurvatureFamily, Exponents, RadialGrid};

    const LN2: f64 = std::f64::consts::LN_2;

    fn bubble4(t_min: f64, t_max: f64, m: usize, extended: bool) -> EFProfile {
        bubble_ef(&BubbleParams::new(4, 1.0).unwrap(), 0.0, t_min, t_max, m, extended).unwrap()
    }

    fn exponential(c: f64, t_min: f64, t_max: f64, m: usize) -> EFProfile {
        let h = (t_max - t_min) / (m - 1) as f64;
        let w = (0..m).map(|k| c * (t_min + k as f64 * h).exp()).collect();
        EFProfile::from_values(
            t_min,
            t_max,
            w,
            0.0,
            Exponents::new(4).unwrap(),
            CurvatureProfile::constant(8.0),
            true,
            true,
        )
        .unwrap()
    }

    fn closed_gap(lambda: f64, t: f64) -> f64 {
        1.0 / (2.0 * (2.0 * lambda - t).cosh()) - 1.0 / (2.0 * t.cosh())
    }

    #[test]
    fn reflection_of_even_profile_is_identity() {
        let w = bubble4(-3.0, 3.0, 601, true);
        let r = reflect(&w, 0.0).unwrap();
        for (t, v) in r.nodes.iter().zip(&r.values) {
            assert!((v - w.eval(*t).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn reflection_of_exponential() {
        let w = exponential(0.7, -6.0, 0.0, 601);
        let lambda = -2.0;
        let r = reflect(&w, lambda).unwrap();
        for (t, v) in r.nodes.iter().zip(&r.values) {
            let exact = 0.7 * (2.0 * lambda - t).exp();
            assert!((v - exact).abs() < 1e-12 * exact.max(1e-3), "t = {t}");
        }
    }

    #[test]
    fn reflection_leaving_grid_is_rejected() {
        let w = bubble4(-3.0, t_cap(), 301, false);
        match reflect(&w, -1.9) {
            Err(Error::ReflectionOutOfGrid { required, t_min, .. }) => {
                assert!((required - (-3.8 + LN2)).abs() < 1e-12);
                assert_eq!(t_min, -3.0);
            }
            other => panic!("expected out-of-grid error, got {other:?}"),
        }
    }

    #[test]
    fn decaying_bubble_compares_strictly() {
        let w = bubble4(-6.0, t_cap(), 2001, false);
        let cmp = compare(&w, -1.0, -LN2).unwrap();
        assert!(cmp.max_gap < 0.0 && !cmp.touches());
        let oracle = w
            .t()
            .iter()
            .filter(|&&t| t > -1.0 && t <= -LN2 + 1e-12)
            .map(|&t| closed_gap(-1.0, t))
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((cmp.max_gap - oracle).abs() < 1e-9);
    }

    #[test]
    fn even_bubble_touches_at_axis() {
        let w = bubble4(-3.0, 3.0, 601, true);
        let cmp = compare(&w, 0.0, 2.0).unwrap();
        assert!(cmp.max_gap.abs() < 1e-15);
        assert!(cmp.touches());
    }

    #[test]
    fn exponential_never_touches() {
        let w = exponential(1.3, -6.0, -LN2, 1001);
        for lambda in [-2.5, -1.0, -0.8] {
            assert!(compare(&w, lambda, -LN2).unwrap().max_gap < 0.0);
        }
        assert!(compare(&w, -LN2, -LN2).is_err());
    }

    #[test]
    fn even_profile_plane_sits_on_axis() {
        for m in [601, 6001, 60001] {
            let w = bubble4(-3.0, 3.0, m, true);
            let report = find_xi(&w, 1.0, 2.5).unwrap();
            assert!(report.xi.abs() <= w.step(), "m = {m}: xi = {}", report.xi);
            assert!(report.xi <= report.lambda_bar);
            assert!(report.contact_found);
        }
    }

    #[test]
    fn exponential_plane_is_upper_bound() {
        let w = exponential(1.0, -6.0, -LN2, 1001);
        let report = find_xi(&w, -2.0, -LN2).unwrap();
        assert_eq!(report.xi, -2.0);
        assert!(!report.contact_found);
        assert!((report.eta - (-4.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn no_admissible_plane_is_reported() {
        // Even profile on a short grid: the scan drops below the reflection
        // floor before reaching a strictly negative plane.
        let w = bubble4(-1.0, 3.0, 401, true);
        let err = find_xi(&w, 2.0, 3.0).unwrap_err();
        assert!(matches!(err, Error::NoAdmissiblePlane { .. }), "{err:?}");
    }

    #[test]
    fn off_center_plane_matches_brute_force() {
        let offset = 0.1;
        let params = BubbleParams::with_offset(4, 1.0, offset).unwrap();
        let w = bubble_ef(&params, 0.0, -6.0, 3.0, 9001, true).unwrap();
        let (lambda_bar, t1) = (1.0, 2.5);
        let report = find_xi(&w, lambda_bar, t1).unwrap();

        // Oracle: closed-form w, dense scan of λ downward, dense window.
        let wf = |t: f64| t.exp() / (1.0 + (t.exp() - offset).powi(2));
        let negative = |lambda: f64| {
            (1..=4000).all(|k| {
                let t = lambda + (t1 - lambda) * k as f64 / 4000.0;
                t - lambda < 0.5 * w.step() || wf(2.0 * lambda - t) - wf(t) < -CONTACT_TOL
            })
        };
        let mut lambda = lambda_bar;
        while !negative(lambda) {
            lambda -= 1e-4;
        }
        assert!(
            (report.xi - lambda).abs() < 3.0 * w.step(),
            "xi = {}, oracle = {lambda}",
            report.xi
        );
        assert!(report.xi.abs() > 3.0 * w.step(), "displacement must move the plane");
    }

    #[test]
    fn constant_curvature_signs() {
        let w = bubble4(-6.0, t_cap(), 2001, false);
        let v = CurvatureProfile::constant(8.0);
        for sub in [false, true] {
            let z = z_decomposition(&w, -1.0, &v, sub, -LN2).unwrap();
            assert!(z.z1.iter().all(|x| *x <= 1e-14));
            assert!(z.z2.iter().all(|x| *x <= 1e-14));
        }
    }

    #[test]
    fn z_sum_matches_stencil() {
        let w = bubble4(-6.0, 1.0, 7001, true);
        let v = CurvatureProfile::constant(8.0);
        let z = z_decomposition(&w, -0.5, &v, false, 0.5).unwrap();
        let sum = z.sum();
        assert!(sum.iter().copied().fold(f64::NEG_INFINITY, f64::max) < 0.0);
        let op = reflected_gap_operator(&w, -0.5, 0.5).unwrap();
        assert!(!op.values.is_empty());
        for (t, l) in op.nodes.iter().zip(&op.values) {
            let i = z.t.iter().position(|x| x == t).unwrap();
            assert!((l - sum[i]).abs() < 1e-5, "t = {t}");
        }
    }

    #[test]
    fn lemma_two_on_bubble() {
        let w = bubble4(-6.0, t_cap(), 2001, false);
        let r = lemma2_check(&w, -1.0, &CurvatureProfile::constant(8.0), false, -LN2).unwrap();
        assert!(!r.vacuous && r.conclusion_holds && r.holds());
        assert!(r.max_operator < 0.0);
        assert_eq!(r.epsilon, 0.0);
        assert!(r.bound_chain_holds && r.sufficient_condition_holds && r.reflected_bound_holds);
    }

    #[test]
    fn lemma_two_on_kernel_profile() {
        let w = exponential(0.5, -6.0, -LN2, 2001);
        let r = lemma2_check(&w, -1.5, &CurvatureProfile::constant(8.0), true, -LN2).unwrap();
        assert!(r.max_operator.abs() < 1e-8);
        assert!(r.conclusion_holds);
        assert!(r.z1_max <= 0.0 && r.z2_max <= 0.0);
    }

    #[test]
    fn oscillating_curvature_breaks_sufficient_condition() {
        let v = CurvatureProfile::new(
            CurvatureFamily::Sinusoidal {
                v0: 8.0,
                eps: 0.5,
                omega: 50.0,
            },
            4.0,
            12.0,
            1e4,
            1.0,
        )
        .unwrap();
        let w = bubble4(-6.0, t_cap(), 2001, false);
        let r = lemma2_check(&w, -1.0, &v, false, -LN2).unwrap();
        assert!(r.epsilon > 10.0);
        assert!(r.bound_chain_holds);
        assert!(!r.sufficient_condition_holds);
        assert!(r.first_sufficient_failure.is_some());
    }

    #[test]
    fn dimension_four_chain_on_bubble() {
        let w = bubble4(-6.0, t_cap(), 2001, false);
        let r = lemma_n4_check(&w, -1.0, &CurvatureProfile::constant(8.0), 0.1, -LN2).unwrap();
        assert!(r.all_hold(), "{r:?}");
        assert!((r.apriori_bound - 2.0 * std::f64::consts::E.powi(2)).abs() < 1e-12);
        assert!(r.max_reflected <= 0.5);
        assert!(r.shift_invariance <= 1e-10);
    }

    #[test]
    fn dimension_four_chain_rejects_other_dimensions() {
        let w = bubble_ef(&BubbleParams::new(5, 1.0).unwrap(), 0.0, -6.0, t_cap(), 301, false).unwrap();
        let err = lemma_n4_check(&w, -1.0, &CurvatureProfile::constant(15.0), 0.1, -LN2).unwrap_err();
        assert!(matches!(err, Error::RequiresDimensionFour(5)));
    }

    #[test]
    fn cubic_bound_equality_case() {
        assert_eq!(cubic_bound_sides(0.3, 0.3), (0.0, 0.0));
        let (lhs, rhs) = cubic_bound_sides(0.2, 0.3);
        assert!(lhs <= rhs);
    }

    #[test]
    fn hopf_on_even_profile() {
        let w = bubble4(-3.0, 3.0, 601, true);
        let r = hopf_conclusion_check(&w, 0.0, 2.0, None).unwrap();
        assert!(r.holds);
        assert!((r.w_t1 - r.w_mirror).abs() < 1e-15);
        assert!(r.product.is_none());
    }

    #[test]
    fn hopf_fails_for_exponential() {
        let w = exponential(1.0, -6.0, -LN2, 1001);
        let r = hopf_conclusion_check(&w, -2.0, -LN2, None).unwrap();
        assert!(!r.holds);
        assert!(r.w_t1 > r.w_mirror);
    }

    #[test]
    fn bubble_family_product_is_bounded() {
        for lambda in [1.0, 10.0, 100.0] {
            let params = BubbleParams::new(4, lambda).unwrap();
            let grid = RadialGrid::uniform(1.0, 1e-4).unwrap();
            let p = bubble_profile(&params, grid).unwrap();
            let ctx = HopfContext::from_profile(&p, 1.0).unwrap();
            let product = ctx.product(1.0);
            let closed = lambda * lambda / (1.0 + lambda * lambda);
            assert!(product <= 1.0 + 1e-9);
            assert!((product - closed).abs() < 1e-12, "λ = {lambda}: {product} vs {closed}");
        }
    }

    #[test]
    fn pipeline_fills_report() {
        let w = bubble4(-6.0, t_cap(), 2001, false);
        let (report, z) = analyze(&w, -1.0, -LN2, &CurvatureProfile::constant(8.0), false, None).unwrap();
        assert_eq!(report.xi, -1.0);
        assert_eq!(report.z1_max, Some(z.z1_max()));
        assert_eq!(report.lemma_holds, Some(true));
        assert!(report.hopf_holds.is_some());
    }
}
