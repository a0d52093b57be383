//! Blow-up point selection and rescaling.
//!
//! Given a profile `u` on `B(0, R)`, the concentration function
//! `s(r) = (R - r)^{(n-2)/2} u(r)` picks the point `y` at which `u` is
//! zoomed: `v(z) = u(y + z u(y)^{-2/(n-2)}) / u(y)`. Along a family of
//! profiles with growing center value the rescaled profiles approach the
//! standard bubble.

use rayon::prelude::*;
use serde::Serialize;

use crate::bubble::bubble_eval;
use crate::domain::{extremum_on, Extremum, MIN_NODES};
use crate::{Error, RadialGrid, RegionSpec, Result, Sampled, SolutionProfile};

/// Default comparison radius for the bubble distance.
pub const DEFAULT_R_TILDE: f64 = 10.0;

/// `s(r) = (R - r)^{(n-2)/2} u(r)` on the nodes with `r < R`, closed by
/// `s(R) = 0`.
pub fn concentration_function(p: &SolutionProfile, radius: f64) -> Result<Sampled> {
    if !(radius > 0.0 && radius <= p.ball_radius() * (1.0 + 1e-12)) {
        return Err(Error::Domain(format!(
            "concentration radius {radius} must lie in (0, {}]",
            p.ball_radius()
        )));
    }
    let k = p.exponents().half_power();
    let mut nodes = Vec::new();
    let mut values = Vec::new();
    for (&r, &u) in p.nodes().iter().zip(p.values()) {
        if r < radius {
            nodes.push(r);
            values.push((radius - r).powf(k) * u);
        }
    }
    nodes.push(radius);
    values.push(0.0);
    Sampled::new(nodes, values)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlowupPoint {
    pub y: f64,
    /// Distance budget `R - y`.
    pub l: f64,
    pub u_at_y: f64,
    pub s_max: f64,
}

/// Argmax of the concentration function, smallest radius on ties.
pub fn select_blowup_point(s: &Sampled, p: &SolutionProfile, radius: f64) -> Result<BlowupPoint> {
    let mut best = 0;
    for (i, v) in s.values.iter().enumerate() {
        if *v > s.values[best] {
            best = i;
        }
    }
    let y = s.nodes[best];
    Ok(BlowupPoint {
        y,
        l: radius - y,
        u_at_y: p.eval(y)?,
        s_max: s.values[best],
    })
}

/// Zooms `p` at `y` by the factor `u(y)^{2/(n-2)}` and normalizes to
/// `v(0) = 1`, along the outward radial direction.
///
/// The uniform z-grid has as many nodes as the source has at or beyond `y`;
/// for uniform sources its nodes are the images of the source nodes. The
/// returned profile keeps the source's equation metadata.
pub fn rescale(p: &SolutionProfile, y: f64) -> Result<SolutionProfile> {
    let u_y = p.eval(y)?;
    if !(u_y > 0.0) {
        return Err(Error::Domain(format!("u(y) must be positive, got {u_y}")));
    }
    let scale = u_y.powf(p.exponents().scale_power());
    let count = p.nodes().iter().filter(|&&r| r >= y).count();
    if count < MIN_NODES {
        return Err(Error::Domain(format!(
            "rescaled domain has {count} nodes, need at least {MIN_NODES}"
        )));
    }
    let z_max = (p.ball_radius() - y) * scale;
    let dz = z_max / (count - 1) as f64;
    let mut nodes: Vec<f64> = (0..count).map(|k| k as f64 * dz).collect();
    nodes[count - 1] = z_max;
    let mut values = Vec::with_capacity(count);
    values.push(1.0);
    for &z in &nodes[1..] {
        let r = (y + z / scale).min(p.ball_radius());
        values.push(p.eval(r)? / u_y);
    }
    SolutionProfile::new(
        RadialGrid::from_nodes(nodes)?,
        values,
        p.exponents(),
        p.has_subcritical_term(),
        *p.curvature(),
    )
}

/// Sup-norm distance of a rescaled profile to the standard bubble over its
/// nodes in `B(0, r_tilde)`.
pub fn bubble_distance(v: &SolutionProfile, r_tilde: f64) -> f64 {
    v.nodes()
        .iter()
        .zip(v.values())
        .take_while(|(z, _)| **z <= r_tilde)
        .map(|(&z, &val)| (val - bubble_eval(z, v.exponents())).abs())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlowupDiagnostics {
    /// Center value of the member; also the proxy `c` for the sequence constant.
    pub u0: f64,
    pub y: f64,
    pub l: f64,
    #[serde(rename = "L")]
    pub big_l: f64,
    pub beta: f64,
    pub delta: f64,
    /// `beta <= 2^{(n-2)/2}`; needs `c >= 4^{n-2}`.
    pub beta_within_bound: bool,
    /// Max of the rescaled profile over `|z| <= min(L, z_max)`.
    pub rescaled_max: f64,
    pub bubble_distance: f64,
    #[serde(rename = "R_tilde")]
    pub r_tilde: f64,
    /// `l^{(n-2)/2} u(y) inf_{B(0,R)} u`.
    pub product: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlowupReport {
    pub rows: Vec<BlowupDiagnostics>,
    /// Bubble distances strictly decrease along the family.
    pub decreasing: bool,
}

/// Selection, rescaling and bubble comparison for one profile.
pub fn diagnose(p: &SolutionProfile, radius: f64, r_tilde: f64) -> Result<BlowupDiagnostics> {
    let exps = p.exponents();
    let k = exps.half_power();
    let s = concentration_function(p, radius)?;
    let point = select_blowup_point(&s, p, radius)?;
    let v = rescale(p, point.y)?;
    let c = p.center_value();
    let delta = c.powf(-1.0 / (2.0 * (exps.n_f64() - 2.0)));
    let scale = point.u_at_y.powf(exps.scale_power());
    let big_l = point.l * scale * delta;
    let beta = if delta < 1.0 {
        (1.0 / (1.0 - delta)).powf(k)
    } else {
        f64::INFINITY
    };
    let rescaled_max = v
        .nodes()
        .iter()
        .zip(v.values())
        .take_while(|(z, _)| **z <= big_l)
        .map(|(_, val)| *val)
        .fold(f64::NEG_INFINITY, f64::max);
    let inf_u = extremum_on(p, &RegionSpec::ball(radius), Extremum::Inf)?;
    Ok(BlowupDiagnostics {
        u0: c,
        y: point.y,
        l: point.l,
        big_l,
        beta,
        delta,
        beta_within_bound: beta <= 2f64.powf(k),
        rescaled_max,
        bubble_distance: bubble_distance(&v, r_tilde),
        r_tilde,
        product: point.l.powf(k) * point.u_at_y * inf_u,
    })
}

/// Diagnostics for every member, in input order.
pub fn blowup_report(family: &[SolutionProfile], radius: f64, r_tilde: f64) -> Result<BlowupReport> {
    if family.is_empty() {
        return Err(Error::InvalidParameter("blow-up family is empty".into()));
    }
    let rows = family
        .par_iter()
        .map(|p| diagnose(p, radius.min(p.ball_radius()), r_tilde))
        .collect::<Result<Vec<_>>>()?;
    let decreasing = rows.windows(2).all(|w| w[1].bubble_distance < w[0].bubble_distance);
    Ok(BlowupReport { rows, decreasing })
}
