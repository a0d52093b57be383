//! Sweeps over solution families measuring the two Harnack-type
//! observables: `sup_K u × inf_Ω u` (theorems 1 and 2) and `sup_K u` among
//! members with `min_Ω u >= m` (theorems 3 and 4).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bubble::{bubble_family_eval, bubble_profile, BubbleParams};
use crate::curvature::{bound_violations, holder_bound_check, BoundViolation, HolderViolation};
use crate::domain::extremum_on;
use crate::emden_fowler::t_cap;
use crate::solver::solve_shoot;
use crate::{
    CurvatureProfile, Error, Exponents, Extremum, RadialGrid, RegionSpec, Result, ShootingConfig, SolutionProfile,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Theorem {
    /// sup × inf, `C^{1,α}` curvature, subcritical term on.
    One,
    /// sup × inf, `C^1` curvature, subcritical term on.
    Two,
    /// sup under `min u >= m`, n = 4, `C^{1,α}` curvature, pure critical.
    Three,
    /// sup under `min u >= m`, n = 4, `C^1` curvature, pure critical.
    Four,
}

impl Theorem {
    pub fn number(self) -> u8 {
        self as u8 + 1
    }

    /// Product observable (theorems 1, 2) versus conditional sup (3, 4).
    pub fn uses_product(self) -> bool {
        matches!(self, Self::One | Self::Two)
    }

    /// Whether the hypothesis includes a Hölder modulus for `∇V`.
    pub fn needs_holder(self) -> bool {
        matches!(self, Self::One | Self::Three)
    }
}

impl TryFrom<u8> for Theorem {
    type Error = Error;

    fn try_from(k: u8) -> Result<Self> {
        match k {
            1 => Ok(Self::One),
            2 => Ok(Self::Two),
            3 => Ok(Self::Three),
            4 => Ok(Self::Four),
            _ => Err(Error::InvalidParameter(format!("theorem must be 1..=4, got {k}"))),
        }
    }
}

impl From<Theorem> for u8 {
    fn from(t: Theorem) -> u8 {
        t.number()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "values", rename_all = "snake_case")]
pub enum Family {
    /// Closed-form bubbles `u_λ`, pure critical. Calibration rows.
    BubbleScale(Vec<f64>),
    /// Shooting solutions indexed by `u(0)`.
    Shooting(Vec<f64>),
}

impl Family {
    pub fn parameters(&self) -> &[f64] {
        match self {
            Self::BubbleScale(v) | Self::Shooting(v) => v,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::BubbleScale(_) => "bubble_scale",
            Self::Shooting(_) => "shooting",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub theorem: Theorem,
    pub exponents: Exponents,
    pub family: Family,
    pub curvature: CurvatureProfile,
    pub k: RegionSpec,
    pub omega: RegionSpec,
    /// Lower bound on `min_Ω u`, theorems 3 and 4 only.
    pub m: Option<f64>,
    /// Shooting step in units of the member's natural length `u0^{-2/(n-2)}`.
    pub base_step: f64,
}

impl SweepConfig {
    /// Defaults `K = B(0, 1/2)`, `Ω = B(0, 1)` and the bubble curvature
    /// `n(n-2)`.
    pub fn new(theorem: Theorem, n: i64, family: Family) -> Result<Self> {
        let exponents = Exponents::new(n)?;
        Ok(Self {
            theorem,
            exponents,
            family,
            curvature: CurvatureProfile::constant(exponents.bubble_curvature()),
            k: RegionSpec::ball(0.5),
            omega: RegionSpec::ball(1.0),
            m: None,
            base_step: 1e-2,
        })
    }

    pub fn with_m(mut self, m: f64) -> Self {
        self.m = Some(m);
        self
    }

    /// Subcritical term in the shooting equation.
    pub fn includes_subcritical(&self) -> bool {
        self.theorem.uses_product()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.family.parameters().is_empty() {
            return bad("sweep family is empty".into());
        }
        if let Some(p) = self.family.parameters().iter().find(|p| !(**p > 0.0 && p.is_finite())) {
            return bad(format!("family parameters must be positive, got {p}"));
        }
        if !self.theorem.uses_product() {
            if self.exponents.n() != 4 {
                return Err(Error::RequiresDimensionFour(self.exponents.n()));
            }
            match self.m {
                Some(m) if m > 0.0 => {}
                Some(m) => return bad(format!("m must be positive, got {m}")),
                None => return bad(format!("theorem {} needs m", self.theorem.number())),
            }
        } else if self.m.is_some() {
            return bad(format!("m does not apply to theorem {}", self.theorem.number()));
        }
        self.k.validate()?;
        self.omega.validate()?;
        let (k_lo, k_hi) = self.k.radial_range();
        let (o_lo, o_hi) = self.omega.radial_range();
        // K compactly inside Ω, up to the shared centre
        if !(k_hi < o_hi && k_lo >= o_lo) {
            return bad(format!(
                "K must lie compactly inside Ω (K spans r in [{k_lo}, {k_hi}], Ω spans [{o_lo}, {o_hi}])"
            ));
        }
        if let Family::BubbleScale(_) = self.family {
            let expected = CurvatureProfile::constant(self.exponents.bubble_curvature());
            if self.curvature.family != expected.family {
                return bad(format!(
                    "bubble family solves the equation with constant curvature {}",
                    self.exponents.bubble_curvature()
                ));
            }
        }
        if !(self.base_step > 0.0 && self.base_step <= 1e-2) {
            return bad(format!("base_step must lie in (0, 1e-2], got {}", self.base_step));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Included,
    /// `min_Ω u < m`: outside the theorem's hypothesis.
    Excluded,
    /// The member could not be computed.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub parameter: f64,
    pub status: RowStatus,
    pub sup_k: Option<f64>,
    /// `inf_Ω u` (product theorems) or `min_Ω u` (conditional theorems).
    pub inf_omega: Option<f64>,
    /// Product or sup, depending on the theorem.
    pub value: Option<f64>,
    pub closed_form: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub theorem: Theorem,
    pub n: u32,
    pub family: &'static str,
    pub rows: Vec<SweepRow>,
    /// Max of `value` over included rows.
    pub empirical_c: Option<f64>,
    /// Included values non-decreasing in parameter order.
    pub monotone_flag: bool,
    /// Max deviation from the closed form, bubble family only.
    pub closed_form_error: Option<f64>,
}

impl SweepReport {
    pub fn included(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| r.status == RowStatus::Included)
    }
}

/// Geometric grid resolving the core of `u_λ`.
pub fn bubble_grid(lambda: f64, r_max: f64) -> Result<RadialGrid> {
    let first = 1e-3f64.min(1e-3 / lambda);
    RadialGrid::geometric(r_max, first, 1.02, 1e-3)
}

fn member(cfg: &SweepConfig, parameter: f64, r_max: f64) -> Result<SolutionProfile> {
    match cfg.family {
        Family::BubbleScale(_) => {
            let params = BubbleParams::new(cfg.exponents.n() as i64, parameter)?;
            bubble_profile(&params, bubble_grid(parameter, r_max)?)
        }
        Family::Shooting(_) => {
            let natural = parameter.powf(-cfg.exponents.scale_power());
            let step = cfg.base_step * natural.min(1.0) * r_max.min(1.0);
            let shoot = ShootingConfig::new(cfg.exponents, cfg.curvature, parameter, r_max, step)
                .with_subcritical(cfg.includes_subcritical());
            solve_shoot(&shoot)
        }
    }
}

fn closed_form(cfg: &SweepConfig, parameter: f64) -> Option<f64> {
    let Family::BubbleScale(_) = cfg.family else {
        return None;
    };
    let params = BubbleParams::new(cfg.exponents.n() as i64, parameter).ok()?;
    // centred bubbles decrease in r
    let sup = bubble_family_eval(cfg.k.radial_range().0, &params);
    let inf = bubble_family_eval(cfg.omega.radial_range().1, &params);
    Some(if cfg.theorem.uses_product() { sup * inf } else { sup })
}

fn row(cfg: &SweepConfig, parameter: f64) -> SweepRow {
    let r_max = cfg.omega.radial_range().1;
    let measured = member(cfg, parameter, r_max).and_then(|p| {
        Ok((
            extremum_on(&p, &cfg.k, Extremum::Sup)?,
            extremum_on(&p, &cfg.omega, Extremum::Inf)?,
        ))
    });
    let closed_form = closed_form(cfg, parameter);
    match measured {
        Err(e) => SweepRow {
            parameter,
            status: RowStatus::Skipped,
            sup_k: None,
            inf_omega: None,
            value: None,
            closed_form,
            error: Some(e.to_string()),
        },
        Ok((sup, inf)) => {
            let (status, value) = match cfg.m {
                None => (RowStatus::Included, sup * inf),
                Some(m) if inf >= m => (RowStatus::Included, sup),
                Some(_) => (RowStatus::Excluded, sup),
            };
            SweepRow {
                parameter,
                status,
                sup_k: Some(sup),
                inf_omega: Some(inf),
                value: Some(value),
                closed_form,
                error: None,
            }
        }
    }
}

/// Runs every family member (in parallel) and assembles the report in
/// parameter order. Failed members become skipped rows.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    cfg.validate()?;
    let rows: Vec<SweepRow> = cfg.family.parameters().par_iter().map(|&p| row(cfg, p)).collect();

    let values: Vec<f64> = rows
        .iter()
        .filter(|r| r.status == RowStatus::Included)
        .filter_map(|r| r.value)
        .collect();
    let empirical_c = values.iter().copied().reduce(f64::max);
    let monotone_flag = values.windows(2).all(|w| w[1] >= w[0]);
    let closed_form_error = match cfg.family {
        Family::BubbleScale(_) => rows
            .iter()
            .filter_map(|r| Some((r.value? - r.closed_form?).abs()))
            .reduce(f64::max),
        Family::Shooting(_) => None,
    };
    Ok(SweepReport {
        theorem: cfg.theorem,
        n: cfg.exponents.n(),
        family: cfg.family.label(),
        rows,
        empirical_c,
        monotone_flag,
        closed_form_error,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HolderFailure {
    pub y: f64,
    pub violation: HolderViolation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub theorem: Theorem,
    pub curvature: String,
    /// Sampled violations of `a <= V <= b` (only `V >= a` for theorems 2, 4).
    pub bound_violations: Vec<BoundViolation>,
    /// Every family is `C^1` on `[0, ∞)` (polynomial degree `k >= 1`).
    pub differentiable: bool,
    /// `None` when the theorem does not assume a Hölder modulus.
    pub holder_failure: Option<Option<HolderFailure>>,
    pub holder_checked: usize,
    pub passes: bool,
}

/// Sampling step for the bound audit.
pub const AUDIT_STEP: f64 = 1e-3;
/// Lower end of the `t`-range of the Hölder audit.
pub const AUDIT_T_MIN: f64 = -12.0;

/// Verifies the declared curvature hypotheses on `Ω` by sampling.
pub fn theorem_hypothesis_audit(cfg: &SweepConfig) -> AuditReport {
    let v = &cfg.curvature;
    let radius = cfg.omega.radial_range().1;
    let mut violations = bound_violations(v, radius, AUDIT_STEP);
    if !cfg.theorem.needs_holder() {
        violations.retain(|b| b.lower);
    }
    let differentiable = match v.family {
        crate::CurvatureFamily::Polynomial { k, .. } => k >= 1.0,
        _ => true,
    };

    let mut holder_failure = None;
    let mut holder_checked = 0;
    if cfg.theorem.needs_holder() {
        let ts: Vec<f64> = (0..400)
            .map(|i| AUDIT_T_MIN + (t_cap() - AUDIT_T_MIN) * i as f64 / 399.0)
            .collect();
        let mut failure = None;
        for j in 0..=20 {
            let y = radius * j as f64 / 20.0;
            let rep = holder_bound_check(v, y, v.holder_constant, v.alpha, &ts);
            holder_checked += rep.checked;
            if let (None, Some(violation)) = (&failure, rep.first_violation) {
                failure = Some(HolderFailure { y, violation });
            }
        }
        holder_failure = Some(failure);
    }

    let passes = violations.is_empty() && differentiable && !matches!(holder_failure, Some(Some(_)));
    AuditReport {
        theorem: cfg.theorem,
        curvature: v.label(),
        bound_violations: violations,
        differentiable,
        holder_failure,
        holder_checked,
        passes,
    }
}
