//! Command dispatch. Every command builds its artifacts in memory; files are
//! written only once the whole computation has succeeded.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::json;

use critlab::blowup::{blowup_report, concentration_function, select_blowup_point};
use critlab::bubble::{bubble_pde_residual, bubble_profile};
use critlab::emden_fowler::{ef_residual, EFProfile};
use critlab::io::{self, to_json};
use critlab::moving_plane::{analyze, lambda_bar_for, lemma_n4_check, HopfContext};
use critlab::solver::{pde_residual, solve_shoot};
use critlab::supinf::{run_sweep, theorem_hypothesis_audit};
use critlab::{
    BubbleParams, CurvatureFamily, CurvatureProfile, ErrorCategory, Exponents, Family, RadialGrid, ShootingConfig,
    SolutionProfile, SweepConfig, Theorem,
};

use crate::config::{ConfigError, ExperimentConfig, Origin};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] critlab::Error),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(e) => match e.category() {
                ErrorCategory::Config => 2,
                ErrorCategory::Solver => 3,
                ErrorCategory::Domain => 4,
            },
            CliError::Io { .. } => 1,
        }
    }

    pub fn category(&self) -> &'static str {
        match self.exit_code() {
            2 => "config",
            3 => "solver",
            4 => "domain",
            _ => "io",
        }
    }
}

fn missing(key: &str, why: &str) -> CliError {
    CliError::Config(ConfigError {
        origin: Origin::Default,
        key: Some(key.to_string()),
        message: why.to_string(),
    })
}

/// A named output file, fully rendered.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

struct Outputs<'a> {
    cfg: &'a ExperimentConfig,
    files: Vec<Artifact>,
}

impl<'a> Outputs<'a> {
    fn new(cfg: &'a ExperimentConfig) -> Self {
        Self { cfg, files: Vec::new() }
    }

    fn header(&self) -> Vec<(String, String)> {
        let mut h = vec![("critlab".to_string(), env!("CARGO_PKG_VERSION").to_string())];
        h.extend(self.cfg.echo());
        h
    }

    fn csv(&mut self, name: &str, write: impl FnOnce(&mut Vec<u8>, &[(String, String)]) -> std::io::Result<()>) {
        if !self.cfg.format.csv() {
            return;
        }
        let mut buf = Vec::new();
        write(&mut buf, &self.header()).expect("writing to memory");
        self.files.push(Artifact {
            name: name.to_string(),
            contents: String::from_utf8(buf).expect("CSV is UTF-8"),
        });
    }

    fn json(&mut self, name: &str, result: serde_json::Value) {
        if !self.cfg.format.json() {
            return;
        }
        let config: serde_json::Map<String, serde_json::Value> = self
            .header()
            .into_iter()
            .map(|(k, v)| (k, serde_json::Value::String(v)))
            .collect();
        let doc = json!({ "config": config, "result": result });
        self.files.push(Artifact {
            name: name.to_string(),
            contents: to_json(&doc).expect("JSON values serialize"),
        });
    }
}

fn exponents(cfg: &ExperimentConfig) -> Result<Exponents, CliError> {
    Ok(Exponents::new(cfg.int("n").expect("n has a default"))?)
}

fn curvature(cfg: &ExperimentConfig, e: Exponents) -> Result<CurvatureProfile, CliError> {
    let v0 = cfg.float("v0").unwrap_or(e.bubble_curvature());
    let eps = cfg.float("v_eps").unwrap_or(0.0);
    let family = match cfg.text("v_family").unwrap_or("constant") {
        "polynomial" => CurvatureFamily::Polynomial {
            v0,
            eps,
            k: cfg.float("v_k").unwrap_or(2.0),
        },
        "sinusoidal" => CurvatureFamily::Sinusoidal {
            v0,
            eps,
            omega: cfg.float("v_omega").unwrap_or(1.0),
        },
        _ => CurvatureFamily::Constant { v0 },
    };
    let declared = |key: &str, fallback: f64| -> Result<f64, CliError> {
        match (cfg.float(key), family) {
            (Some(v), _) => Ok(v),
            (None, CurvatureFamily::Constant { .. }) => Ok(fallback),
            (None, _) => Err(missing(key, "required for a non-constant curvature family")),
        }
    };
    Ok(CurvatureProfile::new(
        family,
        declared("v_a", v0)?,
        declared("v_b", v0)?,
        declared("v_holder", 0.0)?,
        cfg.float("v_alpha").unwrap_or(1.0),
    )?)
}

fn shooting(cfg: &ExperimentConfig, e: Exponents) -> Result<ShootingConfig, CliError> {
    let f = |k: &str| cfg.float(k).expect("shooting keys have defaults");
    Ok(
        ShootingConfig::new(e, curvature(cfg, e)?, f("u0"), f("r_max"), f("step"))
            .with_tolerance(f("tolerance"))
            .with_subcritical(cfg.flag("subcritical").unwrap_or(false)),
    )
}

/// The radial profile behind `ef` and `mplane`.
fn source_profile(cfg: &ExperimentConfig, e: Exponents) -> Result<SolutionProfile, CliError> {
    if cfg.text("source") == Some("solve") {
        return Ok(solve_shoot(&shooting(cfg, e)?)?);
    }
    let f = |k: &str| cfg.float(k).expect("source keys have defaults");
    let params = BubbleParams::with_offset(e.n() as i64, f("lambda"), f("center_offset"))?;
    Ok(bubble_profile(&params, RadialGrid::uniform(f("r_max"), f("step"))?)?)
}

fn ef_profile(cfg: &ExperimentConfig, p: &SolutionProfile, origin: f64) -> Result<EFProfile, CliError> {
    let t_min = cfg.float("t_min").expect("default");
    let t_max = cfg.float("t_max").expect("default");
    let nodes = cfg.int("nodes").expect("default") as usize;
    let w = if cfg.flag("extended").unwrap_or(false) {
        critlab::emden_fowler::to_ef_extended(p, origin, t_min, t_max, nodes)?
    } else {
        critlab::emden_fowler::to_ef(p, origin, t_min, t_max, nodes)?
    };
    Ok(w)
}

/// Computes every artifact of `cfg` without touching the file system.
pub fn execute(cfg: &ExperimentConfig) -> Result<Vec<Artifact>, CliError> {
    use crate::config::Command::*;
    cfg.check_required()?;
    let mut out = Outputs::new(cfg);
    let e = exponents(cfg)?;
    match cfg.command {
        Bubble => {
            let f = |k: &str| cfg.float(k).expect("bubble keys have defaults");
            let params = BubbleParams::new(e.n() as i64, f("lambda"))?;
            let grid = RadialGrid::uniform(f("rmax"), f("step"))?;
            let residual = bubble_pde_residual(&params, &grid)?;
            let p = bubble_profile(&params, grid)?;
            out.csv("bubble.csv", |w, h| io::write_profile(w, h, &p));
            out.json(
                "bubble.json",
                json!({
                    "params": params,
                    "nodes": p.nodes().len(),
                    "residual": residual,
                    "relative_residual": residual.relative(),
                }),
            );
        }
        Solve => {
            let sc = shooting(cfg, e)?;
            let p = solve_shoot(&sc)?;
            let residual = pde_residual(&p);
            out.csv("solution.csv", |w, h| io::write_profile(w, h, &p));
            out.json(
                "solve.json",
                json!({
                    "shooting": sc,
                    "nodes": p.nodes().len(),
                    "r_end": p.ball_radius(),
                    "reached_r_max": p.ball_radius() >= sc.r_max * (1.0 - 1e-12),
                    "u_end": p.values().last(),
                    "residual": residual,
                }),
            );
        }
        Blowup => {
            let v = curvature(cfg, e)?;
            let r_max = cfg.float("r_max").expect("default");
            let base = cfg.float("base_step").expect("default");
            let tol = cfg.float("tolerance").expect("default");
            let sub = cfg.flag("subcritical").unwrap_or(true);
            let radius = cfg.float("radius").unwrap_or(r_max);
            let family = cfg
                .list("u0s")
                .expect("default")
                .iter()
                .map(|&u0| {
                    let step = base * u0.powf(-e.scale_power()).min(1.0) * r_max.min(1.0);
                    let sc = ShootingConfig::new(e, v, u0, r_max, step)
                        .with_tolerance(tol)
                        .with_subcritical(sub);
                    solve_shoot(&sc)
                })
                .collect::<Result<Vec<_>, _>>()?;
            let report = blowup_report(&family, radius, cfg.float("r_tilde").expect("default"))?;
            out.csv("blowup.csv", |w, h| io::write_blowup(w, h, &report));
            out.json("blowup.json", serde_json::to_value(&report).expect("serializable"));
        }
        Ef => {
            let p = source_profile(cfg, e)?;
            let w = ef_profile(cfg, &p, cfg.float("origin").expect("default"))?;
            let residual = ef_residual(&w, p.curvature(), p.has_subcritical_term());
            out.csv("ef.csv", |o, h| io::write_ef(o, h, &w));
            out.json(
                "ef.json",
                json!({
                    "nodes": w.len(),
                    "step": w.step(),
                    "t_min": w.t_min(),
                    "t_max": w.t_max(),
                    "w_at_t_max": w.w().last(),
                    "residual": residual,
                }),
            );
        }
        Mplane => {
            let p = source_profile(cfg, e)?;
            let radius = cfg.float("radius").unwrap_or(p.ball_radius()).min(p.ball_radius());
            let s = concentration_function(&p, radius)?;
            let point = select_blowup_point(&s, &p, radius)?;
            let origin = cfg.float("origin").unwrap_or(point.y);
            let w = ef_profile(cfg, &p, origin)?;
            let t1 = cfg.float("t1").unwrap_or_else(|| point.l.sqrt().ln().min(w.t_max()));
            let lambda_bar = cfg
                .float("lambda_bar")
                .unwrap_or_else(|| lambda_bar_for(point.u_at_y, e.n()));
            let ctx = HopfContext::from_profile(&p, radius)?;
            let (report, z) = analyze(&w, lambda_bar, t1, p.curvature(), p.has_subcritical_term(), Some(&ctx))?;
            let lemma_n4 = match cfg.float("m") {
                Some(m) => Some(lemma_n4_check(&w, report.xi, p.curvature(), m, t1)?),
                None => None,
            };
            out.csv("zfields.csv", |o, h| io::write_z_fields(o, h, &z));
            out.json(
                "mplane.json",
                json!({
                    "origin": origin,
                    "blowup_point": point,
                    "report": report,
                    "lemma_n4": lemma_n4,
                }),
            );
        }
        Sweep => {
            let sc = sweep_config(cfg, e)?;
            let report = run_sweep(&sc)?;
            let audit = theorem_hypothesis_audit(&sc);
            out.csv("sweep.csv", |o, h| io::write_sweep(o, h, &report));
            out.json("sweep.json", json!({ "sweep": sc, "report": report, "audit": audit }));
        }
    }
    Ok(out.files)
}

fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

fn sweep_config(cfg: &ExperimentConfig, e: Exponents) -> Result<SweepConfig, CliError> {
    let theorem = Theorem::try_from(cfg.int("theorem").expect("required") as u8)?;
    let shooting = cfg.text("family") == Some("shooting");
    let values = match (cfg.list("values"), cfg.int("log_count")) {
        (Some(v), None) => v.to_vec(),
        (Some(_), Some(_)) => return Err(missing("log_count", "give either values or log_count, not both")),
        (None, count) => {
            let lo = cfg.float("log_min").expect("default");
            let hi = cfg.float("log_max").expect("default");
            match (count, shooting) {
                (Some(c), _) => log_spaced(lo, hi, c as usize),
                (None, true) => log_spaced(lo, hi, 20),
                (None, false) => (0..=10).map(|k| 2f64.powi(k)).collect(),
            }
        }
    };
    let family = if shooting {
        Family::Shooting(values)
    } else {
        Family::BubbleScale(values)
    };
    let mut sc = SweepConfig::new(theorem, e.n() as i64, family)?;
    sc.curvature = curvature(cfg, e)?;
    sc.k = critlab::RegionSpec::ball(cfg.float("k_radius").expect("default"));
    sc.omega = critlab::RegionSpec::ball(cfg.float("omega_radius").expect("default"));
    sc.m = cfg.float("m");
    sc.base_step = cfg.float("base_step").expect("default");
    sc.validate()?;
    Ok(sc)
}

/// Writes artifacts into `dir`, creating it if needed. Returns the paths.
pub fn write_artifacts(dir: &Path, files: &[Artifact]) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    files
        .iter()
        .map(|a| {
            let path = dir.join(&a.name);
            fs::write(&path, &a.contents).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            Ok(path)
        })
        .collect()
}
