//! Parameter tables: one per command, shared by the parser and `--help`.

use crate::config::Command;

#[derive(Debug, Clone, Copy)]
pub enum Kind {
    Int {
        min: i64,
        max: i64,
    },
    Float {
        min: f64,
        max: f64,
        open_min: bool,
    },
    Bool,
    Choice(&'static [&'static str]),
    /// Comma-separated positive numbers.
    PositiveList,
}

#[derive(Debug, Clone, Copy)]
pub struct Spec {
    pub key: &'static str,
    pub kind: Kind,
    /// Literal default; `None` means optional or derived at run time.
    pub default: Option<&'static str>,
    pub required: bool,
    pub help: &'static str,
}

const INF: f64 = f64::INFINITY;

const fn positive(key: &'static str, default: Option<&'static str>, help: &'static str) -> Spec {
    Spec {
        key,
        kind: Kind::Float {
            min: 0.0,
            max: INF,
            open_min: true,
        },
        default,
        required: false,
        help,
    }
}

const fn real(key: &'static str, default: Option<&'static str>, help: &'static str) -> Spec {
    Spec {
        key,
        kind: Kind::Float {
            min: -INF,
            max: INF,
            open_min: false,
        },
        default,
        required: false,
        help,
    }
}

const fn boolean(key: &'static str, default: &'static str, help: &'static str) -> Spec {
    Spec {
        key,
        kind: Kind::Bool,
        default: Some(default),
        required: false,
        help,
    }
}

const DIMENSION: Spec = Spec {
    key: "n",
    kind: Kind::Int { min: 3, max: 64 },
    default: Some("4"),
    required: false,
    help: "space dimension",
};

const CURVATURE: [Spec; 9] = [
    Spec {
        key: "v_family",
        kind: Kind::Choice(&["constant", "polynomial", "sinusoidal"]),
        default: Some("constant"),
        required: false,
        help: "curvature family: V0, V0(1+eps r^k) or V0(1+eps sin(omega r))",
    },
    positive("v0", None, "curvature scale V0 [default n(n-2)]"),
    real("v_eps", Some("0"), "curvature perturbation amplitude"),
    Spec {
        key: "v_k",
        kind: Kind::Float {
            min: 1.0,
            max: INF,
            open_min: false,
        },
        default: Some("2"),
        required: false,
        help: "polynomial degree k >= 1",
    },
    Spec {
        key: "v_omega",
        kind: Kind::Float {
            min: 0.0,
            max: INF,
            open_min: false,
        },
        default: Some("1"),
        required: false,
        help: "sinusoidal frequency",
    },
    positive(
        "v_a",
        None,
        "declared lower bound a [default V0; required for non-constant V]",
    ),
    positive(
        "v_b",
        None,
        "declared upper bound b [default V0; required for non-constant V]",
    ),
    Spec {
        key: "v_holder",
        kind: Kind::Float {
            min: 0.0,
            max: INF,
            open_min: false,
        },
        default: None,
        required: false,
        help: "declared Holder modulus A of V' [default 0; required for non-constant V]",
    },
    Spec {
        key: "v_alpha",
        kind: Kind::Float {
            min: 0.0,
            max: 1.0,
            open_min: true,
        },
        default: Some("1"),
        required: false,
        help: "declared Holder exponent alpha",
    },
];

const SHOOTING: [Spec; 5] = [
    positive("u0", Some("1"), "center value u(0)"),
    positive("r_max", Some("1"), "ball radius"),
    positive("step", Some("1e-3"), "integration step"),
    Spec {
        key: "tolerance",
        kind: Kind::Float {
            min: 0.0,
            max: 1e-3,
            open_min: true,
        },
        default: Some("1e-9"),
        required: false,
        help: "positivity cut-off",
    },
    boolean("subcritical", "false", "include the u^{n/(n-2)} term"),
];

/// Source profile for `ef` and `mplane`.
const SOURCE: [Spec; 3] = [
    Spec {
        key: "source",
        kind: Kind::Choice(&["bubble", "solve"]),
        default: Some("bubble"),
        required: false,
        help: "closed-form bubble or shooting solution",
    },
    positive("lambda", Some("1"), "bubble scale (source = bubble)"),
    Spec {
        key: "center_offset",
        kind: Kind::Float {
            min: 0.0,
            max: INF,
            open_min: false,
        },
        default: Some("0"),
        required: false,
        help: "bubble center distance from the origin (source = bubble)",
    },
];

const EF_GRID: [Spec; 4] = [
    real("t_min", Some("-8"), "left end of the t-grid"),
    real(
        "t_max",
        Some("-0.6931471805599453"),
        "right end of the t-grid [default -log 2]",
    ),
    Spec {
        key: "nodes",
        kind: Kind::Int {
            min: 8,
            max: 10_000_000,
        },
        default: Some("2001"),
        required: false,
        help: "t-grid nodes",
    },
    boolean("extended", "false", "allow t_max > -log 2"),
];

fn join(parts: &[&[Spec]]) -> Vec<Spec> {
    parts.iter().flat_map(|p| p.iter().copied()).collect()
}

/// Parameter table of `command`, in help order.
pub fn table(command: Command) -> &'static [Spec] {
    use std::sync::OnceLock;
    static TABLES: OnceLock<Vec<Vec<Spec>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| Command::ALL.iter().map(|&c| build(c)).collect());
    &tables[command as usize]
}

fn build(command: Command) -> Vec<Spec> {
    match command {
        Command::Bubble => vec![
            DIMENSION,
            positive("lambda", Some("1"), "bubble scale"),
            positive("rmax", Some("1"), "ball radius"),
            positive("step", Some("1e-3"), "grid step"),
        ],
        Command::Solve => join(&[&[DIMENSION], &SHOOTING, &CURVATURE]),
        Command::Blowup => join(&[
            &[DIMENSION],
            &[
                Spec {
                    key: "u0s",
                    kind: Kind::PositiveList,
                    default: Some("10,100,1000"),
                    required: false,
                    help: "center values of the family",
                },
                positive("r_max", Some("1"), "ball radius"),
                positive("base_step", Some("1e-3"), "step in units of u0^{-2/(n-2)}"),
                positive("radius", None, "concentration radius R [default r_max]"),
                positive("r_tilde", Some("10"), "bubble comparison radius"),
                Spec {
                    key: "tolerance",
                    kind: Kind::Float {
                        min: 0.0,
                        max: 1e-3,
                        open_min: true,
                    },
                    default: Some("1e-9"),
                    required: false,
                    help: "positivity cut-off",
                },
                boolean("subcritical", "true", "include the u^{n/(n-2)} term"),
            ],
            &CURVATURE,
        ]),
        Command::Ef => join(&[
            &[DIMENSION],
            &SOURCE,
            &SHOOTING,
            &[real("origin", Some("0"), "radial position of the EF origin")],
            &EF_GRID,
            &CURVATURE,
        ]),
        Command::Mplane => join(&[
            &[DIMENSION],
            &SOURCE,
            &SHOOTING,
            &[
                real(
                    "origin",
                    None,
                    "radial position of the EF origin [default: blow-up point y]",
                ),
                positive("radius", None, "blow-up selection radius R [default r_max]"),
                real("lambda_bar", None, "upper search bound [default 2 + log eta]"),
                real("t1", None, "comparison window end [default min(log sqrt l, t_max)]"),
                positive("m", None, "shift for the dimension-four lemma (n = 4 only)"),
            ],
            &EF_GRID,
            &CURVATURE,
        ]),
        Command::Sweep => join(&[
            &[
                Spec {
                    key: "theorem",
                    kind: Kind::Int { min: 1, max: 4 },
                    default: None,
                    required: true,
                    help: "1, 2: sup x inf; 3, 4: sup under min u >= m (n = 4)",
                },
                DIMENSION,
                Spec {
                    key: "family",
                    kind: Kind::Choice(&["bubble", "shooting"]),
                    default: Some("bubble"),
                    required: false,
                    help: "bubble scales or shooting center values",
                },
                Spec {
                    key: "values",
                    kind: Kind::PositiveList,
                    default: None,
                    required: false,
                    help: "family parameters [default 1,2,4,...,1024 or log_count log-spaced values]",
                },
                positive("log_min", Some("1"), "lower end of log-spaced parameters"),
                positive("log_max", Some("1000"), "upper end of log-spaced parameters"),
                Spec {
                    key: "log_count",
                    kind: Kind::Int { min: 1, max: 100_000 },
                    default: None,
                    required: false,
                    help: "number of log-spaced parameters [default 20 for shooting]",
                },
                positive("k_radius", Some("0.5"), "K = B(0, k_radius)"),
                positive("omega_radius", Some("1"), "Omega = B(0, omega_radius)"),
                positive("m", None, "lower bound on min u (theorems 3, 4)"),
                Spec {
                    key: "base_step",
                    kind: Kind::Float {
                        min: 0.0,
                        max: 1e-2,
                        open_min: true,
                    },
                    default: Some("1e-2"),
                    required: false,
                    help: "shooting step in units of u0^{-2/(n-2)}",
                },
            ],
            &CURVATURE,
        ]),
    }
}

/// Help text listing every parameter of every command.
pub fn help_text() -> String {
    let mut out = String::from("Config parameters ([params] section or --set key=value):\n");
    for c in Command::ALL {
        out.push_str(&format!("\n  {}:\n", c.name()));
        push_keys(&mut out, c);
    }
    out
}

/// Parameter listing for one subcommand.
pub fn command_help(c: Command) -> String {
    let mut out = format!("Parameters for `{}` ([params] section or --set key=value):\n", c.name());
    push_keys(&mut out, c);
    out
}

fn push_keys(out: &mut String, c: Command) {
    for s in table(c) {
        let default = match (s.default, s.required) {
            (_, true) => " (required)".to_string(),
            (Some(d), _) => format!(" (default {d})"),
            (None, _) => String::new(),
        };
        out.push_str(&format!("    {:<14} {}{}\n", s.key, s.help, default));
    }
}
