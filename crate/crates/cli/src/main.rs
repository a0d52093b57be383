use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use critlab_cli::config::Origin;
use critlab_cli::params::{command_help, help_text};
use critlab_cli::{execute, parse_config, write_artifacts, CliError, Command, ConfigError, ExperimentConfig, Format};

const DEFAULT_OUTPUT_DIR: &str = "critlab-out";

#[derive(Parser)]
#[command(
    name = "critlab",
    version,
    about = "Experiments on critical semilinear elliptic equations on balls",
    after_long_help = help_text(),
)]
struct Cli {
    /// Output directory [precedence: flag, CRITLAB_OUTPUT_DIR, config file, ./critlab-out]
    #[arg(long, global = true, env = "CRITLAB_OUTPUT_DIR")]
    output_dir: Option<PathBuf>,
    /// Output format, overriding the config file
    #[arg(long, global = true, value_parser = ["csv", "json", "both"])]
    format: Option<String>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct ConfigArgs {
    /// Experiment file (INI-style, see --help for keys)
    #[arg(long)]
    config: PathBuf,
    /// Override one parameter; repeatable
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample the bubble u_λ and its discrete residual
    #[command(after_long_help = command_help(Command::Bubble))]
    Bubble {
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        rmax: Option<String>,
        #[arg(long)]
        step: Option<String>,
        /// Optional experiment file; flags take precedence
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Radial shooting solve
    #[command(after_long_help = command_help(Command::Solve))]
    Solve(ConfigArgs),
    /// Blow-up diagnostics along a shooting family
    #[command(after_long_help = command_help(Command::Blowup))]
    Blowup(ConfigArgs),
    /// Emden-Fowler transform of a profile
    #[command(after_long_help = command_help(Command::Ef))]
    Ef(ConfigArgs),
    /// Moving-plane analysis in Emden-Fowler coordinates
    #[command(after_long_help = command_help(Command::Mplane))]
    Mplane(ConfigArgs),
    /// sup x inf / conditional sup sweeps over a family
    #[command(after_long_help = command_help(Command::Sweep))]
    Sweep(ConfigArgs),
}

fn load(path: &PathBuf, expected: Command) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::Config(ConfigError {
            origin: Origin::Flag,
            key: None,
            message: format!("cannot read {}: {e}", path.display()),
        })
    })?;
    let cfg = parse_config(&text)?;
    if cfg.command != expected {
        return Err(CliError::Config(ConfigError {
            origin: Origin::Default,
            key: Some("command".into()),
            message: format!(
                "file describes `{}` but `{}` was invoked",
                cfg.command.name(),
                expected.name()
            ),
        }));
    }
    Ok(cfg)
}

fn build(cli: &Cli) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match &cli.command {
        Cmd::Bubble {
            n,
            lambda,
            rmax,
            step,
            config,
            set,
        } => {
            let mut cfg = match config {
                Some(path) => load(path, Command::Bubble)?,
                None => ExperimentConfig::defaults(Command::Bubble),
            };
            for (key, value) in [("n", n), ("lambda", lambda), ("rmax", rmax), ("step", step)] {
                if let Some(v) = value {
                    cfg.set(key, v, Origin::Flag)?;
                }
            }
            cfg.apply_overrides(set)?;
            cfg
        }
        Cmd::Solve(a) | Cmd::Blowup(a) | Cmd::Ef(a) | Cmd::Mplane(a) | Cmd::Sweep(a) => {
            let expected = match cli.command {
                Cmd::Solve(_) => Command::Solve,
                Cmd::Blowup(_) => Command::Blowup,
                Cmd::Ef(_) => Command::Ef,
                Cmd::Mplane(_) => Command::Mplane,
                _ => Command::Sweep,
            };
            let mut cfg = load(&a.config, expected)?;
            cfg.apply_overrides(&a.set)?;
            cfg
        }
    };
    if let Some(f) = cli.format.as_deref().and_then(Format::parse) {
        cfg.format = f;
    }
    if let Some(dir) = &cli.output_dir {
        cfg.output_dir = Some(dir.clone());
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = build(&cli).and_then(|cfg| {
        let files = execute(&cfg)?;
        let dir = cfg
            .output_dir
            .clone()
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR));
        write_artifacts(&dir, &files)
    });
    match result {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error[{}]: {e}", e.category());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
