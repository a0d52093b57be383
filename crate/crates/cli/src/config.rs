//! INI-style experiment files.
//!
//! ```text
//! # comment
//! command = sweep
//! format = both
//!
//! [params]
//! theorem = 1
//! n = 4
//! ```
//!
//! Top-level keys are `command`, `output_dir` and `format`; everything else
//! lives in `[params]` and is checked against the command's parameter table
//! as it is read, so every error can name its line.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use crate::params::{table, Kind, Spec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Command {
    Bubble,
    Solve,
    Blowup,
    Ef,
    Mplane,
    Sweep,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::Bubble,
        Command::Solve,
        Command::Blowup,
        Command::Ef,
        Command::Mplane,
        Command::Sweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Bubble => "bubble",
            Command::Solve => "solve",
            Command::Blowup => "blowup",
            Command::Ef => "ef",
            Command::Mplane => "mplane",
            Command::Sweep => "sweep",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Both,
}

impl Format {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "csv" => Some(Self::Csv),
            "json" => Some(Self::Json),
            "both" => Some(Self::Both),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Json => "json",
            Self::Both => "both",
        }
    }

    pub fn csv(self) -> bool {
        self != Self::Json
    }

    pub fn json(self) -> bool {
        self != Self::Csv
    }
}

/// Where a value came from, for error messages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Line(usize),
    Flag,
    Default,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Line(n) => write!(f, "line {n}"),
            Origin::Flag => f.write_str("command line"),
            Origin::Default => f.write_str("config"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{origin}{}: {message}", key.as_ref().map(|k| format!(", key `{k}`")).unwrap_or_default())]
pub struct ConfigError {
    pub origin: Origin,
    pub key: Option<String>,
    pub message: String,
}

impl ConfigError {
    fn at(origin: Origin, key: Option<&str>, message: impl Into<String>) -> Self {
        Self {
            origin,
            key: key.map(str::to_string),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
    List(Vec<f64>),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(v) => write!(f, "{v}"),
            Value::Float(v) => write!(f, "{v:?}"),
            Value::Bool(v) => write!(f, "{v}"),
            Value::Text(v) => f.write_str(v),
            Value::List(v) => {
                let parts: Vec<String> = v.iter().map(|x| format!("{x:?}")).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

fn parse_value(spec: &Spec, raw: &str, origin: Origin) -> Result<Value, ConfigError> {
    let err = |m: String| ConfigError::at(origin, Some(spec.key), m);
    let float = |s: &str| -> Result<f64, ConfigError> {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| err(format!("expected a finite number, got `{s}`")))
    };
    let value = match spec.kind {
        Kind::Int { min, max } => {
            let v: i64 = raw
                .parse()
                .map_err(|_| err(format!("expected an integer, got `{raw}`")))?;
            if v < min || v > max {
                return Err(err(format!("must lie in [{min}, {max}], got {v}")));
            }
            Value::Int(v)
        }
        Kind::Float { min, max, open_min } => {
            let v = float(raw)?;
            let low_ok = if open_min { v > min } else { v >= min };
            if !low_ok || v > max {
                let lb = if open_min { '(' } else { '[' };
                return Err(err(format!("must lie in {lb}{min}, {max}], got {v}")));
            }
            Value::Float(v)
        }
        Kind::Bool => match raw {
            "true" | "yes" | "on" | "1" => Value::Bool(true),
            "false" | "no" | "off" | "0" => Value::Bool(false),
            _ => return Err(err(format!("expected true or false, got `{raw}`"))),
        },
        Kind::Choice(options) => {
            if !options.contains(&raw) {
                return Err(err(format!("expected one of {}, got `{raw}`", options.join("|"))));
            }
            Value::Text(raw.to_string())
        }
        Kind::PositiveList => {
            let items = raw
                .split(',')
                .map(|s| {
                    float(s).and_then(|x| {
                        if x > 0.0 {
                            Ok(x)
                        } else {
                            Err(err(format!("list entries must be positive, got {x}")))
                        }
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            Value::List(items)
        }
    };
    Ok(value)
}

/// A parsed and range-checked experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub command: Command,
    pub output_dir: Option<PathBuf>,
    pub format: Format,
    params: BTreeMap<&'static str, Value>,
}

impl ExperimentConfig {
    /// Defaults for every parameter of `command` that has one.
    pub fn defaults(command: Command) -> Self {
        let params = table(command)
            .iter()
            .filter_map(|s| {
                let raw = s.default?;
                Some((
                    s.key,
                    parse_value(s, raw, Origin::Default).expect("parameter table default"),
                ))
            })
            .collect();
        Self {
            command,
            output_dir: None,
            format: Format::Both,
            params,
        }
    }

    /// Sets one parameter, checking key, type and range.
    pub fn set(&mut self, key: &str, raw: &str, origin: Origin) -> Result<(), ConfigError> {
        let spec = table(self.command).iter().find(|s| s.key == key).ok_or_else(|| {
            ConfigError::at(
                origin,
                Some(key),
                format!("unknown parameter for `{}`", self.command.name()),
            )
        })?;
        let value = parse_value(spec, raw.trim(), origin)?;
        self.params.insert(spec.key, value);
        Ok(())
    }

    /// Applies `key=value` overrides from the command line.
    pub fn apply_overrides(&mut self, pairs: &[String]) -> Result<(), ConfigError> {
        for pair in pairs {
            let (k, v) = pair.split_once('=').ok_or_else(|| {
                ConfigError::at(
                    Origin::Flag,
                    None,
                    format!("override `{pair}` is not of the form key=value"),
                )
            })?;
            self.set(k.trim(), v.trim(), Origin::Flag)?;
        }
        Ok(())
    }

    /// Fails on the first required parameter that is still unset.
    pub fn check_required(&self) -> Result<(), ConfigError> {
        match table(self.command)
            .iter()
            .find(|s| s.required && !self.params.contains_key(s.key))
        {
            Some(s) => Err(ConfigError::at(
                Origin::Default,
                Some(s.key),
                "missing required parameter",
            )),
            None => Ok(()),
        }
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.params.get(key)
    }

    pub fn float(&self, key: &str) -> Option<f64> {
        match self.params.get(key)? {
            Value::Float(v) => Some(*v),
            Value::Int(v) => Some(*v as f64),
            _ => None,
        }
    }

    pub fn int(&self, key: &str) -> Option<i64> {
        match self.params.get(key)? {
            Value::Int(v) => Some(*v),
            _ => None,
        }
    }

    pub fn flag(&self, key: &str) -> Option<bool> {
        match self.params.get(key)? {
            Value::Bool(v) => Some(*v),
            _ => None,
        }
    }

    pub fn text(&self, key: &str) -> Option<&str> {
        match self.params.get(key)? {
            Value::Text(v) => Some(v),
            _ => None,
        }
    }

    pub fn list(&self, key: &str) -> Option<&[f64]> {
        match self.params.get(key)? {
            Value::List(v) => Some(v),
            _ => None,
        }
    }

    /// Every resolved setting except the output location, in a fixed order.
    pub fn echo(&self) -> Vec<(String, String)> {
        let mut out = vec![
            ("command".to_string(), self.command.name().to_string()),
            ("format".to_string(), self.format.name().to_string()),
        ];
        out.extend(self.params.iter().map(|(k, v)| (format!("params.{k}"), v.to_string())));
        out
    }
}

/// Parses an experiment file.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    #[derive(PartialEq)]
    enum Section {
        Top,
        Params,
    }
    let mut section = Section::Top;
    let mut command: Option<Command> = None;
    let mut output_dir = None;
    let mut format = None;
    let mut pending: Vec<(usize, String, String)> = Vec::new();
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let origin = Origin::Line(line_no);
        let line = raw_line.split_once('#').map_or(raw_line, |(a, _)| a).trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| ConfigError::at(origin, None, format!("malformed section header `{line}`")))?;
            section = match name.trim() {
                "params" => Section::Params,
                other => return Err(ConfigError::at(origin, None, format!("unknown section `[{other}]`"))),
            };
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| ConfigError::at(origin, None, format!("expected `key = value`, got `{line}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(ConfigError::at(origin, None, "empty key"));
        }
        let scoped = if section == Section::Params {
            format!("params.{key}")
        } else {
            key.to_string()
        };
        if let Some(first) = seen.insert(scoped, line_no) {
            return Err(ConfigError::at(
                origin,
                Some(key),
                format!("duplicate key (first set on line {first})"),
            ));
        }
        match section {
            Section::Top => match key {
                "command" => {
                    command = Some(
                        Command::parse(value)
                            .ok_or_else(|| ConfigError::at(origin, Some(key), format!("unknown command `{value}`")))?,
                    )
                }
                "output_dir" => output_dir = Some(PathBuf::from(value)),
                "format" => {
                    format = Some(Format::parse(value).ok_or_else(|| {
                        ConfigError::at(origin, Some(key), format!("expected csv|json|both, got `{value}`"))
                    })?)
                }
                _ => return Err(ConfigError::at(origin, Some(key), "unknown top-level key")),
            },
            Section::Params => pending.push((line_no, key.to_string(), value.to_string())),
        }
    }

    let command = command.ok_or_else(|| ConfigError::at(Origin::Default, Some("command"), "missing command"))?;
    let mut cfg = ExperimentConfig::defaults(command);
    cfg.output_dir = output_dir;
    if let Some(f) = format {
        cfg.format = f;
    }
    for (line_no, key, value) in pending {
        cfg.set(&key, &value, Origin::Line(line_no))?;
    }
    cfg.check_required()?;
    Ok(cfg)
}
