//! Flat `key=value` run configuration.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use deltalwi_core::{ConfigurationKind, FluxQubitDrive, FluxQubitParams};
use thiserror::Error;

use crate::output::Format;

/// Every key a run configuration may contain.
pub const KEYS: &[&str] = &[
    "command",
    "kind",
    "phi",
    "g_coupling",
    "g_probe",
    "g_aux",
    "detuning",
    "d_min",
    "d_max",
    "points",
    "gamma1",
    "gamma2",
    "gamma3",
    "g_max",
    "bracket_lo",
    "bracket_hi",
    "t_final",
    "rel_tol",
    "t01",
    "t02",
    "t12",
    "gamma_ref",
    "t_ref",
    "out",
    "format",
    "plot",
];

/// Where a value came from, for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Line(usize),
    Flag,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Line(n) => write!(f, "line {n}"),
            Origin::Flag => f.write_str("command line"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected key=value, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("{origin}: unknown key {key:?}")]
    UnknownKey { origin: Origin, key: String },
    #[error("line {line}: key {key} given twice")]
    Duplicate { line: usize, key: String },
    #[error("{origin}: key {key}: {message}")]
    Value { origin: Origin, key: String, message: String },
    #[error("no command given")]
    NoCommand,
    #[error("missing required key {key} for command {command}")]
    Missing { key: &'static str, command: Command },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub value: String,
    pub origin: Origin,
}

/// Raw key/value pairs, before typing.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Entries(BTreeMap<String, Entry>);

impl Entries {
    /// Parses a document: one `key=value` per line, `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut map = BTreeMap::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(ConfigError::Syntax { line, text: content.to_string() });
            };
            let key = key.trim();
            check_key(key, Origin::Line(line))?;
            let entry = Entry { value: value.trim().to_string(), origin: Origin::Line(line) };
            if map.insert(key.to_string(), entry).is_some() {
                return Err(ConfigError::Duplicate { line, key: key.to_string() });
            }
        }
        Ok(Self(map))
    }

    /// Sets a value given on the command line; it replaces any file value.
    pub fn set_flag(&mut self, key: &str, value: impl Into<String>) -> Result<(), ConfigError> {
        check_key(key, Origin::Flag)?;
        self.0.insert(key.to_string(), Entry { value: value.into(), origin: Origin::Flag });
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.0.get(key)
    }

    fn parsed<T>(&self, key: &str, parse: impl Fn(&str) -> Result<T, String>) -> Result<Option<T>, ConfigError> {
        self.get(key)
            .map(|e| {
                parse(&e.value).map_err(|message| ConfigError::Value {
                    origin: e.origin,
                    key: key.to_string(),
                    message,
                })
            })
            .transpose()
    }

    fn number(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        self.parsed(key, parse_number)
    }
}

fn check_key(key: &str, origin: Origin) -> Result<(), ConfigError> {
    if KEYS.contains(&key) {
        Ok(())
    } else {
        Err(ConfigError::UnknownKey { origin, key: key.to_string() })
    }
}

fn parse_number(text: &str) -> Result<f64, String> {
    let v: f64 = text.parse().map_err(|_| format!("malformed number {text:?}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("value must be finite, got {text:?}"))
    }
}

/// Radians, or a multiple of π written as `pi`, `-pi/2`, `3pi/2`, `3*pi/2`.
pub fn parse_phase(text: &str) -> Result<f64, String> {
    let t = text.trim().to_ascii_lowercase().replace('π', "pi");
    let Some(at) = t.find("pi") else {
        return parse_number(text);
    };
    let malformed = || format!("malformed phase {text:?}");
    let (head, tail) = (t[..at].trim(), t[at + 2..].trim());
    let (sign, head) = match head.strip_prefix('-') {
        Some(rest) => (-1.0, rest.trim()),
        None => (1.0, head.strip_prefix('+').unwrap_or(head).trim()),
    };
    let head = head.strip_suffix('*').unwrap_or(head).trim();
    let numerator = if head.is_empty() { 1.0 } else { head.parse::<f64>().map_err(|_| malformed())? };
    let denominator = match tail.strip_prefix('/') {
        Some(d) => d.trim().parse::<f64>().map_err(|_| malformed())?,
        None if tail.is_empty() => 1.0,
        None => return Err(malformed()),
    };
    let v = sign * numerator * PI / denominator;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(malformed())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Steady,
    Spectrum,
    Optimize,
    AuxScan,
    Evolve,
    Chiral,
    Fluxqubit,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Steady,
        Command::Spectrum,
        Command::Optimize,
        Command::AuxScan,
        Command::Evolve,
        Command::Chiral,
        Command::Fluxqubit,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Command::Steady => "steady",
            Command::Spectrum => "spectrum",
            Command::Optimize => "optimize",
            Command::AuxScan => "aux-scan",
            Command::Evolve => "evolve",
            Command::Chiral => "chiral",
            Command::Fluxqubit => "fluxqubit",
        }
    }

    /// Keys that must be present for this command.
    pub fn required(&self) -> &'static [&'static str] {
        match self {
            Command::Steady => &["kind", "phi", "g_coupling", "g_probe", "g_aux", "detuning"],
            Command::Spectrum | Command::Chiral => {
                &["kind", "phi", "g_coupling", "g_probe", "g_aux", "d_min", "d_max", "points"]
            }
            Command::Optimize => &["kind", "phi", "g_coupling", "g_probe", "detuning", "bracket_lo", "bracket_hi"],
            Command::AuxScan => &["kind", "phi", "g_coupling", "g_probe", "detuning", "g_max", "points"],
            Command::Evolve => &["kind", "phi", "g_coupling", "g_probe", "g_aux", "detuning", "t_final", "points"],
            Command::Fluxqubit => &[],
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Command::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| {
            let names: Vec<_> = Command::ALL.iter().map(Command::name).collect();
            format!("unknown command {s:?}, expected one of {}", names.join(", "))
        })
    }
}

/// A fully typed run. Fields a command does not use keep their defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub kind: ConfigurationKind,
    pub phi: f64,
    pub g_coupling: f64,
    pub g_probe: f64,
    pub g_aux: f64,
    pub detuning: f64,
    pub d_min: f64,
    pub d_max: f64,
    pub points: usize,
    /// Decay rates γ1 (3→1), γ2 (2→1), γ3 (3→2) in units of γ.
    pub gammas: [f64; 3],
    pub g_max: f64,
    pub bracket: (f64, f64),
    pub t_final: f64,
    pub rel_tol: f64,
    pub flux: FluxQubitParams,
    pub out: Option<PathBuf>,
    pub format: Format,
    /// Also write a gnuplot script next to the output.
    pub plot: bool,
}

impl RunConfig {
    pub fn from_entries(entries: &Entries) -> Result<Self, ConfigError> {
        let command = entries.parsed("command", |s| s.parse::<Command>())?.ok_or(ConfigError::NoCommand)?;
        // the flux-qubit command defaults to the quoted superconducting example
        let flux_drive = FluxQubitDrive::default();
        let flux_default = FluxQubitParams::default();
        let num = |key: &str, default: f64| entries.number(key).map(|v| v.unwrap_or(default));
        let fluxqubit = command == Command::Fluxqubit;

        let points = entries
            .parsed("points", |s| s.parse::<usize>().map_err(|_| format!("malformed count {s:?}")))?
            .unwrap_or(1001);
        let kind = entries
            .parsed("kind", |s| s.parse::<ConfigurationKind>().map_err(|e| e.to_string()))?
            .unwrap_or(flux_drive.kind);
        let format = entries.parsed("format", |s| s.parse::<Format>())?.unwrap_or(Format::Csv);
        let plot = entries
            .parsed("plot", |s| match s {
                "true" | "yes" | "1" => Ok(true),
                "false" | "no" | "0" => Ok(false),
                _ => Err(format!("expected true or false, got {s:?}")),
            })?
            .unwrap_or(false);
        let pick = |value: f64, flux_value: f64| if fluxqubit { flux_value } else { value };

        // malformed values are reported before missing ones
        let config = Self {
            command,
            kind,
            phi: entries.parsed("phi", parse_phase)?.unwrap_or(pick(0.0, flux_drive.loop_phase)),
            g_coupling: num("g_coupling", flux_drive.g_coupling)?,
            g_probe: num("g_probe", flux_drive.g_probe)?,
            g_aux: num("g_aux", pick(0.0, flux_drive.g_aux))?,
            detuning: num("detuning", pick(0.0, flux_drive.detuning))?,
            d_min: num("d_min", -20.0)?,
            d_max: num("d_max", 20.0)?,
            points,
            gammas: [num("gamma1", 1.0)?, num("gamma2", 1.0)?, num("gamma3", 1.0)?],
            g_max: num("g_max", 12.0)?,
            bracket: (num("bracket_lo", 0.0)?, num("bracket_hi", 3.0)?),
            t_final: num("t_final", 50.0)?,
            rel_tol: num("rel_tol", 1e-10)?,
            flux: FluxQubitParams {
                t01: num("t01", flux_default.t01)?,
                t02: num("t02", flux_default.t02)?,
                t12: num("t12", flux_default.t12)?,
                gamma_ref: num("gamma_ref", flux_default.gamma_ref)?,
                t_ref: num("t_ref", flux_default.t_ref)?,
            },
            out: entries.get("out").map(|e| PathBuf::from(&e.value)),
            format,
            plot,
        };
        match command.required().iter().find(|key| entries.get(key).is_none()) {
            Some(key) => Err(ConfigError::Missing { key, command }),
            None => Ok(config),
        }
    }

    /// The parameters that determine this command's output, in key order.
    pub fn params(&self) -> Vec<(&'static str, ParamValue)> {
        use ParamValue::{Num, Text};
        let mut p = vec![("command", Text(self.command.name().into()))];
        let drive = |p: &mut Vec<_>, with_aux: bool| {
            p.push(("kind", Text(self.kind.label().into())));
            p.push(("phi", Num(self.phi)));
            p.push(("g_coupling", Num(self.g_coupling)));
            p.push(("g_probe", Num(self.g_probe)));
            if with_aux {
                p.push(("g_aux", Num(self.g_aux)));
            }
        };
        let gammas = |p: &mut Vec<_>| {
            for (key, v) in ["gamma1", "gamma2", "gamma3"].into_iter().zip(self.gammas) {
                p.push((key, Num(v)));
            }
        };
        match self.command {
            Command::Steady => {
                drive(&mut p, true);
                p.push(("detuning", Num(self.detuning)));
                gammas(&mut p);
            }
            Command::Spectrum | Command::Chiral => {
                drive(&mut p, true);
                p.push(("d_min", Num(self.d_min)));
                p.push(("d_max", Num(self.d_max)));
                p.push(("points", Num(self.points as f64)));
                gammas(&mut p);
            }
            Command::Optimize => {
                drive(&mut p, false);
                p.push(("detuning", Num(self.detuning)));
                p.push(("bracket_lo", Num(self.bracket.0)));
                p.push(("bracket_hi", Num(self.bracket.1)));
                gammas(&mut p);
            }
            Command::AuxScan => {
                drive(&mut p, false);
                p.push(("detuning", Num(self.detuning)));
                p.push(("g_max", Num(self.g_max)));
                p.push(("points", Num(self.points as f64)));
                gammas(&mut p);
            }
            Command::Evolve => {
                drive(&mut p, true);
                p.push(("detuning", Num(self.detuning)));
                p.push(("t_final", Num(self.t_final)));
                p.push(("points", Num(self.points as f64)));
                p.push(("rel_tol", Num(self.rel_tol)));
                gammas(&mut p);
            }
            Command::Fluxqubit => {
                drive(&mut p, true);
                p.push(("detuning", Num(self.detuning)));
                p.push(("t01", Num(self.flux.t01)));
                p.push(("t02", Num(self.flux.t02)));
                p.push(("t12", Num(self.flux.t12)));
                p.push(("gamma_ref", Num(self.flux.gamma_ref)));
                p.push(("t_ref", Num(self.flux.t_ref)));
            }
        }
        p
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParamValue {
    Num(f64),
    Text(String),
}

/// Parses a configuration document into a typed run.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    RunConfig::from_entries(&Entries::parse(text)?)
}
