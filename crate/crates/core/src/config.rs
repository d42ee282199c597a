//! Run configuration: a line-oriented `key = value` format with `[section]`
//! headers.
//!
//! ```text
//! subcommand = sweep
//! model = ccm
//!
//! [system]
//! lambda = 0.5
//!
//! [sweep]
//! axis = delta_m
//! values = 1, 2, 3
//! ```
//!
//! Blank lines and lines starting with `#` or `;` are ignored. Every key is
//! optional except `subcommand`; unknown sections and keys are errors.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::noise::{CouplingModel, StaticNoiseParams};
use crate::quadrature::{QuadratureRule, QuadratureSpec};
use crate::scan::{MatrixElement, SeriesConfig, SweepAxis, TimeGrid, DEFAULT_THRESHOLD};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Subcommand {
    Evolve,
    Sweep,
    Compare,
    Detect,
    Trace,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Evolve => "evolve",
            Subcommand::Sweep => "sweep",
            Subcommand::Compare => "compare",
            Subcommand::Detect => "detect",
            Subcommand::Trace => "trace",
        }
    }
}

impl FromStr for Subcommand {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "evolve" => Ok(Subcommand::Evolve),
            "sweep" => Ok(Subcommand::Sweep),
            "compare" => Ok(Subcommand::Compare),
            "detect" => Ok(Subcommand::Detect),
            "trace" => Ok(Subcommand::Trace),
            other => Err(format!(
                "unknown subcommand `{other}` (expected evolve, sweep, compare, detect or trace)"
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceKind {
    Noiseless,
    Ccm,
    Dcm,
}

impl TraceKind {
    pub fn name(self) -> &'static str {
        match self {
            TraceKind::Noiseless => "noiseless",
            TraceKind::Ccm => "ccm",
            TraceKind::Dcm => "dcm",
        }
    }
}

impl FromStr for TraceKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "noiseless" => Ok(TraceKind::Noiseless),
            "ccm" => Ok(TraceKind::Ccm),
            "dcm" => Ok(TraceKind::Dcm),
            other => Err(format!("unknown trace source `{other}` (expected noiseless, ccm or dcm)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceSpec {
    pub source: TraceKind,
    pub element: MatrixElement,
    /// Field values of the noiseless realization.
    pub delta_a: f64,
    pub delta_b: f64,
}

impl Default for TraceSpec {
    fn default() -> Self {
        TraceSpec {
            source: TraceKind::Noiseless,
            element: MatrixElement::default(),
            delta_a: 1.0,
            delta_b: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub subcommand: Subcommand,
    pub model: CouplingModel,
    pub system: SystemParams,
    pub noise: StaticNoiseParams,
    pub grid: TimeGrid,
    pub quadrature: QuadratureSpec,
    pub sweep: Option<SweepSpec>,
    pub threshold: f64,
    pub trace: TraceSpec,
    pub compare_times: Vec<f64>,
    pub output_dir: PathBuf,
    pub emit_svg: bool,
}

impl RunConfig {
    /// All defaults for `subcommand`.
    pub fn new(subcommand: Subcommand) -> Self {
        RunConfig {
            subcommand,
            model: CouplingModel::Ccm,
            system: SystemParams::default(),
            noise: StaticNoiseParams::default(),
            grid: TimeGrid::default(),
            quadrature: QuadratureSpec::default(),
            sweep: None,
            threshold: DEFAULT_THRESHOLD,
            trace: TraceSpec::default(),
            compare_times: vec![2.0],
            output_dir: PathBuf::from("out"),
            emit_svg: true,
        }
    }

    pub fn series_config(&self) -> SeriesConfig {
        SeriesConfig {
            model: self.model,
            system: self.system,
            noise: self.noise,
            grid: self.grid,
            quadrature: self.quadrature,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let v = |ok: bool, key: &str, msg: String| if ok { Ok(()) } else { Err(Error::validation(key, msg)) };
        let s = &self.system;
        v(s.eps_a.is_finite(), "eps_a", format!("{} is not finite", s.eps_a))?;
        v(s.eps_b.is_finite(), "eps_b", format!("{} is not finite", s.eps_b))?;
        check_lambda(s.lambda)?;
        check_r(s.r)?;
        check_delta_m(self.noise.delta_m)?;
        v(self.noise.delta_o.is_finite(), "delta_o", format!("{} is not finite", self.noise.delta_o))?;

        let g = &self.grid;
        v(
            g.t_start.is_finite() && g.t_start >= 0.0,
            "t_start",
            format!("{} must be >= 0", g.t_start),
        )?;
        v(
            g.t_end.is_finite() && g.t_end > g.t_start,
            "t_end",
            format!("{} must exceed t_start = {}", g.t_end, g.t_start),
        )?;
        v(g.steps >= 2, "steps", format!("{} must be >= 2", g.steps))?;
        self.quadrature
            .validate()
            .map_err(|e| Error::validation("nodes", strip_prefix(e)))?;
        v(
            self.threshold.is_finite() && self.threshold > 0.0,
            "threshold",
            format!("{} must be > 0", self.threshold),
        )?;
        v(self.trace.delta_a.is_finite(), "delta_a", "must be finite".into())?;
        v(self.trace.delta_b.is_finite(), "delta_b", "must be finite".into())?;
        for &t in &self.compare_times {
            v(t.is_finite() && t > 0.0, "times", format!("{t} must be > 0"))?;
        }
        v(!self.compare_times.is_empty(), "times", "needs at least one time".into())?;
        v(
            !self.output_dir.as_os_str().is_empty(),
            "dir",
            "output directory is empty".into(),
        )?;

        match &self.sweep {
            Some(sw) => {
                v(!sw.values.is_empty(), "values", "needs at least one value".into())?;
                for &x in &sw.values {
                    match sw.axis {
                        SweepAxis::Lambda => check_lambda(x),
                        SweepAxis::DeltaM => check_delta_m(x),
                        SweepAxis::DeltaO => v(x.is_finite(), "delta_o", format!("{x} is not finite")),
                        SweepAxis::R => check_r(x),
                    }
                    .map_err(|e| match e {
                        Error::Validation { message, .. } => Error::validation("values", message),
                        other => other,
                    })?;
                }
            }
            None => v(
                self.subcommand != Subcommand::Sweep,
                "axis",
                "sweep needs a [sweep] section with axis and values".into(),
            )?,
        }
        Ok(())
    }

    /// The effective configuration in the input format, every key spelled
    /// out. Parsing the result gives back an equal `RunConfig`.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let f = |x: f64| format!("{x:?}");
        let _ = writeln!(s, "subcommand = {}", self.subcommand.name());
        let _ = writeln!(s, "model = {}", self.model.name());
        let _ = writeln!(s, "\n[system]");
        let _ = writeln!(s, "eps_a = {}", f(self.system.eps_a));
        let _ = writeln!(s, "eps_b = {}", f(self.system.eps_b));
        let _ = writeln!(s, "lambda = {}", f(self.system.lambda));
        let _ = writeln!(s, "r = {}", f(self.system.r));
        let _ = writeln!(s, "\n[noise]");
        let _ = writeln!(s, "delta_m = {}", f(self.noise.delta_m));
        let _ = writeln!(s, "delta_o = {}", f(self.noise.delta_o));
        let _ = writeln!(s, "\n[grid]");
        let _ = writeln!(s, "t_start = {}", f(self.grid.t_start));
        let _ = writeln!(s, "t_end = {}", f(self.grid.t_end));
        let _ = writeln!(s, "steps = {}", self.grid.steps);
        let _ = writeln!(s, "\n[quadrature]");
        let _ = writeln!(s, "rule = {}", self.quadrature.rule.name());
        let _ = writeln!(s, "nodes = {}", self.quadrature.nodes);
        let _ = writeln!(s, "seed = {}", self.quadrature.seed);
        if let Some(sw) = &self.sweep {
            let _ = writeln!(s, "\n[sweep]");
            let _ = writeln!(s, "axis = {}", sw.axis.name());
            let values: Vec<String> = sw.values.iter().map(|&x| f(x)).collect();
            let _ = writeln!(s, "values = {}", values.join(", "));
        }
        let _ = writeln!(s, "\n[detect]");
        let _ = writeln!(s, "threshold = {}", f(self.threshold));
        let _ = writeln!(s, "\n[trace]");
        let _ = writeln!(s, "source = {}", self.trace.source.name());
        let _ = writeln!(s, "element = {}", self.trace.element);
        let _ = writeln!(s, "delta_a = {}", f(self.trace.delta_a));
        let _ = writeln!(s, "delta_b = {}", f(self.trace.delta_b));
        let _ = writeln!(s, "\n[compare]");
        let times: Vec<String> = self.compare_times.iter().map(|&x| f(x)).collect();
        let _ = writeln!(s, "times = {}", times.join(", "));
        let _ = writeln!(s, "\n[output]");
        let _ = writeln!(s, "dir = {}", self.output_dir.display());
        let _ = writeln!(s, "emit_svg = {}", self.emit_svg);
        s
    }
}

fn strip_prefix(e: Error) -> String {
    match e {
        Error::Quadrature(m) | Error::Domain(m) => m,
        other => other.to_string(),
    }
}

fn check_lambda(x: f64) -> Result<()> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(Error::validation("lambda", format!("{x} must be >= 0")))
    }
}

fn check_r(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::validation("r", format!("{x} must lie in [0, 1]")))
    }
}

fn check_delta_m(x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::validation("delta_m", format!("{x} must be > 0")))
    }
}

const SECTIONS: [(&str, &[&str]); 10] = [
    ("", &["subcommand", "model"]),
    ("system", &["eps_a", "eps_b", "lambda", "r"]),
    ("noise", &["delta_m", "delta_o"]),
    ("grid", &["t_start", "t_end", "steps"]),
    ("quadrature", &["rule", "nodes", "seed"]),
    ("sweep", &["axis", "values"]),
    ("detect", &["threshold"]),
    ("trace", &["source", "element", "delta_a", "delta_b"]),
    ("compare", &["times"]),
    ("output", &["dir", "emit_svg"]),
];

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut section = "";
    let mut seen: HashSet<(String, String)> = HashSet::new();
    let mut entries: Vec<(usize, &'static str, &'static str, &str)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| parse_err(format!("unterminated section header `{line}`")))?
                .trim();
            section = SECTIONS
                .iter()
                .skip(1)
                .map(|(s, _)| *s)
                .find(|s| *s == name)
                .ok_or_else(|| parse_err(format!("unknown section [{name}]")))?;
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| parse_err(format!("expected `key = value`, got `{line}`")))?;
        let (key, value) = (key.trim(), value.trim());
        let keys = SECTIONS.iter().find(|(s, _)| *s == section).map(|(_, k)| *k).unwrap_or(&[]);
        let key = keys.iter().copied().find(|k| *k == key).ok_or_else(|| {
            if section.is_empty() {
                parse_err(format!("unknown top-level key `{key}`"))
            } else {
                parse_err(format!("unknown key `{key}` in [{section}]"))
            }
        })?;
        if !seen.insert((section.to_string(), key.to_string())) {
            return Err(parse_err(format!("duplicate key `{key}`")));
        }
        entries.push((line_no, section, key, value));
    }

    let subcommand = entries
        .iter()
        .find(|e| e.1.is_empty() && e.2 == "subcommand")
        .ok_or_else(|| Error::validation("subcommand", "missing"))
        .and_then(|e| parse_value::<Subcommand>(e.0, e.2, e.3))?;
    let mut cfg = RunConfig::new(subcommand);
    let mut axis = None;
    let mut values = None;

    for &(line, section, key, value) in &entries {
        let real = || parse_real(line, key, value);
        match (section, key) {
            ("", "subcommand") => {}
            ("", "model") => cfg.model = parse_value(line, key, value)?,
            ("system", "eps_a") => cfg.system.eps_a = real()?,
            ("system", "eps_b") => cfg.system.eps_b = real()?,
            ("system", "lambda") => cfg.system.lambda = real()?,
            ("system", "r") => cfg.system.r = real()?,
            ("noise", "delta_m") => cfg.noise.delta_m = real()?,
            ("noise", "delta_o") => cfg.noise.delta_o = real()?,
            ("grid", "t_start") => cfg.grid.t_start = real()?,
            ("grid", "t_end") => cfg.grid.t_end = real()?,
            ("grid", "steps") => cfg.grid.steps = parse_value(line, key, value)?,
            ("quadrature", "rule") => cfg.quadrature.rule = parse_value::<QuadratureRule>(line, key, value)?,
            ("quadrature", "nodes") => cfg.quadrature.nodes = parse_value(line, key, value)?,
            ("quadrature", "seed") => cfg.quadrature.seed = parse_value(line, key, value)?,
            ("sweep", "axis") => {
                axis = Some(value.parse::<SweepAxis>().map_err(|e| Error::validation("axis", e.to_string()))?)
            }
            ("sweep", "values") => values = Some(parse_list(line, key, value)?),
            ("detect", "threshold") => cfg.threshold = real()?,
            ("trace", "source") => cfg.trace.source = parse_value(line, key, value)?,
            ("trace", "element") => {
                cfg.trace.element = value
                    .parse::<MatrixElement>()
                    .map_err(|e| Error::validation("element", strip_prefix(e)))?
            }
            ("trace", "delta_a") => cfg.trace.delta_a = real()?,
            ("trace", "delta_b") => cfg.trace.delta_b = real()?,
            ("compare", "times") => cfg.compare_times = parse_list(line, key, value)?,
            ("output", "dir") => cfg.output_dir = PathBuf::from(value),
            ("output", "emit_svg") => cfg.emit_svg = parse_value(line, key, value)?,
            _ => unreachable!("key table and match arms disagree on {section}.{key}"),
        }
    }
    cfg.sweep = match (axis, values) {
        (Some(axis), Some(values)) => Some(SweepSpec { axis, values }),
        (None, None) => None,
        (None, Some(_)) => return Err(Error::validation("axis", "missing while `values` is set")),
        (Some(_), None) => return Err(Error::validation("values", "missing while `axis` is set")),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn parse_value<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value.parse::<T>().map_err(|e| Error::Parse {
        line,
        message: format!("`{key}`: cannot parse `{value}`: {e}"),
    })
}

fn parse_real(line: usize, key: &str, value: &str) -> Result<f64> {
    let x: f64 = parse_value(line, key, value)?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::validation(key, format!("{value} is not finite")))
    }
}

fn parse_list(line: usize, key: &str, value: &str) -> Result<Vec<f64>> {
    if value.is_empty() {
        return Ok(Vec::new());
    }
    value.split(',').map(|v| parse_real(line, key, v.trim())).collect()
}
