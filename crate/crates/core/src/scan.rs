//! Time series of the measures, parameter sweeps, matrix-element traces and
//! detection of entanglement sudden death / birth.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measures::{self, MeasureTriple};
use crate::model::{self, DensityMatrix, Realization, SystemParams};
use crate::noise::{self, CouplingModel, StaticNoiseParams};
use crate::quadrature::QuadratureSpec;

/// Uniform grid of `steps` points from `t_start` to `t_end` inclusive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    pub t_start: f64,
    pub t_end: f64,
    pub steps: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, steps: usize) -> Result<Self> {
        let g = TimeGrid {
            t_start,
            t_end,
            steps,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_start.is_finite() && self.t_start >= 0.0) {
            return Err(Error::Domain(format!("t_start = {} must be >= 0", self.t_start)));
        }
        if !(self.t_end.is_finite() && self.t_end > self.t_start) {
            return Err(Error::Domain(format!(
                "t_end = {} must exceed t_start = {}",
                self.t_end, self.t_start
            )));
        }
        if self.steps < 2 {
            return Err(Error::Domain(format!("steps = {} must be >= 2", self.steps)));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        (self.t_end - self.t_start) / (self.steps - 1) as f64
    }

    pub fn time(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            self.t_end
        } else {
            self.t_start + self.spacing() * i as f64
        }
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.steps).map(|i| self.time(i)).collect()
    }

    /// Same span with twice the resolution (`2 steps - 1` points).
    pub fn refined(&self) -> Self {
        TimeGrid {
            steps: 2 * self.steps - 1,
            ..*self
        }
    }
}

impl Default for TimeGrid {
    fn default() -> Self {
        TimeGrid {
            t_start: 0.0,
            t_end: 8.0,
            steps: 401,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Quadrature,
    ClosedForm,
}

/// Everything that defines one measure series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesConfig {
    pub model: CouplingModel,
    pub system: SystemParams,
    pub noise: StaticNoiseParams,
    pub grid: TimeGrid,
    pub quadrature: QuadratureSpec,
}

impl SeriesConfig {
    pub fn averaged_state(&self, t: f64) -> Result<DensityMatrix> {
        noise::average(self.model, &self.system, &self.noise, t, &self.quadrature)
    }

    pub fn measures_at(&self, t: f64) -> Result<MeasureTriple> {
        MeasureTriple::of(&self.averaged_state(t)?)
    }

    pub fn concurrence_at(&self, t: f64) -> Result<f64> {
        measures::concurrence(&self.averaged_state(t)?)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasureSeries {
    pub grid: TimeGrid,
    pub model: CouplingModel,
    pub system: SystemParams,
    pub noise: StaticNoiseParams,
    pub triples: Vec<MeasureTriple>,
    pub method: Method,
}

impl MeasureSeries {
    pub fn times(&self) -> Vec<f64> {
        self.grid.times()
    }

    pub fn decoherence(&self) -> Vec<f64> {
        self.triples.iter().map(|m| m.decoherence).collect()
    }

    pub fn purity(&self) -> Vec<f64> {
        self.triples.iter().map(|m| m.purity).collect()
    }

    pub fn concurrence(&self) -> Vec<f64> {
        self.triples.iter().map(|m| m.concurrence).collect()
    }
}

/// Averaged state and measures at every grid point.
///
/// Grid points are evaluated in parallel; each point's quadrature sum runs in
/// a fixed order, so results do not depend on scheduling.
pub fn time_series(
    model: CouplingModel,
    p: &SystemParams,
    n: &StaticNoiseParams,
    g: &TimeGrid,
    q: &QuadratureSpec,
) -> Result<MeasureSeries> {
    p.validate()?;
    n.validate()?;
    g.validate()?;
    q.validate()?;
    let triples = g
        .times()
        .into_par_iter()
        .map(|t| MeasureTriple::of(&noise::average(model, p, n, t, q)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(MeasureSeries {
        grid: *g,
        model,
        system: *p,
        noise: *n,
        triples,
        method: Method::Quadrature,
    })
}

pub fn series(cfg: &SeriesConfig) -> Result<MeasureSeries> {
    time_series(cfg.model, &cfg.system, &cfg.noise, &cfg.grid, &cfg.quadrature)
}

/// Like [`time_series`] but with the averaged state taken from the closed-form
/// block entries (sign-corrected for dcm), mixed with `I/4` for `r < 1`.
pub fn time_series_closed_form(
    model: CouplingModel,
    p: &SystemParams,
    n: &StaticNoiseParams,
    g: &TimeGrid,
) -> Result<MeasureSeries> {
    p.validate()?;
    n.validate()?;
    g.validate()?;
    let triples = g
        .times()
        .into_par_iter()
        .map(|t| {
            let bell = noise::closed_form(model, n, p.lambda, t)?;
            let rho = DensityMatrix::new(model::mix_with_identity(bell.matrix(), p.r))?;
            MeasureTriple::of(&rho)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MeasureSeries {
        grid: *g,
        model,
        system: *p,
        noise: *n,
        triples,
        method: Method::ClosedForm,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EventKind {
    /// Concurrence falls to the threshold.
    Death,
    /// Concurrence rises back above the threshold.
    Birth,
}

impl EventKind {
    pub fn name(self) -> &'static str {
        match self {
            EventKind::Death => "death",
            EventKind::Birth => "birth",
        }
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EventKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "death" => Ok(EventKind::Death),
            "birth" => Ok(EventKind::Birth),
            other => Err(format!("unknown event kind `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EsdEvent {
    pub kind: EventKind,
    pub t_event: f64,
    pub bracket: (f64, f64),
}

pub const DEFAULT_THRESHOLD: f64 = 1e-6;
/// Final bracket width of the crossing refinement.
pub const BISECTION_TOLERANCE: f64 = 1e-9;
const GOLDEN_TOLERANCE: f64 = 1e-12;

/// Finds the times where `concurrence(t)` crosses `threshold`.
///
/// Two kinds of crossings are located on the grid:
/// * sign changes of `C - threshold` between neighbouring points;
/// * dips that fall below the threshold between grid points, found by
///   minimising `C` around every interior local minimum of the sampled
///   values. The averaged concurrence often touches zero at isolated
///   instants, so this second pass is what catches most events.
///
/// Each crossing is refined by bisection on the function itself down to a
/// bracket of [`BISECTION_TOLERANCE`]. Events come back time-sorted.
pub fn detect_esd_esb<F>(concurrence: F, g: &TimeGrid, threshold: f64) -> Result<Vec<EsdEvent>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    g.validate()?;
    if !(threshold > 0.0 && threshold.is_finite()) {
        return Err(Error::Domain(format!("threshold {threshold} must be > 0")));
    }
    let times = g.times();
    let values = times
        .par_iter()
        .map(|&t| concurrence(t))
        .collect::<Result<Vec<_>>>()?;
    let above: Vec<bool> = values.iter().map(|&c| c > threshold).collect();

    let mut events = Vec::new();
    for i in 0..times.len() - 1 {
        if above[i] != above[i + 1] {
            let kind = if above[i] { EventKind::Death } else { EventKind::Birth };
            events.push(bisect(&concurrence, times[i], times[i + 1], threshold, above[i], kind)?);
        }
    }
    for i in 1..times.len() - 1 {
        let is_dip = above[i - 1]
            && above[i]
            && above[i + 1]
            && values[i] < values[i - 1]
            && values[i] <= values[i + 1];
        if !is_dip {
            continue;
        }
        let (t_min, c_min) = golden_minimum(&concurrence, times[i - 1], times[i + 1])?;
        if c_min <= threshold {
            events.push(bisect(&concurrence, times[i - 1], t_min, threshold, true, EventKind::Death)?);
            events.push(bisect(&concurrence, t_min, times[i + 1], threshold, false, EventKind::Birth)?);
        }
    }
    events.sort_by(|a, b| a.t_event.total_cmp(&b.t_event));
    Ok(events)
}

/// Bisection on `C - threshold` over `[lo, hi]`; `lo_above` is the side of
/// the threshold `C(lo)` lies on.
fn bisect<F>(f: &F, mut lo: f64, mut hi: f64, threshold: f64, lo_above: bool, kind: EventKind) -> Result<EsdEvent>
where
    F: Fn(f64) -> Result<f64>,
{
    while hi - lo > BISECTION_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid)? > threshold) == lo_above {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(EsdEvent {
        kind,
        t_event: 0.5 * (lo + hi),
        bracket: (lo, hi),
    })
}

/// Golden-section search for the minimum of a unimodal `f` on `[lo, hi]`.
fn golden_minimum<F>(f: &F, mut lo: f64, mut hi: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > GOLDEN_TOLERANCE {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 <= f2 { (x1, f1) } else { (x2, f2) })
}

/// First time the function falls below `level`, refined by bisection.
///
/// `None` if it never does on the grid (including `f(t_start) < level`).
pub fn first_time_below<F>(f: F, g: &TimeGrid, level: f64) -> Result<Option<f64>>
where
    F: Fn(f64) -> Result<f64>,
{
    let times = g.times();
    let mut prev = f(times[0])?;
    if prev < level {
        return Ok(None);
    }
    for w in times.windows(2) {
        let cur = f(w[1])?;
        if cur < level && prev >= level {
            let (mut lo, mut hi) = (w[0], w[1]);
            while hi - lo > BISECTION_TOLERANCE {
                let mid = 0.5 * (lo + hi);
                if f(mid)? < level {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Ok(Some(0.5 * (lo + hi)));
        }
        prev = cur;
    }
    Ok(None)
}

/// Index of the first interior strict local maximum of `values`.
pub fn first_local_max(values: &[f64]) -> Option<usize> {
    (1..values.len().saturating_sub(1))
        .find(|&i| values[i] > values[i - 1] && values[i] >= values[i + 1])
}

/// Index of the first interior strict local minimum of `values`.
pub fn first_local_min(values: &[f64]) -> Option<usize> {
    (1..values.len().saturating_sub(1))
        .find(|&i| values[i] < values[i - 1] && values[i] <= values[i + 1])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SweepAxis {
    Lambda,
    DeltaM,
    DeltaO,
    R,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Lambda => "lambda",
            SweepAxis::DeltaM => "delta_m",
            SweepAxis::DeltaO => "delta_o",
            SweepAxis::R => "r",
        }
    }

    /// `base` with this axis set to `value`, validated.
    pub fn apply(self, base: &SeriesConfig, value: f64) -> Result<SeriesConfig> {
        let mut cfg = *base;
        match self {
            SweepAxis::Lambda => cfg.system.lambda = value,
            SweepAxis::DeltaM => cfg.noise.delta_m = value,
            SweepAxis::DeltaO => cfg.noise.delta_o = value,
            SweepAxis::R => cfg.system.r = value,
        }
        cfg.system.validate()?;
        cfg.noise.validate()?;
        Ok(cfg)
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepAxis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lambda" => Ok(SweepAxis::Lambda),
            "delta_m" => Ok(SweepAxis::DeltaM),
            "delta_o" => Ok(SweepAxis::DeltaO),
            "r" => Ok(SweepAxis::R),
            other => Err(Error::UnknownAxis(other.to_string())),
        }
    }
}

/// One series per value of `axis`, everything else held at `base`.
pub fn sweep(axis: &str, values: &[f64], base: &SeriesConfig) -> Result<Vec<MeasureSeries>> {
    sweep_axis(axis.parse()?, values, base)
}

pub fn sweep_axis(axis: SweepAxis, values: &[f64], base: &SeriesConfig) -> Result<Vec<MeasureSeries>> {
    values
        .iter()
        .map(|&v| series(&axis.apply(base, v)?))
        .collect()
}

/// One-based `(row, col)` index into a 4×4 density matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MatrixElement {
    row: usize,
    col: usize,
}

impl MatrixElement {
    pub fn new(row: usize, col: usize) -> Result<Self> {
        if (1..=4).contains(&row) && (1..=4).contains(&col) {
            Ok(MatrixElement { row, col })
        } else {
            Err(Error::Domain(format!("element ({row},{col}) outside 1..=4")))
        }
    }

    pub fn row(&self) -> usize {
        self.row
    }

    pub fn col(&self) -> usize {
        self.col
    }

    fn zero_based(&self) -> (usize, usize) {
        (self.row - 1, self.col - 1)
    }
}

impl Default for MatrixElement {
    /// The Bell-pair coherence `ρ14`.
    fn default() -> Self {
        MatrixElement { row: 1, col: 4 }
    }
}

impl fmt::Display for MatrixElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.row, self.col)
    }
}

impl FromStr for MatrixElement {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (r, c) = s
            .split_once(',')
            .ok_or_else(|| Error::Domain(format!("element `{s}` must look like `row,col`")))?;
        let parse = |x: &str| {
            x.trim()
                .parse::<usize>()
                .map_err(|_| Error::Domain(format!("element `{s}` must look like `row,col`")))
        };
        MatrixElement::new(parse(r)?, parse(c)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TraceSource {
    /// A single realization with fixed field values (no averaging).
    Noiseless(Realization),
    Averaged(CouplingModel, StaticNoiseParams),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FluctuationTrace {
    pub grid: TimeGrid,
    pub element: MatrixElement,
    pub re_values: Vec<f64>,
    pub im_values: Vec<f64>,
}

/// Real and imaginary part of one density-matrix element along the grid.
pub fn fluctuation_trace(
    p: &SystemParams,
    source: &TraceSource,
    element: MatrixElement,
    g: &TimeGrid,
    q: &QuadratureSpec,
) -> Result<FluctuationTrace> {
    p.validate()?;
    g.validate()?;
    let idx = element.zero_based();
    let values = g
        .times()
        .into_par_iter()
        .map(|t| {
            let rho = match source {
                TraceSource::Noiseless(real) => model::evolve_realization(p, *real, t)?,
                TraceSource::Averaged(m, n) => noise::average(*m, p, n, t, q)?,
            };
            Ok(rho[idx])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FluctuationTrace {
        grid: *g,
        element,
        re_values: values.iter().map(|z| z.re).collect(),
        im_values: values.iter().map(|z| z.im).collect(),
    })
}
