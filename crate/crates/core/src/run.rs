//! Executes a [`RunConfig`] and writes its files.

use std::fs;
use std::path::{Path, PathBuf};

use crate::config::{RunConfig, Subcommand, TraceKind};
use crate::error::{Error, Result};
use crate::model::Realization;
use crate::noise::CouplingModel;
use crate::output;
use crate::reconcile::{ParameterPoint, ReconciliationReport};
use crate::scan::{self, MeasureSeries, TraceSource};

pub const EFFECTIVE_CONFIG: &str = "effective.ini";

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunSummary {
    /// Every file written, in order.
    pub files: Vec<PathBuf>,
}

struct Writer<'a> {
    dir: &'a Path,
    files: Vec<PathBuf>,
}

impl Writer<'_> {
    fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
        self.files.push(path);
        Ok(())
    }

    fn series(&mut self, stem: &str, title: &str, s: &MeasureSeries, svg: bool) -> Result<()> {
        self.write(&format!("{stem}.csv"), &output::series_csv(s))?;
        if svg {
            self.write(&format!("{stem}.svg"), &output::series_svg(title, s))?;
        }
        Ok(())
    }
}

pub fn run(cfg: &RunConfig) -> Result<RunSummary> {
    cfg.validate()?;
    let dir = cfg.output_dir.as_path();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut w = Writer { dir, files: Vec::new() };
    w.write(EFFECTIVE_CONFIG, &cfg.dump())?;

    let base = cfg.series_config();
    let model = cfg.model.name();
    let p = &cfg.system;
    let title = format!(
        "{model}: λ={} Δm={} Δo={} r={}",
        p.lambda, cfg.noise.delta_m, cfg.noise.delta_o, p.r
    );

    match cfg.subcommand {
        Subcommand::Evolve => {
            let s = scan::series(&base)?;
            w.series(&format!("series_{model}"), &title, &s, cfg.emit_svg)?;
        }
        Subcommand::Sweep => {
            let sw = cfg.sweep.as_ref().expect("validated sweep config has a [sweep] section");
            let all = scan::sweep_axis(sw.axis, &sw.values, &base)?;
            for (i, (s, v)) in all.iter().zip(&sw.values).enumerate() {
                let title = format!("{model}: {}={v}", sw.axis);
                w.series(&format!("sweep_{}_{i}", sw.axis), &title, s, cfg.emit_svg)?;
            }
        }
        Subcommand::Detect => {
            let s = scan::series(&base)?;
            w.series(&format!("series_{model}"), &title, &s, cfg.emit_svg)?;
            let events = scan::detect_esd_esb(|t| base.concurrence_at(t), &cfg.grid, cfg.threshold)?;
            w.write("events.csv", &output::events_csv(&events))?;
        }
        Subcommand::Compare => {
            let points: Vec<ParameterPoint> = cfg
                .compare_times
                .iter()
                .map(|&t| ParameterPoint {
                    lambda: p.lambda,
                    delta_m: cfg.noise.delta_m,
                    delta_o: cfg.noise.delta_o,
                    t,
                })
                .collect();
            let report = ReconciliationReport::build(&points, &cfg.quadrature)?;
            w.write("reconciliation.csv", &report.to_csv())?;
        }
        Subcommand::Trace => {
            let source = match cfg.trace.source {
                TraceKind::Noiseless => TraceSource::Noiseless(Realization::new(cfg.trace.delta_a, cfg.trace.delta_b)),
                TraceKind::Ccm => TraceSource::Averaged(CouplingModel::Ccm, cfg.noise),
                TraceKind::Dcm => TraceSource::Averaged(CouplingModel::Dcm, cfg.noise),
            };
            let tr = scan::fluctuation_trace(p, &source, cfg.trace.element, &cfg.grid, &cfg.quadrature)?;
            w.write("trace.csv", &output::trace_csv(&tr))?;
            if cfg.emit_svg {
                let title = format!("{} trace of ρ{}: λ={}", cfg.trace.source.name(), cfg.trace.element, p.lambda);
                w.write("trace.svg", &output::trace_svg(&title, &tr))?;
            }
        }
    }
    Ok(RunSummary { files: w.files })
}
