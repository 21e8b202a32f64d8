//! Evaluating a run configuration and writing its CSV and SVG artifacts.

use std::fs;
use std::path::{Path, PathBuf};

use spdc_core::interference::{count_crossings, sweep, SweepVariable, VisibilityCurve};
use spdc_core::nonlinearity::{sample_state_function, StateFunctionSample};
use spdc_core::report::write_comment_block;

use crate::config::{RunConfig, SweepKind, SystemConfig};
use crate::svg;
use crate::units::display_scale;
use crate::CliError;

/// One curve of a run: abscissa in SI and the plotted observable.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesOutput {
    pub label: Option<String>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl SeriesOutput {
    pub fn crossings(&self) -> usize {
        count_crossings(&self.y)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub csv: String,
    pub series: Vec<SeriesOutput>,
    /// "V" for two-crystal sweeps, "|chi|^2" for state functions.
    pub observable: &'static str,
}

impl Evaluation {
    pub fn min_max(&self) -> (f64, f64) {
        self.series
            .iter()
            .flat_map(|s| s.y.iter().copied())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    }
}

fn utf8(buf: Vec<u8>) -> String {
    String::from_utf8(buf).expect("CSV output is ASCII")
}

/// Computes every series and renders the CSV text. Pure apart from the thread pool.
pub fn evaluate(cfg: &RunConfig) -> Result<Evaluation, CliError> {
    let mut buf = Vec::new();
    write_comment_block(&mut buf, &cfg.echo())?;
    let values = cfg.sweep.values();
    match (&cfg.system, cfg.sweep.variable) {
        (SystemConfig::TwoCrystal(base), SweepKind::System(var)) => {
            buf.extend_from_slice(VisibilityCurve::CSV_COLUMNS.as_bytes());
            buf.push(b'\n');
            let variants: Vec<(Option<String>, _)> = if cfg.series.is_empty() {
                vec![(None, base.clone())]
            } else {
                cfg.series
                    .iter()
                    .map(|s| (Some(s.label.clone()), s.apply(base)))
                    .collect()
            };
            let mut series = Vec::with_capacity(variants.len());
            for (label, tc) in variants {
                let system = tc.build()?;
                let curve = sweep(&system, var, &values, cfg.sweep.at_center, cfg.quadrature_order)?;
                if let Some(l) = &label {
                    write_comment_block(&mut buf, &format!("series: {l}"))?;
                }
                curve.write_csv_rows(&mut buf)?;
                series.push(SeriesOutput {
                    label,
                    x: curve.abscissa,
                    y: curve.value,
                });
            }
            Ok(Evaluation {
                csv: utf8(buf),
                series,
                observable: "V",
            })
        }
        (SystemConfig::StateFunction(sf), SweepKind::Delta) => {
            let profile = sf.build()?;
            let sample = sample_state_function(&profile, cfg.sweep.start, cfg.sweep.stop, cfg.sweep.steps)?;
            buf.extend_from_slice(StateFunctionSample::CSV_COLUMNS.as_bytes());
            buf.push(b'\n');
            sample.write_csv_rows(&mut buf)?;
            Ok(Evaluation {
                csv: utf8(buf),
                series: vec![SeriesOutput {
                    label: None,
                    x: sample.delta,
                    y: sample.magnitude_sq,
                }],
                observable: "|chi|^2",
            })
        }
        (_, var) => Err(CliError::Invalid(vec![crate::config::Diagnostic {
            path: "sweep.variable".to_string(),
            message: format!("{} does not apply to this system", var.name()),
        }])),
    }
}

pub fn summary(cfg: &RunConfig, ev: &Evaluation) -> String {
    let (lo, hi) = ev.min_max();
    let points = ev.series.first().map_or(0, |s| s.x.len());
    let size = if ev.series.len() > 1 {
        format!("{} series x {points} points", ev.series.len())
    } else {
        format!("{points} points")
    };
    let mut line = format!("{}: {size}", cfg.name);
    if ev.observable != "V" {
        line.push_str(&format!(", {} min {lo:.6e} max {hi:.6e}", ev.observable));
    } else {
        line.push_str(&format!(", V min {lo:.6} max {hi:.6}"));
        let c: Vec<String> = ev.series.iter().map(|s| s.crossings().to_string()).collect();
        line.push_str(&format!(", crossings {}", c.join("/")));
    }
    line
}

pub fn render_svg(cfg: &RunConfig, ev: &Evaluation) -> String {
    let dim = cfg.sweep.variable.dimension();
    let (scale, unit) = display_scale(dim);
    let x_name = match cfg.sweep.variable {
        SweepKind::System(SweepVariable::Tau) => "tau",
        SweepKind::System(SweepVariable::Separation) => "crystal separation d",
        SweepKind::System(SweepVariable::ApertureDiameter) => "aperture diameter b",
        SweepKind::System(SweepVariable::GaussianRadius) => "pupil radius r",
        SweepKind::Delta => "phase mismatch",
    };
    let at_center = cfg.sweep.at_center && cfg.sweep.variable != SweepKind::System(SweepVariable::Tau);
    let y_label = match (ev.observable, at_center, cfg.output.magnitude) {
        ("V", true, true) => "|V(LD)|",
        ("V", true, false) => "V(LD)",
        ("V", false, true) => "|V|",
        (o, _, _) => o,
    };
    let scaled: Vec<(Vec<f64>, Vec<f64>)> = ev
        .series
        .iter()
        .map(|s| {
            let x = s.x.iter().map(|v| v * scale).collect();
            let y = if cfg.output.magnitude {
                s.y.iter().map(|v| v.abs()).collect()
            } else {
                s.y.clone()
            };
            (x, y)
        })
        .collect();
    let series: Vec<svg::Series> = ev
        .series
        .iter()
        .zip(&scaled)
        .map(|(s, (x, y))| svg::Series {
            label: s.label.as_deref(),
            x,
            y,
        })
        .collect();
    svg::line_chart(&cfg.name, &format!("{x_name} ({unit})"), y_label, &series)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunReport {
    pub csv_path: PathBuf,
    pub svg_path: Option<PathBuf>,
    pub summary: String,
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| CliError::Write {
                path: parent.to_path_buf(),
                source: e,
            })?;
        }
    }
    fs::write(path, contents).map_err(|e| CliError::Write {
        path: path.to_path_buf(),
        source: e,
    })
}

/// Evaluates, then writes the CSV (always) and the SVG (when configured) under `out_dir`.
pub fn run(cfg: &RunConfig, out_dir: &Path) -> Result<RunReport, CliError> {
    let ev = evaluate(cfg)?;
    let csv_name = cfg.output.csv.clone().unwrap_or_else(|| format!("{}.csv", cfg.name));
    let csv_path = out_dir.join(csv_name);
    write(&csv_path, &ev.csv)?;
    let svg_path = match &cfg.output.svg {
        Some(name) => {
            let p = out_dir.join(name);
            write(&p, &render_svg(cfg, &ev))?;
            Some(p)
        }
        None => None,
    };
    Ok(RunReport {
        csv_path,
        svg_path,
        summary: summary(cfg, &ev),
    })
}
