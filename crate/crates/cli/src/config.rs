//! Run configuration: TOML ingestion with field-path diagnostics, and the
//! canonical echo written into CSV headers.
//!
//! Every physical quantity is a string with a unit suffix ("0.5 mm");
//! dimensionless values (walkoff, chi0, duty cycle, ...) are plain numbers.

use std::fmt::{self, Write as _};

use spdc_core::apertures::{ApertureModel, OpticalGeometry};
use spdc_core::dispersion::{CrystalSpec, GapSpec, PumpSpec, RefractiveIndices, Sign};
use spdc_core::interference::{Axes, SweepVariable, TwoCrystalSystem, MIN_ORDER};
use spdc_core::nonlinearity::{Cascade, NonlinearityProfile, PeriodicProfile};
use spdc_core::{Complex64, Vec2};
use toml::{Table, Value};

use crate::presets;
use crate::units::{format_quantity, parse_quantity, Dimension};

pub const PRESET_VERSION: i64 = 1;
pub const DEFAULT_ORDER: usize = spdc_core::interference::DEFAULT_ORDER;

/// One violation, addressed by its dotted field path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub path: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub name: String,
    pub description: Option<String>,
    pub preset: Option<String>,
    pub preset_version: Option<i64>,
    pub system: SystemConfig,
    pub sweep: SweepConfig,
    pub quadrature_order: usize,
    pub output: OutputConfig,
    pub series: Vec<SeriesConfig>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SystemConfig {
    TwoCrystal(TwoCrystalConfig),
    StateFunction(StateFunctionConfig),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoCrystalConfig {
    pub axes: Axes,
    pub wavelength: f64,
    pub thickness: f64,
    pub dispersion: f64,
    pub walkoff: Vec2,
    pub chi0: f64,
    pub epsilon: Sign,
    pub gap_length: f64,
    pub gap_medium: GapMedium,
    pub d1: f64,
    pub d2: Option<f64>,
    pub f: Option<f64>,
    pub aperture: ApertureModel,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GapMedium {
    Air,
    Indices { pump: f64, degenerate: f64 },
    DeltaPrime(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateFunctionConfig {
    pub wavelength: f64,
    pub profile: ProfileConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileConfig {
    Bulk {
        thickness: f64,
        chi0: f64,
    },
    Sinusoidal {
        thickness: f64,
        period: f64,
        chi0: f64,
    },
    Fourier {
        thickness: f64,
        period: f64,
        chi0: f64,
        coefficients: Vec<Complex64>,
    },
    Poled {
        thickness: f64,
        period: f64,
        chi0: f64,
        duty_cycle: f64,
        m_max: Option<usize>,
    },
    Cascade {
        crystals: Vec<CascadeCrystal>,
        gaps: Vec<CascadeGap>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CascadeCrystal {
    pub thickness: f64,
    pub chi0: f64,
    pub epsilon: Sign,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CascadeGap {
    pub length: f64,
    pub medium: GapMedium,
    pub slope: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    System(SweepVariable),
    /// Phase mismatch Δ of a state function.
    Delta,
}

impl SweepKind {
    pub fn name(self) -> &'static str {
        match self {
            SweepKind::System(v) => v.name(),
            SweepKind::Delta => "delta",
        }
    }

    pub fn dimension(self) -> Dimension {
        match self {
            SweepKind::System(SweepVariable::Tau) => Dimension::Time,
            SweepKind::System(_) => Dimension::Length,
            SweepKind::Delta => Dimension::Wavenumber,
        }
    }

    fn parse(s: &str) -> Option<SweepKind> {
        Some(match s {
            "tau" => SweepKind::System(SweepVariable::Tau),
            "d" => SweepKind::System(SweepVariable::Separation),
            "aperture_b" => SweepKind::System(SweepVariable::ApertureDiameter),
            "r" => SweepKind::System(SweepVariable::GaussianRadius),
            "delta" => SweepKind::Delta,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub variable: SweepKind,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub at_center: bool,
}

impl SweepConfig {
    /// `steps` evenly spaced values with exact endpoints.
    pub fn values(&self) -> Vec<f64> {
        spdc_core::nonlinearity::uniform_grid(self.start, self.stop, self.steps)
    }
}

/// Artifact paths, relative to the output directory. Not echoed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OutputConfig {
    pub csv: Option<String>,
    pub svg: Option<String>,
    /// Plot |y| instead of y; the CSV is unaffected.
    pub magnitude: bool,
}

/// Per-series overrides of the two-crystal system.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesConfig {
    pub label: String,
    pub thickness: Option<f64>,
    pub axes: Option<Axes>,
    pub aperture: Option<ApertureModel>,
}

impl SeriesConfig {
    pub fn apply(&self, base: &TwoCrystalConfig) -> TwoCrystalConfig {
        let mut c = base.clone();
        if let Some(t) = self.thickness {
            c.thickness = t;
        }
        if let Some(a) = self.axes {
            c.axes = a;
        }
        if let Some(a) = self.aperture {
            c.aperture = a;
        }
        c
    }
}

fn gap_spec(length: f64, medium: GapMedium, pump: &PumpSpec) -> spdc_core::Result<GapSpec> {
    match medium {
        GapMedium::Air => GapSpec::air(length, pump),
        GapMedium::Indices { pump: np, degenerate } => {
            GapSpec::with_indices(length, pump, RefractiveIndices::Pair { pump: np, degenerate })
        }
        GapMedium::DeltaPrime(dp) => GapSpec::new(length, dp),
    }
}

impl TwoCrystalConfig {
    pub fn build(&self) -> spdc_core::Result<TwoCrystalSystem> {
        let pump = PumpSpec::new(self.wavelength)?;
        let crystal = CrystalSpec::new(self.thickness, self.dispersion, self.walkoff)?
            .with_chi0(self.chi0)
            .with_epsilon(self.epsilon);
        let gap = gap_spec(self.gap_length, self.gap_medium, &pump)?;
        let geometry = OpticalGeometry {
            d1: self.d1,
            d2: self.d2,
            f: self.f,
        };
        geometry.validate()?;
        TwoCrystalSystem::new(pump, crystal, self.axes, gap, geometry, self.aperture)
    }
}

impl StateFunctionConfig {
    pub fn build(&self) -> spdc_core::Result<NonlinearityProfile> {
        let pump = PumpSpec::new(self.wavelength)?;
        Ok(match &self.profile {
            ProfileConfig::Bulk { thickness, chi0 } => NonlinearityProfile::bulk(*thickness, *chi0)?,
            ProfileConfig::Sinusoidal {
                thickness,
                period,
                chi0,
            } => NonlinearityProfile::sinusoidal(*thickness, *period, *chi0)?,
            ProfileConfig::Fourier {
                thickness,
                period,
                chi0,
                coefficients,
            } => NonlinearityProfile::FourierPeriodic(PeriodicProfile::new(
                *thickness,
                *period,
                *chi0,
                coefficients.clone(),
            )?),
            ProfileConfig::Poled {
                thickness,
                period,
                chi0,
                duty_cycle,
                m_max,
            } => NonlinearityProfile::FourierPeriodic(PeriodicProfile::poled(
                *thickness,
                *period,
                *chi0,
                *duty_cycle,
                *m_max,
            )?),
            ProfileConfig::Cascade { crystals, gaps } => {
                // dispersion and walkoff do not enter χ̃; one shared placeholder material
                let crystals = crystals
                    .iter()
                    .map(|c| {
                        CrystalSpec::new(c.thickness, 0.0, Vec2::ZERO)
                            .map(|k| k.with_chi0(c.chi0).with_epsilon(c.epsilon))
                    })
                    .collect::<spdc_core::Result<Vec<_>>>()?;
                let gaps = gaps
                    .iter()
                    .map(|g| gap_spec(g.length, g.medium, &pump).map(|s| s.with_slope(g.slope)))
                    .collect::<spdc_core::Result<Vec<_>>>()?;
                NonlinearityProfile::Cascade(Cascade::new(crystals, gaps)?)
            }
        })
    }
}

// ---------------------------------------------------------------- reading

#[derive(Default)]
struct Diags(Vec<Diagnostic>);

impl Diags {
    fn push(&mut self, path: &str, message: impl fmt::Display) {
        self.0.push(Diagnostic {
            path: path.to_string(),
            message: message.to_string(),
        });
    }
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn type_name(v: &Value) -> &'static str {
    v.type_str()
}

/// A TOML table being consumed; keys never read are reported as unknown.
struct Section<'a> {
    path: String,
    table: &'a Table,
    seen: Vec<&'a str>,
}

impl<'a> Section<'a> {
    fn new(path: String, table: &'a Table) -> Self {
        Section {
            path,
            table,
            seen: Vec::new(),
        }
    }

    fn at(&self, key: &str) -> String {
        join(&self.path, key)
    }

    fn raw(&mut self, key: &str) -> Option<&'a Value> {
        let (k, v) = self.table.get_key_value(key)?;
        self.seen.push(k.as_str());
        Some(v)
    }

    fn has(&self, key: &str) -> bool {
        self.table.contains_key(key)
    }

    fn required<T>(&self, d: &mut Diags, key: &str, v: Option<T>) -> Option<T> {
        if v.is_none() && !self.has(key) {
            d.push(&self.at(key), "missing required field");
        }
        v
    }

    fn quantity(&mut self, d: &mut Diags, key: &str, dim: Dimension) -> Option<f64> {
        let v = self.raw(key)?;
        match v {
            Value::String(s) => match parse_quantity(s, dim) {
                Ok(x) => Some(x),
                Err(e) => {
                    d.push(&self.at(key), e);
                    None
                }
            },
            Value::Integer(_) | Value::Float(_) => {
                d.push(
                    &self.at(key),
                    format!(
                        "bare number; write the {dim} with a unit, e.g. \"{v} {}\"",
                        dim.si_unit()
                    ),
                );
                None
            }
            other => {
                d.push(
                    &self.at(key),
                    format!("expected a {dim} string, found {}", type_name(other)),
                );
                None
            }
        }
    }

    fn req_quantity(&mut self, d: &mut Diags, key: &str, dim: Dimension) -> Option<f64> {
        let v = self.quantity(d, key, dim);
        self.required(d, key, v)
    }

    fn positive(&mut self, d: &mut Diags, key: &str, dim: Dimension) -> Option<f64> {
        let v = self.req_quantity(d, key, dim)?;
        if v > 0.0 {
            Some(v)
        } else {
            d.push(&self.at(key), format!("must be positive, got {v}"));
            None
        }
    }

    fn opt_positive(&mut self, d: &mut Diags, key: &str, dim: Dimension) -> Option<Option<f64>> {
        if !self.has(key) {
            return Some(None);
        }
        self.positive(d, key, dim).map(Some)
    }

    fn number(&mut self, d: &mut Diags, key: &str) -> Option<f64> {
        match self.raw(key)? {
            Value::Float(x) if x.is_finite() => Some(*x),
            Value::Integer(i) => Some(*i as f64),
            Value::Float(x) => {
                d.push(&self.at(key), format!("must be finite, got {x}"));
                None
            }
            other => {
                d.push(&self.at(key), format!("expected a number, found {}", type_name(other)));
                None
            }
        }
    }

    fn number_or(&mut self, d: &mut Diags, key: &str, default: f64) -> Option<f64> {
        if self.has(key) {
            self.number(d, key)
        } else {
            Some(default)
        }
    }

    fn integer(&mut self, d: &mut Diags, key: &str) -> Option<i64> {
        match self.raw(key)? {
            Value::Integer(i) => Some(*i),
            other => {
                d.push(
                    &self.at(key),
                    format!("expected an integer, found {}", type_name(other)),
                );
                None
            }
        }
    }

    fn string(&mut self, d: &mut Diags, key: &str) -> Option<&'a str> {
        match self.raw(key)? {
            Value::String(s) => Some(s.as_str()),
            other => {
                d.push(&self.at(key), format!("expected a string, found {}", type_name(other)));
                None
            }
        }
    }

    fn boolean(&mut self, d: &mut Diags, key: &str) -> Option<bool> {
        match self.raw(key)? {
            Value::Boolean(b) => Some(*b),
            other => {
                d.push(
                    &self.at(key),
                    format!("expected true or false, found {}", type_name(other)),
                );
                None
            }
        }
    }

    fn sign(&mut self, d: &mut Diags, key: &str) -> Option<Sign> {
        if !self.has(key) {
            return Some(Sign::Plus);
        }
        let i = self.integer(d, key)?;
        match Sign::try_from(i) {
            Ok(s) => Some(s),
            Err(_) => {
                d.push(&self.at(key), format!("must be 1 or -1, got {i}"));
                None
            }
        }
    }

    fn axes(&mut self, d: &mut Diags, key: &str) -> Option<Axes> {
        let s = self.string(d, key)?;
        match s.parse() {
            Ok(a) => Some(a),
            Err(_) => {
                d.push(
                    &self.at(key),
                    format!("expected \"parallel\" or \"antiparallel\", got {s:?}"),
                );
                None
            }
        }
    }

    fn table(&mut self, d: &mut Diags, key: &str) -> Option<Section<'a>> {
        match self.raw(key)? {
            Value::Table(t) => Some(Section::new(self.at(key), t)),
            other => {
                d.push(&self.at(key), format!("expected a table, found {}", type_name(other)));
                None
            }
        }
    }

    fn tables(&mut self, d: &mut Diags, key: &str) -> Vec<Section<'a>> {
        let path = self.at(key);
        match self.raw(key) {
            None => Vec::new(),
            Some(Value::Array(items)) => items
                .iter()
                .enumerate()
                .filter_map(|(i, v)| match v {
                    Value::Table(t) => Some(Section::new(format!("{path}[{i}]"), t)),
                    other => {
                        d.push(
                            &format!("{path}[{i}]"),
                            format!("expected a table, found {}", type_name(other)),
                        );
                        None
                    }
                })
                .collect(),
            Some(other) => {
                d.push(
                    &path,
                    format!("expected an array of tables, found {}", type_name(other)),
                );
                Vec::new()
            }
        }
    }

    fn finish(self, d: &mut Diags) {
        for key in self.table.keys() {
            if !self.seen.contains(&key.as_str()) {
                d.push(&join(&self.path, key), "unknown key");
            }
        }
    }
}

fn read_gap_medium(s: &mut Section, d: &mut Diags) -> Option<GapMedium> {
    let choices = ["medium", "index_pump", "delta_prime"]
        .iter()
        .filter(|k| s.has(k))
        .count();
    if choices > 1 {
        d.push(
            &s.path,
            "give only one of medium, index_pump/index_degenerate or delta_prime",
        );
        // consume them so they are not reported again as unknown
        for k in ["medium", "index_pump", "index_degenerate", "delta_prime"] {
            s.raw(k);
        }
        return None;
    }
    if s.has("delta_prime") {
        return s
            .req_quantity(d, "delta_prime", Dimension::Wavenumber)
            .map(GapMedium::DeltaPrime);
    }
    if s.has("index_pump") || s.has("index_degenerate") {
        let np = s.number(d, "index_pump");
        let np = s.required(d, "index_pump", np);
        let nd = s.number(d, "index_degenerate");
        let nd = s.required(d, "index_degenerate", nd);
        return Some(GapMedium::Indices {
            pump: np?,
            degenerate: nd?,
        });
    }
    match s.string(d, "medium") {
        None | Some("air") => Some(GapMedium::Air),
        Some(other) => {
            d.push(
                &s.at("medium"),
                format!("unknown medium {other:?}; use \"air\", indices or delta_prime"),
            );
            None
        }
    }
}

fn read_aperture(mut s: Section, d: &mut Diags) -> Option<ApertureModel> {
    let model = s.string(d, "model");
    let model = s.required(d, "model", model);
    let pair = |s: &mut Section, d: &mut Diags, both: &str| -> Option<(f64, f64)> {
        let (ka, kb) = (format!("{both}_a"), format!("{both}_b"));
        if s.has(both) {
            if s.has(&ka) || s.has(&kb) {
                d.push(&s.path, format!("give either {both} or {ka}/{kb}"));
                s.raw(&ka);
                s.raw(&kb);
            }
            let v = s.positive(d, both, Dimension::Length)?;
            return Some((v, v));
        }
        let a = s.positive(d, &ka, Dimension::Length);
        let b = s.positive(d, &kb, Dimension::Length);
        Some((a?, b?))
    };
    let out = match model? {
        "delta" => Some(ApertureModel::Delta),
        "gaussian" => pair(&mut s, d, "radius").map(|(r_a, r_b)| ApertureModel::Gaussian { r_a, r_b }),
        "circular" => pair(&mut s, d, "diameter").map(|(b_a, b_b)| ApertureModel::Circular { b_a, b_b }),
        other => {
            d.push(
                &s.at("model"),
                format!("unknown aperture model {other:?}; use delta, gaussian or circular"),
            );
            None
        }
    };
    s.finish(d);
    out
}

fn read_pump(sys: &mut Section, d: &mut Diags) -> Option<f64> {
    match sys.table(d, "pump") {
        None if !sys.has("pump") => Some(spdc_core::dispersion::DEFAULT_PUMP_WAVELENGTH),
        None => None,
        Some(mut p) => {
            let w = p.positive(d, "wavelength", Dimension::Length);
            p.finish(d);
            w
        }
    }
}

fn required_table<'a>(parent: &mut Section<'a>, d: &mut Diags, key: &str) -> Option<Section<'a>> {
    let t = parent.table(d, key);
    parent.required(d, key, t)
}

fn read_walkoff(s: &mut Section, d: &mut Diags) -> Option<Vec2> {
    let azimuth = s.quantity(d, "walkoff_azimuth", Dimension::Angle);
    let path = s.at("walkoff");
    let v = match s.raw("walkoff") {
        None => {
            d.push(&path, "missing required field");
            return None;
        }
        Some(Value::Float(m)) => Vec2::polar(*m, azimuth.unwrap_or(0.0)),
        Some(Value::Integer(m)) => Vec2::polar(*m as f64, azimuth.unwrap_or(0.0)),
        Some(Value::Array(xs)) if xs.len() == 2 => {
            if s.has("walkoff_azimuth") {
                d.push(&path, "walkoff_azimuth applies only to a scalar walkoff");
                return None;
            }
            let c: Vec<Option<f64>> = xs
                .iter()
                .map(|x| match x {
                    Value::Float(f) => Some(*f),
                    Value::Integer(i) => Some(*i as f64),
                    _ => None,
                })
                .collect();
            match (c[0], c[1]) {
                (Some(x), Some(y)) => Vec2::new(x, y),
                _ => {
                    d.push(&path, "walkoff components must be numbers");
                    return None;
                }
            }
        }
        Some(other) => {
            d.push(&path, format!("expected |M| or [Mx, My], found {}", type_name(other)));
            return None;
        }
    };
    if !v.is_finite() {
        d.push(&path, "must be finite");
        return None;
    }
    Some(v)
}

fn read_two_crystal(sys: &mut Section, d: &mut Diags) -> Option<TwoCrystalConfig> {
    let axes = sys.axes(d, "axes");
    let axes = sys.required(d, "axes", axes);
    let wavelength = read_pump(sys, d);

    let crystal = required_table(sys, d, "crystal").map(|mut c| {
        let thickness = c.positive(d, "thickness", Dimension::Length);
        let dispersion = c.positive(d, "dispersion", Dimension::Dispersion);
        let walkoff = read_walkoff(&mut c, d);
        let chi0 = c.number_or(d, "chi0", 1.0);
        let epsilon = c.sign(d, "epsilon");
        c.finish(d);
        (thickness, dispersion, walkoff, chi0, epsilon)
    });

    let gap = match sys.table(d, "gap") {
        None if !sys.has("gap") => Some((Some(0.0), Some(GapMedium::Air))),
        None => None,
        Some(mut g) => {
            let length = if g.has("length") {
                g.req_quantity(d, "length", Dimension::Length).and_then(|v| {
                    if v >= 0.0 {
                        Some(v)
                    } else {
                        d.push(&g.at("length"), format!("must be non-negative, got {v}"));
                        None
                    }
                })
            } else {
                Some(0.0)
            };
            let medium = read_gap_medium(&mut g, d);
            g.finish(d);
            Some((length, medium))
        }
    };

    let geometry = required_table(sys, d, "geometry").map(|mut g| {
        let d1 = g.positive(d, "d1", Dimension::Length);
        let d2 = g.opt_positive(d, "d2", Dimension::Length);
        let f = g.opt_positive(d, "f", Dimension::Length);
        g.finish(d);
        (d1, d2, f)
    });

    let aperture = match sys.table(d, "aperture") {
        None if !sys.has("aperture") => Some(ApertureModel::Delta),
        None => None,
        Some(a) => read_aperture(a, d),
    };

    let (thickness, dispersion, walkoff, chi0, epsilon) = crystal?;
    let (gap_length, gap_medium) = gap?;
    let (d1, d2, f) = geometry?;
    Some(TwoCrystalConfig {
        axes: axes?,
        wavelength: wavelength?,
        thickness: thickness?,
        dispersion: dispersion?,
        walkoff: walkoff?,
        chi0: chi0?,
        epsilon: epsilon?,
        gap_length: gap_length?,
        gap_medium: gap_medium?,
        d1: d1?,
        d2: d2?,
        f: f?,
        aperture: aperture?,
    })
}

fn read_coefficients(s: &mut Section, d: &mut Diags) -> Option<Vec<Complex64>> {
    let path = s.at("coefficients");
    let items = match s.raw("coefficients") {
        None => {
            d.push(&path, "missing required field");
            return None;
        }
        Some(Value::Array(a)) => a,
        Some(other) => {
            d.push(&path, format!("expected [[re, im], ...], found {}", type_name(other)));
            return None;
        }
    };
    let num = |v: &Value| match v {
        Value::Float(f) if f.is_finite() => Some(*f),
        Value::Integer(i) => Some(*i as f64),
        _ => None,
    };
    let mut out = Vec::with_capacity(items.len());
    let mut ok = true;
    for (i, item) in items.iter().enumerate() {
        match item {
            Value::Array(p) if p.len() == 2 => match (num(&p[0]), num(&p[1])) {
                (Some(re), Some(im)) => out.push(Complex64::new(re, im)),
                _ => {
                    d.push(&format!("{path}[{i}]"), "components must be finite numbers");
                    ok = false;
                }
            },
            _ => {
                d.push(&format!("{path}[{i}]"), "expected a [re, im] pair");
                ok = false;
            }
        }
    }
    if ok && out.len() % 2 == 0 {
        d.push(
            &path,
            format!("needs an odd count (m = -m_max..=m_max), got {}", out.len()),
        );
        ok = false;
    }
    ok.then_some(out)
}

fn read_state_function(sys: &mut Section, d: &mut Diags) -> Option<StateFunctionConfig> {
    let wavelength = read_pump(sys, d);
    let profile = sys.string(d, "profile");
    let profile = sys.required(d, "profile", profile);

    let single = |sys: &mut Section, d: &mut Diags, kind: &str| -> Option<ProfileConfig> {
        let mut c = required_table(sys, d, "crystal")?;
        let thickness = c.positive(d, "thickness", Dimension::Length);
        let chi0 = c.number_or(d, "chi0", 1.0);
        let out = match kind {
            "bulk" => Some(ProfileConfig::Bulk {
                thickness: thickness?,
                chi0: chi0?,
            }),
            "sinusoidal" => {
                let period = c.positive(d, "period", Dimension::Length);
                Some(ProfileConfig::Sinusoidal {
                    thickness: thickness?,
                    period: period?,
                    chi0: chi0?,
                })
            }
            "fourier" => {
                let period = c.positive(d, "period", Dimension::Length);
                let coefficients = read_coefficients(&mut c, d);
                Some(ProfileConfig::Fourier {
                    thickness: thickness?,
                    period: period?,
                    chi0: chi0?,
                    coefficients: coefficients?,
                })
            }
            _ => {
                let period = c.positive(d, "period", Dimension::Length);
                let duty = c.number(d, "duty_cycle");
                let duty = c.required(d, "duty_cycle", duty).and_then(|v| {
                    if v > 0.0 && v < 1.0 {
                        Some(v)
                    } else {
                        d.push(&c.at("duty_cycle"), format!("must lie in (0, 1), got {v}"));
                        None
                    }
                });
                let m_max = if c.has("m_max") {
                    c.integer(d, "m_max").and_then(|m| {
                        if m >= 0 {
                            Some(Some(m as usize))
                        } else {
                            d.push(&c.at("m_max"), format!("must be non-negative, got {m}"));
                            None
                        }
                    })
                } else {
                    Some(None)
                };
                Some(ProfileConfig::Poled {
                    thickness: thickness?,
                    period: period?,
                    chi0: chi0?,
                    duty_cycle: duty?,
                    m_max: m_max?,
                })
            }
        };
        c.finish(d);
        out
    };

    let cfg = match profile? {
        kind @ ("bulk" | "sinusoidal" | "fourier" | "poled") => single(sys, d, kind),
        "cascade" => {
            let crystals: Vec<Option<CascadeCrystal>> = sys
                .tables(d, "crystals")
                .into_iter()
                .map(|mut c| {
                    let thickness = c.positive(d, "thickness", Dimension::Length);
                    let chi0 = c.number_or(d, "chi0", 1.0);
                    let epsilon = c.sign(d, "epsilon");
                    c.finish(d);
                    Some(CascadeCrystal {
                        thickness: thickness?,
                        chi0: chi0?,
                        epsilon: epsilon?,
                    })
                })
                .collect();
            let gaps: Vec<Option<CascadeGap>> = sys
                .tables(d, "gaps")
                .into_iter()
                .map(|mut g| {
                    let length = g.req_quantity(d, "length", Dimension::Length).and_then(|v| {
                        if v >= 0.0 {
                            Some(v)
                        } else {
                            d.push(&g.at("length"), format!("must be non-negative, got {v}"));
                            None
                        }
                    });
                    let medium = read_gap_medium(&mut g, d);
                    let slope = g.number_or(d, "delta_prime_slope", 0.0);
                    g.finish(d);
                    Some(CascadeGap {
                        length: length?,
                        medium: medium?,
                        slope: slope?,
                    })
                })
                .collect();
            if crystals.is_empty() {
                d.push(
                    &sys.at("crystals"),
                    "cascade needs at least one [[system.crystals]] entry",
                );
                return None;
            }
            if gaps.len() + 1 != crystals.len() {
                d.push(
                    &sys.at("gaps"),
                    format!(
                        "{} crystals need {} gaps, got {}",
                        crystals.len(),
                        crystals.len() - 1,
                        gaps.len()
                    ),
                );
                return None;
            }
            let crystals: Option<Vec<_>> = crystals.into_iter().collect();
            let gaps: Option<Vec<_>> = gaps.into_iter().collect();
            Some(ProfileConfig::Cascade {
                crystals: crystals?,
                gaps: gaps?,
            })
        }
        other => {
            d.push(
                &sys.at("profile"),
                format!("unknown profile {other:?}; use bulk, sinusoidal, fourier, poled or cascade"),
            );
            None
        }
    };
    Some(StateFunctionConfig {
        wavelength: wavelength?,
        profile: cfg?,
    })
}

fn read_sweep(s: &mut Section, d: &mut Diags) -> Option<SweepConfig> {
    let variable = s.string(d, "variable");
    let variable = s
        .required(d, "variable", variable)
        .and_then(|v| match SweepKind::parse(v) {
            Some(k) => Some(k),
            None => {
                d.push(
                    &s.at("variable"),
                    format!("unknown sweep variable {v:?}; use tau, d, aperture_b, r or delta"),
                );
                None
            }
        });
    let steps = s.integer(d, "steps");
    let steps = s.required(d, "steps", steps).and_then(|n| {
        if n >= 2 {
            Some(n as usize)
        } else {
            d.push(&s.at("steps"), format!("must be at least 2, got {n}"));
            None
        }
    });
    let at_center = if s.has("at_center") {
        s.boolean(d, "at_center")
    } else {
        Some(true)
    };
    let Some(variable) = variable else {
        // the range cannot be read without knowing its dimension
        s.raw("start");
        s.raw("stop");
        return None;
    };
    let dim = variable.dimension();
    let start = s.req_quantity(d, "start", dim);
    let stop = s.req_quantity(d, "stop", dim);
    let (start, stop) = (start?, stop?);
    let mut ok = true;
    if start >= stop {
        d.push(&s.at("stop"), format!("must exceed start ({start} >= {stop})"));
        ok = false;
    }
    match variable {
        SweepKind::System(SweepVariable::Separation) if start < 0.0 => {
            d.push(&s.at("start"), "separation must be non-negative");
            ok = false;
        }
        SweepKind::System(SweepVariable::ApertureDiameter | SweepVariable::GaussianRadius) if start <= 0.0 => {
            d.push(&s.at("start"), "aperture size must be positive");
            ok = false;
        }
        _ => {}
    }
    ok.then_some(())?;
    Some(SweepConfig {
        variable,
        start,
        stop,
        steps: steps?,
        at_center: at_center?,
    })
}

fn read_series(mut s: Section, d: &mut Diags) -> Option<SeriesConfig> {
    let label = s.string(d, "label");
    let label = s.required(d, "label", label);
    let thickness = s.opt_positive(d, "thickness", Dimension::Length);
    let axes = if s.has("axes") {
        s.axes(d, "axes").map(Some)
    } else {
        Some(None)
    };
    let aperture = match s.table(d, "aperture") {
        None if !s.has("aperture") => Some(None),
        None => None,
        Some(a) => read_aperture(a, d).map(Some),
    };
    s.finish(d);
    Some(SeriesConfig {
        label: label?.to_string(),
        thickness: thickness?,
        axes: axes?,
        aperture: aperture?,
    })
}

const GAP_MEDIUM_KEYS: [&str; 4] = ["medium", "index_pump", "index_degenerate", "delta_prime"];

/// Values in `over` replace those in `base`; tables merge key by key, except
/// aperture tables and gap-medium choices, which are replaced as a unit.
fn merge(base: &mut Table, over: &Table) {
    if GAP_MEDIUM_KEYS.iter().any(|k| over.contains_key(*k)) {
        base.retain(|k, _| !GAP_MEDIUM_KEYS.contains(&k));
    }
    for (k, v) in over {
        match (base.get_mut(k), v) {
            (Some(Value::Table(b)), Value::Table(o)) if k != "aperture" => merge(b, o),
            _ => {
                base.insert(k.clone(), v.clone());
            }
        }
    }
}

fn read_config(root: &Table, default_name: &str, d: &mut Diags) -> Option<RunConfig> {
    let mut top = Section::new(String::new(), root);
    // `preset` pulls in a shipped config; `based_on` only records where an echo came from
    let preset = top.string(d, "preset").map(str::to_string);
    let based_on = top.string(d, "based_on").map(str::to_string);
    let preset = preset.or(based_on);
    let preset_version = top.integer(d, "preset_version");
    if let Some(v) = preset_version {
        if v != PRESET_VERSION {
            d.push(
                "preset_version",
                format!("unsupported version {v}; this build reads version {PRESET_VERSION}"),
            );
        }
    }
    let name = top
        .string(d, "name")
        .map(str::to_string)
        .or_else(|| preset.clone())
        .unwrap_or_else(|| default_name.to_string());
    if name.trim().is_empty() || name.contains(['/', '\\']) {
        d.push("name", format!("{name:?} cannot be used as a file stem"));
    }
    let description = top.string(d, "description").map(str::to_string);

    let mut sys = required_table(&mut top, d, "system");
    let system = sys.as_mut().and_then(|s| {
        let kind = s.string(d, "kind");
        match s.required(d, "kind", kind)? {
            "two_crystal" => read_two_crystal(s, d).map(SystemConfig::TwoCrystal),
            "state_function" => read_state_function(s, d).map(SystemConfig::StateFunction),
            other => {
                d.push(
                    &s.at("kind"),
                    format!("unknown system kind {other:?}; use two_crystal or state_function"),
                );
                None
            }
        }
    });
    if let Some(s) = sys {
        s.finish(d);
    }

    let sweep = required_table(&mut top, d, "sweep").and_then(|mut s| {
        let out = read_sweep(&mut s, d);
        s.finish(d);
        out
    });

    let order = match top.table(d, "quadrature") {
        None if !top.has("quadrature") => Some(DEFAULT_ORDER),
        None => None,
        Some(mut q) => {
            let o = if q.has("order") {
                q.integer(d, "order").and_then(|o| {
                    if o >= MIN_ORDER as i64 {
                        Some(o as usize)
                    } else {
                        d.push(&q.at("order"), format!("must be at least {MIN_ORDER}, got {o}"));
                        None
                    }
                })
            } else {
                Some(DEFAULT_ORDER)
            };
            q.finish(d);
            o
        }
    };

    let output = match top.table(d, "output") {
        None => OutputConfig::default(),
        Some(mut o) => {
            let csv = o.string(d, "csv").map(str::to_string);
            let svg = o.string(d, "svg").map(str::to_string);
            let magnitude = o.boolean(d, "magnitude").unwrap_or(false);
            o.finish(d);
            OutputConfig { csv, svg, magnitude }
        }
    };

    let series: Vec<Option<SeriesConfig>> = top.tables(d, "series").into_iter().map(|s| read_series(s, d)).collect();
    top.finish(d);

    let cfg = RunConfig {
        name,
        description,
        preset,
        preset_version,
        system: system?,
        sweep: sweep?,
        quadrature_order: order?,
        output,
        series: series.into_iter().collect::<Option<Vec<_>>>()?,
    };
    check_semantics(&cfg, d);
    Some(cfg)
}

/// Cross-field checks and a trial build of every system the run will evaluate.
fn check_semantics(cfg: &RunConfig, d: &mut Diags) {
    let var = cfg.sweep.variable;
    match &cfg.system {
        SystemConfig::TwoCrystal(base) => {
            if var == SweepKind::Delta {
                d.push("sweep.variable", "delta sweeps apply to state_function systems");
            }
            let mut labels = Vec::new();
            for (i, s) in cfg.series.iter().enumerate() {
                if labels.contains(&&s.label) {
                    d.push(&format!("series[{i}].label"), format!("duplicate label {:?}", s.label));
                }
                labels.push(&s.label);
                let sized = matches!(
                    var,
                    SweepKind::System(SweepVariable::ApertureDiameter | SweepVariable::GaussianRadius)
                );
                if sized && s.aperture.is_some() {
                    d.push(&format!("series[{i}].aperture"), "conflicts with the aperture sweep");
                }
            }
            let variants: Vec<(String, TwoCrystalConfig)> = if cfg.series.is_empty() {
                vec![("system".to_string(), base.clone())]
            } else {
                cfg.series
                    .iter()
                    .enumerate()
                    .map(|(i, s)| (format!("series[{i}]"), s.apply(base)))
                    .collect()
            };
            for (path, c) in variants {
                if let Err(e) = c.build().and_then(|s| s.check_interference()) {
                    d.push(&path, e);
                }
            }
        }
        SystemConfig::StateFunction(sf) => {
            if var != SweepKind::Delta {
                d.push(
                    "sweep.variable",
                    format!("state_function systems sweep delta, not {}", var.name()),
                );
            }
            if !cfg.series.is_empty() {
                d.push("series", "series overrides apply to two_crystal systems only");
            }
            if let Err(e) = sf.build() {
                d.push("system", e);
            }
        }
    }
}

impl RunConfig {
    /// Parses and validates; every violation is returned, not just the first.
    pub fn from_toml_str(text: &str, default_name: &str) -> Result<RunConfig, Vec<Diagnostic>> {
        let mut table: Table = text.parse().map_err(|e: toml::de::Error| {
            vec![Diagnostic {
                path: "(syntax)".to_string(),
                message: e.message().to_string(),
            }]
        })?;
        if let Some(Value::String(name)) = table.get("preset") {
            match presets::source(name) {
                Some(src) => {
                    let mut base: Table = src.parse().expect("shipped presets parse");
                    merge(&mut base, &table);
                    table = base;
                }
                None => {
                    return Err(vec![Diagnostic {
                        path: "preset".to_string(),
                        message: format!("unknown preset {name:?} (known: {})", presets::names().join(", ")),
                    }])
                }
            }
        }
        let mut d = Diags::default();
        let cfg = read_config(&table, default_name, &mut d);
        match cfg {
            Some(c) if d.0.is_empty() => Ok(c),
            _ => Err(d.0),
        }
    }

    /// The config block of a CSV header: the leading `#` lines, prefix removed.
    pub fn extract_from_csv(text: &str) -> String {
        let mut out = String::new();
        for line in text.lines() {
            let Some(rest) = line.strip_prefix('#') else { break };
            out.push_str(rest.strip_prefix(' ').unwrap_or(rest));
            out.push('\n');
        }
        out
    }

    pub fn two_crystal(&self) -> Option<&TwoCrystalConfig> {
        match &self.system {
            SystemConfig::TwoCrystal(c) => Some(c),
            SystemConfig::StateFunction(_) => None,
        }
    }

    /// Canonical TOML of everything that affects the numbers. Quantities are
    /// written in SI so that reading the echo back reproduces each f64 exactly.
    pub fn echo(&self) -> String {
        let mut e = Echo::default();
        if let Some(p) = &self.preset {
            e.string("based_on", p);
        }
        if let Some(v) = self.preset_version {
            e.raw("preset_version", v);
        }
        e.string("name", &self.name);
        if let Some(desc) = &self.description {
            e.string("description", desc);
        }

        e.header("system");
        match &self.system {
            SystemConfig::TwoCrystal(c) => {
                e.string("kind", "two_crystal");
                e.string("axes", c.axes.name());
                e.header("system.pump");
                e.quantity("wavelength", c.wavelength, Dimension::Length);
                e.header("system.crystal");
                e.quantity("thickness", c.thickness, Dimension::Length);
                e.quantity("dispersion", c.dispersion, Dimension::Dispersion);
                e.raw("walkoff", format!("[{:?}, {:?}]", c.walkoff.x, c.walkoff.y));
                e.float("chi0", c.chi0);
                e.raw("epsilon", c.epsilon);
                e.header("system.gap");
                e.quantity("length", c.gap_length, Dimension::Length);
                e.gap_medium(c.gap_medium);
                e.header("system.geometry");
                e.quantity("d1", c.d1, Dimension::Length);
                if let Some(v) = c.d2 {
                    e.quantity("d2", v, Dimension::Length);
                }
                if let Some(v) = c.f {
                    e.quantity("f", v, Dimension::Length);
                }
                e.header("system.aperture");
                e.aperture(&c.aperture);
            }
            SystemConfig::StateFunction(sf) => {
                e.string("kind", "state_function");
                let kind = match sf.profile {
                    ProfileConfig::Bulk { .. } => "bulk",
                    ProfileConfig::Sinusoidal { .. } => "sinusoidal",
                    ProfileConfig::Fourier { .. } => "fourier",
                    ProfileConfig::Poled { .. } => "poled",
                    ProfileConfig::Cascade { .. } => "cascade",
                };
                e.string("profile", kind);
                e.header("system.pump");
                e.quantity("wavelength", sf.wavelength, Dimension::Length);
                match &sf.profile {
                    ProfileConfig::Cascade { crystals, gaps } => {
                        for c in crystals {
                            e.header("[system.crystals]");
                            e.quantity("thickness", c.thickness, Dimension::Length);
                            e.float("chi0", c.chi0);
                            e.raw("epsilon", c.epsilon);
                        }
                        for g in gaps {
                            e.header("[system.gaps]");
                            e.quantity("length", g.length, Dimension::Length);
                            e.gap_medium(g.medium);
                            e.float("delta_prime_slope", g.slope);
                        }
                    }
                    p => {
                        e.header("system.crystal");
                        let (thickness, period, chi0) = match *p {
                            ProfileConfig::Bulk { thickness, chi0 } => (thickness, None, chi0),
                            ProfileConfig::Sinusoidal {
                                thickness,
                                period,
                                chi0,
                            }
                            | ProfileConfig::Fourier {
                                thickness,
                                period,
                                chi0,
                                ..
                            }
                            | ProfileConfig::Poled {
                                thickness,
                                period,
                                chi0,
                                ..
                            } => (thickness, Some(period), chi0),
                            ProfileConfig::Cascade { .. } => unreachable!(),
                        };
                        e.quantity("thickness", thickness, Dimension::Length);
                        if let Some(period) = period {
                            e.quantity("period", period, Dimension::Length);
                        }
                        e.float("chi0", chi0);
                        if let ProfileConfig::Poled { duty_cycle, m_max, .. } = p {
                            e.float("duty_cycle", *duty_cycle);
                            if let Some(m) = m_max {
                                e.raw("m_max", m);
                            }
                        }
                        if let ProfileConfig::Fourier { coefficients, .. } = p {
                            let items: Vec<String> = coefficients
                                .iter()
                                .map(|c| format!("[{:?}, {:?}]", c.re, c.im))
                                .collect();
                            e.raw("coefficients", format!("[{}]", items.join(", ")));
                        }
                    }
                }
            }
        }

        e.header("sweep");
        e.string("variable", self.sweep.variable.name());
        let dim = self.sweep.variable.dimension();
        e.quantity("start", self.sweep.start, dim);
        e.quantity("stop", self.sweep.stop, dim);
        e.raw("steps", self.sweep.steps);
        e.raw("at_center", self.sweep.at_center);

        e.header("quadrature");
        e.raw("order", self.quadrature_order);

        for s in &self.series {
            e.header("[series]");
            e.string("label", &s.label);
            if let Some(t) = s.thickness {
                e.quantity("thickness", t, Dimension::Length);
            }
            if let Some(a) = s.axes {
                e.string("axes", a.name());
            }
            if let Some(a) = &s.aperture {
                e.header("series.aperture");
                e.aperture(a);
            }
        }
        e.0
    }
}

#[derive(Default)]
struct Echo(String);

impl Echo {
    fn header(&mut self, name: &str) {
        let _ = writeln!(self.0, "\n[{name}]");
    }

    fn raw(&mut self, key: &str, v: impl fmt::Display) {
        let _ = writeln!(self.0, "{key} = {v}");
    }

    fn string(&mut self, key: &str, v: &str) {
        self.raw(key, Value::String(v.to_string()));
    }

    fn float(&mut self, key: &str, v: f64) {
        self.raw(key, format!("{v:?}"));
    }

    fn quantity(&mut self, key: &str, v: f64, dim: Dimension) {
        self.string(key, &format_quantity(v, dim));
    }

    fn gap_medium(&mut self, m: GapMedium) {
        match m {
            GapMedium::Air => self.string("medium", "air"),
            GapMedium::Indices { pump, degenerate } => {
                self.float("index_pump", pump);
                self.float("index_degenerate", degenerate);
            }
            GapMedium::DeltaPrime(dp) => self.quantity("delta_prime", dp, Dimension::Wavenumber),
        }
    }

    fn aperture(&mut self, a: &ApertureModel) {
        match *a {
            ApertureModel::Delta => self.string("model", "delta"),
            ApertureModel::Gaussian { r_a, r_b } => {
                self.string("model", "gaussian");
                self.quantity("radius_a", r_a, Dimension::Length);
                self.quantity("radius_b", r_b, Dimension::Length);
            }
            ApertureModel::Circular { b_a, b_b } => {
                self.string("model", "circular");
                self.quantity("diameter_a", b_a, Dimension::Length);
                self.quantity("diameter_b", b_b, Dimension::Length);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
name = "t"
[system]
kind = "two_crystal"
axes = "parallel"
[system.crystal]
thickness = "0.5 mm"
dispersion = "190 fs/mm"
walkoff = 0.07
[system.geometry]
d1 = "750 mm"
[sweep]
variable = "d"
start = "2 mm"
stop = "10 mm"
steps = 5
"#;

    fn diags(text: &str) -> Vec<Diagnostic> {
        RunConfig::from_toml_str(text, "x").unwrap_err()
    }

    #[test]
    fn minimal_config_fills_defaults() {
        let c = RunConfig::from_toml_str(MINIMAL, "x").unwrap();
        let tc = c.two_crystal().unwrap();
        assert_eq!(tc.aperture, ApertureModel::Delta);
        assert_eq!(tc.gap_medium, GapMedium::Air);
        assert_eq!(tc.wavelength, 351.1e-9);
        assert_eq!(c.quadrature_order, DEFAULT_ORDER);
        assert!(c.sweep.at_center);
        assert_eq!(c.sweep.values().len(), 5);
    }

    #[test]
    fn all_violations_are_reported() {
        let text = MINIMAL
            .replace("\"0.5 mm\"", "\"-1 mm\"")
            .replace("steps = 5", "steps = 1")
            .replace("\"750 mm\"", "750");
        let d = diags(&text);
        let paths: Vec<&str> = d.iter().map(|x| x.path.as_str()).collect();
        assert_eq!(
            paths,
            ["system.crystal.thickness", "system.geometry.d1", "sweep.steps"],
            "{d:?}"
        );
        assert!(d[1].message.contains("bare number"));
    }

    #[test]
    fn unknown_keys_are_flagged() {
        let d = diags(&MINIMAL.replace("walkoff = 0.07", "walkoff = 0.07\nwalkof = 1"));
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].path, "system.crystal.walkof");
    }

    #[test]
    fn sweep_range_must_be_ordered() {
        let d = diags(&MINIMAL.replace("\"10 mm\"", "\"1 mm\""));
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].path, "sweep.stop");
    }

    #[test]
    fn sweep_must_match_system_kind() {
        let text = MINIMAL
            .replace("variable = \"d\"", "variable = \"delta\"")
            .replace("\"2 mm\"", "\"-2 rad/m\"")
            .replace("\"10 mm\"", "\"2 rad/m\"");
        let d = diags(&text);
        assert_eq!(d.len(), 1, "{d:?}");
        assert!(d.iter().any(|x| x.path == "sweep.variable"), "{d:?}");
    }

    #[test]
    fn echo_is_a_fixed_point() {
        let c = RunConfig::from_toml_str(MINIMAL, "x").unwrap();
        let e1 = c.echo();
        let c2 = RunConfig::from_toml_str(&e1, "other").unwrap();
        assert_eq!(c2, c);
        assert_eq!(c2.echo(), e1);
    }

    #[test]
    fn csv_header_extraction() {
        let text = "# a = 1\n#\n# [b]\ncol,x\n1,2\n# series: z\n";
        assert_eq!(RunConfig::extract_from_csv(text), "a = 1\n\n[b]\n");
    }

    #[test]
    fn preset_reference_merges_overrides() {
        let c = RunConfig::from_toml_str("preset = \"fig10_parallel\"\n[sweep]\nsteps = 3\n", "x").unwrap();
        assert_eq!(c.name, "fig10_parallel");
        assert_eq!(c.sweep.steps, 3);
        assert_eq!(c.two_crystal().unwrap().d1, 0.75);
    }

    #[test]
    fn overrides_replace_exclusive_choices() {
        let text = "preset = \"fig10_parallel\"\n[system.gap]\ndelta_prime = \"100 rad/m\"\n\
                    [system.aperture]\nmodel = \"gaussian\"\nradius = \"1 mm\"\n";
        let c = RunConfig::from_toml_str(text, "x").unwrap();
        let tc = c.two_crystal().unwrap();
        assert_eq!(tc.gap_medium, GapMedium::DeltaPrime(100.0));
        assert_eq!(tc.aperture, ApertureModel::Gaussian { r_a: 1e-3, r_b: 1e-3 });
        let again = RunConfig::from_toml_str(&c.echo(), "x").unwrap();
        assert_eq!(
            again,
            RunConfig {
                output: OutputConfig::default(),
                ..c
            }
        );
    }

    #[test]
    fn state_function_cascade_parses() {
        let text = r#"
[system]
kind = "state_function"
profile = "cascade"
[[system.crystals]]
thickness = "1 mm"
[[system.crystals]]
thickness = "0.5 mm"
epsilon = -1
[[system.gaps]]
length = "10 mm"
delta_prime_slope = 0.45
[sweep]
variable = "delta"
start = "-3e4 rad/m"
stop = "3e4 rad/m"
steps = 11
"#;
        let c = RunConfig::from_toml_str(text, "x").unwrap();
        let SystemConfig::StateFunction(sf) = &c.system else {
            panic!()
        };
        assert!(matches!(sf.build().unwrap(), NonlinearityProfile::Cascade(_)));
        let again = RunConfig::from_toml_str(&c.echo(), "x").unwrap();
        assert_eq!(again, c);
    }
}
