//! Two-crystal interference: G-functions, V(τ), centre-of-dip visibility,
//! coincidence rate and parameter sweeps.

use std::fmt::{self, Write as _};
use std::io::{self, Write};
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::apertures::{gamma_factor, n_kernel, ApertureModel, GaussianPupils, NKernelArgs, OpticalGeometry};
use crate::dispersion::{CrystalSpec, DelayLineSpec, GapSpec, PumpSpec, Sign};
use crate::error::{config, Error, Result};
use crate::quadrature::GaussLegendre;
use crate::report;
use crate::vec2::Vec2;

pub const DEFAULT_ORDER: usize = 64;
pub const MIN_ORDER: usize = 8;

/// Analyzer projections μ_AoBe, μ_BoAe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyzerSpec {
    pub mu_ao_be: f64,
    pub mu_bo_ae: f64,
}

impl AnalyzerSpec {
    pub fn new(mu_ao_be: f64, mu_bo_ae: f64) -> Result<Self> {
        for (name, v) in [("mu_ao_be", mu_ao_be), ("mu_bo_ae", mu_bo_ae)] {
            if !(v.abs() <= 1.0) {
                return config(format!("analyzer projection {name} must lie in [-1, 1], got {v}"));
            }
        }
        Ok(AnalyzerSpec { mu_ao_be, mu_bo_ae })
    }

    /// Polarizer angles from the o axis of each arm.
    ///
    /// Arm A transmits (cos θ_A, sin θ_A) in its (o, e) basis. Arm B sees the
    /// pair after the beamsplitter reflection, which reverses the e axis, so it
    /// transmits (cos θ_B, −sin θ_B). Then μ_AoBe = −cos θ_A sin θ_B and
    /// μ_BoAe = cos θ_B sin θ_A, and 45°/45° gives v_pol = −1.
    pub fn from_angles(theta_a: f64, theta_b: f64) -> Self {
        AnalyzerSpec {
            mu_ao_be: -theta_a.cos() * theta_b.sin(),
            mu_bo_ae: theta_b.cos() * theta_a.sin(),
        }
    }

    /// (μ_AoBe, μ_BoAe) = (−1/2, +1/2).
    pub fn at_45_45() -> Self {
        AnalyzerSpec {
            mu_ao_be: -0.5,
            mu_bo_ae: 0.5,
        }
    }
}

/// 2μ_AoBe μ_BoAe/(μ_AoBe² + μ_BoAe²).
pub fn v_pol(analyzers: &AnalyzerSpec) -> Result<f64> {
    let (a, b) = (analyzers.mu_ao_be, analyzers.mu_bo_ae);
    let den = a * a + b * b;
    if den == 0.0 {
        return Err(Error::DegenerateAnalyzer);
    }
    Ok(2.0 * a * b / den)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axes {
    Parallel,
    Antiparallel,
}

impl Axes {
    pub fn sign(self) -> Sign {
        match self {
            Axes::Parallel => Sign::Plus,
            Axes::Antiparallel => Sign::Minus,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Axes::Parallel => "parallel",
            Axes::Antiparallel => "antiparallel",
        }
    }
}

impl FromStr for Axes {
    type Err = Error;
    fn from_str(s: &str) -> Result<Axes> {
        match s {
            "parallel" => Ok(Axes::Parallel),
            "antiparallel" => Ok(Axes::Antiparallel),
            _ => config(format!("axes must be \"parallel\" or \"antiparallel\", got {s:?}")),
        }
    }
}

/// Two equal crystals separated by a linear gap, imaged through the pupils
/// onto the detectors. Crystal 1 is upstream; crystal 2 ends at z = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoCrystalSystem {
    pub pump: PumpSpec,
    pub crystal1: CrystalSpec,
    pub crystal2: CrystalSpec,
    pub gap: GapSpec,
    pub geometry: OpticalGeometry,
    pub aperture: ApertureModel,
    pub delay: DelayLineSpec,
    pub axes: Axes,
}

impl TwoCrystalSystem {
    /// Builds crystal 2 from crystal 1: M₂ = ±M₁ and ε₂ = ±ε₁ by `axes`.
    pub fn new(
        pump: PumpSpec,
        crystal: CrystalSpec,
        axes: Axes,
        gap: GapSpec,
        geometry: OpticalGeometry,
        aperture: ApertureModel,
    ) -> Result<Self> {
        let s = axes.sign().value();
        let crystal2 = CrystalSpec {
            walkoff: crystal.walkoff * s,
            epsilon: match axes {
                Axes::Parallel => crystal.epsilon,
                Axes::Antiparallel => crystal.epsilon.flipped(),
            },
            ..crystal
        };
        let sys = TwoCrystalSystem {
            pump,
            crystal1: crystal,
            crystal2,
            gap,
            geometry,
            aperture,
            delay: DelayLineSpec::default(),
            axes,
        };
        sys.check_consistency()?;
        Ok(sys)
    }

    pub fn with_delay(mut self, delay: DelayLineSpec) -> Self {
        self.delay = delay;
        self
    }

    pub fn with_separation(mut self, d: f64) -> Result<Self> {
        self.gap.length = d;
        self.gap.validate()?;
        Ok(self)
    }

    pub fn with_aperture(mut self, aperture: ApertureModel) -> Result<Self> {
        aperture.validate()?;
        self.aperture = aperture;
        Ok(self)
    }

    pub fn with_axes(self, axes: Axes) -> Result<Self> {
        let base = TwoCrystalSystem::new(self.pump, self.crystal1, axes, self.gap, self.geometry, self.aperture)?;
        Ok(base.with_delay(self.delay))
    }

    /// Field-level validity and the crystal-2 relations implied by `axes`.
    pub fn check_consistency(&self) -> Result<()> {
        self.crystal1.validate()?;
        self.crystal2.validate()?;
        self.gap.validate()?;
        self.geometry.validate()?;
        self.aperture.validate()?;
        let s = self.axes.sign().value();
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
        let (m1, m2) = (self.crystal1.walkoff, self.crystal2.walkoff);
        let walkoff_ok = (m2 - m1 * s).norm() <= 1e-12 * m1.norm().max(f64::MIN_POSITIVE);
        if !walkoff_ok {
            return config(format!(
                "crystal2 walkoff {m2} is inconsistent with {} axes (crystal1 {m1})",
                self.axes.name()
            ));
        }
        let eps = self.crystal1.epsilon.value() * self.crystal2.epsilon.value();
        if eps != s {
            return config(format!(
                "crystal signs ε₁ε₂ = {eps} contradict {} axes",
                self.axes.name()
            ));
        }
        if !close(self.crystal1.dispersion, self.crystal2.dispersion) {
            return config("both crystals must have the same dispersion D");
        }
        if !close(self.crystal1.chi0.abs(), self.crystal2.chi0.abs()) {
            return Err(Error::Unsupported("crystals with different |chi0|".into()));
        }
        Ok(())
    }

    /// Requirements of the equal-thickness interference formulas.
    pub fn check_interference(&self) -> Result<()> {
        self.check_consistency()?;
        let (l1, l2) = (self.crystal1.thickness, self.crystal2.thickness);
        if (l1 - l2).abs() > 1e-12 * l1.max(l2) {
            return Err(Error::Unsupported(format!(
                "visibility needs equal crystal thicknesses, got {l1} m and {l2} m"
            )));
        }
        if !(self.crystal1.dispersion > 0.0) {
            return config(format!(
                "crystal dispersion D must be positive, got {}",
                self.crystal1.dispersion
            ));
        }
        if self.delay.walkoff != Vec2::ZERO {
            return Err(Error::Unsupported("delay-line walkoff must be zero".into()));
        }
        Ok(())
    }

    pub fn thickness(&self) -> f64 {
        self.crystal1.thickness
    }

    pub fn separation(&self) -> f64 {
        self.gap.length
    }

    /// LD, the delay at the centre of the interference window.
    pub fn center_delay(&self) -> f64 {
        self.crystal1.thickness * self.crystal1.dispersion
    }

    /// ρ = (d₁ + d)/d₁.
    pub fn rho(&self) -> f64 {
        self.geometry.s1(self.gap.length) / self.geometry.d1
    }

    pub fn epsilon(&self) -> f64 {
        self.crystal1.epsilon.value() * self.crystal2.epsilon.value()
    }

    pub fn phi_disp(&self) -> f64 {
        self.gap.phase()
    }

    pub fn pupils(&self) -> Option<GaussianPupils> {
        self.aperture.pupils()
    }

    pub fn phi_gamma(&self) -> f64 {
        match self.pupils() {
            None => 0.0,
            Some(p) => gamma_factor(&self.pump, &p, self.geometry.d1, self.gap.length).phi_gamma,
        }
    }

    /// Key/value description used as a CSV header.
    pub fn describe(&self) -> String {
        let mut s = String::new();
        let n = report::num;
        let _ = writeln!(s, "system = two_crystal");
        let _ = writeln!(s, "axes = {}", self.axes.name());
        let _ = writeln!(s, "pump_wavelength_m = {}", n(self.pump.wavelength()));
        for (tag, c) in [("crystal1", &self.crystal1), ("crystal2", &self.crystal2)] {
            let _ = writeln!(
                s,
                "{tag} = thickness_m {} dispersion_s_per_m {} walkoff ({}, {}) chi0 {} epsilon {}",
                n(c.thickness),
                n(c.dispersion),
                n(c.walkoff.x),
                n(c.walkoff.y),
                n(c.chi0),
                c.epsilon
            );
        }
        let _ = writeln!(
            s,
            "gap = length_m {} delta_prime_rad_per_m {}",
            n(self.gap.length),
            n(self.gap.delta_prime)
        );
        let _ = writeln!(s, "d1_m = {}", n(self.geometry.d1));
        match self.aperture {
            ApertureModel::Delta => {
                let _ = writeln!(s, "aperture = delta");
            }
            ApertureModel::Gaussian { r_a, r_b } => {
                let _ = writeln!(s, "aperture = gaussian r_a_m {} r_b_m {}", n(r_a), n(r_b));
            }
            ApertureModel::Circular { b_a, b_b } => {
                let _ = writeln!(s, "aperture = circular b_a_m {} b_b_m {}", n(b_a), n(b_b));
            }
        }
        let _ = writeln!(
            s,
            "delay = dispersion_s_per_m {} walkoff ({}, {})",
            n(self.delay.dispersion),
            n(self.delay.walkoff.x),
            n(self.delay.walkoff.y)
        );
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GKind {
    G1,
    G2,
    G12,
}

/// G-function at window variable ζ = z/L and normalized delay x = τ/(LD).
pub fn g_function(kind: GKind, zeta: f64, x: f64, system: &TwoCrystalSystem) -> Complex64 {
    let ml = system.crystal1.walkoff * system.thickness();
    let d1 = system.geometry.d1;
    let s1 = system.geometry.s1(system.gap.length);
    let (z0, big_z, s_k, s_n) = match (system.axes, kind) {
        (Axes::Parallel, GKind::G1) => (ml * -(zeta + 1.0), ml * (-2.0 * x), s1, s1),
        (Axes::Parallel, GKind::G2) => (ml * -zeta, ml * (-2.0 * x), d1, d1),
        (Axes::Parallel, GKind::G12) => (ml * -(zeta + 1.0), ml * (-2.0 * x), s1, d1),
        (Axes::Antiparallel, GKind::G1) => (ml * -(zeta - 1.0), ml * (-2.0 * (x - 2.0)), s1, s1),
        (Axes::Antiparallel, GKind::G2) => (ml * zeta, ml * (2.0 * x), d1, d1),
        (Axes::Antiparallel, GKind::G12) => (ml * -(zeta - 1.0), ml * (-2.0 * (zeta - x)), s1, d1),
    };
    let args = NKernelArgs { z0, big_z, s_k, s_n };
    n_kernel(&args, &system.pump, &system.aperture)
}

fn check_order(order: usize) -> Result<GaussLegendre> {
    if order < MIN_ORDER {
        return config(format!("quadrature order must be at least {MIN_ORDER}, got {order}"));
    }
    GaussLegendre::new(order)
}

/// ζ-range where both emission points of a pair lie inside a crystal:
/// ζ ∈ [0,1] and c − ζ ∈ [0,1].
pub(crate) fn overlap_window(c: f64) -> Option<(f64, f64)> {
    let lo = (c - 1.0).max(0.0);
    let hi = c.min(1.0);
    (hi > lo).then_some((lo, hi))
}

/// Weights of the crystal-1, crystal-2 and collective terms.
pub(crate) fn term_weights(rho: f64) -> (f64, f64, f64) {
    let den = 1.0 + rho * rho;
    (1.0 / den, rho * rho / den, rho / den)
}

/// V(τ) for equal crystals.
pub fn visibility_tau(tau: f64, system: &TwoCrystalSystem, quadrature_order: usize) -> Result<f64> {
    system.check_interference()?;
    let gl = check_order(quadrature_order)?;
    let x = tau / system.center_delay();
    let (w1, w2, w12) = term_weights(system.rho());
    let collective_phase = Complex64::from_polar(1.0, -system.phi_disp());

    let mut v = 0.0;
    if let Some((a, b)) = overlap_window(2.0 * x - 2.0) {
        v += w1 * gl.integrate(a, b, |z| g_function(GKind::G1, z, x, system).re);
    }
    if let Some((a, b)) = overlap_window(2.0 * x) {
        v += w2 * gl.integrate(a, b, |z| g_function(GKind::G2, z, x, system).re);
    }
    if let Some((a, b)) = overlap_window(2.0 * x - 1.0) {
        let t = gl.integrate(a, b, |z| (g_function(GKind::G12, z, x, system) * collective_phase).re);
        v += 2.0 * system.epsilon() * w12 * t;
    }
    Ok(v)
}

/// Pattern of a single crystal of thickness T at distance s from the pupils.
pub fn single_crystal_visibility(
    tau: f64,
    crystal: &CrystalSpec,
    distance: f64,
    aperture: &ApertureModel,
    pump: &PumpSpec,
    quadrature_order: usize,
) -> Result<f64> {
    crystal.validate()?;
    let gl = check_order(quadrature_order)?;
    if !(crystal.dispersion > 0.0) {
        return config("crystal dispersion D must be positive");
    }
    let x = tau / (crystal.thickness * crystal.dispersion);
    let Some((a, b)) = overlap_window(2.0 * x) else {
        return Ok(0.0);
    };
    let mt = crystal.walkoff * crystal.thickness;
    Ok(gl.integrate(a, b, |z| {
        let args = NKernelArgs {
            z0: mt * -z,
            big_z: mt * (-2.0 * x),
            s_k: distance,
            s_n: distance,
        };
        n_kernel(&args, pump, aperture).re
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CenterForm {
    Auto,
    SmallParallel,
    SmallAntiparallel,
    GaussParallel,
    GaussAntiparallel,
}

impl FromStr for CenterForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<CenterForm> {
        Ok(match s {
            "auto" => CenterForm::Auto,
            "small_parallel" => CenterForm::SmallParallel,
            "small_antiparallel" => CenterForm::SmallAntiparallel,
            "gauss_parallel" => CenterForm::GaussParallel,
            "gauss_antiparallel" => CenterForm::GaussAntiparallel,
            _ => return config(format!("unknown centre form {s:?}")),
        })
    }
}

impl fmt::Display for CenterForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CenterForm::Auto => "auto",
            CenterForm::SmallParallel => "small_parallel",
            CenterForm::SmallAntiparallel => "small_antiparallel",
            CenterForm::GaussParallel => "gauss_parallel",
            CenterForm::GaussAntiparallel => "gauss_antiparallel",
        })
    }
}

/// V(LD) from the one-dimensional centre forms.
pub fn visibility_center(system: &TwoCrystalSystem, form: CenterForm, quadrature_order: usize) -> Result<f64> {
    system.check_interference()?;
    let gl = check_order(quadrature_order)?;
    let form = match form {
        CenterForm::Auto => match (system.pupils().is_some(), system.axes) {
            (false, Axes::Parallel) => CenterForm::SmallParallel,
            (false, Axes::Antiparallel) => CenterForm::SmallAntiparallel,
            (true, Axes::Parallel) => CenterForm::GaussParallel,
            (true, Axes::Antiparallel) => CenterForm::GaussAntiparallel,
        },
        f => f,
    };
    let wanted = match form {
        CenterForm::SmallParallel | CenterForm::GaussParallel => Axes::Parallel,
        _ => Axes::Antiparallel,
    };
    if wanted != system.axes {
        return config(format!(
            "centre form {form} does not apply to {} axes",
            system.axes.name()
        ));
    }

    let kp = system.pump.k_p();
    let d1 = system.geometry.d1;
    let d = system.gap.length;
    let s1 = d1 + d;
    let m_l = system.crystal1.walkoff.norm() * system.thickness();
    let k = kp * m_l * m_l;
    let pref = 2.0 * d1 * s1 / (d1 * d1 + s1 * s1);
    let phi = system.phi_disp();

    let v = match form {
        CenterForm::SmallParallel => {
            pref * gl.integrate(0.0, 1.0, |z| {
                (k / (2.0 * s1) * ((1.0 + z * z) * d / (4.0 * d1) - z * (1.0 + d / (2.0 * d1))) + phi).cos()
            })
        }
        CenterForm::SmallAntiparallel => {
            -pref
                * gl.integrate(0.0, 1.0, |z| {
                    (k / (8.0 * s1) * (d / d1) * (z - 1.0).powi(2) + phi).cos()
                })
        }
        CenterForm::GaussParallel | CenterForm::GaussAntiparallel => {
            let Some(pupils) = system.pupils() else {
                return config(format!("centre form {form} needs a Gaussian or circular aperture"));
            };
            let r2 = pupils.mean_square_radius();
            let gf = gamma_factor(&system.pump, &pupils, d1, d);
            let (g, phi_g) = (gf.gamma, gf.phi_gamma);
            let den = 1.0 + g * g;
            let lift = 1.0 + d / (2.0 * d1);
            let b = 2.0 * (kp * m_l * r2.sqrt() / (4.0 * s1)).powi(2) * lift * lift / den;
            // 4γ²(d₁+d)/d written without the 1/d
            let e = k / (8.0 * s1) * (d / d1 - g * kp * r2 / d1) / den;
            let amp = pref / den.sqrt();
            if form == CenterForm::GaussParallel {
                let c = k * d / (8.0 * d1 * s1 * den);
                let dd = -k * lift / (2.0 * s1 * den);
                let squeeze = d / (d + 2.0 * d1);
                amp * gl.integrate(0.0, 1.0, |z| {
                    (-b * (1.0 - z * squeeze).powi(2)).exp() * (c * z * z + dd * z + e - phi_g + phi).cos()
                })
            } else {
                -amp * gl.integrate(0.0, 1.0, |z| {
                    let u = 1.0 - z;
                    (-b * u * u).exp() * (e * u * u - phi_g + phi).cos()
                })
            }
        }
        CenterForm::Auto => unreachable!(),
    };
    Ok(v)
}

/// Coincidence rate relative to the shoulder, with the absolute baseline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoincidenceRate {
    /// R/R₀ = 1 + v_pol·V(τ).
    pub relative: f64,
    /// R₀ ∝ (k_p/2)²[L₁/(Ds₁²) + L₂/(Ds₂²)]·P̃_A(0)P̃_B(0).
    pub baseline: f64,
    pub v_pol: f64,
    pub visibility: f64,
}

pub fn coincidence_rate(
    tau: f64,
    system: &TwoCrystalSystem,
    analyzers: &AnalyzerSpec,
    quadrature_order: usize,
) -> Result<CoincidenceRate> {
    let vp = v_pol(analyzers)?;
    let visibility = visibility_tau(tau, system, quadrature_order)?;
    let kp = system.pump.k_p();
    let dsp = system.crystal1.dispersion;
    let s1 = system.geometry.s1(system.gap.length);
    let s2 = system.geometry.s2();
    let baseline = (kp / 2.0).powi(2)
        * (system.crystal1.thickness / (dsp * s1 * s1) + system.crystal2.thickness / (dsp * s2 * s2))
        * system.aperture.pupil_weight_product();
    Ok(CoincidenceRate {
        relative: 1.0 + vp * visibility,
        baseline,
        v_pol: vp,
        visibility,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    Tau,
    Separation,
    ApertureDiameter,
    GaussianRadius,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::Tau => "tau",
            SweepVariable::Separation => "d",
            SweepVariable::ApertureDiameter => "aperture_b",
            SweepVariable::GaussianRadius => "r",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VisibilityCurve {
    pub sweep_variable: SweepVariable,
    pub abscissa: Vec<f64>,
    pub value: Vec<f64>,
    pub phi_disp: Vec<f64>,
    pub phi_gamma: Vec<f64>,
    pub system: TwoCrystalSystem,
}

impl VisibilityCurve {
    pub const CSV_COLUMNS: &'static str = "abscissa,V,phi_disp,phi_gamma";

    pub fn len(&self) -> usize {
        self.abscissa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.abscissa.is_empty()
    }

    pub fn write_csv_rows<W: Write>(&self, w: &mut W) -> io::Result<()> {
        for i in 0..self.len() {
            report::write_row(
                w,
                &[self.abscissa[i], self.value[i], self.phi_disp[i], self.phi_gamma[i]],
            )?;
        }
        Ok(())
    }

    /// Header block (the system description unless `header` is given), column row, data rows.
    pub fn write_csv<W: Write>(&self, w: &mut W, header: Option<&str>) -> io::Result<()> {
        let own;
        let text = match header {
            Some(h) => h,
            None => {
                own = format!("sweep = {}\n{}", self.sweep_variable.name(), self.system.describe());
                &own
            }
        };
        report::write_comment_block(w, text)?;
        writeln!(w, "{}", Self::CSV_COLUMNS)?;
        self.write_csv_rows(w)
    }

    pub fn min_max(&self) -> Option<(f64, f64)> {
        self.value.iter().fold(None, |acc, &v| match acc {
            None => Some((v, v)),
            Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
        })
    }

    /// Sign changes between consecutive samples.
    pub fn crossings(&self) -> usize {
        count_crossings(&self.value)
    }
}

pub fn count_crossings(values: &[f64]) -> usize {
    values
        .windows(2)
        .filter(|w| (w[0] < 0.0 && w[1] > 0.0) || (w[0] > 0.0 && w[1] < 0.0) || (w[0] != 0.0 && w[1] == 0.0))
        .count()
}

/// Evaluates V at each sweep value, in parallel, keeping input order.
///
/// `at_center` selects the closed centre form for every sweep but `Tau`;
/// otherwise V(LD) comes from the windowed integrals.
pub fn sweep(
    template: &TwoCrystalSystem,
    variable: SweepVariable,
    values: &[f64],
    at_center: bool,
    quadrature_order: usize,
) -> Result<VisibilityCurve> {
    if values.is_empty() {
        return config("sweep needs at least one value");
    }
    template.check_interference()?;
    let rows: Vec<Result<(f64, f64, f64)>> = values
        .par_iter()
        .map(|&v| {
            let (sys, tau) = match variable {
                SweepVariable::Tau => (*template, v),
                SweepVariable::Separation => {
                    let s = template.with_separation(v)?;
                    (s, s.center_delay())
                }
                SweepVariable::ApertureDiameter => {
                    let s = template.with_aperture(ApertureModel::circular(v, v)?)?;
                    (s, s.center_delay())
                }
                SweepVariable::GaussianRadius => {
                    let s = template.with_aperture(ApertureModel::gaussian(v, v)?)?;
                    (s, s.center_delay())
                }
            };
            let value = if at_center && variable != SweepVariable::Tau {
                visibility_center(&sys, CenterForm::Auto, quadrature_order)?
            } else {
                visibility_tau(tau, &sys, quadrature_order)?
            };
            Ok((value, sys.phi_disp(), sys.phi_gamma()))
        })
        .collect();
    let mut curve = VisibilityCurve {
        sweep_variable: variable,
        abscissa: values.to_vec(),
        value: Vec::with_capacity(values.len()),
        phi_disp: Vec::with_capacity(values.len()),
        phi_gamma: Vec::with_capacity(values.len()),
        system: *template,
    };
    for r in rows {
        let (v, pd, pg) = r?;
        curve.value.push(v);
        curve.phi_disp.push(pd);
        curve.phi_gamma.push(pg);
    }
    Ok(curve)
}

pub fn visibility_vs_separation(
    template: &TwoCrystalSystem,
    d_values: &[f64],
    at_center: bool,
    quadrature_order: usize,
) -> Result<VisibilityCurve> {
    sweep(
        template,
        SweepVariable::Separation,
        d_values,
        at_center,
        quadrature_order,
    )
}

pub fn visibility_vs_delay(
    system: &TwoCrystalSystem,
    taus: &[f64],
    quadrature_order: usize,
) -> Result<VisibilityCurve> {
    sweep(system, SweepVariable::Tau, taus, false, quadrature_order)
}
