//! Longitudinal χ⁽²⁾(z) profiles and their transforms χ̃(Δ) = ∫χ(z)e^{iΔz}dz.
//!
//! The output face of the last crystal sits at z = 0; every medium occupies z ≤ 0.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::{self, Write};

use num_complex::Complex64;

use crate::dispersion::{CrystalSpec, GapSpec};
use crate::error::{config, Result};
use crate::report;
use crate::special::sinc;

const DEFAULT_M_MAX: usize = 16;

fn shifted_sinc(length: f64, arg: f64) -> Complex64 {
    let half = 0.5 * length * arg;
    Complex64::from_polar(length * sinc(half), -half)
}

/// χ₀L·sinc(LΔ/2)·e^{−iLΔ/2}.
pub fn chi_tilde_bulk(delta: f64, thickness: f64, chi0: f64) -> Complex64 {
    shifted_sinc(thickness, delta) * chi0
}

/// Transform of χ₀cos(2πz/Λ) over a crystal of thickness L.
pub fn chi_tilde_sinusoidal(delta: f64, thickness: f64, period: f64, chi0: f64) -> Complex64 {
    let k = 2.0 * PI / period;
    (shifted_sinc(thickness, delta + k) + shifted_sinc(thickness, delta - k)) * (0.5 * chi0)
}

/// χ₀L·Σ_m G_m·sinc[L(Δ+K_m)/2]·e^{−iL(Δ+K_m)/2}, K_m = 2πm/Λ.
pub fn chi_tilde_periodic(delta: f64, profile: &PeriodicProfile) -> Complex64 {
    let k = 2.0 * PI / profile.period;
    let mut acc = Complex64::new(0.0, 0.0);
    for (m, g) in profile.iter() {
        if g.norm_sqr() == 0.0 {
            continue;
        }
        acc += g * shifted_sinc(profile.thickness, delta + k * m as f64);
    }
    acc * profile.chi0
}

/// Sum over crystals of ε_jχ₀_jL_j·sinc(L_jΔ/2)e^{−iL_jΔ/2}·e^{−iΣ_{k>j}(L_kΔ + d_kΔ′_k)}.
///
/// `delta_prime_per_gap[i]` is the mismatch in the gap in front of crystal i+1.
pub fn chi_tilde_cascade(delta: f64, cascade: &Cascade, delta_prime_per_gap: &[f64]) -> Result<Complex64> {
    if delta_prime_per_gap.len() != cascade.gaps.len() {
        return config(format!(
            "cascade has {} gaps but {} gap mismatch values were given",
            cascade.gaps.len(),
            delta_prime_per_gap.len()
        ));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    // walk from the output face backwards, accumulating the phase of everything downstream
    let mut downstream = 0.0;
    for j in (0..cascade.crystals.len()).rev() {
        let c = &cascade.crystals[j];
        let term = chi_tilde_bulk(delta, c.thickness, c.chi0 * c.epsilon.value());
        acc += term * Complex64::from_polar(1.0, -downstream);
        if j > 0 {
            downstream += c.thickness * delta + cascade.gaps[j - 1].length * delta_prime_per_gap[j - 1];
        }
    }
    Ok(acc)
}

/// Periodic nonlinearity χ₀Σ_m G_m e^{2πimz/Λ} over a crystal of thickness L.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicProfile {
    thickness: f64,
    period: f64,
    chi0: f64,
    coefficients: Vec<Complex64>,
    truncation_error: Option<f64>,
}

impl PeriodicProfile {
    /// `coefficients[i]` is G_m for m = i − m_max; the length must be odd.
    pub fn new(thickness: f64, period: f64, chi0: f64, coefficients: Vec<Complex64>) -> Result<Self> {
        check_lengths(thickness, Some(period))?;
        if coefficients.is_empty() || coefficients.len().is_multiple_of(2) {
            return config("Fourier coefficients must be indexed m = -m_max..=m_max (odd, non-empty list)");
        }
        Ok(PeriodicProfile {
            thickness,
            period,
            chi0,
            coefficients,
            truncation_error: None,
        })
    }

    /// Square-wave poling: +χ₀ on the first `duty` fraction of each period, −χ₀ on the rest.
    pub fn poled(thickness: f64, period: f64, chi0: f64, duty: f64, m_max: Option<usize>) -> Result<Self> {
        if !(duty > 0.0 && duty < 1.0) {
            return config(format!("duty cycle must lie in (0, 1), got {duty}"));
        }
        let m_max = m_max.unwrap_or(DEFAULT_M_MAX);
        let m_max_i = m_max as i64;
        let coefficients = (-m_max_i..=m_max_i).map(|m| square_wave_coefficient(m, duty)).collect();
        let mut p = PeriodicProfile::new(thickness, period, chi0, coefficients)?;
        p.truncation_error = Some(largest_dropped_square_wave(m_max, duty));
        Ok(p)
    }

    pub fn thickness(&self) -> f64 {
        self.thickness
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn chi0(&self) -> f64 {
        self.chi0
    }

    pub fn m_max(&self) -> usize {
        (self.coefficients.len() - 1) / 2
    }

    pub fn coefficient(&self, m: i64) -> Complex64 {
        let idx = m + self.m_max() as i64;
        if idx < 0 || idx as usize >= self.coefficients.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coefficients[idx as usize]
        }
    }

    /// (m, G_m) pairs.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let m_max = self.m_max() as i64;
        self.coefficients
            .iter()
            .enumerate()
            .map(move |(i, &g)| (i as i64 - m_max, g))
    }

    /// Magnitude of the largest coefficient dropped by the truncation, if known.
    pub fn truncation_error(&self) -> Option<f64> {
        self.truncation_error
    }
}

fn square_wave_coefficient(m: i64, duty: f64) -> Complex64 {
    if m == 0 {
        return Complex64::new(2.0 * duty - 1.0, 0.0);
    }
    let mf = m as f64;
    // (i/πm)(e^{−2πima} − 1)
    (Complex64::from_polar(1.0, -2.0 * PI * mf * duty) - 1.0) * Complex64::new(0.0, 1.0 / (PI * mf))
}

fn largest_dropped_square_wave(m_max: usize, duty: f64) -> f64 {
    let mut best: f64 = 0.0;
    let mut m = m_max + 1;
    // |G_m| ≤ 2/(π|m|), so the scan can stop once the envelope drops below the best hit
    while 2.0 / (PI * m as f64) > best && m < m_max + 1_000_000 {
        best = best.max(square_wave_coefficient(m as i64, duty).norm());
        m += 1;
    }
    best
}

/// Ordered crystals with the gaps between them; the last crystal ends at z = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Cascade {
    crystals: Vec<CrystalSpec>,
    gaps: Vec<GapSpec>,
}

impl Cascade {
    /// `gaps[i]` separates `crystals[i]` from `crystals[i + 1]`.
    pub fn new(crystals: Vec<CrystalSpec>, gaps: Vec<GapSpec>) -> Result<Self> {
        if crystals.is_empty() {
            return config("cascade needs at least one crystal");
        }
        if gaps.len() + 1 != crystals.len() {
            return config(format!(
                "cascade of {} crystals needs {} gaps, got {}",
                crystals.len(),
                crystals.len() - 1,
                gaps.len()
            ));
        }
        for c in &crystals {
            c.validate()?;
        }
        for g in &gaps {
            g.validate()?;
        }
        let first = &crystals[0];
        let same = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs());
        for c in &crystals[1..] {
            if !same(c.dispersion, first.dispersion) || !same(c.walkoff.norm(), first.walkoff.norm()) {
                return config("cascade crystals must share one material (equal D and |M|)");
            }
        }
        Ok(Cascade { crystals, gaps })
    }

    pub fn crystals(&self) -> &[CrystalSpec] {
        &self.crystals
    }

    pub fn gaps(&self) -> &[GapSpec] {
        &self.gaps
    }

    pub fn total_length(&self) -> f64 {
        self.crystals.iter().map(|c| c.thickness).sum::<f64>() + self.gaps.iter().map(|g| g.length).sum::<f64>()
    }

    pub fn gap_mismatch_at(&self, delta: f64) -> Vec<f64> {
        self.gaps.iter().map(|g| g.delta_prime_at(delta)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NonlinearityProfile {
    Bulk { thickness: f64, chi0: f64 },
    Sinusoidal { thickness: f64, period: f64, chi0: f64 },
    FourierPeriodic(PeriodicProfile),
    Cascade(Cascade),
}

fn check_lengths(thickness: f64, period: Option<f64>) -> Result<()> {
    if !(thickness > 0.0 && thickness.is_finite()) {
        return config(format!("thickness must be positive, got {thickness}"));
    }
    if let Some(p) = period {
        if !(p > 0.0 && p.is_finite()) {
            return config(format!("period must be positive, got {p}"));
        }
    }
    Ok(())
}

impl NonlinearityProfile {
    pub fn bulk(thickness: f64, chi0: f64) -> Result<Self> {
        check_lengths(thickness, None)?;
        Ok(NonlinearityProfile::Bulk { thickness, chi0 })
    }

    pub fn sinusoidal(thickness: f64, period: f64, chi0: f64) -> Result<Self> {
        check_lengths(thickness, Some(period))?;
        Ok(NonlinearityProfile::Sinusoidal {
            thickness,
            period,
            chi0,
        })
    }

    pub fn chi_tilde(&self, delta: f64) -> Complex64 {
        match self {
            NonlinearityProfile::Bulk { thickness, chi0 } => chi_tilde_bulk(delta, *thickness, *chi0),
            NonlinearityProfile::Sinusoidal {
                thickness,
                period,
                chi0,
            } => chi_tilde_sinusoidal(delta, *thickness, *period, *chi0),
            NonlinearityProfile::FourierPeriodic(p) => chi_tilde_periodic(delta, p),
            NonlinearityProfile::Cascade(c) => {
                chi_tilde_cascade(delta, c, &c.gap_mismatch_at(delta)).expect("gap list built from the cascade itself")
            }
        }
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            NonlinearityProfile::Bulk { .. } => "bulk",
            NonlinearityProfile::Sinusoidal { .. } => "sinusoidal",
            NonlinearityProfile::FourierPeriodic(_) => "fourier_periodic",
            NonlinearityProfile::Cascade(_) => "cascade",
        }
    }

    /// Key/value description used as a CSV header.
    pub fn describe(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "profile = {}", self.variant_name());
        match self {
            NonlinearityProfile::Bulk { thickness, chi0 } => {
                let _ = writeln!(s, "thickness_m = {}", report::num(*thickness));
                let _ = writeln!(s, "chi0 = {}", report::num(*chi0));
            }
            NonlinearityProfile::Sinusoidal {
                thickness,
                period,
                chi0,
            } => {
                let _ = writeln!(s, "thickness_m = {}", report::num(*thickness));
                let _ = writeln!(s, "period_m = {}", report::num(*period));
                let _ = writeln!(s, "chi0 = {}", report::num(*chi0));
            }
            NonlinearityProfile::FourierPeriodic(p) => {
                let _ = writeln!(s, "thickness_m = {}", report::num(p.thickness));
                let _ = writeln!(s, "period_m = {}", report::num(p.period));
                let _ = writeln!(s, "chi0 = {}", report::num(p.chi0));
                let _ = writeln!(s, "m_max = {}", p.m_max());
                if let Some(t) = p.truncation_error {
                    let _ = writeln!(s, "truncation_error = {}", report::num(t));
                }
            }
            NonlinearityProfile::Cascade(c) => {
                for (i, k) in c.crystals.iter().enumerate() {
                    let _ = writeln!(
                        s,
                        "crystal[{i}] = thickness_m {} chi0 {} epsilon {}",
                        report::num(k.thickness),
                        report::num(k.chi0),
                        k.epsilon
                    );
                }
                for (i, g) in c.gaps.iter().enumerate() {
                    let _ = writeln!(
                        s,
                        "gap[{i}] = length_m {} delta_prime {} slope {}",
                        report::num(g.length),
                        report::num(g.delta_prime),
                        report::num(g.delta_prime_slope)
                    );
                }
            }
        }
        s
    }
}

/// χ̃ sampled on a uniform Δ grid.
#[derive(Debug, Clone, PartialEq)]
pub struct StateFunctionSample {
    pub delta: Vec<f64>,
    pub amplitude: Vec<Complex64>,
    pub magnitude_sq: Vec<f64>,
}

impl StateFunctionSample {
    pub fn len(&self) -> usize {
        self.delta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delta.is_empty()
    }

    pub const CSV_COLUMNS: &'static str = "delta,re,im,magnitude_sq";

    pub fn write_csv_rows<W: Write>(&self, w: &mut W) -> io::Result<()> {
        for i in 0..self.len() {
            let a = self.amplitude[i];
            report::write_row(w, &[self.delta[i], a.re, a.im, self.magnitude_sq[i]])?;
        }
        Ok(())
    }

    /// Header block, column row and data rows.
    pub fn write_csv<W: Write>(&self, w: &mut W, header: &str) -> io::Result<()> {
        report::write_comment_block(w, header)?;
        writeln!(w, "{}", Self::CSV_COLUMNS)?;
        self.write_csv_rows(w)
    }
}

pub fn sample_state_function(
    profile: &NonlinearityProfile,
    delta_min: f64,
    delta_max: f64,
    n_points: usize,
) -> Result<StateFunctionSample> {
    if n_points < 2 {
        return config(format!("state-function grid needs at least 2 points, got {n_points}"));
    }
    if !(delta_min < delta_max) || !delta_min.is_finite() || !delta_max.is_finite() {
        return config(format!(
            "state-function grid needs delta_min < delta_max, got [{delta_min}, {delta_max}]"
        ));
    }
    let delta = uniform_grid(delta_min, delta_max, n_points);
    let amplitude: Vec<Complex64> = delta.iter().map(|&d| profile.chi_tilde(d)).collect();
    let magnitude_sq = amplitude.iter().map(|a| a.norm_sqr()).collect();
    Ok(StateFunctionSample {
        delta,
        amplitude,
        magnitude_sq,
    })
}

/// n points from a to b inclusive; the endpoints are exact.
pub fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let step = (b - a) / (n - 1) as f64;
    (0..n)
        .map(|i| if i + 1 == n { b } else { a + step * i as f64 })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::Sign;
    use crate::vec2::Vec2;
    use proptest::prelude::*;

    const L: f64 = 1e-3;

    fn crystal(thickness: f64) -> CrystalSpec {
        CrystalSpec::new(thickness, 1.9e-10, Vec2::new(0.07, 0.0)).unwrap()
    }

    fn pair(epsilon: Sign, d: f64) -> Cascade {
        Cascade::new(
            vec![crystal(L), crystal(L).with_epsilon(epsilon)],
            vec![GapSpec::new(d, 185.0).unwrap()],
        )
        .unwrap()
    }

    #[test]
    fn bulk_examples() {
        assert_eq!(chi_tilde_bulk(0.0, L, 2.0), Complex64::new(2.0 * L, 0.0));
        assert!(chi_tilde_bulk(2.0 * PI / L, L, 1.0).norm() < 1e-18);
        let v = chi_tilde_bulk(PI / L, L, 1.0);
        assert!((v.norm() - 2.0 / PI * L).abs() < 1e-15);
        assert!((v.arg() + PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn periodic_reduces_to_bulk_and_sinusoid() {
        let g0 = PeriodicProfile::new(L, 1e-4, 1.0, vec![Complex64::new(1.0, 0.0)]).unwrap();
        let half = Complex64::new(0.5, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let sin = PeriodicProfile::new(L, 1e-4, 1.0, vec![half, zero, half]).unwrap();
        for i in 0..50 {
            let d = -1e5 + 4e3 * i as f64;
            assert!((chi_tilde_periodic(d, &g0) - chi_tilde_bulk(d, L, 1.0)).norm() < 1e-18);
            assert!((chi_tilde_periodic(d, &sin) - chi_tilde_sinusoidal(d, L, 1e-4, 1.0)).norm() < 1e-18);
        }
    }

    #[test]
    fn periodic_first_order_peak() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let p = PeriodicProfile::new(L, 1e-4, 1.0, vec![zero, zero, one]).unwrap();
        let v = chi_tilde_periodic(-2.0 * PI / 1e-4, &p);
        assert!((v - Complex64::new(L, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn sinusoid_examples() {
        let lam = 1e-4;
        // first-order QPM peak: χ₀L/2 from the matching exponential
        let v = chi_tilde_sinusoidal(2.0 * PI / lam, 0.1, lam, 1.0);
        assert!((v.norm() - 0.5 * 0.1).abs() < 1e-3 * 0.05);
        assert!(chi_tilde_sinusoidal(0.0, lam, lam, 1.0).norm() < 1e-18);
        assert!(chi_tilde_sinusoidal(0.0, 2.0 * lam, lam, 1.0).norm() < 1e-18);
    }

    #[test]
    fn cascade_contact_equals_double_bulk() {
        let c = pair(Sign::Plus, 0.0);
        for i in 0..101 {
            let d = -3e4 + 600.0 * i as f64;
            let a = chi_tilde_cascade(d, &c, &[185.0]).unwrap();
            let b = chi_tilde_bulk(d, 2.0 * L, 1.0);
            assert!((a.norm() - b.norm()).abs() < 1e-12 * L);
            // same origin convention, so the full complex values agree too
            assert!((a - b).norm() < 1e-12 * L);
        }
    }

    #[test]
    fn cascade_opposite_signs_cancel_at_zero() {
        let c = pair(Sign::Minus, 0.0);
        assert!(chi_tilde_cascade(0.0, &c, &[0.0]).unwrap().norm() < 1e-20);
    }

    #[test]
    fn single_crystal_cascade_is_bulk() {
        let c = Cascade::new(vec![crystal(L)], vec![]).unwrap();
        for d in [-1e4, 0.0, 3.3e3] {
            assert_eq!(chi_tilde_cascade(d, &c, &[]).unwrap(), chi_tilde_bulk(d, L, 1.0));
        }
    }

    #[test]
    fn cascade_errors() {
        let c = pair(Sign::Plus, 1e-3);
        assert!(chi_tilde_cascade(0.0, &c, &[]).is_err());
        assert!(Cascade::new(vec![crystal(L), crystal(L)], vec![]).is_err());
        assert!(Cascade::new(vec![], vec![]).is_err());
        let other = CrystalSpec::new(L, 2.5e-10, Vec2::new(0.07, 0.0)).unwrap();
        assert!(Cascade::new(vec![crystal(L), other], vec![GapSpec::new(0.0, 0.0).unwrap()]).is_err());
        // antiparallel walkoff is the same material
        let flipped = CrystalSpec::new(L, 1.9e-10, Vec2::new(-0.07, 0.0)).unwrap();
        assert!(Cascade::new(vec![crystal(L), flipped], vec![GapSpec::new(0.0, 0.0).unwrap()]).is_ok());
    }

    #[test]
    fn two_crystal_closed_form() {
        // ε₁ = ε₂ = 1, equal L: χ₀L sinc(LΔ/2) e^{−iLΔ/2}[e^{−i(LΔ+dΔ′)} + 1]
        let d = 5e-3;
        let c = pair(Sign::Plus, d);
        for i in 0..40 {
            let delta = -2e4 + 1e3 * i as f64;
            let got = chi_tilde_cascade(delta, &c, &[185.0]).unwrap();
            let want = chi_tilde_bulk(delta, L, 1.0) * (Complex64::from_polar(1.0, -(L * delta + d * 185.0)) + 1.0);
            assert!((got - want).norm() < 1e-15 * L);
        }
    }

    #[test]
    fn poled_coefficients() {
        let p = PeriodicProfile::poled(L, 1e-4, 1.0, 0.5, None).unwrap();
        assert_eq!(p.m_max(), 16);
        assert!(p.coefficient(0).norm() < 1e-16);
        assert!(p.coefficient(2).norm() < 1e-16);
        assert!((p.coefficient(1).norm() - 2.0 / PI).abs() < 1e-15);
        assert!((p.coefficient(-3).norm() - 2.0 / (3.0 * PI)).abs() < 1e-15);
        let t = p.truncation_error().unwrap();
        assert!((t - 2.0 / (17.0 * PI)).abs() < 1e-15);
        assert_eq!(p.coefficient(40), Complex64::new(0.0, 0.0));
        assert!(PeriodicProfile::poled(L, 1e-4, 1.0, 1.0, None).is_err());
    }

    #[test]
    fn sampling_grid() {
        let prof = NonlinearityProfile::bulk(L, 1.0).unwrap();
        let s = sample_state_function(&prof, -4.0 * PI / L, 4.0 * PI / L, 2).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.delta, vec![-4.0 * PI / L, 4.0 * PI / L]);

        let s = sample_state_function(&prof, -4.0 * PI / L, 4.0 * PI / L, 801).unwrap();
        for (i, &d) in s.delta.iter().enumerate() {
            assert_eq!(s.magnitude_sq[i], s.amplitude[i].norm_sqr());
            let k = (d * L / (2.0 * PI)).round();
            if k != 0.0 && (d * L / (2.0 * PI) - k).abs() < 1e-9 {
                assert!(s.magnitude_sq[i] < 1e-24 * L * L);
            }
        }
        // zeros at ±2π/L·{1,2} land on grid points 0, 100, 200, 600, 700, 800
        for idx in [0usize, 200, 600, 800] {
            assert!(s.magnitude_sq[idx] < 1e-26);
        }
        assert!(sample_state_function(&prof, 1.0, 1.0, 10).is_err());
        assert!(sample_state_function(&prof, 0.0, 1.0, 1).is_err());
    }

    #[test]
    fn gap_modulation_under_envelope() {
        let c = pair(Sign::Plus, 20e-3);
        let prof = NonlinearityProfile::Cascade(c);
        let s = sample_state_function(&prof, -2e4, 2e4, 2001).unwrap();
        for (i, &d) in s.delta.iter().enumerate() {
            let env = 4.0 * chi_tilde_bulk(d, L, 1.0).norm_sqr();
            assert!(s.magnitude_sq[i] <= env * (1.0 + 1e-12) + 1e-30);
        }
    }

    #[test]
    fn csv_layout() {
        let prof = NonlinearityProfile::bulk(L, 1.0).unwrap();
        let s = sample_state_function(&prof, 0.0, 1.0, 2).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf, &prof.describe()).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# profile = bulk");
        assert!(lines.contains(&"delta,re,im,magnitude_sq"));
        assert_eq!(lines.last().unwrap().split(',').count(), 4);
    }

    proptest! {
        #[test]
        fn cascade_linear_in_chi0(a in -3.0..3.0f64, delta in -5e4..5e4f64) {
            let base = pair(Sign::Plus, 2e-3);
            let mut crystals = base.crystals().to_vec();
            let scaled_first = crystals[0].with_chi0(a);
            crystals[0] = scaled_first;
            let scaled = Cascade::new(crystals.clone(), base.gaps().to_vec()).unwrap();
            crystals[0] = crystals[0].with_chi0(0.0);
            let without_first = Cascade::new(crystals, base.gaps().to_vec()).unwrap();
            let full = chi_tilde_cascade(delta, &base, &[185.0]).unwrap();
            let part = chi_tilde_cascade(delta, &without_first, &[185.0]).unwrap();
            let got = chi_tilde_cascade(delta, &scaled, &[185.0]).unwrap();
            let want = part + (full - part) * a;
            prop_assert!((got - want).norm() <= 1e-12 * L);
        }

        #[test]
        fn cascade_epsilon_flips_term(delta in -5e4..5e4f64, d in 0.0..0.05f64) {
            let plus = pair(Sign::Plus, d);
            let minus = pair(Sign::Minus, d);
            let dp = [185.0];
            let a = chi_tilde_cascade(delta, &plus, &dp).unwrap();
            let b = chi_tilde_cascade(delta, &minus, &dp).unwrap();
            // the last crystal's term is unchanged phase-wise: a − b = 2·term₂
            let term2 = chi_tilde_bulk(delta, L, 1.0);
            prop_assert!((a - b - term2 * 2.0).norm() <= 1e-12 * L);
        }
    }
}
