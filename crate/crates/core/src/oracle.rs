//! Brute-force quadrature of the pre-reduction integrals, used to check the
//! closed forms: the 𝒩 kernel over the pupil planes, V(τ) assembled from
//! oracle kernels, and χ̃(Δ) by direct integration over z.

use std::f64::consts::{FRAC_PI_4, PI};
use std::io::{self, Write};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::apertures::{n_kernel, ApertureModel, NKernelArgs};
use crate::dispersion::PumpSpec;
use crate::error::{config, Error, Result};
use crate::interference::TwoCrystalSystem;
use crate::nonlinearity::NonlinearityProfile;
use crate::quadrature::GaussLegendre;
use crate::report;
use crate::vec2::Vec2;

pub const MIN_POINTS_PER_CYCLE: f64 = 6.0;
const ADAPTIVE_MAX_POINTS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureScheme {
    /// Fixed rule at `points_per_axis`, checked against twice as many points.
    GaussLegendre,
    /// Doubles the rule until successive estimates agree.
    Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub scheme: QuadratureScheme,
    pub points_per_axis: usize,
    /// Half-width of each integration axis in units of the Gaussian decay scale.
    pub domain_halfwidth: f64,
    pub target_rel_err: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            scheme: QuadratureScheme::GaussLegendre,
            points_per_axis: 64,
            domain_halfwidth: 8.0,
            target_rel_err: 1e-8,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.points_per_axis < 16 {
            return config(format!(
                "points_per_axis must be at least 16, got {}",
                self.points_per_axis
            ));
        }
        if !(self.target_rel_err > 0.0) {
            return config(format!("target_rel_err must be positive, got {}", self.target_rel_err));
        }
        if !(self.domain_halfwidth > 0.0 && self.domain_halfwidth.is_finite()) {
            return config(format!(
                "domain_halfwidth must be positive, got {}",
                self.domain_halfwidth
            ));
        }
        Ok(())
    }
}

/// One-axis factor of a kernel estimate.
trait AxisIntegral {
    /// Phase cycles across the part of the domain where the Gaussian
    /// envelope exceeds `tol`, and the fraction of the rule's nodes that
    /// fall inside that part.
    fn sampling(&self, tol: f64) -> (f64, f64);
    fn eval(&self, gl: &GaussLegendre) -> Complex64;
}

/// Envelope radius, in decay-scale units, where exp(−t²) drops to `tol`.
fn effective_halfwidth(h: f64, tol: f64) -> f64 {
    (-tol.ln()).max(1.0).sqrt().min(h)
}

/// Share of Gauss–Legendre nodes on [−1, 1] lying within |x| ≤ f
/// (arcsine node density).
fn node_share(f: f64) -> f64 {
    2.0 / PI * f.clamp(0.0, 1.0).asin()
}

/// Pupil-plane form for Gaussian pupils, one Cartesian component:
/// ⟨exp(i k_p/8·[(z₀ + y)²/s_k − (Z − z₀ − y)²/s_n])⟩ over y = y_A − y_B,
/// weighted by exp(−y_A²/r_A²)·exp(−y_B²/r_B²).
struct PupilAxis {
    kp: f64,
    z0: f64,
    big_z: f64,
    s_k: f64,
    s_n: f64,
    r_a: f64,
    r_b: f64,
    h: f64,
}

impl PupilAxis {
    fn phase(&self, y: f64) -> f64 {
        self.kp / 8.0 * ((self.z0 + y).powi(2) / self.s_k - (self.big_z - self.z0 - y).powi(2) / self.s_n)
    }

    fn slope(&self, y: f64) -> f64 {
        self.kp / 4.0 * ((self.z0 + y) / self.s_k + (self.big_z - self.z0 - y) / self.s_n)
    }
}

impl AxisIntegral for PupilAxis {
    fn sampling(&self, tol: f64) -> (f64, f64) {
        let w = effective_halfwidth(self.h, tol);
        let ymax = w * (self.r_a + self.r_b);
        let g = self.slope(ymax).abs().max(self.slope(-ymax).abs());
        (
            g * 2.0 * w * self.r_a.max(self.r_b) / (2.0 * PI),
            node_share(w / self.h),
        )
    }

    fn eval(&self, gl: &GaussLegendre) -> Complex64 {
        let side = |r: f64| -> Vec<(f64, f64)> {
            gl.mapped(-self.h * r, self.h * r)
                .map(|(y, w)| (y, w * (-(y * y) / (r * r)).exp()))
                .collect()
        };
        let a = side(self.r_a);
        let b = side(self.r_b);
        let norm: f64 = a.iter().map(|p| p.1).sum::<f64>() * b.iter().map(|p| p.1).sum::<f64>();
        let mut acc = Complex64::new(0.0, 0.0);
        for &(ya, wa) in &a {
            let mut row = Complex64::new(0.0, 0.0);
            for &(yb, wb) in &b {
                row += Complex64::from_polar(wb, self.phase(ya - yb));
            }
            acc += row * wa;
        }
        acc / norm
    }
}

/// ∫exp(−iαt² + iβt)dt along the real axis, α > 0, evaluated on the contour
/// t = e^{−iπ/4}u where the integrand is a Gaussian in u.
struct FresnelAxis {
    alpha: f64,
    beta: f64,
    h: f64,
}

impl FresnelAxis {
    fn span(&self) -> (f64, f64) {
        let centre = self.beta / (2.0 * std::f64::consts::SQRT_2 * self.alpha);
        let half = self.h / self.alpha.sqrt();
        (centre - half, centre + half)
    }
}

impl AxisIntegral for FresnelAxis {
    fn sampling(&self, tol: f64) -> (f64, f64) {
        let w = effective_halfwidth(self.h, tol);
        let width = 2.0 * w / self.alpha.sqrt();
        (
            (self.beta.abs() / std::f64::consts::SQRT_2) * width / (2.0 * PI),
            node_share(w / self.h),
        )
    }

    fn eval(&self, gl: &GaussLegendre) -> Complex64 {
        let rot = Complex64::from_polar(1.0, -FRAC_PI_4);
        let ib = Complex64::new(0.0, self.beta) * rot;
        let (a, b) = self.span();
        gl.integrate(a, b, |u| (ib * u - self.alpha * u * u).exp()) * rot
    }
}

fn undersampling(points: usize, cycles: f64, share: f64) -> Option<Error> {
    if cycles <= 0.0 {
        return None;
    }
    let ppc = points as f64 * share / cycles;
    (ppc < MIN_POINTS_PER_CYCLE).then_some(Error::Undersampled {
        points,
        cycles,
        points_per_cycle: ppc,
        required: MIN_POINTS_PER_CYCLE,
    })
}

/// Evaluates the product of the axis integrals at n points per axis.
fn product_at(axes: &[&dyn AxisIntegral], n: usize, tol: f64) -> Result<Complex64> {
    for a in axes {
        let (cycles, share) = a.sampling(tol);
        if let Some(e) = undersampling(n, cycles, share) {
            return Err(e);
        }
    }
    let gl = GaussLegendre::new(n)?;
    Ok(axes.iter().fold(Complex64::new(1.0, 0.0), |acc, a| acc * a.eval(&gl)))
}

fn rel_change(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

fn converge(axes: &[&dyn AxisIntegral], quad: &QuadratureSpec) -> Result<Complex64> {
    match quad.scheme {
        QuadratureScheme::GaussLegendre => {
            let n = quad.points_per_axis;
            let coarse = product_at(axes, n, quad.target_rel_err)?;
            let fine = product_at(axes, 2 * n, quad.target_rel_err)?;
            let change = rel_change(coarse, fine);
            if change > quad.target_rel_err {
                return Err(Error::NonConvergence {
                    coarse_points: n,
                    coarse,
                    fine_points: 2 * n,
                    fine,
                    rel_change: change,
                    target: quad.target_rel_err,
                });
            }
            Ok(fine)
        }
        QuadratureScheme::Adaptive => {
            let mut n = quad.points_per_axis;
            // start from the first rule that resolves the phase
            let mut prev = loop {
                match product_at(axes, n, quad.target_rel_err) {
                    Ok(v) => break v,
                    Err(Error::Undersampled { .. }) if 2 * n <= ADAPTIVE_MAX_POINTS => n *= 2,
                    Err(e) => return Err(e),
                }
            };
            loop {
                let next = product_at(axes, 2 * n, quad.target_rel_err)?;
                let change = rel_change(prev, next);
                if change <= quad.target_rel_err {
                    return Ok(next);
                }
                if 4 * n > ADAPTIVE_MAX_POINTS {
                    return Err(Error::NonConvergence {
                        coarse_points: n,
                        coarse: prev,
                        fine_points: 2 * n,
                        fine: next,
                        rel_change: change,
                        target: quad.target_rel_err,
                    });
                }
                prev = next;
                n *= 2;
            }
        }
    }
}

/// 𝒩 by direct quadrature.
///
/// Gaussian (and circular, via its Gaussian stand-in) pupils integrate the
/// Fresnel-propagated kernel over both pupil planes; the tensor-product rule
/// is summed per Cartesian component, which is the same sum reordered.
/// Delta pupils reduce to a product of four 1-D Fresnel integrals in q.
pub fn oracle_n_function(
    args: &NKernelArgs,
    pump: &PumpSpec,
    aperture: &ApertureModel,
    quad: &QuadratureSpec,
) -> Result<Complex64> {
    quad.validate()?;
    NKernelArgs::new(args.z0, args.big_z, args.s_k, args.s_n)?;
    let kp = pump.k_p();
    match aperture.pupils() {
        Some(p) => {
            let axis = |z0: f64, zz: f64| PupilAxis {
                kp,
                z0,
                big_z: zz,
                s_k: args.s_k,
                s_n: args.s_n,
                r_a: p.r_a,
                r_b: p.r_b,
                h: quad.domain_halfwidth,
            };
            let ax = axis(args.z0.x, args.big_z.x);
            let ay = axis(args.z0.y, args.big_z.y);
            converge(&[&ax, &ay], quad)
        }
        None => {
            let h = quad.domain_halfwidth;
            let ak = 2.0 * args.s_k / kp;
            let an = 2.0 * args.s_n / kp;
            let w = args.big_z - args.z0;
            let kx = FresnelAxis {
                alpha: ak,
                beta: -args.z0.x,
                h,
            };
            let ky = FresnelAxis {
                alpha: ak,
                beta: -args.z0.y,
                h,
            };
            let nx = FresnelAxis {
                alpha: an,
                beta: w.x,
                h,
            };
            let ny = FresnelAxis {
                alpha: an,
                beta: w.y,
                h,
            };
            let k = converge(&[&kx, &ky], quad)?;
            let n = converge(&[&nx, &ny], quad)?;
            let norm = args.s_k * args.s_n / (PI * PI * (kp / 2.0).powi(2));
            Ok(k * n.conj() * norm)
        }
    }
}

/// V(τ) from oracle kernels, with arguments built from the general walkoff
/// vectors M₁, M₂ of the two crystals.
pub fn oracle_visibility(tau: f64, system: &TwoCrystalSystem, quad: &QuadratureSpec) -> Result<f64> {
    system.check_interference()?;
    quad.validate()?;
    let l = system.thickness();
    let dsp = system.crystal1.dispersion;
    let m1 = system.crystal1.walkoff;
    let m2 = system.crystal2.walkoff;
    let lead = m2 * l;
    let s1 = system.geometry.d1 + system.gap.length;
    let s2 = system.geometry.d1;
    let rho = s1 / s2;
    let den = 1.0 + rho * rho;
    let eps = system.epsilon();
    let gap_phase = Complex64::from_polar(1.0, -system.gap.length * system.gap.delta_prime);
    let gl = GaussLegendre::new(quad.points_per_axis)?;
    let pump = system.pump;
    let ap = system.aperture;

    let window = |c: f64| -> Option<(f64, f64)> {
        let lo = (c - l).max(0.0);
        let hi = c.min(l);
        (hi > lo).then_some((lo, hi))
    };
    let n_at = |z0: Vec2, zz: Vec2, sk: f64, sn: f64| -> Result<Complex64> {
        oracle_n_function(
            &NKernelArgs {
                z0,
                big_z: zz,
                s_k: sk,
                s_n: sn,
            },
            &pump,
            &ap,
            quad,
        )
    };
    let integrate = |c: f64, f: &(dyn Fn(f64) -> Result<f64> + Sync)| -> Result<f64> {
        let Some((a, b)) = window(c) else {
            return Ok(0.0);
        };
        let nodes: Vec<(f64, f64)> = gl.mapped(a, b).collect();
        let vals: Vec<Result<f64>> = nodes.par_iter().map(|&(z, w)| f(z).map(|v| v * w)).collect();
        let mut acc = 0.0;
        for v in vals {
            acc += v?;
        }
        Ok(acc)
    };

    let t = 2.0 * tau / dsp;
    let tau1 = tau - l * dsp;
    let r1 = integrate(t - 2.0 * l, &|z| {
        Ok(n_at(-(m1 * z + lead), (m1 * (tau1 / dsp) + lead) * -2.0, s1, s1)?.re)
    })?;
    let r2 = integrate(t, &|z| Ok(n_at(-(m2 * z), m2 * (-t), s2, s2)?.re))?;
    let r12 = integrate(t - l, &|z| {
        let zz = -((m1 - m2) * z + m2 * (t - l) + lead);
        Ok((n_at(-(m1 * z + lead), zz, s1, s2)? * gap_phase).re)
    })?;
    Ok((r1 / den + r2 * rho * rho / den + 2.0 * eps * rho / den * r12) / l)
}

/// Analytic and oracle kernel values at one argument tuple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleComparison {
    pub args: NKernelArgs,
    pub analytic: Complex64,
    pub oracle: Complex64,
}

impl OracleComparison {
    pub fn rel_err(&self) -> f64 {
        (self.analytic - self.oracle).norm() / self.oracle.norm().max(f64::MIN_POSITIVE)
    }
}

pub fn compare_n_function(
    args: &[NKernelArgs],
    pump: &PumpSpec,
    aperture: &ApertureModel,
    quad: &QuadratureSpec,
) -> Result<Vec<OracleComparison>> {
    args.par_iter()
        .map(|a| {
            Ok(OracleComparison {
                args: *a,
                analytic: n_kernel(a, pump, aperture),
                oracle: oracle_n_function(a, pump, aperture, quad)?,
            })
        })
        .collect()
}

pub const COMPARISON_COLUMNS: &str = "z0_x,z0_y,Z_x,Z_y,s_k,s_n,analytic_re,analytic_im,oracle_re,oracle_im,rel_err";

pub fn write_comparison_csv<W: Write>(w: &mut W, rows: &[OracleComparison], header: &str) -> io::Result<()> {
    report::write_comment_block(w, header)?;
    writeln!(w, "{COMPARISON_COLUMNS}")?;
    for r in rows {
        let a = &r.args;
        report::write_row(
            w,
            &[
                a.z0.x,
                a.z0.y,
                a.big_z.x,
                a.big_z.y,
                a.s_k,
                a.s_n,
                r.analytic.re,
                r.analytic.im,
                r.oracle.re,
                r.oracle.im,
                r.rel_err(),
            ],
        )?;
    }
    Ok(())
}

/// χ̃(Δ) = ∫χ(z)·exp(−i∫_z^0 Δ_local) dz by composite Gauss–Legendre over
/// each medium, with Δ_local = Δ in crystals and Δ′(Δ) in gaps.
pub fn oracle_chi_tilde(delta: f64, profile: &NonlinearityProfile, order: usize) -> Result<Complex64> {
    let gl = GaussLegendre::new(order)?;
    // panels short enough that each spans at most about half a cycle
    let panels = |len: f64, freq: f64| 1 + (freq.abs() * len / PI).ceil() as usize;
    let i = Complex64::new(0.0, 1.0);
    Ok(match profile {
        NonlinearityProfile::Bulk { thickness, chi0 } => {
            gl.integrate_composite(-thickness, 0.0, panels(*thickness, delta), |z| {
                (i * delta * z).exp() * *chi0
            })
        }
        NonlinearityProfile::Sinusoidal {
            thickness,
            period,
            chi0,
        } => {
            let k = 2.0 * PI / period;
            gl.integrate_composite(-thickness, 0.0, panels(*thickness, delta.abs() + k), |z| {
                (i * delta * z).exp() * (chi0 * (k * z).cos())
            })
        }
        NonlinearityProfile::FourierPeriodic(p) => {
            let k = 2.0 * PI / p.period();
            let top = delta.abs() + k * p.m_max() as f64;
            let terms: Vec<(f64, Complex64)> = p.iter().map(|(m, g)| (k * m as f64, g)).collect();
            gl.integrate_composite(-p.thickness(), 0.0, panels(p.thickness(), top), |z| {
                let chi: Complex64 = terms.iter().map(|&(km, g)| g * (i * km * z).exp()).sum();
                chi * (i * delta * z).exp() * p.chi0()
            })
        }
        NonlinearityProfile::Cascade(c) => {
            let crystals = c.crystals();
            let gaps = c.gaps();
            let mut acc = Complex64::new(0.0, 0.0);
            let mut hi = 0.0;
            // accumulated −∫_{hi}^{0} Δ_local
            let mut phase_hi = 0.0;
            for j in (0..crystals.len()).rev() {
                let cr = &crystals[j];
                let lo = hi - cr.thickness;
                let amp = cr.chi0 * cr.epsilon.value();
                let p0 = phase_hi;
                let h0 = hi;
                acc += gl.integrate_composite(lo, hi, panels(cr.thickness, delta), |z| {
                    (i * (p0 + delta * (z - h0))).exp() * amp
                });
                phase_hi -= delta * cr.thickness;
                hi = lo;
                if j > 0 {
                    let g = &gaps[j - 1];
                    phase_hi -= g.delta_prime_at(delta) * g.length;
                    hi -= g.length;
                }
            }
            acc
        }
    })
}

/// Transform of an ideal square-wave poled crystal (+χ₀ for the first `duty`
/// of each period, −χ₀ after), integrated segment by segment.
pub fn oracle_chi_tilde_poled(
    delta: f64,
    thickness: f64,
    period: f64,
    duty: f64,
    chi0: f64,
    order: usize,
) -> Result<Complex64> {
    if !(thickness > 0.0 && period > 0.0 && duty > 0.0 && duty < 1.0) {
        return config("poled profile needs positive lengths and 0 < duty < 1");
    }
    let gl = GaussLegendre::new(order)?;
    let i = Complex64::new(0.0, 1.0);
    let panels = |len: f64| 1 + (delta.abs() * len / PI).ceil() as usize;
    let mut edges = vec![-thickness];
    let first = (-thickness / period).floor() as i64;
    let mut k = first;
    loop {
        let start = k as f64 * period;
        for e in [start, start + duty * period] {
            if e > -thickness && e < 0.0 {
                edges.push(e);
            }
        }
        if start >= 0.0 {
            break;
        }
        k += 1;
    }
    edges.push(0.0);
    edges.sort_by(f64::total_cmp);
    edges.dedup();
    let mut acc = Complex64::new(0.0, 0.0);
    for w in edges.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let frac = (mid / period).rem_euclid(1.0);
        let sign = if frac < duty { 1.0 } else { -1.0 };
        acc += gl.integrate_composite(w[0], w[1], panels(w[1] - w[0]), |z| {
            (i * delta * z).exp() * (sign * chi0)
        });
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apertures::{n_gauss, n_small, GaussianPupils};
    use crate::dispersion::{CrystalSpec, GapSpec, Sign};
    use crate::nonlinearity::{Cascade, PeriodicProfile};

    fn pump() -> PumpSpec {
        PumpSpec::default()
    }

    fn args(z0: (f64, f64), z: (f64, f64), s_k: f64, s_n: f64) -> NKernelArgs {
        NKernelArgs::new(Vec2::new(z0.0, z0.1), Vec2::new(z.0, z.1), s_k, s_n).unwrap()
    }

    #[test]
    fn identity_at_origin() {
        let q = QuadratureSpec::default();
        for ap in [ApertureModel::Delta, ApertureModel::gaussian(0.9e-3, 0.5e-3).unwrap()] {
            let v = oracle_n_function(&args((0.0, 0.0), (0.0, 0.0), 0.8, 0.8), &pump(), &ap, &q).unwrap();
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn fresnel_axis_matches_closed_form() {
        let gl = GaussLegendre::new(64).unwrap();
        for &(alpha, beta) in &[(8.4e-8, 1e-4), (1.2e-7, -3.5e-5), (8.4e-8, 0.0)] {
            let f = FresnelAxis { alpha, beta, h: 8.0 };
            let exact = (Complex64::new(PI, 0.0) / Complex64::new(0.0, alpha)).sqrt()
                * Complex64::from_polar(1.0, beta * beta / (4.0 * alpha));
            let got = f.eval(&gl);
            assert!((got - exact).norm() < 1e-10 * exact.norm());
        }
    }

    #[test]
    fn factored_sum_equals_naive_four_dimensional_sum() {
        let n = 12;
        let gl = GaussLegendre::new(n).unwrap();
        let kp = pump().k_p();
        let (ra, rb, h) = (0.7e-3, 0.4e-3, 4.0);
        let a = args((2e-5, -1e-5), (5e-5, 3e-5), 0.78, 0.75);
        let ax = PupilAxis {
            kp,
            z0: a.z0.x,
            big_z: a.big_z.x,
            s_k: a.s_k,
            s_n: a.s_n,
            r_a: ra,
            r_b: rb,
            h,
        };
        let ay = PupilAxis {
            kp,
            z0: a.z0.y,
            big_z: a.big_z.y,
            s_k: a.s_k,
            s_n: a.s_n,
            r_a: ra,
            r_b: rb,
            h,
        };
        let factored = ax.eval(&gl) * ay.eval(&gl);

        let pts = |r: f64| -> Vec<(f64, f64)> {
            gl.mapped(-h * r, h * r)
                .map(|(y, w)| (y, w * (-(y * y) / (r * r)).exp()))
                .collect()
        };
        let (pa, pb) = (pts(ra), pts(rb));
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = 0.0;
        for &(xa, wxa) in &pa {
            for &(ya, wya) in &pa {
                for &(xb, wxb) in &pb {
                    for &(yb, wyb) in &pb {
                        let y = Vec2::new(xa - xb, ya - yb);
                        let ph = kp / 8.0 * ((a.z0 + y).norm_sqr() / a.s_k - (a.big_z - a.z0 - y).norm_sqr() / a.s_n);
                        let w = wxa * wya * wxb * wyb;
                        num += Complex64::from_polar(w, ph);
                        den += w;
                    }
                }
            }
        }
        let naive = num / den;
        assert!((factored - naive).norm() < 1e-12, "{factored} vs {naive}");
    }

    #[test]
    fn matches_closed_forms_on_sample_args() {
        let q = QuadratureSpec::default();
        let gp = GaussianPupils::new(0.884e-3, 0.6e-3).unwrap();
        let ap = ApertureModel::Gaussian {
            r_a: gp.r_a,
            r_b: gp.r_b,
        };
        let ml = 0.07 * 0.5e-3;
        for &(sk, sn) in &[(0.7675, 0.75), (0.75, 0.75), (0.75, 0.7875)] {
            for &z0 in &[(0.0, 0.0), (ml, 0.0), (-2.0 * ml, ml)] {
                for &z in &[(0.0, 0.0), (-2.0 * ml, 0.0), (3.0 * ml, -ml)] {
                    let a = args(z0, z, sk, sn);
                    let o = oracle_n_function(&a, &pump(), &ap, &q).unwrap();
                    let g = n_gauss(&a, &pump(), &gp);
                    assert!((o - g).norm() < 1e-8 * g.norm(), "{a:?}");
                    let o = oracle_n_function(&a, &pump(), &ApertureModel::Delta, &q).unwrap();
                    let s = n_small(&a, &pump());
                    assert!((o - s).norm() < 1e-8, "{a:?}");
                }
            }
        }
    }

    #[test]
    fn tiny_pupils_give_small_aperture_kernel() {
        let q = QuadratureSpec::default();
        let ap = ApertureModel::gaussian(1e-9, 1e-9).unwrap();
        let a = args((3e-5, -1e-5), (-7e-5, 2e-5), 0.8, 0.75);
        let o = oracle_n_function(&a, &pump(), &ap, &q).unwrap();
        assert!((o - n_small(&a, &pump())).norm() < 1e-5);
    }

    #[test]
    fn refuses_undersampled_grid() {
        let q = QuadratureSpec {
            points_per_axis: 16,
            ..QuadratureSpec::default()
        };
        let ap = ApertureModel::gaussian(2e-3, 2e-3).unwrap();
        let a = args((1e-4, 0.0), (3e-4, 0.0), 0.8, 0.75);
        match oracle_n_function(&a, &pump(), &ap, &q) {
            Err(Error::Undersampled { points_per_cycle, .. }) => assert!(points_per_cycle < 6.0),
            other => panic!("expected refusal, got {other:?}"),
        }
        let adaptive = QuadratureSpec {
            scheme: QuadratureScheme::Adaptive,
            ..q
        };
        let v = oracle_n_function(&a, &pump(), &ap, &adaptive).unwrap();
        let g = n_gauss(&a, &pump(), &ap.pupils().unwrap());
        assert!((v - g).norm() < 1e-7 * g.norm().max(1e-3));
    }

    #[test]
    fn reports_non_convergence_with_both_estimates() {
        let q = QuadratureSpec {
            points_per_axis: 16,
            domain_halfwidth: 8.0,
            target_rel_err: 1e-15,
            ..Default::default()
        };
        let ap = ApertureModel::gaussian(0.2e-3, 0.2e-3).unwrap();
        let a = args((3e-5, 0.0), (7e-5, 0.0), 0.8, 0.75);
        match oracle_n_function(&a, &pump(), &ap, &q) {
            Err(Error::NonConvergence {
                coarse_points,
                fine_points,
                coarse,
                fine,
                ..
            }) => {
                assert_eq!((coarse_points, fine_points), (16, 32));
                assert!(coarse != fine);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec {
            points_per_axis: 8,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(QuadratureSpec {
            target_rel_err: 0.0,
            ..Default::default()
        }
        .validate()
        .is_err());
    }

    #[test]
    fn chi_tilde_quadrature_matches_closed_forms() {
        let l = 1e-3;
        let crystal = CrystalSpec::new(l, 1.9e-10, Vec2::new(0.07, 0.0)).unwrap();
        let profiles = vec![
            NonlinearityProfile::bulk(l, 1.3).unwrap(),
            NonlinearityProfile::sinusoidal(l, 1e-4, 0.7).unwrap(),
            NonlinearityProfile::FourierPeriodic(PeriodicProfile::poled(l, 1e-4, 1.0, 0.3, Some(5)).unwrap()),
            NonlinearityProfile::Cascade(
                Cascade::new(
                    vec![
                        crystal,
                        CrystalSpec {
                            thickness: 0.5e-3,
                            ..crystal
                        }
                        .with_epsilon(Sign::Minus),
                    ],
                    vec![GapSpec::new(5e-3, 185.0).unwrap().with_slope(0.3)],
                )
                .unwrap(),
            ),
        ];
        for p in &profiles {
            for i in 0..100 {
                let d = -1e5 + 2e3 * i as f64 + 17.0;
                let a = p.chi_tilde(d);
                let o = oracle_chi_tilde(d, p, 24).unwrap();
                assert!((a - o).norm() < 1e-10 * l, "{} at {d}: {a} vs {o}", p.variant_name());
            }
        }
    }

    #[test]
    fn poled_series_approaches_square_wave() {
        let (l, lam) = (1e-3, 1e-4);
        let d = -2.0 * PI / lam;
        let exact = oracle_chi_tilde_poled(d, l, lam, 0.5, 1.0, 24).unwrap();
        let mut last = f64::INFINITY;
        for m in [1usize, 5, 25] {
            let p = PeriodicProfile::poled(l, lam, 1.0, 0.5, Some(m)).unwrap();
            let err = (crate::nonlinearity::chi_tilde_periodic(d, &p) - exact).norm();
            assert!(err <= last + 1e-18);
            last = err;
        }
        assert!(last < 1e-3 * exact.norm());
    }
}
