//! The 𝒩 kernel: pupil-averaged Fresnel propagation of the walkoff-displaced
//! two-photon amplitude, for delta and Gaussian pupils.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use crate::dispersion::PumpSpec;
use crate::error::{config, Result};
use crate::vec2::Vec2;

/// Relative |s_k − s_n|/s_n below which the equal-distance form is used.
pub const EQUAL_DISTANCE_THRESHOLD: f64 = 1e-9;

/// 1/e intensity radius r of the Gaussian standing in for a hard pupil of diameter b.
pub fn circular_to_gaussian(diameter: f64) -> f64 {
    diameter / (2.0 * SQRT_2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ApertureModel {
    Delta,
    Gaussian { r_a: f64, r_b: f64 },
    Circular { b_a: f64, b_b: f64 },
}

/// Gaussian pupil pair |p(y)|² = exp(−|y|²/r²) in each arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPupils {
    pub r_a: f64,
    pub r_b: f64,
}

impl GaussianPupils {
    pub fn new(r_a: f64, r_b: f64) -> Result<Self> {
        for (name, r) in [("r_a", r_a), ("r_b", r_b)] {
            if !(r > 0.0 && r.is_finite()) {
                return config(format!("Gaussian pupil radius {name} must be positive, got {r}"));
            }
        }
        Ok(GaussianPupils { r_a, r_b })
    }

    pub fn symmetric(r: f64) -> Result<Self> {
        GaussianPupils::new(r, r)
    }

    /// r² = (r_A² + r_B²)/2.
    pub fn mean_square_radius(&self) -> f64 {
        0.5 * (self.r_a * self.r_a + self.r_b * self.r_b)
    }
}

impl ApertureModel {
    pub fn gaussian(r_a: f64, r_b: f64) -> Result<Self> {
        GaussianPupils::new(r_a, r_b)?;
        Ok(ApertureModel::Gaussian { r_a, r_b })
    }

    pub fn circular(b_a: f64, b_b: f64) -> Result<Self> {
        for (name, b) in [("b_a", b_a), ("b_b", b_b)] {
            if !(b > 0.0 && b.is_finite()) {
                return config(format!("aperture diameter {name} must be positive, got {b}"));
            }
        }
        Ok(ApertureModel::Circular { b_a, b_b })
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ApertureModel::Delta => Ok(()),
            ApertureModel::Gaussian { r_a, r_b } => GaussianPupils::new(r_a, r_b).map(|_| ()),
            ApertureModel::Circular { b_a, b_b } => ApertureModel::circular(b_a, b_b).map(|_| ()),
        }
    }

    /// Gaussian pupils used for evaluation; None for delta pupils.
    pub fn pupils(&self) -> Option<GaussianPupils> {
        match *self {
            ApertureModel::Delta => None,
            ApertureModel::Gaussian { r_a, r_b } => Some(GaussianPupils { r_a, r_b }),
            ApertureModel::Circular { b_a, b_b } => Some(GaussianPupils {
                r_a: circular_to_gaussian(b_a),
                r_b: circular_to_gaussian(b_b),
            }),
        }
    }

    /// P̃_A(0)·P̃_B(0): πr² per Gaussian pupil, 1 for delta pupils.
    pub fn pupil_weight_product(&self) -> f64 {
        match self.pupils() {
            None => 1.0,
            Some(p) => PI * p.r_a * p.r_a * PI * p.r_b * p.r_b,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ApertureModel::Delta => "delta",
            ApertureModel::Gaussian { .. } => "gaussian",
            ApertureModel::Circular { .. } => "circular",
        }
    }
}

/// Distances of the interferometer. Only d₁ enters the normalized kernel;
/// d₂ and f are kept for completeness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticalGeometry {
    pub d1: f64,
    pub d2: Option<f64>,
    pub f: Option<f64>,
}

impl OpticalGeometry {
    pub fn new(d1: f64) -> Result<Self> {
        let g = OpticalGeometry { d1, d2: None, f: None };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.d1 > 0.0 && self.d1.is_finite()) {
            return config(format!("d1 must be positive, got {}", self.d1));
        }
        for (name, v) in [("d2", self.d2), ("f", self.f)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return config(format!("{name} must be positive, got {v}"));
                }
            }
        }
        Ok(())
    }

    /// Effective distance of the first (upstream) crystal, d₁ + d.
    pub fn s1(&self, d: f64) -> f64 {
        self.d1 + d
    }

    /// Effective distance of the second crystal, d₁.
    pub fn s2(&self) -> f64 {
        self.d1
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NKernelArgs {
    pub z0: Vec2,
    pub big_z: Vec2,
    pub s_k: f64,
    pub s_n: f64,
}

impl NKernelArgs {
    pub fn new(z0: Vec2, big_z: Vec2, s_k: f64, s_n: f64) -> Result<Self> {
        if !(s_k > 0.0 && s_n > 0.0 && s_k.is_finite() && s_n.is_finite()) {
            return config(format!("kernel distances must be positive, got s_k={s_k}, s_n={s_n}"));
        }
        if !z0.is_finite() || !big_z.is_finite() {
            return config("kernel displacement arguments must be finite");
        }
        Ok(NKernelArgs { z0, big_z, s_k, s_n })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaFactor {
    pub gamma: f64,
    /// −arctan γ.
    pub phi_gamma: f64,
}

/// γ = k_p r²/(4d₁)·d/(d₁ + d).
pub fn gamma_factor(pump: &PumpSpec, pupils: &GaussianPupils, d1: f64, d: f64) -> GammaFactor {
    let gamma = if d.is_infinite() {
        pump.k_p() * pupils.mean_square_radius() / (4.0 * d1)
    } else {
        pump.k_p() * pupils.mean_square_radius() / (4.0 * d1) * d / (d1 + d)
    };
    GammaFactor {
        gamma,
        phi_gamma: -gamma.atan(),
    }
}

/// exp[−i(k_p/8)(|Z − z₀|²/s_n − |z₀|²/s_k)].
pub fn n_small(args: &NKernelArgs, pump: &PumpSpec) -> Complex64 {
    let a = (args.big_z - args.z0).norm_sqr() / args.s_n - args.z0.norm_sqr() / args.s_k;
    Complex64::from_polar(1.0, -pump.k_p() / 8.0 * a)
}

/// Gaussian-pupil kernel.
///
/// Written in terms of δ = 1/s_n − 1/s_k so that it stays finite as s_k → s_n;
/// below [`EQUAL_DISTANCE_THRESHOLD`] the equal-distance limit is used directly.
pub fn n_gauss(args: &NKernelArgs, pump: &PumpSpec, pupils: &GaussianPupils) -> Complex64 {
    let kp = pump.k_p();
    let (z0, zz) = (args.z0, args.big_z);
    let s_n = args.s_n;
    let r2 = pupils.mean_square_radius();

    if ((args.s_k - s_n) / s_n).abs() < EQUAL_DISTANCE_THRESHOLD {
        let atten = -(kp * kp * zz.norm_sqr() / (16.0 * s_n * s_n)) * (2.0 * r2) / 4.0;
        let phase = -kp / (8.0 * s_n) * ((zz - z0).norm_sqr() - z0.norm_sqr());
        return Complex64::from_polar(atten.exp(), phase);
    }

    let delta = 1.0 / s_n - 1.0 / args.s_k;
    let kappa = kp * r2 / 4.0;
    let g = kappa * delta;
    let den = 1.0 + g * g;
    let a = z0.norm_sqr();
    let b = z0.dot(zz);
    let c = zz.norm_sqr();

    // −(k_p κ/8)·|δz₀ − Z/s_n|²/(1 + g²)
    let re = -kp * kappa / (8.0 * den) * (delta * delta * a - 2.0 * delta * b / s_n + c / (s_n * s_n));
    let im =
        kp / 8.0 * (-delta * a / den + 2.0 * b / (s_n * den) - c / s_n + kappa * kappa * delta * c / (s_n * s_n * den));
    Complex64::from_polar(re.exp(), im) / Complex64::new(1.0, g)
}

/// Dispatches on the aperture model.
pub fn n_kernel(args: &NKernelArgs, pump: &PumpSpec, aperture: &ApertureModel) -> Complex64 {
    match aperture.pupils() {
        None => n_small(args, pump),
        Some(p) => n_gauss(args, pump, &p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pump() -> PumpSpec {
        PumpSpec::default()
    }

    fn args(z0: (f64, f64), z: (f64, f64), s_k: f64, s_n: f64) -> NKernelArgs {
        NKernelArgs::new(Vec2::new(z0.0, z0.1), Vec2::new(z.0, z.1), s_k, s_n).unwrap()
    }

    /// Literal three-exponential Gaussian form, valid only for s_k ≠ s_n.
    fn n_gauss_reference(a: &NKernelArgs, p: &PumpSpec, pupils: &GaussianPupils) -> Complex64 {
        let kp = p.k_p();
        let (sk, sn) = (a.s_k, a.s_n);
        let dkn = 1.0 / (1.0 / sn - 1.0 / sk);
        let g = kp * pupils.mean_square_radius() / (4.0 * dkn);
        let w2 = (a.z0 - a.big_z * (sk / (sk - sn))).norm_sqr();
        let den = 1.0 + g * g;
        let amp = (-kp / (8.0 * dkn) * g / den * w2).exp() / den.sqrt();
        let phase = -kp / (8.0 * dkn) / den * w2 + kp * a.big_z.norm_sqr() / (8.0 * (sk - sn)) - g.atan();
        Complex64::from_polar(amp, phase)
    }

    #[test]
    fn small_examples() {
        let p = pump();
        assert_eq!(
            n_small(&args((3e-5, 1e-5), (0.0, 0.0), 0.75, 0.75), &p),
            Complex64::new(1.0, 0.0)
        );
        let a = args((0.0, 0.0), (7e-5, -2e-5), 0.8, 0.8);
        let expect = Complex64::from_polar(1.0, -p.k_p() * a.big_z.norm_sqr() / (8.0 * 0.8));
        assert!((n_small(&a, &p) - expect).norm() < 1e-15);
    }

    #[test]
    fn gauss_matches_literal_form_off_degeneracy() {
        let p = pump();
        let pupils = GaussianPupils::new(0.8e-3, 1.1e-3).unwrap();
        for &(sk, sn) in &[(0.7675, 0.75), (1.05, 0.75), (0.75, 0.9)] {
            for &z0 in &[(0.0, 0.0), (3.5e-5, 0.0), (-2e-5, 4e-5)] {
                for &z in &[(0.0, 0.0), (7e-5, 1e-5), (-1e-4, 0.0)] {
                    let a = args(z0, z, sk, sn);
                    let got = n_gauss(&a, &p, &pupils);
                    let want = n_gauss_reference(&a, &p, &pupils);
                    assert!((got - want).norm() < 1e-10, "{a:?}: {got} vs {want}");
                }
            }
        }
    }

    #[test]
    fn gauss_equal_distance_examples() {
        let p = pump();
        let pupils = GaussianPupils::new(0.9e-3, 0.9e-3).unwrap();
        let a = args((4e-5, 0.0), (0.0, 0.0), 0.75, 0.75);
        assert!((n_gauss(&a, &p, &pupils) - Complex64::new(1.0, 0.0)).norm() < 1e-15);

        let z = Vec2::new(6e-5, 2e-5);
        let a = NKernelArgs::new(Vec2::ZERO, z, 0.75, 0.75).unwrap();
        let kz = p.k_p() * z.norm() / (4.0 * 0.75);
        let expect = Complex64::from_polar(
            (-kz * kz * (2.0 * 0.81e-6) / 4.0).exp(),
            -p.k_p() * z.norm_sqr() / (8.0 * 0.75),
        );
        assert!((n_gauss(&a, &p, &pupils) - expect).norm() < 1e-14);
    }

    #[test]
    fn gauss_continuous_across_branch_switch() {
        let p = pump();
        let pupils = GaussianPupils::new(0.88e-3, 0.88e-3).unwrap();
        let s = 0.75;
        for &(z0, z) in &[((3.5e-5, 0.0), (7e-5, 0.0)), ((-1e-5, 2e-5), (3e-5, -5e-5))] {
            let below = n_gauss(&args(z0, z, s * (1.0 + 0.5e-9), s), &p, &pupils);
            let above = n_gauss(&args(z0, z, s * (1.0 + 2e-9), s), &p, &pupils);
            assert!((below - above).norm() < 1e-6 * above.norm());
        }
    }

    #[test]
    fn gauss_tends_to_small() {
        let p = pump();
        let tiny = GaussianPupils::new(1e-9, 1e-9).unwrap();
        let mut worst: f64 = 0.0;
        for i in 0..5 {
            for j in 0..5 {
                let a = args(
                    (-1e-4 + 5e-5 * i as f64, 2e-5),
                    (-1e-4 + 5e-5 * j as f64, -3e-5),
                    0.75 + 0.01 * i as f64,
                    0.75,
                );
                worst = worst.max((n_gauss(&a, &p, &tiny) - n_small(&a, &p)).norm());
            }
        }
        assert!(worst < 1e-6);
    }

    #[test]
    fn gamma_examples() {
        let p = pump();
        let pupils = GaussianPupils::symmetric(circular_to_gaussian(2.5e-3)).unwrap();
        let g0 = gamma_factor(&p, &pupils, 0.75, 0.0);
        assert_eq!(g0.gamma, 0.0);
        assert_eq!(g0.phi_gamma, 0.0);
        let far = gamma_factor(&p, &pupils, 0.75, 1e9);
        let limit = p.k_p() * pupils.mean_square_radius() / (4.0 * 0.75);
        assert!((far.gamma - limit).abs() < 1e-8 * limit);
        assert!((far.phi_gamma + limit.atan()).abs() < 1e-8);
        let inf = gamma_factor(&p, &pupils, 0.75, f64::INFINITY);
        assert_eq!(inf.gamma, limit);
        let tiny = GaussianPupils::symmetric(1e-12).unwrap();
        assert!(gamma_factor(&p, &tiny, 0.75, 0.1).gamma < 1e-12);
    }

    #[test]
    fn aperture_mapping_and_validation() {
        let a = ApertureModel::circular(2.5e-3, 4e-3).unwrap();
        let p = a.pupils().unwrap();
        assert_eq!(p.r_a, 2.5e-3 / (2.0 * 2f64.sqrt()));
        assert_eq!(p.r_b, 4e-3 / (2.0 * 2f64.sqrt()));
        assert!(ApertureModel::gaussian(0.0, 1e-3).is_err());
        assert!(ApertureModel::circular(1e-3, -1.0).is_err());
        assert_eq!(ApertureModel::Delta.pupil_weight_product(), 1.0);
        assert!(OpticalGeometry::new(0.0).is_err());
        assert!(NKernelArgs::new(Vec2::ZERO, Vec2::ZERO, 0.0, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn small_has_unit_modulus(
            zx in -3e-4..3e-4f64, zy in -3e-4..3e-4f64,
            bx in -3e-4..3e-4f64, by in -3e-4..3e-4f64,
            sk in 0.1..3.0f64, sn in 0.1..3.0f64,
        ) {
            let a = args((zx, zy), (bx, by), sk, sn);
            prop_assert!((n_small(&a, &pump()).norm() - 1.0).abs() < 1e-14);
        }

        #[test]
        fn gauss_bounded_by_one(
            zx in -3e-4..3e-4f64, zy in -3e-4..3e-4f64,
            bx in -3e-4..3e-4f64, by in -3e-4..3e-4f64,
            sk in 0.1..3.0f64, sn in 0.1..3.0f64,
            ra in 1e-5..3e-3f64, rb in 1e-5..3e-3f64,
        ) {
            let a = args((zx, zy), (bx, by), sk, sn);
            let pupils = GaussianPupils::new(ra, rb).unwrap();
            prop_assert!(n_gauss(&a, &pump(), &pupils).norm() <= 1.0 + 1e-15);
        }
    }
}
