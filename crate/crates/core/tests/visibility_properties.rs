mod common;

use common::*;
use proptest::prelude::*;
use spdc_core::apertures::ApertureModel;
use spdc_core::dispersion::CrystalSpec;
use spdc_core::interference::{
    single_crystal_visibility, visibility_center, visibility_tau, visibility_vs_separation, Axes, CenterForm,
};
use spdc_core::Vec2;

#[test]
fn order_doubling_is_converged() {
    for ap in [ApertureModel::Delta, fig10_aperture()] {
        for axes in [Axes::Parallel, Axes::Antiparallel] {
            let s = system(axes, 0.0325, ap);
            for f in [0.2, 0.7, 1.0, 1.6] {
                let tau = f * s.center_delay();
                let a = visibility_tau(tau, &s, 64).unwrap();
                let b = visibility_tau(tau, &s, 128).unwrap();
                assert!((a - b).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn far_separation_tends_to_single_crystal() {
    let single = CrystalSpec::new(L, D, Vec2::new(M, 0.0)).unwrap();
    for (ap, factor, tol) in [(fig10_aperture(), 1e3, 1e-3), (ApertureModel::Delta, 1e5, 1e-4)] {
        let s = system(Axes::Parallel, factor * D1, ap);
        let mut worst: f64 = 0.0;
        for f in linspace(-0.5, 2.5, 101) {
            let tau = f * s.center_delay();
            let v = visibility_tau(tau, &s, 64).unwrap();
            let w = single_crystal_visibility(tau, &single, D1, &ap, &s.pump, 64).unwrap();
            worst = worst.max((v - w).abs());
        }
        assert!(worst < tol, "{ap:?}: {worst}");
    }
}

#[test]
fn dip_is_deepest_at_centre() {
    // holds whenever the collective term is not phase-suppressed
    let full_turn = 2.0 / 0.059 * 1e-3;
    for ap in [ApertureModel::Delta, fig10_aperture()] {
        for axes in [Axes::Parallel, Axes::Antiparallel] {
            for d in [0.0, full_turn] {
                let s = system(axes, d, ap);
                let ld = s.center_delay();
                let taus = linspace(0.0, 2.0 * ld, 401);
                let vals: Vec<f64> = taus.iter().map(|&t| visibility_tau(t, &s, 64).unwrap().abs()).collect();
                let (imax, _) = vals
                    .iter()
                    .enumerate()
                    .fold((0, -1.0), |b, (i, &v)| if v > b.1 { (i, v) } else { b });
                assert!(
                    (taus[imax] - ld).abs() <= 2.0 * ld / 400.0 + 1e-30,
                    "{ap:?} {axes:?} d={d}"
                );
            }
        }
    }
}

#[test]
fn modulation_period_in_the_walkoff_free_limit() {
    let s = system_with(Axes::Parallel, 0.0, ApertureModel::Delta, 0.0, L, D1);
    let ds = linspace(0.0, 0.1, 2001);
    let c = visibility_vs_separation(&s, &ds, true, 64).unwrap();
    let mut zeros = Vec::new();
    for i in 0..ds.len() - 1 {
        let (a, b) = (c.value[i], c.value[i + 1]);
        if a * b < 0.0 {
            zeros.push(ds[i] - a * (ds[i + 1] - ds[i]) / (b - a));
        }
    }
    assert!(zeros.len() >= 5);
    let half = 33.898e-3 / 2.0;
    for w in zeros.windows(2) {
        assert!(((w[1] - w[0]) - half).abs() < 0.01 * half);
    }
}

#[test]
fn gaussian_contact_ordering_across_thickness() {
    for l in [0.5e-3, 1.5e-3, 5e-3] {
        for r in linspace(0.05e-3, 2e-3, 40) {
            let ap = ApertureModel::gaussian(r, r).unwrap();
            let p = system_with(Axes::Parallel, 0.0, ap, M, l, 1.0);
            let a = system_with(Axes::Antiparallel, 0.0, ap, M, l, 1.0);
            let vp = visibility_center(&p, CenterForm::GaussParallel, 64).unwrap();
            let va = visibility_center(&a, CenterForm::GaussAntiparallel, 64).unwrap();
            assert!(vp.abs() < va.abs(), "L={l} r={r}: {vp} vs {va}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn visibility_is_bounded(
        x in -0.5..2.5f64,
        d in 0.0..0.2f64,
        r in 0.05e-3..3e-3f64,
        m in 0.0..0.1f64,
        anti in any::<bool>(),
        gauss in any::<bool>(),
    ) {
        let ap = if gauss { ApertureModel::gaussian(r, r).unwrap() } else { ApertureModel::Delta };
        let axes = if anti { Axes::Antiparallel } else { Axes::Parallel };
        let s = system_with(axes, d, ap, m, L, D1);
        let v = visibility_tau(x * s.center_delay(), &s, 64).unwrap();
        prop_assert!(v.abs() <= 1.0 + 1e-9);
    }

    #[test]
    fn axes_flip_sign_without_walkoff(d in 0.0..0.2f64, gauss in any::<bool>()) {
        let ap = if gauss { fig10_aperture() } else { ApertureModel::Delta };
        let p = system_with(Axes::Parallel, d, ap, 0.0, L, D1);
        let a = system_with(Axes::Antiparallel, d, ap, 0.0, L, D1);
        let vp = visibility_tau(p.center_delay(), &p, 64).unwrap();
        let va = visibility_tau(a.center_delay(), &a, 64).unwrap();
        prop_assert!((vp + va).abs() < 1e-12);
    }
}
