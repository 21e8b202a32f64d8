#![allow(dead_code)]

use spdc_core::apertures::{ApertureModel, OpticalGeometry};
use spdc_core::dispersion::{CrystalSpec, GapSpec, PumpSpec};
use spdc_core::interference::{Axes, TwoCrystalSystem};
use spdc_core::Vec2;

pub const L: f64 = 0.5e-3;
pub const D: f64 = 1.9e-10;
pub const D1: f64 = 0.75;
pub const M: f64 = 0.07;

pub fn fig10_aperture() -> ApertureModel {
    ApertureModel::circular(2.5e-3, 2.5e-3).unwrap()
}

pub fn system(axes: Axes, d: f64, aperture: ApertureModel) -> TwoCrystalSystem {
    system_with(axes, d, aperture, M, L, D1)
}

pub fn system_with(axes: Axes, d: f64, aperture: ApertureModel, m: f64, l: f64, d1: f64) -> TwoCrystalSystem {
    let pump = PumpSpec::default();
    TwoCrystalSystem::new(
        pump,
        CrystalSpec::new(l, D, Vec2::new(m, 0.0)).unwrap(),
        axes,
        GapSpec::air(d, &pump).unwrap(),
        OpticalGeometry::new(d1).unwrap(),
        aperture,
    )
    .unwrap()
}

/// Evenly spaced values from a to b inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}
