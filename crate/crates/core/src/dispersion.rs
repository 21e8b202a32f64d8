//! Material and geometric parameters, wave-vector mismatch and gap phases.
//!
//! All quantities are SI: lengths in meters, times in seconds, D in s/m,
//! wavenumbers in rad/m, frequency detunings in rad/s.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{config, Result};
use crate::vec2::Vec2;

pub const DEFAULT_PUMP_WAVELENGTH: f64 = 351.1e-9;

/// n(λp) − n(2λp) for air at λp = 351.1 nm, calibrated so that
/// k_p·Δn = 59π rad/m (0.059π rad per millimeter of air).
pub const AIR_INDEX_DIFFERENCE: f64 = 59.0 * DEFAULT_PUMP_WAVELENGTH / 2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpSpec {
    wavelength: f64,
    k_p: f64,
}

impl PumpSpec {
    pub fn new(wavelength: f64) -> Result<Self> {
        if !(wavelength > 0.0 && wavelength.is_finite()) {
            return config(format!("pump wavelength must be positive, got {wavelength}"));
        }
        Ok(PumpSpec {
            wavelength,
            k_p: 2.0 * PI / wavelength,
        })
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn k_p(&self) -> f64 {
        self.k_p
    }
}

impl Default for PumpSpec {
    fn default() -> Self {
        PumpSpec::new(DEFAULT_PUMP_WAVELENGTH).unwrap()
    }
}

/// Sign ε of a crystal's second-order susceptibility.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl TryFrom<i64> for Sign {
    type Error = crate::Error;
    fn try_from(v: i64) -> Result<Sign> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => config(format!("epsilon must be +1 or -1, got {v}")),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "1",
            Sign::Minus => "-1",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrystalSpec {
    pub thickness: f64,
    /// D = 1/u_o − 1/u_e, s/m.
    pub dispersion: f64,
    pub walkoff: Vec2,
    pub chi0: f64,
    pub epsilon: Sign,
}

impl CrystalSpec {
    pub fn new(thickness: f64, dispersion: f64, walkoff: Vec2) -> Result<Self> {
        let c = CrystalSpec {
            thickness,
            dispersion,
            walkoff,
            chi0: 1.0,
            epsilon: Sign::Plus,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn with_chi0(mut self, chi0: f64) -> Self {
        self.chi0 = chi0;
        self
    }

    pub fn with_epsilon(mut self, epsilon: Sign) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.thickness > 0.0 && self.thickness.is_finite()) {
            return config(format!("crystal thickness must be positive, got {}", self.thickness));
        }
        if !self.dispersion.is_finite() || !self.chi0.is_finite() || !self.walkoff.is_finite() {
            return config("crystal parameters must be finite");
        }
        Ok(())
    }
}

/// Linear medium between two crystals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapSpec {
    pub length: f64,
    /// Δ′ at degeneracy, rad/m.
    pub delta_prime: f64,
    /// dΔ′/dΔ; zero means a frequency-independent gap phase.
    pub delta_prime_slope: f64,
}

impl GapSpec {
    pub fn new(length: f64, delta_prime: f64) -> Result<Self> {
        let g = GapSpec {
            length,
            delta_prime,
            delta_prime_slope: 0.0,
        };
        g.validate()?;
        Ok(g)
    }

    /// Gap filled with a medium of the given index pair.
    pub fn with_indices(length: f64, pump: &PumpSpec, indices: RefractiveIndices) -> Result<Self> {
        GapSpec::new(length, pump.k_p() * indices.difference())
    }

    pub fn air(length: f64, pump: &PumpSpec) -> Result<Self> {
        GapSpec::with_indices(length, pump, RefractiveIndices::default())
    }

    pub fn with_slope(mut self, slope: f64) -> Self {
        self.delta_prime_slope = slope;
        self
    }

    pub fn delta_prime_at(&self, delta: f64) -> f64 {
        self.delta_prime + self.delta_prime_slope * delta
    }

    /// φ_disp = Δ′·d.
    pub fn phase(&self) -> f64 {
        self.delta_prime * self.length
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.length >= 0.0 && self.length.is_finite()) {
            return config(format!("gap length must be non-negative, got {}", self.length));
        }
        if !self.delta_prime.is_finite() || !self.delta_prime_slope.is_finite() {
            return config("gap dispersion must be finite");
        }
        Ok(())
    }
}

/// Index pair n(λp), n(2λp) of a linear medium.
///
/// The default (air) stores only the difference, which is all the phase
/// needs and avoids the cancellation in (1 + a) − (1 + b).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RefractiveIndices {
    Difference(f64),
    Pair { pump: f64, degenerate: f64 },
}

impl RefractiveIndices {
    pub fn difference(&self) -> f64 {
        match *self {
            RefractiveIndices::Difference(d) => d,
            RefractiveIndices::Pair { pump, degenerate } => pump - degenerate,
        }
    }
}

impl Default for RefractiveIndices {
    fn default() -> Self {
        RefractiveIndices::Difference(AIR_INDEX_DIFFERENCE)
    }
}

/// Birefringent delay line; τ = −l_τ·D_τ.
///
/// The thickness is a signed effective thickness so that negative delays
/// can be expressed with the same plate material.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayLineSpec {
    pub thickness: f64,
    pub dispersion: f64,
    pub walkoff: Vec2,
}

impl DelayLineSpec {
    pub fn new(thickness: f64, dispersion: f64, walkoff: Vec2) -> Self {
        DelayLineSpec {
            thickness,
            dispersion,
            walkoff,
        }
    }

    /// Plate of material `dispersion` cut to produce delay `tau`.
    pub fn for_delay(tau: f64, dispersion: f64) -> Result<Self> {
        if dispersion == 0.0 || !dispersion.is_finite() {
            return config("delay-line dispersion must be finite and non-zero");
        }
        Ok(DelayLineSpec::new(-tau / dispersion, dispersion, Vec2::ZERO))
    }

    pub fn tau(&self) -> f64 {
        -self.thickness * self.dispersion
    }
}

impl Default for DelayLineSpec {
    fn default() -> Self {
        DelayLineSpec::new(0.0, 0.0, Vec2::ZERO)
    }
}

/// Δ(q, ν) = −νD + 2|q|²/k_p + M·q.
pub fn delta_mismatch(q: Vec2, nu: f64, crystal: &CrystalSpec, pump: &PumpSpec) -> f64 {
    -nu * crystal.dispersion + 2.0 * q.norm_sqr() / pump.k_p() + crystal.walkoff.dot(q)
}

/// φ_disp = k_p·[n(λp) − n(2λp)]·d.
pub fn phi_disp(d: f64, pump: &PumpSpec, indices: RefractiveIndices) -> f64 {
    pump.k_p() * indices.difference() * d
}

/// Delay-line phase η_τ(q, ν) = [−νD_τ + 2|q|²/k_p + M_τ·q]·l_τ.
///
/// The constant −(K_o + K_e)·l_τ is a global phase and is dropped.
pub fn eta_tau(q: Vec2, nu: f64, delay: &DelayLineSpec, pump: &PumpSpec) -> f64 {
    (-nu * delay.dispersion + 2.0 * q.norm_sqr() / pump.k_p() + delay.walkoff.dot(q)) * delay.thickness
}
