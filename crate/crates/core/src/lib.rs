//! Type-II SPDC in media with inhomogeneous longitudinal nonlinearity:
//! state functions χ̃(Δ), aperture kernels, cascaded two-crystal
//! interference visibility and coincidence rates, plus a brute-force oracle.

pub mod apertures;
pub mod dispersion;
pub mod error;
pub mod interference;
pub mod nonlinearity;
pub mod oracle;
pub mod quadrature;
pub mod report;
pub mod special;
pub mod vec2;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use vec2::Vec2;

/// Complex value of χ̃, 𝒩 or G.
pub type ComplexAmplitude = Complex64;
