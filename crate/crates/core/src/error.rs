use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("degenerate analyzer setting: both projections are zero")]
    DegenerateAnalyzer,

    #[error(
        "oracle did not converge: {coarse_points} points gave {coarse}, {fine_points} points gave {fine} (relative change {rel_change:.3e} > target {target:.3e})"
    )]
    NonConvergence {
        coarse_points: usize,
        coarse: Complex64,
        fine_points: usize,
        fine: Complex64,
        rel_change: f64,
        target: f64,
    },

    #[error(
        "oracle grid undersamples the kernel phase: {points_per_cycle:.2} points per cycle ({cycles:.1} cycles across the domain, {points} points), need at least {required}"
    )]
    Undersampled {
        points: usize,
        cycles: f64,
        points_per_cycle: f64,
        required: f64,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn config<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}
