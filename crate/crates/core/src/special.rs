//! sinc and erf.

/// sin(x)/x with sinc(0) = 1.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0)
    } else {
        x.sin() / x
    }
}

pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sinc_zero_and_zeros() {
        assert_eq!(sinc(0.0), 1.0);
        for k in 1..5 {
            assert!(sinc(k as f64 * PI).abs() < 1e-15);
        }
    }

    #[test]
    fn sinc_series_matches_direct_near_threshold() {
        for &x in &[9.9e-5_f64, 1.0e-4, 1.01e-4, -5e-5] {
            let direct = x.sin() / x;
            assert!((sinc(x) - direct).abs() < 3e-16);
        }
    }

    #[test]
    fn erf_reference_values() {
        assert!((erf(0.5) - 0.520_499_877_813_046_5).abs() < 1e-15);
        assert!((erf(-1.0) + 0.842_700_792_949_714_9).abs() < 1e-15);
    }
}
