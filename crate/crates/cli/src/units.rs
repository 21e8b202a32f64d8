//! Unit-suffixed quantities such as "0.5 mm" or "190 fs/mm", resolved to SI.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Length,
    Time,
    /// Inverse group-velocity difference, s/m.
    Dispersion,
    Wavenumber,
    Angle,
}

impl Dimension {
    /// Unit written back when a resolved value is echoed.
    pub fn si_unit(self) -> &'static str {
        match self {
            Dimension::Length => "m",
            Dimension::Time => "s",
            Dimension::Dispersion => "s/m",
            Dimension::Wavenumber => "rad/m",
            Dimension::Angle => "rad",
        }
    }

    fn units(self) -> &'static [(&'static str, Scale)] {
        use Scale::{Decade as E, Factor};
        match self {
            Dimension::Length => &[
                ("m", E(0)),
                ("cm", E(-2)),
                ("mm", E(-3)),
                ("um", E(-6)),
                ("µm", E(-6)),
                ("nm", E(-9)),
            ],
            Dimension::Time => &[
                ("s", E(0)),
                ("ms", E(-3)),
                ("us", E(-6)),
                ("ns", E(-9)),
                ("ps", E(-12)),
                ("fs", E(-15)),
            ],
            Dimension::Dispersion => &[
                ("s/m", E(0)),
                ("ps/m", E(-12)),
                ("ps/mm", E(-9)),
                ("fs/mm", E(-12)),
                ("fs/um", E(-9)),
            ],
            Dimension::Wavenumber => &[
                ("rad/m", E(0)),
                ("1/m", E(0)),
                ("rad/mm", E(3)),
                ("1/mm", E(3)),
                ("rad/um", E(6)),
            ],
            Dimension::Angle => &[("rad", E(0)), ("deg", Factor(std::f64::consts::PI / 180.0))],
        }
    }

    fn unit_list(self) -> String {
        self.units().iter().map(|(u, _)| *u).collect::<Vec<_>>().join(", ")
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dimension::Length => "length",
            Dimension::Time => "time",
            Dimension::Dispersion => "dispersion",
            Dimension::Wavenumber => "wavenumber",
            Dimension::Angle => "angle",
        })
    }
}

#[derive(Debug, Clone, Copy)]
enum Scale {
    /// Power of ten, applied to the decimal exponent so "351.1 nm" is the
    /// correctly rounded 351.1e-9 rather than 351.1 × 1e-9.
    Decade(i32),
    Factor(f64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnitError {
    #[error("expected a {dim} with a unit suffix, e.g. \"{example}\"")]
    MissingUnit { dim: Dimension, example: &'static str },
    #[error("cannot read number {0:?}")]
    BadNumber(String),
    #[error("unknown {dim} unit {unit:?} (allowed: {allowed})")]
    UnknownUnit {
        dim: Dimension,
        unit: String,
        allowed: String,
    },
    #[error("value is not finite")]
    NotFinite,
}

fn example(dim: Dimension) -> &'static str {
    match dim {
        Dimension::Length => "0.5 mm",
        Dimension::Time => "95 fs",
        Dimension::Dispersion => "190 fs/mm",
        Dimension::Wavenumber => "185 rad/m",
        Dimension::Angle => "45 deg",
    }
}

/// Parses "<number> <unit>"; the unit is mandatory.
pub fn parse_quantity(text: &str, dim: Dimension) -> Result<f64, UnitError> {
    let text = text.trim();
    let Some((num, unit)) = text.split_once(char::is_whitespace) else {
        return Err(UnitError::MissingUnit {
            dim,
            example: example(dim),
        });
    };
    let bad = || UnitError::BadNumber(num.to_string());
    let raw = num.parse::<f64>().map_err(|_| bad())?;
    if !raw.is_finite() {
        return Err(UnitError::NotFinite);
    }
    let unit = unit.trim();
    let scale = dim
        .units()
        .iter()
        .find(|(u, _)| *u == unit)
        .map(|(_, f)| *f)
        .ok_or_else(|| UnitError::UnknownUnit {
            dim,
            unit: unit.to_string(),
            allowed: dim.unit_list(),
        })?;
    let v = match scale {
        Scale::Decade(0) => raw,
        Scale::Decade(k) => {
            let (mantissa, exp) = match num.find(['e', 'E']) {
                Some(i) => (&num[..i], num[i + 1..].parse::<i32>().map_err(|_| bad())?),
                None => (num, 0),
            };
            format!("{mantissa}e{}", exp + k).parse::<f64>().map_err(|_| bad())?
        }
        Scale::Factor(f) => raw * f,
    };
    if !v.is_finite() {
        return Err(UnitError::NotFinite);
    }
    Ok(v)
}

/// SI rendering that parses back to the same f64.
pub fn format_quantity(value: f64, dim: Dimension) -> String {
    format!("{value:?} {}", dim.si_unit())
}

/// Scale and label used when plotting a quantity.
pub fn display_scale(dim: Dimension) -> (f64, &'static str) {
    match dim {
        Dimension::Length => (1e3, "mm"),
        Dimension::Time => (1e15, "fs"),
        Dimension::Dispersion => (1e12, "fs/mm"),
        Dimension::Wavenumber => (1e-3, "rad/mm"),
        Dimension::Angle => (180.0 / std::f64::consts::PI, "deg"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suffixes_resolve_to_si() {
        assert_eq!(parse_quantity("0.5 mm", Dimension::Length).unwrap(), 0.5e-3);
        assert_eq!(parse_quantity("351.1 nm", Dimension::Length).unwrap(), 351.1e-9);
        assert_eq!(parse_quantity("190 fs/mm", Dimension::Dispersion).unwrap(), 1.9e-10);
        assert_eq!(parse_quantity("2.5e-1 mm", Dimension::Length).unwrap(), 2.5e-4);
        assert_eq!(parse_quantity("  2 cm ", Dimension::Length).unwrap(), 0.02);
        assert_eq!(parse_quantity("-3e4 rad/m", Dimension::Wavenumber).unwrap(), -3e4);
        assert!((parse_quantity("90 deg", Dimension::Angle).unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn bare_numbers_are_rejected() {
        assert!(matches!(
            parse_quantity("0.5", Dimension::Length),
            Err(UnitError::MissingUnit { .. })
        ));
        assert!(matches!(
            parse_quantity("0.5mm", Dimension::Length),
            Err(UnitError::MissingUnit { .. })
        ));
    }

    #[test]
    fn wrong_dimension_is_rejected() {
        let e = parse_quantity("3 fs", Dimension::Length).unwrap_err();
        assert!(e.to_string().contains("unknown length unit"));
        assert!(matches!(
            parse_quantity("x mm", Dimension::Length),
            Err(UnitError::BadNumber(_))
        ));
        assert!(matches!(
            parse_quantity("inf mm", Dimension::Length),
            Err(UnitError::NotFinite)
        ));
    }

    #[test]
    fn echo_round_trips_exactly() {
        for (v, dim) in [
            (0.5e-3 * 1.0000000000000002, Dimension::Length),
            (1.9e-10, Dimension::Dispersion),
            (351.1e-9, Dimension::Length),
            (-12345.678, Dimension::Wavenumber),
            (0.0, Dimension::Time),
        ] {
            let s = format_quantity(v, dim);
            assert_eq!(parse_quantity(&s, dim).unwrap().to_bits(), v.to_bits(), "{s}");
        }
    }
}
