//! Gauss–Legendre rules on finite intervals, for real and complex integrands.

use std::num::NonZeroUsize;
use std::ops::{Add, Mul};

use num_complex::Complex64;

use crate::error::{config, Result};

/// Values a quadrature rule can accumulate.
pub trait Integrand: Copy + Add<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
}

impl Integrand for f64 {
    fn zero() -> Self {
        0.0
    }
}

impl Integrand for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
}

/// An n-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    pairs: Vec<(f64, f64)>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Result<Self> {
        let Some(n) = NonZeroUsize::new(order) else {
            return config("quadrature order must be at least 1");
        };
        let rule = gauss_quad::legendre::GaussLegendre::new(n);
        let mut pairs: Vec<(f64, f64)> = rule.as_node_weight_pairs().to_vec();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(GaussLegendre { pairs })
    }

    pub fn order(&self) -> usize {
        self.pairs.len()
    }

    /// Nodes and weights mapped onto [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.pairs.iter().map(move |&(x, w)| (mid + half * x, w * half))
    }

    pub fn integrate<T: Integrand>(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> T) -> T {
        let mut acc = T::zero();
        for (x, w) in self.mapped(a, b) {
            acc = acc + f(x) * w;
        }
        acc
    }

    /// Splits [a, b] into `panels` equal pieces and applies the rule on each.
    pub fn integrate_composite<T: Integrand>(&self, a: f64, b: f64, panels: usize, mut f: impl FnMut(f64) -> T) -> T {
        let panels = panels.max(1);
        let h = (b - a) / panels as f64;
        let mut acc = T::zero();
        for p in 0..panels {
            let lo = a + h * p as f64;
            let hi = if p + 1 == panels { b } else { lo + h };
            acc = acc + self.integrate(lo, hi, &mut f);
        }
        acc
    }
}
