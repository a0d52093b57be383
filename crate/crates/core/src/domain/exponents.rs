use num_rational::Ratio;
use serde::Serialize;

use crate::{Error, Result};

/// Exponents attached to a dimension `n >= 3`, kept as exact rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exponents {
    n: u32,
    critical: Ratio<i64>,
    subcritical: Ratio<i64>,
    half_power: Ratio<i64>,
    l_const: Ratio<i64>,
}

impl Exponents {
    pub fn new(n: i64) -> Result<Self> {
        if n < 3 {
            return Err(Error::Dimension(n));
        }
        let half_power = Ratio::new(n - 2, 2);
        Ok(Self {
            n: n as u32,
            critical: Ratio::new(n + 2, n - 2),
            subcritical: Ratio::new(n, n - 2),
            half_power,
            l_const: half_power * half_power,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn n_f64(&self) -> f64 {
        self.n as f64
    }

    /// `(n+2)/(n-2)`.
    pub fn critical_ratio(&self) -> Ratio<i64> {
        self.critical
    }

    /// `n/(n-2)`.
    pub fn subcritical_ratio(&self) -> Ratio<i64> {
        self.subcritical
    }

    /// `(n-2)/2`, the weight of the scaling `u ↦ λ^{(n-2)/2} u(λ·)`.
    pub fn half_power_ratio(&self) -> Ratio<i64> {
        self.half_power
    }

    /// `(n-2)²/4`, the zero-order constant of the Emden-Fowler operator.
    pub fn l_const_ratio(&self) -> Ratio<i64> {
        self.l_const
    }

    pub fn critical(&self) -> f64 {
        to_f64(self.critical)
    }

    pub fn subcritical(&self) -> f64 {
        to_f64(self.subcritical)
    }

    pub fn half_power(&self) -> f64 {
        to_f64(self.half_power)
    }

    pub fn l_const(&self) -> f64 {
        to_f64(self.l_const)
    }

    /// `2/(n-2)`: the power of `u(y)` that sets the blow-up length scale.
    pub fn scale_power(&self) -> f64 {
        2.0 / (self.n as f64 - 2.0)
    }

    /// `n(n-2)`, the curvature value for which the standard bubble is exact.
    pub fn bubble_curvature(&self) -> f64 {
        let n = self.n as f64;
        n * (n - 2.0)
    }
}

fn to_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

impl Serialize for Exponents {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u32(self.n)
    }
}
