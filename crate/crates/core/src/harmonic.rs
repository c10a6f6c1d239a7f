//! Closed forms for `H₁ = H₀ + λx` and `H₂ = H₀ + λx²`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::number::NumberPolynomial;
use crate::radical::Radical2Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HarmonicCase {
    H1,
    H2,
}

/// `b = σa + τa†` with `σ² − τ² = 1`, giving `H₂ = ω(b†b + 1/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bogoliubov {
    pub frequency: f64,
    pub sigma: f64,
    pub tau: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HarmonicSpectrum {
    pub case: HarmonicCase,
}

pub fn exact_harmonic(case: HarmonicCase) -> HarmonicSpectrum {
    HarmonicSpectrum { case }
}

impl HarmonicCase {
    pub fn from_power(n: u32) -> Option<Self> {
        match n {
            1 => Some(Self::H1),
            2 => Some(Self::H2),
            _ => None,
        }
    }
}

impl HarmonicSpectrum {
    pub fn formula(&self) -> &'static str {
        match self.case {
            HarmonicCase::H1 => "n + 1/2 - λ^2/2",
            HarmonicCase::H2 => "sqrt(1 + 2λ)·(n + 1/2)",
        }
    }

    pub fn energy(&self, n: u64, lambda: f64) -> Result<f64> {
        let level = n as f64 + 0.5;
        match self.case {
            HarmonicCase::H1 => Ok(level - lambda * lambda / 2.0),
            HarmonicCase::H2 => Ok(self.bogoliubov(lambda)?.frequency * level),
        }
    }

    /// Exact for H₁; H₂ only has an exact value when `1 + 2λ` is a square.
    pub fn energy_exact(&self, n: u64, lambda: &Radical2Scalar) -> Result<Radical2Scalar> {
        let level = Radical2Scalar::integer(n as i64) + Radical2Scalar::ratio(1, 2);
        match self.case {
            HarmonicCase::H1 => Ok(level - lambda.pow(2) * Radical2Scalar::ratio(1, 2)),
            HarmonicCase::H2 => Err(Error::Unsupported("exact H2 energies need a square root of 1 + 2λ".into())),
        }
    }

    pub fn bogoliubov(&self, lambda: f64) -> Result<Bogoliubov> {
        if self.case != HarmonicCase::H2 {
            return Err(Error::Unsupported("Bogoliubov parameters exist only for H2".into()));
        }
        if lambda <= -0.5 {
            return Err(Error::SpectrumCollapse(lambda));
        }
        let omega = (1.0 + 2.0 * lambda).sqrt();
        let sigma = ((1.0 + lambda + omega) / (2.0 * omega)).sqrt();
        let tau = ((1.0 + lambda - omega).max(0.0) / (2.0 * omega)).sqrt().copysign(lambda);
        Ok(Bogoliubov { frequency: omega, sigma, tau })
    }

    /// Level shifts as an exact λ-series through `order`.
    ///
    /// For H₂ this is the Taylor expansion of `(√(1+2λ) − 1)(N + 1/2)`.
    pub fn series(&self, order: usize) -> NumberPolynomial<Radical2Scalar> {
        let mut rows = vec![Vec::new(); order + 1];
        match self.case {
            HarmonicCase::H1 => {
                if order >= 2 {
                    rows[2] = vec![Radical2Scalar::ratio(-1, 2)];
                }
            }
            HarmonicCase::H2 => {
                // binom(1/2, j)·2^j
                let mut c = BigRational::from_integer(BigInt::from(1));
                for (j, row) in rows.iter_mut().enumerate().skip(1) {
                    let jj = j as i64;
                    c = c * BigRational::new(BigInt::from(3 - 2 * jj), BigInt::from(2 * jj)) * BigInt::from(2);
                    let cj = Radical2Scalar::rational(c.clone());
                    *row = vec![&cj * &Radical2Scalar::ratio(1, 2), cj];
                }
            }
        }
        NumberPolynomial::from_falling_factorial(rows)
    }
}
