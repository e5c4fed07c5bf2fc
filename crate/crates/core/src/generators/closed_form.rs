//! Closed-form ECH indices for the standard families of generators.

use num_integer::Integer;

use super::{ConvexGenerator, EdgeFactor};
use crate::error::{Error, Result};

/// Families with a known index formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexFamily {
    /// `e(1,0)^k e(0,1)^m`, index `2(km + k + m)`.
    Rectangle { k: u64, m: u64 },
    /// `e(k,1) e(0,1)^(m-1)`, index `2(km + m)`.
    Hook { k: u64, m: u64 },
    /// The straight segment from `(0,m)` to `(k,0)`, index `km + k + m + gcd(k,m)`.
    Triangle { k: u64, m: u64 },
    /// `e(1,0)^(kd) e(m,1)^d`, index `(2k+m)d² + (2k+m+2)d`.
    Trapezoid { k: u64, m: u64, d: u64 },
    /// `e(p,q)^d` with `gcd(p,q) = 1`, index `pqd² + (p+q+1)d`.
    Power { p: u64, q: u64, d: u64 },
}

impl IndexFamily {
    fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParameters(format!("{self:?}: {msg}")));
        match *self {
            IndexFamily::Rectangle { k, m } | IndexFamily::Triangle { k, m } if k == 0 && m == 0 => bad("empty path"),
            IndexFamily::Hook { m: 0, .. } => bad("m must be at least 1"),
            IndexFamily::Trapezoid { d: 0, .. } => bad("d must be at least 1"),
            IndexFamily::Trapezoid { k, m, .. } if k == 0 && m == 0 => bad("k and m both zero"),
            IndexFamily::Power { p, q, d } => {
                if d == 0 {
                    bad("d must be at least 1")
                } else if p == 0 || q == 0 {
                    bad("p and q must be positive")
                } else if p.gcd(&q) != 1 {
                    bad("p and q must be coprime")
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    pub fn closed_form(&self) -> Result<u64> {
        self.validate()?;
        Ok(match *self {
            IndexFamily::Rectangle { k, m } => 2 * (k * m + k + m),
            IndexFamily::Hook { k, m } => 2 * (k * m + m),
            IndexFamily::Triangle { k, m } => k * m + k + m + k.gcd(&m),
            IndexFamily::Trapezoid { k, m, d } => (2 * k + m) * d * d + (2 * k + m + 2) * d,
            IndexFamily::Power { p, q, d } => p * q * d * d + (p + q + 1) * d,
        })
    }

    /// The generator the formula describes.
    pub fn generator(&self) -> Result<ConvexGenerator> {
        self.validate()?;
        let mut factors = Vec::new();
        let mut push = |run: u64, drop: u64, mult: u64| -> Result<()> {
            if mult > 0 {
                factors.push(EdgeFactor::elliptic(run, drop, mult)?);
            }
            Ok(())
        };
        match *self {
            IndexFamily::Rectangle { k, m } => {
                push(1, 0, k)?;
                push(0, 1, m)?;
            }
            IndexFamily::Hook { k, m } => {
                push(k, 1, 1)?;
                push(0, 1, m - 1)?;
            }
            IndexFamily::Triangle { k, m } => return ConvexGenerator::segment(k, m),
            IndexFamily::Trapezoid { k, m, d } => {
                push(1, 0, k * d)?;
                push(m, 1, d)?;
            }
            IndexFamily::Power { p, q, d } => push(p, q, d)?,
        }
        ConvexGenerator::new(factors)
    }
}
