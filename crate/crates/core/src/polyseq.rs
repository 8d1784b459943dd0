//! The recurrences `G_i(x) = x·G_{i-1}(x) - G_{i-2}(x)` and
//! `F_i(x) = x·F_{i-1}(x) + F_{i-2}(x)`, both with `G_0 = F_0 = 1` and
//! `G_1 = F_1 = x`.
//!
//! Values are computed exactly with [`BigUint`]; polynomials are dense
//! coefficient vectors over [`BigInt`].

use std::fmt;
use std::ops::{Mul, Sub};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::PolyError;

/// Which of the two recurrence families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `G_i`, with the minus sign.
    G,
    /// `F_i`, with the plus sign.
    F,
}

impl Family {
    fn sign(self) -> i8 {
        match self {
            Family::G => -1,
            Family::F => 1,
        }
    }
}

impl std::str::FromStr for Family {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "g" | "G" => Ok(Family::G),
            "f" | "F" => Ok(Family::F),
            other => Err(PolyError::UnknownFamily(other.to_string())),
        }
    }
}

/// G_i(k) for k ≥ 2. The sequence is strictly positive there, so the
/// subtraction never leaves the naturals.
pub fn g_eval(i: usize, k: u64) -> Result<BigUint, PolyError> {
    if k < 2 {
        return Err(PolyError::EvalPointTooSmall { k, min: 2 });
    }
    Ok(g_eval_big(i, &BigUint::from(k)))
}

/// G_i(k) for an arbitrary-precision k ≥ 2 (not checked).
pub fn g_eval_big(i: usize, k: &BigUint) -> BigUint {
    let mut prev = BigUint::one();
    if i == 0 {
        return prev;
    }
    let mut cur = k.clone();
    for _ in 1..i {
        let next = k * &cur - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// F_i(k). Defined for every natural k.
pub fn f_eval(i: usize, k: u64) -> BigUint {
    let k = BigUint::from(k);
    let mut prev = BigUint::one();
    if i == 0 {
        return prev;
    }
    let mut cur = k.clone();
    for _ in 1..i {
        let next = &k * &cur + &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// Evaluates either family at k.
pub fn eval(family: Family, i: usize, k: u64) -> Result<BigUint, PolyError> {
    match family {
        Family::G => g_eval(i, k),
        Family::F => Ok(f_eval(i, k)),
    }
}

/// A nonzero integer polynomial; `coeffs[j]` is the coefficient of `x^j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyCoeffs {
    coeffs: Vec<BigInt>,
}

impl PolyCoeffs {
    /// Builds a polynomial, trimming trailing zeros. The zero polynomial is
    /// rejected.
    pub fn new(mut coeffs: Vec<BigInt>) -> Result<Self, PolyError> {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(PolyError::ZeroPolynomial);
        }
        Ok(PolyCoeffs { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self, PolyError> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("nonzero polynomial")
    }

    pub fn constant(&self) -> &BigInt {
        &self.coeffs[0]
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    fn combine(&self, other: &Self, sign: i8) -> Option<Self> {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|j| {
                let a = self.coeffs.get(j).cloned().unwrap_or_default();
                let b = other.coeffs.get(j).cloned().unwrap_or_default();
                if sign < 0 {
                    a - b
                } else {
                    a + b
                }
            })
            .collect();
        Self::new(coeffs).ok()
    }

    /// `x·self`.
    fn shift(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(BigInt::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        PolyCoeffs { coeffs }
    }

    /// Difference, or `None` when the result is the zero polynomial.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.combine(other, -1)
    }

    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        self.combine(other, 1)
    }
}

impl Mul for &PolyCoeffs {
    type Output = PolyCoeffs;

    fn mul(self, rhs: &PolyCoeffs) -> PolyCoeffs {
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        // product of nonzero integer polynomials is nonzero
        PolyCoeffs { coeffs }
    }
}

impl Sub for &PolyCoeffs {
    type Output = PolyCoeffs;

    /// Panics if the difference is zero; use [`PolyCoeffs::checked_sub`]
    /// when that can happen.
    fn sub(self, rhs: &PolyCoeffs) -> PolyCoeffs {
        self.checked_sub(rhs).expect("difference is the zero polynomial")
    }
}

impl fmt::Display for PolyCoeffs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let show_mag = j == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match j {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{j}")?,
            }
        }
        Ok(())
    }
}

fn coeffs_for(family: Family, i: usize) -> PolyCoeffs {
    let one = PolyCoeffs::from_i64(&[1]).unwrap();
    if i == 0 {
        return one;
    }
    let x = PolyCoeffs::from_i64(&[0, 1]).unwrap();
    let (mut prev, mut cur) = (one, x);
    for _ in 1..i {
        let shifted = cur.shift();
        // degree of x·cur exceeds that of prev, so the result is never zero
        let next = shifted.combine(&prev, family.sign()).unwrap();
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// Coefficient vector of G_i(x).
pub fn g_coeffs(i: usize) -> PolyCoeffs {
    coeffs_for(Family::G, i)
}

/// Coefficient vector of F_i(x).
pub fn f_coeffs(i: usize) -> PolyCoeffs {
    coeffs_for(Family::F, i)
}

pub fn coeffs(family: Family, i: usize) -> PolyCoeffs {
    coeffs_for(family, i)
}
