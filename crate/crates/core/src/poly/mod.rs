//! Dense univariate polynomials over arbitrary-precision rationals.
//!
//! Everything in this module is exact. Coefficients are stored lowest power
//! first and the vector is always trimmed, so the zero polynomial is the empty
//! vector and two equal polynomials have identical representations.

mod hermite;
mod modular;
mod rational;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use hermite::{eop_y, hermite, pseudo_hermite};
pub use rational::RationalFunction;

/// Shorthand for an exact rational built from machine integers.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactPoly {
    coeffs: Vec<BigRational>,
}

impl ExactPoly {
    pub fn zero() -> Self {
        ExactPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(BigRational::one(), 1)
    }

    pub fn monomial(c: BigRational, power: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); power + 1];
        coeffs[power] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        ExactPoly { coeffs }
    }

    /// Integer coefficients, lowest power first.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| int(c)).collect())
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[BigRational]) -> Self {
        roots.iter().fold(Self::one(), |acc, r| {
            acc * Self::from_coeffs(vec![-r.clone(), BigRational::one()])
        })
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    /// The constant value if the degree is at most zero.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    /// Exact Horner evaluation.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * int(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ExactPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiply by `x^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        ExactPoly { coeffs }
    }

    /// Divides by the leading coefficient; the zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    /// Euclidean division. Fails only for a zero divisor.
    pub fn div_rem(&self, divisor: &ExactPoly) -> Result<(ExactPoly, ExactPoly)> {
        let dlead = divisor
            .leading()
            .ok_or_else(|| Error::domain("polynomial division by zero"))?;
        let ddeg = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= ddeg {
            return Ok((Self::zero(), self.clone()));
        }
        let inv = dlead.recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); rem.len() - ddeg];
        for k in (0..quot.len()).rev() {
            let q = &rem[k + ddeg] * &inv;
            if !q.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &q * d;
                }
            }
            quot[k] = q;
        }
        rem.truncate(ddeg);
        Ok((Self::from_coeffs(quot), Self::from_coeffs(rem)))
    }

    /// Exact quotient, failing when the division leaves a remainder.
    pub fn div_exact(&self, divisor: &ExactPoly) -> Result<ExactPoly> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::Inconsistent(format!("{self} is not divisible by {divisor}")))
        }
    }

    /// Number of distinct real roots, by a Sturm sequence.
    pub fn real_root_count(&self) -> usize {
        let Some(deg) = self.degree() else {
            return 0;
        };
        if deg == 0 {
            return 0;
        }
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]).expect("nonzero divisor");
            if r.is_zero() {
                break;
            }
            seq.push(-r);
        }
        let signs_at = |positive_infinity: bool| -> Vec<i32> {
            seq.iter()
                .map(|p| {
                    let lc_sign = if p.leading().unwrap().is_positive() { 1 } else { -1 };
                    let d = p.degree().unwrap();
                    if positive_infinity || d % 2 == 0 {
                        lc_sign
                    } else {
                        -lc_sign
                    }
                })
                .collect()
        };
        let changes = |s: Vec<i32>| s.windows(2).filter(|w| w[0] != w[1]).count();
        changes(signs_at(false)) - changes(signs_at(true))
    }

    fn add_ref(&self, other: &ExactPoly) -> ExactPoly {
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (a, b) in coeffs.iter_mut().zip(&short.coeffs) {
            *a += b;
        }
        Self::from_coeffs(coeffs)
    }

    fn mul_ref(&self, other: &ExactPoly) -> ExactPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        // Multiply over the integers and normalize each coefficient once.
        let (da, a) = self.integer_form();
        let (db, b) = other.integer_form();
        let mut coeffs = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                coeffs[i + j] += x * y;
            }
        }
        let d = da * db;
        Self::from_coeffs(coeffs.into_iter().map(|c| BigRational::new(c, d.clone())).collect())
    }

    /// `(d, c)` with `self = c / d`, where `d > 0` is the lcm of the coefficient denominators.
    pub(crate) fn integer_form(&self) -> (BigInt, Vec<BigInt>) {
        let d = self.coeffs.iter().fold(
            BigInt::one(),
            |acc, c| if c.denom().is_one() { acc } else { acc.lcm(c.denom()) },
        );
        let c = self
            .coeffs
            .iter()
            .map(|c| {
                if d.is_one() {
                    c.numer().clone()
                } else {
                    c.numer() * (&d / c.denom())
                }
            })
            .collect();
        (d, c)
    }

    fn neg_ref(&self) -> ExactPoly {
        ExactPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

/// Serialized as the coefficient list, lowest power first, in exact string form.
impl serde::Serialize for ExactPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::serde_exact::rationals(&self.coeffs, s)
    }
}

impl<'de> serde::Deserialize<'de> for ExactPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        crate::serde_exact::de_rationals(d).map(ExactPoly::from_coeffs)
    }
}

/// Monic greatest common divisor by the Euclidean algorithm.
///
/// Remainders are kept monic at every step, which bounds coefficient growth
/// for the moderate degrees used here.
pub fn poly_gcd(a: &ExactPoly, b: &ExactPoly) -> Result<ExactPoly> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::domain("gcd of two zero polynomials"));
    }
    if a.is_zero() || b.is_zero() {
        return Ok(if a.is_zero() { b.monic() } else { a.monic() });
    }
    if let Some((g, _, _)) = modular::gcd_with_cofactors(a, b) {
        return Ok(g);
    }
    let (mut u, mut v) = (a.monic(), b.monic());
    if u.degree() < v.degree() {
        std::mem::swap(&mut u, &mut v);
    }
    while !v.is_zero() {
        if v.degree() == Some(0) {
            return Ok(ExactPoly::one());
        }
        let (_, r) = u.div_rem(&v)?;
        u = v;
        v = r.monic();
    }
    Ok(u)
}

/// `(g, a / g, b / g)` with `g` the monic gcd. Both inputs must be nonzero.
pub(crate) fn gcd_with_cofactors(a: &ExactPoly, b: &ExactPoly) -> Result<(ExactPoly, ExactPoly, ExactPoly)> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::domain("cofactors of a zero polynomial"));
    }
    if let Some(r) = modular::gcd_with_cofactors(a, b) {
        return Ok(r);
    }
    let g = poly_gcd(a, b)?;
    Ok((g.clone(), a.div_exact(&g)?, b.div_exact(&g)?))
}

pub fn eval_at(p: &ExactPoly, x0: &BigRational) -> BigRational {
    p.eval(x0)
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl $tr<&ExactPoly> for &ExactPoly {
            type Output = ExactPoly;
            fn $method(self, rhs: &ExactPoly) -> ExactPoly {
                self.$imp(rhs)
            }
        }
        impl $tr<ExactPoly> for ExactPoly {
            type Output = ExactPoly;
            fn $method(self, rhs: ExactPoly) -> ExactPoly {
                (&self).$imp(&rhs)
            }
        }
        impl $tr<&ExactPoly> for ExactPoly {
            type Output = ExactPoly;
            fn $method(self, rhs: &ExactPoly) -> ExactPoly {
                (&self).$imp(rhs)
            }
        }
        impl $tr<ExactPoly> for &ExactPoly {
            type Output = ExactPoly;
            fn $method(self, rhs: ExactPoly) -> ExactPoly {
                self.$imp(&rhs)
            }
        }
    };
}

impl ExactPoly {
    fn sub_ref(&self, other: &ExactPoly) -> ExactPoly {
        self.add_ref(&other.neg_ref())
    }
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl Neg for ExactPoly {
    type Output = ExactPoly;
    fn neg(self) -> ExactPoly {
        self.neg_ref()
    }
}

impl Neg for &ExactPoly {
    type Output = ExactPoly;
    fn neg(self) -> ExactPoly {
        self.neg_ref()
    }
}

impl fmt::Display for ExactPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = c.abs();
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = k == 0 || !mag.is_one();
            if show_coeff {
                if mag.is_integer() {
                    write!(f, "{}", mag.numer())?;
                } else {
                    write!(f, "({})", mag)?;
                }
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ExactPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactPoly({self})")
    }
}
