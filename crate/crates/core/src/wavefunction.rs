//! Eigenfunctions of the oscillator and its rational extension, stored as
//! quasi-Gaussians `h(x) e^{σx²/2}` with an exact rational prefactor `h`.
//!
//! States are kept unnormalized. Their squared norms are carried exactly as
//! `rational · π^{k/2}` so that every ladder identity can be checked on
//! squares without taking square roots.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{eop_y, hermite, int, pseudo_hermite, ExactPoly, RationalFunction};

/// A sign `±1`, used both for the Gaussian exponent and the derivative coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Which partner Hamiltonian a state belongs to: the oscillator `H⁺` or its
/// rational extension `H⁻`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Plus,
    Minus,
}

#[derive(Clone, Debug, Eq)]
pub struct QuasiGaussian {
    pre: RationalFunction,
    sigma: Sign,
}

impl QuasiGaussian {
    pub fn new(pre: RationalFunction, sigma: Sign) -> Self {
        QuasiGaussian { pre, sigma }
    }

    /// `p(x) e^{σx²/2}` for a polynomial prefactor.
    pub fn polynomial(p: ExactPoly, sigma: Sign) -> Self {
        Self::new(RationalFunction::from_poly(p), sigma)
    }

    pub fn pre(&self) -> &RationalFunction {
        &self.pre
    }

    pub fn sigma(&self) -> Sign {
        self.sigma
    }

    pub fn is_zero(&self) -> bool {
        self.pre.is_zero()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.pre.scale(c), self.sigma)
    }

    /// `self - other`; both must share the Gaussian sign unless one vanishes.
    pub fn checked_sub(&self, other: &QuasiGaussian) -> Result<QuasiGaussian> {
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.scale(&-BigRational::one()));
        }
        if self.sigma != other.sigma {
            return Err(Error::domain("subtracting quasi-Gaussians with different exponents"));
        }
        Ok(Self::new(&self.pre - &other.pre, self.sigma))
    }

    /// The constant `c` with `self = c · other`, if one exists.
    pub fn ratio_to(&self, other: &QuasiGaussian) -> Option<BigRational> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.sigma != other.sigma || self.pre.den() != other.pre.den() {
            return None;
        }
        let c = self.pre.num().leading()? / other.pre.num().leading()?;
        (other.pre.num().scale(&c) == *self.pre.num()).then_some(c)
    }

    /// Double-precision evaluator of the prefactor `h`.
    pub fn prefactor_f64(&self) -> impl Fn(f64) -> f64 {
        let num = self.pre.num().to_f64_coeffs();
        let den = self.pre.den().to_f64_coeffs();
        move |x| horner(&num, x) / horner(&den, x)
    }
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, a| acc * x + a)
}

impl std::ops::Add for QuasiGaussian {
    type Output = QuasiGaussian;

    /// Panics when both terms are nonzero with different Gaussian signs.
    fn add(self, rhs: QuasiGaussian) -> QuasiGaussian {
        self.checked_sub(&rhs.scale(&-BigRational::one()))
            .expect("adding quasi-Gaussians with different exponents")
    }
}

impl PartialEq for QuasiGaussian {
    fn eq(&self, other: &Self) -> bool {
        (self.is_zero() && other.is_zero()) || (self.sigma == other.sigma && self.pre == other.pre)
    }
}

impl std::hash::Hash for QuasiGaussian {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        // all zero states are equal regardless of the exponent sign
        if !self.is_zero() {
            self.sigma.hash(state);
            self.pre.hash(state);
        }
    }
}

impl fmt::Display for QuasiGaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.sigma {
            Sign::Plus => "+",
            Sign::Minus => "-",
        };
        write!(f, "[{}] exp({s}x^2/2)", self.pre)
    }
}

/// `rational_part · π^{sqrt_pi_power/2}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormSquared {
    pub rational_part: BigRational,
    pub sqrt_pi_power: i32,
}

impl NormSquared {
    pub fn to_f64(&self) -> f64 {
        self.rational_part.to_f64().unwrap_or(f64::NAN) * std::f64::consts::PI.sqrt().powi(self.sqrt_pi_power)
    }

    /// Exact `self / other`, defined when the π powers cancel.
    pub fn ratio(&self, other: &NormSquared) -> Result<BigRational> {
        if self.sqrt_pi_power != other.sqrt_pi_power {
            return Err(Error::Inconsistent(format!(
                "norms carry different powers of sqrt(pi): {} vs {}",
                self.sqrt_pi_power, other.sqrt_pi_power
            )));
        }
        Ok(&self.rational_part / &other.rational_part)
    }
}

impl fmt::Display for NormSquared {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sqrt_pi_power {
            0 => write!(f, "{}", self.rational_part),
            1 => write!(f, "{}·√π", self.rational_part),
            k => write!(f, "{}·π^({k}/2)", self.rational_part),
        }
    }
}

pub(crate) fn check_even_m(m: usize) -> Result<()> {
    if m == 0 || !m.is_multiple_of(2) {
        Err(Error::domain(format!("m must be an even positive integer, got {m}")))
    } else {
        Ok(())
    }
}

fn check_index(m: usize, side: Side, nu: i64) -> Result<()> {
    check_even_m(m)?;
    let ok = match side {
        Side::Plus => nu >= 0,
        Side::Minus => nu >= 0 || nu == -(m as i64) - 1,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "nu = {nu} is not an eigenstate index of H{} for m = {m}",
            if side == Side::Plus { "+" } else { "-" }
        )))
    }
}

/// Eigenstate indices of `H⁻` up to `nu_max`: `-m-1, 0, 1, …, nu_max`.
pub fn minus_indices(m: usize, nu_max: i64) -> Vec<i64> {
    std::iter::once(-(m as i64) - 1).chain(0..=nu_max).collect()
}

/// Unnormalized eigenfunction: `H_ν e^{-x²/2}` for `H⁺`, and
/// `y^(m)_{ν+m+1} / 𝓗_m · e^{-x²/2}` for `H⁻`.
pub fn eigenstate_prefactor(m: usize, side: Side, nu: i64) -> Result<QuasiGaussian> {
    check_index(m, side, nu)?;
    let pre = match side {
        Side::Plus => RationalFunction::from_poly(hermite(nu as usize)),
        Side::Minus => {
            let n = (nu + m as i64 + 1) as usize;
            RationalFunction::new(eop_y(m, n)?, pseudo_hermite(m))?
        }
    };
    Ok(QuasiGaussian::new(pre, Sign::Minus))
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, b| a * b)
}

/// Squared L² norm of the unnormalized eigenfunction.
pub fn norm_squared(m: usize, side: Side, nu: i64) -> Result<NormSquared> {
    check_index(m, side, nu)?;
    let two = BigInt::from(2);
    let rational_part = match side {
        Side::Plus => BigRational::from_integer(two.pow(nu as u32) * factorial(nu as u64)),
        Side::Minus if nu < 0 => BigRational::new(BigInt::one(), two.pow(m as u32) * factorial(m as u64)),
        Side::Minus => {
            BigRational::from_integer(two.pow(nu as u32 + 1) * BigInt::from(nu + m as i64 + 1) * factorial(nu as u64))
        }
    };
    Ok(NormSquared {
        rational_part,
        sqrt_pi_power: 1,
    })
}

/// `E_ν = 2(ν + m + 1)` on either side.
pub fn energy(m: usize, side: Side, nu: i64) -> Result<BigRational> {
    check_index(m, side, nu)?;
    Ok(int(2 * (nu + m as i64 + 1)))
}
