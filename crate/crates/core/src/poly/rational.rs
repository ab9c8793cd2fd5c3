use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{gcd_with_cofactors, ExactPoly};
use crate::error::{Error, Result};

/// Quotient of two exact polynomials kept in canonical form: the gcd of
/// numerator and denominator is constant and the denominator is monic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: ExactPoly,
    den: ExactPoly,
}

impl RationalFunction {
    pub fn new(num: ExactPoly, den: ExactPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::domain("rational function with zero denominator"));
        }
        Ok(Self::simplified(num, den))
    }

    pub fn from_poly(p: ExactPoly) -> Self {
        RationalFunction {
            num: p,
            den: ExactPoly::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(ExactPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(ExactPoly::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_poly(ExactPoly::constant(c))
    }

    /// Builds `num / den` without reducing. The caller guarantees `den != 0`.
    #[cfg(test)]
    pub(crate) fn unreduced(num: ExactPoly, den: ExactPoly) -> Self {
        debug_assert!(!den.is_zero());
        RationalFunction { num, den }
    }

    fn simplified(num: ExactPoly, den: ExactPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (num, den) = if den.degree() == Some(0) {
            (num, den)
        } else {
            let (_, n, d) = gcd_with_cofactors(&num, &den).expect("both nonzero");
            (n, d)
        };
        let lc = den.leading().expect("nonzero").clone();
        if lc.is_one() {
            RationalFunction { num, den }
        } else {
            let inv = lc.recip();
            RationalFunction {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    /// Reduces to canonical form. Idempotent.
    pub fn simplify(&self) -> Self {
        Self::simplified(self.num.clone(), self.den.clone())
    }

    pub fn num(&self) -> &ExactPoly {
        &self.num
    }

    pub fn den(&self) -> &ExactPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial value when the denominator is constant.
    pub fn as_polynomial(&self) -> Option<ExactPoly> {
        let d = self.den.as_constant()?;
        Some(self.num.scale(&d.recip()))
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        let d = self.den.as_constant()?;
        Some(self.num.as_constant()? / d)
    }

    /// `None` at a pole.
    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    pub fn derivative(&self) -> Self {
        let num = self.num.derivative() * &self.den - &self.num * self.den.derivative();
        Self::simplified(num, &self.den * &self.den)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn mul_poly(&self, p: &ExactPoly) -> Self {
        Self::simplified(&self.num * p, self.den.clone())
    }

    pub fn recip(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, other: &RationalFunction) -> Result<Self> {
        Ok(self * &other.recip()?)
    }

    /// True when the denominator has a zero on the real line.
    pub fn has_real_pole(&self) -> bool {
        self.den.real_root_count() > 0
    }

    fn add_ref(&self, other: &RationalFunction) -> RationalFunction {
        if self.den == other.den {
            return Self::simplified(&self.num + &other.num, self.den.clone());
        }
        Self::simplified(&self.num * &other.den + &other.num * &self.den, &self.den * &other.den)
    }

    fn sub_ref(&self, other: &RationalFunction) -> RationalFunction {
        self.add_ref(&other.neg_ref())
    }

    fn mul_ref(&self, other: &RationalFunction) -> RationalFunction {
        Self::simplified(&self.num * &other.num, &self.den * &other.den)
    }

    fn neg_ref(&self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl $tr<&RationalFunction> for &RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: &RationalFunction) -> RationalFunction {
                self.$imp(rhs)
            }
        }
        impl $tr<RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$imp(&rhs)
            }
        }
        impl $tr<&RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: &RationalFunction) -> RationalFunction {
                (&self).$imp(rhs)
            }
        }
        impl $tr<RationalFunction> for &RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: RationalFunction) -> RationalFunction {
                self.$imp(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        self.neg_ref()
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        self.neg_ref()
    }
}

impl From<ExactPoly> for RationalFunction {
    fn from(p: ExactPoly) -> Self {
        Self::from_poly(p)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one_poly() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

impl ExactPoly {
    fn is_one_poly(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, poly_gcd, pseudo_hermite, rat};
    use proptest::prelude::*;

    #[test]
    fn canonical_form() {
        // (2x^2 - 2) / (4x - 4) = (x + 1) / 2
        let f = RationalFunction::new(ExactPoly::from_ints(&[-2, 0, 2]), ExactPoly::from_ints(&[-4, 4])).unwrap();
        assert_eq!(f.den(), &ExactPoly::one());
        assert_eq!(f.num(), &ExactPoly::from_coeffs(vec![rat(1, 2), rat(1, 2)]));
        assert!(RationalFunction::new(ExactPoly::one(), ExactPoly::zero()).is_err());
    }

    #[test]
    fn monic_denominator_absorbs_constant() {
        let ph2 = pseudo_hermite(2);
        let f = RationalFunction::new(ExactPoly::from_ints(&[0, 8]), ph2).unwrap();
        assert_eq!(f.den(), &ExactPoly::from_coeffs(vec![rat(1, 2), int(0), int(1)]));
        assert_eq!(f.num(), &ExactPoly::from_ints(&[0, 2]));
        assert_eq!(f.eval(&int(1)), Some(rat(4, 3)));
    }

    #[test]
    fn real_pole_detection() {
        let f = RationalFunction::new(ExactPoly::one(), ExactPoly::from_ints(&[0, 1])).unwrap();
        assert!(f.has_real_pole());
        assert_eq!(f.eval(&int(0)), None);
        let g = RationalFunction::new(ExactPoly::one(), pseudo_hermite(4)).unwrap();
        assert!(!g.has_real_pole());
    }

    fn small_poly() -> impl Strategy<Value = ExactPoly> {
        prop::collection::vec(-5i64..=5, 0..5).prop_map(|c| ExactPoly::from_ints(&c))
    }

    fn small_rf() -> impl Strategy<Value = RationalFunction> {
        (small_poly(), small_poly(), small_poly())
            .prop_filter("nonzero denominator", |(_, d, c)| !d.is_zero() && !c.is_zero())
            .prop_map(|(n, d, c)| RationalFunction::unreduced(&n * &c, &d * &c))
    }

    proptest! {
        #[test]
        fn simplify_idempotent(f in small_rf()) {
            let s = f.simplify();
            prop_assert_eq!(s.simplify(), s.clone());
            prop_assert!(s.den().leading().unwrap().is_one());
            prop_assert_eq!(poly_gcd(s.num(), s.den()).map(|g| g.degree() == Some(0)).unwrap_or(true), true);
        }

        #[test]
        fn field_identities(f in small_rf(), g in small_rf()) {
            let (f, g) = (f.simplify(), g.simplify());
            prop_assert_eq!((&f + &g) - &g, f.clone());
            prop_assert_eq!((&f * &g).derivative(), f.derivative() * &g + &f * g.derivative());
            if !g.is_zero() {
                prop_assert_eq!(f.checked_div(&g).unwrap() * &g, f.clone());
            }
        }
    }
}
