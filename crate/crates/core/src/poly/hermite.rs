use num_traits::Zero;

use super::{int, ExactPoly};
use crate::error::{Error, Result};

/// Physicists' Hermite polynomial `H_n` from the three-term recurrence
/// `H_{n+1} = 2x H_n - 2n H_{n-1}`.
pub fn hermite(n: usize) -> ExactPoly {
    let two_x = ExactPoly::from_ints(&[0, 2]);
    let mut prev = ExactPoly::one();
    if n == 0 {
        return prev;
    }
    let mut cur = two_x.clone();
    for k in 1..n {
        let next = &two_x * &cur - prev.scale(&int(2 * k as i64));
        prev = cur;
        cur = next;
    }
    cur
}

/// Pseudo-Hermite polynomial `(-i)^m H_m(ix)`, computed with real arithmetic:
/// the coefficient of `x^k` in `H_m` picks up `(-1)^((m-k)/2)`.
///
/// For even `m` it has no real zeros.
pub fn pseudo_hermite(m: usize) -> ExactPoly {
    let h = hermite(m);
    ExactPoly::from_coeffs(
        h.coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if c.is_zero() || ((m - k) / 2).is_multiple_of(2) {
                    c.clone()
                } else {
                    -c
                }
            })
            .collect(),
    )
}

/// Type III Hermite exceptional polynomial `y^(m)_n`.
///
/// Valid indices are `n = 0` and `n >= m + 1`; the gap `1..=m` is rejected.
pub fn eop_y(m: usize, n: usize) -> Result<ExactPoly> {
    if m == 0 || !m.is_multiple_of(2) {
        return Err(Error::domain(format!("m must be even and positive, got {m}")));
    }
    if n == 0 {
        return Ok(ExactPoly::one());
    }
    if n <= m {
        return Err(Error::domain(format!(
            "n = {n} lies in the degree gap 1..={m} of y^({m})"
        )));
    }
    let nu = n - m - 1;
    let lhs = pseudo_hermite(m) * hermite(nu + 1);
    let rhs = (pseudo_hermite(m - 1) * hermite(nu)).scale(&int(2 * m as i64));
    Ok(-(lhs + rhs))
}

/// Explicit sum `H_n = n! sum_k (-1)^k (2x)^(n-2k) / (k! (n-2k)!)`; test oracle.
#[cfg(test)]
pub(crate) fn hermite_explicit(n: usize) -> ExactPoly {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    let fact = |k: usize| -> BigInt { (1..=k).fold(BigInt::from(1), |a, b| a * b) };
    let mut coeffs = vec![BigRational::zero(); n + 1];
    for k in 0..=n / 2 {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let num = fact(n) * BigInt::from(2).pow((n - 2 * k) as u32) * sign;
        let den = fact(k) * fact(n - 2 * k);
        coeffs[n - 2 * k] = BigRational::new(num, den);
    }
    ExactPoly::from_coeffs(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;
    use num_rational::BigRational;

    #[test]
    fn hermite_examples() {
        assert_eq!(hermite(0), ExactPoly::one());
        assert_eq!(hermite(2), ExactPoly::from_ints(&[-2, 0, 4]));
        assert_eq!(hermite(4), ExactPoly::from_ints(&[12, 0, -48, 0, 16]));
    }

    #[test]
    fn hermite_matches_explicit_sum() {
        for n in 0..=20 {
            assert_eq!(hermite(n), hermite_explicit(n), "n = {n}");
        }
    }

    #[test]
    fn pseudo_hermite_examples() {
        assert_eq!(pseudo_hermite(0), ExactPoly::one());
        assert_eq!(pseudo_hermite(2), ExactPoly::from_ints(&[2, 0, 4]));
        assert_eq!(pseudo_hermite(4), ExactPoly::from_ints(&[12, 0, 48, 0, 16]));
    }

    #[test]
    fn recurrences_hold() {
        let two_x = ExactPoly::from_ints(&[0, 2]);
        for n in 1..20 {
            let k = int(2 * n as i64);
            assert_eq!(hermite(n + 1), &two_x * hermite(n) - hermite(n - 1).scale(&k));
            assert_eq!(
                pseudo_hermite(n + 1),
                &two_x * pseudo_hermite(n) + pseudo_hermite(n - 1).scale(&k)
            );
        }
    }

    #[test]
    fn pseudo_hermite_derivative_identity() {
        for m in 1..=10 {
            assert_eq!(
                pseudo_hermite(m).derivative(),
                pseudo_hermite(m - 1).scale(&int(2 * m as i64))
            );
        }
    }

    #[test]
    fn pseudo_hermite_positive_for_even_m() {
        for m in (0..=10).step_by(2) {
            let p = pseudo_hermite(m);
            for i in 0..500 {
                // 500 points spread over [-50, 50]
                let x = rat(-50_000 + i * 200 + 37, 1000);
                assert!(p.eval(&x) > BigRational::zero(), "m = {m}, x = {x}");
            }
            assert_eq!(p.real_root_count(), 0);
        }
    }

    #[test]
    fn eop_examples() {
        assert_eq!(eop_y(2, 0).unwrap(), ExactPoly::one());
        assert_eq!(eop_y(2, 3).unwrap(), ExactPoly::from_ints(&[0, -12, 0, -8]));
        assert!(matches!(eop_y(2, 1), Err(Error::Domain(_))));
        assert!(matches!(eop_y(2, 2), Err(Error::Domain(_))));
        assert!(matches!(eop_y(3, 0), Err(Error::Domain(_))));
        for m in [2usize, 4, 6] {
            for nu in 0..8 {
                assert_eq!(eop_y(m, nu + m + 1).unwrap().degree(), Some(nu + m + 1));
            }
        }
    }
}
