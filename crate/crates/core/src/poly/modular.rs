//! Modular polynomial gcd over the rationals.
//!
//! The gcd is computed modulo several word-sized primes, lifted by the Chinese
//! remainder theorem and accepted only after exact trial division over the
//! integers. A candidate that divides both inputs and has the smallest
//! modular degree seen is the true gcd, so the result is exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::ExactPoly;

/// Primes just below `2^62`.
const PRIMES: [u64; 48] = [
    0x3fffffffffffffc7,
    0x3fffffffffffffa9,
    0x3fffffffffffff8b,
    0x3fffffffffffff71,
    0x3fffffffffffff67,
    0x3fffffffffffff59,
    0x3fffffffffffff55,
    0x3fffffffffffff3d,
    0x3fffffffffffff35,
    0x3ffffffffffffeef,
    0x3ffffffffffffee1,
    0x3ffffffffffffec3,
    0x3ffffffffffffe45,
    0x3ffffffffffffe1d,
    0x3ffffffffffffe11,
    0x3ffffffffffffdc1,
    0x3ffffffffffffdbb,
    0x3ffffffffffffda5,
    0x3ffffffffffffd87,
    0x3ffffffffffffd69,
    0x3ffffffffffffd03,
    0x3ffffffffffffcfb,
    0x3ffffffffffffcf7,
    0x3ffffffffffffce9,
    0x3ffffffffffffcd3,
    0x3ffffffffffffcc1,
    0x3ffffffffffffc65,
    0x3ffffffffffffc2b,
    0x3ffffffffffffc1f,
    0x3ffffffffffffc17,
    0x3ffffffffffffc11,
    0x3ffffffffffffc07,
    0x3ffffffffffffb53,
    0x3ffffffffffffb27,
    0x3ffffffffffffaf3,
    0x3ffffffffffffab7,
    0x3ffffffffffffa67,
    0x3ffffffffffffa15,
    0x3ffffffffffff9ef,
    0x3ffffffffffff9d9,
    0x3ffffffffffff9d3,
    0x3ffffffffffff9c5,
    0x3ffffffffffff9af,
    0x3ffffffffffff977,
    0x3ffffffffffff95f,
    0x3ffffffffffff95b,
    0x3ffffffffffff959,
    0x3ffffffffffff8e1,
];

#[derive(Clone, Copy)]
struct Zp(u64);

impl Zp {
    fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }

    fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + (self.0 - b)
        }
    }

    fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    fn inv(self, a: u64) -> u64 {
        self.pow(a, self.0 - 2)
    }

    fn reduce(self, c: &BigInt) -> u64 {
        let r = (c.abs() % BigInt::from(self.0)).to_u64().expect("below the modulus");
        if c.is_negative() && r != 0 {
            self.0 - r
        } else {
            r
        }
    }

    fn rem(self, mut a: Vec<u64>, b: &[u64]) -> Vec<u64> {
        let db = b.len() - 1;
        let lead_inv = self.inv(b[db]);
        while a.len() > db {
            let k = a.len() - 1 - db;
            let q = self.mul(*a.last().expect("nonempty"), lead_inv);
            if q != 0 {
                for (j, &bj) in b.iter().enumerate() {
                    a[k + j] = self.sub(a[k + j], self.mul(q, bj));
                }
            }
            a.pop();
        }
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    /// Monic gcd of two polynomials with nonzero leading coefficients.
    fn gcd(self, mut u: Vec<u64>, mut v: Vec<u64>) -> Vec<u64> {
        if u.len() < v.len() {
            std::mem::swap(&mut u, &mut v);
        }
        while !v.is_empty() {
            let r = self.rem(u, &v);
            u = v;
            v = r;
        }
        let inv = self.inv(*u.last().expect("nonzero"));
        u.iter().map(|&c| self.mul(c, inv)).collect()
    }
}

/// Primitive integer form: `p = scale · c` with `c` integer and content one.
fn primitive(p: &ExactPoly) -> (BigRational, Vec<BigInt>) {
    let (d, mut c) = p.integer_form();
    let mut content = c.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if c.last().is_some_and(Signed::is_negative) {
        content = -content;
    }
    for x in &mut c {
        *x = &*x / &content;
    }
    (BigRational::new(content, d), c)
}

/// `a / g` over the integers, or `None` if `g` does not divide `a`.
fn divide(a: &[BigInt], g: &[BigInt]) -> Option<Vec<BigInt>> {
    let dg = g.len() - 1;
    if a.len() <= dg {
        return None;
    }
    let lead = &g[dg];
    let mut rem = a.to_vec();
    let mut quot = vec![BigInt::zero(); a.len() - dg];
    for k in (0..quot.len()).rev() {
        let (q, r) = rem[k + dg].div_rem(lead);
        if !r.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for (j, gj) in g.iter().enumerate() {
                rem[k + j] -= &q * gj;
            }
        }
        quot[k] = q;
    }
    rem[..dg].iter().all(Zero::is_zero).then_some(quot)
}

fn to_poly(scale: &BigRational, c: Vec<BigInt>) -> ExactPoly {
    ExactPoly::from_coeffs(c.into_iter().map(|x| scale * BigRational::from_integer(x)).collect())
}

/// Monic gcd of `a` and `b` with both cofactors, or `None` if the primes ran out.
/// Both inputs must be nonzero.
pub(super) fn gcd_with_cofactors(a: &ExactPoly, b: &ExactPoly) -> Option<(ExactPoly, ExactPoly, ExactPoly)> {
    let (sa, ia) = primitive(a);
    let (sb, ib) = primitive(b);
    let gamma = ia.last()?.gcd(ib.last()?);
    let mut best: Option<(usize, BigInt, Vec<BigInt>)> = None;
    let mut last_candidate: Option<Vec<BigInt>> = None;
    for &p in &PRIMES {
        let f = Zp(p);
        let (ua, ub) = (
            ia.iter().map(|c| f.reduce(c)).collect::<Vec<_>>(),
            ib.iter().map(|c| f.reduce(c)).collect::<Vec<_>>(),
        );
        if ua.last() == Some(&0) || ub.last() == Some(&0) {
            continue;
        }
        let g = f.gcd(ua, ub);
        let deg = g.len() - 1;
        if deg == 0 {
            return Some((ExactPoly::one(), a.clone(), b.clone()));
        }
        let gm = f.reduce(&gamma);
        let g: Vec<u64> = g.iter().map(|&c| f.mul(c, gm)).collect();
        let pm = BigInt::from(p);
        best = match best.take() {
            Some((d, _, _)) if deg > d => continue,
            Some((d, m, h)) if deg == d => {
                let minv = f.inv(f.reduce(&m));
                let h = h
                    .iter()
                    .zip(&g)
                    .map(|(hc, &gc)| {
                        let t = f.mul(f.sub(gc, f.reduce(hc)), minv);
                        hc + &m * BigInt::from(t)
                    })
                    .collect();
                Some((d, m * &pm, h))
            }
            _ => Some((deg, pm, g.into_iter().map(BigInt::from).collect())),
        };
        let (_, m, h) = best.as_ref().expect("just set");
        let half: BigInt = m >> 1;
        let candidate: Vec<BigInt> = h.iter().map(|c| if c > &half { c - m } else { c.clone() }).collect();
        if last_candidate.as_ref() != Some(&candidate) {
            last_candidate = Some(candidate);
            continue;
        }
        let content = candidate.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let g: Vec<BigInt> = candidate.iter().map(|x| x / &content).collect();
        if let (Some(qa), Some(qb)) = (divide(&ia, &g), divide(&ib, &g)) {
            let lead = BigRational::from_integer(g.last().expect("nonzero").clone());
            let gpoly = to_poly(&lead.recip(), g);
            return Some((gpoly, to_poly(&(&sa * &lead), qa), to_poly(&(&sb * &lead), qb)));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn shared_factor_and_cofactors() {
        let common = ExactPoly::from_ints(&[2, 0, 4]);
        let a = &common * &ExactPoly::from_ints(&[3, 1]);
        let b = (&common * &ExactPoly::from_ints(&[-5, 2])).scale(&BigRational::new(7.into(), 3.into()));
        let (g, qa, qb) = gcd_with_cofactors(&a, &b).unwrap();
        assert_eq!(g, ExactPoly::from_ints(&[1, 0, 2]).monic());
        assert_eq!(&g * &qa, a);
        assert_eq!(&g * &qb, b);
    }

    #[test]
    fn coprime_inputs() {
        let (g, qa, _) = gcd_with_cofactors(&ExactPoly::from_ints(&[1, 0, 4]), &ExactPoly::from_ints(&[0, 1])).unwrap();
        assert_eq!(g, ExactPoly::one());
        assert_eq!(qa, ExactPoly::from_ints(&[1, 0, 4]));
    }

    #[test]
    fn large_coefficients() {
        let big = BigRational::from_integer(BigInt::from(10u8).pow(60u32) + 7);
        let common = ExactPoly::from_coeffs(vec![big.clone(), BigRational::one(), big]);
        let a = &common * &ExactPoly::from_ints(&[1, 1]);
        let b = &common * &ExactPoly::from_ints(&[1, -1]);
        let (g, _, _) = gcd_with_cofactors(&a, &b).unwrap();
        assert_eq!(g, common.monic());
    }
}
