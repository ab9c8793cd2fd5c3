//! Gauss–Hermite quadrature for inner products of Gaussian-damped states.
//!
//! Nodes and weights come from the Golub–Welsch eigenproblem of the Hermite
//! Jacobi matrix, solved by implicit QL on the tridiagonal form. Only the first
//! component of each eigenvector is tracked, so a rule costs O(n²).

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::wavefunction::{eigenstate_prefactor, minus_indices, norm_squared, QuasiGaussian, Side, Sign};

pub const DEFAULT_NODES: usize = 200;
pub const MAX_NODES: usize = 2000;
const CONVERGENCE_TOL: f64 = 1e-12;

/// A Gauss–Hermite rule for `∫ e^{-x²} f(x) dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("quadrature needs at least one node"));
        }
        let mut diag = vec![0.0; n];
        // sub-diagonal sqrt(k/2), shifted for the QL sweep
        let mut off: Vec<f64> = (1..n).map(|k| (k as f64 / 2.0).sqrt()).chain([0.0]).collect();
        let mut first = vec![0.0; n];
        first[0] = 1.0;
        tridiagonal_ql(&mut diag, &mut off, &mut first)?;

        let sqrt_pi = std::f64::consts::PI.sqrt();
        let mut pairs: Vec<(f64, f64)> = diag.into_iter().zip(first).map(|(x, z)| (x, sqrt_pi * z * z)).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (nodes, weights) = pairs.into_iter().unzip();
        Ok(GaussHermite { nodes, weights })
    }

    /// Shared, lazily built rule of the given size.
    pub fn cached(n: usize) -> Result<Arc<GaussHermite>> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussHermite>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(rule) = cache.lock().expect("quadrature cache poisoned").get(&n) {
            return Ok(Arc::clone(rule));
        }
        let rule = Arc::new(GaussHermite::new(n)?);
        cache
            .lock()
            .expect("quadrature cache poisoned")
            .insert(n, Arc::clone(&rule));
        Ok(rule)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .filter(|(_, w)| **w > 0.0)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix.
/// `off[i]` couples `i` and `i + 1`; `first` is row 0 of the eigenvector matrix.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], first: &mut [f64]) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > 60 {
                return Err(Error::Inconsistent("QL iteration did not converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let z = first[i + 1];
                first[i + 1] = s * first[i] + c * z;
                first[i] = c * first[i] - s * z;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// `∫ f·g dx` for two Gaussian-damped quasi-Gaussians.
///
/// Starts from `nodes` points and doubles (capped at [`MAX_NODES`]) until two
/// successive estimates agree to 1e-12.
pub fn quadrature_inner_product(f: &QuasiGaussian, g: &QuasiGaussian, nodes: usize) -> Result<f64> {
    for q in [f, g] {
        if q.is_zero() {
            return Ok(0.0);
        }
        if q.sigma() != Sign::Minus {
            return Err(Error::domain("quadrature needs e^{-x²/2} damping on both factors"));
        }
        if q.pre().has_real_pole() {
            return Err(Error::domain(format!("prefactor {} has a real pole", q.pre())));
        }
    }
    let (hf, hg) = (f.prefactor_f64(), g.prefactor_f64());
    let integrand = |x: f64| hf(x) * hg(x);
    let mut n = nodes.clamp(1, MAX_NODES);
    let mut prev = GaussHermite::cached(n)?.integrate(integrand);
    while n < MAX_NODES {
        n = (2 * n).min(MAX_NODES);
        let cur = GaussHermite::cached(n)?.integrate(integrand);
        if (cur - prev).abs() <= CONVERGENCE_TOL * cur.abs().max(1.0) {
            return Ok(cur);
        }
        prev = cur;
    }
    Ok(prev)
}

/// Gram matrix of the first `count` normalized eigenstates of `H⁻`.
pub fn gram_matrix(m: usize, count: usize, exec: Execution) -> Result<Vec<Vec<f64>>> {
    let indices: Vec<i64> = minus_indices(m, count as i64).into_iter().take(count).collect();
    let states = indices
        .iter()
        .map(|&nu| {
            let q = eigenstate_prefactor(m, Side::Minus, nu)?;
            let n = norm_squared(m, Side::Minus, nu)?.to_f64();
            Ok((q, n))
        })
        .collect::<Result<Vec<_>>>()?;
    let pairs: Vec<(usize, usize)> = (0..count).flat_map(|i| (0..count).map(move |j| (i, j))).collect();
    let entries = exec.map(pairs, |(i, j)| {
        let (fi, ni) = &states[i];
        let (fj, nj) = &states[j];
        quadrature_inner_product(fi, fj, DEFAULT_NODES).map(|v| v / (ni * nj).sqrt())
    });
    let entries = entries.into_iter().collect::<Result<Vec<f64>>>()?;
    Ok(entries.chunks(count).map(<[f64]>::to_vec).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ExactPoly;

    #[test]
    fn low_order_moments() {
        let sqrt_pi = std::f64::consts::PI.sqrt();
        for n in [5, 20, 200, 2000] {
            let rule = GaussHermite::new(n).unwrap();
            assert!((rule.integrate(|_| 1.0) - sqrt_pi).abs() < 1e-12 * n as f64);
            assert!((rule.integrate(|x| x * x) - sqrt_pi / 2.0).abs() < 1e-12 * n as f64);
            assert!(rule.integrate(|x| x).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        // ∫ x^8 e^{-x²} = 105/16 √π, exact with 5 nodes
        let rule = GaussHermite::new(5).unwrap();
        let want = 105.0 / 16.0 * std::f64::consts::PI.sqrt();
        assert!((rule.integrate(|x| x.powi(8)) - want).abs() < 1e-12);
        let nodes = rule.nodes();
        assert!((nodes[0] + nodes[4]).abs() < 1e-14);
        assert!(nodes[2].abs() < 1e-14);
    }

    #[test]
    fn gaussian_self_product() {
        let g = QuasiGaussian::polynomial(ExactPoly::one(), Sign::Minus);
        let v = quadrature_inner_product(&g, &g, DEFAULT_NODES).unwrap();
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn ground_state_norm_and_orthogonality() {
        let g = eigenstate_prefactor(2, Side::Minus, -3).unwrap();
        let e0 = eigenstate_prefactor(2, Side::Minus, 0).unwrap();
        let v = quadrature_inner_product(&g, &g, DEFAULT_NODES).unwrap();
        let want = std::f64::consts::PI.sqrt() / 8.0;
        assert!((v - want).abs() < 1e-10 * want, "{v} vs {want}");
        assert!((v - 0.221_556_731_363_189_5).abs() < 1e-10);
        assert!(quadrature_inner_product(&g, &e0, DEFAULT_NODES).unwrap().abs() < 1e-10);
    }

    #[test]
    fn growing_factor_rejected() {
        let g = QuasiGaussian::polynomial(ExactPoly::one(), Sign::Plus);
        let h = QuasiGaussian::polynomial(ExactPoly::one(), Sign::Minus);
        assert!(matches!(quadrature_inner_product(&g, &h, 200), Err(Error::Domain(_))));
    }
}
