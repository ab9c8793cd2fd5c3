//! Supersymmetric partners of the oscillator and the auxiliary dressing chain
//! that links them through `m` first-order steps.
//!
//! Operators act on [`QuasiGaussian`]s in closed form, so every identity below
//! is checked exactly by applying both sides to a family of probe functions.

use num_rational::BigRational;
use num_traits::One;

use crate::error::{Result, VerificationReport};
use crate::exec::Execution;
use crate::poly::{int, pseudo_hermite, ExactPoly, RationalFunction};
use crate::wavefunction::{check_even_m, eigenstate_prefactor, minus_indices, QuasiGaussian, Side, Sign};

/// `ε d/dx + W(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstOrderOperator {
    pub label: String,
    pub eps: Sign,
    pub w: RationalFunction,
    /// Set for dressing-chain factors whose superpotential may have real poles.
    pub auxiliary: bool,
}

impl FirstOrderOperator {
    pub fn new(label: impl Into<String>, eps: Sign, w: RationalFunction, auxiliary: bool) -> Self {
        FirstOrderOperator {
            label: label.into(),
            eps,
            w,
            auxiliary,
        }
    }

    /// Formal adjoint `-ε d/dx + W`.
    pub fn adjoint(&self) -> Self {
        let label = match self.label.strip_suffix("^dag") {
            Some(base) => base.to_string(),
            None => format!("{}^dag", self.label),
        };
        FirstOrderOperator {
            label,
            eps: self.eps.flip(),
            w: self.w.clone(),
            auxiliary: self.auxiliary,
        }
    }

    pub fn apply(&self, f: &QuasiGaussian) -> QuasiGaussian {
        apply_operator(self, f)
    }
}

/// `(ε d/dx + W)(h e^{σx²/2}) = (ε h' + ε σ x h + W h) e^{σx²/2}`.
pub fn apply_operator(op: &FirstOrderOperator, f: &QuasiGaussian) -> QuasiGaussian {
    if f.is_zero() {
        return f.clone();
    }
    let (n, d) = (f.pre().num(), f.pre().den());
    let (p, r) = (op.w.num(), op.w.den());
    let eps = int(op.eps.value());
    let eps_sigma_x = ExactPoly::monomial(int(op.eps.value() * f.sigma().value()), 1);

    // over the common denominator d² r
    let dr = d * r;
    let deriv = (n.derivative() * d - n * d.derivative()) * r;
    let num = deriv.scale(&eps) + &eps_sigma_x * n * d * r + p * n * d;
    let pre = RationalFunction::new(num, d * &dr).expect("nonzero denominator");
    QuasiGaussian::new(pre, f.sigma())
}

/// Applies a product of operators written left to right, i.e. the last
/// factor acts first.
pub fn apply_product(factors: &[FirstOrderOperator], f: &QuasiGaussian) -> QuasiGaussian {
    factors.iter().rev().fold(f.clone(), |acc, op| op.apply(&acc))
}

/// `-d²/dx² + V(x) + shift`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HamiltonianSpec {
    pub potential: RationalFunction,
    pub shift: BigRational,
}

impl HamiltonianSpec {
    /// Same operator plus a constant.
    pub fn shifted(&self, c: &BigRational) -> Self {
        HamiltonianSpec {
            potential: self.potential.clone(),
            shift: &self.shift + c,
        }
    }

    pub fn apply(&self, f: &QuasiGaussian) -> QuasiGaussian {
        apply_hamiltonian(self, f)
    }
}

/// `H f = (-h'' - 2σx h' - σh - x²h + (V + shift) h) e^{σx²/2}`.
pub fn apply_hamiltonian(hspec: &HamiltonianSpec, f: &QuasiGaussian) -> QuasiGaussian {
    if f.is_zero() {
        return f.clone();
    }
    let sigma = f.sigma().value();
    let (n, d) = (f.pre().num(), f.pre().den());
    let (p, r) = (hspec.potential.num(), hspec.potential.den());
    let x = ExactPoly::x();
    let x2 = ExactPoly::monomial(BigRational::one(), 2);

    // h' = a / d², h'' = (a' d - 2 a d') / d³
    let a = n.derivative() * d - n * d.derivative();
    let second = a.derivative() * d - (&a * d.derivative()).scale(&int(2));
    let d2 = d * d;
    let shifted_v = p + r.scale(&hspec.shift);

    let num = -(&second * r)
        - (&x * &a * d * r).scale(&int(2 * sigma))
        - (n * &d2 * r).scale(&int(sigma))
        - &x2 * n * &d2 * r
        + shifted_v * n * &d2;
    let pre = RationalFunction::new(num, &d2 * d * r).expect("nonzero denominator");
    QuasiGaussian::new(pre, f.sigma())
}

fn ratio_of(num: &ExactPoly, den: &ExactPoly) -> RationalFunction {
    RationalFunction::new(num.clone(), den.clone()).expect("pseudo-Hermite polynomials are nonzero")
}

/// `𝓗'_k / 𝓗_k`.
fn log_derivative(k: usize) -> RationalFunction {
    let p = pseudo_hermite(k);
    ratio_of(&p.derivative(), &p)
}

/// `𝓗''_k/𝓗_k - (𝓗'_k/𝓗_k)²`.
fn log_second_derivative(k: usize) -> RationalFunction {
    log_derivative(k).derivative()
}

fn x_rf() -> RationalFunction {
    RationalFunction::from_poly(ExactPoly::x())
}

fn x2_rf() -> RationalFunction {
    RationalFunction::from_poly(ExactPoly::monomial(BigRational::one(), 2))
}

/// `W = -x - 𝓗'_m/𝓗_m`.
pub fn build_superpotential(m: usize) -> Result<RationalFunction> {
    check_even_m(m)?;
    Ok(-x_rf() - log_derivative(m))
}

/// Supercharges `(A, A†)`.
pub fn build_supercharges(m: usize) -> Result<(FirstOrderOperator, FirstOrderOperator)> {
    let a = FirstOrderOperator::new("A", Sign::Plus, build_superpotential(m)?, false);
    let a_dag = a.adjoint();
    Ok((a, a_dag))
}

/// The oscillator `H⁺ = -d² + x² + 2m + 1`.
pub fn build_oscillator(m: usize) -> Result<HamiltonianSpec> {
    check_even_m(m)?;
    Ok(HamiltonianSpec {
        potential: x2_rf(),
        shift: int(2 * m as i64 + 1),
    })
}

/// The rational extension `H⁻` with `V⁻ = x² - 2[𝓗''/𝓗 - (𝓗'/𝓗)² + 1]` and the
/// shift `2m + 1` that puts its ground level at zero.
pub fn build_partner_potential(m: usize) -> Result<HamiltonianSpec> {
    check_even_m(m)?;
    let bracket = log_second_derivative(m) + RationalFunction::one();
    Ok(HamiltonianSpec {
        potential: x2_rf() - bracket.scale(&int(2)),
        shift: int(2 * m as i64 + 1),
    })
}

/// `Ŵ_i = x + 𝓗'_{i-1}/𝓗_{i-1} - 𝓗'_i/𝓗_i`.
pub fn hat_superpotential(i: usize) -> RationalFunction {
    x_rf() + log_derivative(i - 1) - log_derivative(i)
}

/// `Â_1, …, Â_m`. Odd-index factors have a pole at the origin and are marked auxiliary.
pub fn build_hat_chain(m: usize) -> Result<Vec<FirstOrderOperator>> {
    check_even_m(m)?;
    Ok((1..=m)
        .map(|i| FirstOrderOperator::new(format!("A{i}"), Sign::Plus, hat_superpotential(i), i % 2 == 1))
        .collect())
}

/// `Ĥ_i = -d² + x² - 2[𝓗''_{i-1}/𝓗_{i-1} - (𝓗'_{i-1}/𝓗_{i-1})²] - 3`.
pub fn hat_hamiltonian(i: usize) -> HamiltonianSpec {
    HamiltonianSpec {
        potential: x2_rf() - log_second_derivative(i - 1).scale(&int(2)),
        shift: int(-3),
    }
}

/// Everything needed to go from `H⁺` to `H⁻` along both routes.
#[derive(Clone, Debug)]
pub struct DressingChain {
    pub m: usize,
    pub a: FirstOrderOperator,
    pub a_dag: FirstOrderOperator,
    pub h_plus: HamiltonianSpec,
    pub h_minus: HamiltonianSpec,
    /// `Â_1..Â_m`.
    pub hat: Vec<FirstOrderOperator>,
    /// `Ĥ_1..Ĥ_{m+1}`.
    pub hat_h: Vec<HamiltonianSpec>,
}

impl DressingChain {
    pub fn new(m: usize) -> Result<Self> {
        let (a, a_dag) = build_supercharges(m)?;
        Ok(DressingChain {
            m,
            a,
            a_dag,
            h_plus: build_oscillator(m)?,
            h_minus: build_partner_potential(m)?,
            hat: build_hat_chain(m)?,
            hat_h: (1..=m + 1).map(hat_hamiltonian).collect(),
        })
    }

    /// Probe functions `{1, x, x², x³}·e^{±x²/2}` plus the `H⁻` eigenstates with `ν ≤ 6`.
    pub fn probes(&self) -> Result<Vec<(String, QuasiGaussian)>> {
        let mut probes = Vec::new();
        for sigma in [Sign::Minus, Sign::Plus] {
            for k in 0..4 {
                let s = if sigma == Sign::Minus { '-' } else { '+' };
                probes.push((
                    format!("x^{k} exp({s}x^2/2)"),
                    QuasiGaussian::polynomial(ExactPoly::monomial(BigRational::one(), k), sigma),
                ));
            }
        }
        for nu in minus_indices(self.m, 6) {
            probes.push((format!("psi-_{nu}"), eigenstate_prefactor(self.m, Side::Minus, nu)?));
        }
        Ok(probes)
    }

    /// Exact check of every factorization and intertwining identity on the probes.
    pub fn verify(&self, exec: Execution) -> Result<VerificationReport> {
        let probes = self.probes()?;
        let per_probe = exec.map(probes, |(name, f)| self.verify_on(&name, &f));
        let mut report = VerificationReport::new(format!("dressing chain, m = {}", self.m));
        for r in per_probe {
            report.merge(r);
        }
        Ok(report)
    }

    fn verify_on(&self, probe: &str, f: &QuasiGaussian) -> VerificationReport {
        let m = self.m;
        let mut report = VerificationReport::new(probe);
        let mut check = |identity: &str, lhs: QuasiGaussian, rhs: QuasiGaussian| {
            let ok = lhs == rhs;
            report.record(ok, identity, probe, || format!("lhs = {lhs}, rhs = {rhs}"));
        };
        let two = int(2);

        for (i, hat) in self.hat.iter().enumerate() {
            let k = i + 1;
            let hat_dag = hat.adjoint();
            let af = hat.apply(f);
            let adf = hat_dag.apply(f);
            check(
                &format!("A{k}^dag A{k} = H{k}_hat"),
                hat_dag.apply(&af),
                self.hat_h[i].apply(f),
            );
            let lowered = hat.apply(&adf);
            check(
                &format!("A{k} A{k}^dag = H{}_hat + 2", k + 1),
                lowered.clone(),
                self.hat_h[i + 1].shifted(&two).apply(f),
            );
            if let Some(next) = self.hat.get(i + 1) {
                check(
                    &format!("A{k} A{k}^dag = A{}^dag A{} + 2", k + 1, k + 1),
                    lowered,
                    next.adjoint().apply(&next.apply(f)) + f.scale(&two),
                );
            }
            check(
                &format!("A{k} H{k}_hat = (H{}_hat + 2) A{k}", k + 1),
                hat.apply(&self.hat_h[i].apply(f)),
                self.hat_h[i + 1].shifted(&two).apply(&af),
            );
        }

        check(
            "H+ = H1_hat + 2m + 4",
            self.h_plus.apply(f),
            self.hat_h[0].shifted(&int(2 * m as i64 + 4)).apply(f),
        );
        check(
            &format!("H- = H{}_hat + 2m + 2", m + 1),
            self.h_minus.apply(f),
            self.hat_h[m].shifted(&int(2 * m as i64 + 2)).apply(f),
        );
        check("A^dag A = H+", self.a_dag.apply(&self.a.apply(f)), self.h_plus.apply(f));
        check(
            "A A^dag = H-",
            self.a.apply(&self.a_dag.apply(f)),
            self.h_minus.apply(f),
        );
        check(
            "A H+ = H- A",
            self.a.apply(&self.h_plus.apply(f)),
            self.h_minus.apply(&self.a.apply(f)),
        );
        check(
            "A^dag H- = H+ A^dag",
            self.a_dag.apply(&self.h_minus.apply(f)),
            self.h_plus.apply(&self.a_dag.apply(f)),
        );

        let lam = int(2 * m as i64 + 2);
        let down: Vec<FirstOrderOperator> = self.hat.iter().rev().cloned().collect();
        let up: Vec<FirstOrderOperator> = self.hat.iter().map(FirstOrderOperator::adjoint).collect();
        check(
            "A_m...A_1 H+ = (H- + 2m + 2) A_m...A_1",
            apply_product(&down, &self.h_plus.apply(f)),
            self.h_minus.shifted(&lam).apply(&apply_product(&down, f)),
        );
        check(
            "H+ A_1^dag...A_m^dag = A_1^dag...A_m^dag (H- + 2m + 2)",
            self.h_plus.apply(&apply_product(&up, f)),
            apply_product(&up, &self.h_minus.shifted(&lam).apply(f)),
        );

        let dv = &self.h_plus.potential - &self.h_minus.potential;
        let diff = self
            .h_plus
            .apply(f)
            .checked_sub(&self.h_minus.apply(f))
            .expect("same Gaussian sign");
        check("H+ - H- = V+ - V-", diff, QuasiGaussian::new(f.pre() * &dv, f.sigma()));
        report
    }
}

/// Builds the chain for `m` and checks all of its identities.
pub fn verify_chain_identities(m: usize) -> Result<VerificationReport> {
    DressingChain::new(m)?.verify(Execution::default())
}
