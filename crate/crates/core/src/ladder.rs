//! The `(m+1)`th-order ladder operators of the rationally extended
//! oscillator and the polynomial Heisenberg algebra they generate with `H⁻`.
//!
//! `c† = A Â_1† ⋯ Â_m†` raises the energy by `λ = 2m + 2`, `c` is its adjoint,
//! and `c†c = Q(H⁻)` with `Q(H) = H ∏ (H - 2m - 2 - 2i)`.

use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result, VerificationReport};
use crate::exec::Execution;
use crate::poly::{int, ExactPoly, RationalFunction};
use crate::susy::{
    build_hat_chain, build_partner_potential, build_supercharges, DressingChain, FirstOrderOperator, HamiltonianSpec,
};
use crate::wavefunction::{
    check_even_m, eigenstate_prefactor, energy, minus_indices, norm_squared, QuasiGaussian, Side, Sign,
};

/// Product of first-order factors written left to right; the last one acts first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorChain {
    pub label: String,
    pub factors: Vec<FirstOrderOperator>,
    /// `[H, chain] = shift · chain`.
    pub shift: BigRational,
}

impl OperatorChain {
    pub fn order(&self) -> usize {
        self.factors.len()
    }

    pub fn adjoint(&self) -> Self {
        let label = match self.label.strip_suffix("^dag") {
            Some(base) => base.to_string(),
            None => format!("{}^dag", self.label),
        };
        OperatorChain {
            label,
            factors: self.factors.iter().rev().map(FirstOrderOperator::adjoint).collect(),
            shift: -&self.shift,
        }
    }

    pub fn apply(&self, f: &QuasiGaussian) -> QuasiGaussian {
        crate::susy::apply_product(&self.factors, f)
    }

    /// Product as a string, e.g. `A A1^dag A2^dag`.
    pub fn describe(&self) -> String {
        self.factors
            .iter()
            .map(|f| f.label.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// `(c†, c)`.
pub fn build_ladder(m: usize) -> Result<(OperatorChain, OperatorChain)> {
    let (a, _) = build_supercharges(m)?;
    let hat = build_hat_chain(m)?;
    let mut factors = vec![a];
    factors.extend(hat.iter().map(FirstOrderOperator::adjoint));
    let up = OperatorChain {
        label: "c^dag".into(),
        factors,
        shift: int(2 * m as i64 + 2),
    };
    let down = up.adjoint();
    Ok((up, down))
}

/// The polynomial `Q` of `c†c = Q(H)` together with the step `λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaSpec {
    pub m: usize,
    pub q: ExactPoly,
    pub lambda: BigRational,
}

impl PhaSpec {
    pub fn eval(&self, e: &BigRational) -> BigRational {
        self.q.eval(e)
    }

    /// `Q(E + λ) - Q(E)`, the eigenvalue of `[c, c†]`.
    pub fn commutator_at(&self, e: &BigRational) -> BigRational {
        self.eval(&(e + &self.lambda)) - self.eval(e)
    }
}

/// `Q(H) = H ∏_{i=1}^m (H - 2m - 2 - 2i)`.
pub fn pha_q(m: usize) -> Result<PhaSpec> {
    check_even_m(m)?;
    let m_i = m as i64;
    let roots: Vec<BigRational> = std::iter::once(int(0))
        .chain((1..=m_i).map(|i| int(2 * m_i + 2 + 2 * i)))
        .collect();
    Ok(PhaSpec {
        m,
        q: ExactPoly::from_roots(&roots),
        lambda: int(2 * m_i + 2),
    })
}

/// `p(H) f` by Horner's rule on the operator.
pub fn apply_polynomial(p: &ExactPoly, h: &HamiltonianSpec, f: &QuasiGaussian) -> QuasiGaussian {
    let mut acc = QuasiGaussian::new(RationalFunction::zero(), f.sigma());
    for c in p.coeffs().iter().rev() {
        acc = h.apply(&acc) + f.scale(c);
    }
    acc
}

/// `c†ψ_ν = C_ν ψ_{ν+m+1}` for normalized states, stored as `C_ν²` and the sign of `C_ν`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LadderCoefficient {
    pub m: usize,
    pub nu: i64,
    pub target: i64,
    /// `c̃` in `c†ψ̃_ν = c̃ ψ̃_{ν+m+1}` for the unnormalized prefactors.
    #[serde(serialize_with = "crate::serde_exact::rational")]
    pub proportionality: BigRational,
    #[serde(serialize_with = "crate::serde_exact::rational")]
    pub squared: BigRational,
    pub sign: Sign,
}

pub fn ladder_coefficient_squared(m: usize, nu: i64) -> Result<LadderCoefficient> {
    let (up, _) = build_ladder(m)?;
    ladder_coefficient_with(&up, m, nu)
}

fn ladder_coefficient_with(up: &OperatorChain, m: usize, nu: i64) -> Result<LadderCoefficient> {
    let psi = eigenstate_prefactor(m, Side::Minus, nu)?;
    let target = nu + m as i64 + 1;
    let image = up.apply(&psi);
    let goal = eigenstate_prefactor(m, Side::Minus, target)?;
    let c = image.ratio_to(&goal).ok_or_else(|| {
        Error::Inconsistent(format!(
            "c^dag psi_{nu} = {image} is not proportional to psi_{target} = {goal}"
        ))
    })?;
    let ratio = norm_squared(m, Side::Minus, target)?.ratio(&norm_squared(m, Side::Minus, nu)?)?;
    let squared = &c * &c * ratio;
    let sign = if c.is_negative() { Sign::Minus } else { Sign::Plus };
    Ok(LadderCoefficient {
        m,
        nu,
        target,
        proportionality: c,
        squared,
        sign,
    })
}

/// Coefficients for every `ν ≤ nu_max`.
pub fn ladder_table(m: usize, nu_max: i64, exec: Execution) -> Result<Vec<LadderCoefficient>> {
    let (up, _) = build_ladder(m)?;
    exec.map(minus_indices(m, nu_max), |nu| ladder_coefficient_with(&up, m, nu))
        .into_iter()
        .collect()
}

/// True when `c ψ_ν = 0`.
pub fn kernel_check(m: usize, nu: i64) -> Result<bool> {
    let (_, down) = build_ladder(m)?;
    Ok(down.apply(&eigenstate_prefactor(m, Side::Minus, nu)?).is_zero())
}

/// Exact check of the algebra on every eigenstate with `ν ≤ nu_max`, plus the
/// operator identities on the generic probe family.
pub fn verify_pha(m: usize, nu_max: i64, exec: Execution) -> Result<VerificationReport> {
    if nu_max < m as i64 + 1 {
        return Err(Error::domain(format!("nu_max must be at least m + 1 = {}", m + 1)));
    }
    let (up, down) = build_ladder(m)?;
    let pha = pha_q(m)?;
    let h = build_partner_potential(m)?;
    let mut subjects: Vec<(String, QuasiGaussian, Option<i64>)> = minus_indices(m, nu_max)
        .into_iter()
        .map(|nu| {
            Ok((
                format!("psi-_{nu}"),
                eigenstate_prefactor(m, Side::Minus, nu)?,
                Some(nu),
            ))
        })
        .collect::<Result<_>>()?;
    let chain = DressingChain::new(m)?;
    for (name, f) in chain.probes()?.into_iter().filter(|(n, _)| !n.starts_with("psi")) {
        subjects.push((name, f, None));
    }

    let results = exec.map(subjects, |(name, f, nu)| {
        let mut report = VerificationReport::new(&name);
        let mut check = |identity: &str, lhs: QuasiGaussian, rhs: QuasiGaussian| {
            let ok = lhs == rhs;
            report.record(ok, identity, &name, || format!("lhs = {lhs}, rhs = {rhs}"));
        };
        let hf = h.apply(&f);
        let uf = up.apply(&f);
        let df = down.apply(&f);
        let lam = &pha.lambda;
        check(
            "[H, c^dag] = (2m+2) c^dag",
            h.apply(&uf).checked_sub(&up.apply(&hf)).expect("same exponent"),
            uf.scale(lam),
        );
        check(
            "[H, c] = -(2m+2) c",
            h.apply(&df).checked_sub(&down.apply(&hf)).expect("same exponent"),
            df.scale(&-lam),
        );
        let ud = up.apply(&df);
        let du = down.apply(&uf);
        let shifted = h.shifted(lam);
        check("c^dag c = Q(H)", ud.clone(), apply_polynomial(&pha.q, &h, &f));
        check(
            "c c^dag = Q(H + 2m + 2)",
            du.clone(),
            apply_polynomial(&pha.q, &shifted, &f),
        );
        if let Some(nu) = nu {
            let e = energy(m, Side::Minus, nu).expect("valid index");
            check("H psi = E psi", hf.clone(), f.scale(&e));
            check("c^dag c psi = Q(E) psi", ud.clone(), f.scale(&pha.eval(&e)));
            check(
                "c c^dag psi = Q(E + 2m + 2) psi",
                du.clone(),
                f.scale(&pha.eval(&(&e + lam))),
            );
            check(
                "[c, c^dag] psi = (Q(E + 2m + 2) - Q(E)) psi",
                du.checked_sub(&ud).expect("same exponent"),
                f.scale(&pha.commutator_at(&e)),
            );
            match ladder_coefficient_with(&up, m, nu) {
                Ok(coef) => {
                    let ok = coef.squared == pha.eval(&(&e + lam));
                    report.record(ok, "C_nu^2 = Q(E + 2m + 2)", &name, || {
                        format!("C^2 = {}, Q = {}", coef.squared, pha.eval(&(&e + lam)))
                    });
                }
                Err(err) => report.record(false, "c^dag psi_nu ∝ psi_{nu+m+1}", &name, || err.to_string()),
            }
        }
        report
    });

    let mut report = VerificationReport::new(format!("polynomial Heisenberg algebra, m = {m}"));
    for r in results {
        report.merge(r);
    }
    Ok(report)
}

/// The `m + 1` chains `{i + (m+1) j}` for `i ∈ {-m-1, 1, …, m}`, truncated at `nu_max`.
pub fn unirrep_partition(m: usize, nu_max: i64) -> Result<Vec<Vec<i64>>> {
    check_even_m(m)?;
    let step = m as i64 + 1;
    let starts = std::iter::once(-step).chain(1..=m as i64);
    Ok(starts
        .map(|i| (0..).map(|j| i + step * j).take_while(|&nu| nu <= nu_max).collect())
        .collect())
}

/// The default verification depth `3(m + 1)`.
pub fn default_nu_max(m: usize) -> i64 {
    3 * (m as i64 + 1)
}
