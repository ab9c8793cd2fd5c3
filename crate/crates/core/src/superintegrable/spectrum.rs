//! Level-by-level merge of the unirreps, the direct-sum oracle, table rows,
//! and the exact scalar action of the integrals `I±` on product states.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::closed_form::{enumerate_unirreps, Unirrep};
use super::{degeneracy_formula, structure_function, Axis, Case, SystemSpec};
use crate::error::{Error, Result, VerificationFailure, VerificationReport};
use crate::exec::Execution;
use crate::ladder::ladder_table;
use crate::poly::{hermite, int, ExactPoly};
use crate::susy::FirstOrderOperator;
use crate::wavefunction::{norm_squared, QuasiGaussian, Side, Sign};

/// Multiset of `p` values, `p → occurrences`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PMultiset(pub BTreeMap<usize, usize>);

impl PMultiset {
    pub fn insert(&mut self, p: usize) {
        *self.0.entry(p).or_default() += 1;
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    fn from_pairs(pairs: &[(i64, i64)]) -> Self {
        let mut m = BTreeMap::new();
        for &(p, c) in pairs {
            if c > 0 {
                *m.entry(p as usize).or_default() += c as usize;
            }
        }
        PMultiset(m)
    }
}

/// Largest `p` first, exponents in caret notation: `2,1^2`.
impl fmt::Display for PMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .rev()
            .map(|(p, c)| if *c == 1 { p.to_string() } else { format!("{p}^{c}") })
            .collect();
        f.write_str(&parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Level {
    pub n: i64,
    pub energy: i64,
    pub degeneracy: u64,
    pub oracle_degeneracy: u64,
    pub formula_degeneracy: u64,
    pub unirreps: Vec<String>,
    pub p_multiset: PMultiset,
}

impl Level {
    pub fn n_unirreps(&self) -> usize {
        self.unirreps.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub system: SystemSpec,
    pub n_max: i64,
    pub p_max: usize,
    pub levels: Vec<Level>,
    pub unirreps: Vec<Unirrep>,
    pub failures: Vec<VerificationFailure>,
}

impl SpectrumReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn level(&self, n: i64) -> Option<&Level> {
        self.levels.iter().find(|l| l.n == n)
    }
}

/// Degeneracy of every level `N ≤ n_max` by direct enumeration of product states.
pub fn brute_force_spectrum(sys: &SystemSpec, n_max: i64) -> BTreeMap<i64, u64> {
    let xs = axis_indices(&sys.x_axis, n_max - sys.y_axis.lowest_index() - 1);
    let ys = axis_indices(&sys.y_axis, n_max - sys.x_axis.lowest_index() - 1);
    let mut out = BTreeMap::new();
    for &nx in &xs {
        for &ny in &ys {
            let n = nx + ny + 1;
            if n <= n_max {
                *out.entry(n).or_default() += 1;
            }
        }
    }
    out
}

fn axis_indices(axis: &Axis, nu_max: i64) -> Vec<i64> {
    let low = axis.lowest_index();
    std::iter::once(low)
        .chain(0..=nu_max)
        .filter(|&nu| nu <= nu_max)
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// Merges the closed-form unirreps by level and checks every level against
/// the oracle and the closed-form degeneracy.
pub fn spectrum_report(sys: &SystemSpec, n_max: i64, p_max: Option<usize>, exec: Execution) -> Result<SpectrumReport> {
    let p_max = p_max.unwrap_or_else(|| sys.default_p_max(n_max));
    let unirreps: Vec<Unirrep> = enumerate_unirreps(sys, p_max, exec)?
        .into_iter()
        .filter(|u| u.n() <= n_max)
        .collect();
    let oracle = brute_force_spectrum(sys, n_max);

    let mut by_level: BTreeMap<i64, Vec<&Unirrep>> = BTreeMap::new();
    for u in &unirreps {
        by_level.entry(u.n()).or_default().push(u);
    }
    let ns: std::collections::BTreeSet<i64> = by_level.keys().chain(oracle.keys()).copied().collect();

    let mut report = VerificationReport::new(sys.label());
    let mut levels = Vec::new();
    for n in ns {
        let members = by_level.get(&n).map(Vec::as_slice).unwrap_or_default();
        let mut p_multiset = PMultiset::default();
        for u in members {
            p_multiset.insert(u.p);
        }
        let degeneracy = members.iter().map(|u| u.dimension as u64).sum();
        let oracle_degeneracy = oracle.get(&n).copied().unwrap_or(0);
        let formula_degeneracy = degeneracy_formula(sys, n).unwrap_or(0);
        let subject = format!("N = {n}");
        report.record(
            degeneracy == oracle_degeneracy,
            "unirrep degeneracy = direct count",
            &subject,
            || format!("unirreps give {degeneracy}, direct count {oracle_degeneracy}"),
        );
        report.record(
            formula_degeneracy == oracle_degeneracy,
            "closed-form degeneracy = direct count",
            &subject,
            || format!("formula gives {formula_degeneracy}, direct count {oracle_degeneracy}"),
        );
        levels.push(Level {
            n,
            energy: 2 * n,
            degeneracy,
            oracle_degeneracy,
            formula_degeneracy,
            unirreps: members.iter().map(|u| u.id()).collect(),
            p_multiset,
        });
    }
    Ok(SpectrumReport {
        system: sys.clone(),
        n_max,
        p_max,
        levels,
        unirreps,
        failures: report.failures,
    })
}

/// One row of the per-level table, keyed by the decomposition of `N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: i64,
    pub lambda: i64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rho: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sigma: Option<i64>,
    pub mu: i64,
    pub p: PMultiset,
    pub n_unirreps: usize,
    pub degeneracy: u64,
}

/// `N = (m+1)λ + μ` in case 1; `N = Mλ + μ`, `μ = (m1+1)ρ + σ` with
/// `M = (m1+1)(m2+1)` in case 2.
pub fn decompose(sys: &SystemSpec, n: i64) -> (i64, Option<i64>, Option<i64>, i64) {
    let a = sys.m1 as i64 + 1;
    match sys.m2 {
        None => (n.div_euclid(a), None, None, n.rem_euclid(a)),
        Some(m2) => {
            let big = a * (m2 as i64 + 1);
            let mu = n.rem_euclid(big);
            (n.div_euclid(big), Some(mu / a), Some(mu % a), mu)
        }
    }
}

pub fn table_rows(report: &SpectrumReport) -> Vec<TableRow> {
    report
        .levels
        .iter()
        .filter(|l| l.degeneracy > 0 || l.oracle_degeneracy > 0)
        .map(|l| {
            let (lambda, rho, sigma, mu) = decompose(&report.system, l.n);
            TableRow {
                n: l.n,
                lambda,
                rho,
                sigma,
                mu,
                p: l.p_multiset.clone(),
                n_unirreps: l.n_unirreps(),
                degeneracy: l.degeneracy,
            }
        })
        .collect()
}

/// Closed-form table entry `(p multiset, number of unirreps, degeneracy)`.
/// Known for case 1 and for case 2 with `m1 = m2`; `None` otherwise or when
/// `N` is not a level.
pub fn expected_table_row(sys: &SystemSpec, n: i64) -> Option<(PMultiset, usize, u64)> {
    let deg = degeneracy_formula(sys, n).ok().filter(|&d| d > 0)?;
    let m = sys.m1 as i64;
    let (lam, rho, sigma, mu) = decompose(sys, n);
    let ps = match sys.case {
        Case::OscillatorPair => match (lam, mu) {
            (-1, _) => PMultiset::from_pairs(&[(0, 1)]),
            (0, 0) => PMultiset::from_pairs(&[(0, 1)]),
            (0, _) => PMultiset::from_pairs(&[(1, 1), (0, mu - 1)]),
            (_, 0) => PMultiset::from_pairs(&[(lam, 1), (lam - 1, m)]),
            _ => PMultiset::from_pairs(&[(lam + 1, 1), (lam, mu - 1), (lam - 1, m - mu + 1)]),
        },
        Case::ExtendedPair => {
            if sys.m2 != Some(sys.m1) {
                return None;
            }
            let (rho, sigma) = (rho?, sigma?);
            let big = (m + 1) * (m + 1);
            let edge = rho == m - 1 && sigma == 1;
            let top = rho == m && sigma >= 1;
            match lam {
                -1 if edge => PMultiset::from_pairs(&[(0, 1)]),
                -1 if top => PMultiset::from_pairs(&[(0, 2)]),
                -1 => return None,
                0 if top => PMultiset::from_pairs(&[(1, 2), (0, mu - 2)]),
                0 if edge => PMultiset::from_pairs(&[(1, 1), (0, mu)]),
                0 => PMultiset::from_pairs(&[(0, mu + 2)]),
                _ if edge => PMultiset::from_pairs(&[(lam + 1, 1), (lam, mu), (lam - 1, big - mu - 1)]),
                _ if top => PMultiset::from_pairs(&[(lam + 1, 2), (lam, mu - 2), (lam - 1, big - mu)]),
                _ => PMultiset::from_pairs(&[(lam, mu + 2), (lam - 1, big - mu - 2)]),
            }
        }
    };
    let count = ps.total();
    Some((ps, count, deg))
}

/// Squared ladder coefficients of one axis, in units of normalized states.
struct AxisLadder {
    axis: Axis,
    /// `raise[ν]`: `‖a† ψ_ν‖²`.
    raise: HashMap<i64, BigRational>,
}

impl AxisLadder {
    fn new(axis: &Axis, nu_max: i64, exec: Execution) -> Result<Self> {
        let raise = match axis {
            Axis::Extended { m } => ladder_table(*m, nu_max, exec)?
                .into_iter()
                .map(|c| (c.nu, c.squared))
                .collect(),
            Axis::Oscillator => oscillator_raising_table(nu_max, exec)?,
        };
        Ok(AxisLadder {
            axis: axis.clone(),
            raise,
        })
    }

    fn valid(&self, nu: i64) -> bool {
        nu >= 0 || nu == self.axis.lowest_index()
    }

    /// `(ν', ‖a† ψ_ν‖²)`.
    fn up(&self, nu: i64) -> Result<(i64, BigRational)> {
        let c = self
            .raise
            .get(&nu)
            .ok_or_else(|| Error::Inconsistent(format!("no raising coefficient for nu = {nu}")))?;
        Ok((nu + self.axis.step(), c.clone()))
    }

    /// `(ν', ‖a ψ_ν‖²)`, zero in the kernel.
    fn down(&self, nu: i64) -> Result<(i64, BigRational)> {
        let below = nu - self.axis.step();
        if !self.valid(below) {
            return Ok((below, BigRational::zero()));
        }
        let (_, c) = self.up(below)?;
        Ok((below, c))
    }
}

/// `‖a† ψ_ν‖²` for the plain oscillator with `a† = -d/dx + x`, computed from
/// the action on `H_ν e^{-x²/2}`.
fn oscillator_raising_table(nu_max: i64, exec: Execution) -> Result<HashMap<i64, BigRational>> {
    let op = FirstOrderOperator::new("a^dag", Sign::Minus, ExactPoly::x().into(), false);
    let rows = exec.map((0..=nu_max).collect(), |nu: i64| {
        let f = QuasiGaussian::polynomial(hermite(nu as usize), Sign::Minus);
        let g = QuasiGaussian::polynomial(hermite(nu as usize + 1), Sign::Minus);
        let c = op
            .apply(&f)
            .ratio_to(&g)
            .ok_or_else(|| Error::Inconsistent(format!("a^dag H_{nu} is not proportional to H_{}", nu + 1)))?;
        // the oscillator side of any extended system carries the same norms
        let ratio = norm_squared(2, Side::Plus, nu + 1)?.ratio(&norm_squared(2, Side::Plus, nu)?)?;
        Ok((nu, &c * &c * ratio))
    });
    rows.into_iter().collect()
}

/// Checks `‖I₋ψ‖² = Φ(E, K, 0)` and `‖I₊ψ‖² = Φ(E, K+1, 0)` on every product
/// state with `N ≤ n_max`, where `I₋ = a_x^{n1} a_y^{†n2}`, `I₊` its adjoint,
/// and `K = (E_x - E_y)/(2λ)`. The ladder coefficients are taken from the
/// exact action of the one-dimensional ladder operators.
pub fn verify_integral_action(sys: &SystemSpec, n_max: i64, exec: Execution) -> Result<VerificationReport> {
    let xs = axis_indices(&sys.x_axis, n_max - sys.y_axis.lowest_index() - 1);
    let ys = axis_indices(&sys.y_axis, n_max - sys.x_axis.lowest_index() - 1);
    let reach = |axis: &Axis, idx: &[i64], k: usize| idx.last().copied().unwrap_or(0) + axis.step() * k as i64;
    let lx = AxisLadder::new(&sys.x_axis, reach(&sys.x_axis, &xs, sys.n1), exec)?;
    let ly = AxisLadder::new(&sys.y_axis, reach(&sys.y_axis, &ys, sys.n2), exec)?;

    let states: Vec<(i64, i64)> = xs
        .iter()
        .flat_map(|&nx| ys.iter().map(move |&ny| (nx, ny)))
        .filter(|(nx, ny)| nx + ny < n_max)
        .collect();
    let lam = int(sys.lambda);
    let results = exec.map(states, |(nx, ny)| -> Result<VerificationReport> {
        let subject = format!("(nu_x, nu_y) = ({nx}, {ny})");
        let mut report = VerificationReport::new(&subject);
        let (ex, ey) = (int(2 * nx + 1), int(2 * ny + 1));
        let e = &ex + &ey;
        let k = (&ex - &ey) / (int(2) * &lam);

        let mut minus = BigRational::from_integer(1.into());
        let (mut x, mut y) = (nx, ny);
        for _ in 0..sys.n2 {
            let (ny2, c) = ly.up(y)?;
            minus *= c;
            y = ny2;
        }
        for _ in 0..sys.n1 {
            if minus.is_zero() {
                break;
            }
            let (nx2, c) = lx.down(x)?;
            minus *= c;
            x = nx2;
        }
        let phi = structure_function(sys, &e, &k, &BigRational::zero());
        report.record(minus == phi, "|I- psi|^2 = Phi(E, K, 0)", &subject, || {
            format!("{minus} vs {phi}")
        });

        let mut plus = BigRational::from_integer(1.into());
        let (mut x, mut y) = (nx, ny);
        for _ in 0..sys.n2 {
            let (ny2, c) = ly.down(y)?;
            plus *= c;
            y = ny2;
            if plus.is_zero() {
                break;
            }
        }
        if !plus.is_zero() {
            for _ in 0..sys.n1 {
                let (nx2, c) = lx.up(x)?;
                plus *= c;
                x = nx2;
            }
        }
        let phi1 = structure_function(sys, &e, &(&k + int(1)), &BigRational::zero());
        report.record(plus == phi1, "|I+ psi|^2 = Phi(E, K + 1, 0)", &subject, || {
            format!("{plus} vs {phi1}")
        });
        Ok(report)
    });
    let mut report = VerificationReport::new(format!("integrals of motion, {}", sys.label()));
    for r in results {
        report.merge(r?);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superintegrable::{build_case1, build_case2};

    #[test]
    fn oracle_sequence_case1() {
        let sys = build_case1(2).unwrap();
        let o = brute_force_spectrum(&sys, 5);
        let seq: Vec<(i64, u64)> = o.into_iter().collect();
        assert_eq!(
            seq,
            vec![(-2, 1), (-1, 1), (0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6)]
        );
    }

    #[test]
    fn oracle_case2() {
        let sys = build_case2(2, 2).unwrap();
        let o = brute_force_spectrum(&sys, 4);
        assert_eq!(o[&-5], 1);
        assert!(!o.contains_key(&-4) && !o.contains_key(&-3));
        assert_eq!((o[&-2], o[&-1], o[&0], o[&4]), (2, 2, 2, 6));
    }

    #[test]
    fn report_case1_m2() {
        let sys = build_case1(2).unwrap();
        let r = spectrum_report(&sys, 10, None, Execution::Parallel).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        let l = r.level(-1).unwrap();
        assert_eq!((l.n_unirreps(), l.degeneracy), (1, 1));
        // N = 3 = (m+1)·1 + 0: p = {1, 0^2}
        let l = r.level(3).unwrap();
        assert_eq!(l.p_multiset.to_string(), "1,0^2");
        assert_eq!(l.n_unirreps(), 3);
        assert_eq!(l.degeneracy, 4);
    }

    #[test]
    fn report_case2_bottom() {
        let sys = build_case2(2, 2).unwrap();
        let r = spectrum_report(&sys, 10, None, Execution::Parallel).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        let l = r.level(-2).unwrap();
        assert_eq!(
            (l.p_multiset.to_string().as_str(), l.n_unirreps(), l.degeneracy),
            ("0^2", 2, 2)
        );
        assert_eq!(r.level(-5).unwrap().degeneracy, 1);
    }

    #[test]
    fn tables_match_closed_forms() {
        for sys in [
            build_case1(2).unwrap(),
            build_case1(4).unwrap(),
            build_case2(2, 2).unwrap(),
        ] {
            let r = spectrum_report(&sys, 30, None, Execution::Parallel).unwrap();
            for row in table_rows(&r) {
                let (ps, count, deg) = expected_table_row(&sys, row.n).unwrap();
                assert_eq!(
                    (&row.p, row.n_unirreps, row.degeneracy),
                    (&ps, count, deg),
                    "N = {}",
                    row.n
                );
            }
        }
    }

    #[test]
    fn decomposition() {
        let s = build_case2(2, 2).unwrap();
        assert_eq!(decompose(&s, -5), (-1, Some(1), Some(1), 4));
        let s = build_case1(2).unwrap();
        assert_eq!(decompose(&s, -2), (-1, None, None, 1));
    }

    #[test]
    fn integrals_act_through_structure_function() {
        let r = verify_integral_action(&build_case1(2).unwrap(), 12, Execution::Parallel).unwrap();
        assert!(r.passed(), "{:?}", r.failures.first());
        let r = verify_integral_action(&build_case2(2, 2).unwrap(), 8, Execution::Parallel).unwrap();
        assert!(r.passed(), "{:?}", r.failures.first());
    }
}
