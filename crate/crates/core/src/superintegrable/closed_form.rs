//! Closed-form unirrep families and their structure functions.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{Case, SystemSpec};
use crate::error::{Error, Result, VerificationReport};
use crate::exec::Execution;
use crate::poly::int;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    E1,
    E2,
    E11,
    E12,
    E21,
    E22,
}

impl Family {
    /// Parameter names in display order.
    pub fn params(self) -> &'static [&'static str] {
        match self {
            Family::E1 => &["p", "k"],
            Family::E2 => &["p", "k", "l"],
            Family::E11 => &["p", "q", "s"],
            Family::E12 => &["p", "q", "s", "t"],
            Family::E21 => &["p", "q", "r", "s"],
            Family::E22 => &["p", "q", "r", "s", "t"],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A `(p+1)`-dimensional unirrep of the 2D polynomial algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Unirrep {
    pub family: Family,
    pub params: BTreeMap<String, i64>,
    pub energy: i64,
    #[serde(
        serialize_with = "crate::serde_exact::rational",
        deserialize_with = "crate::serde_exact::de_rational"
    )]
    pub u: BigRational,
    pub p: usize,
    pub dimension: usize,
    /// `Φ(E, u, n)` for `n = 0..=p+1`.
    #[serde(
        serialize_with = "crate::serde_exact::rationals",
        deserialize_with = "crate::serde_exact::de_rationals"
    )]
    pub structure_values: Vec<BigRational>,
}

impl Unirrep {
    pub fn n(&self) -> i64 {
        self.energy / 2
    }

    /// `E12(p=0,q=1,s=2,t=1)`.
    pub fn id(&self) -> String {
        let parts: Vec<String> = self
            .family
            .params()
            .iter()
            .map(|k| format!("{k}={}", self.params[*k]))
            .collect();
        format!("{}({})", self.family, parts.join(","))
    }

    fn sort_key(&self) -> (Family, Vec<i64>) {
        (
            self.family,
            self.family.params().iter().map(|k| self.params[*k]).collect(),
        )
    }

    /// `Φ(E,u,0) = Φ(E,u,p+1) = 0` and `Φ(E,u,n) > 0` for `1 ≤ n ≤ p`.
    pub fn satisfies_constraints(&self) -> bool {
        let v = &self.structure_values;
        v.len() == self.p + 2
            && v[0].is_zero()
            && v[self.p + 1].is_zero()
            && v[1..=self.p].iter().all(Signed::is_positive)
    }
}

pub(crate) fn sort_unirreps(v: &mut [Unirrep]) {
    v.sort_by_cached_key(Unirrep::sort_key);
}

fn product<T: Into<BigInt>>(factors: impl IntoIterator<Item = T>) -> BigInt {
    factors.into_iter().fold(BigInt::one(), |acc, f| acc * f.into())
}

struct Candidate {
    family: Family,
    params: Vec<i64>,
    energy: i64,
    u: BigRational,
    phi: Box<dyn Fn(i64) -> BigInt>,
}

fn case1_candidates(m: i64, p: i64) -> Vec<Candidate> {
    let lam = 2 * m + 2;
    let pref = BigInt::from(4).pow((m + 1) as u32);
    let mut out = Vec::new();
    for k in 1..=m + 1 {
        let tail = move |x: i64| product((1..=m + 1).map(|j| (m + 1) * (p + 1 - x) + j - k));
        let e = 2 * ((m + 1) * p + 1 - k);
        let pre = pref.clone();
        out.push(Candidate {
            family: Family::E1,
            params: vec![p, k],
            energy: e,
            u: (int(-e) / int(2) - int(2 * m + 1)) / int(lam),
            phi: Box::new(move |x| &pre * (m + 1) * x * product((1..=m).map(|i| (m + 1) * x - m - 1 - i)) * tail(x)),
        });
        for l in 1..=m {
            let e = 2 * ((m + 1) * (p + 1) + l - k + 1);
            let pre = pref.clone();
            out.push(Candidate {
                family: Family::E2,
                params: vec![p, k, l],
                energy: e,
                u: (int(-e) / int(2) + int(2 * l + 1)) / int(lam),
                phi: Box::new(move |x| {
                    &pre * ((m + 1) * x + m + 1 + l) * product((1..=m).map(|i| (m + 1) * x + l - i)) * tail(x)
                }),
            });
        }
    }
    out
}

fn case2_candidates(m1: i64, m2: i64, p: i64) -> Vec<Candidate> {
    let (a, b) = (m1 + 1, m2 + 1);
    let mm = a * b;
    let lam = 2 * mm;
    let pref = BigInt::from(4).pow(mm as u32);
    let mut out = Vec::new();
    for q in 1..=b {
        for s in 1..=a {
            let base = mm * (p + 2) - a * q - b * s;
            // left factors: index by r (None for the u1 family)
            let left = move |x: i64, r: Option<i64>| match r {
                None => product((1..=b).map(|i| {
                    let inner = product((1..=m1).map(|k| mm * x + a * (i - q - 1) - k));
                    BigInt::from(a * (b * x - q + i)) * inner
                })),
                Some(r) => product((1..=b).map(|i| {
                    let inner = product((1..=m1).map(|k| mm * x + a * (i - q) + r - k));
                    BigInt::from(mm * x + a * (i - q + 1) + r) * inner
                })),
            };
            let right = move |x: i64, t: Option<i64>| match t {
                None => product((1..=a).map(|j| {
                    let inner = product((1..=m2).map(|l| mm * (p + 1 - x) + b * (j - s - 1) - l));
                    BigInt::from(b * (a * (p + 1 - x) + j - s)) * inner
                })),
                Some(t) => product((1..=a).map(|j| {
                    let inner = product((1..=m2).map(|l| mm * (p + 1 - x) + b * (j - s) + t - l));
                    BigInt::from(mm * (p + 1 - x) + b * (j - s + 1) + t) * inner
                })),
            };
            let u1 = move |e: i64| (int(-e) / int(2) + int(2 * a * (b - q) - 2 * m1 - 1)) / int(lam);
            let u2 = move |e: i64, r: i64| (int(-e) / int(2) + int(2 * a * (b - q) + 2 * r + 1)) / int(lam);
            let mut push = |family, params: Vec<i64>, energy: i64, u: BigRational, r: Option<i64>, t: Option<i64>| {
                let pre = pref.clone();
                out.push(Candidate {
                    family,
                    params,
                    energy,
                    u,
                    phi: Box::new(move |x| &pre * left(x, r) * right(x, t)),
                });
            };
            let e = 2 * (base - (m1 + m2 + 1));
            push(Family::E11, vec![p, q, s], e, u1(e), None, None);
            for t in 1..=m2 {
                let e = 2 * (base - m1 + t);
                push(Family::E12, vec![p, q, s, t], e, u1(e), None, Some(t));
            }
            for r in 1..=m1 {
                let e = 2 * (base - m2 + r);
                push(Family::E21, vec![p, q, r, s], e, u2(e, r), Some(r), None);
                for t in 1..=m2 {
                    let e = 2 * (base + r + t + 1);
                    push(Family::E22, vec![p, q, r, s, t], e, u2(e, r), Some(r), Some(t));
                }
            }
        }
    }
    out
}

fn candidates(sys: &SystemSpec, p: i64) -> Vec<Candidate> {
    match sys.case {
        Case::OscillatorPair => case1_candidates(sys.m1 as i64, p),
        Case::ExtendedPair => case2_candidates(sys.m1 as i64, sys.m2.unwrap_or(0) as i64, p),
    }
}

fn realize(c: Candidate, p: usize) -> Unirrep {
    let params = c
        .family
        .params()
        .iter()
        .zip(&c.params)
        .map(|(k, v)| (k.to_string(), *v))
        .collect();
    Unirrep {
        family: c.family,
        params,
        energy: c.energy,
        u: c.u,
        p,
        dimension: p + 1,
        structure_values: (0..=p as i64 + 1)
            .map(|x| BigRational::from_integer((c.phi)(x)))
            .collect(),
    }
}

/// All closed-form unirreps with `p ≤ p_max`, each checked against the
/// Fock-space constraints. Sorted by family, then parameters.
pub fn enumerate_unirreps(sys: &SystemSpec, p_max: usize, exec: Execution) -> Result<Vec<Unirrep>> {
    let per_p = exec.map((0..=p_max).collect(), |p| {
        let found: Vec<Unirrep> = candidates(sys, p as i64).into_iter().map(|c| realize(c, p)).collect();
        let mut report = VerificationReport::new(format!("p = {p}"));
        for u in &found {
            report.record(u.satisfies_constraints(), "Fock constraints", &u.id(), || {
                format!(
                    "structure values {:?}",
                    u.structure_values.iter().map(ToString::to_string).collect::<Vec<_>>()
                )
            });
        }
        report.into_result().map(|_| found)
    });
    let mut all = Vec::new();
    for (p, batch) in per_p.into_iter().enumerate() {
        let batch = batch?;
        if batch.len() != sys.unirreps_per_p() {
            return Err(Error::Inconsistent(format!(
                "{} unirreps at p = {p}, expected {}",
                batch.len(),
                sys.unirreps_per_p()
            )));
        }
        all.extend(batch);
    }
    sort_unirreps(&mut all);
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superintegrable::{build_case1, build_case2, structure_function};

    #[test]
    fn nine_per_p_for_m2() {
        let sys = build_case1(2).unwrap();
        let all = enumerate_unirreps(&sys, 3, Execution::Sequential).unwrap();
        for p in 0..=3usize {
            let mut energies: Vec<i64> = all.iter().filter(|u| u.p == p).map(|u| u.energy).collect();
            energies.sort();
            let q = 6 * p as i64;
            assert_eq!(
                energies,
                vec![q - 4, q - 2, q, q + 4, q + 6, q + 6, q + 8, q + 8, q + 10]
            );
        }
        let lowest = all
            .iter()
            .find(|u| u.family == Family::E1 && u.params["p"] == 0 && u.params["k"] == 3)
            .unwrap();
        assert_eq!((lowest.energy, lowest.dimension), (-4, 1));
        assert_eq!(lowest.id(), "E1(p=0,k=3)");
    }

    #[test]
    fn case2_count() {
        let sys = build_case2(2, 2).unwrap();
        let all = enumerate_unirreps(&sys, 1, Execution::Parallel).unwrap();
        assert_eq!(all.iter().filter(|u| u.p == 1).count(), 81);
        let sys = build_case2(4, 2).unwrap();
        assert_eq!(enumerate_unirreps(&sys, 0, Execution::Parallel).unwrap().len(), 225);
    }

    #[test]
    fn closed_forms_match_generic_structure_function() {
        for sys in [
            build_case1(2).unwrap(),
            build_case1(4).unwrap(),
            build_case2(2, 2).unwrap(),
            build_case2(4, 2).unwrap(),
        ] {
            for u in enumerate_unirreps(&sys, 2, Execution::Parallel).unwrap() {
                for (x, v) in u.structure_values.iter().enumerate() {
                    let e = int(u.energy);
                    assert_eq!(&structure_function(&sys, &e, &u.u, &int(x as i64)), v, "{}", u.id());
                }
            }
        }
    }

    #[test]
    fn e1_example() {
        // p = 1, k = 1, E = 6
        let sys = build_case1(2).unwrap();
        let all = enumerate_unirreps(&sys, 1, Execution::Sequential).unwrap();
        let u = all
            .iter()
            .find(|u| u.family == Family::E1 && u.params["p"] == 1 && u.params["k"] == 1)
            .unwrap();
        assert_eq!(u.energy, 6);
        assert!(u.structure_values[0].is_zero() && u.structure_values[2].is_zero());
        assert!(u.structure_values[1].is_positive());
    }
}
