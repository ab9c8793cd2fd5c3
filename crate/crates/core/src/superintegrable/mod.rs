//! Two-dimensional superintegrable systems `H = H_x + H_y` built from the
//! ladder operators of each axis, their polynomial algebra, and the
//! finite-dimensional unirreps that organize the degenerate spectrum.
//!
//! Two systems are supported:
//!
//! * [`Case::OscillatorPair`]: the rational extension with parameter `m` on
//!   `x` and a plain oscillator on `y`;
//! * [`Case::ExtendedPair`]: rational extensions with `m1 ≥ m2` on both axes.
//!
//! Both axes use `H_axis = H⁻ - 2m - 1`, whose eigenvalues are `2ν + 1`.

mod closed_form;
mod solver;
mod spectrum;

use std::fmt;

use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{int, ExactPoly};
use crate::wavefunction::check_even_m;

pub use closed_form::{enumerate_unirreps, Family, Unirrep};
pub use solver::{
    compare_solvers, constraint_solutions, generic_unirrep_solver, ConstraintSolution, SolverComparison, UFamily,
};
pub use spectrum::{
    brute_force_spectrum, decompose, expected_table_row, spectrum_report, table_rows, verify_integral_action, Level,
    PMultiset, SpectrumReport, TableRow,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Case {
    OscillatorPair,
    ExtendedPair,
}

impl Case {
    pub fn number(self) -> u8 {
        match self {
            Case::OscillatorPair => 1,
            Case::ExtendedPair => 2,
        }
    }
}

/// One axis of the 2D system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    /// `-d² + x²`, spectrum `2ν + 1` with `ν ≥ 0`.
    Oscillator,
    /// The rational extension, spectrum `2ν + 1` with `ν = -m-1` or `ν ≥ 0`.
    Extended { m: usize },
}

impl Axis {
    pub fn has_level(&self, e: &BigRational) -> bool {
        match self.index_of(e) {
            Some(nu) => match self {
                Axis::Oscillator => nu >= 0,
                Axis::Extended { m } => nu >= 0 || nu == -(*m as i64) - 1,
            },
            None => false,
        }
    }

    /// `ν` with `2ν + 1 = e`, if `e` is an odd integer.
    fn index_of(&self, e: &BigRational) -> Option<i64> {
        if !e.is_integer() {
            return None;
        }
        let e: i64 = e.to_integer().try_into().ok()?;
        (e.rem_euclid(2) == 1).then_some((e - 1) / 2)
    }

    pub fn lowest_index(&self) -> i64 {
        match self {
            Axis::Oscillator => 0,
            Axis::Extended { m } => -(*m as i64) - 1,
        }
    }

    /// Ladder step of the axis in units of `ν`.
    pub fn step(&self) -> i64 {
        match self {
            Axis::Oscillator => 1,
            Axis::Extended { m } => *m as i64 + 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub case: Case,
    pub m1: usize,
    /// `None` for the oscillator on `y`.
    pub m2: Option<usize>,
    pub lambda_x: i64,
    pub lambda_y: i64,
    pub n1: usize,
    pub n2: usize,
    pub lambda: i64,
    pub qx: ExactPoly,
    pub sy: ExactPoly,
    /// Roots of `Q` and `S`; both are products of linear factors.
    pub qx_roots: Vec<i64>,
    pub sy_roots: Vec<i64>,
    pub x_axis: Axis,
    pub y_axis: Axis,
}

/// Roots of `Q(h) = (h + 2m + 1) ∏ (h - 1 - 2i)`.
fn q_roots(m: usize) -> Vec<i64> {
    let m = m as i64;
    std::iter::once(-2 * m - 1).chain((1..=m).map(|i| 1 + 2 * i)).collect()
}

fn poly_from_int_roots(roots: &[i64]) -> ExactPoly {
    ExactPoly::from_roots(&roots.iter().map(|&r| int(r)).collect::<Vec<_>>())
}

/// Extended oscillator on `x`, plain oscillator on `y`.
pub fn build_case1(m: usize) -> Result<SystemSpec> {
    check_even_m(m)?;
    let qx_roots = q_roots(m);
    let sy_roots = vec![1];
    Ok(SystemSpec {
        case: Case::OscillatorPair,
        m1: m,
        m2: None,
        lambda_x: 2 * m as i64 + 2,
        lambda_y: 2,
        n1: 1,
        n2: m + 1,
        lambda: 2 * m as i64 + 2,
        qx: poly_from_int_roots(&qx_roots),
        sy: poly_from_int_roots(&sy_roots),
        qx_roots,
        sy_roots,
        x_axis: Axis::Extended { m },
        y_axis: Axis::Oscillator,
    })
}

/// Extended oscillators on both axes, `m1 ≥ m2`.
pub fn build_case2(m1: usize, m2: usize) -> Result<SystemSpec> {
    check_even_m(m1)?;
    check_even_m(m2)?;
    if m1 < m2 {
        return Err(Error::domain(format!("need m1 >= m2, got m1 = {m1}, m2 = {m2}")));
    }
    let (a, b) = (m1 as i64 + 1, m2 as i64 + 1);
    let qx_roots = q_roots(m1);
    let sy_roots = q_roots(m2);
    Ok(SystemSpec {
        case: Case::ExtendedPair,
        m1,
        m2: Some(m2),
        lambda_x: 2 * a,
        lambda_y: 2 * b,
        n1: m2 + 1,
        n2: m1 + 1,
        lambda: 2 * a * b,
        qx: poly_from_int_roots(&qx_roots),
        sy: poly_from_int_roots(&sy_roots),
        qx_roots,
        sy_roots,
        x_axis: Axis::Extended { m: m1 },
        y_axis: Axis::Extended { m: m2 },
    })
}

impl SystemSpec {
    /// `N` of the lowest level.
    pub fn ground_n(&self) -> i64 {
        self.x_axis.lowest_index() + self.y_axis.lowest_index() + 1
    }

    /// Increase of `N` per unit of `p` within one unirrep family.
    pub fn period(&self) -> i64 {
        self.lambda / 2
    }

    /// Conservative enumeration depth for levels up to `n_max`.
    pub fn default_p_max(&self, n_max: i64) -> usize {
        let step = self.lambda / (self.m1 as i64 + 1);
        let span = (n_max - self.ground_n()).max(0);
        (Integer::div_ceil(&span, &step) + 2) as usize
    }

    /// Number of unirreps per value of `p`.
    pub fn unirreps_per_p(&self) -> usize {
        let a = self.m1 + 1;
        match self.m2 {
            None => a * a,
            Some(m2) => a * a * (m2 + 1) * (m2 + 1),
        }
    }

    pub fn label(&self) -> String {
        match self.m2 {
            None => format!("case 1 (m = {})", self.m1),
            Some(m2) => format!("case 2 (m1 = {}, m2 = {m2})", self.m1),
        }
    }
}

impl fmt::Display for SystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: lambda_x = {}, lambda_y = {}, n1 = {}, n2 = {}, lambda = {}",
            self.label(),
            self.lambda_x,
            self.lambda_y,
            self.n1,
            self.n2,
            self.lambda
        )
    }
}

/// `Φ(E, u, x) = ∏_{i=1}^{n1} Q(E/2 + λ(x+u) - (n1-i)λ_x) ∏_{j=1}^{n2} S(E/2 - λ(x+u) + jλ_y)`.
pub fn structure_function(sys: &SystemSpec, e: &BigRational, u: &BigRational, x: &BigRational) -> BigRational {
    let half_e = e / int(2);
    let shift = int(sys.lambda) * (x + u);
    let mut acc = BigRational::from_integer(1.into());
    for i in 1..=sys.n1 as i64 {
        let h = &half_e + &shift - int((sys.n1 as i64 - i) * sys.lambda_x);
        acc *= sys.qx.eval(&h);
    }
    for j in 1..=sys.n2 as i64 {
        let h = &half_e - &shift + int(j * sys.lambda_y);
        acc *= sys.sy.eval(&h);
    }
    acc
}

/// Closed-form level degeneracy; zero for values of `N` that are not levels.
pub fn degeneracy_formula(sys: &SystemSpec, n: i64) -> Result<u64> {
    let ground = sys.ground_n();
    if n < ground {
        return Err(Error::domain(format!(
            "N = {n} lies below the ground level N = {ground}"
        )));
    }
    let m1 = sys.m1 as i64;
    let above = n.max(0) as u64;
    Ok(match sys.m2 {
        None => u64::from(n >= -m1) + above,
        Some(m2) => {
            let m2 = m2 as i64;
            u64::from(n == ground) + u64::from(n >= -m1) + u64::from(n >= -m2) + above
        }
    })
}

/// The lower-order choice `(n1, n2)` available when `m1 + 1` and `m2 + 1` share a factor.
pub fn reduced_ladder_choice(m1: usize, m2: usize) -> Result<(usize, usize)> {
    check_even_m(m1)?;
    check_even_m(m2)?;
    let g = (m1 + 1).gcd(&(m2 + 1));
    Ok(((m2 + 1) / g, (m1 + 1) / g))
}

/// `E/2 + λ(u + n)`, the `x`-axis energy of Fock state `n`.
pub(crate) fn x_energy(sys: &SystemSpec, e: &BigRational, u: &BigRational, n: i64) -> BigRational {
    e / int(2) + int(sys.lambda) * (u + int(n))
}

/// A Fock state `|E, n⟩` is realized when both axis energies are levels of their axis.
pub(crate) fn fock_state_realized(sys: &SystemSpec, e: &BigRational, u: &BigRational, n: i64) -> bool {
    let ex = x_energy(sys, e, u, n);
    let ey = e - &ex;
    sys.x_axis.has_level(&ex) && sys.y_axis.has_level(&ey)
}
