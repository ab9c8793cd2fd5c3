use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Command, Format, Outcome, RunConfig};
use crate::error::{Error, Result, VerificationFailure, VerificationReport};
use crate::ladder::{
    build_ladder, kernel_check, ladder_table, pha_q, unirrep_partition, verify_pha, LadderCoefficient,
};
use crate::poly::{eop_y, pseudo_hermite, ExactPoly, RationalFunction};
use crate::serde_exact::rational_to_string;
use crate::superintegrable::{
    compare_solvers, expected_table_row, spectrum_report, table_rows, verify_integral_action, Case, SolverComparison,
    SpectrumReport, TableRow,
};
use crate::susy::DressingChain;
use crate::wavefunction::{energy, minus_indices, Side, Sign};

/// JSON wrapper shared by every command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub command: String,
    pub status: String,
    pub parameters: serde_json::Value,
    pub result: T,
    pub failures: Vec<VerificationFailure>,
}

pub fn render_json<T: Serialize>(config: &RunConfig, result: &T, failures: &[VerificationFailure]) -> Vec<u8> {
    let env = Envelope {
        command: config.command.name().to_string(),
        status: if failures.is_empty() { "pass" } else { "fail" }.to_string(),
        parameters: serde_json::to_value(config).expect("serializable"),
        result,
        failures: failures.to_vec(),
    };
    let mut out = serde_json::to_vec_pretty(&env).expect("serializable");
    out.push(b'\n');
    out
}

fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

fn sign_str(s: Sign) -> &'static str {
    match s {
        Sign::Plus => "+",
        Sign::Minus => "-",
    }
}

pub(super) fn dispatch(config: &RunConfig) -> Result<Outcome> {
    match config.command {
        Command::Eop => eop(config),
        Command::Potential => potential(config),
        Command::Ladder => ladder(config),
        Command::PhaCheck => pha_check(config),
        Command::Spectrum => spectrum(config),
        Command::Unirreps => unirreps(config),
        Command::Tables => tables(config),
        Command::Diagram => diagram(config),
    }
}

#[derive(Serialize)]
struct EopRow {
    nu: i64,
    index: usize,
    degree: usize,
    polynomial: ExactPoly,
    display: String,
}

#[derive(Serialize)]
struct EopResult {
    m: usize,
    pseudo_hermite: ExactPoly,
    pseudo_hermite_display: String,
    polynomials: Vec<EopRow>,
}

fn eop(config: &RunConfig) -> Result<Outcome> {
    let m = config.m;
    let mut rows = vec![];
    let mut indices = vec![(-(m as i64) - 1, 0usize)];
    indices.extend((0..=config.nu_max()).map(|nu| (nu, nu as usize + m + 1)));
    for (nu, n) in indices {
        let y = eop_y(m, n)?;
        rows.push(EopRow {
            nu,
            index: n,
            degree: y.degree().unwrap_or(0),
            display: y.to_string(),
            polynomial: y,
        });
    }
    let ph = pseudo_hermite(m);
    let result = EopResult {
        m,
        pseudo_hermite_display: ph.to_string(),
        pseudo_hermite: ph,
        polynomials: rows,
    };
    let artifact = match config.format {
        Format::Json => render_json(config, &result, &[]),
        Format::Csv => csv_bytes(
            &["nu", "n", "degree", "polynomial"],
            result.polynomials.iter().map(|r| {
                vec![
                    r.nu.to_string(),
                    r.index.to_string(),
                    r.degree.to_string(),
                    r.display.clone(),
                ]
            }),
        ),
        _ => {
            let mut s = format!("pseudo-Hermite H_{m}(x) = {}\n", result.pseudo_hermite_display);
            for r in &result.polynomials {
                let _ = writeln!(s, "y_{}(x) = {}    (nu = {})", r.index, r.display, r.nu);
            }
            s.into_bytes()
        }
    };
    Ok(Outcome {
        artifact,
        failures: vec![],
    })
}

#[derive(Serialize)]
struct RationalOut {
    num: ExactPoly,
    den: ExactPoly,
    display: String,
}

impl From<&RationalFunction> for RationalOut {
    fn from(r: &RationalFunction) -> Self {
        RationalOut {
            num: r.num().clone(),
            den: r.den().clone(),
            display: r.to_string(),
        }
    }
}

#[derive(Serialize)]
struct HatOut {
    i: usize,
    superpotential: RationalOut,
    auxiliary: bool,
}

#[derive(Serialize)]
struct PotentialResult {
    m: usize,
    superpotential: RationalOut,
    partner_potential: RationalOut,
    shift: String,
    hat_superpotentials: Vec<HatOut>,
    verification: VerificationReport,
}

fn potential(config: &RunConfig) -> Result<Outcome> {
    let chain = DressingChain::new(config.m)?;
    let verification = chain.verify(config.execution)?;
    let failures = verification.failures.clone();
    let result = PotentialResult {
        m: config.m,
        superpotential: (&chain.a.w).into(),
        partner_potential: (&chain.h_minus.potential).into(),
        shift: rational_to_string(&chain.h_minus.shift),
        hat_superpotentials: chain
            .hat
            .iter()
            .enumerate()
            .map(|(i, op)| HatOut {
                i: i + 1,
                superpotential: (&op.w).into(),
                auxiliary: op.auxiliary,
            })
            .collect(),
        verification,
    };
    let artifact = match config.format {
        Format::Json => render_json(config, &result, &failures),
        _ => {
            let mut s = String::new();
            let _ = writeln!(s, "m = {}", result.m);
            let _ = writeln!(s, "W(x) = {}", result.superpotential.display);
            let _ = writeln!(s, "V-(x) = {}", result.partner_potential.display);
            let _ = writeln!(s, "shift = {}", result.shift);
            for h in &result.hat_superpotentials {
                let aux = if h.auxiliary { "  [auxiliary]" } else { "" };
                let _ = writeln!(s, "W{}_hat(x) = {}{aux}", h.i, h.superpotential.display);
            }
            write_verification(&mut s, &result.verification);
            s.into_bytes()
        }
    };
    Ok(Outcome { artifact, failures })
}

fn write_verification(s: &mut String, r: &VerificationReport) {
    let status = if r.passed() { "PASS" } else { "FAIL" };
    let _ = writeln!(
        s,
        "{}: {} checks, {} failed [{status}]",
        r.name,
        r.checks,
        r.failures.len()
    );
    for f in &r.failures {
        let _ = writeln!(s, "  {f}");
    }
}

#[derive(Serialize)]
struct LadderRow {
    #[serde(flatten)]
    coefficient: LadderCoefficient,
    #[serde(serialize_with = "crate::serde_exact::rational")]
    q_at_target: num_rational::BigRational,
}

#[derive(Serialize)]
struct LadderResult {
    m: usize,
    lambda: String,
    q: ExactPoly,
    q_display: String,
    c_dag: String,
    c: String,
    coefficients: Vec<LadderRow>,
    squared_by_nu: BTreeMap<i64, String>,
    kernel: Vec<i64>,
    chains: Vec<Vec<i64>>,
}

fn ladder(config: &RunConfig) -> Result<Outcome> {
    let m = config.m;
    let nu_max = config.nu_max();
    let (up, down) = build_ladder(m)?;
    let pha = pha_q(m)?;
    let table = ladder_table(m, nu_max, config.execution)?;
    let mut report = VerificationReport::new(format!("ladder coefficients, m = {m}"));
    let rows: Vec<LadderRow> = table
        .into_iter()
        .map(|c| {
            let q = pha.eval(&energy(m, Side::Minus, c.target).expect("valid target"));
            report.record(
                c.squared == q,
                "C_nu^2 = Q(E_nu + 2m + 2)",
                &format!("nu = {}", c.nu),
                || format!("C^2 = {}, Q = {q}", c.squared),
            );
            LadderRow {
                coefficient: c,
                q_at_target: q,
            }
        })
        .collect();
    let kernel = kernel_of(m, nu_max, config)?;
    let result = LadderResult {
        m,
        lambda: rational_to_string(&pha.lambda),
        q_display: pha.q.to_string().replace('x', "H"),
        q: pha.q.clone(),
        c_dag: up.describe(),
        c: down.describe(),
        squared_by_nu: rows
            .iter()
            .map(|r| (r.coefficient.nu, rational_to_string(&r.coefficient.squared)))
            .collect(),
        coefficients: rows,
        kernel,
        chains: unirrep_partition(m, nu_max)?,
    };
    let failures = report.failures;
    let artifact = match config.format {
        Format::Json => render_json(config, &result, &failures),
        Format::Csv => csv_bytes(
            &["nu", "target", "squared", "sign", "proportionality"],
            result.coefficients.iter().map(|r| {
                let c = &r.coefficient;
                vec![
                    c.nu.to_string(),
                    c.target.to_string(),
                    rational_to_string(&c.squared),
                    sign_str(c.sign).to_string(),
                    rational_to_string(&c.proportionality),
                ]
            }),
        ),
        _ => {
            let mut s = String::new();
            let _ = writeln!(s, "m = {m}, lambda = {}", result.lambda);
            let _ = writeln!(s, "c^dag = {}", result.c_dag);
            let _ = writeln!(s, "c     = {}", result.c);
            let _ = writeln!(s, "Q(H)  = {}", result.q_display);
            let _ = writeln!(s, "{:>6} {:>6} {:>24} {:>4}", "nu", "target", "C^2", "sign");
            for r in &result.coefficients {
                let c = &r.coefficient;
                let _ = writeln!(
                    s,
                    "{:>6} {:>6} {:>24} {:>4}",
                    c.nu,
                    c.target,
                    rational_to_string(&c.squared),
                    sign_str(c.sign)
                );
            }
            let _ = writeln!(s, "kernel of c: {:?}", result.kernel);
            for ch in &result.chains {
                let _ = writeln!(s, "chain: {ch:?}");
            }
            s.into_bytes()
        }
    };
    Ok(Outcome { artifact, failures })
}

fn kernel_of(m: usize, nu_max: i64, config: &RunConfig) -> Result<Vec<i64>> {
    let flags = config
        .execution
        .map(minus_indices(m, nu_max), |nu| kernel_check(m, nu).map(|k| (nu, k)));
    Ok(flags
        .into_iter()
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|(_, k)| *k)
        .map(|(nu, _)| nu)
        .collect())
}

#[derive(Serialize)]
struct PhaResult {
    m: usize,
    nu_max: i64,
    q: ExactPoly,
    q_degree: usize,
    verification: VerificationReport,
    kernel: Vec<i64>,
    chains: Vec<Vec<i64>>,
}

fn pha_check(config: &RunConfig) -> Result<Outcome> {
    let m = config.m;
    let nu_max = config.nu_max();
    let verification = verify_pha(m, nu_max, config.execution)?;
    let kernel = kernel_of(m, nu_max, config)?;
    let expected: Vec<i64> = std::iter::once(-(m as i64) - 1).chain(1..=m as i64).collect();
    let mut failures = verification.failures.clone();
    if kernel != expected {
        failures.push(VerificationFailure {
            identity: "ker c = {-m-1, 1..m}".into(),
            subject: format!("nu <= {nu_max}"),
            detail: format!("found {kernel:?}"),
        });
    }
    let q = pha_q(m)?.q;
    let result = PhaResult {
        m,
        nu_max,
        q_degree: q.degree().unwrap_or(0),
        q,
        verification,
        kernel,
        chains: unirrep_partition(m, nu_max)?,
    };
    let artifact = match config.format {
        Format::Json => render_json(config, &result, &failures),
        _ => {
            let mut s = String::new();
            let _ = writeln!(s, "m = {m}, nu_max = {nu_max}, deg Q = {}", result.q_degree);
            write_verification(&mut s, &result.verification);
            let _ = writeln!(s, "kernel of c: {:?}", result.kernel);
            let status = if failures.is_empty() { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "status: {status}");
            s.into_bytes()
        }
    };
    Ok(Outcome { artifact, failures })
}

#[derive(Serialize)]
struct SpectrumResult<'a> {
    #[serde(flatten)]
    report: &'a SpectrumReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    solver_comparison: Option<SolverComparison>,
    #[serde(skip_serializing_if = "Option::is_none")]
    integral_action: Option<VerificationReport>,
}

/// `-4, -2, 0, 2^2, 4^3`.
fn level_sequence(report: &SpectrumReport) -> String {
    report
        .levels
        .iter()
        .filter(|l| l.oracle_degeneracy > 0)
        .map(|l| {
            if l.oracle_degeneracy == 1 {
                l.energy.to_string()
            } else {
                format!("{}^{}", l.energy, l.oracle_degeneracy)
            }
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn cross_checks(
    config: &RunConfig,
    report: &SpectrumReport,
    failures: &mut Vec<VerificationFailure>,
) -> Result<(Option<SolverComparison>, Option<VerificationReport>)> {
    if !config.cross_check {
        return Ok((None, None));
    }
    let sys = &report.system;
    let cmp = compare_solvers(sys, report.n_max, Some(report.p_max), config.execution)?;
    if !cmp.equivalent() {
        failures.push(VerificationFailure {
            identity: "constraint solver = closed-form unirreps".into(),
            subject: sys.label(),
            detail: format!(
                "only closed form: {:?}; only solver: {:?}; u mismatches: {:?}",
                cmp.only_closed_form, cmp.only_generic, cmp.u_family_mismatches
            ),
        });
    }
    let action = verify_integral_action(sys, report.n_max, config.execution)?;
    failures.extend(action.failures.iter().cloned());
    Ok((Some(cmp), Some(action)))
}

fn spectrum(config: &RunConfig) -> Result<Outcome> {
    let sys = config.system.build()?;
    let report = spectrum_report(&sys, config.n_max, config.p_max, config.execution)?;
    let mut failures = report.failures.clone();
    let (cmp, action) = cross_checks(config, &report, &mut failures)?;
    let artifact = match config.format {
        Format::Json => render_json(
            config,
            &SpectrumResult {
                report: &report,
                solver_comparison: cmp,
                integral_action: action,
            },
            &failures,
        ),
        Format::Csv => csv_bytes(
            &["N", "energy", "degeneracy", "oracle_degeneracy", "N_unirreps", "p"],
            report.levels.iter().map(|l| {
                vec![
                    l.n.to_string(),
                    l.energy.to_string(),
                    l.degeneracy.to_string(),
                    l.oracle_degeneracy.to_string(),
                    l.n_unirreps().to_string(),
                    l.p_multiset.to_string(),
                ]
            }),
        ),
        _ => {
            let mut s = String::new();
            let _ = writeln!(s, "{}", report.system);
            let _ = writeln!(s, "N_max = {}, p_max = {}", report.n_max, report.p_max);
            let _ = writeln!(s, "levels: {}", level_sequence(&report));
            let _ = writeln!(
                s,
                "{:>5} {:>6} {:>6} {:>7} {:>5}  p",
                "N", "E", "deg", "oracle", "#unirr"
            );
            for l in &report.levels {
                let _ = writeln!(
                    s,
                    "{:>5} {:>6} {:>6} {:>7} {:>6}  {}",
                    l.n,
                    l.energy,
                    l.degeneracy,
                    l.oracle_degeneracy,
                    l.n_unirreps(),
                    l.p_multiset
                );
            }
            if let Some(c) = &cmp {
                let _ = writeln!(
                    s,
                    "constraint solver: {} solutions, closed form: {}, equivalent: {}, rejected: {}",
                    c.generic,
                    c.closed_form,
                    c.equivalent(),
                    c.rejected.len()
                );
            }
            if let Some(a) = &action {
                write_verification(&mut s, a);
            }
            let _ = writeln!(s, "status: {}", if failures.is_empty() { "PASS" } else { "FAIL" });
            s.into_bytes()
        }
    };
    Ok(Outcome { artifact, failures })
}

fn unirreps(config: &RunConfig) -> Result<Outcome> {
    let sys = config.system.build()?;
    let report = spectrum_report(&sys, config.n_max, config.p_max, config.execution)?;
    let mut failures = report.failures.clone();
    let (cmp, _) = cross_checks(config, &report, &mut failures)?;
    #[derive(Serialize)]
    struct UnirrepResult<'a> {
        system: &'a crate::superintegrable::SystemSpec,
        n_max: i64,
        p_max: usize,
        unirreps: &'a [crate::superintegrable::Unirrep],
        #[serde(skip_serializing_if = "Option::is_none")]
        solver_comparison: Option<SolverComparison>,
    }
    let artifact = match config.format {
        Format::Json => render_json(
            config,
            &UnirrepResult {
                system: &report.system,
                n_max: report.n_max,
                p_max: report.p_max,
                unirreps: &report.unirreps,
                solver_comparison: cmp,
            },
            &failures,
        ),
        Format::Csv => csv_bytes(
            &["id", "family", "energy", "N", "p", "dimension", "u", "structure_values"],
            report.unirreps.iter().map(|u| {
                vec![
                    u.id(),
                    u.family.to_string(),
                    u.energy.to_string(),
                    u.n().to_string(),
                    u.p.to_string(),
                    u.dimension.to_string(),
                    rational_to_string(&u.u),
                    u.structure_values
                        .iter()
                        .map(rational_to_string)
                        .collect::<Vec<_>>()
                        .join(";"),
                ]
            }),
        ),
        _ => {
            let mut s = String::new();
            let _ = writeln!(s, "{}", report.system);
            let _ = writeln!(s, "{} unirreps with N <= {}", report.unirreps.len(), report.n_max);
            for u in &report.unirreps {
                let _ = writeln!(
                    s,
                    "{:<28} E = {:>5}  dim = {:>3}  u = {}",
                    u.id(),
                    u.energy,
                    u.dimension,
                    rational_to_string(&u.u)
                );
            }
            if let Some(c) = &cmp {
                let _ = writeln!(s, "constraint solver equivalent: {}", c.equivalent());
            }
            s.into_bytes()
        }
    };
    Ok(Outcome { artifact, failures })
}

fn tables(config: &RunConfig) -> Result<Outcome> {
    let sys = config.system.build()?;
    let report = spectrum_report(&sys, config.n_max, config.p_max, config.execution)?;
    let rows = table_rows(&report);
    let mut check = VerificationReport::new("table rows");
    for row in &rows {
        if let Some((ps, count, deg)) = expected_table_row(&sys, row.n) {
            let ok = ps == row.p && count == row.n_unirreps && deg == row.degeneracy;
            check.record(ok, "table row = closed form", &format!("N = {}", row.n), || {
                format!(
                    "got ({}, {}, {}), expected ({ps}, {count}, {deg})",
                    row.p, row.n_unirreps, row.degeneracy
                )
            });
        }
    }
    let mut failures = report.failures.clone();
    failures.extend(check.failures);
    let artifact = emit_table(&rows, sys.case, config.format, |result| {
        render_json(config, result, &failures)
    })?;
    Ok(Outcome { artifact, failures })
}

/// Serializes table rows. Case 1 columns: `lambda, mu, p, N_unirreps, degeneracy`;
/// case 2 adds `rho, sigma` after `lambda`. `p` uses caret notation in text and
/// CSV (`1,0^2`) and a `{p: count}` map in JSON.
pub fn emit_table(
    rows: &[TableRow],
    case: Case,
    format: Format,
    json: impl FnOnce(&Vec<TableRow>) -> Vec<u8>,
) -> Result<Vec<u8>> {
    let header: &[&str] = match case {
        Case::OscillatorPair => &["lambda", "mu", "p", "N_unirreps", "degeneracy"],
        Case::ExtendedPair => &["lambda", "rho", "sigma", "mu", "p", "N_unirreps", "degeneracy"],
    };
    let cells = |r: &TableRow| -> Vec<String> {
        let mut v = vec![r.lambda.to_string()];
        if case == Case::ExtendedPair {
            v.push(r.rho.unwrap_or_default().to_string());
            v.push(r.sigma.unwrap_or_default().to_string());
        }
        v.extend([
            r.mu.to_string(),
            r.p.to_string(),
            r.n_unirreps.to_string(),
            r.degeneracy.to_string(),
        ]);
        v
    };
    Ok(match format {
        Format::Json => json(&rows.to_vec()),
        Format::Csv => csv_bytes(header, rows.iter().map(cells)),
        Format::Text => {
            let mut s = String::new();
            let line = |v: &[String]| v.iter().map(|c| format!("{c:>10}")).collect::<String>();
            let _ = writeln!(s, "{}", line(&header.iter().map(|h| h.to_string()).collect::<Vec<_>>()));
            for r in rows {
                let _ = writeln!(s, "{}", line(&cells(r)));
            }
            s.into_bytes()
        }
        Format::Svg => return Err(Error::Domain("tables have no SVG form".into())),
    })
}

#[derive(Serialize)]
struct DiagramLevel {
    nu: i64,
    energy: i64,
}

#[derive(Serialize)]
struct DiagramResult {
    m: usize,
    nu_max: i64,
    levels: Vec<DiagramLevel>,
    chains: Vec<Vec<i64>>,
}

fn diagram(config: &RunConfig) -> Result<Outcome> {
    let m = config.m;
    let nu_max = config.nu_max();
    let chains = unirrep_partition(m, nu_max)?;
    let artifact = match config.format {
        Format::Svg => super::svg::render_diagram(m, nu_max)?.into_bytes(),
        Format::Json => {
            let levels = minus_indices(m, nu_max)
                .into_iter()
                .map(|nu| DiagramLevel {
                    nu,
                    energy: 2 * (nu + m as i64 + 1),
                })
                .collect();
            render_json(
                config,
                &DiagramResult {
                    m,
                    nu_max,
                    levels,
                    chains,
                },
                &[],
            )
        }
        _ => {
            let mut s = String::new();
            for (i, ch) in chains.iter().enumerate() {
                let steps: Vec<String> = ch
                    .iter()
                    .map(|nu| format!("{nu} (E={})", 2 * (nu + m as i64 + 1)))
                    .collect();
                let _ = writeln!(s, "chain {}: {} -> ...", i + 1, steps.join(" -> "));
            }
            s.into_bytes()
        }
    };
    Ok(Outcome {
        artifact,
        failures: vec![],
    })
}
