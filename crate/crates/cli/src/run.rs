//! Dispatch of a validated job to the library.

use crate::job::{Command, JobSpec, MatrixEncoding, MatrixKind};
use crate::output::{Cell, Report, Table};
use crate::reproduce::reproduce;
use anyhow::{bail, Result};
use serde::Serialize;
use std::io::Write;
use toeplitz_trace::funcalc::{heat_trace, om_resolvent_trace, trace_phi_difference, OperatorMonotone, ScalarFunction};
use toeplitz_trace::indices::ssf::LevelScan;
use toeplitz_trace::indices::{
    fredholm_index, krein_check, spectral_shift, ssf_from_principal, ssf_pushforward, witten_index, winding_number, Route,
};
use toeplitz_trace::linalg::Matrix;
use toeplitz_trace::operators::{dump, product_sections, toeplitz_section};
use toeplitz_trace::quadrature::{
    besov_integral, boundary_trace_integral, disk_trace_integral, heat_integral, DiskMode,
};
use toeplitz_trace::suites;
use toeplitz_trace::FourierSymbol;

/// What a job produced.
pub enum Artifact {
    Report(Report),
    Matrix(Matrix, MatrixEncoding),
}

impl Artifact {
    /// Whether the routes agree, for commands that compare routes.
    pub fn agreement(&self) -> Option<bool> {
        match self {
            Artifact::Report(r) => r.agreement,
            Artifact::Matrix(..) => None,
        }
    }

    pub fn write<W: Write>(&self, job: &JobSpec, mut out: W) -> Result<()> {
        match self {
            Artifact::Report(r) => r.write(job.format, out),
            Artifact::Matrix(m, MatrixEncoding::Csv) => Ok(dump::write_csv(m, &mut out)?),
            Artifact::Matrix(m, MatrixEncoding::Binary) => Ok(dump::write_binary(m, &mut out)?),
        }
    }
}

pub fn run(job: &JobSpec) -> Result<Artifact> {
    job.validate()?;
    let symbol = || -> Result<FourierSymbol> {
        match &job.symbol {
            Some(s) => s.build(job.degree),
            None => bail!("this command needs --symbol"),
        }
    };
    let report = match &job.command {
        Command::Index => index(job, &symbol()?)?,
        Command::Witten => witten(job, &symbol()?)?,
        Command::Trace { function } => trace(job, &symbol()?, function)?,
        Command::Heat { s } => heat(job, &symbol()?, *s)?,
        Command::Ssf { grid, points } => ssf(job, &symbol()?, *grid, points.as_deref())?,
        Command::Besov { p, n } => besov(job, &symbol()?, *p, *n)?,
        Command::KreinCheck { function } => {
            let f = symbol()?;
            let tolerance = job.tolerance.unwrap_or(2e-3);
            let r = krein_check(&f, function, job.size, tolerance, &job.settings)?;
            Report::new(job, &r, route_table(&r.routes))?
                .with_summary("function", r.function.clone())
                .with_summary("max_discrepancy", r.max_discrepancy)
                .with_summary("tolerance", r.tolerance)
                .with_agreement(r.agreement)
        }
        Command::Reproduce { id, args } => reproduce(job, *id, args)?,
        Command::DumpMatrix { matrix, encoding } => {
            let f = symbol()?;
            let m = match matrix {
                MatrixKind::Toeplitz => toeplitz_section(&f, job.size),
                kind => {
                    let pair = product_sections(&f, job.size)?;
                    match kind {
                        MatrixKind::A => pair.a,
                        MatrixKind::B => pair.b,
                        _ => pair.difference(),
                    }
                }
            };
            return Ok(Artifact::Matrix(m, *encoding));
        }
        Command::Suites { trials } => run_suites(job, *trials)?,
    };
    Ok(Artifact::Report(report))
}

fn route_table(routes: &[Route]) -> Table {
    let mut t = Table::new(&["route", "value", "error"]);
    for r in routes {
        t.push(vec![r.name.clone().into(), r.value.into(), r.error.into()]);
    }
    t
}

/// Routes agree when each pair is within `tolerance` or within the sum of
/// their error bars.
fn routes_agree(routes: &[Route], tolerance: f64) -> bool {
    routes.iter().all(|a| {
        routes
            .iter()
            .all(|b| (a.value - b.value).abs() <= tolerance.max(a.error + b.error))
    })
}

fn index(job: &JobSpec, f: &FourierSymbol) -> Result<Report> {
    let r = fredholm_index(f)?;
    let winding = winding_number(f, num_complex::Complex64::new(0.0, 0.0))?;
    let mut t = Table::new(&["quantity", "value"]);
    t.push(vec!["winding".into(), winding.into()]);
    t.push(vec!["fredholm_index".into(), r.index.into()]);
    t.push(vec!["commutator_trace".into(), r.commutator_trace.into()]);
    Ok(Report::new(job, &r, t)?.with_agreement(r.commutator_agrees))
}

fn witten(job: &JobSpec, f: &FourierSymbol) -> Result<Report> {
    let r = witten_index(f, &job.settings)?;
    let mut report = Report::new(job, &r, route_table(&r.routes))?;
    if let Some(w) = r.witten {
        report = report.with_summary("witten_index", w);
    }
    if let Some(k) = r.fredholm {
        report = report.with_summary("fredholm_index", k);
    }
    let agreement = r.agreement;
    Ok(report
        .with_summary("circle_zeros", r.zeros.len())
        .with_summary("imaginary_residual", r.imaginary_residual)
        .with_agreement(agreement))
}

/// The operator-monotone representation of `phi`, when it has one.
fn monotone_form(phi: &ScalarFunction) -> Option<OperatorMonotone> {
    match phi {
        ScalarFunction::Power { p } if *p > 0.0 && *p < 1.0 => OperatorMonotone::power_q(*p).ok(),
        ScalarFunction::Resolvent { lambda } => OperatorMonotone::resolvent(*lambda).ok(),
        _ => None,
    }
}

#[derive(Serialize)]
struct TraceResult {
    function: String,
    routes: Vec<Route>,
}

pub(crate) fn trace_routes(job: &JobSpec, f: &FourierSymbol, phi: &ScalarFunction) -> Result<Vec<Route>> {
    let matrix = trace_phi_difference(f, phi, job.size)?;
    let mut routes = vec![Route {
        name: "matrix".into(),
        value: matrix.value,
        error: matrix.total_error(),
    }];
    if let Some(om) = monotone_form(phi) {
        let r = om_resolvent_trace(f, &om, job.size)?;
        routes.push(Route {
            name: "operator_monotone".into(),
            value: r.value,
            error: r.total_error(),
        });
    }
    let boundary = boundary_trace_integral(f, phi, &job.settings)?;
    routes.push(Route {
        name: "boundary".into(),
        value: boundary.value.re,
        error: boundary.abs_error_estimate,
    });
    let mode = if f.is_analytic() { DiskMode::Analytic } else { DiskMode::Harmonic };
    match disk_trace_integral(f, phi, mode, &job.settings) {
        Ok(disk) => routes.push(Route {
            name: "disk".into(),
            value: disk.value.re,
            error: disk.abs_error_estimate,
        }),
        Err(e) => log::info!("disk route skipped: {e}"),
    }
    Ok(routes)
}

fn trace(job: &JobSpec, f: &FourierSymbol, phi: &ScalarFunction) -> Result<Report> {
    let routes = trace_routes(job, f, phi)?;
    let agreement = routes_agree(&routes, job.tolerance.unwrap_or(1e-6));
    let result = TraceResult {
        function: phi.label(),
        routes,
    };
    Ok(Report::new(job, &result, route_table(&result.routes))?
        .with_summary("function", result.function.clone())
        .with_agreement(agreement))
}

fn heat(job: &JobSpec, f: &FourierSymbol, s: f64) -> Result<Report> {
    let matrix = heat_trace(f, s, job.size)?;
    let integral = heat_integral(f, s, &job.settings)?;
    let routes = vec![
        Route {
            name: "matrix".into(),
            value: matrix.value,
            error: matrix.total_error(),
        },
        Route {
            name: "heat_integral".into(),
            value: integral.value.re,
            error: integral.abs_error_estimate,
        },
    ];
    let agreement = routes_agree(&routes, job.tolerance.unwrap_or(1e-6));
    let result = TraceResult {
        function: format!("exp(-{s} x)"),
        routes,
    };
    Ok(Report::new(job, &result, route_table(&result.routes))?.with_agreement(agreement))
}

#[derive(Serialize)]
struct SsfResult {
    grid: Vec<f64>,
    boundary: Vec<f64>,
    principal_function: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pushforward: Option<Vec<f64>>,
    imaginary_residual: Vec<f64>,
    max_discrepancy: f64,
}

/// Agreement of the boundary and principal-function routes, which are both
/// exact up to quadrature error.
const SSF_EXACT_TOL: f64 = 1e-6;

/// `count` midpoints of an even partition of `(0, 17/16 sup |f|^2]`, so
/// that the last points lie above the top of the spectrum.
pub fn ssf_grid(f: &FourierSymbol, count: usize) -> Vec<f64> {
    let top = LevelScan::new(f).top * 17.0 / 16.0;
    (0..count).map(|i| top * (i as f64 + 0.5) / count as f64).collect()
}

fn ssf(job: &JobSpec, f: &FourierSymbol, count: usize, points: Option<&[f64]>) -> Result<Report> {
    let grid = match points {
        Some(p) => p.to_vec(),
        None => ssf_grid(f, count),
    };
    let boundary = spectral_shift(f, &grid)?;
    let principal = ssf_from_principal(f, &grid, &job.settings)?;
    let push = if f.is_analytic() { Some(ssf_pushforward(f, &grid)?) } else { None };
    let tolerance = job.tolerance.unwrap_or(2e-3);
    let mut max_discrepancy: f64 = 0.0;
    let mut agreement = true;
    let mut columns = vec!["x", "boundary", "principal_function"];
    if push.is_some() {
        columns.push("pushforward");
    }
    let mut t = Table::new(&columns);
    for (i, &x) in grid.iter().enumerate() {
        let b = boundary.values[i];
        let p = principal.values[i];
        let exact_gap = (b - p).abs();
        agreement &= exact_gap <= SSF_EXACT_TOL;
        max_discrepancy = max_discrepancy.max(exact_gap);
        let mut row: Vec<Cell> = vec![x.into(), b.into(), p.into()];
        if let Some(push) = &push {
            let q = push.values[i];
            let gap = (b - q).abs().max((p - q).abs());
            agreement &= gap <= tolerance;
            max_discrepancy = max_discrepancy.max(gap);
            row.push(q.into());
        }
        t.push(row);
    }
    let result = SsfResult {
        grid,
        boundary: boundary.values,
        principal_function: principal.values,
        pushforward: push.map(|p| p.values),
        imaginary_residual: boundary.imaginary_residual,
        max_discrepancy,
    };
    Ok(Report::new(job, &result, t)?
        .with_summary("max_discrepancy", max_discrepancy)
        .with_agreement(agreement))
}

fn besov(job: &JobSpec, f: &FourierSymbol, p: f64, n: Option<usize>) -> Result<Report> {
    let n = n.unwrap_or((2.0 / p).ceil() as usize);
    let r = besov_integral(f, p, n, &job.settings)?;
    let mut t = Table::new(&["quantity", "value"]);
    t.push(vec!["p".into(), p.into()]);
    t.push(vec!["n".into(), n.into()]);
    t.push(vec!["verdict".into(), format!("{:?}", r.verdict).to_lowercase().into()]);
    t.push(vec!["decay_exponent".into(), r.decay_exponent.into()]);
    if let Some(v) = &r.value {
        t.push(vec!["integral".into(), v.value.re.into()]);
        t.push(vec!["integral_error".into(), v.abs_error_estimate.into()]);
    }
    Report::new(job, &r, t)
}

/// Default trial counts of the property suites.
const SUITE_TRIALS: [(&str, usize); 6] = [
    ("qtrace", 200),
    ("krein_algebra", 50),
    ("helton_howe", 20),
    ("heat_identity", 20),
    ("winding", 20),
    ("fredholm_coincidence", 20),
];

pub fn suite_reports(seed: u64, trials: Option<usize>) -> Result<Vec<suites::SuiteReport>> {
    let count = |name: &str| -> usize {
        trials.unwrap_or_else(|| SUITE_TRIALS.iter().find(|(n, _)| *n == name).map(|p| p.1).unwrap_or(20))
    };
    Ok(vec![
        suites::qtrace_suite(seed, count("qtrace"), 8)?,
        suites::krein_algebra_suite(seed, count("krein_algebra"), 16)?,
        suites::helton_howe_suite(seed, count("helton_howe"), 16, 1e-10)?,
        suites::heat_identity_suite(seed, count("heat_identity"), 8, &[0.5, 1.0, 5.0, 20.0], 1e-6)?,
        suites::winding_suite(seed, count("winding"))?,
        suites::fredholm_coincidence_suite(seed, count("fredholm_coincidence"))?,
        suites::index_collapse_guard(&ScalarFunction::Power { p: 0.5 }, 64)?,
    ])
}

fn run_suites(job: &JobSpec, trials: Option<usize>) -> Result<Report> {
    let reports = suite_reports(job.seed, trials)?;
    let mut t = Table::new(&["suite", "trials", "violations", "worst", "verdict"]);
    for r in &reports {
        t.push(vec![
            r.name.clone().into(),
            r.trials.into(),
            r.violations.into(),
            r.worst.into(),
            r.passed().into(),
        ]);
    }
    let agreement = reports.iter().all(|r| r.passed());
    Ok(Report::new(job, &reports, t)?
        .with_summary("seed", job.seed.to_string())
        .with_agreement(agreement))
}
