//! Worked examples: each computes a value by independent numerical routes
//! and compares it with the closed form.

use crate::job::{JobSpec, ReproduceArgs, SymbolInput};
use crate::output::{Report, Table};
use crate::run::trace_routes;
use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use toeplitz_trace::funcalc::ScalarFunction;
use toeplitz_trace::indices::closed_forms::{shifted_shift_root_trace_by_quadrature, ExampleParams};
use toeplitz_trace::indices::{closed_form, witten_index, ExampleId};
use toeplitz_trace::operators::weighted_commutator_trace;
use toeplitz_trace::quadrature::monomial_commutator_integral;
use toeplitz_trace::{FourierSymbol, SymbolFamily, TruncationMode};

/// Default symbol of the rational example: one zero on the circle, one
/// inside, one pole outside.
pub const DEFAULT_RATIONAL: &str = "(z+1)*(z-0.5)/(z-2)";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub quantity: String,
    pub route: String,
    pub computed: f64,
    pub reference: f64,
    pub difference: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Comparison {
    fn new(quantity: &str, route: &str, computed: f64, reference: f64, tolerance: f64) -> Self {
        let difference = (computed - reference).abs();
        Comparison {
            quantity: quantity.into(),
            route: route.into(),
            computed,
            reference,
            difference,
            tolerance,
            pass: difference <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproduceResult {
    pub id: ExampleId,
    pub params: ExampleParams,
    pub comparisons: Vec<Comparison>,
}

impl ReproduceResult {
    pub fn passed(&self) -> bool {
        !self.comparisons.is_empty() && self.comparisons.iter().all(|c| c.pass)
    }
}

/// Tolerance of the principal-value Witten route.
const PV_TOL: f64 = 1e-8;
/// Tolerance of the extrapolated heat limit.
const HEAT_TOL: f64 = 2e-2;

fn family_symbol(family: SymbolFamily, degree: usize) -> Result<FourierSymbol> {
    Ok(FourierSymbol::from_family(family, degree, TruncationMode::Raw)?)
}

fn witten_comparisons(f: &FourierSymbol, reference: f64, job: &JobSpec) -> Result<Vec<Comparison>> {
    let r = witten_index(f, &job.settings)?;
    let mut out = Vec::new();
    for route in &r.routes {
        let tol = match route.name.as_str() {
            "heat_limit" => HEAT_TOL,
            _ => PV_TOL,
        };
        out.push(Comparison::new("witten_index", &route.name, route.value, reference, tol));
    }
    if let Some(k) = r.fredholm {
        out.push(Comparison::new("witten_index", "fredholm", k as f64, reference, 0.0));
    }
    Ok(out)
}

fn positive(value: Option<i64>, default: i64, name: &str) -> Result<u32> {
    let v = value.unwrap_or(default);
    if v < 1 {
        bail!("--{name} must be a positive integer, got {v}");
    }
    Ok(u32::try_from(v)?)
}

/// Runs one example and returns its comparisons.
pub fn reproduce_example(job: &JobSpec, id: ExampleId, args: &ReproduceArgs) -> Result<ReproduceResult> {
    let mut params = ExampleParams::default();
    let mut comparisons = Vec::new();
    match id {
        ExampleId::Rational => {
            let input = job
                .symbol
                .clone()
                .unwrap_or_else(|| SymbolInput::Expression(DEFAULT_RATIONAL.into()));
            let f = input.build(job.degree)?;
            let Some(SymbolFamily::Rational { zeros, poles, .. }) = f.family().cloned() else {
                bail!("the rational example needs a rational symbol such as {DEFAULT_RATIONAL:?}");
            };
            params.zeros = zeros;
            params.poles = poles;
            let reference = closed_form(id, &params)?;
            comparisons = witten_comparisons(&f, reference, job)?;
        }
        ExampleId::Anyv => {
            params.n = args.n.unwrap_or(0);
            params.alpha = args.alpha.unwrap_or(0.5);
            let f = family_symbol(SymbolFamily::TwistedPower { n: params.n, alpha: params.alpha }, job.degree)?;
            let reference = closed_form(id, &params)?;
            comparisons = witten_comparisons(&f, reference, job)?;
        }
        ExampleId::Gamma => {
            params.p = args.p.unwrap_or(1.0);
            let reference = closed_form(id, &params)?;
            let f = FourierSymbol::from_real_coefficients(&[(0, 1.0), (1, 1.0)])?;
            let phi = ScalarFunction::Power { p: 0.5 * params.p };
            let tol = if params.p >= 2.0 { 1e-6 } else { 1e-4 };
            for route in trace_routes(job, &f, &phi)? {
                comparisons.push(Comparison::new("trace", &route.name, route.value, reference, tol));
            }
        }
        ExampleId::EllipticSmallA | ExampleId::EllipticLargeA => {
            params.a = args.a.unwrap_or(if id == ExampleId::EllipticSmallA { 0.5 } else { 2.0 });
            let reference = closed_form(id, &params)?;
            comparisons.push(Comparison::new(
                "trace",
                "elliptic_quadrature",
                shifted_shift_root_trace_by_quadrature(params.a),
                reference,
                1e-10,
            ));
            let f = family_symbol(SymbolFamily::ShiftPlus { a: Complex64::new(params.a, 0.0) }, job.degree)?;
            for route in trace_routes(job, &f, &ScalarFunction::Power { p: 0.5 })? {
                comparisons.push(Comparison::new("trace", &route.name, route.value, reference, 1e-3));
            }
        }
        ExampleId::ShiftSumEven | ExampleId::ShiftSumOdd => {
            let default = if id == ExampleId::ShiftSumEven { 4 } else { 3 };
            params.n = args.n.unwrap_or(default);
            let reference = closed_form(id, &params)?;
            let f = family_symbol(SymbolFamily::ShiftSum { n: params.n as u32 }, job.degree)?;
            for route in trace_routes(job, &f, &ScalarFunction::Power { p: 0.5 })? {
                comparisons.push(Comparison::new("trace", &route.name, route.value, reference, 1e-3));
            }
        }
        ExampleId::HeltonHoweMonomials => {
            let m = positive(args.m, 3, "m")?;
            let n = positive(args.n, 2, "n")?;
            let h_text = args.h.clone().unwrap_or_else(|| "coeffs{1:1}".into());
            let h = SymbolInput::from_argument(&h_text)?
                .build(job.degree)
                .with_context(|| format!("weight symbol {h_text:?}"))?;
            let coefficient = h.coeff(m as i64 - n as i64);
            params.powers = (m, n);
            params.coefficient = coefficient.re;
            let reference = Complex64::new(closed_form(id, &params)?, m.min(n) as f64 * coefficient.im);
            let left = FourierSymbol::from_real_coefficients(&[(-(m as i64), 1.0)])?;
            let right = FourierSymbol::from_real_coefficients(&[(n as i64, 1.0)])?;
            let matrix = weighted_commutator_trace(&h.truncated(), &left, &right)?;
            let disk = monomial_commutator_integral(&h, m, n, &job.settings)?;
            for (route, value, tol) in [("matrix", matrix, 1e-12), ("disk", disk.value, 1e-8)] {
                let mut c = Comparison::new("weighted_commutator_trace", route, value.re, reference.re, tol);
                c.difference = (value - reference).norm();
                c.pass = c.difference <= tol;
                comparisons.push(c);
            }
        }
    }
    Ok(ReproduceResult { id, params, comparisons })
}

pub fn reproduce(job: &JobSpec, id: ExampleId, args: &ReproduceArgs) -> Result<Report> {
    let result = reproduce_example(job, id, args)?;
    let mut t = Table::new(&["quantity", "route", "computed", "reference", "difference", "tolerance", "verdict"]);
    for c in &result.comparisons {
        t.push(vec![
            c.quantity.clone().into(),
            c.route.clone().into(),
            c.computed.into(),
            c.reference.into(),
            c.difference.into(),
            c.tolerance.into(),
            c.pass.into(),
        ]);
    }
    let passed = result.passed();
    Ok(Report::new(job, &result, t)?
        .with_summary("example", id.name())
        .with_agreement(passed))
}
