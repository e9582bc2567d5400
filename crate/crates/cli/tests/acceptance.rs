//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines show up in `cargo test` output.

use std::f64::consts::PI;
use std::time::Instant;
use toeplitz_trace::funcalc::ScalarFunction;
use toeplitz_trace::indices::closed_forms::{gamma_trace, shift_sum_root_trace};
use toeplitz_trace::indices::{krein_check, power_limit, ExampleId};
use toeplitz_trace::quadrature::{besov_integral, BesovVerdict, QuadratureSettings};
use toeplitz_trace::suites;
use toeplitz_trace::{FourierSymbol, SymbolFamily, TruncationMode};
use toeplitz_trace_cli::job::{Command, JobSpec, ReproduceArgs, SymbolInput};
use toeplitz_trace_cli::reproduce::{reproduce_example, ReproduceResult};

const SEED: u64 = 20240611;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn example(id: ExampleId, args: ReproduceArgs, size: usize, symbol: Option<&str>) -> ReproduceResult {
    let mut job = JobSpec::new(Command::Reproduce { id, args: args.clone() });
    job.size = size;
    job.symbol = symbol.map(|s| SymbolInput::Expression(s.into()));
    reproduce_example(&job, id, &args).unwrap_or_else(|e| panic!("{}: {e:#}", id.name()))
}

/// Worst difference over the comparisons, and the failing ones.
fn summarize(results: &[ReproduceResult]) -> (bool, f64, Vec<String>) {
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for r in results {
        for c in &r.comparisons {
            worst = worst.max(c.difference / c.tolerance.max(f64::MIN_POSITIVE));
            if !c.pass {
                failures.push(format!(
                    "{} {}: {} vs {} (diff {:e} > {:e})",
                    r.id.name(),
                    c.route,
                    c.computed,
                    c.reference,
                    c.difference,
                    c.tolerance
                ));
            }
        }
    }
    (failures.is_empty() && !results.is_empty(), worst, failures)
}

fn from_results(results: &[ReproduceResult], what: &str) -> Outcome {
    let (pass, worst, failures) = summarize(results);
    let detail = if failures.is_empty() {
        format!("{what}; worst difference/tolerance {worst:.2e}")
    } else {
        failures.join("; ")
    };
    outcome(pass, detail)
}

fn gamma_formula() -> Outcome {
    let results: Vec<_> = [1.0, 2.0, 3.0, 4.0]
        .into_iter()
        .map(|p| {
            let args = ReproduceArgs { p: Some(p), ..Default::default() };
            example(ExampleId::Gamma, args, 512, None)
        })
        .collect();
    let reference_ok = (gamma_trace(1.0).unwrap() - 2.0 / PI).abs() < 1e-14 && (gamma_trace(2.0).unwrap() - 1.0).abs() < 1e-14;
    let mut o = from_results(&results, "p in {1,2,3,4}, N = 512, matrix/operator-monotone/boundary/disk");
    o.pass &= reference_ok;
    o
}

fn twisted_witten() -> Outcome {
    let mut results = Vec::new();
    for n in [0, 1, 2] {
        for alpha in [0.5, 1.0, 1.5] {
            let args = ReproduceArgs { n: Some(n), alpha: Some(alpha), ..Default::default() };
            results.push(example(ExampleId::Anyv, args, 256, None));
        }
    }
    from_results(&results, "9 symbols, pv within 1e-8, heat limit within 2e-2")
}

fn rational_closed_form() -> Outcome {
    let symbols = ["(z+1)*(z-0.5)/(z-2)", "(z-0.5)*(z-3)/(z-0.25)", "(z-0.25)^2*(z+2)/(z-4)"];
    let results: Vec<_> = symbols
        .iter()
        .map(|s| example(ExampleId::Rational, ReproduceArgs::default(), 256, Some(s)))
        .collect();
    let mut o = from_results(&results, "3 rational symbols, one with a circle zero");
    let circle = results[0].params.zeros.iter().any(|z| (z.at.norm() - 1.0).abs() < 1e-12);
    o.pass &= circle;
    o
}

fn helton_howe() -> Outcome {
    let suite = suites::helton_howe_suite(SEED, 20, 16, 1e-10).unwrap();
    let h = "coeffs{-3:0.7, -2:-1.25, -1:2, 0:1, 1:-1.5, 2:0.25, 3:3}";
    let mut results = Vec::new();
    for m in 1..=4 {
        for n in 1..=4 {
            let args = ReproduceArgs {
                m: Some(m),
                n: Some(n),
                h: Some(h.into()),
                ..Default::default()
            };
            results.push(example(ExampleId::HeltonHoweMonomials, args, 256, None));
        }
    }
    let (monomials, worst, failures) = summarize(&results);
    outcome(
        suite.passed() && monomials,
        format!(
            "{} random pairs, worst |Tr[T_f,T_g] - omega| {:.1e}; 16 monomial pairs, worst difference/tolerance {:.1e}{}",
            suite.trials,
            suite.worst,
            worst,
            if failures.is_empty() { String::new() } else { format!("; {}", failures.join("; ")) }
        ),
    )
}

fn heat_identity() -> Outcome {
    let r = suites::heat_identity_suite(SEED, 20, 8, &[0.5, 1.0, 5.0, 20.0], 1e-6).unwrap();
    outcome(
        r.passed(),
        format!("{} (symbol, s) pairs, {} violations, worst {:.1e}", r.trials, r.violations, r.worst),
    )
}

fn krein_four_way() -> Outcome {
    let settings = QuadratureSettings::default();
    let symbols = [
        ("e^{it}", FourierSymbol::from_real_coefficients(&[(1, 1.0)]).unwrap()),
        ("1+e^{it}", FourierSymbol::from_real_coefficients(&[(0, 1.0), (1, 1.0)]).unwrap()),
    ];
    let functions = [
        ScalarFunction::Polynomial { coefficients: vec![0.0, 0.0, 1.0] },
        ScalarFunction::ExpHeat { s: 1.0 },
    ];
    let mut pass = true;
    let mut worst: f64 = 0.0;
    let mut notes = Vec::new();
    for (name, f) in &symbols {
        for phi in &functions {
            let r = krein_check(f, phi, 128, 2e-3, &settings).unwrap();
            pass &= r.agreement && r.routes.len() == 4;
            worst = worst.max(r.max_discrepancy);
            if !r.agreement || r.routes.len() != 4 {
                notes.push(format!("{name} {}: {:?}", r.function, r.routes));
            }
        }
    }
    outcome(pass, format!("4 cases, 4 routes each, worst discrepancy {worst:.1e}{}", notes.join("; ")))
}

fn elliptic() -> Outcome {
    let results = vec![
        example(ExampleId::EllipticSmallA, ReproduceArgs { a: Some(0.5), ..Default::default() }, 256, None),
        example(ExampleId::EllipticLargeA, ReproduceArgs { a: Some(2.0), ..Default::default() }, 256, None),
    ];
    from_results(&results, "a in {0.5, 2}")
}

fn shift_sums() -> Outcome {
    let results: Vec<_> = [2i64, 3, 4, 5]
        .into_iter()
        .map(|n| {
            let id = if n % 2 == 0 { ExampleId::ShiftSumEven } else { ExampleId::ShiftSumOdd };
            example(id, ReproduceArgs { n: Some(n), ..Default::default() }, 256, None)
        })
        .collect();
    let mut o = from_results(&results, "n in {2,3,4,5}");
    let cross = (shift_sum_root_trace(2) - gamma_trace(1.0).unwrap()).abs();
    o.pass &= cross < 1e-12;
    o.detail.push_str(&format!("; n = 2 vs gamma p = 1: {cross:.1e}"));
    o
}

fn besov_verdicts() -> Outcome {
    let settings = QuadratureSettings::default();
    let family = |fam: SymbolFamily| FourierSymbol::from_family(fam, 256, TruncationMode::Raw).unwrap();
    // (symbol, p, accepted verdicts)
    let cases: Vec<(&str, FourierSymbol, f64, Vec<BesovVerdict>)> = vec![
        ("(1+z)^0.5", family(SymbolFamily::TwistedPower { n: 0, alpha: 0.5 }), 0.3, vec![BesovVerdict::Finite]),
        ("(1+z)^0.5", family(SymbolFamily::TwistedPower { n: 0, alpha: 0.5 }), 1.5, vec![BesovVerdict::Finite]),
        ("psi^1", family(SymbolFamily::PsiPower { alpha: 1.0 }), 0.4, vec![BesovVerdict::Divergent]),
        ("psi^1", family(SymbolFamily::PsiPower { alpha: 1.0 }), 0.6, vec![BesovVerdict::Finite]),
        ("1/(1-log psi)", family(SymbolFamily::InvLogPsi { c: 1.0 }), 0.9, vec![BesovVerdict::Divergent]),
        (
            "1/(1-log psi)",
            family(SymbolFamily::InvLogPsi { c: 1.0 }),
            1.0,
            vec![BesovVerdict::Finite, BesovVerdict::Marginal],
        ),
        ("1/(1-log psi)", family(SymbolFamily::InvLogPsi { c: 1.0 }), 1.1, vec![BesovVerdict::Finite]),
    ];
    let mut pass = true;
    let mut notes = Vec::new();
    for (name, f, p, accepted) in cases {
        let n = (2.0 / p).ceil() as usize;
        let r = besov_integral(&f, p, n, &settings).unwrap();
        let ok = accepted.contains(&r.verdict);
        pass &= ok;
        notes.push(format!("{name} p={p}: {:?}{}", r.verdict, if ok { "" } else { " (unexpected)" }).to_lowercase());
    }
    outcome(pass, notes.join(", "))
}

fn property_suites() -> Outcome {
    let reports = [
        suites::qtrace_suite(SEED, 200, 8).unwrap(),
        suites::krein_algebra_suite(SEED, 50, 16).unwrap(),
        suites::winding_suite(SEED, 20).unwrap(),
        suites::index_collapse_guard(&ScalarFunction::Power { p: 0.5 }, 64).unwrap(),
        suites::index_collapse_guard(&ScalarFunction::ExpHeat { s: 1.0 }, 64).unwrap(),
    ];
    let pass = reports.iter().all(|r| r.passed());
    let detail = reports
        .iter()
        .map(|r| format!("{} {}/{} violations", r.name, r.violations, r.trials))
        .collect::<Vec<_>>()
        .join(", ");
    outcome(pass, detail)
}

fn power_limit_corollary() -> Outcome {
    let f = FourierSymbol::from_real_coefficients(&[(0, 1.0), (1, 1.0)]).unwrap();
    let route = power_limit(&f, &QuadratureSettings::default()).unwrap();
    let witten = -0.5;
    let limit = -route.value;
    let diff = (route.value - witten).abs();
    outcome(
        diff <= 2e-2,
        format!("lim Tr(|T|^p - |T*|^p) = {limit:.6} (error {:.1e}), -ind_W = {}", route.error, -witten),
    )
}

fn main() {
    // Only `cargo test`'s plain invocation runs the criteria; listing and
    // filtered runs see no tests.
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    if args.iter().any(|a| !a.starts_with('-') && !"acceptance".contains(a.as_str())) {
        return;
    }
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("gamma formula", gamma_formula),
        ("twisted power Witten index", twisted_witten),
        ("rational closed form", rational_closed_form),
        ("Helton-Howe identity", helton_howe),
        ("exact heat identity", heat_identity),
        ("Krein four-way check", krein_four_way),
        ("elliptic examples", elliptic),
        ("shift-sum tan formulas", shift_sums),
        ("Besov verdicts", besov_verdicts),
        ("property suites", property_suites),
        ("p -> 0 Witten limit", power_limit_corollary),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        if !o.pass {
            failed += 1;
        }
        println!(
            "{verdict} criterion {:>2} {name}: {} [{:.1}s]",
            i + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
