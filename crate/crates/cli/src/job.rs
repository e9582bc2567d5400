//! Job descriptions: what to compute, on which symbol, and where to write
//! it. A job is assembled from command-line flags, optionally on top of a
//! JSON configuration file, and validated before it runs.

use crate::expr::{parse_symbol_expression, ParsedSymbol};
use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use toeplitz_trace::funcalc::ScalarFunction;
use toeplitz_trace::indices::ExampleId;
use toeplitz_trace::quadrature::QuadratureSettings;
use toeplitz_trace::symbol::spec::SymbolSpec;
use toeplitz_trace::{FourierSymbol, TruncationMode};

pub const DEFAULT_DEGREE: usize = 256;
pub const DEFAULT_SIZE: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum MatrixKind {
    /// The section of `T_f^* T_f`.
    #[default]
    A,
    /// The section of `T_f T_f^*`.
    B,
    /// `A - B`.
    Difference,
    /// The plain Toeplitz section.
    Toeplitz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum MatrixEncoding {
    #[default]
    Csv,
    Binary,
}

/// A symbol given as an expression or as a JSON description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SymbolInput {
    Expression(String),
    Spec(SymbolSpec),
}

impl SymbolInput {
    /// Reads a `--symbol` argument: inline JSON, a path to a JSON file, or an
    /// expression.
    pub fn from_argument(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        if trimmed.starts_with('{') {
            let spec = serde_json::from_str(trimmed).context("parsing inline symbol JSON")?;
            return Ok(SymbolInput::Spec(spec));
        }
        let path = Path::new(trimmed);
        if path.is_file() {
            let contents = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let spec = serde_json::from_str(&contents).with_context(|| format!("parsing symbol file {}", path.display()))?;
            return Ok(SymbolInput::Spec(spec));
        }
        Ok(SymbolInput::Expression(trimmed.to_string()))
    }

    pub fn build(&self, degree: usize) -> Result<FourierSymbol> {
        match self {
            SymbolInput::Spec(spec) => Ok(spec.build(degree)?),
            SymbolInput::Expression(text) => {
                match parse_symbol_expression(text).map_err(|e| anyhow!("symbol expression {text:?}: {e}"))? {
                    ParsedSymbol::Family(family) => Ok(FourierSymbol::from_family(family, degree, TruncationMode::Raw)?),
                    ParsedSymbol::Explicit(symbol) => Ok(symbol),
                }
            }
        }
    }
}

/// Parses `power:0.5`, `exp:1`, `poly:0,0,1`, `resolvent:2`, or a JSON
/// function description.
pub fn parse_function(text: &str) -> Result<ScalarFunction> {
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        let phi: ScalarFunction = serde_json::from_str(trimmed).context("parsing function JSON")?;
        phi.validate()?;
        return Ok(phi);
    }
    let (name, value) = trimmed
        .split_once(':')
        .ok_or_else(|| anyhow!("function {trimmed:?} is not of the form name:value"))?;
    let number = |v: &str| -> Result<f64> { v.trim().parse().with_context(|| format!("bad number {v:?} in {trimmed:?}")) };
    let phi = match name.trim() {
        "power" => ScalarFunction::Power { p: number(value)? },
        "exp" | "exp_heat" => ScalarFunction::ExpHeat { s: number(value)? },
        "resolvent" => ScalarFunction::Resolvent { lambda: number(value)? },
        "poly" | "polynomial" => ScalarFunction::Polynomial {
            coefficients: value.split(',').map(number).collect::<Result<_>>()?,
        },
        other => bail!("unknown function {other:?}; expected power, exp, resolvent or poly"),
    };
    phi.validate()?;
    Ok(phi)
}

/// Parameters of `reproduce`; absent values take per-example defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReproduceArgs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Weight symbol of the Helton-Howe monomial example.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Command {
    Index,
    Witten,
    Trace {
        function: ScalarFunction,
    },
    Heat {
        s: f64,
    },
    Ssf {
        /// Number of evenly spaced points in `(0, sup |f|^2]`.
        #[serde(default = "default_grid")]
        grid: usize,
        /// Explicit points, used instead of the even grid.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        points: Option<Vec<f64>>,
    },
    Besov {
        p: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
    },
    KreinCheck {
        function: ScalarFunction,
    },
    Reproduce {
        id: ExampleId,
        #[serde(default)]
        args: ReproduceArgs,
    },
    DumpMatrix {
        #[serde(default)]
        matrix: MatrixKind,
        #[serde(default)]
        encoding: MatrixEncoding,
    },
    Suites {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        trials: Option<usize>,
    },
}

fn default_grid() -> usize {
    16
}

fn default_degree() -> usize {
    DEFAULT_DEGREE
}

fn default_size() -> usize {
    DEFAULT_SIZE
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol: Option<SymbolInput>,
    /// Truncation degree for infinite-series symbols.
    #[serde(default = "default_degree")]
    pub degree: usize,
    /// Section size of the matrix routes.
    #[serde(default = "default_size")]
    pub size: usize,
    #[serde(default)]
    pub settings: QuadratureSettings,
    /// Agreement tolerance; each command has its own default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl JobSpec {
    pub fn new(command: Command) -> Self {
        JobSpec {
            command,
            symbol: None,
            degree: DEFAULT_DEGREE,
            size: DEFAULT_SIZE,
            settings: QuadratureSettings::default(),
            tolerance: None,
            seed: 0,
            format: OutputFormat::default(),
            out: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let job: JobSpec = serde_json::from_str(text).context("parsing job JSON")?;
        job.validate()?;
        Ok(job)
    }

    pub fn validate(&self) -> Result<()> {
        if self.degree == 0 {
            bail!("degree must be positive");
        }
        if self.size < 2 {
            bail!("size must be at least 2");
        }
        if self.settings.circle_nodes < 16 || self.settings.rings == 0 {
            bail!("quadrature settings need circle_nodes >= 16 and rings >= 1");
        }
        if !(self.settings.eps0_fraction > 0.0 && self.settings.eps0_fraction < 1.0) {
            bail!("eps0_fraction must lie in (0, 1)");
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0 && t.is_finite()) {
                bail!("tolerance must be positive");
            }
        }
        match &self.command {
            Command::Trace { function } | Command::KreinCheck { function } => function.validate()?,
            Command::Heat { s } if !(*s >= 0.0 && s.is_finite()) => bail!("heat parameter s must be nonnegative"),
            Command::Ssf { grid, points } => {
                if points.is_none() && *grid == 0 {
                    bail!("ssf grid must have at least one point");
                }
                if let Some(points) = points {
                    if points.is_empty() || points.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
                        bail!("ssf points must be positive");
                    }
                }
            }
            Command::Besov { p, n } => {
                if !(*p > 0.0 && p.is_finite()) {
                    bail!("besov p must be positive");
                }
                if let Some(n) = n {
                    if *p * *n as f64 <= 1.0 {
                        bail!("besov needs p * n > 1, got p = {p}, n = {n}");
                    }
                }
            }
            Command::DumpMatrix { encoding, .. } => {
                if *encoding == MatrixEncoding::Binary && self.out.is_none() {
                    bail!("binary matrix dumps need --out");
                }
            }
            _ => {}
        }
        if self.needs_symbol() && self.symbol.is_none() {
            bail!("this command needs --symbol");
        }
        Ok(())
    }

    pub fn needs_symbol(&self) -> bool {
        !matches!(self.command, Command::Reproduce { .. } | Command::Suites { .. })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn functions() {
        assert_eq!(parse_function("power:0.5").unwrap(), ScalarFunction::Power { p: 0.5 });
        assert_eq!(parse_function("exp:1").unwrap(), ScalarFunction::ExpHeat { s: 1.0 });
        assert_eq!(
            parse_function("poly:0,0,1").unwrap(),
            ScalarFunction::Polynomial { coefficients: vec![0.0, 0.0, 1.0] }
        );
        assert_eq!(
            parse_function(r#"{"variant":"resolvent","lambda":2}"#).unwrap(),
            ScalarFunction::Resolvent { lambda: 2.0 }
        );
        assert!(parse_function("power:-1").is_err());
        assert!(parse_function("sin:1").is_err());
    }

    #[test]
    fn job_round_trip_and_unknown_keys() {
        let mut job = JobSpec::new(Command::Ssf { grid: 32, points: None });
        job.symbol = Some(SymbolInput::Expression("1+z".into()));
        job.format = OutputFormat::Csv;
        let text = serde_json::to_string(&job).unwrap();
        assert_eq!(JobSpec::from_json(&text).unwrap(), job);
        let bad = text.replacen('{', r#"{"bogus":1,"#, 1);
        assert!(JobSpec::from_json(&bad).is_err());
        let missing = r#"{"command":{"name":"witten"}}"#;
        assert!(JobSpec::from_json(missing).is_err());
    }

    #[test]
    fn symbol_arguments() {
        let spec = SymbolInput::from_argument(r#"{"kind":"coeffs","coeffs":[[1,1,0]]}"#).unwrap();
        assert!(matches!(spec, SymbolInput::Spec(_)));
        assert_eq!(spec.build(8).unwrap().degree(), 1);
        let expr = SymbolInput::from_argument("z^2*(1+z)^1.5").unwrap();
        assert_eq!(expr, SymbolInput::Expression("z^2*(1+z)^1.5".into()));
    }
}
