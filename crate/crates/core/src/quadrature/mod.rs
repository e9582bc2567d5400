//! Integral sides of the trace formulas: circle, principal-value, disk and
//! Besov integrals.

pub mod besov;
pub mod circle;
pub mod disk;
pub mod extrapolate;
pub mod rules;

pub use besov::{besov_integral, BesovReport, BesovVerdict};
pub use circle::{
    boundary_trace_integral, circle_integral, heat_integral, principal_value_integral, singular_angles,
};
pub use disk::{disk_trace_integral, monomial_commutator_integral, DiskMode};

use crate::funcalc::FuncalcError;
use crate::symbol::SymbolError;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("integrand is not finite at t = {at}")]
    NotFinite { at: f64 },
    #[error("function has no finite value at 0: {0}")]
    SingularAtZero(String),
    #[error("principal-value sequence does not converge: {0}")]
    NonConvergent(String),
    #[error("Besov integral needs p * n > 1, got p = {p}, n = {n}")]
    BesovHypothesis { p: f64, n: usize },
    #[error("function derivative is unbounded at a singularity that cannot be excised: {0}")]
    NonExcisable(String),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Funcalc(#[from] FuncalcError),
}

/// A quadrature value with an honest refinement-based error estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub nodes_used: usize,
    pub method: String,
}

impl QuadratureResult {
    pub(crate) fn from_integral(integral: rules::Integral, method: impl Into<String>) -> Self {
        QuadratureResult {
            value: integral.value,
            abs_error_estimate: integral.error,
            nodes_used: integral.evaluations,
            method: method.into(),
        }
    }
}

/// Settings block of the configuration file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureSettings {
    /// Starting node count for circle integrals.
    pub circle_nodes: usize,
    /// Panel budget for the radial direction of disk integrals.
    pub rings: usize,
    /// First principal-value excision radius as a fraction of the zero
    /// window.
    pub eps0_fraction: f64,
    /// Number of halvings of the excision radius.
    pub pv_levels: usize,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        QuadratureSettings {
            circle_nodes: 4096,
            rings: 512,
            eps0_fraction: 0.25,
            pv_levels: 6,
        }
    }
}
