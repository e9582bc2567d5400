//! Trace formulas for Toeplitz operators on the Hardy space.
//!
//! The crate computes both sides of the trace identities relating
//! `Tr(phi(T_f^* T_f) - phi(T_f T_f^*))` to integrals of the symbol `f`:
//! exact finite sections of the operator products on one side, and
//! circle, principal-value, disk and Besov integrals on the other.
//! Fredholm and Witten indices and spectral shift functions are computed
//! by several independent routes that can be checked against each other.

pub mod funcalc;
pub mod indices;
pub mod jet;
pub mod linalg;
pub mod operators;
pub mod quadrature;
pub mod suites;
pub mod symbol;

pub use symbol::{FourierSymbol, SymbolError, SymbolFamily, TruncationMode, ZeroProfile};
