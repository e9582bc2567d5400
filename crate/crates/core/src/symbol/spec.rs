//! Serializable description of a symbol.

use super::{FourierSymbol, SymbolError, SymbolFamily, Truncation};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymbolKind {
    Coeffs,
    Family,
}

/// JSON form of a symbol:
/// `{"kind": "coeffs", "coeffs": [[n, re, im], ...]}` or
/// `{"kind": "family", "family": {"variant": ...}, "truncation": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolSpec {
    pub kind: SymbolKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<[f64; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<SymbolFamily>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<Truncation>,
}

impl SymbolSpec {
    pub fn from_coeffs(pairs: &[(i64, Complex64)]) -> Self {
        SymbolSpec {
            kind: SymbolKind::Coeffs,
            coeffs: Some(pairs.iter().map(|(n, c)| [*n as f64, c.re, c.im]).collect()),
            family: None,
            truncation: None,
        }
    }

    pub fn from_family(family: SymbolFamily, truncation: Option<Truncation>) -> Self {
        SymbolSpec {
            kind: SymbolKind::Family,
            coeffs: None,
            family: Some(family),
            truncation,
        }
    }

    /// Builds the symbol; `default_degree` applies to families without an
    /// explicit truncation.
    pub fn build(&self, default_degree: usize) -> Result<FourierSymbol, SymbolError> {
        match self.kind {
            SymbolKind::Coeffs => {
                if self.family.is_some() {
                    return Err(SymbolError::InvalidParameter(
                        "a coefficient symbol cannot also name a family".into(),
                    ));
                }
                let raw = self.coeffs.as_ref().ok_or(SymbolError::EmptyCoefficients)?;
                let mut pairs = Vec::with_capacity(raw.len());
                for [n, re, im] in raw {
                    if n.fract() != 0.0 || !n.is_finite() {
                        return Err(SymbolError::InvalidParameter(format!("coefficient index {n} is not an integer")));
                    }
                    pairs.push((*n as i64, Complex64::new(*re, *im)));
                }
                FourierSymbol::from_coefficients(&pairs)
            }
            SymbolKind::Family => {
                if self.coeffs.is_some() {
                    return Err(SymbolError::InvalidParameter(
                        "a family symbol cannot also list coefficients".into(),
                    ));
                }
                let family = self
                    .family
                    .clone()
                    .ok_or_else(|| SymbolError::InvalidParameter("missing \"family\" block".into()))?;
                let truncation = self.truncation.unwrap_or(Truncation {
                    degree: default_degree,
                    ..Truncation::default()
                });
                FourierSymbol::from_family(family, truncation.degree, truncation.mode)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_round_trips() {
        let text = r#"{"kind":"family","family":{"variant":"twisted_power","n":2,"alpha":1.5},"truncation":{"degree":64,"mode":"fejer"}}"#;
        let spec: SymbolSpec = serde_json::from_str(text).unwrap();
        let back: SymbolSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(spec, back);
        let f = spec.build(256).unwrap();
        assert_eq!(f.truncation().unwrap().degree, 64);
    }

    #[test]
    fn rejects_unknown_keys() {
        let text = r#"{"kind":"coeffs","coeffs":[[1,1,0]],"extra":1}"#;
        assert!(serde_json::from_str::<SymbolSpec>(text).is_err());
        let text = r#"{"kind":"family","family":{"variant":"shift_sum","n":3,"bogus":1}}"#;
        assert!(serde_json::from_str::<SymbolSpec>(text).is_err());
    }

    #[test]
    fn coefficient_spec_builds() {
        let spec: SymbolSpec = serde_json::from_str(r#"{"kind":"coeffs","coeffs":[[-2,0,3]]}"#).unwrap();
        let f = spec.build(256).unwrap();
        assert_eq!(f.degree(), 2);
        assert_eq!(f.coeff(-2), Complex64::new(0.0, 3.0));
    }
}
