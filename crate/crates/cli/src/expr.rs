//! Symbol expressions such as `z^2*(1+z)^1.5`, `(z-0.5)/(z-2)` or
//! `coeffs{-1:1, 1:1}`.
//!
//! ```text
//! expr := term (("*" | "/") term)*
//! term := "z" ["^" int] | "(" poly ")" ["^" float] | "coeffs{" pairs "}" | float
//! poly := ["+" | "-"] mono (("+" | "-") mono)*
//! mono := float ["*"] ["z" ["^" int]] | "z" ["^" int]
//! pairs := int ":" float ("," int ":" float)*
//! ```
//!
//! A bare polynomial such as `1+z` is read as `(1+z)`.

use num_complex::Complex64;
use std::fmt;
use toeplitz_trace::linalg::polynomial_roots;
use toeplitz_trace::symbol::family::Root;
use toeplitz_trace::{FourierSymbol, SymbolFamily};

/// Roots closer than this are merged into one root with multiplicity.
const ROOT_MERGE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    /// Byte offset into the expression.
    pub position: usize,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "at position {}: expected {}, found {}",
            self.position, self.expected, self.found
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
pub enum ParsedSymbol {
    Family(SymbolFamily),
    Explicit(FourierSymbol),
}

#[derive(Debug, Clone, PartialEq)]
enum Factor {
    Monomial(i64),
    Scalar(f64),
    /// Ascending coefficients and a real exponent.
    Poly(Vec<f64>, f64),
    Coeffs(Vec<(i64, f64)>),
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { text, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.rest().chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn error(&mut self, expected: &str) -> ParseError {
        self.skip_ws();
        let found = match self.rest().chars().next() {
            Some(c) => format!("'{c}'"),
            None => "end of input".into(),
        };
        ParseError {
            position: self.pos,
            expected: expected.into(),
            found,
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("'{c}'")))
        }
    }

    fn number_text(&mut self, allow_sign: bool, allow_fraction: bool) -> Option<&'a str> {
        self.skip_ws();
        let bytes = self.rest().as_bytes();
        let mut i = 0;
        if allow_sign && i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
            i += 1;
        }
        let digits_start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let mut digits = i - digits_start;
        if allow_fraction {
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                digits += i - start;
            }
            if digits > 0 && i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                let start = j;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                if j > start {
                    i = j;
                }
            }
        }
        if digits == 0 {
            return None;
        }
        let text = &self.rest()[..i];
        self.pos += i;
        Some(text)
    }

    fn float(&mut self, allow_sign: bool) -> Result<f64, ParseError> {
        let start = self.pos;
        match self.number_text(allow_sign, true) {
            Some(t) => t.parse().map_err(|_| ParseError {
                position: start,
                expected: "a number".into(),
                found: format!("'{t}'"),
            }),
            None => Err(self.error("a number")),
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        let start = self.pos;
        match self.number_text(true, false) {
            Some(t) => t.parse().map_err(|_| ParseError {
                position: start,
                expected: "an integer".into(),
                found: format!("'{t}'"),
            }),
            None => Err(self.error("an integer")),
        }
    }

    fn starts_number(&mut self) -> bool {
        matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == '.')
    }

    fn expr(&mut self) -> Result<Vec<(Factor, bool)>, ParseError> {
        let mut factors = vec![(self.term()?, false)];
        loop {
            if self.eat('*') {
                factors.push((self.term()?, false));
            } else if self.eat('/') {
                factors.push((self.term()?, true));
            } else {
                break;
            }
        }
        if self.peek().is_some() {
            return Err(self.error("'*', '/' or end of input"));
        }
        Ok(factors)
    }

    fn term(&mut self) -> Result<Factor, ParseError> {
        match self.peek() {
            Some('z') => {
                self.pos += 1;
                let k = if self.eat('^') { self.int()? } else { 1 };
                Ok(Factor::Monomial(k))
            }
            Some('(') => {
                self.pos += 1;
                let poly = self.poly()?;
                self.expect(')')?;
                let exponent = if self.eat('^') { self.float(true)? } else { 1.0 };
                Ok(Factor::Poly(poly, exponent))
            }
            Some('c') if self.rest().starts_with("coeffs") => {
                self.pos += "coeffs".len();
                self.expect('{')?;
                let mut pairs = Vec::new();
                loop {
                    let k = self.int()?;
                    self.expect(':')?;
                    let v = self.float(true)?;
                    pairs.push((k, v));
                    if !self.eat(',') {
                        break;
                    }
                }
                self.expect('}')?;
                Ok(Factor::Coeffs(pairs))
            }
            _ if self.starts_number() => Ok(Factor::Scalar(self.float(false)?)),
            _ => Err(self.error("'z', '(', 'coeffs{' or a number")),
        }
    }

    fn poly(&mut self) -> Result<Vec<f64>, ParseError> {
        let mut coeffs: Vec<f64> = Vec::new();
        let mut first = true;
        loop {
            let sign = if self.eat('+') {
                1.0
            } else if self.eat('-') {
                -1.0
            } else if first {
                1.0
            } else {
                break;
            };
            first = false;
            let (c, k) = self.mono()?;
            if k < 0 {
                return Err(ParseError {
                    position: self.pos,
                    expected: "a nonnegative power inside a polynomial".into(),
                    found: format!("z^{k}"),
                });
            }
            let k = k as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, 0.0);
            }
            coeffs[k] += sign * c;
        }
        Ok(coeffs)
    }

    fn mono(&mut self) -> Result<(f64, i64), ParseError> {
        let number = self.starts_number();
        let c = if number {
            let c = self.float(false)?;
            self.eat('*');
            c
        } else {
            1.0
        };
        if self.eat('z') {
            let k = if self.eat('^') { self.int()? } else { 1 };
            Ok((c, k))
        } else if number {
            Ok((c, 0))
        } else {
            Err(self.error("a number or 'z'"))
        }
    }
}

/// Parses an expression into a family (when it names one) or an explicit
/// coefficient symbol.
pub fn parse_symbol_expression(text: &str) -> Result<ParsedSymbol, ParseError> {
    let factors = match Parser::new(text).expr() {
        Ok(f) => f,
        Err(first) => match Parser::new(&format!("({text})")).expr() {
            Ok(f) => f,
            Err(_) => return Err(first),
        },
    };
    build(factors, text)
}

fn semantic(text: &str, expected: &str, found: String) -> ParseError {
    ParseError {
        position: text.len(),
        expected: expected.into(),
        found,
    }
}

fn build(factors: Vec<(Factor, bool)>, text: &str) -> Result<ParsedSymbol, ParseError> {
    let mut twist = 0i64;
    let mut scale = 1.0;
    let mut polys = Vec::new();
    let mut explicit: Option<Vec<(i64, f64)>> = None;
    for (factor, divide) in factors {
        match factor {
            Factor::Monomial(k) => twist += if divide { -k } else { k },
            Factor::Scalar(c) => {
                if divide && c == 0.0 {
                    return Err(semantic(text, "a nonzero divisor", "0".into()));
                }
                scale = if divide { scale / c } else { scale * c };
            }
            Factor::Poly(c, e) => {
                if c.iter().all(|&v| v == 0.0) {
                    return Err(semantic(text, "a nonzero polynomial", "0".into()));
                }
                polys.push((c, if divide { -e } else { e }));
            }
            Factor::Coeffs(pairs) => {
                if divide {
                    return Err(semantic(text, "coeffs{...} only as a multiplier", "division by coeffs".into()));
                }
                explicit = Some(match explicit {
                    None => pairs,
                    Some(prev) => multiply_pairs(&prev, &pairs),
                });
            }
        }
    }
    if let Some(pairs) = explicit {
        let mut product: Vec<(i64, f64)> = pairs.iter().map(|&(k, v)| (k + twist, v * scale)).collect();
        for (c, e) in polys {
            if e.fract() != 0.0 || e < 0.0 {
                return Err(semantic(
                    text,
                    "nonnegative integer powers next to coeffs{...}",
                    format!("power {e}"),
                ));
            }
            let poly: Vec<(i64, f64)> = c.iter().enumerate().map(|(k, &v)| (k as i64, v)).collect();
            for _ in 0..e as u32 {
                product = multiply_pairs(&product, &poly);
            }
        }
        let symbol = FourierSymbol::from_real_coefficients(&product)
            .map_err(|e| semantic(text, "a valid coefficient list", e.to_string()))?;
        return Ok(ParsedSymbol::Explicit(symbol));
    }
    if let [(c, alpha)] = polys.as_slice() {
        if c.as_slice() == [1.0, 1.0] && scale == 1.0 && *alpha > 0.0 && (alpha.fract() != 0.0 || twist >= 0) {
            return Ok(ParsedSymbol::Family(SymbolFamily::TwistedPower { n: twist, alpha: *alpha }));
        }
    }
    let mut zeros = Vec::new();
    let mut poles = Vec::new();
    let mut lead = Complex64::new(scale, 0.0);
    match twist {
        k if k > 0 => zeros.push(Root { at: Complex64::new(0.0, 0.0), multiplicity: k as u32 }),
        k if k < 0 => poles.push(Root { at: Complex64::new(0.0, 0.0), multiplicity: (-k) as u32 }),
        _ => {}
    }
    for (c, e) in &polys {
        if e.fract() != 0.0 {
            return Err(semantic(
                text,
                "integer powers, except for a lone (1+z)^alpha",
                format!("power {e}"),
            ));
        }
        let ascending: Vec<Complex64> = c.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let top = c.iter().rposition(|&v| v != 0.0).unwrap_or(0);
        let roots = polynomial_roots(&ascending[..=top]).map_err(|e| semantic(text, "polynomial roots", e.to_string()))?;
        let power = e.abs() as u32;
        lead *= Complex64::new(c[top], 0.0).powi(*e as i32);
        for root in merge_roots(&roots) {
            let r = Root { at: root.at, multiplicity: root.multiplicity * power };
            if *e > 0.0 {
                zeros.push(r);
            } else if *e < 0.0 {
                poles.push(r);
            }
        }
    }
    Ok(ParsedSymbol::Family(SymbolFamily::Rational { scale: lead, zeros, poles }))
}

fn multiply_pairs(a: &[(i64, f64)], b: &[(i64, f64)]) -> Vec<(i64, f64)> {
    let mut out: Vec<(i64, f64)> = Vec::new();
    for &(j, x) in a {
        for &(k, y) in b {
            match out.iter_mut().find(|(n, _)| *n == j + k) {
                Some(entry) => entry.1 += x * y,
                None => out.push((j + k, x * y)),
            }
        }
    }
    out.sort_by_key(|p| p.0);
    out
}

/// Groups numerically repeated roots and replaces each group by its mean.
fn merge_roots(roots: &[Complex64]) -> Vec<Root> {
    let mut groups: Vec<(Complex64, u32)> = Vec::new();
    for &r in roots {
        match groups
            .iter_mut()
            .find(|(c, m)| (*c / *m as f64 - r).norm() < ROOT_MERGE_TOL * (1.0 + r.norm()))
        {
            Some(g) => {
                g.0 += r;
                g.1 += 1;
            }
            None => groups.push((r, 1)),
        }
    }
    groups
        .into_iter()
        .map(|(sum, m)| {
            let mut at = sum / m as f64;
            if at.im.abs() < 1e-14 * (1.0 + at.re.abs()) {
                at.im = 0.0;
            }
            Root { at, multiplicity: m }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn family(text: &str) -> SymbolFamily {
        match parse_symbol_expression(text).unwrap() {
            ParsedSymbol::Family(f) => f,
            other => panic!("{text}: {other:?}"),
        }
    }

    #[test]
    fn twisted_powers() {
        assert_eq!(family("z^2*(1+z)^1.5"), SymbolFamily::TwistedPower { n: 2, alpha: 1.5 });
        assert_eq!(family("z^0*(1+z)^1"), SymbolFamily::TwistedPower { n: 0, alpha: 1.0 });
        assert_eq!(family("1+z"), SymbolFamily::TwistedPower { n: 0, alpha: 1.0 });
        assert_eq!(family("(z+1)^0.5"), SymbolFamily::TwistedPower { n: 0, alpha: 0.5 });
    }

    #[test]
    fn rational() {
        let SymbolFamily::Rational { scale, zeros, poles } = family("(z-0.5)/(z-2)") else {
            panic!()
        };
        assert_eq!(scale, Complex64::new(1.0, 0.0));
        assert_eq!(zeros, vec![Root { at: Complex64::new(0.5, 0.0), multiplicity: 1 }]);
        assert_eq!(poles, vec![Root { at: Complex64::new(2.0, 0.0), multiplicity: 1 }]);
        let SymbolFamily::Rational { zeros, .. } = family("(1 + 2z + z^2)") else {
            panic!()
        };
        assert_eq!(zeros.len(), 1);
        assert_eq!(zeros[0].multiplicity, 2);
        assert!((zeros[0].at + 1.0).norm() < 1e-7);
        let SymbolFamily::Rational { scale, zeros, poles } = family("3*z^-1*(2z-1)") else {
            panic!()
        };
        assert_eq!(scale, Complex64::new(6.0, 0.0));
        assert_eq!(zeros[0].at, Complex64::new(0.5, 0.0));
        assert_eq!(poles[0].multiplicity, 1);
    }

    #[test]
    fn explicit_coefficients() {
        let ParsedSymbol::Explicit(f) = parse_symbol_expression("coeffs{-1:1, 1:1}").unwrap() else {
            panic!()
        };
        assert_eq!(f.coeff(-1), Complex64::new(1.0, 0.0));
        assert_eq!(f.coeff(1), Complex64::new(1.0, 0.0));
        assert_eq!(f.coeff(0), Complex64::new(0.0, 0.0));
        let ParsedSymbol::Explicit(f) = parse_symbol_expression("2*z*coeffs{0:1}*(1+z)").unwrap() else {
            panic!()
        };
        assert_eq!(f.coeff(1), Complex64::new(2.0, 0.0));
        assert_eq!(f.coeff(2), Complex64::new(2.0, 0.0));
    }

    #[test]
    fn errors_carry_position() {
        let e = parse_symbol_expression("z^2*(1+z").unwrap_err();
        assert_eq!(e.position, 8);
        assert!(e.expected.contains("')'"), "{e}");
        let e = parse_symbol_expression("z^2 * q").unwrap_err();
        assert_eq!(e.position, 6);
        let e = parse_symbol_expression("coeffs{1 1}").unwrap_err();
        assert!(e.expected.contains("':'"), "{e}");
        assert!(parse_symbol_expression("(1+z)^0.5*(1-z)^0.5").is_err());
        assert!(parse_symbol_expression("").is_err());
    }
}
