//! Family, sequence and expected-value files.

use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;
use tropical_transient::{Epsilon, Family, Finite, Matrix, MatrixFamily, ProductSequence, Rational, Scalar};

/// An input problem, reported with exit code 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

impl From<tropical_transient::Error> for InputError {
    fn from(e: tropical_transient::Error) -> Self {
        InputError(e.to_string())
    }
}

/// Parses an exact value: integer, decimal (with optional exponent) or `p/q`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p: BigInt = parse_integer(p)?;
        let q: BigInt = parse_integer(q)?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(at) => (&text[..at], text[at + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: BigInt = format!("0{int_part}{frac_part}").parse().ok()?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Rational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Some(value)
}

fn parse_integer(text: &str) -> Option<BigInt> {
    let t = text.trim();
    let body = t.strip_prefix('-').or_else(|| t.strip_prefix('+')).unwrap_or(t);
    if body.is_empty() || !body.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    t.parse().ok()
}

/// Canonical text of an exact value: `p/q`, an integer, or `-inf`.
pub fn render_scalar(v: &Scalar) -> String {
    match v {
        Epsilon => "-inf".to_string(),
        Finite(r) => render_rational(r),
    }
}

pub fn render_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// One matrix entry as written in a file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token(pub Scalar);

impl Token {
    fn parse(text: &str) -> Option<Self> {
        if text.trim() == "-inf" {
            return Some(Token(Epsilon));
        }
        parse_rational(text).map(|r| Token(Finite(r)))
    }
}

impl<'de> Deserialize<'de> for Token {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = match Value::deserialize(d)? {
            Value::Number(n) => n.to_string(),
            Value::String(s) => s,
            other => {
                return Err(de::Error::custom(format!(
                    "expected a number, a \"p/q\" string or \"-inf\", found {other}"
                )))
            }
        };
        Token::parse(&text).ok_or_else(|| {
            de::Error::custom(format!(
                "unrecognised entry {text:?}; use an integer, a decimal, \"p/q\" or \"-inf\""
            ))
        })
    }
}

impl Serialize for Token {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&render_scalar(&self.0))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MemberFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub rows: Vec<Vec<Token>>,
}

/// `{ "n": 5, "members": [ { "name": "A1", "rows": [[...]] }, ... ] }`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    pub n: usize,
    pub members: Vec<MemberFile>,
}

impl FamilyFile {
    pub fn from_json(text: &str) -> Result<Self, InputError> {
        serde_json::from_str(text).map_err(|e| InputError(format!("family file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("family files always serialise")
    }

    /// Display names, defaulting to `A1`, `A2`, ...
    pub fn names(&self) -> Vec<String> {
        self.members
            .iter()
            .enumerate()
            .map(|(i, m)| m.name.clone().unwrap_or_else(|| format!("A{}", i + 1)))
            .collect()
    }

    pub fn to_family(&self) -> Result<Family, InputError> {
        if self.n == 0 {
            return Err(InputError("family file: n must be at least 1".into()));
        }
        if self.members.is_empty() {
            return Err(InputError("family file: no members".into()));
        }
        let names = self.names();
        let mut members = Vec::with_capacity(self.members.len());
        for (m, name) in self.members.iter().zip(&names) {
            if m.rows.len() != self.n || m.rows.iter().any(|r| r.len() != self.n) {
                return Err(InputError(format!(
                    "family file: member {name} is not {n}x{n}",
                    n = self.n
                )));
            }
            let rows = m.rows.iter().map(|r| r.iter().map(|t| t.0.clone()).collect()).collect();
            members.push(Matrix::from_rows(rows)?);
        }
        Ok(MatrixFamily::new(members)?)
    }

    pub fn from_family(family: &Family, names: &[String]) -> Self {
        FamilyFile {
            n: family.n(),
            members: family
                .members()
                .iter()
                .zip(names)
                .map(|(m, name)| MemberFile {
                    name: Some(name.clone()),
                    rows: m.iter_rows().map(|r| r.iter().cloned().map(Token).collect()).collect(),
                })
                .collect(),
        }
    }
}

/// A JSON array of 1-based member indices.
pub fn parse_sequence(text: &str, members: usize) -> Result<ProductSequence, InputError> {
    let raw: Vec<usize> =
        serde_json::from_str(text).map_err(|e| InputError(format!("sequence file: {e}")))?;
    if raw.is_empty() {
        return Err(InputError("sequence file: the sequence is empty".into()));
    }
    if let Some((pos, &bad)) = raw.iter().enumerate().find(|(_, &i)| i == 0 || i > members) {
        return Err(InputError(format!(
            "sequence file: entry {} is member {bad}, but the family has members 1..={members}",
            pos + 1
        )));
    }
    Ok(ProductSequence::from_one_based(&raw)?)
}

/// Values to compare the computed report against. Every field is optional.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedFile {
    #[serde(default)]
    pub note: Option<String>,
    pub a_sup: Option<Vec<Vec<Token>>>,
    pub a_inf: Option<Vec<Vec<Token>>>,
    pub lambda_star: Option<Token>,
    pub alpha: Option<Vec<Token>>,
    pub beta: Option<Vec<Token>>,
    pub gamma: Option<Vec<Vec<Token>>>,
    pub w: Option<Vec<Token>>,
    pub v: Option<Vec<Token>>,
    pub explicit_term1: Option<Vec<Vec<Token>>>,
    pub explicit_term2: Option<Vec<Vec<Token>>>,
    pub explicit_overall: Option<Token>,
    pub product: Option<Vec<Vec<Token>>>,
    pub w_star: Option<Vec<Token>>,
    pub v_star: Option<Vec<Token>>,
    pub implicit_term1: Option<Vec<Vec<Token>>>,
    pub implicit_term2: Option<Vec<Vec<Token>>>,
    pub implicit_overall: Option<Token>,
}

impl ExpectedFile {
    pub fn from_json(text: &str) -> Result<Self, InputError> {
        serde_json::from_str(text).map_err(|e| InputError(format!("expected-values file: {e}")))
    }
}

pub fn read_file(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("cannot read {}: {e}", path.display())))
}
