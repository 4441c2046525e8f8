//! Serializable reports. Keys are declared in lexicographic order so that the
//! emitted JSON survives a parse and re-serialize through `serde_json::Value`
//! byte for byte.

use cmint::intersect::IntersectionResult;
use num_traits::ToPrimitive;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Ratio {
    pub den: i64,
    pub num: i64,
}

impl Ratio {
    pub fn from_big(c: &num_rational::BigRational) -> Ratio {
        Ratio {
            den: c.denom().to_i64().expect("denominator fits in i64"),
            num: c.numer().to_i64().expect("numerator fits in i64"),
        }
    }
}

impl std::fmt::Display for Ratio {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ViolationReport {
    pub code: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidateReport {
    #[serde(rename = "D")]
    pub d: i64,
    #[serde(rename = "Dtilde")]
    pub dtilde: Option<i64>,
    pub delta: [i64; 2],
    pub valid: bool,
    pub violations: Vec<ViolationReport>,
    pub w: [i64; 2],
}

#[derive(Debug, Clone, Serialize)]
pub struct Term {
    pub b1: i64,
    pub coeff: Ratio,
    pub p: i64,
}

/// One prime of the `b_1` comparison, including the independent classifier.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub p: i64,
    pub coeff: Ratio,
    pub b1: i64,
    pub b1_direct: i64,
}

impl Comparison {
    pub fn agrees(&self) -> bool {
        self.b1 == self.b1_direct && self.b1 * self.coeff.den == 2 * self.coeff.num
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IntersectReport {
    #[serde(rename = "D")]
    pub d: i64,
    #[serde(rename = "Dtilde")]
    pub dtilde: i64,
    pub terms: Vec<Term>,
    pub verified: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnumeratedField {
    #[serde(rename = "D")]
    pub d: i64,
    #[serde(rename = "Dtilde")]
    pub dtilde: i64,
    pub delta: [i64; 2],
    pub terms: Vec<Term>,
    pub verified: bool,
    pub w: [i64; 2],
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub failed: usize,
    pub fields: usize,
    pub nonzero: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnumerateReport {
    pub fields: Vec<EnumeratedField>,
    pub summary: Summary,
}

#[derive(Debug, Clone, Serialize)]
pub struct GzTerm {
    pub coeff: Ratio,
    pub p: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GzReport {
    pub d1: i64,
    pub d2: i64,
    pub discrepancy: String,
    pub formula: String,
    pub oracle: String,
    pub precision: u32,
    pub terms: Vec<GzTerm>,
    pub within_tolerance: bool,
}

/// `c_2 log 2 + ...` with the same coefficients the JSON carries.
pub fn formal_sum(terms: impl IntoIterator<Item = (i64, Ratio)>) -> String {
    let parts: Vec<String> = terms
        .into_iter()
        .filter(|(_, c)| c.num != 0)
        .map(|(p, c)| format!("{c}*log {p}"))
        .collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

pub fn gz_terms(result: &IntersectionResult) -> Vec<GzTerm> {
    result
        .terms()
        .iter()
        .map(|(&p, c)| GzTerm {
            coeff: Ratio::from_big(c),
            p,
        })
        .collect()
}
