//! Local factors, the per-prime intersection number `(T_1 . CM(K))_p`, and
//! the reflex-side count `b_1(p)` that must equal twice it.

mod reflex;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exactnum::{hilbert_symbol_int, padic_valuation, prime_divisors, NumError, Place};
use crate::quadcm::CmFieldData;
use crate::tmatrix::{all_tmatrices, TMatrix};

pub use reflex::{
    b1_at_p, b1_at_p_direct, b1_total, reflex_local_data, rho_local, split_in_ktilde,
    splitting_from_reflex_element, ReflexLocalData, Splitting,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntersectError {
    #[error("{l} does not divide (D~ - n^2)/(4D) = {reduced_det}")]
    NotADivisor { l: i64, reduced_det: i64 },
    #[error("{l} divides both a = {a} and c = {c}; the matrix is malformed")]
    NoUnitEntry { l: i64, a: i64, c: i64 },
    #[error("{l} is inert in Q(sqrt D~) although it divides (D~ - n^2)/(4D)")]
    InertInReflexReal { l: i64 },
    #[error("cannot classify the reflex splitting at {l}: {reason}")]
    Classification { l: i64, reason: &'static str },
    #[error(transparent)]
    Num(#[from] NumError),
}

/// Which object an [`IntersectionResult`] belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldLabel {
    Cm { d: i64, dtilde: i64 },
    Degenerate { d1: i64, d2: i64 },
}

/// A formal sum `sum_p c_p log p` with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionResult {
    pub label: FieldLabel,
    terms: BTreeMap<i64, BigRational>,
}

impl IntersectionResult {
    pub fn new(label: FieldLabel) -> Self {
        IntersectionResult {
            label,
            terms: BTreeMap::new(),
        }
    }

    /// Records `c log p`; zero coefficients are dropped.
    pub fn insert(&mut self, p: i64, c: BigRational) {
        if !c.is_zero() {
            self.terms.insert(p, c);
        }
    }

    pub fn terms(&self) -> &BTreeMap<i64, BigRational> {
        &self.terms
    }

    pub fn coefficient(&self, p: i64) -> BigRational {
        self.terms.get(&p).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `sum c_p log p` as a float, for display only.
    pub fn log_value(&self) -> f64 {
        self.terms
            .iter()
            .map(|(&p, c)| ratio_to_f64(c) * (p as f64).ln())
            .sum()
    }
}

pub(crate) fn ratio_to_f64(c: &BigRational) -> f64 {
    c.numer().to_f64().unwrap_or(f64::NAN) / c.denom().to_f64().unwrap_or(f64::NAN)
}

impl fmt::Display for IntersectionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (p, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*log {p}")?;
        }
        Ok(())
    }
}

/// Data of one prime `l | (D~ - n^2)/(4D)` for a fixed `T(mu n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalFactor {
    pub l: i64,
    pub alpha: i64,
    pub t_l: u32,
    /// `(-alpha, l)_l`.
    pub symbol: i8,
    pub beta_l: BigRational,
}

fn check_divides(t: &TMatrix, l: i64) -> Result<(), IntersectError> {
    if t.reduced_det() % l != 0 {
        return Err(IntersectError::NotADivisor {
            l,
            reduced_det: t.reduced_det(),
        });
    }
    Ok(())
}

/// A unit `alpha_l` with `T ~ diag(alpha_l, det/alpha_l)` over `Z_l`: `a` when
/// `l` does not divide it, otherwise `c`.
pub fn alpha_unit(t: &TMatrix, l: i64) -> Result<i64, IntersectError> {
    check_divides(t, l)?;
    if t.a % l != 0 {
        Ok(t.a)
    } else if t.c % l != 0 {
        Ok(t.c)
    } else {
        Err(IntersectError::NoUnitEntry { l, a: t.a, c: t.c })
    }
}

/// `t_l = ord_l (D~ - n^2)/(4D)`.
pub fn t_exponent(t: &TMatrix, l: i64) -> Result<u32, IntersectError> {
    Ok(padic_valuation(t.reduced_det(), l)?)
}

pub fn local_factor(p: i64, t: &TMatrix, l: i64) -> Result<LocalFactor, IntersectError> {
    let alpha = alpha_unit(t, l)?;
    let t_l = t_exponent(t, l)?;
    let symbol = hilbert_symbol_int(-alpha, l, Place::Prime(l))?;
    let beta = if l == p {
        if symbol == -1 && t_l % 2 == 1 {
            1
        } else {
            0
        }
    } else if symbol == -1 {
        if t_l % 2 == 0 {
            1
        } else {
            0
        }
    } else {
        i64::from(t_l) + 1
    };
    Ok(LocalFactor {
        l,
        alpha,
        t_l,
        symbol,
        beta_l: BigRational::from_integer(beta.into()),
    })
}

/// `beta_l(p, mu n)`.
pub fn beta_l(p: i64, t: &TMatrix, l: i64) -> Result<BigRational, IntersectError> {
    Ok(local_factor(p, t, l)?.beta_l)
}

/// Local factors for every prime dividing `(D~ - n^2)/(4D)`, ascending.
pub fn local_factors(p: i64, t: &TMatrix) -> Result<Vec<LocalFactor>, IntersectError> {
    prime_divisors(t.reduced_det())
        .into_iter()
        .map(|l| local_factor(p, t, l))
        .collect()
}

/// `beta(p, mu n) = prod_l beta_l(p, mu n)`.
pub fn beta_product(p: i64, t: &TMatrix) -> Result<BigRational, IntersectError> {
    check_divides(t, p)?;
    let mut acc = BigRational::one();
    for factor in local_factors(p, t)? {
        acc *= factor.beta_l;
        if acc.is_zero() {
            break;
        }
    }
    Ok(acc)
}

/// `(T_1 . CM(K))_p`.
pub fn intersection_at_p(cm: &CmFieldData, p: i64) -> BigRational {
    let mut total = BigInt::zero();
    for t in all_tmatrices(cm) {
        if t.reduced_det() % p != 0 {
            continue;
        }
        let weight = t_exponent(&t, p).expect("p divides the reduced determinant") + 1;
        let beta = beta_product(p, &t).expect("local factors exist for admissible matrices");
        debug_assert!(beta.is_integer() && !beta.is_negative());
        total += beta.to_integer() * BigInt::from(weight);
    }
    BigRational::new(total, BigInt::from(2))
}

/// Primes that divide some `(D~ - n^2)/(4D)`; every other prime has coefficient zero.
pub fn candidate_primes(cm: &CmFieldData) -> Vec<i64> {
    let mut primes: Vec<i64> = all_tmatrices(cm)
        .iter()
        .flat_map(|t| prime_divisors(t.reduced_det()))
        .collect();
    primes.sort_unstable();
    primes.dedup();
    primes
}

/// `T_1 . CM(K)` as a formal sum over primes.
pub fn intersection_total(cm: &CmFieldData) -> IntersectionResult {
    let mut result = IntersectionResult::new(FieldLabel::Cm {
        d: cm.d(),
        dtilde: cm.dtilde(),
    });
    for p in candidate_primes(cm) {
        result.insert(p, intersection_at_p(cm, p));
    }
    result
}
