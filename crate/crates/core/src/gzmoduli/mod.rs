//! The degenerate case `D = 1`: the Gross–Zagier formula for
//! `log |j(tau_1) - j(tau_2)|` as a sum of `c_p log p`, and a numerical
//! evaluation of the same quantity from the q-expansion of `j`.

mod forms;
mod jfunc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use thiserror::Error;

use crate::exactnum::{is_prime, is_squarefree, kronecker_symbol, padic_valuation, prime_divisors, NumError};
use crate::intersect::{FieldLabel, IntersectionResult};

pub use forms::{class_number, reduced_forms, HeegnerForm};
pub use jfunc::{j_invariant, log_value_fixed, singular_moduli_log, working_bits, MIN_PRECISION};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GzError {
    #[error("discriminant {0} must be negative")]
    NotNegative(i64),
    #[error("discriminant {0} must be 1 mod 4")]
    NotOneModFour(i64),
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("discriminants {0} and {1} are not coprime")]
    NotCoprime(i64, i64),
    #[error("{0} is not a discriminant (must be negative and 0 or 1 mod 4)")]
    BadDiscriminant(i64),
    #[error("{l} divides both discriminants")]
    SharedPrime { l: i64 },
    #[error("precision {requested} is below the supported minimum of {minimum} digits")]
    PrecisionTooLow { requested: u32, minimum: u32 },
    #[error("j(tau_1) and j(tau_2) coincide numerically")]
    CoincidentModuli,
    #[error(transparent)]
    Num(#[from] NumError),
}

/// A pair of coprime negative fundamental discriminants, both `1 mod 4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GzParams {
    d1: i64,
    d2: i64,
}

impl GzParams {
    pub fn new(d1: i64, d2: i64) -> Result<Self, GzError> {
        for d in [d1, d2] {
            if d >= 0 {
                return Err(GzError::NotNegative(d));
            }
            if !is_squarefree(-d) {
                return Err(GzError::NotFundamental(d));
            }
            if d.rem_euclid(4) != 1 {
                return Err(GzError::NotOneModFour(d));
            }
        }
        if d1.gcd(&d2) != 1 {
            return Err(GzError::NotCoprime(d1, d2));
        }
        Ok(GzParams { d1, d2 })
    }

    pub fn d1(&self) -> i64 {
        self.d1
    }

    pub fn d2(&self) -> i64 {
        self.d2
    }

    /// `D~ = d1 d2`.
    pub fn dtilde(&self) -> i64 {
        self.d1 * self.d2
    }

    /// `d1 d2 / 4`, an upper bound for the support.
    pub fn support_bound(&self) -> i64 {
        self.dtilde() / 4
    }
}

/// `epsilon(l)`: `(d1 | l)` when `l` does not divide `d1`, else `(d2 | l)`.
pub fn epsilon_of(l: i64, params: &GzParams) -> Result<i8, GzError> {
    if !is_prime(l) {
        return Err(NumError::NotPrime(l).into());
    }
    if params.d1 % l == 0 && params.d2 % l == 0 {
        return Err(GzError::SharedPrime { l });
    }
    let k = if params.d1 % l != 0 {
        kronecker_symbol(params.d1, l)?
    } else {
        kronecker_symbol(params.d2, l)?
    };
    Ok(k)
}

/// `(D~ - n^2)/4` for every `n > 0` where it is a positive integer.
fn admissible_terms(params: &GzParams) -> Vec<(i64, i64)> {
    let dtilde = params.dtilde();
    (1i64..)
        .take_while(|n| n * n < dtilde)
        .filter(|n| (dtilde - n * n) % 4 == 0)
        .map(|n| (n, (dtilde - n * n) / 4))
        .collect()
}

fn beta_degenerate(p: i64, m: i64, params: &GzParams) -> Result<i64, GzError> {
    let mut acc = 1i64;
    for l in prime_divisors(m) {
        let t = padic_valuation(m, l)?;
        let eps = epsilon_of(l, params)?;
        let beta = if l == p {
            i64::from(eps == -1 && t % 2 == 1)
        } else {
            match eps {
                -1 => i64::from(t % 2 == 0),
                1 => i64::from(t) + 1,
                _ => return Err(GzError::SharedPrime { l }),
            }
        };
        acc *= beta;
        if acc == 0 {
            break;
        }
    }
    Ok(acc)
}

/// The coefficient of `log p` in `log |j(tau_1) - j(tau_2)|^(4/(w1 w2))`,
/// summed over positive `n`.
pub fn gz_intersection_at_p(params: &GzParams, p: i64) -> Result<BigRational, GzError> {
    if !is_prime(p) {
        return Err(NumError::NotPrime(p).into());
    }
    let mut total = 0i64;
    for (_, m) in admissible_terms(params) {
        if m % p != 0 {
            continue;
        }
        let t_p = i64::from(padic_valuation(m, p)?);
        total += (t_p + 1) * beta_degenerate(p, m, params)?;
    }
    Ok(BigRational::new(total.into(), BigInt::from(2)))
}

/// All nonzero coefficients of the formula.
pub fn gz_total(params: &GzParams) -> Result<IntersectionResult, GzError> {
    let mut result = IntersectionResult::new(FieldLabel::Degenerate {
        d1: params.d1,
        d2: params.d2,
    });
    let mut primes: Vec<i64> = admissible_terms(params)
        .into_iter()
        .flat_map(|(_, m)| prime_divisors(m))
        .collect();
    primes.sort_unstable();
    primes.dedup();
    for p in primes {
        result.insert(p, gz_intersection_at_p(params, p)?);
    }
    Ok(result)
}
