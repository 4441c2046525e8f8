//! `j(tau) = E4(tau)^3 / Delta(tau)` from truncated q-expansions, with the
//! truncation point chosen from an explicit tail bound.

use num_bigint::BigInt;

use super::{reduced_forms, GzError, GzParams, HeegnerForm};
use crate::fixed::{Complex, Fixed};
use crate::intersect::IntersectionResult;

/// Below this many digits the truncation bound is not worth certifying.
pub const MIN_PRECISION: u32 = 30;

const LOG2_10: f64 = std::f64::consts::LN_10 / std::f64::consts::LN_2;

/// `-log |q| = 2 pi Im tau = pi sqrt|d| / A`.
fn neg_log_q(form: &HeegnerForm) -> f64 {
    std::f64::consts::PI * ((-form.disc()) as f64).sqrt() / form.a as f64
}

/// Bits needed to carry `digits` correct decimals through the division by `q`.
pub fn working_bits(digits: u32, form: &HeegnerForm) -> u32 {
    let loss = (neg_log_q(form) / std::f64::consts::LN_2).ceil() as u32;
    ((digits + 10) as f64 * LOG2_10).ceil() as u32 + 2 * loss + 64
}

/// Smallest `N` such that dropping every `q^n`, `n > N`, from `E4` and from
/// the pentagonal series for `prod (1 - q^n)` moves `j` by less than `10^-(digits+10)`.
///
/// Uses `sigma_3(n) <= n^4`, so the `E4` tail is at most
/// `240 (N+1)^4 r^(N+1) / (1 - rho)` with `rho = r ((N+2)/(N+1))^4 < 1`, and the
/// pentagonal tail is at most `r^(N+1) / (1 - r)`. Both are scaled by `1/r` and
/// a constant for the division by `q P^24` and the cube of `E4` (`|E4| < 3`).
fn truncation_point(digits: u32, nlq: f64) -> usize {
    let ln_r = -nlq;
    let r = ln_r.exp();
    let ln_target = -((digits + 10) as f64) * std::f64::consts::LN_10 + ln_r - (27.0f64 * 48.0).ln();
    let mut n = 1usize;
    loop {
        let n1 = (n + 1) as f64;
        let rho = r * ((n1 + 1.0) / n1).powi(4);
        if rho < 0.5 {
            let ln_e4_tail = 240f64.ln() + 4.0 * n1.ln() + n1 * ln_r - (1.0 - rho).ln();
            let ln_p_tail = n1 * ln_r - (1.0 - r).ln();
            if ln_e4_tail < ln_target && ln_p_tail < ln_target {
                return n;
            }
        }
        n += 1;
    }
}

fn sigma3(n: u64) -> u64 {
    (1..=n).filter(|k| n % k == 0).map(|k| k * k * k).sum()
}

fn j_at(form: &HeegnerForm, digits: u32, bits: u32) -> Complex {
    let nlq = neg_log_q(form);
    let n_max = truncation_point(digits, nlq);
    let pi = Fixed::pi(bits);
    // |q| = exp(-pi sqrt|d| / A), arg q = -pi B / A
    let sqrt_d = Fixed::from_int(-form.disc(), bits).sqrt();
    let r = (-(pi.clone() * sqrt_d).div_int(form.a)).exp();
    let theta = -(pi.mul_int(form.b).div_int(form.a));
    let q = Complex::from_polar(&r, &theta);

    let mut powers = Vec::with_capacity(n_max + 1);
    powers.push(Complex::one(bits));
    for i in 1..=n_max {
        let next = powers[i - 1].clone() * q.clone();
        powers.push(next);
    }

    let mut e4 = Complex::one(bits);
    for (n, qn) in powers.iter().enumerate().skip(1) {
        e4 = e4 + qn.scale(240 * sigma3(n as u64));
    }

    // prod (1 - q^n) = sum_k (-1)^k q^(k(3k-1)/2), k over all integers
    let mut euler = Complex::one(bits);
    let mut k = 1i64;
    loop {
        let e1 = (k * (3 * k - 1) / 2) as usize;
        let e2 = (k * (3 * k + 1) / 2) as usize;
        if e1 > n_max {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        euler = euler + powers[e1].scale(sign);
        if e2 <= n_max {
            euler = euler + powers[e2].scale(sign);
        }
        k += 1;
    }

    let delta = q * euler.powu(24);
    e4.powu(3).div(&delta)
}

/// `j(tau)` at the Heegner point of `form`, accurate to about `digits` decimals.
pub fn j_invariant(form: &HeegnerForm, digits: u32) -> Result<Complex, GzError> {
    if digits < MIN_PRECISION {
        return Err(GzError::PrecisionTooLow {
            requested: digits,
            minimum: MIN_PRECISION,
        });
    }
    Ok(j_at(form, digits, working_bits(digits, form)))
}

fn w_of(d: i64) -> i64 {
    if d == -3 {
        6
    } else {
        2
    }
}

/// `sum (4/(w1 w2)) log |j(tau_1) - j(tau_2)|` over all pairs of reduced forms.
pub fn singular_moduli_log(params: &GzParams, digits: u32) -> Result<Fixed, GzError> {
    if digits < MIN_PRECISION {
        return Err(GzError::PrecisionTooLow {
            requested: digits,
            minimum: MIN_PRECISION,
        });
    }
    let f1 = reduced_forms(params.d1())?;
    let f2 = reduced_forms(params.d2())?;
    let bits = f1
        .iter()
        .chain(f2.iter())
        .map(|f| working_bits(digits, f))
        .max()
        .expect("every discriminant has a reduced form");
    let j1: Vec<Complex> = f1.iter().map(|f| j_at(f, digits, bits)).collect();
    let j2: Vec<Complex> = f2.iter().map(|f| j_at(f, digits, bits)).collect();
    let weight = w_of(params.d1()) * w_of(params.d2());
    let tiny = Fixed::from_ratio(1, BigInt::from(1) << (bits / 2), bits);
    let mut total = Fixed::zero(bits);
    for a in &j1 {
        for b in &j2 {
            let diff = a.clone() - b.clone();
            if diff.norm_sqr() < tiny {
                return Err(GzError::CoincidentModuli);
            }
            total = total + diff.ln_abs().mul_int(4).div_int(weight);
        }
    }
    Ok(total)
}

/// `sum c_p log p` evaluated at `bits` of precision.
pub fn log_value_fixed(result: &IntersectionResult, bits: u32) -> Fixed {
    let mut total = Fixed::zero(bits);
    for (&p, c) in result.terms() {
        let ln_p = Fixed::from_int(p, bits).ln();
        total = total + ln_p.mul_int(c.numer().clone()).div_int(c.denom().clone());
    }
    total
}
