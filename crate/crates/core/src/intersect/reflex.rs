//! The reflex-side count `b_1(p)`, built from how the primes dividing
//! `(D~ - n^2)/(4D)` behave in the reflex field `K~ = Q(sqrt D~)(sqrt(u - 2 sqrt D~))`.

use std::fmt;

use log::debug;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{alpha_unit, t_exponent, FieldLabel, IntersectError, IntersectionResult};
use crate::exactnum::{hilbert_symbol_int, kronecker_symbol, prime_divisors, split_valuation, Place};
use crate::quadcm::CmFieldData;
use crate::tmatrix::{all_tmatrices, TMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

impl fmt::Display for Splitting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Splitting::Split => "split",
            Splitting::Inert => "inert",
            Splitting::Ramified => "ramified",
        })
    }
}

/// How `l` behaves in `Q(sqrt D~)` and `K~`, plus the exponent that enters `rho`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReflexLocalData {
    pub l: i64,
    pub splitting_in_ftilde: Splitting,
    pub splitting_in_ktilde: Splitting,
    pub ord_at_chosen_prime: i64,
}

/// Splitting of the chosen prime over `l` in `K~`, read off the sign `(-alpha_l, l)_l`.
/// `is_ramified_prime_over_d` marks the prime dividing the relative discriminant.
pub fn split_in_ktilde(
    t: &TMatrix,
    l: i64,
    is_ramified_prime_over_d: bool,
) -> Result<Splitting, IntersectError> {
    if is_ramified_prime_over_d {
        return Ok(Splitting::Ramified);
    }
    let alpha = if l == t.d() && t.n % l != 0 {
        debug!("l = D = {l} hit for n = {}: using alpha = a = {}", t.n, t.a);
        if t.a % l == 0 {
            return Err(IntersectError::NoUnitEntry { l, a: t.a, c: t.c });
        }
        t.a
    } else {
        alpha_unit(t, l)?
    };
    Ok(if hilbert_symbol_int(-alpha, l, Place::Prime(l))? == 1 {
        Splitting::Split
    } else {
        Splitting::Inert
    })
}

/// `rho` at a single prime of `Q(sqrt D~)`.
pub fn rho_local(splitting: Splitting, ord: i64) -> u64 {
    match splitting {
        Splitting::Ramified => 1,
        _ if ord < 0 => 0,
        Splitting::Inert => u64::from(ord % 2 == 0),
        Splitting::Split => ord as u64 + 1,
    }
}

fn ftilde_splitting(dtilde: i64, l: i64) -> Result<Splitting, IntersectError> {
    match kronecker_symbol(dtilde, l)? {
        1 => Ok(Splitting::Split),
        0 => Ok(Splitting::Ramified),
        _ => Err(IntersectError::InertInReflexReal { l }),
    }
}

/// The full local record for `l | (D~ - n^2)/(4D)`.
pub fn reflex_local_data(p: i64, t: &TMatrix, l: i64) -> Result<ReflexLocalData, IntersectError> {
    let splitting_in_ftilde = ftilde_splitting(t.dtilde(), l)?;
    let splitting_in_ktilde = split_in_ktilde(t, l, false)?;
    let t_l = i64::from(t_exponent(t, l)?);
    Ok(ReflexLocalData {
        l,
        splitting_in_ftilde,
        splitting_in_ktilde,
        ord_at_chosen_prime: if l == p { t_l - 1 } else { t_l },
    })
}

fn b_term(
    p: i64,
    t: &TMatrix,
    classify: impl Fn(&TMatrix, i64) -> Result<Splitting, IntersectError>,
) -> Result<u64, IntersectError> {
    if classify(t, p)? == Splitting::Split {
        return Ok(0);
    }
    let mut acc = 1u64;
    for l in prime_divisors(t.reduced_det()) {
        let t_l = i64::from(t_exponent(t, l)?);
        let ord = if l == p { t_l - 1 } else { t_l };
        acc *= rho_local(classify(t, l)?, ord);
        if acc == 0 {
            break;
        }
    }
    Ok(acc)
}

fn b1_with(
    cm: &CmFieldData,
    p: i64,
    classify: impl Fn(&TMatrix, i64) -> Result<Splitting, IntersectError> + Copy,
) -> Result<BigRational, IntersectError> {
    let mut total = 0u64;
    for t in all_tmatrices(cm) {
        if t.reduced_det() % p != 0 {
            continue;
        }
        ftilde_splitting(cm.dtilde(), p)?;
        let weight = u64::from(t_exponent(&t, p)?) + 1;
        total += weight * b_term(p, &t, classify)?;
    }
    Ok(BigRational::from_integer(total.into()))
}

/// `b_1(p)` with the splitting in `K~` taken from [`split_in_ktilde`].
pub fn b1_at_p(cm: &CmFieldData, p: i64) -> Result<BigRational, IntersectError> {
    b1_with(cm, p, |t, l| split_in_ktilde(t, l, false))
}

/// `b_1(p)` with the splitting in `K~` computed l-adically from the generator
/// `u - 2 sqrt D~`, without any Hilbert symbol.
pub fn b1_at_p_direct(cm: &CmFieldData, p: i64) -> Result<BigRational, IntersectError> {
    b1_with(cm, p, splitting_from_reflex_element)
}

/// `b_1` at every prime dividing some `(D~ - n^2)/(4D)`.
pub fn b1_total(cm: &CmFieldData) -> Result<IntersectionResult, IntersectError> {
    let mut result = IntersectionResult::new(FieldLabel::Cm {
        d: cm.d(),
        dtilde: cm.dtilde(),
    });
    for p in super::candidate_primes(cm) {
        result.insert(p, b1_at_p(cm, p)?);
    }
    Ok(result)
}

/// Splitting of the prime of `Q(sqrt D~)` over `l` that divides `mu n + sqrt D~`
/// in `K~`, found by embedding `sqrt D~` into `Z_l` and testing whether
/// `u - 2 sqrt D~` is a square, a unit non-square or neither.
pub fn splitting_from_reflex_element(t: &TMatrix, l: i64) -> Result<Splitting, IntersectError> {
    let dtilde = t.dtilde();
    let u = t.reconstructed_delta_uv().0;
    let mu_n = t.mu.value() * t.n;
    if dtilde % l == 0 {
        // Q_l(sqrt D~) is ramified, the residue field is F_l and sqrt D~ is a
        // uniformizer, so u - 2 sqrt D~ is a unit exactly when l does not divide u.
        if l == 2 {
            return Err(IntersectError::Classification {
                l,
                reason: "D~ is odd",
            });
        }
        if u % l == 0 {
            return Ok(Splitting::Ramified);
        }
        return Ok(match kronecker_symbol(u, l)? {
            1 => Splitting::Split,
            _ => Splitting::Inert,
        });
    }
    let disc = BigInt::from(u) * u - BigInt::from(4) * dtilde;
    if disc.is_zero() {
        return Err(IntersectError::Classification {
            l,
            reason: "u^2 = 4 D~",
        });
    }
    let (v_disc, _) = split_valuation(&disc, l as u64);
    let k = v_disc + 6;
    let modulus = BigInt::from(l).pow(k);
    let s = sqrt_dtilde(dtilde, mu_n, l, k).ok_or(IntersectError::Classification {
        l,
        reason: "D~ is not a square in Z_l",
    })?;
    let x = (BigInt::from(u) - BigInt::from(2) * s).mod_floor(&modulus);
    if x.is_zero() {
        return Err(IntersectError::Classification {
            l,
            reason: "precision exhausted",
        });
    }
    let (v, unit) = split_valuation(&x, l as u64);
    if v % 2 == 1 {
        return Ok(Splitting::Ramified);
    }
    if l == 2 {
        let r = (unit % 8u32).to_u32().expect("residue fits");
        return Ok(match r {
            1 => Splitting::Split,
            5 => Splitting::Inert,
            _ => Splitting::Ramified,
        });
    }
    let r = (unit % l as u64).to_i64().expect("residue fits");
    Ok(match kronecker_symbol(r, l)? {
        1 => Splitting::Split,
        _ => Splitting::Inert,
    })
}

/// The root `s` of `s^2 = D~` in `Z_l`, modulo `l^k`, normalised so that
/// `mu n + s` has positive valuation (at least 2 when `l = 2`).
fn sqrt_dtilde(dtilde: i64, mu_n: i64, l: i64, k: u32) -> Option<BigInt> {
    let target = BigInt::from(dtilde);
    if l == 2 {
        if dtilde.rem_euclid(8) != 1 {
            return None;
        }
        let mut s = BigInt::from((-mu_n).rem_euclid(4));
        if (&s % 2u32).is_zero() {
            return None;
        }
        for j in 3..=k {
            let m = BigInt::one() << (j + 1);
            if (&s * &s - &target).mod_floor(&m) != BigInt::zero() {
                s += BigInt::one() << (j - 1);
            }
        }
        return Some(s.mod_floor(&(BigInt::one() << k)));
    }
    let lb = BigInt::from(l);
    let mut s = BigInt::from((-mu_n).rem_euclid(l));
    if s.is_zero() || !(&s * &s - &target).mod_floor(&lb).is_zero() {
        return None;
    }
    let mut precision = 1u32;
    while precision < k {
        precision = (2 * precision).min(k);
        let m = lb.pow(precision);
        let inv = (BigInt::from(2) * &s).modinv(&m)?;
        s = (&s - (&s * &s - &target) * inv).mod_floor(&m);
    }
    debug_assert!(!s.is_negative());
    Some(s)
}
