//! Gross–Keating invariants for the two ternary shapes that occur here, the
//! local intersection index they determine, and the local representation
//! density.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use thiserror::Error;

use crate::exactnum::{hilbert_symbol, hilbert_symbol_int, is_prime, padic_valuation, NumError, Place};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GkError {
    #[error("Gross-Keating invariants must satisfy a0 <= a1 <= a2, got ({0}, {1}, {2})")]
    Unsorted(u32, u32, u32),
    #[error("unsupported shape at l = {0}: only diag(1, alpha, d/alpha) at odd l and diag(e*2^t, [[A,1/2],[1/2,A]]) at l = 2 are classified")]
    UnsupportedShape(i64),
    #[error("alpha = {alpha} is not a unit at l = {l}")]
    NotAUnit { alpha: i64, l: i64 },
    #[error("the plane parameter A must be 0 or 1, got {0}")]
    BadPlaneParameter(u8),
    #[error(transparent)]
    Num(#[from] NumError),
}

/// Sorted invariants `a0 <= a1 <= a2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GkInvariants {
    a0: u32,
    a1: u32,
    a2: u32,
}

impl GkInvariants {
    pub fn new(a0: u32, a1: u32, a2: u32) -> Result<Self, GkError> {
        if a0 <= a1 && a1 <= a2 {
            Ok(GkInvariants { a0, a1, a2 })
        } else {
            Err(GkError::Unsorted(a0, a1, a2))
        }
    }

    /// `(0, 0, t)`, the only pattern produced by the shapes below.
    pub fn diagonal(t: u32) -> Self {
        GkInvariants { a0: 0, a1: 0, a2: t }
    }

    pub fn as_tuple(&self) -> (u32, u32, u32) {
        (self.a0, self.a1, self.a2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GkData {
    pub invariants: GkInvariants,
    /// The epsilon sign, when it is defined for the shape.
    pub epsilon: Option<i8>,
    pub l: i64,
}

/// The classified ternary forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GkShape {
    /// `diag(1, alpha, alpha^{-1} det)` over `Z_l`, `l` odd, `alpha` a unit.
    OddDiagonal { alpha: i64, det: i64 },
    /// `diag(e * 2^t0, [[A, 1/2], [1/2, A]])` over `Z_2` with `A` in {0, 1}.
    TwoAdicPlane { t0: u32, plane: u8 },
}

fn big_pow(p: i64, e: u32) -> BigInt {
    Pow::pow(BigInt::from(p), e)
}

/// Sums `f(i) * p^i` for `i` in `lo..=hi`; empty when `hi < lo`.
fn weighted_sum(p: i64, lo: i64, hi: i64, f: impl Fn(i64) -> i64) -> BigInt {
    (lo..=hi)
        .map(|i| BigInt::from(f(i)) * big_pow(p, i as u32))
        .fold(BigInt::zero(), |acc, x| acc + x)
}

/// The local intersection index attached to Gross–Keating invariants at `p`.
pub fn gk_index(inv: &GkInvariants, p: i64) -> BigRational {
    let (a0, a1, a2) = (inv.a0 as i64, inv.a1 as i64, inv.a2 as i64);
    let head = weighted_sum(p, 0, a0 - 1, |i| (i + 1) * (a0 + a1 + a2 - 3 * i));
    if (a1 - a0) % 2 == 0 {
        let middle = weighted_sum(p, a0, (a0 + a1 - 2) / 2, |i| {
            (a0 + 1) * (2 * a0 + a1 + a2 - 4 * i)
        });
        let tail = BigRational::new(
            BigInt::from((a0 + 1) * (a2 - a1 + 1)) * big_pow(p, ((a0 + a1) / 2) as u32),
            BigInt::from(2),
        );
        BigRational::from_integer(head + middle) + tail
    } else {
        let middle = weighted_sum(p, a0, (a0 + a1 - 1) / 2, |i| {
            (a0 + 1) * (2 * a0 + a1 + a2 - 4 * i)
        });
        BigRational::from_integer(head + middle)
    }
}

/// Invariants and epsilon sign of a classified shape.
pub fn gk_invariants(shape: GkShape, l: i64) -> Result<GkData, GkError> {
    if !is_prime(l) {
        return Err(NumError::NotPrime(l).into());
    }
    match shape {
        GkShape::OddDiagonal { alpha, det } => {
            if l == 2 {
                return Err(GkError::UnsupportedShape(l));
            }
            if alpha % l == 0 {
                return Err(GkError::NotAUnit { alpha, l });
            }
            let t = padic_valuation(det, l)?;
            let epsilon = hilbert_symbol_int(-alpha, l, Place::Prime(l))?;
            Ok(GkData {
                invariants: GkInvariants::diagonal(t),
                epsilon: Some(epsilon),
                l,
            })
        }
        GkShape::TwoAdicPlane { t0, plane } => {
            if l != 2 {
                return Err(GkError::UnsupportedShape(l));
            }
            let epsilon = match plane {
                0 => 1,
                1 => -1,
                other => return Err(GkError::BadPlaneParameter(other)),
            };
            Ok(GkData {
                invariants: GkInvariants::diagonal(t0),
                epsilon: Some(epsilon),
                l,
            })
        }
    }
}

/// Local density of an isotropic form with the given invariants and sign.
/// Isotropy is not checked here; anisotropic forms have density zero and must
/// be gated by the caller.
pub fn gk_density(inv: &GkInvariants, epsilon: i8, l: i64) -> BigInt {
    let (a0, a1, a2) = (inv.a0 as i64, inv.a1 as i64, inv.a2 as i64);
    let head = weighted_sum(l, 0, a0 - 1, |i| i + 1) * 2;
    if (a1 - a0) % 2 == 0 {
        let middle = weighted_sum(l, a0, (a0 + a1 - 2) / 2, |i| i + 1) * 2;
        let scale = if epsilon == 1 {
            (a0 + 1) * (a2 - a1 + 1)
        } else {
            a0 + 1
        };
        head + middle + BigInt::from(scale) * big_pow(l, ((a0 + a1) / 2) as u32)
    } else {
        let middle = weighted_sum(l, a0, (a0 + a1 - 1) / 2, |i| i + 1) * 2;
        head + middle
    }
}

/// Whether `diag(1, alpha, alpha^{-1} d)` with `ord_l(d/4) = t` is isotropic
/// over `Q_l`: true iff `(-alpha, l)_l^t = 1`.
pub fn is_isotropic(alpha: i64, t: u32, l: i64) -> Result<bool, GkError> {
    if alpha % l == 0 {
        return Err(GkError::NotAUnit { alpha, l });
    }
    let s = hilbert_symbol_int(-alpha, l, Place::Prime(l))?;
    Ok(t % 2 == 0 || s == 1)
}

/// Isotropy of the diagonal ternary form `<q1, q2, q3>` over `Q_p`, from its
/// Hasse invariant: isotropic iff `c_p = (-1, -det)_p`.
pub fn ternary_isotropic(diag: &[BigRational; 3], p: i64) -> Result<bool, GkError> {
    let place = Place::Prime(p);
    let mut hasse = 1i8;
    for i in 0..3 {
        for j in (i + 1)..3 {
            hasse *= hilbert_symbol(&diag[i], &diag[j], place)?;
        }
    }
    let det: BigRational = diag.iter().fold(BigRational::one(), |acc, x| acc * x);
    let minus_one = BigRational::from_integer(BigInt::from(-1));
    Ok(hasse == hilbert_symbol(&minus_one, &(-det), place)?)
}
