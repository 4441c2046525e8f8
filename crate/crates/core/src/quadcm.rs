//! Arithmetic in the ring of integers of `F = Q(sqrt D)` and validation of
//! the CM-field data `(D, Delta, w)`.
//!
//! Elements are stored as `x + y*omega` with `omega = (D + sqrt D)/2`. The
//! same element written as `(u + v*sqrt D)/2` has `u = 2x + yD`, `v = y`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::exactnum::{is_prime, is_square, is_squarefree};

/// A single failed admissibility condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Violation {
    DNotPrime,
    DNotOneModFour,
    DeltaNotTotallyNegative,
    DtildeNotOneModFour,
    DtildeNotSquarefree,
    /// `D~` is a perfect square, so `K` is biquadratic.
    DtildeSquare,
    /// `w^2 - Delta` is not divisible by 4 in `O_F`.
    CongruenceFails,
}

impl Violation {
    /// Stable machine-readable code.
    pub fn code(self) -> &'static str {
        match self {
            Violation::DNotPrime => "D_NOT_PRIME",
            Violation::DNotOneModFour => "D_NOT_1_MOD_4",
            Violation::DeltaNotTotallyNegative => "DELTA_NOT_TOTALLY_NEGATIVE",
            Violation::DtildeNotOneModFour => "DTILDE_NOT_1_MOD_4",
            Violation::DtildeNotSquarefree => "DTILDE_NOT_SQUAREFREE",
            Violation::DtildeSquare => "DTILDE_SQUARE",
            Violation::CongruenceFails => "W_CONGRUENCE_FAILS",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            Violation::DNotPrime => "D is not prime",
            Violation::DNotOneModFour => "D is not 1 mod 4",
            Violation::DeltaNotTotallyNegative => "Delta is not totally negative",
            Violation::DtildeNotOneModFour => "Norm(Delta) is not 1 mod 4",
            Violation::DtildeNotSquarefree => "Norm(Delta) is not squarefree",
            Violation::DtildeSquare => "Norm(Delta) is a square (K is biquadratic)",
            Violation::CongruenceFails => "w^2 is not congruent to Delta mod 4",
        };
        f.write_str(msg)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("elements from Q(sqrt {0}) and Q(sqrt {1}) cannot be combined")]
    MixedContext(i64, i64),
    #[error("(u, v) = ({0}, {1}) does not describe an integer of Q(sqrt D): u and v must have equal parity")]
    ParityMismatch(i64, i64),
    #[error("D = {0} must be positive")]
    NonPositiveD(i64),
    #[error("arithmetic overflow")]
    Overflow,
    #[error("condition failed: {}", join_violations(.0))]
    Violations(Vec<Violation>),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// Element `x + y*omega` of `O_F`, `F = Q(sqrt D)`, `D = 1 mod 4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadElem {
    d: i64,
    x: i64,
    y: i64,
}

impl QuadElem {
    pub fn new(d: i64, x: i64, y: i64) -> Self {
        QuadElem { d, x, y }
    }

    /// `(u + v sqrt D)/2`; requires `u = v mod 2`.
    pub fn from_uv(d: i64, u: i64, v: i64) -> Result<Self, FieldError> {
        if (u - v).rem_euclid(2) != 0 || d.rem_euclid(2) != 1 {
            return Err(FieldError::ParityMismatch(u, v));
        }
        let x = (u as i128 - v as i128 * d as i128) / 2;
        let x = i64::try_from(x).map_err(|_| FieldError::Overflow)?;
        Ok(QuadElem { d, x, y: v })
    }

    pub fn rational(d: i64, x: i64) -> Self {
        QuadElem { d, x, y: 0 }
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// Coordinates in the basis `{1, omega}`.
    pub fn xy(&self) -> (i64, i64) {
        (self.x, self.y)
    }

    /// Coordinates with the element equal to `(u + v sqrt D)/2`.
    pub fn uv(&self) -> (i64, i64) {
        (2 * self.x + self.y * self.d, self.y)
    }

    pub fn conj(&self) -> Self {
        QuadElem {
            d: self.d,
            x: self.x + self.y * self.d,
            y: -self.y,
        }
    }

    pub fn trace(&self) -> i64 {
        self.uv().0
    }

    pub fn norm(&self) -> i64 {
        let (u, v) = self.uv();
        let n = (u as i128 * u as i128 - v as i128 * v as i128 * self.d as i128) / 4;
        i64::try_from(n).expect("norm overflows i64")
    }

    /// Both real embeddings negative; decided exactly from `u < 0, u^2 > v^2 D`.
    pub fn is_totally_negative(&self) -> bool {
        let (u, v) = self.uv();
        u < 0 && (u as i128) * (u as i128) > (v as i128) * (v as i128) * (self.d as i128)
    }

    pub fn is_divisible_by(&self, k: i64) -> bool {
        self.x % k == 0 && self.y % k == 0
    }

    fn same_context(&self, other: &Self) -> Result<(), FieldError> {
        if self.d == other.d {
            Ok(())
        } else {
            Err(FieldError::MixedContext(self.d, other.d))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_context(other)?;
        Ok(QuadElem::new(self.d, self.x + other.x, self.y + other.y))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_context(other)?;
        Ok(QuadElem::new(self.d, self.x - other.x, self.y - other.y))
    }

    /// Uses `omega^2 = D*omega - (D^2 - D)/4`.
    pub fn try_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_context(other)?;
        let d = self.d as i128;
        let (x1, y1) = (self.x as i128, self.y as i128);
        let (x2, y2) = (other.x as i128, other.y as i128);
        let x = x1 * x2 - y1 * y2 * (d * d - d) / 4;
        let y = x1 * y2 + x2 * y1 + d * y1 * y2;
        Ok(QuadElem::new(
            self.d,
            i64::try_from(x).map_err(|_| FieldError::Overflow)?,
            i64::try_from(y).map_err(|_| FieldError::Overflow)?,
        ))
    }
}

impl Add for QuadElem {
    type Output = QuadElem;
    fn add(self, rhs: Self) -> Self {
        self.try_add(&rhs).expect("QuadElem addition")
    }
}

impl Sub for QuadElem {
    type Output = QuadElem;
    fn sub(self, rhs: Self) -> Self {
        self.try_sub(&rhs).expect("QuadElem subtraction")
    }
}

impl Mul for QuadElem {
    type Output = QuadElem;
    fn mul(self, rhs: Self) -> Self {
        self.try_mul(&rhs).expect("QuadElem multiplication")
    }
}

impl Neg for QuadElem {
    type Output = QuadElem;
    fn neg(self) -> Self {
        QuadElem::new(self.d, -self.x, -self.y)
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (u, v) = self.uv();
        write!(f, "({u}{v:+}*sqrt({}))/2", self.d)
    }
}

/// A validated CM field `K = F(sqrt Delta)` with `O_K = O_F + O_F (w + sqrt Delta)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CmFieldData {
    d: i64,
    delta: QuadElem,
    w: (i64, i64),
    dtilde: i64,
}

impl CmFieldData {
    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn delta(&self) -> QuadElem {
        self.delta
    }

    /// `(w0, w1)` with `w = w0 + w1*omega`.
    pub fn w(&self) -> (i64, i64) {
        self.w
    }

    pub fn w_elem(&self) -> QuadElem {
        QuadElem::new(self.d, self.w.0, self.w.1)
    }

    /// `D~ = Delta * Delta'`.
    pub fn dtilde(&self) -> i64 {
        self.dtilde
    }

    /// `u` and `v` with `Delta = (u + v sqrt D)/2`.
    pub fn uv(&self) -> (i64, i64) {
        self.delta.uv()
    }

    /// Largest prime that can carry a nonzero coefficient: `D~/(4D)`.
    pub fn support_bound(&self) -> i64 {
        self.dtilde / (4 * self.d)
    }
}

impl fmt::Display for CmFieldData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (u, v) = self.uv();
        write!(
            f,
            "D={} Delta=({u},{v}) w=({},{}) Dtilde={}",
            self.d, self.w.0, self.w.1, self.dtilde
        )
    }
}

/// Every admissibility condition that fails for `(D, Delta, w)`.
pub fn field_violations(d: i64, delta: &QuadElem, w: (i64, i64)) -> Vec<Violation> {
    let mut out = Vec::new();
    if !is_prime(d) {
        out.push(Violation::DNotPrime);
    }
    if d.rem_euclid(4) != 1 {
        out.push(Violation::DNotOneModFour);
    }
    if !delta.is_totally_negative() {
        out.push(Violation::DeltaNotTotallyNegative);
    }
    if d.rem_euclid(2) == 1 {
        let dtilde = delta.norm();
        if dtilde.rem_euclid(4) != 1 {
            out.push(Violation::DtildeNotOneModFour);
        }
        if dtilde <= 0 || !is_squarefree(dtilde) {
            out.push(Violation::DtildeNotSquarefree);
        }
        if is_square(dtilde) {
            out.push(Violation::DtildeSquare);
        }
        let w = QuadElem::new(d, w.0, w.1);
        match w.try_mul(&w).and_then(|sq| sq.try_sub(delta)) {
            Ok(diff) if diff.is_divisible_by(4) => {}
            _ => out.push(Violation::CongruenceFails),
        }
    }
    out
}

/// Checks every admissibility condition and returns the validated field.
pub fn validate_cm_field(d: i64, delta: QuadElem, w: (i64, i64)) -> Result<CmFieldData, FieldError> {
    if d <= 0 {
        return Err(FieldError::NonPositiveD(d));
    }
    if delta.d() != d {
        return Err(FieldError::MixedContext(d, delta.d()));
    }
    let violations = field_violations(d, &delta, w);
    if !violations.is_empty() {
        return Err(FieldError::Violations(violations));
    }
    Ok(CmFieldData {
        d,
        delta,
        w,
        dtilde: delta.norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn elem(u: i64, v: i64) -> QuadElem {
        QuadElem::from_uv(5, u, v).unwrap()
    }

    #[test]
    fn conjugation() {
        let omega = QuadElem::new(5, 0, 1);
        assert_eq!(omega.conj().xy(), (5, -1));
        assert_eq!(QuadElem::rational(5, 7).conj(), QuadElem::rational(5, 7));
        assert_eq!(elem(-13, 1).conj().uv(), (-13, -1));
        assert_eq!(elem(-13, 1).conj().conj(), elem(-13, 1));
    }

    #[test]
    fn norm_and_trace() {
        assert_eq!(elem(-13, 1).norm(), 41);
        assert_eq!(elem(-5, -1).norm(), 5);
        assert_eq!(QuadElem::new(5, 0, 1).trace(), 5);
        let e = elem(-13, 1);
        assert_eq!(e * e.conj(), QuadElem::rational(5, 41));
    }

    #[test]
    fn uv_roundtrip_and_parity() {
        let e = QuadElem::new(13, 4, -3);
        let (u, v) = e.uv();
        assert_eq!(QuadElem::from_uv(13, u, v).unwrap(), e);
        assert_eq!(
            QuadElem::from_uv(5, -13, 2),
            Err(FieldError::ParityMismatch(-13, 2))
        );
    }

    #[test]
    fn mixed_contexts_rejected() {
        let a = QuadElem::new(5, 1, 1);
        let b = QuadElem::new(13, 1, 1);
        assert_eq!(a.try_mul(&b), Err(FieldError::MixedContext(5, 13)));
        assert_eq!(a.try_add(&b), Err(FieldError::MixedContext(5, 13)));
    }

    #[test]
    fn total_negativity() {
        assert!(elem(-13, 1).is_totally_negative());
        assert!(!elem(-1, 1).is_totally_negative());
        assert!(elem(-18, 4).is_totally_negative());
        assert!(!elem(13, 1).is_totally_negative());
    }

    #[test]
    fn validation_examples() {
        let cm = validate_cm_field(5, elem(-13, 1), (0, 1)).unwrap();
        assert_eq!(cm.dtilde(), 41);
        // w^2 - Delta = 4 omega + 4
        let diff = cm.w_elem() * cm.w_elem() - cm.delta();
        assert_eq!(diff.xy(), (4, 4));

        let zeta5 = validate_cm_field(5, elem(-5, -1), (1, 1)).unwrap();
        assert_eq!(zeta5.dtilde(), 5);
        let diff = zeta5.w_elem() * zeta5.w_elem() - zeta5.delta();
        assert_eq!(diff.xy(), (-4, 8));

        assert_eq!(
            validate_cm_field(5, elem(-13, 1), (0, 0)),
            Err(FieldError::Violations(vec![Violation::CongruenceFails]))
        );
    }

    #[test]
    fn validation_collects_every_failure() {
        let err = validate_cm_field(6, QuadElem::new(6, -3, 0), (0, 0)).unwrap_err();
        let FieldError::Violations(v) = err else {
            panic!("expected violations")
        };
        assert!(v.contains(&Violation::DNotPrime));
        assert!(v.contains(&Violation::DNotOneModFour));

        // Delta = -9: norm 81 is a square and not squarefree
        let err = validate_cm_field(5, QuadElem::rational(5, -9), (1, 0)).unwrap_err();
        let FieldError::Violations(v) = err else {
            panic!("expected violations")
        };
        assert!(v.contains(&Violation::DtildeSquare));
        assert!(v.contains(&Violation::DtildeNotSquarefree));

        // -Delta of the D~ = 41 field: same norm, wrong sign, and the
        // congruence no longer holds for w = omega
        let err = validate_cm_field(5, elem(13, -1), (0, 1)).unwrap_err();
        assert_eq!(
            err,
            FieldError::Violations(vec![
                Violation::DeltaNotTotallyNegative,
                Violation::CongruenceFails
            ])
        );
    }
}
