//! Binary fixed-point reals and complex numbers on arbitrary-precision integers.
//!
//! A [`Fixed`] is `m / 2^bits`. All operands of one computation share the
//! same `bits`; results are truncated towards negative infinity, so every
//! elementary operation is off by at most a few units in the last place.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq)]
pub struct Fixed {
    m: BigInt,
    bits: u32,
}

impl fmt::Debug for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fixed({})", self.to_decimal(20))
    }
}

impl Fixed {
    pub fn zero(bits: u32) -> Self {
        Fixed { m: BigInt::zero(), bits }
    }

    pub fn from_int(n: impl Into<BigInt>, bits: u32) -> Self {
        Fixed {
            m: n.into() << bits,
            bits,
        }
    }

    /// `num / den`, truncated.
    pub fn from_ratio(num: impl Into<BigInt>, den: impl Into<BigInt>, bits: u32) -> Self {
        let den = den.into();
        assert!(!den.is_zero(), "zero denominator");
        Fixed {
            m: (num.into() << bits).div_floor(&den),
            bits,
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.m
    }

    fn same(&self, other: &Self) {
        assert_eq!(self.bits, other.bits, "fixed-point precision mismatch");
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.m.is_negative()
    }

    pub fn abs(&self) -> Self {
        Fixed {
            m: self.m.abs(),
            bits: self.bits,
        }
    }

    /// Multiplication by `2^k` (`k` may be negative).
    pub fn shift(&self, k: i64) -> Self {
        let m = if k >= 0 {
            &self.m << k as u64
        } else {
            &self.m >> (-k) as u64
        };
        Fixed { m, bits: self.bits }
    }

    pub fn mul_int(&self, n: impl Into<BigInt>) -> Self {
        Fixed {
            m: &self.m * n.into(),
            bits: self.bits,
        }
    }

    pub fn div_int(&self, n: impl Into<BigInt>) -> Self {
        Fixed {
            m: self.m.div_floor(&n.into()),
            bits: self.bits,
        }
    }

    /// Panics on division by zero.
    pub fn div(&self, other: &Self) -> Self {
        self.same(other);
        assert!(!other.m.is_zero(), "fixed-point division by zero");
        Fixed {
            m: (&self.m << self.bits).div_floor(&other.m),
            bits: self.bits,
        }
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.m.is_negative(), "square root of a negative number");
        Fixed {
            m: (&self.m << self.bits).sqrt(),
            bits: self.bits,
        }
    }

    /// Largest `e` with `2^e <= |x|`, for `x != 0`.
    fn exponent(&self) -> i64 {
        self.m.bits() as i64 - 1 - self.bits as i64
    }

    pub fn ln2(bits: u32) -> Self {
        // ln 2 = 2 atanh(1/3)
        let g = bits + 16;
        let third = Fixed::from_ratio(1, 3, g);
        atanh_series(&third).shift(1).round_to(bits)
    }

    pub fn pi(bits: u32) -> Self {
        // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
        let g = bits + 16;
        let a = atan_inv(5, g).mul_int(16);
        let b = atan_inv(239, g).mul_int(4);
        (a - b).round_to(bits)
    }

    /// The same value at a different precision.
    pub fn round_to(&self, bits: u32) -> Self {
        let k = bits as i64 - self.bits as i64;
        let m = if k >= 0 {
            &self.m << k as u64
        } else {
            &self.m >> (-k) as u64
        };
        Fixed { m, bits }
    }

    pub fn exp(&self) -> Self {
        let bits = self.bits;
        let g = bits + 32;
        let x = self.round_to(g);
        let ln2 = Fixed::ln2(g);
        // x = k ln 2 + r with |r| <= ln 2
        let k = x.div(&ln2).m >> g;
        let r = x - ln2.mul_int(k.clone());
        // halve r a few times so the series converges quickly
        let halvings = 12u32;
        let r = r.shift(-(halvings as i64));
        let mut term = Fixed::from_int(1, g);
        let mut sum = term.clone();
        let mut i = 1u32;
        loop {
            term = (term * r.clone()).div_int(i);
            if term.is_zero() {
                break;
            }
            sum = sum + term.clone();
            i += 1;
        }
        for _ in 0..halvings {
            sum = sum.clone() * sum;
        }
        let k = k.to_i64().expect("exponent fits");
        sum.shift(k).round_to(bits)
    }

    /// Natural logarithm of a positive number.
    pub fn ln(&self) -> Self {
        assert!(self.m.sign() == Sign::Plus, "logarithm of a non-positive number");
        let bits = self.bits;
        let g = bits + 32;
        let x = self.round_to(g);
        let e = x.exponent();
        // y in [1, 2)
        let y = x.shift(-e);
        let one = Fixed::from_int(1, g);
        let z = (y.clone() - one.clone()).div(&(y + one));
        let ln_y = atanh_series(&z).shift(1);
        (ln_y + Fixed::ln2(g).mul_int(e)).round_to(bits)
    }

    /// `(cos x, sin x)`.
    pub fn cos_sin(&self) -> (Self, Self) {
        let bits = self.bits;
        let g = bits + 32;
        let x = self.round_to(g);
        let two_pi = Fixed::pi(g).shift(1);
        // reduce to [-pi, pi)
        let k = (x.clone() + Fixed::pi(g)).div(&two_pi).m >> g;
        let r = x - two_pi.mul_int(k);
        let r2 = r.clone() * r.clone();
        let mut sin = r.clone();
        let mut term = r;
        let mut i = 1u64;
        loop {
            term = -(term * r2.clone()).div_int((i + 1) * (i + 2));
            if term.is_zero() {
                break;
            }
            sin = sin + term.clone();
            i += 2;
        }
        let mut cos = Fixed::from_int(1, g);
        let mut term = cos.clone();
        let mut i = 0u64;
        loop {
            term = -(term * r2.clone()).div_int((i + 1) * (i + 2));
            if term.is_zero() {
                break;
            }
            cos = cos + term.clone();
            i += 2;
        }
        (cos.round_to(bits), sin.round_to(bits))
    }

    pub fn to_f64(&self) -> f64 {
        let excess = self.m.bits().saturating_sub(60);
        let top = (&self.m >> excess).to_f64().unwrap_or(f64::NAN);
        top * 2f64.powi(excess as i32 - self.bits as i32)
    }

    /// Decimal expansion with `digits` places after the point, truncated.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scaled = (self.m.abs() * BigInt::from(10).pow(digits as u32)) >> self.bits;
        let s = scaled.to_string();
        let s = if s.len() <= digits {
            format!("{}{}", "0".repeat(digits + 1 - s.len()), s)
        } else {
            s
        };
        let (int, frac) = s.split_at(s.len() - digits);
        let sign = if self.m.is_negative() { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }
}

/// `sum z^(2i+1)/(2i+1)` for `|z| <= 1/3`.
fn atanh_series(z: &Fixed) -> Fixed {
    let z2 = z.clone() * z.clone();
    let mut power = z.clone();
    let mut sum = z.clone();
    let mut k = 3u64;
    loop {
        power = power * z2.clone();
        let term = power.div_int(k);
        if term.is_zero() {
            return sum;
        }
        sum = sum + term;
        k += 2;
    }
}

/// `atan(1/x)` for an integer `x > 1`.
fn atan_inv(x: u64, bits: u32) -> Fixed {
    let x2 = BigInt::from(x) * x;
    let mut power = Fixed::from_ratio(1, x, bits);
    let mut sum = power.clone();
    let mut k = 1u64;
    loop {
        power = power.div_int(x2.clone());
        k += 2;
        let term = power.div_int(k);
        if term.is_zero() {
            return sum;
        }
        if (k / 2) % 2 == 1 {
            sum = sum - term;
        } else {
            sum = sum + term;
        }
    }
}

impl Add for Fixed {
    type Output = Fixed;
    fn add(self, rhs: Fixed) -> Fixed {
        self.same(&rhs);
        Fixed {
            m: self.m + rhs.m,
            bits: self.bits,
        }
    }
}

impl Sub for Fixed {
    type Output = Fixed;
    fn sub(self, rhs: Fixed) -> Fixed {
        self.same(&rhs);
        Fixed {
            m: self.m - rhs.m,
            bits: self.bits,
        }
    }
}

impl Mul for Fixed {
    type Output = Fixed;
    fn mul(self, rhs: Fixed) -> Fixed {
        self.same(&rhs);
        Fixed {
            m: (self.m * rhs.m) >> self.bits,
            bits: self.bits,
        }
    }
}

impl Neg for Fixed {
    type Output = Fixed;
    fn neg(self) -> Fixed {
        Fixed {
            m: -self.m,
            bits: self.bits,
        }
    }
}

impl PartialOrd for Fixed {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fixed {
    fn cmp(&self, other: &Self) -> Ordering {
        self.same(other);
        self.m.cmp(&other.m)
    }
}

/// `re + i im`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    pub re: Fixed,
    pub im: Fixed,
}

impl Complex {
    pub fn new(re: Fixed, im: Fixed) -> Self {
        Complex { re, im }
    }

    pub fn from_real(re: Fixed) -> Self {
        let bits = re.bits();
        Complex {
            re,
            im: Fixed::zero(bits),
        }
    }

    pub fn one(bits: u32) -> Self {
        Complex::from_real(Fixed::from_int(1, bits))
    }

    /// `r (cos theta + i sin theta)`.
    pub fn from_polar(r: &Fixed, theta: &Fixed) -> Self {
        let (c, s) = theta.cos_sin();
        Complex {
            re: r.clone() * c,
            im: r.clone() * s,
        }
    }

    pub fn norm_sqr(&self) -> Fixed {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    pub fn abs(&self) -> Fixed {
        self.norm_sqr().sqrt()
    }

    /// `log |z|`, computed as `ln(|z|^2) / 2` to avoid the square root.
    pub fn ln_abs(&self) -> Fixed {
        self.norm_sqr().ln().shift(-1)
    }

    pub fn scale(&self, k: impl Into<BigInt>) -> Self {
        let k = k.into();
        Complex {
            re: self.re.mul_int(k.clone()),
            im: self.im.mul_int(k),
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        let den = other.norm_sqr();
        let re = self.re.clone() * other.re.clone() + self.im.clone() * other.im.clone();
        let im = self.im.clone() * other.re.clone() - self.re.clone() * other.im.clone();
        Complex {
            re: re.div(&den),
            im: im.div(&den),
        }
    }

    pub fn powu(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Complex::one(self.re.bits());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }
}

impl Add for Complex {
    type Output = Complex;
    fn add(self, rhs: Complex) -> Complex {
        Complex {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for Complex {
    type Output = Complex;
    fn sub(self, rhs: Complex) -> Complex {
        Complex {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Mul for Complex {
    type Output = Complex;
    fn mul(self, rhs: Complex) -> Complex {
        let re = self.re.clone() * rhs.re.clone() - self.im.clone() * rhs.im.clone();
        let im = self.re * rhs.im + self.im * rhs.re;
        Complex { re, im }
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex {
            re: -self.re,
            im: -self.im,
        }
    }
}
