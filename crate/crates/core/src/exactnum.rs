//! Integer and rational utilities: valuations, factorization, and the
//! Kronecker and Hilbert symbols at every place of Q.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("the valuation of zero is undefined")]
    ZeroValuation,
    #[error("{0} is not a prime")]
    NotPrime(i64),
    #[error("cannot factor zero")]
    FactorZero,
    #[error("the Kronecker symbol (a|0) is not supported")]
    KroneckerZeroModulus,
    #[error("the Hilbert symbol needs nonzero arguments")]
    HilbertZero,
}

/// A place of Q: a finite prime or the real place.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Prime(i64),
    Infinity,
}

impl Place {
    pub fn prime(p: i64) -> Result<Self, NumError> {
        if is_prime(p) {
            Ok(Place::Prime(p))
        } else {
            Err(NumError::NotPrime(p))
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Prime(p) => write!(f, "{p}"),
            Place::Infinity => f.write_str("inf"),
        }
    }
}

/// Prime factorization of a nonzero integer.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    negative: bool,
    factors: Vec<(i64, u32)>,
}

impl Factorization {
    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub fn factors(&self) -> &[(i64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = i64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn exponent_of(&self, p: i64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    /// Multiplies the factorization back out.
    pub fn value(&self) -> i128 {
        let magnitude: i128 = self
            .factors
            .iter()
            .map(|&(p, e)| (p as i128).pow(e))
            .product();
        if self.negative {
            -magnitude
        } else {
            magnitude
        }
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            f.write_str("-")?;
        }
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, &(p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin; the first twelve prime bases are exact for all of u64.
pub fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    let n = n as u64;
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Largest `e` with `p^e | x`.
pub fn padic_valuation(x: i64, p: i64) -> Result<u32, NumError> {
    if x == 0 {
        return Err(NumError::ZeroValuation);
    }
    if !is_prime(p) {
        return Err(NumError::NotPrime(p));
    }
    let mut x = x.unsigned_abs();
    let p = p as u64;
    let mut e = 0;
    while x % p == 0 {
        x /= p;
        e += 1;
    }
    Ok(e)
}

/// Splits a nonzero big integer as `p^e * unit`.
pub(crate) fn split_valuation(x: &BigInt, p: u64) -> (u32, BigInt) {
    debug_assert!(!x.is_zero());
    let p = BigInt::from(p);
    let mut unit = x.clone();
    let mut e = 0;
    loop {
        let (q, r) = unit.div_rem(&p);
        if !r.is_zero() {
            break;
        }
        unit = q;
        e += 1;
    }
    (e, unit)
}

/// Trial division, with a primality check on the cofactor so large prime
/// factors terminate early.
pub fn factorize(n: i64) -> Result<Factorization, NumError> {
    if n == 0 {
        return Err(NumError::FactorZero);
    }
    let negative = n < 0;
    let mut m = n.unsigned_abs();
    let mut factors = Vec::new();
    let mut d: u64 = 2;
    while m > 1 {
        if is_prime(m as i64) {
            factors.push((m as i64, 1));
            break;
        }
        if d * d > m {
            factors.push((m as i64, 1));
            break;
        }
        if m % d == 0 {
            let mut e = 0;
            while m % d == 0 {
                m /= d;
                e += 1;
            }
            factors.push((d as i64, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    Ok(Factorization { negative, factors })
}

/// Distinct prime divisors of a nonzero integer, ascending.
pub fn prime_divisors(n: i64) -> Vec<i64> {
    factorize(n).map(|f| f.primes().collect()).unwrap_or_default()
}

pub fn is_squarefree(n: i64) -> bool {
    match factorize(n) {
        Ok(f) => f.factors().iter().all(|&(_, e)| e == 1),
        Err(_) => false,
    }
}

pub fn is_square(n: i64) -> bool {
    if n < 0 {
        return false;
    }
    let r = isqrt(n as u64);
    r * r == n as u64
}

/// Floor of the square root.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// Primes up to and including `bound`.
pub fn primes_up_to(bound: i64) -> Vec<i64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(k, &is_p)| is_p.then_some(k as i64))
        .collect()
}

/// The Kronecker symbol `(a|n)`.
pub fn kronecker_symbol(a: i64, n: i64) -> Result<i8, NumError> {
    if n == 0 {
        return Err(NumError::KroneckerZeroModulus);
    }
    let a = a as i128;
    let mut n = n as i128;
    let mut sign = 1i8;
    if n < 0 {
        n = -n;
        if a < 0 {
            sign = -sign;
        }
    }
    let twos = n.trailing_zeros();
    if twos > 0 {
        if a % 2 == 0 {
            return Ok(0);
        }
        let r = a.rem_euclid(8);
        if twos % 2 == 1 && (r == 3 || r == 5) {
            sign = -sign;
        }
        n >>= twos;
    }
    Ok(sign * jacobi(a.rem_euclid(n), n))
}

/// Jacobi symbol for odd positive `n` and `0 <= a < n`.
fn jacobi(mut a: i128, mut n: i128) -> i8 {
    let mut sign = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// An integer in the same square class as `q = num/den`.
fn square_class_rep(q: &BigRational) -> BigInt {
    q.numer() * q.denom()
}

/// The Hilbert symbol `(a, b)_v` of two nonzero rationals.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, v: Place) -> Result<i8, NumError> {
    if a.is_zero() || b.is_zero() {
        return Err(NumError::HilbertZero);
    }
    match v {
        Place::Infinity => Ok(if a.is_negative() && b.is_negative() {
            -1
        } else {
            1
        }),
        Place::Prime(p) => {
            if !is_prime(p) {
                return Err(NumError::NotPrime(p));
            }
            Ok(hilbert_at_prime(
                &square_class_rep(a),
                &square_class_rep(b),
                p as u64,
            ))
        }
    }
}

/// Integer convenience wrapper around [`hilbert_symbol`].
pub fn hilbert_symbol_int(a: i64, b: i64, v: Place) -> Result<i8, NumError> {
    hilbert_symbol(
        &BigRational::from_integer(a.into()),
        &BigRational::from_integer(b.into()),
        v,
    )
}

fn residue(x: &BigInt, m: u64) -> u64 {
    x.mod_floor(&BigInt::from(m))
        .to_u64()
        .expect("residue fits in u64")
}

fn hilbert_at_prime(a: &BigInt, b: &BigInt, p: u64) -> i8 {
    let (alpha, u) = split_valuation(a, p);
    let (beta, w) = split_valuation(b, p);
    if p == 2 {
        let u = residue(&u, 8);
        let w = residue(&w, 8);
        let eps = |x: u64| ((x - 1) / 2) & 1;
        let omega = |x: u64| ((x * x - 1) / 8) & 1;
        let e = eps(u) * eps(w) + u64::from(alpha) * omega(w) + u64::from(beta) * omega(u);
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        let mut s = 1i8;
        if alpha % 2 == 1 && beta % 2 == 1 && p % 4 == 3 {
            s = -s;
        }
        let legendre = |x: &BigInt| {
            kronecker_symbol(residue(x, p) as i64, p as i64).expect("p is nonzero")
        };
        if beta % 2 == 1 {
            s *= legendre(&u);
        }
        if alpha % 2 == 1 {
            s *= legendre(&w);
        }
        s
    }
}

/// Places at which `(a, b)_v` can be nontrivial: the real place and every
/// prime dividing `2ab` (numerators and denominators).
pub fn relevant_places(a: &BigRational, b: &BigRational) -> Vec<Place> {
    let mut primes = vec![2i64];
    for x in [a.numer(), a.denom(), b.numer(), b.denom()] {
        let x = x.abs();
        let x = x.to_i64().expect("relevant_places supports 64-bit parts");
        if x > 1 {
            primes.extend(prime_divisors(x));
        }
    }
    primes.sort_unstable();
    primes.dedup();
    let mut places: Vec<Place> = primes.into_iter().map(Place::Prime).collect();
    places.push(Place::Infinity);
    places
}
