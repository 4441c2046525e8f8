//! Independent reference computations used by the integration tests. None of
//! these call into the library routines they are compared against.

#![allow(dead_code)]

use std::collections::BTreeMap;

/// Trial-division factorization, ascending primes.
pub fn trial_factor(mut n: u64) -> BTreeMap<u64, u32> {
    let mut out = BTreeMap::new();
    let mut p = 2u64;
    while p * p <= n {
        while n % p == 0 {
            *out.entry(p).or_insert(0) += 1;
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        *out.entry(n).or_insert(0) += 1;
    }
    out
}

pub fn is_prime_naive(n: i64) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| n % k != 0)
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Legendre symbol by Euler's criterion, `p` an odd prime.
pub fn legendre_euler(a: i64, p: i64) -> i8 {
    let r = a.rem_euclid(p) as u64;
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p as u64 - 1) / 2, p as u64) == 1 {
        1
    } else {
        -1
    }
}

/// Kronecker symbol `(d | n)` for `n > 0` built multiplicatively from
/// Euler's criterion and the mod 8 rule at 2.
pub fn kronecker_naive(d: i64, n: i64) -> i8 {
    assert!(n > 0);
    let mut acc = 1i8;
    for (p, e) in trial_factor(n as u64) {
        let p = p as i64;
        let s = if p == 2 {
            match d.rem_euclid(8) {
                1 | 7 => 1,
                3 | 5 => -1,
                _ => 0,
            }
        } else {
            legendre_euler(d, p)
        };
        for _ in 0..e {
            acc *= s;
        }
    }
    acc
}

/// Squares modulo `m` as a lookup table.
pub fn squares_mod(m: u64) -> Vec<bool> {
    let mut table = vec![false; m as usize];
    for z in 0..m {
        table[(z * z % m) as usize] = true;
    }
    table
}

/// Whether `z^2 = a x^2 + b y^2` has a primitive solution modulo `p^k`: one of
/// `x`, `y` is then a unit and can be scaled to 1.
pub fn hilbert_brute(a: i64, b: i64, p: i64, k: u32, squares: &[bool]) -> i8 {
    let m = p.pow(k);
    let is_sq = |v: i64| squares[v.rem_euclid(m) as usize];
    let found = (0..m).any(|y| is_sq(a + b * y * y)) || (0..m).any(|x| is_sq(a * x * x + b));
    if found {
        1
    } else {
        -1
    }
}

/// Class number of a fundamental discriminant from Dirichlet's formula
/// `h = -(w / (2|d|)) sum_{0 < a < |d|} (d | a) a`.
pub fn class_number_fundamental(d: i64) -> i64 {
    let w = match d {
        -3 => 6,
        -4 => 4,
        _ => 2,
    };
    let s: i64 = (1..-d).map(|a| i64::from(kronecker_naive(d, a)) * a).sum();
    -w * s / (2 * -d)
}

pub fn is_fundamental(d: i64) -> bool {
    if d >= 0 {
        return false;
    }
    let squarefree = |n: i64| trial_factor(n as u64).values().all(|&e| e == 1);
    match d.rem_euclid(4) {
        1 => squarefree(-d),
        0 => {
            let m = -d / 4;
            matches!(m % 4, 1 | 2) && squarefree(m)
        }
        _ => false,
    }
}

/// Class number of primitive forms of any negative discriminant, via the
/// conductor formula `h(d_K f^2) = h(d_K) f / [O_K^* : O^*] prod_{p | f} (1 - (d_K|p)/p)`.
pub fn class_number_naive(d: i64) -> i64 {
    assert!(d < 0 && matches!(d.rem_euclid(4), 0 | 1));
    let mut f = 1i64;
    let mut dk = d;
    for (p, e) in trial_factor((-d) as u64) {
        let p = p as i64;
        let mut e = e;
        while e >= 2 {
            let cand = dk / (p * p);
            if cand.rem_euclid(4) == 0 || cand.rem_euclid(4) == 1 {
                dk = cand;
                f *= p;
                e -= 2;
            } else {
                break;
            }
        }
    }
    assert!(is_fundamental(dk), "{d} -> {dk}");
    let hk = class_number_fundamental(dk);
    if f == 1 {
        return hk;
    }
    let unit_index = match dk {
        -3 => 3,
        -4 => 2,
        _ => 1,
    };
    // h f prod (p - (dk|p)) / p over p | f, divided by the unit index
    let mut num = hk * f;
    let mut den = unit_index;
    for p in trial_factor(f as u64).keys() {
        let p = *p as i64;
        num *= p - i64::from(kronecker_naive(dk, p));
        den *= p;
    }
    assert_eq!(num % den, 0);
    num / den
}

/// Every `[[a, b], [b, c]]` found by direct search with `c > 0`,
/// `ac - b^2 = (D~ - n^2)/D` and `a + D b + ((D^2 - D)/4) c = -mu n`, whose
/// reconstructed `Delta = (2 mu n - D c - (2b + D c) sqrt D)/2` equals `(u, v)`.
pub fn brute_tmatrices(d: i64, u: i64, v: i64) -> Vec<(i64, i64, (i64, i64, i64))> {
    let dtilde = (u * u - d * v * v) / 4;
    let mut out = Vec::new();
    let mut n = 1i64;
    while n * n < dtilde {
        if (dtilde - n * n) % (4 * d) == 0 {
            let det = (dtilde - n * n) / d;
            for mu in [1i64, -1] {
                // |u| + 2n bounds c since u = 2 mu n - D c
                for c in 1..=(u.abs() + 2 * n) {
                    if 2 * mu * n - d * c != u {
                        continue;
                    }
                    for b in -(d * c + v.abs())..=(d * c + v.abs()) {
                        let a = -mu * n - d * b - (d * d - d) / 4 * c;
                        if a > 0 && a * c - b * b == det && -(2 * b + d * c) == v {
                            out.push((n, mu, (a, b, c)));
                        }
                    }
                }
            }
        }
        n += 1;
    }
    out
}
