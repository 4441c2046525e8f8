//! Enumeration of admissible fields `(D, Delta, w)` with `Norm(Delta)` below a bound.
//!
//! `Delta` and `Delta * eps^2` (eps a unit) define the same field, so each
//! orbit is reduced to the representative of smallest `|Tr Delta|`. Distinct
//! orbits with the same norm are all kept; some of them may still give
//! isomorphic fields (for example `Delta` and its conjugate).

use std::collections::BTreeSet;

use crate::exactnum::{is_prime, is_square, isqrt};
use crate::quadcm::{validate_cm_field, CmFieldData, QuadElem};

/// The fundamental unit `(a + b sqrt D)/2` of `O_F` with `a, b > 0`, as `(a, b)`.
pub fn fundamental_unit(d: i64) -> (i64, i64) {
    assert!(d > 1 && d % 4 == 1 && !is_square(d), "D must be a non-square 1 mod 4");
    let mut b = 1i64;
    loop {
        let db2 = d * b * b;
        for target in [db2 - 4, db2 + 4] {
            if target > 0 && is_square(target) {
                return (isqrt(target as u64) as i64, b);
            }
        }
        b += 1;
    }
}

fn unit_square(d: i64) -> (QuadElem, QuadElem) {
    let (a, b) = fundamental_unit(d);
    let eps = QuadElem::from_uv(d, a, b).expect("a = b mod 2");
    let sq = eps * eps;
    (sq, sq.conj())
}

fn orbit_key(e: &QuadElem) -> (i64, i64) {
    let (u, v) = e.uv();
    (u.abs(), -v)
}

/// The representative of `Delta * eps^(2k)` with the smallest `|u|`, ties broken
/// towards the larger `v`.
pub fn canonicalize_delta(delta: QuadElem) -> QuadElem {
    let (up, down) = unit_square(delta.d());
    let mut best = delta;
    loop {
        let candidates = [best.try_mul(&up), best.try_mul(&down)];
        let next = candidates
            .into_iter()
            .flatten()
            .filter(|c| orbit_key(c) < orbit_key(&best))
            .min_by_key(orbit_key);
        match next {
            Some(c) => best = c,
            None => return best,
        }
    }
}

/// A `w` in `{0, 1} + {0, 1} omega` with `w^2 = Delta mod 4 O_F`. The
/// congruence only depends on `w mod 2 O_F`, so this search is complete.
pub fn find_w(d: i64, delta: &QuadElem) -> Option<(i64, i64)> {
    [(0, 0), (1, 0), (0, 1), (1, 1)].into_iter().find(|&(w0, w1)| {
        let w = QuadElem::new(d, w0, w1);
        (w * w - *delta).is_divisible_by(4)
    })
}

/// All admissible fields for `D` with `D~ <= bound`, one per unit-square orbit
/// of `Delta`, sorted by `(D~, u, v)`.
pub fn enumerate_fields(d: i64, bound: i64) -> Vec<CmFieldData> {
    if bound < 1 || !is_prime(d) || d % 4 != 1 {
        return Vec::new();
    }
    let (a, b) = fundamental_unit(d);
    let eps = (a as f64 + b as f64 * (d as f64).sqrt()) / 2.0;
    let u_max = ((eps + 1.0 / eps) * (bound as f64).sqrt()).ceil() as i64 + 2;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for u in (-u_max..0).rev() {
        let uu = u as i128 * u as i128;
        // u^2 - D v^2 = 4 D~ with 1 <= D~ <= bound
        let hi = (uu - 4) / d as i128;
        if hi < 0 {
            continue;
        }
        let v_max = isqrt(hi as u64) as i64;
        for v in -v_max..=v_max {
            if (u - v).rem_euclid(2) != 0 {
                continue;
            }
            let rest = uu - (d as i128) * (v as i128) * (v as i128);
            if rest % 4 != 0 || rest / 4 > bound as i128 || rest <= 0 {
                continue;
            }
            let delta = QuadElem::from_uv(d, u, v).expect("parity checked");
            let canon = canonicalize_delta(delta);
            if !seen.insert(canon.uv()) {
                continue;
            }
            if let Some(w) = find_w(d, &canon) {
                if let Ok(cm) = validate_cm_field(d, canon, w) {
                    out.push(cm);
                }
            }
        }
    }
    out.sort_by_key(|cm| (cm.dtilde(), cm.uv()));
    out
}
