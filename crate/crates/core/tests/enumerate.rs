mod common;

use cmint::enumerate::{canonicalize_delta, enumerate_fields, fundamental_unit};
use cmint::quadcm::QuadElem;

fn embeddings(d: i64, u: i64, v: i64) -> (f64, f64) {
    let s = (d as f64).sqrt();
    ((u as f64 + v as f64 * s) / 2.0, (u as f64 - v as f64 * s) / 2.0)
}

/// Whether `x / y` is an even power of the fundamental unit, read off both real
/// embeddings.
fn same_orbit(d: i64, x: (i64, i64), y: (i64, i64)) -> bool {
    let (a, b) = fundamental_unit(d);
    let log_eps2 = 2.0 * embeddings(d, a, b).0.abs().ln();
    let (x1, x2) = embeddings(d, x.0, x.1);
    let (y1, y2) = embeddings(d, y.0, y.1);
    let k1 = (x1 / y1).ln() / log_eps2;
    let k2 = (x2 / y2).ln() / log_eps2;
    (k1 - k1.round()).abs() < 1e-6 && (k1 + k2).abs() < 1e-6
}

fn admissible_brute(d: i64, u: i64, v: i64) -> bool {
    let dt = (u * u - d * v * v) / 4;
    if dt <= 1 || u >= 0 || dt % 4 != 1 {
        return false;
    }
    if common::trial_factor(dt as u64).values().any(|&e| e > 1) {
        return false;
    }
    // w = w0 + w1 omega with w^2 = Delta mod 4, over all residues mod 4
    let delta = QuadElem::from_uv(d, u, v).unwrap();
    (0..4).any(|w0| {
        (0..4).any(|w1| {
            let w = QuadElem::new(d, w0, w1);
            let (x, y) = (w * w - delta).xy();
            x % 4 == 0 && y % 4 == 0
        })
    })
}

#[test]
fn every_admissible_delta_has_exactly_one_representative() {
    let bound = 600i64;
    for d in [5i64, 13, 17] {
        let fields = enumerate_fields(d, bound);
        let reps: Vec<(i64, i64)> = fields.iter().map(|f| f.uv()).collect();
        for (i, x) in reps.iter().enumerate() {
            for y in &reps[i + 1..] {
                assert!(!same_orbit(d, *x, *y), "D={d}: {x:?} ~ {y:?}");
            }
        }
        // a box wide enough to meet every orbit at least once
        for u in -280i64..0 {
            for v in -130i64..=130 {
                if (u - v) % 2 != 0 || u * u - d * v * v <= 0 || (u * u - d * v * v) / 4 > bound {
                    continue;
                }
                if (u * u - d * v * v) % 4 != 0 || !admissible_brute(d, u, v) {
                    continue;
                }
                let hits = reps.iter().filter(|r| same_orbit(d, (u, v), **r)).count();
                assert_eq!(hits, 1, "D={d} Delta=({u}, {v})");
            }
        }
    }
}

#[test]
fn canonical_form_is_idempotent_and_invariant() {
    for d in [5i64, 13, 29] {
        let (a, b) = fundamental_unit(d);
        let eps = QuadElem::from_uv(d, a, b).unwrap();
        for f in enumerate_fields(d, 400) {
            let delta = f.delta();
            assert_eq!(canonicalize_delta(delta), delta);
            let moved = delta * eps * eps;
            assert_eq!(canonicalize_delta(moved), delta);
        }
    }
}

#[test]
fn output_is_sorted_and_deterministic() {
    let a = enumerate_fields(13, 800);
    let b = enumerate_fields(13, 800);
    assert_eq!(a, b);
    let keys: Vec<_> = a.iter().map(|f| (f.dtilde(), f.uv())).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(enumerate_fields(7, 100).is_empty());
    assert!(enumerate_fields(5, 0).is_empty());
}
