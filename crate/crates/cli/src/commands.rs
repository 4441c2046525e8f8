use std::fmt::Write as _;

use cmint::exactnum::is_prime;
use cmint::fixed::Fixed;
use cmint::gzmoduli::{gz_total, log_value_fixed, singular_moduli_log, GzParams};
use cmint::intersect::{b1_at_p, b1_at_p_direct, candidate_primes, intersection_at_p};
use cmint::quadcm::{field_violations, validate_cm_field, CmFieldData, QuadElem, Violation};
use cmint::{enumerate_fields, Error};
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::report::*;
use crate::{FieldArgs, Format, Outcome};

const GZ_TOLERANCE_EXP: u32 = 6;

fn emit<T: Serialize>(format: Format, report: &T, text: impl FnOnce() -> String) {
    match format {
        Format::Json => println!("{}", serde_json::to_string(report).expect("reports serialize")),
        Format::Text => print!("{}", text()),
    }
}

fn outcome(ok: bool) -> Outcome {
    if ok {
        Outcome::Success
    } else {
        Outcome::DomainFailure
    }
}

/// The element and its violations. An even `D` has no `omega`, so only the
/// conditions on `D` itself can be reported.
fn check_field(args: &FieldArgs) -> Result<(Option<QuadElem>, Vec<Violation>), Error> {
    let (u, v) = args.delta;
    if args.d <= 0 {
        return Err(cmint::FieldError::NonPositiveD(args.d).into());
    }
    if args.d % 2 == 0 {
        let mut out = vec![Violation::DNotOneModFour];
        if !is_prime(args.d) {
            out.insert(0, Violation::DNotPrime);
        }
        return Ok((None, out));
    }
    let delta = QuadElem::from_uv(args.d, u, v)?;
    Ok((Some(delta), field_violations(args.d, &delta, args.w)))
}

pub fn validate(args: &FieldArgs, format: Format) -> Result<Outcome, Error> {
    let (delta, violations) = check_field(args)?;
    let report = ValidateReport {
        d: args.d,
        dtilde: delta.map(|e| e.norm()),
        delta: [args.delta.0, args.delta.1],
        valid: violations.is_empty(),
        violations: violations
            .iter()
            .map(|v| ViolationReport {
                code: v.code(),
                message: v.to_string(),
            })
            .collect(),
        w: [args.w.0, args.w.1],
    };
    emit(format, &report, || {
        let mut s = format!(
            "{}: D={} Delta=({},{}) w=({},{})",
            if report.valid { "valid" } else { "invalid" },
            report.d,
            report.delta[0],
            report.delta[1],
            report.w[0],
            report.w[1]
        );
        if let Some(dt) = report.dtilde {
            let _ = write!(s, " Dtilde={dt}");
        }
        s.push('\n');
        for v in &report.violations {
            let _ = writeln!(s, "  {}: {}", v.code, v.message);
        }
        s
    });
    Ok(outcome(report.valid))
}

/// Per-prime coefficients with both `b_1` classifiers, in increasing `p`.
fn compare(cm: &CmFieldData) -> Result<Vec<Comparison>, Error> {
    candidate_primes(cm)
        .into_par_iter()
        .map(|p| {
            let b1 = b1_at_p(cm, p)?;
            let direct = b1_at_p_direct(cm, p)?;
            let as_int = |r: &num_rational::BigRational| r.to_integer().to_i64().expect("b1 fits in i64");
            Ok(Comparison {
                p,
                coeff: Ratio::from_big(&intersection_at_p(cm, p)),
                b1: as_int(&b1),
                b1_direct: as_int(&direct),
            })
        })
        .filter(|c: &Result<Comparison, Error>| {
            c.as_ref().map_or(true, |c| c.coeff.num != 0 || c.b1 != 0 || c.b1_direct != 0)
        })
        .collect()
}

fn terms_of(rows: &[Comparison]) -> Vec<Term> {
    rows.iter()
        .map(|r| Term {
            b1: r.b1,
            coeff: r.coeff,
            p: r.p,
        })
        .collect()
}

pub fn intersect(args: &FieldArgs, verify: bool, format: Format) -> Result<Outcome, Error> {
    let delta = QuadElem::from_uv(args.d, args.delta.0, args.delta.1)?;
    let cm = validate_cm_field(args.d, delta, args.w)?;
    let rows = compare(&cm)?;
    let verified = rows.iter().all(Comparison::agrees);
    let report = IntersectReport {
        d: cm.d(),
        dtilde: cm.dtilde(),
        terms: terms_of(&rows),
        verified,
    };
    emit(format, &report, || {
        let mut s = format!("field: {cm}\n");
        let _ = writeln!(s, "T1.CM(K) = {}", formal_sum(rows.iter().map(|r| (r.p, r.coeff))));
        if !rows.is_empty() {
            if verify {
                let _ = writeln!(s, "{:>8} {:>8} {:>8} {:>8}  2c_p = b1", "p", "c_p", "b1(p)", "direct");
            } else {
                let _ = writeln!(s, "{:>8} {:>8} {:>8}", "p", "c_p", "b1(p)");
            }
            for r in &rows {
                let c = r.coeff.to_string();
                if verify {
                    let mark = if r.agrees() { "yes" } else { "NO" };
                    let _ = writeln!(s, "{:>8} {:>8} {:>8} {:>8}  {mark}", r.p, c, r.b1, r.b1_direct);
                } else {
                    let _ = writeln!(s, "{:>8} {:>8} {:>8}", r.p, c, r.b1);
                }
            }
        }
        let _ = writeln!(s, "verified: {verified}");
        s
    });
    if !verified {
        log::error!("b1(p) differs from 2 c_p for {cm}");
    }
    Ok(outcome(verified))
}

pub fn gz(d1: i64, d2: i64, precision: u32, format: Format) -> Result<Outcome, Error> {
    let params = GzParams::new(d1, d2)?;
    let total = gz_total(&params)?;
    let oracle = singular_moduli_log(&params, precision)?;
    let formula = log_value_fixed(&total, oracle.bits());
    let diff = (oracle.clone() - formula.clone()).abs();
    let tolerance = Fixed::from_ratio(1, 10i64.pow(GZ_TOLERANCE_EXP), oracle.bits());
    let report = GzReport {
        d1,
        d2,
        discrepancy: format!("{:.3e}", diff.to_f64()),
        formula: formula.to_decimal(precision as usize),
        oracle: oracle.to_decimal(precision as usize),
        precision,
        terms: gz_terms(&total),
        within_tolerance: diff < tolerance,
    };
    emit(format, &report, || {
        let mut s = format!("d1={d1} d2={d2} Dtilde={}\n", params.dtilde());
        let sum = formal_sum(report.terms.iter().map(|t| (t.p, t.coeff)));
        let _ = writeln!(s, "log|J(d1,d2)| = {sum}");
        let _ = writeln!(s, "formula:     {}", report.formula);
        let _ = writeln!(s, "oracle:      {}", report.oracle);
        let _ = writeln!(s, "discrepancy: {}", report.discrepancy);
        let _ = writeln!(s, "within 1e-{GZ_TOLERANCE_EXP}: {}", report.within_tolerance);
        s
    });
    Ok(outcome(report.within_tolerance))
}

pub fn enumerate(ds: &[i64], bound: i64, format: Format) -> Outcome {
    let mut fields = Vec::new();
    for &d in ds {
        let found = enumerate_fields(d, bound);
        if found.is_empty() && !(is_prime(d) && d % 4 == 1) {
            log::warn!("D = {d} is not a prime congruent to 1 mod 4; skipped");
        }
        fields.extend(found);
    }
    let entries: Vec<EnumeratedField> = fields
        .par_iter()
        .map(|cm| {
            let (u, v) = cm.uv();
            let (terms, verified) = match compare(cm) {
                Ok(rows) => (terms_of(&rows), rows.iter().all(Comparison::agrees)),
                Err(e) => {
                    log::error!("{cm}: {e}");
                    (Vec::new(), false)
                }
            };
            EnumeratedField {
                d: cm.d(),
                dtilde: cm.dtilde(),
                delta: [u, v],
                terms,
                verified,
                w: [cm.w().0, cm.w().1],
            }
        })
        .collect();
    let summary = Summary {
        failed: entries.iter().filter(|e| !e.verified).count(),
        fields: entries.len(),
        nonzero: entries.iter().filter(|e| e.terms.iter().any(|t| t.coeff.num != 0)).count(),
    };
    let ok = summary.failed == 0;
    let report = EnumerateReport {
        fields: entries,
        summary,
    };
    emit(format, &report, || {
        let mut s = String::new();
        for e in &report.fields {
            let sum = formal_sum(e.terms.iter().map(|t| (t.p, t.coeff)));
            let check = if e.verified { "ok" } else { "FAILED" };
            let _ = writeln!(
                s,
                "D={} Delta=({},{}) w=({},{}) Dtilde={}: {sum} [b1 {check}]",
                e.d, e.delta[0], e.delta[1], e.w[0], e.w[1], e.dtilde
            );
        }
        let m = &report.summary;
        let _ = writeln!(s, "fields: {}, nonzero: {}, failed: {}", m.fields, m.nonzero, m.failed);
        s
    });
    outcome(ok)
}
