//! The positive definite matrices `T(mu n) = [[a, b], [b, c]]` attached to a
//! CM field and an admissible integer `n`.

use std::fmt;

use thiserror::Error;

use crate::exactnum::prime_divisors;
use crate::quadcm::CmFieldData;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TMatrixError {
    #[error("n = {n} is not admissible: (D~ - n^2)/(4D) must be a positive integer")]
    NotAdmissible { n: i64 },
    #[error("c = (2*mu*n - u)/D is not a positive integer for n = {n}, mu = {mu}")]
    CNotIntegral { n: i64, mu: Sign },
    #[error("b = (-v - D*c)/2 is not an integer for n = {n}, mu = {mu}")]
    BNotIntegral { n: i64, mu: Sign },
    #[error("det T = {got} differs from (D~ - n^2)/D = {expected}")]
    DetMismatch { got: i64, expected: i64 },
}

/// The sign `mu`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// An admissible `n` with the signs that go with it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleN {
    pub n: i64,
    pub signs: Vec<Sign>,
}

/// `T(mu n) = [[a, b], [b, c]]` together with the field constants it was built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TMatrix {
    pub n: i64,
    pub mu: Sign,
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub det: i64,
    d: i64,
    dtilde: i64,
}

impl TMatrix {
    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn dtilde(&self) -> i64 {
        self.dtilde
    }

    /// `(D~ - n^2)/(4D) = det/4`; its prime divisors index the local factors.
    pub fn reduced_det(&self) -> i64 {
        self.det / 4
    }

    /// Names of the structural invariants that fail; empty for a well-formed matrix.
    pub fn invariant_violations(&self) -> Vec<&'static str> {
        let mut bad = Vec::new();
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let d = self.d as i128;
        let n = self.n as i128;
        if a * c - b * b != self.det as i128
            || (self.dtilde as i128 - n * n) != d * self.det as i128
        {
            bad.push("det");
        }
        if self.det <= 0 || self.det % 4 != 0 {
            bad.push("det positive and divisible by 4");
        }
        if a + d * b + (d * d - d) / 4 * c != -(self.mu.value() as i128) * n {
            bad.push("linear relation");
        }
        if self.a <= 0 {
            bad.push("positive definite");
        }
        // a, c in {0, 3} mod 4 and not both 0. The pattern (3, 3) does occur,
        // exactly when w = 1 + omega mod 2, so "one is 0 mod 4" is not required.
        let (am, cm) = (self.a.rem_euclid(4), self.c.rem_euclid(4));
        if !matches!((am, cm), (0, 3) | (3, 0) | (3, 3)) {
            bad.push("a, c are 0 or -1 mod 4 and not both 0");
        }
        if self.det > 0 && prime_divisors(self.det).iter().any(|&q| self.a % q == 0 && self.c % q == 0) {
            bad.push("no prime divides det, a and c");
        }
        bad
    }

    /// `Delta` rebuilt as `(2 mu n - Dc - (2b + Dc) sqrt D)/2`, returned as `(u, v)`.
    pub fn reconstructed_delta_uv(&self) -> (i64, i64) {
        let mu_n = self.mu.value() * self.n;
        (2 * mu_n - self.d * self.c, -(2 * self.b + self.d * self.c))
    }
}

impl fmt::Display for TMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "T({}*{}) = [[{}, {}], [{}, {}]] (det {})",
            self.mu, self.n, self.a, self.b, self.b, self.c, self.det
        )
    }
}

fn is_admissible(cm: &CmFieldData, n: i64) -> bool {
    let num = cm.dtilde() as i128 - n as i128 * n as i128;
    n > 0 && num > 0 && num % (4 * cm.d() as i128) == 0
}

/// All `0 < n < sqrt(D~)` with `(D~ - n^2)/(4D)` a positive integer, ascending,
/// each with its signs: both when `D | n`, otherwise the one with `D | u - 2 mu n`.
pub fn admissible_n(cm: &CmFieldData) -> Vec<AdmissibleN> {
    let d = cm.d();
    let (u, _) = cm.uv();
    let mut out = Vec::new();
    let mut n = 1i64;
    while (n as i128) * (n as i128) < cm.dtilde() as i128 {
        if is_admissible(cm, n) {
            let signs = if n % d == 0 {
                vec![Sign::Plus, Sign::Minus]
            } else {
                [Sign::Plus, Sign::Minus]
                    .into_iter()
                    .filter(|mu| (u - 2 * mu.value() * n).rem_euclid(d) == 0)
                    .collect()
            };
            debug_assert_eq!(signs.len(), if n % d == 0 { 2 } else { 1 });
            out.push(AdmissibleN { n, signs });
        }
        n += 1;
    }
    out
}

/// Builds `T(mu n)` from `c = (2 mu n - u)/D`, `b = (-v - Dc)/2`,
/// `a = -mu n - Db - ((D^2 - D)/4) c`.
pub fn build_tmatrix(cm: &CmFieldData, n: i64, mu: Sign) -> Result<TMatrix, TMatrixError> {
    if !is_admissible(cm, n) {
        return Err(TMatrixError::NotAdmissible { n });
    }
    let d = cm.d();
    let (u, v) = cm.uv();
    let mu_n = mu.value() * n;
    let c_num = 2 * mu_n - u;
    if c_num % d != 0 || c_num / d <= 0 {
        return Err(TMatrixError::CNotIntegral { n, mu });
    }
    let c = c_num / d;
    let b_num = -v - d * c;
    if b_num % 2 != 0 {
        return Err(TMatrixError::BNotIntegral { n, mu });
    }
    let b = b_num / 2;
    let a = -mu_n - d * b - (d * d - d) / 4 * c;
    let expected = (cm.dtilde() - n * n) / d;
    let got = a as i128 * c as i128 - b as i128 * b as i128;
    if got != expected as i128 {
        return Err(TMatrixError::DetMismatch {
            got: got as i64,
            expected,
        });
    }
    Ok(TMatrix {
        n,
        mu,
        a,
        b,
        c,
        det: expected,
        d,
        dtilde: cm.dtilde(),
    })
}

/// Every `T(mu n)` of the field, in `(n, mu)` order.
pub fn all_tmatrices(cm: &CmFieldData) -> Vec<TMatrix> {
    admissible_n(cm)
        .into_iter()
        .flat_map(|adm| {
            adm.signs
                .into_iter()
                .map(move |mu| build_tmatrix(cm, adm.n, mu).expect("admissible (n, mu) builds"))
        })
        .collect()
}
