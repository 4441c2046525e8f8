//! Reduced positive definite binary quadratic forms and their Heegner points.

use std::fmt;

use num_integer::Integer;

use super::GzError;
use crate::fixed::Fixed;

/// `A x^2 + B xy + C y^2` with `A > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HeegnerForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl HeegnerForm {
    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        a > 0 && b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    /// Real and imaginary parts of `tau = (-B + sqrt d)/(2A)`.
    pub fn tau(&self, bits: u32) -> (Fixed, Fixed) {
        let re = Fixed::from_ratio(-self.b, 2 * self.a, bits);
        let im = Fixed::from_int(-self.disc(), bits)
            .sqrt()
            .div_int(2 * self.a);
        (re, im)
    }
}

impl fmt::Display for HeegnerForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// One reduced primitive form per class of discriminant `d`, sorted.
pub fn reduced_forms(d: i64) -> Result<Vec<HeegnerForm>, GzError> {
    if d >= 0 || !matches!(d.rem_euclid(4), 0 | 1) {
        return Err(GzError::BadDiscriminant(d));
    }
    let mut out = Vec::new();
    let mut a = 1i64;
    // reduced forms have 3 A^2 <= |d|
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let form = HeegnerForm { a, b, c: num / (4 * a) };
            if form.is_reduced() && a.gcd(&b).gcd(&form.c) == 1 {
                out.push(form);
            }
        }
        a += 1;
    }
    out.sort();
    Ok(out)
}

pub fn class_number(d: i64) -> Result<usize, GzError> {
    Ok(reduced_forms(d)?.len())
}
