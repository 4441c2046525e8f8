//! Exact arithmetic intersection numbers `T_1 . CM(K)` on Hilbert modular
//! surfaces for quartic CM fields `K = Q(sqrt D)(sqrt Delta)`, the reflex-side
//! count `b_1(p)` that must equal twice them, and the Gross–Zagier formula for
//! singular moduli checked against a high-precision `j`.
//!
//! Everything except the singular-moduli oracle is exact: coefficients of
//! `log p` are rationals and `log` itself appears only in presentation.

pub mod enumerate;
pub mod exactnum;
pub mod fixed;
pub mod grosskeating;
pub mod gzmoduli;
pub mod intersect;
pub mod quadcm;
pub mod tmatrix;

use thiserror::Error;

pub use enumerate::enumerate_fields;
pub use exactnum::{hilbert_symbol, kronecker_symbol, NumError, Place};
pub use grosskeating::GkError;
pub use gzmoduli::{gz_total, singular_moduli_log, GzError, GzParams};
pub use intersect::{b1_at_p, intersection_at_p, intersection_total, IntersectError, IntersectionResult};
pub use quadcm::{validate_cm_field, CmFieldData, FieldError, QuadElem};
pub use tmatrix::{all_tmatrices, TMatrix, TMatrixError};

/// Any error raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    TMatrix(#[from] TMatrixError),
    #[error(transparent)]
    GrossKeating(#[from] GkError),
    #[error(transparent)]
    Intersect(#[from] IntersectError),
    #[error(transparent)]
    Gz(#[from] GzError),
}
