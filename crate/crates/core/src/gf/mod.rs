//! Arithmetic over finite fields `F_q` and dense matrices over them.
//!
//! Prime fields use direct modular arithmetic; binary extension fields
//! `GF(2^m)` use log/antilog tables. Orders are capped at `2^16`.

mod field;
mod matrix;

pub use field::{default_poly, is_irreducible, FieldElement, FieldSpec, MAX_ORDER};
pub use matrix::FieldMatrix;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u32),
    #[error("extension fields are supported for characteristic 2 only (p = {p}, m = {m})")]
    UnsupportedExtension { p: u32, m: u32 },
    #[error("field of order {p}^{m} exceeds 2^16")]
    FieldTooLarge { p: u32, m: u32 },
    #[error("polynomial {poly:#x} is not an irreducible polynomial of degree {m}")]
    ReducibleModulus { poly: u32, m: u32 },
    #[error("value {value} is not an element of a field of order {order}")]
    OutOfRange { value: u32, order: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix has rank {rank}, need full column rank {cols}")]
    RankDeficient { rank: usize, cols: usize },
    #[error("linear system has no solution")]
    InconsistentSystem,
}
