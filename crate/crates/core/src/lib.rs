//! Symmetric configurations `v_k`: construction, verification and parameter
//! spectra.
//!
//! A symmetric configuration `v_k` is a `v × v` 0/1 incidence matrix with
//! exactly `k` ones in every row and column and no `2 × 2` all-ones
//! submatrix. The crate builds them from modular Golomb rulers and classical
//! difference sets, reshapes them through block double-circulant forms,
//! extends them one point at a time, and catalogs which `(v, k)` pairs are
//! known to exist.
//!
//! ```
//! use symconf::{construct, matrix::IncidenceMatrix};
//!
//! let ruler = construct::singer_ruler(5)?;
//! let m = IncidenceMatrix::from_circulant(&ruler.to_circulant()?);
//! let report = m.verify()?;
//! assert_eq!((report.v, report.k, report.deficiency), (31, 6, 0));
//! # Ok::<(), symconf::Error>(())
//! ```

pub mod arith;
pub mod bdc;
mod bits;
pub mod catalog;
pub mod construct;
pub mod extend;
pub mod format;
pub mod gf;
pub mod matrix;
pub mod ruler;

pub use bits::BitRow;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field of order {p}^{n} is out of range")]
    DegreeOutOfRange { p: u64, n: u32 },
    #[error("field of order {0} is too large")]
    FieldTooLarge(u64),
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("logarithm of zero")]
    ZeroArgument,
    #[error("{g} is not a primitive root modulo {p}")]
    NotPrimitiveRoot { g: u64, p: u64 },

    #[error("marks must be strictly increasing")]
    UnsortedMarks,
    #[error("mark {mark} is not below modulus {v}")]
    MarksExceedModulus { mark: u64, v: u64 },
    #[error("ruler is not a Golomb ruler")]
    NotGolomb,
    #[error("ruler is not a ({v},{k}) modular Golomb ruler")]
    NotModularGolomb { v: u64, k: usize },
    #[error("gcd({m}, {v}) != 1")]
    GcdNotOne { m: u64, v: u64 },
    #[error("delta {delta} must be below k = {k}")]
    DeltaTooLarge { delta: usize, k: usize },

    #[error("row {0} has a different weight than row 0")]
    RowWeightNotConstant(usize),
    #[error("column {0} has a different weight than row 0")]
    ColumnWeightNotConstant(usize),
    #[error("rows {0} and {1} share at least two columns")]
    TwoByTwoAllOnes(usize, usize),
    #[error("matrix is not square or is empty")]
    NotSquare,

    #[error("{t} does not divide {v}")]
    NotDivisor { t: u64, v: u64 },
    #[error("delta {delta} exceeds weight {weight} on diagonal {h}")]
    DeltaExceedsWeight { h: usize, delta: usize, weight: usize },
    #[error("{what} out of range")]
    IndexOutOfRange { what: &'static str },
    #[error("block count {0} is odd")]
    OddBlockCount(usize),
    #[error("{0}")]
    ConstraintViolated(String),

    #[error("aggregate does not satisfy the extension conditions")]
    InvalidAggregate,
    #[error("no disjoint extending aggregate at step {step}")]
    ExtensionUnavailable { step: usize },

    #[error("no Golomb length recorded for k = {0}")]
    UnknownK(usize),
    #[error("unknown family {0}")]
    UnknownFamily(String),
    #[error("line {line}: {msg}")]
    ParseError { line: usize, msg: String },
    #[error("ruler lengths must increase with k (k = {0})")]
    MonotonicityViolation(usize),
    #[error("conflicting verdicts for {v}_{k}: {detail}")]
    Contradiction { v: u64, k: usize, detail: String },
}

impl Error {
    /// Stable variant name, used by the command line front end.
    pub fn name(&self) -> &'static str {
        use Error::*;
        match self {
            NotPrime(_) => "NotPrime",
            NotPrimePower(_) => "NotPrimePower",
            DegreeOutOfRange { .. } => "DegreeOutOfRange",
            FieldTooLarge(_) => "FieldTooLarge",
            FieldMismatch => "FieldMismatch",
            ZeroInverse => "ZeroInverse",
            ZeroArgument => "ZeroArgument",
            NotPrimitiveRoot { .. } => "NotPrimitiveRoot",
            UnsortedMarks => "UnsortedMarks",
            MarksExceedModulus { .. } => "MarksExceedModulus",
            NotGolomb => "NotGolomb",
            NotModularGolomb { .. } => "NotModularGolomb",
            GcdNotOne { .. } => "GcdNotOne",
            DeltaTooLarge { .. } => "DeltaTooLarge",
            RowWeightNotConstant(_) => "RowWeightNotConstant",
            ColumnWeightNotConstant(_) => "ColumnWeightNotConstant",
            TwoByTwoAllOnes(..) => "TwoByTwoAllOnes",
            NotSquare => "NotSquare",
            NotDivisor { .. } => "NotDivisor",
            DeltaExceedsWeight { .. } => "DeltaExceedsWeight",
            IndexOutOfRange { .. } => "IndexOutOfRange",
            OddBlockCount(_) => "OddBlockCount",
            ConstraintViolated(_) => "ConstraintViolated",
            InvalidAggregate => "InvalidAggregate",
            ExtensionUnavailable { .. } => "ExtensionUnavailable",
            UnknownK(_) => "UnknownK",
            UnknownFamily(_) => "UnknownFamily",
            ParseError { .. } => "ParseError",
            MonotonicityViolation(_) => "MonotonicityViolation",
            Contradiction { .. } => "Contradiction",
        }
    }
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/rulers.md")]
    mod rulers {}
    #[doc = include_str!("../../../book/src/constructions.md")]
    mod constructions {}
    #[doc = include_str!("../../../book/src/matrices.md")]
    mod matrices {}
    #[doc = include_str!("../../../book/src/bdc.md")]
    mod bdc {}
    #[doc = include_str!("../../../book/src/extension.md")]
    mod extension {}
    #[doc = include_str!("../../../book/src/spectrum.md")]
    mod spectrum {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
