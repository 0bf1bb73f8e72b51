//! Exact sum-product quantities over prime fields.
//!
//! Energies, collinear configurations, product-of-difference counts,
//! multilinear exponential sums and SL₂(F_p) action statistics, each with a
//! brute-force oracle in [`oracle`] for cross-checking.

pub mod chars;
pub mod decompose;
pub mod energy;
pub mod expsum;
pub mod error;
pub mod field;
pub mod incidence;
pub mod numeric;
pub mod oracle;
pub mod poly;
pub mod report;
pub mod sets;
pub mod sl2;
pub mod transform;
pub mod verify;

pub use chars::{mul_char, CharTable, RootTable};
pub use error::{Error, Result};
pub use field::{make_field, FieldCtx};
pub use report::{BoundReport, Kind, Num};
pub use sets::{gen_set, subgroup, SetFp, SetSpec, PRNG_ID};
pub use transform::{IntFn, Spectrum, ZeroPolicy};
