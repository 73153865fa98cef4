//! Irreducible maximal locally nilpotent subgroups of `GL(q, F)` for prime `q`,
//! over finite fields and the rationals.
//!
//! The crate builds the monomial groups `H_α`, the primitive groups `G(α, b)`
//! and the Singer-type abelian groups, decides conjugacy between them through
//! determinant classes, and checks every claim against brute-force oracles
//! over small finite fields.

pub mod arith;
pub mod classify;
pub mod construct;
pub mod error;
pub mod field;
pub mod group;
pub mod matrix;
pub mod oracle;
pub mod poly;
pub mod props;

pub use error::{Error, Result};
pub use field::{Cardinal, ClassMode, Elem, Field, PowerClass, UnitSubgroup};
pub use group::{MatGroup, Nilpotency};
pub use matrix::Mat;
pub use poly::Poly;
