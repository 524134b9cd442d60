//! Exact symbolic engine for power-tower product equations
//! `α↑↑k · β↑↑m = γ↑↑n` over the family `α, β, γ = B^(rational)`.
//!
//! Values are stored in exponent space: every number is `B^E` for a symbolic
//! exponent `E` ([`ExpSum`]), products become exponent sums and towers become
//! the recurrence `E_{j+1} = E_x · B^(E_j)`. Equality is then a zero test on
//! an exponent, decided by exact field arithmetic, transcendence rules, or
//! rigorous interval refutation.

pub mod cli;
pub mod equality;
pub mod error;
pub mod exact;
pub mod interval;
pub mod parser;
pub mod search;
pub mod tower;

pub use error::{Error, Result};
pub use exact::{FieldElement, Radical, Rational};
pub use tower::{equation_exponent, print_canonical, ExpChain, ExpSum, PowNum};
