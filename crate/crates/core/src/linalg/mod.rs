//! Exact linear algebra over Z, Q and F_p.

pub mod echelon;
pub mod matrix;
pub mod ring;
pub mod smith;

pub use echelon::{modular_rank_primes, MODULAR_RANK_THRESHOLD};
pub use matrix::{DenseMatrix, ExactMatrix};
pub use ring::{is_prime, parse_rat, prime_factors, rat, Rat, Ring};
pub use smith::{SmithForm, SmithOptions, DEFAULT_SNF_BIT_CAP};
