//! Exact cohomology of finite racks.
//!
//! The crate is organized bottom-up:
//!
//! - [`rack`]: rack tables, axiom checks, standard families, orbits.
//! - [`perm`]: permutation groups, in particular the inner group
//!   generated by the left translations of a rack.
//! - [`linalg`]: sparse exact matrices over Z, Q and F_p with rank,
//!   kernels and Smith normal form.
//! - [`cochain`]: coefficient modules and the rack cochain complex with its
//!   structural maps (differentials, group action, projector, shift,
//!   products).
//! - [`cohomology`]: Betti numbers, integral torsion, invariant and twisted
//!   cohomology, first group cohomology of the structure group, and
//!   nonabelian second cohomology.
//! - [`corpus`]: the built-in rack corpus and the theorem-check runner.

pub mod budget;
pub mod cochain;
pub mod cohomology;
pub mod corpus;
pub mod error;
pub mod linalg;
pub mod perm;
pub mod rack;

pub use budget::Budget;
pub use error::{Error, Result};
pub use rack::RackTable;
