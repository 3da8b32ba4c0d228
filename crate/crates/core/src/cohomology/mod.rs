//! Cohomology groups of racks and the theorem checks run on them.

pub mod group;
pub mod invariant;
pub mod nonabelian;
pub mod ordinary;
pub mod report;
pub mod semidirect;
pub mod structure;

pub use group::{
    coboundaries, cocycle_relations, group_h1, h2_via_group, normalize_factors, with_coefficients, AbelianCoeff,
    H2Comparison, RackPresentation,
};
pub use invariant::{invariant_cohomology, InvariantReport, InvariantRoute, XiEntry};
pub use nonabelian::{nonabelian_h2, CocycleClass, NonabelianH2};
pub use ordinary::{
    betti_from_ranks, cohomology, cohomology_integral, cohomology_over_field, differentials, fixed_dim,
    rack_invariants, ranks, same_operator_cohomology, torsion_via_cokernel, torsion_via_kernel_lattice,
    twisted_cohomology, RackInvariants,
};
pub use report::{checks, primes_divide, AbelianGroup, Check, CohomologyReport, DegreeEntry};
pub use semidirect::{semidirect_cocycle_check, semidirect_scan, SemidirectScan};
pub use structure::{class_fixed_by_action, orbit_product_rank};
