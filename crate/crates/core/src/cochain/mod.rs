//! The rack cochain complex and the maps that act on it.

pub mod action_group;
pub mod complex;
pub mod module;
pub mod product;

pub use action_group::{finite_action_group, projector_p, projector_with, FiniteActionGroup};
pub use complex::{
    chain_iso_t, check_budget, cochain_dim, decode, differential, differential_prime, encode, group_action_on_cochains,
    pair_action, power, shift_j, ShiftIso,
};
pub use module::{ActionSpec, CoeffModule, ModuleSpec, ModuleTag, Scalar};
pub use product::{cochain_product, is_invariant, leibniz_defect, slice_first, tensor_cochains, ProductCochain};
