use num_traits::Zero;

use crate::cochain::{cochain_product, differential, group_action_on_cochains, CoeffModule};
use crate::error::{input, Result};
use crate::linalg::{rat, ExactMatrix, Rat, Ring};
use crate::rack::{orbits, RackTable};

/// Whether `f·y - f` is a coboundary, for a cocycle `f` of degree `n`.
/// Needs field coefficients; degree 0 asks for `f·y = f` outright.
pub fn class_fixed_by_action(rack: &RackTable, module: &CoeffModule, n: usize, f: &[Rat], y: usize) -> Result<bool> {
    if !differential(rack, module, n)?.mul_vec(f).iter().all(Zero::is_zero) {
        return input("cochain is not a cocycle");
    }
    let ring = module.ring();
    let moved = group_action_on_cochains(rack, module, n, y)?.mul_vec(f);
    let diff: Vec<Rat> = moved.iter().zip(f).map(|(a, b)| ring.sub(a, b)).collect();
    if n == 0 {
        return Ok(diff.iter().all(Zero::is_zero));
    }
    Ok(differential(rack, module, n - 1)?.solve(&diff)?.is_some())
}

/// Rank in `H^n(X, Q)` of the products `1_{s_1} ⊗ ... ⊗ 1_{s_n}` of
/// degree-1 orbit indicators.
pub fn orbit_product_rank(rack: &RackTable, n: usize) -> Result<usize> {
    let q = CoeffModule::trivial(Ring::Rationals, 1, rack.size())?;
    let orb = orbits(rack);
    let indicator = |s: usize| -> Vec<Rat> { orb.orbit_of.iter().map(|&o| rat(i64::from(o == s))).collect() };
    let mut products: Vec<Vec<Rat>> = vec![vec![rat(1)]];
    for degree in 0..n {
        let mut next = Vec::with_capacity(products.len() * orb.orbit_count);
        for s in 0..orb.orbit_count {
            for g in &products {
                next.push(cochain_product(rack, &q, &indicator(s), 1, &q, g, degree)?.values);
            }
        }
        products = next;
    }
    let dim = rack.size().pow(n as u32);
    let span = ExactMatrix::from_columns(Ring::Rationals, dim, &products)?;
    if n == 0 {
        return Ok(span.rank());
    }
    let boundaries = differential(rack, &q, n - 1)?;
    Ok(span.hstack(&boundaries)?.rank() - boundaries.rank())
}
