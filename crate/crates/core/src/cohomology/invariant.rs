use serde::{Deserialize, Serialize};

use super::ordinary::{betti_from_ranks, differentials, fixed_dim, rack_invariants, ranks};
use super::report::{checks, Check, CohomologyReport, DegreeEntry};
use crate::budget::Budget;
use crate::cochain::{cochain_dim, finite_action_group, group_action_on_cochains, projector_with, CoeffModule};
use crate::error::{precondition, Result};
use crate::linalg::{ExactMatrix, Rat};
use crate::rack::RackTable;

/// How the invariant subcomplex was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "route", rename_all = "snake_case")]
pub enum InvariantRoute {
    /// Image of the averaging projector over a finite action group.
    Projector { group_order: usize },
    /// Common fixed space of the generator actions.
    FixedSpace,
}

/// Ranks of `H_inv^n`, `H^n` and the natural map between them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct XiEntry {
    pub n: usize,
    pub invariant_betti: usize,
    pub betti: usize,
    pub xi_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    /// Per-degree entries are the Betti numbers of the invariant subcomplex.
    pub report: CohomologyReport,
    pub route: InvariantRoute,
    pub xi: Vec<XiEntry>,
}

/// Columns spanning the invariant cochains of degree `n`.
fn invariant_basis(
    rack: &RackTable,
    module: &CoeffModule,
    n: usize,
    projector: Option<&crate::cochain::FiniteActionGroup>,
) -> Result<ExactMatrix> {
    let ring = module.ring();
    let dim = cochain_dim(rack, module, n);
    let id = ExactMatrix::identity(ring, dim);
    let constraints = match projector {
        Some(group) => projector_with(rack, module, n, group)?.sub(&id)?,
        None => {
            let mut stacked = ExactMatrix::zeros(ring, 0, dim);
            for y in 0..rack.size() {
                stacked = stacked.vstack(&group_action_on_cochains(rack, module, n, y)?.sub(&id)?)?;
            }
            stacked
        }
    };
    let basis = constraints.kernel_basis()?;
    ExactMatrix::from_columns(ring, dim, &basis)
}

/// Cohomology of the invariant subcomplex and the rank of the map it
/// induces into ordinary cohomology, over a field.
///
/// The projector is used when the action group is finite of order
/// invertible in the field; otherwise the invariant cochains are computed
/// directly as a fixed space and no isomorphism is claimed.
pub fn invariant_cohomology(
    rack: &RackTable,
    module: &CoeffModule,
    max_degree: usize,
    budget: &Budget,
) -> Result<InvariantReport> {
    let ring = module.ring();
    if !ring.is_field() {
        return precondition("invariant cohomology is computed over fields only");
    }
    let inv = rack_invariants(rack, budget)?;
    let group = finite_action_group(rack, module, budget.action_cap)
        .ok()
        .filter(|g| ring.is_unit_integer(g.order() as u64));
    let route = match &group {
        Some(g) => InvariantRoute::Projector { group_order: g.order() },
        None => InvariantRoute::FixedSpace,
    };

    let d = differentials(rack, module, max_degree, budget)?;
    let full_ranks = ranks(&d);
    let bettis = betti_from_ranks(rack, module, &full_ranks);

    let bases = (0..=max_degree)
        .map(|n| invariant_basis(rack, module, n, group.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    let restricted = d
        .iter()
        .zip(&bases)
        .map(|(dn, v)| dn.mul(v))
        .collect::<Result<Vec<_>>>()?;
    let inv_ranks = ranks(&restricted);

    let mut xi = Vec::with_capacity(max_degree + 1);
    for n in 0..=max_degree {
        let invariant_betti = bases[n].cols() - inv_ranks[n] - if n > 0 { inv_ranks[n - 1] } else { 0 };
        let kernel = restricted[n].kernel_basis()?;
        let cocycles: Vec<Vec<Rat>> = kernel.iter().map(|c| bases[n].mul_vec(c)).collect();
        let z = ExactMatrix::from_columns(ring, cochain_dim(rack, module, n), &cocycles)?;
        let xi_rank = if n == 0 {
            z.rank()
        } else {
            z.hstack(&d[n - 1])?.rank() - full_ranks[n - 1]
        };
        xi.push(XiEntry {
            n,
            invariant_betti,
            betti: bettis[n],
            xi_rank,
        });
    }

    let degrees = xi
        .iter()
        .map(|e| DegreeEntry {
            n: e.n,
            betti: e.invariant_betti,
            torsion: vec![],
        })
        .collect();
    let mut report = CohomologyReport {
        rack: rack.to_file(),
        module: module.to_spec(),
        orbit_count: inv.orbit_count,
        inner_group_order: inv.inner_order,
        degrees,
        checks: Vec::new(),
        notes: Vec::new(),
    };
    let fixed = fixed_dim(module)?;
    report.checks.push(Check::new(
        checks::INVARIANT_BETTI0_EQUALS_FIXED_DIM,
        xi[0].invariant_betti == fixed,
    ));
    match route {
        InvariantRoute::Projector { .. } => {
            let bad: Vec<String> = xi
                .iter()
                .filter(|e| e.xi_rank != e.invariant_betti || e.xi_rank != e.betti)
                .map(|e| {
                    format!(
                        "degree {}: rank {}, dims {} -> {}",
                        e.n, e.xi_rank, e.invariant_betti, e.betti
                    )
                })
                .collect();
            report.checks.push(if bad.is_empty() {
                Check::new(checks::XI_ISOMORPHISM, true)
            } else {
                Check::with_detail(checks::XI_ISOMORPHISM, false, bad.join("; "))
            });
        }
        InvariantRoute::FixedSpace => report.notes.push(
            "action group infinite or of order divisible by the characteristic: ranks reported, no isomorphism claim"
                .to_string(),
        ),
    }
    Ok(InvariantReport { report, route, xi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Ring;
    use crate::rack::{make_standard, StandardRack};

    #[test]
    fn rational_xi_is_an_isomorphism() {
        let d3 = make_standard(&StandardRack::Dihedral(3)).unwrap();
        let m = CoeffModule::trivial(Ring::Rationals, 1, 3).unwrap();
        let r = invariant_cohomology(&d3, &m, 2, &Budget::default()).unwrap();
        assert_eq!(r.route, InvariantRoute::Projector { group_order: 6 });
        assert!(r.report.all_pass(), "{:?}", r.report.checks);
        assert!(r.xi.iter().all(|e| e.xi_rank == 1));
    }

    #[test]
    fn trivial_rack_invariants_are_everything() {
        let t2 = make_standard(&StandardRack::Trivial(2)).unwrap();
        let m = CoeffModule::trivial(Ring::Rationals, 1, 2).unwrap();
        let r = invariant_cohomology(&t2, &m, 2, &Budget::default()).unwrap();
        assert_eq!(r.xi.iter().map(|e| e.xi_rank).collect::<Vec<_>>(), vec![1, 2, 4]);
    }

    #[test]
    fn dividing_characteristic_uses_fixed_space() {
        let d3 = make_standard(&StandardRack::Dihedral(3)).unwrap();
        let m = CoeffModule::trivial(Ring::PrimeField(2), 1, 3).unwrap();
        let r = invariant_cohomology(&d3, &m, 2, &Budget::default()).unwrap();
        assert_eq!(r.route, InvariantRoute::FixedSpace);
        assert!(r.report.check(checks::XI_ISOMORPHISM).is_none());
    }
}
