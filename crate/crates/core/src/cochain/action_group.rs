use std::collections::{BTreeMap, HashSet, VecDeque};

use num_traits::Zero;

use super::complex::{cochain_dim, pair_action};
use super::module::CoeffModule;
use crate::error::{input, resource, Result};
use crate::linalg::{DenseMatrix, ExactMatrix, Rat};
use crate::perm::Permutation;
use crate::rack::RackTable;

/// Finite image of the structure group acting jointly on the rack and the
/// module: the closure of the pairs `(φ_x, A_x)`.
///
/// The product follows the right action on cochains:
/// `(π, M)(σ, N) = (π ∘ σ, M N)`.
#[derive(Debug, Clone)]
pub struct FiniteActionGroup {
    elements: Vec<(Permutation, DenseMatrix)>,
}

impl FiniteActionGroup {
    pub fn elements(&self) -> &[(Permutation, DenseMatrix)] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// The permutation parts, deduplicated (the image in the inner group).
    pub fn permutation_image(&self) -> HashSet<Permutation> {
        self.elements.iter().map(|(p, _)| p.clone()).collect()
    }
}

/// Breadth-first closure of `{(φ_x, A_x)}` from the identity.
///
/// Fails with a resource error when more than `cap` elements appear, which
/// is what happens when the action on the module has infinite image
/// (e.g. a nontrivial unipotent block).
pub fn finite_action_group(rack: &RackTable, module: &CoeffModule, cap: usize) -> Result<FiniteActionGroup> {
    if module.rack_size() != rack.size() {
        return input("module and rack sizes differ");
    }
    let ring = module.ring();
    let gens: Vec<(Permutation, DenseMatrix)> = (0..rack.size())
        .map(|x| (rack.translation(x), module.action(x).clone()))
        .collect();
    let id = (
        Permutation::identity(rack.size()),
        DenseMatrix::identity(ring, module.dim()),
    );
    let mut seen = HashSet::from([id.clone()]);
    let mut elements = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some((p, m)) = queue.pop_front() {
        for (gp, gm) in &gens {
            let h = (p.compose(gp), m.mul(gm));
            if seen.insert(h.clone()) {
                if elements.len() >= cap {
                    return resource(format!(
                        "action group closure exceeded {cap} elements: the kernel of the action on the \
                         coefficients does not appear to have finite index, so the finite quotient \
                         needed for averaging is unavailable"
                    ));
                }
                elements.push(h.clone());
                queue.push_back(h);
            }
        }
    }
    Ok(FiniteActionGroup { elements })
}

/// Averaging projector `P = (1/|G|) Σ_{g∈G} g` on `C^n`.
pub fn projector_with(
    rack: &RackTable,
    module: &CoeffModule,
    n: usize,
    group: &FiniteActionGroup,
) -> Result<ExactMatrix> {
    let ring = module.ring();
    ring.require_unit(group.order() as u64, "the order of the action group")?;
    let dim = cochain_dim(rack, module, n);
    let mut acc: Vec<BTreeMap<usize, Rat>> = vec![BTreeMap::new(); dim];
    for (p, m) in group.elements() {
        let g = pair_action(ring, rack.size(), module.dim(), n, p, m)?;
        for (r, row) in g.row_data().iter().enumerate() {
            for (c, v) in row {
                let e = acc[r].entry(*c).or_insert_with(Rat::zero);
                *e = ring.add(e, v);
            }
        }
    }
    let scale = ring
        .inv(&ring.reduce(&Rat::from_integer(group.order().into()))?)
        .expect("checked unit");
    let sum = ExactMatrix::from_row_maps(ring, dim, acc)?;
    Ok(sum.scale(&scale))
}

/// Projector onto the invariant cochains, computing the action group with
/// element cap `cap`.
pub fn projector_p(rack: &RackTable, module: &CoeffModule, n: usize, cap: usize) -> Result<ExactMatrix> {
    let g = finite_action_group(rack, module, cap)?;
    projector_with(rack, module, n, &g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, Ring};
    use crate::perm::inner_group;
    use crate::rack::{make_standard, StandardRack};

    fn d3() -> RackTable {
        make_standard(&StandardRack::Dihedral(3)).unwrap()
    }

    #[test]
    fn trivial_coefficients_match_inner_group() {
        let rack = d3();
        let m = CoeffModule::trivial(Ring::Rationals, 1, 3).unwrap();
        let g = finite_action_group(&rack, &m, 1000).unwrap();
        assert_eq!(g.order(), 6);
        let inner = inner_group(&rack, 1000).unwrap();
        assert_eq!(g.permutation_image(), inner.elements().iter().cloned().collect());
    }

    #[test]
    fn unipotent_action_is_infinite() {
        let triv = make_standard(&StandardRack::Trivial(2)).unwrap();
        let j1 = CoeffModule::jordan(Ring::Rationals, 2, &rat(1), 1).unwrap();
        assert_eq!(finite_action_group(&triv, &j1, 100).unwrap().order(), 1);
        let j2 = CoeffModule::jordan(Ring::Rationals, 2, &rat(1), 2).unwrap();
        assert!(matches!(
            finite_action_group(&triv, &j2, 100),
            Err(crate::Error::Resource(_))
        ));
    }

    #[test]
    fn projector_examples() {
        let triv = make_standard(&StandardRack::Trivial(3)).unwrap();
        let m = CoeffModule::trivial(Ring::Rationals, 1, 3).unwrap();
        assert_eq!(
            projector_p(&triv, &m, 2, 100).unwrap(),
            ExactMatrix::identity(Ring::Rationals, 9)
        );
        assert_eq!(
            projector_p(&d3(), &m, 0, 100).unwrap(),
            ExactMatrix::identity(Ring::Rationals, 1)
        );

        let p1 = projector_p(&d3(), &m, 1, 100).unwrap();
        let third = Rat::new(1.into(), 3.into());
        for r in 0..3 {
            for c in 0..3 {
                assert_eq!(p1.get(r, c), third);
            }
        }
        assert_eq!(p1.rank(), 1);
        assert_eq!(p1.mul(&p1).unwrap(), p1);
    }

    #[test]
    fn projector_needs_invertible_order() {
        let m = CoeffModule::trivial(Ring::PrimeField(2), 1, 3).unwrap();
        assert!(matches!(
            projector_p(&d3(), &m, 1, 100),
            Err(crate::Error::Precondition(_))
        ));
        let m5 = CoeffModule::trivial(Ring::PrimeField(5), 1, 3).unwrap();
        assert!(projector_p(&d3(), &m5, 1, 100).is_ok());
    }
}
