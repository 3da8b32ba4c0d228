//! Rack-level invariants across the corpus and a few constructed racks.

mod common;

use common::corpus;
use rackoh_core::cochain::CoeffModule;
use rackoh_core::cohomology::orbit_product_rank;
use rackoh_core::linalg::{rat, DenseMatrix, Ring};
use rackoh_core::perm::FiniteGroup;
use rackoh_core::rack::{
    is_quandle, make_semidirect, make_standard, orbits, verify_rack, verify_yang_baxter, StandardRack,
};

#[test]
fn corpus_racks_are_valid_and_braided() {
    for (name, rack) in corpus() {
        assert!(verify_rack(rack.table()).unwrap().valid, "{name}");
        assert!(verify_yang_baxter(&rack), "{name}");
    }
}

#[test]
fn conjugation_racks_are_quandles() {
    for group in ["S3", "S4", "Z5", "D4", "D5"] {
        let g = FiniteGroup::by_name(group).unwrap();
        let rack = make_standard(&StandardRack::Conjugation(g, None)).unwrap();
        assert!(is_quandle(&rack), "{group}");
    }
}

#[test]
fn semidirect_projects_onto_the_base() {
    let d3 = make_standard(&StandardRack::Dihedral(3)).unwrap();
    let c3 = make_standard(&StandardRack::Cyclic(3)).unwrap();
    let f3 = Ring::PrimeField(3);
    let cases = vec![
        (
            d3.clone(),
            CoeffModule::same_operator(&d3, DenseMatrix::scalar(f3, 1, &f3.reduce(&rat(-1)).unwrap()).unwrap())
                .unwrap(),
        ),
        (d3.clone(), CoeffModule::functions(&d3, Ring::PrimeField(2)).unwrap()),
        (c3.clone(), CoeffModule::functions(&c3, Ring::PrimeField(2)).unwrap()),
        (c3.clone(), CoeffModule::trivial(Ring::PrimeField(5), 1, 3).unwrap()),
    ];
    for (base, module) in cases {
        let big = make_semidirect(&base, &module).unwrap();
        let fiber = big.size() / base.size();
        assert!(verify_rack(big.table()).unwrap().valid);
        for a in 0..big.size() {
            for b in 0..big.size() {
                assert_eq!(big.op(a, b) / fiber, base.op(a / fiber, b / fiber));
            }
        }
    }
}

#[test]
fn orbit_indicator_products_span_rational_cohomology() {
    for (name, rack) in corpus() {
        let m = orbits(&rack).orbit_count;
        for n in 0..=2 {
            assert_eq!(
                orbit_product_rank(&rack, n).unwrap(),
                m.pow(n as u32),
                "{name} degree {n}"
            );
        }
    }
}
