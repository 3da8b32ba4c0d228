use std::thread;

use num_bigint::BigInt;

use super::report::{checks, primes_divide, to_u64_factors, Check, CohomologyReport, DegreeEntry};
use crate::budget::Budget;
use crate::cochain::{check_budget, cochain_dim, differential, CoeffModule, ModuleTag};
use crate::error::{precondition, Result};
use crate::linalg::{rat, DenseMatrix, ExactMatrix, Rat, Ring, SmithForm, SmithOptions};
use crate::perm::inner_group;
use crate::rack::{is_quandle, orbits, RackTable};

/// Matrices larger than this (rows plus columns) skip the kernel-lattice
/// torsion cross-check, which needs both unimodular transforms.
const LATTICE_CHECK_LIMIT: usize = 600;

/// Orbit count `m` and inner group order `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RackInvariants {
    pub orbit_count: usize,
    pub inner_order: usize,
}

pub fn rack_invariants(rack: &RackTable, budget: &Budget) -> Result<RackInvariants> {
    Ok(RackInvariants {
        orbit_count: orbits(rack).orbit_count,
        inner_order: inner_group(rack, budget.closure_cap)?.order(),
    })
}

/// `d^0, ..., d^top`, one worker thread per degree.
pub fn differentials(rack: &RackTable, module: &CoeffModule, top: usize, budget: &Budget) -> Result<Vec<ExactMatrix>> {
    for n in 0..=top {
        check_budget(rack, module, n, budget)?;
    }
    thread::scope(|s| {
        let jobs: Vec<_> = (0..=top)
            .map(|n| s.spawn(move || differential(rack, module, n)))
            .collect();
        jobs.into_iter()
            .map(|j| j.join().expect("differential worker panicked"))
            .collect()
    })
}

/// Ranks of several matrices, computed concurrently.
pub fn ranks(mats: &[ExactMatrix]) -> Vec<usize> {
    thread::scope(|s| {
        let jobs: Vec<_> = mats.iter().map(|m| s.spawn(move || m.rank())).collect();
        jobs.into_iter()
            .map(|j| j.join().expect("rank worker panicked"))
            .collect()
    })
}

/// `dim C^n - rank d^n - rank d^{n-1}` for each `n` covered by `ranks`.
pub fn betti_from_ranks(rack: &RackTable, module: &CoeffModule, ranks: &[usize]) -> Vec<usize> {
    (0..ranks.len())
        .map(|n| cochain_dim(rack, module, n) - ranks[n] - if n > 0 { ranks[n - 1] } else { 0 })
        .collect()
}

/// Dimension (rank, over Z) of the simultaneous fixed space `{v : v A_x = v}`.
pub fn fixed_dim(module: &CoeffModule) -> Result<usize> {
    let mut stacked = ExactMatrix::zeros(module.ring(), 0, module.dim());
    for x in 0..module.rack_size() {
        stacked = stacked.vstack(&module.action(x).sub_identity().to_exact().transpose())?;
    }
    Ok(module.dim() - stacked.rank())
}

fn m_pow(m: usize, n: usize) -> usize {
    m.pow(n as u32)
}

/// Compares `betti` with `m^n * factor` degree by degree.
fn prediction_check(name: &str, bettis: &[usize], m: usize, factor: usize) -> Check {
    let bad: Vec<String> = bettis
        .iter()
        .enumerate()
        .filter(|&(n, &b)| b != m_pow(m, n) * factor)
        .map(|(n, &b)| format!("degree {n}: {b} != {}", m_pow(m, n) * factor))
        .collect();
    if bad.is_empty() {
        Check::new(name, true)
    } else {
        Check::with_detail(name, false, bad.join("; "))
    }
}

fn base_report(
    rack: &RackTable,
    module: &CoeffModule,
    inv: &RackInvariants,
    degrees: Vec<DegreeEntry>,
) -> CohomologyReport {
    let mut notes = Vec::new();
    if is_quandle(rack) {
        notes.push(
            "quandle: the quandle and degenerate parts follow from the splitting of the rack complex and are \
             not recomputed"
                .to_string(),
        );
    }
    CohomologyReport {
        rack: rack.to_file(),
        module: module.to_spec(),
        orbit_count: inv.orbit_count,
        inner_group_order: inv.inner_order,
        degrees,
        checks: Vec::new(),
        notes,
    }
}

fn betti0_check(bettis: &[usize], module: &CoeffModule) -> Result<Check> {
    let fixed = fixed_dim(module)?;
    Ok(match bettis.first() {
        Some(&b) if b != fixed => Check::with_detail(
            checks::BETTI0_EQUALS_FIXED_DIM,
            false,
            format!("betti0 {b}, fixed space {fixed}"),
        ),
        _ => Check::new(checks::BETTI0_EQUALS_FIXED_DIM, true),
    })
}

/// Theorem checks that depend on the shape of the coefficients.
fn field_theorem_checks(report: &mut CohomologyReport, module: &CoeffModule) -> Result<()> {
    let ring = module.ring();
    let m = report.orbit_count;
    let bettis = report.bettis();
    match module.tag() {
        ModuleTag::Trivial => {
            if ring.is_unit_integer(report.inner_group_order as u64) {
                report
                    .checks
                    .push(prediction_check(checks::BETTI_EQUALS_M_POW_N, &bettis, m, module.dim()));
            } else {
                report.notes.push(format!(
                    "characteristic {} divides N = {}: dimensions are exploration data, no prediction is made",
                    ring.characteristic(),
                    report.inner_group_order
                ));
            }
        }
        ModuleTag::Jordan { t, .. } if ring == Ring::Rationals => {
            if *t == rat(1) {
                report
                    .checks
                    .push(prediction_check(checks::JORDAN_BETTI, &bettis, m, 1));
            } else {
                report
                    .checks
                    .push(prediction_check(checks::TWISTED_VANISHING, &bettis, m, 0));
            }
        }
        ModuleTag::SameOperator if ring == Ring::Rationals => {
            let fixed = fixed_dim(module)?;
            report
                .checks
                .push(prediction_check(checks::SAME_OPERATOR_BETTI, &bettis, m, fixed));
        }
        _ => report
            .notes
            .push("no dimension prediction applies to these coefficients".to_string()),
    }
    Ok(())
}

/// Betti numbers of `H^n(X, M)` for `0 ≤ n ≤ max_degree` over a field.
pub fn cohomology_over_field(
    rack: &RackTable,
    module: &CoeffModule,
    max_degree: usize,
    budget: &Budget,
) -> Result<CohomologyReport> {
    if !module.ring().is_field() {
        return precondition("cohomology_over_field needs Q or F_p coefficients; use cohomology_integral for Z");
    }
    let inv = rack_invariants(rack, budget)?;
    let mats = differentials(rack, module, max_degree, budget)?;
    let bettis = betti_from_ranks(rack, module, &ranks(&mats));
    let degrees = bettis
        .iter()
        .enumerate()
        .map(|(n, &betti)| DegreeEntry {
            n,
            betti,
            torsion: vec![],
        })
        .collect();
    let mut report = base_report(rack, module, &inv, degrees);
    report.checks.push(betti0_check(&bettis, module)?);
    field_theorem_checks(&mut report, module)?;
    Ok(report)
}

/// Torsion of `H^n` as the torsion of the cokernel of `d^{n-1}`.
///
/// The quotient `C^n / ker d^n` embeds in the free module `C^{n+1}`, so the
/// torsion of `ker d^n / im d^{n-1}` equals that of `C^n / im d^{n-1}`.
pub fn torsion_via_cokernel(d_prev: &ExactMatrix, bit_cap: u64) -> Result<Vec<BigInt>> {
    Ok(d_prev
        .smith_normal_form(SmithOptions {
            transforms: false,
            bit_cap,
        })?
        .torsion())
}

/// Torsion of `ker d_next / im d_prev`, computed in a lattice basis of
/// `ker d_next` read off the column transform of the Smith form of `d_next`.
pub fn torsion_via_kernel_lattice(d_prev: &ExactMatrix, d_next: &ExactMatrix, bit_cap: u64) -> Result<Vec<BigInt>> {
    if d_prev.rows() != d_next.cols() {
        return crate::error::input("differentials do not compose");
    }
    let snf = d_next.smith_normal_form(SmithOptions {
        transforms: true,
        bit_cap,
    })?;
    let (_, v) = snf.transforms.expect("transforms requested");
    let v_inv = DenseMatrix::from_rows(Ring::Integers, &v.to_dense())?
        .inverse()
        .expect("column transform is unimodular")
        .to_exact();
    // Columns r.. of V are a basis of the kernel lattice; rows r.. of V⁻¹
    // give coordinates in that basis.
    let coords = v_inv.mul(d_prev)?.to_dense();
    debug_assert!(coords[..snf.rank].iter().flatten().all(|c| *c == Rat::default()));
    let lattice = ExactMatrix::from_dense(Ring::Integers, d_prev.cols(), &coords[snf.rank..])?;
    Ok(lattice
        .smith_normal_form(SmithOptions {
            transforms: false,
            bit_cap,
        })?
        .torsion())
}

/// Integral cohomology: free rank and torsion invariant factors in each
/// degree `0 ≤ n ≤ max_degree`.
pub fn cohomology_integral(
    rack: &RackTable,
    module: &CoeffModule,
    max_degree: usize,
    budget: &Budget,
) -> Result<CohomologyReport> {
    if module.ring() != Ring::Integers {
        return precondition("cohomology_integral needs coefficients over Z");
    }
    let inv = rack_invariants(rack, budget)?;
    let mats = differentials(rack, module, max_degree, budget)?;
    let rational = ranks(&mats);
    let bettis = betti_from_ranks(rack, module, &rational);
    let bit_cap = budget.snf_bits;
    let smith: Vec<SmithForm> = thread::scope(|s| {
        let jobs: Vec<_> = mats[..max_degree]
            .iter()
            .map(|m| {
                s.spawn(move || {
                    m.smith_normal_form(SmithOptions {
                        transforms: false,
                        bit_cap,
                    })
                })
            })
            .collect();
        jobs.into_iter()
            .map(|j| j.join().expect("Smith worker panicked"))
            .collect::<Result<Vec<_>>>()
    })?;
    let mut degrees = Vec::with_capacity(max_degree + 1);
    for (n, &betti) in bettis.iter().enumerate() {
        let torsion = if n == 0 {
            vec![]
        } else {
            to_u64_factors(&smith[n - 1].torsion())?
        };
        degrees.push(DegreeEntry { n, betti, torsion });
    }
    let mut report = base_report(rack, module, &inv, degrees);
    report.checks.push(betti0_check(&bettis, module)?);

    let mismatched: Vec<String> = smith
        .iter()
        .zip(&rational)
        .enumerate()
        .filter(|(_, (s, &r))| s.rank != r)
        .map(|(n, (s, r))| format!("d^{n}: Smith rank {}, rational rank {r}", s.rank))
        .collect();
    report.checks.push(if mismatched.is_empty() {
        Check::new(checks::INTEGRAL_RANK_MATCHES_RATIONAL, true)
    } else {
        Check::with_detail(checks::INTEGRAL_RANK_MATCHES_RATIONAL, false, mismatched.join("; "))
    });

    let mut lattice_bad = Vec::new();
    for n in 1..=max_degree {
        let next = &mats[n];
        if next.rows() + next.cols() > LATTICE_CHECK_LIMIT {
            report.notes.push(format!(
                "kernel-lattice torsion cross-check skipped at degree {n} (matrix too large)"
            ));
            continue;
        }
        let lattice = to_u64_factors(&torsion_via_kernel_lattice(&mats[n - 1], next, bit_cap)?)?;
        if lattice != report.degrees[n].torsion {
            lattice_bad.push(format!("degree {n}: {lattice:?} vs {:?}", report.degrees[n].torsion));
        }
    }
    report.checks.push(if lattice_bad.is_empty() {
        Check::new(checks::TORSION_ROUTES_AGREE, true)
    } else {
        Check::with_detail(checks::TORSION_ROUTES_AGREE, false, lattice_bad.join("; "))
    });

    if module.is_trivial_action() {
        report.checks.push(prediction_check(
            checks::BETTI_EQUALS_M_POW_N,
            &bettis,
            inv.orbit_count,
            module.dim(),
        ));
        let all: Vec<u64> = report.degrees.iter().flat_map(|d| d.torsion.iter().copied()).collect();
        let ok = primes_divide(&all, inv.inner_order as u64);
        report.checks.push(if ok {
            Check::new(checks::TORSION_PRIMES_DIVIDE_N, true)
        } else {
            Check::with_detail(
                checks::TORSION_PRIMES_DIVIDE_N,
                false,
                format!("factors {all:?} have primes not dividing N = {}", inv.inner_order),
            )
        });
    }
    Ok(report)
}

/// Dispatches on the coefficient ring.
pub fn cohomology(
    rack: &RackTable,
    module: &CoeffModule,
    max_degree: usize,
    budget: &Budget,
) -> Result<CohomologyReport> {
    match module.ring() {
        Ring::Integers => cohomology_integral(rack, module, max_degree, budget),
        _ => cohomology_over_field(rack, module, max_degree, budget),
    }
}

/// Coefficients `Q^k` on which every element acts by the Jordan block `J_k(t)`.
pub fn twisted_cohomology(
    rack: &RackTable,
    t: &Rat,
    k: usize,
    max_degree: usize,
    budget: &Budget,
) -> Result<CohomologyReport> {
    let module = CoeffModule::jordan(Ring::Rationals, rack.size(), t, k)?;
    cohomology_over_field(rack, &module, max_degree, budget)
}

/// Coefficients on which every element acts by the same invertible matrix.
pub fn same_operator_cohomology(
    rack: &RackTable,
    a: DenseMatrix,
    max_degree: usize,
    budget: &Budget,
) -> Result<CohomologyReport> {
    let module = CoeffModule::same_operator(rack, a)?;
    cohomology_over_field(rack, &module, max_degree, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::FiniteGroup;
    use crate::rack::{make_standard, StandardRack};

    fn rack(kind: StandardRack) -> RackTable {
        make_standard(&kind).unwrap()
    }

    fn q(r: &RackTable) -> CoeffModule {
        CoeffModule::trivial(Ring::Rationals, 1, r.size()).unwrap()
    }

    #[test]
    fn rational_betti_examples() {
        let b = Budget::default();
        let d3 = rack(StandardRack::Dihedral(3));
        let rep = cohomology_over_field(&d3, &q(&d3), 3, &b).unwrap();
        assert_eq!(rep.bettis(), vec![1, 1, 1, 1]);
        assert!(rep.all_pass());

        let t2 = rack(StandardRack::Trivial(2));
        assert_eq!(
            cohomology_over_field(&t2, &q(&t2), 3, &b).unwrap().bettis(),
            vec![1, 2, 4, 8]
        );

        let s3 = rack(StandardRack::Conjugation(FiniteGroup::symmetric(3).unwrap(), None));
        assert_eq!(
            cohomology_over_field(&s3, &q(&s3), 2, &b).unwrap().bettis(),
            vec![1, 3, 9]
        );
    }

    #[test]
    fn integral_trivial_rack_is_torsion_free() {
        let t2 = rack(StandardRack::Trivial(2));
        let z = CoeffModule::trivial(Ring::Integers, 1, 2).unwrap();
        let rep = cohomology_integral(&t2, &z, 3, &Budget::default()).unwrap();
        assert!(rep.degrees.iter().all(|d| d.torsion.is_empty()));
        assert!(rep.all_pass());
    }

    #[test]
    fn twisted_examples() {
        let b = Budget::default();
        let d3 = rack(StandardRack::Dihedral(3));
        assert_eq!(twisted_cohomology(&d3, &rat(2), 1, 3, &b).unwrap().bettis(), vec![0; 4]);
        let j = twisted_cohomology(&d3, &rat(1), 2, 3, &b).unwrap();
        assert_eq!(j.bettis(), vec![1; 4]);
        assert!(j.check(checks::JORDAN_BETTI).unwrap().pass);
    }

    #[test]
    fn same_operator_examples() {
        let b = Budget::default();
        let d3 = rack(StandardRack::Dihedral(3));
        let diag = DenseMatrix::from_rows(Ring::Rationals, &[vec![rat(1), rat(0)], vec![rat(0), rat(2)]]).unwrap();
        let rep = same_operator_cohomology(&d3, diag, 3, &b).unwrap();
        assert_eq!(rep.bettis(), vec![1; 4]);
        assert!(rep.check(checks::SAME_OPERATOR_BETTI).unwrap().pass);

        let t2 = rack(StandardRack::Trivial(2));
        let id = DenseMatrix::identity(Ring::Rationals, 2);
        assert_eq!(
            same_operator_cohomology(&t2, id, 2, &b).unwrap().bettis(),
            vec![2, 4, 8]
        );

        let singular = DenseMatrix::from_rows(Ring::Rationals, &[vec![rat(0)]]).unwrap();
        assert!(matches!(
            same_operator_cohomology(&t2, singular, 2, &b),
            Err(crate::Error::Input(_))
        ));
    }

    #[test]
    fn characteristic_dividing_n_gets_a_note() {
        let d3 = rack(StandardRack::Dihedral(3));
        let f3 = CoeffModule::trivial(Ring::PrimeField(3), 1, 3).unwrap();
        let rep = cohomology_over_field(&d3, &f3, 2, &Budget::default()).unwrap();
        assert!(rep.check(checks::BETTI_EQUALS_M_POW_N).is_none());
        assert!(rep.notes.iter().any(|n| n.contains("divides N")));
    }
}
