use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::ordinary::{differentials, ranks};
use super::report::{to_u64_factors, AbelianGroup};
use crate::budget::Budget;
use crate::cochain::CoeffModule;
use crate::error::{input, Error, Result};
use crate::linalg::{is_prime, prime_factors, ExactMatrix, Rat, Ring, SmithOptions};
use crate::rack::RackTable;

/// Generators `X` and relations `x·y = (x▷y)·x` of the structure group,
/// stored as triples `(x, y, x▷y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RackPresentation {
    pub generators: usize,
    pub relations: Vec<(usize, usize, usize)>,
}

impl RackPresentation {
    pub fn of(rack: &RackTable) -> Self {
        let n = rack.size();
        let relations = (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .map(|(x, y)| (x, y, rack.op(x, y)))
            .collect();
        RackPresentation {
            generators: n,
            relations,
        }
    }
}

fn add_to(row: &mut BTreeMap<usize, Rat>, ring: Ring, col: usize, v: &Rat) {
    let e = row.entry(col).or_insert_with(Rat::zero);
    *e = ring.add(e, v);
}

/// Linear conditions on `π: X → M` for `π(x)·y + π(y) = π(x▷y)·x + π(x)`.
/// Rows are (relation, component), columns (generator, component).
pub fn cocycle_relations(p: &RackPresentation, module: &CoeffModule) -> Result<ExactMatrix> {
    let (ring, k) = (module.ring(), module.dim());
    let one = Rat::from_integer(1.into());
    let minus = ring.neg(&one);
    let mut rows = vec![BTreeMap::new(); p.relations.len() * k];
    for (r, &(x, y, z)) in p.relations.iter().enumerate() {
        let (ay, ax) = (module.action(y), module.action(x));
        for j in 0..k {
            let row = &mut rows[r * k + j];
            for l in 0..k {
                add_to(row, ring, x * k + l, ay.get(l, j));
                add_to(row, ring, z * k + l, &ring.neg(ax.get(l, j)));
            }
            add_to(row, ring, y * k + j, &one);
            add_to(row, ring, x * k + j, &minus);
        }
    }
    ExactMatrix::from_row_maps(ring, p.generators * k, rows)
}

/// The coboundary map `v ↦ (x ↦ v·x - v)`, `M → Fun(X, M)`.
pub fn coboundaries(p: &RackPresentation, module: &CoeffModule) -> Result<ExactMatrix> {
    let (ring, k) = (module.ring(), module.dim());
    let mut rows = vec![BTreeMap::new(); p.generators * k];
    for x in 0..p.generators {
        let shifted = module.action(x).sub_identity();
        for j in 0..k {
            for l in 0..k {
                let v = shifted.get(l, j);
                if !v.is_zero() {
                    rows[x * k + j].insert(l, v.clone());
                }
            }
        }
    }
    ExactMatrix::from_row_maps(ring, k, rows)
}

fn check_module(p: &RackPresentation, module: &CoeffModule) -> Result<()> {
    if module.rack_size() != p.generators {
        return input("module and presentation sizes differ");
    }
    Ok(())
}

/// `H^1(G_X, M)`: dimension over a field; free rank and invariant factors
/// over Z.
pub fn group_h1(p: &RackPresentation, module: &CoeffModule) -> Result<AbelianGroup> {
    check_module(p, module)?;
    if module.dim() == 0 {
        return Ok(AbelianGroup::zero());
    }
    let z = cocycle_relations(p, module)?;
    let b = coboundaries(p, module)?;
    let free_rank = z.cols() - z.rank() - b.rank();
    let invariant_factors = match module.ring() {
        Ring::Integers => to_u64_factors(&b.smith_normal_form(SmithOptions::default())?.torsion())?,
        _ => vec![],
    };
    Ok(AbelianGroup {
        free_rank,
        invariant_factors,
    })
}

/// An abelian coefficient group with trivial action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AbelianCoeff {
    Integers,
    Rationals,
    /// `Z/q`; `q = 1` is the zero ring.
    Mod(u64),
}

impl FromStr for AbelianCoeff {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Z" => Ok(AbelianCoeff::Integers),
            "Q" => Ok(AbelianCoeff::Rationals),
            _ => {
                let digits = s.strip_prefix("Z/").or_else(|| s.strip_prefix('Z'));
                match digits.and_then(|d| d.parse::<u64>().ok()) {
                    Some(q) if q >= 1 => Ok(AbelianCoeff::Mod(q)),
                    _ => input(format!("unknown coefficients {s:?}; expected Z, Q, Z<q> or Z/<q>")),
                }
            }
        }
    }
}

impl fmt::Display for AbelianCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbelianCoeff::Integers => write!(f, "Z"),
            AbelianCoeff::Rationals => write!(f, "Q"),
            AbelianCoeff::Mod(q) => write!(f, "Z/{q}"),
        }
    }
}

/// Rewrites a list of cyclic orders as invariant factors `d1 | d2 | ...`,
/// dropping trivial ones.
pub fn normalize_factors(orders: &[u64]) -> Vec<u64> {
    let mut by_prime: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for &d in orders {
        let mut rest = d;
        for p in prime_factors(d) {
            let mut pk = 1;
            while rest % p == 0 {
                rest /= p;
                pk *= p;
            }
            by_prime.entry(p).or_default().push(pk);
        }
    }
    let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut out = vec![1u64; len];
    for powers in by_prime.values_mut() {
        powers.sort_unstable_by(|a, b| b.cmp(a));
        for (i, pk) in powers.iter().enumerate() {
            out[len - 1 - i] *= pk;
        }
    }
    out
}

/// Cohomology with coefficients in `coeff` from integral data, by the
/// universal coefficient theorem: `H^n ⊗ A ⊕ Tor(H^{n+1}, A)`.
pub fn with_coefficients(free_rank: usize, torsion: &[u64], next_torsion: &[u64], coeff: AbelianCoeff) -> AbelianGroup {
    match coeff {
        AbelianCoeff::Rationals => AbelianGroup {
            free_rank,
            invariant_factors: vec![],
        },
        AbelianCoeff::Integers => AbelianGroup {
            free_rank,
            invariant_factors: normalize_factors(torsion),
        },
        AbelianCoeff::Mod(q) => {
            let mut orders = vec![q; free_rank];
            orders.extend(torsion.iter().chain(next_torsion).map(|t| t.gcd(&q)));
            AbelianGroup {
                free_rank: 0,
                invariant_factors: normalize_factors(&orders),
            }
        }
    }
}

/// Both computations of `H^2(X, A)` for trivial coefficients `A`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct H2Comparison {
    pub coeff: String,
    pub direct: AbelianGroup,
    pub via_group: AbelianGroup,
    pub matches: bool,
}

/// `H^2(X, A)` from the rack complex against `H^1(G_X, Fun(X, A))`.
///
/// For prime `q` the direct side is a dimension count over `F_q`; every
/// other case, and the group side always, goes through integral Smith forms
/// and universal coefficients.
pub fn h2_via_group(rack: &RackTable, coeff: AbelianCoeff, budget: &Budget) -> Result<H2Comparison> {
    let n = rack.size();
    let direct = match coeff {
        AbelianCoeff::Mod(1) => AbelianGroup::zero(),
        AbelianCoeff::Mod(q) if is_prime(q) => {
            let module = CoeffModule::trivial(Ring::PrimeField(q), 1, n)?;
            let r = ranks(&differentials(rack, &module, 2, budget)?);
            AbelianGroup {
                free_rank: 0,
                invariant_factors: vec![q; n * n - r[2] - r[1]],
            }
        }
        _ => {
            let module = CoeffModule::trivial(Ring::Integers, 1, n)?;
            let d = differentials(rack, &module, 2, budget)?;
            let r = ranks(&d);
            let opts = SmithOptions {
                transforms: false,
                bit_cap: budget.snf_bits,
            };
            let t2 = to_u64_factors(&d[1].smith_normal_form(opts)?.torsion())?;
            let t3 = to_u64_factors(&d[2].smith_normal_form(opts)?.torsion())?;
            with_coefficients(n * n - r[2] - r[1], &t2, &t3, coeff)
        }
    };

    let via_group = if coeff == AbelianCoeff::Mod(1) {
        AbelianGroup::zero()
    } else {
        let p = RackPresentation::of(rack);
        let fun = CoeffModule::functions(rack, Ring::Integers)?;
        let z = cocycle_relations(&p, &fun)?;
        let b = coboundaries(&p, &fun)?;
        let opts = SmithOptions {
            transforms: false,
            bit_cap: budget.snf_bits,
        };
        let t1 = to_u64_factors(&b.smith_normal_form(opts)?.torsion())?;
        let t2 = to_u64_factors(&z.smith_normal_form(opts)?.torsion())?;
        with_coefficients(z.cols() - z.rank() - b.rank(), &t1, &t2, coeff)
    };
    let matches = direct == via_group;
    Ok(H2Comparison {
        coeff: coeff.to_string(),
        direct,
        via_group,
        matches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rack::{make_standard, StandardRack};

    #[test]
    fn presentation_has_all_pairs() {
        let d3 = make_standard(&StandardRack::Dihedral(3)).unwrap();
        let p = RackPresentation::of(&d3);
        assert_eq!(p.relations.len(), 9);
        assert!(p.relations.contains(&(1, 0, 2)));
    }

    #[test]
    fn trivial_coefficients_give_orbit_count() {
        for kind in [
            StandardRack::Dihedral(3),
            StandardRack::Dihedral(4),
            StandardRack::Trivial(3),
        ] {
            let rack = make_standard(&kind).unwrap();
            let z = CoeffModule::trivial(Ring::Integers, 1, rack.size()).unwrap();
            let h1 = group_h1(&RackPresentation::of(&rack), &z).unwrap();
            let m = crate::rack::orbits(&rack).orbit_count;
            assert_eq!(
                h1,
                AbelianGroup {
                    free_rank: m,
                    invariant_factors: vec![]
                }
            );
        }
    }

    #[test]
    fn zero_module() {
        let d3 = make_standard(&StandardRack::Dihedral(3)).unwrap();
        let zero = CoeffModule::trivial(Ring::Integers, 0, 3).unwrap();
        assert_eq!(
            group_h1(&RackPresentation::of(&d3), &zero).unwrap(),
            AbelianGroup::zero()
        );
    }

    #[test]
    fn factor_normalization() {
        assert_eq!(normalize_factors(&[2, 3]), vec![6]);
        assert_eq!(normalize_factors(&[4, 2, 1]), vec![2, 4]);
        assert_eq!(normalize_factors(&[6, 10]), vec![2, 30]);
        assert!(normalize_factors(&[1, 1]).is_empty());
    }

    #[test]
    fn universal_coefficients() {
        let g = with_coefficients(1, &[2], &[3, 4], AbelianCoeff::Mod(2));
        assert_eq!(
            g,
            AbelianGroup {
                free_rank: 0,
                invariant_factors: vec![2, 2, 2]
            }
        );
        let g = with_coefficients(2, &[6], &[], AbelianCoeff::Integers);
        assert_eq!(
            g,
            AbelianGroup {
                free_rank: 2,
                invariant_factors: vec![6]
            }
        );
    }

    #[test]
    fn coefficient_parsing() {
        assert_eq!("Z3".parse::<AbelianCoeff>().unwrap(), AbelianCoeff::Mod(3));
        assert_eq!("Z/4".parse::<AbelianCoeff>().unwrap(), AbelianCoeff::Mod(4));
        assert_eq!("Q".parse::<AbelianCoeff>().unwrap(), AbelianCoeff::Rationals);
        assert!("Z0".parse::<AbelianCoeff>().is_err());
        assert!("R".parse::<AbelianCoeff>().is_err());
    }

    #[test]
    fn h2_examples() {
        let b = Budget::default();
        let d3 = make_standard(&StandardRack::Dihedral(3)).unwrap();
        let c = h2_via_group(&d3, AbelianCoeff::Mod(3), &b).unwrap();
        assert!(c.matches, "{c:?}");
        let t2 = make_standard(&StandardRack::Trivial(2)).unwrap();
        let c = h2_via_group(&t2, AbelianCoeff::Rationals, &b).unwrap();
        assert!(c.matches);
        assert_eq!(c.direct.free_rank, 4);
        let c = h2_via_group(&d3, AbelianCoeff::Mod(1), &b).unwrap();
        assert_eq!((c.direct, c.matches), (AbelianGroup::zero(), true));
    }
}
