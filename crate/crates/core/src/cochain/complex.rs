//! Matrices of the maps on `C^n(X, M) = Fun(X^n, M)`.
//!
//! Basis order: tuples `(x_1, ..., x_n)` lexicographically (`x_1` most
//! significant), module basis innermost. A cochain is the column vector of
//! its values, so a map `C^n → C^m` is a `dim C^m × dim C^n` matrix. Module
//! values are row vectors acted on from the right.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::module::CoeffModule;
use crate::budget::Budget;
use crate::error::{input, precondition, Result};
use crate::linalg::{DenseMatrix, ExactMatrix, Rat, Ring};
use crate::perm::Permutation;
use crate::rack::RackTable;

pub fn power(n: usize, d: usize) -> usize {
    n.pow(d as u32)
}

pub fn encode(xs: &[usize], n: usize) -> usize {
    xs.iter().fold(0, |acc, &x| acc * n + x)
}

pub fn decode(mut idx: usize, n: usize, d: usize) -> Vec<usize> {
    let mut xs = vec![0; d];
    for i in (0..d).rev() {
        xs[i] = idx % n;
        idx /= n;
    }
    xs
}

/// Dimension of `C^n(X, M)`.
pub fn cochain_dim(rack: &RackTable, module: &CoeffModule, n: usize) -> usize {
    power(rack.size(), n) * module.dim()
}

fn check_pair(rack: &RackTable, module: &CoeffModule) -> Result<()> {
    if module.rack_size() != rack.size() {
        return input(format!(
            "module built for a rack of size {}, used with size {}",
            module.rack_size(),
            rack.size()
        ));
    }
    Ok(())
}

/// Fails if `d^n` would not fit in the budget.
pub fn check_budget(rack: &RackTable, module: &CoeffModule, n: usize, budget: &Budget) -> Result<()> {
    budget.check_degree(n)?;
    let k = module.dim();
    let entries = power(rack.size(), n + 1)
        .saturating_mul(k)
        .saturating_mul(2 * (n + 1))
        .saturating_mul(k.max(1));
    budget.check_entries(entries, &format!("differential d^{n}"))
}

/// Accumulates `coeff * (f(src)·A)[j]` for every output component `j`.
fn push_block(
    ring: Ring,
    rows: &mut [BTreeMap<usize, Rat>],
    out_base: usize,
    src_base: usize,
    a: Option<&DenseMatrix>,
    coeff: &Rat,
    k: usize,
) {
    for (j, row) in rows[out_base..out_base + k].iter_mut().enumerate() {
        match a {
            None => {
                let e = row.entry(src_base + j).or_insert_with(Rat::zero);
                *e = ring.add(e, coeff);
            }
            Some(a) => {
                for l in 0..k {
                    let m = a.get(l, j);
                    if !m.is_zero() {
                        let e = row.entry(src_base + l).or_insert_with(Rat::zero);
                        *e = ring.add(e, &ring.mul(coeff, m));
                    }
                }
            }
        }
    }
}

fn signed(ring: Ring, i: usize) -> Rat {
    ring.reduce(&Rat::from_integer(if i % 2 == 0 { 1.into() } else { (-1).into() }))
        .unwrap()
}

/// `d: C^n → C^{n+1}`,
/// `df(x_1..x_{n+1}) = Σ_i (-1)^{i-1} [ f(..x̂_i..) - f(x_1..x_{i-1}, x_i▷x_{i+1}, .., x_i▷x_{n+1})·x_i ]`.
pub fn differential(rack: &RackTable, module: &CoeffModule, n: usize) -> Result<ExactMatrix> {
    check_pair(rack, module)?;
    let (size, k, ring) = (rack.size(), module.dim(), module.ring());
    let out_tuples = power(size, n + 1);
    let mut rows = vec![BTreeMap::new(); out_tuples * k];
    for o in 0..out_tuples {
        let xs = decode(o, size, n + 1);
        for i in 0..=n {
            let s = signed(ring, i);
            let omit: Vec<usize> = xs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &x)| x)
                .collect();
            let moved: Vec<usize> = xs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(j, &x)| if j > i { rack.op(xs[i], x) } else { x })
                .collect();
            push_block(ring, &mut rows, o * k, encode(&omit, size) * k, None, &s, k);
            let neg = ring.neg(&s);
            push_block(
                ring,
                &mut rows,
                o * k,
                encode(&moved, size) * k,
                Some(module.action(xs[i])),
                &neg,
                k,
            );
        }
    }
    ExactMatrix::from_row_maps(ring, power(size, n) * k, rows)
}

/// The alternative differential
/// `d'f(x_1..x_{n+1}) = Σ_i (-1)^{i-1} [ f(..x̂_i..)·(x_1▷(x_2▷(⋯x_i)))⁻¹ - f(x_1..x_{i-1}, x_i▷x_{i+1}, ..) ]`.
pub fn differential_prime(rack: &RackTable, module: &CoeffModule, n: usize) -> Result<ExactMatrix> {
    check_pair(rack, module)?;
    let (size, k, ring) = (rack.size(), module.dim(), module.ring());
    let out_tuples = power(size, n + 1);
    let mut rows = vec![BTreeMap::new(); out_tuples * k];
    for o in 0..out_tuples {
        let xs = decode(o, size, n + 1);
        for i in 0..=n {
            let s = signed(ring, i);
            let omit: Vec<usize> = xs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &x)| x)
                .collect();
            let moved: Vec<usize> = xs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(j, &x)| if j > i { rack.op(xs[i], x) } else { x })
                .collect();
            let nested = xs[..i].iter().rev().fold(xs[i], |acc, &x| rack.op(x, acc));
            push_block(
                ring,
                &mut rows,
                o * k,
                encode(&omit, size) * k,
                Some(module.inverse_action(nested)),
                &s,
                k,
            );
            let neg = ring.neg(&s);
            push_block(ring, &mut rows, o * k, encode(&moved, size) * k, None, &neg, k);
        }
    }
    ExactMatrix::from_row_maps(ring, power(size, n) * k, rows)
}

/// Block-diagonal map with block `B_t` at tuple `t`: `(Ff)(t) = f(t)·B_t`.
fn block_diagonal(ring: Ring, k: usize, blocks: impl Iterator<Item = DenseMatrix>) -> Result<ExactMatrix> {
    let mut rows = Vec::new();
    for (t, b) in blocks.enumerate() {
        let mut block_rows = vec![BTreeMap::new(); k];
        push_block(
            ring,
            &mut block_rows,
            0,
            t * k,
            Some(&b),
            &Rat::from_integer(1.into()),
            k,
        );
        rows.extend(block_rows);
    }
    let cols = rows.len();
    ExactMatrix::from_row_maps(ring, cols, rows)
}

/// `T: (C^n, d) → (C^n, d')`, `(Tf)(x_1..x_n) = f(x_1..x_n)·(x_1⋯x_n)⁻¹`.
pub fn chain_iso_t(rack: &RackTable, module: &CoeffModule, n: usize) -> Result<ExactMatrix> {
    check_pair(rack, module)?;
    let (size, k, ring) = (rack.size(), module.dim(), module.ring());
    let blocks = (0..power(size, n)).map(|t| {
        // (x_1⋯x_n)⁻¹ acts as A_{x_n}⁻¹ ⋯ A_{x_1}⁻¹
        decode(t, size, n)
            .iter()
            .rev()
            .fold(DenseMatrix::identity(ring, k), |acc, &x| {
                acc.mul(module.inverse_action(x))
            })
    });
    block_diagonal(ring, k, blocks)
}

/// Matrix of `f ↦ f·g` on `C^n` for a pair `g = (π, M)`:
/// `(f·g)(x_1..x_n) = f(π x_1, .., π x_n)·M`.
pub fn pair_action(
    ring: Ring,
    size: usize,
    k: usize,
    n: usize,
    perm: &Permutation,
    mat: &DenseMatrix,
) -> Result<ExactMatrix> {
    let tuples = power(size, n);
    let mut rows = vec![BTreeMap::new(); tuples * k];
    let one = Rat::from_integer(1.into());
    for t in 0..tuples {
        let image: Vec<usize> = decode(t, size, n).into_iter().map(|x| perm.apply(x)).collect();
        push_block(ring, &mut rows, t * k, encode(&image, size) * k, Some(mat), &one, k);
    }
    ExactMatrix::from_row_maps(ring, tuples * k, rows)
}

/// `(f·y)(x_1..x_n) = f(y▷x_1, .., y▷x_n)·y`.
pub fn group_action_on_cochains(rack: &RackTable, module: &CoeffModule, n: usize, y: usize) -> Result<ExactMatrix> {
    check_pair(rack, module)?;
    if y >= rack.size() {
        return input(format!("element {y} outside the rack"));
    }
    pair_action(
        module.ring(),
        rack.size(),
        module.dim(),
        n,
        &rack.translation(y),
        module.action(y),
    )
}

/// The identification `J: C^n(X, A) → C^{n-1}(X, Fun(X, A))`,
/// `(Jf)(x_1..x_{n-1})(x_n) = f(x_1..x_n)`.
#[derive(Debug, Clone)]
pub struct ShiftIso {
    pub degree: usize,
    /// Reindexing matrix from `C^n(X, A)` to `C^{n-1}(X, Fun(X, A))`.
    pub matrix: ExactMatrix,
    /// `Fun(X, A)` with `(h·y)(x) = h(y▷x)`.
    pub fun_module: CoeffModule,
}

pub fn shift_j(rack: &RackTable, coeff: &CoeffModule, n: usize) -> Result<ShiftIso> {
    check_pair(rack, coeff)?;
    if n == 0 {
        return input("the shift is defined from degree 1");
    }
    if !coeff.is_trivial_action() {
        return precondition("the shift isomorphism needs coefficients with trivial action");
    }
    let (size, k, ring) = (rack.size(), coeff.dim(), coeff.ring());
    let fun_module = CoeffModule::functions(rack, ring)?.tensor(coeff)?;
    let mut rows = vec![BTreeMap::new(); power(size, n) * k];
    for t in 0..power(size, n) {
        let xs = decode(t, size, n);
        let (head, last) = xs.split_at(n - 1);
        for j in 0..k {
            let src = t * k + j;
            let dst = encode(head, size) * (size * k) + last[0] * k + j;
            rows[dst].insert(src, Rat::from_integer(1.into()));
        }
    }
    let matrix = ExactMatrix::from_row_maps(ring, power(size, n) * k, rows)?;
    Ok(ShiftIso {
        degree: n,
        matrix,
        fun_module,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;
    use crate::rack::{make_standard, StandardRack};

    fn d3() -> RackTable {
        make_standard(&StandardRack::Dihedral(3)).unwrap()
    }

    #[test]
    fn indexing_round_trip() {
        for i in 0..27 {
            assert_eq!(encode(&decode(i, 3, 3), 3), i);
        }
        assert_eq!(decode(5, 3, 2), vec![1, 2]);
        assert_eq!(decode(0, 4, 0), Vec::<usize>::new());
    }

    #[test]
    fn degree_zero_trivial_is_zero() {
        let m = CoeffModule::trivial(Ring::Integers, 1, 3).unwrap();
        let d0 = differential(&d3(), &m, 0).unwrap();
        assert_eq!((d0.rows(), d0.cols()), (3, 1));
        assert!(d0.is_zero());
    }

    #[test]
    fn degree_one_trivial_formula() {
        // (df)(x1, x2) = f(x2) - f(x1 ▷ x2)
        let rack = d3();
        let m = CoeffModule::trivial(Ring::Integers, 1, 3).unwrap();
        let d1 = differential(&rack, &m, 1).unwrap();
        for x1 in 0..3 {
            for x2 in 0..3 {
                for y in 0..3 {
                    let expected = i64::from(y == x2) - i64::from(y == rack.op(x1, x2));
                    assert_eq!(d1.get(x1 * 3 + x2, y), rat(expected));
                }
            }
        }
    }

    #[test]
    fn indicator_of_zero_under_d1() {
        let rack = d3();
        let m = CoeffModule::trivial(Ring::Integers, 1, 3).unwrap();
        let d1 = differential(&rack, &m, 1).unwrap();
        let df = d1.mul_vec(&[rat(1), rat(0), rat(0)]);
        // δ0(x2) - δ0(2 x1 - x2 mod 3), rows (x1, x2) in lexicographic order
        let expected = [0, 0, 0, 1, 0, -1, 1, -1, 0];
        assert_eq!(df, expected.iter().map(|&v| rat(v)).collect::<Vec<_>>());
    }

    #[test]
    fn row_sparsity_bound() {
        let m = CoeffModule::jordan(Ring::Rationals, 3, &rat(1), 2).unwrap();
        for n in 0..3 {
            let d = differential(&d3(), &m, n).unwrap();
            for r in 0..d.rows() {
                assert!(d.row(r).len() <= 2 * (n + 1) * 2);
            }
        }
    }

    #[test]
    fn d_prime_examples() {
        let rack = d3();
        let triv = CoeffModule::trivial(Ring::Rationals, 1, 3).unwrap();
        for n in 0..3 {
            assert_eq!(
                differential_prime(&rack, &triv, n).unwrap(),
                differential(&rack, &triv, n).unwrap()
            );
        }
        // n = 0: d'f(x1) = f·x1⁻¹ - f
        let half = CoeffModule::jordan(Ring::Rationals, 3, &rat(2), 1).unwrap();
        let dp = differential_prime(&rack, &half, 0).unwrap();
        for x in 0..3 {
            assert_eq!(dp.get(x, 0), Rat::new((-1).into(), 2.into()));
        }
    }

    #[test]
    fn t_examples() {
        let rack = d3();
        let m = CoeffModule::jordan(Ring::Rationals, 3, &rat(3), 1).unwrap();
        assert_eq!(
            chain_iso_t(&rack, &m, 0).unwrap(),
            ExactMatrix::identity(Ring::Rationals, 1)
        );
        let triv = CoeffModule::trivial(Ring::Rationals, 2, 3).unwrap();
        assert_eq!(
            chain_iso_t(&rack, &triv, 2).unwrap(),
            ExactMatrix::identity(Ring::Rationals, 18)
        );
        let t2 = chain_iso_t(&rack, &m, 2).unwrap();
        assert_eq!(
            t2,
            ExactMatrix::identity(Ring::Rationals, 9).scale(&Rat::new(1.into(), 9.into()))
        );
    }

    #[test]
    fn action_examples() {
        let rack = d3();
        let z = CoeffModule::trivial(Ring::Integers, 1, 3).unwrap();
        let a = group_action_on_cochains(&rack, &z, 1, 0).unwrap();
        // φ_0 swaps 1 and 2
        let expected = ExactMatrix::from_ints(Ring::Integers, &[vec![1, 0, 0], vec![0, 0, 1], vec![0, 1, 0]]).unwrap();
        assert_eq!(a, expected);
        let triv = make_standard(&StandardRack::Trivial(3)).unwrap();
        for y in 0..3 {
            assert_eq!(
                group_action_on_cochains(&triv, &z, 2, y).unwrap(),
                ExactMatrix::identity(Ring::Integers, 9)
            );
        }
        let j = CoeffModule::jordan(Ring::Rationals, 3, &rat(1), 2).unwrap();
        assert_eq!(
            group_action_on_cochains(&rack, &j, 0, 1).unwrap(),
            j.action(1).to_exact().transpose()
        );
    }

    #[test]
    fn shift_examples() {
        let rack = d3();
        let z = CoeffModule::trivial(Ring::Integers, 1, 3).unwrap();
        let j1 = shift_j(&rack, &z, 1).unwrap();
        assert_eq!(j1.matrix, ExactMatrix::identity(Ring::Integers, 3));
        let j2 = shift_j(&rack, &z, 2).unwrap();
        assert_eq!((j2.matrix.rows(), j2.matrix.cols()), (9, 9));
        let twisted = CoeffModule::jordan(Ring::Rationals, 3, &rat(2), 1).unwrap();
        assert!(matches!(
            shift_j(&rack, &twisted, 1),
            Err(crate::Error::Precondition(_))
        ));
        assert!(shift_j(&rack, &z, 0).is_err());
    }
}
