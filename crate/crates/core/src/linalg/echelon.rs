//! Sparse row-echelon elimination over Q and F_p.
//!
//! Rank, kernel and solve all go through [`Echelon`], which keeps one
//! normalized pivot row per leading column. Rows are reduced only at their
//! leading entry while being inserted; `into_reduced` back-substitutes to
//! full reduced row-echelon form when a kernel or solution is needed.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::matrix::ExactMatrix;
use super::ring::{inv_mod, is_prime, mul_mod, rat, Rat, Ring};
use crate::error::{precondition, Result};

/// Above this many stored entries a rational rank is first computed modulo
/// two large primes.
pub const MODULAR_RANK_THRESHOLD: usize = 20_000;

pub(crate) trait FieldOps {
    type E: Clone;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
}

#[derive(Clone)]
pub(crate) struct Rationals;

impl FieldOps for Rationals {
    type E = Rat;
    fn is_zero(&self, a: &Rat) -> bool {
        a.is_zero()
    }
    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        a * b
    }
    fn sub(&self, a: &Rat, b: &Rat) -> Rat {
        a - b
    }
    fn neg(&self, a: &Rat) -> Rat {
        -a
    }
    fn inv(&self, a: &Rat) -> Rat {
        a.recip()
    }
}

#[derive(Clone)]
pub(crate) struct ModP(pub u64);

impl FieldOps for ModP {
    type E = u64;
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.0)
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.0 - (b - a)
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.0 - a
        }
    }
    fn inv(&self, a: &u64) -> u64 {
        inv_mod(*a, self.0)
    }
}

type SparseRow<E> = Vec<(usize, E)>;

/// `row - factor * pivot`, both sorted by column.
fn axpy<F: FieldOps>(f: &F, row: &[(usize, F::E)], factor: &F::E, pivot: &[(usize, F::E)]) -> SparseRow<F::E> {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let take_row = j >= pivot.len() || (i < row.len() && row[i].0 < pivot[j].0);
        let take_piv = i >= row.len() || (j < pivot.len() && pivot[j].0 < row[i].0);
        if take_row {
            out.push(row[i].clone());
            i += 1;
        } else if take_piv {
            let v = f.neg(&f.mul(factor, &pivot[j].1));
            out.push((pivot[j].0, v));
            j += 1;
        } else {
            let v = f.sub(&row[i].1, &f.mul(factor, &pivot[j].1));
            if !f.is_zero(&v) {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub(crate) struct Echelon<F: FieldOps> {
    field: F,
    pivots: BTreeMap<usize, SparseRow<F::E>>,
}

impl<F: FieldOps> Echelon<F> {
    pub(crate) fn new(field: F) -> Self {
        Echelon {
            field,
            pivots: BTreeMap::new(),
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` against the current pivots; returns true if it was
    /// independent and became a new pivot.
    pub(crate) fn insert(&mut self, mut row: SparseRow<F::E>) -> bool {
        loop {
            let Some((lead, lead_val)) = row.first().cloned() else {
                return false;
            };
            match self.pivots.get(&lead) {
                Some(p) => row = axpy(&self.field, &row, &lead_val, p),
                None => {
                    let s = self.field.inv(&lead_val);
                    let normalized = row.into_iter().map(|(c, v)| (c, self.field.mul(&v, &s))).collect();
                    self.pivots.insert(lead, normalized);
                    return true;
                }
            }
        }
    }

    /// Full reduced row-echelon form: every pivot column is zero outside
    /// its own pivot row. Returned in increasing pivot order.
    pub(crate) fn into_reduced(self) -> Vec<(usize, SparseRow<F::E>)> {
        let field = self.field;
        let mut done: BTreeMap<usize, SparseRow<F::E>> = BTreeMap::new();
        for (lead, mut row) in self.pivots.into_iter().rev() {
            // entries after the lead that sit in (already reduced) pivot columns
            loop {
                let hit = row[1..].iter().find(|(c, _)| done.contains_key(c)).cloned();
                match hit {
                    Some((c, v)) => row = axpy(&field, &row, &v, &done[&c]),
                    None => break,
                }
            }
            done.insert(lead, row);
        }
        done.into_iter().collect()
    }
}

fn rows_as_rationals(m: &ExactMatrix) -> Vec<SparseRow<Rat>> {
    m.row_data().to_vec()
}

fn rows_mod_p(m: &ExactMatrix, p: u64) -> Vec<SparseRow<u64>> {
    let pb = BigInt::from(p);
    m.row_data()
        .iter()
        .map(|row| {
            // clear denominators so the row is integral, then reduce
            let l = row.iter().fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
            row.iter()
                .filter_map(|(c, v)| {
                    let x = (v.numer() * (&l / v.denom())).mod_floor(&pb).to_u64().unwrap();
                    (x != 0).then_some((*c, x))
                })
                .collect()
        })
        .collect()
}

fn rank_of<F: FieldOps>(field: F, mut rows: Vec<SparseRow<F::E>>) -> usize {
    rows.sort_by_key(Vec::len);
    let mut e = Echelon::new(field);
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Two fixed 62-bit primes drawn from a seeded generator, so that runs are
/// reproducible.
pub fn modular_rank_primes() -> [u64; 2] {
    static PRIMES: OnceLock<[u64; 2]> = OnceLock::new();
    *PRIMES.get_or_init(|| {
        let mut rng = StdRng::seed_from_u64(0x5ac4_0b1e);
        let mut draw = || loop {
            let c = rng.gen_range((1u64 << 61)..(1u64 << 62)) | 1;
            if is_prime(c) {
                return c;
            }
        };
        [draw(), draw()]
    })
}

impl ExactMatrix {
    /// Rank over the matrix's ring (over the fraction field for integers).
    pub fn rank(&self) -> usize {
        match self.ring() {
            Ring::PrimeField(p) => self.rank_mod(p),
            _ => {
                if self.nnz() >= MODULAR_RANK_THRESHOLD {
                    let [p, q] = modular_rank_primes();
                    let (a, b) = (self.rank_mod(p), self.rank_mod(q));
                    if a == b {
                        return a;
                    }
                }
                self.rank_exact()
            }
        }
    }

    /// Exact rational rank by sparse elimination over Q.
    pub fn rank_exact(&self) -> usize {
        match self.ring() {
            Ring::PrimeField(p) => self.rank_mod(p),
            _ => rank_of(Rationals, rows_as_rationals(self)),
        }
    }

    /// Rank of the matrix reduced modulo the prime `p` (denominators are
    /// cleared row by row first).
    pub fn rank_mod(&self, p: u64) -> usize {
        rank_of(ModP(p), rows_mod_p(self, p))
    }

    /// Basis of the right kernel `{v : A v = 0}`; one vector per free column.
    pub fn kernel_basis(&self) -> Result<Vec<Vec<Rat>>> {
        match self.ring() {
            Ring::Integers => precondition("kernel_basis needs a field; change the ring to Q first"),
            Ring::Rationals => Ok(kernel_from(Rationals, rows_as_rationals(self), self.cols(), |v| v)),
            Ring::PrimeField(p) => Ok(kernel_from(
                ModP(p),
                rows_mod_p(self, p),
                self.cols(),
                |v| rat(v as i64),
            )),
        }
    }

    /// Some `x` with `A x = rhs`, or `None` when the system is inconsistent.
    pub fn solve(&self, rhs: &[Rat]) -> Result<Option<Vec<Rat>>> {
        if rhs.len() != self.rows() {
            return crate::error::input("right-hand side length differs from row count");
        }
        let ring = self.ring();
        if !ring.is_field() {
            return precondition("solve needs a field; change the ring to Q first");
        }
        let rhs_col = ExactMatrix::from_columns(ring, self.rows(), &[rhs.to_vec()])?;
        let aug = self.hstack(&rhs_col)?;
        let n = self.cols();
        Ok(match ring {
            Ring::PrimeField(p) => solve_from(ModP(p), rows_mod_p(&aug, p), n, |v| rat(v as i64)),
            _ => solve_from(Rationals, rows_as_rationals(&aug), n, |v| v),
        })
    }
}

fn reduced<F: FieldOps + Clone>(field: F, mut rows: Vec<SparseRow<F::E>>) -> (F, Vec<(usize, SparseRow<F::E>)>) {
    rows.sort_by_key(Vec::len);
    let mut e = Echelon::new(field.clone());
    for r in rows {
        e.insert(r);
    }
    (field, e.into_reduced())
}

fn kernel_from<F: FieldOps + Clone>(
    field: F,
    rows: Vec<SparseRow<F::E>>,
    cols: usize,
    lift: impl Fn(F::E) -> Rat,
) -> Vec<Vec<Rat>> {
    let (field, rref) = reduced(field, rows);
    let pivot_cols: std::collections::BTreeSet<usize> = rref.iter().map(|(c, _)| *c).collect();
    let free: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    let slot: BTreeMap<usize, usize> = free.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let mut basis: Vec<Vec<Rat>> = free
        .iter()
        .map(|&c| {
            let mut v = vec![Rat::zero(); cols];
            v[c] = Rat::one();
            v
        })
        .collect();
    for (lead, row) in &rref {
        for (c, val) in &row[1..] {
            if let Some(&k) = slot.get(c) {
                basis[k][*lead] = lift(field.neg(val));
            }
        }
    }
    basis
}

fn solve_from<F: FieldOps + Clone>(
    field: F,
    rows: Vec<SparseRow<F::E>>,
    cols: usize,
    lift: impl Fn(F::E) -> Rat,
) -> Option<Vec<Rat>> {
    let (_, rref) = reduced(field, rows);
    let mut x = vec![Rat::zero(); cols];
    for (lead, row) in rref {
        if lead == cols {
            return None;
        }
        if let Some((c, v)) = row.last() {
            if *c == cols {
                x[lead] = lift(v.clone());
            }
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[Vec<i64>]) -> ExactMatrix {
        ExactMatrix::from_ints(Ring::Rationals, rows).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(ExactMatrix::identity(Ring::Rationals, 3).rank(), 3);
        assert_eq!(q(&[vec![2, 4], vec![6, 8]]).rank(), 2);
        let f2 = ExactMatrix::from_ints(Ring::PrimeField(2), &[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(f2.rank(), 1);
        // det 6: full rank over Q and F5, rank 1 over F2 and F3
        let m = ExactMatrix::from_ints(Ring::Integers, &[vec![2, 0], vec![0, 3]]).unwrap();
        assert_eq!((m.rank(), m.rank_mod(2), m.rank_mod(3), m.rank_mod(5)), (2, 1, 1, 2));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(
            ExactMatrix::zeros(Ring::Rationals, 2, 3).kernel_basis().unwrap().len(),
            3
        );
        let k = q(&[vec![1, 1]]).kernel_basis().unwrap();
        assert_eq!(k, vec![vec![rat(-1), rat(1)]]);
        assert!(ExactMatrix::identity(Ring::Rationals, 4)
            .kernel_basis()
            .unwrap()
            .is_empty());
        assert!(ExactMatrix::identity(Ring::Integers, 1).kernel_basis().is_err());
    }

    #[test]
    fn solve_examples() {
        let id = ExactMatrix::identity(Ring::Rationals, 2);
        assert_eq!(id.solve(&[rat(1), rat(0)]).unwrap(), Some(vec![rat(1), rat(0)]));
        assert_eq!(q(&[vec![1, 1]]).solve(&[rat(0)]).unwrap(), Some(vec![rat(0), rat(0)]));
        let zero = ExactMatrix::zeros(Ring::Rationals, 1, 1);
        assert_eq!(zero.solve(&[rat(1)]).unwrap(), None);
    }

    #[test]
    fn kernel_mod_p_annihilates() {
        let m = ExactMatrix::from_ints(Ring::PrimeField(3), &[vec![1, 2, 0, 1], vec![2, 1, 1, 0]]).unwrap();
        let k = m.kernel_basis().unwrap();
        assert_eq!(k.len(), 4 - m.rank());
        for v in &k {
            assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn rank_primes_are_large_and_distinct() {
        let [p, q] = modular_rank_primes();
        assert!(p > (1 << 61) && q > (1 << 61) && p != q);
        assert!(is_prime(p) && is_prime(q));
    }
}
