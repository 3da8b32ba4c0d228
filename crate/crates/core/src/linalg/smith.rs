//! Smith normal form over the integers.
//!
//! Classical elimination: pivot on the entry of least absolute value in the
//! remaining block, clear its row and column by Euclidean steps, and fold a
//! non-divisible row into the pivot row until the pivot divides the whole
//! block. Before each pivot the common content of the block is divided out
//! and kept as a multiplier, which keeps entries small on the structured
//! matrices this crate produces.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::ExactMatrix;
use super::ring::{Rat, Ring};
use crate::error::{precondition, resource, Result};

pub const DEFAULT_SNF_BIT_CAP: u64 = 4096;

#[derive(Debug, Clone, Copy)]
pub struct SmithOptions {
    pub transforms: bool,
    pub bit_cap: u64,
}

impl Default for SmithOptions {
    fn default() -> Self {
        SmithOptions {
            transforms: false,
            bit_cap: DEFAULT_SNF_BIT_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    /// Nonzero diagonal entries `d1 | d2 | ... | dr`, all positive.
    pub invariant_factors: Vec<BigInt>,
    pub rank: usize,
    /// Unimodular `(U, V)` with `U A V` diagonal, when requested.
    pub transforms: Option<(ExactMatrix, ExactMatrix)>,
}

impl SmithForm {
    /// The invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

struct Work {
    a: Vec<Vec<BigInt>>,
    u: Option<Vec<Vec<BigInt>>>,
    v: Option<Vec<Vec<BigInt>>>,
    rows: usize,
    cols: usize,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for r in &mut self.a {
            r.swap(i, j);
        }
        if let Some(v) = &mut self.v {
            for r in v.iter_mut() {
                r.swap(i, j);
            }
        }
    }

    /// row_i -= q * row_j
    fn row_op(&mut self, i: usize, j: usize, q: &BigInt, from: usize) {
        for c in from..self.cols {
            let t = &self.a[j][c] * q;
            self.a[i][c] -= t;
        }
        if let Some(u) = &mut self.u {
            for c in 0..self.rows {
                let t = &u[j][c] * q;
                u[i][c] -= t;
            }
        }
    }

    /// col_i -= q * col_j
    fn col_op(&mut self, i: usize, j: usize, q: &BigInt, from: usize) {
        for r in from..self.rows {
            let t = &self.a[r][j] * q;
            self.a[r][i] -= t;
        }
        if let Some(v) = &mut self.v {
            for r in v.iter_mut() {
                let t = &r[j] * q;
                r[i] -= t;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -&*x;
        }
        if let Some(u) = &mut self.u {
            for x in &mut u[i] {
                *x = -&*x;
            }
        }
    }
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

fn to_exact(m: Vec<Vec<BigInt>>) -> ExactMatrix {
    let n = m.len();
    let dense: Vec<Vec<Rat>> = m
        .into_iter()
        .map(|r| r.into_iter().map(Rat::from_integer).collect())
        .collect();
    ExactMatrix::from_dense(Ring::Integers, n, &dense).expect("integer entries")
}

impl ExactMatrix {
    pub fn smith_normal_form(&self, opts: SmithOptions) -> Result<SmithForm> {
        if self.ring() != Ring::Integers {
            return precondition(format!(
                "Smith normal form needs an integer matrix, got ring {}",
                self.ring()
            ));
        }
        let (rows, cols) = (self.rows(), self.cols());
        let a: Vec<Vec<BigInt>> = self
            .to_dense()
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.to_integer()).collect())
            .collect();
        let mut w = Work {
            a,
            u: opts.transforms.then(|| identity(rows)),
            v: opts.transforms.then(|| identity(cols)),
            rows,
            cols,
        };
        let mut factors = Vec::new();
        let mut multiplier = BigInt::one();
        for t in 0..rows.min(cols) {
            // content extraction
            let mut g = BigInt::zero();
            let mut bits = 0;
            for r in t..rows {
                for c in t..cols {
                    if !w.a[r][c].is_zero() {
                        g = g.gcd(&w.a[r][c]);
                        bits = bits.max(w.a[r][c].bits());
                    }
                }
            }
            if g.is_zero() {
                break;
            }
            if bits + multiplier.bits() > opts.bit_cap {
                return resource(format!("Smith normal form entries exceed {} bits", opts.bit_cap));
            }
            if !g.is_one() {
                for r in t..rows {
                    for c in t..cols {
                        w.a[r][c] = &w.a[r][c] / &g;
                    }
                }
                multiplier *= &g;
            }
            loop {
                let (pr, pc) = min_abs_entry(&w.a, t, rows, cols);
                w.swap_rows(t, pr);
                w.swap_cols(t, pc);
                let pivot = w.a[t][t].clone();
                let mut clean = true;
                for r in t + 1..rows {
                    if !w.a[r][t].is_zero() {
                        let q = w.a[r][t].div_floor(&pivot);
                        w.row_op(r, t, &q, t);
                        clean &= w.a[r][t].is_zero();
                    }
                }
                for c in t + 1..cols {
                    if !w.a[t][c].is_zero() {
                        let q = w.a[t][c].div_floor(&pivot);
                        w.col_op(c, t, &q, t);
                        clean &= w.a[t][c].is_zero();
                    }
                }
                if !clean {
                    continue;
                }
                let offending = (t + 1..rows).find(|&r| (t + 1..cols).any(|c| !w.a[r][c].is_multiple_of(&pivot)));
                match offending {
                    Some(r) => w.row_op(t, r, &BigInt::from(-1), t),
                    None => break,
                }
            }
            if w.a[t][t].is_negative() {
                w.negate_row(t);
            }
            factors.push(&w.a[t][t] * &multiplier);
        }
        let rank = factors.len();
        let transforms = match (w.u, w.v) {
            (Some(u), Some(v)) => Some((to_exact(u), to_exact(v))),
            _ => None,
        };
        Ok(SmithForm {
            invariant_factors: factors,
            rank,
            transforms,
        })
    }
}

fn min_abs_entry(a: &[Vec<BigInt>], t: usize, rows: usize, cols: usize) -> (usize, usize) {
    let mut best: Option<(usize, usize)> = None;
    for r in t..rows {
        for c in t..cols {
            let x = &a[r][c];
            if x.is_zero() {
                continue;
            }
            match best {
                Some((br, bc)) if a[br][bc].abs() <= x.abs() => {}
                _ => {
                    if x.abs().is_one() {
                        return (r, c);
                    }
                    best = Some((r, c));
                }
            }
        }
    }
    best.expect("block has a nonzero entry")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(rows: &[Vec<i64>]) -> ExactMatrix {
        ExactMatrix::from_ints(Ring::Integers, rows).unwrap()
    }

    fn factors(m: &ExactMatrix) -> Vec<i64> {
        let s = m.smith_normal_form(SmithOptions::default()).unwrap();
        s.invariant_factors.iter().map(|d| i64::try_from(d).unwrap()).collect()
    }

    #[test]
    fn small_examples() {
        assert_eq!(factors(&z(&[vec![2, 0], vec![0, 3]])), vec![1, 6]);
        assert_eq!(factors(&ExactMatrix::identity(Ring::Integers, 4)), vec![1, 1, 1, 1]);
        assert_eq!(factors(&z(&[vec![2, 4], vec![6, 8]])), vec![2, 4]);
        assert_eq!(factors(&ExactMatrix::zeros(Ring::Integers, 2, 3)), Vec::<i64>::new());
    }

    #[test]
    fn transforms_diagonalize() {
        let m = z(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = m
            .smith_normal_form(SmithOptions {
                transforms: true,
                ..Default::default()
            })
            .unwrap();
        let (u, v) = s.transforms.clone().unwrap();
        let d = u.mul(&m).unwrap().mul(&v).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j && i < s.rank {
                    Rat::from_integer(s.invariant_factors[i].clone())
                } else {
                    Rat::zero()
                };
                assert_eq!(d.get(i, j), expected);
            }
        }
        assert_eq!(factors(&m), vec![2, 6, 12]);
    }

    #[test]
    fn requires_integers() {
        assert!(ExactMatrix::identity(Ring::Rationals, 2)
            .smith_normal_form(SmithOptions::default())
            .is_err());
    }

    #[test]
    fn bit_cap_is_enforced() {
        let big = z(&[vec![1 << 40, 0], vec![0, 3]]);
        let opts = SmithOptions {
            transforms: false,
            bit_cap: 16,
        };
        assert!(matches!(
            big.smith_normal_form(opts),
            Err(crate::error::Error::Resource(_))
        ));
    }
}
