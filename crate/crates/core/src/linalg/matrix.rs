use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::ring::{rat, Rat, Ring};
use crate::error::{input, Result};

/// Sparse exact matrix, stored row-major as sorted `(column, value)` lists.
///
/// Entries are always canonical for `ring` and zero entries are never
/// stored, so structural equality is mathematical equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, Rat)>>,
}

impl ExactMatrix {
    pub fn zeros(ring: Ring, rows: usize, cols: usize) -> Self {
        ExactMatrix {
            ring,
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(ring: Ring, n: usize) -> Self {
        let data = (0..n).map(|i| vec![(i, Rat::one())]).collect();
        ExactMatrix {
            ring,
            rows: n,
            cols: n,
            data,
        }
    }

    /// Builds a matrix from per-row maps, reducing entries into `ring` and
    /// dropping zeros. Used by the complex builders.
    pub fn from_row_maps(ring: Ring, cols: usize, rows: Vec<BTreeMap<usize, Rat>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n);
        for row in rows {
            let mut out = Vec::with_capacity(row.len());
            for (c, v) in row {
                if c >= cols {
                    return input(format!("column {c} out of range for {cols} columns"));
                }
                let v = ring.reduce(&v)?;
                if !v.is_zero() {
                    out.push((c, v));
                }
            }
            data.push(out);
        }
        Ok(ExactMatrix {
            ring,
            rows: n,
            cols,
            data,
        })
    }

    pub fn from_dense(ring: Ring, cols: usize, rows: &[Vec<Rat>]) -> Result<Self> {
        let maps = rows
            .iter()
            .map(|r| {
                if r.len() != cols {
                    return input(format!("row of length {} in a {cols}-column matrix", r.len()));
                }
                Ok(r.iter().cloned().enumerate().collect::<BTreeMap<_, _>>())
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_row_maps(ring, cols, maps)
    }

    /// Convenience constructor from small integer rows.
    pub fn from_ints(ring: Ring, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let dense: Vec<Vec<Rat>> = rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect();
        Self::from_dense(ring, cols, &dense)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn row(&self, i: usize) -> &[(usize, Rat)] {
        &self.data[i]
    }

    pub fn row_data(&self) -> &[Vec<(usize, Rat)>] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Rat {
        match self.data[i].binary_search_by_key(&j, |e| e.0) {
            Ok(k) => self.data[i][k].1.clone(),
            Err(_) => Rat::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn to_dense(&self) -> Vec<Vec<Rat>> {
        self.data
            .iter()
            .map(|row| {
                let mut d = vec![Rat::zero(); self.cols];
                for (c, v) in row {
                    d[*c] = v.clone();
                }
                d
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = vec![Vec::new(); self.cols];
        for (i, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                data[*c].push((i, v.clone()));
            }
        }
        ExactMatrix {
            ring: self.ring,
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != other.rows {
            return input(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            ));
        }
        let ring = self.ring;
        let mut data = Vec::with_capacity(self.rows);
        for row in &self.data {
            let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
            for (k, a) in row {
                for (j, b) in &other.data[*k] {
                    let e = acc.entry(*j).or_insert_with(Rat::zero);
                    *e = ring.add(e, &ring.mul(a, b));
                }
            }
            data.push(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        }
        Ok(ExactMatrix {
            ring,
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        self.data
            .iter()
            .map(|row| {
                row.iter().fold(Rat::zero(), |acc, (c, a)| {
                    self.ring.add(&acc, &self.ring.mul(a, &v[*c]))
                })
            })
            .collect()
    }

    fn zip_with(&self, other: &ExactMatrix, f: impl Fn(&Rat, &Rat) -> Rat) -> Result<ExactMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return input("matrix shapes differ");
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut m: BTreeMap<usize, (Rat, Rat)> = BTreeMap::new();
                for (c, v) in a {
                    m.entry(*c).or_insert_with(|| (Rat::zero(), Rat::zero())).0 = v.clone();
                }
                for (c, v) in b {
                    m.entry(*c).or_insert_with(|| (Rat::zero(), Rat::zero())).1 = v.clone();
                }
                m.into_iter()
                    .map(|(c, (x, y))| (c, f(&x, &y)))
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        Ok(ExactMatrix {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn add(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        let ring = self.ring;
        self.zip_with(other, |a, b| ring.add(a, b))
    }

    pub fn sub(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        let ring = self.ring;
        self.zip_with(other, |a, b| ring.sub(a, b))
    }

    pub fn scale(&self, s: &Rat) -> ExactMatrix {
        let data = self
            .data
            .iter()
            .map(|row| {
                row.iter()
                    .map(|(c, v)| (*c, self.ring.mul(v, s)))
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        ExactMatrix {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.rows != other.rows {
            return input("hstack: row counts differ");
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut r = a.clone();
                r.extend(b.iter().map(|(c, v)| (c + self.cols, v.clone())));
                r
            })
            .collect();
        Ok(ExactMatrix {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols + other.cols,
            data,
        })
    }

    /// `[self; other]`.
    pub fn vstack(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != other.cols {
            return input("vstack: column counts differ");
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(ExactMatrix {
            ring: self.ring,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(ring: Ring, rows: usize, columns: &[Vec<Rat>]) -> Result<ExactMatrix> {
        let mut maps = vec![BTreeMap::new(); rows];
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return input("column length mismatch");
            }
            for (i, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    maps[i].insert(j, v.clone());
                }
            }
        }
        Self::from_row_maps(ring, columns.len(), maps)
    }

    /// The same entries viewed over another ring (e.g. an integer matrix
    /// over Q or reduced mod p).
    pub fn change_ring(&self, ring: Ring) -> Result<ExactMatrix> {
        let maps = self.data.iter().map(|r| r.iter().cloned().collect()).collect();
        Self::from_row_maps(ring, self.cols, maps)
    }
}

/// Small dense matrix used for module actions and group elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DenseMatrix {
    ring: Ring,
    n: usize,
    data: Vec<Rat>,
}

impl DenseMatrix {
    pub fn identity(ring: Ring, n: usize) -> Self {
        let mut data = vec![Rat::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = Rat::one();
        }
        DenseMatrix { ring, n, data }
    }

    pub fn scalar(ring: Ring, n: usize, s: &Rat) -> Result<Self> {
        let s = ring.reduce(s)?;
        let mut m = Self::identity(ring, n);
        for i in 0..n {
            m.data[i * n + i] = s.clone();
        }
        Ok(m)
    }

    pub fn from_rows(ring: Ring, rows: &[Vec<Rat>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return input(format!(
                    "action matrix is not square ({n} rows, row of length {})",
                    r.len()
                ));
            }
            for v in r {
                data.push(ring.reduce(v)?);
            }
        }
        Ok(DenseMatrix { ring, n, data })
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<Rat>> {
        self.data
            .chunks(self.n.max(1))
            .take(self.n)
            .map(<[Rat]>::to_vec)
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.ring, self.n)
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        let n = self.n;
        let mut data = vec![Rat::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.data[k * n + j];
                    if !b.is_zero() {
                        data[i * n + j] = self.ring.add(&data[i * n + j], &self.ring.mul(a, b));
                    }
                }
            }
        }
        DenseMatrix {
            ring: self.ring,
            n,
            data,
        }
    }

    pub fn sub_identity(&self) -> DenseMatrix {
        let mut m = self.clone();
        for i in 0..self.n {
            m.data[i * self.n + i] = self.ring.sub(&m.data[i * self.n + i], &Rat::one());
        }
        m
    }

    /// Inverse over the matrix's ring, if it exists.
    pub fn inverse(&self) -> Option<DenseMatrix> {
        let n = self.n;
        // Gauss-Jordan over the fraction field (or F_p), then check the
        // result lies in the ring.
        let work_ring = match self.ring {
            Ring::Integers => Ring::Rationals,
            r => r,
        };
        let mut a: Vec<Vec<Rat>> = self.rows();
        let mut inv: Vec<Vec<Rat>> = Self::identity(work_ring, n).rows();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, piv);
            inv.swap(col, piv);
            let s = work_ring.inv(&a[col][col])?;
            for j in 0..n {
                a[col][j] = work_ring.mul(&a[col][j], &s);
                inv[col][j] = work_ring.mul(&inv[col][j], &s);
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for j in 0..n {
                        a[r][j] = work_ring.sub(&a[r][j], &work_ring.mul(&f, &a[col][j]));
                        inv[r][j] = work_ring.sub(&inv[r][j], &work_ring.mul(&f, &inv[col][j]));
                    }
                }
            }
        }
        DenseMatrix::from_rows(self.ring, &inv).ok()
    }

    /// Kronecker product `self ⊗ other`, rows indexed `(i, k) -> i*m + k`.
    pub fn kron(&self, other: &DenseMatrix) -> DenseMatrix {
        let (n, m) = (self.n, other.n);
        let size = n * m;
        let mut data = vec![Rat::zero(); size * size];
        for i in 0..n {
            for j in 0..n {
                let a = &self.data[i * n + j];
                if a.is_zero() {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        data[(i * m + k) * size + j * m + l] = self.ring.mul(a, &other.data[k * m + l]);
                    }
                }
            }
        }
        DenseMatrix {
            ring: self.ring,
            n: size,
            data,
        }
    }

    pub fn to_exact(&self) -> ExactMatrix {
        ExactMatrix::from_dense(self.ring, self.n, &self.rows()).expect("entries already canonical")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiply_and_transpose() {
        let a = ExactMatrix::from_ints(Ring::Integers, &[vec![1, 2], vec![0, 3]]).unwrap();
        let b = ExactMatrix::from_ints(Ring::Integers, &[vec![4, 0], vec![1, -1]]).unwrap();
        let ab = a.mul(&b).unwrap();
        assert_eq!(
            ab,
            ExactMatrix::from_ints(Ring::Integers, &[vec![6, -2], vec![3, -3]]).unwrap()
        );
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(a.get(1, 0), Rat::zero());
        assert_eq!(a.nnz(), 3);
    }

    #[test]
    fn entries_reduced_mod_p() {
        let m = ExactMatrix::from_ints(Ring::PrimeField(3), &[vec![4, -1, 3]]).unwrap();
        assert_eq!(m.row(0), &[(0, rat(1)), (1, rat(2))]);
    }

    #[test]
    fn dense_inverse() {
        let m = DenseMatrix::from_rows(Ring::Integers, &[vec![rat(1), rat(0)], vec![rat(1), rat(1)]]).unwrap();
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        let two = DenseMatrix::scalar(Ring::Integers, 1, &rat(2)).unwrap();
        assert!(two.inverse().is_none());
        let two_q = DenseMatrix::scalar(Ring::Rationals, 1, &rat(2)).unwrap();
        assert_eq!(two_q.inverse().unwrap().get(0, 0), &Rat::new(1.into(), 2.into()));
    }

    #[test]
    fn kronecker_of_identities() {
        let i2 = DenseMatrix::identity(Ring::Rationals, 2);
        let i3 = DenseMatrix::identity(Ring::Rationals, 3);
        assert!(i2.kron(&i3).is_identity());
    }
}
