//! Finite racks as operation tables.
//!
//! Elements are the indices `0..n` and `table[x][y]` is `x ▷ y`. Every
//! other module receives racks only as a validated [`RackTable`].

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cochain::CoeffModule;
use crate::error::{input, precondition, Error, Result};
use crate::linalg::{DenseMatrix, Rat, Ring};
use crate::perm::{FiniteGroup, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RackTable {
    table: Vec<Vec<usize>>,
}

/// First violation found for a rack axiom.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum AxiomViolation {
    /// Row `x` maps `y1` and `y2` to the same element.
    NotBijective { x: usize, y1: usize, y2: usize },
    /// `x ▷ (y ▷ z) != (x ▷ y) ▷ (x ▷ z)`.
    NotSelfDistributive { x: usize, y: usize, z: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<AxiomViolation>,
}

/// Checks both rack axioms on a candidate table. Shape problems are input
/// errors; axiom failures are reported with the first witness per axiom.
pub fn verify_rack(candidate: &[Vec<usize>]) -> Result<ValidationReport> {
    let n = candidate.len();
    if n == 0 {
        return input("rack table is empty");
    }
    for (x, row) in candidate.iter().enumerate() {
        if row.len() != n {
            return input(format!("row {x} has length {}, expected {n}", row.len()));
        }
        if let Some(&v) = row.iter().find(|&&v| v >= n) {
            return input(format!("row {x} contains {v}, outside 0..{n}"));
        }
    }
    let mut violations = Vec::new();
    'rows: for (x, row) in candidate.iter().enumerate() {
        let mut first_preimage = vec![None; n];
        for (y, &v) in row.iter().enumerate() {
            if let Some(y1) = first_preimage[v] {
                violations.push(AxiomViolation::NotBijective { x, y1, y2: y });
                break 'rows;
            }
            first_preimage[v] = Some(y);
        }
    }
    let t = candidate;
    'sd: for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if t[x][t[y][z]] != t[t[x][y]][t[x][z]] {
                    violations.push(AxiomViolation::NotSelfDistributive { x, y, z });
                    break 'sd;
                }
            }
        }
    }
    Ok(ValidationReport {
        valid: violations.is_empty(),
        violations,
    })
}

impl RackTable {
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self> {
        let report = verify_rack(&table)?;
        match report.violations.first() {
            None => Ok(RackTable { table }),
            Some(v) => input(format!("not a rack: {v:?}")),
        }
    }

    pub fn size(&self) -> usize {
        self.table.len()
    }

    /// `x ▷ y`.
    #[inline]
    pub fn op(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// The left translation `y ↦ x ▷ y`.
    pub fn translation(&self, x: usize) -> Permutation {
        Permutation::new(self.table[x].clone()).expect("rows of a rack are bijections")
    }

    /// The rack transported along the bijection `sigma`.
    pub fn relabel(&self, sigma: &Permutation) -> Result<RackTable> {
        let n = self.size();
        if sigma.degree() != n {
            return input("relabeling has the wrong degree");
        }
        let mut t = vec![vec![0; n]; n];
        for x in 0..n {
            for y in 0..n {
                t[sigma.apply(x)][sigma.apply(y)] = sigma.apply(self.op(x, y));
            }
        }
        RackTable::new(t)
    }

    pub fn to_file(&self) -> RackFile {
        RackFile {
            size: self.size(),
            table: self.table.clone(),
            labels: None,
        }
    }
}

/// `R(x, y) = (x, x ▷ y)` satisfies `R12 R13 R23 = R23 R13 R12` on `X³`.
pub fn verify_yang_baxter(rack: &RackTable) -> bool {
    let n = rack.size();
    let r = |v: &mut [usize; 3], i: usize, j: usize| v[j] = rack.op(v[i], v[j]);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let mut lhs = [x, y, z];
                r(&mut lhs, 1, 2);
                r(&mut lhs, 0, 2);
                r(&mut lhs, 0, 1);
                let mut rhs = [x, y, z];
                r(&mut rhs, 0, 1);
                r(&mut rhs, 0, 2);
                r(&mut rhs, 1, 2);
                if lhs != rhs {
                    return false;
                }
            }
        }
    }
    true
}

pub fn is_quandle(rack: &RackTable) -> bool {
    (0..rack.size()).all(|x| rack.op(x, x) == x)
}

/// The standard families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StandardRack {
    /// `x ▷ y = y`.
    Trivial(usize),
    /// `x ▷ y = 2x - y mod n`.
    Dihedral(usize),
    /// `x ▷ y = y + 1 mod n`.
    Cyclic(usize),
    /// `x ▷ y = x y x⁻¹` on the whole group, or on a subset closed under
    /// conjugation (relabeled `0..|S|` in increasing order).
    Conjugation(FiniteGroup, Option<Vec<usize>>),
}

pub fn make_standard(kind: &StandardRack) -> Result<RackTable> {
    let family = |n: usize, f: &dyn Fn(usize, usize) -> usize| {
        if n == 0 {
            return input("rack size must be at least 1");
        }
        RackTable::new((0..n).map(|x| (0..n).map(|y| f(x, y)).collect()).collect())
    };
    match kind {
        StandardRack::Trivial(n) => family(*n, &|_, y| y),
        StandardRack::Dihedral(n) => family(*n, &|x, y| (2 * x + n - y % n) % n),
        StandardRack::Cyclic(n) => family(*n, &|_, y| (y + 1) % n),
        StandardRack::Conjugation(g, subset) => {
            let members: Vec<usize> = match subset {
                None => (0..g.order()).collect(),
                Some(s) => {
                    let mut s = s.clone();
                    s.sort_unstable();
                    s.dedup();
                    s
                }
            };
            if members.is_empty() || members.iter().any(|&a| a >= g.order()) {
                return input("conjugation subset must be a nonempty set of group elements");
            }
            let index: BTreeMap<usize, usize> = members.iter().enumerate().map(|(i, &a)| (a, i)).collect();
            let mut table = Vec::with_capacity(members.len());
            for &a in &members {
                let mut row = Vec::with_capacity(members.len());
                for &b in &members {
                    let c = g.mul(g.mul(a, b), g.inv(a));
                    match index.get(&c) {
                        Some(&i) => row.push(i),
                        None => {
                            return input(format!(
                                "subset is not closed under conjugation: {a} {b} {a}^-1 = {c} is missing"
                            ))
                        }
                    }
                }
                table.push(row);
            }
            RackTable::new(table)
        }
    }
}

/// Largest semidirect product the constructor will tabulate.
const MAX_SEMIDIRECT_SIZE: usize = 4096;

/// Enumerates `F_p^k` lexicographically.
pub(crate) fn vector_of(index: usize, p: u64, k: usize) -> Vec<u64> {
    let mut v = vec![0; k];
    let mut r = index;
    for i in (0..k).rev() {
        v[i] = (r % p as usize) as u64;
        r /= p as usize;
    }
    v
}

pub(crate) fn index_of(v: &[Rat], p: u64) -> usize {
    v.iter().fold(0, |acc, x| {
        acc * p as usize + x.to_integer().try_into().unwrap_or(0usize)
    })
}

/// Row vector times matrix over the module's ring.
pub(crate) fn row_times(ring: Ring, v: &[Rat], m: &DenseMatrix) -> Vec<Rat> {
    let k = m.dim();
    (0..k)
        .map(|j| (0..k).fold(Rat::default(), |acc, i| ring.add(&acc, &ring.mul(&v[i], m.get(i, j)))))
        .collect()
}

/// The rack on `X × N` with
/// `(x, n) ▷ (y, m) = (x ▷ y, n (1 - (x ▷ y)⁻¹) + m x⁻¹)`.
///
/// `N` must be a module over a prime field. Element `(x, v)` gets index
/// `x * p^k + v` with `v` read as a base-`p` numeral.
pub fn make_semidirect(rack: &RackTable, module: &CoeffModule) -> Result<RackTable> {
    let Ring::PrimeField(p) = module.ring() else {
        return precondition("semidirect product needs a module over a finite field");
    };
    let k = module.dim();
    let fiber = (p as usize)
        .checked_pow(k as u32)
        .filter(|f| f * rack.size() <= MAX_SEMIDIRECT_SIZE)
        .ok_or_else(|| Error::Resource(format!("semidirect product larger than {MAX_SEMIDIRECT_SIZE} elements")))?;
    let ring = module.ring();
    let inverses = (0..rack.size())
        .map(|x| {
            module
                .action(x)
                .inverse()
                .ok_or_else(|| Error::Input(format!("action matrix of element {x} is not invertible")))
        })
        .collect::<Result<Vec<_>>>()?;
    let vectors: Vec<Vec<Rat>> = (0..fiber)
        .map(|i| {
            vector_of(i, p, k)
                .into_iter()
                .map(|c| Rat::from_integer(c.into()))
                .collect()
        })
        .collect();
    let size = rack.size() * fiber;
    let mut table = vec![vec![0; size]; size];
    for x in 0..rack.size() {
        for (ni, nv) in vectors.iter().enumerate() {
            for y in 0..rack.size() {
                let xy = rack.op(x, y);
                let n_part: Vec<Rat> = {
                    let t = row_times(ring, nv, &inverses[xy]);
                    nv.iter().zip(&t).map(|(a, b)| ring.sub(a, b)).collect()
                };
                for (mi, mv) in vectors.iter().enumerate() {
                    let m_part = row_times(ring, mv, &inverses[x]);
                    let v: Vec<Rat> = n_part.iter().zip(&m_part).map(|(a, b)| ring.add(a, b)).collect();
                    table[x * fiber + ni][y * fiber + mi] = xy * fiber + index_of(&v, p);
                }
            }
        }
    }
    RackTable::new(table)
}

/// Orbits of the rack under its left translations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitPartition {
    /// Orbit index of each element; orbits are numbered by smallest member.
    pub orbit_of: Vec<usize>,
    pub orbit_count: usize,
}

impl OrbitPartition {
    pub fn size(&self) -> usize {
        self.orbit_of.len()
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.orbit_count];
        for &o in &self.orbit_of {
            s[o] += 1;
        }
        s
    }

    pub fn members(&self, orbit: usize) -> Vec<usize> {
        (0..self.size()).filter(|&x| self.orbit_of[x] == orbit).collect()
    }
}

fn find(parent: &mut [usize], mut a: usize) -> usize {
    while parent[a] != a {
        parent[a] = parent[parent[a]];
        a = parent[a];
    }
    a
}

/// Connected components of the graph with edges `{y, x ▷ y}`, by union-find.
pub fn orbits(rack: &RackTable) -> OrbitPartition {
    let n = rack.size();
    let mut parent: Vec<usize> = (0..n).collect();
    for x in 0..n {
        for y in 0..n {
            let (a, b) = (find(&mut parent, y), find(&mut parent, rack.op(x, y)));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut orbit_of = vec![0; n];
    let mut count = 0;
    for y in 0..n {
        let r = find(&mut parent, y);
        if label[r] == usize::MAX {
            label[r] = count;
            count += 1;
        }
        orbit_of[y] = label[r];
    }
    OrbitPartition {
        orbit_of,
        orbit_count: count,
    }
}

/// JSON rack file: `{"size": n, "table": [[...], ...], "labels": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RackFile {
    pub size: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl RackFile {
    pub fn parse(json: &str) -> Result<RackFile> {
        let f: RackFile = serde_json::from_str(json).map_err(|e| Error::Input(format!("bad rack file: {e}")))?;
        if f.size != f.table.len() {
            return input(format!(
                "size {} does not match table with {} rows",
                f.size,
                f.table.len()
            ));
        }
        if let Some(l) = &f.labels {
            if l.len() != f.size {
                return input("labels list length differs from size");
            }
        }
        Ok(f)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("rack file serializes")
    }

    pub fn rack(&self) -> Result<RackTable> {
        RackTable::new(self.table.clone())
    }
}
