//! Permutation groups on `[0, n)`, closed by breadth-first multiplication,
//! and small abstract groups given by multiplication tables.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{input, resource, Result};
use crate::rack::RackTable;

/// Default element cap for closures.
pub const DEFAULT_CLOSURE_CAP: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return input(format!("{images:?} is not a permutation of 0..{n}"));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }
}

/// All elements generated by `generators`, identity first, then in
/// breadth-first discovery order with generators applied on the right in
/// input order.
pub fn group_closure(degree: usize, generators: &[Permutation], cap: usize) -> Result<Vec<Permutation>> {
    if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
        return input(format!(
            "generator of degree {} in a group of degree {degree}",
            g.degree()
        ));
    }
    let id = Permutation::identity(degree);
    let mut seen: HashMap<Permutation, ()> = HashMap::new();
    let mut order = vec![id.clone()];
    seen.insert(id.clone(), ());
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in generators {
            let h = g.compose(s);
            if !seen.contains_key(&h) {
                if order.len() >= cap {
                    return resource(format!("group closure exceeded {cap} elements"));
                }
                seen.insert(h.clone(), ());
                order.push(h.clone());
                queue.push_back(h);
            }
        }
    }
    Ok(order)
}

/// A permutation group with its materialized elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
}

impl PermGroup {
    pub fn generate(degree: usize, generators: Vec<Permutation>, cap: usize) -> Result<Self> {
        let elements = group_closure(degree, &generators, cap)?;
        Ok(PermGroup {
            degree,
            generators,
            elements,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.contains(p)
    }

    /// Orbit of `point` under the generators (hence under the group).
    pub fn point_orbit(&self, point: usize) -> Result<BTreeSet<usize>> {
        if point >= self.degree {
            return input(format!("point {point} outside 0..{}", self.degree));
        }
        let mut orbit = BTreeSet::from([point]);
        let mut stack = vec![point];
        while let Some(p) = stack.pop() {
            for g in &self.generators {
                let q = g.apply(p);
                if orbit.insert(q) {
                    stack.push(q);
                }
            }
        }
        Ok(orbit)
    }
}

/// The group generated by the left translations `y ↦ x ▷ y` of a rack
/// (the image of the structure group in the permutations of the rack).
pub fn inner_group(rack: &RackTable, cap: usize) -> Result<PermGroup> {
    let gens = (0..rack.size()).map(|x| rack.translation(x)).collect();
    PermGroup::generate(rack.size(), gens, cap)
}

/// A finite group given by its multiplication table, identity at index 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    /// Validates the group axioms; the identity must be element 0.
    pub fn from_table(name: impl Into<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) {
            return input("group table must be a nonempty square table of indices");
        }
        if (0..n).any(|a| table[0][a] != a || table[a][0] != a) {
            return input("element 0 is not the identity of the group table");
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return input(format!("group table is not associative at ({a},{b},{c})"));
                    }
                }
            }
        }
        let mut inverses = Vec::with_capacity(n);
        for a in 0..n {
            match (0..n).find(|&b| table[a][b] == 0) {
                Some(b) => inverses.push(b),
                None => return input(format!("element {a} has no inverse")),
            }
        }
        Ok(FiniteGroup {
            name: name.into(),
            table,
            inverses,
        })
    }

    /// Symmetric group on `n` points; elements are the permutations in
    /// lexicographic order of their image lists, multiplied by composition.
    pub fn symmetric(n: usize) -> Result<Self> {
        let perms = lex_permutations(n);
        let index: HashMap<&Permutation, usize> = perms.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let table = perms
            .iter()
            .map(|a| perms.iter().map(|b| index[&a.compose(b)]).collect())
            .collect();
        Self::from_table(format!("S{n}"), table)
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return input("cyclic group of order 0");
        }
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(format!("Z{n}"), table)
    }

    /// Dihedral group of order `2n`: element `(s, r)` ↦ index `s*n + r`
    /// representing `x ↦ (-1)^s x + r` on `Z/n`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n == 0 {
            return input("dihedral group of order 0");
        }
        let mul = |(s1, r1): (usize, usize), (s2, r2): (usize, usize)| {
            // (x ↦ ε1 x + r1) ∘ (x ↦ ε2 x + r2)
            let r = if s1 == 0 { (r1 + r2) % n } else { (r1 + n - r2) % n };
            ((s1 + s2) % 2, r)
        };
        let elems: Vec<(usize, usize)> = (0..2).flat_map(|s| (0..n).map(move |r| (s, r))).collect();
        let table = elems
            .iter()
            .map(|&a| {
                elems
                    .iter()
                    .map(|&b| {
                        let (s, r) = mul(a, b);
                        s * n + r
                    })
                    .collect()
            })
            .collect();
        Self::from_table(format!("D{n}"), table)
    }

    /// `S<n>`, `Z<n>` or `D<n>` (dihedral of order 2n).
    pub fn by_name(name: &str) -> Result<Self> {
        let name = name.trim();
        let (kind, num) = name.split_at(1.min(name.len()));
        let n: usize = num
            .parse()
            .map_err(|_| crate::Error::Input(format!("unknown group {name:?}")))?;
        match kind {
            "S" if n <= 5 => Self::symmetric(n),
            "S" => input("symmetric groups above S5 are not built in"),
            "Z" => Self::cyclic(n),
            "D" => Self::dihedral(n),
            _ => input(format!("unknown group {name:?}; expected S<n>, Z<n> or D<n>")),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.table[a][b] == self.table[b][a]))
    }

    /// Conjugacy classes, each sorted, listed by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for a in 0..n {
            if class_of[a] != usize::MAX {
                continue;
            }
            let members: BTreeSet<usize> = (0..n).map(|g| self.mul(self.mul(g, a), self.inv(g))).collect();
            for &m in &members {
                class_of[m] = classes.len();
            }
            classes.push(members.into_iter().collect());
        }
        classes
    }
}

fn lex_permutations(n: usize) -> Vec<Permutation> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
        let n = used.len();
        if prefix.len() == n {
            out.push(Permutation { images: prefix.clone() });
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rack::{make_standard, StandardRack};

    fn p(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn closure_examples() {
        assert_eq!(group_closure(3, &[p(&[1, 0, 2])], 100).unwrap().len(), 2);
        assert_eq!(group_closure(3, &[p(&[1, 0, 2]), p(&[1, 2, 0])], 100).unwrap().len(), 6);
        let trivial = group_closure(3, &[], 100).unwrap();
        assert_eq!(trivial, vec![Permutation::identity(3)]);
        assert!(group_closure(3, &[p(&[1, 0])], 100).is_err());
        assert!(matches!(
            group_closure(4, &[p(&[1, 0, 2, 3]), p(&[1, 2, 3, 0])], 5),
            Err(crate::Error::Resource(_))
        ));
    }

    #[test]
    fn closure_order_is_breadth_first() {
        let c = group_closure(4, &[p(&[1, 2, 3, 0])], 100).unwrap();
        assert_eq!(c[1], p(&[1, 2, 3, 0]));
        assert_eq!(c[2], p(&[2, 3, 0, 1]));
    }

    #[test]
    fn inner_group_orders() {
        let ord = |k| {
            inner_group(&make_standard(&k).unwrap(), DEFAULT_CLOSURE_CAP)
                .unwrap()
                .order()
        };
        assert_eq!(ord(StandardRack::Trivial(5)), 1);
        assert_eq!(ord(StandardRack::Dihedral(3)), 6);
        assert_eq!(ord(StandardRack::Cyclic(4)), 4);
    }

    #[test]
    fn orbits_of_points() {
        let id = PermGroup::generate(4, vec![], 10).unwrap();
        assert_eq!(id.point_orbit(2).unwrap(), BTreeSet::from([2]));
        let d3 = inner_group(&make_standard(&StandardRack::Dihedral(3)).unwrap(), 100).unwrap();
        assert_eq!(d3.point_orbit(0).unwrap(), BTreeSet::from([0, 1, 2]));
        let s3 = make_standard(&StandardRack::Conjugation(FiniteGroup::symmetric(3).unwrap(), None)).unwrap();
        let g = inner_group(&s3, 100).unwrap();
        assert_eq!(g.point_orbit(0).unwrap(), BTreeSet::from([0]));
        assert!(g.point_orbit(6).is_err());
    }

    #[test]
    fn small_groups() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        let sizes: Vec<usize> = s3.conjugacy_classes().iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 3, 2]);
        assert_eq!(FiniteGroup::dihedral(3).unwrap().conjugacy_classes().len(), 3);
        assert!(FiniteGroup::cyclic(4).unwrap().is_abelian());
        assert_eq!(FiniteGroup::by_name("D4").unwrap().order(), 8);
        assert!(FiniteGroup::by_name("Q8").is_err());
        assert!(FiniteGroup::from_table("bad", vec![vec![0, 1], vec![1, 1]]).is_err());
    }
}
