use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::linalg::{parse_rat, rat, DenseMatrix, Rat, Ring};
use crate::rack::RackTable;

/// How a module was built; kept for reports and to pick theorem checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleTag {
    Trivial,
    /// Every element acts by the Jordan block `J_k(t)`.
    Jordan {
        t: Rat,
        k: usize,
    },
    /// Every element acts by the same matrix.
    SameOperator,
    /// Functions `X → R` with `(h·y)(x) = h(y ▷ x)`.
    Functions,
    Custom,
}

/// A free module `R^k` with a right action of the rack elements, one
/// invertible matrix per element acting on row vectors: `v·x = v A_x`.
///
/// The action is compatible with the structure group relation
/// `x·y = (x▷y)·x`, i.e. `A_x A_y = A_{x▷y} A_x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffModule {
    ring: Ring,
    dim: usize,
    actions: Vec<DenseMatrix>,
    inverses: Vec<DenseMatrix>,
    tag: ModuleTag,
}

impl CoeffModule {
    fn build(ring: Ring, dim: usize, actions: Vec<DenseMatrix>, tag: ModuleTag) -> Result<Self> {
        let inverses = actions
            .iter()
            .enumerate()
            .map(|(x, a)| {
                if a.dim() != dim || a.ring() != ring {
                    return input(format!("action matrix of element {x} has the wrong size or ring"));
                }
                a.inverse()
                    .ok_or_else(|| Error::Input(format!("action matrix of element {x} is not invertible over {ring}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CoeffModule {
            ring,
            dim,
            actions,
            inverses,
            tag,
        })
    }

    fn check_compatible(&self, rack: &RackTable) -> Result<()> {
        if self.actions.len() != rack.size() {
            return input(format!(
                "module has {} action matrices for a rack of size {}",
                self.actions.len(),
                rack.size()
            ));
        }
        for x in 0..rack.size() {
            for y in 0..rack.size() {
                if self.actions[x].mul(&self.actions[y]) != self.actions[rack.op(x, y)].mul(&self.actions[x]) {
                    return input(format!("action violates A_x A_y = A_(x▷y) A_x at x={x}, y={y}"));
                }
            }
        }
        Ok(())
    }

    pub fn trivial(ring: Ring, dim: usize, rack_size: usize) -> Result<Self> {
        let id = DenseMatrix::identity(ring, dim);
        Self::build(ring, dim, vec![id; rack_size], ModuleTag::Trivial)
    }

    /// `J_k(t)` acting as every element: `v_i·x = t v_i + v_{i-1}`.
    pub fn jordan(ring: Ring, rack_size: usize, t: &Rat, k: usize) -> Result<Self> {
        let t = ring.reduce(t)?;
        let rows: Vec<Vec<Rat>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        if i == j {
                            t.clone()
                        } else if j + 1 == i {
                            rat(1)
                        } else {
                            rat(0)
                        }
                    })
                    .collect()
            })
            .collect();
        let a = DenseMatrix::from_rows(ring, &rows)?;
        Self::build(ring, k, vec![a; rack_size], ModuleTag::Jordan { t, k })
    }

    /// Every element acts by `a`; compatible with any rack.
    pub fn same_operator(rack: &RackTable, a: DenseMatrix) -> Result<Self> {
        let (ring, dim) = (a.ring(), a.dim());
        let tag = if a.is_identity() {
            ModuleTag::Trivial
        } else {
            ModuleTag::SameOperator
        };
        Self::build(ring, dim, vec![a; rack.size()], tag)
    }

    /// `Fun(X, R)` with `(h·y)(x) = h(y ▷ x)`; basis `δ_x` in element order.
    pub fn functions(rack: &RackTable, ring: Ring) -> Result<Self> {
        let n = rack.size();
        let actions = (0..n)
            .map(|y| {
                let rows: Vec<Vec<Rat>> = (0..n)
                    .map(|j| (0..n).map(|x| rat(i64::from(rack.op(y, x) == j))).collect())
                    .collect();
                DenseMatrix::from_rows(ring, &rows)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::build(ring, n, actions, ModuleTag::Functions)
    }

    /// Arbitrary per-element matrices, checked for invertibility and
    /// compatibility with `rack`.
    pub fn custom(rack: &RackTable, ring: Ring, actions: Vec<DenseMatrix>) -> Result<Self> {
        let dim = actions.first().map_or(0, DenseMatrix::dim);
        let m = Self::build(ring, dim, actions, ModuleTag::Custom)?;
        m.check_compatible(rack)?;
        Ok(m)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rack_size(&self) -> usize {
        self.actions.len()
    }

    pub fn tag(&self) -> &ModuleTag {
        &self.tag
    }

    pub fn action(&self, x: usize) -> &DenseMatrix {
        &self.actions[x]
    }

    pub fn inverse_action(&self, x: usize) -> &DenseMatrix {
        &self.inverses[x]
    }

    pub fn is_trivial_action(&self) -> bool {
        self.actions.iter().all(DenseMatrix::is_identity)
    }

    /// `self ⊗ other` with basis `(i, j) ↦ i * other.dim + j`.
    pub fn tensor(&self, other: &CoeffModule) -> Result<CoeffModule> {
        if self.ring != other.ring || self.rack_size() != other.rack_size() {
            return input("tensor factors differ in ring or rack");
        }
        let actions = self
            .actions
            .iter()
            .zip(&other.actions)
            .map(|(a, b)| a.kron(b))
            .collect();
        let tag = if self.is_trivial_action() && other.is_trivial_action() {
            ModuleTag::Trivial
        } else {
            ModuleTag::Custom
        };
        Self::build(self.ring, self.dim * other.dim, actions, tag)
    }

    /// The same action matrices read in another ring.
    pub fn with_ring(&self, ring: Ring) -> Result<CoeffModule> {
        let actions = self
            .actions
            .iter()
            .map(|a| DenseMatrix::from_rows(ring, &a.rows()))
            .collect::<Result<Vec<_>>>()?;
        Self::build(ring, self.dim, actions, self.tag.clone())
    }

    pub fn to_spec(&self) -> ModuleSpec {
        let (ring, p) = match self.ring {
            Ring::Integers => ("Z", None),
            Ring::Rationals => ("Q", None),
            Ring::PrimeField(p) => ("Fp", Some(p)),
        };
        let action = match &self.tag {
            ModuleTag::Trivial => ActionSpec {
                kind: "trivial".into(),
                t: None,
                matrices: None,
            },
            ModuleTag::Jordan { t, .. } => ActionSpec {
                kind: "jordan".into(),
                t: Some(Scalar::from_rat(t)),
                matrices: None,
            },
            _ => ActionSpec {
                kind: "custom".into(),
                t: None,
                matrices: Some(
                    self.actions
                        .iter()
                        .map(|a| {
                            a.rows()
                                .iter()
                                .map(|r| r.iter().map(Scalar::from_rat).collect())
                                .collect()
                        })
                        .collect(),
                ),
            },
        };
        ModuleSpec {
            ring: ring.into(),
            p,
            dim: self.dim,
            action,
        }
    }
}

/// A JSON scalar: an integer, or a string such as `"-3/2"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
}

impl Scalar {
    pub fn from_rat(r: &Rat) -> Scalar {
        match (r.is_integer(), i64::try_from(r.to_integer())) {
            (true, Ok(v)) => Scalar::Int(v),
            _ => Scalar::Text(r.to_string()),
        }
    }

    pub fn to_rat(&self) -> Result<Rat> {
        match self {
            Scalar::Int(v) => Ok(rat(*v)),
            Scalar::Text(s) => parse_rat(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionSpec {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<Vec<Vec<Vec<Scalar>>>>,
}

/// Module file: `{"ring": "Z"|"Q"|"Fp", "p": .., "dim": k, "action": {...}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleSpec {
    pub ring: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    pub dim: usize,
    pub action: ActionSpec,
}

impl ModuleSpec {
    pub fn parse(json: &str) -> Result<ModuleSpec> {
        serde_json::from_str(json).map_err(|e| Error::Input(format!("bad module file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("module spec serializes")
    }

    pub fn ring(&self) -> Result<Ring> {
        match (self.ring.as_str(), self.p) {
            ("Z", None) => Ok(Ring::Integers),
            ("Q", None) => Ok(Ring::Rationals),
            ("Fp", Some(p)) => Ring::prime_field(p),
            ("Fp", None) => input("ring Fp needs a prime \"p\""),
            (r, _) => input(format!("unknown ring {r:?}; expected Z, Q or Fp")),
        }
    }

    pub fn build(&self, rack: &RackTable) -> Result<CoeffModule> {
        let ring = self.ring()?;
        match self.action.kind.as_str() {
            "trivial" => CoeffModule::trivial(ring, self.dim, rack.size()),
            "jordan" => {
                let t = self.action.t.as_ref().map_or(Ok(rat(1)), Scalar::to_rat)?;
                CoeffModule::jordan(ring, rack.size(), &t, self.dim)
            }
            "custom" => {
                let mats = self
                    .action
                    .matrices
                    .as_ref()
                    .ok_or_else(|| Error::Input("custom action needs \"matrices\"".into()))?;
                if mats.len() != rack.size() {
                    return input(format!(
                        "{} matrices given for a rack of size {}",
                        mats.len(),
                        rack.size()
                    ));
                }
                let dense = mats
                    .iter()
                    .map(|m| {
                        let rows = m
                            .iter()
                            .map(|r| r.iter().map(Scalar::to_rat).collect::<Result<Vec<_>>>())
                            .collect::<Result<Vec<_>>>()?;
                        if rows.len() != self.dim {
                            return input(format!("matrix with {} rows for dim {}", rows.len(), self.dim));
                        }
                        DenseMatrix::from_rows(ring, &rows)
                    })
                    .collect::<Result<Vec<_>>>()?;
                match dense.first() {
                    Some(first) if dense.iter().all(|m| m == first) => CoeffModule::same_operator(rack, first.clone()),
                    _ => CoeffModule::custom(rack, ring, dense),
                }
            }
            other => input(format!("unknown action type {other:?}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rack::{make_standard, StandardRack};

    #[test]
    fn jordan_block_shape() {
        let m = CoeffModule::jordan(Ring::Rationals, 3, &rat(2), 2).unwrap();
        assert_eq!(m.action(0).rows(), vec![vec![rat(2), rat(0)], vec![rat(1), rat(2)]]);
        assert!(CoeffModule::jordan(Ring::Rationals, 3, &rat(0), 1).is_err());
        assert!(CoeffModule::jordan(Ring::Rationals, 3, &rat(1), 1)
            .unwrap()
            .is_trivial_action());
    }

    #[test]
    fn function_module_is_compatible() {
        let d3 = make_standard(&StandardRack::Dihedral(3)).unwrap();
        let f = CoeffModule::functions(&d3, Ring::Integers).unwrap();
        f.check_compatible(&d3).unwrap();
        // rows are the permutation matrices of the translations
        assert_eq!(f.action(0).get(0, 0), &rat(1));
        assert_eq!(f.action(0).get(2, 1), &rat(1));
    }

    #[test]
    fn incompatible_action_rejected() {
        let d3 = make_standard(&StandardRack::Dihedral(3)).unwrap();
        let one = DenseMatrix::identity(Ring::Rationals, 1);
        let two = DenseMatrix::scalar(Ring::Rationals, 1, &rat(2)).unwrap();
        assert!(CoeffModule::custom(&d3, Ring::Rationals, vec![one, two.clone(), two]).is_err());
    }

    #[test]
    fn spec_round_trip() {
        let d3 = make_standard(&StandardRack::Dihedral(3)).unwrap();
        let json = r#"{"ring":"Q","dim":2,"action":{"type":"jordan","t":"1/2"}}"#;
        let spec = ModuleSpec::parse(json).unwrap();
        let m = spec.build(&d3).unwrap();
        assert_eq!(m.to_spec().to_json(), json);

        let custom = r#"{"ring":"Fp","p":3,"dim":1,"action":{"type":"custom","matrices":[[[2]],[[2]],[[2]]]}}"#;
        let m = ModuleSpec::parse(custom).unwrap().build(&d3).unwrap();
        assert_eq!(m.ring(), Ring::PrimeField(3));
        assert_eq!(m.to_spec().to_json(), custom);

        assert!(
            ModuleSpec::parse(r#"{"ring":"Fp","dim":1,"action":{"type":"trivial"}}"#)
                .unwrap()
                .build(&d3)
                .is_err()
        );
    }
}
