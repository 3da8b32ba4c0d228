use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::cochain::ModuleSpec;
use crate::error::{Error, Result};
use crate::linalg::prime_factors;
use crate::rack::RackFile;

/// Check names used in reports.
pub mod checks {
    pub const BETTI_EQUALS_M_POW_N: &str = "betti_equals_m_pow_n";
    pub const BETTI0_EQUALS_FIXED_DIM: &str = "betti0_equals_fixed_dim";
    pub const TORSION_PRIMES_DIVIDE_N: &str = "torsion_primes_divide_N";
    pub const INTEGRAL_RANK_MATCHES_RATIONAL: &str = "integral_rank_matches_rational";
    pub const TORSION_ROUTES_AGREE: &str = "torsion_kernel_lattice_agrees";
    pub const INVARIANT_BETTI0_EQUALS_FIXED_DIM: &str = "invariant_betti0_equals_fixed_dim";
    pub const XI_ISOMORPHISM: &str = "xi_isomorphism";
    pub const TWISTED_VANISHING: &str = "twisted_vanishing";
    pub const JORDAN_BETTI: &str = "jordan_betti_equals_m_pow_n";
    pub const SAME_OPERATOR_BETTI: &str = "betti_equals_m_pow_n_times_fixed_dim";
    pub const H2_GROUP_MATCH: &str = "h2_matches_group_h1";
    pub const NONABELIAN_MATCHES_ABELIAN: &str = "nonabelian_count_matches_abelian";
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeEntry {
    pub n: usize,
    pub betti: usize,
    pub torsion: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: &str, pass: bool) -> Check {
        Check {
            name: name.into(),
            pass,
            detail: None,
        }
    }

    pub fn with_detail(name: &str, pass: bool, detail: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            pass,
            detail: Some(detail.into()),
        }
    }
}

/// Per-degree cohomology with theorem-check verdicts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub rack: RackFile,
    pub module: ModuleSpec,
    pub orbit_count: usize,
    pub inner_group_order: usize,
    pub degrees: Vec<DegreeEntry>,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CohomologyReport {
    pub fn bettis(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.betti).collect()
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn parse(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Input(format!("bad report: {e}")))
    }
}

/// A finitely generated abelian group `Z^r ⊕ ⊕ Z/d_i`. Over Q the free rank
/// is the dimension; over `Z/q` the free rank is zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub invariant_factors: Vec<u64>,
}

impl AbelianGroup {
    pub fn zero() -> Self {
        AbelianGroup {
            free_rank: 0,
            invariant_factors: vec![],
        }
    }

    /// Order of a finite group, `None` when infinite or too large.
    pub fn order(&self) -> Option<u64> {
        if self.free_rank > 0 {
            return None;
        }
        self.invariant_factors
            .iter()
            .try_fold(1u64, |acc, &d| acc.checked_mul(d))
    }
}

pub(crate) fn to_u64_factors(factors: &[BigInt]) -> Result<Vec<u64>> {
    factors
        .iter()
        .map(|d| u64::try_from(d).map_err(|_| Error::Resource(format!("invariant factor {d} exceeds 64 bits"))))
        .collect()
}

/// Whether every prime dividing some factor also divides `n`.
pub fn primes_divide(factors: &[u64], n: u64) -> bool {
    factors.iter().all(|&d| prime_factors(d).iter().all(|p| n % p == 0))
}
