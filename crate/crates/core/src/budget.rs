use crate::error::{resource, Result};
use crate::linalg::DEFAULT_SNF_BIT_CAP;

/// Environment variable that caps matrix memory, in megabytes.
pub const BUDGET_ENV: &str = "RACKOH_BUDGET_MB";

/// Resource caps shared by every computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Highest cochain degree that may be built.
    pub max_degree: usize,
    /// Rough memory ceiling for a single differential matrix.
    pub matrix_mb: usize,
    pub snf_bits: u64,
    /// Element cap for permutation group closure.
    pub closure_cap: usize,
    /// Element cap for the closure of `(permutation, matrix)` pairs.
    pub action_cap: usize,
    /// Number of candidate functions the nonabelian enumeration may visit.
    pub enumeration_cap: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_degree: 4,
            matrix_mb: 2048,
            snf_bits: DEFAULT_SNF_BIT_CAP,
            closure_cap: 10_000_000,
            action_cap: 100_000,
            enumeration_cap: 20_000_000,
        }
    }
}

/// Bytes charged per stored matrix entry.
const BYTES_PER_ENTRY: usize = 64;

impl Budget {
    /// Defaults, with `matrix_mb` taken from `RACKOH_BUDGET_MB` when set.
    pub fn from_env() -> Self {
        let mut b = Budget::default();
        if let Some(mb) = std::env::var(BUDGET_ENV).ok().and_then(|v| v.trim().parse().ok()) {
            b.matrix_mb = mb;
        }
        b
    }

    pub fn check_degree(&self, n: usize) -> Result<()> {
        if n > self.max_degree {
            return resource(format!("degree {n} exceeds the configured maximum {}", self.max_degree));
        }
        Ok(())
    }

    /// Fails when a matrix with about `entries` stored values would not fit.
    pub fn check_entries(&self, entries: usize, what: &str) -> Result<()> {
        let bytes = entries.saturating_mul(BYTES_PER_ENTRY);
        if bytes > self.matrix_mb.saturating_mul(1 << 20) {
            return resource(format!(
                "{what} needs about {} MB, over the {} MB budget ({BUDGET_ENV})",
                bytes >> 20,
                self.matrix_mb
            ));
        }
        Ok(())
    }
}
