//! Explicit resource guards. Exceeding one is an error, never an OOM.

use serde::{Deserialize, Serialize};

use crate::error::{check_limit, Result};

/// Rough per-entry cost of a vector of ring elements, used to turn a byte
/// budget into an entry budget.
pub const BYTES_PER_ENTRY: u64 = 256;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Guards {
    /// Largest vector (in entries) any construction may materialise.
    pub max_entries: u64,
    pub p_iterate_max: u32,
    pub p_closed_max: u32,
    pub q_vector_max: u32,
    pub genpoly_max: u32,
    pub s_level_max: u32,
    pub kappa_vector_max: u32,
    pub kappa_symbolic_max: u32,
    pub kappa_recursion_max: u32,
    pub hypothesis_max: u32,
}

impl Default for Guards {
    fn default() -> Self {
        Guards::from_bytes(2 << 30)
    }
}

impl Guards {
    pub fn from_bytes(bytes: u64) -> Self {
        Guards {
            max_entries: bytes / BYTES_PER_ENTRY,
            p_iterate_max: 12,
            p_closed_max: 6,
            q_vector_max: 6,
            genpoly_max: 4,
            s_level_max: 5,
            kappa_vector_max: 4,
            kappa_symbolic_max: 10,
            kappa_recursion_max: 12,
            hypothesis_max: 12,
        }
    }

    pub fn entries(&self, what: &str, requested: u64) -> Result<()> {
        check_limit(what, requested, self.max_entries)
    }
}

/// Serialises big integers as decimal strings.
pub(crate) mod bigint_strings {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(values: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(values.iter().map(|v| v.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?.iter().map(|s| s.parse().map_err(serde::de::Error::custom)).collect()
    }
}
