use std::env;

/// Environment variable overriding [`Limits::max_enumeration_n`].
pub const MAX_N_ENV: &str = "GROUPOID_CARD_MAX_N";

/// Size caps for the exhaustive (desk-scale) algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest `n` for which `S_n` is enumerated element by element.
    pub max_enumeration_n: usize,
    /// Largest `n` for which the partitions of `n` are enumerated.
    pub max_partition_n: usize,
    /// Largest Cayley table accepted for O(m^3) associativity validation.
    pub max_cayley_order: usize,
    /// Number of law checks above which action and functor validation switches to sampling.
    pub max_validation_checks: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_enumeration_n: 10,
            max_partition_n: 40,
            max_cayley_order: 256,
            max_validation_checks: 10_000_000,
        }
    }
}

impl Limits {
    /// Defaults, with the enumeration cap taken from `GROUPOID_CARD_MAX_N` when set.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(n) = env::var(MAX_N_ENV).ok().and_then(|v| v.trim().parse().ok()) {
            limits.max_enumeration_n = n;
        }
        limits
    }

    pub(crate) fn check_enumeration(&self, n: usize) -> crate::Result<()> {
        if n > self.max_enumeration_n {
            return Err(crate::Error::CapExceeded {
                what: "enumeration degree n",
                value: n as u64,
                cap: self.max_enumeration_n as u64,
            });
        }
        Ok(())
    }

    pub(crate) fn check_partition(&self, n: usize) -> crate::Result<()> {
        if n > self.max_partition_n {
            return Err(crate::Error::CapExceeded {
                what: "partition degree n",
                value: n as u64,
                cap: self.max_partition_n as u64,
            });
        }
        Ok(())
    }
}
