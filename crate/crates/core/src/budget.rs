//! Enumeration limits shared by every brute-force routine.
//!
//! The defaults can be overridden through the `SEGRELAT_BUDGET` environment
//! variable, either as a bare integer (tuple budget only) or as a
//! comma-separated list of `tuples=N`, `elements=N`, `chains=N` pairs.

use crate::error::{Error, Result};

pub const DEFAULT_TUPLES: u64 = 10_000_000;
pub const DEFAULT_ELEMENTS: u64 = 20_000;
pub const DEFAULT_CHAINS: u64 = 2_000_000;

pub const ENV_VAR: &str = "SEGRELAT_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of permutation tuples scanned by a brute-force count.
    pub tuples: u64,
    /// Maximum number of elements in a constructed poset.
    pub elements: u64,
    /// Maximum number of maximal chains walked by a census.
    pub chains: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            tuples: DEFAULT_TUPLES,
            elements: DEFAULT_ELEMENTS,
            chains: DEFAULT_CHAINS,
        }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget {
            tuples: u64::MAX,
            elements: u64::MAX,
            chains: u64::MAX,
        }
    }

    /// Default budget with any overrides from `SEGRELAT_BUDGET` applied.
    pub fn from_env() -> Result<Self> {
        match std::env::var(ENV_VAR) {
            Ok(spec) => Budget::default().with_overrides(&spec),
            Err(_) => Ok(Budget::default()),
        }
    }

    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec.is_empty() {
            return Ok(self);
        }
        if let Ok(n) = spec.parse::<u64>() {
            self.tuples = n;
            return Ok(self);
        }
        for item in spec.split(',') {
            let (key, value) = item.split_once('=').ok_or_else(|| {
                Error::InvalidArgument(format!("malformed budget entry `{item}`"))
            })?;
            let value: u64 = value.trim().parse().map_err(|_| {
                Error::InvalidArgument(format!("budget value `{value}` is not an integer"))
            })?;
            match key.trim() {
                "tuples" => self.tuples = value,
                "elements" => self.elements = value,
                "chains" => self.chains = value,
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "unknown budget key `{other}`"
                    )))
                }
            }
        }
        Ok(self)
    }
}
