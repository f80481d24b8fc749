//! Network configuration.

use num::bigint::BigInt;
use num::rational::BigRational;
use serde::{Deserialize, Serialize};

/// A symmetric interference broadcast network: `G` cells, `K` users per
/// cell, `M` antennas at each base station, `N` antennas at each user.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub g: u64,
    pub k: u64,
    pub m: u64,
    pub n: u64,
}

/// Error for out-of-domain configuration parameters.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid configuration: {message}")]
pub struct ConfigError {
    pub message: String,
}

impl SystemConfig {
    /// Validates `G >= 2`, `K >= 1`, `M >= 1`, `N >= 1`.
    pub fn new(g: u64, k: u64, m: u64, n: u64) -> Result<Self, ConfigError> {
        let err = |message: String| Err(ConfigError { message });
        if g < 2 {
            return err(format!("G must be at least 2, got {g}"));
        }
        if k < 1 {
            return err(format!("K must be at least 1, got {k}"));
        }
        if m < 1 {
            return err(format!("M must be at least 1, got {m}"));
        }
        if n < 1 {
            return err(format!("N must be at least 1, got {n}"));
        }
        Ok(SystemConfig { g, k, m, n })
    }

    /// The antenna ratio `M / N` in lowest terms.
    pub fn ratio(&self) -> BigRational {
        BigRational::new(BigInt::from(self.m), BigInt::from(self.n))
    }

    /// Total number of users, `G * K`.
    pub fn users(&self) -> u64 {
        self.g * self.k
    }

    /// The `factor`-fold spatially extended configuration: antenna counts
    /// scale, cell and user counts do not.
    pub fn extended(&self, factor: u64) -> Self {
        assert!(factor >= 1, "extension factor must be positive");
        SystemConfig { g: self.g, k: self.k, m: self.m * factor, n: self.n * factor }
    }
}

impl std::fmt::Display for SystemConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "G={} K={} M={} N={}", self.g, self.k, self.m, self.n)
    }
}
