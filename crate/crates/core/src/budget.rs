use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::Error;

/// Default number of search steps before an enumeration gives up.
pub const DEFAULT_BUDGET: u64 = 2_000_000_000;

/// Environment variable that overrides [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "RELMON_BUDGET";

/// A shared counter of search steps.
///
/// Every exhaustive search charges one step per visited node, so that runaway
/// instances end in [`Error::BudgetExceeded`] instead of hanging.
#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: AtomicU64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Self {
            limit,
            used: AtomicU64::new(0),
        }
    }

    pub fn unlimited() -> Self {
        Self::new(u64::MAX)
    }

    /// Reads the limit from `RELMON_BUDGET`, falling back to the default.
    pub fn from_env() -> Self {
        let limit = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or(DEFAULT_BUDGET);
        Self::new(limit)
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }

    #[inline]
    pub fn charge(&self, steps: u64) -> Result<(), Error> {
        let before = self.used.fetch_add(steps, Ordering::Relaxed);
        if before.saturating_add(steps) > self.limit {
            Err(Error::BudgetExceeded { limit: self.limit })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::from_env()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charges_until_exhausted() {
        let b = Budget::new(3);
        assert!(b.charge(2).is_ok());
        assert!(b.charge(1).is_ok());
        assert_eq!(b.charge(1), Err(Error::BudgetExceeded { limit: 3 }));
        assert_eq!(b.used(), 4);
    }
}
