//! Search caps. Every verdict the engine produces is relative to one of these.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Budget {
    /// Objects a single check may scan.
    pub max_objects: usize,
    /// Tuples (parallel pairs, cones, diagram instances) a single enumeration may visit.
    pub max_pairs: usize,
    /// Candidate apexes a single (co)limit search may examine.
    pub max_apexes: usize,
    /// Wall-clock cap for one check, in seconds.
    pub max_seconds: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_objects: 256, max_pairs: 5_000_000, max_apexes: 100_000, max_seconds: 600 }
    }
}

/// A running budget: the caps plus the clock they are measured against.
#[derive(Clone, Debug)]
pub struct Meter {
    pub budget: Budget,
    deadline: Instant,
}

impl Meter {
    pub fn new(budget: Budget) -> Self {
        Meter { budget, deadline: Instant::now() + Duration::from_secs(budget.max_seconds) }
    }

    pub fn unlimited() -> Self {
        Meter::new(Budget {
            max_objects: usize::MAX,
            max_pairs: usize::MAX,
            max_apexes: usize::MAX,
            max_seconds: 86_400 * 365,
        })
    }

    pub fn check_time(&self) -> Result<()> {
        if Instant::now() > self.deadline {
            Err(Error::OutOfBudget(format!("wall-clock cap of {}s exceeded", self.budget.max_seconds)))
        } else {
            Ok(())
        }
    }

    pub fn check_objects(&self, n: usize) -> Result<()> {
        if n > self.budget.max_objects {
            Err(Error::OutOfBudget(format!("{n} objects exceeds object cap {}", self.budget.max_objects)))
        } else {
            Ok(())
        }
    }

    pub fn check_pairs(&self, n: usize) -> Result<()> {
        if n > self.budget.max_pairs {
            Err(Error::OutOfBudget(format!("enumeration of {n} tuples exceeds cap {}", self.budget.max_pairs)))
        } else {
            Ok(())
        }
    }
}
