use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// Cooperative resource limits, checked between units of work (shapes,
/// columns, blocks). `Budget::default()` is unlimited.
#[derive(Clone, Debug, Default)]
pub struct Budget {
    deadline: Option<Instant>,
    max_slice_words: Option<usize>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn with_time_limit(mut self, limit: Duration) -> Self {
        self.deadline = Some(Instant::now() + limit);
        self
    }

    /// Largest weight-0 slice of a single shape that may be eliminated.
    pub fn with_max_slice_words(mut self, n: usize) -> Self {
        self.max_slice_words = Some(n);
        self
    }

    pub fn check_time(&self, what: &str) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(Error::Budget(format!("time budget exhausted before {what}"))),
            _ => Ok(()),
        }
    }

    pub fn check_slice(&self, words: usize, what: &str) -> Result<()> {
        match self.max_slice_words {
            Some(max) if words > max => Err(Error::Budget(format!("{what}: slice of {words} words exceeds {max}"))),
            _ => Ok(()),
        }
    }
}
