//! Plain-text run configuration: one `key = value` per line, `#` comments.

use std::path::{Path, PathBuf};
use std::time::Duration;

use crate::budget::Budget;
use crate::error::{Error, Result};

/// Hard limits on which blocks a session will compute at all.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_weight: i32,
    pub max_degree: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_weight: 20,
            max_degree: 12,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Config {
    pub jobs: Option<usize>,
    pub checkpoint_dir: Option<PathBuf>,
    pub time_budget: Option<Duration>,
    pub max_slice_words: Option<usize>,
    pub limits: Limits,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Config::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let no = i + 1;
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(no, format!("expected `key = value`, got `{line}`")))?;
            let (k, v) = (k.trim(), v.trim());
            let bad = |what: &str| Error::parse(no, format!("`{k}` needs {what}, got `{v}`"));
            match k {
                "jobs" => cfg.jobs = Some(v.parse().map_err(|_| bad("a thread count"))?),
                "checkpoint_dir" => cfg.checkpoint_dir = Some(PathBuf::from(v)),
                "time_budget_secs" => {
                    let s: f64 = v.parse().map_err(|_| bad("seconds"))?;
                    if !(s.is_finite() && s >= 0.0) {
                        return Err(bad("non-negative seconds"));
                    }
                    cfg.time_budget = Some(Duration::from_secs_f64(s));
                }
                "max_slice_words" => cfg.max_slice_words = Some(v.parse().map_err(|_| bad("an integer"))?),
                "max_weight" => cfg.limits.max_weight = v.parse().map_err(|_| bad("an integer"))?,
                "max_degree" => cfg.limits.max_degree = v.parse().map_err(|_| bad("an integer"))?,
                _ => return Err(Error::parse(no, format!("unknown key `{k}`"))),
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn budget(&self) -> Budget {
        let mut b = Budget::unlimited();
        if let Some(t) = self.time_budget {
            b = b.with_time_limit(t);
        }
        if let Some(n) = self.max_slice_words {
            b = b.with_max_slice_words(n);
        }
        b
    }
}
