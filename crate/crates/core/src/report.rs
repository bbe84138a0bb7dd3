//! Shared report plumbing.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

/// Named numeric knobs echoed into every report.
pub type Tolerances = BTreeMap<String, f64>;

pub(crate) fn tolerances<const N: usize>(entries: [(&str, f64); N]) -> Tolerances {
    entries
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
}
