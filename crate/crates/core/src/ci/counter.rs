use std::collections::BTreeMap;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

/// Thread-safe tally of CI tests, bucketed by conditioning-set size.
#[derive(Debug, Default)]
pub struct TestCounter {
    by_order: Mutex<Vec<u64>>,
}

impl TestCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&self, order: usize) {
        let mut v = self.by_order.lock().expect("counter poisoned");
        if v.len() <= order {
            v.resize(order + 1, 0);
        }
        v[order] += 1;
    }

    pub fn snapshot(&self) -> TestCounts {
        let v = self.by_order.lock().expect("counter poisoned");
        TestCounts {
            by_order: v
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(o, &c)| (o, c))
                .collect(),
        }
    }

    pub fn total(&self) -> u64 {
        self.by_order.lock().expect("counter poisoned").iter().sum()
    }

    pub fn reset(&self) {
        self.by_order.lock().expect("counter poisoned").clear();
    }
}

/// Immutable per-order test counts.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestCounts {
    pub by_order: BTreeMap<usize, u64>,
}

impl TestCounts {
    pub fn total(&self) -> u64 {
        self.by_order.values().sum()
    }

    pub fn at_order(&self, order: usize) -> u64 {
        self.by_order.get(&order).copied().unwrap_or(0)
    }

    pub fn max_order(&self) -> Option<usize> {
        self.by_order.keys().next_back().copied()
    }

    /// Counts accumulated since `earlier`.
    pub fn since(&self, earlier: &TestCounts) -> TestCounts {
        TestCounts {
            by_order: self
                .by_order
                .iter()
                .map(|(&o, &c)| (o, c - earlier.at_order(o)))
                .filter(|&(_, c)| c > 0)
                .collect(),
        }
    }

    pub fn add(&mut self, other: &TestCounts) {
        for (&o, &c) in &other.by_order {
            *self.by_order.entry(o).or_insert(0) += c;
        }
    }

    /// Compact `order:count` list separated by `;`, e.g. `0:45;1:30`.
    pub fn to_compact(&self) -> String {
        self.by_order
            .iter()
            .map(|(o, c)| format!("{o}:{c}"))
            .collect::<Vec<_>>()
            .join(";")
    }

    pub fn from_compact(s: &str) -> Option<TestCounts> {
        let mut by_order = BTreeMap::new();
        for part in s.split(';').filter(|p| !p.is_empty()) {
            let (o, c) = part.split_once(':')?;
            by_order.insert(o.parse().ok()?, c.parse().ok()?);
        }
        Some(TestCounts { by_order })
    }
}
