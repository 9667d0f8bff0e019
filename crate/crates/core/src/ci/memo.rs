use std::collections::HashMap;
use std::sync::Mutex;

use super::{CiError, CiTester, TestCounter};

/// Queries over at most 128 vertices pack the conditioning set into a
/// bitmask so that large caches stay within memory.
#[derive(PartialEq, Eq, Hash)]
enum Key {
    Packed(u16, u16, u128),
    Listed(usize, usize, Vec<usize>),
}

fn key(x: usize, y: usize, s: &[usize], n: usize) -> Key {
    let (x, y) = (x.min(y), x.max(y));
    if n <= 128 {
        Key::Packed(x as u16, y as u16, s.iter().fold(0u128, |m, &v| m | 1 << v))
    } else {
        let mut set = s.to_vec();
        set.sort_unstable();
        Key::Listed(x, y, set)
    }
}

/// Caches verdicts of an inner tester so that each distinct query (unordered
/// pair plus conditioning set) reaches it at most once.
///
/// The inner tester's counter therefore tallies distinct tests, while this
/// wrapper's own counter tallies every call made through it.
pub struct MemoTester<'a> {
    inner: &'a dyn CiTester,
    cache: Mutex<HashMap<Key, bool>>,
    counter: TestCounter,
}

impl<'a> MemoTester<'a> {
    pub fn new(inner: &'a dyn CiTester) -> Self {
        Self {
            inner,
            cache: Mutex::new(HashMap::new()),
            counter: TestCounter::new(),
        }
    }

    pub fn inner(&self) -> &'a dyn CiTester {
        self.inner
    }

    /// Number of distinct queries answered so far.
    pub fn distinct(&self) -> usize {
        self.cache.lock().expect("memo poisoned").len()
    }
}

impl CiTester for MemoTester<'_> {
    fn n_vertices(&self) -> usize {
        self.inner.n_vertices()
    }

    fn counter(&self) -> &TestCounter {
        &self.counter
    }

    fn evaluate(&self, x: usize, y: usize, s: &[usize]) -> Result<bool, CiError> {
        let k = key(x, y, s, self.inner.n_vertices());
        if let Some(&v) = self.cache.lock().expect("memo poisoned").get(&k) {
            return Ok(v);
        }
        let mut set = s.to_vec();
        set.sort_unstable();
        let v = self.inner.independent(x.min(y), x.max(y), &set)?;
        self.cache.lock().expect("memo poisoned").insert(k, v);
        Ok(v)
    }
}
