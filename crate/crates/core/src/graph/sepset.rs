use std::collections::BTreeMap;

/// Separating sets keyed by unordered vertex pair.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SepsetMap {
    entries: BTreeMap<(usize, usize), Vec<usize>>,
}

fn key(x: usize, y: usize) -> (usize, usize) {
    (x.min(y), x.max(y))
}

impl SepsetMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records `set` for both `(x, y)` and `(y, x)`, replacing any earlier
    /// entry.
    ///
    /// # Panics
    /// If `set` contains `x` or `y`.
    pub fn insert(&mut self, x: usize, y: usize, set: impl IntoIterator<Item = usize>) {
        let mut set: Vec<usize> = set.into_iter().collect();
        set.sort_unstable();
        set.dedup();
        assert!(
            !set.contains(&x) && !set.contains(&y),
            "separating set for ({x}, {y}) contains an endpoint"
        );
        self.entries.insert(key(x, y), set);
    }

    pub fn get(&self, x: usize, y: usize) -> Option<&[usize]> {
        self.entries.get(&key(x, y)).map(Vec::as_slice)
    }

    pub fn contains_pair(&self, x: usize, y: usize) -> bool {
        self.entries.contains_key(&key(x, y))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries as `((x, y), set)` with `x < y`.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), &[usize])> {
        self.entries.iter().map(|(&k, v)| (k, v.as_slice()))
    }
}
