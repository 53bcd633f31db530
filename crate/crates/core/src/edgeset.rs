//! Fixed-capacity bitset over edge ids.

use std::fmt;

const WORDS: usize = 4;

/// Largest number of edges an [`EdgeSet`] can address.
pub const EDGE_CAPACITY: usize = WORDS * 64;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct EdgeSet([u64; WORDS]);

impl EdgeSet {
    pub const fn new() -> Self {
        EdgeSet([0; WORDS])
    }

    pub fn from_ids(ids: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::new();
        for id in ids {
            s.insert(id);
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, id: usize) {
        self.0[id >> 6] |= 1u64 << (id & 63);
    }

    #[inline]
    pub fn remove(&mut self, id: usize) {
        self.0[id >> 6] &= !(1u64 << (id & 63));
    }

    #[inline]
    pub fn contains(&self, id: usize) -> bool {
        self.0[id >> 6] >> (id & 63) & 1 == 1
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn is_subset(&self, other: &EdgeSet) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a & !b == 0)
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0.iter()) {
            *a |= b;
        }
        out
    }

    pub fn intersection(&self, other: &EdgeSet) -> EdgeSet {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0.iter()) {
            *a &= b;
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let tz = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(wi * 64 + tz)
            })
        })
    }
}

impl fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self::from_ids(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_remove_iterate() {
        let mut s = EdgeSet::new();
        for id in [0, 5, 63, 64, 200, 255] {
            s.insert(id);
        }
        assert_eq!(s.len(), 6);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 5, 63, 64, 200, 255]);
        s.remove(64);
        assert!(!s.contains(64));
        assert!(s.contains(200));
        let t = EdgeSet::from_ids([5, 200]);
        assert!(t.is_subset(&s));
        assert!(!s.is_subset(&t));
        assert_eq!(s.intersection(&t), t);
    }
}
