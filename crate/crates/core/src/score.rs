use crate::error::{Error, Result};

/// Sentinel for "no value"; all offset arithmetic on scores must saturate
/// through it.
pub const NEG_INF: i64 = i64::MIN;

/// Adds an offset to a score, keeping `NEG_INF` absorbing.
pub fn sat_add(score: i64, offset: i64) -> i64 {
    if score == NEG_INF {
        NEG_INF
    } else {
        score + offset
    }
}

/// Keyed max-values over a fixed key universe: point update/upgrade and
/// range-maximum queries over the primary key.
///
/// The key set is fixed at construction, so this is a sorted key array with a
/// max segment tree over positions rather than a rebalancing tree. Primary
/// keys may be negative; secondary keys only keep duplicate primaries
/// distinct and are ignored by range bounds.
#[derive(Debug, Clone)]
pub struct ScoreIndex {
    keys: Vec<(i64, u32)>,
    size: usize,
    /// 1-indexed segment tree of (value, position of the leftmost argmax).
    tree: Vec<(i64, u32)>,
}

impl ScoreIndex {
    /// Builds the index from `(key, value)` pairs sorted by key, no
    /// duplicates.
    pub fn build(pairs: &[((i64, u32), i64)]) -> Result<Self> {
        for w in pairs.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::Invalid(
                    "score index keys must be sorted and distinct".into(),
                ));
            }
        }
        let keys: Vec<(i64, u32)> = pairs.iter().map(|p| p.0).collect();
        let mut idx = Self::with_keys_inner(keys);
        for (pos, &(_, v)) in pairs.iter().enumerate() {
            idx.set_pos(pos, v);
        }
        Ok(idx)
    }

    /// Builds the index with every key at `NEG_INF`. Keys are sorted and
    /// deduplicated here for convenience.
    pub fn with_keys(mut keys: Vec<(i64, u32)>) -> Self {
        keys.sort_unstable();
        keys.dedup();
        Self::with_keys_inner(keys)
    }

    fn with_keys_inner(keys: Vec<(i64, u32)>) -> Self {
        let size = keys.len().next_power_of_two().max(1);
        ScoreIndex {
            keys,
            size,
            tree: vec![(NEG_INF, 0); 2 * size],
        }
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    fn pos_of(&self, key: (i64, u32)) -> Option<usize> {
        self.keys.binary_search(&key).ok()
    }

    fn set_pos(&mut self, pos: usize, value: i64) {
        let mut node = self.size + pos;
        self.tree[node] = (value, pos as u32);
        while node > 1 {
            node /= 2;
            let l = self.tree[2 * node];
            let r = self.tree[2 * node + 1];
            // Ties resolve to the leftmost (smallest key) position.
            self.tree[node] = if r.0 > l.0 { r } else { l };
        }
    }

    /// Value at a key, or `NEG_INF` if the key was never constructed.
    pub fn value(&self, key: (i64, u32)) -> i64 {
        match self.pos_of(key) {
            Some(pos) => self.tree[self.size + pos].0,
            None => NEG_INF,
        }
    }

    /// Overwrites the value at a constructed key.
    ///
    /// Panics on an unknown key: call sites always construct the full key
    /// universe up front, so this signals a programming error.
    pub fn update(&mut self, key: (i64, u32), value: i64) {
        let pos = self
            .pos_of(key)
            .unwrap_or_else(|| panic!("update on unknown key {key:?}"));
        self.set_pos(pos, value);
    }

    /// Raises the value at a constructed key to `max(value, current)`.
    pub fn upgrade(&mut self, key: (i64, u32), value: i64) {
        let pos = self
            .pos_of(key)
            .unwrap_or_else(|| panic!("upgrade on unknown key {key:?}"));
        if value > self.tree[self.size + pos].0 {
            self.set_pos(pos, value);
        }
    }

    /// Max value over keys with primary in `[lo, hi]`; `NEG_INF` on an empty
    /// range. `i64::MIN`/`i64::MAX` act as −∞/+∞ sentinels.
    pub fn rmaxq(&self, lo: i64, hi: i64) -> i64 {
        self.rmaxq_entry(lo, hi).0
    }

    /// Like `rmaxq` but also reports the key achieving the maximum (leftmost
    /// on ties), which callers use for traceback.
    pub fn rmaxq_entry(&self, lo: i64, hi: i64) -> (i64, Option<(i64, u32)>) {
        if lo > hi || self.keys.is_empty() {
            return (NEG_INF, None);
        }
        let from = self.keys.partition_point(|&(p, _)| p < lo);
        let to = self.keys.partition_point(|&(p, _)| p <= hi);
        if from >= to {
            return (NEG_INF, None);
        }
        let (mut l, mut r) = (self.size + from, self.size + to);
        let mut best = (NEG_INF, u32::MAX);
        let mut consider = |cand: (i64, u32), best: &mut (i64, u32)| {
            if cand.0 > best.0 || (cand.0 == best.0 && cand.0 != NEG_INF && cand.1 < best.1) {
                *best = cand;
            }
        };
        while l < r {
            if l % 2 == 1 {
                consider(self.tree[l], &mut best);
                l += 1;
            }
            if r % 2 == 1 {
                r -= 1;
                consider(self.tree[r], &mut best);
            }
            l /= 2;
            r /= 2;
        }
        if best.0 == NEG_INF {
            (NEG_INF, None)
        } else {
            (best.0, Some(self.keys[best.1 as usize]))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;

    #[test]
    fn build_examples() {
        let idx = ScoreIndex::build(&[((0, 0), 0)]).unwrap();
        assert_eq!(idx.value((0, 0)), 0);

        let idx = ScoreIndex::with_keys((0..10).map(|k| (k, 0)).collect());
        assert_eq!(idx.rmaxq(i64::MIN, i64::MAX), NEG_INF);

        assert!(ScoreIndex::build(&[((1, 1), 0), ((1, 1), 2)]).is_err());
        assert!(ScoreIndex::build(&[((2, 0), 0), ((1, 0), 0)]).is_err());
    }

    #[test]
    fn upgrade_takes_max() {
        let mut idx = ScoreIndex::with_keys(vec![(5, 1)]);
        idx.upgrade((5, 1), 7);
        idx.upgrade((5, 1), 3);
        assert_eq!(idx.value((5, 1)), 7);
    }

    #[test]
    fn rmaxq_and_deactivation() {
        let mut idx = ScoreIndex::with_keys(vec![(1, 1), (3, 2), (5, 1)]);
        idx.update((1, 1), 2);
        idx.update((3, 2), 9);
        idx.update((5, 1), 7);
        assert_eq!(idx.rmaxq(2, 5), 9);
        idx.update((3, 2), NEG_INF);
        assert_eq!(idx.rmaxq(2, 5), 7);
        assert_eq!(idx.rmaxq(i64::MIN, i64::MAX), 7);
        assert_eq!(idx.rmaxq(6, i64::MAX), NEG_INF);
        assert_eq!(idx.rmaxq(4, 2), NEG_INF);
    }

    #[test]
    fn secondary_keys_keep_duplicates_distinct() {
        let mut idx = ScoreIndex::with_keys(vec![(0, 0), (0, 3), (0, 7)]);
        idx.upgrade((0, 3), 5);
        assert_eq!(idx.value((0, 0)), NEG_INF);
        assert_eq!(idx.value((0, 3)), 5);
        assert_eq!(idx.rmaxq(0, 0), 5);
        assert_eq!(idx.rmaxq_entry(0, 0).1, Some((0, 3)));
    }

    #[test]
    fn randomized_equivalence_with_naive_scan() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..300 {
            let nkeys = rng.gen_range(1..=40usize);
            let mut keys: Vec<(i64, u32)> = (0..nkeys)
                .map(|s| (rng.gen_range(-20..=20i64), s as u32))
                .collect();
            keys.sort_unstable();
            keys.dedup();
            let mut idx = ScoreIndex::with_keys(keys.clone());
            let mut naive: Vec<i64> = vec![NEG_INF; keys.len()];
            for _ in 0..200 {
                match rng.gen_range(0..4) {
                    0 => {
                        let p = rng.gen_range(0..keys.len());
                        let v = rng.gen_range(-50..=50i64);
                        idx.update(keys[p], v);
                        naive[p] = v;
                    }
                    1 => {
                        let p = rng.gen_range(0..keys.len());
                        let v = rng.gen_range(-50..=50i64);
                        idx.upgrade(keys[p], v);
                        naive[p] = naive[p].max(v);
                    }
                    2 => {
                        let p = rng.gen_range(0..keys.len());
                        assert_eq!(idx.value(keys[p]), naive[p]);
                    }
                    _ => {
                        let a = rng.gen_range(-25..=25i64);
                        let b = rng.gen_range(-25..=25i64);
                        let (lo, hi) = (a.min(b), a.max(b));
                        let want = keys
                            .iter()
                            .zip(&naive)
                            .filter(|(&(p, _), _)| lo <= p && p <= hi)
                            .map(|(_, &v)| v)
                            .max()
                            .unwrap_or(NEG_INF);
                        assert_eq!(idx.rmaxq(lo, hi), want);
                    }
                }
            }
        }
    }

    #[test]
    fn sat_add_absorbs() {
        assert_eq!(sat_add(NEG_INF, 5), NEG_INF);
        assert_eq!(sat_add(3, 4), 7);
    }
}
