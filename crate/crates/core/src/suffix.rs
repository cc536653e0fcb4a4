//! Suffix-array machinery behind the MEM finder: prefix-doubling suffix array
//! construction, Kasai LCP, and cross-document maximal-match enumeration over
//! the lcp-interval tree.

/// Suffix array by prefix doubling with counting sort, O(n log n).
/// `s` must end with a unique smallest sentinel.
pub(crate) fn suffix_array(s: &[u32]) -> Vec<u32> {
    let n = s.len();
    if n == 0 {
        return Vec::new();
    }
    let max_sym = *s.iter().max().unwrap() as usize;
    let mut sa: Vec<u32> = (0..n as u32).collect();
    let mut rank: Vec<u32> = vec![0; n];
    // Initial ranks from single symbols.
    let mut count = vec![0u32; max_sym + 2];
    for &c in s {
        count[c as usize + 1] += 1;
    }
    for i in 1..count.len() {
        count[i] += count[i - 1];
    }
    for i in 0..n {
        let c = s[i] as usize;
        sa[count[c] as usize] = i as u32;
        count[c] += 1;
    }
    rank[sa[0] as usize] = 0;
    for k in 1..n {
        let prev = sa[k - 1] as usize;
        let cur = sa[k] as usize;
        rank[cur] = rank[prev] + u32::from(s[cur] != s[prev]);
    }

    let mut tmp_sa: Vec<u32> = vec![0; n];
    let mut tmp_rank: Vec<u32> = vec![0; n];
    let mut buckets: Vec<u32> = Vec::new();
    let mut width = 1usize;
    while (rank[sa[n - 1] as usize] as usize) < n - 1 {
        // Order by second component: suffixes too short to have one come first.
        let mut w = 0;
        for i in n - width..n {
            tmp_sa[w] = i as u32;
            w += 1;
        }
        for &p in sa.iter() {
            if p as usize >= width {
                tmp_sa[w] = p - width as u32;
                w += 1;
            }
        }
        // Stable counting sort by first component.
        buckets.clear();
        buckets.resize(n + 1, 0);
        for &r in rank.iter() {
            buckets[r as usize + 1] += 1;
        }
        for i in 1..=n {
            buckets[i] += buckets[i - 1];
        }
        for &p in tmp_sa.iter() {
            let r = rank[p as usize] as usize;
            sa[buckets[r] as usize] = p;
            buckets[r] += 1;
        }
        // Re-rank.
        let second = |p: usize| -> i64 {
            if p + width < n {
                rank[p + width] as i64
            } else {
                -1
            }
        };
        tmp_rank[sa[0] as usize] = 0;
        for k in 1..n {
            let prev = sa[k - 1] as usize;
            let cur = sa[k] as usize;
            let differs = rank[cur] != rank[prev] || second(cur) != second(prev);
            tmp_rank[cur] = tmp_rank[prev] + u32::from(differs);
        }
        std::mem::swap(&mut rank, &mut tmp_rank);
        width *= 2;
    }
    sa
}

/// Kasai's algorithm: `lcp[k]` is the longest common prefix of the suffixes
/// at `sa[k-1]` and `sa[k]`; `lcp[0] = 0`.
pub(crate) fn lcp_array(s: &[u32], sa: &[u32]) -> Vec<u32> {
    let n = s.len();
    let mut rank = vec![0u32; n];
    for (k, &p) in sa.iter().enumerate() {
        rank[p as usize] = k as u32;
    }
    let mut lcp = vec![0u32; n];
    let mut h = 0usize;
    for p in 0..n {
        let r = rank[p] as usize;
        if r > 0 {
            let q = sa[r - 1] as usize;
            while p + h < n && q + h < n && s[p + h] == s[q + h] {
                h += 1;
            }
            lcp[r] = h as u32;
            h = h.saturating_sub(1);
        } else {
            h = 0;
        }
    }
    lcp
}

/// A maximal exact match between the two documents, 1-based coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct MemHit {
    pub x: u32,
    pub i: u32,
    pub len: u32,
}

const SEP: u32 = 1;
const TERM: u32 = 0;
/// Class of positions with no effective predecessor (document start or a
/// preceding sentinel); it blocks nothing in the left-maximality test.
const BEGIN: u32 = 0;

/// Suffix positions grouped by (document, preceding-symbol class).
#[derive(Debug, Default)]
struct Buckets {
    items: Vec<(u32, Vec<u32>)>,
    total: usize,
}

impl Buckets {
    fn singleton(key: u32, pos: u32) -> Self {
        Buckets {
            items: vec![(key, vec![pos])],
            total: 1,
        }
    }

    fn absorb(&mut self, mut other: Buckets) {
        if self.total < other.total {
            std::mem::swap(self, &mut other);
        }
        for (key, mut positions) in other.items {
            match self.items.iter_mut().find(|(k, _)| *k == key) {
                Some((_, dst)) => dst.append(&mut positions),
                None => self.items.push((key, positions)),
            }
        }
        self.total += other.total;
    }
}

fn bucket_key(doc: u32, class: u32) -> u32 {
    (doc << 16) | class
}

/// Enumerates all MEMs between `q` and `t`: left-maximal (mismatching or
/// absent preceding symbols) and right-maximal (the match length is the
/// lcp-tree depth where the two suffixes diverge).
pub(crate) fn cross_document_mems(q: &[u8], t: &[u8]) -> Vec<MemHit> {
    if q.is_empty() || t.is_empty() {
        return Vec::new();
    }
    let qlen = q.len();
    let n = qlen + t.len() + 2;
    let mut s: Vec<u32> = Vec::with_capacity(n);
    s.extend(q.iter().map(|&b| b as u32 + 2));
    s.push(SEP);
    s.extend(t.iter().map(|&b| b as u32 + 2));
    s.push(TERM);

    let sa = suffix_array(&s);
    let lcp = lcp_array(&s, &sa);

    // (document, class) of a suffix position; None for sentinel suffixes.
    let classify = |pos: usize| -> Option<u32> {
        if pos == qlen || pos == n - 1 {
            return None;
        }
        let doc = u32::from(pos > qlen);
        let class = if pos == 0 {
            BEGIN
        } else {
            let prev = s[pos - 1];
            if prev <= SEP {
                BEGIN
            } else {
                prev
            }
        };
        Some(bucket_key(doc, class))
    };

    let mut out: Vec<MemHit> = Vec::new();
    let mut emit = |a: &Buckets, b: &Buckets, depth: u32| {
        if depth == 0 {
            return;
        }
        for &(ka, ref pa) in &a.items {
            for &(kb, ref pb) in &b.items {
                let (doc_a, class_a) = (ka >> 16, ka & 0xffff);
                let (doc_b, class_b) = (kb >> 16, kb & 0xffff);
                if doc_a == doc_b {
                    continue;
                }
                if class_a != BEGIN && class_b != BEGIN && class_a == class_b {
                    continue;
                }
                let (qs, ts) = if doc_a == 0 { (pa, pb) } else { (pb, pa) };
                for &pq in qs {
                    for &pt in ts {
                        out.push(MemHit {
                            x: pq + 1,
                            i: pt - qlen as u32,
                            len: depth,
                        });
                    }
                }
            }
        }
    };

    // Bottom-up traversal of the lcp-interval tree. Each stack entry is an
    // open interval; merging two sets crosses them at the merge depth, which
    // is exactly the LCA depth of every pair between them.
    let mut stack: Vec<(u32, Buckets)> = vec![(0, Buckets::default())];
    let collapse = |stack: &mut Vec<(u32, Buckets)>,
                    level: u32,
                    out_emit: &mut dyn FnMut(&Buckets, &Buckets, u32)| {
        let mut carry: Option<Buckets> = None;
        while stack.last().map_or(false, |(d, _)| *d > level) {
            let (depth, mut set) = stack.pop().unwrap();
            if let Some(c) = carry.take() {
                out_emit(&c, &set, depth);
                set.absorb(c);
            }
            carry = Some(set);
        }
        if let Some(c) = carry {
            let top = stack.last_mut().unwrap();
            if top.0 == level {
                out_emit(&c, &top.1, level);
                top.1.absorb(c);
            } else {
                stack.push((level, c));
            }
        }
    };

    for (k, &pos) in sa.iter().enumerate() {
        if k > 0 {
            collapse(&mut stack, lcp[k], &mut emit);
        }
        if let Some(key) = classify(pos as usize) {
            let suffix_len = (n - pos as usize) as u32;
            debug_assert!(stack.last().unwrap().0 < suffix_len);
            stack.push((suffix_len, Buckets::singleton(key, pos)));
        }
    }
    collapse(&mut stack, 0, &mut emit);

    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;

    fn naive_suffix_array(s: &[u32]) -> Vec<u32> {
        let mut sa: Vec<u32> = (0..s.len() as u32).collect();
        sa.sort_by(|&a, &b| s[a as usize..].cmp(&s[b as usize..]));
        sa
    }

    /// Sliding-diagonal maximal-run enumeration, the quadratic reference.
    fn naive_mems(q: &[u8], t: &[u8]) -> Vec<MemHit> {
        let mut out = Vec::new();
        for d in -(t.len() as i64 - 1)..=(q.len() as i64 - 1) {
            let (mut x, mut i) = if d >= 0 { (d as usize, 0) } else { (0, (-d) as usize) };
            while x < q.len() && i < t.len() {
                if q[x] != t[i] {
                    x += 1;
                    i += 1;
                    continue;
                }
                let (sx, si) = (x, i);
                while x < q.len() && i < t.len() && q[x] == t[i] {
                    x += 1;
                    i += 1;
                }
                out.push(MemHit {
                    x: sx as u32 + 1,
                    i: si as u32 + 1,
                    len: (x - sx) as u32,
                });
            }
        }
        out.sort_unstable();
        out
    }

    #[test]
    fn suffix_array_banana() {
        let s: Vec<u32> = "banana\0".bytes().map(|b| b as u32).collect();
        assert_eq!(suffix_array(&s), vec![6, 5, 3, 1, 0, 4, 2]);
    }

    #[test]
    fn suffix_array_matches_naive() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(1..60usize);
            let sigma = *[2u32, 3, 26].choose(&mut rng).unwrap();
            let mut s: Vec<u32> = (0..n).map(|_| rng.gen_range(0..sigma) + 1).collect();
            s.push(0);
            let sa = suffix_array(&s);
            assert_eq!(sa, naive_suffix_array(&s), "s={s:?}");
            let lcp = lcp_array(&s, &sa);
            for k in 1..s.len() {
                let a = &s[sa[k - 1] as usize..];
                let b = &s[sa[k] as usize..];
                let want = a.iter().zip(b).take_while(|(x, y)| x == y).count() as u32;
                assert_eq!(lcp[k], want);
            }
        }
    }

    #[test]
    fn mems_whole_string_identity() {
        assert_eq!(
            cross_document_mems(b"A", b"A"),
            vec![MemHit { x: 1, i: 1, len: 1 }]
        );
    }

    #[test]
    fn mems_acgt_agct() {
        let hits = cross_document_mems(b"ACGT", b"AGCT");
        let want = vec![
            MemHit { x: 1, i: 1, len: 1 },
            MemHit { x: 2, i: 3, len: 1 },
            MemHit { x: 3, i: 2, len: 1 },
            MemHit { x: 4, i: 4, len: 1 },
        ];
        assert_eq!(hits, want);
    }

    #[test]
    fn mems_aaa() {
        let hits = cross_document_mems(b"AAA", b"AAA");
        let want = vec![
            MemHit { x: 1, i: 1, len: 3 },
            MemHit { x: 1, i: 2, len: 2 },
            MemHit { x: 1, i: 3, len: 1 },
            MemHit { x: 2, i: 1, len: 2 },
            MemHit { x: 3, i: 1, len: 1 },
        ];
        assert_eq!(hits, want);
    }

    #[test]
    fn mems_match_naive_random() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for round in 0..400 {
            let sigma = *[2u8, 4].choose(&mut rng).unwrap();
            let m = rng.gen_range(1..=30usize);
            let n = rng.gen_range(1..=60usize);
            let q: Vec<u8> = (0..m).map(|_| b'A' + rng.gen_range(0..sigma)).collect();
            let t: Vec<u8> = (0..n).map(|_| b'A' + rng.gen_range(0..sigma)).collect();
            assert_eq!(
                cross_document_mems(&q, &t),
                naive_mems(&q, &t),
                "round {round} q={} t={}",
                String::from_utf8_lossy(&q),
                String::from_utf8_lossy(&t)
            );
        }
    }

    #[test]
    fn mems_disjoint_alphabets() {
        assert!(cross_document_mems(b"abc", b"XYZ").is_empty());
    }
}
