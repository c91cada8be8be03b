//! Exhaustive verifiers for the synchronization and long-distance string
//! properties.
//!
//! Both verifiers share one trick: for a fixed left interval, streaming the
//! right interval symbol-by-symbol through [`LcsStream`] yields the edit
//! distance for every right endpoint from a single pass, so the full triple
//! (respectively quadruple) enumeration costs O(n^4/64) word operations
//! rather than O(n^4) table cells.

use super::{LcsStream, Sequence};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// The first triple `1 <= i < j < k <= n+1` with
/// `ED(S[i, j), S[j, k)) <= (1 - eps) * (k - i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SyncViolation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub ed: usize,
}

/// Checks the synchronization property: every pair of adjacent intervals
/// `S[i, j)`, `S[j, k)` must satisfy `ED > (1 - eps) * (k - i)` strictly.
/// Returns `None` when the property holds, otherwise the lexicographically
/// first violating triple.
pub fn verify_sync(s: &Sequence, eps: f64) -> Option<SyncViolation> {
    let n = s.len();
    if n < 2 {
        return None;
    }
    // An all-distinct string is eps-synchronizing for every eps > 0:
    // adjacent intervals share no symbol, so ED equals the total length.
    if s.all_distinct() {
        return None;
    }
    let check_i = |i: usize| -> Option<SyncViolation> {
        let syms = s.symbols();
        for j in (i + 1)..=n {
            let left = &syms[i - 1..j - 1];
            let mut stream = LcsStream::new(left);
            for k in (j + 1)..=(n + 1) {
                stream.push(syms[k - 2]);
                let total = k - i;
                let ed = total - 2 * stream.lcs();
                if (ed as f64) <= (1.0 - eps) * (total as f64) + 1e-9 {
                    return Some(SyncViolation { i, j, k, ed });
                }
            }
        }
        None
    };

    #[cfg(feature = "parallel")]
    {
        (1..n)
            .into_par_iter()
            .filter_map(check_i)
            .min_by_key(|v| (v.i, v.j, v.k))
    }
    #[cfg(not(feature = "parallel"))]
    {
        (1..n).find_map(check_i)
    }
}

/// The first pair of disjoint intervals `S[i, j)`, `S[i2, j2)` violating the
/// long-distance requirement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LongDistanceViolation {
    pub i: usize,
    pub j: usize,
    pub i2: usize,
    pub j2: usize,
    pub ed: usize,
}

/// Checks the c-long-distance property: every pair of disjoint substrings
/// that is adjacent or has total length at least `c * log2(n)` must have
/// `ED > (1 - eps) * (total length)`.
pub fn verify_long_distance(
    s: &Sequence,
    eps: f64,
    c: f64,
) -> Option<LongDistanceViolation> {
    let n = s.len();
    if n < 2 {
        return None;
    }
    if s.all_distinct() {
        return None;
    }
    let min_len = c * (n as f64).log2();
    // Scan order is lexicographic in (j, i2, j2), so the first violation
    // found for a given i is the smallest one for that i.
    let check_i = |i: usize| -> Option<LongDistanceViolation> {
        let syms = s.symbols();
        for j in (i + 1)..=n {
            let left = &syms[i - 1..j - 1];
            let len1 = j - i;
            for i2 in j..=n {
                let mut stream = LcsStream::new(left);
                for j2 in (i2 + 1)..=(n + 1) {
                    stream.push(syms[j2 - 2]);
                    let len2 = j2 - i2;
                    let total = len1 + len2;
                    let qualifies = i2 == j || (total as f64) >= min_len - 1e-9;
                    if !qualifies {
                        continue;
                    }
                    let ed = total - 2 * stream.lcs();
                    if (ed as f64) <= (1.0 - eps) * (total as f64) + 1e-9 {
                        return Some(LongDistanceViolation { i, j, i2, j2, ed });
                    }
                }
            }
        }
        None
    };

    #[cfg(feature = "parallel")]
    {
        (1..n)
            .into_par_iter()
            .filter_map(check_i)
            .min_by_key(|v| (v.i, v.j, v.i2, v.j2))
    }
    #[cfg(not(feature = "parallel"))]
    {
        (1..n).find_map(check_i)
    }
}
