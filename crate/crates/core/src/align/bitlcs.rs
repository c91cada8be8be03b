//! Bit-parallel LCS length (Hyyro-style), extended to arbitrarily long first
//! strings via multi-word carry/borrow chains.
//!
//! The register `s` starts as `|a|` one-bits; zeros accumulate where a symbol
//! of `a` is consumed by the common subsequence, so the LCS length is the
//! number of zero bits at the end. Processing is O(|b| * |a|/64).

use std::collections::HashMap;

struct MaskSet {
    words: usize,
    len: usize,
    masks: HashMap<u64, Vec<u64>>,
    zero: Vec<u64>,
}

impl MaskSet {
    fn new(a: &[u64]) -> Self {
        let words = a.len().div_ceil(64).max(1);
        let mut masks: HashMap<u64, Vec<u64>> = HashMap::new();
        for (i, &sym) in a.iter().enumerate() {
            masks.entry(sym).or_insert_with(|| vec![0u64; words])[i >> 6] |= 1u64 << (i & 63);
        }
        MaskSet {
            words,
            len: a.len(),
            masks,
            zero: vec![0u64; words],
        }
    }
}

/// Incremental LCS against a fixed first string: feed symbols of the second
/// string one at a time and read the running LCS length after each.
pub struct LcsStream {
    set: MaskSet,
    s: Vec<u64>,
}

impl LcsStream {
    pub fn new(a: &[u64]) -> Self {
        let set = MaskSet::new(a);
        let mut s = vec![u64::MAX; set.words];
        let top = set.len & 63;
        if top != 0 {
            s[set.words - 1] = (1u64 << top) - 1;
        }
        if set.len == 0 {
            s[0] = 0;
        }
        LcsStream { set, s }
    }

    pub fn push(&mut self, c: u64) {
        let mask = self.set.masks.get(&c).unwrap_or(&self.set.zero);
        let mut carry = 0u64;
        let mut borrow = 0u64;
        for w in 0..self.set.words {
            let u = self.s[w] & mask[w];
            let (a1, c1) = self.s[w].overflowing_add(u);
            let (a2, c2) = a1.overflowing_add(carry);
            carry = u64::from(c1) | u64::from(c2);
            let (s1, b1) = self.s[w].overflowing_sub(u);
            let (s2, b2) = s1.overflowing_sub(borrow);
            borrow = u64::from(b1) | u64::from(b2);
            self.s[w] = a2 | s2;
        }
    }

    /// LCS of the first string with everything pushed so far.
    pub fn lcs(&self) -> usize {
        if self.set.len == 0 {
            return 0;
        }
        let top = self.set.len & 63;
        let mut ones = 0usize;
        for w in 0..self.set.words {
            let lim = if w == self.set.words - 1 && top != 0 {
                (1u64 << top) - 1
            } else {
                u64::MAX
            };
            ones += (self.s[w] & lim).count_ones() as usize;
        }
        self.set.len - ones
    }
}

/// LCS length of two symbol slices.
pub fn lcs_len(a: &[u64], b: &[u64]) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut stream = LcsStream::new(a);
    for &c in b {
        stream.push(c);
    }
    stream.lcs()
}
