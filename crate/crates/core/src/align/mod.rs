//! Exact edit-distance, LCS, relative-suffix-distance, and non-crossing
//! matching primitives.
//!
//! Edit distance here counts insertions and deletions only (no unit-cost
//! substitutions), so `ED(a, b) = |a| + |b| - 2 * LCS(a, b)`. All positions
//! in public types are 1-based.

mod bitlcs;
mod verify;

pub use bitlcs::{lcs_len, LcsStream};
pub use verify::{
    verify_long_distance, verify_sync, LongDistanceViolation, SyncViolation,
};

use std::fmt;

use crate::util::ceil_frac;

#[derive(Debug, Clone, PartialEq)]
pub enum AlignError {
    /// A symbol id is not smaller than the declared alphabet size.
    SymbolOutOfRange {
        index: usize,
        symbol: u64,
        alphabet_size: u64,
    },
    /// Alphabet size must be positive.
    EmptyAlphabet,
    /// A parameter that must lie in (0, 1) does not.
    BadEps { eps: f64 },
    /// Matching pairs are not strictly increasing in both coordinates.
    NonMonotone { at: usize },
    /// An edge endpoint lies outside `[1, n_left] x [1, n_right]`.
    EdgeOutOfRange { a: usize, b: usize },
}

impl fmt::Display for AlignError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlignError::SymbolOutOfRange {
                index,
                symbol,
                alphabet_size,
            } => write!(
                f,
                "symbol {symbol} at index {index} is outside alphabet of size {alphabet_size}"
            ),
            AlignError::EmptyAlphabet => write!(f, "alphabet size must be positive"),
            AlignError::BadEps { eps } => write!(f, "eps must lie in (0, 1), got {eps}"),
            AlignError::NonMonotone { at } => {
                write!(f, "matching is not strictly monotone at pair {at}")
            }
            AlignError::EdgeOutOfRange { a, b } => {
                write!(f, "edge ({a}, {b}) has an endpoint out of range")
            }
        }
    }
}

impl std::error::Error for AlignError {}

/// A finite string over an integer alphabet `{0, .., alphabet_size - 1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    symbols: Vec<u64>,
    alphabet_size: u64,
}

impl Sequence {
    pub fn new(symbols: Vec<u64>, alphabet_size: u64) -> Result<Self, AlignError> {
        if alphabet_size == 0 {
            return Err(AlignError::EmptyAlphabet);
        }
        for (index, &symbol) in symbols.iter().enumerate() {
            if symbol >= alphabet_size {
                return Err(AlignError::SymbolOutOfRange {
                    index,
                    symbol,
                    alphabet_size,
                });
            }
        }
        Ok(Self {
            symbols,
            alphabet_size,
        })
    }

    /// Convenience constructor mapping ASCII bytes to symbol ids over an
    /// alphabet of size 256. Mostly useful in tests and examples.
    pub fn ascii(s: &str) -> Self {
        Self {
            symbols: s.bytes().map(u64::from).collect(),
            alphabet_size: 256,
        }
    }

    pub fn symbols(&self) -> &[u64] {
        &self.symbols
    }

    pub fn alphabet_size(&self) -> u64 {
        self.alphabet_size
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// True when no symbol occurs twice.
    pub fn all_distinct(&self) -> bool {
        let mut seen = std::collections::HashSet::with_capacity(self.symbols.len());
        self.symbols.iter().all(|s| seen.insert(*s))
    }
}

/// A list of index pairs strictly increasing in both coordinates (1-based).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MonotoneMatching {
    pairs: Vec<(usize, usize)>,
}

impl MonotoneMatching {
    pub fn new(pairs: Vec<(usize, usize)>) -> Result<Self, AlignError> {
        for at in 1..pairs.len() {
            if pairs[at].0 <= pairs[at - 1].0 || pairs[at].1 <= pairs[at - 1].1 {
                return Err(AlignError::NonMonotone { at });
            }
        }
        if let Some(&(a, b)) = pairs.first() {
            if a == 0 || b == 0 {
                return Err(AlignError::NonMonotone { at: 0 });
            }
        }
        Ok(Self { pairs })
    }

    pub(crate) fn from_sorted_unchecked(pairs: Vec<(usize, usize)>) -> Self {
        debug_assert!(pairs
            .windows(2)
            .all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1));
        Self { pairs }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// A relative suffix distance: an exact rational in [0, 1].
///
/// Values are kept as `num / den` so that comparisons (and the metric-axiom
/// tests) are exact rather than subject to floating-point rounding.
#[derive(Debug, Clone, Copy)]
pub struct SuffixDistance {
    num: u64,
    den: u64,
}

impl SuffixDistance {
    pub const ZERO: SuffixDistance = SuffixDistance { num: 0, den: 1 };

    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "suffix distance denominator must be positive");
        Self { num, den }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialEq for SuffixDistance {
    fn eq(&self, other: &Self) -> bool {
        (self.num as u128) * (other.den as u128) == (other.num as u128) * (self.den as u128)
    }
}

impl Eq for SuffixDistance {}

impl PartialOrd for SuffixDistance {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SuffixDistance {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        ((self.num as u128) * (other.den as u128))
            .cmp(&((other.num as u128) * (self.den as u128)))
    }
}

impl fmt::Display for SuffixDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Insertion-deletion edit distance.
pub fn edit_distance(a: &Sequence, b: &Sequence) -> usize {
    edit_distance_symbols(a.symbols(), b.symbols())
}

pub(crate) fn edit_distance_symbols(a: &[u64], b: &[u64]) -> usize {
    a.len() + b.len() - 2 * lcs_len(a, b)
}

/// A maximum-cardinality monotone matching of equal symbols between `a` and
/// `b`. When the DP backtrace can move either way it advances in `a` first,
/// which makes the output deterministic.
pub fn lcs(a: &Sequence, b: &Sequence) -> MonotoneMatching {
    lcs_pairs(a.symbols(), b.symbols())
}

pub(crate) fn lcs_pairs(a: &[u64], b: &[u64]) -> MonotoneMatching {
    let (n, m) = (a.len(), b.len());
    if n == 0 || m == 0 {
        return MonotoneMatching::default();
    }
    let w = m + 1;
    let mut dp = vec![0u32; (n + 1) * w];
    for i in 1..=n {
        let (prev, cur) = dp.split_at_mut(i * w);
        let prev = &prev[(i - 1) * w..];
        for j in 1..=m {
            cur[j] = if a[i - 1] == b[j - 1] {
                prev[j - 1] + 1
            } else {
                prev[j].max(cur[j - 1])
            };
        }
    }
    let mut pairs = Vec::with_capacity(dp[n * w + m] as usize);
    let (mut i, mut j) = (n, m);
    while i > 0 && j > 0 {
        if a[i - 1] == b[j - 1] {
            pairs.push((i, j));
            i -= 1;
            j -= 1;
        } else if dp[(i - 1) * w + j] >= dp[i * w + j - 1] {
            i -= 1;
        } else {
            j -= 1;
        }
    }
    pairs.reverse();
    MonotoneMatching::from_sorted_unchecked(pairs)
}

/// Maximum-size subset of `edges` that is strictly increasing in both
/// coordinates, computed as a longest strictly-increasing subsequence over
/// the edges sorted by `(a asc, b desc)`.
pub fn longest_noncrossing_matching(
    edges: &[(usize, usize)],
    n_left: usize,
    n_right: usize,
) -> Result<MonotoneMatching, AlignError> {
    for &(a, b) in edges {
        if a == 0 || b == 0 || a > n_left || b > n_right {
            return Err(AlignError::EdgeOutOfRange { a, b });
        }
    }
    let mut sorted: Vec<(usize, usize)> = edges.to_vec();
    sorted.sort_unstable_by(|x, y| x.0.cmp(&y.0).then(y.1.cmp(&x.1)));
    let bs: Vec<u64> = sorted.iter().map(|e| e.1 as u64).collect();
    let chain = lis_strictly_increasing(&bs);
    let pairs: Vec<(usize, usize)> = chain.into_iter().map(|i| sorted[i]).collect();
    Ok(MonotoneMatching::from_sorted_unchecked(pairs))
}

/// Longest strictly increasing subsequence (patience algorithm); returns the
/// indices of one optimal chain.
fn lis_strictly_increasing(vals: &[u64]) -> Vec<usize> {
    let mut tails: Vec<usize> = Vec::new();
    let mut parent: Vec<Option<usize>> = vec![None; vals.len()];
    for (i, &v) in vals.iter().enumerate() {
        let pos = tails.partition_point(|&t| vals[t] < v);
        if pos > 0 {
            parent[i] = Some(tails[pos - 1]);
        }
        if pos == tails.len() {
            tails.push(i);
        } else {
            tails[pos] = i;
        }
    }
    let mut out = Vec::new();
    let mut cur = tails.last().copied();
    while let Some(c) = cur {
        out.push(c);
        cur = parent[c];
    }
    out.reverse();
    out
}

/// Size of the largest monotone self-matching of `s` with every pair
/// non-aligned (`a_i != b_i`).
pub fn self_matching_size(s: &Sequence) -> usize {
    let n = s.len();
    let mut by_symbol: std::collections::HashMap<u64, Vec<usize>> =
        std::collections::HashMap::new();
    for (i, &sym) in s.symbols().iter().enumerate() {
        by_symbol.entry(sym).or_default().push(i + 1);
    }
    let mut edges = Vec::new();
    for positions in by_symbol.values() {
        if positions.len() < 2 {
            continue;
        }
        for &p in positions {
            for &q in positions {
                if p != q {
                    edges.push((p, q));
                }
            }
        }
    }
    longest_noncrossing_matching(&edges, n, n)
        .expect("self-matching edges are in range")
        .len()
}

/// True iff `s` has no non-aligned monotone self-matching of size
/// `ceil(|s| * eps)` or more.
pub fn verify_self_matching(s: &Sequence, eps: f64) -> Result<bool, AlignError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(AlignError::BadEps { eps });
    }
    Ok(self_matching_size(s) < ceil_frac(s.len(), eps))
}

/// Relative suffix distance: `max_k ED(last-min(k,|a|)-of-a,
/// last-min(k,|b|)-of-b) / 2k` over `k = 1 .. max(|a|, |b|)`. A suffix longer
/// than the string is the whole string.
pub fn rsd(a: &Sequence, b: &Sequence) -> SuffixDistance {
    rsd_symbols(a.symbols(), b.symbols())
}

pub(crate) fn rsd_symbols(a: &[u64], b: &[u64]) -> SuffixDistance {
    let (la, lb) = (a.len(), b.len());
    let kmax = la.max(lb);
    if kmax == 0 {
        return SuffixDistance::ZERO;
    }
    // One DP over the reversed strings yields every suffix-pair distance:
    // d[p][q] = ED(last p symbols of a, last q symbols of b).
    let w = lb + 1;
    let mut d = vec![0u32; (la + 1) * w];
    for (q, cell) in d[..w].iter_mut().enumerate() {
        *cell = q as u32;
    }
    for p in 1..=la {
        let ca = a[la - p];
        let (prev, cur) = d.split_at_mut(p * w);
        let prev = &prev[(p - 1) * w..];
        cur[0] = p as u32;
        for q in 1..=lb {
            cur[q] = if ca == b[lb - q] {
                prev[q - 1]
            } else {
                1 + prev[q].min(cur[q - 1])
            };
        }
    }
    let mut best = SuffixDistance::ZERO;
    for k in 1..=kmax {
        let p = k.min(la);
        let q = k.min(lb);
        let cand = SuffixDistance::new(u64::from(d[p * w + q]), 2 * k as u64);
        if cand > best {
            best = cand;
        }
    }
    best
}

#[cfg(test)]
mod tests;
