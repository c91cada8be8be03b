//! Edit-distance-approximating index and the fast repositioning built on it.
//!
//! The index writes the codewords of a small list-decodable inner code
//! back-to-back, one per block of `N = ceil(c1 log2 n)` positions. To
//! approximate the edit distance between an indexed string and any other
//! string, each received block is list-decoded to candidate blocks; edges
//! between identical full symbols are drawn only inside a window of
//! `w = ceil(1/eps_I)` blocks around each candidate, and the largest
//! non-crossing matching of that graph (Hunt-Szymanski style) plays the role
//! of the LCS.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::align::{lcs_len, longest_noncrossing_matching, MonotoneMatching, Sequence};
use crate::codec::{reconstruct, DecodeDetail, DecodeFailure, PositionGuess};
use crate::outercode::RsCode;
use crate::seed::{derive_seed, rng_from_seed};
use crate::syncgen::gen_sync;
use crate::util::ceil_val;
use rand::Rng;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug)]
pub enum EdIndexError {
    BadParam(String),
    Other(String),
}

impl fmt::Display for EdIndexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdIndexError::BadParam(msg) => write!(f, "bad parameter: {msg}"),
            EdIndexError::Other(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for EdIndexError {}

/// Block-length constant (N = ceil(ED_BLOCK_CONST * log2 n)).
pub const ED_BLOCK_CONST: f64 = 4.0;

/// The index: `n_blocks` random inner codewords of length `block_len` over a
/// small alphabet, written back-to-back. When the requested length is not a
/// multiple of the block length, the built length is rounded up and recorded.
#[derive(Debug, Clone)]
pub struct EdIndex {
    requested_n: usize,
    block_len: usize,
    n_blocks: usize,
    eps_i: f64,
    window: usize,
    alphabet: u64,
    symbols: Vec<u64>,
}

impl EdIndex {
    pub fn build(n: usize, eps_i: f64, seed: u64) -> Result<Self, EdIndexError> {
        if !(eps_i > 0.0 && eps_i < 1.0) {
            return Err(EdIndexError::BadParam(format!(
                "eps_I must lie in (0, 1), got {eps_i}"
            )));
        }
        if n == 0 {
            return Err(EdIndexError::BadParam("n must be positive".into()));
        }
        let block_len = ceil_val(ED_BLOCK_CONST * (n.max(2) as f64).log2()).max(2) as usize;
        let n_blocks = n.div_ceil(block_len).max(1);
        let alphabet = ceil_val((1.0 / eps_i).powi(3)).max(2);
        let window = ceil_val(1.0 / eps_i).max(1) as usize;
        let mut rng = rng_from_seed(seed);
        let symbols: Vec<u64> = (0..block_len * n_blocks)
            .map(|_| rng.random_range(0..alphabet))
            .collect();
        Ok(Self {
            requested_n: n,
            block_len,
            n_blocks,
            eps_i,
            window,
            alphabet,
            symbols,
        })
    }

    /// Actual index length (a multiple of the block length, >= requested).
    pub fn n(&self) -> usize {
        self.symbols.len()
    }

    pub fn requested_n(&self) -> usize {
        self.requested_n
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    pub fn n_blocks(&self) -> usize {
        self.n_blocks
    }

    pub fn eps_i(&self) -> f64 {
        self.eps_i
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn alphabet(&self) -> u64 {
        self.alphabet
    }

    pub fn symbols(&self) -> &[u64] {
        &self.symbols
    }

    pub fn codeword(&self, block: usize) -> &[u64] {
        &self.symbols[block * self.block_len..(block + 1) * self.block_len]
    }

    /// Brute-force inner list decoding: block b is a candidate for `window`
    /// iff `N - LCS <= (1 - eps_I) N` and `|window| - LCS <= (1 - eps_I) N`.
    pub fn inner_list_decode(&self, window_syms: &[u64]) -> Vec<usize> {
        let threshold = (1.0 - self.eps_i) * self.block_len as f64 + 1e-9;
        (0..self.n_blocks)
            .filter(|&b| {
                let l = lcs_len(self.codeword(b), window_syms);
                (self.block_len - l) as f64 <= threshold
                    && (window_syms.len() - l) as f64 <= threshold
            })
            .collect()
    }
}

/// Bipartite graph of candidate symbol identities (1-based endpoints).
#[derive(Debug, Clone)]
pub struct CandidateGraph {
    pub n_left: usize,
    pub n_right: usize,
    pub edges: Vec<(usize, usize)>,
}

/// The slice a received block is list-decoded from: the trailing
/// `block_len`-window ending at the block's last symbol. For full blocks
/// this is the block itself; the ragged tail borrows enough preceding
/// symbols to fill a whole window (a too-short window could never clear the
/// `LCS >= eps_I * N` candidate threshold).
pub fn received_block_window(right: &[(u64, u64)], block_len: usize, bi: usize) -> &[(u64, u64)] {
    let end = ((bi + 1) * block_len).min(right.len());
    let win_start = end.saturating_sub(block_len);
    &right[win_start..end]
}

/// Builds the candidate graph between the indexed string
/// `(left_content[p], index[p])` and an arbitrary received string of
/// (content, index) pairs. Edges for a ragged right-side tail cover only the
/// tail's own positions, but its candidates come from the trailing window.
pub fn build_candidate_graph(
    index: &EdIndex,
    left_content: &[u64],
    right: &[(u64, u64)],
) -> CandidateGraph {
    assert_eq!(
        left_content.len(),
        index.n(),
        "content length must match the index"
    );
    let block = index.block_len();
    let n_right_blocks = right.len().div_ceil(block);

    // Per-left-block lookup from full symbol to positions, built on demand.
    let mut lookup: HashMap<usize, HashMap<(u64, u64), Vec<usize>>> = HashMap::new();

    let decode_block = |bi: usize| -> (usize, Vec<usize>) {
        let window: Vec<u64> = received_block_window(right, block, bi)
            .iter()
            .map(|&(_, e)| e)
            .collect();
        (bi, index.inner_list_decode(&window))
    };

    #[cfg(feature = "parallel")]
    let decoded: Vec<(usize, Vec<usize>)> =
        (0..n_right_blocks).into_par_iter().map(decode_block).collect();
    #[cfg(not(feature = "parallel"))]
    let decoded: Vec<(usize, Vec<usize>)> = (0..n_right_blocks).map(decode_block).collect();

    let mut edges = Vec::new();
    for (bi, candidates) in decoded {
        let mut allowed: BTreeSet<usize> = BTreeSet::new();
        for j in candidates {
            let lo = j.saturating_sub(index.window());
            let hi = (j + index.window()).min(index.n_blocks() - 1);
            allowed.extend(lo..=hi);
        }
        let start = bi * block;
        let end = ((bi + 1) * block).min(right.len());
        for k in allowed {
            let table = lookup.entry(k).or_insert_with(|| {
                let mut m: HashMap<(u64, u64), Vec<usize>> = HashMap::new();
                for p in k * block..(k + 1) * block {
                    m.entry((left_content[p], index.symbols()[p]))
                        .or_default()
                        .push(p);
                }
                m
            });
            for (q, &sym) in right[start..end].iter().enumerate() {
                if let Some(ps) = table.get(&sym) {
                    for &p in ps {
                        edges.push((p + 1, start + q + 1));
                    }
                }
            }
        }
    }
    CandidateGraph {
        n_left: index.n(),
        n_right: right.len(),
        edges,
    }
}

/// Approximates `ED(content x index, s_prime)` from above: the matching is a
/// genuine common subsequence, so the estimate is never below the exact edit
/// distance, and it meets the exact value whenever the graph contains a full
/// LCS matching.
pub fn approx_ed(
    index: &EdIndex,
    left_content: &[u64],
    s_prime: &[(u64, u64)],
) -> (MonotoneMatching, usize) {
    let graph = build_candidate_graph(index, left_content, s_prime);
    let matching = longest_noncrossing_matching(&graph.edges, graph.n_left.max(1), graph.n_right.max(1))
        .expect("candidate edges are in range");
    let estimate = graph.n_left + graph.n_right - 2 * matching.len();
    (matching, estimate)
}

/// Symbol-wise concatenation of a synchronization string and an edit-distance
/// index; the premise of the fast repositioner.
#[derive(Debug, Clone)]
pub struct CombinedIndex {
    sync: Vec<u64>,
    q_sync: u64,
    ed: EdIndex,
}

impl CombinedIndex {
    pub fn new(sync: &Sequence, ed: EdIndex) -> Result<Self, EdIndexError> {
        if sync.len() != ed.n() {
            return Err(EdIndexError::BadParam(format!(
                "sync length {} != index length {}",
                sync.len(),
                ed.n()
            )));
        }
        Ok(Self {
            sync: sync.symbols().to_vec(),
            q_sync: sync.alphabet_size(),
            ed,
        })
    }

    pub fn len(&self) -> usize {
        self.sync.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sync.is_empty()
    }

    pub fn sync(&self) -> &[u64] {
        &self.sync
    }

    pub fn q_sync(&self) -> u64 {
        self.q_sync
    }

    pub fn ed(&self) -> &EdIndex {
        &self.ed
    }
}

/// Iterated approximate repositioning: K rounds of candidate-graph matching
/// over the remaining received symbols, assigning and removing the matched
/// ones. No position collects more than K claims (at most one per round).
pub fn reposition_fast(
    ci: &CombinedIndex,
    received_idx: &[(u64, u64)],
    k_rounds: usize,
) -> Vec<PositionGuess> {
    let mut guesses = vec![PositionGuess::Undetermined; received_idx.len()];
    let mut claims = vec![0usize; ci.len()];
    let mut active: Vec<(usize, (u64, u64))> = received_idx.iter().copied().enumerate().collect();
    for _ in 0..k_rounds {
        if active.is_empty() {
            break;
        }
        let right: Vec<(u64, u64)> = active.iter().map(|&(_, sym)| sym).collect();
        let graph = build_candidate_graph(&ci.ed, &ci.sync, &right);
        let matching =
            longest_noncrossing_matching(&graph.edges, graph.n_left.max(1), graph.n_right.max(1))
                .expect("candidate edges are in range");
        if matching.is_empty() {
            break;
        }
        let mut matched = vec![false; active.len()];
        for &(i, j) in matching.pairs() {
            let recv = active[j - 1].0;
            guesses[recv] = PositionGuess::Pos(i);
            claims[i - 1] += 1;
            debug_assert!(claims[i - 1] <= k_rounds);
            matched[j - 1] = true;
        }
        active = active
            .into_iter()
            .enumerate()
            .filter_map(|(slot, entry)| (!matched[slot]).then_some(entry))
            .collect();
    }
    guesses
}

/// A codeword of the fast codec: message, synchronization, and edit-distance
/// index components, transmitted symbol-wise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FastWord {
    pub msg: Vec<u64>,
    pub sync: Vec<u64>,
    pub ed: Vec<u64>,
    pub q_msg: u64,
    pub q_sync: u64,
    pub q_ed: u64,
}

impl FastWord {
    pub fn len(&self) -> usize {
        self.msg.len()
    }

    pub fn is_empty(&self) -> bool {
        self.msg.is_empty()
    }

    pub fn to_channel_stream(&self) -> Result<(Vec<u64>, u64), EdIndexError> {
        let alphabet = self
            .q_msg
            .checked_mul(self.q_sync)
            .and_then(|v| v.checked_mul(self.q_ed))
            .ok_or_else(|| EdIndexError::BadParam("product alphabet overflows".into()))?;
        let stream = (0..self.len())
            .map(|i| (self.msg[i] * self.q_sync + self.sync[i]) * self.q_ed + self.ed[i])
            .collect();
        Ok((stream, alphabet))
    }

    pub fn from_channel_stream(
        stream: &[u64],
        q_msg: u64,
        q_sync: u64,
        q_ed: u64,
    ) -> Self {
        let mut msg = Vec::with_capacity(stream.len());
        let mut sync = Vec::with_capacity(stream.len());
        let mut ed = Vec::with_capacity(stream.len());
        for &v in stream {
            ed.push(v % q_ed);
            let rest = v / q_ed;
            sync.push(rest % q_sync);
            msg.push(rest / q_sync);
        }
        Self {
            msg,
            sync,
            ed,
            q_msg,
            q_sync,
            q_ed,
        }
    }
}

/// The fast-path unique codec: a Reed-Solomon outer code indexed by
/// (synchronization string x edit-distance index), decoded with
/// `reposition_fast` instead of exact LCS rounds.
#[derive(Debug, Clone)]
pub struct FastCodec {
    rs: RsCode,
    combined: CombinedIndex,
    k_rounds: usize,
    delta: f64,
    eps: f64,
}

impl FastCodec {
    /// Geometry as in the unique codec, with the gap split per the fast
    /// pipeline: `delta_C = delta + eps/2`, `eps_I = 2 eps / 9`,
    /// `eps_s = eps^2 / 18`, `K = ceil(6 / eps)`. The block structure may
    /// round the code length up from `n_requested`.
    pub fn new(
        field_bits: u32,
        n_requested: usize,
        k_msg: usize,
        delta: f64,
        seed: u64,
    ) -> Result<Self, EdIndexError> {
        let probe = EdIndex::build(n_requested, 0.5, derive_seed(seed, 1))?;
        let n = probe.n();
        if k_msg == 0 || k_msg >= n {
            return Err(EdIndexError::BadParam(format!(
                "need 0 < k < adjusted n = {n}, got k = {k_msg}"
            )));
        }
        let delta_c = (n - k_msg + 1) as f64 / n as f64;
        let eps = 2.0 * (delta_c - delta);
        if eps <= 0.0 {
            return Err(EdIndexError::BadParam(format!(
                "design distance {delta} is not below the outer code's relative distance {delta_c:.4}"
            )));
        }
        let eps_i = (2.0 * eps / 9.0).min(0.99);
        let eps_s = (eps * eps / 18.0).min(0.99);
        let k_rounds = ((6.0 / eps).ceil() as usize).max(1);
        let ed = EdIndex::build(n_requested, eps_i, derive_seed(seed, 1))?;
        debug_assert_eq!(ed.n(), n);
        let sync = gen_sync(n, eps_s, derive_seed(seed, 2))
            .map_err(|e| EdIndexError::Other(format!("sync string: {e}")))?
            .seq
            .flatten_dense();
        let rs = RsCode::new(field_bits, n, k_msg)
            .map_err(|e| EdIndexError::Other(format!("outer code: {e}")))?;
        let combined = CombinedIndex::new(&sync, ed)?;
        Ok(Self {
            rs,
            combined,
            k_rounds,
            delta,
            eps,
        })
    }

    pub fn n(&self) -> usize {
        self.rs.n()
    }

    pub fn k(&self) -> usize {
        self.rs.k()
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn k_rounds(&self) -> usize {
        self.k_rounds
    }

    pub fn combined(&self) -> &CombinedIndex {
        &self.combined
    }

    pub fn rs(&self) -> &RsCode {
        &self.rs
    }

    pub fn encode(&self, msg: &[u32]) -> Result<FastWord, EdIndexError> {
        let cw = self
            .rs
            .encode(msg)
            .map_err(|e| EdIndexError::Other(format!("outer code: {e}")))?;
        Ok(FastWord {
            msg: cw.into_iter().map(u64::from).collect(),
            sync: self.combined.sync().to_vec(),
            ed: self.combined.ed().symbols().to_vec(),
            q_msg: u64::from(self.rs.field().size()),
            q_sync: self.combined.q_sync(),
            q_ed: self.combined.ed().alphabet(),
        })
    }

    pub fn decode(&self, received: &FastWord) -> DecodeDetail {
        let received_idx: Vec<(u64, u64)> = received
            .sync
            .iter()
            .copied()
            .zip(received.ed.iter().copied())
            .collect();
        let guesses = reposition_fast(&self.combined, &received_idx, self.k_rounds);
        let reconstructed = reconstruct(&guesses, &received.msg, self.rs.n());
        let q = u64::from(self.rs.field().size());
        let rs_input: Vec<Option<u32>> = reconstructed
            .slots()
            .iter()
            .map(|slot| slot.and_then(|sym| (sym < q).then_some(sym as u32)))
            .collect();
        let outcome = match self.rs.decode_ee(&rs_input) {
            Err(e) => Err(DecodeFailure::Rs(e)),
            Ok(msg) => {
                let budget = self.rs.n() - self.rs.k();
                let reencoded = self.rs.encode(&msg).expect("decoded message is in range");
                let mut half_errors = 0usize;
                for (slot, &cw_sym) in reconstructed.slots().iter().zip(&reencoded) {
                    match slot {
                        None => half_errors += 1,
                        Some(sym) if *sym != u64::from(cw_sym) => half_errors += 2,
                        Some(_) => {}
                    }
                }
                if half_errors > budget {
                    Err(DecodeFailure::ReencodeMismatch {
                        half_errors,
                        budget,
                    })
                } else {
                    Ok(msg)
                }
            }
        };
        DecodeDetail {
            guesses,
            reconstructed,
            outcome,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{apply, random_adversary, Budget};
    use crate::codec::score_guesses;
    use crate::seed::rng_from_seed;

    fn naive_ed(a: &[(u64, u64)], b: &[(u64, u64)]) -> usize {
        let (n, m) = (a.len(), b.len());
        let w = m + 1;
        let mut d = vec![0usize; (n + 1) * w];
        for (q, cell) in d[..w].iter_mut().enumerate() {
            *cell = q;
        }
        for p in 1..=n {
            d[p * w] = p;
            for q in 1..=m {
                d[p * w + q] = if a[p - 1] == b[q - 1] {
                    d[(p - 1) * w + q - 1]
                } else {
                    1 + d[(p - 1) * w + q].min(d[p * w + q - 1])
                };
            }
        }
        d[n * w + m]
    }

    fn indexed(index: &EdIndex, content: &[u64]) -> Vec<(u64, u64)> {
        content
            .iter()
            .copied()
            .zip(index.symbols().iter().copied())
            .collect()
    }

    fn random_content(n: usize, q: u64, seed: u64) -> Vec<u64> {
        let mut rng = rng_from_seed(seed);
        (0..n).map(|_| rng.random_range(0..q)).collect()
    }

    #[test]
    fn build_adjusts_to_block_multiples() {
        let idx = EdIndex::build(64, 0.25, 1).unwrap();
        assert_eq!(idx.block_len(), 24);
        assert_eq!(idx.n_blocks(), 64usize.div_ceil(24));
        assert_eq!(idx.n(), idx.block_len() * idx.n_blocks());
        assert_eq!(idx.requested_n(), 64);
        assert_eq!(idx.window(), 4);
        assert_eq!(idx.alphabet(), 64);
    }

    #[test]
    fn clean_blocks_decode_to_themselves() {
        let idx = EdIndex::build(128, 0.25, 3).unwrap();
        for b in 0..idx.n_blocks() {
            let list = idx.inner_list_decode(idx.codeword(b));
            assert!(list.contains(&b), "block {b} missing from {list:?}");
        }
    }

    #[test]
    fn approx_ed_identical_is_zero() {
        let idx = EdIndex::build(100, 0.25, 5).unwrap();
        let content = random_content(idx.n(), 16, 7);
        let sxi = indexed(&idx, &content);
        let (_, est) = approx_ed(&idx, &content, &sxi);
        assert_eq!(est, 0);
    }

    #[test]
    fn approx_ed_single_deletion_is_one() {
        let idx = EdIndex::build(100, 0.25, 6).unwrap();
        let content = random_content(idx.n(), 16, 8);
        let sxi = indexed(&idx, &content);
        let mut corrupted = sxi.clone();
        corrupted.remove(17);
        let exact = naive_ed(&sxi, &corrupted);
        assert_eq!(exact, 1);
        let (_, est) = approx_ed(&idx, &content, &corrupted);
        assert_eq!(est, 1);
    }

    #[test]
    fn approx_ed_is_sound_and_close_under_scripts() {
        let idx = EdIndex::build(120, 0.25, 9).unwrap();
        let content = random_content(idx.n(), 8, 10);
        let sxi = indexed(&idx, &content);
        let (stream, alphabet): (Vec<u64>, u64) = (
            sxi.iter().map(|&(c, e)| c * idx.alphabet() + e).collect(),
            8 * idx.alphabet(),
        );
        for seed in 0..15u64 {
            let budget = Budget::new(0.15, 0.15).unwrap();
            let script = random_adversary(stream.len(), alphabet, &budget, seed);
            let out = apply(&script, &stream).unwrap();
            let corrupted: Vec<(u64, u64)> = out
                .output
                .iter()
                .map(|&v| (v / idx.alphabet(), v % idx.alphabet()))
                .collect();
            let exact = naive_ed(&sxi, &corrupted);
            let (_, est) = approx_ed(&idx, &content, &corrupted);
            assert!(est >= exact, "seed {seed}: estimate below exact");
        }
    }

    #[test]
    fn estimate_is_exact_when_graph_holds_the_lcs() {
        // With no corruption of the index components and the true block
        // present among candidates, the true LCS matching lies inside G.
        let idx = EdIndex::build(60, 0.25, 11).unwrap();
        let content = random_content(idx.n(), 4, 12);
        let sxi = indexed(&idx, &content);
        // Substitute a handful of content symbols in place (no shifts).
        let mut corrupted = sxi.clone();
        for p in [5usize, 20, 33] {
            corrupted[p].0 = (corrupted[p].0 + 1) % 4;
        }
        let exact = naive_ed(&sxi, &corrupted);
        let (_, est) = approx_ed(&idx, &content, &corrupted);
        assert_eq!(est, exact);
    }

    #[test]
    fn graph_edges_stay_within_candidate_windows() {
        let idx = EdIndex::build(120, 0.25, 13).unwrap();
        let content = random_content(idx.n(), 8, 14);
        let sxi = indexed(&idx, &content);
        let graph = build_candidate_graph(&idx, &content, &sxi);
        let block = idx.block_len();
        for &(p, q) in &graph.edges {
            let left_block = (p - 1) / block;
            let right_block = (q - 1) / block;
            let window: Vec<u64> = received_block_window(&sxi, block, right_block)
                .iter()
                .map(|&(_, e)| e)
                .collect();
            let cands = idx.inner_list_decode(&window);
            assert!(
                cands
                    .iter()
                    .any(|&j| left_block.abs_diff(j) <= idx.window()),
                "edge ({p}, {q}) outside every candidate window"
            );
            // Edges connect identical full symbols.
            assert_eq!(
                (content[p - 1], idx.symbols()[p - 1]),
                sxi[q - 1],
                "edge ({p}, {q}) connects different symbols"
            );
        }
    }

    #[test]
    fn reposition_fast_zero_errors_single_round() {
        let codec = FastCodec::new(8, 96, 48, 0.1, 21).unwrap();
        let combined = codec.combined();
        let received: Vec<(u64, u64)> = combined
            .sync()
            .iter()
            .copied()
            .zip(combined.ed().symbols().iter().copied())
            .collect();
        let guesses = reposition_fast(combined, &received, 1);
        for (j, g) in guesses.iter().enumerate() {
            assert_eq!(*g, PositionGuess::Pos(j + 1), "position {j}");
        }
    }

    #[test]
    fn reposition_fast_incorrect_guesses_within_summary_bound() {
        // Summary parameters: eps_I = 2 eps / 9, eps_s = eps^2 / 18,
        // K = 6 / eps, gamma = 1; incorrect guesses stay below n * eps.
        let eps = 0.75f64;
        let eps_i = 2.0 * eps / 9.0;
        let eps_s = eps * eps / 18.0;
        let k_rounds = (6.0 / eps).ceil() as usize;
        let ed = EdIndex::build(480, eps_i, 31).unwrap();
        let n = ed.n();
        let sync = gen_sync(n, eps_s, 32).unwrap().seq.flatten_dense();
        let ci = CombinedIndex::new(&sync, ed).unwrap();
        let full: Vec<(u64, u64)> = ci
            .sync()
            .iter()
            .copied()
            .zip(ci.ed().symbols().iter().copied())
            .collect();
        let q_ed = ci.ed().alphabet();
        let stream: Vec<u64> = full.iter().map(|&(s, e)| s * q_ed + e).collect();
        let alphabet = ci.q_sync() * q_ed;
        for seed in 0..10u64 {
            let budget = Budget::new(0.2, 1.0).unwrap();
            let script = random_adversary(stream.len(), alphabet, &budget, seed);
            let out = apply(&script, &stream).unwrap();
            let received: Vec<(u64, u64)> = out
                .output
                .iter()
                .map(|&v| (v / q_ed, v % q_ed))
                .collect();
            let guesses = reposition_fast(&ci, &received, k_rounds);
            let score = score_guesses(&guesses, &out.survivors);
            assert!(
                (score.incorrect as f64) <= n as f64 * eps,
                "seed {seed}: {} incorrect > n eps = {}",
                score.incorrect,
                n as f64 * eps
            );
        }
    }

    #[test]
    fn fast_codec_round_trips() {
        let codec = FastCodec::new(8, 100, 60, 0.08, 41).unwrap();
        let n = codec.n();
        let k = codec.k();
        let mut rng = rng_from_seed(6);
        let msg: Vec<u32> = (0..k).map(|_| rng.random_range(0..256)).collect();
        let word = codec.encode(&msg).unwrap();
        assert_eq!(word.len(), n);

        // Zero-error identity.
        let detail = codec.decode(&word);
        assert_eq!(detail.outcome.unwrap(), msg);

        // Monte-Carlo under the design budget (split across dels and ins).
        let budget = Budget::new(codec.delta() / 2.0, codec.delta() / 2.0).unwrap();
        for seed in 0..15u64 {
            let (stream, alphabet) = word.to_channel_stream().unwrap();
            let script = random_adversary(stream.len(), alphabet, &budget, seed);
            let out = apply(&script, &stream).unwrap();
            let received =
                FastWord::from_channel_stream(&out.output, word.q_msg, word.q_sync, word.q_ed);
            let detail = codec.decode(&received);
            assert_eq!(detail.outcome.unwrap(), msg, "seed {seed}");
        }
    }
}
