//! Indexing-based insertion-deletion codecs.
//!
//! A message is zipped symbol-wise with a pseudo-random index string before
//! transmission. On receive, repositioning assigns each arriving symbol a
//! claimed original position by repeatedly matching the received index
//! components against the known index string; the repositioned word (with
//! multi-claimed or unclaimed slots marked as erasures) then goes through an
//! ordinary half-error outer code.

pub mod ssix;

use std::collections::BTreeSet;
use std::fmt;

use crate::align::{lcs_pairs, Sequence, SuffixDistance};
use crate::outercode::{list_recover_bruteforce, RecoveryInstance, RsCode, RsError};
use crate::syncgen::{gen_self_matching, GenError};
use crate::util::ceil_frac;

#[derive(Debug)]
pub enum CodecError {
    LengthMismatch { msg_len: usize, idx_len: usize },
    BadParam(String),
    Rs(RsError),
    Gen(GenError),
    Format(String),
}

impl fmt::Display for CodecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodecError::LengthMismatch { msg_len, idx_len } => {
                write!(f, "message length {msg_len} != index length {idx_len}")
            }
            CodecError::BadParam(msg) => write!(f, "bad parameter: {msg}"),
            CodecError::Rs(e) => write!(f, "outer code: {e}"),
            CodecError::Gen(e) => write!(f, "index generation: {e}"),
            CodecError::Format(msg) => write!(f, "format: {msg}"),
        }
    }
}

impl std::error::Error for CodecError {}

impl From<RsError> for CodecError {
    fn from(e: RsError) -> Self {
        CodecError::Rs(e)
    }
}

impl From<GenError> for CodecError {
    fn from(e: GenError) -> Self {
        CodecError::Gen(e)
    }
}

/// A sequence of (message symbol, index symbol) pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexedWord {
    msg: Vec<u64>,
    idx: Vec<u64>,
    q_msg: u64,
    q_idx: u64,
}

impl IndexedWord {
    pub fn new(msg: Vec<u64>, idx: Vec<u64>, q_msg: u64, q_idx: u64) -> Result<Self, CodecError> {
        if msg.len() != idx.len() {
            return Err(CodecError::LengthMismatch {
                msg_len: msg.len(),
                idx_len: idx.len(),
            });
        }
        if let Some(&bad) = msg.iter().find(|&&s| s >= q_msg) {
            return Err(CodecError::BadParam(format!(
                "message symbol {bad} outside alphabet {q_msg}"
            )));
        }
        if let Some(&bad) = idx.iter().find(|&&s| s >= q_idx) {
            return Err(CodecError::BadParam(format!(
                "index symbol {bad} outside alphabet {q_idx}"
            )));
        }
        Ok(Self {
            msg,
            idx,
            q_msg,
            q_idx,
        })
    }

    pub fn len(&self) -> usize {
        self.msg.len()
    }

    pub fn is_empty(&self) -> bool {
        self.msg.is_empty()
    }

    pub fn msg(&self) -> &[u64] {
        &self.msg
    }

    pub fn idx(&self) -> &[u64] {
        &self.idx
    }

    pub fn q_msg(&self) -> u64 {
        self.q_msg
    }

    pub fn q_idx(&self) -> u64 {
        self.q_idx
    }

    /// Flattens each pair to `m * q_idx + i` so the word can travel through
    /// the channel as a plain symbol stream.
    pub fn to_channel_stream(&self) -> Result<(Vec<u64>, u64), CodecError> {
        let alphabet = self
            .q_msg
            .checked_mul(self.q_idx)
            .ok_or_else(|| CodecError::BadParam("product alphabet overflows".into()))?;
        let stream = self
            .msg
            .iter()
            .zip(&self.idx)
            .map(|(&m, &i)| m * self.q_idx + i)
            .collect();
        Ok((stream, alphabet))
    }

    pub fn from_channel_stream(
        stream: &[u64],
        q_msg: u64,
        q_idx: u64,
    ) -> Result<Self, CodecError> {
        let mut msg = Vec::with_capacity(stream.len());
        let mut idx = Vec::with_capacity(stream.len());
        for &sym in stream {
            msg.push(sym / q_idx);
            idx.push(sym % q_idx);
        }
        Self::new(msg, idx, q_msg, q_idx)
    }
}

/// Symbol-wise pairing of a message with an index string.
pub fn index(m: &Sequence, s: &Sequence) -> Result<IndexedWord, CodecError> {
    IndexedWord::new(
        m.symbols().to_vec(),
        s.symbols().to_vec(),
        m.alphabet_size(),
        s.alphabet_size(),
    )
}

/// A decoder's claim about where a received symbol originated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PositionGuess {
    Undetermined,
    /// 1-based position in the sent word.
    Pos(usize),
}

/// Per-round matching record from the global repositioner.
#[derive(Debug, Clone)]
pub struct RepositionDetail {
    pub guesses: Vec<PositionGuess>,
    /// For each executed round, the matched (position in s, received index)
    /// pairs; positions 1-based, received indices 0-based.
    pub rounds: Vec<Vec<(usize, usize)>>,
}

/// Iterated LCS repositioning: each round matches the index string against
/// the still-unassigned received index symbols, assigns the matched symbols,
/// and removes them.
pub fn reposition_global(s: &Sequence, received_idx: &[u64], rounds: usize) -> Vec<PositionGuess> {
    reposition_global_detail(s, received_idx, rounds).guesses
}

pub fn reposition_global_detail(
    s: &Sequence,
    received_idx: &[u64],
    rounds: usize,
) -> RepositionDetail {
    let mut guesses = vec![PositionGuess::Undetermined; received_idx.len()];
    let mut active: Vec<(usize, u64)> = received_idx.iter().copied().enumerate().collect();
    let mut round_log = Vec::new();
    for _ in 0..rounds {
        if active.is_empty() {
            break;
        }
        let syms: Vec<u64> = active.iter().map(|&(_, sym)| sym).collect();
        let matching = lcs_pairs(s.symbols(), &syms);
        if matching.is_empty() {
            break;
        }
        let mut this_round = Vec::with_capacity(matching.len());
        let mut matched = vec![false; active.len()];
        for &(i, j) in matching.pairs() {
            let recv = active[j - 1].0;
            guesses[recv] = PositionGuess::Pos(i);
            matched[j - 1] = true;
            this_round.push((i, recv));
        }
        let mut keep = Vec::with_capacity(active.len() - this_round.len());
        for (slot, entry) in active.into_iter().enumerate() {
            if !matched[slot] {
                keep.push(entry);
            }
        }
        active = keep;
        round_log.push(this_round);
    }
    RepositionDetail {
        guesses,
        rounds: round_log,
    }
}

/// The repositioned word: per original position, the message symbol of its
/// unique claimant, or an erasure when there are zero or multiple claimants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReconstructedWord {
    slots: Vec<Option<u64>>,
}

impl ReconstructedWord {
    pub fn slots(&self) -> &[Option<u64>] {
        &self.slots
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn erasures(&self) -> usize {
        self.slots.iter().filter(|s| s.is_none()).count()
    }
}

pub fn reconstruct(
    guesses: &[PositionGuess],
    received_msg: &[u64],
    n: usize,
) -> ReconstructedWord {
    let mut claims: Vec<Option<(u64, u32)>> = vec![None; n];
    for (recv, guess) in guesses.iter().enumerate() {
        if let PositionGuess::Pos(p) = *guess {
            if p >= 1 && p <= n {
                let entry = claims[p - 1].get_or_insert((received_msg[recv], 0));
                entry.1 += 1;
                entry.0 = received_msg[recv];
            }
        }
    }
    let slots = claims
        .into_iter()
        .map(|c| match c {
            Some((sym, 1)) => Some(sym),
            _ => None,
        })
        .collect();
    ReconstructedWord { slots }
}

/// Scoring of position guesses against channel ground truth, restricted to
/// survivors (received symbols that were actually sent).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GuessScore {
    pub correct: usize,
    pub incorrect: usize,
    pub undetermined: usize,
}

pub fn score_guesses(guesses: &[PositionGuess], survivors: &[Option<usize>]) -> GuessScore {
    let mut score = GuessScore::default();
    for (guess, origin) in guesses.iter().zip(survivors) {
        let Some(orig) = origin else { continue };
        match guess {
            PositionGuess::Undetermined => score.undetermined += 1,
            PositionGuess::Pos(p) if p == orig => score.correct += 1,
            PositionGuess::Pos(_) => score.incorrect += 1,
        }
    }
    score
}

/// Design parameters of the unique-decoding pipeline and the quantities
/// derived from them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodecParams {
    pub delta: f64,
    pub eps: f64,
}

impl CodecParams {
    pub fn new(delta: f64, eps: f64) -> Result<Self, CodecError> {
        if !(0.0..1.0).contains(&delta) || eps <= 0.0 || delta + eps >= 1.0 {
            return Err(CodecError::BadParam(format!(
                "need 0 <= delta, 0 < eps, delta + eps < 1; got delta={delta} eps={eps}"
            )));
        }
        Ok(Self { delta, eps })
    }

    pub fn eps_c(&self) -> f64 {
        self.eps / 3.0
    }

    pub fn delta_c(&self) -> f64 {
        self.delta + self.eps / 3.0
    }

    pub fn eps_s(&self) -> f64 {
        (self.eps / 36.0).powi(2)
    }

    /// Default repositioning rounds, `ceil(1 / sqrt(eps_s))`.
    pub fn default_rounds(&self) -> usize {
        (1.0 / self.eps_s().sqrt() - 1e-9).ceil() as usize
    }
}

#[derive(Debug)]
pub enum DecodeFailure {
    Rs(RsError),
    /// The decoded codeword is not half-error-consistent with the
    /// repositioned word.
    ReencodeMismatch { half_errors: usize, budget: usize },
}

impl fmt::Display for DecodeFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecodeFailure::Rs(e) => write!(f, "{e}"),
            DecodeFailure::ReencodeMismatch {
                half_errors,
                budget,
            } => write!(
                f,
                "re-encoded answer is {half_errors} half-errors from the repositioned word (budget {budget})"
            ),
        }
    }
}

#[derive(Debug)]
pub struct DecodeDetail {
    pub guesses: Vec<PositionGuess>,
    pub reconstructed: ReconstructedWord,
    pub outcome: Result<Vec<u32>, DecodeFailure>,
}

/// The Singleton-bound-approaching unique codec: a Reed-Solomon outer code
/// indexed by a self-matching string.
#[derive(Debug, Clone)]
pub struct UniqueCodec {
    rs: RsCode,
    index: Sequence,
    params: CodecParams,
    rounds: usize,
}

impl UniqueCodec {
    /// Builds a codec from the outer-code geometry and the design distance.
    /// The gap parameter comes from the code's relative distance:
    /// `delta_C = delta + eps/3`, so `eps = 3 (delta_C - delta)`; the index
    /// string is sampled at `eps_s = (eps/36)^2`.
    pub fn new(
        field_bits: u32,
        n_code: usize,
        k_msg: usize,
        delta: f64,
        index_seed: u64,
    ) -> Result<Self, CodecError> {
        let rs = RsCode::new(field_bits, n_code, k_msg)?;
        let delta_c = rs.min_distance() as f64 / n_code as f64;
        let eps = 3.0 * (delta_c - delta);
        if eps <= 0.0 {
            return Err(CodecError::BadParam(format!(
                "design distance {delta} is not below the outer code's relative distance {delta_c:.4}"
            )));
        }
        let params = CodecParams::new(delta, eps)?;
        let index = gen_self_matching(n_code, params.eps_s(), index_seed)?;
        let rounds = params.default_rounds();
        Ok(Self {
            rs,
            index,
            params,
            rounds,
        })
    }

    /// The acceptance-scale preset: RS(200, 120) over GF(2^16), delta 0.25.
    pub fn desk_preset(index_seed: u64) -> Result<Self, CodecError> {
        Self::new(16, 200, 120, 0.25, index_seed)
    }

    pub fn with_rounds(mut self, rounds: usize) -> Self {
        self.rounds = rounds.max(1);
        self
    }

    pub fn rs(&self) -> &RsCode {
        &self.rs
    }

    pub fn index(&self) -> &Sequence {
        &self.index
    }

    pub fn params(&self) -> CodecParams {
        self.params
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn n(&self) -> usize {
        self.rs.n()
    }

    pub fn k(&self) -> usize {
        self.rs.k()
    }

    /// Bits of index alphabet per channel symbol.
    pub fn index_bits(&self) -> u32 {
        u64::BITS - (self.index.alphabet_size() - 1).leading_zeros()
    }

    /// Information rate `k * b / (n * (b + ceil(log2 q_idx)))` for a field of
    /// b bits.
    pub fn rate(&self) -> f64 {
        let bits = self.rs.field().bits() as f64;
        (self.rs.k() as f64 * bits) / (self.rs.n() as f64 * (bits + f64::from(self.index_bits())))
    }

    pub fn encode(&self, msg: &[u32]) -> Result<IndexedWord, CodecError> {
        let cw = self.rs.encode(msg)?;
        IndexedWord::new(
            cw.into_iter().map(u64::from).collect(),
            self.index.symbols().to_vec(),
            u64::from(self.rs.field().size()),
            self.index.alphabet_size(),
        )
    }

    pub fn decode(&self, received: &IndexedWord) -> DecodeDetail {
        let n = self.rs.n();
        let guesses = reposition_global(&self.index, received.idx(), self.rounds);
        let reconstructed = reconstruct(&guesses, received.msg(), n);
        let rs_input: Vec<Option<u32>> = reconstructed
            .slots()
            .iter()
            .map(|slot| slot.map(|sym| sym as u32))
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

/// Online repositioner: upon each arrival, reports the length of the index
/// prefix closest to the received prefix under relative suffix distance
/// (smallest index wins ties). Decisions are final.
pub struct OnlineRepositioner {
    s: Vec<u64>,
    received: Vec<u64>,
    guesses: Vec<usize>,
    prev_guess: usize,
    table: Vec<u32>,
}

impl OnlineRepositioner {
    pub fn new(s: &Sequence) -> Self {
        Self {
            s: s.symbols().to_vec(),
            received: Vec::new(),
            guesses: Vec::new(),
            prev_guess: 0,
            table: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.s.len()
    }

    pub fn guesses(&self) -> &[usize] {
        &self.guesses
    }

    /// Feeds one received index symbol; returns the 1-based position guess.
    pub fn push(&mut self, idx_symbol: u64) -> usize {
        self.received.push(idx_symbol);
        let n = self.s.len();
        let t = self.received.len();
        self.table.clear();
        self.table.resize((n + 1) * (t + 1), 0);

        // Prime the pruning bound with the expected next prefix.
        let prime = (self.prev_guess + 1).min(n).max(1);
        let bound = self
            .eval_prefix(prime, t, None)
            .expect("unbounded evaluation always completes");

        let mut best: Option<(SuffixDistance, usize)> = None;
        for i in 1..=n {
            // ED of whole strings is at least the length gap, so the RSD is
            // at least |i - t| / (2 max(i, t)); skip candidates that cannot
            // win.
            let low = SuffixDistance::new(i.abs_diff(t) as u64, 2 * i.max(t) as u64);
            match &best {
                Some((b, _)) if low >= *b => continue,
                None if low > bound => continue,
                _ => {}
            }
            let cutoff = match &best {
                Some((b, _)) => Cutoff::GreaterOrEqual(*b),
                None => Cutoff::Greater(bound),
            };
            if let Some(v) = self.eval_prefix(i, t, Some(cutoff)) {
                match &best {
                    Some((b, _)) if v >= *b => {}
                    _ => best = Some((v, i)),
                }
            }
        }
        let guess = best.map(|(_, i)| i).unwrap_or(prime);
        self.prev_guess = guess;
        self.guesses.push(guess);
        guess
    }

    /// RSD between s[1..i] and the current received prefix, computed
    /// incrementally in the suffix length k; aborts early (returning None)
    /// once the running maximum crosses the cutoff.
    fn eval_prefix(&mut self, i: usize, t: usize, cutoff: Option<Cutoff>) -> Option<SuffixDistance> {
        let w = t + 1;
        let table = &mut self.table;
        table[0] = 0;
        let mut run_max = SuffixDistance::ZERO;
        let kmax = i.max(t);
        for k in 1..=kmax {
            let a_hi = k.min(i);
            let b_hi = k.min(t);
            let prev_a = (k - 1).min(i);
            let prev_b = (k - 1).min(t);
            if a_hi > prev_a {
                // New row: x[a_hi] = s[i - a_hi].
                let xa = self.s[i - a_hi];
                table[a_hi * w] = a_hi as u32;
                for b in 1..=prev_b {
                    let cell = if xa == self.received[t - b] {
                        table[(a_hi - 1) * w + b - 1]
                    } else {
                        1 + table[(a_hi - 1) * w + b].min(table[a_hi * w + b - 1])
                    };
                    table[a_hi * w + b] = cell;
                }
            }
            if b_hi > prev_b {
                // New column: y[b_hi] = received[t - b_hi].
                let yb = self.received[t - b_hi];
                table[b_hi] = b_hi as u32;
                for a in 1..=prev_a {
                    let cell = if self.s[i - a] == yb {
                        table[(a - 1) * w + b_hi - 1]
                    } else {
                        1 + table[(a - 1) * w + b_hi].min(table[a * w + b_hi - 1])
                    };
                    table[a * w + b_hi] = cell;
                }
            }
            if a_hi > prev_a && b_hi > prev_b {
                let cell = if self.s[i - a_hi] == self.received[t - b_hi] {
                    table[(a_hi - 1) * w + b_hi - 1]
                } else {
                    1 + table[(a_hi - 1) * w + b_hi].min(table[a_hi * w + b_hi - 1])
                };
                table[a_hi * w + b_hi] = cell;
            }
            let diag = SuffixDistance::new(u64::from(table[a_hi * w + b_hi]), 2 * k as u64);
            if diag > run_max {
                run_max = diag;
            }
            if let Some(c) = &cutoff {
                if c.exceeded(&run_max) {
                    return None;
                }
            }
        }
        Some(run_max)
    }
}

enum Cutoff {
    /// Abort once running >= bound (a finished best exists; ties keep it).
    GreaterOrEqual(SuffixDistance),
    /// Abort once running > bound (only the priming bound exists; ties must
    /// still finish so an earlier index can claim them).
    Greater(SuffixDistance),
}

impl Cutoff {
    fn exceeded(&self, running: &SuffixDistance) -> bool {
        match self {
            Cutoff::GreaterOrEqual(b) => running >= b,
            Cutoff::Greater(b) => running > b,
        }
    }
}

/// Multi-round repositioning that collects, for every position of the sent
/// word, the received indices matched there across `k_rounds` rounds. No
/// received symbol is matched twice.
pub fn reposition_lists(
    s: &Sequence,
    received_idx: &[u64],
    k_rounds: usize,
) -> Vec<Vec<usize>> {
    let n = s.len();
    let mut lists: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut active: Vec<(usize, u64)> = received_idx.iter().copied().enumerate().collect();
    for _ in 0..k_rounds {
        if active.is_empty() {
            break;
        }
        let syms: Vec<u64> = active.iter().map(|&(_, sym)| sym).collect();
        let matching = lcs_pairs(s.symbols(), &syms);
        if matching.is_empty() {
            break;
        }
        let mut matched = vec![false; active.len()];
        for &(i, j) in matching.pairs() {
            lists[i - 1].push(active[j - 1].0);
            matched[j - 1] = true;
        }
        active = active
            .into_iter()
            .enumerate()
            .filter_map(|(slot, entry)| (!matched[slot]).then_some(entry))
            .collect();
    }
    lists
}

/// The list-decodable codec: the same indexing scheme feeding a brute-force
/// list-recoverable outer code.
#[derive(Debug, Clone)]
pub struct ListCodec {
    rs: RsCode,
    index: Sequence,
    delta: f64,
    gamma: f64,
    eps: f64,
    k_rounds: usize,
}

impl ListCodec {
    pub fn new(
        field_bits: u32,
        n_code: usize,
        k_msg: usize,
        delta: f64,
        gamma: f64,
        eps: f64,
        index_seed: u64,
    ) -> Result<Self, CodecError> {
        if delta < 0.0 || gamma < 0.0 || eps <= 0.0 || delta + eps / 4.0 >= 1.0 {
            return Err(CodecError::BadParam(format!(
                "need delta, gamma >= 0, eps > 0, delta + eps/4 < 1; got {delta}, {gamma}, {eps}"
            )));
        }
        let rs = RsCode::new(field_bits, n_code, k_msg)?;
        let eps_s = eps * eps / (64.0 * (1.0 + gamma));
        let index = gen_self_matching(n_code, eps_s, index_seed)?;
        let k_rounds = ceil_frac(1, 8.0 * (1.0 + gamma) / eps).max(1);
        Ok(Self {
            rs,
            index,
            delta,
            gamma,
            eps,
            k_rounds,
        })
    }

    /// The acceptance-scale preset: RS(8, 2) over GF(16).
    pub fn desk_preset(index_seed: u64) -> Result<Self, CodecError> {
        Self::new(4, 8, 2, 0.2, 1.5, 0.4, index_seed)
    }

    pub fn rs(&self) -> &RsCode {
        &self.rs
    }

    pub fn index(&self) -> &Sequence {
        &self.index
    }

    pub fn k_rounds(&self) -> usize {
        self.k_rounds
    }

    pub fn alpha(&self) -> f64 {
        1.0 - self.delta - self.eps / 4.0
    }

    pub fn budget(&self) -> (f64, f64) {
        (self.delta, self.gamma)
    }

    pub fn encode(&self, msg: &[u32]) -> Result<IndexedWord, CodecError> {
        let cw = self.rs.encode(msg)?;
        IndexedWord::new(
            cw.into_iter().map(u64::from).collect(),
            self.index.symbols().to_vec(),
            u64::from(self.rs.field().size()),
            self.index.alphabet_size(),
        )
    }

    /// Returns every message whose codeword is consistent with the received
    /// word at agreement `alpha = 1 - delta - eps/4`.
    pub fn decode(&self, received: &IndexedWord) -> Result<Vec<Vec<u32>>, CodecError> {
        let assignments = reposition_lists(&self.index, received.idx(), self.k_rounds);
        let q = u64::from(self.rs.field().size());
        let lists: Vec<BTreeSet<u32>> = assignments
            .iter()
            .map(|assigned| {
                assigned
                    .iter()
                    .map(|&recv| received.msg()[recv])
                    .filter(|&sym| sym < q)
                    .map(|sym| sym as u32)
                    .collect()
            })
            .collect();
        let instance = RecoveryInstance::new(lists, self.alpha())?;
        Ok(list_recover_bruteforce(&self.rs, &instance)?)
    }
}
