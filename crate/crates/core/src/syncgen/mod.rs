//! Construction of self-matching, synchronization, long-distance, and
//! infinite synchronization strings.
//!
//! Base strings come from rejection sampling (sample, then run the exact
//! verifier). Longer strings come from the square boosting step: an
//! eps-synchronization string of even length n and a rational gamma with
//! `gamma * n` integral yield an (eps + 6 gamma)-synchronization string of
//! length `gamma * n^2`. Boosting an all-distinct base with `gamma * n`
//! dividing n keeps the output all-distinct, which certifies the
//! synchronization property for every eps at once; that is how lengths beyond
//! the directly-verifiable range are produced.

pub mod text;

use std::collections::HashMap;
use std::fmt;

use crate::align::{self, AlignError, Sequence};
use crate::outercode::RsCode;
use crate::seed::{derive_seed, rng_from_seed};
use crate::util::{ceil_val, floor_frac};
use rand::Rng;

#[derive(Debug)]
pub enum GenError {
    BadParam(String),
    /// Rejection sampling used up its retry budget.
    RetriesExhausted { attempts: u32 },
    /// Construction exceeds what this desk-scale implementation supports.
    OutOfRange(String),
    Align(AlignError),
}

impl fmt::Display for GenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenError::BadParam(msg) => write!(f, "bad parameter: {msg}"),
            GenError::RetriesExhausted { attempts } => {
                write!(f, "generation failed after {attempts} sampling attempts")
            }
            GenError::OutOfRange(msg) => write!(f, "out of supported range: {msg}"),
            GenError::Align(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for GenError {}

impl From<AlignError> for GenError {
    fn from(e: AlignError) -> Self {
        GenError::Align(e)
    }
}

fn check_eps(eps: f64) -> Result<(), GenError> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(GenError::BadParam(format!("eps must lie in (0, 1), got {eps}")))
    }
}

/// Default number of fresh samples before generation gives up.
pub const DEFAULT_RETRY_CAP: u32 = 64;

/// Maximum length the base synchronization generator will verify directly.
pub const SYNC_BASE_MAX_LEN: usize = 128;

/// Alphabet used when sampling eps-self-matching strings: `ceil(2 e^2 / eps^2)`.
pub fn self_matching_alphabet(eps: f64) -> u64 {
    let e2 = std::f64::consts::E * std::f64::consts::E;
    ceil_val(2.0 * e2 / (eps * eps)).max(2)
}

/// Alphabet used when sampling eps-synchronization strings: `ceil(4 / eps^2)`.
pub fn sync_alphabet(eps: f64) -> u64 {
    ceil_val(4.0 / (eps * eps)).max(2)
}

fn sample_uniform(n: usize, q: u64, seed: u64) -> Sequence {
    let mut rng = rng_from_seed(seed);
    let symbols = (0..n).map(|_| rng.random_range(0..q)).collect();
    Sequence::new(symbols, q).expect("sampled symbols are in range")
}

/// Samples strings over the `self_matching_alphabet(eps)` alphabet until one
/// passes `verify_self_matching`.
pub fn gen_self_matching(n: usize, eps: f64, seed: u64) -> Result<Sequence, GenError> {
    gen_self_matching_with_cap(n, eps, seed, DEFAULT_RETRY_CAP)
}

pub fn gen_self_matching_with_cap(
    n: usize,
    eps: f64,
    seed: u64,
    cap: u32,
) -> Result<Sequence, GenError> {
    check_eps(eps)?;
    let q = self_matching_alphabet(eps);
    for attempt in 0..cap {
        let s = sample_uniform(n, q, derive_seed(seed, u64::from(attempt)));
        if align::verify_self_matching(&s, eps)? {
            return Ok(s);
        }
    }
    Err(GenError::RetriesExhausted { attempts: cap })
}

/// Samples strings over the `sync_alphabet(eps)` alphabet until one passes
/// `verify_sync`. Falls back to the all-distinct string `0, 1, .., n-1`
/// (which satisfies the property for every eps) when the alphabet is at
/// least n and sampling fails.
pub fn gen_sync_base(n: usize, eps: f64, seed: u64) -> Result<Sequence, GenError> {
    gen_sync_base_with_cap(n, eps, seed, DEFAULT_RETRY_CAP)
}

pub fn gen_sync_base_with_cap(
    n: usize,
    eps: f64,
    seed: u64,
    cap: u32,
) -> Result<Sequence, GenError> {
    check_eps(eps)?;
    if n == 0 || n > SYNC_BASE_MAX_LEN {
        return Err(GenError::BadParam(format!(
            "base generator supports 1 <= n <= {SYNC_BASE_MAX_LEN}, got {n}"
        )));
    }
    let q = sync_alphabet(eps);
    for attempt in 0..cap {
        let s = sample_uniform(n, q, derive_seed(seed, u64::from(attempt)));
        if align::verify_sync(&s, eps).is_none() {
            return Ok(s);
        }
    }
    if q >= n as u64 {
        let symbols = (0..n as u64).collect();
        return Ok(Sequence::new(symbols, q).expect("identity string is in range"));
    }
    Err(GenError::RetriesExhausted { attempts: cap })
}

/// A string whose symbols are tuples; stored column-wise as one [`Sequence`]
/// per component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductSequence {
    components: Vec<Sequence>,
}

impl ProductSequence {
    pub fn new(components: Vec<Sequence>) -> Result<Self, GenError> {
        if components.is_empty() {
            return Err(GenError::BadParam("product needs at least one component".into()));
        }
        let len = components[0].len();
        if components.iter().any(|c| c.len() != len) {
            return Err(GenError::BadParam("component lengths differ".into()));
        }
        Ok(Self { components })
    }

    pub fn len(&self) -> usize {
        self.components[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn arity(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Sequence] {
        &self.components
    }

    /// The i-th product symbol (0-based), one id per component.
    pub fn symbol(&self, i: usize) -> Vec<u64> {
        self.components.iter().map(|c| c.symbols()[i]).collect()
    }

    pub fn prefix(&self, n: usize) -> Self {
        let components = self
            .components
            .iter()
            .map(|c| {
                Sequence::new(c.symbols()[..n.min(c.len())].to_vec(), c.alphabet_size())
                    .expect("prefix keeps symbols in range")
            })
            .collect();
        Self { components }
    }

    /// True when no product symbol occurs twice.
    pub fn all_distinct(&self) -> bool {
        let mut seen = std::collections::HashSet::with_capacity(self.len());
        (0..self.len()).all(|i| seen.insert(self.symbol(i)))
    }

    /// Remaps the observed product symbols to dense ids in first-occurrence
    /// order. Equality of symbols is preserved, which is all the alignment
    /// and verification machinery depends on.
    pub fn flatten_dense(&self) -> Sequence {
        let mut ids: HashMap<Vec<u64>, u64> = HashMap::with_capacity(self.len());
        let mut symbols = Vec::with_capacity(self.len());
        for i in 0..self.len() {
            let next = ids.len() as u64;
            let id = *ids.entry(self.symbol(i)).or_insert(next);
            symbols.push(id);
        }
        let alphabet = (ids.len() as u64).max(1);
        Sequence::new(symbols, alphabet).expect("dense ids are in range")
    }
}

impl From<Sequence> for ProductSequence {
    fn from(s: Sequence) -> Self {
        Self { components: vec![s] }
    }
}

/// The square boosting step. Requires `|s|` even and `gamma * |s|` a positive
/// integer; produces a string of length `gamma * |s|^2` over the cubed
/// alphabet, with
/// `out[i] = (s[i mod n], s[(i + n/2) mod n], s[ceil(i / (gamma n))])`
/// (1-based third index as in the defining formula; internally 0-based).
pub fn boost_square(s: &ProductSequence, gamma: f64) -> Result<ProductSequence, GenError> {
    let n = s.len();
    if n == 0 || !n.is_multiple_of(2) {
        return Err(GenError::BadParam(format!(
            "boost input length must be positive and even, got {n}"
        )));
    }
    let gn = gamma * n as f64;
    let m = gn.round();
    if m < 1.0 || (gn - m).abs() > 1e-9 {
        return Err(GenError::BadParam(format!(
            "gamma * n must be a positive integer, got {gn}"
        )));
    }
    let m = m as usize;
    let out_len = m
        .checked_mul(n)
        .ok_or_else(|| GenError::OutOfRange("boosted length overflows".into()))?;

    let arity = s.arity();
    let mut out: Vec<Vec<u64>> = vec![Vec::with_capacity(out_len); 3 * arity];
    for i in 0..out_len {
        let a = i % n;
        let b = (i + n / 2) % n;
        let c = i / m; // == ceil((i+1) / (gamma n)) - 1
        for (comp_idx, comp) in s.components().iter().enumerate() {
            out[comp_idx].push(comp.symbols()[a]);
            out[arity + comp_idx].push(comp.symbols()[b]);
            out[2 * arity + comp_idx].push(comp.symbols()[c]);
        }
    }
    let components = out
        .into_iter()
        .enumerate()
        .map(|(idx, symbols)| {
            let alphabet = s.components()[idx % arity].alphabet_size();
            Sequence::new(symbols, alphabet).expect("boost keeps symbols in range")
        })
        .collect();
    ProductSequence::new(components)
}

/// How a synchronization string's property was established.
#[derive(Debug, Clone, PartialEq)]
pub enum SyncEvidence {
    /// Sampled and checked with the exact verifier.
    VerifiedDirect,
    /// All product symbols are distinct, which certifies every eps.
    AllDistinct,
    /// Built by boosting an all-distinct base; the output was re-checked to
    /// be all-distinct.
    BoostedAllDistinct { base_len: usize, gammas: Vec<f64> },
}

#[derive(Debug, Clone)]
pub struct SyncString {
    pub seq: ProductSequence,
    pub evidence: SyncEvidence,
}

/// General synchronization-string generator. Lengths up to
/// [`SYNC_BASE_MAX_LEN`] go through sample-and-verify; longer strings (or
/// small ones whose sampling budget runs out) are boosted from an
/// all-distinct base.
pub fn gen_sync(n: usize, eps: f64, seed: u64) -> Result<SyncString, GenError> {
    check_eps(eps)?;
    if n == 0 {
        return Err(GenError::BadParam("n must be positive".into()));
    }
    if n <= SYNC_BASE_MAX_LEN {
        match gen_sync_base(n, eps, seed) {
            Ok(s) => {
                let evidence = if s.all_distinct() {
                    SyncEvidence::AllDistinct
                } else {
                    SyncEvidence::VerifiedDirect
                };
                return Ok(SyncString {
                    seq: s.into(),
                    evidence,
                });
            }
            Err(GenError::RetriesExhausted { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    boosted_all_distinct(n)
}

fn boosted_all_distinct(n: usize) -> Result<SyncString, GenError> {
    let base_len: usize = 128;
    let base = Sequence::new((0..base_len as u64).collect(), base_len as u64)
        .expect("identity string is valid");
    let mut cur: ProductSequence = base.into();
    let mut gammas = Vec::new();
    while cur.len() < n {
        if gammas.len() >= 3 {
            return Err(GenError::OutOfRange(format!(
                "requested length {n} needs more than 3 boosting rounds"
            )));
        }
        let need = n.div_ceil(cur.len());
        // A power-of-two multiplier divides the (power-of-two) current
        // length, which keeps the boosted string all-distinct.
        let m = need.next_power_of_two().min(cur.len());
        let gamma = m as f64 / cur.len() as f64;
        cur = boost_square(&cur, gamma)?;
        gammas.push(gamma);
    }
    if !cur.all_distinct() {
        return Err(GenError::OutOfRange(
            "boosted string unexpectedly repeats a symbol".into(),
        ));
    }
    Ok(SyncString {
        seq: cur.prefix(n),
        evidence: SyncEvidence::BoostedAllDistinct {
            base_len,
            gammas,
        },
    })
}

/// Construction parameters recorded alongside long-distance strings.
#[derive(Debug, Clone, PartialEq)]
pub struct LongDistanceMeta {
    pub n: usize,
    pub block_len: usize,
    pub blocks: usize,
    pub k_inner: usize,
    pub inner_field_bits: u32,
    pub sm_eps: f64,
    pub t_len: usize,
}

impl fmt::Display for LongDistanceMeta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} N={} blocks={} k_inner={} field=GF(2^{}) sm_eps={} t_len={}",
            self.n,
            self.block_len,
            self.blocks,
            self.k_inner,
            self.inner_field_bits,
            self.sm_eps,
            self.t_len
        )
    }
}

#[derive(Debug, Clone)]
pub struct LongDistanceString {
    pub seq: ProductSequence,
    pub meta: LongDistanceMeta,
}

/// Block-length constant for the long-distance construction.
pub const LD_BLOCK_CONST: f64 = 4.0;

/// Encodes a block id into `k` field symbols, least significant first.
pub fn block_id_digits(id: usize, k: usize, field_bits: u32) -> Vec<u32> {
    let mask = (1u64 << field_bits) - 1;
    (0..k)
        .map(|d| {
            let shift = u64::from(field_bits) * d as u64;
            if shift >= 64 {
                0
            } else {
                ((id as u64 >> shift) & mask) as u32
            }
        })
        .collect()
}

/// Long-distance synchronization string: back-to-back codewords of an inner
/// insdel code (Reed-Solomon indexed by a self-matching string), interleaved
/// with two shifted repetitions of a short synchronization string.
pub fn build_long_distance(n: usize, eps: f64, seed: u64) -> Result<LongDistanceString, GenError> {
    check_eps(eps)?;
    let block_len = ceil_val(LD_BLOCK_CONST * (n.max(2) as f64).log2()).max(8) as usize;
    if n < block_len {
        return Err(GenError::BadParam(format!(
            "n ({n}) must be at least the block length N ({block_len})"
        )));
    }
    let blocks = n.div_ceil(block_len);

    // Inner Reed-Solomon over GF(2^16) with relative distance >= 1 - eps/2.
    let field_bits = 16u32;
    let k_inner = (floor_frac(block_len, eps / 2.0) + 1).min(block_len);
    if (blocks as u128) > (1u128 << (field_bits as usize * k_inner)) {
        return Err(GenError::OutOfRange(format!(
            "{blocks} blocks exceed the inner code's message space"
        )));
    }
    let rs = RsCode::new(field_bits, block_len, k_inner)
        .map_err(|e| GenError::OutOfRange(format!("inner code: {e}")))?;
    let codewords: Vec<Vec<u32>> = (0..blocks)
        .map(|b| {
            rs.encode(&block_id_digits(b, k_inner, field_bits))
                .expect("block id digits fit the field")
        })
        .collect();

    let sm_eps = eps / 4.0;
    let sm = gen_self_matching(block_len, sm_eps, derive_seed(seed, 1))?;

    // Short synchronization string for the T component, length Theta(log n).
    let mut t_len = (2 * ((n as f64).log2().ceil() as usize)).max(8);
    if t_len % 2 == 1 {
        t_len += 1;
    }
    t_len = t_len.min(SYNC_BASE_MAX_LEN);
    let t_base = gen_sync(t_len, eps, derive_seed(seed, 2))?;
    let t = t_base.seq.flatten_dense();

    let mut code_sym = Vec::with_capacity(n);
    let mut sm_sym = Vec::with_capacity(n);
    let mut t0 = Vec::with_capacity(n);
    let mut t1 = Vec::with_capacity(n);
    for i in 0..n {
        let b = i / block_len;
        let off = i % block_len;
        code_sym.push(u64::from(codewords[b][off]));
        sm_sym.push(sm.symbols()[off]);
        t0.push(t.symbols()[i % t_len]);
        t1.push(t.symbols()[(i + t_len / 2) % t_len]);
    }
    let components = vec![
        Sequence::new(code_sym, 1 << field_bits)?,
        Sequence::new(sm_sym, sm.alphabet_size())?,
        Sequence::new(t0, t.alphabet_size())?,
        Sequence::new(t1, t.alphabet_size())?,
    ];
    Ok(LongDistanceString {
        seq: ProductSequence::new(components)?,
        meta: LongDistanceMeta {
            n,
            block_len,
            blocks,
            k_inner,
            inner_field_bits: field_bits,
            sm_eps,
            t_len,
        },
    })
}

#[derive(Debug, Clone)]
pub struct LocalIndexString {
    pub seq: ProductSequence,
    pub meta: LongDistanceMeta,
    pub counter_modulus: u64,
}

/// The long-distance construction with an appended circular block counter of
/// modulus `ceil(8 / eps^3)`.
pub fn build_local_index(n: usize, eps: f64, seed: u64) -> Result<LocalIndexString, GenError> {
    let ld = build_long_distance(n, eps, seed)?;
    let modulus = ceil_val(8.0 / (eps * eps * eps)).max(2);
    let counter: Vec<u64> = (0..n)
        .map(|i| ((i / ld.meta.block_len) as u64) % modulus)
        .collect();
    let mut components = ld.seq.components().to_vec();
    components.push(Sequence::new(counter, modulus)?);
    Ok(LocalIndexString {
        seq: ProductSequence::new(components)?,
        meta: ld.meta,
        counter_modulus: modulus,
    })
}

/// Piece-length base of the infinite-string construction.
pub const INFINITE_K: u64 = 4;
pub(crate) const INFINITE_U_LANE: u64 = 0x5500_0000;
pub(crate) const INFINITE_V_LANE: u64 = 0x5600_0000;
const INFINITE_PIECE_CAP: u128 = 1 << 24;

fn infinite_stream(
    n: usize,
    eps: f64,
    seed: u64,
    first_exponent: u32,
    lane_base: u64,
) -> Result<Vec<u64>, GenError> {
    let mut out: Vec<u64> = Vec::with_capacity(n);
    let mut exponent = first_exponent;
    let mut piece_idx = 0u64;
    while out.len() < n {
        let m = (INFINITE_K as u128).pow(exponent);
        if m > INFINITE_PIECE_CAP {
            return Err(GenError::OutOfRange(format!(
                "infinite-string piece of length {m} exceeds the desk-scale cap"
            )));
        }
        let piece = gen_sync(m as usize, eps / 2.0, derive_seed(seed, lane_base + piece_idx))?;
        out.extend_from_slice(piece.seq.flatten_dense().symbols());
        exponent += 2;
        piece_idx += 1;
    }
    out.truncate(n);
    Ok(out)
}

/// First `n` symbols of the interleaved infinite synchronization string:
/// `T[i] = (U[i], V[i])` where U concatenates pieces of length k, k^3, k^5,..
/// and V pieces of length k^2, k^4, .. (k = 4, per-piece parameter eps/2).
pub fn infinite_prefix(n: usize, eps: f64, seed: u64) -> Result<ProductSequence, GenError> {
    check_eps(eps)?;
    if n == 0 {
        return Err(GenError::BadParam("n must be positive".into()));
    }
    let u = infinite_stream(n, eps, seed, 1, INFINITE_U_LANE)?;
    let v = infinite_stream(n, eps, seed, 2, INFINITE_V_LANE)?;
    let qa = u.iter().copied().max().unwrap_or(0) + 1;
    let qb = v.iter().copied().max().unwrap_or(0) + 1;
    ProductSequence::new(vec![Sequence::new(u, qa)?, Sequence::new(v, qb)?])
}
