//! One-way simulation of a substitution channel over an insertion-deletion
//! channel.
//!
//! The sender-side agent indexes each message symbol with the next symbol of
//! a synchronization string; the receiver-side agent repositions arrivals
//! online and reveals symbols to its endpoint strictly in order. A guess that
//! lands behind the revealed stream is dropped; a guess far ahead advances
//! the stream by at most two dummy symbols before the arrived symbol, so
//! corruption shows up to the endpoint as substitutions only.

use std::fmt;

use crate::align::Sequence;
use crate::codec::OnlineRepositioner;
use crate::seed::{derive_seed, rng_from_seed};
use crate::syncgen::{gen_sync, GenError};
use rand::Rng;

#[derive(Debug)]
pub enum ChanSimError {
    BadParam(String),
    /// The sender was stepped more than n times.
    StreamExhausted,
    Gen(GenError),
}

impl fmt::Display for ChanSimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChanSimError::BadParam(msg) => write!(f, "bad parameter: {msg}"),
            ChanSimError::StreamExhausted => write!(f, "sender already emitted n symbols"),
            ChanSimError::Gen(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ChanSimError {}

impl From<GenError> for ChanSimError {
    fn from(e: GenError) -> Self {
        ChanSimError::Gen(e)
    }
}

/// The dummy symbol revealed when the receiver advances over a gap; one past
/// the message alphabet, visible to the endpoint as a corruption.
pub fn dummy_symbol(q_msg: u64) -> u64 {
    q_msg
}

/// Default synchronization parameter for the session index string.
pub const DEFAULT_SYNC_EPS: f64 = 0.5;

#[derive(Debug, Clone)]
pub struct SimSender {
    sync: Vec<u64>,
    q_sync: u64,
    emitted: usize,
}

impl SimSender {
    pub fn new(sync: &Sequence) -> Self {
        Self {
            sync: sync.symbols().to_vec(),
            q_sync: sync.alphabet_size(),
            emitted: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.sync.len()
    }

    pub fn q_sync(&self) -> u64 {
        self.q_sync
    }

    /// Indexes the next message symbol; errors after n steps.
    pub fn step(&mut self, msg_symbol: u64) -> Result<(u64, u64), ChanSimError> {
        if self.emitted >= self.sync.len() {
            return Err(ChanSimError::StreamExhausted);
        }
        let wire = (msg_symbol, self.sync[self.emitted]);
        self.emitted += 1;
        Ok(wire)
    }
}

pub struct SimReceiver {
    repositioner: OnlineRepositioner,
    q_msg: u64,
    out_len: usize,
    n: usize,
}

impl SimReceiver {
    pub fn new(sync: &Sequence, q_msg: u64) -> Self {
        Self {
            repositioner: OnlineRepositioner::new(sync),
            q_msg,
            out_len: 0,
            n: sync.len(),
        }
    }

    pub fn out_len(&self) -> usize {
        self.out_len
    }

    /// Feeds one wire symbol; returns the symbols revealed to the endpoint
    /// (possibly none), in order, never exceeding n in total.
    pub fn step(&mut self, wire: (u64, u64)) -> Vec<u64> {
        let (msg, idx) = wire;
        let guess = self.repositioner.push(idx);
        if guess <= self.out_len {
            // Late arrival: the stream has already moved past this position.
            return Vec::new();
        }
        let mut revealed = Vec::new();
        let gap = guess - self.out_len - 1;
        for _ in 0..gap.min(2) {
            if self.out_len >= self.n {
                return revealed;
            }
            revealed.push(dummy_symbol(self.q_msg));
            self.out_len += 1;
        }
        if self.out_len < self.n {
            revealed.push(msg);
            self.out_len += 1;
        }
        revealed
    }
}

/// Outcome of a full simulated session, scored against the sent stream.
#[derive(Debug, Clone)]
pub struct SimReport {
    pub sent: Vec<u64>,
    pub revealed: Vec<u64>,
    /// Positions i (0-based) with `revealed[i] != sent[i]`, plus every sent
    /// position that was never revealed.
    pub corrupted_positions: usize,
    pub channel_edits: usize,
}

impl SimReport {
    pub fn corrupted_fraction(&self) -> f64 {
        if self.sent.is_empty() {
            0.0
        } else {
            self.corrupted_positions as f64 / self.sent.len() as f64
        }
    }
}

/// Runs one session: random message stream, a deletion-only channel at rate
/// `delta`, and the agent pair around it.
pub fn run_session(
    n: usize,
    q_msg: u64,
    delta: f64,
    eps: f64,
    seed: u64,
) -> Result<SimReport, ChanSimError> {
    if n == 0 || q_msg == 0 {
        return Err(ChanSimError::BadParam("n and q_msg must be positive".into()));
    }
    let sync = gen_sync(n, eps, derive_seed(seed, 1))?.seq.flatten_dense();
    let mut rng = rng_from_seed(derive_seed(seed, 2));
    let sent: Vec<u64> = (0..n).map(|_| rng.random_range(0..q_msg)).collect();

    let mut sender = SimSender::new(&sync);
    let mut receiver = SimReceiver::new(&sync, q_msg);

    // Deletion-only channel: each wire symbol independently survives; the
    // total deletion count is fixed at floor(delta * n) with positions drawn
    // without replacement.
    let dels = crate::util::floor_frac(n, delta);
    let mut doomed: Vec<usize> = (0..n).collect();
    for i in 0..dels {
        let j = rng.random_range(i..n);
        doomed.swap(i, j);
    }
    let doomed: std::collections::HashSet<usize> = doomed[..dels].iter().copied().collect();

    let mut revealed = Vec::with_capacity(n);
    for (t, &msg) in sent.iter().enumerate() {
        let wire = sender.step(msg)?;
        if doomed.contains(&t) {
            continue;
        }
        revealed.extend(receiver.step(wire));
    }

    let corrupted = (0..n)
        .filter(|&i| revealed.get(i) != Some(&sent[i]))
        .count();
    Ok(SimReport {
        sent,
        revealed,
        corrupted_positions: corrupted,
        channel_edits: dels,
    })
}
