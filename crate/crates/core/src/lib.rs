//! Synchronization strings and the insertion-deletion codecs built on them.
//!
//! The crate is organized around a small set of string primitives:
//!
//! - [`align`]: edit distance, LCS matchings, relative suffix distance, and
//!   the verifiers for self-matching / synchronization / long-distance
//!   string properties.
//! - [`syncgen`]: constructions of those strings (sample-and-verify plus the
//!   square boosting step, long-distance and locally-indexable variants, and
//!   prefixes of an infinite synchronization string).
//! - [`outercode`]: Reed-Solomon errors-and-erasures decoding, brute-force
//!   list recovery, and the Bukh-Ma oscillation code family.
//! - [`channel`]: a budgeted adversarial insertion-deletion channel with
//!   named attack strategies and exact budget verification.
//! - [`codec`]: the indexing-based insdel codecs: global repositioning,
//!   a unique-decoding pipeline, an online (per-arrival) repositioner, and a
//!   list-decoding pipeline.
//! - [`edindex`]: an edit-distance-approximating index and the fast
//!   repositioning / codec variant built from it.
//! - [`chansim`]: one-way simulation of a substitution channel over an
//!   insdel channel.
//!
//! All positions exposed by public types are 1-based. All randomness flows
//! from explicit 64-bit seeds through ChaCha8 (see [`seed`]), so every
//! operation is reproducible.
//!
//! The `parallel` feature (on by default) parallelizes the data-parallel
//! inner loops with rayon; disabling it yields a dependency-free sequential
//! build with identical results.

pub mod align;
pub mod chansim;
pub mod channel;
pub mod codec;
pub mod edindex;
pub mod outercode;
pub mod seed;
pub mod syncgen;

pub(crate) mod util;
