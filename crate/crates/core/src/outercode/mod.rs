//! Half-error outer codes and the Bukh-Ma insdel family: Reed-Solomon with
//! errors-and-erasures decoding, brute-force list recovery over small codes,
//! and exact list decoding of Bukh-Ma oscillation codewords.

mod bukhma;
mod gf;
mod listrec;
mod rs;

pub use bukhma::{bukh_ma_generate, bukh_ma_list_decode, BukhMaError, BukhMaFamily};
pub use gf::{GaloisField, GfError};
pub use listrec::{list_recover_bruteforce, RecoveryInstance, LIST_RECOVERY_SEARCH_BOUND};
pub use rs::{RsCode, RsError};
