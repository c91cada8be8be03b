//! Brute-force list recovery for small Reed-Solomon codes: enumerate the
//! whole message space and keep the codewords that agree with enough of the
//! per-position candidate lists.

use std::collections::BTreeSet;

use super::rs::{RsCode, RsError};
use crate::util::ceil_frac;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Per-position candidate sets plus the required agreement fraction.
#[derive(Debug, Clone)]
pub struct RecoveryInstance {
    pub lists: Vec<BTreeSet<u32>>,
    pub alpha: f64,
}

impl RecoveryInstance {
    pub fn new(lists: Vec<BTreeSet<u32>>, alpha: f64) -> Result<Self, RsError> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(RsError::BadParams(format!(
                "alpha must lie in (0, 1], got {alpha}"
            )));
        }
        Ok(Self { lists, alpha })
    }
}

/// Largest message space the exhaustive search accepts.
pub const LIST_RECOVERY_SEARCH_BOUND: u128 = 1_000_000;

/// Returns exactly the messages whose codewords agree with the lists in at
/// least `ceil(alpha * n)` positions.
pub fn list_recover_bruteforce(
    code: &RsCode,
    instance: &RecoveryInstance,
) -> Result<Vec<Vec<u32>>, RsError> {
    if instance.lists.len() != code.n() {
        return Err(RsError::BadParams(format!(
            "{} lists for block length {}",
            instance.lists.len(),
            code.n()
        )));
    }
    let q = u128::from(code.field().size());
    let space = q.checked_pow(code.k() as u32);
    match space {
        Some(m) if m <= LIST_RECOVERY_SEARCH_BOUND => {}
        _ => {
            return Err(RsError::BadParams(format!(
                "message space q^k exceeds the search bound {LIST_RECOVERY_SEARCH_BOUND}"
            )))
        }
    }
    let space = space.unwrap() as u64;
    let need = ceil_frac(code.n(), instance.alpha).max(1);

    let check = |m_index: u64| -> Option<Vec<u32>> {
        let msg = index_to_message(m_index, code.k(), code.field().size());
        let cw = code.encode(&msg).expect("enumerated message is in range");
        let agree = cw
            .iter()
            .zip(&instance.lists)
            .filter(|(sym, list)| list.contains(sym))
            .count();
        (agree >= need).then_some(msg)
    };

    #[cfg(feature = "parallel")]
    let found: Vec<Vec<u32>> = (0..space).into_par_iter().filter_map(check).collect();
    #[cfg(not(feature = "parallel"))]
    let found: Vec<Vec<u32>> = (0..space).filter_map(check).collect();

    Ok(found)
}

fn index_to_message(mut idx: u64, k: usize, q: u32) -> Vec<u32> {
    let q = u64::from(q);
    (0..k)
        .map(|_| {
            let digit = (idx % q) as u32;
            idx /= q;
            digit
        })
        .collect()
}
