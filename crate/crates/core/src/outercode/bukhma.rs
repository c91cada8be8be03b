//! The Bukh-Ma family of binary oscillation codewords `(0^r 1^r)^{n/2r}` at
//! geometrically spaced periods, with exact brute-force insdel list decoding.

use std::fmt;

use crate::align::lcs_len;
use crate::util::ceil_val;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq)]
pub enum BukhMaError {
    BadParam(String),
}

impl fmt::Display for BukhMaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BukhMaError::BadParam(msg) => write!(f, "bad parameter: {msg}"),
        }
    }
}

impl std::error::Error for BukhMaError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BukhMaFamily {
    n: usize,
    periods: Vec<usize>,
}

impl BukhMaFamily {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn periods(&self) -> &[usize] {
        &self.periods
    }

    /// The codeword `(0^r 1^r)^(n/2r)` truncated to length n.
    pub fn codeword(&self, period: usize) -> Vec<u64> {
        (0..self.n).map(|i| ((i / period) % 2) as u64).collect()
    }
}

/// Periods `ceil((1/eps^4)^k)` for `(1/eps^4)^k < n`, clamped to `n/2` and
/// deduplicated.
pub fn bukh_ma_generate(n: usize, eps: f64) -> Result<BukhMaFamily, BukhMaError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(BukhMaError::BadParam(format!("eps must lie in (0,1), got {eps}")));
    }
    let base = 1.0 / eps.powi(4);
    if base < 2.0 {
        return Err(BukhMaError::BadParam(format!(
            "1/eps^4 must be at least 2, got {base}"
        )));
    }
    if n < 2 {
        return Err(BukhMaError::BadParam(format!("n must be at least 2, got {n}")));
    }
    let mut periods = Vec::new();
    let mut r = 1.0f64;
    while r < n as f64 {
        let period = (ceil_val(r) as usize).min(n / 2).max(1);
        if periods.last() != Some(&period) {
            periods.push(period);
        }
        r *= base;
    }
    Ok(BukhMaFamily { n, periods })
}

/// Exact brute force over the family: every codeword c with
/// `n - LCS(c, y) <= delta * n` and `|y| - LCS(c, y) <= gamma * n`.
pub fn bukh_ma_list_decode(
    y: &[u64],
    family: &BukhMaFamily,
    delta: f64,
    gamma: f64,
) -> Vec<usize> {
    let n = family.n() as f64;
    let scan = |&period: &usize| -> Option<usize> {
        let c = family.codeword(period);
        let l = lcs_len(&c, y);
        let dels = (family.n() - l) as f64;
        let ins = (y.len() - l) as f64;
        (dels <= delta * n + 1e-9 && ins <= gamma * n + 1e-9).then_some(period)
    };

    #[cfg(feature = "parallel")]
    let list: Vec<usize> = family.periods().par_iter().filter_map(scan).collect();
    #[cfg(not(feature = "parallel"))]
    let list: Vec<usize> = family.periods().iter().filter_map(scan).collect();

    let mut list = list;
    list.sort_unstable();
    list
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> Vec<u64> {
        s.bytes().map(|b| u64::from(b - b'0')).collect()
    }

    #[test]
    fn codeword_expansion() {
        let fam = BukhMaFamily {
            n: 8,
            periods: vec![2, 4],
        };
        assert_eq!(fam.codeword(2), bits("00110011"));
        assert_eq!(fam.codeword(4), bits("00001111"));
    }

    #[test]
    fn period_rule() {
        // Independent evaluation of the rounding rule: powers of 1/eps^4
        // below n, each ceiled then clamped to n/2, deduplicated.
        let independent = |n: usize, eps: f64| -> Vec<usize> {
            let base = 1.0 / eps.powi(4);
            let mut out: Vec<usize> = Vec::new();
            let mut k = 0u32;
            loop {
                let r = base.powi(k as i32);
                if r >= n as f64 {
                    break;
                }
                let p = ((r - 1e-9).ceil() as usize).clamp(1, n / 2);
                if out.last() != Some(&p) {
                    out.push(p);
                }
                k += 1;
            }
            out
        };
        let fam = bukh_ma_generate(256, 0.7).unwrap();
        assert_eq!(fam.periods(), independent(256, 0.7).as_slice());
        assert_eq!(fam.periods(), &[1, 5, 18, 73]);

        let fam = bukh_ma_generate(4096, 0.5).unwrap();
        assert_eq!(fam.periods(), &[1, 16, 256]);
    }

    #[test]
    fn bad_params() {
        assert!(bukh_ma_generate(8, 0.95).is_err()); // 1/eps^4 < 2
        assert!(bukh_ma_generate(8, 1.5).is_err());
        assert!(bukh_ma_generate(1, 0.5).is_err());
    }

    #[test]
    fn exact_decode_with_zero_budget() {
        let fam = bukh_ma_generate(64, 0.5).unwrap();
        for &p in fam.periods() {
            let y = fam.codeword(p);
            assert_eq!(bukh_ma_list_decode(&y, &fam, 0.0, 0.0), vec![p]);
        }
    }

    #[test]
    fn empty_received_with_full_deletion_budget_matches_everything() {
        let fam = bukh_ma_generate(64, 0.5).unwrap();
        let list = bukh_ma_list_decode(&[], &fam, 1.0, 0.0);
        assert_eq!(list, fam.periods());
    }
}
