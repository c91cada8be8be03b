//! Budgeted adversarial insertion-deletion channel.
//!
//! Scripts operate on the evolving string: every position refers to the
//! string as it is when the op is applied. Applying a script also produces a
//! ground-truth survivor map so decoders can be scored against the true
//! origin of each received symbol. Budgets count `floor(delta * n)` deletions
//! and `floor(gamma * n)` insertions against the original length n.

use std::fmt;

use crate::align::lcs_len;
use crate::seed::rng_from_seed;
use crate::util::floor_frac;
use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Debug, Clone, PartialEq)]
pub enum ChannelError {
    BadParam(String),
    /// A script op referenced a position outside the current string.
    PositionOutOfRange { op_index: usize, pos: usize, len: usize },
    ParseError { line: usize, msg: String },
}

impl fmt::Display for ChannelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelError::BadParam(msg) => write!(f, "bad parameter: {msg}"),
            ChannelError::PositionOutOfRange { op_index, pos, len } => write!(
                f,
                "op {op_index} references position {pos} in a string of length {len}"
            ),
            ChannelError::ParseError { line, msg } => write!(f, "script line {line}: {msg}"),
        }
    }
}

impl std::error::Error for ChannelError {}

/// One edit on the current string; positions are 1-based.
/// `Insert { pos, .. }` places the new symbol so that it becomes position
/// `pos` afterwards (valid range `1..=len+1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EditOp {
    Delete { pos: usize },
    Insert { pos: usize, symbol: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EditScript {
    pub ops: Vec<EditOp>,
}

impl EditScript {
    pub fn deletions(&self) -> usize {
        self.ops
            .iter()
            .filter(|op| matches!(op, EditOp::Delete { .. }))
            .count()
    }

    pub fn insertions(&self) -> usize {
        self.ops.len() - self.deletions()
    }
}

/// Deletion and insertion fractions relative to the original length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Budget {
    pub delta_del: f64,
    pub gamma_ins: f64,
}

impl Budget {
    pub fn new(delta_del: f64, gamma_ins: f64) -> Result<Self, ChannelError> {
        if !(0.0..=1.0).contains(&delta_del) {
            return Err(ChannelError::BadParam(format!(
                "delta_del must lie in [0, 1], got {delta_del}"
            )));
        }
        if gamma_ins < 0.0 {
            return Err(ChannelError::BadParam(format!(
                "gamma_ins must be non-negative, got {gamma_ins}"
            )));
        }
        Ok(Self {
            delta_del,
            gamma_ins,
        })
    }

    pub fn max_deletions(&self, n: usize) -> usize {
        floor_frac(n, self.delta_del)
    }

    pub fn max_insertions(&self, n: usize) -> usize {
        floor_frac(n, self.gamma_ins)
    }
}

/// Result of applying a script: the output string plus, per output position,
/// the 1-based original position it survived from (`None` for insertions).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelOutput {
    pub output: Vec<u64>,
    pub survivors: Vec<Option<usize>>,
}

/// Applies `script` to `x`, tracking ground truth.
pub fn apply(script: &EditScript, x: &[u64]) -> Result<ChannelOutput, ChannelError> {
    let mut cur: Vec<(u64, Option<usize>)> = x
        .iter()
        .enumerate()
        .map(|(i, &sym)| (sym, Some(i + 1)))
        .collect();
    for (op_index, op) in script.ops.iter().enumerate() {
        match *op {
            EditOp::Delete { pos } => {
                if pos == 0 || pos > cur.len() {
                    return Err(ChannelError::PositionOutOfRange {
                        op_index,
                        pos,
                        len: cur.len(),
                    });
                }
                cur.remove(pos - 1);
            }
            EditOp::Insert { pos, symbol } => {
                if pos == 0 || pos > cur.len() + 1 {
                    return Err(ChannelError::PositionOutOfRange {
                        op_index,
                        pos,
                        len: cur.len(),
                    });
                }
                cur.insert(pos - 1, (symbol, None));
            }
        }
    }
    let (output, survivors) = cur.into_iter().unzip();
    Ok(ChannelOutput { output, survivors })
}

/// Uniformly random insertions and deletions filling the budget, with the op
/// order shuffled.
pub fn random_adversary(n: usize, alphabet: u64, budget: &Budget, seed: u64) -> EditScript {
    let dels = budget.max_deletions(n);
    let ins = budget.max_insertions(n);
    let mut rng = rng_from_seed(seed);
    let mut kinds: Vec<bool> = std::iter::repeat_n(true, dels)
        .chain(std::iter::repeat_n(false, ins))
        .collect();
    kinds.shuffle(&mut rng);
    let mut len = n;
    let mut ops = Vec::with_capacity(kinds.len());
    for is_del in kinds {
        if is_del {
            debug_assert!(len > 0, "deletion budget never exceeds current length");
            ops.push(EditOp::Delete {
                pos: rng.random_range(1..=len),
            });
            len -= 1;
        } else {
            ops.push(EditOp::Insert {
                pos: rng.random_range(1..=len + 1),
                symbol: rng.random_range(0..alphabet.max(1)),
            });
            len += 1;
        }
    }
    EditScript { ops }
}

/// Deletes every occurrence of the d least frequent symbol values, with d
/// maximal subject to the deletion budget. Ties between equally frequent
/// values are broken toward the smaller value. Deterministic.
pub fn least_frequent_attack(x: &[u64], q: u64, budget: &Budget) -> EditScript {
    let mut counts: std::collections::BTreeMap<u64, usize> = std::collections::BTreeMap::new();
    for &sym in x {
        *counts.entry(sym).or_insert(0) += 1;
    }
    let _ = q;
    let mut by_freq: Vec<(usize, u64)> = counts.into_iter().map(|(v, c)| (c, v)).collect();
    by_freq.sort_unstable();
    let mut remaining = budget.max_deletions(x.len());
    let mut doomed: std::collections::HashSet<u64> = std::collections::HashSet::new();
    for (count, value) in by_freq {
        if count <= remaining {
            remaining -= count;
            doomed.insert(value);
        } else {
            break;
        }
    }
    // Deleting from the highest original position downward keeps every
    // earlier position stable, so op positions equal original positions.
    let mut ops: Vec<EditOp> = x
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, sym)| doomed.contains(sym))
        .map(|(i, _)| EditOp::Delete { pos: i + 1 })
        .collect();
    ops.shrink_to_fit();
    EditScript { ops }
}

/// Pushes a binary string toward the alternating form by inserting the
/// complement between equal adjacent symbols (left to right, while the
/// insertion budget lasts), then extends the alternation at the end with any
/// leftover budget. With gamma = 1 the result alternates fully and contains
/// x as a subsequence.
pub fn periodic_insertion_attack(x: &[u64], budget: &Budget) -> Result<EditScript, ChannelError> {
    if x.iter().any(|&s| s > 1) {
        return Err(ChannelError::BadParam(
            "periodic insertion attack expects binary input".into(),
        ));
    }
    let mut remaining = budget.max_insertions(x.len());
    let mut ops = Vec::new();
    let mut inserted = 0usize;
    for i in 1..x.len() {
        if remaining == 0 {
            break;
        }
        if x[i] == x[i - 1] {
            // Current position of x[i] is i + 1 + inserted (1-based); the
            // complement goes right before it.
            ops.push(EditOp::Insert {
                pos: i + inserted + 1,
                symbol: 1 - x[i],
            });
            inserted += 1;
            remaining -= 1;
        }
    }
    let mut last = x.last().copied();
    let mut len = x.len() + inserted;
    while remaining > 0 {
        let sym = match last {
            Some(s) => 1 - s,
            None => 0,
        };
        ops.push(EditOp::Insert {
            pos: len + 1,
            symbol: sym,
        });
        last = Some(sym);
        len += 1;
        remaining -= 1;
    }
    Ok(EditScript { ops })
}

/// Deletes a contiguous run of `floor(delta * n)` symbols at a random start.
pub fn burst_deletion_attack(n: usize, budget: &Budget, seed: u64) -> EditScript {
    let dels = budget.max_deletions(n).min(n);
    if dels == 0 {
        return EditScript::default();
    }
    let mut rng = rng_from_seed(seed);
    let start = rng.random_range(1..=(n - dels + 1));
    // Deleting at a fixed position removes a contiguous run.
    EditScript {
        ops: vec![EditOp::Delete { pos: start }; dels],
    }
}

/// True iff some script within `budget` maps x to y, i.e.
/// `|x| - LCS <= floor(delta |x|)` and `|y| - LCS <= floor(gamma |x|)`.
pub fn verify_budget(x: &[u64], y: &[u64], budget: &Budget) -> bool {
    let l = lcs_len(x, y);
    x.len() - l <= budget.max_deletions(x.len()) && y.len() - l <= budget.max_insertions(x.len())
}

pub mod script_text {
    //! Script serialization: one op per line, `D <pos>` or `I <pos> <symbol>`
    //! with 1-based positions into the evolving string.

    use super::{ChannelError, EditOp, EditScript};

    pub fn render(script: &EditScript) -> String {
        let mut out = String::new();
        for op in &script.ops {
            match op {
                EditOp::Delete { pos } => out.push_str(&format!("D {pos}\n")),
                EditOp::Insert { pos, symbol } => out.push_str(&format!("I {pos} {symbol}\n")),
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<EditScript, ChannelError> {
        let mut ops = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut parts = trimmed.split_whitespace();
            let kind = parts.next().unwrap();
            let pos: usize = parts
                .next()
                .ok_or_else(|| ChannelError::ParseError {
                    line,
                    msg: "missing position".into(),
                })?
                .parse()
                .map_err(|_| ChannelError::ParseError {
                    line,
                    msg: "position is not an integer".into(),
                })?;
            match kind {
                "D" => ops.push(EditOp::Delete { pos }),
                "I" => {
                    let symbol: u64 = parts
                        .next()
                        .ok_or_else(|| ChannelError::ParseError {
                            line,
                            msg: "missing symbol".into(),
                        })?
                        .parse()
                        .map_err(|_| ChannelError::ParseError {
                            line,
                            msg: "symbol is not an integer".into(),
                        })?;
                    ops.push(EditOp::Insert { pos, symbol });
                }
                other => {
                    return Err(ChannelError::ParseError {
                        line,
                        msg: format!("unknown op {other:?}"),
                    })
                }
            }
            if parts.next().is_some() {
                return Err(ChannelError::ParseError {
                    line,
                    msg: "trailing tokens".into(),
                });
            }
        }
        Ok(EditScript { ops })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::align::edit_distance_symbols;
    use proptest::prelude::*;

    fn syms(s: &str) -> Vec<u64> {
        s.bytes().map(u64::from).collect()
    }

    fn bits(s: &str) -> Vec<u64> {
        s.bytes().map(|b| u64::from(b - b'0')).collect()
    }

    #[test]
    fn apply_examples() {
        let x = syms("abc");
        let out = apply(&EditScript::default(), &x).unwrap();
        assert_eq!(out.output, x);
        assert_eq!(out.survivors, vec![Some(1), Some(2), Some(3)]);

        let out = apply(
            &EditScript {
                ops: vec![EditOp::Delete { pos: 1 }],
            },
            &x,
        )
        .unwrap();
        assert_eq!(out.output, syms("bc"));
        assert_eq!(out.survivors, vec![Some(2), Some(3)]);

        // Step-by-step application oracle: "ab" -> insert 'x' at 2 -> "axb"
        // -> delete 1 -> "xb".
        let out = apply(
            &EditScript {
                ops: vec![
                    EditOp::Insert {
                        pos: 2,
                        symbol: u64::from(b'x'),
                    },
                    EditOp::Delete { pos: 1 },
                ],
            },
            &syms("ab"),
        )
        .unwrap();
        assert_eq!(out.output, syms("xb"));
        assert_eq!(out.survivors, vec![None, Some(2)]);

        assert!(matches!(
            apply(
                &EditScript {
                    ops: vec![EditOp::Delete { pos: 4 }]
                },
                &x
            ),
            Err(ChannelError::PositionOutOfRange { .. })
        ));
    }

    #[test]
    fn random_adversary_examples() {
        let zero = Budget::new(0.0, 0.0).unwrap();
        assert!(random_adversary(10, 4, &zero, 1).ops.is_empty());

        let all = Budget::new(1.0, 0.0).unwrap();
        let script = random_adversary(10, 4, &all, 2);
        let out = apply(&script, &[3u64; 10]).unwrap();
        assert!(out.output.is_empty());

        let b = Budget::new(0.2, 0.0).unwrap();
        let script = random_adversary(10, 4, &b, 3);
        assert!(script.deletions() <= 2);
        assert_eq!(script.insertions(), 0);
    }

    #[test]
    fn least_frequent_examples() {
        let b = Budget::new(0.5, 0.0).unwrap();
        let x = bits("0110");
        let script = least_frequent_attack(&x, 2, &b);
        let out = apply(&script, &x).unwrap();
        assert_eq!(out.output, bits("11"));

        // Uniform occupancy, delta = 1/q: exactly one value removed.
        let q = 4u64;
        let x: Vec<u64> = (0..20).map(|i| i % q).collect();
        let b = Budget::new(1.0 / q as f64, 0.0).unwrap();
        let script = least_frequent_attack(&x, q, &b);
        let out = apply(&script, &x).unwrap();
        let distinct: std::collections::HashSet<u64> = out.output.iter().copied().collect();
        assert_eq!(distinct.len(), 3);

        // delta = 1/2 over q = 4: at most 2 distinct values survive.
        let mut x = Vec::new();
        for i in 0..16u64 {
            x.push(i % 4);
        }
        let b = Budget::new(0.5, 0.0).unwrap();
        let out = apply(&least_frequent_attack(&x, 4, &b), &x).unwrap();
        let distinct: std::collections::HashSet<u64> = out.output.iter().copied().collect();
        assert!(distinct.len() <= 2);
    }

    #[test]
    fn least_frequent_at_half_plus_one_makes_binary_constant() {
        for seed in 0..20u64 {
            let mut rng = crate::seed::rng_from_seed(seed);
            let n = 24usize;
            let x: Vec<u64> = (0..n).map(|_| rng.random_range(0..2u64)).collect();
            let b = Budget::new(0.5 + 1.0 / n as f64, 0.0).unwrap();
            let out = apply(&least_frequent_attack(&x, 2, &b), &x).unwrap();
            let distinct: std::collections::HashSet<u64> = out.output.iter().copied().collect();
            assert!(distinct.len() <= 1, "seed {seed}");
        }
    }

    #[test]
    fn periodic_insertion_examples() {
        let b = Budget::new(0.0, 1.0).unwrap();
        let x = bits("00");
        let script = periodic_insertion_attack(&x, &b).unwrap();
        let out = apply(&script, &x).unwrap();
        assert_eq!(out.output.len(), 4);
        // x is a subsequence and y alternates.
        assert_eq!(lcs_len(&x, &out.output), x.len());
        assert!(out.output.windows(2).all(|w| w[0] != w[1]));
        assert_eq!(out.output, bits("0101"));

        // Already alternating: padded at the end, still alternating.
        let x = bits("0101");
        let out = apply(&periodic_insertion_attack(&x, &b).unwrap(), &x).unwrap();
        assert!(out.output.windows(2).all(|w| w[0] != w[1]));
        assert_eq!(&out.output[..4], x.as_slice());

        // gamma = 0: empty script.
        let none = Budget::new(0.0, 0.0).unwrap();
        assert!(periodic_insertion_attack(&x, &none).unwrap().ops.is_empty());

        assert!(periodic_insertion_attack(&[2], &b).is_err());
    }

    #[test]
    fn burst_deletes_contiguous_run() {
        let b = Budget::new(0.25, 0.0).unwrap();
        let x: Vec<u64> = (0..20).collect();
        let script = burst_deletion_attack(20, &b, 5);
        assert_eq!(script.deletions(), 5);
        let out = apply(&script, &x).unwrap();
        assert_eq!(out.output.len(), 15);
        // Survivor positions skip one contiguous block.
        let survivors: Vec<usize> = out.survivors.iter().map(|s| s.unwrap()).collect();
        let gaps: Vec<usize> = survivors.windows(2).map(|w| w[1] - w[0]).collect();
        assert_eq!(gaps.iter().filter(|&&g| g > 1).count(), 1);
    }

    #[test]
    fn script_text_round_trip() {
        let script = EditScript {
            ops: vec![
                EditOp::Delete { pos: 3 },
                EditOp::Insert { pos: 1, symbol: 42 },
            ],
        };
        let text = script_text::render(&script);
        assert_eq!(text, "D 3\nI 1 42\n");
        assert_eq!(script_text::parse(&text).unwrap(), script);
        assert!(script_text::parse("Q 1").is_err());
        assert!(script_text::parse("I 1").is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn generated_scripts_respect_their_budget(
            n in 1usize..40,
            delta in 0.0f64..1.0,
            gamma in 0.0f64..1.5,
            seed in 0u64..500,
        ) {
            let budget = Budget::new(delta, gamma).unwrap();
            let x: Vec<u64> = (0..n as u64).map(|i| i % 5).collect();
            let script = random_adversary(n, 5, &budget, seed);
            let out = apply(&script, &x).unwrap();
            prop_assert!(verify_budget(&x, &out.output, &budget));
            // ED never exceeds the op count.
            prop_assert!(edit_distance_symbols(&x, &out.output) <= script.ops.len());
        }

        #[test]
        fn named_attacks_respect_their_budget(
            n in 2usize..40,
            delta in 0.0f64..1.0,
            gamma in 0.0f64..1.5,
            seed in 0u64..100,
        ) {
            let budget = Budget::new(delta, gamma).unwrap();
            let x: Vec<u64> = {
                let mut rng = crate::seed::rng_from_seed(seed);
                (0..n).map(|_| rng.random_range(0..2u64)).collect()
            };
            for script in [
                least_frequent_attack(&x, 2, &budget),
                periodic_insertion_attack(&x, &budget).unwrap(),
                burst_deletion_attack(n, &budget, seed),
            ] {
                let out = apply(&script, &x).unwrap();
                prop_assert!(verify_budget(&x, &out.output, &budget));
            }
        }
    }
}
