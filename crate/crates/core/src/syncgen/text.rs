//! Text string format: a single line of comma-separated decimal symbol ids,
//! with product symbols written as colon-joined components (e.g. "3:1:7").
//! Positions are 1-based wherever the surrounding tooling reports them.

use super::{GenError, ProductSequence};
use crate::align::Sequence;

#[derive(Debug, Clone)]
pub enum TextString {
    Flat(Sequence),
    Product(ProductSequence),
}

impl TextString {
    pub fn len(&self) -> usize {
        match self {
            TextString::Flat(s) => s.len(),
            TextString::Product(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Equality-preserving flat view for the verifiers.
    pub fn to_dense(&self) -> Sequence {
        match self {
            TextString::Flat(s) => s.clone(),
            TextString::Product(p) => p.flatten_dense(),
        }
    }
}

pub fn render_flat(s: &Sequence) -> String {
    s.symbols()
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

pub fn render_product(p: &ProductSequence) -> String {
    (0..p.len())
        .map(|i| {
            p.symbol(i)
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(":")
        })
        .collect::<Vec<_>>()
        .join(",")
}

pub fn render(ts: &TextString) -> String {
    match ts {
        TextString::Flat(s) => render_flat(s),
        TextString::Product(p) => render_product(p),
    }
}

/// Parses one line of the text format. The alphabet size of each component is
/// inferred as `max id + 1`.
pub fn parse(line: &str) -> Result<TextString, GenError> {
    let line = line.trim();
    if line.is_empty() {
        return Ok(TextString::Flat(
            Sequence::new(Vec::new(), 1).expect("empty sequence is valid"),
        ));
    }
    let tokens: Vec<&str> = line.split(',').collect();
    let arity = tokens[0].split(':').count();
    let mut columns: Vec<Vec<u64>> = vec![Vec::with_capacity(tokens.len()); arity];
    for (pos, token) in tokens.iter().enumerate() {
        let parts: Vec<&str> = token.split(':').collect();
        if parts.len() != arity {
            return Err(GenError::BadParam(format!(
                "symbol {} has {} components, expected {arity}",
                pos + 1,
                parts.len()
            )));
        }
        for (c, part) in parts.iter().enumerate() {
            let v: u64 = part.trim().parse().map_err(|_| {
                GenError::BadParam(format!("symbol {} is not a decimal id: {part:?}", pos + 1))
            })?;
            columns[c].push(v);
        }
    }
    let components: Result<Vec<Sequence>, GenError> = columns
        .into_iter()
        .map(|col| {
            let alphabet = col.iter().copied().max().unwrap_or(0) + 1;
            Sequence::new(col, alphabet).map_err(GenError::from)
        })
        .collect();
    let components = components?;
    if arity == 1 {
        Ok(TextString::Flat(components.into_iter().next().unwrap()))
    } else {
        Ok(TextString::Product(ProductSequence::new(components)?))
    }
}
