//! SSIX codeword binary format.
//!
//! Layout (byte-exact): magic "SSIX", version byte 0x01, big-endian u32
//! fields n, q_msg, q_idx, then n pairs of big-endian u32 symbols
//! (msg, idx).

use super::{CodecError, IndexedWord};

pub const MAGIC: [u8; 4] = *b"SSIX";
pub const VERSION: u8 = 0x01;

pub fn write(word: &IndexedWord) -> Result<Vec<u8>, CodecError> {
    let n = u32::try_from(word.len())
        .map_err(|_| CodecError::Format("length exceeds u32".into()))?;
    let q_msg = u32::try_from(word.q_msg())
        .map_err(|_| CodecError::Format("q_msg exceeds u32".into()))?;
    let q_idx = u32::try_from(word.q_idx())
        .map_err(|_| CodecError::Format("q_idx exceeds u32".into()))?;
    let mut out = Vec::with_capacity(17 + 8 * word.len());
    out.extend_from_slice(&MAGIC);
    out.push(VERSION);
    out.extend_from_slice(&n.to_be_bytes());
    out.extend_from_slice(&q_msg.to_be_bytes());
    out.extend_from_slice(&q_idx.to_be_bytes());
    for (&m, &i) in word.msg().iter().zip(word.idx()) {
        out.extend_from_slice(&(m as u32).to_be_bytes());
        out.extend_from_slice(&(i as u32).to_be_bytes());
    }
    Ok(out)
}

pub fn read(bytes: &[u8]) -> Result<IndexedWord, CodecError> {
    if bytes.len() < 17 {
        return Err(CodecError::Format("truncated header".into()));
    }
    if bytes[..4] != MAGIC {
        return Err(CodecError::Format("bad magic".into()));
    }
    if bytes[4] != VERSION {
        return Err(CodecError::Format(format!("unsupported version {}", bytes[4])));
    }
    let word = |at: usize| -> u32 { u32::from_be_bytes(bytes[at..at + 4].try_into().unwrap()) };
    let n = word(5) as usize;
    let q_msg = u64::from(word(9));
    let q_idx = u64::from(word(13));
    if bytes.len() != 17 + 8 * n {
        return Err(CodecError::Format(format!(
            "expected {} bytes for n = {n}, got {}",
            17 + 8 * n,
            bytes.len()
        )));
    }
    let mut msg = Vec::with_capacity(n);
    let mut idx = Vec::with_capacity(n);
    for p in 0..n {
        msg.push(u64::from(word(17 + 8 * p)));
        idx.push(u64::from(word(21 + 8 * p)));
    }
    IndexedWord::new(msg, idx, q_msg, q_idx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_bytes() {
        let word = IndexedWord::new(vec![1, 258], vec![7, 0], 1024, 8).unwrap();
        let bytes = write(&word).unwrap();
        let expected: Vec<u8> = [
            b"SSIX".as_slice(),
            &[0x01],
            &2u32.to_be_bytes(),    // n
            &1024u32.to_be_bytes(), // q_msg
            &8u32.to_be_bytes(),    // q_idx
            &1u32.to_be_bytes(),
            &7u32.to_be_bytes(),
            &258u32.to_be_bytes(),
            &0u32.to_be_bytes(),
        ]
        .concat();
        assert_eq!(bytes, expected);
        assert_eq!(read(&bytes).unwrap(), word);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(read(b"SSIX").is_err());
        let word = IndexedWord::new(vec![1], vec![2], 4, 4).unwrap();
        let mut bytes = write(&word).unwrap();
        bytes[0] = b'X';
        assert!(read(&bytes).is_err());
        let mut bytes = write(&word).unwrap();
        bytes[4] = 0x02;
        assert!(read(&bytes).is_err());
        let mut bytes = write(&word).unwrap();
        bytes.pop();
        assert!(read(&bytes).is_err());
    }
}
