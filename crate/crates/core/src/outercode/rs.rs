//! Systematic Reed-Solomon codes with errors-and-erasures decoding.
//!
//! Codewords are polynomials divisible by the generator
//! `G(x) = prod_{i=0}^{n-k-1} (x - alpha^i)`; position j of a length-n word
//! holds the coefficient of `x^{n-1-j}` (message symbols first). Decoding is
//! Berlekamp-Massey over Forney syndromes, so a mix of e errors and s
//! erasures is uniquely corrected whenever `2e + s <= n - k`.

use std::fmt;

use super::gf::{GaloisField, GfError};

#[derive(Debug, Clone, PartialEq)]
pub enum RsError {
    BadParams(String),
    Field(GfError),
    /// Corruption exceeded the half-error budget (or produced an
    /// inconsistent locator).
    TooManyErrors,
}

impl fmt::Display for RsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RsError::BadParams(msg) => write!(f, "bad code parameters: {msg}"),
            RsError::Field(e) => write!(f, "{e}"),
            RsError::TooManyErrors => write!(f, "too many errors to correct"),
        }
    }
}

impl std::error::Error for RsError {}

impl From<GfError> for RsError {
    fn from(e: GfError) -> Self {
        RsError::Field(e)
    }
}

#[derive(Debug, Clone)]
pub struct RsCode {
    field: GaloisField,
    n: usize,
    k: usize,
    /// Generator polynomial, big-endian (leading coefficient first, monic).
    gpoly: Vec<u32>,
}

impl RsCode {
    pub fn new(field_bits: u32, n: usize, k: usize) -> Result<Self, RsError> {
        let field = GaloisField::new(field_bits)?;
        if k == 0 || k >= n {
            return Err(RsError::BadParams(format!("need 0 < k < n, got n={n} k={k}")));
        }
        if n > (field.size() - 1) as usize {
            return Err(RsError::BadParams(format!(
                "block length {n} exceeds q - 1 = {}",
                field.size() - 1
            )));
        }
        // G(x) = prod (x - alpha^i), built up factor by factor.
        let mut gpoly = vec![1u32];
        for i in 0..(n - k) as u64 {
            let root = field.alpha_pow(i);
            let mut next = vec![0u32; gpoly.len() + 1];
            for (j, &c) in gpoly.iter().enumerate() {
                next[j] ^= c; // times x
                next[j + 1] ^= field.mul(c, root); // times root (minus == plus)
            }
            gpoly = next;
        }
        Ok(Self { field, n, k, gpoly })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    /// Minimum Hamming distance, `n - k + 1` (MDS).
    pub fn min_distance(&self) -> usize {
        self.n - self.k + 1
    }

    fn nk(&self) -> usize {
        self.n - self.k
    }

    fn check_symbol(&self, v: u32) -> Result<(), RsError> {
        if v >= self.field.size() {
            Err(RsError::BadParams(format!(
                "symbol {v} outside GF(2^{})",
                self.field.bits()
            )))
        } else {
            Ok(())
        }
    }

    /// Systematic encoding: the codeword is the message followed by the
    /// remainder of `m(x) * x^{n-k}` under the generator polynomial.
    pub fn encode(&self, msg: &[u32]) -> Result<Vec<u32>, RsError> {
        if msg.len() != self.k {
            return Err(RsError::BadParams(format!(
                "message length {} != k = {}",
                msg.len(),
                self.k
            )));
        }
        for &m in msg {
            self.check_symbol(m)?;
        }
        let mut buf = vec![0u32; self.n];
        buf[..self.k].copy_from_slice(msg);
        // Synthetic division by the monic generator; remainder lands in the
        // parity tail.
        for i in 0..self.k {
            let coef = buf[i];
            if coef != 0 {
                for (j, &g) in self.gpoly.iter().enumerate().skip(1) {
                    buf[i + j] ^= self.field.mul(coef, g);
                }
            }
        }
        buf[..self.k].copy_from_slice(msg);
        Ok(buf)
    }

    /// `S_i = word(alpha^i)` for i in `0 .. n-k`.
    fn syndromes(&self, word: &[u32]) -> Vec<u32> {
        (0..self.nk() as u64)
            .map(|i| {
                let x = self.field.alpha_pow(i);
                // Horner over the big-endian word.
                word.iter()
                    .fold(0u32, |acc, &c| self.field.mul(acc, x) ^ c)
            })
            .collect()
    }

    /// Locator value of position j.
    fn x_at(&self, j: usize) -> u32 {
        self.field.alpha_pow((self.n - 1 - j) as u64)
    }

    /// Low-endian locator polynomial `prod (1 - X_j x)` over `positions`.
    fn locator(&self, positions: &[usize]) -> Vec<u32> {
        let mut poly = vec![1u32];
        for &j in positions {
            let xj = self.x_at(j);
            let mut next = vec![0u32; poly.len() + 1];
            for (d, &c) in poly.iter().enumerate() {
                next[d] ^= c;
                next[d + 1] ^= self.field.mul(c, xj);
            }
            poly = next;
        }
        poly
    }

    /// Evaluates a low-endian polynomial.
    fn eval_low(&self, poly: &[u32], x: u32) -> u32 {
        poly.iter()
            .rev()
            .fold(0u32, |acc, &c| self.field.mul(acc, x) ^ c)
    }

    /// Berlekamp-Massey over (Forney) syndromes; returns the low-endian
    /// error locator with constant term 1.
    fn berlekamp_massey(&self, syn: &[u32]) -> Vec<u32> {
        let f = &self.field;
        let mut lambda = vec![1u32];
        let mut prev = vec![1u32];
        let mut l = 0usize;
        let mut m = 1usize;
        let mut prev_delta = 1u32;
        for i in 0..syn.len() {
            let mut delta = syn[i];
            for j in 1..=l.min(lambda.len() - 1) {
                delta ^= f.mul(lambda[j], syn[i - j]);
            }
            if delta == 0 {
                m += 1;
                continue;
            }
            let coef = f.div(delta, prev_delta);
            let mut next = lambda.clone();
            if next.len() < prev.len() + m {
                next.resize(prev.len() + m, 0);
            }
            for (d, &p) in prev.iter().enumerate() {
                next[d + m] ^= f.mul(coef, p);
            }
            if 2 * l <= i {
                prev = lambda;
                prev_delta = delta;
                l = i + 1 - l;
                m = 1;
            } else {
                m += 1;
            }
            lambda = next;
        }
        while lambda.len() > 1 && *lambda.last().unwrap() == 0 {
            lambda.pop();
        }
        lambda
    }

    /// Unique errors-and-erasures decoding; erasures are marked `None`.
    /// Returns the message when `2 * errors + erasures <= n - k`.
    pub fn decode_ee(&self, received: &[Option<u32>]) -> Result<Vec<u32>, RsError> {
        if received.len() != self.n {
            return Err(RsError::BadParams(format!(
                "received length {} != n = {}",
                received.len(),
                self.n
            )));
        }
        let erasures: Vec<usize> = received
            .iter()
            .enumerate()
            .filter_map(|(j, v)| v.is_none().then_some(j))
            .collect();
        if erasures.len() > self.nk() {
            return Err(RsError::TooManyErrors);
        }
        let mut word: Vec<u32> = Vec::with_capacity(self.n);
        for v in received {
            let v = v.unwrap_or(0);
            self.check_symbol(v)?;
            word.push(v);
        }

        let syn = self.syndromes(&word);
        if syn.iter().all(|&s| s == 0) {
            // Zero-filled erasures already form a codeword.
            return Ok(word[..self.k].to_vec());
        }

        // Fold erasures out of the syndromes so BM sees errors only.
        let mut forney = syn.clone();
        for &j in &erasures {
            let xj = self.x_at(j);
            for i in 0..forney.len() - 1 {
                forney[i] = forney[i + 1] ^ self.field.mul(forney[i], xj);
            }
        }
        forney.truncate(self.nk() - erasures.len());

        let lambda = self.berlekamp_massey(&forney);
        let v = lambda.len() - 1;
        if 2 * v + erasures.len() > self.nk() {
            return Err(RsError::TooManyErrors);
        }

        let mut positions: Vec<usize> = (0..self.n)
            .filter(|&j| self.eval_low(&lambda, self.field.inv(self.x_at(j))) == 0)
            .collect();
        if positions.len() != v {
            return Err(RsError::TooManyErrors);
        }
        positions.extend_from_slice(&erasures);

        // Combined errata locator and Forney magnitudes.
        let psi = self.locator(&positions);
        let mut omega = vec![0u32; self.nk()];
        for (i, &s) in syn.iter().enumerate() {
            for (d, &c) in psi.iter().enumerate() {
                if i + d < omega.len() {
                    omega[i + d] ^= self.field.mul(s, c);
                }
            }
        }
        let mut psi_deriv = vec![0u32; psi.len().saturating_sub(1)];
        for (d, slot) in psi_deriv.iter_mut().enumerate() {
            if (d + 1) % 2 == 1 {
                *slot = psi[d + 1];
            }
        }

        for &j in &positions {
            let xj = self.x_at(j);
            let xj_inv = self.field.inv(xj);
            let denom = self.eval_low(&psi_deriv, xj_inv);
            if denom == 0 {
                return Err(RsError::TooManyErrors);
            }
            let num = self.field.mul(xj, self.eval_low(&omega, xj_inv));
            let magnitude = self.field.div(num, denom);
            word[j] ^= magnitude;
        }

        if self.syndromes(&word).iter().any(|&s| s != 0) {
            return Err(RsError::TooManyErrors);
        }
        Ok(word[..self.k].to_vec())
    }
}
