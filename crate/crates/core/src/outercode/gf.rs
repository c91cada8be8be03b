//! Table-based GF(2^m) arithmetic for m in {4, 8, 16}.

use std::fmt;

/// Primitive polynomials (with the x^m term included).
const POLY_4: u32 = 0x13; // x^4 + x + 1
const POLY_8: u32 = 0x11D; // x^8 + x^4 + x^3 + x^2 + 1
const POLY_16: u32 = 0x1100B; // x^16 + x^12 + x^3 + x + 1

#[derive(Debug, Clone, PartialEq)]
pub enum GfError {
    UnsupportedField { bits: u32 },
}

impl fmt::Display for GfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GfError::UnsupportedField { bits } => {
                write!(f, "unsupported field GF(2^{bits}); supported: 4, 8, 16")
            }
        }
    }
}

impl std::error::Error for GfError {}

/// A finite field GF(2^bits) with exp/log tables over the generator alpha = 2.
#[derive(Debug, Clone)]
pub struct GaloisField {
    bits: u32,
    size: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl GaloisField {
    pub fn new(bits: u32) -> Result<Self, GfError> {
        let poly = match bits {
            4 => POLY_4,
            8 => POLY_8,
            16 => POLY_16,
            _ => return Err(GfError::UnsupportedField { bits }),
        };
        let size = 1u32 << bits;
        let order = (size - 1) as usize;
        let mut exp = vec![0u32; 2 * order];
        let mut log = vec![0u32; size as usize];
        let mut v = 1u32;
        for (i, slot) in exp.iter_mut().take(order).enumerate() {
            *slot = v;
            log[v as usize] = i as u32;
            v <<= 1;
            if v & size != 0 {
                v ^= poly;
            }
        }
        debug_assert_eq!(v, 1, "generator must have full order");
        for i in 0..order {
            exp[order + i] = exp[i];
        }
        Ok(Self {
            bits,
            size,
            exp,
            log,
        })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    fn order(&self) -> u32 {
        self.size - 1
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        a ^ b
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    pub fn inv(&self, a: u32) -> u32 {
        debug_assert_ne!(a, 0, "zero has no inverse");
        self.exp[(self.order() - self.log[a as usize]) as usize]
    }

    pub fn div(&self, a: u32, b: u32) -> u32 {
        self.mul(a, self.inv(b))
    }

    /// alpha^e (e may exceed the group order).
    pub fn alpha_pow(&self, e: u64) -> u32 {
        self.exp[(e % u64::from(self.order())) as usize]
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let idx = (u64::from(self.log[a as usize]) * e) % u64::from(self.order());
        self.exp[idx as usize]
    }
}
