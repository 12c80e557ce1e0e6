//! Prime field arithmetic over `F_q` for small odd primes.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

pub fn is_prime(x: u32) -> bool {
    if x < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= x {
        if x.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Least prime `q` with `num_blocks < q <= 2 * num_blocks`.
pub fn select_prime(num_blocks: usize) -> Result<u32> {
    if num_blocks < 2 {
        return Err(Error::InvalidInstance(format!(
            "need at least 2 blocks, got {num_blocks}"
        )));
    }
    let s = u32::try_from(num_blocks)
        .ok()
        .filter(|s| *s < u32::MAX / 2)
        .ok_or_else(|| Error::InvalidInstance("too many blocks".into()))?;
    (s + 1..=2 * s)
        .find(|&c| is_prime(c))
        .ok_or_else(|| Error::Invariant(format!("no prime in ({s}, {}]", 2 * s)))
}

/// Arithmetic context for `F_q`. Values are plain `u32` residues in `[0, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Field {
    q: u32,
}

impl Field {
    pub fn new(q: u32) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::InvalidInstance(format!("{q} is not prime")));
        }
        Ok(Field { q })
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn reduce(&self, x: i64) -> u32 {
        x.rem_euclid(self.q as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.q as u64) as u32
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(&self, a: u32) -> Result<u32> {
        let a = a % self.q;
        if a == 0 {
            return Err(Error::DivisionByZero(self.q));
        }
        let (mut r0, mut r1) = (self.q as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let k = r0 / r1;
            (r0, r1) = (r1, r0 - k * r1);
            (t0, t1) = (t1, t0 - k * t1);
        }
        Ok(self.reduce(t0))
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn elem(&self, value: i64) -> FieldElem {
        FieldElem {
            value: self.reduce(value),
            modulus: self.q,
        }
    }
}

/// A residue tagged with its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldElem {
    pub value: u32,
    pub modulus: u32,
}

impl FieldElem {
    pub fn new(value: i64, modulus: u32) -> Result<Self> {
        Ok(Field::new(modulus)?.elem(value))
    }

    fn field_with(&self, other: &FieldElem) -> Result<Field> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        Ok(Field { q: self.modulus })
    }

    fn wrap(&self, value: u32) -> FieldElem {
        FieldElem {
            value,
            modulus: self.modulus,
        }
    }

    pub fn add(&self, o: &FieldElem) -> Result<FieldElem> {
        Ok(self.wrap(self.field_with(o)?.add(self.value, o.value)))
    }

    pub fn sub(&self, o: &FieldElem) -> Result<FieldElem> {
        Ok(self.wrap(self.field_with(o)?.sub(self.value, o.value)))
    }

    pub fn mul(&self, o: &FieldElem) -> Result<FieldElem> {
        Ok(self.wrap(self.field_with(o)?.mul(self.value, o.value)))
    }

    pub fn neg(&self) -> FieldElem {
        self.wrap(Field { q: self.modulus }.neg(self.value))
    }

    pub fn inv(&self) -> Result<FieldElem> {
        Ok(self.wrap(Field { q: self.modulus }.inv(self.value)?))
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }
}
