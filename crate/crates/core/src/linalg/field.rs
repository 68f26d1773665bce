use serde::Serialize;

use crate::error::{Error, Result};

/// The prime field GF(p). Elements are residues stored as `u16`, so every
/// product of two residues fits in a `u32`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct FieldSpec {
    p: u16,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub fn new(p: u64) -> Result<Self> {
        if p > u16::MAX as u64 {
            return Err(Error::Input(format!(
                "modulus {p} is too large (max 65535)"
            )));
        }
        if !is_prime(p) {
            return Err(Error::Input(format!("modulus {p} is not prime")));
        }
        Ok(FieldSpec { p: p as u16 })
    }

    /// GF(2), GF(3), ... for statically known primes.
    pub fn gf(p: u16) -> Self {
        FieldSpec::new(p as u64).expect("gf() needs a prime")
    }

    #[inline]
    pub fn p(self) -> u16 {
        self.p
    }

    #[inline]
    pub fn reduce(self, x: u64) -> u16 {
        (x % self.p as u64) as u16
    }

    #[inline]
    pub fn reduce_signed(self, x: i64) -> u16 {
        x.rem_euclid(self.p as i64) as u16
    }

    #[inline]
    pub fn add(self, a: u16, b: u16) -> u16 {
        let s = a as u32 + b as u32;
        let p = self.p as u32;
        (if s >= p { s - p } else { s }) as u16
    }

    #[inline]
    pub fn sub(self, a: u16, b: u16) -> u16 {
        if a >= b {
            a - b
        } else {
            (a as u32 + self.p as u32 - b as u32) as u16
        }
    }

    #[inline]
    pub fn neg(self, a: u16) -> u16 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u16, b: u16) -> u16 {
        ((a as u32 * b as u32) % self.p as u32) as u16
    }

    /// `a - f * b`, the row-operation kernel.
    #[inline]
    pub fn sub_mul(self, a: u16, f: u16, b: u16) -> u16 {
        self.sub(a, self.mul(f, b))
    }

    pub fn inv(self, a: u16) -> Option<u16> {
        if a == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Some(self.reduce_signed(t0))
    }
}

impl std::fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GF({})", self.p)
    }
}
