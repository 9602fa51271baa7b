//! Arithmetic in the residue ring Z/n.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The base ring Z/n with n >= 2. Residues are stored as `u64` in `[0, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RingSpec {
    modulus: u64,
}

/// Largest supported modulus; keeps every product inside `u128` and every
/// residue difference inside `i128` without further care.
pub const MAX_MODULUS: u64 = 1 << 32;

impl RingSpec {
    pub fn new(modulus: u64) -> Result<Self> {
        if !(2..=MAX_MODULUS).contains(&modulus) {
            return Err(Error::InvalidModulus(modulus));
        }
        Ok(RingSpec { modulus })
    }

    #[inline]
    pub fn modulus(self) -> u64 {
        self.modulus
    }

    #[inline]
    pub fn reduce(self, x: u64) -> u64 {
        x % self.modulus
    }

    pub fn reduce_signed(self, x: i128) -> u64 {
        x.rem_euclid(self.modulus as i128) as u64
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    /// `gcd(a, n)`, with `gcd(0, n) = n`.
    pub fn gcd_with_modulus(self, a: u64) -> u64 {
        gcd(a, self.modulus)
    }

    pub fn is_unit(self, a: u64) -> bool {
        gcd(a, self.modulus) == 1
    }

    pub fn inverse(self, a: u64) -> Option<u64> {
        let (g, s, _) = ext_gcd(a as i128, self.modulus as i128);
        (g == 1).then(|| self.reduce_signed(s))
    }

    /// A unit `u` with `u * a = gcd(a, n)`. Used to normalise Howell pivots.
    pub fn normalizing_unit(self, a: u64) -> u64 {
        let n = self.modulus;
        let a = a % n;
        if a == 0 {
            return 1;
        }
        let g = gcd(a, n);
        let n_red = n / g;
        let a_red = a / g;
        // a_red is invertible modulo n_red; lift the inverse to a unit mod n.
        let base = if n_red == 1 {
            0
        } else {
            let (_, s, _) = ext_gcd(a_red as i128, n_red as i128);
            s.rem_euclid(n_red as i128) as u64
        };
        let mut u = base;
        for _ in 0..=g {
            if gcd(u, n) == 1 {
                debug_assert_eq!(self.mul(u, a), g);
                return u;
            }
            u += n_red;
        }
        unreachable!("a unit lift always exists among the g residues above n/g")
    }

    /// All residues `0..n`.
    pub fn elements(self) -> impl Iterator<Item = u64> {
        0..self.modulus
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Extended Euclid: returns `(g, s, t)` with `s*a + t*b = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}
