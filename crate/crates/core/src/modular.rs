//! Arithmetic in Z_n for the moduli used by the construction.

use crate::error::{Error, Result};

/// A modulus n with n = 1 or 5 (mod 6), n >= 5.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Modulus(u32);

impl Modulus {
    pub fn new(n: u32) -> Result<Self> {
        if n < 5 || (n % 6 != 1 && n % 6 != 5) {
            return Err(Error::params(format!(
                "n = {n} must satisfy n >= 5 and n = 1 or 5 (mod 6)"
            )));
        }
        Ok(Modulus(n))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// Reduce any signed integer into [0, n).
    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        self.reduce(a as i64 - b as i64)
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        self.reduce(-(a as i64))
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    /// Multiplicative inverse of `a`; `None` when gcd(a, n) != 1.
    pub fn inv(self, a: u32) -> Option<u32> {
        let (mut r0, mut r1) = (self.0 as i64, (a % self.0) as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        (r0 == 1).then(|| self.reduce(t0))
    }

    /// The class g of a residue triple, from its sum = 3g (mod n).
    pub fn class_of_sum(self, sum: u32) -> u32 {
        let inv3 = self.inv(3).expect("gcd(n, 3) = 1");
        self.mul(sum % self.0, inv3)
    }

    /// Multiplicative order of -2 modulo n.
    pub fn order_of_minus_two(self) -> u32 {
        let m2 = self.neg(2);
        let mut x = m2;
        let mut k = 1;
        while x != 1 {
            x = self.mul(x, m2);
            k += 1;
        }
        k
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_moduli() {
        for n in [0, 1, 3, 4, 6, 9, 15] {
            assert!(Modulus::new(n).is_err(), "n = {n}");
        }
        for n in [5, 7, 11, 13, 17, 19, 23] {
            assert!(Modulus::new(n).is_ok(), "n = {n}");
        }
    }

    #[test]
    fn inverse_and_order() {
        let m = Modulus::new(7).unwrap();
        assert_eq!(m.inv(3), Some(5));
        // -2 = 5 mod 7; 5^1=5, 5^2=4, 5^3=6, 5^4=2, 5^5=3, 5^6=1
        assert_eq!(m.order_of_minus_two(), 6);
        let m = Modulus::new(5).unwrap();
        // -2 = 3 mod 5; 3, 4, 2, 1
        assert_eq!(m.order_of_minus_two(), 4);
        assert_eq!(m.reduce(-9), 1);
    }
}
