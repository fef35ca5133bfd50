use std::fmt::Debug;

use num_traits::{Float, FromPrimitive};

use super::LinalgError;

/// A field descriptor together with its element type.
///
/// Elements carry no context of their own; arithmetic goes through the
/// descriptor so that a runtime modulus or tolerance can be shared by every
/// entry of a matrix.
pub trait Field: Clone + Debug + PartialEq + Send + Sync {
    type Elem: Copy + Debug + PartialEq + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn neg(&self, a: Self::Elem) -> Self::Elem;
    /// Multiplicative inverse, `None` for (numerically) zero elements.
    fn inv(&self, a: Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: Self::Elem) -> bool;
    /// Size used for pivot selection and residual checks.
    fn magnitude(&self, a: Self::Elem) -> f64;
    /// Zero threshold; `0.0` for exact fields.
    fn tolerance(&self) -> f64;

    fn is_exact(&self) -> bool {
        self.tolerance() == 0.0
    }

    fn div(&self, a: Self::Elem, b: Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|b| self.mul(a, b))
    }

    /// Snaps near-zero values to an exact zero.
    fn clean(&self, a: Self::Elem) -> Self::Elem {
        if self.is_zero(a) {
            self.zero()
        } else {
            a
        }
    }
}

/// Real numbers with an absolute zero threshold.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Reals<T> {
    eps: T,
}

impl<T: Float> Reals<T> {
    pub fn new(eps: T) -> Result<Self, LinalgError> {
        if eps > T::zero() && eps.is_finite() {
            Ok(Self { eps })
        } else {
            Err(LinalgError::InvalidTolerance(
                eps.to_f64().unwrap_or(f64::NAN),
            ))
        }
    }

    pub fn eps(&self) -> T {
        self.eps
    }
}

impl Default for Reals<f64> {
    fn default() -> Self {
        Self { eps: 1e-9 }
    }
}

impl<T> Field for Reals<T>
where
    T: Float + FromPrimitive + Debug + Send + Sync,
{
    type Elem = T;

    fn zero(&self) -> T {
        T::zero()
    }
    fn one(&self) -> T {
        T::one()
    }
    fn from_i64(&self, v: i64) -> T {
        T::from_i64(v).unwrap_or_else(T::nan)
    }
    fn add(&self, a: T, b: T) -> T {
        a + b
    }
    fn sub(&self, a: T, b: T) -> T {
        a - b
    }
    fn mul(&self, a: T, b: T) -> T {
        a * b
    }
    fn neg(&self, a: T) -> T {
        -a
    }
    fn inv(&self, a: T) -> Option<T> {
        if self.is_zero(a) {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: T) -> bool {
        a.abs() <= self.eps
    }
    fn magnitude(&self, a: T) -> f64 {
        a.abs().to_f64().unwrap_or(f64::INFINITY)
    }
    fn tolerance(&self) -> f64 {
        self.eps.to_f64().unwrap_or(0.0)
    }
}

/// The prime field ℤ_p with residues stored in `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

/// Largest accepted modulus; keeps products of residues inside `u64`.
pub const MAX_MODULUS: u64 = u32::MAX as u64;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, LinalgError> {
        if p > MAX_MODULUS || !is_prime(p) {
            return Err(LinalgError::NotPrime(p));
        }
        Ok(Self { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Reduces any integer into `0..p`.
    pub fn residue(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, v: i64) -> u64 {
        self.residue(v)
    }
    fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: u64) -> Option<u64> {
        if a % self.p == 0 {
            None
        } else {
            Some(self.pow(a, self.p - 2))
        }
    }
    fn is_zero(&self, a: u64) -> bool {
        a % self.p == 0
    }
    fn magnitude(&self, a: u64) -> f64 {
        if self.is_zero(a) {
            0.0
        } else {
            1.0
        }
    }
    fn tolerance(&self) -> f64 {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(PrimeField::new(9).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(2).is_ok());
    }

    #[test]
    fn inverses_mod_p() {
        for p in [2u64, 3, 5, 7, 13] {
            let f = PrimeField::new(p).unwrap();
            assert_eq!(f.inv(0), None);
            for a in 1..p {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            assert_eq!(f.from_i64(-1), p - 1);
        }
    }

    #[test]
    fn real_zero_threshold() {
        let f = Reals::new(1e-6).unwrap();
        assert!(f.is_zero(5e-7));
        assert!(!f.is_zero(2e-6));
        assert_eq!(f.inv(1e-7), None);
        assert!(Reals::new(0.0f64).is_err());
        assert!(Reals::new(-1.0f64).is_err());
        let g = Reals::new(1e-5f32).unwrap();
        assert_eq!(g.inv(4.0), Some(0.25));
    }
}
