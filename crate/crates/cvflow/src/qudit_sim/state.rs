use num_complex::Complex64;
use rand::Rng;

use crate::field_linalg::is_prime;

use super::SimError;

/// Dense pure state of `n` qudits of prime dimension `d`.
///
/// Amplitude index `Σ_q digit_q · d^q`: qudit 0 is the least significant
/// digit.
#[derive(Clone, Debug, PartialEq)]
pub struct QuditState {
    d: u64,
    n: usize,
    amps: Vec<Complex64>,
}

fn dimension(d: u64, n: usize) -> Result<usize, SimError> {
    if !is_prime(d) {
        return Err(SimError::NotPrime(d));
    }
    (0..n)
        .try_fold(1usize, |acc, _| acc.checked_mul(d as usize))
        .ok_or(SimError::TooLarge { d, n })
}

impl QuditState {
    /// `|digits⟩`, with `digits[q]` the value of qudit `q`.
    pub fn basis(d: u64, digits: &[u64]) -> Result<Self, SimError> {
        let len = dimension(d, digits.len())?;
        let mut amps = vec![Complex64::new(0.0, 0.0); len];
        let mut idx = 0usize;
        for &x in digits.iter().rev() {
            idx = idx * d as usize + (x % d) as usize;
        }
        amps[idx] = Complex64::new(1.0, 0.0);
        Ok(Self {
            d,
            n: digits.len(),
            amps,
        })
    }

    pub fn from_amplitudes(d: u64, n: usize, amps: Vec<Complex64>) -> Result<Self, SimError> {
        let len = dimension(d, n)?;
        if amps.len() != len {
            return Err(SimError::ShapeMismatch {
                expected: len,
                found: amps.len(),
            });
        }
        Ok(Self { d, n, amps })
    }

    /// Normalised state with Gaussian-distributed amplitudes.
    pub fn random<R: Rng>(d: u64, n: usize, rng: &mut R) -> Result<Self, SimError> {
        let len = dimension(d, n)?;
        let normal = |rng: &mut R| {
            let u: f64 = rng.gen_range(f64::EPSILON..1.0);
            let v: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            (-2.0 * u.ln()).sqrt() * v.cos()
        };
        let amps = (0..len)
            .map(|_| Complex64::new(normal(rng), normal(rng)))
            .collect();
        let mut s = Self { d, n, amps };
        s.normalize();
        Ok(s)
    }

    pub fn dim(&self) -> u64 {
        self.d
    }

    pub fn qudits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    /// `d^q`, the index stride of qudit `q`.
    pub fn stride(&self, q: usize) -> usize {
        (self.d as usize).pow(q as u32)
    }

    pub fn digit(&self, idx: usize, q: usize) -> u64 {
        ((idx / self.stride(q)) % self.d as usize) as u64
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn normalize(&mut self) {
        let n = self.norm_sqr().sqrt();
        if n > 0.0 {
            for a in &mut self.amps {
                *a /= n;
            }
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex64, SimError> {
        self.same_shape(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨a|b⟩| / (‖a‖‖b‖)`; zero when either state vanishes.
    pub fn fidelity(&self, other: &Self) -> Result<f64, SimError> {
        let ip = self.inner(other)?.norm();
        let n = (self.norm_sqr() * other.norm_sqr()).sqrt();
        Ok(if n > 0.0 { ip / n } else { 0.0 })
    }

    fn same_shape(&self, other: &Self) -> Result<(), SimError> {
        if self.d != other.d || self.n != other.n {
            return Err(SimError::ShapeMismatch {
                expected: self.amps.len(),
                found: other.amps.len(),
            });
        }
        Ok(())
    }

    /// `self ⊗ other`, with `other` on the higher qudit positions.
    pub fn tensor(&self, other: &Self) -> Result<Self, SimError> {
        if self.d != other.d {
            return Err(SimError::DimensionMismatch(self.d, other.d));
        }
        let len = dimension(self.d, self.n + other.n)?;
        let mut amps = Vec::with_capacity(len);
        for b in &other.amps {
            for a in &self.amps {
                amps.push(a * b);
            }
        }
        Ok(Self {
            d: self.d,
            n: self.n + other.n,
            amps,
        })
    }

    /// Projects qudit `q` onto `|outcome⟩` and removes it. The result is not
    /// renormalised; its squared norm is the outcome probability.
    pub fn project(&self, q: usize, outcome: u64) -> Self {
        let d = self.d as usize;
        let low = self.stride(q);
        let high = low * d;
        let mut amps = Vec::with_capacity(self.amps.len() / d);
        for block in (0..self.amps.len()).step_by(high) {
            let start = block + outcome as usize * low;
            amps.extend_from_slice(&self.amps[start..start + low]);
        }
        Self {
            d: self.d,
            n: self.n - 1,
            amps,
        }
    }

    /// Reorders qudits so that new qudit `i` is old qudit `order[i]`.
    pub fn permute(&self, order: &[usize]) -> Result<Self, SimError> {
        let mut seen = vec![false; self.n];
        if order.len() != self.n {
            return Err(SimError::BadPermutation);
        }
        for &q in order {
            if q >= self.n || std::mem::replace(&mut seen[q], true) {
                return Err(SimError::BadPermutation);
            }
        }
        let strides: Vec<usize> = order.iter().map(|&q| self.stride(q)).collect();
        let d = self.d as usize;
        let mut amps = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (new_idx, slot) in amps.iter_mut().enumerate() {
            let mut rest = new_idx;
            let mut old_idx = 0;
            for &s in &strides {
                old_idx += (rest % d) * s;
                rest /= d;
            }
            *slot = self.amps[old_idx];
        }
        Ok(Self {
            d: self.d,
            n: self.n,
            amps,
        })
    }
}

/// True iff `|⟨a|b⟩| ≥ 1 − tol` after normalisation.
pub fn states_equal_up_to_phase(
    a: &QuditState,
    b: &QuditState,
    tol: f64,
) -> Result<bool, SimError> {
    Ok(a.fidelity(b)? >= 1.0 - tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn basis_indexing_is_little_endian() {
        let s = QuditState::basis(3, &[2, 1]).unwrap();
        let idx = s.amplitudes().iter().position(|a| a.re == 1.0).unwrap();
        assert_eq!(idx, 2 + 3);
        assert_eq!(s.digit(idx, 0), 2);
        assert_eq!(s.digit(idx, 1), 1);
        assert!(QuditState::basis(4, &[0]).is_err());
    }

    #[test]
    fn phase_equality() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = QuditState::random(3, 2, &mut rng).unwrap();
        let mut b = a.clone();
        let phase = Complex64::from_polar(1.0, 0.7);
        for x in b.amplitudes_mut() {
            *x *= phase;
        }
        assert!(states_equal_up_to_phase(&a, &b, 1e-12).unwrap());
        let e0 = QuditState::basis(3, &[0]).unwrap();
        let e1 = QuditState::basis(3, &[1]).unwrap();
        assert!(!states_equal_up_to_phase(&e0, &e1, 1e-9).unwrap());
        assert!(states_equal_up_to_phase(&a, &e0, 1e-9).is_err());
    }

    #[test]
    fn project_and_tensor() {
        let a = QuditState::basis(5, &[3]).unwrap();
        let b = QuditState::basis(5, &[4, 1]).unwrap();
        let ab = a.tensor(&b).unwrap();
        assert_eq!(ab, QuditState::basis(5, &[3, 4, 1]).unwrap());
        let p = ab.project(1, 4);
        assert_eq!(p, QuditState::basis(5, &[3, 1]).unwrap());
        assert_eq!(ab.project(1, 2).norm_sqr(), 0.0);
    }

    #[test]
    fn permutation() {
        let s = QuditState::basis(3, &[0, 1, 2]).unwrap();
        let p = s.permute(&[2, 0, 1]).unwrap();
        assert_eq!(p, QuditState::basis(3, &[2, 0, 1]).unwrap());
        assert!(s.permute(&[0, 0, 1]).is_err());
    }
}
