use num_complex::Complex64;

use super::{QuditState, SimError};

/// Qudit gate with its target positions. Powers and weights are residues
/// mod `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateOp {
    /// `|n⟩ ↦ |n + a⟩`.
    X {
        q: usize,
        a: u64,
    },
    /// `|n⟩ ↦ ω^{an}|n⟩`.
    Z {
        q: usize,
        a: u64,
    },
    /// `|n⟩ ↦ d^{-1/2} Σ_k ω^{kn}|k⟩`.
    H {
        q: usize,
    },
    HInv {
        q: usize,
    },
    /// `|n⟩ ↦ |wn⟩`, `w ≠ 0`.
    M {
        q: usize,
        w: u64,
    },
    /// `|m, n⟩ ↦ ω^{wmn}|m, n⟩`.
    CZ {
        a: usize,
        b: usize,
        w: u64,
    },
    /// `|m, n⟩ ↦ |m, n + wm⟩` with `m` on `control`.
    CX {
        control: usize,
        target: usize,
        w: u64,
    },
    /// `|n⟩ ↦ exp(2πi(an + bn² + cn³)/d)|n⟩`.
    DiagPoly {
        q: usize,
        a: u64,
        b: u64,
        c: u64,
    },
}

impl GateOp {
    fn qudits(&self) -> Vec<usize> {
        match *self {
            GateOp::X { q, .. }
            | GateOp::Z { q, .. }
            | GateOp::H { q }
            | GateOp::HInv { q }
            | GateOp::M { q, .. }
            | GateOp::DiagPoly { q, .. } => vec![q],
            GateOp::CZ { a, b, .. } => vec![a, b],
            GateOp::CX {
                control, target, ..
            } => vec![control, target],
        }
    }
}

/// `ω^k = exp(2πik/d)` for `k` in `0..d`.
pub fn omega_table(d: u64) -> Vec<Complex64> {
    (0..d)
        .map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / d as f64))
        .collect()
}

fn permute_digits(s: &mut QuditState, q: usize, map: impl Fn(u64) -> u64) {
    let d = s.dim();
    let stride = s.stride(q);
    let old = s.amplitudes().to_vec();
    let out = s.amplitudes_mut();
    for (idx, &amp) in old.iter().enumerate() {
        let n = ((idx / stride) as u64) % d;
        let m = map(n) % d;
        let new_idx = idx - n as usize * stride + m as usize * stride;
        out[new_idx] = amp;
    }
}

fn phase_by(s: &mut QuditState, phase: impl Fn(usize) -> Complex64) {
    for (idx, a) in s.amplitudes_mut().iter_mut().enumerate() {
        *a *= phase(idx);
    }
}

fn fourier(s: &mut QuditState, q: usize, sign: u64) {
    let d = s.dim();
    let du = d as usize;
    let omega = omega_table(d);
    let stride = s.stride(q);
    let scale = 1.0 / (d as f64).sqrt();
    let amps = s.amplitudes_mut();
    let mut buf = vec![Complex64::new(0.0, 0.0); du];
    for block in (0..amps.len()).step_by(stride * du) {
        for low in 0..stride {
            let base = block + low;
            for (k, slot) in buf.iter_mut().enumerate() {
                *slot = (0..du)
                    .map(|n| amps[base + n * stride] * omega[(sign * (k * n) as u64 % d) as usize])
                    .sum::<Complex64>()
                    * scale;
            }
            for (k, &v) in buf.iter().enumerate() {
                amps[base + k * stride] = v;
            }
        }
    }
}

/// Applies `op` to `s` in place.
pub fn apply(s: &mut QuditState, op: &GateOp) -> Result<(), SimError> {
    let n = s.qudits();
    let qs = op.qudits();
    if let Some(&q) = qs.iter().find(|&&q| q >= n) {
        return Err(SimError::QuditOutOfRange(q));
    }
    if qs.len() == 2 && qs[0] == qs[1] {
        return Err(SimError::RepeatedQudit(qs[0]));
    }
    let d = s.dim();
    let omega = omega_table(d);
    let du = d as usize;
    match *op {
        GateOp::X { q, a } => permute_digits(s, q, |x| x + a % d),
        GateOp::Z { q, a } => {
            let st = s.stride(q);
            phase_by(s, |idx| omega[((idx / st) % du) * (a % d) as usize % du]);
        }
        GateOp::H { q } => fourier(s, q, 1),
        GateOp::HInv { q } => fourier(s, q, d - 1),
        GateOp::M { q, w } => {
            if w % d == 0 {
                return Err(SimError::NonInvertibleWeight(w));
            }
            permute_digits(s, q, |x| x * (w % d));
        }
        GateOp::CZ { a, b, w } => {
            let (sa, sb) = (s.stride(a), s.stride(b));
            let w = (w % d) as usize;
            phase_by(s, |idx| {
                let (x, y) = ((idx / sa) % du, (idx / sb) % du);
                omega[w * x % du * y % du]
            });
        }
        GateOp::CX { control, target, w } => {
            let (sc, st) = (s.stride(control), s.stride(target));
            let w = w % d;
            let old = s.amplitudes().to_vec();
            let out = s.amplitudes_mut();
            for (idx, &amp) in old.iter().enumerate() {
                let m = ((idx / sc) % du) as u64;
                let t = ((idx / st) % du) as u64;
                let nt = (t + w * m) % d;
                out[idx - t as usize * st + nt as usize * st] = amp;
            }
        }
        GateOp::DiagPoly { q, a, b, c } => {
            let st = s.stride(q);
            let table: Vec<Complex64> = (0..d)
                .map(|x| {
                    let e = (a % d * x + b % d * (x * x % d) + c % d * (x * x % d * x % d)) % d;
                    omega[e as usize]
                })
                .collect();
            phase_by(s, |idx| table[(idx / st) % du]);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(d: u64, digits: &[u64], op: GateOp) -> QuditState {
        let mut s = QuditState::basis(d, digits).unwrap();
        apply(&mut s, &op).unwrap();
        s
    }

    #[test]
    fn shift_and_multiply() {
        assert_eq!(
            run(5, &[3], GateOp::X { q: 0, a: 4 }),
            QuditState::basis(5, &[2]).unwrap()
        );
        assert_eq!(
            run(5, &[3], GateOp::M { q: 0, w: 2 }),
            QuditState::basis(5, &[1]).unwrap()
        );
        assert_eq!(
            run(
                5,
                &[2, 3],
                GateOp::CX {
                    control: 0,
                    target: 1,
                    w: 2
                }
            ),
            QuditState::basis(5, &[2, 2]).unwrap()
        );
    }

    #[test]
    fn two_vertex_graph_state() {
        let d = 3;
        let mut s = QuditState::basis(d, &[0, 0]).unwrap();
        for op in [
            GateOp::H { q: 0 },
            GateOp::H { q: 1 },
            GateOp::CZ { a: 0, b: 1, w: 1 },
        ] {
            apply(&mut s, &op).unwrap();
        }
        let omega = omega_table(d);
        for (idx, a) in s.amplitudes().iter().enumerate() {
            let (m, n) = (idx % 3, idx / 3);
            let expect = omega[m * n % 3] / 3.0;
            assert!((a - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn bad_targets() {
        let mut s = QuditState::basis(3, &[0]).unwrap();
        assert_eq!(
            apply(&mut s, &GateOp::H { q: 1 }),
            Err(SimError::QuditOutOfRange(1))
        );
        assert_eq!(
            apply(&mut s, &GateOp::M { q: 0, w: 3 }),
            Err(SimError::NonInvertibleWeight(3))
        );
        let mut t = QuditState::basis(3, &[0, 0]).unwrap();
        assert_eq!(
            apply(&mut t, &GateOp::CZ { a: 1, b: 1, w: 1 }),
            Err(SimError::RepeatedQudit(1))
        );
    }
}
