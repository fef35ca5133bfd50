use super::{Field, LinalgError, Matrix};

/// Reduced row echelon form together with its pivot structure.
#[derive(Clone, Debug, PartialEq)]
pub struct Rref<F: Field> {
    pub matrix: Matrix<F>,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

/// Gauss-Jordan elimination in place, searching pivots only among the first
/// `ncoef` columns. Returns the pivot columns.
fn eliminate<F: Field>(m: &mut Matrix<F>, ncoef: usize) -> Vec<usize> {
    let f = m.field().clone();
    let (rows, cols) = (m.rows(), m.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncoef {
        if r == rows {
            break;
        }
        let mut best: Option<(usize, f64)> = None;
        for i in r..rows {
            let v = m.get(i, c);
            if f.is_zero(v) {
                continue;
            }
            let mag = f.magnitude(v);
            if best.map_or(true, |(_, b)| mag > b) {
                best = Some((i, mag));
            }
        }
        let Some((p, _)) = best else {
            for i in r..rows {
                m.set(i, c, f.zero());
            }
            continue;
        };
        m.swap_rows(r, p);
        let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
        for j in 0..cols {
            let v = f.clean(f.mul(m.get(r, j), inv));
            m.set(r, j, v);
        }
        m.set(r, c, f.one());
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = m.get(i, c);
            if f.is_zero(factor) {
                m.set(i, c, f.zero());
                continue;
            }
            for j in 0..cols {
                let v = f.clean(f.sub(m.get(i, j), f.mul(factor, m.get(r, j))));
                m.set(i, j, v);
            }
            m.set(i, c, f.zero());
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rref<F: Field>(m: &Matrix<F>) -> Rref<F> {
    let mut out = m.clone();
    let pivots = eliminate(&mut out, m.cols());
    Rref {
        rank: pivots.len(),
        matrix: out,
        pivots,
    }
}

/// Solves `a x = b`, returning the particular solution with free variables
/// set to zero, or `None` when the system is inconsistent.
pub fn solve<F: Field>(a: &Matrix<F>, b: &[F::Elem]) -> Result<Option<Vec<F::Elem>>, LinalgError> {
    if b.len() != a.rows() {
        return Err(LinalgError::DimensionMismatch {
            expected: a.rows(),
            found: b.len(),
        });
    }
    let mut rhs = Matrix::zeros(a.field().clone(), a.rows(), 1);
    for (i, &v) in b.iter().enumerate() {
        rhs.set(i, 0, v);
    }
    Ok(solve_columns(a, &rhs)?.pop().flatten())
}

/// Solves `a x = rhs[:, k]` for every column `k` of `rhs` with one
/// elimination pass.
pub fn solve_columns<F: Field>(
    a: &Matrix<F>,
    rhs: &Matrix<F>,
) -> Result<Vec<Option<Vec<F::Elem>>>, LinalgError> {
    if rhs.rows() != a.rows() {
        return Err(LinalgError::DimensionMismatch {
            expected: a.rows(),
            found: rhs.rows(),
        });
    }
    let f = a.field().clone();
    let (n, k) = (a.cols(), rhs.cols());
    let mut aug = Matrix::zeros(f.clone(), a.rows(), n + k);
    for r in 0..a.rows() {
        for c in 0..n {
            aug.set(r, c, a.get(r, c));
        }
        for c in 0..k {
            aug.set(r, n + c, rhs.get(r, c));
        }
    }
    let pivots = eliminate(&mut aug, n);
    let rank = pivots.len();
    let mut out = Vec::with_capacity(k);
    for c in 0..k {
        let consistent = (rank..a.rows()).all(|r| f.is_zero(aug.get(r, n + c)));
        if !consistent {
            out.push(None);
            continue;
        }
        let mut x = vec![f.zero(); n];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = f.clean(aug.get(r, n + c));
        }
        let b = rhs.column(c);
        out.push(residual_ok(a, &x, &b).then_some(x));
    }
    Ok(out)
}

/// Exact equality for exact fields; `‖ax − b‖∞ ≤ ε(1 + ‖b‖∞)` otherwise.
pub fn residual_ok<F: Field>(a: &Matrix<F>, x: &[F::Elem], b: &[F::Elem]) -> bool {
    let f = a.field();
    let Ok(ax) = a.mul_vec(x) else {
        return false;
    };
    if ax.len() != b.len() {
        return false;
    }
    let bound = f.tolerance() * (1.0 + b.iter().map(|&v| f.magnitude(v)).fold(0.0, f64::max));
    ax.iter().zip(b).all(|(&l, &r)| {
        let diff = f.sub(l, r);
        if f.is_exact() {
            f.is_zero(diff)
        } else {
            f.magnitude(diff) <= bound
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_linalg::{PrimeField, Reals};

    #[test]
    fn identity_is_its_own_rref() {
        let f = PrimeField::new(5).unwrap();
        let i = Matrix::identity(f, 4);
        let r = rref(&i);
        assert_eq!(r.matrix, i);
        assert_eq!(r.rank, 4);
    }

    #[test]
    fn empty_matrix() {
        let f = Reals::default();
        let m = Matrix::zeros(f, 0, 0);
        let r = rref(&m);
        assert_eq!(r.rank, 0);
        assert_eq!(r.matrix, m);
    }

    #[test]
    fn gf2_rank_of_cycle_matrix() {
        let f = PrimeField::new(2).unwrap();
        let m = Matrix::from_i64_rows(f, &[&[1, 0, 1], &[1, 1, 0], &[0, 1, 1]]).unwrap();
        assert_eq!(rref(&m).rank, 2);
    }

    #[test]
    fn real_solve_of_cycle_matrix() {
        let f = Reals::default();
        let m = Matrix::from_i64_rows(f, &[&[1, 0, 1], &[1, 1, 0], &[0, 1, 1]]).unwrap();
        let x = solve(&m, &[0.0, 0.0, 1.0]).unwrap().unwrap();
        let expect = [-0.5, 0.5, 0.5];
        for (a, b) in x.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn solve_identity_returns_rhs() {
        let f = PrimeField::new(7).unwrap();
        let i = Matrix::identity(f, 3);
        assert_eq!(solve(&i, &[3, 0, 6]).unwrap(), Some(vec![3, 0, 6]));
    }

    #[test]
    fn dimension_mismatch_is_not_inconsistency() {
        let f = Reals::default();
        let i = Matrix::identity(f, 3);
        assert!(matches!(
            solve(&i, &[1.0]),
            Err(LinalgError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn free_variables_are_zero() {
        let f = PrimeField::new(3).unwrap();
        let m = Matrix::from_i64_rows(f, &[&[1, 1, 0]]).unwrap();
        assert_eq!(solve(&m, &[2]).unwrap(), Some(vec![2, 0, 0]));
    }

    #[test]
    fn inconsistent_system() {
        let f = Reals::default();
        let m = Matrix::from_i64_rows(f, &[&[1, 1], &[2, 2]]).unwrap();
        assert_eq!(solve(&m, &[1.0, 1.0]).unwrap(), None);
    }
}
