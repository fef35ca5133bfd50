use super::{Field, LinalgError, Matrix};

/// Elementary column operation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ColumnOp<E> {
    Swap(usize, usize),
    /// `col[target] += scalar * col[source]`.
    AddScaled {
        target: usize,
        source: usize,
        scalar: E,
    },
}

impl<E: Copy> ColumnOp<E> {
    pub fn inverse<F: Field<Elem = E>>(&self, field: &F) -> Self {
        match *self {
            ColumnOp::Swap(a, b) => ColumnOp::Swap(a, b),
            ColumnOp::AddScaled {
                target,
                source,
                scalar,
            } => ColumnOp::AddScaled {
                target,
                source,
                scalar: field.neg(scalar),
            },
        }
    }

    /// Rewrites column indices through `map`.
    pub fn relabel(&self, map: impl Fn(usize) -> usize) -> Self {
        match *self {
            ColumnOp::Swap(a, b) => ColumnOp::Swap(map(a), map(b)),
            ColumnOp::AddScaled {
                target,
                source,
                scalar,
            } => ColumnOp::AddScaled {
                target: map(target),
                source: map(source),
                scalar,
            },
        }
    }
}

/// Right-multiplies `m` by the elementary matrices of `ops`, in order.
pub fn apply_column_ops<F: Field>(
    m: &Matrix<F>,
    ops: &[ColumnOp<F::Elem>],
) -> Result<Matrix<F>, LinalgError> {
    let mut out = m.clone();
    let cols = m.cols();
    let check = |i: usize| {
        if i < cols {
            Ok(())
        } else {
            Err(LinalgError::IndexOutOfRange {
                index: i,
                len: cols,
            })
        }
    };
    for op in ops {
        match *op {
            ColumnOp::Swap(a, b) => {
                check(a)?;
                check(b)?;
                out.swap_cols(a, b);
            }
            ColumnOp::AddScaled {
                target,
                source,
                scalar,
            } => {
                check(target)?;
                check(source)?;
                if target == source {
                    return Err(LinalgError::SelfAddition(target));
                }
                if m.field().is_zero(scalar) {
                    return Err(LinalgError::ZeroScalar);
                }
                out.add_scaled_col(target, source, scalar);
            }
        }
    }
    Ok(out)
}
