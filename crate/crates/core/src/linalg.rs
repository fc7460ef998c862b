//! Small dense linear algebra helpers: determinants and solves by Gaussian
//! elimination with partial pivoting, and an affine-dependence finder used
//! by the Caratheodory pruning step. Everything here targets matrices of
//! single-digit size.

use crate::scalar::Scalar;

pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

pub(crate) fn norm2<T: Scalar>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

pub(crate) fn norm_inf<T: Scalar>(a: &[T]) -> T {
    a.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
}

pub(crate) fn scale<T: Scalar>(a: &[T], s: T) -> Vec<T> {
    a.iter().map(|&x| x * s).collect()
}

/// Determinant by elimination with partial pivoting; consumes the matrix.
pub(crate) fn det_in_place<T: Scalar>(mat: &mut [Vec<T>]) -> T {
    let n = mat.len();
    let mut det = T::one();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                mat[i][col]
                    .abs()
                    .partial_cmp(&mat[j][col].abs())
                    .expect("finite entries")
            })
            .unwrap();
        if mat[pivot][col] == T::zero() {
            return T::zero();
        }
        if pivot != col {
            mat.swap(pivot, col);
            det = -det;
        }
        det = det * mat[col][col];
        for row in col + 1..n {
            let factor = mat[row][col] / mat[col][col];
            if factor != T::zero() {
                for c in col..n {
                    let sub = factor * mat[col][c];
                    mat[row][c] = mat[row][c] - sub;
                }
            }
        }
    }
    det
}

/// Solves the square system `mat * x = rhs`; `None` when the matrix is
/// numerically singular (pivot below `tiny`).
pub(crate) fn solve<T: Scalar>(mat: &mut [Vec<T>], rhs: &mut [T], tiny: T) -> Option<Vec<T>> {
    let n = mat.len();
    debug_assert_eq!(rhs.len(), n);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                mat[i][col]
                    .abs()
                    .partial_cmp(&mat[j][col].abs())
                    .expect("finite entries")
            })
            .unwrap();
        if mat[pivot][col].abs() <= tiny {
            return None;
        }
        mat.swap(pivot, col);
        rhs.swap(pivot, col);
        for row in col + 1..n {
            let factor = mat[row][col] / mat[col][col];
            if factor != T::zero() {
                for c in col..n {
                    let sub = factor * mat[col][c];
                    mat[row][c] = mat[row][c] - sub;
                }
                rhs[row] = rhs[row] - factor * rhs[col];
            }
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for c in row + 1..n {
            acc = acc - mat[row][c] * x[c];
        }
        x[row] = acc / mat[row][row];
    }
    Some(x)
}

/// Finds a nonzero vector `mu` with `B * mu = 0` for a wide matrix `B`
/// (more columns than rows), by elimination and a free-column choice.
pub(crate) fn kernel_vector<T: Scalar>(mut mat: Vec<Vec<T>>, tiny: T) -> Option<Vec<T>> {
    let rows = mat.len();
    let cols = if rows == 0 { return None } else { mat[0].len() };
    let mut pivot_col_of_row = Vec::with_capacity(rows);
    let mut is_pivot = vec![false; cols];
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let best = (r..rows)
            .max_by(|&i, &j| {
                mat[i][c].abs().partial_cmp(&mat[j][c].abs()).expect("finite entries")
            })
            .unwrap();
        if mat[best][c].abs() <= tiny {
            continue;
        }
        mat.swap(best, r);
        for i in 0..rows {
            if i != r {
                let factor = mat[i][c] / mat[r][c];
                if factor != T::zero() {
                    for cc in c..cols {
                        let sub = factor * mat[r][cc];
                        mat[i][cc] = mat[i][cc] - sub;
                    }
                }
            }
        }
        pivot_col_of_row.push(c);
        is_pivot[c] = true;
        r += 1;
    }
    let free = (0..cols).find(|&c| !is_pivot[c])?;
    let mut mu = vec![T::zero(); cols];
    mu[free] = T::one();
    for (row, &pc) in pivot_col_of_row.iter().enumerate() {
        mu[pc] = -mat[row][free] / mat[row][pc];
    }
    Some(mu)
}
