//! The centrally symmetric moment curve into `R^{2k}`, its moment
//! matrices, the closed-form determinant ratio, the explicit nullspace
//! vector of the `2k x (2k+1)` moment matrix, and the sign condition
//! linking that nullspace to the semicircle counts χ.
//!
//! The curve is `t -> (cos t, sin t, cos 3t, sin 3t, ..., cos (2k-1)t,
//! sin (2k-1)t)`; it is odd under the antipodal map. For `2k` points the
//! determinant of the curve matrix factors as a constant times the product
//! of `sin(t_l - t_j)` over pairs, which is what makes the explicit
//! nullspace formula below work.

use serde::{Deserialize, Serialize};

use crate::circle::{CirclePoint, Configuration};
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{lit, Scalar};

/// Configurations whose smallest pairwise `|sin(t_l - t_j)|` falls below
/// this are rejected: the closed-form products genuinely blow up there.
pub const MIN_PAIRWISE_SIN: f64 = 1e-6;

/// Evaluates the symmetric moment curve of order `k` at `t`, returning the
/// `2k` coordinates `(cos t, sin t, ..., cos (2k-1)t, sin (2k-1)t)`.
pub fn sm<T: Scalar>(k: usize, t: CirclePoint<T>) -> Result<Vec<T>> {
    if k == 0 {
        return Err(Error::InvalidOrder);
    }
    Ok(sm_unchecked(k, t.angle()))
}

/// Curve evaluation without the order check, for hot loops.
pub(crate) fn sm_unchecked<T: Scalar>(k: usize, angle: T) -> Vec<T> {
    let mut v = Vec::with_capacity(2 * k);
    for j in 0..k {
        let freq = T::from_usize(2 * j + 1).expect("small integer");
        let ft = freq * angle;
        v.push(ft.cos());
        v.push(ft.sin());
    }
    v
}

/// Derivative of the curve with respect to the angle.
pub(crate) fn sm_derivative<T: Scalar>(k: usize, angle: T) -> Vec<T> {
    let mut v = Vec::with_capacity(2 * k);
    for j in 0..k {
        let freq = T::from_usize(2 * j + 1).expect("small integer");
        let ft = freq * angle;
        v.push(-freq * ft.sin());
        v.push(freq * ft.cos());
    }
    v
}

/// The `2k x n` matrix whose columns are curve values at the listed
/// angles.
#[derive(Debug, Clone)]
pub struct MomentMatrix<T: Scalar> {
    k: usize,
    columns: Vec<Vec<T>>,
    source_angles: Configuration<T>,
}

impl<T: Scalar> MomentMatrix<T> {
    pub fn new(k: usize, config: &Configuration<T>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidOrder);
        }
        Ok(MomentMatrix {
            k,
            columns: config.iter().map(|p| sm_unchecked(k, p.angle())).collect(),
            source_angles: config.clone(),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn columns(&self) -> &[Vec<T>] {
        &self.columns
    }

    pub fn source_angles(&self) -> &Configuration<T> {
        &self.source_angles
    }

    /// Matrix-vector product `M v`.
    pub fn mul(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.columns.len());
        let mut out = vec![T::zero(); 2 * self.k];
        for (col, &w) in self.columns.iter().zip(v) {
            for (o, &c) in out.iter_mut().zip(col) {
                *o = *o + w * c;
            }
        }
        out
    }

    /// `max |M v| / max |v|`, the scale-free nullspace residual.
    pub fn relative_residual(&self, v: &[T]) -> T {
        linalg::norm_inf(&self.mul(v)) / linalg::norm_inf(v)
    }

    /// Rows in row-major order (for serialization and external checks).
    pub fn rows(&self) -> Vec<Vec<T>> {
        (0..2 * self.k)
            .map(|r| self.columns.iter().map(|c| c[r]).collect())
            .collect()
    }
}

fn expect_cardinality<T: Scalar>(config: &Configuration<T>, expected: usize) -> Result<()> {
    if config.len() != expected {
        return Err(Error::InvalidCardinality { expected, got: config.len() });
    }
    Ok(())
}

/// Rejects configurations with a pairwise `|sin(t_l - t_j)|` below
/// [`MIN_PAIRWISE_SIN`] (covers equal and antipodal pairs alike).
fn validate_sine_separation<T: Scalar>(config: &Configuration<T>) -> Result<()> {
    let floor = lit::<T>(MIN_PAIRWISE_SIN);
    let pts = config.points();
    for (j, p) in pts.iter().enumerate() {
        for (l, q) in pts.iter().enumerate().skip(j + 1) {
            if (q.angle() - p.angle()).sin().abs() < floor {
                return Err(Error::DegenerateConfiguration(format!(
                    "points {j} and {l} are equal or antipodal up to the sine floor"
                )));
            }
        }
    }
    Ok(())
}

/// Product of `sin(t_l - t_j)` over all pairs `j < l` in listed order.
pub fn sine_product<T: Scalar>(k: usize, config: &Configuration<T>) -> Result<T> {
    expect_cardinality(config, 2 * k)?;
    let pts = config.points();
    let mut prod = T::one();
    for (j, p) in pts.iter().enumerate() {
        for q in &pts[j + 1..] {
            prod = prod * (q.angle() - p.angle()).sin();
        }
    }
    Ok(prod)
}

/// Numeric determinant of the `2k x 2k` curve matrix by elimination with
/// partial pivoting. The ratio `det_direct / sine_product` is a constant
/// of magnitude `2^{2k(k-1)}` depending only on `k`.
pub fn det_direct<T: Scalar>(k: usize, config: &Configuration<T>) -> Result<T> {
    expect_cardinality(config, 2 * k)?;
    if k == 0 {
        return Err(Error::InvalidOrder);
    }
    // rows of the eliminated matrix are the curve coordinates
    let mut mat: Vec<Vec<T>> = (0..2 * k)
        .map(|r| {
            config
                .iter()
                .map(|p| {
                    let col = sm_unchecked(k, p.angle());
                    col[r]
                })
                .collect()
        })
        .collect();
    Ok(linalg::det_in_place(&mut mat))
}

/// The explicit nullspace vector of the `2k x (2k+1)` moment matrix,
/// together with the `alpha_i` denominators.
///
/// For each entry, `lambda_i * alpha_i` equals the full pairwise sine
/// product, and `sign(alpha_i) = (-1)^{chi(t_i)}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NullspaceVector<T: Scalar> {
    pub lambda: Vec<T>,
    pub alpha: Vec<T>,
}

impl<T: Scalar> NullspaceVector<T> {
    /// Normalized convex weights `lambda / sum(lambda)` when all entries
    /// share one sign; `None` otherwise.
    pub fn convex_weights(&self) -> Option<Vec<T>> {
        let all_pos = self.lambda.iter().all(|&l| l > T::zero());
        let all_neg = self.lambda.iter().all(|&l| l < T::zero());
        if !all_pos && !all_neg {
            return None;
        }
        let total: T = self.lambda.iter().copied().sum();
        Some(self.lambda.iter().map(|&l| l / total).collect())
    }
}

/// Computes the nullspace vector of the moment matrix of `2k+1` points by
/// the closed form `lambda_i = (-1)^i * prod_{j<l, j,l != i} sin(t_l - t_j)`,
/// not by a numeric factorization.
pub fn nullspace_lambda<T: Scalar>(k: usize, config: &Configuration<T>) -> Result<NullspaceVector<T>> {
    if k == 0 {
        return Err(Error::InvalidOrder);
    }
    expect_cardinality(config, 2 * k + 1)?;
    validate_sine_separation(config)?;
    let n = 2 * k + 1;
    let pts = config.points();

    let mut lambda = Vec::with_capacity(n);
    let mut alpha = Vec::with_capacity(n);
    for i in 0..n {
        let mut li = T::one();
        for j in 0..n {
            if j == i {
                continue;
            }
            for l in j + 1..n {
                if l == i {
                    continue;
                }
                li = li * (pts[l].angle() - pts[j].angle()).sin();
            }
        }
        if i % 2 == 1 {
            li = -li;
        }
        lambda.push(li);

        let mut ai = T::one();
        for (j, q) in pts.iter().enumerate() {
            if j != i {
                ai = ai * (q.angle() - pts[i].angle()).sin();
            }
        }
        alpha.push(ai);
    }
    Ok(NullspaceVector { lambda, alpha })
}

/// True iff every semicircle count `chi(t_i)` equals `k`, which holds
/// exactly when the `alpha_i` share one sign. Both routes are computed
/// and cross-checked.
pub fn same_sign_condition<T: Scalar>(k: usize, config: &Configuration<T>) -> Result<bool> {
    let ns = nullspace_lambda(k, config)?;
    let n = 2 * k + 1;
    let chi_uniform = (0..n).try_fold(true, |acc, i| -> Result<bool> {
        Ok(acc && config.chi_count(i)? == k)
    })?;
    let all_pos = ns.alpha.iter().all(|&a| a > T::zero());
    let all_neg = ns.alpha.iter().all(|&a| a < T::zero());
    assert_eq!(
        chi_uniform,
        all_pos || all_neg,
        "sign uniformity of alpha disagrees with the chi counts"
    );
    Ok(chi_uniform)
}
