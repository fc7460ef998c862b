//! Raked homogeneous trigonometric polynomials: odd-frequency spectra
//! `{1, 3, ..., 2k-1}`, no constant term. Every such polynomial is the
//! inner product of a coefficient vector with the symmetric moment curve
//! of order `k`, flips sign under the antipodal map, and has its `4k-2`
//! circle roots prescribed freely through the product form
//! `prod_l sin(v_l - t)`.

use serde::{Deserialize, Serialize};

use crate::circle::{Arc, CirclePoint, Configuration, ANGLE_EPS};
use crate::error::{Error, Result};
use crate::linalg;
use crate::moment::sm_unchecked;
use crate::scalar::{lit, Scalar};

/// Coefficients of `sum_j a_j cos((2j-1) t) + b_j sin((2j-1) t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RakedPolynomial<T: Scalar> {
    k: usize,
    a: Vec<T>,
    b: Vec<T>,
}

impl<T: Scalar> RakedPolynomial<T> {
    pub fn new(k: usize, a: Vec<T>, b: Vec<T>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidOrder);
        }
        if a.len() != k || b.len() != k {
            return Err(Error::InvalidCardinality { expected: k, got: a.len().max(b.len()) });
        }
        Ok(RakedPolynomial { k, a, b })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Degree of the polynomial, `2k - 1`.
    pub fn degree(&self) -> usize {
        2 * self.k - 1
    }

    pub fn cos_coefficients(&self) -> &[T] {
        &self.a
    }

    pub fn sin_coefficients(&self) -> &[T] {
        &self.b
    }

    /// The interleaved vector `(a_1, b_1, ..., a_k, b_k)`, so that
    /// `eval(t) = z . sm(k, t)`.
    pub fn coefficient_vector(&self) -> Vec<T> {
        let mut z = Vec::with_capacity(2 * self.k);
        for j in 0..self.k {
            z.push(self.a[j]);
            z.push(self.b[j]);
        }
        z
    }

    /// Reads coefficients off an interleaved vector of length `2k`; this
    /// turns a separating Farkas vector into the polynomial positive on
    /// the separated configuration.
    pub fn from_coefficient_vector(k: usize, z: &[T]) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidOrder);
        }
        if z.len() != 2 * k {
            return Err(Error::DimensionMismatch { expected: 2 * k, got: z.len() });
        }
        let a = (0..k).map(|j| z[2 * j]).collect();
        let b = (0..k).map(|j| z[2 * j + 1]).collect();
        Ok(RakedPolynomial { k, a, b })
    }

    pub fn eval(&self, t: CirclePoint<T>) -> T {
        self.eval_angle(t.angle())
    }

    pub fn eval_angle(&self, angle: T) -> T {
        let mut acc = T::zero();
        for j in 0..self.k {
            let freq = T::from_usize(2 * j + 1).expect("small integer");
            let ft = freq * angle;
            acc = acc + self.a[j] * ft.cos() + self.b[j] * ft.sin();
        }
        acc
    }

    /// The polynomial `prod_l sin(v_l - t)` with prescribed roots at the
    /// `2k - 1` points `v_l` and their antipodes, and at nothing else.
    /// The sign alternates between consecutive roots in circular order.
    ///
    /// Coefficients are recovered by collocation at `2k` nodes placed
    /// uniformly inside a half-period, where the odd-frequency basis is
    /// unisolvent (its collocation determinant is a nonzero multiple of
    /// the pairwise sine product, and nodes inside an open half-circle
    /// are never equal or antipodal). The normalization is exactly that
    /// of the sine product; callers may rescale.
    pub fn from_roots(roots: &[CirclePoint<T>]) -> Result<Self> {
        if roots.is_empty() || roots.len() % 2 == 0 {
            return Err(Error::InvalidCardinality { expected: roots.len() + 1, got: roots.len() });
        }
        let k = (roots.len() + 1) / 2;
        for (i, p) in roots.iter().enumerate() {
            for (j, q) in roots.iter().enumerate().skip(i + 1) {
                if p.approx_eq(q) {
                    return Err(Error::DegenerateRoots(format!("roots {i} and {j} coincide")));
                }
                if p.is_antipodal_to(q) {
                    return Err(Error::DegenerateRoots(format!("roots {i} and {j} are antipodal")));
                }
            }
        }

        let product = |t: T| {
            roots
                .iter()
                .map(|v| (v.angle() - t).sin())
                .fold(T::one(), |acc, s| acc * s)
        };

        let nodes: Vec<T> = (0..2 * k)
            .map(|m| {
                T::PI() * T::from_usize(2 * m + 1).expect("small integer")
                    / T::from_usize(4 * k).expect("small integer")
            })
            .collect();
        let mut mat: Vec<Vec<T>> = nodes.iter().map(|&t| sm_unchecked(k, t)).collect();
        let mut rhs: Vec<T> = nodes.iter().map(|&t| product(t)).collect();
        let z = linalg::solve(&mut mat, &mut rhs, lit(1e-13))
            .expect("half-period collocation nodes are unisolvent");
        let poly = RakedPolynomial::from_coefficient_vector(k, &z)?;

        for v in roots {
            let at_root = poly.eval(*v).abs();
            let at_antipode = poly.eval(v.antipode()).abs();
            assert!(
                at_root <= lit(1e-9) && at_antipode <= lit(1e-9),
                "prescribed roots must be reproduced to 1e-9"
            );
        }
        Ok(poly)
    }

    /// Exact minimum of the polynomial over a finite configuration.
    pub fn min_on_set(&self, set: &Configuration<T>) -> Result<(T, CirclePoint<T>)> {
        if set.is_empty() {
            return Err(Error::EmptyConfiguration);
        }
        let mut best: Option<(T, CirclePoint<T>)> = None;
        for p in set.iter() {
            let v = self.eval(*p);
            if best.map_or(true, |(bv, _)| v < bv) {
                best = Some((v, *p));
            }
        }
        Ok(best.expect("nonempty set"))
    }

    /// Partitions the circle into maximal arcs of constant sign at the
    /// given grid resolution, refining the root locations by bisection to
    /// `1e-10`. Roots of even multiplicity do not change the sign and get
    /// absorbed into the surrounding arc. Requires `grid >= 8k`.
    pub fn sign_pattern(&self, grid: usize) -> Result<SignPattern<T>> {
        let min_grid = 8 * self.k;
        if grid < min_grid {
            return Err(Error::GridTooCoarse { min: min_grid, got: grid });
        }
        let g = T::from_usize(grid).expect("grid size fits scalar");
        let h = T::TAU() / g;
        let samples: Vec<T> = (0..grid)
            .map(|i| self.eval_angle(h * T::from_usize(i).expect("index fits scalar")))
            .collect();
        let max_abs = linalg::norm_inf(&samples);
        if max_abs == T::zero() {
            return Ok(SignPattern { roots: vec![], arcs: vec![] });
        }
        let zero_tol = lit::<T>(1e-12) * max_abs;

        let mut roots: Vec<T> = Vec::new();
        for i in 0..grid {
            let t0 = h * T::from_usize(i).expect("index fits scalar");
            let (s0, s1) = (samples[i], samples[(i + 1) % grid]);
            if s0.abs() <= zero_tol {
                roots.push(t0);
            } else if s1.abs() > zero_tol && (s0 > T::zero()) != (s1 > T::zero()) {
                roots.push(self.bisect_root(t0, t0 + h));
            }
        }
        roots.sort_by(|a, b| a.partial_cmp(b).expect("finite angles"));
        let merge_tol = lit::<T>(ANGLE_EPS);
        let mut merged: Vec<T> = Vec::with_capacity(roots.len());
        for r in roots {
            if merged.last().map_or(true, |&last| r - last > merge_tol) {
                merged.push(r);
            }
        }
        if merged.len() > 1 {
            let wrap = merged[0] + T::TAU() - *merged.last().expect("nonempty");
            if wrap <= merge_tol {
                merged.pop();
            }
        }

        let roots: Vec<CirclePoint<T>> = merged.iter().map(|&r| CirclePoint::new(r)).collect();
        if roots.len() < 2 {
            return Ok(SignPattern { roots, arcs: vec![] });
        }
        let mut arcs = Vec::with_capacity(roots.len());
        for (i, r) in roots.iter().enumerate() {
            let next = roots[(i + 1) % roots.len()];
            let mid = r.rotate(r.ccw_to(&next) / lit(2.0));
            let v = self.eval(mid);
            let sign = if v > zero_tol {
                Sign::Positive
            } else if v < -zero_tol {
                Sign::Negative
            } else {
                Sign::Zero
            };
            arcs.push(SignArc { arc: Arc::open(*r, next).expect("distinct refined roots"), sign });
        }
        Ok(SignPattern { roots, arcs })
    }

    fn bisect_root(&self, mut lo: T, mut hi: T) -> T {
        let target = lit::<T>(1e-10);
        let lo_positive = self.eval_angle(lo) > T::zero();
        while hi - lo > target {
            let mid = (lo + hi) / lit(2.0);
            let v = self.eval_angle(mid);
            if v == T::zero() {
                return mid;
            }
            if (v > T::zero()) == lo_positive {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo + hi) / lit(2.0)
    }
}

/// Sign of a polynomial on an arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignArc<T: Scalar> {
    pub arc: Arc<T>,
    pub sign: Sign,
}

/// Roots and constant-sign arcs of a polynomial around the circle.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignPattern<T: Scalar> {
    pub roots: Vec<CirclePoint<T>>,
    pub arcs: Vec<SignArc<T>>,
}

impl<T: Scalar> SignPattern<T> {
    /// True when consecutive arcs strictly alternate between positive and
    /// negative.
    pub fn alternates(&self) -> bool {
        if self.arcs.is_empty() {
            return false;
        }
        self.arcs.iter().zip(self.arcs.iter().cycle().skip(1)).all(|(a, b)| {
            matches!(
                (a.sign, b.sign),
                (Sign::Positive, Sign::Negative) | (Sign::Negative, Sign::Positive)
            )
        })
    }
}
