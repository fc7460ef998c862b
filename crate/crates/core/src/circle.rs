//! Angle arithmetic on the circle: canonical representatives in `[0, 2π)`,
//! open/closed arcs, geodesic distances, diameters of finite configurations,
//! and the semicircle count χ.
//!
//! The circle carries the geodesic metric of total circumference `2π`.
//! Coincidence and antipodality tests use the module tolerance
//! [`ANGLE_EPS`] (radians); arc membership itself is exact.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

/// Tolerance (radians) for "equal" and "antipodal" point tests.
pub const ANGLE_EPS: f64 = 1e-9;

/// A point of the circle, stored as its canonical angle in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CirclePoint<T: Scalar> {
    angle: T,
}

impl<T: Scalar> CirclePoint<T> {
    /// Builds a circle point from any real angle, reducing mod `2π` by
    /// floor division. The canonical representative always satisfies
    /// `0 <= angle < 2π`, including for inputs like `-1e-18` where the
    /// reduction itself rounds to `2π`.
    pub fn new(raw: T) -> Self {
        let tau = T::TAU();
        let mut a = raw - (raw / tau).floor() * tau;
        if a >= tau {
            a = a - tau;
        }
        if a < T::zero() {
            a = a + tau;
        }
        CirclePoint { angle: a }
    }

    /// The canonical angle in `[0, 2π)`.
    #[inline]
    pub fn angle(&self) -> T {
        self.angle
    }

    /// The antipodal point, at angle `t + π`.
    pub fn antipode(&self) -> Self {
        CirclePoint::new(self.angle + T::PI())
    }

    /// Rotates by `delta` radians (counterclockwise for positive `delta`).
    pub fn rotate(&self, delta: T) -> Self {
        CirclePoint::new(self.angle + delta)
    }

    /// Counterclockwise arc length from `self` to `other`, in `[0, 2π)`.
    pub fn ccw_to(&self, other: &Self) -> T {
        let tau = T::TAU();
        let mut d = other.angle - self.angle;
        if d < T::zero() {
            d = d + tau;
        }
        if d >= tau {
            d = d - tau;
        }
        d
    }

    /// True when the two points coincide within [`ANGLE_EPS`].
    pub fn approx_eq(&self, other: &Self) -> bool {
        geodesic_dist(*self, *other) <= lit(ANGLE_EPS)
    }

    /// True when the two points are antipodal within [`ANGLE_EPS`].
    pub fn is_antipodal_to(&self, other: &Self) -> bool {
        (geodesic_dist(*self, *other) - T::PI()).abs() <= lit(ANGLE_EPS)
    }
}

/// Geodesic distance `min(|a-b|, 2π-|a-b|)`; symmetric, valued in `[0, π]`.
pub fn geodesic_dist<T: Scalar>(a: CirclePoint<T>, b: CirclePoint<T>) -> T {
    let d = (a.angle() - b.angle()).abs();
    d.min(T::TAU() - d)
}

/// A circular arc from `a` counterclockwise to `b`, open or closed.
///
/// Membership follows the two-case definition: for `a < b` the arc is the
/// set of `t` with `a < t < b`; for `a > b` it wraps through `2π`. The
/// comparisons are exact; no tolerance is applied.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Arc<T: Scalar> {
    pub a: CirclePoint<T>,
    pub b: CirclePoint<T>,
    pub closed: bool,
}

impl<T: Scalar> Arc<T> {
    /// Open arc `(a, b)`. The endpoints must be distinct (within
    /// [`ANGLE_EPS`]) for the definition to make sense.
    pub fn open(a: CirclePoint<T>, b: CirclePoint<T>) -> Result<Self> {
        if a.approx_eq(&b) {
            return Err(Error::EqualPoints);
        }
        Ok(Arc { a, b, closed: false })
    }

    /// Closed arc `[a, b]`. Equal endpoints give the singleton `{a}`.
    pub fn closed(a: CirclePoint<T>, b: CirclePoint<T>) -> Self {
        Arc { a, b, closed: true }
    }

    /// Arc length traversed counterclockwise from `a` to `b`.
    pub fn length(&self) -> T {
        self.a.ccw_to(&self.b)
    }

    /// Two-case membership test, honoring the closed flag.
    pub fn contains(&self, t: CirclePoint<T>) -> bool {
        let (a, b, t) = (self.a.angle(), self.b.angle(), t.angle());
        if self.closed {
            if a <= b {
                a <= t && t <= b
            } else {
                t >= a || t <= b
            }
        } else if a < b {
            a < t && t < b
        } else if a > b {
            t > a || t < b
        } else {
            // open arc with a == b would be ill-formed; constructor rejects it
            false
        }
    }
}

/// An ordered, finite list of circle points.
///
/// The order is as listed; [`Configuration::sort_ccw`] produces the
/// canonical counterclockwise order starting from the smallest canonical
/// angle. Operations that need distinctness or non-antipodality validate
/// it themselves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Configuration<T: Scalar> {
    points: Vec<CirclePoint<T>>,
}

impl<T: Scalar> Configuration<T> {
    /// Wraps a list of points in the given order.
    pub fn new(points: Vec<CirclePoint<T>>) -> Self {
        Configuration { points }
    }

    /// Builds a configuration from raw angles.
    pub fn from_angles(angles: &[T]) -> Self {
        Configuration {
            points: angles.iter().map(|&a| CirclePoint::new(a)).collect(),
        }
    }

    /// Sorts points into counterclockwise order starting from the smallest
    /// canonical angle. The result is invariant under rotation of the
    /// input list; the empty input is allowed (downstream operations
    /// re-validate).
    pub fn sort_ccw(mut points: Vec<CirclePoint<T>>) -> Self {
        points.sort_by(|p, q| p.angle().partial_cmp(&q.angle()).expect("angles are finite"));
        Configuration { points }
    }

    #[inline]
    pub fn points(&self) -> &[CirclePoint<T>] {
        &self.points
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, CirclePoint<T>> {
        self.points.iter()
    }

    /// True when the angles strictly increase after rotating the circle so
    /// the first listed point comes first.
    pub fn is_ccw(&self) -> bool {
        if self.points.len() < 2 {
            return true;
        }
        let base = self.points[0];
        let mut prev = T::zero();
        for p in &self.points[1..] {
            let lift = base.ccw_to(p);
            if lift <= prev {
                return false;
            }
            prev = lift;
        }
        true
    }

    /// Largest pairwise geodesic distance; `0` for singletons.
    pub fn diameter(&self) -> Result<T> {
        if self.points.is_empty() {
            return Err(Error::EmptyConfiguration);
        }
        let mut max = T::zero();
        for (i, p) in self.points.iter().enumerate() {
            for q in &self.points[i + 1..] {
                max = max.max(geodesic_dist(*p, *q));
            }
        }
        Ok(max)
    }

    /// Checks that all points are pairwise distinct and non-antipodal
    /// within [`ANGLE_EPS`].
    pub fn validate_distinct_non_antipodal(&self) -> Result<()> {
        for (i, p) in self.points.iter().enumerate() {
            for (j, q) in self.points.iter().enumerate().skip(i + 1) {
                if p.approx_eq(q) {
                    return Err(Error::DegenerateConfiguration(format!(
                        "points {i} and {j} coincide"
                    )));
                }
                if p.is_antipodal_to(q) {
                    return Err(Error::DegenerateConfiguration(format!(
                        "points {i} and {j} are antipodal"
                    )));
                }
            }
        }
        Ok(())
    }

    /// χ-count at index `i`: the number of other points in the open
    /// semicircle arc `(t_i + π, t_i)`. For `2k+1` points the counts sum
    /// to `k(2k+1)`, and χ ≡ k characterizes the sign-uniform case.
    pub fn chi_count(&self, i: usize) -> Result<usize> {
        self.validate_distinct_non_antipodal()?;
        let ti = self.points[i];
        let arc = Arc::open(ti.antipode(), ti).expect("non-degenerate by validation");
        Ok(self
            .points
            .iter()
            .enumerate()
            .filter(|&(j, p)| j != i && arc.contains(*p))
            .count())
    }
}
