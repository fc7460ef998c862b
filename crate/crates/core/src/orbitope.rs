//! The convex hull of the order-2 symmetric moment curve in `R^4`: face
//! classification, gauge computation, radial projection onto the
//! boundary, and the transcription of boundary points into measures.
//!
//! The proper faces of this body are the curve points themselves
//! (vertices), segments between curve points at arc distance up to
//! `2 pi / 3` (edges), and the equilateral triangles spanned by
//! `{t, t + 2 pi/3, t + 4 pi/3}`. The boundary projector exploits that:
//! a grid LP brackets the gauge, the LP support is clustered and snapped
//! to a face hypothesis, and a Newton polish solves the face equations to
//! high accuracy. For orders `k >= 3` the facial structure is unknown;
//! only the grid LP gauge and the edge predicate are offered there.

use serde::{Deserialize, Serialize};

use crate::circle::{geodesic_dist, CirclePoint, ANGLE_EPS};
use crate::error::{Error, Result};
use crate::linalg;
use crate::lp::{LpProblem, LpSolution, Relation};
use crate::moment::{sm_derivative, sm_unchecked};
use crate::scalar::{lit, Scalar};
use crate::thickening::Atom;

/// Largest arc length spanned by an edge face, `2 pi / 3`.
pub fn edge_arc_bound<T: Scalar>() -> T {
    T::TAU() / lit(3.0)
}

/// Arc-length bound for edges of the order-`k` body, `2 pi (k-1)/(2k-1)`.
pub fn edge_arc_bound_b2k<T: Scalar>(k: usize) -> T {
    T::TAU() * T::from_usize(k - 1).expect("small integer")
        / T::from_usize(2 * k - 1).expect("small integer")
}

/// Grid used by [`radial_project`].
pub const DEFAULT_PROJECTION_GRID: usize = 720;

/// Newton polish: target residual and iteration cap.
const POLISH_TOL: f64 = 1e-12;
const POLISH_MAX_ITER: usize = 50;

/// A proper face of the body, with barycentric data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Face<T: Scalar> {
    Vertex { t: CirclePoint<T> },
    /// `weight` belongs to `t1`; `t2` carries `1 - weight`.
    Edge { t1: CirclePoint<T>, t2: CirclePoint<T>, weight: T },
    /// Angles are `t`, `t + 2 pi/3`, `t + 4 pi/3` with weights
    /// `w1, w2, w3`.
    Triangle { t: CirclePoint<T>, w1: T, w2: T, w3: T },
}

impl<T: Scalar> Face<T> {
    /// Support atoms of the barycentric combination.
    pub fn atoms(&self) -> Vec<Atom<T>> {
        match self {
            Face::Vertex { t } => vec![Atom { angle: *t, weight: T::one() }],
            Face::Edge { t1, t2, weight } => vec![
                Atom { angle: *t1, weight: *weight },
                Atom { angle: *t2, weight: T::one() - *weight },
            ],
            Face::Triangle { t, w1, w2, w3 } => {
                let third = T::TAU() / lit(3.0);
                vec![
                    Atom { angle: *t, weight: *w1 },
                    Atom { angle: t.rotate(third), weight: *w2 },
                    Atom { angle: t.rotate(third + third), weight: *w3 },
                ]
            }
        }
    }

    /// The point of `R^4` this face datum denotes.
    pub fn coordinates(&self) -> Vec<T> {
        let mut out = vec![T::zero(); 4];
        for atom in self.atoms() {
            let v = sm_unchecked(2, atom.angle.angle());
            for (o, c) in out.iter_mut().zip(v) {
                *o = *o + atom.weight * c;
            }
        }
        out
    }

    /// Checks the face invariants: edge arcs within the bound with an
    /// interior weight, triangle weights positive and summing to one.
    pub fn validate(&self) -> Result<()> {
        let eps = lit::<T>(ANGLE_EPS);
        match self {
            Face::Vertex { .. } => Ok(()),
            Face::Edge { t1, t2, weight } => {
                if t1.approx_eq(t2) {
                    return Err(Error::InvalidBoundaryPoint("edge endpoints coincide".into()));
                }
                if geodesic_dist(*t1, *t2) > edge_arc_bound::<T>() + eps {
                    return Err(Error::InvalidBoundaryPoint(
                        "edge arc exceeds the 2 pi / 3 bound".into(),
                    ));
                }
                if !(*weight > T::zero() && *weight < T::one()) {
                    return Err(Error::InvalidBoundaryPoint(
                        "edge weight must lie strictly inside (0, 1)".into(),
                    ));
                }
                Ok(())
            }
            Face::Triangle { w1, w2, w3, .. } => {
                if !(*w1 > T::zero() && *w2 > T::zero() && *w3 > T::zero()) {
                    return Err(Error::InvalidBoundaryPoint(
                        "triangle weights must be strictly positive".into(),
                    ));
                }
                if (*w1 + *w2 + *w3 - T::one()).abs() > lit(1e-9) {
                    return Err(Error::InvalidBoundaryPoint(
                        "triangle weights must sum to one".into(),
                    ));
                }
                Ok(())
            }
        }
    }
}

/// A boundary point with its face certificate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundaryPointB4<T: Scalar> {
    pub face: Face<T>,
    pub coordinates: Vec<T>,
}

/// Result of a gauge computation: `scale * x` lies on the boundary and
/// equals the convex combination of curve points in `support`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GaugeResult<T: Scalar> {
    pub scale: T,
    pub support: Vec<Atom<T>>,
    pub refined: bool,
}

/// Classification verdict for a set of 1 to 3 angles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum FaceClass<T: Scalar> {
    Vertex { t: CirclePoint<T> },
    Edge { t1: CirclePoint<T>, t2: CirclePoint<T> },
    Triangle { t: CirclePoint<T> },
    NotAFace,
}

/// Decides which face, if any, a set of angles spans: a singleton is a
/// vertex, a pair within closed arc `2 pi/3` an edge, an equilateral
/// triple (within [`ANGLE_EPS`]) a triangle; anything else is not a face.
pub fn classify_face<T: Scalar>(angles: &[CirclePoint<T>]) -> FaceClass<T> {
    let mut sorted: Vec<CirclePoint<T>> = angles.to_vec();
    sorted.sort_by(|a, b| a.angle().partial_cmp(&b.angle()).expect("finite angles"));
    let mut distinct: Vec<CirclePoint<T>> = Vec::with_capacity(sorted.len());
    for p in sorted {
        if !distinct.iter().any(|q| q.approx_eq(&p)) {
            distinct.push(p);
        }
    }
    let eps = lit::<T>(ANGLE_EPS);
    match distinct.len() {
        1 => FaceClass::Vertex { t: distinct[0] },
        2 => {
            if geodesic_dist(distinct[0], distinct[1]) <= edge_arc_bound::<T>() + eps {
                FaceClass::Edge { t1: distinct[0], t2: distinct[1] }
            } else {
                FaceClass::NotAFace
            }
        }
        3 => {
            let third = T::TAU() / lit(3.0);
            let equilateral = (0..3).all(|i| {
                let gap = distinct[i].ccw_to(&distinct[(i + 1) % 3]);
                (gap - third).abs() <= eps
            });
            if equilateral {
                FaceClass::Triangle { t: distinct[0] }
            } else {
                FaceClass::NotAFace
            }
        }
        _ => FaceClass::NotAFace,
    }
}

/// Whether two distinct curve parameters span an edge of the order-`k`
/// body: arc distance at most `2 pi (k-1)/(2k-1)`. For `k = 2` this
/// agrees with [`classify_face`]'s edge test.
pub fn edge_predicate_b2k<T: Scalar>(k: usize, t0: CirclePoint<T>, t1: CirclePoint<T>) -> Result<bool> {
    if k == 0 {
        return Err(Error::InvalidOrder);
    }
    if t0.approx_eq(&t1) {
        return Err(Error::EqualPoints);
    }
    Ok(geodesic_dist(t0, t1) <= edge_arc_bound_b2k::<T>(k) + lit(1e-12))
}

/// Grid-LP gauge for arbitrary order `k`: maximizes `s` with `s * x` a
/// convex combination of curve points sampled on `grid` angles. No face
/// snapping is attempted; the support is the raw LP support. The scale
/// under-approximates the true gauge by `O(grid^-2)`.
pub fn gauge_grid<T: Scalar>(k: usize, x: &[T], grid: usize) -> Result<GaugeResult<T>> {
    if k == 0 {
        return Err(Error::InvalidOrder);
    }
    if x.len() != 2 * k {
        return Err(Error::DimensionMismatch { expected: 2 * k, got: x.len() });
    }
    let norm = linalg::norm2(x);
    if norm < lit(1e-9) {
        return Err(Error::ZeroVector);
    }
    if grid < 90 {
        return Err(Error::GridTooCoarse { min: 90, got: grid });
    }
    let x_hat = linalg::scale(x, T::one() / norm);
    let (scale_hat, support) = gauge_lp(k, &x_hat, grid)?;
    Ok(GaugeResult { scale: scale_hat / norm, support, refined: false })
}

/// Gauge of a vector against the `k = 2` body, with face refinement.
/// `scale * x` is the boundary point of the ray through `x`; the support
/// lists the face combination producing it. `refined` reports whether
/// the Newton polish succeeded (otherwise the raw grid-LP answer is
/// returned).
pub fn gauge<T: Scalar>(x: &[T], grid: usize) -> Result<GaugeResult<T>> {
    let p = project_b4(x, grid)?;
    let support = if p.refined { p.face.atoms() } else { p.support };
    Ok(GaugeResult { scale: p.scale, support, refined: p.refined })
}

/// Radial projection of a nonzero vector onto the boundary, carrying the
/// face certificate. Idempotent up to the polish tolerance.
pub fn radial_project<T: Scalar>(x: &[T]) -> Result<BoundaryPointB4<T>> {
    radial_project_with_grid(x, DEFAULT_PROJECTION_GRID)
}

pub fn radial_project_with_grid<T: Scalar>(x: &[T], grid: usize) -> Result<BoundaryPointB4<T>> {
    let p = project_b4(x, grid)?;
    let coordinates = if p.refined {
        p.face.coordinates()
    } else {
        linalg::scale(x, p.scale)
    };
    Ok(BoundaryPointB4 { face: p.face, coordinates })
}

/// Boundary-support of the radial projection of `x` for the order-`k`
/// body: the snapped face support for `k <= 2`, the raw grid-LP support
/// for `k >= 3` where the facial structure is unknown.
pub fn projection_support<T: Scalar>(k: usize, x: &[T], grid: usize) -> Result<Vec<Atom<T>>> {
    match k {
        0 => Err(Error::InvalidOrder),
        1 => {
            // the order-1 body is the unit disk: project to the angle
            if x.len() != 2 {
                return Err(Error::DimensionMismatch { expected: 2, got: x.len() });
            }
            if linalg::norm2(x) < lit(1e-9) {
                return Err(Error::ZeroVector);
            }
            let angle = x[1].atan2(x[0]);
            Ok(vec![Atom { angle: CirclePoint::new(angle), weight: T::one() }])
        }
        2 => Ok(radial_project_with_grid(x, grid)?.face.atoms()),
        _ => Ok(gauge_grid(k, x, grid)?.support),
    }
}

/// Transcribes a boundary point into the probability measure carried by
/// its face: the face angles with their barycentric weights. Validates
/// the face invariants and that the coordinates match the face datum.
pub fn iota<T: Scalar>(b: &BoundaryPointB4<T>) -> Result<crate::thickening::DiscreteMeasure<T>> {
    b.face.validate()?;
    let expect = b.face.coordinates();
    if b.coordinates.len() != 4 {
        return Err(Error::InvalidBoundaryPoint("coordinates must have dimension 4".into()));
    }
    let dev = b
        .coordinates
        .iter()
        .zip(&expect)
        .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()));
    if dev > lit(1e-8) {
        return Err(Error::InvalidBoundaryPoint(
            "coordinates disagree with the face combination".into(),
        ));
    }
    let atoms = b.face.atoms();
    crate::thickening::DiscreteMeasure::new(
        atoms.iter().map(|a| a.angle).collect(),
        atoms.iter().map(|a| a.weight).collect(),
        edge_arc_bound::<T>(),
    )
}

struct Projection<T: Scalar> {
    scale: T,
    face: Face<T>,
    support: Vec<Atom<T>>,
    refined: bool,
}

fn project_b4<T: Scalar>(x: &[T], grid: usize) -> Result<Projection<T>> {
    if x.len() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: x.len() });
    }
    let norm = linalg::norm2(x);
    if norm < lit(1e-9) {
        return Err(Error::ZeroVector);
    }
    if grid < 90 {
        return Err(Error::GridTooCoarse { min: 90, got: grid });
    }
    let x_hat = linalg::scale(x, T::one() / norm);

    let (scale_lp, support_lp) = gauge_lp(2, &x_hat, grid)?;
    let step = T::TAU() / T::from_usize(grid).expect("grid size fits scalar");
    let clusters = cluster_circular(&support_lp, step * lit(3.0));

    for hyp in hypothesis_chain(&clusters, step, scale_lp) {
        if let Some((face, scale_hat)) = polish(&x_hat, &hyp) {
            return Ok(Projection {
                scale: scale_hat / norm,
                support: face.atoms(),
                face,
                refined: true,
            });
        }
    }

    log::debug!("face polish failed; falling back to the grid-LP answer");
    let face = fallback_face(&clusters);
    Ok(Projection { scale: scale_lp / norm, face, support: support_lp, refined: false })
}

/// LP core shared by the gauge entry points; `x_hat` must be unit.
///
/// Solved in conical form: minimize the total mass `sum lambda` subject
/// to `sum lambda_i sm(g_i) = x_hat`, `lambda >= 0`. The optimal mass is
/// the gauge of `x_hat` against the inscribed grid polytope, so the
/// boundary scale is its reciprocal and the convex support weights are
/// `lambda / sum lambda`. Unlike the max-scale form, the right-hand side
/// is generic, which keeps the simplex away from a fully degenerate
/// start.
fn gauge_lp<T: Scalar>(k: usize, x_hat: &[T], grid: usize) -> Result<(T, Vec<Atom<T>>)> {
    let g = T::from_usize(grid).expect("grid size fits scalar");
    let angles: Vec<T> = (0..grid)
        .map(|i| T::TAU() * T::from_usize(i).expect("index fits scalar") / g)
        .collect();
    let columns: Vec<Vec<T>> = angles.iter().map(|&t| sm_unchecked(k, t)).collect();

    let mut p = LpProblem::minimize(vec![T::one(); grid]);
    for e in 0..2 * k {
        p.add_row(columns.iter().map(|c| c[e]).collect(), Relation::Eq, x_hat[e]);
    }

    let LpSolution::Optimal { x, objective: total } = p.solve()? else {
        return Err(Error::LpFailure("gauge program must be feasible for spanning grids".into()));
    };
    if total <= T::zero() {
        return Err(Error::LpFailure("gauge program returned zero mass".into()));
    }
    let scale = T::one() / total;
    let atoms: Vec<Atom<T>> = (0..grid)
        .filter(|&i| x[i] / total > lit(1e-10))
        .map(|i| Atom { angle: CirclePoint::new(angles[i]), weight: x[i] / total })
        .collect();
    Ok((scale, atoms))
}

#[derive(Debug, Clone, Copy)]
struct Cluster<T: Scalar> {
    angle: CirclePoint<T>,
    weight: T,
}

/// Groups support atoms into clusters separated by circular gaps larger
/// than `threshold`; cluster angles are weight-averaged.
fn cluster_circular<T: Scalar>(atoms: &[Atom<T>], threshold: T) -> Vec<Cluster<T>> {
    if atoms.is_empty() {
        return vec![];
    }
    let mut sorted: Vec<Atom<T>> = atoms.to_vec();
    sorted.sort_by(|a, b| a.angle.angle().partial_cmp(&b.angle.angle()).expect("finite angles"));

    // cut the circle at the largest gap
    let n = sorted.len();
    let mut cut = 0;
    let mut largest = T::neg_infinity();
    for i in 0..n {
        let gap = sorted[i].angle.ccw_to(&sorted[(i + 1) % n].angle);
        if gap > largest {
            largest = gap;
            cut = (i + 1) % n;
        }
    }
    sorted.rotate_left(cut);

    let base = sorted[0].angle;
    let mut clusters: Vec<(T, T)> = Vec::new(); // (weighted angle sum in lift, weight)
    let mut prev_lift = T::zero();
    for atom in &sorted {
        let lift = base.ccw_to(&atom.angle);
        if clusters.is_empty() || lift - prev_lift > threshold {
            clusters.push((lift * atom.weight, atom.weight));
        } else {
            let last = clusters.last_mut().expect("nonempty");
            last.0 = last.0 + lift * atom.weight;
            last.1 = last.1 + atom.weight;
        }
        prev_lift = lift;
    }
    clusters
        .into_iter()
        .map(|(sum, weight)| Cluster { angle: base.rotate(sum / weight), weight })
        .collect()
}

#[derive(Debug, Clone)]
enum Hypothesis<T: Scalar> {
    Vertex { t: T, s: T },
    Edge { t1: T, t2: T, w: T, s: T },
    Triangle { t: T, w1: T, w2: T, s: T },
}

/// Candidate face hypotheses in the order they should be tried: the
/// cluster-count suggestion first, then the fallbacks that cover
/// misleading clusterings (short edges inside one cluster, triangles
/// with a vanishing corner weight seen as two clusters).
fn hypothesis_chain<T: Scalar>(clusters: &[Cluster<T>], step: T, s_lp: T) -> Vec<Hypothesis<T>> {
    let mut chain = Vec::new();
    if clusters.is_empty() {
        return chain;
    }
    let third = T::TAU() / lit(3.0);
    match clusters.len() {
        1 => {
            let t = clusters[0].angle.angle();
            chain.push(Hypothesis::Vertex { t, s: s_lp });
            // a short edge can hide inside one cluster
            let split = step.max(lit(1e-3));
            chain.push(Hypothesis::Edge {
                t1: t - split,
                t2: t + split,
                w: lit(0.5),
                s: s_lp,
            });
        }
        2 => {
            let (c0, c1) = (clusters[0], clusters[1]);
            let w = c0.weight / (c0.weight + c1.weight);
            chain.push(Hypothesis::Edge {
                t1: c0.angle.angle(),
                t2: c0.angle.angle() + c0.angle.ccw_to(&c1.angle),
                w,
                s: s_lp,
            });
            // a triangle with one vanishing corner looks like two clusters
            chain.push(Hypothesis::Triangle {
                t: c0.angle.angle(),
                w1: w,
                w2: T::one() - w,
                s: s_lp,
            });
            chain.push(Hypothesis::Vertex {
                t: if c0.weight >= c1.weight { c0.angle.angle() } else { c1.angle.angle() },
                s: s_lp,
            });
        }
        _ => {
            let equilateral = clusters.len() == 3
                && (0..3).all(|i| {
                    let gap = clusters[i].angle.ccw_to(&clusters[(i + 1) % 3].angle);
                    (gap - third).abs() < lit(0.2)
                });
            if equilateral {
                chain.push(Hypothesis::Triangle {
                    t: clusters[0].angle.angle(),
                    w1: clusters[0].weight,
                    w2: clusters[1].weight,
                    s: s_lp,
                });
            }
            // extremes of the clustered span as an edge guess
            let first = clusters.first().expect("nonempty");
            let last = clusters.last().expect("nonempty");
            chain.push(Hypothesis::Edge {
                t1: first.angle.angle(),
                t2: first.angle.angle() + first.angle.ccw_to(&last.angle),
                w: first.weight,
                s: s_lp,
            });
            if !equilateral && clusters.len() == 3 {
                chain.push(Hypothesis::Triangle {
                    t: clusters[0].angle.angle(),
                    w1: clusters[0].weight,
                    w2: clusters[1].weight,
                    s: s_lp,
                });
            }
        }
    }
    chain
}

fn fallback_face<T: Scalar>(clusters: &[Cluster<T>]) -> Face<T> {
    match clusters.len() {
        0 | 1 => Face::Vertex {
            t: clusters.first().map_or_else(|| CirclePoint::new(T::zero()), |c| c.angle),
        },
        2 => Face::Edge {
            t1: clusters[0].angle,
            t2: clusters[1].angle,
            weight: clusters[0].weight / (clusters[0].weight + clusters[1].weight),
        },
        _ => Face::Triangle {
            t: clusters[0].angle,
            w1: clusters[0].weight,
            w2: clusters[1].weight,
            w3: T::one() - clusters[0].weight - clusters[1].weight,
        },
    }
}

/// Newton polish of a face hypothesis against the unit vector `x_hat`.
/// Returns the validated face and its boundary scale, or `None` when the
/// iteration fails to reach the tolerance or the parameters leave the
/// face's admissible range.
fn polish<T: Scalar>(x_hat: &[T], hyp: &Hypothesis<T>) -> Option<(Face<T>, T)> {
    let weight_floor = lit::<T>(1e-9);
    let third = T::TAU() / lit(3.0);
    match *hyp {
        Hypothesis::Vertex { t, s } => {
            let theta = newton(x_hat, &mut vec![t, s], |theta, f, jac| {
                vertex_system(x_hat, theta, f, jac);
            })?;
            let (t, s) = (theta[0], theta[1]);
            if s <= T::zero() {
                return None;
            }
            Some((Face::Vertex { t: CirclePoint::new(t) }, s))
        }
        Hypothesis::Edge { t1, t2, w, s } => {
            let theta = newton(x_hat, &mut vec![t1, t2, w, s], |theta, f, jac| {
                edge_system(x_hat, theta, f, jac);
            })?;
            let (t1, t2, w, s) = (theta[0], theta[1], theta[2], theta[3]);
            if s <= T::zero() {
                return None;
            }
            let (p1, p2) = (CirclePoint::new(t1), CirclePoint::new(t2));
            // an edge that collapsed onto one endpoint is a vertex
            if w < weight_floor || p1.approx_eq(&p2) {
                return polish(x_hat, &Hypothesis::Vertex { t: t2, s });
            }
            if w > T::one() - weight_floor {
                return polish(x_hat, &Hypothesis::Vertex { t: t1, s });
            }
            if geodesic_dist(p1, p2) > edge_arc_bound::<T>() + lit(ANGLE_EPS) {
                return None;
            }
            // canonical order: traverse the short arc from t1 to t2
            if p1.ccw_to(&p2) <= T::PI() {
                Some((Face::Edge { t1: p1, t2: p2, weight: w }, s))
            } else {
                Some((Face::Edge { t1: p2, t2: p1, weight: T::one() - w }, s))
            }
        }
        Hypothesis::Triangle { t, w1, w2, s } => {
            let theta = newton(x_hat, &mut vec![t, w1, w2, s], |theta, f, jac| {
                triangle_system(x_hat, theta, f, jac);
            })?;
            let (t, w1, w2, s) = (theta[0], theta[1], theta[2], theta[3]);
            let w3 = T::one() - w1 - w2;
            if s <= T::zero() {
                return None;
            }
            // vanishing corners demote the face
            if w3 < weight_floor {
                return polish(x_hat, &Hypothesis::Edge { t1: t, t2: t + third, w: w1, s });
            }
            if w2 < weight_floor {
                return polish(x_hat, &Hypothesis::Edge {
                    t1: t + third + third,
                    t2: t,
                    w: w3,
                    s,
                });
            }
            if w1 < weight_floor {
                return polish(x_hat, &Hypothesis::Edge {
                    t1: t + third,
                    t2: t + third + third,
                    w: w2,
                    s,
                });
            }
            Some((canonical_triangle(t, w1, w2, w3), s))
        }
    }
}

/// Rotates the triangle datum so `t` is the smallest of the three angles.
fn canonical_triangle<T: Scalar>(t: T, w1: T, w2: T, w3: T) -> Face<T> {
    let third = T::TAU() / lit(3.0);
    let reps = [CirclePoint::new(t), CirclePoint::new(t + third), CirclePoint::new(t + third + third)];
    let weights = [w1, w2, w3];
    let min_idx = (0..3)
        .min_by(|&i, &j| reps[i].angle().partial_cmp(&reps[j].angle()).expect("finite angles"))
        .expect("three candidates");
    Face::Triangle {
        t: reps[min_idx],
        w1: weights[min_idx],
        w2: weights[(min_idx + 1) % 3],
        w3: weights[(min_idx + 2) % 3],
    }
}

fn vertex_system<T: Scalar>(x_hat: &[T], theta: &[T], f: &mut Vec<T>, jac: &mut Vec<Vec<T>>) {
    let (t, s) = (theta[0], theta[1]);
    let curve = sm_unchecked(2, t);
    let deriv = sm_derivative(2, t);
    f.clear();
    jac.clear();
    for e in 0..4 {
        f.push(s * x_hat[e] - curve[e]);
        jac.push(vec![-deriv[e], x_hat[e]]);
    }
}

fn edge_system<T: Scalar>(x_hat: &[T], theta: &[T], f: &mut Vec<T>, jac: &mut Vec<Vec<T>>) {
    let (t1, t2, w, s) = (theta[0], theta[1], theta[2], theta[3]);
    let c1 = sm_unchecked(2, t1);
    let c2 = sm_unchecked(2, t2);
    let d1 = sm_derivative(2, t1);
    let d2 = sm_derivative(2, t2);
    f.clear();
    jac.clear();
    for e in 0..4 {
        f.push(s * x_hat[e] - w * c1[e] - (T::one() - w) * c2[e]);
        jac.push(vec![
            -w * d1[e],
            -(T::one() - w) * d2[e],
            c2[e] - c1[e],
            x_hat[e],
        ]);
    }
}

fn triangle_system<T: Scalar>(x_hat: &[T], theta: &[T], f: &mut Vec<T>, jac: &mut Vec<Vec<T>>) {
    let third = T::TAU() / lit(3.0);
    let (t, w1, w2, s) = (theta[0], theta[1], theta[2], theta[3]);
    let w3 = T::one() - w1 - w2;
    let c = [sm_unchecked(2, t), sm_unchecked(2, t + third), sm_unchecked(2, t + third + third)];
    let d = [
        sm_derivative(2, t),
        sm_derivative(2, t + third),
        sm_derivative(2, t + third + third),
    ];
    f.clear();
    jac.clear();
    for e in 0..4 {
        f.push(s * x_hat[e] - w1 * c[0][e] - w2 * c[1][e] - w3 * c[2][e]);
        jac.push(vec![
            -(w1 * d[0][e] + w2 * d[1][e] + w3 * d[2][e]),
            c[2][e] - c[0][e],
            c[2][e] - c[1][e],
            x_hat[e],
        ]);
    }
}

/// Damped (Gauss-)Newton on a 4-dimensional residual. Square systems are
/// solved directly, the 2-parameter vertex system through its normal
/// equations. Success means the residual reaches the polish tolerance.
fn newton<T: Scalar>(
    _x_hat: &[T],
    theta: &mut Vec<T>,
    system: impl Fn(&[T], &mut Vec<T>, &mut Vec<Vec<T>>),
) -> Option<Vec<T>> {
    let tol = lit::<T>(POLISH_TOL);
    let mut f: Vec<T> = Vec::with_capacity(4);
    let mut jac: Vec<Vec<T>> = Vec::with_capacity(4);
    system(theta, &mut f, &mut jac);
    let mut res = linalg::norm_inf(&f);

    for _ in 0..POLISH_MAX_ITER {
        if res <= tol {
            return Some(theta.clone());
        }
        let q = theta.len();
        let delta = if q == 4 {
            let mut m: Vec<Vec<T>> = jac.clone();
            let mut rhs = f.clone();
            linalg::solve(&mut m, &mut rhs, lit(1e-13))?
        } else {
            // normal equations J^T J delta = J^T f
            let mut m = vec![vec![T::zero(); q]; q];
            let mut rhs = vec![T::zero(); q];
            for e in 0..f.len() {
                for i in 0..q {
                    rhs[i] = rhs[i] + jac[e][i] * f[e];
                    for j in 0..q {
                        m[i][j] = m[i][j] + jac[e][i] * jac[e][j];
                    }
                }
            }
            linalg::solve(&mut m, &mut rhs, lit(1e-16))?
        };

        // backtracking: halve the step while the residual grows
        let mut accepted = false;
        let mut scale_step = T::one();
        for _ in 0..8 {
            let trial: Vec<T> = theta
                .iter()
                .zip(&delta)
                .map(|(&th, &d)| th - scale_step * d)
                .collect();
            let mut tf = Vec::with_capacity(4);
            let mut tj = Vec::with_capacity(4);
            system(&trial, &mut tf, &mut tj);
            let t_res = linalg::norm_inf(&tf);
            if t_res < res {
                *theta = trial;
                f = tf;
                jac = tj;
                res = t_res;
                accepted = true;
                break;
            }
            scale_step = scale_step / lit(2.0);
        }
        if !accepted {
            return None;
        }
    }
    (res <= tol).then(|| theta.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{PI, TAU};

    fn pt(a: f64) -> CirclePoint<f64> {
        CirclePoint::new(a)
    }

    fn curve(t: f64) -> Vec<f64> {
        sm_unchecked(2, t)
    }

    #[test]
    fn classify_examples() {
        assert!(matches!(classify_face(&[pt(0.0)]), FaceClass::Vertex { .. }));
        assert!(matches!(
            classify_face(&[pt(0.0), pt(TAU / 3.0 + 0.1)]),
            FaceClass::NotAFace
        ));
        assert!(matches!(
            classify_face(&[pt(0.0), pt(TAU / 3.0)]),
            FaceClass::Edge { .. }
        ));
        assert!(matches!(
            classify_face(&[pt(0.0), pt(TAU / 3.0), pt(2.0 * TAU / 3.0)]),
            FaceClass::Triangle { .. }
        ));
        assert!(matches!(
            classify_face(&[pt(0.0), pt(1.0), pt(2.0)]),
            FaceClass::NotAFace
        ));
        assert!(matches!(
            classify_face(&[pt(0.0), pt(1.0), pt(2.0), pt(3.0)]),
            FaceClass::NotAFace
        ));
    }

    #[test]
    fn edge_predicate_examples() {
        assert!(edge_predicate_b2k(2, pt(0.0), pt(TAU / 3.0)).unwrap());
        assert!(!edge_predicate_b2k(2, pt(0.0), pt(TAU / 3.0 + 0.01)).unwrap());
        assert!(edge_predicate_b2k(3, pt(0.0), pt(4.0 * PI / 5.0)).unwrap());
        assert!(!edge_predicate_b2k(3, pt(0.0), pt(4.0 * PI / 5.0 + 0.01)).unwrap());
        assert!(matches!(
            edge_predicate_b2k(2, pt(1.0), pt(1.0)),
            Err(Error::EqualPoints)
        ));
        // k = 1 has no proper edges
        assert!(!edge_predicate_b2k(1, pt(0.0), pt(0.5)).unwrap());
    }

    #[test]
    fn gauge_of_curve_points_is_one() {
        for t in [0.0, 1.0, 2.5, 4.0] {
            let g = gauge(&curve(t), 720).unwrap();
            assert!(g.refined);
            assert!((g.scale - 1.0).abs() < 1e-9, "scale {} at t = {t}", g.scale);
            assert_eq!(g.support.len(), 1);
            assert!(geodesic_dist(g.support[0].angle, pt(t)) < 1e-9);
        }
    }

    #[test]
    fn gauge_scales_inversely_with_input() {
        let x = curve(1.0);
        let doubled: Vec<f64> = x.iter().map(|c| 2.0 * c).collect();
        let g = gauge(&doubled, 720).unwrap();
        assert!((g.scale - 0.5).abs() < 1e-9);

        let halved: Vec<f64> = x.iter().map(|c| 0.5 * c).collect();
        let g = gauge(&halved, 720).unwrap();
        assert!((g.scale - 2.0).abs() < 1e-9);
    }

    #[test]
    fn gauge_of_edge_midpoint() {
        let (a, b) = (curve(0.0), curve(TAU / 3.0));
        let mid: Vec<f64> = a.iter().zip(&b).map(|(x, y)| 0.5 * (x + y)).collect();
        let g = gauge(&mid, 720).unwrap();
        assert!(g.refined);
        assert!((g.scale - 1.0).abs() < 1e-8);
        assert_eq!(g.support.len(), 2);
        assert!(geodesic_dist(g.support[0].angle, pt(0.0)) < 1e-8);
        assert!(geodesic_dist(g.support[1].angle, pt(TAU / 3.0)) < 1e-8);
        assert!((g.support[0].weight - 0.5).abs() < 1e-8);
    }

    #[test]
    fn gauge_validates_inputs() {
        assert!(matches!(gauge(&[0.0, 0.0, 0.0, 0.0], 720), Err(Error::ZeroVector)));
        assert!(matches!(gauge(&[1.0, 0.0], 720), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(
            gauge(&[1.0, 0.0, 0.0, 0.0], 30),
            Err(Error::GridTooCoarse { min: 90, got: 30 })
        ));
    }

    #[test]
    fn projection_recovers_vertices() {
        for t in [0.3, 2.0, 5.5] {
            let b = radial_project(&curve(t)).unwrap();
            let Face::Vertex { t: found } = b.face else {
                panic!("expected vertex face")
            };
            assert!(geodesic_dist(found, pt(t)) < 1e-8);

            // scaling is removed
            let scaled: Vec<f64> = curve(t).iter().map(|c| 0.5 * c).collect();
            let b2 = radial_project(&scaled).unwrap();
            let Face::Vertex { t: found2 } = b2.face else {
                panic!("expected vertex face")
            };
            assert!(geodesic_dist(found2, pt(t)) < 1e-8);
        }
    }

    #[test]
    fn projection_recovers_edge_near_the_arc_bound() {
        let (t1, t2) = (0.0, TAU / 3.0 - 0.1);
        let (a, b) = (curve(t1), curve(t2));
        let mid: Vec<f64> = a.iter().zip(&b).map(|(x, y)| 0.5 * (x + y)).collect();
        let bp = radial_project(&mid).unwrap();
        let Face::Edge { t1: f1, t2: f2, weight } = bp.face else {
            panic!("expected edge face")
        };
        assert!(geodesic_dist(f1, pt(t1)) < 1e-6);
        assert!(geodesic_dist(f2, pt(t2)) < 1e-6);
        assert!((weight - 0.5).abs() < 1e-6);
    }

    #[test]
    fn projection_recovers_triangles() {
        let t = 0.4;
        let (w1, w2, w3) = (0.5, 0.3, 0.2);
        let face = Face::Triangle { t: pt(t), w1, w2, w3 };
        let x = face.coordinates();
        let bp = radial_project(&x).unwrap();
        let Face::Triangle { t: ft, w1: f1, w2: f2, w3: f3 } = bp.face else {
            panic!("expected triangle face, got {:?}", bp.face)
        };
        assert!(geodesic_dist(ft, pt(t)) < 1e-6);
        assert!((f1 - w1).abs() < 1e-6 && (f2 - w2).abs() < 1e-6 && (f3 - w3).abs() < 1e-6);
    }

    #[test]
    fn projection_is_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for _ in 0..40 {
            let x: Vec<f64> = (0..4).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
            if linalg::norm2(&x) < 1e-3 {
                continue;
            }
            let b1 = radial_project(&x).unwrap();
            let b2 = radial_project(&b1.coordinates).unwrap();
            for (p, q) in b1.coordinates.iter().zip(&b2.coordinates) {
                assert!((p - q).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn random_boundary_round_trip_per_face_type() {
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        for trial in 0..120 {
            let face = match trial % 3 {
                0 => Face::Vertex { t: pt(rng.gen::<f64>() * TAU) },
                1 => {
                    let t1 = rng.gen::<f64>() * TAU;
                    let arc = 0.05 + rng.gen::<f64>() * (TAU / 3.0 - 0.05);
                    let w = 0.05 + rng.gen::<f64>() * 0.9;
                    Face::Edge { t1: pt(t1), t2: pt(t1 + arc), weight: w }
                }
                _ => {
                    let t = rng.gen::<f64>() * TAU;
                    let (mut w1, mut w2, mut w3) =
                        (rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>());
                    let total = w1 + w2 + w3;
                    w1 /= total;
                    w2 /= total;
                    w3 /= total;
                    if w1.min(w2).min(w3) < 0.05 {
                        continue;
                    }
                    Face::Triangle { t: pt(t), w1, w2, w3 }
                }
            };
            let x = face.coordinates();
            let bp = radial_project(&x).unwrap();
            assert_eq!(
                std::mem::discriminant(&face),
                std::mem::discriminant(&bp.face),
                "face type changed: wanted {face:?}, got {:?}",
                bp.face
            );
            // parameters are compared through the support atoms, which are
            // independent of the rotational parameterization of triangles
            let mut want = face.atoms();
            let mut got = bp.face.atoms();
            want.sort_by(|a, b| a.angle.angle().partial_cmp(&b.angle.angle()).unwrap());
            got.sort_by(|a, b| a.angle.angle().partial_cmp(&b.angle.angle()).unwrap());
            assert_eq!(want.len(), got.len());
            for (w, g) in want.iter().zip(&got) {
                assert!(geodesic_dist(w.angle, g.angle) < 1e-6);
                assert!((w.weight - g.weight).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn face_supports_stay_within_the_arc_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        for _ in 0..60 {
            let x: Vec<f64> = (0..4).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
            if linalg::norm2(&x) < 1e-3 {
                continue;
            }
            let g = gauge(&x, 720).unwrap();
            let config = crate::circle::Configuration::new(
                g.support.iter().map(|a| a.angle).collect(),
            );
            let diam = config.diameter().unwrap();
            assert!(diam <= TAU / 3.0 + 1e-6, "support diameter {diam}");
        }
    }

    #[test]
    fn grid_gauge_for_higher_order() {
        // curve points sit on the boundary; the grid LP is exact when the
        // angle lies on the grid
        let x = sm_unchecked(3, TAU * 10.0 / 360.0);
        let g = gauge_grid(3, &x, 360).unwrap();
        assert!(!g.refined);
        assert!((g.scale - 1.0).abs() < 1e-6);
    }

    #[test]
    fn iota_examples() {
        let v = Face::Vertex { t: pt(1.0) };
        let m = iota(&BoundaryPointB4 { coordinates: v.coordinates(), face: v }).unwrap();
        assert_eq!(m.atoms().len(), 1);

        let e = Face::Edge { t1: pt(0.0), t2: pt(1.5), weight: 0.25 };
        let m = iota(&BoundaryPointB4 { coordinates: e.coordinates(), face: e }).unwrap();
        assert_eq!(m.atoms().len(), 2);
        assert!((m.atoms()[0].weight - 0.25).abs() < 1e-12);
        assert!((m.atoms()[1].weight - 0.75).abs() < 1e-12);

        let t = Face::Triangle { t: pt(0.0), w1: 1.0 / 3.0, w2: 1.0 / 3.0, w3: 1.0 / 3.0 };
        let m = iota(&BoundaryPointB4 { coordinates: t.coordinates(), face: t }).unwrap();
        assert_eq!(m.atoms().len(), 3);

        // invalid: edge weight outside (0, 1)
        let bad = Face::Edge { t1: pt(0.0), t2: pt(1.0), weight: 0.0 };
        assert!(matches!(
            iota(&BoundaryPointB4 { coordinates: bad.coordinates(), face: bad }),
            Err(Error::InvalidBoundaryPoint(_))
        ));

        // invalid: coordinates disagree with the face
        let face = Face::Vertex { t: pt(0.0) };
        assert!(matches!(
            iota(&BoundaryPointB4 { coordinates: vec![0.0, 1.0, 0.0, 0.0], face }),
            Err(Error::InvalidBoundaryPoint(_))
        ));
    }
}
