//! Finitely supported probability measures on the circle with a support
//! diameter constraint, the 1-Wasserstein distance through the
//! transportation LP, the linear extension of the moment curve to
//! measures, and the diameter diagnostics of the boundary-projection
//! round trip.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::caratheodory::diameter_bound;
use crate::circle::{geodesic_dist, CirclePoint, Configuration, ANGLE_EPS};
use crate::error::{Error, Result};
use crate::linalg;
use crate::lp::{LpProblem, LpSolution, Relation};
use crate::moment::sm_unchecked;
use crate::orbitope::{self, DEFAULT_PROJECTION_GRID};
use crate::scalar::{lit, Scalar};

/// Atoms lighter than this are dropped during canonicalization.
pub const WEIGHT_FLOOR: f64 = 1e-12;

/// A weighted point of a discrete measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom<T: Scalar> {
    pub angle: CirclePoint<T>,
    pub weight: T,
}

/// A finitely supported probability measure on the circle. Atoms are
/// kept canonical: sorted by angle, merged when closer than
/// [`ANGLE_EPS`], strictly positive, and summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DiscreteMeasure<T: Scalar> {
    atoms: Vec<Atom<T>>,
}

impl<T: Scalar> DiscreteMeasure<T> {
    /// Builds a measure from matching point and weight lists, enforcing a
    /// support diameter of at most `scale`. Zero-weight atoms are
    /// dropped and coincident atoms merged before the diameter check.
    pub fn new(points: Vec<CirclePoint<T>>, weights: Vec<T>, scale: T) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::InvalidWeights(format!(
                "{} points but {} weights",
                points.len(),
                weights.len()
            )));
        }
        if points.is_empty() {
            return Err(Error::InvalidWeights("a measure needs at least one atom".into()));
        }
        if weights.iter().any(|&w| w < -lit::<T>(1e-12)) {
            return Err(Error::InvalidWeights("weights must be nonnegative".into()));
        }
        let total: T = weights.iter().copied().sum();
        if (total - T::one()).abs() > lit(1e-9) {
            return Err(Error::InvalidWeights(format!("weights sum to {total}, not 1")));
        }
        let atoms = canonicalize(
            points
                .into_iter()
                .zip(weights)
                .map(|(angle, weight)| Atom { angle, weight })
                .collect(),
        )?;
        let measure = DiscreteMeasure { atoms };
        let diameter = measure.support_diameter();
        if diameter > scale + lit(1e-12) {
            return Err(Error::DiameterExceedsScale {
                diameter: diameter.to_f64().unwrap_or(f64::NAN),
                scale: scale.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(measure)
    }

    pub fn dirac(t: CirclePoint<T>) -> Self {
        DiscreteMeasure { atoms: vec![Atom { angle: t, weight: T::one() }] }
    }

    pub fn atoms(&self) -> &[Atom<T>] {
        &self.atoms
    }

    pub fn support(&self) -> Configuration<T> {
        Configuration::new(self.atoms.iter().map(|a| a.angle).collect())
    }

    pub fn support_diameter(&self) -> T {
        self.support().diameter().expect("measures are never empty")
    }

    /// Greatest atom-wise deviation from another measure, matching atoms
    /// by position; infinite when supports differ in size.
    pub fn atom_distance(&self, other: &Self) -> T {
        if self.atoms.len() != other.atoms.len() {
            return T::infinity();
        }
        self.atoms
            .iter()
            .zip(&other.atoms)
            .fold(T::zero(), |m, (a, b)| {
                m.max(geodesic_dist(a.angle, b.angle)).max((a.weight - b.weight).abs())
            })
    }
}

/// Sorts, merges near-coincident atoms (weighted mean angle), drops
/// negligible weights, and renormalizes to unit mass.
fn canonicalize<T: Scalar>(mut atoms: Vec<Atom<T>>) -> Result<Vec<Atom<T>>> {
    atoms.retain(|a| a.weight > lit(WEIGHT_FLOOR));
    if atoms.is_empty() {
        return Err(Error::InvalidWeights("all atoms below the weight floor".into()));
    }
    atoms.sort_by(|a, b| a.angle.angle().partial_cmp(&b.angle.angle()).expect("finite angles"));

    let merge_tol = lit::<T>(ANGLE_EPS);
    let mut merged: Vec<(T, T)> = Vec::with_capacity(atoms.len()); // (lifted weighted angle sum, weight)
    let mut last_angle = T::neg_infinity();
    for a in &atoms {
        let angle = a.angle.angle();
        if merged.is_empty() || angle - last_angle > merge_tol {
            merged.push((angle * a.weight, a.weight));
        } else {
            let slot = merged.last_mut().expect("nonempty");
            slot.0 = slot.0 + angle * a.weight;
            slot.1 = slot.1 + a.weight;
        }
        last_angle = angle;
    }
    // wrap-around merge across the 0/2 pi cut
    if merged.len() > 1 {
        let first_mean = merged[0].0 / merged[0].1;
        let last_mean = merged.last().expect("nonempty").0 / merged.last().expect("nonempty").1;
        if first_mean + T::TAU() - last_mean <= merge_tol {
            let (sum_last, w_last) = merged.pop().expect("nonempty");
            merged[0].0 = merged[0].0 + (sum_last - T::TAU() * w_last);
            merged[0].1 = merged[0].1 + w_last;
        }
    }
    let total: T = merged.iter().map(|&(_, w)| w).sum();
    let mut out: Vec<Atom<T>> = merged
        .into_iter()
        .map(|(sum, weight)| Atom { angle: CirclePoint::new(sum / weight), weight: weight / total })
        .collect();
    out.sort_by(|a, b| a.angle.angle().partial_cmp(&b.angle.angle()).expect("finite angles"));
    Ok(out)
}

/// One moved mass assignment of a transport plan.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TransportEntry<T: Scalar> {
    pub source: usize,
    pub target: usize,
    pub mass: T,
}

/// An optimal matching between two measures and its total cost.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TransportPlan<T: Scalar> {
    pub entries: Vec<TransportEntry<T>>,
    pub cost: T,
}

/// 1-Wasserstein distance between two measures: the cheapest matching of
/// source mass to target mass under the geodesic cost, solved as the
/// transportation LP. Row and column sums of the returned plan reproduce
/// the marginals to `1e-10`.
pub fn wasserstein1<T: Scalar>(
    mu: &DiscreteMeasure<T>,
    nu: &DiscreteMeasure<T>,
) -> Result<(T, TransportPlan<T>)> {
    let (m, n) = (mu.atoms.len(), nu.atoms.len());
    let cost: Vec<T> = mu
        .atoms
        .iter()
        .flat_map(|a| nu.atoms.iter().map(move |b| geodesic_dist(a.angle, b.angle)))
        .collect();

    let mut p = LpProblem::minimize(cost.clone());
    for i in 0..m {
        let mut row = vec![T::zero(); m * n];
        for j in 0..n {
            row[i * n + j] = T::one();
        }
        p.add_row(row, Relation::Eq, mu.atoms[i].weight);
    }
    for j in 0..n {
        let mut row = vec![T::zero(); m * n];
        for i in 0..m {
            row[i * n + j] = T::one();
        }
        p.add_row(row, Relation::Eq, nu.atoms[j].weight);
    }

    let LpSolution::Optimal { x, objective } = p.solve()? else {
        return Err(Error::LpFailure("transportation program must be feasible".into()));
    };

    let mut entries = Vec::new();
    for i in 0..m {
        let mut row_sum = T::zero();
        for j in 0..n {
            let mass = x[i * n + j];
            row_sum = row_sum + mass;
            if mass > lit(WEIGHT_FLOOR) {
                entries.push(TransportEntry { source: i, target: j, mass });
            }
        }
        assert!(
            (row_sum - mu.atoms[i].weight).abs() <= lit(1e-10),
            "plan row sum deviates from the source marginal"
        );
    }
    for j in 0..n {
        let col_sum: T = (0..m).map(|i| x[i * n + j]).sum();
        assert!(
            (col_sum - nu.atoms[j].weight).abs() <= lit(1e-10),
            "plan column sum deviates from the target marginal"
        );
    }
    Ok((objective, TransportPlan { entries, cost: objective }))
}

/// Pushes a measure through the order-`k` moment curve: the weighted sum
/// of curve values over the atoms. When the support diameter is clearly
/// below the order's diameter bound the result is provably nonzero; a
/// vanishing result there signals a bug upstream and panics.
pub fn pushforward_sm<T: Scalar>(k: usize, mu: &DiscreteMeasure<T>) -> Result<Vec<T>> {
    if k == 0 {
        return Err(Error::InvalidOrder);
    }
    let mut out = vec![T::zero(); 2 * k];
    for atom in &mu.atoms {
        let v = sm_unchecked(k, atom.angle.angle());
        for (o, c) in out.iter_mut().zip(v) {
            *o = *o + atom.weight * c;
        }
    }
    // guard margin 1e-6 keeps near-sharp diameters out of the assertion
    if mu.support_diameter() < diameter_bound::<T>(k) - lit(1e-6) {
        assert!(
            linalg::norm2(&out) >= lit(1e-12),
            "curve pushforward vanished below the diameter bound"
        );
    }
    Ok(out)
}

/// One step of the linear homotopy between a measure and the
/// transcription of its boundary projection (order 2): the convex
/// combination `(1-s) mu + s (iota . p . sm_4)(mu)` as measures.
///
/// Both the input and the result must respect the `2 pi / 3` support
/// diameter; a violated result would falsify the diameter non-increase
/// law and is reported as `homotopy-not-well-defined`.
pub fn homotopy_step<T: Scalar>(mu: &DiscreteMeasure<T>, s: T) -> Result<DiscreteMeasure<T>> {
    if !(s >= T::zero() && s <= T::one()) {
        return Err(Error::InvalidScale(format!("homotopy parameter {s} outside [0, 1]")));
    }
    let bound = orbitope::edge_arc_bound::<T>();
    let input_diameter = mu.support_diameter();
    if input_diameter > bound + lit(1e-12) {
        return Err(Error::DiameterExceedsScale {
            diameter: input_diameter.to_f64().unwrap_or(f64::NAN),
            scale: bound.to_f64().unwrap_or(f64::NAN),
        });
    }

    let image = pushforward_sm(2, mu)?;
    let projected = orbitope::projection_support(2, &image, DEFAULT_PROJECTION_GRID)?;

    let mut points = Vec::new();
    let mut weights = Vec::new();
    for atom in &mu.atoms {
        points.push(atom.angle);
        weights.push(atom.weight * (T::one() - s));
    }
    for atom in &projected {
        points.push(atom.angle);
        weights.push(atom.weight * s);
    }
    DiscreteMeasure::new(points, weights, bound).map_err(|e| match e {
        Error::DiameterExceedsScale { diameter, scale } => Error::HomotopyNotWellDefined(format!(
            "step diameter {diameter} exceeds the scale {scale}"
        )),
        other => other,
    })
}

/// Experimental report on the union-support diameter excess of the
/// boundary-projection round trip over random admissible measures.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbeReport<T: Scalar> {
    pub k: usize,
    pub r: T,
    pub trials: usize,
    pub max_excess: T,
    pub mean_excess: T,
    pub seed: u64,
}

/// Samples `n_trials` random measures of support diameter at most `r`,
/// projects their curve images back to boundary supports, and reports
/// the worst and mean growth of the union-support diameter. For `k <= 2`
/// the projection uses the snapped faces (the excess is then a genuine
/// equality check); for `k >= 3` the raw grid support makes this a
/// report-only probe of an open question. Requires
/// `2 pi (k-1)/(2k-1) <= r < 2 pi k/(2k+1)`.
pub fn homotopy_probe<T: Scalar>(
    k: usize,
    r: T,
    n_trials: usize,
    seed: u64,
) -> Result<ProbeReport<T>> {
    if k == 0 {
        return Err(Error::InvalidOrder);
    }
    let lower = if k == 1 { T::zero() } else { orbitope::edge_arc_bound_b2k::<T>(k) };
    let upper = diameter_bound::<T>(k);
    if !(r >= lower && r < upper) {
        return Err(Error::InvalidScale(format!(
            "scale {r} outside the admissible window [{lower}, {upper})"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_excess = T::neg_infinity();
    let mut sum_excess = T::zero();
    for _ in 0..n_trials {
        let mu = sample_measure(&mut rng, r);
        let image = pushforward_sm(k, &mu)?;
        let projected = orbitope::projection_support(k, &image, DEFAULT_PROJECTION_GRID)?;

        let mut union_points: Vec<CirclePoint<T>> =
            mu.atoms.iter().map(|a| a.angle).collect();
        union_points.extend(projected.iter().map(|a| a.angle));
        let union_diameter = Configuration::new(union_points).diameter()?;
        let excess = union_diameter - mu.support_diameter();
        max_excess = max_excess.max(excess);
        sum_excess = sum_excess + excess;
    }
    Ok(ProbeReport {
        k,
        r,
        trials: n_trials,
        max_excess,
        mean_excess: sum_excess / T::from_usize(n_trials.max(1)).expect("trial count fits scalar"),
        seed,
    })
}

/// Random admissible measure: 1 to 6 atoms uniform in a uniformly placed
/// arc of length `r`, weights from a flat Dirichlet.
pub(crate) fn sample_measure<T: Scalar>(rng: &mut ChaCha8Rng, r: T) -> DiscreteMeasure<T> {
    let size = rng.gen_range(1..=6usize);
    let start: T = lit::<T>(rng.gen::<f64>()) * T::TAU();
    let points: Vec<CirclePoint<T>> = (0..size)
        .map(|_| CirclePoint::new(start + lit::<T>(rng.gen::<f64>()) * r))
        .collect();
    let raw: Vec<T> = (0..size)
        .map(|_| -lit::<T>(rng.gen::<f64>().max(1e-300).ln()))
        .collect();
    let total: T = raw.iter().copied().sum();
    let weights: Vec<T> = raw.iter().map(|&w| w / total).collect();
    DiscreteMeasure::new(points, weights, r + lit(1e-9)).expect("sampled atoms lie in an arc of length r")
}
