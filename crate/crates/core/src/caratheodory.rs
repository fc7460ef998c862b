//! Origin-in-convex-hull certification with Farkas alternatives, the
//! diameter-bound verdict for moment-curve images, window searches for
//! witness sets on the circle and on sampled spheres, and cone
//! intersection checks.
//!
//! Every query about `0 in conv(v_1, ..., v_n)` is answered by a
//! phase-one simplex over `{w >= 0, sum w = 1, sum w_i v_i = 0}`. A
//! feasible program yields explicit convex weights; an infeasible one
//! yields, through the phase-one dual, a vector `z` with `z . v_i > 0`
//! for all `i`. Exactly one of the two certificates is returned, and the
//! returned one always validates against its tolerance.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circle::{CirclePoint, Configuration};
use crate::error::{Error, Result};
use crate::linalg;
use crate::lp::{LpOptions, LpProblem, LpSolution, Relation};
use crate::scalar::{lit, Scalar};

/// A feasible certificate must reproduce the origin to this accuracy
/// (infinity norm), and a program whose phase-one objective is below it
/// is classified feasible. Boundary-of-hull inputs therefore land on the
/// feasible side, matching the closed "contains the origin" convention.
pub const FEASIBILITY_TOL: f64 = 1e-8;

/// A separating certificate must clear this margin after normalizing
/// `|z| = 1`.
pub const SEPARATION_TOL: f64 = 1e-9;

/// Exactly one of the Farkas alternatives, with its witness data.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ConvexCertificate<T: Scalar> {
    /// Convex weights hitting the origin: `w >= 0`, `sum w = 1`,
    /// `|sum w_i v_i|_inf <= FEASIBILITY_TOL`.
    Feasible { weights: Vec<T> },
    /// A unit vector strictly positive on every input:
    /// `z . v_i >= SEPARATION_TOL` for all `i`.
    Separating { z: Vec<T> },
}

impl<T: Scalar> ConvexCertificate<T> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, ConvexCertificate::Feasible { .. })
    }
}

/// Checks a certificate against the module tolerances.
pub fn certificate_is_valid<T: Scalar>(vectors: &[Vec<T>], cert: &ConvexCertificate<T>) -> bool {
    match cert {
        ConvexCertificate::Feasible { weights } => {
            if weights.len() != vectors.len() {
                return false;
            }
            let total: T = weights.iter().copied().sum();
            if weights.iter().any(|&w| w < T::zero()) || (total - T::one()).abs() > lit(1e-9) {
                return false;
            }
            combination_residual(vectors, weights) <= lit(FEASIBILITY_TOL)
        }
        ConvexCertificate::Separating { z } => {
            if (linalg::norm2(z) - T::one()).abs() > lit(1e-9) {
                return false;
            }
            vectors.iter().all(|v| linalg::dot(z, v) >= lit(SEPARATION_TOL))
        }
    }
}

fn combination_residual<T: Scalar>(vectors: &[Vec<T>], weights: &[T]) -> T {
    let dim = vectors.first().map_or(0, Vec::len);
    let mut sum = vec![T::zero(); dim];
    for (v, &w) in vectors.iter().zip(weights) {
        for (s, &c) in sum.iter_mut().zip(v) {
            *s = *s + w * c;
        }
    }
    linalg::norm_inf(&sum)
}

/// Decides whether the origin lies in the convex hull of the input
/// vectors, returning the realized Farkas alternative.
pub fn origin_in_conv<T: Scalar>(vectors: &[Vec<T>]) -> Result<ConvexCertificate<T>> {
    if vectors.is_empty() {
        return Err(Error::EmptyInput);
    }
    let dim = vectors[0].len();
    for v in vectors {
        if v.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: v.len() });
        }
    }

    let n = vectors.len();
    let mut p = LpProblem::minimize(vec![T::zero(); n]);
    for e in 0..dim {
        p.add_row(vectors.iter().map(|v| v[e]).collect(), Relation::Eq, T::zero());
    }
    p.add_row(vec![T::one(); n], Relation::Eq, T::one());

    let opts = LpOptions { feasibility_tol: lit(FEASIBILITY_TOL), ..LpOptions::default() };
    match p.solve_with(opts)? {
        LpSolution::Optimal { x, .. } => {
            let mut weights: Vec<T> = x.iter().map(|&w| w.max(T::zero())).collect();
            let total: T = weights.iter().copied().sum();
            if total <= T::zero() {
                return Err(Error::LpFailure("feasible program returned zero weights".into()));
            }
            for w in &mut weights {
                *w = *w / total;
            }
            let cert = ConvexCertificate::Feasible { weights };
            if !certificate_is_valid(vectors, &cert) {
                return Err(Error::LpFailure("feasible certificate failed validation".into()));
            }
            Ok(cert)
        }
        LpSolution::Infeasible { farkas, .. } => {
            // farkas is y with y.b > 0 and y.A <= 0; the separating vector
            // is z = -y restricted to the coordinate rows.
            let mut z: Vec<T> = farkas[..dim].iter().map(|&y| -y).collect();
            let norm = linalg::norm2(&z);
            if norm <= lit(1e-300) {
                return Err(Error::LpFailure("degenerate separating direction".into()));
            }
            for c in &mut z {
                *c = *c / norm;
            }
            let cert = ConvexCertificate::Separating { z };
            if !certificate_is_valid(vectors, &cert) {
                return Err(Error::LpFailure("separating certificate failed validation".into()));
            }
            Ok(cert)
        }
        LpSolution::Unbounded => Err(Error::LpFailure("certification program unbounded".into())),
    }
}

/// Prunes a feasible convex combination to at most `dim + 1` support
/// vectors with the origin still reproduced, by walking along affine
/// dependencies until enough weights vanish. Returns indices into
/// `vectors` with their weights.
pub fn caratheodory_reduce<T: Scalar>(vectors: &[Vec<T>], weights: &[T]) -> (Vec<usize>, Vec<T>) {
    assert_eq!(vectors.len(), weights.len());
    let dim = vectors.first().map_or(0, Vec::len);
    let drop_tol = lit::<T>(1e-12);

    let mut support: Vec<usize> = (0..weights.len()).filter(|&i| weights[i] > drop_tol).collect();
    let mut w: Vec<T> = support.iter().map(|&i| weights[i]).collect();

    while support.len() > dim + 1 {
        // rows: the vector coordinates plus the affine row of ones
        let mut mat: Vec<Vec<T>> = (0..dim)
            .map(|e| support.iter().map(|&i| vectors[i][e]).collect())
            .collect();
        mat.push(vec![T::one(); support.len()]);
        let Some(mut mu) = linalg::kernel_vector(mat, lit(1e-13)) else {
            break;
        };
        if !mu.iter().any(|&m| m > drop_tol) {
            for m in &mut mu {
                *m = -*m;
            }
        }
        let mut theta: Option<(usize, T)> = None;
        for (s, &m) in mu.iter().enumerate() {
            if m > drop_tol {
                let r = w[s] / m;
                if theta.map_or(true, |(_, best)| r < best) {
                    theta = Some((s, r));
                }
            }
        }
        let Some((drop_idx, step)) = theta else {
            break;
        };
        for (ws, &m) in w.iter_mut().zip(&mu) {
            *ws = (*ws - step * m).max(T::zero());
        }
        w[drop_idx] = T::zero();
        let kept: Vec<usize> = (0..support.len()).filter(|&s| w[s] > drop_tol).collect();
        if kept.len() == support.len() {
            break;
        }
        support = kept.iter().map(|&s| support[s]).collect();
        w = kept.iter().map(|&s| w[s]).collect();
    }

    let total: T = w.iter().copied().sum();
    for ws in &mut w {
        *ws = *ws / total;
    }
    (support, w)
}

/// Diameter bound `2 pi k / (2k + 1)` for curve order `k`.
pub fn diameter_bound<T: Scalar>(k: usize) -> T {
    T::TAU() * T::from_usize(k).expect("small integer")
        / T::from_usize(2 * k + 1).expect("small integer")
}

/// Verdict of a diameter-versus-certificate check: when the configuration
/// diameter is strictly below the bound, the certificate must be
/// separating; anything else is an inconsistency (and a bug).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MissOriginReport<T: Scalar> {
    pub k: usize,
    pub diameter: T,
    pub bound: T,
    pub certificate: ConvexCertificate<T>,
    pub consistent: bool,
}

/// Runs the certification over the curve image of `points` and compares
/// the outcome with the diameter bound.
pub fn verify_miss_origin<T: Scalar>(k: usize, points: &Configuration<T>) -> Result<MissOriginReport<T>> {
    if k == 0 {
        return Err(Error::InvalidOrder);
    }
    if points.is_empty() {
        return Err(Error::EmptyConfiguration);
    }
    let vectors: Vec<Vec<T>> = points
        .iter()
        .map(|p| crate::moment::sm_unchecked(k, p.angle()))
        .collect();
    let diameter = points.diameter()?;
    let bound = diameter_bound(k);
    let certificate = origin_in_conv(&vectors)?;
    let consistent = if diameter < bound { !certificate.is_feasible() } else { true };
    Ok(MissOriginReport { k, diameter, bound, certificate, consistent })
}

/// An odd map of the circle sampled on a uniform grid of `[0, 2 pi)`.
#[derive(Debug, Clone)]
pub struct SampledCircleMap<T: Scalar> {
    angles: Vec<CirclePoint<T>>,
    values: Vec<Vec<T>>,
    dim: usize,
}

impl<T: Scalar> SampledCircleMap<T> {
    /// Samples `f` on the uniform grid with `grid` points.
    pub fn from_fn(grid: usize, f: impl Fn(T) -> Vec<T>) -> Result<Self> {
        if grid == 0 {
            return Err(Error::GridTooCoarse { min: 3, got: 0 });
        }
        let g = T::from_usize(grid).expect("grid size fits scalar");
        let mut angles = Vec::with_capacity(grid);
        let mut values = Vec::with_capacity(grid);
        let mut dim = None;
        for i in 0..grid {
            let t = T::TAU() * T::from_usize(i).expect("index fits scalar") / g;
            let v = f(t);
            let d = *dim.get_or_insert(v.len());
            if v.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: v.len() });
            }
            angles.push(CirclePoint::new(t));
            values.push(v);
        }
        Ok(SampledCircleMap { angles, values, dim: dim.unwrap_or(0) })
    }

    pub fn grid(&self) -> usize {
        self.angles.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn angles(&self) -> &[CirclePoint<T>] {
        &self.angles
    }

    pub fn values(&self) -> &[Vec<T>] {
        &self.values
    }

    /// Grid size, spacing, and oddness checks. Oddness is verifiable on
    /// even grids, where each sample has its antipode on the grid; odd
    /// grids carry no antipodal sample pairs, so nothing can be checked
    /// there.
    fn validate_for_search(&self) -> Result<()> {
        let g = self.grid();
        if g < 3 {
            return Err(Error::GridTooCoarse { min: 3, got: g });
        }
        let h = T::TAU() / T::from_usize(g).expect("grid size fits scalar");
        for (i, p) in self.angles.iter().enumerate() {
            let expect = h * T::from_usize(i).expect("index fits scalar");
            if (p.angle() - expect).abs() > lit(1e-9) {
                return Err(Error::NotOdd(format!("sample {i} is off the uniform grid")));
            }
        }
        if g % 2 == 0 {
            let tol = lit::<T>(1e-9);
            for i in 0..g / 2 {
                let j = i + g / 2;
                for (a, b) in self.values[i].iter().zip(&self.values[j]) {
                    if (*a + *b).abs() > tol {
                        return Err(Error::NotOdd(format!(
                            "f({i}) + f({j}) deviates from zero beyond 1e-9"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A witness set on the circle: points, convex weights, and the realized
/// diameter.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessSet<T: Scalar> {
    pub points: Configuration<T>,
    pub weights: Vec<T>,
    pub diameter: T,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum CircleSearchOutcome<T: Scalar> {
    Found { witness: WitnessSet<T>, windows_scanned: usize },
    NoneFound { windows_scanned: usize },
}

/// Scans diameter-constrained windows of the sampled circle for a subset
/// whose image captures the origin.
///
/// A plain arc of length `diameter_bound` cannot hold spread witnesses
/// such as evenly distributed odd polygons, whose diameter is attained
/// between non-adjacent arcs. The scan therefore slides, for every odd
/// `m` with `pi (m-1)/m <= diameter_bound`, a family of `m` closed
/// sub-windows of width `diameter_bound - pi (m-1)/m` spaced `2 pi / m`
/// apart; any selection from such a family has diameter at most
/// `diameter_bound`, and `m = 1` recovers the ordinary sliding window.
/// Windows are scanned in deterministic order (`m` ascending, then the
/// anchor grid index) and the first feasible window wins; its support is
/// pruned to at most `dim + 1` points. `NoneFound` means no feasible
/// window exists at this grid resolution.
pub fn bu_circle_search<T: Scalar>(
    map: &SampledCircleMap<T>,
    diameter_bound: T,
) -> Result<CircleSearchOutcome<T>> {
    map.validate_for_search()?;
    let g = map.grid();
    let tol = lit::<T>(1e-9);
    let mut scanned = 0usize;

    if diameter_bound >= T::PI() - tol {
        // Any subset of the circle has diameter at most pi.
        scanned += 1;
        if let Some(witness) = try_window(map, &(0..g).collect::<Vec<_>>(), diameter_bound)? {
            return Ok(CircleSearchOutcome::Found { witness, windows_scanned: scanned });
        }
        return Ok(CircleSearchOutcome::NoneFound { windows_scanned: scanned });
    }

    let h = T::TAU() / T::from_usize(g).expect("grid size fits scalar");
    let mut m = 1usize;
    loop {
        let spread = T::PI() * T::from_usize(m - 1).expect("small integer")
            / T::from_usize(m).expect("small integer");
        if spread > diameter_bound + tol {
            break;
        }
        let width = (diameter_bound - spread).max(T::zero());
        for anchor in 0..g {
            let mut indices = BTreeSet::new();
            let anchor_angle = h * T::from_usize(anchor).expect("index fits scalar");
            for j in 0..m {
                let center = anchor_angle
                    + T::TAU() * T::from_usize(j).expect("small integer")
                        / T::from_usize(m).expect("small integer");
                let start = ((center - tol) / h).to_f64().expect("finite").ceil() as i64;
                let end = ((center + width + tol) / h).to_f64().expect("finite").floor() as i64;
                for i in start..=end {
                    indices.insert(i.rem_euclid(g as i64) as usize);
                }
            }
            let indices: Vec<usize> = indices.into_iter().collect();
            scanned += 1;
            if let Some(witness) = try_window(map, &indices, diameter_bound)? {
                return Ok(CircleSearchOutcome::Found { witness, windows_scanned: scanned });
            }
        }
        m += 2;
    }
    Ok(CircleSearchOutcome::NoneFound { windows_scanned: scanned })
}

fn try_window<T: Scalar>(
    map: &SampledCircleMap<T>,
    indices: &[usize],
    diameter_bound: T,
) -> Result<Option<WitnessSet<T>>> {
    if indices.is_empty() {
        return Ok(None);
    }
    let vectors: Vec<Vec<T>> = indices.iter().map(|&i| map.values[i].clone()).collect();
    match origin_in_conv(&vectors)? {
        ConvexCertificate::Feasible { weights } => {
            let (support, weights) = caratheodory_reduce(&vectors, &weights);
            let mut atoms: Vec<(CirclePoint<T>, T)> = support
                .iter()
                .zip(&weights)
                .map(|(&s, &w)| (map.angles[indices[s]], w))
                .collect();
            atoms.sort_by(|a, b| a.0.angle().partial_cmp(&b.0.angle()).expect("finite angles"));
            let points = Configuration::new(atoms.iter().map(|&(p, _)| p).collect());
            let weights: Vec<T> = atoms.iter().map(|&(_, w)| w).collect();
            let diameter = points.diameter()?;
            debug_assert!(diameter <= diameter_bound + lit(1e-9));
            Ok(Some(WitnessSet { points, weights, diameter }))
        }
        ConvexCertificate::Separating { .. } => Ok(None),
    }
}

/// Geodesic distance on the unit sphere.
pub fn sphere_dist<T: Scalar>(x: &[T], y: &[T]) -> T {
    linalg::dot(x, y).min(T::one()).max(-T::one()).acos()
}

/// Geodesic diameter of a regular `(n+1)`-simplex inscribed in the
/// n-sphere, `arccos(-1/(n+1))`.
pub fn simplex_diameter<T: Scalar>(n: usize) -> T {
    (-T::one() / T::from_usize(n + 1).expect("small integer")).acos()
}

/// Vertices of a regular `(n+1)`-simplex inscribed in the unit n-sphere
/// of `R^{n+1}`: `n + 2` unit vectors with pairwise inner product
/// `-1/(n+1)`. Built explicitly from the standard simplex of `R^{n+2}`
/// projected onto the zero-sum hyperplane; serves as the brute-force
/// cross-check for [`simplex_diameter`].
pub fn regular_simplex_vertices<T: Scalar>(n: usize) -> Vec<Vec<T>> {
    let big = n + 2;
    let centroid = T::one() / T::from_usize(big).expect("small integer");
    // orthonormal basis of the zero-sum hyperplane by Gram-Schmidt
    let mut basis: Vec<Vec<T>> = Vec::with_capacity(n + 1);
    for l in 0..n + 1 {
        let mut b = vec![T::zero(); big];
        b[l] = T::one();
        b[big - 1] = -T::one();
        for q in &basis {
            let proj = linalg::dot(&b, q);
            for (bi, &qi) in b.iter_mut().zip(q) {
                *bi = *bi - proj * qi;
            }
        }
        let norm = linalg::norm2(&b);
        for bi in &mut b {
            *bi = *bi / norm;
        }
        basis.push(b);
    }
    (0..big)
        .map(|i| {
            let mut u = vec![-centroid; big];
            u[i] = u[i] + T::one();
            let mut v: Vec<T> = basis.iter().map(|q| linalg::dot(&u, q)).collect();
            let norm = linalg::norm2(&v);
            for c in &mut v {
                *c = *c / norm;
            }
            v
        })
        .collect()
}

/// An odd map of the n-sphere sampled on an antipode-closed point set.
#[derive(Debug, Clone)]
pub struct SphereSampledMap<T: Scalar> {
    n: usize,
    points: Vec<Vec<T>>,
    values: Vec<Vec<T>>,
    dim: usize,
}

impl<T: Scalar> SphereSampledMap<T> {
    /// Builds the sample table from the given sphere points, closing it
    /// under the antipodal map, and evaluates `f` everywhere. Oddness of
    /// the table is checked over the antipodal pairs within `1e-9`.
    pub fn from_points(
        n: usize,
        seeds: Vec<Vec<T>>,
        f: impl Fn(&[T]) -> Vec<T>,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: n });
        }
        let tol = lit::<T>(1e-9);
        let mut points: Vec<Vec<T>> = Vec::with_capacity(2 * seeds.len());
        for p in seeds {
            if p.len() != n + 1 {
                return Err(Error::DimensionMismatch { expected: n + 1, got: p.len() });
            }
            if (linalg::norm2(&p) - T::one()).abs() > tol {
                return Err(Error::InvalidWeights("sphere sample is not a unit vector".into()));
            }
            let anti: Vec<T> = p.iter().map(|&c| -c).collect();
            points.push(p);
            points.push(anti);
        }
        let values: Vec<Vec<T>> = points.iter().map(|p| f(p)).collect();
        let dim = values.first().map_or(0, Vec::len);
        for v in &values {
            if v.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: v.len() });
            }
        }
        for pair in 0..points.len() / 2 {
            let (a, b) = (&values[2 * pair], &values[2 * pair + 1]);
            if a.iter().zip(b).any(|(&x, &y)| (x + y).abs() > tol) {
                return Err(Error::NotOdd(format!("antipodal pair {pair} violates oddness")));
            }
        }
        Ok(SphereSampledMap { n, points, values, dim })
    }

    /// Uniform random sample points (plus antipodes) from a seeded
    /// generator, optionally extended with caller-chosen points.
    pub fn sample(
        n: usize,
        n_random: usize,
        seed: u64,
        extra: Vec<Vec<T>>,
        f: impl Fn(&[T]) -> Vec<T>,
    ) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut seeds = extra;
        for _ in 0..n_random {
            seeds.push(random_unit_vector(&mut rng, n + 1));
        }
        Self::from_points(n, seeds, f)
    }

    pub fn points(&self) -> &[Vec<T>] {
        &self.points
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sphere_dim(&self) -> usize {
        self.n
    }
}

fn random_unit_vector<T: Scalar>(rng: &mut ChaCha8Rng, len: usize) -> Vec<T> {
    loop {
        // Box-Muller pairs give a rotation-invariant direction.
        let mut v = Vec::with_capacity(len);
        while v.len() < len {
            let u1: f64 = rng.gen::<f64>().max(1e-300);
            let u2: f64 = rng.gen();
            let r = (-2.0 * u1.ln()).sqrt();
            v.push(lit::<T>(r * (std::f64::consts::TAU * u2).cos()));
            if v.len() < len {
                v.push(lit::<T>(r * (std::f64::consts::TAU * u2).sin()));
            }
        }
        let norm = linalg::norm2(&v);
        if norm > lit(1e-6) {
            return v.iter().map(|&c| c / norm).collect();
        }
    }
}

/// A sphere witness: unit vectors, convex weights, geodesic diameter.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SphereWitness<T: Scalar> {
    pub points: Vec<Vec<T>>,
    pub weights: Vec<T>,
    pub diameter: T,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum SphereSearchOutcome<T: Scalar> {
    Found { witness: SphereWitness<T>, trial: usize },
    /// `best_margin` is the smallest separating margin seen, a proxy for
    /// how close any trial came to feasibility.
    NoneFound { trials: usize, best_margin: Option<T> },
}

/// Randomized witness search on a sampled sphere map.
///
/// Each trial draws a center from the sample set, collects the samples
/// within geodesic distance `diameter_bound` of it, and keeps a subset of
/// pairwise distances at most `diameter_bound` by greedy insertion in
/// order of decreasing distance from the center (farthest first, so that
/// spread sets like inscribed regular simplices survive). The kept
/// images go through [`origin_in_conv`]; the first feasible trial wins.
/// Identical inputs and seed give identical output.
pub fn bu_sphere_search<T: Scalar>(
    map: &SphereSampledMap<T>,
    diameter_bound: T,
    n_trials: usize,
    seed: u64,
) -> Result<SphereSearchOutcome<T>> {
    let tol = lit::<T>(1e-9);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best_margin: Option<T> = None;

    for trial in 0..n_trials {
        let center_idx = rng.gen_range(0..map.points.len());
        let center = &map.points[center_idx];

        let mut candidates: Vec<(usize, T)> = map
            .points
            .iter()
            .enumerate()
            .filter_map(|(i, p)| {
                let d = sphere_dist(center, p);
                (d <= diameter_bound + tol).then_some((i, d))
            })
            .collect();
        candidates.sort_by(|a, b| {
            b.1.partial_cmp(&a.1).expect("finite distances").then(a.0.cmp(&b.0))
        });

        let mut kept: Vec<usize> = Vec::new();
        for (i, _) in candidates {
            let ok = kept
                .iter()
                .all(|&j| sphere_dist(&map.points[i], &map.points[j]) <= diameter_bound + tol);
            if ok {
                kept.push(i);
            }
        }
        if kept.is_empty() {
            continue;
        }

        let vectors: Vec<Vec<T>> = kept.iter().map(|&i| map.values[i].clone()).collect();
        match origin_in_conv(&vectors)? {
            ConvexCertificate::Feasible { weights } => {
                let (support, weights) = caratheodory_reduce(&vectors, &weights);
                let points: Vec<Vec<T>> =
                    support.iter().map(|&s| map.points[kept[s]].clone()).collect();
                let mut diameter = T::zero();
                for (a, p) in points.iter().enumerate() {
                    for q in &points[a + 1..] {
                        diameter = diameter.max(sphere_dist(p, q));
                    }
                }
                return Ok(SphereSearchOutcome::Found {
                    witness: SphereWitness { points, weights, diameter },
                    trial,
                });
            }
            ConvexCertificate::Separating { z } => {
                let margin = vectors
                    .iter()
                    .map(|v| linalg::dot(&z, v))
                    .fold(T::infinity(), T::min);
                best_margin = Some(best_margin.map_or(margin, |b| b.min(margin)));
            }
        }
    }
    Ok(SphereSearchOutcome::NoneFound { trials: n_trials, best_margin })
}

/// Outcome of a cone-intersection check. The positive case certifies
/// `cone(U) and cone(V) meet only at the origin` through a vector `y`
/// nonnegative on `U` and strictly negative on `V`; the condition is
/// sufficient, not necessary, so the other case stays inconclusive.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum ConeCheckOutcome<T: Scalar> {
    TrivialIntersectionCertified { y: Vec<T>, margin: T },
    Inconclusive { best_margin: T },
}

/// Searches by margin-maximizing LP for `y` with `u . y >= 0` on all of
/// `U` and `v . y <= -margin` on all of `V`.
pub fn cone_intersection_check<T: Scalar>(
    u: &[Vec<T>],
    v: &[Vec<T>],
) -> Result<ConeCheckOutcome<T>> {
    if u.is_empty() || v.is_empty() {
        return Err(Error::EmptyInput);
    }
    let dim = u[0].len();
    for w in u.iter().chain(v) {
        if w.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: w.len() });
        }
    }

    // Variables: y+ (dim), y- (dim), margin s; y = y+ - y-, |y|_inf <= 1.
    let nv = 2 * dim + 1;
    let mut objective = vec![T::zero(); nv];
    objective[2 * dim] = -T::one();
    let mut p = LpProblem::minimize(objective);
    for ui in u {
        let mut row = vec![T::zero(); nv];
        for e in 0..dim {
            row[e] = -ui[e];
            row[dim + e] = ui[e];
        }
        p.add_row(row, Relation::Le, T::zero());
    }
    for vi in v {
        let mut row = vec![T::zero(); nv];
        for e in 0..dim {
            row[e] = vi[e];
            row[dim + e] = -vi[e];
        }
        row[2 * dim] = T::one();
        p.add_row(row, Relation::Le, T::zero());
    }
    for e in 0..dim {
        let mut row = vec![T::zero(); nv];
        row[e] = T::one();
        row[dim + e] = T::one();
        p.add_row(row, Relation::Le, T::one());
    }

    let LpSolution::Optimal { x, .. } = p.solve()? else {
        return Err(Error::LpFailure("margin program must be solvable".into()));
    };
    let margin = x[2 * dim];
    let y: Vec<T> = (0..dim).map(|e| x[e] - x[dim + e]).collect();
    let u_ok = u.iter().all(|ui| linalg::dot(ui, &y) >= -lit::<T>(1e-12));
    let v_margin = v.iter().map(|vi| linalg::dot(vi, &y)).fold(T::neg_infinity(), T::max);
    if margin >= lit(SEPARATION_TOL) && u_ok && v_margin <= -lit::<T>(SEPARATION_TOL) {
        Ok(ConeCheckOutcome::TrivialIntersectionCertified { y, margin: -v_margin })
    } else {
        Ok(ConeCheckOutcome::Inconclusive { best_margin: margin })
    }
}
