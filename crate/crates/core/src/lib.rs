//! Desk-scale computational convex geometry on the circle.
//!
//! The crate bundles the pieces needed to experiment with configurations
//! on the circle and their images under the odd trigonometric moment
//! curve:
//!
//! - [`circle`]: angle arithmetic, arcs, geodesic diameters, and the
//!   semicircle counts χ of finite configurations.
//! - [`moment`]: the symmetric moment curve into `R^{2k}`, closed-form
//!   determinant ratios, and the explicit nullspace of moment matrices.
//! - [`lp`]: a dense two-phase simplex solver with Bland's rule.
//! - [`caratheodory`]: origin-in-convex-hull certification with Farkas
//!   alternatives, diameter-bound verification, window searches for
//!   witness sets on the circle and on sampled spheres, and cone
//!   intersection checks.
//! - [`raked`]: odd-spectrum trigonometric polynomials, construction from
//!   prescribed roots, and sign-pattern analysis.
//! - [`orbitope`]: the convex hull of the `k = 2` curve, face
//!   classification, gauge computation, and radial boundary projection.
//! - [`thickening`]: finitely supported probability measures on the
//!   circle under the 1-Wasserstein metric, with diameter diagnostics.
//!
//! All numeric kernels are generic over the scalar type via [`Scalar`];
//! the `*64` aliases below fix `f64`, which is what every stated
//! tolerance is calibrated for.

pub mod caratheodory;
pub mod circle;
pub mod error;
pub mod lp;
pub mod moment;
pub mod orbitope;
pub mod raked;
pub mod thickening;

mod linalg;
mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Working scalar type for the command-line tools and default aliases.
pub type Real = f64;

pub type CirclePoint64 = circle::CirclePoint<Real>;
pub type Configuration64 = circle::Configuration<Real>;
pub type RakedPolynomial64 = raked::RakedPolynomial<Real>;
pub type DiscreteMeasure64 = thickening::DiscreteMeasure<Real>;
pub type BoundaryPointB464 = orbitope::BoundaryPointB4<Real>;
