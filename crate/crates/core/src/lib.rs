//! Exact bounds for the dimension of Hilbert schemes of smooth curves in
//! P³, P⁴ and on a smooth quadric threefold.
//!
//! Every certified quantity is an exact integer or rational. Irrational
//! comparisons are decided by squaring, never by floating point.
//!
//! Module map:
//!
//! - [`exactpoly`]: rationals, binomial polynomials, exact `⌊a/(b+√c)⌋`.
//! - [`resolutions`]: Hilbert polynomials of curves from graded free
//!   resolutions of their ideal sheaves. This is the oracle every closed-form
//!   degree/genus formula is checked against.
//! - [`bounds`]: expected dimension, Castelnuovo's bound, the `μ(d,g)` lower
//!   bound in P³ and the surface-containment thresholds behind it.
//! - [`determinantal`]: invariants of determinantal curve families in P³
//!   and on the quadric threefold.
//! - [`rigidity`]: non-rigidity certificates for curves in P⁴.
//! - [`quadric`]: the two regimes for curves on the quadric threefold.

pub mod bounds;
pub mod determinantal;
pub mod exactpoly;
pub mod quadric;
pub mod resolutions;
pub mod rigidity;

/// Machine integer used for degrees, genera and bounds.
///
/// Degrees up to a few million and genera up to ~10¹⁰ square comfortably
/// inside an `i128`; anything that needs more goes through `BigInt`.
pub type Int = i128;

pub use bounds::{BoundCertificate, BoundError, Provenance};
pub use determinantal::{FamilyP3, FamilyQ};
pub use exactpoly::{Rational, RationalPolynomial};
pub use resolutions::{Ambient, CurveClass, GradedResolution};
