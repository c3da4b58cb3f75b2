//! Numerical and exact verification of the spherical Eisenstein spectral
//! decomposition for split groups of rank at most two.
//!
//! The library computes two independent expressions for the same Hermitian
//! pairing of test functions on a maximal torus:
//!
//! * a contour integral of a Weyl-group sum of intertwining ratios over a
//!   shifted compact torus (the "pairing" side), and
//! * a sum over nilpotent orbits of the dual Lie algebra, each orbit
//!   contributing an integral of projected test functions against an explicit
//!   spectral density (the "spectral" side),
//!
//! and verifies that they agree to high accuracy, along with a collection of
//! exact combinatorial identities (heights vs. exponents, slice characters,
//! self-duality of multiplicity spaces) that pin down every normalization.
//!
//! Exact data (root systems, Chevalley bases, nilpotent orbits) lives in
//! [`rootsys`] and [`lie`] and is computed in rational arithmetic.  The
//! analytic stack ([`genus`], [`quad`], [`spectral`]) is generic over the
//! floating-point scalar through the [`scalar::Real`] trait; concrete `f64`
//! aliases are exported at the crate root.

pub mod scalar;
pub mod ratlin;
pub mod rootsys;
pub mod lie;
pub mod laurent;
pub mod genus;
pub mod quad;
pub mod spectral;
pub mod harness;

pub use scalar::Real;

/// Default floating scalar used by the CLI and the verification suites.
pub type F = f64;
/// Complex numbers over the default scalar.
pub type C64 = num_complex::Complex<f64>;
/// Exact rational scalar used by the combinatorial oracle.
pub type Rat = num_rational::BigRational;
/// Small rational type used for angles, heights and lattice data.
pub type Q64 = num_rational::Ratio<i64>;
