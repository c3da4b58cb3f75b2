//! The two sides of the spectral identity.
//!
//! * [`pairing`]: the contour-integral side, a Weyl sum of intertwining
//!   ratios integrated over a shifted compact torus.
//! * [`orbit`]: the spectral side, one contribution per nilpotent orbit:
//!   projected test functions against the orbit density, integrated over the
//!   compact part of the reductive centralizer.
//! * [`g2`]: closed forms for the G2 subregular contribution, including the
//!   diagonal-evaluation operator with its derivative term.
//! * [`additive`]: the cohomological (additive) counterparts and the
//!   degeneration bridge between the two modes.

pub mod additive;
pub mod g2;
pub mod orbit;
pub mod pairing;

pub use additive::{
    additive_dual, additive_eis_side, additive_spectral_side, bridge_pairing_value,
    AdditiveTestFn,
};
pub use g2::{g2_additive_discrete_expansion, g2_subregular_closed_forms, G2DiscreteExpansion};
pub use orbit::{
    hermitian_norm, langlands_projector, orbit_contribution, projector_value, restrict_projector,
    spectral_sum, OrbitContribution, OrbitEngine, ProjectorSign, SpectralScene,
};
pub use pairing::{eis_integrand, eis_pairing, PairingGrid};

use crate::laurent::TorusPoint;
use crate::rootsys::RootDatum;
use crate::scalar::Real;
use num_complex::Complex;

/// `q^mu` for a rational coweight in dual coordinates.
pub fn q_to_coweight<R: Real>(q: Complex<R>, mu: &[crate::Q64]) -> TorusPoint<R> {
    let coords = mu
        .iter()
        .map(|m| {
            let e = crate::scalar::r::<R>(*m.numer() as f64 / *m.denom() as f64);
            cpow(q, e)
        })
        .collect();
    TorusPoint::new(coords)
}

/// Principal-branch complex power with a real exponent.
pub fn cpow<R: Real>(base: Complex<R>, e: R) -> Complex<R> {
    if base.im == R::zero() && base.re > R::zero() {
        Complex::new(base.re.powf(e), R::zero())
    } else {
        (base.ln() * Complex::new(e, R::zero())).exp()
    }
}

/// Admissibility of a pairing contour: every positive root must satisfy
/// `|shift^alpha| > |q|`; returns the first violated root otherwise.
pub fn check_contour_admissible<R: Real>(
    rd: &RootDatum,
    q: Complex<R>,
    shift: &[Complex<R>],
) -> Result<(), Vec<i64>> {
    let point = TorusPoint::new(shift.to_vec());
    for a in &rd.positive_roots {
        if point.pow(a).norm() <= q.norm() {
            return Err(a.clone());
        }
    }
    Ok(())
}

/// A standard admissible shift: `s^{rho_check}` with `s = factor * |q|`,
/// which gives `|shift^alpha| = s^{ht(alpha)} >= s > |q|`.
pub fn standard_shift<R: Real>(rd: &RootDatum, q: Complex<R>, factor: f64) -> Vec<Complex<R>> {
    let s = q.norm() * crate::scalar::r(factor);
    rd.rho_check
        .iter()
        .map(|m| {
            let e = crate::scalar::r::<R>(*m.numer() as f64 / *m.denom() as f64);
            Complex::new(s.powf(e), R::zero())
        })
        .collect()
}
