//! Laurent polynomials on the character lattice, and complex torus points.

use crate::rootsys::WeylElement;
use crate::scalar::Real;
use num_complex::Complex;
use num_traits::Zero;
use rand::Rng;
use std::collections::BTreeMap;

/// A point of the complex torus, stored by its coordinates with respect to
/// the chosen lattice basis.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusPoint<R: Real> {
    pub coords: Vec<Complex<R>>,
}

impl<R: Real> TorusPoint<R> {
    pub fn new(coords: Vec<Complex<R>>) -> Self {
        TorusPoint { coords }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    /// `x^lambda` for an integer lattice vector.
    pub fn pow(&self, lambda: &[i64]) -> Complex<R> {
        let mut out = Complex::new(R::one(), R::zero());
        for (c, &l) in self.coords.iter().zip(lambda) {
            if l != 0 {
                out = out * c.powi(l as i32);
            }
        }
        out
    }

    /// The point `w^{-1} . x`, computed from the matrix of `w` itself:
    /// `(w^{-1} . x)^lambda = x^(w lambda)`, so coordinate `i` of the image
    /// is `x` raised to column `i` of `w`'s matrix.
    pub fn apply_inverse(&self, w: &WeylElement) -> TorusPoint<R> {
        let n = self.coords.len();
        let coords = (0..n)
            .map(|i| {
                let col: Vec<i64> = (0..n).map(|j| w.mat[j][i]).collect();
                self.pow(&col)
            })
            .collect();
        TorusPoint { coords }
    }

    pub fn mul(&self, other: &TorusPoint<R>) -> TorusPoint<R> {
        TorusPoint {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }
}

/// Finitely supported function on the character lattice with complex
/// coefficients; the test functions of the pairing.
#[derive(Clone, Debug)]
pub struct LaurentPolynomial<R: Real> {
    pub terms: BTreeMap<Vec<i64>, Complex<R>>,
}

impl<R: Real> LaurentPolynomial<R> {
    pub fn zero() -> Self {
        LaurentPolynomial { terms: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        Self::monomial(vec![0; rank], Complex::new(R::one(), R::zero()))
    }

    pub fn monomial(exps: Vec<i64>, coeff: Complex<R>) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exps, coeff);
        }
        LaurentPolynomial { terms }
    }

    pub fn add_term(&mut self, exps: Vec<i64>, coeff: Complex<R>) {
        let e = self.terms.entry(exps).or_insert_with(|| Complex::new(R::zero(), R::zero()));
        *e = *e + coeff;
        if e.is_zero() {
            // keep exact zeros out for determinism
        }
    }

    pub fn eval(&self, x: &TorusPoint<R>) -> Complex<R> {
        let mut s = Complex::new(R::zero(), R::zero());
        for (exps, c) in &self.terms {
            s = s + *c * x.pow(exps);
        }
        s
    }

    /// `f*(x) = conj(f)(x^{-1})`: conjugate coefficients, negate exponents.
    pub fn dual_star(&self) -> LaurentPolynomial<R> {
        let mut terms = BTreeMap::new();
        for (exps, c) in &self.terms {
            terms.insert(exps.iter().map(|&e| -e).collect(), c.conj());
        }
        LaurentPolynomial { terms }
    }

    /// Pullback along a Weyl element: `(w . f)(x) = f(w^{-1} x)`, which maps
    /// the exponent `lambda` to `w lambda`.
    pub fn weyl_image(&self, w: &WeylElement) -> LaurentPolynomial<R> {
        let mut terms = BTreeMap::new();
        for (exps, c) in &self.terms {
            terms.insert(w.apply(exps), *c);
        }
        LaurentPolynomial { terms }
    }

    /// Scaling derivative `x_i d/dx_i`.
    pub fn scale_derivative(&self, i: usize) -> LaurentPolynomial<R> {
        let mut out = LaurentPolynomial::zero();
        for (exps, c) in &self.terms {
            let factor = crate::scalar::r::<R>(exps[i] as f64);
            if factor != R::zero() {
                out.add_term(exps.clone(), *c * Complex::new(factor, R::zero()));
            }
        }
        out
    }

    /// Deterministic random polynomial with exponents in a centered box.
    pub fn random<G: Rng>(rng: &mut G, rank: usize, box_radius: i64, n_terms: usize) -> Self {
        let mut f = LaurentPolynomial::zero();
        for _ in 0..n_terms {
            let exps: Vec<i64> = (0..rank)
                .map(|_| rng.gen_range(-box_radius..=box_radius))
                .collect();
            let re = rng.gen_range(-1.0..1.0);
            let im = rng.gen_range(-1.0..1.0);
            f.add_term(exps, Complex::new(crate::scalar::r(re), crate::scalar::r(im)));
        }
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{build_root_system, GroupType, Lattice};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type C = Complex<f64>;

    #[test]
    fn dual_star_basics() {
        let one: LaurentPolynomial<f64> = LaurentPolynomial::one(1);
        assert_eq!(one.dual_star().terms, one.terms);

        let f = LaurentPolynomial::monomial(vec![3], C::new(0.0, 1.0));
        let s = f.dual_star();
        assert_eq!(s.terms.get(&vec![-3]).copied(), Some(C::new(0.0, -1.0)));
    }

    #[test]
    fn dual_star_is_an_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let f: LaurentPolynomial<f64> = LaurentPolynomial::random(&mut rng, 2, 3, 5);
            let ff = f.dual_star().dual_star();
            assert_eq!(f.terms, ff.terms);
        }
    }

    #[test]
    fn weyl_image_is_value_at_moved_point() {
        let rd = build_root_system(GroupType::A2, Lattice::SimplyConnected).unwrap();
        let w = rd.weyl_group();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f: LaurentPolynomial<f64> = LaurentPolynomial::random(&mut rng, 2, 2, 4);
        let x = TorusPoint::new(vec![C::new(1.3, 0.4), C::new(0.2, -1.1)]);
        for e in &w.elements {
            // both sides compute f(w^{-1} x)
            let lhs = f.weyl_image(e).eval(&x);
            let rhs = f.eval(&x.apply_inverse(e));
            assert!((lhs - rhs).norm() < 1e-12 * (1.0 + rhs.norm()));
        }
    }
}
