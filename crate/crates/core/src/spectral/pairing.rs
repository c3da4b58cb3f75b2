//! The contour-integral side of the identity.
//!
//! For test functions `f1, f2` on the torus the pairing is
//!
//! ```text
//! (1/z^r) * integral over shift * A_cmp of
//!     sum_w f1(x) f2(w^{-1} x) prod_{a > 0, w^{-1} a < 0} Z(x^a) / Z(q x^a)
//! ```
//!
//! with probability Haar measure on each circle and any shift satisfying
//! `|shift^a| > |q|` for all positive roots.  The intertwining ratio
//! `Z(y)/Z(qy)` has matching simple poles at `y = 1`, where its value is
//! `z_{-1}/z`; nodes will not land there on admissible shifted contours, but
//! the compact-torus reuse of this integrand (the zero-orbit contribution)
//! does evaluate nearby, so the ratio is computed pole-aware.

use super::check_contour_admissible;
use crate::genus::EvalContext;
use crate::laurent::{LaurentPolynomial, TorusPoint};
use crate::quad::{ContourSpec, QuadResult};
use crate::rootsys::{RootDatum, WeylGroup};
use crate::scalar::{r, Real};
use num_complex::Complex;

/// Pole-aware intertwining ratio `Z(y) / Z(q y)`.
///
/// Both factors have simple poles at `y = 1`.  Writing `u = 1 - 1/y`,
/// `Z(y) = z_{-1}/u + z_0 + O(u)`, and the functional equation `Z = Z(q/.)`
/// turns the expansion at the `q`-pole into `Z(qy) = -z_{-1}/u + (z_{-1} +
/// z_0) + O(u)`, so near the pole the ratio is evaluated from these Laurent
/// data; the limiting value is `-1` for every genus.
pub fn intertwining_ratio<R: Real>(ctx: &EvalContext<R>, y: Complex<R>) -> Complex<R> {
    let one = Complex::new(R::one(), R::zero());
    let gauge = (y - one).norm();
    if gauge < r(1e-6) {
        let (zm1, z0) = ctx.z_pole_data();
        let u = one - y.inv();
        return (zm1 + z0 * u) / (-zm1 + (zm1 + z0) * u);
    }
    ctx.z_of(y) / ctx.z_of(ctx.q * y)
}

/// Precomputed contour data for repeated pairings with different test
/// functions: nodes, Haar weights, and the f-independent intertwining
/// products per Weyl element.
pub struct PairingGrid<R: Real> {
    pub rd: RootDatum,
    pub weyl: WeylGroup,
    nodes: Vec<TorusPoint<R>>,
    /// parity flag: node lies on the half-resolution subgrid
    coarse: Vec<bool>,
    /// node-major, then per Weyl element: the intertwining product
    products: Vec<Vec<Complex<R>>>,
    n_nodes_full: usize,
    n_nodes_coarse: usize,
    little_z_pow_r: Complex<R>,
    pub n_used: usize,
    wall_gauge: R,
}

impl<R: Real> PairingGrid<R> {
    /// Build the grid over `shift * A_cmp^r`.  Fails if the shift is
    /// inadmissible, reporting the violated root.
    pub fn new(
        rd: &RootDatum,
        ctx: &EvalContext<R>,
        shift: &[Complex<R>],
        nodes: usize,
        offset: f64,
    ) -> Result<Self, Vec<i64>> {
        check_contour_admissible(rd, ctx.q, shift)?;
        Ok(Self::new_unchecked(rd, ctx, shift, nodes, offset))
    }

    /// Grid construction without the admissibility check; used for the
    /// compact-torus reuse of the integrand by the zero orbit, where the
    /// pole-aware intertwining ratio takes over near the walls.
    pub fn new_unchecked(
        rd: &RootDatum,
        ctx: &EvalContext<R>,
        shift: &[Complex<R>],
        nodes: usize,
        offset: f64,
    ) -> Self {
        let weyl = rd.weyl_group();
        let k = rd.rank;
        let n = nodes.max(2) & !1usize;
        let two_pi = r::<R>(2.0) * R::PI();
        // incommensurate per-coordinate offsets so that no root character
        // can align a node with a pole of an individual Weyl term
        let offsets: Vec<R> = (0..k)
            .map(|j| r::<R>(offset) * r::<R>((j as f64 + 1.0).sqrt()))
            .collect();
        let mut phases: Vec<Vec<Complex<R>>> = Vec::with_capacity(k);
        for j in 0..k {
            phases.push(
                (0..n)
                    .map(|m| {
                        let t = two_pi * (r::<R>(m as f64) / r::<R>(n as f64) + offsets[j]);
                        Complex::from_polar(R::one(), t)
                    })
                    .collect(),
            );
        }
        // inversion sets {a > 0 : w^{-1} a < 0} per Weyl element
        let inv_sets: Vec<Vec<usize>> = (0..weyl.order())
            .map(|i| rd.inversions(weyl.inverse_of(i)))
            .collect();

        let mut nodes_out = Vec::new();
        let mut coarse = Vec::new();
        let mut products = Vec::new();
        let mut wall_gauge = R::infinity();
        let one = Complex::new(R::one(), R::zero());
        let mut idx = vec![0usize; k];
        loop {
            let coords: Vec<Complex<R>> =
                (0..k).map(|j| shift[j] * phases[j][idx[j]]).collect();
            let x = TorusPoint::new(coords);
            let ratios: Vec<Complex<R>> = rd
                .positive_roots
                .iter()
                .map(|a| {
                    let y = x.pow(a);
                    wall_gauge = wall_gauge.min((y - one).norm());
                    intertwining_ratio(ctx, y)
                })
                .collect();
            let prods: Vec<Complex<R>> = inv_sets
                .iter()
                .map(|set| {
                    let mut p = Complex::new(R::one(), R::zero());
                    for &ai in set {
                        p = p * ratios[ai];
                    }
                    p
                })
                .collect();
            nodes_out.push(x);
            coarse.push(idx.iter().all(|&m| m % 2 == 0));
            products.push(prods);
            let mut j = 0;
            loop {
                if j == k {
                    break;
                }
                idx[j] += 1;
                if idx[j] < n {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
            if j == k {
                break;
            }
        }
        let n_full = nodes_out.len();
        let n_coarse = coarse.iter().filter(|&&b| b).count();
        let z = ctx.little_z();
        let mut zr = Complex::new(R::one(), R::zero());
        for _ in 0..rd.rank {
            zr = zr * z;
        }
        PairingGrid {
            rd: rd.clone(),
            weyl,
            nodes: nodes_out,
            coarse,
            products,
            n_nodes_full: n_full,
            n_nodes_coarse: n_coarse,
            little_z_pow_r: zr,
            n_used: n,
            wall_gauge,
        }
    }

    /// Smallest distance of any node's root character from the identity
    /// (where individual Weyl terms have poles).
    pub fn min_wall_gauge(&self) -> R {
        self.wall_gauge
    }

    /// Evaluate the pairing for one pair of test functions.
    pub fn evaluate(
        &self,
        f1: &LaurentPolynomial<R>,
        f2: &LaurentPolynomial<R>,
    ) -> QuadResult<R> {
        // precompute the Weyl translates of f2 once
        let translated: Vec<LaurentPolynomial<R>> = self
            .weyl
            .elements
            .iter()
            .map(|w| f2.weyl_image(w))
            .collect();
        let mut sum_full = Complex::new(R::zero(), R::zero());
        let mut sum_coarse = Complex::new(R::zero(), R::zero());
        for (i, x) in self.nodes.iter().enumerate() {
            let f1v = f1.eval(x);
            let mut s = Complex::new(R::zero(), R::zero());
            for (wi, tf) in translated.iter().enumerate() {
                s = s + tf.eval(x) * self.products[i][wi];
            }
            let v = f1v * s;
            sum_full = sum_full + v;
            if self.coarse[i] {
                sum_coarse = sum_coarse + v;
            }
        }
        let value = sum_full / r::<R>(self.n_nodes_full as f64) / self.little_z_pow_r;
        let coarse =
            sum_coarse / r::<R>(self.n_nodes_coarse as f64) / self.little_z_pow_r;
        QuadResult {
            value,
            error_estimate: (value - coarse).norm(),
            n_used: self.n_used,
        }
    }
}

/// The raw integrand at a torus point (used by tests and by the zero-orbit
/// contribution, which integrates the same expression over the compact
/// torus).
pub fn eis_integrand<R: Real>(
    rd: &RootDatum,
    weyl: &WeylGroup,
    ctx: &EvalContext<R>,
    f1: &LaurentPolynomial<R>,
    f2: &LaurentPolynomial<R>,
    x: &TorusPoint<R>,
) -> Complex<R> {
    let ratios: Vec<Complex<R>> = rd
        .positive_roots
        .iter()
        .map(|a| intertwining_ratio(ctx, x.pow(a)))
        .collect();
    let mut s = Complex::new(R::zero(), R::zero());
    for i in 0..weyl.order() {
        let w = &weyl.elements[i];
        let winv = weyl.inverse_of(i);
        let mut p = Complex::new(R::one(), R::zero());
        for ai in rd.inversions(winv) {
            p = p * ratios[ai];
        }
        s = s + f1.eval(x) * f2.eval(&x.apply_inverse(w)) * p;
    }
    let z = ctx.little_z();
    let mut zr = Complex::new(R::one(), R::zero());
    for _ in 0..rd.rank {
        zr = zr * z;
    }
    s / zr
}

/// One-shot pairing evaluation.
pub fn eis_pairing<R: Real>(
    rd: &RootDatum,
    ctx: &EvalContext<R>,
    f1: &LaurentPolynomial<R>,
    f2: &LaurentPolynomial<R>,
    spec: &ContourSpec<R>,
) -> Result<QuadResult<R>, Vec<i64>> {
    let grid = PairingGrid::new(rd, ctx, &spec.shift, spec.nodes, spec.offset)?;
    Ok(grid.evaluate(f1, f2))
}
