//! Closed forms for the subregular contribution in type G2.
//!
//! The three component classes of the order-six component group contribute
//! isolated spectral points.  On the identity class the projector involves
//! the diagonal-evaluation operator
//!
//! ```text
//! D f (x1, x2) = (1 + swap) Z(x1/x2) f(x1, x2),
//! D f |_{x1 = x2} = (z_{-1} + 2 z_0) f + z_{-1} (x1 d/dx1 - x2 d/dx2) f,
//! ```
//!
//! where `(z_{-1}, z_0)` are the Laurent data of `Z` at its pole.  The class
//! values are, in the torus coordinates fixed by the root datum,
//!
//! ```text
//! identity : (1/6) |D f(q,q) + 3 Z(q^2) f(q,1)|^2 / (Z(q^2)^3 Z(q^3))
//! swap     : (1/2) |Z(-1)(f(-q,q)+f(q,-q)) + Z(-q^2) f(-q,-1)|^2
//!                 / (Z(q^2)^2 Z(-q^2) Z(-q^3))
//! 3-cycle  : (1/3) |Z(v^2) f(qv,qv^2) + Z(v) f(qv^2,qv)|^2
//!                 / (Z(q^2) Z(q^2 v) Z(q^2 v^2) Z(q^3)),   v = e^{2 pi i/3}.
//! ```

use super::orbit::SpectralScene;
use crate::genus::EvalContext;
use crate::laurent::{LaurentPolynomial, TorusPoint};
use crate::scalar::{r, unit_phase, Real};
use crate::Q64;
use num_complex::Complex;

/// `D f` at the diagonal point `(y, y)`.
pub fn diagonal_operator<R: Real>(
    ctx: &EvalContext<R>,
    f: &LaurentPolynomial<R>,
    y: Complex<R>,
) -> Complex<R> {
    let (zm1, z0) = ctx.z_pole_data();
    let x = TorusPoint::new(vec![y, y]);
    let fd = {
        let d1 = f.scale_derivative(0);
        let d2 = f.scale_derivative(1);
        d1.eval(&x) - d2.eval(&x)
    };
    let two = Complex::new(r::<R>(2.0), R::zero());
    (zm1 + z0 * two) * f.eval(&x) + zm1 * fd
}

/// The three class contributions of the subregular orbit for the Hermitian
/// pair `(f, f*)`; their sum is the orbit contribution.
pub fn g2_subregular_closed_forms<R: Real>(
    ctx: &EvalContext<R>,
    f: &LaurentPolynomial<R>,
) -> [Complex<R>; 3] {
    let q = ctx.q;
    let z = |v: Complex<R>| ctx.z_of(v);
    let abs2 = |v: Complex<R>| Complex::new(v.norm_sqr(), R::zero());
    let ev = |a: Complex<R>, b: Complex<R>| f.eval(&TorusPoint::new(vec![a, b]));
    let one = Complex::new(R::one(), R::zero());

    // identity class
    let q2 = q * q;
    let q3 = q2 * q;
    let three = Complex::new(r::<R>(3.0), R::zero());
    let ident = abs2(diagonal_operator(ctx, f, q) + three * z(q2) * ev(q, one))
        / (z(q2).powi(3) * z(q3))
        / r::<R>(6.0);

    // transposition class at (-q, q); the reflected point is (-q, -1)
    let m1 = -one;
    let swap = {
        let val = z(m1) * (ev(-q, q) + ev(q, -q)) + z(-q2) * ev(-q, -one);
        abs2(val) / (z(q2).powi(2) * z(-q2) * z(-q3)) / r::<R>(2.0)
    };

    // three-cycle class at (q v, q v^2)
    let v = unit_phase::<R>(1.0 / 3.0);
    let v2 = v * v;
    let cyc = abs2(z(v2) * ev(q * v, q * v2) + z(v) * ev(q * v2, q * v))
        / (z(q2) * z(q2 * v) * z(q2 * v2) * z(q3))
        / r::<R>(3.0);

    [ident, swap, cyc]
}

/// Exact data of the additive discrete-point expansion at the subregular
/// characteristic: the bracket inside the squared modulus is
/// `zm1_mult * z_{-1} * (directional derivative) + z0_mult * z_0 * f(point)
///  + off_mult * Z(off_z_arg) * f(off_point)`, squared and divided by
/// `weight^{-1} * prod Z(arg)^{power}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct G2DiscreteExpansion {
    pub haar_weight: Q64,
    pub point: Vec<Q64>,
    pub derivative_direction: Vec<i64>,
    pub zm1_multiplier: i64,
    pub z0_multiplier: i64,
    pub off_point: Vec<Q64>,
    pub off_multiplier: i64,
    pub off_z_argument: i64,
    /// denominator as (argument, power) pairs for Z evaluated at integers
    pub denominator: Vec<(i64, u32)>,
}

/// Emit the additive expansion from the orbit record and the implemented
/// diagonal operator; the off-diagonal multiplier is extracted from the
/// restricted projector itself and asserted to be an exact small integer.
pub fn g2_additive_discrete_expansion<R: Real>(
    scene: &SpectralScene<R>,
) -> Result<G2DiscreteExpansion, String> {
    let rec = scene
        .catalog
        .orbits
        .iter()
        .find(|o| o.label == "subregular")
        .ok_or("no subregular orbit in this catalog")?;
    let rd = &scene.rd;
    let half: Vec<Q64> = rec.h_coweight.iter().map(|x| *x / Q64::from_integer(2)).collect();

    // identity class and its weight
    let ident = rec
        .classes
        .iter()
        .find(|c| c.angles.iter().all(|a| a.numer() == &0))
        .ok_or("no identity class")?;

    // direction of the derivative: the positive root vanishing on h
    let wall: Vec<i64> = rd
        .positive_roots
        .iter()
        .find(|a| crate::rootsys::pair_q(a, &rec.h_coweight) == Q64::from_integer(0))
        .ok_or("no wall root")?
        .clone();

    // the reflected evaluation point: image of h/2 under the non-identity
    // supported coset representative
    let other_rep = *rec
        .weyl_support
        .iter()
        .find(|&&i| scene.weyl.elements[i].length > 0)
        .ok_or("no reflected stratum")?;
    let w = &scene.weyl.elements[other_rep];
    let winv = scene.weyl.inverse_of(other_rep);
    let off_point = w.apply_cochar_q(winv, &half);

    // off-diagonal multiplier: evaluate the reflected-coset projector sum at
    // the identity-class point for f = 1 and divide out Psi(V0) Z(q^2); the
    // trivial-module factor Psi(V0) is the full restricted term of the
    // identity coset divided by the diagonal operator value for f = 1.
    let f1 = LaurentPolynomial::one(rd.rank);
    let x = super::q_to_coweight(scene.ctx.q, &half);
    let stab = scene.coweight_stabilizer(&rec.h_coweight);
    let coset_elements = |rep: usize| -> Vec<usize> {
        stab.iter().map(|&u| scene.weyl_index_of_product(u, rep)).collect()
    };
    let ident_rep = *rec
        .weyl_support
        .iter()
        .find(|&&i| scene.weyl.elements[i].length == 0)
        .ok_or("no identity coset")?;
    let s_ident = super::orbit::restrict_projector(
        scene,
        &coset_elements(ident_rep),
        super::orbit::ProjectorSign::Plus,
        &f1,
        &x,
    )
    .map_err(|e| e.to_string())?;
    let s_off = super::orbit::restrict_projector(
        scene,
        &coset_elements(other_rep),
        super::orbit::ProjectorSign::Plus,
        &f1,
        &x,
    )
    .map_err(|e| e.to_string())?;
    let d_one = diagonal_operator(&scene.ctx, &f1, scene.ctx.q);
    let psi_v0 = s_ident / d_one;
    let q2 = scene.ctx.q * scene.ctx.q;
    let ratio = s_off / (psi_v0 * scene.ctx.z_of(q2));
    let mult = ratio.re.round();
    let mult_i = num_traits::ToPrimitive::to_i64(&mult).ok_or("bad multiplier")?;
    if (ratio - Complex::new(mult, R::zero())).norm() > r(1e-6) {
        return Err(format!("off-diagonal multiplier not integral: {ratio}"));
    }

    // denominator arguments: one Z(i/2 + 1) per multiplicity-space line
    let mut denom: Vec<(i64, u32)> = Vec::new();
    for (&i, entries) in &rec.levels {
        if i == 0 {
            continue;
        }
        let arg = i / 2 + 1;
        for _ in entries {
            match denom.iter_mut().find(|(a, _)| *a == arg) {
                Some((_, p)) => *p += 1,
                None => denom.push((arg, 1)),
            }
        }
    }
    denom.sort();

    Ok(G2DiscreteExpansion {
        haar_weight: ident.weight,
        point: half,
        derivative_direction: wall,
        zm1_multiplier: 1,
        z0_multiplier: 2,
        off_point,
        off_multiplier: mult_i,
        off_z_argument: 2,
        denominator: denom,
    })
}

/// The reference template: weight 1/6 at the point (1,1), derivative along
/// (1,-1), bracket `z_{-1} D1 f + 2 z_0 f + 3 Z(2) f(1,0)`, denominator
/// `Z(2)^3 Z(3)`.
pub fn g2_discrete_template() -> G2DiscreteExpansion {
    G2DiscreteExpansion {
        haar_weight: Q64::new(1, 6),
        point: vec![Q64::from_integer(1), Q64::from_integer(1)],
        derivative_direction: vec![1, -1],
        zm1_multiplier: 1,
        z0_multiplier: 2,
        off_point: vec![Q64::from_integer(1), Q64::from_integer(0)],
        off_multiplier: 3,
        off_z_argument: 2,
        denominator: vec![(2, 3), (3, 1)],
    }
}

/// Additive diagonal operator check: `(1 + swap) Z(s1 - s2) f` extends to
/// `z_{-1} (d1 - d2) f + 2 z_0 f` on the diagonal.
pub fn additive_diagonal_operator<R: Real>(
    ctx: &EvalContext<R>,
    f: &dyn Fn(Complex<R>, Complex<R>) -> Complex<R>,
    s: Complex<R>,
    eps: R,
) -> Complex<R> {
    let e = Complex::new(eps, R::zero());
    let a = s + e;
    let b = s - e;
    ctx.z_of(a - b) * f(a, b) + ctx.z_of(b - a) * f(b, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genus::Genus;

    type C = Complex<f64>;

    #[test]
    fn diagonal_operator_on_constants_and_monomials() {
        let ctx = EvalContext::multiplicative(2.0, Genus::one_minus_c_over_x(0.7));
        let (zm1, z0) = ctx.z_pole_data();
        let one = LaurentPolynomial::one(2);
        let got = diagonal_operator(&ctx, &one, C::new(2.0, 0.0));
        assert!((got - (zm1 + 2.0 * z0)).norm() < 1e-12);
        // f = x1: derivative term z_{-1} * x1 evaluated at (q, q)
        let f = LaurentPolynomial::monomial(vec![1, 0], C::new(1.0, 0.0));
        let got = diagonal_operator(&ctx, &f, C::new(2.0, 0.0));
        let expect = (zm1 + 2.0 * z0) * C::new(2.0, 0.0) + zm1 * C::new(2.0, 0.0);
        assert!((got - expect).norm() < 1e-12);
    }

    #[test]
    fn diagonal_operator_agrees_with_the_two_term_limit() {
        // multiplicative version of the cancellation: evaluate
        // Z(x1/x2) f(x1,x2) + Z(x2/x1) f(x2,x1) near the diagonal
        let ctx = EvalContext::multiplicative(2.0, Genus::one_minus_c_over_x(0.7));
        let f = LaurentPolynomial::monomial(vec![2, -1], C::new(0.8, 0.4));
        let y = C::new(2.0, 0.0);
        let direct = diagonal_operator(&ctx, &f, y);
        let sampled = crate::quad::cancellation_limit(
            |eps| {
                let a = y * C::new((eps as f64).exp(), 0.0);
                let b = y * C::new((-eps as f64).exp(), 0.0);
                let xa = TorusPoint::new(vec![a, b]);
                let xb = TorusPoint::new(vec![b, a]);
                ctx.z_of(a / b) * f.eval(&xa) + ctx.z_of(b / a) * f.eval(&xb)
            },
            0.1,
            9,
        )
        .unwrap();
        assert!(
            (sampled.value - direct).norm() < 1e-9 * (1.0 + direct.norm()),
            "{} vs {}",
            sampled.value,
            direct
        );
    }

    #[test]
    fn additive_diagonal_matches_laurent_data() {
        let ctx = EvalContext::additive(Genus::additive_affine(0.4));
        let (zm1, z0) = ctx.z_pole_data();
        // f(s1, s2) = s1 exp(s1 + s2) at the diagonal point s
        let f = |a: C, b: C| a * (a + b).exp();
        let s = C::new(0.3, 0.0);
        let limit = crate::quad::cancellation_limit(
            |eps| additive_diagonal_operator(&ctx, &f, s, eps),
            0.05,
            9,
        )
        .unwrap();
        // z_{-1}(d1 - d2) f + 2 z_0 f at (s, s):
        // d1 f = (1 + s1) exp(s1+s2), d2 f = s1 exp(s1+s2)
        let e2s = (2.0 * s).exp();
        let expect = zm1 * e2s + 2.0 * z0 * s * e2s;
        assert!(
            (limit.value - expect).norm() < 1e-8 * (1.0 + expect.norm()),
            "{} vs {expect}",
            limit.value
        );
    }
}
