//! Genus functions and the derived analytic quantities.
//!
//! A genus is a scalar function `psi`: in multiplicative mode a function of
//! `x` on the punctured plane, analytic in an annulus around the unit circle
//! and allowed to vanish only inside the critical annulus `1/q < |x| < 1`;
//! in additive mode a function of `s` in a vertical strip with zeros only in
//! `-1 < Re s < 0`.  Derived from it are
//!
//! * `Psi(x) = psi(x) / (1 - 1/x)`        (additive: `psi(s)/s`),
//! * `Z(x) = Psi(1/x) Psi(x/q)`           (additive: `Psi(-s) Psi(s-1)`),
//! * `Z1(x) = (1-1/x)(1-q/x) Z(x)`        (additive: `s(s-1) Z(s)`), entire,
//! * the residue constant `z = psi(1) Psi(1/q)` (additive: `-psi(0) psi(-1)`),
//!
//! plus the Laurent data `(z_{-1}, z_0)` of `Z` at its pole on the identity,
//! which the diagonal-evaluation operator of the subregular contribution
//! needs.

use crate::scalar::{c, r, Real};
use num_complex::Complex;

use serde::Serialize;
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Mode {
    Multiplicative,
    Additive,
}

#[derive(Clone)]
pub enum GenusKind<R: Real> {
    /// constant psi (the trivial genus; value may be complex, e.g. `i` for
    /// the genus-zero function-field factorization)
    Constant(Complex<R>),
    /// `psi(x) = 1 - c/x`, the canonical multiplicative test genus
    OneMinusCOverX { c: R },
    /// `psi(y) = kappa prod_i (1 - alpha_i y)`, from Frobenius data
    FunctionField { alphas: Vec<Complex<R>>, kappa: Complex<R> },
    /// `psi(s) = s + c`, the canonical additive test genus
    AdditiveAffine { c: R },
    /// `psi_q(x) = (x - 1)/ln q + c`: a q-family tending to `s + c`
    BridgeAffine { c: R, ln_q: R },
    /// user-supplied evaluator
    Custom(Arc<dyn Fn(Complex<R>) -> Complex<R> + Send + Sync>),
}

impl<R: Real> fmt::Debug for GenusKind<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenusKind::Constant(v) => write!(f, "Constant({v})"),
            GenusKind::OneMinusCOverX { c } => write!(f, "OneMinusCOverX(c={c})"),
            GenusKind::FunctionField { alphas, .. } => {
                write!(f, "FunctionField(g={})", alphas.len())
            }
            GenusKind::AdditiveAffine { c } => write!(f, "AdditiveAffine(c={c})"),
            GenusKind::BridgeAffine { c, ln_q } => write!(f, "BridgeAffine(c={c}, ln_q={ln_q})"),
            GenusKind::Custom(_) => write!(f, "Custom"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Genus<R: Real> {
    pub mode: Mode,
    pub kind: GenusKind<R>,
    /// declared zeros of psi (empty if nonvanishing)
    pub zeros: Vec<Complex<R>>,
    pub label: String,
}

impl<R: Real> Genus<R> {
    pub fn constant_one() -> Self {
        Genus {
            mode: Mode::Multiplicative,
            kind: GenusKind::Constant(c(1.0, 0.0)),
            zeros: vec![],
            label: "constant".into(),
        }
    }

    pub fn one_minus_c_over_x(cc: R) -> Self {
        Genus {
            mode: Mode::Multiplicative,
            kind: GenusKind::OneMinusCOverX { c: cc },
            zeros: vec![Complex::new(cc, R::zero())],
            label: format!("one_minus_c_over_x(c={cc})"),
        }
    }

    pub fn additive_affine(cc: R) -> Self {
        Genus {
            mode: Mode::Additive,
            kind: GenusKind::AdditiveAffine { c: cc },
            zeros: vec![Complex::new(-cc, R::zero())],
            label: format!("additive_affine(c={cc})"),
        }
    }

    pub fn bridge_affine(cc: R, q: R) -> Self {
        let ln_q = q.ln();
        Genus {
            mode: Mode::Multiplicative,
            kind: GenusKind::BridgeAffine { c: cc, ln_q },
            zeros: vec![Complex::new(R::one() - cc * ln_q, R::zero())],
            label: format!("bridge_affine(c={cc})"),
        }
    }

    pub fn eval(&self, z: Complex<R>) -> Complex<R> {
        match &self.kind {
            GenusKind::Constant(v) => *v,
            GenusKind::OneMinusCOverX { c: cc } => {
                Complex::new(R::one(), R::zero()) - Complex::new(*cc, R::zero()) / z
            }
            GenusKind::FunctionField { alphas, kappa } => {
                let mut p = *kappa;
                for a in alphas {
                    p = p * (Complex::new(R::one(), R::zero()) - a * z);
                }
                p
            }
            GenusKind::AdditiveAffine { c: cc } => z + Complex::new(*cc, R::zero()),
            GenusKind::BridgeAffine { c: cc, ln_q } => {
                (z - Complex::new(R::one(), R::zero())) / Complex::new(*ln_q, R::zero())
                    + Complex::new(*cc, R::zero())
            }
            GenusKind::Custom(f) => f(z),
        }
    }
}

/// Mode, scaling parameter and genus bundled for evaluation.
#[derive(Clone, Debug)]
pub struct EvalContext<R: Real> {
    pub mode: Mode,
    /// multiplicative scaling parameter; unused (kept at 1) in additive mode
    pub q: Complex<R>,
    pub genus: Genus<R>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GenusError {
    PoleHit(String),
    BadInput(String),
}

impl fmt::Display for GenusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenusError::PoleHit(s) => write!(f, "evaluation at a pole: {s}"),
            GenusError::BadInput(s) => write!(f, "bad input: {s}"),
        }
    }
}

impl std::error::Error for GenusError {}

impl<R: Real> EvalContext<R> {
    pub fn multiplicative(q: R, genus: Genus<R>) -> Self {
        assert!(q.abs() > R::one(), "multiplicative mode needs |q| > 1");
        assert_eq!(genus.mode, Mode::Multiplicative);
        EvalContext { mode: Mode::Multiplicative, q: Complex::new(q, R::zero()), genus }
    }

    pub fn additive(genus: Genus<R>) -> Self {
        assert_eq!(genus.mode, Mode::Additive);
        EvalContext { mode: Mode::Additive, q: c(1.0, 0.0), genus }
    }

    pub fn psi(&self, z: Complex<R>) -> Complex<R> {
        self.genus.eval(z)
    }

    /// `Psi(x) = psi(x)/(1 - 1/x)`, or `psi(s)/s` in additive mode.
    /// At the pole this returns infinity, which the projector code treats
    /// as a flag rather than an error.
    pub fn big_psi(&self, z: Complex<R>) -> Complex<R> {
        match self.mode {
            Mode::Multiplicative => {
                let one = Complex::new(R::one(), R::zero());
                self.genus.eval(z) / (one - z.inv())
            }
            Mode::Additive => self.genus.eval(z) / z,
        }
    }

    /// Distance-like gauge of how close `z` is to the pole of `Psi`.
    pub fn psi_pole_gauge(&self, z: Complex<R>) -> R {
        match self.mode {
            Mode::Multiplicative => (z - Complex::new(R::one(), R::zero())).norm(),
            Mode::Additive => z.norm(),
        }
    }

    /// `Z(x) = Psi(1/x) Psi(x/q)`, or `Psi(-s) Psi(s-1)`.
    pub fn z_of(&self, z: Complex<R>) -> Complex<R> {
        match self.mode {
            Mode::Multiplicative => self.big_psi(z.inv()) * self.big_psi(z / self.q),
            Mode::Additive => {
                self.big_psi(-z) * self.big_psi(z - Complex::new(R::one(), R::zero()))
            }
        }
    }

    /// Entire part: `Z1(x) = (1-1/x)(1-q/x) Z(x) = -psi(1/x) psi(x/q) / x`,
    /// additively `-psi(-s) psi(s-1)`.
    pub fn z1_of(&self, z: Complex<R>) -> Complex<R> {
        match self.mode {
            Mode::Multiplicative => -self.genus.eval(z.inv()) * self.genus.eval(z / self.q) / z,
            Mode::Additive => -self.genus.eval(-z) * self.genus.eval(z - c(1.0, 0.0)),
        }
    }

    /// Residue constant `z = psi(1) Psi(1/q)` (additive `-psi(0) psi(-1)`).
    pub fn little_z(&self) -> Complex<R> {
        match self.mode {
            Mode::Multiplicative => self.genus.eval(c(1.0, 0.0)) * self.big_psi(self.q.inv()),
            Mode::Additive => -self.genus.eval(c(0.0, 0.0)) * self.genus.eval(c(-1.0, 0.0)),
        }
    }

    /// Laurent data of `Z` at its pole on the identity:
    /// `Z = z_{-1}/(1 - 1/x) + z_0 + O(1 - 1/x)` in multiplicative mode,
    /// `Z = z_{-1}/s + z_0 + O(s)` in additive mode.
    ///
    /// Writing `Z(x) = W(x)/(1-x)` with `W(x) = psi(1/x) Psi(x/q)` analytic at
    /// `x = 1`, one gets `z_{-1} = -W(1)` and `z_0 = W(1) - W'(1)`; the
    /// derivative is computed by a small Cauchy circle, which is spectrally
    /// accurate for our analytic genera.  Additively `Z(s) = V(s)/(-s)` with
    /// `V(s) = psi(-s) Psi(s-1)`, giving `z_{-1} = -V(0)`, `z_0 = -V'(0)`.
    pub fn z_pole_data(&self) -> (Complex<R>, Complex<R>) {
        match self.mode {
            Mode::Multiplicative => {
                let w = |x: Complex<R>| self.genus.eval(x.inv()) * self.big_psi(x / self.q);
                let w1 = w(c(1.0, 0.0));
                let dw = cauchy_derivative(&w, c(1.0, 0.0), r(0.05));
                (-w1, w1 - dw)
            }
            Mode::Additive => {
                let v = |s: Complex<R>| {
                    self.genus.eval(-s) * self.big_psi(s - Complex::new(R::one(), R::zero()))
                };
                let v0 = v(c(0.0, 0.0));
                let dv = cauchy_derivative(&v, c(0.0, 0.0), r(0.05));
                (-v0, -dv)
            }
        }
    }
}

/// First derivative by a Cauchy integral over a small circle (trapezoid rule,
/// exponentially accurate for analytic integrands).
pub fn cauchy_derivative<R: Real, F: Fn(Complex<R>) -> Complex<R>>(
    f: &F,
    center: Complex<R>,
    radius: R,
) -> Complex<R> {
    let n = 64usize;
    let mut sum = Complex::new(R::zero(), R::zero());
    let two_pi = r::<R>(2.0) * R::PI();
    for k in 0..n {
        let t = two_pi * r::<R>(k as f64) / r::<R>(n as f64);
        let zeta = Complex::from_polar(radius, t);
        // f'(c) = (1/2 pi i) \oint f(z)/(z-c)^2 dz; with z = c + zeta the
        // node contribution is f(c + zeta) / zeta per node
        sum = sum + f(center + zeta) / zeta;
    }
    sum / r::<R>(n as f64)
}

/// Cauchy reconstruction check: reconstruct `f(center)` from a circle of
/// radius `radius` and compare; a cheap analyticity certificate.
pub fn cauchy_reconstruction_error<R: Real, F: Fn(Complex<R>) -> Complex<R>>(
    f: &F,
    center: Complex<R>,
    radius: R,
) -> R {
    let n = 64usize;
    let mut sum = Complex::new(R::zero(), R::zero());
    for k in 0..n {
        let t = r::<R>(2.0) * R::PI() * r::<R>(k as f64) / r::<R>(n as f64);
        let zeta = Complex::from_polar(radius, t);
        sum = sum + f(center + zeta);
    }
    (sum / r::<R>(n as f64) - f(center)).norm()
}

/// Build the function-field genus from Frobenius eigenvalue data.
///
/// With `|alpha_i| = sqrt(q)` (checked), `psi(y) = kappa prod (1 - alpha_i y)`
/// where `kappa^2 = (-1)^{g+1} q^g / prod alpha_i`; the principal square root
/// is chosen and recorded on the label.  The zeta identity
/// `xi(x) = psi(1/x) Psi-paired factorization` is validated by sampling in
/// the harness tests.
pub fn function_field_genus<R: Real>(
    alphas: &[Complex<R>],
    q: R,
) -> Result<Genus<R>, GenusError> {
    let sqrt_q = q.sqrt();
    for a in alphas {
        let rel = (a.norm() - sqrt_q).abs() / sqrt_q;
        if rel > r(1e-8) {
            return Err(GenusError::BadInput(format!(
                "Frobenius eigenvalue with |alpha| != sqrt(q): {a}"
            )));
        }
    }
    let g = alphas.len();
    let mut prod = Complex::new(R::one(), R::zero());
    for a in alphas {
        prod = prod * a;
    }
    let sign = if (g + 1) % 2 == 0 { R::one() } else { -R::one() };
    let kappa_sq = Complex::new(sign, R::zero()) * Complex::new(q, R::zero()).powi(g as i32) / prod;
    let kappa = kappa_sq.sqrt(); // principal branch
    let zeros: Vec<Complex<R>> = alphas.iter().map(|a| a.inv()).collect();
    Ok(Genus {
        mode: Mode::Multiplicative,
        kind: GenusKind::FunctionField { alphas: alphas.to_vec(), kappa },
        zeros,
        label: format!("function_field(g={g}, principal sqrt)"),
    })
}

/// The completed zeta function of the function field, from the same data:
/// `xi(x) = x^(g-1) zeta(x)` with
/// `zeta(x) = prod (1 - a_i/x)(1 - q/(a_i x)) / ((1-1/x)(1-q/x))`.
pub fn function_field_xi<R: Real>(alphas: &[Complex<R>], q: R, x: Complex<R>) -> Complex<R> {
    let one = Complex::new(R::one(), R::zero());
    let qq = Complex::new(q, R::zero());
    let mut num = one;
    for a in alphas {
        num = num * (one - a / x) * (one - qq / (a * x));
    }
    let den = (one - x.inv()) * (one - qq / x);
    let g = alphas.len() as i32;
    x.powi(g - 1) * num / den
}

/// Hypothesis report for the positivity theorem: in multiplicative mode,
/// (1) zeros confined to the critical annulus and analyticity certified on
/// sample circles, (2) `-psi(1/x) psi(x/q)` real and positive for `x > q`.
/// Additive mode checks the strip analogues.
#[derive(Debug, Clone, Serialize)]
pub struct HypothesisReport {
    pub conditions: Vec<HypothesisCheck>,
}

#[derive(Debug, Clone, Serialize)]
pub struct HypothesisCheck {
    pub name: String,
    pub passed: bool,
    pub witness: String,
}

impl HypothesisReport {
    pub fn all_passed(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }
}

pub fn check_hypotheses<R: Real>(ctx: &EvalContext<R>) -> HypothesisReport {
    let mut conditions = Vec::new();
    match ctx.mode {
        Mode::Multiplicative => {
            let q = ctx.q.re;
            let mut ok = true;
            let mut witness = String::new();
            for z in &ctx.genus.zeros {
                let m = z.norm();
                if !(m > R::one() / q && m < R::one()) {
                    ok = false;
                    witness = format!("zero at {z} outside the critical annulus");
                    break;
                }
            }
            // analyticity certificate at a few sample centers
            let f = |z: Complex<R>| ctx.genus.eval(z);
            for center in [c(1.0, 0.0), c(0.9, 0.3), c(-1.1, 0.2), Complex::new(q, R::zero())] {
                let err = cauchy_reconstruction_error(&f, center, r(0.05));
                if err > r::<R>(1e-10) * (R::one() + f(center).norm()) {
                    ok = false;
                    witness = format!("Cauchy reconstruction failed near {center}: {err}");
                    break;
                }
            }
            conditions.push(HypothesisCheck {
                name: "critical-zeros-and-analyticity".into(),
                passed: ok,
                witness,
            });
            let mut ok2 = true;
            let mut witness2 = String::new();
            for k in 1..=40 {
                let x = Complex::new(q * (R::one() + r::<R>(k as f64) * r(0.25)), R::zero());
                let v = -ctx.genus.eval(x.inv()) * ctx.genus.eval(x / ctx.q);
                if v.im.abs() > r::<R>(1e-10) * (R::one() + v.re.abs()) || v.re <= R::zero() {
                    ok2 = false;
                    witness2 = format!("-psi(1/x) psi(x/q) = {v} at x = {x}");
                    break;
                }
            }
            conditions.push(HypothesisCheck {
                name: "positivity-beyond-q".into(),
                passed: ok2,
                witness: witness2,
            });
        }
        Mode::Additive => {
            let mut ok = true;
            let mut witness = String::new();
            for z in &ctx.genus.zeros {
                if !(z.re > -R::one() && z.re < R::zero()) {
                    ok = false;
                    witness = format!("zero at {z} outside the critical strip");
                    break;
                }
            }
            conditions.push(HypothesisCheck {
                name: "critical-zeros-strip".into(),
                passed: ok,
                witness,
            });
            let mut ok2 = true;
            let mut witness2 = String::new();
            for k in 1..=40 {
                let s = Complex::new(R::one() + r::<R>(k as f64) * r(0.25), R::zero());
                let v = -ctx.genus.eval(-s) * ctx.genus.eval(s - c(1.0, 0.0));
                if v.im.abs() > r::<R>(1e-10) * (R::one() + v.re.abs()) || v.re <= R::zero() {
                    ok2 = false;
                    witness2 = format!("-psi(-s) psi(s-1) = {v} at s = {s}");
                    break;
                }
            }
            conditions.push(HypothesisCheck {
                name: "positivity-beyond-one".into(),
                passed: ok2,
                witness: witness2,
            });
        }
    }
    HypothesisReport { conditions }
}

#[cfg(test)]
mod tests {
    use super::*;
    type C = Complex<f64>;

    fn ctx_const(q: f64) -> EvalContext<f64> {
        EvalContext::multiplicative(q, Genus::constant_one())
    }

    fn close(a: C, b: C, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn big_psi_values() {
        let ctx = ctx_const(2.0);
        // psi = 1, x = 2 -> 1/(1 - 1/2) = 2
        assert!(close(ctx.big_psi(C::new(2.0, 0.0)), C::new(2.0, 0.0), 1e-14));
        // declared zero of 1 - c/x
        let g = Genus::one_minus_c_over_x(0.7);
        let ctx2 = EvalContext::multiplicative(2.0, g);
        assert!(ctx2.big_psi(C::new(0.7, 0.0)).norm() < 1e-14);
        // additive: psi(s) = s + c at s = 1 -> (1 + c)/1
        let ca = EvalContext::additive(Genus::additive_affine(0.3));
        assert!(close(ca.big_psi(C::new(1.0, 0.0)), C::new(1.3, 0.0), 1e-14));
    }

    #[test]
    fn z_values_and_symmetry() {
        let ctx = ctx_const(2.0);
        // psi = 1: Z(x) = [1/(1-x)] [x/(x-q)]; at x = 3, q = 2: -3/2
        assert!(close(ctx.z_of(C::new(3.0, 0.0)), C::new(-1.5, 0.0), 1e-14));
        // functional equation Z(x) = Z(q/x) at random points
        for (re, im) in [(1.7, 0.3), (0.4, -0.8), (2.5, 1.0)] {
            let x = C::new(re, im);
            let q_over_x = ctx.q / x;
            assert!(close(ctx.z_of(x), ctx.z_of(q_over_x), 1e-12));
        }
        // additive symmetry Z(s) = Z(1-s)
        let ca = EvalContext::additive(Genus::additive_affine(0.4));
        for (re, im) in [(0.3, 0.2), (2.0, -1.0)] {
            let s = C::new(re, im);
            assert!(close(ca.z_of(s), ca.z_of(C::new(1.0, 0.0) - s), 1e-12));
        }
        // additive closed form for psi = s + c
        let cc = 0.4;
        let s = C::new(0.7, 0.25);
        let expect = (C::new(cc, 0.0) - s) * (s - C::new(1.0 - cc, 0.0))
            / (-s * (s - C::new(1.0, 0.0)));
        assert!(close(ca.z_of(s), expect, 1e-12));
    }

    #[test]
    fn z1_is_entire_and_matches_product_form() {
        let ctx = ctx_const(2.0);
        // psi = 1 -> Z1(x) = -1/x
        for (re, im) in [(1.0, 0.0), (0.5, 0.7), (2.0, -0.2)] {
            let x = C::new(re, im);
            assert!(close(ctx.z1_of(x), -x.inv(), 1e-13));
        }
        // x = 1 -> -psi(1) psi(1/q)
        let g = Genus::one_minus_c_over_x(0.6);
        let ctx2 = EvalContext::multiplicative(2.0, g.clone());
        let expect = -g.eval(C::new(1.0, 0.0)) * g.eval(C::new(0.5, 0.0));
        assert!(close(ctx2.z1_of(C::new(1.0, 0.0)), expect, 1e-13));
        // positivity of -(1-c x)(1-c q/x)/x for x > q, 1/q < c < 1
        for k in 1..10 {
            let x = C::new(2.0 + k as f64, 0.0);
            let v = ctx2.z1_of(x);
            assert!(v.re > 0.0 && v.im.abs() < 1e-14);
        }
    }

    #[test]
    fn little_z_values() {
        // psi = 1, q = 2 -> 1/(1-2) = -1
        assert!(close(ctx_const(2.0).little_z(), C::new(-1.0, 0.0), 1e-14));
        // psi = 1 - c/x -> (1-c)(1-cq)/(1-q)
        let (cc, q) = (0.7, 2.0);
        let ctx = EvalContext::multiplicative(q, Genus::one_minus_c_over_x(cc));
        let expect = (1.0 - cc) * (1.0 - cc * q) / (1.0 - q);
        assert!(close(ctx.little_z(), C::new(expect, 0.0), 1e-14));
        // additive: -c(c-1) > 0 for 0 < c < 1
        let ca = EvalContext::additive(Genus::additive_affine(0.4));
        assert!(close(ca.little_z(), C::new(-0.4 * (0.4 - 1.0), 0.0), 1e-14));
    }

    #[test]
    fn pole_data_of_z() {
        // psi = 1, q = 2: W(x) = Psi(x/q) = x/(x-2); W(1) = -1, W'(1) = -2/(1-2)^2 = -2
        // z_{-1} = 1, z_0 = -1 - (-2) = 1
        let ctx = ctx_const(2.0);
        let (zm1, z0) = ctx.z_pole_data();
        assert!(close(zm1, C::new(1.0, 0.0), 1e-10));
        assert!(close(z0, C::new(1.0, 0.0), 1e-10));
        // numerically: Z(x) (1 - 1/x) -> z_{-1} as x -> 1
        for eps in [1e-3, 1e-4] {
            let x = C::new(1.0 + eps, 0.0);
            let probe = ctx.z_of(x) * (C::new(1.0, 0.0) - x.inv());
            assert!((probe - zm1).norm() < 50.0 * eps);
        }
        // additive: z_{-1} = -little_z
        let ca = EvalContext::additive(Genus::additive_affine(0.4));
        let (zm1a, _z0a) = ca.z_pole_data();
        assert!(close(zm1a, -ca.little_z(), 1e-10));
    }

    #[test]
    fn residue_constant_near_q() {
        // Z(x) ~ z/(1 - q/x) near x = q: sample and extrapolate
        let ctx = EvalContext::multiplicative(2.0, Genus::one_minus_c_over_x(0.7));
        let z = ctx.little_z();
        for eps in [1e-2, 1e-3, 1e-4] {
            let x = ctx.q * C::new(1.0 + eps, 0.0);
            let probe = ctx.z_of(x) * (C::new(1.0, 0.0) - ctx.q / x);
            assert!((probe - z).norm() < 10.0 * eps * (1.0 + z.norm()));
        }
    }

    #[test]
    fn function_field_data() {
        let q = 2.0f64;
        // genus zero: constant psi with psi^2 = -1
        let g0 = function_field_genus::<f64>(&[], q).unwrap();
        let v = g0.eval(C::new(0.37, 0.1));
        assert!(close(v * v, C::new(-1.0, 0.0), 1e-13));
        // genus one
        let th = std::f64::consts::PI / 3.0;
        let a = C::from_polar(q.sqrt(), th);
        let alphas = vec![a, a.conj()];
        let g1 = function_field_genus(&alphas, q).unwrap();
        assert_eq!(g1.zeros.len(), 2);
        for z in &g1.zeros {
            assert!((z.norm() - 1.0 / q.sqrt()).abs() < 1e-12);
        }
        // the factorization reproduces xi at sample points
        let ctx = EvalContext::multiplicative(q, g1);
        for k in 0..10 {
            let x = C::new(1.3 + 0.2 * k as f64, 0.3 + 0.05 * k as f64);
            let xi = function_field_xi(&alphas, q, x);
            assert!(close(ctx.z_of(x), xi, 1e-10), "x = {x}");
        }
        // zeros of Z on |x| = sqrt(q), located by Newton from the predictions
        for z0 in [a, ctx.q / a] {
            let mut x = z0 * C::new(1.01, 0.005); // slightly off
            for _ in 0..40 {
                let h = C::new(1e-6, 0.0);
                let d = (ctx.z_of(x + h) - ctx.z_of(x - h)) / (2.0 * h);
                x = x - ctx.z_of(x) / d;
            }
            assert!(ctx.z_of(x).norm() < 1e-10);
            assert!((x.norm() - q.sqrt()).abs() < 1e-8);
        }
        // eigenvalue off the sqrt(q) circle is rejected
        assert!(function_field_genus(&[C::new(1.0, 0.0)], q).is_err());
    }

    #[test]
    fn hypothesis_checks() {
        // canonical test genus passes
        let q = 2.0;
        let ctx = EvalContext::multiplicative(q, Genus::one_minus_c_over_x(0.8 / q + 0.2));
        assert!(check_hypotheses(&ctx).all_passed());
        // constant 1 fails positivity (-1 is not positive)
        let bad = check_hypotheses(&ctx_const(2.0));
        assert!(!bad.all_passed());
        // additive affine passes for 0 < c < 1
        let ca = EvalContext::additive(Genus::additive_affine(0.4));
        assert!(check_hypotheses(&ca).all_passed());
    }

    #[test]
    fn bridge_family_tends_to_additive() {
        // Z_mult(q^s) (ln q)^2 -> Z_add(s) as q -> 1
        let cc = 0.4;
        let s = C::new(0.6, 0.3);
        let ca = EvalContext::additive(Genus::additive_affine(cc));
        let target = ca.z_of(s);
        let mut prev = f64::INFINITY;
        for delta in [0.1, 0.05, 0.025] {
            let q = 1.0 + delta;
            let cm = EvalContext::multiplicative(q, Genus::bridge_affine(cc, q));
            let x = C::new(q, 0.0).powc(s);
            let v = cm.z_of(x) * C::new(q.ln() * q.ln(), 0.0);
            let err = (v - target).norm();
            assert!(err < prev);
            prev = err;
        }
        assert!(prev < 0.05);
    }
}
