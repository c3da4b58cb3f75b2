//! Cohomological (additive) mode: vertical-line pairings, per-orbit
//! discrete and line contributions, and the degeneration bridge from the
//! multiplicative mode.
//!
//! Test functions here are entire functions of `s` in dual coordinates that
//! decay along vertical lines (Gaussian-type factors in the tests).  Only
//! component classes at the identity survive the degeneration; their Haar
//! weights are retained, which is where the `1/|center|` of the regular
//! orbit comes from.

use super::orbit::{SpectralScene, SpectralError};
use crate::genus::{EvalContext, Mode};
use crate::quad::{line_integral, richardson_from_samples, ContourSpec, QuadError, QuadResult};
use crate::scalar::{r, Real};
use crate::Q64;
use num_complex::Complex;
use std::sync::Arc;

pub type AdditiveTestFn<R> = Arc<dyn Fn(&[Complex<R>]) -> Complex<R> + Send + Sync>;

/// `f*(s) = conj(f(-conj(s)))`: the Hermitian partner of an additive test
/// function.
pub fn additive_dual<R: Real>(f: AdditiveTestFn<R>) -> AdditiveTestFn<R> {
    Arc::new(move |s: &[Complex<R>]| {
        let flipped: Vec<Complex<R>> = s.iter().map(|z| -z.conj()).collect();
        f(&flipped).conj()
    })
}

/// Pole-aware additive intertwining ratio `Z(y)/Z(1 + y)`: both factors
/// have simple poles at `y = 0` and the ratio extends with value `-1`.
pub fn additive_intertwining_ratio<R: Real>(ctx: &EvalContext<R>, y: Complex<R>) -> Complex<R> {
    debug_assert_eq!(ctx.mode, Mode::Additive);
    if y.norm() < r(1e-6) {
        let (zm1, z0) = ctx.z_pole_data();
        return (zm1 + z0 * y) / (-zm1 + z0 * y);
    }
    ctx.z_of(y) / ctx.z_of(y + Complex::new(R::one(), R::zero()))
}

/// `w^{-1} s` in dual coordinates: the transpose of `w`'s character matrix.
fn apply_inverse_cochar<R: Real>(
    w: &crate::rootsys::WeylElement,
    s: &[Complex<R>],
) -> Vec<Complex<R>> {
    let n = s.len();
    (0..n)
        .map(|i| {
            let mut v = Complex::new(R::zero(), R::zero());
            for j in 0..n {
                v = v + Complex::new(r(w.mat[j][i] as f64), R::zero()) * s[j];
            }
            v
        })
        .collect()
}

fn pair_root<R: Real>(root: &[i64], s: &[Complex<R>]) -> Complex<R> {
    let mut v = Complex::new(R::zero(), R::zero());
    for (&c, z) in root.iter().zip(s) {
        v = v + Complex::new(r(c as f64), R::zero()) * *z;
    }
    v
}

/// The additive pairing integrand
/// `(1/z^r) sum_w f1(s) f2(w^{-1} s) prod_{a>0, w^{-1}a<0} Z(a(s))/Z(1+a(s))`.
pub fn additive_eis_integrand<R: Real>(
    scene: &SpectralScene<R>,
    f1: &AdditiveTestFn<R>,
    f2: &AdditiveTestFn<R>,
    s: &[Complex<R>],
) -> Complex<R> {
    let rd = &scene.rd;
    let weyl = &scene.weyl;
    let ctx = &scene.ctx;
    let ratios: Vec<Complex<R>> = rd
        .positive_roots
        .iter()
        .map(|a| additive_intertwining_ratio(ctx, pair_root(a, s)))
        .collect();
    let mut sum = Complex::new(R::zero(), R::zero());
    for i in 0..weyl.order() {
        let w = &weyl.elements[i];
        let winv = weyl.inverse_of(i);
        let mut p = Complex::new(R::one(), R::zero());
        for ai in rd.inversions(winv) {
            p = p * ratios[ai];
        }
        sum = sum + f1(s) * f2(&apply_inverse_cochar(w, s)) * p;
    }
    let z = ctx.little_z();
    let mut zr = Complex::new(R::one(), R::zero());
    for _ in 0..rd.rank {
        zr = zr * z;
    }
    sum / zr
}

/// The vertical-line pairing over `Re s = sigma_scale * rho_check` (the
/// contour side of the identity).
pub fn additive_eis_side<R: Real>(
    scene: &SpectralScene<R>,
    f1: &AdditiveTestFn<R>,
    f2: &AdditiveTestFn<R>,
    sigma_scale: f64,
    nodes: usize,
    trunc: f64,
) -> Result<QuadResult<R>, QuadError> {
    let shift: Vec<Complex<R>> = scene
        .rd
        .rho_check
        .iter()
        .map(|m| {
            Complex::new(
                r::<R>(sigma_scale) * r::<R>(*m.numer() as f64 / *m.denom() as f64),
                R::zero(),
            )
        })
        .collect();
    let spec = ContourSpec::line(shift, nodes, trunc);
    line_integral(|s| additive_eis_integrand(scene, f1, f2, s), &spec)
}

#[derive(Clone, Copy, Debug)]
enum AddTermVal<R: Real> {
    Finite(Complex<R>),
    Zero,
    Pole,
}

/// Additive projector term: product over one root side of
/// `Psi((w a)(s)) / Psi((w a)(s) - 1)`.
fn additive_projector_term<R: Real>(
    scene: &SpectralScene<R>,
    wi: usize,
    sign: super::orbit::ProjectorSign,
    s: &[Complex<R>],
) -> AddTermVal<R> {
    let ctx = &scene.ctx;
    let w = &scene.weyl.elements[wi];
    let one = Complex::new(R::one(), R::zero());
    let mut product = Complex::new(R::one(), R::zero());
    let mut has_pole = false;
    let mut has_zero = false;
    for a in &scene.rd.positive_roots {
        let root: Vec<i64> = match sign {
            super::orbit::ProjectorSign::Plus => a.iter().map(|x| -x).collect(),
            super::orbit::ProjectorSign::Minus => a.clone(),
        };
        let wa = w.apply(&root);
        let arg = pair_root(&wa, s);
        let num_pole = arg.norm() < r(1e-9);
        let den_pole = (arg - one).norm() < r(1e-9);
        if den_pole {
            has_zero = true;
            continue;
        }
        if num_pole {
            has_pole = true;
            continue;
        }
        let num = ctx.big_psi(arg);
        let den = ctx.big_psi(arg - one);
        if den.norm() < r(1e-13) {
            has_pole = true;
            continue;
        }
        product = product * num / den;
    }
    if has_pole {
        AddTermVal::Pole
    } else if has_zero {
        AddTermVal::Zero
    } else {
        AddTermVal::Finite(product)
    }
}

fn additive_projector_sum<R: Real>(
    scene: &SpectralScene<R>,
    elements: &[usize],
    sign: super::orbit::ProjectorSign,
    f: &AdditiveTestFn<R>,
    s: &[Complex<R>],
) -> Option<Complex<R>> {
    let mut sum = Complex::new(R::zero(), R::zero());
    for &wi in elements {
        match additive_projector_term(scene, wi, sign, s) {
            AddTermVal::Pole => return None,
            AddTermVal::Zero => {}
            AddTermVal::Finite(p) => {
                let w = &scene.weyl.elements[wi];
                sum = sum + p * f(&apply_inverse_cochar(w, s));
            }
        }
    }
    Some(sum)
}

/// Restricted additive projector with a Richardson limit along a generic
/// real direction when terms collide with poles.
pub fn additive_restrict_projector<R: Real>(
    scene: &SpectralScene<R>,
    elements: &[usize],
    sign: super::orbit::ProjectorSign,
    f: &AdditiveTestFn<R>,
    s: &[Complex<R>],
) -> Result<Complex<R>, SpectralError> {
    if let Some(v) = additive_projector_sum(scene, elements, sign, f, s) {
        return Ok(v);
    }
    let dirs = [0.31f64, 0.4741, 0.553];
    let mut samples = Vec::new();
    let mut eps = 0.2f64;
    for _ in 0..9 {
        let moved: Vec<Complex<R>> = s
            .iter()
            .enumerate()
            .map(|(i, z)| *z + Complex::new(r(eps * dirs[i]), R::zero()))
            .collect();
        match additive_projector_sum(scene, elements, sign, f, &moved) {
            Some(v) => samples.push(v),
            None => {
                return Err(SpectralError::Singular(
                    "singular along the additive perturbation ladder".into(),
                ))
            }
        }
        eps /= 2.0;
    }
    Ok(richardson_from_samples(&samples).value)
}

/// Additive orbit density at `s = h/2 + i u . t_phi` for the identity class.
pub fn additive_orbit_density<R: Real>(
    scene: &SpectralScene<R>,
    rec: &crate::lie::OrbitRecord,
    u: &[f64],
) -> Complex<R> {
    let ctx = &scene.ctx;
    let one = Complex::new(R::one(), R::zero());
    let chi = |entry: &crate::lie::WeightEntry| -> Complex<R> {
        let mut v = 0.0f64;
        for (k, w) in entry.t_weight.iter().enumerate() {
            v += u[k] * (*w.numer() as f64 / *w.denom() as f64);
        }
        Complex::new(R::zero(), r(v))
    };
    let qv = |e: Q64| Complex::new(r::<R>(*e.numer() as f64 / *e.denom() as f64), R::zero());
    let mut num = one;
    for (exp, entry) in rec.slice_entries() {
        num = num * ctx.big_psi(qv(exp) + chi(&entry));
    }
    let mut den = one;
    for (&i, entries) in &rec.levels {
        for entry in entries {
            let v = chi(entry);
            if i == 0 {
                den = den * ctx.psi(v);
            } else {
                den = den * ctx.big_psi(qv(Q64::new(i, 2)) + v);
            }
        }
    }
    let mut pref = one;
    let psi_m1 = ctx.big_psi(Complex::new(-R::one(), R::zero()));
    for _ in 0..(2 * scene.rd.rank) {
        pref = pref * psi_m1;
    }
    num / den / pref
}

/// One orbit's additive contribution.
pub fn additive_orbit_contribution<R: Real>(
    scene: &SpectralScene<R>,
    rec: &crate::lie::OrbitRecord,
    f1: &AdditiveTestFn<R>,
    f2: &AdditiveTestFn<R>,
    nodes: usize,
    trunc: f64,
) -> Result<Complex<R>, SpectralError> {
    use super::orbit::ProjectorSign;
    if rec.is_zero_orbit() {
        // the zero-orbit term is the pairing integrand over the imaginary axes
        let shift: Vec<Complex<R>> = vec![Complex::new(R::zero(), R::zero()); scene.rd.rank];
        let spec = ContourSpec::line(shift, nodes, trunc);
        let res = line_integral(|s| additive_eis_integrand(scene, f1, f2, s), &spec)?;
        return Ok(res.value);
    }
    if rec.incomplete_classes {
        return Err(SpectralError::MissingClassData(rec.label.clone()));
    }
    // surviving classes: identity angles only, weights retained
    let weight: f64 = rec
        .classes
        .iter()
        .filter(|c| c.angles.iter().all(|a| a.numer() == &0))
        .map(|c| *c.weight.numer() as f64 / *c.weight.denom() as f64)
        .sum();
    if weight == 0.0 {
        return Ok(Complex::new(R::zero(), R::zero()));
    }
    let half: Vec<Q64> = rec.h_coweight.iter().map(|x| *x / Q64::from_integer(2)).collect();
    let k = rec.t_phi.len();
    let plus = scene.restricted_elements(rec, ProjectorSign::Plus);
    let minus = scene.restricted_elements(rec, ProjectorSign::Minus);
    let point_at = |u: &[f64]| -> Vec<Complex<R>> {
        (0..scene.rd.rank)
            .map(|i| {
                let base = *half[i].numer() as f64 / *half[i].denom() as f64;
                let mut im = 0.0;
                for (j, tau) in rec.t_phi.iter().enumerate() {
                    im += u[j] * (*tau[i].numer() as f64 / *tau[i].denom() as f64);
                }
                Complex::new(r(base), r(im))
            })
            .collect()
    };
    let divisor = crate::lie::centralizer_weyl_order(rec) as f64;
    let c_roots = crate::lie::centralizer_roots(rec);
    let integrand = |u: &[f64]| -> Result<Complex<R>, SpectralError> {
        let s = point_at(u);
        let p1 = additive_restrict_projector(scene, &plus, ProjectorSign::Plus, f1, &s)?;
        let p2 = additive_restrict_projector(scene, &minus, ProjectorSign::Minus, f2, &s)?;
        let dens = additive_orbit_density(scene, rec, u);
        let mut weyl_density = Complex::new(R::one(), R::zero());
        for beta in &c_roots {
            let mut v = 0.0;
            for (j, b) in beta.iter().enumerate() {
                v += u[j] * (*b.numer() as f64 / *b.denom() as f64);
            }
            // (1 - t^beta) degenerates to -(i beta(u)) per root
            weyl_density = weyl_density * Complex::new(R::zero(), -r::<R>(v));
        }
        Ok(p1 * p2 * dens * weyl_density)
    };
    if k == 0 {
        let v = integrand(&[])?;
        return Ok(v * r::<R>(weight / divisor));
    }
    // truncated midpoint grid over u in R^k with measure du/(2 pi) per axis
    let n = nodes.max(8) & !1usize;
    let t_max = trunc;
    let step = 2.0 * t_max / n as f64;
    let mut idx = vec![0usize; k];
    let mut sum = Complex::new(R::zero(), R::zero());
    loop {
        let u: Vec<f64> = (0..k).map(|j| -t_max + step * (idx[j] as f64 + 0.5)).collect();
        sum = sum + integrand(&u)?;
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
    let scale = (step / (2.0 * std::f64::consts::PI)).powi(k as i32);
    Ok(sum * r::<R>(scale * weight / divisor))
}

/// All additive orbit contributions and their total.
pub fn additive_spectral_side<R: Real>(
    scene: &SpectralScene<R>,
    f1: &AdditiveTestFn<R>,
    f2: &AdditiveTestFn<R>,
    nodes: usize,
    trunc: f64,
) -> Result<(Vec<(String, Complex<R>)>, Complex<R>), SpectralError> {
    let mut out = Vec::new();
    let mut total = Complex::new(R::zero(), R::zero());
    for rec in &scene.catalog.orbits {
        let v = additive_orbit_contribution(scene, rec, f1, f2, nodes, trunc)?;
        total = total + v;
        out.push((rec.label.clone(), v));
    }
    Ok((out, total))
}

/// Multiplicative pairing of a bridge genus family against an additive test
/// function, parametrized on the contour `x = q^{sigma + i t}`; dividing by
/// `ln(q)^{2r}` recovers the additive pairing as `q` decreases to 1.
pub fn bridge_pairing_value<R: Real>(
    scene: &SpectralScene<R>,
    f1: &AdditiveTestFn<R>,
    f2: &AdditiveTestFn<R>,
    sigma_scale: f64,
    nodes: usize,
) -> Complex<R> {
    debug_assert_eq!(scene.ctx.mode, Mode::Multiplicative);
    let rd = &scene.rd;
    let weyl = &scene.weyl;
    let ctx = &scene.ctx;
    let q = ctx.q.re;
    let ln_q = q.ln();
    let k = rd.rank;
    let t_max = R::PI() / ln_q;
    let n = nodes.max(8) & !1usize;
    let step = (r::<R>(2.0) * t_max) / r::<R>(n as f64);
    let sigma: Vec<R> = rd
        .rho_check
        .iter()
        .map(|m| r::<R>(sigma_scale) * r::<R>(*m.numer() as f64 / *m.denom() as f64))
        .collect();
    let mut idx = vec![0usize; k];
    let mut sum = Complex::new(R::zero(), R::zero());
    loop {
        let s: Vec<Complex<R>> = (0..k)
            .map(|j| {
                Complex::new(sigma[j], -t_max + step * (r::<R>(idx[j] as f64) + r(0.5)))
            })
            .collect();
        // torus point x = q^s
        let x = crate::laurent::TorusPoint::new(
            s.iter().map(|z| (Complex::new(ln_q, R::zero()) * z).exp()).collect(),
        );
        let ratios: Vec<Complex<R>> = rd
            .positive_roots
            .iter()
            .map(|a| super::pairing::intertwining_ratio(ctx, x.pow(a)))
            .collect();
        let mut v = Complex::new(R::zero(), R::zero());
        for i in 0..weyl.order() {
            let w = &weyl.elements[i];
            let winv = weyl.inverse_of(i);
            let mut p = Complex::new(R::one(), R::zero());
            for ai in rd.inversions(winv) {
                p = p * ratios[ai];
            }
            v = v + f1(&s) * f2(&apply_inverse_cochar(w, &s)) * p;
        }
        sum = sum + v;
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
    let z = ctx.little_z();
    let mut zr = Complex::new(R::one(), R::zero());
    for _ in 0..k {
        zr = zr * z;
    }
    // measure: (ln q / 2 pi) dt per coordinate
    let scale = (step * ln_q / (r::<R>(2.0) * R::PI()) / step).powi(0);
    let _ = scale;
    let measure = (ln_q * step / (r::<R>(2.0) * R::PI())).powi(k as i32);
    sum * measure / zr
}
