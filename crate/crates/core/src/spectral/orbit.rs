//! Per-orbit spectral contributions.
//!
//! Each nilpotent orbit contributes the integral of
//! `(P_+ f1)(P_- f2) * density_e` over the shifted compact part of the
//! reductive centralizer, where `P_+-` are the Weyl-symmetrized products of
//! `Psi(x^a)/Psi(x^a / q)` over negative (resp. positive) roots, and the
//! density is assembled from the orbit's slice and centralizer weight
//! multisets.  Disconnected centralizers are handled class by class; the
//! identity component is integrated over its maximal torus against the Weyl
//! density of the centralizer root system.
//!
//! The zero orbit is special: there the whole expression collapses to the
//! pairing integrand taken over the compact torus, which is both cheaper and
//! numerically smoother; the projector-density form remains available for
//! cross-checks.

use super::pairing::{intertwining_ratio, PairingGrid};
use super::{cpow, q_to_coweight};
use crate::genus::EvalContext;
use crate::laurent::{LaurentPolynomial, TorusPoint};
use crate::lie::{
    build_lie_algebra, centralizer_weyl_order, orbit_catalog, OrbitCatalog,
    OrbitRecord,
};
use crate::quad::{cancellation_limit, QuadError, GOLDEN_OFFSET};
use crate::rootsys::{RootDatum, WeylGroup};
use crate::scalar::{r, unit_phase, Real};
use crate::Q64;
use num_complex::Complex;
use num_traits::Zero;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProjectorSign {
    Plus,
    Minus,
}

#[derive(Debug)]
pub enum SpectralError {
    Quad(QuadError),
    MissingClassData(String),
    Singular(String),
    Lie(crate::lie::LieError),
}

impl fmt::Display for SpectralError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralError::Quad(e) => write!(f, "quadrature failure: {e}"),
            SpectralError::MissingClassData(s) => {
                write!(f, "component class without character data: {s}")
            }
            SpectralError::Singular(s) => write!(f, "unresolved singularity: {s}"),
            SpectralError::Lie(e) => write!(f, "orbit data failure: {e}"),
        }
    }
}

impl std::error::Error for SpectralError {}

impl From<QuadError> for SpectralError {
    fn from(e: QuadError) -> Self {
        SpectralError::Quad(e)
    }
}

/// Everything needed to evaluate both sides for one group form and genus.
pub struct SpectralScene<R: Real> {
    pub rd: RootDatum,
    pub weyl: WeylGroup,
    pub ctx: EvalContext<R>,
    pub catalog: OrbitCatalog,
}

impl<R: Real> SpectralScene<R> {
    pub fn new(rd: RootDatum, ctx: EvalContext<R>) -> Result<Self, SpectralError> {
        let alg = build_lie_algebra(&rd).map_err(SpectralError::Lie)?;
        let catalog = orbit_catalog(&alg).map_err(SpectralError::Lie)?;
        let weyl = rd.weyl_group();
        Ok(SpectralScene { rd, weyl, ctx, catalog })
    }

    pub fn weyl_index_of_product(&self, a: usize, b: usize) -> usize {
        let ma = &self.weyl.elements[a].mat;
        let mb = &self.weyl.elements[b].mat;
        let n = ma.len();
        let mut m = vec![vec![0i64; n]; n];
        for i in 0..n {
            for t in 0..n {
                for j in 0..n {
                    m[i][j] += ma[i][t] * mb[t][j];
                }
            }
        }
        self.weyl.elements.iter().position(|e| e.mat == m).unwrap()
    }

    /// Indices of Weyl elements fixing a coweight.
    pub fn coweight_stabilizer(&self, mu: &[Q64]) -> Vec<usize> {
        (0..self.weyl.order())
            .filter(|&i| {
                let e = &self.weyl.elements[i];
                let inv = self.weyl.inverse_of(i);
                e.apply_cochar_q(inv, mu) == mu.to_vec()
            })
            .collect()
    }

    /// Weyl elements of the restricted projector sum for one sign: the
    /// supported cosets (translated by the longest element for the minus
    /// sign, which uses the opposite Borel subgroup).
    pub fn restricted_elements(&self, rec: &OrbitRecord, sign: ProjectorSign) -> Vec<usize> {
        let stab = self.coweight_stabilizer(&rec.h_coweight);
        let mut out = Vec::new();
        for &rep in &rec.weyl_support {
            let base = match sign {
                ProjectorSign::Plus => rep,
                ProjectorSign::Minus => self.weyl_index_of_product(rep, self.weyl.longest),
            };
            for &u in &stab {
                let idx = self.weyl_index_of_product(u, base);
                if !out.contains(&idx) {
                    out.push(idx);
                }
            }
        }
        out.sort();
        out
    }
}

/// One multiplicative factor `Psi(arg)/Psi(arg/q)` classified by its
/// singularity structure at the evaluation point.
#[derive(Clone, Copy, Debug)]
enum TermVal<R: Real> {
    Finite(Complex<R>),
    Zero,
    Pole,
}

const POLE_GAUGE: f64 = 1e-9;

/// Product over the sign's root side of `Psi(x^{w a}) / Psi(q^{-1} x^{w a})`
/// for a single Weyl element.
fn projector_term<R: Real>(
    rd: &RootDatum,
    ctx: &EvalContext<R>,
    w: &crate::rootsys::WeylElement,
    sign: ProjectorSign,
    x: &TorusPoint<R>,
) -> TermVal<R> {
    let mut product = Complex::new(R::one(), R::zero());
    let mut has_pole = false;
    let mut has_zero = false;
    for a in &rd.positive_roots {
        let root: Vec<i64> = match sign {
            // plus: negative roots; minus: positive roots
            ProjectorSign::Plus => a.iter().map(|x| -x).collect(),
            ProjectorSign::Minus => a.clone(),
        };
        let wa = w.apply(&root);
        let arg_num = x.pow(&wa);
        let arg_den = arg_num / ctx.q;
        let num_pole = ctx.psi_pole_gauge(arg_num) < r(POLE_GAUGE);
        let den_pole = ctx.psi_pole_gauge(arg_den) < r(POLE_GAUGE);
        debug_assert!(!(num_pole && den_pole));
        if den_pole {
            has_zero = true;
            continue;
        }
        if num_pole {
            has_pole = true;
            continue;
        }
        let num = ctx.big_psi(arg_num);
        let den = ctx.big_psi(arg_den);
        if den.norm() < r(1e-13) {
            // a declared zero of psi sits exactly on the evaluation set
            has_pole = true;
            continue;
        }
        product = product * num / den;
    }
    if has_pole {
        TermVal::Pole
    } else if has_zero {
        TermVal::Zero
    } else {
        TermVal::Finite(product)
    }
}

/// Generic perturbation direction, incommensurate with every root of the
/// supported rank <= 2 systems.
const LIMIT_DIRECTION: [f64; 3] = [0.31, 0.4741, 0.553];

fn perturbed_point<R: Real>(x: &TorusPoint<R>, eps: R) -> TorusPoint<R> {
    let coords = x
        .coords
        .iter()
        .enumerate()
        .map(|(i, c)| *c * Complex::new((eps * r(LIMIT_DIRECTION[i])).exp(), R::zero()))
        .collect();
    TorusPoint::new(coords)
}

/// Restricted projector value `sum_{w in elements} term_w(x) f(w^{-1} x)`,
/// with a Richardson limit along a generic direction when individual terms
/// are singular at `x`.
pub fn restrict_projector<R: Real>(
    scene: &SpectralScene<R>,
    elements: &[usize],
    sign: ProjectorSign,
    f: &LaurentPolynomial<R>,
    x: &TorusPoint<R>,
) -> Result<Complex<R>, SpectralError> {
    let direct = projector_sum_direct(scene, elements, sign, f, x);
    match direct {
        Some(v) => Ok(v),
        None => {
            let res = cancellation_limit(
                |eps| {
                    let xe = perturbed_point(x, eps);
                    projector_sum_direct(scene, elements, sign, f, &xe)
                        .unwrap_or_else(|| Complex::new(R::nan(), R::nan()))
                },
                r(0.2),
                9,
            )?;
            Ok(res.value)
        }
    }
}

fn projector_sum_direct<R: Real>(
    scene: &SpectralScene<R>,
    elements: &[usize],
    sign: ProjectorSign,
    f: &LaurentPolynomial<R>,
    x: &TorusPoint<R>,
) -> Option<Complex<R>> {
    let mut sum = Complex::new(R::zero(), R::zero());
    for &wi in elements {
        let w = &scene.weyl.elements[wi];
        match projector_term(&scene.rd, &scene.ctx, w, sign, x) {
            TermVal::Pole => return None,
            TermVal::Zero => {}
            TermVal::Finite(p) => {
                sum = sum + p * f.eval(&x.apply_inverse(w));
            }
        }
    }
    Some(sum)
}

/// Full (unrestricted) Weyl-symmetrized projector at a regular point.
pub fn projector_value<R: Real>(
    scene: &SpectralScene<R>,
    sign: ProjectorSign,
    f: &LaurentPolynomial<R>,
    x: &TorusPoint<R>,
) -> Result<Complex<R>, SpectralError> {
    let all: Vec<usize> = (0..scene.weyl.order()).collect();
    restrict_projector(scene, &all, sign, f, x)
}

/// Langlands' normalized projector, assembled from the intertwining ratios:
/// `(1/|W|) sum_w prod_{a>0, w^{-1}a<0} Z(x^a)/Z(q x^a) f(w^{-1} x)`.
pub fn langlands_projector<R: Real>(
    scene: &SpectralScene<R>,
    f: &LaurentPolynomial<R>,
    x: &TorusPoint<R>,
) -> Complex<R> {
    let rd = &scene.rd;
    let weyl = &scene.weyl;
    let ratios: Vec<Complex<R>> = rd
        .positive_roots
        .iter()
        .map(|a| intertwining_ratio(&scene.ctx, x.pow(a)))
        .collect();
    let mut s = Complex::new(R::zero(), R::zero());
    for i in 0..weyl.order() {
        let w = &weyl.elements[i];
        let winv = weyl.inverse_of(i);
        let mut p = Complex::new(R::one(), R::zero());
        for ai in rd.inversions(winv) {
            p = p * ratios[ai];
        }
        s = s + p * f.eval(&x.apply_inverse(w));
    }
    s / r::<R>(weyl.order() as f64)
}

/// The density of one orbit at an evaluation point described by torus
/// angles (in turns) and a component-class index.
pub fn orbit_density<R: Real>(
    ctx: &EvalContext<R>,
    rec: &OrbitRecord,
    rank: usize,
    phis: &[f64],
    class_idx: usize,
) -> Complex<R> {
    let one = Complex::new(R::one(), R::zero());
    let q = ctx.q;
    let chi = |entry: &crate::lie::WeightEntry| -> Complex<R> {
        let mut turns = 0.0f64;
        for (k, w) in entry.t_weight.iter().enumerate() {
            turns += phis[k] * (*w.numer() as f64 / *w.denom() as f64);
        }
        if !entry.class_angles.is_empty() {
            let a = entry.class_angles[class_idx];
            turns += *a.numer() as f64 / *a.denom() as f64;
        }
        unit_phase(turns)
    };
    let qpow = |e: Q64| -> Complex<R> { cpow(q, r(*e.numer() as f64 / *e.denom() as f64)) };

    let mut num = one;
    for (exp, entry) in rec.slice_entries() {
        num = num * ctx.big_psi(qpow(exp) * chi(&entry));
    }
    let mut den = one;
    for (&i, entries) in &rec.levels {
        for entry in entries {
            let v = chi(entry);
            if i == 0 {
                den = den * ctx.psi(v);
            } else {
                den = den * ctx.big_psi(qpow(Q64::new(i, 2)) * v);
            }
        }
    }
    let mut pref = one;
    let psi_qinv = ctx.big_psi(q.inv());
    for _ in 0..(2 * rank) {
        pref = pref * psi_qinv;
    }
    num / den / pref
}

/// Product of `psi(q^{-1} v)` over the nonzero-root part of the adjoint
/// eigenvalue multiset at an evaluation point: the full multiset minus
/// exactly `rank` unit eigenvalues contributed by the Cartan subalgebra.
/// Its square converts the symmetric density into the product-form density.
pub fn adjoint_scale_product<R: Real>(
    ctx: &EvalContext<R>,
    rec: &OrbitRecord,
    rank: usize,
    phis: &[f64],
    class_idx: usize,
) -> Complex<R> {
    let one = Complex::new(R::one(), R::zero());
    let mut values: Vec<Complex<R>> = Vec::new();
    for (exp, entry) in rec.adjoint_entries() {
        let mut turns = 0.0f64;
        for (k, w) in entry.t_weight.iter().enumerate() {
            turns += phis[k] * (*w.numer() as f64 / *w.denom() as f64);
        }
        if !entry.class_angles.is_empty() {
            let a = entry.class_angles[class_idx];
            turns += *a.numer() as f64 / *a.denom() as f64;
        }
        let v = cpow(ctx.q, r(*exp.numer() as f64 / *exp.denom() as f64))
            * unit_phase::<R>(turns);
        values.push(v);
    }
    // drop the `rank` Cartan units
    let mut dropped = 0usize;
    let mut product = one;
    for v in values {
        if dropped < rank && (v - one).norm() < r(1e-9) {
            dropped += 1;
            continue;
        }
        product = product * ctx.psi(v / ctx.q);
    }
    debug_assert_eq!(dropped, rank, "fewer unit eigenvalues than the rank");
    product
}

/// The same density in its symmetric form, built from the entire part `Z1`
/// and determinant products; used as an independent cross-check.
pub fn orbit_density_symmetric<R: Real>(
    ctx: &EvalContext<R>,
    rec: &OrbitRecord,
    rank: usize,
    phis: &[f64],
    class_idx: usize,
) -> Complex<R> {
    let one = Complex::new(R::one(), R::zero());
    let q = ctx.q;
    let chi = |entry: &crate::lie::WeightEntry| -> Complex<R> {
        let mut turns = 0.0f64;
        for (k, w) in entry.t_weight.iter().enumerate() {
            turns += phis[k] * (*w.numer() as f64 / *w.denom() as f64);
        }
        if !entry.class_angles.is_empty() {
            let a = entry.class_angles[class_idx];
            turns += *a.numer() as f64 / *a.denom() as f64;
        }
        unit_phase(turns)
    };
    let qpow = |e: Q64| -> Complex<R> { cpow(q, r(*e.numer() as f64 / *e.denom() as f64)) };

    // q^{-(dim g + dim g^e)/2} (1-q)^{2r} / Z1(adjoint) * det ratios
    let dim_g = rec.dim_g() as i64;
    let dim_ge = rec.c_e_dim as i64;
    let mut v = cpow(q, r(-((dim_g + dim_ge) as f64) / 2.0));
    let one_minus_q = one - q;
    for _ in 0..(2 * rank) {
        v = v * one_minus_q;
    }
    // Z1 over the full adjoint multiset
    let mut z1 = one;
    for (exp, entry) in rec.adjoint_entries() {
        z1 = z1 * ctx.z1_of(qpow(exp) * chi(&entry));
    }
    v = v / z1;
    // determinant products over the multiplicity spaces
    let mut num = one;
    let mut den = one;
    for (&i, entries) in &rec.levels {
        for entry in entries {
            let c = chi(entry);
            if i > 0 {
                num = num * (one - qpow(Q64::new(-i, 2)) * c);
            }
            den = den * (one - qpow(Q64::new(-i - 2, 2)) * c);
        }
    }
    v * num / den
}

/// A single prepared evaluation item of an orbit integral.
struct EvalItem<R: Real> {
    weight: R,
    coarse: bool,
    x: TorusPoint<R>,
    density: Complex<R>,
    psi_e: Complex<R>,
    plus_terms: Vec<TermVal<R>>,
    minus_terms: Vec<TermVal<R>>,
    /// Richardson ladder for items where some projector term is singular:
    /// per epsilon level, the two points `x e^{+-eps v}` with the finite
    /// term values of both projector signs; averaging the pair cancels all
    /// odd powers, so the extrapolation runs in eps^2
    ladder: Option<Vec<LadderLevel<R>>>,
}

/// Prepared integration engine for one orbit.
pub struct OrbitEngine<R: Real> {
    pub label: String,
    items: Vec<EvalItem<R>>,
    plus_elements: Vec<usize>,
    minus_elements: Vec<usize>,
    /// zero-orbit shortcut: compact-torus pairing grid
    zero_grid: Option<PairingGrid<R>>,
    pub n_nodes: usize,
}

const LADDER_LEVELS: usize = 7;
const LADDER_EPS0: f64 = 0.15;

struct LadderLevel<R: Real> {
    x_pos: TorusPoint<R>,
    plus_pos: Vec<TermVal<R>>,
    minus_pos: Vec<TermVal<R>>,
    x_neg: TorusPoint<R>,
    plus_neg: Vec<TermVal<R>>,
    minus_neg: Vec<TermVal<R>>,
}

impl<R: Real> OrbitEngine<R> {
    pub fn new(
        scene: &SpectralScene<R>,
        rec: &OrbitRecord,
        nodes: usize,
    ) -> Result<Self, SpectralError> {
        Self::new_with(scene, rec, nodes, false)
    }

    /// `force_projector_form` bypasses the zero-orbit shortcut so the
    /// general projector-density machinery can be exercised (and so the
    /// absolute-value form is available) on the zero orbit as well.
    pub fn new_with(
        scene: &SpectralScene<R>,
        rec: &OrbitRecord,
        nodes: usize,
        force_projector_form: bool,
    ) -> Result<Self, SpectralError> {
        if rec.incomplete_classes {
            return Err(SpectralError::MissingClassData(format!(
                "orbit {} has classes without character data",
                rec.label
            )));
        }
        let rd = &scene.rd;
        let ctx = &scene.ctx;
        if rec.is_zero_orbit() && !force_projector_form {
            // compact-torus pairing grid, with an offset scan to keep nodes
            // away from the walls where individual Weyl terms blow up
            let shift: Vec<Complex<R>> =
                vec![Complex::new(R::one(), R::zero()); rd.rank];
            let mut offset = GOLDEN_OFFSET;
            let mut grid = None;
            for _ in 0..8 {
                let g = PairingGrid::new_unchecked(rd, ctx, &shift, nodes, offset);
                if g.min_wall_gauge() > r(1e-5) {
                    grid = Some(g);
                    break;
                }
                offset += 0.0137;
            }
            let grid = grid.ok_or_else(|| {
                SpectralError::Singular("could not place compact nodes off the walls".into())
            })?;
            let n = grid.n_used;
            return Ok(OrbitEngine {
                label: rec.label.clone(),
                items: Vec::new(),
                plus_elements: Vec::new(),
                minus_elements: Vec::new(),
                zero_grid: Some(grid),
                n_nodes: n,
            });
        }

        let plus_elements = scene.restricted_elements(rec, ProjectorSign::Plus);
        let minus_elements = scene.restricted_elements(rec, ProjectorSign::Minus);
        let k = rec.t_phi.len();
        let divisor = centralizer_weyl_order(rec) as f64;
        // base point q^{h/2}
        let half: Vec<Q64> = rec.h_coweight.iter().map(|x| *x / Q64::from_integer(2)).collect();
        let qh = q_to_coweight(ctx.q, &half);

        let n = if k == 0 { 1 } else { nodes.max(8) & !1usize };
        let total_grid = (n as f64).powi(k as i32);
        let mut items = Vec::new();
        for (ci, class) in rec.classes.iter().enumerate() {
            // grid over the torus of the identity component
            let mut idx = vec![0usize; k];
            loop {
                let phis: Vec<f64> = (0..k)
                    .map(|j| {
                        (idx[j] as f64) / (n as f64)
                            + GOLDEN_OFFSET * ((j as f64 + 2.0).sqrt())
                    })
                    .collect();
                // evaluation point x = q^{h/2} * t * class representative
                let mut coords = Vec::with_capacity(rd.rank);
                for i in 0..rd.rank {
                    let mut turns = *class.angles[i].numer() as f64
                        / *class.angles[i].denom() as f64;
                    for (j, tau) in rec.t_phi.iter().enumerate() {
                        turns += phis[j] * (*tau[i].numer() as f64 / *tau[i].denom() as f64);
                    }
                    coords.push(qh.coords[i] * unit_phase::<R>(turns));
                }
                let x = TorusPoint::new(coords);
                let density = if k == 0 {
                    Complex::new(R::one(), R::zero())
                } else {
                    let mut d = Complex::new(R::one(), R::zero());
                    for beta_entry in rec.levels.get(&0).map(|v| v.as_slice()).unwrap_or(&[]) {
                        if beta_entry.t_weight.iter().all(|x| x.is_zero()) {
                            continue;
                        }
                        let mut turns = 0.0;
                        for (j, w) in beta_entry.t_weight.iter().enumerate() {
                            turns += phis[j] * (*w.numer() as f64 / *w.denom() as f64);
                        }
                        if !beta_entry.class_angles.is_empty() {
                            let a = beta_entry.class_angles[ci];
                            turns += *a.numer() as f64 / *a.denom() as f64;
                        }
                        d = d * (Complex::new(R::one(), R::zero()) - unit_phase::<R>(turns));
                    }
                    d
                };
                let psi_e = orbit_density(ctx, rec, rd.rank, &phis, ci);
                let w_class = *class.weight.numer() as f64 / *class.weight.denom() as f64;
                let weight = r::<R>(w_class / total_grid / divisor);
                let plus_terms: Vec<TermVal<R>> = plus_elements
                    .iter()
                    .map(|&wi| {
                        projector_term(rd, ctx, &scene.weyl.elements[wi], ProjectorSign::Plus, &x)
                    })
                    .collect();
                let minus_terms: Vec<TermVal<R>> = minus_elements
                    .iter()
                    .map(|&wi| {
                        projector_term(rd, ctx, &scene.weyl.elements[wi], ProjectorSign::Minus, &x)
                    })
                    .collect();
                let needs_ladder = plus_terms.iter().chain(&minus_terms).any(|t| matches!(t, TermVal::Pole));
                let ladder = if needs_ladder {
                    let mut lad = Vec::with_capacity(LADDER_LEVELS);
                    let mut eps = r::<R>(LADDER_EPS0);
                    for _ in 0..LADDER_LEVELS {
                        let mut level = Vec::new();
                        for sgn in [eps, -eps] {
                            let xe = perturbed_point(&x, sgn);
                            let pt: Vec<TermVal<R>> = plus_elements
                                .iter()
                                .map(|&wi| {
                                    projector_term(
                                        rd,
                                        ctx,
                                        &scene.weyl.elements[wi],
                                        ProjectorSign::Plus,
                                        &xe,
                                    )
                                })
                                .collect();
                            let mt: Vec<TermVal<R>> = minus_elements
                                .iter()
                                .map(|&wi| {
                                    projector_term(
                                        rd,
                                        ctx,
                                        &scene.weyl.elements[wi],
                                        ProjectorSign::Minus,
                                        &xe,
                                    )
                                })
                                .collect();
                            if pt.iter().chain(&mt).any(|t| matches!(t, TermVal::Pole)) {
                                return Err(SpectralError::Singular(format!(
                                    "orbit {}: singular along the perturbation ladder",
                                    rec.label
                                )));
                            }
                            level.push((xe, pt, mt));
                        }
                        let (x_neg, plus_neg, minus_neg) = level.pop().unwrap();
                        let (x_pos, plus_pos, minus_pos) = level.pop().unwrap();
                        lad.push(LadderLevel {
                            x_pos,
                            plus_pos,
                            minus_pos,
                            x_neg,
                            plus_neg,
                            minus_neg,
                        });
                        eps = eps / r(2.0);
                    }
                    Some(lad)
                } else {
                    None
                };
                let coarse = idx.iter().all(|&m| m % 2 == 0);
                items.push(EvalItem {
                    weight,
                    coarse,
                    x,
                    density,
                    psi_e,
                    plus_terms,
                    minus_terms,
                    ladder,
                });
                if k == 0 {
                    break;
                }
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
        }
        Ok(OrbitEngine {
            label: rec.label.clone(),
            items,
            plus_elements,
            minus_elements,
            zero_grid: None,
            n_nodes: n,
        })
    }

    /// Contribution of this orbit for one pair of test functions.
    pub fn contribution(
        &self,
        scene: &SpectralScene<R>,
        f1: &LaurentPolynomial<R>,
        f2: &LaurentPolynomial<R>,
    ) -> Result<OrbitContribution<R>, SpectralError> {
        if let Some(grid) = &self.zero_grid {
            let res = grid.evaluate(f1, f2);
            return Ok(OrbitContribution {
                label: self.label.clone(),
                value: res.value,
                error_estimate: res.error_estimate,
                abs_form_value: None,
            });
        }
        // Weyl translates, computed once
        let tf1: Vec<LaurentPolynomial<R>> = self
            .plus_elements
            .iter()
            .map(|&wi| f1.weyl_image(&scene.weyl.elements[wi]))
            .collect();
        let tf2: Vec<LaurentPolynomial<R>> = self
            .minus_elements
            .iter()
            .map(|&wi| f2.weyl_image(&scene.weyl.elements[wi]))
            .collect();
        let eval_sum = |terms: &[TermVal<R>],
                        tfs: &[LaurentPolynomial<R>],
                        x: &TorusPoint<R>|
         -> Option<Complex<R>> {
            let mut s = Complex::new(R::zero(), R::zero());
            for (t, tf) in terms.iter().zip(tfs) {
                match t {
                    TermVal::Pole => return None,
                    TermVal::Zero => {}
                    TermVal::Finite(p) => s = s + *p * tf.eval(x),
                }
            }
            Some(s)
        };
        let mut total = Complex::new(R::zero(), R::zero());
        let mut total_coarse = Complex::new(R::zero(), R::zero());
        let mut weight_sum = R::zero();
        let mut weight_coarse = R::zero();
        for item in &self.items {
            let (p_plus, p_minus) = match &item.ladder {
                None => {
                    let p = eval_sum(&item.plus_terms, &tf1, &item.x).ok_or_else(|| {
                        SpectralError::Singular("unflagged singular item".into())
                    })?;
                    let m = eval_sum(&item.minus_terms, &tf2, &item.x).ok_or_else(|| {
                        SpectralError::Singular("unflagged singular item".into())
                    })?;
                    (p, m)
                }
                Some(lad) => {
                    let plus = extrapolate_ladder(lad, &tf1, true)?;
                    let minus = extrapolate_ladder(lad, &tf2, false)?;
                    (plus, minus)
                }
            };
            let v = p_plus * p_minus * item.psi_e * item.density
                * Complex::new(item.weight, R::zero());
            total = total + v;
            weight_sum = weight_sum + item.weight;
            if item.coarse {
                total_coarse = total_coarse + v;
                weight_coarse = weight_coarse + item.weight;
            }
        }
        let error = if weight_coarse > R::zero() {
            (total - total_coarse * (weight_sum / weight_coarse)).norm()
        } else {
            R::zero()
        };
        Ok(OrbitContribution {
            label: self.label.clone(),
            value: total,
            error_estimate: error,
            abs_form_value: None,
        })
    }

    /// The absolute-value form `int |P_+ f|^2 |density|`, defined for
    /// Hermitian pairs; only meaningful under the positivity hypotheses.
    pub fn abs_form(
        &self,
        scene: &SpectralScene<R>,
        f: &LaurentPolynomial<R>,
    ) -> Result<Complex<R>, SpectralError> {
        if self.zero_grid.is_some() {
            return Err(SpectralError::Singular(
                "absolute-value form needs the projector-form engine".into(),
            ));
        }
        let tf1: Vec<LaurentPolynomial<R>> = self
            .plus_elements
            .iter()
            .map(|&wi| f.weyl_image(&scene.weyl.elements[wi]))
            .collect();
        let mut total = Complex::new(R::zero(), R::zero());
        for item in &self.items {
            let p_plus = match &item.ladder {
                None => {
                    let mut s = Complex::new(R::zero(), R::zero());
                    for (t, tf) in item.plus_terms.iter().zip(&tf1) {
                        match t {
                            TermVal::Pole => {
                                return Err(SpectralError::Singular("unflagged".into()))
                            }
                            TermVal::Zero => {}
                            TermVal::Finite(p) => s = s + *p * tf.eval(&item.x),
                        }
                    }
                    s
                }
                Some(lad) => extrapolate_ladder(lad, &tf1, true)?,
            };
            let dens_abs = (item.psi_e * item.density).norm();
            let v = Complex::new(p_plus.norm_sqr() * dens_abs * item.weight, R::zero());
            total = total + v;
        }
        Ok(total)
    }
}

fn extrapolate_ladder<R: Real>(
    ladder: &[LadderLevel<R>],
    tfs: &[LaurentPolynomial<R>],
    plus: bool,
) -> Result<Complex<R>, SpectralError> {
    let eval = |x: &TorusPoint<R>, terms: &[TermVal<R>]| {
        let mut s = Complex::new(R::zero(), R::zero());
        for (t, tf) in terms.iter().zip(tfs) {
            if let TermVal::Finite(p) = t {
                s = s + *p * tf.eval(x);
            }
        }
        s
    };
    let samples: Vec<Complex<R>> = ladder
        .iter()
        .map(|lv| {
            let (tp, tn) = if plus {
                (&lv.plus_pos, &lv.plus_neg)
            } else {
                (&lv.minus_pos, &lv.minus_neg)
            };
            (eval(&lv.x_pos, tp) + eval(&lv.x_neg, tn)) / r::<R>(2.0)
        })
        .collect();
    Ok(crate::quad::richardson_from_samples_with_ratio(&samples, 4.0).value)
}

/// Final per-orbit result.
#[derive(Clone, Debug)]
pub struct OrbitContribution<R: Real> {
    pub label: String,
    pub value: Complex<R>,
    pub error_estimate: R,
    pub abs_form_value: Option<Complex<R>>,
}

/// Contribution of one orbit (engine built on the fly).
pub fn orbit_contribution<R: Real>(
    scene: &SpectralScene<R>,
    rec: &OrbitRecord,
    f1: &LaurentPolynomial<R>,
    f2: &LaurentPolynomial<R>,
    nodes: usize,
) -> Result<OrbitContribution<R>, SpectralError> {
    OrbitEngine::new(scene, rec, nodes)?.contribution(scene, f1, f2)
}

/// All orbit contributions and their total.
pub fn spectral_sum<R: Real>(
    scene: &SpectralScene<R>,
    f1: &LaurentPolynomial<R>,
    f2: &LaurentPolynomial<R>,
    nodes: usize,
) -> Result<(Vec<OrbitContribution<R>>, Complex<R>), SpectralError> {
    let mut out = Vec::new();
    let mut total = Complex::new(R::zero(), R::zero());
    for rec in &scene.catalog.orbits {
        let c = orbit_contribution(scene, rec, f1, f2, nodes)?;
        total = total + c.value;
        out.push(c);
    }
    Ok((out, total))
}

/// Hermitian norm `|f|^2 = (f, f*)-pairing` via the spectral sum; each
/// contribution also carries the absolute-value form for comparison.
pub fn hermitian_norm<R: Real>(
    scene: &SpectralScene<R>,
    f: &LaurentPolynomial<R>,
    nodes: usize,
) -> Result<(Vec<OrbitContribution<R>>, Complex<R>), SpectralError> {
    let fstar = f.dual_star();
    let mut out = Vec::new();
    let mut total = Complex::new(R::zero(), R::zero());
    for rec in &scene.catalog.orbits {
        let engine = OrbitEngine::new(scene, rec, nodes)?;
        let mut c = engine.contribution(scene, f, &fstar)?;
        let abs_engine = if rec.is_zero_orbit() {
            OrbitEngine::new_with(scene, rec, nodes, true)?
        } else {
            engine
        };
        c.abs_form_value = Some(abs_engine.abs_form(scene, f)?);
        total = total + c.value;
        out.push(c);
    }
    Ok((out, total))
}

/// Closed form of the regular-orbit contribution:
/// `(1/(|C| prod Z(q^{m_i + 1}))) sum_{z in C} f1(q^{rho_check} z) f2(q^{-rho_check} z)`.
pub fn regular_orbit_closed_form<R: Real>(
    scene: &SpectralScene<R>,
    f1: &LaurentPolynomial<R>,
    f2: &LaurentPolynomial<R>,
) -> Complex<R> {
    let rd = &scene.rd;
    let ctx = &scene.ctx;
    let center = rd.center();
    let mut zprod = Complex::new(R::one(), R::zero());
    for &m in &rd.exponents {
        zprod = zprod * ctx.z_of(cpow(ctx.q, r((m + 1) as f64)));
    }
    let qrho = q_to_coweight(ctx.q, &rd.rho_check);
    let neg_rho: Vec<Q64> = rd.rho_check.iter().map(|x| -*x).collect();
    let qrho_neg = q_to_coweight(ctx.q, &neg_rho);
    let mut s = Complex::new(R::zero(), R::zero());
    for z in &center.elements {
        let phase: Vec<Complex<R>> = z
            .iter()
            .map(|a| unit_phase(*a.numer() as f64 / *a.denom() as f64))
            .collect();
        let zp = TorusPoint::new(phase);
        s = s + f1.eval(&qrho.mul(&zp)) * f2.eval(&qrho_neg.mul(&zp));
    }
    s / r::<R>(center.order() as f64) / zprod
}

/// The reduced zero-orbit form used for cross-checks: the Langlands
/// projector density integrated over the compact torus,
/// `|W| / (psi(1) Psi(1/q))^r * int f1 (P_Langl f2) dHaar`.
pub fn zero_orbit_reduced_form<R: Real>(
    scene: &SpectralScene<R>,
    f1: &LaurentPolynomial<R>,
    f2: &LaurentPolynomial<R>,
    nodes: usize,
) -> Result<Complex<R>, SpectralError> {
    let rd = &scene.rd;
    let ctx = &scene.ctx;
    let shift: Vec<Complex<R>> = vec![Complex::new(R::one(), R::zero()); rd.rank];
    let offset = GOLDEN_OFFSET + 0.0071;
    let spec = crate::quad::ContourSpec { shift, nodes, offset, trunc_height: 0.0 };
    let res = crate::quad::torus_integral(
        |coords| {
            let x = TorusPoint::new(coords.to_vec());
            f1.eval(&x) * langlands_projector(scene, f2, &x)
        },
        &spec,
    )?;
    let z = ctx.genus.eval(Complex::new(R::one(), R::zero())) * ctx.big_psi(ctx.q.inv());
    let mut zr = Complex::new(R::one(), R::zero());
    for _ in 0..rd.rank {
        zr = zr * z;
    }
    Ok(res.value * r::<R>(scene.weyl.order() as f64) / zr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genus::Genus;
    use crate::rootsys::{build_root_system, GroupType, Lattice};

    type C = Complex<f64>;

    fn scene_a1(q: f64) -> SpectralScene<f64> {
        let rd = build_root_system(GroupType::A1, Lattice::SimplyConnected).unwrap();
        let ctx = EvalContext::multiplicative(q, Genus::constant_one());
        SpectralScene::new(rd, ctx).unwrap()
    }

    #[test]
    fn zero_orbit_value_in_rank_one() {
        // trivial genus, q = 2, f = 1: exact value -3/2 (hand residue
        // computation of the compact-torus integral)
        let scene = scene_a1(2.0);
        let zero = &scene.catalog.orbits[0];
        let f = LaurentPolynomial::one(1);
        let c = orbit_contribution(&scene, zero, &f, &f, 192).unwrap();
        assert!(
            (c.value - C::new(-1.5, 0.0)).norm() < 1e-10,
            "zero orbit {}",
            c.value
        );
        // matches the reduced Langlands-projector form
        let red = zero_orbit_reduced_form(&scene, &f, &f, 192).unwrap();
        assert!((red - C::new(-1.5, 0.0)).norm() < 1e-10, "reduced {red}");
    }

    #[test]
    fn regular_orbit_value_in_rank_one() {
        // trivial genus, q = 2, f = 1: exact value -3/2 = 1/Z(4)
        let scene = scene_a1(2.0);
        let reg = scene.catalog.orbits.iter().find(|o| o.label == "regular").unwrap();
        let f = LaurentPolynomial::one(1);
        let c = orbit_contribution(&scene, reg, &f, &f, 8).unwrap();
        assert!(
            (c.value - C::new(-1.5, 0.0)).norm() < 1e-12,
            "regular orbit {}",
            c.value
        );
        let closed = regular_orbit_closed_form(&scene, &f, &f);
        assert!((c.value - closed).norm() < 1e-12);
    }

    #[test]
    fn rank_one_total_matches_pairing() {
        let scene = scene_a1(2.0);
        let f = LaurentPolynomial::one(1);
        let (_, total) = spectral_sum(&scene, &f, &f, 192).unwrap();
        assert!((total - C::new(-3.0, 0.0)).norm() < 1e-10, "total {total}");
    }

    #[test]
    fn projector_restriction_matches_full_sum_on_regular_orbit() {
        let scene = scene_a1(2.0);
        let reg = scene.catalog.orbits.iter().find(|o| o.label == "regular").unwrap();
        let f = LaurentPolynomial::monomial(vec![1], C::new(1.0, 0.3));
        // evaluation point q^{h/2} (identity class)
        let half: Vec<crate::Q64> =
            reg.h_coweight.iter().map(|x| *x / crate::Q64::from_integer(2)).collect();
        let x = q_to_coweight(scene.ctx.q, &half);
        let restricted = scene.restricted_elements(reg, ProjectorSign::Plus);
        let a = restrict_projector(&scene, &restricted, ProjectorSign::Plus, &f, &x).unwrap();
        let b = projector_value(&scene, ProjectorSign::Plus, &f, &x).unwrap();
        assert!((a - b).norm() < 1e-10 * (1.0 + b.norm()), "{a} vs {b}");
        // the closed factor: Psi(q^{-1})/Psi(q^{-2}) * f(q^{1/2}-point)
        let factor = scene.ctx.big_psi(C::new(0.5, 0.0)) / scene.ctx.big_psi(C::new(0.25, 0.0));
        let expect = factor * f.eval(&x);
        assert!((a - expect).norm() < 1e-12 * (1.0 + expect.norm()));
    }

    #[test]
    fn langlands_projector_is_idempotent() {
        let rd = build_root_system(GroupType::A2, Lattice::SimplyConnected).unwrap();
        let ctx = EvalContext::multiplicative(1.5, Genus::one_minus_c_over_x(0.8 / 1.5 + 0.2));
        let scene = SpectralScene::new(rd, ctx).unwrap();
        let f = LaurentPolynomial::monomial(vec![1, -1], C::new(0.7, 0.2));
        let x = TorusPoint::new(vec![C::new(1.31, 0.17), C::new(0.83, -0.44)]);
        let once = langlands_projector(&scene, &f, &x);
        // apply the projector a second time to the projected function,
        // evaluated as a closure
        let weyl = &scene.weyl;
        let pf = |y: &TorusPoint<f64>| langlands_projector(&scene, &f, y);
        let ratios: Vec<C> = scene
            .rd
            .positive_roots
            .iter()
            .map(|a| intertwining_ratio(&scene.ctx, x.pow(a)))
            .collect();
        let mut twice = C::new(0.0, 0.0);
        for i in 0..weyl.order() {
            let w = &weyl.elements[i];
            let winv = weyl.inverse_of(i);
            let mut p = C::new(1.0, 0.0);
            for ai in scene.rd.inversions(winv) {
                p = p * ratios[ai];
            }
            twice = twice + p * pf(&x.apply_inverse(w));
        }
        twice = twice / weyl.order() as f64;
        assert!((twice - once).norm() < 1e-10 * (1.0 + once.norm()), "{twice} vs {once}");
    }

    #[test]
    fn projector_output_is_weyl_invariant() {
        let rd = build_root_system(GroupType::A2, Lattice::Adjoint).unwrap();
        let ctx = EvalContext::multiplicative(1.5, Genus::one_minus_c_over_x(0.7));
        let scene = SpectralScene::new(rd, ctx).unwrap();
        let f = LaurentPolynomial::monomial(vec![1, 1], C::new(1.0, 0.0));
        let x = TorusPoint::new(vec![C::new(1.21, 0.33), C::new(0.68, -0.29)]);
        let base = projector_value(&scene, ProjectorSign::Plus, &f, &x).unwrap();
        for e in &scene.weyl.elements {
            let moved = x.apply_inverse(e);
            let v = projector_value(&scene, ProjectorSign::Plus, &f, &moved).unwrap();
            assert!((v - base).norm() < 1e-10 * (1.0 + base.norm()));
        }
    }
}
