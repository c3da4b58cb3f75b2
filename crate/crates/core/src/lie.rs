//! Exact Chevalley-basis model of the Lie algebra and the brute-force orbit
//! oracle.
//!
//! The algebra is built directly from the root datum: basis `h_1..h_r`
//! (simple coroots) followed by one vector `e_b` per root `b`.  Structure
//! constants between root vectors are `N_{a,b} = +-(p+1)` with `p` the
//! largest `k` such that `b - k a` is a root; the signs on the special pairs
//! of positive roots are found by a small search and certified by checking
//! the Jacobi identity exactly on every basis triple.  Everything downstream
//! (sl2 triples, centralizers, gradings, multiplicity spaces, slices) is
//! exact rational linear algebra on the adjoint matrices.

use crate::ratlin::{self, ri, rz, Matr, Vecr};
use crate::rootsys::{
    normalize_angle, pair, pair_q, GroupType, Lattice, LatVec, RootDatum,
};
use crate::{Q64, Rat};
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone)]
pub enum LieError {
    NotNilpotent,
    NoTriple(String),
    Internal(String),
}

impl fmt::Display for LieError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LieError::NotNilpotent => write!(f, "element is not nilpotent"),
            LieError::NoTriple(s) => write!(f, "failed to complete sl2 triple: {s}"),
            LieError::Internal(s) => write!(f, "internal error: {s}"),
        }
    }
}

impl std::error::Error for LieError {}

/// The Lie algebra in a Chevalley basis with exact structure constants.
#[derive(Clone)]
pub struct LieAlgebra {
    pub rd: RootDatum,
    /// all roots, positives first then negatives (index-aligned with positives)
    pub roots: Vec<LatVec>,
    pub dim: usize,
    /// bracket[i][j] = coordinates of [x_i, x_j]
    bracket: Vec<Vec<Vecr>>,
}

impl LieAlgebra {
    pub fn rank(&self) -> usize {
        self.rd.rank
    }

    /// Basis index of the root vector for `root`.
    pub fn root_index(&self, root: &[i64]) -> Option<usize> {
        self.roots.iter().position(|r| r == root).map(|i| self.rank() + i)
    }

    pub fn root_of_basis(&self, idx: usize) -> Option<&LatVec> {
        idx.checked_sub(self.rank()).and_then(|i| self.roots.get(i))
    }

    pub fn zero(&self) -> Vecr {
        vec![rz(); self.dim]
    }

    pub fn basis_vector(&self, i: usize) -> Vecr {
        let mut v = self.zero();
        v[i] = Rat::one();
        v
    }

    /// Cartan element with prescribed cocharacter coordinates.
    ///
    /// The Cartan basis vectors are the simple coroots, so an element with
    /// dual-basis coordinates `mu` has Cartan coefficients `c` solving
    /// `sum_i c_i alpha_i^vee = mu`.
    pub fn cartan_from_coweight(&self, mu: &[Q64]) -> Vecr {
        let r = self.rank();
        let cols: Vec<Vecr> = (0..r)
            .map(|i| {
                self.rd.simple_coroots[i]
                    .iter()
                    .map(|&x| ri(x))
                    .collect()
            })
            .collect();
        let m = Matr::from_cols(cols);
        let target: Vecr = mu.iter().map(|x| Rat::new((*x.numer()).into(), (*x.denom()).into())).collect();
        let c = m.solve(&target).expect("coweight in coroot span");
        let mut v = self.zero();
        v[..r].clone_from_slice(&c);
        v
    }

    /// Cocharacter coordinates of a Cartan element (errors if not Cartan).
    pub fn coweight_of_cartan(&self, v: &[Rat]) -> Result<Vec<Rat>, LieError> {
        let r = self.rank();
        if v[r..].iter().any(|x| !x.is_zero()) {
            return Err(LieError::Internal("element not in the Cartan subalgebra".into()));
        }
        let n = self.rd.rank;
        let mut mu = vec![rz(); n];
        for i in 0..r {
            for j in 0..n {
                mu[j] += &v[i] * ri(self.rd.simple_coroots[i][j]);
            }
        }
        Ok(mu)
    }

    pub fn bracket(&self, a: &[Rat], b: &[Rat]) -> Vecr {
        let mut out = self.zero();
        for i in 0..self.dim {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if b[j].is_zero() {
                    continue;
                }
                let coef = &a[i] * &b[j];
                for (k, c) in self.bracket[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &coef * c;
                    }
                }
            }
        }
        out
    }

    /// Matrix of `ad(v)` in the Chevalley basis.
    pub fn ad(&self, v: &[Rat]) -> Matr {
        let mut m = Matr::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.bracket(v, &self.basis_vector(j));
            for i in 0..self.dim {
                m.a[i][j] = col[i].clone();
            }
        }
        m
    }

    pub fn is_nilpotent(&self, v: &[Rat]) -> bool {
        let ad = self.ad(v);
        let mut p = ad.clone();
        for _ in 0..self.dim {
            if p.is_zero() {
                return true;
            }
            p = p.mul(&ad);
        }
        p.is_zero()
    }

    /// Exact Jacobi-identity check over all basis triples.
    pub fn verify_jacobi(&self) -> bool {
        for i in 0..self.dim {
            let xi = self.basis_vector(i);
            for j in (i + 1)..self.dim {
                let xj = self.basis_vector(j);
                for k in (j + 1)..self.dim {
                    let xk = self.basis_vector(k);
                    let t1 = self.bracket(&xi, &self.bracket(&xj, &xk));
                    let t2 = self.bracket(&xj, &self.bracket(&xk, &xi));
                    let t3 = self.bracket(&xk, &self.bracket(&xi, &xj));
                    let sum = ratlin::add(&ratlin::add(&t1, &t2), &t3);
                    if !ratlin::is_zero_vec(&sum) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Representative of a simple reflection acting on the algebra:
    /// `exp(ad e_i) exp(-ad f_i) exp(ad e_i)`, an exact rational matrix.
    pub fn simple_reflection_action(&self, i: usize) -> Matr {
        let e = self.basis_vector(self.root_index(&self.rd.simple_roots[i]).unwrap());
        let neg: LatVec = self.rd.simple_roots[i].iter().map(|x| -x).collect();
        let f = self.basis_vector(self.root_index(&neg).unwrap());
        let exp_ad = |v: &Vecr| -> Matr {
            let ad = self.ad(v);
            let mut sum = Matr::identity(self.dim);
            let mut term = Matr::identity(self.dim);
            let mut fact = Rat::one();
            for k in 1..=self.dim {
                term = term.mul(&ad);
                fact = fact * ri(k as i64);
                if term.is_zero() {
                    break;
                }
                let mut scaled = term.clone();
                for row in scaled.a.iter_mut() {
                    for x in row.iter_mut() {
                        *x = &*x / &fact;
                    }
                }
                for r in 0..self.dim {
                    for c in 0..self.dim {
                        let t = scaled.a[r][c].clone();
                        sum.a[r][c] += t;
                    }
                }
            }
            sum
        };
        let nf: Vecr = f.iter().map(|x| -x.clone()).collect();
        exp_ad(&e).mul(&exp_ad(&nf)).mul(&exp_ad(&e))
    }

    /// Action matrix for a full Weyl word.
    pub fn weyl_action(&self, word: &[usize]) -> Matr {
        let mut m = Matr::identity(self.dim);
        for &i in word {
            m = m.mul(&self.simple_reflection_action(i));
        }
        m
    }
}

/// Build the Chevalley-basis Lie algebra for a root datum.
pub fn build_lie_algebra(rd: &RootDatum) -> Result<LieAlgebra, LieError> {
    let rank = rd.rank;
    let mut roots: Vec<LatVec> = rd.positive_roots.clone();
    roots.extend(rd.positive_roots.iter().map(|r| r.iter().map(|x| -x).collect::<LatVec>()));
    let dim = rank + roots.len();
    let root_pos = |r: &LatVec| -> Option<usize> { roots.iter().position(|x| x == r) };
    let is_root = |r: &LatVec| -> bool { root_pos(r).is_some() };
    let norm = |r: &LatVec| -> Q64 {
        let g = &rd.gram;
        let mut s = Q64::zero();
        for i in 0..rank {
            for j in 0..rank {
                s += g[i][j] * Q64::from_integer(r[i]) * Q64::from_integer(r[j]);
            }
        }
        s
    };

    // p(a, b): largest k >= 0 with b - k a a root
    let string_down = |a: &LatVec, b: &LatVec| -> i64 {
        let mut k = 1i64;
        loop {
            let probe: LatVec = b.iter().zip(a).map(|(x, y)| x - k * y).collect();
            if is_root(&probe) {
                k += 1;
            } else {
                return k - 1;
            }
        }
    };

    // special pairs among positive roots (ordered by the stored order)
    let np = rd.positive_roots.len();
    let mut special: Vec<(usize, usize)> = Vec::new();
    for i in 0..np {
        for j in (i + 1)..np {
            let sum: LatVec = rd.positive_roots[i]
                .iter()
                .zip(&rd.positive_roots[j])
                .map(|(a, b)| a + b)
                .collect();
            if is_root(&sum) {
                special.push((i, j));
            }
        }
    }

    let n_special = special.len();
    assert!(n_special <= 12, "sign search space unexpectedly large");

    for mask in 0u32..(1u32 << n_special) {
        // structure constants for every ordered pair of roots with root sum
        let mut nconst: BTreeMap<(usize, usize), Rat> = BTreeMap::new();
        let set = |m: &mut BTreeMap<(usize, usize), Rat>, a: usize, b: usize, v: Rat| {
            m.insert((a, b), v.clone());
            m.insert((b, a), -v);
        };
        // positive pairs
        for (t, &(i, j)) in special.iter().enumerate() {
            let a = &rd.positive_roots[i];
            let b = &rd.positive_roots[j];
            let p = string_down(a, b);
            let sign = if mask & (1 << t) == 0 { 1 } else { -1 };
            let val = ri(sign * (p + 1));
            set(&mut nconst, root_pos(a).unwrap(), root_pos(b).unwrap(), val);
        }
        // negative pairs: N(-a,-b) = -N(a,b)
        for &(i, j) in &special {
            let a = root_pos(&rd.positive_roots[i]).unwrap();
            let b = root_pos(&rd.positive_roots[j]).unwrap();
            let na = root_pos(&rd.positive_roots[i].iter().map(|x| -x).collect()).unwrap();
            let nb = root_pos(&rd.positive_roots[j].iter().map(|x| -x).collect()).unwrap();
            let v = nconst.get(&(a, b)).unwrap().clone();
            set(&mut nconst, na, nb, -v);
        }
        // mixed pairs from the three-root relation
        // for roots a + b + g = 0: N(a,b)/|g|^2 = N(b,g)/|a|^2 = N(g,a)/|b|^2
        let mut ok = true;
        for ia in 0..roots.len() {
            for ib in 0..roots.len() {
                if ia == ib || nconst.contains_key(&(ia, ib)) {
                    continue;
                }
                let sum: LatVec = roots[ia].iter().zip(&roots[ib]).map(|(x, y)| x + y).collect();
                if sum.iter().all(|&x| x == 0) || !is_root(&sum) {
                    continue;
                }
                let a_pos = !rd.is_negative(&roots[ia]);
                let b_pos = !rd.is_negative(&roots[ib]);
                if a_pos == b_pos {
                    continue; // handled above (or its mirror)
                }
                // normalize to a positive, b negative
                let (x, y) = if a_pos { (ia, ib) } else { (ib, ia) };
                let gamma = &sum;
                let neg_gamma: LatVec = gamma.iter().map(|t| -t).collect();
                let val = if !rd.is_negative(gamma) {
                    // N(x,y) = N(y, -gamma) * |gamma|^2 / |x|^2, pair (y,-gamma) both negative
                    let iy = y;
                    let ig = root_pos(&neg_gamma).unwrap();
                    let base = nconst.get(&(iy, ig));
                    match base {
                        Some(v) => {
                            let f = norm(gamma) / norm(&roots[x]);
                            v * Rat::new((*f.numer()).into(), (*f.denom()).into())
                        }
                        None => {
                            ok = false;
                            break;
                        }
                    }
                } else {
                    // N(x,y) = N(-gamma, x) * |gamma|^2 / |y|^2, pair (-gamma, x) both positive
                    let ig = root_pos(&neg_gamma).unwrap();
                    let base = nconst.get(&(ig, x));
                    match base {
                        Some(v) => {
                            let f = norm(gamma) / norm(&roots[y]);
                            v * Rat::new((*f.numer()).into(), (*f.denom()).into())
                        }
                        None => {
                            ok = false;
                            break;
                        }
                    }
                };
                let (sa, sb) = if a_pos { (ia, ib) } else { (ib, ia) };
                set(&mut nconst, sa, sb, val);
            }
            if !ok {
                break;
            }
        }
        if !ok {
            continue;
        }

        // assemble brackets
        let mut bracket = vec![vec![vec![rz(); dim]; dim]; dim];
        // [h_i, e_b] = <b, alpha_i^vee> e_b
        for i in 0..rank {
            for (bi, b) in roots.iter().enumerate() {
                let k = pair(b, &rd.simple_coroots[i]);
                bracket[i][rank + bi][rank + bi] = ri(k);
                bracket[rank + bi][i][rank + bi] = ri(-k);
            }
        }
        // [e_a, e_{-a}] = coroot of a, expanded in simple coroots
        let coroot_cols: Vec<Vecr> = (0..rank)
            .map(|i| rd.simple_coroots[i].iter().map(|&x| ri(x)).collect())
            .collect();
        let coroot_mat = Matr::from_cols(coroot_cols);
        for (ai, a) in roots.iter().enumerate() {
            let neg: LatVec = a.iter().map(|x| -x).collect();
            let ni = root_pos(&neg).unwrap();
            if ai < ni {
                // coroot of a in the dual basis
                let g = &rd.gram;
                let nrm = norm(a);
                let mut cor = vec![Q64::zero(); rank];
                for j in 0..rank {
                    let mut s = Q64::zero();
                    for t in 0..rank {
                        s += g[j][t] * Q64::from_integer(a[t]);
                    }
                    cor[j] = Q64::from_integer(2) * s / nrm;
                }
                let target: Vecr = cor
                    .iter()
                    .map(|x| Rat::new((*x.numer()).into(), (*x.denom()).into()))
                    .collect();
                let coeffs = coroot_mat.solve(&target).expect("coroot in simple-coroot span");
                for i in 0..rank {
                    bracket[rank + ai][rank + ni][i] = coeffs[i].clone();
                    bracket[rank + ni][rank + ai][i] = -coeffs[i].clone();
                }
            }
        }
        // [e_a, e_b] = N(a,b) e_{a+b}
        for ((ia, ib), v) in &nconst {
            let sum: LatVec = roots[*ia].iter().zip(&roots[*ib]).map(|(x, y)| x + y).collect();
            let is_idx = root_pos(&sum).unwrap();
            bracket[rank + ia][rank + ib][rank + is_idx] = v.clone();
        }

        let alg = LieAlgebra { rd: rd.clone(), roots: roots.clone(), dim, bracket };
        if alg.verify_jacobi() {
            return Ok(alg);
        }
    }
    Err(LieError::Internal("no consistent Chevalley signs found".into()))
}

/// An sl2 triple `(e, h, f)` with exact entries.
#[derive(Clone, Debug)]
pub struct Sl2Triple {
    pub e: Vecr,
    pub h: Vecr,
    pub f: Vecr,
    pub label: String,
}

/// Complete a nilpotent element to an sl2 triple.
pub fn complete_sl2(alg: &LieAlgebra, e: &[Rat], label: &str) -> Result<Sl2Triple, LieError> {
    if ratlin::is_zero_vec(e) {
        return Ok(Sl2Triple { e: alg.zero(), h: alg.zero(), f: alg.zero(), label: label.into() });
    }
    if !alg.is_nilpotent(e) {
        return Err(LieError::NotNilpotent);
    }
    let ade = alg.ad(&e.to_vec());
    // solve ad(e)^2 y = -2 e; then h = -ad(e) y = [y, e]... careful with signs:
    // we want h in the image of ad(e) with [h, e] = 2e.  Writing h = [e, y],
    // [h, e] = -ad(e) h = -ad(e) ad(e) y ... use matrices directly:
    // h = ade * y  (h = [e, y]), condition [h, e] = 2e is -ade * h = 2e.
    let rhs: Vecr = e.iter().map(|x| x.clone() * ri(-2)).collect();
    let ade2 = ade.mul(&ade);
    let y = ade2
        .solve(&rhs)
        .ok_or_else(|| LieError::NoTriple("characteristic equation unsolvable".into()))?;
    let h = ade.mul_vec(&y);
    // f solves [e, f] = h within the (-2)-eigenspace of ad(h)
    let adh = alg.ad(&h);
    let mut shifted = adh.clone();
    for i in 0..alg.dim {
        shifted.a[i][i] += ri(2);
    }
    let eig_basis = shifted.null_space();
    if eig_basis.is_empty() {
        return Err(LieError::NoTriple("no (-2)-eigenspace".into()));
    }
    // express f = sum c_k v_k with ade * f = h
    let cols: Vec<Vecr> = eig_basis.iter().map(|v| ade.mul_vec(v)).collect();
    let m = Matr::from_cols(cols);
    let c = m
        .solve(&h)
        .ok_or_else(|| LieError::NoTriple("lowering element unsolvable".into()))?;
    let mut f = alg.zero();
    for (ck, v) in c.iter().zip(&eig_basis) {
        for i in 0..alg.dim {
            f[i] += ck * &v[i];
        }
    }
    let t = Sl2Triple { e: e.to_vec(), h, f, label: label.into() };
    verify_triple(alg, &t)?;
    Ok(t)
}

pub fn verify_triple(alg: &LieAlgebra, t: &Sl2Triple) -> Result<(), LieError> {
    let he = alg.bracket(&t.h, &t.e);
    let hf = alg.bracket(&t.h, &t.f);
    let ef = alg.bracket(&t.e, &t.f);
    let two_e: Vecr = t.e.iter().map(|x| x.clone() * ri(2)).collect();
    let neg_two_f: Vecr = t.f.iter().map(|x| x.clone() * ri(-2)).collect();
    if he != two_e || hf != neg_two_f || ef != t.h {
        return Err(LieError::NoTriple("triple relations violated".into()));
    }
    Ok(())
}

/// A single weight line of a multiplicity space: its weight on the maximal
/// torus of the reductive centralizer, and (for disconnected centralizers)
/// the exact angle of the character value on each component class.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightEntry {
    /// weight as values on the chosen basis of t_phi (exact rationals)
    pub t_weight: Vec<Q64>,
    /// one angle per component class (empty for connected centralizers)
    pub class_angles: Vec<Q64>,
}

/// Conjugacy class of the component group of the reductive centralizer.
#[derive(Clone, Debug, Serialize)]
pub struct ComponentClass {
    pub name: String,
    /// Haar weight |class| / |group|
    pub weight: Q64,
    /// torus coordinates of a class representative, as rational angles
    pub angles: Vec<Q64>,
}

/// Everything the spectral side needs to know about one nilpotent orbit.
#[derive(Clone, Debug)]
pub struct OrbitRecord {
    pub label: String,
    pub triple: Sl2Triple,
    /// dominant characteristic as a cocharacter vector (rational, exact)
    pub h_coweight: Vec<Q64>,
    pub orbit_dim: usize,
    pub c_e_dim: usize,
    pub c_phi_dim: usize,
    /// basis of t_phi = c_phi intersect Cartan, as cocharacter vectors
    pub t_phi: Vec<Vec<Q64>>,
    /// for each sl2 weight i >= 0 present: the multiplicity space data
    pub levels: BTreeMap<i64, Vec<WeightEntry>>,
    /// dims of the ad(h)-eigenspaces of the full algebra (all integers i)
    pub h_eigen_dims: BTreeMap<i64, usize>,
    pub classes: Vec<ComponentClass>,
    /// true when some class lacks character data (stretch-goal orbits)
    pub incomplete_classes: bool,
    /// minimal-length coset representatives in W^h \ W (indices into the Weyl group)
    pub fiber_cosets: Vec<usize>,
    /// subset of `fiber_cosets` whose stratum meets the fixed fiber
    pub weyl_support: Vec<usize>,
    /// stratum dimension per supported coset (aligned with weyl_support)
    pub stratum_dims: Vec<i64>,
}

impl OrbitRecord {
    pub fn is_zero_orbit(&self) -> bool {
        ratlin::is_zero_vec(&self.triple.e)
    }

    /// Slice weight multiset: for each level entry one line with exponent
    /// `-1 - i/2` in the scaling variable (the h-weight before the twist is
    /// `-i`, which is nonpositive: the repelling property).
    pub fn slice_entries(&self) -> Vec<(Q64, WeightEntry)> {
        let mut out = Vec::new();
        for (&i, entries) in &self.levels {
            for e in entries {
                out.push((Q64::new(-2 - i, 2), e.clone()));
            }
        }
        out
    }

    /// Centralizer weight multiset: exponent `+i/2` per level entry.
    pub fn centralizer_entries(&self) -> Vec<(Q64, WeightEntry)> {
        let mut out = Vec::new();
        for (&i, entries) in &self.levels {
            for e in entries {
                out.push((Q64::new(i, 2), e.clone()));
            }
        }
        out
    }

    /// Full adjoint-module weight multiset under the stabilizer torus:
    /// level-i entries replicated at exponents `-i/2, -i/2+1, .., i/2`.
    pub fn adjoint_entries(&self) -> Vec<(Q64, WeightEntry)> {
        let mut out = Vec::new();
        for (&i, entries) in &self.levels {
            for e in entries {
                let mut j = Q64::new(-i, 2);
                loop {
                    out.push((j, e.clone()));
                    if j == Q64::new(i, 2) {
                        break;
                    }
                    j += Q64::one();
                }
            }
        }
        out
    }

    pub fn dim_g(&self) -> usize {
        self.h_eigen_dims.values().sum()
    }
}

/// Compute the orbit record for a triple whose characteristic is already a
/// dominant Cartan element and whose nilpotent part is a sum of root vectors.
pub fn orbit_record(
    alg: &LieAlgebra,
    triple: &Sl2Triple,
    label: &str,
    classes: Option<Vec<ComponentClass>>,
    class_angles: Option<BTreeMap<i64, Vec<Vec<Q64>>>>,
) -> Result<OrbitRecord, LieError> {
    let rd = &alg.rd;
    let rank = rd.rank;
    let dim = alg.dim;

    let h_coweight: Vec<Q64> = if ratlin::is_zero_vec(&triple.h) {
        vec![Q64::zero(); rank]
    } else {
        let mu = alg.coweight_of_cartan(&triple.h)?;
        mu.iter()
            .map(|x| {
                let n = x.numer().to_i64().ok_or(()).expect("small");
                let d = x.denom().to_i64().expect("small");
                Q64::new(n, d)
            })
            .collect()
    };
    if !rd.is_dominant_coweight(&h_coweight) {
        return Err(LieError::Internal("characteristic not dominant".into()));
    }

    let ade = alg.ad(&triple.e);
    let adh = alg.ad(&triple.h);

    let c_e = ade.null_space();
    let c_e_dim = c_e.len();
    let orbit_dim = dim - c_e_dim;
    if orbit_dim % 2 != 0 {
        return Err(LieError::Internal("odd orbit dimension".into()));
    }

    // ad(h) eigenvalues must be integers; record eigenspace dimensions
    let mut h_eigen_dims: BTreeMap<i64, usize> = BTreeMap::new();
    let max_ht: i64 = 2 * rd.heights.iter().max().copied().unwrap_or(0);
    let mut seen = 0usize;
    for k in -max_ht..=max_ht {
        let mut m = adh.clone();
        for i in 0..dim {
            m.a[i][i] -= ri(k);
        }
        let d = m.null_space().len();
        if d > 0 {
            h_eigen_dims.insert(k, d);
            seen += d;
        }
    }
    if seen != dim {
        return Err(LieError::Internal("non-integral ad(h) eigenvalue".into()));
    }

    // t_phi = Cartan intersect ker(ad e): Cartan vectors commuting with e
    let mut t_phi: Vec<Vec<Q64>> = Vec::new();
    {
        // rows: for each root a in the support of e, the functional a(.)
        // acting on Cartan coefficients; kernel = t_phi in Cartan coords
        let mut rows: Vec<Vecr> = Vec::new();
        for (idx, c) in triple.e.iter().enumerate() {
            if !c.is_zero() {
                let root = alg
                    .root_of_basis(idx)
                    .ok_or_else(|| LieError::Internal("nilpotent not a sum of root vectors".into()))?;
                rows.push(
                    (0..rank)
                        .map(|i| ri(pair(root, &rd.simple_coroots[i])))
                        .collect(),
                );
            }
        }
        let kernel = if rows.is_empty() {
            Matr::identity(rank).a
        } else {
            Matr::from_rows(rows).null_space()
        };
        for v in kernel {
            // to cocharacter coordinates
            let mut mu = vec![Q64::zero(); rank];
            for i in 0..rank {
                let c = &v[i];
                let n = c.numer().to_i64().expect("small");
                let d = c.denom().to_i64().expect("small");
                for j in 0..rank {
                    mu[j] += Q64::new(n, d) * Q64::from_integer(rd.simple_coroots[i][j]);
                }
            }
            t_phi.push(mu);
        }
    }

    // c_phi = ker(ad e) intersect ker(ad h)
    let stacked = ade.stacked(&adh);
    let c_phi = stacked.null_space();
    let c_phi_dim = c_phi.len();

    // independent rank check: the rank of the reductive centralizer equals
    // the dimension of the centralizer of a generic element of c_phi in c_phi
    {
        let mut best = usize::MAX;
        for probe in 1..=3i64 {
            let mut z = alg.zero();
            for (k, v) in c_phi.iter().enumerate() {
                let w = ri(1 + probe * (k as i64 + 1) * (k as i64 + 3));
                for i in 0..dim {
                    z[i] += &v[i] * &w;
                }
            }
            let adz = alg.ad(&z);
            // restrict ad(z) to c_phi: columns = ad(z) v_k expressed in c_phi basis
            let basis_mat = Matr::from_cols(c_phi.clone());
            let mut dim_ker = 0;
            let mut rows: Vec<Vecr> = Vec::new();
            for v in &c_phi {
                rows.push(adz.mul_vec(v));
            }
            // kernel of the map c_phi -> g, v |-> [z, v]
            let map = Matr::from_cols(rows);
            dim_ker += map.null_space().len();
            let _ = basis_mat;
            best = best.min(dim_ker);
        }
        if best != t_phi.len() {
            return Err(LieError::Internal(format!(
                "t_phi dimension {} does not match reductive rank {best}",
                t_phi.len()
            )));
        }
    }

    // multiplicity spaces g_i^e = ker(ad e) in the i-eigenspace of ad(h),
    // decomposed by t_phi weights
    let mut levels: BTreeMap<i64, Vec<WeightEntry>> = BTreeMap::new();
    let all_roots = alg.roots.clone();
    for (&i, _) in h_eigen_dims.iter().filter(|(&k, _)| k >= 0) {
        // candidate t_phi weights: restrictions of root functionals (and zero)
        let mut candidates: Vec<Vec<Q64>> = vec![vec![Q64::zero(); t_phi.len()]];
        for root in &all_roots {
            let w: Vec<Q64> = t_phi.iter().map(|tau| pair_q(root, tau)).collect();
            if !candidates.contains(&w) {
                candidates.push(w);
            }
        }
        let mut entries: Vec<WeightEntry> = Vec::new();
        // eigenspace of ad(h) for eigenvalue i intersect ker(ad e)
        let mut m = adh.clone();
        for k in 0..dim {
            m.a[k][k] -= ri(i);
        }
        let both = m.stacked(&ade);
        let gi = both.null_space();
        if gi.is_empty() {
            continue;
        }
        let mut total = 0usize;
        for w in &candidates {
            // intersect with the joint t_phi eigenspace of weight w:
            // rows (ad(tau_k) - w_k I) for each k stacked over gi's span
            let mut sys = both.clone();
            for (k, tau) in t_phi.iter().enumerate() {
                let adt = alg.ad(&alg.cartan_from_coweight(tau));
                let mut shift = adt.clone();
                for d2 in 0..dim {
                    let n = w[k].numer();
                    let d3 = w[k].denom();
                    shift.a[d2][d2] -= Rat::new((*n).into(), (*d3).into());
                }
                sys = sys.stacked(&shift);
            }
            let space = sys.null_space();
            let mult = space.len();
            total += mult;
            for _ in 0..mult {
                entries.push(WeightEntry { t_weight: w.clone(), class_angles: Vec::new() });
            }
        }
        if total != gi.len() {
            return Err(LieError::Internal(
                "t_phi weight decomposition does not exhaust the multiplicity space".into(),
            ));
        }
        // canonical order
        entries.sort_by(|a, b| a.t_weight.partial_cmp(&b.t_weight).unwrap());
        levels.insert(i, entries);
    }

    // component classes: trivial unless supplied by the catalog
    let classes = classes.unwrap_or_else(|| {
        vec![ComponentClass {
            name: "1".into(),
            weight: Q64::one(),
            angles: vec![Q64::zero(); rank],
        }]
    });
    let mut incomplete = false;
    if let Some(map) = &class_angles {
        for (i, per_entry) in map {
            let entries = levels.get_mut(i).ok_or_else(|| {
                LieError::Internal(format!("class data for empty level {i}"))
            })?;
            if per_entry.len() != entries.len() {
                return Err(LieError::Internal(format!(
                    "class data count mismatch at level {i}: {} vs {}",
                    per_entry.len(),
                    entries.len()
                )));
            }
            for (entry, angles) in entries.iter_mut().zip(per_entry) {
                if angles.len() != classes.len() {
                    return Err(LieError::Internal("class angle arity mismatch".into()));
                }
                entry.class_angles = angles.clone();
            }
        }
    }
    if classes.len() > 1 && class_angles.is_none() {
        incomplete = true;
    }
    if class_angles.is_some() {
        // classes beyond the catalog-supplied data are considered complete
        for entries in levels.values() {
            for e in entries {
                if e.class_angles.len() != classes.len() {
                    incomplete = true;
                }
            }
        }
    }
    // connected case: give every entry the trivial class angle for uniformity
    if classes.len() == 1 {
        for entries in levels.values_mut() {
            for e in entries.iter_mut() {
                e.class_angles = vec![Q64::zero()];
            }
        }
    }

    let mut rec = OrbitRecord {
        label: label.into(),
        triple: triple.clone(),
        h_coweight,
        orbit_dim,
        c_e_dim,
        c_phi_dim,
        t_phi,
        levels,
        h_eigen_dims,
        classes,
        incomplete_classes: incomplete,
        fiber_cosets: Vec::new(),
        weyl_support: Vec::new(),
        stratum_dims: Vec::new(),
    };
    fill_weyl_support(alg, &mut rec)?;
    verify_record(alg, &rec)?;
    Ok(rec)
}

/// Minimal coset representatives of W^h \ W and the supported subset: a
/// coset supports the fixed fiber iff a generic point of the grading-two
/// part of the corresponding rotated nilradical lies in the open orbit of
/// the grading-zero group.
fn fill_weyl_support(alg: &LieAlgebra, rec: &mut OrbitRecord) -> Result<(), LieError> {
    let rd = &alg.rd;
    let w = rd.weyl_group();
    let h = &rec.h_coweight;
    // W^h: stabilizer of h among Weyl elements (acting on cocharacters)
    let fixes_h = |i: usize| -> bool {
        let e = &w.elements[i];
        let inv = w.inverse_of(i);
        // action on cocharacters uses the inverse-transpose
        let img = e.apply_cochar_q(inv, &to_q64_vec(h));
        img == to_q64_vec(h)
    };
    let stab: Vec<usize> = (0..w.order()).filter(|&i| fixes_h(i)).collect();
    // left cosets W^h w: group elements by coset, take min length
    let mut seen: Vec<Vec<usize>> = Vec::new();
    let mut assigned = vec![false; w.order()];
    for i in 0..w.order() {
        if assigned[i] {
            continue;
        }
        let mut coset = Vec::new();
        for &s in &stab {
            // s * w_i: matrix product
            let m = mat_mul(&w.elements[s].mat, &w.elements[i].mat);
            let j = w.elements.iter().position(|e| e.mat == m).unwrap();
            if !assigned[j] {
                assigned[j] = true;
                coset.push(j);
            }
        }
        seen.push(coset);
    }
    let mut reps: Vec<usize> = seen
        .iter()
        .map(|coset| *coset.iter().min_by_key(|&&j| w.elements[j].length).unwrap())
        .collect();
    reps.sort_by_key(|&j| (w.elements[j].length, j));
    rec.fiber_cosets = reps.clone();

    // grading-two part of g and the open-orbit membership test
    let dim = alg.dim;
    let rank = rd.rank;
    // basis of g_0 (ad h eigenvalue 0) and g_2
    let adh = alg.ad(&rec.triple.h);
    let eig = |k: i64| -> Vec<Vecr> {
        let mut m = adh.clone();
        for i in 0..dim {
            m.a[i][i] -= ri(k);
        }
        m.null_space()
    };
    let g0 = eig(0);
    let g2 = eig(2);
    if ratlin::is_zero_vec(&rec.triple.e) {
        // zero orbit: every coset is supported, all strata have full dimension
        rec.weyl_support = reps.clone();
        let dim_flag: i64 = flag_dim_of_levi(&g0, rank);
        rec.stratum_dims = reps.iter().map(|_| dim_flag).collect();
        return Ok(());
    }
    let g2_dim = g2.len();
    let g2_mat = Matr::from_cols(g2.clone());
    // express a vector in g2 coordinates
    let to_g2_coords = |v: &Vecr| -> Option<Vecr> { g2_mat.solve(v) };

    let mut support = Vec::new();
    let mut dims = Vec::new();
    for &rep in &reps {
        let e_w = &w.elements[rep];
        // roots of the rotated nilradical with grading 2: {w a : a > 0, <w a, h> = 2}
        let mut span: Vec<Vecr> = Vec::new();
        for a in &rd.positive_roots {
            let img = e_w.apply(a);
            if pair_q(&img, &to_q64_vec(h)) == Q64::from_integer(2) {
                let idx = alg.root_index(&img).unwrap();
                span.push(alg.basis_vector(idx));
            }
        }
        let wn2_dim = span.len() as i64;
        // generic point of the span: open-orbit membership via rank of
        // ad(g_0) x inside g_2
        let mut in_open = false;
        for probe in 1..=4i64 {
            let mut x = alg.zero();
            for (k, v) in span.iter().enumerate() {
                let c = ri(1 + probe * (k as i64 + 1) * (k as i64 + 2));
                for i in 0..dim {
                    x[i] += &v[i] * &c;
                }
            }
            if ratlin::is_zero_vec(&x) {
                break;
            }
            let adx = alg.ad(&x);
            let mut cols: Vec<Vecr> = Vec::new();
            let mut okcols = true;
            for v in &g0 {
                let img = adx.mul_vec(v);
                let neg: Vecr = img.iter().map(|t| -t.clone()).collect();
                match to_g2_coords(&neg) {
                    Some(c) => cols.push(c),
                    None => {
                        okcols = false;
                        break;
                    }
                }
            }
            if !okcols {
                continue;
            }
            let m = Matr::from_cols(cols);
            if m.rank() == g2_dim {
                in_open = true;
                break;
            }
        }
        if in_open {
            support.push(rep);
            let dim_flag = flag_dim_of_levi(&g0, rank);
            dims.push(dim_flag - (g2_dim as i64 - wn2_dim));
        }
    }
    rec.weyl_support = support;
    rec.stratum_dims = dims;
    Ok(())
}

/// dim G^h/B^h = (dim g_0 - rank)/2.
fn flag_dim_of_levi(g0: &[Vecr], rank: usize) -> i64 {
    ((g0.len() - rank) / 2) as i64
}

fn to_q64_vec(v: &[Q64]) -> Vec<Q64> {
    v.to_vec()
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let mut c = vec![vec![0i64; m]; n];
    for i in 0..n {
        for t in 0..k {
            if a[i][t] == 0 {
                continue;
            }
            for j in 0..m {
                c[i][j] += a[i][t] * b[t][j];
            }
        }
    }
    c
}

/// Exact structural invariants of an orbit record.
pub fn verify_record(alg: &LieAlgebra, rec: &OrbitRecord) -> Result<(), LieError> {
    let dim = alg.dim;
    // sum (i+1) dim g_i^e = dim g
    let mut s = 0i64;
    for (&i, entries) in &rec.levels {
        s += (i + 1) * entries.len() as i64;
    }
    if s != dim as i64 {
        return Err(LieError::Internal(format!(
            "multiplicity dimensions sum to {s}, expected {dim}"
        )));
    }
    // g_i = sum of g_j^e over j = i, i+2, ...
    for (&i, &d) in &rec.h_eigen_dims {
        if i < 0 {
            continue;
        }
        let mut t = 0usize;
        let mut j = i;
        loop {
            if let Some(entries) = rec.levels.get(&j) {
                t += entries.len();
            }
            j += 2;
            if j > *rec.h_eigen_dims.keys().max().unwrap_or(&0) {
                break;
            }
        }
        if t != d {
            return Err(LieError::Internal(format!(
                "eigenspace dimension mismatch at level {i}: {t} vs {d}"
            )));
        }
    }
    // self-duality: each level's t_phi-weight multiset is closed under negation,
    // the total weight sum vanishes, and dim g_1 is even
    let mut total_weight: Vec<Q64> = vec![Q64::zero(); rec.t_phi.len()];
    for entries in rec.levels.values() {
        let mut multiset: Vec<Vec<Q64>> = entries.iter().map(|e| e.t_weight.clone()).collect();
        for e in entries {
            let neg: Vec<Q64> = e.t_weight.iter().map(|x| -*x).collect();
            let pos = multiset.iter().position(|w| *w == neg);
            match pos {
                Some(p) => {
                    multiset.remove(p);
                }
                None => {
                    return Err(LieError::Internal("weight multiset not self-dual".into()));
                }
            }
            for (t, x) in total_weight.iter_mut().zip(&e.t_weight) {
                *t += *x;
            }
        }
        if !multiset.is_empty() {
            return Err(LieError::Internal("weight multiset not self-dual".into()));
        }
    }
    if total_weight.iter().any(|x| !x.is_zero()) {
        return Err(LieError::Internal("nonzero total weight".into()));
    }
    if let Some(d1) = rec.h_eigen_dims.get(&1) {
        if d1 % 2 != 0 {
            return Err(LieError::Internal("odd symplectic level".into()));
        }
    }
    if dim - rec.c_e_dim != rec.orbit_dim || rec.orbit_dim % 2 != 0 {
        return Err(LieError::Internal("orbit dimension mismatch".into()));
    }
    // slice character identity: q^{-1} T(slice) - c_e = (q^{-1} - 1) g as
    // exact multisets of (exponent, weight, class angles) with signs
    let mut lhs: BTreeMap<String, i64> = BTreeMap::new();
    let mut add_multi = |map: &mut BTreeMap<String, i64>, key: String, mult: i64| {
        let v = map.entry(key).or_insert(0);
        *v += mult;
        if *v == 0 {
            map.remove(&key_clone_hack());
        }
        fn key_clone_hack() -> String {
            unreachable!()
        }
    };
    let _ = &mut add_multi;
    let bump = |map: &mut BTreeMap<String, i64>, exp: Q64, e: &WeightEntry, mult: i64| {
        let key = format!("{exp}|{:?}|{:?}", e.t_weight, e.class_angles);
        *map.entry(key).or_insert(0) += mult;
    };
    for (exp, e) in rec.slice_entries() {
        bump(&mut lhs, exp, &e, 1);
    }
    for (exp, e) in rec.centralizer_entries() {
        bump(&mut lhs, exp, &e, -1);
    }
    let mut rhs: BTreeMap<String, i64> = BTreeMap::new();
    for (exp, e) in rec.adjoint_entries() {
        bump(&mut rhs, exp - Q64::one(), &e, 1);
        bump(&mut rhs, exp, &e, -1);
    }
    lhs.retain(|_, v| *v != 0);
    rhs.retain(|_, v| *v != 0);
    if lhs != rhs {
        return Err(LieError::Internal("slice character identity failed".into()));
    }
    Ok(())
}

/// Component-group orders of the reductive centralizer's Weyl group, from
/// the root count of `c_phi` (rank <= 2 throughout, where the order equals
/// the number of roots, or 1 when there are none).
pub fn centralizer_weyl_order(rec: &OrbitRecord) -> usize {
    let roots = centralizer_roots(rec);
    if roots.is_empty() {
        1
    } else {
        roots.len()
    }
}

/// Nonzero t_phi-weights of the level-zero multiplicity space.
pub fn centralizer_roots(rec: &OrbitRecord) -> Vec<Vec<Q64>> {
    match rec.levels.get(&0) {
        Some(entries) => entries
            .iter()
            .filter(|e| e.t_weight.iter().any(|x| !x.is_zero()))
            .map(|e| e.t_weight.clone())
            .collect(),
        None => Vec::new(),
    }
}

/// The catalog of nilpotent orbits for a supported group form.
pub struct OrbitCatalog {
    pub orbits: Vec<OrbitRecord>,
}

/// Build the orbit catalog.  Representatives: zero; one root vector per root
/// length (per simple factor for A1xA1); the subregular sum for G2; the sum
/// of the simple root vectors for the regular orbit.  Component groups are
/// catalog data: trivial except for regular orbits (the center) and the G2
/// subregular orbit (S3 with its standard character table).
pub fn orbit_catalog(alg: &LieAlgebra) -> Result<OrbitCatalog, LieError> {
    let rd = &alg.rd;
    let mut orbits: Vec<OrbitRecord> = Vec::new();

    // zero orbit
    let zero = Sl2Triple { e: alg.zero(), h: alg.zero(), f: alg.zero(), label: "zero".into() };
    orbits.push(orbit_record(alg, &zero, "zero", None, None)?);

    let center_classes = |rd: &RootDatum| -> Vec<ComponentClass> {
        let c = rd.center();
        let n = c.order() as i64;
        c.elements
            .iter()
            .enumerate()
            .map(|(k, angles)| ComponentClass {
                name: format!("z{k}"),
                weight: Q64::new(1, n),
                angles: angles.clone(),
            })
            .collect()
    };
    let trivial_center_angles = |rec_levels: &BTreeMap<i64, Vec<WeightEntry>>,
                                 n_classes: usize|
     -> BTreeMap<i64, Vec<Vec<Q64>>> {
        // the center acts trivially in the adjoint representation
        rec_levels
            .iter()
            .map(|(&i, entries)| {
                (i, entries.iter().map(|_| vec![Q64::zero(); n_classes]).collect())
            })
            .collect()
    };

    match rd.group {
        GroupType::A1 => {
            let e = alg.basis_vector(alg.root_index(&rd.positive_roots[0]).unwrap());
            let t = complete_sl2(alg, &e, "regular")?;
            let t = dominant_form(alg, &t)?;
            let classes = center_classes(rd);
            let probe = orbit_record(alg, &t, "regular", None, None)?;
            let angles = trivial_center_angles(&probe.levels, classes.len());
            orbits.push(orbit_record(alg, &t, "regular", Some(classes), Some(angles))?);
        }
        GroupType::A1xA1 => {
            // mixed orbits: regular in one factor; component group = center of
            // the regular factor (the other factor stays connected)
            for (which, lbl) in [(0usize, "regular-first"), (1usize, "regular-second")] {
                let e = alg.basis_vector(alg.root_index(&rd.simple_roots[which]).unwrap());
                let t = dominant_form(alg, &complete_sl2(alg, &e, lbl)?)?;
                let classes = match rd.lattice {
                    Lattice::Adjoint => None,
                    Lattice::SimplyConnected => {
                        // center of the regular factor: angles supported on it
                        let mut cs = vec![ComponentClass {
                            name: "1".into(),
                            weight: Q64::new(1, 2),
                            angles: vec![Q64::zero(); rd.rank],
                        }];
                        let mut angles = vec![Q64::zero(); rd.rank];
                        angles[which] = Q64::new(1, 2);
                        cs.push(ComponentClass {
                            name: "z".into(),
                            weight: Q64::new(1, 2),
                            angles,
                        });
                        Some(cs)
                    }
                };
                let rec = match classes {
                    None => orbit_record(alg, &t, lbl, None, None)?,
                    Some(cs) => {
                        let probe = orbit_record(alg, &t, lbl, None, None)?;
                        let angles = trivial_center_angles(&probe.levels, cs.len());
                        orbit_record(alg, &t, lbl, Some(cs), Some(angles))?
                    }
                };
                orbits.push(rec);
            }
            // regular = sum of both simple root vectors
            let mut e = alg.zero();
            for i in 0..2 {
                let idx = alg.root_index(&rd.simple_roots[i]).unwrap();
                e[idx] = Rat::one();
            }
            let t = dominant_form(alg, &complete_sl2(alg, &e, "regular")?)?;
            let classes = center_classes(rd);
            let probe = orbit_record(alg, &t, "regular", None, None)?;
            let angles = trivial_center_angles(&probe.levels, classes.len());
            orbits.push(orbit_record(alg, &t, "regular", Some(classes), Some(angles))?);
        }
        GroupType::A2 => {
            let e = alg.basis_vector(alg.root_index(&rd.simple_roots[0]).unwrap());
            let t = dominant_form(alg, &complete_sl2(alg, &e, "minimal")?)?;
            orbits.push(orbit_record(alg, &t, "minimal", None, None)?);
            let mut e = alg.zero();
            for i in 0..2 {
                e[alg.root_index(&rd.simple_roots[i]).unwrap()] = Rat::one();
            }
            let t = dominant_form(alg, &complete_sl2(alg, &e, "regular")?)?;
            let classes = center_classes(rd);
            let probe = orbit_record(alg, &t, "regular", None, None)?;
            let angles = trivial_center_angles(&probe.levels, classes.len());
            orbits.push(orbit_record(alg, &t, "regular", Some(classes), Some(angles))?);
        }
        GroupType::B2 | GroupType::C2 => {
            // one root-vector orbit per root length
            let norms: Vec<Q64> = rd
                .positive_roots
                .iter()
                .map(|a| {
                    let mut s = Q64::zero();
                    for i in 0..rd.rank {
                        for j in 0..rd.rank {
                            s += rd.gram[i][j]
                                * Q64::from_integer(a[i])
                                * Q64::from_integer(a[j]);
                        }
                    }
                    s
                })
                .collect();
            let mut lengths: Vec<Q64> = norms.clone();
            lengths.sort();
            lengths.dedup();
            let labels = ["min", "subregular"];
            // the long-root vector generates the minimal orbit, the
            // short-root vector the subregular one
            let mut by_len: Vec<(Q64, usize)> = Vec::new();
            for (i, n) in norms.iter().enumerate() {
                if !by_len.iter().any(|(m, _)| m == n) {
                    by_len.push((*n, i));
                }
            }
            by_len.sort_by(|a, b| b.0.cmp(&a.0)); // long first
            for (k, (_, idx)) in by_len.iter().enumerate() {
                let e = alg.basis_vector(alg.root_index(&rd.positive_roots[*idx]).unwrap());
                let t = dominant_form(alg, &complete_sl2(alg, &e, labels[k])?)?;
                let classes = if k == 1 {
                    // subregular: order-two component group, externally sourced;
                    // character data on the reflection class is not bundled
                    Some(vec![
                        ComponentClass {
                            name: "1".into(),
                            weight: Q64::new(1, 2),
                            angles: vec![Q64::zero(); rd.rank],
                        },
                        ComponentClass {
                            name: "r".into(),
                            weight: Q64::new(1, 2),
                            angles: vec![Q64::zero(); rd.rank],
                        },
                    ])
                } else {
                    None
                };
                orbits.push(orbit_record(alg, &t, labels[k], classes, None)?);
            }
            let mut e = alg.zero();
            for i in 0..2 {
                e[alg.root_index(&rd.simple_roots[i]).unwrap()] = Rat::one();
            }
            let t = dominant_form(alg, &complete_sl2(alg, &e, "regular")?)?;
            let classes = center_classes(rd);
            let probe = orbit_record(alg, &t, "regular", None, None)?;
            let angles = trivial_center_angles(&probe.levels, classes.len());
            orbits.push(orbit_record(alg, &t, "regular", Some(classes), Some(angles))?);
        }
        GroupType::G2 => {
            // short and long root-vector orbits
            let mut short_idx = None;
            let mut long_idx = None;
            for (i, a) in rd.positive_roots.iter().enumerate() {
                let mut s = Q64::zero();
                for x in 0..2 {
                    for y in 0..2 {
                        s += rd.gram[x][y] * Q64::from_integer(a[x]) * Q64::from_integer(a[y]);
                    }
                }
                if s == Q64::from_integer(2) && short_idx.is_none() {
                    short_idx = Some(i);
                }
                if s == Q64::from_integer(6) && long_idx.is_none() {
                    long_idx = Some(i);
                }
            }
            // the minimal orbit is generated by a long (highest-root) vector
            for (idx, lbl) in [(long_idx.unwrap(), "min"), (short_idx.unwrap(), "middle")] {
                let e = alg.basis_vector(alg.root_index(&rd.positive_roots[idx]).unwrap());
                let t = dominant_form(alg, &complete_sl2(alg, &e, lbl)?)?;
                orbits.push(orbit_record(alg, &t, lbl, None, None)?);
            }
            // subregular: e = e_{(2,-1)} + e_{(0,1)} (sum of two grading-two
            // root vectors with distinct lines through the origin)
            let mut e = alg.zero();
            e[alg.root_index(&vec![2, -1]).unwrap()] = Rat::one();
            e[alg.root_index(&vec![0, 1]).unwrap()] = Rat::one();
            let t = dominant_form(alg, &complete_sl2(alg, &e, "subregular")?)?;
            let (classes, angles) = g2_subregular_component_data();
            orbits.push(orbit_record(alg, &t, "subregular", Some(classes), Some(angles))?);
            // regular
            let mut e = alg.zero();
            for i in 0..2 {
                e[alg.root_index(&rd.simple_roots[i]).unwrap()] = Rat::one();
            }
            let t = dominant_form(alg, &complete_sl2(alg, &e, "regular")?)?;
            orbits.push(orbit_record(alg, &t, "regular", None, None)?);
        }
    }
    orbits.sort_by_key(|o| o.orbit_dim);
    Ok(OrbitCatalog { orbits })
}

/// Component data of the G2 subregular orbit: the symmetric group S3 inside
/// the grading-zero GL(2), class representatives in torus coordinates, and
/// character angles of the multiplicity spaces (trivial + standard at level
/// two, sign at level four).
fn g2_subregular_component_data() -> (Vec<ComponentClass>, BTreeMap<i64, Vec<Vec<Q64>>>) {
    let classes = vec![
        ComponentClass {
            name: "1".into(),
            weight: Q64::new(1, 6),
            angles: vec![Q64::zero(), Q64::zero()],
        },
        ComponentClass {
            name: "(12)".into(),
            weight: Q64::new(1, 2),
            angles: vec![Q64::new(1, 2), Q64::zero()],
        },
        ComponentClass {
            name: "(123)".into(),
            weight: Q64::new(1, 3),
            angles: vec![Q64::new(1, 3), Q64::new(2, 3)],
        },
    ];
    let mut angles: BTreeMap<i64, Vec<Vec<Q64>>> = BTreeMap::new();
    // level 2 = trivial + standard two-dimensional representation
    angles.insert(
        2,
        vec![
            vec![Q64::zero(), Q64::zero(), Q64::zero()],
            vec![Q64::zero(), Q64::zero(), Q64::new(1, 3)],
            vec![Q64::zero(), Q64::new(1, 2), Q64::new(2, 3)],
        ],
    );
    // level 4 = sign representation
    angles.insert(4, vec![vec![Q64::zero(), Q64::new(1, 2), Q64::zero()]]);
    (classes, angles)
}

/// Conjugate a triple so that the characteristic is dominant; the nilpotent
/// part stays a sum of root vectors because the Weyl representatives map
/// root spaces to root spaces.
pub fn dominant_form(alg: &LieAlgebra, t: &Sl2Triple) -> Result<Sl2Triple, LieError> {
    let rd = &alg.rd;
    if ratlin::is_zero_vec(&t.h) {
        return Ok(t.clone());
    }
    let mu_big = alg.coweight_of_cartan(&t.h)?;
    let mu: Vec<Q64> = mu_big
        .iter()
        .map(|x| Q64::new(x.numer().to_i64().unwrap(), x.denom().to_i64().unwrap()))
        .collect();
    let w = rd.weyl_group();
    for i in 0..w.order() {
        let e = &w.elements[i];
        let inv = w.inverse_of(i);
        let img = e.apply_cochar_q(inv, &mu);
        if rd.is_dominant_coweight(&img) {
            let action = alg.weyl_action(&e.word);
            let conj = Sl2Triple {
                e: action.mul_vec(&t.e),
                h: action.mul_vec(&t.h),
                f: action.mul_vec(&t.f),
                label: t.label.clone(),
            };
            verify_triple(alg, &conj)?;
            // h must land exactly on the Cartan with coweight img
            let expect = alg.cartan_from_coweight(&img);
            if conj.h != expect {
                return Err(LieError::Internal("Weyl action did not move h as expected".into()));
            }
            return Ok(conj);
        }
    }
    Err(LieError::Internal("no dominant conjugate found".into()))
}

/// Stratum dimension for one supported coset (already stored on the record).
pub fn stratum_dimension(rec: &OrbitRecord, coset: usize) -> Option<i64> {
    rec.weyl_support
        .iter()
        .position(|&c| c == coset)
        .map(|k| rec.stratum_dims[k])
}

/// JSON-friendly orbit dump for the CLI.
#[derive(Serialize)]
pub struct OrbitDescription {
    pub label: String,
    pub h_coweight: Vec<String>,
    pub orbit_dim: usize,
    pub centralizer_dim: usize,
    pub reductive_centralizer_dim: usize,
    pub t_phi_dim: usize,
    pub levels: BTreeMap<i64, Vec<WeightEntry>>,
    pub classes: Vec<ComponentClass>,
    pub weyl_support_words: Vec<Vec<usize>>,
    pub stratum_dims: Vec<i64>,
}

pub fn describe_orbit(rd: &RootDatum, rec: &OrbitRecord) -> OrbitDescription {
    let w = rd.weyl_group();
    OrbitDescription {
        label: rec.label.clone(),
        h_coweight: rec.h_coweight.iter().map(|x| x.to_string()).collect(),
        orbit_dim: rec.orbit_dim,
        centralizer_dim: rec.c_e_dim,
        reductive_centralizer_dim: rec.c_phi_dim,
        t_phi_dim: rec.t_phi.len(),
        levels: rec.levels.clone(),
        classes: rec.classes.clone(),
        weyl_support_words: rec
            .weyl_support
            .iter()
            .map(|&i| w.elements[i].word.clone())
            .collect(),
        stratum_dims: rec.stratum_dims.clone(),
    }
}

/// Evaluate a weight entry at a torus point of the centralizer: returns the
/// rational angle contribution of the class plus the weight pairing with the
/// torus parameters (used by the exact tests; the numeric evaluation lives in
/// the spectral module).
pub fn entry_angle(entry: &WeightEntry, class_idx: usize) -> Q64 {
    if entry.class_angles.is_empty() {
        Q64::zero()
    } else {
        normalize_angle(entry.class_angles[class_idx])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::build_root_system;

    fn algebra(g: GroupType, l: Lattice) -> LieAlgebra {
        build_lie_algebra(&build_root_system(g, l).unwrap()).unwrap()
    }

    #[test]
    fn a1_bracket_relations() {
        let alg = algebra(GroupType::A1, Lattice::SimplyConnected);
        assert_eq!(alg.dim, 3);
        let e = alg.basis_vector(1);
        let f = alg.basis_vector(2);
        let h = alg.bracket(&e, &f);
        assert_eq!(h, alg.basis_vector(0)); // [e, f] = coroot
        let he = alg.bracket(&h, &e);
        assert_eq!(he, ratlin::scale(&e, &ri(2)));
    }

    #[test]
    fn dimensions_and_jacobi() {
        for (g, d) in [
            (GroupType::A1, 3),
            (GroupType::A1xA1, 6),
            (GroupType::A2, 8),
            (GroupType::B2, 10),
            (GroupType::C2, 10),
            (GroupType::G2, 14),
        ] {
            let alg = algebra(g, Lattice::Adjoint);
            assert_eq!(alg.dim, d);
            assert!(alg.verify_jacobi());
        }
    }

    #[test]
    fn a2_highest_root_vector_cubes_to_zero() {
        let alg = algebra(GroupType::A2, Lattice::Adjoint);
        let theta = vec![1, 1];
        let e = alg.basis_vector(alg.root_index(&theta).unwrap());
        let ad = alg.ad(&e);
        let ad2 = ad.mul(&ad);
        let ad3 = ad2.mul(&ad);
        assert!(!ad2.is_zero());
        assert!(ad3.is_zero());
    }

    #[test]
    fn sl2_completion_for_simple_root() {
        let alg = algebra(GroupType::A1, Lattice::SimplyConnected);
        let e = alg.basis_vector(1);
        let t = complete_sl2(&alg, &e, "reg").unwrap();
        assert_eq!(t.h, alg.basis_vector(0)); // h = coroot
        let z = complete_sl2(&alg, &alg.zero(), "zero").unwrap();
        assert!(ratlin::is_zero_vec(&z.e) && ratlin::is_zero_vec(&z.h));
    }

    #[test]
    fn non_nilpotent_rejected() {
        let alg = algebra(GroupType::A1, Lattice::Adjoint);
        let h = alg.basis_vector(0);
        assert!(matches!(complete_sl2(&alg, &h, "bad"), Err(LieError::NotNilpotent)));
    }

    #[test]
    fn g2_subregular_characteristic() {
        let alg = algebra(GroupType::G2, Lattice::Adjoint);
        let mut e = alg.zero();
        e[alg.root_index(&vec![2, -1]).unwrap()] = Rat::one();
        e[alg.root_index(&vec![0, 1]).unwrap()] = Rat::one();
        let t = complete_sl2(&alg, &e, "subregular").unwrap();
        let mu = alg.coweight_of_cartan(&t.h).unwrap();
        let expect: Vec<Rat> = vec![ri(2), ri(2)];
        assert_eq!(mu, expect);
    }

    #[test]
    fn orbit_counts_and_dims() {
        let a2 = algebra(GroupType::A2, Lattice::SimplyConnected);
        let cat = orbit_catalog(&a2).unwrap();
        let dims: Vec<usize> = cat.orbits.iter().map(|o| o.orbit_dim).collect();
        assert_eq!(dims, vec![0, 4, 6]);

        let a1 = algebra(GroupType::A1, Lattice::Adjoint);
        assert_eq!(orbit_catalog(&a1).unwrap().orbits.len(), 2);

        let g2 = algebra(GroupType::G2, Lattice::Adjoint);
        let cat = orbit_catalog(&g2).unwrap();
        let dims: Vec<usize> = cat.orbits.iter().map(|o| o.orbit_dim).collect();
        assert_eq!(dims, vec![0, 6, 8, 10, 12]);
    }

    #[test]
    fn g2_subregular_record_matches_known_shape() {
        let g2 = algebra(GroupType::G2, Lattice::Adjoint);
        let cat = orbit_catalog(&g2).unwrap();
        let sub = cat.orbits.iter().find(|o| o.label == "subregular").unwrap();
        assert_eq!(sub.c_e_dim, 4);
        assert_eq!(sub.levels.get(&2).map(|v| v.len()), Some(3));
        assert_eq!(sub.levels.get(&4).map(|v| v.len()), Some(1));
        assert_eq!(sub.t_phi.len(), 0);
        assert_eq!(sub.classes.len(), 3);
        // supported cosets: identity (stratum dim 1) and one reflection (dim 0)
        assert_eq!(sub.weyl_support.len(), 2);
        assert_eq!(sub.stratum_dims, vec![1, 0]);
    }

    #[test]
    fn a2_minimal_record() {
        let a2 = algebra(GroupType::A2, Lattice::SimplyConnected);
        let cat = orbit_catalog(&a2).unwrap();
        let min = cat.orbits.iter().find(|o| o.label == "minimal").unwrap();
        assert_eq!(min.orbit_dim, 4);
        assert_eq!(min.t_phi.len(), 1);
        assert_eq!(min.classes.len(), 1);
    }

    #[test]
    fn weyl_support_extremes() {
        let g2 = algebra(GroupType::G2, Lattice::Adjoint);
        let cat = orbit_catalog(&g2).unwrap();
        let zero = &cat.orbits[0];
        assert_eq!(zero.weyl_support.len(), zero.fiber_cosets.len());
        let reg = cat.orbits.iter().find(|o| o.label == "regular").unwrap();
        assert_eq!(reg.weyl_support.len(), 1);
    }

    #[test]
    fn regular_orbit_component_group_is_center() {
        let a1 = algebra(GroupType::A1, Lattice::SimplyConnected);
        let cat = orbit_catalog(&a1).unwrap();
        let reg = cat.orbits.iter().find(|o| o.label == "regular").unwrap();
        assert_eq!(reg.classes.len(), 2);
        assert_eq!(reg.c_phi_dim, 0);
    }

    #[test]
    fn scaling_the_representative_preserves_the_record_shape() {
        let g2 = algebra(GroupType::G2, Lattice::Adjoint);
        let mut e = g2.zero();
        e[g2.root_index(&vec![2, -1]).unwrap()] = ri(3);
        e[g2.root_index(&vec![0, 1]).unwrap()] = ri(5);
        let t = dominant_form(&g2, &complete_sl2(&g2, &e, "scaled").unwrap()).unwrap();
        let rec = orbit_record(&g2, &t, "scaled", None, None).unwrap();
        assert_eq!(rec.c_e_dim, 4);
        assert_eq!(rec.levels.get(&2).map(|v| v.len()), Some(3));
        assert_eq!(rec.levels.get(&4).map(|v| v.len()), Some(1));
    }
}
