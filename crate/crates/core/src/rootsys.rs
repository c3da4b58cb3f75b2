//! Exact root systems, Weyl groups and lattice data for the split groups of
//! rank at most two.
//!
//! Roots are stored as integer coordinate vectors with respect to a fixed
//! basis of the character lattice; the basis depends on the group form
//! (adjoint or simply connected), so the same abstract root system appears
//! with different coordinates for different lattice choices.  Coroots are
//! integer vectors in the dual basis.  For G2 the coordinates are the
//! two-variable torus coordinates of the centralizer GL(2) of the subregular
//! characteristic, which makes the subregular evaluation points literal
//! coordinate pairs later on.

use crate::ratlin::smith_normal_form;
use crate::Q64;
use num_traits::Zero;
use serde::Serialize;
use std::collections::{BTreeMap, VecDeque};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GroupType {
    A1,
    A1xA1,
    A2,
    B2,
    C2,
    G2,
}

impl GroupType {
    pub fn parse(s: &str) -> Result<GroupType, RootError> {
        match s.to_ascii_uppercase().replace('*', "X").as_str() {
            "A1" => Ok(GroupType::A1),
            "A1XA1" | "A1A1" | "D2" => Ok(GroupType::A1xA1),
            "A2" => Ok(GroupType::A2),
            "B2" => Ok(GroupType::B2),
            "C2" => Ok(GroupType::C2),
            "G2" => Ok(GroupType::G2),
            other => Err(RootError::UnsupportedType(other.to_string())),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            GroupType::A1 => "A1",
            GroupType::A1xA1 => "A1xA1",
            GroupType::A2 => "A2",
            GroupType::B2 => "B2",
            GroupType::C2 => "C2",
            GroupType::G2 => "G2",
        }
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Lattice {
    Adjoint,
    SimplyConnected,
}

impl Lattice {
    pub fn parse(s: &str) -> Result<Lattice, RootError> {
        match s.to_ascii_lowercase().as_str() {
            "adjoint" | "adj" => Ok(Lattice::Adjoint),
            "simply_connected" | "simply-connected" | "sc" => Ok(Lattice::SimplyConnected),
            other => Err(RootError::UnsupportedType(format!("lattice {other}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RootError {
    UnsupportedType(String),
    Inconsistent(String),
}

impl fmt::Display for RootError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootError::UnsupportedType(s) => write!(f, "unsupported type: {s}"),
            RootError::Inconsistent(s) => write!(f, "internal consistency error: {s}"),
        }
    }
}

impl std::error::Error for RootError {}

pub type LatVec = Vec<i64>;

/// Root datum of a split group form: root and coroot data in fixed integer
/// coordinates, together with the derived combinatorics (heights, exponents,
/// half sums, center).
#[derive(Clone, Debug)]
pub struct RootDatum {
    pub group: GroupType,
    pub lattice: Lattice,
    pub rank: usize,
    /// `cartan[i][j] = <alpha_j, alpha_i^vee>`
    pub cartan: Vec<Vec<i64>>,
    /// Simple roots in character-lattice coordinates.
    pub simple_roots: Vec<LatVec>,
    /// All positive roots, sorted by height then lexicographically.
    pub positive_roots: Vec<LatVec>,
    /// Simple coroots in the dual (cocharacter) basis.
    pub simple_coroots: Vec<LatVec>,
    /// Coroots of the positive roots, aligned with `positive_roots`.
    pub positive_coroots: Vec<LatVec>,
    /// Gram matrix of the invariant inner product on the character space.
    pub gram: Vec<Vec<Q64>>,
    /// ht(alpha) for each positive root, aligned with `positive_roots`.
    pub heights: Vec<i64>,
    pub exponents: Vec<i64>,
    /// Half sum of the positive roots (character coordinates, rational).
    pub rho: Vec<Q64>,
    /// Half sum of the positive coroots (cocharacter coordinates, rational).
    pub rho_check: Vec<Q64>,
}

/// An element of the Weyl group: its action on the character lattice, a
/// reduced word in simple reflections, and the length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    /// Matrix acting on character coordinates: (w.lambda) = mat * lambda.
    pub mat: Vec<Vec<i64>>,
    pub word: Vec<usize>,
    pub length: usize,
}

impl WeylElement {
    pub fn apply(&self, v: &[i64]) -> LatVec {
        mat_vec_i64(&self.mat, v)
    }

    pub fn apply_q(&self, v: &[Q64]) -> Vec<Q64> {
        self.mat
            .iter()
            .map(|row| row.iter().zip(v).map(|(&a, x)| Q64::from_integer(a) * x).sum())
            .collect()
    }

    /// Action on cocharacter coordinates: `<lambda, w.mu> = <w^{-1}.lambda, mu>`,
    /// so the matrix on the dual side is the inverse transpose; for orthogonal
    /// integer actions this is obtained by transposing the inverse matrix.
    pub fn apply_cochar_q(&self, inv: &WeylElement, v: &[Q64]) -> Vec<Q64> {
        // w acts on coweights by the transpose of the inverse character matrix
        let m = &inv.mat;
        let n = v.len();
        (0..n)
            .map(|i| (0..n).map(|j| Q64::from_integer(m[j][i]) * v[j]).sum())
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.length == 0
    }
}

/// The full Weyl group with multiplication support.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    pub elements: Vec<WeylElement>,
    pub longest: usize,
    /// index of w^{-1} for each element
    pub inverse: Vec<usize>,
}

impl WeylGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn longest_element(&self) -> &WeylElement {
        &self.elements[self.longest]
    }

    pub fn inverse_of(&self, i: usize) -> &WeylElement {
        &self.elements[self.inverse[i]]
    }
}

/// The center of the chosen group form, realized as torus points whose
/// coordinates are roots of unity; each element is stored as a vector of
/// rational angles (fractions of a full turn).
#[derive(Clone, Debug)]
pub struct CenterGroup {
    pub elements: Vec<Vec<Q64>>,
}

impl CenterGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Group law: componentwise addition of angles mod 1.
    pub fn mul(&self, a: &[Q64], b: &[Q64]) -> Vec<Q64> {
        a.iter().zip(b).map(|(x, y)| normalize_angle(*x + *y)).collect()
    }

    /// Exact character evaluation: the angle of `x^lambda`.
    pub fn eval_angle(x: &[Q64], lambda: &[i64]) -> Q64 {
        let mut s = Q64::zero();
        for (t, &l) in x.iter().zip(lambda) {
            s += *t * Q64::from_integer(l);
        }
        normalize_angle(s)
    }
}

pub fn normalize_angle(a: Q64) -> Q64 {
    let one = Q64::from_integer(1);
    let mut x = a;
    while x < Q64::zero() {
        x += one;
    }
    while x >= one {
        x -= one;
    }
    x
}

fn mat_vec_i64(m: &[Vec<i64>], v: &[i64]) -> LatVec {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

fn mat_mul_i64(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
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

struct TypeData {
    simple_roots: Vec<LatVec>,
    gram: Vec<Vec<Q64>>,
}

fn q(n: i64, d: i64) -> Q64 {
    Q64::new(n, d)
}

fn qi(n: i64) -> Q64 {
    Q64::from_integer(n)
}

/// Per-type, per-lattice coordinates.  See the module doc for the G2 choice.
fn type_data(group: GroupType, lattice: Lattice) -> TypeData {
    use GroupType::*;
    use Lattice::*;
    match (group, lattice) {
        (A1, Adjoint) => TypeData {
            simple_roots: vec![vec![1]],
            gram: vec![vec![qi(2)]],
        },
        (A1, SimplyConnected) => TypeData {
            simple_roots: vec![vec![2]],
            gram: vec![vec![q(1, 2)]],
        },
        (A1xA1, Adjoint) => TypeData {
            simple_roots: vec![vec![1, 0], vec![0, 1]],
            gram: vec![vec![qi(2), qi(0)], vec![qi(0), qi(2)]],
        },
        (A1xA1, SimplyConnected) => TypeData {
            simple_roots: vec![vec![2, 0], vec![0, 2]],
            gram: vec![vec![q(1, 2), qi(0)], vec![qi(0), q(1, 2)]],
        },
        (A2, Adjoint) => TypeData {
            simple_roots: vec![vec![1, 0], vec![0, 1]],
            gram: vec![vec![qi(2), qi(-1)], vec![qi(-1), qi(2)]],
        },
        (A2, SimplyConnected) => TypeData {
            // coordinates in the fundamental-weight basis
            simple_roots: vec![vec![2, -1], vec![-1, 2]],
            gram: vec![vec![q(2, 3), q(1, 3)], vec![q(1, 3), q(2, 3)]],
        },
        // B2: orthogonal coordinates e1, e2; alpha1 = e1 - e2 (long), alpha2 = e2 (short)
        (B2, Adjoint) => TypeData {
            simple_roots: vec![vec![1, -1], vec![0, 1]],
            gram: vec![vec![qi(1), qi(0)], vec![qi(0), qi(1)]],
        },
        (B2, SimplyConnected) => TypeData {
            // basis {e1, (e1+e2)/2}
            simple_roots: vec![vec![2, -2], vec![-1, 2]],
            gram: vec![vec![qi(1), q(1, 2)], vec![q(1, 2), q(1, 2)]],
        },
        // C2: alpha1 = e1 - e2 (short, norm 2), alpha2 = 2 e2 (long, norm 4)
        (C2, SimplyConnected) => TypeData {
            simple_roots: vec![vec![1, -1], vec![0, 2]],
            gram: vec![vec![qi(1), qi(0)], vec![qi(0), qi(1)]],
        },
        (C2, Adjoint) => TypeData {
            // basis of the root lattice: {e1 - e2, 2 e2}
            simple_roots: vec![vec![1, 0], vec![0, 1]],
            gram: vec![vec![qi(2), qi(-2)], vec![qi(-2), qi(4)]],
        },
        // G2: torus coordinates of GL(2) = centralizer of the subregular
        // characteristic; short simple (1,-1), long simple (-1,2).
        (G2, _) => TypeData {
            simple_roots: vec![vec![1, -1], vec![-1, 2]],
            gram: vec![vec![qi(2), qi(1)], vec![qi(1), qi(2)]],
        },
    }
}

fn gram_apply(gram: &[Vec<Q64>], v: &[i64]) -> Vec<Q64> {
    gram.iter()
        .map(|row| row.iter().zip(v).map(|(g, &x)| *g * qi(x)).sum())
        .collect()
}

fn gram_pair(gram: &[Vec<Q64>], a: &[i64], b: &[i64]) -> Q64 {
    let gb = gram_apply(gram, b);
    a.iter().zip(&gb).map(|(&x, y)| qi(x) * y).sum()
}

/// Coroot of `alpha` as an integer functional in the dual basis.
fn coroot_of(gram: &[Vec<Q64>], alpha: &[i64]) -> Result<LatVec, RootError> {
    let norm = gram_pair(gram, alpha, alpha);
    let ga = gram_apply(gram, alpha);
    let two = qi(2);
    let mut out = Vec::with_capacity(alpha.len());
    for x in &ga {
        let v = two * *x / norm;
        if !v.is_integer() {
            return Err(RootError::Inconsistent(format!(
                "coroot of {alpha:?} not integral on this lattice"
            )));
        }
        out.push(v.to_integer());
    }
    Ok(out)
}

pub fn pair(lambda: &[i64], mu: &[i64]) -> i64 {
    lambda.iter().zip(mu).map(|(a, b)| a * b).sum()
}

pub fn pair_q(lambda: &[i64], mu: &[Q64]) -> Q64 {
    lambda.iter().zip(mu).map(|(&a, b)| qi(a) * b).sum()
}

/// Build the root datum for a supported type and lattice choice.
pub fn build_root_system(group: GroupType, lattice: Lattice) -> Result<RootDatum, RootError> {
    let td = type_data(group, lattice);
    let rank = td.simple_roots.len();
    let gram = td.gram;
    let simple_roots = td.simple_roots;

    let mut simple_coroots = Vec::with_capacity(rank);
    for a in &simple_roots {
        simple_coroots.push(coroot_of(&gram, a)?);
    }

    let mut cartan = vec![vec![0i64; rank]; rank];
    for i in 0..rank {
        for j in 0..rank {
            cartan[i][j] = pair(&simple_roots[j], &simple_coroots[i]);
        }
    }

    // all roots: closure of the simples under simple reflections
    let mut all: Vec<LatVec> = Vec::new();
    let mut queue: VecDeque<LatVec> = simple_roots.iter().cloned().collect();
    while let Some(b) = queue.pop_front() {
        if all.contains(&b) {
            continue;
        }
        all.push(b.clone());
        for i in 0..rank {
            let k = pair(&b, &simple_coroots[i]);
            let mut img = b.clone();
            for (t, &s) in img.iter_mut().zip(&simple_roots[i]) {
                *t -= k * s;
            }
            if !all.contains(&img) {
                queue.push_back(img);
            }
        }
        let neg: LatVec = b.iter().map(|x| -x).collect();
        if !all.contains(&neg) {
            queue.push_back(neg);
        }
    }

    // expansion in simple roots decides positivity and heights
    let smat = crate::ratlin::Matr::from_cols(
        simple_roots
            .iter()
            .map(|v| v.iter().map(|&x| crate::ratlin::ri(x)).collect())
            .collect(),
    );
    let mut positive: Vec<(i64, LatVec)> = Vec::new();
    for b in &all {
        let bv: Vec<crate::Rat> = b.iter().map(|&x| crate::ratlin::ri(x)).collect();
        let coeffs = smat
            .solve(&bv)
            .ok_or_else(|| RootError::Inconsistent("root outside simple-root span".into()))?;
        let mut ints = Vec::with_capacity(rank);
        for c in &coeffs {
            if !c.is_integer() {
                return Err(RootError::Inconsistent("non-integral root expansion".into()));
            }
            ints.push(
                num_traits::ToPrimitive::to_i64(&c.to_integer())
                    .ok_or_else(|| RootError::Inconsistent("overflow".into()))?,
            );
        }
        if ints.iter().all(|&c| c >= 0) && ints.iter().any(|&c| c > 0) {
            positive.push((ints.iter().sum(), b.clone()));
        }
    }
    positive.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    let heights: Vec<i64> = positive.iter().map(|(h, _)| *h).collect();
    let positive_roots: Vec<LatVec> = positive.into_iter().map(|(_, r)| r).collect();

    let mut positive_coroots = Vec::with_capacity(positive_roots.len());
    for a in &positive_roots {
        positive_coroots.push(coroot_of(&gram, a)?);
    }

    let half = q(1, 2);
    let mut rho = vec![Q64::zero(); rank];
    for a in &positive_roots {
        for (t, &x) in rho.iter_mut().zip(a) {
            *t += half * qi(x);
        }
    }
    let mut rho_check = vec![Q64::zero(); rank];
    for c in &positive_coroots {
        for (t, &x) in rho_check.iter_mut().zip(c) {
            *t += half * qi(x);
        }
    }

    let exponents = exponents_from_heights(&heights, rank)?;

    Ok(RootDatum {
        group,
        lattice,
        rank,
        cartan,
        simple_roots,
        positive_roots,
        simple_coroots,
        positive_coroots,
        gram,
        heights,
        exponents,
        rho,
        rho_check,
    })
}

impl RootDatum {
    /// Index of a positive root given its coordinates.
    pub fn positive_index(&self, root: &[i64]) -> Option<usize> {
        self.positive_roots.iter().position(|r| r == root)
    }

    /// All roots: positives followed by their negatives, index-aligned.
    pub fn all_roots(&self) -> Vec<LatVec> {
        let mut v = self.positive_roots.clone();
        v.extend(self.positive_roots.iter().map(|r| r.iter().map(|x| -x).collect::<Vec<_>>()));
        v
    }

    pub fn n_positive(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn height_of(&self, root: &[i64]) -> Option<i64> {
        // works for negatives too: ht(-a) = -ht(a)
        if let Some(i) = self.positive_index(root) {
            return Some(self.heights[i]);
        }
        let neg: LatVec = root.iter().map(|x| -x).collect();
        self.positive_index(&neg).map(|i| -self.heights[i])
    }

    /// `<root, rho_check>` as an exact rational; equals the height on roots.
    pub fn pair_rho_check(&self, lambda: &[i64]) -> Q64 {
        pair_q(lambda, &self.rho_check)
    }

    pub fn is_dominant_coweight(&self, mu: &[Q64]) -> bool {
        self.simple_roots.iter().all(|a| pair_q(a, mu) >= Q64::zero())
    }

    /// Simple reflection matrix acting on character coordinates.
    pub fn simple_reflection(&self, i: usize) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut m = vec![vec![0i64; n]; n];
        for j in 0..n {
            m[j][j] = 1;
        }
        // s_i(lambda) = lambda - <lambda, alpha_i^vee> alpha_i
        for j in 0..n {
            for k in 0..n {
                m[k][j] -= self.simple_coroots[i][j] * self.simple_roots[i][k];
            }
        }
        m
    }

    /// Enumerate the Weyl group by closure of the simple reflections.
    pub fn weyl_group(&self) -> WeylGroup {
        let n = self.rank;
        let gens: Vec<Vec<Vec<i64>>> = (0..n).map(|i| self.simple_reflection(i)).collect();
        let mut elements: Vec<WeylElement> = Vec::new();
        let ident = WeylElement {
            mat: {
                let mut m = vec![vec![0i64; n]; n];
                for i in 0..n {
                    m[i][i] = 1;
                }
                m
            },
            word: vec![],
            length: 0,
        };
        let mut queue = VecDeque::new();
        queue.push_back(ident);
        while let Some(w) = queue.pop_front() {
            if elements.iter().any(|e| e.mat == w.mat) {
                continue;
            }
            for (i, g) in gens.iter().enumerate() {
                // right multiplication by s_i: w * s_i acts by w.mat * g
                let mat = mat_mul_i64(&w.mat, g);
                if !elements.iter().any(|e| e.mat == mat) {
                    let mut word = w.word.clone();
                    word.push(i);
                    queue.push_back(WeylElement { mat, word, length: 0 });
                }
            }
            elements.push(w);
        }
        // lengths = inversion counts; BFS found shortest words, so they agree
        for e in elements.iter_mut() {
            e.length = self.inversions(e).len();
            debug_assert_eq!(e.length, e.word.len());
        }
        elements.sort_by_key(|e| (e.length, e.word.clone()));
        let longest = elements
            .iter()
            .enumerate()
            .max_by_key(|(_, e)| e.length)
            .map(|(i, _)| i)
            .unwrap();
        let inverse: Vec<usize> = elements
            .iter()
            .map(|e| {
                let inv_mat = invert_unimodular(&e.mat);
                elements.iter().position(|f| f.mat == inv_mat).unwrap()
            })
            .collect();
        WeylGroup { elements, longest, inverse }
    }

    /// Positive roots sent to negatives by `w^{-1}`... no: by `w` itself.
    pub fn inversions(&self, w: &WeylElement) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, a) in self.positive_roots.iter().enumerate() {
            let img = w.apply(a);
            if self.is_negative(&img) {
                out.push(i);
            }
        }
        out
    }

    pub fn is_negative(&self, root: &[i64]) -> bool {
        let neg: LatVec = root.iter().map(|x| -x).collect();
        self.positive_index(&neg).is_some()
    }

    /// Center of the group form: all torus points with `x^alpha = 1` for
    /// every root, enumerated exactly as rational angle vectors.
    pub fn center(&self) -> CenterGroup {
        let n = self.rank;
        // solve S^T theta in Z^n where columns of S are the simple roots
        let st: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| self.simple_roots[i][j]).collect())
            .collect();
        // note: st[i][j] = (alpha_i)_j, i.e. rows are the simple roots
        let (u, d, v) = smith_normal_form(&st);
        let _ = u;
        let mut elems: Vec<Vec<Q64>> = Vec::new();
        let diag: Vec<i64> = (0..n).map(|i| d[i][i]).collect();
        let mut counters = vec![0i64; n];
        loop {
            // theta = V * (c_j / d_j)
            let frac: Vec<Q64> = (0..n)
                .map(|j| {
                    if diag[j] == 0 {
                        Q64::zero()
                    } else {
                        q(counters[j], diag[j])
                    }
                })
                .collect();
            let theta: Vec<Q64> = (0..n)
                .map(|i| {
                    let mut s = Q64::zero();
                    for j in 0..n {
                        s += qi(v[i][j]) * frac[j];
                    }
                    normalize_angle(s)
                })
                .collect();
            if !elems.contains(&theta) {
                elems.push(theta);
            }
            // increment counters
            let mut k = 0;
            loop {
                if k == n {
                    break;
                }
                counters[k] += 1;
                if counters[k] < diag[k].max(1) {
                    break;
                }
                counters[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
        elems.sort();
        // sanity: each element kills every root
        for x in &elems {
            for a in &self.positive_roots {
                debug_assert_eq!(CenterGroup::eval_angle(x, a), Q64::zero());
            }
        }
        CenterGroup { elements: elems }
    }

    /// JSON-friendly dump used by the CLI `roots` subcommand.
    pub fn describe(&self) -> RootSystemDescription {
        RootSystemDescription {
            group: self.group.label().to_string(),
            lattice: match self.lattice {
                Lattice::Adjoint => "adjoint".into(),
                Lattice::SimplyConnected => "simply_connected".into(),
            },
            rank: self.rank,
            cartan_matrix: self.cartan.clone(),
            simple_roots: self.simple_roots.clone(),
            positive_roots: self.positive_roots.clone(),
            coroots: self.positive_coroots.clone(),
            heights: self.heights.clone(),
            exponents: self.exponents.clone(),
            rho: self.rho.iter().map(|x| x.to_string()).collect(),
            rho_check: self.rho_check.iter().map(|x| x.to_string()).collect(),
            center_order: self.center().order(),
        }
    }
}

#[derive(Serialize)]
pub struct RootSystemDescription {
    pub group: String,
    pub lattice: String,
    pub rank: usize,
    pub cartan_matrix: Vec<Vec<i64>>,
    pub simple_roots: Vec<LatVec>,
    pub positive_roots: Vec<LatVec>,
    pub coroots: Vec<LatVec>,
    pub heights: Vec<i64>,
    pub exponents: Vec<i64>,
    pub rho: Vec<String>,
    pub rho_check: Vec<String>,
    pub center_order: usize,
}

fn invert_unimodular(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = m.len();
    let mat = crate::ratlin::Matr::from_rows(
        m.iter()
            .map(|row| row.iter().map(|&x| crate::ratlin::ri(x)).collect())
            .collect(),
    );
    let mut inv = vec![vec![0i64; n]; n];
    for j in 0..n {
        let mut e = vec![crate::ratlin::rz(); n];
        e[j] = crate::ratlin::ri(1);
        let col = mat.solve(&e).expect("invertible");
        for i in 0..n {
            assert!(col[i].is_integer());
            inv[i][j] = num_traits::ToPrimitive::to_i64(&col[i].to_integer()).unwrap();
        }
    }
    inv
}

/// Exponents from the multiset of positive-root heights.
///
/// If `c_k` counts positive roots of height `k`, the exponent `m` occurs with
/// multiplicity `c_m - c_{m+1}`; this is exactly what makes
/// `(1 - q^{-1}) sum_{a>0} q^{ht(a)} = sum_i q^{m_i} - r` an identity of
/// Laurent polynomials, which we verify in integer arithmetic.
pub fn exponents_from_heights(heights: &[i64], rank: usize) -> Result<Vec<i64>, RootError> {
    let mut counts: BTreeMap<i64, i64> = BTreeMap::new();
    for &h in heights {
        *counts.entry(h).or_insert(0) += 1;
    }
    let max_h = counts.keys().max().copied().unwrap_or(0);
    let mut exps = Vec::new();
    for m in 1..=max_h {
        let cm = counts.get(&m).copied().unwrap_or(0);
        let cm1 = counts.get(&(m + 1)).copied().unwrap_or(0);
        if cm < cm1 {
            return Err(RootError::Inconsistent("height multiset not unimodal".into()));
        }
        for _ in 0..(cm - cm1) {
            exps.push(m);
        }
    }
    if exps.len() != rank {
        return Err(RootError::Inconsistent(format!(
            "expected {rank} exponents, found {}",
            exps.len()
        )));
    }
    // exact Laurent-polynomial identity check: (1 - q^{-1}) sum q^{ht} == sum q^{m_i} - r
    let mut lhs: BTreeMap<i64, i64> = BTreeMap::new();
    for &h in heights {
        *lhs.entry(h).or_insert(0) += 1;
        *lhs.entry(h - 1).or_insert(0) -= 1;
    }
    let mut rhs: BTreeMap<i64, i64> = BTreeMap::new();
    for &m in &exps {
        *rhs.entry(m).or_insert(0) += 1;
    }
    *rhs.entry(0).or_insert(0) -= rank as i64;
    lhs.retain(|_, v| *v != 0);
    rhs.retain(|_, v| *v != 0);
    if lhs != rhs {
        return Err(RootError::Inconsistent("height/exponent identity failed".into()));
    }
    Ok(exps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rd(g: GroupType, l: Lattice) -> RootDatum {
        build_root_system(g, l).unwrap()
    }

    #[test]
    fn a1_simply_connected_basics() {
        let d = rd(GroupType::A1, Lattice::SimplyConnected);
        assert_eq!(d.positive_roots.len(), 1);
        assert_eq!(d.exponents, vec![1]);
        assert_eq!(d.rho_check, vec![q(1, 2)]);
    }

    #[test]
    fn g2_positive_roots_and_norms() {
        let d = rd(GroupType::G2, Lattice::Adjoint);
        assert_eq!(d.positive_roots.len(), 6);
        let mut hs = d.heights.clone();
        hs.sort();
        assert_eq!(hs, vec![1, 1, 2, 3, 4, 5]);
        assert_eq!(d.exponents, vec![1, 5]);
        for a in &d.positive_roots {
            let n = gram_pair(&d.gram, a, a);
            assert!(n == qi(2) || n == qi(6), "norm {n} of {a:?}");
        }
        // trivial center for both forms
        assert_eq!(d.center().order(), 1);
        assert_eq!(rd(GroupType::G2, Lattice::SimplyConnected).center().order(), 1);
    }

    #[test]
    fn g2_subregular_coordinates_match_gl2_torus() {
        // the height-3 root is (1,0) and the height-2 root is (0,1); the
        // highest root is (1,1); the grading-two roots pair to 2 with (2,2)
        let d = rd(GroupType::G2, Lattice::Adjoint);
        assert!(d.positive_index(&[1, 0]).is_some());
        assert!(d.positive_index(&[0, 1]).is_some());
        assert!(d.positive_index(&[1, 1]).is_some());
        let h = vec![qi(2), qi(2)];
        let grading_two: Vec<_> = d
            .positive_roots
            .iter()
            .filter(|a| pair_q(a, &h) == qi(2))
            .collect();
        assert_eq!(grading_two.len(), 4);
    }

    #[test]
    fn a2_simply_connected_center_has_order_three() {
        let d = rd(GroupType::A2, Lattice::SimplyConnected);
        let c = d.center();
        assert_eq!(c.order(), 3);
        // closed under the group law
        for a in &c.elements {
            for b in &c.elements {
                let ab = c.mul(a, b);
                assert!(c.elements.contains(&ab));
            }
        }
        assert_eq!(rd(GroupType::A2, Lattice::Adjoint).center().order(), 1);
    }

    #[test]
    fn a1_center_per_lattice() {
        assert_eq!(rd(GroupType::A1, Lattice::Adjoint).center().order(), 1);
        let c = rd(GroupType::A1, Lattice::SimplyConnected).center();
        assert_eq!(c.order(), 2);
        // the nontrivial element negates the fundamental-coweight coordinate
        assert!(c.elements.contains(&vec![q(1, 2)]));
    }

    #[test]
    fn weyl_group_orders() {
        assert_eq!(rd(GroupType::A1, Lattice::Adjoint).weyl_group().order(), 2);
        assert_eq!(rd(GroupType::A1xA1, Lattice::Adjoint).weyl_group().order(), 4);
        assert_eq!(rd(GroupType::A2, Lattice::SimplyConnected).weyl_group().order(), 6);
        assert_eq!(rd(GroupType::B2, Lattice::Adjoint).weyl_group().order(), 8);
        assert_eq!(rd(GroupType::C2, Lattice::SimplyConnected).weyl_group().order(), 8);
        assert_eq!(rd(GroupType::G2, Lattice::Adjoint).weyl_group().order(), 12);
    }

    #[test]
    fn longest_element_properties() {
        for g in [GroupType::A1, GroupType::A2, GroupType::B2, GroupType::G2] {
            let d = rd(g, Lattice::Adjoint);
            let w = d.weyl_group();
            let w0 = w.longest_element();
            assert_eq!(w0.length, d.positive_roots.len());
            // w0^2 = 1
            let sq = mat_mul_i64(&w0.mat, &w0.mat);
            let ident: Vec<Vec<i64>> = (0..d.rank)
                .map(|i| (0..d.rank).map(|j| i64::from(i == j)).collect())
                .collect();
            assert_eq!(sq, ident);
            // w0 sends rho_check to -rho_check
            let winv = w.inverse_of(w.longest);
            let img = w0.apply_cochar_q(winv, &d.rho_check);
            let neg: Vec<Q64> = d.rho_check.iter().map(|x| -*x).collect();
            assert_eq!(img, neg);
            // w0 maps positives to negatives bijectively
            for a in &d.positive_roots {
                assert!(d.is_negative(&w0.apply(a)));
            }
        }
    }

    #[test]
    fn word_length_equals_inversion_count() {
        let d = rd(GroupType::G2, Lattice::Adjoint);
        let w = d.weyl_group();
        for e in &w.elements {
            assert_eq!(e.word.len(), d.inversions(e).len());
        }
        // a2: longest element has length 3
        let a2 = rd(GroupType::A2, Lattice::Adjoint);
        assert_eq!(a2.weyl_group().longest_element().length, 3);
    }

    #[test]
    fn exponents_by_type() {
        assert_eq!(rd(GroupType::B2, Lattice::Adjoint).exponents, vec![1, 3]);
        assert_eq!(rd(GroupType::C2, Lattice::SimplyConnected).exponents, vec![1, 3]);
        assert_eq!(rd(GroupType::A2, Lattice::Adjoint).exponents, vec![1, 2]);
        assert_eq!(rd(GroupType::A1xA1, Lattice::SimplyConnected).exponents, vec![1, 1]);
        // number of positive roots equals the sum of the exponents
        for g in [GroupType::A1, GroupType::A1xA1, GroupType::A2, GroupType::B2, GroupType::G2] {
            let d = rd(g, Lattice::Adjoint);
            let s: i64 = d.exponents.iter().sum();
            assert_eq!(s as usize, d.positive_roots.len());
        }
    }

    #[test]
    fn cartan_matrix_reproduced_by_pairings() {
        for (g, l) in [
            (GroupType::A2, Lattice::SimplyConnected),
            (GroupType::B2, Lattice::SimplyConnected),
            (GroupType::G2, Lattice::Adjoint),
        ] {
            let d = rd(g, l);
            for i in 0..d.rank {
                for j in 0..d.rank {
                    assert_eq!(d.cartan[i][j], pair(&d.simple_roots[j], &d.simple_coroots[i]));
                }
                assert_eq!(d.cartan[i][i], 2);
            }
        }
    }

    #[test]
    fn unsupported_type_is_an_error() {
        assert!(GroupType::parse("E8").is_err());
        assert!(GroupType::parse("F4").is_err());
    }

    #[test]
    fn heights_equal_rho_check_pairings() {
        let d = rd(GroupType::G2, Lattice::SimplyConnected);
        for (i, a) in d.positive_roots.iter().enumerate() {
            assert_eq!(pair_q(a, &d.rho_check), qi(d.heights[i]));
        }
    }
}
