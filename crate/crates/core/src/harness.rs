//! Verification suites, configuration, and deterministic reports.
//!
//! Every suite produces a [`VerificationReport`]: one record per checked
//! case with both sides, absolute and relative errors, the pinned tolerance
//! and a pass flag.  Reports are deterministic for a fixed configuration
//! (fixed node counts, offsets and seeds; no unordered iteration), and each
//! case names the identity it checks through a stable registry key so that
//! failures trace back to a formula without grepping numbers.

use crate::genus::{check_hypotheses, function_field_genus, EvalContext, Genus, Mode};
use crate::laurent::{LaurentPolynomial, TorusPoint};
use crate::lie::{describe_orbit, OrbitRecord};
use crate::quad::ContourSpec;
use crate::rootsys::{build_root_system, GroupType, Lattice, RootDatum};
use crate::spectral::orbit::{
    orbit_density, orbit_density_symmetric, regular_orbit_closed_form, zero_orbit_reduced_form,
    OrbitEngine, ProjectorSign, SpectralScene,
};
use crate::spectral::{
    additive_dual, additive_eis_side, additive_spectral_side, bridge_pairing_value, eis_pairing,
    g2_additive_discrete_expansion, g2_subregular_closed_forms, standard_shift, AdditiveTestFn,
    PairingGrid,
};
use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::sync::Arc;
use std::time::Instant;

type C64 = Complex<f64>;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GenusSpec {
    Constant,
    OneMinusCOverX { c: f64 },
    /// `c = 0.8/q + 0.2`, the default admissible test genus
    CanonicalTest,
    FunctionField { alphas: Vec<[f64; 2]> },
    /// genus-one curve with Frobenius angle `theta`
    EllipticTest { theta: f64 },
    AdditiveAffine { c: f64 },
}

impl GenusSpec {
    pub fn build(&self, q: f64) -> Result<Genus<f64>, String> {
        match self {
            GenusSpec::Constant => Ok(Genus::constant_one()),
            GenusSpec::OneMinusCOverX { c } => Ok(Genus::one_minus_c_over_x(*c)),
            GenusSpec::CanonicalTest => Ok(Genus::one_minus_c_over_x(0.8 / q + 0.2)),
            GenusSpec::FunctionField { alphas } => {
                let a: Vec<C64> = alphas.iter().map(|p| C64::new(p[0], p[1])).collect();
                function_field_genus(&a, q).map_err(|e| e.to_string())
            }
            GenusSpec::EllipticTest { theta } => {
                let a = C64::from_polar(q.sqrt(), *theta);
                function_field_genus(&[a, a.conj()], q).map_err(|e| e.to_string())
            }
            GenusSpec::AdditiveAffine { c } => Ok(Genus::additive_affine(*c)),
        }
    }

    pub fn label(&self) -> String {
        match self {
            GenusSpec::Constant => "constant".into(),
            GenusSpec::OneMinusCOverX { c } => format!("one_minus_c_over_x(c={c})"),
            GenusSpec::CanonicalTest => "canonical_test".into(),
            GenusSpec::FunctionField { alphas } => format!("function_field(g={})", alphas.len()),
            GenusSpec::EllipticTest { theta } => format!("elliptic_test(theta={theta})"),
            GenusSpec::AdditiveAffine { c } => format!("additive_affine(c={c})"),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Config {
    pub group: String,
    pub lattice: String,
    pub q: f64,
    pub genus: GenusSpec,
    /// nodes per torus dimension for both sides
    pub nodes: usize,
    /// contour shift factor (times |q|) along the dominant direction
    pub shift_factor: f64,
    /// second shift factor for contour-independence checks
    pub shift_factor_alt: f64,
    pub seed: u64,
    pub n_random_functions: usize,
    pub trunc_height: f64,
    /// node phase offset in turns
    pub offset: f64,
    /// additive-mode genus parameter for the cohomology suite
    pub additive_c: f64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            group: "A1".into(),
            lattice: "simply_connected".into(),
            q: 1.7,
            genus: GenusSpec::CanonicalTest,
            nodes: 512,
            shift_factor: 1.6,
            shift_factor_alt: 2.3,
            seed: 20240917,
            n_random_functions: 20,
            trunc_height: 9.0,
            offset: crate::quad::GOLDEN_OFFSET,
            additive_c: 0.4,
        }
    }
}

impl Config {
    pub fn group_type(&self) -> Result<GroupType, String> {
        GroupType::parse(&self.group).map_err(|e| e.to_string())
    }

    pub fn lattice_choice(&self) -> Result<Lattice, String> {
        Lattice::parse(&self.lattice).map_err(|e| e.to_string())
    }

    pub fn root_datum(&self) -> Result<RootDatum, String> {
        build_root_system(self.group_type()?, self.lattice_choice()?).map_err(|e| e.to_string())
    }

    pub fn context(&self) -> Result<EvalContext<f64>, String> {
        let genus = self.genus.build(self.q)?;
        Ok(match genus.mode {
            Mode::Multiplicative => EvalContext::multiplicative(self.q, genus),
            Mode::Additive => EvalContext::additive(genus),
        })
    }

    pub fn scene(&self) -> Result<SpectralScene<f64>, String> {
        SpectralScene::new(self.root_datum()?, self.context()?).map_err(|e| e.to_string())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseRecord {
    pub name: String,
    /// stable registry key of the identity this case checks
    pub identity: String,
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    pub abs_err: f64,
    pub rel_err: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub runtime_ms: u128,
}

impl CaseRecord {
    pub fn compare(
        name: impl Into<String>,
        identity: &str,
        lhs: C64,
        rhs: C64,
        tolerance: f64,
        started: Instant,
    ) -> Self {
        let abs_err = (lhs - rhs).norm();
        let rel_err = abs_err / (1.0 + lhs.norm().max(rhs.norm()));
        CaseRecord {
            name: name.into(),
            identity: identity.into(),
            lhs: [lhs.re, lhs.im],
            rhs: [rhs.re, rhs.im],
            abs_err,
            rel_err,
            tolerance,
            passed: rel_err <= tolerance,
            runtime_ms: started.elapsed().as_millis(),
        }
    }

    pub fn flag(name: impl Into<String>, identity: &str, passed: bool, witness: f64) -> Self {
        CaseRecord {
            name: name.into(),
            identity: identity.into(),
            lhs: [witness, 0.0],
            rhs: [0.0, 0.0],
            abs_err: 0.0,
            rel_err: 0.0,
            tolerance: 0.0,
            passed,
            runtime_ms: 0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfigEcho {
    pub group: String,
    pub lattice: String,
    pub q: f64,
    pub genus: String,
    pub nodes: usize,
    pub shift_factor: f64,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub config: ConfigEcho,
    pub cases: Vec<CaseRecord>,
    pub passed: bool,
}

impl VerificationReport {
    pub fn new(suite: &str, cfg: &Config, mut cases: Vec<CaseRecord>) -> Self {
        cases.sort_by(|a, b| a.name.cmp(&b.name));
        let passed = cases.iter().all(|c| c.passed);
        VerificationReport {
            suite: suite.into(),
            config: ConfigEcho {
                group: cfg.group.clone(),
                lattice: cfg.lattice.clone(),
                q: cfg.q,
                genus: cfg.genus.label(),
                nodes: cfg.nodes,
                shift_factor: cfg.shift_factor,
                seed: cfg.seed,
            },
            cases,
            passed,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "suite,case,identity,lhs_re,lhs_im,rhs_re,rhs_im,abs_err,rel_err,tolerance,passed\n",
        );
        for c in &self.cases {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{}\n",
                self.suite,
                c.name,
                c.identity,
                c.lhs[0],
                c.lhs[1],
                c.rhs[0],
                c.rhs[1],
                c.abs_err,
                c.rel_err,
                c.tolerance,
                c.passed
            ));
        }
        out
    }

    pub fn human_table(&self) -> String {
        let mut out = format!(
            "suite {} [{} {} q={} genus={} nodes={}]\n",
            self.suite,
            self.config.group,
            self.config.lattice,
            self.config.q,
            self.config.genus,
            self.config.nodes
        );
        for c in &self.cases {
            out.push_str(&format!(
                "  {:<44} {}  rel {:.3e} (tol {:.1e})  [{}]\n",
                c.name,
                if c.passed { "pass" } else { "FAIL" },
                c.rel_err,
                c.tolerance,
                c.identity,
            ));
        }
        out.push_str(&format!(
            "  => {} ({} cases)\n",
            if self.passed { "PASS" } else { "FAIL" },
            self.cases.len()
        ));
        out
    }
}

/// Deterministic test-function basis: low-degree monomials followed by
/// seeded random Laurent polynomials.
pub fn test_function_basis(
    rank: usize,
    degree: i64,
    n_random: usize,
    seed: u64,
) -> Vec<LaurentPolynomial<f64>> {
    let mut out = Vec::new();
    out.push(LaurentPolynomial::one(rank));
    let mut exps: Vec<Vec<i64>> = Vec::new();
    if rank == 1 {
        for d in 1..=degree {
            exps.push(vec![d]);
            exps.push(vec![-d]);
        }
    } else {
        for d in 1..=degree {
            exps.push(vec![d, 0]);
            exps.push(vec![0, d]);
            exps.push(vec![d, -d]);
            exps.push(vec![-d, d.min(2)]);
        }
    }
    for e in exps {
        out.push(LaurentPolynomial::monomial(e, C64::new(1.0, 0.0)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..n_random {
        out.push(LaurentPolynomial::random(&mut rng, rank, 2, 4));
    }
    out
}

/// Deterministic f-pairs for the main identity suite.
pub fn test_pairs(
    rank: usize,
    n_pairs: usize,
    seed: u64,
) -> Vec<(LaurentPolynomial<f64>, LaurentPolynomial<f64>)> {
    let basis = test_function_basis(rank, 3, n_pairs, seed);
    let mut pairs = Vec::new();
    for i in 0..n_pairs {
        let f1 = basis[i % basis.len()].clone();
        let f2 = basis[(i * 7 + 3) % basis.len()].clone();
        pairs.push((f1, f2));
    }
    pairs
}

/// Scan the per-orbit evaluation sets for collisions between the evaluated
/// weight arguments at the quadrature nodes and the declared genus zeros.
pub fn collision_scan(scene: &SpectralScene<f64>, nodes: usize) -> Vec<String> {
    let mut hits = Vec::new();
    let ctx = &scene.ctx;
    let q = ctx.q.norm();
    let n = nodes.max(8) & !1usize;
    for rec in &scene.catalog.orbits {
        if rec.is_zero_orbit() || rec.incomplete_classes {
            continue;
        }
        let k = rec.t_phi.len();
        for (ci, class) in rec.classes.iter().enumerate() {
            for (&i, entries) in &rec.levels {
                for entry in entries {
                    // argument exponents that occur in the projector
                    // denominators, the slice factors and the centralizer
                    // factors of this weight line
                    for e in [i as f64 / 2.0 - 1.0, -1.0 - i as f64 / 2.0, i as f64 / 2.0] {
                        let radius = q.powf(e);
                        for z in &ctx.genus.zeros {
                            if (radius - z.norm()).abs() > 1e-6 {
                                continue;
                            }
                            // same modulus: check the node phases
                            let target = z.arg() / (2.0 * std::f64::consts::PI);
                            let base: f64 = entry.class_angles.get(ci).map_or(0.0, |a| {
                                *a.numer() as f64 / *a.denom() as f64
                            });
                            let mut min_dist = f64::INFINITY;
                            if k == 0 {
                                let d = circular_distance(base, target);
                                min_dist = min_dist.min(d);
                            } else {
                                for m in 0..n {
                                    let mut turns = base;
                                    for (j, w) in entry.t_weight.iter().enumerate() {
                                        let phi = m as f64 / n as f64
                                            + crate::quad::GOLDEN_OFFSET
                                                * ((j as f64 + 2.0).sqrt());
                                        turns += phi * (*w.numer() as f64 / *w.denom() as f64);
                                    }
                                    min_dist =
                                        min_dist.min(circular_distance(turns, target));
                                }
                            }
                            if min_dist * radius * 2.0 * std::f64::consts::PI < 1e-6 {
                                hits.push(format!(
                                    "orbit {} class {} level {i}: node argument within 1e-6 \
                                     of a genus zero at {z}",
                                    rec.label, class.name
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    hits
}

fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Main identity: the contour pairing against the orbit sum, one case per
/// test pair.
pub fn run_main_identity_suite(
    cfg: &Config,
    n_pairs: usize,
    tolerance: f64,
) -> Result<VerificationReport, String> {
    let rd = cfg.root_datum()?;
    let ctx = cfg.context()?;
    let scene = cfg.scene()?;
    let mut cases = Vec::new();
    for hit in collision_scan(&scene, cfg.nodes) {
        cases.push(CaseRecord::flag(format!("collision: {hit}"), "collision-scan", false, 0.0));
    }
    let shift = standard_shift(&rd, ctx.q, cfg.shift_factor);
    let grid = PairingGrid::new(&rd, &ctx, &shift, cfg.nodes, cfg.offset)
        .map_err(|root| format!("inadmissible contour at root {root:?}"))?;
    let mut engines = Vec::new();
    for rec in &scene.catalog.orbits {
        engines.push(OrbitEngine::new(&scene, rec, cfg.nodes).map_err(|e| e.to_string())?);
    }
    let pairs = test_pairs(rd.rank, n_pairs, cfg.seed);
    for (i, (f1, f2)) in pairs.iter().enumerate() {
        let started = Instant::now();
        let lhs = grid.evaluate(f1, f2);
        let mut rhs = C64::new(0.0, 0.0);
        for eng in &engines {
            rhs += eng.contribution(&scene, f1, f2).map_err(|e| e.to_string())?.value;
        }
        cases.push(CaseRecord::compare(
            format!("pair-{i:02}"),
            "pairing-equals-orbit-sum",
            lhs.value,
            rhs,
            tolerance,
            started,
        ));
    }
    Ok(VerificationReport::new("main", cfg, cases))
}

/// Exact and structural checks: lattice combinatorics, orbit invariants,
/// projector behavior, contour independence, density consistency.
pub fn run_structural_suite(cfg: &Config) -> Result<VerificationReport, String> {
    let rd = cfg.root_datum()?;
    let ctx = cfg.context()?;
    let scene = cfg.scene()?;
    let mut cases = Vec::new();

    {
        let started = Instant::now();
        let ok = crate::rootsys::exponents_from_heights(&rd.heights, rd.rank).is_ok();
        let mut rec = CaseRecord::flag("heights-exponents-exact", "heights-exponents", ok, 0.0);
        rec.runtime_ms = started.elapsed().as_millis();
        cases.push(rec);
    }
    {
        // rebuilding the catalog reruns every exact orbit invariant
        let started = Instant::now();
        let alg = crate::lie::build_lie_algebra(&rd).map_err(|e| e.to_string())?;
        let ok = crate::lie::orbit_catalog(&alg).is_ok();
        let mut rec = CaseRecord::flag(
            "orbit-invariants-exact",
            "slice-character-and-selfduality",
            ok,
            0.0,
        );
        rec.runtime_ms = started.elapsed().as_millis();
        cases.push(rec);
    }
    for rec in &scene.catalog.orbits {
        let expected: Option<usize> = if rec.is_zero_orbit() {
            Some(rec.fiber_cosets.len())
        } else if rec.label == "regular" {
            Some(1)
        } else {
            None
        };
        if let Some(n) = expected {
            cases.push(CaseRecord::flag(
                format!("weyl-support-{}", rec.label),
                "weyl-support-extremes",
                rec.weyl_support.len() == n,
                rec.weyl_support.len() as f64,
            ));
        }
    }
    {
        let started = Instant::now();
        let pairs = test_pairs(rd.rank, 2, cfg.seed);
        let (f1, f2) = &pairs[1.min(pairs.len() - 1)];
        let s1 = standard_shift(&rd, ctx.q, cfg.shift_factor);
        let s2 = standard_shift(&rd, ctx.q, cfg.shift_factor_alt);
        let a = eis_pairing(&rd, &ctx, f1, f2, &ContourSpec::torus(s1, cfg.nodes))
            .map_err(|r| format!("{r:?}"))?;
        let b = eis_pairing(&rd, &ctx, f1, f2, &ContourSpec::torus(s2, cfg.nodes))
            .map_err(|r| format!("{r:?}"))?;
        cases.push(CaseRecord::compare(
            "contour-shift-independence",
            "contour-independence",
            a.value,
            b.value,
            1e-10,
            started,
        ));
    }
    {
        let started = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x51ec);
        let f = LaurentPolynomial::random(&mut rng, rd.rank, 2, 3);
        let x = TorusPoint::new(
            (0..rd.rank)
                .map(|i| C64::from_polar(1.1 + 0.17 * i as f64, 0.41 + 0.73 * i as f64))
                .collect(),
        );
        let once = crate::spectral::langlands_projector(&scene, &f, &x);
        let ratios: Vec<C64> = rd
            .positive_roots
            .iter()
            .map(|a| crate::spectral::pairing::intertwining_ratio(&ctx, x.pow(a)))
            .collect();
        let mut twice = C64::new(0.0, 0.0);
        for i in 0..scene.weyl.order() {
            let w = &scene.weyl.elements[i];
            let winv = scene.weyl.inverse_of(i);
            let mut p = C64::new(1.0, 0.0);
            for ai in rd.inversions(winv) {
                p = p * ratios[ai];
            }
            twice =
                twice + p * crate::spectral::langlands_projector(&scene, &f, &x.apply_inverse(w));
        }
        twice /= scene.weyl.order() as f64;
        cases.push(CaseRecord::compare(
            "langlands-projector-idempotent",
            "projector-idempotency",
            twice,
            once,
            1e-10,
            started,
        ));
    }
    // density consistency: product form vs symmetric form on sampled points
    for rec in &scene.catalog.orbits {
        if rec.is_zero_orbit() || rec.incomplete_classes {
            continue;
        }
        let started = Instant::now();
        let k = rec.t_phi.len();
        let mut worst = (C64::new(0.0, 0.0), C64::new(0.0, 0.0), -1.0f64);
        for t in 0..100 {
            let phis: Vec<f64> = (0..k)
                .map(|j| 0.0137 + (t as f64) * 0.00973 + 0.31 * j as f64)
                .collect();
            for ci in 0..rec.classes.len() {
                let a = orbit_density(&ctx, rec, rd.rank, &phis, ci);
                let conv = crate::spectral::orbit::adjoint_scale_product(
                    &ctx, rec, rd.rank, &phis, ci,
                );
                let b = orbit_density_symmetric(&ctx, rec, rd.rank, &phis, ci) * conv * conv;
                let rel = (a - b).norm() / (1.0 + a.norm());
                if rel > worst.2 {
                    worst = (a, b, rel);
                }
            }
        }
        cases.push(CaseRecord::compare(
            format!("density-consistency-{}", rec.label),
            "density-two-forms",
            worst.0,
            worst.1,
            1e-9,
            started,
        ));
    }
    // restricted projector equals the full sum on the evaluation set
    for rec in &scene.catalog.orbits {
        if rec.is_zero_orbit() || rec.incomplete_classes {
            continue;
        }
        let started = Instant::now();
        let pairs = test_pairs(rd.rank, 1, cfg.seed);
        let f = &pairs[0].0;
        let half: Vec<crate::Q64> = rec
            .h_coweight
            .iter()
            .map(|x| *x / crate::Q64::from_integer(2))
            .collect();
        let mut coords = Vec::new();
        for i in 0..rd.rank {
            let mut turns = 0.0;
            for (j, tau) in rec.t_phi.iter().enumerate() {
                turns += (0.2231 + 0.11 * j as f64)
                    * (*tau[i].numer() as f64 / *tau[i].denom() as f64);
            }
            let base = crate::spectral::cpow(
                ctx.q,
                *half[i].numer() as f64 / *half[i].denom() as f64,
            );
            coords.push(base * C64::from_polar(1.0, 2.0 * std::f64::consts::PI * turns));
        }
        let x = TorusPoint::new(coords);
        let restricted = scene.restricted_elements(rec, ProjectorSign::Plus);
        let a =
            crate::spectral::restrict_projector(&scene, &restricted, ProjectorSign::Plus, f, &x)
                .map_err(|e| e.to_string())?;
        let b = crate::spectral::projector_value(&scene, ProjectorSign::Plus, f, &x)
            .map_err(|e| e.to_string())?;
        cases.push(CaseRecord::compare(
            format!("weyl-restriction-{}", rec.label),
            "projector-weyl-restriction",
            a,
            b,
            1e-9,
            started,
        ));
    }
    Ok(VerificationReport::new("structural", cfg, cases))
}

/// Regression of the closed forms: the subregular class values in type G2,
/// the regular-orbit formula, the zero-orbit reduced form, and the residue
/// normalization of the scaled density.
pub fn run_g2_regression(cfg: &Config) -> Result<VerificationReport, String> {
    let rd = cfg.root_datum()?;
    let ctx = cfg.context()?;
    let scene = cfg.scene()?;
    let mut cases = Vec::new();

    {
        let started = Instant::now();
        let reg = scene
            .catalog
            .orbits
            .iter()
            .find(|o| o.label == "regular")
            .ok_or("no regular orbit")?;
        let pairs = test_pairs(rd.rank, 3, cfg.seed);
        let mut worst = (C64::new(0.0, 0.0), C64::new(0.0, 0.0), -1.0f64);
        for (f1, f2) in &pairs {
            let machine = crate::spectral::orbit_contribution(&scene, reg, f1, f2, 8)
                .map_err(|e| e.to_string())?
                .value;
            let closed = regular_orbit_closed_form(&scene, f1, f2);
            let rel = (machine - closed).norm() / (1.0 + closed.norm());
            if rel >= worst.2 {
                worst = (machine, closed, rel);
            }
        }
        cases.push(CaseRecord::compare(
            "regular-orbit-closed-form",
            "regular-orbit-residues",
            worst.0,
            worst.1,
            1e-10,
            started,
        ));
    }
    {
        // residue of the intertwining density beyond the unit circle: the
        // normalized residue of Z at the scaling parameter equals one
        let started = Instant::now();
        let little_z = ctx.little_z();
        let n = 256;
        let radius = 0.02 * ctx.q.norm();
        let mut s = C64::new(0.0, 0.0);
        for k in 0..n {
            let t = 2.0 * std::f64::consts::PI * (k as f64 + 0.37) / n as f64;
            let u = ctx.q + C64::from_polar(radius, t);
            s += ctx.z_of(u) * (u - ctx.q) / u;
        }
        let res = s / n as f64 * ctx.q; // residue of Z(u) du at u = q ... per u
        cases.push(CaseRecord::compare(
            "density-residue-normalization",
            "residue-normalization",
            res / (little_z * ctx.q),
            C64::new(1.0, 0.0),
            1e-10,
            started,
        ));
    }
    if rd.group == GroupType::G2 {
        let sub = scene
            .catalog
            .orbits
            .iter()
            .find(|o| o.label == "subregular")
            .ok_or("no subregular orbit")?;
        let mut fs = vec![
            LaurentPolynomial::one(2),
            LaurentPolynomial::monomial(vec![1, 0], C64::new(1.0, 0.0)),
            LaurentPolynomial::monomial(vec![1, -1], C64::new(0.7, 0.4)),
            LaurentPolynomial::monomial(vec![0, 2], C64::new(0.4, -0.1)),
        ];
        let mut mixed = LaurentPolynomial::monomial(vec![2, 1], C64::new(0.3, -0.2));
        mixed.add_term(vec![0, 1], C64::new(1.0, 0.5));
        fs.push(mixed);
        for (i, f) in fs.iter().enumerate() {
            let started = Instant::now();
            let closed: C64 = g2_subregular_closed_forms(&ctx, f).iter().sum();
            let machine = crate::spectral::orbit_contribution(&scene, sub, f, &f.dual_star(), 8)
                .map_err(|e| e.to_string())?
                .value;
            cases.push(CaseRecord::compare(
                format!("subregular-closed-form-f{i}"),
                "subregular-class-values",
                machine,
                closed,
                1e-9,
                started,
            ));
        }
        let started = Instant::now();
        let emitted = g2_additive_discrete_expansion(&scene).map_err(|e| e.to_string())?;
        let ok = emitted == crate::spectral::g2::g2_discrete_template();
        let mut rec = CaseRecord::flag(
            "discrete-expansion-template",
            "additive-subregular-expansion",
            ok,
            0.0,
        );
        rec.runtime_ms = started.elapsed().as_millis();
        cases.push(rec);
    }
    {
        let started = Instant::now();
        let zero = &scene.catalog.orbits[0];
        let pairs = test_pairs(rd.rank, 2, cfg.seed);
        let (f1, f2) = &pairs[1.min(pairs.len() - 1)];
        let nodes = cfg.nodes;
        let machine = crate::spectral::orbit_contribution(&scene, zero, f1, f2, nodes)
            .map_err(|e| e.to_string())?
            .value;
        let reduced = zero_orbit_reduced_form(&scene, f1, f2, nodes).map_err(|e| e.to_string())?;
        cases.push(CaseRecord::compare(
            "zero-orbit-reduced-form",
            "zero-orbit-langlands-form",
            machine,
            reduced,
            1e-9,
            started,
        ));
    }
    {
        let started = Instant::now();
        let zero = &scene.catalog.orbits[0];
        let pairs = test_pairs(rd.rank, 2, cfg.seed);
        let (f1, f2) = &pairs[0];
        let nodes = cfg.nodes;
        let short = crate::spectral::orbit_contribution(&scene, zero, f1, f2, nodes)
            .map_err(|e| e.to_string())?
            .value;
        let dense = OrbitEngine::new_with(&scene, zero, nodes, true)
            .map_err(|e| e.to_string())?
            .contribution(&scene, f1, f2)
            .map_err(|e| e.to_string())?
            .value;
        cases.push(CaseRecord::compare(
            "zero-orbit-projector-form",
            "zero-orbit-two-forms",
            dense,
            short,
            1e-8,
            started,
        ));
    }
    Ok(VerificationReport::new("regression", cfg, cases))
}

/// Positivity of the Hermitian norm for seeded random functions.
pub fn run_positivity_suite(
    cfg: &Config,
    n_functions: usize,
) -> Result<VerificationReport, String> {
    let rd = cfg.root_datum()?;
    let scene = cfg.scene()?;
    let ctx = cfg.context()?;
    let hyp = check_hypotheses(&ctx);
    let mut cases = Vec::new();
    cases.push(CaseRecord::flag(
        "genus-hypotheses",
        "positivity-hypotheses",
        hyp.all_passed(),
        0.0,
    ));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e3779b9);
    let mut engines = Vec::new();
    for rec in &scene.catalog.orbits {
        engines.push((rec, OrbitEngine::new(&scene, rec, cfg.nodes).map_err(|e| e.to_string())?));
    }
    let mut min_total = f64::INFINITY;
    let mut max_im_rel = 0.0f64;
    let mut max_abs_form_dev = 0.0f64;
    let started = Instant::now();
    for _ in 0..n_functions {
        let f = LaurentPolynomial::random(&mut rng, rd.rank, 2, 4);
        let fstar = f.dual_star();
        let mut total = C64::new(0.0, 0.0);
        for (rec, eng) in &engines {
            let v = eng.contribution(&scene, &f, &fstar).map_err(|e| e.to_string())?.value;
            let imrel = v.im.abs() / (1.0 + v.norm());
            if imrel > max_im_rel {
                max_im_rel = imrel;
            }
            total += v;
            if !rec.is_zero_orbit() {
                let abs = eng.abs_form(&scene, &f).map_err(|e| e.to_string())?;
                let dev = (abs - v).norm() / (1.0 + v.norm());
                if dev > max_abs_form_dev {
                    max_abs_form_dev = dev;
                }
            }
        }
        if total.re < min_total {
            min_total = total.re;
        }
    }
    let mut rec = CaseRecord::flag(
        "hermitian-norms-nonnegative",
        "norm-positivity",
        min_total >= -1e-10,
        min_total,
    );
    rec.runtime_ms = started.elapsed().as_millis();
    cases.push(rec);
    cases.push(CaseRecord::flag(
        "per-orbit-imaginary-parts",
        "norm-positivity",
        max_im_rel <= 1e-10,
        max_im_rel,
    ));
    cases.push(CaseRecord::flag(
        "absolute-density-form-agrees",
        "norm-positivity",
        max_abs_form_dev <= 1e-9,
        max_abs_form_dev,
    ));
    Ok(VerificationReport::new("positivity", cfg, cases))
}

/// The additive identity and the degeneration bridge.
pub fn run_cohomology_suite(
    cfg: &Config,
    include_rank_two: bool,
) -> Result<VerificationReport, String> {
    let mut cases = Vec::new();
    let gt = cfg.group_type()?;
    let lat = cfg.lattice_choice()?;
    let rd = build_root_system(gt, lat).map_err(|e| e.to_string())?;
    let ctx = EvalContext::additive(Genus::additive_affine(cfg.additive_c));
    let scene = SpectralScene::new(rd.clone(), ctx).map_err(|e| e.to_string())?;
    let f: AdditiveTestFn<f64> = Arc::new(|s: &[C64]| {
        let sum_sq: C64 = s.iter().map(|z| z * z).sum();
        (C64::new(1.0, 0.0) + sum_sq) * sum_sq.exp()
    });
    let fs = additive_dual(f.clone());
    if !(rd.rank == 1 || include_rank_two) {
        cases.push(CaseRecord::flag(
            "additive-identity-skipped (enable rank-two explicitly)",
            "vertical-line-identity",
            true,
            0.0,
        ));
    }
    if rd.rank == 1 || include_rank_two {
        let started = Instant::now();
        let nodes = if rd.rank == 1 { 700 } else { 220 };
        let lhs = additive_eis_side(&scene, &f, &fs, 1.3, nodes, cfg.trunc_height)
            .map_err(|e| e.to_string())?
            .value;
        let (_, rhs) = additive_spectral_side(&scene, &f, &fs, nodes, cfg.trunc_height)
            .map_err(|e| e.to_string())?;
        cases.push(CaseRecord::compare(
            "additive-identity",
            "vertical-line-identity",
            lhs,
            rhs,
            1e-8,
            started,
        ));
    }
    if rd.rank == 1 {
        let started = Instant::now();
        let target = additive_eis_side(&scene, &f, &fs, 1.3, 700, cfg.trunc_height)
            .map_err(|e| e.to_string())?
            .value;
        let mut errs = Vec::new();
        for delta in [0.1, 0.05, 0.025] {
            let q = 1.0 + delta;
            let bridge_ctx =
                EvalContext::multiplicative(q, Genus::bridge_affine(cfg.additive_c, q));
            let bridge_scene =
                SpectralScene::new(rd.clone(), bridge_ctx).map_err(|e| e.to_string())?;
            let v = bridge_pairing_value(&bridge_scene, &f, &fs, 1.3, 1600);
            errs.push((v / C64::new(q.ln() * q.ln(), 0.0) - target).norm());
        }
        let monotone = errs.windows(2).all(|w| w[1] < w[0]);
        let mut rec = CaseRecord::flag(
            "bridge-monotone-convergence",
            "mode-degeneration-bridge",
            monotone && errs[2] < 0.1,
            errs[2],
        );
        rec.runtime_ms = started.elapsed().as_millis();
        cases.push(rec);
    }
    Ok(VerificationReport::new("cohomology", cfg, cases))
}

/// Orbit and density tables for the `measure` subcommand.
#[derive(Serialize)]
pub struct MeasureReport {
    pub group: String,
    pub lattice: String,
    pub q: f64,
    pub genus: String,
    pub orbits: Vec<OrbitMeasure>,
}

#[derive(Serialize)]
pub struct OrbitMeasure {
    pub label: String,
    pub support: String,
    pub torus_dimension: usize,
    pub classes: Vec<String>,
    pub density_grid: Vec<DensitySample>,
}

#[derive(Serialize)]
pub struct DensitySample {
    pub class: String,
    pub phi: Vec<f64>,
    pub density: [f64; 2],
}

pub fn measure_report(cfg: &Config, grid: usize) -> Result<MeasureReport, String> {
    let rd = cfg.root_datum()?;
    let ctx = cfg.context()?;
    let scene = cfg.scene()?;
    let mut orbits = Vec::new();
    for rec in &scene.catalog.orbits {
        let k = rec.t_phi.len();
        let support = if rec.is_zero_orbit() {
            "compact torus".to_string()
        } else {
            format!(
                "q^(h/2) x classes {:?} x torus of dimension {k}",
                rec.classes.iter().map(|c| c.name.clone()).collect::<Vec<_>>()
            )
        };
        let mut samples = Vec::new();
        if !rec.is_zero_orbit() && !rec.incomplete_classes {
            for (ci, class) in rec.classes.iter().enumerate() {
                let points: Vec<Vec<f64>> = if k == 0 {
                    vec![vec![]]
                } else {
                    (0..grid).map(|m| vec![(m as f64 + 0.31) / grid as f64]).collect()
                };
                for phis in points {
                    let d = orbit_density(&ctx, rec, rd.rank, &phis, ci);
                    samples.push(DensitySample {
                        class: class.name.clone(),
                        phi: phis,
                        density: [d.re, d.im],
                    });
                }
            }
        }
        orbits.push(OrbitMeasure {
            label: rec.label.clone(),
            support,
            torus_dimension: k,
            classes: rec.classes.iter().map(|c| c.name.clone()).collect(),
            density_grid: samples,
        });
    }
    Ok(MeasureReport {
        group: cfg.group.clone(),
        lattice: cfg.lattice.clone(),
        q: cfg.q,
        genus: cfg.genus.label(),
        orbits,
    })
}

/// Orbit catalog dump for the `orbits` subcommand.
pub fn orbits_json(cfg: &Config) -> Result<String, String> {
    let rd = cfg.root_datum()?;
    let scene = cfg.scene()?;
    let descs: Vec<_> = scene
        .catalog
        .orbits
        .iter()
        .map(|rec: &OrbitRecord| describe_orbit(&rd, rec))
        .collect();
    serde_json::to_string_pretty(&descs).map_err(|e| e.to_string())
}

/// Bridge table for the `limit` subcommand.
#[derive(Serialize)]
pub struct LimitReport {
    pub deltas: Vec<f64>,
    pub rescaled_values: Vec<[f64; 2]>,
    pub additive_value: [f64; 2],
    pub errors: Vec<f64>,
    pub monotone: bool,
}

pub fn limit_report(cfg: &Config) -> Result<LimitReport, String> {
    let rd =
        build_root_system(cfg.group_type()?, cfg.lattice_choice()?).map_err(|e| e.to_string())?;
    if rd.rank != 1 {
        return Err("the degeneration table is computed for rank-one groups".into());
    }
    let ctx = EvalContext::additive(Genus::additive_affine(cfg.additive_c));
    let scene = SpectralScene::new(rd.clone(), ctx).map_err(|e| e.to_string())?;
    let f: AdditiveTestFn<f64> = Arc::new(|s: &[C64]| {
        let sum_sq: C64 = s.iter().map(|z| z * z).sum();
        sum_sq.exp()
    });
    let fs = additive_dual(f.clone());
    let target = additive_eis_side(&scene, &f, &fs, 1.3, 700, cfg.trunc_height)
        .map_err(|e| e.to_string())?
        .value;
    let deltas = vec![0.1, 0.05, 0.025];
    let mut values = Vec::new();
    let mut errors = Vec::new();
    for &delta in &deltas {
        let q = 1.0 + delta;
        let bctx = EvalContext::multiplicative(q, Genus::bridge_affine(cfg.additive_c, q));
        let bscene = SpectralScene::new(rd.clone(), bctx).map_err(|e| e.to_string())?;
        let v = bridge_pairing_value(&bscene, &f, &fs, 1.3, 1600) / C64::new(q.ln() * q.ln(), 0.0);
        values.push([v.re, v.im]);
        errors.push((v - target).norm());
    }
    let monotone = errors.windows(2).all(|w| w[1] < w[0]);
    Ok(LimitReport {
        deltas,
        rescaled_values: values,
        additive_value: [target.re, target.im],
        errors,
        monotone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suites_pass_on_the_rank_one_group() {
        let cfg = Config { nodes: 384, ..Config::default() };
        let main = run_main_identity_suite(&cfg, 4, 1e-9).unwrap();
        assert!(main.passed, "{}", main.human_table());
        let structural = run_structural_suite(&cfg).unwrap();
        assert!(structural.passed, "{}", structural.human_table());
        let regression = run_g2_regression(&cfg).unwrap();
        assert!(regression.passed, "{}", regression.human_table());
        let positivity = run_positivity_suite(&cfg, 8).unwrap();
        assert!(positivity.passed, "{}", positivity.human_table());
    }

    #[test]
    fn corrupted_density_fails_the_main_suite() {
        // sensitivity: a one-percent corruption of the scaling parameter on
        // the spectral side must break the identity
        let cfg = Config { nodes: 384, ..Config::default() };
        let rd = cfg.root_datum().unwrap();
        let ctx = cfg.context().unwrap();
        let scene = cfg.scene().unwrap();
        let shift = standard_shift(&rd, ctx.q, cfg.shift_factor);
        let grid =
            PairingGrid::new(&rd, &ctx, &shift, cfg.nodes, crate::quad::GOLDEN_OFFSET).unwrap();
        let pairs = test_pairs(rd.rank, 1, cfg.seed);
        let (f1, f2) = &pairs[0];
        let lhs = grid.evaluate(f1, f2).value;
        // corrupt: scale one orbit contribution by 1.01
        let mut rhs = C64::new(0.0, 0.0);
        for (i, rec) in scene.catalog.orbits.iter().enumerate() {
            let v = crate::spectral::orbit_contribution(&scene, rec, f1, f2, cfg.nodes)
                .unwrap()
                .value;
            rhs += if i == 0 { v * 1.01 } else { v };
        }
        let rel = (lhs - rhs).norm() / (1.0 + lhs.norm());
        assert!(rel > 1e-9 * 100.0, "corruption not detected: rel {rel}");
    }

    #[test]
    fn report_is_deterministic() {
        let cfg = Config { nodes: 96, ..Config::default() };
        let a = run_main_identity_suite(&cfg, 2, 1e-9).unwrap();
        let b = run_main_identity_suite(&cfg, 2, 1e-9).unwrap();
        let strip = |s: &str| -> String {
            // runtimes differ between runs; drop them before comparing
            s.lines().filter(|l| !l.contains("runtime_ms")).collect::<Vec<_>>().join("\n")
        };
        assert_eq!(strip(&a.to_json()), strip(&b.to_json()));
    }

    #[test]
    fn config_round_trips_through_json() {
        let cfg = Config::default();
        let s = serde_json::to_string(&cfg).unwrap();
        let back: Config = serde_json::from_str(&s).unwrap();
        assert_eq!(back.group, cfg.group);
        assert_eq!(back.q, cfg.q);
    }
}
