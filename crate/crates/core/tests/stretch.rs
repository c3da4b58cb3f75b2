// Stretch configuration: the additive vertical-line identity in rank two.

use eisenstein::genus::{EvalContext, Genus};
use eisenstein::rootsys::{build_root_system, GroupType, Lattice};
use eisenstein::spectral::{
    additive_dual, additive_eis_side, additive_spectral_side, AdditiveTestFn, SpectralScene,
};
use num_complex::Complex;
use std::sync::Arc;

type C = Complex<f64>;

#[test]
fn additive_identity_rank_two() {
    let rd = build_root_system(GroupType::A2, Lattice::SimplyConnected).unwrap();
    let ctx = EvalContext::additive(Genus::additive_affine(0.4));
    let scene = SpectralScene::new(rd, ctx).unwrap();
    let f: AdditiveTestFn<f64> = Arc::new(|s: &[C]| {
        let sum_sq: C = s.iter().map(|z| z * z).sum();
        sum_sq.exp()
    });
    let fs = additive_dual(f.clone());
    let lhs = additive_eis_side(&scene, &f, &fs, 1.3, 220, 8.0).unwrap().value;
    let (parts, rhs) = additive_spectral_side(&scene, &f, &fs, 220, 8.0).unwrap();
    for (l, v) in &parts {
        println!("  {l}: {v}");
    }
    let rel = (lhs - rhs).norm() / (1.0 + lhs.norm());
    println!("lhs {lhs} rhs {rhs} rel {rel:.3e}");
    assert!(rel < 1e-8, "rank-two additive identity failed: rel {rel:.3e}");
}
