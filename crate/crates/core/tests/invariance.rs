// Invariance properties that tie the exact layer to the analytic layer:
// rescaling an orbit representative must not move any spectral value, and
// the scalar-generic analytic stack must instantiate at single precision.

use eisenstein::genus::{EvalContext, Genus};
use eisenstein::laurent::LaurentPolynomial;
use eisenstein::lie::{complete_sl2, dominant_form, orbit_record};
use eisenstein::quad::{torus_integral, ContourSpec};
use eisenstein::rootsys::{build_root_system, GroupType, Lattice};
use eisenstein::spectral::{orbit_contribution, SpectralScene};
use eisenstein::Q64;
use num_complex::Complex;
use num_rational::Ratio;
use std::collections::BTreeMap;

type C = Complex<f64>;

#[test]
fn rescaling_the_representative_leaves_contributions_unchanged() {
    let q = 1.5;
    let rd = build_root_system(GroupType::G2, Lattice::Adjoint).unwrap();
    let ctx = EvalContext::multiplicative(q, Genus::one_minus_c_over_x(0.8 / q + 0.2));
    let scene = SpectralScene::new(rd.clone(), ctx).unwrap();
    let standard = scene.catalog.orbits.iter().find(|o| o.label == "subregular").unwrap();

    // rebuild the subregular record from a rescaled representative,
    // reusing the component data of the standard record
    let alg = eisenstein::lie::build_lie_algebra(&rd).unwrap();
    let mut e = alg.zero();
    let three = Ratio::from_integer(3.into());
    let seven = Ratio::from_integer(7.into());
    e[alg.root_index(&vec![2, -1]).unwrap()] = three;
    e[alg.root_index(&vec![0, 1]).unwrap()] = seven;
    let triple = dominant_form(&alg, &complete_sl2(&alg, &e, "scaled").unwrap()).unwrap();
    let classes = standard.classes.clone();
    let mut class_angles: BTreeMap<i64, Vec<Vec<Q64>>> = BTreeMap::new();
    for (&i, entries) in &standard.levels {
        class_angles.insert(i, entries.iter().map(|en| en.class_angles.clone()).collect());
    }
    let scaled =
        orbit_record(&alg, &triple, "scaled", Some(classes), Some(class_angles)).unwrap();

    let mut f = LaurentPolynomial::monomial(vec![1, 0], C::new(1.0, 0.2));
    f.add_term(vec![-1, 1], C::new(0.4, -0.7));
    let fstar = f.dual_star();
    let a = orbit_contribution(&scene, standard, &f, &fstar, 8).unwrap().value;
    let b = orbit_contribution(&scene, &scaled, &f, &fstar, 8).unwrap().value;
    assert!((a - b).norm() <= 1e-10 * (1.0 + a.norm()), "{a} vs {b}");
}

#[test]
fn analytic_stack_instantiates_at_single_precision() {
    // the generic scalar interface admits f32; tolerances are loose
    type C32 = Complex<f32>;
    let genus: Genus<f32> = Genus::one_minus_c_over_x(0.7f32);
    let ctx = EvalContext::multiplicative(2.0f32, genus);
    let z = ctx.z_of(C32::new(3.0, 0.0));
    assert!(z.norm() > 0.0 && z.im.abs() < 1e-5);
    let spec = ContourSpec::torus(vec![C32::new(2.0, 0.0)], 64);
    let res = torus_integral(|x| x[0].powi(2), &spec).unwrap();
    assert!(res.value.norm() < 1e-4);
    let f: LaurentPolynomial<f32> = LaurentPolynomial::monomial(vec![2], C32::new(1.0, 0.0));
    assert!((f.eval(&eisenstein::laurent::TorusPoint::new(vec![C32::new(2.0, 0.0)]))
        - C32::new(4.0, 0.0))
    .norm()
        < 1e-5);
}
