use ballmaps_core::maps::{catalog, ComposedMap};
use ballmaps_core::rescaling::{
    build_sequence, cartan_sequence, extract_limit_jet, quadratic_normal_form, rescale,
    verify_scaling_law, BuildOptions, CoefficientClass, GRoute, RescaleOptions, Stage, TOL_PATTERN,
};
use ballmaps_core::{linalg, BallMap, Error};

fn map(name: &str, p: &[usize]) -> ComposedMap {
    ComposedMap::new(catalog(name, p).unwrap())
}

#[test]
fn traces_satisfy_the_scaling_law() {
    for (name, p) in [("linear", vec![2, 4]), ("whitney", vec![]), ("power", vec![2, 2]), ("power", vec![2, 3])] {
        let f = map(name, &p);
        let pairs = cartan_sequence(f.domain_dim(), f.target_dim(), 1, 10).unwrap();
        let trace = build_sequence(&f, &pairs, &BuildOptions::default()).unwrap();
        let report = verify_scaling_law(&trace).unwrap();
        assert!(report.max_relative_error <= 1e-8, "{name}: {report:?}");
        for e in &trace.entries {
            assert!(linalg::norm(&e.jet_g.value) <= 1e-10);
            assert!(linalg::norm(&e.jet_h.value) <= 1e-10);
            assert!(e.phi_gap > 0.0 && e.psi_gap > 0.0);
        }
    }
}

#[test]
fn suppressed_coefficients_decay_for_whitney() {
    let f = map("whitney", &[]);
    let pairs = cartan_sequence(2, 3, 1, 10).unwrap();
    let trace = build_sequence(&f, &pairs, &BuildOptions::default()).unwrap();
    assert!(trace.entries.iter().all(|e| e.route == GRoute::Conjugation));
    let limit = extract_limit_jet(&trace, 4).unwrap();
    assert!(limit.decay.decaying);
    assert!(limit.decay.slope.unwrap() <= -0.5);
    let d = &limit.cauchy.differences;
    assert!(d.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn degenerate_tail() {
    let f = map("linear", &[2, 3]);
    let pairs = cartan_sequence(2, 3, 1, 2).unwrap();
    let trace = build_sequence(&f, &pairs, &BuildOptions::default()).unwrap();
    let limit = extract_limit_jet(&trace, 1).unwrap();
    assert_eq!(limit.cauchy.differences, vec![0.0]);
    assert!(extract_limit_jet(&trace, 2).is_err());
}

#[test]
fn end_to_end_linear() {
    let f = map("linear", &[2, 4]);
    let pairs = cartan_sequence(2, 4, 1, 12).unwrap();
    let out = rescale(&f, &pairs, &RescaleOptions::default()).unwrap();
    assert!((out.normal_form.lambda - 1.0).abs() <= 1e-6);
    assert!(out.flattening.flatten_residual <= 1e-8);
    assert!(out.boundary.quadratic <= 1e-12 && out.boundary.isometry <= 1e-12);
}

#[test]
fn negative_controls() {
    let f = map("whitney", &[]);
    let pairs = cartan_sequence(2, 3, 1, 5).unwrap();
    let err = rescale(&f, &pairs, &RescaleOptions::default()).unwrap_err();
    assert_eq!(err.stage, Stage::Symmetry);

    let f = map("linear", &[2, 3]);
    let trace = build_sequence(&f, &cartan_sequence(2, 3, 1, 3).unwrap(), &BuildOptions::default()).unwrap();
    let mut jet = trace.entries.last().unwrap().jet_g.clone();
    jet.first[1][0] = num_complex::Complex64::new(0.1, 0.0);
    match quadratic_normal_form(&jet, TOL_PATTERN) {
        Err(Error::Pattern { class, .. }) => assert_eq!(class, CoefficientClass::FirstNormal),
        other => panic!("{other:?}"),
    }
}
