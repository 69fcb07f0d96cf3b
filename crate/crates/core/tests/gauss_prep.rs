use floqcool::eigenmodes::solve_modes;
use floqcool::gauss_prep::{compile_prep, run_comparison, Cooling, PrepEngine};
use floqcool::linalg::{max_abs, max_abs_real, RMat};
use floqcool::rdm::{vacuum_fidelity, OneBodyRDM};
use floqcool::NoiseRates;

#[test]
fn noiseless_plans_prepare_the_vacuum() {
    for ratio in [0.6, 1.0, 1.6] {
        for l in 2..=10 {
            let table = solve_modes(ratio * 0.2, 0.2, l).unwrap();
            let plan = compile_prep(&table).unwrap();
            assert_eq!(plan.gates.len(), l * (l - 1) / 2);
            let state = plan.prepare().unwrap();
            let n = 2 * l;
            let g = state.gamma();
            assert!(max_abs_real(&(g * g.transpose() - RMat::identity(n, n))) < 1e-9);
            let occ = OneBodyRDM::from_covariance(&state, 0..l)
                .to_eigenbasis(&table)
                .unwrap()
                .occupations()
                .unwrap();
            assert!(occ.iter().all(|v| v.abs() < 1e-8), "g/J = {ratio}, L = {l}: {occ:?}");
            assert!(vacuum_fidelity(&occ, None) > 1.0 - 1e-6);
        }
    }
}

#[test]
fn two_site_plan_is_a_projector() {
    let table = solve_modes(0.3, 0.2, 2).unwrap();
    let d = OneBodyRDM::from_covariance(&compile_prep(&table).unwrap().prepare().unwrap(), 0..2).d;
    assert!(max_abs(&(&d * &d - &d)) < 1e-10);
}

#[test]
fn dense_execution_matches_gaussian() {
    let table = solve_modes(0.2, 0.2, 5).unwrap();
    let plan = compile_prep(&table).unwrap();
    let gauss = OneBodyRDM::from_covariance(&plan.prepare().unwrap(), 0..5);
    let dense = OneBodyRDM::from_dense(&plan.prepare_dense(&NoiseRates::NONE).unwrap(), &[0, 1, 2, 3, 4]).unwrap();
    assert!(max_abs(&(gauss.d - dense.d)) < 1e-10);
}

#[test]
fn noisy_dephasing_engines_agree() {
    let table = solve_modes(0.2, 0.2, 4).unwrap();
    let plan = compile_prep(&table).unwrap();
    let noise = NoiseRates::dephasing(0.02);
    let gauss = OneBodyRDM::from_covariance(&plan.prepare_dephased(&noise).unwrap(), 0..4);
    let dense = OneBodyRDM::from_dense(&plan.prepare_dense(&noise).unwrap(), &[0, 1, 2, 3]).unwrap();
    assert!(max_abs(&(gauss.d - dense.d)) < 1e-10);
}

#[test]
fn comparison_orders_protocols() {
    let rows = run_comparison(&[4, 6], &NoiseRates::NONE, &Cooling::critical(), PrepEngine::Gaussian).unwrap();
    for r in &rows {
        assert!((r.fid_u - 1.0).abs() < 1e-8 && (r.fid_u_pure - 1.0).abs() < 1e-8);
        assert!(r.fid_d > 0.5 && r.fid_d <= 1.0);
    }
    for engine in [PrepEngine::Gaussian, PrepEngine::Dense] {
        let noise = match engine {
            PrepEngine::Gaussian => NoiseRates::dephasing(0.016),
            PrepEngine::Dense => NoiseRates::new(0.006, 0.016),
        };
        for r in run_comparison(&[4, 5], &noise, &Cooling::critical(), engine).unwrap() {
            assert!(r.fid_d < r.fid_u, "{engine:?} L = {}", r.l);
            assert!(r.fid_d_pure >= r.fid_d && r.fid_u_pure >= r.fid_u);
            assert_eq!(r.occ_d.len(), r.l);
        }
    }
}

#[test]
fn gaussian_comparison_needs_pure_dephasing() {
    let e = run_comparison(
        &[4],
        &NoiseRates::new(0.01, 0.0),
        &Cooling::critical(),
        PrepEngine::Gaussian,
    );
    assert!(e.is_err());
}
