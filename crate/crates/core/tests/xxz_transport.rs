use std::f64::consts::PI;

use floqcool::dense::DenseState;
use floqcool::xxz::{fit_pumping_exponent, ness_summary, run_transport, XxzCircuit};
use floqcool::XxzConfig;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn unpumped_vacuum_stays_empty() {
    let mut cfg = XxzConfig::new(6, PI / 4.0, PI / 2.0, 10);
    cfg.m1 = 0;
    let s = run_transport(&cfg).unwrap();
    assert!(s.p1.iter().flatten().all(|p| p.abs() < 1e-12));
}

#[test]
fn zero_hopping_blocks_transport_past_first_site() {
    let s = run_transport(&XxzConfig::new(6, 0.0, PI / 2.0, 10)).unwrap();
    for row in &s.p1 {
        for p in &row[2..5] {
            assert!(p.abs() < 1e-12);
        }
    }
}

#[test]
fn total_population_grows_under_pumping() {
    let s = run_transport(&XxzConfig::new(6, PI / 4.0, PI / 2.0, 30)).unwrap();
    let totals: Vec<f64> = s.p1.iter().step_by(2).map(|r| r[1..5].iter().sum()).collect();
    for w in totals.windows(2).take(8) {
        assert!(w[1] >= w[0] - 1e-12);
    }
}

#[test]
fn layers_conserve_excitations_and_reset_is_exact() {
    let cfg = XxzConfig::new(7, PI / 5.0, 0.7, 1);
    let circuit = XxzCircuit::new(&cfg).unwrap();
    let mut state = DenseState::basis_rho(&[0, 1, 1, 0, 1, 0, 0]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..5 {
        state.apply_gates(&circuit.layer1).unwrap();
        state.apply_gates(&circuit.layer2).unwrap();
        let total: f64 = state.populations().iter().sum();
        assert!((total - 3.0).abs() < 1e-10);
    }
    state.apply_reset_channel(0, 1, &mut rng).unwrap();
    state.apply_reset_channel(6, 0, &mut rng).unwrap();
    let p = state.populations();
    assert!((p[0] - 1.0).abs() < 1e-14 && p[6].abs() < 1e-14);
}

#[test]
fn half_cycle_continuity() {
    let cfg = XxzConfig::new(8, PI / 4.0, PI / 2.0, 12);
    let s = run_transport(&cfg).unwrap();
    for d in 0..cfg.cycles {
        let (p0, ph, p1) = (&s.p1[2 * d], &s.p1[2 * d + 1], &s.p1[2 * d + 2]);
        let before: f64 = ph.iter().sum();
        let after: f64 = p1.iter().sum();
        assert!((before - after).abs() < 1e-10);
        // The interior sum changes only through the auxiliaries.
        let interior = |p: &Vec<f64>| p[1..p.len() - 1].iter().sum::<f64>();
        let boundary = (1.0 - ph[0]) - ph[p0.len() - 1];
        assert!((interior(ph) - interior(p0) - boundary).abs() < 1e-10);
        // Q1 only exchanges with the left auxiliary (reset to |1⟩) in the first layer.
        let inflow = 1.0 - ph[0];
        assert!((s.currents[d][0] - inflow).abs() < 1e-10);
    }
}

#[test]
fn isotropic_ness_is_uniform_and_decreases_with_size() {
    let mut currents = Vec::new();
    for n in [4, 6, 8] {
        let s = run_transport(&XxzConfig::new(n, PI / 4.0, PI / 2.0, 400)).unwrap();
        let ness = ness_summary(&s, 40).unwrap();
        assert!(ness.converged, "N = {n} drift {}", ness.drift);
        let mean = ness.bond_currents.iter().sum::<f64>() / ness.bond_currents.len() as f64;
        for j in &ness.bond_currents {
            assert!((j - mean).abs() < 0.05 * mean, "N = {n}: {:?}", ness.bond_currents);
        }
        currents.push(mean);
    }
    assert!(currents[0] > currents[1] && currents[1] > currents[2], "{currents:?}");
}

#[test]
fn regime_exponents_at_small_size() {
    let fit = |theta: f64| {
        let s = run_transport(&XxzConfig::new(8, theta, PI / 2.0, 8)).unwrap();
        fit_pumping_exponent(&s, (2, 6)).unwrap().0
    };
    let (plane, iso, axis) = (fit(11.0 * PI / 24.0), fit(PI / 4.0), fit(PI / 6.0));
    assert!(plane > iso && iso > axis, "{plane} {iso} {axis}");
    assert!(plane.abs() < 0.2);
}
