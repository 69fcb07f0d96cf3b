use floqcool::dense::{
    cooling_lattice_1d, decay_kraus, decoherence_superop, dephase_kraus, kraus_completeness_defect, reset_kraus,
    run_dense_cooling, run_trajectories, stabilize_single_qubit, unitarity_defect, DenseGate, DenseState,
    StabilizeConfig,
};
use floqcool::gaussian::{run_cooling, DephasingMode};
use floqcool::{CoolingConfig, Init, NoiseRates};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn gaussian_matches_dense_on_l4_cooling_cycle() {
    let mut cfg = CoolingConfig::edge_cooled(4, 0.2, 0.2, 0.11 * std::f64::consts::PI, 1.65, 9);
    cfg.init = Init::Vacuum;
    let lat = cooling_lattice_1d(&cfg).unwrap();
    let dense = run_dense_cooling(&cfg, &lat, None, 0).unwrap();
    let gauss = run_cooling(&cfg, DephasingMode::Average, 0, false).unwrap();
    for (a, b) in dense.records.iter().zip(&gauss.records) {
        for (x, y) in a.z.iter().zip(&b.z) {
            assert!((x - y).abs() < 1e-8, "Z {x} vs {y}");
        }
        for (x, y) in a.xx.iter().zip(&b.xx) {
            assert!((x - y).abs() < 1e-8, "XX {x} vs {y}");
        }
    }
}

#[test]
fn gate_matrices_are_unitary() {
    let gates = [
        DenseGate::Cphase { a: 0, b: 1, phi: 0.7 },
        DenseGate::Fsim {
            a: 0,
            b: 1,
            theta: 0.3,
            phi: 1.1,
        },
        DenseGate::Iswap { a: 0, b: 1, theta: 0.4 },
        DenseGate::IsingXX { a: 0, b: 1, j: 0.2 },
        DenseGate::PhaseZ { q: 0, h: 1.3 },
        DenseGate::X(0),
    ];
    for g in gates {
        assert!(unitarity_defect(&g.matrix()) < 1e-12);
    }
}

#[test]
fn iswap_equals_fsim_with_zero_phase() {
    let a = DenseGate::Iswap {
        a: 0,
        b: 1,
        theta: 0.37,
    }
    .matrix();
    let b = DenseGate::Fsim {
        a: 0,
        b: 1,
        theta: 0.37,
        phi: 0.0,
    }
    .matrix();
    assert_eq!(a, b);
}

#[test]
fn cphase_phases_only_doubly_excited_state() {
    let mut s = DenseState::basis_psi(&[1, 1]).unwrap();
    s.apply_gate(&DenseGate::Cphase { a: 0, b: 1, phi: 0.5 }).unwrap();
    let amp = s.psi().unwrap()[3];
    assert!((amp.arg() - 0.5).abs() < 1e-12);
}

#[test]
fn channels_are_complete_and_match_block_factors() {
    for k in [
        reset_kraus(0).to_vec(),
        reset_kraus(1).to_vec(),
        decay_kraus(0.3).to_vec(),
        dephase_kraus(0.2).to_vec(),
    ] {
        assert!(kraus_completeness_defect(&k) < 1e-12);
    }
    let r = NoiseRates::new(0.3, 0.2);
    let s = decoherence_superop(&r);
    assert!((s[3][3].re - (-0.3f64).exp()).abs() < 1e-12);
    assert!((s[1][1].re - (-0.2f64 - 0.15).exp()).abs() < 1e-12);
}

#[test]
fn bell_reset_leaves_partner_maximally_mixed() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut s = DenseState::basis_rho(&[0, 1]).unwrap();
    s.apply_gate(&DenseGate::Iswap {
        a: 0,
        b: 1,
        theta: std::f64::consts::FRAC_PI_4,
    })
    .unwrap();
    s.apply_reset_channel(0, 1, &mut rng).unwrap();
    let red = s.reduced(&[1]).unwrap();
    assert!((red[(0, 0)].re - 0.5).abs() < 1e-12);
    assert!(red[(0, 1)].norm() < 1e-12);
    assert!((s.expect_pauli(&[(0, 'Z')]) + 1.0).abs() < 1e-12);
}

#[test]
fn decay_trajectories_match_channel() {
    let rates = NoiseRates::new(0.05, 0.0);
    let init = DenseState::basis_psi(&[1]).unwrap();
    let stats = run_trajectories(
        &init,
        20,
        4000,
        7,
        |s, _, rng| s.apply_decoherence(&rates, rng),
        |s, _| vec![s.expect_pauli(&[(0, 'Z')])],
    )
    .unwrap();
    let err = stats.stderr.unwrap();
    for d in [5, 10, 20] {
        let exact = 1.0 - 2.0 * (-0.05 * d as f64).exp();
        assert!((stats.mean[d][0] - exact).abs() < 3.0 * err[d][0] + 1e-12, "d={d}");
    }
}

#[test]
fn single_qubit_stabilization_reaches_eigenstate() {
    let res = stabilize_single_qubit(&StabilizeConfig::reference()).unwrap();
    println!(
        "target {:?} steady {:?} dev {}",
        res.target,
        &res.steady[..3],
        res.max_deviation
    );
    assert!(res.max_deviation < 0.05);
}

#[test]
fn random_circuits_agree_on_all_two_qubit_paulis() {
    let cases = floqcool::validate::oracle_suite(8, 6, 3).unwrap();
    for c in cases {
        assert!(c.max_deviation < 1e-8, "{:?}", c);
    }
}
