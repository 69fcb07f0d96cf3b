use std::f64::consts::PI;

use floqcool::dense::{cooling_lattice_1d, pauli, run_dense_cooling, DenseGate, DenseState};
use floqcool::eigenmodes::solve_modes;
use floqcool::gates::Gate;
use floqcool::gaussian::{run_cooling, DephasingMode};
use floqcool::linalg::{c, eigh, CMat};
use floqcool::rdm::{vacuum_fidelity, OneBodyRDM};
use floqcool::{CoolingConfig, CovarianceState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn kron_chain(ops: &[CMat]) -> CMat {
    ops.iter().skip(1).fold(ops[0].clone(), |acc, m| acc.kronecker(m))
}

fn p2(p: char) -> CMat {
    let m = pauli(p);
    CMat::from_fn(2, 2, |i, j| m[i][j])
}

/// Majorana operator `a_k` on `n` qubits as a dense matrix.
fn majorana(n: usize, k: usize) -> CMat {
    let site = k / 2;
    let ops: Vec<CMat> = (0..n)
        .map(|q| {
            if q < site {
                p2('Z')
            } else if q == site {
                p2(if k % 2 == 0 { 'X' } else { 'Y' })
            } else {
                CMat::identity(2, 2)
            }
        })
        .collect();
    kron_chain(&ops)
}

fn random_matchgate_circuit(n: usize, layers: usize, seed: u64) -> Vec<Gate> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gates = Vec::new();
    for _ in 0..layers {
        for q in 0..n {
            gates.push(Gate::PhaseZ {
                q,
                h: rng.random_range(-1.0..1.0),
            });
        }
        for q in 0..n - 1 {
            gates.push(Gate::IsingXX {
                a: q,
                b: q + 1,
                j: rng.random_range(-1.0..1.0),
            });
            gates.push(Gate::PartialIswap {
                a: q,
                b: q + 1,
                theta: rng.random_range(-1.0..1.0),
            });
        }
    }
    gates
}

#[test]
fn dense_and_gaussian_rdms_agree_on_cooled_chain() {
    let cfg = CoolingConfig::edge_cooled(4, 0.2, 0.2, 0.11 * PI, 1.65, 13);
    let lat = cooling_lattice_1d(&cfg).unwrap();
    let dense = run_dense_cooling(&cfg, &lat, None, 0).unwrap().state.unwrap();
    let gauss = run_cooling(&cfg, DephasingMode::Average, 0, false).unwrap();
    let sys = &gauss.layout.system;
    let a = OneBodyRDM::from_dense(&dense, sys).unwrap();
    let b = OneBodyRDM::from_covariance(&gauss.state, sys[0]..sys[0] + sys.len());
    a.check().unwrap();
    assert!(floqcool::linalg::max_abs(&(&a.d - &b.d)) < 1e-8);
}

#[test]
fn correlator_matches_pauli_string_on_random_gaussian_state() {
    let n = 5;
    let gates = random_matchgate_circuit(n, 4, 3);
    let mut g = CovarianceState::product(&[0, 1, 0, 0, 1]);
    g.apply_gates(&gates).unwrap();
    let mut d = DenseState::basis_rho(&[0, 1, 0, 0, 1]).unwrap();
    d.apply_gates(&gates.iter().map(|&x| DenseGate::from(x)).collect::<Vec<_>>())
        .unwrap();
    let rdm = OneBodyRDM::from_covariance(&g, 0..n);
    for j in 1..=n {
        for k in j + 1..=n {
            let mut ops = vec![(j - 1, 'Y')];
            ops.extend((j..k - 1).map(|q| (q, 'Z')));
            ops.push((k - 1, 'Y'));
            let exact = d.expect_pauli(&ops);
            assert!(
                (rdm.quantum_correlator(j, k).unwrap() - exact).abs() < 1e-8,
                "j={j} k={k}"
            );
        }
    }
    assert!(rdm.quantum_correlator(3, 2).is_err());
}

#[test]
fn single_quasiparticle_has_unit_occupation() {
    let (g, j, l) = (0.3, 0.2, 4);
    let table = solve_modes(g, j, l).unwrap();
    let dim = 1 << l;
    let a: Vec<CMat> = (0..2 * l).map(|k| majorana(l, k)).collect();
    let eta = |alpha: usize| -> CMat {
        let u = table.modes[alpha].annihilator();
        let mut m = CMat::zeros(dim, dim);
        for (k, ak) in a.iter().enumerate() {
            m += ak * (u[k] * c(std::f64::consts::FRAC_1_SQRT_2, 0.0));
        }
        m
    };
    let mut h = CMat::zeros(dim, dim);
    for alpha in 0..l {
        let e = eta(alpha);
        h += e.adjoint() * &e * c(table.modes[alpha].phi, 0.0);
    }
    let (_, vecs) = eigh(&h);
    let vac = vecs.column(0).into_owned();
    let beta = 2;
    let excited = eta(beta).adjoint() * &vac;
    let excited = &excited / c(excited.norm(), 0.0);
    for (psi, expect_beta) in [(vac, 0.0), (excited, 1.0)] {
        let s = DenseState::from_psi(psi).unwrap();
        let qubits: Vec<usize> = (0..l).collect();
        let n = OneBodyRDM::from_dense(&s, &qubits)
            .unwrap()
            .to_eigenbasis(&table)
            .unwrap()
            .occupations()
            .unwrap();
        for (alpha, v) in n.iter().enumerate() {
            let want = if alpha == beta { expect_beta } else { 0.0 };
            assert!((v - want).abs() < 1e-9, "alpha {alpha}: {v}");
        }
    }
}

#[test]
fn floquet_vacuum_is_empty_and_pure() {
    let table = solve_modes(0.25, 0.2, 10).unwrap();
    let vac = OneBodyRDM::floquet_vacuum(&table);
    vac.check().unwrap();
    let n = vac.to_eigenbasis(&table).unwrap().occupations().unwrap();
    assert!(n.iter().all(|x| x.abs() < 1e-9));
    let p = vac.purify();
    assert!(floqcool::linalg::max_abs(&(&p.rdm.d - &vac.d)) < 1e-10);
    assert!((vacuum_fidelity(&n, None) - 1.0).abs() < 1e-9);
}

#[test]
fn purification_is_idempotent_and_preserves_trace() {
    let mut g = CovarianceState::scrambled(6, 11);
    g.apply_dephasing_average(&floqcool::NoiseRates::dephasing(0.3));
    let r = OneBodyRDM::from_covariance(&g, 0..6);
    r.check().unwrap();
    let p1 = r.purify();
    let p2 = p1.rdm.purify();
    assert!(floqcool::linalg::max_abs(&(&p1.rdm.d - &p2.rdm.d)) < 1e-10);
    assert!((p1.rdm.d.trace().re - 6.0).abs() < 1e-9);
    let sq = &p1.rdm.d * &p1.rdm.d;
    assert!(floqcool::linalg::max_abs(&(&sq - &p1.rdm.d)) < 1e-10);
}

#[test]
fn eigenbasis_transform_preserves_spectrum() {
    let table = solve_modes(0.3, 0.2, 6).unwrap();
    let mut g = CovarianceState::scrambled(6, 2);
    g.apply_dephasing_average(&floqcool::NoiseRates::dephasing(0.1));
    let r = OneBodyRDM::from_covariance(&g, 0..6);
    let e = r.to_eigenbasis(&table).unwrap();
    for (x, y) in r.spectrum().iter().zip(e.spectrum()) {
        assert!((x - y).abs() < 1e-10);
    }
    for v in e.occupations().unwrap() {
        assert!((-1e-9..=1.0 + 1e-9).contains(&v));
    }
}

#[test]
fn product_state_entropy_vanishes_and_mixed_is_maximal() {
    let r = OneBodyRDM::from_covariance(&CovarianceState::product(&[0, 1, 1, 0]), 0..4);
    for k in 1..=4 {
        assert!(r.entropy(0..k).unwrap().abs() < 1e-12);
    }
    let m = OneBodyRDM::maximally_mixed(4);
    assert!((m.entropy(0..3).unwrap() - 3.0).abs() < 1e-12);
}
