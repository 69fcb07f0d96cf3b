//! Cross-engine oracle: random noiseless cooling circuits run on both the
//! Gaussian and the dense engine, compared on every one- and two-qubit Pauli.

use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{CoolingConfig, Init};
use crate::dense::{cooling_lattice_1d, run_dense_cooling};
use crate::error::{Error, Result};
use crate::gaussian::{run_cooling, DephasingMode};
use crate::noise::NoiseRates;

const PAULIS: [char; 3] = ['X', 'Y', 'Z'];

/// One oracle comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleCase {
    pub config: CoolingConfig,
    /// Number of Pauli strings compared.
    pub observables: usize,
    /// Largest absolute difference between the engines.
    pub max_deviation: f64,
}

/// Random matchgate-compatible cooling circuit with `L + M <= max_qubits`
/// and auxiliaries on the chain ends.
pub fn random_cooling_config<R: Rng + ?Sized>(rng: &mut R, max_qubits: usize) -> CoolingConfig {
    let l = rng.random_range(2..max_qubits);
    let m = rng.random_range(1..=(max_qubits - l).min(2));
    let placement = match m {
        1 => vec![if rng.random_bool(0.5) { 1 } else { l }],
        _ => vec![1, l],
    };
    CoolingConfig {
        l,
        m,
        placement,
        g: rng.random_range(0.02..0.5),
        j: rng.random_range(0.02..0.5),
        theta: rng.random_range(0.0..FRAC_PI_2),
        h: rng.random_range(0.0..2.0),
        reset_period: rng.random_range(1..=4),
        cycles: rng.random_range(1..=12),
        noise: NoiseRates::NONE,
        init: Init::Vacuum,
    }
}

/// Run `cfg` on both engines and compare all one- and two-qubit Paulis.
pub fn compare_engines(cfg: &CoolingConfig) -> Result<OracleCase> {
    if !cfg.noise.is_zero() {
        return Err(Error::Argument("the oracle compares noiseless circuits".into()));
    }
    let gauss = run_cooling(cfg, DephasingMode::Average, 0, false)?.state;
    let lattice = cooling_lattice_1d(cfg)?;
    let dense = run_dense_cooling(cfg, &lattice, None, 0)?
        .state
        .ok_or_else(|| Error::Capability("dense run returned no state".into()))?;
    let n = gauss.n_qubits();
    let mut strings: Vec<Vec<(usize, char)>> = Vec::new();
    for q in 0..n {
        strings.extend(PAULIS.iter().map(|&p| vec![(q, p)]));
        for r in q + 1..n {
            for &p in &PAULIS {
                strings.extend(PAULIS.iter().map(|&s| vec![(q, p), (r, s)]));
            }
        }
    }
    let mut max_deviation: f64 = 0.0;
    for s in &strings {
        let a = gauss.expect_pauli(s)?;
        let b = dense.expect_pauli(s);
        max_deviation = max_deviation.max((a - b).abs());
    }
    Ok(OracleCase {
        config: cfg.clone(),
        observables: strings.len(),
        max_deviation,
    })
}

/// `count` seeded random circuits with at most `max_qubits` qubits.
pub fn oracle_suite(count: usize, max_qubits: usize, seed: u64) -> Result<Vec<OracleCase>> {
    if max_qubits < 3 {
        return Err(Error::Argument("need room for two sites and one auxiliary".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let configs: Vec<CoolingConfig> = (0..count)
        .map(|_| random_cooling_config(&mut rng, max_qubits))
        .collect();
    configs.par_iter().map(compare_engines).collect()
}
