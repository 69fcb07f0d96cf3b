//! Boundary-driven Floquet XXZ chain on the dense engine.
//!
//! Qubit 0 is the left auxiliary, qubits `1..=S` the system and qubit `N − 1`
//! the right auxiliary. One cycle:
//!
//! ```text
//! reset a1 → |m1⟩, a2 → |m2⟩
//! layer 1: iSWAP(a1, Q1), fSim(Q2, Q3), fSim(Q4, Q5), …, [iSWAP(QS, a2) if S even]
//! (half-cycle snapshot)
//! layer 2: fSim(Q1, Q2), fSim(Q3, Q4), …, [iSWAP(QS, a2) if S odd]
//! decoherence on every qubit
//! ```
//!
//! The auxiliary couplings are full iSWAPs, `fSim(π/2, 0)`.

use std::f64::consts::FRAC_PI_2;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::XxzConfig;
use crate::dense::{DenseGate, DenseState};
use crate::error::{Error, Result};
use crate::linalg::linear_fit;

/// Gate layers of one cycle.
#[derive(Clone, Debug, PartialEq)]
pub struct XxzCircuit {
    pub n: usize,
    pub layer1: Vec<DenseGate>,
    pub layer2: Vec<DenseGate>,
}

impl XxzCircuit {
    pub fn new(cfg: &XxzConfig) -> Result<Self> {
        cfg.validate()?;
        let n = cfg.n;
        let s = cfg.system_len();
        let bulk = |a: usize| DenseGate::Fsim {
            a,
            b: a + 1,
            theta: cfg.theta,
            phi: cfg.phi,
        };
        let edge = |a: usize, b: usize| DenseGate::Fsim {
            a,
            b,
            theta: FRAC_PI_2,
            phi: 0.0,
        };
        let mut layer1 = vec![edge(0, 1)];
        layer1.extend((2..s).step_by(2).map(bulk));
        let mut layer2: Vec<DenseGate> = (1..s).step_by(2).map(bulk).collect();
        if s % 2 == 0 {
            layer1.push(edge(s, n - 1));
        } else {
            layer2.push(edge(s, n - 1));
        }
        for layer in [&layer1, &layer2] {
            let mut seen = vec![false; n];
            for g in layer.iter() {
                if let DenseGate::Fsim { a, b, .. } = *g {
                    if a >= n || b >= n || seen[a] || seen[b] {
                        return Err(Error::Argument(
                            "brickwork layer overlaps or leaves the register".into(),
                        ));
                    }
                    seen[a] = true;
                    seen[b] = true;
                }
            }
        }
        Ok(XxzCircuit { n, layer1, layer2 })
    }
}

/// Advance one cycle; `hook` sees the state between the two layers.
pub fn step<R: rand::Rng + ?Sized, H: FnMut(&DenseState)>(
    state: &mut DenseState,
    circuit: &XxzCircuit,
    cfg: &XxzConfig,
    rng: &mut R,
    mut hook: H,
) -> Result<()> {
    if state.n_qubits() != circuit.n {
        return Err(Error::Dimension(format!(
            "state has {} qubits, circuit {}",
            state.n_qubits(),
            circuit.n
        )));
    }
    state.apply_reset_channel(0, cfg.m1, rng)?;
    state.apply_reset_channel(circuit.n - 1, cfg.m2, rng)?;
    state.apply_gates(&circuit.layer1)?;
    hook(state);
    state.apply_gates(&circuit.layer2)?;
    state.apply_decoherence(&cfg.noise, rng)
}

/// Populations at integer and half-integer times with derived bond currents.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransportSeries {
    /// Snapshot times `0, 0.5, 1, …`.
    pub times: Vec<f64>,
    /// `p1[t][q]`: probability of |1⟩ on qubit `q` at `times[t]`.
    pub p1: Vec<Vec<f64>>,
    /// `currents[d][j − 1]`: current into system qubit `Q_j` during cycle `d`.
    pub currents: Vec<Vec<f64>>,
}

impl TransportSeries {
    /// Pumping current `J(d)` from the left auxiliary into `Q_1`.
    pub fn pumping_current(&self) -> Vec<f64> {
        self.currents.iter().map(|c| c[0]).collect()
    }

    pub fn cycles(&self) -> usize {
        self.currents.len()
    }
}

/// Currents from half-cycle snapshots: odd `j` uses `P1(d + ½) − P1(d)` and
/// even `j` uses `P1(d + 1) − P1(d + ½)`.
pub fn measure_transport(times: Vec<f64>, p1: Vec<Vec<f64>>) -> Result<TransportSeries> {
    if times.len() != p1.len() || times.len() < 3 || times.len() % 2 == 0 {
        return Err(Error::Sampling(
            "need snapshots at every integer and half-integer time".into(),
        ));
    }
    for (k, &t) in times.iter().enumerate() {
        if (t - 0.5 * k as f64).abs() > 1e-12 {
            return Err(Error::Sampling(format!(
                "snapshot {k} at t = {t}, expected {}",
                0.5 * k as f64
            )));
        }
    }
    let n = p1[0].len();
    let s = n - 2;
    let cycles = (times.len() - 1) / 2;
    let currents = (0..cycles)
        .map(|d| {
            (1..=s)
                .map(|j| {
                    if j % 2 == 1 {
                        p1[2 * d + 1][j] - p1[2 * d][j]
                    } else {
                        p1[2 * d + 2][j] - p1[2 * d + 1][j]
                    }
                })
                .collect()
        })
        .collect();
    Ok(TransportSeries { times, p1, currents })
}

/// Exact density-matrix run from `|0…0⟩`.
pub fn run_transport(cfg: &XxzConfig) -> Result<TransportSeries> {
    let circuit = XxzCircuit::new(cfg)?;
    let mut state = DenseState::basis_rho(&vec![0u8; cfg.n])?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut times = vec![0.0];
    let mut p1 = vec![state.populations()];
    for d in 0..cfg.cycles {
        let mut mid = Vec::new();
        step(&mut state, &circuit, cfg, &mut rng, |s| mid = s.populations())?;
        times.push(d as f64 + 0.5);
        p1.push(mid);
        times.push(d as f64 + 1.0);
        p1.push(state.populations());
    }
    measure_transport(times, p1)
}

/// Least-squares slope of `log J` against `log d` with its standard error.
pub fn fit_exponent(d: &[f64], current: &[f64]) -> Result<(f64, f64)> {
    if d.len() != current.len() || d.len() < 2 {
        return Err(Error::FitDomain("need at least two matching points".into()));
    }
    if d.iter().chain(current).any(|&v| v <= 0.0 || !v.is_finite()) {
        return Err(Error::FitDomain("times and currents must be positive".into()));
    }
    let x: Vec<f64> = d.iter().map(|v| v.ln()).collect();
    let y: Vec<f64> = current.iter().map(|v| v.ln()).collect();
    let (a, _, err) = linear_fit(&x, &y);
    Ok((a, err))
}

/// Fit of the pumping current over cycles `window.0..=window.1`.
pub fn fit_pumping_exponent(series: &TransportSeries, window: (usize, usize)) -> Result<(f64, f64)> {
    if window.0 == 0 || window.1 >= series.cycles() || window.0 >= window.1 {
        return Err(Error::FitDomain(format!(
            "window {window:?} outside 1..{}",
            series.cycles()
        )));
    }
    let j = series.pumping_current();
    let d: Vec<f64> = (window.0..=window.1).map(|v| v as f64).collect();
    fit_exponent(&d, &j[window.0..=window.1])
}

/// Tail averages of a transport run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NessSummary {
    /// Mean current into each system qubit.
    pub bond_currents: Vec<f64>,
    /// Mean `P1` of each system qubit at integer times.
    pub profile: Vec<f64>,
    /// Relative change of the pumping current across the tail.
    pub drift: f64,
    /// `drift < 0.05`.
    pub converged: bool,
}

/// Averages over the last `tail` cycles; saturation means the pumping current
/// changes by less than 5% across the tail.
pub fn ness_summary(series: &TransportSeries, tail: usize) -> Result<NessSummary> {
    let cycles = series.cycles();
    if tail == 0 || tail > cycles {
        return Err(Error::Argument(format!("tail {tail} outside 1..={cycles}")));
    }
    let start = cycles - tail;
    let s = series.currents[0].len();
    let bond_currents = (0..s)
        .map(|j| series.currents[start..].iter().map(|c| c[j]).sum::<f64>() / tail as f64)
        .collect();
    let profile = (1..=s)
        .map(|q| (start..cycles).map(|d| series.p1[2 * (d + 1)][q]).sum::<f64>() / tail as f64)
        .collect();
    let j = series.pumping_current();
    let (first, last) = (j[start], j[cycles - 1]);
    let scale = first.abs().max(last.abs());
    let drift = if scale > 0.0 { (last - first).abs() / scale } else { 0.0 };
    Ok(NessSummary {
        bond_currents,
        profile,
        drift,
        converged: drift < 0.05,
    })
}
