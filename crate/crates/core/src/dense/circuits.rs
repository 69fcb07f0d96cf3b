use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{pauli, run_trajectories, DenseGate, DenseState, TrajectoryStats, U2};
use crate::config::{CoolingConfig, Init};
use crate::cooling::{cycle_gates, resets_before, CoolingLayout};
use crate::error::{Error, Result};
use crate::gaussian::ObservableRecord;
use crate::linalg::c;
use crate::noise::NoiseRates;

/// Cooling circuit on an arbitrary coupling graph.
#[derive(Clone, Debug, PartialEq)]
pub struct CoolingLattice {
    pub n_qubits: usize,
    pub system: Vec<usize>,
    /// Ising bonds as qubit pairs.
    pub bonds: Vec<(usize, usize)>,
    /// `(auxiliary qubit, system qubit)` pairs.
    pub aux: Vec<(usize, usize)>,
    /// Gates of one cycle for `(g, J, θ, h)`.
    gates_1d: Option<CoolingLayout>,
}

/// Lattice of a 1D cooling configuration, with the same qubit order as the Gaussian engine.
pub fn cooling_lattice_1d(cfg: &CoolingConfig) -> Result<CoolingLattice> {
    let layout = CoolingLayout::from_config(cfg)?;
    Ok(CoolingLattice::from_layout(&layout))
}

impl CoolingLattice {
    pub fn from_layout(layout: &CoolingLayout) -> Self {
        CoolingLattice {
            n_qubits: layout.n_qubits,
            system: layout.system.clone(),
            bonds: layout.system.windows(2).map(|w| (w[0], w[1])).collect(),
            aux: layout
                .aux
                .iter()
                .map(|a| (a.qubit, layout.system[a.site - 1]))
                .collect(),
            gates_1d: Some(layout.clone()),
        }
    }

    /// `width × height` grid in row-major order with auxiliaries appended after
    /// the system and attached to the listed `(x, y)` sites.
    pub fn grid(width: usize, height: usize, aux_sites: &[(usize, usize)]) -> Result<Self> {
        let n_sys = width * height;
        if n_sys == 0 {
            return Err(Error::Argument("grid must be nonempty".into()));
        }
        let idx = |x: usize, y: usize| y * width + x;
        let mut bonds = Vec::new();
        for y in 0..height {
            for x in 0..width {
                if x + 1 < width {
                    bonds.push((idx(x, y), idx(x + 1, y)));
                }
                if y + 1 < height {
                    bonds.push((idx(x, y), idx(x, y + 1)));
                }
            }
        }
        let mut aux = Vec::new();
        for (k, &(x, y)) in aux_sites.iter().enumerate() {
            if x >= width || y >= height {
                return Err(Error::Argument(format!("auxiliary site ({x}, {y}) outside the grid")));
            }
            aux.push((n_sys + k, idx(x, y)));
        }
        Ok(CoolingLattice {
            n_qubits: n_sys + aux.len(),
            system: (0..n_sys).collect(),
            bonds,
            aux,
            gates_1d: None,
        })
    }

    /// Gates of one cycle: fields, Ising bonds, auxiliary exchange, auxiliary phase.
    pub fn cycle_gates(&self, g: f64, j: f64, theta: f64, h: f64) -> Vec<DenseGate> {
        if let Some(layout) = &self.gates_1d {
            return cycle_gates(layout, g, j, theta, h)
                .into_iter()
                .map(DenseGate::from)
                .collect();
        }
        let mut gates: Vec<DenseGate> = self.system.iter().map(|&q| DenseGate::PhaseZ { q, h: -g }).collect();
        gates.extend(self.bonds.iter().map(|&(a, b)| DenseGate::IsingXX { a, b, j }));
        gates.extend(self.aux.iter().map(|&(a, b)| DenseGate::Iswap { a, b, theta }));
        gates.extend(self.aux.iter().map(|&(q, _)| DenseGate::PhaseZ { q, h }));
        gates
    }

    /// `−g Σ⟨Z⟩ + J Σ⟨XX⟩` with local observables.
    pub fn observe(&self, s: &DenseState, g: f64, j: f64, cycle: usize) -> ObservableRecord {
        let z: Vec<f64> = self.system.iter().map(|&q| s.expect_pauli(&[(q, 'Z')])).collect();
        let xx: Vec<f64> = self
            .bonds
            .iter()
            .map(|&(a, b)| s.expect_pauli(&[(a, 'X'), (b, 'X')]))
            .collect();
        let energy = -g * z.iter().sum::<f64>() + j * xx.iter().sum::<f64>();
        ObservableRecord {
            cycle,
            energy,
            z,
            xx,
            entropy: Vec::new(),
        }
    }

    /// Initial state for `init`: all |1⟩, or a random CZ circuit applied to |0…0⟩.
    pub fn initial_state(&self, init: Init, trajectory: bool) -> Result<DenseState> {
        match init {
            Init::Vacuum => {
                let bits = vec![1u8; self.n_qubits];
                if trajectory {
                    DenseState::basis_psi(&bits)
                } else {
                    DenseState::basis_rho(&bits)
                }
            }
            Init::Scrambled { seed } => {
                let bits = vec![0u8; self.n_qubits];
                let mut s = if trajectory {
                    DenseState::basis_psi(&bits)?
                } else {
                    DenseState::basis_rho(&bits)?
                };
                s.apply_gates(&random_cz_circuit(self.n_qubits, 20, seed))?;
                Ok(s)
            }
        }
    }

    /// Advance one cycle `d`: reset (when due), cycle gates, then decoherence.
    #[allow(clippy::too_many_arguments)]
    pub fn step<R: Rng + ?Sized>(
        &self,
        s: &mut DenseState,
        gates: &[DenseGate],
        d: usize,
        reset_period: usize,
        noise: &NoiseRates,
        rng: &mut R,
    ) -> Result<()> {
        if resets_before(d, reset_period) {
            for &(a, _) in &self.aux {
                s.apply_reset_channel(a, 0, rng)?;
            }
        }
        s.apply_gates(gates)?;
        s.apply_decoherence(noise, rng)
    }
}

/// Random circuit of `depth` layers: one of √X, √Y, √W on every qubit, then
/// CZ on alternating neighbor pairs.
pub fn random_cz_circuit(n: usize, depth: usize, seed: u64) -> Vec<DenseGate> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let w = |p: U2| -> U2 {
        // √P up to a global phase: (I − iP)/√2.
        let mut u = [[c(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for k in 0..2 {
                let id = if i == k { 1.0 } else { 0.0 };
                u[i][k] = (c(id, 0.0) - I_UNIT * p[i][k]) * r;
            }
        }
        u
    };
    let (x, y) = (pauli('X'), pauli('Y'));
    let mut wp = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for k in 0..2 {
            wp[i][k] = (x[i][k] + y[i][k]) * r;
        }
    }
    let (sqrt_x, sqrt_y, sqrt_w) = (w(x), w(y), w(wp));
    let choices = [sqrt_x, sqrt_y, sqrt_w];
    let mut last = vec![usize::MAX; n];
    let mut gates = Vec::new();
    for layer in 0..depth {
        for (q, prev) in last.iter_mut().enumerate() {
            let mut k = rng.random_range(0..3);
            while k == *prev {
                k = rng.random_range(0..3);
            }
            *prev = k;
            gates.push(DenseGate::Single { q, u: choices[k] });
        }
        let mut q = layer % 2;
        while q + 1 < n {
            gates.push(DenseGate::Cphase {
                a: q,
                b: q + 1,
                phi: PI,
            });
            q += 2;
        }
    }
    gates
}

const I_UNIT: Complex64 = Complex64::new(0.0, 1.0);

/// Result of a dense cooling run.
#[derive(Clone, Debug)]
pub struct DenseCoolingRun {
    pub records: Vec<ObservableRecord>,
    /// Final state (density-matrix mode only).
    pub state: Option<DenseState>,
    /// Standard errors of the energy per cycle (trajectory mode only).
    pub energy_stderr: Option<Vec<f64>>,
}

/// Cooling run with the dense engine: exact channels when `trajectories` is
/// `None`, otherwise an unraveled ensemble of that size.
pub fn run_dense_cooling(
    cfg: &CoolingConfig,
    lattice: &CoolingLattice,
    trajectories: Option<usize>,
    seed: u64,
) -> Result<DenseCoolingRun> {
    cfg.validate()?;
    let gates = lattice.cycle_gates(cfg.g, cfg.j, cfg.theta, cfg.h);
    match trajectories {
        None => {
            let mut s = lattice.initial_state(cfg.init, false)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut records = vec![lattice.observe(&s, cfg.g, cfg.j, 0)];
            for d in 0..cfg.cycles {
                lattice.step(&mut s, &gates, d, cfg.reset_period, &cfg.noise, &mut rng)?;
                records.push(lattice.observe(&s, cfg.g, cfg.j, d + 1));
            }
            Ok(DenseCoolingRun {
                records,
                state: Some(s),
                energy_stderr: None,
            })
        }
        Some(n_traj) => {
            let init = lattice.initial_state(cfg.init, true)?;
            let n_sys = lattice.system.len();
            let stats: TrajectoryStats = run_trajectories(
                &init,
                cfg.cycles,
                n_traj,
                seed,
                |s, d, rng| lattice.step(s, &gates, d, cfg.reset_period, &cfg.noise, rng),
                |s, d| {
                    let r = lattice.observe(s, cfg.g, cfg.j, d);
                    let mut v = vec![r.energy];
                    v.extend(r.z);
                    v.extend(r.xx);
                    v
                },
            )?;
            let records = stats
                .mean
                .iter()
                .enumerate()
                .map(|(d, v)| ObservableRecord {
                    cycle: d,
                    energy: v[0],
                    z: v[1..1 + n_sys].to_vec(),
                    xx: v[1 + n_sys..].to_vec(),
                    entropy: Vec::new(),
                })
                .collect();
            Ok(DenseCoolingRun {
                records,
                state: None,
                energy_stderr: stats.stderr.map(|e| e.iter().map(|r| r[0]).collect()),
            })
        }
    }
}

/// Stabilization of one qubit to an eigenstate of `gX + JZ` through one auxiliary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StabilizeConfig {
    pub g: f64,
    #[serde(rename = "J")]
    pub j: f64,
    /// Partial-iSWAP angle in radians.
    pub theta: f64,
    /// Auxiliary exponent; `None` selects `√(g² + J²)`.
    #[serde(default)]
    pub h: Option<f64>,
    #[serde(default = "four")]
    pub reset_period: usize,
    pub cycles: usize,
    /// Number of Haar-random initial states.
    pub n_initial: usize,
    /// Averaging window `[start, end]` of cycles for the steady-state Bloch vector.
    pub window: (usize, usize),
    #[serde(default)]
    pub noise: NoiseRates,
    #[serde(default)]
    pub seed: u64,
}

fn four() -> usize {
    4
}

impl StabilizeConfig {
    /// Reference parameters `J = 0.18`, `g = −0.12`, `θ = 0.09`.
    pub fn reference() -> Self {
        StabilizeConfig {
            g: -0.12,
            j: 0.18,
            theta: 0.09,
            h: None,
            reset_period: 4,
            cycles: 300,
            n_initial: 20,
            window: (280, 300),
            noise: NoiseRates::NONE,
            seed: 0,
        }
    }

    pub fn aux_exponent(&self) -> f64 {
        self.h.unwrap_or_else(|| self.g.hypot(self.j))
    }

    /// Bloch vector `(⟨X⟩, ⟨Z⟩)` of the eigenstate `(g, J)/√(g² + J²)` selected
    /// by the auxiliary resonance.
    pub fn target(&self) -> (f64, f64) {
        let a = self.g.hypot(self.j);
        (self.g / a, self.j / a)
    }
}

/// Bloch-vector trajectories of the stabilized qubit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilizeResult {
    /// Per initial state: `(⟨X⟩, ⟨Z⟩)` after each cycle, starting at `d = 0`.
    pub bloch: Vec<Vec<(f64, f64)>>,
    /// Per initial state: window-averaged Bloch vector.
    pub steady: Vec<(f64, f64)>,
    pub target: (f64, f64),
    /// Largest Euclidean distance of a window average from the target.
    pub max_deviation: f64,
}

/// Run the single-qubit stabilization circuit from Haar-random initial states.
pub fn stabilize_single_qubit(cfg: &StabilizeConfig) -> Result<StabilizeResult> {
    if cfg.reset_period == 0 || cfg.n_initial == 0 {
        return Err(Error::config("reset_period", "must be positive"));
    }
    if cfg.window.0 > cfg.window.1 || cfg.window.1 > cfg.cycles {
        return Err(Error::config("window", "must satisfy start <= end <= cycles"));
    }
    cfg.noise.validate()?;
    let h = cfg.aux_exponent();
    // Qubit 0 is the system, qubit 1 the auxiliary.
    let (sg, cg) = (PI * cfg.g / 2.0).sin_cos();
    let ph = Complex64::from_polar(1.0, PI * cfg.g / 2.0);
    let x_pow: U2 = [[ph * c(cg, 0.0), ph * c(0.0, -sg)], [ph * c(0.0, -sg), ph * c(cg, 0.0)]];
    let gates = [
        DenseGate::Single { q: 0, u: x_pow },
        DenseGate::PhaseZ { q: 0, h: cfg.j },
        DenseGate::Iswap {
            a: 1,
            b: 0,
            theta: cfg.theta,
        },
        DenseGate::PhaseZ { q: 1, h },
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut bloch = Vec::with_capacity(cfg.n_initial);
    let mut steady = Vec::with_capacity(cfg.n_initial);
    for _ in 0..cfg.n_initial {
        let (a, b): (f64, f64) = (rng.random(), rng.random());
        let theta_b = (1.0 - 2.0 * a).acos();
        let phi_b = 2.0 * PI * b;
        let mut psi = crate::linalg::CVec::zeros(4);
        psi[0] = c((theta_b / 2.0).cos(), 0.0);
        psi[2] = Complex64::from_polar((theta_b / 2.0).sin(), phi_b);
        let mut s = DenseState::from_psi(psi)?.into_rho()?;
        let mut traj = vec![(s.expect_pauli(&[(0, 'X')]), s.expect_pauli(&[(0, 'Z')]))];
        for d in 0..cfg.cycles {
            if resets_before(d, cfg.reset_period) {
                s.apply_reset_channel(1, 0, &mut rng)?;
            }
            s.apply_gates(&gates)?;
            s.apply_decoherence(&cfg.noise, &mut rng)?;
            traj.push((s.expect_pauli(&[(0, 'X')]), s.expect_pauli(&[(0, 'Z')])));
        }
        let win = &traj[cfg.window.0..=cfg.window.1];
        let k = win.len() as f64;
        steady.push((
            win.iter().map(|p| p.0).sum::<f64>() / k,
            win.iter().map(|p| p.1).sum::<f64>() / k,
        ));
        bloch.push(traj);
    }
    let target = cfg.target();
    let max_deviation = steady
        .iter()
        .map(|p| (p.0 - target.0).hypot(p.1 - target.1))
        .fold(0.0, f64::max);
    Ok(StabilizeResult {
        bloch,
        steady,
        target,
        max_deviation,
    })
}
