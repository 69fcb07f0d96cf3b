//! Unitary preparation of the Floquet vacuum by a ladder of two-qubit
//! matchgates, and its comparison with dissipative cooling.
//!
//! The target covariance matrix is reduced to a product state by sweeping
//! Givens rotations over adjacent Majorana pairs. Sweep `m` zeroes row `2m`
//! beyond its own pair, pairing a `Z` rotation on site `k + 1` with an `XX`
//! rotation on `(k, k + 1)` for `k = L − 2, …, m`; the two-parameter gate
//!
//! ```text
//! G_n = exp(−iφ/2 Z_{i+1}) · exp(−iθ/2 X_i X_{i+1})
//! ```
//!
//! undoes one such pair. A final `X` on the last site (`B`) fixes the parity
//! when the target lies in the odd sector relative to `|0…0⟩`.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{CoolingConfig, Init};
use crate::dense::{cooling_lattice_1d, run_dense_cooling, DenseGate, DenseState};
use crate::eigenmodes::{solve_modes, EigenmodeTable};
use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::gaussian::{run_cooling, CovarianceState, DephasingMode};
use crate::linalg::{max_abs_real, RMat};
use crate::noise::NoiseRates;
use crate::rdm::{vacuum_fidelity, OneBodyRDM};

/// Tolerance of the compiled plan against the target covariance.
pub const PREP_TOL: f64 = 1e-8;

/// One ladder gate on sites `(site, site + 1)`, 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PrepGate {
    /// 1-based position in the plan.
    pub n: usize,
    pub site: usize,
    pub theta: f64,
    pub phi: f64,
    /// Parallel layer the gate belongs to.
    pub layer: usize,
}

impl PrepGate {
    /// The gate as matchgates in application order.
    pub fn gates(&self) -> [Gate; 2] {
        [
            Gate::IsingXX {
                a: self.site,
                b: self.site + 1,
                j: self.theta / PI,
            },
            Gate::PhaseZ {
                q: self.site + 1,
                h: self.phi / PI,
            },
        ]
    }
}

/// Compiled preparation circuit, applied to `|0…0⟩`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrepPlan {
    #[serde(rename = "L")]
    pub l: usize,
    /// Apply `X` to the last site before the ladder.
    pub flip_last: bool,
    /// Gates sorted by layer.
    pub gates: Vec<PrepGate>,
    pub n_layers: usize,
}

impl PrepPlan {
    /// Gates of one layer.
    pub fn layer(&self, k: usize) -> impl Iterator<Item = &PrepGate> {
        self.gates.iter().filter(move |g| g.layer == k)
    }

    /// All matchgates in application order, including `B`.
    pub fn circuit(&self) -> Vec<Gate> {
        let mut out = Vec::with_capacity(2 * self.gates.len() + 1);
        if self.flip_last {
            out.push(Gate::PauliX(self.l - 1));
        }
        out.extend(self.gates.iter().flat_map(|g| g.gates()));
        out
    }

    /// Noiseless execution on the Gaussian engine.
    pub fn prepare(&self) -> Result<CovarianceState> {
        let mut s = CovarianceState::product(&vec![0; self.l]);
        s.apply_gates(&self.circuit())?;
        Ok(s)
    }

    /// Gaussian execution with averaged dephasing after every layer.
    pub fn prepare_dephased(&self, noise: &NoiseRates) -> Result<CovarianceState> {
        let mut s = CovarianceState::product(&vec![0; self.l]);
        if self.flip_last {
            s.apply_gate(&Gate::PauliX(self.l - 1))?;
        }
        for k in 0..self.n_layers {
            for g in self.layer(k) {
                s.apply_gates(&g.gates())?;
            }
            s.apply_dephasing_average(noise);
        }
        Ok(s)
    }

    /// Dense density-matrix execution with the full decoherence channel
    /// after every layer.
    pub fn prepare_dense(&self, noise: &NoiseRates) -> Result<DenseState> {
        let mut s = DenseState::basis_rho(&vec![0; self.l])?;
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        if self.flip_last {
            s.apply_gate(&DenseGate::from(Gate::PauliX(self.l - 1)))?;
        }
        for k in 0..self.n_layers {
            for g in self.layer(k) {
                let gates: Vec<DenseGate> = g.gates().into_iter().map(DenseGate::from).collect();
                s.apply_gates(&gates)?;
            }
            s.apply_decoherence(noise, &mut rng)?;
        }
        Ok(s)
    }
}

/// Row rotation on `(p, p + 1)` applied as `γ → R γ Rᵀ`.
fn rotate(gamma: &mut RMat, p: usize, angle: f64) {
    let (s, c) = angle.sin_cos();
    let n = gamma.nrows();
    for k in 0..n {
        let (x, y) = (gamma[(p, k)], gamma[(p + 1, k)]);
        gamma[(p, k)] = c * x - s * y;
        gamma[(p + 1, k)] = s * x + c * y;
    }
    for k in 0..n {
        let (x, y) = (gamma[(k, p)], gamma[(k, p + 1)]);
        gamma[(k, p)] = c * x - s * y;
        gamma[(k, p + 1)] = s * x + c * y;
    }
}

/// Angle that moves `gamma[r][p + 1]` into `gamma[r][p]`, leaving a
/// nonnegative entry behind.
fn elimination_angle(gamma: &RMat, r: usize, p: usize) -> f64 {
    (-gamma[(r, p + 1)]).atan2(gamma[(r, p)])
}

/// Preparation plan for an arbitrary pure covariance matrix.
pub fn compile_covariance(target: &RMat) -> Result<PrepPlan> {
    let n = target.nrows();
    if n == 0 || n % 2 != 0 || target.ncols() != n {
        return Err(Error::Dimension(format!(
            "covariance of shape {}x{}",
            n,
            target.ncols()
        )));
    }
    let l = n / 2;
    let purity = max_abs_real(&(target * target.transpose() - RMat::identity(n, n)));
    if purity > PREP_TOL {
        return Err(Error::Compilation(format!(
            "target is not pure: |γγᵀ − I| = {purity:.2e}"
        )));
    }
    let mut gamma = target.clone();
    // (site, Z angle, XX angle) in reduction order.
    let mut steps: Vec<(usize, f64, f64)> = Vec::with_capacity(l * l.saturating_sub(1) / 2);
    for m in 0..l.saturating_sub(1) {
        let r = 2 * m;
        for k in (m..l - 1).rev() {
            let az = elimination_angle(&gamma, r, 2 * k + 2);
            rotate(&mut gamma, 2 * k + 2, az);
            let axx = elimination_angle(&gamma, r, 2 * k + 1);
            rotate(&mut gamma, 2 * k + 1, axx);
            steps.push((k, az, axx));
        }
    }
    let flip_last = gamma[(n - 2, n - 1)] < 0.0;
    // Reverse the reduction: inverse rotations in reverse order.
    let mut depth = vec![0usize; l];
    let mut gates: Vec<PrepGate> = steps
        .iter()
        .rev()
        .map(|&(k, az, axx)| {
            let layer = depth[k].max(depth[k + 1]);
            depth[k] = layer + 1;
            depth[k + 1] = layer + 1;
            PrepGate {
                n: 0,
                site: k,
                theta: -axx,
                phi: -az,
                layer,
            }
        })
        .collect();
    gates.sort_by_key(|g| g.layer);
    for (i, g) in gates.iter_mut().enumerate() {
        g.n = i + 1;
    }
    let plan = PrepPlan {
        l,
        flip_last,
        n_layers: depth.into_iter().max().unwrap_or(0),
        gates,
    };
    let prepared = plan.prepare()?;
    let err = max_abs_real(&(prepared.gamma() - target));
    if err > PREP_TOL {
        return Err(Error::Compilation(format!("prepared covariance deviates by {err:.2e}")));
    }
    Ok(plan)
}

/// Preparation plan for the quasiparticle vacuum of `table`.
pub fn compile_prep(table: &EigenmodeTable) -> Result<PrepPlan> {
    compile_covariance(&OneBodyRDM::floquet_vacuum(table).gamma()?)
}

/// Engine used by [`run_comparison`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrepEngine {
    /// Covariance matrices with averaged dephasing; decay must be zero.
    Gaussian,
    /// Density matrices with the full decoherence channel.
    Dense,
}

/// Dissipative protocol of the comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cooling {
    pub g: f64,
    #[serde(rename = "J")]
    pub j: f64,
    pub theta: f64,
    pub h: f64,
    pub reset_period: usize,
    /// Cycles per system site.
    pub cycles_per_site: f64,
    pub seed: u64,
}

impl Cooling {
    /// Edge-cooled critical chain at `θ = 0.11π`, `h = 1.65`.
    pub fn critical() -> Self {
        Cooling {
            g: 0.2,
            j: 0.2,
            theta: 0.11 * PI,
            h: 1.65,
            reset_period: 4,
            cycles_per_site: 100.0 / 6.0,
            seed: 0,
        }
    }

    /// Cooling configuration for a chain of length `l`.
    pub fn config(&self, l: usize, noise: NoiseRates) -> CoolingConfig {
        let mut cfg = CoolingConfig::edge_cooled(
            l,
            self.g,
            self.j,
            self.theta,
            self.h,
            (self.cycles_per_site * l as f64).round() as usize,
        );
        cfg.reset_period = self.reset_period;
        cfg.noise = noise;
        cfg.init = Init::Scrambled { seed: self.seed };
        cfg
    }
}

/// One row of the comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonRow {
    #[serde(rename = "L")]
    pub l: usize,
    pub fid_d: f64,
    pub fid_u: f64,
    pub fid_d_pure: f64,
    pub fid_u_pure: f64,
    /// Quasienergies of the modes, ascending.
    pub phi: Vec<f64>,
    pub occ_d: Vec<f64>,
    pub occ_u: Vec<f64>,
}

/// Raw and purified vacuum fidelity with the occupations of the raw state.
fn fidelities(rdm: &OneBodyRDM, table: &EigenmodeTable) -> Result<(f64, f64, Vec<f64>)> {
    let occ = rdm.to_eigenbasis(table)?.occupations()?;
    let pure = rdm.purify().rdm.to_eigenbasis(table)?.occupations()?;
    Ok((vacuum_fidelity(&occ, None), vacuum_fidelity(&pure, None), occ))
}

fn comparison_row(l: usize, noise: &NoiseRates, protocol: &Cooling, engine: PrepEngine) -> Result<ComparisonRow> {
    let table = solve_modes(protocol.g, protocol.j, l)?;
    let plan = compile_prep(&table)?;
    let cfg = protocol.config(l, *noise);
    let (rdm_d, rdm_u) = match engine {
        PrepEngine::Gaussian => {
            if noise.gamma_decay != 0.0 {
                return Err(Error::Capability("amplitude damping needs the dense engine".into()));
            }
            let run = run_cooling(&cfg, DephasingMode::Average, protocol.seed, false)?;
            let sys = run.layout.system[0]..run.layout.system[0] + l;
            (
                OneBodyRDM::from_covariance(&run.state, sys),
                OneBodyRDM::from_covariance(&plan.prepare_dephased(noise)?, 0..l),
            )
        }
        PrepEngine::Dense => {
            let lattice = cooling_lattice_1d(&cfg)?;
            let run = run_dense_cooling(&cfg, &lattice, None, protocol.seed)?;
            let state = run
                .state
                .ok_or_else(|| Error::Capability("dense run returned no state".into()))?;
            let all: Vec<usize> = (0..l).collect();
            (
                OneBodyRDM::from_dense(&state, &lattice.system)?,
                OneBodyRDM::from_dense(&plan.prepare_dense(noise)?, &all)?,
            )
        }
    };
    let (fid_d, fid_d_pure, occ_d) = fidelities(&rdm_d, &table)?;
    let (fid_u, fid_u_pure, occ_u) = fidelities(&rdm_u, &table)?;
    Ok(ComparisonRow {
        l,
        fid_d,
        fid_u,
        fid_d_pure,
        fid_u_pure,
        phi: table.modes.iter().map(|m| m.phi).collect(),
        occ_d,
        occ_u,
    })
}

/// Vacuum fidelities of dissipative cooling and unitary preparation for
/// each chain length, with the same per-cycle and per-layer noise.
pub fn run_comparison(
    lengths: &[usize],
    noise: &NoiseRates,
    protocol: &Cooling,
    engine: PrepEngine,
) -> Result<Vec<ComparisonRow>> {
    lengths
        .par_iter()
        .map(|&l| comparison_row(l, noise, protocol, engine))
        .collect()
}
