//! Majorana covariance simulator for matchgate circuits with resets.
//!
//! Qubit `j` (0-based, Jordan–Wigner order) carries the Majoranas
//! `a[2j] = (Π_{k<j} Z_k) X_j` and `a[2j+1] = (Π_{k<j} Z_k) Y_j`, with
//! `Z|0⟩ = |0⟩`. The covariance is `gamma[k][l] = Im⟨a_k a_l⟩`, so
//! `⟨Z_j⟩ = gamma[2j][2j+1]` and `⟨X_j X_{j+1}⟩ = gamma[2j+1][2j+2]`.

use std::f64::consts::PI;
use std::ops::Range;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::{CoolingConfig, Init};
use crate::cooling::{cycle_gates, resets_before, CoolingLayout};
use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::linalg::{binary_entropy, max_abs_real, pfaffian, random_special_orthogonal, singular_values, RMat};
use crate::noise::NoiseRates;

/// Gaussian fermionic state of `n_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceState {
    gamma: RMat,
    n_qubits: usize,
    rng_seed: u64,
}

/// Elementary action of a gate on Majorana modes.
#[derive(Clone, Copy, Debug, PartialEq)]
enum ModeOp {
    /// Rotation `[[c, -s], [s, c]]` on modes (p, q).
    Rotate(usize, usize, f64),
    /// Sign flip of the modes in the set.
    Flip(FlipSet),
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct FlipSet {
    single: Option<usize>,
    pair: Option<(usize, usize)>,
    from: Option<usize>,
}

impl FlipSet {
    fn contains(&self, m: usize) -> bool {
        self.single == Some(m) || self.pair.is_some_and(|(a, b)| m == a || m == b) || self.from.is_some_and(|f| m >= f)
    }
}

fn mode_ops(gate: &Gate, n_qubits: usize) -> Result<Vec<ModeOp>> {
    let check = |q: usize| {
        if q >= n_qubits {
            Err(Error::Dimension(format!("qubit {q} outside 0..{n_qubits}")))
        } else {
            Ok(())
        }
    };
    let adjacent = |a: usize, b: usize, name: &str| -> Result<usize> {
        check(a)?;
        check(b)?;
        if a.abs_diff(b) != 1 {
            return Err(Error::UnsupportedGate(format!(
                "{name} on qubits ({a}, {b}) is not adjacent in Jordan-Wigner order"
            )));
        }
        Ok(a.min(b))
    };
    Ok(match *gate {
        Gate::PhaseZ { q, h } => {
            check(q)?;
            vec![ModeOp::Rotate(2 * q, 2 * q + 1, PI * h)]
        }
        Gate::IsingXX { a, b, j } => {
            let l = adjacent(a, b, "IsingXX")?;
            vec![ModeOp::Rotate(2 * l + 1, 2 * l + 2, PI * j)]
        }
        Gate::PartialIswap { a, b, theta } => {
            let l = adjacent(a, b, "PartialIswap")?;
            vec![
                ModeOp::Rotate(2 * l + 1, 2 * l + 2, -theta),
                ModeOp::Rotate(2 * l, 2 * l + 3, theta),
            ]
        }
        Gate::PauliX(q) => {
            check(q)?;
            vec![ModeOp::Flip(FlipSet {
                single: Some(2 * q + 1),
                pair: None,
                from: Some(2 * q + 2),
            })]
        }
        Gate::PauliY(q) => {
            check(q)?;
            vec![ModeOp::Flip(FlipSet {
                single: Some(2 * q),
                pair: None,
                from: Some(2 * q + 2),
            })]
        }
        Gate::PauliZ(q) => {
            check(q)?;
            vec![ModeOp::Flip(FlipSet {
                single: None,
                pair: Some((2 * q, 2 * q + 1)),
                from: None,
            })]
        }
    })
}

fn rotate_rows(m: &mut RMat, p: usize, q: usize, angle: f64) {
    let (s, c) = angle.sin_cos();
    for k in 0..m.ncols() {
        let (x, y) = (m[(p, k)], m[(q, k)]);
        m[(p, k)] = c * x - s * y;
        m[(q, k)] = s * x + c * y;
    }
}

fn rotate_cols(m: &mut RMat, p: usize, q: usize, angle: f64) {
    let (s, c) = angle.sin_cos();
    for k in 0..m.nrows() {
        let (x, y) = (m[(k, p)], m[(k, q)]);
        m[(k, p)] = c * x - s * y;
        m[(k, q)] = s * x + c * y;
    }
}

/// Orthogonal matrix `R` with `gamma -> R gamma Rᵀ` for the whole gate list.
pub fn circuit_rotation(gates: &[Gate], n_qubits: usize) -> Result<RMat> {
    let n = 2 * n_qubits;
    let mut r = RMat::identity(n, n);
    for gate in gates {
        for op in mode_ops(gate, n_qubits)? {
            match op {
                ModeOp::Rotate(p, q, a) => rotate_rows(&mut r, p, q, a),
                ModeOp::Flip(set) => {
                    for m in 0..n {
                        if set.contains(m) {
                            r.row_mut(m).neg_mut();
                        }
                    }
                }
            }
        }
    }
    Ok(r)
}

fn pair_block(gamma: &mut RMat, q: usize, value: f64) {
    gamma[(2 * q, 2 * q + 1)] = value;
    gamma[(2 * q + 1, 2 * q)] = -value;
}

impl CovarianceState {
    /// All qubits in |1⟩.
    pub fn vacuum(n_qubits: usize) -> Self {
        Self::product(&vec![1u8; n_qubits])
    }

    /// Computational-basis product state.
    pub fn product(bits: &[u8]) -> Self {
        let n = bits.len();
        let mut gamma = RMat::zeros(2 * n, 2 * n);
        for (q, &b) in bits.iter().enumerate() {
            pair_block(&mut gamma, q, if b == 0 { 1.0 } else { -1.0 });
        }
        CovarianceState {
            gamma,
            n_qubits: n,
            rng_seed: 0,
        }
    }

    /// Vacuum rotated by a seeded Haar-random special-orthogonal matrix.
    pub fn scrambled(n_qubits: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = random_special_orthogonal(2 * n_qubits, &mut rng);
        let vac = Self::vacuum(n_qubits);
        CovarianceState {
            gamma: &r * vac.gamma * r.transpose(),
            n_qubits,
            rng_seed: seed,
        }
    }

    /// Wrap a covariance matrix after checking antisymmetry and physicality.
    pub fn from_gamma(gamma: RMat) -> Result<Self> {
        if gamma.nrows() != gamma.ncols() || gamma.nrows() % 2 != 0 {
            return Err(Error::Dimension("covariance must be square with even size".into()));
        }
        let s = CovarianceState {
            n_qubits: gamma.nrows() / 2,
            gamma,
            rng_seed: 0,
        };
        s.check()?;
        Ok(s)
    }

    pub fn init(cfg: &CoolingConfig, n_qubits: usize) -> Result<Self> {
        cfg.validate()?;
        Ok(match cfg.init {
            Init::Vacuum => Self::vacuum(n_qubits),
            Init::Scrambled { seed } => Self::scrambled(n_qubits, seed),
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn gamma(&self) -> &RMat {
        &self.gamma
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_modes(&self) -> usize {
        2 * self.n_qubits
    }

    pub fn rng_seed(&self) -> u64 {
        self.rng_seed
    }

    /// Antisymmetry and spectral bounds of `i gamma`.
    pub fn check(&self) -> Result<()> {
        let asym = max_abs_real(&(&self.gamma + self.gamma.transpose()));
        if asym > 1e-12 {
            return Err(Error::Argument(format!("covariance not antisymmetric ({asym:e})")));
        }
        let top = singular_values(&self.gamma).first().copied().unwrap_or(0.0);
        if top > 1.0 + 1e-9 {
            return Err(Error::Argument(format!("covariance spectrum exceeds 1 ({top})")));
        }
        Ok(())
    }

    /// Distance of `gamma gammaᵀ` from the identity; zero for pure states.
    pub fn purity_defect(&self) -> f64 {
        let n = self.n_modes();
        max_abs_real(&(&self.gamma * self.gamma.transpose() - RMat::identity(n, n)))
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        for op in mode_ops(gate, self.n_qubits)? {
            match op {
                ModeOp::Rotate(p, q, a) => {
                    rotate_rows(&mut self.gamma, p, q, a);
                    rotate_cols(&mut self.gamma, p, q, a);
                }
                ModeOp::Flip(set) => {
                    let n = self.n_modes();
                    for k in 0..n {
                        for l in 0..n {
                            if set.contains(k) != set.contains(l) {
                                self.gamma[(k, l)] = -self.gamma[(k, l)];
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn apply_gates(&mut self, gates: &[Gate]) -> Result<()> {
        gates.iter().try_for_each(|g| self.apply_gate(g))
    }

    /// `gamma -> R gamma Rᵀ` for a precompiled orthogonal matrix.
    pub fn apply_rotation(&mut self, r: &RMat) {
        self.gamma = r * &self.gamma * r.transpose();
    }

    /// Trace out qubit `q` and replace it by |target⟩.
    pub fn reset_qubit(&mut self, q: usize, target: u8) -> Result<()> {
        if q >= self.n_qubits {
            return Err(Error::Dimension(format!("qubit {q} outside 0..{}", self.n_qubits)));
        }
        for m in [2 * q, 2 * q + 1] {
            self.gamma.row_mut(m).fill(0.0);
            self.gamma.column_mut(m).fill(0.0);
        }
        pair_block(&mut self.gamma, q, if target == 0 { 1.0 } else { -1.0 });
        Ok(())
    }

    /// One trajectory step of single-qubit dephasing: each qubit receives Z
    /// with probability `(1 - exp(-gamma_dephase)) / 2`.
    pub fn apply_dephasing_trajectory<R: Rng + ?Sized>(&mut self, rates: &NoiseRates, rng: &mut R) {
        let p = rates.flip_probability();
        if p == 0.0 {
            return;
        }
        for q in 0..self.n_qubits {
            if rng.random::<f64>() < p {
                self.apply_gate(&Gate::PauliZ(q)).expect("qubit in range");
            }
        }
    }

    /// Ensemble average of the dephasing step: cross-qubit correlations decay
    /// by `exp(-2 gamma_dephase)`.
    pub fn apply_dephasing_average(&mut self, rates: &NoiseRates) {
        if rates.gamma_dephase == 0.0 {
            return;
        }
        let f = (-2.0 * rates.gamma_dephase).exp();
        let n = self.n_modes();
        for k in 0..n {
            for l in 0..n {
                if k / 2 != l / 2 {
                    self.gamma[(k, l)] *= f;
                }
            }
        }
    }

    pub fn z(&self, q: usize) -> f64 {
        self.gamma[(2 * q, 2 * q + 1)]
    }

    /// `⟨X_q X_{q+1}⟩` for neighbouring qubits.
    pub fn xx(&self, q: usize) -> f64 {
        self.gamma[(2 * q + 1, 2 * q + 2)]
    }

    /// `⟨Y_j (Π_{j<m<k} Z_m) Y_k⟩` for `j < k`.
    pub fn y_string_y(&self, j: usize, k: usize) -> f64 {
        -self.gamma[(2 * j, 2 * k + 1)]
    }

    /// Expectation of a Pauli string given as `(qubit, 'X' | 'Y' | 'Z')`
    /// factors on distinct qubits, via Wick's theorem.
    pub fn expect_pauli(&self, factors: &[(usize, char)]) -> Result<f64> {
        let mut sorted = factors.to_vec();
        sorted.sort_by_key(|f| f.0);
        if sorted.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Argument("Pauli factors must act on distinct qubits".into()));
        }
        // Product of Majoranas with coefficient: Z = −i a_{2q} a_{2q+1},
        // X = (Π_{k<q} Z_k) a_{2q}, Y = (Π_{k<q} Z_k) a_{2q+1}.
        let mut coef = Complex64::new(1.0, 0.0);
        let mut word: Vec<usize> = Vec::new();
        for &(q, p) in &sorted {
            if q >= self.n_qubits {
                return Err(Error::Dimension(format!("qubit {q} outside 0..{}", self.n_qubits)));
            }
            match p {
                'Z' => {
                    coef *= Complex64::new(0.0, -1.0);
                    word.extend([2 * q, 2 * q + 1]);
                }
                'X' | 'Y' => {
                    for k in 0..q {
                        coef *= Complex64::new(0.0, -1.0);
                        word.extend([2 * k, 2 * k + 1]);
                    }
                    word.push(if p == 'X' { 2 * q } else { 2 * q + 1 });
                }
                'I' => {}
                _ => return Err(Error::Argument(format!("unknown Pauli `{p}`"))),
            }
        }
        // Normal-order by insertion sort; equal neighbours square to one.
        let mut ordered: Vec<usize> = Vec::with_capacity(word.len());
        for m in word {
            let pos = ordered.partition_point(|&x| x < m);
            if (ordered.len() - pos) % 2 == 1 {
                coef = -coef;
            }
            if ordered.get(pos) == Some(&m) {
                // Move past the equal element first, then annihilate the pair.
                coef = -coef;
                ordered.remove(pos);
            } else {
                ordered.insert(pos, m);
            }
        }
        if ordered.len() % 2 == 1 {
            return Ok(0.0);
        }
        let sub = RMat::from_fn(ordered.len(), ordered.len(), |a, b| {
            self.gamma[(ordered[a], ordered[b])]
        });
        let half = ordered.len() / 2;
        let value = coef * Complex64::new(0.0, 1.0).powu(half as u32) * pfaffian(&sub);
        Ok(value.re)
    }

    /// Von Neumann entropy in bits of the contiguous qubit range.
    pub fn entropy(&self, qubits: Range<usize>) -> f64 {
        let m0 = 2 * qubits.start;
        let len = 2 * qubits.len();
        let block = self.gamma.view((m0, m0), (len, len)).into_owned();
        covariance_entropy(&block)
    }

    /// Restriction to a contiguous qubit range.
    pub fn subsystem(&self, qubits: Range<usize>) -> CovarianceState {
        let m0 = 2 * qubits.start;
        let len = 2 * qubits.len();
        CovarianceState {
            gamma: self.gamma.view((m0, m0), (len, len)).into_owned(),
            n_qubits: qubits.len(),
            rng_seed: self.rng_seed,
        }
    }
}

/// Entropy in bits of the Gaussian state with covariance `block`.
pub fn covariance_entropy(block: &RMat) -> f64 {
    singular_values(block)
        .iter()
        .map(|&nu| 0.5 * binary_entropy(0.5 * (1.0 + nu.min(1.0))))
        .sum()
}

/// Observables recorded after a cycle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObservableRecord {
    pub cycle: usize,
    /// `⟨H⟩ = -g Σ⟨Z⟩ + J Σ⟨XX⟩` over system sites.
    pub energy: f64,
    pub z: Vec<f64>,
    pub xx: Vec<f64>,
    /// Entropies of the system prefixes `1..=r`, empty when not requested.
    #[serde(default)]
    pub entropy: Vec<f64>,
}

/// Energy and local observables of the system qubits.
pub fn observe(
    state: &CovarianceState,
    layout: &CoolingLayout,
    g: f64,
    j: f64,
    cycle: usize,
    entropies: bool,
) -> ObservableRecord {
    let z: Vec<f64> = layout.system.iter().map(|&q| state.z(q)).collect();
    let xx: Vec<f64> = layout
        .system
        .windows(2)
        .map(|w| {
            debug_assert_eq!(w[1], w[0] + 1);
            state.xx(w[0])
        })
        .collect();
    let energy = -g * z.iter().sum::<f64>() + j * xx.iter().sum::<f64>();
    let entropy = if entropies && layout.system_contiguous() {
        let s0 = layout.system[0];
        (1..=layout.l).map(|r| state.entropy(s0..s0 + r)).collect()
    } else {
        Vec::new()
    };
    ObservableRecord {
        cycle,
        energy,
        z,
        xx,
        entropy,
    }
}

/// How dephasing enters a Gaussian cooling run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DephasingMode {
    /// Sample Z flips from the trajectory seed.
    #[default]
    Trajectory,
    /// Apply the exact ensemble-averaged map to the covariance.
    Average,
}

/// Result of a Gaussian cooling run.
#[derive(Clone, Debug)]
pub struct GaussianRun {
    pub layout: CoolingLayout,
    pub records: Vec<ObservableRecord>,
    pub state: CovarianceState,
}

/// Cooling simulation with the Gaussian engine.
pub fn run_cooling(
    cfg: &CoolingConfig,
    mode: DephasingMode,
    trajectory_seed: u64,
    entropies: bool,
) -> Result<GaussianRun> {
    let layout = CoolingLayout::from_config(cfg)?;
    if cfg.noise.gamma_decay > 0.0 {
        return Err(Error::Capability(
            "amplitude damping is not Gaussian; use the dense engine".into(),
        ));
    }
    let mut state = CovarianceState::init(cfg, layout.n_qubits)?.with_seed(trajectory_seed);
    let rot = circuit_rotation(&cycle_gates(&layout, cfg.g, cfg.j, cfg.theta, cfg.h), layout.n_qubits)?;
    let mut rng = ChaCha8Rng::seed_from_u64(trajectory_seed);
    let mut records = vec![observe(&state, &layout, cfg.g, cfg.j, 0, entropies)];
    for d in 0..cfg.cycles {
        if resets_before(d, cfg.reset_period) {
            for a in &layout.aux {
                state.reset_qubit(a.qubit, 0)?;
            }
        }
        state.apply_rotation(&rot);
        match mode {
            DephasingMode::Trajectory => state.apply_dephasing_trajectory(&cfg.noise, &mut rng),
            DephasingMode::Average => state.apply_dephasing_average(&cfg.noise),
        }
        if cfg!(debug_assertions) {
            state.check()?;
        }
        records.push(observe(&state, &layout, cfg.g, cfg.j, d + 1, entropies));
    }
    Ok(GaussianRun { layout, records, state })
}

/// Exact limit cycle of the noiseless reset-periodic map.
///
/// Returns the state immediately after an auxiliary reset. The system block
/// `X` solves `X = B X Bᵀ + C`, with `B` the system block of one reset period
/// and `C` the image of the freshly reset auxiliaries; the series is summed by
/// repeated squaring.
pub fn periodic_steady_state(cfg: &CoolingConfig) -> Result<(CoolingLayout, CovarianceState)> {
    let layout = CoolingLayout::from_config(cfg)?;
    let n = layout.n_qubits;
    let one = circuit_rotation(&cycle_gates(&layout, cfg.g, cfg.j, cfg.theta, cfg.h), n)?;
    let mut period = RMat::identity(2 * n, 2 * n);
    for _ in 0..cfg.reset_period {
        period = &one * period;
    }
    let aux_q = layout.aux_qubits();
    let aux_modes: Vec<usize> = aux_q.iter().flat_map(|&q| [2 * q, 2 * q + 1]).collect();
    let sys_modes: Vec<usize> = (0..2 * n).filter(|m| !aux_modes.contains(m)).collect();
    let ns = sys_modes.len();
    let na = aux_modes.len();
    let b = RMat::from_fn(ns, ns, |i, k| period[(sys_modes[i], sys_modes[k])]);
    let a = RMat::from_fn(ns, na, |i, k| period[(sys_modes[i], aux_modes[k])]);
    let mut ga = RMat::zeros(na, na);
    for k in 0..na / 2 {
        ga[(2 * k, 2 * k + 1)] = 1.0;
        ga[(2 * k + 1, 2 * k)] = -1.0;
    }
    let mut x = &a * ga * a.transpose();
    let mut bk = b;
    let mut converged = false;
    for _ in 0..200 {
        let inc = &bk * &x * bk.transpose();
        x += &inc;
        bk = &bk * &bk;
        if max_abs_real(&inc) < 1e-15 && max_abs_real(&bk) < 1e-12 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NotConverged(
            "reset map has a non-decaying system mode; steady state is not unique".into(),
        ));
    }
    let mut gamma = RMat::zeros(2 * n, 2 * n);
    for (i, &mi) in sys_modes.iter().enumerate() {
        for (k, &mk) in sys_modes.iter().enumerate() {
            gamma[(mi, mk)] = x[(i, k)];
        }
    }
    for &q in &aux_q {
        pair_block(&mut gamma, q, 1.0);
    }
    let state = CovarianceState {
        gamma,
        n_qubits: n,
        rng_seed: 0,
    };
    Ok((layout, state))
}

/// Observables averaged over the cycles of the noiseless limit cycle.
pub fn limit_cycle_average(cfg: &CoolingConfig) -> Result<(CovarianceState, ObservableRecord)> {
    let (layout, start) = periodic_steady_state(cfg)?;
    let rot = circuit_rotation(&cycle_gates(&layout, cfg.g, cfg.j, cfg.theta, cfg.h), layout.n_qubits)?;
    let mut s = start.clone();
    let mut acc: Option<ObservableRecord> = None;
    for _ in 0..cfg.reset_period {
        s.apply_rotation(&rot);
        let r = observe(&s, &layout, cfg.g, cfg.j, 0, false);
        acc = Some(match acc {
            None => r,
            Some(mut a) => {
                a.energy += r.energy;
                a.z.iter_mut().zip(&r.z).for_each(|(x, y)| *x += y);
                a.xx.iter_mut().zip(&r.xx).for_each(|(x, y)| *x += y);
                a
            }
        });
    }
    let mut avg = acc.expect("reset period >= 1");
    let p = cfg.reset_period as f64;
    avg.energy /= p;
    avg.z.iter_mut().for_each(|x| *x /= p);
    avg.xx.iter_mut().for_each(|x| *x /= p);
    Ok((start, avg))
}
