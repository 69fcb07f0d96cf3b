//! Exact density-matrix and state-vector engine for small registers.
//!
//! Basis index bit `n - 1 - q` holds qubit `q` (qubit 0 is the most
//! significant), and `Z|0⟩ = |0⟩`, `Z|1⟩ = -|1⟩`.

mod circuits;
mod measures;
mod trajectory;

pub use circuits::{
    cooling_lattice_1d, random_cz_circuit, run_dense_cooling, stabilize_single_qubit, CoolingLattice, DenseCoolingRun,
    StabilizeConfig, StabilizeResult,
};
pub use measures::{concurrence, concurrence_of, renyi2_entropy, renyi_mi};
pub use trajectory::{run_trajectories, TrajectoryStats};

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::linalg::{c, CMat, CVec, I};
use crate::noise::NoiseRates;
use num_complex::Complex64;

/// Default qubit cap in density-matrix mode.
pub const RHO_CAP: usize = 12;
/// Default qubit cap in state-vector mode.
pub const PSI_CAP: usize = 20;

pub type U2 = [[Complex64; 2]; 2];
pub type U4 = [[Complex64; 4]; 4];

/// Gates of the dense engine.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DenseGate {
    /// `diag(1, 1, 1, e^{iφ})`.
    Cphase {
        a: usize,
        b: usize,
        phi: f64,
    },
    /// `exp(i(φ n_a n_b + θ(σ⁺σ⁻ + σ⁻σ⁺)))`.
    Fsim {
        a: usize,
        b: usize,
        theta: f64,
        phi: f64,
    },
    /// `exp(iθ/2 (XX + YY))`.
    Iswap {
        a: usize,
        b: usize,
        theta: f64,
    },
    /// `exp(-iπJ/2 XX)`.
    IsingXX {
        a: usize,
        b: usize,
        j: f64,
    },
    /// `Z^h = diag(1, e^{iπh})`.
    PhaseZ {
        q: usize,
        h: f64,
    },
    X(usize),
    Y(usize),
    Z(usize),
    Single {
        q: usize,
        u: U2,
    },
    Two {
        a: usize,
        b: usize,
        u: U4,
    },
}

impl From<Gate> for DenseGate {
    fn from(g: Gate) -> Self {
        match g {
            Gate::PhaseZ { q, h } => DenseGate::PhaseZ { q, h },
            Gate::IsingXX { a, b, j } => DenseGate::IsingXX { a, b, j },
            Gate::PartialIswap { a, b, theta } => DenseGate::Iswap { a, b, theta },
            Gate::PauliX(q) => DenseGate::X(q),
            Gate::PauliY(q) => DenseGate::Y(q),
            Gate::PauliZ(q) => DenseGate::Z(q),
        }
    }
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn pauli(p: char) -> U2 {
    match p {
        'X' => [[ZERO, ONE], [ONE, ZERO]],
        'Y' => [[ZERO, -I], [I, ZERO]],
        'Z' => [[ONE, ZERO], [ZERO, -ONE]],
        _ => [[ONE, ZERO], [ZERO, ONE]],
    }
}

fn fsim_matrix(theta: f64, phi: f64) -> U4 {
    let (s, co) = theta.sin_cos();
    let mut u = [[ZERO; 4]; 4];
    u[0][0] = ONE;
    u[1][1] = c(co, 0.0);
    u[2][2] = c(co, 0.0);
    u[1][2] = c(0.0, s);
    u[2][1] = c(0.0, s);
    u[3][3] = Complex64::from_polar(1.0, phi);
    u
}

impl DenseGate {
    /// Matrix form: a 2×2 matrix with its qubit, or a 4×4 matrix on (a, b) with `a` the high bit.
    pub fn matrix(&self) -> GateMatrix {
        match *self {
            DenseGate::Cphase { a, b, phi } => {
                let mut u = fsim_matrix(0.0, phi);
                u[1][1] = ONE;
                u[2][2] = ONE;
                GateMatrix::Two(a, b, u)
            }
            DenseGate::Fsim { a, b, theta, phi } => GateMatrix::Two(a, b, fsim_matrix(theta, phi)),
            DenseGate::Iswap { a, b, theta } => GateMatrix::Two(a, b, fsim_matrix(theta, 0.0)),
            DenseGate::IsingXX { a, b, j } => {
                let (s, co) = (std::f64::consts::PI * j / 2.0).sin_cos();
                let mut u = [[ZERO; 4]; 4];
                for k in 0..4 {
                    u[k][k] = c(co, 0.0);
                    u[k][3 - k] = c(0.0, -s);
                }
                GateMatrix::Two(a, b, u)
            }
            DenseGate::PhaseZ { q, h } => GateMatrix::One(
                q,
                [
                    [ONE, ZERO],
                    [ZERO, Complex64::from_polar(1.0, std::f64::consts::PI * h)],
                ],
            ),
            DenseGate::X(q) => GateMatrix::One(q, pauli('X')),
            DenseGate::Y(q) => GateMatrix::One(q, pauli('Y')),
            DenseGate::Z(q) => GateMatrix::One(q, pauli('Z')),
            DenseGate::Single { q, u } => GateMatrix::One(q, u),
            DenseGate::Two { a, b, u } => GateMatrix::Two(a, b, u),
        }
    }
}

/// Matrix representation of a gate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateMatrix {
    One(usize, U2),
    Two(usize, usize, U4),
}

/// Largest deviation of `U†U` from the identity.
pub fn unitarity_defect(g: &GateMatrix) -> f64 {
    let (n, get): (usize, Box<dyn Fn(usize, usize) -> Complex64>) = match g {
        GateMatrix::One(_, u) => {
            let u = *u;
            (2, Box::new(move |i, j| u[i][j]))
        }
        GateMatrix::Two(_, _, u) => {
            let u = *u;
            (4, Box::new(move |i, j| u[i][j]))
        }
    };
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let mut s = ZERO;
            for k in 0..n {
                s += get(k, i).conj() * get(k, j);
            }
            let target = if i == j { ONE } else { ZERO };
            worst = worst.max((s - target).norm());
        }
    }
    worst
}

#[derive(Clone, Debug, PartialEq)]
enum Repr {
    Rho(CMat),
    Psi(CVec),
}

/// Exact state of `n` qubits, either a density matrix or a pure trajectory vector.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    n: usize,
    repr: Repr,
}

fn mask(n: usize, q: usize) -> usize {
    1 << (n - 1 - q)
}

/// Apply a 2×2 matrix to every column of a column-major buffer of length `dim * cols`.
fn left_1q(data: &mut [Complex64], dim: usize, m: usize, u: &U2) {
    let kernel = |col: &mut [Complex64]| {
        for i0 in 0..dim {
            if i0 & m != 0 {
                continue;
            }
            let i1 = i0 | m;
            let (x0, x1) = (col[i0], col[i1]);
            col[i0] = u[0][0] * x0 + u[0][1] * x1;
            col[i1] = u[1][0] * x0 + u[1][1] * x1;
        }
    };
    if data.len() >= 1 << 14 {
        data.par_chunks_mut(dim).for_each(kernel);
    } else {
        data.chunks_mut(dim).for_each(kernel);
    }
}

fn left_2q(data: &mut [Complex64], dim: usize, ma: usize, mb: usize, u: &U4) {
    let kernel = |col: &mut [Complex64]| {
        for i in 0..dim {
            if i & (ma | mb) != 0 {
                continue;
            }
            let idx = [i, i | mb, i | ma, i | ma | mb];
            let x = [col[idx[0]], col[idx[1]], col[idx[2]], col[idx[3]]];
            for r in 0..4 {
                col[idx[r]] = u[r][0] * x[0] + u[r][1] * x[1] + u[r][2] * x[2] + u[r][3] * x[3];
            }
        }
    };
    if data.len() >= 1 << 14 {
        data.par_chunks_mut(dim).for_each(kernel);
    } else {
        data.chunks_mut(dim).for_each(kernel);
    }
}

/// Run `f(chunk, cols)` on aligned blocks of `2·span` columns; every column
/// group whose index differs only in bits below `2·span` lies in one block.
fn column_blocks<F>(rho: &mut CMat, span: usize, f: F)
where
    F: Fn(&mut [Complex64], usize) + Sync + Send,
{
    let dim = rho.nrows();
    let cols = (2 * span).min(dim);
    let chunk = cols * dim;
    let data = rho.as_mut_slice();
    if data.len() >= 1 << 14 && data.len() > chunk {
        data.par_chunks_mut(chunk).for_each(|c| f(c, cols));
    } else {
        data.chunks_mut(chunk).for_each(|c| f(c, cols));
    }
}

/// `ρ ← ρ U†` for a single-qubit `U`, acting on whole columns.
fn right_1q(rho: &mut CMat, m: usize, u: &U2) {
    let dim = rho.nrows();
    let (a, b, cc, d) = (u[0][0].conj(), u[0][1].conj(), u[1][0].conj(), u[1][1].conj());
    column_blocks(rho, m, |block, cols| {
        for j0 in (0..cols).filter(|j| j & m == 0) {
            let j1 = j0 | m;
            let (lo, hi) = block.split_at_mut(j1 * dim);
            let c0 = &mut lo[j0 * dim..(j0 + 1) * dim];
            let c1 = &mut hi[..dim];
            for (x0, x1) in c0.iter_mut().zip(c1.iter_mut()) {
                let (y0, y1) = (*x0, *x1);
                *x0 = a * y0 + b * y1;
                *x1 = cc * y0 + d * y1;
            }
        }
    });
}

/// `ρ ← ρ U†` for a two-qubit `U`, acting on whole columns.
fn right_2q(rho: &mut CMat, ma: usize, mb: usize, u: &U4) {
    let dim = rho.nrows();
    let mut uc = [[ZERO; 4]; 4];
    for r in 0..4 {
        for k in 0..4 {
            uc[r][k] = u[r][k].conj();
        }
    }
    column_blocks(rho, ma.max(mb), |block, cols| {
        let mut tmp = vec![[ZERO; 4]; dim];
        for j in (0..cols).filter(|j| j & (ma | mb) == 0) {
            let idx = [j, j | mb, j | ma, j | ma | mb];
            for (i, t) in tmp.iter_mut().enumerate() {
                *t = [
                    block[idx[0] * dim + i],
                    block[idx[1] * dim + i],
                    block[idx[2] * dim + i],
                    block[idx[3] * dim + i],
                ];
            }
            for r in 0..4 {
                let row = uc[r];
                let col = &mut block[idx[r] * dim..(idx[r] + 1) * dim];
                for (x, t) in col.iter_mut().zip(&tmp) {
                    *x = row[0] * t[0] + row[1] * t[1] + row[2] * t[2] + row[3] * t[3];
                }
            }
        }
    });
}

/// Single-qubit superoperator on the 2×2 blocks of `rho`; `s` acts on
/// `(ρ00, ρ01, ρ10, ρ11)`.
fn superop_1q(rho: &mut CMat, n: usize, q: usize, s: &U4) {
    let dim = 1 << n;
    let m = mask(n, q);
    column_blocks(rho, m, |block, cols| {
        for j0 in (0..cols).filter(|j| j & m == 0) {
            let j1 = j0 | m;
            let (lo, hi) = block.split_at_mut(j1 * dim);
            let c0 = &mut lo[j0 * dim..(j0 + 1) * dim];
            let c1 = &mut hi[..dim];
            for i0 in (0..dim).filter(|i| i & m == 0) {
                let i1 = i0 | m;
                let b = [c0[i0], c1[i0], c0[i1], c1[i1]];
                let mut o = [ZERO; 4];
                for (r, out) in o.iter_mut().enumerate() {
                    *out = s[r][0] * b[0] + s[r][1] * b[1] + s[r][2] * b[2] + s[r][3] * b[3];
                }
                c0[i0] = o[0];
                c1[i0] = o[1];
                c0[i1] = o[2];
                c1[i1] = o[3];
            }
        }
    });
}

/// Superoperator `Σ K ⊗ K̄` of a single-qubit Kraus set.
pub fn kraus_superop(kraus: &[U2]) -> U4 {
    let mut s = [[ZERO; 4]; 4];
    for k in kraus {
        for a in 0..2 {
            for b in 0..2 {
                for cc in 0..2 {
                    for d in 0..2 {
                        s[2 * a + b][2 * cc + d] += k[a][cc] * k[b][d].conj();
                    }
                }
            }
        }
    }
    s
}

/// Largest deviation of `Σ K†K` from the identity.
pub fn kraus_completeness_defect(kraus: &[U2]) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..2 {
        for j in 0..2 {
            let mut s = ZERO;
            for k in kraus {
                for row in k {
                    s += row[i].conj() * row[j];
                }
            }
            worst = worst.max((s - if i == j { ONE } else { ZERO }).norm());
        }
    }
    worst
}

/// Kraus operators `|m⟩⟨0|`, `|m⟩⟨1|` of the reset channel.
pub fn reset_kraus(target: u8) -> [U2; 2] {
    let t = target as usize;
    let mut k0 = [[ZERO; 2]; 2];
    let mut k1 = [[ZERO; 2]; 2];
    k0[t][0] = ONE;
    k1[t][1] = ONE;
    [k0, k1]
}

/// Amplitude-damping Kraus pair for per-cycle decay `gamma_decay`.
pub fn decay_kraus(gamma_decay: f64) -> [U2; 2] {
    let k0 = [[ONE, ZERO], [ZERO, c((-gamma_decay / 2.0).exp(), 0.0)]];
    let k1 = [[ZERO, c((1.0 - (-gamma_decay).exp()).sqrt(), 0.0)], [ZERO, ZERO]];
    [k0, k1]
}

/// Phase-flip Kraus pair for per-cycle dephasing `gamma_dephase`.
pub fn dephase_kraus(gamma_dephase: f64) -> [U2; 2] {
    let p = 0.5 * (1.0 - (-gamma_dephase).exp());
    let a = c((1.0 - p).sqrt(), 0.0);
    let b = c(p.sqrt(), 0.0);
    [[[a, ZERO], [ZERO, a]], [[b, ZERO], [ZERO, -b]]]
}

/// Superoperator of the single-qubit decoherence channel.
pub fn decoherence_superop(rates: &NoiseRates) -> U4 {
    let e_t = (-rates.gamma_decay).exp();
    let e_o = (-rates.gamma_dephase - rates.gamma_decay / 2.0).exp();
    let mut s = [[ZERO; 4]; 4];
    s[0][0] = ONE;
    s[0][3] = c(1.0 - e_t, 0.0);
    s[1][1] = c(e_o, 0.0);
    s[2][2] = c(e_o, 0.0);
    s[3][3] = c(e_t, 0.0);
    s
}

impl DenseState {
    /// Computational basis state as a density matrix.
    pub fn basis_rho(bits: &[u8]) -> Result<Self> {
        Self::basis_rho_capped(bits, RHO_CAP)
    }

    pub fn basis_rho_capped(bits: &[u8], cap: usize) -> Result<Self> {
        let n = bits.len();
        if n > cap {
            return Err(Error::Capacity { qubits: n, cap });
        }
        let dim = 1 << n;
        let idx = bits.iter().fold(0usize, |acc, &b| (acc << 1) | (b as usize & 1));
        let mut rho = CMat::zeros(dim, dim);
        rho[(idx, idx)] = ONE;
        Ok(DenseState {
            n,
            repr: Repr::Rho(rho),
        })
    }

    /// Computational basis state as a state vector.
    pub fn basis_psi(bits: &[u8]) -> Result<Self> {
        let n = bits.len();
        if n > PSI_CAP {
            return Err(Error::Capacity {
                qubits: n,
                cap: PSI_CAP,
            });
        }
        let idx = bits.iter().fold(0usize, |acc, &b| (acc << 1) | (b as usize & 1));
        let mut psi = CVec::zeros(1 << n);
        psi[idx] = ONE;
        Ok(DenseState {
            n,
            repr: Repr::Psi(psi),
        })
    }

    pub fn from_psi(psi: CVec) -> Result<Self> {
        let dim = psi.len();
        if !dim.is_power_of_two() {
            return Err(Error::Dimension("state vector length must be a power of two".into()));
        }
        let n = dim.trailing_zeros() as usize;
        if n > PSI_CAP {
            return Err(Error::Capacity {
                qubits: n,
                cap: PSI_CAP,
            });
        }
        let norm = psi.norm();
        Ok(DenseState {
            n,
            repr: Repr::Psi(psi / c(norm, 0.0)),
        })
    }

    pub fn from_rho(rho: CMat) -> Result<Self> {
        let dim = rho.nrows();
        if rho.ncols() != dim || !dim.is_power_of_two() {
            return Err(Error::Dimension(
                "density matrix must be square with power-of-two size".into(),
            ));
        }
        let n = dim.trailing_zeros() as usize;
        if n > RHO_CAP {
            return Err(Error::Capacity {
                qubits: n,
                cap: RHO_CAP,
            });
        }
        Ok(DenseState {
            n,
            repr: Repr::Rho(rho),
        })
    }

    /// Maximally mixed state.
    pub fn maximally_mixed(n: usize) -> Result<Self> {
        if n > RHO_CAP {
            return Err(Error::Capacity {
                qubits: n,
                cap: RHO_CAP,
            });
        }
        let dim = 1 << n;
        Ok(DenseState {
            n,
            repr: Repr::Rho(CMat::identity(dim, dim) / c(dim as f64, 0.0)),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn is_trajectory(&self) -> bool {
        matches!(self.repr, Repr::Psi(_))
    }

    /// Density matrix, formed from the vector in trajectory mode.
    pub fn rho(&self) -> CMat {
        match &self.repr {
            Repr::Rho(r) => r.clone(),
            Repr::Psi(p) => p * p.adjoint(),
        }
    }

    pub fn psi(&self) -> Option<&CVec> {
        match &self.repr {
            Repr::Psi(p) => Some(p),
            Repr::Rho(_) => None,
        }
    }

    /// Convert a state vector into density-matrix mode.
    pub fn into_rho(self) -> Result<Self> {
        if self.n > RHO_CAP {
            return Err(Error::Capacity {
                qubits: self.n,
                cap: RHO_CAP,
            });
        }
        let rho = self.rho();
        Ok(DenseState {
            n: self.n,
            repr: Repr::Rho(rho),
        })
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n {
            Err(Error::Dimension(format!("qubit {q} outside 0..{}", self.n)))
        } else {
            Ok(())
        }
    }

    pub fn apply_gate(&mut self, gate: &DenseGate) -> Result<()> {
        self.apply_matrix(&gate.matrix())
    }

    pub fn apply_gates(&mut self, gates: &[DenseGate]) -> Result<()> {
        gates.iter().try_for_each(|g| self.apply_gate(g))
    }

    pub fn apply_matrix(&mut self, gm: &GateMatrix) -> Result<()> {
        let n = self.n;
        let dim = 1 << n;
        match *gm {
            GateMatrix::One(q, u) => {
                self.check_qubit(q)?;
                let m = mask(n, q);
                match &mut self.repr {
                    Repr::Psi(p) => left_1q(p.as_mut_slice(), dim, m, &u),
                    Repr::Rho(r) => {
                        left_1q(r.as_mut_slice(), dim, m, &u);
                        right_1q(r, m, &u);
                    }
                }
            }
            GateMatrix::Two(a, b, u) => {
                self.check_qubit(a)?;
                self.check_qubit(b)?;
                if a == b {
                    return Err(Error::Argument("two-qubit gate on a single qubit".into()));
                }
                let (ma, mb) = (mask(n, a), mask(n, b));
                match &mut self.repr {
                    Repr::Psi(p) => left_2q(p.as_mut_slice(), dim, ma, mb, &u),
                    Repr::Rho(r) => {
                        left_2q(r.as_mut_slice(), dim, ma, mb, &u);
                        right_2q(r, ma, mb, &u);
                    }
                }
            }
        }
        Ok(())
    }

    /// Apply a single-qubit Kraus set: exactly in density-matrix mode, by
    /// sampling one operator with its Born weight in trajectory mode.
    pub fn apply_kraus<R: Rng + ?Sized>(&mut self, q: usize, kraus: &[U2], rng: &mut R) -> Result<()> {
        self.check_qubit(q)?;
        let n = self.n;
        match &mut self.repr {
            Repr::Rho(r) => superop_1q(r, n, q, &kraus_superop(kraus)),
            Repr::Psi(p) => {
                let dim = 1 << n;
                let m = mask(n, q);
                let branches: Vec<(CVec, f64)> = kraus
                    .iter()
                    .map(|op| {
                        let mut v = p.clone();
                        left_1q(v.as_mut_slice(), dim, m, op);
                        let w = v.norm_squared();
                        (v, w)
                    })
                    .collect();
                let total: f64 = branches.iter().map(|b| b.1).sum();
                let mut draw = rng.random::<f64>() * total;
                let mut pick = branches.len() - 1;
                for (k, b) in branches.iter().enumerate() {
                    if draw < b.1 {
                        pick = k;
                        break;
                    }
                    draw -= b.1;
                }
                while branches[pick].1 == 0.0 {
                    pick -= 1;
                }
                let (v, w) = &branches[pick];
                *p = v / c(w.sqrt(), 0.0);
            }
        }
        Ok(())
    }

    /// Replace qubit `q` by |target⟩ (trace-and-replace channel).
    pub fn apply_reset_channel<R: Rng + ?Sized>(&mut self, q: usize, target: u8, rng: &mut R) -> Result<()> {
        self.apply_kraus(q, &reset_kraus(target), rng)
    }

    /// Per-qubit decay and dephasing on every qubit.
    pub fn apply_decoherence<R: Rng + ?Sized>(&mut self, rates: &NoiseRates, rng: &mut R) -> Result<()> {
        self.apply_decoherence_on(rates, &(0..self.n).collect::<Vec<_>>(), rng)
    }

    pub fn apply_decoherence_on<R: Rng + ?Sized>(
        &mut self,
        rates: &NoiseRates,
        qubits: &[usize],
        rng: &mut R,
    ) -> Result<()> {
        if rates.is_zero() {
            return Ok(());
        }
        let n = self.n;
        for &q in qubits {
            self.check_qubit(q)?;
            match &mut self.repr {
                Repr::Rho(r) => superop_1q(r, n, q, &decoherence_superop(rates)),
                Repr::Psi(_) => {
                    if rates.gamma_decay > 0.0 {
                        self.apply_kraus(q, &decay_kraus(rates.gamma_decay), rng)?;
                    }
                    if rates.gamma_dephase > 0.0 {
                        self.apply_kraus(q, &dephase_kraus(rates.gamma_dephase), rng)?;
                    }
                }
            }
        }
        Ok(())
    }

    pub fn trace(&self) -> Complex64 {
        match &self.repr {
            Repr::Rho(r) => r.trace(),
            Repr::Psi(p) => c(p.norm_squared(), 0.0),
        }
    }

    /// `⟨P⟩` for a Pauli string given as (qubit, 'X' | 'Y' | 'Z') pairs.
    pub fn expect_pauli(&self, ops: &[(usize, char)]) -> f64 {
        let n = self.n;
        let dim = 1 << n;
        let mut flip = 0usize;
        let mut ymask = 0usize;
        let mut zmask = 0usize;
        for &(q, p) in ops {
            let m = mask(n, q);
            match p {
                'X' => flip ^= m,
                'Y' => {
                    flip ^= m;
                    ymask ^= m;
                }
                'Z' => zmask ^= m,
                _ => {}
            }
        }
        // P|j⟩ = phase(j) |j ^ flip⟩ with Y = i X Z acting on bit value b as i (-1)^b.
        let ny = ymask.count_ones();
        let iy = match ny % 4 {
            0 => ONE,
            1 => I,
            2 => -ONE,
            _ => -I,
        };
        let phase = |j: usize| -> Complex64 {
            let s = ((j & zmask).count_ones() + (j & ymask).count_ones()) % 2;
            if s == 0 {
                iy
            } else {
                -iy
            }
        };
        let mut acc = ZERO;
        match &self.repr {
            Repr::Rho(r) => {
                for j in 0..dim {
                    acc += phase(j) * r[(j, j ^ flip)];
                }
            }
            Repr::Psi(p) => {
                for j in 0..dim {
                    acc += p[j ^ flip].conj() * phase(j) * p[j];
                }
            }
        }
        acc.re
    }

    /// Probability of |1⟩ on each qubit.
    pub fn populations(&self) -> Vec<f64> {
        let n = self.n;
        let dim = 1 << n;
        let diag: Vec<f64> = match &self.repr {
            Repr::Rho(r) => (0..dim).map(|i| r[(i, i)].re).collect(),
            Repr::Psi(p) => p.iter().map(|x| x.norm_sqr()).collect(),
        };
        (0..n)
            .map(|q| {
                let m = mask(n, q);
                diag.iter()
                    .enumerate()
                    .filter(|(i, _)| i & m != 0)
                    .map(|(_, v)| v)
                    .sum()
            })
            .collect()
    }

    /// Reduced density matrix of `keep` (in the given order, first is most significant).
    pub fn reduced(&self, keep: &[usize]) -> Result<CMat> {
        for &q in keep {
            self.check_qubit(q)?;
        }
        let n = self.n;
        let k = keep.len();
        let env: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
        let compose = |sub: usize, e: usize| -> usize {
            let mut idx = 0;
            for (t, &q) in keep.iter().enumerate() {
                if sub >> (k - 1 - t) & 1 == 1 {
                    idx |= mask(n, q);
                }
            }
            for (t, &q) in env.iter().enumerate() {
                if e >> (env.len() - 1 - t) & 1 == 1 {
                    idx |= mask(n, q);
                }
            }
            idx
        };
        let dk = 1 << k;
        let de = 1 << env.len();
        let mut out = CMat::zeros(dk, dk);
        for a in 0..dk {
            for b in 0..dk {
                let mut s = ZERO;
                for e in 0..de {
                    let (i, j) = (compose(a, e), compose(b, e));
                    s += match &self.repr {
                        Repr::Rho(r) => r[(i, j)],
                        Repr::Psi(p) => p[i] * p[j].conj(),
                    };
                }
                out[(a, b)] = s;
            }
        }
        Ok(out)
    }

    /// Trace, Hermiticity and positivity checks of the density matrix.
    pub fn check(&self) -> Result<()> {
        match &self.repr {
            Repr::Psi(p) => {
                let d = (p.norm() - 1.0).abs();
                if d > 1e-12 {
                    return Err(Error::Argument(format!("state vector norm off by {d:e}")));
                }
            }
            Repr::Rho(r) => {
                let t = (r.trace() - ONE).norm();
                if t > 1e-10 {
                    return Err(Error::Argument(format!("trace off by {t:e}")));
                }
                let h = crate::linalg::max_abs(&(r - r.adjoint()));
                if h > 1e-10 {
                    return Err(Error::Argument(format!("not Hermitian ({h:e})")));
                }
                let (vals, _) = crate::linalg::eigh(r);
                if vals[0] < -1e-9 {
                    return Err(Error::Argument(format!("negative eigenvalue {}", vals[0])));
                }
            }
        }
        Ok(())
    }
}
