//! Single-particle modes of the kicked Ising chain with open boundaries.
//!
//! One Floquet period maps the `2L` Majorana operators linearly, `a → K a`.
//! Eigenvectors satisfy `K ψ = e^{−iφ} ψ`; for `φ > 0` the annihilator of the
//! mode is `η = Σ conj(ψ_k) a_k` (up to normalization).

use std::f64::consts::PI;

use num_complex::Complex64;
use roots::{find_root_brent, SimpleConvergency};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{c, normal_eigen, CVec, RMat, I};

/// Residual bound for accepting an eigenvector.
pub const RESIDUAL_TOL: f64 = 1e-9;

/// One-period Majorana transfer matrix of the open chain.
pub fn build_transfer_matrix(g: f64, j: f64, l: usize) -> Result<RMat> {
    if l < 2 {
        return Err(Error::Argument("chain length must be at least 2".into()));
    }
    let (sj, cj) = (PI * j).sin_cos();
    let (sg, cg) = (PI * g).sin_cos();
    let n = 2 * l;
    let mut k = RMat::zeros(n, n);
    // Rows and columns below are 1-based Majorana labels.
    let mut set = |r: usize, col: usize, v: f64| {
        if (1..=n).contains(&col) {
            k[(r - 1, col - 1)] += v;
        }
    };
    for site in 1..=l {
        let r = 2 * site - 1;
        if site == 1 {
            set(r, 1, cg);
            set(r, 2, sg);
        } else {
            set(r, 2 * site - 3, -sj * sg);
            set(r, 2 * site - 2, sj * cg);
            set(r, 2 * site - 1, cj * cg);
            set(r, 2 * site, cj * sg);
        }
        let r = 2 * site;
        if site == l {
            set(r, 2 * l - 1, -sg);
            set(r, 2 * l, cg);
        } else {
            set(r, 2 * site - 1, -cj * sg);
            set(r, 2 * site, cj * cg);
            set(r, 2 * site + 1, -sj * cg);
            set(r, 2 * site + 2, -sj * sg);
        }
    }
    Ok(k)
}

/// Bulk quasienergy `φ_q ∈ [0, π]`.
pub fn dispersion(q: f64, g: f64, j: f64) -> f64 {
    let (sj, cj) = (PI * j).sin_cos();
    let (sg, cg) = (PI * g).sin_cos();
    (cj * cg - sj * sg * q.cos()).clamp(-1.0, 1.0).acos()
}

/// Bloch-sphere angles `(φ, μ, ξ)` of the bulk eigenvector at momentum `q`.
pub fn bulk_angles(q: f64, g: f64, j: f64) -> (f64, f64, f64) {
    let (sj, cj) = (PI * j).sin_cos();
    let (sg, cg) = (PI * g).sin_cos();
    let phi = dispersion(q, g, j);
    let s = phi.sin();
    let nx = sj * cg * q.sin() / s;
    let ny = (-cj * sg - sj * cg * q.cos()) / s;
    let nz = -sj * sg * q.sin() / s;
    let mu = 0.5 * nz.clamp(-1.0, 1.0).acos();
    let xi = ny.atan2(nx);
    (phi, mu, xi)
}

struct Boundary {
    phi: f64,
    mu: f64,
    xi: f64,
    chi_p: [Complex64; 2],
    chi_m: [Complex64; 2],
    lp: Complex64,
    lm: Complex64,
    rp: Complex64,
    rm: Complex64,
}

fn boundary(q: f64, g: f64, j: f64) -> Boundary {
    let (sg, cg) = (PI * g).sin_cos();
    let (phi, mu, xi) = bulk_angles(q, g, j);
    let e = Complex64::from_polar(1.0, -phi);
    let chi_p = [c(mu.cos(), 0.0), Complex64::from_polar(mu.sin(), xi)];
    let chi_m = [c(mu.sin(), 0.0), -Complex64::from_polar(mu.cos(), -xi)];
    let left = |v: &[Complex64; 2]| (c(cg, 0.0) - e) * v[0] + sg * v[1];
    let right = |v: &[Complex64; 2]| -sg * v[0] + (c(cg, 0.0) - e) * v[1];
    Boundary {
        phi,
        mu,
        xi,
        lp: left(&chi_p),
        lm: left(&chi_m),
        rp: right(&chi_p),
        rm: right(&chi_m),
        chi_p,
        chi_m,
    }
}

/// Quantization function; real positive at allowed momenta.
pub fn quantization(q: f64, g: f64, j: f64, l: usize) -> Complex64 {
    let b = boundary(q, g, j);
    Complex64::from_polar(1.0, 2.0 * q * (l as f64 - 1.0)) * b.lm * b.rp * (b.lp * b.rm).conj()
}

/// Boundary phase factor `e^{iδ}` fixed by the left boundary rows.
pub fn phase_factor(q: f64, g: f64, j: f64) -> Complex64 {
    let b = boundary(q, g, j);
    -b.lp / b.lm
}

/// Standing wave `(e^{iδ} χ⁻ e^{−iq(j−1)} + χ⁺ e^{iq(j−1)})/√L` on sites `j = 1..L`.
pub fn standing_wave(q: f64, g: f64, j: f64, l: usize) -> CVec {
    let b = boundary(q, g, j);
    let ed = -b.lp / b.lm;
    let norm = (l as f64).sqrt();
    CVec::from_fn(2 * l, |k, _| {
        let site = (k / 2) as f64;
        let a = k % 2;
        (ed * b.chi_m[a] * Complex64::from_polar(1.0, -q * site) + b.chi_p[a] * Complex64::from_polar(1.0, q * site))
            / norm
    })
}

/// A single-particle eigenmode.
#[derive(Clone, Debug, PartialEq)]
pub struct Mode {
    /// Quasimomentum; `None` for modes recovered from the direct eigendecomposition.
    pub q: Option<f64>,
    /// Quasienergy in `[0, π]`.
    pub phi: f64,
    /// Boundary phase shift.
    pub delta: Option<f64>,
    /// Polar angle of the bulk spinor.
    pub mu: Option<f64>,
    /// Azimuthal angle of the bulk spinor.
    pub xi: Option<f64>,
    /// Unit eigenvector, `K ψ = e^{−iφ} ψ`.
    pub psi: CVec,
    /// Norm of the standing-wave parametrization of `ψ` (√2 for recovered modes).
    pub sw_norm: f64,
    /// `max |K ψ − e^{−iφ} ψ|`.
    pub residual: f64,
}

impl Mode {
    /// Annihilator coefficients `u` with `η = Σ u_k a_k / √2` and `{η, η†} = 1`.
    pub fn annihilator(&self) -> CVec {
        self.psi.map(|z| z.conj())
    }

    /// True when the mode came from the eigendecomposition fallback.
    pub fn is_recovered(&self) -> bool {
        self.q.is_none()
    }

    /// Largest weight fraction on the outermost sites (first and last two Majoranas).
    pub fn edge_weight(&self) -> f64 {
        let n = self.psi.len();
        [0, 1, n - 2, n - 1].iter().map(|&k| self.psi[k].norm_sqr()).sum()
    }
}

/// Row of the exported mode table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModeRow {
    pub alpha: usize,
    pub q: Option<f64>,
    pub phi: f64,
    pub delta: Option<f64>,
    pub mu: Option<f64>,
    pub xi: Option<f64>,
    pub residual: f64,
}

/// All `L` modes with `φ ≥ 0`, sorted by quasienergy.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenmodeTable {
    pub g: f64,
    pub j: f64,
    pub l: usize,
    pub modes: Vec<Mode>,
}

impl EigenmodeTable {
    pub fn rows(&self) -> Vec<ModeRow> {
        self.modes
            .iter()
            .enumerate()
            .map(|(alpha, m)| ModeRow {
                alpha: alpha + 1,
                q: m.q,
                phi: m.phi,
                delta: m.delta,
                mu: m.mu,
                xi: m.xi,
                residual: m.residual,
            })
            .collect()
    }
}

fn residual(k: &RMat, psi: &CVec, phi: f64) -> f64 {
    let kc = k.map(|x| c(x, 0.0));
    let r = &kc * psi - psi * Complex64::from_polar(1.0, -phi);
    r.iter().fold(0.0_f64, |a, z| a.max(z.norm()))
}

/// Eigenpairs of `K` with `φ ∈ [0, π]`, sorted by `φ`.
pub fn direct_modes(k: &RMat) -> Vec<(f64, CVec)> {
    let mut all: Vec<(f64, CVec)> = normal_eigen(k).into_iter().map(|(lam, v)| (-lam.arg(), v)).collect();
    all.sort_by(|a, b| b.0.total_cmp(&a.0));
    all.truncate(k.nrows() / 2);
    for m in &mut all {
        m.0 = m.0.max(0.0);
    }
    all.reverse();
    all
}

/// Solve for all modes: root finding on the quantization condition, with
/// modes lacking a real momentum (edge modes) taken from the eigendecomposition of `K`.
pub fn solve_modes(g: f64, j: f64, l: usize) -> Result<EigenmodeTable> {
    let k = build_transfer_matrix(g, j, l)?;
    let mut modes = Vec::with_capacity(l);
    let n_grid = 20 * l;
    let grid: Vec<f64> = (1..n_grid).map(|i| PI * i as f64 / n_grid as f64).collect();
    let f = |q: f64| quantization(q, g, j, l).im;
    let vals: Vec<f64> = grid.iter().map(|&q| f(q)).collect();
    for w in 0..grid.len() - 1 {
        if vals[w] * vals[w + 1] >= 0.0 || !vals[w].is_finite() || !vals[w + 1].is_finite() {
            continue;
        }
        let mut conv = SimpleConvergency {
            eps: 1e-15,
            max_iter: 200,
        };
        let Ok(q) = find_root_brent(grid[w], grid[w + 1], f, &mut conv) else {
            continue;
        };
        if quantization(q, g, j, l).re <= 0.0 {
            continue;
        }
        let b = boundary(q, g, j);
        let sw = standing_wave(q, g, j, l);
        let sw_norm = sw.norm();
        let psi = sw / c(sw_norm, 0.0);
        let res = residual(&k, &psi, b.phi);
        if res < RESIDUAL_TOL {
            modes.push(Mode {
                q: Some(q),
                phi: b.phi,
                delta: Some((-b.lp / b.lm).arg()),
                mu: Some(b.mu),
                xi: Some(b.xi),
                psi,
                sw_norm,
                residual: res,
            });
        }
    }
    if modes.len() > l {
        return Err(Error::SolverFailure(format!(
            "found {} momentum roots for L = {l} (g = {g}, J = {j})",
            modes.len()
        )));
    }
    if modes.len() < l {
        let mut direct = direct_modes(&k);
        // Remove direct modes that coincide with root-found ones.
        for m in &modes {
            if let Some(pos) = direct
                .iter()
                .enumerate()
                .min_by(|a, b| (a.1 .0 - m.phi).abs().total_cmp(&(b.1 .0 - m.phi).abs()))
                .map(|(i, _)| i)
            {
                direct.remove(pos);
            }
        }
        for (phi, v) in direct {
            let res = residual(&k, &v, phi);
            if res >= RESIDUAL_TOL {
                return Err(Error::SolverFailure(format!(
                    "recovered mode at φ = {phi} has residual {res:e}"
                )));
            }
            modes.push(Mode {
                q: None,
                phi,
                delta: None,
                mu: None,
                xi: None,
                psi: v,
                sw_norm: std::f64::consts::SQRT_2,
                residual: res,
            });
        }
    }
    if modes.len() != l {
        return Err(Error::SolverFailure(format!(
            "{} modes after fallback, expected {l} (g = {g}, J = {j})",
            modes.len()
        )));
    }
    modes.sort_by(|a, b| a.phi.total_cmp(&b.phi));
    Ok(EigenmodeTable { g, j, l, modes })
}

/// Occupation `⟨η†η⟩ = ½ + (i/2) u† γ u` of the mode with annihilator coefficients `u`
/// in a covariance matrix restricted to the chain.
pub fn occupation(gamma: &RMat, u: &CVec) -> f64 {
    let norm2 = u.norm_squared();
    let gc = gamma.map(|x| c(x, 0.0));
    let v = (u.adjoint() * gc * u)[(0, 0)] / norm2;
    (0.5 + 0.5 * (I * v)).re
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transfer_matrix_is_orthogonal() {
        let k = build_transfer_matrix(0.3, 0.2, 5).unwrap();
        let d = &k.transpose() * &k - RMat::identity(10, 10);
        assert!(d.amax() < 1e-12);
    }

    #[test]
    fn gap_closes_at_critical_point() {
        assert!(dispersion(PI, 0.2, 0.2).abs() < 1e-12);
    }

    #[test]
    fn l3_roots_match_direct() {
        let t = solve_modes(0.3, 0.2, 3).unwrap();
        let direct = direct_modes(&build_transfer_matrix(0.3, 0.2, 3).unwrap());
        for (m, d) in t.modes.iter().zip(&direct) {
            assert!((m.phi - d.0).abs() < 1e-9);
        }
    }
}
