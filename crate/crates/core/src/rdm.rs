//! One-body reduced density matrix of Majorana two-point functions.
//!
//! `D_kl = ⟨a_k a_l⟩ / 2 = (δ_kl + iγ_kl) / 2`, stored in interleaved site
//! order `(a_{2j}, a_{2j+1})`. [`OneBodyRDM::block_form`] returns the
//! `(odd, even)` block layout of 1-based labels.

use std::ops::Range;

use num_complex::Complex64;

use crate::dense::DenseState;
use crate::eigenmodes::EigenmodeTable;
use crate::error::{Error, Result};
use crate::gaussian::{covariance_entropy, CovarianceState};
use crate::linalg::{c, eigh, CMat, RMat};

/// Basis in which a 1RDM is expressed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    Majorana,
    /// Quasiparticle operators `(η_1 … η_L, η†_1 … η†_L)`; entry `(i, j)` is `⟨b†_i b_j⟩`.
    Eigenmode,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OneBodyRDM {
    pub d: CMat,
    pub basis: Basis,
}

/// Outcome of purification.
#[derive(Clone, Debug, PartialEq)]
pub struct Purified {
    pub rdm: OneBodyRDM,
    /// Spectrum of the input in descending order.
    pub spectrum: Vec<f64>,
    /// `λ_L − λ_{L+1}`.
    pub gap: f64,
    /// Set when the gap is below 1e-9; the projector then follows eigenvector order.
    pub degenerate: bool,
}

/// Expectation of `a_k a_l` (`k < l`, 0-based Majorana labels on `qubits`) in a dense state.
pub fn dense_majorana_pair(state: &DenseState, qubits: &[usize], k: usize, l: usize) -> Complex64 {
    let (p, r) = (k / 2, l / 2);
    if p == r {
        // a_{2p} a_{2p+1} = X Y = iZ.
        return c(0.0, state.expect_pauli(&[(qubits[p], 'Z')]));
    }
    // Site p: X·Z = −iY, Y·Z = iX; sites between carry Z; site r carries X or Y.
    let (first, coeff) = if k % 2 == 0 {
        ('Y', c(0.0, -1.0))
    } else {
        ('X', c(0.0, 1.0))
    };
    let mut ops = vec![(qubits[p], first)];
    ops.extend((p + 1..r).map(|s| (qubits[s], 'Z')));
    ops.push((qubits[r], if l % 2 == 0 { 'X' } else { 'Y' }));
    coeff * state.expect_pauli(&ops)
}

impl OneBodyRDM {
    /// `D = (I + iγ)/2` of a covariance matrix.
    pub fn from_gamma(gamma: &RMat) -> Self {
        let n = gamma.nrows();
        let d = CMat::from_fn(n, n, |k, l| c(if k == l { 0.5 } else { 0.0 }, 0.5 * gamma[(k, l)]));
        OneBodyRDM {
            d,
            basis: Basis::Majorana,
        }
    }

    /// 1RDM of a contiguous qubit range of a Gaussian state.
    pub fn from_covariance(state: &CovarianceState, qubits: Range<usize>) -> Self {
        Self::from_gamma(state.subsystem(qubits).gamma())
    }

    /// 1RDM of `qubits` (consecutive in Jordan–Wigner order) measured through Pauli strings.
    pub fn from_dense(state: &DenseState, qubits: &[usize]) -> Result<Self> {
        if qubits.windows(2).any(|w| w[1] != w[0] + 1) {
            return Err(Error::Argument("1RDM qubits must be consecutive".into()));
        }
        let n = 2 * qubits.len();
        let mut d = CMat::zeros(n, n);
        for k in 0..n {
            d[(k, k)] = c(0.5, 0.0);
            for l in k + 1..n {
                let v = dense_majorana_pair(state, qubits, k, l) * 0.5;
                d[(k, l)] = v;
                d[(l, k)] = v.conj();
            }
        }
        Ok(OneBodyRDM {
            d,
            basis: Basis::Majorana,
        })
    }

    /// Maximally mixed 1RDM `I/2`.
    pub fn maximally_mixed(l: usize) -> Self {
        OneBodyRDM {
            d: CMat::identity(2 * l, 2 * l) * c(0.5, 0.0),
            basis: Basis::Majorana,
        }
    }

    pub fn n_sites(&self) -> usize {
        self.d.nrows() / 2
    }

    /// Covariance matrix `γ = Im(2D)` (Majorana basis only).
    pub fn gamma(&self) -> Result<RMat> {
        self.require(Basis::Majorana)?;
        Ok(self.d.map(|z| 2.0 * z.im))
    }

    fn require(&self, basis: Basis) -> Result<()> {
        if self.basis != basis {
            return Err(Error::Argument(format!("operation needs the {basis:?} basis")));
        }
        Ok(())
    }

    /// `D` reordered as `(odd, even)` blocks of 1-based Majorana labels.
    pub fn block_form(&self) -> CMat {
        let l = self.n_sites();
        let to_block = |m: usize| (m % 2) * l + m / 2;
        let mut out = CMat::zeros(2 * l, 2 * l);
        for a in 0..2 * l {
            for b in 0..2 * l {
                out[(to_block(a), to_block(b))] = self.d[(a, b)];
            }
        }
        out
    }

    /// Eigenvalues in descending order.
    pub fn spectrum(&self) -> Vec<f64> {
        let (mut v, _) = eigh(&self.d);
        v.reverse();
        v
    }

    /// Invariant checks: Hermitian, spectrum in `[0, 1]`, trace `L`, particle–hole pairing.
    pub fn check(&self) -> Result<()> {
        let h = crate::linalg::max_abs(&(&self.d - self.d.adjoint()));
        if h > 1e-10 {
            return Err(Error::Argument(format!("1RDM not Hermitian ({h:e})")));
        }
        let s = self.spectrum();
        if s.iter().any(|&x| !(-1e-9..=1.0 + 1e-9).contains(&x)) {
            return Err(Error::Argument("1RDM eigenvalue outside [0, 1]".into()));
        }
        let tr = self.d.trace().re;
        if (tr - self.n_sites() as f64).abs() > 1e-9 {
            return Err(Error::Argument(format!("1RDM trace {tr}")));
        }
        let n = s.len();
        for i in 0..n {
            if (s[i] + s[n - 1 - i] - 1.0).abs() > 1e-9 {
                return Err(Error::Argument("1RDM spectrum not particle–hole symmetric".into()));
            }
        }
        Ok(())
    }

    /// Matrix whose rows are `u_α` then `conj(u_α)`, with `u_α` the annihilator coefficients.
    fn mode_matrix(table: &EigenmodeTable) -> CMat {
        let l = table.l;
        let mut v = CMat::zeros(2 * l, 2 * l);
        for (alpha, m) in table.modes.iter().enumerate() {
            let u = m.annihilator();
            let u = &u / c(u.norm(), 0.0);
            for k in 0..2 * l {
                v[(alpha, k)] = u[k];
                v[(l + alpha, k)] = u[k].conj();
            }
        }
        v
    }

    /// Express the 1RDM in the quasiparticle basis of `table`.
    pub fn to_eigenbasis(&self, table: &EigenmodeTable) -> Result<Self> {
        self.require(Basis::Majorana)?;
        if table.l != self.n_sites() {
            return Err(Error::Dimension(format!(
                "table for L = {}, 1RDM for L = {}",
                table.l,
                self.n_sites()
            )));
        }
        let v = Self::mode_matrix(table);
        Ok(OneBodyRDM {
            d: v.conjugate() * &self.d * v.transpose(),
            basis: Basis::Eigenmode,
        })
    }

    /// Quasiparticle occupations `⟨η†_α η_α⟩` (eigenmode basis).
    pub fn occupations(&self) -> Result<Vec<f64>> {
        self.require(Basis::Eigenmode)?;
        Ok((0..self.n_sites()).map(|a| self.d[(a, a)].re).collect())
    }

    /// Majorana-basis 1RDM of the quasiparticle vacuum of `table`.
    pub fn floquet_vacuum(table: &EigenmodeTable) -> Self {
        let l = table.l;
        let v = Self::mode_matrix(table);
        let mut f = CMat::zeros(2 * l, 2 * l);
        for a in l..2 * l {
            f[(a, a)] = c(1.0, 0.0);
        }
        OneBodyRDM {
            d: v.transpose() * f * v.conjugate(),
            basis: Basis::Majorana,
        }
    }

    /// Projector onto the eigenvectors of the `L` largest eigenvalues.
    pub fn purify(&self) -> Purified {
        let l = self.n_sites();
        let (vals, vecs) = eigh(&self.d);
        let n = vals.len();
        // Descending order; equal values keep ascending eigenvector index.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]).then(a.cmp(&b)));
        let spectrum: Vec<f64> = order.iter().map(|&k| vals[k]).collect();
        let gap = if l > 0 { spectrum[l - 1] - spectrum[l] } else { 0.0 };
        let mut p = CMat::zeros(n, n);
        for &k in &order[..l] {
            let col = vecs.column(k);
            p += col * col.adjoint();
        }
        Purified {
            rdm: OneBodyRDM {
                d: p,
                basis: self.basis,
            },
            spectrum,
            gap,
            degenerate: gap < 1e-9,
        }
    }

    /// `⟨Y_j (Π Z) Y_k⟩` for 1-based sites `j < k` (Majorana basis).
    pub fn quantum_correlator(&self, j: usize, k: usize) -> Result<f64> {
        self.require(Basis::Majorana)?;
        if !(1 <= j && j < k && k <= self.n_sites()) {
            return Err(Error::Argument(format!("need 1 <= j < k <= L, got j = {j}, k = {k}")));
        }
        // a_{2j−1} a_{2k} = −i Y_j P Y_k and ⟨a a⟩ = 2D.
        let d = self.d[(2 * (j - 1), 2 * (k - 1) + 1)];
        Ok(-2.0 * d.im)
    }

    /// Entropy in bits of the Gaussian state with this 1RDM on a contiguous site range (0-based).
    pub fn entropy(&self, sites: Range<usize>) -> Result<f64> {
        let g = self.gamma()?;
        if sites.end > self.n_sites() {
            return Err(Error::Dimension("subsystem outside the chain".into()));
        }
        let m0 = 2 * sites.start;
        let len = 2 * sites.len();
        Ok(covariance_entropy(&g.view((m0, m0), (len, len)).into_owned()))
    }
}

/// `Π (1 − n_α)` over modes not excluded by `exclude`.
pub fn vacuum_fidelity(occupations: &[f64], exclude: Option<&[bool]>) -> f64 {
    occupations
        .iter()
        .enumerate()
        .filter(|(i, _)| !exclude.is_some_and(|m| m.get(*i).copied().unwrap_or(false)))
        .map(|(_, n)| (1.0 - n).clamp(0.0, 1.0))
        .product()
}

/// Exclusion mask for modes with quasienergy below `threshold`.
pub fn edge_mask(table: &EigenmodeTable, threshold: f64) -> Vec<bool> {
    table.modes.iter().map(|m| m.phi < threshold).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_rdm_is_projector() {
        let r = OneBodyRDM::from_covariance(&CovarianceState::vacuum(3), 0..3);
        r.check().unwrap();
        let s = r.spectrum();
        assert!(s[..3].iter().all(|x| (x - 1.0).abs() < 1e-12));
        assert!(s[3..].iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn fidelity_product() {
        assert_eq!(vacuum_fidelity(&[0.0, 0.0], None), 1.0);
        assert!(vacuum_fidelity(&[0.5, 0.1], None) <= 0.5);
        assert!((vacuum_fidelity(&[0.5, 0.1], Some(&[true, false])) - 0.9).abs() < 1e-15);
    }
}
