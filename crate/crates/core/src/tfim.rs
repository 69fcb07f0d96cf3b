//! Ground state of the open transverse-field Ising chain `H = −g ΣZ + J ΣXX`.

use crate::error::{Error, Result};
use crate::gaussian::CovarianceState;
use crate::linalg::{hermitian_sign, RMat, I};

/// Majorana coupling matrix `C` with `H = (i/2) Σ C_kl a_k a_l`.
pub fn coupling_matrix(g: f64, j: f64, l: usize) -> RMat {
    let mut c = RMat::zeros(2 * l, 2 * l);
    for s in 0..l {
        c[(2 * s, 2 * s + 1)] = -g;
        c[(2 * s + 1, 2 * s)] = g;
        if s + 1 < l {
            c[(2 * s + 1, 2 * s + 2)] = j;
            c[(2 * s + 2, 2 * s + 1)] = -j;
        }
    }
    c
}

/// Covariance matrix of the ground state, `γ = i·sign(iC)`.
pub fn ground_state(g: f64, j: f64, l: usize) -> Result<CovarianceState> {
    if l == 0 {
        return Err(Error::Argument("chain must be nonempty".into()));
    }
    let c = coupling_matrix(g, j, l);
    let ic = c.map(|x| I * x);
    let s = hermitian_sign(&ic);
    let gamma = s.map(|z| (I * z).re);
    if gamma.iter().any(|x| !x.is_finite()) || (&gamma * &gamma + RMat::identity(2 * l, 2 * l)).amax() > 1e-8 {
        return Err(Error::SolverFailure(
            "ground state is degenerate; sign function undefined".into(),
        ));
    }
    CovarianceState::from_gamma(gamma)
}

/// `⟨H⟩ = −g Σ⟨Z⟩ + J Σ⟨XX⟩` of a chain covariance.
pub fn energy(state: &CovarianceState, g: f64, j: f64) -> f64 {
    let l = state.n_qubits();
    let z: f64 = (0..l).map(|q| state.z(q)).sum();
    let xx: f64 = (0..l.saturating_sub(1)).map(|q| state.xx(q)).sum();
    -g * z + j * xx
}

/// Ground-state energy.
pub fn ground_energy(g: f64, j: f64, l: usize) -> Result<f64> {
    Ok(energy(&ground_state(g, j, l)?, g, j))
}
