use super::DenseState;
use crate::error::{Error, Result};
use crate::linalg::{c, eigh, CMat};

/// Second Rényi entropy `-log₂ tr ρ²`.
pub fn renyi2_entropy(rho: &CMat) -> f64 {
    let purity = (rho * rho).trace().re;
    -purity.max(f64::MIN_POSITIVE).log2()
}

/// Rényi mutual information `S²(A) + S²(B) − S²(A∪B)` of disjoint qubit sets.
pub fn renyi_mi(state: &DenseState, a: &[usize], b: &[usize]) -> Result<f64> {
    if a.iter().any(|q| b.contains(q)) {
        return Err(Error::Argument("partitions overlap".into()));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::Argument("partitions must be nonempty".into()));
    }
    let ab: Vec<usize> = a.iter().chain(b).copied().collect();
    let sa = renyi2_entropy(&state.reduced(a)?);
    let sb = renyi2_entropy(&state.reduced(b)?);
    let sab = renyi2_entropy(&state.reduced(&ab)?);
    Ok(sa + sb - sab)
}

/// Wootters concurrence of a two-qubit density matrix.
pub fn concurrence_of(rho: &CMat) -> Result<f64> {
    if rho.nrows() != 4 || rho.ncols() != 4 {
        return Err(Error::Dimension("concurrence needs a 4×4 matrix".into()));
    }
    // Y⊗Y in the basis |00⟩, |01⟩, |10⟩, |11⟩ is the anti-diagonal (−1, 1, 1, −1).
    let mut yy = CMat::zeros(4, 4);
    yy[(0, 3)] = c(-1.0, 0.0);
    yy[(1, 2)] = c(1.0, 0.0);
    yy[(2, 1)] = c(1.0, 0.0);
    yy[(3, 0)] = c(-1.0, 0.0);
    let tilde = &yy * rho.conjugate() * &yy;
    let (vals, vecs) = eigh(rho);
    let sq = CMat::from_diagonal(&nalgebra::DVector::from_iterator(
        4,
        vals.iter().map(|v| c(v.max(0.0).sqrt(), 0.0)),
    ));
    let root = &vecs * sq * vecs.adjoint();
    let m = &root * tilde * &root;
    let (mu, _) = eigh(&m);
    let mut lam: Vec<f64> = mu.iter().map(|v| v.max(0.0).sqrt()).collect();
    lam.sort_by(|x, y| y.total_cmp(x));
    Ok((lam[0] - lam[1] - lam[2] - lam[3]).clamp(0.0, 1.0))
}

/// Concurrence of the reduced state of qubits `a` and `b`.
pub fn concurrence(state: &DenseState, a: usize, b: usize) -> Result<f64> {
    if a == b {
        return Err(Error::Argument("concurrence needs two distinct qubits".into()));
    }
    concurrence_of(&state.reduced(&[a, b])?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::DenseGate;

    fn bell() -> DenseState {
        let mut s = DenseState::basis_rho(&[0, 0]).unwrap();
        let h = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        s.apply_gate(&DenseGate::Single {
            q: 0,
            u: [[h, h], [h, -h]],
        })
        .unwrap();
        let x = super::super::pauli('X');
        let one = c(1.0, 0.0);
        let z = c(0.0, 0.0);
        let mut cnot = [[z; 4]; 4];
        cnot[0][0] = one;
        cnot[1][1] = one;
        cnot[2][3] = x[0][1];
        cnot[3][2] = x[1][0];
        s.apply_gate(&DenseGate::Two { a: 0, b: 1, u: cnot }).unwrap();
        s
    }

    #[test]
    fn bell_pair_values() {
        let s = bell();
        assert!((renyi_mi(&s, &[0], &[1]).unwrap() - 2.0).abs() < 1e-12);
        assert!((concurrence(&s, 0, 1).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn product_state_values() {
        let s = DenseState::basis_rho(&[0, 1, 0]).unwrap();
        assert!(renyi_mi(&s, &[0], &[1, 2]).unwrap().abs() < 1e-12);
        assert!(concurrence(&s, 0, 2).unwrap().abs() < 1e-9);
        assert!(renyi_mi(&s, &[0], &[0]).is_err());
    }
}
