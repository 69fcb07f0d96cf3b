//! Dense linear-algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type RMat = DMatrix<f64>;
pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Eigenpairs of a Hermitian matrix sorted by ascending eigenvalue.
pub fn eigh(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    let herm = (m + m.adjoint()) * c(0.5, 0.0);
    let eig = SymmetricEigen::new(herm);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vecs = CMat::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (vals, vecs)
}

/// Eigenpairs of a real symmetric matrix sorted by ascending eigenvalue.
pub fn eigh_real(m: &RMat) -> (Vec<f64>, RMat) {
    let n = m.nrows();
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vecs = RMat::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (vals, vecs)
}

/// Complexify a real matrix.
pub fn to_complex(m: &RMat) -> CMat {
    m.map(|x| c(x, 0.0))
}

/// Singular values of a real matrix in descending order.
pub fn singular_values(m: &RMat) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |x: f64| if x <= 0.0 || x >= 1.0 { 0.0 } else { -x * x.log2() };
    term(p) + term(1.0 - p)
}

/// Haar-distributed special-orthogonal matrix.
pub fn random_special_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RMat {
    let g = RMat::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    if n > 0 && q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    q
}

/// Matrix sign function of a Hermitian matrix; zero eigenvalues map to zero.
pub fn hermitian_sign(m: &CMat) -> CMat {
    let (vals, vecs) = eigh(m);
    let n = m.nrows();
    let mut out = CMat::zeros(n, n);
    for (k, &v) in vals.iter().enumerate() {
        let s = if v > 1e-13 {
            1.0
        } else if v < -1e-13 {
            -1.0
        } else {
            0.0
        };
        if s != 0.0 {
            let col = vecs.column(k);
            out += col * col.adjoint() * c(s, 0.0);
        }
    }
    out
}

/// Eigenpairs of a real normal matrix (e.g. orthogonal), as (eigenvalue, unit eigenvector).
///
/// Diagonalizes the Hermitian combination `i(K − Kᵀ)/2 + κ(K + Kᵀ)/2`, whose
/// eigenvectors are shared with `K`, and resolves accidental coincidences by
/// repeating the construction with a second weight inside each cluster.
pub fn normal_eigen(k: &RMat) -> Vec<(Complex64, CVec)> {
    let kc = to_complex(k);
    let combo = |m: &CMat, kappa: f64| -> CMat {
        let anti = (m - m.adjoint()) * c(0.0, 0.5);
        let sym = (m + m.adjoint()) * c(0.5 * kappa, 0.0);
        anti + sym
    };
    let (vals, vecs) = eigh(&combo(&kc, std::f64::consts::FRAC_1_PI));
    let n = vals.len();
    let mut out = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && vals[end] - vals[end - 1] < 1e-9 {
            end += 1;
        }
        let block = vecs.columns(start, end - start).into_owned();
        if end - start == 1 {
            let v = block.column(0).into_owned();
            let lam = (v.adjoint() * &kc * &v)[(0, 0)];
            out.push((lam, v));
        } else {
            let small = block.adjoint() * &kc * &block;
            let (_, w) = eigh(&combo(&small, 0.577_215_665));
            let rotated = &block * w;
            for col in rotated.column_iter() {
                let v = col.into_owned();
                let lam = (v.adjoint() * &kc * &v)[(0, 0)];
                out.push((lam, v));
            }
        }
        start = end;
    }
    out
}

/// Largest absolute entry.
pub fn max_abs_real(m: &RMat) -> f64 {
    m.iter().fold(0.0_f64, |a, x| a.max(x.abs()))
}

/// Largest absolute entry.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0_f64, |a, x| a.max(x.norm()))
}

/// Pfaffian of a real antisymmetric matrix by Gaussian elimination with
/// pivoting.
pub fn pfaffian(m: &RMat) -> f64 {
    let n = m.nrows();
    if n % 2 == 1 {
        return 0.0;
    }
    let mut a = m.clone();
    let mut pf = 1.0;
    for k in (0..n).step_by(2) {
        let (piv, val) =
            (k + 1..n)
                .map(|i| (i, a[(k, i)].abs()))
                .fold((k + 1, -1.0), |best, x| if x.1 > best.1 { x } else { best });
        if val == 0.0 {
            return 0.0;
        }
        if piv != k + 1 {
            a.swap_rows(k + 1, piv);
            a.swap_columns(k + 1, piv);
            pf = -pf;
        }
        let akk1 = a[(k, k + 1)];
        pf *= akk1;
        for i in k + 2..n {
            let t = a[(k, i)] / akk1;
            if t != 0.0 {
                for j in k + 2..n {
                    let v = a[(k + 1, j)];
                    a[(i, j)] -= t * v;
                    a[(j, i)] += t * v;
                }
            }
        }
    }
    pf
}

/// Least-squares line fit `y = a x + b`; returns (slope, intercept, slope standard error).
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let stderr = if x.len() > 2 {
        let rss: f64 = x.iter().zip(y).map(|(a, b)| (b - icpt - slope * a).powi(2)).sum();
        (rss / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    (slope, icpt, stderr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pfaffian_squares_to_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [2, 4, 6, 8] {
            let b = RMat::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
            let a = &b - b.transpose();
            let pf = pfaffian(&a);
            assert!((pf * pf - a.determinant()).abs() < 1e-9 * a.determinant().abs().max(1.0));
        }
        let mut two = RMat::zeros(2, 2);
        two[(0, 1)] = 3.0;
        two[(1, 0)] = -3.0;
        assert_eq!(pfaffian(&two), 3.0);
    }

    #[test]
    fn random_rotation_is_special_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let q = random_special_orthogonal(7, &mut rng);
        let e = &q * q.transpose() - RMat::identity(7, 7);
        assert!(max_abs_real(&e) < 1e-12);
        assert!((q.determinant() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn eigh_sorts_ascending() {
        let m = CMat::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]);
        let (v, _) = eigh(&m);
        assert!((v[0] - 1.0).abs() < 1e-12 && (v[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn fit_recovers_line() {
        let x: Vec<f64> = (0..5).map(|k| k as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| -0.5 * v + 2.0).collect();
        let (a, b, s) = linear_fit(&x, &y);
        assert!((a + 0.5).abs() < 1e-12 && (b - 2.0).abs() < 1e-12 && s < 1e-12);
    }
}
