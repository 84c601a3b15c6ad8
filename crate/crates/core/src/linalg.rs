//! Small dense linear-algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{CvError, Result};

/// Block-diagonal symplectic form with one `[[0, 1], [-1, 0]]` block per mode.
pub fn symplectic_form(n_modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    omega
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

pub fn max_asymmetry(m: &DMatrix<f64>) -> f64 {
    max_abs(&(m - m.transpose()))
}

/// Eigenvalues of the Hermitian matrix `a + i b` (`a` symmetric, `b`
/// antisymmetric), ascending.
pub fn hermitian_eigenvalues(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Vec<f64> {
    let h = DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| {
        Complex64::new(a[(i, j)], b[(i, j)])
    });
    let mut ev: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Symmetric square root of a positive semi-definite matrix.
pub fn sqrt_psd(v: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let eig = SymmetricEigen::new(v.clone());
    if eig
        .eigenvalues
        .iter()
        .any(|&x| x < -1e-12 || !x.is_finite())
    {
        return Err(CvError::Unphysical(
            "covariance matrix is not positive semi-definite".into(),
        ));
    }
    let root = eig.eigenvalues.map(|x| x.max(0.0).sqrt());
    Ok(&eig.eigenvectors * DMatrix::from_diagonal(&root) * eig.eigenvectors.transpose())
}

/// Symplectic eigenvalues of a positive-definite `2n x 2n` matrix: the moduli
/// of the eigenvalues of `iΩV`, one entry per mode, ascending.
///
/// Computed as the spectrum of the Hermitian matrix `√V (iΩ) √V`, which is
/// similar to `iΩV` and comes in `±ν` pairs.
pub fn symplectic_eigenvalues(v: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = v.nrows();
    if n % 2 != 0 || v.ncols() != n {
        return Err(CvError::DimensionMismatch {
            expected: n + n % 2,
            got: n,
        });
    }
    let root = sqrt_psd(v)?;
    let omega = symplectic_form(n / 2);
    let b = &root * &omega * &root;
    let zero = DMatrix::zeros(n, n);
    let ev = hermitian_eigenvalues(&zero, &b);
    if ev.iter().any(|x| !x.is_finite()) {
        return Err(CvError::EigenFailure);
    }
    // ascending: the upper half holds the positive member of each pair
    let mut nu: Vec<f64> = ev[n / 2..].to_vec();
    nu.sort_by(f64::total_cmp);
    Ok(nu)
}
