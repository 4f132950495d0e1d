//! Small dense linear-algebra helpers shared by the beamforming and solver
//! modules.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn, SymmetricEigen};

use crate::error::{Error, Result};
use crate::{CMatrix, CVector, C64};

/// Relative jitter added to the diagonal when a factorization fails.
pub const JITTER_SCALE: f64 = 1e-10;

const JITTER_ESCALATIONS: usize = 6;

/// Largest elementwise deviation `|A_ij - conj(A_ji)|`.
pub fn hermitian_asymmetry(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..=j {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Fails with [`Error::NotHermitian`] unless `a` is square and Hermitian to
/// within `tol` (scaled by the largest entry when that exceeds one).
pub fn ensure_hermitian(a: &CMatrix, tol: f64) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: a.ncols(),
        });
    }
    let scale = a.iter().fold(1.0f64, |m, z| m.max(z.norm()));
    let asym = hermitian_asymmetry(a);
    if asym > tol * scale {
        return Err(Error::NotHermitian(asym));
    }
    Ok(())
}

/// `(A + A^H) / 2`.
pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()).scale(0.5)
}

fn mean_diag_c(a: &CMatrix) -> f64 {
    let n = a.nrows().max(1);
    a.diagonal().iter().map(|z| z.re.abs()).sum::<f64>() / n as f64
}

/// Cholesky factor of a Hermitian positive definite matrix, retrying with a
/// growing diagonal jitter (starting at `1e-10 * trace / dim`) when the
/// plain factorization fails. Returns the factor and the jitter applied.
pub fn cholesky_c(a: &CMatrix) -> Result<(Cholesky<C64, Dyn>, f64)> {
    if let Some(ch) = Cholesky::new(a.clone()) {
        return Ok((ch, 0.0));
    }
    let base = JITTER_SCALE * mean_diag_c(a).max(f64::MIN_POSITIVE);
    let mut jitter = base;
    for _ in 0..JITTER_ESCALATIONS {
        let mut shifted = a.clone();
        for i in 0..a.nrows() {
            shifted[(i, i)] += C64::new(jitter, 0.0);
        }
        if let Some(ch) = Cholesky::new(shifted) {
            return Ok((ch, jitter));
        }
        jitter *= 100.0;
    }
    Err(Error::Singular)
}

/// Real counterpart of [`cholesky_c`].
pub fn cholesky_r(a: &DMatrix<f64>) -> Result<(Cholesky<f64, Dyn>, f64)> {
    if let Some(ch) = Cholesky::new(a.clone()) {
        return Ok((ch, 0.0));
    }
    let n = a.nrows().max(1);
    let mean = a.diagonal().iter().map(|v| v.abs()).sum::<f64>() / n as f64;
    let mut jitter = JITTER_SCALE * mean.max(f64::MIN_POSITIVE);
    for _ in 0..JITTER_ESCALATIONS {
        let mut shifted = a.clone();
        for i in 0..a.nrows() {
            shifted[(i, i)] += jitter;
        }
        if let Some(ch) = Cholesky::new(shifted) {
            return Ok((ch, jitter));
        }
        jitter *= 100.0;
    }
    Err(Error::Singular)
}

/// Eigen-decomposition of the whitened pencil `L^{-1} A L^{-H}` where
/// `B = L L^H`. Eigenvalues come back in ascending order; the columns of the
/// returned matrix are the generalized eigenvectors `v` with `A v = λ B v`,
/// normalized so that `v^H B v = 1`.
pub fn generalized_eigh(a: &CMatrix, b: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if a.shape() != b.shape() || a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch {
            expected: b.nrows(),
            found: a.nrows(),
        });
    }
    let (chol, _) = cholesky_c(b)?;
    let l = chol.l();
    let x = l.solve_lower_triangular(a).ok_or(Error::Singular)?;
    let y = l
        .solve_lower_triangular(&x.adjoint())
        .ok_or(Error::Singular)?;
    let eig = SymmetricEigen::new(hermitian_part(&y));

    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let sorted = CMatrix::from_fn(y.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    let vectors = l
        .adjoint()
        .solve_upper_triangular(&sorted)
        .ok_or(Error::Singular)?;
    Ok((values, vectors))
}

/// Largest generalized eigenpair of the Hermitian pencil `(A, B)`.
pub fn generalized_max_eig(a: &CMatrix, b: &CMatrix) -> Result<(f64, CVector)> {
    let (values, vectors) = generalized_eigh(a, b)?;
    let k = values.len() - 1;
    Ok((values[k], vectors.column(k).into_owned()))
}

/// `x^H A y`.
pub fn quad_form(x: &CVector, a: &CMatrix, y: &CVector) -> C64 {
    x.dotc(&(a * y))
}

/// `x' A x` for real symmetric `A`.
pub fn quad_form_r(x: &DVector<f64>, a: &DMatrix<f64>) -> f64 {
    x.dot(&(a * x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn asymmetry_detects_non_hermitian() {
        let a =
            CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(1.0, 0.0)]);
        assert!(ensure_hermitian(&a, 1e-12).is_err());
        let h =
            CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(1.0, 0.0)]);
        assert!(ensure_hermitian(&h, 1e-12).is_ok());
    }

    #[test]
    fn jitter_rescues_semidefinite_matrix() {
        let v = CVector::from_vec(vec![c(1.0, 0.0), c(0.0, 1.0)]);
        let a = &v * v.adjoint();
        let (_, jitter) = cholesky_c(&a).unwrap();
        assert!(jitter > 0.0 && jitter < 1e-6);
    }

    #[test]
    fn generalized_eig_of_diagonal_pencil() {
        let a = CMatrix::from_diagonal(&CVector::from_vec(vec![c(2.0, 0.0), c(6.0, 0.0)]));
        let b = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.0, 0.0), c(2.0, 0.0)]));
        let (vals, vecs) = generalized_eigh(&a, &b).unwrap();
        assert!((vals[0] - 2.0).abs() < 1e-12 && (vals[1] - 3.0).abs() < 1e-12);
        let v = vecs.column(1).into_owned();
        assert!((quad_form(&v, &b, &v).re - 1.0).abs() < 1e-12);
    }
}
