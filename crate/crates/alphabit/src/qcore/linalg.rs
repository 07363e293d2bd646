//! Thin helpers over `nalgebra` dense complex matrices.
//!
//! Everything here works on [`CMatrix`] / [`CVector`] directly; the labelled
//! multipartite structure lives one layer up in [`super::state`].

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::{Error, Result};

/// Dense complex matrix in double precision, the carrier for all operators.
pub type CMatrix = DMatrix<Complex64>;
/// Dense complex vector, the carrier for pure-state amplitudes.
pub type CVector = DVector<Complex64>;

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

/// Computational basis column vector |i⟩ of dimension `d`.
pub fn basis_vec(d: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(d);
    v[i] = c(1.0, 0.0);
    v
}

/// Kronecker product, row-major convention: the first factor is the most
/// significant index.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn dagger(m: &CMatrix) -> CMatrix {
    m.adjoint()
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    max_abs(&(a - b))
}

/// Max `|M[i,j] - conj(M[j,i])|` over all entries.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
///
/// Returns `(eigenvalues, eigenvectors)` with eigenvectors as columns, paired
/// with the sorted eigenvalues.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let se = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..se.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| se.eigenvalues[i].partial_cmp(&se.eigenvalues[j]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let n = m.nrows();
    let mut vecs = CMatrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        vecs.set_column(new_col, &se.eigenvectors.column(old_col));
    }
    (vals, vecs)
}

pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let se = m.clone().symmetric_eigen();
    let mut vals: Vec<f64> = se.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals
}

/// Trace norm (sum of singular values). Hermitian inputs take the cheaper
/// sum-of-|eigenvalue| route.
pub fn trace_norm(m: &CMatrix) -> Result<f64> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if hermiticity_defect(m) <= 1e-10 * (1.0 + max_abs(m)) {
        Ok(hermitian_eigenvalues(m).iter().map(|v| v.abs()).sum())
    } else {
        let svd = m.clone().svd(false, false);
        Ok(svd.singular_values.iter().sum())
    }
}

/// Apply `f` to the eigenvalues of a Hermitian matrix.
fn hermitian_map(m: &CMatrix, f: impl Fn(f64) -> Complex64) -> CMatrix {
    let (vals, vecs) = hermitian_eigen(m);
    let d = CMatrix::from_diagonal(&CVector::from_iterator(vals.len(), vals.iter().map(|&v| f(v))));
    &vecs * d * vecs.adjoint()
}

/// Square root of a Hermitian PSD matrix; small negative eigenvalues are
/// clamped to zero.
pub fn psd_sqrt(m: &CMatrix) -> CMatrix {
    hermitian_map(m, |v| c(v.max(0.0).sqrt(), 0.0))
}

/// Pseudo-inverse square root M^{-1/2} of a Hermitian PSD matrix; eigenvalues
/// at or below `cutoff` map to zero.
pub fn pinv_sqrt(m: &CMatrix, cutoff: f64) -> CMatrix {
    hermitian_map(m, |v| {
        if v > cutoff {
            c(1.0 / v.sqrt(), 0.0)
        } else {
            c(0.0, 0.0)
        }
    })
}

/// Unitary sign of a Hermitian matrix: eigenvalues map to ±1, with the zero
/// branch fixed to +1 so ties break deterministically.
pub fn sign_hermitian(m: &CMatrix) -> CMatrix {
    hermitian_map(m, |v| if v < 0.0 { c(-1.0, 0.0) } else { c(1.0, 0.0) })
}

/// exp(iH) for Hermitian H.
pub fn exp_i_hermitian(h: &CMatrix) -> CMatrix {
    hermitian_map(h, |v| c(v.cos(), v.sin()))
}

/// Unitary u maximising Re Tr(u·N) for an arbitrary square N, via the
/// singular value decomposition N = PΣQ†, u = QP†. The maximum equals the
/// trace norm of N.
pub fn polar_unitary(n: &CMatrix) -> CMatrix {
    let svd = n.clone().svd(true, true);
    let p = svd.u.expect("svd with u requested");
    let qt = svd.v_t.expect("svd with v_t requested");
    qt.adjoint() * p.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_norm_rejects_non_square() {
        let m = CMatrix::zeros(2, 3);
        assert!(matches!(trace_norm(&m), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn trace_norm_of_zero_is_zero() {
        assert_eq!(trace_norm(&CMatrix::zeros(3, 3)).unwrap(), 0.0);
    }

    #[test]
    fn sign_of_zero_eigenvalue_is_plus_one() {
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)]));
        let s = sign_hermitian(&m);
        assert!((s[(1, 1)] - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn polar_unitary_attains_trace_norm() {
        let n = CMatrix::from_row_slice(
            2,
            2,
            &[c(0.3, 0.1), c(-0.2, 0.4), c(0.0, -0.7), c(0.5, 0.2)],
        );
        let u = polar_unitary(&n);
        let attained = trace(&(&u * &n)).re;
        let tn = n.clone().svd(false, false).singular_values.iter().sum::<f64>();
        assert!((attained - tn).abs() < 1e-12);
        assert!(max_abs_diff(&(&u * u.adjoint()), &identity(2)) < 1e-12);
    }

    #[test]
    fn exp_i_hermitian_is_unitary() {
        let h = CMatrix::from_row_slice(2, 2, &[c(0.4, 0.0), c(0.1, 0.3), c(0.1, -0.3), c(-0.2, 0.0)]);
        let u = exp_i_hermitian(&h);
        assert!(max_abs_diff(&(&u * u.adjoint()), &identity(2)) < 1e-12);
    }
}
