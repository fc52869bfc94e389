//! Dense complex linear-algebra helpers on top of `nalgebra`.

use faer::Mat;
use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Embeds a real row-major matrix.
pub fn real_matrix(rows: usize, cols: usize, data: &[f64]) -> CMatrix {
    assert_eq!(data.len(), rows * cols);
    CMatrix::from_fn(rows, cols, |i, j| c(data[i * cols + j]))
}

pub fn real_vector(data: &[f64]) -> CVector {
    CVector::from_iterator(data.len(), data.iter().map(|&x| c(x)))
}

pub fn diagonal(entries: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&real_vector(entries))
}

/// Stacks column vectors into a matrix.
pub fn from_columns(cols: &[CVector]) -> CMatrix {
    if cols.is_empty() {
        return CMatrix::zeros(0, 0);
    }
    CMatrix::from_columns(cols)
}

/// Concatenates matrices with equal row counts side by side.
pub fn hstack(blocks: &[&CMatrix], rows: usize) -> CMatrix {
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMatrix::zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        out.view_mut((0, at), (rows, b.ncols())).copy_from(*b);
        at += b.ncols();
    }
    out
}

/// Thin singular value decomposition `m = U diag(s) V*`, `s` descending.
pub struct Svd {
    pub u: CMatrix,
    pub s: Vec<f64>,
    pub v: CMatrix,
}

/// Computed with `faer`; nalgebra's bidiagonal SVD is unreliable on the
/// structured rank-deficient matrices that stacked member bases produce.
pub fn svd(m: &CMatrix) -> Svd {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return Svd {
            u: CMatrix::zeros(r, 0),
            s: Vec::new(),
            v: CMatrix::zeros(c, 0),
        };
    }
    let a = Mat::<faer::c64>::from_fn(r, c, |i, j| {
        let z = m[(i, j)];
        faer::c64::new(z.re, z.im)
    });
    let d = a.thin_svd().expect("SVD converges on finite input");
    let k = r.min(c);
    let (u, v, s) = (d.U(), d.V(), d.S());
    Svd {
        u: CMatrix::from_fn(r, k, |i, j| C64::new(u[(i, j)].re, u[(i, j)].im)),
        s: (0..k).map(|i| s[i].re).collect(),
        v: CMatrix::from_fn(c, k, |i, j| C64::new(v[(i, j)].re, v[(i, j)].im)),
    }
}

/// Singular values in descending order. Empty matrices have none.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    svd(m).s
}

/// Moore-Penrose inverse, dropping singular values at or below `cutoff`.
pub fn pseudo_inverse(m: &CMatrix, cutoff: f64) -> CMatrix {
    let d = svd(m);
    let mut out = CMatrix::zeros(m.ncols(), m.nrows());
    for (i, &s) in d.s.iter().enumerate() {
        if s > cutoff {
            out += (d.v.column(i) * d.u.column(i).adjoint()).scale(1.0 / s);
        }
    }
    out
}

pub fn spectral_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

fn kept(s: &[f64], tau_rank: f64) -> usize {
    match s.first() {
        Some(&top) if top > 0.0 => s.iter().filter(|&&x| x > tau_rank * top).count(),
        _ => 0,
    }
}

/// Numerical rank with a threshold relative to the largest singular value.
pub fn rank(m: &CMatrix, tau_rank: f64) -> usize {
    kept(&singular_values(m), tau_rank)
}

/// Orthonormal basis of the column space, truncated at `tau_rank`.
///
/// The result has `rank(m)` columns; it has zero columns for a zero matrix.
pub fn column_space(m: &CMatrix, tau_rank: f64) -> CMatrix {
    let d = svd(m);
    d.u.columns(0, kept(&d.s, tau_rank)).into_owned()
}

/// Eigen-decomposition of the Hermitian part of `h`, eigenvalues ascending.
pub fn hermitian_eigen(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    let sym = (h + h.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(h.nrows(), order.len(), |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

pub fn hermitian_eigenvalues(h: &CMatrix) -> Vec<f64> {
    hermitian_eigen(h).0
}

/// Eigenpairs of the Hermitian pencil `(a, d)` with `d` positive definite,
/// i.e. solutions of `a x = lambda d x`, eigenvalues ascending.
///
/// The pencil is reduced to `L^-1 a L^-*` through the Cholesky factor of `d`.
pub fn hermitian_pencil(a: &CMatrix, d: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let d_sym = (d + d.adjoint()).scale(0.5);
    // Complex Cholesky in nalgebra does not reject indefinite input.
    let d_min = hermitian_eigenvalues(&d_sym).first().copied().unwrap_or(0.0);
    if d_min.is_nan() || d_min <= 0.0 {
        return Err(Error::Numerical(format!(
            "pencil denominator is not positive definite (min eigenvalue {d_min:.3e})"
        )));
    }
    let chol =
        Cholesky::new(d_sym).ok_or_else(|| Error::Numerical("pencil denominator is not positive definite".into()))?;
    let l = chol.l();
    let l_inv = l
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Numerical("singular Cholesky factor".into()))?;
    let reduced = &l_inv * a * l_inv.adjoint();
    let (values, y) = hermitian_eigen(&reduced);
    Ok((values, l_inv.adjoint() * y))
}

/// Relative difference `||a - b||_F / max(1, ||b||_F)`.
pub fn relative_residual(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Solves `m x = rhs` with a condition-number guard.
pub fn guarded_inverse(m: &CMatrix, max_condition: f64) -> Result<CMatrix> {
    let s = singular_values(m);
    let top = s.first().copied().unwrap_or(0.0);
    let bottom = s.last().copied().unwrap_or(0.0);
    let condition = if bottom > 0.0 { top / bottom } else { f64::INFINITY };
    if condition.is_nan() || condition > max_condition {
        return Err(Error::SingularOperator { condition });
    }
    m.clone().try_inverse().ok_or(Error::SingularOperator { condition })
}

pub fn normalized(v: &CVector) -> CVector {
    let n = v.norm();
    if n > 0.0 {
        v.unscale(n)
    } else {
        v.clone()
    }
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn column_space_truncates_rank() {
        let m = real_matrix(3, 3, &[1.0, 2.0, 0.0, 0.0, 0.0, 0.0, 1.0, 2.0, 0.0]);
        let u = column_space(&m, 1e-10);
        assert_eq!(u.ncols(), 1);
        assert!((u.adjoint() * &u - identity(1)).norm() < 1e-12);
        assert_eq!(rank(&m, 1e-10), 1);
        assert_eq!(column_space(&CMatrix::zeros(3, 2), 1e-10).ncols(), 0);
    }

    #[test]
    fn pencil_matches_hand_solution() {
        // a x = l d x with a = diag(2, 6), d = diag(1, 2) -> l in {2, 3}
        let a = diagonal(&[2.0, 6.0]);
        let d = diagonal(&[1.0, 2.0]);
        let (vals, vecs) = hermitian_pencil(&a, &d).unwrap();
        assert!((vals[0] - 2.0).abs() < 1e-12 && (vals[1] - 3.0).abs() < 1e-12);
        for (k, &l) in vals.iter().enumerate() {
            let x = vecs.column(k).into_owned();
            let r = &a * &x - (&d * &x).scale(l);
            assert!(r.norm() < 1e-12);
        }
        assert!(hermitian_pencil(&a, &diagonal(&[1.0, -1.0])).is_err());
    }

    #[test]
    fn guarded_inverse_rejects_singular() {
        let m = diagonal(&[1.0, 1e-12]);
        assert!(matches!(guarded_inverse(&m, 1e8), Err(Error::SingularOperator { .. })));
        assert!(guarded_inverse(&diagonal(&[2.0, 4.0]), 1e8).is_ok());
    }
}
