//! Reduced minimum modulus.

use crate::linalg::{self, CMatrix};

/// `gamma(T) = inf { ||Tx|| : x in N(T)^perp, ||x|| = 1 }`, the smallest
/// singular value of `T` above the relative rank threshold `tau_rank`.
///
/// Works for rectangular matrices. The zero operator has `gamma = 0`.
pub fn reduced_min_modulus(t: &CMatrix, tau_rank: f64) -> f64 {
    let s = linalg::singular_values(t);
    let top = match s.first() {
        Some(&top) if top > 0.0 => top,
        _ => return 0.0,
    };
    s.iter()
        .copied()
        .filter(|&x| x > tau_rank * top)
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diagonal, identity};

    #[test]
    fn simple_values() {
        assert!((reduced_min_modulus(&identity(4), 1e-10) - 1.0).abs() < 1e-14);
        assert!((reduced_min_modulus(&diagonal(&[3.0, 0.0, 2.0]), 1e-10) - 2.0).abs() < 1e-14);
        assert_eq!(reduced_min_modulus(&CMatrix::zeros(3, 3), 1e-10), 0.0);
    }

    #[test]
    fn rectangular_and_adjoint() {
        let t = crate::linalg::real_matrix(2, 3, &[1.0, 2.0, 0.0, 0.0, 1.0, 1.0]);
        let g = reduced_min_modulus(&t, 1e-10);
        let g_star = reduced_min_modulus(&t.adjoint(), 1e-10);
        let g_tt = reduced_min_modulus(&(&t * t.adjoint()), 1e-10);
        assert!((g - g_star).abs() < 1e-12);
        assert!((g * g - g_tt).abs() < 1e-12);
    }
}
