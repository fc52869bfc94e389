//! Small named instances used by tests, the CLI and the bundled specs.

use crate::duality::VectorFrame;
use crate::error::{Error, Result};
use crate::fusion::WeightedFamily;
use crate::krein::{KreinSpace, Operator};
use crate::linalg::{self, real_matrix, real_vector, CMatrix, CVector};
use crate::subspace::Subspace;

/// `J = diag(1, 1, -1)` on `C^3`.
pub fn example_space() -> KreinSpace {
    KreinSpace::diagonal(&[1.0, 1.0, -1.0]).expect("signature matrix")
}

/// `[[1, 0, 0], [1, 0, 0], [0, 0, -1]]`, a plausible-looking `J` for the
/// three-dimensional example that is neither Hermitian nor involutive.
pub fn non_involutive_j() -> CMatrix {
    real_matrix(3, 3, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, -1.0])
}

/// `w = (0, 1, eps)`.
pub fn example_w(eps: f64) -> CVector {
    real_vector(&[0.0, 1.0, eps])
}

/// `M = {(x, y, z) : z = eps (x + y)}`, uniformly positive for `eps < 1/sqrt 2`.
pub fn example_plane(space: &KreinSpace, eps: f64) -> Result<Subspace> {
    Subspace::new(space, real_matrix(3, 2, &[1.0, 0.0, 0.0, 1.0, eps, eps]))
}

/// `W1 = span{(0, 1, 1/2)}`, `W2 = span{(1, 0, 1/2)}`, `W3 = span{e3}`, unit weights.
pub fn example_family() -> WeightedFamily {
    let k = example_space();
    let lines = [[0.0, 1.0, 0.5], [1.0, 0.0, 0.5], [0.0, 0.0, 1.0]];
    let members = lines
        .iter()
        .map(|v| Subspace::from_vector(&k, &real_vector(v)).expect("non-zero"))
        .collect();
    WeightedFamily::new(&k, members, &[1.0; 3]).expect("uniformly definite members")
}

/// `f1 = e1`, `f2 = e2`, `f3 = (0, 1, 2)`.
pub fn example_vector_frame() -> VectorFrame {
    let k = example_space();
    let vs = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 1.0, 2.0]];
    VectorFrame::new(&k, vs.iter().map(|v| real_vector(v)).collect()).expect("non-neutral vectors")
}

/// Coordinate lines `span{e_i}` with the given weights. Requires a diagonal `J`.
pub fn axis_family(space: &KreinSpace, weights: &[f64]) -> Result<WeightedFamily> {
    let n = space.dim();
    let members = (0..n)
        .map(|i| {
            Subspace::from_vector(
                space,
                &CVector::from_fn(n, |r, _| linalg::c(if r == i { 1.0 } else { 0.0 })),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    WeightedFamily::new(space, members, weights)
}

/// Vectors `scale_i e_i`. Requires a diagonal `J`.
pub fn axis_vector_frame(space: &KreinSpace, scales: &[f64]) -> Result<VectorFrame> {
    let n = space.dim();
    if scales.len() != n {
        return Err(Error::Dimension(format!("{} scales for dimension {n}", scales.len())));
    }
    let vs = (0..n)
        .map(|i| CVector::from_fn(n, |r, _| linalg::c(if r == i { scales[i] } else { 0.0 })))
        .collect();
    VectorFrame::new(space, vs)
}

/// Truncation to `C^m` of the sequence-space operator
/// `T(c) = (c1 + c2, c1 + 2 c2, c3, c4, ...)` with `J = diag(1, -1, 1, -1, ...)`.
/// `T(span{e1}) = span{(1, 1, 0, ...)}` is neutral.
pub fn l2_truncated(m: usize) -> Result<(KreinSpace, Operator)> {
    if m < 2 {
        return Err(Error::Dimension(format!("truncation needs m >= 2, got {m}")));
    }
    let signs: Vec<f64> = (0..m).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
    let k = KreinSpace::diagonal(&signs)?;
    let mut t = linalg::identity(m);
    t[(0, 0)] = linalg::c(1.0);
    t[(0, 1)] = linalg::c(1.0);
    t[(1, 0)] = linalg::c(1.0);
    t[(1, 1)] = linalg::c(2.0);
    let t = Operator::new(&k, t)?;
    Ok((k, t))
}

/// Hyperbolic rotation mixing coordinates `i` (positive) and `j` (negative)
/// of a diagonal `J`; J-unitary.
pub fn boost(space: &KreinSpace, i: usize, j: usize, rapidity: f64) -> Result<Operator> {
    let n = space.dim();
    if i >= n || j >= n || i == j {
        return Err(Error::Dimension(format!(
            "invalid boost axes ({i}, {j}) for dimension {n}"
        )));
    }
    let mut t = linalg::identity(n);
    let (ch, sh) = (rapidity.cosh(), rapidity.sinh());
    t[(i, i)] = linalg::c(ch);
    t[(j, j)] = linalg::c(ch);
    t[(i, j)] = linalg::c(sh);
    t[(j, i)] = linalg::c(sh);
    Operator::new(space, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::is_j_isometry_multiple;

    #[test]
    fn non_involutive_candidate_is_rejected() {
        assert!(KreinSpace::new(non_involutive_j()).is_err());
    }

    #[test]
    fn example_objects_are_frames() {
        assert!(example_family().is_frame());
        assert!(example_vector_frame().is_j_frame());
    }

    #[test]
    fn boost_is_j_unitary() {
        let k = example_space();
        let t = boost(&k, 0, 2, 0.7).unwrap();
        let (ok, c) = is_j_isometry_multiple(&t);
        assert!(ok && (c - 1.0).abs() < 1e-12);
    }

    #[test]
    fn l2_image_of_e1() {
        let (_, t) = l2_truncated(4).unwrap();
        let img = t.apply(&real_vector(&[1.0, 0.0, 0.0, 0.0])).unwrap();
        assert_eq!(img, real_vector(&[1.0, 1.0, 0.0, 0.0]));
        assert!(l2_truncated(1).is_err());
    }
}
