//! Seeded random instances: fundamental symmetries, definite subspaces,
//! frames and operators.
//!
//! Every draw takes an explicit generator; [`draw_rng`] derives an
//! independent stream per draw index from a single seed.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::duality::VectorFrame;
use crate::fusion::WeightedFamily;
use crate::krein::{KreinSpace, Operator, Sign};
use crate::linalg::{self, CMatrix, CVector, C64};
use crate::subspace::Subspace;

/// Generator for draw `index` under `seed`.
pub fn draw_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVector {
    CVector::from_fn(n, |_, _| gaussian(rng))
}

/// Uniform on the complex unit sphere.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVector {
    loop {
        let v = gaussian_vector(rng, n);
        if v.norm() > 1e-12 {
            return v.unscale(v.norm());
        }
    }
}

/// Haar-distributed unitary (QR of a Gaussian matrix with phase fix).
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let qr = gaussian_matrix(rng, n, n).qr();
    let (mut q, r) = qr.unpack();
    for k in 0..n {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let mut col = q.column_mut(k);
        col *= phase;
    }
    q
}

/// `J = V diag(1_p, -1_q) V*` for a random unitary `V`.
pub fn random_fundamental_symmetry<R: Rng + ?Sized>(rng: &mut R, p: usize, q: usize) -> KreinSpace {
    let n = p + q;
    let v = random_unitary(rng, n);
    let d: Vec<f64> = (0..n).map(|i| if i < p { 1.0 } else { -1.0 }).collect();
    let j = &v * linalg::diagonal(&d) * v.adjoint();
    let j = (&j + j.adjoint()).scale(0.5);
    KreinSpace::new(j).expect("unitary conjugate of a signature matrix")
}

/// Random space of dimension at most `max_dim` with `p, q >= 1`.
pub fn random_krein_space<R: Rng + ?Sized>(rng: &mut R, max_dim: usize) -> KreinSpace {
    let n = rng.random_range(2..=max_dim.max(2));
    let p = rng.random_range(1..n);
    random_fundamental_symmetry(rng, p, n - p)
}

/// Maximal uniformly definite subspace of the given sign, the graph of a
/// random angular operator with norm `max_norm * u`, `u` uniform in `[0, 1)`.
pub fn random_maximal<R: Rng + ?Sized>(rng: &mut R, space: &KreinSpace, sign: Sign, max_norm: f64) -> Subspace {
    let own = space.canonical_basis(sign);
    let other = space.canonical_basis(sign.opposite());
    let (k_own, k_other) = (own.ncols(), other.ncols());
    assert!(k_own > 0, "no {sign} directions in this space");
    let mut basis = own.clone();
    if k_other > 0 {
        let a = gaussian_matrix(rng, k_other, k_own);
        let norm = linalg::spectral_norm(&a);
        let target = max_norm * rng.random::<f64>();
        let a = if norm > 0.0 { a.scale(target / norm) } else { a };
        basis += other * a;
    }
    Subspace::new(space, basis).expect("graph basis has full rank")
}

/// Random `dim`-dimensional subspace of a random maximal subspace.
pub fn random_definite_subspace<R: Rng + ?Sized>(rng: &mut R, space: &KreinSpace, sign: Sign, dim: usize) -> Subspace {
    let m = random_maximal(rng, space, sign, 0.8);
    random_subspace_of(rng, &m, dim)
}

/// Random sign (among those present) and random dimension.
pub fn random_uniformly_definite<R: Rng + ?Sized>(rng: &mut R, space: &KreinSpace) -> Subspace {
    let (p, q) = space.signature();
    let sign = match (p, q) {
        (_, 0) => Sign::Positive,
        (0, _) => Sign::Negative,
        _ if rng.random::<bool>() => Sign::Positive,
        _ => Sign::Negative,
    };
    let dim = rng.random_range(1..=space.signature_count(sign));
    random_definite_subspace(rng, space, sign, dim)
}

/// Random `dim`-dimensional subspace of `m`.
pub fn random_subspace_of<R: Rng + ?Sized>(rng: &mut R, m: &Subspace, dim: usize) -> Subspace {
    let dim = dim.clamp(1, m.dim());
    loop {
        let c = gaussian_matrix(rng, m.dim(), dim);
        if let Ok(w) = Subspace::new(m.space(), m.orthonormal_basis() * c) {
            return w;
        }
    }
}

/// Generic subspace of the ambient space.
pub fn random_subspace<R: Rng + ?Sized>(rng: &mut R, space: &KreinSpace, dim: usize) -> Subspace {
    random_subspace_of(rng, &Subspace::full(space), dim)
}

/// The J-orthogonal companion `M^[perp]`.
pub fn j_orthogonal_complement(m: &Subspace) -> Option<Subspace> {
    let space = m.space();
    let n = space.dim();
    let jm = m.j_image();
    let p = linalg::identity(n) - jm.orthogonal_projection().matrix();
    Subspace::span(space, &p).ok()
}

fn members_in<R: Rng + ?Sized>(rng: &mut R, m: &Subspace, extra: usize) -> Vec<Subspace> {
    let mut out: Vec<Subspace> = Vec::new();
    loop {
        let covered = match Subspace::sum(m.space(), &out) {
            Ok(s) => s.dim(),
            Err(_) => 0,
        };
        if covered >= m.dim() {
            break;
        }
        let dim = rng.random_range(1..=m.dim());
        out.push(random_subspace_of(rng, m, dim));
    }
    for _ in 0..extra {
        let dim = rng.random_range(1..=m.dim());
        out.push(random_subspace_of(rng, m, dim));
    }
    out
}

fn weights<R: Rng + ?Sized>(rng: &mut R, count: usize) -> Vec<f64> {
    (0..count).map(|_| rng.random_range(0.5..2.0)).collect()
}

fn fusion_from_ranges<R: Rng + ?Sized>(rng: &mut R, space: &KreinSpace, ranges: &[Subspace]) -> WeightedFamily {
    let mut subspaces = Vec::new();
    for m in ranges {
        let extra = rng.random_range(0..=2);
        subspaces.extend(members_in(rng, m, extra));
    }
    let w = weights(rng, subspaces.len());
    WeightedFamily::new(space, subspaces, &w).expect("members of uniformly definite ranges")
}

fn maximal_pair<R: Rng + ?Sized>(rng: &mut R, space: &KreinSpace, j_orthogonal: bool) -> Vec<Subspace> {
    let (p, q) = space.signature();
    let mut out = Vec::new();
    let plus = (p > 0).then(|| random_maximal(rng, space, Sign::Positive, 0.8));
    if let Some(m) = &plus {
        out.push(m.clone());
    }
    if q > 0 {
        let minus = match (&plus, j_orthogonal) {
            (Some(m), true) => j_orthogonal_complement(m).expect("maximal positive has a complement"),
            _ => random_maximal(rng, space, Sign::Negative, 0.8),
        };
        out.push(minus);
    }
    out
}

/// Certified J-fusion frame: members are random subspaces of independent
/// random maximal `M+` and `M-`, added until each range is covered.
pub fn random_fusion_frame<R: Rng + ?Sized>(rng: &mut R, space: &KreinSpace) -> WeightedFamily {
    let ranges = maximal_pair(rng, space, false);
    fusion_from_ranges(rng, space, &ranges)
}

/// As [`random_fusion_frame`] with `M- = M+^[perp]`.
pub fn random_j_orthogonal_fusion_frame<R: Rng + ?Sized>(rng: &mut R, space: &KreinSpace) -> WeightedFamily {
    let ranges = maximal_pair(rng, space, true);
    fusion_from_ranges(rng, space, &ranges)
}

fn vectors_in<R: Rng + ?Sized>(rng: &mut R, m: &Subspace) -> Vec<CVector> {
    let count = m.dim() + rng.random_range(0..=2);
    loop {
        let c = gaussian_matrix(rng, m.dim(), count);
        let vs = m.orthonormal_basis() * c;
        if linalg::rank(&vs, 1e-8) == m.dim() {
            return vs.column_iter().map(|c| c.into_owned()).collect();
        }
    }
}

fn vframe_from_ranges<R: Rng + ?Sized>(rng: &mut R, space: &KreinSpace, ranges: &[Subspace]) -> VectorFrame {
    let mut vectors = Vec::new();
    for m in ranges {
        vectors.extend(vectors_in(rng, m));
    }
    VectorFrame::new(space, vectors).expect("vectors in uniformly definite ranges")
}

/// Vector J-frame spanning independent random maximal `M+` and `M-`.
pub fn random_vector_frame<R: Rng + ?Sized>(rng: &mut R, space: &KreinSpace) -> VectorFrame {
    let ranges = maximal_pair(rng, space, false);
    vframe_from_ranges(rng, space, &ranges)
}

/// Vector J-frame with `M- = M+^[perp]`.
pub fn random_j_orthogonal_vector_frame<R: Rng + ?Sized>(rng: &mut R, space: &KreinSpace) -> VectorFrame {
    let ranges = maximal_pair(rng, space, true);
    vframe_from_ranges(rng, space, &ranges)
}

/// `exp(J A)` with `A` skew-Hermitian, so `T# T = I`.
pub fn random_j_unitary<R: Rng + ?Sized>(rng: &mut R, space: &KreinSpace) -> Operator {
    let n = space.dim();
    let g = gaussian_matrix(rng, n, n);
    let a = (&g - g.adjoint()).scale(0.5);
    let a = a.unscale(linalg::spectral_norm(&a).max(1e-12));
    let t = (space.j() * a).exp();
    Operator::new(space, t).expect("square matrix")
}

/// `c U` with `U` J-unitary and `c` a random non-zero complex scalar.
pub fn random_scaled_j_unitary<R: Rng + ?Sized>(rng: &mut R, space: &KreinSpace) -> (Operator, C64) {
    let modulus = rng.random_range(0.5..2.0);
    let angle = rng.random_range(0.0..std::f64::consts::TAU);
    let c = C64::from_polar(modulus, angle);
    (random_j_unitary(rng, space).scale(c), c)
}

pub fn random_operator<R: Rng + ?Sized>(rng: &mut R, space: &KreinSpace) -> Operator {
    Operator::new(space, gaussian_matrix(rng, space.dim(), space.dim())).expect("square matrix")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = gaussian_vector(&mut draw_rng(7, 0), 3);
        let b = gaussian_vector(&mut draw_rng(7, 0), 3);
        let c = gaussian_vector(&mut draw_rng(7, 1), 3);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn symmetry_has_requested_signature() {
        let k = random_fundamental_symmetry(&mut draw_rng(1, 0), 3, 2);
        assert_eq!(k.signature(), (3, 2));
    }

    #[test]
    fn maximal_subspaces_are_maximal() {
        let mut rng = draw_rng(2, 0);
        for _ in 0..10 {
            let k = random_krein_space(&mut rng, 6);
            for sign in [Sign::Positive, Sign::Negative] {
                let m = random_maximal(&mut rng, &k, sign, 0.8);
                assert!(m.classify().is_maximal_uniformly(sign));
            }
        }
    }

    #[test]
    fn generated_frames_certify() {
        let mut rng = draw_rng(3, 0);
        for _ in 0..10 {
            let k = random_krein_space(&mut rng, 6);
            assert!(random_fusion_frame(&mut rng, &k).is_frame());
            assert!(random_j_orthogonal_fusion_frame(&mut rng, &k).is_frame());
            assert!(random_vector_frame(&mut rng, &k).is_j_frame());
        }
    }

    #[test]
    fn j_unitary_is_j_unitary() {
        let mut rng = draw_rng(4, 0);
        let k = random_krein_space(&mut rng, 5);
        let t = random_j_unitary(&mut rng, &k);
        let r = t.j_adjoint().compose(&t).into_matrix() - linalg::identity(k.dim());
        assert!(r.norm() < 1e-10, "{}", r.norm());
    }

    #[test]
    fn j_orthogonal_complement_of_maximal_positive_is_maximal_negative() {
        let mut rng = draw_rng(5, 0);
        let k = random_krein_space(&mut rng, 6);
        let m = random_maximal(&mut rng, &k, Sign::Positive, 0.8);
        let c = j_orthogonal_complement(&m).unwrap();
        assert!(c.classify().is_maximal_uniformly(Sign::Negative));
        let cross = m.orthonormal_basis().adjoint() * k.j() * c.orthonormal_basis();
        assert!(cross.norm() < 1e-12);
    }
}
