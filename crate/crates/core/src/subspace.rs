//! Subspaces of a Krein space: classification, projections, Gramians and
//! angular operators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::krein::{KreinSpace, Operator, Sign};
use crate::linalg::{self, CMatrix, CVector};
use crate::modulus::reduced_min_modulus;

/// Sign behaviour of the indefinite form on a subspace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SubspaceKind {
    UniformlyPositive,
    PositiveNonUniform,
    Neutral,
    NegativeNonUniform,
    UniformlyNegative,
    Indefinite,
}

impl SubspaceKind {
    pub fn uniform_sign(self) -> Option<Sign> {
        match self {
            SubspaceKind::UniformlyPositive => Some(Sign::Positive),
            SubspaceKind::UniformlyNegative => Some(Sign::Negative),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub kind: SubspaceKind,
    pub regular: bool,
    /// Only meaningful for uniformly definite kinds.
    pub maximal_definite: bool,
    /// `(min, max)` eigenvalue of the compressed Gramian `U* J U`.
    pub extremal_gram_eigen: (f64, f64),
}

impl Classification {
    pub fn is_uniformly(&self, sign: Sign) -> bool {
        self.kind.uniform_sign() == Some(sign)
    }

    pub fn is_maximal_uniformly(&self, sign: Sign) -> bool {
        self.is_uniformly(sign) && self.maximal_definite
    }
}

/// A non-zero subspace given by a full-rank basis, with a cached
/// orthonormal basis of the same column space.
#[derive(Clone, Debug)]
pub struct Subspace {
    space: KreinSpace,
    basis: CMatrix,
    ortho: CMatrix,
}

impl Subspace {
    /// Wraps a basis matrix; fails unless its columns are linearly
    /// independent at `tau_rank`.
    pub fn new(space: &KreinSpace, basis: CMatrix) -> Result<Self> {
        space.check_matrix(&basis)?;
        if basis.ncols() == 0 {
            return Err(Error::Validation("a subspace basis needs at least one column".into()));
        }
        if !linalg::is_finite(&basis) {
            return Err(Error::Validation("basis has non-finite entries".into()));
        }
        let tol = space.tol();
        let s = linalg::singular_values(&basis);
        let top = s[0];
        let bottom = *s.last().expect("non-empty");
        if basis.ncols() > basis.nrows() || top == 0.0 || bottom <= tol.tau_rank * top {
            return Err(Error::Validation(format!(
                "basis is rank deficient (singular values {:.3e}..{:.3e})",
                top, bottom
            )));
        }
        let ortho = linalg::column_space(&basis, tol.tau_rank);
        Ok(Self {
            space: space.clone(),
            basis,
            ortho,
        })
    }

    /// Column space of an arbitrary matrix (rank-truncated). Fails on the
    /// zero subspace.
    pub fn span(space: &KreinSpace, m: &CMatrix) -> Result<Self> {
        space.check_matrix(m)?;
        let ortho = linalg::column_space(m, space.tol().tau_rank);
        if ortho.ncols() == 0 {
            return Err(Error::Validation("spanning set generates the zero subspace".into()));
        }
        Ok(Self {
            space: space.clone(),
            basis: ortho.clone(),
            ortho,
        })
    }

    pub fn from_vector(space: &KreinSpace, v: &CVector) -> Result<Self> {
        Self::new(space, CMatrix::from_column_slice(v.len(), 1, v.as_slice()))
    }

    /// The whole space.
    pub fn full(space: &KreinSpace) -> Self {
        let id = linalg::identity(space.dim());
        Self {
            space: space.clone(),
            basis: id.clone(),
            ortho: id,
        }
    }

    pub fn space(&self) -> &KreinSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.ortho.ncols()
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn orthonormal_basis(&self) -> &CMatrix {
        &self.ortho
    }

    /// `T(W)`, spanned by the image of the basis. The dimension drops when
    /// the null space of `T` meets `W`.
    pub fn image(&self, t: &Operator) -> Result<Subspace> {
        Subspace::span(&self.space, &(t.matrix() * &self.basis))
    }

    /// `J(W)`.
    pub fn j_image(&self) -> Subspace {
        let basis = self.space.j() * &self.basis;
        let ortho = self.space.j() * &self.ortho;
        Subspace {
            space: self.space.clone(),
            basis,
            ortho,
        }
    }

    /// Closure of the sum of the given subspaces.
    pub fn sum<'a>(space: &KreinSpace, parts: impl IntoIterator<Item = &'a Subspace>) -> Result<Subspace> {
        let blocks: Vec<&CMatrix> = parts.into_iter().map(|w| &w.ortho).collect();
        Subspace::span(space, &linalg::hstack(&blocks, space.dim()))
    }

    /// Euclidean distance from `x` to the subspace, relative to `||x||`.
    pub fn contains(&self, x: &CVector) -> bool {
        let p = &self.ortho * (self.ortho.adjoint() * x);
        (x - p).norm() <= self.space.tol().tau_num.sqrt() * x.norm().max(1.0)
    }

    /// Compressed Gramian `G = U* J U` in orthonormal coordinates of `W`;
    /// this is the matrix of `G_W = pi_W J |_W`.
    pub fn gramian(&self) -> CMatrix {
        self.space.form_matrix(&self.ortho)
    }

    pub fn classify(&self) -> Classification {
        let tau = self.space.tol().tau_def;
        let eig = linalg::hermitian_eigenvalues(&self.gramian());
        let min = eig[0];
        let max = *eig.last().expect("non-empty subspace");
        let kind = if min > tau {
            SubspaceKind::UniformlyPositive
        } else if max < -tau {
            SubspaceKind::UniformlyNegative
        } else if min >= -tau && max <= tau {
            SubspaceKind::Neutral
        } else if min >= -tau {
            SubspaceKind::PositiveNonUniform
        } else if max <= tau {
            SubspaceKind::NegativeNonUniform
        } else {
            SubspaceKind::Indefinite
        };
        let regular = eig.iter().all(|l| l.abs() > tau);
        let maximal_definite = match kind.uniform_sign() {
            Some(sign) => self.dim() == self.space.signature_count(sign),
            None => false,
        };
        Classification {
            kind,
            regular,
            maximal_definite,
            extremal_gram_eigen: (min, max),
        }
    }

    /// Unit vector of `W` minimising (`Sign::Negative`) or maximising
    /// (`Sign::Positive`) `[x, x]`.
    pub fn extremal_vector(&self, towards: Sign) -> CVector {
        let (_, vecs) = linalg::hermitian_eigen(&self.gramian());
        let col = match towards {
            Sign::Negative => 0,
            Sign::Positive => vecs.ncols() - 1,
        };
        linalg::normalized(&(&self.ortho * vecs.column(col)))
    }

    /// Orthogonal projection `pi_W = U U*`.
    pub fn orthogonal_projection(&self) -> Operator {
        Operator::new(&self.space, &self.ortho * self.ortho.adjoint()).expect("projection has ambient dimensions")
    }

    /// J-orthogonal projection `Q_W = B (B* J B)^-1 B* J`.
    pub fn j_projection(&self) -> Result<Operator> {
        let cls = self.classify();
        if !cls.regular {
            return Err(Error::DegenerateSubspace(format!(
                "{:?} subspace, Gramian eigenvalues in [{:.3e}, {:.3e}]",
                cls.kind, cls.extremal_gram_eigen.0, cls.extremal_gram_eigen.1
            )));
        }
        let j = self.space.j();
        let u = &self.ortho;
        let g_inv = self
            .gramian()
            .try_inverse()
            .ok_or_else(|| Error::DegenerateSubspace("Gramian is singular".into()))?;
        Operator::new(&self.space, u * g_inv * u.adjoint() * j)
    }

    /// `gamma(G_W)`, the reduced minimum modulus of the Gramian.
    pub fn gramian_gamma(&self) -> f64 {
        reduced_min_modulus(&self.gramian(), self.space.tol().tau_rank)
    }

    /// Angular operator of a uniformly definite subspace with respect to the
    /// canonical component of the same sign.
    pub fn angular_operator(&self, sign: Sign) -> Result<AngularOperator> {
        let cls = self.classify();
        if !cls.is_uniformly(sign) {
            return Err(Error::Classification(format!(
                "angular operator over K{sign} needs a uniformly {} subspace, got {:?}",
                if sign == Sign::Positive { "positive" } else { "negative" },
                cls.kind
            )));
        }
        let tol = self.space.tol();
        let own = self.space.canonical_basis(sign);
        let other = self.space.canonical_basis(sign.opposite());
        // Components of W along K(sign) and K(-sign).
        let x_own = own.adjoint() * &self.ortho;
        let x_other = other.adjoint() * &self.ortho;
        let pinv = linalg::pseudo_inverse(&x_own, tol.tau_rank * linalg::spectral_norm(&x_own));
        let matrix = x_other * pinv;
        let norm = linalg::spectral_norm(&matrix);
        Ok(AngularOperator {
            sign,
            norm,
            maximal: cls.maximal_definite,
            gramian_gamma: self.gramian_gamma(),
            matrix,
        })
    }
}

/// Graph representation `M = { x + K x : x in D }` of a uniformly definite
/// subspace over `K+` (or `K-`), in canonical coordinates.
#[derive(Clone, Debug)]
pub struct AngularOperator {
    pub sign: Sign,
    /// `q x p` (positive case) or `p x q` (negative case), zero off its domain.
    pub matrix: CMatrix,
    pub norm: f64,
    /// Whether the domain is all of `K(sign)`.
    pub maximal: bool,
    pub gramian_gamma: f64,
}

impl AngularOperator {
    /// `(1 - gamma(G_M)) / (1 + gamma(G_M))`.
    ///
    /// On a maximal subspace the smallest Rayleigh quotient of the Gramian is
    /// `(1 - ||K||^2) / (1 + ||K||^2)`, so this ratio equals `||K||^2`.
    pub fn gamma_ratio(&self) -> f64 {
        (1.0 - self.gramian_gamma) / (1.0 + self.gramian_gamma)
    }

    /// `||K||` recovered from the Gramian alone, `sqrt(gamma_ratio)`.
    pub fn norm_from_gramian(&self) -> f64 {
        self.gamma_ratio().max(0.0).sqrt()
    }
}

/// Free-function forms matching the operation names.
pub fn classify(w: &Subspace) -> Classification {
    w.classify()
}

pub fn orthogonal_projection(w: &Subspace) -> Operator {
    w.orthogonal_projection()
}

pub fn j_projection(w: &Subspace) -> Result<Operator> {
    w.j_projection()
}

pub fn gramian(w: &Subspace) -> CMatrix {
    w.gramian()
}

pub fn angular_operator(m: &Subspace, sign: Sign) -> Result<AngularOperator> {
    m.angular_operator(sign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{real_matrix, real_vector};

    fn example_space() -> KreinSpace {
        KreinSpace::diagonal(&[1.0, 1.0, -1.0]).unwrap()
    }

    fn line(k: &KreinSpace, v: &[f64]) -> Subspace {
        Subspace::from_vector(k, &real_vector(v)).unwrap()
    }

    #[test]
    fn tilted_line_is_uniformly_positive_not_maximal() {
        let k = example_space();
        let c = line(&k, &[0.0, 1.0, 0.5]).classify();
        assert_eq!(c.kind, SubspaceKind::UniformlyPositive);
        assert!(c.regular);
        assert!(!c.maximal_definite);
    }

    #[test]
    fn neutral_line() {
        let k = KreinSpace::diagonal(&[1.0, -1.0]).unwrap();
        let w = line(&k, &[1.0, 1.0]);
        let c = w.classify();
        assert_eq!(c.kind, SubspaceKind::Neutral);
        assert!(!c.regular);
        assert!(matches!(w.j_projection(), Err(Error::DegenerateSubspace(_))));
    }

    #[test]
    fn example_plane_is_maximal_positive() {
        let k = example_space();
        let m = Subspace::new(&k, real_matrix(3, 2, &[1.0, 0.0, 0.0, 1.0, 0.5, 0.5])).unwrap();
        let c = m.classify();
        assert_eq!(c.kind, SubspaceKind::UniformlyPositive);
        assert!(c.maximal_definite);
        // Gramian eigenvalues: 1/3 along (1,1,1), 1 along (1,-1,0).
        assert!((c.extremal_gram_eigen.0 - 1.0 / 3.0).abs() < 1e-12);
        assert!((c.extremal_gram_eigen.1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn indefinite_and_nonuniform_kinds() {
        let k = example_space();
        assert_eq!(Subspace::full(&k).classify().kind, SubspaceKind::Indefinite);
        // span{e1, e1+e3}: Gramian has a zero and a positive eigenvalue.
        let w = Subspace::new(&k, real_matrix(3, 2, &[1.0, 1.0, 0.0, 1.0, 0.0, 1.0])).unwrap();
        let _ = w;
        let w = Subspace::new(&k, real_matrix(3, 2, &[0.0, 1.0, 1.0, 0.0, 0.0, 1.0])).unwrap();
        assert_eq!(w.classify().kind, SubspaceKind::PositiveNonUniform);
        let kn = KreinSpace::diagonal(&[-1.0, -1.0, 1.0]).unwrap();
        let w = Subspace::new(&kn, real_matrix(3, 2, &[0.0, 1.0, 1.0, 0.0, 0.0, 1.0])).unwrap();
        assert_eq!(w.classify().kind, SubspaceKind::NegativeNonUniform);
    }

    #[test]
    fn example_projections() {
        let k = example_space();
        let w = line(&k, &[0.0, 1.0, 0.5]);
        let x = real_vector(&[1.0, 1.0, 1.0]);
        let p = w.orthogonal_projection().apply(&x).unwrap();
        let q = w.j_projection().unwrap().apply(&x).unwrap();
        assert!((p - real_vector(&[0.0, 1.2, 0.6])).norm() < 1e-12);
        assert!((q - real_vector(&[0.0, 2.0 / 3.0, 1.0 / 3.0])).norm() < 1e-12);
    }

    #[test]
    fn hilbert_projections_coincide() {
        let k = KreinSpace::hilbert(3);
        let w = Subspace::new(&k, real_matrix(3, 2, &[1.0, 0.0, 2.0, 1.0, 0.0, 3.0])).unwrap();
        let d = w.orthogonal_projection().matrix() - w.j_projection().unwrap().matrix();
        assert!(d.norm() < 1e-12);
        assert!((w.gramian() - linalg::identity(2)).norm() < 1e-12);
        assert!((Subspace::full(&k).orthogonal_projection().matrix() - linalg::identity(3)).norm() < 1e-12);
    }

    #[test]
    fn gramian_of_tilted_line() {
        let k = example_space();
        let g = line(&k, &[0.0, 1.0, 0.5]).gramian();
        assert_eq!(g.shape(), (1, 1));
        assert!((g[(0, 0)].re - 0.6).abs() < 1e-14);
    }

    #[test]
    fn rank_deficient_basis_rejected() {
        let k = example_space();
        let b = real_matrix(3, 2, &[1.0, 2.0, 0.0, 0.0, 1.0, 2.0]);
        assert!(matches!(Subspace::new(&k, b.clone()), Err(Error::Validation(_))));
        assert_eq!(Subspace::span(&k, &b).unwrap().dim(), 1);
    }

    #[test]
    fn angular_operator_of_canonical_part_is_zero() {
        let k = example_space();
        let kplus = Subspace::new(&k, real_matrix(3, 2, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0])).unwrap();
        let a = kplus.angular_operator(Sign::Positive).unwrap();
        assert!(a.norm < 1e-14);
        assert!((a.gramian_gamma - 1.0).abs() < 1e-14);
        assert!(a.gamma_ratio().abs() < 1e-14);
        assert!(a.maximal);
    }

    #[test]
    fn angular_operator_of_tilted_line() {
        let k = KreinSpace::diagonal(&[1.0, -1.0]).unwrap();
        let t = 0.4;
        let m = line(&k, &[1.0, t]);
        let a = m.angular_operator(Sign::Positive).unwrap();
        assert!((a.matrix[(0, 0)].re - t).abs() < 1e-12);
        assert!((a.norm - t).abs() < 1e-12);
        // gamma(G) = (1 - t^2) / (1 + t^2), hence the ratio is t^2.
        assert!((a.gamma_ratio() - t * t).abs() < 1e-12);
        assert!((a.norm_from_gramian() - t).abs() < 1e-12);
        assert!(matches!(
            m.angular_operator(Sign::Negative),
            Err(Error::Classification(_))
        ));
    }

    #[test]
    fn angular_operator_negative_side() {
        let k = KreinSpace::diagonal(&[1.0, -1.0, -1.0]).unwrap();
        let m = line(&k, &[0.3, 1.0, 0.0]);
        let a = m.angular_operator(Sign::Negative).unwrap();
        assert_eq!(a.matrix.shape(), (1, 2));
        assert!((a.norm - 0.3).abs() < 1e-12);
        assert!(!a.maximal);
    }
}
