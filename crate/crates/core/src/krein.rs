//! Krein spaces given by a fundamental symmetry, and operators on them.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, C64};
use crate::tolerance::Tolerances;

/// Sign class of a uniformly definite subspace or of a frame element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Positive => 1.0,
            Sign::Negative => -1.0,
        }
    }

    pub fn opposite(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Positive => "+",
            Sign::Negative => "-",
        })
    }
}

#[derive(Debug)]
struct SpaceInner {
    j: CMatrix,
    positive: CMatrix,
    negative: CMatrix,
    tol: Tolerances,
}

/// The coordinate space `C^n` with a fundamental symmetry `J`.
///
/// `J` may be any Hermitian involution; the canonical decomposition
/// `K = K+ [+] K-` is read off its eigenvectors. Cloning is cheap.
#[derive(Clone, Debug)]
pub struct KreinSpace {
    inner: Arc<SpaceInner>,
}

impl PartialEq for KreinSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || (self.inner.j == other.inner.j && self.inner.tol == other.inner.tol)
    }
}

impl KreinSpace {
    pub fn new(j: CMatrix) -> Result<Self> {
        Self::with_tolerances(j, Tolerances::default())
    }

    pub fn with_tolerances(j: CMatrix, tol: Tolerances) -> Result<Self> {
        let n = j.nrows();
        if n == 0 || j.ncols() != n {
            return Err(Error::Dimension(format!(
                "J must be a non-empty square matrix, got {}x{}",
                j.nrows(),
                j.ncols()
            )));
        }
        if !linalg::is_finite(&j) {
            return Err(Error::Validation("J has non-finite entries".into()));
        }
        let scale = (n as f64).sqrt();
        let herm = (&j - j.adjoint()).norm();
        if herm > tol.tau_sym * scale {
            return Err(Error::Validation(format!(
                "J is not Hermitian: ||J - J*|| = {herm:.3e}"
            )));
        }
        let inv = (&j * &j - linalg::identity(n)).norm();
        if inv > tol.tau_sym * scale {
            return Err(Error::Validation(format!(
                "J is not involutive: ||J^2 - I|| = {inv:.3e}"
            )));
        }
        let (values, vectors) = linalg::hermitian_eigen(&j);
        let pos: Vec<usize> = (0..n).filter(|&i| values[i] > 0.0).collect();
        let neg: Vec<usize> = (0..n).filter(|&i| values[i] < 0.0).collect();
        let pick = |idx: &[usize]| CMatrix::from_fn(n, idx.len(), |r, k| vectors[(r, idx[k])]);
        Ok(Self {
            inner: Arc::new(SpaceInner {
                positive: pick(&pos),
                negative: pick(&neg),
                j,
                tol,
            }),
        })
    }

    /// `J = diag(signs)`.
    pub fn diagonal(signs: &[f64]) -> Result<Self> {
        Self::new(linalg::diagonal(signs))
    }

    /// The Hilbert space `C^n` (`J = I`).
    pub fn hilbert(n: usize) -> Self {
        Self::new(linalg::identity(n)).expect("identity is a fundamental symmetry")
    }

    pub fn with_tol(&self, tol: Tolerances) -> Result<Self> {
        Self::with_tolerances(self.inner.j.clone(), tol)
    }

    pub fn dim(&self) -> usize {
        self.inner.j.nrows()
    }

    pub fn j(&self) -> &CMatrix {
        &self.inner.j
    }

    pub fn tol(&self) -> &Tolerances {
        &self.inner.tol
    }

    /// `(p, q)`: multiplicities of the eigenvalues `+1` and `-1` of `J`.
    pub fn signature(&self) -> (usize, usize) {
        (self.inner.positive.ncols(), self.inner.negative.ncols())
    }

    pub fn signature_count(&self, sign: Sign) -> usize {
        match sign {
            Sign::Positive => self.inner.positive.ncols(),
            Sign::Negative => self.inner.negative.ncols(),
        }
    }

    /// Orthonormal basis of `K+` (`Sign::Positive`) or `K-`.
    pub fn canonical_basis(&self, sign: Sign) -> &CMatrix {
        match sign {
            Sign::Positive => &self.inner.positive,
            Sign::Negative => &self.inner.negative,
        }
    }

    pub fn check_vector(&self, x: &CVector) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::Dimension(format!(
                "vector of length {} in a space of dimension {}",
                x.len(),
                self.dim()
            )));
        }
        Ok(())
    }

    pub fn check_matrix(&self, m: &CMatrix) -> Result<()> {
        if m.nrows() != self.dim() {
            return Err(Error::Dimension(format!(
                "matrix with {} rows in a space of dimension {}",
                m.nrows(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// `[x, y] = <Jx, y>`, linear in `x` and conjugate-linear in `y`.
    pub fn inner(&self, x: &CVector, y: &CVector) -> Result<C64> {
        self.check_vector(x)?;
        self.check_vector(y)?;
        Ok(y.dotc(&(self.j() * x)))
    }

    /// `[x, x]`, which is always real.
    pub fn quadratic(&self, x: &CVector) -> Result<f64> {
        Ok(self.inner(x, x)?.re)
    }

    /// `||x||_J = [Jx, x]^(1/2)`; coincides with the Euclidean norm.
    pub fn j_norm(&self, x: &CVector) -> Result<f64> {
        let jx = self.j() * x;
        Ok(self.inner(&jx, x)?.re.max(0.0).sqrt())
    }

    /// Matrix of the indefinite form restricted to the column span of `b`:
    /// `b* J b`.
    pub fn form_matrix(&self, b: &CMatrix) -> CMatrix {
        b.adjoint() * self.j() * b
    }
}

/// A linear operator on a Krein space.
#[derive(Clone, Debug)]
pub struct Operator {
    space: KreinSpace,
    matrix: CMatrix,
}

impl Operator {
    pub fn new(space: &KreinSpace, matrix: CMatrix) -> Result<Self> {
        let n = space.dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::Dimension(format!(
                "operator is {}x{} on a space of dimension {n}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if !linalg::is_finite(&matrix) {
            return Err(Error::Validation("operator has non-finite entries".into()));
        }
        Ok(Self {
            space: space.clone(),
            matrix,
        })
    }

    pub fn identity(space: &KreinSpace) -> Self {
        Self {
            space: space.clone(),
            matrix: linalg::identity(space.dim()),
        }
    }

    pub fn space(&self) -> &KreinSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn apply(&self, x: &CVector) -> Result<CVector> {
        self.space.check_vector(x)?;
        Ok(&self.matrix * x)
    }

    /// The J-adjoint `T# = J T* J`, characterised by `[Tx, y] = [x, T# y]`.
    pub fn j_adjoint(&self) -> Operator {
        let j = self.space.j();
        Operator {
            space: self.space.clone(),
            matrix: j * self.matrix.adjoint() * j,
        }
    }

    pub fn compose(&self, other: &Operator) -> Operator {
        Operator {
            space: self.space.clone(),
            matrix: &self.matrix * &other.matrix,
        }
    }

    pub fn scale(&self, factor: C64) -> Operator {
        Operator {
            space: self.space.clone(),
            matrix: self.matrix.map(|z| z * factor),
        }
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.matrix, self.space.tol().tau_rank)
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.space.dim()
    }
}

/// Free-function form of [`KreinSpace::inner`].
pub fn indefinite_product(space: &KreinSpace, x: &CVector, y: &CVector) -> Result<C64> {
    space.inner(x, y)
}

/// Free-function form of [`Operator::j_adjoint`].
pub fn j_adjoint(t: &Operator) -> Operator {
    t.j_adjoint()
}
