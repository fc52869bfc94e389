//! Vector J-frames, canonical J-duals and the reciprocal-bounds checks.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fusion::{BoundPair, FrameBounds, WeightedFamily};
use crate::krein::{KreinSpace, Operator, Sign};
use crate::linalg::{self, CMatrix, CVector};
use crate::subspace::{Subspace, SubspaceKind};

/// Finite family of non-neutral vectors with signs `sigma_i = sign [f_i, f_i]`.
#[derive(Clone, Debug)]
pub struct VectorFrame {
    space: KreinSpace,
    vectors: Vec<CVector>,
    signs: Vec<Sign>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DualBoundsReport {
    pub original: FrameBounds,
    pub dual: FrameBounds,
    /// `(1/A-, 1/B-, 1/B+, 1/A+)` of the original.
    pub expected: FrameBounds,
    pub max_relative_deviation: f64,
    pub holds: bool,
    /// `||U+* J U-||` for orthonormal bases of `M+`, `M-`; zero exactly when
    /// `M- = M+^[perp]`.
    pub cross_gramian_norm: f64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct IdentityResidual {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    /// `max(|lhs|, |rhs|)`.
    pub scale: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FusionDualReport {
    pub dual_certified: bool,
    pub original: FrameBounds,
    pub dual: Option<FrameBounds>,
    pub expected: FrameBounds,
    pub max_relative_deviation: Option<f64>,
    pub holds: bool,
    pub cross_gramian_norm: f64,
    pub failure: Option<String>,
}

fn cross_gramian_norm(space: &KreinSpace, plus: Option<Subspace>, minus: Option<Subspace>) -> f64 {
    match (plus, minus) {
        (Some(p), Some(m)) => {
            linalg::spectral_norm(&(p.orthonormal_basis().adjoint() * space.j() * m.orthonormal_basis()))
        }
        _ => 0.0,
    }
}

impl VectorFrame {
    pub fn new(space: &KreinSpace, vectors: Vec<CVector>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::Validation("a frame needs at least one vector".into()));
        }
        let tau = space.tol().tau_def;
        let mut signs = Vec::with_capacity(vectors.len());
        for (index, f) in vectors.iter().enumerate() {
            space.check_vector(f)?;
            let q = space.quadratic(f)?;
            if q.abs() <= tau * f.norm_squared() || f.norm() == 0.0 {
                return Err(Error::MemberClassification {
                    index,
                    kind: SubspaceKind::Neutral,
                });
            }
            signs.push(if q > 0.0 { Sign::Positive } else { Sign::Negative });
        }
        Ok(Self {
            space: space.clone(),
            vectors,
            signs,
        })
    }

    pub fn space(&self) -> &KreinSpace {
        &self.space
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn partition(&self, sign: Sign) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.signs[i] == sign).collect()
    }

    /// `M(sign) = span{f_i : i in I(sign)}`.
    pub fn span(&self, sign: Sign) -> Option<Subspace> {
        let cols: Vec<CVector> = self
            .partition(sign)
            .into_iter()
            .map(|i| self.vectors[i].clone())
            .collect();
        if cols.is_empty() {
            return None;
        }
        Subspace::span(&self.space, &linalg::from_columns(&cols)).ok()
    }

    fn operator_over(&self, indices: impl IntoIterator<Item = usize>) -> CMatrix {
        let n = self.space.dim();
        let mut s = CMatrix::zeros(n, n);
        for i in indices {
            let f = &self.vectors[i];
            s += (f * f.adjoint()).scale(self.signs[i].value());
        }
        s * self.space.j()
    }

    /// `S f = sum sigma_i [f, f_i] f_i`.
    pub fn frame_operator(&self) -> Operator {
        Operator::new(&self.space, self.operator_over(0..self.len())).expect("ambient dimensions")
    }

    /// `S_{I1} f = sum_{i in I1} sigma_i [f, f_i] f_i`.
    pub fn partial_frame_operator(&self, subset: &[usize]) -> Result<Operator> {
        for &index in subset {
            if index >= self.len() {
                return Err(Error::Index { index, len: self.len() });
            }
        }
        let mut seen = vec![false; self.len()];
        for &i in subset {
            seen[i] = true;
        }
        Operator::new(&self.space, self.operator_over((0..self.len()).filter(|&i| seen[i])))
    }

    /// `M+` maximal uniformly positive and `M-` maximal uniformly negative.
    pub fn is_j_frame(&self) -> bool {
        [Sign::Positive, Sign::Negative].into_iter().all(|sign| {
            let required = self.space.signature_count(sign);
            match self.span(sign) {
                None => required == 0,
                Some(m) => m.classify().is_uniformly(sign) && m.dim() == required,
            }
        })
    }

    fn require_frame(&self) -> Result<()> {
        if self.is_j_frame() {
            Ok(())
        } else {
            Err(Error::NotAFrame)
        }
    }

    fn inverse_frame_operator(&self) -> Result<CMatrix> {
        let s = self.frame_operator();
        linalg::guarded_inverse(s.matrix(), 1.0 / self.space.tol().tau_def)
    }

    /// `{S^-1 f_i}`; each sign is recomputed and must equal `sigma_i`.
    pub fn canonical_dual(&self) -> Result<VectorFrame> {
        self.require_frame()?;
        let si = self.inverse_frame_operator()?;
        let duals: Vec<CVector> = self.vectors.iter().map(|f| &si * f).collect();
        let dual = VectorFrame::new(&self.space, duals).map_err(|e| match e {
            Error::MemberClassification { index, .. } => Error::DefinitenessTransport { index },
            other => other,
        })?;
        if let Some(index) = (0..self.len()).find(|&i| dual.signs[i] != self.signs[i]) {
            return Err(Error::DefinitenessTransport { index });
        }
        Ok(dual)
    }

    fn side_bounds(&self, sign: Sign) -> Result<Option<BoundPair>> {
        let Some(m) = self.span(sign) else {
            return Ok(None);
        };
        let u = m.orthonormal_basis();
        let ju = self.space.j() * u;
        let k = u.ncols();
        let mut num = CMatrix::zeros(k, k);
        for i in self.partition(sign) {
            let c = self.vectors[i].adjoint() * &ju;
            num += c.adjoint() * c;
        }
        let den = (u.adjoint() * &ju).scale(sign.value());
        let (vals, _) = linalg::hermitian_pencil(&num, &den)?;
        let (x, y) = (sign.value() * vals[0], sign.value() * vals[vals.len() - 1]);
        let (lo, hi) = (x.min(y), x.max(y));
        Ok(Some(match sign {
            Sign::Positive => BoundPair { a: lo, b: hi },
            Sign::Negative => BoundPair { a: hi, b: lo },
        }))
    }

    /// Extremes of `sum_{I(sign)} |[f, f_i]|^2 / [f, f]` over `M(sign)`.
    pub fn optimal_bounds(&self) -> Result<FrameBounds> {
        self.require_frame()?;
        Ok(FrameBounds {
            positive: self.side_bounds(Sign::Positive)?,
            negative: self.side_bounds(Sign::Negative)?,
        })
    }

    /// Signed Rayleigh quotient `sum_{I(sign)} |[f, f_i]|^2 / [f, f]`.
    pub fn frame_quotient(&self, sign: Sign, f: &CVector) -> Result<f64> {
        let jf = self.space.j() * f;
        let sum: f64 = self
            .partition(sign)
            .into_iter()
            .map(|i| self.vectors[i].dotc(&jf).norm_sqr())
            .sum();
        Ok(sum / self.space.quadratic(f)?)
    }

    pub fn dual_bounds_check(&self) -> Result<DualBoundsReport> {
        let original = self.optimal_bounds()?;
        let dual = self.canonical_dual()?.optimal_bounds()?;
        let expected = original.reciprocal();
        let max_relative_deviation = dual.max_relative_deviation(&expected);
        Ok(DualBoundsReport {
            original,
            dual,
            expected,
            max_relative_deviation,
            holds: max_relative_deviation <= self.space.tol().tau_num,
            cross_gramian_norm: cross_gramian_norm(&self.space, self.span(Sign::Positive), self.span(Sign::Negative)),
        })
    }

    /// Largest relative residual of `f = sum sigma_i [f, S^-1 f_i] f_i` and
    /// `f = sum sigma_i [f, f_i] S^-1 f_i`.
    pub fn reconstruction_residual(&self, f: &CVector) -> Result<f64> {
        self.space.check_vector(f)?;
        let dual = self.canonical_dual()?;
        let j = self.space.j();
        let jf = j * f;
        let mut a = CVector::zeros(f.len());
        let mut b = CVector::zeros(f.len());
        for i in 0..self.len() {
            let s = self.signs[i].value();
            let (fi, gi) = (&self.vectors[i], &dual.vectors[i]);
            a += fi * (gi.dotc(&jf) * s);
            b += gi * (fi.dotc(&jf) * s);
        }
        let scale = f.norm().max(f64::MIN_POSITIVE);
        Ok(((a - f).norm() / scale).max((b - f).norm() / scale))
    }

    /// Both sides of
    /// `sum_{I1} sigma_i |[f, f_i]|^2 - sum_I sigma_i |[S_{I1} f, S^-1 f_i]|^2
    ///  = sum_{I1^c} sigma_i |[f, f_i]|^2 - sum_I sigma_i |[S_{I1^c} f, S^-1 f_i]|^2`.
    pub fn fundamental_identity(&self, subset: &[usize], f: &CVector) -> Result<IdentityResidual> {
        self.require_frame()?;
        self.space.check_vector(f)?;
        let s1 = self.partial_frame_operator(subset)?;
        let complement: Vec<usize> = (0..self.len()).filter(|i| !subset.contains(i)).collect();
        let s2 = self.partial_frame_operator(&complement)?;
        let si = self.inverse_frame_operator()?;
        let duals: Vec<CVector> = self.vectors.iter().map(|v| &si * v).collect();
        let j = self.space.j();
        let prod = |x: &CVector, y: &CVector| y.dotc(&(j * x));
        let side = |idx: &[usize], s: &Operator| -> f64 {
            let direct: f64 = idx
                .iter()
                .map(|&i| self.signs[i].value() * prod(f, &self.vectors[i]).norm_sqr())
                .sum();
            let sf = s.matrix() * f;
            let correction: f64 = (0..self.len())
                .map(|i| self.signs[i].value() * prod(&sf, &duals[i]).norm_sqr())
                .sum();
            direct - correction
        };
        let lhs = side(subset, &s1);
        let rhs = side(&complement, &s2);
        Ok(IdentityResidual {
            lhs,
            rhs,
            residual: (lhs - rhs).abs(),
            scale: lhs.abs().max(rhs.abs()),
        })
    }
}

pub fn vframe_operator(f: &VectorFrame) -> Operator {
    f.frame_operator()
}

pub fn is_j_frame(f: &VectorFrame) -> bool {
    f.is_j_frame()
}

pub fn canonical_dual(f: &VectorFrame) -> Result<VectorFrame> {
    f.canonical_dual()
}

pub fn vframe_optimal_bounds(f: &VectorFrame) -> Result<FrameBounds> {
    f.optimal_bounds()
}

pub fn dual_bounds_check(f: &VectorFrame) -> Result<DualBoundsReport> {
    f.dual_bounds_check()
}

pub fn partial_frame_operator(f: &VectorFrame, subset: &[usize]) -> Result<Operator> {
    f.partial_frame_operator(subset)
}

pub fn fundamental_identity_residual(f: &VectorFrame, subset: &[usize], x: &CVector) -> Result<IdentityResidual> {
    f.fundamental_identity(subset, x)
}

/// The dual family `{(S^-1 W_i, v_i)}`, weights unchanged.
pub fn canonical_dual_family(family: &WeightedFamily) -> Result<WeightedFamily> {
    if !family.is_frame() {
        return Err(Error::NotAFrame);
    }
    let space = family.space();
    let si = linalg::guarded_inverse(family.frame_operator().total.matrix(), 1.0 / space.tol().tau_def)?;
    let si = Operator::new(space, si)?;
    let images = family
        .members()
        .iter()
        .map(|m| m.subspace.image(&si))
        .collect::<Result<Vec<_>>>()?;
    WeightedFamily::new(space, images, &family.weights())
}

/// Builds the dual family, certifies it and compares its optimal bounds
/// with the reciprocals of the original. A failure is reported, not raised.
pub fn fusion_dual_bounds_check(family: &WeightedFamily) -> Result<FusionDualReport> {
    let original = family.optimal_bounds()?;
    let expected = original.reciprocal();
    let cross = cross_gramian_norm(
        family.space(),
        family.range(Sign::Positive),
        family.range(Sign::Negative),
    );
    let tau = family.space().tol().tau_num;
    let failed = |msg: String| FusionDualReport {
        dual_certified: false,
        original,
        dual: None,
        expected,
        max_relative_deviation: None,
        holds: false,
        cross_gramian_norm: cross,
        failure: Some(msg),
    };
    let dual = match canonical_dual_family(family) {
        Ok(d) => d,
        Err(Error::SingularOperator { condition }) => return Err(Error::SingularOperator { condition }),
        Err(e) => return Ok(failed(e.to_string())),
    };
    let cert = dual.certify();
    if !cert.is_frame {
        return Ok(failed("dual family is not a J-fusion frame".into()));
    }
    let bounds = dual.optimal_bounds()?;
    let dev = bounds.max_relative_deviation(&expected);
    Ok(FusionDualReport {
        dual_certified: true,
        original,
        dual: Some(bounds),
        expected,
        max_relative_deviation: Some(dev),
        holds: dev <= tau,
        cross_gramian_norm: cross,
        failure: None,
    })
}
