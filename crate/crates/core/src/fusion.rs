//! Weighted families of uniformly definite subspaces and J-fusion frames.
//!
//! Coefficient blocks use an orthonormal basis of each member, so the
//! direct-sum space `(sum W_i)_l2` is `C^K` with the Euclidean norm and
//! `J2 = diag(sigma_i I_{k_i})`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::krein::{KreinSpace, Operator, Sign};
use crate::linalg::{self, CMatrix, CVector};
use crate::modulus::reduced_min_modulus;
use crate::subspace::{Subspace, SubspaceKind};

#[derive(Clone, Debug)]
pub struct Member {
    pub subspace: Subspace,
    pub weight: f64,
    pub sign: Sign,
}

/// A finite family `{(W_i, v_i)}` with every `W_i` uniformly definite.
#[derive(Clone, Debug)]
pub struct WeightedFamily {
    space: KreinSpace,
    members: Vec<Member>,
}

/// Lower/upper constants of one side of the frame inequality.
///
/// Positive side: `0 < a <= b` (`A+`, `B+`). Negative side: `b <= a < 0`
/// (`B-`, `A-`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundPair {
    pub a: f64,
    pub b: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct FrameBounds {
    pub positive: Option<BoundPair>,
    pub negative: Option<BoundPair>,
}

impl FrameBounds {
    /// `(B-, A-, A+, B+)`; missing sides are NaN.
    pub fn as_array(&self) -> [f64; 4] {
        let (bm, am) = self.negative.map_or((f64::NAN, f64::NAN), |p| (p.b, p.a));
        let (ap, bp) = self.positive.map_or((f64::NAN, f64::NAN), |p| (p.a, p.b));
        [bm, am, ap, bp]
    }

    pub fn side(&self, sign: Sign) -> Option<BoundPair> {
        match sign {
            Sign::Positive => self.positive,
            Sign::Negative => self.negative,
        }
    }

    /// Bounds `(1/A-, 1/B-, 1/B+, 1/A+)` in the `(B-, A-, A+, B+)` layout.
    pub fn reciprocal(&self) -> FrameBounds {
        FrameBounds {
            positive: self.positive.map(|p| BoundPair {
                a: 1.0 / p.b,
                b: 1.0 / p.a,
            }),
            negative: self.negative.map(|p| BoundPair {
                a: 1.0 / p.b,
                b: 1.0 / p.a,
            }),
        }
    }

    /// `B- <= A- < 0 < A+ <= B+` on the sides that are present.
    pub fn is_ordered(&self) -> bool {
        self.positive.is_none_or(|p| 0.0 < p.a && p.a <= p.b) && self.negative.is_none_or(|p| p.b <= p.a && p.a < 0.0)
    }

    /// `B-e <= B- <= A- <= A-e < 0 < A+e <= A+ <= B+ <= B+e` with `self` the
    /// optimal bounds, each comparison allowing `rel_slack * max(1, |x|)`.
    pub fn sandwiched_by(&self, estimate: &FrameBounds, rel_slack: f64) -> bool {
        let le = |x: f64, y: f64| x <= y + rel_slack * x.abs().max(y.abs()).max(1.0);
        let pos = match (self.positive, estimate.positive) {
            (None, None) => true,
            (Some(o), Some(e)) => 0.0 < e.a && le(e.a, o.a) && le(o.a, o.b) && le(o.b, e.b),
            _ => false,
        };
        let neg = match (self.negative, estimate.negative) {
            (None, None) => true,
            (Some(o), Some(e)) => le(e.b, o.b) && le(o.b, o.a) && le(o.a, e.a) && e.a < 0.0,
            _ => false,
        };
        pos && neg
    }

    /// Largest relative deviation between matching constants; infinite if
    /// the sides present differ.
    pub fn max_relative_deviation(&self, other: &FrameBounds) -> f64 {
        let mut worst: f64 = 0.0;
        for sign in [Sign::Positive, Sign::Negative] {
            match (self.side(sign), other.side(sign)) {
                (None, None) => {}
                (Some(x), Some(y)) => {
                    for (u, v) in [(x.a, y.a), (x.b, y.b)] {
                        worst = worst.max((u - v).abs() / v.abs().max(f64::MIN_POSITIVE));
                    }
                }
                _ => return f64::INFINITY,
            }
        }
        worst
    }
}

/// Block structure of the coefficient space and its symmetry `J2`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientSpace {
    pub block_dims: Vec<usize>,
    pub signs: Vec<Sign>,
}

impl CoefficientSpace {
    pub fn total(&self) -> usize {
        self.block_dims.iter().sum()
    }

    pub fn block_range(&self, i: usize) -> std::ops::Range<usize> {
        let start: usize = self.block_dims[..i].iter().sum();
        start..start + self.block_dims[i]
    }

    pub fn j2(&self) -> CMatrix {
        let diag: Vec<f64> = self
            .block_dims
            .iter()
            .zip(&self.signs)
            .flat_map(|(&k, s)| std::iter::repeat_n(s.value(), k))
            .collect();
        linalg::diagonal(&diag)
    }

    /// Orthogonal projection `P+` or `P-` onto the blocks of one sign.
    pub fn sign_projection(&self, sign: Sign) -> CMatrix {
        let diag: Vec<f64> = self
            .block_dims
            .iter()
            .zip(&self.signs)
            .flat_map(|(&k, &s)| std::iter::repeat_n(if s == sign { 1.0 } else { 0.0 }, k))
            .collect();
        linalg::diagonal(&diag)
    }

    /// `[c, d]_J2 = d* J2 c`.
    pub fn inner(&self, c: &CVector, d: &CVector) -> linalg::C64 {
        d.dotc(&(self.j2() * c))
    }
}

#[derive(Clone, Debug)]
pub struct Synthesis {
    /// `n x K`; block `i` is `v_i U_i`.
    pub matrix: CMatrix,
    pub coefficients: CoefficientSpace,
}

impl Synthesis {
    /// `T+ = T P+` or `T- = T P-`.
    pub fn part(&self, sign: Sign) -> CMatrix {
        &self.matrix * self.coefficients.sign_projection(sign)
    }
}

#[derive(Clone, Debug)]
pub struct FrameOperator {
    /// `S = sum sigma_i v_i^2 pi_{W_i} J`.
    pub total: Operator,
    /// `S+ = sum_{I+} v_i^2 pi_{W_i} J`.
    pub positive: Operator,
    /// `S- = sum_{I-} v_i^2 pi_{W_i} J = -T- T-#`.
    pub negative: Operator,
}

#[derive(Clone, Debug)]
pub enum Witness {
    /// The range of one sign has the wrong dimension.
    DimensionDeficit { sign: Sign, dim: usize, required: usize },
    /// A unit vector in the range of `T(sign)` whose `[x, x]` violates the
    /// required sign (or is numerically zero).
    Vector {
        sign: Sign,
        vector: CVector,
        form_value: f64,
    },
}

#[derive(Clone, Debug)]
pub struct FrameCertificate {
    pub is_frame: bool,
    pub positive_range_dim: usize,
    pub negative_range_dim: usize,
    pub positive_maximal: bool,
    pub negative_maximal: bool,
    pub positive_uniform: bool,
    pub negative_uniform: bool,
    pub optimal_bounds: Option<FrameBounds>,
    pub estimate_bounds: Option<FrameBounds>,
    pub witnesses: Vec<Witness>,
}

/// Generalized eigen-data of the frame inequality on one side.
#[derive(Clone, Debug)]
pub struct SideSpectrum {
    pub sign: Sign,
    /// Quotients `sum v_i^2 [pi_{W_i} J f, f] / [f, f]`, ascending.
    pub values: Vec<f64>,
    /// Ambient eigenvectors (unit Euclidean norm), one per value.
    pub vectors: Vec<CVector>,
}

impl SideSpectrum {
    pub fn bounds(&self) -> BoundPair {
        let lo = self.values[0];
        let hi = *self.values.last().expect("non-empty spectrum");
        match self.sign {
            Sign::Positive => BoundPair { a: lo, b: hi },
            Sign::Negative => BoundPair { a: hi, b: lo },
        }
    }
}

impl WeightedFamily {
    /// Builds a family, deriving each sign from the member's classification.
    pub fn new(space: &KreinSpace, subspaces: Vec<Subspace>, weights: &[f64]) -> Result<Self> {
        if subspaces.is_empty() {
            return Err(Error::Validation("a family needs at least one member".into()));
        }
        if subspaces.len() != weights.len() {
            return Err(Error::Dimension(format!(
                "{} subspaces but {} weights",
                subspaces.len(),
                weights.len()
            )));
        }
        let mut members = Vec::with_capacity(subspaces.len());
        for (index, (subspace, &weight)) in subspaces.into_iter().zip(weights).enumerate() {
            if subspace.space() != space {
                return Err(Error::Dimension(format!("member {index} lives in another space")));
            }
            if !(weight > 0.0 && weight.is_finite()) {
                return Err(Error::Weight { index, weight });
            }
            let kind = subspace.classify().kind;
            let sign = kind.uniform_sign().ok_or(Error::MemberClassification { index, kind })?;
            members.push(Member { subspace, weight, sign });
        }
        Ok(Self {
            space: space.clone(),
            members,
        })
    }

    pub fn space(&self) -> &KreinSpace {
        &self.space
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.members.iter().map(|m| m.weight).collect()
    }

    pub fn subspaces(&self) -> Vec<Subspace> {
        self.members.iter().map(|m| m.subspace.clone()).collect()
    }

    /// Indices with the given sign (`I+` or `I-`).
    pub fn partition(&self, sign: Sign) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.members[i].sign == sign).collect()
    }

    pub fn coefficient_space(&self) -> CoefficientSpace {
        CoefficientSpace {
            block_dims: self.members.iter().map(|m| m.subspace.dim()).collect(),
            signs: self.members.iter().map(|m| m.sign).collect(),
        }
    }

    pub fn synthesis_operator(&self) -> Synthesis {
        let blocks: Vec<CMatrix> = self
            .members
            .iter()
            .map(|m| m.subspace.orthonormal_basis().scale(m.weight))
            .collect();
        let refs: Vec<&CMatrix> = blocks.iter().collect();
        Synthesis {
            matrix: linalg::hstack(&refs, self.space.dim()),
            coefficients: self.coefficient_space(),
        }
    }

    /// `T# = J2 T* J`; block `i` of `T# f` is `sigma_i v_i U_i* J f`, the
    /// coordinates of `sigma_i v_i pi_{W_i} J f`.
    pub fn analysis_operator(&self) -> CMatrix {
        let t = self.synthesis_operator();
        t.coefficients.j2() * t.matrix.adjoint() * self.space.j()
    }

    pub fn frame_operator(&self) -> FrameOperator {
        let n = self.space.dim();
        let j = self.space.j();
        let mut pos = CMatrix::zeros(n, n);
        let mut neg = CMatrix::zeros(n, n);
        for m in &self.members {
            let u = m.subspace.orthonormal_basis();
            let term = (u * u.adjoint() * j).scale(m.weight * m.weight);
            match m.sign {
                Sign::Positive => pos += term,
                Sign::Negative => neg += term,
            }
        }
        let op = |mat: CMatrix| Operator::new(&self.space, mat).expect("ambient dimensions");
        FrameOperator {
            total: op(&pos - &neg),
            positive: op(pos),
            negative: op(neg),
        }
    }

    /// `R(T+)` or `R(T-)`; `None` when the side has no members.
    pub fn range(&self, sign: Sign) -> Option<Subspace> {
        let parts: Vec<&Subspace> = self
            .members
            .iter()
            .filter(|m| m.sign == sign)
            .map(|m| &m.subspace)
            .collect();
        if parts.is_empty() {
            return None;
        }
        Some(Subspace::sum(&self.space, parts).expect("members are non-zero"))
    }

    /// Checks that `R(T+)` is maximal uniformly positive and `R(T-)` maximal
    /// uniformly negative, and fills in bounds when it is a frame.
    pub fn certify(&self) -> FrameCertificate {
        let mut witnesses = Vec::new();
        let mut side = |sign: Sign| -> (usize, bool, bool) {
            let required = self.space.signature_count(sign);
            match self.range(sign) {
                None => {
                    if required > 0 {
                        witnesses.push(Witness::DimensionDeficit { sign, dim: 0, required });
                    }
                    (0, required == 0, required == 0)
                }
                Some(r) => {
                    let cls = r.classify();
                    let uniform = cls.is_uniformly(sign);
                    if !uniform {
                        let vector = r.extremal_vector(sign.opposite());
                        let form_value = self.space.quadratic(&vector).expect("ambient vector");
                        witnesses.push(Witness::Vector {
                            sign,
                            vector,
                            form_value,
                        });
                    }
                    let maximal = r.dim() == required;
                    if !maximal {
                        witnesses.push(Witness::DimensionDeficit {
                            sign,
                            dim: r.dim(),
                            required,
                        });
                    }
                    (r.dim(), maximal, uniform)
                }
            }
        };
        let (pdim, pmax, puni) = side(Sign::Positive);
        let (ndim, nmax, nuni) = side(Sign::Negative);
        let is_frame = pmax && nmax && puni && nuni;
        let (optimal_bounds, estimate_bounds) = if is_frame {
            (self.compute_optimal_bounds().ok(), self.compute_estimate_bounds().ok())
        } else {
            (None, None)
        };
        FrameCertificate {
            is_frame,
            positive_range_dim: pdim,
            negative_range_dim: ndim,
            positive_maximal: pmax,
            negative_maximal: nmax,
            positive_uniform: puni,
            negative_uniform: nuni,
            optimal_bounds,
            estimate_bounds,
            witnesses,
        }
    }

    pub fn is_frame(&self) -> bool {
        self.certify().is_frame
    }

    fn require_frame(&self) -> Result<()> {
        if self.is_frame() {
            Ok(())
        } else {
            Err(Error::NotAFrame)
        }
    }

    /// Spectrum of the pencil `(sum_{I(sign)} v_i^2 U* J pi_{W_i} J U, sign U* J U)`
    /// on `M(sign)`; `None` when the side is empty.
    pub fn side_spectrum(&self, sign: Sign) -> Result<Option<SideSpectrum>> {
        let Some(m) = self.range(sign) else {
            return Ok(None);
        };
        let j = self.space.j();
        let u = m.orthonormal_basis();
        let ju = j * u;
        let k = u.ncols();
        let mut num = CMatrix::zeros(k, k);
        for mem in self.members.iter().filter(|mem| mem.sign == sign) {
            let w = mem.subspace.orthonormal_basis();
            let c = w.adjoint() * &ju;
            num += (c.adjoint() * c).scale(mem.weight * mem.weight);
        }
        let den = (u.adjoint() * &ju).scale(sign.value());
        let (values, vecs) = linalg::hermitian_pencil(&num, &den)?;
        let mut values: Vec<f64> = values.into_iter().map(|l| sign.value() * l).collect();
        let mut vectors: Vec<CVector> = (0..vecs.ncols())
            .map(|c| linalg::normalized(&(u * vecs.column(c))))
            .collect();
        if sign == Sign::Negative {
            values.reverse();
            vectors.reverse();
        }
        Ok(Some(SideSpectrum { sign, values, vectors }))
    }

    fn compute_optimal_bounds(&self) -> Result<FrameBounds> {
        Ok(FrameBounds {
            positive: self.side_spectrum(Sign::Positive)?.map(|s| s.bounds()),
            negative: self.side_spectrum(Sign::Negative)?.map(|s| s.bounds()),
        })
    }

    /// Optimal constants of the frame inequality on `M+` and `M-`.
    pub fn optimal_bounds(&self) -> Result<FrameBounds> {
        self.require_frame()?;
        self.compute_optimal_bounds()
    }

    fn compute_estimate_bounds(&self) -> Result<FrameBounds> {
        let tol = self.space.tol();
        let t = self.synthesis_operator();
        let side = |sign: Sign| -> Option<BoundPair> {
            let m = self.range(sign)?;
            let ts = t.part(sign);
            let gamma_t = reduced_min_modulus(&ts, tol.tau_rank);
            let norm_t = linalg::spectral_norm(&ts);
            let gamma_g = m.gramian_gamma();
            let a = gamma_t * gamma_t * gamma_g * gamma_g;
            let b = norm_t * norm_t / gamma_g;
            Some(BoundPair {
                a: sign.value() * a,
                b: sign.value() * b,
            })
        };
        Ok(FrameBounds {
            positive: side(Sign::Positive),
            negative: side(Sign::Negative),
        })
    }

    /// `A+ = gamma(T+)^2 gamma(G_M+)^2`, `B+ = ||T+||^2 / gamma(G_M+)` and the
    /// negated analogues on `M-`. Never tighter than the optimal bounds.
    pub fn estimate_bounds(&self) -> Result<FrameBounds> {
        self.require_frame()?;
        self.compute_estimate_bounds()
    }

    /// `[pi_{W_i} J f, f]` for every member. Each term is real and
    /// non-negative; a violation beyond `tau_num` is reported as an error.
    pub fn frame_terms(&self, f: &CVector) -> Result<Vec<f64>> {
        self.space.check_vector(f)?;
        let tol = self.space.tol().tau_num;
        let jf = self.space.j() * f;
        let scale = f.norm_squared().max(1.0);
        self.members
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let pi = m.subspace.orthogonal_projection();
                let z = self.space.inner(&pi.apply(&jf)?, f)?;
                if z.im.abs() > tol * scale || z.re < -tol * scale {
                    return Err(Error::Numerical(format!(
                        "frame term {i} is {z}, expected a non-negative real"
                    )));
                }
                Ok(z.re.max(0.0))
            })
            .collect()
    }

    /// `sum_{I(sign)} v_i^2 [pi_{W_i} J f, f] / [f, f]`.
    pub fn frame_quotient(&self, sign: Sign, f: &CVector) -> Result<f64> {
        let terms = self.frame_terms(f)?;
        let sum: f64 = self
            .members
            .iter()
            .zip(terms)
            .filter(|(m, _)| m.sign == sign)
            .map(|(m, t)| m.weight * m.weight * t)
            .sum();
        Ok(sum / self.space.quadratic(f)?)
    }

    /// `{(J(W_i), v_i)}`.
    pub fn j_image_family(&self) -> Result<WeightedFamily> {
        self.require_frame()?;
        WeightedFamily::new(
            &self.space,
            self.members.iter().map(|m| m.subspace.j_image()).collect(),
            &self.weights(),
        )
    }

    pub fn converse_check(&self) -> Result<ConverseReport> {
        let members: Vec<(Subspace, f64)> = self.members.iter().map(|m| (m.subspace.clone(), m.weight)).collect();
        converse_check(&self.space, &members)
    }
}

/// Free-function form of [`WeightedFamily::new`].
pub fn build_family(space: &KreinSpace, subspaces: Vec<Subspace>, weights: &[f64]) -> Result<WeightedFamily> {
    WeightedFamily::new(space, subspaces, weights)
}

#[derive(Clone, Debug, Serialize)]
pub struct ConverseReport {
    pub positive_regular: bool,
    pub negative_regular: bool,
    pub positive_bounds: Option<BoundPair>,
    pub negative_bounds: Option<BoundPair>,
    pub positive_bounds_exist: bool,
    pub negative_bounds_exist: bool,
    /// Both hypotheses of the converse theorem hold.
    pub verdict: bool,
    /// Outcome of [`WeightedFamily::certify`] on the same members, when they
    /// form a valid family.
    pub certified: Option<bool>,
}

impl ConverseReport {
    /// A positive verdict must come with a positive certificate.
    pub fn consistent(&self) -> bool {
        !self.verdict || self.certified == Some(true)
    }
}

/// Checks the hypotheses of the converse theorem on a raw family whose
/// synthesis operator is onto: `M(sign)` regular and the frame inequality
/// satisfiable with constants of the correct sign.
///
/// Members with `[x, x] >= 0` throughout go to `I+`, those with `[x, x] <= 0`
/// to `I-`; indefinite members are rejected.
pub fn converse_check(space: &KreinSpace, members: &[(Subspace, f64)]) -> Result<ConverseReport> {
    if members.is_empty() {
        return Err(Error::Validation("a family needs at least one member".into()));
    }
    let tol = space.tol();
    let mut signs = Vec::with_capacity(members.len());
    for (index, (w, weight)) in members.iter().enumerate() {
        if !(*weight > 0.0 && weight.is_finite()) {
            return Err(Error::Weight { index, weight: *weight });
        }
        let kind = w.classify().kind;
        let sign = match kind {
            SubspaceKind::UniformlyPositive | SubspaceKind::PositiveNonUniform | SubspaceKind::Neutral => {
                Sign::Positive
            }
            SubspaceKind::UniformlyNegative | SubspaceKind::NegativeNonUniform => Sign::Negative,
            SubspaceKind::Indefinite => return Err(Error::MemberClassification { index, kind }),
        };
        signs.push(sign);
    }
    let blocks: Vec<CMatrix> = members.iter().map(|(w, v)| w.orthonormal_basis().scale(*v)).collect();
    let refs: Vec<&CMatrix> = blocks.iter().collect();
    let t = linalg::hstack(&refs, space.dim());
    let r = linalg::rank(&t, tol.tau_rank);
    if r < space.dim() {
        return Err(Error::NotSurjective {
            rank: r,
            dim: space.dim(),
        });
    }

    let j = space.j();
    let side = |sign: Sign| -> (bool, Option<BoundPair>) {
        let parts: Vec<&Subspace> = members
            .iter()
            .zip(&signs)
            .filter(|(_, &s)| s == sign)
            .map(|((w, _), _)| w)
            .collect();
        if parts.is_empty() {
            return (true, None);
        }
        let m = Subspace::sum(space, parts).expect("members are non-zero");
        let regular = m.classify().regular;
        let u = m.orthonormal_basis();
        let ju = j * u;
        let k = u.ncols();
        let mut num = CMatrix::zeros(k, k);
        for ((w, v), _) in members.iter().zip(&signs).filter(|(_, &s)| s == sign) {
            let c = w.orthonormal_basis().adjoint() * &ju;
            num += (c.adjoint() * c).scale(v * v);
        }
        let den = (u.adjoint() * &ju).scale(sign.value());
        let den_min = linalg::hermitian_eigenvalues(&den)[0];
        if den_min <= tol.tau_def {
            return (regular, None);
        }
        let bounds = linalg::hermitian_pencil(&num, &den).ok().and_then(|(vals, _)| {
            let lo = vals[0];
            let hi = *vals.last()?;
            (lo > 0.0).then(|| match sign {
                Sign::Positive => BoundPair { a: lo, b: hi },
                Sign::Negative => BoundPair { a: -lo, b: -hi },
            })
        });
        (regular, bounds)
    };
    let (positive_regular, positive_bounds) = side(Sign::Positive);
    let (negative_regular, negative_bounds) = side(Sign::Negative);
    let has = |sign: Sign| signs.contains(&sign);
    let positive_bounds_exist = !has(Sign::Positive) || positive_bounds.is_some();
    let negative_bounds_exist = !has(Sign::Negative) || negative_bounds.is_some();
    // An empty side cannot carry a non-trivial signature part.
    let coverage = (has(Sign::Positive) || space.signature_count(Sign::Positive) == 0)
        && (has(Sign::Negative) || space.signature_count(Sign::Negative) == 0);
    let verdict = positive_regular && negative_regular && positive_bounds_exist && negative_bounds_exist && coverage;
    let certified = WeightedFamily::new(
        space,
        members.iter().map(|(w, _)| w.clone()).collect(),
        &members.iter().map(|(_, v)| *v).collect::<Vec<_>>(),
    )
    .ok()
    .map(|f| f.is_frame());
    Ok(ConverseReport {
        positive_regular,
        negative_regular,
        positive_bounds,
        negative_bounds,
        positive_bounds_exist,
        negative_bounds_exist,
        verdict,
        certified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real_vector;

    fn line(k: &KreinSpace, v: &[f64]) -> Subspace {
        Subspace::from_vector(k, &real_vector(v)).unwrap()
    }

    fn axis_family(v1: f64, v2: f64) -> WeightedFamily {
        let k = KreinSpace::diagonal(&[1.0, -1.0]).unwrap();
        WeightedFamily::new(&k, vec![line(&k, &[1.0, 0.0]), line(&k, &[0.0, 1.0])], &[v1, v2]).unwrap()
    }

    fn example_family() -> WeightedFamily {
        let k = KreinSpace::diagonal(&[1.0, 1.0, -1.0]).unwrap();
        let members = vec![
            line(&k, &[0.0, 1.0, 0.5]),
            line(&k, &[1.0, 0.0, 0.5]),
            line(&k, &[0.0, 0.0, 1.0]),
        ];
        WeightedFamily::new(&k, members, &[1.0, 1.0, 1.0]).unwrap()
    }

    #[test]
    fn negative_side_is_ordered() {
        let k = KreinSpace::diagonal(&[1.0, -1.0, -1.0]).unwrap();
        let f = crate::catalog::axis_family(&k, &[1.0, 2.0, 3.0]).unwrap();
        let b = f.optimal_bounds().unwrap();
        assert!(b.is_ordered());
        let r = b.as_array();
        for (x, y) in r.iter().zip([-9.0, -4.0, 1.0, 1.0]) {
            assert!((x - y).abs() < 1e-12, "{r:?}");
        }
        let s = f.side_spectrum(Sign::Negative).unwrap().unwrap();
        assert!(s.values.windows(2).all(|w| w[0] <= w[1]));
        let q = f.frame_quotient(Sign::Negative, &s.vectors[0]).unwrap();
        assert!((q - s.values[0]).abs() < 1e-12);
    }

    #[test]
    fn partition_from_classification() {
        let f = axis_family(1.0, 1.0);
        assert_eq!(f.partition(Sign::Positive), vec![0]);
        assert_eq!(f.partition(Sign::Negative), vec![1]);
        let e = example_family();
        assert_eq!(e.partition(Sign::Positive), vec![0, 1]);
        assert_eq!(e.partition(Sign::Negative), vec![2]);
    }

    #[test]
    fn rejects_bad_members() {
        let k = KreinSpace::diagonal(&[1.0, -1.0]).unwrap();
        let err = WeightedFamily::new(&k, vec![line(&k, &[1.0, 1.0])], &[1.0]).unwrap_err();
        assert_eq!(
            err,
            Error::MemberClassification {
                index: 0,
                kind: SubspaceKind::Neutral
            }
        );
        let err = WeightedFamily::new(&k, vec![line(&k, &[1.0, 0.0])], &[0.0]).unwrap_err();
        assert!(matches!(err, Error::Weight { index: 0, .. }));
    }

    #[test]
    fn single_member_synthesis() {
        let k = KreinSpace::diagonal(&[1.0, -1.0]).unwrap();
        let f = WeightedFamily::new(&k, vec![line(&k, &[1.0, 0.0])], &[2.0]).unwrap();
        let t = f.synthesis_operator().matrix;
        assert_eq!(t.shape(), (2, 1));
        assert!((t[(0, 0)].norm() - 2.0).abs() < 1e-14 && t[(1, 0)].norm() < 1e-14);
    }

    #[test]
    fn example_ranges() {
        let f = example_family();
        let rp = f.range(Sign::Positive).unwrap();
        let rn = f.range(Sign::Negative).unwrap();
        assert_eq!(rp.dim(), 2);
        assert!(rp.contains(&real_vector(&[0.0, 1.0, 0.5])) && rp.contains(&real_vector(&[1.0, 0.0, 0.5])));
        assert!(rp.contains(&real_vector(&[1.0, 1.0, 1.0])));
        assert_eq!(rn.dim(), 1);
        assert!(rn.contains(&real_vector(&[0.0, 0.0, 1.0])));
    }

    #[test]
    fn analysis_block_signs() {
        let f = example_family();
        let f_vec = real_vector(&[0.0, 0.0, 1.0]);
        let a = f.analysis_operator() * &f_vec;
        // Block 3: sigma = -1, v = 1, U = e3, U* J e3 = -1 -> +1.
        assert!((a[2].re - 1.0).abs() < 1e-14);
        // Hilbert case: T# = T*.
        let k = KreinSpace::hilbert(2);
        let h = WeightedFamily::new(&k, vec![line(&k, &[1.0, 1.0])], &[3.0]).unwrap();
        let d = h.analysis_operator() - h.synthesis_operator().matrix.adjoint();
        assert!(d.norm() < 1e-14);
    }

    #[test]
    fn frame_operator_parseval_and_factorisation() {
        let k = KreinSpace::hilbert(2);
        let f = WeightedFamily::new(&k, vec![line(&k, &[1.0, 0.0]), line(&k, &[0.0, 1.0])], &[1.0, 1.0]).unwrap();
        assert!((f.frame_operator().total.matrix() - linalg::identity(2)).norm() < 1e-14);

        let e = example_family();
        let s = e.frame_operator();
        let t = e.synthesis_operator().matrix;
        assert!((s.total.matrix() - &t * e.analysis_operator()).norm() < 1e-12);
        assert!(s.total.matrix().determinant().norm() > 1e-6);
    }

    #[test]
    fn axis_frame_certificate_and_bounds() {
        let f = axis_family(2.0, 3.0);
        let cert = f.certify();
        assert!(cert.is_frame);
        let b = f.optimal_bounds().unwrap().as_array();
        for (x, y) in b.iter().zip([-9.0, -9.0, 4.0, 4.0]) {
            assert!((x - y).abs() < 1e-12, "{b:?}");
        }
        let e = f.estimate_bounds().unwrap().as_array();
        for (x, y) in e.iter().zip([-9.0, -9.0, 4.0, 4.0]) {
            assert!((x - y).abs() < 1e-12, "{e:?}");
        }
    }

    #[test]
    fn missing_negative_side_is_a_deficit() {
        let k = KreinSpace::diagonal(&[1.0, -1.0]).unwrap();
        let f = WeightedFamily::new(&k, vec![line(&k, &[1.0, 0.0])], &[1.0]).unwrap();
        let cert = f.certify();
        assert!(!cert.is_frame);
        assert_eq!(cert.negative_range_dim, 0);
        assert!(cert.witnesses.iter().any(|w| matches!(
            w,
            Witness::DimensionDeficit {
                sign: Sign::Negative,
                dim: 0,
                required: 1
            }
        )));
        assert_eq!(f.optimal_bounds(), Err(Error::NotAFrame));
    }

    #[test]
    fn parseval_hilbert_bounds() {
        let k = KreinSpace::hilbert(3);
        let f = WeightedFamily::new(&k, vec![Subspace::full(&k)], &[1.0]).unwrap();
        let b = f.optimal_bounds().unwrap();
        assert!(b.negative.is_none());
        let p = b.positive.unwrap();
        assert!((p.a - 1.0).abs() < 1e-12 && (p.b - 1.0).abs() < 1e-12);
        let e = f.estimate_bounds().unwrap().positive.unwrap();
        assert!((e.a - 1.0).abs() < 1e-12 && (e.b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn indefinite_sum_of_positive_lines_gets_vector_witness() {
        // Two uniformly positive lines whose span contains a negative vector.
        let k = KreinSpace::diagonal(&[1.0, -1.0, -1.0]).unwrap();
        let f = WeightedFamily::new(
            &k,
            vec![
                line(&k, &[1.0, 0.9, 0.0]),
                line(&k, &[1.0, -0.9, 0.0]),
                line(&k, &[0.0, 0.0, 1.0]),
            ],
            &[1.0, 1.0, 1.0],
        )
        .unwrap();
        let cert = f.certify();
        assert!(!cert.is_frame && !cert.positive_uniform);
        let w = cert
            .witnesses
            .iter()
            .find_map(|w| match w {
                Witness::Vector {
                    sign: Sign::Positive,
                    vector,
                    form_value,
                } => Some((vector, *form_value)),
                _ => None,
            })
            .unwrap();
        assert!(w.1 < 0.0);
        assert!((k.quadratic(w.0).unwrap() - w.1).abs() < 1e-12);
    }

    #[test]
    fn example_family_is_a_frame_with_ordered_bounds() {
        let f = example_family();
        let cert = f.certify();
        assert!(cert.is_frame);
        assert_eq!((cert.positive_range_dim, cert.negative_range_dim), (2, 1));
        assert!(cert.optimal_bounds.unwrap().is_ordered());
    }

    #[test]
    fn j_image_of_hilbert_family_is_itself() {
        let k = KreinSpace::hilbert(2);
        let f = WeightedFamily::new(&k, vec![line(&k, &[1.0, 2.0]), line(&k, &[0.0, 1.0])], &[1.0, 0.5]).unwrap();
        let g = f.j_image_family().unwrap();
        for (a, b) in f.members().iter().zip(g.members()) {
            let d = a.subspace.orthogonal_projection().matrix() - b.subspace.orthogonal_projection().matrix();
            assert!(d.norm() < 1e-14);
        }
    }

    #[test]
    fn converse_on_axis_frame_and_near_neutral_member() {
        let f = axis_family(1.0, 1.0);
        let r = f.converse_check().unwrap();
        assert!(r.verdict && r.consistent());

        let k = KreinSpace::diagonal(&[1.0, -1.0]).unwrap();
        let delta = 1e-10;
        let members = vec![(line(&k, &[1.0, 1.0 - delta]), 1.0), (line(&k, &[0.0, 1.0]), 1.0)];
        let r = converse_check(&k, &members).unwrap();
        assert!(!r.positive_regular);
        assert!(!r.verdict);

        let lone = vec![(line(&k, &[1.0, 0.0]), 1.0)];
        assert!(matches!(
            converse_check(&k, &lone),
            Err(Error::NotSurjective { rank: 1, dim: 2 })
        ));
    }

    #[test]
    fn frame_terms_non_negative_and_quotient() {
        let f = example_family();
        let m = f.range(Sign::Positive).unwrap();
        let x = m.orthonormal_basis().column(0).into_owned();
        let q = f.frame_quotient(Sign::Positive, &x).unwrap();
        let b = f.optimal_bounds().unwrap().positive.unwrap();
        assert!(q >= b.a - 1e-12 && q <= b.b + 1e-12);
        assert!(f.frame_terms(&x).unwrap().iter().all(|&t| t >= 0.0));
    }

    #[test]
    fn reciprocal_layout() {
        let b = FrameBounds {
            positive: Some(BoundPair { a: 4.0, b: 8.0 }),
            negative: Some(BoundPair { a: -2.0, b: -5.0 }),
        };
        let r = b.reciprocal().as_array();
        assert_eq!(r, [1.0 / -2.0, 1.0 / -5.0, 1.0 / 8.0, 1.0 / 4.0]);
        assert!(b.reciprocal().is_ordered());
    }
}
