//! Operators acting on J-fusion frames: preservation predicates, the
//! projection-commutation lemma and the sufficient/necessary theorems.
//!
//! The preservation predicates quantify over every subspace of a class and
//! are checked by sampling. A `HoldsOnSamples` verdict is evidence only,
//! unless the operator is certified a scalar multiple of a J-isometry, in
//! which case `[Tx, Ty] = c [x, y]` makes all three predicates hold exactly.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fusion::{FrameCertificate, WeightedFamily};
use crate::krein::{KreinSpace, Operator, Sign};
use crate::linalg::{self, CVector};
use crate::random;
use crate::subspace::{Classification, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    HoldsOnSamples,
    Counterexample,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Epistemic {
    /// Every tested subspace passed; the universal claim is not proved.
    SampledEvidence,
    /// A witness refutes the predicate.
    Refuted,
    /// The operator is a scalar multiple of a J-isometry.
    ExactCertificate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Predicate {
    DefinitenessWithSign,
    Maximality,
    Regularity,
}

#[derive(Clone, Debug)]
pub struct Counterexample {
    pub subspace: Subspace,
    /// `None` when `T` annihilates the subspace.
    pub image: Option<Subspace>,
    pub image_classification: Option<Classification>,
    /// Unit vector of the image violating the predicate.
    pub witness: Option<CVector>,
    pub reason: String,
}

/// For a line, the image of the supplied basis vector (exact when the
/// inputs are); otherwise the extremal Gramian eigenvector.
fn witness_vector(predicate: Predicate, t: &Operator, v: &Subspace, image: &Subspace) -> CVector {
    if image.dim() == 1 {
        return linalg::normalized(&(t.matrix() * v.basis().column(0)));
    }
    match predicate {
        Predicate::Regularity => {
            let (vals, vecs) = linalg::hermitian_eigen(&image.gramian());
            let k = (0..vals.len())
                .min_by(|&a, &b| vals[a].abs().total_cmp(&vals[b].abs()))
                .unwrap_or(0);
            linalg::normalized(&(image.orthonormal_basis() * vecs.column(k)))
        }
        _ => {
            let sign = v.classify().kind.uniform_sign().unwrap_or(Sign::Positive);
            image.extremal_vector(sign.opposite())
        }
    }
}

#[derive(Clone, Debug)]
pub struct PredicateReport {
    pub predicate: Predicate,
    pub verdict: Verdict,
    pub epistemic: Epistemic,
    pub samples_tested: usize,
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug)]
pub struct PreservationReport {
    pub definiteness_with_sign: PredicateReport,
    pub maximality: PredicateReport,
    pub regularity: PredicateReport,
    /// `c` when `T# T = c I` with `c > 0`.
    pub isometry_multiple: Option<f64>,
}

impl PreservationReport {
    pub fn all_hold(&self) -> bool {
        [&self.definiteness_with_sign, &self.maximality, &self.regularity]
            .iter()
            .all(|r| r.verdict == Verdict::HoldsOnSamples)
    }

    pub fn first_counterexample(&self) -> Option<&Counterexample> {
        [&self.definiteness_with_sign, &self.maximality, &self.regularity]
            .into_iter()
            .find_map(|r| r.counterexample.as_ref())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SampleConfig {
    pub n_random: usize,
    pub seed: u64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self { n_random: 200, seed: 0 }
    }
}

/// Whether `V` belongs to the predicate's domain.
fn in_domain(predicate: Predicate, cls: &Classification) -> bool {
    match predicate {
        Predicate::DefinitenessWithSign => cls.kind.uniform_sign().is_some(),
        Predicate::Maximality => cls.kind.uniform_sign().is_some() && cls.maximal_definite,
        Predicate::Regularity => cls.regular,
    }
}

/// `Ok(())` when `T(V)` satisfies the predicate, otherwise the reason.
fn image_check(predicate: Predicate, t: &Operator, v: &Subspace) -> std::result::Result<(), Box<Counterexample>> {
    let cls = v.classify();
    let fail = |image: Option<Subspace>, reason: String| {
        let image_classification = image.as_ref().map(|w| w.classify());
        let witness = image.as_ref().map(|w| witness_vector(predicate, t, v, w));
        Box::new(Counterexample {
            subspace: v.clone(),
            image,
            image_classification,
            witness,
            reason,
        })
    };
    let Ok(image) = v.image(t) else {
        return match predicate {
            // {0} is trivially regular.
            Predicate::Regularity => Ok(()),
            _ => Err(fail(None, "T annihilates the subspace".into())),
        };
    };
    let ic = image.classify();
    match predicate {
        Predicate::DefinitenessWithSign => {
            let sign = cls.kind.uniform_sign().expect("domain checked");
            if ic.is_uniformly(sign) {
                Ok(())
            } else {
                let reason = format!("image is {:?}, expected uniformly {sign}", ic.kind);
                Err(fail(Some(image), reason))
            }
        }
        Predicate::Maximality => {
            if ic.kind.uniform_sign().is_some() && ic.maximal_definite {
                Ok(())
            } else {
                let reason = format!("image is {:?} of dimension {}", ic.kind, image.dim());
                Err(fail(Some(image), reason))
            }
        }
        Predicate::Regularity => {
            if ic.regular {
                Ok(())
            } else {
                let reason = format!("image is {:?} and not regular", ic.kind);
                Err(fail(Some(image), reason))
            }
        }
    }
}

fn random_test_subspace(predicate: Predicate, space: &KreinSpace, seed: u64, index: u64) -> Subspace {
    let mut rng = random::draw_rng(seed, index);
    let (p, q) = space.signature();
    let pick_sign = |rng: &mut rand_chacha::ChaCha8Rng| match (p, q) {
        (_, 0) => Sign::Positive,
        (0, _) => Sign::Negative,
        _ if rand::Rng::random::<bool>(rng) => Sign::Positive,
        _ => Sign::Negative,
    };
    match predicate {
        Predicate::DefinitenessWithSign => random::random_uniformly_definite(&mut rng, space),
        Predicate::Maximality => {
            let sign = pick_sign(&mut rng);
            random::random_maximal(&mut rng, space, sign, 0.8)
        }
        Predicate::Regularity => loop {
            let dim = rand::Rng::random_range(&mut rng, 1..=space.dim());
            let w = random::random_subspace(&mut rng, space, dim);
            if w.classify().regular {
                break w;
            }
        },
    }
}

fn check_predicate(
    predicate: Predicate,
    t: &Operator,
    supplied: &[Subspace],
    cfg: SampleConfig,
    exact: bool,
) -> PredicateReport {
    let space = t.space();
    let offset = match predicate {
        Predicate::DefinitenessWithSign => 0u64,
        Predicate::Maximality => 1 << 32,
        Predicate::Regularity => 2 << 32,
    };
    let mut tested = 0;
    let supplied_iter = supplied.iter().filter(|v| in_domain(predicate, &v.classify())).cloned();
    let random_iter = (0..cfg.n_random as u64).map(|i| random_test_subspace(predicate, space, cfg.seed, offset + i));
    for v in supplied_iter.chain(random_iter) {
        tested += 1;
        if let Err(cx) = image_check(predicate, t, &v) {
            return PredicateReport {
                predicate,
                verdict: Verdict::Counterexample,
                epistemic: Epistemic::Refuted,
                samples_tested: tested,
                counterexample: Some(*cx),
            };
        }
    }
    PredicateReport {
        predicate,
        verdict: Verdict::HoldsOnSamples,
        epistemic: if exact {
            Epistemic::ExactCertificate
        } else {
            Epistemic::SampledEvidence
        },
        samples_tested: tested,
        counterexample: None,
    }
}

pub fn preserves_definiteness_with_sign(t: &Operator, subspaces: &[Subspace], cfg: SampleConfig) -> PredicateReport {
    let exact = is_j_isometry_multiple(t).0;
    check_predicate(Predicate::DefinitenessWithSign, t, subspaces, cfg, exact)
}

/// Maximal uniformly definite subspaces of either sign must map to maximal
/// uniformly definite subspaces (of either sign).
pub fn preserves_maximality(t: &Operator, subspaces: &[Subspace], cfg: SampleConfig) -> PredicateReport {
    let exact = is_j_isometry_multiple(t).0 && t.rank() == t.space().dim();
    check_predicate(Predicate::Maximality, t, subspaces, cfg, exact)
}

pub fn preserves_regularity(t: &Operator, subspaces: &[Subspace], cfg: SampleConfig) -> PredicateReport {
    let exact = is_j_isometry_multiple(t).0;
    check_predicate(Predicate::Regularity, t, subspaces, cfg, exact)
}

/// Runs the three predicates over the supplied subspaces and `cfg.n_random`
/// seeded samples each.
pub fn preservation_report(t: &Operator, subspaces: &[Subspace], cfg: SampleConfig) -> PreservationReport {
    let (iso, c) = is_j_isometry_multiple(t);
    PreservationReport {
        definiteness_with_sign: check_predicate(Predicate::DefinitenessWithSign, t, subspaces, cfg, iso),
        maximality: check_predicate(Predicate::Maximality, t, subspaces, cfg, iso),
        regularity: check_predicate(Predicate::Regularity, t, subspaces, cfg, iso),
        isometry_multiple: iso.then_some(c),
    }
}

/// `(true, c)` when `T# T = c I` with `c > 0` within `tau_num`; `c` is
/// `Re tr(T# T) / n` either way.
pub fn is_j_isometry_multiple(t: &Operator) -> (bool, f64) {
    let space = t.space();
    let m = t.j_adjoint().compose(t).into_matrix();
    let n = space.dim() as f64;
    let c = m.trace().re / n;
    let target = linalg::identity(space.dim()).scale(c);
    let residual = (&m - &target).norm() / c.abs().max(1.0);
    let holds = c > space.tol().tau_def && residual <= space.tol().tau_num;
    (holds, c)
}

#[derive(Clone, Debug)]
pub struct TransformOutcome {
    pub family: WeightedFamily,
    pub certificate: FrameCertificate,
    /// The three predicates hold on `{W_i} U {M+, M-}`.
    pub predicates_hold_on_frame: bool,
    /// Predicates holding implies a positive certificate.
    pub implication_ok: bool,
}

/// `{(T(W_i), v_i)}`, re-classified and certified.
pub fn transform_family(t: &Operator, family: &WeightedFamily) -> Result<TransformOutcome> {
    let space = family.space();
    if t.space() != space {
        return Err(Error::Dimension("operator and family live in different spaces".into()));
    }
    let rank = t.rank();
    if rank < space.dim() {
        return Err(Error::NotSurjective { rank, dim: space.dim() });
    }
    if !family.is_frame() {
        return Err(Error::NotAFrame);
    }
    let images = family
        .members()
        .iter()
        .map(|m| m.subspace.image(t))
        .collect::<Result<Vec<_>>>()?;
    let image_family = WeightedFamily::new(space, images, &family.weights())?;
    let certificate = image_family.certify();

    let mut relevant = family.subspaces();
    relevant.extend(family.range(Sign::Positive));
    relevant.extend(family.range(Sign::Negative));
    let predicates_hold_on_frame = relevant.iter().all(|v| {
        let cls = v.classify();
        [
            Predicate::DefinitenessWithSign,
            Predicate::Maximality,
            Predicate::Regularity,
        ]
        .into_iter()
        .filter(|&p| in_domain(p, &cls))
        .all(|p| image_check(p, t, v).is_ok())
    });
    let implication_ok = !predicates_hold_on_frame || certificate.is_frame;
    Ok(TransformOutcome {
        family: image_family,
        certificate,
        predicates_hold_on_frame,
        implication_ok,
    })
}

/// `||Q_V T# - Q_V T# Q_{T(V)}||` (spectral norm).
pub fn projection_commutation_check(t: &Operator, v: &Subspace) -> Result<f64> {
    let qv = v.j_projection()?;
    let image = v
        .image(t)
        .map_err(|_| Error::DegenerateSubspace("T annihilates V".into()))?;
    let qtv = image.j_projection()?;
    let lhs = qv.compose(&t.j_adjoint());
    let rhs = lhs.compose(&qtv);
    Ok(linalg::spectral_norm(&(lhs.matrix() - rhs.matrix())))
}

#[derive(Clone, Debug, Serialize)]
pub struct NecessaryReport {
    /// The image signs reproduce the original partition, so `I0 = I`.
    pub partition_preserved: bool,
    pub positive_dim: usize,
    pub negative_dim: usize,
    pub positive_maximal_uniform: bool,
    pub negative_maximal_uniform: bool,
    pub direct_sum: bool,
    pub holds: bool,
}

/// With `F` and `{(T(W_i), v_i)}` both J-fusion frames, checks
/// `K = cl(sum_{I+} T(W_i)) (+) cl(sum_{I-} T(W_i))` with the two summands
/// maximal uniformly definite of opposite signs.
pub fn necessary_conditions_check(t: &Operator, family: &WeightedFamily) -> Result<NecessaryReport> {
    let outcome = match transform_family(t, family) {
        Ok(o) if o.certificate.is_frame => o,
        Ok(_) => {
            return Err(Error::HypothesisNotMet(
                "the image family is not a J-fusion frame".into(),
            ))
        }
        Err(e) => return Err(Error::HypothesisNotMet(e.to_string())),
    };
    let space = family.space();
    let partition_preserved = family
        .members()
        .iter()
        .zip(outcome.family.members())
        .all(|(a, b)| a.sign == b.sign);
    let side = |sign: Sign| -> (usize, bool, Option<Subspace>) {
        let parts: Vec<&Subspace> = family
            .members()
            .iter()
            .zip(outcome.family.members())
            .filter(|(a, _)| a.sign == sign)
            .map(|(_, b)| &b.subspace)
            .collect();
        if parts.is_empty() {
            return (0, space.signature_count(sign) == 0, None);
        }
        let m = Subspace::sum(space, parts).expect("non-zero members");
        let ok = m.classify().is_maximal_uniformly(sign);
        (m.dim(), ok, Some(m))
    };
    let (pd, pok, pm) = side(Sign::Positive);
    let (nd, nok, nm) = side(Sign::Negative);
    let blocks: Vec<&linalg::CMatrix> = pm.iter().chain(nm.iter()).map(|m| m.orthonormal_basis()).collect();
    let direct_sum = pd + nd == space.dim()
        && linalg::rank(&linalg::hstack(&blocks, space.dim()), space.tol().tau_rank) == space.dim();
    Ok(NecessaryReport {
        partition_preserved,
        positive_dim: pd,
        negative_dim: nd,
        positive_maximal_uniform: pok,
        negative_maximal_uniform: nok,
        direct_sum,
        holds: partition_preserved && pok && nok && direct_sum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::linalg::{real_matrix, real_vector};

    fn cfg() -> SampleConfig {
        SampleConfig { n_random: 30, seed: 0 }
    }

    #[test]
    fn identity_preserves_everything() {
        let k = random::random_fundamental_symmetry(&mut random::draw_rng(0, 0), 2, 2);
        let r = preservation_report(&Operator::identity(&k), &[], cfg());
        assert!(r.all_hold());
        assert!((r.isometry_multiple.unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(r.regularity.epistemic, Epistemic::ExactCertificate);
    }

    #[test]
    fn truncated_l2_neutral_image() {
        let (k, t) = catalog::l2_truncated(2).unwrap();
        let e1 = Subspace::from_vector(&k, &real_vector(&[1.0, 0.0])).unwrap();
        let r = preserves_definiteness_with_sign(&t, std::slice::from_ref(&e1), cfg());
        assert_eq!(r.verdict, Verdict::Counterexample);
        let v = r.counterexample.unwrap().witness.unwrap();
        assert_eq!(k.quadratic(&v).unwrap(), 0.0);
        let reg = preserves_regularity(&t, &[e1], cfg());
        assert_eq!(reg.verdict, Verdict::Counterexample);
        assert!(!is_j_isometry_multiple(&t).0);
    }

    #[test]
    fn isometry_multiples() {
        let k = KreinSpace::diagonal(&[1.0, -1.0, 1.0]).unwrap();
        let three = Operator::new(&k, linalg::identity(3).scale(3.0)).unwrap();
        let (ok, cst) = is_j_isometry_multiple(&three);
        assert!(ok && (cst - 9.0).abs() < 1e-12);
        let j = Operator::new(&k, k.j().clone()).unwrap();
        let (ok, cst) = is_j_isometry_multiple(&j);
        assert!(ok && (cst - 1.0).abs() < 1e-12);
    }

    #[test]
    fn singular_operator_breaks_maximality() {
        let k = KreinSpace::diagonal(&[1.0, 1.0, -1.0]).unwrap();
        let t = Operator::new(&k, real_matrix(3, 3, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0])).unwrap();
        let m = Subspace::new(&k, real_matrix(3, 2, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0])).unwrap();
        let r = preserves_maximality(&t, &[m], cfg());
        assert_eq!(r.verdict, Verdict::Counterexample);
    }

    #[test]
    fn commutation_identity_and_full_space() {
        let k = KreinSpace::diagonal(&[1.0, -1.0, 1.0]).unwrap();
        let v = Subspace::from_vector(&k, &real_vector(&[1.0, 0.2, 0.0])).unwrap();
        assert!(projection_commutation_check(&Operator::identity(&k), &v).unwrap() < 1e-14);
        let t = random::random_operator(&mut random::draw_rng(1, 0), &k);
        assert!(projection_commutation_check(&t, &Subspace::full(&k)).unwrap() < 1e-9);
    }

    #[test]
    fn transform_by_identity_and_scaled_unitary() {
        let mut rng = random::draw_rng(2, 0);
        let k = random::random_krein_space(&mut rng, 5);
        let f = random::random_fusion_frame(&mut rng, &k);
        let out = transform_family(&Operator::identity(&k), &f).unwrap();
        assert!(out.certificate.is_frame && out.predicates_hold_on_frame && out.implication_ok);
        let (t, _) = random::random_scaled_j_unitary(&mut rng, &k);
        let out = transform_family(&t, &f).unwrap();
        assert!(out.certificate.is_frame && out.implication_ok);
        let nec = necessary_conditions_check(&t, &f).unwrap();
        assert!(nec.holds, "{nec:?}");
    }

    #[test]
    fn transform_rejects_neutral_image() {
        let (k, t) = catalog::l2_truncated(4).unwrap();
        let f = catalog::axis_family(&k, &[1.0; 4]).unwrap();
        let err = transform_family(&t, &f).unwrap_err();
        assert!(matches!(err, Error::MemberClassification { index: 0, .. }), "{err:?}");
    }
}
