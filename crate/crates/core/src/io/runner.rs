use serde_json::{json, Value};

use super::report::{certificate_witness_json, matrix_json, subspace_json, witness_json, Check, Report, TaskReport};
use super::schema::Problem;
use super::IoError;
use crate::duality::{fusion_dual_bounds_check, VectorFrame};
use crate::error::Error;
use crate::fusion::{FrameBounds, WeightedFamily};
use crate::krein::{Operator, Sign};
use crate::linalg::{self, CVector};
use crate::random;
use crate::subspace::{Classification, Subspace};
use crate::transforms::{self, PredicateReport, SampleConfig, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Classify,
    Certify,
    Bounds,
    Dual,
    Identity,
    Transform,
    Preserve,
    All,
}

impl std::str::FromStr for Command {
    type Err = IoError;

    fn from_str(s: &str) -> Result<Self, IoError> {
        <Command as clap::ValueEnum>::from_str(s, true).map_err(|_| IoError::Usage(format!("unknown command {s:?}")))
    }
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::Certify => "certify",
            Command::Bounds => "bounds",
            Command::Dual => "dual",
            Command::Identity => "identity",
            Command::Transform => "transform",
            Command::Preserve => "preserve",
            Command::All => "all",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub seed: u64,
    /// Random samples per sampling check.
    pub samples: usize,
    /// Index subsets `I1` for the fundamental identity (0-based).
    pub subsets: Vec<Vec<usize>>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            samples: 200,
            subsets: vec![vec![0]],
        }
    }
}

struct Ctx<'a> {
    problem: &'a Problem,
    opts: &'a RunOptions,
    stream: u64,
}

impl Ctx<'_> {
    /// A fresh generator per task, in dispatch order.
    fn rng(&mut self) -> rand_chacha::ChaCha8Rng {
        self.stream += 1;
        random::draw_rng(self.opts.seed, self.stream)
    }

    fn tol(&self) -> crate::Tolerances {
        *self.problem.space.tol()
    }
}

pub fn run(command: Command, problem: &Problem, opts: &RunOptions) -> Report {
    let mut ctx = Ctx {
        problem,
        opts,
        stream: 0,
    };
    let mut tasks = Vec::new();
    let commands: &[Command] = match command {
        Command::All => &[
            Command::Classify,
            Command::Certify,
            Command::Bounds,
            Command::Dual,
            Command::Identity,
            Command::Transform,
            Command::Preserve,
        ],
        _ => std::slice::from_ref(&command),
    };
    for &c in commands {
        match c {
            Command::Classify => tasks.extend(classify(&ctx)),
            Command::Certify => tasks.extend(problem.families.iter().map(|(n, f, _)| certify(&ctx, n, f))),
            Command::Bounds => {
                for (n, f, _) in &problem.families {
                    tasks.push(family_bounds(&mut ctx, n, f));
                }
                for (n, f) in &problem.vector_frames {
                    tasks.push(vframe_bounds(&mut ctx, n, f));
                }
            }
            Command::Dual => {
                for (n, f) in &problem.vector_frames {
                    tasks.push(vframe_dual(&mut ctx, n, f));
                }
                for (n, f, _) in &problem.families {
                    tasks.push(family_dual(&ctx, n, f));
                }
            }
            Command::Identity => {
                for (n, f) in &problem.vector_frames {
                    tasks.push(identity(&mut ctx, n, f));
                }
            }
            Command::Transform => {
                for (on, t) in &problem.operators {
                    for (fname, f, names) in &problem.families {
                        tasks.push(transform(&ctx, on, t, fname, f, names));
                    }
                }
            }
            Command::Preserve => {
                for (on, t) in &problem.operators {
                    tasks.push(preserve(&mut ctx, on, t));
                }
            }
            Command::All => unreachable!(),
        }
    }
    let passed = tasks.iter().all(|t| t.passed);
    Report {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: command.name().into(),
        seed: opts.seed,
        samples: opts.samples,
        tolerances: *problem.space.tol(),
        tasks,
        passed,
    }
}

fn classification_json(c: &Classification) -> Value {
    json!({
        "kind": format!("{:?}", c.kind),
        "regular": c.regular,
        "maximal_definite": c.maximal_definite,
        "gram_eigen_min": c.extremal_gram_eigen.0,
        "gram_eigen_max": c.extremal_gram_eigen.1,
    })
}

fn bounds_json(b: &FrameBounds) -> Value {
    let [bm, am, ap, bp] = b.as_array();
    json!({"B_minus": bm, "A_minus": am, "A_plus": ap, "B_plus": bp})
}

fn classify(ctx: &Ctx) -> Vec<TaskReport> {
    let mut out = Vec::new();
    for (name, f, names) in &ctx.problem.families {
        let mut task = TaskReport::new("classify", format!("family:{name}"));
        let members: Vec<Value> = f
            .members()
            .iter()
            .zip(names)
            .map(|(m, mn)| {
                json!({
                    "name": mn,
                    "dim": m.subspace.dim(),
                    "sign": m.sign,
                    "weight": m.weight,
                    "classification": classification_json(&m.subspace.classify()),
                })
            })
            .collect();
        task.set("members", Value::Array(members));
        for sign in [Sign::Positive, Sign::Negative] {
            let key = format!("range_{}", if sign == Sign::Positive { "positive" } else { "negative" });
            let v = f.range(sign).map_or(
                Value::Null,
                |m| json!({"dim": m.dim(), "classification": classification_json(&m.classify())}),
            );
            task.set(&key, v);
        }
        let all_uniform = f.members().iter().all(|m| m.subspace.classify().is_uniformly(m.sign));
        task.check(Check::flag("members_uniformly_definite", all_uniform));
        out.push(task);
    }
    for (name, vf) in &ctx.problem.vector_frames {
        let mut task = TaskReport::new("classify", format!("vector_frame:{name}"));
        let forms: Vec<Value> = vf
            .vectors()
            .iter()
            .zip(vf.signs())
            .map(|(v, s)| json!({"sign": s, "form_value": vf.space().quadratic(v).unwrap_or(f64::NAN)}))
            .collect();
        task.set("vectors", Value::Array(forms));
        for sign in [Sign::Positive, Sign::Negative] {
            let key = format!("span_{}", if sign == Sign::Positive { "positive" } else { "negative" });
            let v = vf.span(sign).map_or(
                Value::Null,
                |m| json!({"dim": m.dim(), "classification": classification_json(&m.classify())}),
            );
            task.set(&key, v);
        }
        task.check(Check::flag("no_neutral_vectors", true));
        out.push(task);
    }
    out
}

fn certify(ctx: &Ctx, name: &str, f: &WeightedFamily) -> TaskReport {
    let tol = ctx.tol();
    let mut task = TaskReport::new("certify", format!("family:{name}"));
    let cert = f.certify();
    task.set(
        "certificate",
        json!({
            "is_frame": cert.is_frame,
            "positive_range_dim": cert.positive_range_dim,
            "negative_range_dim": cert.negative_range_dim,
            "positive_maximal": cert.positive_maximal,
            "negative_maximal": cert.negative_maximal,
            "positive_uniform": cert.positive_uniform,
            "negative_uniform": cert.negative_uniform,
            "optimal_bounds": cert.optimal_bounds.as_ref().map(bounds_json),
            "estimate_bounds": cert.estimate_bounds.as_ref().map(bounds_json),
            "witnesses": cert.witnesses.iter().map(certificate_witness_json).collect::<Vec<_>>(),
        }),
    );
    task.check(Check::flag("is_frame", cert.is_frame));

    let s = f.frame_operator();
    let tt = f.synthesis_operator().matrix * f.analysis_operator();
    task.check(Check::below(
        "frame_operator_factorisation",
        linalg::relative_residual(&tt, s.total.matrix()),
        tol.tau_num,
    ));
    if !cert.is_frame {
        return task;
    }
    let (Some(opt), Some(est)) = (cert.optimal_bounds, cert.estimate_bounds) else {
        task.fail("bounds could not be computed");
        return task;
    };
    task.check(Check::flag("bounds_ordered", opt.is_ordered()));
    task.check(Check::flag("estimate_sandwich", opt.sandwiched_by(&est, tol.tau_num)));
    match f.j_image_family().and_then(|g| g.optimal_bounds()) {
        Ok(jb) => task.check(Check::below(
            "j_image_same_bounds",
            jb.max_relative_deviation(&opt),
            tol.tau_num,
        )),
        Err(e) => task.check(Check {
            name: format!("j_image_same_bounds ({e})"),
            passed: false,
            value: None,
            threshold: None,
        }),
    }
    match f.converse_check() {
        Ok(r) => {
            task.set("converse", serde_json::to_value(&r).unwrap_or(Value::Null));
            task.check(Check::flag("converse_consistent", r.consistent()));
        }
        Err(e) => task.fail(format!("converse check: {e}")),
    }
    task
}

fn sample_in<R: rand::Rng>(rng: &mut R, m: &Subspace) -> CVector {
    m.orthonormal_basis() * random::unit_vector(rng, m.dim())
}

fn quotient_violation(q: f64, a: f64, b: f64) -> f64 {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let scale = lo.abs().max(hi.abs()).max(1.0);
    ((lo - q).max(q - hi)).max(0.0) / scale
}

fn family_bounds(ctx: &mut Ctx, name: &str, f: &WeightedFamily) -> TaskReport {
    let tol = ctx.tol();
    let mut task = TaskReport::new("bounds", format!("family:{name}"));
    let (opt, est) = match (f.optimal_bounds(), f.estimate_bounds()) {
        (Ok(o), Ok(e)) => (o, e),
        (Err(e), _) | (_, Err(e)) => {
            task.fail(e);
            return task;
        }
    };
    task.set("optimal", bounds_json(&opt));
    task.set("estimate", bounds_json(&est));
    task.check(Check::flag("estimate_sandwich", opt.sandwiched_by(&est, tol.tau_num)));
    let mut rng = ctx.rng();
    let mut worst: f64 = 0.0;
    let mut extremal: f64 = 0.0;
    for sign in [Sign::Positive, Sign::Negative] {
        let (Some(m), Some(b)) = (f.range(sign), opt.side(sign)) else {
            continue;
        };
        for _ in 0..ctx.opts.samples {
            match f.frame_quotient(sign, &sample_in(&mut rng, &m)) {
                Ok(q) => worst = worst.max(quotient_violation(q, b.a, b.b)),
                Err(e) => {
                    task.fail(e);
                    return task;
                }
            }
        }
        if let Ok(Some(spec)) = f.side_spectrum(sign) {
            let first = f.frame_quotient(sign, &spec.vectors[0]).unwrap_or(f64::NAN);
            let last = f
                .frame_quotient(sign, spec.vectors.last().expect("non-empty"))
                .unwrap_or(f64::NAN);
            let (lo, hi) = (spec.values[0], *spec.values.last().expect("non-empty"));
            let scale = lo.abs().max(hi.abs()).max(1.0);
            extremal = extremal.max((first - lo).abs() / scale).max((last - hi).abs() / scale);
        }
    }
    task.check(Check::below("inequality_on_samples", worst, tol.tau_num));
    task.check(Check::below("extremal_vectors_attain_bounds", extremal, tol.tau_num));
    task
}

fn vframe_bounds(ctx: &mut Ctx, name: &str, f: &VectorFrame) -> TaskReport {
    let tol = ctx.tol();
    let mut task = TaskReport::new("bounds", format!("vector_frame:{name}"));
    task.check(Check::flag("is_j_frame", f.is_j_frame()));
    let opt = match f.optimal_bounds() {
        Ok(o) => o,
        Err(e) => {
            task.fail(e);
            return task;
        }
    };
    task.set("optimal", bounds_json(&opt));
    task.check(Check::flag("bounds_ordered", opt.is_ordered()));
    let mut rng = ctx.rng();
    let mut worst: f64 = 0.0;
    for sign in [Sign::Positive, Sign::Negative] {
        let (Some(m), Some(b)) = (f.span(sign), opt.side(sign)) else {
            continue;
        };
        for _ in 0..ctx.opts.samples {
            if let Ok(q) = f.frame_quotient(sign, &sample_in(&mut rng, &m)) {
                worst = worst.max(quotient_violation(q, b.a, b.b));
            }
        }
    }
    task.check(Check::below("inequality_on_samples", worst, tol.tau_num));
    task
}

fn vframe_dual(ctx: &mut Ctx, name: &str, f: &VectorFrame) -> TaskReport {
    let tol = ctx.tol();
    let mut task = TaskReport::new("dual", format!("vector_frame:{name}"));
    let dual = match f.canonical_dual() {
        Ok(d) => d,
        Err(e) => {
            task.fail(e);
            return task;
        }
    };
    task.check(Check::flag("definiteness_transport", true));
    task.set(
        "dual_vectors",
        Value::Array(dual.vectors().iter().map(super::vector_json).collect()),
    );
    let mut rng = ctx.rng();
    let mut worst: f64 = 0.0;
    for _ in 0..ctx.opts.samples.min(100) {
        let x = random::unit_vector(&mut rng, f.space().dim());
        match f.reconstruction_residual(&x) {
            Ok(r) => worst = worst.max(r),
            Err(e) => {
                task.fail(e);
                return task;
            }
        }
    }
    task.check(Check::below("reconstruction", worst, tol.tau_num));
    match f.dual_bounds_check() {
        Ok(r) => {
            let status = if r.holds { "holds" } else { "fails" };
            task.finding(
                "reciprocal_dual_bounds",
                status,
                "exact-computation",
                json!({
                    "original": bounds_json(&r.original),
                    "dual": bounds_json(&r.dual),
                    "expected": bounds_json(&r.expected),
                    "max_relative_deviation": r.max_relative_deviation,
                    "cross_gramian_norm": r.cross_gramian_norm,
                }),
            );
        }
        Err(e) => task.fail(e),
    }
    task
}

fn family_dual(ctx: &Ctx, name: &str, f: &WeightedFamily) -> TaskReport {
    let _ = ctx;
    let mut task = TaskReport::new("dual", format!("family:{name}"));
    match fusion_dual_bounds_check(f) {
        Ok(r) => {
            let status = match (r.dual_certified, r.holds) {
                (false, _) => "dual-not-a-frame",
                (true, true) => "holds",
                (true, false) => "fails",
            };
            task.finding(
                "fusion_dual_reciprocal_bounds",
                status,
                "assumed-dual-definition",
                json!({
                    "original": bounds_json(&r.original),
                    "dual": r.dual.as_ref().map(bounds_json),
                    "expected": bounds_json(&r.expected),
                    "max_relative_deviation": r.max_relative_deviation,
                    "cross_gramian_norm": r.cross_gramian_norm,
                    "failure": r.failure,
                }),
            );
        }
        Err(e) => task.fail(e),
    }
    task
}

fn identity(ctx: &mut Ctx, name: &str, f: &VectorFrame) -> TaskReport {
    let tol = ctx.tol();
    let mut task = TaskReport::new("identity", format!("vector_frame:{name}"));
    let mut rng = ctx.rng();
    let mut results = Vec::new();
    for subset in &ctx.opts.subsets {
        let mut worst: f64 = 0.0;
        for _ in 0..ctx.opts.samples.clamp(1, 20) {
            let x = random::unit_vector(&mut rng, f.space().dim());
            match f.fundamental_identity(subset, &x) {
                Ok(r) => worst = worst.max(r.residual / (1.0 + r.scale)),
                Err(e) => {
                    task.fail(format!("subset {subset:?}: {e}"));
                    return task;
                }
            }
        }
        results.push(json!({"subset": subset, "max_scaled_residual": worst}));
        task.check(Check::below(
            &format!("fundamental_identity{subset:?}"),
            worst,
            tol.tau_num,
        ));
    }
    task.set("subsets", Value::Array(results));
    task
}

fn transform(
    ctx: &Ctx,
    op_name: &str,
    t: &Operator,
    fam_name: &str,
    f: &WeightedFamily,
    names: &[String],
) -> TaskReport {
    let tol = ctx.tol();
    let mut task = TaskReport::new("transform", format!("operator:{op_name}/family:{fam_name}"));
    let (iso, c) = transforms::is_j_isometry_multiple(t);
    task.set("j_isometry_multiple", json!({"holds": iso, "c": c}));
    let outcome = match transforms::transform_family(t, f) {
        Ok(o) => o,
        Err(e) => {
            if let Error::MemberClassification { index, .. } = &e {
                if let Ok(img) = f.members()[*index].subspace.image(t) {
                    task.set(
                        "witness",
                        json!({"member": names[*index], "image_basis": subspace_json(&img),
                               "image_classification": classification_json(&img.classify())}),
                    );
                }
                task.fail(format!("member '{}': {e}", names[*index]));
            } else {
                task.fail(e);
            }
            return task;
        }
    };
    task.set("image_certified", json!(outcome.certificate.is_frame));
    task.set(
        "image_bounds",
        outcome
            .certificate
            .optimal_bounds
            .as_ref()
            .map_or(Value::Null, bounds_json),
    );
    task.set("predicates_hold_on_frame", json!(outcome.predicates_hold_on_frame));
    task.check(Check::flag("image_certified", outcome.certificate.is_frame));
    task.check(Check::flag("sufficient_theorem_implication", outcome.implication_ok));
    if outcome.certificate.is_frame {
        match transforms::necessary_conditions_check(t, f) {
            Ok(r) => {
                task.set("necessary", serde_json::to_value(&r).unwrap_or(Value::Null));
                task.check(Check::flag("necessary_decomposition", r.holds));
            }
            Err(e) => task.fail(e),
        }
    }
    let mut worst: f64 = 0.0;
    let mut skipped = 0;
    for m in f.members() {
        match transforms::projection_commutation_check(t, &m.subspace) {
            Ok(r) => worst = worst.max(r),
            Err(_) => skipped += 1,
        }
    }
    task.check(Check::below("commutation_lemma", worst, tol.tau_num));
    if skipped > 0 {
        task.finding(
            "commutation_lemma_hypothesis",
            "not-applicable",
            "exact-computation",
            json!({"degenerate_images": skipped}),
        );
    }
    task
}

fn predicate_json(r: &PredicateReport) -> Value {
    let cx = r.counterexample.as_ref().map(|cx| {
        json!({
            "subspace": subspace_json(&cx.subspace),
            "image": cx.image.as_ref().map(subspace_json),
            "image_classification": cx.image_classification.as_ref().map(classification_json),
            "witness": cx.witness.as_ref().map(witness_json),
            "reason": cx.reason,
        })
    });
    json!({
        "verdict": r.verdict,
        "epistemic": r.epistemic,
        "samples_tested": r.samples_tested,
        "counterexample": cx,
    })
}

fn preserve(ctx: &mut Ctx, name: &str, t: &Operator) -> TaskReport {
    let mut task = TaskReport::new("preserve", format!("operator:{name}"));
    let mut supplied: Vec<Subspace> = Vec::new();
    for (_, f, _) in &ctx.problem.families {
        supplied.extend(f.subspaces());
        if f.is_frame() {
            supplied.extend(f.range(Sign::Positive));
            supplied.extend(f.range(Sign::Negative));
        }
    }
    ctx.stream += 1;
    let cfg = SampleConfig {
        n_random: ctx.opts.samples,
        seed: ctx.opts.seed ^ (ctx.stream << 48),
    };
    let r = transforms::preservation_report(t, &supplied, cfg);
    task.set("isometry_multiple", json!(r.isometry_multiple));
    task.set("operator", matrix_json(t.matrix()));
    for p in [&r.definiteness_with_sign, &r.maximality, &r.regularity] {
        let key = serde_json::to_value(p.predicate)
            .ok()
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_default();
        let status = match p.verdict {
            Verdict::HoldsOnSamples => "holds-on-samples",
            Verdict::Counterexample => "counterexample",
        };
        let epistemic = serde_json::to_value(p.epistemic)
            .ok()
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_default();
        task.finding(&key, status, &epistemic, predicate_json(p));
        task.check(Check::flag(
            &format!("preserves_{}", key.replace('-', "_")),
            p.verdict == Verdict::HoldsOnSamples,
        ));
    }
    task
}
