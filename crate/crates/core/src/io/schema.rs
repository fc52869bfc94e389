use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::IoError;
use crate::duality::VectorFrame;
use crate::fusion::WeightedFamily;
use crate::krein::{KreinSpace, Operator};
use crate::linalg::{CMatrix, CVector, C64};
use crate::random;
use crate::subspace::Subspace;
use crate::tolerance::Tolerances;

/// A complex entry: a bare number or `[re, im]`. Always written as a pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Complex(pub C64);

impl Serialize for Complex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.0.re, self.0.im].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Complex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Real(f64),
            Pair([f64; 2]),
        }
        let z = match Raw::deserialize(d)? {
            Raw::Real(re) => C64::new(re, 0.0),
            Raw::Pair([re, im]) => C64::new(re, im),
        };
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(serde::de::Error::custom("non-finite number"));
        }
        Ok(Complex(z))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    pub dim: usize,
    /// Row-major.
    #[serde(rename = "J")]
    pub j: Vec<Vec<Complex>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MemberSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Spanning vectors (columns of the basis matrix).
    pub basis: Vec<Vec<Complex>>,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub members: Vec<MemberSpec>,
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomFrameSpec {
    /// Draw `M-` as `M+^[perp]` instead of independently.
    #[serde(default)]
    pub j_orthogonal: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VectorFrameSpec {
    Vectors {
        vectors: Vec<Vec<Complex>>,
    },
    /// A seeded random J-frame in the spec's space.
    Random {
        random: RandomFrameSpec,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_sym: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_rank: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_def: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_num: Option<f64>,
}

impl ToleranceSpec {
    pub fn apply(&self, base: Tolerances) -> Tolerances {
        Tolerances {
            tau_sym: self.tau_sym.unwrap_or(base.tau_sym),
            tau_rank: self.tau_rank.unwrap_or(base.tau_rank),
            tau_def: self.tau_def.unwrap_or(base.tau_def),
            tau_num: self.tau_num.unwrap_or(base.tau_num),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub space: SpaceSpec,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub families: BTreeMap<String, FamilySpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub vector_frames: BTreeMap<String, VectorFrameSpec>,
    /// Row-major square matrices.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub operators: BTreeMap<String, Vec<Vec<Complex>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

pub fn parse_spec(text: &str) -> Result<ProblemSpec, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Schema(e.to_string()))
}

/// A validated spec with every object constructed.
#[derive(Clone, Debug)]
pub struct Problem {
    pub space: KreinSpace,
    /// `(name, family, member names)`.
    pub families: Vec<(String, WeightedFamily, Vec<String>)>,
    pub vector_frames: Vec<(String, VectorFrame)>,
    pub operators: Vec<(String, Operator)>,
}

fn rows_to_matrix(rows: &[Vec<Complex>], n: usize, what: &str) -> Result<CMatrix, IoError> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(IoError::Validation(format!("{what} must be {n}x{n}")));
    }
    Ok(CMatrix::from_fn(n, n, |r, c| rows[r][c].0))
}

fn to_vector(v: &[Complex], n: usize, what: &str) -> Result<CVector, IoError> {
    if v.len() != n {
        return Err(IoError::Validation(format!(
            "{what} has length {}, expected {n}",
            v.len()
        )));
    }
    Ok(CVector::from_iterator(n, v.iter().map(|z| z.0)))
}

impl Problem {
    /// Builds every object, applying `tol` and drawing random frames from `seed`.
    pub fn resolve(spec: &ProblemSpec, tol: Tolerances, seed: u64) -> Result<Self, IoError> {
        let n = spec.space.dim;
        if n == 0 {
            return Err(IoError::Validation("space dimension must be positive".into()));
        }
        let j = rows_to_matrix(&spec.space.j, n, "J")?;
        let space = KreinSpace::with_tolerances(j, tol).map_err(|e| IoError::Validation(e.to_string()))?;

        let mut families = Vec::new();
        for (name, fam) in &spec.families {
            let mut subspaces = Vec::new();
            let mut names = Vec::new();
            for (i, m) in fam.members.iter().enumerate() {
                let mname = m.name.clone().unwrap_or_else(|| format!("#{i}"));
                let ctx = |e: String| IoError::Validation(format!("family '{name}' member '{mname}': {e}"));
                let cols = m
                    .basis
                    .iter()
                    .map(|c| to_vector(c, n, "basis vector"))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| ctx(e.to_string()))?;
                if cols.is_empty() {
                    return Err(ctx("empty basis".into()));
                }
                let w = Subspace::new(&space, crate::linalg::from_columns(&cols)).map_err(|e| ctx(e.to_string()))?;
                subspaces.push(w);
                names.push(mname);
            }
            let weights: Vec<f64> = fam.members.iter().map(|m| m.weight).collect();
            let family = WeightedFamily::new(&space, subspaces, &weights).map_err(|e| {
                let member = match &e {
                    crate::Error::MemberClassification { index, .. } | crate::Error::Weight { index, .. } => {
                        format!(" member '{}'", names[*index])
                    }
                    _ => String::new(),
                };
                IoError::Validation(format!("family '{name}'{member}: {e}"))
            })?;
            families.push((name.clone(), family, names));
        }

        let mut vector_frames = Vec::new();
        for (index, (name, vf)) in spec.vector_frames.iter().enumerate() {
            let frame = match vf {
                VectorFrameSpec::Vectors { vectors } => {
                    let vs = vectors
                        .iter()
                        .map(|v| to_vector(v, n, "vector"))
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|e| IoError::Validation(format!("vector frame '{name}': {e}")))?;
                    VectorFrame::new(&space, vs)
                        .map_err(|e| IoError::Validation(format!("vector frame '{name}': {e}")))?
                }
                VectorFrameSpec::Random { random: r } => {
                    let (p, q) = space.signature();
                    if p == 0 && q == 0 {
                        return Err(IoError::Validation("empty space".into()));
                    }
                    let mut rng = random::draw_rng(seed, (1 << 40) + index as u64);
                    if r.j_orthogonal {
                        random::random_j_orthogonal_vector_frame(&mut rng, &space)
                    } else {
                        random::random_vector_frame(&mut rng, &space)
                    }
                }
            };
            vector_frames.push((name.clone(), frame));
        }

        let mut operators = Vec::new();
        for (name, rows) in &spec.operators {
            let m = rows_to_matrix(rows, n, &format!("operator '{name}'"))?;
            let t = Operator::new(&space, m).map_err(|e| IoError::Validation(format!("operator '{name}': {e}")))?;
            operators.push((name.clone(), t));
        }

        Ok(Self {
            space,
            families,
            vector_frames,
            operators,
        })
    }
}
