//! Instance file format: a JSON description of a stack model together with
//! named stability measures and an optional stratification datum. All
//! rational numbers are written as strings ("3", "-1/2") so that exactness
//! survives serialization.

use std::collections::BTreeMap;
use std::path::Path;

use dtcalc_core::exactq::Cone;
use dtcalc_core::measures::{pullback_measure, quiver_measure, trivial_measure, StabilityMeasure};
use dtcalc_core::measures::canonical_measure;
use dtcalc_core::stackmodel::{quiver_stack, TableStack, TableStratum};
use dtcalc_core::motives::Poly;
use dtcalc_core::{ConeInFace, LinearTorusStack, Rat, RationalFn, StackModel, Subspace};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {0}: {1}")]
    Io(String, std::io::Error),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error(transparent)]
    Stack(#[from] dtcalc_core::stackmodel::StackError),
    #[error(transparent)]
    Measure(#[from] dtcalc_core::measures::MeasureError),
    #[error(transparent)]
    Epsilon(#[from] dtcalc_core::epsilon::EpsilonError),
    #[error(transparent)]
    Dt(#[from] dtcalc_core::dtinv::DtError),
    #[error(transparent)]
    Motive(#[from] dtcalc_core::motives::MotiveError),
}

pub fn parse_rat(s: &str) -> Result<Rat, CliError> {
    let bad = || CliError::Schema(format!("'{s}' is not a rational number"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = num.trim().parse().map_err(|_| bad())?;
    let d: BigInt = den.trim().parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(bad());
    }
    Ok(Rat::new(n, d))
}

fn parse_vec(v: &[String]) -> Result<Vec<Rat>, CliError> {
    v.iter().map(|s| parse_rat(s)).collect()
}

fn parse_mat(m: &[Vec<String>]) -> Result<Vec<Vec<Rat>>, CliError> {
    m.iter().map(|r| parse_vec(r)).collect()
}

fn parse_poly(coeffs: &[String]) -> Result<Poly, CliError> {
    Ok(Poly::new(parse_vec(coeffs)?))
}

/// A rational function in L, given by ascending coefficient lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalFnSpec {
    pub num: Vec<String>,
    pub den: Vec<String>,
}

impl RationalFnSpec {
    pub fn build(&self) -> Result<RationalFn, CliError> {
        let den = parse_poly(&self.den)?;
        if den.is_zero() {
            return Err(CliError::Schema("zero denominator polynomial".into()));
        }
        Ok(RationalFn::new(parse_poly(&self.num)?, den))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaceSpec {
    pub name: String,
    pub basis: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableConeSpec {
    pub name: String,
    pub face: String,
    pub generators: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClosureSpec {
    /// Generators of the cone being closed.
    pub generators: Vec<Vec<String>>,
    /// Name of the declared special cone it closes to.
    pub closure: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradSpec {
    pub face: String,
    /// Pairs (stratum label, coefficient).
    pub value: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumSpec {
    pub label: String,
    pub face: String,
    pub point_motive: RationalFnSpec,
    pub special_faces: Vec<String>,
    pub grad: Vec<GradSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StarSpec {
    pub cone: String,
    pub stratum: String,
    pub value: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelSpec {
    LinearTorus {
        torus_rank: usize,
        weights: Vec<Vec<String>>,
    },
    Quiver {
        vertices: usize,
        edges: Vec<(usize, usize)>,
    },
    Table {
        ambient: usize,
        dim: i64,
        faces: Vec<FaceSpec>,
        central: String,
        cones: Vec<TableConeSpec>,
        #[serde(default)]
        closures: Vec<ClosureSpec>,
        strata: Vec<StratumSpec>,
        star: Vec<StarSpec>,
        #[serde(default)]
        aut: Vec<(String, String)>,
    },
}

/// One entry of an explicit measure: a special cone named either by its
/// declared table name or by a generating set, with its mass.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitMass {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<String>>>,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum MeasureSpec {
    /// Mass 1 on the identity cone of every special face.
    Trivial,
    /// Chamber-counting measure of the weight arrangement.
    Canonical,
    /// Ordering measure of the quiver with the given vertex slopes, pulled
    /// back to the special cones. Only valid on quiver instances.
    Quiver { slopes: Vec<String> },
    /// Explicit masses on special cones; unlisted cones get 0.
    Explicit { cones: Vec<ExplicitMass> },
}

/// A stratification datum: a linear form and a positive definite quadratic
/// norm on the cocharacter space.
pub type ThetaData = (Vec<Rat>, Vec<Vec<Rat>>);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaSpec {
    pub linear_form: Vec<String>,
    pub quad_norm: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    #[serde(flatten)]
    pub model: ModelSpec,
    #[serde(default)]
    pub measures: BTreeMap<String, MeasureSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<ThetaSpec>,
}

impl InstanceFile {
    pub fn parse_text(text: &str) -> Result<InstanceFile, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<InstanceFile, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(path.display().to_string(), e))?;
        InstanceFile::parse_text(&text)
    }

    pub fn build_model(&self) -> Result<StackModel, CliError> {
        match &self.model {
            ModelSpec::LinearTorus { torus_rank, weights } => Ok(StackModel::Torus(
                LinearTorusStack::new(*torus_rank, parse_mat(weights)?)?,
            )),
            ModelSpec::Quiver { vertices, edges } => {
                Ok(StackModel::Torus(quiver_stack(*vertices, edges)?))
            }
            ModelSpec::Table {
                ambient,
                dim,
                faces,
                central,
                cones,
                closures,
                strata,
                star,
                aut,
            } => {
                let n = *ambient;
                let mut face_by_name: BTreeMap<&str, Subspace> = BTreeMap::new();
                for f in faces {
                    let s = Subspace::span(n, &parse_mat(&f.basis)?);
                    face_by_name.insert(&f.name, s);
                }
                let face = |name: &str| -> Result<Subspace, CliError> {
                    face_by_name
                        .get(name)
                        .cloned()
                        .ok_or_else(|| CliError::Schema(format!("unknown face '{name}'")))
                };
                let mut cone_by_name: BTreeMap<&str, ConeInFace> = BTreeMap::new();
                for c in cones {
                    let cif = ConeInFace::new(Cone::hull(n, &parse_mat(&c.generators)?));
                    if cif.face() != &face(&c.face)? {
                        return Err(CliError::Schema(format!(
                            "cone '{}' does not span the face '{}'",
                            c.name, c.face
                        )));
                    }
                    cone_by_name.insert(&c.name, cif);
                }
                let cone = |name: &str| -> Result<ConeInFace, CliError> {
                    cone_by_name
                        .get(name)
                        .cloned()
                        .ok_or_else(|| CliError::Schema(format!("unknown cone '{name}'")))
                };
                let labels: Vec<&str> = strata.iter().map(|s| s.label.as_str()).collect();
                let terms = |v: &[(String, String)]| -> Result<Vec<(String, Rat)>, CliError> {
                    v.iter()
                        .map(|(lab, c)| {
                            if !labels.contains(&lab.as_str()) {
                                return Err(CliError::Schema(format!(
                                    "unknown stratum '{lab}'"
                                )));
                            }
                            Ok((lab.clone(), parse_rat(c)?))
                        })
                        .collect()
                };
                let mut built_strata = Vec::new();
                for s in strata {
                    let mut grad = Vec::new();
                    for g in &s.grad {
                        grad.push((face(&g.face)?, terms(&g.value)?));
                    }
                    built_strata.push(TableStratum {
                        label: s.label.clone(),
                        face: face(&s.face)?,
                        point_motive: s.point_motive.build()?,
                        special_faces: s
                            .special_faces
                            .iter()
                            .map(|f| face(f))
                            .collect::<Result<_, _>>()?,
                        grad,
                    });
                }
                let mut built_star = Vec::new();
                for r in star {
                    built_star.push((cone(&r.cone)?, r.stratum.clone(), terms(&r.value)?));
                }
                let mut built_closures = Vec::new();
                for c in closures {
                    let raw = Cone::hull(n, &parse_mat(&c.generators)?);
                    built_closures.push((raw, cone(&c.closure)?));
                }
                let mut built_aut = Vec::new();
                for (f, v) in aut {
                    built_aut.push((face(f)?, parse_rat(v)?));
                }
                Ok(StackModel::Table(TableStack {
                    ambient: n,
                    dim: *dim,
                    faces: face_by_name.values().cloned().collect(),
                    central: face(central)?,
                    cones: cone_by_name.values().cloned().collect(),
                    closures: built_closures,
                    strata: built_strata,
                    star: built_star,
                    aut: built_aut,
                }))
            }
        }
    }

    /// Resolve a declared table cone by name (table models only).
    pub fn table_cone(&self, name: &str) -> Result<ConeInFace, CliError> {
        if let ModelSpec::Table { ambient, cones, .. } = &self.model {
            for c in cones {
                if c.name == name {
                    return Ok(ConeInFace::new(Cone::hull(*ambient, &parse_mat(&c.generators)?)));
                }
            }
        }
        Err(CliError::Schema(format!("unknown cone '{name}'")))
    }

    pub fn build_measure(
        &self,
        x: &StackModel,
        name: &str,
    ) -> Result<StabilityMeasure, CliError> {
        let spec = self
            .measures
            .get(name)
            .ok_or_else(|| CliError::Schema(format!("no measure named '{name}'")))?;
        match spec {
            MeasureSpec::Trivial => Ok(trivial_measure(x)),
            MeasureSpec::Canonical => Ok(canonical_measure(x)?),
            MeasureSpec::Quiver { slopes } => {
                let ModelSpec::Quiver { vertices, edges } = &self.model else {
                    return Err(CliError::Schema(
                        "quiver measures require a quiver instance".into(),
                    ));
                };
                let mu = quiver_measure(*vertices, edges, &parse_vec(slopes)?)?;
                Ok(pullback_measure(&mu, x)?)
            }
            MeasureSpec::Explicit { cones } => {
                let n = x.ambient_rank();
                let mut m = StabilityMeasure::new(format!("explicit:{name}"));
                for e in cones {
                    let cif = match (&e.cone, &e.generators) {
                        (Some(cn), None) => self.table_cone(cn)?,
                        (None, Some(gens)) => {
                            ConeInFace::new(Cone::hull(n, &parse_mat(gens)?))
                        }
                        _ => {
                            return Err(CliError::Schema(
                                "measure entries take exactly one of 'cone' or 'generators'"
                                    .into(),
                            ))
                        }
                    };
                    m.add(cif, parse_rat(&e.value)?);
                }
                Ok(m)
            }
        }
    }

    pub fn theta_data(&self) -> Result<Option<ThetaData>, CliError> {
        match &self.theta {
            None => Ok(None),
            Some(t) => Ok(Some((parse_vec(&t.linear_form)?, parse_mat(&t.quad_norm)?))),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match &self.model {
            ModelSpec::LinearTorus { .. } => "linear_torus",
            ModelSpec::Quiver { .. } => "quiver",
            ModelSpec::Table { .. } => "table",
        }
    }
}
