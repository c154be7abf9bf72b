//! JSON input formats.
//!
//! Function spec:
//! `{"rotation": t, "blaschke": [{"re", "im", "mult"}], "atoms": [{"angle", "mass"}], "dyadic": {"depth", "masses"}}`.
//! Atom angles are turns, either a JSON number or an exact string such as `"1/3"` or `"0.125"`.
//! Set spec: `{"gaps": [{"start", "length"}]}` or `{"cantor": {"rule", "levels"}}`.

use crate::CliError;
use inner_entropy_core::innerfn::BlaschkeFactor;
use inner_entropy_core::measures::{generalized_cantor, Atom, AtomAngle, BoundarySet, CantorRule, DyadicTree, Gap};
use inner_entropy_core::{DiskPoint, InnerFunctionSpec, SingularMeasure};
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionJson {
    #[serde(default)]
    pub rotation: f64,
    #[serde(default)]
    pub blaschke: Vec<ZeroJson>,
    #[serde(default)]
    pub atoms: Vec<AtomJson>,
    #[serde(default)]
    pub dyadic: Option<DyadicJson>,
    /// Interior points for `eval`.
    #[serde(default)]
    pub points: Option<Vec<PointJson>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZeroJson {
    pub re: f64,
    pub im: f64,
    #[serde(default = "one")]
    pub mult: u32,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum AngleJson {
    Number(f64),
    Exact(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomJson {
    pub angle: AngleJson,
    pub mass: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DyadicJson {
    pub depth: u32,
    pub masses: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointJson {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapJson {
    pub start: f64,
    pub length: f64,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum RuleJson {
    Named(String),
    Param(RuleParamJson),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "lowercase")]
pub enum RuleParamJson {
    Ratio(f64),
    Power(f64),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CantorJson {
    pub rule: RuleJson,
    pub levels: u32,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "lowercase")]
pub enum SetJson {
    Gaps(Vec<GapJson>),
    Cantor(CantorJson),
}

fn schema<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Schema(e.to_string())
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(schema)
}

impl FunctionJson {
    pub fn measure(&self) -> Result<SingularMeasure, CliError> {
        let atoms = self
            .atoms
            .iter()
            .map(|a| {
                let angle = match &a.angle {
                    AngleJson::Number(x) => AtomAngle::Float(*x),
                    AngleJson::Exact(s) => AtomAngle::parse_exact(s).map_err(schema)?,
                };
                Ok(Atom { angle, mass: a.mass })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let tree = match &self.dyadic {
            Some(d) => Some(DyadicTree::new(d.depth, d.masses.clone()).map_err(schema)?),
            None => None,
        };
        SingularMeasure::new(atoms, tree).map_err(schema)
    }

    pub fn function(&self) -> Result<InnerFunctionSpec, CliError> {
        let factors = self
            .blaschke
            .iter()
            .map(|z| BlaschkeFactor {
                zero: DiskPoint::new(z.re, z.im),
                multiplicity: z.mult,
            })
            .collect();
        let f = InnerFunctionSpec::new(self.rotation, factors, self.measure()?).map_err(schema)?;
        f.spot_check(64).map_err(schema)?;
        Ok(f)
    }
}

impl SetJson {
    pub fn set(&self) -> Result<BoundarySet, CliError> {
        match self {
            SetJson::Gaps(gaps) => BoundarySet::from_gaps(
                gaps.iter()
                    .map(|g| Gap {
                        start: g.start,
                        length: g.length,
                    })
                    .collect(),
            )
            .map_err(schema),
            SetJson::Cantor(c) => {
                let rule = match &c.rule {
                    RuleJson::Named(name) => match name.as_str() {
                        "thirds" => CantorRule::THIRDS,
                        "poly2" => CantorRule::POLY2,
                        other => return Err(CliError::Schema(format!("unknown Cantor rule {other:?}"))),
                    },
                    RuleJson::Param(RuleParamJson::Ratio(b)) => CantorRule::Ratio(*b),
                    RuleJson::Param(RuleParamJson::Power(s)) => CantorRule::Power(*s),
                };
                generalized_cantor(rule, c.levels).map_err(schema)
            }
        }
    }
}
