//! JSON input files: Artin-Schreier extensions, injected ramification jumps
//! and Kummer value data.

use std::sync::Arc;

use defectlab_core::hahn::BaseFieldKind;
use defectlab_core::kummer::KummerValueData;
use defectlab_core::rational::parse_rational;
use defectlab_core::segcalc::InitialSegment;
use defectlab_core::{
    AsExtensionSpec, BaseFieldSpec, Divisibility, FinalSegment, HahnSeries, OrderedGroup, Slot,
};
use serde::Deserialize;
use serde_json::Value;

use crate::error::{CliError, Result};

/// A value group: a shorthand such as `"QxZ[1/2]"`, or explicit slots,
/// coarsest first.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GroupDesc {
    Shorthand(String),
    Slots(Vec<SlotDesc>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlotDesc {
    pub generators: Vec<String>,
    #[serde(default)]
    pub divisible_by: Vec<u64>,
    /// Closed under division by every integer.
    #[serde(default)]
    pub divisible: bool,
}

impl GroupDesc {
    pub fn build(&self) -> defectlab_core::Result<OrderedGroup> {
        match self {
            GroupDesc::Shorthand(s) => OrderedGroup::parse_shorthand(s),
            GroupDesc::Slots(slots) => {
                let slots = slots
                    .iter()
                    .map(|s| {
                        let gens = s
                            .generators
                            .iter()
                            .map(|g| parse_rational(g))
                            .collect::<defectlab_core::Result<Vec<_>>>()?;
                        let div = if s.divisible {
                            Divisibility::All
                        } else {
                            Divisibility::Primes(s.divisible_by.clone())
                        };
                        Slot::new(gens, div)
                    })
                    .collect::<defectlab_core::Result<Vec<_>>>()?;
                OrderedGroup::new(slots)
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BaseDesc {
    PerfectHullRationalFunction,
    PerfectHullLaurent,
    TruncatedHahn { group: GroupDesc },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionFile {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub description: Option<String>,
    pub p: u32,
    pub base: BaseDesc,
    pub as_rhs: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutFile {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub description: Option<String>,
    pub p: u32,
    pub group: GroupDesc,
    pub sigma_e: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KummerFile {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub description: Option<String>,
    pub p: u32,
    #[serde(default = "default_vp")]
    pub vp: String,
    pub group: GroupDesc,
    /// `v(η − K)`.
    #[serde(default)]
    pub distance: Option<String>,
    /// `v(a − K^p)`, used when `distance` is absent.
    #[serde(default)]
    pub a_distance: Option<String>,
}

fn default_vp() -> String {
    "1".into()
}

#[derive(Debug, Clone)]
pub enum SpecFile {
    Extension(ExtensionFile),
    Cut(CutFile),
    Kummer(KummerFile),
}

impl SpecFile {
    /// The file kind is decided by its keys: `as_rhs`, `sigma_e`, or
    /// `distance`/`a_distance`.
    pub fn parse(text: &str, origin: &str) -> Result<SpecFile> {
        let value: Value = serde_json::from_str(text).map_err(|e| CliError::json(origin, &e))?;
        let Value::Object(map) = &value else {
            return Err(CliError::Spec {
                origin: origin.into(),
                message: "expected a JSON object".into(),
            });
        };
        let parsed = if map.contains_key("as_rhs") {
            serde_json::from_str(text).map(SpecFile::Extension)
        } else if map.contains_key("sigma_e") {
            serde_json::from_str(text).map(SpecFile::Cut)
        } else if map.contains_key("distance") || map.contains_key("a_distance") {
            serde_json::from_str(text).map(SpecFile::Kummer)
        } else {
            return Err(CliError::Spec {
                origin: origin.into(),
                message: "cannot tell the spec kind: expected one of the keys as_rhs, sigma_e, distance, a_distance"
                    .into(),
            });
        };
        parsed.map_err(|e| CliError::json(origin, &e))
    }

    pub fn read(path: &str) -> Result<SpecFile> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.into(),
            source,
        })?;
        Self::parse(&text, path)
    }

    pub fn name(&self) -> Option<&str> {
        match self {
            SpecFile::Extension(f) => f.name.as_deref(),
            SpecFile::Cut(f) => f.name.as_deref(),
            SpecFile::Kummer(f) => f.name.as_deref(),
        }
    }

    pub fn description(&self) -> Option<&str> {
        match self {
            SpecFile::Extension(f) => f.description.as_deref(),
            SpecFile::Cut(f) => f.description.as_deref(),
            SpecFile::Kummer(f) => f.description.as_deref(),
        }
    }

    pub fn p(&self) -> u32 {
        match self {
            SpecFile::Extension(f) => f.p,
            SpecFile::Cut(f) => f.p,
            SpecFile::Kummer(f) => f.p,
        }
    }
}

impl ExtensionFile {
    pub fn build(&self) -> defectlab_core::Result<AsExtensionSpec> {
        let kind = match &self.base {
            BaseDesc::PerfectHullRationalFunction => BaseFieldKind::PerfectHullRationalFunction,
            BaseDesc::PerfectHullLaurent => BaseFieldKind::PerfectHullLaurent,
            BaseDesc::TruncatedHahn { group } => BaseFieldKind::TruncatedHahn(group.build()?),
        };
        let base = BaseFieldSpec::new(self.p, kind)?;
        AsExtensionSpec::new(base, HahnSeries::parse(&self.as_rhs, self.p)?)
    }
}

impl CutFile {
    pub fn build(&self) -> defectlab_core::Result<FinalSegment> {
        let group = Arc::new(self.group.build()?);
        FinalSegment::parse(&self.sigma_e, group)
    }
}

impl KummerFile {
    pub fn build(&self) -> Result<KummerValueData> {
        let group = Arc::new(self.group.build()?);
        let vp = group.parse_element(&self.vp)?;
        let data = match (&self.distance, &self.a_distance) {
            (Some(d), None) => {
                let d = InitialSegment::parse(d, group.clone())?;
                KummerValueData::new(self.p, group, vp, d)?
            }
            (None, Some(a)) => {
                let pg = Arc::new(group.scaled(&defectlab_core::rational::qi(i64::from(self.p))));
                let a = InitialSegment::parse(a, pg)?;
                KummerValueData::from_a_distance(self.p, group, vp, &a)?
            }
            _ => {
                return Err(CliError::Spec {
                    origin: self.name.clone().unwrap_or_else(|| "kummer data".into()),
                    message: "give exactly one of distance and a_distance".into(),
                })
            }
        };
        Ok(data)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds() {
        let ext = r#"{"p": 2, "base": {"kind": "perfect_hull_rational_function"}, "as_rhs": "t^-1"}"#;
        assert!(matches!(SpecFile::parse(ext, "x").unwrap(), SpecFile::Extension(_)));
        let cut = r#"{"p": 2, "group": [{"generators": ["1"], "divisible": true}], "sigma_e": ">=1"}"#;
        let SpecFile::Cut(c) = SpecFile::parse(cut, "x").unwrap() else { panic!() };
        assert_eq!(c.build().unwrap().to_string(), ">=1");
        let k = r#"{"p": 3, "vp": "1", "group": "Q", "distance": "<1/2"}"#;
        assert!(matches!(SpecFile::parse(k, "x").unwrap(), SpecFile::Kummer(_)));
    }

    #[test]
    fn positions() {
        let bad = "{\n  \"p\": 2,\n  \"as_rhs\": t^-1\n}";
        match SpecFile::parse(bad, "bad.json") {
            Err(CliError::Json { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let unknown = r#"{"p": 2, "base": {"kind": "perfect_hull_rational_function"}, "as_rhs": "t^-1", "extra": 1}"#;
        assert!(SpecFile::parse(unknown, "x").is_err());
    }

    #[test]
    fn a_distance_round_trip() {
        let k = r#"{"p": 3, "vp": "1", "group": "Q", "a_distance": "<3/2"}"#;
        let SpecFile::Kummer(f) = SpecFile::parse(k, "x").unwrap() else { panic!() };
        let d = f.build().unwrap();
        assert_eq!(d.distance().to_string(), "<1/2");
    }
}
