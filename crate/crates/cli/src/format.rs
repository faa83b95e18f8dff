//! JSON file formats.
//!
//! Integers are JSON numbers when they fit in 64 bits and decimal strings
//! otherwise; rationals are `[numerator, denominator]` pairs.

use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use toric_wci_core::coxcl::{self, DivisorClass};
use toric_wci_core::exactmat::IntMatrix;
use toric_wci_core::fan::Fan;
use toric_wci_core::gwps::{self, WeightSystem};
use toric_wci_core::wci::{CiSpec, ToricDegree};

use crate::{corpus, CliError};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Int(pub BigInt);

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(x) => s.serialize_i64(x),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct IntVisitor;

        impl Visitor<'_> for IntVisitor {
            type Value = Int;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a decimal integer string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Int, E> {
                Ok(Int(v.into()))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Int, E> {
                Ok(Int(v.into()))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Int, E> {
                v.trim()
                    .parse::<BigInt>()
                    .map(Int)
                    .map_err(|_| E::invalid_value(de::Unexpected::Str(v), &self))
            }
        }

        d.deserialize_any(IntVisitor)
    }
}

fn ints(v: &[Int]) -> Vec<BigInt> {
    v.iter().map(|x| x.0.clone()).collect()
}

fn wrap(v: &[BigInt]) -> Vec<Int> {
    v.iter().cloned().map(Int).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanDocument {
    pub lattice_rank: usize,
    pub rays: Vec<Vec<Int>>,
    pub max_cones: Vec<Vec<usize>>,
    /// Generators of a finer lattice, each coordinate a `[num, den]` pair.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub superlattice: Option<Vec<Vec<[Int; 2]>>>,
}

impl FanDocument {
    pub fn from_fan(fan: &Fan) -> Self {
        FanDocument {
            lattice_rank: fan.lattice_rank(),
            rays: fan.rays().row_vecs().iter().map(|r| wrap(r)).collect(),
            max_cones: fan.max_cones().to_vec(),
            superlattice: None,
        }
    }

    pub fn to_fan(&self) -> Result<Fan, CliError> {
        let rows: Vec<Vec<BigInt>> = self.rays.iter().map(|r| ints(r)).collect();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != self.lattice_rank {
                return Err(CliError::Input(format!(
                    "ray {i} has {} coordinates, lattice_rank is {}",
                    r.len(),
                    self.lattice_rank
                )));
            }
        }
        let rays = IntMatrix::from_rows(&rows, self.lattice_rank)?;
        let fan = Fan::new(self.lattice_rank, rays, self.max_cones.clone())?;
        match &self.superlattice {
            None => Ok(fan),
            Some(gens) => {
                let gens = gens
                    .iter()
                    .map(|g| {
                        g.iter()
                            .map(|[n, d]| {
                                if d.0.is_zero() {
                                    Err(CliError::Input("zero denominator in superlattice".into()))
                                } else {
                                    Ok(BigRational::new(n.0.clone(), d.0.clone()))
                                }
                            })
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(gwps::refine_lattice(&fan, &gens)?)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassDocument {
    pub free: Vec<Int>,
    #[serde(default)]
    pub torsion: Vec<Int>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToricDegreeDocument {
    pub witness: Vec<Int>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<ClassDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DegreeDocument {
    Weighted(u64),
    Toric(ToricDegreeDocument),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FanRef {
    /// A file path relative to the spec file, or `corpus:NAME`.
    Path(String),
    Inline(FanDocument),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fan: Option<FanRef>,
    pub degrees: Vec<DegreeDocument>,
}

impl SpecDocument {
    /// Replaces a fan reference by the fan it names.
    pub fn resolved(&self, base: Option<&Path>) -> Result<SpecDocument, CliError> {
        let mut out = self.clone();
        if let Some(FanRef::Path(p)) = &self.fan {
            out.fan = Some(FanRef::Inline(load_fan_document(p, base)?));
        }
        Ok(out)
    }

    pub fn to_spec(&self, base: Option<&Path>, budget: u64) -> Result<CiSpec, CliError> {
        match (&self.weights, &self.fan) {
            (Some(w), None) => {
                let degrees = self
                    .degrees
                    .iter()
                    .map(|d| match d {
                        DegreeDocument::Weighted(d) => Ok(*d),
                        DegreeDocument::Toric(_) => Err(CliError::Input(
                            "degrees over a weight system must be positive integers".into(),
                        )),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(CiSpec::weighted(WeightSystem::new(w.clone())?, degrees, budget)?)
            }
            (None, Some(fan_ref)) => {
                let fan = match fan_ref {
                    FanRef::Path(p) => load_fan_document(p, base)?.to_fan()?,
                    FanRef::Inline(doc) => doc.to_fan()?,
                };
                let cl = coxcl::class_group(&fan);
                let degrees = self
                    .degrees
                    .iter()
                    .map(|d| match d {
                        DegreeDocument::Toric(t) => {
                            let witness = ints(&t.witness);
                            let class = match &t.class {
                                Some(c) => DivisorClass { free: ints(&c.free), torsion: ints(&c.torsion) },
                                None => cl.class_of_divisor(&witness)?,
                            };
                            Ok(ToricDegree { class, witness })
                        }
                        DegreeDocument::Weighted(_) => Err(CliError::Input(
                            "degrees over a fan need a witness divisor".into(),
                        )),
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                Ok(CiSpec::toric(fan, degrees, budget)?)
            }
            _ => Err(CliError::Input("a spec needs exactly one of `weights` and `fan`".into())),
        }
    }
}

pub fn parse_fan(text: &str, origin: &str) -> Result<FanDocument, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::parse(origin, &e))
}

pub fn parse_spec(text: &str, origin: &str) -> Result<SpecDocument, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::parse(origin, &e))
}

/// Reads a fan document from a path or a `corpus:NAME` reference.
pub fn load_fan_document(reference: &str, base: Option<&Path>) -> Result<FanDocument, CliError> {
    if let Some(name) = reference.strip_prefix("corpus:") {
        return corpus::fan_document(name)
            .ok_or_else(|| CliError::Input(format!("no corpus fan named {name:?}")));
    }
    let path = match base {
        Some(dir) => dir.join(reference),
        None => Path::new(reference).to_path_buf(),
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_fan(&text, &path.display().to_string())
}
