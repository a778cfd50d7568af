use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{
    gen_brauer, gen_deuber, gen_fpf, gen_geo_arithmetic, gen_mt_configuration, gen_poly_vdw,
    Configuration, PatternSpec,
};
use crate::error::{Error, Result};
use crate::ground::GroundTable;
use crate::semigroup::Monomial;

/// Generator tuple of a witness, named per family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Generators {
    Fpf {
        xs: Vec<u64>,
    },
    Brauer {
        x: u64,
        z: u64,
        /// Some `y` with `z = x *_f y`, when one exists.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        y: Option<u64>,
    },
    Deuber {
        xs: Vec<u64>,
    },
    Mt {
        xs: Vec<u64>,
    },
    Geo {
        b: Monomial,
        gamma: Vec<u64>,
        a: u64,
        d: u64,
    },
    Pvw {
        b: Monomial,
        c: u64,
    },
}

impl Generators {
    pub fn family(&self) -> &'static str {
        match self {
            Generators::Fpf { .. } => "fpf",
            Generators::Brauer { .. } => "brauer",
            Generators::Deuber { .. } => "deuber",
            Generators::Mt { .. } => "mt",
            Generators::Geo { .. } => "geo",
            Generators::Pvw { .. } => "pvw",
        }
    }
}

/// Regenerate the configuration of `spec` from `generators`.
pub fn generate(
    spec: &PatternSpec,
    generators: &Generators,
    table: &GroundTable,
) -> Result<Configuration> {
    spec.validate()?;
    let malformed = |why: String| Err(Error::MalformedWitness(why));
    match (spec, generators) {
        (PatternSpec::Fpf { k }, Generators::Fpf { xs }) => {
            if xs.len() != *k {
                return malformed(format!("fpf expects {k} generators, got {}", xs.len()));
            }
            gen_fpf(table, xs)
        }
        (PatternSpec::Brauer { k }, Generators::Brauer { x, z, .. }) => {
            gen_brauer(table, *x, *z, *k)
        }
        (PatternSpec::Deuber { m, p }, Generators::Deuber { xs }) => {
            if xs.len() != m + 1 {
                return malformed(format!(
                    "deuber expects {} generators, got {}",
                    m + 1,
                    xs.len()
                ));
            }
            gen_deuber(table, xs, *p)
        }
        (PatternSpec::Mt { m, k, phi }, Generators::Mt { xs }) => {
            if xs.len() != *k {
                return malformed(format!("mt expects {k} generators, got {}", xs.len()));
            }
            gen_mt_configuration(table, xs, *m, phi)
        }
        (PatternSpec::Geo { k }, Generators::Geo { b, gamma, a, d }) => {
            gen_geo_arithmetic(table, b, gamma, *a, *d, *k)
        }
        (PatternSpec::Pvw { sets, .. }, Generators::Pvw { b, c }) => {
            gen_poly_vdw(table, b, *c, sets)
        }
        (spec, gens) => malformed(format!(
            "generators for {} do not match spec family {}",
            gens.family(),
            spec.family()
        )),
    }
}

/// A monochromatic configuration together with everything needed to
/// re-derive and re-check it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub spec: PatternSpec,
    pub generators: Generators,
    /// Sorted, deduplicated.
    pub configuration: Vec<u64>,
    pub color: u32,
    #[serde(rename = "coloring-provenance")]
    pub coloring_provenance: String,
    #[serde(rename = "table-limit")]
    pub table_limit: u64,
}

impl Witness {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("witness serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::MalformedWitness(e.to_string()))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json() + "\n").map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Witness::from_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::PhiExpr;

    #[test]
    fn family_mismatch_is_malformed() {
        let t = GroundTable::build(1000).unwrap();
        let err = generate(
            &PatternSpec::Brauer { k: 1 },
            &Generators::Fpf { xs: vec![2] },
            &t,
        )
        .unwrap_err();
        assert!(matches!(err, Error::MalformedWitness(_)));
        let err = generate(
            &PatternSpec::Fpf { k: 3 },
            &Generators::Fpf { xs: vec![2] },
            &t,
        )
        .unwrap_err();
        assert!(matches!(err, Error::MalformedWitness(_)));
    }

    #[test]
    fn document_field_names() {
        let w = Witness {
            spec: PatternSpec::Mt {
                m: 1,
                k: 2,
                phi: PhiExpr::Projection { index: 1 },
            },
            generators: Generators::Mt { xs: vec![2, 5] },
            configuration: vec![2, 5, 9],
            color: 1,
            coloring_provenance: "constant:bound=10".into(),
            table_limit: 1000,
        };
        let v: serde_json::Value = serde_json::from_str(&w.to_json()).unwrap();
        for key in [
            "spec",
            "generators",
            "configuration",
            "color",
            "coloring-provenance",
            "table-limit",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["spec"]["family"], "mt");
        assert_eq!(v["spec"]["phi"]["kind"], "projection");
        assert_eq!(Witness::from_json(&w.to_json()).unwrap(), w);
        assert!(Witness::from_json("{}").is_err());
    }
}
