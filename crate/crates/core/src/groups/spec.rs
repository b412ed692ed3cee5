//! Textual group specs: a family token followed by colon-separated decimal
//! parameters, e.g. `SD:4`, `D:9`, `AGL:2:3`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Family, FiniteGroup};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec(pub Family);

impl GroupSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let perr = |position: usize, message: String| Error::Parse { position, message };
        let mut fields = Vec::new();
        let mut start = 0;
        for (i, c) in text.char_indices() {
            if c == ':' {
                fields.push((start, &text[start..i]));
                start = i + 1;
            } else if c.is_whitespace() {
                return Err(perr(i, "whitespace is not allowed".into()));
            }
        }
        fields.push((start, &text[start..]));

        let (_, token) = fields[0];
        let arity = match token {
            "C" | "D" | "SD" | "M" | "Q" => 1,
            "AGL" => 2,
            "" => return Err(perr(0, "missing family token".into())),
            other => return Err(perr(0, format!("unknown family `{other}`"))),
        };
        if fields.len() - 1 != arity {
            let pos = fields.last().map(|(p, s)| p + s.len()).unwrap_or(0);
            return Err(perr(
                pos,
                format!("family `{token}` takes {arity} parameter(s), got {}", fields.len() - 1),
            ));
        }
        let mut params = Vec::with_capacity(arity);
        for &(pos, field) in &fields[1..] {
            if field.is_empty() || !field.bytes().all(|b| b.is_ascii_digit()) {
                return Err(perr(pos, format!("expected a decimal parameter, got `{field}`")));
            }
            params.push(
                field
                    .parse::<u32>()
                    .map_err(|_| perr(pos, format!("parameter `{field}` is out of range")))?,
            );
        }
        let family = match token {
            "C" => Family::Cyclic { m: params[0] },
            "D" => Family::Dihedral { m: params[0] },
            "SD" => Family::Semidihedral { n: params[0] },
            "M" => Family::ModularMaximalCyclic { n: params[0] },
            "Q" => Family::GeneralizedQuaternion { n: params[0] },
            _ => Family::Agl1 {
                p: params[0],
                n: params[1],
            },
        };
        family.validate()?;
        Ok(GroupSpec(family))
    }

    pub fn family(&self) -> Family {
        self.0
    }

    pub fn build(&self, max_order: usize) -> Result<FiniteGroup> {
        FiniteGroup::from_family(self.0, max_order)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GroupSpec::parse(s)
    }
}

impl Serialize for GroupSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        GroupSpec::parse(&s).map_err(serde::de::Error::custom)
    }
}
