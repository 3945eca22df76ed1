//! JSON interchange for complexes.
//!
//! Observations encode as an integer, a view `[[agent, obs], ...]`, or a
//! pair `[obs, obs]`. An array whose elements all look like
//! `[agent, obs]` decodes as a view; any other two-element array decodes
//! as a pair.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{ChromaticComplex, Facet, Obs, Vertex};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexJson {
    pub color: usize,
    pub obs: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FacetJson {
    pub vertices: Vec<VertexJson>,
}

/// Wire form of a complex. Model exports add the optional input
/// designation, and action models add a precondition table keyed by
/// facet index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub n: usize,
    pub facets: Vec<FacetJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_path: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pre: Option<BTreeMap<String, String>>,
}

impl Obs {
    pub fn to_json(&self) -> Value {
        match self {
            Obs::Value(v) => Value::from(*v),
            Obs::View(entries) => {
                Value::Array(entries.iter().map(|(a, o)| Value::Array(vec![Value::from(*a), o.to_json()])).collect())
            }
            Obs::Pair(l, r) => Value::Array(vec![l.to_json(), r.to_json()]),
        }
    }

    pub fn from_json(value: &Value) -> Result<Obs> {
        let bad = || Error::Spec(format!("unrecognized observation {value}"));
        match value {
            Value::Number(n) => n.as_i64().map(Obs::Value).ok_or_else(bad),
            Value::Array(items) => {
                fn entry(item: &Value) -> Option<(usize, &Value)> {
                    match item {
                        Value::Array(kv) if kv.len() == 2 => kv[0].as_u64().map(|a| (a as usize, &kv[1])),
                        _ => None,
                    }
                }
                let entries: Option<Vec<_>> = items.iter().map(entry).collect();
                if let Some(entries) = entries {
                    let view =
                        entries.into_iter().map(|(a, o)| Ok((a, Obs::from_json(o)?))).collect::<Result<Vec<_>>>()?;
                    Ok(Obs::view(view))
                } else if items.len() == 2 {
                    Ok(Obs::pair(Obs::from_json(&items[0])?, Obs::from_json(&items[1])?))
                } else {
                    Err(bad())
                }
            }
            _ => Err(bad()),
        }
    }
}

impl ChromaticComplex {
    pub fn to_json(&self) -> ComplexJson {
        ComplexJson {
            n: self.n,
            facets: self
                .facets
                .iter()
                .map(|f| FacetJson {
                    vertices: f
                        .vertices()
                        .iter()
                        .map(|v| VertexJson { color: v.color, obs: v.obs.to_json() })
                        .collect(),
                })
                .collect(),
            input_path: None,
            pre: None,
        }
    }

    pub fn from_json(json: &ComplexJson) -> Result<ChromaticComplex> {
        let facets = json
            .facets
            .iter()
            .map(|f| {
                let vertices = f
                    .vertices
                    .iter()
                    .map(|v| Ok(Vertex::new(v.color, Obs::from_json(&v.obs)?)))
                    .collect::<Result<Vec<_>>>()?;
                Facet::new(vertices)
            })
            .collect::<Result<Vec<_>>>()?;
        ChromaticComplex::new(json.n, facets)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn obs_strategy() -> impl Strategy<Value = Obs> {
        let leaf = (-5i64..5).prop_map(Obs::Value);
        leaf.prop_recursive(3, 16, 4, |inner| {
            prop_oneof![
                prop::collection::vec((0usize..4, inner.clone()), 0..4).prop_map(Obs::view),
                ((-5i64..5), inner).prop_map(|(v, o)| Obs::pair(Obs::Value(v), o)),
            ]
        })
    }

    proptest! {
        #[test]
        fn obs_json_round_trip(o in obs_strategy()) {
            prop_assert_eq!(Obs::from_json(&o.to_json()).unwrap(), o);
        }

        #[test]
        fn reingest_is_identity(rows in prop::collection::vec(prop::collection::vec(0i64..3, 3), 1..10)) {
            let facets = rows.iter().map(|r| Facet::from_values(r)).collect();
            let c = ChromaticComplex::new(2, facets).unwrap();
            let json = c.to_json();
            let back = ChromaticComplex::from_json(&json).unwrap();
            prop_assert_eq!(&back, &c);
            prop_assert_eq!(back.to_json(), json);
        }
    }

    #[test]
    fn decodes_wire_format() {
        let json: ComplexJson = serde_json::from_str(
            r#"{"n":1,"facets":[{"vertices":[{"color":0,"obs":[0,[[0,0]]]},{"color":1,"obs":[1,[[0,0],[1,1]]]}]}]}"#,
        )
        .unwrap();
        let c = ChromaticComplex::from_json(&json).unwrap();
        let v = c.facets()[0].vertex(1);
        let (l, r) = v.obs.as_pair().unwrap();
        assert_eq!(l, &Obs::Value(1));
        assert_eq!(r.as_view().unwrap().len(), 2);
    }
}
