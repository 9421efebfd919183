//! JSON file formats for models, relations, topologies and state maps.
//!
//! ```text
//! model:     {"atoms": ["p"], "rel": [["s0","s1"]], "states": ["s0","s1"], "val": {"s0": ["p"], "s1": []}}
//! relation:  {"pairs": [["s0","t3"]]}
//! topology:  {"carrier": ["s0","s1"], "opens": [[],["s0"],["s0","s1"]]}
//! subbase:   {"carrier": ["s0","s1"], "subbase": [["s0"]]}
//! map:       {"map": {"s0": "t0", "s1": "t0"}}
//! ```
//!
//! Keys are written in sorted order and arrays in model order, so writing a
//! loaded model reproduces the input when it was already in that form.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::formula::AtomSet;
use crate::kripke::{valid_atom_name, KripkeModel, Relation};
use crate::set::StateSet;
use crate::topology::{FiniteTopology, SetOp, TopologyError};

/// A problem with an input document, located by a JSON path or by
/// line/column for syntax errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{location}: {message}")]
pub struct InputError {
    pub location: String,
    pub message: String,
}

impl InputError {
    fn at(location: impl Into<String>, message: impl Into<String>) -> Self {
        InputError {
            location: location.into(),
            message: message.into(),
        }
    }

    fn syntax(e: serde_json::Error) -> Self {
        InputError::at(format!("line {} column {}", e.line(), e.column()), e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub atoms: Vec<String>,
    #[serde(default)]
    pub rel: Vec<(String, String)>,
    pub states: Vec<String>,
    #[serde(default)]
    pub val: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationFile {
    pub pairs: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologyFile {
    pub carrier: Vec<String>,
    pub opens: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubbaseFile {
    pub carrier: Vec<String>,
    pub subbase: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub map: BTreeMap<String, String>,
}

fn state_index(names: &[String], name: &str, location: String) -> Result<usize, InputError> {
    names
        .iter()
        .position(|n| n == name)
        .ok_or_else(|| InputError::at(location, format!("unknown state {name:?}")))
}

fn unique_names(names: &[String], field: &str) -> Result<(), InputError> {
    let mut seen = BTreeSet::new();
    for (i, n) in names.iter().enumerate() {
        if !seen.insert(n) {
            return Err(InputError::at(format!("{field}[{i}]"), format!("duplicate name {n:?}")));
        }
    }
    Ok(())
}

pub fn parse_model(text: &str) -> Result<KripkeModel, InputError> {
    let file: ModelFile = serde_json::from_str(text).map_err(InputError::syntax)?;
    model_from_file(file)
}

pub fn model_from_file(file: ModelFile) -> Result<KripkeModel, InputError> {
    for (i, a) in file.atoms.iter().enumerate() {
        if !valid_atom_name(a) {
            return Err(InputError::at(format!("atoms[{i}]"), format!("invalid atom name {a:?}")));
        }
    }
    unique_names(&file.atoms, "atoms")?;
    unique_names(&file.states, "states")?;
    let names = &file.states;
    let edges = file
        .rel
        .iter()
        .enumerate()
        .map(|(i, (x, y))| {
            Ok((
                state_index(names, x, format!("rel[{i}][0]"))?,
                state_index(names, y, format!("rel[{i}][1]"))?,
            ))
        })
        .collect::<Result<Vec<_>, InputError>>()?;
    let mut val = vec![AtomSet::new(); names.len()];
    for (state, atoms) in &file.val {
        let x = state_index(names, state, format!("val.{state}"))?;
        for (i, a) in atoms.iter().enumerate() {
            if !file.atoms.contains(a) {
                return Err(InputError::at(
                    format!("val.{state}[{i}]"),
                    format!("undeclared atom {a:?}"),
                ));
            }
            val[x].insert(a.clone());
        }
    }
    KripkeModel::new(file.atoms, file.states, edges, val)
        .map_err(|e| InputError::at("model", e.to_string()))
}

pub fn model_to_file(m: &KripkeModel) -> ModelFile {
    ModelFile {
        atoms: m.atoms().to_vec(),
        rel: m
            .edges()
            .iter()
            .map(|&(x, y)| (m.name(x).to_string(), m.name(y).to_string()))
            .collect(),
        states: m.names().to_vec(),
        val: m
            .states()
            .map(|x| {
                let atoms = m.atoms().iter().filter(|a| m.val(x).contains(*a)).cloned().collect();
                (m.name(x).to_string(), atoms)
            })
            .collect(),
    }
}

pub fn model_to_json(m: &KripkeModel) -> Value {
    serde_json::to_value(model_to_file(m)).expect("model files serialize")
}

pub fn parse_relation(text: &str, a: &KripkeModel, b: &KripkeModel) -> Result<Relation, InputError> {
    let file: RelationFile = serde_json::from_str(text).map_err(InputError::syntax)?;
    let pairs = file
        .pairs
        .iter()
        .enumerate()
        .map(|(i, (x, y))| {
            Ok((
                state_index(a.names(), x, format!("pairs[{i}][0]"))?,
                state_index(b.names(), y, format!("pairs[{i}][1]"))?,
            ))
        })
        .collect::<Result<Vec<_>, InputError>>()?;
    Ok(Relation::new(a.len(), b.len(), pairs).expect("indices were resolved against the models"))
}

pub fn relation_to_json(r: &Relation, a: &KripkeModel, b: &KripkeModel) -> Value {
    let pairs: Vec<Value> = r.pairs().map(|(x, y)| json!([a.name(x), b.name(y)])).collect();
    json!({ "pairs": pairs })
}

pub fn set_to_json(s: &StateSet, names: &[String]) -> Value {
    Value::Array(s.iter().map(|x| Value::String(names[x].clone())).collect())
}

fn resolve_set(names: &[String], items: &[String], location: &str) -> Result<StateSet, InputError> {
    let mut s = StateSet::empty(names.len());
    for (j, n) in items.iter().enumerate() {
        s.insert(state_index(names, n, format!("{location}[{j}]"))?);
    }
    Ok(s)
}

fn check_carrier(carrier: &[String], m: &KripkeModel) -> Result<(), InputError> {
    unique_names(carrier, "carrier")?;
    let given: BTreeSet<&String> = carrier.iter().collect();
    let states: BTreeSet<&String> = m.names().iter().collect();
    if given != states {
        return Err(InputError::at("carrier", "carrier must list exactly the model's states"));
    }
    Ok(())
}

fn topology_error(e: TopologyError, m: &KripkeModel) -> InputError {
    match e {
        TopologyError::NotClosed { first, second, op } => {
            let op = match op {
                SetOp::Union => "union",
                SetOp::Intersection => "intersection",
            };
            InputError::at(
                "opens",
                format!(
                    "{op} of {} and {} is not open",
                    set_to_json(&first, m.names()),
                    set_to_json(&second, m.names())
                ),
            )
        }
        other => InputError::at("opens", other.to_string()),
    }
}

/// Reads a topology on the states of `m`, validating the open-set axioms.
pub fn parse_topology(text: &str, m: &KripkeModel) -> Result<FiniteTopology, InputError> {
    let file: TopologyFile = serde_json::from_str(text).map_err(InputError::syntax)?;
    check_carrier(&file.carrier, m)?;
    let opens = file
        .opens
        .iter()
        .enumerate()
        .map(|(i, o)| resolve_set(m.names(), o, &format!("opens[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    FiniteTopology::from_opens(m.len(), opens).map_err(|e| topology_error(e, m))
}

/// Reads a subbase on the states of `m` and generates its topology.
pub fn parse_subbase(text: &str, m: &KripkeModel) -> Result<FiniteTopology, InputError> {
    let file: SubbaseFile = serde_json::from_str(text).map_err(InputError::syntax)?;
    check_carrier(&file.carrier, m)?;
    let subbase = file
        .subbase
        .iter()
        .enumerate()
        .map(|(i, o)| resolve_set(m.names(), o, &format!("subbase[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    FiniteTopology::generate(m.len(), &subbase).map_err(|e| topology_error(e, m))
}

pub fn topology_to_json(t: &FiniteTopology, names: &[String]) -> Value {
    let opens: Vec<Value> = t.opens().map(|o| set_to_json(o, names)).collect();
    json!({ "carrier": names, "opens": opens })
}

/// Reads a total map from the states of `a` to the states of `b`.
pub fn parse_map(text: &str, a: &KripkeModel, b: &KripkeModel) -> Result<Vec<usize>, InputError> {
    let file: MapFile = serde_json::from_str(text).map_err(InputError::syntax)?;
    let mut map = vec![None; a.len()];
    for (from, to) in &file.map {
        let x = state_index(a.names(), from, format!("map.{from}"))?;
        map[x] = Some(state_index(b.names(), to, format!("map.{from}"))?);
    }
    map.iter()
        .enumerate()
        .map(|(x, y)| y.ok_or_else(|| InputError::at("map", format!("state {:?} is unmapped", a.name(x)))))
        .collect()
}

/// Parses a comma-separated list of state names, e.g. `s0,s2`.
pub fn parse_state_list(text: &str, m: &KripkeModel) -> Result<StateSet, InputError> {
    let items: Vec<String> = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect();
    resolve_set(m.names(), &items, "set")
}

#[cfg(test)]
mod tests {
    use super::*;

    const MODEL: &str = r#"{"atoms":["p","q"],"rel":[["s1","s0"],["s0","s1"]],"states":["s0","s1"],"val":{"s0":["p"],"s1":[]}}"#;

    #[test]
    fn model_round_trip_is_byte_exact() {
        let m = parse_model(MODEL).unwrap();
        assert_eq!(m.successors(1), &[0]);
        assert_eq!(serde_json::to_string(&model_to_json(&m)).unwrap(), MODEL);
    }

    #[test]
    fn model_errors_are_located() {
        let bad = MODEL.replace(r#"["s0","s1"]]"#, r#"["s0","s9"]]"#);
        assert_eq!(parse_model(&bad).unwrap_err().location, "rel[1][1]");
        let bad = MODEL.replace(r#""s0":["p"]"#, r#""s0":["r"]"#);
        assert_eq!(parse_model(&bad).unwrap_err().location, "val.s0[0]");
        let err = parse_model("{\"atoms\": [}").unwrap_err();
        assert!(err.location.starts_with("line 1 column"));
        let bad = MODEL.replace(r#""states":["s0","s1"]"#, r#""states":["s0","s0"]"#);
        assert_eq!(parse_model(&bad).unwrap_err().location, "states[1]");
    }

    #[test]
    fn topology_validation_names_the_pair() {
        let m = parse_model(MODEL).unwrap();
        let t = parse_topology(r#"{"carrier":["s1","s0"],"opens":[[],["s0"],["s0","s1"]]}"#, &m).unwrap();
        assert_eq!(t.open_count(), 3);
        let three = parse_model(r#"{"atoms":[],"rel":[],"states":["s0","s1","s2"],"val":{}}"#).unwrap();
        let err = parse_topology(
            r#"{"carrier":["s0","s1","s2"],"opens":[[],["s0"],["s1"],["s0","s1","s2"]]}"#,
            &three,
        )
        .unwrap_err();
        assert_eq!(err.location, "opens");
        assert!(err.message.contains(r#"["s0"] and ["s1"]"#), "{}", err.message);
        let err = parse_topology(r#"{"carrier":["s0"],"opens":[]}"#, &m).unwrap_err();
        assert_eq!(err.location, "carrier");
    }

    #[test]
    fn relations_and_maps() {
        let m = parse_model(MODEL).unwrap();
        let r = parse_relation(r#"{"pairs":[["s0","s1"]]}"#, &m, &m).unwrap();
        assert_eq!(relation_to_json(&r, &m, &m), json!({"pairs": [["s0", "s1"]]}));
        assert_eq!(
            parse_relation(r#"{"pairs":[["s0","x"]]}"#, &m, &m).unwrap_err().location,
            "pairs[0][1]"
        );
        assert_eq!(parse_map(r#"{"map":{"s0":"s1","s1":"s1"}}"#, &m, &m).unwrap(), [1, 1]);
        assert!(parse_map(r#"{"map":{"s0":"s1"}}"#, &m, &m).is_err());
    }
}
