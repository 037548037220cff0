//! JSON encodings.
//!
//! - numbers: a JSON number (decimal literals are read exactly), a `"p/q"`
//!   string, or `"inf"`. Emitted exactly as `"p/q"` strings.
//! - functions: arrays of numbers.
//! - subsets: sorted arrays of indices.
//! - capacities: `{ "n": int, "entries": [ { "set": [..] | "mask": int, "value": .. } ] }`.
//!   Unlisted subsets default to 0 (with a warning); duplicates are rejected.

use serde::Serializer;
use serde_json::{json, Map, Value};

use crate::capacity::Capacity;
use crate::convergence::{FunctionSequence, ScheduleEntry};
use crate::domain::{GroundSet, SignedFunction, StepFunction, SubsetMask};
use crate::error::{Error, Result};
use crate::number::{render, to_f64, Extended, Rational};

pub fn ser_rational<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&render(x))
}

fn at(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{path}: {msg}"))
}

pub fn rational_json(x: &Rational) -> Value {
    Value::String(render(x))
}

pub fn extended_json(x: &Extended) -> Value {
    Value::String(x.render())
}

/// `{ "exact": "p/q", "decimal": 1.5 }`.
pub fn exact_with_decimal(x: &Extended) -> Value {
    let decimal = match x {
        Extended::Finite(r) => json!(to_f64(r)),
        Extended::Infinite => json!("inf"),
    };
    json!({ "exact": x.render(), "decimal": decimal })
}

pub fn parse_extended_value(value: &Value, path: &str) -> Result<Extended> {
    match value {
        Value::Number(n) => n.to_string().parse::<Extended>().map_err(|e| at(path, e)),
        Value::String(s) => s.parse::<Extended>().map_err(|e| at(path, e)),
        other => Err(at(path, format!("expected a number, \"p/q\" or \"inf\", found {other}"))),
    }
}

pub fn parse_rational_value(value: &Value, path: &str) -> Result<Rational> {
    match parse_extended_value(value, path)? {
        Extended::Finite(x) => Ok(x),
        Extended::Infinite => Err(at(path, "infinite value not allowed here")),
    }
}

fn array<'a>(value: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    value.as_array().ok_or_else(|| at(path, "expected an array"))
}

fn index(value: &Value, path: &str) -> Result<usize> {
    value.as_u64().map(|i| i as usize).ok_or_else(|| at(path, "expected a nonnegative integer"))
}

pub fn parse_step_function(value: &Value, path: &str) -> Result<StepFunction> {
    let items = array(value, path)?;
    let values = items
        .iter()
        .enumerate()
        .map(|(i, v)| parse_extended_value(v, &format!("{path}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    StepFunction::new(values).map_err(|e| at(path, e))
}

pub fn parse_signed_function(value: &Value, path: &str) -> Result<SignedFunction> {
    let items = array(value, path)?;
    let values = items
        .iter()
        .enumerate()
        .map(|(i, v)| parse_rational_value(v, &format!("{path}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    SignedFunction::new(values).map_err(|e| at(path, e))
}

pub fn step_function_json(f: &StepFunction) -> Value {
    Value::Array(f.values().iter().map(extended_json).collect())
}

pub fn signed_function_json(f: &SignedFunction) -> Value {
    Value::Array(f.values().iter().map(rational_json).collect())
}

pub fn parse_subset(value: &Value, ground: GroundSet, path: &str) -> Result<SubsetMask> {
    let items = array(value, path)?;
    let mut mask = SubsetMask::EMPTY;
    for (i, item) in items.iter().enumerate() {
        let x = index(item, &format!("{path}[{i}]"))?;
        if x >= ground.size() {
            return Err(at(&format!("{path}[{i}]"), format!("index {x} outside {} points", ground.size())));
        }
        mask = mask.with(x);
    }
    Ok(mask)
}

pub fn subset_json(mask: SubsetMask) -> Value {
    Value::Array(mask.iter().map(|x| json!(x)).collect())
}

/// A parsed capacity plus loader warnings.
#[derive(Clone, Debug)]
pub struct LoadedCapacity {
    pub capacity: Capacity,
    pub warnings: Vec<String>,
}

pub fn parse_capacity(value: &Value) -> Result<LoadedCapacity> {
    let obj = value.as_object().ok_or_else(|| at("$", "expected an object"))?;
    let n = obj.get("n").ok_or_else(|| at("$.n", "missing"))?;
    let ground = GroundSet::new(index(n, "$.n")?).map_err(|e| at("$.n", e))?;
    let entries = array(obj.get("entries").ok_or_else(|| at("$.entries", "missing"))?, "$.entries")?;
    let mut table: Vec<Option<Extended>> = vec![None; ground.subset_count()];
    for (i, entry) in entries.iter().enumerate() {
        let path = format!("$.entries[{i}]");
        let entry = entry.as_object().ok_or_else(|| at(&path, "expected an object"))?;
        let from_set = entry.get("set").map(|s| parse_subset(s, ground, &format!("{path}.set"))).transpose()?;
        let from_mask = entry
            .get("mask")
            .map(|m| {
                let bits = index(m, &format!("{path}.mask"))?;
                u32::try_from(bits)
                    .map_err(|_| at(&format!("{path}.mask"), "mask too large"))
                    .and_then(|b| ground.mask(b).map_err(|e| at(&format!("{path}.mask"), e)))
            })
            .transpose()?;
        let mask = match (from_set, from_mask) {
            (Some(a), Some(b)) if a != b => return Err(at(&path, "\"set\" and \"mask\" disagree")),
            (Some(a), _) | (None, Some(a)) => a,
            (None, None) => return Err(at(&path, "needs \"set\" or \"mask\"")),
        };
        let v = parse_extended_value(entry.get("value").ok_or_else(|| at(&path, "missing \"value\""))?, &format!("{path}.value"))?;
        if v.is_negative() {
            return Err(at(&format!("{path}.value"), "capacity values must be nonnegative"));
        }
        let slot = &mut table[mask.index()];
        if slot.is_some() {
            return Err(at(&path, format!("duplicate entry for {mask}")));
        }
        *slot = Some(v);
    }
    let missing = table.iter().filter(|v| v.is_none()).count();
    let mut warnings = Vec::new();
    if missing > 0 {
        warnings.push(format!("{missing} unspecified subsets default to 0"));
    }
    let capacity = Capacity::new(ground, table.into_iter().map(Option::unwrap_or_default).collect())?;
    Ok(LoadedCapacity { capacity, warnings })
}

pub fn capacity_json(h: &Capacity) -> Value {
    let entries: Vec<Value> = h
        .ground()
        .subsets()
        .map(|a| json!({ "set": subset_json(a), "mask": a.bits(), "value": extended_json(h.value(a)) }))
        .collect();
    json!({ "n": h.ground().size(), "entries": entries })
}

/// A family of subsets: either `[[..], ..]` or `{ "n": int, "sets": [[..], ..] }`.
/// Without `n`, the ground set is `fallback` or else the smallest one holding
/// every index.
pub fn parse_family(value: &Value, fallback: Option<GroundSet>) -> Result<(GroundSet, Vec<SubsetMask>)> {
    let (declared, sets, path) = match value {
        Value::Object(obj) => {
            let n = obj.get("n").map(|n| index(n, "$.n")).transpose()?;
            (n, obj.get("sets").ok_or_else(|| at("$.sets", "missing"))?, "$.sets")
        }
        other => (None, other, "$"),
    };
    let items = array(sets, path)?;
    let largest = items
        .iter()
        .filter_map(Value::as_array)
        .flatten()
        .filter_map(Value::as_u64)
        .max()
        .map(|m| m as usize + 1)
        .unwrap_or(1);
    let ground = match (declared, fallback) {
        (Some(n), _) => GroundSet::new(n).map_err(|e| at("$.n", e))?,
        (None, Some(g)) => g,
        (None, None) => GroundSet::new(largest).map_err(|e| at(path, e))?,
    };
    let family = items
        .iter()
        .enumerate()
        .map(|(i, s)| parse_subset(s, ground, &format!("{path}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    Ok((ground, family))
}

pub fn parse_sequence(value: &Value) -> Result<FunctionSequence> {
    let obj = value.as_object().ok_or_else(|| at("$", "expected an object"))?;
    let terms = array(obj.get("terms").ok_or_else(|| at("$.terms", "missing"))?, "$.terms")?
        .iter()
        .enumerate()
        .map(|(i, t)| parse_signed_function(t, &format!("$.terms[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let limit = parse_signed_function(obj.get("limit").ok_or_else(|| at("$.limit", "missing"))?, "$.limit")?;
    let ground = limit.ground();
    for (i, t) in terms.iter().enumerate() {
        if t.ground() != ground {
            return Err(at(&format!("$.terms[{i}]"), format!("expected {} values", ground.size())));
        }
    }
    let schedule = match obj.get("schedule") {
        None | Some(Value::Null) => Vec::new(),
        Some(s) => array(s, "$.schedule")?
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let path = format!("$.schedule[{i}]");
                let eps = parse_rational_value(e.get("eps").ok_or_else(|| at(&path, "missing \"eps\""))?, &format!("{path}.eps"))?;
                let set = parse_subset(e.get("set").ok_or_else(|| at(&path, "missing \"set\""))?, ground, &format!("{path}.set"))?;
                Ok(ScheduleEntry { eps, set })
            })
            .collect::<Result<Vec<_>>>()?,
    };
    FunctionSequence::new(terms, limit, schedule)
}

pub fn sequence_json(seq: &FunctionSequence) -> Value {
    let schedule: Vec<Value> = seq
        .schedule()
        .iter()
        .map(|e| json!({ "eps": rational_json(&e.eps), "set": subset_json(e.set) }))
        .collect();
    let mut obj = Map::new();
    obj.insert("terms".into(), Value::Array(seq.terms().iter().map(signed_function_json).collect()));
    obj.insert("limit".into(), signed_function_json(seq.limit()));
    obj.insert("schedule".into(), Value::Array(schedule));
    Value::Object(obj)
}

/// Dyadic cell coordinates: `[[x, y, ..], ..]`, or bare integers when `d = 1`.
pub fn parse_cells(value: &Value, dimension: usize) -> Result<Vec<Vec<u64>>> {
    array(value, "$")?
        .iter()
        .enumerate()
        .map(|(i, cell)| {
            let path = format!("$[{i}]");
            match cell {
                Value::Number(_) if dimension == 1 => Ok(vec![index(cell, &path)? as u64]),
                Value::Array(coords) => {
                    if coords.len() != dimension {
                        return Err(at(&path, format!("expected {dimension} coordinates")));
                    }
                    coords.iter().enumerate().map(|(j, c)| index(c, &format!("{path}[{j}]")).map(|c| c as u64)).collect()
                }
                _ => Err(at(&path, "expected a coordinate tuple")),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::{int, rat};

    #[test]
    fn capacity_round_trip() {
        let h = Capacity::new(
            GroundSet::new(2).unwrap(),
            vec![Extended::zero(), Extended::Finite(rat(1, 3)), Extended::Infinite, Extended::from_int(2)],
        )
        .unwrap();
        let loaded = parse_capacity(&capacity_json(&h)).unwrap();
        assert_eq!(loaded.capacity, h);
        assert!(loaded.warnings.is_empty());
    }

    #[test]
    fn capacity_defaults_and_duplicates() {
        let v: Value = serde_json::from_str(r#"{"n": 2, "entries": [{"set": [0, 1], "value": 2.5}, {"mask": 1, "value": "1/2"}]}"#).unwrap();
        let loaded = parse_capacity(&v).unwrap();
        assert_eq!(loaded.capacity.value(SubsetMask::from_bits(3)), &Extended::Finite(rat(5, 2)));
        assert_eq!(loaded.capacity.value(SubsetMask::from_bits(2)), &Extended::zero());
        assert_eq!(loaded.warnings.len(), 1);

        let dup: Value = serde_json::from_str(r#"{"n": 1, "entries": [{"set": [0], "value": 1}, {"mask": 1, "value": 2}]}"#).unwrap();
        assert!(parse_capacity(&dup).unwrap_err().to_string().contains("duplicate"));

        let bad: Value = serde_json::from_str(r#"{"n": 1, "entries": [{"set": [3], "value": 1}]}"#).unwrap();
        assert!(parse_capacity(&bad).unwrap_err().to_string().contains("$.entries[0].set[0]"));
    }

    #[test]
    fn decimals_are_exact() {
        let v: Value = serde_json::from_str("[0.1, 3, \"inf\", \"7/3\"]").unwrap();
        let f = parse_step_function(&v, "$").unwrap();
        assert_eq!(f.value(0), &Extended::Finite(rat(1, 10)));
        assert_eq!(f.value(1), &Extended::Finite(int(3)));
        assert!(f.value(2).is_infinite());
        assert_eq!(step_function_json(&f), serde_json::json!(["1/10", "3", "inf", "7/3"]));
    }

    #[test]
    fn sequence_round_trip() {
        let v: Value = serde_json::from_str(
            r#"{"terms": [[1, 0], [0.5, 0]], "limit": [0, 0], "schedule": [{"eps": 0.25, "set": [0]}]}"#,
        )
        .unwrap();
        let seq = parse_sequence(&v).unwrap();
        assert_eq!(seq.schedule()[0].eps, rat(1, 4));
        assert_eq!(parse_sequence(&sequence_json(&seq)).unwrap(), seq);
    }

    #[test]
    fn family_forms() {
        let v: Value = serde_json::from_str("[[0, 1], [1, 2]]").unwrap();
        let (g, sets) = parse_family(&v, None).unwrap();
        assert_eq!(g.size(), 3);
        assert_eq!(sets, vec![SubsetMask::from_bits(0b011), SubsetMask::from_bits(0b110)]);
        let v: Value = serde_json::from_str(r#"{"n": 5, "sets": [[4]]}"#).unwrap();
        assert_eq!(parse_family(&v, None).unwrap().0.size(), 5);
    }

    #[test]
    fn cells_forms() {
        let v: Value = serde_json::from_str("[0, 3]").unwrap();
        assert_eq!(parse_cells(&v, 1).unwrap(), vec![vec![0], vec![3]]);
        let v: Value = serde_json::from_str("[[0, 1]]").unwrap();
        assert!(parse_cells(&v, 1).is_err());
        assert_eq!(parse_cells(&v, 2).unwrap(), vec![vec![0, 1]]);
    }
}
