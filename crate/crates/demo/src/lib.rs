//! WebAssembly bindings for the demo page in `www/`.
//!
//! Every export takes and returns JSON strings in the encodings of
//! `choquet_core::io`; errors come back as strings.

use choquet_core::hausdorff::{content, DyadicCellSet, DyadicDomain};
use choquet_core::io::{parse_capacity, parse_cells, parse_family, parse_step_function, rational_json, subset_json};
use choquet_core::nesting::{indicator_sum, lemma_step, nest};
use choquet_core::number::{parse_rational, to_f64};
use choquet_core::{choquet, Extended};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn parse(text: &str) -> Result<Value, String> {
    serde_json::from_str(text).map_err(|e| format!("malformed JSON: {e}"))
}

fn decimal(x: &Extended) -> Value {
    match x {
        Extended::Finite(_) => json!(x.to_f64()),
        Extended::Infinite => json!("inf"),
    }
}

/// The Choquet integral with its layers `(level, gap, set, H(set))`, highest
/// level first.
#[wasm_bindgen]
pub fn layer_cake(capacity: &str, function: &str) -> Result<String, String> {
    let h = parse_capacity(&parse(capacity)?).map_err(|e| e.to_string())?.capacity;
    let f = parse_step_function(&parse(function)?, "$").map_err(|e| e.to_string())?;
    if f.ground() != h.ground() {
        return Err(format!("f has {} values but H lives on {} points", f.ground().size(), h.ground().size()));
    }
    let v = choquet(&f, &h).map_err(|e| e.to_string())?;
    let layers: Vec<Value> = v
        .breakdown
        .iter()
        .map(|l| {
            json!({
                "level": rational_json(&l.level),
                "level_decimal": to_f64(&l.level),
                "gap": rational_json(&l.gap),
                "set": subset_json(l.set),
                "capacity": l.capacity.render(),
                "capacity_decimal": decimal(&l.capacity),
            })
        })
        .collect();
    Ok(json!({ "value": v.value.render(), "decimal": decimal(&v.value), "layers": layers }).to_string())
}

/// The optimal dyadic cover of the given cells.
#[wasm_bindgen]
pub fn dyadic_cover(dim: u32, depth: u32, beta: &str, cells: &str) -> Result<String, String> {
    let domain = DyadicDomain::new(dim, depth).map_err(|e| e.to_string())?;
    let beta = parse_rational(beta).map_err(|e| e.to_string())?;
    let cells = parse_cells(&parse(cells)?, dim as usize).map_err(|e| e.to_string())?;
    let set = DyadicCellSet::new(domain, cells).map_err(|e| e.to_string())?;
    let solution = content(&set, &beta).map_err(|e| e.to_string())?;
    let cubes: Vec<Value> = solution.cubes.iter().map(|q| json!({ "level": q.level, "coords": q.coords })).collect();
    Ok(json!({
        "value": solution.value.to_string(),
        "decimal": solution.value.to_f64(),
        "cubes": cubes,
    })
    .to_string())
}

/// The lemma step and the nested chain of a family of sets.
#[wasm_bindgen]
pub fn nest_chain(sets: &str) -> Result<String, String> {
    let (ground, family) = parse_family(&parse(sets)?, None).map_err(|e| e.to_string())?;
    let lemma = lemma_step(&family).map_err(|e| e.to_string())?;
    let chain = nest(&family).map_err(|e| e.to_string())?;
    let list = |sets: &[choquet_core::SubsetMask]| sets.iter().map(|s| subset_json(*s)).collect::<Vec<_>>();
    Ok(json!({
        "n": ground.size(),
        "input": list(&family),
        "lemma": list(&lemma),
        "nested": list(chain.sets()),
        "indicator_sum": indicator_sum(&family, ground.size()),
    })
    .to_string())
}
