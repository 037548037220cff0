//! JSON views of the core report types.
//!
//! Exact values are `"p/q"` strings; `"decimal"` fields are renderings only.

use choquet_core::capacity::{AxiomReport, Witness};
use choquet_core::convergence::{ConvergenceAudit, FatouCounterexample, InequalityCheck, SublinearityCounterexample};
use choquet_core::duality::{AdditiveMeasure, DualityReport, UnboundednessOutcome};
use choquet_core::hausdorff::{CoverSolution, DyadicCube};
use choquet_core::integral::{EquivalenceReport, Gap, IntegralValue};
use choquet_core::io::{exact_with_decimal, extended_json, rational_json, step_function_json, subset_json};
use choquet_core::nesting::CapacitySumAudit;
use choquet_core::number::{to_f64, Extended};
use serde_json::{json, Value};

pub fn gap(g: &Gap) -> Value {
    serde_json::to_value(g).expect("gap serializes")
}

pub fn witness(w: &Witness) -> Value {
    json!({
        "sets": w.sets.iter().map(|s| subset_json(*s)).collect::<Vec<_>>(),
        "values": w.values.iter().map(extended_json).collect::<Vec<_>>(),
    })
}

pub fn axiom_report(r: &AxiomReport) -> Value {
    json!({
        "axiom": r.axiom.name(),
        "holds": r.holds,
        "witness": r.witness.as_ref().map(witness),
        "note": r.note,
    })
}

pub fn integral(v: &IntegralValue, breakdown: bool) -> Value {
    let mut out = exact_with_decimal(&v.value);
    out["value"] = extended_json(&v.value);
    if breakdown {
        out["breakdown"] = v
            .breakdown
            .iter()
            .map(|l| {
                json!({
                    "level": rational_json(&l.level),
                    "gap": rational_json(&l.gap),
                    "set": subset_json(l.set),
                    "capacity": extended_json(&l.capacity),
                })
            })
            .collect();
        out["infinite_part"] = v.infinite_part.as_ref().map_or(Value::Null, extended_json);
    }
    out
}

pub fn measure(mu: &AdditiveMeasure) -> Value {
    mu.masses().iter().map(rational_json).collect()
}

pub fn duality(r: &DualityReport) -> Value {
    json!({
        "method": r.method,
        "choquet_value": exact_with_decimal(&r.choquet_value),
        "dual_value": exact_with_decimal(&r.dual_value),
        "optimal_measure": r.optimal_measure.as_ref().map(measure),
        "gap": gap(&r.gap),
        "dominated": r.dominated,
        "approach": r.approach,
    })
}

pub fn unboundedness(outcome: &UnboundednessOutcome) -> Value {
    match outcome {
        UnboundednessOutcome::Delegated(r) => json!({ "outcome": "finite", "report": duality(r) }),
        UnboundednessOutcome::Diverging { level, superlevel, steps } => json!({
            "outcome": "diverging",
            "level": rational_json(level),
            "superlevel": subset_json(*superlevel),
            "steps": steps.iter().map(|s| json!({
                "target": rational_json(&s.target),
                "set": subset_json(s.set),
                "capacity": rational_json(&s.capacity),
                "dual_value": rational_json(&s.dual_value),
                "contracted_integral": rational_json(&s.contracted_integral),
                "lower_bound": rational_json(&s.lower_bound),
                "holds": s.holds,
            })).collect::<Vec<_>>(),
        }),
    }
}

pub fn equivalence(r: &EquivalenceReport) -> Value {
    let pair = |p: &Option<(choquet_core::StepFunction, choquet_core::StepFunction)>| {
        p.as_ref().map(|(f, g)| json!({ "f": step_function_json(f), "g": step_function_json(g) }))
    };
    json!({
        "value_bound": r.value_bound,
        "denominator": r.denominator,
        "pairs": r.pairs.to_string(),
        "max_gap": r.max_gap.as_ref().map(rational_json),
        "argmax": pair(&r.argmax),
        "infinite_violation": pair(&r.infinite_violation),
        "indeterminate_pairs": r.indeterminate_pairs.to_string(),
        "sublinear_on_grid": r.sublinear_on_grid(),
        "strongly_subadditive": r.strongly_subadditive,
        "strong_subadditivity_witness": r.strong_subadditivity_witness.map(|(e, f)| json!([subset_json(e), subset_json(f)])),
        "consistent": r.consistent,
    })
}

pub fn sums(a: &CapacitySumAudit) -> Value {
    json!({
        "original": extended_json(&a.original),
        "lemma": extended_json(&a.lemma),
        "nested": extended_json(&a.nested_sum),
        "holds": a.holds,
    })
}

pub fn cube(q: &DyadicCube) -> Value {
    json!({ "level": q.level, "coords": q.coords })
}

pub fn cover(s: &CoverSolution) -> Value {
    json!({
        "beta": s.beta.to_string(),
        "value": s.value.to_string(),
        "exact": s.value.exact_rational().as_ref().map(rational_json),
        "decimal": s.value.to_f64(),
        "cubes": s.cubes.iter().map(cube).collect::<Vec<_>>(),
        "exceeds_dimension": s.exceeds_dimension,
    })
}

pub fn check(c: &InequalityCheck) -> Value {
    json!({
        "name": c.name,
        "kind": c.kind,
        "lhs": extended_json(&c.lhs),
        "rhs": extended_json(&c.rhs),
        "holds": c.holds,
    })
}

pub fn audit(a: &ConvergenceAudit) -> Value {
    json!({
        "qu_verdict": a.qu_verdict,
        "minimal_bad_set": subset_json(a.minimal_bad_set),
        "bad_capacity": extended_json(&a.bad_capacity),
        "eps": rational_json(&a.eps),
        "refutation": a.refutation.as_ref().map(|r| json!({
            "point": r.point,
            "eta": rational_json(&r.eta),
            "steps": r.steps,
        })),
        "inequality_results": a.inequality_results.iter().map(check).collect::<Vec<_>>(),
        "named_sets": a.named_sets.iter().map(|(name, s)| json!({ "name": name, "set": subset_json(*s) })).collect::<Vec<_>>(),
        "envelope": a.envelope.iter().map(extended_json).collect::<Vec<_>>(),
        "constructed": a.constructed.as_ref().map(step_function_json),
        "all_guaranteed_hold": a.all_guaranteed_hold(),
    })
}

pub fn fatou_counterexample(c: &FatouCounterexample) -> Value {
    json!({
        "set": subset_json(c.set),
        "null_set": subset_json(c.null_set),
        "limit_integral": extended_json(&c.limit_integral),
        "term_integral": extended_json(&c.term_integral),
    })
}

pub fn sublinearity_counterexample(c: &SublinearityCounterexample) -> Value {
    json!({
        "terms": c.terms.iter().map(step_function_json).collect::<Vec<_>>(),
        "sum": step_function_json(&c.sum),
        "check": check(&c.check),
    })
}

/// Flattens JSON into `path = value` lines for `--format table`.
pub fn table(value: &Value) -> String {
    let mut lines = Vec::new();
    flatten(value, String::new(), &mut lines);
    lines.join("\n")
}

fn flatten(value: &Value, path: String, out: &mut Vec<String>) {
    match value {
        Value::Object(map) if !map.is_empty() => {
            for (k, v) in map {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                flatten(v, p, out);
            }
        }
        Value::Array(items) if items.iter().any(|v| v.is_object() || v.is_array()) => {
            for (i, v) in items.iter().enumerate() {
                flatten(v, format!("{path}[{i}]"), out);
            }
        }
        Value::String(s) => out.push(format!("{path} = {s}")),
        other => out.push(format!("{path} = {other}")),
    }
}

pub fn decimal(x: &Extended) -> f64 {
    match x {
        Extended::Finite(r) => to_f64(r),
        Extended::Infinite => f64::INFINITY,
    }
}
