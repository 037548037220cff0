use std::path::Path;

use choquet_core::capacity::{check_axiom, generate_capacity, with_infinite_points, Axiom, Capacity, CapacityKind};
use choquet_core::convergence::{
    converse_dct_audit, countable_sublinearity_audit, countable_sublinearity_search, dct_harness, fatou_counterexample_search,
    fatou_harness, qu_audit, FunctionSequence, Tolerance,
};
use choquet_core::domain::{GroundSet, StepFunction, SubsetMask};
use choquet_core::duality::{dual_value, semifinite_unboundedness_demo, DualMethod, DualityReport, UnboundednessOutcome};
use choquet_core::hausdorff::{content, cover_certificate_check, export_capacity, DyadicCellSet, DyadicDomain};
use choquet_core::integral::{choquet, verify_sublinearity_equivalence, Gap};
use choquet_core::io::{capacity_json, parse_capacity, parse_cells, parse_family, parse_sequence, parse_step_function, subset_json};
use choquet_core::nesting::{capacity_sum_audit, count_superlevels, indicator_sum, lemma_step, nest as nest_family};
use choquet_core::number::{int, Extended};
use serde_json::{json, Value};

use crate::render;
use crate::{
    budget, in_file, read_json, CapacityCommand, CliError, CliResult, ConvergeArgs, DualArgs, HausdorffArgs, IntegrateArgs, Kind,
    Method, Mode, NestArgs, Report,
};

pub(crate) fn load_capacity(path: &Path) -> CliResult<Capacity> {
    let loaded = in_file(path, parse_capacity(&read_json(path)?))?;
    for w in &loaded.warnings {
        eprintln!("warning: {}: {w}", path.display());
    }
    Ok(loaded.capacity)
}

fn load_function(path: &Path, ground: GroundSet) -> CliResult<StepFunction> {
    let f = in_file(path, parse_step_function(&read_json(path)?, "$"))?;
    in_file(path, f.ground().same_size(ground))?;
    Ok(f)
}

trait SameSize {
    fn same_size(self, other: GroundSet) -> choquet_core::Result<()>;
}

impl SameSize for GroundSet {
    fn same_size(self, other: GroundSet) -> choquet_core::Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(choquet_core::Error::UniverseMismatch { left: self.size(), right: other.size() })
        }
    }
}

pub fn integrate(args: &IntegrateArgs) -> CliResult<Report> {
    let h = load_capacity(&args.capacity)?;
    let f = load_function(&args.function, h.ground())?;
    let value = choquet(&f, &h)?;
    let plain = (!args.breakdown).then(|| value.value.render());
    Ok(Report { value: render::integral(&value, args.breakdown), plain, violated: false })
}

fn kind(k: Kind, m: usize) -> CapacityKind {
    match k {
        Kind::RandomMonotone => CapacityKind::RandomMonotone,
        Kind::RandomSubmodular => CapacityKind::RandomSubmodularMonotone,
        Kind::RandomSubadditive => CapacityKind::RandomSubadditiveMonotone,
        Kind::Additive => CapacityKind::Additive,
        Kind::Threshold => CapacityKind::Threshold { m },
        Kind::BoundedThreshold => CapacityKind::BoundedThreshold { m },
    }
}

/// Axioms in `inherited` that held for `before` but fail for `after`.
fn lost_axioms(before: &Capacity, after: &Capacity, inherited: &[Axiom]) -> Vec<Value> {
    inherited
        .iter()
        .filter(|&&a| check_axiom(before, a).holds)
        .map(|&a| check_axiom(after, a))
        .filter(|r| !r.holds)
        .map(|r| render::axiom_report(&r))
        .collect()
}

pub fn capacity(cmd: &CapacityCommand) -> CliResult<Report> {
    match cmd {
        CapacityCommand::Check { capacity, axiom } => {
            let h = load_capacity(capacity)?;
            let reports: Vec<Value> = if axiom.is_empty() { Axiom::ALL.to_vec() } else { axiom.clone() }
                .into_iter()
                .map(|a| render::axiom_report(&check_axiom(&h, a)))
                .collect();
            let value = match <[Value; 1]>::try_from(reports) {
                Ok([single]) => single,
                Err(all) => json!({ "n": h.ground().size(), "reports": all }),
            };
            Ok(Report::ok(value))
        }
        CapacityCommand::Contract { capacity, set } => {
            let h = load_capacity(capacity)?;
            let s = h.ground().subset(set.iter().copied())?;
            let c = h.contract(s)?;
            let lost = lost_axioms(&h, &c, &[Axiom::Monotone, Axiom::StronglySubadditive]);
            inherit_report(c, lost)
        }
        CapacityCommand::Regularize { capacity } => {
            let h = load_capacity(capacity)?;
            let r = h.regularize();
            let mut lost = lost_axioms(&h, &r, &[Axiom::FiniteSubadditive, Axiom::CountableSubadditive, Axiom::StronglySubadditive]);
            let semifinite = check_axiom(&r, Axiom::Semifinite);
            if !semifinite.holds {
                lost.push(render::axiom_report(&semifinite));
            }
            if check_axiom(&h, Axiom::Monotone).holds {
                if let Some(a) = h.ground().subsets().find(|&a| h.value(a).is_finite() && h.value(a) != r.value(a)) {
                    lost.push(json!({ "changed_finite_value": subset_json(a), "before": h.value(a).render(), "after": r.value(a).render() }));
                }
            }
            inherit_report(r, lost)
        }
        CapacityCommand::Generate { kind: k, n, seed, m, infinite } => {
            let ground = GroundSet::new(*n)?;
            let mut h = generate_capacity(kind(*k, *m), ground, *seed);
            if !infinite.is_empty() {
                h = with_infinite_points(&h, ground.subset(infinite.iter().copied())?);
            }
            Ok(Report::ok(capacity_json(&h)))
        }
        CapacityCommand::Sublinear { capacity, m, k } => {
            let h = load_capacity(capacity)?;
            let report = verify_sublinearity_equivalence(&h, *m, *k, budget()?)?;
            Ok(Report::checked(render::equivalence(&report), !report.consistent))
        }
    }
}

/// A transformed capacity, or the axioms it failed to inherit.
fn inherit_report(h: Capacity, lost: Vec<Value>) -> CliResult<Report> {
    if lost.is_empty() {
        Ok(Report::ok(capacity_json(&h)))
    } else {
        Ok(Report::checked(json!({ "capacity": capacity_json(&h), "not_inherited": lost }), true))
    }
}

fn family_json(sets: &[SubsetMask]) -> Value {
    sets.iter().map(|s| subset_json(*s)).collect()
}

pub fn nest(args: &NestArgs) -> CliResult<Report> {
    let h = args.capacity.as_deref().map(load_capacity).transpose()?;
    let (ground, sets) = in_file(&args.sets, parse_family(&read_json(&args.sets)?, h.as_ref().map(Capacity::ground)))?;
    if let Some(h) = &h {
        in_file(&args.sets, ground.same_size(h.ground()))?;
    }
    let lemma = lemma_step(&sets)?;
    let chain = nest_family(&sets)?;
    let size = ground.size();
    let top = *lemma.last().expect("nonempty family");
    let mut failures = Vec::new();
    if !lemma.iter().all(|d| d.is_subset_of(top)) {
        failures.push("lemma output not contained in its last set");
    }
    if indicator_sum(&lemma, size) != indicator_sum(&sets, size) || indicator_sum(chain.sets(), size) != indicator_sum(&sets, size) {
        failures.push("indicator sum changed");
    }
    if !chain.is_nested() {
        failures.push("output is not nested");
    }
    if chain.sets() != count_superlevels(&sets).as_slice() {
        failures.push("chain differs from the superlevel sets of the indicator sum");
    }
    let sums = match &h {
        None => Value::Null,
        Some(h) if check_axiom(h, Axiom::StronglySubadditive).holds => {
            let audit = capacity_sum_audit(&sets, h)?;
            if !audit.holds {
                failures.push("capacity sums increased under a strongly subadditive capacity");
            }
            let mut v = render::sums(&audit);
            v["guaranteed"] = json!(true);
            v
        }
        Some(h) => {
            let total = |family: &[SubsetMask]| family.iter().map(|s| h.value(*s).clone()).sum::<Extended>();
            let (original, lemma_sum, nested) = (total(&sets), total(&lemma), total(chain.sets()));
            json!({
                "original": original.render(),
                "lemma": lemma_sum.render(),
                "nested": nested.render(),
                "holds": nested <= lemma_sum && lemma_sum <= original,
                "guaranteed": false,
            })
        }
    };
    let value = json!({
        "n": size,
        "input": family_json(&sets),
        "lemma": family_json(&lemma),
        "nested": family_json(chain.sets()),
        "indicator_sum": indicator_sum(&sets, size),
        "sums": sums,
        "failures": failures,
    });
    Ok(Report::checked(value, !failures.is_empty()))
}

/// Theorem-level duality failures: weak duality for monotone finitely
/// subadditive `H`, and a zero gap for monotone strongly subadditive finite `H`.
fn duality_failures(h: &Capacity, reports: &[&DualityReport]) -> Vec<String> {
    let monotone = check_axiom(h, Axiom::Monotone).holds;
    let weak = monotone && check_axiom(h, Axiom::FiniteSubadditive).holds;
    let strong = monotone && h.is_finite() && check_axiom(h, Axiom::StronglySubadditive).holds;
    let mut failures = Vec::new();
    for r in reports {
        let method = serde_json::to_value(r.method).expect("method serializes");
        let method = method.as_str().unwrap_or_default();
        if weak && r.dominated && matches!(r.gap, Gap::Finite(ref g) if *g < int(0)) {
            failures.push(format!("{method}: a dominated measure beats the Choquet integral"));
        }
        if strong && r.gap != Gap::Finite(int(0)) {
            failures.push(format!("{method}: nonzero gap under a strongly subadditive capacity"));
        }
        if strong && !r.dominated {
            failures.push(format!("{method}: optimal measure is not dominated"));
        }
    }
    failures
}

pub fn dual(args: &DualArgs) -> CliResult<Report> {
    let h = load_capacity(&args.capacity)?;
    let f = load_function(&args.function, h.ground())?;
    let (mut value, mut failures) = match args.method {
        Method::Greedy | Method::Lp => {
            let method = if args.method == Method::Greedy { DualMethod::Greedy } else { DualMethod::ExactLp };
            let r = dual_value(&f, &h, method)?;
            (render::duality(&r), duality_failures(&h, &[&r]))
        }
        Method::Both => {
            let greedy = dual_value(&f, &h, DualMethod::Greedy)?;
            let lp = dual_value(&f, &h, DualMethod::ExactLp)?;
            let mut failures = duality_failures(&h, &[&greedy, &lp]);
            let agree = greedy.dual_value == lp.dual_value;
            let strong = h.is_finite() && check_axiom(&h, Axiom::Monotone).holds && check_axiom(&h, Axiom::StronglySubadditive).holds;
            if strong && !agree {
                failures.push("greedy and LP values differ under a strongly subadditive capacity".into());
            }
            (json!({ "greedy": render::duality(&greedy), "lp": render::duality(&lp), "agree": agree }), failures)
        }
    };
    if !args.targets.is_empty() {
        let outcome = semifinite_unboundedness_demo(&f, &h, &args.targets)?;
        if let UnboundednessOutcome::Diverging { steps, .. } = &outcome {
            if steps.iter().any(|s| !s.holds) {
                failures.push("a divergence step fell below its target".into());
            }
        }
        value = json!({ "duality": value, "unboundedness": render::unboundedness(&outcome) });
    }
    if !failures.is_empty() {
        value = json!({ "report": value, "failures": failures });
    }
    let violated = !failures.is_empty();
    Ok(Report::checked(value, violated))
}

pub fn hausdorff(args: &HausdorffArgs) -> CliResult<Report> {
    let domain = DyadicDomain::new(args.dim, args.depth)?;
    let cells = in_file(&args.cells, parse_cells(&read_json(&args.cells)?, args.dim as usize))?;
    let set = in_file(&args.cells, DyadicCellSet::new(domain, cells))?;
    let solution = content(&set, &args.beta)?;
    let mut failures = Vec::new();
    if !cover_certificate_check(&set, &args.beta, &solution) {
        failures.push("the reported cover does not certify its value".to_owned());
    }
    let mut value = json!({ "dimension": args.dim, "depth": args.depth, "cells": set.cells().len(), "cover": render::cover(&solution) });
    if let Some(path) = &args.export {
        let exported = export_capacity(domain, &args.beta)?;
        let reports: Vec<_> = [Axiom::Monotone, Axiom::FiniteSubadditive, Axiom::StronglySubadditive]
            .into_iter()
            .map(|a| exported.check_axiom(a))
            .collect();
        for r in reports.iter().filter(|r| !r.holds) {
            failures.push(format!("exported content fails {}", r.axiom));
        }
        let text = serde_json::to_string_pretty(&capacity_json(&exported.capacity)).expect("JSON values serialize");
        std::fs::write(path, text + "\n").map_err(|e| CliError(format!("{}: {e}", path.display())))?;
        let order: Vec<Vec<u64>> = (0..domain.cell_count()).map(|i| domain.cell_coords(i)).collect();
        value["export"] = json!({
            "path": path.display().to_string(),
            "exact": exported.exact,
            "cell_order": order,
            "axioms": reports.iter().map(render::axiom_report).collect::<Vec<_>>(),
        });
    }
    value["failures"] = json!(failures);
    Ok(Report::checked(value, !failures.is_empty()))
}

fn envelope(seq: &FunctionSequence) -> CliResult<StepFunction> {
    let mut values = seq.limit().abs().values().to_vec();
    for t in seq.terms() {
        for (v, a) in values.iter_mut().zip(t.abs().values()) {
            if a > v {
                *v = a.clone();
            }
        }
    }
    Ok(StepFunction::new(values)?)
}

fn nonnegative(seq: &FunctionSequence) -> CliResult<(Vec<StepFunction>, StepFunction)> {
    let convert = |f: &choquet_core::SignedFunction, what: String| {
        let abs = f.abs();
        if abs.values().iter().zip(f.values()).all(|(a, v)| a.finite() == Some(v)) {
            Ok(abs)
        } else {
            Err(CliError(format!("countable mode needs nonnegative functions; {what} has a negative value")))
        }
    };
    let terms = seq.terms().iter().enumerate().map(|(i, t)| convert(t, format!("term {i}"))).collect::<CliResult<_>>()?;
    Ok((terms, convert(seq.limit(), "the sum".into())?))
}

pub fn converge(args: &ConvergeArgs) -> CliResult<Report> {
    let h = load_capacity(&args.capacity)?;
    let seq = in_file(&args.sequence, parse_sequence(&read_json(&args.sequence)?))?;
    in_file(&args.sequence, seq.ground().same_size(h.ground()))?;
    let tol = Tolerance::new(args.eta.clone(), args.eps.clone(), args.tail);
    let k = args.k.as_ref();
    let hypothesis = |e: &choquet_core::Error| matches!(e, choquet_core::Error::Hypothesis(_));
    let audit = match args.mode {
        Mode::Qu => qu_audit(&seq, &h, &tol)?,
        Mode::Fatou => match fatou_harness(&seq, &h, &tol, k) {
            Err(e) if args.search && hypothesis(&e) => {
                let found = fatou_counterexample_search(&h);
                return Ok(Report::ok(json!({ "hypothesis": e.to_string(), "counterexample": found.as_ref().map(render::fatou_counterexample) })));
            }
            other => other?,
        },
        Mode::Dct => {
            let dominator = match &args.dominator {
                Some(path) => load_function(path, h.ground())?,
                None => envelope(&seq)?,
            };
            dct_harness(&seq, &dominator, &h, &tol, k)?
        }
        Mode::Converse => converse_dct_audit(&seq, &h)?,
        Mode::Countable => {
            let (terms, sum) = nonnegative(&seq)?;
            return match countable_sublinearity_audit(&terms, &sum, &h) {
                Ok(check) => Ok(Report::checked(json!({ "check": render::check(&check) }), check.is_violation())),
                Err(e) if args.search && hypothesis(&e) => {
                    let found = countable_sublinearity_search(&h)?;
                    Ok(Report::ok(json!({ "hypothesis": e.to_string(), "counterexample": found.as_ref().map(render::sublinearity_counterexample) })))
                }
                Err(e) => Err(e.into()),
            };
        }
    };
    Ok(Report::checked(render::audit(&audit), !audit.all_guaranteed_hold()))
}
