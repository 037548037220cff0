//! Finite-prefix audits of quasi-uniform convergence and the Fatou,
//! dominated-convergence and converse estimates.
//!
//! A prefix cannot decide a limit, so every verdict is relative to the terms
//! supplied. The harnesses expose the `(ε, η, tail)` quantifiers directly and
//! evaluate each intermediate bound of the proofs exactly. Checks marked
//! [`CheckKind::Guaranteed`] follow from the stated hypotheses on every input;
//! a failing one is a bug. [`CheckKind::Informational`] checks are limit
//! statements that a short prefix may legitimately miss.

use num_traits::Zero;
use serde::Serialize;

use crate::capacity::{check_axiom, find_strong_subadditivity_violation, Axiom, Capacity};
use crate::domain::{GroundSet, SignedFunction, StepFunction, SubsetMask};
use crate::error::{Error, Result};
use crate::integral::{integrate, integrate_abs, layer_integral};
use crate::number::{int, pow2, Extended, Rational};

/// An exceptional set `E` offered with its budget `ε`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduleEntry {
    pub eps: Rational,
    pub set: SubsetMask,
}

/// `f_0, …, f_N` with a declared limit and an optional exceptional schedule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionSequence {
    terms: Vec<SignedFunction>,
    limit: SignedFunction,
    schedule: Vec<ScheduleEntry>,
}

impl FunctionSequence {
    pub fn new(terms: Vec<SignedFunction>, limit: SignedFunction, schedule: Vec<ScheduleEntry>) -> Result<Self> {
        let ground = limit.ground();
        for t in &terms {
            ground.check_same(&t.ground())?;
        }
        if let Some(e) = schedule.iter().find(|e| !ground.contains(e.set)) {
            return Err(Error::Invalid(format!("scheduled set {} lies outside the ground set", e.set)));
        }
        Ok(FunctionSequence { terms, limit, schedule })
    }

    pub fn ground(&self) -> GroundSet {
        self.limit.ground()
    }

    pub fn terms(&self) -> &[SignedFunction] {
        &self.terms
    }

    pub fn limit(&self) -> &SignedFunction {
        &self.limit
    }

    pub fn schedule(&self) -> &[ScheduleEntry] {
        &self.schedule
    }

    /// `|f_n − f|`.
    pub fn deviation(&self, n: usize) -> StepFunction {
        self.terms[n].sub(&self.limit).expect("validated grounds").abs()
    }

    /// `{x : |f_n(x) − f(x)| > η for some n ≥ tail_start}`.
    pub fn bad_set(&self, eta: &Rational, tail_start: usize) -> SubsetMask {
        (tail_start..self.terms.len()).fold(SubsetMask::EMPTY, |acc, n| acc.union(self.deviation(n).superlevel(eta, true)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuVerdict {
    Verified,
    Refuted,
    InsufficientPrefix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Guaranteed,
    Informational,
}

/// `lhs ≤ rhs`, both sides exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InequalityCheck {
    pub name: String,
    pub kind: CheckKind,
    pub lhs: Extended,
    pub rhs: Extended,
    pub holds: bool,
}

impl InequalityCheck {
    fn new(name: impl Into<String>, kind: CheckKind, lhs: Extended, rhs: Extended) -> Self {
        InequalityCheck { name: name.into(), kind, holds: lhs <= rhs, lhs, rhs }
    }

    pub fn is_violation(&self) -> bool {
        self.kind == CheckKind::Guaranteed && !self.holds
    }
}

/// A point that stays `η`-far from the limit on a set too large for `ε`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refutation {
    pub point: usize,
    pub eta: Rational,
    /// The tail indices `n` with `|f_n(x) − f(x)| > η`.
    pub steps: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergenceAudit {
    pub qu_verdict: QuVerdict,
    /// `B = {x : |f_n(x) − f(x)| > η for some tail n}`.
    pub minimal_bad_set: SubsetMask,
    pub bad_capacity: Extended,
    pub eps: Rational,
    pub refutation: Option<Refutation>,
    pub inequality_results: Vec<InequalityCheck>,
    /// Sets built along the way, such as the `A_k` of the converse.
    pub named_sets: Vec<(String, SubsetMask)>,
    /// `sup_{m ≥ n} ∫|f_m − f| dH` over the prefix, when computed.
    pub envelope: Vec<Extended>,
    /// A function built by the audit, such as the dominator `F`.
    pub constructed: Option<StepFunction>,
}

impl ConvergenceAudit {
    pub fn violations(&self) -> impl Iterator<Item = &InequalityCheck> {
        self.inequality_results.iter().filter(|c| c.is_violation())
    }

    pub fn all_guaranteed_hold(&self) -> bool {
        self.violations().next().is_none()
    }
}

/// Uniform tolerance `η`, exceptional budget `ε`, and the first tail index.
///
/// When `eps` is `None` the smallest scheduled `ε` is used, or `0` without a
/// schedule: on a finite set quasi-uniform convergence means uniform
/// convergence off an `H`-null set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tolerance {
    pub eta: Rational,
    pub eps: Option<Rational>,
    pub tail_start: usize,
}

impl Tolerance {
    pub fn new(eta: Rational, eps: Option<Rational>, tail_start: usize) -> Self {
        Tolerance { eta, eps, tail_start }
    }
}

fn check_tolerance(seq: &FunctionSequence, tol: &Tolerance) -> Result<()> {
    if tol.eta <= Rational::zero() {
        return Err(Error::Invalid("η must be positive".into()));
    }
    if tol.eps.as_ref().is_some_and(|e| *e < Rational::zero()) {
        return Err(Error::Invalid("ε must be nonnegative".into()));
    }
    if seq.terms.is_empty() || tol.tail_start >= seq.terms.len() {
        return Err(Error::Invalid(format!(
            "tail start {} needs a term; the prefix has {}",
            tol.tail_start,
            seq.terms.len()
        )));
    }
    Ok(())
}

fn require(h: &Capacity, axioms: &[Axiom], context: &str) -> Result<()> {
    for &axiom in axioms {
        let report = check_axiom(h, axiom);
        if !report.holds {
            let at = report.witness.map(|w| format!(" at {:?}", w.sets.iter().map(ToString::to_string).collect::<Vec<_>>()));
            return Err(Error::Hypothesis(format!("{context} needs H {axiom}{}", at.unwrap_or_default())));
        }
    }
    Ok(())
}

/// The sets `B`, `H(B)`, and the verdict of [`qu_audit`].
pub fn qu_audit(seq: &FunctionSequence, h: &Capacity, tol: &Tolerance) -> Result<ConvergenceAudit> {
    h.same_ground(seq.ground())?;
    check_tolerance(seq, tol)?;
    let eps = tol
        .eps
        .clone()
        .or_else(|| seq.schedule.iter().map(|e| e.eps.clone()).min())
        .unwrap_or_else(Rational::zero);
    let bad = seq.bad_set(&tol.eta, tol.tail_start);
    let bad_capacity = h.value(bad).clone();
    let mut checks: Vec<InequalityCheck> = seq
        .schedule
        .iter()
        .enumerate()
        .map(|(i, e)| InequalityCheck::new(format!("H(E_{i}) ≤ ε_{i}"), CheckKind::Informational, h.value(e.set).clone(), Extended::Finite(e.eps.clone())))
        .collect();
    checks.push(InequalityCheck::new("H(B) ≤ ε", CheckKind::Informational, bad_capacity.clone(), Extended::Finite(eps.clone())));

    let last = seq.terms.len() - 1;
    let last_bad = seq.deviation(last).superlevel(&tol.eta, true);
    let (verdict, refutation) = if bad_capacity <= Extended::Finite(eps.clone()) {
        (QuVerdict::Verified, None)
    } else if *h.value(last_bad) > Extended::Finite(eps.clone()) {
        // Even the final term deviates on a set too large for ε.
        let scheduled = seq.schedule.iter().filter(|e| e.eps <= eps).map(|e| e.set).next();
        let outside = scheduled.map_or(last_bad, |s| last_bad.difference(s));
        let point = outside.iter().chain(last_bad.iter()).next().expect("a set of positive capacity is nonempty");
        let steps = (tol.tail_start..seq.terms.len())
            .filter(|&n| seq.deviation(n).superlevel(&tol.eta, true).contains(point))
            .collect();
        (QuVerdict::Refuted, Some(Refutation { point, eta: tol.eta.clone(), steps }))
    } else {
        (QuVerdict::InsufficientPrefix, None)
    };
    Ok(ConvergenceAudit {
        qu_verdict: verdict,
        minimal_bad_set: bad,
        bad_capacity,
        eps,
        refutation,
        inequality_results: checks,
        named_sets: vec![("B".into(), bad)],
        envelope: Vec::new(),
        constructed: None,
    })
}

/// `2^(−n) H({|f_n − f| > 2^(−n)}) ≤ ∫ |f_n − f| dH`.
pub fn chebyshev_audit(f_n: &SignedFunction, f: &SignedFunction, h: &Capacity, n: u32) -> Result<InequalityCheck> {
    let deviation = f_n.sub(f)?.abs();
    let level = pow2(-i64::from(n));
    let lhs = h.value(deviation.superlevel(&level, true)).scale(&level);
    let rhs = integrate(&deviation, h)?;
    Ok(InequalityCheck::new(format!("Chebyshev at n = {n}"), CheckKind::Guaranteed, lhs, rhs))
}

fn nonnegative(seq: &FunctionSequence) -> Result<Vec<StepFunction>> {
    seq.terms
        .iter()
        .chain(std::iter::once(&seq.limit))
        .map(|t| StepFunction::from_rationals(t.values().to_vec()))
        .collect()
}

/// Fatou at tolerance `(η, k)`, with the tail bad set `B` as the exceptional
/// set: for every tail `n`,
///
/// ```text
/// ∫_η^{k+η} H({f > s}) ds ≤ ∫ f_n dH + H(B)·k
/// ∫ f dH ≤ ∫ f_n dH + H(B)·max f + η·H({f > 0})
/// ```
///
/// `k = None` takes `k = max f`. The plain conclusion `∫ f ≤ min ∫ f_n` is
/// reported as informational.
pub fn fatou_harness(seq: &FunctionSequence, h: &Capacity, tol: &Tolerance, k: Option<&Rational>) -> Result<ConvergenceAudit> {
    let functions = nonnegative(seq)?;
    require(h, &[Axiom::Monotone, Axiom::FiniteSubadditive], "Fatou's lemma")?;
    let mut audit = qu_audit(seq, h, tol)?;
    let (terms, limit) = functions.split_at(seq.terms.len());
    let limit = &limit[0];
    let top = limit.max_value().finite().cloned().unwrap_or_else(Rational::zero);
    let k = k.cloned().unwrap_or_else(|| top.clone());
    let window_top = &k + &tol.eta;
    let window = layer_integral(limit, h, &tol.eta, Some(&window_top))?;
    let limit_integral = integrate(limit, h)?;
    let support = h.value(limit.superlevel(&Rational::zero(), true)).clone();
    let slack_window = audit.bad_capacity.scale(&k);
    let slack_total = &audit.bad_capacity.scale(&top) + &support.scale(&tol.eta);
    let mut tail_min: Option<Extended> = None;
    for (n, term) in terms.iter().enumerate().skip(tol.tail_start) {
        let value = integrate(term, h)?;
        audit.inequality_results.push(InequalityCheck::new(
            format!("∫_η^(k+η) H(f > s) ds ≤ ∫ f_{n} dH + H(B)·k"),
            CheckKind::Guaranteed,
            window.clone(),
            &value + &slack_window,
        ));
        audit.inequality_results.push(InequalityCheck::new(
            format!("∫ f dH ≤ ∫ f_{n} dH + H(B)·max f + η·H(f > 0)"),
            CheckKind::Guaranteed,
            limit_integral.clone(),
            &value + &slack_total,
        ));
        tail_min = Some(tail_min.map_or(value.clone(), |m| m.min(value)));
    }
    audit.inequality_results.push(InequalityCheck::new(
        "∫ f dH ≤ min over the tail of ∫ f_n dH",
        CheckKind::Informational,
        limit_integral,
        tail_min.expect("nonempty tail"),
    ));
    Ok(audit)
}

/// A sequence converging off an `H`-null set whose limit integral exceeds
/// every term's: `f = χ_A`, `f_n = χ_{A∖E}` with `H(E) = 0 < H(A) − H(A∖E)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FatouCounterexample {
    pub set: SubsetMask,
    pub null_set: SubsetMask,
    pub limit_integral: Extended,
    pub term_integral: Extended,
}

/// Searches for [`FatouCounterexample`]s; they exist only when `H` fails
/// finite subadditivity.
pub fn fatou_counterexample_search(h: &Capacity) -> Option<FatouCounterexample> {
    let ground = h.ground();
    let null: Vec<SubsetMask> = ground.subsets().filter(|e| !e.is_empty() && h.value(*e).is_zero()).collect();
    for a in ground.subsets() {
        for &e in &null {
            let rest = a.difference(e);
            if h.value(a) > h.value(rest) {
                return Some(FatouCounterexample {
                    set: a,
                    null_set: e,
                    limit_integral: h.value(a).clone(),
                    term_integral: h.value(rest).clone(),
                });
            }
        }
    }
    None
}

/// Dominated convergence: checks `|f_n| ≤ F`, reports the decreasing
/// envelope of `∫|f_n − f| dH`, and for every tail `n` the split
///
/// ```text
/// ∫|f_n − f| dH ≤ ∫_0^η H(F + |f| > t) dt + k·H(B) + ∫_k^∞ H(F + |f| > t) dt
/// ```
///
/// at `k = max(F + |f|)` unless given.
pub fn dct_harness(seq: &FunctionSequence, dominator: &StepFunction, h: &Capacity, tol: &Tolerance, k: Option<&Rational>) -> Result<ConvergenceAudit> {
    h.same_ground(dominator.ground())?;
    let bound = dominator
        .finite_values()
        .ok_or_else(|| Error::Hypothesis("the dominator must be finite".into()))?;
    if integrate(dominator, h)?.is_infinite() {
        return Err(Error::Hypothesis("∫ F dH must be finite".into()));
    }
    for (step, term) in seq.terms.iter().enumerate() {
        if let Some(point) = term.values().iter().zip(&bound).position(|(v, b)| num_traits::Signed::abs(v) > *b) {
            return Err(Error::Domination { step, point });
        }
    }
    if let Some(point) = seq.limit.values().iter().zip(&bound).position(|(v, b)| num_traits::Signed::abs(v) > *b) {
        return Err(Error::Hypothesis(format!("the declared limit exceeds F at point {point}")));
    }
    require(h, &[Axiom::Monotone, Axiom::FiniteSubadditive], "dominated convergence")?;
    let mut audit = qu_audit(seq, h, tol)?;

    let outer = dominator.add(&seq.limit.abs())?;
    let k = k.cloned().unwrap_or_else(|| outer.max_value().finite().cloned().unwrap_or_else(Rational::zero)).max(tol.eta.clone());
    let head = layer_integral(&outer, h, &Rational::zero(), Some(&tol.eta))?;
    let tail = layer_integral(&outer, h, &k, None)?;
    let split = &(&head + &audit.bad_capacity.scale(&k)) + &tail;

    let errors: Vec<Extended> = (0..seq.terms.len()).map(|n| integrate(&seq.deviation(n), h)).collect::<Result<_>>()?;
    let mut envelope = errors.clone();
    for n in (0..envelope.len().saturating_sub(1)).rev() {
        envelope[n] = envelope[n].clone().max(envelope[n + 1].clone());
    }
    for (n, error) in errors.iter().enumerate().skip(tol.tail_start) {
        audit.inequality_results.push(InequalityCheck::new(
            format!("∫|f_{n} − f| dH ≤ head + k·H(B) + tail"),
            CheckKind::Guaranteed,
            error.clone(),
            split.clone(),
        ));
    }
    audit.inequality_results.push(InequalityCheck::new(
        "envelope vanishes at the end of the prefix",
        CheckKind::Informational,
        envelope.last().cloned().expect("nonempty prefix"),
        Extended::zero(),
    ));
    audit.envelope = envelope;
    audit.constructed = Some(outer);
    Ok(audit)
}

/// The converse: from `∫|f_n − f| dH ≤ 4^(−n)` build
/// `A_k = ∪_{n ≥ k} {|f_n − f| > 2^(−n)}` and `F = |f| + Σ_n |f_n − f|`, and
/// check
///
/// ```text
/// H(A_k) ≤ 2^(−(k−1))
/// ∫ Σ_{n≤N} |f_n − f| dH ≤ Σ_{n≤N} 2^(n+1) ∫|f_n − f| dH ≤ 4
/// ∫ F dH ≤ 2 ∫|f| dH + 8
/// ```
pub fn converse_dct_audit(seq: &FunctionSequence, h: &Capacity) -> Result<ConvergenceAudit> {
    h.same_ground(seq.ground())?;
    require(h, &[Axiom::Monotone, Axiom::CountableSubadditive], "the converse of dominated convergence")?;
    if seq.terms.is_empty() {
        return Err(Error::Invalid("the prefix has no terms".into()));
    }
    let limit_abs = integrate_abs(&seq.limit, h)?;
    if limit_abs.is_infinite() {
        return Err(Error::Hypothesis("∫ |f| dH must be finite".into()));
    }
    let deviations: Vec<StepFunction> = (0..seq.terms.len()).map(|n| seq.deviation(n)).collect();
    let errors: Vec<Extended> = deviations.iter().map(|g| integrate(g, h)).collect::<Result<_>>()?;
    for (n, error) in errors.iter().enumerate() {
        if *error > Extended::Finite(pow2(-2 * n as i64)) {
            return Err(Error::Premise(n));
        }
    }

    let mut checks = Vec::new();
    let mut named_sets = Vec::new();
    let mut union = SubsetMask::EMPTY;
    let mut sets = vec![SubsetMask::EMPTY; deviations.len()];
    for n in (0..deviations.len()).rev() {
        union = union.union(deviations[n].superlevel(&pow2(-(n as i64)), true));
        sets[n] = union;
    }
    for (k, set) in sets.iter().enumerate() {
        named_sets.push((format!("A_{k}"), *set));
        checks.push(InequalityCheck::new(
            format!("H(A_{k}) ≤ 2^(-({k}-1))"),
            CheckKind::Guaranteed,
            h.value(*set).clone(),
            Extended::Finite(pow2(1 - k as i64)),
        ));
    }

    let four = Extended::Finite(int(4));
    let mut partial = StepFunction::zero(seq.ground());
    let mut chain = Extended::zero();
    for (n, (g, error)) in deviations.iter().zip(&errors).enumerate() {
        partial = partial.add(g)?;
        chain = &chain + &error.scale(&pow2(n as i64 + 1));
        checks.push(InequalityCheck::new(
            format!("∫ S_{n} dH ≤ Σ 2^(m+1) ∫|f_m − f| dH"),
            CheckKind::Guaranteed,
            integrate(&partial, h)?,
            chain.clone(),
        ));
        checks.push(InequalityCheck::new(format!("Σ_(m≤{n}) 2^(m+1) ∫|f_m − f| dH ≤ 4"), CheckKind::Guaranteed, chain.clone(), four.clone()));
    }
    let dominator = seq.limit.abs().add(&partial)?;
    checks.push(InequalityCheck::new(
        "∫ F dH ≤ 2 ∫|f| dH + 8",
        CheckKind::Guaranteed,
        integrate(&dominator, h)?,
        &limit_abs.scale(&int(2)) + &Extended::from_int(8),
    ));

    // Off A_k every term from k on is within 2^(−k) of the limit.
    let verdict = if checks.iter().all(|c| c.holds) { QuVerdict::Verified } else { QuVerdict::Refuted };
    Ok(ConvergenceAudit {
        qu_verdict: verdict,
        minimal_bad_set: sets[0],
        bad_capacity: h.value(sets[0]).clone(),
        eps: int(2),
        refutation: None,
        inequality_results: checks,
        named_sets,
        envelope: Vec::new(),
        constructed: Some(dominator),
    })
}

/// `∫ F dH ≤ Σ ∫ f_n dH` for nonnegative terms whose sum reaches `F` off an
/// `H`-null set.
pub fn countable_sublinearity_audit(terms: &[StepFunction], sum: &StepFunction, h: &Capacity) -> Result<InequalityCheck> {
    h.same_ground(sum.ground())?;
    require(h, &[Axiom::Monotone, Axiom::StronglySubadditive], "countable sublinearity")?;
    let mut partial = StepFunction::zero(sum.ground());
    for t in terms {
        partial = partial.add(t)?;
    }
    let short = (0..sum.ground().size()).fold(SubsetMask::EMPTY, |acc, x| if sum.value(x) > partial.value(x) { acc.with(x) } else { acc });
    if !h.value(short).is_zero() {
        return Err(Error::Hypothesis(format!(
            "the partial sums fall short of F on {short}, which has capacity {}",
            h.value(short)
        )));
    }
    let rhs = terms.iter().map(|t| integrate(t, h)).collect::<Result<Vec<_>>>()?.into_iter().sum();
    Ok(InequalityCheck::new("∫ F dH ≤ Σ ∫ f_n dH", CheckKind::Guaranteed, integrate(sum, h)?, rhs))
}

/// Terms `χ_E`, `χ_F` with `∫(χ_E + χ_F) dH > H(E) + H(F)`, built from a
/// strong subadditivity violation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SublinearityCounterexample {
    pub terms: Vec<StepFunction>,
    pub sum: StepFunction,
    pub check: InequalityCheck,
}

pub fn countable_sublinearity_search(h: &Capacity) -> Result<Option<SublinearityCounterexample>> {
    let Some((e, f)) = find_strong_subadditivity_violation(h) else { return Ok(None) };
    let ground = h.ground();
    let terms = vec![StepFunction::indicator(ground, e), StepFunction::indicator(ground, f)];
    let sum = terms[0].add(&terms[1])?;
    let rhs = &integrate(&terms[0], h)? + &integrate(&terms[1], h)?;
    let check = InequalityCheck::new(
        format!("∫(χ_{e} + χ_{f}) dH ≤ H({e}) + H({f})"),
        CheckKind::Informational,
        integrate(&sum, h)?,
        rhs,
    );
    Ok((!check.holds).then_some(SublinearityCounterexample { terms, sum, check }))
}

/// Renders a check as `name: lhs ≤ rhs`.
pub fn describe(check: &InequalityCheck) -> String {
    let mark = if check.holds { "≤" } else { ">" };
    format!("{}: {} {mark} {}", check.name, check.lhs, check.rhs)
}
