//! The Choquet integral as a supremum of additive integrals over measures
//! dominated by `H`, computed by the greedy chain and by an exact LP.
//!
//! On a finite ground set with the discrete topology, "dominated on open
//! sets" means `μ(A) ≤ H(A)` for every `A`. The dual problem is
//!
//! ```text
//! maximize Σ_x f(x) μ_x   subject to   μ ≥ 0,  Σ_{x∈A} μ_x ≤ H(A)  for all A ≠ ∅
//! ```
//!
//! Constraints with `H(A) = ∞` are vacuous.

mod simplex;

pub use simplex::{maximize, LpOutcome};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::capacity::{check_axiom, semifinite_failure, Axiom, Capacity};
use crate::domain::{GroundSet, StepFunction, SubsetMask};
use crate::error::{Error, Result};
use crate::integral::{integrate, Gap};
use crate::number::{Extended, Rational};

/// Largest ground set for the dense `2^n − 1` row LP.
pub const MAX_LP_GROUND_SET: usize = 16;

/// Point masses; `μ(A) = Σ_{x∈A} μ_x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AdditiveMeasure {
    masses: Vec<Rational>,
}

impl AdditiveMeasure {
    pub fn new(masses: Vec<Rational>) -> Result<Self> {
        GroundSet::new(masses.len())?;
        if let Some(m) = masses.iter().find(|m| m.is_negative()) {
            return Err(Error::Negative(crate::number::render(m)));
        }
        Ok(AdditiveMeasure { masses })
    }

    pub fn zero(ground: GroundSet) -> Self {
        AdditiveMeasure { masses: vec![Rational::zero(); ground.size()] }
    }

    pub fn ground(&self) -> GroundSet {
        GroundSet::new(self.masses.len()).expect("validated at construction")
    }

    pub fn masses(&self) -> &[Rational] {
        &self.masses
    }

    pub fn measure(&self, set: SubsetMask) -> Rational {
        set.iter().map(|x| &self.masses[x]).sum()
    }

    /// `Σ_x f(x) μ_x`, with `∞ · 0 = 0`.
    pub fn integrate(&self, f: &StepFunction) -> Result<Extended> {
        self.ground().check_same(&f.ground())?;
        Ok(f.values().iter().zip(&self.masses).map(|(v, m)| v.scale(m)).sum())
    }

    pub fn scale(&self, c: &Rational) -> AdditiveMeasure {
        AdditiveMeasure { masses: self.masses.iter().map(|m| m * c).collect() }
    }
}

/// `μ(A) ≤ H(A)` for every subset `A`.
pub fn is_dominated(mu: &AdditiveMeasure, h: &Capacity) -> Result<bool> {
    h.same_ground(mu.ground())?;
    Ok(h.ground().subsets().all(|a| Extended::Finite(mu.measure(a)) <= *h.value(a)))
}

/// Largest `c ∈ [0, 1]` with `c·μ` dominated by `H` (requires `H ≥ 0`).
pub fn dominated_scaling(mu: &AdditiveMeasure, h: &Capacity) -> Result<AdditiveMeasure> {
    h.same_ground(mu.ground())?;
    let mut factor = Rational::from_integer(1.into());
    for a in h.ground().subsets() {
        let mass = mu.measure(a);
        if let (true, Extended::Finite(cap)) = (mass.is_positive(), h.value(a)) {
            let ratio = cap / &mass;
            if ratio < factor {
                factor = ratio;
            }
        }
    }
    Ok(mu.scale(&factor))
}

fn check_finite_nonnegative(f: &StepFunction) -> Result<Vec<Rational>> {
    f.finite_values().ok_or_else(|| Error::Invalid("the integrand must be finite".into()))
}

/// Marginal capacities along the chain of superlevel sets of `f`, ordered by
/// decreasing value with ties broken by ascending index.
pub fn greedy_measure(f: &StepFunction, h: &Capacity) -> Result<AdditiveMeasure> {
    h.same_ground(f.ground())?;
    let values = check_finite_nonnegative(f)?;
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].cmp(&values[a]).then(a.cmp(&b)));

    let mut masses = vec![Rational::zero(); values.len()];
    let mut prefix = SubsetMask::EMPTY;
    let mut previous = h.value(SubsetMask::EMPTY).clone();
    for &x in &order {
        let next = prefix.with(x);
        let (Extended::Finite(lo), Extended::Finite(hi)) = (&previous, h.value(next)) else {
            return Err(Error::InfiniteChain(next.to_string()));
        };
        let mass = hi - lo;
        if mass.is_negative() {
            return Err(Error::Hypothesis(format!(
                "greedy masses need a monotone H; H decreases from {prefix} to {next}"
            )));
        }
        masses[x] = mass;
        prefix = next;
        previous = h.value(next).clone();
    }
    let mu = AdditiveMeasure { masses };
    // Telescoping layer cake: Σ f μ = ∫ f dH − f_min·H(∅)·0 when H(∅) = 0.
    if h.value(SubsetMask::EMPTY).is_zero() {
        assert_eq!(mu.integrate(f)?, integrate(f, h)?, "greedy telescoping identity");
    }
    Ok(mu)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DualMethod {
    Greedy,
    ExactLp,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityReport {
    pub method: DualMethod,
    pub choquet_value: Extended,
    pub dual_value: Extended,
    /// `None` when the dual is unbounded.
    pub optimal_measure: Option<AdditiveMeasure>,
    /// `choquet_value − dual_value`.
    pub gap: Gap,
    pub dominated: bool,
    /// How infinite capacity values were handled, when there were any.
    pub approach: Option<String>,
}

fn solve_lp(f: &[Rational], h: &Capacity) -> LpOutcome {
    let ground = h.ground();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for a in ground.subsets().skip(1) {
        if let Extended::Finite(cap) = h.value(a) {
            rows.push((0..ground.size()).map(|x| Rational::from_integer(i64::from(a.contains(x)).into())).collect());
            rhs.push(cap.clone());
        }
    }
    maximize(f, &rows, &rhs)
}

pub fn dual_value(f: &StepFunction, h: &Capacity, method: DualMethod) -> Result<DualityReport> {
    h.same_ground(f.ground())?;
    let values = check_finite_nonnegative(f)?;
    let choquet_value = integrate(f, h)?;
    match method {
        DualMethod::Greedy => {
            let mu = greedy_measure(f, h)?;
            let dual = mu.integrate(f)?;
            Ok(DualityReport {
                method,
                gap: Gap::difference(&choquet_value, &dual),
                dominated: is_dominated(&mu, h)?,
                choquet_value,
                dual_value: dual,
                optimal_measure: Some(mu),
                approach: None,
            })
        }
        DualMethod::ExactLp => {
            if h.ground().size() > MAX_LP_GROUND_SET {
                return Err(Error::SizeGuard(format!(
                    "the dual LP has 2^n − 1 rows; n = {} exceeds {MAX_LP_GROUND_SET}",
                    h.ground().size()
                )));
            }
            let (target, approach) = if h.is_finite() {
                (h.clone(), None)
            } else if choquet_value.is_finite() {
                // Every superlevel set with a positive gap has finite capacity, so
                // contracting to the support loses nothing and μ ≤ H_S ≤ H.
                let support = f.superlevel(&Rational::zero(), true);
                let contracted = h.contract(support)?;
                if contracted.is_finite() {
                    (contracted, Some(format!("contracted to the support {support} of f")))
                } else {
                    (h.clone(), Some("infinite-capacity constraints dropped".to_owned()))
                }
            } else {
                (h.clone(), Some("infinite-capacity constraints dropped; ∫f dH = ∞".to_owned()))
            };
            match solve_lp(&values, &target) {
                LpOutcome::Optimal { x, value, .. } => {
                    let mu = AdditiveMeasure::new(x)?;
                    let dual = Extended::Finite(value);
                    debug_assert_eq!(mu.integrate(f)?, dual);
                    Ok(DualityReport {
                        method,
                        gap: Gap::difference(&choquet_value, &dual),
                        dominated: is_dominated(&mu, h)?,
                        choquet_value,
                        dual_value: dual,
                        optimal_measure: Some(mu),
                        approach,
                    })
                }
                LpOutcome::Unbounded => Ok(DualityReport {
                    method,
                    gap: Gap::difference(&choquet_value, &Extended::Infinite),
                    dominated: true,
                    choquet_value,
                    dual_value: Extended::Infinite,
                    optimal_measure: None,
                    approach: Some(approach.unwrap_or_default() + "; dual unbounded"),
                }),
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominationAudit {
    /// `Σ f μ`.
    pub additive: Extended,
    /// `∫ f dH`.
    pub choquet: Extended,
    pub holds: bool,
}

/// `Σ f μ ≤ ∫ f dH` for a dominated `μ`.
pub fn domination_inequality_audit(f: &StepFunction, mu: &AdditiveMeasure, h: &Capacity) -> Result<DominationAudit> {
    if !is_dominated(mu, h)? {
        return Err(Error::Hypothesis("μ is not dominated by H".into()));
    }
    let additive = mu.integrate(f)?;
    let choquet = integrate(f, h)?;
    Ok(DominationAudit { holds: additive <= choquet, additive, choquet })
}

/// One step of the divergence witness: a set `E` inside the infinite
/// superlevel set with `M ≤ H(E) < ∞`, and the dual value against `H(· ∩ E)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivergenceStep {
    pub target: Rational,
    pub set: SubsetMask,
    pub capacity: Rational,
    /// LP optimum against the contraction `H(· ∩ E)`.
    pub dual_value: Rational,
    /// `∫ f dH(· ∩ E)`.
    pub contracted_integral: Rational,
    /// `level · M`.
    pub lower_bound: Rational,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnboundednessOutcome {
    /// Every superlevel set has finite capacity.
    Delegated(DualityReport),
    Diverging { level: Rational, superlevel: SubsetMask, steps: Vec<DivergenceStep> },
}

/// Witnesses `sup_μ ∫f dμ = ∞` when a superlevel set of `f` has infinite
/// capacity, by contracting `H` to finite-capacity sets of growing size.
///
/// At finite scale semifiniteness can only be asked up to a bounded target:
/// `targets` are the values `M` that every infinite-capacity set must reach
/// from below.
pub fn semifinite_unboundedness_demo(f: &StepFunction, h: &Capacity, targets: &[Rational]) -> Result<UnboundednessOutcome> {
    h.same_ground(f.ground())?;
    let values = check_finite_nonnegative(f)?;
    if !check_axiom(h, Axiom::Monotone).holds {
        return Err(Error::Hypothesis("H must be monotone".into()));
    }
    let infinite_level = f
        .positive_levels()
        .into_iter()
        .find(|v| h.value(f.superlevel(v, false)).is_infinite());
    let Some(level) = infinite_level else {
        return dual_value(f, h, DualMethod::ExactLp).map(UnboundednessOutcome::Delegated);
    };
    if let Some((set, target)) = semifinite_failure(h, targets) {
        return Err(Error::Hypothesis(format!(
            "H is not semifinite up to the targets: H({set}) = ∞ but no finite-capacity subset reaches {}; \
             compare H = 1 on bounded sets, ∞ on unbounded ones",
            crate::number::render(&target)
        )));
    }
    let superlevel = f.superlevel(&level, false);
    let mut sorted = targets.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut steps = Vec::with_capacity(sorted.len());
    for target in sorted {
        let set = superlevel
            .submasks()
            .find(|e| matches!(h.value(*e), Extended::Finite(c) if *c >= target))
            .ok_or_else(|| Error::Hypothesis(format!("no subset of {superlevel} reaches {}", crate::number::render(&target))))?;
        let capacity = h.value(set).finite().cloned().expect("chosen finite");
        let contracted = h.contract(set)?;
        let dual = match solve_lp(&values, &contracted) {
            LpOutcome::Optimal { value, .. } => value,
            LpOutcome::Unbounded => unreachable!("a contraction to a finite-capacity set of a monotone H is finite"),
        };
        let contracted_integral = integrate(f, &contracted)?.finite().cloned().expect("finite contraction");
        let lower_bound = &level * &target;
        steps.push(DivergenceStep {
            holds: dual >= lower_bound,
            target,
            set,
            capacity,
            dual_value: dual,
            contracted_integral,
            lower_bound,
        });
    }
    Ok(UnboundednessOutcome::Diverging { level, superlevel, steps })
}
