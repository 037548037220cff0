//! Rearranging a finite family of sets into a nested chain with the same
//! indicator sum.
//!
//! [`lemma_step`] and [`nest`] follow the inductive construction literally:
//! replacing a pair `(D, C)` by `(D ∩ C, D ∪ C)` keeps `χ_D + χ_C` and, under
//! strong subadditivity, does not increase `H(D) + H(C)`. The closed form
//! `A_i = {x : x lies in at least n − i + 1 of the sets}` is used only as an
//! independent check.

use crate::capacity::{check_axiom, Axiom, Capacity};
use crate::domain::{GroundSet, SubsetMask};
use crate::error::{Error, Result};
use crate::number::Extended;

/// Largest family accepted; the recursion depth equals the family size.
pub const MAX_FAMILY: usize = 64;

fn check_family(sets: &[SubsetMask]) -> Result<()> {
    if sets.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if sets.len() > MAX_FAMILY {
        return Err(Error::FamilyTooLarge(sets.len()));
    }
    Ok(())
}

/// `D_1, …, D_{n−1} ⊆ D_n` with `Σχ_{D_i} = Σχ_{C_i}` and `D_n = ∪ C_i`.
pub fn lemma_step(sets: &[SubsetMask]) -> Result<Vec<SubsetMask>> {
    check_family(sets)?;
    Ok(lemma_step_unchecked(sets))
}

fn lemma_step_unchecked(sets: &[SubsetMask]) -> Vec<SubsetMask> {
    let (last, init) = sets.split_last().expect("nonempty family");
    if init.is_empty() {
        return vec![*last];
    }
    let mut out = lemma_step_unchecked(init);
    let top = out.pop().expect("recursion returns a nonempty family");
    out.push(top.intersection(*last));
    out.push(top.union(*last));
    out
}

/// The chain `A_1 ⊆ … ⊆ A_n` with `Σχ_{A_i} = Σχ_{C_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NestedFamily {
    sets: Vec<SubsetMask>,
}

impl NestedFamily {
    pub fn sets(&self) -> &[SubsetMask] {
        &self.sets
    }

    pub fn is_nested(&self) -> bool {
        self.sets.windows(2).all(|w| w[0].is_subset_of(w[1]))
    }
}

/// Applies [`lemma_step`], keeps its last set as `A_n`, and recurses on the
/// first `n − 1`.
pub fn nest(sets: &[SubsetMask]) -> Result<NestedFamily> {
    check_family(sets)?;
    let mut chain = Vec::with_capacity(sets.len());
    let mut current = sets.to_vec();
    while !current.is_empty() {
        let mut step = lemma_step_unchecked(&current);
        chain.push(step.pop().expect("nonempty"));
        current = step;
    }
    chain.reverse();
    let family = NestedFamily { sets: chain };
    debug_assert_eq!(family.sets, count_superlevels(sets));
    Ok(family)
}

/// `A_i = {x : #{j : x ∈ C_j} ≥ n − i + 1}` computed from membership counts.
pub fn count_superlevels(sets: &[SubsetMask]) -> Vec<SubsetMask> {
    let n = sets.len();
    let span = sets.iter().fold(SubsetMask::EMPTY, |acc, s| acc.union(*s));
    let counts: Vec<(usize, usize)> = span.iter().map(|x| (x, sets.iter().filter(|s| s.contains(x)).count())).collect();
    (1..=n)
        .map(|i| {
            counts
                .iter()
                .filter(|(_, c)| *c > n - i)
                .fold(SubsetMask::EMPTY, |acc, (x, _)| acc.with(*x))
        })
        .collect()
}

/// Pointwise `Σ_j χ_{C_j}` over the points `0..size`.
pub fn indicator_sum(sets: &[SubsetMask], size: usize) -> Vec<usize> {
    (0..size).map(|x| sets.iter().filter(|s| s.contains(x)).count()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapacitySumAudit {
    pub lemma_sets: Vec<SubsetMask>,
    pub nested: NestedFamily,
    /// `Σ H(C_i)`.
    pub original: Extended,
    /// `Σ H(D_i)`.
    pub lemma: Extended,
    /// `Σ H(A_i)`.
    pub nested_sum: Extended,
    /// `Σ H(A_i) ≤ Σ H(D_i) ≤ Σ H(C_i)`.
    pub holds: bool,
}

pub fn capacity_sum_audit(sets: &[SubsetMask], h: &Capacity) -> Result<CapacitySumAudit> {
    check_family(sets)?;
    let ground: GroundSet = h.ground();
    if let Some(bad) = sets.iter().find(|s| !ground.contains(**s)) {
        return Err(Error::Invalid(format!("set {bad} lies outside the capacity's ground set")));
    }
    let strong = check_axiom(h, Axiom::StronglySubadditive);
    if !strong.holds {
        let (e, f) = strong.witness.map(|w| (w.sets[0], w.sets[1])).expect("failing report has a witness");
        return Err(Error::Hypothesis(format!(
            "capacity sums only decrease under a strongly subadditive H; \
             H(E∩F) + H(E∪F) > H(E) + H(F) at E = {e}, F = {f}"
        )));
    }
    let total = |family: &[SubsetMask]| family.iter().map(|s| h.value(*s).clone()).sum::<Extended>();
    let lemma_sets = lemma_step_unchecked(sets);
    let nested = nest(sets)?;
    let original = total(sets);
    let lemma = total(&lemma_sets);
    let nested_sum = total(nested.sets());
    let holds = nested_sum <= lemma && lemma <= original;
    Ok(CapacitySumAudit { lemma_sets, nested, original, lemma, nested_sum, holds })
}
