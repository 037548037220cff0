//! The axiom menu as exhaustive checks.
//!
//! On a finite ground set with the discrete topology several continuum axioms
//! collapse: countable subadditivity is finite subadditivity plus `H(∅) = 0`,
//! local finiteness is finiteness of every value, and anything quantified over
//! open sets or monotone sequences of sets is evaluated on all sets or is
//! vacuous. Each report carries a note when such a reduction was applied.

use std::fmt;
use std::str::FromStr;

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::Capacity;
use crate::domain::{GroundSet, SubsetMask};
use crate::error::Error;
use crate::number::{Extended, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    EmptySet,
    Monotone,
    FiniteSubadditive,
    CountableSubadditive,
    StronglySubadditive,
    Semifinite,
    LocallyFinite,
    ZeroCapacityRegular,
    InnerRegular,
    OuterRegular,
}

impl Axiom {
    pub const ALL: [Axiom; 10] = [
        Axiom::EmptySet,
        Axiom::Monotone,
        Axiom::FiniteSubadditive,
        Axiom::CountableSubadditive,
        Axiom::StronglySubadditive,
        Axiom::Semifinite,
        Axiom::LocallyFinite,
        Axiom::ZeroCapacityRegular,
        Axiom::InnerRegular,
        Axiom::OuterRegular,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::EmptySet => "empty-set",
            Axiom::Monotone => "monotone",
            Axiom::FiniteSubadditive => "finite-subadd",
            Axiom::CountableSubadditive => "countable-subadd",
            Axiom::StronglySubadditive => "strong-subadd",
            Axiom::Semifinite => "semifinite",
            Axiom::LocallyFinite => "locally-finite",
            Axiom::ZeroCapacityRegular => "zero-capacity-regular",
            Axiom::InnerRegular => "inner-regular",
            Axiom::OuterRegular => "outer-regular",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axiom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Axiom::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown axiom {s:?}")))
    }
}

/// The sets and capacity values exhibiting a violation.
///
/// Layout of `values` per axiom:
/// - empty set: `[H(∅)]`
/// - monotone: `sets = [A, B]` with `A ⊂ B`, `values = [H(A), H(B)]`
/// - finite/countable subadditivity: `sets = [E, F]`, `values = [H(E∪F), H(E), H(F)]`
/// - strong subadditivity: `sets = [E, F]`, `values = [H(E∩F), H(E∪F), H(E), H(F)]`
/// - semifinite: `sets = [A]`, `values = [H(A), M, best finite value below A]`
/// - locally finite: `sets = [A]`, `values = [H(A)]`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub sets: Vec<SubsetMask>,
    pub values: Vec<Extended>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub axiom: Axiom,
    pub holds: bool,
    pub witness: Option<Witness>,
    pub note: Option<String>,
}

impl AxiomReport {
    fn pass(axiom: Axiom) -> Self {
        AxiomReport { axiom, holds: true, witness: None, note: None }
    }

    fn from_witness(axiom: Axiom, witness: Option<Witness>) -> Self {
        AxiomReport { axiom, holds: witness.is_none(), witness, note: None }
    }

    fn with_note(mut self, note: &str) -> Self {
        self.note = Some(note.to_owned());
        self
    }

    /// Re-evaluates the witness against `h` and confirms it violates the
    /// axiom's inequality. Reports without a witness are not genuine.
    pub fn is_genuine(&self, h: &Capacity) -> bool {
        let Some(w) = &self.witness else { return false };
        let v = |s: SubsetMask| h.value(s).clone();
        match self.axiom {
            Axiom::EmptySet => w.sets == [SubsetMask::EMPTY] && !v(SubsetMask::EMPTY).is_zero(),
            Axiom::Monotone => match w.sets[..] {
                [a, b] => a.is_subset_of(b) && v(a) > v(b),
                _ => false,
            },
            Axiom::FiniteSubadditive | Axiom::CountableSubadditive => match w.sets[..] {
                [e, f] => v(e.union(f)) > &v(e) + &v(f),
                [] => !v(SubsetMask::EMPTY).is_zero(),
                _ => false,
            },
            Axiom::StronglySubadditive => match w.sets[..] {
                [e, f] => &v(e.intersection(f)) + &v(e.union(f)) > &v(e) + &v(f),
                _ => false,
            },
            Axiom::Semifinite => match (&w.sets[..], w.values.get(1)) {
                ([a], Some(Extended::Finite(target))) => {
                    v(*a).is_infinite()
                        && !a.submasks().any(|d| matches!(v(d), Extended::Finite(x) if x >= *target))
                }
                _ => false,
            },
            Axiom::LocallyFinite => match w.sets[..] {
                [a] => v(a).is_infinite(),
                _ => false,
            },
            Axiom::ZeroCapacityRegular | Axiom::InnerRegular | Axiom::OuterRegular => false,
        }
    }
}

/// Values that can fill a set-function table for the generic checks.
pub trait SetValue: Clone + Ord {
    fn plus(&self, other: &Self) -> Self;
}

impl SetValue for Extended {
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
}

impl SetValue for Rational {
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
}

fn ground_of(len: usize) -> GroundSet {
    GroundSet::new(len.trailing_zeros() as usize).expect("table length is a power of two")
}

/// First `(A, B)` with `A = B \ {x}` and `H(A) > H(B)`, scanning `B` then `x`
/// in increasing order. Covering pairs suffice by transitivity.
pub fn monotone_violation<V: SetValue>(
    table: &[V],
    leq: impl Fn(&V, &V) -> bool,
) -> Option<(SubsetMask, SubsetMask)> {
    let ground = ground_of(table.len());
    for b in ground.subsets() {
        for x in b.iter() {
            let a = b.without(x);
            if !leq(&table[a.index()], &table[b.index()]) {
                return Some((a, b));
            }
        }
    }
    None
}

/// Lexicographically smallest `(E, F)` with `H(E∪F) > H(E) + H(F)`.
pub fn finite_subadditivity_violation<V: SetValue>(
    table: &[V],
    leq: impl Fn(&V, &V) -> bool,
) -> Option<(SubsetMask, SubsetMask)> {
    let ground = ground_of(table.len());
    for e in ground.subsets() {
        for f in ground.subsets() {
            let union = &table[e.union(f).index()];
            if !leq(union, &table[e.index()].plus(&table[f.index()])) {
                return Some((e, f));
            }
        }
    }
    None
}

/// Lexicographically smallest `(E, F)` with `H(E∩F) + H(E∪F) > H(E) + H(F)`.
pub fn strong_subadditivity_violation<V: SetValue>(
    table: &[V],
    leq: impl Fn(&V, &V) -> bool,
) -> Option<(SubsetMask, SubsetMask)> {
    let ground = ground_of(table.len());
    for e in ground.subsets() {
        for f in ground.subsets() {
            // Comparable pairs give identical sides.
            if e.is_subset_of(f) || f.is_subset_of(e) {
                continue;
            }
            let lhs = table[e.intersection(f).index()].plus(&table[e.union(f).index()]);
            let rhs = table[e.index()].plus(&table[f.index()]);
            if !leq(&lhs, &rhs) {
                return Some((e, f));
            }
        }
    }
    None
}

/// The contrapositive search behind "sublinear ⇒ strongly subadditive".
pub fn find_strong_subadditivity_violation(h: &Capacity) -> Option<(SubsetMask, SubsetMask)> {
    strong_subadditivity_violation(h.table(), |a, b| a <= b)
}

/// First `(A, M)` such that `H(A) = ∞` and no `D ⊆ A` has `M ≤ H(D) < ∞`,
/// over the given targets.
pub fn semifinite_failure(h: &Capacity, targets: &[Rational]) -> Option<(SubsetMask, Rational)> {
    let best = h.regularize();
    let top = targets.iter().max()?;
    for a in h.ground().subsets() {
        if h.value(a).is_infinite() {
            let reach = best.value(a).finite().cloned().unwrap_or_default();
            if reach < *top {
                let first = targets.iter().filter(|m| **m > reach).min().unwrap_or(top);
                return Some((a, first.clone()));
            }
        }
    }
    None
}

/// Semifinite targets: every finite value of the table plus one strictly
/// larger value. Reaching all of them is reaching every real `M`.
fn semifinite_targets(h: &Capacity) -> Vec<Rational> {
    let mut targets: Vec<Rational> = h.table().iter().filter_map(Extended::finite).cloned().collect();
    targets.push(h.max_finite() + Rational::one());
    targets.sort();
    targets.dedup();
    targets
}

pub fn check_axiom(h: &Capacity, axiom: Axiom) -> AxiomReport {
    let leq = |a: &Extended, b: &Extended| a <= b;
    let pair = |(e, f): (SubsetMask, SubsetMask), values: Vec<Extended>| Witness { sets: vec![e, f], values };
    match axiom {
        Axiom::EmptySet => {
            let at_empty = h.value(SubsetMask::EMPTY);
            let witness = (!at_empty.is_zero())
                .then(|| Witness { sets: vec![SubsetMask::EMPTY], values: vec![at_empty.clone()] });
            AxiomReport::from_witness(axiom, witness)
        }
        Axiom::Monotone => {
            let witness = monotone_violation(h.table(), leq)
                .map(|(a, b)| pair((a, b), vec![h.value(a).clone(), h.value(b).clone()]));
            AxiomReport::from_witness(axiom, witness)
        }
        Axiom::FiniteSubadditive => {
            AxiomReport::from_witness(axiom, subadditivity_witness(h))
        }
        Axiom::CountableSubadditive => {
            let witness = subadditivity_witness(h).or_else(|| {
                let at_empty = h.value(SubsetMask::EMPTY);
                (!at_empty.is_zero()).then(|| Witness { sets: vec![], values: vec![at_empty.clone()] })
            });
            AxiomReport::from_witness(axiom, witness).with_note(
                "finite ground set: every countable union is a finite union, so this is \
                 finite subadditivity together with H(∅) = 0",
            )
        }
        Axiom::StronglySubadditive => {
            let witness = find_strong_subadditivity_violation(h).map(|(e, f)| {
                let v = |s: SubsetMask| h.value(s).clone();
                pair((e, f), vec![v(e.intersection(f)), v(e.union(f)), v(e), v(f)])
            });
            AxiomReport::from_witness(axiom, witness)
        }
        Axiom::Semifinite => {
            let witness = semifinite_failure(h, &semifinite_targets(h)).map(|(a, m)| {
                let reach = h.regularize().value(a).clone();
                Witness { sets: vec![a], values: vec![h.value(a).clone(), Extended::Finite(m), reach] }
            });
            AxiomReport::from_witness(axiom, witness).with_note(
                "targets M are the finite table values plus one larger value; on a finite \
                 ground set this holds exactly when no value is infinite",
            )
        }
        Axiom::LocallyFinite => {
            let witness = h
                .ground()
                .subsets()
                .find(|a| h.value(*a).is_infinite())
                .map(|a| Witness { sets: vec![a], values: vec![Extended::Infinite] });
            AxiomReport::from_witness(axiom, witness)
                .with_note("every subset of a finite ground set is bounded: H(A) < ∞ for all A")
        }
        Axiom::ZeroCapacityRegular => AxiomReport::pass(axiom)
            .with_note("vacuous: every subset is open in the discrete topology"),
        Axiom::InnerRegular | Axiom::OuterRegular => AxiomReport::pass(axiom)
            .with_note("vacuous at finite scale: every monotone sequence of subsets stabilizes"),
    }
}

fn subadditivity_witness(h: &Capacity) -> Option<Witness> {
    finite_subadditivity_violation(h.table(), |a, b| a <= b).map(|(e, f)| Witness {
        sets: vec![e, f],
        values: vec![h.value(e.union(f)).clone(), h.value(e).clone(), h.value(f).clone()],
    })
}

/// Like [`check_axiom`] for the inequality axioms, accepting a violation of
/// at most `margin`. Used for tables whose entries were rounded.
pub fn check_axiom_within(h: &Capacity, axiom: Axiom, margin: &Rational) -> AxiomReport {
    let slack = Extended::Finite(margin.clone());
    let leq = |a: &Extended, b: &Extended| *a <= b + &slack;
    let values = |sets: &[SubsetMask]| sets.iter().map(|s| h.value(*s).clone()).collect();
    let witness = match axiom {
        Axiom::Monotone => monotone_violation(h.table(), leq),
        Axiom::FiniteSubadditive => finite_subadditivity_violation(h.table(), leq),
        Axiom::StronglySubadditive => strong_subadditivity_violation(h.table(), leq),
        _ => return check_axiom(h, axiom),
    }
    .map(|(e, f)| Witness { sets: vec![e, f], values: values(&[e, f]) });
    AxiomReport::from_witness(axiom, witness)
        .with_note(&format!("inequalities checked up to a margin of {}", crate::number::render(margin)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::int;

    fn cap(values: &[Extended]) -> Capacity {
        let n = values.len().trailing_zeros() as usize;
        Capacity::new(GroundSet::new(n).unwrap(), values.to_vec()).unwrap()
    }

    fn fin(values: &[i64]) -> Capacity {
        cap(&values.iter().map(|&v| Extended::from_int(v)).collect::<Vec<_>>())
    }

    #[test]
    fn strong_subadditivity_example() {
        let h = fin(&[0, 1, 1, 3]);
        let report = check_axiom(&h, Axiom::StronglySubadditive);
        assert!(!report.holds);
        let w = report.witness.as_ref().unwrap();
        assert_eq!(w.sets, vec![SubsetMask::singleton(0), SubsetMask::singleton(1)]);
        assert_eq!(w.values, vec![Extended::from_int(0), Extended::from_int(3), Extended::from_int(1), Extended::from_int(1)]);
        assert!(report.is_genuine(&h));
        assert_eq!(find_strong_subadditivity_violation(&h), Some((SubsetMask::singleton(0), SubsetMask::singleton(1))));
    }

    #[test]
    fn additive_has_no_violation() {
        let h = Capacity::additive(&[int(1), int(2), int(5)]).unwrap();
        assert_eq!(find_strong_subadditivity_violation(&h), None);
        for axiom in Axiom::ALL {
            assert!(check_axiom(&h, axiom).holds, "{axiom}");
        }
    }

    #[test]
    fn constant_ladder_is_monotone() {
        let h = fin(&[0, 1, 1, 1, 1, 1, 1, 1]);
        assert!(check_axiom(&h, Axiom::Monotone).holds);
        assert!(check_axiom(&h, Axiom::StronglySubadditive).holds);
    }

    #[test]
    fn semifinite_single_point() {
        let h = cap(&[Extended::zero(), Extended::Infinite]);
        let report = check_axiom(&h, Axiom::Semifinite);
        assert!(!report.holds);
        assert!(report.is_genuine(&h));
        assert_eq!(report.witness.unwrap().values[1], Extended::from_int(1));
        assert!(!check_axiom(&h, Axiom::LocallyFinite).holds);
    }

    #[test]
    fn monotone_and_empty_set_witnesses() {
        let h = fin(&[1, 3, 2, 2]);
        let m = check_axiom(&h, Axiom::Monotone);
        assert!(!m.holds && m.is_genuine(&h));
        let e = check_axiom(&h, Axiom::EmptySet);
        assert!(!e.holds && e.is_genuine(&h));
        let c = check_axiom(&fin(&[1, 1, 1, 2]), Axiom::CountableSubadditive);
        assert!(!c.holds && c.is_genuine(&fin(&[1, 1, 1, 2])));
        assert!(c.note.is_some());
    }

    #[test]
    fn finite_subadditivity_witness() {
        let h = fin(&[0, 0, 0, 1]);
        let r = check_axiom(&h, Axiom::FiniteSubadditive);
        assert!(!r.holds && r.is_genuine(&h));
        assert_eq!(r.witness.unwrap().sets, vec![SubsetMask::singleton(0), SubsetMask::singleton(1)]);
    }

    #[test]
    fn vacuous_axioms_carry_notes() {
        let h = fin(&[0, 1, 1, 3]);
        for axiom in [Axiom::ZeroCapacityRegular, Axiom::InnerRegular, Axiom::OuterRegular] {
            let r = check_axiom(&h, axiom);
            assert!(r.holds && r.note.is_some());
        }
    }

    #[test]
    fn margin_absorbs_rounding() {
        let h = Capacity::from_rationals(
            GroundSet::new(2).unwrap(),
            vec![int(0), int(1), int(1), crate::number::rat(2_000_001, 1_000_000)],
        )
        .unwrap();
        assert!(!check_axiom(&h, Axiom::FiniteSubadditive).holds);
        assert!(check_axiom_within(&h, Axiom::FiniteSubadditive, &crate::number::rat(1, 100_000)).holds);
    }

    #[test]
    fn axiom_names_round_trip() {
        for axiom in Axiom::ALL {
            assert_eq!(axiom.name().parse::<Axiom>().unwrap(), axiom);
        }
    }
}
