//! Capacities: total set functions `H: 2^X → [0, ∞]` stored as dense tables,
//! the axiom checks, and the derived capacities (contraction, semifinite
//! regularization, corpus generators).

mod axioms;
mod generate;

pub use axioms::{
    check_axiom, check_axiom_within, find_strong_subadditivity_violation, semifinite_failure, Axiom,
    AxiomReport, SetValue, Witness,
};
pub use axioms::{finite_subadditivity_violation, monotone_violation, strong_subadditivity_violation};
pub use generate::{generate_capacity, with_infinite_points, CapacityKind};

use crate::domain::{GroundSet, SubsetMask};
use crate::error::{Error, Result};
use crate::number::{Extended, Rational};

/// A set function on a finite ground set. No axiom is presumed: even
/// monotonicity is something to check, not an invariant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Capacity {
    ground: GroundSet,
    table: Vec<Extended>,
}

impl Capacity {
    pub fn new(ground: GroundSet, table: Vec<Extended>) -> Result<Self> {
        if table.len() != ground.subset_count() {
            return Err(Error::TableLength { got: table.len(), expected: ground.subset_count() });
        }
        if let Some(v) = table.iter().find(|v| v.is_negative()) {
            return Err(Error::Negative(v.render()));
        }
        Ok(Capacity { ground, table })
    }

    /// Builds a table from finite rationals indexed by mask.
    pub fn from_rationals(ground: GroundSet, table: Vec<Rational>) -> Result<Self> {
        Self::new(ground, table.into_iter().map(Extended::Finite).collect())
    }

    pub fn from_fn(ground: GroundSet, mut value: impl FnMut(SubsetMask) -> Extended) -> Result<Self> {
        Self::new(ground, ground.subsets().map(&mut value).collect())
    }

    /// The additive capacity `A ↦ Σ_{x∈A} w_x`.
    pub fn additive(masses: &[Rational]) -> Result<Self> {
        let ground = GroundSet::new(masses.len())?;
        Self::from_fn(ground, |a| Extended::Finite(a.iter().map(|x| &masses[x]).sum()))
    }

    pub fn zero(ground: GroundSet) -> Self {
        Capacity { ground, table: vec![Extended::zero(); ground.subset_count()] }
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn table(&self) -> &[Extended] {
        &self.table
    }

    pub fn value(&self, set: SubsetMask) -> &Extended {
        &self.table[set.index()]
    }

    pub fn is_finite(&self) -> bool {
        self.table.iter().all(Extended::is_finite)
    }

    pub fn same_ground(&self, ground: GroundSet) -> Result<()> {
        self.ground.check_same(&ground)
    }

    /// Largest finite entry of the table (zero for an all-infinite table).
    pub fn max_finite(&self) -> Rational {
        self.table.iter().filter_map(Extended::finite).max().cloned().unwrap_or_default()
    }

    /// `A ↦ H(A ∩ S)`.
    pub fn contract(&self, set: SubsetMask) -> Result<Capacity> {
        if !self.ground.contains(set) {
            return Err(Error::IndexOutOfRange {
                index: 31 - set.bits().leading_zeros() as usize,
                size: self.ground.size(),
            });
        }
        Capacity::from_fn(self.ground, |a| self.value(a.intersection(set)).clone())
    }

    /// Semifinite regularization `A ↦ max{ H(D) : D ⊆ A, H(D) < ∞ }`.
    ///
    /// The maximum over an empty collection is zero. The result is monotone
    /// whatever `H` is.
    pub fn regularize(&self) -> Capacity {
        // best[A] = max(finite H(A), max_x best[A \ {x}]), filled in mask order.
        let mut best: Vec<Rational> = Vec::with_capacity(self.table.len());
        for a in self.ground.subsets() {
            let mut top = self.value(a).finite().cloned().unwrap_or_default();
            for x in a.iter() {
                let below = &best[a.without(x).index()];
                if *below > top {
                    top = below.clone();
                }
            }
            best.push(top);
        }
        Capacity { ground: self.ground, table: best.into_iter().map(Extended::Finite).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::int;

    fn cap(values: &[i64]) -> Capacity {
        let n = values.len().trailing_zeros() as usize;
        Capacity::from_rationals(GroundSet::new(n).unwrap(), values.iter().map(|&v| int(v)).collect()).unwrap()
    }

    #[test]
    fn contract_examples() {
        let h = cap(&[0, 1, 1, 3]);
        let g = h.ground();
        assert_eq!(h.contract(g.full()).unwrap(), h);
        assert_eq!(h.contract(SubsetMask::EMPTY).unwrap(), Capacity::zero(g));
        assert_eq!(h.contract(SubsetMask::singleton(0)).unwrap(), cap(&[0, 1, 0, 1]));
        // H(∅) ≠ 0 contracts to the constant H(∅) table.
        assert_eq!(cap(&[2, 3, 3, 4]).contract(SubsetMask::EMPTY).unwrap(), cap(&[2, 2, 2, 2]));
    }

    #[test]
    fn regularize_examples() {
        let g1 = GroundSet::new(1).unwrap();
        let h = Capacity::new(g1, vec![Extended::zero(), Extended::Infinite]).unwrap();
        assert_eq!(h.regularize(), Capacity::zero(g1));

        let h = cap(&[0, 1, 2, 5]);
        assert_eq!(h.regularize(), h);

        let g2 = GroundSet::new(2).unwrap();
        let h = Capacity::new(
            g2,
            vec![Extended::zero(), Extended::from_int(2), Extended::Infinite, Extended::Infinite],
        )
        .unwrap();
        assert_eq!(h.regularize(), cap(&[0, 2, 0, 2]));
    }

    #[test]
    fn regularize_is_monotone_for_non_monotone_input() {
        let h = cap(&[0, 5, 1, 2]);
        let r = h.regularize();
        assert!(check_axiom(&r, Axiom::Monotone).holds);
        assert_eq!(r, cap(&[0, 5, 1, 5]));
    }

    #[test]
    fn rejects_bad_tables() {
        let g = GroundSet::new(2).unwrap();
        assert!(matches!(Capacity::from_rationals(g, vec![int(0); 3]), Err(Error::TableLength { .. })));
        assert!(matches!(Capacity::from_rationals(g, vec![int(-1); 4]), Err(Error::Negative(_))));
    }
}
