//! Seeded generators for test corpora.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Capacity;
use crate::domain::{GroundSet, SubsetMask};
use crate::number::{rat, Extended, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum CapacityKind {
    /// Random values closed under the monotone envelope, `H(∅) = 0`.
    RandomMonotone,
    /// A random weighted coverage function: monotone and submodular.
    RandomSubmodularMonotone,
    /// Pointwise maximum of two coverage functions: monotone and
    /// subadditive, usually not submodular.
    RandomSubadditiveMonotone,
    /// Random nonnegative point masses.
    Additive,
    /// `0` on sets of at most `m` points, `1` elsewhere.
    Threshold { m: usize },
    /// `0` on `∅`, `1` on nonempty sets of at most `m` points, `∞` elsewhere.
    BoundedThreshold { m: usize },
}

impl CapacityKind {
    /// The kinds whose output is guaranteed strongly subadditive.
    pub fn is_submodular(self) -> bool {
        matches!(
            self,
            CapacityKind::RandomSubmodularMonotone | CapacityKind::Additive | CapacityKind::Threshold { m: 0 }
        )
    }
}

fn random_value(rng: &mut ChaCha8Rng, max_numer: i64, denom: i64) -> Rational {
    rat(rng.gen_range(0..=max_numer), denom)
}

fn coverage(ground: GroundSet, rng: &mut ChaCha8Rng) -> Vec<Rational> {
    let items = 2 * ground.size() + 2;
    let weights: Vec<Rational> = (0..items).map(|_| rat(rng.gen_range(1..=6), 4)).collect();
    let covers: Vec<u64> = (0..ground.size()).map(|_| rng.gen_range(0..(1u64 << items))).collect();
    ground
        .subsets()
        .map(|a| {
            let covered = a.iter().fold(0u64, |acc, x| acc | covers[x]);
            (0..items).filter(|i| covered & (1 << i) != 0).map(|i| &weights[i]).sum()
        })
        .collect()
}

pub fn generate_capacity(kind: CapacityKind, ground: GroundSet, seed: u64) -> Capacity {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let table: Vec<Extended> = match kind {
        CapacityKind::RandomMonotone => {
            let raw: Vec<Rational> = ground.subsets().map(|_| random_value(&mut rng, 12, 4)).collect();
            let mut table: Vec<Rational> = Vec::with_capacity(raw.len());
            for a in ground.subsets() {
                let mut top = if a.is_empty() { Rational::default() } else { raw[a.index()].clone() };
                for x in a.iter() {
                    top = top.max(table[a.without(x).index()].clone());
                }
                table.push(top);
            }
            table.into_iter().map(Extended::Finite).collect()
        }
        CapacityKind::RandomSubmodularMonotone => {
            coverage(ground, &mut rng).into_iter().map(Extended::Finite).collect()
        }
        CapacityKind::RandomSubadditiveMonotone => {
            let first = coverage(ground, &mut rng);
            let second = coverage(ground, &mut rng);
            first.into_iter().zip(second).map(|(a, b)| Extended::Finite(a.max(b))).collect()
        }
        CapacityKind::Additive => {
            let masses: Vec<Rational> = (0..ground.size()).map(|_| random_value(&mut rng, 8, 2)).collect();
            return Capacity::additive(&masses).expect("ground set already validated");
        }
        CapacityKind::Threshold { m } => {
            ground.subsets().map(|a| Extended::from_int(i64::from(a.len() > m))).collect()
        }
        CapacityKind::BoundedThreshold { m } => ground
            .subsets()
            .map(|a| match a.len() {
                0 => Extended::zero(),
                len if len <= m => Extended::from_int(1),
                _ => Extended::Infinite,
            })
            .collect(),
    };
    Capacity::new(ground, table).expect("generated tables are well formed")
}

/// `H` with every set meeting `points` sent to `∞`.
///
/// Adding `∞·[A ∩ P ≠ ∅]` keeps monotonicity, finite subadditivity, and
/// strong subadditivity.
pub fn with_infinite_points(h: &Capacity, points: SubsetMask) -> Capacity {
    Capacity::from_fn(h.ground(), |a| {
        if a.intersection(points).is_empty() {
            h.value(a).clone()
        } else {
            Extended::Infinite
        }
    })
    .expect("same ground set")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::{check_axiom, Axiom};
    use crate::number::int;

    #[test]
    fn threshold_and_additive_examples() {
        let g3 = GroundSet::new(3).unwrap();
        let h = generate_capacity(CapacityKind::Threshold { m: 0 }, g3, 0);
        assert_eq!(h.value(SubsetMask::EMPTY), &Extended::zero());
        assert!(g3.subsets().skip(1).all(|a| h.value(a) == &Extended::from_int(1)));

        let h = Capacity::additive(&[int(1), int(2)]).unwrap();
        let expected: Vec<Extended> = [0, 1, 2, 3].iter().map(|&v| Extended::from_int(v)).collect();
        assert_eq!(h.table(), &expected[..]);
    }

    #[test]
    fn generators_meet_their_guarantees() {
        for n in 1..=4 {
            let g = GroundSet::new(n).unwrap();
            for seed in 0..20 {
                let sub = generate_capacity(CapacityKind::RandomSubmodularMonotone, g, seed);
                assert!(check_axiom(&sub, Axiom::StronglySubadditive).holds);
                assert!(check_axiom(&sub, Axiom::Monotone).holds);
                assert!(check_axiom(&sub, Axiom::EmptySet).holds);

                let mono = generate_capacity(CapacityKind::RandomMonotone, g, seed);
                assert!(check_axiom(&mono, Axiom::Monotone).holds);
                assert!(check_axiom(&mono, Axiom::EmptySet).holds);

                let subadd = generate_capacity(CapacityKind::RandomSubadditiveMonotone, g, seed);
                assert!(check_axiom(&subadd, Axiom::FiniteSubadditive).holds);
                assert!(check_axiom(&subadd, Axiom::Monotone).holds);

                let inf = with_infinite_points(&sub, SubsetMask::singleton(0));
                assert!(check_axiom(&inf, Axiom::StronglySubadditive).holds);
                assert!(check_axiom(&inf, Axiom::Monotone).holds);
            }
        }
    }

    #[test]
    fn seeds_are_deterministic() {
        let g = GroundSet::new(3).unwrap();
        assert_eq!(
            generate_capacity(CapacityKind::RandomMonotone, g, 11),
            generate_capacity(CapacityKind::RandomMonotone, g, 11)
        );
    }
}
