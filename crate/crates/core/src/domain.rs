//! Finite ground sets, subset masks, and step functions with their
//! level-set calculus.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::number::{floor, Extended, Rational};

/// Largest supported ground set. Capacities are dense `2^n` tables.
pub const MAX_GROUND_SET: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroundSet {
    size: usize,
}

impl GroundSet {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 || size > MAX_GROUND_SET {
            return Err(Error::GroundSetSize(size));
        }
        Ok(GroundSet { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Number of subsets, `2^n`.
    pub fn subset_count(&self) -> usize {
        1usize << self.size
    }

    pub fn full(&self) -> SubsetMask {
        SubsetMask((1u32 << self.size) - 1)
    }

    /// All subsets in increasing mask order.
    pub fn subsets(&self) -> impl Iterator<Item = SubsetMask> + Clone {
        (0..self.subset_count() as u32).map(SubsetMask)
    }

    pub fn subset<I: IntoIterator<Item = usize>>(&self, indices: I) -> Result<SubsetMask> {
        let mut mask = SubsetMask::EMPTY;
        for index in indices {
            if index >= self.size {
                return Err(Error::IndexOutOfRange { index, size: self.size });
            }
            mask = mask.with(index);
        }
        Ok(mask)
    }

    pub fn mask(&self, bits: u32) -> Result<SubsetMask> {
        if u64::from(bits) >= (1u64 << self.size) {
            return Err(Error::Invalid(format!("mask {bits} has bits outside {} points", self.size)));
        }
        Ok(SubsetMask(bits))
    }

    pub fn contains(&self, mask: SubsetMask) -> bool {
        mask.is_subset_of(self.full())
    }

    pub(crate) fn check_same(&self, other: &GroundSet) -> Result<()> {
        if self.size != other.size {
            return Err(Error::UniverseMismatch { left: self.size, right: other.size });
        }
        Ok(())
    }
}

/// A subset of a ground set of at most [`MAX_GROUND_SET`] points, as a bitmask.
///
/// Ordering is by mask value, which is the tie-break order used by every
/// witness search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetMask(u32);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    pub fn from_bits(bits: u32) -> Self {
        SubsetMask(bits)
    }

    pub fn singleton(index: usize) -> Self {
        SubsetMask(1 << index)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// Position of this subset in a capacity table.
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn contains(self, index: usize) -> bool {
        index < 32 && self.0 & (1 << index) != 0
    }

    pub fn with(self, index: usize) -> Self {
        SubsetMask(self.0 | (1 << index))
    }

    pub fn without(self, index: usize) -> Self {
        SubsetMask(self.0 & !(1 << index))
    }

    pub fn union(self, other: Self) -> Self {
        SubsetMask(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        SubsetMask(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        SubsetMask(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |i| bits & (1 << i) != 0)
    }

    /// Every subset of `self`, including `∅` and `self`, in increasing order.
    pub fn submasks(self) -> impl Iterator<Item = SubsetMask> {
        let full = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let current = next?;
            next = if current == full { None } else { Some((current.wrapping_sub(full)) & full) };
            Some(SubsetMask(current))
        })
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, index) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{index}")?;
        }
        f.write_str("}")
    }
}

/// A nonnegative function `X → [0, ∞]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StepFunction {
    values: Vec<Extended>,
}

impl StepFunction {
    pub fn new(values: Vec<Extended>) -> Result<Self> {
        GroundSet::new(values.len())?;
        if let Some(v) = values.iter().find(|v| v.is_negative()) {
            return Err(Error::Negative(v.render()));
        }
        Ok(StepFunction { values })
    }

    pub fn from_rationals(values: Vec<Rational>) -> Result<Self> {
        Self::new(values.into_iter().map(Extended::Finite).collect())
    }

    pub fn zero(ground: GroundSet) -> Self {
        StepFunction { values: vec![Extended::zero(); ground.size()] }
    }

    pub fn constant(ground: GroundSet, c: Rational) -> Result<Self> {
        Self::from_rationals(vec![c; ground.size()])
    }

    /// `χ_A`.
    pub fn indicator(ground: GroundSet, set: SubsetMask) -> Self {
        let values = (0..ground.size())
            .map(|x| Extended::from_int(i64::from(set.contains(x))))
            .collect();
        StepFunction { values }
    }

    pub fn ground(&self) -> GroundSet {
        GroundSet { size: self.values.len() }
    }

    pub fn values(&self) -> &[Extended] {
        &self.values
    }

    pub fn value(&self, x: usize) -> &Extended {
        &self.values[x]
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(Extended::is_finite)
    }

    /// Finite values as rationals, or `None` when some entry is `∞`.
    pub fn finite_values(&self) -> Option<Vec<Rational>> {
        self.values.iter().map(|v| v.finite().cloned()).collect()
    }

    /// `{f > t}` when `strict`, `{f ≥ t}` otherwise. `∞` exceeds every level.
    pub fn superlevel(&self, t: &Rational, strict: bool) -> SubsetMask {
        let level = Extended::Finite(t.clone());
        let mut mask = SubsetMask::EMPTY;
        for (x, v) in self.values.iter().enumerate() {
            let inside = if strict { *v > level } else { *v >= level };
            if inside {
                mask = mask.with(x);
            }
        }
        mask
    }

    /// `{f = ∞}`.
    pub fn infinite_set(&self) -> SubsetMask {
        let mut mask = SubsetMask::EMPTY;
        for (x, v) in self.values.iter().enumerate() {
            if v.is_infinite() {
                mask = mask.with(x);
            }
        }
        mask
    }

    /// Distinct finite positive values in decreasing order.
    pub fn positive_levels(&self) -> Vec<Rational> {
        let mut levels: Vec<Rational> = self
            .values
            .iter()
            .filter_map(|v| v.finite().filter(|x| x.is_positive()).cloned())
            .collect();
        levels.sort_unstable_by(|a, b| b.cmp(a));
        levels.dedup();
        levels
    }

    /// Componentwise clamp to `[0, k]`.
    pub fn truncate(&self, k: &Rational) -> StepFunction {
        let cap = Extended::Finite(k.clone());
        let values = self.values.iter().map(|v| v.clone().min(cap.clone())).collect();
        StepFunction { values }
    }

    /// `⌊k·f⌋ / k`, computed exactly. Rejects `∞` entries.
    pub fn floor_scale(&self, k: u64) -> Result<StepFunction> {
        if k == 0 {
            return Err(Error::Invalid("floor scale needs k ≥ 1".into()));
        }
        let k = Rational::from_integer(BigInt::from(k));
        let mut values = Vec::with_capacity(self.values.len());
        for (x, v) in self.values.iter().enumerate() {
            let v = v.finite().ok_or(Error::InfiniteFloor(x))?;
            values.push(Extended::Finite(Rational::from_integer(floor(&(v * &k))) / &k));
        }
        Ok(StepFunction { values })
    }

    /// `c·f` for `c ≥ 0`, with `0·∞ = 0`.
    pub fn scale(&self, c: &Rational) -> Result<StepFunction> {
        if c.is_negative() {
            return Err(Error::Negative(crate::number::render(c)));
        }
        Ok(StepFunction { values: self.values.iter().map(|v| v.scale(c)).collect() })
    }

    pub fn add(&self, other: &StepFunction) -> Result<StepFunction> {
        self.ground().check_same(&other.ground())?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(StepFunction { values })
    }

    /// `(f − c)^+`, with `∞ − c = ∞`.
    pub fn shift_down(&self, c: &Rational) -> StepFunction {
        let values = self
            .values
            .iter()
            .map(|v| match v {
                Extended::Finite(x) if x > c => Extended::Finite(x - c),
                Extended::Finite(_) => Extended::zero(),
                Extended::Infinite => Extended::Infinite,
            })
            .collect();
        StepFunction { values }
    }

    /// `f ≤ g` pointwise.
    pub fn le(&self, other: &StepFunction) -> bool {
        self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }

    pub fn max_value(&self) -> Extended {
        self.values.iter().max().cloned().unwrap_or_default()
    }

    pub fn to_signed(&self) -> Option<SignedFunction> {
        self.finite_values().map(|values| SignedFunction { values })
    }
}

/// A finite real-valued function `X → ℝ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedFunction {
    values: Vec<Rational>,
}

impl SignedFunction {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        GroundSet::new(values.len())?;
        Ok(SignedFunction { values })
    }

    pub fn zero(ground: GroundSet) -> Self {
        SignedFunction { values: vec![Rational::zero(); ground.size()] }
    }

    pub fn ground(&self) -> GroundSet {
        GroundSet { size: self.values.len() }
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn add(&self, other: &SignedFunction) -> Result<SignedFunction> {
        self.ground().check_same(&other.ground())?;
        Ok(SignedFunction { values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect() })
    }

    pub fn sub(&self, other: &SignedFunction) -> Result<SignedFunction> {
        self.ground().check_same(&other.ground())?;
        Ok(SignedFunction { values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect() })
    }

    pub fn scale(&self, c: &Rational) -> SignedFunction {
        SignedFunction { values: self.values.iter().map(|v| v * c).collect() }
    }

    pub fn abs(&self) -> StepFunction {
        StepFunction { values: self.values.iter().map(|v| Extended::Finite(v.abs())).collect() }
    }

    /// Componentwise clamp to `[−k, k]`.
    pub fn truncate(&self, k: &Rational) -> SignedFunction {
        let lo = -k.clone();
        let values = self.values.iter().map(|v| v.clone().clamp(lo.clone(), k.clone())).collect();
        SignedFunction { values }
    }
}
