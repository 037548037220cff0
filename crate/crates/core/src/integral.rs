//! Exact Choquet integration by the layer-cake formula and the sublinearity
//! calculus built on it.
//!
//! For a nonnegative `f` with distinct positive finite values
//! `v_1 > … > v_m` (and `v_{m+1} = 0`),
//!
//! ```text
//! ∫ f dH = Σ_i (v_i − v_{i+1}) · H({f ≥ v_i})
//! ```
//!
//! plus `∞` when `f = ∞` on a set of positive capacity. The `∞`-part of an
//! `f` that is infinite only on an `H`-null set contributes nothing.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::capacity::{check_axiom, find_strong_subadditivity_violation, Axiom, Capacity};
use crate::domain::{GroundSet, SignedFunction, StepFunction, SubsetMask};
use crate::error::{Error, Result};
use crate::number::{int, Extended, Rational};

/// Default cap on the number of `(f, g)` pairs enumerated by
/// [`verify_sublinearity_equivalence`].
pub const DEFAULT_PAIR_BUDGET: u128 = 10_000_000;

/// One term of the layer-cake sum: `gap · capacity` at `{f ≥ level}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layer {
    pub level: Rational,
    pub gap: Rational,
    pub set: SubsetMask,
    pub capacity: Extended,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralValue {
    pub value: Extended,
    pub breakdown: Vec<Layer>,
    /// `H({f = ∞})` when `f` takes the value `∞`.
    pub infinite_part: Option<Extended>,
}

pub fn choquet(f: &StepFunction, h: &Capacity) -> Result<IntegralValue> {
    h.same_ground(f.ground())?;
    let levels = f.positive_levels();
    let mut breakdown = Vec::with_capacity(levels.len());
    let mut value = Extended::zero();
    for (i, level) in levels.iter().enumerate() {
        let next = levels.get(i + 1).cloned().unwrap_or_else(Rational::zero);
        let set = f.superlevel(level, false);
        let capacity = h.value(set).clone();
        let gap = level - next;
        value = &value + &capacity.scale(&gap);
        breakdown.push(Layer { level: level.clone(), gap, set, capacity });
    }
    let infinite_set = f.infinite_set();
    let infinite_part = (!infinite_set.is_empty()).then(|| h.value(infinite_set).clone());
    if infinite_part.as_ref().is_some_and(|c| !c.is_zero()) {
        value = Extended::Infinite;
    }
    Ok(IntegralValue { value, breakdown, infinite_part })
}

/// Shorthand for the value of [`choquet`].
pub fn integrate(f: &StepFunction, h: &Capacity) -> Result<Extended> {
    choquet(f, h).map(|v| v.value)
}

/// `∫ |g| dH` for a signed `g`.
pub fn integrate_abs(g: &SignedFunction, h: &Capacity) -> Result<Extended> {
    integrate(&g.abs(), h)
}

/// `∫_a^b H({f > t}) dt` for `0 ≤ a ≤ b`, with `b = None` meaning `∞`.
///
/// `t ↦ H({f > t})` is constant on each `[v_{i+1}, v_i)` and equals
/// `H({f = ∞})` beyond the largest finite value.
pub fn layer_integral(f: &StepFunction, h: &Capacity, a: &Rational, b: Option<&Rational>) -> Result<Extended> {
    h.same_ground(f.ground())?;
    let mut levels = f.positive_levels();
    levels.reverse();
    let mut pieces: Vec<(Rational, Option<Rational>, SubsetMask)> = Vec::with_capacity(levels.len() + 1);
    let mut lo = Rational::zero();
    for v in levels {
        pieces.push((lo.clone(), Some(v.clone()), f.superlevel(&lo, true)));
        lo = v;
    }
    pieces.push((lo, None, f.infinite_set()));

    let mut total = Extended::zero();
    for (lo, hi, set) in pieces {
        let start = lo.max(a.clone());
        let end = match (hi, b) {
            (Some(x), Some(y)) => Some(x.min(y.clone())),
            (Some(x), None) => Some(x),
            (None, Some(y)) => Some(y.clone()),
            (None, None) => None,
        };
        let capacity = h.value(set);
        match end {
            Some(end) if end > start => total = &total + &capacity.scale(&(end - start)),
            Some(_) => {}
            None => {
                if !capacity.is_zero() {
                    total = Extended::Infinite;
                }
            }
        }
    }
    Ok(total)
}

/// Recomputes the integral with the strict sets `{f > t}` and compares.
///
/// On `(v_{i+1}, v_i]` the strict superlevel set is `{f > v_{i+1}}`.
pub fn check_strict_vs_weak(f: &StepFunction, h: &Capacity) -> Result<bool> {
    let weak = choquet(f, h)?;
    let levels = f.positive_levels();
    let mut strict = Extended::zero();
    for (i, level) in levels.iter().enumerate() {
        let next = levels.get(i + 1).cloned().unwrap_or_else(Rational::zero);
        strict = &strict + &h.value(f.superlevel(&next, true)).scale(&(level - &next));
    }
    if let Some(part) = &weak.infinite_part {
        if !part.is_zero() {
            strict = Extended::Infinite;
        }
    }
    Ok(strict == weak.value)
}

/// Outcome of `a − b` in the extended reals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Gap {
    Finite(#[serde(serialize_with = "crate::io::ser_rational")] Rational),
    PlusInfinity,
    MinusInfinity,
    /// `∞ − ∞`.
    Indeterminate,
}

impl Gap {
    pub fn difference(a: &Extended, b: &Extended) -> Gap {
        match (a, b) {
            (Extended::Finite(x), Extended::Finite(y)) => Gap::Finite(x - y),
            (Extended::Infinite, Extended::Finite(_)) => Gap::PlusInfinity,
            (Extended::Finite(_), Extended::Infinite) => Gap::MinusInfinity,
            (Extended::Infinite, Extended::Infinite) => Gap::Indeterminate,
        }
    }

    /// True when the gap witnesses `∫(f+g) > ∫f + ∫g`.
    pub fn is_violation(&self) -> bool {
        match self {
            Gap::Finite(x) => x.is_positive(),
            Gap::PlusInfinity => true,
            Gap::MinusInfinity | Gap::Indeterminate => false,
        }
    }
}

/// `∫(f+g) dH − ∫f dH − ∫g dH`.
pub fn sublinearity_gap(f: &StepFunction, g: &StepFunction, h: &Capacity) -> Result<Gap> {
    let sum = integrate(&f.add(g)?, h)?;
    let parts = &integrate(f, h)? + &integrate(g, h)?;
    Ok(Gap::difference(&sum, &parts))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub value_bound: u64,
    pub denominator: u64,
    pub pairs: u128,
    /// Largest finite gap and the first pair attaining it.
    pub max_gap: Option<Rational>,
    pub argmax: Option<(StepFunction, StepFunction)>,
    /// A pair with `∫(f+g) = ∞ > ∫f + ∫g`, if any.
    pub infinite_violation: Option<(StepFunction, StepFunction)>,
    pub indeterminate_pairs: u128,
    pub strongly_subadditive: bool,
    pub strong_subadditivity_witness: Option<(SubsetMask, SubsetMask)>,
    /// `no pair violates sublinearity` ⇔ `strongly subadditive`.
    pub consistent: bool,
}

impl EquivalenceReport {
    pub fn sublinear_on_grid(&self) -> bool {
        self.infinite_violation.is_none() && self.max_gap.as_ref().is_none_or(|g| !g.is_positive())
    }
}

/// Exhaustive two-sided check of "sublinear ⇔ strongly subadditive" over all
/// pairs `f, g` with values in `{0, 1/k, 2/k, …, m}`.
///
/// The grid contains every indicator pair `(χ_E, χ_F)`, so a strong
/// subadditivity violation always shows up as a positive gap.
pub fn verify_sublinearity_equivalence(
    h: &Capacity,
    value_bound: u64,
    denominator: u64,
    budget: u128,
) -> Result<EquivalenceReport> {
    if value_bound == 0 || denominator == 0 {
        return Err(Error::Invalid("value bound and denominator must be positive".into()));
    }
    let monotone = check_axiom(h, Axiom::Monotone);
    if !monotone.holds {
        return Err(Error::Hypothesis(
            "the equivalence is stated for monotone capacities; this table is not monotone".into(),
        ));
    }
    let ground = h.ground();
    let n = ground.size() as u32;
    let steps = value_bound as u128 * denominator as u128;
    let base = steps + 1;
    let pairs = base.checked_pow(2 * n).unwrap_or(u128::MAX);
    if pairs > budget {
        return Err(Error::Budget { required: pairs, budget });
    }
    let base = base as usize;
    let sum_base = 2 * (base - 1) + 1;
    let count = base.pow(n);
    let k = int(denominator as i64);

    let function = |index: usize, radix: usize| -> StepFunction {
        let mut digits = vec![Rational::zero(); n as usize];
        let mut rest = index;
        for digit in digits.iter_mut() {
            *digit = Rational::from_integer((rest % radix).into()) / &k;
            rest /= radix;
        }
        StepFunction::from_rationals(digits).expect("grid functions are valid")
    };
    let singles: Vec<Extended> =
        (0..count).map(|i| integrate(&function(i, base), h)).collect::<Result<_>>()?;
    let sums: Vec<Extended> =
        (0..sum_base.pow(n)).map(|i| integrate(&function(i, sum_base), h)).collect::<Result<_>>()?;
    let sum_index = |a: usize, b: usize| -> usize {
        let (mut a, mut b, mut out, mut scale) = (a, b, 0, 1);
        for _ in 0..n {
            out += (a % base + b % base) * scale;
            a /= base;
            b /= base;
            scale *= sum_base;
        }
        out
    };

    let scan = match scaled_integers(singles.iter().chain(&sums)) {
        Some((denom, scaled)) => {
            let (singles_i, sums_i) = scaled.split_at(count);
            scan_pairs(singles_i, sums_i, &sum_index).map_gap(|g| Rational::new(g.into(), denom.clone()))
        }
        None => {
            let singles_r: Vec<Option<Rational>> = singles.iter().map(|v| v.finite().cloned()).collect();
            let sums_r: Vec<Option<Rational>> = sums.iter().map(|v| v.finite().cloned()).collect();
            scan_pairs(&singles_r, &sums_r, &sum_index).map_gap(|g| g)
        }
    };

    let witness = find_strong_subadditivity_violation(h);
    let mut report = EquivalenceReport {
        value_bound,
        denominator,
        pairs: (count as u128) * (count as u128),
        max_gap: scan.best.as_ref().map(|(g, _, _)| g.clone()),
        argmax: scan.best.as_ref().map(|(_, a, b)| (function(*a, base), function(*b, base))),
        infinite_violation: scan.plus_infinity.map(|(a, b)| (function(a, base), function(b, base))),
        indeterminate_pairs: scan.indeterminate,
        strongly_subadditive: witness.is_none(),
        strong_subadditivity_witness: witness,
        consistent: false,
    };
    report.consistent = report.sublinear_on_grid() == report.strongly_subadditive;
    Ok(report)
}

/// Writes every finite value as `numerator / D` over one common denominator,
/// when all numerators fit comfortably in an `i128`.
fn scaled_integers<'a>(values: impl Iterator<Item = &'a Extended> + Clone) -> Option<(num_bigint::BigInt, Vec<Option<i128>>)> {
    let denom = values
        .clone()
        .filter_map(Extended::finite)
        .fold(num_bigint::BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let limit = num_bigint::BigInt::one() << 120;
    let mut out = Vec::new();
    for v in values {
        match v {
            Extended::Finite(x) => {
                let scaled = x.numer() * (&denom / x.denom());
                if scaled.abs() >= limit {
                    return None;
                }
                out.push(Some(scaled.to_i128()?));
            }
            Extended::Infinite => out.push(None),
        }
    }
    Some((denom, out))
}

trait ExactNum: Clone + Ord + Send + Sync {
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
}

impl ExactNum for i128 {
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
}

impl ExactNum for Rational {
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
}

struct PairScan<T> {
    best: Option<(T, usize, usize)>,
    plus_infinity: Option<(usize, usize)>,
    indeterminate: u128,
}

impl<T> PairScan<T> {
    fn empty() -> Self {
        PairScan { best: None, plus_infinity: None, indeterminate: 0 }
    }

    fn map_gap<U>(self, f: impl Fn(T) -> U) -> PairScan<U> {
        PairScan {
            best: self.best.map(|(g, a, b)| (f(g), a, b)),
            plus_infinity: self.plus_infinity,
            indeterminate: self.indeterminate,
        }
    }
}

impl<T: ExactNum> PairScan<T> {
    /// Deterministic merge: larger gap wins, ties go to the smaller pair.
    fn merge(self, other: Self) -> Self {
        let best = match (self.best, other.best) {
            (Some(x), Some(y)) => {
                if y.0 > x.0 || (y.0 == x.0 && (y.1, y.2) < (x.1, x.2)) {
                    Some(y)
                } else {
                    Some(x)
                }
            }
            (x, y) => x.or(y),
        };
        let plus_infinity = match (self.plus_infinity, other.plus_infinity) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        };
        PairScan { best, plus_infinity, indeterminate: self.indeterminate + other.indeterminate }
    }
}

fn scan_row<T: ExactNum>(a: usize, singles: &[Option<T>], sums: &[Option<T>], sum_index: &(impl Fn(usize, usize) -> usize + Sync)) -> PairScan<T> {
    let mut scan = PairScan::empty();
    // The gap is symmetric in (f, g); the smallest argmax pair has a ≤ b.
    for b in a..singles.len() {
        let lhs = &sums[sum_index(a, b)];
        let rhs = match (&singles[a], &singles[b]) {
            (Some(x), Some(y)) => Some(x.plus(y)),
            _ => None,
        };
        match (lhs, rhs) {
            (Some(l), Some(r)) => {
                let gap = l.minus(&r);
                if scan.best.as_ref().is_none_or(|(g, _, _)| gap > *g) {
                    scan.best = Some((gap, a, b));
                }
            }
            (None, Some(_)) => {
                if scan.plus_infinity.is_none() {
                    scan.plus_infinity = Some((a, b));
                }
            }
            (Some(_), None) => {}
            (None, None) => scan.indeterminate += if a == b { 1 } else { 2 },
        }
    }
    scan
}

fn scan_pairs<T: ExactNum>(
    singles: &[Option<T>],
    sums: &[Option<T>],
    sum_index: &(impl Fn(usize, usize) -> usize + Sync),
) -> PairScan<T> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..singles.len())
            .into_par_iter()
            .map(|a| scan_row(a, singles, sums, sum_index))
            .reduce(PairScan::empty, PairScan::merge)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..singles.len()).map(|a| scan_row(a, singles, sums, sum_index)).fold(PairScan::empty(), PairScan::merge)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailReport {
    /// `∫ |T_k(f) − f| dH`.
    pub truncation_error: Extended,
    /// `∫_k^∞ H({f > s}) ds`, read off the layer cake of `f`.
    pub tail: Extended,
    pub agree: bool,
}

pub fn truncation_tail(f: &StepFunction, h: &Capacity, k: &Rational) -> Result<TailReport> {
    if !k.is_positive() {
        return Err(Error::Invalid("truncation height must be positive".into()));
    }
    // |T_k(f) − f| = (f − k)^+, with ∞ − k = ∞.
    let truncation_error = integrate(&f.shift_down(k), h)?;
    let cake = choquet(f, h)?;
    let mut tail = Extended::zero();
    for layer in &cake.breakdown {
        let below = &layer.level - &layer.gap;
        let width = layer.level.clone().max(k.clone()) - below.max(k.clone());
        tail = &tail + &layer.capacity.scale(&width);
    }
    if cake.infinite_part.is_some_and(|c| !c.is_zero()) {
        tail = Extended::Infinite;
    }
    let agree = truncation_error == tail;
    Ok(TailReport { truncation_error, tail, agree })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiSublinearityReport {
    /// `∫ |g + h| dH`.
    pub lhs: Extended,
    /// `2 ∫ |g| dH + 2 ∫ |h| dH`.
    pub rhs: Extended,
    pub holds: bool,
    /// The inequality is guaranteed only for finitely subadditive `H`.
    pub finitely_subadditive: bool,
}

pub fn quasi_sublinearity_check(g: &SignedFunction, h: &SignedFunction, cap: &Capacity) -> Result<QuasiSublinearityReport> {
    let lhs = integrate_abs(&g.add(h)?, cap)?;
    let two = int(2);
    let rhs = &integrate_abs(g, cap)?.scale(&two) + &integrate_abs(h, cap)?.scale(&two);
    Ok(QuasiSublinearityReport {
        holds: lhs <= rhs,
        lhs,
        rhs,
        finitely_subadditive: check_axiom(cap, Axiom::FiniteSubadditive).holds,
    })
}

/// The two estimates that carry sublinearity from `ℕ/k`-valued functions to
/// arbitrary finite ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FloorChainReport {
    /// `∫ (⌊kf⌋/k + ⌊kg⌋/k) dH`.
    pub floored: Extended,
    /// `∫ (f + g − 2/k)^+ dH`.
    pub shifted: Extended,
    /// `∫ f dH + ∫ g dH`.
    pub bound: Extended,
    pub holds: bool,
}

pub fn floor_scaling_chain(f: &StepFunction, g: &StepFunction, h: &Capacity, k: u64) -> Result<FloorChainReport> {
    let floored_sum = f.floor_scale(k)?.add(&g.floor_scale(k)?)?;
    let floored = integrate(&floored_sum, h)?;
    let shifted = integrate(&f.add(g)?.shift_down(&Rational::new(2.into(), k.into())), h)?;
    let bound = &integrate(f, h)? + &integrate(g, h)?;
    let holds = shifted <= floored && floored <= bound;
    Ok(FloorChainReport { floored, shifted, bound, holds })
}

/// All functions on `ground` with values in `{0, 1/k, …, m}`, in index order.
pub fn grid_functions(ground: GroundSet, value_bound: u64, denominator: u64) -> impl Iterator<Item = StepFunction> {
    let base = (value_bound * denominator + 1) as usize;
    let n = ground.size();
    let k = int(denominator as i64);
    (0..base.pow(n as u32)).map(move |index| {
        let mut values = vec![Rational::zero(); n];
        let mut rest = index;
        for value in values.iter_mut() {
            *value = Rational::from_integer((rest % base).into()) / &k;
            rest /= base;
        }
        StepFunction::from_rationals(values).expect("grid functions are valid")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::{generate_capacity, CapacityKind};
    use crate::number::rat;

    fn cap(values: &[Rational]) -> Capacity {
        let n = values.len().trailing_zeros() as usize;
        Capacity::from_rationals(GroundSet::new(n).unwrap(), values.to_vec()).unwrap()
    }

    fn step(values: &[Rational]) -> StepFunction {
        StepFunction::from_rationals(values.to_vec()).unwrap()
    }

    /// Midpoint Riemann sum of t ↦ H({f > t}) over (0, max f].
    fn riemann(f: &StepFunction, h: &Capacity, step: &Rational) -> Rational {
        let top = f.max_value().finite().unwrap().clone();
        let mut total = Rational::zero();
        let mut t = step / int(2);
        while t < top {
            total += h.value(f.superlevel(&t, true)).finite().unwrap() * step;
            t += step;
        }
        total
    }

    #[test]
    fn four_and_a_half() {
        let h = cap(&[int(0), int(1), int(2), rat(5, 2)]);
        let f = step(&[int(3), int(1)]);
        let v = choquet(&f, &h).unwrap();
        assert_eq!(v.value, Extended::Finite(rat(9, 2)));
        assert_eq!(v.breakdown.len(), 2);
        assert_eq!(v.breakdown[0].gap, int(2));
        assert_eq!(v.breakdown[1].capacity, Extended::Finite(rat(5, 2)));
        // Riemann oracle at step 1/1024.
        let r = riemann(&f, &h, &rat(1, 1024));
        assert!((r - rat(9, 2)).abs() <= int(3) * rat(1, 1024) * rat(5, 2));
        assert!(check_strict_vs_weak(&f, &h).unwrap());
    }

    #[test]
    fn indicator_and_constant() {
        let h = generate_capacity(CapacityKind::RandomMonotone, GroundSet::new(3).unwrap(), 3);
        for e in h.ground().subsets() {
            let f = StepFunction::indicator(h.ground(), e);
            assert_eq!(integrate(&f, &h).unwrap(), h.value(e).clone());
        }
        let c = StepFunction::constant(h.ground(), rat(7, 3)).unwrap();
        assert_eq!(integrate(&c, &h).unwrap(), h.value(h.ground().full()).scale(&rat(7, 3)));
        let zero = StepFunction::zero(h.ground());
        assert_eq!(integrate(&zero, &h).unwrap(), Extended::zero());
        assert!(check_strict_vs_weak(&zero, &h).unwrap());
    }

    #[test]
    fn infinity_conventions() {
        let g = GroundSet::new(2).unwrap();
        let h = Capacity::new(g, vec![Extended::zero(), Extended::zero(), Extended::from_int(1), Extended::from_int(1)]).unwrap();
        let f = StepFunction::new(vec![Extended::Infinite, Extended::zero()]).unwrap();
        assert_eq!(integrate(&f, &h).unwrap(), Extended::zero());
        let f = StepFunction::new(vec![Extended::zero(), Extended::Infinite]).unwrap();
        assert_eq!(integrate(&f, &h).unwrap(), Extended::Infinite);
        let h = Capacity::new(g, vec![Extended::zero(), Extended::Infinite, Extended::from_int(1), Extended::Infinite]).unwrap();
        let f = step(&[int(1), int(0)]);
        assert_eq!(integrate(&f, &h).unwrap(), Extended::Infinite);
    }

    #[test]
    fn universe_mismatch() {
        let h = cap(&[int(0), int(1)]);
        assert!(matches!(choquet(&step(&[int(1), int(2)]), &h), Err(Error::UniverseMismatch { .. })));
    }

    #[test]
    fn gap_examples() {
        let h = cap(&[int(0), int(1), int(1), int(3)]);
        let g = h.ground();
        let f = StepFunction::indicator(g, SubsetMask::singleton(0));
        let k = StepFunction::indicator(g, SubsetMask::singleton(1));
        assert_eq!(sublinearity_gap(&f, &k, &h).unwrap(), Gap::Finite(int(1)));
        assert_eq!(sublinearity_gap(&f, &StepFunction::zero(g), &h).unwrap(), Gap::Finite(int(0)));
        assert_eq!(Gap::difference(&Extended::Infinite, &Extended::Infinite), Gap::Indeterminate);
        assert!(Gap::PlusInfinity.is_violation());
    }

    #[test]
    fn equivalence_on_violating_capacity() {
        let h = cap(&[int(0), int(1), int(1), int(3)]);
        let r = verify_sublinearity_equivalence(&h, 1, 1, DEFAULT_PAIR_BUDGET).unwrap();
        assert_eq!(r.max_gap, Some(int(1)));
        let (f, g) = r.argmax.clone().unwrap();
        assert_eq!(f, StepFunction::indicator(h.ground(), SubsetMask::singleton(0)));
        assert_eq!(g, StepFunction::indicator(h.ground(), SubsetMask::singleton(1)));
        assert!(!r.strongly_subadditive);
        assert!(r.consistent);
        assert_eq!(r.pairs, 16);
    }

    #[test]
    fn equivalence_on_additive_and_submodular() {
        let h = Capacity::additive(&[int(1), rat(1, 2), int(2)]).unwrap();
        let r = verify_sublinearity_equivalence(&h, 2, 1, DEFAULT_PAIR_BUDGET).unwrap();
        assert_eq!(r.max_gap, Some(int(0)));
        assert!(r.consistent && r.strongly_subadditive);

        let h = generate_capacity(CapacityKind::RandomSubmodularMonotone, GroundSet::new(3).unwrap(), 5);
        let r = verify_sublinearity_equivalence(&h, 3, 2, DEFAULT_PAIR_BUDGET).unwrap();
        assert!(r.max_gap.unwrap() <= int(0));
        assert!(r.consistent);
    }

    #[test]
    fn equivalence_guards() {
        let h = cap(&[int(0), int(2), int(1), int(1)]);
        assert!(matches!(verify_sublinearity_equivalence(&h, 1, 1, 100), Err(Error::Hypothesis(_))));
        let h = generate_capacity(CapacityKind::Additive, GroundSet::new(4).unwrap(), 1);
        assert!(matches!(verify_sublinearity_equivalence(&h, 3, 2, 1000), Err(Error::Budget { .. })));
    }

    #[test]
    fn equivalence_with_infinite_values() {
        let g = GroundSet::new(2).unwrap();
        let h = Capacity::new(g, vec![Extended::zero(), Extended::from_int(1), Extended::Infinite, Extended::Infinite]).unwrap();
        let r = verify_sublinearity_equivalence(&h, 1, 1, DEFAULT_PAIR_BUDGET).unwrap();
        assert!(r.strongly_subadditive);
        assert!(r.indeterminate_pairs > 0);
        assert!(r.consistent);
    }

    #[test]
    fn truncation_tail_examples() {
        let h = Capacity::additive(&[int(1), int(1)]).unwrap();
        let r = truncation_tail(&step(&[int(5), int(1)]), &h, &int(2)).unwrap();
        assert_eq!(r.truncation_error, Extended::from_int(3));
        assert_eq!(r.tail, Extended::from_int(3));
        assert!(r.agree);
        let r = truncation_tail(&step(&[int(1), int(2)]), &h, &int(2)).unwrap();
        assert_eq!(r.truncation_error, Extended::zero());
        let null = Capacity::new(GroundSet::new(2).unwrap(), vec![Extended::zero(), Extended::zero(), Extended::from_int(1), Extended::from_int(1)]).unwrap();
        let f = StepFunction::new(vec![Extended::Infinite, Extended::zero()]).unwrap();
        for k in 1..5 {
            let r = truncation_tail(&f, &null, &int(k)).unwrap();
            assert_eq!(r.truncation_error, Extended::zero());
            assert!(r.agree);
        }
    }

    #[test]
    fn layer_integral_matches_choquet() {
        let h = generate_capacity(CapacityKind::RandomMonotone, GroundSet::new(3).unwrap(), 9);
        let f = step(&[rat(5, 2), int(1), rat(1, 3)]);
        assert_eq!(layer_integral(&f, &h, &int(0), None).unwrap(), integrate(&f, &h).unwrap());
        let split = &layer_integral(&f, &h, &int(0), Some(&rat(4, 3))).unwrap()
            + &layer_integral(&f, &h, &rat(4, 3), None).unwrap();
        assert_eq!(split, integrate(&f, &h).unwrap());
        assert_eq!(layer_integral(&f, &h, &int(2), Some(&int(2))).unwrap(), Extended::zero());
    }

    #[test]
    fn quasi_sublinearity_examples() {
        let h = generate_capacity(CapacityKind::RandomSubadditiveMonotone, GroundSet::new(3).unwrap(), 2);
        let g = SignedFunction::new(vec![int(1), int(-2), rat(1, 2)]).unwrap();
        let zero = SignedFunction::zero(h.ground());
        assert!(quasi_sublinearity_check(&g, &zero, &h).unwrap().holds);
        let e = StepFunction::indicator(h.ground(), SubsetMask::from_bits(0b101)).to_signed().unwrap();
        let r = quasi_sublinearity_check(&e, &e, &h).unwrap();
        assert_eq!(r.lhs, h.value(SubsetMask::from_bits(0b101)).scale(&int(2)));
        assert!(r.holds && r.finitely_subadditive);
    }

    #[test]
    fn floor_chain_on_submodular() {
        let h = generate_capacity(CapacityKind::RandomSubmodularMonotone, GroundSet::new(3).unwrap(), 4);
        let f = step(&[rat(7, 10), rat(13, 5), int(0)]);
        let g = step(&[rat(1, 3), rat(1, 7), rat(9, 4)]);
        for k in 1..8 {
            assert!(floor_scaling_chain(&f, &g, &h, k).unwrap().holds, "k = {k}");
        }
    }

    #[test]
    fn grid_size() {
        assert_eq!(grid_functions(GroundSet::new(2).unwrap(), 1, 2).count(), 9);
    }
}
