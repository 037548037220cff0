//! The property suite: every invariant of the library checked on a seeded
//! corpus, counted per property.
//!
//! Groups of properties run in parallel. Each group draws from its own RNG
//! seeded from the suite seed and the group's position, and results are
//! collected in declaration order, so the report does not depend on the
//! number of threads.

use std::collections::BTreeSet;

use choquet_core::capacity::{check_axiom, generate_capacity, with_infinite_points, Axiom, Capacity, CapacityKind};
use choquet_core::convergence::{chebyshev_audit, converse_dct_audit, dct_harness, fatou_harness, qu_audit, FunctionSequence, Tolerance};
use choquet_core::domain::{GroundSet, SignedFunction, StepFunction, SubsetMask};
use choquet_core::duality::{
    dominated_scaling, domination_inequality_audit, dual_value, greedy_measure, is_dominated, AdditiveMeasure, DualMethod,
};
use choquet_core::hausdorff::{content, export_capacity, export_table, Beta, ContentValue, DyadicCellSet, DyadicDomain};
use choquet_core::integral::{floor_scaling_chain, integrate, integrate_abs, sublinearity_gap, verify_sublinearity_equivalence, Gap};
use choquet_core::io::{
    capacity_json, parse_capacity, parse_family, parse_rational_value, parse_sequence, parse_signed_function, parse_step_function,
    rational_json, sequence_json, signed_function_json, step_function_json, subset_json,
};
use choquet_core::nesting::{count_superlevels, indicator_sum, lemma_step, nest};
use choquet_core::number::{int, pow2, rat, Extended, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::{budget, render, CliError, CliResult, Report, SuiteArgs};

/// Largest ground set the random corpus may use; exhaustive pair scans are
/// `4^n` per capacity.
pub const MAX_SUITE_N: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Ground sets `1..=max_n`.
    pub max_n: usize,
    /// Random draws per property.
    pub count: usize,
    /// Generator seeds per capacity kind and ground set.
    pub seeds_per_kind: u64,
    /// Sublinearity grid `{0, 1/k, …, m}`.
    pub m: u64,
    pub k: u64,
    pub pair_budget: u128,
    /// Dyadic `(d, L)` sizes for the exported-content checks.
    pub dyadic: Vec<(u32, u32)>,
    pub betas: Vec<Rational>,
    /// Worker threads; `None` uses the rayon default.
    pub threads: Option<usize>,
}

impl SuiteConfig {
    pub fn new(seed: u64, max_n: usize) -> Self {
        SuiteConfig {
            seed,
            max_n,
            count: 200,
            seeds_per_kind: 4,
            m: 3,
            k: 2,
            pair_budget: choquet_core::integral::DEFAULT_PAIR_BUDGET,
            dyadic: vec![(1, 1), (1, 2), (1, 3), (2, 1)],
            betas: vec![rat(1, 2), int(1), rat(3, 2)],
            threads: None,
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        if !(1..=MAX_SUITE_N).contains(&self.max_n) {
            return Err(CliError(format!("--n must lie in 1..={MAX_SUITE_N}")));
        }
        if self.m == 0 || self.k == 0 {
            return Err(CliError("--m and --k must be positive".into()));
        }
        let base = u128::from(self.m * self.k + 1);
        let pairs = base.checked_pow(2 * self.max_n.min(3) as u32).unwrap_or(u128::MAX);
        if pairs > self.pair_budget {
            return Err(CliError(format!(
                "the sublinearity grid needs {pairs} pairs per capacity; raise {} above {}",
                crate::BUDGET_VAR,
                self.pair_budget
            )));
        }
        if let Some((d, l)) = self.dyadic.iter().find(|(d, l)| d * l > 3) {
            return Err(CliError(format!("dyadic size d = {d}, L = {l} is too large for exhaustive export checks")));
        }
        if self.threads == Some(0) {
            return Err(CliError("--threads must be positive".into()));
        }
        Ok(())
    }
}

/// Outcome of one property.
#[derive(Clone, Debug, PartialEq)]
pub struct Tally {
    pub module: &'static str,
    pub name: &'static str,
    pub cases: u64,
    pub failures: u64,
    /// The first failing case.
    pub witness: Option<Value>,
}

impl Tally {
    fn new(module: &'static str, name: &'static str) -> Self {
        Tally { module, name, cases: 0, failures: 0, witness: None }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    fn json(&self) -> Value {
        json!({
            "module": self.module,
            "property": self.name,
            "cases": self.cases,
            "failures": self.failures,
            "witness": self.witness,
        })
    }
}

type Group = fn(&SuiteConfig, &Corpus, &mut ChaCha8Rng) -> Vec<Tally>;

const GROUPS: [Group; 10] = [
    domain_properties,
    capacity_properties,
    integral_properties,
    sublinearity_properties,
    nesting_properties,
    duality_properties,
    hausdorff_properties,
    convergence_properties,
    harness_properties,
    round_trip_properties,
];

const FINITE_KINDS: [CapacityKind; 6] = [
    CapacityKind::RandomMonotone,
    CapacityKind::RandomSubmodularMonotone,
    CapacityKind::RandomSubadditiveMonotone,
    CapacityKind::Additive,
    CapacityKind::Threshold { m: 0 },
    CapacityKind::Threshold { m: 1 },
];

/// Capacities shared by the exhaustive properties.
pub struct Corpus {
    pub capacities: Vec<Capacity>,
}

impl Corpus {
    pub fn build(config: &SuiteConfig) -> Self {
        let mut capacities = Vec::new();
        for n in 1..=config.max_n {
            let g = GroundSet::new(n).expect("validated size");
            for s in 0..config.seeds_per_kind {
                let seed = config.seed.wrapping_mul(1_000_003).wrapping_add(s * 97 + n as u64);
                for kind in FINITE_KINDS {
                    capacities.push(generate_capacity(kind, g, seed));
                }
                capacities.push(generate_capacity(CapacityKind::BoundedThreshold { m: s as usize % n }, g, seed));
                let base = generate_capacity(CapacityKind::RandomSubmodularMonotone, g, seed ^ 0x5a5a);
                capacities.push(with_infinite_points(&base, SubsetMask::singleton(s as usize % n)));
            }
        }
        Corpus { capacities }
    }

    fn pick<'a>(&'a self, rng: &mut ChaCha8Rng) -> &'a Capacity {
        &self.capacities[rng.gen_range(0..self.capacities.len())]
    }

    fn filtered(&self, keep: impl Fn(&Capacity) -> bool) -> Vec<&Capacity> {
        self.capacities.iter().filter(|h| keep(h)).collect()
    }
}

fn choose<'a>(rng: &mut ChaCha8Rng, pool: &[&'a Capacity]) -> Option<&'a Capacity> {
    (!pool.is_empty()).then(|| pool[rng.gen_range(0..pool.len())])
}

fn holds(h: &Capacity, axiom: Axiom) -> bool {
    check_axiom(h, axiom).holds
}

fn strongly_subadditive_monotone(h: &Capacity) -> bool {
    holds(h, Axiom::Monotone) && holds(h, Axiom::StronglySubadditive)
}

fn random_rational(rng: &mut ChaCha8Rng, max_numer: i64) -> Rational {
    rat(rng.gen_range(0..=max_numer), rng.gen_range(1..=4))
}

fn random_step(rng: &mut ChaCha8Rng, n: usize) -> StepFunction {
    StepFunction::from_rationals((0..n).map(|_| random_rational(rng, 16)).collect()).expect("nonnegative")
}

fn random_signed(rng: &mut ChaCha8Rng, n: usize) -> SignedFunction {
    SignedFunction::new((0..n).map(|_| random_rational(rng, 12) - int(6)).collect()).expect("finite")
}

fn random_set(rng: &mut ChaCha8Rng, n: usize) -> SubsetMask {
    SubsetMask::from_bits(rng.gen_range(0..1u32 << n))
}

fn values(f: &StepFunction) -> Value {
    step_function_json(f)
}

fn domain_properties(config: &SuiteConfig, _: &Corpus, rng: &mut ChaCha8Rng) -> Vec<Tally> {
    let mut nested = Tally::new("domain", "superlevel sets shrink as the level rises");
    let mut truncation = Tally::new("domain", "truncation keeps superlevel sets below k and empties them above");
    let mut floor = Tally::new("domain", "floor scaling stays within 1/k below f");
    let mut overlap = Tally::new("domain", "indicator sums equal 2 exactly on the intersection");
    for _ in 0..config.count {
        let n = rng.gen_range(1..=config.max_n);
        let mut f = random_step(rng, n);
        if rng.gen_bool(0.2) {
            let mut v = f.values().to_vec();
            v[rng.gen_range(0..n)] = Extended::Infinite;
            f = StepFunction::new(v).expect("nonnegative");
        }
        let (a, b) = (random_rational(rng, 16), random_rational(rng, 16));
        let (t, t2) = if a <= b { (a, b) } else { (b, a) };
        for strict in [true, false] {
            nested.check(f.superlevel(&t2, strict).is_subset_of(f.superlevel(&t, strict)), || {
                json!({ "f": values(&f), "t": rational_json(&t), "t'": rational_json(&t2), "strict": strict })
            });
        }

        let k = random_rational(rng, 12) + rat(1, 4);
        let truncated = f.truncate(&k);
        let level = random_rational(rng, 16);
        let expected = if level < k { f.superlevel(&level, true) } else { SubsetMask::EMPTY };
        truncation.check(truncated.superlevel(&level, true) == expected, || {
            json!({ "f": values(&f), "k": rational_json(&k), "t": rational_json(&level) })
        });

        let finite = random_step(rng, n);
        let scale = rng.gen_range(1..=6u64);
        let floored = finite.floor_scale(scale).expect("finite values");
        let within = floored.values().iter().zip(finite.values()).all(|(lo, v)| {
            let (lo, v) = (lo.finite().expect("finite"), v.finite().expect("finite"));
            lo <= v && v - lo < rat(1, scale as i64)
        });
        floor.check(within, || json!({ "f": values(&finite), "k": scale }));

        let g = GroundSet::new(n).expect("valid size");
        let (e, s) = (random_set(rng, n), random_set(rng, n));
        let sum = StepFunction::indicator(g, e).add(&StepFunction::indicator(g, s)).expect("same ground set");
        let two = sum.superlevel(&int(2), false);
        overlap.check(two == e.intersection(s), || json!({ "a": subset_json(e), "b": subset_json(s) }));
    }
    vec![nested, truncation, floor, overlap]
}

fn capacity_properties(_: &SuiteConfig, corpus: &Corpus, _: &mut ChaCha8Rng) -> Vec<Tally> {
    let mut sound = Tally::new("capacity", "every axiom witness violates its inequality");
    let mut agree = Tally::new("capacity", "regularization keeps finite values of a monotone capacity");
    let mut semifinite = Tally::new("capacity", "regularization is semifinite");
    let mut inherit = Tally::new("capacity", "regularization inherits subadditivity axioms");
    let mut contract = Tally::new("capacity", "contraction preserves monotonicity and strong subadditivity");
    let inherited = [Axiom::FiniteSubadditive, Axiom::CountableSubadditive, Axiom::StronglySubadditive];
    for (i, h) in corpus.capacities.iter().enumerate() {
        for axiom in Axiom::ALL {
            let report = check_axiom(h, axiom);
            if !report.holds {
                sound.check(report.is_genuine(h), || json!({ "capacity": i, "axiom": axiom.name() }));
            }
        }
        let r = h.regularize();
        if holds(h, Axiom::Monotone) {
            let changed = h.ground().subsets().find(|&a| h.value(a).is_finite() && h.value(a) != r.value(a));
            agree.check(changed.is_none(), || json!({ "capacity": i, "set": changed.map(subset_json) }));
        }
        semifinite.check(holds(&r, Axiom::Semifinite), || json!({ "capacity": i }));
        for axiom in inherited {
            if holds(h, axiom) {
                inherit.check(holds(&r, axiom), || json!({ "capacity": i, "axiom": axiom.name() }));
            }
        }
        let keep: Vec<Axiom> = [Axiom::Monotone, Axiom::StronglySubadditive].into_iter().filter(|&a| holds(h, a)).collect();
        if !keep.is_empty() {
            for s in h.ground().subsets() {
                let c = h.contract(s).expect("subset of the ground set");
                let lost = keep.iter().find(|&&a| !holds(&c, a));
                contract.check(lost.is_none(), || json!({ "capacity": i, "set": subset_json(s), "axiom": lost.map(|a| a.name()) }));
            }
        }
    }
    vec![sound, agree, semifinite, inherit, contract]
}

fn integral_properties(config: &SuiteConfig, corpus: &Corpus, rng: &mut ChaCha8Rng) -> Vec<Tally> {
    let mut homogeneous = Tally::new("integral", "positive homogeneity");
    let mut monotone = Tally::new("integral", "monotonicity in the integrand");
    let mut riemann = Tally::new("integral", "layer cake agrees with a midpoint Riemann sum");
    let step = 2f64.powi(-10);
    for _ in 0..config.count {
        let h = corpus.pick(rng);
        let n = h.ground().size();
        let f = random_step(rng, n);
        let c = random_rational(rng, 12);
        let scaled = integrate(&f.scale(&c).expect("nonnegative"), h).expect("same ground");
        homogeneous.check(scaled == integrate(&f, h).expect("same ground").scale(&c), || {
            json!({ "f": values(&f), "c": rational_json(&c), "capacity": capacity_json(h) })
        });

        if holds(h, Axiom::Monotone) {
            let g = random_step(rng, n);
            let lower = StepFunction::new(f.values().iter().zip(g.values()).map(|(a, b)| a.clone().min(b.clone())).collect())
                .expect("nonnegative");
            monotone.check(integrate(&lower, h).expect("same ground") <= integrate(&f, h).expect("same ground"), || {
                json!({ "f": values(&lower), "g": values(&f), "capacity": capacity_json(h) })
            });
        }

        if h.is_finite() {
            let xs: Vec<f64> = f.values().iter().map(render::decimal).collect();
            let top = xs.iter().cloned().fold(0.0, f64::max);
            let mut sum = 0.0;
            let mut t = step / 2.0;
            while t < top {
                let set = (0..n).filter(|&x| xs[x] > t).fold(SubsetMask::EMPTY, |m, x| m.with(x));
                sum += step * render::decimal(h.value(set));
                t += step;
            }
            let exact = render::decimal(&integrate(&f, h).expect("same ground"));
            let tolerance = top * step * render::decimal(h.value(h.ground().full())) + 1e-9;
            riemann.check((exact - sum).abs() <= tolerance, || json!({ "f": values(&f), "exact": exact, "riemann": sum }));
        }
    }
    vec![homogeneous, monotone, riemann]
}

fn sublinearity_properties(config: &SuiteConfig, corpus: &Corpus, rng: &mut ChaCha8Rng) -> Vec<Tally> {
    let mut equivalence = Tally::new("integral", "sublinearity on the grid iff strong subadditivity");
    let mut chain = Tally::new("integral", "floor-scaling chain under strong subadditivity");
    let mut discrete = Tally::new("integral", "sublinearity for N/k-valued functions under strong subadditivity");
    for (i, h) in corpus.capacities.iter().enumerate().filter(|(_, h)| h.ground().size() <= 3) {
        if !holds(h, Axiom::Monotone) {
            continue;
        }
        match verify_sublinearity_equivalence(h, config.m, config.k, config.pair_budget) {
            Ok(report) => {
                let ss = holds(h, Axiom::StronglySubadditive);
                equivalence.check(report.consistent && report.sublinear_on_grid() == ss, || {
                    json!({ "capacity": i, "report": render::equivalence(&report) })
                });
            }
            Err(e) => equivalence.check(false, || json!({ "capacity": i, "error": e.to_string() })),
        }
    }
    let pool = corpus.filtered(|h| h.is_finite() && strongly_subadditive_monotone(h));
    for _ in 0..config.count {
        let Some(h) = choose(rng, &pool) else { break };
        let n = h.ground().size();
        let (f, g) = (random_step(rng, n), random_step(rng, n));
        let k = rng.gen_range(1..=6u64);
        let report = floor_scaling_chain(&f, &g, h, k).expect("finite functions");
        chain.check(report.holds, || json!({ "f": values(&f), "g": values(&g), "k": k, "capacity": capacity_json(h) }));

        let on_grid = |rng: &mut ChaCha8Rng| {
            StepFunction::from_rationals((0..n).map(|_| rat(rng.gen_range(0..=12), k as i64)).collect()).expect("nonnegative")
        };
        let (f, g) = (on_grid(rng), on_grid(rng));
        let gap = sublinearity_gap(&f, &g, h).expect("same ground");
        discrete.check(!gap.is_violation(), || json!({ "f": values(&f), "g": values(&g), "gap": render::gap(&gap) }));
    }
    vec![equivalence, chain, discrete]
}

fn nesting_properties(_: &SuiteConfig, _: &Corpus, rng: &mut ChaCha8Rng) -> Vec<Tally> {
    let mut conservation = Tally::new("nesting", "indicator sums are conserved");
    let mut shape = Tally::new("nesting", "outputs are nested and contained in the last set");
    let mut consistent = Tally::new("nesting", "the chain equals the superlevel sets of the indicator sum");
    // The sweep lives on four points whatever the corpus size.
    let g = GroundSet::new(4).expect("valid size");
    let kinds = [CapacityKind::RandomSubmodularMonotone, CapacityKind::Additive, CapacityKind::Threshold { m: 0 }];
    let capacities: Vec<Capacity> = (0..5).map(|i| generate_capacity(kinds[i % kinds.len()], g, rng.gen())).collect();
    let mut sums = Tally::new("nesting", "capacity sums decrease under strong subadditivity");
    for h in &capacities {
        sums.check(strongly_subadditive_monotone(h), || json!({ "generated": capacity_json(h) }));
    }
    for len in 1..=4u32 {
        for code in 0..16usize.pow(len) {
            let sets: Vec<SubsetMask> = (0..len).map(|i| SubsetMask::from_bits(((code >> (4 * i)) & 15) as u32)).collect();
            let witness = || json!({ "family": sets.iter().map(|s| subset_json(*s)).collect::<Vec<_>>() });
            let lemma = lemma_step(&sets).expect("nonempty family");
            let chain = nest(&sets).expect("nonempty family");
            let top = *lemma.last().expect("nonempty");
            conservation.check(indicator_sum(&lemma, 4) == indicator_sum(&sets, 4) && indicator_sum(chain.sets(), 4) == indicator_sum(&sets, 4), witness);
            shape.check(chain.is_nested() && lemma.iter().all(|d| d.is_subset_of(top)), witness);
            consistent.check(chain.sets() == count_superlevels(&sets).as_slice(), witness);
            for h in &capacities {
                let total = |family: &[SubsetMask]| family.iter().map(|s| h.value(*s).clone()).sum::<Extended>();
                let (original, lemma_sum, nested) = (total(&sets), total(&lemma), total(chain.sets()));
                sums.check(nested <= lemma_sum && lemma_sum <= original, || {
                    json!({ "family": witness()["family"], "sums": [original.render(), lemma_sum.render(), nested.render()] })
                });
            }
        }
    }
    vec![conservation, shape, sums, consistent]
}

fn duality_properties(config: &SuiteConfig, corpus: &Corpus, rng: &mut ChaCha8Rng) -> Vec<Tally> {
    let mut weak = Tally::new("duality", "weak duality");
    let mut strong = Tally::new("duality", "strong duality: LP, greedy and Choquet values coincide");
    let mut lp = Tally::new("duality", "LP optima are dominated and achieve their objective");
    let mut fatou = Tally::new("duality", "Fatou inequality for dominated measures");
    for _ in 0..config.count {
        let h = corpus.pick(rng);
        let n = h.ground().size();
        let f = random_step(rng, n);
        if holds(h, Axiom::Monotone) && holds(h, Axiom::FiniteSubadditive) {
            let raw = AdditiveMeasure::new((0..n).map(|_| random_rational(rng, 12)).collect()).expect("nonnegative");
            let mu = dominated_scaling(&raw, h).expect("same ground");
            let audit = domination_inequality_audit(&f, &mu, h).expect("dominated");
            weak.check(audit.holds, || json!({ "f": values(&f), "mu": render::measure(&mu), "capacity": capacity_json(h) }));

            // f ≤ liminf f_n on the tail, so Σfμ ≤ Σf_nμ for every tail term.
            let terms: Vec<StepFunction> = (0..4).map(|_| f.add(&random_step(rng, n)).expect("same ground")).collect();
            let base = mu.integrate(&f).expect("same ground");
            let tail_min = terms.iter().map(|t| mu.integrate(t).expect("same ground")).min().expect("nonempty");
            fatou.check(base <= tail_min, || json!({ "f": values(&f), "mu": render::measure(&mu) }));
        }
        if h.is_finite() && strongly_subadditive_monotone(h) {
            let choquet = integrate(&f, h).expect("same ground");
            let report = dual_value(&f, h, DualMethod::ExactLp).expect("finite instance");
            let greedy = greedy_measure(&f, h).expect("monotone").integrate(&f).expect("same ground");
            strong.check(report.dual_value == choquet && greedy == choquet && report.gap == Gap::Finite(int(0)), || {
                json!({ "f": values(&f), "capacity": capacity_json(h), "report": render::duality(&report) })
            });
        }
        match dual_value(&f, h, DualMethod::ExactLp) {
            Ok(report) => {
                if let Some(mu) = &report.optimal_measure {
                    let achieved = mu.integrate(&f).expect("same ground") == report.dual_value;
                    lp.check(achieved && is_dominated(mu, h).expect("same ground"), || {
                        json!({ "f": values(&f), "capacity": capacity_json(h), "report": render::duality(&report) })
                    });
                }
            }
            Err(e) => lp.check(false, || json!({ "f": values(&f), "error": e.to_string() })),
        }
        let masses: Vec<Rational> = (0..n).map(|_| random_rational(rng, 12)).collect();
        let additive = Capacity::additive(&masses).expect("nonnegative");
        let expected: Rational = masses.iter().zip(f.values()).map(|(w, v)| w * v.finite().expect("finite")).sum();
        let report = dual_value(&f, &additive, DualMethod::ExactLp).expect("finite instance");
        lp.check(report.dual_value == Extended::Finite(expected), || json!({ "f": values(&f), "masses": masses.iter().map(rational_json).collect::<Vec<_>>() }));
    }
    vec![weak, strong, lp, fatou]
}

/// Minimum cost over every set of dyadic intervals covering `E`, at `d = 1`.
///
/// A cover's cost depends only on how many intervals it uses per level, so
/// each covered set keeps its distinct level counts and exact costs are
/// compared once per count vector.
fn brute_force_contents(depth: u32, beta: &Beta) -> Vec<ContentValue> {
    let nodes: Vec<(u32, u64)> = (0..=depth).flat_map(|level| (0..1u64 << level).map(move |c| (level, c))).collect();
    let cells = 1usize << depth;
    let mut counts: Vec<BTreeSet<Vec<u32>>> = vec![BTreeSet::new(); 1 << cells];
    for choice in 0u32..1 << nodes.len() {
        let mut covered = 0usize;
        let mut per_level = vec![0u32; depth as usize + 1];
        for (i, &(level, c)) in nodes.iter().enumerate() {
            if choice & (1 << i) != 0 {
                let width = 1usize << (depth - level);
                covered |= ((1usize << width) - 1) << (c as usize * width);
                per_level[level as usize] += 1;
            }
        }
        counts[covered].insert(per_level);
    }
    let cost = |per_level: &Vec<u32>| {
        per_level.iter().enumerate().fold(ContentValue::zero(beta), |acc, (level, &k)| {
            (0..k).fold(acc, |acc, _| &acc + &ContentValue::side_power(beta, level as u32))
        })
    };
    let best: Vec<Option<ContentValue>> = counts.iter().map(|set| set.iter().map(cost).min()).collect();
    (0..1usize << cells)
        .map(|e| (0..1usize << cells).filter(|m| m & e == e).filter_map(|m| best[m].clone()).min().expect("the full cover exists"))
        .collect()
}

fn hausdorff_properties(config: &SuiteConfig, _: &Corpus, rng: &mut ChaCha8Rng) -> Vec<Tally> {
    let mut monotone = Tally::new("hausdorff", "content is monotone in the set");
    let mut similar = Tally::new("hausdorff", "content scales by 2^(-β) inside a child cube");
    let mut optimal = Tally::new("hausdorff", "dynamic programming matches brute-force covers");
    let mut exported = Tally::new("hausdorff", "exported content is monotone and strongly subadditive");
    let mut single = Tally::new("hausdorff", "a single cell costs 2^(-Lβ)");
    let deep = DyadicDomain::new(1, 3).expect("valid domain");
    let shallow = DyadicDomain::new(1, 2).expect("valid domain");
    for _ in 0..config.count {
        let beta = &config.betas[rng.gen_range(0..config.betas.len())];
        let b = Beta::new(beta).expect("valid β");
        let (e, f) = (rng.gen_range(0..256u32), rng.gen_range(0..256u32));
        let set = |domain, bits| DyadicCellSet::from_mask(domain, SubsetMask::from_bits(bits)).expect("within the grid");
        let small = content(&set(deep, e & f), beta).expect("valid β").value;
        let large = content(&set(deep, e), beta).expect("valid β").value;
        monotone.check(small <= large, || json!({ "e": e & f, "f": e, "beta": rational_json(beta) }));

        let left = e & 0x0f;
        let mut scaled = ContentValue::zero(&b);
        for q in content(&set(shallow, left), beta).expect("valid β").cubes {
            scaled = &scaled + &ContentValue::side_power(&b, q.level + 1);
        }
        similar.check(content(&set(deep, left), beta).expect("valid β").value == scaled, || json!({ "set": left, "beta": rational_json(beta) }));
    }
    for depth in 1..=3 {
        let domain = DyadicDomain::new(1, depth).expect("valid domain");
        for beta in &config.betas {
            let b = Beta::new(beta).expect("valid β");
            for (mask, expected) in brute_force_contents(depth, &b).iter().enumerate() {
                let e = DyadicCellSet::from_mask(domain, SubsetMask::from_bits(mask as u32)).expect("within the grid");
                let value = content(&e, beta).expect("valid β").value;
                optimal.check(value == *expected, || json!({ "depth": depth, "set": mask, "beta": rational_json(beta), "dp": value.to_string(), "brute_force": expected.to_string() }));
            }
        }
    }
    for &(d, depth) in &config.dyadic {
        let domain = DyadicDomain::new(d, depth).expect("validated size");
        for beta in &config.betas {
            let table = export_table(domain, beta).expect("exportable");
            let rounded = export_capacity(domain, beta).expect("exportable");
            for axiom in [Axiom::Monotone, Axiom::FiniteSubadditive, Axiom::StronglySubadditive] {
                let ok = table.check_axiom(axiom).expect("inequality axiom").holds && rounded.check_axiom(axiom).holds;
                exported.check(ok, || json!({ "d": d, "depth": depth, "beta": rational_json(beta), "axiom": axiom.name() }));
            }
            let b = Beta::new(beta).expect("valid β");
            for cell in 0..domain.cell_count() {
                let one = DyadicCellSet::new(domain, [domain.cell_coords(cell)]).expect("within the grid");
                single.check(content(&one, beta).expect("valid β").value == ContentValue::side_power(&b, depth), || {
                    json!({ "d": d, "depth": depth, "cell": cell, "beta": rational_json(beta) })
                });
            }
        }
    }
    vec![monotone, similar, optimal, exported, single]
}

fn convergence_properties(config: &SuiteConfig, corpus: &Corpus, rng: &mut ChaCha8Rng) -> Vec<Tally> {
    let mut minimal = Tally::new("convergence", "the uniform-tail bad set is minimal");
    let mut chebyshev = Tally::new("convergence", "Chebyshev inequality for monotone capacities");
    let mut converse = Tally::new("convergence", "converse dominated convergence bounds");
    for _ in 0..config.count {
        let h = corpus.pick(rng);
        let n = h.ground().size();
        let len = rng.gen_range(1..=5);
        let terms: Vec<SignedFunction> = (0..len).map(|_| random_signed(rng, n)).collect();
        let seq = FunctionSequence::new(terms, random_signed(rng, n), Vec::new()).expect("same ground");
        let eta = random_rational(rng, 8) + rat(1, 4);
        let audit = qu_audit(&seq, h, &Tolerance::new(eta.clone(), None, 0)).expect("valid tolerance");
        let removable = audit
            .minimal_bad_set
            .iter()
            .find(|&x| (0..len).all(|k| seq.deviation(k).value(x) <= &Extended::Finite(eta.clone())));
        minimal.check(removable.is_none(), || json!({ "sequence": sequence_json(&seq), "eta": rational_json(&eta), "point": removable }));

        if holds(h, Axiom::Monotone) {
            let (f_n, f) = (random_signed(rng, n), random_signed(rng, n));
            let k = rng.gen_range(0..6);
            let check = chebyshev_audit(&f_n, &f, h, k).expect("same ground");
            chebyshev.check(check.holds, || json!({ "f_n": signed_function_json(&f_n), "f": signed_function_json(&f), "n": k, "check": render::check(&check) }));
        }

        if holds(h, Axiom::Monotone) && holds(h, Axiom::CountableSubadditive) {
            let f = random_signed(rng, n);
            if integrate_abs(&f, h).expect("same ground").is_infinite() {
                continue;
            }
            let terms = premise_sequence(rng, h, &f);
            let seq = FunctionSequence::new(terms, f.clone(), Vec::new()).expect("same ground");
            match converse_dct_audit(&seq, h) {
                Ok(audit) => converse.check(audit.all_guaranteed_hold(), || json!({ "sequence": sequence_json(&seq), "audit": render::audit(&audit) })),
                Err(e) => converse.check(false, || json!({ "sequence": sequence_json(&seq), "error": e.to_string() })),
            }
        }
    }
    vec![minimal, chebyshev, converse]
}

/// Terms with `∫|f_k − f| dH ≤ 4^(−k)`, perturbing `f` on sets of finite
/// positive capacity.
fn premise_sequence(rng: &mut ChaCha8Rng, h: &Capacity, f: &SignedFunction) -> Vec<SignedFunction> {
    let n = h.ground().size();
    let len = rng.gen_range(1..=6);
    (0..len)
        .map(|k| {
            let e = SubsetMask::from_bits(rng.gen_range(1..1u32 << n));
            let height = match h.value(e) {
                Extended::Finite(c) if *c > int(0) => pow2(-2 * k as i64) / c,
                _ => return f.clone(),
            };
            let sign = if rng.gen_bool(0.5) { int(1) } else { int(-1) };
            let values = f.values().iter().enumerate().map(|(x, v)| if e.contains(x) { v + &sign * &height } else { v.clone() }).collect();
            SignedFunction::new(values).expect("finite")
        })
        .collect()
}

fn harness_properties(config: &SuiteConfig, corpus: &Corpus, rng: &mut ChaCha8Rng) -> Vec<Tally> {
    let mut fatou = Tally::new("convergence", "Fatou harness reports no violation on stabilizing sequences");
    let mut dct = Tally::new("convergence", "dominated convergence harness reports no violation on stabilizing sequences");
    let pool = corpus.filtered(|h| holds(h, Axiom::Monotone) && holds(h, Axiom::FiniteSubadditive));
    for _ in 0..config.count {
        let Some(h) = choose(rng, &pool) else { break };
        let n = h.ground().size();
        let limit = random_step(rng, n);
        let limit_signed = limit.to_signed().expect("finite");
        // A noisy prefix that settles on the limit from some index on.
        let settle = rng.gen_range(0..4);
        let terms: Vec<SignedFunction> = (0..settle + 2)
            .map(|i| if i < settle { random_step(rng, n).to_signed().expect("finite") } else { limit_signed.clone() })
            .collect();
        let seq = FunctionSequence::new(terms, limit_signed, Vec::new()).expect("same ground");
        let eta = random_rational(rng, 4) + rat(1, 8);
        let tol = Tolerance::new(eta, None, settle);
        match fatou_harness(&seq, h, &tol, None) {
            Ok(audit) => fatou.check(audit.all_guaranteed_hold(), || json!({ "sequence": sequence_json(&seq), "audit": render::audit(&audit) })),
            Err(e) => fatou.check(false, || json!({ "sequence": sequence_json(&seq), "error": e.to_string() })),
        }
        let mut bound = seq.limit().abs().values().to_vec();
        for t in seq.terms() {
            for (b, a) in bound.iter_mut().zip(t.abs().values()) {
                if a > b {
                    *b = a.clone();
                }
            }
        }
        let dominator = StepFunction::new(bound).expect("nonnegative");
        if integrate(&dominator, h).expect("same ground").is_infinite() {
            continue;
        }
        match dct_harness(&seq, &dominator, h, &tol, None) {
            Ok(audit) => dct.check(audit.all_guaranteed_hold(), || json!({ "sequence": sequence_json(&seq), "audit": render::audit(&audit) })),
            Err(e) => dct.check(false, || json!({ "sequence": sequence_json(&seq), "error": e.to_string() })),
        }
    }
    vec![fatou, dct]
}

fn round_trip_properties(config: &SuiteConfig, corpus: &Corpus, rng: &mut ChaCha8Rng) -> Vec<Tally> {
    let mut trip = Tally::new("cli", "emitted JSON loads back unchanged");
    for (i, h) in corpus.capacities.iter().enumerate() {
        let back = parse_capacity(&capacity_json(h)).map(|l| l.capacity);
        trip.check(back.as_ref() == Ok(h), || json!({ "capacity": i }));
        let r = h.regularize();
        trip.check(parse_capacity(&capacity_json(&r)).map(|l| l.capacity).as_ref() == Ok(&r), || json!({ "regularized": i }));
    }
    for &(d, depth) in &config.dyadic {
        let domain = DyadicDomain::new(d, depth).expect("validated size");
        for beta in &config.betas {
            let exported = export_capacity(domain, beta).expect("exportable").capacity;
            let back = parse_capacity(&capacity_json(&exported)).map(|l| l.capacity);
            trip.check(back.as_ref() == Ok(&exported), || json!({ "d": d, "depth": depth, "beta": rational_json(beta) }));
        }
    }
    for _ in 0..config.count {
        let n = rng.gen_range(1..=config.max_n);
        let f = random_step(rng, n);
        trip.check(parse_step_function(&step_function_json(&f), "$").as_ref() == Ok(&f), || json!({ "function": values(&f) }));
        let s = random_signed(rng, n);
        trip.check(parse_signed_function(&signed_function_json(&s), "$").as_ref() == Ok(&s), || json!({ "signed": signed_function_json(&s) }));
        let seq = FunctionSequence::new(vec![random_signed(rng, n), random_signed(rng, n)], s.clone(), Vec::new()).expect("same ground");
        trip.check(parse_sequence(&sequence_json(&seq)).as_ref() == Ok(&seq), || json!({ "sequence": sequence_json(&seq) }));
        let family: Vec<SubsetMask> = (0..rng.gen_range(1..=4)).map(|_| random_set(rng, n)).collect();
        let encoded = json!({ "n": n, "sets": family.iter().map(|s| subset_json(*s)).collect::<Vec<_>>() });
        let decoded = parse_family(&encoded, None).map(|(_, sets)| sets);
        trip.check(decoded.as_ref() == Ok(&family), || encoded.clone());
        let h = corpus.pick(rng);
        if h.ground().size() == n {
            let value = integrate(&f, h).expect("same ground");
            let rendered = render::integral(&choquet_core::choquet(&f, h).expect("same ground"), true);
            let back = choquet_core::io::parse_extended_value(&rendered["value"], "$.value");
            trip.check(back.as_ref() == Ok(&value), || rendered.clone());
            if let Ok(report) = dual_value(&f, h, DualMethod::ExactLp) {
                let rendered = render::duality(&report);
                let masses = rendered["optimal_measure"].as_array().cloned().unwrap_or_default();
                let parsed: Result<Vec<Rational>, _> = masses.iter().map(|m| parse_rational_value(m, "$")).collect();
                let original = report.optimal_measure.as_ref().map(|m| m.masses().to_vec()).unwrap_or_default();
                trip.check(parsed.as_ref() == Ok(&original), || rendered.clone());
            }
        }
    }
    vec![trip]
}

fn run_groups(config: &SuiteConfig, corpus: &Corpus) -> Vec<Tally> {
    GROUPS
        .par_iter()
        .enumerate()
        .map(|(i, group)| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(i as u64));
            group(config, corpus, &mut rng)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

fn in_pool<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> CliResult<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| CliError(format!("thread pool: {e}")))?;
    Ok(pool.install(job))
}

/// Runs every property, then reruns under a different thread count and
/// records whether the two reports agree.
pub fn run(config: &SuiteConfig) -> CliResult<Vec<Tally>> {
    config.validate()?;
    let corpus = Corpus::build(config);
    let mut tallies = in_pool(config.threads, || run_groups(config, &corpus))?;
    let other = if config.threads == Some(1) { 2 } else { 1 };
    let rerun = in_pool(Some(other), || run_groups(config, &corpus))?;
    let mut determinism = Tally::new("cli", "identical reports across thread counts");
    for (a, b) in tallies.iter().zip(&rerun) {
        determinism.check(a == b, || json!({ "property": a.name, "threads": [config.threads, Some(other)] }));
    }
    determinism.check(tallies.len() == rerun.len(), || json!({ "lengths": [tallies.len(), rerun.len()] }));
    tallies.push(determinism);
    Ok(tallies)
}

pub fn report(config: &SuiteConfig, tallies: &[Tally]) -> Value {
    let failed: Vec<&str> = tallies.iter().filter(|t| t.failures > 0).map(|t| t.name).collect();
    json!({
        "seed": config.seed,
        "n": config.max_n,
        "count": config.count,
        "corpus_capacities": Corpus::build(config).capacities.len(),
        "properties": tallies.iter().map(Tally::json).collect::<Vec<_>>(),
        "total_properties": tallies.len(),
        "total_cases": tallies.iter().map(|t| t.cases).sum::<u64>(),
        "failed_properties": failed,
    })
}

pub(crate) fn command(args: &SuiteArgs) -> CliResult<Report> {
    let mut config = SuiteConfig::new(args.seed, args.n);
    config.count = args.count;
    config.threads = args.threads;
    config.m = args.m;
    config.k = args.k;
    config.pair_budget = budget()?;
    let tallies = run(&config)?;
    let violated = tallies.iter().any(|t| t.failures > 0);
    Ok(Report::checked(report(&config, &tallies), violated))
}
