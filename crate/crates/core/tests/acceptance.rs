//! Acceptance gate: ten property sweeps against brute-force oracles, each
//! exact unless stated otherwise. Prints one line per criterion and exits
//! nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use choquet_core::capacity::{check_axiom, generate_capacity, with_infinite_points, Axiom, Capacity, CapacityKind};
use choquet_core::convergence::{chebyshev_audit, converse_dct_audit, FunctionSequence};
use choquet_core::domain::{GroundSet, SignedFunction, StepFunction, SubsetMask};
use choquet_core::duality::{dominated_scaling, domination_inequality_audit, dual_value, greedy_measure, AdditiveMeasure, DualMethod};
use choquet_core::hausdorff::{content, export_capacity, export_table, ContentValue, DyadicCellSet, DyadicDomain, Beta};
use choquet_core::integral::{integrate, integrate_abs, quasi_sublinearity_check, verify_sublinearity_equivalence, Gap, DEFAULT_PAIR_BUDGET};
use choquet_core::nesting::{count_superlevels, indicator_sum, nest};
use choquet_core::number::{int, pow2, rat, to_f64, Extended, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

struct Criterion {
    number: usize,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn ensure(condition: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if condition {
        Ok(())
    } else {
        Err(message())
    }
}

fn ground(n: usize) -> GroundSet {
    GroundSet::new(n).unwrap()
}

fn random_rational(rng: &mut ChaCha8Rng, max_numer: i64) -> Rational {
    rat(rng.gen_range(0..=max_numer), rng.gen_range(1..=4))
}

fn random_signed(rng: &mut ChaCha8Rng, n: usize) -> SignedFunction {
    SignedFunction::new((0..n).map(|_| random_rational(rng, 12) - int(6)).collect()).unwrap()
}

fn random_step(rng: &mut ChaCha8Rng, n: usize, max_numer: i64) -> StepFunction {
    StepFunction::from_rationals((0..n).map(|_| random_rational(rng, max_numer)).collect()).unwrap()
}

const FINITE_KINDS: [CapacityKind; 6] = [
    CapacityKind::RandomMonotone,
    CapacityKind::RandomSubmodularMonotone,
    CapacityKind::RandomSubadditiveMonotone,
    CapacityKind::Additive,
    CapacityKind::Threshold { m: 0 },
    CapacityKind::Threshold { m: 1 },
];

fn random_finite_capacity(rng: &mut ChaCha8Rng, n: usize) -> Capacity {
    let kind = FINITE_KINDS[rng.gen_range(0..FINITE_KINDS.len())];
    generate_capacity(kind, ground(n), rng.gen())
}

/// Strong subadditivity by a direct scan of all pairs.
fn strongly_subadditive(h: &Capacity) -> bool {
    let g = h.ground();
    g.subsets().all(|e| {
        g.subsets().all(|f| h.value(e.intersection(f)) + h.value(e.union(f)) <= h.value(e) + h.value(f))
    })
}

fn sublinearity_equivalence() -> Outcome {
    let mut corpus = Vec::new();
    for n in 1..=3 {
        let g = ground(n);
        for seed in 0..10u64 {
            for kind in FINITE_KINDS {
                corpus.push(generate_capacity(kind, g, seed * 31 + n as u64));
            }
            corpus.push(generate_capacity(CapacityKind::BoundedThreshold { m: 1 }, g, seed));
            let base = generate_capacity(CapacityKind::RandomSubmodularMonotone, g, seed + 100);
            corpus.push(with_infinite_points(&base, SubsetMask::singleton(seed as usize % n)));
        }
    }
    let (mut submodular, mut violating) = (0, 0);
    for (i, h) in corpus.iter().enumerate() {
        let report = verify_sublinearity_equivalence(h, 3, 2, DEFAULT_PAIR_BUDGET).map_err(|e| format!("capacity {i}: {e}"))?;
        let ss = strongly_subadditive(h);
        ensure(report.sublinear_on_grid() == ss, || {
            format!("capacity {i}: sublinear on grid = {}, strongly subadditive = {ss}", report.sublinear_on_grid())
        })?;
        if ss {
            submodular += 1;
        } else {
            violating += 1;
        }
    }
    Ok(format!("{} capacities ({submodular} strongly subadditive, {violating} not), m = 3, k = 2", corpus.len()))
}

fn nesting_sweep() -> Outcome {
    let g = ground(4);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let capacities: Vec<Capacity> = (0..)
        .map(|_| {
            let kind = [CapacityKind::RandomSubmodularMonotone, CapacityKind::Additive, CapacityKind::Threshold { m: 0 }][rng.gen_range(0..3)];
            generate_capacity(kind, g, rng.gen())
        })
        .filter(strongly_subadditive)
        .take(25)
        .collect();
    let mut families = 0usize;
    for len in 1..=4u32 {
        for code in 0..16usize.pow(len) {
            let sets: Vec<SubsetMask> = (0..len).map(|i| SubsetMask::from_bits(((code >> (4 * i)) & 15) as u32)).collect();
            let chain = nest(&sets).map_err(|e| e.to_string())?;
            ensure(chain.is_nested(), || format!("{sets:?} → {:?} is not nested", chain.sets()))?;
            ensure(indicator_sum(chain.sets(), 4) == indicator_sum(&sets, 4), || format!("{sets:?}: indicator sum changed"))?;
            ensure(chain.sets() == count_superlevels(&sets).as_slice(), || format!("{sets:?}: differs from the count oracle"))?;
            for (j, h) in capacities.iter().enumerate() {
                let before: Extended = sets.iter().map(|s| h.value(*s).clone()).sum();
                let after: Extended = chain.sets().iter().map(|s| h.value(*s).clone()).sum();
                ensure(after <= before, || format!("{sets:?} under capacity {j}: {after} > {before}"))?;
            }
            families += 1;
        }
    }
    Ok(format!("{families} families, {} strongly subadditive capacities", capacities.len()))
}

fn strong_duality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut instances = 0;
    let mut capacities = 0;
    for n in 1..=4 {
        for seed in 0..12u64 {
            for kind in [CapacityKind::RandomSubmodularMonotone, CapacityKind::Additive, CapacityKind::Threshold { m: 0 }, CapacityKind::RandomMonotone] {
                let h = generate_capacity(kind, ground(n), seed * 7 + n as u64);
                if !(h.is_finite() && check_axiom(&h, Axiom::Monotone).holds && strongly_subadditive(&h)) {
                    continue;
                }
                capacities += 1;
                for _ in 0..50 {
                    let f = random_step(&mut rng, n, 20);
                    let choquet = integrate(&f, &h).unwrap();
                    let lp = dual_value(&f, &h, DualMethod::ExactLp).map_err(|e| e.to_string())?;
                    let greedy = greedy_measure(&f, &h).map_err(|e| e.to_string())?.integrate(&f).unwrap();
                    ensure(lp.dual_value == choquet && greedy == choquet && lp.gap == Gap::Finite(int(0)), || {
                        format!("n = {n}, f = {:?}: LP {} greedy {greedy} choquet {choquet}", f.values(), lp.dual_value)
                    })?;
                    instances += 1;
                }
            }
        }
    }
    let h = Capacity::from_rationals(ground(2), vec![int(0), int(1), int(1), int(3)]).unwrap();
    let f = StepFunction::from_rationals(vec![int(1), int(1)]).unwrap();
    let r = dual_value(&f, &h, DualMethod::ExactLp).map_err(|e| e.to_string())?;
    ensure(r.gap == Gap::Finite(int(1)), || format!("(0,1,1,3) gap {:?}", r.gap))?;
    Ok(format!("{instances} LP = greedy = choquet over {capacities} capacities; (0,1,1,3) gap = 1"))
}

fn weak_duality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for draw in 0..1000 {
        let n = rng.gen_range(1..=4);
        let mut h = random_finite_capacity(&mut rng, n);
        if rng.gen_bool(0.2) {
            h = with_infinite_points(&h, SubsetMask::singleton(rng.gen_range(0..n)));
        }
        let raw = AdditiveMeasure::new((0..n).map(|_| random_rational(&mut rng, 12)).collect()).unwrap();
        let mu = dominated_scaling(&raw, &h).unwrap();
        let f = random_step(&mut rng, n, 16);
        let audit = domination_inequality_audit(&f, &mu, &h).map_err(|e| format!("draw {draw}: {e}"))?;
        ensure(audit.holds, || format!("draw {draw}: Σfμ = {} > {}", audit.additive, audit.choquet))?;
    }
    Ok("1000 dominated triples".into())
}

/// Minimum over every set of dyadic intervals covering `E`, at `d = 1`.
fn brute_force_contents(depth: u32, beta: &Beta) -> Vec<ContentValue> {
    let nodes: Vec<(u32, u64)> = (0..=depth).flat_map(|level| (0..1u64 << level).map(move |c| (level, c))).collect();
    let cells = 1usize << depth;
    let mut best: Vec<Option<ContentValue>> = vec![None; 1 << cells];
    for choice in 0u32..1 << nodes.len() {
        let mut covered = 0usize;
        let mut cost = ContentValue::zero(beta);
        for (i, &(level, c)) in nodes.iter().enumerate() {
            if choice & (1 << i) != 0 {
                let width = 1usize << (depth - level);
                covered |= ((1usize << width) - 1) << (c as usize * width);
                cost = &cost + &ContentValue::side_power(beta, level);
            }
        }
        if best[covered].as_ref().is_none_or(|b| cost < *b) {
            best[covered] = Some(cost);
        }
    }
    (0..1usize << cells)
        .map(|e| {
            (0..1usize << cells)
                .filter(|m| m & e == e)
                .filter_map(|m| best[m].clone())
                .min()
                .expect("the full cover exists")
        })
        .collect()
}

fn dyadic_content() -> Outcome {
    let betas = [rat(1, 2), int(1), rat(3, 2)];
    let mut sets = 0;
    for depth in 1..=3 {
        let domain = DyadicDomain::new(1, depth).unwrap();
        for beta in &betas {
            let b = Beta::new(beta).unwrap();
            let oracle = brute_force_contents(depth, &b);
            for (mask, expected) in oracle.iter().enumerate() {
                let e = DyadicCellSet::from_mask(domain, SubsetMask::from_bits(mask as u32)).unwrap();
                let solution = content(&e, beta).unwrap();
                ensure(solution.value == *expected, || format!("L = {depth}, β = {beta}, E = {mask:b}: DP {} vs brute force {expected}", solution.value))?;
                let float: f64 = solution.cubes.iter().map(|q| 2f64.powf(-f64::from(q.level) * to_f64(beta))).sum();
                ensure((solution.value.to_f64() - float).abs() < 1e-12, || format!("E = {mask:b}: floating cross-check"))?;
                sets += 1;
            }
        }
    }
    let mut exports = 0;
    for (d, depth) in [(1, 1), (1, 2), (1, 3), (2, 1)] {
        let domain = DyadicDomain::new(d, depth).unwrap();
        for beta in &betas {
            let table = export_table(domain, beta).unwrap();
            let rounded = export_capacity(domain, beta).unwrap();
            for axiom in [Axiom::Monotone, Axiom::FiniteSubadditive, Axiom::StronglySubadditive] {
                ensure(table.check_axiom(axiom).unwrap().holds, || format!("exact d = {d}, L = {depth}, β = {beta}: {axiom} fails"))?;
                ensure(rounded.check_axiom(axiom).holds, || format!("rounded d = {d}, L = {depth}, β = {beta}: {axiom} fails"))?;
            }
            exports += 1;
        }
    }
    Ok(format!("{sets} DP values match brute force; {exports} exports pass monotone, finite and strong subadditivity"))
}

fn chebyshev() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for draw in 0..10_000 {
        let n = rng.gen_range(1..=4);
        let h = random_finite_capacity(&mut rng, n);
        let (f_n, f) = (random_signed(&mut rng, n), random_signed(&mut rng, n));
        let k = rng.gen_range(0..6);
        let check = chebyshev_audit(&f_n, &f, &h, k).unwrap();
        ensure(check.holds, || format!("draw {draw}: {} > {}", check.lhs, check.rhs))?;
    }
    Ok("10000 draws".into())
}

fn converse_dct() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let kinds = [CapacityKind::RandomSubmodularMonotone, CapacityKind::RandomSubadditiveMonotone, CapacityKind::Additive, CapacityKind::Threshold { m: 0 }];
    for instance in 0..100 {
        let n = rng.gen_range(1..=4);
        let g = ground(n);
        let h = generate_capacity(kinds[instance % kinds.len()], g, rng.gen());
        let f = random_signed(&mut rng, n);
        let len = rng.gen_range(1..=7);
        let mut terms = Vec::with_capacity(len);
        for k in 0..len {
            // ∫|f_k − f| dH = 4^(−k), carried by a set of shrinking capacity.
            let e = SubsetMask::from_bits(rng.gen_range(1..1u32 << n));
            let height = match h.value(e) {
                Extended::Finite(c) if *c > int(0) => pow2(-2 * k as i64) / c,
                _ => int(1),
            };
            let values = f
                .values()
                .iter()
                .enumerate()
                .map(|(x, v)| if e.contains(x) { v + if rng.gen_bool(0.5) { height.clone() } else { -height.clone() } } else { v.clone() })
                .collect();
            terms.push(SignedFunction::new(values).unwrap());
        }
        let seq = FunctionSequence::new(terms.clone(), f.clone(), Vec::new()).unwrap();
        let audit = converse_dct_audit(&seq, &h).map_err(|e| format!("instance {instance}: {e}"))?;

        // Independent recomputation of A_k and F.
        let deviation = |k: usize| terms[k].sub(&f).unwrap().abs();
        for k in 0..len {
            let a_k = (k..len).fold(SubsetMask::EMPTY, |acc, m| acc.union(deviation(m).superlevel(&pow2(-(m as i64)), true)));
            ensure(audit.named_sets[k].1 == a_k, || format!("instance {instance}: A_{k} differs"))?;
            ensure(*h.value(a_k) <= Extended::Finite(pow2(1 - k as i64)), || format!("instance {instance}: H(A_{k}) too large"))?;
        }
        let dominator = (0..len).fold(f.abs(), |acc, k| acc.add(&deviation(k)).unwrap());
        let lhs = integrate(&dominator, &h).unwrap();
        let rhs = &integrate_abs(&f, &h).unwrap().scale(&int(2)) + &Extended::from_int(8);
        ensure(lhs <= rhs, || format!("instance {instance}: ∫F = {lhs} > {rhs}"))?;
        ensure(audit.all_guaranteed_hold(), || format!("instance {instance}: {:?}", audit.violations().next()))?;
    }
    Ok("100 premise-satisfying sequences".into())
}

fn regularization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut count = 0;
    while count < 100 {
        let n = rng.gen_range(1..=3);
        let g = ground(n);
        let h = if rng.gen_bool(0.2) {
            generate_capacity(CapacityKind::BoundedThreshold { m: rng.gen_range(0..n) }, g, 0)
        } else {
            let base = random_finite_capacity(&mut rng, n);
            with_infinite_points(&base, SubsetMask::from_bits(rng.gen_range(1..1u32 << n)))
        };
        if h.is_finite() || !check_axiom(&h, Axiom::Monotone).holds {
            continue;
        }
        let r = h.regularize();
        ensure(check_axiom(&r, Axiom::Semifinite).holds, || format!("instance {count}: regularization not semifinite"))?;
        for a in g.subsets() {
            if h.value(a).is_finite() {
                ensure(h.value(a) == r.value(a), || format!("instance {count}: differs at {a}"))?;
            }
            // Oracle: the largest finite value below A.
            let sup = a.submasks().filter_map(|d| h.value(d).finite().cloned()).max().unwrap();
            ensure(*r.value(a) == Extended::Finite(sup), || format!("instance {count}: wrong value at {a}"))?;
        }
        for axiom in [Axiom::FiniteSubadditive, Axiom::CountableSubadditive, Axiom::StronglySubadditive] {
            if check_axiom(&h, axiom).holds {
                ensure(check_axiom(&r, axiom).holds, || format!("instance {count}: {axiom} not inherited"))?;
            }
        }
        count += 1;
    }
    Ok("100 infinite-valued capacities".into())
}

fn quasi_sublinearity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut drawn = 0;
    while drawn < 10_000 {
        let n = rng.gen_range(1..=4);
        let h = random_finite_capacity(&mut rng, n);
        if !check_axiom(&h, Axiom::FiniteSubadditive).holds {
            continue;
        }
        let (g, k) = (random_signed(&mut rng, n), random_signed(&mut rng, n));
        let report = quasi_sublinearity_check(&g, &k, &h).unwrap();
        ensure(report.holds, || format!("draw {drawn}: {} > {}", report.lhs, report.rhs))?;
        drawn += 1;
    }
    Ok("10000 finitely subadditive draws".into())
}

fn riemann_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let step = 2f64.powi(-12);
    let mut worst: f64 = 0.0;
    for draw in 0..1000 {
        let n = rng.gen_range(1..=4);
        let h = random_finite_capacity(&mut rng, n);
        let f = random_step(&mut rng, n, 16);
        let values: Vec<f64> = f.values().iter().map(Extended::to_f64).collect();
        let top = values.iter().cloned().fold(0.0, f64::max);
        let mut riemann = 0.0;
        let mut t = step / 2.0;
        while t < top {
            let set = (0..n).filter(|&x| values[x] > t).fold(SubsetMask::EMPTY, |m, x| m.with(x));
            riemann += step * h.value(set).to_f64();
            t += step;
        }
        let exact = integrate(&f, &h).unwrap().to_f64();
        let tolerance = top * step * h.value(h.ground().full()).to_f64();
        let error = (exact - riemann).abs();
        worst = worst.max(error);
        ensure(error <= tolerance + 1e-12, || format!("draw {draw}: |{exact} − {riemann}| > {tolerance}"))?;
    }
    Ok(format!("1000 draws, largest deviation {worst:.3e}"))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { number: 1, name: "sublinearity ⇔ strong subadditivity", limit: Duration::from_secs(60), run: sublinearity_equivalence },
        Criterion { number: 2, name: "nesting", limit: Duration::from_secs(120), run: nesting_sweep },
        Criterion { number: 3, name: "strong duality", limit: Duration::from_secs(120), run: strong_duality },
        Criterion { number: 4, name: "weak duality", limit: Duration::from_secs(10), run: weak_duality },
        Criterion { number: 5, name: "dyadic content", limit: Duration::from_secs(300), run: dyadic_content },
        Criterion { number: 6, name: "Chebyshev analogue", limit: Duration::from_secs(10), run: chebyshev },
        Criterion { number: 7, name: "converse dominated convergence", limit: Duration::from_secs(30), run: converse_dct },
        Criterion { number: 8, name: "regularization", limit: Duration::from_secs(30), run: regularization },
        Criterion { number: 9, name: "quasi-sublinearity constant", limit: Duration::from_secs(10), run: quasi_sublinearity },
        Criterion { number: 10, name: "layer-cake Riemann oracle", limit: Duration::from_secs(30), run: riemann_oracle },
    ];
    let mut failures = 0;
    for c in criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(detail) if elapsed <= c.limit => ("PASS", detail),
            Ok(detail) => ("FAIL", format!("{detail}; exceeded {:?}", c.limit)),
            Err(reason) => ("FAIL", reason),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!("criterion {:>2} {status} [{:.2?}] {}: {detail}", c.number, elapsed, c.name);
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
