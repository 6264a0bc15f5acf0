//! Acceptance suite. Runs every criterion, prints one line per criterion and exits non-zero
//! if any fails. Run with `cargo test -p groupoid-card --test acceptance`.

use std::process::ExitCode;
use std::time::Instant;

use groupoid_card::categorified::{sweep_categorified, CategorifiedReport};
use groupoid_card::cycle_stats::{
    cll_rhs, expected_product_brute, expected_product_by_type, expected_total_cycles, monte_carlo_moment,
    uncorrelated_check,
};
use groupoid_card::functor::{
    functor_from_json, make_cycle_tuple_functor, make_fixed_point_functor, trivial_functor, verify_general_theorem,
    EquivariantFunctor, FunctorSpec, GeneralTheoremReport,
};
use groupoid_card::group::builtin_groups;
use groupoid_card::groupoid::{
    cardinality_via_outdegrees, orbit_decomposition, orbit_stabilizer_holds, perm_groupoid_skeleton,
    skeletons_equivalent, weak_quotient, Component,
};
use groupoid_card::permutation::factorial;
use groupoid_card::scalar::rational;
use groupoid_card::{FiniteGroup, GroupAction, GroupElement, GroupoidSkeleton, Limits, PVector, Permutation, Rational};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seed for the Monte Carlo criterion.
const MC_SEED: u64 = 42;
const MC_SAMPLES: u64 = 100_000;
const Z_TOLERANCE: f64 = 4.0;

type Outcome = Result<String, String>;

/// Weak-quotient instances collected by criteria 6-9 for criterion 10.
#[derive(Default)]
struct Instances {
    /// (name, orbit-stabilizer holds, out-degree cardinality equals weak-quotient cardinality)
    checks: Vec<(String, bool, bool)>,
}

impl Instances {
    fn add_action(&mut self, name: String, action: &GroupAction) {
        let orbits = orbit_decomposition(action);
        let os = orbit_stabilizer_holds(&orbits, action.group().order());
        let quotient = weak_quotient(action).cardinality_exact();
        let outdeg: Rational = cardinality_via_outdegrees(action);
        self.checks.push((name, os, quotient == outdeg));
    }

    fn add_categorified(&mut self, r: &CategorifiedReport) {
        self.checks.push((
            format!("Q n={} p={}", r.n, r.p),
            r.orbit_stabilizer,
            r.outdegree_card == r.lhs_card,
        ));
    }

    fn add_theorem(&mut self, name: String, r: &GeneralTheoremReport) {
        self.checks.push((
            name,
            r.orbit_stabilizer,
            r.outdegree_cardinality == r.elements_cardinality,
        ));
    }
}

fn criterion_1(limits: &Limits) -> Outcome {
    let mut count = 0;
    for n in 0..=7 {
        for p in PVector::all_bounded(n, 2, n + 2) {
            let lhs: Rational = expected_product_brute(n, &p, limits).map_err(|e| e.to_string())?;
            let rhs: Rational = cll_rhs(n, &p);
            if lhs != rhs {
                return Err(format!("n={n} p={p}: brute {lhs} != {rhs}"));
            }
            count += 1;
        }
    }
    Ok(format!("{count} instances, n <= 7, entries <= 2, weight <= n+2"))
}

fn criterion_2(limits: &Limits) -> Outcome {
    let mut count = 0;
    for n in 0..=7 {
        for p in PVector::all_bounded(n, 2, n + 2) {
            let brute: Rational = expected_product_brute(n, &p, limits).map_err(|e| e.to_string())?;
            let by_type: Rational = expected_product_by_type(n, &p, limits).map_err(|e| e.to_string())?;
            if brute != by_type {
                return Err(format!("n={n} p={p}: brute {brute} != cycle-type {by_type}"));
            }
            count += 1;
        }
    }
    Ok(format!("{count} instances agree"))
}

fn criterion_3(limits: &Limits) -> Outcome {
    let mut count = 0;
    for n in 1..=10 {
        for k in 1..=n {
            let p = PVector::unit(n, k, 1).map_err(|e| e.to_string())?;
            let e: Rational = expected_product_by_type(n, &p, limits).map_err(|e| e.to_string())?;
            if e != rational(1, k as i64) {
                return Err(format!("n={n} k={k}: E(c_k) = {e}"));
            }
            count += 1;
        }
    }
    Ok(format!("E(c_k) = 1/k for {count} pairs (k <= n <= 10)"))
}

fn criterion_4(limits: &Limits) -> Outcome {
    for n in 1..=10 {
        let mut sum = Rational::zero();
        for k in 1..=n {
            let p = PVector::unit(n, k, 1).map_err(|e| e.to_string())?;
            sum += expected_product_by_type::<Rational>(n, &p, limits).map_err(|e| e.to_string())?;
        }
        let harmonic: Rational = (1..=n).map(|k| rational(1, k as i64)).sum();
        let total = expected_total_cycles(n).map_err(|e| e.to_string())?;
        if sum != harmonic || total != harmonic {
            return Err(format!("n={n}: sum {sum}, total {total}, H_n {harmonic}"));
        }
    }
    Ok("sum of E(c_k) = H_n for 1 <= n <= 10".into())
}

fn criterion_5(limits: &Limits) -> Outcome {
    let mut count = 0;
    for n in 2..=8 {
        for j in 1..=n {
            for k in 1..=n {
                if j == k || j + k > n {
                    continue;
                }
                let r = uncorrelated_check(n, j, k, limits).map_err(|e| e.to_string())?;
                if r.equal != Some(true) {
                    return Err(format!("n={n} j={j} k={k}: {:?} != {}", r.lhs, r.rhs));
                }
                count += 1;
            }
        }
    }
    Ok(format!("E(c_j c_k) = E(c_j) E(c_k) on {count} triples"))
}

fn criterion_6(limits: &Limits, inst: &mut Instances) -> Outcome {
    let one = rational(1, 1);
    for n in 0..=12i64 {
        let sk = perm_groupoid_skeleton(n, limits).map_err(|e| e.to_string())?;
        if sk.cardinality_exact() != one {
            return Err(format!("partition skeleton n={n}: {}", sk.cardinality_exact()));
        }
    }
    let mut sampled = 0;
    for n in 0..=6 {
        let g = FiniteGroup::symmetric(n).map_err(|e| e.to_string())?;
        let action = GroupAction::conjugation(&g, limits).map_err(|e| e.to_string())?;
        if !action.validation().is_complete() {
            sampled += 1;
        }
        let quotient = weak_quotient(&action);
        let partitions = perm_groupoid_skeleton(n as i64, limits).map_err(|e| e.to_string())?;
        if quotient.cardinality_exact() != one || !skeletons_equivalent(&quotient, &partitions) {
            return Err(format!("conjugation quotient n={n}: {quotient} vs {partitions}"));
        }
        inst.add_action(format!("S{n} conjugation"), &action);
    }
    Ok(format!(
        "partition skeleton n <= 12, conjugation quotient n <= 6 ({sampled} action(s) validated by sampling)"
    ))
}

fn criterion_7_8(limits: &Limits, inst: &mut Instances) -> (Outcome, Outcome) {
    let mut reports = Vec::new();
    for n in 0..=6 {
        match sweep_categorified(n, 2, n, limits) {
            Ok(r) => reports.extend(r),
            Err(e) => {
                let msg = format!("n={n}: {e}");
                return (Err(msg.clone()), Err(msg));
            }
        }
    }
    let c7 = match reports.iter().find(|r| !r.equivalent || r.lhs_card != r.rhs_card) {
        Some(r) => Err(format!("n={} p={}: {} vs {}", r.n, r.p, r.lhs_skeleton, r.rhs_skeleton)),
        None => Ok(format!(
            "{} instances, n <= 6, entries <= 2, weight <= n",
            reports.len()
        )),
    };
    let c8 = (|| {
        for r in &reports {
            let bridge = Rational::new((r.q_size as u64).into(), factorial(r.n as u64).into());
            let e: Rational = expected_product_brute(r.n, &r.p, limits).map_err(|e| e.to_string())?;
            if !r.bridge_check || bridge != e || r.expectation != e {
                return Err(format!("n={} p={}: |Q|/n! = {bridge}, E = {e}", r.n, r.p));
            }
        }
        Ok(format!("|Q|/n! = E on {} instances", reports.len()))
    })();
    for r in &reports {
        inst.add_categorified(r);
    }
    (c7, c8)
}

/// `F(g)` a subset of the group for every `g`, transported by a map of group elements.
fn subset_functor(
    group: &FiniteGroup,
    fiber: impl Fn(GroupElement) -> Vec<GroupElement>,
    transport: impl Fn(GroupElement, GroupElement) -> GroupElement,
) -> EquivariantFunctor {
    let fibers: Vec<Vec<GroupElement>> = group.elements().map(&fiber).collect();
    let transports = group
        .elements()
        .map(|h| {
            group
                .elements()
                .map(|g| {
                    let target = &fibers[group.conjugate(g, h).unwrap().0];
                    fibers[g.0]
                        .iter()
                        .map(|&x| {
                            let y = transport(h, x);
                            target
                                .iter()
                                .position(|&t| t == y)
                                .expect("transport lands in the fiber")
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    EquivariantFunctor::new(group.clone(), fibers.iter().map(Vec::len).collect(), transports).unwrap()
}

fn centralizer_functor(g: &FiniteGroup) -> EquivariantFunctor {
    subset_functor(
        g,
        |a| g.elements().filter(|&x| g.mul(x, a) == g.mul(a, x)).collect(),
        |h, x| g.conjugate(x, h).unwrap(),
    )
}

fn square_root_functor(g: &FiniteGroup) -> EquivariantFunctor {
    subset_functor(
        g,
        |a| g.elements().filter(|&x| g.mul(x, x) == a).collect(),
        |h, x| g.conjugate(x, h).unwrap(),
    )
}

fn left_translation_functor(g: &FiniteGroup) -> EquivariantFunctor {
    subset_functor(g, |_| g.elements().collect(), |h, x| g.mul(h, x))
}

/// The quaternion group written out by hand: `1, -1, i, -i, j, -j, k, -k`.
fn q8_table() -> Vec<Vec<usize>> {
    vec![
        vec![0, 1, 2, 3, 4, 5, 6, 7],
        vec![1, 0, 3, 2, 5, 4, 7, 6],
        vec![2, 3, 1, 0, 6, 7, 5, 4],
        vec![3, 2, 0, 1, 7, 6, 4, 5],
        vec![4, 5, 7, 6, 1, 0, 2, 3],
        vec![5, 4, 6, 7, 0, 1, 3, 2],
        vec![6, 7, 4, 5, 3, 2, 1, 0],
        vec![7, 6, 5, 4, 2, 3, 0, 1],
    ]
}

/// Symmetries of a square as permutations of its corners, closed under composition.
fn d4_table() -> Vec<Vec<usize>> {
    let r = Permutation::new(vec![1, 2, 3, 0]).unwrap();
    let s = Permutation::new(vec![0, 3, 2, 1]).unwrap();
    let mut elems = vec![Permutation::identity(4)];
    let mut i = 0;
    while i < elems.len() {
        for gen in [&r, &s] {
            let next = gen.compose(&elems[i]).unwrap();
            if !elems.contains(&next) {
                elems.push(next);
            }
        }
        i += 1;
    }
    elems
        .iter()
        .map(|a| {
            elems
                .iter()
                .map(|b| elems.iter().position(|c| *c == a.compose(b).unwrap()).unwrap())
                .collect()
        })
        .collect()
}

fn check_theorem(name: String, f: &EquivariantFunctor, limits: &Limits, inst: &mut Instances) -> Result<(), String> {
    let r = verify_general_theorem(f, limits).map_err(|e| format!("{name}: {e}"))?;
    if !r.passed() {
        return Err(format!(
            "{name}: E(|F|) = {} vs |int F| = {}",
            r.expected_size, r.elements_cardinality
        ));
    }
    inst.add_theorem(name, &r);
    Ok(())
}

fn criterion_9(limits: &Limits, inst: &mut Instances) -> Outcome {
    let groups = builtin_groups(24);
    for g in &groups {
        check_theorem(format!("trivial on {}", g.name()), &trivial_functor(g), limits, inst)?;
    }
    for n in 0..=6 {
        let f = make_fixed_point_functor(n, limits).map_err(|e| e.to_string())?;
        check_theorem(format!("fixed points on S{n}"), &f, limits, inst)?;
    }
    let mut tuples = 0;
    for n in 0..=6 {
        for p in PVector::all_bounded(n, 2, n) {
            let f = make_cycle_tuple_functor(n, &p, limits).map_err(|e| e.to_string())?;
            check_theorem(format!("cycle tuples n={n} p={p}"), &f, limits, inst)?;
            tuples += 1;
        }
    }
    let q8 = FiniteGroup::from_cayley_table(&q8_table()).map_err(|e| e.to_string())?;
    let d4 = FiniteGroup::from_cayley_table(&d4_table()).map_err(|e| e.to_string())?;
    if q8.order() != 8 || q8.is_abelian() || d4.order() != 8 || d4.is_abelian() {
        return Err("hand-built tables are not non-abelian of order 8".into());
    }
    let s3 = FiniteGroup::from_cayley_table(&FiniteGroup::symmetric(3).unwrap().cayley_table())
        .map_err(|e| e.to_string())?;
    let via_json = {
        let spec = FunctorSpec::of(&centralizer_functor(&s3));
        let text = serde_json::to_string(&spec).map_err(|e| e.to_string())?;
        functor_from_json(&text, limits).map_err(|e| e.to_string())?
    };
    let hand = [
        ("centralizers on Q8", centralizer_functor(&q8)),
        ("square roots on Q8", square_root_functor(&q8)),
        ("left translation on Q8", left_translation_functor(&q8)),
        ("centralizers on D4", centralizer_functor(&d4)),
        ("square roots on D4", square_root_functor(&d4)),
        ("centralizers on S3 from JSON", via_json),
    ];
    for (name, f) in &hand {
        check_theorem(name.to_string(), f, limits, inst)?;
    }
    Ok(format!(
        "{} trivial, 7 fixed-point, {tuples} cycle-tuple, {} Cayley-table functors",
        groups.len(),
        hand.len()
    ))
}

fn random_skeleton(rng: &mut ChaCha8Rng) -> GroupoidSkeleton {
    let len = rng.gen_range(0..6);
    let comps = (0..len)
        .map(|_| Component::new(rng.gen_range(1u64..=5040), None))
        .collect();
    GroupoidSkeleton::new(comps).unwrap()
}

fn criterion_10(inst: &Instances) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let pairs = 1000;
    for i in 0..pairs {
        let (a, b) = (random_skeleton(&mut rng), random_skeleton(&mut rng));
        let (ca, cb) = (a.cardinality_exact(), b.cardinality_exact());
        if a.coproduct(&b).cardinality_exact() != &ca + &cb {
            return Err(format!("additivity fails on pair {i}: {a} and {b}"));
        }
        if a.product(&b).cardinality_exact() != &ca * &cb {
            return Err(format!("multiplicativity fails on pair {i}: {a} and {b}"));
        }
    }
    if let Some((name, _, _)) = inst.checks.iter().find(|c| !c.1) {
        return Err(format!("orbit-stabilizer fails on {name}"));
    }
    if let Some((name, _, _)) = inst.checks.iter().find(|c| !c.2) {
        return Err(format!("out-degree formula fails on {name}"));
    }
    if inst.checks.is_empty() {
        return Err("no weak quotients were collected".into());
    }
    Ok(format!(
        "{pairs} skeleton pairs, {} weak quotients (orbit-stabilizer, out-degree)",
        inst.checks.len()
    ))
}

fn criterion_11() -> Outcome {
    let n = 100;
    let mut parts = Vec::new();
    let mut ok = true;
    for k in [1, 2, 3, 5] {
        let p = PVector::unit(n, k, 1).map_err(|e| e.to_string())?;
        let r = monte_carlo_moment(n, &p, MC_SAMPLES, MC_SEED).map_err(|e| e.to_string())?;
        let z = r.z_score.unwrap_or(f64::INFINITY);
        ok &= r.passes(Z_TOLERANCE);
        parts.push(format!("k={k} est={:.5} z={z:+.2}", r.estimate.unwrap_or(f64::NAN)));
    }
    let line = format!("n=100, {MC_SAMPLES} samples, seed {MC_SEED}: {}", parts.join(", "));
    if ok {
        Ok(line)
    } else {
        Err(line)
    }
}

fn main() -> ExitCode {
    let limits = Limits::default();
    let mut inst = Instances::default();
    let mut results: Vec<(u32, &str, Outcome, f64)> = Vec::new();
    let mut run = |id, title, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let outcome = f();
        results.push((id, title, outcome, start.elapsed().as_secs_f64()));
    };
    run(1, "cycle length lemma, brute force", &mut || criterion_1(&limits));
    run(2, "oracle agreement", &mut || criterion_2(&limits));
    run(3, "expected k-cycles", &mut || criterion_3(&limits));
    run(4, "harmonic identity", &mut || criterion_4(&limits));
    run(5, "uncorrelatedness", &mut || criterion_5(&limits));
    run(6, "|Perm_n| = 1", &mut || criterion_6(&limits, &mut inst));
    let start = Instant::now();
    let (c7, c8) = criterion_7_8(&limits, &mut inst);
    let secs = start.elapsed().as_secs_f64();
    results.push((7, "categorified lemma, skeleton level", c7, secs));
    results.push((8, "bridge identity", c8, 0.0));
    let start = Instant::now();
    let c9 = criterion_9(&limits, &mut inst);
    results.push((9, "general theorem", c9, start.elapsed().as_secs_f64()));
    let start = Instant::now();
    let c10 = criterion_10(&inst);
    results.push((10, "property suites", c10, start.elapsed().as_secs_f64()));
    let start = Instant::now();
    results.push((11, "monte carlo", criterion_11(), start.elapsed().as_secs_f64()));

    results.sort_by_key(|r| r.0);
    let mut failed = 0;
    for (id, title, outcome, secs) in &results {
        match outcome {
            Ok(detail) => println!("criterion {id:>2} PASS  {title}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {title}: {detail} [{secs:.1}s]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
