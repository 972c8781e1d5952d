//! Acceptance checks, one test per criterion. Each prints a PASS/FAIL line.

mod common;

use std::time::{Duration, Instant};

use cfr_core::constructions::{
    asymptotic_expansion, construct_combination, construct_duplicate, construct_recursive, predict_recursive_size,
};
use cfr_core::designs::{is_properly_local, min_blocks_bound, replication_bound, DesignParams};
use cfr_core::randomizer::{search_zero_skip, SearchConfig, Strategy};
use cfr_core::skipcost::oracle::brute_force_cost;
use cfr_core::skipcost::{
    array_skip_cost, column_repair_cost, expansion_factor, is_zero_skip, transmission_cost, CfrArray,
};
use cfr_core::Rational;
use common::{array, as_design, column_sets, corpus, design, verdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn within(start: Instant, limit: Duration) -> (bool, String) {
    let took = start.elapsed();
    (took < limit, format!("{took:.2?} (limit {limit:?})"))
}

#[test]
fn criterion_1_worked_example() {
    let start = Instant::now();
    let a = array("example_4x6");
    let costs: Vec<Option<u32>> = (0..a.len())
        .map(|j| column_repair_cost(&a, j, 2).unwrap().map(|p| p.total_cost))
        .collect();
    let via_3 = transmission_cost(a.column(2), &[3, 5]).unwrap();
    let via_5 = transmission_cost(a.column(4), &[3, 5]).unwrap();
    let total = array_skip_cost(&a, 2).unwrap();
    let (fast, took) = within(start, Duration::from_secs(1));
    let ok = costs.iter().all(|&c| c == Some(0)) && via_3 == 1 && via_5 == 0 && total == Some(0) && fast;
    verdict(
        1,
        "worked 4x6 example",
        ok,
        &format!("column costs {costs:?}, {{3,5}} costs {via_3} and {via_5}, cost(A) = {total:?}, {took}"),
    );
}

fn blocks(list: &[[u32; 4]]) -> Vec<Vec<u32>> {
    let mut v: Vec<Vec<u32>> = list.iter().map(|b| b.to_vec()).collect();
    v.sort();
    v
}

#[test]
fn criterion_2_lift_golden() {
    let start = Instant::now();
    let build = construct_recursive(&design(3, 4, 5)).unwrap();
    let b1 = blocks(&[
        [1, 2, 6, 7], [1, 3, 6, 8], [1, 4, 6, 9], [1, 5, 6, 10], [2, 3, 7, 8],
        [2, 4, 7, 9], [2, 5, 7, 10], [3, 4, 8, 9], [3, 5, 8, 10], [4, 5, 9, 10],
    ]);
    let b3_i1 = blocks(&[
        [1, 2, 8, 9], [1, 2, 8, 10], [1, 2, 9, 10], [1, 3, 9, 10],
        [1, 3, 7, 9], [1, 3, 7, 10], [1, 4, 7, 10], [1, 4, 8, 10],
        [1, 4, 7, 8], [1, 5, 7, 8], [1, 5, 7, 9], [1, 5, 8, 9],
        [2, 3, 6, 9], [2, 3, 6, 10], [2, 4, 6, 10], [3, 4, 6, 10],
        [2, 4, 6, 8], [2, 5, 6, 8], [2, 5, 6, 9], [3, 5, 6, 9],
        [3, 4, 6, 7], [3, 5, 6, 7], [4, 5, 6, 7], [4, 5, 6, 8],
    ]);
    let b3_i2 = blocks(&[
        [1, 2, 3, 4], [1, 2, 3, 5], [1, 2, 4, 5], [1, 3, 4, 5],
        [6, 7, 8, 9], [6, 7, 8, 10], [6, 7, 9, 10], [6, 8, 9, 10],
    ]);
    let f = &build.families;
    let families_ok = f.b1 == b1 && f.b3_i1 == b3_i1 && f.b3_i2 == b3_i2 && f.b2.is_empty() && f.b4.is_empty();

    let printed = array("lift_3_4_10");
    let mut ours = column_sets(&build.array);
    let mut theirs = column_sets(&printed);
    let same_columns = build.array.columns().all(|c| c.windows(2).all(|w| w[0] < w[1])) && {
        ours.sort();
        theirs.sort();
        ours == theirs
    };
    let params = DesignParams::new(3, 4, 10).unwrap();
    let uncovered = as_design(&build.array, params).verify_covering();
    let zero = is_zero_skip(&build.array, 2).unwrap().is_zero_skip();
    let (fast, took) = within(start, Duration::from_secs(5));
    let ok = build.array.len() == 42 && families_ok && same_columns && uncovered.is_empty() && zero && fast;
    verdict(
        2,
        "(3,4,5) lift against the printed 4x42 array",
        ok,
        &format!(
            "{} blocks (B1 {}, B3 {} + {}), families match {families_ok}, matrix matches {same_columns}, uncovered {}, zero skip {zero}, {took}",
            build.array.len(),
            f.b1.len(),
            f.b3_i1.len(),
            f.b3_i2.len(),
            uncovered.len()
        ),
    );
}

#[test]
fn criterion_3_size_formula() {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut checked = Vec::new();
    for d in corpus().iter().filter(|d| d.params().t() >= 2) {
        let p = d.params();
        let predicted = predict_recursive_size(p, d.len()).unwrap().predicted_blocks;
        match construct_recursive(d) {
            Ok(b) if b.array.len() as i128 == predicted => checked.push(format!("{p}->{predicted}")),
            Ok(b) => bad.push(format!("{p}: predicted {predicted}, built {}", b.array.len())),
            Err(e) => bad.push(format!("{p}: {e}")),
        }
    }
    let named = [((3, 4, 5), 42), ((5, 6, 6), 212)].iter().all(|&((t, k, v), n)| {
        construct_recursive(&design(t, k, v)).is_ok_and(|b| b.array.len() == n)
    });
    let (fast, took) = within(start, Duration::from_secs(30));
    let ok = bad.is_empty() && named && fast;
    verdict(
        3,
        "size formula equals generated count",
        ok,
        &format!("{} designs agree [{}], mismatches {bad:?}, {took}", checked.len(), checked.join(" ")),
    );
}

#[test]
fn criterion_4_table_1() {
    let start = Instant::now();
    let pairs = [(3, 4), (4, 5), (4, 6), (5, 6), (5, 7), (5, 8), (6, 7), (6, 8), (6, 9), (6, 10)];
    let expected = [(1, 1), (11, 8), (11, 8), (1, 1), (9, 4), (9, 4), (57, 32), (57, 32), (127, 32), (127, 32)];
    let got: Vec<Rational> = pairs.iter().map(|&(t, k)| asymptotic_expansion(t, k).unwrap()).collect();
    let want: Vec<Rational> = expected.iter().map(|&(n, d)| Rational::new(n, d)).collect();
    let (fast, took) = within(start, Duration::from_secs(1));
    verdict(
        4,
        "asymptotic expansion factors",
        got == want && fast,
        &format!("[{}], {took}", got.iter().map(Rational::to_string).collect::<Vec<_>>().join(", ")),
    );
}

#[test]
fn criterion_5_table_3() {
    let start = Instant::now();
    let d12 = design(5, 6, 12);
    let d12_low = design(4, 6, 12);
    let d6 = design(5, 6, 6);
    let p12 = DesignParams::new(5, 6, 12).unwrap();
    let p24 = DesignParams::new(5, 6, 24).unwrap();
    let dup = construct_duplicate(&d12).unwrap();
    let comb = construct_combination(&d12, &d12_low).unwrap();
    let rec12 = construct_recursive(&d6).unwrap();
    let rec24 = construct_recursive(&d12).unwrap();
    let cells = [
        ("duplicate", &dup, p12, 1, "2.00"),
        ("combine", &comb, p12, 2, "10.32"),
        ("lift (v=12)", &rec12.array, p12, 2, "1.61"),
        ("lift (v=24)", &rec24.array, p24, 2, "1.43"),
    ];
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, a, p, locality, want) in cells {
        let xi = expansion_factor(a.len(), p).to_decimal(2);
        let zero = is_zero_skip(a, locality).unwrap().is_zero_skip();
        ok &= xi == want && zero;
        detail.push(format!("{name} N={} xi={xi} zero skip {zero}", a.len()));
    }
    let (fast, took) = within(start, Duration::from_secs(120));
    verdict(5, "expansion factors at v=12 and v=24", ok && fast, &format!("{}, {took}", detail.join("; ")));
}

fn random_array(rng: &mut ChaCha8Rng) -> (CfrArray, usize) {
    let v = rng.random_range(2..=10u32);
    let k = rng.random_range(1..=5usize.min(v as usize));
    let n = rng.random_range(2..=8usize);
    let columns: Vec<Vec<u32>> = (0..n)
        .map(|_| {
            let mut points: Vec<u32> = (1..=v).collect();
            for i in 0..k {
                let j = rng.random_range(i..points.len());
                points.swap(i, j);
            }
            points.truncate(k);
            points
        })
        .collect();
    (CfrArray::from_columns(k, v, &columns).unwrap(), rng.random_range(1..=3))
}

#[test]
fn criterion_6_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut arrays = 0;
    let mut columns = 0;
    let mut mismatches = Vec::new();
    while arrays < 600 {
        let (a, locality) = random_array(&mut rng);
        for j in 0..a.len() {
            let fast = column_repair_cost(&a, j, locality).unwrap().map(|p| p.total_cost);
            let slow = brute_force_cost(&a, j, locality);
            if fast != slow {
                mismatches.push(format!("{:?} column {j} l={locality}: {fast:?} vs {slow:?}", a.to_text()));
            }
            columns += 1;
        }
        arrays += 1;
    }
    let (fast, took) = within(start, Duration::from_secs(120));
    verdict(
        6,
        "exact search equals brute force",
        mismatches.is_empty() && fast,
        &format!("{arrays} arrays, {columns} columns, {} mismatches, {took}", mismatches.len()),
    );
}

#[test]
fn criterion_7_construction_invariants() {
    let start = Instant::now();
    let designs: Vec<_> = corpus().into_iter().filter(|d| d.params().v() <= 12).collect();
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut check = |what: String, a: &CfrArray, params: DesignParams, locality: usize| {
        let covers = as_design(a, params).is_covering();
        let zero = is_zero_skip(a, locality).unwrap().is_zero_skip();
        if !(covers && zero) {
            failures.push(format!("{what}: covering {covers}, zero skip {zero}"));
        }
        checked += 1;
    };
    for d in &designs {
        let p = d.params();
        check(format!("dup {p}"), &construct_duplicate(d).unwrap(), p, 1);
        if p.t() < 2 {
            continue;
        }
        let q = p.default_locality().unwrap();
        if let Some(lower) = designs.iter().find(|e| {
            let e = e.params();
            (e.t() + 1, e.k(), e.v()) == (p.t(), p.k(), p.v())
        }) {
            check(format!("comb {p}+{}", lower.params()), &construct_combination(d, lower).unwrap(), p, q);
        }
        let build = construct_recursive(d).unwrap();
        check(format!("rec {p}"), &build.array, build.params, q);
    }
    let (fast, took) = within(start, Duration::from_secs(300));
    verdict(
        7,
        "constructions cover and have zero skip cost",
        failures.is_empty() && fast,
        &format!("{checked} arrays from {} designs, failures {failures:?}, {took}", designs.len()),
    );
}

#[test]
fn criterion_8_randomized_search() {
    let d12 = design(5, 6, 12);
    let mut deterministic = true;
    let mut successes_zero = true;
    let mut notes = Vec::new();
    for (d, trials) in [(&d12, 1000), (&design(3, 4, 8), 50), (&design(4, 6, 12), 50)] {
        let p = d.params();
        let locality = p.default_locality().unwrap();
        for strategy in [Strategy::GlobalReshuffle, Strategy::LocalRepair] {
            for seed in [1u64, 2, 3] {
                let config = SearchConfig { seed, max_trials: trials, strategy, locality };
                let first = search_zero_skip(d, config).unwrap();
                let again = search_zero_skip(d, config).unwrap();
                deterministic &= first.array == again.array
                    && first.trials_used == again.trials_used
                    && first.log == again.log
                    && first.failing_columns == again.failing_columns;
                if let Some(a) = &first.array {
                    successes_zero &= first.success
                        && is_zero_skip(a, locality).unwrap().is_zero_skip()
                        && array_skip_cost(a, locality).unwrap() == Some(0)
                        && column_sets(a) == d.blocks().iter().map(|b| b.elements().to_vec()).collect::<Vec<_>>();
                }
                if p == d12.params() && seed == 1 {
                    let xi = first.array.as_ref().map(|a| expansion_factor(a.len(), p).to_string());
                    notes.push(format!(
                        "{p} {strategy:?}: success {} after {} trials, xi {}",
                        first.success,
                        first.trials_used,
                        xi.unwrap_or_else(|| "-".into())
                    ));
                }
            }
        }
    }
    verdict(
        8,
        "randomized search is seed-deterministic and successes are zero skip",
        deterministic && successes_zero,
        &format!("deterministic {deterministic}, successes verified {successes_zero}; {}", notes.join("; ")),
    );
}

#[test]
fn criterion_9_bounds() {
    let p = DesignParams::new(5, 6, 12).unwrap();
    let r1 = replication_bound(p, 1).unwrap();
    let min = min_blocks_bound(p);
    let local_12 = is_properly_local(p).unwrap();
    let local_5 = is_properly_local(DesignParams::new(3, 4, 5).unwrap()).unwrap();
    let ok = r1 == Rational::from_integer(66)
        && min == Rational::from_integer(132)
        && local_12.properly_local()
        && !local_5.properly_local();
    verdict(
        9,
        "bounds and the properly-local test",
        ok,
        &format!(
            "r_1 = {r1}, min blocks = {min}, (5,6,12) properly local {} ({} >= {}), (3,4,5) properly local {} ({} < {})",
            local_12.properly_local(),
            local_12.blocks_per_subset,
            local_12.required(),
            local_5.properly_local(),
            local_5.blocks_per_subset,
            local_5.required()
        ),
    );
}
