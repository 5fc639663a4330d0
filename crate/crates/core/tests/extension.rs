use itertools::Itertools;
use reductlab::random::{
    chain, chain_dims, check_theta, check_theta_sampled, check_theta_with_budget, estimate_failure_prob, random_graph,
    sfsp_bound, splitmix64, trial_seed,
};
use reductlab::{Color, ColoredBipartiteGraph, LabError, Side};

fn oriented(g: &ColoredBipartiteGraph, side: Side, x: usize, w: usize) -> usize {
    match side {
        Side::Left => g.color(x, w).index(),
        Side::Right => g.color(w, x).index(),
    }
}

fn has_witness(g: &ColoredBipartiteGraph, side: Side, sets: &[Vec<usize>; 3]) -> bool {
    (0..g.side_count(side.opposite()))
        .any(|w| (0..3).all(|c| sets[c].iter().all(|&x| oriented(g, side, x, w) == c + 1)))
}

/// Every configuration on one side: each vertex goes to one of the three
/// sets or to none.
fn all_configurations(s: usize, k: usize) -> Vec<[Vec<usize>; 3]> {
    (0..4u32.pow(s as u32))
        .filter_map(|mut code| {
            let mut sets: [Vec<usize>; 3] = Default::default();
            for x in 0..s {
                let slot = (code % 4) as usize;
                code /= 4;
                if slot < 3 {
                    sets[slot].push(x);
                }
            }
            sets.iter().all(|set| set.len() <= k).then_some(sets)
        })
        .collect()
}

/// Smallest total size of a violating configuration, if any.
fn brute_force_theta(g: &ColoredBipartiteGraph, k: usize) -> Option<usize> {
    [Side::Left, Side::Right]
        .into_iter()
        .flat_map(|side| {
            all_configurations(g.side_count(side), k)
                .into_iter()
                .filter(move |sets| !has_witness(g, side, sets))
                .map(|sets| sets.iter().map(Vec::len).sum::<usize>())
        })
        .min()
}

#[test]
fn exact_check_agrees_with_enumeration() {
    let mut held = 0;
    for seed in 0..150u64 {
        let (m, n) = [(3, 3), (4, 3), (3, 5), (4, 4), (2, 6)][seed as usize % 5];
        let g = random_graph(m, n, seed);
        for k in 0..=2 {
            let report = check_theta(&g, k).unwrap();
            let oracle = brute_force_theta(&g, k);
            assert_eq!(report.holds, oracle.is_none(), "{g:?} k={k}");
            if let Some(cx) = report.counterexample {
                assert!(cx.verify(&g, k));
                let size: usize = cx.sets.iter().map(Vec::len).sum();
                assert_eq!(Some(size), oracle, "counterexample not minimal");
            } else {
                held += 1;
            }
        }
    }
    // Only the k = 0 cases hold at these sizes.
    assert!(held > 0);
}

#[test]
fn monotone_in_k() {
    for seed in 0..200u64 {
        let g = random_graph(5, 5, seed);
        let reports: Vec<_> = (0..=3).map(|k| check_theta(&g, k).unwrap()).collect();
        for k in 1..=3 {
            if reports[k].holds {
                assert!(reports[k - 1].holds);
            }
            if let Some(cx) = &reports[k - 1].counterexample {
                assert!(cx.verify(&g, k), "a smaller counterexample still counts at larger k");
            }
        }
    }
}

#[test]
fn degenerate_and_monochromatic() {
    let g = ColoredBipartiteGraph::constant(3, 3, Color::P1);
    let cx = check_theta(&g, 1).unwrap().counterexample.unwrap();
    assert_eq!(cx.sets.iter().map(Vec::len).sum::<usize>(), 1);
    assert_eq!(cx.sets[0].len(), 0);
    for (m, n) in [(0, 3), (3, 0)] {
        assert!(!check_theta(&random_graph(m, n, 1), 1).unwrap().holds);
    }
    let empty = random_graph(0, 5, 3);
    assert_eq!(empty.dims(), (0, 5));
}

/// Θ_1 needs every ordered triple on a side of size `s` to be witnessed, and
/// one opposite vertex with color classes of sizes `p + q + r = s` witnesses
/// `p·q·r` of the `s(s-1)(s-2)` ordered triples. At 6 × 6 that is at most
/// `6 · 8 = 48 < 120`, so no 6 × 6 graph has Θ_1.
#[test]
fn six_by_six_cannot_hold_theta_one() {
    let best = (0..=6usize).flat_map(|p| (0..=6 - p).map(move |q| p * q * (6 - p - q))).max().unwrap();
    assert_eq!(best, 8);
    assert!(6 * best < 6 * 5 * 4);
    for seed in 0..2000u64 {
        assert!(!check_theta(&random_graph(6, 6, seed), 1).unwrap().holds);
    }
}

fn load_hankel() -> ColoredBipartiteGraph {
    let text = include_str!("data/theta1_hankel_140.txt").trim();
    let f: Vec<u8> = text.bytes().map(|b| b - b'0').collect();
    let n = f.len();
    let rows: Vec<Vec<u8>> = (0..n).map(|i| (0..n).map(|j| f[(i + j) % n]).collect()).collect();
    ColoredBipartiteGraph::new(n, n, &rows).unwrap()
}

/// The frozen 140 × 140 coloring came out of the randomized search in the
/// `theta_search` example; here it is re-checked from scratch.
#[test]
fn searched_graph_holds_theta_one() {
    let g = load_hankel();
    assert_eq!(g.dims(), (140, 140));
    let report = check_theta(&g, 1).unwrap();
    assert!(report.holds && report.counterexample.is_none());
    assert!(check_theta(&g, 0).unwrap().holds);
    // Independent oracle: all ordered triples of distinct vertices on both sides.
    let s = 140;
    for side in [Side::Left, Side::Right] {
        let witnesses: Vec<[Vec<bool>; 3]> =
            (0..s).map(|x| [1, 2, 3].map(|c| (0..s).map(|w| oriented(&g, side, x, w) == c).collect())).collect();
        for (a, b, c) in (0..s).tuple_combinations() {
            for t in [a, b, c].into_iter().permutations(3) {
                let ok = (0..s).any(|w| witnesses[t[0]][0][w] && witnesses[t[1]][1][w] && witnesses[t[2]][2][w]);
                assert!(ok, "{side:?} triple {t:?}");
            }
        }
    }
    let sampled = check_theta_sampled(&g, 1, 5000, 9).unwrap();
    assert_eq!(sampled.violations, 0);
}

#[test]
fn sampled_converges_to_exact_fraction_on_k44() {
    let mut tested = 0;
    for seed in 0..20u64 {
        let g = random_graph(4, 4, seed);
        // The sampler draws one vertex per set (min(1, 4/3) = 1), so the
        // sample space is the 24 ordered triples on each side.
        let mut bad = 0;
        for side in [Side::Left, Side::Right] {
            for t in (0..4).permutations(3) {
                if !has_witness(&g, side, &[vec![t[0]], vec![t[1]], vec![t[2]]]) {
                    bad += 1;
                }
            }
        }
        let exact = bad as f64 / 48.0;
        if exact == 0.0 || exact == 1.0 {
            continue;
        }
        let est = check_theta_sampled(&g, 1, 100_000, seed).unwrap();
        assert!((est.violation_rate - exact).abs() < 0.01, "seed {seed}: {} vs {exact}", est.violation_rate);
        tested += 1;
        if tested == 3 {
            return;
        }
    }
    panic!("no K44 instance with a fractional violation rate");
}

#[test]
fn sampled_is_deterministic_and_sound() {
    let g = random_graph(10, 10, 4);
    assert_eq!(check_theta_sampled(&g, 1, 2000, 7).unwrap(), check_theta_sampled(&g, 1, 2000, 7).unwrap());
    let mono = ColoredBipartiteGraph::constant(10, 10, Color::P1);
    assert!(check_theta_sampled(&mono, 1, 100, 0).unwrap().violation_rate > 0.0);
}

#[test]
fn colors_are_uniform() {
    let g = random_graph(50, 50, 1);
    let mut counts = [0usize; 3];
    for &c in g.colors() {
        counts[c.index() - 1] += 1;
    }
    for c in counts {
        assert!((c as f64 / 2500.0 - 1.0 / 3.0).abs() < 0.05, "{counts:?}");
    }
    assert_eq!(random_graph(2, 2, 0), random_graph(2, 2, 0));
    assert_ne!(splitmix64(0), splitmix64(1));
    assert_ne!(trial_seed(5, 0), trial_seed(5, 1));
}

#[test]
fn chain_is_nested() {
    let c = chain(42, 12);
    assert_eq!(c.len(), 12);
    assert_eq!(c[4].dims(), (3, 2));
    assert_eq!(c[5].dims(), (3, 3));
    for (i, g) in c.iter().enumerate() {
        assert_eq!(g.dims(), chain_dims(i + 1));
        if i + 1 < c.len() {
            let (m, n) = g.dims();
            let l: Vec<usize> = (0..m).collect();
            let r: Vec<usize> = (0..n).collect();
            assert_eq!(&c[i + 1].induced_subgraph(&l, &r).unwrap(), g);
        }
    }
    assert_eq!(chain(42, 20)[..12], c[..]);
}

/// Along a chain the chance that a fixed singleton configuration lacks a
/// witness is `(26/27)^w` for `w` opposite vertices, so the sampled rate
/// should track that curve and shrink as the chain grows.
#[test]
fn chain_growth_reduces_violations() {
    let steps = [40usize, 100, 200, 400];
    let mut previous = f64::INFINITY;
    for &i in &steps {
        let (mut total, mut expected) = (0.0, 0.0);
        let seeds = 8;
        for seed in 0..seeds {
            let g = chain(1000 + seed, i).pop().unwrap();
            let (m, n) = g.dims();
            total += check_theta_sampled(&g, 1, 20_000, seed).unwrap().violation_rate;
            let q = 26.0f64 / 27.0;
            expected += 0.5 * (q.powi(n as i32) + q.powi(m as i32));
        }
        let (rate, expected) = (total / seeds as f64, expected / seeds as f64);
        assert!((rate - expected).abs() < 0.01 + 0.1 * expected, "Γ_{i}: {rate} vs {expected}");
        assert!(rate <= previous);
        previous = rate;
    }
    assert!(previous < 1e-3);
}

#[test]
fn bound_matches_direct_arithmetic() {
    let binom = |n: u64, r: u64| (0..r).fold(1.0f64, |acc, i| acc * (n - i) as f64 / (i + 1) as f64);
    for k in 1..=3u64 {
        for n in 0..80u64 {
            let b = sfsp_bound(k as usize, n as usize);
            let m = n / 2;
            if m < 3 * k {
                assert!(b.vacuous && b.value == 1.0 && b.clamped == 1.0);
                continue;
            }
            let top = if n % 2 == 0 { m } else { m + 1 };
            let q = 1.0 - 3f64.powi(-3 * k as i32);
            let direct = 2.0 * binom(top, k) * binom(top - k, k) * binom(top - 2 * k, k) * q.powi((m - 3 * k) as i32);
            assert!((b.value - direct).abs() <= 1e-9 * direct.max(1.0), "k={k} n={n}");
            assert_eq!(b.clamped, direct.min(1.0));
        }
    }
    assert!((sfsp_bound(1, 8).value - 46.222).abs() < 1e-3);
    assert!((sfsp_bound(1, 9).value - 115.56).abs() < 1e-2);
}

#[test]
fn estimates_are_reproducible_and_bounded() {
    let a = estimate_failure_prob(12, 1, 300, 77).unwrap();
    let b = estimate_failure_prob(12, 1, 300, 77).unwrap();
    assert_eq!(a, b);
    assert!(a.failure_rate <= a.clamped_bound);
    let e = estimate_failure_prob(4, 1, 1000, 3).unwrap();
    assert_eq!((e.failure_rate, e.half_width), (1.0, 0.0));
    assert!(estimate_failure_prob(8, 1, 0, 0).is_err());
}

#[test]
fn oversized_exact_check_falls_back_to_sampling() {
    assert!(matches!(
        check_theta_with_budget(&random_graph(300, 300, 0), 1, 50_000_000),
        Err(LabError::BudgetExceeded(_))
    ));
    let e = estimate_failure_prob(600, 1, 2, 5).unwrap();
    assert!(e.sampled);
}
