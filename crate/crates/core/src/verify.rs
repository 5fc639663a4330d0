//! The lemma verification suite: each check replays one finite construction
//! exhaustively or on a fixed seeded sample and reports pass/fail.

use std::time::Instant;

use itertools::Itertools;
use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::error::Result;
use crate::graph::{
    collapse_witness, is_homogeneous, is_isomorphic, pointwise_color_permutation, Color, ColoredBipartiteGraph, Side,
};
use crate::orbits::{
    closure_equals, distinguish_candidates, enumerate_candidate_groups, generators_for, id_to_coloring,
    orbit_partition, orbit_partition_of, partitions_equal, redu_saturation_check, refines, switch_generators,
    transpose_id, vertex_perm_generators, Budget, GroupSpec, OrbitPartition,
};
use crate::random::{bound_ratio_check, estimate_failure_prob, random_graph, sfsp_bound, trial_seed};
use crate::s3::{commutator, enumerate_subgroups, reducibility_table, subgroup_generated, S3Perm, Subgroup};
use crate::switch::{apply_word, edge_kill_word, monochromatize};

/// Base seed for every sampled check in the suite.
pub const SUITE_SEED: u64 = 20_240_917;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
}

pub const CHECKS: [(u8, &str); 10] = [
    (1, "s3-table"),
    (2, "edge-kill-locality"),
    (3, "monochromatization"),
    (4, "orbit-engine"),
    (5, "subgroup-union-closure"),
    (6, "commutator-saturation"),
    (7, "homogeneous-collapse"),
    (8, "sfsp-formula"),
    (9, "candidate-census"),
    (10, "swap-duality"),
];

pub fn run_check(id: u8) -> Result<CheckOutcome> {
    let name = CHECKS
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, n)| *n)
        .ok_or_else(|| crate::error::LabError::InvalidArgument(format!("no check {id}")))?;
    let start = Instant::now();
    let (passed, detail) = match id {
        1 => s3_table()?,
        2 => edge_kill_locality()?,
        3 => monochromatization()?,
        4 => orbit_engine()?,
        5 => union_closure()?,
        6 => redu_saturation()?,
        7 => homogeneous_collapse()?,
        8 => sfsp_formula()?,
        9 => candidate_census()?,
        _ => swap_duality()?,
    };
    Ok(CheckOutcome { id, name, passed, detail, elapsed_ms: start.elapsed().as_millis() })
}

pub fn run_all() -> Result<Vec<CheckOutcome>> {
    CHECKS.iter().map(|(id, _)| run_check(*id)).collect()
}

fn p(s: &str) -> S3Perm {
    s.parse().expect("literal permutation")
}

/// The printed products: `a ∘ b = c`.
pub const PRINTED_PRODUCTS: [(&str, &str, &str); 12] = [
    ("(12)", "(123)", "(23)"),
    ("(123)", "(12)", "(13)"),
    ("(13)", "(123)", "(12)"),
    ("(123)", "(13)", "(23)"),
    ("(23)", "(123)", "(13)"),
    ("(123)", "(23)", "(12)"),
    ("(12)", "(13)", "(132)"),
    ("(13)", "(12)", "(123)"),
    ("(12)", "(23)", "(123)"),
    ("(23)", "(12)", "(132)"),
    ("(23)", "(13)", "(123)"),
    ("(13)", "(23)", "(132)"),
];

fn s3_table() -> Result<(bool, String)> {
    let mismatched: Vec<String> = PRINTED_PRODUCTS
        .iter()
        .filter(|(a, b, c)| p(a).compose(&p(b)) != p(c))
        .map(|(a, b, c)| format!("{a}{b}≠{c}"))
        .collect();
    let table = reducibility_table();
    let table_ok = table.len() == 6
        && table.iter().all(|e| {
            let printed = |x: S3Perm, y: S3Perm| {
                PRINTED_PRODUCTS.iter().any(|(a, b, c)| p(a) == x && p(b) == y && p(c) == x.compose(&y))
            };
            e.fg != e.gf && printed(e.f, e.g) && printed(e.g, e.f)
        });
    let subs = enumerate_subgroups();
    let nontrivial: Vec<&Subgroup> = subs.iter().filter(|h| !h.is_trivial()).collect();
    let generate_ok = nontrivial.iter().tuple_combinations().all(|(a, b)| {
        let gens: Vec<S3Perm> = a.elements().iter().chain(b.elements()).copied().collect();
        subgroup_generated(&gens) == Subgroup::full()
    });
    let passed = mismatched.is_empty() && table_ok && subs.len() == 6 && generate_ok;
    Ok((
        passed,
        format!(
            "{} of 12 products match; table lines {}; {} subgroups; pairwise generation {}",
            12 - mismatched.len(),
            table.len(),
            subs.len(),
            if generate_ok { "S3" } else { "FAILED" }
        ),
    ))
}

fn noncommuting_pairs() -> Vec<(S3Perm, S3Perm)> {
    S3Perm::ALL
        .iter()
        .cartesian_product(S3Perm::ALL.iter())
        .filter(|(f, g)| !f.commutes(g))
        .map(|(f, g)| (*f, *g))
        .collect()
}

/// Checks one graph against every edge and non-commuting pair; returns the
/// number of (edge, pair) cases and the number of violations.
fn edge_kill_cases(g: &ColoredBipartiteGraph, pairs: &[(S3Perm, S3Perm)]) -> Result<(usize, usize)> {
    let (m, n) = g.dims();
    let mut cases = 0;
    let mut bad = 0;
    for x in 0..m {
        for y in 0..n {
            for &(f, gp) in pairs {
                cases += 1;
                let out = apply_word(g, &edge_kill_word(x, y, f, gp)?)?;
                let gamma = commutator(&f, &gp);
                let ok = (0..m).all(|i| {
                    (0..n).all(|j| {
                        let want = if (i, j) == (x, y) { gamma.apply(g.color(i, j)) } else { g.color(i, j) };
                        out.color(i, j) == want
                    })
                });
                bad += usize::from(!ok);
            }
        }
    }
    Ok((cases, bad))
}

fn edge_kill_locality() -> Result<(bool, String)> {
    let pairs = noncommuting_pairs();
    let (mut cases, mut bad) = (0, 0);
    for id in 0..81 {
        let (c, b) = edge_kill_cases(&id_to_coloring(2, 2, id)?, &pairs)?;
        cases += c;
        bad += b;
    }
    for t in 0..1000 {
        let (c, b) = edge_kill_cases(&random_graph(3, 3, trial_seed(SUITE_SEED, t)), &pairs)?;
        cases += c;
        bad += b;
    }
    Ok((bad == 0, format!("{cases} cases over {} non-commuting pairs, {bad} violations", pairs.len())))
}

fn monochromatization() -> Result<(bool, String)> {
    let target = ColoredBipartiteGraph::constant(4, 4, Color::P1);
    let mut bad = 0;
    let mut longest = 0;
    for t in 0..500 {
        let g = random_graph(4, 4, trial_seed(SUITE_SEED ^ 3, t));
        let word = monochromatize(&g, Color::P1)?;
        let off = g.colors().iter().filter(|&&c| c != Color::P1).count();
        longest = longest.max(word.len());
        if apply_word(&g, &word)? != target || word.len() > 8 * off {
            bad += 1;
        }
    }
    Ok((bad == 0, format!("500 colorings of K_{{4,4}}, {bad} failures, longest word {longest}")))
}

/// Orbit count of `Sym(m) × Sym(n)` acting on colorings, by averaging fixed
/// points: a pair of permutations fixes `3^c` colorings, `c` the number of
/// cycles it induces on cells.
pub fn burnside_vertex_perm_orbits(m: usize, n: usize) -> u64 {
    let mut total = 0u64;
    let mut group_order = 0u64;
    for pl in (0..m).permutations(m) {
        for pr in (0..n).permutations(n) {
            group_order += 1;
            let mut seen = vec![false; m * n];
            let mut cycles = 0u32;
            for start in 0..m * n {
                if seen[start] {
                    continue;
                }
                cycles += 1;
                let mut cell = start;
                while !seen[cell] {
                    seen[cell] = true;
                    cell = pl[cell / n] * n + pr[cell % n];
                }
            }
            total += 3u64.pow(cycles);
        }
    }
    total / group_order
}

fn orbit_engine() -> Result<(bool, String)> {
    let b = Budget::default();
    let one = Subgroup::trivial;
    let aut = orbit_partition(&GroupSpec::new(one(), one()), 2, 2, b)?.orbit_count();
    let burnside = burnside_vertex_perm_orbits(2, 2);
    let full = GroupSpec::new(Subgroup::full(), Subgroup::full());
    let full22 = orbit_partition(&full, 2, 2, b)?.orbit_count();
    let full23 = orbit_partition(&full, 2, 3, b)?.orbit_count();
    let bare = GroupSpec::new(one(), one()).without_vertex_perms();
    let singles = orbit_partition(&bare, 2, 2, b)?;
    let singles_ok = singles.orbit_count() == 81 && singles.orbit_sizes().iter().all(|&s| s == 1);
    let passed = aut == 27 && burnside == 27 && full22 == 1 && full23 == 1 && singles_ok;
    Ok((
        passed,
        format!(
            "Aut K22 {aut} (Burnside {burnside}); full group K22 {full22}, K23 {full23}; no generators {}",
            singles.orbit_count()
        ),
    ))
}

fn left_switch_gens(sigmas: &[S3Perm], m: usize, n: usize) -> Vec<crate::orbits::Generator> {
    let mut gens = vertex_perm_generators(m, n);
    gens.extend(switch_generators(Side::Left, sigmas, m, n));
    gens
}

fn union_closure() -> Result<(bool, String)> {
    let proper: Vec<Subgroup> =
        enumerate_subgroups().into_iter().filter(|h| h.order() == 2 || h.order() == 3).collect();
    let full = Subgroup::full().generators();
    let mut checked = 0;
    let mut failures = Vec::new();
    for (h1, h2) in proper.iter().tuple_combinations() {
        let union: Vec<S3Perm> = h1.generators().into_iter().chain(h2.generators()).collect();
        for (m, n) in [(2, 2), (3, 2)] {
            checked += 1;
            let eq = closure_equals(
                &left_switch_gens(&union, m, n),
                &left_switch_gens(&full, m, n),
                m,
                n,
                Budget::default(),
            )?;
            if !eq {
                failures.push(format!("{}∪{}@{m}x{n}", h1.label(), h2.label()));
            }
        }
    }
    Ok((failures.is_empty(), format!("{checked} comparisons, failures: {failures:?}")))
}

fn redu_saturation() -> Result<(bool, String)> {
    let mut failures = Vec::new();
    let table = reducibility_table();
    for e in &table {
        if !redu_saturation_check(&e.left, &e.right, 2, 2, Budget::default())? {
            failures.push(format!("({},{})", e.left.label(), e.right.label()));
        }
    }
    Ok((failures.is_empty(), format!("{} pairs at K_{{2,2}}, failures: {failures:?}", table.len())))
}

fn homogeneous_collapse() -> Result<(bool, String)> {
    let all: Vec<ColoredBipartiteGraph> = (0..81).map(|id| id_to_coloring(2, 2, id)).collect::<Result<_>>()?;
    let (mut homogeneous, mut permutations, mut collapses, mut failures) = (0, 0, 0, 0);
    for c1 in &all {
        for c2 in &all {
            if !is_homogeneous(c1, c2)? {
                continue;
            }
            homogeneous += 1;
            if pointwise_color_permutation(c1, c2)?.is_some() {
                permutations += 1;
            } else if collapse_witness(c1, c2)?.is_some() {
                collapses += 1;
            } else {
                failures += 1;
            }
        }
    }
    Ok((
        failures == 0,
        format!("{homogeneous} homogeneous pairs: {permutations} permutations, {collapses} collapses, {failures} unexplained"),
    ))
}

fn sfsp_formula() -> Result<(bool, String)> {
    let r1 = bound_ratio_check(1, 10_000)?;
    let r2 = bound_ratio_check(2, 10_000)?;
    let d1 = (r1.final_ratio() - 26.0 / 27.0).abs();
    let d2 = (r2.final_ratio() - 728.0 / 729.0).abs();
    let estimates =
        [16, 20, 24].iter().map(|&n| estimate_failure_prob(n, 1, 2000, SUITE_SEED)).collect::<Result<Vec<_>>>()?;
    let monotone = estimates
        .windows(2)
        .all(|w| w[1].failure_rate <= w[0].failure_rate + 2.0 * w[0].half_width.max(w[1].half_width) + 1e-12);
    let bounded = estimates.iter().all(|e| e.failure_rate <= sfsp_bound(1, e.n).clamped + 1e-12);
    let rates: Vec<String> =
        estimates.iter().map(|e| format!("n={}:{:.4}±{:.4}", e.n, e.failure_rate, e.half_width)).collect();
    Ok((
        d1 < 1e-3 && d2 < 1e-3 && monotone && bounded,
        format!("ratio gaps k=1 {d1:.2e}, k=2 {d2:.2e}; estimates {}", rates.join(" ")),
    ))
}

fn candidate_census() -> Result<(bool, String)> {
    let b = Budget { max_cells: 9 };
    let candidates = enumerate_candidate_groups(false);
    let names_ok = candidates.len() == 16 && !candidates.iter().any(|c| c.name.starts_with('<'));
    let aut_spec = GroupSpec::new(Subgroup::trivial(), Subgroup::trivial());
    let mut refined_ok = true;
    for (m, n) in [(2, 2), (3, 3)] {
        let aut = orbit_partition(&aut_spec, m, n, b)?;
        for c in candidates.iter().skip(1) {
            let part = orbit_partition(&c.spec, m, n, b)?;
            refined_ok &= refines(&aut, &part)? && !partitions_equal(&aut, &part)?;
        }
    }
    let report = distinguish_candidates(3, 3, false, b)?;
    Ok((
        names_ok && refined_ok,
        format!(
            "{} candidates; Aut strictly finer than all: {refined_ok}; collisions at 3x3: {:?}",
            candidates.len(),
            report.collisions
        ),
    ))
}

/// Partition obtained from `base` by merging each class with its transpose.
pub fn merge_with_transpose(base: &OrbitPartition) -> OrbitPartition {
    let k = base.m;
    let size = base.assignment().len();
    let mut uf = UnionFind::<u32>::new(size);
    let mut first = vec![u32::MAX; base.orbit_count()];
    for id in 0..size {
        let o = base.orbit_of(id as u64) as usize;
        if first[o] == u32::MAX {
            first[o] = id as u32;
        } else {
            uf.union(first[o], id as u32);
        }
        uf.union(id as u32, transpose_id(id as u64, k) as u32);
    }
    // Rebuild a canonical partition through the orbit engine's numbering.
    let mut label = vec![u32::MAX; size];
    let mut next = 0;
    let assignment: Vec<u32> = (0..size)
        .map(|id| {
            let r = uf.find_mut(id as u32) as usize;
            if label[r] == u32::MAX {
                label[r] = next;
                next += 1;
            }
            label[r]
        })
        .collect();
    OrbitPartition::from_assignment(base.m, base.n, assignment)
}

fn swap_duality() -> Result<(bool, String)> {
    let mut iso_failures = 0;
    for t in 0..200u64 {
        let k = 1 + (t % 6) as usize;
        let g = random_graph(k, k, trial_seed(SUITE_SEED ^ 10, t));
        let sw = g.swap_sides();
        match is_isomorphic(&g, &sw, true) {
            Some(w) if w.verify(&g, &sw) => {}
            _ => iso_failures += 1,
        }
    }
    let b = Budget::default();
    let mut merge_failures = Vec::new();
    let symmetric = enumerate_candidate_groups(false).into_iter().filter(|c| c.spec.is_swap_symmetric());
    let mut checked = 0;
    for c in symmetric {
        checked += 1;
        let base = orbit_partition(&c.spec, 2, 2, b)?;
        let swapped = orbit_partition_of(&generators_for(&c.spec.clone().with_swap(), 2, 2)?, 2, 2, b)?;
        if !partitions_equal(&swapped, &merge_with_transpose(&base))? {
            merge_failures.push(c.name);
        }
    }
    Ok((
        iso_failures == 0 && merge_failures.is_empty(),
        format!(
            "200 graphs, {iso_failures} swap-isomorphism failures; {checked} swap-symmetric groups at K_{{2,2}}, merge failures {merge_failures:?}"
        ),
    ))
}
