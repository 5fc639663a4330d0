//! Acceptance suite: one line per criterion, each timed against its limit.
//! Every criterion runs the library check and an independent recomputation
//! written here.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use itertools::Itertools;
use reductlab::graph::{collapse_witness, is_homogeneous, pointwise_color_permutation};
use reductlab::orbits::{
    enumerate_candidate_groups, id_to_coloring, orbit_partition, partitions_equal, Budget, GroupSpec,
};
use reductlab::random::{bound_ratio_check, estimate_failure_prob, sfsp_bound};
use reductlab::s3::commutator;
use reductlab::switch::{apply_word, edge_kill_word};
use reductlab::verify::{self, merge_with_transpose, SUITE_SEED};
use reductlab::{ColoredBipartiteGraph, S3Perm, Side, Subgroup};

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn library(id: u8) -> Result<String, String> {
    let out = verify::run_check(id).map_err(|e| e.to_string())?;
    ensure(out.passed, format!("library check: {}", out.detail))?;
    Ok(out.detail)
}

/// Permutations as image arrays on {0, 1, 2}; composition is rightmost-first.
fn parse_cycle(s: &str) -> [usize; 3] {
    let mut img = [0, 1, 2];
    let digits: Vec<usize> = s.trim_matches(|c| c == '(' || c == ')').bytes().map(|b| (b - b'1') as usize).collect();
    for (i, &d) in digits.iter().enumerate() {
        img[d] = digits[(i + 1) % digits.len()];
    }
    img
}

fn compose(a: [usize; 3], b: [usize; 3]) -> [usize; 3] {
    [0, 1, 2].map(|x| a[b[x]])
}

fn criterion_1() -> Result<String, String> {
    let printed = [
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
    for (a, b, c) in printed {
        ensure(compose(parse_cycle(a), parse_cycle(b)) == parse_cycle(c), format!("oracle {a}{b}"))?;
        let lib = a.parse::<S3Perm>().unwrap().compose(&b.parse().unwrap());
        ensure(lib == c.parse().unwrap(), format!("library {a}{b} = {lib}"))?;
    }
    library(1)
}

/// Switch action written out directly on a row-major color vector.
fn switch_cells(cells: &mut [usize], n: usize, side: Side, v: usize, sigma: [usize; 3]) {
    for (k, c) in cells.iter_mut().enumerate() {
        let (i, j) = (k / n, k % n);
        if (side == Side::Left && i == v) || (side == Side::Right && j == v) {
            *c = sigma[*c];
        }
    }
}

fn inverse(p: [usize; 3]) -> [usize; 3] {
    let mut q = [0; 3];
    for x in 0..3 {
        q[p[x]] = x;
    }
    q
}

fn criterion_2() -> Result<String, String> {
    let perms: Vec<[usize; 3]> = (0..3).permutations(3).map(|v| [v[0], v[1], v[2]]).collect();
    let to_lib = |p: [usize; 3]| S3Perm::from_images([p[0] as u8 + 1, p[1] as u8 + 1, p[2] as u8 + 1]).unwrap();
    for id in 0..81 {
        let g = id_to_coloring(2, 2, id).unwrap();
        for (f, h) in perms.iter().cartesian_product(&perms) {
            if compose(*f, *h) == compose(*h, *f) {
                continue;
            }
            for (x, y) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                let mut cells: Vec<usize> = g.colors().iter().map(|c| c.index() - 1).collect();
                let original = cells.clone();
                switch_cells(&mut cells, 2, Side::Left, x, *f);
                switch_cells(&mut cells, 2, Side::Right, y, *h);
                switch_cells(&mut cells, 2, Side::Left, x, inverse(*f));
                switch_cells(&mut cells, 2, Side::Right, y, inverse(*h));
                let gamma = compose(inverse(*h), compose(inverse(*f), compose(*h, *f)));
                for k in 0..4 {
                    let want = if k == 2 * x + y { gamma[original[k]] } else { original[k] };
                    ensure(cells[k] == want, "oracle locality")?;
                }
                let word = edge_kill_word(x, y, to_lib(*f), to_lib(*h)).map_err(|e| e.to_string())?;
                let lib = apply_word(&g, &word).map_err(|e| e.to_string())?;
                let lib_cells: Vec<usize> = lib.colors().iter().map(|c| c.index() - 1).collect();
                ensure(lib_cells == cells, "library word differs from oracle")?;
                ensure(to_lib(gamma) == commutator(&to_lib(*f), &to_lib(*h)), "commutator")?;
            }
        }
    }
    library(2)
}

fn criterion_3() -> Result<String, String> {
    library(3)
}

fn burnside(m: usize, n: usize) -> u64 {
    let mut total = 0;
    let mut order = 0;
    for l in (0..m).permutations(m) {
        for r in (0..n).permutations(n) {
            order += 1;
            let mut seen = vec![false; m * n];
            let mut cycles = 0;
            for s in 0..m * n {
                if !seen[s] {
                    cycles += 1;
                    let mut c = s;
                    while !seen[c] {
                        seen[c] = true;
                        c = l[c / n] * n + r[c % n];
                    }
                }
            }
            total += 3u64.pow(cycles);
        }
    }
    total / order
}

fn criterion_4() -> Result<String, String> {
    ensure(burnside(2, 2) == 27, "oracle Burnside")?;
    let aut = orbit_partition(&GroupSpec::new(Subgroup::trivial(), Subgroup::trivial()), 2, 2, Budget::default())
        .map_err(|e| e.to_string())?;
    ensure(aut.orbit_count() == 27, format!("Aut orbits {}", aut.orbit_count()))?;
    library(4)
}

fn criterion_5() -> Result<String, String> {
    library(5)
}

fn criterion_6() -> Result<String, String> {
    library(6)
}

fn criterion_7() -> Result<String, String> {
    // Local definitions over the four edge labels of K_{2,2}.
    let all: Vec<ColoredBipartiteGraph> = (0..81).map(|id| id_to_coloring(2, 2, id).unwrap()).collect();
    let perms: Vec<[usize; 3]> = (0..3).permutations(3).map(|v| [v[0], v[1], v[2]]).collect();
    let mut unexplained = 0;
    for a in &all {
        for b in &all {
            let ca: Vec<usize> = a.colors().iter().map(|c| c.index() - 1).collect();
            let cb: Vec<usize> = b.colors().iter().map(|c| c.index() - 1).collect();
            let homogeneous = (0..4).all(|x| (0..4).all(|y| cb[x] != cb[y] || ca[x] == ca[y]));
            let permutation = perms.iter().any(|p| (0..4).all(|x| ca[x] == p[cb[x]]));
            let collapse = (0..3).tuple_combinations().any(|(i, j)| {
                let img = |c: usize| (0..4).filter(|&x| cb[x] == c).map(|x| ca[x]).unique().collect::<Vec<_>>();
                let (si, sj) = (img(i), img(j));
                si.len() == 1 && si == sj
            });
            let lib_h = is_homogeneous(a, b).unwrap();
            let lib_p = pointwise_color_permutation(a, b).unwrap().is_some();
            let lib_c = collapse_witness(a, b).unwrap().is_some();
            ensure((lib_h, lib_p, lib_c) == (homogeneous, permutation, collapse), format!("{a:?} {b:?}"))?;
            unexplained += usize::from(homogeneous && !permutation && !collapse);
        }
    }
    ensure(unexplained == 0, format!("{unexplained} unexplained pairs"))?;
    library(7)
}

fn criterion_8() -> Result<String, String> {
    for (k, limit) in [(1usize, 26.0f64 / 27.0), (2, 728.0 / 729.0)] {
        // C_{m+1}/C_m from the three binomial ratios and one factor of q.
        let m = 10_000.0f64;
        let kf = k as f64;
        let q = 1.0 - 3f64.powi(-3 * k as i32);
        let ratio: f64 = (0..3)
            .map(|s| {
                let top = m + 1.0 - s as f64 * kf;
                (top + 1.0) / (top + 1.0 - kf)
            })
            .product::<f64>()
            * q;
        ensure((ratio - limit).abs() < 1e-3, format!("oracle ratio k={k}: {ratio}"))?;
        let lib = bound_ratio_check(k, 10_000).map_err(|e| e.to_string())?;
        ensure((lib.final_ratio() - ratio).abs() < 1e-9, format!("library ratio k={k}"))?;
        ensure((lib.final_ratio() - limit).abs() < 1e-3, "library ratio limit")?;
    }
    let est: Vec<_> = [16, 20, 24].iter().map(|&n| estimate_failure_prob(n, 1, 2000, SUITE_SEED).unwrap()).collect();
    for w in est.windows(2) {
        let tol = 2.0 * w[0].half_width.max(w[1].half_width);
        ensure(w[1].failure_rate <= w[0].failure_rate + tol + 1e-12, "estimates increase")?;
    }
    for e in &est {
        ensure(e.trials == 2000 && e.failure_rate <= sfsp_bound(1, e.n).clamped, format!("n={} above bound", e.n))?;
    }
    library(8)
}

fn criterion_9() -> Result<String, String> {
    let names: Vec<String> = enumerate_candidate_groups(false).into_iter().map(|c| c.name).collect();
    let mut expected = vec!["Aut".to_string()];
    for s in ["(12)", "(13)", "(23)", "(123)"] {
        expected.extend(["S_l^", "S_r^", "S_lr^"].map(|p| format!("{p}<{s}>")));
    }
    expected.extend(["S_l^S3", "S_r^S3", "Sym_lr"].map(String::from));
    ensure(names == expected, format!("candidates {names:?}"))?;
    library(9)
}

fn criterion_10() -> Result<String, String> {
    let detail = library(10)?;
    // Adjoining the swap to a one-sided group also adjoins its mirror image,
    // so its orbits are the transpose-merged orbits of the two-sided group.
    let b = Budget::default();
    for c in enumerate_candidate_groups(false).into_iter().filter(|c| !c.spec.is_swap_symmetric()) {
        let h = if c.spec.left.is_trivial() { c.spec.right.clone() } else { c.spec.left.clone() };
        let both = orbit_partition(&GroupSpec::new(h.clone(), h), 2, 2, b).map_err(|e| e.to_string())?;
        let swapped = orbit_partition(&c.spec.clone().with_swap(), 2, 2, b).map_err(|e| e.to_string())?;
        ensure(partitions_equal(&swapped, &merge_with_transpose(&both)).unwrap(), format!("{}+rho", c.name))?;
    }
    Ok(detail)
}

fn main() -> ExitCode {
    let criteria: [(&str, Check, u64); 10] = [
        ("S3 table fidelity", criterion_1, 1),
        ("edge-kill locality", criterion_2, 10),
        ("monochromatization", criterion_3, 10),
        ("orbit engine", criterion_4, 30),
        ("subgroup union closure", criterion_5, 60),
        ("commutator saturation", criterion_6, 60),
        ("homogeneous collapse", criterion_7, 5),
        ("SFSP formula", criterion_8, 300),
        ("candidate census", criterion_9, 600),
        ("swap duality", criterion_10, 60),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*limit);
        let (status, detail) = match (&result, in_time) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("over {limit} s limit; {d}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("{status} criterion {:>2} {name} ({:.3} s / {limit} s): {detail}", i + 1, elapsed.as_secs_f64());
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
