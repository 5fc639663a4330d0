//! Randomized search for a square coloring with the k = 1 extension property.
//!
//! The search is restricted to Hankel colorings `color(i, j) = f((i + j) mod N)`.
//! These are symmetric, so the right-side condition follows from the left one,
//! and the left one says: for distinct nonzero shifts `d1 != d2` some `t` has
//! `(f(t), f(t + d1), f(t + d2)) = (1, 2, 3)`. Annealing runs over `f` only and
//! any hit is confirmed with the exact checker before printing.
//!
//! Usage: `cargo run --release -p reductlab --example theta_search -- N SEED STEPS`

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reductlab::random::check_theta;
use reductlab::ColoredBipartiteGraph;

fn uncovered(f: &[u8]) -> usize {
    let n = f.len();
    let mut covered = vec![false; n * n];
    for t in (0..n).filter(|&t| f[t] == 1) {
        let twos: Vec<usize> = (1..n).filter(|&d| f[(t + d) % n] == 2).collect();
        let threes: Vec<usize> = (1..n).filter(|&d| f[(t + d) % n] == 3).collect();
        for &a in &twos {
            for &b in &threes {
                covered[a * n + b] = true;
            }
        }
    }
    (1..n).flat_map(|a| (1..n).map(move |b| (a, b))).filter(|&(a, b)| a != b && !covered[a * n + b]).count()
}

fn main() {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("integer")).collect();
    let n = args.first().copied().unwrap_or(97) as usize;
    let seed = args.get(1).copied().unwrap_or(0);
    let steps = args.get(2).copied().unwrap_or(200_000);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f: Vec<u8> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
    let mut cost = uncovered(&f);
    let mut temp = 3.0f64;
    for step in 0..steps {
        if cost == 0 {
            eprintln!("hit after {step} steps");
            break;
        }
        let i = rng.gen_range(0..n);
        let old = f[i];
        f[i] = (old + rng.gen_range(0..2u8)) % 3 + 1;
        let next = uncovered(&f);
        if next <= cost || rng.gen::<f64>() < ((cost as f64 - next as f64) / temp).exp() {
            cost = next;
        } else {
            f[i] = old;
        }
        temp = (temp * 0.9995).max(0.05);
    }
    if cost > 0 {
        eprintln!("no hit: {cost} shift pairs uncovered");
        std::process::exit(1);
    }
    let rows: Vec<Vec<u8>> = (0..n).map(|i| (0..n).map(|j| f[(i + j) % n]).collect()).collect();
    let g = ColoredBipartiteGraph::new(n, n, &rows).expect("valid colors");
    assert!(check_theta(&g, 1).expect("within budget").holds, "search and exact check disagree");
    println!("{}", f.iter().map(|c| c.to_string()).collect::<String>());
}
