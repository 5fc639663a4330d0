use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::graph::{ColoredBipartiteGraph, Side};

/// Default cap on the number of set configurations an exact check visits.
pub const DEFAULT_THETA_BUDGET: u128 = 50_000_000;

/// Pairwise disjoint `X_1, X_2, X_3` on `side` with no witness vertex on the
/// opposite side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThetaCounterexample {
    pub side: Side,
    pub sets: [Vec<usize>; 3],
}

impl ThetaCounterexample {
    /// True iff the sets are valid, disjoint, within size `k`, and no
    /// opposite vertex realizes color `i` to every member of `X_i`.
    pub fn verify(&self, g: &ColoredBipartiteGraph, k: usize) -> bool {
        let own = g.side_count(self.side);
        let mut seen = vec![false; own];
        for set in &self.sets {
            if set.len() > k {
                return false;
            }
            for &x in set {
                if x >= own || std::mem::replace(&mut seen[x], true) {
                    return false;
                }
            }
        }
        let color = |x: usize, w: usize| match self.side {
            Side::Left => g.color(x, w),
            Side::Right => g.color(w, x),
        };
        !(0..g.side_count(self.side.opposite()))
            .any(|w| self.sets.iter().enumerate().all(|(c, set)| set.iter().all(|&x| color(x, w).index() == c + 1)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionReport {
    pub k: usize,
    pub holds: bool,
    pub counterexample: Option<ThetaCounterexample>,
    pub configurations_checked: u64,
}

/// Number of configurations (disjoint `X_1, X_2, X_3`, each of size at most
/// `k`) on a side with `s` vertices.
pub fn theta_configuration_count(s: usize, k: usize) -> u128 {
    let binom = |n: usize, r: usize| -> u128 {
        if r > n {
            return 0;
        }
        (0..r).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
    };
    let mut total = 0u128;
    for a in 0..=k.min(s) {
        for b in 0..=k.min(s - a) {
            for c in 0..=k.min(s - a - b) {
                let ways = binom(s, a).saturating_mul(binom(s - a, b)).saturating_mul(binom(s - a - b, c));
                total = total.saturating_add(ways);
            }
        }
    }
    total
}

pub fn check_theta(g: &ColoredBipartiteGraph, k: usize) -> Result<ExtensionReport> {
    check_theta_with_budget(g, k, DEFAULT_THETA_BUDGET)
}

/// Exact check of both clauses: sets on the left need a right witness, sets
/// on the right need a left witness. Configurations are visited in order of
/// total size, left side first at each size, so a counterexample has as few
/// vertices as possible.
pub fn check_theta_with_budget(g: &ColoredBipartiteGraph, k: usize, budget: u128) -> Result<ExtensionReport> {
    let (m, n) = g.dims();
    let needed = theta_configuration_count(m, k)
        .saturating_add(theta_configuration_count(n, k))
        .saturating_mul((3 * k + 1) as u128);
    if needed > budget {
        return Err(LabError::BudgetExceeded(format!(
            "exact Θ_{k} on K_{{{m},{n}}} needs about {needed} configuration visits (cap {budget}); use sampled mode"
        )));
    }
    let mut searches = [SideSearch::new(g, Side::Left, k), SideSearch::new(g, Side::Right, k)];
    let mut found = None;
    'outer: for depth in 0..=3 * k {
        for search in searches.iter_mut() {
            if let Some(cx) = search.at_depth(depth) {
                found = Some(cx);
                break 'outer;
            }
        }
    }
    let checked = searches.iter().map(|s| s.visited).sum();
    Ok(ExtensionReport { k, holds: found.is_none(), counterexample: found, configurations_checked: checked })
}

type Bits = Vec<u64>;

/// Depth-limited search over configurations on one side, tracking the set of
/// opposite vertices still consistent with every assignment made.
struct SideSearch {
    side: Side,
    k: usize,
    own: usize,
    /// masks[x][c]: opposite vertices joined to `x` by color `c + 1`.
    masks: Vec<[Bits; 3]>,
    full: Bits,
    sets: [Vec<usize>; 3],
    visited: u64,
}

impl SideSearch {
    fn new(g: &ColoredBipartiteGraph, side: Side, k: usize) -> Self {
        let own = g.side_count(side);
        let other = g.side_count(side.opposite());
        let words = other.div_ceil(64);
        let mut masks = vec![[vec![0u64; words], vec![0u64; words], vec![0u64; words]]; own];
        for (x, mask) in masks.iter_mut().enumerate() {
            for w in 0..other {
                let c = match side {
                    Side::Left => g.color(x, w),
                    Side::Right => g.color(w, x),
                };
                mask[c.index() - 1][w / 64] |= 1 << (w % 64);
            }
        }
        let mut full = vec![0u64; words];
        for w in 0..other {
            full[w / 64] |= 1 << (w % 64);
        }
        SideSearch { side, k, own, masks, full, sets: Default::default(), visited: 0 }
    }

    /// A counterexample with exactly `depth` vertices, if one exists.
    fn at_depth(&mut self, depth: usize) -> Option<ThetaCounterexample> {
        if depth > self.own {
            return None;
        }
        let full = self.full.clone();
        self.descend(0, depth, &full).then(|| ThetaCounterexample { side: self.side, sets: self.sets.clone() })
    }

    /// Extends the current assignment by `remaining` more vertices, each with
    /// index at least `start`. Returns true with `self.sets` holding a
    /// counterexample.
    fn descend(&mut self, start: usize, remaining: usize, cand: &Bits) -> bool {
        if remaining == 0 {
            self.visited += 1;
            return cand.iter().all(|&w| w == 0);
        }
        for x in start..self.own {
            if self.own - x < remaining {
                break;
            }
            for c in 0..3 {
                if self.sets[c].len() == self.k {
                    continue;
                }
                let next: Bits = cand.iter().zip(&self.masks[x][c]).map(|(a, b)| a & b).collect();
                self.sets[c].push(x);
                if self.descend(x + 1, remaining - 1, &next) {
                    return true;
                }
                self.sets[c].pop();
            }
        }
        false
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampledTheta {
    pub k: usize,
    pub trials: u64,
    pub violations: u64,
    pub violation_rate: f64,
    pub first_violation: Option<ThetaCounterexample>,
}

/// Monte Carlo Θ_k check. Each trial picks a side uniformly, then an ordered
/// triple of disjoint subsets of that side, each of size `min(k, ⌊s/3⌋)`,
/// uniformly at random, and tests it for a witness.
pub fn check_theta_sampled(g: &ColoredBipartiteGraph, k: usize, trials: u64, seed: u64) -> Result<SampledTheta> {
    if trials == 0 {
        return Err(LabError::InvalidArgument("trials must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    let mut first_violation = None;
    for _ in 0..trials {
        let side = if rng.gen_bool(0.5) { Side::Left } else { Side::Right };
        let s = g.side_count(side);
        let size = k.min(s / 3);
        let picked = index::sample(&mut rng, s, 3 * size).into_vec();
        let sets = [picked[..size].to_vec(), picked[size..2 * size].to_vec(), picked[2 * size..].to_vec()];
        let config = ThetaCounterexample { side, sets };
        if config.verify(g, k) {
            violations += 1;
            first_violation.get_or_insert(config);
        }
    }
    Ok(SampledTheta { k, trials, violations, violation_rate: violations as f64 / trials as f64, first_violation })
}
