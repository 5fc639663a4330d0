//! Candidate reduct groups realized as permutation groups on the coloring
//! space of `K_{m,n}`, and their orbit partitions.
//!
//! Two groups count as the same reduct at size `(m, n)` when they induce the
//! same orbit partition on all `3^{mn}` colorings.

use std::fmt;

use petgraph::unionfind::UnionFind;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::graph::{Color, ColoredBipartiteGraph, Side, VertexRef};
use crate::s3::{commutator, noncommuting_witness, S3Perm, Subgroup};

/// Default cap on `m · n` for coloring-space enumeration (`3^12 = 531441`).
pub const DEFAULT_MAX_CELLS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_cells: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_cells: DEFAULT_MAX_CELLS }
    }
}

impl Budget {
    fn check(&self, m: usize, n: usize) -> Result<()> {
        // 3^20 already overflows u32 ids.
        if m * n > self.max_cells || m * n > 20 {
            return Err(LabError::BudgetExceeded(format!(
                "coloring space of K_{{{m},{n}}} has 3^{} states, cap is 3^{}",
                m * n,
                self.max_cells
            )));
        }
        Ok(())
    }
}

fn space_size(m: usize, n: usize) -> u64 {
    3u64.pow((m * n) as u32)
}

/// Base-3 row-major index of a coloring; the first cell is most significant.
pub fn coloring_id(g: &ColoredBipartiteGraph) -> u64 {
    g.colors().iter().fold(0u64, |acc, c| acc * 3 + (c.index() as u64 - 1))
}

pub fn id_to_coloring(m: usize, n: usize, id: u64) -> Result<ColoredBipartiteGraph> {
    if m * n > 40 || id >= space_size(m, n) {
        return Err(LabError::IndexOutOfRange(format!("coloring id {id} for K_{{{m},{n}}}")));
    }
    let mut digits = vec![0u8; m * n];
    decode(id, &mut digits);
    let colors = digits.iter().map(|&d| Color::from_index(d as usize + 1)).collect::<Result<Vec<_>>>()?;
    ColoredBipartiteGraph::from_colors(m, n, colors)
}

fn decode(mut id: u64, digits: &mut [u8]) {
    for d in digits.iter_mut().rev() {
        *d = (id % 3) as u8;
        id /= 3;
    }
}

fn encode(digits: &[u8]) -> u64 {
    digits.iter().fold(0u64, |acc, &d| acc * 3 + d as u64)
}

/// Image of the transpose action on ids of a square `K_{k,k}`.
pub fn transpose_id(id: u64, k: usize) -> u64 {
    let mut digits = vec![0u8; k * k];
    decode(id, &mut digits);
    let mut out = vec![0u8; k * k];
    for i in 0..k {
        for j in 0..k {
            out[j * k + i] = digits[i * k + j];
        }
    }
    encode(&out)
}

/// One generating bijection of the coloring space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    /// Exchange left vertices `i` and `i + 1`.
    SwapLeft(usize),
    /// Exchange right vertices `j` and `j + 1`.
    SwapRight(usize),
    /// Single-vertex switch.
    Switch(VertexRef, S3Perm),
    /// The side swap on a square graph.
    Transpose,
    /// Recolor the single edge `(i, j)` by `sigma`.
    EdgeRecolor { i: usize, j: usize, sigma: S3Perm },
}

impl Generator {
    /// Applies the action to a digit buffer (`color index - 1`, row-major).
    fn act(&self, src: &[u8], dst: &mut [u8], m: usize, n: usize) {
        dst.copy_from_slice(src);
        let perm = |s: &S3Perm, d: u8| s.images()[d as usize] - 1;
        match *self {
            Generator::SwapLeft(i) => {
                for j in 0..n {
                    dst[i * n + j] = src[(i + 1) * n + j];
                    dst[(i + 1) * n + j] = src[i * n + j];
                }
            }
            Generator::SwapRight(j) => {
                for i in 0..m {
                    dst[i * n + j] = src[i * n + j + 1];
                    dst[i * n + j + 1] = src[i * n + j];
                }
            }
            Generator::Switch(v, s) => match v.side {
                Side::Left => {
                    for j in 0..n {
                        dst[v.index * n + j] = perm(&s, src[v.index * n + j]);
                    }
                }
                Side::Right => {
                    for i in 0..m {
                        dst[i * n + v.index] = perm(&s, src[i * n + v.index]);
                    }
                }
            },
            Generator::Transpose => {
                for i in 0..m {
                    for j in 0..n {
                        dst[j * m + i] = src[i * n + j];
                    }
                }
            }
            Generator::EdgeRecolor { i, j, sigma } => {
                dst[i * n + j] = perm(&sigma, src[i * n + j]);
            }
        }
    }

    fn check(&self, m: usize, n: usize) -> Result<()> {
        let ok = match *self {
            Generator::SwapLeft(i) => i + 1 < m,
            Generator::SwapRight(j) => j + 1 < n,
            Generator::Switch(v, _) => v.index < if v.side == Side::Left { m } else { n },
            Generator::Transpose => m == n,
            Generator::EdgeRecolor { i, j, .. } => i < m && j < n,
        };
        if ok {
            Ok(())
        } else if *self == Generator::Transpose {
            Err(LabError::NonSquare { m, n })
        } else {
            Err(LabError::IndexOutOfRange(format!("{self} on K_{{{m},{n}}}")))
        }
    }

    pub fn apply(&self, g: &ColoredBipartiteGraph) -> Result<ColoredBipartiteGraph> {
        let (m, n) = g.dims();
        self.check(m, n)?;
        let src: Vec<u8> = g.colors().iter().map(|c| c.index() as u8 - 1).collect();
        let mut dst = vec![0u8; src.len()];
        self.act(&src, &mut dst, m, n);
        let colors = dst.iter().map(|&d| Color::from_index(d as usize + 1)).collect::<Result<Vec<_>>>()?;
        ColoredBipartiteGraph::from_colors(m, n, colors)
    }

    pub fn apply_id(&self, id: u64, m: usize, n: usize) -> u64 {
        let mut src = vec![0u8; m * n];
        let mut dst = vec![0u8; m * n];
        decode(id, &mut src);
        self.act(&src, &mut dst, m, n);
        encode(&dst)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::SwapLeft(i) => write!(f, "swapL({i},{})", i + 1),
            Generator::SwapRight(j) => write!(f, "swapR({j},{})", j + 1),
            Generator::Switch(v, s) => write!(f, "switch({v},{s})"),
            Generator::Transpose => write!(f, "rho"),
            Generator::EdgeRecolor { i, j, sigma } => write!(f, "edge({i},{j},{sigma})"),
        }
    }
}

/// Adjacent transpositions of left vertices, then of right vertices.
pub fn vertex_perm_generators(m: usize, n: usize) -> Vec<Generator> {
    (0..m.saturating_sub(1))
        .map(Generator::SwapLeft)
        .chain((0..n.saturating_sub(1)).map(Generator::SwapRight))
        .collect()
}

/// Switches at every vertex of `side` by every σ in `sigmas`.
pub fn switch_generators(side: Side, sigmas: &[S3Perm], m: usize, n: usize) -> Vec<Generator> {
    let count = if side == Side::Left { m } else { n };
    (0..count)
        .flat_map(|idx| {
            sigmas
                .iter()
                .filter(|s| !s.is_identity())
                .map(move |&s| Generator::Switch(VertexRef { side, index: idx }, s))
        })
        .collect()
}

/// `⟨S_l^{H_left}, S_r^{H_right}⟩`, optionally with vertex permutations and
/// the side swap adjoined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub left: Subgroup,
    pub right: Subgroup,
    pub vertex_perms: bool,
    pub allow_swap: bool,
}

impl GroupSpec {
    pub fn new(left: Subgroup, right: Subgroup) -> Self {
        GroupSpec { left, right, vertex_perms: true, allow_swap: false }
    }

    pub fn with_swap(mut self) -> Self {
        self.allow_swap = true;
        self
    }

    pub fn without_vertex_perms(mut self) -> Self {
        self.vertex_perms = false;
        self
    }

    /// Canonical label, e.g. `Aut`, `S_l^<(12)>`, `S_lr^<(123)>`, `Sym_lr`.
    pub fn name(&self) -> String {
        let (l, r) = (&self.left, &self.right);
        let mut name = match (l.is_trivial(), r.is_trivial()) {
            (true, true) => "Aut".to_string(),
            (false, true) => format!("S_l^{}", l.label()),
            (true, false) => format!("S_r^{}", r.label()),
            (false, false) if l == r && l.order() == 6 => "Sym_lr".to_string(),
            (false, false) if l == r => format!("S_lr^{}", l.label()),
            (false, false) => format!("<S_l^{},S_r^{}>", l.label(), r.label()),
        };
        if !self.vertex_perms {
            name.push_str("/noperm");
        }
        if self.allow_swap {
            name.push_str("+rho");
        }
        name
    }

    /// True when conjugation by the side swap maps the group to itself.
    pub fn is_swap_symmetric(&self) -> bool {
        self.left == self.right
    }
}

/// Generator list for `spec` on `K_{m,n}`.
pub fn generators_for(spec: &GroupSpec, m: usize, n: usize) -> Result<Vec<Generator>> {
    if spec.allow_swap && m != n {
        return Err(LabError::NonSquare { m, n });
    }
    let mut gens = Vec::new();
    if spec.vertex_perms {
        gens.extend(vertex_perm_generators(m, n));
    }
    gens.extend(switch_generators(Side::Left, &spec.left.generators(), m, n));
    gens.extend(switch_generators(Side::Right, &spec.right.generators(), m, n));
    if spec.allow_swap {
        gens.push(Generator::Transpose);
    }
    Ok(gens)
}

/// Orbits of a generated group on the colorings of `K_{m,n}`, numbered by
/// least member id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPartition {
    pub m: usize,
    pub n: usize,
    orbit_of: Vec<u32>,
    orbit_count: usize,
}

impl OrbitPartition {
    pub fn orbit_count(&self) -> usize {
        self.orbit_count
    }

    pub fn orbit_of(&self, id: u64) -> u32 {
        self.orbit_of[id as usize]
    }

    pub fn assignment(&self) -> &[u32] {
        &self.orbit_of
    }

    /// Orbit sizes indexed by orbit id.
    pub fn orbit_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.orbit_count];
        for &o in &self.orbit_of {
            sizes[o as usize] += 1;
        }
        sizes
    }

    pub(crate) fn from_assignment(m: usize, n: usize, orbit_of: Vec<u32>) -> Self {
        let orbit_count = orbit_of.iter().max().map_or(0, |&x| x as usize + 1);
        OrbitPartition { m, n, orbit_of, orbit_count }
    }

    fn from_roots(m: usize, n: usize, mut uf: UnionFind<u32>) -> Self {
        let size = space_size(m, n) as usize;
        let mut label = vec![u32::MAX; size];
        let mut next = 0u32;
        let orbit_of = (0..size)
            .map(|id| {
                let root = uf.find_mut(id as u32) as usize;
                if label[root] == u32::MAX {
                    label[root] = next;
                    next += 1;
                }
                label[root]
            })
            .collect();
        OrbitPartition { m, n, orbit_of, orbit_count: next as usize }
    }
}

/// Connected components of the coloring space under `gens`.
pub fn orbit_partition_of(gens: &[Generator], m: usize, n: usize, budget: Budget) -> Result<OrbitPartition> {
    budget.check(m, n)?;
    gens.iter().try_for_each(|g| g.check(m, n))?;
    let size = space_size(m, n) as usize;
    let mut uf = UnionFind::<u32>::new(size);
    for gen in gens {
        let images: Vec<u32> = (0..size as u64)
            .into_par_iter()
            .map_init(
                || (vec![0u8; m * n], vec![0u8; m * n]),
                |(src, dst), id| {
                    decode(id, src);
                    gen.act(src, dst, m, n);
                    encode(dst) as u32
                },
            )
            .collect();
        for (id, &img) in images.iter().enumerate() {
            uf.union(id as u32, img);
        }
    }
    Ok(OrbitPartition::from_roots(m, n, uf))
}

pub fn orbit_partition(spec: &GroupSpec, m: usize, n: usize, budget: Budget) -> Result<OrbitPartition> {
    orbit_partition_of(&generators_for(spec, m, n)?, m, n, budget)
}

fn same_space(p1: &OrbitPartition, p2: &OrbitPartition) -> Result<()> {
    if (p1.m, p1.n) == (p2.m, p2.n) {
        Ok(())
    } else {
        Err(LabError::DimensionMismatch(format!("partitions of K_{{{},{}}} and K_{{{},{}}}", p1.m, p1.n, p2.m, p2.n)))
    }
}

/// Canonical numbering makes equal partitions identical vectors.
pub fn partitions_equal(p1: &OrbitPartition, p2: &OrbitPartition) -> Result<bool> {
    same_space(p1, p2)?;
    Ok(p1.orbit_of == p2.orbit_of)
}

/// True iff every orbit of `finer` lies inside one orbit of `coarser`.
pub fn refines(finer: &OrbitPartition, coarser: &OrbitPartition) -> Result<bool> {
    same_space(finer, coarser)?;
    let mut image = vec![u32::MAX; finer.orbit_count];
    for (&a, &b) in finer.orbit_of.iter().zip(&coarser.orbit_of) {
        let slot = &mut image[a as usize];
        if *slot == u32::MAX {
            *slot = b;
        } else if *slot != b {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn closure_equals(gens_a: &[Generator], gens_b: &[Generator], m: usize, n: usize, budget: Budget) -> Result<bool> {
    let pa = orbit_partition_of(gens_a, m, n, budget)?;
    let pb = orbit_partition_of(gens_b, m, n, budget)?;
    partitions_equal(&pa, &pb)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateGroup {
    pub name: String,
    pub spec: GroupSpec,
}

impl CandidateGroup {
    fn from_spec(spec: GroupSpec) -> Self {
        CandidateGroup { name: spec.name(), spec }
    }
}

/// `Aut`, the four rows `S_l^⟨σ⟩, S_r^⟨σ⟩, S_lr^⟨σ⟩` for
/// `σ ∈ {(12), (13), (23), (123)}`, `S_l^{S3}`, `S_r^{S3}`, then `Sym_lr`.
/// With `with_swap`, each entry is repeated with the side swap adjoined.
pub fn enumerate_candidate_groups(with_swap: bool) -> Vec<CandidateGroup> {
    let one = Subgroup::trivial;
    let mut specs = vec![GroupSpec::new(one(), one())];
    for s in ["(12)", "(13)", "(23)", "(123)"] {
        let h = Subgroup::cyclic(s.parse().expect("literal"));
        specs.push(GroupSpec::new(h.clone(), one()));
        specs.push(GroupSpec::new(one(), h.clone()));
        specs.push(GroupSpec::new(h.clone(), h));
    }
    specs.push(GroupSpec::new(Subgroup::full(), one()));
    specs.push(GroupSpec::new(one(), Subgroup::full()));
    specs.push(GroupSpec::new(Subgroup::full(), Subgroup::full()));
    if with_swap {
        let swapped: Vec<GroupSpec> = specs.iter().cloned().map(GroupSpec::with_swap).collect();
        specs.extend(swapped);
    }
    specs.into_iter().map(CandidateGroup::from_spec).collect()
}

/// Looks up a candidate by canonical name (swap variants included).
pub fn candidate_by_name(name: &str) -> Result<CandidateGroup> {
    enumerate_candidate_groups(true)
        .into_iter()
        .find(|c| c.name == name)
        .ok_or_else(|| LabError::UnknownGroup(name.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupSummary {
    pub name: String,
    pub orbit_count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistinguishReport {
    pub m: usize,
    pub n: usize,
    pub groups: Vec<GroupSummary>,
    pub collisions: Vec<[String; 2]>,
}

/// Orbit partitions of every candidate at `(m, n)` with all pairs whose
/// partitions coincide. Swap variants are skipped when `m != n`.
pub fn distinguish_candidates(m: usize, n: usize, with_swap: bool, budget: Budget) -> Result<DistinguishReport> {
    let candidates: Vec<CandidateGroup> = enumerate_candidate_groups(with_swap && m == n);
    let partitions: Vec<OrbitPartition> =
        candidates.iter().map(|c| orbit_partition(&c.spec, m, n, budget)).collect::<Result<_>>()?;
    let mut collisions = Vec::new();
    for (i, a) in partitions.iter().enumerate() {
        for (j, b) in partitions.iter().enumerate().skip(i + 1) {
            if partitions_equal(a, b)? {
                collisions.push([candidates[i].name.clone(), candidates[j].name.clone()]);
            }
        }
    }
    let groups = candidates
        .iter()
        .zip(&partitions)
        .map(|(c, p)| GroupSummary { name: c.name.clone(), orbit_count: p.orbit_count() })
        .collect();
    Ok(DistinguishReport { m, n, groups, collisions })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EscalatedCollision {
    pub pair: [String; 2],
    pub m: usize,
    pub n: usize,
    pub still_collides: bool,
}

/// Re-tests each collision of `report` at the larger size `(m, n)`.
pub fn escalate_collisions(
    report: &DistinguishReport,
    m: usize,
    n: usize,
    budget: Budget,
) -> Result<Vec<EscalatedCollision>> {
    report
        .collisions
        .iter()
        .map(|pair| {
            let a = orbit_partition(&candidate_by_name(&pair[0])?.spec, m, n, budget)?;
            let b = orbit_partition(&candidate_by_name(&pair[1])?.spec, m, n, budget)?;
            Ok(EscalatedCollision { pair: pair.clone(), m, n, still_collides: partitions_equal(&a, &b)? })
        })
        .collect()
}

/// Compares the orbits of `⟨S_l^{H1}, S_r^{H2}⟩` (with vertex permutations)
/// before and after adjoining the single-edge recoloring by
/// `γ = commutator(f, g)` at every edge, for the first non-commuting
/// `f ∈ H1`, `g ∈ H2`. The edge-kill word lies in the group, so the two
/// partitions must agree.
pub fn redu_saturation_check(h1: &Subgroup, h2: &Subgroup, m: usize, n: usize, budget: Budget) -> Result<bool> {
    let (f, g) = noncommuting_witness(h1, h2).ok_or_else(|| LabError::CommutingPair(h1.label(), h2.label()))?;
    let gamma = commutator(&f, &g);
    let base = generators_for(&GroupSpec::new(h1.clone(), h2.clone()), m, n)?;
    let mut augmented = base.clone();
    for i in 0..m {
        for j in 0..n {
            augmented.push(Generator::EdgeRecolor { i, j, sigma: gamma });
        }
    }
    closure_equals(&base, &augmented, m, n, budget)
}
