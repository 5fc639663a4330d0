//! Finite complete bipartite graphs `K_{m,n}` with a total 3-coloring of the
//! cross-edges, plus the coloring predicates built on them.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{LabError, Result};
use crate::s3::S3Perm;

/// A cross-type `P_1`, `P_2` or `P_3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    P1,
    P2,
    P3,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::P1, Color::P2, Color::P3];

    pub fn from_index(i: usize) -> Result<Color> {
        match i {
            1 => Ok(Color::P1),
            2 => Ok(Color::P2),
            3 => Ok(Color::P3),
            _ => Err(LabError::ColorOutOfRange(i as i64)),
        }
    }

    /// The index `i` of `P_i`, in `1..=3`.
    pub fn index(self) -> usize {
        self as usize + 1
    }
}

impl Serialize for Color {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.index() as u8)
    }
}

impl<'de> Deserialize<'de> for Color {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = i64::deserialize(d)?;
        if !(1..=3).contains(&v) {
            return Err(serde::de::Error::custom(LabError::ColorOutOfRange(v)));
        }
        Color::from_index(v as usize).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "L")]
    Left,
    #[serde(rename = "R")]
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexRef {
    pub side: Side,
    #[serde(rename = "i")]
    pub index: usize,
}

impl VertexRef {
    pub fn left(index: usize) -> Self {
        VertexRef { side: Side::Left, index }
    }

    pub fn right(index: usize) -> Self {
        VertexRef { side: Side::Right, index }
    }
}

impl fmt::Display for VertexRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.side {
            Side::Left => 'L',
            Side::Right => 'R',
        };
        write!(f, "{tag}{}", self.index)
    }
}

/// `K_{m,n}` whose cross-edge `(i, j)` carries exactly one cross-type.
///
/// Colors are stored row-major: left vertex `i`, right vertex `j` is at
/// `i * n + j`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ColoredBipartiteGraph {
    m: usize,
    n: usize,
    colors: Vec<Color>,
}

impl ColoredBipartiteGraph {
    /// Builds a graph from an `m × n` matrix of color indices in `1..=3`.
    pub fn new<R: AsRef<[u8]>>(m: usize, n: usize, rows: &[R]) -> Result<Self> {
        if rows.len() != m {
            return Err(LabError::DimensionMismatch(format!("expected {m} rows, got {}", rows.len())));
        }
        let mut colors = Vec::with_capacity(m * n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(LabError::DimensionMismatch(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            for &c in row {
                colors.push(Color::from_index(c as usize)?);
            }
        }
        Ok(ColoredBipartiteGraph { m, n, colors })
    }

    pub fn from_colors(m: usize, n: usize, colors: Vec<Color>) -> Result<Self> {
        if colors.len() != m * n {
            return Err(LabError::DimensionMismatch(format!("{} colors for a {m}x{n} graph", colors.len())));
        }
        Ok(ColoredBipartiteGraph { m, n, colors })
    }

    pub fn constant(m: usize, n: usize, c: Color) -> Self {
        ColoredBipartiteGraph { m, n, colors: vec![c; m * n] }
    }

    pub fn left_count(&self) -> usize {
        self.m
    }

    pub fn right_count(&self) -> usize {
        self.n
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn side_count(&self, side: Side) -> usize {
        match side {
            Side::Left => self.m,
            Side::Right => self.n,
        }
    }

    /// Color of the cross-edge between left `i` and right `j`. Panics when
    /// out of range.
    pub fn color(&self, i: usize, j: usize) -> Color {
        assert!(i < self.m && j < self.n, "edge ({i},{j}) outside {}x{}", self.m, self.n);
        self.colors[i * self.n + j]
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub(crate) fn colors_mut(&mut self) -> &mut [Color] {
        &mut self.colors
    }

    pub fn set_color(&mut self, i: usize, j: usize, c: Color) {
        assert!(i < self.m && j < self.n);
        self.colors[i * self.n + j] = c;
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        (0..self.m).map(|i| (0..self.n).map(|j| self.color(i, j).index() as u8).collect()).collect()
    }

    pub fn check_vertex(&self, v: VertexRef) -> Result<()> {
        if v.index < self.side_count(v.side) {
            Ok(())
        } else {
            Err(LabError::IndexOutOfRange(format!("vertex {v} in a {}x{} graph", self.m, self.n)))
        }
    }

    /// Restriction to the given left and right vertices. Indices are
    /// renumbered in increasing order; duplicates are ignored.
    pub fn induced_subgraph(&self, left: &[usize], right: &[usize]) -> Result<Self> {
        let prep = |idx: &[usize], bound: usize, side: &str| -> Result<Vec<usize>> {
            let mut v = idx.to_vec();
            v.sort_unstable();
            v.dedup();
            if let Some(&bad) = v.iter().find(|&&x| x >= bound) {
                return Err(LabError::IndexOutOfRange(format!("{side} index {bad} (side has {bound} vertices)")));
            }
            Ok(v)
        };
        let left = prep(left, self.m, "left")?;
        let right = prep(right, self.n, "right")?;
        let colors =
            left.iter().flat_map(|&i| right.iter().map(move |&j| (i, j))).map(|(i, j)| self.color(i, j)).collect();
        Ok(ColoredBipartiteGraph { m: left.len(), n: right.len(), colors })
    }

    /// The side swap: left and right exchange roles, colors are kept.
    pub fn swap_sides(&self) -> Self {
        let mut colors = Vec::with_capacity(self.colors.len());
        for j in 0..self.n {
            for i in 0..self.m {
                colors.push(self.color(i, j));
            }
        }
        ColoredBipartiteGraph { m: self.n, n: self.m, colors }
    }

    /// True iff all three cross-types occur.
    pub fn witnesses_all_colors(&self) -> bool {
        let mut seen = [false; 3];
        for c in &self.colors {
            seen[c.index() - 1] = true;
        }
        seen.iter().all(|&s| s)
    }

    /// The coloring induced on the side opposite to `v` by the edges at `v`.
    pub fn link_coloring(&self, v: VertexRef) -> Result<VertexColoring> {
        self.check_vertex(v)?;
        let labels = match v.side {
            Side::Left => (0..self.n).map(|j| VertexLabel::Link(self.color(v.index, j))).collect(),
            Side::Right => (0..self.m).map(|i| VertexLabel::Link(self.color(i, v.index))).collect(),
        };
        Ok(VertexColoring { side: v.side.opposite(), labels })
    }

    /// Full pair coloring `χ` on all 2-subsets of the vertex set.
    pub fn edge_coloring(&self) -> EdgeColoring {
        EdgeColoring { graph: self.clone() }
    }

    fn same_dims(&self, other: &Self) -> Result<()> {
        if self.dims() == other.dims() {
            Ok(())
        } else {
            Err(LabError::DomainMismatch(format!("{}x{} vs {}x{}", self.m, self.n, other.m, other.n)))
        }
    }
}

impl fmt::Debug for ColoredBipartiteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K{{{},{}}}{:?}", self.m, self.n, self.rows())
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    m: usize,
    n: usize,
    colors: Vec<Vec<i64>>,
}

impl Serialize for ColoredBipartiteGraph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson {
            m: self.m,
            n: self.n,
            colors: self.rows().into_iter().map(|r| r.into_iter().map(i64::from).collect()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ColoredBipartiteGraph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = GraphJson::deserialize(d)?;
        let mut rows = Vec::with_capacity(raw.colors.len());
        for row in &raw.colors {
            let mut r = Vec::with_capacity(row.len());
            for &c in row {
                if !(1..=3).contains(&c) {
                    return Err(serde::de::Error::custom(LabError::ColorOutOfRange(c)));
                }
                r.push(c as u8);
            }
            rows.push(r);
        }
        ColoredBipartiteGraph::new(raw.m, raw.n, &rows).map_err(serde::de::Error::custom)
    }
}

/// Label of a 2-subset under `χ`: same-side pairs get their side, cross pairs
/// their cross-type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeLabel {
    SameLeft,
    SameRight,
    Cross(Color),
}

/// The coloring `χ : [V]² → {l, r, P_1, P_2, P_3}` of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeColoring {
    graph: ColoredBipartiteGraph,
}

impl EdgeColoring {
    pub fn graph(&self) -> &ColoredBipartiteGraph {
        &self.graph
    }

    pub fn label(&self, a: VertexRef, b: VertexRef) -> Result<EdgeLabel> {
        self.graph.check_vertex(a)?;
        self.graph.check_vertex(b)?;
        if a == b {
            return Err(LabError::InvalidArgument(format!("{a} paired with itself")));
        }
        Ok(match (a.side, b.side) {
            (Side::Left, Side::Left) => EdgeLabel::SameLeft,
            (Side::Right, Side::Right) => EdgeLabel::SameRight,
            (Side::Left, Side::Right) => EdgeLabel::Cross(self.graph.color(a.index, b.index)),
            (Side::Right, Side::Left) => EdgeLabel::Cross(self.graph.color(b.index, a.index)),
        })
    }
}

/// Label of a vertex in a coloring of one side: the side marker (`L` or `R`)
/// or a link color `P̄_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexLabel {
    Side(Side),
    Link(Color),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexColoring {
    pub side: Side,
    pub labels: Vec<VertexLabel>,
}

impl VertexColoring {
    pub fn new(side: Side, labels: Vec<VertexLabel>) -> Result<Self> {
        if let Some(bad) = labels.iter().find(|l| matches!(l, VertexLabel::Side(s) if *s != side)) {
            return Err(LabError::DomainMismatch(format!("label {bad:?} on a {side:?}-side coloring")));
        }
        Ok(VertexColoring { side, labels })
    }
}

/// Colorings the homogeneity/permutation predicates apply to: a list of
/// labels over a shared domain, where some labels are cross-types and the
/// rest are fixed markers that must agree exactly.
pub trait Coloring {
    type Label: Copy + Eq + Hash;

    fn same_domain(&self, other: &Self) -> Result<()>;
    fn label_list(&self) -> Vec<Self::Label>;
    fn cross_type(label: Self::Label) -> Option<Color>;
}

impl Coloring for ColoredBipartiteGraph {
    type Label = Color;

    fn same_domain(&self, other: &Self) -> Result<()> {
        self.same_dims(other)
    }

    fn label_list(&self) -> Vec<Color> {
        self.colors.clone()
    }

    fn cross_type(label: Color) -> Option<Color> {
        Some(label)
    }
}

impl Coloring for EdgeColoring {
    type Label = EdgeLabel;

    fn same_domain(&self, other: &Self) -> Result<()> {
        self.graph.same_dims(&other.graph)
    }

    /// Cross pairs in row-major order, then same-side pairs.
    fn label_list(&self) -> Vec<EdgeLabel> {
        let (m, n) = self.graph.dims();
        let mut out: Vec<EdgeLabel> = self.graph.colors.iter().map(|&c| EdgeLabel::Cross(c)).collect();
        out.extend(std::iter::repeat_n(EdgeLabel::SameLeft, m * m.saturating_sub(1) / 2));
        out.extend(std::iter::repeat_n(EdgeLabel::SameRight, n * n.saturating_sub(1) / 2));
        out
    }

    fn cross_type(label: EdgeLabel) -> Option<Color> {
        match label {
            EdgeLabel::Cross(c) => Some(c),
            _ => None,
        }
    }
}

impl Coloring for VertexColoring {
    type Label = VertexLabel;

    fn same_domain(&self, other: &Self) -> Result<()> {
        if self.side == other.side && self.labels.len() == other.labels.len() {
            Ok(())
        } else {
            Err(LabError::DomainMismatch(format!(
                "{:?}[{}] vs {:?}[{}]",
                self.side,
                self.labels.len(),
                other.side,
                other.labels.len()
            )))
        }
    }

    fn label_list(&self) -> Vec<VertexLabel> {
        self.labels.clone()
    }

    fn cross_type(label: VertexLabel) -> Option<Color> {
        match label {
            VertexLabel::Link(c) => Some(c),
            VertexLabel::Side(_) => None,
        }
    }
}

/// `c2` is homogeneous w.r.t. `c1`: equal `c2`-labels force equal `c1`-labels.
pub fn is_homogeneous<C: Coloring>(c1: &C, c2: &C) -> Result<bool> {
    c1.same_domain(c2)?;
    let mut image: HashMap<C::Label, C::Label> = HashMap::new();
    for (a, b) in c1.label_list().into_iter().zip(c2.label_list()) {
        if *image.entry(b).or_insert(a) != a {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Partial map from the cross-types used by `c2` to those of `c1`, or `None`
/// when it is not well defined or the marker labels disagree.
fn induced_color_map<C: Coloring>(c1: &C, c2: &C) -> Result<Option<[Option<Color>; 3]>> {
    c1.same_domain(c2)?;
    let mut map: [Option<Color>; 3] = [None; 3];
    for (a, b) in c1.label_list().into_iter().zip(c2.label_list()) {
        match (C::cross_type(a), C::cross_type(b)) {
            (Some(ca), Some(cb)) => match map[cb.index() - 1] {
                None => map[cb.index() - 1] = Some(ca),
                Some(prev) if prev != ca => return Ok(None),
                Some(_) => {}
            },
            (None, None) if a == b => {}
            _ => return Ok(None),
        }
    }
    Ok(Some(map))
}

/// Some `σ ∈ S₃` with `c1(e) = σ(c2(e))` on every cross-type label.
///
/// Colors unused by `c2` leave `σ` underdetermined; the extension with the
/// most fixed points is chosen (ties by canonical order), which makes the
/// result for `(c2, c1)` the inverse of the result for `(c1, c2)`.
pub fn pointwise_color_permutation<C: Coloring>(c1: &C, c2: &C) -> Result<Option<S3Perm>> {
    let Some(map) = induced_color_map(c1, c2)? else {
        return Ok(None);
    };
    let best = S3Perm::ALL
        .iter()
        .filter(|s| Color::ALL.iter().all(|&c| map[c.index() - 1].is_none_or(|img| s.apply(c) == img)))
        .max_by(|a, b| a.fixed_points().cmp(&b.fixed_points()).then(b.cmp(a)))
        .copied();
    Ok(best)
}

/// Distinct used colors `i`, `j` of `c2` that both map to `k` in `c1`.
/// Returns the lexicographically least `(i, j, k)` with `i < j`.
pub fn collapse_witness<C: Coloring>(c1: &C, c2: &C) -> Result<Option<(Color, Color, Color)>> {
    c1.same_domain(c2)?;
    let mut image: [Vec<Color>; 3] = Default::default();
    for (a, b) in c1.label_list().into_iter().zip(c2.label_list()) {
        if let (Some(ca), Some(cb)) = (C::cross_type(a), C::cross_type(b)) {
            let slot = &mut image[cb.index() - 1];
            if !slot.contains(&ca) {
                slot.push(ca);
            }
        }
    }
    // c2-class of color i must land entirely in color k.
    for i in Color::ALL {
        for j in Color::ALL.into_iter().filter(|&j| j > i) {
            let (si, sj) = (&image[i.index() - 1], &image[j.index() - 1]);
            if let ([ki], [kj]) = (si.as_slice(), sj.as_slice()) {
                if ki == kj {
                    return Ok(Some((i, j, *ki)));
                }
            }
        }
    }
    Ok(None)
}

/// Vertex bijections carrying `g1` onto `g2`.
///
/// Without a swap, `g2.color(left[i], right[j]) == g1.color(i, j)`. With a
/// swap, `left[i]` indexes the right side of `g2` and `right[j]` its left
/// side, so `g2.color(right[j], left[i]) == g1.color(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoWitness {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub swapped: bool,
}

impl IsoWitness {
    pub fn verify(&self, g1: &ColoredBipartiteGraph, g2: &ColoredBipartiteGraph) -> bool {
        let (m, n) = g1.dims();
        let target = if self.swapped { g2.swap_sides() } else { g2.clone() };
        if target.dims() != (m, n) || self.left.len() != m || self.right.len() != n {
            return false;
        }
        let bijective = |v: &[usize], k: usize| {
            let mut seen = vec![false; k];
            v.iter().all(|&x| x < k && !std::mem::replace(&mut seen[x], true))
        };
        bijective(&self.left, m)
            && bijective(&self.right, n)
            && (0..m).all(|i| (0..n).all(|j| target.color(self.left[i], self.right[j]) == g1.color(i, j)))
    }
}

/// Searches for a color-preserving isomorphism, optionally allowing the two
/// sides to be exchanged. Side-preserving witnesses are preferred.
pub fn is_isomorphic(g1: &ColoredBipartiteGraph, g2: &ColoredBipartiteGraph, allow_swap: bool) -> Option<IsoWitness> {
    if let Some((left, right)) = side_preserving_iso(g1, g2) {
        return Some(IsoWitness { left, right, swapped: false });
    }
    if allow_swap {
        if let Some((left, right)) = side_preserving_iso(g1, &g2.swap_sides()) {
            return Some(IsoWitness { left, right, swapped: true });
        }
    }
    None
}

fn row_histogram(g: &ColoredBipartiteGraph, i: usize) -> [usize; 3] {
    let mut h = [0; 3];
    for j in 0..g.right_count() {
        h[g.color(i, j).index() - 1] += 1;
    }
    h
}

fn col_histogram(g: &ColoredBipartiteGraph, j: usize) -> [usize; 3] {
    let mut h = [0; 3];
    for i in 0..g.left_count() {
        h[g.color(i, j).index() - 1] += 1;
    }
    h
}

/// Backtracking over the left bijection. After each row is placed, right
/// vertices are grouped by their column signature on the placed rows; the
/// two graphs must agree on the multiset of signatures. Once every row is
/// placed, equal full signatures can be matched arbitrarily.
fn side_preserving_iso(g1: &ColoredBipartiteGraph, g2: &ColoredBipartiteGraph) -> Option<(Vec<usize>, Vec<usize>)> {
    if g1.dims() != g2.dims() {
        return None;
    }
    let (m, n) = g1.dims();
    let mut h1: Vec<[usize; 3]> = (0..n).map(|j| col_histogram(g1, j)).collect();
    let mut h2: Vec<[usize; 3]> = (0..n).map(|j| col_histogram(g2, j)).collect();
    h1.sort_unstable();
    h2.sort_unstable();
    if h1 != h2 {
        return None;
    }
    let rows1: Vec<[usize; 3]> = (0..m).map(|i| row_histogram(g1, i)).collect();
    let rows2: Vec<[usize; 3]> = (0..m).map(|i| row_histogram(g2, i)).collect();

    struct Search<'a> {
        g1: &'a ColoredBipartiteGraph,
        g2: &'a ColoredBipartiteGraph,
        rows1: Vec<[usize; 3]>,
        rows2: Vec<[usize; 3]>,
        left: Vec<usize>,
        used: Vec<bool>,
    }

    impl Search<'_> {
        fn signatures_match(&self) -> bool {
            let (_, n) = self.g1.dims();
            let sig = |g: &ColoredBipartiteGraph, rows: &mut dyn Iterator<Item = usize>, j: usize| {
                rows.map(|i| g.color(i, j)).collect::<Vec<_>>()
            };
            let mut s1: Vec<Vec<Color>> = (0..n).map(|j| sig(self.g1, &mut (0..self.left.len()), j)).collect();
            let mut s2: Vec<Vec<Color>> = (0..n).map(|j| sig(self.g2, &mut self.left.iter().copied(), j)).collect();
            s1.sort_unstable();
            s2.sort_unstable();
            s1 == s2
        }

        fn run(&mut self) -> bool {
            let i = self.left.len();
            if i == self.rows1.len() {
                return true;
            }
            for cand in 0..self.rows2.len() {
                if self.used[cand] || self.rows1[i] != self.rows2[cand] {
                    continue;
                }
                self.used[cand] = true;
                self.left.push(cand);
                if self.signatures_match() && self.run() {
                    return true;
                }
                self.left.pop();
                self.used[cand] = false;
            }
            false
        }
    }

    let mut search = Search { g1, g2, rows1, rows2, left: Vec::new(), used: vec![false; m] };
    if !search.run() {
        return None;
    }
    let left = search.left;
    // Match columns with equal full signatures.
    let mut right = vec![usize::MAX; n];
    let mut taken = vec![false; n];
    for (j, slot) in right.iter_mut().enumerate() {
        let want: Vec<Color> = (0..m).map(|i| g1.color(i, j)).collect();
        let k = (0..n)
            .find(|&k| !taken[k] && (0..m).all(|i| g2.color(left[i], k) == want[i]))
            .expect("signature multisets agree");
        taken[k] = true;
        *slot = k;
    }
    Some((left, right))
}
