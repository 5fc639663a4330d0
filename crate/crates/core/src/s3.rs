//! The symmetric group on the three cross-types.
//!
//! Composition is rightmost-first: `p.compose(q)` is the map `x ↦ p(q(x))`,
//! so `(12)(123) = (23)` and `(123)(12) = (13)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::LabError;
use crate::graph::Color;

/// A permutation of `{1, 2, 3}`, stored as its image triple.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct S3Perm([u8; 3]);

impl S3Perm {
    pub const IDENTITY: S3Perm = S3Perm([1, 2, 3]);

    /// All six elements in canonical order (lexicographic on image triples).
    pub const ALL: [S3Perm; 6] = [
        S3Perm([1, 2, 3]),
        S3Perm([1, 3, 2]),
        S3Perm([2, 1, 3]),
        S3Perm([2, 3, 1]),
        S3Perm([3, 1, 2]),
        S3Perm([3, 2, 1]),
    ];

    pub fn from_images(images: [u8; 3]) -> Result<Self, LabError> {
        let mut seen = [false; 3];
        for &v in &images {
            if !(1..=3).contains(&v) || seen[(v - 1) as usize] {
                return Err(LabError::InvalidPermutation(format!("{images:?}")));
            }
            seen[(v - 1) as usize] = true;
        }
        Ok(S3Perm(images))
    }

    /// The transposition exchanging `a` and `b` (identity when `a == b`).
    pub fn transposition(a: Color, b: Color) -> Self {
        let mut images = [1, 2, 3];
        images.swap(a.index() - 1, b.index() - 1);
        S3Perm(images)
    }

    pub fn images(&self) -> [u8; 3] {
        self.0
    }

    pub fn apply(&self, c: Color) -> Color {
        Color::from_index(self.0[c.index() - 1] as usize).expect("S3Perm images lie in 1..=3")
    }

    /// `self ∘ other`, applying `other` first.
    pub fn compose(&self, other: &S3Perm) -> S3Perm {
        S3Perm([self.0[other.0[0] as usize - 1], self.0[other.0[1] as usize - 1], self.0[other.0[2] as usize - 1]])
    }

    pub fn inverse(&self) -> S3Perm {
        let mut inv = [0u8; 3];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v as usize - 1] = i as u8 + 1;
        }
        S3Perm(inv)
    }

    pub fn pow(&self, exp: u32) -> S3Perm {
        (0..exp).fold(S3Perm::IDENTITY, |acc, _| self.compose(&acc))
    }

    pub fn is_identity(&self) -> bool {
        *self == S3Perm::IDENTITY
    }

    pub fn order(&self) -> u32 {
        (1..=6).find(|&k| self.pow(k).is_identity()).expect("order divides 6")
    }

    pub fn fixed_points(&self) -> usize {
        self.0.iter().enumerate().filter(|(i, &v)| *i as u8 + 1 == v).count()
    }

    pub fn commutes(&self, other: &S3Perm) -> bool {
        self.compose(other) == other.compose(self)
    }

    /// Cycle notation with each cycle rotated so its least element comes first.
    pub fn cycle_notation(&self) -> String {
        if self.is_identity() {
            return "()".to_string();
        }
        let mut out = String::new();
        let mut visited = [false; 3];
        for start in 1..=3u8 {
            if visited[start as usize - 1] || self.0[start as usize - 1] == start {
                continue;
            }
            out.push('(');
            let mut x = start;
            while !visited[x as usize - 1] {
                visited[x as usize - 1] = true;
                out.push(char::from(b'0' + x));
                x = self.0[x as usize - 1];
            }
            out.push(')');
        }
        out
    }
}

/// `g⁻¹ ∘ f⁻¹ ∘ g ∘ f`: apply `f`, then `g`, then undo `f`, then undo `g`.
pub fn commutator(f: &S3Perm, g: &S3Perm) -> S3Perm {
    g.inverse().compose(&f.inverse()).compose(g).compose(f)
}

impl fmt::Display for S3Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cycle_notation())
    }
}

impl fmt::Debug for S3Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S3Perm{}", self.cycle_notation())
    }
}

impl FromStr for S3Perm {
    type Err = LabError;

    /// Accepts exactly the canonical forms `()`, `(ab)` and `(abc)` with `a`
    /// the least element of the cycle.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LabError::InvalidPermutation(s.to_string());
        let inner = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let digits: Vec<u8> = inner
            .bytes()
            .map(|b| match b {
                b'1'..=b'3' => Ok(b - b'0'),
                _ => Err(bad()),
            })
            .collect::<Result<_, _>>()?;
        let mut images = [1u8, 2, 3];
        match digits.as_slice() {
            [] => {}
            [a, b] if a < b => {
                images[*a as usize - 1] = *b;
                images[*b as usize - 1] = *a;
            }
            [a, b, c] if a < b && a < c && b != c => {
                images[*a as usize - 1] = *b;
                images[*b as usize - 1] = *c;
                images[*c as usize - 1] = *a;
            }
            _ => return Err(bad()),
        }
        Ok(S3Perm(images))
    }
}

impl Serialize for S3Perm {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.cycle_notation())
    }
}

impl<'de> Deserialize<'de> for S3Perm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A subgroup of S₃, kept as a sorted element list.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    elements: Vec<S3Perm>,
}

impl Subgroup {
    pub fn trivial() -> Self {
        Subgroup { elements: vec![S3Perm::IDENTITY] }
    }

    pub fn full() -> Self {
        Subgroup { elements: S3Perm::ALL.to_vec() }
    }

    pub fn cyclic(p: S3Perm) -> Self {
        subgroup_generated(&[p])
    }

    pub fn elements(&self) -> &[S3Perm] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, p: &S3Perm) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_closed(&self) -> bool {
        self.contains(&S3Perm::IDENTITY)
            && self
                .elements
                .iter()
                .all(|a| self.contains(&a.inverse()) && self.elements.iter().all(|b| self.contains(&a.compose(b))))
    }

    /// A minimal generating set: empty, one element, or `{(12), (123)}` for S₃.
    pub fn generators(&self) -> Vec<S3Perm> {
        match self.order() {
            1 => vec![],
            6 => vec!["(12)".parse().expect("literal"), "(123)".parse().expect("literal")],
            _ => vec![*self
                .elements
                .iter()
                .find(|p| !p.is_identity() && p.order() as usize == self.order())
                .expect("proper nontrivial S3 subgroups are cyclic")],
        }
    }

    /// Short label: `1`, `<(12)>`, `<(123)>` or `S3`.
    pub fn label(&self) -> String {
        match self.order() {
            1 => "1".to_string(),
            6 => "S3".to_string(),
            _ => format!("<{}>", self.generators()[0]),
        }
    }

    /// Ordering key: by order, then lexicographically on the sorted elements.
    fn canonical_key(&self) -> (usize, Vec<S3Perm>) {
        (self.order(), self.elements.clone())
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup{}", self.label())
    }
}

/// Closure of `gens` under composition. Inverses come for free in a finite group.
pub fn subgroup_generated(gens: &[S3Perm]) -> Subgroup {
    let mut elements = vec![S3Perm::IDENTITY];
    let mut frontier = vec![S3Perm::IDENTITY];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = g.compose(&x);
            if !elements.contains(&y) {
                elements.push(y);
                frontier.push(y);
            }
        }
    }
    elements.sort();
    Subgroup { elements }
}

/// The six subgroups of S₃ ordered by order, then lexicographically.
pub fn enumerate_subgroups() -> Vec<Subgroup> {
    let mut found: Vec<Subgroup> = Vec::new();
    // Every subgroup of S₃ is generated by at most two elements.
    for a in S3Perm::ALL {
        for b in S3Perm::ALL {
            let h = subgroup_generated(&[a, b]);
            if !found.contains(&h) {
                found.push(h);
            }
        }
    }
    found.sort_by_key(Subgroup::canonical_key);
    found
}

/// True iff every element of `h1` commutes with every element of `h2`.
pub fn elementwise_commute(h1: &Subgroup, h2: &Subgroup) -> bool {
    h1.elements().iter().all(|f| h2.elements().iter().all(|g| f.commutes(g)))
}

/// First pair `(f, g)` in canonical order with `f ∈ h1`, `g ∈ h2` not commuting.
pub fn noncommuting_witness(h1: &Subgroup, h2: &Subgroup) -> Option<(S3Perm, S3Perm)> {
    h1.elements().iter().flat_map(|f| h2.elements().iter().map(move |g| (*f, *g))).find(|(f, g)| !f.commutes(g))
}

/// One line of the reducibility table: `⟨S_l^{H1}, S_r^{H2}⟩` with the
/// non-commuting witness and both products.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReducibilityEntry {
    #[serde(serialize_with = "serialize_label")]
    pub left: Subgroup,
    #[serde(serialize_with = "serialize_label")]
    pub right: Subgroup,
    pub f: S3Perm,
    pub g: S3Perm,
    /// `f ∘ g`
    pub fg: S3Perm,
    /// `g ∘ f`
    pub gf: S3Perm,
}

fn serialize_label<S: Serializer>(h: &Subgroup, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&h.label())
}

/// The six pairs of distinct nontrivial proper subgroups, each with the
/// generators of its two sides as witnesses. Transposition/3-cycle pairs
/// come first, then transposition/transposition pairs, each in cycle-notation
/// order: (12),(13),(23).
pub fn reducibility_table() -> Vec<ReducibilityEntry> {
    let proper: Vec<Subgroup> =
        enumerate_subgroups().into_iter().filter(|h| h.order() == 2 || h.order() == 3).collect();
    let (mut transpositions, cyclic3): (Vec<_>, Vec<_>) = proper.into_iter().partition(|h| h.order() == 2);
    transpositions.sort_by_key(Subgroup::label);
    let mut pairs = Vec::new();
    for t in &transpositions {
        for c in &cyclic3 {
            pairs.push((t.clone(), c.clone()));
        }
    }
    for (i, a) in transpositions.iter().enumerate() {
        for b in &transpositions[i + 1..] {
            pairs.push((a.clone(), b.clone()));
        }
    }
    pairs
        .into_iter()
        .map(|(left, right)| {
            let f = left.generators()[0];
            let g = right.generators()[0];
            ReducibilityEntry { fg: f.compose(&g), gf: g.compose(&f), left, right, f, g }
        })
        .collect()
}
