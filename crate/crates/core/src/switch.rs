//! Switches as recoloring operators.
//!
//! A switch on a support set `A` by `σ` recolors the cross-edge `(i, j)` by
//! `σ^t`, where `t` counts how many of its endpoints lie in `A`. Vertex
//! positions never move.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::graph::{Color, ColoredBipartiteGraph, Side, VertexRef};
use crate::s3::{commutator, S3Perm};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwitchOp {
    pub support: BTreeSet<VertexRef>,
    pub sigma: S3Perm,
}

impl SwitchOp {
    pub fn new(support: impl IntoIterator<Item = VertexRef>, sigma: S3Perm) -> Self {
        SwitchOp { support: support.into_iter().collect(), sigma }
    }

    pub fn vertex(v: VertexRef, sigma: S3Perm) -> Self {
        SwitchOp::new([v], sigma)
    }

    pub fn inverse(&self) -> Self {
        SwitchOp { support: self.support.clone(), sigma: self.sigma.inverse() }
    }

    fn validate(&self, g: &ColoredBipartiteGraph) -> Result<()> {
        self.support.iter().try_for_each(|&v| g.check_vertex(v))
    }

    /// Per-edge action in place; support must already be validated.
    fn apply_in_place(&self, g: &mut ColoredBipartiteGraph) {
        let (m, n) = g.dims();
        let mut in_left = vec![false; m];
        let mut in_right = vec![false; n];
        for v in &self.support {
            match v.side {
                Side::Left => in_left[v.index] = true,
                Side::Right => in_right[v.index] = true,
            }
        }
        let powers = [S3Perm::IDENTITY, self.sigma, self.sigma.compose(&self.sigma)];
        let colors = g.colors_mut();
        for i in 0..m {
            for j in 0..n {
                let t = in_left[i] as usize + in_right[j] as usize;
                if t > 0 {
                    let c = &mut colors[i * n + j];
                    *c = powers[t].apply(*c);
                }
            }
        }
    }
}

/// Ordered switch sequence, applied first to last.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SwitchWord {
    pub ops: Vec<SwitchOp>,
}

impl SwitchWord {
    pub fn new(ops: Vec<SwitchOp>) -> Self {
        SwitchWord { ops }
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Reversed word with every σ inverted.
    pub fn inverse(&self) -> Self {
        SwitchWord { ops: self.ops.iter().rev().map(SwitchOp::inverse).collect() }
    }

    pub fn extend(&mut self, other: SwitchWord) {
        self.ops.extend(other.ops);
    }
}

pub fn apply_switch(g: &ColoredBipartiteGraph, op: &SwitchOp) -> Result<ColoredBipartiteGraph> {
    op.validate(g)?;
    let mut out = g.clone();
    op.apply_in_place(&mut out);
    Ok(out)
}

pub fn apply_word(g: &ColoredBipartiteGraph, word: &SwitchWord) -> Result<ColoredBipartiteGraph> {
    word.ops.iter().try_for_each(|op| op.validate(g))?;
    let mut out = g.clone();
    for op in &word.ops {
        op.apply_in_place(&mut out);
    }
    Ok(out)
}

/// The four-switch word `[x by f, y by g, x by f⁻¹, y by g⁻¹]`. Applied to
/// any graph containing edge `(x, y)`, it recolors that edge by
/// `commutator(f, g)` and leaves every other edge alone.
pub fn edge_kill_word(x: usize, y: usize, f: S3Perm, g: S3Perm) -> Result<SwitchWord> {
    if f.commutes(&g) {
        return Err(LabError::CommutingPair(f.to_string(), g.to_string()));
    }
    let (vx, vy) = (VertexRef::left(x), VertexRef::right(y));
    Ok(SwitchWord::new(vec![
        SwitchOp::vertex(vx, f),
        SwitchOp::vertex(vy, g),
        SwitchOp::vertex(vx, f.inverse()),
        SwitchOp::vertex(vy, g.inverse()),
    ]))
}

/// A word turning `g` into the constant `target` coloring, built from
/// edge-kills with `f = (123)`, `g = (12)` in row-major order. Their
/// commutator is a 3-cycle, so each off-target edge needs one or two kills.
pub fn monochromatize(g: &ColoredBipartiteGraph, target: Color) -> Result<SwitchWord> {
    let f: S3Perm = "(123)".parse().expect("literal");
    let gp: S3Perm = "(12)".parse().expect("literal");
    let gamma = commutator(&f, &gp);
    let (m, n) = g.dims();
    let mut word = SwitchWord::default();
    for i in 0..m {
        for j in 0..n {
            let mut c = g.color(i, j);
            while c != target {
                word.extend(edge_kill_word(i, j, f, gp)?);
                c = gamma.apply(c);
            }
        }
    }
    Ok(word)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SwitchDetection {
    Identical,
    Switch { vertex: VertexRef, sigma: S3Perm },
}

/// A single-vertex switch carrying `g1` to `g2`, scanning left vertices then
/// right ones in ascending order and non-identity σ in canonical order.
pub fn detect_vertex_switch(g1: &ColoredBipartiteGraph, g2: &ColoredBipartiteGraph) -> Result<Option<SwitchDetection>> {
    same_dims(g1, g2)?;
    if g1 == g2 {
        return Ok(Some(SwitchDetection::Identical));
    }
    let (m, n) = g1.dims();
    let vertices = (0..m).map(VertexRef::left).chain((0..n).map(VertexRef::right));
    for v in vertices {
        for sigma in S3Perm::ALL.into_iter().filter(|s| !s.is_identity()) {
            if &apply_switch(g1, &SwitchOp::vertex(v, sigma))? == g2 {
                return Ok(Some(SwitchDetection::Switch { vertex: v, sigma }));
            }
        }
    }
    Ok(None)
}

/// Some σ (first in canonical order) with `g2 = apply_switch(g1, (A, σ))`.
pub fn is_switch_on_set(
    g1: &ColoredBipartiteGraph,
    g2: &ColoredBipartiteGraph,
    support: &BTreeSet<VertexRef>,
) -> Result<Option<S3Perm>> {
    same_dims(g1, g2)?;
    for sigma in S3Perm::ALL {
        let op = SwitchOp { support: support.clone(), sigma };
        if &apply_switch(g1, &op)? == g2 {
            return Ok(Some(sigma));
        }
    }
    Ok(None)
}

fn same_dims(g1: &ColoredBipartiteGraph, g2: &ColoredBipartiteGraph) -> Result<()> {
    if g1.dims() == g2.dims() {
        Ok(())
    } else {
        Err(LabError::DimensionMismatch(format!("{:?} vs {:?}", g1.dims(), g2.dims())))
    }
}
