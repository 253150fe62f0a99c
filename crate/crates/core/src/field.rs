//! Exact traces of the free holonomy field on affine loops.

use crate::arrangement::{build_arrangement_with_segments, EdgeWord, PlanarGraph};
use crate::braid::FreeWord;
use crate::error::{Error, Result};
use crate::geometry::{dyadic_approx, Loop, Point2};
use crate::lasso::{decompose_loop, facial_lasso_basis_with, random_spanning_tree, spanning_tree, LassoBasis, SpanningTree, StartChoice};
use crate::levy::{first_moment, moments, CharTriplet};
use crate::seeds::substream;
use crate::words::{loop_l2_distance, word_moment, Marginals, PowerWord};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::borrow::Cow;

/// Default marginal depth per face.
pub const DEFAULT_DEPTH: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeChoice {
    Bfs,
    Random(u64),
}

/// Choices entering the construction of a context.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextOptions {
    pub tree: TreeChoice,
    /// Generator `i` is face `enumeration[i-1]`; `None` for the canonical order.
    pub enumeration: Option<Vec<usize>>,
    pub start: StartChoice,
    /// Extra segments drawn into the arrangement (face refinements).
    pub extra_segments: Vec<(Point2, Point2)>,
    pub depth: usize,
}

impl Default for ContextOptions {
    fn default() -> Self {
        ContextOptions { tree: TreeChoice::Bfs, enumeration: None, start: StartChoice::Canonical, extra_segments: Vec::new(), depth: DEFAULT_DEPTH }
    }
}

/// Graph, tree, lasso basis and increment laws for a family of loops.
#[derive(Debug, Clone)]
pub struct HolonomyContext {
    pub graph: PlanarGraph,
    pub tree: SpanningTree,
    pub basis: LassoBasis,
    pub triplet: CharTriplet,
    loops: Vec<Loop>,
    loop_words: Vec<EdgeWord>,
    areas: Vec<f64>,
    marginals: Marginals,
}

pub fn build_context(loops: &[Loop], triplet: &CharTriplet) -> Result<HolonomyContext> {
    build_context_with(loops, triplet, &ContextOptions::default())
}

pub fn build_context_with(loops: &[Loop], triplet: &CharTriplet, opts: &ContextOptions) -> Result<HolonomyContext> {
    if loops.is_empty() {
        return Err(Error::NoLoops);
    }
    triplet.validate()?;
    let (graph, words) = build_arrangement_with_segments(loops, &opts.extra_segments)?;
    HolonomyContext::from_graph(graph, loops.to_vec(), words, triplet, opts)
}

impl HolonomyContext {
    pub fn from_graph(graph: PlanarGraph, loops: Vec<Loop>, loop_words: Vec<EdgeWord>, triplet: &CharTriplet, opts: &ContextOptions) -> Result<Self> {
        let tree = match opts.tree {
            TreeChoice::Bfs => spanning_tree(&graph)?,
            TreeChoice::Random(s) => random_spanning_tree(&graph, s)?,
        };
        let basis = facial_lasso_basis_with(&graph, &tree, opts.enumeration.as_deref(), opts.start)?;
        let areas: Vec<f64> = basis.enumeration().iter().map(|&f| graph.faces()[f - 1].area_f64()).collect();
        let marginals = Marginals::new(areas.iter().map(|&a| moments(triplet, a, opts.depth)).collect());
        Ok(HolonomyContext { graph, tree, basis, triplet: triplet.clone(), loops, loop_words, areas, marginals })
    }

    /// Area of the face attached to each generator.
    pub fn areas(&self) -> &[f64] {
        &self.areas
    }

    pub fn loops(&self) -> &[Loop] {
        &self.loops
    }

    pub fn marginals(&self) -> &Marginals {
        &self.marginals
    }

    pub fn edge_word(&self, l: &Loop) -> Result<EdgeWord> {
        match self.loops.iter().position(|x| x == l) {
            Some(i) => Ok(self.loop_words[i].clone()),
            None => self.graph.trace_loop(l),
        }
    }

    /// Reduced word of the loop in the facial lassos.
    pub fn word(&self, l: &Loop) -> Result<FreeWord> {
        decompose_loop(&self.graph, &self.edge_word(l)?.reduced(), &self.basis, &self.tree)
    }

    /// The reversed word `w^op` evaluated on the increments.
    pub fn evaluation_word(&self, l: &Loop) -> Result<PowerWord> {
        Ok(self.word(l)?.op().to_power_word())
    }

    /// Marginals deep enough for `w` (lazily extended beyond the default depth).
    pub fn marginals_for(&self, w: &PowerWord) -> Cow<'_, Marginals> {
        let mass = w.exponent_mass();
        let need = mass.iter().copied().max().unwrap_or(0);
        let depth = self.marginals.series.first().map_or(0, |s| s.depth());
        if need <= depth {
            Cow::Borrowed(&self.marginals)
        } else {
            Cow::Owned(Marginals::new(self.areas.iter().map(|&a| moments(&self.triplet, a, need + 4)).collect()))
        }
    }
}

/// `tau(H_l)` for a loop drawn in the context.
pub fn master_trace(ctx: &HolonomyContext, l: &Loop) -> Result<Complex64> {
    let w = ctx.evaluation_word(l)?;
    word_moment(&w, &ctx.marginals_for(&w))
}

/// `sqrt(tau((H_1 - H_2)(H_1 - H_2)^*))`.
pub fn loop_distance(ctx: &HolonomyContext, l1: &Loop, l2: &Loop) -> Result<f64> {
    let w1 = ctx.evaluation_word(l1)?;
    let w2 = ctx.evaluation_word(l2)?;
    let both = w2.inverse().concat(&w1);
    loop_l2_distance(&w1, &w2, &ctx.marginals_for(&both))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: u32,
    pub lhs: f64,
    pub rhs: f64,
    pub k: f64,
    pub length: f64,
    pub approx_length: f64,
    pub satisfied: bool,
}

/// Checks `d(1, h_s) <= K sqrt(s)` for simple loops of area `s` on a grid up to `max_area`.
pub fn check_premise(triplet: &CharTriplet, k: f64, max_area: f64) -> Result<()> {
    if max_area <= 0.0 {
        return Ok(());
    }
    let grid = (1..=200).map(|j| max_area * j as f64 / 200.0).chain((1..=8).map(|e| max_area * 10f64.powi(-e)));
    for s in grid {
        let d = (2.0 - 2.0 * first_moment(triplet, s).re).max(0.0).sqrt();
        let bound = k * s.sqrt();
        if d > bound + 1e-12 {
            return Err(Error::PremiseViolated { area: s, distance: d, bound });
        }
    }
    Ok(())
}

/// Compares `d(H_l, H_{D_n(l)})` with `K l^{3/4} (l - l_n)^{1/4}`.
pub fn extension_bound_check(l: &Loop, n: u32, triplet: &CharTriplet, k: f64) -> Result<BoundReport> {
    if k.is_nan() || k <= 0.0 {
        return Err(Error::Domain(format!("K must be positive, got {k}")));
    }
    let d = dyadic_approx(l, n)?;
    let ctx = build_context(&[l.clone(), d.clone()], triplet)?;
    let enclosed: f64 = ctx.areas().iter().sum();
    check_premise(triplet, k, enclosed)?;
    let lhs = loop_distance(&ctx, l, &d)?;
    let (len, dlen) = (l.length(), d.length());
    let rhs = k * len.powf(0.75) * (len - dlen).max(0.0).powf(0.25);
    Ok(BoundReport { n, lhs, rhs, k, length: len, approx_length: dlen, satisfied: lhs <= rhs + 1e-9 })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub trials: usize,
    pub baseline: Vec<[f64; 2]>,
    pub tree_deviation: f64,
    pub enumeration_deviation: f64,
    pub start_deviation: f64,
    pub refinement_deviation: f64,
    pub max_deviation: f64,
}

/// One chord per bounded face, each splitting its face in two.
pub fn refinement_chords(g: &PlanarGraph) -> Vec<(Point2, Point2)> {
    g.faces().iter().map(|f| g.face_chord(f)).collect()
}

fn traces(ctx: &HolonomyContext, loops: &[Loop]) -> Result<Vec<Complex64>> {
    loops.iter().map(|l| master_trace(ctx, l)).collect()
}

fn deviation(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Master traces under random trees, enumerations and start vertices, and under one refinement.
pub fn invariance_audit(loops: &[Loop], triplet: &CharTriplet, trials: usize, seed: u64) -> Result<AuditReport> {
    if trials == 0 {
        return Err(Error::Domain("trials must be >= 1".into()));
    }
    let base = build_context(loops, triplet)?;
    let baseline = traces(&base, loops)?;
    let k = base.graph.faces().len();
    let variant = |opts: ContextOptions| -> Result<f64> {
        let ctx = HolonomyContext::from_graph(base.graph.clone(), loops.to_vec(), base.loop_words.clone(), triplet, &opts)?;
        Ok(deviation(&traces(&ctx, loops)?, &baseline))
    };
    let per_trial: Vec<(f64, f64, f64)> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<(f64, f64, f64)> {
            let tree = variant(ContextOptions { tree: TreeChoice::Random(substream(seed, t as u64, 1)), ..Default::default() })?;
            let mut perm: Vec<usize> = (1..=k).collect();
            perm.shuffle(&mut ChaCha8Rng::seed_from_u64(substream(seed, t as u64, 2)));
            let en = variant(ContextOptions { enumeration: Some(perm), ..Default::default() })?;
            let st = variant(ContextOptions { start: StartChoice::Random(substream(seed, t as u64, 3)), ..Default::default() })?;
            Ok((tree, en, st))
        })
        .collect::<Result<Vec<_>>>()?;
    let refined = build_context_with(loops, triplet, &ContextOptions { extra_segments: refinement_chords(&base.graph), ..Default::default() })?;
    let refinement_deviation = deviation(&traces(&refined, loops)?, &baseline);
    let fold = |f: fn(&(f64, f64, f64)) -> f64| per_trial.iter().map(f).fold(0.0, f64::max);
    let (tree_deviation, enumeration_deviation, start_deviation) = (fold(|x| x.0), fold(|x| x.1), fold(|x| x.2));
    let max_deviation = tree_deviation.max(enumeration_deviation).max(start_deviation).max(refinement_deviation);
    Ok(AuditReport {
        trials,
        baseline: baseline.iter().map(|c| [c.re, c.im]).collect(),
        tree_deviation,
        enumeration_deviation,
        start_deviation,
        refinement_deviation,
        max_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::parse_loop;

    #[test]
    fn unit_square_first_moment() {
        let sq = parse_loop("(0,0) (1,0) (1,1) (0,1)").unwrap();
        let ctx = build_context(&[sq.clone()], &CharTriplet::brownian(1.0)).unwrap();
        let v = master_trace(&ctx, &sq).unwrap();
        assert!((v.re - (-0.5f64).exp()).abs() < 1e-12 && v.im.abs() < 1e-12);
    }

    #[test]
    fn no_loops() {
        assert_eq!(build_context(&[], &CharTriplet::brownian(1.0)).unwrap_err(), Error::NoLoops);
    }
}
