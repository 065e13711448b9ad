//! Structural complexity: co-occurrence graphs of classification codes
//! scored by the sampled network diversity score.
//!
//! A technology's graph links every pair of codes listed together on one of
//! its window patents. Starting nodes are drawn from the largest component,
//! each seeds a random walk whose visited nodes are subsampled into a
//! subnetwork, and the mean individual diversity score over subnetworks is
//! reported as `nds`; `structural = -ln(nds)`, so random-like combinatorics
//! score high and ordered (star, tree, clique) combinatorics score low.

pub mod inds;
pub mod modules;
pub mod motif;
pub mod spectrum;

use std::collections::BTreeSet;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{PatentWindow, TechnologyId};
use crate::error::{Error, Result};
use crate::graph::{largest_component, Graph};

pub use inds::{inds, Degeneracy, IndsBreakdown};
pub use modules::{modularity, GreedyModularity, ModuleDetector, Partition};
pub use motif::{motif_count, motif_counts, MotifCounts};
pub use spectrum::{laplacian_moments, laplacian_spectrum};

pub fn detect_modules(g: &Graph) -> Partition {
    GreedyModularity.detect(g, 0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SamplingParams {
    /// Start nodes for components below `large_threshold` nodes.
    pub node_sample_small: usize,
    pub node_sample_large: usize,
    pub large_threshold: usize,
    pub walk_steps: usize,
    pub subnet_nodes: usize,
    pub min_component: usize,
    pub seed: u64,
    pub inds_floor: f64,
    /// Redraws of a degenerate sample before it is skipped.
    pub retry_limit: usize,
}

impl Default for SamplingParams {
    fn default() -> Self {
        SamplingParams {
            node_sample_small: 100,
            node_sample_large: 300,
            large_threshold: 1000,
            walk_steps: 1000,
            subnet_nodes: 200,
            min_component: 5,
            seed: 0,
            inds_floor: 1e-12,
            retry_limit: 3,
        }
    }
}

impl SamplingParams {
    pub fn with_seed(seed: u64) -> Self {
        SamplingParams { seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("node_sample_small", self.node_sample_small),
            ("node_sample_large", self.node_sample_large),
            ("large_threshold", self.large_threshold),
            ("walk_steps", self.walk_steps),
            ("subnet_nodes", self.subnet_nodes),
            ("min_component", self.min_component),
        ];
        if let Some((name, _)) = counts.iter().find(|(_, v)| *v == 0) {
            return Err(Error::InvalidParams(format!("{name} must be positive")));
        }
        if !(self.inds_floor > 0.0 && self.inds_floor.is_finite()) {
            return Err(Error::InvalidParams("inds_floor must be positive".into()));
        }
        Ok(())
    }
}

/// Which codes enter a technology's co-occurrence graph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphScope {
    /// Every code on the technology's patents.
    #[default]
    AllCodes,
    /// Only codes of the technology itself.
    TechnologyOnly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoOccurrenceGraph {
    pub technology: TechnologyId,
    pub graph: Graph,
    pub patents: usize,
}

pub fn build_graph(w: &PatentWindow<'_>, tech: &TechnologyId, scope: GraphScope) -> Result<CoOccurrenceGraph> {
    let mut nodes = BTreeSet::new();
    let mut edges = BTreeSet::new();
    let mut patents = 0;
    for rec in w.records.iter().filter(|r| r.has_technology(tech)) {
        patents += 1;
        let codes: Vec<&str> = rec
            .codes
            .iter()
            .map(String::as_str)
            .filter(|c| scope == GraphScope::AllCodes || c.starts_with(tech.as_str()))
            .collect();
        nodes.extend(codes.iter().copied());
        for (i, a) in codes.iter().enumerate() {
            for b in &codes[i + 1..] {
                edges.insert((*a, *b));
            }
        }
    }
    if patents == 0 {
        return Err(Error::NoPatents(tech.to_string()));
    }
    let edges: Vec<(&str, &str)> = edges.into_iter().collect();
    Ok(CoOccurrenceGraph { technology: tech.clone(), graph: Graph::from_labeled(nodes, &edges), patents })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructuralScore {
    /// Mean floored INDS over kept samples (1 for the complete-graph shortcut).
    pub nds: f64,
    /// `-ln(nds)`.
    pub structural: f64,
    pub sample_count: usize,
    /// Start nodes whose every draw was degenerate.
    pub skipped_samples: usize,
    pub component_nodes: usize,
    /// Set when the component is complete and scored 0 without sampling.
    pub degenerate_flag: bool,
}

/// Structural score of a co-occurrence graph.
pub fn nds(g: &CoOccurrenceGraph, p: &SamplingParams) -> Result<StructuralScore> {
    nds_graph(&g.graph, p)
}

/// Structural score of any graph, using its largest component.
pub fn nds_graph(g: &Graph, p: &SamplingParams) -> Result<StructuralScore> {
    nds_with(g, p, &GreedyModularity)
}

pub fn nds_with(g: &Graph, p: &SamplingParams, detector: &dyn ModuleDetector) -> Result<StructuralScore> {
    p.validate()?;
    let comp = largest_component(g);
    let n = comp.node_count();
    if n < p.min_component {
        return Err(Error::TechnologyTooSmall { size: n, min: p.min_component });
    }
    if comp.is_complete() {
        return Ok(StructuralScore {
            nds: 1.0,
            structural: 0.0,
            sample_count: 0,
            skipped_samples: 0,
            component_nodes: n,
            degenerate_flag: true,
        });
    }
    let wanted = if n < p.large_threshold { p.node_sample_small } else { p.node_sample_large };
    let samples = wanted.min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let starts = index::sample(&mut rng, n, samples).into_vec();

    let values: Vec<Option<f64>> =
        starts.par_iter().enumerate().map(|(i, &start)| sample_inds(&comp, start, p, detector, i as u64 + 1)).collect();
    let kept: Vec<f64> = values.iter().flatten().map(|v| v.max(p.inds_floor)).collect();
    if kept.is_empty() {
        return Err(Error::AllSamplesDegenerate(samples));
    }
    let nds = kept.iter().sum::<f64>() / kept.len() as f64;
    Ok(StructuralScore {
        nds,
        structural: -nds.ln(),
        sample_count: kept.len(),
        skipped_samples: samples - kept.len(),
        component_nodes: n,
        degenerate_flag: false,
    })
}

/// One start node: walk, subsample, score; redraw while degenerate.
fn sample_inds(
    comp: &Graph,
    start: usize,
    p: &SamplingParams,
    detector: &dyn ModuleDetector,
    stream: u64,
) -> Option<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    rng.set_stream(stream);
    for _ in 0..=p.retry_limit {
        let visited = random_walk(comp, start, p.walk_steps, &mut rng);
        let take = p.subnet_nodes.min(visited.len());
        let chosen: Vec<usize> = index::sample(&mut rng, visited.len(), take).into_iter().map(|i| visited[i]).collect();
        let sub = largest_component(&comp.induced(&chosen));
        if sub.node_count() < p.min_component {
            continue;
        }
        if let Some(v) = inds(&sub, detector, rng.gen()).inds {
            return Some(v);
        }
    }
    None
}

/// Distinct nodes visited by a simple random walk, in first-visit order.
pub fn random_walk<R: Rng>(g: &Graph, start: usize, steps: usize, rng: &mut R) -> Vec<usize> {
    let mut seen = vec![false; g.node_count()];
    let mut order = vec![start];
    seen[start] = true;
    let mut at = start;
    for _ in 0..steps {
        let ns = g.neighbors(at);
        if ns.is_empty() {
            break;
        }
        at = ns[rng.gen_range(0..ns.len())] as usize;
        if !seen[at] {
            seen[at] = true;
            order.push(at);
        }
    }
    order
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SkipReason {
    NoPatents,
    TechnologyTooSmall,
    AllSamplesDegenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedTechnology {
    pub technology: TechnologyId,
    pub reason: SkipReason,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructuralRow {
    pub technology: TechnologyId,
    pub patents: usize,
    pub score: StructuralScore,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StructuralRun {
    pub rows: Vec<StructuralRow>,
    pub skipped: Vec<SkippedTechnology>,
}

/// Seed of a technology's private RNG stream.
pub fn technology_seed(master: u64, tech: &TechnologyId) -> u64 {
    // FNV-1a over the id, then a splitmix64 finalizer with the master seed.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in tech.as_str().bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    let mut z = master ^ h;
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Scores every technology in the window. Each technology draws from its own
/// stream derived from `(p.seed, technology)`.
pub fn structural_scores(w: &PatentWindow<'_>, p: &SamplingParams, scope: GraphScope) -> Result<StructuralRun> {
    p.validate()?;
    let techs: Vec<TechnologyId> = w.technologies().into_iter().collect();
    let results: Vec<(TechnologyId, Result<(usize, StructuralScore)>)> = techs
        .into_par_iter()
        .map(|tech| {
            let params = SamplingParams { seed: technology_seed(p.seed, &tech), ..p.clone() };
            let r = build_graph(w, &tech, scope).and_then(|g| nds(&g, &params).map(|s| (g.patents, s)));
            (tech, r)
        })
        .collect();
    let mut run = StructuralRun::default();
    for (technology, r) in results {
        match r {
            Ok((patents, score)) => run.rows.push(StructuralRow { technology, patents, score }),
            Err(e) => {
                let reason = match e {
                    Error::NoPatents(_) => SkipReason::NoPatents,
                    Error::TechnologyTooSmall { .. } => SkipReason::TechnologyTooSmall,
                    Error::AllSamplesDegenerate(_) => SkipReason::AllSamplesDegenerate,
                    other => return Err(other),
                };
                run.skipped.push(SkippedTechnology { technology, reason, detail: e.to_string() });
            }
        }
    }
    Ok(run)
}
