//! Individual network diversity score of one (sub)graph.

use serde::{Deserialize, Serialize};

use super::modules::ModuleDetector;
use super::motif::motif_counts;
use super::spectrum::laplacian_moments;
use crate::graph::Graph;
use crate::stats;

pub const MIN_NODES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Degeneracy {
    TooSmall,
    SingleModule,
    EqualModuleSizes,
    NoFourNodeMotifs,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndsBreakdown {
    pub nodes: usize,
    pub module_sizes: Vec<usize>,
    /// Modules per node, `M / n`.
    pub alpha_module: f64,
    /// `var(m) / mean(m)` of module sizes; 0 for a single module.
    pub v_module: f64,
    /// `var / mean` of the Laplacian spectrum.
    pub v_lambda: f64,
    pub motifs3: u64,
    pub motifs4: u64,
    /// `N3 / N4`.
    pub r_motif: Option<f64>,
    /// `alpha * v_module / (v_lambda * r_motif)`; `None` when degenerate.
    pub inds: Option<f64>,
    pub degenerate: Option<Degeneracy>,
}

/// Combines the four parts. Separate from [`inds`] so alternative part
/// estimates can be checked against the same formula.
pub fn combine(alpha_module: f64, v_module: f64, v_lambda: f64, r_motif: f64) -> f64 {
    alpha_module * v_module / (v_lambda * r_motif)
}

pub fn inds(g: &Graph, detector: &dyn ModuleDetector, seed: u64) -> IndsBreakdown {
    let n = g.node_count();
    let motifs = motif_counts(g);
    let mut out = IndsBreakdown {
        nodes: n,
        module_sizes: Vec::new(),
        alpha_module: 0.0,
        v_module: 0.0,
        v_lambda: 0.0,
        motifs3: motifs.three,
        motifs4: motifs.four.total(),
        r_motif: motifs.ratio(),
        inds: None,
        degenerate: None,
    };
    if n < MIN_NODES || !g.is_connected() {
        out.degenerate = Some(Degeneracy::TooSmall);
        return out;
    }
    let partition = detector.detect(g, seed);
    let sizes: Vec<f64> = partition.sizes.iter().map(|&s| s as f64).collect();
    out.module_sizes = partition.sizes;
    out.alpha_module = sizes.len() as f64 / n as f64;
    out.v_module = stats::sample_variance(&sizes).map_or(0.0, |v| v / stats::mean(&sizes));
    out.v_lambda = laplacian_moments(g).and_then(|m| m.dispersion()).unwrap_or(0.0);

    out.degenerate = if sizes.len() < 2 {
        Some(Degeneracy::SingleModule)
    } else if out.v_module == 0.0 {
        Some(Degeneracy::EqualModuleSizes)
    } else if out.motifs4 == 0 {
        Some(Degeneracy::NoFourNodeMotifs)
    } else {
        None
    };
    if out.degenerate.is_none() {
        let value = combine(out.alpha_module, out.v_module, out.v_lambda, out.r_motif.unwrap_or(f64::NAN));
        if value.is_finite() {
            out.inds = Some(value);
        } else {
            out.degenerate = Some(Degeneracy::TooSmall);
        }
    }
    out
}
