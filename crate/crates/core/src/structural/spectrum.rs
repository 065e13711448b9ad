//! Laplacian spectrum and its first two moments.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::graph::Graph;

/// Eigenvalues of `L = D - A`, ascending.
pub fn laplacian_spectrum(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    if n == 0 {
        return Vec::new();
    }
    let mut l = DMatrix::<f64>::zeros(n, n);
    for v in 0..n {
        l[(v, v)] = g.degree(v) as f64;
        for &u in g.neighbors(v) {
            l[(v, u as usize)] = -1.0;
        }
    }
    let mut values: Vec<f64> = SymmetricEigen::new(l).eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

/// Mean and sample variance of the Laplacian spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumMoments {
    pub mean: f64,
    pub variance: f64,
}

impl SpectrumMoments {
    /// `variance / mean`, `None` when the mean is zero.
    pub fn dispersion(&self) -> Option<f64> {
        (self.mean > 0.0).then(|| self.variance / self.mean)
    }
}

/// Moments from traces: `sum(lambda) = tr L = sum d` and
/// `sum(lambda^2) = tr L^2 = sum d (d + 1)`. Exact in integers, no eigensolve.
pub fn laplacian_moments(g: &Graph) -> Option<SpectrumMoments> {
    let n = g.node_count();
    if n < 2 {
        return None;
    }
    let (mut s1, mut s2) = (0u128, 0u128);
    for v in 0..n {
        let d = g.degree(v) as u128;
        s1 += d;
        s2 += d * (d + 1);
    }
    let nf = n as f64;
    let mean = s1 as f64 / nf;
    // sum (x - mean)^2 = s2 - s1^2 / n, kept exact as (n s2 - s1^2) / n.
    let centered = (n as u128 * s2 - s1 * s1) as f64 / nf;
    Some(SpectrumMoments { mean, variance: centered / (nf - 1.0) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats;

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-8)
    }

    #[test]
    fn star_spectrum() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]);
        assert!(close(&laplacian_spectrum(&g), &[0.0, 1.0, 1.0, 4.0]));
    }

    #[test]
    fn complete_spectrum() {
        let e: Vec<(usize, usize)> = (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect();
        let g = Graph::from_edges(5, &e);
        assert!(close(&laplacian_spectrum(&g), &[0.0, 5.0, 5.0, 5.0, 5.0]));
    }

    #[test]
    fn one_zero_eigenvalue_when_connected() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)]);
        let s = laplacian_spectrum(&g);
        assert_eq!(s.iter().filter(|v| v.abs() < 1e-8).count(), 1);
    }

    #[test]
    fn trace_moments_match_eigensolve() {
        let g = Graph::from_edges(7, &[(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 3), (1, 5)]);
        let s = laplacian_spectrum(&g);
        let m = laplacian_moments(&g).unwrap();
        assert!((m.mean - stats::mean(&s)).abs() < 1e-10);
        assert!((m.variance - stats::sample_variance(&s).unwrap()).abs() < 1e-10);
    }
}
