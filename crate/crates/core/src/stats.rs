//! Small descriptive and rank statistics shared by the measures and the
//! evaluation harness.

use crate::error::{Error, Result};

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Sample variance with divisor `n - 1`; `None` below two observations.
pub fn sample_variance(x: &[f64]) -> Option<f64> {
    if x.len() < 2 {
        return None;
    }
    let m = mean(x);
    Some(x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (x.len() - 1) as f64)
}

pub fn median(x: &[f64]) -> Option<f64> {
    if x.is_empty() {
        return None;
    }
    let mut v = x.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 { v[n / 2] } else { (v[n / 2 - 1] + v[n / 2]) / 2.0 })
}

/// Mean 0, sample sd 1. A constant vector maps to all zeros.
pub fn z_standardize(x: &[f64]) -> Vec<f64> {
    let m = mean(x);
    match sample_variance(x) {
        Some(var) if var > 0.0 => {
            let sd = var.sqrt();
            x.iter().map(|v| (v - m) / sd).collect()
        }
        _ => vec![0.0; x.len()],
    }
}

/// Average ranks (1-based), ties receive their mid-rank.
pub fn mid_ranks(x: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; x.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && x[idx[j + 1]] == x[idx[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            ranks[k] = r;
        }
        i = j + 1;
    }
    ranks
}

pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Statistics(format!("length mismatch {} vs {}", x.len(), y.len())));
    }
    if x.len() < 3 {
        return Err(Error::Statistics(format!("need at least 3 observations, got {}", x.len())));
    }
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Statistics("zero variance, correlation undefined".into()));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Spearman's rho as the Pearson correlation of mid-ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Statistics(format!("length mismatch {} vs {}", x.len(), y.len())));
    }
    pearson(&mid_ranks(x), &mid_ranks(y))
}

/// Gini coefficient `sum_i sum_j |x_i - x_j| / (2 n^2 mean)` over a fixed
/// universe of non-negative counts (zeros included).
pub fn gini(x: &[f64]) -> Result<f64> {
    if x.iter().any(|v| *v < 0.0 || !v.is_finite()) {
        return Err(Error::Statistics("gini needs finite non-negative values".into()));
    }
    let total: f64 = x.iter().sum();
    if total <= 0.0 {
        return Err(Error::Statistics("gini of an all-zero vector is undefined".into()));
    }
    // Sorted form of the pairwise sum: sum_i (2i - n - 1) x_(i).
    let n = x.len() as f64;
    let mut v = x.to_vec();
    v.sort_by(f64::total_cmp);
    let weighted: f64 = v.iter().enumerate().map(|(i, val)| (2.0 * (i as f64 + 1.0) - n - 1.0) * val).sum();
    Ok(weighted / (n * total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gini_pairwise(x: &[f64]) -> f64 {
        let n = x.len() as f64;
        let m = x.iter().sum::<f64>() / n;
        let mut s = 0.0;
        for a in x {
            for b in x {
                s += (a - b).abs();
            }
        }
        s / (2.0 * n * n * m)
    }

    #[test]
    fn gini_examples() {
        assert_eq!(gini(&[3.0; 5]).unwrap(), 0.0);
        assert!((gini(&[0.0, 0.0, 7.0, 0.0]).unwrap() - 0.75).abs() < 1e-15);
        assert!((gini(&[1.0, 2.0, 3.0]).unwrap() - 4.0 / 18.0).abs() < 1e-15);
        assert!(gini(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn spearman_examples() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(spearman(&x, &x).unwrap(), 1.0);
        assert_eq!(spearman(&x, &[4.0, 3.0, 2.0, 1.0]).unwrap(), -1.0);
        assert!((spearman(&x, &[1.0, 3.0, 2.0, 4.0]).unwrap() - 0.8).abs() < 1e-15);
        assert!(spearman(&x, &[1.0; 4]).is_err());
        assert!(spearman(&x[..2], &x[..2]).is_err());
    }

    #[test]
    fn ranks_with_ties() {
        assert_eq!(mid_ranks(&[10.0, 20.0, 10.0, 5.0]), vec![2.5, 4.0, 2.5, 1.0]);
    }

    #[test]
    fn z_scores() {
        let z = z_standardize(&[1.0, 2.0, 3.0]);
        assert_eq!(z, vec![-1.0, 0.0, 1.0]);
        assert_eq!(z_standardize(&[4.0, 4.0]), vec![0.0, 0.0]);
    }

    #[test]
    fn median_even_odd() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), Some(2.5));
        assert_eq!(median(&[]), None);
    }

    proptest! {
        #[test]
        fn gini_matches_pairwise_sum(x in prop::collection::vec(0u32..50, 1..30)) {
            let x: Vec<f64> = x.into_iter().map(f64::from).collect();
            prop_assume!(x.iter().sum::<f64>() > 0.0);
            prop_assert!((gini(&x).unwrap() - gini_pairwise(&x)).abs() < 1e-12);
        }

        #[test]
        fn gini_scale_invariant(x in prop::collection::vec(0u32..50, 2..30), k in 1u32..20) {
            let x: Vec<f64> = x.into_iter().map(f64::from).collect();
            prop_assume!(x.iter().sum::<f64>() > 0.0);
            let scaled: Vec<f64> = x.iter().map(|v| v * f64::from(k)).collect();
            prop_assert!((gini(&x).unwrap() - gini(&scaled).unwrap()).abs() < 1e-12);
        }

        #[test]
        fn spearman_monotone_invariant(x in prop::collection::vec(-100.0f64..100.0, 3..40),
                                       y in prop::collection::vec(-100.0f64..100.0, 3..40)) {
            let n = x.len().min(y.len());
            let (x, y) = (&x[..n], &y[..n]);
            if let Ok(rho) = spearman(x, y) {
                let fx: Vec<f64> = x.iter().map(|v| v.powi(3) + 2.0 * v).collect();
                let gy: Vec<f64> = y.iter().map(|v| (v / 50.0).exp()).collect();
                prop_assert!((spearman(&fx, &gy).unwrap() - rho).abs() < 1e-12);
            }
        }
    }
}
