//! Module (community) detection.

use std::collections::BTreeMap;

use crate::graph::Graph;

/// Node partition. Part ids are `0..count`, numbered by smallest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub membership: Vec<u32>,
    pub sizes: Vec<usize>,
}

impl Partition {
    /// Renumbers an arbitrary labelling canonically.
    pub fn from_labels(labels: &[u32]) -> Partition {
        let mut remap: BTreeMap<u32, u32> = BTreeMap::new();
        let mut membership = Vec::with_capacity(labels.len());
        let mut sizes = Vec::new();
        for &l in labels {
            let next = remap.len() as u32;
            let id = *remap.entry(l).or_insert(next);
            if id as usize == sizes.len() {
                sizes.push(0);
            }
            sizes[id as usize] += 1;
            membership.push(id);
        }
        Partition { membership, sizes }
    }

    pub fn count(&self) -> usize {
        self.sizes.len()
    }
}

/// Pluggable module detection. `seed` is available to randomized detectors;
/// deterministic ones ignore it.
pub trait ModuleDetector: Sync {
    fn detect(&self, g: &Graph, seed: u64) -> Partition;
}

/// Newman modularity of a partition.
pub fn modularity(g: &Graph, membership: &[u32]) -> f64 {
    let m2 = 2.0 * g.edge_count() as f64;
    if m2 == 0.0 {
        return 0.0;
    }
    let parts = membership.iter().copied().max().map_or(0, |x| x as usize + 1);
    let mut inside = vec![0.0; parts];
    let mut degree = vec![0.0; parts];
    for v in 0..g.node_count() {
        let p = membership[v] as usize;
        degree[p] += g.degree(v) as f64;
        inside[p] += g.neighbors(v).iter().filter(|&&u| membership[u as usize] as usize == p).count() as f64;
    }
    (0..parts).map(|p| inside[p] / m2 - (degree[p] / m2).powi(2)).sum()
}

/// Greedy agglomerative modularity maximization (Clauset-Newman-Moore).
///
/// Merge gains are kept as exact integers `2m * E_ij - D_i * D_j`
/// (proportional to the modularity gain), ties go to the smallest
/// `(i, j)` pair, and merging stops once no pair has a positive gain.
#[derive(Debug, Clone, Copy, Default)]
pub struct GreedyModularity;

type PairKey = (i128, u32, u32);

fn better(a: PairKey, b: PairKey) -> bool {
    a.0 > b.0 || (a.0 == b.0 && (a.1, a.2) < (b.1, b.2))
}

impl ModuleDetector for GreedyModularity {
    fn detect(&self, g: &Graph, _seed: u64) -> Partition {
        let n = g.node_count();
        let two_m = 2 * g.edge_count() as i128;
        let mut links: Vec<BTreeMap<u32, i128>> =
            (0..n).map(|v| g.neighbors(v).iter().map(|&u| (u, 1)).collect()).collect();
        let mut degree: Vec<i128> = (0..n).map(|v| g.degree(v) as i128).collect();
        let mut owner: Vec<u32> = (0..n as u32).collect();
        let mut alive = vec![true; n];

        let gain = |degree: &[i128], i: u32, j: u32, e: i128| two_m * e - degree[i as usize] * degree[j as usize];
        let row_best = |links: &[BTreeMap<u32, i128>], degree: &[i128], i: u32| -> Option<PairKey> {
            let mut best: Option<PairKey> = None;
            for (&j, &e) in &links[i as usize] {
                let key = (gain(degree, i, j, e), i.min(j), i.max(j));
                if best.is_none_or(|b| better(key, b)) {
                    best = Some(key);
                }
            }
            best
        };
        let mut cache: Vec<Option<PairKey>> = (0..n as u32).map(|i| row_best(&links, &degree, i)).collect();

        loop {
            let mut best: Option<PairKey> = None;
            for (i, c) in cache.iter().enumerate() {
                if !alive[i] {
                    continue;
                }
                if let Some(k) = *c {
                    if best.is_none_or(|b| better(k, b)) {
                        best = Some(k);
                    }
                }
            }
            let Some((score, i, j)) = best else { break };
            if score <= 0 {
                break;
            }
            // Merge j into i.
            let absorbed = std::mem::take(&mut links[j as usize]);
            links[i as usize].remove(&j);
            for (&k, &e) in &absorbed {
                if k == i {
                    continue;
                }
                *links[i as usize].entry(k).or_insert(0) += e;
                let row = &mut links[k as usize];
                row.remove(&j);
                *row.entry(i).or_insert(0) += e;
            }
            degree[i as usize] += degree[j as usize];
            degree[j as usize] = 0;
            alive[j as usize] = false;
            cache[j as usize] = None;
            for o in owner.iter_mut().filter(|o| **o == j) {
                *o = i;
            }
            // Gains change only for pairs touching i.
            cache[i as usize] = row_best(&links, &degree, i);
            let neighbours: Vec<u32> = links[i as usize].keys().copied().collect();
            for k in neighbours {
                cache[k as usize] = row_best(&links, &degree, k);
            }
        }
        Partition::from_labels(&owner)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_cliques_bridge() -> Graph {
        let mut e = Vec::new();
        for base in [0, 4] {
            for a in 0..4 {
                for b in a + 1..4 {
                    e.push((base + a, base + b));
                }
            }
        }
        e.push((3, 4));
        Graph::from_edges(8, &e)
    }

    #[test]
    fn finds_the_two_cliques() {
        let g = two_cliques_bridge();
        let p = GreedyModularity.detect(&g, 0);
        assert_eq!(p.sizes, vec![4, 4]);
        assert_eq!(p.membership, vec![0, 0, 0, 0, 1, 1, 1, 1]);

        // Exhaustive check over all two-part splits.
        let mut best = (f64::MIN, 0u32);
        for mask in 1u32..(1 << 7) {
            let memb: Vec<u32> = (0..8).map(|v| (mask >> v) & 1).collect();
            let q = modularity(&g, &memb);
            if q > best.0 + 1e-12 {
                best = (q, mask);
            }
        }
        let oracle: Vec<u32> = (0..8).map(|v| (best.1 >> v) & 1).collect();
        assert_eq!(Partition::from_labels(&oracle), p);
        assert!((modularity(&g, &p.membership) - best.0).abs() < 1e-12);
    }

    #[test]
    fn clique_is_one_module() {
        let e: Vec<(usize, usize)> = (0..6).flat_map(|a| (a + 1..6).map(move |b| (a, b))).collect();
        let g = Graph::from_edges(6, &e);
        assert_eq!(GreedyModularity.detect(&g, 0).sizes, vec![6]);
        // Any split of a clique has negative modularity.
        for mask in 1u32..(1 << 5) {
            let memb: Vec<u32> = (0..6).map(|v| (mask >> v) & 1).collect();
            assert!(modularity(&g, &memb) < 0.0);
        }
    }

    #[test]
    fn star_is_reproducible() {
        let g = Graph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]);
        let a = GreedyModularity.detect(&g, 7);
        let b = GreedyModularity.detect(&g, 7);
        assert_eq!(a, b);
        assert_eq!(a.membership.len(), 6);
    }

    #[test]
    fn canonical_partition_labels() {
        let p = Partition::from_labels(&[5, 5, 2, 9, 2]);
        assert_eq!(p.membership, vec![0, 0, 1, 2, 1]);
        assert_eq!(p.sizes, vec![2, 2, 1]);
    }
}
