//! Counts of connected induced subgraphs on three and four nodes.
//!
//! Four-node counts come from non-induced counts of the six connected
//! graphlets (path, star, cycle, paw, diamond, clique), corrected for
//! containment, so nothing is enumerated.

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FourNodeGraphlets {
    pub path: u64,
    pub star: u64,
    pub cycle: u64,
    pub paw: u64,
    pub diamond: u64,
    pub clique: u64,
}

impl FourNodeGraphlets {
    pub fn total(&self) -> u64 {
        self.path + self.star + self.cycle + self.paw + self.diamond + self.clique
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MotifCounts {
    /// Connected induced 3-node subgraphs (open wedges plus triangles).
    pub three: u64,
    pub triangles: u64,
    pub four: FourNodeGraphlets,
}

impl MotifCounts {
    /// `N3 / N4`, `None` without four-node motifs.
    pub fn ratio(&self) -> Option<f64> {
        let n4 = self.four.total();
        (n4 > 0).then(|| self.three as f64 / n4 as f64)
    }
}

pub fn motif_count(g: &Graph, k: usize) -> Result<u64> {
    match k {
        3 => Ok(motif_counts(g).three),
        4 => Ok(motif_counts(g).four.total()),
        _ => Err(Error::InvalidParams(format!("motif size must be 3 or 4, got {k}"))),
    }
}

fn choose2(x: i128) -> i128 {
    x * (x - 1) / 2
}

fn choose3(x: i128) -> i128 {
    x * (x - 1) * (x - 2) / 6
}

fn intersection_len(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

pub fn motif_counts(g: &Graph) -> MotifCounts {
    let n = g.node_count();
    let deg: Vec<i128> = (0..n).map(|v| g.degree(v) as i128).collect();

    // Per-edge common neighbours; per-node triangle participation.
    let mut tri_at = vec![0i128; n];
    let mut wedge_paths = 0i128; // sum over edges (d_u - 1)(d_v - 1)
    let mut diamonds = 0i128; // sum over edges C(t_uv, 2)
    let mut tri3 = 0i128; // 3 * triangles
    for (u, v) in g.edges() {
        let t = intersection_len(g.neighbors(u), g.neighbors(v)) as i128;
        tri_at[u] += t;
        tri_at[v] += t;
        tri3 += t;
        wedge_paths += (deg[u] - 1) * (deg[v] - 1);
        diamonds += choose2(t);
    }
    let triangles = tri3 / 3;
    // tri_at[v] counted each triangle at v twice (once per incident edge).
    let tri_at: Vec<i128> = tri_at.into_iter().map(|t| t / 2).collect();

    let wedges: i128 = deg.iter().map(|&d| choose2(d)).sum();
    let stars: i128 = deg.iter().map(|&d| choose3(d)).sum();
    let paws: i128 = (0..n).map(|v| tri_at[v] * (deg[v] - 2).max(0)).sum();
    let paths = wedge_paths - 3 * triangles;

    // Four-cycles: pairs (u, w), u < w, with c common neighbours give C(c, 2)
    // cycles; each cycle is seen from both diagonals.
    let mut count = vec![0i128; n];
    let mut touched = Vec::new();
    let mut cycles2 = 0i128;
    for u in 0..n {
        for &v in g.neighbors(u) {
            for &w in g.neighbors(v as usize) {
                let w = w as usize;
                if w > u {
                    if count[w] == 0 {
                        touched.push(w);
                    }
                    count[w] += 1;
                }
            }
        }
        for &w in &touched {
            cycles2 += choose2(count[w]);
            count[w] = 0;
        }
        touched.clear();
    }
    let cycles = cycles2 / 2;

    // Four-cliques on the degree-ordered orientation: each counted once.
    let rank = |v: usize| (deg[v], v);
    let out: Vec<Vec<u32>> =
        (0..n).map(|v| g.neighbors(v).iter().copied().filter(|&u| rank(u as usize) > rank(v)).collect()).collect();
    let mut in_u = vec![false; n];
    let mut in_common = vec![false; n];
    let mut cliques = 0i128;
    let mut common = Vec::new();
    for u in 0..n {
        for &v in &out[u] {
            in_u[v as usize] = true;
        }
        for &v in &out[u] {
            common.extend(out[v as usize].iter().copied().filter(|&w| in_u[w as usize]));
            for &w in &common {
                in_common[w as usize] = true;
            }
            for &w in &common {
                cliques += out[w as usize].iter().filter(|&&x| in_common[x as usize]).count() as i128;
            }
            for &w in &common {
                in_common[w as usize] = false;
            }
            common.clear();
        }
        for &v in &out[u] {
            in_u[v as usize] = false;
        }
    }

    let clique = cliques;
    let diamond = diamonds - 6 * clique;
    let cycle = cycles - diamond - 3 * clique;
    let paw = paws - 4 * diamond - 12 * clique;
    let star = stars - paw - 2 * diamond - 4 * clique;
    let path = paths - 4 * cycle - 2 * paw - 6 * diamond - 12 * clique;
    let four = FourNodeGraphlets {
        path: path as u64,
        star: star as u64,
        cycle: cycle as u64,
        paw: paw as u64,
        diamond: diamond as u64,
        clique: clique as u64,
    };
    MotifCounts { three: (wedges - 2 * triangles) as u64, triangles: triangles as u64, four }
}
