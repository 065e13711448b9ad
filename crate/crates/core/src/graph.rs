//! Undirected simple graph with canonically ordered string labels.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// Nodes are indexed `0..n` in ascending label order; adjacency lists are
/// sorted and free of self-loops and duplicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    adj: Vec<Vec<u32>>,
    edges: usize,
}

impl Graph {
    /// Builds a graph from labelled edges plus optional isolated nodes.
    /// Self-pairs and repeated edges are ignored.
    pub fn from_labeled<S: AsRef<str>>(nodes: impl IntoIterator<Item = S>, edges: &[(S, S)]) -> Graph {
        let mut set: BTreeSet<String> = nodes.into_iter().map(|s| s.as_ref().to_string()).collect();
        for (a, b) in edges {
            set.insert(a.as_ref().to_string());
            set.insert(b.as_ref().to_string());
        }
        let labels: Vec<String> = set.into_iter().collect();
        let index: BTreeMap<&str, u32> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i as u32)).collect();
        let pairs: Vec<(u32, u32)> = edges.iter().map(|(a, b)| (index[a.as_ref()], index[b.as_ref()])).collect();
        Self::assemble(labels, &pairs)
    }

    /// Nodes `0..n` labelled with zero-padded indices, so label order equals
    /// index order.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Graph {
        let width = n.saturating_sub(1).to_string().len();
        let labels = (0..n).map(|i| format!("{i:0width$}")).collect();
        let pairs: Vec<(u32, u32)> = edges
            .iter()
            .map(|&(a, b)| {
                assert!(a < n && b < n, "edge ({a}, {b}) out of range for {n} nodes");
                (a as u32, b as u32)
            })
            .collect();
        Self::assemble(labels, &pairs)
    }

    fn assemble(labels: Vec<String>, pairs: &[(u32, u32)]) -> Graph {
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); labels.len()];
        for &(a, b) in pairs {
            if a != b {
                adj[a as usize].push(b);
                adj[b as usize].push(a);
            }
        }
        let mut degree_sum = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            degree_sum += list.len();
        }
        Graph { labels, adj, edges: degree_sum / 2 }
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&(b as u32)).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| (v as usize) > u).map(move |&v| (u, v as usize)))
    }

    pub fn is_complete(&self) -> bool {
        let n = self.node_count();
        self.edges == n * n.saturating_sub(1) / 2
    }

    pub fn density(&self) -> f64 {
        let n = self.node_count();
        if n < 2 {
            return 0.0;
        }
        2.0 * self.edges as f64 / (n * (n - 1)) as f64
    }

    /// Subgraph induced by `nodes` (any order, duplicates ignored).
    pub fn induced(&self, nodes: &[usize]) -> Graph {
        let mut keep: Vec<usize> = nodes.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut map = vec![u32::MAX; self.node_count()];
        for (i, &v) in keep.iter().enumerate() {
            map[v] = i as u32;
        }
        let mut edges = 0;
        let adj: Vec<Vec<u32>> = keep
            .iter()
            .map(|&v| {
                let list: Vec<u32> = self.adj[v].iter().map(|&u| map[u as usize]).filter(|&u| u != u32::MAX).collect();
                edges += list.len();
                list
            })
            .collect();
        // Relabelling by increasing original index preserves label order.
        Graph { labels: keep.iter().map(|&v| self.labels[v].clone()).collect(), adj, edges: edges / 2 }
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            queue.push_back(s);
            let mut comp = Vec::new();
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for &u in &self.adj[v] {
                    if !seen[u as usize] {
                        seen[u as usize] = true;
                        queue.push_back(u as usize);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.node_count() > 0 && self.components().len() == 1
    }
}

/// Induced subgraph on the largest connected node set. Ties go to the
/// component holding the lexicographically smallest label.
pub fn largest_component(g: &Graph) -> Graph {
    let comps = g.components();
    // Components come ordered by smallest index, i.e. smallest label, so the
    // first maximum wins ties.
    match comps.iter().fold(None::<&Vec<usize>>, |best, c| match best {
        Some(b) if b.len() >= c.len() => Some(b),
        _ => Some(c),
    }) {
        Some(c) if c.len() == g.node_count() => g.clone(),
        Some(c) => g.induced(c),
        None => g.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dedups_and_drops_loops() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 0), (1, 1), (1, 2)]);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.neighbors(1), &[0, 2]);
    }

    #[test]
    fn labels_sorted() {
        let g = Graph::from_labeled(["zeta"], &[("b", "a")]);
        assert_eq!(g.labels(), &["a", "b", "zeta"]);
        assert!(g.has_edge(0, 1));
        assert_eq!(g.degree(2), 0);
    }

    #[test]
    fn connected_graph_is_its_own_component() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(largest_component(&g), g);
    }

    #[test]
    fn picks_bigger_component() {
        let mut edges = vec![(0, 1), (1, 2)];
        edges.extend((3..9).map(|i| (i, i + 1)));
        let g = Graph::from_edges(10, &edges);
        let c = largest_component(&g);
        assert_eq!(c.node_count(), 7);
        assert_eq!(c.label(0), "3");
    }

    #[test]
    fn tie_goes_to_smallest_label() {
        let g = Graph::from_labeled(
            Vec::<&str>::new(),
            &[
                ("m1", "m2"),
                ("m2", "m3"),
                ("m3", "m4"),
                ("m4", "m5"),
                ("b1", "b2"),
                ("b2", "b3"),
                ("b3", "b4"),
                ("b4", "b5"),
            ],
        );
        let c = largest_component(&g);
        assert_eq!(c.node_count(), 5);
        assert!(c.labels().iter().all(|l| l.starts_with('b')));
    }

    #[test]
    fn induced_keeps_internal_edges() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]);
        let s = g.induced(&[3, 0, 1]);
        assert_eq!(s.node_count(), 3);
        assert_eq!(s.edge_count(), 2);
        assert_eq!(s.labels(), &["0", "1", "3"]);
    }

    #[test]
    fn completeness() {
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert!(k4.is_complete());
        assert_eq!(k4.density(), 1.0);
        assert!(!Graph::from_edges(3, &[(0, 1), (1, 2)]).is_complete());
    }
}
