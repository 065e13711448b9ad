//! Independent recomputations of library results on small inputs.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use techcx::corpus::{window, PatentCorpus, PatentRecord};
use techcx::evaluate::{covariates, gini};
use techcx::graph::Graph;
use techcx::netgen::{self, generate_corpus, NetKind, NetSpec, Regime, RegimeCounts, SyntheticCorpusSpec};
use techcx::structural::inds::combine;
use techcx::structural::{self, build_graph, inds, laplacian_spectrum, motif_count, GraphScope, GreedyModularity};
use techcx::TechnologyId;

fn er(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

fn connected(g: &Graph, nodes: &[usize]) -> bool {
    let mut seen = vec![nodes[0]];
    let mut stack = vec![nodes[0]];
    while let Some(v) = stack.pop() {
        for &u in nodes {
            if !seen.contains(&u) && g.has_edge(v, u) {
                seen.push(u);
                stack.push(u);
            }
        }
    }
    seen.len() == nodes.len()
}

fn brute_motifs(g: &Graph, k: usize) -> u64 {
    let n = g.node_count();
    let mut count = 0;
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if connected(g, &idx) {
            count += 1;
        }
        // Next k-combination in lexicographic order.
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return count;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[test]
fn motif_counts_match_enumeration_on_random_graphs() {
    for (seed, p) in [(1, 0.1), (2, 0.2), (3, 0.35)] {
        let g = er(30, p, seed);
        assert_eq!(motif_count(&g, 3).unwrap(), brute_motifs(&g, 3), "3-node, p={p}");
        assert_eq!(motif_count(&g, 4).unwrap(), brute_motifs(&g, 4), "4-node, p={p}");
    }
}

#[test]
fn cooccurrence_graph_matches_pairwise_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let records: Vec<PatentRecord> = (0..50)
        .map(|i| {
            let k = rng.gen_range(1..5);
            let codes: Vec<String> = (0..k)
                .map(|_| {
                    let tech = if rng.gen_bool(0.8) { "H01L" } else { "G06F" };
                    format!("{tech}{:03}", rng.gen_range(0..15))
                })
                .collect();
            PatentRecord::new(format!("p{i}"), 2000, codes, ["R001"]).unwrap()
        })
        .collect();
    let corpus = PatentCorpus::new(records);
    let w = window(&corpus, 2000, 5).unwrap();
    let tech = TechnologyId::new("H01L");
    let g = build_graph(&w, &tech, GraphScope::AllCodes).unwrap();

    let mut nodes = BTreeSet::new();
    let mut edges = BTreeSet::new();
    let mut patents = 0;
    for r in corpus.records() {
        if !r.codes.iter().any(|c| c.starts_with("H01L")) {
            continue;
        }
        patents += 1;
        for a in &r.codes {
            nodes.insert(a.clone());
            for b in &r.codes {
                if a < b {
                    edges.insert((a.clone(), b.clone()));
                }
            }
        }
    }
    assert_eq!(g.patents, patents);
    assert_eq!(g.graph.labels(), nodes.iter().cloned().collect::<Vec<_>>().as_slice());
    let got: BTreeSet<(String, String)> =
        g.graph.edges().map(|(a, b)| (g.graph.label(a).to_string(), g.graph.label(b).to_string())).collect();
    assert_eq!(got, edges);
}

#[test]
fn covariates_match_recount() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let regions = ["R001", "R002", "R003", "R004", "R005"];
    let records: Vec<PatentRecord> = (0..20)
        .map(|i| {
            let year = rng.gen_range(2006..=2010);
            let codes = if rng.gen_bool(0.5) { vec!["A01B001", "C07D002"] } else { vec!["A01B003"] };
            let inv: Vec<&str> = (0..rng.gen_range(1..4)).map(|_| regions[rng.gen_range(0..5)]).collect();
            PatentRecord::new(format!("p{i}"), year, codes, inv).unwrap()
        })
        .collect();
    let corpus = PatentCorpus::new(records);
    let universe = corpus.region_universe();
    let rows = covariates(&window(&corpus, 2010, 5).unwrap(), &universe);
    for row in &rows {
        let own: Vec<&PatentRecord> = corpus
            .records()
            .iter()
            .filter(|r| r.codes.iter().any(|c| c.starts_with(row.technology.as_str())))
            .collect();
        assert_eq!(row.n_patents, own.len());
        let years: i32 = own.iter().map(|r| r.appln_year).sum();
        assert_eq!(row.mean_year, f64::from(years) / own.len() as f64);
        let inventors: usize = own.iter().map(|r| r.regions.len()).sum();
        assert_eq!(row.mean_inventors, inventors as f64 / own.len() as f64);
        let counts: Vec<f64> = universe
            .iter()
            .map(|u| own.iter().map(|r| r.regions.iter().filter(|x| *x == u).count()).sum::<usize>() as f64)
            .collect();
        assert_eq!(row.gini, Some(gini(&counts).unwrap()));
    }
    assert_eq!(rows.len(), 2);
}

#[test]
fn inds_matches_formula_on_small_world() {
    let g =
        netgen::generate_network(&NetSpec { kind: NetKind::SmallWorld { k: 6, beta: 0.05 }, n: 100, seed: 3 }).unwrap();
    let b = inds(&g, &GreedyModularity, 0);
    let sizes: Vec<f64> = b.module_sizes.iter().map(|&s| s as f64).collect();
    let m = sizes.iter().sum::<f64>() / sizes.len() as f64;
    let var_m = sizes.iter().map(|s| (s - m).powi(2)).sum::<f64>() / (sizes.len() - 1) as f64;
    let spec = laplacian_spectrum(&g);
    let l = spec.iter().sum::<f64>() / spec.len() as f64;
    let var_l = spec.iter().map(|s| (s - l).powi(2)).sum::<f64>() / (spec.len() - 1) as f64;
    let r = brute_motifs(&g, 3) as f64 / brute_motifs(&g, 4) as f64;
    let expected = combine(sizes.len() as f64 / 100.0, var_m / m, var_l / l, r);
    let got = b.inds.expect("small world is not degenerate");
    assert!((got - expected).abs() <= 1e-9 * expected.abs(), "{got} vs {expected}");
}

#[test]
fn star_samples_are_degenerate() {
    let g = netgen::generate_network(&NetSpec { kind: NetKind::Star, n: 50, seed: 0 }).unwrap();
    let b = inds(&g, &GreedyModularity, 0);
    assert!(b.inds.is_none());
    assert!(structural::nds_graph(&g, &structural::SamplingParams::default()).is_err());
}

#[test]
fn hub_regime_has_dominant_hub() {
    let spec = SyntheticCorpusSpec {
        technologies: 1,
        regimes: vec![Regime::Ordered],
        patents_per_year: RegimeCounts::uniform(40),
        cross_technology: 0.0,
        years: (2000, 2004),
        ..Default::default()
    };
    let corpus = generate_corpus(&spec).unwrap();
    let w = window(&corpus, 2004, 5).unwrap();
    let tech = TechnologyId::new(SyntheticCorpusSpec::technology_prefix(0));
    let g = build_graph(&w, &tech, GraphScope::AllCodes).unwrap().graph;
    let degrees: Vec<usize> = (0..g.node_count()).map(|v| g.degree(v)).collect();
    let max = *degrees.iter().max().unwrap();
    assert_eq!(max, g.node_count() - 1, "hub touches every code");
    let mut sorted = degrees.clone();
    sorted.sort_unstable();
    assert!(max > 3 * sorted[sorted.len() / 2]);
}

#[test]
fn full_skew_concentrates_in_one_region() {
    let spec = SyntheticCorpusSpec { region_skew: 1.0, regions: 8, ..Default::default() };
    let corpus = generate_corpus(&spec).unwrap();
    let universe = spec.region_codes();
    let rows = covariates(&window(&corpus, spec.years.1, 5).unwrap(), &universe);
    for row in rows {
        assert_eq!(row.gini, Some(7.0 / 8.0));
    }
}

#[test]
fn regime_patent_counts_follow_spec() {
    let spec = SyntheticCorpusSpec {
        patents_per_year: RegimeCounts { ordered: 3, complex: 5, random: 7 },
        cross_technology: 0.0,
        ..Default::default()
    };
    let corpus = generate_corpus(&spec).unwrap();
    let mut per_tech: BTreeMap<String, usize> = BTreeMap::new();
    for r in corpus.records() {
        *per_tech.entry(r.codes[0][..4].to_string()).or_default() += 1;
    }
    let years = (spec.years.1 - spec.years.0 + 1) as usize;
    for i in 0..spec.technologies {
        let expected = spec.patents_per_year.get(spec.regime(i)) * years;
        assert_eq!(per_tech[&SyntheticCorpusSpec::technology_prefix(i)], expected);
    }
}
