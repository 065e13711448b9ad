//! Reference network classes and synthetic patent corpora.

use std::collections::BTreeSet;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{PatentCorpus, PatentRecord};
use crate::error::{Error, Result};
use crate::graph::Graph;

pub const MAX_ATTEMPTS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NetKind {
    Star,
    /// Complete b-ary tree filled in breadth-first order.
    Tree {
        branching: usize,
    },
    /// Ring lattice with `k` neighbours per node, each edge rewired with
    /// probability `beta`.
    SmallWorld {
        k: usize,
        beta: f64,
    },
    Complete,
    /// G(n, p).
    Random {
        p: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetSpec {
    #[serde(flatten)]
    pub kind: NetKind,
    pub n: usize,
    #[serde(default)]
    pub seed: u64,
}

impl NetSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSpec(m));
        if self.n < 5 {
            return bad(format!("n must be at least 5, got {}", self.n));
        }
        match self.kind {
            NetKind::Tree { branching } if branching < 1 => bad("tree branching must be >= 1".into()),
            NetKind::SmallWorld { k, beta } => {
                if k < 2 || k % 2 == 1 || k >= self.n {
                    bad(format!("small-world k must be even, >= 2 and < n, got {k}"))
                } else if !(0.0..=1.0).contains(&beta) {
                    bad(format!("rewiring probability must lie in [0, 1], got {beta}"))
                } else {
                    Ok(())
                }
            }
            NetKind::Random { p } if !(p > 0.0 && p < 1.0) => {
                bad(format!("edge probability must lie in (0, 1), got {p}"))
            }
            _ => Ok(()),
        }
    }
}

/// Edge probability giving a G(n, p) graph the mean degree `k`.
pub fn matched_probability(n: usize, k: f64) -> f64 {
    k / (n as f64 - 1.0)
}

/// Connected graph of the requested class; random classes are redrawn until
/// connected.
pub fn generate_network(spec: &NetSpec) -> Result<Graph> {
    spec.validate()?;
    let n = spec.n;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let edges: Vec<(usize, usize)> = match spec.kind {
        NetKind::Star => (1..n).map(|v| (0, v)).collect(),
        NetKind::Tree { branching } => (1..n).map(|v| ((v - 1) / branching, v)).collect(),
        NetKind::Complete => (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect(),
        NetKind::SmallWorld { k, beta } => {
            for _ in 0..MAX_ATTEMPTS {
                let g = Graph::from_edges(n, &watts_strogatz(n, k, beta, &mut rng));
                if g.is_connected() {
                    return Ok(g);
                }
            }
            return Err(Error::RetriesExhausted(MAX_ATTEMPTS));
        }
        NetKind::Random { p } => {
            for _ in 0..MAX_ATTEMPTS {
                let e: Vec<(usize, usize)> =
                    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|_| rng.gen_bool(p)).collect();
                let g = Graph::from_edges(n, &e);
                if g.is_connected() {
                    return Ok(g);
                }
            }
            return Err(Error::RetriesExhausted(MAX_ATTEMPTS));
        }
    };
    Ok(Graph::from_edges(n, &edges))
}

fn watts_strogatz<R: Rng>(n: usize, k: usize, beta: f64, rng: &mut R) -> Vec<(usize, usize)> {
    let mut set: BTreeSet<(usize, usize)> = BTreeSet::new();
    let key = |a: usize, b: usize| (a.min(b), a.max(b));
    for j in 1..=k / 2 {
        for i in 0..n {
            set.insert(key(i, (i + j) % n));
        }
    }
    for j in 1..=k / 2 {
        for i in 0..n {
            let old = key(i, (i + j) % n);
            if !set.contains(&old) || !rng.gen_bool(beta) {
                continue;
            }
            // Keep i, move the far end to a node that is neither i nor a
            // current neighbour.
            let choices: Vec<usize> = (0..n).filter(|&t| t != i && !set.contains(&key(i, t))).collect();
            if let Some(&t) = choices.choose(rng) {
                set.remove(&old);
                set.insert(key(i, t));
            }
        }
    }
    set.into_iter().collect()
}

/// Writes `u v` per line using node labels.
pub fn write_edge_list<W: std::io::Write>(g: &Graph, mut out: W) -> std::io::Result<()> {
    for (u, v) in g.edges() {
        writeln!(out, "{} {}", g.label(u), g.label(v))?;
    }
    Ok(())
}

/// Reads `u v` lines; blank lines and `#` comments are skipped.
pub fn read_edge_list<R: std::io::BufRead>(input: R) -> Result<Graph> {
    let mut edges = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        match (parts.next(), parts.next()) {
            (Some(a), Some(b)) => edges.push((a.to_string(), b.to_string())),
            _ => return Err(Error::InvalidSpec(format!("edge list line {}: expected `u v`", i + 1))),
        }
    }
    Ok(Graph::from_labeled(Vec::<String>::new(), &edges))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// Hub-and-spoke code reuse.
    Ordered,
    /// Ring neighbourhoods with occasional long jumps.
    Complex,
    /// Uniform code pairing.
    Random,
}

/// Linear change in the share of patents drawn with uniform pairing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomDrift {
    pub start_share: f64,
    pub end_share: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticCorpusSpec {
    pub technologies: usize,
    /// Patents per technology and year, by regime.
    pub patents_per_year: RegimeCounts,
    /// Extra patents per year of growth, by regime (applied linearly).
    #[serde(default)]
    pub yearly_growth: RegimeCounts,
    pub years: (i32, i32),
    pub codes_per_patent: (usize, usize),
    /// Distinct full codes available to each technology.
    pub codes_per_technology: usize,
    /// Regime of technology `i` is `regimes[i % regimes.len()]`.
    pub regimes: Vec<Regime>,
    /// Number of fine regions in the universe.
    pub regions: usize,
    /// Probability mass on the first region; the rest is uniform.
    pub region_skew: f64,
    pub inventors_per_patent: (usize, usize),
    /// Probability that a patent also lists a code of another technology.
    #[serde(default)]
    pub cross_technology: f64,
    #[serde(default)]
    pub random_drift: Option<RandomDrift>,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct RegimeCounts {
    pub ordered: usize,
    pub complex: usize,
    pub random: usize,
}

impl RegimeCounts {
    pub fn uniform(n: usize) -> Self {
        RegimeCounts { ordered: n, complex: n, random: n }
    }

    pub fn get(&self, r: Regime) -> usize {
        match r {
            Regime::Ordered => self.ordered,
            Regime::Complex => self.complex,
            Regime::Random => self.random,
        }
    }
}

impl Default for SyntheticCorpusSpec {
    fn default() -> Self {
        SyntheticCorpusSpec {
            technologies: 6,
            patents_per_year: RegimeCounts::uniform(20),
            yearly_growth: RegimeCounts::default(),
            years: (1990, 1999),
            codes_per_patent: (2, 4),
            codes_per_technology: 60,
            regimes: vec![Regime::Ordered, Regime::Complex, Regime::Random],
            regions: 20,
            region_skew: 0.3,
            inventors_per_patent: (1, 3),
            cross_technology: 0.05,
            random_drift: None,
            seed: 0,
        }
    }
}

impl SyntheticCorpusSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidSpec(m.to_string()));
        if self.technologies == 0 || self.technologies > 26 * 26 {
            return bad("technologies must be in 1..=676");
        }
        if self.regimes.is_empty() {
            return bad("regimes must not be empty");
        }
        if self.years.0 > self.years.1 {
            return bad("years must be ordered");
        }
        let (lo, hi) = self.codes_per_patent;
        if lo < 1 || lo > hi || hi > self.codes_per_technology {
            return bad("codes_per_patent must satisfy 1 <= min <= max <= codes_per_technology");
        }
        if self.codes_per_technology < 3 {
            return bad("codes_per_technology must be at least 3");
        }
        if self.regions == 0 || self.regions > 4000 {
            return bad("regions must be in 1..=4000");
        }
        let (ilo, ihi) = self.inventors_per_patent;
        if ilo < 1 || ilo > ihi {
            return bad("inventors_per_patent must satisfy 1 <= min <= max");
        }
        let probs = [self.region_skew, self.cross_technology]
            .into_iter()
            .chain(self.random_drift.iter().flat_map(|d| [d.start_share, d.end_share]));
        for p in probs {
            if !(0.0..=1.0).contains(&p) {
                return bad("probabilities must lie in [0, 1]");
            }
        }
        Ok(())
    }

    /// Four-character technology prefix of technology `i`.
    pub fn technology_prefix(i: usize) -> String {
        let a = (b'A' + (i / 26) as u8) as char;
        let b = (b'A' + (i % 26) as u8) as char;
        format!("S{a}{b}X")
    }

    /// Fine region codes of the universe; every four regions share a coarse
    /// prefix.
    pub fn region_codes(&self) -> Vec<String> {
        (0..self.regions).map(|r| format!("X{:03}{}", r / 4, (b'A' + (r % 4) as u8) as char)).collect()
    }

    pub fn regime(&self, tech: usize) -> Regime {
        self.regimes[tech % self.regimes.len()]
    }
}

fn code(tech: usize, k: usize) -> String {
    format!("{}{k:06}", SyntheticCorpusSpec::technology_prefix(tech))
}

/// Synthetic corpus whose per-technology co-occurrence structure follows the
/// technology's regime.
pub fn generate_corpus(spec: &SyntheticCorpusSpec) -> Result<PatentCorpus> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let regions = spec.region_codes();
    let mut weights = vec![(1.0 - spec.region_skew) / spec.regions as f64; spec.regions];
    weights[0] += spec.region_skew;
    let region_dist = WeightedIndex::new(&weights).map_err(|e| Error::InvalidSpec(e.to_string()))?;
    let pool = spec.codes_per_technology;
    let (y0, y1) = spec.years;
    let span = (y1 - y0).max(1) as f64;

    let mut records = Vec::new();
    for year in y0..=y1 {
        let frac = f64::from(year - y0) / span;
        let random_share = spec.random_drift.map_or(0.0, |d| d.start_share + (d.end_share - d.start_share) * frac);
        for tech in 0..spec.technologies {
            let regime = spec.regime(tech);
            let count = spec.patents_per_year.get(regime)
                + (spec.yearly_growth.get(regime) as f64 * f64::from(year - y0)).round() as usize;
            for i in 0..count {
                let size = rng.gen_range(spec.codes_per_patent.0..=spec.codes_per_patent.1);
                let regime = if rng.gen_bool(random_share) { Regime::Random } else { regime };
                let mut ks: BTreeSet<usize> = BTreeSet::new();
                match regime {
                    Regime::Ordered => {
                        // Code 0 is the hub; spokes are drawn from the pool.
                        ks.insert(0);
                        while ks.len() < size.max(2).min(pool) {
                            ks.insert(rng.gen_range(1..pool));
                        }
                    }
                    Regime::Complex => {
                        let at = rng.gen_range(0..pool);
                        ks.insert(at);
                        while ks.len() < size {
                            let next = if rng.gen_bool(0.1) {
                                rng.gen_range(0..pool)
                            } else {
                                (at + rng.gen_range(1..=3)) % pool
                            };
                            ks.insert(next);
                        }
                    }
                    Regime::Random => {
                        while ks.len() < size {
                            ks.insert(rng.gen_range(0..pool));
                        }
                    }
                }
                let mut codes: Vec<String> = ks.into_iter().map(|k| code(tech, k)).collect();
                if spec.technologies > 1 && rng.gen_bool(spec.cross_technology) {
                    let mut other = rng.gen_range(0..spec.technologies - 1);
                    if other >= tech {
                        other += 1;
                    }
                    codes.push(code(other, rng.gen_range(0..pool)));
                }
                let inventors = rng.gen_range(spec.inventors_per_patent.0..=spec.inventors_per_patent.1);
                let regs: Vec<&str> = (0..inventors).map(|_| regions[region_dist.sample(&mut rng)].as_str()).collect();
                let id = format!("{}-{year}-{i:05}", SyntheticCorpusSpec::technology_prefix(tech));
                let rec = PatentRecord::new(id, year, codes, regs).map_err(Error::InvalidSpec)?;
                records.push(rec);
            }
        }
    }
    Ok(PatentCorpus::new(records))
}

/// Writes a corpus in the ingest CSV schema.
pub fn write_corpus_csv<W: std::io::Write>(corpus: &PatentCorpus, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["id", "year", "codes", "regions"])?;
    for r in corpus.records() {
        w.write_record([r.id.as_str(), &r.appln_year.to_string(), &r.codes.join(";"), &r.regions.join(";")])?;
    }
    w.flush()?;
    Ok(())
}
