//! Run configuration and per-window computation of all measures.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::corpus::{self, region_tech_counts, window, PatentCorpus, PatentWindow, SpatialLevel, TechnologyId};
use crate::error::{Error, Result};
use crate::evaluate;
use crate::fsmodular::{self, FsDenominator};
use crate::reflection::{self, DEFAULT_ITERATIONS, DEFAULT_THRESHOLD};
use crate::scores::{Measure, ScoreRow, ScoreTable};
use crate::structural::{self, GraphScope, SamplingParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Corpus cache (`corpus.bin`) or ingest CSV.
    pub corpus: Option<PathBuf>,
    pub width: i32,
    /// Window anchor years; empty means every year with a full window.
    pub years: Vec<i32>,
    pub measures: Vec<Measure>,
    pub sampling: SamplingParams,
    pub scope: GraphScope,
    pub fs_denominator: FsDenominator,
    pub iterations: usize,
    pub out: PathBuf,
    /// Master seed; copied into `sampling.seed` on resolution.
    pub seed: u64,
    /// Worker threads; `None` uses the environment default.
    pub workers: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            corpus: None,
            width: 5,
            years: Vec::new(),
            measures: Measure::ALL.to_vec(),
            sampling: SamplingParams::default(),
            scope: GraphScope::default(),
            fs_denominator: FsDenominator::default(),
            iterations: DEFAULT_ITERATIONS,
            out: PathBuf::from("out"),
            seed: 0,
            workers: None,
        }
    }
}

impl RunConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Fills defaults that depend on the corpus and validates the result.
    pub fn resolve(mut self, corpus: &PatentCorpus) -> Result<Self> {
        if self.width < 1 {
            return Err(Error::InvalidWidth(self.width));
        }
        if self.measures.is_empty() {
            return Err(Error::Config("no measures selected".into()));
        }
        self.measures.sort_unstable();
        self.measures.dedup();
        self.sampling.seed = self.seed;
        self.sampling.validate()?;
        if self.years.is_empty() {
            let (lo, hi) = corpus.year_range().ok_or_else(|| Error::Config("corpus is empty".into()))?;
            self.years = (lo + self.width - 1..=hi).collect();
            if self.years.is_empty() {
                self.years.push(hi);
            }
        }
        self.years.sort_unstable();
        self.years.dedup();
        Ok(self)
    }
}

/// A measure that produced no value, for a whole window or one technology.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkipRecord {
    pub year: i32,
    pub measure: Measure,
    /// `None` when the whole window was skipped for this measure.
    pub technology: Option<TechnologyId>,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunOutput {
    pub table: ScoreTable,
    pub skipped: Vec<SkipRecord>,
}

/// Errors that leave one (measure, window) cell empty instead of ending the
/// run.
fn is_window_skip(e: &Error) -> bool {
    matches!(
        e,
        Error::ZeroMatrix
            | Error::EmptyIncidence
            | Error::TooFewTechnologies(_)
            | Error::DegenerateSpectrum(_)
            | Error::NoHistory(_)
    )
}

/// Computes every configured measure for every configured year. `cfg` must
/// be resolved.
pub fn run(corpus: &PatentCorpus, cfg: &RunConfig) -> Result<RunOutput> {
    let universe = corpus.region_universe();
    let mut out = RunOutput::default();
    for &year in &cfg.years {
        let w = window(corpus, year, cfg.width)?;
        let counts: BTreeMap<TechnologyId, usize> = w.by_technology().into_iter().map(|(t, p)| (t, p.len())).collect();
        out.table.covariates.extend(evaluate::covariates(&w, &universe));
        for &measure in &cfg.measures {
            let mut skip = |technology: Option<TechnologyId>, reason: String| {
                out.skipped.push(SkipRecord { year, measure, technology, reason })
            };
            match measure_scores(corpus, &w, measure, cfg, &mut skip) {
                Ok(values) => out.table.rows.extend(values.into_iter().map(|(technology, value)| ScoreRow {
                    year,
                    measure,
                    n_patents: counts.get(&technology).copied().unwrap_or(0),
                    technology,
                    value,
                })),
                Err(e) if is_window_skip(&e) => skip(None, e.to_string()),
                Err(e) => return Err(e),
            }
        }
    }
    out.table.normalize()?;
    Ok(out)
}

fn measure_scores(
    corpus: &PatentCorpus,
    w: &PatentWindow<'_>,
    measure: Measure,
    cfg: &RunConfig,
    skip: &mut dyn FnMut(Option<TechnologyId>, String),
) -> Result<Vec<(TechnologyId, f64)>> {
    let mut dropped = |techs: &[TechnologyId]| {
        for t in techs {
            skip(Some(t.clone()), "no specialized region".into());
        }
    };
    match measure {
        Measure::HhFine | Measure::HhCoarse => {
            let level = if measure == Measure::HhFine { SpatialLevel::Fine } else { SpatialLevel::Coarse };
            let m = reflection::incidence(&reflection::rta(&region_tech_counts(w, level))?, DEFAULT_THRESHOLD);
            let k = reflection::method_of_reflection(&m, cfg.iterations)?;
            dropped(&k.dropped_technologies);
            Ok(k.technologies.into_iter().zip(k.tech_scores).collect())
        }
        Measure::HhEigen => {
            let m =
                reflection::incidence(&reflection::rta(&region_tech_counts(w, SpatialLevel::Fine))?, DEFAULT_THRESHOLD);
            let (_, _, gone) = m.pruned();
            dropped(&gone);
            let e = reflection::eigen_complexity(&m)?;
            Ok(e.technologies.into_iter().zip(e.tech_scores).collect())
        }
        Measure::FsModular => {
            let e = fsmodular::ease_table(corpus, fsmodular::history_cutoff(w.anchor_year, w.width))?;
            let t = fsmodular::fs_scores(w, &e, cfg.fs_denominator);
            for tech in t.missing {
                skip(Some(tech), "no patent with a known code".into());
            }
            Ok(t.scores.into_iter().map(|(k, v)| (k, v.value)).collect())
        }
        Measure::Structural => {
            let r = structural::structural_scores(w, &cfg.sampling, cfg.scope)?;
            for s in r.skipped {
                skip(Some(s.technology), s.detail);
            }
            Ok(r.rows.into_iter().map(|row| (row.technology, row.score.structural)).collect())
        }
    }
}

/// Loads a corpus from a cache file, or parses it when the path ends in
/// `.csv`.
pub fn load_corpus(path: &Path) -> Result<PatentCorpus> {
    let file = std::io::BufReader::new(std::fs::File::open(path)?);
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        Ok(corpus::parse_corpus(file, &corpus::CsvSchema::default())?.0)
    } else {
        PatentCorpus::read_cache(file)
    }
}

/// Merges `rows` into the CSV at `path`: rows with the same (year, measure,
/// technology) are replaced, the rest kept, and the file rewritten sorted.
pub fn merge_scores(path: &Path, rows: &[ScoreRow]) -> Result<()> {
    let mut merged: BTreeMap<(i32, Measure, TechnologyId), ScoreRow> = BTreeMap::new();
    if path.exists() {
        for r in ScoreTable::read_csv(std::fs::File::open(path)?)? {
            merged.insert((r.year, r.measure, r.technology.clone()), r);
        }
    }
    for r in rows {
        merged.insert((r.year, r.measure, r.technology.clone()), r.clone());
    }
    let rows: Vec<ScoreRow> = merged.into_values().collect();
    let tmp = path.with_extension("csv.tmp");
    ScoreTable::write_csv(&rows, std::io::BufWriter::new(std::fs::File::create(&tmp)?), true)?;
    std::fs::rename(tmp, path)?;
    Ok(())
}

/// Rebuilds a score table with covariates recomputed from the corpus.
pub fn attach_covariates(rows: Vec<ScoreRow>, corpus: &PatentCorpus, width: i32) -> Result<ScoreTable> {
    let universe = corpus.region_universe();
    let mut table = ScoreTable { rows, covariates: Vec::new() };
    for year in table.years() {
        let w = window(corpus, year, width)?;
        table.covariates.extend(evaluate::covariates(&w, &universe));
    }
    table.normalize()?;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgen::{generate_corpus, SyntheticCorpusSpec};

    fn small_corpus() -> PatentCorpus {
        generate_corpus(&SyntheticCorpusSpec { years: (2000, 2006), ..Default::default() }).unwrap()
    }

    #[test]
    fn resolve_fills_years() {
        let c = small_corpus();
        let cfg = RunConfig { seed: 9, ..Default::default() }.resolve(&c).unwrap();
        assert_eq!(cfg.years, vec![2004, 2005, 2006]);
        assert_eq!(cfg.sampling.seed, 9);
    }

    #[test]
    fn every_technology_scored_or_skipped() {
        let c = small_corpus();
        let cfg = RunConfig { years: vec![2006], ..Default::default() }.resolve(&c).unwrap();
        let out = run(&c, &cfg).unwrap();
        let w = window(&c, 2006, 5).unwrap();
        for m in Measure::ALL {
            for t in w.technologies() {
                let scored = out.table.rows.iter().any(|r| r.measure == m && r.technology == t);
                let skipped = out
                    .skipped
                    .iter()
                    .any(|s| s.measure == m && (s.technology.is_none() || s.technology.as_ref() == Some(&t)));
                assert!(scored || skipped, "{m} {t}");
            }
        }
    }

    #[test]
    fn config_roundtrip() {
        let cfg = RunConfig { years: vec![2001, 2002], measures: vec![Measure::Structural], ..Default::default() };
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), cfg);
        assert!(serde_json::from_str::<RunConfig>(r#"{"widht": 3}"#).is_err());
    }
}
