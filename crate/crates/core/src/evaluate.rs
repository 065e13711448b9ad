//! Stylized-fact harness: trends, covariate correlations, size-class sweeps
//! and spatial concentration.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{PatentWindow, TechnologyId};
use crate::error::{Error, Result};
use crate::scores::{CovariateRow, Measure, ScoreTable};
pub use crate::stats::{gini, pearson, spearman};
use crate::stats::{mean, median};

/// Per-technology covariates of a window. `universe` is the fine region
/// universe used for the concentration vector; regions outside it are
/// ignored.
pub fn covariates(w: &PatentWindow<'_>, universe: &[String]) -> Vec<CovariateRow> {
    let index: BTreeMap<&str, usize> = universe.iter().enumerate().map(|(i, r)| (r.as_str(), i)).collect();
    w.by_technology()
        .into_iter()
        .map(|(technology, patents)| {
            let years: Vec<f64> = patents.iter().map(|r| f64::from(r.appln_year)).collect();
            let inventors: Vec<f64> = patents.iter().map(|r| r.inventor_count() as f64).collect();
            let mut counts = vec![0.0; universe.len()];
            for r in &patents {
                for region in &r.regions {
                    if let Some(&i) = index.get(region.as_str()) {
                        counts[i] += 1.0;
                    }
                }
            }
            CovariateRow {
                year: w.anchor_year,
                technology,
                n_patents: patents.len(),
                mean_year: mean(&years),
                mean_inventors: mean(&inventors),
                gini: gini(&counts).ok(),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Covariate {
    Age,
    Patents,
    Inventors,
    Gini,
}

impl Covariate {
    pub const ALL: [Covariate; 4] = [Covariate::Age, Covariate::Patents, Covariate::Inventors, Covariate::Gini];

    pub fn name(self) -> &'static str {
        match self {
            Covariate::Age => "age",
            Covariate::Patents => "patents",
            Covariate::Inventors => "inventors",
            Covariate::Gini => "gini",
        }
    }
}

/// How the age covariate is read off the mean application year.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AgeMode {
    /// Mean application year: positive correlation means younger
    /// technologies score higher.
    #[default]
    MeanYear,
    /// Age in years, `t - mean year`; the sign of the correlation flips.
    YearsBeforeWindow,
}

pub fn covariate_value(row: &CovariateRow, c: Covariate, age: AgeMode) -> Option<f64> {
    match c {
        Covariate::Age => Some(match age {
            AgeMode::MeanYear => row.mean_year,
            AgeMode::YearsBeforeWindow => f64::from(row.year) - row.mean_year,
        }),
        Covariate::Patents => Some(row.n_patents as f64),
        Covariate::Inventors => Some(row.mean_inventors),
        Covariate::Gini => row.gini,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    /// Minimum patent count of retained technologies.
    pub threshold: usize,
    /// `None` when either side has no rank variance.
    pub rho: Option<f64>,
    pub technologies: usize,
    /// Patents of retained technologies over patents of all scored ones.
    pub retained_share: f64,
}

/// Re-estimates the Spearman correlation between `scores` and `covariate`
/// while dropping technologies below an increasing patent-count threshold.
/// The curve ends once fewer than three technologies remain.
pub fn size_class_sweep(
    scores: &[(TechnologyId, f64)],
    covs: &[CovariateRow],
    covariate: Covariate,
    age: AgeMode,
) -> Vec<SweepPoint> {
    let by_tech: BTreeMap<&TechnologyId, &CovariateRow> = covs.iter().map(|c| (&c.technology, c)).collect();
    let pairs: Vec<(usize, f64, f64)> = scores
        .iter()
        .filter_map(|(t, v)| {
            let row = by_tech.get(t)?;
            Some((row.n_patents, *v, covariate_value(row, covariate, age)?))
        })
        .collect();
    let total: usize = pairs.iter().map(|p| p.0).sum();
    let mut out = Vec::new();
    for threshold in 0.. {
        let kept: Vec<&(usize, f64, f64)> = pairs.iter().filter(|p| p.0 >= threshold).collect();
        if kept.len() < 3 {
            break;
        }
        let x: Vec<f64> = kept.iter().map(|p| p.1).collect();
        let y: Vec<f64> = kept.iter().map(|p| p.2).collect();
        let retained: usize = kept.iter().map(|p| p.0).sum();
        out.push(SweepPoint {
            threshold,
            rho: spearman(&x, &y).ok(),
            technologies: kept.len(),
            retained_share: retained as f64 / total as f64,
        });
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendPoint {
    pub series: String,
    pub year: i32,
    pub median: f64,
    pub normalized: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationPoint {
    pub measure: Measure,
    pub covariate: Covariate,
    pub year: i32,
    pub rho: Option<f64>,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCurve {
    pub measure: Measure,
    pub covariate: Covariate,
    pub year: i32,
    pub points: Vec<SweepPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GiniRow {
    pub measure: Measure,
    /// Mean of the defined yearly correlations.
    pub mean_rho: Option<f64>,
    pub years: usize,
    pub last_year_rho: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EvaluationOptions {
    pub age: AgeMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub years: Vec<i32>,
    /// Median score per measure and year, plus the `median-patents` series.
    pub trend: Vec<TrendPoint>,
    pub correlations: Vec<CorrelationPoint>,
    /// Sweeps at the last year against patent counts and GINI.
    pub sweeps: Vec<SweepCurve>,
    pub gini_table: Vec<GiniRow>,
    pub options: EvaluationOptions,
}

pub const PATENT_SERIES: &str = "median-patents";

/// Divides by the maximum when every value is positive, otherwise maps
/// min..max onto 0..1. Either way the maximum becomes exactly 1 and a
/// positive rescaling of the input changes nothing.
pub fn normalize_series(x: &[f64]) -> Vec<f64> {
    let max = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = x.iter().copied().fold(f64::INFINITY, f64::min);
    if min > 0.0 {
        x.iter().map(|v| if *v == max { 1.0 } else { v / max }).collect()
    } else if max > min {
        x.iter().map(|v| if *v == max { 1.0 } else { (v - min) / (max - min) }).collect()
    } else {
        vec![1.0; x.len()]
    }
}

fn trend_series(name: &str, points: &[(i32, f64)]) -> Vec<TrendPoint> {
    let medians: Vec<f64> = points.iter().map(|p| p.1).collect();
    points
        .iter()
        .zip(normalize_series(&medians))
        .map(|(&(year, median), normalized)| TrendPoint { series: name.to_string(), year, median, normalized })
        .collect()
}

/// Builds every report series from a score table and its covariates.
pub fn stylized_facts(st: &ScoreTable, opts: &EvaluationOptions) -> Result<EvaluationReport> {
    let years = st.years();
    if years.len() < 2 {
        return Err(Error::Statistics(format!("need scores for at least two years, got {}", years.len())));
    }
    let covs: BTreeMap<(i32, &TechnologyId), &CovariateRow> =
        st.covariates.iter().map(|c| ((c.year, &c.technology), c)).collect();
    let mut grouped: BTreeMap<(Measure, i32), Vec<(TechnologyId, f64)>> = BTreeMap::new();
    for r in &st.rows {
        grouped.entry((r.measure, r.year)).or_default().push((r.technology.clone(), r.value));
    }

    let mut trend = Vec::new();
    for m in st.measures() {
        let pts: Vec<(i32, f64)> = grouped
            .range((m, i32::MIN)..=(m, i32::MAX))
            .filter_map(|(&(_, y), v)| median(&v.iter().map(|p| p.1).collect::<Vec<_>>()).map(|md| (y, md)))
            .collect();
        trend.extend(trend_series(m.name(), &pts));
    }
    // Patent medians over technologies holding at least one score.
    let mut scored: BTreeMap<i32, BTreeSet<&TechnologyId>> = BTreeMap::new();
    for r in &st.rows {
        scored.entry(r.year).or_default().insert(&r.technology);
    }
    let patent_pts: Vec<(i32, f64)> = scored
        .iter()
        .filter_map(|(&y, techs)| {
            let counts: Vec<f64> =
                techs.iter().filter_map(|t| covs.get(&(y, *t)).map(|c| c.n_patents as f64)).collect();
            median(&counts).map(|md| (y, md))
        })
        .collect();
    trend.extend(trend_series(PATENT_SERIES, &patent_pts));

    let mut correlations = Vec::new();
    for (&(measure, year), vals) in &grouped {
        for covariate in Covariate::ALL {
            let (x, y): (Vec<f64>, Vec<f64>) = vals
                .iter()
                .filter_map(|(t, v)| {
                    let row = covs.get(&(year, t))?;
                    Some((*v, covariate_value(row, covariate, opts.age)?))
                })
                .unzip();
            correlations.push(CorrelationPoint { measure, covariate, year, rho: spearman(&x, &y).ok(), n: x.len() });
        }
    }

    let last = *years.last().expect("two years checked above");
    let last_covs: Vec<CovariateRow> = st.covariates.iter().filter(|c| c.year == last).cloned().collect();
    let mut sweeps = Vec::new();
    for m in st.measures() {
        let Some(vals) = grouped.get(&(m, last)) else { continue };
        for covariate in [Covariate::Patents, Covariate::Gini] {
            let points = size_class_sweep(vals, &last_covs, covariate, opts.age);
            sweeps.push(SweepCurve { measure: m, covariate, year: last, points });
        }
    }

    let gini_table = st
        .measures()
        .into_iter()
        .map(|measure| {
            let rhos: Vec<(i32, Option<f64>)> = correlations
                .iter()
                .filter(|c| c.measure == measure && c.covariate == Covariate::Gini)
                .map(|c| (c.year, c.rho))
                .collect();
            let defined: Vec<f64> = rhos.iter().filter_map(|r| r.1).collect();
            GiniRow {
                measure,
                mean_rho: (!defined.is_empty()).then(|| mean(&defined)),
                years: defined.len(),
                last_year_rho: rhos.iter().find(|r| r.0 == last).and_then(|r| r.1),
            }
        })
        .collect();

    Ok(EvaluationReport { years, trend, correlations, sweeps, gini_table, options: opts.clone() })
}

fn write_series<P: AsRef<Path>>(path: P, rows: impl IntoIterator<Item = (f64, String, f64)>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["x", "series", "value"])?;
    for (x, s, v) in rows {
        w.write_record([x.to_string(), s, v.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `report.json` and one plot-ready CSV (`x,series,value`) per
/// series family into `dir`.
pub fn write_report(report: &EvaluationReport, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut f = std::fs::File::create(dir.join("report.json"))?;
    serde_json::to_writer_pretty(&mut f, report)?;
    f.write_all(b"\n")?;

    write_series(
        dir.join("trend.csv"),
        report.trend.iter().map(|p| (f64::from(p.year), p.series.clone(), p.normalized)),
    )?;
    for covariate in Covariate::ALL {
        write_series(
            dir.join(format!("correlation_{}.csv", covariate.name())),
            report
                .correlations
                .iter()
                .filter(|c| c.covariate == covariate)
                .filter_map(|c| c.rho.map(|r| (f64::from(c.year), c.measure.to_string(), r))),
        )?;
    }
    for covariate in [Covariate::Patents, Covariate::Gini] {
        let rows = report.sweeps.iter().filter(|s| s.covariate == covariate).flat_map(|s| {
            s.points.iter().flat_map(move |p| {
                let x = p.threshold as f64;
                p.rho.map(|r| (x, s.measure.to_string(), r)).into_iter().chain(std::iter::once((
                    x,
                    format!("{}:retained-share", s.measure),
                    p.retained_share,
                )))
            })
        });
        write_series(dir.join(format!("sweep_{}.csv", covariate.name())), rows)?;
    }
    Ok(())
}
