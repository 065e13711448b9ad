//! Long-format score table shared by the pipeline and the evaluation.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::TechnologyId;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Measure {
    #[serde(rename = "hh-fine")]
    HhFine,
    #[serde(rename = "hh-coarse")]
    HhCoarse,
    #[serde(rename = "hh-eigen")]
    HhEigen,
    #[serde(rename = "fs-modular")]
    FsModular,
    #[serde(rename = "structural")]
    Structural,
}

impl Measure {
    pub const ALL: [Measure; 5] =
        [Measure::HhFine, Measure::HhCoarse, Measure::HhEigen, Measure::FsModular, Measure::Structural];

    pub fn name(self) -> &'static str {
        match self {
            Measure::HhFine => "hh-fine",
            Measure::HhCoarse => "hh-coarse",
            Measure::HhEigen => "hh-eigen",
            Measure::FsModular => "fs-modular",
            Measure::Structural => "structural",
        }
    }

    pub fn valid_names() -> String {
        Self::ALL.iter().map(|m| m.name()).collect::<Vec<_>>().join(", ")
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown measure `{s}`; valid measures: {}", Self::valid_names())))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRow {
    pub year: i32,
    pub measure: Measure,
    #[serde(rename = "ipc4")]
    pub technology: TechnologyId,
    pub value: f64,
    pub n_patents: usize,
}

/// Per-technology covariates of one window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovariateRow {
    pub year: i32,
    pub technology: TechnologyId,
    pub n_patents: usize,
    /// Mean application year of the technology's window patents.
    pub mean_year: f64,
    pub mean_inventors: f64,
    /// `None` when no patent of the technology carries a region.
    pub gini: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ScoreTable {
    pub rows: Vec<ScoreRow>,
    pub covariates: Vec<CovariateRow>,
}

const HEADER: [&str; 5] = ["year", "measure", "ipc4", "value", "n_patents"];

impl ScoreTable {
    /// Sorts rows by (year, measure, technology) and rejects duplicates.
    pub fn normalize(&mut self) -> Result<()> {
        self.rows.sort_by(|a, b| (a.year, a.measure, &a.technology).cmp(&(b.year, b.measure, &b.technology)));
        if let Some(w) = self
            .rows
            .windows(2)
            .find(|w| (w[0].year, w[0].measure, &w[0].technology) == (w[1].year, w[1].measure, &w[1].technology))
        {
            return Err(Error::Statistics(format!(
                "duplicate score for ({}, {}, {})",
                w[0].year, w[0].measure, w[0].technology
            )));
        }
        self.covariates.sort_by(|a, b| (a.year, &a.technology).cmp(&(b.year, &b.technology)));
        Ok(())
    }

    pub fn years(&self) -> Vec<i32> {
        let mut y: Vec<i32> = self.rows.iter().map(|r| r.year).collect();
        y.sort_unstable();
        y.dedup();
        y
    }

    pub fn measures(&self) -> Vec<Measure> {
        let mut m: Vec<Measure> = self.rows.iter().map(|r| r.measure).collect();
        m.sort_unstable();
        m.dedup();
        m
    }

    /// Writes rows as CSV; the header is written only when `header` is set.
    pub fn write_csv<W: Write>(rows: &[ScoreRow], out: W, header: bool) -> Result<()> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        if header {
            w.write_record(HEADER)?;
        }
        for r in rows {
            w.write_record([
                r.year.to_string(),
                r.measure.name().to_string(),
                r.technology.to_string(),
                r.value.to_string(),
                r.n_patents.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Vec<ScoreRow>> {
        let mut reader = csv::Reader::from_reader(input);
        let mut rows = Vec::new();
        for rec in reader.deserialize() {
            rows.push(rec?);
        }
        Ok(rows)
    }
}
