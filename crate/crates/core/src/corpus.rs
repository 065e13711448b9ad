//! Patent records, moving windows and region x technology counts.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Four-character classification prefix identifying a technology.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TechnologyId(String);

impl TechnologyId {
    pub const LEN: usize = 4;

    /// Truncates a full classification code to its technology prefix.
    /// Returns `None` for codes shorter than four characters.
    pub fn of_code(code: &str) -> Option<Self> {
        let end = code.char_indices().nth(Self::LEN - 1).map(|(i, c)| i + c.len_utf8())?;
        Some(TechnologyId(code[..end].to_string()))
    }

    pub fn new(prefix: impl Into<String>) -> Self {
        TechnologyId(prefix.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for TechnologyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Coarse region code: the four-character prefix of a fine code.
pub fn coarse_region(region: &str) -> &str {
    match region.char_indices().nth(4) {
        Some((i, _)) => &region[..i],
        None => region,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatentRecord {
    pub id: String,
    pub appln_year: i32,
    /// Full classification codes, sorted and deduplicated.
    pub codes: Vec<String>,
    /// One entry per inventor.
    pub regions: Vec<String>,
}

impl PatentRecord {
    /// Builds a record, collapsing duplicate codes. Fails if no codes remain,
    /// a code is shorter than a technology prefix, or a region code is
    /// shorter than four characters.
    pub fn new(
        id: impl Into<String>,
        appln_year: i32,
        codes: impl IntoIterator<Item = impl Into<String>>,
        regions: impl IntoIterator<Item = impl Into<String>>,
    ) -> std::result::Result<Self, String> {
        let mut codes: Vec<String> =
            codes.into_iter().map(Into::into).map(|c| c.trim().to_string()).filter(|c| !c.is_empty()).collect();
        codes.sort();
        codes.dedup();
        if codes.is_empty() {
            return Err("no classification codes".into());
        }
        if let Some(bad) = codes.iter().find(|c| c.chars().count() < TechnologyId::LEN) {
            return Err(format!("code `{bad}` shorter than {} characters", TechnologyId::LEN));
        }
        let regions: Vec<String> =
            regions.into_iter().map(Into::into).map(|r| r.trim().to_string()).filter(|r| !r.is_empty()).collect();
        if let Some(bad) = regions.iter().find(|r| r.chars().count() < 4) {
            return Err(format!("region `{bad}` shorter than 4 characters"));
        }
        Ok(PatentRecord { id: id.into(), appln_year, codes, regions })
    }

    /// Distinct technologies this record belongs to, sorted.
    pub fn technologies(&self) -> BTreeSet<TechnologyId> {
        self.codes.iter().filter_map(|c| TechnologyId::of_code(c)).collect()
    }

    pub fn has_technology(&self, tech: &TechnologyId) -> bool {
        self.codes.iter().any(|c| c.starts_with(tech.as_str()))
    }

    pub fn inventor_count(&self) -> usize {
        self.regions.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatentCorpus {
    records: Vec<PatentRecord>,
    year_range: Option<(i32, i32)>,
}

impl PatentCorpus {
    pub fn new(records: Vec<PatentRecord>) -> Self {
        let year_range = records.iter().map(|r| r.appln_year).fold(None, |acc: Option<(i32, i32)>, y| match acc {
            None => Some((y, y)),
            Some((lo, hi)) => Some((lo.min(y), hi.max(y))),
        });
        PatentCorpus { records, year_range }
    }

    pub fn records(&self) -> &[PatentRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Observed `(min_year, max_year)`, `None` for an empty corpus.
    pub fn year_range(&self) -> Option<(i32, i32)> {
        self.year_range
    }

    /// Sorted set of fine region codes appearing anywhere in the corpus.
    pub fn region_universe(&self) -> Vec<String> {
        let set: BTreeSet<&str> = self.records.iter().flat_map(|r| r.regions.iter().map(String::as_str)).collect();
        set.into_iter().map(str::to_string).collect()
    }

    pub fn write_cache<W: Write>(&self, writer: W) -> Result<()> {
        ciborium::into_writer(self, writer).map_err(|e| Error::Cache(e.to_string()))
    }

    pub fn read_cache<R: Read>(reader: R) -> Result<Self> {
        let corpus: PatentCorpus = ciborium::from_reader(reader).map_err(|e| Error::Cache(e.to_string()))?;
        // Recompute the range rather than trusting the file.
        Ok(PatentCorpus::new(corpus.records))
    }
}

/// Column names and list separators of the input CSV.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CsvSchema {
    pub id: String,
    pub year: String,
    pub codes: String,
    pub regions: String,
    pub code_separator: char,
    pub region_separator: char,
}

impl Default for CsvSchema {
    fn default() -> Self {
        CsvSchema {
            id: "id".into(),
            year: "year".into(),
            codes: "codes".into(),
            regions: "regions".into(),
            code_separator: ';',
            region_separator: ';',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowError {
    /// 1-based data row number (header excluded).
    pub row: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseReport {
    pub rows: usize,
    pub records: usize,
    pub drop_count: usize,
    pub malformed: Vec<RowError>,
}

/// Parses a headed CSV into a corpus. Rows with an empty code list are
/// dropped; rows with a malformed year or code are collected in the report.
pub fn parse_corpus<R: Read>(source: R, schema: &CsvSchema) -> Result<(PatentCorpus, ParseReport)> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).flexible(true).from_reader(source);
    let headers = reader.headers()?.clone();
    let column = |name: &str| -> Result<usize> {
        headers.iter().position(|h| h.trim() == name).ok_or_else(|| Error::MissingColumn(name.to_string()))
    };
    let id_col = column(&schema.id)?;
    let year_col = column(&schema.year)?;
    let codes_col = column(&schema.codes)?;
    let regions_col = column(&schema.regions)?;

    let mut report = ParseReport::default();
    let mut records = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row_no = i + 1;
        report.rows += 1;
        let row = match row {
            Ok(row) => row,
            Err(e) => {
                report.malformed.push(RowError { row: row_no, reason: e.to_string() });
                continue;
            }
        };
        let field = |idx: usize| row.get(idx).unwrap_or("").trim();
        let codes: Vec<&str> = field(codes_col).split(schema.code_separator).filter(|c| !c.trim().is_empty()).collect();
        if codes.is_empty() {
            report.drop_count += 1;
            continue;
        }
        let year = match field(year_col).parse::<i32>() {
            Ok(y) => y,
            Err(_) => {
                report
                    .malformed
                    .push(RowError { row: row_no, reason: format!("malformed year `{}`", field(year_col)) });
                continue;
            }
        };
        let regions = field(regions_col).split(schema.region_separator);
        match PatentRecord::new(field(id_col), year, codes, regions) {
            Ok(rec) => records.push(rec),
            Err(reason) => report.malformed.push(RowError { row: row_no, reason }),
        }
    }
    report.records = records.len();
    Ok((PatentCorpus::new(records), report))
}

/// Records with application year in `[anchor_year - width + 1, anchor_year]`.
#[derive(Debug, Clone)]
pub struct PatentWindow<'a> {
    pub anchor_year: i32,
    pub width: i32,
    pub records: Vec<&'a PatentRecord>,
}

impl<'a> PatentWindow<'a> {
    pub fn first_year(&self) -> i32 {
        self.anchor_year - self.width + 1
    }

    /// Window patents grouped by technology; a patent appears under every
    /// technology it has a code in.
    pub fn by_technology(&self) -> BTreeMap<TechnologyId, Vec<&'a PatentRecord>> {
        let mut map: BTreeMap<TechnologyId, Vec<&'a PatentRecord>> = BTreeMap::new();
        for &rec in &self.records {
            for tech in rec.technologies() {
                map.entry(tech).or_default().push(rec);
            }
        }
        map
    }

    pub fn technologies(&self) -> BTreeSet<TechnologyId> {
        self.records.iter().flat_map(|r| r.technologies()).collect()
    }
}

pub fn window(corpus: &PatentCorpus, t: i32, width: i32) -> Result<PatentWindow<'_>> {
    if width < 1 {
        return Err(Error::InvalidWidth(width));
    }
    let lo = t - width + 1;
    let records: Vec<&PatentRecord> = corpus.records.iter().filter(|r| (lo..=t).contains(&r.appln_year)).collect();
    if records.is_empty() {
        return Err(Error::EmptyWindow { year: t, width });
    }
    Ok(PatentWindow { anchor_year: t, width, records })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpatialLevel {
    /// Full region code.
    Fine,
    /// Four-character region prefix.
    Coarse,
}

/// Patent counts per (region, technology) with multiple counting across
/// inventors and across a record's distinct technologies.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionTechMatrix {
    pub rows: Vec<String>,
    pub cols: Vec<TechnologyId>,
    pub level: SpatialLevel,
    counts: Vec<u64>,
}

impl RegionTechMatrix {
    /// Builds a matrix from row-major counts.
    pub fn from_counts(rows: Vec<String>, cols: Vec<TechnologyId>, level: SpatialLevel, counts: Vec<u64>) -> Self {
        assert_eq!(rows.len() * cols.len(), counts.len(), "count matrix shape mismatch");
        RegionTechMatrix { rows, cols, level, counts }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.counts[r * self.cols.len() + c]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Count by names, zero if either is absent.
    pub fn count(&self, region: &str, tech: &str) -> u64 {
        let r = self.rows.iter().position(|x| x == region);
        let c = self.cols.iter().position(|x| x.as_str() == tech);
        match (r, c) {
            (Some(r), Some(c)) => self.get(r, c),
            _ => 0,
        }
    }
}

pub fn region_tech_counts(w: &PatentWindow<'_>, level: SpatialLevel) -> RegionTechMatrix {
    let key = |region: &str| -> String {
        match level {
            SpatialLevel::Fine => region.to_string(),
            SpatialLevel::Coarse => coarse_region(region).to_string(),
        }
    };
    let mut cells: BTreeMap<(String, TechnologyId), u64> = BTreeMap::new();
    let mut rows = BTreeSet::new();
    let mut cols = BTreeSet::new();
    for rec in w.records.iter().filter(|r| !r.regions.is_empty()) {
        let techs = rec.technologies();
        for region in &rec.regions {
            let region = key(region);
            rows.insert(region.clone());
            for tech in &techs {
                cols.insert(tech.clone());
                *cells.entry((region.clone(), tech.clone())).or_default() += 1;
            }
        }
    }
    let rows: Vec<String> = rows.into_iter().collect();
    let cols: Vec<TechnologyId> = cols.into_iter().collect();
    let col_index: BTreeMap<&TechnologyId, usize> = cols.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let row_index: BTreeMap<&String, usize> = rows.iter().enumerate().map(|(i, r)| (r, i)).collect();
    let mut counts = vec![0u64; rows.len() * cols.len()];
    for ((region, tech), n) in &cells {
        counts[row_index[region] * cols.len() + col_index[tech]] = *n;
    }
    RegionTechMatrix { rows, cols, level, counts }
}
