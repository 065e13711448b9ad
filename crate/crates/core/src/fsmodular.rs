//! Ease of recombination, per-patent interdependence and the per-technology
//! combinatorial (Fleming-Sorenson) complexity score.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::corpus::{PatentCorpus, PatentRecord, PatentWindow, TechnologyId};
use crate::error::{Error, Result};

/// Counts behind one ease value: `partners / patents`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EaseEntry {
    /// Distinct codes ever co-listed with this code.
    pub partners: u64,
    /// History patents listing this code.
    pub patents: u64,
}

impl EaseEntry {
    pub fn value(&self) -> f64 {
        self.partners as f64 / self.patents as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EaseTable {
    pub history_cutoff_year: i32,
    entries: BTreeMap<String, EaseEntry>,
}

impl EaseTable {
    pub fn entry(&self, code: &str) -> Option<EaseEntry> {
        self.entries.get(code).copied()
    }

    pub fn ease(&self, code: &str) -> Option<f64> {
        self.entry(code).map(|e| e.value())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, EaseEntry)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

/// First year whose patents are excluded from the ease history of the
/// window anchored at `t`: everything strictly before the window start.
pub fn history_cutoff(t: i32, width: i32) -> i32 {
    t - width + 1
}

/// Ease of recombination from all patents with year `< cutoff`.
pub fn ease_table(history: &PatentCorpus, cutoff: i32) -> Result<EaseTable> {
    let mut partners: HashMap<&str, BTreeSet<&str>> = HashMap::new();
    let mut patents: HashMap<&str, u64> = HashMap::new();
    let mut seen = false;
    for rec in history.records().iter().filter(|r| r.appln_year < cutoff) {
        seen = true;
        for code in &rec.codes {
            *patents.entry(code).or_default() += 1;
            let set = partners.entry(code).or_default();
            set.extend(rec.codes.iter().map(String::as_str).filter(|c| c != code));
        }
    }
    if !seen {
        return Err(Error::NoHistory(cutoff));
    }
    let entries = patents
        .into_iter()
        .map(|(code, n)| {
            let p = partners.get(code).map_or(0, |s| s.len() as u64);
            (code.to_string(), EaseEntry { partners: p, patents: n })
        })
        .collect();
    Ok(EaseTable { history_cutoff_year: cutoff, entries })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatentInterdependence {
    pub id: String,
    /// `subclass_count / ease_sum`.
    pub k: f64,
    pub subclass_count: usize,
    /// Sum of ease over the codes known to the table.
    pub ease_sum: f64,
    /// Codes that had an ease value.
    pub known_codes: usize,
}

/// Interdependence of one patent. `None` when none of its codes is in the
/// table or their ease values sum to zero.
pub fn patent_k(l: &PatentRecord, e: &EaseTable) -> Option<PatentInterdependence> {
    let known: Vec<f64> = l.codes.iter().filter_map(|c| e.ease(c)).collect();
    let ease_sum: f64 = known.iter().sum();
    if known.is_empty() || ease_sum <= 0.0 {
        return None;
    }
    Some(PatentInterdependence {
        id: l.id.clone(),
        k: l.codes.len() as f64 / ease_sum,
        subclass_count: l.codes.len(),
        ease_sum,
        known_codes: known.len(),
    })
}

/// What `N` divides the interdependence by.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FsDenominator {
    /// The patent's own distinct-code count; the score becomes `1 / sum(E)`.
    #[default]
    CodeCount,
    /// Number of window patents sharing at least one code with the patent.
    PatentsWithCodes,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FsTechScore {
    pub value: f64,
    /// Patents with a defined score that entered the mean.
    pub defined_patents: usize,
    pub patents: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FsScoreTable {
    pub year: i32,
    pub scores: BTreeMap<TechnologyId, FsTechScore>,
    /// Technologies present in the window without any defined patent.
    pub missing: Vec<TechnologyId>,
}

/// Per-patent score `K / N`, averaged over each technology's window patents.
pub fn fs_scores(w: &PatentWindow<'_>, e: &EaseTable, denominator: FsDenominator) -> FsScoreTable {
    let n_of = |rec: &PatentRecord| -> f64 {
        match denominator {
            FsDenominator::CodeCount => rec.codes.len() as f64,
            FsDenominator::PatentsWithCodes => {
                // Patents sharing any code with `rec`, including itself.
                let codes: BTreeSet<&str> = rec.codes.iter().map(String::as_str).collect();
                w.records.iter().filter(|o| o.codes.iter().any(|c| codes.contains(c.as_str()))).count() as f64
            }
        }
    };

    let mut scores = BTreeMap::new();
    let mut missing = Vec::new();
    for (tech, patents) in w.by_technology() {
        let defined: Vec<f64> = patents.iter().filter_map(|rec| patent_k(rec, e).map(|k| k.k / n_of(rec))).collect();
        if defined.is_empty() {
            missing.push(tech);
            continue;
        }
        let value = defined.iter().sum::<f64>() / defined.len() as f64;
        scores.insert(tech, FsTechScore { value, defined_patents: defined.len(), patents: patents.len() });
    }
    FsScoreTable { year: w.anchor_year, scores, missing }
}
