//! C ABI over `techcx`.
//!
//! Every fallible function returns a [`TcxStatus`]; on failure the message
//! is available from [`tcx_last_error`] on the same thread. Handles are
//! opaque and must be released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use techcx::pipeline::{self, RunConfig};
use techcx::reflection::{self, IncidenceMatrix};
use techcx::structural::{self, SamplingParams};
use techcx::{stats, Error, Graph, Measure, PatentCorpus, ScoreRow};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TcxStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Io = 3,
    /// Malformed or unusable input data.
    Data = 4,
    /// The measure is undefined for this input (too small, degenerate).
    Undefined = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TcxMeasure {
    HhFine = 0,
    HhCoarse = 1,
    HhEigen = 2,
    FsModular = 3,
    Structural = 4,
}

impl From<Measure> for TcxMeasure {
    fn from(m: Measure) -> Self {
        match m {
            Measure::HhFine => TcxMeasure::HhFine,
            Measure::HhCoarse => TcxMeasure::HhCoarse,
            Measure::HhEigen => TcxMeasure::HhEigen,
            Measure::FsModular => TcxMeasure::FsModular,
            Measure::Structural => TcxMeasure::Structural,
        }
    }
}

/// One score; the technology id is fetched with [`tcx_scores_technology`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct TcxScoreRow {
    pub year: i32,
    pub measure: TcxMeasure,
    pub value: f64,
    pub n_patents: usize,
}

pub struct TcxCorpus(PatentCorpus);

pub struct TcxGraph(Graph);

pub struct TcxScores {
    rows: Vec<ScoreRow>,
    ids: Vec<CString>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn status_of(e: &Error) -> TcxStatus {
    match e {
        Error::Io(_) => TcxStatus::Io,
        _ if e.is_usage() => TcxStatus::InvalidArgument,
        Error::TechnologyTooSmall { .. }
        | Error::AllSamplesDegenerate(_)
        | Error::DegenerateSpectrum(_)
        | Error::TooFewTechnologies(_)
        | Error::EmptyIncidence
        | Error::Statistics(_) => TcxStatus::Undefined,
        _ => TcxStatus::Data,
    }
}

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), (TcxStatus, String)>) -> TcxStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TcxStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            TcxStatus::Panic
        }
    }
}

fn lib(e: Error) -> (TcxStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (TcxStatus, String) {
    (TcxStatus::NullPointer, format!("{what} is null"))
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (TcxStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (TcxStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn slice<'a, T>(p: *const T, n: usize, what: &str) -> Result<&'a [T], (TcxStatus, String)> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, n))
}

/// Message of the last failed call on this thread. The pointer stays valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tcx_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Opens a corpus cache, or parses a CSV when the path ends in `.csv`.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tcx_corpus_open(path: *const c_char, out: *mut *mut TcxCorpus) -> TcxStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let path = c_str(path, "path")?;
        let corpus = pipeline::load_corpus(Path::new(path)).map_err(lib)?;
        *out = Box::into_raw(Box::new(TcxCorpus(corpus)));
        Ok(())
    })
}

/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tcx_corpus_len(c: *const TcxCorpus) -> usize {
    c.as_ref().map_or(0, |c| c.0.len())
}

/// # Safety
/// `c` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tcx_corpus_free(c: *mut TcxCorpus) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Computes scores. `config_json` is a run configuration in JSON or null
/// for the defaults (all measures, every full window, seed 0).
///
/// # Safety
/// `corpus` must be a live handle, `config_json` null or NUL-terminated,
/// and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tcx_compute(
    corpus: *const TcxCorpus,
    config_json: *const c_char,
    out: *mut *mut TcxScores,
) -> TcxStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let corpus = &corpus.as_ref().ok_or_else(|| null("corpus"))?.0;
        let cfg = if config_json.is_null() {
            RunConfig::default()
        } else {
            RunConfig::from_json_str(c_str(config_json, "config_json")?).map_err(lib)?
        };
        let cfg = cfg.resolve(corpus).map_err(lib)?;
        let rows = pipeline::run(corpus, &cfg).map_err(lib)?.table.rows;
        let ids = rows.iter().map(|r| CString::new(r.technology.as_str()).unwrap_or_default()).collect();
        *out = Box::into_raw(Box::new(TcxScores { rows, ids }));
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tcx_scores_len(s: *const TcxScores) -> usize {
    s.as_ref().map_or(0, |s| s.rows.len())
}

/// # Safety
/// `s` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tcx_scores_get(s: *const TcxScores, i: usize, out: *mut TcxScoreRow) -> TcxStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("scores"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let r = s.rows.get(i).ok_or((TcxStatus::InvalidArgument, format!("row {i} out of range")))?;
        *out = TcxScoreRow { year: r.year, measure: r.measure.into(), value: r.value, n_patents: r.n_patents };
        Ok(())
    })
}

/// Technology id of row `i`, owned by the handle; null when out of range.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tcx_scores_technology(s: *const TcxScores, i: usize) -> *const c_char {
    s.as_ref().and_then(|s| s.ids.get(i)).map_or(ptr::null(), |c| c.as_ptr())
}

/// # Safety
/// `s` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tcx_scores_free(s: *mut TcxScores) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Graph on nodes `0..n` from `m` edges stored as `2*m` endpoint indices.
///
/// # Safety
/// `edges` must point to `2*m` values (or be null when `m` is 0) and `out`
/// must be valid.
#[no_mangle]
pub unsafe extern "C" fn tcx_graph_from_edges(
    n: usize,
    edges: *const usize,
    m: usize,
    out: *mut *mut TcxGraph,
) -> TcxStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let flat = slice(edges, 2 * m, "edges")?;
        let pairs: Vec<(usize, usize)> = flat.chunks_exact(2).map(|p| (p[0], p[1])).collect();
        if let Some(&(a, b)) = pairs.iter().find(|&&(a, b)| a >= n || b >= n) {
            return Err((TcxStatus::InvalidArgument, format!("edge ({a}, {b}) out of range for {n} nodes")));
        }
        *out = Box::into_raw(Box::new(TcxGraph(Graph::from_edges(n, &pairs))));
        Ok(())
    })
}

/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tcx_graph_node_count(g: *const TcxGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.node_count())
}

/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tcx_graph_edge_count(g: *const TcxGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.edge_count())
}

/// # Safety
/// `g` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tcx_graph_free(g: *mut TcxGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Structural complexity with default sampling parameters. Either output
/// pointer may be null.
///
/// # Safety
/// `g` must be a live handle; non-null outputs must be valid.
#[no_mangle]
pub unsafe extern "C" fn tcx_structural_score(
    g: *const TcxGraph,
    seed: u64,
    out_structural: *mut f64,
    out_nds: *mut f64,
) -> TcxStatus {
    guard(|| {
        let g = &g.as_ref().ok_or_else(|| null("graph"))?.0;
        let s = structural::nds_graph(g, &SamplingParams::with_seed(seed)).map_err(lib)?;
        if !out_structural.is_null() {
            *out_structural = s.structural;
        }
        if !out_nds.is_null() {
            *out_nds = s.nds;
        }
        Ok(())
    })
}

/// # Safety
/// `x` must point to `n` values and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tcx_gini(x: *const f64, n: usize, out: *mut f64) -> TcxStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = stats::gini(slice(x, n, "x")?).map_err(lib)?;
        Ok(())
    })
}

/// # Safety
/// `x` and `y` must point to `n` values and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tcx_spearman(x: *const f64, y: *const f64, n: usize, out: *mut f64) -> TcxStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = stats::spearman(slice(x, n, "x")?, slice(y, n, "y")?).map_err(lib)?;
        Ok(())
    })
}

/// Method of reflection on a row-major `rows x cols` 0/1 matrix. Writes
/// z-standardized technology scores to `out` (length `cols`); columns
/// dropped for having no specialized region get NaN.
///
/// # Safety
/// `cells` must point to `rows*cols` bytes and `out` to `cols` doubles.
#[no_mangle]
pub unsafe extern "C" fn tcx_kci(
    cells: *const u8,
    rows: usize,
    cols: usize,
    iterations: usize,
    out: *mut f64,
) -> TcxStatus {
    guard(|| {
        let len = rows.checked_mul(cols).ok_or((TcxStatus::InvalidArgument, "matrix too large".into()))?;
        let cells = slice(cells, len, "cells")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let m = IncidenceMatrix::from_dense(rows, cols, cells);
        let k = reflection::method_of_reflection(&m, iterations).map_err(lib)?;
        let out = std::slice::from_raw_parts_mut(out, cols);
        out.fill(f64::NAN);
        // Column labels are `c` followed by the zero-padded index.
        for (t, v) in k.technologies.iter().zip(&k.tech_scores) {
            let idx: usize = t.as_str()[1..].parse().expect("dense column label");
            out[idx] = *v;
        }
        Ok(())
    })
}
