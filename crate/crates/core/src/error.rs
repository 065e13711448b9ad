use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the library. Messages carry the module tag so the CLI
/// can print them verbatim.
#[derive(Debug, Error)]
pub enum Error {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("corpus: csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("corpus: missing required column `{0}`")]
    MissingColumn(String),

    #[error("corpus: invalid window width {0}")]
    InvalidWidth(i32),

    #[error("corpus: empty window for year {year} (width {width})")]
    EmptyWindow { year: i32, width: i32 },

    #[error("corpus: cache: {0}")]
    Cache(String),

    #[error("reflection: region/technology count matrix is all zero")]
    ZeroMatrix,

    #[error("reflection: incidence matrix is empty after dropping degenerate rows and columns")]
    EmptyIncidence,

    #[error("reflection: need at least two technologies, got {0}")]
    TooFewTechnologies(usize),

    #[error("reflection: second eigenvalue is not distinguished, spectrum {0:?}")]
    DegenerateSpectrum(Vec<f64>),

    #[error("fsmodular: no patents before cutoff year {0}")]
    NoHistory(i32),

    #[error("structural: technology {0} has no patents in the window")]
    NoPatents(String),

    #[error("structural: largest component has {size} nodes, at least {min} required")]
    TechnologyTooSmall { size: usize, min: usize },

    #[error("structural: all {0} samples were degenerate")]
    AllSamplesDegenerate(usize),

    #[error("structural: invalid sampling parameters: {0}")]
    InvalidParams(String),

    #[error("netgen: invalid spec: {0}")]
    InvalidSpec(String),

    #[error("netgen: no connected graph after {0} attempts")]
    RetriesExhausted(usize),

    #[error("evaluate: {0}")]
    Statistics(String),

    #[error("config: {0}")]
    Config(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Usage errors map to exit code 2, everything else to 1.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Config(_) | Error::InvalidParams(_) | Error::InvalidSpec(_) | Error::InvalidWidth(_))
    }
}
