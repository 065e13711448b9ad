//! Technological complexity measures computed from patent records.
//!
//! * [`reflection`]: revealed advantage, the method of reflection at two
//!   spatial levels and its eigenvector variant.
//! * [`fsmodular`]: ease of recombination and the Fleming-Sorenson score.
//! * [`structural`]: co-occurrence graphs scored by the sampled network
//!   diversity score.
//! * [`evaluate`]: trend, correlation, size-class and concentration analyses.

pub mod corpus;
pub mod error;
pub mod evaluate;
pub mod fsmodular;
pub mod graph;
pub mod netgen;
pub mod pipeline;
pub mod reflection;
pub mod scores;
pub mod stats;
pub mod structural;

pub use corpus::{PatentCorpus, PatentRecord, PatentWindow, TechnologyId};
pub use error::{Error, Result};
pub use graph::Graph;
pub use pipeline::RunConfig;
pub use scores::{Measure, ScoreRow, ScoreTable};
