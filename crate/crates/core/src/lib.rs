//! Word-similarity modeling workbench.
//!
//! Four families of pairwise predictors feed a cross-validated regression
//! harness:
//!
//! * [`taxonomy`]: path, Leacock-Chodorow, Wu-Palmer, Resnik, Jiang-Conrath
//!   and Lin scores over a hypernym hierarchy.
//! * [`vsm`]: LSA and skip-gram embeddings, vector files and cosines.
//! * [`qna`]: surface, affective-semantic and aesthetic word features,
//!   compared pairwise.
//! * [`regress`]: linear regression, a small MLP and extra-trees, with
//!   standardization, R² and feature importance.
//!
//! [`harness`] ties them together into the 28-model experiment.

pub mod error;
pub mod harness;
pub mod qna;
pub mod regress;
pub mod rng;
pub mod taxonomy;
pub(crate) mod table;
pub mod text;
pub mod vsm;

pub use error::{Error, Result};
pub use vsm::EmbeddingSpace;
pub use taxonomy::{IcTable, Metric, MetricScore, Polarity, Pos, Synset, Taxonomy};

