//! The experiment harness: rating datasets, the model registry, feature
//! tables and repeated train/test evaluation.

mod config;
mod dataset;
mod experiment;
mod features;
mod registry;
mod report;

pub use config::{
    CustomModel, ModelSelection, OutputConfig, OutputFormat, ResourceConfig, TaxonomySource, WorkbenchConfig,
    DEFAULT_DIST_SLOT, SEED_ENV,
};
pub use dataset::{load_simlex, RatingDataset, RatingPair};
pub use experiment::{
    run_experiment, run_model, split_indices, ExperimentConfig, ExperimentReport, ModelResult, RegressorResult,
    RunStatus, IMPORTANCE_THRESHOLD, REPORT_FORMAT_VERSION,
};
pub use features::{assemble_design_matrix, Coverage, FeatureCoverage, FeatureTable, MissingPolicy, Providers};
pub use registry::{
    build_registry, expand_feature_group, Availability, FeatureSource, ModelSpec, SpecStatus, EMBEDDING_SLOTS,
};
pub use report::{load_json, save_csv, save_json, save_scatter, write_csv, write_scatter, CSV_COLUMNS};
