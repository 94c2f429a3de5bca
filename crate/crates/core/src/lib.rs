//! Composite-indicator construction and panel regression.
//!
//! The pipeline turns a panel of raw indicators into a two-level composite
//! index: indicators are min–max normalized against global extrema,
//! weighted by their coefficient of variation, and aggregated with one of
//! five methods (SAW, WP, WDI2, WDI∞, TOPSIS). The method is chosen by the
//! Shannon–Spearman information-loss measure and reused to aggregate the
//! group scores into the top index. A panel-regression module (pooled OLS,
//! fixed and random effects, Hausman test) analyses drivers of the result.
//!
//! The crate is `no_std` and needs only `alloc`. File formats and the
//! command-line front end live in the `compind` crate.

#![no_std]

extern crate alloc;

pub mod aggregate;
pub mod dist;
pub mod emissions;
pub mod error;
pub mod model;
pub mod panel;
pub mod pipeline;
pub mod ssm;
pub mod stats;
pub mod transform;
pub mod warning;

pub use aggregate::{aggregate, AggregationMethod, CiVector};
pub use error::{Error, Result};
pub use model::{
    apply_prep, slice_year, validate_dataset, DecisionMatrix, GroupSpec, HierarchySpec, IndicatorSpec, PanelDataset,
    Polarity, Prep, RawRecord, Stage,
};
pub use pipeline::{build_index, summarize, IndexRun, IndexSeries, PipelineConfig, SsmInput, SummaryTable};
pub use ssm::SsmReport;
pub use transform::{GlobalExtrema, Normalization, WeightVector, Weighting};
pub use warning::Warning;
