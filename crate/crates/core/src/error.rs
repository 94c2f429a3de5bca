use alloc::string::String;
use alloc::vec::Vec;

/// Errors raised by the index-construction and regression routines.
///
/// Every variant names the coordinates (entity, year, indicator or column)
/// that triggered it so callers can report the offending cell directly.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    // dataset assembly
    #[error("missing cell: entity `{entity}`, year {year}, indicator `{indicator}`")]
    MissingCell {
        entity: String,
        year: i32,
        indicator: String,
    },
    #[error("duplicate cell: entity `{entity}`, year {year}, indicator `{indicator}`")]
    DuplicateCell {
        entity: String,
        year: i32,
        indicator: String,
    },
    #[error("non-finite value at entity `{entity}`, year {year}, indicator `{indicator}`")]
    NonFiniteValue {
        entity: String,
        year: i32,
        indicator: String,
    },
    #[error("unknown indicator `{0}`")]
    UnknownIndicator(String),
    #[error("unknown entity `{0}`")]
    UnknownEntity(String),
    #[error("unknown year {0}")]
    UnknownYear(i32),
    #[error("unknown group `{0}`")]
    UnknownGroup(String),
    #[error("invalid hierarchy: {0}")]
    InvalidHierarchy(String),
    #[error("non-positive value for reciprocal indicator `{indicator}` at entity `{entity}`, year {year}")]
    NonPositiveReciprocal {
        entity: String,
        year: i32,
        indicator: String,
    },
    #[error("dataset is empty")]
    EmptyDataset,

    // normalization and weighting
    #[error("column `{0}` has a non-positive maximum")]
    NonPositiveColumnMax(String),
    #[error("column `{0}` is identically zero")]
    ZeroColumn(String),
    #[error("column `{0}` has zero mean")]
    ZeroMeanColumn(String),
    #[error("negative cell in column `{column}` at row {row}")]
    NegativeCell { column: String, row: usize },
    #[error("value {value} in column `{column}` lies outside the supplied extrema")]
    OutsideExtrema { column: String, value: f64 },
    #[error("at least two entities are required (got {0})")]
    SingleEntity(usize),
    #[error("expected a matrix at stage {expected}, got {found}")]
    WrongStage {
        expected: &'static str,
        found: &'static str,
    },
    #[error("weights are not on the unit simplex (sum {sum})")]
    InvalidWeights { sum: f64 },

    // aggregation
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    // information-loss measure
    #[error("probability vector is not on the simplex")]
    NotASimplex,
    #[error("at least two entities are required for entropy (got {0})")]
    TooFewEntities(usize),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("rank variance is zero (constant vector)")]
    ZeroRankVariance,
    #[error("shares undefined for a vector summing to zero")]
    ZeroSum,
    #[error("no aggregation methods supplied")]
    NoMethods,
    #[error("no years supplied")]
    NoYears,

    // index assembly
    #[error("index series grids do not match")]
    GridMismatch,

    // emissions
    #[error("negative quantity for `{0}`")]
    NegativeQuantity(&'static str),
    #[error("unknown grid region `{0}`")]
    UnknownGridRegion(String),

    // regression
    #[error("empty sample")]
    EmptySample,
    #[error("rank-deficient design: collinear columns {0:?}")]
    RankDeficient(Vec<String>),
    #[error("insufficient observations: {0}")]
    InsufficientData(String),
    #[error("unknown regressor `{0}`")]
    UnknownRegressor(String),
    #[error("variance components not estimable: {0}")]
    VarianceComponents(String),
    #[error("no common slope coefficients between the two estimators")]
    NoCommonCoefficients,
}

pub type Result<T> = core::result::Result<T, Error>;
