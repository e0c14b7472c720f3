use std::path::PathBuf;

use thiserror::Error;

use crate::PointId;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrameError {
    #[error("normal has non-finite components")]
    NonFinite,
    #[error("normal is not unit length (|n| = {0})")]
    NotUnit(f64),
    #[error("normal is parallel to the time axis")]
    TimeAxisNormal,
    #[error("normal lies in the xy-plane; use the vertical frame")]
    VerticalNormal,
    #[error("vertical frame requested for a normal with n3 = {0}")]
    NotVertical(f64),
    #[error("rows are not orthonormal (deviation {0:e})")]
    NotOrthonormal(f64),
    #[error("frame is not right-handed (det = {0})")]
    LeftHanded(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StencilError {
    #[error("child location coincides with a parent")]
    CoincidentParent,
    #[error("stencil directions are colinear (|det B| = {0:e})")]
    Colinear(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("negative discriminant {0:e}: no real height")]
    NegativeDiscriminant(f64),
    #[error("quadratic degenerates with zero leading and linear coefficients")]
    Degenerate,
    #[error("iterative solver did not converge in {iterations} iterations (last step {last_step:e})")]
    NoConvergence { iterations: usize, last_step: f64 },
    #[error("iterate is not finite")]
    NonFinite,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FieldError {
    #[error("speed is undefined at the origin for the rose example")]
    UndefinedAtOrigin,
    #[error("time {t} is outside the validity window [0, {limit}] of the exact solution")]
    OutsideValidity { t: f64, limit: f64 },
    #[error("at least 3 samples per front component are required (got {0})")]
    TooFewSamples(usize),
    #[error("unknown example '{0}'")]
    UnknownExample(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BookError {
    #[error("point {0} is not in the book")]
    MissingNode(PointId),
    #[error("point {id} has {degree} incident segments, expected 2")]
    WrongDegree { id: PointId, degree: usize },
    #[error("odd number of hanging nodes ({0}); front topology is corrupt")]
    OddHangingCount(usize),
    #[error("clean did not reach a fixed point after {0} passes")]
    NoFixedPoint(usize),
}

#[derive(Debug, Error)]
pub enum MarchError {
    #[error("at least 3 initial samples are required (got {0})")]
    TooFewSamples(usize),
    #[error("initial samples {0} and {1} coincide")]
    DuplicateSamples(usize, usize),
    #[error("initial sample {0} has a non-unit normal")]
    BadNormal(usize),
    #[error("final time must be positive (got {0})")]
    BadFinalTime(f64),
    #[error("book keeping failed: {0}")]
    Book(#[from] BookError),
    #[error("invariant violated at iteration {iteration}: {message}")]
    Invariant { iteration: usize, message: String },
}

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("error set is empty")]
    Empty,
    #[error("at least {needed} samples are required for a fit (got {got})")]
    TooFewPairs { needed: usize, got: usize },
    #[error("fit inputs must be positive and finite")]
    NonPositive,
    #[error("time {t} is outside the covered range [{lo}, {hi}]")]
    OutsideCoverage { t: f64, lo: f64, hi: f64 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Error)]
pub enum FmmError {
    #[error("speed must be positive on the domain (found {0})")]
    NonPositiveSpeed(f64),
    #[error("grid spacing must be positive")]
    BadSpacing,
}

#[derive(Debug, Error)]
pub enum StudyError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    March(#[from] MarchError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Fmm(#[from] FmmError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
