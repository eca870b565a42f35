//! Temporal link prediction with popularity-boosted structural perturbation.
//!
//! The pipeline: parse a timestamped edge list ([`graph`]), split it by time
//! into training and probe sets and measure node popularity ([`split`]), build
//! score matrices with the spectral methods ([`spectral`]) or the classical
//! indices ([`baselines`]), and evaluate them with Precision@L
//! ([`evaluation`]).

pub mod baselines;
pub mod error;
pub mod evaluation;
pub mod graph;
pub mod spectral;
pub mod split;
pub mod synthetic;

pub use baselines::{KatzConfig, WalkConfig};
pub use error::{Error, ErrorKind, Result};
pub use evaluation::{ExperimentConfig, Method, PrecisionReport, RankedCandidates, ScoreAveraging};
pub use graph::{AdjacencyView, EdgeFormat, RawEvent, TemporalEventStream, TemporalGraph, TimedEdge};
pub use spectral::{PerturbationSample, ScoreMatrix, SpectralModel};
pub use split::{PopularityVector, SplitConfig, TrainProbeSplit};
