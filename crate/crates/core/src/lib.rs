//! Total-Variation based (BTV) priors for the skewness parameter of
//! skew-symmetric models, with adaptive MCMC posterior sampling, Savage–Dickey
//! Bayes factors and Monte Carlo studies of frequentist properties.
// `!(x > 0.0)` deliberately rejects NaN along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod base_dists;
pub mod error;
pub mod inference;
pub mod mcmc;
pub mod perturbation;
pub mod priors;
pub mod rng;
pub mod simstudy;
pub mod skew_symmetric;
pub mod stats;

pub use base_dists::{QuadratureSpec, SymmetricBase};
pub use error::{Error, Result};
pub use inference::{mle_fit, summarize, FitReport, MleFit};
pub use mcmc::{run_chain, ChainConfig, Parameter, PosteriorChain, PosteriorSpec};
pub use perturbation::{MeasureMode, PerturbationMeasure};
pub use priors::{elicit_beta, BtvPrior, LambdaPrior, PriorSpec};
pub use rng::CounterRng;
pub use simstudy::{emit_table, parse_table, run_study, StudyConfig, StudyReport, StudyRow, TableFormat};
pub use skew_symmetric::{SkewFamily, SkewSymmetricModel, TwoPieceModel};
