//! Predictors for arbitrary families of finite-alphabet processes.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`process`] | log-domain process measures, mixtures, finite-horizon extensions |
//! | [`divergence`] | expected cumulative KL `d_n`, total variation, entropy profiles |
//! | [`nml`] | maximum-likelihood coefficients, NML tables, the predictor `ρ_c` |
//! | [`capacity`] | Blahut–Arimoto capacity, minimax oracle, the predictor `ρ_C` |
//! | [`cover`] | likelihood-ratio sets, greedy covers and the mixture `ν` |
//! | [`experiments`] | seeded, budget-guarded scenarios writing CSV reports |
//!
//! All logarithms are base 2.

pub mod capacity;
pub mod cover;
pub mod divergence;
pub mod experiments;
pub mod error;
pub mod logprob;
pub mod nml;
pub mod process;
pub mod seq;
pub mod weights;

pub use error::{Error, Result};
pub use logprob::LogProb;
pub use process::Measure;
pub use seq::{Alphabet, Seq, Symbol};
pub use weights::WeightScheme;
