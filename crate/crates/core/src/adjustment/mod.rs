//! Identifiability, adjustment sets and effect estimation on a learned
//! CPDAG (or the possibly ancestral part of one).

mod estimate;
pub(crate) mod sets;

use thiserror::Error;

pub use estimate::{
    estimate_all_pairs, estimate_effect, estimate_effect_ols, intervention_distance, possible_effects_local, total_effects_from,
    true_total_effect, write_effect_report, EffectEstimate,
};
pub use sets::{
    canonical_adjustment, causal_nodes, forbidden_set, has_possibly_directed_path, is_amenable,
    optimal_adjustment, parent_adjustment,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AdjustmentError {
    #[error("effect of {cause} on {outcome} is not identifiable from the graph")]
    NotIdentifiable { cause: usize, outcome: usize },
    #[error("vertex {0} has an edge that is not directed")]
    UndirectedIncidence(usize),
    #[error("regression design is singular")]
    SingularDesign,
    #[error("{n} samples are too few for {covariates} covariates")]
    InsufficientSamples { n: usize, covariates: usize },
    #[error("no estimate for the pair ({cause}, {outcome})")]
    MissingPair { cause: usize, outcome: usize },
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("i/o error: {0}")]
    Io(String),
}
