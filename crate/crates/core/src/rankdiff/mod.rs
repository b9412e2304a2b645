//! Rank analytics over accuracy tables: rank differences under
//! corruption, first-order flip thresholds and ambiguity sets.

mod profile;
mod ranks;
mod table;

pub use profile::{
    ambiguous_set, fit_profile, flip_threshold, margin_holds, pairwise_winner, predicted_rankdiff,
    FlipPrediction, RobustnessProfile, Winner,
};
pub use ranks::{
    compute_ranks, rank_diff, rank_values, Column, ModelRecord, RankReport, RankRow, TIE_POLICY,
};
pub use table::read_table;
