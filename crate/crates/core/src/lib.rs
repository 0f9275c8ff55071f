//! User-specific pattern ranking.
//!
//! Patterns (typically association rules mined from a transaction database)
//! are described by a handful of interestingness measures. Feedback from a
//! user, given as rankings over small sets of patterns, is turned into a
//! weight per measure through an AHP comparison matrix, and patterns are
//! then ranked by the weighted sum of their scaled measure values.
//!
//! ```
//! use ahprank::{evm_weights, ComparisonMatrix};
//!
//! let a = ComparisonMatrix::from_rows(&[
//!     vec![1.0, 0.5, 0.25],
//!     vec![2.0, 1.0, 0.5],
//!     vec![4.0, 2.0, 1.0],
//! ])
//! .unwrap();
//! let evm = evm_weights(&a).unwrap();
//! assert!((evm.weights.as_slice()[2] - 4.0 / 7.0).abs() < 1e-9);
//! ```

pub mod ahp;
pub mod bench;
pub mod collection;
pub mod dataset;
pub mod error;
pub mod learner;
pub mod measures;
pub mod mining;
pub mod oracles;
pub mod ranking;
pub mod synthetic;

pub use ahp::{build_matrix, evm_weights, scale_delta, ComparisonMatrix, DeltaState, EvmSolution, WeightVector};
pub use collection::{PatternCollection, PatternRecord, ScalingMode};
pub use dataset::{Item, Itemset, TransactionDb};
pub use error::{Error, Result};
pub use learner::{
    learn_weights, rank_by_gw, run_active, run_passive, score_gw, select_query, sigma, ActiveLearner,
    ActiveOutcome, ActiveStep, FeedbackRanking, LearnerConfig, PassiveOutcome, QueryStrategy,
};
pub use measures::{measure_value, MeasureId};
pub use mining::{generate_rules, mine_frequent, AssociationRule, ContingencyTable, MinedRule, RuleConfig};
pub use oracles::{ChiEmu, EmulatorSpec, FeedbackOracle, LexEmu, RandEmu, ScriptedOracle, WithMistakes, WithSwap};
pub use ranking::{kendall_w, recall_at, recall_at_percent, spearman, PatternId, RankAssignment};
