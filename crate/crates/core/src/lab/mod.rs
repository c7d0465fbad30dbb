//! Verification harness: exact and sampled success probabilities, the two
//! inequalities between them, solver error measurement, and CSV experiments
//! over a fixed-seed corpus.

mod config;
mod experiments;
mod lemmas;
mod prob;
mod theorem;

pub use config::LabConfig;
pub use experiments::{all_hold, generate_corpus, run_experiment, write_csv, CorpusEntry, Experiment, Row, CSV_HEADER};
pub use lemmas::{
    exact_success_prob, exact_success_prob_with_cap, monte_carlo_success_prob, verify_lemma_conditional,
    verify_lemma_conditional_with_cap, verify_lemma_ratio, verify_lemma_ratio_sampled, verify_lemma_ratio_with_cap,
    LemmaReport, Side, DEFAULT_EXACT_CAP,
};
pub use prob::{hoeffding_half_width, hoeffding_samples, EstimateKind, ProbEstimate, Verdict};
pub use theorem::{
    exact_bottom_prob, exact_theorem_error, measure_theorem_error, measure_trivial_sampler, run_solver, RunCounts,
    TheoremErrorReport,
};
