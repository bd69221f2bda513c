//! Sufficiency and ancillarity structure of finite discrete statistical models,
//! computed in exact rational arithmetic.
//!
//! A model is a matrix of probabilities `P_theta({x})`; a statistic is the
//! partition of sample points it induces. From there the crate derives the
//! minimal sufficient partition, every ancillary partition and its taxonomy
//! (maximal, minimal, laminal, stable), the conforming-events algebra, and the
//! evidence functions that reduce an inference base `(model, x)` by minimal
//! sufficiency alone or by sufficiency followed by conditioning on the
//! laminal ancillary.

pub mod ancillary;
pub mod corpus;
pub mod error;
pub mod evidence;
pub mod format;
pub mod model;
pub mod partition;
pub mod rational;
pub mod report;
pub mod reports;
pub mod sufficiency;

pub use ancillary::{
    ancillaries, ancillary_events, classify, conditional_mle_table, gamma0, instability_witness,
    is_ancillary, is_stable, is_strong, laminal, maximal_ancillaries, minimal_ancillaries, mle,
    AncillaryClassification, AncillaryEngine, InstabilityWitness, Limits,
};
pub use error::{Error, Result};
pub use evidence::{
    audit_relation, ev_sc, ev_sc_is_idempotent, sc_conditionals_s_equivalent, sc_equivalent,
    Relation, RelationAuditReport,
};
pub use format::{parse_model, render_model};
pub use model::{
    build_model, example1_model, example1_model_with, example2_model, FiniteModel, InferenceBase,
    Weights,
};
pub use partition::{enumerate_partitions, join, meet, Partition};
pub use rational::Rational;
pub use report::ReportDocument;
pub use sufficiency::{
    ev_ms, model_of_statistic, mss_partition, s_equivalent, EvidenceBase, Relabeling,
};
