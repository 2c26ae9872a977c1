//! Closeness, absorbing families and the absorbing pipeline.

pub mod alpha;
pub mod closeness;
pub mod family;
pub mod pipeline;

pub use alpha::{alpha_good_pair, AlphaAnalysis, AlphaPair};
pub use closeness::{
    closed_partition, closeness_count, closeness_graph, compose_witnesses, find_witness, good_triples,
    tau_from_fraction, ClosedPartition, ClosenessGraph, ClosenessWitness,
};
pub use family::{
    absorb, absorber_count, absorber_size, absorbing_sets_for, build_absorbing_family, AbsorbingFamily,
    AbsorbingSet, FamilyConfig, FamilyMode,
};
pub use pipeline::{run_absorption_pipeline, PipelineConfig, PipelineReport, Step1Strategy, StepStatus};
