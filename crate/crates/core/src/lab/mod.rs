//! Pullback-limit constructions: extremal complete trajectories, attractor
//! samples, structure defects and the asymptotic experiment.

mod asymptotic;
mod extremal;
mod horizon;
mod report;
mod sampling;

pub use asymptotic::{asymptotic_experiment, is_non_increasing, AsymptoticRow, AsymptoticTable};
pub use extremal::{extremal_trajectories, upper_barrier, ExtremalConfig, ExtremalPair};
pub use horizon::HorizonSchedule;
pub use report::{structure_report, AttractionSetup, Probe, StructureReport};
pub use sampling::{pullback_attractor_sample, pullback_endpoints, AttractorSample, PullbackConfig, SeedFamily};
