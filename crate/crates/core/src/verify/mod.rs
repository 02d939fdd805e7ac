//! Certifiers: each samples the relevant inequality over a map
//! battery and returns a replayable [`VerificationReport`].

mod inequalities;
mod report;
mod theorem1;
mod theorem2;
mod theorem3;
mod theorem_d;

pub use inequalities::{check_proof_inequalities, critical_point_margin, radius_margin};
pub use report::{
    point_from_repr, point_repr, PointRepr, ReportParams, SampleInputs, SampleRow, Statistics,
    Tally, Tolerances, VerificationReport, Violation, MAX_STORED_VIOLATIONS,
};
pub use theorem1::{
    check_theorem1, lipschitz_ratio, replay_theorem1, sharpness_parameter, sharpness_run,
    SharpnessOutcome, Theorem1Options,
};
pub use theorem2::{
    check_theorem2, density_derivatives_disk, disk_extremal, polar_grid, Theorem2Options,
    CRITICAL_THRESHOLD,
};
pub use theorem3::{
    check_theorem3, hypothesis_scan, k_constant, r_cap, rotated_disk_automorphism, tau,
    HypothesisBudget, HypothesisWitness, Theorem3Hypothesis, Theorem3Options,
};
pub use theorem_d::{check_theorem_d, TheoremDOptions};
