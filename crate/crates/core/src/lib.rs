//! Traction modeling for articulated interlocking spikes on granular soil.
//!
//! The crate is split by concern:
//!
//! - [`geometry`]: rigid-body kinematics of the hinged lever arm (thrust and
//!   rake angles, penetration depth, tip trajectory, hinge lift).
//! - [`soilmech`]: crescent wedge equilibrium above the critical depth and a
//!   parametric critical-depth classifier.
//! - [`trial`]: ingestion and reduction of load-step trial logs (draft
//!   calibration, landslide filtering, penetration work, stability).
//! - [`design`]: feasibility checks and exhaustive grid search over spike
//!   designs.
//! - [`report`]: the JSON analysis report and plot-ready series.
//!
//! Angles cross every public boundary in degrees; lengths are meters unless a
//! field name says otherwise.

pub mod design;
pub mod error;
pub mod format;
pub mod geometry;
pub mod report;
pub mod simulate;
pub mod soilmech;
pub mod trial;

pub use design::{
    evaluate_design, grid_search, pull_weight_ratio, rank_designs, DesignConstraints,
    DesignEvaluation, DesignSpace, ParamRange, RankedDesign, SearchOutcome, Violation,
};
pub use error::{DomainError, ParseError};
pub use geometry::{
    depth_from_inclination, lifting_force, penetration_window_margin, rake_angle, thrust_angle,
    tip_displacement, SpikeDesign, SpikeState, TipDepth, TipDisplacement, WindowMargin,
};
pub use soilmech::{
    crescent_force, crescent_volume, critical_depth, failure_mode, max_crescent_force,
    max_crescent_force_in, BetaScan, CrescentResult, CriticalDepthModel, FailureMode, ForceLaw,
    Moisture, SoilProperties,
};
pub use trial::{
    derive_series, detect_landslides, draft_from_basket, estimate_effective_application,
    landslide_filter, parse_trial_log, penetration_work, stability_check, tractive_efficiency,
    write_trial_log, ApplicationEstimate, DerivedSeries, LandslideThresholds, LoadStep, PulleyRig,
    Site, StabilityStep, TrialLog, TrialMetadata, VehicleConfig,
};

/// Standard gravitational acceleration used as the default everywhere, m/s².
pub const STANDARD_GRAVITY: f64 = 9.81;
