//! The analysis report for one trial and its plot-ready series.
//!
//! Every number is rounded to six significant digits before serialisation so
//! that repeated runs produce byte-identical files.

use serde::Serialize;

use crate::error::DomainError;
use crate::format::{fmt_sig, round_sig};
use crate::geometry::SpikeDesign;
use crate::trial::{
    derive_series, detect_landslides, estimate_effective_application, landslide_filter,
    stability_check, tractive_efficiency, LandslideThresholds, PulleyRig, TrialLog, TrialMetadata,
    VehicleConfig,
};

/// Knobs for [`analyze`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisOptions {
    /// Distance the blade is pushed once the spike is set, for efficiency.
    pub push_distance_m: f64,
    pub thresholds: LandslideThresholds,
    /// First step (by position) at which the vehicle was seen to lift off;
    /// `None` means it stayed grounded throughout.
    pub observed_liftoff_from: Option<usize>,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            push_distance_m: 2.0,
            thresholds: LandslideThresholds::default(),
            observed_liftoff_from: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportSeries {
    pub step: Vec<u64>,
    #[serde(rename = "draft_N")]
    pub draft_n: Vec<f64>,
    pub motion_m: Vec<f64>,
    pub depth_m: Vec<f64>,
    pub thrust_deg: Vec<f64>,
    #[serde(rename = "lift_N")]
    pub lift_n: Vec<f64>,
    pub tip_x_m: Vec<f64>,
    #[serde(rename = "cumulative_work_J")]
    pub cumulative_work_j: Vec<f64>,
    pub airborne: Vec<bool>,
    pub filtered_depth_m: Vec<f64>,
    pub filtered_thrust_deg: Vec<f64>,
    #[serde(rename = "filtered_lift_N")]
    pub filtered_lift_n: Vec<f64>,
    #[serde(rename = "stability_margin_N")]
    pub stability_margin_n: Vec<f64>,
    pub liftoff: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stability {
    #[serde(rename = "weight_N")]
    pub weight_n: f64,
    pub first_liftoff_step: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    #[serde(rename = "max_draft_N")]
    pub max_draft_n: Option<f64>,
    pub final_depth_m: Option<f64>,
    #[serde(rename = "penetration_work_J")]
    pub penetration_work_j: Option<f64>,
    pub push_distance_m: f64,
    pub efficiency_at_push: Option<f64>,
    pub stability: Stability,
    pub kappa_estimate: Option<f64>,
    pub kappa_inconsistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub metadata: TrialMetadata,
    pub series: ReportSeries,
    pub events: Vec<usize>,
    pub summary: Summary,
}

fn rounded(v: &[f64]) -> Vec<f64> {
    v.iter().copied().map(round_sig).collect()
}

/// Runs the full reduction of a trial: derive, detect and filter landslides,
/// integrate work, check stability, estimate the effective draft application.
pub fn analyze(log: &TrialLog, options: &AnalysisOptions) -> Result<Report, DomainError> {
    let design: SpikeDesign = log.metadata.design()?;
    let rig: PulleyRig = log.metadata.rig()?;
    let vehicle: VehicleConfig = log.metadata.vehicle()?;

    let series = derive_series(log, &design, &rig)?;
    let events = detect_landslides(&series, &options.thresholds);
    let filtered = landslide_filter(&series, &events)?;
    let stability = stability_check(&series, &vehicle);

    let n = series.len();
    let last = n.checked_sub(1);
    let observed: Vec<bool> = (0..n)
        .map(|i| options.observed_liftoff_from.is_some_and(|k| i >= k))
        .collect();
    let kappa = if n == 0 {
        None
    } else {
        Some(estimate_effective_application(
            &series, &design, &vehicle, &observed,
        )?)
    };
    let efficiency = last.and_then(|i| {
        tractive_efficiency(
            series.cumulative_work_j[i],
            series.draft_n[i],
            options.push_distance_m,
        )
        .ok()
    });

    let summary = Summary {
        max_draft_n: series
            .draft_n
            .iter()
            .copied()
            .reduce(f64::max)
            .map(round_sig),
        final_depth_m: last.map(|i| round_sig(filtered.depth_m[i])),
        penetration_work_j: last.map(|i| round_sig(series.cumulative_work_j[i])),
        push_distance_m: round_sig(options.push_distance_m),
        efficiency_at_push: efficiency.map(round_sig),
        stability: Stability {
            weight_n: round_sig(vehicle.weight_n()),
            first_liftoff_step: stability
                .iter()
                .position(|s| s.liftoff)
                .map(|i| series.step[i]),
        },
        kappa_estimate: kappa.map(|k| round_sig(k.kappa)),
        kappa_inconsistent: kappa.is_some_and(|k| k.inconsistent),
    };

    Ok(Report {
        metadata: log.metadata,
        series: ReportSeries {
            step: series.step.clone(),
            draft_n: rounded(&series.draft_n),
            motion_m: rounded(&series.motion_m),
            depth_m: rounded(&series.depth_m),
            thrust_deg: rounded(&series.thrust_deg),
            lift_n: rounded(&series.lift_n),
            tip_x_m: rounded(&series.tip_x_m),
            cumulative_work_j: rounded(&series.cumulative_work_j),
            airborne: series.airborne.clone(),
            filtered_depth_m: rounded(&filtered.depth_m),
            filtered_thrust_deg: rounded(&filtered.thrust_deg),
            filtered_lift_n: rounded(&filtered.lift_n),
            stability_margin_n: stability.iter().map(|s| round_sig(s.margin_n)).collect(),
            liftoff: stability.iter().map(|s| s.liftoff).collect(),
        },
        events,
        summary,
    })
}

impl Report {
    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    /// Plot-ready CSV files as `(file name, contents)`.
    pub fn figure_csvs(&self) -> Vec<(&'static str, String)> {
        let s = &self.series;
        let w = self.summary.stability.weight_n;
        vec![
            (
                "depth_raw.csv",
                csv(&["draft_N", "depth_m"], &[&s.draft_n, &s.depth_m]),
            ),
            (
                "depth_filtered.csv",
                csv(&["draft_N", "depth_m"], &[&s.draft_n, &s.filtered_depth_m]),
            ),
            (
                "tip_trajectory.csv",
                csv(&["tip_x_m", "depth_m"], &[&s.tip_x_m, &s.depth_m]),
            ),
            (
                "work.csv",
                csv(
                    &["draft_N", "cumulative_work_J"],
                    &[&s.draft_n, &s.cumulative_work_j],
                ),
            ),
            (
                "thrust.csv",
                csv(&["draft_N", "thrust_deg"], &[&s.draft_n, &s.thrust_deg]),
            ),
            (
                "lift.csv",
                csv(
                    &["draft_N", "lift_N", "weight_N"],
                    &[&s.draft_n, &s.lift_n, &vec![w; s.step.len()]],
                ),
            ),
        ]
    }
}

/// Column-major CSV with six significant digits.
pub fn csv(header: &[&str], columns: &[&[f64]]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    let rows = columns.first().map_or(0, |c| c.len());
    for i in 0..rows {
        let row: Vec<String> = columns.iter().map(|c| fmt_sig(c[i])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
