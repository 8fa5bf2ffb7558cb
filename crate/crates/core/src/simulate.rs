//! Forward model: predicted trial series for a design, soil and draft schedule.
//!
//! No quantitative model of lateral soil failure exists, so penetration is
//! taken as an empirical linear compliance: tip depth grows in proportion to
//! draft, and the tip descends along a straight line at a fixed slope. Both
//! constants are exposed. The crescent bound and failure regime at each step
//! are reported alongside so the prediction can be checked against them.

use serde::Serialize;

use crate::error::{ensure, DomainError, ParseError};
use crate::geometry::{rake_angle, thrust_angle, SpikeDesign};
use crate::soilmech::{
    critical_depth, failure_mode, max_crescent_force, CriticalDepthModel, FailureMode, ForceLaw,
    Moisture, SoilProperties,
};
use crate::trial::{LoadStep, PulleyRig, TrialLog, TrialMetadata};

/// Empirical depth-vs-draft response.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PenetrationModel {
    /// Draft per meter of tip depth, N/m.
    pub stiffness_n_per_m: f64,
    /// Tip depth gained per meter of forward tip travel.
    pub trajectory_slope: f64,
}

impl PenetrationModel {
    pub fn new(stiffness_n_per_m: f64, trajectory_slope: f64) -> Result<Self, DomainError> {
        ensure(
            "stiffness",
            stiffness_n_per_m,
            stiffness_n_per_m > 0.0 && stiffness_n_per_m.is_finite(),
            "stiffness > 0",
        )?;
        ensure(
            "trajectory_slope",
            trajectory_slope,
            trajectory_slope > 0.0 && trajectory_slope.is_finite(),
            "trajectory_slope > 0",
        )?;
        Ok(PenetrationModel {
            stiffness_n_per_m,
            trajectory_slope,
        })
    }

    /// Placeholder constants: dry sand lets the tip go deeper and more steeply
    /// for the same draft than moist sand.
    pub fn default_for(moisture: Moisture) -> Self {
        match moisture {
            Moisture::Dry => PenetrationModel {
                stiffness_n_per_m: 5000.0,
                trajectory_slope: 1.2,
            },
            Moisture::Moist => PenetrationModel {
                stiffness_n_per_m: 7000.0,
                trajectory_slope: 0.8,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulatedStep {
    pub step: u64,
    pub draft_n: f64,
    pub basket_kg: f64,
    pub depth_m: f64,
    pub thrust_deg: f64,
    pub rake_deg: f64,
    pub lift_n: f64,
    pub tip_x_m: f64,
    /// Hinge motion since the first step.
    pub motion_m: f64,
    pub critical_depth_m: f64,
    pub failure_mode: FailureMode,
    /// Largest horizontal force a crescent could supply at this depth.
    pub crescent_bound_n: f64,
}

/// Reads a draft schedule: header `step,draft_N`, then non-decreasing drafts
/// (weights are only ever added to the basket).
pub fn parse_draft_schedule(input: &str) -> Result<Vec<(u64, f64)>, ParseError> {
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    match lines.next() {
        Some((_, "step,draft_N")) => {}
        Some((n, other)) => {
            return Err(ParseError::new(
                n,
                format!("expected header `step,draft_N`, found `{other}`"),
            ))
        }
        None => return Err(ParseError::new(1, "empty draft schedule")),
    }
    let mut out: Vec<(u64, f64)> = Vec::new();
    for (n, line) in lines {
        let (a, b) = line
            .split_once(',')
            .ok_or_else(|| ParseError::new(n, "expected 2 fields"))?;
        let step: u64 = a
            .trim()
            .parse()
            .map_err(|_| ParseError::new(n, format!("step: `{a}` is not an integer")))?;
        let draft: f64 = b
            .trim()
            .parse()
            .map_err(|_| ParseError::new(n, format!("draft_N: `{b}` is not a number")))?;
        if !draft.is_finite() || draft < 0.0 {
            return Err(ParseError::new(n, "draft_N must be finite and >= 0"));
        }
        if let Some(&(ps, pd)) = out.last() {
            if step <= ps {
                return Err(ParseError::new(n, "step index must be strictly increasing"));
            }
            if draft < pd {
                return Err(ParseError::new(n, "draft_N must be non-decreasing"));
            }
        }
        out.push((step, draft));
    }
    Ok(out)
}

/// Predicts each step of a trial run under the given draft schedule.
///
/// Depth never decreases: a spike that has been driven in stays in.
pub fn simulate(
    design: &SpikeDesign,
    soil: &SoilProperties,
    rig: &PulleyRig,
    model: &PenetrationModel,
    cd_model: &CriticalDepthModel,
    schedule: &[(u64, f64)],
) -> Result<Vec<SimulatedStep>, DomainError> {
    rig.validate()?;
    let r = design.radius_m();
    let surface_cos = design.surface_thrust_deg().to_radians().cos();
    let mut depth: f64 = 0.0;
    let mut out = Vec::with_capacity(schedule.len());
    for &(step, draft) in schedule {
        ensure("draft_N", draft, draft >= 0.0, "draft_N >= 0")?;
        depth = depth.max(draft / model.stiffness_n_per_m);
        if depth >= design.max_depth_m() {
            return Err(DomainError::out_of_range(
                "draft_N",
                draft,
                format!(
                    "predicted depth {depth} m < arm reach {} m",
                    design.max_depth_m()
                ),
            ));
        }
        let thrust = thrust_angle(design, depth)?;
        let rake = rake_angle(design, depth)?;
        let tip_x = depth / model.trajectory_slope;
        let motion = tip_x + r * (surface_cos - thrust.to_radians().cos());
        let w = design.width_m();
        let rake_c = rake.min(89.999);
        out.push(SimulatedStep {
            step,
            draft_n: draft,
            basket_kg: rig.basket_for_draft(draft),
            depth_m: depth,
            thrust_deg: thrust,
            rake_deg: rake,
            lift_n: draft * thrust.to_radians().tan(),
            tip_x_m: tip_x,
            motion_m: motion,
            critical_depth_m: critical_depth(w, rake_c, cd_model)?,
            failure_mode: failure_mode(depth, w, rake_c, cd_model)?,
            crescent_bound_n: max_crescent_force(depth, w, soil, ForceLaw::Active)?.force_n,
        });
    }
    Ok(out)
}

/// The trial log an ideal instrument would have recorded for a simulation.
pub fn to_trial_log(
    steps: &[SimulatedStep],
    design: &SpikeDesign,
    site: Moisture,
    vehicle_kg: f64,
    rig: &PulleyRig,
) -> Result<TrialLog, ParseError> {
    let metadata = TrialMetadata {
        site,
        diameter_mm: design.diameter_mm().round() as u32,
        radius_m: design.radius_m(),
        hinge_m: design.hinge_height_m(),
        rake0_deg: design.initial_rake_deg(),
        vehicle_kg,
        pulley_mu: rig.friction_coefficient,
    };
    let rows = steps
        .iter()
        .map(|s| LoadStep {
            step: s.step,
            basket_kg: s.basket_kg,
            motion_mm: s.motion_m * 1000.0,
            incl_deg: s.thrust_deg,
        })
        .collect();
    TrialLog::new(metadata, rows)
}

/// Predicted series as CSV with six significant digits.
pub fn simulated_csv(steps: &[SimulatedStep]) -> String {
    use crate::format::fmt_sig;
    let mut out = String::from(
        "step,draft_N,basket_kg,depth_m,thrust_deg,rake_deg,lift_N,tip_x_m,motion_m,critical_depth_m,failure_mode,crescent_bound_N\n",
    );
    for s in steps {
        let mode = match s.failure_mode {
            FailureMode::Crescent => "crescent",
            FailureMode::Lateral => "lateral",
        };
        let nums = [
            s.draft_n,
            s.basket_kg,
            s.depth_m,
            s.thrust_deg,
            s.rake_deg,
            s.lift_n,
            s.tip_x_m,
            s.motion_m,
            s.critical_depth_m,
        ]
        .map(fmt_sig)
        .join(",");
        out.push_str(&format!(
            "{},{nums},{mode},{}\n",
            s.step,
            fmt_sig(s.crescent_bound_n)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trial::derive_series;

    fn schedule() -> Vec<(u64, f64)> {
        (0..=8).map(|i| (i, 250.0 * i as f64)).collect()
    }

    #[test]
    fn depth_follows_compliance() {
        let design = SpikeDesign::large_radius(21.0);
        let model = PenetrationModel::new(5000.0, 1.0).unwrap();
        let out = simulate(
            &design,
            &SoilProperties::dry_sand(),
            &PulleyRig::default(),
            &model,
            &CriticalDepthModel::default(),
            &schedule(),
        )
        .unwrap();
        assert_eq!(out[0].depth_m, 0.0);
        assert!((out[8].depth_m - 0.4).abs() < 1e-12);
        assert!((out[8].tip_x_m - 0.4).abs() < 1e-12);
        assert_eq!(out[8].failure_mode, FailureMode::Lateral);
        assert_eq!(out[0].failure_mode, FailureMode::Crescent);
        // crescent failure cannot carry the draft at depth
        assert!(out[8].crescent_bound_n < out[8].draft_n);
    }

    #[test]
    fn simulated_log_round_trips_through_derivation() {
        let design = SpikeDesign::large_radius(34.0);
        let rig = PulleyRig::default();
        let out = simulate(
            &design,
            &SoilProperties::moist_sand(),
            &rig,
            &PenetrationModel::default_for(Moisture::Moist),
            &CriticalDepthModel::default(),
            &schedule(),
        )
        .unwrap();
        let log = to_trial_log(&out, &design, Moisture::Moist, 50.0, &rig).unwrap();
        let s = derive_series(&log, &design, &rig).unwrap();
        for (i, step) in out.iter().enumerate() {
            assert!((s.depth_m[i] - step.depth_m).abs() < 1e-9);
            assert!((s.draft_n[i] - step.draft_n).abs() < 1e-9);
            assert!((s.tip_x_m[i] - step.tip_x_m).abs() < 1e-9);
        }
    }

    #[test]
    fn schedule_parsing() {
        let s = parse_draft_schedule("step,draft_N\n0,0\n1,500\n2,500\n").unwrap();
        assert_eq!(s, vec![(0, 0.0), (1, 500.0), (2, 500.0)]);
        let err = parse_draft_schedule("step,draft_N\n0,100\n1,50\n").unwrap_err();
        assert_eq!(err.line, 3);
        assert!(parse_draft_schedule("draft\n").is_err());
        assert!(parse_draft_schedule("step,draft_N\n0,x\n").is_err());
        assert!(parse_draft_schedule("step,draft_N\n1,1\n1,2\n").is_err());
    }

    #[test]
    fn depth_beyond_reach_is_rejected() {
        let design = SpikeDesign::small_radius();
        let model = PenetrationModel::new(100.0, 1.0).unwrap();
        let out = simulate(
            &design,
            &SoilProperties::dry_sand(),
            &PulleyRig::default(),
            &model,
            &CriticalDepthModel::default(),
            &[(0, 1000.0)],
        );
        assert!(matches!(
            out,
            Err(DomainError::OutOfRange {
                name: "draft_N",
                ..
            })
        ));
    }
}
