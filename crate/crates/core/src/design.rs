//! Spike design feasibility and exhaustive search.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure, DomainError};
use crate::geometry::{penetration_window_margin, rake_angle, thrust_angle, SpikeDesign};
use crate::soilmech::{
    critical_depth, max_crescent_force, CriticalDepthModel, ForceLaw, SoilProperties,
};

/// Limits a design must meet at its design depth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DesignConstraints {
    /// Upper bound on thrust angle; 25° lets a vehicle pull about twice its weight.
    pub max_thrust_deg: f64,
    pub window_low_deg: f64,
    pub window_high_deg: f64,
    /// Design depth must lie below the critical depth (lateral failure).
    pub require_lateral_at_design_depth: bool,
}

impl Default for DesignConstraints {
    fn default() -> Self {
        DesignConstraints {
            max_thrust_deg: 25.0,
            window_low_deg: 15.0,
            window_high_deg: 35.0,
            require_lateral_at_design_depth: true,
        }
    }
}

impl DesignConstraints {
    pub fn validate(&self) -> Result<(), DomainError> {
        ensure(
            "max_thrust_deg",
            self.max_thrust_deg,
            self.max_thrust_deg > 0.0 && self.max_thrust_deg < 90.0,
            "0 < max_thrust_deg < 90",
        )?;
        ensure(
            "window_low_deg",
            self.window_low_deg,
            self.window_low_deg < self.window_high_deg,
            "window_low_deg < window_high_deg",
        )
    }
}

/// Draft a vehicle of unit weight can sustain before the hinge lifts it, with
/// the draft acting at `application_fraction` of the tip depth.
///
/// Returns `f64::INFINITY` when the effective thrust angle is zero.
pub fn pull_weight_ratio(
    design: &SpikeDesign,
    depth_m: f64,
    application_fraction: f64,
) -> Result<f64, DomainError> {
    thrust_angle(design, depth_m)?;
    ensure(
        "application_fraction",
        application_fraction,
        (0.0..=1.0).contains(&application_fraction),
        "0 <= application_fraction <= 1",
    )?;
    let s = (design.hinge_height_m() + application_fraction * depth_m) / design.radius_m();
    let gamma = s.min(1.0).asin();
    if gamma == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(1.0 / gamma.tan())
}

/// One failed check, with how far it missed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum Violation {
    Thrust {
        thrust_deg: f64,
        limit_deg: f64,
        margin_deg: f64,
    },
    Window {
        difference_deg: f64,
        low_deg: f64,
        high_deg: f64,
        margin_deg: f64,
    },
    CriticalDepth {
        design_depth_m: f64,
        critical_depth_m: f64,
        margin_m: f64,
    },
}

impl Violation {
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::Thrust { .. } => "thrust",
            Violation::Window { .. } => "window",
            Violation::CriticalDepth { .. } => "critical_depth",
        }
    }
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Violation::Thrust {
                thrust_deg,
                limit_deg,
                margin_deg,
            } => write!(
                f,
                "thrust {thrust_deg:.2}° exceeds {limit_deg}° by {margin_deg:.2}°"
            ),
            Violation::Window {
                difference_deg,
                low_deg,
                high_deg,
                margin_deg,
            } => write!(
                f,
                "rake - thrust {difference_deg:.2}° outside ({low_deg}°, {high_deg}°) by {margin_deg:.2}°"
            ),
            Violation::CriticalDepth {
                design_depth_m,
                critical_depth_m,
                margin_m,
            } => write!(
                f,
                "design depth {design_depth_m:.3} m not below critical depth {critical_depth_m:.3} m (short by {margin_m:.3} m)"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignEvaluation {
    pub feasible: bool,
    pub violations: Vec<Violation>,
    /// Pull/weight ratio at design depth with the draft acting at the tip.
    pub objective: f64,
    pub thrust_deg: f64,
    pub rake_deg: f64,
    pub window_difference_deg: f64,
    pub critical_depth_m: f64,
    /// Largest horizontal force a crescent could exert at design depth.
    pub crescent_bound_n: f64,
}

/// Checks a design against the constraints.
pub fn evaluate_design(
    design: &SpikeDesign,
    soil: &SoilProperties,
    constraints: &DesignConstraints,
    cd_model: &CriticalDepthModel,
) -> Result<DesignEvaluation, DomainError> {
    let depth = design.design_depth_m();
    let thrust = thrust_angle(design, depth)?;
    let rake = rake_angle(design, depth)?;
    let window = penetration_window_margin(design).difference_deg;
    let zc = critical_depth(design.width_m(), rake.min(89.999), cd_model)?;
    let crescent = max_crescent_force(depth, design.width_m(), soil, ForceLaw::Active)?;

    let mut violations = Vec::new();
    if thrust > constraints.max_thrust_deg {
        violations.push(Violation::Thrust {
            thrust_deg: thrust,
            limit_deg: constraints.max_thrust_deg,
            margin_deg: thrust - constraints.max_thrust_deg,
        });
    }
    let (lo, hi) = (constraints.window_low_deg, constraints.window_high_deg);
    if !(window > lo && window < hi) {
        violations.push(Violation::Window {
            difference_deg: window,
            low_deg: lo,
            high_deg: hi,
            margin_deg: if window >= hi {
                window - hi
            } else {
                lo - window
            },
        });
    }
    if constraints.require_lateral_at_design_depth && depth <= zc {
        violations.push(Violation::CriticalDepth {
            design_depth_m: depth,
            critical_depth_m: zc,
            margin_m: zc - depth,
        });
    }

    Ok(DesignEvaluation {
        feasible: violations.is_empty(),
        violations,
        objective: pull_weight_ratio(design, depth, 1.0)?,
        thrust_deg: thrust,
        rake_deg: rake,
        window_difference_deg: window,
        critical_depth_m: zc,
        crescent_bound_n: crescent.force_n,
    })
}

/// Inclusive range `min, min + step, …, <= max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamRange {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl ParamRange {
    pub fn fixed(value: f64) -> Self {
        ParamRange {
            min: value,
            max: value,
            step: 1.0,
        }
    }

    fn validate(&self, name: &'static str) -> Result<(), DomainError> {
        ensure(
            name,
            self.min,
            self.min.is_finite() && self.max.is_finite() && self.min <= self.max,
            "min <= max",
        )?;
        ensure(
            name,
            self.step,
            self.step > 0.0 && self.step.is_finite(),
            "step > 0",
        )
    }

    pub fn values(&self) -> Vec<f64> {
        let n = ((self.max - self.min) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|k| self.min + k as f64 * self.step).collect()
    }
}

/// Grid of candidate designs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignSpace {
    pub radius_m: ParamRange,
    pub hinge_height_m: ParamRange,
    pub initial_rake_deg: ParamRange,
    pub diameter_mm: ParamRange,
    pub design_depth_m: ParamRange,
}

impl DesignSpace {
    pub fn validate(&self) -> Result<(), DomainError> {
        self.radius_m.validate("radius_m")?;
        self.hinge_height_m.validate("hinge_height_m")?;
        self.initial_rake_deg.validate("initial_rake_deg")?;
        self.diameter_mm.validate("diameter_mm")?;
        self.design_depth_m.validate("design_depth_m")
    }

    /// Number of grid points, valid designs or not.
    pub fn size(&self) -> usize {
        [
            &self.radius_m,
            &self.hinge_height_m,
            &self.initial_rake_deg,
            &self.diameter_mm,
            &self.design_depth_m,
        ]
        .iter()
        .map(|r| r.values().len())
        .product()
    }

    /// Every grid point, in radius-major order, with designs that violate the
    /// geometric invariants reported as errors.
    pub fn points(&self) -> Vec<Result<SpikeDesign, DomainError>> {
        let mut out = Vec::with_capacity(self.size());
        for r in self.radius_m.values() {
            for h in self.hinge_height_m.values() {
                for a in self.initial_rake_deg.values() {
                    for d in self.diameter_mm.values() {
                        for z in self.design_depth_m.values() {
                            out.push(SpikeDesign::new(r, h, a, d, z, 0.0));
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedDesign {
    pub design: SpikeDesign,
    pub evaluation: DesignEvaluation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchOutcome {
    /// Grid points examined, including geometrically invalid ones.
    pub evaluated: usize,
    /// Grid points rejected because the design itself was invalid.
    pub invalid: usize,
    /// Feasible designs, best first.
    pub ranked: Vec<RankedDesign>,
    /// How often each check failed among valid designs.
    pub violation_counts: BTreeMap<&'static str, usize>,
}

impl SearchOutcome {
    /// The check that failed most often; ties go to the alphabetically first.
    pub fn most_common_violation(&self) -> Option<(&'static str, usize)> {
        self.violation_counts
            .iter()
            .fold(
                None,
                |best: Option<(&'static str, usize)>, (&k, &n)| match best {
                    Some((_, m)) if m >= n => best,
                    _ => Some((k, n)),
                },
            )
    }
}

/// Ranking order: larger objective first, then smaller radius, then smaller
/// diameter; remaining fields ascending make the order total.
pub fn rank_order(a: &RankedDesign, b: &RankedDesign) -> Ordering {
    let (da, db) = (&a.design, &b.design);
    b.evaluation
        .objective
        .total_cmp(&a.evaluation.objective)
        .then(da.radius_m().total_cmp(&db.radius_m()))
        .then(da.diameter_mm().total_cmp(&db.diameter_mm()))
        .then(da.hinge_height_m().total_cmp(&db.hinge_height_m()))
        .then(da.initial_rake_deg().total_cmp(&db.initial_rake_deg()))
        .then(da.design_depth_m().total_cmp(&db.design_depth_m()))
}

/// Evaluates every point of the grid and ranks the feasible designs.
pub fn grid_search(
    space: &DesignSpace,
    soil: &SoilProperties,
    constraints: &DesignConstraints,
    cd_model: &CriticalDepthModel,
) -> Result<SearchOutcome, DomainError> {
    space.validate()?;
    rank_designs(space.points(), soil, constraints, cd_model)
}

/// Evaluates an explicit list of candidates and ranks the feasible ones.
/// Candidates that failed construction count as invalid.
pub fn rank_designs(
    points: Vec<Result<SpikeDesign, DomainError>>,
    soil: &SoilProperties,
    constraints: &DesignConstraints,
    cd_model: &CriticalDepthModel,
) -> Result<SearchOutcome, DomainError> {
    constraints.validate()?;
    cd_model.validate()?;
    let evaluated = points.len();

    let results: Vec<Option<RankedDesign>> = points
        .into_par_iter()
        .map(|p| {
            let design = p.ok()?;
            let evaluation = evaluate_design(&design, soil, constraints, cd_model).ok()?;
            Some(RankedDesign { design, evaluation })
        })
        .collect();

    let mut invalid = 0;
    let mut violation_counts = BTreeMap::new();
    let mut ranked = Vec::new();
    for r in results {
        match r {
            None => invalid += 1,
            Some(r) if r.evaluation.feasible => ranked.push(r),
            Some(r) => {
                for v in &r.evaluation.violations {
                    *violation_counts.entry(v.kind()).or_insert(0) += 1;
                }
            }
        }
    }
    ranked.sort_by(rank_order);
    Ok(SearchOutcome {
        evaluated,
        invalid,
        ranked,
        violation_counts,
    })
}
