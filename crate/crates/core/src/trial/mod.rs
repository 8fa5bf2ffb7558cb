//! Reduction of load-step field trials.
//!
//! A trial adds weights to a basket hung from a pulley rig; each load step
//! records the basket mass, the cumulative horizontal motion of the hinge and
//! the arm inclination. [`derive_series`] turns that into draft, depth, thrust,
//! lift, tip travel and penetration work. Sudden jumps between steps are
//! subsurface landslides; [`landslide_filter`] keeps only the settled
//! post-landslide readings and interpolates the rest.

mod log;

use serde::{Deserialize, Serialize};

use crate::error::{ensure, DomainError, ParseError};
use crate::geometry::{depth_from_inclination, lifting_force, SpikeDesign};
use crate::soilmech::Moisture;
use crate::STANDARD_GRAVITY;

pub use log::{parse_trial_log, write_trial_log, COLUMN_HEADER};

/// Test site; the same two-valued label as the soil moisture.
pub type Site = Moisture;

/// Basket-and-pulley draft rig.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulleyRig {
    /// Lumped friction of both pulleys, as a fraction of the basket weight.
    pub friction_coefficient: f64,
    pub gravity_m_s2: f64,
}

impl Default for PulleyRig {
    fn default() -> Self {
        PulleyRig {
            friction_coefficient: 0.23,
            gravity_m_s2: STANDARD_GRAVITY,
        }
    }
}

impl PulleyRig {
    pub fn new(friction_coefficient: f64, gravity_m_s2: f64) -> Result<Self, DomainError> {
        let rig = PulleyRig {
            friction_coefficient,
            gravity_m_s2,
        };
        rig.validate()?;
        Ok(rig)
    }

    pub fn validate(&self) -> Result<(), DomainError> {
        ensure(
            "pulley_mu",
            self.friction_coefficient,
            (0.0..1.0).contains(&self.friction_coefficient),
            "0 <= pulley_mu < 1",
        )?;
        ensure(
            "gravity_m_s2",
            self.gravity_m_s2,
            self.gravity_m_s2 > 0.0 && self.gravity_m_s2.is_finite(),
            "gravity_m_s2 > 0",
        )
    }

    /// Basket mass needed for a given draft; inverse of [`draft_from_basket`].
    pub fn basket_for_draft(&self, draft_n: f64) -> f64 {
        draft_n / (self.gravity_m_s2 * (1.0 - self.friction_coefficient))
    }
}

/// Mass resting on the vehicle's wheels, which counters hinge lift.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VehicleConfig {
    pub total_mass_kg: f64,
    pub gravity_m_s2: f64,
}

impl VehicleConfig {
    pub fn new(total_mass_kg: f64, gravity_m_s2: f64) -> Result<Self, DomainError> {
        ensure(
            "vehicle_kg",
            total_mass_kg,
            total_mass_kg > 0.0 && total_mass_kg.is_finite(),
            "vehicle_kg > 0",
        )?;
        ensure(
            "gravity_m_s2",
            gravity_m_s2,
            gravity_m_s2 > 0.0 && gravity_m_s2.is_finite(),
            "gravity_m_s2 > 0",
        )?;
        Ok(VehicleConfig {
            total_mass_kg,
            gravity_m_s2,
        })
    }

    pub fn weight_n(&self) -> f64 {
        self.total_mass_kg * self.gravity_m_s2
    }
}

/// Header fields of a trial log.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialMetadata {
    pub site: Site,
    pub diameter_mm: u32,
    pub radius_m: f64,
    pub hinge_m: f64,
    pub rake0_deg: f64,
    pub vehicle_kg: f64,
    pub pulley_mu: f64,
}

impl TrialMetadata {
    pub fn validate(&self) -> Result<(), DomainError> {
        self.design()?;
        self.rig()?;
        self.vehicle()?;
        Ok(())
    }

    /// The spike as described by the header. The header carries no design
    /// depth or tip mass, so the full reach of the arm and zero are used.
    pub fn design(&self) -> Result<SpikeDesign, DomainError> {
        ensure(
            "radius_m",
            self.radius_m,
            self.radius_m > self.hinge_m,
            "radius_m > hinge_m",
        )?;
        SpikeDesign::new(
            self.radius_m,
            self.hinge_m,
            self.rake0_deg,
            self.diameter_mm as f64,
            self.radius_m - self.hinge_m,
            0.0,
        )
    }

    pub fn rig(&self) -> Result<PulleyRig, DomainError> {
        PulleyRig::new(self.pulley_mu, STANDARD_GRAVITY)
    }

    pub fn vehicle(&self) -> Result<VehicleConfig, DomainError> {
        VehicleConfig::new(self.vehicle_kg, STANDARD_GRAVITY)
    }
}

/// One recorded load step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LoadStep {
    pub step: u64,
    pub basket_kg: f64,
    /// Cumulative hinge motion since the start of the trial.
    pub motion_mm: f64,
    /// Inclination of the hinge-to-tip line, degrees.
    pub incl_deg: f64,
}

/// A validated trial: steps strictly ordered, weights and motion only grow.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialLog {
    pub metadata: TrialMetadata,
    pub steps: Vec<LoadStep>,
}

impl TrialLog {
    pub fn new(metadata: TrialMetadata, steps: Vec<LoadStep>) -> Result<Self, ParseError> {
        // rows start on line 3 of the file format
        let lines: Vec<usize> = (0..steps.len()).map(|i| i + 3).collect();
        Self::with_line_numbers(metadata, steps, &lines)
    }

    fn with_line_numbers(
        metadata: TrialMetadata,
        steps: Vec<LoadStep>,
        lines: &[usize],
    ) -> Result<Self, ParseError> {
        metadata
            .validate()
            .map_err(|e| ParseError::new(1, e.to_string()))?;
        for (i, s) in steps.iter().enumerate() {
            let line = lines[i];
            if s.basket_kg < 0.0 {
                return Err(ParseError::new(line, "basket_kg must be >= 0"));
            }
            if s.motion_mm < 0.0 {
                return Err(ParseError::new(line, "motion_mm must be >= 0"));
            }
            if !(0.0..=90.0).contains(&s.incl_deg) {
                return Err(ParseError::new(
                    line,
                    format!("incl_deg {} outside [0, 90]", s.incl_deg),
                ));
            }
            if i > 0 {
                let prev = &steps[i - 1];
                if s.step <= prev.step {
                    return Err(ParseError::new(
                        line,
                        "step index must be strictly increasing",
                    ));
                }
                if s.basket_kg < prev.basket_kg {
                    return Err(ParseError::new(
                        line,
                        format!(
                            "basket_kg must be non-decreasing ({} after {})",
                            s.basket_kg, prev.basket_kg
                        ),
                    ));
                }
                if s.motion_mm < prev.motion_mm {
                    return Err(ParseError::new(
                        line,
                        format!(
                            "motion_mm must be non-decreasing ({} after {})",
                            s.motion_mm, prev.motion_mm
                        ),
                    ));
                }
            }
        }
        Ok(TrialLog { metadata, steps })
    }
}

/// Draft on the vehicle for a basket mass, after pulley friction.
pub fn draft_from_basket(basket_mass_kg: f64, rig: &PulleyRig) -> Result<f64, DomainError> {
    ensure(
        "basket_mass_kg",
        basket_mass_kg,
        basket_mass_kg >= 0.0,
        "basket_mass_kg >= 0",
    )?;
    Ok(basket_mass_kg * rig.gravity_m_s2 * (1.0 - rig.friction_coefficient))
}

/// Per-step physical quantities of a trial, one vector per column.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivedSeries {
    pub step: Vec<u64>,
    pub draft_n: Vec<f64>,
    /// Cumulative hinge motion, meters.
    pub motion_m: Vec<f64>,
    pub depth_m: Vec<f64>,
    pub thrust_deg: Vec<f64>,
    pub lift_n: Vec<f64>,
    /// Horizontal tip travel since the first step, forward positive.
    pub tip_x_m: Vec<f64>,
    pub cumulative_work_j: Vec<f64>,
    /// Steps whose inclination put the tip above the surface.
    pub airborne: Vec<bool>,
    /// Landslide steps, when known.
    pub events: Vec<usize>,
}

impl DerivedSeries {
    pub fn len(&self) -> usize {
        self.step.len()
    }

    pub fn is_empty(&self) -> bool {
        self.step.is_empty()
    }
}

/// Derives the physical series of a trial.
///
/// Inclinations below the surface pose yield depth 0 and are flagged in
/// [`DerivedSeries::airborne`]; their tip geometry uses the surface pose.
pub fn derive_series(
    log: &TrialLog,
    design: &SpikeDesign,
    rig: &PulleyRig,
) -> Result<DerivedSeries, DomainError> {
    rig.validate()?;
    let n = log.steps.len();
    let mut s = DerivedSeries {
        step: Vec::with_capacity(n),
        draft_n: Vec::with_capacity(n),
        motion_m: Vec::with_capacity(n),
        depth_m: Vec::with_capacity(n),
        thrust_deg: Vec::with_capacity(n),
        lift_n: Vec::with_capacity(n),
        tip_x_m: Vec::with_capacity(n),
        cumulative_work_j: Vec::new(),
        airborne: Vec::with_capacity(n),
        events: Vec::new(),
    };
    let floor = design.surface_thrust_deg();
    let r = design.radius_m();
    let mut origin: Option<(f64, f64)> = None;
    for step in &log.steps {
        let draft = draft_from_basket(step.basket_kg, rig)?;
        let tip = depth_from_inclination(design, step.incl_deg)?;
        let lift = lifting_force(draft, step.incl_deg)?;
        let motion = step.motion_mm / 1000.0;
        let pose = step.incl_deg.max(floor).to_radians().cos();
        let (m0, c0) = *origin.get_or_insert((motion, pose));
        s.step.push(step.step);
        s.draft_n.push(draft);
        s.motion_m.push(motion);
        s.depth_m.push(tip.depth_m);
        s.thrust_deg.push(step.incl_deg);
        s.lift_n.push(lift);
        s.tip_x_m.push((motion - m0) - r * (c0 - pose));
        s.airborne.push(tip.airborne);
    }
    s.cumulative_work_j = penetration_work(&s);
    Ok(s)
}

/// Jump sizes that mark a load step as a subsurface landslide.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LandslideThresholds {
    pub depth_jump_m: f64,
    pub motion_jump_m: f64,
}

impl Default for LandslideThresholds {
    fn default() -> Self {
        LandslideThresholds {
            depth_jump_m: 0.01,
            motion_jump_m: 0.01,
        }
    }
}

impl LandslideThresholds {
    pub fn new(depth_jump_m: f64, motion_jump_m: f64) -> Result<Self, DomainError> {
        ensure(
            "depth_threshold",
            depth_jump_m,
            depth_jump_m > 0.0,
            "depth_threshold > 0",
        )?;
        ensure(
            "motion_threshold",
            motion_jump_m,
            motion_jump_m > 0.0,
            "motion_threshold > 0",
        )?;
        Ok(LandslideThresholds {
            depth_jump_m,
            motion_jump_m,
        })
    }
}

/// Steps where depth or hinge motion jumped by at least the threshold since
/// the previous step.
pub fn detect_landslides(series: &DerivedSeries, thresholds: &LandslideThresholds) -> Vec<usize> {
    (1..series.len())
        .filter(|&i| {
            series.depth_m[i] - series.depth_m[i - 1] >= thresholds.depth_jump_m
                || series.motion_m[i] - series.motion_m[i - 1] >= thresholds.motion_jump_m
        })
        .collect()
}

/// Keeps the readings taken right after each landslide, plus the first and
/// last step, and replaces depth, thrust and lift everywhere else by linear
/// interpolation along the draft axis. Draft, motion, tip travel and work are
/// left untouched.
pub fn landslide_filter(
    series: &DerivedSeries,
    events: &[usize],
) -> Result<DerivedSeries, DomainError> {
    let n = series.len();
    let mut out = series.clone();
    let mut events: Vec<usize> = events.to_vec();
    events.sort_unstable();
    events.dedup();
    if let Some(&bad) = events.iter().find(|&&e| e >= n) {
        return Err(DomainError::out_of_range(
            "event index",
            bad as f64,
            format!("index < series length {n}"),
        ));
    }
    out.events = events.clone();
    if n < 3 {
        return Ok(out);
    }

    let mut retained = vec![false; n];
    retained[0] = true;
    retained[n - 1] = true;
    for &e in &events {
        retained[e] = true;
    }

    let mut left = 0;
    for right in 1..n {
        if !retained[right] {
            continue;
        }
        let (fa, fb) = (series.draft_n[left], series.draft_n[right]);
        for i in left + 1..right {
            let t = if fb > fa {
                ((series.draft_n[i] - fa) / (fb - fa)).clamp(0.0, 1.0)
            } else {
                (i - left) as f64 / (right - left) as f64
            };
            let lerp = |col: &[f64]| col[left] + t * (col[right] - col[left]);
            out.depth_m[i] = lerp(&series.depth_m);
            out.thrust_deg[i] = lerp(&series.thrust_deg);
            out.lift_n[i] = lerp(&series.lift_n);
        }
        left = right;
    }
    Ok(out)
}

/// Cumulative trapezoidal work of the draft over horizontal tip travel, J.
pub fn penetration_work(series: &DerivedSeries) -> Vec<f64> {
    cumulative_trapezoid(&series.draft_n, &series.tip_x_m)
}

/// Running trapezoid integral of `y dx`, starting at zero.
pub fn cumulative_trapezoid(y: &[f64], x: &[f64]) -> Vec<f64> {
    debug_assert_eq!(y.len(), x.len());
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(y.len());
    for i in 0..y.len().min(x.len()) {
        if i > 0 {
            acc += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
        }
        out.push(acc);
    }
    out
}

/// Share of the total work that goes into pushing, once the spike has been
/// set with `penetration_work_j` and then holds `draft_n` over
/// `push_distance_m`.
pub fn tractive_efficiency(
    penetration_work_j: f64,
    draft_n: f64,
    push_distance_m: f64,
) -> Result<f64, DomainError> {
    ensure(
        "penetration_work_J",
        penetration_work_j,
        penetration_work_j >= 0.0,
        "penetration_work_J >= 0",
    )?;
    ensure("draft_N", draft_n, draft_n >= 0.0, "draft_N >= 0")?;
    ensure(
        "push_distance_m",
        push_distance_m,
        push_distance_m >= 0.0,
        "push_distance_m >= 0",
    )?;
    let useful = draft_n * push_distance_m;
    let total = useful + penetration_work_j;
    if total <= 0.0 {
        return Err(DomainError::ZeroWork);
    }
    Ok(useful / total)
}

/// Calculated lift against vehicle weight at one step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityStep {
    pub lift_n: f64,
    pub weight_n: f64,
    pub margin_n: f64,
    pub liftoff: bool,
}

pub fn stability_check(series: &DerivedSeries, vehicle: &VehicleConfig) -> Vec<StabilityStep> {
    let weight_n = vehicle.weight_n();
    series
        .lift_n
        .iter()
        .map(|&lift_n| {
            let margin_n = weight_n - lift_n;
            StabilityStep {
                lift_n,
                weight_n,
                margin_n,
                liftoff: margin_n < 0.0,
            }
        })
        .collect()
}

/// Where along the spike the draft effectively acts, as a fraction of depth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ApplicationEstimate {
    pub kappa: f64,
    /// Even a draft applied at the soil surface predicts liftoff at some
    /// step where none was observed.
    pub inconsistent: bool,
}

const KAPPA_TOLERANCE: f64 = 1e-4;

/// Largest application fraction `κ` for which a draft acting at depth `κ·z`
/// leaves the vehicle grounded at every step where it was observed grounded.
///
/// Returns `κ = 1` when acting at the tip already agrees with observation.
pub fn estimate_effective_application(
    series: &DerivedSeries,
    design: &SpikeDesign,
    vehicle: &VehicleConfig,
    observed_liftoff: &[bool],
) -> Result<ApplicationEstimate, DomainError> {
    if observed_liftoff.len() != series.len() {
        return Err(DomainError::out_of_range(
            "observed_liftoff length",
            observed_liftoff.len() as f64,
            format!("length == series length {}", series.len()),
        ));
    }
    let weight = vehicle.weight_n();
    let (h, r) = (design.hinge_height_m(), design.radius_m());
    let stable: Vec<(f64, f64)> = (0..series.len())
        .filter(|&i| !observed_liftoff[i])
        .map(|i| (series.draft_n[i], series.depth_m[i]))
        .collect();
    let grounded = |kappa: f64| {
        stable.iter().all(|&(draft, depth)| {
            let s = ((h + kappa * depth) / r).min(1.0);
            draft * s.asin().tan() <= weight
        })
    };

    if grounded(1.0) {
        return Ok(ApplicationEstimate {
            kappa: 1.0,
            inconsistent: false,
        });
    }
    if !grounded(0.0) {
        return Ok(ApplicationEstimate {
            kappa: 0.0,
            inconsistent: true,
        });
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > KAPPA_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if grounded(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ApplicationEstimate {
        kappa: lo,
        inconsistent: false,
    })
}
