//! Soil failure ahead of a narrow spike.
//!
//! Above the critical depth the spike lifts a crescent of soil bounded by a
//! planar shear surface rising from the tip at angle `beta` to the horizontal.
//! The crescent is a triangular prism the width of the spike plus two
//! quarter-cone wings, one on each side:
//!
//! ```text
//! V = ½·w·z²·cot β + (π/6)·z³·cot² β
//! ```
//!
//! The horizontal force the crescent can exert comes from wedge equilibrium
//! of its weight against friction on the shear plane. Below the critical
//! depth soil fails laterally; only the classifier is modeled for that regime.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ensure, DomainError};
use crate::STANDARD_GRAVITY;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Moisture {
    Dry,
    Moist,
}

impl std::fmt::Display for Moisture {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Moisture::Dry => "dry",
            Moisture::Moist => "moist",
        })
    }
}

/// Bulk properties of a cohesionless granular soil.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSoil", into = "RawSoil")]
pub struct SoilProperties {
    bulk_density_kg_m3: f64,
    friction_angle_deg: f64,
    moisture: Moisture,
    gravity_m_s2: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSoil {
    bulk_density_kg_m3: f64,
    friction_angle_deg: f64,
    moisture: Moisture,
    #[serde(default = "default_gravity")]
    gravity_m_s2: f64,
}

fn default_gravity() -> f64 {
    STANDARD_GRAVITY
}

impl TryFrom<RawSoil> for SoilProperties {
    type Error = DomainError;

    fn try_from(raw: RawSoil) -> Result<Self, Self::Error> {
        SoilProperties::new(
            raw.bulk_density_kg_m3,
            raw.friction_angle_deg,
            raw.moisture,
            raw.gravity_m_s2,
        )
    }
}

impl From<SoilProperties> for RawSoil {
    fn from(s: SoilProperties) -> Self {
        RawSoil {
            bulk_density_kg_m3: s.bulk_density_kg_m3,
            friction_angle_deg: s.friction_angle_deg,
            moisture: s.moisture,
            gravity_m_s2: s.gravity_m_s2,
        }
    }
}

impl SoilProperties {
    pub fn new(
        bulk_density_kg_m3: f64,
        friction_angle_deg: f64,
        moisture: Moisture,
        gravity_m_s2: f64,
    ) -> Result<Self, DomainError> {
        ensure(
            "bulk_density_kg_m3",
            bulk_density_kg_m3,
            bulk_density_kg_m3 > 0.0 && bulk_density_kg_m3.is_finite(),
            "bulk_density_kg_m3 > 0",
        )?;
        ensure(
            "friction_angle_deg",
            friction_angle_deg,
            friction_angle_deg > 0.0 && friction_angle_deg < 90.0,
            "0 < friction_angle_deg < 90",
        )?;
        ensure(
            "gravity_m_s2",
            gravity_m_s2,
            gravity_m_s2 > 0.0 && gravity_m_s2.is_finite(),
            "gravity_m_s2 > 0",
        )?;
        Ok(SoilProperties {
            bulk_density_kg_m3,
            friction_angle_deg,
            moisture,
            gravity_m_s2,
        })
    }

    /// Oven-dry beach sand: 1720 kg/m³, angle of repose 30°.
    pub fn dry_sand() -> Self {
        SoilProperties::new(1720.0, 30.0, Moisture::Dry, STANDARD_GRAVITY).expect("valid preset")
    }

    /// Unsaturated moist beach sand (4 % water): 1790 kg/m³, piled repose 47°.
    pub fn moist_sand() -> Self {
        SoilProperties::new(1790.0, 47.0, Moisture::Moist, STANDARD_GRAVITY).expect("valid preset")
    }

    pub fn bulk_density_kg_m3(&self) -> f64 {
        self.bulk_density_kg_m3
    }

    pub fn friction_angle_deg(&self) -> f64 {
        self.friction_angle_deg
    }

    pub fn moisture(&self) -> Moisture {
        self.moisture
    }

    pub fn gravity_m_s2(&self) -> f64 {
        self.gravity_m_s2
    }

    /// Unit weight ρ·g, N/m³.
    pub fn unit_weight(&self) -> f64 {
        self.bulk_density_kg_m3 * self.gravity_m_s2
    }

    pub fn with_gravity(self, gravity_m_s2: f64) -> Result<Self, DomainError> {
        SoilProperties::new(
            self.bulk_density_kg_m3,
            self.friction_angle_deg,
            self.moisture,
            gravity_m_s2,
        )
    }
}

/// Sign of the friction term in the wedge equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ForceLaw {
    /// `H = W·tan(β − φ)`: the crescent slides down and presses on the spike.
    #[default]
    Active,
    /// `H = W·tan(β + φ)`: the spike shoves the crescent up the plane.
    Passive,
}

impl ForceLaw {
    /// Open interval of shear-plane angles where the law is defined, degrees.
    fn domain(self, friction_deg: f64) -> (f64, f64) {
        match self {
            ForceLaw::Active => (friction_deg, 90.0),
            ForceLaw::Passive => (0.0, 90.0 - friction_deg),
        }
    }
}

impl std::str::FromStr for ForceLaw {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "active" => Ok(ForceLaw::Active),
            "passive" => Ok(ForceLaw::Passive),
            other => Err(format!(
                "unknown force law `{other}` (expected active|passive)"
            )),
        }
    }
}

fn check_beta(beta_deg: f64) -> Result<(), DomainError> {
    ensure(
        "beta_deg",
        beta_deg,
        beta_deg > 0.0 && beta_deg < 90.0,
        "0 < beta_deg < 90",
    )
}

/// Crescent volume in m³ for a tip at `depth_m`, shear plane `beta_deg` and
/// spike width `width_m`.
pub fn crescent_volume(depth_m: f64, beta_deg: f64, width_m: f64) -> Result<f64, DomainError> {
    check_beta(beta_deg)?;
    ensure("depth_m", depth_m, depth_m >= 0.0, "depth_m >= 0")?;
    ensure("width_m", width_m, width_m > 0.0, "width_m > 0")?;
    let cot = 1.0 / beta_deg.to_radians().tan();
    let z = depth_m;
    Ok(0.5 * width_m * z * z * cot + PI / 6.0 * z * z * z * cot * cot)
}

/// Horizontal force of the crescent against the spike, N.
///
/// Under [`ForceLaw::Active`] a plane no steeper than the friction angle holds
/// the crescent by itself and the force is zero. Under [`ForceLaw::Passive`] a
/// plane with `β + φ >= 90°` jams and is rejected.
pub fn crescent_force(
    depth_m: f64,
    beta_deg: f64,
    width_m: f64,
    soil: &SoilProperties,
    law: ForceLaw,
) -> Result<f64, DomainError> {
    let volume = crescent_volume(depth_m, beta_deg, width_m)?;
    let phi = soil.friction_angle_deg;
    let weight = soil.unit_weight() * volume;
    match law {
        ForceLaw::Active => {
            if beta_deg <= phi {
                return Ok(0.0);
            }
            Ok(weight * (beta_deg - phi).to_radians().tan())
        }
        ForceLaw::Passive => {
            if beta_deg + phi >= 90.0 {
                return Err(DomainError::Jamming {
                    beta_deg,
                    friction_deg: phi,
                });
            }
            Ok(weight * (beta_deg + phi).to_radians().tan())
        }
    }
}

/// Closed grid of shear-plane angles, degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaScan {
    pub min_deg: f64,
    pub max_deg: f64,
    pub step_deg: f64,
}

impl BetaScan {
    /// Grid step used by default.
    pub const DEFAULT_STEP_DEG: f64 = 0.1;

    /// The default scan for a law: one step inside each end of its domain.
    pub fn for_law(law: ForceLaw, soil: &SoilProperties) -> Self {
        let (lo, hi) = law.domain(soil.friction_angle_deg);
        BetaScan {
            min_deg: lo + Self::DEFAULT_STEP_DEG,
            max_deg: hi - Self::DEFAULT_STEP_DEG,
            step_deg: Self::DEFAULT_STEP_DEG,
        }
    }

    /// Grid points, generated by index so the angles do not drift.
    pub fn angles(&self) -> impl Iterator<Item = f64> + '_ {
        let n = ((self.max_deg - self.min_deg) / self.step_deg + 1e-9).floor() as usize;
        (0..=n).map(move |k| self.min_deg + k as f64 * self.step_deg)
    }

    fn validate(&self, law: ForceLaw, soil: &SoilProperties) -> Result<(), DomainError> {
        if !self.step_deg.is_finite() || self.step_deg <= 0.0 {
            return Err(DomainError::EmptyScan(format!(
                "step {}° must be positive",
                self.step_deg
            )));
        }
        if self.min_deg.is_nan() || self.max_deg.is_nan() || self.min_deg >= self.max_deg {
            return Err(DomainError::EmptyScan(format!(
                "min {}° must be below max {}°",
                self.min_deg, self.max_deg
            )));
        }
        let (lo, hi) = law.domain(soil.friction_angle_deg);
        if self.min_deg <= lo || self.max_deg >= hi {
            return Err(DomainError::EmptyScan(format!(
                "[{}°, {}°] leaves the open domain ({lo}°, {hi}°) of the {law:?} law",
                self.min_deg, self.max_deg
            )));
        }
        Ok(())
    }
}

/// The critical shear plane and the force curve it was picked from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrescentResult {
    pub beta_star_deg: f64,
    pub force_n: f64,
    /// `(beta_deg, force_n)` at every scanned angle.
    pub curve: Vec<(f64, f64)>,
}

impl CrescentResult {
    /// The curve as `beta_deg,force_N` CSV with six significant digits.
    pub fn curve_csv(&self) -> String {
        use crate::format::fmt_sig;
        let mut out = String::from("beta_deg,force_N\n");
        for &(b, f) in &self.curve {
            out.push_str(&fmt_sig(b));
            out.push(',');
            out.push_str(&fmt_sig(f));
            out.push('\n');
        }
        out
    }
}

/// Scans the shear-plane angle over the law's default grid and returns the
/// critical plane.
pub fn max_crescent_force(
    depth_m: f64,
    width_m: f64,
    soil: &SoilProperties,
    law: ForceLaw,
) -> Result<CrescentResult, DomainError> {
    max_crescent_force_in(depth_m, width_m, soil, law, BetaScan::for_law(law, soil))
}

/// [`max_crescent_force`] over an explicit grid.
///
/// The active law picks the plane of greatest force (the crescent presses
/// hardest there); the passive law picks the plane of least resistance, which
/// is where a shoved wedge actually fails. Ties go to the smaller angle.
pub fn max_crescent_force_in(
    depth_m: f64,
    width_m: f64,
    soil: &SoilProperties,
    law: ForceLaw,
    scan: BetaScan,
) -> Result<CrescentResult, DomainError> {
    scan.validate(law, soil)?;
    let mut curve = Vec::new();
    for beta in scan.angles() {
        curve.push((beta, crescent_force(depth_m, beta, width_m, soil, law)?));
    }
    let mut best = curve[0];
    for &(beta, force) in &curve[1..] {
        let better = match law {
            ForceLaw::Active => force > best.1,
            ForceLaw::Passive => force < best.1,
        };
        if better {
            best = (beta, force);
        }
    }
    Ok(CrescentResult {
        beta_star_deg: best.0,
        force_n: best.1,
        curve,
    })
}

/// Parameters of the critical-depth classifier
/// `z_c = k0 · w · (1 + k1 · (α − 45°) / 45°)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CriticalDepthModel {
    /// Critical depth per unit width at a 45° rake.
    pub k0: f64,
    /// Relative growth of the critical depth per 45° of extra rake.
    pub k1: f64,
}

impl Default for CriticalDepthModel {
    fn default() -> Self {
        CriticalDepthModel { k0: 6.0, k1: 1.0 }
    }
}

impl CriticalDepthModel {
    pub fn new(k0: f64, k1: f64) -> Result<Self, DomainError> {
        let m = CriticalDepthModel { k0, k1 };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), DomainError> {
        ensure(
            "k0",
            self.k0,
            self.k0 > 0.0 && self.k0.is_finite(),
            "k0 > 0",
        )?;
        ensure(
            "k1",
            self.k1,
            self.k1 >= 0.0 && self.k1.is_finite(),
            "k1 >= 0",
        )
    }
}

/// Depth separating crescent failure (above) from lateral failure (below).
pub fn critical_depth(
    width_m: f64,
    rake_deg: f64,
    model: &CriticalDepthModel,
) -> Result<f64, DomainError> {
    ensure("width_m", width_m, width_m > 0.0, "width_m > 0")?;
    ensure(
        "rake_deg",
        rake_deg,
        rake_deg > 0.0 && rake_deg < 90.0,
        "0 < rake_deg < 90",
    )?;
    model.validate()?;
    let z = model.k0 * width_m * (1.0 + model.k1 * (rake_deg - 45.0) / 45.0);
    Ok(z.max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FailureMode {
    Crescent,
    Lateral,
}

/// Failure regime at a depth; the critical depth itself counts as crescent.
pub fn failure_mode(
    depth_m: f64,
    width_m: f64,
    rake_deg: f64,
    model: &CriticalDepthModel,
) -> Result<FailureMode, DomainError> {
    ensure("depth_m", depth_m, depth_m >= 0.0, "depth_m >= 0")?;
    let zc = critical_depth(width_m, rake_deg, model)?;
    Ok(if depth_m <= zc {
        FailureMode::Crescent
    } else {
        FailureMode::Lateral
    })
}
