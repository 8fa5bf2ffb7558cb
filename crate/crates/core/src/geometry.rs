//! Rigid-body kinematics of a spike on a hinged lever arm.
//!
//! The hinge sits `hinge_height_m` above the soil surface and the spike tip
//! sits `radius_m` away from it. The line from hinge to tip makes the thrust
//! angle with the horizontal, so a tip at depth `z` satisfies
//! `sin(thrust) = (h + z) / r`. The spike body rotates rigidly with the arm:
//! the rake angle grows by exactly as much as the thrust angle does.

use serde::{Deserialize, Serialize};

use crate::error::{ensure, DomainError};

/// Hinge height used when a design does not state one, meters.
pub const DEFAULT_HINGE_HEIGHT_M: f64 = 0.09;

/// Penetration window on `rake - thrust`, degrees (exclusive bounds).
pub const PENETRATION_WINDOW_DEG: (f64, f64) = (15.0, 35.0);

/// Geometry of one articulated spike.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpikeDesign", into = "RawSpikeDesign")]
pub struct SpikeDesign {
    radius_m: f64,
    hinge_height_m: f64,
    initial_rake_deg: f64,
    diameter_mm: f64,
    design_depth_m: f64,
    tip_mass_kg: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpikeDesign {
    radius_m: f64,
    #[serde(default = "default_hinge")]
    hinge_height_m: f64,
    initial_rake_deg: f64,
    diameter_mm: f64,
    design_depth_m: f64,
    #[serde(default)]
    tip_mass_kg: f64,
}

fn default_hinge() -> f64 {
    DEFAULT_HINGE_HEIGHT_M
}

impl TryFrom<RawSpikeDesign> for SpikeDesign {
    type Error = DomainError;

    fn try_from(raw: RawSpikeDesign) -> Result<Self, Self::Error> {
        SpikeDesign::new(
            raw.radius_m,
            raw.hinge_height_m,
            raw.initial_rake_deg,
            raw.diameter_mm,
            raw.design_depth_m,
            raw.tip_mass_kg,
        )
    }
}

impl From<SpikeDesign> for RawSpikeDesign {
    fn from(d: SpikeDesign) -> Self {
        RawSpikeDesign {
            radius_m: d.radius_m,
            hinge_height_m: d.hinge_height_m,
            initial_rake_deg: d.initial_rake_deg,
            diameter_mm: d.diameter_mm,
            design_depth_m: d.design_depth_m,
            tip_mass_kg: d.tip_mass_kg,
        }
    }
}

impl SpikeDesign {
    pub fn new(
        radius_m: f64,
        hinge_height_m: f64,
        initial_rake_deg: f64,
        diameter_mm: f64,
        design_depth_m: f64,
        tip_mass_kg: f64,
    ) -> Result<Self, DomainError> {
        ensure(
            "hinge_height_m",
            hinge_height_m,
            hinge_height_m > 0.0 && hinge_height_m.is_finite(),
            "hinge_height_m > 0",
        )?;
        ensure(
            "radius_m",
            radius_m,
            radius_m > hinge_height_m && radius_m.is_finite(),
            "radius_m > hinge_height_m",
        )?;
        ensure(
            "design_depth_m",
            design_depth_m,
            design_depth_m > 0.0 && design_depth_m <= radius_m - hinge_height_m,
            "0 < design_depth_m <= radius_m - hinge_height_m",
        )?;
        ensure(
            "initial_rake_deg",
            initial_rake_deg,
            initial_rake_deg > 0.0 && initial_rake_deg < 90.0,
            "0 < initial_rake_deg < 90",
        )?;
        ensure(
            "diameter_mm",
            diameter_mm,
            diameter_mm > 0.0 && diameter_mm.is_finite(),
            "diameter_mm > 0",
        )?;
        ensure(
            "tip_mass_kg",
            tip_mass_kg,
            tip_mass_kg >= 0.0 && tip_mass_kg.is_finite(),
            "tip_mass_kg >= 0",
        )?;
        Ok(SpikeDesign {
            radius_m,
            hinge_height_m,
            initial_rake_deg,
            diameter_mm,
            design_depth_m,
            tip_mass_kg,
        })
    }

    /// The 12 mm rebar design with a 58 cm radius, built for 15 cm depth.
    pub fn small_radius() -> Self {
        SpikeDesign::new(0.58, DEFAULT_HINGE_HEIGHT_M, 45.0, 12.0, 0.15, 0.7).expect("valid preset")
    }

    /// The 134 cm radius design built for 50 cm depth, at one of the tested
    /// thicknesses (21, 34, 42 or 49 mm). Other diameters get no tip mass.
    pub fn large_radius(diameter_mm: f64) -> Self {
        let tip_mass_kg = match diameter_mm as u32 {
            21 => 2.9,
            34 => 3.7,
            42 => 3.8,
            49 => 4.1,
            _ => 0.0,
        };
        SpikeDesign::new(
            1.34,
            DEFAULT_HINGE_HEIGHT_M,
            45.0,
            diameter_mm,
            0.50,
            tip_mass_kg,
        )
        .expect("valid preset")
    }

    pub fn with_hinge_height(self, hinge_height_m: f64) -> Result<Self, DomainError> {
        SpikeDesign::new(
            self.radius_m,
            hinge_height_m,
            self.initial_rake_deg,
            self.diameter_mm,
            self.design_depth_m,
            self.tip_mass_kg,
        )
    }

    pub fn radius_m(&self) -> f64 {
        self.radius_m
    }

    pub fn hinge_height_m(&self) -> f64 {
        self.hinge_height_m
    }

    pub fn initial_rake_deg(&self) -> f64 {
        self.initial_rake_deg
    }

    pub fn diameter_mm(&self) -> f64 {
        self.diameter_mm
    }

    /// Spike width in meters.
    pub fn width_m(&self) -> f64 {
        self.diameter_mm / 1000.0
    }

    pub fn design_depth_m(&self) -> f64 {
        self.design_depth_m
    }

    pub fn tip_mass_kg(&self) -> f64 {
        self.tip_mass_kg
    }

    /// Deepest reachable tip depth, with the arm vertical.
    pub fn max_depth_m(&self) -> f64 {
        self.radius_m - self.hinge_height_m
    }

    /// Thrust angle with the tip exactly at the soil surface.
    pub fn surface_thrust_deg(&self) -> f64 {
        (self.hinge_height_m / self.radius_m).asin().to_degrees()
    }

    /// Arm pose at the given depth.
    pub fn state_at(&self, depth_m: f64) -> Result<SpikeState, DomainError> {
        Ok(SpikeState {
            depth_m,
            thrust_deg: thrust_angle(self, depth_m)?,
            rake_deg: rake_angle(self, depth_m)?,
        })
    }
}

/// Pose of the spike at one penetration depth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpikeState {
    pub depth_m: f64,
    pub thrust_deg: f64,
    pub rake_deg: f64,
}

fn check_depth(design: &SpikeDesign, depth_m: f64) -> Result<(), DomainError> {
    let max = design.max_depth_m();
    if depth_m.is_nan() || depth_m < 0.0 {
        return Err(DomainError::out_of_range(
            "depth_m",
            depth_m,
            "depth_m >= 0",
        ));
    }
    if depth_m > max {
        return Err(DomainError::out_of_range(
            "depth_m",
            depth_m,
            format!("depth_m <= radius_m - hinge_height_m = {max}"),
        ));
    }
    Ok(())
}

/// Thrust angle in degrees for a tip at `depth_m` below the surface.
pub fn thrust_angle(design: &SpikeDesign, depth_m: f64) -> Result<f64, DomainError> {
    check_depth(design, depth_m)?;
    let s = ((design.hinge_height_m + depth_m) / design.radius_m).min(1.0);
    Ok(s.asin().to_degrees())
}

/// Result of inverting an arm inclination into a tip depth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TipDepth {
    pub depth_m: f64,
    /// The inclination put the tip above the surface; `depth_m` is clamped to 0.
    pub airborne: bool,
}

/// Tip depth for a measured hinge-to-tip inclination. Inverse of [`thrust_angle`].
pub fn depth_from_inclination(
    design: &SpikeDesign,
    inclination_deg: f64,
) -> Result<TipDepth, DomainError> {
    ensure(
        "inclination_deg",
        inclination_deg,
        inclination_deg <= 90.0,
        "inclination_deg <= 90",
    )?;
    let z = design.radius_m * inclination_deg.to_radians().sin() - design.hinge_height_m;
    if inclination_deg < design.surface_thrust_deg() || z < 0.0 {
        return Ok(TipDepth {
            depth_m: 0.0,
            airborne: true,
        });
    }
    Ok(TipDepth {
        depth_m: z,
        airborne: false,
    })
}

/// Rake angle at depth under rigid rotation of the arm.
pub fn rake_angle(design: &SpikeDesign, depth_m: f64) -> Result<f64, DomainError> {
    let thrust = thrust_angle(design, depth_m)?;
    Ok(design.initial_rake_deg + (thrust - design.surface_thrust_deg()))
}

/// Where `rake - thrust` sits relative to the penetration window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowMargin {
    pub difference_deg: f64,
    pub in_window: bool,
}

/// `rake - thrust` for the design, which is depth-independent, checked against
/// the open interval (15°, 35°).
pub fn penetration_window_margin(design: &SpikeDesign) -> WindowMargin {
    let difference_deg = design.initial_rake_deg - design.surface_thrust_deg();
    let (lo, hi) = PENETRATION_WINDOW_DEG;
    WindowMargin {
        difference_deg,
        in_window: difference_deg > lo && difference_deg < hi,
    }
}

/// Vertical lift at the hinge produced by a horizontal draft.
pub fn lifting_force(draft_n: f64, thrust_deg: f64) -> Result<f64, DomainError> {
    ensure(
        "thrust_deg",
        thrust_deg,
        (0.0..90.0).contains(&thrust_deg),
        "0 <= thrust_deg < 90",
    )?;
    Ok(draft_n * thrust_deg.to_radians().tan())
}

/// Tip motion between two arm poses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TipDisplacement {
    /// Horizontal, forward positive.
    pub dx_tip_m: f64,
    /// Vertical, downward positive.
    pub dz_tip_m: f64,
}

/// Tip displacement from the hinge advance and the change in arm inclination.
pub fn tip_displacement(
    design: &SpikeDesign,
    inclination_start_deg: f64,
    inclination_end_deg: f64,
    hinge_advance_m: f64,
) -> Result<TipDisplacement, DomainError> {
    let floor = design.surface_thrust_deg();
    for (name, v) in [
        ("inclination_start_deg", inclination_start_deg),
        ("inclination_end_deg", inclination_end_deg),
    ] {
        // The surface pose is computed from the same asin, so allow for rounding.
        ensure(
            name,
            v,
            v >= floor - 1e-12 && v <= 90.0,
            &format!("{floor} <= inclination <= 90"),
        )?;
    }
    let (s0, c0) = inclination_start_deg.to_radians().sin_cos();
    let (s1, c1) = inclination_end_deg.to_radians().sin_cos();
    let r = design.radius_m;
    Ok(TipDisplacement {
        dx_tip_m: hinge_advance_m - r * (c0 - c1),
        dz_tip_m: r * (s1 - s0),
    })
}
