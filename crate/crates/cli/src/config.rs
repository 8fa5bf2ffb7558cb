//! TOML input files: design, soil, design space and constraints.

use std::path::Path;

use interlock_core::geometry::DEFAULT_HINGE_HEIGHT_M;
use interlock_core::{
    CriticalDepthModel, DesignConstraints, DesignSpace, DomainError, ParamRange, SoilProperties,
    SpikeDesign,
};
use serde::Deserialize;

use crate::error::CliError;
use crate::files::{parse_toml, read_text, read_toml};

/// `preset:dry`, `preset:moist`, or a path to a soil file.
pub fn load_soil(spec: &str) -> Result<SoilProperties, CliError> {
    match spec {
        "preset:dry" => Ok(SoilProperties::dry_sand()),
        "preset:moist" => Ok(SoilProperties::moist_sand()),
        other if other.starts_with("preset:") => Err(CliError::Usage(format!(
            "unknown soil preset `{other}` (expected preset:dry or preset:moist)"
        ))),
        path => read_toml(Path::new(path)),
    }
}

pub fn load_design(path: &Path) -> Result<SpikeDesign, CliError> {
    read_toml(path)
}

/// A range written either as a bare number or as `{ min, max, step }`.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RangeSpec {
    Fixed(f64),
    Range(ParamRange),
}

impl From<RangeSpec> for ParamRange {
    fn from(r: RangeSpec) -> Self {
        match r {
            RangeSpec::Fixed(v) => ParamRange::fixed(v),
            RangeSpec::Range(r) => r,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridFile {
    radius_m: RangeSpec,
    #[serde(default)]
    hinge_height_m: Option<RangeSpec>,
    initial_rake_deg: RangeSpec,
    diameter_mm: RangeSpec,
    design_depth_m: RangeSpec,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CandidatesFile {
    candidate: Vec<SpikeDesign>,
}

/// Designs to search: a regular grid or an explicit candidate list.
pub enum SearchSpace {
    Grid(DesignSpace),
    Candidates(Vec<SpikeDesign>),
}

impl SearchSpace {
    pub fn points(&self) -> Vec<Result<SpikeDesign, DomainError>> {
        match self {
            SearchSpace::Grid(g) => g.points(),
            SearchSpace::Candidates(c) => c.iter().copied().map(Ok).collect(),
        }
    }
}

pub fn load_space(path: &Path) -> Result<SearchSpace, CliError> {
    let text = read_text(path)?;
    let table: toml::Table = parse_toml(path, &text)?;
    if table.contains_key("candidate") {
        let file: CandidatesFile = parse_toml(path, &text)?;
        return Ok(SearchSpace::Candidates(file.candidate));
    }
    let g: GridFile = parse_toml(path, &text)?;
    let space = DesignSpace {
        radius_m: g.radius_m.into(),
        hinge_height_m: g
            .hinge_height_m
            .map_or(ParamRange::fixed(DEFAULT_HINGE_HEIGHT_M), Into::into),
        initial_rake_deg: g.initial_rake_deg.into(),
        diameter_mm: g.diameter_mm.into(),
        design_depth_m: g.design_depth_m.into(),
    };
    space
        .validate()
        .map_err(|e| CliError::config(path, e.to_string()))?;
    Ok(SearchSpace::Grid(space))
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ConstraintsFile {
    max_thrust_deg: Option<f64>,
    window_low_deg: Option<f64>,
    window_high_deg: Option<f64>,
    require_lateral_at_design_depth: Option<bool>,
    critical_depth: Option<CriticalDepthModel>,
}

/// Constraints file; every key is optional and the `[critical_depth]` table
/// holds the classifier's `k0` and `k1`.
pub fn load_constraints(path: &Path) -> Result<(DesignConstraints, CriticalDepthModel), CliError> {
    let file: ConstraintsFile = read_toml(path)?;
    let d = DesignConstraints::default();
    let constraints = DesignConstraints {
        max_thrust_deg: file.max_thrust_deg.unwrap_or(d.max_thrust_deg),
        window_low_deg: file.window_low_deg.unwrap_or(d.window_low_deg),
        window_high_deg: file.window_high_deg.unwrap_or(d.window_high_deg),
        require_lateral_at_design_depth: file
            .require_lateral_at_design_depth
            .unwrap_or(d.require_lateral_at_design_depth),
    };
    let cd = file.critical_depth.unwrap_or_default();
    constraints
        .validate()
        .and_then(|_| cd.validate())
        .map_err(|e| CliError::config(path, e.to_string()))?;
    Ok((constraints, cd))
}
