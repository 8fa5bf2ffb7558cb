//! Fixtures shared by the benchmarks.

use interlock_core::{
    thrust_angle, DesignSpace, LoadStep, Moisture, ParamRange, PulleyRig, SpikeDesign, TrialLog,
    TrialMetadata,
};

/// A trial on the large 21 mm spike with `steps` load steps and a landslide
/// every tenth step.
pub fn synthetic_log(steps: usize) -> TrialLog {
    let design = SpikeDesign::large_radius(21.0);
    let rig = PulleyRig::default();
    let reach = 0.95 * design.max_depth_m();
    let rows = (0..steps)
        .map(|i| {
            let t = i as f64 / steps.max(1) as f64;
            let slides = (i / 10) as f64;
            let depth = (reach * t * 0.8 + 0.01 * slides).min(reach);
            LoadStep {
                step: i as u64,
                basket_kg: rig.basket_for_draft(2500.0 * t),
                motion_mm: 2.0 * i as f64 + 20.0 * slides,
                incl_deg: thrust_angle(&design, depth).expect("depth within reach"),
            }
        })
        .collect();
    TrialLog::new(
        TrialMetadata {
            site: Moisture::Dry,
            diameter_mm: 21,
            radius_m: design.radius_m(),
            hinge_m: design.hinge_height_m(),
            rake0_deg: design.initial_rake_deg(),
            vehicle_kg: 50.0,
            pulley_mu: rig.friction_coefficient,
        },
        rows,
    )
    .expect("synthetic log is valid")
}

/// A design space with roughly `points_per_axis^4` points (hinge fixed).
pub fn design_space(points_per_axis: usize) -> DesignSpace {
    let n = points_per_axis.max(1) as f64;
    let range = |min: f64, max: f64| ParamRange {
        min,
        max,
        step: if n > 1.0 {
            (max - min) / (n - 1.0)
        } else {
            1.0
        },
    };
    DesignSpace {
        radius_m: range(0.6, 1.6),
        hinge_height_m: ParamRange::fixed(0.09),
        initial_rake_deg: range(20.0, 60.0),
        diameter_mm: range(10.0, 50.0),
        design_depth_m: range(0.1, 0.5),
    }
}
