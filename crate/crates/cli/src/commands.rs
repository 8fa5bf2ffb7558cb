use interlock_core::format::{fmt_sig, round_sig};
use interlock_core::report::{analyze, AnalysisOptions};
use interlock_core::simulate::{
    parse_draft_schedule, simulate, simulated_csv, to_trial_log, PenetrationModel,
};
use interlock_core::{
    max_crescent_force_in, parse_trial_log, rank_designs, write_trial_log, BetaScan, ForceLaw,
    LandslideThresholds, PulleyRig, RankedDesign, SearchOutcome,
};
use serde::Serialize;

use crate::config::{load_constraints, load_design, load_soil, load_space};
use crate::error::CliError;
use crate::files::{read_text, Outputs};
use crate::{AnalyzeArgs, CrescentArgs, DesignArgs, OutputFormat, SimulateArgs};

pub fn run_analyze(args: &AnalyzeArgs) -> Result<(), CliError> {
    let text = read_text(&args.log)?;
    let log = parse_trial_log(&text).map_err(|e| CliError::parse(&args.log, e))?;

    let observed_liftoff_from = match args.liftoff_step {
        None => None,
        Some(step) => Some(
            log.steps
                .iter()
                .position(|s| s.step == step)
                .ok_or_else(|| {
                    CliError::Usage(format!("--liftoff-step {step}: no such step in the log"))
                })?,
        ),
    };
    let options = AnalysisOptions {
        push_distance_m: args.push_distance,
        thresholds: LandslideThresholds::new(args.depth_threshold, args.motion_threshold)?,
        observed_liftoff_from,
    };
    if !options.push_distance_m.is_finite() || options.push_distance_m < 0.0 {
        return Err(CliError::Usage(format!(
            "--push-distance must be finite and >= 0, got {}",
            options.push_distance_m
        )));
    }
    let report = analyze(&log, &options)?;

    let mut out = Outputs::default();
    out.file(&args.out, report.to_json());
    if let Some(dir) = &args.series {
        out.dir(dir);
        for (name, body) in report.figure_csvs() {
            out.file(dir.join(name), body);
        }
    }
    out.commit()?;
    eprintln!(
        "{}: {} steps, {} landslide events",
        args.out.display(),
        report.series.step.len(),
        report.events.len()
    );
    Ok(())
}

pub fn run_crescent(args: &CrescentArgs) -> Result<String, CliError> {
    let soil = load_soil(&args.soil)?;
    let default = BetaScan::for_law(args.law, &soil);
    let scan = BetaScan {
        min_deg: args.beta_min.unwrap_or(default.min_deg),
        max_deg: args.beta_max.unwrap_or(default.max_deg),
        step_deg: args.beta_step.unwrap_or(default.step_deg),
    };
    let result = max_crescent_force_in(args.depth, args.width, &soil, args.law, scan)?;
    if let Some(path) = &args.out {
        let mut out = Outputs::default();
        out.file(path, result.curve_csv());
        out.commit()?;
    }
    Ok(format!(
        "law = {}\nbeta_star_deg = {}\nforce_N = {}\n",
        match args.law {
            ForceLaw::Active => "active",
            ForceLaw::Passive => "passive",
        },
        fmt_sig(result.beta_star_deg),
        fmt_sig(result.force_n)
    ))
}

const DESIGN_HEADER: [&str; 11] = [
    "radius_m",
    "hinge_height_m",
    "initial_rake_deg",
    "diameter_mm",
    "design_depth_m",
    "pull_weight_ratio",
    "thrust_deg",
    "rake_deg",
    "window_difference_deg",
    "critical_depth_m",
    "crescent_bound_N",
];

fn design_row(r: &RankedDesign) -> [f64; 11] {
    let (d, e) = (&r.design, &r.evaluation);
    [
        d.radius_m(),
        d.hinge_height_m(),
        d.initial_rake_deg(),
        d.diameter_mm(),
        d.design_depth_m(),
        e.objective,
        e.thrust_deg,
        e.rake_deg,
        e.window_difference_deg,
        e.critical_depth_m,
        e.crescent_bound_n,
    ]
}

fn design_csv(ranked: &[RankedDesign]) -> String {
    let mut s = format!("rank,{}\n", DESIGN_HEADER.join(","));
    for (i, r) in ranked.iter().enumerate() {
        let cells: Vec<String> = design_row(r).iter().map(|&v| fmt_sig(v)).collect();
        s.push_str(&format!("{},{}\n", i + 1, cells.join(",")));
    }
    s
}

#[derive(Serialize)]
struct DesignJsonRow {
    rank: usize,
    radius_m: f64,
    hinge_height_m: f64,
    initial_rake_deg: f64,
    diameter_mm: f64,
    design_depth_m: f64,
    pull_weight_ratio: f64,
    thrust_deg: f64,
    rake_deg: f64,
    window_difference_deg: f64,
    critical_depth_m: f64,
    #[serde(rename = "crescent_bound_N")]
    crescent_bound_n: f64,
}

#[derive(Serialize)]
struct DesignJson<'a> {
    evaluated: usize,
    invalid: usize,
    feasible: usize,
    violation_counts: &'a std::collections::BTreeMap<&'static str, usize>,
    ranked: Vec<DesignJsonRow>,
}

fn design_json(outcome: &SearchOutcome, ranked: &[RankedDesign]) -> String {
    let rows = ranked
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let v = design_row(r).map(round_sig);
            DesignJsonRow {
                rank: i + 1,
                radius_m: v[0],
                hinge_height_m: v[1],
                initial_rake_deg: v[2],
                diameter_mm: v[3],
                design_depth_m: v[4],
                pull_weight_ratio: v[5],
                thrust_deg: v[6],
                rake_deg: v[7],
                window_difference_deg: v[8],
                critical_depth_m: v[9],
                crescent_bound_n: v[10],
            }
        })
        .collect();
    let doc = DesignJson {
        evaluated: outcome.evaluated,
        invalid: outcome.invalid,
        feasible: outcome.ranked.len(),
        violation_counts: &outcome.violation_counts,
        ranked: rows,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("design results serialise");
    s.push('\n');
    s
}

/// Returns the result document when no `--out` is given, and a one-line
/// summary.
pub fn run_design(args: &DesignArgs) -> Result<(Option<String>, String), CliError> {
    let space = load_space(&args.space)?;
    let (constraints, cd) = load_constraints(&args.constraints)?;
    let soil = load_soil(&args.soil)?;
    let outcome = rank_designs(space.points(), &soil, &constraints, &cd)?;

    let shown = match args.top {
        Some(n) => &outcome.ranked[..n.min(outcome.ranked.len())],
        None => &outcome.ranked[..],
    };
    let body = match args.format {
        OutputFormat::Csv => design_csv(shown),
        OutputFormat::Json => design_json(&outcome, shown),
    };
    let mut summary = format!(
        "evaluated {} designs ({} invalid), {} feasible",
        outcome.evaluated,
        outcome.invalid,
        outcome.ranked.len()
    );
    if outcome.ranked.is_empty() {
        match outcome.most_common_violation() {
            Some((kind, n)) => {
                summary.push_str(&format!("; most common violation: {kind} ({n} designs)"))
            }
            None => summary.push_str("; no valid designs in the space"),
        }
    }
    let stdout = match &args.out {
        Some(path) => {
            let mut out = Outputs::default();
            out.file(path, body);
            out.commit()?;
            None
        }
        None => Some(body),
    };
    Ok((stdout, summary))
}

/// Returns the predicted series when no `--out` is given.
pub fn run_simulate(args: &SimulateArgs) -> Result<Option<String>, CliError> {
    let design = load_design(&args.design)?;
    let soil = load_soil(&args.soil)?;
    let text = read_text(&args.draft_schedule)?;
    let schedule =
        parse_draft_schedule(&text).map_err(|e| CliError::parse(&args.draft_schedule, e))?;
    let default = PenetrationModel::default_for(soil.moisture());
    let model = PenetrationModel::new(
        args.stiffness.unwrap_or(default.stiffness_n_per_m),
        args.trajectory_slope.unwrap_or(default.trajectory_slope),
    )?;
    let rig = PulleyRig::default();
    let cd = interlock_core::CriticalDepthModel::default();
    let steps = simulate(&design, &soil, &rig, &model, &cd, &schedule)?;
    let body = simulated_csv(&steps);

    let mut out = Outputs::default();
    if let Some(path) = &args.log_out {
        let log = to_trial_log(&steps, &design, soil.moisture(), args.vehicle_kg, &rig)
            .map_err(|e| CliError::Usage(format!("simulated log is invalid: {e}")))?;
        out.file(path, write_trial_log(&log));
    }
    let stdout = match &args.out {
        Some(path) => {
            out.file(path, body);
            None
        }
        None => Some(body),
    };
    out.commit()?;
    Ok(stdout)
}
