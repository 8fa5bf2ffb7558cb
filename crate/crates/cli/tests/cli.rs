use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use interlock_core::{max_crescent_force, tractive_efficiency, ForceLaw, SoilProperties};
use tempfile::TempDir;

const LOG: &str =
    "# site=dry diameter_mm=21 radius_m=1.34 hinge_m=0.09 rake0_deg=45 vehicle_kg=50 pulley_mu=0.23
step,basket_kg,motion_mm,incl_deg
0,0,0,3.9
1,40,5,4.2
2,80,30,4.5
3,120,35,6.0
4,160,38,6.2
";

fn interlock(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_interlock"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn field(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .parse()
        .unwrap()
}

#[test]
fn crescent_matches_library() {
    let dir = TempDir::new().unwrap();
    let o = interlock(
        dir.path(),
        &[
            "crescent",
            "--depth",
            "0.30",
            "--width",
            "0.021",
            "--soil",
            "preset:dry",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let lib =
        max_crescent_force(0.30, 0.021, &SoilProperties::dry_sand(), ForceLaw::Active).unwrap();
    let text = stdout(&o);
    assert!((field(&text, "beta_star_deg") - lib.beta_star_deg).abs() < 1e-9);
    assert!((field(&text, "force_N") - lib.force_n).abs() / lib.force_n < 1e-5);
}

#[test]
fn crescent_at_surface_is_zero_and_writes_curve() {
    let dir = TempDir::new().unwrap();
    let o = interlock(
        dir.path(),
        &[
            "crescent",
            "--depth",
            "0",
            "--width",
            "0.021",
            "--soil",
            "preset:moist",
            "--out",
            "curve.csv",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(field(&stdout(&o), "force_N"), 0.0);
    let curve = fs::read_to_string(dir.path().join("curve.csv")).unwrap();
    assert!(curve.starts_with("beta_deg,force_N\n"));
    assert!(curve.lines().skip(1).all(|l| l.ends_with(",0")));
}

#[test]
fn crescent_soil_file_and_bad_scan() {
    let dir = TempDir::new().unwrap();
    write(
        dir.path(),
        "soil.toml",
        "bulk_density_kg_m3 = 1720\nfriction_angle_deg = 30\nmoisture = \"dry\"\n",
    );
    let o = interlock(
        dir.path(),
        &[
            "crescent",
            "--depth",
            "0.3",
            "--width",
            "0.021",
            "--soil",
            "soil.toml",
        ],
    );
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "beta_star_deg"), 45.5);

    let o = interlock(
        dir.path(),
        &[
            "crescent",
            "--depth",
            "0.3",
            "--width",
            "0.021",
            "--soil",
            "preset:dry",
            "--beta-min",
            "60",
            "--beta-max",
            "50",
        ],
    );
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("scan"));

    write(
        dir.path(),
        "bad.toml",
        "bulk_density_kg_m3 = -1\nfriction_angle_deg = 30\nmoisture = \"dry\"\n",
    );
    let o = interlock(
        dir.path(),
        &[
            "crescent", "--depth", "0.3", "--width", "0.021", "--soil", "bad.toml",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bulk_density_kg_m3"));
}

#[test]
fn published_designs_fail_the_window() {
    let dir = TempDir::new().unwrap();
    write(
        dir.path(),
        "space.toml",
        "[[candidate]]\nradius_m = 0.58\ninitial_rake_deg = 45\ndiameter_mm = 12\ndesign_depth_m = 0.15\n\n\
         [[candidate]]\nradius_m = 1.34\ninitial_rake_deg = 45\ndiameter_mm = 21\ndesign_depth_m = 0.50\n",
    );
    write(dir.path(), "c.toml", "");
    let o = interlock(
        dir.path(),
        &[
            "design",
            "--space",
            "space.toml",
            "--constraints",
            "c.toml",
            "--out",
            "r.csv",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("r.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1, "header only: {csv}");
    assert!(stderr(&o).contains("most common violation: window (2 designs)"));
}

fn grid(dir: &Path) {
    write(
        dir,
        "grid.toml",
        "radius_m = { min = 0.8, max = 1.6, step = 0.2 }\n\
         initial_rake_deg = { min = 20, max = 40, step = 5 }\n\
         diameter_mm = 21\ndesign_depth_m = 0.4\n",
    );
    write(
        dir,
        "c.toml",
        "max_thrust_deg = 25\n\n[critical_depth]\nk0 = 6\nk1 = 1\n",
    );
}

#[test]
fn top_one_is_the_best_design() {
    let dir = TempDir::new().unwrap();
    grid(dir.path());
    let all = interlock(
        dir.path(),
        &["design", "--space", "grid.toml", "--constraints", "c.toml"],
    );
    assert!(all.status.success(), "{}", stderr(&all));
    let rows: Vec<String> = stdout(&all).lines().skip(1).map(String::from).collect();
    assert!(rows.len() >= 3);
    let objective = |row: &str| row.split(',').nth(6).unwrap().parse::<f64>().unwrap();
    let best = rows.iter().map(|r| objective(r)).fold(f64::MIN, f64::max);

    let top = interlock(
        dir.path(),
        &[
            "design",
            "--space",
            "grid.toml",
            "--constraints",
            "c.toml",
            "--top",
            "1",
        ],
    );
    let top_rows: Vec<String> = stdout(&top).lines().skip(1).map(String::from).collect();
    assert_eq!(top_rows.len(), 1);
    assert_eq!(objective(&top_rows[0]), best);
    assert_eq!(top_rows[0], rows[0]);
}

#[test]
fn single_point_space_gives_one_row() {
    let dir = TempDir::new().unwrap();
    write(
        dir.path(),
        "one.toml",
        "radius_m = 1.6\ninitial_rake_deg = 20\ndiameter_mm = 21\ndesign_depth_m = 0.4\n",
    );
    write(dir.path(), "c.toml", "");
    let o = interlock(
        dir.path(),
        &[
            "design",
            "--space",
            "one.toml",
            "--constraints",
            "c.toml",
            "--format",
            "json",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("\"feasible\": 1"));
    assert!(text.contains("\"rank\": 1"));
}

#[test]
fn design_rejects_bad_constraints() {
    let dir = TempDir::new().unwrap();
    grid(dir.path());
    write(
        dir.path(),
        "bad.toml",
        "window_low_deg = 40\nwindow_high_deg = 30\n",
    );
    let o = interlock(
        dir.path(),
        &[
            "design",
            "--space",
            "grid.toml",
            "--constraints",
            "bad.toml",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
    write(dir.path(), "typo.toml", "max_thrust = 25\n");
    let o = interlock(
        dir.path(),
        &[
            "design",
            "--space",
            "grid.toml",
            "--constraints",
            "typo.toml",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("max_thrust"));
}

#[test]
fn analyze_efficiency_composes_library() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "log.csv", LOG);
    let o = interlock(
        dir.path(),
        &[
            "analyze",
            "--log",
            "log.csv",
            "--out",
            "r.json",
            "--push-distance",
            "2.0",
            "--series",
            "fig",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let json = fs::read_to_string(dir.path().join("r.json")).unwrap();
    let number_after = |key: &str| -> f64 {
        let i = json.find(&format!("\"{key}\": ")).unwrap() + key.len() + 4;
        json[i..]
            .split([',', '\n'])
            .next()
            .unwrap()
            .parse()
            .unwrap()
    };
    let work = number_after("penetration_work_J");
    let draft = number_after("max_draft_N");
    let e = number_after("efficiency_at_push");
    assert!((e - tractive_efficiency(work, draft, 2.0).unwrap()).abs() < 1e-5);
    for f in [
        "depth_raw.csv",
        "depth_filtered.csv",
        "tip_trajectory.csv",
        "work.csv",
        "thrust.csv",
        "lift.csv",
    ] {
        let body = fs::read_to_string(dir.path().join("fig").join(f)).unwrap();
        assert_eq!(body.lines().count(), 6, "{f}");
    }
}

#[test]
fn analyze_is_byte_identical_on_repeat() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "log.csv", LOG);
    for out in ["a", "b"] {
        let o = interlock(
            dir.path(),
            &[
                "analyze",
                "--log",
                "log.csv",
                "--out",
                &format!("{out}.json"),
                "--series",
                out,
            ],
        );
        assert!(o.status.success());
    }
    let read = |p: &str| fs::read(dir.path().join(p)).unwrap();
    assert_eq!(read("a.json"), read("b.json"));
    assert_eq!(read("a/lift.csv"), read("b/lift.csv"));
    assert_eq!(read("a/work.csv"), read("b/work.csv"));
}

#[test]
fn analyze_empty_log() {
    let dir = TempDir::new().unwrap();
    let header: String = LOG.lines().take(2).map(|l| format!("{l}\n")).collect();
    write(dir.path(), "empty.csv", &header);
    let o = interlock(
        dir.path(),
        &["analyze", "--log", "empty.csv", "--out", "r.json"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let json = fs::read_to_string(dir.path().join("r.json")).unwrap();
    assert!(json.contains("\"max_draft_N\": null"));
    assert!(json.contains("\"efficiency_at_push\": null"));
}

#[test]
fn analyze_failures_leave_no_output() {
    let dir = TempDir::new().unwrap();
    let o = interlock(
        dir.path(),
        &["analyze", "--log", "missing.csv", "--out", "r.json"],
    );
    assert_eq!(o.status.code(), Some(4));
    assert!(!dir.path().join("r.json").exists());

    let bad = LOG.replace("3,120,35,6.0", "3,20,35,6.0");
    write(dir.path(), "bad.csv", &bad);
    fs::write(dir.path().join("keep.json"), "previous").unwrap();
    let o = interlock(
        dir.path(),
        &[
            "analyze",
            "--log",
            "bad.csv",
            "--out",
            "keep.json",
            "--series",
            "fig",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
    let msg = stderr(&o);
    assert!(msg.contains("bad.csv") && msg.contains("line 6"), "{msg}");
    assert_eq!(
        fs::read_to_string(dir.path().join("keep.json")).unwrap(),
        "previous"
    );
    assert!(!dir.path().join("fig").exists());
    let leftovers = fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(leftovers, 2, "only the inputs remain");
}

#[test]
fn analyze_liftoff_and_threshold_flags() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "log.csv", LOG);
    let o = interlock(
        dir.path(),
        &[
            "analyze",
            "--log",
            "log.csv",
            "--out",
            "r.json",
            "--liftoff-step",
            "9",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
    let o = interlock(
        dir.path(),
        &[
            "analyze",
            "--log",
            "log.csv",
            "--out",
            "r.json",
            "--depth-threshold=-1",
        ],
    );
    assert_eq!(o.status.code(), Some(3));
    let o = interlock(
        dir.path(),
        &[
            "analyze",
            "--log",
            "log.csv",
            "--out",
            "r.json",
            "--depth-threshold",
            "1",
            "--motion-threshold",
            "1",
        ],
    );
    assert!(o.status.success());
    let json = fs::read_to_string(dir.path().join("r.json")).unwrap();
    assert!(json.contains("\"events\": []"));
}

#[test]
fn simulate_then_analyze() {
    let dir = TempDir::new().unwrap();
    write(
        dir.path(),
        "design.toml",
        "radius_m = 1.34\ninitial_rake_deg = 45\ndiameter_mm = 21\ndesign_depth_m = 0.5\n",
    );
    write(
        dir.path(),
        "sched.csv",
        "step,draft_N\n0,0\n1,500\n2,1000\n3,2000\n",
    );
    let o = interlock(
        dir.path(),
        &[
            "simulate",
            "--design",
            "design.toml",
            "--soil",
            "preset:dry",
            "--draft-schedule",
            "sched.csv",
            "--out",
            "pred.csv",
            "--log-out",
            "sim.csv",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let pred = fs::read_to_string(dir.path().join("pred.csv")).unwrap();
    assert_eq!(pred.lines().count(), 5);
    assert!(pred.lines().last().unwrap().contains(",lateral,"));

    let o = interlock(
        dir.path(),
        &["analyze", "--log", "sim.csv", "--out", "r.json"],
    );
    assert!(o.status.success(), "{}", stderr(&o));

    let o = interlock(
        dir.path(),
        &[
            "simulate",
            "--design",
            "design.toml",
            "--soil",
            "preset:dry",
            "--draft-schedule",
            "sched.csv",
            "--stiffness",
            "100",
            "--out",
            "x.csv",
        ],
    );
    assert_eq!(o.status.code(), Some(3));
    assert!(!dir.path().join("x.csv").exists());
}

#[test]
fn usage_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    assert_eq!(
        interlock(dir.path(), &["frobnicate"]).status.code(),
        Some(2)
    );
    let o = interlock(
        dir.path(),
        &[
            "crescent",
            "--depth",
            "0.3",
            "--width",
            "0.02",
            "--soil",
            "preset:wet",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
    let o = interlock(
        dir.path(),
        &[
            "crescent",
            "--depth",
            "0.3",
            "--width",
            "0.02",
            "--soil",
            "preset:dry",
            "--law",
            "sideways",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
}
