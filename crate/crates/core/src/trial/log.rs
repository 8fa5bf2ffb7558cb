//! The trial-log text format.
//!
//! ```text
//! # site=dry diameter_mm=21 radius_m=1.34 hinge_m=0.09 rake0_deg=45 vehicle_kg=50 pulley_mu=0.23
//! step,basket_kg,motion_mm,incl_deg
//! 0,0,0,3.9
//! 1,25,4,5.2
//! ```
//!
//! Motion is cumulative from the start of the trial. Numbers are written with
//! Rust's shortest round-trip formatting, so write-then-parse is exact.

use std::fmt::Write as _;

use super::{LoadStep, TrialLog, TrialMetadata};
use crate::error::ParseError;
use crate::soilmech::Moisture;

pub const COLUMN_HEADER: &str = "step,basket_kg,motion_mm,incl_deg";

const META_KEYS: [&str; 7] = [
    "site",
    "diameter_mm",
    "radius_m",
    "hinge_m",
    "rake0_deg",
    "vehicle_kg",
    "pulley_mu",
];

fn parse_num<T: std::str::FromStr>(line: usize, what: &str, text: &str) -> Result<T, ParseError> {
    text.trim()
        .parse()
        .map_err(|_| ParseError::new(line, format!("{what}: `{}` is not a number", text.trim())))
}

fn parse_metadata(line: &str) -> Result<TrialMetadata, ParseError> {
    let body = line
        .strip_prefix('#')
        .ok_or_else(|| ParseError::new(1, "expected metadata line starting with `#`"))?;
    let mut values: [Option<&str>; 7] = [None; 7];
    for token in body.split_whitespace() {
        let (key, value) = token.split_once('=').ok_or_else(|| {
            ParseError::new(1, format!("metadata token `{token}` is not key=value"))
        })?;
        let slot = META_KEYS
            .iter()
            .position(|k| *k == key)
            .ok_or_else(|| ParseError::new(1, format!("unknown metadata key `{key}`")))?;
        if values[slot].replace(value).is_some() {
            return Err(ParseError::new(
                1,
                format!("duplicate metadata key `{key}`"),
            ));
        }
    }
    let get = |i: usize| {
        values[i]
            .ok_or_else(|| ParseError::new(1, format!("missing metadata key `{}`", META_KEYS[i])))
    };
    let site = match get(0)? {
        "dry" => Moisture::Dry,
        "moist" => Moisture::Moist,
        other => {
            return Err(ParseError::new(
                1,
                format!("site `{other}` must be dry or moist"),
            ))
        }
    };
    let meta = TrialMetadata {
        site,
        diameter_mm: parse_num(1, "diameter_mm", get(1)?)?,
        radius_m: parse_num(1, "radius_m", get(2)?)?,
        hinge_m: parse_num(1, "hinge_m", get(3)?)?,
        rake0_deg: parse_num(1, "rake0_deg", get(4)?)?,
        vehicle_kg: parse_num(1, "vehicle_kg", get(5)?)?,
        pulley_mu: parse_num(1, "pulley_mu", get(6)?)?,
    };
    meta.validate()
        .map_err(|e| ParseError::new(1, e.to_string()))?;
    Ok(meta)
}

fn parse_row(line_no: usize, line: &str) -> Result<LoadStep, ParseError> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != 4 {
        return Err(ParseError::new(
            line_no,
            format!("expected 4 fields, found {}", fields.len()),
        ));
    }
    let step = parse_num(line_no, "step", fields[0])?;
    let basket_kg: f64 = parse_num(line_no, "basket_kg", fields[1])?;
    let motion_mm: f64 = parse_num(line_no, "motion_mm", fields[2])?;
    let incl_deg: f64 = parse_num(line_no, "incl_deg", fields[3])?;
    for (name, v) in [
        ("basket_kg", basket_kg),
        ("motion_mm", motion_mm),
        ("incl_deg", incl_deg),
    ] {
        if !v.is_finite() {
            return Err(ParseError::new(line_no, format!("{name} is not finite")));
        }
    }
    Ok(LoadStep {
        step,
        basket_kg,
        motion_mm,
        incl_deg,
    })
}

/// Parses and validates a trial log.
///
/// An input with only the two header lines is a valid, empty log.
pub fn parse_trial_log(input: &str) -> Result<TrialLog, ParseError> {
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
    let (_, meta_line) = lines
        .next()
        .ok_or_else(|| ParseError::new(1, "empty input: expected metadata line"))?;
    let metadata = parse_metadata(meta_line.trim())?;
    match lines.next() {
        Some((_, h)) if h.trim() == COLUMN_HEADER => {}
        Some((n, h)) => {
            return Err(ParseError::new(
                n,
                format!(
                    "expected column header `{COLUMN_HEADER}`, found `{}`",
                    h.trim()
                ),
            ))
        }
        None => return Err(ParseError::new(2, "missing column header")),
    }
    let mut steps = Vec::new();
    let mut line_numbers = Vec::new();
    for (n, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        steps.push(parse_row(n, line)?);
        line_numbers.push(n);
    }
    TrialLog::with_line_numbers(metadata, steps, &line_numbers)
}

/// Serialises a log in the format read by [`parse_trial_log`].
pub fn write_trial_log(log: &TrialLog) -> String {
    let m = &log.metadata;
    let mut out = String::new();
    writeln!(
        out,
        "# site={} diameter_mm={} radius_m={} hinge_m={} rake0_deg={} vehicle_kg={} pulley_mu={}",
        m.site, m.diameter_mm, m.radius_m, m.hinge_m, m.rake0_deg, m.vehicle_kg, m.pulley_mu
    )
    .unwrap();
    out.push_str(COLUMN_HEADER);
    out.push('\n');
    for s in &log.steps {
        writeln!(
            out,
            "{},{},{},{}",
            s.step, s.basket_kg, s.motion_mm, s.incl_deg
        )
        .unwrap();
    }
    out
}
