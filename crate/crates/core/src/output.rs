//! CSV and JSON writers. Numbers use Rust's shortest round-trip formatting
//! (`{:?}`, which switches to exponent form for very large or small
//! magnitudes), so files are deterministic and re-read bit-for-bit.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::RunConfig;
use crate::diagnostics::NormReport;
use crate::error::Result;
use crate::profiles::ProfileField;
use crate::solver::{RunOutput, RunSummary, SimState, StateSource};

pub const SNAPSHOT_HEADER: &str = "x,v,u,theta,omega,V,U,Theta";
pub const PROFILE_HEADER: &str = "t,x,V,U,Theta,V_x,U_x,Theta_x";

fn join(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(",")
}

/// Snapshot rows `(x, v, u, θ, ω, V, U, Θ)`, the last three from `profile`.
pub fn snapshot_csv(xs: &[f64], state: &SimState, profile: &dyn StateSource) -> Result<String> {
    let mut out = String::with_capacity(xs.len() * 160);
    out.push_str(SNAPSHOT_HEADER);
    out.push('\n');
    for (i, &x) in xs.iter().enumerate() {
        let p = profile.state_at(state.t, x)?;
        out.push_str(&join(&[
            x,
            state.v[i],
            state.u[i],
            state.theta[i],
            state.omega[i],
            p.v,
            p.u,
            p.theta,
        ]));
        out.push('\n');
    }
    Ok(out)
}

pub fn norms_csv(reports: &[NormReport]) -> String {
    let mut out = String::from(NormReport::CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

/// Profile values and first derivatives on a `(t, x)` product grid.
pub fn profile_csv(profile: &ProfileField, ts: &[f64], xs: &[f64]) -> Result<String> {
    let mut out = String::from(PROFILE_HEADER);
    out.push('\n');
    for &t in ts {
        for &x in xs {
            let j = profile.eval(t, x)?;
            out.push_str(&join(&[t, x, j.v.val, j.u.val, j.theta.val, j.v.x, j.u.x, j.theta.x]));
            out.push('\n');
        }
    }
    Ok(out)
}

/// Parses a CSV written by this module back into rows of numbers.
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| crate::Error::Config("empty CSV".into()))?
        .split(',')
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for (k, line) in lines.enumerate() {
        let row = line
            .split(',')
            .map(|f| f.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| crate::Error::Config(format!("CSV row {}: {e}", k + 1)))?;
        rows.push(row);
    }
    Ok((header, rows))
}

#[derive(Serialize)]
struct SummaryDocument<'a> {
    config: &'a RunConfig,
    summary: &'a RunSummary,
    snapshots: Vec<f64>,
}

pub fn summary_json(output: &RunOutput) -> Result<String> {
    let doc = SummaryDocument {
        config: &output.config,
        summary: &output.summary,
        snapshots: output.snapshots.iter().map(|s| s.t).collect(),
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

fn write(path: PathBuf, contents: &str, written: &mut Vec<PathBuf>) -> Result<()> {
    let mut f = fs::File::create(&path)?;
    f.write_all(contents.as_bytes())?;
    written.push(path);
    Ok(())
}

/// Writes the artifacts enabled in the config; returns the paths written.
pub fn write_run(output: &RunOutput, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let cfg = &output.config.output;
    let mut written = Vec::new();
    if cfg.snapshots {
        let xs = output.grid.nodes();
        for (k, s) in output.snapshots.iter().enumerate() {
            let csv = snapshot_csv(&xs, s, &output.composite)?;
            write(dir.join(format!("snapshot_{k:04}.csv")), &csv, &mut written)?;
        }
    }
    if cfg.norms {
        write(dir.join("norms.csv"), &norms_csv(&output.reports), &mut written)?;
    }
    if cfg.summary {
        write(dir.join("summary.json"), &summary_json(output)?, &mut written)?;
    }
    Ok(written)
}
