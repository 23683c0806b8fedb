use micropolar::config::RunConfig;
use micropolar::output::{norms_csv, parse_csv, profile_csv, snapshot_csv, summary_json};
use micropolar::profiles::{CompositeWave, ProfileField};
use micropolar::riemann::solve_pattern;
use micropolar::solver::run;

fn small_run_config() -> RunConfig {
    RunConfig::default()
        .with_overrides(&[
            "grid.n=256",
            "grid.half_width=30.0",
            "time.t_final=2.0",
            "time.snapshot_every=1.0",
        ])
        .unwrap()
}

#[test]
fn config_survives_toml() {
    let mut c = small_run_config();
    c.diagnostics.alpha = Some(0.3);
    c.output.directory = Some("somewhere".into());
    let text = c.to_toml().unwrap();
    assert_eq!(RunConfig::from_toml(&text).unwrap(), c);
    assert_eq!(
        RunConfig::from_toml(&RunConfig::default().to_toml().unwrap()).unwrap(),
        RunConfig::default()
    );
}

#[test]
fn profile_dump_reevaluates_bit_for_bit() {
    let c = RunConfig::default();
    let pattern = solve_pattern(&c.gas, &c.end_states().unwrap(), &c.profiles.pattern()).unwrap();
    let field = ProfileField::Composite(CompositeWave::build(&c.gas, &pattern, &c.profiles.selfsimilar()).unwrap());
    let xs: Vec<f64> = (0..97).map(|i| -40.0 + i as f64 * 0.8333).collect();
    let csv = profile_csv(&field, &[0.0, 0.3, 7.0], &xs).unwrap();
    let (_, rows) = parse_csv(&csv).unwrap();
    assert_eq!(rows.len(), 3 * xs.len());
    for row in rows {
        let j = field.eval(row[0], row[1]).unwrap();
        assert_eq!(&row[2..], &[j.v.val, j.u.val, j.theta.val, j.v.x, j.u.x, j.theta.x]);
    }
}

#[test]
fn flat_profile_columns_are_constant() {
    let c = RunConfig::default().with_overrides(&["pattern.delta=0.0"]).unwrap();
    let pattern = solve_pattern(&c.gas, &c.end_states().unwrap(), &c.profiles.pattern()).unwrap();
    let field = ProfileField::Composite(CompositeWave::build(&c.gas, &pattern, &c.profiles.selfsimilar()).unwrap());
    let (_, rows) = parse_csv(&profile_csv(&field, &[0.0, 5.0], &[-3.0, 0.0, 3.0]).unwrap()).unwrap();
    for row in rows {
        assert_eq!(&row[2..], &[1.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
    }
}

#[test]
fn identical_runs_write_identical_files() {
    let c = small_run_config();
    let (a, b) = (run(&c).unwrap(), run(&c).unwrap());
    assert_eq!(norms_csv(&a.reports), norms_csv(&b.reports));
    assert_eq!(summary_json(&a).unwrap(), summary_json(&b).unwrap());
    let xs = a.grid.nodes();
    let last =
        |o: &micropolar::solver::RunOutput| snapshot_csv(&xs, o.snapshots.last().unwrap(), &o.composite).unwrap();
    assert_eq!(last(&a), last(&b));
}

#[test]
fn summary_echoes_config() {
    let c = small_run_config();
    let out = run(&c).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&summary_json(&out).unwrap()).unwrap();
    let echoed: RunConfig = serde_json::from_value(doc["config"].clone()).unwrap();
    assert_eq!(echoed, c);
    assert_eq!(doc["snapshots"].as_array().unwrap().len(), out.snapshots.len());
}
