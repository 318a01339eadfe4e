//! One function per subcommand. Each returns the CSV files, plot and JSON
//! summary it produced; nothing is written here.

use std::path::PathBuf;

use coop_emission::oracle::oracle_spectrum_point;
use coop_emission::spectrum::{spectrum_point_with, spectrum_sweep_with};
use coop_emission::{decay_rate, decay_vs_distance, FrequencyGrid, RegimeWarning, SpectrumOptions};
use serde_json::{json, Value};

use crate::config::{RunConfig, SystemSection, Task};
use crate::error::CliError;
use crate::output::{render_csv, sibling, Table};
use crate::plot::{self, Plot, Series};

pub struct Outcome {
    pub files: Vec<(PathBuf, String)>,
    pub plot: Option<String>,
    pub summary: Value,
    /// Set when the run completed but its check did not pass.
    pub failure: Option<CliError>,
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cfg.task.expect("resolved config carries its task") {
        Task::Spectrum => spectrum(cfg),
        Task::Decay => decay(cfg),
        Task::DecaySweep => decay_sweep(cfg),
        Task::Validate => validate(cfg),
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (lo + hi)];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn header(cfg: &RunConfig, extra: &[String], warnings: &[RegimeWarning]) -> Vec<String> {
    let mut lines = vec![
        format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
        format!("task: {}", cfg.task.map(Task::name).unwrap_or("?")),
    ];
    lines.extend(extra.iter().cloned());
    lines.push("resolved config:".into());
    lines.push(serde_json::to_string_pretty(cfg).expect("config serializes"));
    lines.push(format!("warnings: {}", serde_json::to_string(warnings).expect("warnings serialize")));
    lines
}

fn prepare(section: &SystemSection) -> Result<(coop_emission::SystemConfig, coop_emission::Validated), CliError> {
    let system = section.to_system();
    let validated = system.validate()?;
    Ok((system, validated))
}

fn extremum<'a>(values: impl Iterator<Item = (f64, f64)> + 'a, key: &str, largest: bool) -> Value {
    let best = values.fold(None, |acc: Option<(f64, f64)>, (x, v)| match acc {
        Some((_, b)) if (largest && b >= v) || (!largest && b <= v) => acc,
        _ => Some((x, v)),
    });
    match best {
        Some((x, v)) => json!({ key: x, "value": v }),
        None => Value::Null,
    }
}

fn spectrum(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let s = cfg.spectrum.as_ref().expect("resolved");
    let half = s.half_width.expect("resolved");
    let points = s.points.expect("resolved");
    let grid = FrequencyGrid::uniform(half, points)?;

    let mut runs = vec![("primary".to_string(), cfg.system.clone(), s.t)];
    for ov in &s.overlays {
        runs.push((ov.label.clone(), cfg.system.with_overlay(ov), ov.t.unwrap_or(s.t)));
    }

    let mut files = Vec::new();
    let mut series = Vec::new();
    let mut summaries = Vec::new();
    let mut all_warnings = Vec::new();
    for (label, section, t) in &runs {
        let (system, validated) = prepare(section)?;
        let options = SpectrumOptions { interference_prefactor: section.interference_prefactor };
        let result = spectrum_sweep_with(&system, &validated.geometry, &grid, *t, &options)?;

        let mut table = Table::new(&[
            "omega_k",
            "detuning",
            "p0",
            "p1",
            "p2",
            "single_atom",
            "interference",
            "total",
            "total_normalized",
        ]);
        for (p, n) in result.points.iter().zip(&result.normalized) {
            table.push(vec![p.omega_k, p.detuning, p.p0, p.p1, p.p2, p.single_atom, p.interference, p.total, *n]);
        }
        if let Some(path) = &cfg.output.csv {
            let path = if label == "primary" { path.clone() } else { sibling(path, label) };
            let extra = [format!("series: {label}"), format!("t: {}", crate::output::num(*t))];
            files.push((path, render_csv(&header(cfg, &extra, &validated.warnings), &table)));
        }

        let w = if system.mirror.is_static() { 0.0 } else { system.mirror.frequency };
        let window = if w > 0.0 { 0.25 * w } else { 2.0 * std::f64::consts::PI / t.max(f64::MIN_POSITIVE) };
        let peak = |d: f64| result.peak_near(d, window).map(|p| json!(p)).unwrap_or(Value::Null);
        let mut entry = json!({
            "label": label,
            "t": t,
            "normalization": result.normalization,
            "central_peak": peak(0.0),
            "top_peaks": result.top_peaks(5),
        });
        if w > 0.0 {
            entry["lateral_peaks"] = json!({ "minus": peak(-w), "plus": peak(w) });
        }
        summaries.push(entry);
        all_warnings.push(json!({ "series": label, "warnings": validated.warnings }));
        series.push(Series { label: label.clone(), x: table.column("detuning"), y: table.column("total_normalized") });
    }

    let plot = cfg.output.plot.as_ref().map(|_| {
        plot::render(&Plot {
            title: "Emitted spectrum".into(),
            x_label: "detuning omega_k - omega0 (rad/s)".into(),
            y_label: "P / total emission probability (s)".into(),
            series,
        })
    });
    Ok(Outcome {
        files,
        plot,
        summary: json!({ "task": "spectrum", "series": summaries, "warnings": all_warnings }),
        failure: None,
    })
}

fn decay(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let d = cfg.decay.as_ref().expect("resolved");
    let (system, validated) = prepare(&cfg.system)?;
    let mut table = Table::new(&["t", "gamma_a", "gamma_b", "gamma_ab", "total", "total_absolute"]);
    let mut negative = false;
    let mut einstein = 0.0;
    for &t in &d.times {
        let r = decay_rate(&system, &validated.geometry, t)?;
        negative |= r.negative_total;
        einstein = r.einstein_a;
        let s = r.scaled;
        table.push(vec![t, s.gamma_a, s.gamma_b, s.gamma_ab, s.total, r.absolute.total]);
    }
    let files = match &cfg.output.csv {
        Some(path) => vec![(path.clone(), render_csv(&header(cfg, &[], &validated.warnings), &table))],
        None => Vec::new(),
    };
    let times = table.column("t");
    let totals = table.column("total");
    let pairs = || times.iter().copied().zip(totals.iter().copied());
    let summary = json!({
        "task": "decay",
        "einstein_a": einstein,
        "min_total": extremum(pairs(), "t", false),
        "max_total": extremum(pairs(), "t", true),
        "negative_total": negative,
        "warnings": validated.warnings,
    });
    let plot = cfg.output.plot.as_ref().map(|_| {
        plot::render(&Plot {
            title: "Collective decay rate".into(),
            x_label: "t (s)".into(),
            y_label: "Gamma / A".into(),
            series: vec![Series { label: "total".into(), x: times.clone(), y: totals.clone() }],
        })
    });
    Ok(Outcome { files, plot, summary, failure: None })
}

fn decay_sweep(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let s = cfg.decay_sweep.as_ref().expect("resolved");
    let (system, validated) = prepare(&cfg.system)?;
    let z_b = linspace(s.z_b.start, s.z_b.stop, s.z_b.points.expect("resolved"));
    let table_data = decay_vs_distance(&system, &z_b, &s.times)?;

    let mut columns = vec!["z_b".to_string(), "static_total".to_string()];
    columns.extend((0..s.times.len()).map(|i| format!("total_t{i}")));
    let mut table = Table { columns, rows: Vec::new() };
    let mut negative = false;
    for row in &table_data.rows {
        let mut r = vec![row.z_b, row.static_total];
        for rate in &row.rates {
            negative |= rate.negative_total;
            r.push(rate.scaled.total);
        }
        table.push(r);
    }
    let files = match &cfg.output.csv {
        Some(path) => {
            let extra: Vec<String> = s
                .times
                .iter()
                .enumerate()
                .map(|(i, t)| format!("total_t{i}: t = {}", crate::output::num(*t)))
                .collect();
            vec![(path.clone(), render_csv(&header(cfg, &extra, &validated.warnings), &table))]
        }
        None => Vec::new(),
    };

    let stat = table.column("static_total");
    let pairs = |v: &[f64]| z_b.iter().copied().zip(v.iter().copied()).collect::<Vec<_>>();
    let per_time: Vec<Value> = s
        .times
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let col = table.column(&format!("total_t{i}"));
            json!({
                "t": t,
                "min": extremum(pairs(&col).into_iter(), "z_b", false),
                "max": extremum(pairs(&col).into_iter(), "z_b", true),
            })
        })
        .collect();
    let summary = json!({
        "task": "decay-sweep",
        "bell_state": system.bell_state,
        "static": {
            "min": extremum(pairs(&stat).into_iter(), "z_b", false),
            "max": extremum(pairs(&stat).into_iter(), "z_b", true),
        },
        "times": per_time,
        "negative_total": negative,
        "warnings": validated.warnings,
    });

    let plot = cfg.output.plot.as_ref().map(|_| {
        let mut series = vec![Series { label: "static mirror".into(), x: z_b.clone(), y: stat.clone() }];
        for (i, t) in s.times.iter().enumerate() {
            series.push(Series {
                label: format!("t = {t:.3e} s"),
                x: z_b.clone(),
                y: table.column(&format!("total_t{i}")),
            });
        }
        plot::render(&Plot {
            title: "Collective decay rate vs position of atom B".into(),
            x_label: "z_B (m)".into(),
            y_label: "Gamma / A".into(),
            series,
        })
    });
    Ok(Outcome { files, plot, summary, failure: None })
}

fn validate(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let v = cfg.validate.as_ref().expect("resolved");
    let (system, validated) = prepare(&cfg.system)?;
    let half = v.half_width.expect("resolved");
    let tolerance = v.tolerance.expect("resolved");
    let options = SpectrumOptions { interference_prefactor: cfg.system.interference_prefactor };

    let mut table =
        Table::new(&["omega_k", "detuning", "closed_form", "oracle", "oracle_error_estimate", "relative_error"]);
    let mut worst: f64 = 0.0;
    for d in linspace(-half, half, v.points.expect("resolved")) {
        let omega_k = system.omega0 + d;
        let closed = spectrum_point_with(&system, &validated.geometry, omega_k, v.t, &options)?;
        let oracle = oracle_spectrum_point(&system, omega_k, v.t, &v.oracle)?;
        let rel = (closed.total - oracle.total).abs() / oracle.total.abs();
        worst = worst.max(rel);
        table.push(vec![omega_k, d, closed.total, oracle.total, oracle.error_estimate, rel]);
    }
    let files = match &cfg.output.csv {
        Some(path) => vec![(path.clone(), render_csv(&header(cfg, &[], &validated.warnings), &table))],
        None => Vec::new(),
    };
    let pass = worst <= tolerance;
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| json!({ "detuning": r[1], "closed_form": r[2], "oracle": r[3], "relative_error": r[5] }))
        .collect();
    let summary = json!({
        "task": "validate",
        "t": v.t,
        "tolerance": tolerance,
        "worst_relative_error": worst,
        "pass": pass,
        "points": rows,
        "warnings": validated.warnings,
    });
    let plot = cfg.output.plot.as_ref().map(|_| {
        plot::render(&Plot {
            title: "Closed form vs quadrature oracle".into(),
            x_label: "detuning omega_k - omega0 (rad/s)".into(),
            y_label: "P (s)".into(),
            series: vec![
                Series { label: "closed form".into(), x: table.column("detuning"), y: table.column("closed_form") },
                Series { label: "oracle".into(), x: table.column("detuning"), y: table.column("oracle") },
            ],
        })
    });
    let failure = (!pass).then_some(CliError::Disagreement { worst, tolerance });
    Ok(Outcome { files, plot, summary, failure })
}
