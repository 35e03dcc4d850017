//! Resumable `(u, beta)` parameter sweeps producing the localization
//! heatmap. Cells run independently (work-stealing across the worker pool);
//! each writes its own result file atomically, so an interrupted sweep loses
//! at most the in-flight cells and `--resume` completes the rest.

use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Scenario;
use crate::error::{Error, Result};
use crate::gpe::{evolve, localization_metric, SplitStepConfig};
use crate::output::write_atomic;
use crate::params::ModelParams;

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub u_values: Vec<f64>,
    pub beta_values: Vec<f64>,
    /// Shared scenario; its `u`/`beta` are ignored, the axes win.
    pub base: Scenario,
    /// Averaging window for the localization metric.
    pub window: (f64, f64),
    pub out_dir: PathBuf,
    pub workers: usize,
    pub resume: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub computed: usize,
    pub skipped: usize,
    pub failed: Vec<FailedCell>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FailedCell {
    pub u: f64,
    pub beta: f64,
    pub error: String,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct Ledger {
    schema_version: u32,
    config_digest: String,
    cells: std::collections::BTreeMap<String, String>,
}

fn fnv1a(s: &str) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for b in s.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100_0000_01b3);
    }
    h
}

fn digest(spec: &SweepSpec) -> String {
    let axes = format!(
        "{} | u={:?} beta={:?} window=({:e},{:e})",
        spec.base.canonical_string(),
        spec.u_values,
        spec.beta_values,
        spec.window.0,
        spec.window.1
    );
    format!("{:016x}", fnv1a(&axes))
}

fn cell_name(iu: usize, ib: usize) -> String {
    format!("u{iu:03}_b{ib:03}")
}

fn cell_path(dir: &Path, iu: usize, ib: usize) -> PathBuf {
    dir.join("cells").join(format!("{}.csv", cell_name(iu, ib)))
}

/// Run one sweep cell: evolve and reduce to the localization metric.
pub fn run_cell(base: &Scenario, u: f64, beta: f64, window: (f64, f64)) -> Result<f64> {
    let mut scenario = base.clone();
    scenario.params = ModelParams::new(u, beta, base.params.x_c);
    let state = scenario.initial_state()?;
    let cfg = SplitStepConfig {
        dt: scenario.dt,
        t_final: scenario.t_final,
        snapshot_interval: None,
        observable_interval: crate::config::DEFAULT_OBSERVABLE_INTERVAL,
    };
    let evolution = evolve(&state, &scenario.params, &cfg)?;
    localization_metric(&evolution.series, window)
}

fn parse_cell_file(path: &Path) -> Option<f64> {
    let text = std::fs::read_to_string(path).ok()?;
    let line = text.lines().nth(1)?;
    let value = line.split(',').nth(2)?;
    value.parse().ok()
}

/// Execute the sweep. Failed cells are recorded in the ledger and the sweep
/// continues; the heatmap collects every completed cell.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepReport> {
    if spec.u_values.is_empty() || spec.beta_values.is_empty() {
        return Err(Error::Config("sweep axes must be non-empty".into()));
    }
    let cells_dir = spec.out_dir.join("cells");
    std::fs::create_dir_all(&cells_dir).map_err(Error::io(&cells_dir))?;
    let ledger_path = spec.out_dir.join("ledger.json");
    let config_digest = digest(spec);

    let mut ledger = if spec.resume && ledger_path.exists() {
        let text = std::fs::read_to_string(&ledger_path).map_err(Error::io(&ledger_path))?;
        let old: Ledger = serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: corrupt ledger: {e}", ledger_path.display())))?;
        if old.config_digest != config_digest {
            return Err(Error::Config(format!(
                "{}: ledger belongs to a different sweep configuration; refusing to resume",
                ledger_path.display()
            )));
        }
        old
    } else {
        Ledger {
            schema_version: crate::output::SCHEMA_VERSION,
            config_digest,
            ..Ledger::default()
        }
    };

    // Work out which cells still need computing.
    let mut todo: Vec<(usize, usize)> = Vec::new();
    let mut skipped = 0usize;
    for iu in 0..spec.u_values.len() {
        for ib in 0..spec.beta_values.len() {
            let done = spec.resume
                && ledger.cells.get(&cell_name(iu, ib)).map(String::as_str) == Some("done")
                && parse_cell_file(&cell_path(&spec.out_dir, iu, ib)).is_some();
            if done {
                skipped += 1;
            } else {
                todo.push((iu, ib));
            }
        }
    }

    ledger.cells.retain(|_, v| v == "done");
    let ledger = Mutex::new(ledger);
    let flush_ledger = |l: &Ledger| -> Result<()> {
        write_atomic(&ledger_path, serde_json::to_string_pretty(l).unwrap().as_bytes())
    };
    flush_ledger(&ledger.lock().unwrap())?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;

    let results: Vec<(usize, usize, std::result::Result<f64, String>)> = pool.install(|| {
        todo.par_iter()
            .map(|&(iu, ib)| {
                let u = spec.u_values[iu];
                let beta = spec.beta_values[ib];
                let outcome = std::panic::catch_unwind(|| run_cell(&spec.base, u, beta, spec.window))
                    .unwrap_or_else(|_| Err(Error::Numerics("worker panicked".into())))
                    .map_err(|e| e.to_string());
                // Flush the cell artifact and ledger entry as soon as the
                // cell finishes, so an interrupted sweep can resume.
                let entry = match &outcome {
                    Ok(metric) => {
                        let body = format!("u,beta,sigma_x_sigma_p\n{},{},{}\n", u, beta, metric);
                        match write_atomic(&cell_path(&spec.out_dir, iu, ib), body.as_bytes()) {
                            Ok(()) => "done".to_string(),
                            Err(e) => format!("failed: {e}"),
                        }
                    }
                    Err(e) => format!("failed: {e}"),
                };
                {
                    let mut l = ledger.lock().unwrap();
                    l.cells.insert(cell_name(iu, ib), entry.clone());
                    let _ = flush_ledger(&l);
                }
                (iu, ib, if entry == "done" { outcome } else { Err(entry) })
            })
            .collect()
    });

    let mut computed = 0usize;
    let mut failed = Vec::new();
    for (iu, ib, outcome) in results {
        match outcome {
            Ok(_) => computed += 1,
            Err(e) => failed.push(FailedCell {
                u: spec.u_values[iu],
                beta: spec.beta_values[ib],
                error: e,
            }),
        }
    }

    // Assemble the heatmap from cell files, row-major in beta then u.
    let mut heatmap = String::from("u,beta,sigma_x_sigma_p\n");
    for ib in 0..spec.beta_values.len() {
        for iu in 0..spec.u_values.len() {
            if let Some(metric) = parse_cell_file(&cell_path(&spec.out_dir, iu, ib)) {
                heatmap.push_str(&format!(
                    "{},{},{}\n",
                    spec.u_values[iu], spec.beta_values[ib], metric
                ));
            }
        }
    }
    write_atomic(&spec.out_dir.join("heatmap.csv"), heatmap.as_bytes())?;

    Ok(SweepReport {
        computed,
        skipped,
        failed,
    })
}
