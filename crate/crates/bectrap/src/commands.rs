//! Implementations behind the CLI subcommands. Each takes a config file and
//! an output directory, writes its artifacts plus a run manifest, and maps
//! failures onto process exit codes through [`crate::Error::exit_code`].

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use crate::classical::{
    confinement_fraction, f_contour, AveragedPhaseMap, FContourSpec, MapConfig, DEFAULT_MC_SAMPLES,
};
use crate::config::{KeyValues, Scenario, DEFAULT_OBSERVABLE_INTERVAL};
use crate::error::{Error, Result};
use crate::gpe::{evolve, SplitStepConfig};
use crate::output;
use crate::params::ModelParams;
use crate::phase_space::{husimi, overlay_report, PhaseGridSpec, Recenter};
use crate::state::WaveState;
use crate::sweep::{run_sweep, SweepReport, SweepSpec};
use crate::trajectories::{integrate_trajectory, slow_component};
use crate::RotatingFrame;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnapshotFormat {
    Csv,
    Binary,
}

#[derive(Serialize)]
struct Manifest {
    schema_version: u32,
    tool_version: &'static str,
    command: String,
    config_path: String,
    config: std::collections::BTreeMap<String, String>,
    seed: Option<u64>,
    wall_seconds: f64,
    outputs: Vec<String>,
}

fn write_manifest(
    out: &Path,
    command: &str,
    config_path: &Path,
    seed: Option<u64>,
    started: Instant,
    outputs: &[PathBuf],
) -> Result<()> {
    let config = std::fs::read_to_string(config_path)
        .map_err(Error::io(config_path))?
        .lines()
        .filter_map(|l| {
            let s = l.split('#').next().unwrap_or("").trim();
            s.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        })
        .collect();
    let manifest = Manifest {
        schema_version: output::SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION"),
        command: command.to_string(),
        config_path: config_path.display().to_string(),
        config,
        seed,
        wall_seconds: started.elapsed().as_secs_f64(),
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
    };
    output::write_json(&out.join("manifest.json"), &manifest)
}

/// `evolve`: integrate one scenario, writing observables, snapshots and the
/// final state.
pub fn cmd_evolve(config_path: &Path, out: &Path, format: SnapshotFormat) -> Result<()> {
    let started = Instant::now();
    let scenario = Scenario::load(config_path)?;
    let state = scenario.initial_state()?;
    let cfg = SplitStepConfig {
        dt: scenario.dt,
        t_final: scenario.t_final,
        snapshot_interval: Some(scenario.snapshot_interval),
        observable_interval: DEFAULT_OBSERVABLE_INTERVAL,
    };
    let evolution = evolve(&state, &scenario.params, &cfg)?;

    std::fs::create_dir_all(out).map_err(Error::io(out))?;
    let mut outputs = Vec::new();

    let obs_path = out.join("observables.csv");
    output::write_observables_csv(&obs_path, &evolution.series)?;
    outputs.push(obs_path);

    let grid = evolution.state.grid();
    match format {
        SnapshotFormat::Csv => {
            for snap in &evolution.snapshots {
                let path = out.join(format!("snapshots/snap_t{:012.4}.csv", snap.time));
                output::write_snapshot_csv(&path, grid, snap)?;
                outputs.push(path);
            }
        }
        SnapshotFormat::Binary => {
            let path = out.join("snapshots.bin");
            let mut w = output::SnapshotBinWriter::create(&path, grid)?;
            for snap in &evolution.snapshots {
                w.append(snap)?;
            }
            w.finish()?;
            outputs.push(path);
        }
    }

    // Final state always goes out as a one-record binary.
    let final_path = out.join("final_state.bin");
    let mut w = output::SnapshotBinWriter::create(&final_path, grid)?;
    w.append(&crate::gpe::Snapshot {
        time: evolution.state.time,
        psi: evolution.state.psi.clone(),
    })?;
    w.finish()?;
    outputs.push(final_path);

    write_manifest(out, "evolve", config_path, None, started, &outputs)
}

pub const SWEEP_KEYS: &[&str] = &[
    "u_values",
    "beta_values",
    "x_c",
    "grid.n",
    "grid.L",
    "dt",
    "t_final",
    "window.t_lo",
    "window.t_hi",
];

/// `sweep`: localization metric over a `(u, beta)` grid.
pub fn cmd_sweep(config_path: &Path, out: &Path, workers: usize, resume: bool) -> Result<SweepReport> {
    let started = Instant::now();
    let kv = KeyValues::load(config_path)?;
    kv.check_schema(SWEEP_KEYS)?;
    let base = Scenario::from_key_values_with(&kv, false)?;
    let u_values = kv.require_f64_list("u_values")?;
    let beta_values = kv.require_f64_list("beta_values")?;
    let t_lo = kv
        .get_f64("window.t_lo")?
        .unwrap_or((base.t_final - 100.0).max(0.0));
    let t_hi = kv.get_f64("window.t_hi")?.unwrap_or(base.t_final);
    let spec = SweepSpec {
        u_values,
        beta_values,
        base,
        window: (t_lo, t_hi),
        out_dir: out.to_path_buf(),
        workers,
        resume,
    };
    std::fs::create_dir_all(out).map_err(Error::io(out))?;
    let report = run_sweep(&spec)?;
    output::write_json(&out.join("sweep_report.json"), &report)?;
    write_manifest(
        out,
        "sweep",
        config_path,
        None,
        started,
        &[out.join("heatmap.csv"), out.join("ledger.json")],
    )?;
    if report.failed.is_empty() {
        Ok(report)
    } else {
        Err(Error::PartialSweep {
            failed: report.failed.len(),
        })
    }
}

pub const CLASSICAL_KEYS: &[&str] = &[
    "u",
    "beta",
    "x_c",
    "map.n_phi",
    "map.n_j",
    "map.j_max",
    "mc_samples",
];

fn map_config_from(kv: &KeyValues) -> Result<MapConfig> {
    let mut cfg = MapConfig::default();
    if let Some(n) = kv.get_usize("map.n_phi")? {
        cfg.n_phi = n;
    }
    if let Some(n) = kv.get_usize("map.n_j")? {
        cfg.n_j = n;
    }
    if let Some(j) = kv.get_f64("map.j_max")? {
        cfg.j_max = Some(j);
    }
    Ok(cfg)
}

/// `classical`: averaged-Hamiltonian bundle for one parameter set; prints F.
pub fn cmd_classical(config_path: &Path, out: &Path, seed: u64) -> Result<()> {
    let started = Instant::now();
    let kv = KeyValues::load(config_path)?;
    kv.check_schema(CLASSICAL_KEYS)?;
    let params = ModelParams::new(
        kv.require_f64("u")?,
        kv.require_f64("beta")?,
        kv.require_f64("x_c")?,
    );
    let map_cfg = map_config_from(&kv)?;
    let mc_samples = kv.get_usize("mc_samples")?.unwrap_or(DEFAULT_MC_SAMPLES);

    let map = AveragedPhaseMap::compute(&params, &map_cfg)?;
    let f = confinement_fraction(&params, map.separatrix.as_ref(), seed, mc_samples);
    println!("F = {:.4} +/- {:.4}", f.f, f.stderr);

    std::fs::create_dir_all(out).map_err(Error::io(out))?;
    output::write_hfield_csv(&out.join("hfield.csv"), &map)?;
    output::write_classical_json(&out.join("classical.json"), &map, Some(&f))?;
    write_manifest(
        out,
        "classical",
        config_path,
        Some(seed),
        started,
        &[out.join("hfield.csv"), out.join("classical.json")],
    )
}

pub const FCONTOUR_KEYS: &[&str] = &[
    "u.min",
    "u.max",
    "u.count",
    "beta.min",
    "beta.max",
    "beta.count",
    "x_c",
    "map.n_phi",
    "map.n_j",
    "map.j_max",
    "mc_samples",
];

/// `fcontour`: tabulate `F(u, beta)` and extract the level contour.
pub fn cmd_fcontour(
    config_path: &Path,
    out: &Path,
    level: f64,
    seed: u64,
    workers: usize,
) -> Result<()> {
    let started = Instant::now();
    let kv = KeyValues::load(config_path)?;
    kv.check_schema(FCONTOUR_KEYS)?;
    let mut spec = FContourSpec::new(
        (
            kv.require_f64("u.min")?,
            kv.require_f64("u.max")?,
            kv.get_usize("u.count")?.unwrap_or(20),
        ),
        (
            kv.require_f64("beta.min")?,
            kv.require_f64("beta.max")?,
            kv.get_usize("beta.count")?.unwrap_or(20),
        ),
        kv.require_f64("x_c")?,
    );
    spec.level = level;
    spec.seed = seed;
    if let Some(n) = kv.get_usize("mc_samples")? {
        spec.mc_samples = n;
    }
    let base_map = map_config_from(&kv)?;
    if kv.get_usize("map.n_phi")?.is_some() || kv.get_usize("map.n_j")?.is_some() {
        spec.map = base_map;
    }

    if !(level > 0.0 && level < 1.0) {
        eprintln!("warning: level {level} outside (0, 1); F never crosses it, contour will be empty");
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    let result = pool.install(|| f_contour(&spec))?;

    if result.contours.is_empty() {
        eprintln!("warning: level {level} not attained in the box; contour file is empty");
    }
    std::fs::create_dir_all(out).map_err(Error::io(out))?;
    output::write_f_table_csv(&out.join("f_table.csv"), &result.u, &result.beta, &result.f)?;
    output::write_contours_csv(&out.join("f_contour.csv"), &result.contours)?;
    write_manifest(
        out,
        "fcontour",
        config_path,
        Some(seed),
        started,
        &[out.join("f_table.csv"), out.join("f_contour.csv")],
    )
}

pub const HUSIMI_KEYS: &[&str] = &[
    "u",
    "beta",
    "x_c",
    "grid.n",
    "grid.L",
    "state_file",
    "recenter",
    "map.n_phi",
    "map.n_j",
    "map.j_max",
];

#[derive(Serialize)]
struct HusimiMeta {
    schema_version: u32,
    time: f64,
    omega: f64,
    delta_phi: f64,
    separatrix_found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    inside_fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    peak_phi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    peak_j: Option<f64>,
}

/// `husimi`: phase-space field of a stored state (or the initial state) with
/// the classical overlay measured when a separatrix exists.
pub fn cmd_husimi(config_path: &Path, out: &Path) -> Result<()> {
    let started = Instant::now();
    let kv = KeyValues::load(config_path)?;
    kv.check_schema(HUSIMI_KEYS)?;
    let params = ModelParams::new(
        kv.require_f64("u")?,
        kv.require_f64("beta")?,
        kv.require_f64("x_c")?,
    );
    let state: WaveState = match kv.get_str("state_file") {
        Some(path) => output::read_last_state(Path::new(path))?,
        None => {
            let n = kv.get_usize("grid.n")?.unwrap_or(crate::config::DEFAULT_GRID_N);
            let l = kv.get_f64("grid.L")?.unwrap_or(crate::config::DEFAULT_GRID_L);
            let grid = std::sync::Arc::new(crate::grid::SpatialGrid::new(n, l)?);
            crate::state::make_initial_state(&grid, params.x_c)?
        }
    };
    let recenter = match kv.get_str("recenter") {
        None | Some("none") => Recenter::None,
        Some("scan") => Recenter::Scan { max_abs: 0.6 },
        Some(other) => {
            return Err(Error::Config(format!(
                "recenter must be `none` or `scan`, got `{other}`"
            )))
        }
    };

    let map_cfg = map_config_from(&kv)?;
    let map = AveragedPhaseMap::compute(&params, &map_cfg)?;
    std::fs::create_dir_all(out).map_err(Error::io(out))?;

    let meta = if map.separatrix.is_some() {
        let report = overlay_report(&state, &map, recenter)?;
        // Export the recentered field so the CSV matches the reported shift.
        let frame = RotatingFrame::centered(&params);
        let spec = PhaseGridSpec {
            n_phi: map.phi.len(),
            n_j: map.j.len(),
            j_max: *map.j.last().unwrap(),
        };
        let field = husimi(&state, &spec, &frame)?;
        let cells = (report.delta_phi / (std::f64::consts::TAU / map.phi.len() as f64)).round() as isize;
        output::write_phase_field_csv(&out.join("husimi.csv"), &field.recentered(cells))?;
        HusimiMeta {
            schema_version: output::SCHEMA_VERSION,
            time: state.time,
            omega: params.omega(),
            delta_phi: report.delta_phi,
            separatrix_found: true,
            inside_fraction: Some(report.inside_fraction),
            peak_phi: Some(report.peak.0),
            peak_j: Some(report.peak.1),
        }
    } else {
        let frame = RotatingFrame::centered(&params);
        let spec = PhaseGridSpec {
            n_phi: map.phi.len(),
            n_j: map.j.len(),
            j_max: *map.j.last().unwrap(),
        };
        let field = husimi(&state, &spec, &frame)?;
        output::write_phase_field_csv(&out.join("husimi.csv"), &field)?;
        HusimiMeta {
            schema_version: output::SCHEMA_VERSION,
            time: state.time,
            omega: params.omega(),
            delta_phi: 0.0,
            separatrix_found: false,
            inside_fraction: None,
            peak_phi: None,
            peak_j: None,
        }
    };
    output::write_json(&out.join("husimi_meta.json"), &meta)?;
    output::write_classical_json(&out.join("classical.json"), &map, None)?;
    write_manifest(
        out,
        "husimi",
        config_path,
        None,
        started,
        &[out.join("husimi.csv"), out.join("husimi_meta.json")],
    )
}

pub const TRAJECTORIES_KEYS: &[&str] = &[
    "u",
    "beta",
    "x_c",
    "t_final",
    "dt",
    "starts",
    "sample_stride",
];

/// `trajectories`: integrate driven orbits from a list of starts
/// (`starts = x1:p1, x2:p2, ...`), exporting each with its slow component.
pub fn cmd_trajectories(config_path: &Path, out: &Path) -> Result<()> {
    let started = Instant::now();
    let kv = KeyValues::load(config_path)?;
    kv.check_schema(TRAJECTORIES_KEYS)?;
    let params = ModelParams::new(
        kv.require_f64("u")?,
        kv.require_f64("beta")?,
        kv.require_f64("x_c")?,
    );
    let t_final = kv.get_f64("t_final")?.unwrap_or(500.0);
    let dt = kv.get_f64("dt")?.unwrap_or(1e-3);
    let stride = kv.get_usize("sample_stride")?.unwrap_or(10);
    let starts_raw = kv
        .get_str("starts")
        .ok_or_else(|| Error::Config("missing required key `starts`".into()))?;
    let mut starts = Vec::new();
    for part in starts_raw.split(',') {
        let (x, p) = part
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::Config(format!("starts entry `{part}` is not `x:p`")))?;
        starts.push((
            x.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("bad x in starts entry `{part}`")))?,
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("bad p in starts entry `{part}`")))?,
        ));
    }

    std::fs::create_dir_all(out).map_err(Error::io(out))?;
    let mut outputs = Vec::new();
    let period = std::f64::consts::TAU / params.omega();
    for (i, &start) in starts.iter().enumerate() {
        let traj = integrate_trajectory(start, &params, t_final, dt, stride)?;
        let path = out.join(format!("trajectory_{i:02}.csv"));
        output::write_trajectory_csv(&path, &traj)?;
        outputs.push(path);
        let slow = slow_component(&traj, period)?;
        let path = out.join(format!("trajectory_{i:02}_slow.csv"));
        output::write_trajectory_csv(&path, &slow)?;
        outputs.push(path);
    }
    write_manifest(out, "trajectories", config_path, None, started, &outputs)
}
