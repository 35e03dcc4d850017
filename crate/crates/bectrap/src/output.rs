//! On-disk artifact formats.
//!
//! CSV files carry headers and full-precision (shortest round-trip) floats.
//! JSON artifacts carry a `schema_version` field. The binary snapshot record
//! is documented in the README: magic `BECSNP01`, version `u32`, `n` points
//! `u64`, half-width `f64`, then per record a time `f64` followed by `n`
//! pairs of `f64` (re, im), all little-endian.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::classical::{AveragedPhaseMap, FEstimate, FixedPointSet, Separatrix};
use crate::error::{Error, Result};
use crate::gpe::{ObservableSeries, Snapshot};
use crate::grid::SpatialGrid;
use crate::phase_space::PhaseSpaceField;
use crate::state::WaveState;
use crate::trajectories::Trajectory;

pub const SCHEMA_VERSION: u32 = 1;
pub const SNAPSHOT_MAGIC: &[u8; 8] = b"BECSNP01";

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(Error::io(parent))?;
        }
    }
    Ok(BufWriter::new(File::create(path).map_err(Error::io(path))?))
}

fn finish(mut w: BufWriter<File>, path: &Path) -> Result<()> {
    w.flush().map_err(Error::io(path))
}

/// `t,sigma_x,sigma_p,norm,energy`
pub fn write_observables_csv(path: &Path, series: &ObservableSeries) -> Result<()> {
    let mut w = create(path)?;
    let io = Error::io(path);
    (|| -> std::io::Result<()> {
        writeln!(w, "t,sigma_x,sigma_p,norm,energy")?;
        for i in 0..series.len() {
            writeln!(
                w,
                "{},{},{},{},{}",
                series.times[i], series.sigma_x[i], series.sigma_p[i], series.norm[i], series.energy[i]
            )?;
        }
        Ok(())
    })()
    .map_err(io)?;
    finish(w, path)
}

/// One snapshot as CSV: `x,re,im`.
pub fn write_snapshot_csv(path: &Path, grid: &SpatialGrid, snap: &Snapshot) -> Result<()> {
    let mut w = create(path)?;
    let io = Error::io(path);
    (|| -> std::io::Result<()> {
        writeln!(w, "x,re,im")?;
        for (&x, c) in grid.xs().iter().zip(&snap.psi) {
            writeln!(w, "{},{},{}", x, c.re, c.im)?;
        }
        Ok(())
    })()
    .map_err(io)?;
    finish(w, path)
}

/// Streaming writer for the binary snapshot record.
pub struct SnapshotBinWriter {
    w: BufWriter<File>,
    path: PathBuf,
    n: usize,
}

impl SnapshotBinWriter {
    pub fn create(path: &Path, grid: &SpatialGrid) -> Result<Self> {
        let mut w = create(path)?;
        let io = Error::io(path);
        (|| -> std::io::Result<()> {
            w.write_all(SNAPSHOT_MAGIC)?;
            w.write_all(&SCHEMA_VERSION.to_le_bytes())?;
            w.write_all(&(grid.n() as u64).to_le_bytes())?;
            w.write_all(&grid.half_width().to_le_bytes())?;
            Ok(())
        })()
        .map_err(io)?;
        Ok(Self {
            w,
            path: path.to_path_buf(),
            n: grid.n(),
        })
    }

    pub fn append(&mut self, snap: &Snapshot) -> Result<()> {
        assert_eq!(snap.psi.len(), self.n);
        let io = Error::io(&self.path);
        (|| -> std::io::Result<()> {
            self.w.write_all(&snap.time.to_le_bytes())?;
            for c in &snap.psi {
                self.w.write_all(&c.re.to_le_bytes())?;
                self.w.write_all(&c.im.to_le_bytes())?;
            }
            Ok(())
        })()
        .map_err(io)
    }

    pub fn finish(mut self) -> Result<()> {
        self.w.flush().map_err(Error::io(&self.path))
    }
}

/// Read back a binary snapshot record: grid plus all stored snapshots.
pub fn read_snapshot_bin(path: &Path) -> Result<(Arc<SpatialGrid>, Vec<Snapshot>)> {
    let file = File::open(path).map_err(Error::io(path))?;
    let mut r = BufReader::new(file);
    let io = Error::io(path);
    let bad = |msg: &str| Error::Config(format!("{}: {msg}", path.display()));

    let mut magic = [0u8; 8];
    r.read_exact(&mut magic).map_err(io)?;
    if &magic != SNAPSHOT_MAGIC {
        return Err(bad("not a snapshot record (bad magic)"));
    }
    let mut u32buf = [0u8; 4];
    r.read_exact(&mut u32buf).map_err(Error::io(path))?;
    let version = u32::from_le_bytes(u32buf);
    if version != SCHEMA_VERSION {
        return Err(bad(&format!("unsupported record version {version}")));
    }
    let mut u64buf = [0u8; 8];
    r.read_exact(&mut u64buf).map_err(Error::io(path))?;
    let n = u64::from_le_bytes(u64buf) as usize;
    let mut f64buf = [0u8; 8];
    r.read_exact(&mut f64buf).map_err(Error::io(path))?;
    let half_width = f64::from_le_bytes(f64buf);
    let grid = Arc::new(SpatialGrid::new(n, half_width)?);

    let mut snapshots = Vec::new();
    loop {
        match r.read_exact(&mut f64buf) {
            Ok(()) => {}
            Err(e) if e.kind() == std::io::ErrorKind::UnexpectedEof => break,
            Err(e) => return Err(Error::io(path)(e)),
        }
        let time = f64::from_le_bytes(f64buf);
        let mut psi = Vec::with_capacity(n);
        for _ in 0..n {
            r.read_exact(&mut f64buf).map_err(Error::io(path))?;
            let re = f64::from_le_bytes(f64buf);
            r.read_exact(&mut f64buf).map_err(Error::io(path))?;
            let im = f64::from_le_bytes(f64buf);
            psi.push(Complex64::new(re, im));
        }
        snapshots.push(Snapshot { time, psi });
    }
    Ok((grid, snapshots))
}

/// Last snapshot in a record as a [`WaveState`].
pub fn read_last_state(path: &Path) -> Result<WaveState> {
    let (grid, snaps) = read_snapshot_bin(path)?;
    let snap = snaps
        .into_iter()
        .last()
        .ok_or_else(|| Error::Config(format!("{}: record holds no snapshots", path.display())))?;
    WaveState::from_samples(grid, snap.psi, snap.time)
}

/// `phi,J,H` grid of the averaged Hamiltonian.
pub fn write_hfield_csv(path: &Path, map: &AveragedPhaseMap) -> Result<()> {
    let mut w = create(path)?;
    let io = Error::io(path);
    (|| -> std::io::Result<()> {
        writeln!(w, "phi,J,H")?;
        for (ip, &p) in map.phi.iter().enumerate() {
            for (ij, &jj) in map.j.iter().enumerate() {
                writeln!(w, "{},{},{}", p, jj, map.h_at(ip, ij))?;
            }
        }
        Ok(())
    })()
    .map_err(io)?;
    finish(w, path)
}

#[derive(Serialize)]
struct SeparatrixArtifact<'a> {
    found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    level: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    area: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wraps_phi: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    governing_saddle: Option<&'a crate::classical::FixedPoint>,
    vertices: Vec<(f64, f64)>,
}

#[derive(Serialize)]
struct ClassicalArtifact<'a> {
    schema_version: u32,
    u: f64,
    beta: f64,
    x_c: f64,
    j_c: f64,
    delta_omega: f64,
    fixed_points: &'a FixedPointSet,
    separatrix: SeparatrixArtifact<'a>,
    #[serde(skip_serializing_if = "Option::is_none")]
    confinement: Option<&'a FEstimate>,
}

/// Fixed points, separatrix polyline and F as a JSON bundle.
pub fn write_classical_json(
    path: &Path,
    map: &AveragedPhaseMap,
    confinement: Option<&FEstimate>,
) -> Result<()> {
    let sep = map.separatrix.as_ref();
    let artifact = ClassicalArtifact {
        schema_version: SCHEMA_VERSION,
        u: map.params.u,
        beta: map.params.beta,
        x_c: map.params.x_c,
        j_c: map.params.j_c(),
        delta_omega: map.params.delta_omega(),
        fixed_points: &map.fixed_points,
        separatrix: SeparatrixArtifact {
            found: sep.is_some(),
            level: sep.map(|s| s.level),
            area: sep.map(|s| s.area),
            wraps_phi: sep.map(|s| s.wraps_phi),
            governing_saddle: sep.map(|s| &s.saddle),
            vertices: sep.map(Separatrix::points).unwrap_or_default().to_vec(),
        },
        confinement,
    };
    write_json(path, &artifact)
}

/// `u,beta,F,stderr` table.
pub fn write_f_table_csv(path: &Path, u: &[f64], beta: &[f64], f: &[FEstimate]) -> Result<()> {
    let mut w = create(path)?;
    let io = Error::io(path);
    (|| -> std::io::Result<()> {
        writeln!(w, "u,beta,F,stderr")?;
        for (iu, &uv) in u.iter().enumerate() {
            for (ib, &bv) in beta.iter().enumerate() {
                let e = &f[iu * beta.len() + ib];
                writeln!(w, "{},{},{},{}", uv, bv, e.f, e.stderr)?;
            }
        }
        Ok(())
    })()
    .map_err(io)?;
    finish(w, path)
}

/// `contour,u,beta` polylines.
pub fn write_contours_csv(path: &Path, contours: &[Vec<(f64, f64)>]) -> Result<()> {
    let mut w = create(path)?;
    let io = Error::io(path);
    (|| -> std::io::Result<()> {
        writeln!(w, "contour,u,beta")?;
        for (id, polyline) in contours.iter().enumerate() {
            for &(u, b) in polyline {
                writeln!(w, "{},{},{}", id, u, b)?;
            }
        }
        Ok(())
    })()
    .map_err(io)?;
    finish(w, path)
}

/// `t,x,p,J,phi` samples of one trajectory.
pub fn write_trajectory_csv(path: &Path, traj: &Trajectory) -> Result<()> {
    let mut w = create(path)?;
    let io = Error::io(path);
    (|| -> std::io::Result<()> {
        writeln!(w, "t,x,p,J,phi")?;
        for i in 0..traj.len() {
            writeln!(
                w,
                "{},{},{},{},{}",
                traj.times[i], traj.x[i], traj.p[i], traj.j[i], traj.phi[i]
            )?;
        }
        Ok(())
    })()
    .map_err(io)?;
    finish(w, path)
}

/// `phi,J,Q` grid of a phase-space field.
pub fn write_phase_field_csv(path: &Path, field: &PhaseSpaceField) -> Result<()> {
    let mut w = create(path)?;
    let io = Error::io(path);
    (|| -> std::io::Result<()> {
        writeln!(w, "phi,J,Q")?;
        for (ip, &p) in field.phi.iter().enumerate() {
            for (ij, &jj) in field.j.iter().enumerate() {
                writeln!(w, "{},{},{}", p, jj, field.value_at(ip, ij))?;
            }
        }
        Ok(())
    })()
    .map_err(io)?;
    finish(w, path)
}

/// Serialize any artifact as pretty JSON.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    w.write_all(b"\n").map_err(Error::io(path))?;
    finish(w, path)
}

/// Write to a temporary sibling then rename into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, bytes).map_err(Error::io(&tmp))?;
    std::fs::rename(&tmp, path).map_err(Error::io(path))
}
