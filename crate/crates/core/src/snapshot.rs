//! CSV output: one snapshot file per output time with columns
//! `x, z_b, H, u_1..u_N, w_1..w_N`, and a run log with one row
//! `t, dt, mass, energy` per step or snapshot.
//!
//! Values are written with 17 significant digits, which round-trips every
//! `f64` exactly.

use std::fs::File;
use std::path::{Path, PathBuf};

use crate::diagnostics::vertical_velocity;
use crate::error::{Error, Result};
use crate::problem::Problem;
use crate::state::SimState;

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn io_err(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::Io {
            path: path.to_path_buf(),
            source,
        },
        other => Error::Snapshot {
            path: path.to_path_buf(),
            detail: format!("{other:?}"),
        },
    }
}

pub fn snapshot_header(layers: usize) -> Vec<String> {
    let mut h = vec!["x".to_string(), "z_b".into(), "H".into()];
    h.extend((1..=layers).map(|a| format!("u_{a}")));
    h.extend((1..=layers).map(|a| format!("w_{a}")));
    h
}

/// Writes the snapshot of `state` to `path`.
pub fn write_snapshot(problem: &Problem, state: &SimState, path: &Path) -> Result<()> {
    problem.check_state(state)?;
    let part = &problem.layers;
    let dry = problem.dry_threshold;
    let w = vertical_velocity(state, &problem.bathymetry, &problem.grid, part, dry)?;
    let u = state.velocities(part, dry);
    let n = part.len();
    let mut out = csv::Writer::from_path(path).map_err(|e| io_err(path, e))?;
    out.write_record(snapshot_header(n)).map_err(|e| io_err(path, e))?;
    let mut row = Vec::with_capacity(3 + 2 * n);
    for i in 0..state.cells() {
        row.clear();
        row.push(fmt(problem.grid.x(i)));
        row.push(fmt(problem.bathymetry.elevations()[i]));
        row.push(fmt(state.h[i]));
        row.extend(u[i * n..(i + 1) * n].iter().map(|v| fmt(*v)));
        row.extend(w[i * n..(i + 1) * n].iter().map(|v| fmt(*v)));
        out.write_record(&row).map_err(|e| io_err(path, e))?;
    }
    out.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Contents of a snapshot file, cell-major for the layer columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub layers: usize,
    pub x: Vec<f64>,
    pub z_b: Vec<f64>,
    pub h: Vec<f64>,
    pub u: Vec<f64>,
    pub w: Vec<f64>,
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot> {
    let bad = |detail: String| Error::Snapshot {
        path: path.to_path_buf(),
        detail,
    };
    let mut rdr = csv::Reader::from_path(path).map_err(|e| io_err(path, e))?;
    let header = rdr.headers().map_err(|e| io_err(path, e))?.clone();
    let cols = header.len();
    if cols < 5 || (cols - 3) % 2 != 0 {
        return Err(bad(format!("unexpected column count {cols}")));
    }
    let n = (cols - 3) / 2;
    let expected = snapshot_header(n);
    if header.iter().ne(expected.iter().map(String::as_str)) {
        return Err(bad(format!("unexpected header {:?}", header.iter().collect::<Vec<_>>())));
    }
    let mut s = Snapshot {
        layers: n,
        x: Vec::new(),
        z_b: Vec::new(),
        h: Vec::new(),
        u: Vec::new(),
        w: Vec::new(),
    };
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| io_err(path, e))?;
        let vals: Vec<f64> = rec
            .iter()
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| bad(format!("row {}: {e}", line + 2)))?;
        s.x.push(vals[0]);
        s.z_b.push(vals[1]);
        s.h.push(vals[2]);
        s.u.extend_from_slice(&vals[3..3 + n]);
        s.w.extend_from_slice(&vals[3 + n..]);
    }
    Ok(s)
}

/// Append-only `t, dt, mass, energy` log.
pub struct RunLog {
    path: PathBuf,
    out: csv::Writer<File>,
}

impl RunLog {
    pub fn create(path: &Path) -> Result<Self> {
        let mut out = csv::Writer::from_path(path).map_err(|e| io_err(path, e))?;
        out.write_record(["t", "dt", "mass", "energy"]).map_err(|e| io_err(path, e))?;
        Ok(Self {
            path: path.to_path_buf(),
            out,
        })
    }

    pub fn append(&mut self, t: f64, dt: f64, mass: f64, energy: f64) -> Result<()> {
        self.out
            .write_record([fmt(t), fmt(dt), fmt(mass), fmt(energy)])
            .map_err(|e| io_err(&self.path, e))
    }

    pub fn finish(mut self) -> Result<()> {
        let path = self.path.clone();
        self.out.flush().map_err(|source| Error::Io { path, source })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::BoundaryCondition;
    use crate::state::{Bathymetry, Grid1D, LayerPartition, PhysParams};

    #[test]
    fn two_cells_one_layer() {
        let p = Problem::new(
            Grid1D::uniform(0.0, 2.0, 2).unwrap(),
            LayerPartition::uniform(1).unwrap(),
            Bathymetry::new(vec![0.1, 0.3]).unwrap(),
            PhysParams::default(),
            BoundaryCondition::Wall,
            BoundaryCondition::Wall,
        )
        .unwrap();
        let s = SimState::uniform_velocity(vec![0.9, 0.7], 1.0 / 3.0, &p.layers);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        write_snapshot(&p, &s, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "x,z_b,H,u_1,w_1");
        let back = read_snapshot(&path).unwrap();
        assert_eq!(back.h, s.h);
        assert_eq!(back.u, s.velocities(&p.layers, p.dry_threshold));
    }

    #[test]
    fn malformed_file_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "x,z_b,H,u_1,w_1\n1.0,abc,1,1,1\n").unwrap();
        assert!(matches!(read_snapshot(&path), Err(Error::Snapshot { .. })));
        assert!(matches!(read_snapshot(&dir.path().join("missing.csv")), Err(Error::Io { .. })));
    }
}
