//! Grid, layer partition, bathymetry and the conserved state `(H, q_1..q_N)`.
//!
//! Per-layer quantities are stored cell-major: the `N` values of cell `i`
//! occupy `i * N .. (i + 1) * N`, bottom layer first.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cells with a total height below this are treated as dry.
pub const DEFAULT_DRY_THRESHOLD: f64 = 1e-10;

/// Tolerance on `Σ l_α = 1`.
pub const PARTITION_SUM_TOL: f64 = 1e-14;

/// One-dimensional finite-volume grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    centers: Vec<f64>,
    widths: Vec<f64>,
}

impl Grid1D {
    pub fn uniform(x_min: f64, x_max: f64, cells: usize) -> Result<Self> {
        if cells == 0 {
            return Err(Error::Config("grid needs at least one cell".into()));
        }
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::Config(format!(
                "grid extent [{x_min}, {x_max}] is empty or not finite"
            )));
        }
        let dx = (x_max - x_min) / cells as f64;
        let centers = (0..cells).map(|i| x_min + (i as f64 + 0.5) * dx).collect();
        Ok(Self {
            centers,
            widths: vec![dx; cells],
        })
    }

    /// Builds a grid from explicit cell centres and widths.
    pub fn from_cells(centers: Vec<f64>, widths: Vec<f64>) -> Result<Self> {
        if centers.len() != widths.len() {
            return Err(Error::Dimension {
                what: "cell widths",
                expected: centers.len(),
                got: widths.len(),
            });
        }
        if centers.is_empty() {
            return Err(Error::Config("grid needs at least one cell".into()));
        }
        if let Some(w) = widths.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
            return Err(Error::Config(format!("cell width {w} is not positive")));
        }
        if centers.windows(2).any(|p| !(p[1] > p[0])) {
            return Err(Error::Config(
                "cell centres must be strictly increasing".into(),
            ));
        }
        Ok(Self { centers, widths })
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    pub fn x(&self, i: usize) -> f64 {
        self.centers[i]
    }

    pub fn dx(&self, i: usize) -> f64 {
        self.widths[i]
    }

    /// Left and right face positions `x_{i-1/2}`, `x_{i+1/2}` of cell `i`.
    pub fn faces(&self, i: usize) -> (f64, f64) {
        let c = self.centers[i];
        let half = 0.5 * self.widths[i];
        (c - half, c + half)
    }

    pub fn extent(&self) -> (f64, f64) {
        (self.faces(0).0, self.faces(self.len() - 1).1)
    }
}

/// Fixed fractions `l_α` with `h_α = l_α H`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct LayerPartition {
    fractions: Vec<f64>,
}

impl LayerPartition {
    pub fn new(fractions: Vec<f64>) -> Result<Self> {
        if fractions.is_empty() {
            return Err(Error::Config("layer partition is empty".into()));
        }
        if let Some(l) = fractions.iter().find(|l| !(**l > 0.0) || !l.is_finite()) {
            return Err(Error::Config(format!(
                "layer fraction {l} must be strictly positive"
            )));
        }
        let sum: f64 = fractions.iter().sum();
        if (sum - 1.0).abs() > PARTITION_SUM_TOL {
            return Err(Error::Config(format!(
                "layer fractions sum to {sum:.17}, expected 1"
            )));
        }
        Ok(Self { fractions })
    }

    /// `n` layers of equal thickness.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("layer count must be at least 1".into()));
        }
        Self::new(vec![1.0 / n as f64; n])
    }

    pub fn len(&self) -> usize {
        self.fractions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fractions.is_empty()
    }

    pub fn fractions(&self) -> &[f64] {
        &self.fractions
    }

    pub fn get(&self, alpha: usize) -> f64 {
        self.fractions[alpha]
    }

    /// Cumulative fractions `Σ_{j≤α} l_j` for `α = 0..N` (first entry 0).
    pub fn cumulative(&self) -> Vec<f64> {
        let mut acc = Vec::with_capacity(self.len() + 1);
        let mut s = 0.0;
        acc.push(0.0);
        for l in &self.fractions {
            s += l;
            acc.push(s);
        }
        acc
    }
}

impl TryFrom<Vec<f64>> for LayerPartition {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<LayerPartition> for Vec<f64> {
    fn from(p: LayerPartition) -> Self {
        p.fractions
    }
}

/// Static bed elevation per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Bathymetry {
    z: Vec<f64>,
}

impl Bathymetry {
    pub fn new(z: Vec<f64>) -> Result<Self> {
        if let Some(v) = z.iter().find(|v| !v.is_finite()) {
            return Err(Error::Config(format!("bed elevation {v} is not finite")));
        }
        Ok(Self { z })
    }

    pub fn flat(cells: usize, level: f64) -> Self {
        Self {
            z: vec![level; cells],
        }
    }

    pub fn elevations(&self) -> &[f64] {
        &self.z
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }
}

/// Bottom friction law; the coefficient applies to the bottom layer only.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FrictionLaw {
    #[default]
    None,
    /// Constant `κ = k_l`.
    Navier { k_l: f64 },
    /// `κ = k_l + k_t H |u_1|`.
    NavierTurbulent { k_l: f64, k_t: f64 },
    /// `κ = g |u_1| / (K_s² H^{1/3})`.
    Strickler { k_s: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhysParams {
    pub gravity: f64,
    /// Vertical kinematic viscosity ν (m²/s).
    pub viscosity: f64,
    pub friction: FrictionLaw,
    /// Kinematic wind stress on the top layer (m²/s²).
    pub wind_stress: f64,
}

impl Default for PhysParams {
    fn default() -> Self {
        Self {
            gravity: 9.81,
            viscosity: 0.0,
            friction: FrictionLaw::None,
            wind_stress: 0.0,
        }
    }
}

impl PhysParams {
    pub fn inviscid(gravity: f64) -> Self {
        Self {
            gravity,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Vec<String> {
        let mut errs = Vec::new();
        if !(self.gravity > 0.0) || !self.gravity.is_finite() {
            errs.push(format!("gravity must be positive, got {}", self.gravity));
        }
        if !(self.viscosity >= 0.0) || !self.viscosity.is_finite() {
            errs.push(format!(
                "viscosity must be non-negative, got {}",
                self.viscosity
            ));
        }
        if !self.wind_stress.is_finite() {
            errs.push("wind stress must be finite".into());
        }
        let coeffs: &[(&str, f64)] = match &self.friction {
            FrictionLaw::None => &[],
            FrictionLaw::Navier { k_l } => &[("k_l", *k_l)][..],
            FrictionLaw::NavierTurbulent { k_l, k_t } => &[("k_l", *k_l), ("k_t", *k_t)][..],
            FrictionLaw::Strickler { k_s } => &[("k_s", *k_s)][..],
        };
        for (name, v) in coeffs {
            if !(*v >= 0.0) || !v.is_finite() {
                errs.push(format!("friction coefficient {name} must be non-negative, got {v}"));
            }
        }
        if let FrictionLaw::Strickler { k_s } = self.friction {
            if k_s == 0.0 {
                errs.push("Strickler coefficient k_s must be positive".into());
            }
        }
        errs
    }
}

/// Total heights and per-layer discharges `q_α = l_α H u_α`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub h: Vec<f64>,
    pub q: Vec<f64>,
    pub layers: usize,
    pub time: f64,
}

impl SimState {
    pub fn new(h: Vec<f64>, q: Vec<f64>, layers: usize) -> Result<Self> {
        if layers == 0 {
            return Err(Error::Config("state needs at least one layer".into()));
        }
        if q.len() != h.len() * layers {
            return Err(Error::Dimension {
                what: "layer discharges",
                expected: h.len() * layers,
                got: q.len(),
            });
        }
        Ok(Self {
            h,
            q,
            layers,
            time: 0.0,
        })
    }

    /// Builds a state from total heights and per-cell layer velocities (cell-major).
    pub fn from_velocities(h: Vec<f64>, u: &[f64], part: &LayerPartition) -> Result<Self> {
        let n = part.len();
        if u.len() != h.len() * n {
            return Err(Error::Dimension {
                what: "layer velocities",
                expected: h.len() * n,
                got: u.len(),
            });
        }
        let mut q = vec![0.0; u.len()];
        for (i, hi) in h.iter().enumerate() {
            for a in 0..n {
                q[i * n + a] = part.get(a) * hi * u[i * n + a];
            }
        }
        Self::new(h, q, n)
    }

    /// Every layer of every cell moving at the same velocity.
    pub fn uniform_velocity(h: Vec<f64>, u: f64, part: &LayerPartition) -> Self {
        let n = part.len();
        let mut q = Vec::with_capacity(h.len() * n);
        for hi in &h {
            for l in part.fractions() {
                q.push(l * hi * u);
            }
        }
        Self {
            h,
            q,
            layers: n,
            time: 0.0,
        }
    }

    pub fn cells(&self) -> usize {
        self.h.len()
    }

    pub fn column(&self, i: usize) -> &[f64] {
        &self.q[i * self.layers..(i + 1) * self.layers]
    }

    pub fn column_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.q[i * self.layers..(i + 1) * self.layers]
    }

    /// Layer velocity `u_{α,i}`; zero in dry cells.
    pub fn velocity(&self, i: usize, alpha: usize, part: &LayerPartition, dry: f64) -> f64 {
        let h = self.h[i];
        if h <= dry {
            0.0
        } else {
            self.q[i * self.layers + alpha] / (part.get(alpha) * h)
        }
    }

    /// All layer velocities, cell-major.
    pub fn velocities(&self, part: &LayerPartition, dry: f64) -> Vec<f64> {
        let n = self.layers;
        let mut u = vec![0.0; self.q.len()];
        for i in 0..self.cells() {
            for a in 0..n {
                u[i * n + a] = self.velocity(i, a, part, dry);
            }
        }
        u
    }

    /// Column discharge `Σ_α q_α` per cell.
    pub fn total_discharge(&self) -> Vec<f64> {
        self.q.chunks(self.layers).map(|c| c.iter().sum()).collect()
    }

    /// `Σ_i H_i Δx_i`.
    pub fn mass(&self, grid: &Grid1D) -> f64 {
        self.h.iter().zip(grid.widths()).map(|(h, dx)| h * dx).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.h.iter().chain(&self.q).all(|v| v.is_finite())
    }

    pub fn check_against(&self, grid: &Grid1D, part: &LayerPartition) -> Result<()> {
        if self.layers != part.len() {
            return Err(Error::Dimension {
                what: "layer count",
                expected: part.len(),
                got: self.layers,
            });
        }
        if self.h.len() != grid.len() {
            return Err(Error::Dimension {
                what: "cell count",
                expected: grid.len(),
                got: self.h.len(),
            });
        }
        Ok(())
    }
}

/// Layer heights `h_{α,i} = l_α H_i`, cell-major.
pub fn layer_heights(state: &SimState, part: &LayerPartition) -> Result<Vec<f64>> {
    if state.layers != part.len() {
        return Err(Error::Dimension {
            what: "layer count",
            expected: part.len(),
            got: state.layers,
        });
    }
    let mut out = Vec::with_capacity(state.q.len());
    for h in &state.h {
        out.extend(part.fractions().iter().map(|l| l * h));
    }
    Ok(out)
}

/// Interface elevations `z_{α+1/2,i}` for `α = 0..=N`, `N + 1` values per cell.
///
/// The top interface is set to `z_b + H` directly rather than accumulated, so
/// it is exact and the sequence is non-decreasing.
pub fn interface_elevations(
    state: &SimState,
    part: &LayerPartition,
    bathy: &Bathymetry,
) -> Result<Vec<f64>> {
    if state.layers != part.len() {
        return Err(Error::Dimension {
            what: "layer count",
            expected: part.len(),
            got: state.layers,
        });
    }
    if bathy.len() != state.cells() {
        return Err(Error::Dimension {
            what: "bathymetry cells",
            expected: state.cells(),
            got: bathy.len(),
        });
    }
    let n = part.len();
    let mut out = Vec::with_capacity(state.cells() * (n + 1));
    for (h, zb) in state.h.iter().zip(bathy.elevations()) {
        let mut z = *zb;
        out.push(z);
        for a in 0..n {
            z = if a + 1 == n {
                zb + h
            } else {
                (z + part.get(a) * h).min(zb + h)
            };
            out.push(z);
        }
    }
    Ok(out)
}
