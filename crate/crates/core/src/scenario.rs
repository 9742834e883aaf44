//! TOML scenario files.
//!
//! ```toml
//! name = "transcritical"
//!
//! [grid]
//! x_min = 0.0
//! x_max = 25.0
//! cells = 400
//!
//! [bathymetry]
//! kind = "bump"          # flat | bump | table
//! center = 10.0
//! height = 0.2
//! width = 4.0
//!
//! [layers]
//! count = 5              # or: fractions = [0.2, 0.3, 0.5]
//!
//! [physics]
//! gravity = 9.81
//! viscosity = 0.01
//! wind_stress = 0.0
//! friction = { law = "strickler", k_s = 30.0 }
//!
//! [boundary]
//! left = { type = "discharge", q = 1.0 }
//! right = { type = "height", h = 0.6 }
//!
//! [initial]
//! kind = "level"         # constant | level | dam-break | table
//! level = 0.6
//!
//! [time]
//! t_end = 200.0
//! order = 1
//!
//! [output]
//! snapshot_interval = 10.0
//! ```
//!
//! Unknown keys and every semantic problem are collected and reported
//! together as [`Error::Validation`].

use serde::{Deserialize, Serialize};

use crate::boundary::BoundaryCondition;
use crate::error::{Error, Result};
use crate::problem::Problem;
use crate::state::{Bathymetry, FrictionLaw, Grid1D, LayerPartition, PhysParams, SimState, PARTITION_SUM_TOL};
use crate::stepper::{Order, StepConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub cells: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BathymetrySpec {
    Flat { level: f64 },
    /// `z = base + height (1 - ((x - center)/(width/2))²)` for
    /// `|x - center| < width/2`, `base` elsewhere.
    Bump { center: f64, height: f64, width: f64, base: f64 },
    /// Piecewise linear through `(x, z)` points, constant beyond the ends.
    Table { points: Vec<[f64; 2]> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialSpec {
    /// Uniform height; `u` has one entry (all layers) or `N` entries.
    Constant { h: f64, u: Vec<f64> },
    /// Flat free surface `level` (dry where the bed is above it).
    Level { level: f64, u: Vec<f64> },
    /// Free-surface levels `left` / `right` on either side of `position`, at rest.
    DamBreak { position: f64, left: f64, right: f64 },
    /// Piecewise linear total height through `(x, H)` points.
    Table { points: Vec<[f64; 2]>, u: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeSpec {
    pub t_end: f64,
    pub order: Order,
    pub heun: bool,
    pub safety: f64,
    pub max_dt: Option<f64>,
    pub steady_tolerance: Option<f64>,
    pub max_steps: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OutputSpec {
    pub snapshot_interval: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: Option<String>,
    pub grid: GridSpec,
    pub bathymetry: BathymetrySpec,
    pub layers: LayerPartition,
    pub physics: PhysParams,
    pub left: BoundaryCondition,
    pub right: BoundaryCondition,
    pub initial: InitialSpec,
    pub time: TimeSpec,
    pub output: OutputSpec,
}

// Raw file layout: every key optional so that missing keys can be reported
// together with the other problems.

#[derive(Debug, Default, Serialize, Deserialize)]
struct RawScenario {
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default)]
    grid: RawGrid,
    #[serde(default)]
    bathymetry: RawBathymetry,
    #[serde(default)]
    layers: RawLayers,
    #[serde(default)]
    physics: RawPhysics,
    #[serde(default)]
    boundary: RawBoundary,
    #[serde(default)]
    initial: RawInitial,
    #[serde(default)]
    time: RawTime,
    #[serde(default, skip_serializing_if = "RawOutput::is_empty")]
    output: RawOutput,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct RawGrid {
    x_min: Option<f64>,
    x_max: Option<f64>,
    cells: Option<i64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct RawBathymetry {
    kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    level: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    center: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    height: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    width: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    base: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    points: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct RawLayers {
    #[serde(skip_serializing_if = "Option::is_none")]
    count: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fractions: Option<Vec<f64>>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct RawPhysics {
    #[serde(skip_serializing_if = "Option::is_none")]
    gravity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    viscosity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wind_stress: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    friction: Option<RawFriction>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct RawFriction {
    law: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k_l: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k_t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k_s: Option<f64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct RawBoundary {
    left: Option<RawSide>,
    right: Option<RawSide>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct RawSide {
    #[serde(rename = "type")]
    kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    h: Option<f64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct RawInitial {
    kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    h: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    level: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    u: Option<RawVelocity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    position: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    left: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    right: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    points: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum RawVelocity {
    Scalar(f64),
    Layers(Vec<f64>),
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct RawTime {
    t_end: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    order: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    heun: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    safety: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_dt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    steady_tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_steps: Option<i64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct RawOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    snapshot_interval: Option<f64>,
}

impl RawOutput {
    fn is_empty(&self) -> bool {
        self.snapshot_interval.is_none()
    }
}

struct Collector {
    errs: Vec<String>,
}

impl Collector {
    fn require<T: Copy>(&mut self, v: Option<T>, key: &str) -> Option<T> {
        if v.is_none() {
            self.errs.push(format!("missing key `{key}`"));
        }
        v
    }

    fn finite(&mut self, v: Option<f64>, key: &str) -> Option<f64> {
        let v = self.require(v, key)?;
        if v.is_finite() {
            Some(v)
        } else {
            self.errs.push(format!("`{key}` must be finite, got {v}"));
            None
        }
    }

    fn positive(&mut self, v: Option<f64>, key: &str) -> Option<f64> {
        let v = self.finite(v, key)?;
        if v > 0.0 {
            Some(v)
        } else {
            self.errs.push(format!("`{key}` must be positive, got {v}"));
            None
        }
    }

    fn non_negative(&mut self, v: Option<f64>, key: &str) -> Option<f64> {
        let v = self.finite(v, key)?;
        if v >= 0.0 {
            Some(v)
        } else {
            self.errs.push(format!("`{key}` must be non-negative, got {v}"));
            None
        }
    }

    fn stray(&mut self, section: &str, kind: &str, present: &[(&str, bool)]) {
        for (key, set) in present {
            if *set {
                self.errs.push(format!("`{section}.{key}` is not used by {section} kind `{kind}`"));
            }
        }
    }

    fn points(&mut self, v: Option<Vec<[f64; 2]>>, key: &str) -> Option<Vec<[f64; 2]>> {
        let pts = match v {
            Some(p) => p,
            None => {
                self.errs.push(format!("missing key `{key}`"));
                return None;
            }
        };
        if pts.is_empty() {
            self.errs.push(format!("`{key}` needs at least one point"));
            return None;
        }
        if pts.iter().flatten().any(|v| !v.is_finite()) {
            self.errs.push(format!("`{key}` contains non-finite values"));
            return None;
        }
        if pts.windows(2).any(|w| w[1][0] <= w[0][0]) {
            self.errs.push(format!("`{key}` abscissae must be strictly increasing"));
            return None;
        }
        Some(pts)
    }
}

/// Parses and validates a scenario. TOML syntax and type errors are
/// reported as [`Error::Config`]; unknown keys, missing keys and invalid
/// values are collected into one [`Error::Validation`].
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let de = toml::de::Deserializer::parse(text).map_err(|e| Error::Config(e.to_string()))?;
    let mut unknown = Vec::new();
    let raw: RawScenario = serde_ignored::deserialize(de, |path| unknown.push(path.to_string()))
        .map_err(|e| Error::Config(e.to_string()))?;
    let mut c = Collector {
        errs: unknown.into_iter().map(|p| format!("unknown key `{p}`")).collect(),
    };
    let scenario = convert(raw, &mut c);
    match scenario {
        Some(s) if c.errs.is_empty() => Ok(s),
        _ => Err(Error::Validation(c.errs)),
    }
}

pub fn load_scenario(path: &std::path::Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_scenario(&text)
}

fn convert(raw: RawScenario, c: &mut Collector) -> Option<Scenario> {
    let grid = convert_grid(&raw.grid, c);
    let bathymetry = convert_bathymetry(raw.bathymetry, c);
    let layers = convert_layers(&raw.layers, c);
    let physics = convert_physics(raw.physics, c);
    let left = convert_side(raw.boundary.left, "left", c);
    let right = convert_side(raw.boundary.right, "right", c);
    if let (Some(l), Some(r)) = (&left, &right) {
        if (*l == BoundaryCondition::Periodic) != (*r == BoundaryCondition::Periodic) {
            c.errs.push("periodic boundaries must be set on both ends".into());
        }
    }
    let initial = convert_initial(raw.initial, layers.as_ref().map(|p| p.len()), c);
    let time = convert_time(&raw.time, c);
    let output = convert_output(&raw.output, c);
    Some(Scenario {
        name: raw.name,
        grid: grid?,
        bathymetry: bathymetry?,
        layers: layers?,
        physics: physics?,
        left: left?,
        right: right?,
        initial: initial?,
        time: time?,
        output: output?,
    })
}

fn convert_grid(raw: &RawGrid, c: &mut Collector) -> Option<GridSpec> {
    let x_min = c.finite(raw.x_min, "grid.x_min");
    let x_max = c.finite(raw.x_max, "grid.x_max");
    let cells = c.require(raw.cells, "grid.cells");
    if let Some(n) = cells {
        if n < 1 {
            c.errs.push(format!("`grid.cells` must be at least 1, got {n}"));
        }
    }
    if let (Some(a), Some(b)) = (x_min, x_max) {
        if b <= a {
            c.errs.push(format!("`grid.x_max` ({b}) must exceed `grid.x_min` ({a})"));
            return None;
        }
    }
    let cells = cells.filter(|n| *n >= 1)?;
    Some(GridSpec {
        x_min: x_min?,
        x_max: x_max?,
        cells: cells as usize,
    })
}

fn convert_bathymetry(raw: RawBathymetry, c: &mut Collector) -> Option<BathymetrySpec> {
    let kind = raw.kind.clone().unwrap_or_else(|| "flat".into());
    match kind.as_str() {
        "flat" => {
            c.stray(
                "bathymetry",
                "flat",
                &[
                    ("center", raw.center.is_some()),
                    ("height", raw.height.is_some()),
                    ("width", raw.width.is_some()),
                    ("base", raw.base.is_some()),
                    ("points", raw.points.is_some()),
                ],
            );
            let level = c.finite(Some(raw.level.unwrap_or(0.0)), "bathymetry.level")?;
            Some(BathymetrySpec::Flat { level })
        }
        "bump" => {
            c.stray(
                "bathymetry",
                "bump",
                &[("level", raw.level.is_some()), ("points", raw.points.is_some())],
            );
            let center = c.finite(raw.center, "bathymetry.center");
            let height = c.finite(raw.height, "bathymetry.height");
            let width = c.positive(raw.width, "bathymetry.width");
            let base = c.finite(Some(raw.base.unwrap_or(0.0)), "bathymetry.base");
            Some(BathymetrySpec::Bump {
                center: center?,
                height: height?,
                width: width?,
                base: base?,
            })
        }
        "table" => {
            c.stray(
                "bathymetry",
                "table",
                &[
                    ("level", raw.level.is_some()),
                    ("center", raw.center.is_some()),
                    ("height", raw.height.is_some()),
                    ("width", raw.width.is_some()),
                    ("base", raw.base.is_some()),
                ],
            );
            let points = c.points(raw.points, "bathymetry.points")?;
            Some(BathymetrySpec::Table { points })
        }
        other => {
            c.errs.push(format!("unknown bathymetry kind `{other}` (expected flat, bump or table)"));
            None
        }
    }
}

fn convert_layers(raw: &RawLayers, c: &mut Collector) -> Option<LayerPartition> {
    match (raw.count, &raw.fractions) {
        (Some(_), Some(_)) => {
            c.errs.push("set either `layers.count` or `layers.fractions`, not both".into());
            None
        }
        (None, None) => {
            c.errs.push("missing key `layers.count` (or `layers.fractions`)".into());
            None
        }
        (Some(n), None) => {
            if n < 1 {
                c.errs.push(format!("`layers.count` must be at least 1, got {n}"));
                return None;
            }
            LayerPartition::uniform(n as usize)
                .map_err(|e| c.errs.push(e.to_string()))
                .ok()
        }
        (None, Some(f)) => {
            let mut ok = true;
            if f.is_empty() {
                c.errs.push("`layers.fractions` must not be empty".into());
                return None;
            }
            for (a, l) in f.iter().enumerate() {
                if !(*l > 0.0) || !l.is_finite() {
                    c.errs.push(format!("`layers.fractions[{a}]` must be positive, got {l}"));
                    ok = false;
                }
            }
            let sum: f64 = f.iter().sum();
            if ok && (sum - 1.0).abs() > PARTITION_SUM_TOL {
                c.errs.push(format!("`layers.fractions` must sum to 1, got {sum}"));
                ok = false;
            }
            if !ok {
                return None;
            }
            LayerPartition::new(f.clone())
                .map_err(|e| c.errs.push(e.to_string()))
                .ok()
        }
    }
}

fn convert_friction(raw: Option<RawFriction>, c: &mut Collector) -> Option<FrictionLaw> {
    let Some(raw) = raw else {
        return Some(FrictionLaw::None);
    };
    let law = raw.law.clone().unwrap_or_else(|| "none".into());
    let stray = |c: &mut Collector, used: &[&str]| {
        for (key, set) in [("k_l", raw.k_l.is_some()), ("k_t", raw.k_t.is_some()), ("k_s", raw.k_s.is_some())] {
            if set && !used.contains(&key) {
                c.errs.push(format!("`physics.friction.{key}` is not used by friction law `{law}`"));
            }
        }
    };
    match law.as_str() {
        "none" => {
            stray(c, &[]);
            Some(FrictionLaw::None)
        }
        "navier" => {
            stray(c, &["k_l"]);
            Some(FrictionLaw::Navier {
                k_l: c.non_negative(raw.k_l, "physics.friction.k_l")?,
            })
        }
        "navier-turbulent" => {
            stray(c, &["k_l", "k_t"]);
            let k_l = c.non_negative(Some(raw.k_l.unwrap_or(0.0)), "physics.friction.k_l");
            let k_t = c.non_negative(raw.k_t, "physics.friction.k_t");
            Some(FrictionLaw::NavierTurbulent { k_l: k_l?, k_t: k_t? })
        }
        "strickler" => {
            stray(c, &["k_s"]);
            Some(FrictionLaw::Strickler {
                k_s: c.positive(raw.k_s, "physics.friction.k_s")?,
            })
        }
        other => {
            c.errs.push(format!(
                "unknown friction law `{other}` (expected none, navier, navier-turbulent or strickler)"
            ));
            None
        }
    }
}

fn convert_physics(raw: RawPhysics, c: &mut Collector) -> Option<PhysParams> {
    let gravity = c.positive(Some(raw.gravity.unwrap_or(9.81)), "physics.gravity");
    let viscosity = c.non_negative(Some(raw.viscosity.unwrap_or(0.0)), "physics.viscosity");
    let wind_stress = c.finite(Some(raw.wind_stress.unwrap_or(0.0)), "physics.wind_stress");
    let friction = convert_friction(raw.friction, c);
    Some(PhysParams {
        gravity: gravity?,
        viscosity: viscosity?,
        friction: friction?,
        wind_stress: wind_stress?,
    })
}

fn convert_side(raw: Option<RawSide>, side: &str, c: &mut Collector) -> Option<BoundaryCondition> {
    let Some(raw) = raw else {
        c.errs.push(format!("missing key `boundary.{side}`"));
        return None;
    };
    let Some(kind) = raw.kind.as_deref() else {
        c.errs.push(format!("missing key `boundary.{side}.type`"));
        return None;
    };
    let key = |k: &str| format!("boundary.{side}.{k}");
    let stray = |c: &mut Collector, allowed: &[&str]| {
        for (k, set) in [("q", raw.q.is_some()), ("h", raw.h.is_some())] {
            if set && !allowed.contains(&k) {
                c.errs.push(format!("`boundary.{side}.{k}` is not used by boundary type `{kind}`"));
            }
        }
    };
    match kind {
        "wall" => {
            stray(c, &[]);
            Some(BoundaryCondition::Wall)
        }
        "periodic" => {
            stray(c, &[]);
            Some(BoundaryCondition::Periodic)
        }
        "discharge" => {
            stray(c, &["q"]);
            Some(BoundaryCondition::Discharge {
                q: c.finite(raw.q, &key("q"))?,
            })
        }
        "height" => {
            stray(c, &["h"]);
            Some(BoundaryCondition::Height {
                h: c.non_negative(raw.h, &key("h"))?,
            })
        }
        other => {
            c.errs.push(format!(
                "unknown boundary type `{other}` on the {side} (expected wall, discharge, height or periodic)"
            ));
            None
        }
    }
}

fn convert_velocity(raw: Option<RawVelocity>, layers: Option<usize>, c: &mut Collector) -> Option<Vec<f64>> {
    let u = match raw {
        None => vec![0.0],
        Some(RawVelocity::Scalar(v)) => vec![v],
        Some(RawVelocity::Layers(v)) => v,
    };
    if u.is_empty() || u.iter().any(|v| !v.is_finite()) {
        c.errs.push("`initial.u` must hold finite values".into());
        return None;
    }
    if let Some(n) = layers {
        if u.len() != 1 && u.len() != n {
            c.errs.push(format!("`initial.u` has {} entries; expected 1 or {n}", u.len()));
            return None;
        }
    }
    Some(u)
}

fn convert_initial(raw: RawInitial, layers: Option<usize>, c: &mut Collector) -> Option<InitialSpec> {
    let Some(kind) = raw.kind.clone() else {
        c.errs.push("missing key `initial.kind`".into());
        return None;
    };
    let present = [
        ("h", raw.h.is_some()),
        ("level", raw.level.is_some()),
        ("u", raw.u.is_some()),
        ("position", raw.position.is_some()),
        ("left", raw.left.is_some()),
        ("right", raw.right.is_some()),
        ("points", raw.points.is_some()),
    ];
    let stray = |c: &mut Collector, allowed: &[&str]| {
        let unused: Vec<(&str, bool)> = present.iter().filter(|(k, _)| !allowed.contains(k)).copied().collect();
        c.stray("initial", &kind, &unused);
    };
    match kind.as_str() {
        "constant" => {
            stray(c, &["h", "u"]);
            let h = c.non_negative(raw.h, "initial.h");
            let u = convert_velocity(raw.u, layers, c);
            Some(InitialSpec::Constant { h: h?, u: u? })
        }
        "level" => {
            stray(c, &["level", "u"]);
            let level = c.finite(raw.level, "initial.level");
            let u = convert_velocity(raw.u, layers, c);
            Some(InitialSpec::Level { level: level?, u: u? })
        }
        "dam-break" => {
            stray(c, &["position", "left", "right"]);
            let position = c.finite(raw.position, "initial.position");
            let left = c.finite(raw.left, "initial.left");
            let right = c.finite(raw.right, "initial.right");
            Some(InitialSpec::DamBreak {
                position: position?,
                left: left?,
                right: right?,
            })
        }
        "table" => {
            stray(c, &["points", "u"]);
            let points = c.points(raw.points, "initial.points");
            if let Some(p) = &points {
                if p.iter().any(|q| q[1] < 0.0) {
                    c.errs.push("`initial.points` heights must be non-negative".into());
                }
            }
            let u = convert_velocity(raw.u, layers, c);
            Some(InitialSpec::Table { points: points?, u: u? })
        }
        other => {
            c.errs.push(format!(
                "unknown initial kind `{other}` (expected constant, level, dam-break or table)"
            ));
            None
        }
    }
}

fn convert_time(raw: &RawTime, c: &mut Collector) -> Option<TimeSpec> {
    let t_end = c.non_negative(raw.t_end, "time.t_end");
    let order = match raw.order.unwrap_or(1) {
        1 => Some(Order::First),
        2 => Some(Order::Second),
        o => {
            c.errs.push(format!("`time.order` must be 1 or 2, got {o}"));
            None
        }
    };
    let safety = c.positive(Some(raw.safety.unwrap_or(0.9)), "time.safety");
    if let Some(s) = safety {
        if s > 1.0 {
            c.errs.push(format!("`time.safety` must not exceed 1, got {s}"));
        }
    }
    let max_dt = match raw.max_dt {
        Some(v) => Some(c.positive(Some(v), "time.max_dt")),
        None => Some(None),
    };
    let steady = match raw.steady_tolerance {
        Some(v) => Some(c.positive(Some(v), "time.steady_tolerance")),
        None => Some(None),
    };
    let max_steps = match raw.max_steps {
        Some(n) if n < 1 => {
            c.errs.push(format!("`time.max_steps` must be at least 1, got {n}"));
            None
        }
        other => Some(other.map(|n| n as usize)),
    };
    Some(TimeSpec {
        t_end: t_end?,
        order: order?,
        heun: raw.heun.unwrap_or(false),
        safety: safety.filter(|s| *s <= 1.0)?,
        max_dt: max_dt?,
        steady_tolerance: steady?,
        max_steps: max_steps?,
    })
}

fn convert_output(raw: &RawOutput, c: &mut Collector) -> Option<OutputSpec> {
    match raw.snapshot_interval {
        None => Some(OutputSpec::default()),
        Some(v) => Some(OutputSpec {
            snapshot_interval: Some(c.positive(Some(v), "output.snapshot_interval")?),
        }),
    }
}

fn interpolate(points: &[[f64; 2]], x: f64) -> f64 {
    if x <= points[0][0] {
        return points[0][1];
    }
    let last = points[points.len() - 1];
    if x >= last[0] {
        return last[1];
    }
    let k = points.partition_point(|p| p[0] <= x);
    let (a, b) = (points[k - 1], points[k]);
    a[1] + (b[1] - a[1]) * (x - a[0]) / (b[0] - a[0])
}

impl BathymetrySpec {
    pub fn elevation(&self, x: f64) -> f64 {
        match self {
            BathymetrySpec::Flat { level } => *level,
            BathymetrySpec::Bump {
                center,
                height,
                width,
                base,
            } => {
                let r = (x - center) / (0.5 * width);
                if r.abs() < 1.0 {
                    base + height * (1.0 - r * r)
                } else {
                    *base
                }
            }
            BathymetrySpec::Table { points } => interpolate(points, x),
        }
    }
}

fn expand_velocity(u: &[f64], n: usize) -> Vec<f64> {
    if u.len() == 1 {
        vec![u[0]; n]
    } else {
        u.to_vec()
    }
}

impl Scenario {
    pub fn grid(&self) -> Result<Grid1D> {
        Grid1D::uniform(self.grid.x_min, self.grid.x_max, self.grid.cells)
    }

    pub fn problem(&self) -> Result<Problem> {
        let grid = self.grid()?;
        let z = grid.centers().iter().map(|x| self.bathymetry.elevation(*x)).collect();
        Problem::new(
            grid,
            self.layers.clone(),
            Bathymetry::new(z)?,
            self.physics.clone(),
            self.left,
            self.right,
        )
    }

    pub fn initial_state(&self, problem: &Problem) -> Result<SimState> {
        let n = problem.n_layers();
        let x = problem.grid.centers();
        let z = problem.bathymetry.elevations();
        let cells = x.len();
        let (h, u): (Vec<f64>, Vec<f64>) = match &self.initial {
            InitialSpec::Constant { h, u } => (vec![*h; cells], expand_velocity(u, n)),
            InitialSpec::Level { level, u } => (z.iter().map(|zb| (level - zb).max(0.0)).collect(), expand_velocity(u, n)),
            InitialSpec::DamBreak { position, left, right } => (
                x.iter()
                    .zip(z)
                    .map(|(xi, zb)| ((if *xi < *position { *left } else { *right }) - zb).max(0.0))
                    .collect(),
                vec![0.0; n],
            ),
            InitialSpec::Table { points, u } => (
                x.iter().map(|xi| interpolate(points, *xi).max(0.0)).collect(),
                expand_velocity(u, n),
            ),
        };
        let mut vel = Vec::with_capacity(cells * n);
        for hi in &h {
            if *hi > problem.dry_threshold {
                vel.extend_from_slice(&u);
            } else {
                vel.extend(std::iter::repeat_n(0.0, n));
            }
        }
        SimState::from_velocities(h, &vel, &problem.layers)
    }

    pub fn step_config(&self) -> StepConfig {
        StepConfig {
            order: self.time.order,
            heun: self.time.heun,
            safety: self.time.safety,
            max_dt: self.time.max_dt.unwrap_or(f64::INFINITY),
            snapshot_interval: self.output.snapshot_interval,
            steady_tolerance: self.time.steady_tolerance,
            max_steps: self.time.max_steps,
            ..StepConfig::default()
        }
    }

    /// TOML text that parses back to an equal scenario.
    pub fn to_toml(&self) -> String {
        let raw = self.to_raw();
        toml::to_string(&raw).expect("scenario values are always representable in TOML")
    }

    fn to_raw(&self) -> RawScenario {
        let n = self.layers.len();
        let uniform = LayerPartition::uniform(n).map(|p| p == self.layers).unwrap_or(false);
        let bathymetry = match &self.bathymetry {
            BathymetrySpec::Flat { level } => RawBathymetry {
                kind: Some("flat".into()),
                level: Some(*level),
                ..Default::default()
            },
            BathymetrySpec::Bump {
                center,
                height,
                width,
                base,
            } => RawBathymetry {
                kind: Some("bump".into()),
                center: Some(*center),
                height: Some(*height),
                width: Some(*width),
                base: Some(*base),
                ..Default::default()
            },
            BathymetrySpec::Table { points } => RawBathymetry {
                kind: Some("table".into()),
                points: Some(points.clone()),
                ..Default::default()
            },
        };
        let friction = match self.physics.friction {
            FrictionLaw::None => None,
            FrictionLaw::Navier { k_l } => Some(RawFriction {
                law: Some("navier".into()),
                k_l: Some(k_l),
                ..Default::default()
            }),
            FrictionLaw::NavierTurbulent { k_l, k_t } => Some(RawFriction {
                law: Some("navier-turbulent".into()),
                k_l: Some(k_l),
                k_t: Some(k_t),
                ..Default::default()
            }),
            FrictionLaw::Strickler { k_s } => Some(RawFriction {
                law: Some("strickler".into()),
                k_s: Some(k_s),
                ..Default::default()
            }),
        };
        let side = |bc: &BoundaryCondition| -> RawSide {
            match *bc {
                BoundaryCondition::Wall => RawSide {
                    kind: Some("wall".into()),
                    ..Default::default()
                },
                BoundaryCondition::Periodic => RawSide {
                    kind: Some("periodic".into()),
                    ..Default::default()
                },
                BoundaryCondition::Discharge { q } => RawSide {
                    kind: Some("discharge".into()),
                    q: Some(q),
                    ..Default::default()
                },
                BoundaryCondition::Height { h } => RawSide {
                    kind: Some("height".into()),
                    h: Some(h),
                    ..Default::default()
                },
            }
        };
        let vel = |u: &[f64]| {
            if u.len() == 1 {
                RawVelocity::Scalar(u[0])
            } else {
                RawVelocity::Layers(u.to_vec())
            }
        };
        let initial = match &self.initial {
            InitialSpec::Constant { h, u } => RawInitial {
                kind: Some("constant".into()),
                h: Some(*h),
                u: Some(vel(u)),
                ..Default::default()
            },
            InitialSpec::Level { level, u } => RawInitial {
                kind: Some("level".into()),
                level: Some(*level),
                u: Some(vel(u)),
                ..Default::default()
            },
            InitialSpec::DamBreak { position, left, right } => RawInitial {
                kind: Some("dam-break".into()),
                position: Some(*position),
                left: Some(*left),
                right: Some(*right),
                ..Default::default()
            },
            InitialSpec::Table { points, u } => RawInitial {
                kind: Some("table".into()),
                points: Some(points.clone()),
                u: Some(vel(u)),
                ..Default::default()
            },
        };
        RawScenario {
            name: self.name.clone(),
            grid: RawGrid {
                x_min: Some(self.grid.x_min),
                x_max: Some(self.grid.x_max),
                cells: Some(self.grid.cells as i64),
            },
            bathymetry,
            layers: if uniform {
                RawLayers {
                    count: Some(n as i64),
                    fractions: None,
                }
            } else {
                RawLayers {
                    count: None,
                    fractions: Some(self.layers.fractions().to_vec()),
                }
            },
            physics: RawPhysics {
                gravity: Some(self.physics.gravity),
                viscosity: Some(self.physics.viscosity),
                wind_stress: Some(self.physics.wind_stress),
                friction,
            },
            boundary: RawBoundary {
                left: Some(side(&self.left)),
                right: Some(side(&self.right)),
            },
            initial,
            time: RawTime {
                t_end: Some(self.time.t_end),
                order: Some(self.time.order.as_u8() as i64),
                heun: Some(self.time.heun),
                safety: Some(self.time.safety),
                max_dt: self.time.max_dt,
                steady_tolerance: self.time.steady_tolerance,
                max_steps: self.time.max_steps.map(|n| n as i64),
            },
            output: RawOutput {
                snapshot_interval: self.output.snapshot_interval,
            },
        }
    }
}
