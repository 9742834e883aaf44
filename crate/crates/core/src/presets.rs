//! Built-in scenarios. The files under `scenarios/` at the repository root
//! are these presets written out.

use crate::boundary::BoundaryCondition;
use crate::scenario::{BathymetrySpec, GridSpec, InitialSpec, OutputSpec, Scenario, TimeSpec};
use crate::state::{FrictionLaw, LayerPartition, PhysParams};
use crate::stepper::Order;

/// Inflow discharge of the transcritical bump flow (m²/s).
pub const TRANSCRITICAL_Q: f64 = 1.0;
/// Outflow height of the transcritical bump flow (m).
pub const TRANSCRITICAL_H_OUT: f64 = 0.6;

fn uniform(layers: usize) -> LayerPartition {
    LayerPartition::uniform(layers).expect("layer count is positive")
}

fn bump() -> BathymetrySpec {
    BathymetrySpec::Bump {
        center: 10.0,
        height: 0.2,
        width: 4.0,
        base: 0.0,
    }
}

/// Lake at rest at level 0.5 over the parabolic bump on `[0, 25]`.
pub fn lake_at_rest(cells: usize, layers: usize) -> Scenario {
    Scenario {
        name: Some("lake-at-rest".into()),
        grid: GridSpec {
            x_min: 0.0,
            x_max: 25.0,
            cells,
        },
        bathymetry: bump(),
        layers: uniform(layers),
        physics: PhysParams::default(),
        left: BoundaryCondition::Wall,
        right: BoundaryCondition::Wall,
        initial: InitialSpec::Level {
            level: 0.5,
            u: vec![0.0],
        },
        time: TimeSpec {
            t_end: 10.0,
            order: Order::First,
            heun: false,
            safety: 0.9,
            max_dt: None,
            steady_tolerance: None,
            max_steps: None,
        },
        output: OutputSpec::default(),
    }
}

/// Transcritical flow over the bump `z = 0.2 - 0.05 (x - 10)²` on `[0, 25]`
/// with inflow `Q = 1 m²/s` and outflow height `0.6 m`. Without friction the
/// steady state has a hydraulic jump past the crest.
pub fn transcritical(cells: usize, layers: usize, friction: bool) -> Scenario {
    let physics = if friction {
        PhysParams {
            gravity: 9.81,
            viscosity: 0.01,
            friction: FrictionLaw::Strickler { k_s: 30.0 },
            wind_stress: 0.0,
        }
    } else {
        PhysParams::default()
    };
    Scenario {
        name: Some(if friction { "transcritical-friction" } else { "transcritical" }.into()),
        grid: GridSpec {
            x_min: 0.0,
            x_max: 25.0,
            cells,
        },
        bathymetry: bump(),
        layers: uniform(layers),
        physics,
        left: BoundaryCondition::Discharge { q: TRANSCRITICAL_Q },
        right: BoundaryCondition::Height { h: TRANSCRITICAL_H_OUT },
        initial: InitialSpec::Level {
            level: TRANSCRITICAL_H_OUT,
            u: vec![0.0],
        },
        time: TimeSpec {
            t_end: 2000.0,
            order: Order::First,
            heun: false,
            safety: 0.9,
            max_dt: None,
            steady_tolerance: Some(1e-8),
            max_steps: None,
        },
        output: OutputSpec {
            snapshot_interval: Some(50.0),
        },
    }
}

/// Closed basin `[0, 10]` m with vertical shores (walls), a bed with an
/// asymmetric mound and a still water level of 1 m, driven by a constant
/// surface wind stress towards `+x`.
pub fn wind_basin(cells: usize, layers: usize) -> Scenario {
    Scenario {
        name: Some("wind-basin".into()),
        grid: GridSpec {
            x_min: 0.0,
            x_max: 10.0,
            cells,
        },
        bathymetry: BathymetrySpec::Table {
            points: vec![[0.0, 0.1], [2.5, 0.0], [5.5, 0.35], [7.0, 0.2], [10.0, 0.25]],
        },
        layers: uniform(layers),
        physics: PhysParams {
            gravity: 9.81,
            viscosity: 0.01,
            friction: FrictionLaw::Navier { k_l: 0.01 },
            wind_stress: 1e-3,
        },
        left: BoundaryCondition::Wall,
        right: BoundaryCondition::Wall,
        initial: InitialSpec::Level {
            level: 1.0,
            u: vec![0.0],
        },
        time: TimeSpec {
            t_end: 5000.0,
            order: Order::First,
            heun: false,
            safety: 0.9,
            max_dt: None,
            steady_tolerance: Some(1e-8),
            max_steps: None,
        },
        output: OutputSpec {
            snapshot_interval: Some(250.0),
        },
    }
}

/// Dam break onto a dry bed on `[0, 10]`: water at level 1 left of `x = 5`.
pub fn dam_break_dry(cells: usize, layers: usize) -> Scenario {
    Scenario {
        name: Some("dam-break-dry".into()),
        grid: GridSpec {
            x_min: 0.0,
            x_max: 10.0,
            cells,
        },
        bathymetry: BathymetrySpec::Flat { level: 0.0 },
        layers: uniform(layers),
        physics: PhysParams::default(),
        left: BoundaryCondition::Wall,
        right: BoundaryCondition::Wall,
        initial: InitialSpec::DamBreak {
            position: 5.0,
            left: 1.0,
            right: 0.0,
        },
        time: TimeSpec {
            t_end: 1.0,
            order: Order::Second,
            heun: false,
            safety: 0.9,
            max_dt: None,
            steady_tolerance: None,
            max_steps: None,
        },
        output: OutputSpec {
            snapshot_interval: Some(0.1),
        },
    }
}

pub fn by_name(name: &str) -> Option<Scenario> {
    match name {
        "lake-at-rest" => Some(lake_at_rest(200, 5)),
        "transcritical" => Some(transcritical(400, 1, false)),
        "transcritical-friction" => Some(transcritical(200, 15, true)),
        "wind-basin" => Some(wind_basin(100, 10)),
        "dam-break-dry" => Some(dam_break_dry(200, 3)),
        _ => None,
    }
}

pub const NAMES: [&str; 5] = [
    "lake-at-rest",
    "transcritical",
    "transcritical-friction",
    "wind-basin",
    "dam-break-dry",
];
