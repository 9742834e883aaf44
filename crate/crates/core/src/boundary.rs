//! Ghost cells for the two domain ends.

use serde::{Deserialize, Serialize};

use crate::state::{Bathymetry, LayerPartition, SimState};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BoundaryCondition {
    /// Reflective wall: mirrored height, negated velocities.
    Wall,
    /// Imposed column discharge (m²/s, positive towards +x), spread uniformly
    /// over the layers; height copied from the interior.
    Discharge { q: f64 },
    /// Imposed total height; velocities copied from the interior.
    Height { h: f64 },
    Periodic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GhostCell {
    pub h: f64,
    pub z_b: f64,
    pub u: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Ghost states beyond the left and right ends of the domain.
pub fn apply_boundary(
    state: &SimState,
    bathy: &Bathymetry,
    part: &LayerPartition,
    dry: f64,
    left: &BoundaryCondition,
    right: &BoundaryCondition,
) -> (GhostCell, GhostCell) {
    (
        ghost(state, bathy, part, dry, left, Side::Left),
        ghost(state, bathy, part, dry, right, Side::Right),
    )
}

fn ghost(
    state: &SimState,
    bathy: &Bathymetry,
    part: &LayerPartition,
    dry: f64,
    bc: &BoundaryCondition,
    side: Side,
) -> GhostCell {
    let last = state.cells() - 1;
    let (inner, opposite) = match side {
        Side::Left => (0, last),
        Side::Right => (last, 0),
    };
    let n = part.len();
    let z = bathy.elevations();
    let interior_u = |i: usize| -> Vec<f64> {
        (0..n).map(|a| state.velocity(i, a, part, dry)).collect()
    };
    match *bc {
        BoundaryCondition::Wall => GhostCell {
            h: state.h[inner],
            z_b: z[inner],
            u: interior_u(inner).into_iter().map(|u| -u).collect(),
        },
        BoundaryCondition::Periodic => GhostCell {
            h: state.h[opposite],
            z_b: z[opposite],
            u: interior_u(opposite),
        },
        BoundaryCondition::Height { h } => GhostCell {
            h,
            z_b: z[inner],
            u: interior_u(inner),
        },
        BoundaryCondition::Discharge { q } => {
            let h = state.h[inner];
            let u = if h > dry { q / h } else { 0.0 };
            GhostCell {
                h,
                z_b: z[inner],
                u: vec![u; n],
            }
        }
    }
}

impl BoundaryCondition {
    pub fn validate(&self, side: &str) -> Vec<String> {
        match *self {
            BoundaryCondition::Discharge { q } if !q.is_finite() => {
                vec![format!("{side} boundary discharge must be finite")]
            }
            BoundaryCondition::Height { h } if !(h >= 0.0) || !h.is_finite() => {
                vec![format!(
                    "{side} boundary height must be finite and non-negative, got {h}"
                )]
            }
            _ => Vec::new(),
        }
    }
}
