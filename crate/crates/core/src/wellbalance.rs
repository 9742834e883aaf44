//! Hydrostatic reconstruction of interface heights and the matching
//! topography source.
//!
//! At interface `i + 1/2` the bed is raised to `max(z_i, z_{i+1})` and both
//! one-sided heights are lowered accordingly (clipped at zero). Fluxes are
//! evaluated on the lowered heights and the pressure deficit is returned to
//! the cell as a source, which makes any resting free surface an exact
//! discrete equilibrium.

use crate::boundary::{BoundaryCondition, GhostCell};
use crate::kinetic::{resting_pressure, sound_speed};
use crate::state::{Bathymetry, LayerPartition, SimState};

/// `(H_{i+1/2-}, H_{i+1/2+})` from the two cell heights and beds.
#[inline]
pub fn reconstruct_interface_heights(h_left: f64, h_right: f64, z_left: f64, z_right: f64) -> (f64, f64) {
    let z_face = z_left.max(z_right);
    let lower = |h: f64, z: f64| if z == z_face { h } else { (h + z - z_face).max(0.0) };
    (lower(h_left, z_left), lower(h_right, z_right))
}

/// Pressure `l g H²/2` of a resting layer fraction `l` in a column of height `h`,
/// evaluated through the kinetic moments.
#[inline]
pub fn layer_pressure(l: f64, h: f64, g: f64) -> f64 {
    if h <= 0.0 {
        0.0
    } else {
        resting_pressure(l * h, sound_speed(h, g))
    }
}

/// Per-cell, per-layer topography source `Sb_{α,i}` (cell-major). The mass
/// component is identically zero and not stored.
#[derive(Debug, Clone, PartialEq)]
pub struct TopoSource {
    pub layers: usize,
    pub momentum: Vec<f64>,
}

impl TopoSource {
    pub fn column(&self, i: usize) -> &[f64] {
        &self.momentum[i * self.layers..(i + 1) * self.layers]
    }

    /// Monolayer-equivalent source `Σ_α Sb_{α,i}`.
    pub fn column_total(&self, i: usize) -> f64 {
        self.column(i).iter().sum()
    }
}

/// First-order source `Sb_{α,i} = l_α (P(H_{i+1/2-}) - P(H_{i-1/2+}))` with
/// `P(H) = g H² / 2`. Ghost beds and heights come from `left`/`right`.
pub fn topo_source(
    state: &SimState,
    bathy: &Bathymetry,
    part: &LayerPartition,
    g: f64,
    left: &GhostCell,
    right: &GhostCell,
) -> TopoSource {
    let cells = state.cells();
    let z = bathy.elevations();
    let height = |k: usize| -> (f64, f64) {
        if k == 0 {
            (left.h, left.z_b)
        } else if k == cells + 1 {
            (right.h, right.z_b)
        } else {
            (state.h[k - 1], z[k - 1])
        }
    };
    let n = part.len();
    let mut momentum = vec![0.0; cells * n];
    for i in 0..cells {
        let (h, zb) = height(i + 1);
        let (hl, zl) = height(i);
        let (hr, zr) = height(i + 2);
        let (_, at_left_face) = reconstruct_interface_heights(hl, h, zl, zb);
        let (at_right_face, _) = reconstruct_interface_heights(h, hr, zb, zr);
        for a in 0..n {
            let l = part.get(a);
            momentum[i * n + a] = layer_pressure(l, at_right_face, g) - layer_pressure(l, at_left_face, g);
        }
    }
    TopoSource { layers: n, momentum }
}

/// Convenience wrapper resolving ghosts from boundary conditions.
pub fn topo_source_with_boundaries(
    state: &SimState,
    bathy: &Bathymetry,
    part: &LayerPartition,
    g: f64,
    dry: f64,
    left: &BoundaryCondition,
    right: &BoundaryCondition,
) -> TopoSource {
    let (gl, gr) = crate::boundary::apply_boundary(state, bathy, part, dry, left, right);
    topo_source(state, bathy, part, g, &gl, &gr)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_bed_keeps_heights() {
        assert_eq!(reconstruct_interface_heights(0.7, 0.4, 1.0, 1.0), (0.7, 0.4));
    }

    #[test]
    fn lake_at_rest_gives_equal_sides() {
        let (a, b) = reconstruct_interface_heights(0.75, 0.5, 0.0, 0.25);
        assert_eq!(a, b);
    }

    #[test]
    fn dry_step_is_clipped() {
        let (a, b) = reconstruct_interface_heights(0.1, 0.3, 0.0, 0.5);
        assert_eq!(a, 0.0);
        assert_eq!(b, 0.3);
    }

    #[test]
    fn reconstructed_heights_never_exceed_inputs() {
        for (hl, hr, zl, zr) in [(1.0, 2.0, 0.3, -0.1), (0.0, 0.5, 1.0, 0.0), (3.0, 0.2, 0.0, 0.0)] {
            let (a, b) = reconstruct_interface_heights(hl, hr, zl, zr);
            assert!(a <= hl && b <= hr && a >= 0.0 && b >= 0.0);
        }
    }

    #[test]
    fn flat_bed_source_vanishes() {
        let part = LayerPartition::uniform(3).unwrap();
        let s = SimState::uniform_velocity(vec![1.0, 0.5, 2.0], 0.1, &part);
        let b = Bathymetry::flat(3, 0.2);
        let src = topo_source_with_boundaries(&s, &b, &part, 9.81, 1e-10, &BoundaryCondition::Wall, &BoundaryCondition::Wall);
        assert!(src.momentum.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn symmetric_bump_gives_antisymmetric_sources() {
        // one raised cell in the middle of five
        let part = LayerPartition::uniform(1).unwrap();
        let g = 2.0;
        let z = vec![0.0, 0.0, 0.3, 0.0, 0.0];
        let h = vec![1.0, 1.0, 0.7, 1.0, 1.0];
        let s = SimState::uniform_velocity(h, 0.0, &part);
        let b = Bathymetry::new(z).unwrap();
        let src = topo_source_with_boundaries(&s, &b, &part, g, 1e-10, &BoundaryCondition::Wall, &BoundaryCondition::Wall);
        // cell 1: right face raised to 0.3 -> H- = 0.7; left face flat -> H+ = 1.0
        // Sb = g/2 (0.49 - 1.0) = -0.51
        assert!((src.momentum[1] + 0.51).abs() < 1e-14);
        assert!((src.momentum[3] - 0.51).abs() < 1e-14);
        assert!(src.momentum[2].abs() < 1e-15);
        assert_eq!(src.momentum[0], 0.0);
    }

    #[test]
    fn source_is_linear_in_fraction() {
        let part = LayerPartition::new(vec![0.2, 0.3, 0.5]).unwrap();
        let mono = LayerPartition::uniform(1).unwrap();
        let z = vec![0.0, 0.1, 0.25, 0.05];
        let h = vec![1.0, 0.8, 0.9, 1.1];
        let b = Bathymetry::new(z).unwrap();
        let s = SimState::uniform_velocity(h.clone(), 0.0, &part);
        let s1 = SimState::uniform_velocity(h, 0.0, &mono);
        let w = BoundaryCondition::Wall;
        let src = topo_source_with_boundaries(&s, &b, &part, 9.81, 1e-10, &w, &w);
        let src1 = topo_source_with_boundaries(&s1, &b, &mono, 9.81, 1e-10, &w, &w);
        for i in 0..4 {
            assert!((src.column_total(i) - src1.momentum[i]).abs() < 1e-14);
            for (a, l) in part.fractions().iter().enumerate() {
                assert!((src.column(i)[a] - l * src1.momentum[i]).abs() < 1e-14);
            }
        }
    }
}
