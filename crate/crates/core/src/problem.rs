use crate::boundary::BoundaryCondition;
use crate::error::{Error, Result};
use crate::state::{Bathymetry, Grid1D, LayerPartition, PhysParams, SimState, DEFAULT_DRY_THRESHOLD};

/// Everything that stays fixed during a run.
#[derive(Debug, Clone)]
pub struct Problem {
    pub grid: Grid1D,
    pub layers: LayerPartition,
    pub bathymetry: Bathymetry,
    pub physics: PhysParams,
    pub left: BoundaryCondition,
    pub right: BoundaryCondition,
    pub dry_threshold: f64,
}

impl Problem {
    pub fn new(
        grid: Grid1D,
        layers: LayerPartition,
        bathymetry: Bathymetry,
        physics: PhysParams,
        left: BoundaryCondition,
        right: BoundaryCondition,
    ) -> Result<Self> {
        if bathymetry.len() != grid.len() {
            return Err(Error::Dimension {
                what: "bathymetry cells",
                expected: grid.len(),
                got: bathymetry.len(),
            });
        }
        let mut errs = physics.validate();
        errs.extend(left.validate("left"));
        errs.extend(right.validate("right"));
        if (left == BoundaryCondition::Periodic) != (right == BoundaryCondition::Periodic) {
            errs.push("periodic boundaries must be set on both ends".into());
        }
        if !errs.is_empty() {
            return Err(Error::Validation(errs));
        }
        Ok(Self {
            grid,
            layers,
            bathymetry,
            physics,
            left,
            right,
            dry_threshold: DEFAULT_DRY_THRESHOLD,
        })
    }

    pub fn cells(&self) -> usize {
        self.grid.len()
    }

    pub fn n_layers(&self) -> usize {
        self.layers.len()
    }

    pub fn gravity(&self) -> f64 {
        self.physics.gravity
    }

    pub fn check_state(&self, state: &SimState) -> Result<()> {
        state.check_against(&self.grid, &self.layers)
    }

    /// Lake at rest with free surface `level` (dry where the bed is above it).
    pub fn lake_at_rest(&self, level: f64) -> SimState {
        let h: Vec<f64> = self
            .bathymetry
            .elevations()
            .iter()
            .map(|z| (level - z).max(0.0))
            .collect();
        SimState::uniform_velocity(h, 0.0, &self.layers)
    }
}
