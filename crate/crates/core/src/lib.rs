//! Multilayer Saint-Venant system with interlayer mass exchange in one
//! horizontal dimension.
//!
//! The water column is split into `N` layers with fixed fractions `l_α` of
//! the total height `H`. Layers share one free surface and exchange mass
//! through their interfaces. The discretization is a kinetic finite-volume
//! scheme on hydrostatically reconstructed states (well-balanced and
//! positivity preserving under [`stepper::stable_dt`]), followed by a
//! semi-implicit vertical viscosity / friction solve.
//!
//! ```
//! use mlsw_core::{scenario::parse_scenario, stepper::advance};
//!
//! let sc = parse_scenario(r#"
//!     [grid]
//!     x_min = 0.0
//!     x_max = 1.0
//!     cells = 20
//!     [layers]
//!     count = 3
//!     [boundary]
//!     left = { type = "wall" }
//!     right = { type = "wall" }
//!     [initial]
//!     kind = "dam-break"
//!     position = 0.5
//!     left = 1.0
//!     right = 0.5
//!     [time]
//!     t_end = 0.05
//! "#).unwrap();
//! let problem = sc.problem().unwrap();
//! let state = sc.initial_state(&problem).unwrap();
//! let (end, _) = advance(&problem, state, sc.time.t_end, &sc.step_config(), |_| {}).unwrap();
//! assert_eq!(end.time, 0.05);
//! ```

pub mod boundary;
pub mod diagnostics;
pub mod error;
pub mod exchange;
pub mod kinetic;
pub mod presets;
pub mod problem;
pub mod scenario;
pub mod snapshot;
pub mod state;
pub mod stepper;
pub mod viscous;
pub mod wellbalance;

pub use boundary::BoundaryCondition;
pub use error::{Error, Result};
pub use problem::Problem;
pub use scenario::{parse_scenario, Scenario};
pub use state::{Bathymetry, FrictionLaw, Grid1D, LayerPartition, PhysParams, SimState};
pub use stepper::{advance, Order, StepConfig};
