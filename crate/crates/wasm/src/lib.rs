//! Browser bindings: a stepping simulation, the kinetic half-moments and the
//! two-layer eigenvalues. See `www/index.html`.

use mlsw_core::diagnostics::{total_energy, two_layer_charpoly};
use mlsw_core::kinetic::{half_moments, sound_speed};
use mlsw_core::presets;
use mlsw_core::scenario::parse_scenario;
use mlsw_core::stepper::{evaluate, full_step, stable_dt};
use mlsw_core::{Order, Problem, Scenario, SimState, StepConfig};
use wasm_bindgen::prelude::*;

fn js_err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub struct Simulation {
    problem: Problem,
    state: SimState,
    config: StepConfig,
    t_end: f64,
}

impl Simulation {
    fn from_scenario(sc: Scenario) -> Result<Simulation, String> {
        let problem = sc.problem().map_err(|e| e.to_string())?;
        let state = sc.initial_state(&problem).map_err(|e| e.to_string())?;
        Ok(Simulation {
            config: sc.step_config(),
            t_end: sc.time.t_end,
            problem,
            state,
        })
    }
}

#[wasm_bindgen]
impl Simulation {
    /// Built-in scenario by name with the given resolution.
    #[wasm_bindgen(js_name = fromPreset)]
    pub fn from_preset(name: &str, cells: usize, layers: usize, order: u8) -> Result<Simulation, JsError> {
        let mut sc = match name {
            "lake-at-rest" => presets::lake_at_rest(cells, layers),
            "transcritical" => presets::transcritical(cells, layers, false),
            "transcritical-friction" => presets::transcritical(cells, layers, true),
            "wind-basin" => presets::wind_basin(cells, layers),
            "dam-break-dry" => presets::dam_break_dry(cells, layers),
            other => return Err(JsError::new(&format!("unknown preset `{other}`"))),
        };
        sc.time.order = Order::try_from(order).map_err(|_| JsError::new("order must be 1 or 2"))?;
        Self::from_scenario(sc).map_err(js_err)
    }

    /// Scenario from TOML text.
    #[wasm_bindgen(js_name = fromToml)]
    pub fn from_toml(text: &str) -> Result<Simulation, JsError> {
        let sc = parse_scenario(text).map_err(js_err)?;
        Self::from_scenario(sc).map_err(js_err)
    }

    /// Takes up to `steps` steps without passing the scenario's end time.
    /// Returns the number of steps taken.
    pub fn advance(&mut self, steps: usize) -> Result<usize, JsError> {
        let mut taken = 0;
        while taken < steps && self.state.time < self.t_end {
            let tend = evaluate(&self.problem, &self.state, self.config.order.reconstruction());
            let dt = stable_dt(&self.problem, &self.state, &tend.exchanges, self.config.safety, self.config.max_dt)
                .min(self.t_end - self.state.time);
            let (next, _, _) = full_step(&self.problem, &self.state, dt, &self.config).map_err(js_err)?;
            self.state = next;
            taken += 1;
        }
        Ok(taken)
    }

    pub fn time(&self) -> f64 {
        self.state.time
    }

    #[wasm_bindgen(js_name = endTime)]
    pub fn end_time(&self) -> f64 {
        self.t_end
    }

    pub fn layers(&self) -> usize {
        self.problem.n_layers()
    }

    pub fn x(&self) -> Vec<f64> {
        self.problem.grid.centers().to_vec()
    }

    pub fn bed(&self) -> Vec<f64> {
        self.problem.bathymetry.elevations().to_vec()
    }

    pub fn heights(&self) -> Vec<f64> {
        self.state.h.clone()
    }

    /// Velocities, cell-major (`N` values per cell).
    pub fn velocities(&self) -> Vec<f64> {
        self.state.velocities(&self.problem.layers, self.problem.dry_threshold)
    }

    pub fn mass(&self) -> f64 {
        self.state.mass(&self.problem.grid)
    }

    pub fn energy(&self) -> f64 {
        total_energy(&self.problem, &self.state).total
    }
}

/// `[m0⁺, m1⁺, m2⁺, m0⁻, m1⁻, m2⁻]` of the kinetic density for height `h`,
/// velocity `u` and gravity `g`.
#[wasm_bindgen]
pub fn kinetic_half_moments(h: f64, u: f64, g: f64) -> Vec<f64> {
    let (p, m) = half_moments(u, sound_speed(h, g));
    vec![p.m0, p.m1, p.m2, m.m0, m.m1, m.m2]
}

/// Sorted roots of the two-layer characteristic polynomial; the interface
/// velocity is `u_interface`.
#[wasm_bindgen]
pub fn two_layer_eigenvalues(h: f64, u1: f64, u2: f64, l: f64, u_interface: f64, g: f64) -> Result<Vec<f64>, JsError> {
    two_layer_charpoly(h, u1, u2, l, u_interface, g)
        .map(|r| r.roots.to_vec())
        .map_err(js_err)
}
