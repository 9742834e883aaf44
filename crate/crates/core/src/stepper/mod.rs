//! Time integration: explicit kinetic step (forward Euler or Heun) followed
//! by the implicit vertical viscosity / friction / wind step.

pub mod explicit;
pub mod reconstruct;

pub use explicit::{apply_tendency, evaluate, explicit_step, heun_step, raw_stable_dt, stable_dt, Tendency};
pub use reconstruct::{limited_reconstruct, minmod, reconstruct, EdgeStates, Reconstruction};

use serde::{Deserialize, Serialize};

use crate::diagnostics::total_energy;
use crate::error::{Error, Result};
use crate::problem::Problem;
use crate::state::SimState;
use crate::viscous::relax_column;

use explicit::{average, ensure_finite};

/// Spatial order of the explicit scheme. Order 2 uses minmod reconstruction
/// together with Heun time stepping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Order {
    #[default]
    First,
    Second,
}

impl Order {
    pub fn reconstruction(self) -> Reconstruction {
        match self {
            Order::First => Reconstruction::PiecewiseConstant,
            Order::Second => Reconstruction::Minmod,
        }
    }

    pub fn as_u8(self) -> u8 {
        match self {
            Order::First => 1,
            Order::Second => 2,
        }
    }
}

impl TryFrom<u8> for Order {
    type Error = String;

    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Order::First),
            2 => Ok(Order::Second),
            _ => Err(format!("order must be 1 or 2, got {v}")),
        }
    }
}

impl From<Order> for u8 {
    fn from(o: Order) -> u8 {
        o.as_u8()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepConfig {
    pub order: Order,
    /// Force Heun stepping at order 1 (it is always used at order 2).
    pub heun: bool,
    pub safety: f64,
    pub max_dt: f64,
    /// Use this step instead of the stability bound (still clamped to output
    /// times and `t_end`).
    pub fixed_dt: Option<f64>,
    pub snapshot_interval: Option<f64>,
    /// Stop once the residual falls below this fraction of the first one.
    pub steady_tolerance: Option<f64>,
    pub max_steps: Option<usize>,
    /// Number of halvings tried when a step would create a negative height.
    pub max_retries: u32,
}

impl Default for StepConfig {
    fn default() -> Self {
        Self {
            order: Order::First,
            heun: false,
            safety: 0.9,
            max_dt: f64::INFINITY,
            fixed_dt: None,
            snapshot_interval: None,
            steady_tolerance: None,
            max_steps: None,
            max_retries: 30,
        }
    }
}

impl StepConfig {
    pub fn uses_heun(&self) -> bool {
        self.heun || self.order == Order::Second
    }
}

/// Per-step record passed to observers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport {
    pub step: usize,
    pub time: f64,
    pub dt: f64,
    pub mass: f64,
    pub energy: f64,
    /// `‖X^{n+1} - X^n‖_∞ / Δt`.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy)]
pub enum Event<'a> {
    Step(&'a StepReport, &'a SimState),
    Snapshot(&'a StepReport, &'a SimState),
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AdvanceSummary {
    pub steps: usize,
    pub retries: usize,
    pub initial_residual: f64,
    pub final_residual: f64,
    pub reached_steady: bool,
}

/// One full step of size at most `dt`: explicit part, then the implicit
/// column solves. Returns the new state and the step actually taken, which
/// is smaller than `dt` when the positivity safeguard had to halve it.
pub fn full_step(problem: &Problem, state: &SimState, dt: f64, config: &StepConfig) -> Result<(SimState, f64, usize)> {
    let mode = config.order.reconstruction();
    let tend = evaluate(problem, state, mode);
    full_step_with(problem, state, &tend, dt, config)
}

fn full_step_with(
    problem: &Problem,
    state: &SimState,
    tend: &Tendency,
    mut dt: f64,
    config: &StepConfig,
) -> Result<(SimState, f64, usize)> {
    let mode = config.order.reconstruction();
    let mut retries = 0;
    let mut next = loop {
        let stage1 = apply_tendency(problem, state, tend, dt);
        ensure_finite(&stage1, state)?;
        let candidate = if config.uses_heun() {
            let tend2 = evaluate(problem, &stage1, mode);
            let stage2 = apply_tendency(problem, &stage1, &tend2, dt);
            ensure_finite(&stage2, state)?;
            average(state, &stage2)
        } else {
            stage1
        };
        if candidate.h.iter().all(|h| *h >= 0.0) {
            break candidate;
        }
        if retries >= config.max_retries as usize {
            return Err(Error::StepCollapse { time: state.time, min_dt: dt });
        }
        retries += 1;
        dt *= 0.5;
    };

    let part = &problem.layers;
    let dry = problem.dry_threshold;
    for i in 0..next.cells() {
        let h = next.h[i];
        if h <= dry {
            next.column_mut(i).fill(0.0);
            continue;
        }
        let u_bottom = state.velocity(i, 0, part, dry);
        relax_column(next.column_mut(i), h, u_bottom, part, &problem.physics, dt)?;
    }
    next.time = state.time + dt;
    ensure_finite(&next, state)?;
    Ok((next, dt, retries))
}

fn residual(a: &SimState, b: &SimState, dt: f64) -> f64 {
    let dh = a.h.iter().zip(&b.h).map(|(x, y)| (x - y).abs());
    let dq = a.q.iter().zip(&b.q).map(|(x, y)| (x - y).abs());
    dh.chain(dq).fold(0.0, f64::max) / dt
}

/// Integrates from `state.time` to `t_end`. The last step is clamped so the
/// final time is exactly `t_end`; with a snapshot interval, steps are also
/// clamped to land on every output time, and `observer` receives a
/// `Snapshot` event there (including the initial state). Stops early when the
/// steady tolerance is met or `max_steps` is reached.
pub fn advance(
    problem: &Problem,
    state: SimState,
    t_end: f64,
    config: &StepConfig,
    mut observer: impl FnMut(Event<'_>),
) -> Result<(SimState, AdvanceSummary)> {
    problem.check_state(&state)?;
    if !state.is_finite() {
        return Err(Error::NonFinite {
            time: state.time,
            detail: "initial state is not finite".into(),
            last_valid: Box::new(state),
        });
    }
    let mut summary = AdvanceSummary::default();
    let report = |s: &SimState, step: usize, dt: f64, res: f64| StepReport {
        step,
        time: s.time,
        dt,
        mass: s.mass(&problem.grid),
        energy: total_energy(problem, s).total,
        residual: res,
    };

    let interval = config.snapshot_interval.filter(|v| *v > 0.0 && v.is_finite());
    let mut next_output = interval.map(|iv| state.time + iv);
    if interval.is_some() {
        observer(Event::Snapshot(&report(&state, 0, 0.0, 0.0), &state));
    }

    let mut state = state;
    let mode = config.order.reconstruction();
    while state.time < t_end {
        if config.max_steps.is_some_and(|m| summary.steps >= m) {
            break;
        }
        let tend = evaluate(problem, &state, mode);
        let mut dt = match config.fixed_dt {
            Some(v) => v,
            None => stable_dt(problem, &state, &tend.exchanges, config.safety, config.max_dt),
        };
        if !dt.is_finite() {
            dt = t_end - state.time;
        }
        let mut hits_output = false;
        if let Some(t_out) = next_output {
            if state.time + dt >= t_out {
                dt = t_out - state.time;
                hits_output = true;
            }
        }
        let mut hits_end = false;
        if state.time + dt >= t_end {
            dt = t_end - state.time;
            hits_end = true;
        }
        if dt <= 0.0 {
            return Err(Error::StepCollapse { time: state.time, min_dt: dt });
        }

        let (mut next, taken, retries) = full_step_with(problem, &state, &tend, dt, config)?;
        summary.retries += retries;
        if retries == 0 {
            if hits_output {
                next.time = next_output.unwrap_or(next.time);
            }
            if hits_end {
                next.time = t_end;
            }
        } else {
            hits_output = false;
        }
        let res = residual(&next, &state, taken);
        summary.steps += 1;
        if summary.steps == 1 {
            summary.initial_residual = res;
        }
        summary.final_residual = res;
        let rep = report(&next, summary.steps, taken, res);
        state = next;
        observer(Event::Step(&rep, &state));

        let steady = config
            .steady_tolerance
            .is_some_and(|tol| res <= tol * summary.initial_residual);
        let done = state.time >= t_end || steady;
        if hits_output || (done && interval.is_some()) {
            observer(Event::Snapshot(&rep, &state));
            if let (Some(iv), Some(t)) = (interval, next_output.as_mut()) {
                while *t <= state.time {
                    *t += iv;
                }
            }
        }
        if steady {
            summary.reached_steady = true;
            break;
        }
    }
    Ok((state, summary))
}
