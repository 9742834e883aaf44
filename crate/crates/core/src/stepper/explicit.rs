//! Explicit part of one step: kinetic fluxes on hydrostatically
//! reconstructed interface states, topography source and interlayer mass
//! and momentum exchange.

use crate::error::{Error, Result};
use crate::exchange::{column_exchanges, column_interface_velocities, momentum_exchange, ExchangeSet};
use crate::kinetic::{layer_flux_split, sound_speed, SUPPORT_RADIUS};
use crate::problem::Problem;
use crate::state::SimState;
use crate::wellbalance::{layer_pressure, reconstruct_interface_heights};

use super::reconstruct::{reconstruct, EdgeStates, Reconstruction};

/// Right-hand side of the explicit update, cell-major with `N` values per
/// cell for the layer quantities.
///
/// `H̃ = H - Δt/Δx · mass_flux_diff` and
/// `q̃ = q - Δt/Δx · momentum_flux_diff + Δt · momentum_exchange`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tendency {
    pub layers: usize,
    /// `F_{H,i+1/2} - F_{H,i-1/2}` per cell.
    pub mass_flux_diff: Vec<f64>,
    /// `𝓕_{h_α,i}`: layer mass-flux differences.
    pub layer_flux_diff: Vec<f64>,
    /// Layer momentum-flux differences with the topography source removed.
    pub momentum_flux_diff: Vec<f64>,
    /// `u_{α+1/2}G_{α+1/2} - u_{α-1/2}G_{α-1/2}`.
    pub momentum_exchange: Vec<f64>,
    pub exchanges: ExchangeSet,
}

/// Evaluates the explicit operator for `state`.
pub fn evaluate(problem: &Problem, state: &SimState, mode: Reconstruction) -> Tendency {
    let edges = reconstruct(problem, state, mode);
    evaluate_from_edges(problem, state, &edges)
}

pub(crate) fn evaluate_from_edges(problem: &Problem, state: &SimState, edges: &EdgeStates) -> Tendency {
    let part = &problem.layers;
    let g = problem.gravity();
    let n = part.len();
    let cells = state.cells();
    let faces = edges.interfaces();
    debug_assert_eq!(faces, cells + 1);

    // interface fluxes, and the momentum flux seen from each side with the
    // hydrostatic pressure of that side's reconstructed height removed
    let mut face_mass = vec![0.0; faces * n];
    let mut face_total = vec![0.0; faces];
    let mut from_left = vec![0.0; faces * n];
    let mut from_right = vec![0.0; faces * n];
    for j in 0..faces {
        let (hl, hr) = face_heights(edges, j);
        let cl = sound_speed(hl, g);
        let cr = sound_speed(hr, g);
        let ul = edges.left_velocities(j);
        let ur = edges.right_velocities(j);
        let mut total = 0.0;
        for a in 0..n {
            let l = part.get(a);
            let (p, _) = layer_flux_split(l * hl, ul[a], cl);
            let (_, m) = layer_flux_split(l * hr, ur[a], cr);
            let f = p + m;
            face_mass[j * n + a] = f.mass;
            total += f.mass;
            from_left[j * n + a] = f.momentum - layer_pressure(l, hl, g);
            from_right[j * n + a] = f.momentum - layer_pressure(l, hr, g);
        }
        face_total[j] = total;
    }

    let mut mass_flux_diff = vec![0.0; cells];
    let mut layer_flux_diff = vec![0.0; cells * n];
    let mut momentum_flux_diff = vec![0.0; cells * n];
    let mut momentum_ex = vec![0.0; cells * n];
    let mut exchanges = ExchangeSet::zeros(cells, n);
    let m = n - 1;
    let mut u_col = vec![0.0; n];
    for i in 0..cells {
        mass_flux_diff[i] = face_total[i + 1] - face_total[i];
        // edge states of cell i: left edge is the right side of face i
        let h_le = edges.right_h[i];
        let h_re = edges.left_h[i + 1];
        let dz = edges.left_z[i + 1] - edges.right_z[i];
        let linear = h_le != h_re || dz != 0.0;
        for a in 0..n {
            let k = i * n + a;
            layer_flux_diff[k] = face_mass[(i + 1) * n + a] - face_mass[i * n + a];
            let mut d = from_left[(i + 1) * n + a] - from_right[i * n + a];
            if linear {
                let l = part.get(a);
                d += layer_pressure(l, h_re, g) - layer_pressure(l, h_le, g);
                d += g * l * 0.5 * (h_le + h_re) * dz;
            }
            momentum_flux_diff[k] = d;
        }
        if m > 0 {
            let dx = problem.grid.dx(i);
            let rates = &mut exchanges.rates[i * m..(i + 1) * m];
            column_exchanges(&layer_flux_diff[i * n..(i + 1) * n], dx, part, rates);
            for (a, slot) in u_col.iter_mut().enumerate() {
                *slot = state.velocity(i, a, part, problem.dry_threshold);
            }
            let vel = &mut exchanges.velocities[i * m..(i + 1) * m];
            column_interface_velocities(&u_col, rates, vel);
            momentum_exchange(rates, vel, &mut momentum_ex[i * n..(i + 1) * n]);
        }
    }

    Tendency {
        layers: n,
        mass_flux_diff,
        layer_flux_diff,
        momentum_flux_diff,
        momentum_exchange: momentum_ex,
        exchanges,
    }
}

/// Hydrostatically reconstructed heights on both sides of face `j`, taken
/// from the free-surface edge values so that a flat surface gives equal
/// sides bitwise.
fn face_heights(edges: &EdgeStates, j: usize) -> (f64, f64) {
    let (hl, hr) = (edges.left_h[j], edges.right_h[j]);
    if hl == 0.0 || hr == 0.0 {
        return reconstruct_interface_heights(hl, hr, edges.left_z[j], edges.right_z[j]);
    }
    let z_face = edges.left_z[j].max(edges.right_z[j]);
    let lower = |h: f64, z: f64, eta: f64| if z == z_face { h } else { (eta - z_face).max(0.0) };
    (
        lower(hl, edges.left_z[j], edges.left_eta[j]),
        lower(hr, edges.right_z[j], edges.right_eta[j]),
    )
}

/// `X + Δt · E(X)` for a precomputed tendency. The result keeps the input time.
pub fn apply_tendency(problem: &Problem, state: &SimState, tend: &Tendency, dt: f64) -> SimState {
    let n = state.layers;
    let mut next = state.clone();
    for i in 0..state.cells() {
        let sigma = dt / problem.grid.dx(i);
        next.h[i] = state.h[i] - sigma * tend.mass_flux_diff[i];
        for a in 0..n {
            let k = i * n + a;
            next.q[k] = state.q[k] - sigma * tend.momentum_flux_diff[k] + dt * tend.momentum_exchange[k];
        }
    }
    next
}

/// One forward-Euler step of the explicit operator (no viscous part).
pub fn explicit_step(problem: &Problem, state: &SimState, dt: f64, mode: Reconstruction) -> Result<SimState> {
    problem.check_state(state)?;
    let tend = evaluate(problem, state, mode);
    let mut next = apply_tendency(problem, state, &tend, dt);
    next.time = state.time + dt;
    ensure_finite(&next, state)?;
    Ok(next)
}

pub(crate) fn ensure_finite(next: &SimState, prev: &SimState) -> Result<()> {
    if let Some(i) = next.h.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            time: prev.time,
            detail: format!("height in cell {i} is {}", next.h[i]),
            last_valid: Box::new(prev.clone()),
        });
    }
    if let Some(k) = next.q.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            time: prev.time,
            detail: format!("discharge of layer {} in cell {} is {}", k % next.layers + 1, k / next.layers, next.q[k]),
            last_valid: Box::new(prev.clone()),
        });
    }
    Ok(())
}

/// Largest stable time step for `state` given the exchanges of the current
/// operator evaluation, before the safety factor:
///
/// `min_{i,α} l_α H_i Δx_i / (l_α H_i (|u_α,i| + w_M c_i) + Δx_i ([G_{α+1/2,i}]₋ + [G_{α-1/2,i}]₊))`
///
/// over wet cells. Returns `f64::INFINITY` for an entirely dry domain.
pub fn raw_stable_dt(problem: &Problem, state: &SimState, exchanges: &ExchangeSet) -> f64 {
    let part = &problem.layers;
    let g = problem.gravity();
    let n = part.len();
    let mut best = f64::INFINITY;
    for i in 0..state.cells() {
        let h = state.h[i];
        if h <= problem.dry_threshold {
            continue;
        }
        let dx = problem.grid.dx(i);
        let speed = SUPPORT_RADIUS * sound_speed(h, g);
        for a in 0..n {
            let lh = part.get(a) * h;
            let u = state.q[i * n + a] / lh;
            let above = exchanges.rate(i, a + 1);
            let below = exchanges.rate(i, a);
            let denom = lh * (u.abs() + speed) + dx * ((-above).max(0.0) + below.max(0.0));
            if denom > 0.0 {
                best = best.min(lh * dx / denom);
            }
        }
    }
    best
}

/// `safety · raw_stable_dt`, capped by `max_dt`.
pub fn stable_dt(problem: &Problem, state: &SimState, exchanges: &ExchangeSet, safety: f64, max_dt: f64) -> f64 {
    (safety * raw_stable_dt(problem, state, exchanges)).min(max_dt)
}

/// Heun average `(X + E(E(X)))/2` of two explicit stages; exchanges are
/// recomputed for the second stage.
pub fn heun_step(problem: &Problem, state: &SimState, dt: f64, mode: Reconstruction) -> Result<SimState> {
    let stage1 = explicit_step(problem, state, dt, mode)?;
    let stage2 = explicit_step(problem, &stage1, dt, mode)?;
    let mut out = average(state, &stage2);
    out.time = state.time + dt;
    Ok(out)
}

pub(crate) fn average(a: &SimState, b: &SimState) -> SimState {
    let mut out = a.clone();
    for (o, v) in out.h.iter_mut().zip(&b.h) {
        *o = 0.5 * (*o + v);
    }
    for (o, v) in out.q.iter_mut().zip(&b.q) {
        *o = 0.5 * (*o + v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::BoundaryCondition;
    use crate::state::{Bathymetry, Grid1D, LayerPartition, PhysParams};

    fn problem(z: Vec<f64>, layers: usize, bc: BoundaryCondition) -> Problem {
        let cells = z.len();
        Problem::new(
            Grid1D::uniform(0.0, 1.0, cells).unwrap(),
            LayerPartition::uniform(layers).unwrap(),
            Bathymetry::new(z).unwrap(),
            PhysParams::inviscid(9.81),
            bc,
            bc,
        )
        .unwrap()
    }

    #[test]
    fn lake_at_rest_is_exact() {
        let z: Vec<f64> = (0..20).map(|i| 0.3 * ((i as f64) * 0.7).sin().abs()).collect();
        let p = problem(z, 3, BoundaryCondition::Wall);
        let s = p.lake_at_rest(1.0);
        let t = evaluate(&p, &s, Reconstruction::PiecewiseConstant);
        assert!(t.mass_flux_diff.iter().all(|v| *v == 0.0));
        assert!(t.momentum_flux_diff.iter().all(|v| *v == 0.0), "{:?}", t.momentum_flux_diff);
        assert!(t.exchanges.rates.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn periodic_mass_is_conserved() {
        let p = problem(vec![0.0; 16], 2, BoundaryCondition::Periodic);
        let h: Vec<f64> = (0..16).map(|i| 1.0 + 0.3 * (i as f64 * 0.4).sin()).collect();
        let u: Vec<f64> = (0..32).map(|k| 0.2 * (k as f64 * 0.9).cos()).collect();
        let s = SimState::from_velocities(h, &u, &p.layers).unwrap();
        let t = evaluate(&p, &s, Reconstruction::Minmod);
        let total: f64 = t.mass_flux_diff.iter().sum();
        assert!(total.abs() < 1e-14);
        for i in 0..16 {
            let col: f64 = t.layer_flux_diff[2 * i..2 * i + 2].iter().sum();
            assert!((col - t.mass_flux_diff[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn walls_carry_no_mass_flux_at_second_order() {
        let z: Vec<f64> = (0..16).map(|i| 0.1 * (i as f64 * 0.3).sin()).collect();
        let p = problem(z, 3, BoundaryCondition::Wall);
        let h: Vec<f64> = (0..16).map(|i| 1.0 + 0.3 * (i as f64 * 0.4).cos()).collect();
        let u: Vec<f64> = (0..48).map(|k| 0.4 * (k as f64 * 0.7).sin()).collect();
        let s = SimState::from_velocities(h, &u, &p.layers).unwrap();
        let t = evaluate(&p, &s, Reconstruction::Minmod);
        let total: f64 = t.mass_flux_diff.iter().sum();
        assert!(total.abs() < 1e-14, "{total}");
    }

    #[test]
    fn stable_dt_formula_at_rest() {
        // one wet cell at rest, no exchange: dt = Δx / (w_M c)
        let p = problem(vec![0.0; 4], 1, BoundaryCondition::Wall);
        let s = SimState::uniform_velocity(vec![2.0; 4], 0.0, &p.layers);
        let ex = ExchangeSet::zeros(4, 1);
        let c = sound_speed(2.0, 9.81);
        let want = 0.25 / (SUPPORT_RADIUS * c);
        assert!((raw_stable_dt(&p, &s, &ex) - want).abs() < 1e-15);
        assert_eq!(stable_dt(&p, &s, &ex, 0.5, 1e-6), 1e-6);
    }

    #[test]
    fn dry_domain_has_no_limit() {
        let p = problem(vec![0.0; 3], 1, BoundaryCondition::Wall);
        let s = SimState::uniform_velocity(vec![0.0; 3], 0.0, &p.layers);
        assert_eq!(raw_stable_dt(&p, &s, &ExchangeSet::zeros(3, 1)), f64::INFINITY);
    }
}
