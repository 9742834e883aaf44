//! Interface states: piecewise constant, or minmod-limited linear on
//! `(H + z_b, H, u_α)` with the bed edge value recovered as `η - H`.

use crate::boundary::{apply_boundary, BoundaryCondition};
use crate::problem::Problem;
use crate::state::SimState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Reconstruction {
    #[default]
    PiecewiseConstant,
    Minmod,
}

#[inline]
pub fn minmod(a: f64, b: f64) -> f64 {
    if a > 0.0 && b > 0.0 {
        a.min(b)
    } else if a < 0.0 && b < 0.0 {
        a.max(b)
    } else {
        0.0
    }
}

/// Values on both sides of each of the `I + 1` interfaces. Interface `j`
/// separates cells `j - 1` and `j`; `left_*` belongs to cell `j - 1` (its
/// right edge) and `right_*` to cell `j` (its left edge). Indices `-1` and
/// `I` denote the ghost cells.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeStates {
    pub layers: usize,
    pub left_h: Vec<f64>,
    pub left_z: Vec<f64>,
    pub left_eta: Vec<f64>,
    pub left_u: Vec<f64>,
    pub right_h: Vec<f64>,
    pub right_z: Vec<f64>,
    pub right_eta: Vec<f64>,
    pub right_u: Vec<f64>,
}

impl EdgeStates {
    pub fn interfaces(&self) -> usize {
        self.left_h.len()
    }

    pub fn left_velocities(&self, j: usize) -> &[f64] {
        &self.left_u[j * self.layers..(j + 1) * self.layers]
    }

    pub fn right_velocities(&self, j: usize) -> &[f64] {
        &self.right_u[j * self.layers..(j + 1) * self.layers]
    }
}

/// Cell data padded with one ghost cell on each side. Dry cells carry
/// `h = 0` and zero velocities.
pub(crate) struct Extended {
    pub h: Vec<f64>,
    pub z: Vec<f64>,
    pub u: Vec<f64>,
    pub x: Vec<f64>,
    pub dx: Vec<f64>,
    pub layers: usize,
}

impl Extended {
    pub fn build(problem: &Problem, state: &SimState) -> Self {
        let dry = problem.dry_threshold;
        let part = &problem.layers;
        let n = part.len();
        let cells = state.cells();
        let grid = &problem.grid;
        let (gl, gr) = apply_boundary(state, &problem.bathymetry, part, dry, &problem.left, &problem.right);

        let mut h = Vec::with_capacity(cells + 2);
        let mut z = Vec::with_capacity(cells + 2);
        let mut u = Vec::with_capacity((cells + 2) * n);
        let mut x = Vec::with_capacity(cells + 2);
        let mut dx = Vec::with_capacity(cells + 2);

        let wet = |hv: f64| if hv > dry { hv } else { 0.0 };
        let push_ghost = |g: &crate::boundary::GhostCell, h: &mut Vec<f64>, u: &mut Vec<f64>| {
            let hv = wet(g.h);
            h.push(hv);
            if hv > 0.0 {
                u.extend_from_slice(&g.u);
            } else {
                u.extend(std::iter::repeat_n(0.0, n));
            }
        };

        push_ghost(&gl, &mut h, &mut u);
        z.push(gl.z_b);
        x.push(grid.x(0) - grid.dx(0));
        dx.push(grid.dx(0));
        for i in 0..cells {
            let hv = wet(state.h[i]);
            h.push(hv);
            z.push(problem.bathymetry.elevations()[i]);
            for a in 0..n {
                u.push(if hv > 0.0 { state.q[i * n + a] / (part.get(a) * hv) } else { 0.0 });
            }
            x.push(grid.x(i));
            dx.push(grid.dx(i));
        }
        push_ghost(&gr, &mut h, &mut u);
        z.push(gr.z_b);
        x.push(grid.x(cells - 1) + grid.dx(cells - 1));
        dx.push(grid.dx(cells - 1));

        Self { h, z, u, x, dx, layers: n }
    }

    fn len(&self) -> usize {
        self.h.len()
    }
}

pub(crate) fn reconstruct_extended(ext: &Extended, mode: Reconstruction) -> EdgeStates {
    let n = ext.layers;
    let m = ext.len() - 1; // interfaces
    let mut e = EdgeStates {
        layers: n,
        left_h: vec![0.0; m],
        left_z: vec![0.0; m],
        left_eta: vec![0.0; m],
        left_u: vec![0.0; m * n],
        right_h: vec![0.0; m],
        right_z: vec![0.0; m],
        right_eta: vec![0.0; m],
        right_u: vec![0.0; m * n],
    };
    for k in 0..ext.len() {
        // cell k owns the right side of interface k-1 and the left side of interface k
        let limited = mode == Reconstruction::Minmod
            && k > 0
            && k + 1 < ext.len()
            && ext.h[k] > 0.0
            && ext.h[k - 1] > 0.0
            && ext.h[k + 1] > 0.0;
        let (s_eta, s_h) = if limited {
            let dl = ext.x[k] - ext.x[k - 1];
            let dr = ext.x[k + 1] - ext.x[k];
            let eta = |i: usize| ext.h[i] + ext.z[i];
            (
                minmod((eta(k) - eta(k - 1)) / dl, (eta(k + 1) - eta(k)) / dr),
                minmod((ext.h[k] - ext.h[k - 1]) / dl, (ext.h[k + 1] - ext.h[k]) / dr),
            )
        } else {
            (0.0, 0.0)
        };
        let half = 0.5 * ext.dx[k];
        let eta = ext.h[k] + ext.z[k];
        let (h_lo, h_hi) = if s_h == 0.0 {
            (ext.h[k], ext.h[k])
        } else {
            ((ext.h[k] - s_h * half).max(0.0), (ext.h[k] + s_h * half).max(0.0))
        };
        let (eta_lo, eta_hi) = (eta - s_eta * half, eta + s_eta * half);
        let (z_lo, z_hi) = if s_h == 0.0 && s_eta == 0.0 {
            (ext.z[k], ext.z[k])
        } else {
            (eta_lo - h_lo, eta_hi - h_hi)
        };
        if k > 0 {
            e.right_h[k - 1] = h_lo;
            e.right_z[k - 1] = z_lo;
            e.right_eta[k - 1] = eta_lo;
        }
        if k < m {
            e.left_h[k] = h_hi;
            e.left_z[k] = z_hi;
            e.left_eta[k] = eta_hi;
        }
        for a in 0..n {
            let uc = ext.u[k * n + a];
            let s_u = if limited {
                let dl = ext.x[k] - ext.x[k - 1];
                let dr = ext.x[k + 1] - ext.x[k];
                minmod(
                    (uc - ext.u[(k - 1) * n + a]) / dl,
                    (ext.u[(k + 1) * n + a] - uc) / dr,
                )
            } else {
                0.0
            };
            if k > 0 {
                e.right_u[(k - 1) * n + a] = uc - s_u * half;
            }
            if k < m {
                e.left_u[k * n + a] = uc + s_u * half;
            }
        }
    }
    e
}

/// Interface states for `state` with the given reconstruction.
pub fn reconstruct(problem: &Problem, state: &SimState, mode: Reconstruction) -> EdgeStates {
    let mut e = reconstruct_extended(&Extended::build(problem, state), mode);
    if problem.left == BoundaryCondition::Periodic && mode != Reconstruction::PiecewiseConstant {
        // the ghost cells are copies of the opposite end cells, edges included
        let (first, last) = (0, e.interfaces() - 1);
        let n = e.layers;
        e.left_h[first] = e.left_h[last];
        e.left_z[first] = e.left_z[last];
        e.left_eta[first] = e.left_eta[last];
        e.right_h[last] = e.right_h[first];
        e.right_z[last] = e.right_z[first];
        e.right_eta[last] = e.right_eta[first];
        for a in 0..n {
            e.left_u[first * n + a] = e.left_u[last * n + a];
            e.right_u[last * n + a] = e.right_u[first * n + a];
        }
    }
    if mode != Reconstruction::PiecewiseConstant {
        // a wall sees the mirror image of the reconstructed edge, not the ghost average
        let n = e.layers;
        if problem.left == BoundaryCondition::Wall {
            e.left_h[0] = e.right_h[0];
            e.left_z[0] = e.right_z[0];
            e.left_eta[0] = e.right_eta[0];
            for a in 0..n {
                e.left_u[a] = -e.right_u[a];
            }
        }
        if problem.right == BoundaryCondition::Wall {
            let last = e.interfaces() - 1;
            e.right_h[last] = e.left_h[last];
            e.right_z[last] = e.left_z[last];
            e.right_eta[last] = e.left_eta[last];
            for a in 0..n {
                e.right_u[last * n + a] = -e.left_u[last * n + a];
            }
        }
    }
    e
}

/// Minmod-limited interface states.
pub fn limited_reconstruct(problem: &Problem, state: &SimState) -> EdgeStates {
    reconstruct(problem, state, Reconstruction::Minmod)
}
