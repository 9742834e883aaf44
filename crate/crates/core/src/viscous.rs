//! Semi-implicit vertical viscosity, bottom friction and surface wind stress.
//!
//! Per column the new layer velocities solve the symmetric tridiagonal system
//! `T U = q̃` with
//!
//! ```text
//! T(α,α)   = l_α H + (2Δt/H) (ν_α/(l_α+l_{α+1}) + ν_{α-1}/(l_α+l_{α-1})) + Δt κ δ_{α1}
//! T(α,α+1) = T(α+1,α) = -(2Δt/H) ν_α/(l_α+l_{α+1})
//! ```
//!
//! where `ν_0 = ν_N = 0` and `ν_α = ν` on internal interfaces. The wind
//! stress enters the top-layer right side as `Δt τ_w`.

use crate::error::{Error, Result};
use crate::state::{FrictionLaw, LayerPartition, PhysParams};

/// Bottom friction coefficient `κ` (m/s) from the bottom-layer velocity.
pub fn friction_coefficient(u_bottom: f64, h: f64, law: &FrictionLaw, g: f64) -> f64 {
    match *law {
        FrictionLaw::None => 0.0,
        FrictionLaw::Navier { k_l } => k_l,
        FrictionLaw::NavierTurbulent { k_l, k_t } => k_l + k_t * h * u_bottom.abs(),
        FrictionLaw::Strickler { k_s } => {
            if h <= 0.0 {
                0.0
            } else {
                g * u_bottom.abs() / (k_s * k_s * h.cbrt())
            }
        }
    }
}

/// Tridiagonal column system. `lower[α]` couples row `α+1` to column `α`,
/// `upper[α]` couples row `α` to column `α+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnSystem {
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl ColumnSystem {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// `T u`.
    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|a| {
                let mut v = self.diag[a] * u[a];
                if a > 0 {
                    v += self.lower[a - 1] * u[a - 1];
                }
                if a + 1 < n {
                    v += self.upper[a] * u[a + 1];
                }
                v
            })
            .collect()
    }
}

/// Assembles `T` and `q̃` for one wet column with new height `h_new`.
/// `kappa` is the friction coefficient evaluated from the old state.
pub fn build_column(
    h_new: f64,
    q_tilde: &[f64],
    part: &LayerPartition,
    viscosity: f64,
    kappa: f64,
    wind_stress: f64,
    dt: f64,
) -> ColumnSystem {
    let n = part.len();
    let mut diag: Vec<f64> = part.fractions().iter().map(|l| l * h_new).collect();
    let mut off = vec![0.0; n.saturating_sub(1)];
    if viscosity > 0.0 {
        let scale = 2.0 * dt * viscosity / h_new;
        for a in 0..n - 1 {
            let c = scale / (part.get(a) + part.get(a + 1));
            off[a] = -c;
            diag[a] += c;
            diag[a + 1] += c;
        }
    }
    diag[0] += dt * kappa;
    let mut rhs = q_tilde.to_vec();
    rhs[n - 1] += dt * wind_stress;
    ColumnSystem {
        diag,
        upper: off.clone(),
        lower: off,
        rhs,
    }
}

/// Thomas algorithm. The systems built here are strictly diagonally dominant,
/// so no pivoting is needed.
pub fn solve_column(sys: &ColumnSystem) -> Result<Vec<f64>> {
    let n = sys.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut c_prime = vec![0.0; n];
    let mut d_prime = vec![0.0; n];
    let mut denom = sys.diag[0];
    if denom == 0.0 || !denom.is_finite() {
        return Err(Error::Solve("zero pivot in row 0".into()));
    }
    if n > 1 {
        c_prime[0] = sys.upper[0] / denom;
    }
    d_prime[0] = sys.rhs[0] / denom;
    for a in 1..n {
        denom = sys.diag[a] - sys.lower[a - 1] * c_prime[a - 1];
        if denom == 0.0 || !denom.is_finite() {
            return Err(Error::Solve(format!("zero pivot in row {a}")));
        }
        if a + 1 < n {
            c_prime[a] = sys.upper[a] / denom;
        }
        d_prime[a] = (sys.rhs[a] - sys.lower[a - 1] * d_prime[a - 1]) / denom;
    }
    let mut u = d_prime;
    for a in (0..n - 1).rev() {
        u[a] -= c_prime[a] * u[a + 1];
    }
    Ok(u)
}

/// Replaces `q̃` of one column by `l_α H u_α^{n+1}`. `u_bottom_old` is the
/// bottom-layer velocity at the start of the step (friction linearization).
pub fn relax_column(
    q: &mut [f64],
    h_new: f64,
    u_bottom_old: f64,
    part: &LayerPartition,
    phys: &PhysParams,
    dt: f64,
) -> Result<()> {
    let kappa = friction_coefficient(u_bottom_old, h_new, &phys.friction, phys.gravity);
    if phys.viscosity == 0.0 && kappa == 0.0 && phys.wind_stress == 0.0 {
        return Ok(());
    }
    let sys = build_column(h_new, q, part, phys.viscosity, kappa, phys.wind_stress, dt);
    let u = solve_column(&sys)?;
    for (a, slot) in q.iter_mut().enumerate() {
        *slot = part.get(a) * h_new * u[a];
    }
    Ok(())
}
