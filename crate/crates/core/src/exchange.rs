//! Interlayer mass exchange.
//!
//! Summing the layer mass balances `∂_t(l_j H) + ∂_x(h_j u_j) = G_{j+1/2} - G_{j-1/2}`
//! up to layer `α` and eliminating `∂_t H` with the column continuity equation
//! gives the exchange through interface `α + 1/2` explicitly in terms of the
//! discrete mass-flux differences of the cell:
//!
//! ```text
//! Δx_i G_{α+1/2,i} = Σ_{j≤α} ( 𝓕_{h_j,i} - l_j Σ_p 𝓕_{h_p,i} )
//! ```
//!
//! `G_{1/2}` and `G_{N+1/2}` vanish (no flux through bed or free surface) and
//! are not stored: a column of `N` layers has `N - 1` exchange rates.

use crate::state::LayerPartition;

/// Exchange rates and upwinded interface velocities for every cell,
/// `N - 1` values per cell, interface `α + 1/2` at offset `α - 1`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExchangeSet {
    pub layers: usize,
    pub rates: Vec<f64>,
    pub velocities: Vec<f64>,
}

impl ExchangeSet {
    pub fn zeros(cells: usize, layers: usize) -> Self {
        let m = layers.saturating_sub(1) * cells;
        Self {
            layers,
            rates: vec![0.0; m],
            velocities: vec![0.0; m],
        }
    }

    fn stride(&self) -> usize {
        self.layers.saturating_sub(1)
    }

    pub fn column_rates(&self, i: usize) -> &[f64] {
        let s = self.stride();
        &self.rates[i * s..(i + 1) * s]
    }

    pub fn column_velocities(&self, i: usize) -> &[f64] {
        let s = self.stride();
        &self.velocities[i * s..(i + 1) * s]
    }

    /// `G_{α+1/2,i}` for `α = 0..=N`, including the vanishing bed and
    /// surface values.
    pub fn rate(&self, i: usize, alpha: usize) -> f64 {
        if alpha == 0 || alpha >= self.layers {
            0.0
        } else {
            self.column_rates(i)[alpha - 1]
        }
    }
}

/// Exchange rates of one column from its mass-flux differences `𝓕_{h_α,i}`.
/// Writes `N - 1` values into `rates`.
pub fn column_exchanges(flux_diff: &[f64], dx: f64, part: &LayerPartition, rates: &mut [f64]) {
    let n = part.len();
    let total: f64 = flux_diff.iter().sum();
    let mut acc = 0.0;
    for a in 0..n.saturating_sub(1) {
        acc += flux_diff[a] - part.get(a) * total;
        rates[a] = acc / dx;
    }
}

/// The `α = N` row of the exchange formula. Vanishes up to rounding, which
/// is what makes the definition compatible with `G_{N+1/2} = 0`.
pub fn surface_exchange_residual(flux_diff: &[f64], part: &LayerPartition) -> f64 {
    let total: f64 = flux_diff.iter().sum();
    flux_diff
        .iter()
        .zip(part.fractions())
        .map(|(f, l)| f - l * total)
        .sum()
}

/// Exchange rates for all cells; `flux_diff` is cell-major with `N` entries
/// per cell.
pub fn compute_exchanges(flux_diff: &[f64], dx: &[f64], part: &LayerPartition) -> Vec<f64> {
    let n = part.len();
    let m = n.saturating_sub(1);
    let mut rates = vec![0.0; dx.len() * m];
    for (i, dxi) in dx.iter().enumerate() {
        column_exchanges(
            &flux_diff[i * n..(i + 1) * n],
            *dxi,
            part,
            &mut rates[i * m..(i + 1) * m],
        );
    }
    rates
}

/// Upwinded interface velocity: the upper layer's velocity when mass moves
/// up or not at all (`G ≥ 0`), the lower layer's otherwise.
#[inline]
pub fn interface_velocity(u_below: f64, u_above: f64, rate: f64) -> f64 {
    if rate >= 0.0 {
        u_above
    } else {
        u_below
    }
}

/// Interface velocities for one column given its layer velocities.
pub fn column_interface_velocities(u: &[f64], rates: &[f64], out: &mut [f64]) {
    for (a, (slot, g)) in out.iter_mut().zip(rates).enumerate() {
        *slot = interface_velocity(u[a], u[a + 1], *g);
    }
}

/// Momentum exchange `u_{α+1/2}G_{α+1/2} - u_{α-1/2}G_{α-1/2}` per layer.
pub fn momentum_exchange(rates: &[f64], velocities: &[f64], out: &mut [f64]) {
    let n = out.len();
    let mut below = 0.0;
    for a in 0..n {
        let above = if a + 1 < n {
            velocities[a] * rates[a]
        } else {
            0.0
        };
        out[a] = above - below;
        below = above;
    }
}
