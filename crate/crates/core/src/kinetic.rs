//! Kinetic fluxes: half-line moments of the Gibbs equilibrium
//! `M_α(ξ) = (l_α H / c) χ((ξ - u_α) / c)` with `c² = gH/2`.
//!
//! The density `χ` is the normalized indicator
//! `χ(w) = 1/(2√3) · 1_{|w| ≤ √3}`, which is even, non-negative and has
//! unit zeroth and second moments. In particle-velocity space the
//! equilibrium is uniform on `[u - √3 c, u + √3 c]`, so every half-line
//! moment is a difference of powers of the clipped support bounds.

use crate::state::LayerPartition;

/// A compactly supported kinetic density with closed-form half-line moments.
pub trait KineticDensity {
    /// Half-width `w_M` of the support of `χ`.
    fn support_radius(&self) -> f64;

    /// `χ(w)`.
    fn density(&self, w: f64) -> f64;

    /// Moments `∫ ξ^k (1/c) χ((ξ - u)/c) dξ`, `k = 0, 1, 2`, over `ξ ≥ 0`
    /// (first) and `ξ ≤ 0` (second).
    fn half_moments(&self, u: f64, c: f64) -> (HalfMoments, HalfMoments);
}

/// The normalized indicator density.
#[derive(Debug, Clone, Copy, Default)]
pub struct IndicatorChi;

/// `√3`, the support radius of [`IndicatorChi`].
pub const SUPPORT_RADIUS: f64 = 1.732_050_807_568_877_2;

const INDICATOR_HEIGHT: f64 = 0.5 / SUPPORT_RADIUS;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HalfMoments {
    pub m0: f64,
    pub m1: f64,
    pub m2: f64,
}

impl KineticDensity for IndicatorChi {
    fn support_radius(&self) -> f64 {
        SUPPORT_RADIUS
    }

    fn density(&self, w: f64) -> f64 {
        if w.abs() <= SUPPORT_RADIUS {
            INDICATOR_HEIGHT
        } else {
            0.0
        }
    }

    fn half_moments(&self, u: f64, c: f64) -> (HalfMoments, HalfMoments) {
        if c <= 0.0 {
            return point_mass_moments(u);
        }
        let spread = SUPPORT_RADIUS * c;
        let lo = u - spread;
        let hi = u + spread;
        let inv_width = 0.5 / spread;
        let plus = uniform_moments(lo.max(0.0), hi.max(0.0), inv_width);
        let minus = uniform_moments(lo.min(0.0), hi.min(0.0), inv_width);
        (plus, minus)
    }
}

/// Moments of a uniform density `inv_width` on `[a, b]`. Factored so that
/// mirrored bounds give bitwise mirrored moments.
#[inline]
fn uniform_moments(a: f64, b: f64, inv_width: f64) -> HalfMoments {
    let d = b - a;
    HalfMoments {
        m0: d * inv_width,
        m1: d * (b + a) * 0.5 * inv_width,
        m2: d * (b * b + b * a + a * a) * (1.0 / 3.0) * inv_width,
    }
}

/// Limit `c → 0`: all particles travel at `u`.
fn point_mass_moments(u: f64) -> (HalfMoments, HalfMoments) {
    let full = HalfMoments {
        m0: 1.0,
        m1: u,
        m2: u * u,
    };
    if u > 0.0 {
        (full, HalfMoments::default())
    } else if u < 0.0 {
        (HalfMoments::default(), full)
    } else {
        let half = HalfMoments {
            m0: 0.5,
            m1: 0.0,
            m2: 0.0,
        };
        (half, half)
    }
}

/// `χ(w)` for the shipped indicator density.
pub fn chi(w: f64) -> f64 {
    IndicatorChi.density(w)
}

/// Half-line moments for the shipped density: `(plus, minus)`.
pub fn half_moments(u: f64, c: f64) -> (HalfMoments, HalfMoments) {
    IndicatorChi.half_moments(u, c)
}

/// `c = sqrt(gH/2)`.
#[inline]
pub fn sound_speed(h: f64, g: f64) -> f64 {
    (0.5 * g * h.max(0.0)).sqrt()
}

/// Mass and momentum flux of one layer.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LayerFlux {
    pub mass: f64,
    pub momentum: f64,
}

impl std::ops::Add for LayerFlux {
    type Output = LayerFlux;

    fn add(self, rhs: LayerFlux) -> LayerFlux {
        LayerFlux {
            mass: self.mass + rhs.mass,
            momentum: self.momentum + rhs.momentum,
        }
    }
}

/// `F⁺` and `F⁻` of one layer with height `layer_h = l_α H`, velocity `u`
/// and column sound speed `c`.
#[inline]
pub fn layer_flux_split(layer_h: f64, u: f64, c: f64) -> (LayerFlux, LayerFlux) {
    if layer_h <= 0.0 {
        return (LayerFlux::default(), LayerFlux::default());
    }
    let (p, m) = half_moments(u, c);
    (
        LayerFlux {
            mass: layer_h * p.m1,
            momentum: layer_h * p.m2,
        },
        LayerFlux {
            mass: layer_h * m.m1,
            momentum: layer_h * m.m2,
        },
    )
}

/// Per-layer positive and negative flux parts of one cell.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CellFluxSplit {
    pub plus_mass: Vec<f64>,
    pub minus_mass: Vec<f64>,
    pub plus_momentum: Vec<f64>,
    pub minus_momentum: Vec<f64>,
}

impl CellFluxSplit {
    pub fn compute(h: f64, u: &[f64], part: &LayerPartition, g: f64) -> Self {
        let n = part.len();
        let mut out = CellFluxSplit {
            plus_mass: vec![0.0; n],
            minus_mass: vec![0.0; n],
            plus_momentum: vec![0.0; n],
            minus_momentum: vec![0.0; n],
        };
        if h <= 0.0 {
            return out;
        }
        let c = sound_speed(h, g);
        for a in 0..n {
            let (p, m) = layer_flux_split(part.get(a) * h, u[a], c);
            out.plus_mass[a] = p.mass;
            out.minus_mass[a] = m.mass;
            out.plus_momentum[a] = p.momentum;
            out.minus_momentum[a] = m.momentum;
        }
        out
    }

    /// `F_H⁺ = Σ_α F⁺_{h_α}`.
    pub fn plus_total_mass(&self) -> f64 {
        self.plus_mass.iter().sum()
    }

    pub fn minus_total_mass(&self) -> f64 {
        self.minus_mass.iter().sum()
    }
}

/// `F⁺(X)` per layer.
pub fn flux_plus(h: f64, u: &[f64], part: &LayerPartition, g: f64) -> Vec<LayerFlux> {
    let s = CellFluxSplit::compute(h, u, part, g);
    s.plus_mass
        .iter()
        .zip(&s.plus_momentum)
        .map(|(&mass, &momentum)| LayerFlux { mass, momentum })
        .collect()
}

/// `F⁻(X)` per layer.
pub fn flux_minus(h: f64, u: &[f64], part: &LayerPartition, g: f64) -> Vec<LayerFlux> {
    let s = CellFluxSplit::compute(h, u, part, g);
    s.minus_mass
        .iter()
        .zip(&s.minus_momentum)
        .map(|(&mass, &momentum)| LayerFlux { mass, momentum })
        .collect()
}

/// Height and layer velocities on one side of an interface.
#[derive(Debug, Clone, Copy)]
pub struct CellView<'a> {
    pub h: f64,
    pub u: &'a [f64],
}

/// `F_{i+1/2} = F⁺(left) + F⁻(right)`, written per layer into `out`.
/// Returns the total mass flux `Σ_α F_{h_α}`.
pub fn interface_flux(
    left: CellView<'_>,
    right: CellView<'_>,
    part: &LayerPartition,
    g: f64,
    out: &mut [LayerFlux],
) -> f64 {
    let cl = sound_speed(left.h, g);
    let cr = sound_speed(right.h, g);
    let mut total = 0.0;
    for (a, slot) in out.iter_mut().enumerate().take(part.len()) {
        let l = part.get(a);
        let (p, _) = layer_flux_split(l * left.h, left.u[a], cl);
        let (_, m) = layer_flux_split(l * right.h, right.u[a], cr);
        *slot = p + m;
        total += slot.mass;
    }
    total
}

/// Kinetic pressure `l·H·(m₂⁺ + m₂⁻)` of a resting layer, evaluated through
/// the same moment code as the fluxes. Equals `l g H²/2` up to rounding and
/// matches a resting interface flux bitwise.
#[inline]
pub fn resting_pressure(layer_h: f64, c: f64) -> f64 {
    let (p, m) = layer_flux_split(layer_h, 0.0, c);
    p.momentum + m.momentum
}

/// Exact flux of the multilayer system for one layer:
/// `(h_α u_α, h_α u_α² + (g/2) l_α H²)`.
pub fn exact_layer_flux(h: f64, u: f64, l: f64, g: f64) -> LayerFlux {
    LayerFlux {
        mass: l * h * u,
        momentum: l * h * u * u + 0.5 * g * l * h * h,
    }
}
