//! Post-processing observables: energy, vertical velocity and the
//! hyperbolicity analysis of the transport matrices.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::problem::Problem;
use crate::state::{interface_elevations, Bathymetry, Grid1D, LayerPartition, SimState};

/// Cell-summed energy `Σ_i Δx_i Σ_α E_{α,i}` with
/// `E_α = h_α u_α²/2 + g h_α (η + z_b)/2`, `η = z_b + H`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyReport {
    pub time: f64,
    pub per_layer: Vec<f64>,
    pub kinetic: f64,
    pub potential: f64,
    pub total: f64,
}

pub fn energy(
    state: &SimState,
    bathy: &Bathymetry,
    grid: &Grid1D,
    part: &LayerPartition,
    g: f64,
    dry: f64,
) -> EnergyReport {
    let n = part.len();
    let mut per_layer = vec![0.0; n];
    let (mut kinetic, mut potential) = (0.0, 0.0);
    for i in 0..state.cells() {
        let h = state.h[i];
        let zb = bathy.elevations()[i];
        let dx = grid.dx(i);
        for (a, slot) in per_layer.iter_mut().enumerate() {
            let lh = part.get(a) * h;
            let u = state.velocity(i, a, part, dry);
            let ek = 0.5 * lh * u * u * dx;
            let ep = 0.5 * g * lh * (h + 2.0 * zb) * dx;
            *slot += ek + ep;
            kinetic += ek;
            potential += ep;
        }
    }
    EnergyReport {
        time: state.time,
        total: per_layer.iter().sum(),
        per_layer,
        kinetic,
        potential,
    }
}

pub fn total_energy(problem: &Problem, state: &SimState) -> EnergyReport {
    energy(
        state,
        &problem.bathymetry,
        &problem.grid,
        &problem.layers,
        problem.gravity(),
        problem.dry_threshold,
    )
}

/// Remembers the previous report and returns `ΔE/Δt` between calls.
#[derive(Debug, Clone, Default)]
pub struct EnergyTracker {
    last: Option<(f64, f64)>,
}

impl EnergyTracker {
    pub fn update(&mut self, report: &EnergyReport) -> Option<f64> {
        let rate = self.last.and_then(|(t, e)| {
            let dt = report.time - t;
            (dt > 0.0).then(|| (report.total - e) / dt)
        });
        self.last = Some((report.time, report.total));
        rate
    }
}

fn derivative(f: &[f64], x: &[f64], i: usize) -> f64 {
    let m = f.len();
    if m < 2 {
        return 0.0;
    }
    let (a, b) = if i == 0 {
        (0, 1)
    } else if i == m - 1 {
        (m - 2, m - 1)
    } else {
        (i - 1, i + 1)
    };
    (f[b] - f[a]) / (x[b] - x[a])
}

/// Vertical velocity at the midpoint of every layer (cell-major), recovered
/// from the divergence-free condition and non-penetration at the bed. For
/// layerwise constant `u`, just above interface `α - 1/2`
///
/// `w = u_α ∂x z_{α-1/2} - Σ_{j<α} ∂x(h_j u_j)`
///
/// and the midpoint value subtracts `(h_α/2) ∂x u_α`.
pub fn vertical_velocity(
    state: &SimState,
    bathy: &Bathymetry,
    grid: &Grid1D,
    part: &LayerPartition,
    dry: f64,
) -> Result<Vec<f64>> {
    let n = part.len();
    let cells = state.cells();
    let z_int = interface_elevations(state, part, bathy)?;
    let u = state.velocities(part, dry);
    let x = grid.centers();
    let mut fluxes = vec![0.0; cells];
    let mut iface = vec![0.0; cells];
    let mut vel = vec![0.0; cells];
    let mut below = vec![0.0; cells]; // Σ_{j<α} ∂x(h_j u_j)
    let mut w = vec![0.0; cells * n];
    for a in 0..n {
        for i in 0..cells {
            fluxes[i] = state.q[i * n + a];
            iface[i] = z_int[i * (n + 1) + a];
            vel[i] = u[i * n + a];
        }
        for i in 0..cells {
            if state.h[i] <= dry {
                continue;
            }
            let h_a = part.get(a) * state.h[i];
            w[i * n + a] = vel[i] * derivative(&iface, x, i) - below[i] - 0.5 * h_a * derivative(&vel, x, i);
        }
        for i in 0..cells {
            below[i] += derivative(&fluxes, x, i);
        }
    }
    Ok(w)
}

/// Coefficients `[a0, a1, a2, a3]` and sorted real roots of the two-layer
/// characteristic polynomial
///
/// `D(x) = -x(2u₁-u-x)(2u₂-u-x) - l(2u₂-u-x)(gH-u₁²+ux) - (1-l)(2u₁-u-x)(gH-u₂²+ux)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoLayerCharpoly {
    pub coefficients: [f64; 4],
    pub roots: [f64; 3],
}

impl TwoLayerCharpoly {
    pub fn eval(&self, x: f64) -> f64 {
        let [a0, a1, a2, a3] = self.coefficients;
        ((a3 * x + a2) * x + a1) * x + a0
    }
}

fn charpoly_coefficients(h: f64, u1: f64, u2: f64, l: f64, u: f64, g: f64) -> [f64; 4] {
    let p1 = 2.0 * u1 - u;
    let p2 = 2.0 * u2 - u;
    let a1 = g * h - u1 * u1;
    let a2 = g * h - u2 * u2;
    [
        -l * p2 * a1 - (1.0 - l) * p1 * a2,
        -p1 * p2 - l * (p2 * u - a1) - (1.0 - l) * (p1 * u - a2),
        p1 + p2 + u,
        -1.0,
    ]
}

/// Bisection on `[lo, hi]` where `f` is non-negative towards `lo` when
/// `lo_positive` (non-positive otherwise). Evaluations that round to zero
/// are assigned to the `lo` side, so near-degenerate brackets still
/// converge to a point of the bracket.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, lo_positive: bool) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        let on_lo_side = if lo_positive { fm >= 0.0 } else { fm <= 0.0 };
        if on_lo_side {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Rounding level of the polynomial evaluation at `x`.
fn eval_noise(c: &[f64; 4], x: f64) -> f64 {
    let ax = x.abs();
    64.0 * f64::EPSILON * (c[0].abs() + c[1].abs() * ax + c[2].abs() * ax * ax + c[3].abs() * ax * ax * ax)
}

/// Roots of the two-layer characteristic polynomial, bracketed by the sign
/// pattern of the strict hyperbolicity argument: with `u₁ < u₂`,
/// `γ² = u₂ - u₁`, and the interface velocity `u = u₁`, `D(u₁) < 0` and
/// `D(max(u₂, u₁ + 2lγ²)) > 0`; with `u = u₂`, `D(u₂) > 0` and
/// `D(min(u₁, u₂ - 2(1-l)γ²)) < 0`. Together with `D(±∞) = ∓∞` each of the
/// three resulting intervals holds one root.
pub fn two_layer_charpoly(h: f64, u1: f64, u2: f64, l: f64, u_interface: f64, g: f64) -> Result<TwoLayerCharpoly> {
    if !(h > 0.0) {
        return Err(Error::Domain(format!("total height must be positive, got {h}")));
    }
    if !(l > 0.0 && l < 1.0) {
        return Err(Error::Domain(format!("layer fraction must lie in (0, 1), got {l}")));
    }
    if !(g > 0.0) {
        return Err(Error::Domain(format!("gravity must be positive, got {g}")));
    }
    let coefficients = charpoly_coefficients(h, u1, u2, l, u_interface, g);
    let poly = TwoLayerCharpoly {
        coefficients,
        roots: [0.0; 3],
    };
    let d = |x: f64| poly.eval(x);
    let c = (g * h).sqrt();

    if u1 == u2 {
        let u = u1;
        let roots = if u_interface == u {
            [u - c, u, u + c]
        } else {
            let mut r = roots_by_scan(&d, &coefficients)?;
            r.sort_by(f64::total_cmp);
            r
        };
        return Ok(TwoLayerCharpoly { coefficients, roots });
    }

    // D is invariant under (u₁, l) <-> (u₂, 1 - l), so order the layers.
    let (ua, ub, la) = if u1 < u2 { (u1, u2, l) } else { (u2, u1, 1.0 - l) };
    let gamma2 = ub - ua;
    let (p, q) = if u_interface == ua {
        (ua, ub.max(ua + 2.0 * la * gamma2))
    } else if u_interface == ub {
        (ua.min(ub - 2.0 * (1.0 - la) * gamma2), ub)
    } else {
        let mut r = roots_by_scan(&d, &coefficients)?;
        r.sort_by(f64::total_cmp);
        return Ok(TwoLayerCharpoly { coefficients, roots: r });
    };
    let (dp, dq) = (d(p), d(q));
    if dp > eval_noise(&coefficients, p) || dq < -eval_noise(&coefficients, q) {
        return Err(Error::Domain(format!(
            "sign brackets failed: D({p}) = {dp}, D({q}) = {dq}"
        )));
    }
    let bound = cauchy_bound(&coefficients);
    let lo = p.min(-bound) - 1.0;
    let hi = q.max(bound) + 1.0;
    let roots = [bisect(d, lo, p, true), bisect(d, p, q, false), bisect(d, q, hi, true)];
    Ok(TwoLayerCharpoly { coefficients, roots })
}

fn cauchy_bound(c: &[f64; 4]) -> f64 {
    1.0 + (c[0].abs()).max(c[1].abs()).max(c[2].abs()) / c[3].abs()
}

/// Fallback for interface velocities outside `{u₁, u₂}`: locate sign
/// changes on a fine grid over the Cauchy interval.
fn roots_by_scan(d: &impl Fn(f64) -> f64, c: &[f64; 4]) -> Result<[f64; 3]> {
    let b = cauchy_bound(c);
    let steps = 4096;
    let mut out = Vec::with_capacity(3);
    let mut x0 = -b;
    let mut f0 = d(x0);
    for k in 1..=steps {
        let x1 = -b + 2.0 * b * k as f64 / steps as f64;
        let f1 = d(x1);
        if f0 == 0.0 {
            out.push(x0);
        } else if (f0 > 0.0) != (f1 > 0.0) && f1 != 0.0 {
            out.push(bisect(d, x0, x1, f0 > 0.0));
        }
        x0 = x1;
        f0 = f1;
    }
    if out.len() != 3 {
        return Err(Error::Domain(format!("expected three real roots, found {}", out.len())));
    }
    Ok([out[0], out[1], out[2]])
}

/// Eigenvalues of `M⁻¹A` for one column.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperbolicityReport {
    pub real: Vec<f64>,
    pub imag: Vec<f64>,
    pub max_imag: f64,
    pub spectral_radius: f64,
    /// All eigenvalues real (relative to the spectral radius) and pairwise
    /// separated.
    pub real_distinct: bool,
    /// Two-layer characteristic polynomial, when `N = 2`.
    pub charpoly: Option<[f64; 4]>,
}

/// Transport matrices `(A, M)` of an `N`-layer column in the variables
/// `(H, H u_1, ..., H u_N)`. `interface_velocities` holds `u_{α+1/2}` for
/// the `N - 1` internal interfaces.
pub fn transport_matrices(
    h: f64,
    u: &[f64],
    part: &LayerPartition,
    interface_velocities: &[f64],
    g: f64,
) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let n = part.len();
    if u.len() != n {
        return Err(Error::Dimension {
            what: "layer velocities",
            expected: n,
            got: u.len(),
        });
    }
    if interface_velocities.len() != n - 1 {
        return Err(Error::Dimension {
            what: "interface velocities",
            expected: n - 1,
            got: interface_velocities.len(),
        });
    }
    if !(h > 0.0) {
        return Err(Error::Domain(format!("total height must be positive, got {h}")));
    }
    let l = part.fractions();
    let mut a = DMatrix::zeros(n + 1, n + 1);
    let mut m = DMatrix::identity(n + 1, n + 1);
    for j in 0..n {
        a[(0, j + 1)] = l[j];
    }
    for i in 0..n {
        let r = i + 1;
        a[(r, 0)] = g * h - u[i] * u[i];
        a[(r, r)] = 2.0 * u[i];
        let below = if i > 0 { interface_velocities[i - 1] } else { 0.0 };
        let above = if i + 1 < n { interface_velocities[i] } else { 0.0 };
        for j in 0..n {
            if j > i {
                a[(r, j + 1)] = above * l[j] / l[i];
            } else if j < i {
                a[(r, j + 1)] = below * l[j] / l[i];
            }
        }
        let sum_below: f64 = l[..i].iter().sum();
        let sum_above: f64 = l[i + 1..].iter().sum();
        m[(r, 0)] = (below * sum_below + above * sum_above) / l[i];
    }
    Ok((a, m))
}

pub fn nlayer_eigen(
    h: f64,
    u: &[f64],
    part: &LayerPartition,
    interface_velocities: &[f64],
    g: f64,
) -> Result<HyperbolicityReport> {
    let (a, m) = transport_matrices(h, u, part, interface_velocities, g)?;
    let k = a.nrows();
    // M = I + v e₀ᵀ with v₀ = 0, hence M⁻¹ = I - v e₀ᵀ
    let mut b = a.clone();
    for r in 1..k {
        let v = m[(r, 0)];
        if v != 0.0 {
            for c in 0..k {
                b[(r, c)] -= v * a[(0, c)];
            }
        }
    }
    let eig = b.complex_eigenvalues();
    let mut pairs: Vec<(f64, f64)> = eig.iter().map(|z| (z.re, z.im)).collect();
    if pairs.iter().any(|(re, im)| !re.is_finite() || !im.is_finite()) {
        return Err(Error::Solve("eigenvalue iteration did not converge".into()));
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let spectral_radius = pairs.iter().map(|(re, im)| re.hypot(*im)).fold(0.0, f64::max);
    let max_imag = pairs.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
    let tol = 1e-9 * spectral_radius.max(f64::MIN_POSITIVE);
    let real_distinct = max_imag <= tol && pairs.windows(2).all(|w| w[1].0 - w[0].0 > tol);
    let charpoly = (part.len() == 2)
        .then(|| charpoly_coefficients(h, u[0], u[1], part.get(0), interface_velocities[0], g));
    Ok(HyperbolicityReport {
        real: pairs.iter().map(|p| p.0).collect(),
        imag: pairs.iter().map(|p| p.1).collect(),
        max_imag,
        spectral_radius,
        real_distinct,
        charpoly,
    })
}
