//! RIS placement: a per-UAV closed-form point on the source-UAV ray, then the
//! geometric median of those points as the shared hover position.
//!
//! For one UAV the placement cost is proportional to
//! `g(k) = (k^2 + c1) * ((1 - k)^2 + c2)` with `q = k w`. Shifting `k = 1/2 + y`
//! turns `g'(k) = 0` into the depressed cubic `y^3 + a y + b = 0`, solved exactly
//! by the trigonometric method. Of its three real roots the smallest is the
//! source-side minimum used for deployment; the largest is the UAV-side minimum
//! and the middle one is the local maximum between them.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::geometry::{Vec2, Vec3};

/// Inputs for the placement stage.
#[derive(Debug, Clone, PartialEq)]
pub struct PlacementProblem {
    /// UAV positions `[w_m, h_m]`.
    pub uavs: Vec<Vec3>,
    /// RIS altitude H.
    pub altitude: f64,
    /// `alpha^2 N M beta0 G_s`, m^2.
    pub omega_tilde_1: f64,
    /// `alpha^2 (sigma_a^2 / sigma^2) N beta0`, m^2.
    pub omega_tilde_2: f64,
    /// Proximity factor: deployments should keep `|q| <= delta |w_m|`.
    pub delta: f64,
}

impl PlacementProblem {
    pub fn validate(&self) -> Result<()> {
        if self.uavs.is_empty() {
            return Err(Error::Domain("placement needs at least one UAV"));
        }
        if !(self.altitude > 0.0) {
            return Err(Error::Domain("RIS altitude must be positive"));
        }
        if !(self.omega_tilde_1 >= 0.0 && self.omega_tilde_2 >= 0.0) {
            return Err(Error::Domain("placement regularizers must be non-negative"));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::Domain("proximity factor must lie in (0, 1)"));
        }
        for (i, u) in self.uavs.iter().enumerate() {
            if !(u.xy().norm() > 0.0) || !u.is_finite() {
                return Err(Error::Domain("UAV ground position must be non-zero and finite").at_uav(i));
            }
        }
        Ok(())
    }

    /// Normalized `(zeta1, zeta2, omega_bar_1, omega_bar_2)` for UAV `i`.
    pub fn normalized(&self, i: usize) -> [f64; 4] {
        let u = self.uavs[i];
        let w = u.xy().norm();
        [
            self.altitude / w,
            (self.altitude - u.z).abs() / w,
            self.omega_tilde_1 / (w * w),
            self.omega_tilde_2 / (w * w),
        ]
    }
}

/// Depressed-cubic coefficients `(a, b)`.
pub fn cubic_coefficients(zeta1: f64, zeta2: f64, omega_bar_1: f64, omega_bar_2: f64) -> (f64, f64) {
    let c1 = zeta1 * zeta1 + omega_bar_1;
    let c2 = zeta2 * zeta2 + omega_bar_2;
    (0.5 * (c1 + c2) - 0.25, 0.25 * (c2 - c1))
}

/// Normalized placement cost `g(k) / |w|^4`.
pub fn placement_cost(kappa: f64, zeta1: f64, zeta2: f64, omega_bar_1: f64, omega_bar_2: f64) -> f64 {
    let c1 = zeta1 * zeta1 + omega_bar_1;
    let c2 = zeta2 * zeta2 + omega_bar_2;
    (kappa * kappa + c1) * ((1.0 - kappa) * (1.0 - kappa) + c2)
}

/// All three stationary points, largest first: `[k0, k1, k2]`.
pub fn kappa_roots(zeta1: f64, zeta2: f64, omega_bar_1: f64, omega_bar_2: f64) -> Result<[f64; 3]> {
    let (a, b) = cubic_coefficients(zeta1, zeta2, omega_bar_1, omega_bar_2);
    let discriminant = (a / 3.0).powi(3) + (b / 2.0).powi(2);
    if !(a < 0.0 && discriminant < 0.0) {
        return Err(Error::OutOfRegime { a, discriminant });
    }
    let r = 2.0 * (-a / 3.0).sqrt();
    let phi = ((3.0 * b / (2.0 * a)) * (-3.0 / a).sqrt()).clamp(-1.0, 1.0).acos() / 3.0;
    let root = |k: f64| 0.5 + r * (phi - 2.0 * PI * k / 3.0).cos();
    Ok([root(0.0), root(1.0), root(2.0)])
}

/// Source-side placement fraction `k` with `q = k w`.
pub fn kappa(zeta1: f64, zeta2: f64, omega_bar_1: f64, omega_bar_2: f64) -> Result<f64> {
    kappa_roots(zeta1, zeta2, omega_bar_1, omega_bar_2).map(|r| r[2])
}

/// Source-side fraction by grid search on `(0, 1/2)`, then golden-section
/// refinement inside the best cell. Used only when the closed form is out of
/// regime and the caller opted in.
pub fn kappa_grid(zeta1: f64, zeta2: f64, omega_bar_1: f64, omega_bar_2: f64) -> f64 {
    const POINTS: usize = 10_000;
    let f = |k: f64| placement_cost(k, zeta1, zeta2, omega_bar_1, omega_bar_2);
    let step = 0.5 / POINTS as f64;
    let best = (1..POINTS)
        .map(|i| i as f64 * step)
        .fold((0.0, f64::INFINITY), |acc, k| {
            let v = f(k);
            if v < acc.1 {
                (k, v)
            } else {
                acc
            }
        })
        .0;
    golden_section(f, (best - step).max(0.0), (best + step).min(0.5), 1e-12)
}

pub(crate) fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Per-UAV fractions and points `q_m = k_m w_m`.
pub fn per_uav_placement(problem: &PlacementProblem, grid_fallback: bool) -> Result<(Vec<f64>, Vec<Vec2>)> {
    problem.validate()?;
    let mut kappas = Vec::with_capacity(problem.uavs.len());
    let mut points = Vec::with_capacity(problem.uavs.len());
    for (i, u) in problem.uavs.iter().enumerate() {
        let [z1, z2, o1, o2] = problem.normalized(i);
        let k = match kappa(z1, z2, o1, o2) {
            Ok(k) => k,
            Err(Error::OutOfRegime { .. }) if grid_fallback => kappa_grid(z1, z2, o1, o2),
            Err(e) => return Err(e.at_uav(i)),
        };
        kappas.push(k);
        points.push(u.xy() * k);
    }
    Ok((kappas, points))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeiszfeldOptions {
    /// Stop when an iterate moves less than this, m.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for WeiszfeldOptions {
    fn default() -> Self {
        Self { tol: 1e-9, max_iter: 10_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Median {
    pub point: Vec2,
    pub iterations: usize,
    /// Sum of distances from `point` to the inputs.
    pub objective: f64,
}

/// Sum of Euclidean distances from `q` to `points`.
pub fn distance_sum(points: &[Vec2], q: Vec2) -> f64 {
    points.iter().map(|p| p.dist(q)).sum()
}

/// Geometric median by Weiszfeld iteration from the centroid.
pub fn weiszfeld(points: &[Vec2], opts: WeiszfeldOptions) -> Result<Median> {
    weiszfeld_observed(points, opts, |_, _, _| {})
}

/// As [`weiszfeld`], calling `observe(iteration, iterate, objective)` after every step.
///
/// Each step takes the Weiszfeld map or a Newton step, whichever gives the
/// lower distance sum, so the objective never increases and convergence is
/// quadratic near a smooth optimum. Data points are tested for optimality
/// first. An iterate that lands on a data point is either optimal there (the pull of
/// the other points has norm at most one) or is moved off it with the
/// Vardi-Zhang modified step, which keeps the objective decreasing.
pub fn weiszfeld_observed(
    points: &[Vec2],
    opts: WeiszfeldOptions,
    mut observe: impl FnMut(usize, Vec2, f64),
) -> Result<Median> {
    const COINCIDE: f64 = 1e-12;
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::Domain("Weiszfeld inputs must be finite"));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::Domain("Weiszfeld tolerance must be positive"));
    }
    let done = |point: Vec2, iterations| Median {
        point,
        iterations,
        objective: distance_sum(points, point),
    };
    match points.len() {
        0 => return Err(Error::Domain("Weiszfeld needs at least one point")),
        1 => return Ok(done(points[0], 0)),
        2 => return Ok(done((points[0] + points[1]) * 0.5, 0)),
        _ => {}
    }

    // Iterates approach a data-point optimum only sublinearly, so test each
    // data point for optimality before iterating.
    for (k, &pk) in points.iter().enumerate() {
        if data_point_optimal(points, k) {
            observe(0, pk, distance_sum(points, pk));
            return Ok(done(pk, 0));
        }
    }

    let inv = 1.0 / points.len() as f64;
    let mut q = points.iter().fold(Vec2::ZERO, |acc, &p| acc + p) * inv;
    for it in 1..=opts.max_iter {
        let mut num = Vec2::ZERO;
        let mut den = 0.0;
        let mut pull = Vec2::ZERO;
        let mut on_point = None;
        let mut weight = 0.0;
        for (i, &p) in points.iter().enumerate() {
            let d = p.dist(q);
            if d < COINCIDE {
                on_point = Some(i);
                weight += 1.0;
                continue;
            }
            num = num + p * (1.0 / d);
            den += 1.0 / d;
            pull = pull + (p - q) * (1.0 / d);
        }
        let next = match on_point {
            None => {
                let w = num * (1.0 / den);
                match newton_step(points, q) {
                    Some(n) if distance_sum(points, n) < distance_sum(points, w) => n,
                    _ => w,
                }
            }
            Some(k) => {
                let r = pull.norm();
                if r <= weight {
                    let p = points[k];
                    observe(it, p, distance_sum(points, p));
                    return Ok(done(p, it));
                }
                let t = num * (1.0 / den);
                let w = weight / r;
                t * (1.0 - w) + q * w
            }
        };
        observe(it, next, distance_sum(points, next));
        let moved = next.dist(q);
        q = next;
        if moved < opts.tol {
            return Ok(done(q, it));
        }
    }
    Err(Error::Convergence {
        best: q,
        iterations: opts.max_iter,
    })
}

/// Newton step on the distance sum, or `None` if the Hessian is singular
/// (all points collinear with `q`).
fn newton_step(points: &[Vec2], q: Vec2) -> Option<Vec2> {
    let (mut gx, mut gy) = (0.0, 0.0);
    let (mut hxx, mut hxy, mut hyy) = (0.0, 0.0, 0.0);
    for &p in points {
        let d = p.dist(q);
        let (ux, uy) = ((q.x - p.x) / d, (q.y - p.y) / d);
        gx += ux;
        gy += uy;
        hxx += (1.0 - ux * ux) / d;
        hxy -= ux * uy / d;
        hyy += (1.0 - uy * uy) / d;
    }
    let det = hxx * hyy - hxy * hxy;
    if !(det > 1e-12 * (hxx * hyy).abs()) {
        return None;
    }
    let step = Vec2::new((hyy * gx - hxy * gy) / det, (hxx * gy - hxy * gx) / det);
    let next = q - step;
    next.is_finite().then_some(next)
}

/// Whether `points[k]` minimizes the distance sum: the unit pulls toward the
/// other (distinct) points must have resultant norm at most the multiplicity
/// of `points[k]`.
fn data_point_optimal(points: &[Vec2], k: usize) -> bool {
    const COINCIDE: f64 = 1e-12;
    let pk = points[k];
    let mut pull = Vec2::ZERO;
    let mut weight = 0.0;
    for &p in points {
        let d = p.dist(pk);
        if d < COINCIDE {
            weight += 1.0;
        } else {
            pull = pull + (p - pk) * (1.0 / d);
        }
    }
    pull.norm() <= weight
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlacementSolution {
    pub kappa: Vec<f64>,
    pub q_m: Vec<Vec2>,
    pub q_star: Vec2,
    pub iterations: usize,
    /// Sum of `|q_m - q*|`.
    pub objective: f64,
    /// `|q*| / min_m |w_m|`; in-regime deployments keep this below `delta`.
    pub proximity_ratio: f64,
}

impl PlacementSolution {
    pub fn within_proximity(&self, delta: f64) -> bool {
        self.proximity_ratio < delta
    }
}

/// Per-UAV points, then their geometric median.
pub fn consensus_placement(
    problem: &PlacementProblem,
    opts: WeiszfeldOptions,
    grid_fallback: bool,
) -> Result<PlacementSolution> {
    let (kappa, q_m) = per_uav_placement(problem, grid_fallback)?;
    let median = weiszfeld(&q_m, opts)?;
    let w_min = problem
        .uavs
        .iter()
        .map(|u| u.xy().norm())
        .fold(f64::INFINITY, f64::min);
    Ok(PlacementSolution {
        kappa,
        q_m,
        q_star: median.point,
        iterations: median.iterations,
        objective: median.objective,
        proximity_ratio: median.point.norm() / w_min,
    })
}
