//! Independent numerical references: brute-force Hopf maximization over a
//! p-lattice, Lax–Friedrichs schemes for 1D conservation laws and 2D
//! Hamilton–Jacobi equations, and finite-difference residuals of the viscous
//! network and its heat-equation counterpart.

use std::collections::HashMap;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::conservation::{EntropyNet1D, GradientValue};
use crate::convex::{conjugate_and_hamiltonian, legendre_j_star, ExtReal};
use crate::error::{HjError, Result};
use crate::network::{viscous_value, NetworkParams, TieRule};
use crate::par::Exec;
use crate::rng::{stream, Stream};

/// Uniform partition of `[lo, hi]` into `cells` cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub lo: f64,
    pub hi: f64,
    pub cells: usize,
}

impl Grid1D {
    pub fn new(lo: f64, hi: f64, cells: usize) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(HjError::NonFinite("grid bounds"));
        }
        if !(lo < hi) || cells < 2 {
            return Err(HjError::invalid("grid needs lo < hi and at least 2 cells"));
        }
        Ok(Grid1D { lo, hi, cells })
    }

    pub fn h(&self) -> f64 {
        (self.hi - self.lo) / self.cells as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        self.lo + (i as f64 + 0.5) * self.h()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.cells).map(|i| self.center(i)).collect()
    }

    /// Node `i` of the `cells + 1` cell boundaries.
    pub fn node(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.h()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.cells).map(|i| self.node(i)).collect()
    }
}

/// `max_p { <p, x> - t H̃(p) - J*(p) }` over the grid points where `J*` is finite.
pub fn hopf_bruteforce<J, H>(
    j_star: J,
    h_tilde: H,
    p_grid: &[Vec<f64>],
    x: &[f64],
    t: f64,
) -> Result<f64>
where
    J: Fn(&[f64]) -> ExtReal,
    H: Fn(&[f64]) -> f64,
{
    if !(t >= 0.0) {
        return Err(HjError::NegativeTime(t));
    }
    if p_grid.is_empty() {
        return Err(HjError::invalid("p-grid is empty"));
    }
    let mut best = f64::NEG_INFINITY;
    let mut any = false;
    for p in p_grid {
        if p.len() != x.len() {
            return Err(HjError::DimensionMismatch {
                expected: x.len(),
                got: p.len(),
            });
        }
        if let ExtReal::Finite(js) = j_star(p) {
            any = true;
            best = best.max(dot(p, x) - t * h_tilde(p) - js);
        }
    }
    if any {
        Ok(best)
    } else {
        Err(HjError::EmptyEffectiveGrid)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| u * v).sum()
}

/// Axis-aligned lattice `origin + step * k`, `0 <= k_d < counts[d]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    pub origin: Vec<f64>,
    pub step: f64,
    pub counts: Vec<usize>,
}

impl Lattice {
    /// Smallest lattice with spacing `step` covering the box `[lo, hi]`.
    pub fn covering(lo: &[f64], hi: &[f64], step: f64) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(HjError::invalid("lattice box bounds must share a nonzero dimension"));
        }
        if !(step > 0.0) || !step.is_finite() {
            return Err(HjError::invalid("lattice step must be positive"));
        }
        let counts = lo
            .iter()
            .zip(hi)
            .map(|(a, b)| ((b - a) / step - 1e-9).ceil().max(0.0) as usize + 1)
            .collect();
        Ok(Lattice {
            origin: lo.to_vec(),
            step,
            counts,
        })
    }

    pub fn dim(&self) -> usize {
        self.origin.len()
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Multi-index of flat index `k`; the last axis varies fastest.
    pub fn index(&self, mut k: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        for d in (0..self.dim()).rev() {
            idx[d] = k % self.counts[d];
            k /= self.counts[d];
        }
        idx
    }

    pub fn point(&self, k: usize) -> Vec<f64> {
        self.index(k)
            .iter()
            .zip(&self.origin)
            .map(|(&i, &o)| o + i as f64 * self.step)
            .collect()
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|k| self.point(k)).collect()
    }
}

/// Finite part of a p-lattice with `J*` and `H̃` tabulated, for repeated
/// Hopf maximization.
#[derive(Debug, Clone)]
pub struct HopfTable {
    n: usize,
    step: f64,
    index: Vec<Vec<usize>>,
    points: Vec<f64>,
    j_star: Vec<f64>,
    h: Vec<f64>,
}

impl HopfTable {
    /// Evaluates `values(p) = (J*(p), H̃(p))` on every lattice point, keeping
    /// the ones where it is `Some`.
    pub fn build<F>(lattice: &Lattice, values: F, exec: Exec) -> Result<Self>
    where
        F: Fn(&[f64]) -> Result<Option<(f64, f64)>> + Sync + Send,
    {
        let rows = exec.map_range(lattice.len(), |k| {
            let p = lattice.point(k);
            values(&p).map(|v| v.map(|v| (k, p, v)))
        });
        let n = lattice.dim();
        let mut table = HopfTable {
            n,
            step: lattice.step,
            index: Vec::new(),
            points: Vec::new(),
            j_star: Vec::new(),
            h: Vec::new(),
        };
        for row in rows {
            if let Some((k, p, (js, h))) = row? {
                table.index.push(lattice.index(k));
                table.points.extend_from_slice(&p);
                table.j_star.push(js);
                table.h.push(h);
            }
        }
        if table.h.is_empty() {
            return Err(HjError::EmptyEffectiveGrid);
        }
        Ok(table)
    }

    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn value(&self, x: &[f64], t: f64) -> f64 {
        let mut best = f64::NEG_INFINITY;
        for k in 0..self.len() {
            let p = &self.points[k * self.n..(k + 1) * self.n];
            best = best.max(dot(p, x) - t * self.h[k] - self.j_star[k]);
        }
        best
    }

    /// `(Lip(H̃), Lip(J*))` with respect to the max-norm displacement of `p`,
    /// each the sum over axes of the largest neighbour difference quotient.
    pub fn lipschitz(&self) -> (f64, f64) {
        let lookup: HashMap<&[usize], usize> = self
            .index
            .iter()
            .enumerate()
            .map(|(k, idx)| (idx.as_slice(), k))
            .collect();
        let mut lip_h = vec![0.0f64; self.n];
        let mut lip_j = vec![0.0f64; self.n];
        let mut probe = vec![0usize; self.n];
        for (k, idx) in self.index.iter().enumerate() {
            for d in 0..self.n {
                probe.copy_from_slice(idx);
                probe[d] += 1;
                if let Some(&nb) = lookup.get(probe.as_slice()) {
                    lip_h[d] = lip_h[d].max((self.h[nb] - self.h[k]).abs() / self.step);
                    lip_j[d] = lip_j[d].max((self.j_star[nb] - self.j_star[k]).abs() / self.step);
                }
            }
        }
        (lip_h.iter().sum(), lip_j.iter().sum())
    }

    /// `L * step * (1 + t)` with `L = ‖x‖₁ + Lip(H̃) + Lip(J*)`.
    pub fn error_bound(&self, x: &[f64], t: f64) -> f64 {
        let (lh, lj) = self.lipschitz();
        self.error_bound_with(x, t, lh, lj)
    }

    pub fn error_bound_with(&self, x: &[f64], t: f64, lip_h: f64, lip_j: f64) -> f64 {
        let l = x.iter().map(|v| v.abs()).sum::<f64>() + lip_h + lip_j;
        l * self.step * (1.0 + t)
    }
}

/// Solves `u_t + flux(u)_x = 0` with the Lax–Friedrichs scheme and returns
/// the cell averages at `t_final`. Boundary ghosts copy the edge cells.
pub fn lax_friedrichs<F, U>(flux: F, u0: U, grid: Grid1D, t_final: f64, cfl: f64) -> Result<Vec<f64>>
where
    F: Fn(f64) -> f64,
    U: Fn(f64) -> f64,
{
    let grid = Grid1D::new(grid.lo, grid.hi, grid.cells)?;
    if !(t_final >= 0.0) || !t_final.is_finite() {
        return Err(HjError::NegativeTime(t_final));
    }
    if !(cfl > 0.0 && cfl <= 1.0) {
        return Err(HjError::invalid("cfl must lie in (0, 1]"));
    }
    let mut u: Vec<f64> = grid.centers().into_iter().map(&u0).collect();
    if u.iter().any(|v| !v.is_finite()) {
        return Err(HjError::NonFinite("initial data"));
    }
    let lo = u.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let speed = max_flux_slope(&flux, lo, hi);
    let h = grid.h();
    let dt_max = if speed > 0.0 { cfl * h / speed } else { f64::INFINITY };

    let n = u.len();
    let mut f = vec![0.0; n];
    let mut next = vec![0.0; n];
    let mut t = 0.0;
    while t < t_final {
        let dt = dt_max.min(t_final - t);
        for (fi, &ui) in f.iter_mut().zip(&u) {
            *fi = flux(ui);
        }
        let r = dt / (2.0 * h);
        for i in 0..n {
            let (l, rgt) = (i.saturating_sub(1), (i + 1).min(n - 1));
            next[i] = 0.5 * (u[l] + u[rgt]) - r * (f[rgt] - f[l]);
        }
        std::mem::swap(&mut u, &mut next);
        t = if dt == t_final - t { t_final } else { t + dt };
    }
    Ok(u)
}

/// Largest finite-difference slope of `flux` over `[lo, hi]`.
fn max_flux_slope<F: Fn(f64) -> f64>(flux: &F, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        let d = 1e-6 * (1.0 + lo.abs());
        return ((flux(lo + d) - flux(lo - d)) / (2.0 * d)).abs();
    }
    const SAMPLES: usize = 1000;
    let dx = (hi - lo) / SAMPLES as f64;
    let mut prev = flux(lo);
    let mut best = 0.0f64;
    for k in 1..=SAMPLES {
        let cur = flux(lo + k as f64 * dx);
        best = best.max(((cur - prev) / dx).abs());
        prev = cur;
    }
    best
}

/// Node values of a square 2D grid, `values[i * side + j]` at
/// `(axis.node(i), axis.node(j))`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field2D {
    pub axis: Grid1D,
    pub t: f64,
    pub values: Vec<f64>,
}

impl Field2D {
    pub fn side(&self) -> usize {
        self.axis.cells + 1
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.side() + j]
    }
}

/// Monotone Lax–Friedrichs scheme for `u_t + H(u_x, u_y) = 0` on the square
/// `axis × axis`, returning snapshots at each of `times` (ascending).
///
/// `alpha` bounds `|∂H/∂p_x|` and `|∂H/∂p_y|`; the step is
/// `dt = cfl * h / (alpha_x + alpha_y)`. Ghost nodes extrapolate linearly.
pub fn lax_friedrichs_hj_2d<H, U>(
    hamiltonian: H,
    alpha: (f64, f64),
    u0: U,
    axis: Grid1D,
    times: &[f64],
    cfl: f64,
    exec: Exec,
) -> Result<Vec<Field2D>>
where
    H: Fn(f64, f64) -> f64 + Sync + Send,
    U: Fn(f64, f64) -> f64,
{
    let axis = Grid1D::new(axis.lo, axis.hi, axis.cells)?;
    if !(cfl > 0.0 && cfl <= 1.0) {
        return Err(HjError::invalid("cfl must lie in (0, 1]"));
    }
    if !(alpha.0 >= 0.0 && alpha.1 >= 0.0 && alpha.0 + alpha.1 > 0.0) {
        return Err(HjError::invalid("alpha must be nonnegative and not both zero"));
    }
    if times.iter().any(|&t| !(t >= 0.0) || !t.is_finite()) {
        return Err(HjError::invalid("times must be finite and nonnegative"));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(HjError::invalid("times must be ascending"));
    }
    let side = axis.cells + 1;
    let h = axis.h();
    let nodes = axis.nodes();
    let mut u = Vec::with_capacity(side * side);
    for &x in &nodes {
        for &y in &nodes {
            u.push(u0(x, y));
        }
    }
    let mut next = vec![0.0; side * side];
    let dt_max = cfl * h / (alpha.0 + alpha.1);
    let mut t = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        while t < target {
            let dt = dt_max.min(target - t);
            let src = &u;
            exec.for_each_chunk_mut(&mut next, side, |i, row| {
                lf_row(&hamiltonian, alpha, src, side, i, h, dt, row)
            });
            std::mem::swap(&mut u, &mut next);
            t = if dt == target - t { target } else { t + dt };
        }
        out.push(Field2D {
            axis,
            t: target,
            values: u.clone(),
        });
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
#[inline]
fn lf_row<H: Fn(f64, f64) -> f64>(
    ham: &H,
    alpha: (f64, f64),
    u: &[f64],
    side: usize,
    i: usize,
    h: f64,
    dt: f64,
    row: &mut [f64],
) {
    let at = |a: isize, b: isize| -> f64 {
        // Linear extrapolation one node beyond the boundary.
        let s = side as isize;
        let (ca, cb) = (a.clamp(0, s - 1), b.clamp(0, s - 1));
        let base = u[ca as usize * side + cb as usize];
        if ca == a && cb == b {
            return base;
        }
        let (ia, ib) = (ca - (a - ca), cb - (b - cb));
        2.0 * base - u[ia as usize * side + ib as usize]
    };
    let ii = i as isize;
    let inv = 1.0 / h;
    for (j, out) in row.iter_mut().enumerate() {
        let jj = j as isize;
        let c = u[i * side + j];
        let (xm, xp, ym, yp) = if i > 0 && i + 1 < side && j > 0 && j + 1 < side {
            (
                u[(i - 1) * side + j],
                u[(i + 1) * side + j],
                u[i * side + j - 1],
                u[i * side + j + 1],
            )
        } else {
            (at(ii - 1, jj), at(ii + 1, jj), at(ii, jj - 1), at(ii, jj + 1))
        };
        let (px_m, px_p) = ((c - xm) * inv, (xp - c) * inv);
        let (py_m, py_p) = ((c - ym) * inv, (yp - c) * inv);
        let num = ham(0.5 * (px_m + px_p), 0.5 * (py_m + py_p))
            - 0.5 * alpha.0 * (px_p - px_m)
            - 0.5 * alpha.1 * (py_p - py_m);
        *out = c - dt * num;
    }
}

/// Box `∏ [x_lo_k, x_hi_k] × [t_lo, t_hi]` sampled with `nodes` points per axis.
#[derive(Debug, Clone, PartialEq)]
pub struct XtBox {
    pub x_lo: Vec<f64>,
    pub x_hi: Vec<f64>,
    pub t_lo: f64,
    pub t_hi: f64,
    pub nodes: usize,
}

impl XtBox {
    pub fn new(x_lo: Vec<f64>, x_hi: Vec<f64>, t_lo: f64, t_hi: f64, nodes: usize) -> Result<Self> {
        if x_lo.len() != x_hi.len() || x_lo.is_empty() {
            return Err(HjError::invalid("box bounds must share a nonzero dimension"));
        }
        if x_lo.iter().chain(&x_hi).chain([&t_lo, &t_hi]).any(|v| !v.is_finite()) {
            return Err(HjError::NonFinite("box bounds"));
        }
        if x_lo.iter().zip(&x_hi).any(|(a, b)| a > b) || t_lo > t_hi {
            return Err(HjError::invalid("box bounds must satisfy lo <= hi"));
        }
        if nodes < 2 {
            return Err(HjError::invalid("box needs at least 2 nodes per axis"));
        }
        Ok(XtBox {
            x_lo,
            x_hi,
            t_lo,
            t_hi,
            nodes,
        })
    }

    pub fn dim(&self) -> usize {
        self.x_lo.len()
    }

    fn len(&self) -> usize {
        self.nodes.pow(self.dim() as u32 + 1)
    }

    /// Node `k` as `(x, t)`; time is the slowest axis.
    fn node(&self, mut k: usize) -> (Vec<f64>, f64) {
        let frac = |i: usize| i as f64 / (self.nodes - 1) as f64;
        let mut x = vec![0.0; self.dim()];
        for d in (0..self.dim()).rev() {
            let i = k % self.nodes;
            k /= self.nodes;
            x[d] = self.x_lo[d] + frac(i) * (self.x_hi[d] - self.x_lo[d]);
        }
        (x, self.t_lo + frac(k) * (self.t_hi - self.t_lo))
    }
}

/// Smallest accepted finite-difference step.
pub const MIN_FD_STEP: f64 = 1e-7;

fn check_viscous(params: &NetworkParams, bx: &XtBox, epsilon: f64, h: f64) -> Result<()> {
    if bx.dim() != params.dim() {
        return Err(HjError::DimensionMismatch {
            expected: params.dim(),
            got: bx.dim(),
        });
    }
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(HjError::invalid("epsilon must be positive"));
    }
    if !(h >= MIN_FD_STEP) || !h.is_finite() {
        return Err(HjError::invalid(format!(
            "finite-difference step must be at least {MIN_FD_STEP}"
        )));
    }
    for i in 0..params.len() {
        let half_sq = 0.5 * params.p(i).iter().map(|v| v * v).sum::<f64>();
        if (params.theta(i) + half_sq).abs() > 1e-12 {
            return Err(HjError::Precondition(format!(
                "theta_{i} = {} differs from -|p_{i}|^2/2 = {}",
                params.theta(i),
                -half_sq
            )));
        }
    }
    Ok(())
}

/// Central differences of `g` at `(x, t)`: `(g_t, ∇g, Δg)`.
fn central<G: Fn(&[f64], f64) -> f64>(g: &G, x: &[f64], t: f64, h: f64) -> (f64, Vec<f64>, f64) {
    let g0 = g(x, t);
    let g_t = (g(x, t + h) - g(x, t - h)) / (2.0 * h);
    let mut grad = vec![0.0; x.len()];
    let mut lap = 0.0;
    let mut y = x.to_vec();
    for k in 0..x.len() {
        y[k] = x[k] + h;
        let up = g(&y, t);
        y[k] = x[k] - h;
        let down = g(&y, t);
        y[k] = x[k];
        grad[k] = (up - down) / (2.0 * h);
        lap += (up - 2.0 * g0 + down) / (h * h);
    }
    (g_t, grad, lap)
}

/// Max over box nodes of `|∂_t f_ε - ½‖∇f_ε‖² - (ε/2) Δf_ε|`, all derivatives
/// by second-order central differences with step `h`.
pub fn viscous_residual(
    params: &NetworkParams,
    bx: &XtBox,
    epsilon: f64,
    h: f64,
    exec: Exec,
) -> Result<f64> {
    Ok(viscous_residuals(params, bx, epsilon, h, exec)?
        .into_iter()
        .fold(0.0, f64::max))
}

/// Per-node residuals behind [`viscous_residual`], time-major.
pub fn viscous_residuals(
    params: &NetworkParams,
    bx: &XtBox,
    epsilon: f64,
    h: f64,
    exec: Exec,
) -> Result<Vec<f64>> {
    check_viscous(params, bx, epsilon, h)?;
    let g = |x: &[f64], t: f64| viscous_value(params, x, t, epsilon);
    Ok(exec.map_range(bx.len(), |k| {
        let (x, t) = bx.node(k);
        let (g_t, grad, lap) = central(&g, &x, t, h);
        let sq: f64 = grad.iter().map(|v| v * v).sum();
        (g_t - 0.5 * sq - 0.5 * epsilon * lap).abs()
    }))
}

/// Max over box nodes of `|∂_t w - (ε/2) Δw|` for `w = exp(f_ε / ε)`.
pub fn heat_residual(
    params: &NetworkParams,
    bx: &XtBox,
    epsilon: f64,
    h: f64,
    exec: Exec,
) -> Result<f64> {
    check_viscous(params, bx, epsilon, h)?;
    let g = |x: &[f64], t: f64| (viscous_value(params, x, t, epsilon) / epsilon).exp();
    Ok(exec.max_range(bx.len(), |k| {
        let (x, t) = bx.node(k);
        let (g_t, _, lap) = central(&g, &x, t, h);
        (g_t - 0.5 * epsilon * lap).abs()
    }))
}

/// `∫ |a - b|` over cells of width `h`.
pub fn l1_distance(a: &[f64], b: &[f64], h: f64) -> f64 {
    a.iter().zip(b).map(|(u, v)| (u - v).abs()).sum::<f64>() * h
}

/// `Σ_i |u_{i+1} - u_i|`.
pub fn total_variation(u: &[f64]) -> f64 {
    u.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
}

/// Error statistics of a network against one of the oracles.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub max_abs_err: f64,
    pub mean_abs_err: f64,
    pub bound: f64,
    pub pass: bool,
    pub samples: usize,
}

/// Compares `evaluate` with the Hopf maximum over a p-lattice of spacing
/// `step` covering the bounding box of the slopes, with `H̃` the minimal
/// Hamiltonian (piecewise-linear interpolation in 1D, the LP otherwise).
///
/// Probes are `x ~ N(0, I)`, `t ~ U[0, t_max]`; the bound is
/// `(max ‖x‖₁ + Lip(H̃) + Lip(J*)) * step * (1 + t_max)`.
pub fn hopf_compare(
    params: &NetworkParams,
    step: f64,
    probes: usize,
    t_max: f64,
    seed: u64,
    exec: Exec,
) -> Result<Comparison> {
    if probes == 0 || !(t_max >= 0.0) || !t_max.is_finite() {
        return Err(HjError::invalid("need probes >= 1 and finite t_max >= 0"));
    }
    let n = params.dim();
    let mut lo = vec![f64::INFINITY; n];
    let mut hi = vec![f64::NEG_INFINITY; n];
    for i in 0..params.len() {
        for (k, &v) in params.p(i).iter().enumerate() {
            lo[k] = lo[k].min(v);
            hi[k] = hi[k].max(v);
        }
    }
    let lattice = Lattice::covering(&lo, &hi, step)?;
    let interp = if n == 1 {
        EntropyNet1D::new(params, TieRule::LowestIndex).ok()
    } else {
        None
    };
    let table = match &interp {
        Some(net) => HopfTable::build(
            &lattice,
            |p| {
                let h = net.minimal_hamiltonian(p[0]).finite();
                Ok(legendre_j_star(params, p)?.finite().zip(h))
            },
            exec,
        )?,
        None => HopfTable::build(&lattice, |p| conjugate_and_hamiltonian(params, p), exec)?,
    };

    let mut rng = stream(seed, Stream::Probes);
    let points: Vec<(Vec<f64>, f64)> = (0..probes)
        .map(|_| {
            let x: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
            (x, rng.random_range(0.0..=t_max))
        })
        .collect();
    let errs = exec.map(&points, |(x, t)| (params.value(x, *t) - table.value(x, *t)).abs());
    let max_l1 = points
        .iter()
        .map(|(x, _)| x.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let (lip_h, lip_j) = table.lipschitz();
    let bound = (max_l1 + lip_h + lip_j) * step * (1.0 + t_max);
    Ok(summarize_errors(&errs, bound))
}

fn summarize_errors(errs: &[f64], bound: f64) -> Comparison {
    let max_abs_err = errs.iter().copied().fold(0.0, f64::max);
    Comparison {
        max_abs_err,
        mean_abs_err: errs.iter().sum::<f64>() / errs.len().max(1) as f64,
        bound,
        pass: max_abs_err <= bound,
        samples: errs.len(),
    }
}

/// Entropy-solution profile against Lax–Friedrichs at cell centres.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConslawComparison {
    pub max_abs_err: f64,
    pub mean_abs_err: f64,
    pub l1_err: f64,
    /// `5 * sqrt(h)`; `pass` compares `l1_err` with it.
    pub bound: f64,
    pub pass: bool,
    pub cells: usize,
}

/// Runs Lax–Friedrichs from `u0 = J'` (the midpoint of the slope interval at
/// kinks) with the given flux and compares with `evaluate_entropy` at `t`.
pub fn conslaw_compare<F>(
    net: &EntropyNet1D,
    flux: F,
    t: f64,
    grid: Grid1D,
    cfl: f64,
) -> Result<ConslawComparison>
where
    F: Fn(f64) -> f64,
{
    let u0 = |x: f64| match net.initial_gradient(x) {
        GradientValue::Point(v) => v,
        GradientValue::Interval(a, b) => 0.5 * (a + b),
    };
    let numeric = lax_friedrichs(flux, u0, grid, t, cfl)?;
    let exact = net.profile(&grid.centers(), t)?;
    let errs: Vec<f64> = numeric.iter().zip(&exact).map(|(a, b)| (a - b).abs()).collect();
    let l1_err = l1_distance(&numeric, &exact, grid.h());
    let bound = 5.0 * grid.h().sqrt();
    let s = summarize_errors(&errs, bound);
    Ok(ConslawComparison {
        max_abs_err: s.max_abs_err,
        mean_abs_err: s.mean_abs_err,
        l1_err,
        bound,
        pass: l1_err <= bound,
        cells: grid.cells,
    })
}
