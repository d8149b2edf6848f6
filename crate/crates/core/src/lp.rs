//! Dense two-phase primal simplex.
//!
//! Problems here are tiny (a handful of equality rows, up to ~10^5 columns),
//! so a dense tableau with Bland's rule is enough and fully deterministic.

use crate::error::{HjError, Result};

/// Pivot elements smaller than this are treated as zero.
const PIVOT_TOL: f64 = 1e-9;
/// Reduced costs above `-COST_TOL` count as nonnegative.
const COST_TOL: f64 = 1e-10;
/// Phase-1 residual allowed before declaring infeasibility.
pub const FEASIBILITY_TOL: f64 = 1e-8;
/// Values this close to a bound are snapped onto it.
const CLAMP_TOL: f64 = 1e-8;

/// `min c·x  s.t.  A_eq x = b_eq,  lo <= x <= hi`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub c: Vec<f64>,
    pub a_eq: Vec<Vec<f64>>,
    pub b_eq: Vec<f64>,
    pub bounds: Vec<(f64, f64)>,
}

impl LpProblem {
    /// Nonnegative variables, no upper bounds.
    pub fn nonnegative(c: Vec<f64>, a_eq: Vec<Vec<f64>>, b_eq: Vec<f64>) -> Self {
        let bounds = vec![(0.0, f64::INFINITY); c.len()];
        LpProblem {
            c,
            a_eq,
            b_eq,
            bounds,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.c.len()
    }

    fn validate(&self) -> Result<()> {
        let nv = self.c.len();
        if nv > 100_000 {
            return Err(HjError::MalformedLp(format!("{nv} variables exceeds 10^5")));
        }
        if self.a_eq.len() != self.b_eq.len() {
            return Err(HjError::MalformedLp(format!(
                "{} constraint rows but {} right-hand sides",
                self.a_eq.len(),
                self.b_eq.len()
            )));
        }
        if self.bounds.len() != nv {
            return Err(HjError::MalformedLp(format!(
                "{} bounds for {nv} variables",
                self.bounds.len()
            )));
        }
        for (i, row) in self.a_eq.iter().enumerate() {
            if row.len() != nv {
                return Err(HjError::MalformedLp(format!(
                    "row {i} has {} entries, expected {nv}",
                    row.len()
                )));
            }
        }
        let finite = self
            .c
            .iter()
            .chain(self.b_eq.iter())
            .chain(self.a_eq.iter().flatten())
            .all(|v| v.is_finite());
        if !finite {
            return Err(HjError::NonFinite("linear program data"));
        }
        for &(lo, hi) in &self.bounds {
            if lo.is_nan() || hi.is_nan() || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
                return Err(HjError::MalformedLp(format!("bad bound [{lo}, {hi}]")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpSolution {
    Optimal { value: f64, point: Vec<f64> },
    Infeasible,
    Unbounded,
}

impl LpSolution {
    pub fn status(&self) -> LpStatus {
        match self {
            LpSolution::Optimal { .. } => LpStatus::Optimal,
            LpSolution::Infeasible => LpStatus::Infeasible,
            LpSolution::Unbounded => LpStatus::Unbounded,
        }
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            LpSolution::Optimal { value, .. } => Some(*value),
            _ => None,
        }
    }

    pub fn point(&self) -> Option<&[f64]> {
        match self {
            LpSolution::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }
}

/// How an original variable maps onto standard-form columns.
#[derive(Debug, Clone, Copy)]
enum VarMap {
    Fixed(f64),
    Shifted { col: usize, lo: f64 },
    Flipped { col: usize, hi: f64 },
    Split { pos: usize, neg: usize },
}

struct Tableau {
    rows: usize,
    cols: usize,
    width: usize,
    t: Vec<f64>,
    z: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.t[i * self.width + j]
    }

    #[inline]
    fn rhs(&self, i: usize) -> f64 {
        self.t[i * self.width + self.cols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width;
        let piv = self.t[r * w + c];
        {
            let row = &mut self.t[r * w..(r + 1) * w];
            for v in row.iter_mut() {
                *v /= piv;
            }
            row[c] = 1.0;
        }
        let (before, rest) = self.t.split_at_mut(r * w);
        let (prow, after) = rest.split_at_mut(w);
        for other in before.chunks_exact_mut(w).chain(after.chunks_exact_mut(w)) {
            let f = other[c];
            if f != 0.0 {
                for (o, p) in other.iter_mut().zip(prow.iter()) {
                    *o -= f * p;
                }
                other[c] = 0.0;
            }
        }
        let f = self.z[c];
        if f != 0.0 {
            for (o, p) in self.z.iter_mut().zip(prow.iter()) {
                *o -= f * p;
            }
            self.z[c] = 0.0;
        }
        self.basis[r] = c;
    }

    /// Runs Bland-rule iterations over columns `< allowed`.
    /// Returns `false` when the objective is unbounded below.
    fn optimize(&mut self, allowed: usize) -> Result<bool> {
        let limit = 50 * (self.rows + self.cols) + 1000;
        for _ in 0..limit {
            let Some(c) = (0..allowed).find(|&j| self.z[j] < -COST_TOL) else {
                return Ok(true);
            };
            let mut best: Option<(usize, f64)> = None;
            for i in 0..self.rows {
                let a = self.at(i, c);
                if a > PIVOT_TOL {
                    let ratio = self.rhs(i).max(0.0) / a;
                    best = match best {
                        None => Some((i, ratio)),
                        Some((bi, br)) => {
                            let tie = (ratio - br).abs() <= 1e-12 * (1.0 + br.abs());
                            if ratio < br && !tie || tie && self.basis[i] < self.basis[bi] {
                                Some((i, ratio))
                            } else {
                                Some((bi, br))
                            }
                        }
                    };
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return Ok(false),
            }
        }
        Err(HjError::MalformedLp(
            "simplex iteration limit exceeded".into(),
        ))
    }
}

/// Solves the program, returning a vertex optimum or an infeasible/unbounded status.
pub fn solve_lp(problem: &LpProblem) -> Result<LpSolution> {
    problem.validate()?;
    let nv = problem.num_vars();
    let m_eq = problem.a_eq.len();

    // Standard form: columns, right-hand side, costs.
    let mut maps = Vec::with_capacity(nv);
    let mut col_src: Vec<(usize, f64)> = Vec::new(); // (original var, sign)
    let mut upper_rows: Vec<(usize, f64)> = Vec::new(); // (column, width)
    let mut b: Vec<f64> = problem.b_eq.clone();
    for (j, &(lo, hi)) in problem.bounds.iter().enumerate() {
        if lo > hi {
            return Ok(LpSolution::Infeasible);
        }
        let shift = |b: &mut Vec<f64>, val: f64| {
            for (bi, row) in b.iter_mut().zip(&problem.a_eq) {
                *bi -= row[j] * val;
            }
        };
        if lo.is_finite() {
            if hi == lo {
                shift(&mut b, lo);
                maps.push(VarMap::Fixed(lo));
                continue;
            }
            shift(&mut b, lo);
            let col = col_src.len();
            col_src.push((j, 1.0));
            if hi.is_finite() {
                upper_rows.push((col, hi - lo));
            }
            maps.push(VarMap::Shifted { col, lo });
        } else if hi.is_finite() {
            shift(&mut b, hi);
            let col = col_src.len();
            col_src.push((j, -1.0));
            maps.push(VarMap::Flipped { col, hi });
        } else {
            let pos = col_src.len();
            col_src.push((j, 1.0));
            let neg = col_src.len();
            col_src.push((j, -1.0));
            maps.push(VarMap::Split { pos, neg });
        }
    }
    let n_struct = col_src.len();
    let n_slack = upper_rows.len();
    let rows = m_eq + n_slack;
    let cols = n_struct + n_slack + rows; // structural, slacks, artificials
    let width = cols + 1;
    let mut t = vec![0.0; rows * width];
    for i in 0..m_eq {
        let row = &mut t[i * width..(i + 1) * width];
        for (k, &(j, s)) in col_src.iter().enumerate() {
            row[k] = s * problem.a_eq[i][j];
        }
        row[cols] = b[i];
    }
    for (u, &(col, w)) in upper_rows.iter().enumerate() {
        let i = m_eq + u;
        let row = &mut t[i * width..(i + 1) * width];
        row[col] = 1.0;
        row[n_struct + u] = 1.0;
        row[cols] = w;
    }
    for i in 0..rows {
        let row = &mut t[i * width..(i + 1) * width];
        if row[cols] < 0.0 {
            for v in row[..n_struct + n_slack].iter_mut() {
                *v = -*v;
            }
            row[cols] = -row[cols];
        }
        row[n_struct + n_slack + i] = 1.0;
    }
    let art0 = n_struct + n_slack;
    let b_scale = 1.0 + (0..rows).map(|i| t[i * width + cols]).fold(0.0, f64::max);

    // Phase 1: minimize the sum of artificials.
    let mut z = vec![0.0; width];
    for i in 0..rows {
        for j in 0..art0 {
            z[j] -= t[i * width + j];
        }
        z[cols] -= t[i * width + cols];
    }
    let mut tab = Tableau {
        rows,
        cols,
        width,
        t,
        z,
        basis: (art0..art0 + rows).collect(),
    };
    tab.optimize(art0)?;
    if -tab.z[cols] > FEASIBILITY_TOL * b_scale {
        return Ok(LpSolution::Infeasible);
    }
    // Drive artificials out of the basis; rows where that is impossible are redundant.
    for i in 0..rows {
        if tab.basis[i] >= art0 {
            if let Some(j) = (0..art0).find(|&j| tab.at(i, j).abs() > PIVOT_TOL) {
                tab.pivot(i, j);
            }
        }
    }

    // Phase 2.
    let mut cost = vec![0.0; art0];
    for (k, &(j, s)) in col_src.iter().enumerate() {
        cost[k] = s * problem.c[j];
    }
    tab.z = vec![0.0; width];
    tab.z[..art0].copy_from_slice(&cost);
    for i in 0..rows {
        let bv = tab.basis[i];
        let cb = if bv < art0 { cost[bv] } else { 0.0 };
        if cb != 0.0 {
            for j in 0..width {
                tab.z[j] -= cb * tab.t[i * width + j];
            }
        }
    }
    if !tab.optimize(art0)? {
        return Ok(LpSolution::Unbounded);
    }

    let mut y = vec![0.0; art0];
    for i in 0..rows {
        let bv = tab.basis[i];
        if bv < art0 {
            let v = tab.rhs(i);
            y[bv] = if v < 0.0 && v > -CLAMP_TOL { 0.0 } else { v };
        }
    }
    let point: Vec<f64> = maps
        .iter()
        .zip(&problem.bounds)
        .map(|(map, &(lo, hi))| {
            let x = match *map {
                VarMap::Fixed(v) => v,
                VarMap::Shifted { col, lo } => lo + y[col],
                VarMap::Flipped { col, hi } => hi - y[col],
                VarMap::Split { pos, neg } => y[pos] - y[neg],
            };
            if x < lo && x > lo - CLAMP_TOL {
                lo
            } else if x > hi && x < hi + CLAMP_TOL {
                hi
            } else {
                x
            }
        })
        .collect();
    let value = problem.c.iter().zip(&point).map(|(c, x)| c * x).sum();
    Ok(LpSolution::Optimal { value, point })
}

/// Max-norm of `A x - b`.
pub fn residual(problem: &LpProblem, x: &[f64]) -> f64 {
    problem
        .a_eq
        .iter()
        .zip(&problem.b_eq)
        .map(|(row, b)| (row.iter().zip(x).map(|(a, v)| a * v).sum::<f64>() - b).abs())
        .fold(0.0, f64::max)
}
