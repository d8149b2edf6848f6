//! 1D conservation laws: `u = ∂_x f` as an argmax network, its shock lines,
//! and checks of the Rankine–Hugoniot and Oleinik conditions.

use serde::Serialize;

use crate::convex::{check_assumptions, ExtReal};
use crate::error::{HjError, Result};
use crate::network::{argmax_unchecked, NetworkParams, TieRule};

/// Tolerance for the assumption checks run before shock extraction.
pub const ASSUMPTION_TOL: f64 = 1e-9;
/// Tolerance of the Rankine–Hugoniot, Oleinik and Hamiltonian comparisons.
pub const CONDITION_TOL: f64 = 1e-8;
/// Grid spacing for the `H̃ >= H + C` comparison.
pub const HAMILTONIAN_GRID_STEP: f64 = 1e-3;

/// Argmax network in one space dimension, with neurons sorted by slope.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyNet1D {
    params: NetworkParams,
    tie: TieRule,
}

/// `∇J(x)`: a number where `J` is differentiable, the interval of slopes at a kink.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GradientValue {
    Point(f64),
    Interval(f64, f64),
}

/// A straight discontinuity `x = slope * t + intercept` between two neurons.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShockLine {
    pub left_index: usize,
    pub right_index: usize,
    pub slope: f64,
    pub intercept: f64,
    /// Times where both neurons are joint maximizers; the upper end may be infinite.
    pub t_range: (f64, f64),
}

impl ShockLine {
    pub fn position(&self, t: f64) -> f64 {
        self.slope * t + self.intercept
    }
}

impl EntropyNet1D {
    /// Sorts the neurons by slope. Fails on `n != 1` or repeated slopes.
    pub fn new(params: &NetworkParams, tie: TieRule) -> Result<Self> {
        if params.dim() != 1 {
            return Err(HjError::DimensionMismatch {
                expected: 1,
                got: params.dim(),
            });
        }
        let params = params.sorted();
        for i in 1..params.len() {
            if params.p(i)[0] <= params.p(i - 1)[0] {
                return Err(HjError::AssumptionViolated(format!(
                    "slopes must be pairwise distinct (repeated p = {})",
                    params.p(i)[0]
                )));
            }
        }
        Ok(EntropyNet1D { params, tie })
    }

    pub fn params(&self) -> &NetworkParams {
        &self.params
    }

    pub fn tie_rule(&self) -> TieRule {
        self.tie
    }

    pub fn slopes(&self) -> Vec<f64> {
        (0..self.params.len()).map(|i| self.params.p(i)[0]).collect()
    }

    /// `u(x, t) = p_j` for a maximizer `j` chosen by the tie rule.
    pub fn evaluate_entropy(&self, x: f64, t: f64) -> Result<f64> {
        if !x.is_finite() || !t.is_finite() {
            return Err(HjError::NonFinite("(x, t)"));
        }
        if t < 0.0 {
            return Err(HjError::NegativeTime(t));
        }
        let set = argmax_unchecked(&self.params, &[x], t, None);
        Ok(self.params.p(self.tie.pick(&set))[0])
    }

    /// Samples `u(·, t)` at the given positions.
    pub fn profile(&self, xs: &[f64], t: f64) -> Result<Vec<f64>> {
        xs.iter().map(|&x| self.evaluate_entropy(x, t)).collect()
    }

    /// Derivative of the initial data `J = f(·, 0)`.
    pub fn initial_gradient(&self, x: f64) -> GradientValue {
        let set = argmax_unchecked(&self.params, &[x], 0.0, None);
        let lo = self.params.p(set[0])[0];
        let hi = self.params.p(set[set.len() - 1])[0];
        if set.len() == 1 {
            GradientValue::Point(lo)
        } else {
            GradientValue::Interval(lo, hi)
        }
    }

    /// Minimal Hamiltonian on `[p_1, p_m]`: the piecewise-linear interpolant of
    /// the points `(p_k, theta_k)`; `+∞` outside. Valid under (A1)–(A3).
    pub fn minimal_hamiltonian(&self, u: f64) -> ExtReal {
        let m = self.params.len();
        let p = |k: usize| self.params.p(k)[0];
        if u < p(0) || u > p(m - 1) || !u.is_finite() {
            return ExtReal::PosInfinity;
        }
        // First k with p_k >= u.
        let slopes = self.slopes();
        let k = slopes.partition_point(|&v| v < u);
        if slopes[k] == u {
            return ExtReal::Finite(self.params.theta(k));
        }
        let (lo, hi) = (k - 1, k);
        let beta_hi = (u - p(lo)) / (p(hi) - p(lo));
        let beta_lo = (p(hi) - u) / (p(hi) - p(lo));
        ExtReal::Finite(beta_lo * self.params.theta(lo) + beta_hi * self.params.theta(hi))
    }

    /// Every discontinuity curve of `u` for `t ∈ (0, t_max]`. Requires (A1)–(A3).
    pub fn shock_lines(&self, t_max: f64) -> Result<Vec<ShockLine>> {
        if !(t_max > 0.0) {
            return Err(HjError::invalid("t_max must be positive"));
        }
        let report = check_assumptions(&self.params, ASSUMPTION_TOL)?;
        if !report.all_pass() {
            return Err(HjError::AssumptionViolated(format!(
                "A1 = {}, A2 = {}, A3 = {}",
                report.a1, report.a2, report.a3
            )));
        }
        let m = self.params.len();
        let (p, th, ga) = (
            |i: usize| self.params.p(i)[0],
            |i: usize| self.params.theta(i),
            |i: usize| self.params.gamma(i),
        );
        let mut lines = Vec::new();
        for l in 0..m {
            for r in l + 1..m {
                let dp = p(r) - p(l);
                let slope = (th(r) - th(l)) / dp;
                let intercept = (ga(r) - ga(l)) / dp;
                // Along the line, neuron l must beat every k: a + b t >= 0.
                let (mut lo, mut hi) = (0.0f64, t_max);
                for k in (0..m).filter(|&k| k != l && k != r) {
                    let a = (p(l) - p(k)) * intercept - (ga(l) - ga(k));
                    let b = (p(l) - p(k)) * slope - (th(l) - th(k));
                    let slack = 1e-12 * (1.0 + a.abs());
                    if b.abs() <= 1e-14 {
                        if a < -slack {
                            hi = lo - 1.0;
                        }
                    } else if b > 0.0 {
                        lo = lo.max(-a / b);
                    } else {
                        hi = hi.min(-a / b);
                    }
                    if hi <= lo {
                        break;
                    }
                }
                if hi - lo > 1e-12 {
                    lines.push(ShockLine {
                        left_index: l,
                        right_index: r,
                        slope,
                        intercept,
                        t_range: (lo, hi),
                    });
                }
            }
        }
        Ok(lines)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShockCheck {
    pub line: ShockLine,
    pub u_minus: f64,
    pub u_plus: f64,
    /// `|slope - (H̃(u+) - H̃(u-)) / (u+ - u-)|`.
    pub rankine_hugoniot_gap: f64,
    /// Largest `chord(u0) - slope` over the sampled intermediate states.
    pub oleinik_excess: f64,
    pub rankine_hugoniot_ok: bool,
    pub oleinik_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyReport {
    pub assumptions_ok: bool,
    pub shocks: Vec<ShockCheck>,
    /// Largest `|H̃(p_i) - H(p_i) - C|`.
    pub node_gap: f64,
    pub nodes_ok: bool,
    /// Smallest `H̃(p) - H(p) - C` on the grid over `[p_1, p_m]`.
    pub grid_margin: f64,
    pub grid_ok: bool,
    pub pass: bool,
}

/// Checks that `u` is the entropy solution for flux `h_tilde` (shifted by `c`).
///
/// Failures are reported, never raised. If (A1)–(A3) fail the report says so
/// and no further checks run.
pub fn verify_entropy_conditions<F>(
    net: &EntropyNet1D,
    h_tilde: F,
    c: f64,
    u0_samples: usize,
) -> Result<EntropyReport>
where
    F: Fn(f64) -> f64,
{
    let empty = |assumptions_ok| EntropyReport {
        assumptions_ok,
        shocks: Vec::new(),
        node_gap: f64::NAN,
        nodes_ok: false,
        grid_margin: f64::NAN,
        grid_ok: false,
        pass: false,
    };
    let lines = match net.shock_lines(f64::INFINITY) {
        Ok(lines) => lines,
        Err(HjError::AssumptionViolated(_)) => return Ok(empty(false)),
        Err(e) => return Err(e),
    };

    let mut shocks = Vec::with_capacity(lines.len());
    for line in lines {
        let um = net.params.p(line.left_index)[0];
        let up = net.params.p(line.right_index)[0];
        let hp = h_tilde(up);
        let rh = (hp - h_tilde(um)) / (up - um);
        let rh_gap = (line.slope - rh).abs();
        let mut excess = f64::NEG_INFINITY;
        for k in 1..=u0_samples {
            let u0 = um + (up - um) * k as f64 / (u0_samples + 1) as f64;
            let chord = (hp - h_tilde(u0)) / (up - u0);
            excess = excess.max(chord - line.slope);
        }
        shocks.push(ShockCheck {
            u_minus: um,
            u_plus: up,
            rankine_hugoniot_gap: rh_gap,
            oleinik_excess: excess,
            rankine_hugoniot_ok: rh_gap <= CONDITION_TOL,
            oleinik_ok: excess <= CONDITION_TOL,
            line,
        });
    }

    let m = net.params.len();
    let node_gap = (0..m)
        .map(|i| (h_tilde(net.params.p(i)[0]) - net.params.theta(i) - c).abs())
        .fold(0.0, f64::max);

    let (p_lo, p_hi) = (net.params.p(0)[0], net.params.p(m - 1)[0]);
    let steps = ((p_hi - p_lo) / HAMILTONIAN_GRID_STEP).ceil() as usize;
    let mut grid_margin = f64::INFINITY;
    for k in 0..=steps {
        let p = (p_lo + k as f64 * HAMILTONIAN_GRID_STEP).min(p_hi);
        let h = net
            .minimal_hamiltonian(p)
            .finite()
            .expect("grid stays inside [p_1, p_m]");
        grid_margin = grid_margin.min(h_tilde(p) - h - c);
    }

    let nodes_ok = node_gap <= CONDITION_TOL;
    let grid_ok = grid_margin >= -CONDITION_TOL;
    let pass = nodes_ok
        && grid_ok
        && shocks
            .iter()
            .all(|s| s.rankine_hugoniot_ok && s.oleinik_ok);
    Ok(EntropyReport {
        assumptions_ok: true,
        shocks,
        node_gap,
        nodes_ok,
        grid_margin,
        grid_ok,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::Neuron;
    use crate::presets;

    fn one_d(ps: &[f64], thetas: &[f64], gammas: &[f64]) -> NetworkParams {
        let neurons: Vec<Neuron> = ps
            .iter()
            .zip(thetas)
            .zip(gammas)
            .map(|((&p, &th), &g)| Neuron::new(vec![p], th, g))
            .collect();
        NetworkParams::new(1, &neurons).unwrap()
    }

    #[test]
    fn riemann_values() {
        let net = EntropyNet1D::new(&presets::riemann(), TieRule::LowestIndex).unwrap();
        assert_eq!(net.evaluate_entropy(0.7, 1.0).unwrap(), 1.0);
        assert_eq!(net.evaluate_entropy(-0.7, 1.0).unwrap(), -1.0);
        // Tie at the shock: lowest index is the left state.
        assert_eq!(net.evaluate_entropy(0.0, 1.0).unwrap(), -1.0);
        let hi = EntropyNet1D::new(&presets::riemann(), TieRule::HighestIndex).unwrap();
        assert_eq!(hi.evaluate_entropy(0.0, 1.0).unwrap(), 1.0);
        assert!(net.evaluate_entropy(0.0, -1.0).is_err());
    }

    #[test]
    fn construction_sorts_and_rejects() {
        let unsorted = one_d(&[1.0, -1.0], &[-0.5, -0.5], &[0.0, 0.0]);
        let net = EntropyNet1D::new(&unsorted, TieRule::LowestIndex).unwrap();
        assert_eq!(net.slopes(), vec![-1.0, 1.0]);
        let dup = one_d(&[1.0, 1.0], &[0.0, 0.0], &[0.0, 0.0]);
        assert!(EntropyNet1D::new(&dup, TieRule::LowestIndex).is_err());
        assert!(EntropyNet1D::new(&presets::l1_cube(2), TieRule::LowestIndex).is_err());
    }

    #[test]
    fn single_neuron_is_constant() {
        let net = EntropyNet1D::new(&one_d(&[0.3], &[1.0], &[2.0]), TieRule::LowestIndex).unwrap();
        for x in [-5.0, 0.0, 7.0] {
            assert_eq!(net.evaluate_entropy(x, 2.0).unwrap(), 0.3);
        }
        assert!(net.shock_lines(1.0).unwrap().is_empty());
    }

    #[test]
    fn staircase_matches_initial_gradient() {
        let net = EntropyNet1D::new(
            &one_d(&[-1.0, 0.0, 1.0], &[0.0, 0.0, 0.0], &[0.0, 0.0, 0.0]),
            TieRule::LowestIndex,
        )
        .unwrap();
        for k in 0..200 {
            let x = -2.0 + 4.0 * (k as f64 + 0.5) / 200.0;
            let u = net.evaluate_entropy(x, 0.0).unwrap();
            match net.initial_gradient(x) {
                GradientValue::Point(g) => assert_eq!(u, g),
                GradientValue::Interval(lo, hi) => assert!(lo <= u && u <= hi),
            }
        }
    }

    #[test]
    fn initial_gradient_examples() {
        let net = EntropyNet1D::new(&presets::riemann(), TieRule::LowestIndex).unwrap();
        assert_eq!(net.initial_gradient(1.0), GradientValue::Point(1.0));
        assert_eq!(net.initial_gradient(0.0), GradientValue::Interval(-1.0, 1.0));
        let wide = EntropyNet1D::new(
            &one_d(&[-2.0, 0.5, 3.0], &[0.0, 0.0, 0.0], &[1.0, -1.0, 4.0]),
            TieRule::LowestIndex,
        )
        .unwrap();
        assert_eq!(wide.initial_gradient(1e3), GradientValue::Point(3.0));
        assert_eq!(wide.initial_gradient(-1e3), GradientValue::Point(-2.0));
    }

    #[test]
    fn shock_examples() {
        let net = EntropyNet1D::new(&presets::riemann(), TieRule::LowestIndex).unwrap();
        let lines = net.shock_lines(2.0).unwrap();
        assert_eq!(lines.len(), 1);
        assert_eq!(lines[0].slope, 0.0);
        assert_eq!(lines[0].intercept, 0.0);

        let moving = EntropyNet1D::new(
            &one_d(&[0.0, 1.0], &[0.0, 1.0], &[0.0, 0.0]),
            TieRule::LowestIndex,
        )
        .unwrap();
        let lines = moving.shock_lines(1.0).unwrap();
        assert_eq!(lines.len(), 1);
        assert_eq!((lines[0].slope, lines[0].intercept), (1.0, 0.0));

        let degenerate = EntropyNet1D::new(
            &one_d(&[-1.0, 0.0, 1.0], &[0.0, 0.0, 0.0], &[0.0, 0.0, 0.0]),
            TieRule::LowestIndex,
        )
        .unwrap();
        assert!(matches!(
            degenerate.shock_lines(1.0),
            Err(HjError::AssumptionViolated(_))
        ));
    }

    #[test]
    fn shocks_merge_over_time() {
        // Two shocks that collide at t = 1 and continue as one.
        let net = EntropyNet1D::new(
            &one_d(&[-1.0, 0.0, 1.0], &[-0.5, 0.0, -0.5], &[0.0, -0.5, 0.0]),
            TieRule::LowestIndex,
        )
        .unwrap();
        let lines = net.shock_lines(3.0).unwrap();
        assert_eq!(lines.len(), 3);
        for line in &lines {
            // Along each reported segment, both neurons tie and beat the third.
            let (lo, hi) = line.t_range;
            for s in [0.25, 0.5, 0.75] {
                let t = lo + s * (hi - lo);
                let x = line.position(t);
                let vals: Vec<f64> = (0..3).map(|i| net.params().affine(i, &[x], t)).collect();
                let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                assert!((vals[line.left_index] - max).abs() < 1e-9);
                assert!((vals[line.right_index] - max).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn minimal_hamiltonian_interpolates() {
        let net = EntropyNet1D::new(&presets::riemann(), TieRule::LowestIndex).unwrap();
        assert_eq!(net.minimal_hamiltonian(0.3), ExtReal::Finite(-0.5));
        assert_eq!(net.minimal_hamiltonian(1.5), ExtReal::PosInfinity);
    }

    #[test]
    fn entropy_condition_examples() {
        let net = EntropyNet1D::new(&presets::riemann(), TieRule::LowestIndex).unwrap();
        let r = verify_entropy_conditions(&net, |p| -p * p / 2.0, 0.0, 99).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.shocks[0].oleinik_excess <= 0.0);

        let r = verify_entropy_conditions(&net, |p| -p * p / 2.0 + 5.0, 5.0, 99).unwrap();
        assert!(r.pass);

        let r = verify_entropy_conditions(&net, |p| p * p / 2.0, 0.0, 99).unwrap();
        assert!(!r.pass);
        assert!(!r.nodes_ok);
        let r = verify_entropy_conditions(&net, |p| p * p / 2.0, 1.0, 99).unwrap();
        assert!(r.nodes_ok && !r.grid_ok && !r.pass);
    }

    #[test]
    fn entropy_report_flags_assumption_failure() {
        let net = EntropyNet1D::new(
            &one_d(&[-1.0, 0.0, 1.0], &[0.0, 0.0, 0.0], &[0.0, 0.0, 0.0]),
            TieRule::LowestIndex,
        )
        .unwrap();
        let r = verify_entropy_conditions(&net, |_| 0.0, 0.0, 10).unwrap();
        assert!(!r.assumptions_ok && !r.pass);
    }
}
