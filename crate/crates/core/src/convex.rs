//! Convex-analysis constructions over the unit simplex: the conjugate `J*`,
//! the minimal Hamiltonian `H`, the structural assumptions (A1)–(A3),
//! redundant-neuron removal and the convex envelope `co F`.
//!
//! Every construction is a small LP in the mixing weights `alpha ∈ Λ_m`
//! (nonnegative, summing to one) with `Σ alpha_i p_i = p`.

use serde::Serialize;

use crate::error::{HjError, Result};
use crate::lp::{solve_lp, LpProblem, LpSolution};
use crate::network::NetworkParams;

/// A value in `R ∪ {+∞}`. Infinity is a tag, never an IEEE infinity in arithmetic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    PosInfinity,
}

impl ExtReal {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            ExtReal::PosInfinity => None,
        }
    }
}

/// Rows `Σ alpha = 1` and `Σ alpha_i p_i = p` over all neurons, plus the
/// caller's objective.
fn simplex_problem(params: &NetworkParams, p: &[f64], objective: Vec<f64>) -> LpProblem {
    let m = params.len();
    let n = params.dim();
    let mut a_eq = Vec::with_capacity(n + 1);
    a_eq.push(vec![1.0; m]);
    for k in 0..n {
        a_eq.push((0..m).map(|i| params.p(i)[k]).collect());
    }
    let mut b_eq = Vec::with_capacity(n + 1);
    b_eq.push(1.0);
    b_eq.extend_from_slice(p);
    LpProblem::nonnegative(objective, a_eq, b_eq)
}

fn check_p(params: &NetworkParams, p: &[f64]) -> Result<()> {
    if p.len() != params.dim() {
        return Err(HjError::DimensionMismatch {
            expected: params.dim(),
            got: p.len(),
        });
    }
    if p.iter().any(|v| !v.is_finite()) {
        return Err(HjError::NonFinite("p"));
    }
    Ok(())
}

fn gammas(params: &NetworkParams) -> Vec<f64> {
    (0..params.len()).map(|i| params.gamma(i)).collect()
}

fn thetas(params: &NetworkParams) -> Vec<f64> {
    (0..params.len()).map(|i| params.theta(i)).collect()
}

/// `J*(p) = min { Σ alpha_i gamma_i : alpha ∈ Λ_m, Σ alpha_i p_i = p }`, and the
/// minimizing weights; `None` when `p` lies outside `conv{p_i}`.
pub fn legendre_j_star_weights(params: &NetworkParams, p: &[f64]) -> Result<Option<(f64, Vec<f64>)>> {
    check_p(params, p)?;
    match solve_lp(&simplex_problem(params, p, gammas(params)))? {
        LpSolution::Optimal { value, point } => Ok(Some((value, point))),
        LpSolution::Infeasible => Ok(None),
        LpSolution::Unbounded => unreachable!("objective is bounded on the simplex"),
    }
}

/// Legendre–Fenchel transform of the initial data `J = f(·, 0)`.
pub fn legendre_j_star(params: &NetworkParams, p: &[f64]) -> Result<ExtReal> {
    Ok(match legendre_j_star_weights(params, p)? {
        Some((v, _)) => ExtReal::Finite(v),
        None => ExtReal::PosInfinity,
    })
}

/// Minimal Hamiltonian: the least `Σ alpha_i theta_i` over the weights that
/// attain `J*(p)`. Solved as a second LP after `J*(p)` is known.
pub fn hamiltonian_h(params: &NetworkParams, p: &[f64]) -> Result<ExtReal> {
    Ok(match conjugate_and_hamiltonian(params, p)? {
        Some((_, h)) => ExtReal::Finite(h),
        None => ExtReal::PosInfinity,
    })
}

/// `(J*(p), H(p))`, or `None` outside `conv{p_i}`.
pub fn conjugate_and_hamiltonian(params: &NetworkParams, p: &[f64]) -> Result<Option<(f64, f64)>> {
    let Some((j_star, alpha)) = legendre_j_star_weights(params, p)? else {
        return Ok(None);
    };
    // Σ alpha gamma >= J*(p) holds for every feasible alpha, so the optimal face
    // is cut out by the one-sided row Σ alpha gamma + s = J*(p) + slack.
    let mut lp = simplex_problem(params, p, thetas(params));
    for row in lp.a_eq.iter_mut() {
        row.push(0.0);
    }
    let mut face = gammas(params);
    face.push(1.0);
    lp.a_eq.push(face);
    lp.b_eq.push(j_star + 1e-13 * (1.0 + j_star.abs()));
    lp.c.push(0.0);
    lp.bounds.push((0.0, f64::INFINITY));
    let h = match solve_lp(&lp)? {
        LpSolution::Optimal { value, .. } => value,
        // Only reachable through round-off on the optimal face; fall back to
        // the J*-minimizer's own theta combination.
        _ => alpha.iter().zip(thetas(params)).map(|(a, t)| a * t).sum(),
    };
    Ok(Some((j_star, h)))
}

/// Convex envelope of `F(p, E) = J*(p)` if `E + H(p) <= 0` else `+∞`:
/// `min { Σ c_i gamma_i : c ∈ Λ_m, Σ c_i p_i = p, Σ c_i theta_i <= -E }`.
pub fn convex_envelope_f(params: &NetworkParams, p: &[f64], e_minus: f64) -> Result<ExtReal> {
    check_p(params, p)?;
    if !e_minus.is_finite() {
        return Err(HjError::NonFinite("E_minus"));
    }
    let mut lp = simplex_problem(params, p, gammas(params));
    for row in lp.a_eq.iter_mut() {
        row.push(0.0);
    }
    let mut cap = thetas(params);
    cap.push(1.0);
    lp.a_eq.push(cap);
    lp.b_eq.push(-e_minus);
    lp.c.push(0.0);
    lp.bounds.push((0.0, f64::INFINITY));
    Ok(match solve_lp(&lp)? {
        LpSolution::Optimal { value, .. } => ExtReal::Finite(value),
        _ => ExtReal::PosInfinity,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CombinationWitness {
    /// Neuron the combination targets.
    pub index: usize,
    /// Mixing weights over all neurons.
    pub alpha: Vec<f64>,
    /// LP value of the violated comparison (`Σ alpha gamma` for A2, `Σ alpha theta` for A3).
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssumptionReport {
    pub a1: bool,
    pub a1_witness: Option<(usize, usize)>,
    pub a2: bool,
    pub a2_witness: Option<CombinationWitness>,
    pub a3: bool,
    pub a3_witness: Option<CombinationWitness>,
}

impl AssumptionReport {
    pub fn all_pass(&self) -> bool {
        self.a1 && self.a2 && self.a3
    }
}

/// A combination of the other neurons matching `(p_j, gamma_j)` whose theta
/// average is not above `theta_j + tol`, if one exists.
pub fn a3_violation(params: &NetworkParams, j: usize, tol: f64) -> Result<Option<CombinationWitness>> {
    let mut lp = simplex_problem(params, params.p(j), thetas(params));
    lp.a_eq.push(gammas(params));
    lp.b_eq.push(params.gamma(j));
    lp.bounds[j] = (0.0, 0.0);
    Ok(match solve_lp(&lp)? {
        LpSolution::Optimal { value, point } if value <= params.theta(j) + tol => {
            Some(CombinationWitness {
                index: j,
                alpha: point,
                value,
            })
        }
        _ => None,
    })
}

/// Checks (A1) distinct slopes, (A2) convex interpolability of the gammas and
/// (A3) strict theta-superiority over matching combinations. The first
/// violation of each is reported as a witness.
pub fn check_assumptions(params: &NetworkParams, tol: f64) -> Result<AssumptionReport> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(HjError::invalid("tolerance must be positive"));
    }
    let m = params.len();

    let mut a1_witness = None;
    'outer: for i in 0..m {
        for j in i + 1..m {
            let d2: f64 = params
                .p(i)
                .iter()
                .zip(params.p(j))
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            if d2.sqrt() <= tol {
                a1_witness = Some((i, j));
                break 'outer;
            }
        }
    }

    let mut a2_witness = None;
    for i in 0..m {
        if let Some((value, alpha)) = legendre_j_star_weights(params, params.p(i))? {
            if value < params.gamma(i) - tol {
                a2_witness = Some(CombinationWitness {
                    index: i,
                    alpha,
                    value,
                });
                break;
            }
        }
    }

    let mut a3_witness = None;
    for j in 0..m {
        if let Some(w) = a3_violation(params, j, tol)? {
            a3_witness = Some(w);
            break;
        }
    }

    Ok(AssumptionReport {
        a1: a1_witness.is_none(),
        a1_witness,
        a2: a2_witness.is_none(),
        a2_witness,
        a3: a3_witness.is_none(),
        a3_witness,
    })
}

/// Repeatedly drops the lowest-index neuron that some matching combination
/// of the others dominates, until none is left. The network value is unchanged.
pub fn remove_redundant_neurons(params: &NetworkParams, tol: f64) -> Result<NetworkParams> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(HjError::invalid("tolerance must be positive"));
    }
    let mut keep: Vec<usize> = (0..params.len()).collect();
    let mut current = params.clone();
    loop {
        if current.len() == 1 {
            return Ok(current);
        }
        let mut removed = false;
        for j in 0..current.len() {
            if a3_violation(&current, j, tol)?.is_some() {
                keep.remove(j);
                current = params.select(&keep)?;
                removed = true;
                break;
            }
        }
        if !removed {
            return Ok(current);
        }
    }
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
    fn j_star_at_vertices_and_outside() {
        let cube = presets::l1_cube(2);
        for k in 0..4 {
            let v = legendre_j_star(&cube, cube.p(k)).unwrap().finite().unwrap();
            assert!(v.abs() < 1e-12);
        }
        assert_eq!(
            legendre_j_star(&cube, &[2.0, 0.0]).unwrap(),
            ExtReal::PosInfinity
        );
    }

    #[test]
    fn j_star_matches_grid_sup() {
        let params = one_d(&[-1.0, 1.0], &[0.0, 0.0], &[0.0, 0.0]);
        let lp = legendre_j_star(&params, &[0.25]).unwrap().finite().unwrap();
        let grid_sup = (0..=20_000)
            .map(|k| -10.0 + k as f64 * 1e-3)
            .map(|x| 0.25 * x - x.abs())
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((lp - grid_sup).abs() < 1e-12);
        assert_eq!(lp, 0.0);
    }

    #[test]
    fn hamiltonian_examples() {
        let cube = presets::l1_cube(3);
        for k in 0..8 {
            let h = hamiltonian_h(&cube, cube.p(k)).unwrap().finite().unwrap();
            assert!((h + 1.5).abs() < 1e-9);
        }
        let h0 = hamiltonian_h(&cube, &[0.0, 0.0, 0.0]).unwrap().finite().unwrap();
        assert!((h0 + 1.5).abs() < 1e-9);
        assert_eq!(
            hamiltonian_h(&cube, &[1.5, 0.0, 0.0]).unwrap(),
            ExtReal::PosInfinity
        );

        let riemann = presets::riemann();
        let h = hamiltonian_h(&riemann, &[0.3]).unwrap().finite().unwrap();
        let beta = [(1.0 - 0.3) / 2.0, (0.3 + 1.0) / 2.0];
        assert!((h - (beta[0] * -0.5 + beta[1] * -0.5)).abs() < 1e-9);
    }

    #[test]
    fn hamiltonian_picks_cheapest_optimal_combination() {
        // Middle neuron gamma is on the chord, so both the vertex and the
        // chord combination attain J*; H takes the smaller theta.
        let params = one_d(&[-1.0, 0.0, 1.0], &[-1.0, -2.0, -1.0], &[0.0, 0.0, 0.0]);
        let h = hamiltonian_h(&params, &[0.0]).unwrap().finite().unwrap();
        assert!((h + 2.0).abs() < 1e-9);
        let h = hamiltonian_h(&params, &[0.5]).unwrap().finite().unwrap();
        assert!((h + 1.5).abs() < 1e-9);
    }

    #[test]
    fn assumption_examples() {
        assert!(check_assumptions(&presets::l1_cube(2), 1e-9)
            .unwrap()
            .all_pass());

        let good = one_d(&[-1.0, 0.0, 1.0], &[-1.0, -2.0, -1.0], &[0.0, 0.0, 0.0]);
        let r = check_assumptions(&good, 1e-9).unwrap();
        assert!(r.all_pass());

        let bad = one_d(&[-1.0, 0.0, 1.0], &[-1.0, 0.0, -1.0], &[0.0, 0.0, 0.0]);
        let r = check_assumptions(&bad, 1e-9).unwrap();
        assert!(r.a1 && r.a2 && !r.a3);
        let w = r.a3_witness.unwrap();
        assert_eq!(w.index, 1);
        assert!((w.alpha[0] - 0.5).abs() < 1e-9 && w.alpha[1] == 0.0 && (w.alpha[2] - 0.5).abs() < 1e-9);
        assert!((w.value + 1.0).abs() < 1e-9);

        let dup = one_d(&[0.5, 0.5], &[0.0, 1.0], &[0.0, 0.0]);
        let r = check_assumptions(&dup, 1e-9).unwrap();
        assert!(!r.a1);
        assert_eq!(r.a1_witness, Some((0, 1)));

        // gamma not convexly interpolable: middle gamma above the chord is fine,
        // below it is not.
        let nonconvex = one_d(&[-1.0, 0.0, 1.0], &[0.0, 0.0, 0.0], &[0.0, 1.0, 0.0]);
        let r = check_assumptions(&nonconvex, 1e-9).unwrap();
        assert!(!r.a2);
        assert_eq!(r.a2_witness.as_ref().unwrap().index, 1);

        assert!(check_assumptions(&good, 0.0).is_err());
    }

    #[test]
    fn witnesses_satisfy_defining_equations() {
        let bad = one_d(&[-1.0, 0.0, 1.0], &[-1.0, 0.0, -1.0], &[0.0, 0.0, 0.0]);
        let w = check_assumptions(&bad, 1e-9).unwrap().a3_witness.unwrap();
        let sum: f64 = w.alpha.iter().sum();
        let p: f64 = w.alpha.iter().enumerate().map(|(i, a)| a * bad.p(i)[0]).sum();
        let g: f64 = w.alpha.iter().enumerate().map(|(i, a)| a * bad.gamma(i)).sum();
        assert!((sum - 1.0).abs() < 1e-8);
        assert!((p - bad.p(w.index)[0]).abs() < 1e-8);
        assert!((g - bad.gamma(w.index)).abs() < 1e-8);
        assert_eq!(w.alpha[w.index], 0.0);
    }

    #[test]
    fn redundant_removal() {
        let good = one_d(&[-1.0, 0.0, 1.0], &[-1.0, -2.0, -1.0], &[0.0, 0.0, 0.0]);
        assert_eq!(remove_redundant_neurons(&good, 1e-9).unwrap(), good);

        let bad = one_d(&[-1.0, 0.0, 1.0], &[-1.0, 0.0, -1.0], &[0.0, 0.0, 0.0]);
        let reduced = remove_redundant_neurons(&bad, 1e-9).unwrap();
        assert_eq!(reduced.len(), 2);
        assert_eq!(reduced.p(0), &[-1.0]);
        assert_eq!(reduced.p(1), &[1.0]);

        let cross = presets::cross_polytope(4);
        assert_eq!(remove_redundant_neurons(&cross, 1e-9).unwrap().len(), 8);
    }

    #[test]
    fn envelope_examples() {
        let riemann = presets::riemann();
        assert_eq!(
            convex_envelope_f(&riemann, &[0.0], 0.25).unwrap(),
            ExtReal::Finite(0.0)
        );
        assert_eq!(
            convex_envelope_f(&riemann, &[0.0], 0.75).unwrap(),
            ExtReal::PosInfinity
        );
        let cube = presets::l1_cube(2);
        for p in [[0.0, 0.0], [0.3, -0.7], [-0.9, 0.1]] {
            let h = hamiltonian_h(&cube, &p).unwrap().finite().unwrap();
            let co = convex_envelope_f(&cube, &p, -h).unwrap().finite().unwrap();
            let js = legendre_j_star(&cube, &p).unwrap().finite().unwrap();
            assert!((co - js).abs() < 1e-9);
        }
    }

    #[test]
    fn dimension_errors() {
        let cube = presets::l1_cube(2);
        assert!(legendre_j_star(&cube, &[0.0]).is_err());
        assert!(hamiltonian_h(&cube, &[0.0, 0.0, 0.0]).is_err());
        assert!(convex_envelope_f(&cube, &[0.0], 0.0).is_err());
    }
}
