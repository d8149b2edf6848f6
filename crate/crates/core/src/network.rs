//! Exact evaluation of the max-of-affine network and its relatives.
//!
//! Parameters live in one flat row-major buffer: neuron `i` occupies
//! `data[i*(n+2) .. (i+1)*(n+2)]` laid out as `[p_i (n entries), theta_i, gamma_i]`.
//! Scans are a single linear pass, which keeps `m = 2^16` neurons cheap.

use serde::{Deserialize, Serialize};

use crate::error::{HjError, Result};
use crate::par::Exec;

/// Relative tolerance used when deciding that two affine pieces tie.
pub const DEFAULT_TIE_REL: f64 = 1e-9;

/// Absolute tie tolerance at a point whose maximal affine value is `max`.
pub fn tie_tolerance(max: f64) -> f64 {
    DEFAULT_TIE_REL * (1.0 + max.abs())
}

/// One neuron `(p, theta, gamma)` in owned form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Neuron {
    pub p: Vec<f64>,
    pub theta: f64,
    pub gamma: f64,
}

impl Neuron {
    pub fn new(p: Vec<f64>, theta: f64, gamma: f64) -> Self {
        Neuron { p, theta, gamma }
    }
}

/// Parameters `{(p_i, theta_i, gamma_i)}` of the network. Immutable once built.
///
/// Distinctness of the `p_i` is deliberately not enforced here; use
/// [`crate::convex::check_assumptions`] for that.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkParams {
    n: usize,
    m: usize,
    data: Vec<f64>,
}

impl NetworkParams {
    pub fn new(n: usize, neurons: &[Neuron]) -> Result<Self> {
        if n == 0 {
            return Err(HjError::invalid("spatial dimension must be positive"));
        }
        let mut data = Vec::with_capacity(neurons.len() * (n + 2));
        for nr in neurons {
            if nr.p.len() != n {
                return Err(HjError::DimensionMismatch {
                    expected: n,
                    got: nr.p.len(),
                });
            }
            data.extend_from_slice(&nr.p);
            data.push(nr.theta);
            data.push(nr.gamma);
        }
        Self::from_flat(n, data)
    }

    /// Builds from the flat `[p, theta, gamma]*` layout.
    pub fn from_flat(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(HjError::invalid("spatial dimension must be positive"));
        }
        let stride = n + 2;
        if data.is_empty() || !data.len().is_multiple_of(stride) {
            return Err(HjError::invalid(format!(
                "parameter buffer of length {} is not a positive multiple of n+2 = {stride}",
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(HjError::NonFinite("network parameters"));
        }
        Ok(NetworkParams {
            n,
            m: data.len() / stride,
            data,
        })
    }

    /// Spatial dimension `n`.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Neuron count `m`.
    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn stride(&self) -> usize {
        self.n + 2
    }

    pub fn p(&self, i: usize) -> &[f64] {
        let s = self.stride();
        &self.data[i * s..i * s + self.n]
    }

    pub fn theta(&self, i: usize) -> f64 {
        self.data[i * self.stride() + self.n]
    }

    pub fn gamma(&self, i: usize) -> f64 {
        self.data[i * self.stride() + self.n + 1]
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    pub fn into_flat(self) -> Vec<f64> {
        self.data
    }

    pub fn neuron(&self, i: usize) -> Neuron {
        Neuron::new(self.p(i).to_vec(), self.theta(i), self.gamma(i))
    }

    pub fn neurons(&self) -> Vec<Neuron> {
        (0..self.m).map(|i| self.neuron(i)).collect()
    }

    /// Keeps the listed neurons, in the given order.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let s = self.stride();
        let mut data = Vec::with_capacity(indices.len() * s);
        for &i in indices {
            if i >= self.m {
                return Err(HjError::invalid(format!("neuron index {i} out of range")));
            }
            data.extend_from_slice(&self.data[i * s..(i + 1) * s]);
        }
        Self::from_flat(self.n, data)
    }

    /// Neuron order sorted lexicographically on `p`, ties broken by theta then gamma.
    pub fn canonical_order(&self) -> Vec<usize> {
        let s = self.stride();
        let mut idx: Vec<usize> = (0..self.m).collect();
        idx.sort_by(|&a, &b| {
            let ra = &self.data[a * s..(a + 1) * s];
            let rb = &self.data[b * s..(b + 1) * s];
            ra.iter()
                .zip(rb)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        idx
    }

    pub fn sorted(&self) -> Self {
        self.select(&self.canonical_order())
            .expect("canonical order indices are in range")
    }

    /// Value of the i-th affine piece. No validation.
    #[inline]
    pub fn affine(&self, i: usize, x: &[f64], t: f64) -> f64 {
        let row = &self.data[i * self.stride()..(i + 1) * self.stride()];
        affine_row(row, self.n, x, t)
    }

    /// Maximum over neurons plus the lowest index attaining it exactly. No validation.
    #[inline]
    pub fn max_with_index(&self, x: &[f64], t: f64) -> (f64, usize) {
        let mut best = f64::NEG_INFINITY;
        let mut arg = 0;
        for (i, row) in self.data.chunks_exact(self.stride()).enumerate() {
            let v = affine_row(row, self.n, x, t);
            if v > best {
                best = v;
                arg = i;
            }
        }
        (best, arg)
    }

    /// Network value with no input validation.
    #[inline]
    pub fn value(&self, x: &[f64], t: f64) -> f64 {
        self.data
            .chunks_exact(self.stride())
            .map(|row| affine_row(row, self.n, x, t))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn check_x(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n {
            return Err(HjError::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(HjError::NonFinite("x"));
        }
        Ok(())
    }
}

#[inline]
fn affine_row(row: &[f64], n: usize, x: &[f64], t: f64) -> f64 {
    let dot: f64 = row[..n].iter().zip(x).map(|(a, b)| a * b).sum();
    dot - t * row[n] - row[n + 1]
}

fn check_time(t: f64) -> Result<()> {
    if !t.is_finite() {
        return Err(HjError::NonFinite("t"));
    }
    if t < 0.0 {
        return Err(HjError::NegativeTime(t));
    }
    Ok(())
}

/// A space-time query `(x, t)` with `t >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryPoint {
    pub x: Vec<f64>,
    pub t: f64,
}

impl QueryPoint {
    pub fn new(x: Vec<f64>, t: f64) -> Result<Self> {
        check_time(t)?;
        if x.iter().any(|v| !v.is_finite()) {
            return Err(HjError::NonFinite("x"));
        }
        Ok(QueryPoint { x, t })
    }
}

/// How to pick one maximizer when several tie.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieRule {
    #[default]
    LowestIndex,
    HighestIndex,
}

impl TieRule {
    /// Picks from a nonempty ascending index set.
    pub fn pick(self, set: &[usize]) -> usize {
        match self {
            TieRule::LowestIndex => set[0],
            TieRule::HighestIndex => set[set.len() - 1],
        }
    }
}

/// Spatial subdifferential at a point: the slopes of all maximizing pieces.
/// The subdifferential itself is their convex hull.
#[derive(Debug, Clone, PartialEq)]
pub struct Subdifferential {
    pub indices: Vec<usize>,
    pub generators: Vec<Vec<f64>>,
}

impl Subdifferential {
    pub fn is_differentiable(&self) -> bool {
        self.indices.len() == 1
    }

    pub fn gradient(&self) -> Option<&[f64]> {
        if self.is_differentiable() {
            Some(&self.generators[0])
        } else {
            None
        }
    }
}

fn validate(params: &NetworkParams, q: &QueryPoint) -> Result<()> {
    params.check_x(&q.x)?;
    check_time(q.t)
}

/// `max_i <p_i, x> - t theta_i - gamma_i`.
pub fn evaluate(params: &NetworkParams, q: &QueryPoint) -> Result<f64> {
    validate(params, q)?;
    Ok(params.value(&q.x, q.t))
}

/// Evaluates many points, in input order.
pub fn evaluate_batch(params: &NetworkParams, qs: &[QueryPoint], exec: Exec) -> Result<Vec<f64>> {
    for q in qs {
        validate(params, q)?;
    }
    Ok(exec.map(qs, |q| params.value(&q.x, q.t)))
}

/// Initial data `J(x) = f(x, 0)`.
pub fn initial_value(params: &NetworkParams, x: &[f64]) -> Result<f64> {
    params.check_x(x)?;
    Ok(params.value(x, 0.0))
}

/// Indices whose affine value is within `tol` of the maximum, ascending.
pub fn argmax_set(params: &NetworkParams, q: &QueryPoint, tol: f64) -> Result<Vec<usize>> {
    validate(params, q)?;
    if !(tol >= 0.0) || !tol.is_finite() {
        return Err(HjError::invalid("tolerance must be finite and nonnegative"));
    }
    Ok(argmax_unchecked(params, &q.x, q.t, Some(tol)))
}

/// [`argmax_set`] with the default relative tie tolerance.
pub fn argmax_set_default(params: &NetworkParams, q: &QueryPoint) -> Result<Vec<usize>> {
    validate(params, q)?;
    Ok(argmax_unchecked(params, &q.x, q.t, None))
}

pub(crate) fn argmax_unchecked(
    params: &NetworkParams,
    x: &[f64],
    t: f64,
    tol: Option<f64>,
) -> Vec<usize> {
    let values: Vec<f64> = (0..params.len()).map(|i| params.affine(i, x, t)).collect();
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tol = tol.unwrap_or_else(|| tie_tolerance(max));
    values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v >= max - tol)
        .map(|(i, _)| i)
        .collect()
}

/// Generators of `∂_x f(x, t)`.
pub fn spatial_subdifferential(
    params: &NetworkParams,
    q: &QueryPoint,
    tol: f64,
) -> Result<Subdifferential> {
    let indices = argmax_set(params, q, tol)?;
    let generators = indices.iter().map(|&i| params.p(i).to_vec()).collect();
    Ok(Subdifferential {
        indices,
        generators,
    })
}

/// Smooth variant `eps * log sum_i exp(a_i / eps)`, evaluated as
/// `a_max + eps * log sum_i exp((a_i - a_max) / eps)`.
pub fn evaluate_viscous(params: &NetworkParams, q: &QueryPoint, epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(HjError::invalid("epsilon must be positive"));
    }
    validate(params, q)?;
    Ok(viscous_value(params, &q.x, q.t, epsilon))
}

pub(crate) fn viscous_value(params: &NetworkParams, x: &[f64], t: f64, epsilon: f64) -> f64 {
    let max = params.value(x, t);
    let sum: f64 = (0..params.len())
        .map(|i| ((params.affine(i, x, t) - max) / epsilon).exp())
        .sum();
    max + epsilon * sum.ln()
}

/// Neuron with one time coefficient per time axis.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiTimeNeuron {
    pub p: Vec<f64>,
    pub thetas: Vec<f64>,
    pub gamma: f64,
}

/// Multi-time network `max_i { <p_i, x> - sum_j t_j theta_ij - gamma_i }`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiTimeParams {
    n: usize,
    n_times: usize,
    neurons: Vec<MultiTimeNeuron>,
}

impl MultiTimeParams {
    pub fn new(n: usize, n_times: usize, neurons: Vec<MultiTimeNeuron>) -> Result<Self> {
        if n == 0 || n_times == 0 || neurons.is_empty() {
            return Err(HjError::invalid(
                "multi-time network needs n >= 1, N >= 1 and at least one neuron",
            ));
        }
        for nr in &neurons {
            if nr.p.len() != n {
                return Err(HjError::DimensionMismatch {
                    expected: n,
                    got: nr.p.len(),
                });
            }
            if nr.thetas.len() != n_times {
                return Err(HjError::DimensionMismatch {
                    expected: n_times,
                    got: nr.thetas.len(),
                });
            }
            let finite = nr.p.iter().chain(&nr.thetas).all(|v| v.is_finite());
            if !finite || !nr.gamma.is_finite() {
                return Err(HjError::NonFinite("network parameters"));
            }
        }
        Ok(MultiTimeParams {
            n,
            n_times,
            neurons,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn n_times(&self) -> usize {
        self.n_times
    }
}

impl From<&NetworkParams> for MultiTimeParams {
    fn from(p: &NetworkParams) -> Self {
        MultiTimeParams {
            n: p.dim(),
            n_times: 1,
            neurons: (0..p.len())
                .map(|i| MultiTimeNeuron {
                    p: p.p(i).to_vec(),
                    thetas: vec![p.theta(i)],
                    gamma: p.gamma(i),
                })
                .collect(),
        }
    }
}

pub fn evaluate_multitime(params: &MultiTimeParams, x: &[f64], times: &[f64]) -> Result<f64> {
    if x.len() != params.n {
        return Err(HjError::DimensionMismatch {
            expected: params.n,
            got: x.len(),
        });
    }
    if times.len() != params.n_times {
        return Err(HjError::DimensionMismatch {
            expected: params.n_times,
            got: times.len(),
        });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(HjError::NonFinite("x"));
    }
    for &t in times {
        check_time(t)?;
    }
    Ok(params
        .neurons
        .iter()
        .map(|nr| {
            let dot: f64 = nr.p.iter().zip(x).map(|(a, b)| a * b).sum();
            let time: f64 = nr.thetas.iter().zip(times).map(|(a, b)| a * b).sum();
            dot - time - nr.gamma
        })
        .fold(f64::NEG_INFINITY, f64::max))
}

/// One Lax–Oleinik step `u = x - t ∇H(p_j)` with `j` a maximizer picked by `tie`.
///
/// `grad_h(i)` must return `∇H(p_i)`; a `None` is reported as a missing entry.
pub fn lax_oleinik_step<F>(
    params: &NetworkParams,
    grad_h: F,
    q: &QueryPoint,
    tie: TieRule,
) -> Result<Vec<f64>>
where
    F: Fn(usize) -> Option<Vec<f64>>,
{
    let set = argmax_set_default(params, q)?;
    let j = tie.pick(&set);
    let g = grad_h(j).ok_or(HjError::MissingGradient(j))?;
    if g.len() != params.dim() {
        return Err(HjError::DimensionMismatch {
            expected: params.dim(),
            got: g.len(),
        });
    }
    Ok(q.x.iter().zip(&g).map(|(xi, gi)| xi - q.t * gi).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(x: &[f64], t: f64) -> QueryPoint {
        QueryPoint::new(x.to_vec(), t).unwrap()
    }

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
    fn example_cube_value() {
        let params = presets::l1_cube(2);
        let v = evaluate(&params, &q(&[0.5, -0.3], 2.0)).unwrap();
        assert!((v - 2.8).abs() < 1e-12);
        assert!((initial_value(&params, &[0.5, -0.3]).unwrap() - 0.8).abs() < 1e-12);
        assert_eq!(initial_value(&params, &[0.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn single_piece() {
        let params = one_d(&[2.0], &[3.0], &[1.0]);
        assert_eq!(evaluate(&params, &q(&[1.0], 2.0)).unwrap(), -5.0);
    }

    #[test]
    fn mixed_norm_initial_value() {
        let params = presets::mixed_norm(3);
        let v = initial_value(&params, &[1.0, 1.0, 0.0]).unwrap();
        assert!((v - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn random_matches_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let neurons: Vec<Neuron> = (0..20)
            .map(|_| {
                Neuron::new(
                    (0..3).map(|_| rng.random_range(-1.0..1.0)).collect(),
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                )
            })
            .collect();
        let params = NetworkParams::new(3, &neurons).unwrap();
        for _ in 0..100 {
            let x: Vec<f64> = (0..3).map(|_| rng.random_range(-3.0..3.0)).collect();
            let t = rng.random_range(0.0..3.0);
            let mut brute = f64::NEG_INFINITY;
            for nr in &neurons {
                let mut v = -t * nr.theta - nr.gamma;
                for k in 0..3 {
                    v += nr.p[k] * x[k];
                }
                if v > brute {
                    brute = v;
                }
            }
            assert!((evaluate(&params, &q(&x, t)).unwrap() - brute).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_queries() {
        let params = presets::l1_cube(2);
        assert!(matches!(
            QueryPoint::new(vec![0.0, 0.0], -1.0),
            Err(HjError::NegativeTime(_))
        ));
        assert!(matches!(
            evaluate(&params, &q(&[0.0], 1.0)),
            Err(HjError::DimensionMismatch { .. })
        ));
        let bad = QueryPoint {
            x: vec![f64::NAN, 0.0],
            t: 0.0,
        };
        assert!(matches!(evaluate(&params, &bad), Err(HjError::NonFinite(_))));
        let neg = QueryPoint {
            x: vec![0.0, 0.0],
            t: -0.5,
        };
        assert!(matches!(evaluate(&params, &neg), Err(HjError::NegativeTime(_))));
    }

    #[test]
    fn argmax_examples() {
        let params = presets::l1_cube(2);
        let set = argmax_set(&params, &q(&[0.5, -0.3], 0.0), 1e-12).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(params.p(set[0]), &[1.0, -1.0]);
        let all = argmax_set(&params, &q(&[0.0, 0.0], 0.0), 1e-12).unwrap();
        assert_eq!(all, vec![0, 1, 2, 3]);

        let two = one_d(&[-1.0, 1.0], &[-0.5, -0.5], &[0.0, 0.0]);
        assert_eq!(argmax_set(&two, &q(&[0.0], 1.0), 1e-12).unwrap(), vec![0, 1]);
        assert!(argmax_set(&two, &q(&[0.0], 1.0), -1.0).is_err());
    }

    #[test]
    fn subdifferential_examples() {
        let params = presets::l1_cube(2);
        let s = spatial_subdifferential(&params, &q(&[0.5, -0.3], 1.0), 1e-12).unwrap();
        assert_eq!(s.gradient(), Some(&[1.0, -1.0][..]));
        let s0 = spatial_subdifferential(&params, &q(&[0.0, 0.0], 1.0), 1e-12).unwrap();
        assert_eq!(s0.generators.len(), 4);
        assert!(!s0.is_differentiable());

        let riemann = presets::riemann();
        let s1 = spatial_subdifferential(&riemann, &q(&[0.5], 1.0), 1e-12).unwrap();
        assert_eq!(s1.generators, vec![vec![1.0]]);
    }

    #[test]
    fn viscous_examples() {
        let single = one_d(&[2.0], &[3.0], &[1.0]);
        for eps in [1e-3, 0.5, 10.0] {
            let v = evaluate_viscous(&single, &q(&[1.0], 2.0), eps).unwrap();
            assert!((v + 5.0).abs() < 1e-12);
        }
        let two = one_d(&[0.0, 1.0], &[0.0, -0.5], &[0.0, 0.0]);
        let v = evaluate_viscous(&two, &q(&[0.0], 0.0), 1.0).unwrap();
        assert!((v - std::f64::consts::LN_2).abs() < 1e-15);

        let cube = presets::l1_cube(2);
        let v = evaluate_viscous(&cube, &q(&[0.5, -0.3], 2.0), 1e-3).unwrap();
        assert!(v >= 2.8 - 1e-12 && v <= 2.8 + 1e-3 * 4f64.ln() + 1e-12);

        assert!(evaluate_viscous(&cube, &q(&[0.0, 0.0], 0.0), 0.0).is_err());
        // No overflow for tiny epsilon and large values.
        let v = evaluate_viscous(&cube, &q(&[1e6, 1e6], 0.0), 1e-12).unwrap();
        assert!(v.is_finite());
    }

    #[test]
    fn multitime_examples() {
        let cube = presets::l1_cube(2);
        let mt = MultiTimeParams::from(&cube);
        let x = [0.3, -1.2];
        assert_eq!(
            evaluate_multitime(&mt, &x, &[1.5]).unwrap(),
            evaluate(&cube, &q(&x, 1.5)).unwrap()
        );
        let mt2 = MultiTimeParams::new(
            1,
            2,
            vec![
                MultiTimeNeuron {
                    p: vec![0.0],
                    thetas: vec![0.0, 0.0],
                    gamma: 0.0,
                },
                MultiTimeNeuron {
                    p: vec![1.0],
                    thetas: vec![1.0, 2.0],
                    gamma: 0.0,
                },
            ],
        )
        .unwrap();
        assert_eq!(evaluate_multitime(&mt2, &[3.0], &[1.0, 1.0]).unwrap(), 0.0);
        assert_eq!(
            evaluate_multitime(&mt2, &[3.0], &[0.0, 0.0]).unwrap(),
            3.0
        );
        assert!(evaluate_multitime(&mt2, &[3.0], &[1.0]).is_err());
        assert!(evaluate_multitime(&mt2, &[3.0], &[1.0, -1.0]).is_err());
    }

    #[test]
    fn lax_oleinik_examples() {
        let params = one_d(&[-1.0, 1.0], &[0.5, 0.5], &[0.0, 0.0]);
        let grad = |i: usize| Some(vec![params.p(i)[0]]);
        let u = lax_oleinik_step(&params, grad, &q(&[2.0], 1.0), TieRule::LowestIndex).unwrap();
        assert_eq!(u, vec![1.0]);
        let u = lax_oleinik_step(&params, grad, &q(&[-2.0], 1.0), TieRule::LowestIndex).unwrap();
        assert_eq!(u, vec![-1.0]);
        let u = lax_oleinik_step(&params, grad, &q(&[0.7], 0.0), TieRule::LowestIndex).unwrap();
        assert_eq!(u, vec![0.7]);
        let missing = lax_oleinik_step(&params, |_| None, &q(&[2.0], 1.0), TieRule::LowestIndex);
        assert_eq!(missing, Err(HjError::MissingGradient(1)));
    }

    #[test]
    fn canonical_sort_is_lexicographic() {
        let params = one_d(&[1.0, -1.0, 0.0], &[0.0, 1.0, 2.0], &[0.0, 0.0, 0.0]);
        let s = params.sorted();
        assert_eq!(s.p(0), &[-1.0]);
        assert_eq!(s.theta(0), 1.0);
        assert_eq!(s.p(2), &[1.0]);
    }

    #[test]
    fn construction_errors() {
        assert!(NetworkParams::new(2, &[]).is_err());
        assert!(NetworkParams::new(2, &[Neuron::new(vec![1.0], 0.0, 0.0)]).is_err());
        assert!(NetworkParams::new(1, &[Neuron::new(vec![f64::INFINITY], 0.0, 0.0)]).is_err());
        // Duplicate slopes are allowed at construction.
        assert!(NetworkParams::new(
            1,
            &[
                Neuron::new(vec![1.0], 0.0, 0.0),
                Neuron::new(vec![1.0], 0.0, 0.0)
            ]
        )
        .is_ok());
    }
}
