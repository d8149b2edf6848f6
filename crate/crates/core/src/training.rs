//! Parameter recovery: sample `(x, t, S(x, t))` from a known solution, fit the
//! network by Adam on the mean-square loss, then read off the initial data,
//! the effective neurons and the error metrics.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{HjError, Result};
use crate::network::{argmax_unchecked, NetworkParams, TieRule};
use crate::par::Exec;
use crate::presets;
use crate::rng::{stream, Stream};

/// Samples per block in the deterministic loss and gradient reductions.
const BLOCK: usize = 256;
/// Size of the standard-normal test set for the `J̃` error.
pub const TEST_POINTS: usize = 2000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub m: usize,
    pub steps: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub adam_epsilon: f64,
    pub seed: u64,
    pub n_train: usize,
    pub init_scale: f64,
    pub record_every: usize,
    pub probes: usize,
    pub tie_rule: TieRule,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            m: 2,
            steps: 60_000,
            batch_size: 500,
            learning_rate: 1e-4,
            beta1: 0.5,
            beta2: 0.9,
            adam_epsilon: 1e-8,
            seed: 0,
            n_train: 20_000,
            init_scale: 1.0,
            record_every: 100,
            probes: 10_000,
            tie_rule: TieRule::LowestIndex,
        }
    }
}

impl TrainConfig {
    /// Zero steps is accepted and returns the initialization unchanged.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(HjError::invalid(msg));
        if self.m == 0 {
            return bad("m must be at least 1");
        }
        if self.batch_size == 0 || self.batch_size > self.n_train {
            return bad("batch_size must lie in [1, n_train]");
        }
        if !(self.learning_rate >= 0.0) || !self.learning_rate.is_finite() {
            return bad("learning_rate must be finite and nonnegative");
        }
        if !(0.0..1.0).contains(&self.beta1) || !(0.0..1.0).contains(&self.beta2) {
            return bad("beta1 and beta2 must lie in [0, 1)");
        }
        if !(self.adam_epsilon > 0.0) || !(self.init_scale >= 0.0) || !self.init_scale.is_finite() {
            return bad("adam_epsilon must be positive and init_scale finite and nonnegative");
        }
        if self.record_every == 0 || self.probes == 0 {
            return bad("record_every and probes must be at least 1");
        }
        Ok(())
    }
}

/// Samples `(x_j, t_j, s_j)` in flat storage.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    n: usize,
    xs: Vec<f64>,
    ts: Vec<f64>,
    ss: Vec<f64>,
}

impl Dataset {
    pub fn new(n: usize, xs: Vec<f64>, ts: Vec<f64>, ss: Vec<f64>) -> Result<Self> {
        if n == 0 || xs.len() != n * ts.len() || ts.len() != ss.len() {
            return Err(HjError::invalid("dataset arrays have inconsistent lengths"));
        }
        if xs.iter().chain(&ts).chain(&ss).any(|v| !v.is_finite()) {
            return Err(HjError::NonFinite("dataset"));
        }
        if let Some(&t) = ts.iter().find(|&&t| t < 0.0) {
            return Err(HjError::NegativeTime(t));
        }
        Ok(Dataset { n, xs, ts, ss })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.ts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ts.is_empty()
    }

    pub fn x(&self, j: usize) -> &[f64] {
        &self.xs[j * self.n..(j + 1) * self.n]
    }

    pub fn t(&self, j: usize) -> f64 {
        self.ts[j]
    }

    pub fn s(&self, j: usize) -> f64 {
        self.ss[j]
    }

    pub fn subset(&self, indices: &[usize]) -> Dataset {
        let mut xs = Vec::with_capacity(indices.len() * self.n);
        for &j in indices {
            xs.extend_from_slice(self.x(j));
        }
        Dataset {
            n: self.n,
            xs,
            ts: indices.iter().map(|&j| self.ts[j]).collect(),
            ss: indices.iter().map(|&j| self.ss[j]).collect(),
        }
    }
}

fn sample_inputs<R: Rng>(rng: &mut R, n: usize, count: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = Vec::with_capacity(n * count);
    let mut ts = Vec::with_capacity(count);
    for _ in 0..count {
        for _ in 0..n {
            xs.push(rng.sample::<f64, _>(StandardNormal));
        }
        ts.push(rng.sample::<f64, _>(StandardNormal).abs());
    }
    (xs, ts)
}

/// `x ~ N(0, I)`, `t = |N(0, 1)|`, `s = truth(x, t)`.
pub fn sample_dataset<F>(truth: F, n: usize, count: usize, seed: u64) -> Result<Dataset>
where
    F: Fn(&[f64], f64) -> f64,
{
    if count == 0 || n == 0 {
        return Err(HjError::invalid("count and n must be at least 1"));
    }
    let (xs, ts) = sample_inputs(&mut stream(seed, Stream::Data), n, count);
    let ss = (0..count).map(|j| truth(&xs[j * n..(j + 1) * n], ts[j])).collect();
    Dataset::new(n, xs, ts, ss)
}

fn check_data(params: &NetworkParams, data: &Dataset) -> Result<()> {
    if data.is_empty() {
        return Err(HjError::invalid("dataset is empty"));
    }
    if data.dim() != params.dim() {
        return Err(HjError::DimensionMismatch {
            expected: params.dim(),
            got: data.dim(),
        });
    }
    Ok(())
}

/// `(1/N) Σ_j (f(x_j, t_j) - s_j)²`.
pub fn loss(params: &NetworkParams, data: &Dataset) -> Result<f64> {
    loss_with(params, data, Exec::default())
}

pub fn loss_with(params: &NetworkParams, data: &Dataset, exec: Exec) -> Result<f64> {
    check_data(params, data)?;
    let sum = exec.block_sum(data.len(), BLOCK, |j| {
        let r = params.value(data.x(j), data.t(j)) - data.s(j);
        r * r
    });
    Ok(sum / data.len() as f64)
}

/// Neuron credited with sample `(x, t)`: an exact maximizer picked by `tie`.
fn chosen(params: &NetworkParams, x: &[f64], t: f64, tie: TieRule) -> (f64, usize) {
    match tie {
        TieRule::LowestIndex => params.max_with_index(x, t),
        TieRule::HighestIndex => {
            let set = argmax_unchecked(params, x, t, Some(0.0));
            let j = tie.pick(&set);
            (params.affine(j, x, t), j)
        }
    }
}

/// Chosen-argmax subgradient of the loss in the flat `[p, theta, gamma]` layout.
pub fn loss_gradient(params: &NetworkParams, batch: &Dataset, tie: TieRule) -> Result<Vec<f64>> {
    loss_gradient_with(params, batch, tie, Exec::default())
}

pub fn loss_gradient_with(
    params: &NetworkParams,
    batch: &Dataset,
    tie: TieRule,
    exec: Exec,
) -> Result<Vec<f64>> {
    check_data(params, batch)?;
    let idx: Vec<usize> = (0..batch.len()).collect();
    Ok(gradient_on(params, batch, &idx, tie, exec))
}

fn gradient_on(
    params: &NetworkParams,
    data: &Dataset,
    idx: &[usize],
    tie: TieRule,
    exec: Exec,
) -> Vec<f64> {
    let n = params.dim();
    let stride = params.stride();
    let scale = 2.0 / idx.len() as f64;
    let blocks: Vec<&[usize]> = idx.chunks(BLOCK).collect();
    let partials = exec.map(&blocks, |block| {
        let mut g = vec![0.0; params.as_flat().len()];
        for &j in block.iter() {
            let (x, t) = (data.x(j), data.t(j));
            let (v, i) = chosen(params, x, t, tie);
            let w = scale * (v - data.s(j));
            let row = &mut g[i * stride..(i + 1) * stride];
            for k in 0..n {
                row[k] += w * x[k];
            }
            row[n] -= w * t;
            row[n + 1] -= w;
        }
        g
    });
    let mut total = vec![0.0; params.as_flat().len()];
    for g in partials {
        for (a, b) in total.iter_mut().zip(g) {
            *a += b;
        }
    }
    total
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossRecord {
    pub step: usize,
    pub loss: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainRun {
    pub initial_params: NetworkParams,
    pub final_params: NetworkParams,
    /// Full-data loss at step 0, every `record_every` steps, and the last step.
    pub loss_history: Vec<LossRecord>,
    pub effective_indices: Vec<usize>,
}

impl TrainRun {
    pub fn initial_loss(&self) -> f64 {
        self.loss_history[0].loss
    }

    pub fn final_loss(&self) -> f64 {
        self.loss_history[self.loss_history.len() - 1].loss
    }
}

/// Seeded initialization: every entry `~ N(0, init_scale²)`.
pub fn initial_params(n: usize, config: &TrainConfig) -> Result<NetworkParams> {
    let mut rng = stream(config.seed, Stream::Init);
    let data = (0..config.m * (n + 2))
        .map(|_| config.init_scale * rng.sample::<f64, _>(StandardNormal))
        .collect();
    NetworkParams::from_flat(n, data)
}

/// Adam on epoch-shuffled minibatches.
pub fn train(config: &TrainConfig, data: &Dataset) -> Result<TrainRun> {
    train_with(config, data, Exec::default())
}

pub fn train_with(config: &TrainConfig, data: &Dataset, exec: Exec) -> Result<TrainRun> {
    config.validate()?;
    if data.len() < config.batch_size {
        return Err(HjError::invalid("dataset is smaller than batch_size"));
    }
    let n = data.dim();
    let init = initial_params(n, config)?;
    let mut theta = init.as_flat().to_vec();
    let mut m1 = vec![0.0; theta.len()];
    let mut m2 = vec![0.0; theta.len()];
    let mut rng = stream(config.seed, Stream::Batches);
    let mut order: Vec<usize> = (0..data.len()).collect();
    order.shuffle(&mut rng);
    let mut pos = 0;

    let mut history = vec![LossRecord {
        step: 0,
        loss: loss_with(&init, data, exec)?,
    }];
    let mut params = init.clone();
    let (mut b1t, mut b2t) = (1.0, 1.0);
    for step in 1..=config.steps {
        if pos + config.batch_size > order.len() {
            order.shuffle(&mut rng);
            pos = 0;
        }
        let batch = &order[pos..pos + config.batch_size];
        pos += config.batch_size;
        let g = gradient_on(&params, data, batch, config.tie_rule, exec);
        b1t *= config.beta1;
        b2t *= config.beta2;
        for k in 0..theta.len() {
            m1[k] = config.beta1 * m1[k] + (1.0 - config.beta1) * g[k];
            m2[k] = config.beta2 * m2[k] + (1.0 - config.beta2) * g[k] * g[k];
            let mh = m1[k] / (1.0 - b1t);
            let vh = m2[k] / (1.0 - b2t);
            theta[k] -= config.learning_rate * mh / (vh.sqrt() + config.adam_epsilon);
        }
        if theta.iter().any(|v| !v.is_finite()) {
            return Err(HjError::Diverged(step));
        }
        params = NetworkParams::from_flat(n, theta.clone())?;
        if step % config.record_every == 0 || step == config.steps {
            history.push(LossRecord {
                step,
                loss: loss_with(&params, data, exec)?,
            });
        }
    }
    let effective_indices = effective_neurons(&params, config.probes, config.seed)?;
    Ok(TrainRun {
        initial_params: init,
        final_params: params,
        loss_history: history,
        effective_indices,
    })
}

/// Union of the argmax sets over `probes` points drawn like the training data.
pub fn effective_neurons(params: &NetworkParams, probes: usize, seed: u64) -> Result<Vec<usize>> {
    if probes == 0 {
        return Err(HjError::invalid("probes must be at least 1"));
    }
    let n = params.dim();
    let (xs, ts) = sample_inputs(&mut stream(seed, Stream::Probes), n, probes);
    let mut hit = vec![false; params.len()];
    for j in 0..probes {
        for i in argmax_unchecked(params, &xs[j * n..(j + 1) * n], ts[j], None) {
            hit[i] = true;
        }
    }
    Ok((0..params.len()).filter(|&i| hit[i]).collect())
}

/// Relative mean-square errors of sorted `p`, `theta`, `gamma`. A zero
/// denominator switches that entry to the absolute mean over neurons.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParameterMetrics {
    pub p: f64,
    pub theta: f64,
    pub gamma: f64,
}

pub fn parameter_metrics(trained: &NetworkParams, truth: &NetworkParams) -> Result<ParameterMetrics> {
    if trained.dim() != truth.dim() {
        return Err(HjError::DimensionMismatch {
            expected: truth.dim(),
            got: trained.dim(),
        });
    }
    if trained.len() != truth.len() {
        return Err(HjError::DimensionMismatch {
            expected: truth.len(),
            got: trained.len(),
        });
    }
    let (a, b) = (trained.sorted(), truth.sorted());
    let m = a.len();
    let ratio = |num: f64, den: f64| if den == 0.0 { num / m as f64 } else { num / den };
    let sq = |v: f64| v * v;
    let (mut np, mut dp, mut nt, mut dt, mut ng, mut dg) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for i in 0..m {
        for (x, y) in a.p(i).iter().zip(b.p(i)) {
            np += sq(x - y);
            dp += sq(*y);
        }
        nt += sq(a.theta(i) - b.theta(i));
        dt += sq(b.theta(i));
        ng += sq(a.gamma(i) - b.gamma(i));
        dg += sq(b.gamma(i));
    }
    Ok(ParameterMetrics {
        p: ratio(np, dp),
        theta: ratio(nt, dt),
        gamma: ratio(ng, dg),
    })
}

/// `J̃ = f(·, 0)`.
pub fn recovered_initial(trained: &NetworkParams) -> impl Fn(&[f64]) -> f64 + '_ {
    move |x| trained.value(x, 0.0)
}

/// `Σ |J̃ - J|² / Σ |J|²` on [`TEST_POINTS`] standard-normal points; the
/// absolute mean when `J` vanishes on the whole test set.
pub fn initial_test_error<F>(trained: &NetworkParams, truth_j: F, seed: u64) -> f64
where
    F: Fn(&[f64]) -> f64,
{
    let n = trained.dim();
    let j_tilde = recovered_initial(trained);
    let mut rng = stream(seed, Stream::Test);
    let mut x = vec![0.0; n];
    let (mut num, mut den) = (0.0, 0.0);
    for _ in 0..TEST_POINTS {
        for v in x.iter_mut() {
            *v = rng.sample(StandardNormal);
        }
        let j = truth_j(&x);
        num += (j_tilde(&x) - j).powi(2);
        den += j * j;
    }
    if den == 0.0 {
        num / TEST_POINTS as f64
    } else {
        num / den
    }
}

/// `Σ_{l∈L} |theta_l - H(p_l)|² / Σ_{l∈L} |H(p_l)|²` (absolute mean if the
/// denominator vanishes).
pub fn hamiltonian_error<F>(trained: &NetworkParams, effective: &[usize], h: F) -> f64
where
    F: Fn(&[f64]) -> f64,
{
    let (mut num, mut den) = (0.0, 0.0);
    for &l in effective {
        let hv = h(trained.p(l));
        num += (trained.theta(l) - hv).powi(2);
        den += hv * hv;
    }
    if den == 0.0 {
        num / effective.len().max(1) as f64
    } else {
        num / den
    }
}

/// Known Hamiltonians used by the recovery experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KnownHamiltonian {
    /// `-‖p‖₂`
    NegNorm,
    /// `-‖p‖₂² / 2`
    NegHalfSquare,
    /// `‖p‖₂² / 2`
    HalfSquare,
}

impl KnownHamiltonian {
    pub fn eval(self, p: &[f64]) -> f64 {
        let sq: f64 = p.iter().map(|v| v * v).sum();
        match self {
            KnownHamiltonian::NegNorm => -sq.sqrt(),
            KnownHamiltonian::NegHalfSquare => -0.5 * sq,
            KnownHamiltonian::HalfSquare => 0.5 * sq,
        }
    }
}

/// Ground truth for a recovery experiment.
#[derive(Debug, Clone, PartialEq)]
pub enum Truth {
    /// A network with an optional analytic Hamiltonian.
    Network {
        params: NetworkParams,
        hamiltonian: Option<KnownHamiltonian>,
    },
    /// `J = ‖x‖₁`, `H = -‖p‖²/2`: `S = ‖x‖₁ + n t / 2`.
    L1Concave { n: usize },
    /// `J = ‖x‖₁`, `H = ‖p‖²/2`: coordinatewise Huber-type solution.
    L1Convex { n: usize },
}

impl Truth {
    /// Random truth for one of the four sanity cases; draws from the truth stream.
    pub fn case(case: u8, n: usize, m: usize, seed: u64) -> Result<Self> {
        if !(1..=4).contains(&case) || n == 0 || m == 0 {
            return Err(HjError::invalid("case must be 1..=4 with n, m >= 1"));
        }
        let params = presets::random_case(case, n, m, &mut stream(seed, Stream::Truth));
        let hamiltonian = Some(if case <= 2 {
            KnownHamiltonian::NegNorm
        } else {
            KnownHamiltonian::NegHalfSquare
        });
        Ok(Truth::Network {
            params,
            hamiltonian,
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            Truth::Network { params, .. } => params.dim(),
            Truth::L1Concave { n } | Truth::L1Convex { n } => *n,
        }
    }

    pub fn params(&self) -> Option<&NetworkParams> {
        match self {
            Truth::Network { params, .. } => Some(params),
            _ => None,
        }
    }

    pub fn value(&self, x: &[f64], t: f64) -> f64 {
        match self {
            Truth::Network { params, .. } => params.value(x, t),
            Truth::L1Concave { n } => l1(x) + *n as f64 * t / 2.0,
            Truth::L1Convex { .. } => x
                .iter()
                .map(|&v| {
                    if v.abs() >= t {
                        v.abs() - t / 2.0
                    } else {
                        v * v / (2.0 * t)
                    }
                })
                .sum(),
        }
    }

    pub fn initial(&self, x: &[f64]) -> f64 {
        match self {
            Truth::Network { params, .. } => params.value(x, 0.0),
            _ => l1(x),
        }
    }

    pub fn hamiltonian(&self) -> Option<KnownHamiltonian> {
        match self {
            Truth::Network { hamiltonian, .. } => *hamiltonian,
            Truth::L1Concave { .. } => Some(KnownHamiltonian::NegHalfSquare),
            Truth::L1Convex { .. } => Some(KnownHamiltonian::HalfSquare),
        }
    }
}

fn l1(x: &[f64]) -> f64 {
    x.iter().map(|v| v.abs()).sum()
}

/// Summary of a finished run against its truth.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub seed: u64,
    pub steps: usize,
    pub initial_loss: f64,
    pub final_loss: f64,
    pub effective_neurons: usize,
    pub effective_indices: Vec<usize>,
    pub parameter_metrics: Option<ParameterMetrics>,
    pub initial_test_error: f64,
    pub hamiltonian_error: Option<f64>,
}

pub fn summarize(run: &TrainRun, truth: &Truth, config: &TrainConfig) -> Result<RunSummary> {
    let parameter_metrics = match truth.params() {
        Some(p) if p.len() == run.final_params.len() => Some(parameter_metrics(&run.final_params, p)?),
        _ => None,
    };
    let hamiltonian_error = truth
        .hamiltonian()
        .map(|h| hamiltonian_error(&run.final_params, &run.effective_indices, |p| h.eval(p)));
    Ok(RunSummary {
        seed: config.seed,
        steps: config.steps,
        initial_loss: run.initial_loss(),
        final_loss: run.final_loss(),
        effective_neurons: run.effective_indices.len(),
        effective_indices: run.effective_indices.clone(),
        parameter_metrics,
        initial_test_error: initial_test_error(&run.final_params, |x| truth.initial(x), config.seed),
        hamiltonian_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::Neuron;

    fn small_config(steps: usize) -> TrainConfig {
        TrainConfig {
            steps,
            n_train: 200,
            batch_size: 50,
            record_every: 10,
            probes: 500,
            ..TrainConfig::default()
        }
    }

    #[test]
    fn default_config_values() {
        let c = TrainConfig::default();
        assert_eq!((c.beta1, c.beta2, c.learning_rate), (0.5, 0.9, 1e-4));
        assert_eq!((c.batch_size, c.steps, c.n_train), (500, 60_000, 20_000));
        c.validate().unwrap();
    }

    #[test]
    fn config_validation() {
        let mut c = small_config(1);
        c.batch_size = 0;
        assert!(c.validate().is_err());
        let mut c = small_config(1);
        c.beta1 = 1.0;
        assert!(c.validate().is_err());
        let mut c = small_config(1);
        c.batch_size = 201;
        assert!(c.validate().is_err());
    }

    #[test]
    fn dataset_is_reproducible() {
        let truth = Truth::L1Concave { n: 2 };
        let a = sample_dataset(|x, t| truth.value(x, t), 2, 100, 7).unwrap();
        let b = sample_dataset(|x, t| truth.value(x, t), 2, 100, 7).unwrap();
        assert_eq!(a, b);
        assert!((0..a.len()).all(|j| a.t(j) >= 0.0));
        for j in 0..a.len() {
            let x = a.x(j);
            assert_eq!(a.s(j), (x[0].abs() + x[1].abs()) + 2.0 * a.t(j) / 2.0);
        }
        assert!(sample_dataset(|_, _| 0.0, 2, 0, 1).is_err());
    }

    #[test]
    fn loss_examples() {
        let truth = presets::l1_cube(2);
        let data = sample_dataset(|x, t| truth.value(x, t), 2, 300, 3).unwrap();
        assert!(loss(&truth, &data).unwrap() <= 1e-18);
        let one = Dataset::new(1, vec![0.5], vec![1.0], vec![2.0]).unwrap();
        let net = NetworkParams::new(1, &[Neuron::new(vec![2.0], 0.5, 0.0)]).unwrap();
        // f = 1 - 0.5 = 0.5, residual -1.5.
        assert_eq!(loss(&net, &one).unwrap(), 2.25);
    }

    #[test]
    fn gamma_shift_is_quadratic() {
        let truth = presets::l1_cube(2);
        let data = sample_dataset(|x, t| truth.value(x, t) + 0.1 * x[0], 2, 300, 4).unwrap();
        let base = loss(&truth, &data).unwrap();
        let mean_res: f64 =
            (0..data.len()).map(|j| truth.value(data.x(j), data.t(j)) - data.s(j)).sum::<f64>()
                / data.len() as f64;
        let delta = 0.3;
        let mut flat = truth.as_flat().to_vec();
        for i in 0..truth.len() {
            flat[i * truth.stride() + 3] += delta;
        }
        let shifted = NetworkParams::from_flat(2, flat).unwrap();
        let expect = base - 2.0 * delta * mean_res + delta * delta;
        assert!((loss(&shifted, &data).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn gradient_single_neuron_is_least_squares() {
        let net = NetworkParams::new(2, &[Neuron::new(vec![0.3, -0.2], 0.1, 0.5)]).unwrap();
        let data = sample_dataset(|x, t| x[0] - t, 2, 40, 9).unwrap();
        let g = loss_gradient(&net, &data, TieRule::LowestIndex).unwrap();
        let mut expect = [0.0; 4];
        for j in 0..data.len() {
            let (x, t) = (data.x(j), data.t(j));
            let r = 0.3 * x[0] - 0.2 * x[1] - 0.1 * t - 0.5 - data.s(j);
            let w = 2.0 * r / data.len() as f64;
            expect[0] += w * x[0];
            expect[1] += w * x[1];
            expect[2] -= w * t;
            expect[3] -= w;
        }
        for k in 0..4 {
            assert!((g[k] - expect[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_residual_zero_gradient() {
        let truth = presets::cross_polytope(3);
        let data = sample_dataset(|x, t| truth.value(x, t), 3, 100, 5).unwrap();
        let g = loss_gradient(&truth, &data, TieRule::LowestIndex).unwrap();
        assert!(g.iter().all(|&v| v == 0.0));
        assert_eq!(g.len(), truth.len() * 5);
    }

    #[test]
    fn gradient_strategies_agree() {
        let truth = presets::l1_cube(3);
        let data = sample_dataset(|x, t| truth.value(x, t) + x[1].sin(), 3, 1000, 5).unwrap();
        let a = loss_gradient_with(&truth, &data, TieRule::LowestIndex, Exec::Sequential).unwrap();
        let b = loss_gradient_with(&truth, &data, TieRule::LowestIndex, Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_learning_rate_keeps_init() {
        let truth = Truth::case(1, 2, 2, 1).unwrap();
        let data = sample_dataset(|x, t| truth.value(x, t), 2, 200, 1).unwrap();
        let mut c = small_config(20);
        c.learning_rate = 0.0;
        let run = train(&c, &data).unwrap();
        assert_eq!(run.final_params, run.initial_params);
        let run0 = train(&small_config(0), &data).unwrap();
        assert_eq!(run0.final_params, run0.initial_params);
        assert_eq!(run0.loss_history.len(), 1);
    }

    #[test]
    fn training_is_deterministic_and_descends() {
        let truth = Truth::case(1, 2, 2, 2).unwrap();
        let data = sample_dataset(|x, t| truth.value(x, t), 2, 200, 2).unwrap();
        let mut c = small_config(500);
        c.learning_rate = 1e-2;
        let a = train(&c, &data).unwrap();
        let b = train_with(&c, &data, Exec::Sequential).unwrap();
        assert_eq!(a, b);
        assert!(a.final_loss() < a.initial_loss());
        assert_eq!(a.loss_history.last().unwrap().step, 500);
    }

    #[test]
    fn effective_neuron_examples() {
        let cube = presets::l1_cube(2);
        assert_eq!(effective_neurons(&cube, 10_000, 1).unwrap(), vec![0, 1, 2, 3]);
        let dominated = NetworkParams::new(
            1,
            &[Neuron::new(vec![1.0], 0.0, 0.0), Neuron::new(vec![1.0], 1.0, 0.0)],
        )
        .unwrap();
        assert_eq!(effective_neurons(&dominated, 1000, 1).unwrap(), vec![0]);
        let single = NetworkParams::new(1, &[Neuron::new(vec![1.0], 0.0, 0.0)]).unwrap();
        assert_eq!(effective_neurons(&single, 1, 1).unwrap(), vec![0]);
        assert!(effective_neurons(&single, 0, 1).is_err());
    }

    #[test]
    fn metric_examples() {
        let truth = presets::l1_cube(2);
        let m = parameter_metrics(&truth, &truth).unwrap();
        assert_eq!((m.p, m.theta, m.gamma), (0.0, 0.0, 0.0));

        let mut flat = truth.as_flat().to_vec();
        for i in 0..truth.len() {
            flat[i * truth.stride() + 3] = 0.5;
        }
        let shifted = NetworkParams::from_flat(2, flat).unwrap();
        assert_eq!(parameter_metrics(&shifted, &truth).unwrap().gamma, 0.25);

        let a = NetworkParams::new(1, &[Neuron::new(vec![1.0], -1.0, 1.0)]).unwrap();
        let b = NetworkParams::new(1, &[Neuron::new(vec![1.1], -1.0, 1.0)]).unwrap();
        let m = parameter_metrics(&b, &a).unwrap();
        assert!((m.p - 0.01).abs() < 1e-15);
        assert_eq!((m.theta, m.gamma), (0.0, 0.0));
        assert!(parameter_metrics(&a, &truth).is_err());
    }

    #[test]
    fn initial_error_examples() {
        let truth = presets::l1_cube(2);
        let j = |x: &[f64]| x[0].abs() + x[1].abs();
        assert_eq!(initial_test_error(&truth, j, 3), 0.0);

        let c = 0.2;
        let mut flat = truth.as_flat().to_vec();
        for i in 0..truth.len() {
            flat[i * truth.stride() + 3] = -c;
        }
        let offset = NetworkParams::from_flat(2, flat).unwrap();
        let mut rng = stream(3, Stream::Test);
        let mut den = 0.0;
        for _ in 0..TEST_POINTS {
            let x: [f64; 2] = [rng.sample(StandardNormal), rng.sample(StandardNormal)];
            den += j(&x).powi(2);
        }
        let expect = TEST_POINTS as f64 * c * c / den;
        assert!((initial_test_error(&offset, j, 3) - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn truth_closed_forms() {
        let t = Truth::L1Convex { n: 2 };
        assert_eq!(t.value(&[2.0, 0.5], 1.0), 1.5 + 0.125);
        let c = Truth::L1Concave { n: 3 };
        assert_eq!(c.value(&[1.0, -1.0, 0.0], 2.0), 5.0);
        let cube = presets::l1_cube(3);
        for x in [[0.1, -0.4, 2.0], [-1.0, 0.0, 0.3]] {
            assert!((cube.value(&x, 0.7) - c.value(&x, 0.7)).abs() < 1e-12);
        }
    }
}
