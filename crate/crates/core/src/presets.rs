//! Parameter sets with known closed-form solutions.

use rand::Rng;
use rand_distr::{Distribution, Uniform};

use crate::network::{Neuron, NetworkParams};

/// `p ∈ {±1}^n`, `theta = -n/2`, `gamma = 0`: represents `‖x‖₁ + n t / 2`.
///
/// Neuron `k` has `p_j = +1` iff bit `j` of `k` is clear, so index 0 is `(1, …, 1)`.
pub fn l1_cube(n: usize) -> NetworkParams {
    assert!((1..=24).contains(&n), "cube preset supports 1 <= n <= 24");
    let m = 1usize << n;
    let theta = -(n as f64) / 2.0;
    let mut data = Vec::with_capacity(m * (n + 2));
    for k in 0..m {
        for j in 0..n {
            data.push(if (k >> (n - 1 - j)) & 1 == 0 { 1.0 } else { -1.0 });
        }
        data.push(theta);
        data.push(0.0);
    }
    NetworkParams::from_flat(n, data).expect("valid cube parameters")
}

/// `p ∈ {±e_i}`, `theta = -n/2`, `gamma = 0`: represents `‖x‖∞ + n t / 2`.
pub fn cross_polytope(n: usize) -> NetworkParams {
    let theta = -(n as f64) / 2.0;
    let mut neurons = Vec::with_capacity(2 * n);
    for sign in [1.0, -1.0] {
        for i in 0..n {
            let mut p = vec![0.0; n];
            p[i] = sign;
            neurons.push(Neuron::new(p, theta, 0.0));
        }
    }
    NetworkParams::new(n, &neurons).expect("valid cross-polytope parameters")
}

/// `2n + 5` neurons solving `H(p) = ‖p‖₁` with
/// `J(x) = max{‖x‖∞, (|x₁| + |x₂|)/√2}`. Requires `n >= 2`.
pub fn mixed_norm(n: usize) -> NetworkParams {
    assert!(n >= 2, "mixed-norm preset needs n >= 2");
    let mut neurons = Vec::with_capacity(2 * n + 5);
    for sign in [1.0, -1.0] {
        for i in 0..n {
            let mut p = vec![0.0; n];
            p[i] = sign;
            neurons.push(Neuron::new(p, 1.0, 0.0));
        }
    }
    neurons.push(Neuron::new(vec![0.0; n], 0.0, 0.0));
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for a in [1.0, -1.0] {
        for b in [1.0, -1.0] {
            let mut p = vec![0.0; n];
            p[0] = a * s;
            p[1] = b * s;
            neurons.push(Neuron::new(p, 2.0 * s, 0.0));
        }
    }
    NetworkParams::new(n, &neurons).expect("valid mixed-norm parameters")
}

/// Closed form of the mixed-norm initial data.
pub fn mixed_norm_initial(x: &[f64]) -> f64 {
    let inf = x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    inf.max((x[0].abs() + x[1].abs()) * std::f64::consts::FRAC_1_SQRT_2)
}

/// Two neurons `p = (-1, 1)`, `theta = -1/2`, `gamma = 0`: a stationary shock at `x = 0`.
pub fn riemann() -> NetworkParams {
    NetworkParams::new(
        1,
        &[
            Neuron::new(vec![-1.0], -0.5, 0.0),
            Neuron::new(vec![1.0], -0.5, 0.0),
        ],
    )
    .expect("valid Riemann parameters")
}

/// `m` slopes uniform on `[-1, 1]`, `theta_i = h(p_i)`, `gamma_i = 0`
/// (the conjugate of `|x|` on its domain).
pub fn uniform_slopes<H: Fn(f64) -> f64>(m: usize, h: H) -> NetworkParams {
    assert!(m >= 2);
    let neurons: Vec<Neuron> = (0..m)
        .map(|i| {
            let p = -1.0 + 2.0 * i as f64 / (m - 1) as f64;
            Neuron::new(vec![p], h(p), 0.0)
        })
        .collect();
    NetworkParams::new(1, &neurons).expect("valid uniform-slope parameters")
}

/// The four synthetic recovery cases: slopes uniform in `[-1, 1)^n` and
///
/// | case | theta        | gamma       |
/// |------|--------------|-------------|
/// | 1    | -‖p‖₂        | 0           |
/// | 2    | -‖p‖₂        | ‖p‖₂² / 2   |
/// | 3    | -‖p‖₂² / 2   | 0           |
/// | 4    | -‖p‖₂² / 2   | ‖p‖₂² / 2   |
pub fn random_case<R: Rng + ?Sized>(case: u8, n: usize, m: usize, rng: &mut R) -> NetworkParams {
    assert!((1..=4).contains(&case), "case must be 1..=4");
    let unif = Uniform::new(-1.0, 1.0).expect("valid range");
    let neurons: Vec<Neuron> = (0..m)
        .map(|_| {
            let p: Vec<f64> = (0..n).map(|_| unif.sample(rng)).collect();
            let sq: f64 = p.iter().map(|v| v * v).sum();
            let theta = if case <= 2 { -sq.sqrt() } else { -0.5 * sq };
            let gamma = if case.is_multiple_of(2) { 0.5 * sq } else { 0.0 };
            Neuron::new(p, theta, gamma)
        })
        .collect();
    NetworkParams::new(n, &neurons).expect("valid random case")
}
