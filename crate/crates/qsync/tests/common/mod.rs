//! Shared helpers for the integration tests: Gauss-Legendre quadrature
//! built from scratch (so sphere integrals never reuse crate code) and
//! reproducible random qubit states.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qsync::bath::BathParams;
use qsync::dynamics::{evolve, h_closed_form, InitialState, QubitDensityMatrix};

/// Gauss-Legendre nodes and weights on [-1, 1], found by Newton
/// iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for k in 0..n {
        // Chebyshev-like starting guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let step = p / dp;
            x -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        nodes[n - 1 - k] = x;
        weights[n - 1 - k] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    let weight_sum: f64 = weights.iter().sum();
    assert!((weight_sum - 2.0).abs() < 1e-12, "weights must sum to 2");
    (nodes, weights)
}

/// Value and derivative of the Legendre polynomial `P_n` at `x`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p_prev, mut p) = (1.0, x);
    for m in 2..=n {
        let m = m as f64;
        let next = ((2.0 * m - 1.0) * x * p - (m - 1.0) * p_prev) / m;
        p_prev = p;
        p = next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// Gauss-Legendre integral of `f` over `[a, b]` with `n` nodes.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    nodes
        .iter()
        .zip(&weights)
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

/// Deterministic stream of valid initial states: uniform population,
/// coherence magnitude uniform up to the positivity bound, uniform
/// phase.
pub fn random_states(seed: u64, count: usize) -> Vec<InitialState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let rho11: f64 = rng.gen_range(0.0..=1.0);
            let bound = (rho11 * (1.0 - rho11)).sqrt();
            let r = bound * rng.gen_range(0.0..=1.0);
            let phase = rng.gen_range(0.0..std::f64::consts::TAU);
            InitialState::new(rho11, Complex64::from_polar(r, phase)).unwrap()
        })
        .collect()
}

/// Materializes an initial state as a density matrix by applying the
/// identity amplitude at t = 0.
pub fn as_state(initial: &InitialState) -> QubitDensityMatrix {
    let bath = BathParams::new(1.0, 1.0, 0.0).unwrap();
    let amp = h_closed_form(&bath, 0.0).unwrap();
    evolve(initial, &amp).unwrap()
}

#[test]
fn quadrature_helper_is_exact_on_polynomials_and_the_sphere() {
    // Degree 7 polynomial, exact for 4 nodes and up.
    let exact = 2.0 / 9.0;
    assert!((integrate(|x| x.powi(8), -1.0, 1.0, 16) - exact).abs() < 1e-14);
    // Spherical area element.
    let area = integrate(f64::sin, 0.0, std::f64::consts::PI, 32);
    assert!((area - 2.0).abs() < 1e-14);
    // Nodes are symmetric and sorted.
    let (nodes, _) = gauss_legendre(21);
    assert!(nodes.windows(2).all(|w| w[0] < w[1]));
    assert!((nodes[10]).abs() < 1e-15);
}
