//! Exact dissipative dynamics of the qubit amplitude.
//!
//! The excited-state probability amplitude obeys the memory equation
//! `h'(t) = -int_0^t f(t - tau) h(tau) dtau` with `h(0) = 1`, where `f`
//! is the exponential correlation kernel of the Lorentzian bath. Because
//! the kernel is a single complex exponential the equation is solvable
//! in closed form; [`h_closed_form`] evaluates that solution through an
//! overflow-safe mode decomposition. [`volterra_solve`] integrates the
//! same equation numerically and exists as an independent cross-check of
//! the closed form (and vice versa).
//!
//! Density matrices are propagated from an initial state by [`evolve`]:
//! the excited population scales with `|h|^2` and the coherence with
//! `h`, so every observable in the crate reduces to evaluations of `h`.

use num_complex::Complex64;

use crate::bath::BathParams;
use crate::error::{Error, Result};

/// Switch to the small-argument series of the mode decomposition when
/// `|omega t / 2|` falls below this threshold.
pub const DEGENERATE_THRESHOLD: f64 = 1e-6;

/// Tolerance for the density-matrix positivity bound
/// `|rho10|^2 <= rho11 (1 - rho11)`.
pub const POSITIVITY_TOL: f64 = 1e-12;

/// Smallest slope of `|rho10|(t)` counted as coherence growth by
/// [`detect_backflow`].
pub const SLOPE_TOL: f64 = 1e-10;

/// Minimum number of samples accepted by [`detect_backflow`].
pub const MIN_TRAJECTORY_POINTS: usize = 10;

/// Upper bound on the number of grid points any single evaluation may
/// request, shared by the integrators and the sweep engine.
pub const STEP_BUDGET: u64 = 100_000_000;

/// Which arm of the closed-form evaluation produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Two-mode exponential form, used away from the degenerate point.
    Generic,
    /// Taylor series around `omega = 0`, used when the two decay modes
    /// coalesce and the generic form would lose precision.
    DegenerateSeries,
}

/// One sample of the amplitude `h(t)` together with the complex mode
/// splitting frequency and the evaluation branch.
#[derive(Debug, Clone, Copy)]
pub struct EvolutionAmplitude {
    /// Sample time in units of the inverse reference rate.
    pub t: f64,
    /// Amplitude `h(t)`; `h(0) = 1` and `|h| <= 1` at all times.
    pub value: Complex64,
    /// Mode splitting `omega = sqrt(rate^2 - 2 gamma lambda)` on the
    /// principal square-root branch.
    pub omega: Complex64,
    /// Evaluation branch used at this sample.
    pub branch: Branch,
}

/// Closed-form mode data for a fixed parameter set.
///
/// With `rate = lambda - i delta` the amplitude is a combination of two
/// exponentials `exp(s t)` with `s = (-rate +/- omega) / 2`. Both mode
/// rates have non-positive real part for every admissible parameter set,
/// so the evaluation cannot overflow. The result is invariant under
/// `omega -> -omega` because the two modes merely swap.
#[derive(Debug, Clone, Copy)]
struct ModeDecomposition {
    rate: Complex64,
    omega: Complex64,
}

impl ModeDecomposition {
    fn new(params: &BathParams) -> Self {
        let rate = params.kernel_rate();
        let omega = (rate * rate - 2.0 * params.gamma() * params.lambda()).sqrt();
        ModeDecomposition { rate, omega }
    }

    fn branch_for(&self, t: f64) -> Branch {
        if (0.5 * self.omega * t).norm() < DEGENERATE_THRESHOLD {
            Branch::DegenerateSeries
        } else {
            Branch::Generic
        }
    }

    fn eval(&self, t: f64) -> (Complex64, Branch) {
        let branch = self.branch_for(t);
        let value = match branch {
            Branch::DegenerateSeries => self.eval_series(t),
            Branch::Generic => self.eval_generic(t),
        };
        (value, branch)
    }

    /// Series in `x = omega t / 2` for near-coalescing modes; the
    /// omitted terms are `O(x^4)`, below f64 resolution at the
    /// switching threshold.
    fn eval_series(&self, t: f64) -> Complex64 {
        let half_rt = 0.5 * self.rate * t;
        let x = 0.5 * self.omega * t;
        let x2 = x * x;
        let bracket = 1.0 + half_rt + x2 * (0.5 + half_rt / 6.0);
        (-half_rt).exp() * bracket
    }

    fn eval_generic(&self, t: f64) -> Complex64 {
        let r = self.rate / self.omega;
        let c_plus = 0.5 * (1.0 + r);
        let c_minus = 0.5 * (1.0 - r);
        let s_plus = 0.5 * (self.omega - self.rate);
        let s_minus = 0.5 * (-self.omega - self.rate);
        c_plus * (s_plus * t).exp() + c_minus * (s_minus * t).exp()
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::invalid("t", "must be finite and non-negative"));
    }
    Ok(())
}

/// Evaluates the closed-form amplitude at a single time.
pub fn h_closed_form(params: &BathParams, t: f64) -> Result<EvolutionAmplitude> {
    check_time(t)?;
    let modes = ModeDecomposition::new(params);
    let (value, branch) = modes.eval(t);
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::NonFinite { t });
    }
    Ok(EvolutionAmplitude {
        t,
        value,
        omega: modes.omega,
        branch,
    })
}

/// Builds the uniform grid `0, dt, 2 dt, ..., n dt` with
/// `n = round(t_max / dt)`, enforcing the step budget.
pub fn time_grid(t_max: f64, dt: f64) -> Result<Vec<f64>> {
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::invalid("t_max", "must be finite and strictly positive"));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::invalid("dt", "must be finite and strictly positive"));
    }
    let steps = (t_max / dt).round();
    if steps < 1.0 {
        return Err(Error::invalid("dt", "must not exceed t_max"));
    }
    if steps > STEP_BUDGET as f64 {
        return Err(Error::BudgetExceeded {
            requested: steps as u128,
            limit: STEP_BUDGET,
        });
    }
    let n = steps as usize;
    Ok((0..=n).map(|i| i as f64 * dt).collect())
}

/// Trapezoidal product integration of the memory equation over
/// `[0, t_max]`. The running memory integral is updated recursively in
/// `O(1)` per step by peeling one factor `exp(-rate dt)` off every
/// stored kernel weight, which is exact for an exponential kernel.
pub fn volterra_solve(params: &BathParams, t_max: f64, dt: f64) -> Result<Vec<EvolutionAmplitude>> {
    let times = time_grid(t_max, dt)?;
    let values = volterra_kernel_recursive(
        params.kernel_amplitude(),
        params.kernel_rate(),
        times.len() - 1,
        dt,
    )?;
    Ok(label_samples(params, &times, &values))
}

/// Same scheme as [`volterra_solve`] with the memory integral summed
/// explicitly at every step, `O(n^2)` overall. Retained as the slow
/// reference path: it shares no recurrence with the fast path, so
/// agreement between the two validates the recursive update.
pub fn volterra_solve_direct(
    params: &BathParams,
    t_max: f64,
    dt: f64,
) -> Result<Vec<EvolutionAmplitude>> {
    let times = time_grid(t_max, dt)?;
    let values = volterra_kernel_direct(
        params.kernel_amplitude(),
        params.kernel_rate(),
        times.len() - 1,
        dt,
    )?;
    Ok(label_samples(params, &times, &values))
}

fn label_samples(
    params: &BathParams,
    times: &[f64],
    values: &[Complex64],
) -> Vec<EvolutionAmplitude> {
    let modes = ModeDecomposition::new(params);
    times
        .iter()
        .zip(values)
        .map(|(&t, &value)| EvolutionAmplitude {
            t,
            value,
            omega: modes.omega,
            branch: modes.branch_for(t),
        })
        .collect()
}

/// Recursive-memory integrator over the raw kernel `c exp(-rate s)`.
///
/// Exposed at the kernel level (rather than through [`BathParams`]) so
/// tests can drive it with `c = 0`, where the amplitude must stay
/// exactly 1.
fn volterra_kernel_recursive(
    c: f64,
    rate: Complex64,
    steps: usize,
    dt: f64,
) -> Result<Vec<Complex64>> {
    let decay = (-rate * dt).exp();
    let denom = 1.0 + c * dt * dt / 4.0;
    let mut h = Vec::with_capacity(steps + 1);
    h.push(Complex64::new(1.0, 0.0));
    let mut memory = Complex64::new(0.0, 0.0);
    let mut deriv_prev = Complex64::new(0.0, 0.0);
    for i in 1..=steps {
        memory = if i == 1 {
            0.5 * c * decay * h[0]
        } else {
            decay * (memory + c * h[i - 1])
        };
        let hn = (h[i - 1] + 0.5 * dt * deriv_prev - 0.5 * dt * dt * memory) / denom;
        if !(hn.re.is_finite() && hn.im.is_finite()) {
            return Err(Error::NonFinite { t: i as f64 * dt });
        }
        deriv_prev = -dt * (memory + 0.5 * c * hn);
        h.push(hn);
    }
    Ok(h)
}

/// Direct-summation integrator: identical discretization, with every
/// kernel factor evaluated fresh from the exponential.
fn volterra_kernel_direct(
    c: f64,
    rate: Complex64,
    steps: usize,
    dt: f64,
) -> Result<Vec<Complex64>> {
    let kernel = |s: f64| c * (-rate * s).exp();
    let denom = 1.0 + c * dt * dt / 4.0;
    let mut h = Vec::with_capacity(steps + 1);
    h.push(Complex64::new(1.0, 0.0));
    let mut memory_prev = Complex64::new(0.0, 0.0);
    for i in 1..=steps {
        let ti = i as f64 * dt;
        let mut memory = 0.5 * kernel(ti) * h[0];
        for (j, hj) in h.iter().copied().enumerate().skip(1) {
            memory += kernel(ti - j as f64 * dt) * hj;
        }
        let deriv_prev = if i == 1 {
            Complex64::new(0.0, 0.0)
        } else {
            -dt * (memory_prev + 0.5 * c * h[i - 1])
        };
        let hn = (h[i - 1] + 0.5 * dt * deriv_prev - 0.5 * dt * dt * memory) / denom;
        if !(hn.re.is_finite() && hn.im.is_finite()) {
            return Err(Error::NonFinite { t: ti });
        }
        h.push(hn);
        memory_prev = memory;
    }
    Ok(h)
}

/// Initial qubit state, stored as the excited population and the
/// coherence `rho10 = <1|rho|0>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialState {
    rho11: f64,
    rho10: Complex64,
}

impl InitialState {
    /// Validates population range and the positivity bound
    /// `|rho10|^2 <= rho11 (1 - rho11)` (up to [`POSITIVITY_TOL`]).
    pub fn new(rho11: f64, rho10: Complex64) -> Result<Self> {
        if !(rho11.is_finite() && (0.0..=1.0).contains(&rho11)) {
            return Err(Error::invalid("initial", "rho11 must lie in [0, 1]"));
        }
        if !(rho10.re.is_finite() && rho10.im.is_finite()) {
            return Err(Error::invalid("initial", "rho10 must be finite"));
        }
        let excess = rho10.norm_sqr() - rho11 * (1.0 - rho11);
        if excess > POSITIVITY_TOL {
            return Err(Error::invalid(
                "initial",
                format!("|rho10|^2 exceeds rho11 (1 - rho11) by {excess:.3e}"),
            ));
        }
        Ok(InitialState { rho11, rho10 })
    }

    /// Equal superposition `(|0> + |1>) / sqrt(2)`, the state with
    /// maximal coherence. This is the crate-wide default.
    pub fn plus() -> Self {
        InitialState {
            rho11: 0.5,
            rho10: Complex64::new(0.5, 0.0),
        }
    }

    /// Fully excited state `|1>`.
    pub fn excited() -> Self {
        InitialState {
            rho11: 1.0,
            rho10: Complex64::new(0.0, 0.0),
        }
    }

    pub fn rho11(&self) -> f64 {
        self.rho11
    }

    pub fn rho10(&self) -> Complex64 {
        self.rho10
    }
}

impl Default for InitialState {
    fn default() -> Self {
        InitialState::plus()
    }
}

/// Qubit density matrix at one instant. Only the excited population and
/// the coherence are stored; `rho00` and `rho01` are derived, so the
/// trace is 1 by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitDensityMatrix {
    rho11: f64,
    rho10: Complex64,
}

impl QubitDensityMatrix {
    /// Excited-state population.
    pub fn rho11(&self) -> f64 {
        self.rho11
    }

    /// Ground-state population `1 - rho11`.
    pub fn rho00(&self) -> f64 {
        1.0 - self.rho11
    }

    /// Coherence `<1|rho|0>`.
    pub fn rho10(&self) -> Complex64 {
        self.rho10
    }

    /// Conjugate coherence `<0|rho|1>`.
    pub fn rho01(&self) -> Complex64 {
        self.rho10.conj()
    }

    /// Magnitude of the coherence.
    pub fn coherence(&self) -> f64 {
        self.rho10.norm()
    }
}

/// Propagates an initial state with a precomputed amplitude sample:
/// `rho11(t) = rho11(0) |h|^2` and `rho10(t) = rho10(0) h`.
pub fn evolve(initial: &InitialState, amp: &EvolutionAmplitude) -> Result<QubitDensityMatrix> {
    let rho11 = initial.rho11 * amp.value.norm_sqr();
    let rho10 = initial.rho10 * amp.value;
    if rho11 > 1.0 + POSITIVITY_TOL {
        return Err(Error::Positivity { excess: rho11 - 1.0 });
    }
    let excess = rho10.norm_sqr() - rho11 * (1.0 - rho11);
    if excess > POSITIVITY_TOL {
        return Err(Error::Positivity { excess });
    }
    Ok(QubitDensityMatrix { rho11, rho10 })
}

/// Coherence magnitude `|rho10(t)|` on a strictly increasing time grid,
/// computed from the closed form.
pub fn coherence_trajectory(
    params: &BathParams,
    initial: &InitialState,
    times: &[f64],
) -> Result<Vec<(f64, f64)>> {
    if times.is_empty() {
        return Err(Error::invalid("times", "must not be empty"));
    }
    if times.len() as u64 > STEP_BUDGET {
        return Err(Error::BudgetExceeded {
            requested: times.len() as u128,
            limit: STEP_BUDGET,
        });
    }
    for pair in times.windows(2) {
        // negated so NaN times fail validation too
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(pair[1] > pair[0]) {
            return Err(Error::invalid("times", "must be strictly increasing"));
        }
    }
    check_time(times[0])?;
    let r0 = initial.rho10.norm();
    let modes = ModeDecomposition::new(params);
    times
        .iter()
        .map(|&t| {
            let (value, _) = modes.eval(t);
            if !(value.re.is_finite() && value.im.is_finite()) {
                return Err(Error::NonFinite { t });
            }
            Ok((t, r0 * value.norm()))
        })
        .collect()
}

/// Result of scanning a coherence trajectory for revivals.
#[derive(Debug, Clone, PartialEq)]
pub struct BackflowReport {
    /// Number of maximal intervals of coherence growth.
    pub revivals: usize,
    /// The `(start, end)` times of each growth interval.
    pub intervals: Vec<(f64, f64)>,
}

/// Finds maximal intervals on which `|rho10|` grows, i.e. where the
/// finite-difference slope exceeds [`SLOPE_TOL`]. Coherence growth is
/// impossible under memoryless decay, so any detected interval signals
/// information backflow from the bath.
///
/// The trajectory should be sampled densely (spacing around 0.01 or
/// finer) or short revivals may be missed.
pub fn detect_backflow(trajectory: &[(f64, f64)]) -> Result<BackflowReport> {
    if trajectory.len() < MIN_TRAJECTORY_POINTS {
        return Err(Error::SparseTrajectory {
            points: trajectory.len(),
            min: MIN_TRAJECTORY_POINTS,
        });
    }
    for pair in trajectory.windows(2) {
        // negated so NaN times fail validation too
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(pair[1].0 > pair[0].0) {
            return Err(Error::invalid("trajectory", "times must be strictly increasing"));
        }
    }
    let mut intervals: Vec<(f64, f64)> = Vec::new();
    let mut open: Option<(f64, f64)> = None;
    for pair in trajectory.windows(2) {
        let ((t0, v0), (t1, v1)) = (pair[0], pair[1]);
        let rising = (v1 - v0) / (t1 - t0) > SLOPE_TOL;
        match (rising, open) {
            (true, None) => open = Some((t0, t1)),
            (true, Some((start, _))) => open = Some((start, t1)),
            (false, Some(interval)) => {
                intervals.push(interval);
                open = None;
            }
            (false, None) => {}
        }
    }
    if let Some(interval) = open {
        intervals.push(interval);
    }
    Ok(BackflowReport {
        revivals: intervals.len(),
        intervals,
    })
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn params(gamma: f64, lambda: f64, delta: f64) -> BathParams {
        BathParams::new(gamma, lambda, delta).unwrap()
    }

    fn h(lambda: f64, delta: f64, t: f64) -> EvolutionAmplitude {
        h_closed_form(&params(1.0, lambda, delta), t).unwrap()
    }

    #[test]
    fn amplitude_is_exactly_one_at_time_zero() {
        for (lam, delta) in [(5.0, 0.0), (0.01, 1.0), (2.0, 0.0), (0.1, -0.5)] {
            let a = h(lam, delta, 0.0);
            assert_eq!(a.value, Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn closed_form_matches_reference_values() {
        // Wide spectrum on resonance: fast monotone decay, real amplitude.
        let a = h(5.0, 0.0, 10.0);
        assert_relative_eq!(a.value.re, 4.0898602871612222e-3, max_relative = 1e-13);
        assert_eq!(a.value.im, 0.0);
        assert_eq!(a.branch, Branch::Generic);

        // Narrow spectrum, detuned: long-lived rotating coherence.
        let a = h(0.01, 1.0, 500.0);
        assert_relative_eq!(a.value.re, -0.77031894223941575, max_relative = 1e-12);
        assert_relative_eq!(a.value.im, -0.59088710258588005, max_relative = 1e-12);
        assert_relative_eq!(a.value.norm(), 0.97084439575824336, max_relative = 1e-12);

        // Narrow spectrum on resonance at the same time.
        let a = h(0.01, 0.0, 500.0);
        assert_relative_eq!(a.value.re, -0.066076388009336245, max_relative = 1e-12);
        assert_eq!(a.value.im, 0.0);

        // Detuned intermediate width.
        let a = h(0.1, 0.5, 7.0);
        assert_relative_eq!(a.value.re, 0.63342220079620300, max_relative = 1e-12);
        assert_relative_eq!(a.value.im, -0.46351808867120251, max_relative = 1e-12);
    }

    #[test]
    fn degenerate_point_uses_series_and_matches_exact_value() {
        // lambda = 2 gamma on resonance makes the two modes coalesce;
        // there h(t) = exp(-lambda t / 2) (1 + lambda t / 2).
        let a = h(2.0, 0.0, 3.0);
        assert_eq!(a.branch, Branch::DegenerateSeries);
        assert_eq!(a.omega, Complex64::new(0.0, 0.0));
        assert_relative_eq!(a.value.re, 0.19914827347145577, max_relative = 1e-14);
        assert_eq!(a.value.im, 0.0);
    }

    #[test]
    fn series_and_generic_branches_agree_at_the_threshold() {
        // Perturb lambda so that |omega t / 2| sits right at the
        // switching threshold; both arms must agree there.
        let modes = ModeDecomposition::new(&params(1.0, 2.0 + 2e-12, 0.0));
        let t = 2.0 * DEGENERATE_THRESHOLD / modes.omega.norm();
        let x = (0.5 * modes.omega * t).norm();
        assert!((x - DEGENERATE_THRESHOLD).abs() < 1e-8 * DEGENERATE_THRESHOLD);
        let series = modes.eval_series(t);
        let generic = modes.eval_generic(t);
        assert!(
            (series - generic).norm() <= 1e-10 * generic.norm(),
            "series {series} vs generic {generic}"
        );
    }

    #[test]
    fn generic_branch_is_invariant_under_omega_sign_flip() {
        for (lam, delta, t) in [(5.0, 0.0, 1.0), (5.0, 0.0, 10.0), (0.1, 0.5, 7.0), (0.01, 1.0, 333.0)] {
            let modes = ModeDecomposition::new(&params(1.0, lam, delta));
            let flipped = ModeDecomposition {
                rate: modes.rate,
                omega: -modes.omega,
            };
            let a = modes.eval_generic(t);
            let b = flipped.eval_generic(t);
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }

    #[test]
    fn volterra_agrees_with_closed_form() {
        for (lam, delta) in [(5.0, 0.0), (0.01, 1.0), (2.0, 0.0)] {
            let p = params(1.0, lam, delta);
            let samples = volterra_solve(&p, 10.0, 1e-3).unwrap();
            let mut worst = 0.0f64;
            for s in &samples {
                let exact = h_closed_form(&p, s.t).unwrap().value;
                worst = worst.max((s.value - exact).norm());
            }
            assert!(worst < 1e-5, "lambda={lam} delta={delta}: worst {worst:.3e}");
        }
    }

    #[test]
    fn volterra_error_shrinks_quadratically_with_the_step() {
        let p = params(1.0, 0.1, 0.5);
        let err = |dt: f64| {
            volterra_solve(&p, 10.0, dt)
                .unwrap()
                .iter()
                .map(|s| (s.value - h_closed_form(&p, s.t).unwrap().value).norm())
                .fold(0.0f64, f64::max)
        };
        let coarse = err(2e-3);
        let fine = err(1e-3);
        assert!(
            coarse / fine >= 3.5,
            "halving the step only reduced the error by {:.2}x",
            coarse / fine
        );
    }

    #[test]
    fn direct_summation_reproduces_the_recursive_path() {
        let p = params(1.0, 0.1, 0.5);
        let fast = volterra_solve(&p, 5.0, 2e-3).unwrap();
        let slow = volterra_solve_direct(&p, 5.0, 2e-3).unwrap();
        assert_eq!(fast.len(), slow.len());
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a.value - b.value).norm() < 1e-12, "t = {}", a.t);
        }
    }

    #[test]
    fn volterra_start_and_frozen_endpoint() {
        let samples = volterra_solve(&params(1.0, 5.0, 0.0), 10.0, 1e-4).unwrap();
        assert_eq!(samples[0].value, Complex64::new(1.0, 0.0));
        let last = samples.last().unwrap();
        assert_eq!(last.t, 10.0);
        assert!((last.value.re - 4.0898602871612222e-3).abs() < 1e-7);
    }

    #[test]
    fn zero_coupling_keeps_the_amplitude_at_one() {
        let rate = Complex64::new(0.7, -0.3);
        let hs = volterra_kernel_recursive(0.0, rate, 1000, 1e-2).unwrap();
        assert!(hs.iter().all(|v| *v == Complex64::new(1.0, 0.0)));
        let hs = volterra_kernel_direct(0.0, rate, 100, 1e-2).unwrap();
        assert!(hs.iter().all(|v| *v == Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn grid_validation_and_budget() {
        assert!(matches!(
            time_grid(-1.0, 0.1),
            Err(Error::InvalidParam { name, .. }) if name == "t_max"
        ));
        assert!(matches!(
            time_grid(1.0, 0.0),
            Err(Error::InvalidParam { name, .. }) if name == "dt"
        ));
        assert!(matches!(
            time_grid(1.0, 3.0),
            Err(Error::InvalidParam { name, .. }) if name == "dt"
        ));
        assert!(matches!(
            time_grid(1.0, 1e-9),
            Err(Error::BudgetExceeded { .. })
        ));
        let g = time_grid(1.0, 0.25).unwrap();
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn rejects_invalid_times() {
        let p = params(1.0, 1.0, 0.0);
        assert!(h_closed_form(&p, -0.5).is_err());
        assert!(h_closed_form(&p, f64::NAN).is_err());
        assert!(coherence_trajectory(&p, &InitialState::plus(), &[]).is_err());
        assert!(coherence_trajectory(&p, &InitialState::plus(), &[0.0, 0.0]).is_err());
    }

    #[test]
    fn initial_state_validation() {
        assert!(InitialState::new(0.5, Complex64::new(0.5, 0.0)).is_ok());
        assert!(InitialState::new(1.0, Complex64::new(0.0, 0.0)).is_ok());
        assert!(matches!(
            InitialState::new(1.2, Complex64::new(0.0, 0.0)),
            Err(Error::InvalidParam { name, .. }) if name == "initial"
        ));
        assert!(InitialState::new(0.5, Complex64::new(0.6, 0.0)).is_err());
        assert!(InitialState::new(0.0, Complex64::new(0.1, 0.0)).is_err());
    }

    #[test]
    fn evolution_scales_population_and_coherence() {
        let p = params(1.0, 5.0, 0.0);
        let amp = h_closed_form(&p, 10.0).unwrap();
        let state = evolve(&InitialState::plus(), &amp).unwrap();
        assert_relative_eq!(state.coherence(), 2.0449301435806111e-3, max_relative = 1e-12);
        assert_eq!(state.rho11(), 0.5 * amp.value.norm_sqr());
        assert_eq!(state.rho01(), state.rho10().conj());
    }

    #[test]
    fn markovian_trajectory_has_no_revivals() {
        let p = params(1.0, 5.0, 0.0);
        let times = time_grid(20.0, 0.01).unwrap();
        let traj = coherence_trajectory(&p, &InitialState::plus(), &times).unwrap();
        let report = detect_backflow(&traj).unwrap();
        assert_eq!(report.revivals, 0);
        assert!(report.intervals.is_empty());
    }

    #[test]
    fn narrow_detuned_bath_produces_revivals() {
        let p = params(1.0, 0.01, 1.0);
        let times = time_grid(50.0, 0.01).unwrap();
        let traj = coherence_trajectory(&p, &InitialState::plus(), &times).unwrap();
        let report = detect_backflow(&traj).unwrap();
        assert!(report.revivals >= 1, "expected revivals, got none");
        for &(start, end) in &report.intervals {
            assert!(end > start);
        }
    }

    #[test]
    fn backflow_detection_edge_cases() {
        let flat: Vec<(f64, f64)> = (0..20).map(|i| (i as f64, 0.3)).collect();
        assert_eq!(detect_backflow(&flat).unwrap().revivals, 0);

        let sparse: Vec<(f64, f64)> = (0..5).map(|i| (i as f64, 0.3)).collect();
        assert!(matches!(
            detect_backflow(&sparse),
            Err(Error::SparseTrajectory { points: 5, .. })
        ));

        // Two separated bumps on a decaying background.
        let bumpy: Vec<(f64, f64)> = (0..100)
            .map(|i| {
                let t = i as f64 * 0.1;
                (t, (-0.2 * t).exp() * (1.0 + 0.5 * (t * 1.5).sin()))
            })
            .collect();
        let report = detect_backflow(&bumpy).unwrap();
        assert_eq!(report.revivals, report.intervals.len());
        assert!(report.revivals >= 2);
    }

    proptest! {
        #[test]
        fn amplitude_magnitude_never_exceeds_one(
            lam in 1e-3..10.0f64,
            delta in -5.0..5.0f64,
            gamma in 1e-2..4.0f64,
            t in 0.0..200.0f64,
        ) {
            let p = params(gamma, lam, delta);
            let a = h_closed_form(&p, t).unwrap();
            prop_assert!(a.value.norm() <= 1.0 + 1e-12);
        }

        #[test]
        fn evolution_preserves_trace_and_positivity(
            lam in 1e-3..10.0f64,
            delta in -5.0..5.0f64,
            gamma in 1e-2..4.0f64,
            t in 0.0..200.0f64,
            rho11 in 0.0..1.0f64,
            frac in 0.0..1.0f64,
            phase in 0.0..std::f64::consts::TAU,
        ) {
            let r = frac * (rho11 * (1.0 - rho11)).sqrt();
            let rho10 = r * Complex64::new(phase.cos(), phase.sin());
            let initial = InitialState::new(rho11, rho10).unwrap();
            let p = params(gamma, lam, delta);
            let amp = h_closed_form(&p, t).unwrap();
            let state = evolve(&initial, &amp).unwrap();
            prop_assert_eq!(state.rho11() + state.rho00(), 1.0);
            prop_assert!(state.rho11() >= 0.0);
            prop_assert!(
                state.rho10().norm_sqr() <= state.rho11() * state.rho00() + POSITIVITY_TOL
            );
        }
    }
}
