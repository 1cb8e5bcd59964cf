//! Lorentzian bath model: parameter set, spectral density, two-point
//! correlation kernel and memory-regime classification.
//!
//! All rates and frequencies are dimensionless, expressed in units of the
//! reference decay rate `gamma0` (the weak-coupling decay rate on
//! resonance). Times are measured in units of `1/gamma0`. The
//! [`BathParams::from_physical`] constructor rescales dimensionful inputs.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Half-width of the band around `lambda = 2 gamma` that is reported as
/// [`RegimeLabel::Boundary`] instead of one of the two open regimes.
pub const REGIME_TOL: f64 = 1e-12;

/// Coupling and bath parameters, in units of the reference decay rate.
///
/// `gamma` is the coupling strength, `lambda` the spectral width of the
/// bath (inverse memory time) and `delta` the detuning of the spectral
/// peak from the qubit frequency. The struct is only constructible
/// through the validating constructors, so every instance satisfies
/// `gamma > 0`, `lambda > 0` and finite `delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathParams {
    gamma: f64,
    lambda: f64,
    delta: f64,
}

impl BathParams {
    /// Builds a parameter set already expressed in units of the
    /// reference rate.
    pub fn new(gamma: f64, lambda: f64, delta: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::invalid("gamma", "must be finite and strictly positive"));
        }
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::invalid("lambda", "must be finite and strictly positive"));
        }
        if !delta.is_finite() {
            return Err(Error::invalid("delta", "must be finite"));
        }
        Ok(BathParams { gamma, lambda, delta })
    }

    /// Builds a parameter set from dimensionful rates, dividing each by
    /// the reference decay rate `gamma0`.
    pub fn from_physical(gamma0: f64, gamma: f64, lambda: f64, delta: f64) -> Result<Self> {
        if !(gamma0.is_finite() && gamma0 > 0.0) {
            return Err(Error::invalid("gamma0", "must be finite and strictly positive"));
        }
        BathParams::new(gamma / gamma0, lambda / gamma0, delta / gamma0)
    }

    /// Coupling strength.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Spectral width (inverse bath memory time).
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Detuning of the spectral peak from the qubit frequency.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Prefactor `gamma * lambda / 2` of the correlation kernel, equal
    /// to the total integrated spectral weight.
    pub fn kernel_amplitude(&self) -> f64 {
        0.5 * self.gamma * self.lambda
    }

    /// Complex decay rate `lambda - i delta` of the correlation kernel.
    pub fn kernel_rate(&self) -> Complex64 {
        Complex64::new(self.lambda, -self.delta)
    }
}

/// Memory character of the bath for a given parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeLabel {
    /// Wide spectrum, `lambda > 2 gamma`: monotone decay.
    Markovian,
    /// Narrow spectrum, `lambda < 2 gamma`: memory effects and revivals.
    NonMarkovian,
    /// Within [`REGIME_TOL`] of the crossover `lambda = 2 gamma`.
    Boundary,
}

/// Classifies the bath memory regime by comparing the spectral width
/// against twice the coupling strength.
pub fn classify_regime(params: &BathParams) -> RegimeLabel {
    let gap = params.lambda - 2.0 * params.gamma;
    if gap.abs() <= REGIME_TOL {
        RegimeLabel::Boundary
    } else if gap > 0.0 {
        RegimeLabel::Markovian
    } else {
        RegimeLabel::NonMarkovian
    }
}

/// Lorentzian spectral density as a function of the detuning
/// `u = omega_q - omega` between the qubit frequency and the bath mode.
///
/// The peak sits at `u = delta` with half-width `lambda` and peak value
/// `gamma / 2 pi`; the total integral is `gamma * lambda / 2`.
pub fn spectral_density(params: &BathParams, detuning: f64) -> f64 {
    let x = detuning - params.delta;
    let l2 = params.lambda * params.lambda;
    params.gamma * l2 / (2.0 * std::f64::consts::PI * (x * x + l2))
}

/// Two-point bath correlation kernel `f(dt)` for a non-negative time
/// separation, the Fourier transform of the spectral density:
/// `f(dt) = (gamma * lambda / 2) exp(-(lambda - i delta) dt)`.
pub fn correlation_kernel(params: &BathParams, dt: f64) -> Complex64 {
    debug_assert!(dt >= 0.0, "kernel is defined for non-negative separations");
    params.kernel_amplitude() * (-params.kernel_rate() * dt).exp()
}
