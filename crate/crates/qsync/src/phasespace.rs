//! Phase-space representation of the qubit state and the derived
//! synchronization measures.
//!
//! The Husimi function projects the state onto spin coherent states
//! `|theta, phi>`; integrating out the polar angle and subtracting the
//! uniform background leaves the phase distribution
//! `S(phi) = Re(rho10 exp(i phi)) / 4`, a pure cosine whose amplitude
//! `|rho10| / 4` quantifies phase locking and whose peak position is the
//! preferred phase.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::dynamics::QubitDensityMatrix;
use crate::error::{Error, Result};

/// Height of the flat background `1 / 2 pi` removed by the phase
/// distribution.
pub const UNIFORM_BACKGROUND: f64 = 1.0 / (2.0 * std::f64::consts::PI);

/// Husimi function `Q(theta, phi) = <theta, phi| rho |theta, phi> / 2 pi`
/// with the spin coherent state
/// `|theta, phi> = cos(theta/2) |1> + sin(theta/2) exp(-i phi) |0>`.
///
/// `theta` must lie in `[0, pi]`; `phi` is periodic. The value is
/// bounded by `1 / 2 pi` for any valid state.
pub fn husimi_q(state: &QubitDensityMatrix, theta: f64, phi: f64) -> Result<f64> {
    if !(theta.is_finite() && (0.0..=std::f64::consts::PI).contains(&theta)) {
        return Err(Error::invalid("theta", "must lie in [0, pi]"));
    }
    let (half_sin, half_cos) = (0.5 * theta).sin_cos();
    let cross = (state.rho10() * Complex64::from_polar(1.0, phi)).re;
    let dens = half_cos * half_cos * state.rho11()
        + half_sin * half_sin * state.rho00()
        + 2.0 * half_sin * half_cos * cross;
    Ok(dens * UNIFORM_BACKGROUND)
}

/// Phase distribution with the uniform background removed:
/// the polar marginal `int_0^pi Q sin(theta) dtheta` minus `1 / 2 pi`,
/// evaluated in closed form as `Re(rho10 exp(i phi)) / 4`.
pub fn shifted_phase_distribution(state: &QubitDensityMatrix, phi: f64) -> f64 {
    0.25 * (state.rho10() * Complex64::from_polar(1.0, phi)).re
}

/// Synchronization summary of one state: the peak of the phase
/// distribution, where it sits, and the coherence that feeds it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSummary {
    /// Maximum of the phase distribution, `r / 4`, at most `1/8`.
    pub s_max: f64,
    /// Phase that attains the maximum, wrapped to `[-pi, pi)`. Zero
    /// coherence leaves no preferred phase; the field is then 0 by
    /// convention.
    pub phi_star: f64,
    /// Coherence magnitude `r = |rho10|`.
    pub r: f64,
}

/// Computes the peak statistics of the phase distribution analytically.
pub fn phase_summary(state: &QubitDensityMatrix) -> PhaseSummary {
    let r = state.coherence();
    let phi_star = if r == 0.0 {
        0.0
    } else {
        wrap_angle(-state.rho10().arg())
    };
    PhaseSummary {
        s_max: 0.25 * r,
        phi_star,
        r,
    }
}

/// One sphere sample: polar angle, azimuth and the value of a
/// phase-space function there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereSample {
    pub theta: f64,
    pub phi: f64,
    pub value: f64,
}

/// Samples the Husimi function on an inclusive `ntheta x nphi` grid
/// covering `[0, pi] x [-pi, pi]`, polar angle slowest, with exact
/// endpoint angles. Intended for direct visualization of one state;
/// parameter scans go through [`crate::sweep`].
pub fn sample_husimi(
    state: &QubitDensityMatrix,
    ntheta: usize,
    nphi: usize,
) -> Result<Vec<SphereSample>> {
    if ntheta < 2 {
        return Err(Error::invalid("ntheta", "need at least 2 polar samples"));
    }
    if nphi < 2 {
        return Err(Error::invalid("nphi", "need at least 2 azimuthal samples"));
    }
    let mut samples = Vec::with_capacity(ntheta * nphi);
    for i in 0..ntheta {
        let theta = PI * i as f64 / (ntheta - 1) as f64;
        for j in 0..nphi {
            let phi = -PI + TAU * j as f64 / (nphi - 1) as f64;
            samples.push(SphereSample {
                theta,
                phi,
                value: husimi_q(state, theta, phi)?,
            });
        }
    }
    Ok(samples)
}

/// Wraps an angle to the half-open interval `[-pi, pi)`.
fn wrap_angle(x: f64) -> f64 {
    let wrapped = x.rem_euclid(std::f64::consts::TAU);
    if wrapped >= std::f64::consts::PI {
        wrapped - std::f64::consts::TAU
    } else {
        wrapped
    }
}
