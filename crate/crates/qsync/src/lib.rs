//! Exact dissipative dynamics and phase-space synchronization of a
//! qubit coupled to a Lorentzian bosonic bath.
//!
//! A two-level system decaying into an empty structured reservoir stays
//! exactly solvable: the excited-state amplitude obeys a memory-kernel
//! equation whose kernel is a single complex exponential, so every
//! density-matrix element follows from one complex decay amplitude.
//! Narrow baths (width below twice the coupling) make that amplitude
//! oscillate, information flows back from the reservoir, and the phase
//! distribution on the Bloch sphere can keep a preferred phase long
//! after a wide bath would have erased it. This crate computes the
//! amplitude in closed form, integrates the memory equation as an
//! independent check, evaluates the Husimi function and its phase
//! statistics, and scans all of it over parameter grids with
//! deterministic, hashable CSV output.
//!
//! # Modules
//!
//! - [`bath`]: Lorentzian spectral density, memory kernel and the
//!   Markovian/non-Markovian regime split.
//! - [`dynamics`]: closed-form decay amplitude, Volterra integrator,
//!   density-matrix evolution and coherence-revival detection.
//! - [`phasespace`]: Husimi function, shifted phase distribution and
//!   peak statistics.
//! - [`sweep`]: parameter grids, figure presets and phase-locking
//!   tongue boundaries.
//! - [`export`]: long and matrix CSV layouts plus a metadata sidecar
//!   with an FNV-1a content hash.
//! - [`cli`]: the `qsync` binary front end.
//!
//! # Quick start
//!
//! ```
//! use qsync::bath::BathParams;
//! use qsync::dynamics::{evolve, h_closed_form, InitialState};
//! use qsync::phasespace::phase_summary;
//!
//! // Narrow detuned bath, deep in the non-Markovian regime.
//! let bath = BathParams::new(1.0, 0.01, 1.0)?;
//! let amp = h_closed_form(&bath, 500.0)?;
//! let state = evolve(&InitialState::plus(), &amp)?;
//! let peak = phase_summary(&state);
//! assert!(peak.s_max > 0.1);
//! # Ok::<(), qsync::Error>(())
//! ```
//!
//! # Examples
//!
//! Each major capability has a runnable example under `examples/`:
//!
//! ```bash
//! cargo run --release --example evolve_trajectory
//! cargo run --release --example volterra_cross_check
//! cargo run --release --example husimi_snapshot
//! cargo run --release --example phase_distribution
//! cargo run --release --example coherence_revivals
//! cargo run --release --example arnold_tongue
//! ```
//!
//! The same functionality is scriptable through the `qsync` binary; see
//! `qsync --help`.

pub mod bath;
pub mod cli;
pub mod dynamics;
mod error;
pub mod export;
pub mod phasespace;
pub mod sweep;

pub use error::{Error, Result};
