//! Husimi function on the Bloch sphere, before and after decay.
//!
//! Renders a coarse ASCII heatmap of Q(theta, phi) for the plus state
//! and for the same state after evolving in a wide and in a narrow
//! bath. The wide bath flattens the azimuthal structure toward the
//! uniform background 1/(2 pi); the narrow bath keeps a localized spot.

use qsync::bath::BathParams;
use qsync::dynamics::{evolve, h_closed_form, InitialState};
use qsync::phasespace::{sample_husimi, UNIFORM_BACKGROUND};

const SHADES: &[u8] = b" .:-=+*#%@";

fn heatmap(state: &qsync::dynamics::QubitDensityMatrix) -> qsync::Result<()> {
    let (ntheta, nphi) = (13, 49);
    let samples = sample_husimi(state, ntheta, nphi)?;
    let max = samples.iter().map(|s| s.value).fold(0.0f64, f64::max);
    for row in samples.chunks(nphi) {
        let mut line = String::new();
        for sample in row {
            let level = (sample.value / max * (SHADES.len() - 1) as f64).round();
            line.push(SHADES[level as usize] as char);
        }
        println!("  |{line}|");
    }
    println!(
        "  max Q = {max:.5}, uniform background = {UNIFORM_BACKGROUND:.5} (theta down, phi across)"
    );
    Ok(())
}

fn main() -> qsync::Result<()> {
    let initial = InitialState::plus();

    println!("plus state at t = 0:");
    let identity = h_closed_form(&BathParams::new(1.0, 5.0, 0.0)?, 0.0)?;
    heatmap(&evolve(&initial, &identity)?)?;

    println!("\nafter a wide bath (lambda = 5) at t = 10:");
    let wide = h_closed_form(&BathParams::new(1.0, 5.0, 0.0)?, 10.0)?;
    heatmap(&evolve(&initial, &wide)?)?;

    println!("\nafter a narrow bath (lambda = 0.01) at t = 10:");
    let narrow = h_closed_form(&BathParams::new(1.0, 0.01, 0.0)?, 10.0)?;
    heatmap(&evolve(&initial, &narrow)?)?;
    Ok(())
}
