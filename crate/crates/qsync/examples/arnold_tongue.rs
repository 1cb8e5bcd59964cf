//! Synchronization tongue in the detuning/coupling plane.
//!
//! Sweeps the long-time peak height of the phase distribution over a
//! detuning x coupling grid in a narrow bath. The phase preference dies
//! at resonance and survives at finite detuning, so the unsynchronized
//! region is a wedge around zero detuning that widens with the
//! coupling: an Arnold tongue with the roles of inside and outside
//! reversed relative to a driven classical oscillator.

use std::collections::BTreeMap;

use qsync::sweep::{run_sweep, tongue_boundary, AxisName, AxisSpec, Observable, SweepGrid};

fn main() -> qsync::Result<()> {
    let axes = vec![
        AxisSpec::linear(AxisName::Delta, -2.0, 2.0, 41)?,
        AxisSpec::linear(AxisName::Gamma, 0.1, 2.0, 16)?,
    ];
    let mut fixed = BTreeMap::new();
    fixed.insert(AxisName::Lambda, 0.01);
    fixed.insert(AxisName::T, 500.0);
    let grid = SweepGrid::new(axes, fixed, Observable::SMax)?;
    let result = run_sweep(&grid)?;

    let threshold = 0.06;
    println!("tongue of suppressed s_max at t = 500, lambda = 0.01 (threshold {threshold})");
    println!("{:>6} {:>10} {:>10} {:>8}", "gamma", "left", "right", "width");
    for row in tongue_boundary(&result, threshold)? {
        match row.boundary {
            Some((left, right)) => println!(
                "{:>6.2} {left:>10.3} {right:>10.3} {:>8.3}",
                row.row,
                row.width().unwrap()
            ),
            None => println!("{:>6.2} {:>10} {:>10} {:>8}", row.row, "-", "-", "-"),
        }
    }

    // The same data as a coarse map: '#' marks synchronized cells, '.'
    // the desynchronized wedge around resonance.
    println!("\nsynchronization map (delta across, gamma down):");
    let deltas = &result.axis_values[0];
    let gammas = &result.axis_values[1];
    for (j, gamma) in gammas.iter().enumerate() {
        let mut line = String::new();
        for i in 0..deltas.len() {
            let locked = result.values[i * gammas.len() + j] >= threshold;
            line.push(if locked { '#' } else { '.' });
        }
        println!("{gamma:>6.2} |{line}|");
    }
    Ok(())
}
