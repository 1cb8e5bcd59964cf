//! Parameter sweeps: axis grids, the parallel evaluation engine, named
//! figure presets and tongue-boundary extraction.
//!
//! A sweep evaluates one observable over up to three axes while the
//! remaining parameters stay fixed. Rows are produced in row-major
//! order of the axis declaration (last axis fastest) and the engine
//! parallelizes over the outermost axis only, writing each chunk into
//! its own slot, so results are bitwise identical for any worker count.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::bath::BathParams;
use crate::dynamics::{
    coherence_trajectory, detect_backflow, evolve, h_closed_form, time_grid, InitialState,
    STEP_BUDGET,
};
use crate::error::{Error, Result};
use crate::phasespace::{husimi_q, phase_summary, shifted_phase_distribution};

/// Sample spacing used when the `revivals` observable integrates a
/// coherence trajectory up to its `t` parameter.
pub const REVIVAL_DT: f64 = 0.01;

/// Parameters that can serve as sweep axes or fixed values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisName {
    Delta,
    Gamma,
    Lambda,
    T,
    Phi,
    Theta,
}

impl AxisName {
    pub const ALL: [AxisName; 6] = [
        AxisName::Delta,
        AxisName::Gamma,
        AxisName::Lambda,
        AxisName::T,
        AxisName::Phi,
        AxisName::Theta,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            AxisName::Delta => "delta",
            AxisName::Gamma => "gamma",
            AxisName::Lambda => "lambda",
            AxisName::T => "t",
            AxisName::Phi => "phi",
            AxisName::Theta => "theta",
        }
    }
}

impl fmt::Display for AxisName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AxisName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AxisName::ALL
            .iter()
            .copied()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| {
                Error::Grid(format!(
                    "unknown parameter `{s}`; expected one of delta, gamma, lambda, t, phi, theta"
                ))
            })
    }
}

/// Spacing rule of an axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisScale {
    Linear,
    Log,
}

/// One sweep axis: an inclusive range sampled at `count` points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxisSpec {
    pub name: AxisName,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub scale: AxisScale,
}

impl AxisSpec {
    pub fn linear(name: AxisName, min: f64, max: f64, count: usize) -> Result<Self> {
        AxisSpec {
            name,
            min,
            max,
            count,
            scale: AxisScale::Linear,
        }
        .checked()
    }

    pub fn log(name: AxisName, min: f64, max: f64, count: usize) -> Result<Self> {
        AxisSpec {
            name,
            min,
            max,
            count,
            scale: AxisScale::Log,
        }
        .checked()
    }

    fn checked(self) -> Result<Self> {
        self.check()?;
        Ok(self)
    }

    pub fn check(&self) -> Result<()> {
        let label = self.name.as_str();
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(Error::Grid(format!(
                "axis `{label}` needs finite min < max, got {} and {}",
                self.min, self.max
            )));
        }
        if self.count < 2 {
            return Err(Error::Grid(format!(
                "axis `{label}` needs at least 2 points, got {}",
                self.count
            )));
        }
        if self.scale == AxisScale::Log && self.min <= 0.0 {
            return Err(Error::Grid(format!(
                "axis `{label}` uses log spacing, which requires min > 0"
            )));
        }
        Ok(())
    }

    /// Grid values; both endpoints are returned exactly.
    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value_at(i)).collect()
    }

    fn value_at(&self, i: usize) -> f64 {
        if i == 0 {
            return self.min;
        }
        if i == self.count - 1 {
            return self.max;
        }
        let frac = i as f64 / (self.count - 1) as f64;
        match self.scale {
            AxisScale::Linear => self.min + frac * (self.max - self.min),
            AxisScale::Log => (self.min.ln() + frac * (self.max.ln() - self.min.ln())).exp(),
        }
    }
}

impl fmt::Display for AxisSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}:{}", self.name, self.min, self.max, self.count)?;
        if self.scale == AxisScale::Log {
            write!(f, ":log")?;
        }
        Ok(())
    }
}

impl FromStr for AxisSpec {
    type Err = Error;

    /// Parses `name:min:max:count` or `name:min:max:count:log`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 && parts.len() != 5 {
            return Err(Error::Grid(format!(
                "axis spec `{s}` must have the form name:min:max:count[:log]"
            )));
        }
        let name: AxisName = parts[0].parse()?;
        let num = |field: &str, what: &str| -> Result<f64> {
            field.parse::<f64>().map_err(|_| {
                Error::Grid(format!("axis spec `{s}`: cannot parse {what} `{field}`"))
            })
        };
        let min = num(parts[1], "min")?;
        let max = num(parts[2], "max")?;
        let count: usize = parts[3].parse().map_err(|_| {
            Error::Grid(format!("axis spec `{s}`: cannot parse count `{}`", parts[3]))
        })?;
        let scale = match parts.get(4) {
            None => AxisScale::Linear,
            Some(&"log") => AxisScale::Log,
            Some(&"linear") => AxisScale::Linear,
            Some(other) => {
                return Err(Error::Grid(format!(
                    "axis spec `{s}`: unknown scale `{other}` (use linear or log)"
                )))
            }
        };
        AxisSpec {
            name,
            min,
            max,
            count,
            scale,
        }
        .checked()
    }
}

/// Observable evaluated at every grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    /// Coherence magnitude `|rho10(t)|`.
    AbsRho10,
    /// Husimi function at `(theta, phi)`.
    Q,
    /// Shifted phase distribution at `phi`.
    S,
    /// Peak of the phase distribution, `|rho10| / 4`.
    SMax,
    /// Location of the peak, in `[-pi, pi)`.
    PhiStar,
    /// Number of coherence revivals on `[0, t]`.
    Revivals,
}

impl Observable {
    pub const ALL: [Observable; 6] = [
        Observable::AbsRho10,
        Observable::Q,
        Observable::S,
        Observable::SMax,
        Observable::PhiStar,
        Observable::Revivals,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Observable::AbsRho10 => "abs_rho10",
            Observable::Q => "q",
            Observable::S => "s",
            Observable::SMax => "s_max",
            Observable::PhiStar => "phi_star",
            Observable::Revivals => "revivals",
        }
    }

    /// Parameters that must be supplied, as axes or fixed values.
    pub fn required_params(&self) -> &'static [AxisName] {
        use AxisName::*;
        match self {
            Observable::Q => &[Delta, Gamma, Lambda, T, Theta, Phi],
            Observable::S => &[Delta, Gamma, Lambda, T, Phi],
            _ => &[Delta, Gamma, Lambda, T],
        }
    }

    /// Name of the companion column emitted next to the observable, if
    /// any. The preferred phase is only meaningful together with the
    /// coherence that supports it, so `phi_star` rows carry both.
    pub fn aux_name(&self) -> Option<&'static str> {
        match self {
            Observable::PhiStar => Some("abs_rho10"),
            _ => None,
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Observable::ALL
            .iter()
            .copied()
            .find(|o| o.as_str() == s)
            .ok_or_else(|| {
                Error::Grid(format!(
                    "unknown observable `{s}`; expected one of abs_rho10, q, s, s_max, phi_star, revivals"
                ))
            })
    }
}

/// Full description of a sweep: up to three axes, fixed values for the
/// remaining parameters, the observable and the initial state.
///
/// Zero axes are allowed and describe a single-point evaluation.
#[derive(Debug, Clone)]
pub struct SweepGrid {
    pub axes: Vec<AxisSpec>,
    pub fixed: BTreeMap<AxisName, f64>,
    pub observable: Observable,
    pub initial: InitialState,
    /// Set when the grid came from [`figure_preset`].
    pub preset: Option<String>,
}

impl SweepGrid {
    pub fn new(
        axes: Vec<AxisSpec>,
        fixed: BTreeMap<AxisName, f64>,
        observable: Observable,
    ) -> Result<Self> {
        let grid = SweepGrid {
            axes,
            fixed,
            observable,
            initial: InitialState::default(),
            preset: None,
        };
        grid.validate()?;
        Ok(grid)
    }

    /// Total number of grid points (1 when there are no axes).
    pub fn points(&self) -> u128 {
        self.axes.iter().map(|a| a.count as u128).product()
    }

    pub fn validate(&self) -> Result<()> {
        if self.axes.len() > 3 {
            return Err(Error::Grid(format!(
                "at most 3 axes are supported, got {}",
                self.axes.len()
            )));
        }
        for axis in &self.axes {
            axis.check()?;
        }
        for (i, a) in self.axes.iter().enumerate() {
            if self.axes[i + 1..].iter().any(|b| b.name == a.name) {
                return Err(Error::Grid(format!("axis `{}` appears twice", a.name)));
            }
            if self.fixed.contains_key(&a.name) {
                return Err(Error::Grid(format!(
                    "parameter `{}` is both an axis and a fixed value",
                    a.name
                )));
            }
        }
        for (name, value) in &self.fixed {
            if !value.is_finite() {
                return Err(Error::Grid(format!("fixed value for `{name}` is not finite")));
            }
        }
        let required = self.observable.required_params();
        for name in required {
            let covered =
                self.axes.iter().any(|a| a.name == *name) || self.fixed.contains_key(name);
            if !covered {
                return Err(Error::Grid(format!(
                    "observable `{}` needs parameter `{name}`; add it as an axis or a fixed value",
                    self.observable
                )));
            }
        }
        for axis in &self.axes {
            if !required.contains(&axis.name) {
                return Err(Error::Grid(format!(
                    "parameter `{}` is not used by observable `{}`",
                    axis.name, self.observable
                )));
            }
        }
        for name in self.fixed.keys() {
            if !required.contains(name) {
                return Err(Error::Grid(format!(
                    "parameter `{name}` is not used by observable `{}`",
                    self.observable
                )));
            }
        }
        if self.points() > STEP_BUDGET as u128 {
            return Err(Error::BudgetExceeded {
                requested: self.points(),
                limit: STEP_BUDGET,
            });
        }
        Ok(())
    }
}

/// Evaluated sweep: the grid description plus one value per point in
/// row-major order, with an optional companion column.
#[derive(Debug, Clone)]
pub struct GridResult {
    pub axes: Vec<AxisSpec>,
    /// Axis values, precomputed once per axis.
    pub axis_values: Vec<Vec<f64>>,
    pub fixed: BTreeMap<AxisName, f64>,
    pub observable: Observable,
    pub initial: InitialState,
    pub preset: Option<String>,
    pub values: Vec<f64>,
    /// Companion column (see [`Observable::aux_name`]), same length as
    /// `values` when present.
    pub aux: Option<Vec<f64>>,
}

impl GridResult {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Axis coordinates of a row, in axis declaration order.
    pub fn coords(&self, row: usize) -> Vec<f64> {
        let mut rem = row;
        let mut out = vec![0.0; self.axes.len()];
        for (k, vals) in self.axis_values.iter().enumerate().rev() {
            out[k] = vals[rem % vals.len()];
            rem /= vals.len();
        }
        out
    }

    /// Value at the given per-axis indices.
    pub fn value_at(&self, indices: &[usize]) -> f64 {
        assert_eq!(indices.len(), self.axes.len(), "index arity mismatch");
        let mut flat = 0;
        for (idx, vals) in indices.iter().zip(&self.axis_values) {
            assert!(idx < &vals.len(), "axis index out of range");
            flat = flat * vals.len() + idx;
        }
        self.values[flat]
    }
}

/// All parameters of one evaluation point.
#[derive(Debug, Clone, Copy)]
struct PointParams {
    delta: f64,
    gamma: f64,
    lambda: f64,
    t: f64,
    phi: f64,
    theta: f64,
}

impl PointParams {
    fn from_fixed(fixed: &BTreeMap<AxisName, f64>) -> Self {
        let mut p = PointParams {
            delta: f64::NAN,
            gamma: f64::NAN,
            lambda: f64::NAN,
            t: f64::NAN,
            phi: f64::NAN,
            theta: f64::NAN,
        };
        for (name, &value) in fixed {
            p.set(*name, value);
        }
        p
    }

    fn set(&mut self, name: AxisName, value: f64) {
        match name {
            AxisName::Delta => self.delta = value,
            AxisName::Gamma => self.gamma = value,
            AxisName::Lambda => self.lambda = value,
            AxisName::T => self.t = value,
            AxisName::Phi => self.phi = value,
            AxisName::Theta => self.theta = value,
        }
    }
}

fn eval_point(
    observable: Observable,
    p: &PointParams,
    initial: &InitialState,
) -> Result<(f64, Option<f64>)> {
    let params = BathParams::new(p.gamma, p.lambda, p.delta)?;
    if observable == Observable::Revivals {
        let times = time_grid(p.t, REVIVAL_DT)?;
        let traj = coherence_trajectory(&params, initial, &times)?;
        return Ok((detect_backflow(&traj)?.revivals as f64, None));
    }
    let amp = h_closed_form(&params, p.t)?;
    let state = evolve(initial, &amp)?;
    let value = match observable {
        Observable::AbsRho10 => state.coherence(),
        Observable::Q => husimi_q(&state, p.theta, p.phi)?,
        Observable::S => shifted_phase_distribution(&state, p.phi),
        Observable::SMax => phase_summary(&state).s_max,
        Observable::PhiStar => {
            let summary = phase_summary(&state);
            return Ok((summary.phi_star, Some(summary.r)));
        }
        Observable::Revivals => unreachable!("handled above"),
    };
    Ok((value, None))
}

/// Runs a sweep, parallelizing over the outermost axis.
pub fn run_sweep(grid: &SweepGrid) -> Result<GridResult> {
    grid.validate()?;
    let axis_values: Vec<Vec<f64>> = grid.axes.iter().map(|a| a.values()).collect();
    let outer_count = axis_values.first().map(|v| v.len()).unwrap_or(1);
    let inner_count: usize = axis_values.iter().skip(1).map(|v| v.len()).product();
    let base = PointParams::from_fixed(&grid.fixed);
    let wants_aux = grid.observable.aux_name().is_some();

    let blocks: Vec<Result<(Vec<f64>, Vec<f64>)>> = (0..outer_count)
        .into_par_iter()
        .map(|i0| {
            let mut vals = Vec::with_capacity(inner_count);
            let mut aux = Vec::with_capacity(if wants_aux { inner_count } else { 0 });
            for j in 0..inner_count {
                let mut p = base;
                if let Some(v0) = axis_values.first() {
                    p.set(grid.axes[0].name, v0[i0]);
                }
                let mut rem = j;
                for (axis, avals) in grid.axes.iter().zip(&axis_values).skip(1).rev() {
                    p.set(axis.name, avals[rem % avals.len()]);
                    rem /= avals.len();
                }
                let (v, a) = eval_point(grid.observable, &p, &grid.initial)?;
                vals.push(v);
                if let Some(a) = a {
                    aux.push(a);
                }
            }
            Ok((vals, aux))
        })
        .collect();

    let total = outer_count * inner_count;
    let mut values = Vec::with_capacity(total);
    let mut aux = Vec::with_capacity(if wants_aux { total } else { 0 });
    for block in blocks {
        let (v, a) = block?;
        values.extend(v);
        aux.extend(a);
    }
    Ok(GridResult {
        axes: grid.axes.clone(),
        axis_values,
        fixed: grid.fixed.clone(),
        observable: grid.observable,
        initial: grid.initial,
        preset: grid.preset.clone(),
        values,
        aux: if wants_aux { Some(aux) } else { None },
    })
}

/// Identifiers accepted by [`figure_preset`].
pub const PRESET_IDS: [&str; 24] = [
    "fig1a", "fig1b", "fig1c", "fig1d", "fig2a", "fig2b", "fig3a", "fig3b", "fig3c", "fig3d",
    "fig4a", "fig4b", "fig4c", "fig4d", "fig5a", "fig5b", "fig6a", "fig6b", "sfig1", "sfig2",
    "sfig3a", "sfig3b", "sfig3c", "sfig3d",
];

fn delta_axis() -> AxisSpec {
    AxisSpec::linear(AxisName::Delta, -2.0, 2.0, 101).unwrap()
}

fn gamma_axis() -> AxisSpec {
    AxisSpec::linear(AxisName::Gamma, 0.02, 2.0, 100).unwrap()
}

fn lambda_axis() -> AxisSpec {
    AxisSpec::log(AxisName::Lambda, 0.001, 0.5, 100).unwrap()
}

fn phi_axis() -> AxisSpec {
    AxisSpec::linear(AxisName::Phi, -std::f64::consts::PI, std::f64::consts::PI, 181).unwrap()
}

fn theta_axis() -> AxisSpec {
    AxisSpec::linear(AxisName::Theta, 0.0, std::f64::consts::PI, 91).unwrap()
}

fn fixed_map(entries: &[(AxisName, f64)]) -> BTreeMap<AxisName, f64> {
    entries.iter().copied().collect()
}

/// Returns the ready-made grid behind a figure identifier.
///
/// The `fig*` families cover, in order: Husimi snapshots on the
/// `theta x phi` sphere, coherence decay and revival curves over time,
/// phase-distribution profiles over `delta x phi`, and `s_max` maps over
/// `delta x gamma` or `delta x lambda` whose dark central band forms the
/// synchronization tongue. The `sfig*` grids are companions: phase
/// profiles over time and the tongue maps at several spectral widths.
pub fn figure_preset(id: &str) -> Result<SweepGrid> {
    use AxisName::*;
    let grid = match id {
        "fig1a" => husimi_snapshot(5.0, 0.0, 0.0)?,
        "fig1b" => husimi_snapshot(5.0, 0.0, 10.0)?,
        "fig1c" => husimi_snapshot(0.01, 0.0, 10.0)?,
        "fig1d" => husimi_snapshot(0.01, 1.0, 500.0)?,
        "fig2a" => coherence_curves(5.0, 20.0)?,
        "fig2b" => coherence_curves(0.01, 500.0)?,
        "fig3a" => phase_profile(5.0, 1.0)?,
        "fig3b" => phase_profile(5.0, 2.0)?,
        "fig3c" => phase_profile(5.0, 5.0)?,
        "fig3d" => phase_profile(5.0, 30.0)?,
        "fig4a" => phase_profile(0.01, 1.0)?,
        "fig4b" => phase_profile(0.01, 20.0)?,
        "fig4c" => phase_profile(0.01, 100.0)?,
        "fig4d" => phase_profile(0.01, 500.0)?,
        "fig5a" => tongue_over_gamma(0.01)?,
        "fig5b" => tongue_over_gamma(0.1)?,
        "fig6a" => SweepGrid::new(
            vec![delta_axis(), lambda_axis()],
            fixed_map(&[(Gamma, 1.0), (T, 10.0)]),
            Observable::SMax,
        )?,
        "fig6b" => SweepGrid::new(
            vec![delta_axis(), lambda_axis()],
            fixed_map(&[(Gamma, 1.0), (T, 100.0)]),
            Observable::SMax,
        )?,
        "sfig1" => phase_over_time(5.0, 10.0)?,
        "sfig2" => phase_over_time(0.01, 500.0)?,
        "sfig3a" => tongue_over_gamma(0.01)?,
        "sfig3b" => tongue_over_gamma(0.05)?,
        "sfig3c" => tongue_over_gamma(0.1)?,
        "sfig3d" => tongue_over_gamma(0.2)?,
        _ => return Err(Error::UnknownPreset(id.to_string())),
    };
    Ok(SweepGrid {
        preset: Some(id.to_string()),
        ..grid
    })
}

fn husimi_snapshot(lambda: f64, delta: f64, t: f64) -> Result<SweepGrid> {
    use AxisName::*;
    SweepGrid::new(
        vec![theta_axis(), phi_axis()],
        fixed_map(&[(Lambda, lambda), (Delta, delta), (Gamma, 1.0), (T, t)]),
        Observable::Q,
    )
}

fn coherence_curves(lambda: f64, t_max: f64) -> Result<SweepGrid> {
    use AxisName::*;
    SweepGrid::new(
        vec![
            AxisSpec::linear(Delta, 0.0, 1.0, 2)?,
            AxisSpec::linear(T, 0.0, t_max, 2001)?,
        ],
        fixed_map(&[(Lambda, lambda), (Gamma, 1.0)]),
        Observable::AbsRho10,
    )
}

fn phase_profile(lambda: f64, t: f64) -> Result<SweepGrid> {
    use AxisName::*;
    SweepGrid::new(
        vec![delta_axis(), phi_axis()],
        fixed_map(&[(Lambda, lambda), (Gamma, 1.0), (T, t)]),
        Observable::S,
    )
}

fn phase_over_time(lambda: f64, t_max: f64) -> Result<SweepGrid> {
    use AxisName::*;
    SweepGrid::new(
        vec![AxisSpec::linear(T, 0.0, t_max, 6)?, phi_axis()],
        fixed_map(&[(Lambda, lambda), (Delta, 1.0), (Gamma, 1.0)]),
        Observable::S,
    )
}

fn tongue_over_gamma(lambda: f64) -> Result<SweepGrid> {
    use AxisName::*;
    SweepGrid::new(
        vec![delta_axis(), gamma_axis()],
        fixed_map(&[(Lambda, lambda), (T, 500.0)]),
        Observable::SMax,
    )
}

/// Convenience wrapper: build and evaluate a preset in one call.
pub fn run_preset(id: &str) -> Result<GridResult> {
    run_sweep(&figure_preset(id)?)
}

/// Tongue boundary for one row of the non-`delta` axis.
#[derive(Debug, Clone, PartialEq)]
pub struct TongueRow {
    /// Value of the non-`delta` axis on this row.
    pub row: f64,
    /// `(left, right)` detunings where the observable first reaches the
    /// threshold moving outward from `delta = 0`, or `None` when a side
    /// never crosses. A row already at threshold in the center reports
    /// a zero-width boundary.
    pub boundary: Option<(f64, f64)>,
}

impl TongueRow {
    /// Width of the below-threshold band, if bounded.
    pub fn width(&self) -> Option<f64> {
        self.boundary.map(|(left, right)| right - left)
    }
}

/// Extracts the synchronization-tongue boundary from a 2-D grid with a
/// `delta` axis: per row of the other axis, the two detunings where the
/// value first crosses `threshold` walking outward from the center,
/// linearly interpolated between grid nodes.
pub fn tongue_boundary(result: &GridResult, threshold: f64) -> Result<Vec<TongueRow>> {
    if result.axes.len() != 2 {
        return Err(Error::Dimensionality {
            expected: 2,
            got: result.axes.len(),
        });
    }
    if !threshold.is_finite() {
        return Err(Error::invalid("threshold", "must be finite"));
    }
    let delta_idx = result
        .axes
        .iter()
        .position(|a| a.name == AxisName::Delta)
        .ok_or_else(|| Error::Grid("tongue extraction needs a `delta` axis".to_string()))?;
    let row_idx = 1 - delta_idx;
    let deltas = &result.axis_values[delta_idx];
    let rows = &result.axis_values[row_idx];
    let center = deltas
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.abs().total_cmp(&b.abs()))
        .map(|(i, _)| i)
        .expect("axis has at least 2 points");

    let value = |di: usize, ri: usize| -> f64 {
        if delta_idx == 0 {
            result.values[di * rows.len() + ri]
        } else {
            result.values[ri * deltas.len() + di]
        }
    };

    let mut out = Vec::with_capacity(rows.len());
    for (ri, &row) in rows.iter().enumerate() {
        if value(center, ri) >= threshold {
            out.push(TongueRow {
                row,
                boundary: Some((deltas[center], deltas[center])),
            });
            continue;
        }
        let cross = |indices: &mut dyn Iterator<Item = usize>| -> Option<f64> {
            let mut prev = center;
            for i in indices {
                let v = value(i, ri);
                if v >= threshold {
                    let (d0, v0) = (deltas[prev], value(prev, ri));
                    let (d1, v1) = (deltas[i], v);
                    return Some(d0 + (threshold - v0) * (d1 - d0) / (v1 - v0));
                }
                prev = i;
            }
            None
        };
        let right = cross(&mut (center + 1..deltas.len()));
        let left = cross(&mut (0..center).rev());
        out.push(TongueRow {
            row,
            boundary: left.zip(right),
        });
    }
    Ok(out)
}
