//! Stable serialization of sweep results: long-format CSV, a matrix
//! layout for contour plotting, and a JSON metadata sidecar with a
//! content hash.
//!
//! Floats are written in the shortest decimal form that parses back to
//! the identical bits, lines end with a single LF, and the file ends
//! with exactly one final LF, so byte-identical inputs always produce
//! byte-identical files and the FNV-1a hash in the metadata can be
//! recomputed from the CSV alone.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sweep::{AxisSpec, GridResult};

/// 64-bit FNV-1a offset basis.
pub const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
/// 64-bit FNV-1a prime.
pub const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// 64-bit FNV-1a hash of a byte slice.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = FNV_OFFSET;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(FNV_PRIME);
    }
    hash
}

/// Shortest decimal representation that round-trips to the same f64.
pub(crate) fn format_value(v: f64) -> String {
    format!("{v}")
}

fn check_finite(result: &GridResult) -> Result<()> {
    for (row, &v) in result.values.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFiniteOutput { row });
        }
    }
    if let Some(aux) = &result.aux {
        for (row, &v) in aux.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteOutput { row });
            }
        }
    }
    Ok(())
}

/// Renders the canonical long format: one header line, then one line
/// per grid point with the axis coordinates in declaration order,
/// the observable value, and the companion column when present.
pub fn render_long_csv(result: &GridResult) -> Result<String> {
    check_finite(result)?;
    let mut out = String::new();
    for axis in &result.axes {
        out.push_str(axis.name.as_str());
        out.push(',');
    }
    out.push_str(result.observable.as_str());
    if let Some(name) = result.observable.aux_name() {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for row in 0..result.len() {
        for coord in result.coords(row) {
            out.push_str(&format_value(coord));
            out.push(',');
        }
        out.push_str(&format_value(result.values[row]));
        if let Some(aux) = &result.aux {
            out.push(',');
            out.push_str(&format_value(aux[row]));
        }
        out.push('\n');
    }
    Ok(out)
}

/// Writes the long format and reports the number of bytes written.
pub fn write_long_csv<W: Write>(result: &GridResult, destination: &mut W) -> Result<u64> {
    let rendered = render_long_csv(result)?;
    destination.write_all(rendered.as_bytes())?;
    Ok(rendered.len() as u64)
}

/// Renders a 2-axis result as a matrix: the first axis runs across the
/// columns, the second down the rows, with a blank corner cell. Only
/// the primary observable is emitted in this layout.
pub fn render_matrix(result: &GridResult) -> Result<String> {
    if result.axes.len() != 2 {
        return Err(Error::Dimensionality {
            expected: 2,
            got: result.axes.len(),
        });
    }
    check_finite(result)?;
    let cols = &result.axis_values[0];
    let rows = &result.axis_values[1];
    let mut out = String::new();
    for c in cols {
        out.push(',');
        out.push_str(&format_value(*c));
    }
    out.push('\n');
    for (j, r) in rows.iter().enumerate() {
        out.push_str(&format_value(*r));
        for i in 0..cols.len() {
            out.push(',');
            out.push_str(&format_value(result.values[i * rows.len() + j]));
        }
        out.push('\n');
    }
    Ok(out)
}

/// Writes the matrix format and reports the number of bytes written.
pub fn write_matrix<W: Write>(result: &GridResult, destination: &mut W) -> Result<u64> {
    let rendered = render_matrix(result)?;
    destination.write_all(rendered.as_bytes())?;
    Ok(rendered.len() as u64)
}

/// Initial-state fields as serialized in the metadata sidecar.
#[derive(Debug, Clone, Serialize)]
pub struct InitialStateMeta {
    pub rho11: f64,
    pub re_rho10: f64,
    pub im_rho10: f64,
}

/// Provenance sidecar written next to every figure CSV: the grid
/// definition, tool version, a content hash of the canonical CSV bytes
/// and the creation time.
#[derive(Debug, Clone, Serialize)]
pub struct RunMetadata {
    pub preset: Option<String>,
    pub observable: String,
    pub axes: Vec<AxisSpec>,
    pub fixed: BTreeMap<String, f64>,
    pub initial: InitialStateMeta,
    pub rows: usize,
    pub version: String,
    pub hash_algorithm: String,
    pub grid_hash: String,
    pub timestamp: String,
}

impl RunMetadata {
    /// Describes a result whose canonical long-format rendering is
    /// `csv`; the stored hash is the FNV-1a of those exact bytes.
    pub fn describe(result: &GridResult, csv: &str) -> Self {
        let rho10 = result.initial.rho10();
        RunMetadata {
            preset: result.preset.clone(),
            observable: result.observable.as_str().to_string(),
            axes: result.axes.clone(),
            fixed: result
                .fixed
                .iter()
                .map(|(k, v)| (k.as_str().to_string(), *v))
                .collect(),
            initial: InitialStateMeta {
                rho11: result.initial.rho11(),
                re_rho10: rho10.re,
                im_rho10: rho10.im,
            },
            rows: result.len(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            hash_algorithm: "fnv1a-64".to_string(),
            grid_hash: format!("{:016x}", fnv1a64(csv.as_bytes())),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self)
            .expect("metadata has no non-serializable fields");
        text.push('\n');
        text
    }
}

/// Writes the metadata sidecar and reports the number of bytes written.
pub fn write_metadata<W: Write>(meta: &RunMetadata, destination: &mut W) -> Result<u64> {
    let rendered = meta.to_json();
    destination.write_all(rendered.as_bytes())?;
    Ok(rendered.len() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::InitialState;
    use crate::sweep::{run_preset, AxisName, Observable};
    use proptest::prelude::*;

    fn small_result(values: Vec<f64>) -> GridResult {
        let axes = vec![AxisSpec::linear(AxisName::T, 0.0, 1.0, 2).unwrap()];
        let axis_values = vec![axes[0].values()];
        GridResult {
            axes,
            axis_values,
            fixed: BTreeMap::new(),
            observable: Observable::AbsRho10,
            initial: InitialState::default(),
            preset: None,
            values,
            aux: None,
        }
    }

    #[test]
    fn fnv1a64_known_vectors() {
        assert_eq!(fnv1a64(b""), 0xcbf29ce484222325);
        assert_eq!(fnv1a64(b"a"), 0xaf63dc4c8601ec8c);
        assert_eq!(fnv1a64(b"foobar"), 0x85944171f73967e8);
    }

    #[test]
    fn long_csv_layout_is_exact() {
        let csv = render_long_csv(&small_result(vec![1.0, 0.5])).unwrap();
        assert_eq!(csv, "t,abs_rho10\n0,1\n1,0.5\n");
    }

    #[test]
    fn long_csv_with_no_rows_is_header_only() {
        let csv = render_long_csv(&small_result(vec![])).unwrap();
        assert_eq!(csv, "t,abs_rho10\n");
    }

    #[test]
    fn long_csv_ends_with_exactly_one_newline() {
        let csv = render_long_csv(&small_result(vec![0.25, 0.125])).unwrap();
        assert!(csv.ends_with('\n'));
        assert!(!csv.ends_with("\n\n"));
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn non_finite_values_are_refused() {
        assert!(matches!(
            render_long_csv(&small_result(vec![1.0, f64::NAN])),
            Err(Error::NonFiniteOutput { row: 1 })
        ));
        assert!(matches!(
            render_long_csv(&small_result(vec![f64::INFINITY, 0.0])),
            Err(Error::NonFiniteOutput { row: 0 })
        ));
        assert!(render_matrix(&small_result(vec![1.0, f64::NAN])).is_err());
    }

    #[test]
    fn matrix_layout_is_exact() {
        let axes = vec![
            AxisSpec::linear(AxisName::Delta, 0.0, 1.0, 2).unwrap(),
            AxisSpec::linear(AxisName::Gamma, 1.0, 2.0, 2).unwrap(),
        ];
        let axis_values: Vec<Vec<f64>> = axes.iter().map(|a| a.values()).collect();
        let result = GridResult {
            axes,
            axis_values,
            fixed: BTreeMap::new(),
            observable: Observable::SMax,
            initial: InitialState::default(),
            preset: None,
            values: vec![10.0, 20.0, 30.0, 40.0],
            aux: None,
        };
        let matrix = render_matrix(&result).unwrap();
        assert_eq!(matrix, ",0,1\n1,10,30\n2,20,40\n");
    }

    #[test]
    fn matrix_requires_two_axes() {
        assert!(matches!(
            render_matrix(&small_result(vec![1.0, 2.0])),
            Err(Error::Dimensionality { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn preset_output_round_trips_through_csv() {
        let result = run_preset("sfig1").unwrap();
        let csv = render_long_csv(&result).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("t,phi,s"));
        let mut parsed = 0usize;
        for (row, line) in lines.enumerate() {
            let fields: Vec<&str> = line.split(',').collect();
            assert_eq!(fields.len(), 3);
            let coords = result.coords(row);
            for (field, coord) in fields[..2].iter().zip(coords) {
                assert_eq!(field.parse::<f64>().unwrap().to_bits(), coord.to_bits());
            }
            let value: f64 = fields[2].parse().unwrap();
            assert_eq!(value.to_bits(), result.values[row].to_bits());
            parsed += 1;
        }
        assert_eq!(parsed, result.len());
    }

    #[test]
    fn metadata_describes_the_result() {
        let result = run_preset("sfig1").unwrap();
        let csv = render_long_csv(&result).unwrap();
        let meta = RunMetadata::describe(&result, &csv);
        assert_eq!(meta.preset.as_deref(), Some("sfig1"));
        assert_eq!(meta.observable, "s");
        assert_eq!(meta.rows, result.len());
        assert_eq!(meta.hash_algorithm, "fnv1a-64");
        assert_eq!(meta.grid_hash, format!("{:016x}", fnv1a64(csv.as_bytes())));
        assert_eq!(meta.fixed["lambda"], 5.0);
        assert_eq!(meta.initial.rho11, 0.5);

        let json = meta.to_json();
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["grid_hash"], meta.grid_hash.as_str());
        assert_eq!(parsed["axes"][0]["name"], "t");
        assert_eq!(parsed["axes"][1]["count"], 181);
        assert!(parsed["timestamp"]
            .as_str()
            .unwrap()
            .parse::<chrono::DateTime<chrono::Utc>>()
            .is_ok());
    }

    #[test]
    fn rendering_is_deterministic() {
        let result = run_preset("sfig1").unwrap();
        assert_eq!(
            render_long_csv(&result).unwrap(),
            render_long_csv(&result).unwrap()
        );
    }

    proptest! {
        #[test]
        fn float_formatting_round_trips(bits in any::<u64>()) {
            let v = f64::from_bits(bits);
            prop_assume!(v.is_finite());
            let text = format_value(v);
            let back: f64 = text.parse().unwrap();
            prop_assert_eq!(back.to_bits(), v.to_bits());
        }
    }
}
