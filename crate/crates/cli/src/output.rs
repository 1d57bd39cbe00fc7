//! Artefact rendering. CSV uses 17 significant digits, `.` as the decimal
//! separator and `\n` line endings; JSON keys keep insertion order.

use cavity_eit::{ResponseCurve, SpectrumCurve, SteadyState, WindowReport};
use num_complex::Complex;
use serde_json::{json, Map, Value};

use crate::config::{to_entries, RunConfig};

/// Scientific notation with 17 significant digits.
pub fn fmt_csv(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:.16e}")
    }
}

fn csv(header: [&str; 4], grid: &[f64], cols: [&[f64]; 3]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for (i, x) in grid.iter().enumerate() {
        out.push_str(&fmt_csv(*x));
        for col in cols {
            out.push(',');
            out.push_str(&fmt_csv(col[i]));
        }
        out.push('\n');
    }
    out
}

pub fn response_csv(curve: &ResponseCurve<f64>) -> String {
    csv(
        ["delta", "intensity_a", "intensity_b", "intensity_c"],
        &curve.grid,
        [&curve.intensity_a, &curve.intensity_b, &curve.intensity_c],
    )
}

pub fn spectrum_csv(curve: &SpectrumCurve<f64>) -> String {
    csv(["omega", "s_c", "s_a", "s_b"], &curve.grid, [&curve.s_c, &curve.s_a, &curve.s_b])
}

fn finish(value: Value) -> String {
    let mut s = serde_json::to_string_pretty(&value).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn pair(z: Complex<f64>) -> Value {
    json!([z.re, z.im])
}

pub fn steady_json(state: &SteadyState<f64>, warnings: &[String]) -> String {
    let [ic, ia, ib] = state.intensities();
    finish(json!({
        "amp_c": pair(state.amp_c),
        "amp_a": pair(state.amp_a),
        "amp_b": pair(state.amp_b),
        "intensity_c": ic,
        "intensity_a": ia,
        "intensity_b": ib,
        "warnings": warnings,
    }))
}

pub fn response_json(curve: &ResponseCurve<f64>) -> String {
    finish(json!({
        "delta": curve.grid,
        "intensity_a": curve.intensity_a,
        "intensity_b": curve.intensity_b,
        "intensity_c": curve.intensity_c,
        "degenerate": curve.degenerate,
    }))
}

pub fn spectrum_json(curve: &SpectrumCurve<f64>) -> String {
    finish(json!({
        "omega": curve.grid,
        "s_c": curve.s_c,
        "s_a": curve.s_a,
        "s_b": curve.s_b,
        "method": curve.method_tag.to_string(),
        "warnings": curve.warnings,
    }))
}

pub fn detect_json(config: &RunConfig, reports: &[(&str, WindowReport<f64>)]) -> String {
    let mut channels = Map::new();
    for (name, report) in reports {
        channels.insert(
            name.to_string(),
            serde_json::to_value(report).expect("window reports always serialize"),
        );
    }
    finish(json!({
        "source": config.detect_source.name(),
        "prominence": config.prominence,
        "channels": channels,
    }))
}

pub fn sidecar_json(config: &RunConfig, version: &str, warnings: &[String]) -> String {
    let mut flat = Map::new();
    for (k, v) in to_entries(config) {
        flat.insert(k.to_string(), Value::String(v));
    }
    finish(json!({
        "tool": "cavity-eit",
        "version": version,
        "config": flat,
        "params": config.params,
        "warnings": warnings,
    }))
}
