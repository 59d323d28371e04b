//! wasm-bindgen entry points for the demo page in `www/`.
//!
//! Every export returns a JSON string; failures surface as JS exceptions.

use boole_core::correlations::{
    classify, correlation_eigenvalues, elliptope_boundary, elliptope_value, CorrelationTriple,
};
use boole_core::quantum::{saturate_point, Spin};
use boole_core::raffles::{coverage_fraction, lhv_region_sampled_with_limits};
use boole_core::{Limits, EXACT_TOL};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest cloud shipped back to the page for drawing.
const MAX_DRAWN: usize = 4000;

pub fn classify_json(a: f64, b: f64, c: f64) -> Result<Value, String> {
    let t = CorrelationTriple::new(a, b, c).map_err(|e| e.to_string())?;
    Ok(json!({
        "triple": t,
        "value": elliptope_value(&t),
        "placement": classify(&t, EXACT_TOL),
        "eigenvalues": correlation_eigenvalues(&t),
    }))
}

pub fn mesh_json(grid: usize) -> Result<Value, String> {
    if !(2..=200).contains(&grid) {
        return Err("grid must be between 2 and 200".into());
    }
    Ok(json!(elliptope_boundary(grid)))
}

pub fn raffle_json(k: usize, zero_sum: bool, samples: usize, mc: u64, seed: u64) -> Result<Value, String> {
    let limits = Limits::default();
    let region = lhv_region_sampled_with_limits(k, zero_sum, samples, seed, &limits).map_err(|e| e.to_string())?;
    let coverage = coverage_fraction(&region, mc, seed).map_err(|e| e.to_string())?;
    let (points, faces, volume) = match region.cloud_hull() {
        Some(h) => (h.points().to_vec(), h.faces().to_vec(), h.volume()),
        None => (Vec::new(), Vec::new(), 0.0),
    };
    let stride = region.cloud.len().div_ceil(MAX_DRAWN).max(1);
    let drawn: Vec<_> = region.cloud.iter().step_by(stride).collect();
    Ok(json!({
        "k": k,
        "zero_sum": zero_sum,
        "cloud": drawn,
        "hull": { "points": points, "faces": faces, "volume": volume },
        "coverage": coverage,
    }))
}

pub fn saturate_json(spin: &str, a: f64, b: f64, c: f64) -> Result<Value, String> {
    let spin = Spin::parse(spin, &Limits::default()).map_err(|e| e.to_string())?;
    let t = CorrelationTriple::new(a, b, c).map_err(|e| e.to_string())?;
    let sat = saturate_point(spin, &t).map_err(|e| e.to_string())?;
    Ok(json!({
        "spin": spin.value(),
        "target": t,
        "directions": sat.directions,
        "achieved": sat.achieved,
        "max_deviation": sat.max_deviation,
    }))
}

fn export(r: Result<Value, String>) -> Result<String, JsError> {
    r.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

/// Elliptope value, placement and correlation-matrix eigenvalues of a triple.
#[wasm_bindgen]
pub fn classify_triple(a: f64, b: f64, c: f64) -> Result<String, JsError> {
    export(classify_json(a, b, c))
}

/// Boundary points of the elliptope.
#[wasm_bindgen]
pub fn elliptope_mesh(grid: usize) -> Result<String, JsError> {
    export(mesh_json(grid))
}

/// Sampled LHV raffle region: drawn cloud, hull and coverage.
#[wasm_bindgen]
pub fn raffle_region(k: usize, zero_sum: bool, samples: usize, mc: u32, seed: u32) -> Result<String, JsError> {
    export(raffle_json(k, zero_sum, samples, mc.into(), seed.into()))
}

/// Measurement directions on the spin singlet reproducing a triple.
#[wasm_bindgen]
pub fn saturate(spin: &str, a: f64, b: f64, c: f64) -> Result<String, JsError> {
    export(saturate_json(spin, a, b, c))
}
