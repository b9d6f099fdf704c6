//! Browser bindings: boundary curves, spectrum membership and circulant
//! verification, each returning a JSON string.

use num_complex::Complex64;
use rcx_core::complexes::gen_circulant;
use rcx_core::spectrum::{boundary_curve, in_sd, nontrivial_bound, trivial_tuples, EigenTuple, SdkRegion};
use rcx_core::verifier::{verify_complex, VerifyOptions};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const MAX_SAMPLES: usize = 1 << 16;
const MAX_CIRCULANT: usize = 256;

fn pair(z: Complex64) -> Value {
    json!([z.re, z.im])
}

/// Boundary polygon of the region for color `k`, the trivial eigenvalues and
/// the nontrivial bound.
pub fn curve(d: usize, q: f64, k: usize, samples: usize) -> rcx_core::Result<Value> {
    let samples = samples.clamp(16, MAX_SAMPLES);
    let pts: Vec<Value> = boundary_curve(d, q, k, samples)?.iter().map(|s| pair(s.value)).collect();
    let region = SdkRegion::new(d, q, k, samples.max(1024))?;
    let trivial: Vec<Value> = trivial_tuples(d, q, 1)?.iter().map(|t| pair(t.tuple.get(k))).collect();
    Ok(json!({
        "points": pts,
        "simple": region.is_simple(),
        "trivial": trivial,
        "bound": nontrivial_bound(d, q, k).ok(),
    }))
}

/// Membership of a tuple given as interleaved `re, im` pairs.
pub fn check(d: usize, q: f64, lambda: &[f64], tol: f64) -> rcx_core::Result<Value> {
    if lambda.len() != 2 * d.saturating_sub(1) {
        return Err(rcx_core::Error::InvalidArgument(format!(
            "expected {} numbers (re, im per color), got {}",
            2 * d.saturating_sub(1),
            lambda.len()
        )));
    }
    let tuple = EigenTuple(lambda.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect());
    let v = in_sd(d, q, &tuple, tol)?;
    Ok(json!({
        "member": v.member,
        "roots": v.roots.iter().copied().map(pair).collect::<Vec<_>>(),
        "max_modulus_deviation": v.max_modulus_deviation,
        "backward_error": v.backward_error,
        "conjugacy_defect": v.conjugacy_defect,
    }))
}

/// Verdict for the circulant graph on `m` vertices with the given jumps.
pub fn circulant(m: usize, jumps: &[usize], q: Option<u64>) -> rcx_core::Result<Value> {
    if m > MAX_CIRCULANT {
        return Err(rcx_core::Error::InvalidArgument(format!("at most {MAX_CIRCULANT} vertices, got {m}")));
    }
    let cx = gen_circulant(m, jumps, q)?;
    let report = verify_complex(&cx, &VerifyOptions::default())?;
    let tuples: Vec<Value> = report
        .tuples
        .iter()
        .map(|t| {
            json!({
                "lambda": pair(t.tuple.get(1)),
                "multiplicity": t.multiplicity,
                "class": t.class.label(),
            })
        })
        .collect();
    Ok(json!({
        "q": report.q,
        "verdict": report.summary().lines().next().unwrap_or_default(),
        "exit_code": report.verdict.exit_code(),
        "bound": 2.0 * (report.q as f64).sqrt(),
        "offender": report.offender.as_ref().map(|o| pair(o.tuple.get(1))),
        "tuples": tuples,
        "notes": report.notes,
    }))
}

fn to_js(r: rcx_core::Result<Value>) -> Result<String, JsError> {
    r.map(|v| v.to_string()).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = boundaryCurve)]
pub fn boundary_curve_js(d: usize, q: f64, k: usize, samples: usize) -> Result<String, JsError> {
    to_js(curve(d, q, k, samples))
}

#[wasm_bindgen(js_name = spectrumCheck)]
pub fn spectrum_check_js(d: usize, q: f64, lambda: Vec<f64>, tol: f64) -> Result<String, JsError> {
    to_js(check(d, q, &lambda, tol))
}

#[wasm_bindgen(js_name = verifyCirculant)]
pub fn verify_circulant_js(m: usize, jumps: Vec<u32>, q: u32) -> Result<String, JsError> {
    let jumps: Vec<usize> = jumps.into_iter().map(|j| j as usize).collect();
    to_js(circulant(m, &jumps, (q > 0).then_some(q as u64)))
}
