//! Thin wasm-bindgen layer over `quasilr` for the static page in `www/`.
//!
//! The plain functions return `Result<_, String>` so they can be tested off the browser;
//! the exported wrappers turn errors into JS exceptions.

use num_bigint::BigInt;
use num_rational::BigRational;
use quasilr::algebra::{FieldScalar, NumberField};
use quasilr::complexity::analyze;
use quasilr::diophantine::cf_expand;
use quasilr::fixtures;
use quasilr::io::{parse_scheme, scheme_to_json};
use quasilr::report::analysis_report;
use quasilr::scheme::Scheme;
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest half-width the plot accepts; bigger boxes stall the page.
pub const MAX_BOX: u32 = 40;

fn load(json: &str) -> Result<Scheme, String> {
    let s = parse_scheme(json).map_err(|e| e.to_string())?;
    let v = s.validate();
    if !v.valid {
        return Err(format!("invalid scheme: {}", v.failures.join("; ")));
    }
    Ok(s)
}

pub fn fixture_names() -> Vec<&'static str> {
    fixtures::all().into_iter().map(|(n, _)| n).collect()
}

pub fn fixture(name: &str) -> Result<String, String> {
    fixtures::all().into_iter().find(|(n, _)| *n == name).map(|(_, s)| scheme_to_json(&s)).ok_or_else(|| format!("no fixture named {name:?}"))
}

pub fn analysis(json: &str, nmax: u32) -> Result<String, String> {
    let a = analyze(&load(json)?, nmax).map_err(|e| e.to_string())?;
    serde_json::to_string_pretty(&analysis_report(&a)).map_err(|e| e.to_string())
}

#[derive(Serialize)]
pub struct Plot {
    pub d: usize,
    /// Physical coordinates, d per point.
    pub coords: Vec<f64>,
    /// Index into `labels` per point.
    pub label: Vec<usize>,
    pub labels: Vec<String>,
}

/// Physical points in [−half_box, half_box]^d; cyclic schemes are reduced first.
pub fn points(json: &str, half_box: u32) -> Result<Plot, String> {
    if half_box == 0 || half_box > MAX_BOX {
        return Err(format!("box half-width must be in 1..={MAX_BOX}"));
    }
    let s = load(json)?.reduce_cyclic().map_err(|e| e.to_string())?;
    let p = s.generate_pattern(&BigRational::from_integer(half_box.into())).map_err(|e| e.to_string())?;
    let mut labels: Vec<String> = Vec::new();
    let mut plot = Plot { d: s.d, coords: Vec::new(), label: Vec::new(), labels: Vec::new() };
    for pt in &p.points {
        plot.coords.extend(pt.phys.iter().map(FieldScalar::to_f64));
        let l = pt.label.clone().unwrap_or_default();
        let i = labels.iter().position(|x| *x == l).unwrap_or_else(|| {
            labels.push(l);
            labels.len() - 1
        });
        plot.label.push(i);
    }
    plot.labels = labels;
    Ok(plot)
}

#[derive(Serialize, Debug, PartialEq)]
pub struct Expansion {
    pub quotients: Vec<String>,
    pub preperiod: usize,
    pub period: Vec<String>,
}

/// Continued fraction of (a + b√d)/c.
pub fn continued_fraction(a: i32, b: i32, c: i32, d: i32, depth: u32) -> Result<Expansion, String> {
    if c == 0 {
        return Err("denominator must be nonzero".into());
    }
    let k = NumberField::quadratic(d.into()).map_err(|e| e.to_string())?;
    let r = |n: i32| BigRational::new(BigInt::from(n), BigInt::from(c));
    let x = FieldScalar::new(&k, vec![r(a), r(b)]).map_err(|e| e.to_string())?;
    let e = cf_expand(&x, depth.min(500) as usize).map_err(|e| e.to_string())?;
    let show = |v: &[BigInt]| v.iter().map(BigInt::to_string).collect();
    let (pre, per) = e.periodic.unwrap_or_default();
    Ok(Expansion { quotients: show(&e.quotients), preperiod: pre, period: show(&per) })
}

fn js<T: Serialize>(r: Result<T, String>) -> Result<String, JsValue> {
    r.and_then(|x| serde_json::to_string(&x).map_err(|e| e.to_string())).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = fixtureNames)]
pub fn fixture_names_js() -> String {
    serde_json::to_string(&fixture_names()).expect("strings")
}

#[wasm_bindgen(js_name = fixture)]
pub fn fixture_js(name: &str) -> Result<String, JsValue> {
    fixture(name).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = analyze)]
pub fn analysis_js(json: &str, nmax: u32) -> Result<String, JsValue> {
    analysis(json, nmax).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = points)]
pub fn points_js(json: &str, half_box: u32) -> Result<String, JsValue> {
    js(points(json, half_box))
}

#[wasm_bindgen(js_name = continuedFraction)]
pub fn continued_fraction_js(a: i32, b: i32, c: i32, d: i32, depth: u32) -> Result<String, JsValue> {
    js(continued_fraction(a, b, c, d, depth))
}
