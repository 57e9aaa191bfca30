//! Browser demo: three operations exposed through wasm-bindgen, each taking
//! plain parameters and returning a JSON string.

pub mod api;

use wasm_bindgen::prelude::*;

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

/// Random pruned tree with its level colouring and density bound.
#[wasm_bindgen]
pub fn tree_explorer(f: u32, depth: u32, keep: f64, seed: u64) -> Result<String, JsValue> {
    js(api::tree_explorer(f, depth, keep, seed))
}

/// Frankl families, their shades, and the extremal values for `(n, m, k, t)`.
#[wasm_bindgen]
pub fn frankl_table(n: u32, m: u32, k: u32, t: u32) -> Result<String, JsValue> {
    js(api::frankl_table(n, m, k, t))
}

/// `h(n) / τ(g(n))` over `1..=n_max` for monomials `g`, `h`.
#[wasm_bindgen]
pub fn decay_curve(g: &str, h: &str, tau: &str, n_max: u64) -> Result<String, JsValue> {
    js(api::decay_curve(g, h, tau, n_max))
}
