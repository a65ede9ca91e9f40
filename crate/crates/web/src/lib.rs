//! Browser bindings. Every export takes the form as text and returns a JSON
//! string: the report on success, `{"error": "..."}` otherwise.

use cubic_brauer::brauer::{analyze as analyze_form, classify as classify_form, curve_summary, plane_cubic_mod_p};
use cubic_brauer::input::{parse_plane_cubic, parse_surface};
use cubic_brauer::lines::DEFAULT_PRECISION;
use serde_json::json;
use wasm_bindgen::prelude::wasm_bindgen;

fn respond<T: serde::Serialize>(result: Result<T, String>) -> String {
    match result {
        Ok(v) => serde_json::to_string(&v).expect("reports serialize"),
        Err(message) => json!({ "error": message }).to_string(),
    }
}

/// Reduction type mod `p`, with the cone normal form when there is one.
#[wasm_bindgen]
pub fn classify(src: &str, p: u32) -> String {
    respond(
        parse_surface(src)
            .map_err(|e| e.to_string())
            .and_then(|f| classify_form(&f, p.into()).map_err(|e| e.to_string())),
    )
}

/// Points, group structure and flexes of a plane cubic in `x, y, z` over `F_p`.
#[wasm_bindgen]
pub fn curve_points(src: &str, p: u32) -> String {
    respond(
        parse_plane_cubic(src)
            .map_err(|e| e.to_string())
            .and_then(|f| plane_cubic_mod_p(&f, p.into()).map_err(|e| e.to_string()))
            .and_then(|c| curve_summary(&c).map_err(|e| e.to_string()))
            .map(|s| json!({ "schema_version": 1, "curve": s })),
    )
}

/// The full analysis. A `precision` of 0 selects the default.
#[wasm_bindgen]
pub fn analyze(src: &str, p: u32, precision: u32) -> String {
    let precision = if precision == 0 { DEFAULT_PRECISION } else { precision };
    respond(
        parse_surface(src)
            .map_err(|e| e.to_string())
            .and_then(|f| analyze_form(&f, p.into(), precision).map_err(|e| e.to_string())),
    )
}
