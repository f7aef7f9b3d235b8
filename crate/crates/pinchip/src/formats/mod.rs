//! Serialized artifacts: CSV tables, layout JSON, SVG top views and
//! Touchstone S-parameter files.

pub mod layout_json;
pub mod svg;
pub mod table;
pub mod touchstone;

/// Renders an `f64` so that identical values always produce identical text.
pub fn num(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        v.to_string()
    }
}
