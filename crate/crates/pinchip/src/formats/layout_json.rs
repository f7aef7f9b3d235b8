//! Layout JSON: every coordinate in meters, origin at the array center.
//!
//! ```json
//! {
//!   "format": "pinchip-layout",
//!   "version": 1,
//!   "units": "m",
//!   "layout": {
//!     "qubit_pitch": 0.0005, "array_side_count": 3,
//!     "pad_diameter": 0.0002, "hole_diameter": 0.0003,
//!     "pad_centers": [{"x": -0.0005, "y": -0.0005}, ...],
//!     "hole_centers": [...],               // same order as pad_centers
//!     "channel_rows": [{"row": 0, "y": -0.0005, "x_min": ..., "x_max": ..., "width": ..., "depth": ...}],
//!     "ribbon_assignments": [{"row": 0, "cable": "ribbon-0000"}],
//!     "solder_ball_sites": [...],
//!     "annotations": [{"row": 0, "kind": "attenuator", "label": "...", "position": 0.01}]
//!   },
//!   "drc": {"findings": [{"rule": "R8", "severity": "warning", "message": "...", "offending": []}]}
//! }
//! ```

use pinchip_core::layout::{DrcReport, InterposerLayout};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const FORMAT_TAG: &str = "pinchip-layout";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutDocument {
    pub format: String,
    pub version: u32,
    pub units: String,
    pub layout: InterposerLayout,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drc: Option<DrcReport>,
}

pub fn export(layout: &InterposerLayout, drc: Option<&DrcReport>) -> Result<String> {
    let doc = LayoutDocument {
        format: FORMAT_TAG.into(),
        version: VERSION,
        units: "m".into(),
        layout: layout.clone(),
        drc: drc.cloned(),
    };
    let mut text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::analysis("layout json", e))?;
    text.push('\n');
    Ok(text)
}

pub fn import(text: &str) -> Result<LayoutDocument> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: LayoutDocument = serde_path_to_error::deserialize(de)
        .map_err(|e| CliError::config(format!("layout json: {}", e.path()), e.into_inner()))?;
    if doc.format != FORMAT_TAG {
        return Err(CliError::config(
            "layout json: format",
            format!("expected `{FORMAT_TAG}`"),
        ));
    }
    if doc.version != VERSION {
        return Err(CliError::config(
            "layout json: version",
            format!("unsupported version {}", doc.version),
        ));
    }
    if doc.units != "m" {
        return Err(CliError::config("layout json: units", "only `m` is supported"));
    }
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use pinchip_core::layout::{generate_layout, LayoutConfig};

    #[test]
    fn round_trip_is_exact() {
        let mut cfg = LayoutConfig::nominal(7);
        cfg.qubit_pitch = 0.000_512_3;
        let layout = generate_layout(&cfg).unwrap();
        let doc = import(&export(&layout, None).unwrap()).unwrap();
        assert_eq!(doc.layout, layout);
    }

    #[test]
    fn wrong_tag_rejected() {
        let layout = generate_layout(&LayoutConfig::nominal(1)).unwrap();
        let text = export(&layout, None).unwrap().replace(FORMAT_TAG, "other");
        assert!(import(&text).is_err());
    }
}
