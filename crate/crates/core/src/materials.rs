//! Conductor and dielectric material records.
//!
//! A [`MaterialCatalog`] is an immutable-after-load map from identifier to
//! [`Material`]. The default catalog ships as a TOML data file
//! ([`DEFAULT_CATALOG_TOML`]); this crate only embeds the text, parsing is done
//! by the `pinchip` crate.
//!
//! Thermal conductivity tables are interpolated linearly in `(ln T, ln k)`:
//! cryogenic `k(T)` spans several decades between 10 mK and 300 K, and a
//! power law between neighbouring nodes is the natural local model.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::math::{exp, ln};

/// The built-in catalog, in the same schema accepted by `--materials`.
pub const DEFAULT_CATALOG_TOML: &str = include_str!("../data/materials.toml");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaterialKind {
    Conductor,
    Dielectric,
}

/// A named material with the properties consumed by the other modules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Material {
    pub name: String,
    pub kind: MaterialKind,
    /// Relative permittivity; dielectrics only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relative_permittivity: Option<f64>,
    /// Superconducting transition temperature in kelvin; conductors only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub superconducting_tc: Option<f64>,
    /// `(temperature K, conductivity W/(m·K))` rows, strictly increasing in
    /// temperature.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub thermal_conductivity_table: Vec<(f64, f64)>,
    /// Melting or reflow temperature in °C.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub melting_or_reflow_temp: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MaterialError {
    UnknownMaterial(String),
    DuplicateMaterial(String),
    NotAConductor(String),
    NotADielectric(String),
    NoConductivityData(String),
    OutOfRange {
        material: String,
        temperature: f64,
        min: f64,
        max: f64,
    },
    Invalid {
        material: String,
        reason: &'static str,
    },
}

impl fmt::Display for MaterialError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::UnknownMaterial(name) => write!(f, "unknown material `{name}`"),
            Self::DuplicateMaterial(name) => write!(f, "material `{name}` defined twice"),
            Self::NotAConductor(name) => write!(f, "material `{name}` is not a conductor"),
            Self::NotADielectric(name) => write!(f, "material `{name}` is not a dielectric"),
            Self::NoConductivityData(name) => {
                write!(f, "material `{name}` has no thermal conductivity table")
            }
            Self::OutOfRange {
                material,
                temperature,
                min,
                max,
            } => write!(
                f,
                "temperature {temperature} K outside the conductivity table of `{material}` ({min} K to {max} K)"
            ),
            Self::Invalid { material, reason } => write!(f, "material `{material}`: {reason}"),
        }
    }
}

impl core::error::Error for MaterialError {}

impl Material {
    pub fn validate(&self) -> Result<(), MaterialError> {
        let invalid = |reason| MaterialError::Invalid {
            material: self.name.clone(),
            reason,
        };
        if self.name.is_empty() {
            return Err(invalid("empty name"));
        }
        match self.kind {
            MaterialKind::Dielectric => match self.relative_permittivity {
                Some(eps) if eps.is_finite() && eps >= 1.0 => {}
                Some(_) => return Err(invalid("relative permittivity must be finite and >= 1")),
                None => return Err(invalid("dielectric without relative permittivity")),
            },
            MaterialKind::Conductor => {
                if self.relative_permittivity.is_some() {
                    return Err(invalid("relative permittivity given for a conductor"));
                }
            }
        }
        if let Some(tc) = self.superconducting_tc {
            if self.kind != MaterialKind::Conductor {
                return Err(invalid("superconducting Tc given for a dielectric"));
            }
            if !(tc.is_finite() && tc > 0.0) {
                return Err(invalid("superconducting Tc must be positive"));
            }
        }
        for (i, &(t, k)) in self.thermal_conductivity_table.iter().enumerate() {
            if !(t.is_finite() && t > 0.0) {
                return Err(invalid("conductivity table temperature must be positive"));
            }
            if !(k.is_finite() && k > 0.0) {
                return Err(invalid("conductivity table values must be positive"));
            }
            if i > 0 && t <= self.thermal_conductivity_table[i - 1].0 {
                return Err(invalid("conductivity table temperatures must be strictly increasing"));
            }
        }
        if let Some(t) = self.melting_or_reflow_temp {
            if !t.is_finite() {
                return Err(invalid("melting/reflow temperature must be finite"));
            }
        }
        Ok(())
    }

    /// Whether the material is superconducting at `temperature` (strictly
    /// below its Tc). Conductors without a recorded Tc never are.
    pub fn is_superconducting(&self, temperature: f64) -> Result<bool, MaterialError> {
        if self.kind != MaterialKind::Conductor {
            return Err(MaterialError::NotAConductor(self.name.clone()));
        }
        Ok(self.superconducting_tc.is_some_and(|tc| temperature < tc))
    }

    pub fn permittivity(&self) -> Result<f64, MaterialError> {
        self.relative_permittivity
            .ok_or_else(|| MaterialError::NotADielectric(self.name.clone()))
    }

    /// Temperature span `(min, max)` covered by the conductivity table.
    pub fn conductivity_range(&self) -> Option<(f64, f64)> {
        let first = self.thermal_conductivity_table.first()?;
        let last = self.thermal_conductivity_table.last()?;
        Some((first.0, last.0))
    }

    /// Thermal conductivity at `temperature`, interpolated log-log between the
    /// bracketing table rows. Exact at table nodes.
    pub fn interpolate_conductivity(&self, temperature: f64) -> Result<f64, MaterialError> {
        let table = &self.thermal_conductivity_table;
        let (min, max) = self
            .conductivity_range()
            .ok_or_else(|| MaterialError::NoConductivityData(self.name.clone()))?;
        if !(temperature >= min && temperature <= max) {
            return Err(MaterialError::OutOfRange {
                material: self.name.clone(),
                temperature,
                min,
                max,
            });
        }
        // First row with T >= temperature.
        let hi = table.partition_point(|&(t, _)| t < temperature);
        let (t1, k1) = table[hi];
        if t1 == temperature || hi == 0 {
            return Ok(k1);
        }
        let (t0, k0) = table[hi - 1];
        let frac = ln(temperature / t0) / ln(t1 / t0);
        Ok(exp(ln(k0) + frac * ln(k1 / k0)))
    }
}

/// Identifier → material map. Immutable once built, so it can be shared
/// freely between threads.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "CatalogFile", into = "CatalogFile")]
pub struct MaterialCatalog {
    entries: BTreeMap<String, Material>,
}

/// On-disk shape of a catalog: a list of `[[material]]` records.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogFile {
    #[serde(default)]
    pub material: Vec<Material>,
}

impl From<CatalogFile> for MaterialCatalog {
    // Unvalidated; `MaterialCatalog::from_file` is the checked path.
    fn from(file: CatalogFile) -> Self {
        Self {
            entries: file.material.into_iter().map(|m| (m.name.clone(), m)).collect(),
        }
    }
}

impl From<MaterialCatalog> for CatalogFile {
    fn from(catalog: MaterialCatalog) -> Self {
        Self {
            material: catalog.entries.into_values().collect(),
        }
    }
}

/// Materials every built-in configuration refers to.
pub const REQUIRED_MATERIALS: &[&str] = &[
    "Al",
    "Nb",
    "In",
    "TiN",
    "Sn-Pb",
    "Nb-Ti",
    "SUS-304",
    "OFHC-Cu",
    "polyimide",
    "PTFE",
    "STYCAST-1266",
    "Si",
    "sapphire",
];

impl MaterialCatalog {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a catalog from records, validating each and rejecting duplicates.
    pub fn from_materials<I>(materials: I) -> Result<Self, MaterialError>
    where
        I: IntoIterator<Item = Material>,
    {
        let mut catalog = Self::new();
        for m in materials {
            if catalog.entries.contains_key(&m.name) {
                return Err(MaterialError::DuplicateMaterial(m.name));
            }
            catalog.insert(m)?;
        }
        Ok(catalog)
    }

    pub fn from_file(file: CatalogFile) -> Result<Self, MaterialError> {
        Self::from_materials(file.material)
    }

    /// Inserts or replaces a material, returning the previous record.
    pub fn insert(&mut self, material: Material) -> Result<Option<Material>, MaterialError> {
        material.validate()?;
        Ok(self.entries.insert(material.name.clone(), material))
    }

    pub fn lookup(&self, name: &str) -> Result<&Material, MaterialError> {
        self.entries
            .get(name)
            .ok_or_else(|| MaterialError::UnknownMaterial(String::from(name)))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Material> {
        self.entries.values()
    }

    /// Names in `required` that the catalog lacks.
    pub fn missing<'a>(&self, required: &[&'a str]) -> Vec<&'a str> {
        required.iter().copied().filter(|name| !self.contains(name)).collect()
    }

    pub fn validate(&self) -> Result<(), MaterialError> {
        for (key, m) in &self.entries {
            if key != &m.name {
                return Err(MaterialError::Invalid {
                    material: m.name.clone(),
                    reason: "catalog key does not match material name",
                });
            }
            m.validate()?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn conductor(name: &str, tc: Option<f64>, table: Vec<(f64, f64)>) -> Material {
        Material {
            name: name.into(),
            kind: MaterialKind::Conductor,
            relative_permittivity: None,
            superconducting_tc: tc,
            thermal_conductivity_table: table,
            melting_or_reflow_temp: None,
        }
    }

    fn nb() -> Material {
        conductor("Nb", Some(9.2), vec![])
    }

    #[test]
    fn superconducting_strictly_below_tc() {
        let nb = nb();
        assert!(nb.is_superconducting(0.01).unwrap());
        assert!(!nb.is_superconducting(9.2).unwrap());
        let cu = conductor("OFHC-Cu", None, vec![]);
        assert!(!cu.is_superconducting(0.01).unwrap());
    }

    #[test]
    fn dielectric_is_not_a_conductor() {
        let ptfe = Material {
            name: "PTFE".into(),
            kind: MaterialKind::Dielectric,
            relative_permittivity: Some(2.1),
            superconducting_tc: None,
            thermal_conductivity_table: vec![],
            melting_or_reflow_temp: None,
        };
        assert_eq!(
            ptfe.is_superconducting(1.0),
            Err(MaterialError::NotAConductor("PTFE".into()))
        );
    }

    #[test]
    fn interpolation_exact_at_nodes_and_geometric_at_midpoints() {
        let m = conductor("x", None, vec![(1.0, 2.0), (4.0, 32.0), (10.0, 40.0)]);
        assert_eq!(m.interpolate_conductivity(1.0).unwrap(), 2.0);
        assert_eq!(m.interpolate_conductivity(4.0).unwrap(), 32.0);
        assert_eq!(m.interpolate_conductivity(10.0).unwrap(), 40.0);
        // Geometric mean of 1 and 4 is 2; of 2 and 32 is 8.
        let k = m.interpolate_conductivity(2.0).unwrap();
        assert!((k - 8.0).abs() < 1e-12);
    }

    #[test]
    fn interpolation_out_of_range() {
        let m = conductor("x", None, vec![(1.0, 2.0), (4.0, 32.0)]);
        assert!(matches!(
            m.interpolate_conductivity(0.5),
            Err(MaterialError::OutOfRange { .. })
        ));
        assert!(matches!(
            m.interpolate_conductivity(f64::NAN),
            Err(MaterialError::OutOfRange { .. })
        ));
        assert_eq!(
            nb().interpolate_conductivity(1.0),
            Err(MaterialError::NoConductivityData("Nb".into()))
        );
    }

    #[test]
    fn validation_rules() {
        let mut bad = conductor("x", None, vec![(2.0, 1.0), (1.0, 1.0)]);
        assert!(bad.validate().is_err());
        bad.thermal_conductivity_table = vec![(1.0, 0.0)];
        assert!(bad.validate().is_err());
        let mut eps = Material {
            name: "d".into(),
            kind: MaterialKind::Dielectric,
            relative_permittivity: Some(0.5),
            superconducting_tc: None,
            thermal_conductivity_table: vec![],
            melting_or_reflow_temp: None,
        };
        assert!(eps.validate().is_err());
        eps.relative_permittivity = Some(3.0);
        assert!(eps.validate().is_ok());
        eps.superconducting_tc = Some(1.0);
        assert!(eps.validate().is_err());
    }

    #[test]
    fn lookup_and_duplicates() {
        let catalog = MaterialCatalog::from_materials([nb()]).unwrap();
        assert_eq!(catalog.lookup("Nb").unwrap().superconducting_tc, Some(9.2));
        assert_eq!(
            catalog.lookup("unobtainium"),
            Err(MaterialError::UnknownMaterial("unobtainium".into()))
        );
        assert_eq!(
            MaterialCatalog::from_materials([nb(), nb()]),
            Err(MaterialError::DuplicateMaterial("Nb".into()))
        );
    }
}
