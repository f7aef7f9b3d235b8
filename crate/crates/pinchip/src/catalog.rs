//! Loading the materials catalog: built-in, from `--materials`, or from the
//! `PINCHIP_MATERIALS` environment variable.

use std::path::{Path, PathBuf};

use pinchip_core::materials::{CatalogFile, MaterialCatalog, DEFAULT_CATALOG_TOML, REQUIRED_MATERIALS};

use crate::error::{CliError, Result};

pub const ENV_VAR: &str = "PINCHIP_MATERIALS";

/// Where a catalog came from and the exact bytes read.
#[derive(Debug, Clone)]
pub struct CatalogSource {
    pub path: Option<PathBuf>,
    pub text: String,
}

pub fn parse_catalog(text: &str, origin: &str) -> Result<MaterialCatalog> {
    let de = toml::Deserializer::new(text);
    let file: CatalogFile = serde_path_to_error::deserialize(de)
        .map_err(|e| CliError::config(format!("{origin}: {}", e.path()), e.into_inner().message().trim()))?;
    let catalog = MaterialCatalog::from_file(file).map_err(|e| CliError::config(origin, e))?;
    let missing = catalog.missing(REQUIRED_MATERIALS);
    if !missing.is_empty() {
        return Err(CliError::config(
            origin,
            format!("missing required materials: {}", missing.join(", ")),
        ));
    }
    Ok(catalog)
}

pub fn default_catalog() -> Result<MaterialCatalog> {
    parse_catalog(DEFAULT_CATALOG_TOML, "<built-in catalog>")
}

/// `explicit` wins over the environment variable, which wins over the
/// built-in catalog.
pub fn resolve_source(explicit: Option<&Path>) -> Result<CatalogSource> {
    let path = explicit
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(ENV_VAR).filter(|v| !v.is_empty()).map(PathBuf::from));
    match path {
        None => Ok(CatalogSource {
            path: None,
            text: DEFAULT_CATALOG_TOML.to_string(),
        }),
        Some(p) => {
            let text = std::fs::read_to_string(&p).map_err(|e| CliError::io(&p, e))?;
            Ok(CatalogSource { path: Some(p), text })
        }
    }
}

pub fn load(explicit: Option<&Path>) -> Result<(MaterialCatalog, CatalogSource)> {
    let source = resolve_source(explicit)?;
    let origin = source
        .path
        .as_ref()
        .map_or_else(|| "<built-in catalog>".to_string(), |p| p.display().to_string());
    Ok((parse_catalog(&source.text, &origin)?, source))
}
