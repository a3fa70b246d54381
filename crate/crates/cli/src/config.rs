//! TOML run configuration. Command-line flags take precedence over every
//! value read here.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;

use ionscreen::datasets::Property;
use ionscreen::evalharness::SplitScheme;
use ionscreen::predictor::ModelSpec;
use ionscreen::screening::SearchConfig;

use crate::error::{CliError, CliResult};

pub const CONFIG_SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub schema_version: u32,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub property: Option<Property>,
    pub scheme: Option<SplitScheme>,
    pub k: Option<usize>,
    pub temperature_scale: Option<f64>,
    pub model: Option<ModelSpec>,
    pub search: Option<SearchConfig>,
}

fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Parses TOML, or JSON when the file name ends in `.json`.
pub fn read_structured<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = read_text(path)?;
    let is_json = path.extension().is_some_and(|e| e == "json");
    if is_json {
        serde_json::from_str(&text)
            .map_err(|e| CliError::config(format!("{}: {e}", path.display())))
    } else {
        toml::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
    }
}

pub fn load(path: Option<&Path>) -> CliResult<FileConfig> {
    let Some(path) = path else {
        return Ok(FileConfig {
            schema_version: CONFIG_SCHEMA_VERSION,
            ..FileConfig::default()
        });
    };
    let cfg: FileConfig = read_structured(path)?;
    if cfg.schema_version != CONFIG_SCHEMA_VERSION {
        return Err(CliError::config(format!(
            "{}: schema_version {} is not supported (expected {CONFIG_SCHEMA_VERSION})",
            path.display(),
            cfg.schema_version
        )));
    }
    Ok(cfg)
}
