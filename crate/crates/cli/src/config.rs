//! Flat `key = value` config files. Flags always override file values.

use std::collections::BTreeMap;
use std::path::Path;

use crate::AppError;

#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    values: BTreeMap<String, String>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, AppError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| AppError::Io(format!("cannot read config {}: {e}", path.display())))?;
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(AppError::Usage(format!(
                    "{}:{}: expected 'key = value', got '{raw}'",
                    path.display(),
                    lineno + 1
                )));
            };
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>, AppError> {
        self.get(key)
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|_| AppError::Usage(format!("config key '{key}': bad number '{s}'")))
            })
            .transpose()
    }

    pub fn get_usize(&self, key: &str) -> Result<Option<usize>, AppError> {
        self.get(key)
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|_| AppError::Usage(format!("config key '{key}': bad integer '{s}'")))
            })
            .transpose()
    }

    pub fn get_u64(&self, key: &str) -> Result<Option<u64>, AppError> {
        self.get(key)
            .map(|s| {
                s.parse::<u64>()
                    .map_err(|_| AppError::Usage(format!("config key '{key}': bad integer '{s}'")))
            })
            .transpose()
    }

    pub fn get_f64_list(&self, key: &str) -> Result<Option<Vec<f64>>, AppError> {
        self.get(key)
            .map(|s| {
                s.split(',')
                    .map(|item| {
                        item.trim().parse::<f64>().map_err(|_| {
                            AppError::Usage(format!("config key '{key}': bad number '{item}'"))
                        })
                    })
                    .collect()
            })
            .transpose()
    }

    pub fn get_usize_list(&self, key: &str) -> Result<Option<Vec<usize>>, AppError> {
        self.get(key)
            .map(|s| {
                s.split(',')
                    .map(|item| {
                        item.trim().parse::<usize>().map_err(|_| {
                            AppError::Usage(format!("config key '{key}': bad integer '{item}'"))
                        })
                    })
                    .collect()
            })
            .transpose()
    }

    /// `param.<name>` entries, merged below explicit `--param` flags.
    pub fn model_params(&self) -> BTreeMap<String, String> {
        self.values
            .iter()
            .filter_map(|(k, v)| {
                k.strip_prefix("param.")
                    .map(|name| (name.to_string(), v.clone()))
            })
            .collect()
    }
}

/// Parse repeated `--param key=value` flags.
pub fn parse_params(
    flags: &[String],
    file: &FileConfig,
) -> Result<BTreeMap<String, f64>, AppError> {
    let mut out: BTreeMap<String, f64> = BTreeMap::new();
    for (key, raw) in file.model_params() {
        let v = raw
            .parse::<f64>()
            .map_err(|_| AppError::Usage(format!("config param.{key}: bad number '{raw}'")))?;
        out.insert(key, v);
    }
    for flag in flags {
        let Some((key, raw)) = flag.split_once('=') else {
            return Err(AppError::Usage(format!(
                "--param expects key=value, got '{flag}'"
            )));
        };
        let v = raw
            .trim()
            .parse::<f64>()
            .map_err(|_| AppError::Usage(format!("--param {key}: bad number '{raw}'")))?;
        out.insert(key.trim().to_string(), v);
    }
    Ok(out)
}
