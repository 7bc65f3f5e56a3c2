use std::path::Path;

use phaseprint::flow::{IntegrationSettings, OrientationConfig};
use phaseprint::report::ClassifyConfig;
use phaseprint::Parallelism;
use serde::{Deserialize, Serialize};
use toml::Value;

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IndexSettings {
    /// Initial sample count of every contour.
    pub samples: usize,
    /// Radius of the circles around each singular point.
    pub small_radius: f64,
}

impl Default for IndexSettings {
    fn default() -> Self {
        IndexSettings {
            samples: 256,
            small_radius: 0.1,
        }
    }
}

/// Every numerical knob of the command line, readable from `--config`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    pub classify: ClassifyConfig,
    pub index: IndexSettings,
    pub integration: IntegrationSettings,
    pub orientation: OrientationConfig,
}

impl Settings {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Ok(Settings::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::input(format!("{}: {e}", p.display())))?;
                toml::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", p.display())))
            }
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("settings serialize")
    }

    pub fn set_parallelism(&mut self, par: Parallelism) {
        self.classify = self.classify.clone().with_parallelism(par);
        self.orientation.parallelism = par;
    }

    /// Applies `section.key=value` overrides, e.g. `integration.rtol=1e-10`.
    pub fn apply_overrides(&mut self, overrides: &[String]) -> Result<(), CliError> {
        if overrides.is_empty() {
            return Ok(());
        }
        let mut tree = Value::try_from(&*self).expect("settings serialize");
        for o in overrides {
            let (key, raw) = o
                .split_once('=')
                .ok_or_else(|| CliError::input(format!("--tol expects key=value, got '{o}'")))?;
            let path: Vec<&str> = key.trim().split('.').collect();
            set_path(&mut tree, &path, raw.trim()).map_err(|m| CliError::input(format!("--tol {o}: {m}")))?;
            let parsed: Settings = tree
                .clone()
                .try_into()
                .map_err(|e| CliError::input(format!("--tol {o}: {e}")))?;
            let back = Value::try_from(&parsed).expect("settings serialize");
            if lookup(&back, &path).is_none() {
                return Err(CliError::input(format!("--tol {o}: unknown setting '{key}'")));
            }
            tree = back;
        }
        *self = tree.try_into().expect("validated above");
        Ok(())
    }
}

fn lookup<'a>(v: &'a Value, path: &[&str]) -> Option<&'a Value> {
    path.iter().try_fold(v, |v, k| v.get(*k))
}

fn set_path(tree: &mut Value, path: &[&str], raw: &str) -> Result<(), String> {
    let (leaf, parents) = path.split_last().ok_or("empty key")?;
    let mut node = tree;
    for p in parents {
        node = node.get_mut(*p).ok_or_else(|| format!("unknown section '{p}'"))?;
    }
    let table = node.as_table_mut().ok_or("not a section")?;
    let wants_float = matches!(table.get(*leaf), Some(Value::Float(_)));
    let value = if let Ok(i) = raw.parse::<i64>() {
        if wants_float {
            Value::Float(i as f64)
        } else {
            Value::Integer(i)
        }
    } else if let Ok(f) = raw.parse::<f64>() {
        Value::Float(f)
    } else if let Ok(b) = raw.parse::<bool>() {
        Value::Boolean(b)
    } else {
        Value::String(raw.to_string())
    };
    table.insert((*leaf).to_string(), value);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let s = Settings::default();
        let back: Settings = toml::from_str(&s.to_toml()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn overrides() {
        let mut s = Settings::default();
        s.apply_overrides(&[
            "integration.rtol=1e-10".into(),
            "integration.max_arclength=10".into(),
            "classify.finder.grid=64".into(),
            "classify.sectors.formula=radial".into(),
            "orientation.doubled=true".into(),
        ])
        .unwrap();
        assert_eq!(s.integration.rtol, 1e-10);
        assert_eq!(s.integration.max_arclength, 10.0);
        assert_eq!(s.classify.finder.grid, 64);
        assert!(s.orientation.doubled);
        for bad in ["integration.rtl=1", "nothing=1", "integration.rtol", "classify.finder.grid=many"] {
            assert!(s.apply_overrides(&[bad.into()]).is_err(), "{bad}");
        }
    }
}
