//! Settings merged from `cocycle-lab.toml` and the command line (the command line wins).

use std::path::{Path, PathBuf};

use cocycle_core::corpus;
use cocycle_loop::checks::LoopConfig;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const DEFAULT_CONFIG: &str = "cocycle-lab.toml";

/// Keys accepted both in the file and as flags.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Keys {
    pub corpus: Option<String>,
    pub grid: Option<usize>,
    pub json: Option<PathBuf>,
    pub seed: Option<u64>,
}

impl Keys {
    pub fn load(path: &Path) -> Result<Keys> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Reads `path` if given, else `cocycle-lab.toml` in the working directory if present.
    pub fn discover(path: Option<&Path>) -> Result<Keys> {
        match path {
            Some(p) => Keys::load(p),
            None if Path::new(DEFAULT_CONFIG).exists() => Keys::load(Path::new(DEFAULT_CONFIG)),
            None => Ok(Keys::default()),
        }
    }

    pub fn overridden_by(self, cli: Keys) -> Keys {
        Keys {
            corpus: cli.corpus.or(self.corpus),
            grid: cli.grid.or(self.grid),
            json: cli.json.or(self.json),
            seed: cli.seed.or(self.seed),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Settings {
    pub corpus: String,
    pub extensions: Vec<String>,
    #[serde(rename = "loop")]
    pub loop_cfg: LoopConfig,
    pub seed: u64,
    #[serde(skip)]
    pub json: Option<PathBuf>,
}

/// `small`, `all`, or one corpus name (aliases accepted).
pub fn resolve_corpus(name: &str) -> Result<Vec<String>> {
    let names: Vec<&str> = match name {
        "all" => corpus::NAMES.to_vec(),
        "small" => corpus::NAMES[..2].to_vec(),
        other => {
            let ext = corpus::by_name(other).ok_or_else(|| {
                CliError::Config(format!(
                    "unknown corpus '{other}'; expected all, small or one of {:?}",
                    corpus::NAMES
                ))
            })?;
            let canonical = corpus::NAMES.iter().find(|n| {
                corpus::by_name(n).map(|e| e.group == ext.group && e.normal == ext.normal)
                    == Some(true)
            });
            vec![*canonical.expect("aliases resolve to corpus names")]
        }
    };
    Ok(names.into_iter().map(String::from).collect())
}

impl Settings {
    pub fn from_keys(keys: Keys) -> Result<Settings> {
        let corpus = keys.corpus.unwrap_or_else(|| "all".into());
        let extensions = resolve_corpus(&corpus)?;
        let seed = keys.seed.unwrap_or(0);
        let grid = keys.grid.unwrap_or(LoopConfig::default().grid);
        let loop_cfg =
            LoopConfig::with_grid(grid, seed).map_err(|e| CliError::Config(e.to_string()))?;
        Ok(Settings {
            corpus,
            extensions,
            loop_cfg,
            seed,
            json: keys.json,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_line_wins() {
        let file: Keys = toml::from_str("grid = 128\nseed = 4").unwrap();
        let merged = file.overridden_by(Keys {
            seed: Some(9),
            ..Keys::default()
        });
        assert_eq!((merged.grid, merged.seed), (Some(128), Some(9)));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<Keys>("grdi = 3").is_err());
    }

    #[test]
    fn corpus_aliases() {
        assert_eq!(resolve_corpus("q8").unwrap(), vec!["q8-center".to_string()]);
        assert_eq!(resolve_corpus("small").unwrap().len(), 2);
        assert!(resolve_corpus("nope").is_err());
    }

    #[test]
    fn small_grids_are_config_errors() {
        let keys = Keys {
            grid: Some(16),
            ..Keys::default()
        };
        assert!(matches!(
            Settings::from_keys(keys),
            Err(CliError::Config(_))
        ));
    }
}
