use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::Failure;

/// Environment variable naming the fixture directory.
pub const FIXTURE_ENV: &str = "DISKCAP_FIXTURES";
/// Environment variable naming a TOML config file.
pub const CONFIG_ENV: &str = "DISKCAP_CONFIG";

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Working precision when `--bits` is not given.
    pub bits: u32,
    /// Largest truncation accepted by `prove` and `guess`.
    pub max_n: usize,
    /// Largest transform order accepted by `quadrature` and `mmt`.
    pub max_order: usize,
    pub fixture_dir: Option<PathBuf>,
    /// Where `prove` writes certificates when `--out` is absent.
    pub output_dir: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Config { bits: 128, max_n: 400, max_order: 1024, fixture_dir: None, output_dir: None }
    }
}

impl Config {
    /// Explicit file, then `DISKCAP_CONFIG`, then defaults. The fixture
    /// directory from the environment overrides the file.
    pub fn load(path: Option<&Path>) -> Result<Self, Failure> {
        let path = path.map(Path::to_path_buf).or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
        let mut cfg = match path {
            Some(p) => {
                let text = std::fs::read_to_string(&p).map_err(|e| Failure::new("config", format!("{}: {e}", p.display())))?;
                toml::from_str(&text).map_err(|e| Failure::new("config", format!("{}: {e}", p.display())))?
            }
            None => Config::default(),
        };
        if let Some(dir) = std::env::var_os(FIXTURE_ENV) {
            cfg.fixture_dir = Some(PathBuf::from(dir));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), Failure> {
        diskcap::Precision::new(self.bits)?;
        if self.max_n == 0 || self.max_order == 0 {
            return Err(Failure::new("config", "max_n and max_order must be positive"));
        }
        Ok(())
    }

    pub fn fixture_dir(&self) -> PathBuf {
        self.fixture_dir.clone().unwrap_or_else(diskcap::pde_cap::default_fixture_dir)
    }

    pub fn check_n(&self, n: usize) -> Result<(), Failure> {
        if n > self.max_n {
            return Err(Failure::new("config", format!("N = {n} exceeds the configured cap {}", self.max_n)));
        }
        Ok(())
    }

    pub fn check_order(&self, order: usize) -> Result<(), Failure> {
        if order > self.max_order {
            return Err(Failure::new("config", format!("order {order} exceeds the configured cap {}", self.max_order)));
        }
        Ok(())
    }
}
