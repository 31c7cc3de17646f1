//! Experiment configuration files.
//!
//! A config file is TOML with one table per preset or scenario name and
//! an optional `[defaults]` table applied first:
//!
//! ```toml
//! [defaults]
//! restarts = 32
//!
//! [ksz-m2]
//! seeds = [0, 1, 2, 3, 4, 5, 6]
//! n_grid = [4, 8, 16, 32, 64, 128]
//! ```
//!
//! Values in the file replace the preset's; command-line flags are applied
//! afterwards by the caller and replace both.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::experiments::{Construction, ExperimentConfig, NormMethod};
use crate::parallel::Execution;
use crate::{Error, Exponent, Result};

pub const DEFAULTS_SECTION: &str = "defaults";

/// Every field an experiment run can take from a file or flags.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub m: Option<usize>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub n_grid: Option<Vec<usize>>,
    pub seeds: Option<Vec<u64>>,
    pub norm_method: Option<NormMethod>,
    pub construction: Option<Construction>,
    pub domain_exponent: Option<Exponent>,
    pub restarts: Option<usize>,
    pub tol: Option<f64>,
    pub max_iters: Option<usize>,
    pub ascent_seed: Option<u64>,
    pub bruteforce_resolution: Option<usize>,
    pub execution: Option<Execution>,
}

impl ConfigOverrides {
    pub fn apply(&self, config: &mut ExperimentConfig) {
        macro_rules! set {
            ($($field:ident => $target:expr),* $(,)?) => {
                $(if let Some(v) = &self.$field { $target = v.clone(); })*
            };
        }
        set!(
            m => config.m,
            p => config.p,
            q => config.q,
            n_grid => config.n_grid,
            seeds => config.seeds,
            norm_method => config.norm_method,
            restarts => config.ascent.restarts,
            tol => config.ascent.tol,
            max_iters => config.ascent.max_iters,
            ascent_seed => config.ascent.seed,
            bruteforce_resolution => config.bruteforce_resolution,
            execution => config.execution,
        );
        if let Some(c) = self.construction {
            config.construction = Some(c);
        }
        if let Some(e) = self.domain_exponent {
            config.domain_exponent = Some(e);
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    pub sections: BTreeMap<String, ConfigOverrides>,
}

impl ConfigFile {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let sections: BTreeMap<String, ConfigOverrides> =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Ok(ConfigFile { sections })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Applies `[defaults]` and then the section called `name`, if present.
    pub fn apply(&self, name: &str, config: &mut ExperimentConfig) {
        if let Some(d) = self.sections.get(DEFAULTS_SECTION) {
            d.apply(config);
        }
        if let Some(s) = self.sections.get(name) {
            s.apply(config);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::preset;

    #[test]
    fn file_then_section_order() {
        let file = ConfigFile::from_toml_str(
            "[defaults]\nrestarts = 4\nseeds = [9]\n\n[ksz-m2]\nseeds = [1, 2, 3]\nn_grid = [2, 4, 8]\nexecution = \"sequential\"\n",
        )
        .unwrap();
        let mut c = preset("ksz-m2").unwrap().config;
        file.apply("ksz-m2", &mut c);
        assert_eq!(c.ascent.restarts, 4);
        assert_eq!(c.seeds, vec![1, 2, 3]);
        assert_eq!(c.n_grid, vec![2, 4, 8]);
        assert_eq!(c.execution, Execution::Sequential);

        let mut d = preset("diagonal-m2").unwrap().config;
        file.apply("diagonal-m2", &mut d);
        assert_eq!(d.seeds, vec![9]);
        assert_eq!(d.p, 4.0);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = ConfigFile::from_toml_str("[ksz-m2]\nrestart = 4\n").unwrap_err();
        assert!(matches!(&err, Error::Config(msg) if msg.contains("restart")), "{err}");
        assert!(ConfigFile::from_toml_str("[ksz-m2]\nnorm_method = \"guess\"\n").is_err());
    }
}
