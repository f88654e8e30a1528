//! TOML run configuration.
//!
//! ```toml
//! problem = "star_poisson"
//! h_list = [0.05, 0.03, 0.02]
//! output_dir = "out"
//!
//! [curve]
//! type = "star"
//!
//! [pde]
//! type = "poisson"            # or "modified_helmholtz" with alpha = ...
//!
//! [overrides]                 # all optional
//! b = 12
//!
//! [study]                     # optional; default policy when absent
//! mode = "fixed_m"            # or "proportional_m" with gamma = ...
//! m = 8
//! n_list = [100, 200, 400]
//! ```

use super::params::Overrides;
use super::problems::{CurveSpec, PdeSpec, ProblemId};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum StudySpec {
    FixedM { m: usize, n_list: Vec<usize> },
    ProportionalM { gamma: f64, n_list: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub curve: CurveSpec,
    pub pde: PdeSpec,
    pub problem: ProblemId,
    #[serde(default)]
    pub h: Option<f64>,
    #[serde(default)]
    pub h_list: Vec<f64>,
    #[serde(default)]
    pub overrides: Overrides,
    #[serde(default)]
    pub study: Option<StudySpec>,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let c: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    fn validate(&self) -> Result<()> {
        if self.study.is_none() && self.h.is_none() && self.h_list.is_empty() {
            return Err(Error::Config("one of h, h_list or [study] is required".into()));
        }
        if let Some(h) = self.h.iter().chain(&self.h_list).find(|h| !(**h > 0.0)) {
            return Err(Error::Config(format!("grid spacing h = {h} must be positive")));
        }
        if let PdeSpec::ModifiedHelmholtz { alpha } = self.pde {
            if !(alpha > 0.0) {
                return Err(Error::Config(format!("alpha = {alpha} must be positive")));
            }
        }
        Ok(())
    }

    /// The h values of a default-policy sweep; a lone h counts as a list.
    pub fn hs(&self) -> Vec<f64> {
        if self.h_list.is_empty() {
            self.h.into_iter().collect()
        } else {
            self.h_list.clone()
        }
    }
}
