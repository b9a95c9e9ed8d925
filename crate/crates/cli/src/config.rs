//! Experiment descriptors. A config file holds exactly one JSON object whose
//! `command` field selects the experiment; unknown fields are rejected.

use std::f64::consts::PI;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use oshima_core::fixed_points::Space;
use oshima_core::haar::{GroupTestFunction, DEFAULT_PANELS};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum ExperimentConfig {
    Structure(StructureConfig),
    FixedPoints(FixedPointsConfig),
    Character(CharacterConfig),
    Verify(VerifyConfig),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureConfig {
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedPointCase {
    pub label: String,
    pub matrix: Vec<Vec<f64>>,
    pub space: Space,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedPointsConfig {
    pub cases: Vec<FixedPointCase>,
    /// Bound on `|det_chart - det_ad| / max(1, |det_ad|)`.
    #[serde(default = "default_determinant_tolerance")]
    pub determinant_tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestFunctionConfig {
    pub label: String,
    pub center: [f64; 3],
    pub half_width: [f64; 3],
    #[serde(default = "one")]
    pub amplitude: f64,
}

impl TestFunctionConfig {
    pub fn function(&self) -> GroupTestFunction {
        GroupTestFunction {
            center: self.center,
            half_width: self.half_width,
            amplitude: self.amplitude,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtlasConfig {
    pub r1: f64,
    pub r2: f64,
}

impl Default for AtlasConfig {
    fn default() -> Self {
        Self { r1: 0.5, r2: 2.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterConfig {
    pub functions: Vec<TestFunctionConfig>,
    pub s_values: Vec<f64>,
    /// Gauss–Legendre panels per axis for both sides.
    #[serde(default = "default_resolution")]
    pub resolution: usize,
    /// Bound on the relative error between the two sides.
    #[serde(default = "default_character_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub atlas: AtlasConfig,
    /// Also compare the regularized trace with the direct side at `s = -1`.
    #[serde(default = "yes")]
    pub regularized: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    #[serde(default = "all_criteria")]
    pub criteria: Vec<u8>,
    #[serde(default = "default_resolution")]
    pub resolution: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_determinant_tolerance() -> f64 {
    1e-6
}

fn default_character_tolerance() -> f64 {
    1e-3
}

fn default_resolution() -> usize {
    DEFAULT_PANELS
}

fn default_seed() -> u64 {
    20_240_607
}

fn one() -> f64 {
    1.0
}

fn yes() -> bool {
    true
}

pub fn all_criteria() -> Vec<u8> {
    (1..=8).collect()
}

fn positive(name: &str, value: f64) -> Result<()> {
    ensure!(value.is_finite() && value > 0.0, "{name} must be positive, got {value}");
    Ok(())
}

impl ExperimentConfig {
    pub fn command(&self) -> &'static str {
        match self {
            Self::Structure(_) => "structure",
            Self::FixedPoints(_) => "fixed-points",
            Self::Character(_) => "character",
            Self::Verify(_) => "verify",
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text).context("config does not match the schema")?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("in {}", path.display()))
    }

    /// Applies `--resolution`.
    pub fn with_resolution(mut self, resolution: Option<usize>) -> Result<Self> {
        let Some(k) = resolution else {
            return Ok(self);
        };
        match &mut self {
            Self::Character(c) => c.resolution = k,
            Self::Verify(v) => v.resolution = k,
            other => bail!("--resolution does not apply to `{}`", other.command()),
        }
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Structure(c) => {
                ensure!((2..=4).contains(&c.n), "n must be 2, 3 or 4, got {}", c.n);
            }
            Self::FixedPoints(c) => {
                ensure!(!c.cases.is_empty(), "cases must not be empty");
                positive("determinant_tolerance", c.determinant_tolerance)?;
                for case in &c.cases {
                    let n = case.matrix.len();
                    ensure!(n >= 2, "case `{}`: matrix must be at least 2x2", case.label);
                    ensure!(
                        case.matrix.iter().all(|row| row.len() == n),
                        "case `{}`: matrix must be square",
                        case.label
                    );
                }
            }
            Self::Character(c) => {
                ensure!(!c.functions.is_empty(), "functions must not be empty");
                ensure!(!c.s_values.is_empty(), "s_values must not be empty");
                ensure!(c.s_values.iter().all(|s| s.is_finite()), "s_values must be finite");
                ensure!(c.resolution > 0, "resolution must be positive");
                positive("tolerance", c.tolerance)?;
                positive("atlas.r1", c.atlas.r1)?;
                ensure!(c.atlas.r2 > c.atlas.r1, "atlas.r2 must exceed atlas.r1");
                for f in &c.functions {
                    f.function()
                        .validate()
                        .with_context(|| format!("function `{}`", f.label))?;
                    ensure!(f.half_width[0] < PI, "function `{}`: angular half width", f.label);
                }
            }
            Self::Verify(c) => {
                ensure!(!c.criteria.is_empty(), "criteria must not be empty");
                ensure!(
                    c.criteria.iter().all(|k| (1..=8).contains(k)),
                    "criteria are numbered 1 to 8"
                );
                ensure!(c.resolution > 0, "resolution must be positive");
            }
        }
        Ok(())
    }

    /// Canonical JSON of the config, the input of the config hash.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

/// The three test functions of the flagship comparison.
pub fn flagship_functions() -> Vec<TestFunctionConfig> {
    let f = |label: &str, center, half_width| TestFunctionConfig {
        label: label.into(),
        center,
        half_width,
        amplitude: 1.0,
    };
    vec![
        f("elliptic-a", [PI / 2.0, 0.0, 0.0], [0.3, 0.3, 0.3]),
        f("elliptic-b", [2.0, 0.4, 0.5], [0.25, 0.3, 0.3]),
        f("hyperbolic", [0.0, 2.0, 0.0], [0.3, 0.5, 0.3]),
    ]
}

pub fn default_config(command: &str) -> Result<ExperimentConfig> {
    Ok(match command {
        "structure" => ExperimentConfig::Structure(StructureConfig { n: 3 }),
        "fixed-points" => ExperimentConfig::FixedPoints(FixedPointsConfig {
            cases: default_fixed_point_cases(),
            determinant_tolerance: default_determinant_tolerance(),
        }),
        "character" => ExperimentConfig::Character(CharacterConfig {
            functions: flagship_functions(),
            s_values: vec![1.0, 0.0, -1.0],
            resolution: default_resolution(),
            tolerance: default_character_tolerance(),
            atlas: AtlasConfig::default(),
            regularized: true,
        }),
        "verify" => ExperimentConfig::Verify(VerifyConfig {
            criteria: all_criteria(),
            resolution: default_resolution(),
            seed: default_seed(),
        }),
        other => bail!("unknown command `{other}`"),
    })
}

fn default_fixed_point_cases() -> Vec<FixedPointCase> {
    let (s, c) = (PI / 3.0).sin_cos();
    vec![
        FixedPointCase {
            label: "diag(2,1,1/2) on flags".into(),
            matrix: vec![vec![2.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 0.5]],
            space: Space::FlagManifold,
        },
        FixedPointCase {
            label: "rotation by pi/3 on the sphere".into(),
            matrix: vec![vec![c, -s], vec![s, c]],
            space: Space::OshimaSphere,
        },
        FixedPointCase {
            label: "unipotent on the sphere".into(),
            matrix: vec![vec![1.0, 1.0], vec![0.0, 1.0]],
            space: Space::OshimaSphere,
        },
    ]
}
