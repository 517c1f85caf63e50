//! Run configuration: JSON file plus command-line overrides.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

use super::suites::Suite;

pub const SEED_ENV: &str = "HYPERHARM_SEED";
pub const DEFAULT_TRIALS: usize = 100;
pub const DEFAULT_QUAD_SIZE: usize = 4096;
pub const DEFAULT_POINTS_PER_FIELD: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Either a single suite name or a list of them.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum SuiteList {
    One(String),
    Many(Vec<String>),
}

/// Contents of a config file. Every field is optional and mirrors a flag.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    suite: Option<SuiteList>,
    pub dims: Option<Vec<usize>>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub quad_size: Option<usize>,
    pub points_per_field: Option<usize>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

impl FileConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("invalid config {}", path.display()))
    }

    pub fn suites(&self) -> Option<Vec<String>> {
        self.suite.as_ref().map(|s| match s {
            SuiteList::One(s) => vec![s.clone()],
            SuiteList::Many(v) => v.clone(),
        })
    }
}

/// Flag values; `None` means "not given".
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub suites: Vec<String>,
    pub dims: Option<Vec<usize>>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub quad_size: Option<usize>,
    pub points_per_field: Option<usize>,
    pub tolerances: Vec<(String, f64)>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub suites: Vec<Suite>,
    /// Explicit dimensions; `None` runs each suite on its default set.
    pub dims: Option<Vec<usize>>,
    pub trials: usize,
    pub seed: u64,
    pub quad_size: usize,
    /// Sample points per constructed field in the Schwarz-bound suite.
    pub points_per_field: usize,
    /// Per-check absolute tolerance overrides.
    pub tolerances: BTreeMap<String, f64>,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(suites: Vec<Suite>) -> Self {
        Self {
            suites,
            dims: None,
            trials: DEFAULT_TRIALS,
            seed: 0,
            quad_size: DEFAULT_QUAD_SIZE,
            points_per_field: DEFAULT_POINTS_PER_FIELD,
            tolerances: BTreeMap::new(),
            output: None,
            format: Format::Json,
        }
    }

    /// Flags override the file; the seed falls back to `HYPERHARM_SEED` and
    /// then to zero.
    pub fn resolve(file: FileConfig, flags: Overrides, env_seed: Option<&str>) -> anyhow::Result<Self> {
        let names = if flags.suites.is_empty() {
            file.suites().unwrap_or_default()
        } else {
            flags.suites.clone()
        };
        if names.is_empty() {
            bail!("no suite given (use --suite or the 'suite' field of the config file)");
        }
        let suites = names.iter().map(|s| s.parse::<Suite>()).collect::<anyhow::Result<Vec<_>>>()?;
        let seed = match flags.seed.or(file.seed) {
            Some(s) => s,
            None => match env_seed {
                Some(v) => v
                    .trim()
                    .parse()
                    .with_context(|| format!("{SEED_ENV} must be an unsigned 64-bit integer, got '{v}'"))?,
                None => 0,
            },
        };
        let mut tolerances = file.tolerances;
        tolerances.extend(flags.tolerances);
        let config = Self {
            suites,
            dims: flags.dims.or(file.dims),
            trials: flags.trials.or(file.trials).unwrap_or(DEFAULT_TRIALS),
            seed,
            quad_size: flags.quad_size.or(file.quad_size).unwrap_or(DEFAULT_QUAD_SIZE),
            points_per_field: flags
                .points_per_field
                .or(file.points_per_field)
                .unwrap_or(DEFAULT_POINTS_PER_FIELD),
            tolerances,
            output: flags.output.or(file.output),
            format: flags.format.or(file.format).unwrap_or_default(),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.trials == 0 {
            bail!("trials must be at least 1");
        }
        if self.quad_size < 16 {
            bail!("quad_size must be at least 16, got {}", self.quad_size);
        }
        if self.points_per_field == 0 {
            bail!("points_per_field must be at least 1");
        }
        if let Some(dims) = &self.dims {
            if dims.is_empty() {
                bail!("dims must not be empty");
            }
            let explicit = !(self.suites.len() == 1 && self.suites[0] == Suite::All);
            for &suite in self.suites.iter().filter(|_| explicit) {
                for &n in dims {
                    suite.check_dim(n)?;
                }
            }
            if let Some(&n) = dims.iter().find(|&&n| !(2..=9).contains(&n)) {
                bail!("dimension {n} is outside 2..=9");
            }
        }
        for (name, tol) in &self.tolerances {
            if !(tol.is_finite() && *tol >= 0.0) {
                bail!("tolerance override for '{name}' must be finite and non-negative, got {tol}");
            }
        }
        Ok(())
    }
}

/// Parses `check=value`.
pub fn parse_tolerance(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected CHECK=TOL, got '{s}'"))?;
    let tol: f64 = value.trim().parse().map_err(|e| format!("bad tolerance '{value}': {e}"))?;
    Ok((name.trim().to_string(), tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags(suite: &str) -> Overrides {
        Overrides {
            suites: vec![suite.into()],
            ..Default::default()
        }
    }

    #[test]
    fn flags_override_file() {
        let file: FileConfig =
            serde_json::from_str(r#"{"suite": "main-sharp", "dims": [2, 3], "trials": 5, "seed": 9}"#).unwrap();
        let mut f = flags("main-ball");
        f.trials = Some(7);
        let c = RunConfig::resolve(file, f, Some("11")).unwrap();
        assert_eq!(c.suites, vec![Suite::MainBall]);
        assert_eq!(c.dims, Some(vec![2, 3]));
        assert_eq!(c.trials, 7);
        assert_eq!(c.seed, 9);
    }

    #[test]
    fn env_seed_is_the_fallback() {
        let c = RunConfig::resolve(FileConfig::default(), flags("main-sharp"), Some("11")).unwrap();
        assert_eq!(c.seed, 11);
        let c = RunConfig::resolve(FileConfig::default(), flags("main-sharp"), None).unwrap();
        assert_eq!(c.seed, 0);
        assert!(RunConfig::resolve(FileConfig::default(), flags("main-sharp"), Some("x")).is_err());
    }

    #[test]
    fn unknown_fields_and_suites_are_rejected() {
        let err = serde_json::from_str::<FileConfig>("{\n  \"trails\": 3\n}").unwrap_err();
        assert_eq!(err.line(), 2);
        assert!(RunConfig::resolve(FileConfig::default(), flags("nope"), None).is_err());
    }

    #[test]
    fn restricted_dimensions() {
        let mut f = flags("liu-vector");
        f.dims = Some(vec![2, 3]);
        let err = RunConfig::resolve(FileConfig::default(), f, None).unwrap_err();
        assert!(err.to_string().contains("n = 3"), "{err}");
        let mut f = flags("all");
        f.dims = Some(vec![3]);
        assert!(RunConfig::resolve(FileConfig::default(), f, None).is_ok());
    }

    #[test]
    fn tolerance_flag_parsing() {
        assert_eq!(parse_tolerance("main_ball=1e-9").unwrap(), ("main_ball".into(), 1e-9));
        assert!(parse_tolerance("main_ball").is_err());
    }
}
