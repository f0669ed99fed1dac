//! Plain-text `key = value` run configuration.
//!
//! Lines starting with `#` are comments. Angle-valued keys accept decimals or
//! multiples of π such as `pi/24`, `3pi/4`, `2*pi`. Later assignments win,
//! which is how command-line flags override a file.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::search::{GridSpec, SearchMode};

/// Everything a sweep or verification run needs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub meas: GridSpec,
    pub det: GridSpec,
    pub workers: Option<usize>,
    pub seed: u64,
    pub out: PathBuf,
    pub svg: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            meas: GridSpec::desk_measurement(),
            det: GridSpec::desk_detector(),
            workers: None,
            seed: 0,
            out: PathBuf::from("sweep.csv"),
            svg: None,
        }
    }
}

/// Keys understood by [`RunConfig::set`].
pub const KEYS: &[&str] = &[
    "meas_angle_step",
    "meas_phase_step",
    "meas_x_step",
    "meas_mode",
    "meas_samples",
    "meas_seed",
    "det_angle_step",
    "det_phase_step",
    "det_x_step",
    "det_mode",
    "det_samples",
    "det_seed",
    "refine_iters",
    "refine_shrink",
    "refine_starts",
    "workers",
    "seed",
    "out",
    "svg",
];

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = RunConfig::default();
        cfg.apply_text(&text)?;
        Ok(cfg)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Spec(format!("line {}: expected key = value", n + 1)))?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    /// Assigns one key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| Error::Spec(format!("{key} = {value}: {what}"));
        let uint = || {
            value
                .parse::<u64>()
                .map_err(|_| bad("expected a non-negative integer"))
        };
        match key {
            "meas_angle_step" => self.meas.angle_step = parse_angle(value)?,
            "meas_phase_step" => self.meas.phase_step = parse_angle(value)?,
            "meas_x_step" => self.meas.x_step = parse_angle(value)?,
            "meas_mode" => self.meas.mode = parse_mode(value, self.meas.mode)?,
            "meas_samples" => set_samples(&mut self.meas.mode, uint()? as usize),
            "meas_seed" => set_seed(&mut self.meas.mode, uint()?),
            "det_angle_step" => self.det.angle_step = parse_angle(value)?,
            "det_phase_step" => self.det.phase_step = parse_angle(value)?,
            "det_x_step" => self.det.x_step = parse_angle(value)?,
            "det_mode" => self.det.mode = parse_mode(value, self.det.mode)?,
            "det_samples" => set_samples(&mut self.det.mode, uint()? as usize),
            "det_seed" => set_seed(&mut self.det.mode, uint()?),
            "refine_iters" => self.det.refine_iters = uint()? as usize,
            "refine_shrink" => {
                self.det.refine_shrink = value.parse().map_err(|_| bad("expected a number"))?
            }
            "refine_starts" => self.det.refine_starts = uint()? as usize,
            "workers" => {
                let w = uint()? as usize;
                if w == 0 {
                    return Err(bad("workers must be at least 1"));
                }
                self.workers = Some(w);
            }
            "seed" => self.seed = uint()?,
            "out" => self.out = PathBuf::from(value),
            "svg" => self.svg = Some(PathBuf::from(value)),
            _ => return Err(Error::Spec(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.meas.mode == SearchMode::GridThenRefine {
            return Err(Error::Spec(
                "measurement sweeps use full_grid or random mode".into(),
            ));
        }
        self.meas.validate()?;
        self.det.validate()
    }
}

fn parse_mode(value: &str, current: SearchMode) -> Result<SearchMode> {
    let (n_samples, seed) = match current {
        SearchMode::Random { n_samples, seed } => (n_samples, seed),
        _ => (1, 0),
    };
    match value {
        "full_grid" => Ok(SearchMode::FullGrid),
        "grid_then_refine" => Ok(SearchMode::GridThenRefine),
        "random" => Ok(SearchMode::Random { n_samples, seed }),
        other => Err(Error::Spec(format!(
            "unknown mode `{other}` (full_grid, random, grid_then_refine)"
        ))),
    }
}

fn set_samples(mode: &mut SearchMode, n: usize) {
    if let SearchMode::Random { n_samples, .. } = mode {
        *n_samples = n;
    } else {
        *mode = SearchMode::Random {
            n_samples: n,
            seed: 0,
        };
    }
}

fn set_seed(mode: &mut SearchMode, s: u64) {
    if let SearchMode::Random { seed, .. } = mode {
        *seed = s;
    } else {
        *mode = SearchMode::Random {
            n_samples: 1,
            seed: s,
        };
    }
}

/// Parses `0.25`, `pi`, `pi/8`, `3pi/4`, `3*pi/4` or `2 * pi`.
pub fn parse_angle(text: &str) -> Result<f64> {
    let err = || Error::Spec(format!("cannot parse angle `{text}`"));
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let lower = compact.to_ascii_lowercase();
    let value = if let Some(pos) = lower.find("pi") {
        let coef = lower[..pos].trim_end_matches('*');
        let coef: f64 = if coef.is_empty() {
            1.0
        } else {
            coef.parse().map_err(|_| err())?
        };
        let rest = &lower[pos + 2..];
        let div: f64 = if rest.is_empty() {
            1.0
        } else {
            rest.strip_prefix('/')
                .ok_or_else(err)?
                .parse()
                .map_err(|_| err())?
        };
        coef * PI / div
    } else {
        lower.parse().map_err(|_| err())?
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(err())
    }
}
