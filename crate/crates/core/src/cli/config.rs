//! Run configuration: a TOML file plus command-line overrides (flags win).
//!
//! ```toml
//! modal = "table1.modal"          # relative to this file
//! modes = 1
//! undamp = true
//! augmentation = "pid:-7,-50,-0.2"  # or "integrator:-1"
//! epsilon = 9.5
//! grid = "0.1,10000,2000"         # optional
//! out = "out"                     # relative to the working directory
//! gain = [-5578, 79929.08, -57.312]  # optional, certify only
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::augmentation::PidGains;
use crate::error::{Error, Result};
use crate::statespace::FrequencyGrid;

pub const DEFAULT_OUT: &str = "ni-synth-out";

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Augmentation {
    Integrator { ktilde: f64 },
    Pid(PidGains),
}

impl std::fmt::Display for Augmentation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        use super::format::h;
        match self {
            Augmentation::Integrator { ktilde } => write!(f, "integrator, ktilde = {}", h(*ktilde)),
            Augmentation::Pid(g) => write!(
                f,
                "pid, kp = {}, ki = {}, kd = {}",
                h(g.kp),
                h(g.ki),
                h(g.kd)
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl GridSpec {
    pub fn build(&self) -> Result<FrequencyGrid> {
        FrequencyGrid::logspace(self.lo, self.hi, self.n)
    }
}

fn bad(msg: String) -> Error {
    Error::InvalidArgument(msg)
}

fn number(s: &str, what: &str) -> Result<f64> {
    let x: f64 = s
        .trim()
        .parse()
        .map_err(|_| bad(format!("{what}: cannot parse '{}' as a number", s.trim())))?;
    if !x.is_finite() {
        return Err(bad(format!("{what}: '{}' is not finite", s.trim())));
    }
    Ok(x)
}

/// `integrator:<ktilde>` or `pid:<kp>,<ki>,<kd>`.
pub fn parse_augmentation(s: &str) -> Result<Augmentation> {
    let (kind, rest) = s
        .split_once(':')
        .ok_or_else(|| bad(format!("augmentation '{s}' must be integrator:<k> or pid:<kp>,<ki>,<kd>")))?;
    match kind.trim() {
        "integrator" => Ok(Augmentation::Integrator {
            ktilde: number(rest, "integrator gain")?,
        }),
        "pid" => {
            let parts: Vec<&str> = rest.split(',').collect();
            if parts.len() != 3 {
                return Err(bad(format!("pid needs three gains kp,ki,kd, got '{rest}'")));
            }
            Ok(Augmentation::Pid(PidGains::new(
                number(parts[0], "kp")?,
                number(parts[1], "ki")?,
                number(parts[2], "kd")?,
            )))
        }
        other => Err(bad(format!("unknown augmentation '{other}'"))),
    }
}

/// `<lo>,<hi>,<n>`.
pub fn parse_grid(s: &str) -> Result<GridSpec> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(bad(format!("grid '{s}' must be lo,hi,n")));
    }
    let n: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| bad(format!("grid point count '{}' is not an integer", parts[2].trim())))?;
    let g = GridSpec {
        lo: number(parts[0], "grid lower bound")?,
        hi: number(parts[1], "grid upper bound")?,
        n,
    };
    g.build()?;
    Ok(g)
}

/// `k1,k2,...`.
pub fn parse_gain(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(|x| number(x, "gain entry")).collect()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    modal: Option<PathBuf>,
    modes: Option<usize>,
    undamp: Option<bool>,
    augmentation: Option<String>,
    epsilon: Option<f64>,
    grid: Option<String>,
    out: Option<PathBuf>,
    gain: Option<Vec<f64>>,
}

/// Values supplied on the command line.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub config: Option<PathBuf>,
    pub modal: Option<PathBuf>,
    pub modes: Option<usize>,
    pub undamp: bool,
    pub augmentation: Option<String>,
    pub epsilon: Option<f64>,
    pub grid: Option<String>,
    pub out: Option<PathBuf>,
    pub gain: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub modal_file: PathBuf,
    pub modes: usize,
    pub undamp: bool,
    pub augmentation: Option<Augmentation>,
    pub epsilon: Option<f64>,
    pub grid: Option<GridSpec>,
    pub output_dir: PathBuf,
    pub gain: Option<Vec<f64>>,
}

fn file_values(text: &str, origin: &Path) -> Result<(Overrides, Option<Vec<f64>>)> {
    let f: ConfigFile = toml::from_str(text).map_err(|e| Error::Parse {
        path: origin.to_path_buf(),
        message: e.to_string(),
    })?;
    let base = origin.parent().unwrap_or(Path::new(""));
    let o = Overrides {
        modal: f.modal.map(|p| if p.is_absolute() { p } else { base.join(p) }),
        modes: f.modes,
        undamp: f.undamp.unwrap_or(false),
        augmentation: f.augmentation,
        epsilon: f.epsilon,
        grid: f.grid,
        out: f.out,
        ..Overrides::default()
    };
    Ok((o, f.gain))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

impl RunConfig {
    pub fn parse(text: &str, origin: &Path) -> Result<RunConfig> {
        let (o, gain) = file_values(text, origin)?;
        let mut c = RunConfig::from_values(o)?;
        c.gain = gain;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<RunConfig> {
        RunConfig::parse(&read(path)?, path)
    }

    fn from_values(o: Overrides) -> Result<RunConfig> {
        let modal_file = o
            .modal
            .ok_or_else(|| bad("no modal parameter file given (--modal or 'modal' in the config)".into()))?;
        let modes = o.modes.unwrap_or(1);
        if modes == 0 {
            return Err(bad("--modes must be at least 1".into()));
        }
        Ok(RunConfig {
            modal_file,
            modes,
            undamp: o.undamp,
            augmentation: o.augmentation.as_deref().map(parse_augmentation).transpose()?,
            epsilon: o.epsilon,
            grid: o.grid.as_deref().map(parse_grid).transpose()?,
            output_dir: o.out.unwrap_or_else(|| PathBuf::from(DEFAULT_OUT)),
            gain: o.gain.as_deref().map(parse_gain).transpose()?,
        })
    }

    /// Config file (if any) with command-line values layered on top.
    pub fn resolve(flags: &Overrides) -> Result<RunConfig> {
        let (mut o, file_gain) = match &flags.config {
            Some(p) => file_values(&read(p)?, p)?,
            None => (Overrides::default(), None),
        };
        let f = flags.clone();
        o.modal = f.modal.or(o.modal);
        o.modes = f.modes.or(o.modes);
        o.undamp |= f.undamp;
        o.augmentation = f.augmentation.or(o.augmentation);
        o.epsilon = f.epsilon.or(o.epsilon);
        o.grid = f.grid.or(o.grid);
        o.out = f.out.or(o.out);
        o.gain = f.gain;
        let mut c = RunConfig::from_values(o)?;
        if c.gain.is_none() {
            c.gain = file_gain;
        }
        Ok(c)
    }

    pub fn require_augmentation(&self) -> Result<Augmentation> {
        self.augmentation
            .ok_or_else(|| bad("no augmentation given (--aug integrator:<k> or pid:<kp>,<ki>,<kd>)".into()))
    }

    pub fn require_epsilon(&self) -> Result<f64> {
        self.epsilon
            .ok_or_else(|| bad("no degree of stability given (--epsilon)".into()))
    }
}
