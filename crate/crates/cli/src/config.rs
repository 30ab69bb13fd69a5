//! Run configuration: a flat `key = value` file with command-line flag
//! overrides. All parameters are scalars or paths, so nothing fancier is
//! needed.

use std::fmt;
use std::path::PathBuf;

#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub alpha: f64,
    pub k1: f64,
    pub k2: f64,
    pub max_chain: u32,
    pub rhs: Option<String>,
    pub out: Option<PathBuf>,
    pub grid: (usize, usize),
    pub suite: Option<String>,
    pub radial_nodes: usize,
    pub angular_nodes: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            alpha: 1.0,
            k1: 1.0,
            k2: 1.0,
            max_chain: 30,
            rhs: None,
            out: None,
            grid: (64, 128),
            suite: None,
            radial_nodes: 400,
            angular_nodes: 256,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, UsageError> {
    value
        .trim()
        .parse()
        .map_err(|_| UsageError(format!("invalid value '{value}' for {key}")))
}

fn parse_grid(value: &str) -> Result<(usize, usize), UsageError> {
    let (nr, nphi) = value
        .split_once('x')
        .ok_or_else(|| UsageError(format!("grid must look like 64x128, got '{value}'")))?;
    let nr = parse_num("grid", nr)?;
    let nphi = parse_num("grid", nphi)?;
    if nr == 0 || nphi == 0 {
        return Err(UsageError("grid dimensions must be positive".into()));
    }
    Ok((nr, nphi))
}

impl RunConfig {
    fn apply(&mut self, key: &str, value: &str) -> Result<(), UsageError> {
        match key {
            "alpha" => self.alpha = parse_num(key, value)?,
            "k1" => self.k1 = parse_num(key, value)?,
            "k2" => self.k2 = parse_num(key, value)?,
            "max_chain" => self.max_chain = parse_num(key, value)?,
            "rhs" => self.rhs = Some(value.trim().to_string()),
            "out" => self.out = Some(PathBuf::from(value.trim())),
            "grid" => self.grid = parse_grid(value.trim())?,
            "suite" => self.suite = Some(value.trim().to_string()),
            "radial_nodes" => self.radial_nodes = parse_num(key, value)?,
            "angular_nodes" => self.angular_nodes = parse_num(key, value)?,
            other => return Err(UsageError(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    pub fn load_file(&mut self, path: &str) -> Result<(), UsageError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError(format!("cannot read config {path}: {e}")))?;
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| UsageError(format!("{path}:{}: expected key = value", no + 1)))?;
            self.apply(key.trim(), value)?;
        }
        Ok(())
    }

    /// Parse flags after the command word; `--config FILE` is applied first,
    /// then every flag in order.
    pub fn from_args(args: &[String]) -> Result<RunConfig, UsageError> {
        let mut cfg = RunConfig::default();
        // Config files first so that flags override them.
        let mut i = 0;
        while i < args.len() {
            if args[i] == "--config" {
                let path = args
                    .get(i + 1)
                    .ok_or_else(|| UsageError("--config needs a file path".into()))?;
                cfg.load_file(path)?;
                i += 2;
            } else {
                i += 1;
            }
        }
        let mut i = 0;
        while i < args.len() {
            let flag = &args[i];
            if flag == "--config" {
                i += 2;
                continue;
            }
            let key = match flag.as_str() {
                "--alpha" => "alpha",
                "--k1" => "k1",
                "--k2" => "k2",
                "--max-chain" => "max_chain",
                "--rhs" => "rhs",
                "--out" => "out",
                "--grid" => "grid",
                "--suite" => "suite",
                "--radial-nodes" => "radial_nodes",
                "--angular-nodes" => "angular_nodes",
                other => return Err(UsageError(format!("unknown flag '{other}'"))),
            };
            let value = args
                .get(i + 1)
                .ok_or_else(|| UsageError(format!("{flag} needs a value")))?;
            cfg.apply(key, value)?;
            i += 2;
        }
        if cfg.max_chain < 1 {
            return Err(UsageError("max_chain must be at least 1".into()));
        }
        Ok(cfg)
    }
}
