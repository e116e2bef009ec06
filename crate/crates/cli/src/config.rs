use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{anyhow, bail};

/// The resolved parameters of one invocation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentConfig {
    pub command: String,
    pub dist: Option<String>,
    pub n: Option<usize>,
    pub d: Option<usize>,
    pub r: Option<f64>,
    pub s: Option<f64>,
    pub rho: Option<f64>,
    pub method: Option<String>,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

// Fields in canonical order; `command` always comes first.
const KEYS: [&str; 9] = ["dist", "n", "d", "r", "s", "rho", "method", "seed", "out"];

impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.command)?;
        let fields: [Option<String>; 9] = [
            self.dist.clone(),
            self.n.map(|v| v.to_string()),
            self.d.map(|v| v.to_string()),
            self.r.map(|v| format!("{v:?}")),
            self.s.map(|v| format!("{v:?}")),
            self.rho.map(|v| format!("{v:?}")),
            self.method.clone(),
            Some(self.seed.to_string()),
            self.out.as_ref().map(|p| p.display().to_string()),
        ];
        for (k, v) in KEYS.iter().zip(fields) {
            if let Some(v) = v {
                write!(f, " {k}={v}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for ExperimentConfig {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let mut tokens = s.split_whitespace();
        let command = tokens.next().ok_or_else(|| anyhow!("empty config"))?;
        let mut cfg = ExperimentConfig {
            command: command.to_string(),
            ..Default::default()
        };
        for tok in tokens {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| anyhow!("expected key=value, got `{tok}`"))?;
            match k {
                "dist" => cfg.dist = Some(v.to_string()),
                "n" => cfg.n = Some(v.parse()?),
                "d" => cfg.d = Some(v.parse()?),
                "r" => cfg.r = Some(v.parse()?),
                "s" => cfg.s = Some(v.parse()?),
                "rho" => cfg.rho = Some(v.parse()?),
                "method" => cfg.method = Some(v.to_string()),
                "seed" => cfg.seed = v.parse()?,
                "out" => cfg.out = Some(PathBuf::from(v)),
                _ => bail!("unknown config key `{k}`"),
            }
        }
        Ok(cfg)
    }
}
