use std::path::{Path, PathBuf};

use serde::Serialize;

use super::CliError;

/// Environment variable naming a default config file.
pub const CONFIG_ENV: &str = "EXTREMAL_CONFIG";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(format!("unknown format {s:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub digits: u32,
    pub depth: usize,
    pub budget: u64,
    pub window_cap: usize,
    pub growth_n: u64,
    /// `None` picks the command's natural format.
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            digits: 50,
            depth: 10,
            budget: 4_000_000,
            window_cap: 1_000_000,
            growth_n: 2000,
            format: None,
            out: None,
        }
    }
}

fn positive<T: std::str::FromStr + PartialOrd + Default>(key: &str, v: &str) -> Result<T, CliError> {
    match v.parse::<T>() {
        Ok(x) if x > T::default() => Ok(x),
        _ => Err(CliError::Usage(format!("config key {key} needs a positive integer, got {v:?}"))),
    }
}

impl RunConfig {
    /// Applies `key = value` lines; `#` starts a comment.
    pub fn merge_text(&mut self, text: &str) -> Result<(), CliError> {
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", no + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            match k {
                "digits" => self.digits = positive(k, v)?,
                "depth" => self.depth = positive(k, v)?,
                "budget" => self.budget = positive(k, v)?,
                "window_cap" => self.window_cap = positive(k, v)?,
                "growth_n" => self.growth_n = positive(k, v)?,
                "format" => self.format = Some(v.parse().map_err(CliError::Usage)?),
                "out" => self.out = Some(PathBuf::from(v)),
                _ => return Err(CliError::Usage(format!("unknown config key {k:?}"))),
            }
        }
        Ok(())
    }

    pub fn merge_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        self.merge_text(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_and_reject() {
        let mut c = RunConfig::default();
        c.merge_text("# bundle\ndigits = 30\ndepth=6 # shallow\nformat = csv\n").unwrap();
        assert_eq!((c.digits, c.depth, c.format), (30, 6, Some(Format::Csv)));
        assert!(c.clone().merge_text("colour = red").is_err());
        assert!(c.clone().merge_text("depth = 0").is_err());
        assert!(c.merge_text("depth").is_err());
    }
}
