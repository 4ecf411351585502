use std::path::PathBuf;

use clap::ValueEnum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

/// Settings shared by every subcommand.
#[derive(Clone, Debug)]
pub struct Config {
    pub round_tol: f64,
    pub unitary_tol: f64,
    pub cache_dir: Option<PathBuf>,
    pub workers: usize,
    pub format: Format,
}

impl Config {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.round_tol > 0.0 && self.round_tol.is_finite()) {
            return Err(format!(
                "rounding tolerance must be positive, got {}",
                self.round_tol
            ));
        }
        if !(self.unitary_tol > 0.0 && self.unitary_tol.is_finite()) {
            return Err(format!(
                "unitarity tolerance must be positive, got {}",
                self.unitary_tol
            ));
        }
        if self.workers == 0 {
            return Err("worker count must be at least 1".into());
        }
        Ok(())
    }
}

impl Default for Config {
    fn default() -> Self {
        Config {
            round_tol: 1e-6,
            unitary_tol: 1e-8,
            cache_dir: None,
            workers: std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1),
            format: Format::Pretty,
        }
    }
}
