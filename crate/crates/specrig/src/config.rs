//! Run-level configuration: numeric knobs, caps, seed, and thread setup
//! shared by the CLI (which loads it from `--config file.json` with flag
//! precedence) and usable directly from the library.

use serde::{Deserialize, Serialize};

use crate::cpoly::Precision;
use crate::error::{Error, Result};

pub use crate::ratmap::DEFAULT_DEGREE_CAP;
pub use crate::spectrum::DEFAULT_ROOT_CAP;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Pgm,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub precision: Precision,
    /// Relative backward-residual target for accepting a root.
    pub root_tol: f64,
    /// Absolute floor of the root cluster-merge radius.
    pub cluster_radius: f64,
    /// Distance below which two spectra compare equal.
    pub spectrum_tol: f64,
    /// Chordal tolerance for orbit classification / periodicity checks.
    pub orbit_tol: f64,
    pub degree_cap: usize,
    pub root_cap: usize,
    pub seed: u64,
    pub format: OutputFormat,
    /// Worker count; `None` means auto (hardware parallelism). The
    /// `SPECRIG_THREADS` env var is honored when this is `None`.
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision: Precision::Double,
            root_tol: 1e-11,
            cluster_radius: 1e-6,
            spectrum_tol: 1e-6,
            orbit_tol: 1e-9,
            degree_cap: DEFAULT_DEGREE_CAP,
            root_cap: DEFAULT_ROOT_CAP,
            seed: 0x5eed_0001,
            format: OutputFormat::Json,
            threads: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("root_tol", self.root_tol),
            ("cluster_radius", self.cluster_radius),
            ("spectrum_tol", self.spectrum_tol),
            ("orbit_tol", self.orbit_tol),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "tolerance {name} must be positive and finite, got {v}"
                )));
            }
        }
        if let Precision::Big(bits) = self.precision {
            if !(64..=4096).contains(&bits) {
                return Err(Error::InvalidInput(format!(
                    "big-precision bits must be in [64, 4096], got {bits}"
                )));
            }
        }
        if self.degree_cap == 0 || self.root_cap == 0 {
            return Err(Error::InvalidInput("caps must be nonzero".into()));
        }
        Ok(())
    }

    /// The worker count to use: explicit setting, else `SPECRIG_THREADS`,
    /// else `None` (let the pool pick).
    pub fn effective_threads(&self) -> Option<usize> {
        if self.threads.is_some() {
            return self.threads;
        }
        std::env::var("SPECRIG_THREADS")
            .ok()
            .and_then(|s| s.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
    }

    /// Configure the global rayon pool. Safe to call more than once: a
    /// second initialization attempt is ignored (the pool is process-wide).
    pub fn init_thread_pool(&self) {
        if let Some(n) = self.effective_threads() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
}
