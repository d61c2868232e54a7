//! Settings resolved from flags, environment, an optional JSON config file
//! and built-in defaults, in that order of priority.

use std::path::Path;

use hillproj_core::Tolerances;
use serde::Deserialize;

use crate::CliError;

pub const THREADS_ENV: &str = "HILLPROJ_THREADS";

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub tol: Option<f64>,
    pub period: Option<f64>,
    pub threads: Option<usize>,
    pub tolerances: Option<Tolerances>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Settings {
    /// Integrator tolerance.
    pub tol: f64,
    pub period: f64,
    /// `None` leaves the choice to the thread pool.
    pub threads: Option<usize>,
    pub tolerances: Tolerances,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            tol: 1e-10,
            period: 1.0,
            threads: None,
            tolerances: Tolerances::default(),
        }
    }
}

impl Settings {
    pub fn resolve(
        tol: Option<f64>,
        period: Option<f64>,
        threads: Option<usize>,
        env_threads: Option<&str>,
        file: Option<&ConfigFile>,
    ) -> Result<Self, CliError> {
        let file = file.cloned().unwrap_or_default();
        let env_threads = match env_threads {
            Some(s) => Some(s.trim().parse::<usize>().map_err(|_| {
                CliError::Usage(format!("{THREADS_ENV}={s} is not a thread count"))
            })?),
            None => None,
        };
        let base = Settings::default();
        let s = Settings {
            tol: tol.or(file.tol).unwrap_or(base.tol),
            period: period.or(file.period).unwrap_or(base.period),
            threads: threads.or(env_threads).or(file.threads),
            tolerances: file.tolerances.unwrap_or(base.tolerances),
        };
        if !(s.tol > 0.0 && s.tol < 1.0) {
            return Err(CliError::Usage(format!("--tol {} must lie in (0, 1)", s.tol)));
        }
        if !(s.period > 0.0) || !s.period.is_finite() {
            return Err(CliError::Usage(format!("--period {} must be positive", s.period)));
        }
        if s.threads == Some(0) {
            return Err(CliError::Usage("thread count must be positive".into()));
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn priority() {
        let file = ConfigFile {
            tol: Some(1e-8),
            period: Some(2.0),
            threads: Some(3),
            tolerances: None,
        };
        let s = Settings::resolve(None, None, None, None, Some(&file)).unwrap();
        assert_eq!((s.tol, s.period, s.threads), (1e-8, 2.0, Some(3)));
        let s = Settings::resolve(Some(1e-6), None, None, Some("5"), Some(&file)).unwrap();
        assert_eq!((s.tol, s.threads), (1e-6, Some(5)));
        let s = Settings::resolve(None, None, Some(2), Some("5"), None).unwrap();
        assert_eq!(s.threads, Some(2));
        assert!(Settings::resolve(None, None, None, Some("many"), None).is_err());
        assert!(Settings::resolve(Some(-1.0), None, None, None, None).is_err());
    }

    #[test]
    fn partial_tolerances() {
        let f: ConfigFile = serde_json::from_str(r#"{"tolerances": {"conj": 1e-6}}"#).unwrap();
        let t = f.tolerances.unwrap();
        assert_eq!(t.conj, 1e-6);
        assert_eq!(t.det, Tolerances::default().det);
        assert!(serde_json::from_str::<ConfigFile>(r#"{"tolerance": 1}"#).is_err());
    }
}
