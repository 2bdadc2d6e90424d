use std::fs;
use std::path::PathBuf;

use thiserror::Error;

use crate::config::{ConfigError, ExperimentConfig};
use crate::experiments::{execute, Outcome};
use crate::report::{Provenance, ScalingReport, Table};

pub const THREADS_ENV: &str = "AREALAB_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error at {}: {}", .0.path, .0.message)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("writing CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("{THREADS_ENV} must be a positive integer, got {0:?}")]
    Threads(String),
}

/// Runs one experiment in memory. A numerical failure part-way keeps the
/// rows produced so far and is recorded in `report.error`.
pub fn run_experiment(cfg: &ExperimentConfig) -> (ScalingReport, Table) {
    let mut out = Outcome::default();
    let error = execute(cfg, &mut out).err().map(|e| e.to_string());
    let hash = cfg.hash();
    let report = ScalingReport {
        kind: cfg.kind.to_string(),
        csv: format!("{}-{hash}.csv", cfg.kind),
        rows: out.table.rows.len(),
        fit: out.fit,
        verdicts: out.verdicts,
        error,
        provenance: Provenance {
            config_hash: hash,
            seed: cfg.seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: serde_json::from_str(&cfg.canonical_json()).expect("canonical config is JSON"),
        },
    };
    (report, out.table)
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: ScalingReport,
    pub csv_path: PathBuf,
    pub report_path: PathBuf,
}

/// Runs the experiment and writes the CSV table and `report.json` into the
/// configured output directory.
pub fn run(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let (report, table) = run_experiment(cfg);
    fs::create_dir_all(&cfg.output_dir)?;
    let csv_path = cfg.output_dir.join(&report.csv);
    table.write_csv(fs::File::create(&csv_path)?)?;
    let report_path = cfg.output_dir.join("report.json");
    fs::write(&report_path, report.to_json())?;
    Ok(RunOutput { report, csv_path, report_path })
}

/// Sizes the global rayon pool from `AREALAB_THREADS` when it is set.
pub fn configure_threads() -> Result<Option<usize>, CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(None);
    };
    let n = parse_threads(&raw)?;
    // a pool built earlier in the process wins; that is only the case in tests
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(Some(n))
}

fn parse_threads(raw: &str) -> Result<usize, CliError> {
    match raw.trim().parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(CliError::Threads(raw.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ExperimentKind;

    #[test]
    fn thread_values() {
        assert_eq!(parse_threads("4").unwrap(), 4);
        assert!(parse_threads("0").is_err());
        assert!(parse_threads("-2").is_err());
        assert!(parse_threads("many").is_err());
    }

    #[test]
    fn report_names_the_csv() {
        let cfg = ExperimentConfig::defaults(ExperimentKind::Topo);
        let (rep, table) = run_experiment(&cfg);
        assert!(rep.error.is_none());
        assert_eq!(rep.rows, table.rows.len());
        assert_eq!(rep.csv, format!("topo-{}.csv", cfg.hash()));
    }

    #[test]
    fn runtime_failure_keeps_finished_rows() {
        use crate::config::ParamValue;
        // skips validation: the ring is too large to enumerate, which fails after the quantum rows
        let cfg = ExperimentConfig::defaults(ExperimentKind::MutualInfo).with_param("ring_sites", ParamValue::Int(25));
        let (rep, table) = run_experiment(&cfg);
        assert!(rep.error.as_deref().unwrap().contains("20"), "{:?}", rep.error);
        assert_eq!(table.rows.len(), 3);
        assert_eq!(rep.rows, 3);
        assert_eq!(rep.verdicts.len(), 1);
        assert!(!rep.all_pass());
        assert!(rep.to_json().contains("\"error\""));
    }
}
