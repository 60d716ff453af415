//! File formats: the matrix JSON object { "p", "q", "rows" }, the run
//! configuration JSON, and the CSV emitted by verification sweeps.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::bsym::{BSymMatrix, SourceMatrix};
use crate::error::{HsError, Result};
use crate::mc::{EpsilonSchedule, MCEstimate};
use crate::metric::{make_metric, SignatureMetric};

/// Major version of all output schemas; parsers reject other majors.
pub const FORMAT_VERSION: u32 = 1;

/// Row-major matrix with its signature.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub p: usize,
    pub q: usize,
    pub rows: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_entries(metric: SignatureMetric, entries: &DMatrix<f64>) -> Self {
        let n = metric.n();
        Self {
            p: metric.p(),
            q: metric.q(),
            rows: (0..n)
                .map(|i| (0..n).map(|j| entries[(i, j)]).collect())
                .collect(),
        }
    }

    pub fn to_parts(&self) -> Result<(SignatureMetric, DMatrix<f64>)> {
        let metric = make_metric(self.p, self.q)?;
        let n = metric.n();
        if self.rows.len() != n || self.rows.iter().any(|r| r.len() != n) {
            return Err(HsError::DimensionMismatch {
                expected: n,
                got: self.rows.len(),
            });
        }
        let entries = DMatrix::from_fn(n, n, |i, j| self.rows[i][j]);
        Ok((metric, entries))
    }

    pub fn to_bsym(&self) -> Result<BSymMatrix> {
        let (metric, entries) = self.to_parts()?;
        BSymMatrix::from_entries(metric, entries)
    }

    pub fn to_source(&self) -> Result<SourceMatrix> {
        let (metric, entries) = self.to_parts()?;
        SourceMatrix::new(metric, entries)
    }
}

pub fn parse_matrix(text: &str) -> Result<MatrixJson> {
    serde_json::from_str(text).map_err(|e| HsError::Parse(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Closed,
    Quad,
    Mc,
}

impl std::fmt::Display for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Engine::Closed => "closed",
            Engine::Quad => "quad",
            Engine::Mc => "mc",
        })
    }
}

/// Verification run configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub p: usize,
    pub q: usize,
    #[serde(rename = "A")]
    pub a: MatrixJson,
    pub eps_schedule: EpsilonSchedule,
    pub n_samples: u64,
    pub seed: u64,
    pub engine: Engine,
    #[serde(default)]
    pub ablate_sign: bool,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| HsError::Parse(e.to_string()))?;
        if cfg.p != cfg.a.p || cfg.q != cfg.a.q {
            return Err(HsError::Parse(format!(
                "signature ({},{}) does not match the A matrix's ({},{})",
                cfg.p, cfg.q, cfg.a.p, cfg.a.q
            )));
        }
        if cfg.n_samples == 0 {
            return Err(HsError::Parse("n_samples must be positive".into()));
        }
        Ok(cfg)
    }

    pub fn source(&self) -> Result<SourceMatrix> {
        self.a.to_source()
    }
}

/// One CSV row of a verification sweep.
#[derive(Debug, Clone, Copy)]
pub struct SweepRow {
    pub eps: f64,
    pub engine: Engine,
    pub value: num_complex::Complex64,
    pub stderr: f64,
    pub n_accepted: u64,
    pub n_samples: u64,
    pub seed: u64,
}

impl SweepRow {
    pub fn from_mc(engine: Engine, est: &MCEstimate) -> Self {
        Self {
            eps: est.eps,
            engine,
            value: est.value,
            stderr: est.stderr(),
            n_accepted: est.n_accepted,
            n_samples: est.n_samples,
            seed: est.seed,
        }
    }
}

pub const SWEEP_CSV_COLUMNS: &str = "eps,engine,value_re,value_im,stderr,n_accepted,n_samples,seed";

/// CSV text with a format/seed comment line, the header row, and the data.
pub fn sweep_csv(rows: &[SweepRow], seed: u64) -> String {
    let mut out = format!("# hyperhs-csv {FORMAT_VERSION} seed={seed}\n{SWEEP_CSV_COLUMNS}\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.eps, r.engine, r.value.re, r.value.im, r.stderr, r.n_accepted, r.n_samples, r.seed
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn matrix_round_trip() {
        let text = r#"{ "p": 1, "q": 1, "rows": [[2.0, 1.0], [-1.0, 0.0]] }"#;
        let m = parse_matrix(text).unwrap();
        let r = m.to_bsym().unwrap();
        assert_eq!(r.entries()[(1, 0)], -1.0);
        let back = MatrixJson::from_entries(r.metric(), r.entries());
        assert_eq!(back.rows, m.rows);
    }

    #[test]
    fn asymmetric_matrix_rejected_on_load() {
        let text = r#"{ "p": 1, "q": 1, "rows": [[2.0, 1.0], [1.0, 0.0]] }"#;
        assert!(parse_matrix(text).unwrap().to_bsym().is_err());
    }

    #[test]
    fn run_config_parses_and_validates() {
        let text = r#"{
            "p": 1, "q": 1,
            "A": { "p": 1, "q": 1, "rows": [[1.0, 0.0], [0.0, -1.0]] },
            "eps_schedule": [0.2, 0.1, 0.05],
            "n_samples": 1000,
            "seed": 42,
            "engine": "mc"
        }"#;
        let cfg = RunConfig::parse(text).unwrap();
        assert_eq!(cfg.engine, Engine::Mc);
        assert!(!cfg.ablate_sign);
        assert!(cfg.source().is_ok());

        let bad = text.replace("[0.2, 0.1, 0.05]", "[0.1, 0.2]");
        assert!(RunConfig::parse(&bad).is_err());

        let mismatched = r#"{
            "p": 2, "q": 1,
            "A": { "p": 1, "q": 1, "rows": [[1.0, 0.0], [0.0, -1.0]] },
            "eps_schedule": [0.2, 0.1],
            "n_samples": 1000,
            "seed": 42,
            "engine": "mc"
        }"#;
        assert!(RunConfig::parse(mismatched).is_err());
    }

    #[test]
    fn csv_shape() {
        let rows = vec![SweepRow {
            eps: 0.1,
            engine: Engine::Quad,
            value: Complex64::new(0.0, -1.25),
            stderr: 0.0,
            n_accepted: 0,
            n_samples: 0,
            seed: 7,
        }];
        let text = sweep_csv(&rows, 7);
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# hyperhs-csv 1 seed=7"));
        assert_eq!(lines[1], SWEEP_CSV_COLUMNS);
        assert_eq!(lines[2], "0.1,quad,0,-1.25,0,0,0,7");
    }
}
