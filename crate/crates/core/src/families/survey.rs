//! Parameter surveys: run selected families over explicit parameter lists,
//! collecting one row per instance. Per-instance errors become rows, not
//! aborts, so an oversized or inadmissible configuration never kills a run.

use serde::{Deserialize, Serialize};

use super::{abcc_family, lift_cover, lsv_family, selberg_family, FamilyOpts, FamilyResult};
use crate::matgrp::enumerate::DEFAULT_ENUM_CAP;
use crate::spectra::{IterativeOpts, SpectraOpts, DEFAULT_DENSE_CAP, DEFAULT_EIG_TOL};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct LsvParams {
    pub q: u64,
    pub d: usize,
    pub e: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AbccParams {
    pub p: u64,
    pub e: usize,
}

fn default_cap() -> usize {
    DEFAULT_ENUM_CAP
}
fn default_dense_cap() -> usize {
    DEFAULT_DENSE_CAP
}
fn default_tol() -> f64 {
    DEFAULT_EIG_TOL
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SurveyConfig {
    /// Seed for the lsv/abcc instances; defaults to the caller's seed.
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default = "default_cap")]
    pub cap: usize,
    #[serde(default = "default_dense_cap")]
    pub dense_cap: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub selberg: Vec<u64>,
    #[serde(default)]
    pub lsv: Vec<LsvParams>,
    #[serde(default)]
    pub abcc: Vec<AbccParams>,
    #[serde(default)]
    pub cover: Vec<u64>,
}

impl Default for SurveyConfig {
    fn default() -> Self {
        SurveyConfig {
            seed: None,
            cap: default_cap(),
            dense_cap: default_dense_cap(),
            tol: default_tol(),
            selberg: Vec::new(),
            lsv: Vec::new(),
            abcc: Vec::new(),
            cover: Vec::new(),
        }
    }
}

impl SurveyConfig {
    pub fn effective_seed(&self) -> u64 {
        self.seed.unwrap_or(1)
    }

    pub fn family_opts(&self) -> FamilyOpts {
        let spectra = SpectraOpts {
            dense_cap: self.dense_cap,
            eig_tol: self.tol,
            iterative: IterativeOpts {
                seed: self.effective_seed(),
                ..IterativeOpts::default()
            },
        };
        FamilyOpts {
            cap: self.cap,
            spectra,
        }
    }
}

/// One survey row: the CSV schema plus the error slot for failed instances.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SurveyRow {
    pub family: String,
    pub p: Option<u64>,
    pub q: Option<u64>,
    pub d: Option<usize>,
    pub e: Option<usize>,
    pub seed: u64,
    pub n: usize,
    pub k: usize,
    pub classification: String,
    pub lambda: Option<f64>,
    pub bound: Option<f64>,
    pub verdict: bool,
    /// kept out of the JSON mirror so equal-config runs stay byte-identical
    #[serde(skip)]
    pub runtime_ms: u128,
    pub error: Option<String>,
    /// serialized algebra data for rows built from one (reproduces S exactly)
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<crate::lsv::AlgebraSpecData>,
}

impl SurveyRow {
    fn from_result(r: &FamilyResult) -> SurveyRow {
        SurveyRow {
            family: r.family.clone(),
            p: r.p,
            q: r.q,
            d: r.d,
            e: r.e,
            seed: r.seed,
            n: r.n,
            k: r.k,
            classification: r.classification.clone(),
            lambda: r.lambda_x(),
            bound: r.bound,
            verdict: r.all_pass(),
            runtime_ms: r.runtime_ms,
            error: None,
            provenance: r.provenance.clone(),
        }
    }

    fn from_error(
        family: &str,
        p: Option<u64>,
        q: Option<u64>,
        d: Option<usize>,
        e: Option<usize>,
        seed: u64,
        err: &crate::error::Error,
    ) -> SurveyRow {
        SurveyRow {
            family: family.into(),
            p,
            q,
            d,
            e,
            seed,
            n: 0,
            k: 0,
            classification: "-".into(),
            lambda: None,
            bound: None,
            verdict: false,
            runtime_ms: 0,
            error: Some(err.to_string()),
            provenance: None,
        }
    }
}

/// Run every configured instance in order. Deterministic given the seeds.
pub fn run_survey(config: &SurveyConfig) -> Vec<SurveyRow> {
    let opts = config.family_opts();
    let mut rows = Vec::new();
    for &p in &config.selberg {
        rows.push(match selberg_family(p, &opts) {
            Ok(r) => SurveyRow::from_result(&r),
            Err(e) => SurveyRow::from_error("selberg", Some(p), None, None, None, 0, &e),
        });
    }
    let seed = config.effective_seed();
    for params in &config.lsv {
        rows.push(
            match lsv_family(params.q, params.d, params.e, seed, &opts) {
                Ok(r) => SurveyRow::from_result(&r),
                Err(e) => SurveyRow::from_error(
                    "lsv",
                    None,
                    Some(params.q),
                    Some(params.d),
                    Some(params.e),
                    seed,
                    &e,
                ),
            },
        );
    }
    for params in &config.abcc {
        rows.push(match abcc_family(params.p, params.e, seed, &opts) {
            Ok(r) => SurveyRow::from_result(&r),
            Err(e) => SurveyRow::from_error(
                "abcc",
                Some(params.p),
                Some(params.p),
                Some(2),
                Some(params.e),
                seed,
                &e,
            ),
        });
    }
    for &p in &config.cover {
        rows.push(match lift_cover(p, &opts) {
            Ok(r) => SurveyRow::from_result(&r),
            Err(e) => SurveyRow::from_error("cover", Some(p), None, None, None, 0, &e),
        });
    }
    rows
}

fn csv_opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

/// CSV table: family,p,q,d,e,seed,n,k,classification,lambda,bound,verdict,runtime_ms
pub fn survey_csv(rows: &[SurveyRow]) -> String {
    let mut out =
        String::from("family,p,q,d,e,seed,n,k,classification,lambda,bound,verdict,runtime_ms\n");
    for r in rows {
        let lambda = r.lambda.map(|v| format!("{v:.16e}")).unwrap_or_default();
        let bound = r.bound.map(|v| format!("{v:.16e}")).unwrap_or_default();
        let classification = if r.error.is_some() {
            "error".to_string()
        } else {
            r.classification.clone()
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.family,
            csv_opt(&r.p),
            csv_opt(&r.q),
            csv_opt(&r.d),
            csv_opt(&r.e),
            r.seed,
            r.n,
            r.k,
            classification,
            lambda,
            bound,
            r.verdict,
            r.runtime_ms
        ));
    }
    out
}
