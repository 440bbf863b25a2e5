//! Machine-readable report documents: every report embeds the tool
//! version, the command, and the resolved configuration (including the
//! seed), so runs are reproducible byte for byte.

use serde::Serialize;

use extremap_core::channels::SuperOpMatrix;
use extremap_core::extremality::{InvertibleExtremeReport, Witness};
use extremap_core::operators::MatrixJson;
use extremap_core::wigner::{WignerClass, WignerClassification};

use crate::config::RunConfig;

#[derive(Serialize)]
pub struct Report<'a, T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub config: &'a RunConfig,
    pub result: T,
}

/// Serialize the report and write it to the configured output (or stdout).
pub fn emit<T: Serialize>(config: &RunConfig, command: &str, result: T) -> anyhow::Result<()> {
    let report = Report {
        tool: "extremap",
        version: env!("CARGO_PKG_VERSION"),
        command,
        config,
        result,
    };
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    match &config.output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Write raw CSV text to the configured output (or stdout).
pub fn emit_csv(config: &RunConfig, text: &str) -> anyhow::Result<()> {
    match &config.output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

#[derive(Serialize)]
pub struct WitnessDto {
    pub input: MatrixJson,
    pub image: MatrixJson,
    pub image_trace: f64,
    pub residual: f64,
}

impl WitnessDto {
    pub fn from_witness(w: &Witness) -> Self {
        Self {
            input: MatrixJson::from_matrix(w.input.op().matrix()),
            image: MatrixJson::from_matrix(w.image.op().matrix()),
            image_trace: w.image_trace,
            residual: w.residual,
        }
    }
}

#[derive(Serialize)]
pub struct InvertibleExtremeDto {
    pub cond_a_inverse_cp: bool,
    pub cond_b_single_invertible_kraus: bool,
    pub cond_de_rank_one_images: bool,
    pub de_not_found_within_budget: bool,
    pub consistent: bool,
    pub witnesses: Vec<WitnessDto>,
}

impl InvertibleExtremeDto {
    pub fn from_report(r: &InvertibleExtremeReport) -> Self {
        Self {
            cond_a_inverse_cp: r.cond_a_inverse_cp,
            cond_b_single_invertible_kraus: r.cond_b_single_invertible_kraus,
            cond_de_rank_one_images: r.cond_de_rank_one_images,
            de_not_found_within_budget: r.de_not_found_within_budget,
            consistent: r.consistent,
            witnesses: r.witnesses.iter().map(WitnessDto::from_witness).collect(),
        }
    }
}

#[derive(Serialize)]
pub struct WignerResiduals {
    pub orthogonality: f64,
    pub transition_prob_deviation: f64,
}

#[derive(Serialize)]
pub struct WignerDto {
    pub branch: &'static str,
    #[serde(rename = "U", skip_serializing_if = "Option::is_none")]
    pub recovered_u: Option<MatrixJson>,
    pub residuals: WignerResiduals,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub positivity_witness: Option<MatrixJson>,
}

impl WignerDto {
    pub fn from_classification(
        c: &WignerClassification,
        superop: &SuperOpMatrix,
        samples: usize,
        seed: u64,
    ) -> anyhow::Result<Self> {
        let (_, deviation) =
            extremap_core::wigner::preserves_transition_probs(superop, samples, seed, 1e-9)?;
        Ok(Self {
            branch: match c.branch {
                WignerClass::Unitary => "unitary",
                WignerClass::Antiunitary => "antiunitary",
                WignerClass::NotWigner => "not_wigner",
            },
            recovered_u: c.recovered_u.as_ref().map(MatrixJson::from_matrix),
            residuals: WignerResiduals {
                orthogonality: c.orthogonality_residual,
                transition_prob_deviation: deviation,
            },
            seed,
            positivity_witness: c
                .positivity_witness
                .as_ref()
                .map(|h| MatrixJson::from_matrix(h.matrix())),
        })
    }
}
