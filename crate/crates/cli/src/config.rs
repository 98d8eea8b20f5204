//! Resolved run configuration, embedded in every JSON report.

use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use typechange::numerics::Tolerances;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub subcommand: String,
    /// Family name, boundary preset or table path, or characteristic datum.
    pub selector: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary_slope: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interface_radius: Option<f64>,
    /// Goursat data as ascending polynomial coefficients.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub goursat: Option<(Vec<f64>, Vec<f64>)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_quad: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub probe: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
}
