//! JSON config file: per-command defaults that flags override.

use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub fixed_points: FixedPointsCfg,
    pub invariance: InvarianceCfg,
    pub measure: MeasureCfg,
    pub compare: CompareCfg,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FixedPointsCfg {
    pub family: Option<String>,
    pub theta1: Option<f64>,
    pub phi1: Option<f64>,
    pub varpi_list: Option<Vec<f64>>,
    pub grid: Option<usize>,
    pub out: Option<String>,
    pub points_out: Option<String>,
    pub format: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PacketCfg {
    pub envelope: Option<String>,
    pub theta0: Option<f64>,
    pub env_width: Option<f64>,
    pub theta_max: Option<f64>,
    pub n_samples: Option<usize>,
    pub band: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InvarianceCfg {
    pub seed: Option<u64>,
    pub n_lambdas: Option<usize>,
    pub eta_max: Option<f64>,
    pub correlation: Option<String>,
    #[serde(flatten)]
    pub packet: PacketCfg,
    pub out: Option<String>,
    pub format: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MeasureCfg {
    pub alpha_re: Option<f64>,
    pub alpha_im: Option<f64>,
    pub beta_re: Option<f64>,
    pub beta_im: Option<f64>,
    pub lam: Option<f64>,
    pub varpi: Option<f64>,
    pub eta: Option<f64>,
    pub shots: Option<u64>,
    pub seed: Option<u64>,
    #[serde(flatten)]
    pub packet: PacketCfg,
    pub packet_in: Option<String>,
    pub packet_out: Option<String>,
    pub out: Option<String>,
    pub format: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CompareCfg {
    pub seed: Option<u64>,
    pub varpi_list: Option<Vec<f64>>,
    #[serde(flatten)]
    pub packet: PacketCfg,
    pub out: Option<String>,
    pub format: Option<String>,
}

pub fn parse(text: &str) -> Result<FileConfig, String> {
    serde_json::from_str(text).map_err(|e| e.to_string())
}

pub fn load(path: &str) -> Result<FileConfig, String> {
    let text =
        std::fs::read_to_string(path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    parse(&text).map_err(|e| format!("config {path}: {e}"))
}
