use ratlin::eigsolve::SpectralReport;
use ratlin::linbuild::MinimalityReport;
use ratlin::recover::EigenpairR;
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct EigsOutput {
    #[serde(flatten)]
    pub spectral: SpectralReport,
    pub eigenpairs: Vec<EigenpairR>,
    pub minimality: MinimalityReport,
}

#[derive(Debug, Serialize)]
pub struct InfinityOutput {
    pub orders: Vec<i64>,
    /// `g = ρ_D + 1`.
    pub grade: usize,
    pub minimality: MinimalityReport,
}
