//! Config-driven evaluation: response → transfer → emission → squeezing.

use thiserror::Error;

use crate::config::{Medium, RunConfig};
use crate::dielectric::{DielectricError, DielectricResponse};
use crate::emission::{emission_intensity_partial, EmissionError, EmissionState};
use crate::grid::{Execution, FrequencyGrid, GridError};
use crate::slab::{find_resonances, SlabError, SlabGeometry, SlabTransfer, TransferSample};
use crate::squeezing::{
    degradation_report, squeezing_spectrum_partial, DegradationReport, SqueezeError, SqueezeInput,
    SqueezingResult,
};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Dielectric(#[from] DielectricError),
    #[error(transparent)]
    Slab(#[from] SlabError),
    #[error("every grid sample is at or beyond the lasing threshold (guard {guard:e})")]
    AllLasing { guard: f64 },
    #[error(transparent)]
    Emission(#[from] EmissionError),
    #[error(transparent)]
    Squeeze(#[from] SqueezeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowFlag {
    Ok,
    Lasing,
    CrossoverRegularized,
}

impl RowFlag {
    pub fn token(self) -> &'static str {
        match self {
            RowFlag::Ok => "OK",
            RowFlag::Lasing => "LASING",
            RowFlag::CrossoverRegularized => "CROSSOVER_REGULARIZED",
        }
    }

    pub fn from_token(token: &str) -> Option<Self> {
        match token {
            "OK" => Some(RowFlag::Ok),
            "LASING" => Some(RowFlag::Lasing),
            "CROSSOVER_REGULARIZED" => Some(RowFlag::CrossoverRegularized),
            _ => None,
        }
    }
}

/// One output row. Spectral fields are `None` on lasing rows; `b` is also
/// `None` exactly at ħω = μ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumRow {
    pub energy_ev: f64,
    pub chi_re: f64,
    pub chi_im: f64,
    pub n_re: f64,
    pub n_im: f64,
    pub t_abs2: Option<f64>,
    pub r_abs2: Option<f64>,
    pub b: Option<f64>,
    pub i_over_k: Option<f64>,
    pub s_at_phase: Option<f64>,
    pub s_min: Option<f64>,
    pub s_max: Option<f64>,
    pub flag: RowFlag,
}

/// Values the plot script and footer need besides the rows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableMeta {
    pub squeeze_magnitude: f64,
    pub input_min: f64,
    pub input_max: f64,
    /// Set for excited media (μ > 0).
    pub chemical_potential: Option<f64>,
    /// Oscillator resonance, for Lorentz media.
    pub resonance_ev: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTable {
    pub rows: Vec<SpectrumRow>,
    pub meta: TableMeta,
    pub report: DegradationReport,
}

/// Intermediate products of a run, for callers that need more than the table.
#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub response: DielectricResponse,
    pub transfer: SlabTransfer,
    pub squeezing: SqueezingResult,
    pub table: SpectrumTable,
}

pub fn build_response(config: &RunConfig) -> Result<DielectricResponse, PipelineError> {
    let grid = FrequencyGrid::linspace(
        config.grid.e_min_ev,
        config.grid.e_max_ev,
        config.grid.count,
    )?;
    let response = match &config.medium {
        Medium::Lorentz(model) => DielectricResponse::lorentz(model, grid)?,
        Medium::Table { table, .. } => DielectricResponse::tabulated(table, grid)?,
    };
    Ok(response)
}

/// Dielectric response and slab transfer only.
pub fn compute_transfer(
    config: &RunConfig,
    execution: Execution,
) -> Result<(DielectricResponse, SlabTransfer), PipelineError> {
    let response = build_response(config)?;
    let geometry = SlabGeometry::from_micrometres(config.thickness_um)?;
    let transfer = SlabTransfer::compute(
        &response,
        geometry,
        config.thresholds.lasing_guard,
        execution,
    );
    if transfer.all_lasing() {
        return Err(PipelineError::AllLasing {
            guard: config.thresholds.lasing_guard,
        });
    }
    Ok((response, transfer))
}

/// Fabry–Perot transmission maxima for a config, eV.
pub fn resonances(config: &RunConfig) -> Result<Vec<f64>, PipelineError> {
    let (_, transfer) = compute_transfer(config, Execution::Parallel)?;
    Ok(find_resonances(&transfer))
}

pub fn run_pipeline(config: &RunConfig) -> Result<SpectrumTable, PipelineError> {
    Ok(run_pipeline_with(config, Execution::Parallel)?.table)
}

pub fn run_pipeline_with(
    config: &RunConfig,
    execution: Execution,
) -> Result<PipelineOutput, PipelineError> {
    let (response, transfer) = compute_transfer(config, execution)?;
    let state = EmissionState::new(
        config.emission.temperature_k,
        config.emission.chemical_potential_ev,
    )?;
    let emission = emission_intensity_partial(
        &state,
        &transfer,
        &response,
        config.thresholds.crossover_window,
    )?;
    let input = SqueezeInput::new(
        config.squeeze.magnitude,
        config.squeeze.phase_rad,
        config.squeeze.carrier_ev,
    )?;
    let squeezing = squeezing_spectrum_partial(&input, &transfer, &emission)?;

    let mu = config.emission.chemical_potential_ev;
    let chemical_potential = (mu > 0.0).then_some(mu);
    let report = degradation_report(&squeezing, chemical_potential);

    let energies = response.grid().energies();
    let rows = (0..energies.len())
        .map(|i| {
            let chi = response.chi()[i];
            let n = response.n()[i];
            let mut row = SpectrumRow {
                energy_ev: energies[i],
                chi_re: chi.re,
                chi_im: chi.im,
                n_re: n.re,
                n_im: n.im,
                t_abs2: None,
                r_abs2: None,
                b: None,
                i_over_k: None,
                s_at_phase: None,
                s_min: None,
                s_max: None,
                flag: RowFlag::Lasing,
            };
            if let TransferSample::Ok(coeff) = transfer.samples()[i] {
                let em = emission.samples()[i].expect("emission defined where transfer is");
                let sq = squeezing.samples()[i].expect("squeezing defined where transfer is");
                row.t_abs2 = Some(coeff.transmittance());
                row.r_abs2 = Some(coeff.reflectance());
                row.b = em.occupation;
                row.i_over_k = Some(em.intensity);
                row.s_at_phase = Some(sq.at_phase);
                row.s_min = Some(sq.min);
                row.s_max = Some(sq.max);
                row.flag = if em.regularized {
                    RowFlag::CrossoverRegularized
                } else {
                    RowFlag::Ok
                };
            }
            row
        })
        .collect();

    let meta = TableMeta {
        squeeze_magnitude: input.magnitude(),
        input_min: input.input_min(),
        input_max: input.input_max(),
        chemical_potential,
        resonance_ev: match &config.medium {
            Medium::Lorentz(m) => Some(m.resonance_ev),
            Medium::Table { .. } => None,
        },
    };
    let table = SpectrumTable { rows, meta, report };
    Ok(PipelineOutput {
        response,
        transfer,
        squeezing,
        table,
    })
}
