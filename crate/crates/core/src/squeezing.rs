//! Normally ordered squeezing spectrum behind the slab.
//!
//! A squeezed vacuum ξ = |ξ|e^{iφ_ξ} centred on the carrier ω₀ enters from
//! the left, vacuum from the right, and the detector sits just right of the
//! slab. Writing 𝒯 = |𝒯|e^{iθ} and Φ = 2ω₀L/c + φ_ξ + 2θ, the spectrum in
//! units of K = ħω₀/(2πε₀c) is
//!
//! ```text
//! S/K = I/K + |𝒯|² [sinh²|ξ| + sinh|ξ| cosh|ξ| cos Φ]
//! ```
//!
//! so the phase envelopes are I/K + |𝒯|²(e^{±2|ξ|} − 1)/2. The slab-free
//! input reference is the same expression with 𝒯 = 1 and I = 0. Negative
//! values mean quadrature noise below the vacuum level.

use num_complex::Complex64;
use thiserror::Error;

use crate::constants::{angular_frequency, SPEED_OF_LIGHT};
use crate::emission::EmissionSpectrum;
use crate::grid::FrequencyGrid;
use crate::slab::SlabTransfer;

/// |𝒯| below which the squeeze phase has no effect.
pub const ZERO_TRANSMISSION_EPS: f64 = 1e-15;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SqueezeError {
    #[error("invalid squeeze input: {0}")]
    InvalidInput(String),
    #[error("carrier {carrier} eV lies outside the grid [{min}, {max}] eV")]
    CarrierOutsideGrid { carrier: f64, min: f64, max: f64 },
    #[error("transfer and emission spectra are on different grids")]
    InconsistentGrids,
    #[error("lasing threshold reached at {energy} eV; squeezing spectrum undefined")]
    LasingThreshold { energy: f64 },
    #[error("transmission vanishes at {energy} eV; every squeeze phase gives the same noise")]
    ZeroTransmission { energy: f64 },
}

/// Squeezed-vacuum input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeInput {
    magnitude: f64,
    phase: f64,
    carrier_ev: f64,
}

impl SqueezeInput {
    /// `phase` is reduced to [0, 2π).
    pub fn new(magnitude: f64, phase: f64, carrier_ev: f64) -> Result<Self, SqueezeError> {
        if !(magnitude.is_finite() && magnitude >= 0.0) {
            return Err(SqueezeError::InvalidInput(format!(
                "|ξ| must be finite and ≥ 0, got {magnitude}"
            )));
        }
        if !phase.is_finite() {
            return Err(SqueezeError::InvalidInput(format!(
                "φ_ξ must be finite, got {phase}"
            )));
        }
        if !(carrier_ev.is_finite() && carrier_ev > 0.0) {
            return Err(SqueezeError::InvalidInput(format!(
                "carrier energy must be > 0, got {carrier_ev}"
            )));
        }
        Ok(Self {
            magnitude,
            phase: phase.rem_euclid(std::f64::consts::TAU),
            carrier_ev,
        })
    }

    pub fn magnitude(&self) -> f64 {
        self.magnitude
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn carrier(&self) -> f64 {
        self.carrier_ev
    }

    pub fn with_phase(self, phase: f64) -> Self {
        Self {
            phase: phase.rem_euclid(std::f64::consts::TAU),
            ..self
        }
    }

    /// Carrier round-trip phase 2ω₀L/c.
    pub fn carrier_phase(&self, length: f64) -> f64 {
        2.0 * angular_frequency(self.carrier_ev) * length / SPEED_OF_LIGHT
    }

    /// Lower input envelope, −(1 − e^{−2|ξ|})/2.
    pub fn input_min(&self) -> f64 {
        0.5 * (-2.0 * self.magnitude).exp_m1()
    }

    /// Upper input envelope, (e^{2|ξ|} − 1)/2.
    pub fn input_max(&self) -> f64 {
        0.5 * (2.0 * self.magnitude).exp_m1()
    }
}

/// S/K at an arbitrary squeeze phase for one sample with transmission `t`.
pub fn spectrum_at_phase(
    input: &SqueezeInput,
    phase: f64,
    t: Complex64,
    i_over_k: f64,
    length: f64,
) -> f64 {
    let x = input.magnitude;
    let sinh = x.sinh();
    let angle = input.carrier_phase(length) + phase + 2.0 * t.arg();
    i_over_k + t.norm_sqr() * (sinh * sinh + sinh * x.cosh() * angle.cos())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeSample {
    /// S/K at the configured φ_ξ.
    pub at_phase: f64,
    pub min: f64,
    pub max: f64,
    /// I/K
    pub emission: f64,
}

pub fn squeeze_sample(
    input: &SqueezeInput,
    t: Complex64,
    i_over_k: f64,
    length: f64,
) -> SqueezeSample {
    let t2 = t.norm_sqr();
    SqueezeSample {
        at_phase: spectrum_at_phase(input, input.phase, t, i_over_k, length),
        min: i_over_k + t2 * input.input_min(),
        max: i_over_k + t2 * input.input_max(),
        emission: i_over_k,
    }
}

/// Squeeze phase that minimizes S at a sample: φ* = π − 2ω₀L/c − 2θ (mod 2π).
pub fn minimizing_phase(
    input: &SqueezeInput,
    t: Complex64,
    length: f64,
    energy: f64,
) -> Result<f64, SqueezeError> {
    if t.norm() < ZERO_TRANSMISSION_EPS {
        return Err(SqueezeError::ZeroTransmission { energy });
    }
    Ok(
        (std::f64::consts::PI - input.carrier_phase(length) - 2.0 * t.arg())
            .rem_euclid(std::f64::consts::TAU),
    )
}

/// [`minimizing_phase`] at grid sample `index` of a slab transfer.
pub fn envelope_phase(
    input: &SqueezeInput,
    transfer: &SlabTransfer,
    index: usize,
) -> Result<f64, SqueezeError> {
    let energy = transfer.grid().energy(index);
    let coeff = transfer
        .get(index)
        .ok_or(SqueezeError::LasingThreshold { energy })?;
    minimizing_phase(
        input,
        coeff.transmission,
        transfer.geometry().thickness(),
        energy,
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct SqueezingResult {
    grid: FrequencyGrid,
    input: SqueezeInput,
    samples: Vec<Option<SqueezeSample>>,
}

impl SqueezingResult {
    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn input(&self) -> SqueezeInput {
        self.input
    }

    pub fn samples(&self) -> &[Option<SqueezeSample>] {
        &self.samples
    }

    pub fn input_min(&self) -> f64 {
        self.input.input_min()
    }

    pub fn input_max(&self) -> f64 {
        self.input.input_max()
    }
}

/// Squeezing spectrum; fails if any sample is at the lasing threshold.
pub fn squeezing_spectrum(
    input: &SqueezeInput,
    transfer: &SlabTransfer,
    emission: &EmissionSpectrum,
) -> Result<SqueezingResult, SqueezeError> {
    if let Some(energy) = transfer.first_lasing_energy() {
        return Err(SqueezeError::LasingThreshold { energy });
    }
    squeezing_spectrum_partial(input, transfer, emission)
}

/// Squeezing spectrum that leaves lasing samples empty.
pub fn squeezing_spectrum_partial(
    input: &SqueezeInput,
    transfer: &SlabTransfer,
    emission: &EmissionSpectrum,
) -> Result<SqueezingResult, SqueezeError> {
    let grid = transfer.grid();
    if grid != emission.grid() {
        return Err(SqueezeError::InconsistentGrids);
    }
    if !grid.contains(input.carrier()) {
        return Err(SqueezeError::CarrierOutsideGrid {
            carrier: input.carrier(),
            min: grid.first(),
            max: grid.last(),
        });
    }
    let length = transfer.geometry().thickness();
    let samples = (0..grid.len())
        .map(|i| {
            let coeff = transfer.get(i)?;
            let i_over_k = emission.intensity(i)?;
            Some(squeeze_sample(input, coeff.transmission, i_over_k, length))
        })
        .collect();
    Ok(SqueezingResult {
        grid: grid.clone(),
        input: *input,
        samples,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleClass {
    /// S_min < 0
    Squeezed,
    /// S_min ≥ 0
    Classical,
}

/// Closed energy interval [start, end] of contiguous grid samples, eV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyInterval {
    pub start: f64,
    pub end: f64,
}

impl EnergyInterval {
    pub fn contains(&self, energy: f64) -> bool {
        energy >= self.start && energy <= self.end
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossoverCheck {
    pub chemical_potential: f64,
    /// Squeezed interval containing ħω = μ, if squeezing survives there.
    pub interval: Option<EnergyInterval>,
    /// The deepest squeezing lies in that interval.
    pub minimum_at_crossover: bool,
}

impl CrossoverCheck {
    /// Squeezing, where it survives, is concentrated around ħω = μ.
    pub fn clusters(&self) -> bool {
        self.interval.is_some() && self.minimum_at_crossover
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegradationReport {
    /// `None` on lasing samples.
    pub classes: Vec<Option<SampleClass>>,
    pub squeezed_intervals: Vec<EnergyInterval>,
    /// (energy, S_min) at the smallest S_min on the grid.
    pub global_minimum: Option<(f64, f64)>,
    /// Present when a chemical potential inside the grid is supplied.
    pub crossover: Option<CrossoverCheck>,
}

impl DegradationReport {
    pub fn squeezed_count(&self) -> usize {
        self.classes
            .iter()
            .filter(|c| **c == Some(SampleClass::Squeezed))
            .count()
    }
}

/// Classifies every sample and collects the surviving squeezed intervals.
///
/// With `chemical_potential` given (gain media), also checks whether the
/// squeezing that survives sits at the absorption/gain crossover.
pub fn degradation_report(
    result: &SqueezingResult,
    chemical_potential: Option<f64>,
) -> DegradationReport {
    let energies = result.grid().energies();
    let classes: Vec<Option<SampleClass>> = result
        .samples()
        .iter()
        .map(|s| {
            s.map(|s| {
                if s.min < 0.0 {
                    SampleClass::Squeezed
                } else {
                    SampleClass::Classical
                }
            })
        })
        .collect();

    let mut squeezed_intervals = Vec::new();
    let mut open: Option<usize> = None;
    for (i, class) in classes.iter().enumerate() {
        let squeezed = *class == Some(SampleClass::Squeezed);
        match (open, squeezed) {
            (None, true) => open = Some(i),
            (Some(start), false) => {
                squeezed_intervals.push(EnergyInterval {
                    start: energies[start],
                    end: energies[i - 1],
                });
                open = None;
            }
            _ => {}
        }
    }
    if let Some(start) = open {
        squeezed_intervals.push(EnergyInterval {
            start: energies[start],
            end: energies[energies.len() - 1],
        });
    }

    let global_minimum = result
        .samples()
        .iter()
        .zip(energies)
        .filter_map(|(s, &e)| s.map(|s| (e, s.min)))
        .fold(None, |best: Option<(f64, f64)>, cur| match best {
            Some(b) if b.1 <= cur.1 => Some(b),
            _ => Some(cur),
        });

    let crossover = chemical_potential
        .filter(|&mu| result.grid().contains(mu))
        .map(|mu| {
            let interval = squeezed_intervals
                .iter()
                .copied()
                .find(|iv| iv.contains(mu));
            let minimum_at_crossover = match (interval, global_minimum) {
                (Some(iv), Some((e, v))) => v < 0.0 && iv.contains(e),
                _ => false,
            };
            CrossoverCheck {
                chemical_potential: mu,
                interval,
                minimum_at_crossover,
            }
        });

    DegradationReport {
        classes,
        squeezed_intervals,
        global_minimum,
        crossover,
    }
}
