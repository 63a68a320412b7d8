//! Incoherent noise emission of the slab.
//!
//! In quasi-equilibrium the occupation of the slab–radiation excitations is a
//! Bose function with chemical potential μ,
//! b(ω) = 1/(exp[β(ħω − μ)] − 1), which is negative below μ. The medium
//! absorbs (χ″ > 0) above μ and amplifies (χ″ < 0) below it. The emitted
//! intensity, in units of K = ħω₀/(2πε₀c), is taken as
//!
//! ```text
//! I(ω)/K = [1 − |𝒯(ω)|² − |R(ω)|²] · b(ω)
//! ```
//!
//! i.e. the emissivity equals the slab's total loss. Both factors change sign
//! at ħω = μ, so I stays positive; exactly at the crossover the product is
//! replaced by its limit, the slope of the loss divided by β.

use num_complex::Complex64;
use thiserror::Error;

use crate::constants::{BOLTZMANN_EV_K, HBAR_J_S, SPEED_OF_LIGHT, VACUUM_PERMITTIVITY};
use crate::dielectric::DielectricResponse;
use crate::grid::FrequencyGrid;
use crate::slab::SlabTransfer;

/// Default half-width of the regularized window in units of β(ħω − μ).
pub const DEFAULT_CROSSOVER_WINDOW: f64 = 1e-6;

/// |χ″| below which quasiparticle operators are undefined.
pub const TRANSPARENCY_EPS: f64 = 1e-15;

/// |1 − |𝒯|² − |R|²| treated as rounding noise when its sign disagrees with χ″.
const LOSS_ROUNDING: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EmissionError {
    #[error("invalid emission state: {0}")]
    InvalidState(String),
    #[error("Bose occupation is singular at the crossover ħω = μ = {energy} eV")]
    CrossoverSingularity { energy: f64 },
    #[error("lasing threshold reached at {energy} eV; emission undefined")]
    LasingThreshold { energy: f64 },
    #[error("transfer and dielectric response are on different grids")]
    InconsistentGrids,
    #[error("χ″ = {chi_im:e} at {energy} eV has the wrong sign for ħω − μ = {detuning:e} eV; the medium is not in quasi-equilibrium with μ")]
    OccupationSignMismatch {
        energy: f64,
        chi_im: f64,
        detuning: f64,
    },
    #[error("slab loss {loss:e} at {energy} eV has the opposite sign of χ″ = {chi_im:e}")]
    LossSignMismatch { energy: f64, loss: f64, chi_im: f64 },
    #[error("crossover at {energy} eV cannot be regularized: {reason}")]
    CrossoverUnresolved { energy: f64, reason: String },
    #[error("medium is transparent (|χ″| = {chi_im:e}); quasiparticle normalization diverges")]
    TransparentMedium { chi_im: f64 },
}

/// Temperature and chemical potential of the excited medium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmissionState {
    temperature_k: f64,
    chemical_potential_ev: f64,
}

impl EmissionState {
    pub fn new(temperature_k: f64, chemical_potential_ev: f64) -> Result<Self, EmissionError> {
        if !(temperature_k.is_finite() && temperature_k > 0.0) {
            return Err(EmissionError::InvalidState(format!(
                "temperature must be > 0 K, got {temperature_k}"
            )));
        }
        if !(chemical_potential_ev.is_finite() && chemical_potential_ev >= 0.0) {
            return Err(EmissionError::InvalidState(format!(
                "chemical potential must be ≥ 0 eV, got {chemical_potential_ev}"
            )));
        }
        Ok(Self {
            temperature_k,
            chemical_potential_ev,
        })
    }

    pub fn temperature(&self) -> f64 {
        self.temperature_k
    }

    pub fn chemical_potential(&self) -> f64 {
        self.chemical_potential_ev
    }

    /// β = 1/(k_B T), 1/eV.
    pub fn beta(&self) -> f64 {
        1.0 / (BOLTZMANN_EV_K * self.temperature_k)
    }

    /// β(ħω − μ)
    pub fn reduced_detuning(&self, energy_ev: f64) -> f64 {
        self.beta() * (energy_ev - self.chemical_potential_ev)
    }
}

/// b = 1/(e^{β(E−μ)} − 1), evaluated through expm1.
pub fn bose_occupation(state: &EmissionState, energy_ev: f64) -> Result<f64, EmissionError> {
    let x = state.reduced_detuning(energy_ev);
    if x == 0.0 {
        return Err(EmissionError::CrossoverSingularity { energy: energy_ev });
    }
    Ok(1.0 / x.exp_m1())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmissionSample {
    /// b(ω); `None` only when ħω = μ exactly.
    pub occupation: Option<f64>,
    /// I(ω)/K
    pub intensity: f64,
    /// Whether the crossover expansion replaced the direct product.
    pub regularized: bool,
}

/// Occupation and emitted intensity over a grid. Samples the slab transfer
/// flagged as lasing carry no emission.
#[derive(Debug, Clone, PartialEq)]
pub struct EmissionSpectrum {
    grid: FrequencyGrid,
    state: EmissionState,
    samples: Vec<Option<EmissionSample>>,
}

impl EmissionSpectrum {
    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn state(&self) -> EmissionState {
        self.state
    }

    pub fn samples(&self) -> &[Option<EmissionSample>] {
        &self.samples
    }

    pub fn intensity(&self, index: usize) -> Option<f64> {
        self.samples[index].map(|s| s.intensity)
    }
}

/// Emission spectrum; fails if any sample is at the lasing threshold.
pub fn emission_intensity(
    state: &EmissionState,
    transfer: &SlabTransfer,
    response: &DielectricResponse,
    window: f64,
) -> Result<EmissionSpectrum, EmissionError> {
    if let Some(energy) = transfer.first_lasing_energy() {
        return Err(EmissionError::LasingThreshold { energy });
    }
    emission_intensity_partial(state, transfer, response, window)
}

/// Emission spectrum that skips lasing samples (`None`) instead of failing.
pub fn emission_intensity_partial(
    state: &EmissionState,
    transfer: &SlabTransfer,
    response: &DielectricResponse,
    window: f64,
) -> Result<EmissionSpectrum, EmissionError> {
    let grid = transfer.grid();
    if grid != response.grid() {
        return Err(EmissionError::InconsistentGrids);
    }
    let energies = grid.energies();
    let chi = response.chi();
    let loss: Vec<Option<f64>> = (0..grid.len())
        .map(|i| {
            transfer
                .get(i)
                .map(|c| if chi[i].im == 0.0 { 0.0 } else { c.loss() })
        })
        .collect();
    let beta = state.beta();

    let mut samples = Vec::with_capacity(grid.len());
    for (i, &energy) in energies.iter().enumerate() {
        let Some(loss_here) = loss[i] else {
            samples.push(None);
            continue;
        };
        let x = state.reduced_detuning(energy);
        let occupation = (x != 0.0).then(|| 1.0 / x.exp_m1());

        if x.abs() < window {
            let slope = loss_slope(energies, &loss, i)?;
            let intensity = slope / beta;
            if !(intensity.is_finite() && intensity >= 0.0) {
                return Err(EmissionError::CrossoverUnresolved {
                    energy,
                    reason: format!("loss slope {slope:e} per eV is not positive"),
                });
            }
            samples.push(Some(EmissionSample {
                occupation,
                intensity,
                regularized: true,
            }));
            continue;
        }

        let b = occupation.expect("x is nonzero outside the window");
        let chi_im = chi[i].im;
        let intensity = if chi_im == 0.0 {
            0.0
        } else if chi_im.signum() != x.signum() {
            return Err(EmissionError::OccupationSignMismatch {
                energy,
                chi_im,
                detuning: energy - state.chemical_potential(),
            });
        } else if loss_here != 0.0 && loss_here.signum() != chi_im.signum() {
            if loss_here.abs() > LOSS_ROUNDING {
                return Err(EmissionError::LossSignMismatch {
                    energy,
                    loss: loss_here,
                    chi_im,
                });
            }
            0.0
        } else {
            loss_here * b
        };
        samples.push(Some(EmissionSample {
            occupation,
            intensity,
            regularized: false,
        }));
    }

    Ok(EmissionSpectrum {
        grid: grid.clone(),
        state: *state,
        samples,
    })
}

/// d(loss)/dE at sample `i` from its grid neighbours: centered when both are
/// available, one-sided otherwise.
fn loss_slope(energies: &[f64], loss: &[Option<f64>], i: usize) -> Result<f64, EmissionError> {
    let at = |j: usize| loss.get(j).copied().flatten().map(|l| (energies[j], l));
    let below = i.checked_sub(1).and_then(at);
    let above = at(i + 1);
    let here = at(i).expect("caller checked sample i");
    let ((e0, l0), (e1, l1)) = match (below, above) {
        (Some(b), Some(a)) => (b, a),
        (Some(b), None) => (b, here),
        (None, Some(a)) => (here, a),
        (None, None) => {
            return Err(EmissionError::CrossoverUnresolved {
                energy: energies[i],
                reason: "no neighbouring sample to difference".into(),
            })
        }
    };
    Ok((l1 - l0) / (e1 - e0))
}

/// Spatial parity of the quasiparticle mode function e^{inωx/c} ± e^{−inωx/c}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

/// sinh(y)/y, continuous through y = 0.
fn sinhc(y: f64) -> f64 {
    if y.abs() < 1e-4 {
        let y2 = y * y;
        1.0 + y2 / 6.0 + y2 * y2 / 120.0
    } else {
        y.sinh() / y
    }
}

/// ∫_{−L/2}^{L/2} |e^{inωx/c} ± e^{−inωx/c}|² dx in closed form:
/// (2c/(n″ω)) sinh(n″ωL/c) ± (2c/(n′ω)) sin(n′ωL/c), with the first term
/// taking its limit 2L as n″ → 0. Requires Re n > 0.
pub fn mode_overlap_integral(n: Complex64, omega: f64, length: f64, parity: Parity) -> f64 {
    let k_l = omega * length / SPEED_OF_LIGHT;
    let attenuation = n.im * k_l;
    let oscillation = n.re * k_l;
    let cosh_part = 2.0 * length * sinhc(attenuation);
    let cos_part = 2.0 * length * oscillation.sin() / oscillation;
    cosh_part + parity.sign() * cos_part
}

/// Normalization constants of the two quasiparticle operators at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleNormalization {
    pub plus: f64,
    pub minus: f64,
    /// Sign of [ĉ_±, ĉ_±†]: +1 absorbing, −1 amplifying.
    pub commutator_sign: f64,
}

impl SampleNormalization {
    pub fn get(&self, parity: Parity) -> f64 {
        match parity {
            Parity::Even => self.plus,
            Parity::Odd => self.minus,
        }
    }
}

/// 𝒩_± = [2ε₀ħω²|χ″| · ∫|e^{inωx/c} ± e^{−inωx/c}|² dx]^{−1/2} (SI units).
///
/// With this choice [ĉ_±, ĉ_±†] = sign(χ″); the sign is reported separately.
pub fn quasiparticle_normalization(
    n: Complex64,
    chi_im: f64,
    omega: f64,
    length: f64,
) -> Result<SampleNormalization, EmissionError> {
    if chi_im.is_nan() || chi_im.abs() < TRANSPARENCY_EPS {
        return Err(EmissionError::TransparentMedium { chi_im });
    }
    let scale = 2.0 * VACUUM_PERMITTIVITY * HBAR_J_S * omega * omega * chi_im.abs();
    let norm = |parity| (scale * mode_overlap_integral(n, omega, length, parity)).powf(-0.5);
    Ok(SampleNormalization {
        plus: norm(Parity::Even),
        minus: norm(Parity::Odd),
        commutator_sign: chi_im.signum(),
    })
}

/// Quasiparticle normalization over a grid; `None` where the medium is transparent.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeNormalization {
    grid: FrequencyGrid,
    samples: Vec<Option<SampleNormalization>>,
}

impl ModeNormalization {
    pub fn compute(response: &DielectricResponse, length: f64) -> Self {
        let grid = response.grid();
        let samples = (0..grid.len())
            .map(|i| {
                quasiparticle_normalization(
                    response.n()[i],
                    response.chi()[i].im,
                    grid.omega(i),
                    length,
                )
                .ok()
            })
            .collect();
        Self {
            grid: grid.clone(),
            samples,
        }
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn samples(&self) -> &[Option<SampleNormalization>] {
        &self.samples
    }
}
