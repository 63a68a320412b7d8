//! Normal-incidence optics of a homogeneous slab in vacuum.
//!
//! A slab of thickness L and complex index n, vacuum on both sides. With the
//! single-interface factor r₀ = (1 − n)/(1 + n) and one-pass phase
//! φ = ωnL/c, the internal reflectivity is r = r₀ e^{iφ} and
//!
//! ```text
//! 𝒯 = 4n / [(1 + n)² (1 − r²)] · e^{iω(n−1)L/c}
//! R = r₀ (1 − e^{2iφ}) / (1 − r₀² e^{2iφ})
//! ```
//!
//! 𝒯 is referenced to free propagation over L. Both amplitudes diverge when
//! 1 − r² → 0, the self-oscillation (lasing) threshold of an amplifying slab.

use num_complex::Complex64;
use thiserror::Error;

use crate::constants::SPEED_OF_LIGHT;
use crate::dielectric::DielectricResponse;
use crate::grid::{Execution, FrequencyGrid};

/// Default guard on |1 − r²|.
pub const DEFAULT_LASING_GUARD: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SlabError {
    #[error("slab thickness must be positive and finite, got {0} m")]
    InvalidThickness(f64),
    #[error("lasing threshold: |1 − r²| = {margin:e} below guard {guard:e}")]
    LasingThreshold { margin: f64, guard: f64 },
    #[error("multiple-reflection series diverges: |r₀² e^(2iφ)| = {ratio} ≥ 1")]
    NonConvergent { ratio: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlabGeometry {
    thickness_m: f64,
}

impl SlabGeometry {
    pub fn new(thickness_m: f64) -> Result<Self, SlabError> {
        if !(thickness_m.is_finite() && thickness_m > 0.0) {
            return Err(SlabError::InvalidThickness(thickness_m));
        }
        Ok(Self { thickness_m })
    }

    pub fn from_micrometres(thickness_um: f64) -> Result<Self, SlabError> {
        Self::new(thickness_um * 1e-6)
    }

    pub fn thickness(&self) -> f64 {
        self.thickness_m
    }
}

fn fresnel_factor(n: Complex64) -> Complex64 {
    (1.0 - n) / (1.0 + n)
}

fn one_pass_phase(n: Complex64, omega: f64, length: f64) -> Complex64 {
    n * (omega * length / SPEED_OF_LIGHT)
}

/// r = [(1 − n)/(1 + n)] e^{iωnL/c}.
pub fn internal_reflectivity(n: Complex64, omega: f64, length: f64) -> Complex64 {
    fresnel_factor(n) * (Complex64::i() * one_pass_phase(n, omega, length)).exp()
}

/// |1 − r²|, the distance from self-oscillation.
pub fn lasing_margin(n: Complex64, omega: f64, length: f64) -> f64 {
    let r = internal_reflectivity(n, omega, length);
    (1.0 - r * r).norm()
}

fn guard_check(n: Complex64, omega: f64, length: f64, guard: f64) -> Result<Complex64, SlabError> {
    let r = internal_reflectivity(n, omega, length);
    let denom = 1.0 - r * r;
    let margin = denom.norm();
    if margin < guard {
        return Err(SlabError::LasingThreshold { margin, guard });
    }
    Ok(denom)
}

/// Amplitude transmission 𝒯, referenced to vacuum propagation over the slab.
pub fn transmission(
    n: Complex64,
    omega: f64,
    length: f64,
    guard: f64,
) -> Result<Complex64, SlabError> {
    let denom = guard_check(n, omega, length, guard)?;
    let one_plus = 1.0 + n;
    let excess_phase = Complex64::i() * (n - 1.0) * (omega * length / SPEED_OF_LIGHT);
    Ok(4.0 * n / (one_plus * one_plus * denom) * excess_phase.exp())
}

/// Amplitude reflection R seen from the incidence side.
pub fn reflection(
    n: Complex64,
    omega: f64,
    length: f64,
    guard: f64,
) -> Result<Complex64, SlabError> {
    guard_check(n, omega, length, guard)?;
    let r0 = fresnel_factor(n);
    let round_trip = (2.0 * Complex64::i() * one_pass_phase(n, omega, length)).exp();
    Ok(r0 * (1.0 - round_trip) / (1.0 - r0 * r0 * round_trip))
}

/// Ray-by-ray sum of the slab's partial waves, `bounces` internal round trips
/// beyond the direct pass.
///
/// Kept independent of the closed forms: Fresnel factors t₀ = 2/(1+n),
/// t₀′ = 2n/(1+n), r₀′ = (n−1)/(n+1), explicit summation of the series.
/// Returns (𝒯, R) with 𝒯 referenced to free propagation e^{iωL/c}.
pub fn multiple_reflection_oracle(
    n: Complex64,
    omega: f64,
    length: f64,
    bounces: usize,
) -> Result<(Complex64, Complex64), SlabError> {
    let t_in = 2.0 / (1.0 + n);
    let t_out = 2.0 * n / (1.0 + n);
    let r_front = (1.0 - n) / (1.0 + n);
    let r_inside = (n - 1.0) / (n + 1.0);
    let phase = one_pass_phase(n, omega, length);
    let pass = (Complex64::i() * phase).exp();
    let ratio = r_inside * r_inside * pass * pass;
    if ratio.norm() >= 1.0 {
        return Err(SlabError::NonConvergent {
            ratio: ratio.norm(),
        });
    }
    let mut term = Complex64::new(1.0, 0.0);
    let mut series = Complex64::new(0.0, 0.0);
    for _ in 0..=bounces {
        series += term;
        term *= ratio;
    }
    let free = (Complex64::i() * (omega * length / SPEED_OF_LIGHT)).exp();
    let t = t_in * t_out * pass * series / free;
    let r = r_front + t_in * t_out * r_inside * pass * pass * series;
    Ok((t, r))
}

/// Transfer coefficients at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferCoefficients {
    pub internal_reflectivity: Complex64,
    pub transmission: Complex64,
    pub reflection: Complex64,
    /// |1 − r²|
    pub lasing_margin: f64,
}

impl TransferCoefficients {
    pub fn compute(n: Complex64, omega: f64, length: f64, guard: f64) -> Result<Self, SlabError> {
        Ok(Self {
            internal_reflectivity: internal_reflectivity(n, omega, length),
            transmission: transmission(n, omega, length, guard)?,
            reflection: reflection(n, omega, length, guard)?,
            lasing_margin: lasing_margin(n, omega, length),
        })
    }

    /// |𝒯|²
    pub fn transmittance(&self) -> f64 {
        self.transmission.norm_sqr()
    }

    /// |R|²
    pub fn reflectance(&self) -> f64 {
        self.reflection.norm_sqr()
    }

    /// 1 − |𝒯|² − |R|²: positive for an absorbing slab, negative for an amplifying one.
    pub fn loss(&self) -> f64 {
        1.0 - self.transmittance() - self.reflectance()
    }
}

/// Outcome of the transfer calculation at one grid sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TransferSample {
    Ok(TransferCoefficients),
    Lasing { margin: f64 },
}

impl TransferSample {
    pub fn coefficients(&self) -> Option<&TransferCoefficients> {
        match self {
            TransferSample::Ok(c) => Some(c),
            TransferSample::Lasing { .. } => None,
        }
    }

    pub fn is_lasing(&self) -> bool {
        matches!(self, TransferSample::Lasing { .. })
    }
}

/// Per-sample slab transfer over a grid. Samples at or beyond the lasing
/// guard are kept as [`TransferSample::Lasing`] instead of failing the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SlabTransfer {
    grid: FrequencyGrid,
    geometry: SlabGeometry,
    samples: Vec<TransferSample>,
}

impl SlabTransfer {
    pub fn compute(
        response: &DielectricResponse,
        geometry: SlabGeometry,
        guard: f64,
        execution: Execution,
    ) -> Self {
        let grid = response.grid();
        let n = response.n();
        let length = geometry.thickness();
        let samples = execution.map_indexed(grid.len(), |i| {
            match TransferCoefficients::compute(n[i], grid.omega(i), length, guard) {
                Ok(c) => TransferSample::Ok(c),
                Err(SlabError::LasingThreshold { margin, .. }) => TransferSample::Lasing { margin },
                Err(e) => unreachable!("transfer coefficients only fail at the lasing guard: {e}"),
            }
        });
        Self {
            grid: grid.clone(),
            geometry,
            samples,
        }
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn geometry(&self) -> SlabGeometry {
        self.geometry
    }

    pub fn samples(&self) -> &[TransferSample] {
        &self.samples
    }

    pub fn get(&self, index: usize) -> Option<&TransferCoefficients> {
        self.samples[index].coefficients()
    }

    /// Energy of the first sample past the lasing guard, if any.
    pub fn first_lasing_energy(&self) -> Option<f64> {
        self.samples
            .iter()
            .position(TransferSample::is_lasing)
            .map(|i| self.grid.energy(i))
    }

    pub fn all_lasing(&self) -> bool {
        self.samples.iter().all(TransferSample::is_lasing)
    }
}

/// Transmission maxima: strict local maxima of |𝒯|² on the grid, refined by a
/// parabola through ln|𝒯|² at the three samples around each maximum.
pub fn find_resonances(transfer: &SlabTransfer) -> Vec<f64> {
    let energies = transfer.grid().energies();
    let log_t: Vec<Option<f64>> = transfer
        .samples()
        .iter()
        .map(|s| s.coefficients().map(|c| c.transmittance().ln()))
        .collect();
    let mut peaks = Vec::new();
    for k in 1..energies.len().saturating_sub(1) {
        let (Some(y0), Some(y1), Some(y2)) = (log_t[k - 1], log_t[k], log_t[k + 1]) else {
            continue;
        };
        if !(y1 > y0 && y1 > y2) {
            continue;
        }
        peaks.push(parabola_vertex(
            (energies[k - 1], y0),
            (energies[k], y1),
            (energies[k + 1], y2),
        ));
    }
    peaks
}

fn parabola_vertex((x0, y0): (f64, f64), (x1, y1): (f64, f64), (x2, y2): (f64, f64)) -> f64 {
    let d0 = (y1 - y0) / (x1 - x0);
    let d1 = (y2 - y1) / (x2 - x1);
    let curvature = (d1 - d0) / (x2 - x0);
    if curvature == 0.0 {
        return x1;
    }
    let vertex = 0.5 * (x0 + x1) - d0 / (2.0 * curvature);
    vertex.clamp(x0, x2)
}

/// Fabry–Perot order of a transmission maximum: n′ωL/(πc), an integer s on
/// resonance (round-trip phase 2n′ωL/c = 2πs).
pub fn fabry_perot_order(n_re: f64, omega: f64, length: f64) -> f64 {
    n_re * omega * length / (std::f64::consts::PI * SPEED_OF_LIGHT)
}
