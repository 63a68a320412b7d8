//! Photon-energy grids and the per-sample evaluation strategy.

use rayon::prelude::*;
use thiserror::Error;

use crate::constants;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("grid needs at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("grid energy {energy} eV at index {index} is not positive and finite")]
    NonPositive { index: usize, energy: f64 },
    #[error("grid energies are not strictly increasing at index {index}")]
    NotIncreasing { index: usize },
    #[error("grid bounds must satisfy 0 < e_min < e_max, got [{min}, {max}]")]
    InvalidBounds { min: f64, max: f64 },
}

/// Ordered photon-energy samples (eV) over which all spectra are evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    energies: Vec<f64>,
}

impl FrequencyGrid {
    pub fn new(energies: Vec<f64>) -> Result<Self, GridError> {
        if energies.len() < 2 {
            return Err(GridError::TooFewSamples(energies.len()));
        }
        for (index, &energy) in energies.iter().enumerate() {
            if !(energy.is_finite() && energy > 0.0) {
                return Err(GridError::NonPositive { index, energy });
            }
        }
        if let Some(index) = energies.windows(2).position(|w| w[1] <= w[0]) {
            return Err(GridError::NotIncreasing { index: index + 1 });
        }
        Ok(Self { energies })
    }

    /// `count` evenly spaced energies from `min` to `max`, both included.
    pub fn linspace(min: f64, max: f64, count: usize) -> Result<Self, GridError> {
        if !(min.is_finite() && max.is_finite() && min > 0.0 && min < max) {
            return Err(GridError::InvalidBounds { min, max });
        }
        if count < 2 {
            return Err(GridError::TooFewSamples(count));
        }
        let step = (max - min) / (count - 1) as f64;
        let mut energies: Vec<f64> = (0..count).map(|i| min + step * i as f64).collect();
        energies[count - 1] = max;
        Self::new(energies)
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn energy(&self, index: usize) -> f64 {
        self.energies[index]
    }

    pub fn first(&self) -> f64 {
        self.energies[0]
    }

    pub fn last(&self) -> f64 {
        self.energies[self.energies.len() - 1]
    }

    /// Angular frequency ω = E/ħ of sample `index`, rad/s.
    pub fn omega(&self, index: usize) -> f64 {
        constants::angular_frequency(self.energies[index])
    }

    pub fn contains(&self, energy: f64) -> bool {
        energy >= self.first() && energy <= self.last()
    }

    /// Largest spacing between adjacent samples.
    pub fn max_step(&self) -> f64 {
        self.energies
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }

    /// Index of the sample closest to `energy`.
    pub fn nearest_index(&self, energy: f64) -> usize {
        let upper = self.energies.partition_point(|&e| e < energy);
        if upper == 0 {
            return 0;
        }
        if upper == self.energies.len() {
            return upper - 1;
        }
        if energy - self.energies[upper - 1] <= self.energies[upper] - energy {
            upper - 1
        } else {
            upper
        }
    }
}

/// How independent per-sample work is scheduled.
///
/// Both strategies produce bit-identical results: each sample is a pure
/// function of its inputs and results are merged in grid order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    pub(crate) fn map_indexed<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Execution::Sequential => (0..len).map(f).collect(),
            Execution::Parallel => (0..len).into_par_iter().map(f).collect(),
        }
    }
}
