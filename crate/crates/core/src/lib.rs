//! Squeezed-vacuum propagation through a dispersive slab.
//!
//! The crate follows one pipeline, from the medium to the detected noise:
//!
//! 1. [`dielectric`]: complex susceptibility χ(ω), from a Lorentz oscillator or
//!    a tabulated spectrum, and the refractive index n = √(1 + χ) on a
//!    continuously tracked branch.
//! 2. [`slab`]: internal reflectivity, amplitude transmission 𝒯 and reflection
//!    R of a slab of thickness L at normal incidence, Fabry–Perot resonances,
//!    and a multiple-reflection series used as an independent check.
//! 3. [`emission`]: the quasi-equilibrium Bose occupation b(ω), the emitted
//!    noise intensity I(ω) (regular across the absorption/gain crossover), and
//!    the quasiparticle mode normalization.
//! 4. [`squeezing`]: the normally ordered squeezing spectrum of a squeezed
//!    vacuum after the slab, its phase envelopes and a degradation summary.
//!
//! [`config`], [`pipeline`] and [`output`] wire these together for the
//! `slabsqueeze` command line tool.
//!
//! All spectra are reported in vacuum-normalized units, i.e. divided by
//! K = ħω₀/(2πε₀c); see [`constants::vacuum_noise_scale`].

pub mod config;
pub mod constants;
pub mod dielectric;
pub mod emission;
pub mod grid;
pub mod output;
pub mod pipeline;
pub mod slab;
pub mod squeezing;

pub use config::{load_config, ConfigError, RunConfig};
pub use dielectric::{DielectricError, DielectricResponse, LorentzModel, TabulatedSusceptibility};
pub use emission::{EmissionError, EmissionSpectrum, EmissionState};
pub use grid::{Execution, FrequencyGrid, GridError};
pub use pipeline::{run_pipeline, PipelineError, SpectrumTable};
pub use slab::{SlabError, SlabGeometry, SlabTransfer, TransferCoefficients};
pub use squeezing::{SqueezeError, SqueezeInput, SqueezingResult};
