//! Physical constants (CODATA 2018), shared by every module.
//!
//! Energies are carried in eV. Lengths are in metres.

/// Reduced Planck constant, eV·s.
pub const HBAR_EV_S: f64 = 6.582119569e-16;

/// Reduced Planck constant, J·s.
pub const HBAR_J_S: f64 = 1.054571817e-34;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 2.99792458e8;

/// Boltzmann constant, eV/K.
pub const BOLTZMANN_EV_K: f64 = 8.617333262e-5;

/// Vacuum permittivity, F/m.
pub const VACUUM_PERMITTIVITY: f64 = 8.8541878128e-12;

/// Angular frequency (rad/s) of a photon of the given energy (eV).
///
/// This is the only place where ω = E/ħ is evaluated.
#[inline]
pub fn angular_frequency(energy_ev: f64) -> f64 {
    energy_ev / HBAR_EV_S
}

/// Vacuum wavenumber ω/c (1/m) of a photon of the given energy (eV).
#[inline]
pub fn vacuum_wavenumber(energy_ev: f64) -> f64 {
    angular_frequency(energy_ev) / SPEED_OF_LIGHT
}

/// Spectral prefactor K = ħω₀/(2πε₀c) in SI units, for a carrier energy in eV.
///
/// Every spectrum produced by this crate is divided by this value.
pub fn vacuum_noise_scale(carrier_ev: f64) -> f64 {
    HBAR_J_S * angular_frequency(carrier_ev)
        / (2.0 * std::f64::consts::PI * VACUUM_PERMITTIVITY * SPEED_OF_LIGHT)
}
