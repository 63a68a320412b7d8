//! Complex susceptibility and refractive index of the slab medium.
//!
//! χ(ω) comes either from a single Lorentz oscillator or from a tabulated
//! spectrum. The refractive index follows from n² = 1 + χ; the square-root
//! branch is tracked along the grid so that n stays continuous through gain
//! regions (χ″ < 0), where the per-point principal root may jump.

use std::io::Read;
use std::path::Path;

use num_complex::Complex64;
use thiserror::Error;

use crate::grid::FrequencyGrid;

/// |1 + χ| below which the refractive index is treated as vanishing.
pub const BRANCH_POINT_EPS: f64 = 1e-14;

#[derive(Debug, Error)]
pub enum DielectricError {
    #[error("invalid Lorentz model: {0}")]
    InvalidModel(String),
    #[error("energy {energy} eV lies outside the table span [{min}, {max}] eV")]
    OutOfRange { energy: f64, min: f64, max: f64 },
    #[error("malformed susceptibility table: {0}")]
    MalformedTable(String),
    #[error("1 + χ vanishes at {energy} eV (|1 + χ| = {modulus:e}); refractive index undefined")]
    BranchPointHit { energy: f64, modulus: f64 },
    #[error("continuous branch of n reaches Re n = {re_n} ≤ 0 at {energy} eV")]
    BackwardBranch { energy: f64, re_n: f64 },
    #[error("refractive index jumps by {jump:e} at {energy} eV (threshold {threshold:e}); refine the grid")]
    BranchJump {
        energy: f64,
        jump: f64,
        threshold: f64,
    },
    #[error("susceptibility has {got} samples for a grid of {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("reading susceptibility table {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Single Lorentz oscillator, χ(E) = χ_b + A / (E_x² − E² − iγE).
///
/// `background` (χ_b) is a real, frequency-independent offset; it defaults to
/// zero, which leaves the bare oscillator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzModel {
    /// E_x, eV.
    pub resonance_ev: f64,
    /// γ, full damping rate expressed as an energy, eV.
    pub linewidth_ev: f64,
    /// A, eV².
    pub oscillator_strength: f64,
    pub background: f64,
}

impl LorentzModel {
    pub fn new(
        resonance_ev: f64,
        linewidth_ev: f64,
        oscillator_strength: f64,
    ) -> Result<Self, DielectricError> {
        let model = Self {
            resonance_ev,
            linewidth_ev,
            oscillator_strength,
            background: 0.0,
        };
        model.validate()?;
        Ok(model)
    }

    /// Oscillator whose strength puts the peak of χ″ at `peak_chi_im`.
    ///
    /// At E = E_x the oscillator gives χ″ = A/(γE_x).
    pub fn with_peak_absorption(
        resonance_ev: f64,
        linewidth_ev: f64,
        peak_chi_im: f64,
    ) -> Result<Self, DielectricError> {
        Self::new(
            resonance_ev,
            linewidth_ev,
            peak_chi_im * linewidth_ev * resonance_ev,
        )
    }

    pub fn with_background(mut self, background: f64) -> Result<Self, DielectricError> {
        self.background = background;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), DielectricError> {
        let finite = [
            self.resonance_ev,
            self.linewidth_ev,
            self.oscillator_strength,
            self.background,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(DielectricError::InvalidModel(
                "parameters must be finite".into(),
            ));
        }
        if self.resonance_ev <= 0.0 {
            return Err(DielectricError::InvalidModel(
                "resonance energy must be > 0".into(),
            ));
        }
        if self.linewidth_ev <= 0.0 {
            return Err(DielectricError::InvalidModel(
                "linewidth must be > 0".into(),
            ));
        }
        if self.oscillator_strength < 0.0 {
            return Err(DielectricError::InvalidModel(
                "oscillator strength must be ≥ 0".into(),
            ));
        }
        Ok(())
    }

    pub fn chi(&self, energy_ev: f64) -> Complex64 {
        let denom = Complex64::new(
            self.resonance_ev * self.resonance_ev - energy_ev * energy_ev,
            -self.linewidth_ev * energy_ev,
        );
        Complex64::new(self.background, 0.0) + self.oscillator_strength / denom
    }
}

/// χ of a Lorentz oscillator on every grid sample.
pub fn lorentz_chi(model: &LorentzModel, grid: &FrequencyGrid) -> Vec<Complex64> {
    grid.energies().iter().map(|&e| model.chi(e)).collect()
}

/// Tabulated susceptibility: rows of (energy eV, χ′, χ″), energies strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedSusceptibility {
    energies: Vec<f64>,
    chi_re: Vec<f64>,
    chi_im: Vec<f64>,
}

impl TabulatedSusceptibility {
    pub fn new(rows: Vec<(f64, f64, f64)>) -> Result<Self, DielectricError> {
        if rows.len() < 2 {
            return Err(DielectricError::MalformedTable(format!(
                "need at least 2 rows, got {}",
                rows.len()
            )));
        }
        for (i, &(e, re, im)) in rows.iter().enumerate() {
            if !(e.is_finite() && re.is_finite() && im.is_finite()) {
                return Err(DielectricError::MalformedTable(format!(
                    "row {} is not finite",
                    i + 1
                )));
            }
        }
        if let Some(i) = rows.windows(2).position(|w| w[1].0 <= w[0].0) {
            return Err(DielectricError::MalformedTable(format!(
                "energies not strictly increasing at row {}",
                i + 2
            )));
        }
        let (energies, (chi_re, chi_im)) =
            rows.into_iter().map(|(e, re, im)| (e, (re, im))).unzip();
        Ok(Self {
            energies,
            chi_re,
            chi_im,
        })
    }

    /// Parses `energy_ev, chi_re, chi_im` rows. Lines starting with `#` are
    /// comments; a single leading header line naming the columns is allowed.
    pub fn from_reader<R: Read>(reader: R) -> Result<Self, DielectricError> {
        let mut csv = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(reader);
        let mut rows = Vec::new();
        for (i, record) in csv.records().enumerate() {
            let record = record.map_err(|e| DielectricError::MalformedTable(e.to_string()))?;
            if record.iter().all(str::is_empty) {
                continue;
            }
            if i == 0 && record.get(0) == Some("energy_ev") {
                continue;
            }
            if record.len() != 3 {
                return Err(DielectricError::MalformedTable(format!(
                    "line {}: expected 3 columns, found {}",
                    line_of(&record),
                    record.len()
                )));
            }
            let mut values = [0.0; 3];
            for (slot, field) in values.iter_mut().zip(record.iter()) {
                *slot = field.parse().map_err(|_| {
                    DielectricError::MalformedTable(format!(
                        "line {}: cannot parse {field:?}",
                        line_of(&record)
                    ))
                })?;
            }
            rows.push((values[0], values[1], values[2]));
        }
        Self::new(rows)
    }

    pub fn from_path(path: &Path) -> Result<Self, DielectricError> {
        let file = std::fs::File::open(path).map_err(|source| DielectricError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_reader(std::io::BufReader::new(file))
    }

    pub fn span(&self) -> (f64, f64) {
        (self.energies[0], self.energies[self.energies.len() - 1])
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    /// Component-wise linear interpolation; exact at the nodes.
    pub fn chi(&self, energy_ev: f64) -> Result<Complex64, DielectricError> {
        let (min, max) = self.span();
        if !(energy_ev >= min && energy_ev <= max) {
            return Err(DielectricError::OutOfRange {
                energy: energy_ev,
                min,
                max,
            });
        }
        let upper = self.energies.partition_point(|&e| e < energy_ev);
        if self.energies[upper] == energy_ev {
            return Ok(Complex64::new(self.chi_re[upper], self.chi_im[upper]));
        }
        let lower = upper - 1;
        let t = (energy_ev - self.energies[lower]) / (self.energies[upper] - self.energies[lower]);
        let lerp = |v: &[f64]| v[lower] + t * (v[upper] - v[lower]);
        Ok(Complex64::new(lerp(&self.chi_re), lerp(&self.chi_im)))
    }
}

fn line_of(record: &csv::StringRecord) -> u64 {
    record.position().map_or(0, |p| p.line())
}

/// χ interpolated from a table on every grid sample.
pub fn tabulated_chi(
    table: &TabulatedSusceptibility,
    grid: &FrequencyGrid,
) -> Result<Vec<Complex64>, DielectricError> {
    grid.energies().iter().map(|&e| table.chi(e)).collect()
}

/// n = √(1 + χ) along the grid.
///
/// The first sample takes the principal root. Every later sample takes
/// whichever of ±√(1 + χ) lies closest to its predecessor, so the branch
/// never flips between samples.
pub fn refractive_index(
    chi: &[Complex64],
    grid: &FrequencyGrid,
) -> Result<Vec<Complex64>, DielectricError> {
    if chi.len() != grid.len() {
        return Err(DielectricError::LengthMismatch {
            expected: grid.len(),
            got: chi.len(),
        });
    }
    let mut n = Vec::with_capacity(chi.len());
    let mut previous: Option<Complex64> = None;
    for (&c, &energy) in chi.iter().zip(grid.energies()) {
        let eps = Complex64::new(1.0, 0.0) + c;
        let modulus = eps.norm();
        if modulus < BRANCH_POINT_EPS {
            return Err(DielectricError::BranchPointHit { energy, modulus });
        }
        let root = eps.sqrt();
        let chosen = match previous {
            Some(p) if (-root - p).norm() < (root - p).norm() => -root,
            _ => root,
        };
        if chosen.re <= 0.0 {
            return Err(DielectricError::BackwardBranch {
                energy,
                re_n: chosen.re,
            });
        }
        n.push(chosen);
        previous = Some(chosen);
    }
    Ok(n)
}

/// χ(ω) and n(ω) on a common grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DielectricResponse {
    grid: FrequencyGrid,
    chi: Vec<Complex64>,
    n: Vec<Complex64>,
}

impl DielectricResponse {
    pub fn from_chi(grid: FrequencyGrid, chi: Vec<Complex64>) -> Result<Self, DielectricError> {
        let n = refractive_index(&chi, &grid)?;
        Ok(Self { grid, chi, n })
    }

    pub fn lorentz(model: &LorentzModel, grid: FrequencyGrid) -> Result<Self, DielectricError> {
        model.validate()?;
        let chi = lorentz_chi(model, &grid);
        Self::from_chi(grid, chi)
    }

    pub fn tabulated(
        table: &TabulatedSusceptibility,
        grid: FrequencyGrid,
    ) -> Result<Self, DielectricError> {
        let chi = tabulated_chi(table, &grid)?;
        Self::from_chi(grid, chi)
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn chi(&self) -> &[Complex64] {
        &self.chi
    }

    pub fn n(&self) -> &[Complex64] {
        &self.n
    }

    pub fn len(&self) -> usize {
        self.chi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chi.is_empty()
    }

    /// Largest |n(ω_{k+1}) − n(ω_k)| and the energy where it occurs.
    pub fn max_index_jump(&self) -> (f64, f64) {
        self.n
            .windows(2)
            .zip(&self.grid.energies()[1..])
            .map(|(w, &e)| ((w[1] - w[0]).norm(), e))
            .fold(
                (0.0, self.grid.first()),
                |acc, x| if x.0 > acc.0 { x } else { acc },
            )
    }

    /// Fails if n jumps by more than `threshold` between adjacent samples.
    pub fn check_continuity(&self, threshold: f64) -> Result<(), DielectricError> {
        let (jump, energy) = self.max_index_jump();
        if jump > threshold {
            return Err(DielectricError::BranchJump {
                energy,
                jump,
                threshold,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(values: &[f64]) -> FrequencyGrid {
        FrequencyGrid::new(values.to_vec()).unwrap()
    }

    #[test]
    fn lorentz_static_limit_is_real() {
        let m = LorentzModel::new(1.5, 0.01, 0.3).unwrap();
        let chi = m.chi(1e-9);
        assert!((chi.re - 0.3 / 2.25).abs() < 1e-12);
        assert!(chi.im.abs() < 1e-10);
    }

    #[test]
    fn lorentz_on_resonance_is_imaginary() {
        let m = LorentzModel::new(1.515, 2e-4, 0.5).unwrap();
        let chi = m.chi(1.515);
        assert_eq!(chi.re, 0.0);
        assert!((chi.im - 0.5 / (2e-4 * 1.515)).abs() < 1e-9);
    }

    #[test]
    fn lorentz_without_strength_is_vacuum() {
        let m = LorentzModel::new(1.515, 2e-4, 0.0).unwrap();
        let g = FrequencyGrid::linspace(0.5, 3.0, 50).unwrap();
        assert!(lorentz_chi(&m, &g)
            .iter()
            .all(|c| *c == Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn lorentz_rejects_bad_parameters() {
        assert!(LorentzModel::new(1.5, 0.0, 1.0).is_err());
        assert!(LorentzModel::new(0.0, 0.1, 1.0).is_err());
        assert!(LorentzModel::new(1.5, 0.1, -1.0).is_err());
        assert!(LorentzModel::new(f64::NAN, 0.1, 1.0).is_err());
    }

    #[test]
    fn peak_absorption_parameterization() {
        let m = LorentzModel::with_peak_absorption(1.515, 2e-4, 1.0).unwrap();
        assert!((m.chi(1.515).im - 1.0).abs() < 1e-12);
    }

    #[test]
    fn table_nodes_are_exact() {
        let t =
            TabulatedSusceptibility::new(vec![(1.0, 0.1, 0.3), (1.1, 0.7, -0.2), (1.3, 0.2, 0.9)])
                .unwrap();
        assert_eq!(t.chi(1.1).unwrap(), Complex64::new(0.7, -0.2));
        assert_eq!(t.chi(1.0).unwrap(), Complex64::new(0.1, 0.3));
        assert_eq!(t.chi(1.3).unwrap(), Complex64::new(0.2, 0.9));
    }

    #[test]
    fn table_linear_midpoint() {
        let t = TabulatedSusceptibility::new(vec![(1.0, 0.0, 1.0), (2.0, 0.0, 3.0)]).unwrap();
        assert_eq!(t.chi(1.5).unwrap(), Complex64::new(0.0, 2.0));
    }

    #[test]
    fn table_out_of_range() {
        let t = TabulatedSusceptibility::new(vec![(1.0, 0.0, 1.0), (2.0, 0.0, 3.0)]).unwrap();
        assert!(matches!(
            t.chi(0.999),
            Err(DielectricError::OutOfRange { .. })
        ));
        assert!(matches!(
            t.chi(2.001),
            Err(DielectricError::OutOfRange { .. })
        ));
        let g = grid(&[0.5, 1.5]);
        assert!(matches!(
            tabulated_chi(&t, &g),
            Err(DielectricError::OutOfRange { .. })
        ));
    }

    #[test]
    fn table_rejects_non_monotone() {
        let err = TabulatedSusceptibility::new(vec![(1.0, 0.0, 1.0), (1.0, 0.0, 3.0)]).unwrap_err();
        assert!(matches!(err, DielectricError::MalformedTable(_)));
        let text = "1.0,0,1\n0.9,0,2\n";
        assert!(matches!(
            TabulatedSusceptibility::from_reader(text.as_bytes()),
            Err(DielectricError::MalformedTable(_))
        ));
    }

    #[test]
    fn table_parses_comments_and_header() {
        let text =
            "# gain table\nenergy_ev, chi_re, chi_im\n1.40, 11.9, -0.01\n# mid\n1.50, 12.0, 0.02\n";
        let t = TabulatedSusceptibility::from_reader(text.as_bytes()).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.chi(1.4).unwrap(), Complex64::new(11.9, -0.01));
        let bad = "1.4, 11.9\n1.5, 12.0, 0.1\n";
        assert!(TabulatedSusceptibility::from_reader(bad.as_bytes()).is_err());
        let garbage = "1.4, x, 0.1\n1.5, 12.0, 0.1\n";
        assert!(TabulatedSusceptibility::from_reader(garbage.as_bytes()).is_err());
    }

    #[test]
    fn index_of_vacuum_and_perfect_square() {
        let g = grid(&[1.0, 2.0]);
        let n = refractive_index(&[Complex64::new(0.0, 0.0); 2], &g).unwrap();
        assert!(n.iter().all(|v| *v == Complex64::new(1.0, 0.0)));
        let n = refractive_index(&[Complex64::new(3.0, 0.0); 2], &g).unwrap();
        assert!(n.iter().all(|v| *v == Complex64::new(2.0, 0.0)));
    }

    #[test]
    fn index_of_weak_absorber() {
        // reference from a 40-digit evaluation of sqrt(1 + 0.02i)
        let g = grid(&[1.0, 2.0]);
        let n = refractive_index(&[Complex64::new(0.0, 0.02); 2], &g).unwrap()[0];
        assert!((n.re - 1.000_049_993_751_312).abs() < 1e-15);
        assert!((n.im - 0.009_999_500_087_479_381).abs() < 1e-15);
        // first-order series n ≈ 1 + iχ″/2
        assert!((n - Complex64::new(1.0, 0.01)).norm() < 1e-4);
    }

    #[test]
    fn branch_point_is_an_error() {
        let g = grid(&[1.0, 2.0]);
        let chi = [Complex64::new(0.5, 0.0), Complex64::new(-1.0, 0.0)];
        assert!(matches!(
            refractive_index(&chi, &g),
            Err(DielectricError::BranchPointHit { energy, .. }) if energy == 2.0
        ));
    }

    #[test]
    fn branch_is_tracked_not_principal() {
        // 1 + χ circles the origin across the negative real axis; the principal
        // root would jump from ≈ +i to ≈ −i, the tracked one keeps going.
        let g = grid(&[1.0, 2.0, 3.0]);
        let chi = [
            Complex64::new(-1.5, 0.3),
            Complex64::new(-1.5, 0.01),
            Complex64::new(-1.5, -0.01),
        ];
        let err = refractive_index(&chi, &g).unwrap_err();
        assert!(matches!(err, DielectricError::BackwardBranch { energy, .. } if energy == 3.0));
    }

    #[test]
    fn gain_medium_keeps_forward_branch() {
        let g = FrequencyGrid::linspace(1.0, 2.0, 101).unwrap();
        let chi: Vec<_> = g
            .energies()
            .iter()
            .map(|&e| Complex64::new(11.0, 0.2 * (e - 1.5)))
            .collect();
        let r = DielectricResponse::from_chi(g, chi).unwrap();
        assert!(r.n().iter().all(|n| n.re > 3.0));
        assert!(r.check_continuity(1e-2).is_ok());
        assert!(r.check_continuity(1e-6).is_err());
    }

    #[test]
    fn length_mismatch() {
        let g = grid(&[1.0, 2.0]);
        assert!(matches!(
            refractive_index(&[Complex64::new(0.0, 0.0)], &g),
            Err(DielectricError::LengthMismatch { .. })
        ));
    }
}
