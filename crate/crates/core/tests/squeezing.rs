mod common;

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use slabsqueeze::constants::angular_frequency;
use slabsqueeze::emission::{emission_intensity, DEFAULT_CROSSOVER_WINDOW};
use slabsqueeze::slab::{find_resonances, DEFAULT_LASING_GUARD};
use slabsqueeze::squeezing::{
    degradation_report, envelope_phase, minimizing_phase, spectrum_at_phase, squeeze_sample,
    squeezing_spectrum, SampleClass,
};
use slabsqueeze::{
    DielectricResponse, EmissionState, Execution, FrequencyGrid, LorentzModel, SlabGeometry,
    SlabTransfer, SqueezeInput, SqueezingResult, TransferCoefficients,
};

const L: f64 = 25e-6;
const EX: f64 = 1.515;
const GAMMA: f64 = 2e-4;

fn run(
    response: &DielectricResponse,
    temperature: f64,
    mu: f64,
    magnitude: f64,
) -> (SlabTransfer, SqueezingResult) {
    let transfer = SlabTransfer::compute(
        response,
        SlabGeometry::new(L).unwrap(),
        DEFAULT_LASING_GUARD,
        Execution::Parallel,
    );
    let state = EmissionState::new(temperature, mu).unwrap();
    let emission =
        emission_intensity(&state, &transfer, response, DEFAULT_CROSSOVER_WINDOW).unwrap();
    let input = SqueezeInput::new(magnitude, 0.3, EX).unwrap();
    let result = squeezing_spectrum(&input, &transfer, &emission).unwrap();
    (transfer, result)
}

fn lorentz(peak: f64, count: usize) -> DielectricResponse {
    let model = LorentzModel::with_peak_absorption(EX, GAMMA, peak).unwrap();
    DielectricResponse::lorentz(
        &model,
        FrequencyGrid::linspace(EX - 0.01, EX + 0.01, count).unwrap(),
    )
    .unwrap()
}

#[test]
fn phase_scan_stays_inside_envelope() {
    let mut rng = common::rng(360);
    for _ in 0..200 {
        let input =
            SqueezeInput::new(rng.random_range(0.0..2.5), 0.0, rng.random_range(0.5..3.0)).unwrap();
        let n = Complex64::new(rng.random_range(1.0..4.0), rng.random_range(0.0..0.05));
        let energy = rng.random_range(0.5..3.0);
        let length = rng.random_range(1e-6..50e-6);
        let t = TransferCoefficients::compute(
            n,
            angular_frequency(energy),
            length,
            DEFAULT_LASING_GUARD,
        )
        .unwrap()
        .transmission;
        let i_over_k = rng.random_range(0.0..0.5);
        let s = squeeze_sample(&input, t, i_over_k, length);
        for k in 0..360 {
            let v = spectrum_at_phase(&input, k as f64 * TAU / 360.0, t, i_over_k, length);
            assert!(v >= s.min - 1e-12 && v <= s.max + 1e-12);
        }
        let best = minimizing_phase(&input, t, length, energy).unwrap();
        assert!((spectrum_at_phase(&input, best, t, i_over_k, length) - s.min).abs() <= 1e-12);
        assert!((spectrum_at_phase(&input, best + PI, t, i_over_k, length) - s.max).abs() <= 1e-12);
    }
}

#[test]
fn envelope_phase_on_a_grid() {
    let response = lorentz(0.05, 201);
    let (transfer, result) = run(&response, 300.0, 0.0, 0.8);
    let input = result.input();
    for i in (0..201).step_by(20) {
        let phase = envelope_phase(&input, &transfer, i).unwrap();
        let t = transfer.get(i).unwrap().transmission;
        let s = result.samples()[i].unwrap();
        assert!((spectrum_at_phase(&input, phase, t, s.emission, L) - s.min).abs() <= 1e-12);
    }
}

#[test]
fn stronger_absorption_degrades_more() {
    let mut previous = f64::NEG_INFINITY;
    for peak in [0.001, 0.003, 0.01, 0.03, 0.1, 0.3] {
        let response = lorentz(peak, 201);
        let (_, result) = run(&response, 300.0, 0.0, 0.2);
        let at_resonance = result.samples()[100].unwrap().min;
        assert!(
            at_resonance > previous,
            "peak {peak}: {at_resonance} after {previous}"
        );
        previous = at_resonance;
    }
}

#[test]
fn lossless_slab_imprints_fabry_perot_fringes() {
    let grid = FrequencyGrid::linspace(1.45, 1.55, 4001).unwrap();
    let response =
        DielectricResponse::from_chi(grid, vec![Complex64::new(3.0, 0.0); 4001]).unwrap();
    let (transfer, result) = run(&response, 300.0, 0.0, 0.5);
    let floor = result.input_min();
    // |𝒯|² = 1 on resonance, so the input squeezing passes intact there.
    for e in find_resonances(&transfer) {
        let i = response.grid().nearest_index(e);
        let s = result.samples()[i].unwrap().min;
        assert!((s - floor).abs() <= 1e-3 * floor.abs(), "{s} vs {floor}");
    }
    let shallowest = result
        .samples()
        .iter()
        .map(|s| s.unwrap().min)
        .fold(f64::NEG_INFINITY, f64::max);
    // Between fringes |𝒯|² drops to ((1 − r₀²)/(1 + r₀²))² with r₀² = 1/9.
    let dip = 0.8f64.powi(2);
    assert!(
        (shallowest - dip * floor).abs() <= 1e-4 * floor.abs(),
        "{shallowest}"
    );
    // Lossless and cold: nothing is emitted, nothing becomes classical.
    assert_eq!(
        degradation_report(&result, None).squeezed_intervals.len(),
        1
    );
}

#[test]
fn resonance_splits_the_squeezed_band() {
    let response = lorentz(1.0, 2001);
    let (_, result) = run(&response, 300.0, 0.0, 0.2);
    let report = degradation_report(&result, None);
    assert_eq!(report.squeezed_intervals.len(), 2);
    assert!(report.squeezed_intervals[0].end < EX && report.squeezed_intervals[1].start > EX);
    assert_eq!(report.classes[1000], Some(SampleClass::Classical));
    assert!(report.crossover.is_none());
}

#[test]
fn gain_report_clusters_at_crossover() {
    let mu = common::GAIN_MU;
    let grid = FrequencyGrid::linspace(mu - 0.03, mu + 0.03, 3001).unwrap();
    let response = DielectricResponse::tabulated(&common::gain_table(), grid).unwrap();
    let (_, result) = run(&response, 3.0, mu, 0.2);
    let report = degradation_report(&result, Some(mu));
    let check = report.crossover.unwrap();
    assert!(check.clusters());
    assert!(check.interval.unwrap().contains(mu));
    // Outside the grid, no crossover is reported.
    assert!(degradation_report(&result, Some(2.0)).crossover.is_none());
}

proptest! {
    #[test]
    fn spectrum_is_two_pi_periodic(mag in 0.0f64..3.0, phase in -20.0f64..20.0, t_re in -1.0f64..1.0, t_im in -1.0f64..1.0) {
        let input = SqueezeInput::new(mag, 0.0, 1.5).unwrap();
        let t = Complex64::new(t_re, t_im);
        let a = spectrum_at_phase(&input, phase, t, 0.1, L);
        let b = spectrum_at_phase(&input, phase + TAU, t, 0.1, L);
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
        let reduced = SqueezeInput::new(mag, phase, 1.5).unwrap();
        prop_assert!((0.0..TAU).contains(&reduced.phase()));
    }

    #[test]
    fn envelope_orders_with_magnitude(small in 0.0f64..2.0, extra in 0.0f64..1.0) {
        let a = SqueezeInput::new(small, 0.0, 1.5).unwrap();
        let b = SqueezeInput::new(small + extra, 0.0, 1.5).unwrap();
        prop_assert!(b.input_min() <= a.input_min());
        prop_assert!(b.input_max() >= a.input_max());
        prop_assert!(a.input_min() > -0.5);
    }
}
