//! Shared helpers for the integration tests: an adaptive quadrature oracle,
//! a synthetic gain medium and seeded randomness.
#![allow(dead_code, clippy::excessive_precision)]

use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use slabsqueeze::TabulatedSusceptibility;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// Kronrod 15-point nodes on [0, 1] (positive half, x = 0 last) with the
// embedded 7-point Gauss weights.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

struct Piece {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn piece(f: &impl Fn(f64) -> f64, lo: f64, hi: f64) -> Piece {
    let (value, error) = gk15(f, lo, hi);
    Piece {
        lo,
        hi,
        value,
        error,
    }
}

/// Adaptive G7K15 quadrature to relative tolerance `rel_tol`; always splits
/// the piece with the largest error estimate.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    let mut heap = std::collections::BinaryHeap::new();
    heap.push(piece(&f, a, b));
    for _ in 0..1_000_000 {
        let value: f64 = heap.iter().map(|p| p.value).sum();
        let error: f64 = heap.iter().map(|p| p.error).sum();
        if error <= rel_tol * value.abs() {
            return value;
        }
        // Halve the worst few pieces before re-summing.
        for _ in 0..(heap.len() / 4).max(1) {
            let worst = heap.pop().expect("heap is never empty");
            let mid = 0.5 * (worst.lo + worst.hi);
            if mid <= worst.lo || mid >= worst.hi {
                heap.push(Piece {
                    error: 0.0,
                    ..worst
                });
                continue;
            }
            heap.push(piece(&f, worst.lo, mid));
            heap.push(piece(&f, mid, worst.hi));
        }
    }
    panic!("quadrature did not converge on [{a}, {b}]");
}

/// Directory holding the reference configs.
pub fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

/// Chemical potential of the synthetic gain medium in `configs/gain_table.csv`, eV.
pub const GAIN_MU: f64 = 1.49;

/// Single-crossover susceptibility: constant χ′, χ″ saturated gain below μ,
/// linear through zero at μ, strong absorption above. Below the lasing
/// threshold for a 25 µm slab.
pub fn gain_table() -> TabulatedSusceptibility {
    TabulatedSusceptibility::from_path(&gain_table_path()).expect("valid synthetic table")
}

pub fn gain_table_path() -> PathBuf {
    configs_dir().join("gain_table.csv")
}

pub fn gain_table_csv() -> String {
    std::fs::read_to_string(gain_table_path()).expect("readable synthetic table")
}
