#![allow(dead_code)]

use std::collections::BTreeMap;

use num_complex::Complex64;
use photon_indist::fock::{FockState, Limits, OccupationVector};
use photon_indist::transforms::ModeUnitary;
use rand::Rng;

/// Every occupation pattern of `photons` photons in `modes` modes.
pub fn all_patterns(modes: usize, photons: u8) -> Vec<Vec<u8>> {
    if modes == 0 {
        return if photons == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=photons {
        for mut rest in all_patterns(modes - 1, photons - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn expand_modes(occ: &[u8]) -> Vec<usize> {
    occ.iter()
        .enumerate()
        .flat_map(|(m, &n)| std::iter::repeat_n(m, n as usize))
        .collect()
}

fn permanent(matrix: &[Vec<Complex64>]) -> Complex64 {
    let n = matrix.len();
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    // Laplace expansion along the first row.
    let mut total = Complex64::default();
    for col in 0..n {
        let minor: Vec<Vec<Complex64>> = matrix[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != col)
                    .map(|(_, &v)| v)
                    .collect()
            })
            .collect();
        total += matrix[0][col] * permanent(&minor);
    }
    total
}

fn fact(n: u8) -> f64 {
    (1..=n as u32).map(f64::from).product()
}

/// `<m|U|n> = perm(U[m, n]) / sqrt(prod m! prod n!)`, the standard
/// bosonic transition amplitude, evaluated for every output pattern.
pub fn permanent_lift(u: &ModeUnitary, state: &FockState) -> BTreeMap<Vec<u8>, Complex64> {
    let modes = u.dimension();
    let mut out: BTreeMap<Vec<u8>, Complex64> = BTreeMap::new();
    for (ket, amp) in state.iter() {
        let input = ket.counts();
        let photons: u8 = input.iter().sum();
        let cols = expand_modes(input);
        let norm_in: f64 = input.iter().map(|&n| fact(n)).product();
        for pattern in all_patterns(modes, photons) {
            let rows = expand_modes(&pattern);
            let sub: Vec<Vec<Complex64>> = rows
                .iter()
                .map(|&r| cols.iter().map(|&c| u.entry(r, c)).collect())
                .collect();
            let norm_out: f64 = pattern.iter().map(|&n| fact(n)).product();
            let a = permanent(&sub) / (norm_in * norm_out).sqrt();
            *out.entry(pattern).or_default() += amp * a;
        }
    }
    out
}

pub fn random_unitary<R: Rng>(rng: &mut R, modes: usize) -> ModeUnitary {
    let mut u = ModeUnitary::identity(modes);
    if modes < 2 {
        return ModeUnitary::phase_shift(rng.gen_range(0.0..6.3), 0, modes.max(1)).unwrap();
    }
    for _ in 0..(3 * modes) {
        let a = rng.gen_range(0..modes);
        let mut b = rng.gen_range(0..modes);
        while b == a {
            b = rng.gen_range(0..modes);
        }
        let step = ModeUnitary::phase_shift(rng.gen_range(0.0..6.3), a, modes)
            .unwrap()
            .compose(
                &ModeUnitary::polarization_rotation(rng.gen_range(0.0..6.3), modes, a, b).unwrap(),
            )
            .unwrap()
            .compose(&ModeUnitary::phase_shift(rng.gen_range(0.0..6.3), b, modes).unwrap())
            .unwrap();
        u = step.compose(&u).unwrap();
    }
    u
}

/// Normalized random superposition of up to six patterns with `photons` photons.
pub fn random_state<R: Rng>(rng: &mut R, modes: usize, photons: u8) -> FockState {
    let patterns = all_patterns(modes, photons);
    let terms = rng.gen_range(1..=patterns.len().min(6));
    let chosen: Vec<(OccupationVector, Complex64)> = (0..terms)
        .map(|_| {
            let p = &patterns[rng.gen_range(0..patterns.len())];
            (
                OccupationVector::new(p.clone()),
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            )
        })
        .collect();
    FockState::from_terms(modes, chosen, Limits::default())
        .unwrap()
        .normalized()
        .unwrap()
}

pub fn max_amplitude_diff(state: &FockState, oracle: &BTreeMap<Vec<u8>, Complex64>) -> f64 {
    let mut worst = 0.0f64;
    for (k, v) in oracle {
        worst = worst.max((state.amplitude(k) - v).norm());
    }
    for (k, v) in state.iter() {
        let o = oracle.get(k.counts()).copied().unwrap_or_default();
        worst = worst.max((o - v).norm());
    }
    worst
}
