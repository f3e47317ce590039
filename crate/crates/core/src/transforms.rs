//! Passive linear-optical transformations.
//!
//! A [`ModeUnitary`] acts on creation operators column-wise:
//! `a_i^dag -> sum_j U[j][i] a_j^dag`. [`lift`] carries that action to Fock
//! space by expanding each basis ket as a creation-operator monomial.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{check_modes, FockState, OccupationVector, StateEnsemble};

pub const UNITARITY_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct ModeUnitary {
    dim: usize,
    // row-major, entry (j, i) at j * dim + i
    matrix: Vec<Complex64>,
}

impl ModeUnitary {
    pub fn identity(dim: usize) -> Self {
        let mut matrix = vec![Complex64::default(); dim * dim];
        for i in 0..dim {
            matrix[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        ModeUnitary { dim, matrix }
    }

    /// Row-major entries; rejects matrices with `|U^dag U - 1| > 1e-12` anywhere.
    pub fn from_rows(dim: usize, matrix: Vec<Complex64>) -> Result<Self> {
        if matrix.len() != dim * dim {
            return Err(Error::Dimension {
                expected: dim * dim,
                found: matrix.len(),
            });
        }
        let u = ModeUnitary { dim, matrix };
        let dev = u.unitarity_deviation();
        if dev > UNITARITY_TOLERANCE {
            return Err(Error::NotUnitary(dev));
        }
        Ok(u)
    }

    /// Identity on all modes except a 2x2 `block` acting on `(a, b)`.
    ///
    /// `block[r][c]` follows the column convention: `a^dag -> block[0][0] a^dag + block[1][0] b^dag`.
    pub fn two_mode(
        a: usize,
        b: usize,
        total_modes: usize,
        block: [[Complex64; 2]; 2],
    ) -> Result<Self> {
        for index in [a, b] {
            if index >= total_modes {
                return Err(Error::ModeIndex {
                    index,
                    modes: total_modes,
                });
            }
        }
        if a == b {
            return Err(Error::InvalidParameter {
                name: "mode",
                reason: format!("two-mode element needs distinct modes, got {a} twice"),
            });
        }
        let mut u = ModeUnitary::identity(total_modes);
        let idx = [a, b];
        for (r, &row) in idx.iter().enumerate() {
            for (c, &col) in idx.iter().enumerate() {
                u.matrix[row * total_modes + col] = block[r][c];
            }
        }
        let dev = u.unitarity_deviation();
        if dev > UNITARITY_TOLERANCE {
            return Err(Error::NotUnitary(dev));
        }
        Ok(u)
    }

    /// Balanced beam splitter: `a^dag -> (a^dag + b^dag)/sqrt2`, `b^dag -> (a^dag - b^dag)/sqrt2`.
    ///
    /// With this sign choice `|1,1> -> (|2,0> - |0,2>)/sqrt2`.
    pub fn beamsplitter_5050(mode_a: usize, mode_b: usize, total_modes: usize) -> Result<Self> {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        ModeUnitary::two_mode(mode_a, mode_b, total_modes, [[h, h], [h, -h]])
    }

    /// Real rotation `[cos, -sin; sin, cos]` on the `(H, V)` pair.
    pub fn polarization_rotation(
        angle: f64,
        total_modes: usize,
        mode_h: usize,
        mode_v: usize,
    ) -> Result<Self> {
        let (s, c) = angle.sin_cos();
        let r = |x: f64| Complex64::new(x, 0.0);
        ModeUnitary::two_mode(mode_h, mode_v, total_modes, [[r(c), r(-s)], [r(s), r(c)]])
    }

    /// Diagonal phase `e^{i phi}` on a single mode.
    pub fn phase_shift(phase: f64, mode: usize, total_modes: usize) -> Result<Self> {
        if mode >= total_modes {
            return Err(Error::ModeIndex {
                index: mode,
                modes: total_modes,
            });
        }
        let mut u = ModeUnitary::identity(total_modes);
        u.matrix[mode * total_modes + mode] = Complex64::from_polar(1.0, phase);
        Ok(u)
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    /// Entry in row `j`, column `i`.
    pub fn entry(&self, j: usize, i: usize) -> Complex64 {
        self.matrix[j * self.dim + i]
    }

    /// Matrix product `self * rhs`: `rhs` acts first.
    pub fn compose(&self, rhs: &ModeUnitary) -> Result<ModeUnitary> {
        check_modes(self.dim, rhs.dim)?;
        let n = self.dim;
        let mut matrix = vec![Complex64::default(); n * n];
        for j in 0..n {
            for i in 0..n {
                matrix[j * n + i] = (0..n).map(|k| self.entry(j, k) * rhs.entry(k, i)).sum();
            }
        }
        Ok(ModeUnitary { dim: n, matrix })
    }

    pub fn adjoint(&self) -> ModeUnitary {
        let n = self.dim;
        let mut matrix = vec![Complex64::default(); n * n];
        for j in 0..n {
            for i in 0..n {
                matrix[i * n + j] = self.entry(j, i).conj();
            }
        }
        ModeUnitary { dim: n, matrix }
    }

    /// Largest entry of `|U^dag U - 1|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                let dot: Complex64 = (0..n)
                    .map(|k| self.entry(k, a).conj() * self.entry(k, b))
                    .sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }
}

/// `U|psi>` computed by substituting `a_i^dag -> sum_j U[j][i] a_j^dag` into
/// every basis monomial and re-collecting normalized kets.
pub fn lift(u: &ModeUnitary, state: &FockState) -> Result<FockState> {
    check_modes(u.dimension(), state.mode_count())?;
    let modes = u.dimension();
    let mut out = FockState::zero(modes, state.limits());

    for (ket, amp) in state.iter() {
        // creation monomial exponents -> coefficient
        let mut poly: BTreeMap<Vec<u8>, Complex64> = BTreeMap::new();
        poly.insert(vec![0; modes], amp / ket.factorial_product().sqrt());

        for (i, &n) in ket.counts().iter().enumerate() {
            for _ in 0..n {
                let mut next: BTreeMap<Vec<u8>, Complex64> = BTreeMap::new();
                for (mono, coef) in &poly {
                    for j in 0..modes {
                        let uji = u.entry(j, i);
                        if uji == Complex64::default() {
                            continue;
                        }
                        let mut m = mono.clone();
                        m[j] += 1;
                        *next.entry(m).or_default() += coef * uji;
                    }
                }
                poly = next;
            }
        }

        for (mono, coef) in poly {
            let key = OccupationVector::new(mono);
            let scale = key.factorial_product().sqrt();
            out.insert_raw(key, coef * scale);
        }
    }
    out.prune();
    Ok(out)
}

pub fn lift_ensemble(u: &ModeUnitary, ensemble: &StateEnsemble) -> Result<StateEnsemble> {
    ensemble.try_map(|s| lift(u, s))
}
