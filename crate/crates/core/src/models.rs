//! Distinguishability-parameterized input states.
//!
//! Mode layouts:
//! * four-mode scenarios: `(early 1, early 2, late 1, late 2)`
//! * polarization scenarios: `(H, V)`
//! * loss model: `(mode 1, mode 2, loss ancilla)`

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{fidelity, FockState, Limits, StateEnsemble, StateRef};
use crate::transforms::{lift, ModeUnitary};

/// Tolerance for accepting (and snapping) a gamma marginally outside the range.
const GAMMA_SLACK: f64 = 1e-12;

/// Number of nodes in the wrapped-Gaussian phase-noise ensemble.
pub const WRAPPED_GAUSSIAN_NODES: usize = 17;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScenarioId {
    Hom2,
    Hom4Coincidence,
    Hom4Bunching,
    SingleDeliberate,
    SingleLoss,
    SinglePhaseNoise,
    TwoPhotonPolarization,
    HofmannCascade,
    ClassicalPolarization,
}

impl ScenarioId {
    pub const ALL: [ScenarioId; 9] = [
        ScenarioId::Hom2,
        ScenarioId::Hom4Coincidence,
        ScenarioId::Hom4Bunching,
        ScenarioId::SingleDeliberate,
        ScenarioId::SingleLoss,
        ScenarioId::SinglePhaseNoise,
        ScenarioId::TwoPhotonPolarization,
        ScenarioId::HofmannCascade,
        ScenarioId::ClassicalPolarization,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioId::Hom2 => "hom2",
            ScenarioId::Hom4Coincidence => "hom4-coincidence",
            ScenarioId::Hom4Bunching => "hom4-bunching",
            ScenarioId::SingleDeliberate => "single-deliberate",
            ScenarioId::SingleLoss => "single-loss",
            ScenarioId::SinglePhaseNoise => "single-phase-noise",
            ScenarioId::TwoPhotonPolarization => "two-photon-polarization",
            ScenarioId::HofmannCascade => "hofmann-cascade",
            ScenarioId::ClassicalPolarization => "classical-polarization",
        }
    }

    /// Whether the scenario is backed by a Fock-space state.
    pub fn is_quantum(self) -> bool {
        self != ScenarioId::ClassicalPolarization
    }

    /// Single-photon scenarios measured with a `(beta, theta)` projector.
    pub fn needs_angles(self) -> bool {
        matches!(
            self,
            ScenarioId::SingleDeliberate | ScenarioId::SingleLoss | ScenarioId::SinglePhaseNoise
        )
    }

    pub fn mode_count(self) -> Result<usize> {
        match self {
            ScenarioId::Hom2 | ScenarioId::Hom4Coincidence | ScenarioId::Hom4Bunching => Ok(4),
            ScenarioId::SingleLoss => Ok(3),
            ScenarioId::SingleDeliberate
            | ScenarioId::SinglePhaseNoise
            | ScenarioId::TwoPhotonPolarization
            | ScenarioId::HofmannCascade => Ok(2),
            ScenarioId::ClassicalPolarization => Err(Error::UnsupportedScenario(self.name())),
        }
    }

    /// The interfering element: a beam splitter acting identically on the
    /// early and late mode pairs for HOM scenarios, identity otherwise.
    pub fn interferometer(self) -> Result<ModeUnitary> {
        match self {
            ScenarioId::Hom2 | ScenarioId::Hom4Coincidence | ScenarioId::Hom4Bunching => {
                hom_beamsplitter()
            }
            other => Ok(ModeUnitary::identity(other.mode_count()?)),
        }
    }

    pub fn prepare(self, gamma: Gamma) -> Result<PreparedState> {
        self.prepare_with(gamma, Limits::default())
    }

    pub fn prepare_with(self, gamma: Gamma, limits: Limits) -> Result<PreparedState> {
        use ScenarioId::*;
        Ok(match self {
            Hom2 => PreparedState::Pure(hom_two_photon_with(gamma, limits)?),
            Hom4Coincidence | Hom4Bunching => {
                PreparedState::Pure(hom_two_pair_with(gamma, limits)?)
            }
            SingleDeliberate => PreparedState::Pure(single_deliberate_with(gamma, limits)?),
            SingleLoss => PreparedState::Pure(single_loss_with(gamma, limits)?),
            SinglePhaseNoise => PreparedState::Mixed(single_phase_noise_with(gamma, limits)?),
            TwoPhotonPolarization | HofmannCascade => {
                PreparedState::Pure(two_photon_polarization_with(gamma, limits)?)
            }
            ClassicalPolarization => return Err(Error::UnsupportedScenario(self.name())),
        })
    }

    /// The maximally interfering input, `|psi(0)>`.
    pub fn reference_state(self, limits: Limits) -> Result<FockState> {
        match self.prepare_with(Gamma::ZERO, limits)? {
            PreparedState::Pure(s) => Ok(s),
            // All members coincide at gamma = 0.
            PreparedState::Mixed(e) => Ok(e.members()[0].1.clone()),
        }
    }
}

impl fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        ScenarioId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = ScenarioId::ALL.iter().map(|id| id.name()).collect();
                format!(
                    "unknown scenario `{s}` (expected one of: {})",
                    names.join(", ")
                )
            })
    }
}

/// Distinguishability parameter gamma in `[0, pi/2]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Gamma(f64);

impl Gamma {
    pub const ZERO: Gamma = Gamma(0.0);
    pub const MAX: Gamma = Gamma(FRAC_PI_2);

    pub fn new(radians: f64) -> Result<Self> {
        if !radians.is_finite() || !(-GAMMA_SLACK..=FRAC_PI_2 + GAMMA_SLACK).contains(&radians) {
            return Err(Error::GammaOutOfRange(radians));
        }
        Ok(Gamma(radians.clamp(0.0, FRAC_PI_2)))
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    /// `steps` uniformly spaced points from 0 to pi/2 inclusive.
    pub fn grid(steps: usize) -> Result<Vec<Gamma>> {
        if steps < 2 {
            return Err(Error::TooFewPoints {
                needed: 2,
                got: steps,
            });
        }
        let last = (steps - 1) as f64;
        Ok((0..steps)
            .map(|i| {
                if i == steps - 1 {
                    Gamma::MAX
                } else {
                    Gamma(FRAC_PI_2 * i as f64 / last)
                }
            })
            .collect())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PreparedState {
    Pure(FockState),
    Mixed(StateEnsemble),
}

impl PreparedState {
    pub fn as_state_ref(&self) -> StateRef<'_> {
        match self {
            PreparedState::Pure(s) => StateRef::Pure(s),
            PreparedState::Mixed(e) => StateRef::Mixed(e),
        }
    }

    pub fn mode_count(&self) -> usize {
        self.as_state_ref().mode_count()
    }

    pub fn transformed(&self, u: &ModeUnitary) -> Result<PreparedState> {
        Ok(match self {
            PreparedState::Pure(s) => PreparedState::Pure(lift(u, s)?),
            PreparedState::Mixed(e) => PreparedState::Mixed(e.try_map(|s| lift(u, s))?),
        })
    }
}

/// Balanced beam splitter on `(0, 1)` and on `(2, 3)`.
pub fn hom_beamsplitter() -> Result<ModeUnitary> {
    ModeUnitary::beamsplitter_5050(0, 1, 4)?.compose(&ModeUnitary::beamsplitter_5050(2, 3, 4)?)
}

/// `cos g |1,1>|0,0> + sin g |1,0>|0,1>`.
pub fn hom_two_photon(gamma: Gamma) -> FockState {
    hom_two_photon_with(gamma, Limits::default()).expect("two photons fit the default bound")
}

pub fn hom_two_photon_with(gamma: Gamma, limits: Limits) -> Result<FockState> {
    let (s, c) = gamma.radians().sin_cos();
    FockState::from_real_terms(4, [([1u8, 1, 0, 0], c), ([1, 0, 0, 1], s)], limits)
}

/// `cos^2 g |2,2>|0,0> + sqrt2 cos g sin g |2,1>|0,1> + sin^2 g |2,0>|0,2>`.
pub fn hom_two_pair(gamma: Gamma) -> FockState {
    hom_two_pair_with(gamma, Limits::default()).expect("four photons fit the default bound")
}

pub fn hom_two_pair_with(gamma: Gamma, limits: Limits) -> Result<FockState> {
    let (s, c) = gamma.radians().sin_cos();
    FockState::from_real_terms(
        4,
        [
            ([2u8, 2, 0, 0], c * c),
            ([2, 1, 0, 1], SQRT_2 * c * s),
            ([2, 0, 0, 2], s * s),
        ],
        limits,
    )
}

/// Polarization rotated away from diagonal: `cos(pi/4 + g/2)|1,0> + sin(pi/4 + g/2)|0,1>`.
pub fn single_deliberate(gamma: Gamma) -> FockState {
    single_deliberate_with(gamma, Limits::default()).expect("one photon fits the default bound")
}

pub fn single_deliberate_with(gamma: Gamma, limits: Limits) -> Result<FockState> {
    let (s, c) = (FRAC_PI_4 + gamma.radians() / 2.0).sin_cos();
    FockState::from_real_terms(2, [([1u8, 0], c), ([0, 1], s)], limits)
}

/// `[cos g |1,0,0> + |0,1,0> + sin g |0,0,1>] / sqrt2`; the last mode is the
/// unobserved loss ancilla.
pub fn single_loss(gamma: Gamma) -> FockState {
    single_loss_with(gamma, Limits::default()).expect("one photon fits the default bound")
}

pub fn single_loss_with(gamma: Gamma, limits: Limits) -> Result<FockState> {
    let (s, c) = gamma.radians().sin_cos();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    FockState::from_real_terms(
        3,
        [([1u8, 0, 0], c * h), ([0, 1, 0], h), ([0, 0, 1], s * h)],
        limits,
    )
}

/// `(|1,0> + e^{i phi}|0,1>) / sqrt2` for a fixed relative phase.
pub fn phase_noise_member(phase: f64, limits: Limits) -> Result<FockState> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    FockState::from_terms(
        2,
        [
            ([1u8, 0], Complex64::new(h, 0.0)),
            ([0, 1], Complex64::from_polar(h, phase)),
        ],
        limits,
    )
}

/// Phase noise as the two-point distribution `phi = +g, -g` with equal
/// weights, so `<cos phi> = cos g` and `<sin phi> = 0` hold exactly.
pub fn single_phase_noise(gamma: Gamma) -> StateEnsemble {
    single_phase_noise_with(gamma, Limits::default()).expect("one photon fits the default bound")
}

pub fn single_phase_noise_with(gamma: Gamma, limits: Limits) -> Result<StateEnsemble> {
    let g = gamma.radians();
    StateEnsemble::new(vec![
        (0.5, phase_noise_member(g, limits)?),
        (0.5, phase_noise_member(-g, limits)?),
    ])
}

/// Phase noise drawn from a wrapped normal distribution with
/// `<cos phi> = exp(-sigma^2/2) = cos g`, discretized on 17 nodes.
///
/// Narrow distributions use Gauss-Hermite nodes; wide ones use equispaced
/// nodes on the circle weighted by the wrapped density. Both node sets are
/// symmetric about zero.
pub fn single_phase_noise_wrapped_gaussian(gamma: Gamma) -> StateEnsemble {
    single_phase_noise_wrapped_gaussian_with(gamma, Limits::default())
        .expect("one photon fits the default bound")
}

pub fn single_phase_noise_wrapped_gaussian_with(
    gamma: Gamma,
    limits: Limits,
) -> Result<StateEnsemble> {
    let nodes = wrapped_gaussian_nodes(gamma.radians().cos(), WRAPPED_GAUSSIAN_NODES);
    let members = nodes
        .into_iter()
        .map(|(phase, w)| phase_noise_member(phase, limits).map(|s| (w, s)))
        .collect::<Result<Vec<_>>>()?;
    StateEnsemble::new(members)
}

// Above this width the equispaced rule is the accurate one.
const HERMITE_SIGMA_LIMIT: f64 = 1.5;

/// `(phase, weight)` pairs for a wrapped normal with `<cos phi> = mean_cos`.
fn wrapped_gaussian_nodes(mean_cos: f64, n: usize) -> Vec<(f64, f64)> {
    let variance = if mean_cos >= 1.0 {
        0.0
    } else if mean_cos <= 0.0 {
        f64::INFINITY
    } else {
        -2.0 * mean_cos.ln()
    };
    let sigma = variance.sqrt();

    let mut nodes: Vec<(f64, f64)> = if sigma <= HERMITE_SIGMA_LIMIT {
        gauss_hermite(n)
            .into_iter()
            .map(|(x, w)| (SQRT_2 * sigma * x, w))
            .collect()
    } else {
        let half = (n / 2) as i64;
        let rho = mean_cos.max(0.0);
        (-half..=half)
            .map(|j| {
                let phi = 2.0 * PI * j as f64 / n as f64;
                // Fourier series of the wrapped density: 1 + 2 sum rho^{k^2} cos(k phi)
                let mut density = 1.0;
                let mut k = 1.0f64;
                loop {
                    let term = rho.powf(k * k);
                    if term < 1e-18 {
                        break;
                    }
                    density += 2.0 * term * (k * phi).cos();
                    k += 1.0;
                }
                (phi, density)
            })
            .collect()
    };
    let total: f64 = nodes.iter().map(|(_, w)| w).sum();
    for (_, w) in &mut nodes {
        *w /= total;
    }
    nodes
}

/// Gauss-Hermite rule for `int exp(-x^2) f(x) dx`, by Newton iteration on
/// the orthonormal Hermite recurrence.
pub(crate) fn gauss_hermite(n: usize) -> Vec<(f64, f64)> {
    let pim4 = PI.powf(-0.25);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    let mut z = 0.0f64;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    x.into_iter().zip(w).collect()
}

/// Two H/V photons rotated away from diagonal:
/// `sin^2 a |2,0> + sqrt2 sin a cos a |1,1> + cos^2 a |0,2>`, `a = pi/4 + g/2`.
pub fn two_photon_polarization(gamma: Gamma) -> FockState {
    two_photon_polarization_with(gamma, Limits::default())
        .expect("two photons fit the default bound")
}

pub fn two_photon_polarization_with(gamma: Gamma, limits: Limits) -> Result<FockState> {
    let (s, c) = (FRAC_PI_4 + gamma.radians() / 2.0).sin_cos();
    FockState::from_real_terms(
        2,
        [([2u8, 0], s * s), ([1, 1], SQRT_2 * s * c), ([0, 2], c * c)],
        limits,
    )
}

/// `I(g) = |<psi(0)|psi(g)>|^2`, ensemble-averaged where the model is mixed.
pub fn indistinguishability(scenario: ScenarioId, gamma: Gamma) -> Result<f64> {
    indistinguishability_with(scenario, gamma, Limits::default())
}

pub fn indistinguishability_with(
    scenario: ScenarioId,
    gamma: Gamma,
    limits: Limits,
) -> Result<f64> {
    let reference = scenario.reference_state(limits)?;
    let state = scenario.prepare_with(gamma, limits)?;
    fidelity(&reference, state.as_state_ref())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn g(x: f64) -> Gamma {
        Gamma::new(x).unwrap()
    }

    #[test]
    fn gamma_range() {
        assert!(Gamma::new(-0.1).is_err());
        assert!(Gamma::new(1.6).is_err());
        assert!(Gamma::new(f64::NAN).is_err());
        assert_eq!(Gamma::new(FRAC_PI_2 + 1e-14).unwrap(), Gamma::MAX);
        let grid = Gamma::grid(101).unwrap();
        assert_eq!(grid.len(), 101);
        assert_eq!(grid[0], Gamma::ZERO);
        assert_eq!(grid[100], Gamma::MAX);
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn scenario_names_round_trip() {
        for id in ScenarioId::ALL {
            assert_eq!(id.name().parse::<ScenarioId>().unwrap(), id);
        }
        assert!("hom3".parse::<ScenarioId>().is_err());
    }

    #[test]
    fn hom_two_photon_endpoints() {
        assert_eq!(
            hom_two_photon(Gamma::ZERO),
            crate::fock::basis_ket([1u8, 1, 0, 0]).unwrap()
        );
        assert_eq!(
            hom_two_photon(Gamma::MAX),
            crate::fock::basis_ket([1u8, 0, 0, 1]).unwrap()
        );
        let mid = hom_two_photon(g(FRAC_PI_4));
        assert_eq!(mid.len(), 2);
        assert_abs_diff_eq!(
            mid.amplitude(&[1, 1, 0, 0]).re,
            FRAC_1_SQRT_2,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            mid.amplitude(&[1, 0, 0, 1]).re,
            FRAC_1_SQRT_2,
            epsilon = 1e-15
        );
    }

    #[test]
    fn hom_two_pair_endpoints() {
        assert_eq!(
            hom_two_pair(Gamma::ZERO),
            crate::fock::basis_ket([2u8, 2, 0, 0]).unwrap()
        );
        assert_eq!(
            hom_two_pair(Gamma::MAX),
            crate::fock::basis_ket([2u8, 0, 0, 2]).unwrap()
        );
        assert_eq!(hom_two_pair(g(0.4)).len(), 3);
    }

    #[test]
    fn single_deliberate_endpoints() {
        let s0 = single_deliberate(Gamma::ZERO);
        assert_abs_diff_eq!(s0.amplitude(&[1, 0]).re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(s0.amplitude(&[0, 1]).re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_eq!(
            single_deliberate(Gamma::MAX),
            crate::fock::basis_ket([0u8, 1]).unwrap()
        );
    }

    #[test]
    fn single_loss_endpoints() {
        let s = single_loss(Gamma::MAX);
        assert_eq!(s.len(), 2);
        assert_abs_diff_eq!(s.amplitude(&[0, 0, 1]).re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(
            indistinguishability(ScenarioId::SingleLoss, Gamma::MAX).unwrap(),
            0.25,
            epsilon = 1e-15
        );
    }

    #[test]
    fn two_photon_polarization_endpoints() {
        assert_eq!(
            two_photon_polarization(Gamma::MAX),
            crate::fock::basis_ket([2u8, 0]).unwrap()
        );
        let s0 = two_photon_polarization(Gamma::ZERO);
        assert_abs_diff_eq!(s0.amplitude(&[2, 0]).re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(s0.amplitude(&[1, 1]).re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(s0.amplitude(&[0, 2]).re, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn two_photon_polarization_matches_rotated_seed() {
        // The explicit H/V superposition equals a rotation by (pi/4 - g/2) of |2,0>.
        for x in [0.0, 0.3, 0.9, FRAC_PI_2] {
            let rot = ModeUnitary::polarization_rotation(FRAC_PI_4 - x / 2.0, 2, 0, 1).unwrap();
            let seeded = lift(&rot, &crate::fock::basis_ket([2u8, 0]).unwrap()).unwrap();
            let direct = two_photon_polarization(g(x));
            for occ in [[2u8, 0], [1, 1], [0, 2]] {
                assert_abs_diff_eq!(
                    (seeded.amplitude(&occ) - direct.amplitude(&occ)).norm(),
                    0.0,
                    epsilon = 1e-14
                );
            }
        }
    }

    #[test]
    fn deliberate_state_is_rotated_h_photon() {
        for x in [0.0, 0.5, 1.2] {
            let rot = ModeUnitary::polarization_rotation(FRAC_PI_4 + x / 2.0, 2, 0, 1).unwrap();
            let seeded = lift(&rot, &crate::fock::basis_ket([1u8, 0]).unwrap()).unwrap();
            let direct = single_deliberate(g(x));
            for occ in [[1u8, 0], [0, 1]] {
                assert_abs_diff_eq!(
                    (seeded.amplitude(&occ) - direct.amplitude(&occ)).norm(),
                    0.0,
                    epsilon = 1e-15
                );
            }
        }
    }

    #[test]
    fn closed_form_indistinguishability() {
        for x in [0.0, 0.2, 0.7, 1.1, FRAC_PI_2] {
            let c = x.cos();
            let cases = [
                (ScenarioId::Hom2, c * c),
                (ScenarioId::Hom4Coincidence, c.powi(4)),
                (ScenarioId::Hom4Bunching, c.powi(4)),
                (ScenarioId::SingleDeliberate, (x / 2.0).cos().powi(2)),
                (ScenarioId::SingleLoss, (1.0 + c).powi(2) / 4.0),
                (ScenarioId::SinglePhaseNoise, (1.0 + c) / 2.0),
                (ScenarioId::TwoPhotonPolarization, (x / 2.0).cos().powi(4)),
            ];
            for (id, expected) in cases {
                assert_abs_diff_eq!(
                    indistinguishability(id, g(x)).unwrap(),
                    expected,
                    epsilon = 1e-14
                );
            }
        }
        assert!(matches!(
            indistinguishability(ScenarioId::ClassicalPolarization, Gamma::ZERO),
            Err(Error::UnsupportedScenario(_))
        ));
    }

    #[test]
    fn gauss_hermite_integrates_moments() {
        let rule = gauss_hermite(17);
        let total: f64 = rule.iter().map(|(_, w)| w).sum();
        assert_abs_diff_eq!(total, PI.sqrt(), epsilon = 1e-13);
        // int x^2 e^{-x^2} = sqrt(pi)/2, int x^4 e^{-x^2} = 3 sqrt(pi)/4
        let m2: f64 = rule.iter().map(|(x, w)| w * x * x).sum();
        let m4: f64 = rule.iter().map(|(x, w)| w * x.powi(4)).sum();
        assert_abs_diff_eq!(m2, PI.sqrt() / 2.0, epsilon = 1e-13);
        assert_abs_diff_eq!(m4, 3.0 * PI.sqrt() / 4.0, epsilon = 1e-12);
        assert!(rule.iter().all(|&(_, w)| w > 0.0));
    }

    #[test]
    fn wrapped_gaussian_reproduces_mean_cosine() {
        for x in Gamma::grid(41).unwrap() {
            let nodes = wrapped_gaussian_nodes(x.radians().cos(), WRAPPED_GAUSSIAN_NODES);
            assert_eq!(nodes.len(), WRAPPED_GAUSSIAN_NODES);
            let mean_cos: f64 = nodes.iter().map(|(p, w)| w * p.cos()).sum();
            let mean_sin: f64 = nodes.iter().map(|(p, w)| w * p.sin()).sum();
            assert_abs_diff_eq!(mean_cos, x.radians().cos(), epsilon = 1e-9);
            assert_abs_diff_eq!(mean_sin, 0.0, epsilon = 1e-14);
            assert!(nodes.iter().all(|&(_, w)| w > 0.0 && w <= 1.0));
        }
    }

    #[test]
    fn factories_normalized_on_fine_grid() {
        for x in Gamma::grid(1001).unwrap() {
            for id in ScenarioId::ALL.into_iter().filter(|id| id.is_quantum()) {
                match id.prepare(x).unwrap() {
                    PreparedState::Pure(s) => assert!(s.is_normalized(), "{id} at {x:?}"),
                    PreparedState::Mixed(e) => {
                        assert!(e.members().iter().all(|(_, s)| s.is_normalized()))
                    }
                }
            }
        }
    }
}
