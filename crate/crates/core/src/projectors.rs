//! Measurement models: pure-state projections, coincidence event sums with
//! unobserved modes, the proper indistinguishability projector, the
//! two-detector polarizer cascade, and the classical-intensity analogue.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{
    check_modes, inner_product, tensor, FockState, OccupationVector, StateRef, NORM_TOLERANCE,
};
use crate::models::ScenarioId;
use crate::transforms::{lift, ModeUnitary};

/// Raw probabilities outside `[-PROBABILITY_SLACK, 1 + PROBABILITY_SLACK]` are algebra bugs.
pub const PROBABILITY_SLACK: f64 = 1e-9;

pub(crate) fn checked_probability(value: f64, context: impl FnOnce() -> String) -> Result<f64> {
    if !(-PROBABILITY_SLACK..=1.0 + PROBABILITY_SLACK).contains(&value) {
        return Err(Error::InvariantViolation {
            value,
            context: context(),
        });
    }
    Ok(value)
}

/// Clamp applied only when reporting.
pub fn clamp_probability(value: f64) -> f64 {
    value.clamp(0.0, 1.0)
}

/// `(beta, theta)` of the single-photon projector
/// `cos(beta)|1,0> + e^{-i theta} sin(beta)|0,1>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectorAngles {
    beta: f64,
    theta: f64,
}

impl ProjectorAngles {
    pub fn new(beta: f64, theta: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&beta) {
            return Err(Error::InvalidParameter {
                name: "beta",
                reason: format!("{beta} outside [0, pi/2]"),
            });
        }
        if !(0.0..2.0 * PI).contains(&theta) {
            return Err(Error::InvalidParameter {
                name: "theta",
                reason: format!("{theta} outside [0, 2 pi)"),
            });
        }
        Ok(ProjectorAngles { beta, theta })
    }

    /// Projector onto the equal-weight, zero-phase superposition.
    pub fn proper() -> Self {
        ProjectorAngles {
            beta: FRAC_PI_4,
            theta: 0.0,
        }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// Per-detector efficiency.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DetectorModel {
    eta: f64,
}

impl DetectorModel {
    pub fn new(eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::InvalidParameter {
                name: "eta",
                reason: format!("{eta} outside [0, 1]"),
            });
        }
        Ok(DetectorModel { eta })
    }

    pub fn ideal() -> Self {
        DetectorModel { eta: 1.0 }
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Click probability of a photon-number-insensitive detector hit by `n` photons.
    pub fn click_probability(&self, n: u8) -> f64 {
        1.0 - (1.0 - self.eta).powi(n as i32)
    }
}

/// A set of detection patterns on the observed modes that a coincidence
/// window cannot tell apart. Occupations of unobserved modes are summed over.
#[derive(Clone, Debug, PartialEq)]
pub struct EventSumProjector {
    events: BTreeSet<OccupationVector>,
    observed: Vec<bool>,
}

impl EventSumProjector {
    pub fn new(events: Vec<OccupationVector>, observed: Vec<bool>) -> Result<Self> {
        let width = observed.iter().filter(|&&o| o).count();
        let mut set = BTreeSet::new();
        for event in events {
            check_modes(width, event.mode_count())?;
            if !set.insert(event.clone()) {
                return Err(Error::InvalidParameter {
                    name: "events",
                    reason: format!("duplicate event {event}"),
                });
            }
        }
        Ok(EventSumProjector {
            events: set,
            observed,
        })
    }

    /// All modes observed.
    pub fn fully_observed(events: Vec<OccupationVector>, modes: usize) -> Result<Self> {
        EventSumProjector::new(events, vec![true; modes])
    }

    /// One photon in each output path, either time bin.
    pub fn hom2_coincidence() -> Self {
        EventSumProjector::fully_observed(vec![[1u8, 0, 0, 1].into(), [0, 1, 1, 0].into()], 4)
            .expect("static event list")
    }

    /// Two photons in each output path.
    pub fn hom4_coincidence() -> Self {
        let events = [
            [2u8, 2, 0, 0],
            [2, 1, 0, 1],
            [1, 2, 1, 0],
            [2, 0, 0, 2],
            [1, 1, 1, 1],
            [0, 2, 2, 0],
        ];
        EventSumProjector::fully_observed(events.into_iter().map(Into::into).collect(), 4)
            .expect("static event list")
    }

    /// All four photons in the first output path.
    pub fn hom4_bunching() -> Self {
        let events = [[4u8, 0, 0, 0], [3, 0, 1, 0], [2, 0, 2, 0]];
        EventSumProjector::fully_observed(events.into_iter().map(Into::into).collect(), 4)
            .expect("static event list")
    }

    pub fn events(&self) -> impl Iterator<Item = &OccupationVector> {
        self.events.iter()
    }

    pub fn mode_count(&self) -> usize {
        self.observed.len()
    }

    fn observed_part(&self, ket: &OccupationVector) -> OccupationVector {
        OccupationVector::new(
            ket.counts()
                .iter()
                .zip(&self.observed)
                .filter(|(_, &o)| o)
                .map(|(&n, _)| n)
                .collect::<Vec<_>>(),
        )
    }
}

/// `|<xi|psi>|^2`, weight-averaged for ensembles.
pub fn pure_projection<'a>(state: impl Into<StateRef<'a>>, projector: &FockState) -> Result<f64> {
    let state = state.into();
    let norm = projector.norm_sqr();
    if (norm - 1.0).abs() >= NORM_TOLERANCE {
        return Err(Error::UnnormalizedProjector(norm));
    }
    check_modes(projector.mode_count(), state.mode_count())?;
    let p = state.average(|s| inner_product(projector, s).map(|z| z.norm_sqr()))?;
    checked_probability(p, || "pure projection".into())
}

/// `cos(beta)|1,0> + e^{-i theta} sin(beta)|0,1>`.
pub fn single_photon_projector(angles: ProjectorAngles) -> FockState {
    let (sb, cb) = angles.beta.sin_cos();
    FockState::from_terms(
        2,
        [
            ([1u8, 0], Complex64::new(cb, 0.0)),
            ([0, 1], Complex64::from_polar(sb, -angles.theta)),
        ],
        Default::default(),
    )
    .expect("single photon")
}

/// Projection onto `projector` on the leading modes, summed over every
/// occupation of the trailing (undetected) modes:
/// `sum_k |(<xi| ⊗ <k|) psi>|^2`.
pub fn marginal_projection<'a>(
    state: impl Into<StateRef<'a>>,
    projector: &FockState,
) -> Result<f64> {
    let state = state.into();
    let norm = projector.norm_sqr();
    if (norm - 1.0).abs() >= NORM_TOLERANCE {
        return Err(Error::UnnormalizedProjector(norm));
    }
    let observed = projector.mode_count();
    let modes = state.mode_count();
    if observed > modes {
        return Err(Error::Dimension {
            expected: observed,
            found: modes,
        });
    }
    let p = state.average(|s| {
        let mut by_ancilla: BTreeMap<&[u8], Complex64> = BTreeMap::new();
        for (ket, amp) in s.iter() {
            let (head, tail) = ket.counts().split_at(observed);
            let overlap = projector.amplitude(head).conj() * amp;
            *by_ancilla.entry(tail).or_default() += overlap;
        }
        Ok(by_ancilla.values().map(|a| a.norm_sqr()).sum())
    })?;
    checked_probability(p, || "marginal projection".into())
}

/// Single-photon projection of the three-mode loss model with the ancilla traced out.
pub fn loss_marginal_projection(state: &FockState, projector: &FockState) -> Result<f64> {
    check_modes(3, state.mode_count())?;
    check_modes(2, projector.mode_count())?;
    if projector.photon_numbers() != [1] {
        return Err(Error::InvalidParameter {
            name: "projector",
            reason: "loss model projector must be a single-photon state".into(),
        });
    }
    marginal_projection(state, projector)
}

/// Total probability of the listed patterns in an already-transformed state.
pub fn event_sum(state_out: &FockState, projector: &EventSumProjector) -> Result<f64> {
    check_modes(projector.mode_count(), state_out.mode_count())?;
    let p = state_out
        .iter()
        .filter(|(ket, _)| projector.events.contains(&projector.observed_part(ket)))
        .map(|(_, amp)| amp.norm_sqr())
        .sum();
    checked_probability(p, || "event sum".into())
}

/// `U|psi(0)>`, the projector whose probability equals the input indistinguishability.
pub fn proper_projector(scenario: ScenarioId) -> Result<FockState> {
    let reference = scenario.reference_state(Default::default())?;
    lift(&scenario.interferometer()?, &reference)
}

/// `(sqrt2 |2,0> + |1,1>) / sqrt3`.
pub fn two_photon_xi() -> FockState {
    FockState::from_real_terms(
        2,
        [
            ([2u8, 0], (2.0f64 / 3.0).sqrt()),
            ([1, 1], (1.0f64 / 3.0).sqrt()),
        ],
        Default::default(),
    )
    .expect("two photons")
}

/// Coincidence probability of the polarizer cascade that realizes the
/// two-photon projector: the `(H, V)` input is split on a non-polarizing
/// balanced beam splitter, arm A passes a diagonal polarizer, arm B a
/// horizontal one, and both detectors must click.
///
/// Internal layout: `(A_H, A_V, B_H, B_V)`, input entering arm A.
pub fn hofmann_cascade(state: &FockState, detectors: DetectorModel) -> Result<f64> {
    check_modes(2, state.mode_count())?;
    if state.photon_numbers() != [2] {
        return Err(Error::InvalidOccupation(format!(
            "cascade needs a two-photon input, found photon numbers {:?}",
            state.photon_numbers()
        )));
    }
    let limits = state.limits();
    let vacuum = FockState::vacuum(2).with_limits(limits)?;
    let extended = tensor(state, &vacuum)?;

    let splitter = ModeUnitary::beamsplitter_5050(0, 2, 4)?
        .compose(&ModeUnitary::beamsplitter_5050(1, 3, 4)?)?;
    // Rotate arm A so diagonal polarization lands in A_H; arm B already transmits H.
    let polarizers = ModeUnitary::polarization_rotation(-FRAC_PI_4, 4, 0, 1)?;
    let out = lift(&polarizers.compose(&splitter)?, &extended)?;

    // A_V and B_V are absorbed by the polarizers.
    let p = out
        .iter()
        .map(|(ket, amp)| {
            let n = ket.counts();
            amp.norm_sqr() * detectors.click_probability(n[0]) * detectors.click_probability(n[2])
        })
        .sum();
    checked_probability(p, || "polarizer cascade".into())
}

/// Mean output intensity of the cascade under classical light of field
/// amplitude `E0`: `(E0/2)^4 cos^2(g - theta1) cos^2(g - theta2)`.
pub fn classical_intensity(gamma: f64, theta1: f64, theta2: f64, field_amplitude: f64) -> f64 {
    (field_amplitude / 2.0).powi(4)
        * (gamma - theta1).cos().powi(2)
        * (gamma - theta2).cos().powi(2)
}
