//! Gamma sweeps, closed-form cross-checks, monotonicity verdicts and
//! extremum refinement.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;

use crate::error::{Error, Result};
use crate::fock::Limits;
use crate::models::{indistinguishability_with, Gamma, PreparedState, ScenarioId};
use crate::projectors::{
    classical_intensity, event_sum, hofmann_cascade, marginal_projection, pure_projection,
    single_photon_projector, two_photon_xi, DetectorModel, EventSumProjector, ProjectorAngles,
};

pub const DEFAULT_STEPS: usize = 101;
pub const MONOTONICITY_TOLERANCE: f64 = 1e-9;

/// Closed-form probabilities, evaluated without the Fock engine.
pub mod formulas {
    use super::ProjectorAngles;
    use std::f64::consts::FRAC_PI_4;

    /// Two-photon coincidence, `sin^2 g / 2 = (1 - I)/2`.
    pub fn hom2_coincidence(gamma: f64) -> f64 {
        gamma.sin().powi(2) / 2.0
    }

    /// Two-pair coincidence as a sum of the six event probabilities.
    pub fn hom4_coincidence(gamma: f64) -> f64 {
        let (s, c) = gamma.sin_cos();
        c.powi(4) / 4.0 + c * c * s * s / 4.0 + 3.0 * s.powi(4) / 8.0
    }

    /// Same quantity written in terms of `I = cos^4 g`.
    pub fn hom4_coincidence_from_indistinguishability(i: f64) -> f64 {
        (3.0 * i - 4.0 * i.sqrt() + 3.0) / 8.0
    }

    /// `|4,0,0,0> + |3,0,1,0> + |2,0,2,0>` events: `3 cos^2 g / 8 + sin^4 g / 16`.
    pub fn hom4_bunching(gamma: f64) -> f64 {
        let (s, c) = gamma.sin_cos();
        3.0 * c * c / 8.0 + s.powi(4) / 16.0
    }

    pub fn single_deliberate(gamma: f64, angles: ProjectorAngles) -> f64 {
        let (sb, cb) = angles.beta().sin_cos();
        let s = gamma.sin();
        cb * cb * (1.0 - s) / 2.0
            + angles.theta().cos() * (2.0 * angles.beta()).sin() * gamma.cos() / 2.0
            + sb * sb * (1.0 + s) / 2.0
    }

    pub fn single_loss(gamma: f64, angles: ProjectorAngles) -> f64 {
        let (sb, cb) = angles.beta().sin_cos();
        let c = gamma.cos();
        (c * c * cb * cb + angles.theta().cos() * (2.0 * angles.beta()).sin() * c + sb * sb) / 2.0
    }

    pub fn single_phase_noise(gamma: f64, angles: ProjectorAngles) -> f64 {
        (1.0 + angles.theta().cos() * (2.0 * angles.beta()).sin() * gamma.cos()) / 2.0
    }

    /// `(4/3) sin^2(pi/4 + g/2) cos^2(g/2)`.
    pub fn two_photon_polarization(gamma: f64) -> f64 {
        4.0 / 3.0 * (FRAC_PI_4 + gamma / 2.0).sin().powi(2) * (gamma / 2.0).cos().powi(2)
    }

    /// Cascade coincidence, `3 eta^2 / 8` times the two-photon projection.
    pub fn hofmann_cascade(gamma: f64, eta: f64) -> f64 {
        3.0 * eta * eta / 8.0 * two_photon_polarization(gamma)
    }
}

/// Polarizer angles and field amplitude of the classical-light variant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassicalSetup {
    pub theta1: f64,
    pub theta2: f64,
    pub field_amplitude: f64,
}

impl Default for ClassicalSetup {
    fn default() -> Self {
        ClassicalSetup {
            theta1: 0.0,
            theta2: FRAC_PI_4,
            field_amplitude: 2.0,
        }
    }
}

/// A scenario together with every parameter needed to evaluate it.
#[derive(Clone, Debug, PartialEq)]
pub struct Experiment {
    pub scenario: ScenarioId,
    pub angles: Option<ProjectorAngles>,
    pub detectors: DetectorModel,
    pub classical: ClassicalSetup,
    pub limits: Limits,
}

impl Experiment {
    pub fn new(scenario: ScenarioId) -> Self {
        Experiment {
            scenario,
            angles: None,
            detectors: DetectorModel::ideal(),
            classical: ClassicalSetup::default(),
            limits: Limits::default(),
        }
    }

    pub fn with_angles(mut self, angles: ProjectorAngles) -> Self {
        self.angles = Some(angles);
        self
    }

    pub fn with_detectors(mut self, detectors: DetectorModel) -> Self {
        self.detectors = detectors;
        self
    }

    pub fn with_classical(mut self, classical: ClassicalSetup) -> Self {
        self.classical = classical;
        self
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    fn required_angles(&self) -> Result<ProjectorAngles> {
        self.angles
            .ok_or(Error::MissingParameter("beta/theta projector angles"))
    }

    pub fn validate(&self) -> Result<()> {
        if self.scenario.needs_angles() {
            self.required_angles()?;
        }
        Ok(())
    }

    /// Probability computed through the Fock engine (or the intensity
    /// formula for classical light).
    pub fn probability(&self, gamma: Gamma) -> Result<f64> {
        use ScenarioId::*;
        let g = gamma.radians();
        if self.scenario == ClassicalPolarization {
            let c = self.classical;
            return Ok(classical_intensity(
                g,
                c.theta1,
                c.theta2,
                c.field_amplitude,
            ));
        }
        let prepared = self.scenario.prepare_with(gamma, self.limits)?;
        match (self.scenario, &prepared) {
            (Hom2 | Hom4Coincidence | Hom4Bunching, PreparedState::Pure(state)) => {
                let out = crate::transforms::lift(&self.scenario.interferometer()?, state)?;
                let events = match self.scenario {
                    Hom2 => EventSumProjector::hom2_coincidence(),
                    Hom4Coincidence => EventSumProjector::hom4_coincidence(),
                    _ => EventSumProjector::hom4_bunching(),
                };
                event_sum(&out, &events)
            }
            (SingleDeliberate | SinglePhaseNoise, _) => {
                let xi = single_photon_projector(self.required_angles()?);
                pure_projection(prepared.as_state_ref(), &xi)
            }
            (SingleLoss, _) => {
                let xi = single_photon_projector(self.required_angles()?);
                marginal_projection(prepared.as_state_ref(), &xi)
            }
            (TwoPhotonPolarization, _) => {
                pure_projection(prepared.as_state_ref(), &two_photon_xi())
            }
            (HofmannCascade, PreparedState::Pure(state)) => hofmann_cascade(state, self.detectors),
            _ => Err(Error::UnsupportedScenario(self.scenario.name())),
        }
    }

    pub fn closed_form(&self, gamma: Gamma) -> Result<f64> {
        use ScenarioId::*;
        let g = gamma.radians();
        Ok(match self.scenario {
            Hom2 => formulas::hom2_coincidence(g),
            Hom4Coincidence => formulas::hom4_coincidence(g),
            Hom4Bunching => formulas::hom4_bunching(g),
            SingleDeliberate => formulas::single_deliberate(g, self.required_angles()?),
            SingleLoss => formulas::single_loss(g, self.required_angles()?),
            SinglePhaseNoise => formulas::single_phase_noise(g, self.required_angles()?),
            TwoPhotonPolarization => formulas::two_photon_polarization(g),
            HofmannCascade => formulas::hofmann_cascade(g, self.detectors.eta()),
            ClassicalPolarization => {
                let c = self.classical;
                classical_intensity(g, c.theta1, c.theta2, c.field_amplitude)
            }
        })
    }

    /// `None` for classical light.
    pub fn indistinguishability(&self, gamma: Gamma) -> Result<Option<f64>> {
        if !self.scenario.is_quantum() {
            return Ok(None);
        }
        indistinguishability_with(self.scenario, gamma, self.limits).map(Some)
    }
}

/// Closed form for a scenario; cascade detectors are taken as ideal and
/// classical light uses the default polarizer setup.
pub fn closed_form(
    scenario: ScenarioId,
    gamma: Gamma,
    angles: Option<ProjectorAngles>,
) -> Result<f64> {
    let mut exp = Experiment::new(scenario);
    exp.angles = angles;
    exp.closed_form(gamma)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    NonDecreasing,
    NonIncreasing,
    Constant,
    NonMonotonic,
}

impl Verdict {
    pub fn is_monotonic(self) -> bool {
        self != Verdict::NonMonotonic
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::NonDecreasing => "NonDecreasing",
            Verdict::NonIncreasing => "NonIncreasing",
            Verdict::Constant => "Constant",
            Verdict::NonMonotonic => "NonMonotonic",
        };
        f.write_str(s)
    }
}

/// Steps `>= -tol` everywhere is non-decreasing, `<= tol` everywhere is
/// non-increasing, both is constant.
pub fn classify_monotonicity(values: &[f64], tol: f64) -> Result<Verdict> {
    if values.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            got: values.len(),
        });
    }
    let mut up = true;
    let mut down = true;
    for w in values.windows(2) {
        let step = w[1] - w[0];
        up &= step >= -tol;
        down &= step <= tol;
    }
    Ok(match (up, down) {
        (true, true) => Verdict::Constant,
        (true, false) => Verdict::NonDecreasing,
        (false, true) => Verdict::NonIncreasing,
        (false, false) => Verdict::NonMonotonic,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtremumKind {
    Min,
    Max,
}

impl fmt::Display for ExtremumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExtremumKind::Min => "Min",
            ExtremumKind::Max => "Max",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Extremum {
    pub gamma: f64,
    pub value: f64,
    pub kind: ExtremumKind,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub experiment: Experiment,
    pub gammas: Vec<f64>,
    pub probabilities: Vec<f64>,
    pub closed_form: Vec<f64>,
    pub indistinguishability: Vec<Option<f64>>,
    pub verdict: Verdict,
    pub extrema: Vec<Extremum>,
    /// Largest `|engine - closed form|` over the grid.
    pub max_deviation: f64,
}

impl SweepResult {
    pub fn scenario(&self) -> ScenarioId {
        self.experiment.scenario
    }
}

pub fn sweep(experiment: &Experiment, steps: usize) -> Result<SweepResult> {
    if steps < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            got: steps,
        });
    }
    experiment.validate()?;
    let grid = Gamma::grid(steps)?;
    let mut probabilities = Vec::with_capacity(steps);
    let mut closed = Vec::with_capacity(steps);
    let mut indist = Vec::with_capacity(steps);
    for &g in &grid {
        probabilities.push(experiment.probability(g)?);
        closed.push(experiment.closed_form(g)?);
        indist.push(experiment.indistinguishability(g)?);
    }
    let max_deviation = probabilities
        .iter()
        .zip(&closed)
        .map(|(p, c)| (p - c).abs())
        .fold(0.0, f64::max);
    let verdict = classify_monotonicity(&probabilities, MONOTONICITY_TOLERANCE)?;
    let mut result = SweepResult {
        experiment: experiment.clone(),
        gammas: grid.iter().map(|g| g.radians()).collect(),
        probabilities,
        closed_form: closed,
        indistinguishability: indist,
        verdict,
        extrema: Vec::new(),
        max_deviation,
    };
    result.extrema = find_extrema(&result)?;
    Ok(result)
}

/// Interior extrema of a sweep, refined on the engine probability.
///
/// Each sign change of the grid's first differences (steps within the
/// monotonicity tolerance are ignored) brackets one extremum between the
/// neighbouring grid points; golden-section search narrows it and a
/// bisection on the central-difference slope polishes the location.
pub fn find_extrema(result: &SweepResult) -> Result<Vec<Extremum>> {
    if result.verdict.is_monotonic() {
        return Ok(Vec::new());
    }
    let p = &result.probabilities;
    let g = &result.gammas;
    let mut extrema = Vec::new();
    // (index of last significant step, its sign)
    let mut last: Option<(usize, f64)> = None;
    for i in 0..p.len() - 1 {
        let step = p[i + 1] - p[i];
        if step.abs() <= MONOTONICITY_TOLERANCE {
            continue;
        }
        let sign = step.signum();
        if let Some((j, prev)) = last {
            if sign != prev {
                let kind = if prev < 0.0 {
                    ExtremumKind::Min
                } else {
                    ExtremumKind::Max
                };
                extrema.push(refine(&result.experiment, g[j], g[i + 1], kind)?);
            }
        }
        last = Some((i, sign));
    }
    Ok(extrema)
}

const GOLDEN_TOLERANCE: f64 = 1e-10;
const SLOPE_STEP: f64 = 1e-5;
const POLISH_RADIUS: f64 = 1e-6;

fn refine(exp: &Experiment, lo: f64, hi: f64, kind: ExtremumKind) -> Result<Extremum> {
    let sign = match kind {
        ExtremumKind::Min => 1.0,
        ExtremumKind::Max => -1.0,
    };
    let objective = |x: f64| -> Result<f64> { Ok(sign * exp.probability(Gamma::new(x)?)?) };

    let mut x = golden_section_min(objective, lo, hi, GOLDEN_TOLERANCE)?;

    let a = x - POLISH_RADIUS;
    let b = x + POLISH_RADIUS;
    if a - SLOPE_STEP > 0.0 && b + SLOPE_STEP < FRAC_PI_2 {
        let slope =
            |t: f64| -> Result<f64> { Ok(objective(t + SLOPE_STEP)? - objective(t - SLOPE_STEP)?) };
        let (mut a, mut b) = (a, b);
        if slope(a)? < 0.0 && slope(b)? > 0.0 {
            for _ in 0..60 {
                let m = 0.5 * (a + b);
                if slope(m)? > 0.0 {
                    b = m;
                } else {
                    a = m;
                }
            }
            x = 0.5 * (a + b);
        }
    }
    let value = exp.probability(Gamma::new(x)?)?;
    Ok(Extremum {
        gamma: x,
        value,
        kind,
    })
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimum of `f` on `[a, b]`; ties move left.
pub fn golden_section_min<F>(f: F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let (mut a, mut b) = (a, b);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    Ok(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_8, PI};

    #[test]
    fn classify_simple_sequences() {
        assert_eq!(
            classify_monotonicity(&[0.0, 1.0, 2.0], 1e-9).unwrap(),
            Verdict::NonDecreasing
        );
        assert_eq!(
            classify_monotonicity(&[2.0, 1.0, 1.0], 1e-9).unwrap(),
            Verdict::NonIncreasing
        );
        assert_eq!(
            classify_monotonicity(&[1.0, 1.0 + 1e-12, 1.0], 1e-9).unwrap(),
            Verdict::Constant
        );
        assert_eq!(
            classify_monotonicity(&[0.0, 1.0, 0.5], 1e-9).unwrap(),
            Verdict::NonMonotonic
        );
        assert!(matches!(
            classify_monotonicity(&[0.0, 1.0], 1e-9),
            Err(Error::TooFewPoints { needed: 3, got: 2 })
        ));
    }

    #[test]
    fn golden_section_on_parabola() {
        let x = golden_section_min(|x| Ok((x - 0.3).powi(2)), 0.0, 1.0, 1e-10).unwrap();
        assert_abs_diff_eq!(x, 0.3, epsilon = 1e-7);
    }

    #[test]
    fn eq6_and_eq7_agree() {
        for g in Gamma::grid(1001).unwrap() {
            let x = g.radians();
            let i = x.cos().powi(4);
            assert_abs_diff_eq!(
                formulas::hom4_coincidence(x),
                formulas::hom4_coincidence_from_indistinguishability(i),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn deliberate_closed_form_zero() {
        let angles = ProjectorAngles::new(FRAC_PI_8, PI).unwrap();
        let v = closed_form(
            ScenarioId::SingleDeliberate,
            Gamma::new(FRAC_PI_4).unwrap(),
            Some(angles),
        )
        .unwrap();
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-15);
        assert!(matches!(
            closed_form(ScenarioId::SingleDeliberate, Gamma::ZERO, None),
            Err(Error::MissingParameter(_))
        ));
    }

    #[test]
    fn hom4_minimum_closed_form() {
        // dense-grid oracle of the six-term sum
        let n = 200_000;
        let (mut best_x, mut best) = (0.0, f64::INFINITY);
        for k in 0..=n {
            let x = FRAC_PI_2 * k as f64 / n as f64;
            let v = formulas::hom4_coincidence(x);
            if v < best {
                best = v;
                best_x = x;
            }
        }
        let gstar = (2.0f64 / 3.0).sqrt().acos();
        assert_abs_diff_eq!(best, 5.0 / 24.0, epsilon = 1e-10);
        assert_abs_diff_eq!(best_x, gstar, epsilon = 1e-5);
        assert_abs_diff_eq!(
            closed_form(
                ScenarioId::Hom4Coincidence,
                Gamma::new(gstar).unwrap(),
                None
            )
            .unwrap(),
            5.0 / 24.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn sweep_endpoints() {
        let hom2 = sweep(&Experiment::new(ScenarioId::Hom2), 101).unwrap();
        assert_abs_diff_eq!(hom2.probabilities[0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(*hom2.probabilities.last().unwrap(), 0.5, epsilon = 1e-15);
        assert_eq!(hom2.verdict, Verdict::NonDecreasing);
        assert!(hom2.extrema.is_empty());

        let hom4 = sweep(&Experiment::new(ScenarioId::Hom4Coincidence), 101).unwrap();
        assert_abs_diff_eq!(hom4.probabilities[0], 0.25, epsilon = 1e-14);
        assert_abs_diff_eq!(*hom4.probabilities.last().unwrap(), 0.375, epsilon = 1e-14);
        assert_eq!(hom4.extrema.len(), 1);
        assert_eq!(hom4.extrema[0].kind, ExtremumKind::Min);

        let pol = sweep(&Experiment::new(ScenarioId::TwoPhotonPolarization), 101).unwrap();
        assert_abs_diff_eq!(pol.probabilities[0], 2.0 / 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(
            *pol.probabilities.last().unwrap(),
            2.0 / 3.0,
            epsilon = 1e-14
        );
        assert_eq!(pol.extrema.len(), 1);
        assert_eq!(pol.extrema[0].kind, ExtremumKind::Max);
        assert_abs_diff_eq!(pol.extrema[0].gamma, FRAC_PI_4, epsilon = 1e-8);
    }

    #[test]
    fn sweep_errors() {
        assert!(matches!(
            sweep(&Experiment::new(ScenarioId::Hom2), 2),
            Err(Error::TooFewPoints { .. })
        ));
        assert!(matches!(
            sweep(&Experiment::new(ScenarioId::SingleLoss), 11),
            Err(Error::MissingParameter(_))
        ));
    }

    #[test]
    fn deliberate_minimum_located() {
        let angles = ProjectorAngles::new(FRAC_PI_8, PI).unwrap();
        let r = sweep(
            &Experiment::new(ScenarioId::SingleDeliberate).with_angles(angles),
            101,
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::NonMonotonic);
        assert_eq!(r.extrema.len(), 1);
        let e = r.extrema[0];
        // analytic: P = 1/2 - (sqrt2/4)(sin g + cos g), stationary at pi/4
        assert_abs_diff_eq!(e.gamma, FRAC_PI_4, epsilon = 1e-8);
        assert_abs_diff_eq!(e.value, 0.0, epsilon = 1e-12);
    }
}
