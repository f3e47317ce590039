//! Bosonic Fock-space algebra over a finite number of modes.
//!
//! States are sparse maps from occupation vectors to complex amplitudes,
//! with basis kets normalized as `|n> = (a^dag)^n / sqrt(n!) |0>`. Keys are
//! kept in a `BTreeMap` so iteration is lexicographic and therefore stable.

use std::collections::btree_map::{self, BTreeMap};
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const DEFAULT_MAX_PHOTONS: u8 = 8;
pub const DEFAULT_PRUNE_THRESHOLD: f64 = 1e-15;

/// Tolerance on `|<psi|psi> - 1|` for a state to count as normalized.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Photon bound and amplitude pruning threshold carried by every state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Limits {
    pub max_photons: u8,
    /// Amplitudes with modulus strictly below this are dropped.
    pub prune_threshold: f64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_photons: DEFAULT_MAX_PHOTONS,
            prune_threshold: DEFAULT_PRUNE_THRESHOLD,
        }
    }
}

impl Limits {
    pub fn with_prune_threshold(self, prune_threshold: f64) -> Self {
        Limits {
            prune_threshold,
            ..self
        }
    }

    pub fn with_max_photons(self, max_photons: u8) -> Self {
        Limits {
            max_photons,
            ..self
        }
    }
}

/// Photon count per mode.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OccupationVector(Vec<u8>);

impl OccupationVector {
    pub fn new(counts: impl Into<Vec<u8>>) -> Self {
        OccupationVector(counts.into())
    }

    pub fn vacuum(modes: usize) -> Self {
        OccupationVector(vec![0; modes])
    }

    pub fn counts(&self) -> &[u8] {
        &self.0
    }

    pub fn mode_count(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().map(|&n| n as u32).sum()
    }

    /// `prod_i n_i!`, the squared normalization of the creation monomial.
    pub fn factorial_product(&self) -> f64 {
        self.0.iter().map(|&n| factorial(n)).product()
    }

    fn concat(&self, other: &OccupationVector) -> OccupationVector {
        let mut counts = self.0.clone();
        counts.extend_from_slice(&other.0);
        OccupationVector(counts)
    }

    fn check(&self, limits: &Limits) -> Result<()> {
        if self.total() > limits.max_photons as u32 {
            return Err(Error::InvalidOccupation(format!(
                "{self} holds {} photons, bound is {}",
                self.total(),
                limits.max_photons
            )));
        }
        Ok(())
    }
}

impl TryFrom<&[i64]> for OccupationVector {
    type Error = Error;

    fn try_from(counts: &[i64]) -> Result<Self> {
        counts
            .iter()
            .map(|&n| {
                u8::try_from(n).map_err(|_| {
                    Error::InvalidOccupation(format!("entry {n} is not a valid photon count"))
                })
            })
            .collect::<Result<Vec<u8>>>()
            .map(OccupationVector)
    }
}

impl From<Vec<u8>> for OccupationVector {
    fn from(counts: Vec<u8>) -> Self {
        OccupationVector(counts)
    }
}

impl From<&[u8]> for OccupationVector {
    fn from(counts: &[u8]) -> Self {
        OccupationVector(counts.to_vec())
    }
}

impl<const N: usize> From<[u8; N]> for OccupationVector {
    fn from(counts: [u8; N]) -> Self {
        OccupationVector(counts.to_vec())
    }
}

impl fmt::Display for OccupationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ">")
    }
}

pub(crate) fn factorial(n: u8) -> f64 {
    (1..=n as u32).map(f64::from).product()
}

/// Pure state in a fixed number of modes.
#[derive(Clone, Debug, PartialEq)]
pub struct FockState {
    modes: usize,
    amplitudes: BTreeMap<OccupationVector, Complex64>,
    limits: Limits,
}

impl FockState {
    /// Zero vector (not a physical state); useful as an accumulator.
    pub fn zero(modes: usize, limits: Limits) -> Self {
        FockState {
            modes,
            amplitudes: BTreeMap::new(),
            limits,
        }
    }

    pub fn vacuum(modes: usize) -> Self {
        let mut amplitudes = BTreeMap::new();
        amplitudes.insert(OccupationVector::vacuum(modes), Complex64::new(1.0, 0.0));
        FockState {
            modes,
            amplitudes,
            limits: Limits::default(),
        }
    }

    /// Builds a superposition, summing amplitudes of repeated kets.
    pub fn from_terms<I, K>(modes: usize, terms: I, limits: Limits) -> Result<Self>
    where
        I: IntoIterator<Item = (K, Complex64)>,
        K: Into<OccupationVector>,
    {
        let mut state = FockState::zero(modes, limits);
        for (key, amp) in terms {
            let key = key.into();
            if key.mode_count() != modes {
                return Err(Error::Dimension {
                    expected: modes,
                    found: key.mode_count(),
                });
            }
            key.check(&limits)?;
            *state.amplitudes.entry(key).or_default() += amp;
        }
        state.prune();
        Ok(state)
    }

    /// Real-coefficient convenience over [`FockState::from_terms`].
    pub fn from_real_terms<I, K>(modes: usize, terms: I, limits: Limits) -> Result<Self>
    where
        I: IntoIterator<Item = (K, f64)>,
        K: Into<OccupationVector>,
    {
        FockState::from_terms(
            modes,
            terms.into_iter().map(|(k, a)| (k, Complex64::new(a, 0.0))),
            limits,
        )
    }

    pub fn mode_count(&self) -> usize {
        self.modes
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    /// Re-applies pruning under new limits.
    pub fn with_limits(mut self, limits: Limits) -> Result<Self> {
        for key in self.amplitudes.keys() {
            key.check(&limits)?;
        }
        self.limits = limits;
        self.prune();
        Ok(self)
    }

    pub fn amplitude(&self, occupations: &[u8]) -> Complex64 {
        self.amplitudes
            .get(&OccupationVector::from(occupations))
            .copied()
            .unwrap_or_default()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, OccupationVector, Complex64> {
        self.amplitudes.iter()
    }

    /// Number of stored (non-pruned) terms.
    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() < NORM_TOLERANCE
    }

    pub fn normalized(mut self) -> Result<Self> {
        let norm = self.norm_sqr().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidOccupation(
                "cannot normalize the zero vector".into(),
            ));
        }
        for amp in self.amplitudes.values_mut() {
            *amp /= norm;
        }
        Ok(self)
    }

    pub fn scaled(mut self, factor: Complex64) -> Self {
        for amp in self.amplitudes.values_mut() {
            *amp *= factor;
        }
        self.prune();
        self
    }

    /// `self + other`.
    pub fn superpose(&self, other: &FockState) -> Result<Self> {
        check_modes(self.modes, other.modes)?;
        let mut out = self.clone();
        for (key, amp) in &other.amplitudes {
            *out.amplitudes.entry(key.clone()).or_default() += amp;
        }
        out.prune();
        Ok(out)
    }

    /// Total photon numbers present in the superposition, ascending.
    pub fn photon_numbers(&self) -> Vec<u32> {
        let mut n: Vec<u32> = self.amplitudes.keys().map(|k| k.total()).collect();
        n.sort_unstable();
        n.dedup();
        n
    }

    pub(crate) fn insert_raw(&mut self, key: OccupationVector, amp: Complex64) {
        *self.amplitudes.entry(key).or_default() += amp;
    }

    pub(crate) fn prune(&mut self) {
        let threshold = self.limits.prune_threshold;
        self.amplitudes.retain(|_, a| a.norm() >= threshold);
    }
}

/// Normalized single-term state `|n_1, ..., n_M>`.
pub fn basis_ket(occupations: impl Into<OccupationVector>) -> Result<FockState> {
    basis_ket_with(occupations, Limits::default())
}

pub fn basis_ket_with(
    occupations: impl Into<OccupationVector>,
    limits: Limits,
) -> Result<FockState> {
    let occupations = occupations.into();
    let modes = occupations.mode_count();
    FockState::from_real_terms(modes, [(occupations, 1.0)], limits)
}

/// `<bra|ket>`, conjugate-linear in `bra`.
pub fn inner_product(bra: &FockState, ket: &FockState) -> Result<Complex64> {
    check_modes(bra.modes, ket.modes)?;
    // Walk the smaller map and probe the larger one.
    let (small, large, conj_small) = if bra.len() <= ket.len() {
        (bra, ket, true)
    } else {
        (ket, bra, false)
    };
    let mut acc = Complex64::default();
    for (key, a) in &small.amplitudes {
        if let Some(b) = large.amplitudes.get(key) {
            acc += if conj_small {
                a.conj() * b
            } else {
                b.conj() * a
            };
        }
    }
    Ok(acc)
}

/// `left ⊗ right`; modes of `right` are appended after those of `left`.
pub fn tensor(left: &FockState, right: &FockState) -> Result<FockState> {
    let limits = left.limits;
    let mut out = FockState::zero(left.modes + right.modes, limits);
    for (kl, al) in &left.amplitudes {
        for (kr, ar) in &right.amplitudes {
            let key = kl.concat(kr);
            key.check(&limits)?;
            out.insert_raw(key, al * ar);
        }
    }
    out.prune();
    Ok(out)
}

/// Equal-dimension mixture `sum_i w_i |psi_i><psi_i|`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateEnsemble {
    members: Vec<(f64, FockState)>,
}

impl StateEnsemble {
    pub fn new(members: Vec<(f64, FockState)>) -> Result<Self> {
        let Some((_, first)) = members.first() else {
            return Err(Error::InvalidEnsemble("no members".into()));
        };
        let modes = first.mode_count();
        let mut total = 0.0;
        for (w, state) in &members {
            if !(*w > 0.0 && *w <= 1.0) {
                return Err(Error::InvalidEnsemble(format!("weight {w} outside (0, 1]")));
            }
            check_modes(modes, state.mode_count())?;
            if !state.is_normalized() {
                return Err(Error::InvalidEnsemble(format!(
                    "member with <psi|psi> = {} is not normalized",
                    state.norm_sqr()
                )));
            }
            total += w;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidEnsemble(format!("weights sum to {total}")));
        }
        Ok(StateEnsemble { members })
    }

    pub fn pure(state: FockState) -> Result<Self> {
        StateEnsemble::new(vec![(1.0, state)])
    }

    pub fn members(&self) -> &[(f64, FockState)] {
        &self.members
    }

    pub fn mode_count(&self) -> usize {
        self.members[0].1.mode_count()
    }

    /// Applies `f` to every member, keeping the weights.
    pub fn try_map<F>(&self, mut f: F) -> Result<StateEnsemble>
    where
        F: FnMut(&FockState) -> Result<FockState>,
    {
        let members = self
            .members
            .iter()
            .map(|(w, s)| f(s).map(|s| (*w, s)))
            .collect::<Result<Vec<_>>>()?;
        StateEnsemble::new(members)
    }
}

/// Borrowed pure-or-mixed state, accepted by every measurement.
#[derive(Clone, Copy, Debug)]
pub enum StateRef<'a> {
    Pure(&'a FockState),
    Mixed(&'a StateEnsemble),
}

impl<'a> StateRef<'a> {
    pub fn mode_count(&self) -> usize {
        match self {
            StateRef::Pure(s) => s.mode_count(),
            StateRef::Mixed(e) => e.mode_count(),
        }
    }

    /// Weighted average of `f` over the members.
    pub fn average<F>(&self, mut f: F) -> Result<f64>
    where
        F: FnMut(&FockState) -> Result<f64>,
    {
        match self {
            StateRef::Pure(s) => f(s),
            StateRef::Mixed(e) => e
                .members()
                .iter()
                .try_fold(0.0, |acc, (w, s)| Ok(acc + w * f(s)?)),
        }
    }
}

impl<'a> From<&'a FockState> for StateRef<'a> {
    fn from(s: &'a FockState) -> Self {
        StateRef::Pure(s)
    }
}

impl<'a> From<&'a StateEnsemble> for StateRef<'a> {
    fn from(e: &'a StateEnsemble) -> Self {
        StateRef::Mixed(e)
    }
}

/// `|<reference|psi>|^2`, averaged over ensemble members.
pub fn fidelity<'a>(reference: &FockState, state: impl Into<StateRef<'a>>) -> Result<f64> {
    state
        .into()
        .average(|s| inner_product(reference, s).map(|z| z.norm_sqr()))
}

pub(crate) fn check_modes(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::Dimension { expected, found });
    }
    Ok(())
}
