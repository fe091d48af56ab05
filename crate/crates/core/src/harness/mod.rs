//! Random model generation, mutation, batch claim checking and
//! counterexample search.

mod generate;
mod mutate;
mod search;

pub use mutate::{mutate_model, mutate_with, Mutant, MutationKind};
pub use search::{search_counterexample, shrink, Counterexample, SearchMode};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::epistemics::{check_epistemic_claims, SuiteConfig};
use crate::event::Event;
use crate::lattice::Lattice;
use crate::model::UnawarenessModel;
use crate::preferences::{check_preference_claims, WeightScheme};
use crate::report::{ClaimId, ClaimResult, SuiteReport, Witness};

pub const MAX_SPACES: usize = 5;
pub const MAX_STATES_PER_SPACE: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Chain,
    Diamond,
    Random,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::Chain => "chain",
            Shape::Diamond => "diamond",
            Shape::Random => "random",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown shape `{0}` (expected chain, diamond or random)")]
pub struct UnknownShape(pub String);

impl FromStr for Shape {
    type Err = UnknownShape;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "chain" => Ok(Shape::Chain),
            "diamond" => Ok(Shape::Diamond),
            "random" => Ok(Shape::Random),
            _ => Err(UnknownShape(s.to_owned())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("max_spaces must be in 1..={MAX_SPACES}, got {0}")]
    Spaces(usize),
    #[error("max_states_per_space must be in 1..={MAX_STATES_PER_SPACE}, got {0}")]
    States(usize),
}

/// Generator parameters. A diamond needs at least four spaces and three
/// states per space; smaller bounds fall back to a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenConfig {
    pub seed: u64,
    pub max_spaces: usize,
    pub max_states_per_space: usize,
    pub shape: Shape,
    /// `None` generates a correspondence only.
    pub weight_scheme: Option<WeightScheme>,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0,
            max_spaces: 4,
            max_states_per_space: 4,
            shape: Shape::Random,
            weight_scheme: Some(WeightScheme::SeededRandom(0)),
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<(), GenError> {
        if !(1..=MAX_SPACES).contains(&self.max_spaces) {
            return Err(GenError::Spaces(self.max_spaces));
        }
        if !(1..=MAX_STATES_PER_SPACE).contains(&self.max_states_per_space) {
            return Err(GenError::States(self.max_states_per_space));
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// A valid model drawn deterministically from `cfg.seed`.
pub fn generate_model(cfg: &GenConfig) -> Result<UnawarenessModel, GenError> {
    cfg.validate()?;
    Ok(generate::generate(cfg))
}

/// The deliberately false claim: the members of `¬E` are the complement
/// of the members of `E`. It fails as soon as some state lives in a space
/// not above the space of `E`.
pub fn check_folk_negation(lat: &Lattice) -> ClaimResult {
    let omega = lat.all_states();
    let result = lat
        .all_events()
        .into_iter()
        .find_map(|e: Event| {
            let neg = lat.members(&lat.negate(&e));
            let complement = omega.difference(&lat.members(&e));
            (neg != complement).then(|| {
                let missing = complement.difference(&neg);
                Witness::new("members of the negation differ from the complement")
                    .event(lat, &e)
                    .states(lat, missing.iter())
            })
        })
        .map_or(Ok(()), Err);
    ClaimResult::from_check(ClaimId::FolkNegationComplement, result)
}

/// Check `claims` against a model. Correspondence claims use the stated
/// correspondence or the one revealed by the preferences; claims whose
/// data is missing are skipped.
pub fn run_suite(m: &UnawarenessModel, claims: &[ClaimId], cfg: SuiteConfig) -> SuiteReport {
    let lat = &m.lattice;
    let (epi, rest): (Vec<ClaimId>, Vec<ClaimId>) =
        claims.iter().partition(|c| c.needs_correspondence());
    let (pref, folk): (Vec<ClaimId>, Vec<ClaimId>) = rest.into_iter().partition(|c| c.needs_preferences());
    let mut results = Vec::new();
    if !epi.is_empty() {
        match m.possibility() {
            Some(c) => results.extend(check_epistemic_claims(lat, &c, &epi, cfg)),
            None => results.extend(
                epi.iter()
                    .map(|&c| ClaimResult::skipped(c, "missing possibility correspondence")),
            ),
        }
    }
    if !pref.is_empty() {
        match &m.preferences {
            Some(p) => results.extend(check_preference_claims(lat, p, &pref)),
            None => results.extend(
                pref.iter()
                    .map(|&c| ClaimResult::skipped(c, "missing preference model")),
            ),
        }
    }
    if !folk.is_empty() {
        results.push(check_folk_negation(lat));
    }
    SuiteReport::new(results)
}
