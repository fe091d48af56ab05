//! Possibility correspondences and the knowledge, awareness and
//! unawareness operators they induce.

mod operators;
mod propositions;

pub use operators::{Knowledge, PlausibilityFixpoint};
pub use propositions::{check_epistemic_claim, check_epistemic_claims, verify_propositions, SuiteConfig};

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{Lattice, StateId};
use crate::report::Witness;
use crate::stateset::StateSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EpistemicError {
    #[error("correspondence is not total: `{0}` has no value")]
    NotTotal(String),
    #[error("correspondence has {got} entries but the lattice has {expected} states")]
    SizeMismatch { expected: usize, got: usize },
    #[error("correspondence refused: {0}")]
    Invalid(PropertyReport),
}

/// A candidate possibility correspondence: one set of states per state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Correspondence {
    pi: Vec<StateSet>,
}

impl Correspondence {
    pub fn new(lat: &Lattice, pi: Vec<StateSet>) -> Result<Self, EpistemicError> {
        if pi.len() != lat.state_count() {
            return Err(EpistemicError::SizeMismatch {
                expected: lat.state_count(),
                got: pi.len(),
            });
        }
        Ok(Correspondence { pi })
    }

    pub fn from_map(
        lat: &Lattice,
        mut map: BTreeMap<StateId, StateSet>,
    ) -> Result<Self, EpistemicError> {
        let pi = lat
            .states()
            .map(|s| {
                map.remove(&s)
                    .ok_or_else(|| EpistemicError::NotTotal(lat.state_name(s).to_owned()))
            })
            .collect::<Result<_, _>>()?;
        Ok(Correspondence { pi })
    }

    /// `Π(ω)`.
    pub fn get(&self, state: StateId) -> &StateSet {
        &self.pi[state.index()]
    }

    pub fn set(&mut self, state: StateId, value: StateSet) {
        self.pi[state.index()] = value;
    }

    pub fn iter(&self) -> impl Iterator<Item = (StateId, &StateSet)> {
        self.pi.iter().enumerate().map(|(i, v)| (StateId::new(i), v))
    }
}

/// The six defining properties of a possibility correspondence plus the
/// two halves of Stationarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PossibilityProperty {
    Confinement,
    GeneralizedReflexivity,
    Stationarity,
    ProjectionsPreserveAwareness,
    ProjectionsPreserveIgnorance,
    ProjectionsPreserveKnowledge,
    /// `ω′ ∈ Π(ω)` implies `Π(ω′) ⊆ Π(ω)`.
    Transitivity,
    /// `ω′ ∈ Π(ω)` implies `Π(ω′) ⊇ Π(ω)`.
    Euclideanness,
}

impl PossibilityProperty {
    /// The six properties a possibility correspondence must satisfy.
    pub const DEFINING: [PossibilityProperty; 6] = [
        PossibilityProperty::Confinement,
        PossibilityProperty::GeneralizedReflexivity,
        PossibilityProperty::Stationarity,
        PossibilityProperty::ProjectionsPreserveAwareness,
        PossibilityProperty::ProjectionsPreserveIgnorance,
        PossibilityProperty::ProjectionsPreserveKnowledge,
    ];

    pub const ALL: [PossibilityProperty; 8] = [
        PossibilityProperty::Confinement,
        PossibilityProperty::GeneralizedReflexivity,
        PossibilityProperty::Stationarity,
        PossibilityProperty::ProjectionsPreserveAwareness,
        PossibilityProperty::ProjectionsPreserveIgnorance,
        PossibilityProperty::ProjectionsPreserveKnowledge,
        PossibilityProperty::Transitivity,
        PossibilityProperty::Euclideanness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PossibilityProperty::Confinement => "Confinement",
            PossibilityProperty::GeneralizedReflexivity => "Generalized Reflexivity",
            PossibilityProperty::Stationarity => "Stationarity",
            PossibilityProperty::ProjectionsPreserveAwareness => "Projections Preserve Awareness",
            PossibilityProperty::ProjectionsPreserveIgnorance => "Projections Preserve Ignorance",
            PossibilityProperty::ProjectionsPreserveKnowledge => "Projections Preserve Knowledge",
            PossibilityProperty::Transitivity => "Transitivity",
            PossibilityProperty::Euclideanness => "Euclideanness",
        }
    }
}

/// Cross-checks derived from the defining properties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DerivedFact {
    /// Reflexivity places the projection of ω in Π(ω), and Π(ω) ≠ ∅.
    ReflexiveProjection,
    /// Ignorance preservation with Confinement bounds the space of Π(ω) from below.
    AwarenessLevelMonotone,
    /// Knowledge preservation with Confinement implies awareness preservation.
    KnowledgeImpliesAwareness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyResult<P> {
    pub property: P,
    pub witness: Option<Witness>,
}

impl<P> PropertyResult<P> {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub properties: Vec<PropertyResult<PossibilityProperty>>,
    pub derived: Vec<PropertyResult<DerivedFact>>,
}

impl PropertyReport {
    pub fn result(&self, p: PossibilityProperty) -> &PropertyResult<PossibilityProperty> {
        self.properties
            .iter()
            .find(|r| r.property == p)
            .expect("every property is reported")
    }

    pub fn holds(&self, p: PossibilityProperty) -> bool {
        self.result(p).passed()
    }

    /// All six defining properties hold.
    pub fn is_valid(&self) -> bool {
        PossibilityProperty::DEFINING.iter().all(|&p| self.holds(p))
    }

    pub fn derived_holds(&self, d: DerivedFact) -> bool {
        self.derived
            .iter()
            .find(|r| r.property == d)
            .is_some_and(|r| r.passed())
    }

    pub fn failures(&self) -> impl Iterator<Item = (&'static str, &Witness)> {
        self.properties
            .iter()
            .filter(|r| PossibilityProperty::DEFINING.contains(&r.property))
            .filter_map(|r| r.witness.as_ref().map(|w| (r.property.name(), w)))
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fails: Vec<String> = self
            .failures()
            .map(|(name, w)| format!("{name}: {w}"))
            .collect();
        if fails.is_empty() {
            f.write_str("all properties hold")
        } else {
            f.write_str(&fails.join("; "))
        }
    }
}

fn first_failure<I, F>(items: I, mut check: F) -> Option<Witness>
where
    I: IntoIterator,
    F: FnMut(I::Item) -> Option<Witness>,
{
    items.into_iter().find_map(&mut check)
}

fn confinement(lat: &Lattice, c: &Correspondence) -> Option<Witness> {
    first_failure(lat.states(), |w| {
        let value = c.get(w);
        if value.is_empty() {
            return None;
        }
        match lat.common_space(value) {
            Some(s) if lat.leq(s, lat.space_of(w)) => None,
            Some(s) => Some(
                Witness::new(format!(
                    "Π({}) lies in {}, which is not below {}",
                    lat.state_name(w),
                    lat.space_name(s),
                    lat.space_name(lat.space_of(w))
                ))
                .state(lat, w)
                .states(lat, value.iter()),
            ),
            None => Some(
                Witness::new(format!(
                    "Π({}) meets more than one space",
                    lat.state_name(w)
                ))
                .state(lat, w)
                .states(lat, value.iter()),
            ),
        }
    })
}

fn generalized_reflexivity(lat: &Lattice, c: &Correspondence) -> Option<Witness> {
    first_failure(lat.states(), |w| {
        (!lat.up_set(c.get(w)).contains(w)).then(|| {
            Witness::new(format!(
                "{} is not in the upward closure of Π({})",
                lat.state_name(w),
                lat.state_name(w)
            ))
            .state(lat, w)
        })
    })
}

fn pairwise_value_check<F>(lat: &Lattice, c: &Correspondence, what: &str, ok: F) -> Option<Witness>
where
    F: Fn(&StateSet, &StateSet) -> bool,
{
    first_failure(lat.states(), |w| {
        c.get(w).iter().find_map(|v| {
            (!ok(c.get(v), c.get(w))).then(|| {
                Witness::new(format!(
                    "{} ∈ Π({}) but Π({}) {what} Π({})",
                    lat.state_name(v),
                    lat.state_name(w),
                    lat.state_name(v),
                    lat.state_name(w)
                ))
                .state(lat, w)
                .state(lat, v)
            })
        })
    })
}

fn projections_preserve_awareness(lat: &Lattice, c: &Correspondence) -> Option<Witness> {
    first_failure(lat.states(), |w| {
        if !c.get(w).contains(w) {
            return None;
        }
        lat.spaces_below(lat.space_of(w)).find_map(|s| {
            let p = lat.try_project(w, s)?;
            (!c.get(p).contains(p)).then(|| {
                Witness::new(format!(
                    "{} ∈ Π({}) but {} ∉ Π({})",
                    lat.state_name(w),
                    lat.state_name(w),
                    lat.state_name(p),
                    lat.state_name(p)
                ))
                .state(lat, w)
                .state(lat, p)
            })
        })
    })
}

fn projections_preserve_ignorance(lat: &Lattice, c: &Correspondence) -> Option<Witness> {
    first_failure(lat.states(), |w| {
        let up = lat.up_set(c.get(w));
        lat.spaces_below(lat.space_of(w)).find_map(|s| {
            let p = lat.try_project(w, s)?;
            let up_p = lat.up_set(c.get(p));
            up.difference(&up_p).first().map(|x| {
                Witness::new(format!(
                    "{} ∈ Π↑({}) but not in Π↑({})",
                    lat.state_name(x),
                    lat.state_name(w),
                    lat.state_name(p)
                ))
                .state(lat, w)
                .state(lat, p)
                .state(lat, x)
            })
        })
    })
}

/// The hypothesis `Π(ω) ⊆ S′` is read for nonempty `Π(ω)`: an empty value
/// has no space to project from. Empty values are caught by
/// Generalized Reflexivity.
fn projections_preserve_knowledge(lat: &Lattice, c: &Correspondence) -> Option<Witness> {
    first_failure(lat.states(), |w| {
        let value = c.get(w);
        let middle = lat.common_space(value)?;
        if !lat.leq(middle, lat.space_of(w)) {
            return None;
        }
        lat.spaces_below(middle).find_map(|s| {
            let p = lat.try_project(w, s)?;
            let projected = lat.project_set(value, s)?;
            (projected != *c.get(p)).then(|| {
                Witness::new(format!(
                    "(Π({}))_{} ≠ Π({})",
                    lat.state_name(w),
                    lat.space_name(s),
                    lat.state_name(p)
                ))
                .state(lat, w)
                .state(lat, p)
            })
        })
    })
}

fn reflexive_projection(lat: &Lattice, c: &Correspondence) -> Option<Witness> {
    first_failure(lat.states(), |w| {
        let value = c.get(w);
        if value.is_empty() {
            return Some(Witness::new(format!("Π({}) is empty", lat.state_name(w))).state(lat, w));
        }
        lat.spaces_below(lat.space_of(w))
            .filter(|&s| value.is_subset(lat.space_set(s)))
            .find_map(|s| {
                let p = lat.try_project(w, s)?;
                (!value.contains(p)).then(|| {
                    Witness::new(format!(
                        "Π({}) ⊆ {} but {} ∉ Π({})",
                        lat.state_name(w),
                        lat.space_name(s),
                        lat.state_name(p),
                        lat.state_name(w)
                    ))
                    .state(lat, w)
                    .state(lat, p)
                })
            })
    })
}

fn awareness_level_monotone(lat: &Lattice, c: &Correspondence) -> Option<Witness> {
    first_failure(lat.states(), |w| {
        let value = c.get(w);
        lat.spaces_below(lat.space_of(w)).find_map(|lower| {
            let p = lat.try_project(w, lower)?;
            lat.spaces()
                .filter(|&s2| c.get(p).is_subset(lat.space_set(s2)))
                .find_map(|s2| {
                    let bounded = lat
                        .spaces()
                        .any(|star| lat.leq(s2, star) && value.is_subset(lat.space_set(star)));
                    (!bounded).then(|| {
                        Witness::new(format!(
                            "Π({}) ⊆ {} but Π({}) lies in no space above it",
                            lat.state_name(p),
                            lat.space_name(s2),
                            lat.state_name(w)
                        ))
                        .state(lat, w)
                        .state(lat, p)
                    })
                })
        })
    })
}

/// Check every defining property and the derived cross-checks.
///
/// Each derived fact is an implication; it is checked only when its
/// premises hold and passes vacuously otherwise.
pub fn validate_possibility(lat: &Lattice, c: &Correspondence) -> PropertyReport {
    use PossibilityProperty::*;
    let properties: Vec<PropertyResult<PossibilityProperty>> = PossibilityProperty::ALL
        .iter()
        .map(|&property| {
            let witness = match property {
                Confinement => confinement(lat, c),
                GeneralizedReflexivity => generalized_reflexivity(lat, c),
                Stationarity => pairwise_value_check(lat, c, "≠", |a, b| a == b),
                Transitivity => pairwise_value_check(lat, c, "⊄", |a, b| a.is_subset(b)),
                Euclideanness => pairwise_value_check(lat, c, "⊅", |a, b| b.is_subset(a)),
                ProjectionsPreserveAwareness => projections_preserve_awareness(lat, c),
                ProjectionsPreserveIgnorance => projections_preserve_ignorance(lat, c),
                ProjectionsPreserveKnowledge => projections_preserve_knowledge(lat, c),
            };
            PropertyResult { property, witness }
        })
        .collect();
    let holds = |p: PossibilityProperty| properties.iter().any(|r| r.property == p && r.passed());
    let derived = vec![
        PropertyResult {
            property: DerivedFact::ReflexiveProjection,
            witness: holds(GeneralizedReflexivity)
                .then(|| reflexive_projection(lat, c))
                .flatten(),
        },
        PropertyResult {
            property: DerivedFact::AwarenessLevelMonotone,
            witness: (holds(ProjectionsPreserveIgnorance) && holds(Confinement))
                .then(|| awareness_level_monotone(lat, c))
                .flatten(),
        },
        PropertyResult {
            property: DerivedFact::KnowledgeImpliesAwareness,
            witness: (holds(ProjectionsPreserveKnowledge) && holds(Confinement))
                .then(|| projections_preserve_awareness(lat, c))
                .flatten(),
        },
    ];
    PropertyReport {
        properties,
        derived,
    }
}
