//! Single-defect mutations of valid models.
//!
//! Each class edits one state's possibility value or weight vector in a
//! way that breaks a specific defining property. Correspondence edits on a
//! weighted model re-induce uniform weights from the edited value, and
//! weight edits replace a stated correspondence with the revealed one, so
//! both views of the mutant always agree.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::epistemics::{Correspondence, PossibilityProperty};
use crate::lattice::{Lattice, StateId};
use crate::model::UnawarenessModel;
use crate::preferences::{derive_possibility, induce_preferences, WeightScheme};
use crate::stateset::StateSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MutationKind {
    /// Add a state from another space to a value.
    CrossSpace,
    /// Remove the state's own projection from its value.
    DropReflexive,
    /// Add a state of the value's space that lies outside the value.
    ExtendCell,
    /// Project a value to a strictly poorer space, at a state whose value
    /// lies strictly below its own space.
    RaiseIgnorance,
    /// Make a self-aware state unaware of its own space while a richer
    /// self-aware state projects onto it.
    ForgetSelf,
    /// Replace a value by the state's own projection where a poorer
    /// projection is not certain of itself.
    DesyncLift,
    /// Zero a whole weight vector.
    ZeroWeights,
    /// Put positive weight on a state outside the support.
    OffSupportWeight,
}

impl MutationKind {
    pub const ALL: [MutationKind; 8] = [
        MutationKind::CrossSpace,
        MutationKind::DropReflexive,
        MutationKind::ExtendCell,
        MutationKind::RaiseIgnorance,
        MutationKind::ForgetSelf,
        MutationKind::DesyncLift,
        MutationKind::ZeroWeights,
        MutationKind::OffSupportWeight,
    ];

    pub fn needs_preferences(self) -> bool {
        matches!(self, MutationKind::ZeroWeights | MutationKind::OffSupportWeight)
    }

    /// Properties at least one of which the defect must break.
    pub fn targets(self) -> &'static [PossibilityProperty] {
        use PossibilityProperty as P;
        match self {
            MutationKind::CrossSpace => &[P::Confinement],
            MutationKind::DropReflexive | MutationKind::ZeroWeights => &[P::GeneralizedReflexivity],
            MutationKind::ExtendCell => &[P::Stationarity],
            MutationKind::RaiseIgnorance => &[P::ProjectionsPreserveIgnorance],
            MutationKind::ForgetSelf => &[P::ProjectionsPreserveAwareness],
            MutationKind::DesyncLift => &[P::ProjectionsPreserveKnowledge],
            MutationKind::OffSupportWeight => &[P::Confinement, P::Stationarity],
        }
    }
}

impl fmt::Display for MutationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mutant {
    pub model: UnawarenessModel,
    pub kind: MutationKind,
    /// The state whose value or weights were edited.
    pub state: String,
}

fn value_space(lat: &Lattice, c: &Correspondence, w: StateId) -> Option<crate::lattice::SpaceId> {
    lat.common_space(c.get(w))
}

/// Candidate edits `(state, new value)` for a correspondence mutation.
fn pi_candidates(lat: &Lattice, c: &Correspondence, kind: MutationKind) -> Vec<(StateId, StateSet)> {
    let mut out = Vec::new();
    for w in lat.states() {
        let value = c.get(w);
        let Some(level) = value_space(lat, c, w) else {
            continue;
        };
        match kind {
            MutationKind::CrossSpace => {
                for v in lat.states().filter(|&v| lat.space_of(v) != level) {
                    let mut nv = value.clone();
                    nv.insert(v);
                    out.push((w, nv));
                }
            }
            MutationKind::DropReflexive => {
                if let Some(own) = lat.try_project(w, level).filter(|&p| value.contains(p)) {
                    let mut nv = value.clone();
                    nv.remove(own);
                    out.push((w, nv));
                }
            }
            MutationKind::ExtendCell => {
                for &y in lat.states_of(level) {
                    if !value.contains(y) {
                        let mut nv = value.clone();
                        nv.insert(y);
                        out.push((w, nv));
                    }
                }
            }
            MutationKind::RaiseIgnorance => {
                if level == lat.space_of(w) {
                    continue;
                }
                for lower in lat.spaces_below(level).filter(|&s| s != level) {
                    if let Some(nv) = lat.project_set(value, lower) {
                        out.push((w, nv));
                    }
                }
            }
            MutationKind::ForgetSelf => {
                if !value.contains(w) {
                    continue;
                }
                let richer_self_aware = lat.states().any(|h| {
                    h != w && c.get(h).contains(h) && lat.try_project(h, lat.space_of(w)) == Some(w)
                });
                if !richer_self_aware {
                    continue;
                }
                for lower in lat.spaces_below(level).filter(|&s| s != level) {
                    if let Some(nv) = lat.project_set(value, lower) {
                        out.push((w, nv));
                    }
                }
            }
            MutationKind::DesyncLift => {
                let Some(own) = lat.try_project(w, level) else {
                    continue;
                };
                let nv = StateSet::singleton(own);
                if nv == *value {
                    continue;
                }
                let breaks = lat.spaces_below(level).any(|s| {
                    lat.try_project(w, s)
                        .is_some_and(|p| p != w && *c.get(p) != StateSet::singleton(p))
                });
                if breaks {
                    out.push((w, nv));
                }
            }
            MutationKind::ZeroWeights | MutationKind::OffSupportWeight => {}
        }
    }
    out
}

/// Apply one mutation of the given class, choosing among the applicable
/// edits with `rng`. `None` if the class does not apply to the model.
pub fn mutate_with(m: &UnawarenessModel, kind: MutationKind, rng: &mut ChaCha8Rng) -> Option<Mutant> {
    let lat = &m.lattice;
    if kind.needs_preferences() {
        let p = m.preferences.as_ref()?;
        let mut p = p.clone();
        let state = match kind {
            MutationKind::ZeroWeights => {
                let candidates: Vec<StateId> = lat.states().filter(|&w| !p.support(w).is_empty()).collect();
                let &w = candidates.choose(rng)?;
                for t in lat.states() {
                    p.set_weight(w, t, BigRational::zero());
                }
                w
            }
            _ => {
                let mut candidates: Vec<(StateId, StateId)> = Vec::new();
                for w in lat.states() {
                    let support = p.support(w);
                    let level = lat.common_space(&support);
                    for t in lat.states().filter(|&t| !support.contains(t)) {
                        candidates.push((w, t));
                    }
                    if let Some(level) = level {
                        let same: Vec<(StateId, StateId)> = candidates
                            .iter()
                            .copied()
                            .filter(|&(x, t)| x == w && lat.space_of(t) == level)
                            .collect();
                        if !same.is_empty() {
                            candidates.retain(|&(x, _)| x != w);
                            candidates.extend(same);
                        }
                    }
                }
                let &(w, t) = candidates.choose(rng)?;
                p.set_weight(w, t, BigRational::one());
                w
            }
        };
        let correspondence = m.correspondence.as_ref().map(|_| derive_possibility(lat, &p));
        return Some(Mutant {
            model: UnawarenessModel {
                lattice: lat.clone(),
                correspondence,
                preferences: Some(p),
                events: m.events.clone(),
            },
            kind,
            state: lat.state_name(state).to_owned(),
        });
    }
    let c = m.possibility()?;
    let candidates = pi_candidates(lat, &c, kind);
    let (w, value) = candidates.choose(rng)?.clone();
    let mut c = c;
    c.set(w, value);
    let preferences = m
        .preferences
        .as_ref()
        .map(|_| induce_preferences(lat, &c, WeightScheme::Uniform));
    Some(Mutant {
        model: UnawarenessModel {
            lattice: lat.clone(),
            correspondence: m.correspondence.as_ref().map(|_| c.clone()),
            preferences,
            events: m.events.clone(),
        },
        kind,
        state: lat.state_name(w).to_owned(),
    })
}

/// One random applicable mutation, or `None` if no class applies.
pub fn mutate_model(m: &UnawarenessModel, seed: u64) -> Option<Mutant> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut kinds = MutationKind::ALL.to_vec();
    kinds.shuffle(&mut rng);
    kinds.into_iter().find_map(|k| mutate_with(m, k, &mut rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epistemics::validate_possibility;
    use crate::fixtures;
    use crate::harness::{generate_model, GenConfig, Shape};

    #[test]
    fn every_class_breaks_its_target() {
        let mut seen = std::collections::BTreeSet::new();
        for seed in 0..60 {
            let shape = [Shape::Chain, Shape::Diamond, Shape::Random][seed as usize % 3];
            let m = generate_model(&GenConfig { shape, ..GenConfig::default() }.with_seed(seed)).unwrap();
            for kind in MutationKind::ALL {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let Some(mu) = mutate_with(&m, kind, &mut rng) else {
                    continue;
                };
                seen.insert(kind);
                let c = mu.model.possibility().unwrap();
                let report = validate_possibility(&mu.model.lattice, &c);
                assert!(
                    kind.targets().iter().any(|&p| !report.holds(p)),
                    "{kind} at {} on seed {seed}: {report}",
                    mu.state
                );
                if let Some(p) = &mu.model.preferences {
                    assert_eq!(derive_possibility(&mu.model.lattice, p), c);
                }
            }
        }
        assert_eq!(seen.len(), MutationKind::ALL.len());
    }

    #[test]
    fn inapplicable_classes_return_none() {
        let m = fixtures::m1();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(mutate_with(&m, MutationKind::DesyncLift, &mut rng).is_none());
        let bare = UnawarenessModel {
            preferences: None,
            ..m
        };
        assert!(mutate_with(&bare, MutationKind::ZeroWeights, &mut rng).is_none());
        assert!(mutate_model(&bare, 3).is_some());
    }
}
