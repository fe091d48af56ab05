//! Randomized counterexample search with greedy shrinking.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::epistemics::{Correspondence, SuiteConfig};
use crate::lattice::{Lattice, RawLattice, RawProjection, RawSpace, StateId};
use crate::model::UnawarenessModel;
use crate::report::{ClaimId, ClaimResult};
use crate::stateset::StateSet;

use super::{generate_model, mutate_model, run_suite, GenConfig, GenError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    /// Generated models as they are.
    Valid,
    /// One random mutation of each generated model.
    Mutants,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    /// Index of the first failing trial.
    pub trial: u64,
    /// Generator seed of that trial.
    pub seed: u64,
    /// The failing model after shrinking.
    pub model: UnawarenessModel,
    pub result: ClaimResult,
}

fn trial_seed(base: u64, trial: u64) -> u64 {
    base ^ trial.wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(17)
}

fn check(m: &UnawarenessModel, claim: ClaimId, suite: SuiteConfig) -> ClaimResult {
    run_suite(m, &[claim], suite).results.remove(0)
}

fn candidate(cfg: &GenConfig, mode: SearchMode, seed: u64) -> Option<UnawarenessModel> {
    let m = generate_model(&cfg.with_seed(seed)).ok()?;
    match mode {
        SearchMode::Valid => Some(m),
        SearchMode::Mutants => mutate_model(&m, seed).map(|mu| mu.model),
    }
}

/// Search `trials` generated models for one on which `claim` fails. The
/// lowest failing trial wins regardless of scheduling, and the model is
/// shrunk before it is returned.
pub fn search_counterexample(
    cfg: &GenConfig,
    claim: ClaimId,
    trials: u64,
    mode: SearchMode,
) -> Result<Option<Counterexample>, GenError> {
    cfg.validate()?;
    let suite = SuiteConfig::default();
    let found = (0..trials).into_par_iter().find_map_first(|trial| {
        let seed = trial_seed(cfg.seed, trial);
        let m = candidate(cfg, mode, seed)?;
        check(&m, claim, suite)
            .failed()
            .then_some((trial, seed, m))
    });
    Ok(found.map(|(trial, seed, m)| {
        let model = shrink(&m, |c| check(c, claim, suite).failed());
        let result = check(&model, claim, suite);
        Counterexample {
            trial,
            seed,
            model,
            result,
        }
    }))
}

/// The sub-lattice on the states in `keep`, or `None` if the restriction
/// is not a lattice.
fn restrict_lattice(lat: &Lattice, keep: &StateSet) -> Option<Lattice> {
    let spaces: Vec<RawSpace> = lat
        .spaces()
        .filter_map(|s| {
            let states: Vec<String> = lat
                .states_of(s)
                .iter()
                .filter(|w| keep.contains(**w))
                .map(|&w| lat.state_name(w).to_owned())
                .collect();
            (!states.is_empty()).then(|| RawSpace {
                name: lat.space_name(s).to_owned(),
                states,
            })
        })
        .collect();
    let live: BTreeSet<&str> = spaces.iter().map(|s| s.name.as_str()).collect();
    let mut order = Vec::new();
    let mut projections = Vec::new();
    for hi in lat.spaces() {
        for lo in lat.spaces() {
            let (h, l) = (lat.space_name(hi), lat.space_name(lo));
            if hi == lo || !lat.leq(lo, hi) || !live.contains(h) || !live.contains(l) {
                continue;
            }
            order.push((l.to_owned(), h.to_owned()));
            let map = lat
                .states_of(hi)
                .iter()
                .filter(|w| keep.contains(**w))
                .map(|&w| {
                    let p = lat.try_project(w, lo)?;
                    keep.contains(p)
                        .then(|| (lat.state_name(w).to_owned(), lat.state_name(p).to_owned()))
                })
                .collect::<Option<Vec<_>>>()?;
            projections.push(RawProjection {
                from: h.to_owned(),
                to: l.to_owned(),
                map,
            });
        }
    }
    Lattice::new(&RawLattice {
        spaces,
        order,
        projections,
    })
    .ok()
}

/// Restrict the model to the states in `keep`. Possibility values and
/// weights are cut down to the remaining states; named events are dropped.
fn restrict(m: &UnawarenessModel, keep: &StateSet) -> Option<UnawarenessModel> {
    let old = &m.lattice;
    let lat = restrict_lattice(old, keep)?;
    let to_old: Vec<StateId> = lat
        .states()
        .map(|w| old.state_by_name(lat.state_name(w)).expect("kept state"))
        .collect();
    let to_new = |s: StateId| lat.state_by_name(old.state_name(s));
    let correspondence = m.correspondence.as_ref().map(|c| {
        let pi = to_old
            .iter()
            .map(|&w| c.get(w).iter().filter_map(to_new).collect())
            .collect();
        Correspondence::new(&lat, pi).expect("one value per kept state")
    });
    let preferences = m.preferences.as_ref().map(|p| p.drop_states(&to_old));
    Some(UnawarenessModel {
        lattice: lat,
        correspondence,
        preferences,
        events: Vec::new(),
    })
}

/// Greedily remove whole spaces, single states, or a state together with
/// everything that projects onto it, while `fails` keeps holding. The
/// result is locally minimal: no single removal that yields a lattice
/// preserves the failure.
pub fn shrink<F>(m: &UnawarenessModel, fails: F) -> UnawarenessModel
where
    F: Fn(&UnawarenessModel) -> bool,
{
    let mut current = m.clone();
    if !current.events.is_empty() {
        let bare = UnawarenessModel {
            events: Vec::new(),
            ..current.clone()
        };
        if fails(&bare) {
            current = bare;
        }
    }
    'outer: loop {
        let lat = &current.lattice;
        let all = lat.all_states();
        let mut removals: Vec<StateSet> = lat.spaces().map(|s| lat.space_set(s).clone()).collect();
        removals.extend(lat.states().map(StateSet::singleton));
        // A lower state can only go together with the states above it.
        removals.extend(lat.states().map(|w| lat.up_set(&StateSet::singleton(w))));
        for r in removals {
            let keep = all.difference(&r);
            if keep.is_empty() {
                continue;
            }
            if let Some(next) = restrict(&current, &keep) {
                if fails(&next) {
                    current = next;
                    continue 'outer;
                }
            }
        }
        return current;
    }
}
