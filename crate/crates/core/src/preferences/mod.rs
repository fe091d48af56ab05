//! Acts, state-dependent preferences and the correspondence they reveal.
//!
//! Preferences are weighted sums: at state ω an act `f` is evaluated as
//! `Σ w_ω(ω′)·f(ω′)` in exact rational arithmetic. Every "for some acts"
//! and "for all acts" clause then reduces to a test on the support of `w_ω`.

mod equivalence;
mod properties;

pub use equivalence::{check_preference_claim, check_preference_claims};
pub use properties::{check_pref_properties, PrefProperty, PrefPropertyReport};

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::epistemics::Correspondence;
use crate::event::Event;
use crate::lattice::{Lattice, StateId};
use crate::stateset::StateSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PreferenceError {
    #[error("preference model has {got} weight vectors but the lattice has {expected} states")]
    SizeMismatch { expected: usize, got: usize },
    #[error("weight vector of `{0}` has the wrong length")]
    RaggedWeights(String),
    #[error("negative weight at `{state}` for `{target}`")]
    NegativeWeight { state: String, target: String },
    #[error("grid too small: need at least two distinct values, got {0}")]
    GridTooSmall(usize),
}

/// A money prize for every state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Act {
    values: Vec<BigRational>,
}

impl Act {
    pub fn new(values: Vec<BigRational>) -> Self {
        Act { values }
    }

    pub fn constant(lat: &Lattice, value: BigRational) -> Self {
        Act {
            values: vec![value; lat.state_count()],
        }
    }

    pub fn get(&self, state: StateId) -> &BigRational {
        &self.values[state.index()]
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }
}

/// `f_E g`: `f` on the members of `E`, `g` on every other state, including
/// states that are in neither `E` nor `¬E`.
pub fn composite(lat: &Lattice, f: &Act, e: &Event, g: &Act) -> Act {
    let members = lat.members(e);
    Act {
        values: lat
            .states()
            .map(|w| {
                if members.contains(w) {
                    f.get(w).clone()
                } else {
                    g.get(w).clone()
                }
            })
            .collect(),
    }
}

/// `f_{ω}g`: `f` at `state`, `g` elsewhere.
pub fn composite_at_state(f: &Act, state: StateId, g: &Act) -> Act {
    let mut values = g.values.clone();
    values[state.index()] = f.get(state).clone();
    Act { values }
}

/// One nonnegative weight vector per state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PreferenceModel {
    weights: Vec<Vec<BigRational>>,
}

impl PreferenceModel {
    pub fn new(lat: &Lattice, weights: Vec<Vec<BigRational>>) -> Result<Self, PreferenceError> {
        let n = lat.state_count();
        if weights.len() != n {
            return Err(PreferenceError::SizeMismatch {
                expected: n,
                got: weights.len(),
            });
        }
        for (i, row) in weights.iter().enumerate() {
            let w = StateId::new(i);
            if row.len() != n {
                return Err(PreferenceError::RaggedWeights(lat.state_name(w).to_owned()));
            }
            if let Some(j) = row.iter().position(|x| x.is_negative()) {
                return Err(PreferenceError::NegativeWeight {
                    state: lat.state_name(w).to_owned(),
                    target: lat.state_name(StateId::new(j)).to_owned(),
                });
            }
        }
        Ok(PreferenceModel { weights })
    }

    pub fn state_count(&self) -> usize {
        self.weights.len()
    }

    /// `w_state(target)`.
    pub fn weight(&self, state: StateId, target: StateId) -> &BigRational {
        &self.weights[state.index()][target.index()]
    }

    pub fn weights(&self, state: StateId) -> &[BigRational] {
        &self.weights[state.index()]
    }

    pub fn set_weight(&mut self, state: StateId, target: StateId, value: BigRational) {
        assert!(!value.is_negative(), "weights are nonnegative");
        self.weights[state.index()][target.index()] = value;
    }

    pub fn support(&self, state: StateId) -> StateSet {
        self.weights[state.index()]
            .iter()
            .enumerate()
            .filter(|(_, x)| x.is_positive())
            .map(|(i, _)| StateId::new(i))
            .collect()
    }

    /// `Σ w_state(ω′)·f(ω′)`.
    pub fn value(&self, state: StateId, f: &Act) -> BigRational {
        self.weights[state.index()]
            .iter()
            .zip(f.values())
            .filter(|(w, _)| !w.is_zero())
            .map(|(w, x)| w * x)
            .sum()
    }

    /// How `f` compares with `g` at `state`: `Greater` is strict preference.
    pub fn compare(&self, state: StateId, f: &Act, g: &Act) -> Ordering {
        self.value(state, f).cmp(&self.value(state, g))
    }

    /// `E` is null at `state`: no act ever distinguishes on `E`.
    pub fn is_null(&self, lat: &Lattice, state: StateId, e: &Event) -> bool {
        self.support(state).is_disjoint(&lat.members(e))
    }

    pub(crate) fn drop_states(&self, keep: &[StateId]) -> PreferenceModel {
        PreferenceModel {
            weights: keep
                .iter()
                .map(|&w| keep.iter().map(|&t| self.weight(w, t).clone()).collect())
                .collect(),
        }
    }
}

/// `Π̃(ω) = support(w_ω)`.
pub fn derive_possibility(lat: &Lattice, p: &PreferenceModel) -> Correspondence {
    Correspondence::new(lat, lat.states().map(|w| p.support(w)).collect())
        .expect("one support per state")
}

/// Decide `Π̃` straight from its definition: `ω′ ∈ Π̃(ω)` iff some acts
/// `f`, `h` with values in `grid` make `f_{ω′}g` strictly better than
/// `h_{ω′}g` at ω, with `g` the constant act at the least grid value.
pub fn brute_force_pi(
    lat: &Lattice,
    p: &PreferenceModel,
    grid: &[BigRational],
) -> Result<Correspondence, PreferenceError> {
    let distinct = distinct_values(grid);
    if distinct.len() < 2 {
        return Err(PreferenceError::GridTooSmall(distinct.len()));
    }
    Ok(grid_search(lat, p, &distinct))
}

fn distinct_values(grid: &[BigRational]) -> Vec<BigRational> {
    let mut v = grid.to_vec();
    v.sort();
    v.dedup();
    v
}

pub(crate) fn grid_search(lat: &Lattice, p: &PreferenceModel, grid: &[BigRational]) -> Correspondence {
    let Some(low) = grid.iter().min() else {
        return Correspondence::new(lat, vec![StateSet::new(); lat.state_count()])
            .expect("sized to the lattice");
    };
    let g = Act::constant(lat, low.clone());
    let pi = lat
        .states()
        .map(|w| {
            lat.states()
                .filter(|&target| {
                    grid.iter().any(|fv| {
                        grid.iter().any(|hv| {
                            let f = composite_at_state(&Act::constant(lat, fv.clone()), target, &g);
                            let h = composite_at_state(&Act::constant(lat, hv.clone()), target, &g);
                            p.compare(w, &f, &h) == Ordering::Greater
                        })
                    })
                })
                .collect()
        })
        .collect();
    Correspondence::new(lat, pi).expect("sized to the lattice")
}

/// Like [`brute_force_pi`] but with the background act `g` ranging over
/// every act with values in `grid`. Exponential in the number of states.
pub fn brute_force_pi_free_background(
    lat: &Lattice,
    p: &PreferenceModel,
    grid: &[BigRational],
) -> Result<Correspondence, PreferenceError> {
    let grid = distinct_values(grid);
    if grid.len() < 2 {
        return Err(PreferenceError::GridTooSmall(grid.len()));
    }
    let n = lat.state_count();
    assert!(n <= 8, "free-background search is limited to small models");
    let backgrounds: Vec<Act> = (0..grid.len().pow(n as u32))
        .map(|mut code| {
            Act::new(
                (0..n)
                    .map(|_| {
                        let v = grid[code % grid.len()].clone();
                        code /= grid.len();
                        v
                    })
                    .collect(),
            )
        })
        .collect();
    let pi = lat
        .states()
        .map(|w| {
            lat.states()
                .filter(|&target| {
                    backgrounds.iter().any(|g| {
                        grid.iter().any(|fv| {
                            grid.iter().any(|hv| {
                                let f = composite_at_state(&Act::constant(lat, fv.clone()), target, g);
                                let h = composite_at_state(&Act::constant(lat, hv.clone()), target, g);
                                p.compare(w, &f, &h) == Ordering::Greater
                            })
                        })
                    })
                })
                .collect()
        })
        .collect();
    Ok(Correspondence::new(lat, pi).expect("sized to the lattice"))
}

/// Which preference-based operator to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EpistemicKind {
    Knows,
    Aware,
    Unaware,
}

/// The preference-based knowledge, awareness or unawareness event of `E`.
///
/// At ω: knows when `¬E` is null and `E` is not; aware when `E` or `¬E`
/// is not null; unaware when both are null. The qualifying states form an
/// `S(E)`-based event, or `∅^{S(E)}` when there are none.
pub fn pref_epistemic(lat: &Lattice, p: &PreferenceModel, kind: EpistemicKind, e: &Event) -> Event {
    let members = lat.members(e);
    let not_members = lat.members(&lat.negate(e));
    let set: StateSet = lat
        .states()
        .filter(|&w| {
            let support = p.support(w);
            let e_null = support.is_disjoint(&members);
            let not_e_null = support.is_disjoint(&not_members);
            match kind {
                EpistemicKind::Knows => not_e_null && !e_null,
                EpistemicKind::Aware => !e_null || !not_e_null,
                EpistemicKind::Unaware => e_null && not_e_null,
            }
        })
        .collect();
    if set.is_empty() {
        lat.vacuous(e.space())
    } else {
        lat.based_event(&set, e.space())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WeightScheme {
    /// `1/|Π(ω)|` on every possible state.
    Uniform,
    /// Seeded positive rationals on every possible state.
    SeededRandom(u64),
}

/// A weighted model whose support at ω is exactly `Π(ω)`.
pub fn induce_preferences(lat: &Lattice, c: &Correspondence, scheme: WeightScheme) -> PreferenceModel {
    let n = lat.state_count();
    let mut rng = match scheme {
        WeightScheme::SeededRandom(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        WeightScheme::Uniform => None,
    };
    let weights = lat
        .states()
        .map(|w| {
            let value = c.get(w);
            let mut row = vec![BigRational::zero(); n];
            for t in value.iter() {
                row[t.index()] = match rng.as_mut() {
                    None => BigRational::new(One::one(), (value.len() as u64).into()),
                    Some(rng) => BigRational::new(
                        rng.gen_range(1u64..=9).into(),
                        rng.gen_range(1u64..=6).into(),
                    ),
                };
            }
            row
        })
        .collect();
    PreferenceModel { weights }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn indicator(lat: &Lattice, s: StateId) -> Act {
        composite_at_state(&Act::constant(lat, q(1)), s, &Act::constant(lat, q(0)))
    }

    #[test]
    fn comparisons_on_fixtures() {
        let m2 = fixtures::m2();
        let lat = &m2.lattice;
        let p = m2.preferences.as_ref().unwrap();
        let b1 = lat.state_by_name("b1").unwrap();
        let one = Act::constant(lat, q(1));
        let zero = Act::constant(lat, q(0));
        assert_eq!(p.compare(b1, &one, &one), Ordering::Equal);
        assert_eq!(p.compare(b1, &one, &zero), Ordering::Greater);

        let m1 = fixtures::m1();
        let p = m1.preferences.as_ref().unwrap();
        let f = indicator(&m1.lattice, b1);
        assert_eq!(p.compare(b1, &f, &zero), Ordering::Equal);
    }

    #[test]
    fn composites_in_m1() {
        let m = fixtures::m1();
        let lat = &m.lattice;
        let one = Act::constant(lat, q(1));
        let zero = Act::constant(lat, q(0));
        assert_eq!(composite(lat, &one, &lat.omega(), &zero), one);
        let sb = lat.space_by_name("Sb").unwrap();
        assert_eq!(composite(lat, &one, &lat.vacuous(sb), &zero), zero);
        let b1 = lat.state_by_name("b1").unwrap();
        let e = lat.up_closure(&StateSet::singleton(b1), sb).unwrap();
        let h = composite(lat, &one, &e, &zero);
        let names: Vec<&str> = lat
            .states()
            .filter(|&w| h.get(w) == &q(1))
            .map(|w| lat.state_name(w))
            .collect();
        assert_eq!(names, ["b1"]);
        assert_eq!(composite_at_state(&one, b1, &zero), h);
        assert_eq!(composite_at_state(&one, b1, &one), one);
    }

    #[test]
    fn composite_at_state_agrees_on_own_space() {
        let m = fixtures::m1();
        let lat = &m.lattice;
        let one = Act::constant(lat, q(1));
        let zero = Act::constant(lat, q(0));
        for w in lat.states() {
            let e = lat.up_closure(&StateSet::singleton(w), lat.space_of(w)).unwrap();
            let a = composite(lat, &one, &e, &zero);
            let b = composite_at_state(&one, w, &zero);
            for &s in lat.states_of(lat.space_of(w)) {
                assert_eq!(a.get(s), b.get(s));
            }
            for s in lat.states() {
                if a.get(s) != b.get(s) {
                    assert!(lat.leq(lat.space_of(w), lat.space_of(s)) && s != w);
                }
            }
        }
    }

    #[test]
    fn derived_correspondence_matches_fixtures() {
        for m in [fixtures::m1(), fixtures::m2()] {
            let p = m.preferences.as_ref().unwrap();
            assert_eq!(&derive_possibility(&m.lattice, p), m.correspondence.as_ref().unwrap());
        }
    }

    #[test]
    fn zero_weights_give_empty_values() {
        let lat = fixtures::m1_lattice();
        let n = lat.state_count();
        let p = PreferenceModel::new(&lat, vec![vec![q(0); n]; n]).unwrap();
        let c = derive_possibility(&lat, &p);
        assert!(c.iter().all(|(_, v)| v.is_empty()));
    }

    #[test]
    fn oracle_on_fixtures() {
        let grid = [q(0), q(1)];
        for m in fixtures::all() {
            let p = m.preferences.as_ref().unwrap();
            let direct = derive_possibility(&m.lattice, p);
            assert_eq!(brute_force_pi(&m.lattice, p, &grid).unwrap(), direct);
            if m.lattice.state_count() <= 6 {
                assert_eq!(
                    brute_force_pi_free_background(&m.lattice, p, &grid).unwrap(),
                    direct
                );
            }
        }
    }

    #[test]
    fn single_value_grid() {
        let m = fixtures::m2();
        let p = m.preferences.as_ref().unwrap();
        assert_eq!(
            brute_force_pi(&m.lattice, p, &[q(0), q(0)]),
            Err(PreferenceError::GridTooSmall(1))
        );
        let c = grid_search(&m.lattice, p, &[q(0)]);
        assert!(c.iter().all(|(_, v)| v.is_empty()));
    }

    #[test]
    fn null_events() {
        let m1 = fixtures::m1();
        let lat = &m1.lattice;
        let sb = lat.space_by_name("Sb").unwrap();
        let b1 = lat.state_by_name("b1").unwrap();
        let b2 = lat.state_by_name("b2").unwrap();
        let e1 = lat.up_closure(&StateSet::singleton(b1), sb).unwrap();
        let e2 = lat.up_closure(&StateSet::singleton(b2), sb).unwrap();
        let p = m1.preferences.as_ref().unwrap();
        assert!(p.is_null(lat, b1, &lat.vacuous(sb)));
        assert!(p.is_null(lat, b1, &e1) && p.is_null(lat, b1, &e2));
        let m2 = fixtures::m2();
        let p = m2.preferences.as_ref().unwrap();
        assert!(p.is_null(lat, b1, &e2));
        assert!(!p.is_null(lat, b1, &e1));
    }

    #[test]
    fn preference_operators_on_fixtures() {
        let m2 = fixtures::m2();
        let lat = &m2.lattice;
        let sb = lat.space_by_name("Sb").unwrap();
        let b1 = lat.state_by_name("b1").unwrap();
        let e = lat.up_closure(&StateSet::singleton(b1), sb).unwrap();
        let p = m2.preferences.as_ref().unwrap();
        assert_eq!(pref_epistemic(lat, p, EpistemicKind::Knows, &e), e);

        let m1 = fixtures::m1();
        let p = m1.preferences.as_ref().unwrap();
        let u = pref_epistemic(lat, p, EpistemicKind::Unaware, &e);
        assert_eq!(u, lat.full_event(sb));
    }

    #[test]
    fn induced_supports_round_trip() {
        for m in fixtures::all() {
            let c = m.correspondence.as_ref().unwrap();
            for scheme in [WeightScheme::Uniform, WeightScheme::SeededRandom(3)] {
                let p = induce_preferences(&m.lattice, c, scheme);
                assert_eq!(&derive_possibility(&m.lattice, &p), c);
            }
        }
    }

    #[test]
    fn negative_weights_are_rejected() {
        let lat = fixtures::m1_lattice();
        let n = lat.state_count();
        let mut w = vec![vec![q(0); n]; n];
        w[0][1] = q(-1);
        assert!(matches!(
            PreferenceModel::new(&lat, w),
            Err(PreferenceError::NegativeWeight { .. })
        ));
    }
}
