//! Events and their algebra.
//!
//! An event is a base set inside one space together with that space; its
//! members are all extensions of the base to spaces at least as expressive.
//! Empty events keep their space, so `∅^Sa` and `∅^Sb` are different values.

use std::fmt;

use crate::lattice::{Lattice, LatticeError, SpaceId, StateId};
use crate::stateset::StateSet;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Event {
    space: SpaceId,
    base: StateSet,
}

impl Event {
    pub fn space(&self) -> SpaceId {
        self.space
    }

    pub fn base(&self) -> &StateSet {
        &self.base
    }

    /// True for the vacuous events `∅^S`.
    pub fn is_vacuous(&self) -> bool {
        self.base.is_empty()
    }

    /// Renders the event as `Space{s1,s2}` using the lattice's names.
    pub fn display<'a>(&'a self, lat: &'a Lattice) -> EventDisplay<'a> {
        EventDisplay { event: self, lat }
    }
}

pub struct EventDisplay<'a> {
    event: &'a Event,
    lat: &'a Lattice,
}

impl fmt::Display for EventDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{", self.lat.space_name(self.event.space))?;
        for (i, s) in self.event.base.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(self.lat.state_name(s))?;
        }
        f.write_str("}")
    }
}

impl Lattice {
    /// The event with base `base` in `space`.
    pub fn up_closure(&self, base: &StateSet, space: SpaceId) -> Result<Event, LatticeError> {
        if !base.is_subset(self.space_set(space)) {
            return Err(LatticeError::BaseOutsideSpace(
                self.space_name(space).to_owned(),
            ));
        }
        Ok(Event {
            space,
            base: base.clone(),
        })
    }

    /// The event `space↑` whose base is the whole space.
    pub fn full_event(&self, space: SpaceId) -> Event {
        Event {
            space,
            base: self.space_set(space).clone(),
        }
    }

    /// `∅^space`.
    pub fn vacuous(&self, space: SpaceId) -> Event {
        Event {
            space,
            base: StateSet::new(),
        }
    }

    /// Ω as an event: the full event of the least space.
    pub fn omega(&self) -> Event {
        self.full_event(self.bottom())
    }

    /// The `space`-based event generated by the states of `members` lying
    /// in `space`. This is how operator outputs, which are computed as
    /// plain state sets, become events.
    pub fn based_event(&self, members: &StateSet, space: SpaceId) -> Event {
        Event {
            space,
            base: members.intersection(self.space_set(space)),
        }
    }

    /// The set of states in the event.
    pub fn members(&self, event: &Event) -> StateSet {
        if event.base.is_empty() {
            return StateSet::new();
        }
        self.states()
            .filter(|&w| {
                self.try_project(w, event.space)
                    .is_some_and(|p| event.base.contains(p))
            })
            .collect()
    }

    pub fn contains(&self, event: &Event, state: StateId) -> bool {
        self.try_project(state, event.space)
            .is_some_and(|p| event.base.contains(p))
    }

    pub fn negate(&self, event: &Event) -> Event {
        Event {
            space: event.space,
            base: self.space_set(event.space).difference(&event.base),
        }
    }

    /// Conjunction: intersection of members, based in the sup of the spaces.
    ///
    /// # Panics
    /// On an empty family.
    pub fn conjoin<'a, I>(&self, events: I) -> Event
    where
        I: IntoIterator<Item = &'a Event>,
    {
        let events: Vec<&Event> = events.into_iter().collect();
        let space = self
            .sup_space(events.iter().map(|e| e.space))
            .expect("conjunction of an empty family");
        let base = self
            .states_of(space)
            .iter()
            .copied()
            .filter(|&w| events.iter().all(|e| self.contains(e, w)))
            .collect();
        Event { space, base }
    }

    /// Disjunction through de Morgan: `¬⋀¬E`.
    pub fn disjoin<'a, I>(&self, events: I) -> Event
    where
        I: IntoIterator<Item = &'a Event>,
    {
        let negated: Vec<Event> = events.into_iter().map(|e| self.negate(e)).collect();
        self.negate(&self.conjoin(&negated))
    }

    /// `E ⊆ F` between events: inclusion of members for nonempty `E`, and
    /// `S(E) ⪰ S(F)` for a vacuous `E`.
    pub fn event_subset(&self, e: &Event, f: &Event) -> bool {
        if e.is_vacuous() {
            return self.leq(f.space, e.space);
        }
        self.members(e).is_subset(&self.members(f))
    }

    /// Every event of the lattice: all subsets of every space.
    pub fn all_events(&self) -> Vec<Event> {
        let mut out = Vec::new();
        for space in self.spaces() {
            let states = self.states_of(space);
            assert!(states.len() < 32, "space too large to enumerate");
            for mask in 0u32..(1 << states.len()) {
                let base = states
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &s)| s)
                    .collect();
                out.push(Event { space, base });
            }
        }
        out
    }
}
