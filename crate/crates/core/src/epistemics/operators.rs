use crate::event::Event;
use crate::lattice::Lattice;
use crate::stateset::StateSet;

use super::{validate_possibility, Correspondence, EpistemicError};

/// Knowledge, awareness and unawareness operators over one correspondence.
///
/// [`Knowledge::new`] refuses correspondences that fail validation;
/// [`Knowledge::unchecked`] evaluates the operator definitions on any
/// correspondence, which is what the proposition suites use to show which
/// laws break on invalid inputs.
#[derive(Debug, Clone, Copy)]
pub struct Knowledge<'a> {
    lat: &'a Lattice,
    pi: &'a Correspondence,
}

/// Result of iterating `¬K` to its limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlausibilityFixpoint {
    pub event: Event,
    /// Number of accumulation steps in which the running conjunction
    /// strictly shrank after the first term.
    pub shrink_steps: usize,
    /// Number of distinct iterates visited before the sequence repeated.
    pub iterates: usize,
}

impl<'a> Knowledge<'a> {
    pub fn new(lat: &'a Lattice, pi: &'a Correspondence) -> Result<Self, EpistemicError> {
        let report = validate_possibility(lat, pi);
        if !report.is_valid() {
            return Err(EpistemicError::Invalid(report));
        }
        Ok(Knowledge { lat, pi })
    }

    pub fn unchecked(lat: &'a Lattice, pi: &'a Correspondence) -> Self {
        Knowledge { lat, pi }
    }

    pub fn lattice(&self) -> &'a Lattice {
        self.lat
    }

    pub fn correspondence(&self) -> &'a Correspondence {
        self.pi
    }

    /// `{ω : Π(ω) ⊆ members}` as a plain set.
    pub fn knowing_states(&self, members: &StateSet) -> StateSet {
        self.lat
            .states()
            .filter(|&w| self.pi.get(w).is_subset(members))
            .collect()
    }

    fn based_or_vacuous(&self, set: &StateSet, e: &Event) -> Event {
        if set.is_empty() {
            self.lat.vacuous(e.space())
        } else {
            self.lat.based_event(set, e.space())
        }
    }

    pub fn know(&self, e: &Event) -> Event {
        let set = self.knowing_states(&self.lat.members(e));
        self.based_or_vacuous(&set, e)
    }

    pub fn aware(&self, e: &Event) -> Event {
        let expressible = self.lat.members(&self.lat.full_event(e.space()));
        let set = self.knowing_states(&expressible);
        self.based_or_vacuous(&set, e)
    }

    pub fn unaware(&self, e: &Event) -> Event {
        self.lat.negate(&self.aware(e))
    }

    /// `¬K(E) ∩ ¬K¬K(E)`.
    pub fn unaware_mr(&self, e: &Event) -> Event {
        let not_k = self.lat.negate(&self.know(e));
        let not_k_not_k = self.lat.negate(&self.know(&not_k));
        self.lat.conjoin([&not_k, &not_k_not_k])
    }

    /// `⋂_{n≥1} (¬K)^n(E)`, computed by iterating `F ↦ ¬K(F)` until an
    /// iterate repeats. The conjunction over all iterates seen so far is
    /// then the conjunction over the whole infinite sequence.
    pub fn strong_plausibility(&self, e: &Event) -> PlausibilityFixpoint {
        let step = |f: &Event| self.lat.negate(&self.know(f));
        let mut current = step(e);
        let mut seen = vec![current.clone()];
        let mut acc = current.clone();
        let mut shrink_steps = 0;
        loop {
            current = step(&current);
            if seen.contains(&current) {
                break;
            }
            let next = self.lat.conjoin([&acc, &current]);
            if self.lat.members(&next) != self.lat.members(&acc) {
                shrink_steps += 1;
            }
            acc = next;
            seen.push(current.clone());
        }
        PlausibilityFixpoint {
            event: acc,
            shrink_steps,
            iterates: seen.len(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lattice::SpaceId;

    fn ev(lat: &Lattice, space: &str, states: &[&str]) -> Event {
        let s = lat.space_by_name(space).unwrap();
        let base = states.iter().map(|n| lat.state_by_name(n).unwrap()).collect();
        lat.up_closure(&base, s).unwrap()
    }

    fn sb(lat: &Lattice) -> SpaceId {
        lat.space_by_name("Sb").unwrap()
    }

    #[test]
    fn knowledge_in_m1() {
        let m = fixtures::m1();
        let lat = &m.lattice;
        let k = Knowledge::new(lat, m.correspondence.as_ref().unwrap()).unwrap();
        let b1 = ev(lat, "Sb", &["b1"]);
        assert_eq!(k.know(&lat.omega()), lat.omega());
        assert_eq!(k.know(&b1), lat.vacuous(sb(lat)));
        assert_eq!(k.aware(&b1), lat.vacuous(sb(lat)));
        assert_eq!(k.unaware(&b1), lat.full_event(sb(lat)));
        assert_eq!(k.unaware_mr(&b1), k.unaware(&b1));
        assert_eq!(k.strong_plausibility(&b1).event, k.unaware(&b1));
    }

    #[test]
    fn knowledge_in_m2() {
        let m = fixtures::m2();
        let lat = &m.lattice;
        let k = Knowledge::new(lat, m.correspondence.as_ref().unwrap()).unwrap();
        let b1 = ev(lat, "Sb", &["b1"]);
        assert_eq!(k.know(&b1), b1);
        assert_eq!(k.aware(&b1), lat.full_event(sb(lat)));
        assert_eq!(k.unaware(&b1), lat.vacuous(sb(lat)));
        assert_eq!(k.know(&lat.omega()), lat.omega());
    }

    #[test]
    fn operator_identities_on_fixtures() {
        for m in fixtures::all() {
            let lat = &m.lattice;
            let k = Knowledge::new(lat, m.correspondence.as_ref().unwrap()).unwrap();
            for e in lat.all_events() {
                assert_eq!(k.aware(&e), k.aware(&lat.negate(&e)));
                assert_eq!(k.know(&k.unaware(&e)), lat.vacuous(e.space()));
                assert_eq!(k.unaware_mr(&e), k.unaware(&e));
                let sp = k.strong_plausibility(&e);
                assert_eq!(sp.event, k.unaware(&e));
                assert!(sp.shrink_steps <= lat.state_count());
                let union = lat
                    .members(&k.know(&e))
                    .union(&lat.members(&k.know(&lat.negate(&k.know(&e)))));
                assert_eq!(lat.members(&k.aware(&e)), union);
            }
        }
    }

    #[test]
    fn invalid_correspondence_is_refused() {
        let m = fixtures::m1();
        let mut c = m.correspondence.clone().unwrap();
        c.set(m.lattice.state_by_name("b1").unwrap(), StateSet::new());
        assert!(matches!(
            Knowledge::new(&m.lattice, &c),
            Err(EpistemicError::Invalid(_))
        ));
    }
}
