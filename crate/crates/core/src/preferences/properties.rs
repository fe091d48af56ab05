//! The seven behavioral properties of a preference model.
//!
//! Every existential clause over acts reduces to "ω′ makes a difference at
//! ω", written `D(ω, ω′)` below, which holds iff `w_ω(ω′) > 0`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::epistemics::PropertyResult;
use crate::lattice::{Lattice, StateId};
use crate::report::Witness;
use crate::stateset::StateSet;

use super::PreferenceModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PrefProperty {
    /// States that make a difference at ω share one space.
    P1,
    /// States that make a difference at ω lie in spaces below `S_ω`.
    P2,
    /// Some projection of ω makes a difference at ω.
    P3,
    /// Making a difference is transitive.
    P4,
    /// Making a difference is Euclidean.
    P5,
    /// What matters at ω is an extension of something that matters at each projection of ω.
    P6,
    /// What matters at a projection of ω is the projection of what matters at ω.
    P7,
}

impl PrefProperty {
    pub const ALL: [PrefProperty; 7] = [
        PrefProperty::P1,
        PrefProperty::P2,
        PrefProperty::P3,
        PrefProperty::P4,
        PrefProperty::P5,
        PrefProperty::P6,
        PrefProperty::P7,
    ];

    pub fn number(self) -> u8 {
        self as u8 + 1
    }
}

impl fmt::Display for PrefProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Property {}", self.number())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrefPropertyReport {
    pub properties: Vec<PropertyResult<PrefProperty>>,
}

impl PrefPropertyReport {
    pub fn result(&self, p: PrefProperty) -> &PropertyResult<PrefProperty> {
        self.properties
            .iter()
            .find(|r| r.property == p)
            .expect("every property is reported")
    }

    pub fn holds(&self, p: PrefProperty) -> bool {
        self.result(p).passed()
    }

    pub fn all_hold(&self) -> bool {
        self.properties.iter().all(|r| r.passed())
    }

    pub fn failures(&self) -> impl Iterator<Item = (PrefProperty, &Witness)> {
        self.properties
            .iter()
            .filter_map(|r| r.witness.as_ref().map(|w| (r.property, w)))
    }
}

impl fmt::Display for PrefPropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fails: Vec<String> = self.failures().map(|(p, w)| format!("{p}: {w}")).collect();
        if fails.is_empty() {
            f.write_str("all properties hold")
        } else {
            f.write_str(&fails.join("; "))
        }
    }
}

struct Supports<'a> {
    lat: &'a Lattice,
    d: Vec<StateSet>,
}

impl Supports<'_> {
    fn of(&self, w: StateId) -> &StateSet {
        &self.d[w.index()]
    }

    fn name(&self, w: StateId) -> &str {
        self.lat.state_name(w)
    }

    fn p1(&self) -> Option<Witness> {
        let lat = self.lat;
        lat.states().find_map(|w| {
            let mut it = self.of(w).iter();
            let first = it.next()?;
            let other = it.find(|&v| lat.space_of(v) != lat.space_of(first))?;
            Some(
                Witness::new(format!(
                    "{} and {} both matter at {} but lie in different spaces",
                    self.name(first),
                    self.name(other),
                    self.name(w)
                ))
                .state(lat, w)
                .state(lat, first)
                .state(lat, other),
            )
        })
    }

    fn p2(&self) -> Option<Witness> {
        let lat = self.lat;
        lat.states().find_map(|w| {
            let v = self
                .of(w)
                .iter()
                .find(|&v| !lat.leq(lat.space_of(v), lat.space_of(w)))?;
            Some(
                Witness::new(format!(
                    "{} matters at {} but its space is not below {}",
                    self.name(v),
                    self.name(w),
                    lat.space_name(lat.space_of(w))
                ))
                .state(lat, w)
                .state(lat, v),
            )
        })
    }

    fn p3(&self) -> Option<Witness> {
        let lat = self.lat;
        lat.states().find_map(|w| {
            let found = lat
                .spaces_below(lat.space_of(w))
                .any(|s| lat.try_project(w, s).is_some_and(|p| self.of(w).contains(p)));
            (!found).then(|| {
                Witness::new(format!("no projection of {} matters at it", self.name(w))).state(lat, w)
            })
        })
    }

    fn p4(&self) -> Option<Witness> {
        let lat = self.lat;
        lat.states().find_map(|w| {
            self.of(w).iter().find_map(|v| {
                let x = self.of(v).difference(self.of(w)).first()?;
                Some(
                    Witness::new(format!(
                        "{} matters at {} and {} at {}, but {} does not matter at {}",
                        self.name(v),
                        self.name(w),
                        self.name(x),
                        self.name(v),
                        self.name(x),
                        self.name(w)
                    ))
                    .state(lat, w)
                    .state(lat, v)
                    .state(lat, x),
                )
            })
        })
    }

    fn p5(&self) -> Option<Witness> {
        let lat = self.lat;
        lat.states().find_map(|w| {
            self.of(w).iter().find_map(|v| {
                let x = self.of(w).difference(self.of(v)).first()?;
                Some(
                    Witness::new(format!(
                        "{} and {} matter at {}, but {} does not matter at {}",
                        self.name(v),
                        self.name(x),
                        self.name(w),
                        self.name(x),
                        self.name(v)
                    ))
                    .state(lat, w)
                    .state(lat, v)
                    .state(lat, x),
                )
            })
        })
    }

    fn p6(&self) -> Option<Witness> {
        let lat = self.lat;
        lat.states().find_map(|w| {
            lat.spaces_below(lat.space_of(w)).find_map(|s| {
                let p = lat.try_project(w, s)?;
                let reachable = lat.up_set(self.of(p));
                let v = self.of(w).difference(&reachable).first()?;
                Some(
                    Witness::new(format!(
                        "{} matters at {} but extends nothing that matters at {}",
                        self.name(v),
                        self.name(w),
                        self.name(p)
                    ))
                    .state(lat, w)
                    .state(lat, v)
                    .state(lat, p),
                )
            })
        })
    }

    fn p7(&self) -> Option<Witness> {
        let lat = self.lat;
        lat.states().find_map(|w| {
            self.of(w).iter().find_map(|v| {
                let middle = lat.space_of(v);
                if !lat.leq(middle, lat.space_of(w)) {
                    return None;
                }
                let in_middle = self.of(w).intersection(lat.space_set(middle));
                lat.spaces_below(middle).find_map(|s| {
                    let p = lat.try_project(w, s)?;
                    let projected = lat.project_set(&in_middle, s)?;
                    let x = projected
                        .difference(self.of(p))
                        .union(&self.of(p).difference(&projected))
                        .first()?;
                    Some(
                        Witness::new(format!(
                            "{} matters at {} iff it is the projection of something in {} that matters at {}: fails for {}",
                            self.name(x),
                            self.name(p),
                            lat.space_name(middle),
                            self.name(w),
                            self.name(x)
                        ))
                        .state(lat, w)
                        .state(lat, v)
                        .state(lat, p)
                        .state(lat, x),
                    )
                })
            })
        })
    }
}

/// Evaluate the seven properties exhaustively.
pub fn check_pref_properties(lat: &Lattice, p: &PreferenceModel) -> PrefPropertyReport {
    let s = Supports {
        lat,
        d: lat.states().map(|w| p.support(w)).collect(),
    };
    let properties = PrefProperty::ALL
        .iter()
        .map(|&property| PropertyResult {
            property,
            witness: match property {
                PrefProperty::P1 => s.p1(),
                PrefProperty::P2 => s.p2(),
                PrefProperty::P3 => s.p3(),
                PrefProperty::P4 => s.p4(),
                PrefProperty::P5 => s.p5(),
                PrefProperty::P6 => s.p6(),
                PrefProperty::P7 => s.p7(),
            },
        })
        .collect();
    PrefPropertyReport { properties }
}
