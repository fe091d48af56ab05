//! The unit of parsing, validation and querying.

use thiserror::Error;

use crate::dsl::EventExpr;
use crate::epistemics::{Correspondence, EpistemicError, Knowledge};
use crate::event::Event;
use crate::lattice::Lattice;
use crate::preferences::{derive_possibility, pref_epistemic, EpistemicKind, PreferenceModel};

/// A lattice with an optional correspondence, optional preferences and
/// named event expressions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnawarenessModel {
    pub lattice: Lattice,
    pub correspondence: Option<Correspondence>,
    pub preferences: Option<PreferenceModel>,
    pub events: Vec<(String, EventExpr)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("K, A and U need a correspondence or a preference model")]
    NoEpistemicData,
    #[error(transparent)]
    Epistemic(#[from] EpistemicError),
}

enum Operators<'a> {
    Possibility(Knowledge<'a>),
    Preference(&'a PreferenceModel),
    None,
}

impl UnawarenessModel {
    pub fn lattice_only(lattice: Lattice) -> Self {
        UnawarenessModel {
            lattice,
            correspondence: None,
            preferences: None,
            events: Vec::new(),
        }
    }

    /// The stated correspondence, or the one revealed by the preferences.
    pub fn possibility(&self) -> Option<Correspondence> {
        self.correspondence.clone().or_else(|| {
            self.preferences
                .as_ref()
                .map(|p| derive_possibility(&self.lattice, p))
        })
    }

    pub fn has_epistemic_data(&self) -> bool {
        self.correspondence.is_some() || self.preferences.is_some()
    }

    pub fn event(&self, name: &str) -> Option<&EventExpr> {
        self.events.iter().find(|(n, _)| n == name).map(|(_, e)| e)
    }

    /// Evaluate an expression. K, A and U use the correspondence when the
    /// model has one (which must then be valid) and the preference-based
    /// operators otherwise.
    pub fn evaluate(&self, expr: &EventExpr) -> Result<Event, EvalError> {
        let ops = match (&self.correspondence, &self.preferences) {
            (Some(c), _) if expr.uses_operators() => {
                Operators::Possibility(Knowledge::new(&self.lattice, c)?)
            }
            (None, Some(p)) => Operators::Preference(p),
            _ => Operators::None,
        };
        self.eval_with(&ops, expr)
    }

    fn eval_with(&self, ops: &Operators<'_>, expr: &EventExpr) -> Result<Event, EvalError> {
        let lat = &self.lattice;
        Ok(match expr {
            EventExpr::Omega => lat.omega(),
            EventExpr::Up { space, states } => lat
                .up_closure(states, *space)
                .expect("bound expressions stay inside their space"),
            EventExpr::Not(e) => lat.negate(&self.eval_with(ops, e)?),
            EventExpr::And(es) => {
                let evs = es
                    .iter()
                    .map(|e| self.eval_with(ops, e))
                    .collect::<Result<Vec<_>, _>>()?;
                lat.conjoin(&evs)
            }
            EventExpr::Or(es) => {
                let evs = es
                    .iter()
                    .map(|e| self.eval_with(ops, e))
                    .collect::<Result<Vec<_>, _>>()?;
                lat.disjoin(&evs)
            }
            EventExpr::K(e) | EventExpr::A(e) | EventExpr::U(e) => {
                let inner = self.eval_with(ops, e)?;
                let kind = match expr {
                    EventExpr::K(_) => EpistemicKind::Knows,
                    EventExpr::A(_) => EpistemicKind::Aware,
                    _ => EpistemicKind::Unaware,
                };
                match ops {
                    Operators::Possibility(k) => match kind {
                        EpistemicKind::Knows => k.know(&inner),
                        EpistemicKind::Aware => k.aware(&inner),
                        EpistemicKind::Unaware => k.unaware(&inner),
                    },
                    Operators::Preference(p) => pref_epistemic(lat, p, kind, &inner),
                    Operators::None => return Err(EvalError::NoEpistemicData),
                }
            }
        })
    }
}
