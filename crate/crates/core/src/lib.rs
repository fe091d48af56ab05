//! Finite unawareness structures: a lattice of state-spaces, the event
//! algebra over it, possibility correspondences with their knowledge and
//! awareness operators, and the preference-based layer that reveals a
//! correspondence from state-dependent preferences.

pub mod dsl;
pub mod epistemics;
pub mod event;
pub mod fixtures;
pub mod harness;
pub mod lattice;
pub mod model;
pub mod preferences;
pub mod report;
pub mod stateset;

pub use event::Event;
pub use lattice::{Lattice, SpaceId, StateId};
pub use model::UnawarenessModel;
pub use report::{ClaimId, ClaimResult, SuiteReport, Verdict, Witness};
pub use stateset::StateSet;
