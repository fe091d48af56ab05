//! Claim identifiers, verdicts and witnesses shared by every checker.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::event::Event;
use crate::lattice::{Lattice, StateId};

/// Concrete evidence for a failed check, rendered with model names so it
/// can be printed or serialized without the lattice at hand.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub states: Vec<String>,
    pub events: Vec<String>,
    pub detail: String,
}

impl Witness {
    pub fn new(detail: impl Into<String>) -> Self {
        Witness {
            detail: detail.into(),
            ..Default::default()
        }
    }

    pub fn state(mut self, lat: &Lattice, s: StateId) -> Self {
        self.states.push(lat.state_name(s).to_owned());
        self
    }

    pub fn states<I: IntoIterator<Item = StateId>>(mut self, lat: &Lattice, it: I) -> Self {
        self.states
            .extend(it.into_iter().map(|s| lat.state_name(s).to_owned()));
        self
    }

    pub fn event(mut self, lat: &Lattice, e: &Event) -> Self {
        self.events.push(e.display(lat).to_string());
        self
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.detail)?;
        if !self.states.is_empty() {
            write!(f, " [states: {}]", self.states.join(", "))?;
        }
        if !self.events.is_empty() {
            write!(f, " [events: {}]", self.events.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    /// Preference property implies correspondence property.
    Forward,
    /// Correspondence property implies preference property.
    Backward,
}

/// Every checkable claim.
///
/// `Prop2(i)` is item `i` (1..=6) of the knowledge-operator laws, `Prop3(i)`
/// item `i` (1..=10) of the awareness laws. `FolkNegationComplement` is a
/// deliberately false claim kept to demonstrate counterexample search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum ClaimId {
    Prop1,
    Prop2(u8),
    Prop3(u8),
    Remark(u8),
    Lemma(u8, Direction),
    Lemma3Transitivity,
    Lemma3Euclideanness,
    Prop4(Direction),
    Prop5,
    Prop6,
    Cor1,
    MrEquivalence,
    AwareUnionForm,
    SpFixpoint,
    NullDecomposition,
    OracleAgreement,
    FolkNegationComplement,
}

const ROMAN: [&str; 6] = ["i", "ii", "iii", "iv", "v", "vi"];

impl ClaimId {
    /// The full registry, in reporting order.
    pub fn all() -> Vec<ClaimId> {
        let mut out = vec![ClaimId::Prop1];
        out.extend((1..=6).map(ClaimId::Prop2));
        out.extend((1..=10).map(ClaimId::Prop3));
        out.extend((1..=3).map(ClaimId::Remark));
        out.extend([
            ClaimId::MrEquivalence,
            ClaimId::AwareUnionForm,
            ClaimId::SpFixpoint,
        ]);
        for n in 1..=5 {
            out.push(ClaimId::Lemma(n, Direction::Forward));
            out.push(ClaimId::Lemma(n, Direction::Backward));
        }
        out.extend([
            ClaimId::Lemma3Transitivity,
            ClaimId::Lemma3Euclideanness,
            ClaimId::Prop4(Direction::Forward),
            ClaimId::Prop4(Direction::Backward),
            ClaimId::Prop5,
            ClaimId::Prop6,
            ClaimId::Cor1,
            ClaimId::NullDecomposition,
            ClaimId::OracleAgreement,
            ClaimId::FolkNegationComplement,
        ]);
        out
    }

    /// Claims that hold on every valid model (everything except the folk claim).
    pub fn theorems() -> Vec<ClaimId> {
        Self::all()
            .into_iter()
            .filter(|c| *c != ClaimId::FolkNegationComplement)
            .collect()
    }

    /// Claims about the possibility correspondence and its operators.
    pub fn epistemic() -> Vec<ClaimId> {
        Self::all()
            .into_iter()
            .filter(|c| c.needs_correspondence())
            .collect()
    }

    /// Claims that need a preference model.
    pub fn preference() -> Vec<ClaimId> {
        Self::all()
            .into_iter()
            .filter(|c| c.needs_preferences())
            .collect()
    }

    pub fn needs_correspondence(&self) -> bool {
        matches!(
            self,
            ClaimId::Prop1
                | ClaimId::Prop2(_)
                | ClaimId::Prop3(_)
                | ClaimId::Remark(_)
                | ClaimId::MrEquivalence
                | ClaimId::AwareUnionForm
                | ClaimId::SpFixpoint
        )
    }

    pub fn needs_preferences(&self) -> bool {
        !self.needs_correspondence() && *self != ClaimId::FolkNegationComplement
    }

    /// Biconditional claims whose premise includes "Property 1 holds".
    pub fn requires_property_one(&self) -> bool {
        matches!(self, ClaimId::Lemma(2 | 4 | 5, _))
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dir = |d: &Direction| match d {
            Direction::Forward => "fwd",
            Direction::Backward => "bwd",
        };
        match self {
            ClaimId::Prop1 => write!(f, "Prop1"),
            ClaimId::Prop2(i) => write!(f, "Prop2.{}", ROMAN[(*i as usize) - 1]),
            ClaimId::Prop3(i) => write!(f, "Prop3.{i}"),
            ClaimId::Remark(i) => write!(f, "Remark{i}"),
            ClaimId::Lemma(n, d) => write!(f, "Lemma{n}.{}", dir(d)),
            ClaimId::Lemma3Transitivity => write!(f, "Lemma3.trans"),
            ClaimId::Lemma3Euclideanness => write!(f, "Lemma3.eucl"),
            ClaimId::Prop4(d) => write!(f, "Prop4.{}", dir(d)),
            ClaimId::Prop5 => write!(f, "Prop5"),
            ClaimId::Prop6 => write!(f, "Prop6"),
            ClaimId::Cor1 => write!(f, "Cor1"),
            ClaimId::MrEquivalence => write!(f, "MR"),
            ClaimId::AwareUnionForm => write!(f, "A-union"),
            ClaimId::SpFixpoint => write!(f, "SP"),
            ClaimId::NullDecomposition => write!(f, "Null-decomposition"),
            ClaimId::OracleAgreement => write!(f, "Oracle"),
            ClaimId::FolkNegationComplement => write!(f, "Folk.negation-complement"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown claim `{0}`")]
pub struct UnknownClaim(pub String);

impl FromStr for ClaimId {
    type Err = UnknownClaim;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        ClaimId::all()
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownClaim(s.to_owned()))
    }
}

impl From<ClaimId> for String {
    fn from(c: ClaimId) -> String {
        c.to_string()
    }
}

impl TryFrom<String> for ClaimId {
    type Error = UnknownClaim;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail { witness: Witness },
    Skipped { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimResult {
    pub claim: ClaimId,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ClaimResult {
    pub fn pass(claim: ClaimId) -> Self {
        ClaimResult {
            claim,
            verdict: Verdict::Pass,
            note: None,
        }
    }

    pub fn fail(claim: ClaimId, witness: Witness) -> Self {
        ClaimResult {
            claim,
            verdict: Verdict::Fail { witness },
            note: None,
        }
    }

    pub fn skipped(claim: ClaimId, reason: impl Into<String>) -> Self {
        ClaimResult {
            claim,
            verdict: Verdict::Skipped {
                reason: reason.into(),
            },
            note: None,
        }
    }

    pub fn from_check(claim: ClaimId, check: Result<(), Witness>) -> Self {
        match check {
            Ok(()) => Self::pass(claim),
            Err(w) => Self::fail(claim, w),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn failed(&self) -> bool {
        matches!(self.verdict, Verdict::Fail { .. })
    }
}

impl fmt::Display for ClaimResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.verdict {
            Verdict::Pass => write!(f, "PASS {}", self.claim)?,
            Verdict::Fail { witness } => write!(f, "FAIL {}: {witness}", self.claim)?,
            Verdict::Skipped { reason } => write!(f, "SKIP {}: claim skipped: {reason}", self.claim)?,
        }
        if let Some(note) = &self.note {
            write!(f, " ({note})")?;
        }
        Ok(())
    }
}

/// Per-claim verdicts, ordered by claim identifier.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub results: Vec<ClaimResult>,
}

impl SuiteReport {
    pub fn new(mut results: Vec<ClaimResult>) -> Self {
        results.sort_by_key(|r| r.claim);
        SuiteReport { results }
    }

    pub fn get(&self, claim: ClaimId) -> Option<&ClaimResult> {
        self.results.iter().find(|r| r.claim == claim)
    }

    pub fn all_passed(&self) -> bool {
        self.results.iter().all(ClaimResult::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ClaimResult> {
        self.results.iter().filter(|r| r.failed())
    }

    /// No failures; skipped claims are allowed.
    pub fn no_failures(&self) -> bool {
        self.failures().next().is_none()
    }
}
