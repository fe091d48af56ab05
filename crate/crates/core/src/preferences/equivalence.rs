//! Agreement between the preference layer and the correspondence it reveals.
//!
//! Biconditionals are evaluated side by side: the preference-level verdict
//! on `p` and the correspondence-level verdict on `Π̃` are computed
//! independently and compared.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::epistemics::{validate_possibility, Knowledge, PossibilityProperty, PropertyReport};
use crate::event::Event;
use crate::lattice::Lattice;
use crate::report::{ClaimId, ClaimResult, Direction, Witness};

use super::properties::{check_pref_properties, PrefProperty, PrefPropertyReport};
use super::{
    brute_force_pi, composite_at_state, derive_possibility, pref_epistemic, Act, EpistemicKind,
    PreferenceModel,
};

struct Sides<'a> {
    lat: &'a Lattice,
    p: &'a PreferenceModel,
    pref: PrefPropertyReport,
    corr: PropertyReport,
}

fn failing_witness(pref: &PrefPropertyReport, props: &[PrefProperty]) -> Option<Witness> {
    props
        .iter()
        .find_map(|&p| pref.result(p).witness.clone())
}

fn failing_corr(corr: &PropertyReport, props: &[PossibilityProperty]) -> Option<Witness> {
    props.iter().find_map(|&p| corr.result(p).witness.clone())
}

impl Sides<'_> {
    /// Compare the preference side with the correspondence side in one
    /// direction of the biconditional.
    fn implication(
        &self,
        claim: ClaimId,
        pref_props: &[PrefProperty],
        corr_props: &[PossibilityProperty],
        dir: Direction,
    ) -> ClaimResult {
        let pref_fail = failing_witness(&self.pref, pref_props);
        let corr_fail = failing_corr(&self.corr, corr_props);
        let broken = match dir {
            Direction::Forward => pref_fail.is_none() && corr_fail.is_some(),
            Direction::Backward => corr_fail.is_none() && pref_fail.is_some(),
        };
        if !broken {
            let note = match (pref_fail.is_some(), corr_fail.is_some()) {
                (false, false) => "both sides hold",
                (true, true) => "both sides fail",
                _ => "sides disagree in the other direction",
            };
            return ClaimResult::pass(claim).with_note(note);
        }
        let (held, w) = match dir {
            Direction::Forward => ("preference side holds", corr_fail.unwrap()),
            Direction::Backward => ("correspondence side holds", pref_fail.unwrap()),
        };
        let mut witness = w;
        witness.detail = format!("{held} but the other fails: {}", witness.detail);
        ClaimResult::fail(claim, witness)
    }

    fn biconditional(
        &self,
        claim: ClaimId,
        pref_props: &[PrefProperty],
        corr_props: &[PossibilityProperty],
    ) -> ClaimResult {
        let fwd = self.implication(claim, pref_props, corr_props, Direction::Forward);
        if fwd.failed() {
            return fwd;
        }
        self.implication(claim, pref_props, corr_props, Direction::Backward)
    }

    fn lemma(&self, n: u8, dir: Direction) -> ClaimResult {
        use PossibilityProperty as C;
        use PrefProperty as P;
        let claim = ClaimId::Lemma(n, dir);
        if ClaimId::Lemma(n, dir).requires_property_one() && !self.pref.holds(P::P1) {
            return ClaimResult::pass(claim).with_note("vacuous: Property 1 fails");
        }
        let (pref, corr): (&[P], &[C]) = match n {
            1 => (&[P::P1, P::P2], &[C::Confinement]),
            2 => (&[P::P3], &[C::GeneralizedReflexivity]),
            3 => (&[P::P4, P::P5], &[C::Stationarity]),
            4 => (&[P::P6], &[C::ProjectionsPreserveIgnorance]),
            5 => (&[P::P7], &[C::ProjectionsPreserveKnowledge]),
            _ => return ClaimResult::skipped(claim, format!("no lemma {n}")),
        };
        self.implication(claim, pref, corr, dir)
    }

    fn all_seven(&self) -> bool {
        self.pref.all_hold()
    }

    fn operator_agreement(&self, claim: ClaimId, kind: EpistemicKind) -> ClaimResult {
        if !self.all_seven() {
            return ClaimResult::pass(claim).with_note("vacuous: not all seven properties hold");
        }
        let c = derive_possibility(self.lat, self.p);
        let k = Knowledge::unchecked(self.lat, &c);
        let result = self.lat.all_events().iter().try_for_each(|e| {
            let pref = pref_epistemic(self.lat, self.p, kind, e);
            let direct = match kind {
                EpistemicKind::Knows => k.know(e),
                EpistemicKind::Aware => k.aware(e),
                EpistemicKind::Unaware => k.unaware(e),
            };
            if pref == direct {
                Ok(())
            } else {
                Err(self.mismatch(kind, e, &pref, &direct))
            }
        });
        ClaimResult::from_check(claim, result)
    }

    fn mismatch(&self, kind: EpistemicKind, e: &Event, pref: &Event, direct: &Event) -> Witness {
        let lat = self.lat;
        let diff = lat.members(pref).difference(&lat.members(direct));
        let diff = diff.union(&lat.members(direct).difference(&lat.members(pref)));
        let mut w = Witness::new(format!("preference-based {kind:?} differs"))
            .event(lat, e)
            .states(lat, diff.first());
        w.events.push(format!("preference={}", pref.display(lat)));
        w.events.push(format!("correspondence={}", direct.display(lat)));
        w
    }

    /// Null events decompose into null singletons, decided by comparing
    /// singleton composites at each member of the event.
    fn null_decomposition(&self) -> ClaimResult {
        let lat = self.lat;
        let one = Act::constant(lat, BigRational::one());
        let zero = Act::constant(lat, BigRational::zero());
        let result = lat.all_events().iter().try_for_each(|e| {
            let members = lat.members(e);
            lat.states().try_for_each(|w| {
                let by_support = self.p.is_null(lat, w, e);
                let by_acts = members.iter().all(|t| {
                    let f = composite_at_state(&one, t, &zero);
                    self.p.compare(w, &f, &zero).is_eq()
                });
                if by_support == by_acts {
                    Ok(())
                } else {
                    Err(Witness::new(format!(
                        "null by support is {by_support}, by singleton composites {by_acts}"
                    ))
                    .state(lat, w)
                    .event(lat, e))
                }
            })
        });
        ClaimResult::from_check(ClaimId::NullDecomposition, result)
    }

    fn oracle(&self) -> ClaimResult {
        let lat = self.lat;
        let grid = [BigRational::zero(), BigRational::one()];
        let oracle = brute_force_pi(lat, self.p, &grid).expect("two-value grid");
        let direct = derive_possibility(lat, self.p);
        let bad = lat.states().find(|&w| oracle.get(w) != direct.get(w));
        ClaimResult::from_check(
            ClaimId::OracleAgreement,
            bad.map_or(Ok(()), |w| {
                Err(Witness::new(format!(
                    "grid search gives {:?}, support gives {:?}",
                    oracle.get(w),
                    direct.get(w)
                ))
                .state(lat, w))
            }),
        )
    }

    fn check(&self, claim: ClaimId) -> ClaimResult {
        use PossibilityProperty as C;
        use PrefProperty as P;
        match claim {
            ClaimId::Lemma(n, dir) => self.lemma(n, dir),
            ClaimId::Lemma3Transitivity => self.biconditional(claim, &[P::P4], &[C::Transitivity]),
            ClaimId::Lemma3Euclideanness => self.biconditional(claim, &[P::P5], &[C::Euclideanness]),
            ClaimId::Prop4(dir) => self.implication(claim, &P::ALL, &C::DEFINING, dir),
            ClaimId::Prop5 => self.operator_agreement(claim, EpistemicKind::Knows),
            ClaimId::Prop6 => self.operator_agreement(claim, EpistemicKind::Aware),
            ClaimId::Cor1 => self.operator_agreement(claim, EpistemicKind::Unaware),
            ClaimId::NullDecomposition => self.null_decomposition(),
            ClaimId::OracleAgreement => self.oracle(),
            other => ClaimResult::skipped(other, "not a preference-level claim"),
        }
    }
}

pub fn check_preference_claims(lat: &Lattice, p: &PreferenceModel, claims: &[ClaimId]) -> Vec<ClaimResult> {
    let c = derive_possibility(lat, p);
    let sides = Sides {
        lat,
        p,
        pref: check_pref_properties(lat, p),
        corr: validate_possibility(lat, &c),
    };
    claims.iter().map(|&cl| sides.check(cl)).collect()
}

pub fn check_preference_claim(lat: &Lattice, p: &PreferenceModel, claim: ClaimId) -> ClaimResult {
    check_preference_claims(lat, p, &[claim]).remove(0)
}
