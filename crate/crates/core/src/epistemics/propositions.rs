//! Exhaustive checks of the knowledge and awareness laws.
//!
//! Unary laws are checked on every event of the lattice. Laws over pairs
//! run on all pairs when their number fits the budget and on a seeded
//! sample otherwise; families of three are always sampled.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::event::Event;
use crate::lattice::Lattice;
use crate::report::{ClaimId, ClaimResult, SuiteReport, Witness};

use super::{validate_possibility, Correspondence, DerivedFact, Knowledge, PropertyReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    /// Maximum number of event pairs per binary law before sampling.
    pub pair_budget: usize,
    /// Number of sampled three-event families per n-ary law.
    pub triple_samples: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            pair_budget: 20_000,
            triple_samples: 500,
            seed: 0,
        }
    }
}

/// Operator values for every event, computed once per model.
struct Table<'a> {
    k: Knowledge<'a>,
    lat: &'a Lattice,
    events: Vec<Event>,
    index: HashMap<Event, usize>,
    know: Vec<Event>,
    aware: Vec<Event>,
    cfg: SuiteConfig,
}

impl<'a> Table<'a> {
    fn new(lat: &'a Lattice, c: &'a Correspondence, cfg: SuiteConfig) -> Self {
        let k = Knowledge::unchecked(lat, c);
        let events = lat.all_events();
        let index = events
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        let know = events.iter().map(|e| k.know(e)).collect();
        let aware = events.iter().map(|e| k.aware(e)).collect();
        Table {
            k,
            lat,
            events,
            index,
            know,
            aware,
            cfg,
        }
    }

    fn know(&self, e: &Event) -> Event {
        match self.index.get(e) {
            Some(&i) => self.know[i].clone(),
            None => self.k.know(e),
        }
    }

    fn aware(&self, e: &Event) -> Event {
        match self.index.get(e) {
            Some(&i) => self.aware[i].clone(),
            None => self.k.aware(e),
        }
    }

    fn unaware(&self, e: &Event) -> Event {
        self.lat.negate(&self.aware(e))
    }

    fn not(&self, e: &Event) -> Event {
        self.lat.negate(e)
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.cfg.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }

    fn pairs(&self, salt: u64) -> Vec<(usize, usize)> {
        let n = self.events.len();
        if n.saturating_mul(n) <= self.cfg.pair_budget {
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect()
        } else {
            let mut rng = self.rng(salt);
            (0..self.cfg.pair_budget)
                .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
                .collect()
        }
    }

    fn triples(&self, salt: u64) -> Vec<[usize; 3]> {
        let n = self.events.len();
        let mut rng = self.rng(salt);
        (0..self.cfg.triple_samples)
            .map(|_| {
                [
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                ]
            })
            .collect()
    }

    fn each_event<F>(&self, mut check: F) -> Result<(), Witness>
    where
        F: FnMut(&Event) -> Result<(), Witness>,
    {
        self.events.iter().try_for_each(&mut check)
    }

    fn w(&self, detail: &str, events: &[&Event]) -> Witness {
        events
            .iter()
            .fold(Witness::new(detail), |w, e| w.event(self.lat, e))
    }

    fn expect_eq(&self, left: &Event, right: &Event, detail: &str, on: &[&Event]) -> Result<(), Witness> {
        if left == right {
            Ok(())
        } else {
            let mut w = self.w(detail, on);
            w.events.push(format!("lhs={}", left.display(self.lat)));
            w.events.push(format!("rhs={}", right.display(self.lat)));
            Err(w)
        }
    }

    fn expect_subset(&self, left: &Event, right: &Event, detail: &str, on: &[&Event]) -> Result<(), Witness> {
        if self.lat.event_subset(left, right) {
            return Ok(());
        }
        let mut w = self.w(detail, on);
        if !left.is_vacuous() {
            let outside = self.lat.members(left).difference(&self.lat.members(right));
            w = w.states(self.lat, outside.first());
        }
        w.events.push(format!("lhs={}", left.display(self.lat)));
        w.events.push(format!("rhs={}", right.display(self.lat)));
        Err(w)
    }

    fn prop1(&self) -> Result<(), Witness> {
        self.each_event(|e| {
            let raw = self.k.knowing_states(&self.lat.members(e));
            let k = self.know(e);
            if self.lat.members(&k) == raw && k.space() == e.space() {
                Ok(())
            } else {
                let diff = raw.difference(&self.lat.members(&k));
                Err(self
                    .w("{ω : Π(ω) ⊆ E} is not an S(E)-based event", &[e])
                    .states(self.lat, diff.first()))
            }
        })
    }

    fn prop2(&self, item: u8) -> Result<(), Witness> {
        let lat = self.lat;
        match item {
            1 => {
                let omega = lat.omega();
                self.expect_eq(&self.know(&omega), &omega, "K(Ω) ≠ Ω", &[])
            }
            2 => {
                for (i, j) in self.pairs(21) {
                    let (e, f) = (&self.events[i], &self.events[j]);
                    let lhs = self.know(&lat.conjoin([e, f]));
                    let rhs = lat.conjoin([&self.know(e), &self.know(f)]);
                    self.expect_eq(&lhs, &rhs, "K(E∩F) ≠ K(E)∩K(F)", &[e, f])?;
                }
                for [i, j, l] in self.triples(22) {
                    let es = [&self.events[i], &self.events[j], &self.events[l]];
                    let lhs = self.know(&lat.conjoin(es));
                    let ks: Vec<Event> = es.iter().map(|e| self.know(e)).collect();
                    let rhs = lat.conjoin(&ks);
                    self.expect_eq(&lhs, &rhs, "K(E∩F∩G) ≠ K(E)∩K(F)∩K(G)", &es)?;
                }
                Ok(())
            }
            3 => self.each_event(|e| self.expect_subset(&self.know(e), e, "K(E) ⊄ E", &[e])),
            4 => self.each_event(|e| {
                let k = self.know(e);
                self.expect_subset(&k, &self.know(&k), "K(E) ⊄ KK(E)", &[e])
            }),
            5 => {
                let mut pairs: Vec<(Event, Event)> = Vec::new();
                let n = self.events.len();
                if n * n <= self.cfg.pair_budget {
                    for e in &self.events {
                        for f in &self.events {
                            if lat.event_subset(e, f) {
                                pairs.push((e.clone(), f.clone()));
                            }
                        }
                    }
                } else {
                    for (i, j) in self.pairs(25) {
                        let (e, g) = (&self.events[i], &self.events[j]);
                        pairs.push((lat.conjoin([e, g]), e.clone()));
                        if lat.event_subset(e, g) {
                            pairs.push((e.clone(), g.clone()));
                        }
                    }
                }
                for (e, f) in &pairs {
                    self.expect_subset(&self.know(e), &self.know(f), "E ⊆ F but K(E) ⊄ K(F)", &[e, f])?;
                }
                Ok(())
            }
            6 => self.each_event(|e| {
                let not_k = self.not(&self.know(e));
                let not_k_not_k = self.not(&self.know(&not_k));
                let lhs = lat.conjoin([&not_k, &not_k_not_k]);
                let rhs = self.not(&self.know(&self.not(&self.know(&not_k))));
                self.expect_subset(&lhs, &rhs, "¬K(E)∩¬K¬K(E) ⊄ ¬K¬K¬K(E)", &[e])
            }),
            _ => unreachable!("no item {item}"),
        }
    }

    fn prop3(&self, item: u8) -> Result<(), Witness> {
        let lat = self.lat;
        match item {
            1 => self.each_event(|e| {
                self.expect_eq(
                    &self.know(&self.unaware(e)),
                    &lat.vacuous(e.space()),
                    "KU(E) ≠ ∅^S(E)",
                    &[e],
                )
            }),
            2 => self.each_event(|e| {
                let u = self.unaware(e);
                self.expect_eq(&u, &self.unaware(&u), "U(E) ≠ UU(E)", &[e])
            }),
            3 => self.each_event(|e| {
                self.expect_eq(
                    &self.aware(e),
                    &self.know(&lat.full_event(e.space())),
                    "A(E) ≠ K(S(E)↑)",
                    &[e],
                )
            }),
            4 => self.each_event(|e| {
                let sp = self.k.strong_plausibility(e);
                self.expect_eq(&self.unaware(e), &sp.event, "U(E) ≠ ⋂(¬K)ⁿ(E)", &[e])
            }),
            5 => self.each_event(|e| {
                let not_k = self.not(&self.know(e));
                let lhs = lat.conjoin([&not_k, &self.aware(&not_k)]);
                self.expect_eq(&lhs, &self.know(&not_k), "¬K(E)∩A¬K(E) ≠ K¬K(E)", &[e])
            }),
            6 => self.each_event(|e| {
                self.expect_eq(&self.aware(e), &self.aware(&self.not(e)), "A(E) ≠ A(¬E)", &[e])
            }),
            7 => {
                for (i, j) in self.pairs(37) {
                    let (e, f) = (&self.events[i], &self.events[j]);
                    let lhs = lat.conjoin([&self.aware(e), &self.aware(f)]);
                    let rhs = self.aware(&lat.conjoin([e, f]));
                    self.expect_eq(&lhs, &rhs, "A(E)∩A(F) ≠ A(E∩F)", &[e, f])?;
                }
                for [i, j, l] in self.triples(38) {
                    let es = [&self.events[i], &self.events[j], &self.events[l]];
                    let aw: Vec<Event> = es.iter().map(|e| self.aware(e)).collect();
                    let lhs = lat.conjoin(&aw);
                    let rhs = self.aware(&lat.conjoin(es));
                    self.expect_eq(&lhs, &rhs, "A(E)∩A(F)∩A(G) ≠ A(E∩F∩G)", &es)?;
                }
                Ok(())
            }
            8 => self.each_event(|e| {
                self.expect_eq(&self.aware(e), &self.aware(&self.know(e)), "A(E) ≠ AK(E)", &[e])
            }),
            9 => self.each_event(|e| {
                self.expect_eq(&self.aware(e), &self.aware(&self.aware(e)), "A(E) ≠ AA(E)", &[e])
            }),
            10 => self.each_event(|e| {
                self.expect_eq(&self.aware(e), &self.know(&self.aware(e)), "A(E) ≠ KA(E)", &[e])
            }),
            _ => unreachable!("no item {item}"),
        }
    }

    fn mr(&self) -> Result<(), Witness> {
        self.each_event(|e| {
            self.expect_eq(&self.k.unaware_mr(e), &self.unaware(e), "¬K(E)∩¬K¬K(E) ≠ ¬A(E)", &[e])
        })
    }

    fn aware_union(&self) -> Result<(), Witness> {
        self.each_event(|e| {
            let k = self.know(e);
            let union = self
                .lat
                .members(&k)
                .union(&self.lat.members(&self.know(&self.not(&k))));
            let aware = self.lat.members(&self.aware(e));
            if aware == union {
                Ok(())
            } else {
                let diff = aware.difference(&union).union(&union.difference(&aware));
                Err(self
                    .w("A(E) ≠ K(E) ∪ K¬K(E)", &[e])
                    .states(self.lat, diff.first()))
            }
        })
    }

    fn sp_fixpoint(&self) -> Result<(), Witness> {
        let bound = self.lat.state_count();
        self.each_event(|e| {
            let sp = self.k.strong_plausibility(e);
            if sp.shrink_steps <= bound {
                Ok(())
            } else {
                Err(self.w(
                    &format!("fixpoint needed {} steps, more than |Ω| = {bound}", sp.shrink_steps),
                    &[e],
                ))
            }
        })
    }

    fn remark(&self, report: &PropertyReport, n: u8) -> Result<(), Witness> {
        let fact = match n {
            1 => DerivedFact::ReflexiveProjection,
            2 => DerivedFact::AwarenessLevelMonotone,
            3 => DerivedFact::KnowledgeImpliesAwareness,
            _ => unreachable!("no remark {n}"),
        };
        match report.derived.iter().find(|r| r.property == fact) {
            Some(r) => r.witness.clone().map_or(Ok(()), Err),
            None => Ok(()),
        }
    }

    fn check(&self, claim: ClaimId, report: &PropertyReport) -> ClaimResult {
        let result = match claim {
            ClaimId::Prop1 => self.prop1(),
            ClaimId::Prop2(i) => self.prop2(i),
            ClaimId::Prop3(i) => self.prop3(i),
            ClaimId::Remark(n) => self.remark(report, n),
            ClaimId::MrEquivalence => self.mr(),
            ClaimId::AwareUnionForm => self.aware_union(),
            ClaimId::SpFixpoint => self.sp_fixpoint(),
            other => {
                return ClaimResult::skipped(other, "not a correspondence-level claim");
            }
        };
        ClaimResult::from_check(claim, result)
    }
}

/// Check a set of correspondence-level claims. The correspondence is not
/// required to be valid.
pub fn check_epistemic_claims(
    lat: &Lattice,
    c: &Correspondence,
    claims: &[ClaimId],
    cfg: SuiteConfig,
) -> Vec<ClaimResult> {
    let table = Table::new(lat, c, cfg);
    let report = validate_possibility(lat, c);
    claims.iter().map(|&cl| table.check(cl, &report)).collect()
}

pub fn check_epistemic_claim(
    lat: &Lattice,
    c: &Correspondence,
    claim: ClaimId,
    cfg: SuiteConfig,
) -> ClaimResult {
    check_epistemic_claims(lat, c, &[claim], cfg).remove(0)
}

/// Every knowledge law, every awareness law and the three derived remarks,
/// each quantified over all events of the lattice.
pub fn verify_propositions(lat: &Lattice, c: &Correspondence, cfg: SuiteConfig) -> SuiteReport {
    let claims: Vec<ClaimId> = std::iter::once(ClaimId::Prop1)
        .chain((1..=6).map(ClaimId::Prop2))
        .chain((1..=10).map(ClaimId::Prop3))
        .chain((1..=3).map(ClaimId::Remark))
        .collect();
    SuiteReport::new(check_epistemic_claims(lat, c, &claims, cfg))
}
