//! End-to-end acceptance criteria. Each criterion prints one line:
//! `PASS <n> <title> (<detail>)` or `FAIL <n> <title>: <reason>`.

use std::cmp::Ordering;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use unaware::dsl::{parse_event_expr, parse_model, serialize_model};
use unaware::epistemics::{
    validate_possibility, Correspondence, Knowledge, PossibilityProperty, SuiteConfig,
};
use unaware::harness::{
    generate_model, mutate_model, mutate_with, run_suite, search_counterexample, GenConfig,
    MutationKind, SearchMode, Shape,
};
use unaware::report::Direction;
use unaware::preferences::{
    brute_force_pi, check_pref_properties, composite, derive_possibility, induce_preferences,
    pref_epistemic, Act, EpistemicKind, PrefProperty, WeightScheme,
};
use unaware::{fixtures, ClaimId, Event, Lattice, StateSet, UnawarenessModel};

const FIXTURE_BUDGET: Duration = Duration::from_secs(1);
const SWEEP_BUDGET: Duration = Duration::from_secs(60);
const SWEEP_MODELS: u64 = 200;
const MUTANTS: u64 = 500;
const ORACLE_MAX_STATES: usize = 12;
const FOLK_TRIALS: u64 = 10;

type Outcome = Result<String, String>;

fn sweep_config(seed: u64) -> GenConfig {
    let shape = [Shape::Chain, Shape::Diamond, Shape::Random][(seed % 3) as usize];
    GenConfig {
        seed,
        max_spaces: 5,
        max_states_per_space: 8,
        shape,
        weight_scheme: Some(WeightScheme::SeededRandom(seed)),
    }
}

fn sweep_model(seed: u64) -> UnawarenessModel {
    generate_model(&sweep_config(seed)).expect("sweep bounds are valid")
}

fn set(lat: &Lattice, names: &[&str]) -> StateSet {
    names
        .iter()
        .map(|n| lat.state_by_name(n).expect("fixture state"))
        .collect()
}

fn up(lat: &Lattice, space: &str, names: &[&str]) -> Event {
    lat.up_closure(&set(lat, names), lat.space_by_name(space).unwrap())
        .unwrap()
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Collects mismatches between a computed value and its expected value.
#[derive(Default)]
struct Checks {
    count: usize,
    failures: Vec<String>,
}

impl Checks {
    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, what: &str, got: T, want: T) {
        self.count += 1;
        if got != want {
            self.failures.push(format!("{what}: got {got:?}, want {want:?}"));
        }
    }

    fn ok(&mut self, what: &str, cond: bool) {
        self.count += 1;
        if !cond {
            self.failures.push(what.to_owned());
        }
    }

    fn finish(self, detail: impl FnOnce(usize) -> String) -> Outcome {
        if self.failures.is_empty() {
            Ok(detail(self.count))
        } else {
            Err(self.failures.join("; "))
        }
    }
}

fn fixture_correctness() -> Outcome {
    let start = Instant::now();
    let mut c = Checks::default();
    let m1 = fixtures::m1();
    let m2 = fixtures::m2();
    let lat = &m1.lattice;
    let sa = lat.space_by_name("Sa").unwrap();
    let sb = lat.space_by_name("Sb").unwrap();
    let st = |n: &str| lat.state_by_name(n).unwrap();
    let b1 = up(lat, "Sb", &["b1"]);
    let a1 = up(lat, "Sa", &["a1"]);

    // Lattice and event algebra.
    c.eq("project b1 to Sa", lat.try_project(st("b1"), sa), Some(st("a1")));
    c.eq("members of {a1}↑", lat.members(&a1), set(lat, &["a1", "b1", "b2"]));
    let neg = lat.negate(&b1);
    c.eq("¬{b1}↑", neg.clone(), up(lat, "Sb", &["b2"]));
    let complement = lat.all_states().difference(&lat.members(&b1));
    c.ok(
        "¬{b1}↑ is a strict subset of the complement",
        lat.members(&neg).is_subset(&complement) && lat.members(&neg) != complement,
    );
    c.eq("{a1}↑ ∧ {b1}↑", lat.conjoin([&a1, &b1]), b1.clone());
    let disj = lat.disjoin([&a1, &b1]);
    c.eq("{a1}↑ ∨ {b1}↑", disj.clone(), up(lat, "Sb", &["b1", "b2"]));
    c.eq("members of the disjunction", lat.members(&disj), set(lat, &["b1", "b2"]));
    c.ok("∅^Sb ⊆ {a1}↑", lat.event_subset(&lat.vacuous(sb), &a1));
    c.ok("∅^Sa ⊄ {b1}↑", !lat.event_subset(&lat.vacuous(sa), &b1));
    c.ok("{b1}↑ ⊆ {a1}↑", lat.event_subset(&b1, &a1));
    c.eq("sup(Sa, Sb)", lat.sup_pair(sa, sb), sb);

    // Correspondences and operators.
    let c1 = m1.correspondence.clone().unwrap();
    let c2 = m2.correspondence.clone().unwrap();
    c.ok("M1 is valid", validate_possibility(lat, &c1).is_valid());
    c.ok("M2 is valid", validate_possibility(lat, &c2).is_valid());
    let mut broken = c1.clone();
    broken.set(st("b1"), set(lat, &["a1", "b1"]));
    let report = validate_possibility(lat, &broken);
    let conf = report.result(PossibilityProperty::Confinement);
    c.eq(
        "Confinement witness on the M1 mutant",
        conf.witness.as_ref().map(|w| w.states.first().cloned()),
        Some(Some("b1".to_owned())),
    );
    let k1 = Knowledge::new(lat, &c1).unwrap();
    let k2 = Knowledge::new(lat, &c2).unwrap();
    c.eq("M1 K({b1}↑)", k1.know(&b1), lat.vacuous(sb));
    c.eq("M2 K({b1}↑)", k2.know(&b1), b1.clone());
    c.eq("M1 A({b1}↑)", k1.aware(&b1), lat.vacuous(sb));
    c.eq("M2 A({b1}↑)", k2.aware(&b1), up(lat, "Sb", &["b1", "b2"]));
    c.eq("M1 U({b1}↑)", k1.unaware(&b1), up(lat, "Sb", &["b1", "b2"]));
    c.eq("M2 U({b1}↑)", k2.unaware(&b1), lat.vacuous(sb));
    for (name, k) in [("M1", &k1), ("M2", &k2)] {
        for e in lat.all_events() {
            c.eq(&format!("{name} MR on {}", e.display(lat)), k.unaware_mr(&e), k.unaware(&e));
            c.eq(
                &format!("{name} SP on {}", e.display(lat)),
                k.strong_plausibility(&e).event,
                k.unaware(&e),
            );
        }
    }
    for m in [&m1, &m2] {
        let r = run_suite(m, &ClaimId::epistemic(), SuiteConfig::default());
        c.ok("epistemic claims pass on a fixture", r.all_passed());
    }
    let mut truthless = c2.clone();
    truthless.set(st("b1"), set(lat, &["b2"]));
    let mutant = UnawarenessModel {
        correspondence: Some(truthless),
        preferences: None,
        ..m2.clone()
    };
    let r = run_suite(&mutant, &[ClaimId::Prop2(3)], SuiteConfig::default());
    let w = match &r.results[0].verdict {
        unaware::Verdict::Fail { witness } => Some((witness.events[0].clone(), witness.states.clone())),
        _ => None,
    };
    c.eq("Truth witness", w, Some(("Sb{b2}".to_owned(), vec!["b1".to_owned()])));

    // Preferences.
    let p1 = m1.preferences.clone().unwrap();
    let p2 = m2.preferences.clone().unwrap();
    let ones = Act::constant(lat, int(1));
    let zeros = Act::constant(lat, int(0));
    c.eq("M2 1̄ vs 0̄ at b1", p2.compare(st("b1"), &ones, &zeros), Ordering::Greater);
    let indicator = Act::new(lat.states().map(|w| int(i64::from(w == st("b1")))).collect());
    c.eq("M1 indicator vs 0̄ at b1", p1.compare(st("b1"), &indicator, &zeros), Ordering::Equal);
    c.eq("composite(1̄, {b1}↑, 0̄)", composite(lat, &ones, &b1, &zeros), indicator.clone());
    c.eq("M1 revealed Π", derive_possibility(lat, &p1), c1.clone());
    c.eq("M2 revealed Π", derive_possibility(lat, &p2), c2.clone());
    let grid = [int(0), int(1)];
    c.eq("M1 oracle", brute_force_pi(lat, &p1, &grid).ok(), Some(c1.clone()));
    c.eq("M2 oracle", brute_force_pi(lat, &p2, &grid).ok(), Some(c2.clone()));
    c.ok("M1 seven properties", check_pref_properties(lat, &p1).all_hold());
    c.ok("M2 seven properties", check_pref_properties(lat, &p2).all_hold());
    let mut p1m = p1.clone();
    p1m.set_weight(st("b1"), st("b2"), int(1));
    let r = check_pref_properties(lat, &p1m);
    c.eq(
        "Property 1 witness",
        r.result(PrefProperty::P1).witness.as_ref().map(|w| w.states.first().cloned()),
        Some(Some("b1".to_owned())),
    );
    c.eq("M2 K̃({b1}↑)", pref_epistemic(lat, &p2, EpistemicKind::Knows, &b1), b1.clone());
    c.eq(
        "M1 Ũ({b1}↑) members",
        lat.members(&pref_epistemic(lat, &p1, EpistemicKind::Unaware, &b1)),
        set(lat, &["b1", "b2"]),
    );
    let b2 = up(lat, "Sb", &["b2"]);
    c.ok("M1 {b1}↑ null at b1", p1.is_null(lat, st("b1"), &b1));
    c.ok("M1 {b2}↑ null at b1", p1.is_null(lat, st("b1"), &b2));
    c.ok("M2 {b2}↑ null at b1", p2.is_null(lat, st("b1"), &b2));
    c.ok("M2 {b1}↑ not null at b1", !p2.is_null(lat, st("b1"), &b1));
    for m in [&m1, &m2] {
        let ci = m.correspondence.as_ref().unwrap();
        let p = induce_preferences(lat, ci, WeightScheme::Uniform);
        c.eq("induce then derive", &derive_possibility(lat, &p), ci);
    }

    // Expressions.
    let e = parse_event_expr("U(up(Sb,{b1}))", &m1).unwrap();
    c.eq("eval U(up(Sb,{b1}))", m1.evaluate(&e).map(|e| lat.members(&e)), Ok(set(lat, &["b1", "b2"])));
    let e = parse_event_expr("and(up(Sa,{a1}), up(Sb,{b1}))", &m1).unwrap();
    c.eq("eval and(..)", m1.evaluate(&e), Ok(b1.clone()));
    for m in [&m1, &m2] {
        let r = run_suite(m, &ClaimId::theorems(), SuiteConfig::default());
        c.ok("full suite on a fixture", r.all_passed());
    }

    let elapsed = start.elapsed();
    c.ok(&format!("fixture runtime {elapsed:?} within {FIXTURE_BUDGET:?}"), elapsed < FIXTURE_BUDGET);
    c.finish(|n| format!("{n} checks in {elapsed:.2?}"))
}

fn sweep_claims() -> Vec<ClaimId> {
    std::iter::once(ClaimId::Prop1)
        .chain((1..=6).map(ClaimId::Prop2))
        .chain((1..=10).map(ClaimId::Prop3))
        .chain((1..=3).map(ClaimId::Remark))
        .collect()
}

fn proposition_sweep() -> Outcome {
    let start = Instant::now();
    let claims = sweep_claims();
    let mut failures = Vec::new();
    let mut states = 0;
    for seed in 0..SWEEP_MODELS {
        let m = sweep_model(seed);
        states += m.lattice.state_count();
        let c = m.correspondence.as_ref().unwrap();
        if !validate_possibility(&m.lattice, c).is_valid() {
            failures.push(format!("seed {seed}: generated model is invalid"));
            continue;
        }
        let r = run_suite(&m, &claims, SuiteConfig::default());
        failures.extend(r.failures().map(|f| format!("seed {seed}: {f}")));
    }
    let elapsed = start.elapsed();
    if elapsed >= SWEEP_BUDGET {
        failures.push(format!("runtime {elapsed:?} exceeds {SWEEP_BUDGET:?}"));
    }
    if failures.is_empty() {
        Ok(format!(
            "{SWEEP_MODELS} models, {states} states, {} claims each, {elapsed:.2?}",
            claims.len()
        ))
    } else {
        Err(failures.into_iter().take(5).collect::<Vec<_>>().join("; "))
    }
}

fn mr_and_plausibility() -> Outcome {
    let mut events = 0usize;
    let mut max_steps = 0;
    for seed in 0..SWEEP_MODELS {
        let m = sweep_model(seed);
        let lat = &m.lattice;
        let c = m.correspondence.as_ref().unwrap();
        let k = Knowledge::new(lat, c).map_err(|e| format!("seed {seed}: {e}"))?;
        let omega = lat.state_count();
        for e in lat.all_events() {
            events += 1;
            let u = k.unaware(&e);
            if k.unaware_mr(&e) != u {
                return Err(format!("seed {seed}: MR differs on {}", e.display(lat)));
            }
            let sp = k.strong_plausibility(&e);
            if sp.event != u {
                return Err(format!("seed {seed}: SP differs on {}", e.display(lat)));
            }
            if sp.shrink_steps > omega {
                return Err(format!(
                    "seed {seed}: {} accumulation steps on {} exceed |Ω| = {omega}",
                    sp.shrink_steps,
                    e.display(lat)
                ));
            }
            max_steps = max_steps.max(sp.shrink_steps);
        }
    }
    Ok(format!("{events} events, longest accumulation {max_steps} step(s)"))
}

/// K̃, Ã, Ũ against K, A, U on the revealed correspondence, event by event.
fn operator_disagreements(lat: &Lattice, p: &unaware::preferences::PreferenceModel) -> Vec<String> {
    let c = derive_possibility(lat, p);
    let k = Knowledge::unchecked(lat, &c);
    let mut out = Vec::new();
    for e in lat.all_events() {
        let pairs = [
            (EpistemicKind::Knows, k.know(&e)),
            (EpistemicKind::Aware, k.aware(&e)),
            (EpistemicKind::Unaware, k.unaware(&e)),
        ];
        for (kind, want) in pairs {
            if pref_epistemic(lat, p, kind, &e) != want {
                out.push(format!("{kind:?} on {}", e.display(lat)));
            }
        }
    }
    out
}

fn preference_equivalences() -> Outcome {
    let claims = [
        ClaimId::Prop4(Direction::Forward),
        ClaimId::Prop4(Direction::Backward),
        ClaimId::Prop5,
        ClaimId::Prop6,
        ClaimId::Cor1,
    ];
    let mut events = 0;
    for seed in 0..SWEEP_MODELS {
        let m = sweep_model(seed);
        let lat = &m.lattice;
        let p = m.preferences.as_ref().unwrap();
        let props = check_pref_properties(lat, p);
        if !props.all_hold() {
            return Err(format!("seed {seed}: {props}"));
        }
        let bad = operator_disagreements(lat, p);
        if !bad.is_empty() {
            return Err(format!("seed {seed}: {}", bad.join(", ")));
        }
        events += lat.all_events().len();
        let r = run_suite(&m, &claims, SuiteConfig::default());
        let first = r.failures().next().map(ToString::to_string);
        if let Some(f) = first {
            return Err(format!("seed {seed}: {f}"));
        }
    }
    Ok(format!("{SWEEP_MODELS} models, {events} events, zero disagreements"))
}

/// Property-by-property agreement computed directly from the two reports.
fn direct_lemma_breaks(lat: &Lattice, p: &unaware::preferences::PreferenceModel) -> Vec<String> {
    use PossibilityProperty as C;
    use PrefProperty as P;
    let pref = check_pref_properties(lat, p);
    let corr = validate_possibility(lat, &derive_possibility(lat, p));
    let p1 = pref.holds(P::P1);
    let rows: [(&str, bool, bool, bool); 7] = [
        ("Lemma1", pref.holds(P::P1) && pref.holds(P::P2), corr.holds(C::Confinement), false),
        ("Lemma2", pref.holds(P::P3), corr.holds(C::GeneralizedReflexivity), true),
        ("Lemma3", pref.holds(P::P4) && pref.holds(P::P5), corr.holds(C::Stationarity), false),
        ("Lemma3.trans", pref.holds(P::P4), corr.holds(C::Transitivity), false),
        ("Lemma3.eucl", pref.holds(P::P5), corr.holds(C::Euclideanness), false),
        ("Lemma4", pref.holds(P::P6), corr.holds(C::ProjectionsPreserveIgnorance), true),
        ("Lemma5", pref.holds(P::P7), corr.holds(C::ProjectionsPreserveKnowledge), true),
    ];
    rows.iter()
        .filter(|(_, a, b, needs_p1)| a != b && (p1 || !needs_p1))
        .map(|(name, a, b, _)| format!("{name}: preference side {a}, correspondence side {b}"))
        .collect()
}

fn lemma_biconditionals() -> Outcome {
    let mut claims: Vec<ClaimId> = (1..=5)
        .flat_map(|n| [ClaimId::Lemma(n, Direction::Forward), ClaimId::Lemma(n, Direction::Backward)])
        .collect();
    claims.extend([ClaimId::Lemma3Transitivity, ClaimId::Lemma3Euclideanness]);
    let mut mutants = 0;
    let mut invalid = 0;
    let mut seed = 0;
    while mutants < MUTANTS {
        let m = sweep_model(seed);
        seed += 1;
        let Some(mu) = mutate_model(&m, seed) else {
            continue;
        };
        mutants += 1;
        let lat = &mu.model.lattice;
        let p = mu.model.preferences.as_ref().unwrap();
        if !validate_possibility(lat, &derive_possibility(lat, p)).is_valid() {
            invalid += 1;
        }
        let r = run_suite(&mu.model, &claims, SuiteConfig::default());
        let first = r.failures().next().map(ToString::to_string);
        if let Some(f) = first {
            return Err(format!("{} mutant of seed {}: {f}", mu.kind, seed - 1));
        }
        if let Some(b) = direct_lemma_breaks(lat, p).first() {
            return Err(format!("{} mutant of seed {}: {b}", mu.kind, seed - 1));
        }
    }
    Ok(format!("{mutants} mutants ({invalid} invalid), zero breaks"))
}

fn oracle_agreement() -> Outcome {
    let grid = [BigRational::from_integer(0.into()), BigRational::from_integer(1.into())];
    let (mut valid, mut mutated) = (0, 0);
    for seed in 0..SWEEP_MODELS {
        let m = sweep_model(seed);
        let mut candidates = vec![(false, m.clone())];
        if let Some(mu) = mutate_model(&m, seed) {
            candidates.push((true, mu.model));
        }
        for (is_mutant, model) in candidates {
            let lat = &model.lattice;
            if lat.state_count() > ORACLE_MAX_STATES {
                continue;
            }
            let p = model.preferences.as_ref().unwrap();
            let oracle = brute_force_pi(lat, p, &grid).map_err(|e| e.to_string())?;
            if oracle != derive_possibility(lat, p) {
                return Err(format!("seed {seed} (mutant: {is_mutant}): oracle disagrees"));
            }
            if is_mutant {
                mutated += 1;
            } else {
                valid += 1;
            }
        }
    }
    if valid == 0 || mutated == 0 {
        return Err(format!("too few small models: {valid} valid, {mutated} mutants"));
    }
    Ok(format!("{valid} valid models and {mutated} mutants with at most {ORACLE_MAX_STATES} states"))
}

fn round_trips() -> Outcome {
    for seed in 0..SWEEP_MODELS {
        let m = sweep_model(seed);
        let lat = &m.lattice;
        let c = m.correspondence.as_ref().unwrap();
        for scheme in [WeightScheme::Uniform, WeightScheme::SeededRandom(seed)] {
            if &derive_possibility(lat, &induce_preferences(lat, c, scheme)) != c {
                return Err(format!("seed {seed}: induce/derive is not the identity"));
            }
        }
    }
    let mut models = fixtures::all();
    models.extend((0..SWEEP_MODELS).map(sweep_model));
    models.extend((0..20).map(|s| {
        generate_model(&GenConfig {
            weight_scheme: None,
            ..sweep_config(s)
        })
        .unwrap()
    }));
    for (i, m) in models.iter().enumerate() {
        let text = serialize_model(m);
        match parse_model(&text) {
            Ok(back) if &back == m => {
                if serialize_model(&back) != text {
                    return Err(format!("model {i}: serialization is not stable"));
                }
            }
            Ok(_) => return Err(format!("model {i}: reparsed model differs")),
            Err(d) => return Err(format!("model {i}: {}", d[0])),
        }
    }
    Ok(format!(
        "{SWEEP_MODELS} correspondences, {} documents",
        models.len()
    ))
}

fn negative_controls() -> Outcome {
    let mut detected = Vec::new();
    for kind in MutationKind::ALL {
        let mut found = None;
        for seed in 0..200 {
            let m = sweep_model(seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            if let Some(mu) = mutate_with(&m, kind, &mut rng) {
                found = Some(mu);
                break;
            }
        }
        let mu = found.ok_or_else(|| format!("{kind}: no applicable model"))?;
        let lat = &mu.model.lattice;
        let c: Correspondence = mu.model.possibility().unwrap();
        let report = validate_possibility(lat, &c);
        let checker = if kind == MutationKind::ZeroWeights {
            let p = mu.model.preferences.as_ref().unwrap();
            check_pref_properties(lat, p)
                .result(PrefProperty::P3)
                .witness
                .as_ref()
                .filter(|w| !w.states.is_empty())
                .map(|_| "zero-support".to_owned())
        } else {
            kind.targets()
                .iter()
                .map(|&p| report.result(p))
                .find(|r| r.witness.as_ref().is_some_and(|w| !w.states.is_empty()))
                .map(|r| r.property.name().to_owned())
        };
        match checker {
            Some(name) => detected.push(format!("{kind}→{name}")),
            None => return Err(format!("{kind} at {} went undetected: {report}", mu.state)),
        }
    }
    let folk = search_counterexample(
        &GenConfig::default(),
        ClaimId::FolkNegationComplement,
        FOLK_TRIALS,
        SearchMode::Valid,
    )
    .map_err(|e| e.to_string())?
    .ok_or_else(|| format!("folk claim survived {FOLK_TRIALS} trials"))?;
    Ok(format!(
        "{}; folk claim refuted at trial {}",
        detected.join(", "),
        folk.trial
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("fixture correctness", fixture_correctness),
        ("proposition sweep", proposition_sweep),
        ("MR and strong plausibility", mr_and_plausibility),
        ("preference equivalences", preference_equivalences),
        ("lemma biconditionals on mutants", lemma_biconditionals),
        ("oracle agreement", oracle_agreement),
        ("round trips", round_trips),
        ("negative controls", negative_controls),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {} {title} ({detail})", i + 1),
            Err(reason) => {
                failed += 1;
                println!("FAIL {} {title}: {reason}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
