//! Hand-built reference models.
//!
//! `m1` and `m2` share a two-space chain `Sa = {a1} ⪯ Sb = {b1, b2}`. In
//! `m1` every state considers only `a1` possible, so nothing about `Sb` is
//! expressible to the decision maker; in `m2` every state knows itself.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::epistemics::Correspondence;
use crate::lattice::{Lattice, RawLattice, RawProjection, RawSpace};
use crate::model::UnawarenessModel;
use crate::preferences::{induce_preferences, PreferenceModel, WeightScheme};
use crate::stateset::StateSet;

fn space(name: &str, states: &[&str]) -> RawSpace {
    RawSpace {
        name: name.into(),
        states: states.iter().map(|s| s.to_string()).collect(),
    }
}

fn proj(from: &str, to: &str, map: &[(&str, &str)]) -> RawProjection {
    RawProjection {
        from: from.into(),
        to: to.into(),
        map: map.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
    }
}

fn order(pairs: &[(&str, &str)]) -> Vec<(String, String)> {
    pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

pub fn m1_lattice() -> Lattice {
    Lattice::new(&RawLattice {
        spaces: vec![space("Sa", &["a1"]), space("Sb", &["b1", "b2"])],
        order: order(&[("Sa", "Sb")]),
        projections: vec![proj("Sb", "Sa", &[("b1", "a1"), ("b2", "a1")])],
    })
    .expect("valid fixture")
}

/// `C0 = {c} ⪯ C1 = {m1, m2} ⪯ C2 = {t1, t2, t3, t4}` with `t1, t2 ↦ m1`
/// and `t3, t4 ↦ m2`.
pub fn chain3_lattice() -> Lattice {
    Lattice::new(&RawLattice {
        spaces: vec![
            space("C0", &["c"]),
            space("C1", &["m1", "m2"]),
            space("C2", &["t1", "t2", "t3", "t4"]),
        ],
        order: order(&[("C0", "C1"), ("C1", "C2")]),
        projections: vec![
            proj("C1", "C0", &[("m1", "c"), ("m2", "c")]),
            proj(
                "C2",
                "C1",
                &[("t1", "m1"), ("t2", "m1"), ("t3", "m2"), ("t4", "m2")],
            ),
            proj(
                "C2",
                "C0",
                &[("t1", "c"), ("t2", "c"), ("t3", "c"), ("t4", "c")],
            ),
        ],
    })
    .expect("valid fixture")
}

/// Bottom `B = {x}`, incomparable middles `L = {l1, l2}` and `R = {r1, r2}`,
/// top `T` whose state `tij` projects to `li` and `rj`.
pub fn diamond_lattice() -> Lattice {
    let tops = ["t11", "t12", "t21", "t22"];
    Lattice::new(&RawLattice {
        spaces: vec![
            space("B", &["x"]),
            space("L", &["l1", "l2"]),
            space("R", &["r1", "r2"]),
            space("T", &tops),
        ],
        order: order(&[("B", "L"), ("B", "R"), ("L", "T"), ("R", "T")]),
        projections: vec![
            proj("L", "B", &[("l1", "x"), ("l2", "x")]),
            proj("R", "B", &[("r1", "x"), ("r2", "x")]),
            proj("T", "B", &tops.map(|t| (t, "x"))),
            proj(
                "T",
                "L",
                &[("t11", "l1"), ("t12", "l1"), ("t21", "l2"), ("t22", "l2")],
            ),
            proj(
                "T",
                "R",
                &[("t11", "r1"), ("t12", "r2"), ("t21", "r1"), ("t22", "r2")],
            ),
        ],
    })
    .expect("valid fixture")
}

fn correspondence(lat: &Lattice, entries: &[(&str, &[&str])]) -> Correspondence {
    let mut pi = vec![StateSet::new(); lat.state_count()];
    for (w, value) in entries {
        let w = lat.state_by_name(w).expect("fixture state");
        pi[w.index()] = value
            .iter()
            .map(|v| lat.state_by_name(v).expect("fixture state"))
            .collect();
    }
    Correspondence::new(lat, pi).expect("total fixture")
}

fn point_weights(lat: &Lattice, entries: &[(&str, &str)]) -> PreferenceModel {
    let n = lat.state_count();
    let mut w = vec![vec![BigRational::zero(); n]; n];
    for (from, to) in entries {
        let from = lat.state_by_name(from).expect("fixture state");
        let to = lat.state_by_name(to).expect("fixture state");
        w[from.index()][to.index()] = BigRational::one();
    }
    PreferenceModel::new(lat, w).expect("nonnegative fixture")
}

fn bundle(lattice: Lattice, c: Correspondence, p: PreferenceModel) -> UnawarenessModel {
    UnawarenessModel {
        lattice,
        correspondence: Some(c),
        preferences: Some(p),
        events: Vec::new(),
    }
}

/// Nobody is aware of `Sb`: `Π(·) = {a1}`, weights `δ_{a1}`.
pub fn m1() -> UnawarenessModel {
    let lat = m1_lattice();
    let c = correspondence(&lat, &[("a1", &["a1"]), ("b1", &["a1"]), ("b2", &["a1"])]);
    let p = point_weights(&lat, &[("a1", "a1"), ("b1", "a1"), ("b2", "a1")]);
    bundle(lat, c, p)
}

/// Full information: `Π(ω) = {ω}`, weights `δ_ω`.
pub fn m2() -> UnawarenessModel {
    let lat = m1_lattice();
    let c = correspondence(&lat, &[("a1", &["a1"]), ("b1", &["b1"]), ("b2", &["b2"])]);
    let p = point_weights(&lat, &[("a1", "a1"), ("b1", "b1"), ("b2", "b2")]);
    bundle(lat, c, p)
}

/// Three-space chain: `t1, t2` see their top cell, `t3, t4` are only aware
/// of `C1`.
pub fn chain3() -> UnawarenessModel {
    let lat = chain3_lattice();
    let c = correspondence(
        &lat,
        &[
            ("c", &["c"]),
            ("m1", &["m1"]),
            ("m2", &["m2"]),
            ("t1", &["t1", "t2"]),
            ("t2", &["t1", "t2"]),
            ("t3", &["m2"]),
            ("t4", &["m2"]),
        ],
    );
    let p = induce_preferences(&lat, &c, WeightScheme::Uniform);
    bundle(lat, c, p)
}

/// Diamond: top states are aware of `L` only, `R` states of nothing.
pub fn diamond() -> UnawarenessModel {
    let lat = diamond_lattice();
    let c = correspondence(
        &lat,
        &[
            ("x", &["x"]),
            ("l1", &["l1"]),
            ("l2", &["l2"]),
            ("r1", &["x"]),
            ("r2", &["x"]),
            ("t11", &["l1"]),
            ("t12", &["l1"]),
            ("t21", &["l2"]),
            ("t22", &["l2"]),
        ],
    );
    let p = induce_preferences(&lat, &c, WeightScheme::SeededRandom(11));
    bundle(lat, c, p)
}

pub fn all() -> Vec<UnawarenessModel> {
    vec![m1(), m2(), chain3(), diamond()]
}
