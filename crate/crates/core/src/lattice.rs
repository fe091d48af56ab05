//! Lattices of disjoint state-spaces with commuting projections.
//!
//! A [`RawLattice`] is the name-based description coming from a model file
//! or a generator. [`validate_lattice`] checks it and reports every semantic
//! violation with a witness; [`Lattice::new`] turns a valid description into
//! the indexed, immutable form used by every other module.
//!
//! Spaces are ordered by expressiveness: `a ⪯ b` means `b` is at least as
//! expressive as `a`, and a projection maps states of `b` onto states of `a`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::stateset::StateSet;

/// Index of a state-space inside a [`Lattice`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpaceId(u32);

impl SpaceId {
    pub fn new(index: usize) -> Self {
        SpaceId(index as u32)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Index of a state inside a [`Lattice`]. States of one space are contiguous.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(u32);

impl StateId {
    pub fn new(index: usize) -> Self {
        StateId(index as u32)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawSpace {
    pub name: String,
    pub states: Vec<String>,
}

/// A projection table mapping every state of `from` to a state of `to`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawProjection {
    pub from: String,
    pub to: String,
    pub map: Vec<(String, String)>,
}

/// Name-based lattice description. `order` holds pairs `(lower, upper)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawLattice {
    pub spaces: Vec<RawSpace>,
    pub order: Vec<(String, String)>,
    pub projections: Vec<RawProjection>,
}

/// Input that cannot even be interpreted as a lattice description.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructuralError {
    #[error("no spaces declared")]
    NoSpaces,
    #[error("duplicate space `{0}`")]
    DuplicateSpace(String),
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("space `{0}` has no states")]
    EmptySpace(String),
    #[error("unknown space `{0}`")]
    UnknownSpace(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("state `{state}` does not belong to space `{space}`")]
    ForeignState { state: String, space: String },
    #[error("duplicate projection table {from}→{to}")]
    DuplicateProjection { from: String, to: String },
    #[error("state `{state}` mapped twice in projection {from}→{to}")]
    DuplicateMapping {
        from: String,
        to: String,
        state: String,
    },
}

/// A semantic defect of a lattice description, with its witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    /// Two distinct spaces below each other.
    OrderCycle { a: String, b: String },
    SupMissing { a: String, b: String },
    NoLeastSpace,
    MissingProjection { from: String, to: String },
    ProjectionNotOrdered { from: String, to: String },
    PartialProjection { from: String, to: String, state: String },
    NotSurjective { from: String, to: String, missed: String },
    NotIdentity { space: String, state: String },
    NonCommuting {
        top: String,
        middle: String,
        bottom: String,
        state: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OrderCycle { a, b } => {
                write!(f, "order: {a} and {b} are distinct but below each other")
            }
            Violation::SupMissing { a, b } => write!(f, "sup missing for ({a}, {b})"),
            Violation::NoLeastSpace => write!(f, "order: no least space"),
            Violation::MissingProjection { from, to } => {
                write!(f, "missing projection {from}→{to}")
            }
            Violation::ProjectionNotOrdered { from, to } => {
                write!(f, "projection {from}→{to} given but {to} ⋠ {from}")
            }
            Violation::PartialProjection { from, to, state } => {
                write!(f, "partial projection {from}→{to}: {state} unmapped")
            }
            Violation::NotSurjective { from, to, missed } => {
                write!(f, "projection {from}→{to} is not surjective: {missed} has no preimage")
            }
            Violation::NotIdentity { space, state } => {
                write!(f, "projection {space}→{space} moves {state}")
            }
            Violation::NonCommuting {
                top,
                middle,
                bottom,
                state,
            } => write!(
                f,
                "commutation: {top}→{bottom} differs from {top}→{middle}→{bottom} at {state}"
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error(transparent)]
    Structural(#[from] StructuralError),
    #[error("invalid lattice: {}", .0.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(ValidationReport),
    #[error("projection undefined: {target} ⋠ {source_space}")]
    ProjectionUndefined { target: String, source_space: String },
    #[error("states of the base do not all lie in space `{0}`")]
    BaseOutsideSpace(String),
}

/// Name-resolved form shared by validation and construction.
struct Resolved {
    space_names: Vec<String>,
    space_states: Vec<Vec<StateId>>,
    state_names: Vec<String>,
    state_space: Vec<SpaceId>,
    local_index: Vec<usize>,
    order_pairs: Vec<(SpaceId, SpaceId)>,
    /// `tables[(from, to)][local index in from] = target state`
    tables: BTreeMap<(SpaceId, SpaceId), Vec<Option<StateId>>>,
}

fn resolve(raw: &RawLattice) -> Result<Resolved, StructuralError> {
    if raw.spaces.is_empty() {
        return Err(StructuralError::NoSpaces);
    }
    let mut spaces: Vec<&RawSpace> = raw.spaces.iter().collect();
    spaces.sort_by(|a, b| a.name.cmp(&b.name));
    let mut space_ids = BTreeMap::new();
    let mut state_ids = BTreeMap::new();
    let mut space_names = Vec::new();
    let mut space_states = Vec::new();
    let mut state_names = Vec::new();
    let mut state_space = Vec::new();
    let mut local_index = Vec::new();
    for (i, space) in spaces.iter().enumerate() {
        if space_ids.insert(space.name.clone(), SpaceId::new(i)).is_some() {
            return Err(StructuralError::DuplicateSpace(space.name.clone()));
        }
        if space.states.is_empty() {
            return Err(StructuralError::EmptySpace(space.name.clone()));
        }
        let mut names: Vec<&String> = space.states.iter().collect();
        names.sort();
        let mut ids = Vec::new();
        for (local, name) in names.into_iter().enumerate() {
            let id = StateId::new(state_names.len());
            if state_ids.insert(name.clone(), id).is_some() {
                return Err(StructuralError::DuplicateState(name.clone()));
            }
            state_names.push(name.clone());
            state_space.push(SpaceId::new(i));
            local_index.push(local);
            ids.push(id);
        }
        space_names.push(space.name.clone());
        space_states.push(ids);
    }
    let space = |name: &String| {
        space_ids
            .get(name)
            .copied()
            .ok_or_else(|| StructuralError::UnknownSpace(name.clone()))
    };
    let mut order_pairs = Vec::new();
    for (lo, hi) in &raw.order {
        order_pairs.push((space(lo)?, space(hi)?));
    }
    let mut tables = BTreeMap::new();
    for table in &raw.projections {
        let (from, to) = (space(&table.from)?, space(&table.to)?);
        if tables.contains_key(&(from, to)) {
            return Err(StructuralError::DuplicateProjection {
                from: table.from.clone(),
                to: table.to.clone(),
            });
        }
        let mut map = vec![None; space_states[from.index()].len()];
        for (src, dst) in &table.map {
            let s = *state_ids
                .get(src)
                .ok_or_else(|| StructuralError::UnknownState(src.clone()))?;
            let d = *state_ids
                .get(dst)
                .ok_or_else(|| StructuralError::UnknownState(dst.clone()))?;
            if state_space[s.index()] != from {
                return Err(StructuralError::ForeignState {
                    state: src.clone(),
                    space: table.from.clone(),
                });
            }
            if state_space[d.index()] != to {
                return Err(StructuralError::ForeignState {
                    state: dst.clone(),
                    space: table.to.clone(),
                });
            }
            let slot = &mut map[local_index[s.index()]];
            if slot.is_some() {
                return Err(StructuralError::DuplicateMapping {
                    from: table.from.clone(),
                    to: table.to.clone(),
                    state: src.clone(),
                });
            }
            *slot = Some(d);
        }
        tables.insert((from, to), map);
    }
    Ok(Resolved {
        space_names,
        space_states,
        state_names,
        state_space,
        local_index,
        order_pairs,
        tables,
    })
}

fn closure(n: usize, pairs: &[(SpaceId, SpaceId)]) -> Vec<Vec<bool>> {
    let mut leq = vec![vec![false; n]; n];
    for (i, row) in leq.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(lo, hi) in pairs {
        leq[lo.index()][hi.index()] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if leq[i][k] {
                for j in 0..n {
                    if leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
    }
    leq
}

fn least_upper_bound(leq: &[Vec<bool>], a: usize, b: usize) -> Option<usize> {
    let n = leq.len();
    let uppers: Vec<usize> = (0..n).filter(|&c| leq[a][c] && leq[b][c]).collect();
    uppers
        .iter()
        .copied()
        .find(|&c| uppers.iter().all(|&u| leq[c][u]))
}

/// Check a lattice description, returning every violated invariant.
///
/// Structural problems (duplicate or unknown identifiers) are returned as
/// errors; semantic ones are collected in the report.
pub fn validate_lattice(raw: &RawLattice) -> Result<ValidationReport, StructuralError> {
    let r = resolve(raw)?;
    Ok(ValidationReport {
        violations: semantic_violations(&r),
    })
}

fn semantic_violations(r: &Resolved) -> Vec<Violation> {
    let n = r.space_names.len();
    let name = |s: usize| r.space_names[s].clone();
    let state_name = |s: StateId| r.state_names[s.index()].clone();
    let leq = closure(n, &r.order_pairs);
    let mut out = Vec::new();

    let mut cyclic = false;
    for a in 0..n {
        for b in a + 1..n {
            if leq[a][b] && leq[b][a] {
                cyclic = true;
                out.push(Violation::OrderCycle {
                    a: name(a),
                    b: name(b),
                });
            }
        }
    }
    if !cyclic {
        for a in 0..n {
            for b in a + 1..n {
                if least_upper_bound(&leq, a, b).is_none() {
                    out.push(Violation::SupMissing {
                        a: name(a),
                        b: name(b),
                    });
                }
            }
        }
        if !(0..n).any(|s| (0..n).all(|t| leq[s][t])) {
            out.push(Violation::NoLeastSpace);
        }
    }

    for (&(from, to), map) in &r.tables {
        let (f, t) = (from.index(), to.index());
        if !leq[t][f] {
            out.push(Violation::ProjectionNotOrdered {
                from: name(f),
                to: name(t),
            });
            continue;
        }
        for (local, target) in map.iter().enumerate() {
            let src = r.space_states[f][local];
            match target {
                None => out.push(Violation::PartialProjection {
                    from: name(f),
                    to: name(t),
                    state: state_name(src),
                }),
                Some(dst) if f == t && *dst != src => out.push(Violation::NotIdentity {
                    space: name(f),
                    state: state_name(src),
                }),
                _ => {}
            }
        }
        let hit: BTreeSet<StateId> = map.iter().flatten().copied().collect();
        if let Some(missed) = r.space_states[t].iter().find(|s| !hit.contains(s)) {
            out.push(Violation::NotSurjective {
                from: name(f),
                to: name(t),
                missed: state_name(*missed),
            });
        }
    }
    for f in 0..n {
        for t in 0..n {
            if f != t && leq[t][f] && !r.tables.contains_key(&(SpaceId::new(f), SpaceId::new(t))) {
                out.push(Violation::MissingProjection {
                    from: name(f),
                    to: name(t),
                });
            }
        }
    }

    let apply = |from: usize, to: usize, s: StateId| -> Option<StateId> {
        if from == to {
            return Some(s);
        }
        r.tables
            .get(&(SpaceId::new(from), SpaceId::new(to)))
            .and_then(|m| m[r.local_index[s.index()]])
    };
    for top in 0..n {
        for mid in 0..n {
            for bot in 0..n {
                let chain = top != mid && mid != bot && leq[mid][top] && leq[bot][mid];
                if !chain {
                    continue;
                }
                for &s in &r.space_states[top] {
                    let direct = apply(top, bot, s);
                    let via = apply(top, mid, s).and_then(|m| apply(mid, bot, m));
                    if let (Some(d), Some(v)) = (direct, via) {
                        if d != v {
                            out.push(Violation::NonCommuting {
                                top: name(top),
                                middle: name(mid),
                                bottom: name(bot),
                                state: state_name(s),
                            });
                            break;
                        }
                    }
                }
            }
        }
    }
    out
}

/// A validated lattice of disjoint state-spaces.
///
/// Spaces are indexed in name order and states in (space, name) order, so
/// two descriptions of the same lattice produce equal values regardless of
/// declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    space_names: Vec<String>,
    space_states: Vec<Vec<StateId>>,
    space_sets: Vec<StateSet>,
    state_names: Vec<String>,
    state_space: Vec<SpaceId>,
    leq: Vec<Vec<bool>>,
    sup: Vec<Vec<SpaceId>>,
    bottom: SpaceId,
    /// `down[state][space]` is the projection of `state` to `space`, when defined.
    down: Vec<Vec<Option<StateId>>>,
}

impl Lattice {
    pub fn new(raw: &RawLattice) -> Result<Lattice, LatticeError> {
        let r = resolve(raw)?;
        let violations = semantic_violations(&r);
        if !violations.is_empty() {
            return Err(LatticeError::Invalid(ValidationReport { violations }));
        }
        let n = r.space_names.len();
        let leq = closure(n, &r.order_pairs);
        let sup = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| SpaceId::new(least_upper_bound(&leq, a, b).expect("validated")))
                    .collect()
            })
            .collect();
        let bottom = SpaceId::new((0..n).find(|&s| (0..n).all(|t| leq[s][t])).expect("validated"));
        let down = (0..r.state_names.len())
            .map(|i| {
                let own = r.state_space[i].index();
                (0..n)
                    .map(|t| {
                        if t == own {
                            Some(StateId::new(i))
                        } else if leq[t][own] {
                            r.tables[&(SpaceId::new(own), SpaceId::new(t))][r.local_index[i]]
                        } else {
                            None
                        }
                    })
                    .collect()
            })
            .collect();
        let space_sets = r
            .space_states
            .iter()
            .map(|states| states.iter().copied().collect())
            .collect();
        Ok(Lattice {
            space_names: r.space_names,
            space_states: r.space_states,
            space_sets,
            state_names: r.state_names,
            state_space: r.state_space,
            leq,
            sup,
            bottom,
            down,
        })
    }

    pub fn space_count(&self) -> usize {
        self.space_names.len()
    }

    pub fn state_count(&self) -> usize {
        self.state_names.len()
    }

    pub fn spaces(&self) -> impl Iterator<Item = SpaceId> + '_ {
        (0..self.space_count()).map(SpaceId::new)
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.state_count()).map(StateId::new)
    }

    pub fn states_of(&self, space: SpaceId) -> &[StateId] {
        &self.space_states[space.index()]
    }

    /// The states of `space` as a set.
    pub fn space_set(&self, space: SpaceId) -> &StateSet {
        &self.space_sets[space.index()]
    }

    pub fn all_states(&self) -> StateSet {
        self.states().collect()
    }

    pub fn space_of(&self, state: StateId) -> SpaceId {
        self.state_space[state.index()]
    }

    pub fn space_name(&self, space: SpaceId) -> &str {
        &self.space_names[space.index()]
    }

    pub fn state_name(&self, state: StateId) -> &str {
        &self.state_names[state.index()]
    }

    pub fn space_by_name(&self, name: &str) -> Option<SpaceId> {
        self.space_names
            .iter()
            .position(|n| n == name)
            .map(SpaceId::new)
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.state_names
            .iter()
            .position(|n| n == name)
            .map(StateId::new)
    }

    /// `a ⪯ b`: `b` is at least as expressive as `a`.
    pub fn leq(&self, a: SpaceId, b: SpaceId) -> bool {
        self.leq[a.index()][b.index()]
    }

    pub fn bottom(&self) -> SpaceId {
        self.bottom
    }

    pub fn top(&self) -> SpaceId {
        self.sup_space(self.spaces()).expect("lattice has at least one space")
    }

    pub fn sup_pair(&self, a: SpaceId, b: SpaceId) -> SpaceId {
        self.sup[a.index()][b.index()]
    }

    /// Least upper bound of a nonempty collection of spaces.
    pub fn sup_space<I: IntoIterator<Item = SpaceId>>(&self, spaces: I) -> Option<SpaceId> {
        spaces.into_iter().reduce(|a, b| self.sup_pair(a, b))
    }

    /// Greatest lower bound of two spaces.
    pub fn meet_pair(&self, a: SpaceId, b: SpaceId) -> SpaceId {
        let lowers: Vec<SpaceId> = self
            .spaces()
            .filter(|&c| self.leq(c, a) && self.leq(c, b))
            .collect();
        *lowers
            .iter()
            .find(|&&c| lowers.iter().all(|&l| self.leq(l, c)))
            .expect("finite lattice with a least space has all meets")
    }

    /// Spaces strictly or weakly below `space`.
    pub fn spaces_below(&self, space: SpaceId) -> impl Iterator<Item = SpaceId> + '_ {
        self.spaces().filter(move |&s| self.leq(s, space))
    }

    /// `r_space^{S_state}(state)`.
    pub fn project(&self, state: StateId, space: SpaceId) -> Result<StateId, LatticeError> {
        self.try_project(state, space)
            .ok_or_else(|| LatticeError::ProjectionUndefined {
                target: self.space_name(space).to_owned(),
                source_space: self.space_name(self.space_of(state)).to_owned(),
            })
    }

    pub fn try_project(&self, state: StateId, space: SpaceId) -> Option<StateId> {
        self.down[state.index()][space.index()]
    }

    /// Projection of a set of states of one space into `space` (`D_S`).
    pub fn project_set(&self, set: &StateSet, space: SpaceId) -> Option<StateSet> {
        set.iter().map(|s| self.try_project(s, space)).collect()
    }

    /// Union of the upward closures of the members of `set`, grouped by
    /// space. For a set inside one space this is the usual `D↑`.
    pub fn up_set(&self, set: &StateSet) -> StateSet {
        if set.is_empty() {
            return StateSet::new();
        }
        self.states()
            .filter(|&w| {
                self.spaces()
                    .any(|s| self.try_project(w, s).is_some_and(|p| set.contains(p)))
            })
            .collect()
    }

    /// The single space containing every member of `set`, if there is one.
    pub fn common_space(&self, set: &StateSet) -> Option<SpaceId> {
        let mut it = set.iter().map(|s| self.space_of(s));
        let first = it.next()?;
        it.all(|s| s == first).then_some(first)
    }

    /// Canonical name-based description: spaces and states sorted, the
    /// covering pairs of the order, and a projection table for every
    /// strictly comparable pair.
    pub fn to_raw(&self) -> RawLattice {
        let spaces = self
            .spaces()
            .map(|s| RawSpace {
                name: self.space_name(s).to_owned(),
                states: self
                    .states_of(s)
                    .iter()
                    .map(|&w| self.state_name(w).to_owned())
                    .collect(),
            })
            .collect();
        let mut order = Vec::new();
        let mut projections = Vec::new();
        for hi in self.spaces() {
            for lo in self.spaces() {
                if lo == hi || !self.leq(lo, hi) {
                    continue;
                }
                let covered = self
                    .spaces()
                    .any(|m| m != lo && m != hi && self.leq(lo, m) && self.leq(m, hi));
                if !covered {
                    order.push((
                        self.space_name(lo).to_owned(),
                        self.space_name(hi).to_owned(),
                    ));
                }
                projections.push(RawProjection {
                    from: self.space_name(hi).to_owned(),
                    to: self.space_name(lo).to_owned(),
                    map: self
                        .states_of(hi)
                        .iter()
                        .map(|&w| {
                            let p = self.try_project(w, lo).expect("comparable");
                            (self.state_name(w).to_owned(), self.state_name(p).to_owned())
                        })
                        .collect(),
                });
            }
        }
        order.sort();
        projections.sort_by(|a, b| (&a.from, &a.to).cmp(&(&b.from, &b.to)));
        RawLattice {
            spaces,
            order,
            projections,
        }
    }
}
