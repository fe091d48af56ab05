//! The `.uam` text format.
//!
//! One declaration per line, `#` starts a comment:
//!
//! ```text
//! space Sa = { a1 }
//! space Sb = { b1, b2 }
//! order Sa < Sb
//! project Sb -> Sa { b1: a1, b2: a1 }
//! pi a1 = { a1 }
//! weights b1 = { a1: 1, b2: 1/2 }
//! event E = U(up(Sb, { b1 }))
//! ```
//!
//! `pi` and `weights` sections are optional, but once present must cover
//! every state. Weights are integers or `p/q` rationals; states missing
//! from a weight row get weight zero.

mod expr;
mod lexer;

pub use expr::EventExpr;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::epistemics::Correspondence;
use crate::lattice::{Lattice, LatticeError, RawLattice, RawProjection, RawSpace, SpaceId, StateId};
use crate::model::UnawarenessModel;
use crate::preferences::PreferenceModel;
use crate::stateset::StateSet;

use expr::{bind, ExprParser, Names, RawExpr};
use lexer::{lex_line, Tok, Token};

/// One-based line and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl Span {
    pub fn new(line: usize, col: usize) -> Self {
        Span { line, col }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagnosticCode {
    Syntax,
    NoSpaces,
    EmptySpace,
    UnknownIdentifier,
    Duplicate,
    PartialProjection,
    PartialPi,
    PartialWeights,
    BadRational,
    MissingData,
    InvalidLattice,
}

impl DiagnosticCode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagnosticCode::Syntax => "syntax",
            DiagnosticCode::NoSpaces => "no-spaces",
            DiagnosticCode::EmptySpace => "empty-space",
            DiagnosticCode::UnknownIdentifier => "unknown-identifier",
            DiagnosticCode::Duplicate => "duplicate",
            DiagnosticCode::PartialProjection => "partial-projection",
            DiagnosticCode::PartialPi => "partial-pi",
            DiagnosticCode::PartialWeights => "partial-weights",
            DiagnosticCode::BadRational => "bad-rational",
            DiagnosticCode::MissingData => "missing-data",
            DiagnosticCode::InvalidLattice => "invalid-lattice",
        }
    }
}

impl fmt::Display for DiagnosticCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub code: DiagnosticCode,
    pub span: Span,
    pub message: String,
}

impl Diagnostic {
    pub fn new(code: DiagnosticCode, span: Span, message: impl Into<String>) -> Self {
        Diagnostic {
            code,
            span,
            message: message.into(),
        }
    }

    /// `file:line:col: code: message`.
    pub fn render(&self, file: &str) -> String {
        format!("{file}:{self}")
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: {}: {}",
            self.span.line, self.span.col, self.code, self.message
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceDecl {
    pub name: String,
    pub states: Vec<(String, Span)>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderDecl {
    pub lower: String,
    pub upper: String,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectDecl {
    pub from: String,
    pub to: String,
    pub map: Vec<(String, String, Span)>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiDecl {
    pub state: String,
    pub value: Vec<(String, Span)>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightDecl {
    pub state: String,
    pub entries: Vec<(String, BigRational, Span)>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventDecl {
    pub name: String,
    pub(crate) expr: RawExpr,
    pub span: Span,
}

/// A parsed document whose names are all declared and whose tables are
/// total. Lattice-level validity is checked by [`ModelDocument::resolve`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModelDocument {
    pub spaces: Vec<SpaceDecl>,
    pub order: Vec<OrderDecl>,
    pub projections: Vec<ProjectDecl>,
    pub pi: Vec<PiDecl>,
    pub weights: Vec<WeightDecl>,
    pub events: Vec<EventDecl>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("{0}")]
    Event(Diagnostic),
}

struct LineParser<'a> {
    toks: &'a [Token],
    pos: usize,
    end: Span,
}

impl<'a> LineParser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> Span {
        self.peek().map_or(self.end, |t| t.span)
    }

    fn err(&self, msg: impl Into<String>) -> Diagnostic {
        Diagnostic::new(DiagnosticCode::Syntax, self.here(), msg)
    }

    fn found(&self) -> String {
        self.peek()
            .map_or_else(|| "end of line".to_owned(), |t| t.tok.describe())
    }

    fn expect(&mut self, tok: Tok) -> Result<Span, Diagnostic> {
        match self.peek() {
            Some(t) if t.tok == tok => {
                self.pos += 1;
                Ok(t.span)
            }
            _ => Err(self.err(format!("expected {}, found {}", tok.describe(), self.found()))),
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Span), Diagnostic> {
        match self.peek() {
            Some(Token {
                tok: Tok::Ident(s),
                span,
            }) => {
                self.pos += 1;
                Ok((s.clone(), *span))
            }
            _ => Err(self.err(format!("expected {what}, found {}", self.found()))),
        }
    }

    fn at(&self, tok: &Tok) -> bool {
        self.peek().is_some_and(|t| &t.tok == tok)
    }

    fn finish(&self) -> Result<(), Diagnostic> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(self.err(format!("unexpected {} after declaration", t.tok.describe()))),
        }
    }

    /// `{ item, item, ... }` where each item is parsed by `item`.
    fn braced<T>(
        &mut self,
        mut item: impl FnMut(&mut Self) -> Result<T, Diagnostic>,
    ) -> Result<Vec<T>, Diagnostic> {
        self.expect(Tok::LBrace)?;
        let mut out = Vec::new();
        if self.at(&Tok::RBrace) {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.at(&Tok::Comma) {
                self.pos += 1;
            } else {
                self.expect(Tok::RBrace)?;
                return Ok(out);
            }
        }
    }
}

fn parse_rational(text: &str, span: Span) -> Result<BigRational, Diagnostic> {
    let bad = |msg: String| Diagnostic::new(DiagnosticCode::BadRational, span, msg);
    if text.starts_with('-') {
        return Err(bad(format!("`{text}`: weights must be nonnegative")));
    }
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    let ok = match text.split_once('/') {
        None => digits(text),
        Some((n, d)) => digits(n) && digits(d) && d.bytes().any(|b| b != b'0'),
    };
    if !ok {
        return Err(bad(format!(
            "`{text}` is not a rational literal (write an integer or p/q)"
        )));
    }
    BigRational::from_str(text).map_err(|_| bad(format!("`{text}` is not a rational literal")))
}

fn parse_line(doc: &mut ModelDocument, toks: &[Token], line_no: usize, line_len: usize) -> Result<(), Diagnostic> {
    let mut p = LineParser {
        toks,
        pos: 0,
        end: Span::new(line_no, line_len + 1),
    };
    let (keyword, span) = p.ident("a declaration keyword")?;
    match keyword.as_str() {
        "space" => {
            let (name, _) = p.ident("a space name")?;
            p.expect(Tok::Eq)?;
            let states = p.braced(|p| p.ident("a state name"))?;
            p.finish()?;
            doc.spaces.push(SpaceDecl { name, states, span });
        }
        "order" => {
            let (lower, _) = p.ident("a space name")?;
            p.expect(Tok::Less)?;
            let (upper, _) = p.ident("a space name")?;
            p.finish()?;
            doc.order.push(OrderDecl { lower, upper, span });
        }
        "project" => {
            let (from, _) = p.ident("a space name")?;
            p.expect(Tok::Arrow)?;
            let (to, _) = p.ident("a space name")?;
            let map = p.braced(|p| {
                let (a, sp) = p.ident("a state name")?;
                p.expect(Tok::Colon)?;
                let (b, _) = p.ident("a state name")?;
                Ok((a, b, sp))
            })?;
            p.finish()?;
            doc.projections.push(ProjectDecl { from, to, map, span });
        }
        "pi" => {
            let (state, _) = p.ident("a state name")?;
            p.expect(Tok::Eq)?;
            let value = p.braced(|p| p.ident("a state name"))?;
            p.finish()?;
            doc.pi.push(PiDecl { state, value, span });
        }
        "weights" => {
            let (state, _) = p.ident("a state name")?;
            p.expect(Tok::Eq)?;
            let entries = p.braced(|p| {
                let (t, sp) = p.ident("a state name")?;
                p.expect(Tok::Colon)?;
                match p.peek() {
                    Some(Token {
                        tok: Tok::Number(n),
                        span,
                    }) => {
                        p.pos += 1;
                        Ok((t, parse_rational(n, *span)?, sp))
                    }
                    Some(Token {
                        tok: Tok::Ident(n),
                        span,
                    }) => Err(Diagnostic::new(
                        DiagnosticCode::BadRational,
                        *span,
                        format!("`{n}` is not a rational literal"),
                    )),
                    _ => Err(p.err(format!("expected a weight, found {}", p.found()))),
                }
            })?;
            p.finish()?;
            doc.weights.push(WeightDecl { state, entries, span });
        }
        "event" => {
            let (name, _) = p.ident("an event name")?;
            p.expect(Tok::Eq)?;
            let mut ep = ExprParser::new(&toks[p.pos..], p.end);
            let expr = ep.parse()?;
            p.pos += ep.pos();
            p.finish()?;
            doc.events.push(EventDecl { name, expr, span });
        }
        other => {
            return Err(Diagnostic::new(
                DiagnosticCode::Syntax,
                span,
                format!("unknown declaration `{other}`"),
            ))
        }
    }
    Ok(())
}

/// Provisional name table built from declarations, used to check names
/// before the lattice exists.
struct NameTable {
    spaces: HashMap<String, SpaceId>,
    states: HashMap<String, (StateId, SpaceId)>,
    members: Vec<StateSet>,
}

impl Names for NameTable {
    fn space(&self, name: &str) -> Option<SpaceId> {
        self.spaces.get(name).copied()
    }

    fn state(&self, name: &str) -> Option<StateId> {
        self.states.get(name).map(|p| p.0)
    }

    fn space_of(&self, state: StateId) -> SpaceId {
        self.states
            .values()
            .find(|(s, _)| *s == state)
            .map(|p| p.1)
            .expect("state from this table")
    }

    fn all_states(&self, space: SpaceId) -> StateSet {
        self.members[space.index()].clone()
    }
}

/// `failed` holds the keywords of lines that did not parse; coverage
/// checks for those sections are skipped to avoid cascading reports.
fn check_names(doc: &ModelDocument, failed: &HashSet<String>, diags: &mut Vec<Diagnostic>) {
    use DiagnosticCode as C;
    let mut table = NameTable {
        spaces: HashMap::new(),
        states: HashMap::new(),
        members: Vec::new(),
    };
    if doc.spaces.is_empty() && !failed.contains("space") {
        diags.push(Diagnostic::new(C::NoSpaces, Span::new(1, 1), "no spaces declared"));
    }
    for s in &doc.spaces {
        if table.spaces.contains_key(&s.name) {
            diags.push(Diagnostic::new(C::Duplicate, s.span, format!("space `{}` declared twice", s.name)));
            continue;
        }
        if s.states.is_empty() {
            diags.push(Diagnostic::new(C::EmptySpace, s.span, format!("space `{}` has no states", s.name)));
        }
        let id = SpaceId::new(table.members.len());
        table.spaces.insert(s.name.clone(), id);
        let mut members = StateSet::new();
        for (st, sp) in &s.states {
            if table.states.contains_key(st) {
                diags.push(Diagnostic::new(C::Duplicate, *sp, format!("state `{st}` declared twice")));
                continue;
            }
            let sid = StateId::new(table.states.len());
            table.states.insert(st.clone(), (sid, id));
            members.insert(sid);
        }
        table.members.push(members);
    }
    let unknown_space = |name: &str, span: Span| {
        Diagnostic::new(C::UnknownIdentifier, span, format!("unknown space `{name}`"))
    };
    for o in &doc.order {
        for n in [&o.lower, &o.upper] {
            if table.space(n).is_none() {
                diags.push(unknown_space(n, o.span));
            }
        }
    }
    let mut tables = HashSet::new();
    for pr in &doc.projections {
        let (Some(from), Some(to)) = (table.space(&pr.from), table.space(&pr.to)) else {
            for n in [&pr.from, &pr.to] {
                if table.space(n).is_none() {
                    diags.push(unknown_space(n, pr.span));
                }
            }
            continue;
        };
        if !tables.insert((from, to)) {
            diags.push(Diagnostic::new(
                C::Duplicate,
                pr.span,
                format!("projection {}→{} declared twice", pr.from, pr.to),
            ));
            continue;
        }
        let mut mapped = HashSet::new();
        for (a, b, sp) in &pr.map {
            match table.states.get(a) {
                Some(&(_, s)) if s == from => {}
                Some(_) => {
                    diags.push(Diagnostic::new(C::UnknownIdentifier, *sp, format!("state `{a}` is not in {}", pr.from)));
                    continue;
                }
                None => {
                    diags.push(Diagnostic::new(C::UnknownIdentifier, *sp, format!("unknown state `{a}`")));
                    continue;
                }
            }
            match table.states.get(b) {
                Some(&(_, s)) if s == to => {}
                Some(_) => diags.push(Diagnostic::new(C::UnknownIdentifier, *sp, format!("state `{b}` is not in {}", pr.to))),
                None => diags.push(Diagnostic::new(C::UnknownIdentifier, *sp, format!("unknown state `{b}`"))),
            }
            if !mapped.insert(a.clone()) {
                diags.push(Diagnostic::new(C::Duplicate, *sp, format!("`{a}` mapped twice")));
            }
        }
        let decl = doc.spaces.iter().find(|s| s.name == pr.from).expect("known space");
        for (st, _) in decl.states.iter().filter(|_| !failed.contains("project")) {
            if !mapped.contains(st) {
                diags.push(Diagnostic::new(
                    C::PartialProjection,
                    pr.span,
                    format!("partial projection {}→{}: {st} unmapped", pr.from, pr.to),
                ));
            }
        }
    }
    let all_states: Vec<&String> = doc.spaces.iter().flat_map(|s| s.states.iter().map(|p| &p.0)).collect();
    let unknown_state = |name: &str, span: Span| {
        Diagnostic::new(C::UnknownIdentifier, span, format!("unknown state `{name}`"))
    };
    let mut seen = HashSet::new();
    for d in &doc.pi {
        if !table.states.contains_key(&d.state) {
            diags.push(unknown_state(&d.state, d.span));
        } else if !seen.insert(d.state.clone()) {
            diags.push(Diagnostic::new(C::Duplicate, d.span, format!("pi for `{}` given twice", d.state)));
        }
        for (v, sp) in &d.value {
            if !table.states.contains_key(v) {
                diags.push(unknown_state(v, *sp));
            }
        }
    }
    if let Some(first) = doc.pi.first().filter(|_| !failed.contains("pi")) {
        for st in &all_states {
            if !seen.contains(*st) {
                diags.push(Diagnostic::new(C::PartialPi, first.span, format!("no pi entry for `{st}`")));
            }
        }
    }
    let mut seen = HashSet::new();
    for d in &doc.weights {
        if !table.states.contains_key(&d.state) {
            diags.push(unknown_state(&d.state, d.span));
        } else if !seen.insert(d.state.clone()) {
            diags.push(Diagnostic::new(C::Duplicate, d.span, format!("weights for `{}` given twice", d.state)));
        }
        let mut targets = HashSet::new();
        for (t, _, sp) in &d.entries {
            if !table.states.contains_key(t) {
                diags.push(unknown_state(t, *sp));
            } else if !targets.insert(t.clone()) {
                diags.push(Diagnostic::new(C::Duplicate, *sp, format!("weight on `{t}` given twice")));
            }
        }
    }
    if let Some(first) = doc.weights.first().filter(|_| !failed.contains("weights")) {
        for st in &all_states {
            if !seen.contains(*st) {
                diags.push(Diagnostic::new(C::PartialWeights, first.span, format!("no weights entry for `{st}`")));
            }
        }
    }
    let has_data = !doc.pi.is_empty() || !doc.weights.is_empty();
    let mut events = HashMap::new();
    for ev in &doc.events {
        if events.contains_key(&ev.name) || ev.name == "omega" {
            diags.push(Diagnostic::new(C::Duplicate, ev.span, format!("event `{}` declared twice", ev.name)));
            continue;
        }
        if !has_data && ev.expr.uses_operators() {
            diags.push(Diagnostic::new(
                C::MissingData,
                ev.expr.span(),
                "K, A and U need a pi or weights section",
            ));
            continue;
        }
        match bind(&table, &events, &ev.expr) {
            Ok(bound) => {
                events.insert(ev.name.clone(), bound);
            }
            Err(d) => diags.push(d),
        }
    }
}

/// Parse and name-check a document. Diagnostics are sorted by position.
pub fn parse_document(src: &str) -> Result<ModelDocument, Vec<Diagnostic>> {
    let mut doc = ModelDocument::default();
    let mut diags = Vec::new();
    let mut failed = HashSet::new();
    for (i, line) in src.lines().enumerate() {
        let line_no = i + 1;
        match lex_line(line, line_no) {
            Ok(toks) if toks.is_empty() => {}
            Ok(toks) => {
                if let Err(d) = parse_line(&mut doc, &toks, line_no, line.chars().count()) {
                    if let Tok::Ident(k) = &toks[0].tok {
                        failed.insert(k.clone());
                    }
                    diags.push(d);
                }
            }
            Err(d) => {
                if let Some(k) = line.split_whitespace().next() {
                    failed.insert(k.to_owned());
                }
                diags.push(d);
            }
        }
    }
    check_names(&doc, &failed, &mut diags);
    if diags.is_empty() {
        Ok(doc)
    } else {
        diags.sort_by_key(|d| d.span);
        Err(diags)
    }
}

fn names_to_set(lat: &Lattice, names: impl IntoIterator<Item = impl AsRef<str>>) -> StateSet {
    names
        .into_iter()
        .map(|n| lat.state_by_name(n.as_ref()).expect("checked name"))
        .collect()
}

impl ModelDocument {
    pub fn raw_lattice(&self) -> RawLattice {
        RawLattice {
            spaces: self
                .spaces
                .iter()
                .map(|s| RawSpace {
                    name: s.name.clone(),
                    states: s.states.iter().map(|p| p.0.clone()).collect(),
                })
                .collect(),
            order: self
                .order
                .iter()
                .map(|o| (o.lower.clone(), o.upper.clone()))
                .collect(),
            projections: self
                .projections
                .iter()
                .map(|p| RawProjection {
                    from: p.from.clone(),
                    to: p.to.clone(),
                    map: p.map.iter().map(|(a, b, _)| (a.clone(), b.clone())).collect(),
                })
                .collect(),
        }
    }

    /// Build the model. Fails if the lattice is invalid.
    pub fn resolve(&self) -> Result<UnawarenessModel, ResolveError> {
        let lattice = Lattice::new(&self.raw_lattice())?;
        let correspondence = (!self.pi.is_empty()).then(|| {
            let mut pi = vec![StateSet::new(); lattice.state_count()];
            for d in &self.pi {
                let w = lattice.state_by_name(&d.state).expect("checked name");
                pi[w.index()] = names_to_set(&lattice, d.value.iter().map(|p| &p.0));
            }
            Correspondence::new(&lattice, pi).expect("sized to the lattice")
        });
        let preferences = (!self.weights.is_empty()).then(|| {
            let n = lattice.state_count();
            let mut w = vec![vec![BigRational::zero(); n]; n];
            for d in &self.weights {
                let s = lattice.state_by_name(&d.state).expect("checked name");
                for (t, v, _) in &d.entries {
                    let t = lattice.state_by_name(t).expect("checked name");
                    w[s.index()][t.index()] = v.clone();
                }
            }
            PreferenceModel::new(&lattice, w).expect("nonnegative literals")
        });
        let mut bound = HashMap::new();
        let mut events = Vec::new();
        for ev in &self.events {
            let e = bind(&lattice, &bound, &ev.expr).map_err(ResolveError::Event)?;
            bound.insert(ev.name.clone(), e.clone());
            events.push((ev.name.clone(), e));
        }
        events.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(UnawarenessModel {
            lattice,
            correspondence,
            preferences,
            events,
        })
    }

    /// Where lattice-level problems are reported.
    fn lattice_span(&self) -> Span {
        self.order
            .first()
            .map(|o| o.span)
            .or_else(|| self.spaces.first().map(|s| s.span))
            .unwrap_or(Span::new(1, 1))
    }
}

/// Parse, check and resolve a document in one step. Lattice violations
/// come back as `invalid-lattice` diagnostics.
pub fn parse_model(src: &str) -> Result<UnawarenessModel, Vec<Diagnostic>> {
    let doc = parse_document(src)?;
    doc.resolve().map_err(|e| match e {
        ResolveError::Lattice(LatticeError::Invalid(report)) => report
            .violations
            .iter()
            .map(|v| Diagnostic::new(DiagnosticCode::InvalidLattice, doc.lattice_span(), v.to_string()))
            .collect(),
        ResolveError::Lattice(other) => vec![Diagnostic::new(
            DiagnosticCode::InvalidLattice,
            doc.lattice_span(),
            other.to_string(),
        )],
        ResolveError::Event(d) => vec![d],
    })
}

/// Parse a standalone expression against a resolved model. Named events
/// of the model may be referenced.
pub fn parse_event_expr(src: &str, model: &UnawarenessModel) -> Result<EventExpr, Diagnostic> {
    let toks = lex_line(src, 1)?;
    let end = Span::new(1, src.chars().count() + 1);
    let mut p = ExprParser::new(&toks, end);
    let raw = p.parse()?;
    if let Some(t) = toks.get(p.pos()) {
        return Err(Diagnostic::new(
            DiagnosticCode::Syntax,
            t.span,
            format!("unexpected {} after expression", t.tok.describe()),
        ));
    }
    if raw.uses_operators() && !model.has_epistemic_data() {
        return Err(Diagnostic::new(
            DiagnosticCode::MissingData,
            raw.span(),
            "K, A and U need a correspondence or a preference model",
        ));
    }
    let named: HashMap<String, EventExpr> = model.events.iter().cloned().collect();
    bind(&model.lattice, &named, &raw)
}

fn set_text(lat: &Lattice, set: &StateSet) -> String {
    let names: Vec<&str> = set.iter().map(|s| lat.state_name(s)).collect();
    if names.is_empty() {
        "{ }".to_owned()
    } else {
        format!("{{ {} }}", names.join(", "))
    }
}

/// Canonical text: sorted spaces and states, covering order pairs, a
/// projection table for every comparable pair, reduced rationals.
pub fn serialize_model(m: &UnawarenessModel) -> String {
    let lat = &m.lattice;
    let raw = lat.to_raw();
    let mut out = String::new();
    for s in &raw.spaces {
        out.push_str(&format!("space {} = {{ {} }}\n", s.name, s.states.join(", ")));
    }
    for (lo, hi) in &raw.order {
        out.push_str(&format!("order {lo} < {hi}\n"));
    }
    for p in &raw.projections {
        let map: Vec<String> = p.map.iter().map(|(a, b)| format!("{a}: {b}")).collect();
        out.push_str(&format!("project {} -> {} {{ {} }}\n", p.from, p.to, map.join(", ")));
    }
    if let Some(c) = &m.correspondence {
        for (w, value) in c.iter() {
            out.push_str(&format!("pi {} = {}\n", lat.state_name(w), set_text(lat, value)));
        }
    }
    if let Some(p) = &m.preferences {
        for w in lat.states() {
            let entries: Vec<String> = lat
                .states()
                .filter(|&t| !p.weight(w, t).is_zero())
                .map(|t| format!("{}: {}", lat.state_name(t), p.weight(w, t)))
                .collect();
            if entries.is_empty() {
                out.push_str(&format!("weights {} = {{ }}\n", lat.state_name(w)));
            } else {
                out.push_str(&format!("weights {} = {{ {} }}\n", lat.state_name(w), entries.join(", ")));
            }
        }
    }
    let mut names = BTreeSet::new();
    for (name, e) in &m.events {
        if names.insert(name) {
            out.push_str(&format!("event {name} = {}\n", e.display(lat)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    pub(crate) const M1: &str = "\
# two spaces, nobody aware of Sb
space Sa = { a1 }
space Sb = { b1, b2 }
order Sa < Sb
project Sb -> Sa { b1: a1, b2: a1 }
pi a1 = { a1 }
pi b1 = { a1 }
pi b2 = { a1 }
weights a1 = { a1: 1 }
weights b1 = { a1: 1 }
weights b2 = { a1: 1 }
";

    fn codes(src: &str) -> Vec<DiagnosticCode> {
        parse_document(src).unwrap_err().iter().map(|d| d.code).collect()
    }

    #[test]
    fn m1_document_parses_to_m1() {
        assert_eq!(parse_model(M1).unwrap(), fixtures::m1());
    }

    #[test]
    fn empty_input_has_no_spaces() {
        let d = parse_document("").unwrap_err();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].to_string(), "1:1: no-spaces: no spaces declared");
    }

    #[test]
    fn missing_projection_entry() {
        let src = M1.replace("b1: a1, b2: a1", "b1: a1");
        let d = parse_document(&src).unwrap_err();
        assert_eq!(d[0].code, DiagnosticCode::PartialProjection);
        assert_eq!(d[0].message, "partial projection Sb→Sa: b2 unmapped");
        assert_eq!(d[0].span, Span::new(5, 1));
        assert_eq!(
            d[0].render("m1.uam"),
            "m1.uam:5:1: partial-projection: partial projection Sb→Sa: b2 unmapped"
        );
    }

    #[test]
    fn distinct_codes_for_distinct_errors() {
        assert_eq!(codes(&M1.replace("order Sa < Sb", "order Sa < Sc")), [DiagnosticCode::UnknownIdentifier]);
        assert_eq!(
            codes(&format!("{M1}space Sa = {{ }}\n")),
            [DiagnosticCode::Duplicate]
        );
        assert_eq!(
            codes(&M1.replace("weights b1 = { a1: 1 }", "weights b1 = { a1: 0.5 }")),
            [DiagnosticCode::BadRational]
        );
        assert_eq!(
            codes(&M1.replace("weights b1 = { a1: 1 }", "weights b1 = { a1: 1/0 }")),
            [DiagnosticCode::BadRational]
        );
        assert_eq!(
            codes(&M1.replace("pi b2 = { a1 }\n", "")),
            [DiagnosticCode::PartialPi]
        );
        assert_eq!(
            codes(&M1.replace("weights b2 = { a1: 1 }\n", "")),
            [DiagnosticCode::PartialWeights]
        );
        assert_eq!(codes("space S = { s\n"), [DiagnosticCode::Syntax]);
        assert_eq!(
            codes("space S = { s }\nevent E = K(omega)\n"),
            [DiagnosticCode::MissingData]
        );
    }

    #[test]
    fn spans_point_at_the_offending_token() {
        let src = M1.replace("weights b1 = { a1: 1 }", "weights b1 = { a1: 0.5 }");
        let d = parse_document(&src).unwrap_err();
        let line = src.lines().nth(d[0].span.line - 1).unwrap();
        assert!(line[d[0].span.col - 1..].starts_with("0.5"), "{} in {line:?}", d[0]);
    }

    #[test]
    fn invalid_lattice_is_reported_at_the_order() {
        let src = "space A = { a }\nspace B = { b }\n";
        let d = parse_model(src).unwrap_err();
        assert!(d.iter().all(|d| d.code == DiagnosticCode::InvalidLattice));
    }

    #[test]
    fn serialization_round_trips_fixtures() {
        for m in fixtures::all() {
            let text = serialize_model(&m);
            let back = parse_model(&text).unwrap();
            assert_eq!(back, m);
            assert_eq!(serialize_model(&back), text);
        }
    }

    #[test]
    fn lattice_only_documents() {
        let src = "space S = { s1, s2 }\n";
        let m = parse_model(src).unwrap();
        assert!(m.correspondence.is_none() && m.preferences.is_none());
        assert_eq!(serialize_model(&m), "space S = { s1, s2 }\n");
    }

    #[test]
    fn expressions_on_m1() {
        let m = fixtures::m1();
        let lat = &m.lattice;
        let eval = |s: &str| m.evaluate(&parse_event_expr(s, &m).unwrap()).unwrap();
        let sb = lat.space_by_name("Sb").unwrap();
        assert_eq!(eval("U(up(Sb,{b1}))"), lat.full_event(sb));
        assert_eq!(eval("not(up(Sb,{}))"), lat.full_event(sb));
        let b1 = lat.state_by_name("b1").unwrap();
        assert_eq!(
            eval("and(up(Sa,{a1}), up(Sb,{b1}))"),
            lat.up_closure(&StateSet::singleton(b1), sb).unwrap()
        );
        assert_eq!(eval("space(Sb)"), lat.full_event(sb));
        assert_eq!(eval("K(omega)"), lat.omega());
    }

    #[test]
    fn expression_errors() {
        let m = fixtures::m1();
        let err = parse_event_expr("up(Sa, { b1 })", &m).unwrap_err();
        assert_eq!(err.code, DiagnosticCode::UnknownIdentifier);
        assert_eq!(err.span, Span::new(1, 10));
        let lattice_only = UnawarenessModel::lattice_only(m.lattice.clone());
        assert_eq!(
            parse_event_expr("K(omega)", &lattice_only).unwrap_err().code,
            DiagnosticCode::MissingData
        );
        assert_eq!(
            parse_event_expr("not(omega) x", &m).unwrap_err().code,
            DiagnosticCode::Syntax
        );
    }

    #[test]
    fn named_events_are_inlined() {
        let src = format!("{M1}event E = up(Sb, {{ b1 }})\nevent F = U(E)\n");
        let m = parse_model(&src).unwrap();
        let f = m.event("F").unwrap();
        assert_eq!(f.display(&m.lattice).to_string(), "U(up(Sb, { b1 }))");
        let text = serialize_model(&m);
        assert_eq!(parse_model(&text).unwrap(), m);
    }
}
