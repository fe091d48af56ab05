//! Event expressions.
//!
//! ```text
//! expr := omega | NAME
//!       | up(SPACE, { STATE, ... }) | base(SPACE, { ... }) | space(SPACE)
//!       | not(expr) | and(expr, ...) | or(expr, ...)
//!       | K(expr) | A(expr) | U(expr)
//! ```
//!
//! `up` and `base` denote the same event, the one with the given base.
//! `NAME` refers to an earlier `event` declaration and is inlined.

use std::collections::HashMap;
use std::fmt;

use crate::lattice::{Lattice, SpaceId, StateId};
use crate::stateset::StateSet;

use super::lexer::{Tok, Token};
use super::{Diagnostic, DiagnosticCode, Span};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EventExpr {
    Omega,
    Up { space: SpaceId, states: StateSet },
    Not(Box<EventExpr>),
    And(Vec<EventExpr>),
    Or(Vec<EventExpr>),
    K(Box<EventExpr>),
    A(Box<EventExpr>),
    U(Box<EventExpr>),
}

impl EventExpr {
    /// True if K, A or U occurs anywhere in the tree.
    pub fn uses_operators(&self) -> bool {
        match self {
            EventExpr::Omega | EventExpr::Up { .. } => false,
            EventExpr::Not(e) => e.uses_operators(),
            EventExpr::And(es) | EventExpr::Or(es) => es.iter().any(EventExpr::uses_operators),
            EventExpr::K(_) | EventExpr::A(_) | EventExpr::U(_) => true,
        }
    }

    pub fn display<'a>(&'a self, lat: &'a Lattice) -> ExprDisplay<'a> {
        ExprDisplay { expr: self, lat }
    }
}

pub struct ExprDisplay<'a> {
    expr: &'a EventExpr,
    lat: &'a Lattice,
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lat = self.lat;
        let list = |f: &mut fmt::Formatter<'_>, name: &str, es: &[EventExpr]| {
            write!(f, "{name}(")?;
            for (i, e) in es.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", e.display(lat))?;
            }
            f.write_str(")")
        };
        match self.expr {
            EventExpr::Omega => f.write_str("omega"),
            EventExpr::Up { space, states } => {
                let names: Vec<&str> = states.iter().map(|s| lat.state_name(s)).collect();
                if names.is_empty() {
                    write!(f, "up({}, {{}})", lat.space_name(*space))
                } else {
                    write!(f, "up({}, {{ {} }})", lat.space_name(*space), names.join(", "))
                }
            }
            EventExpr::Not(e) => write!(f, "not({})", e.display(lat)),
            EventExpr::And(es) => list(f, "and", es),
            EventExpr::Or(es) => list(f, "or", es),
            EventExpr::K(e) => write!(f, "K({})", e.display(lat)),
            EventExpr::A(e) => write!(f, "A({})", e.display(lat)),
            EventExpr::U(e) => write!(f, "U({})", e.display(lat)),
        }
    }
}

/// Unbound syntax, as written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum RawExpr {
    Name(String, Span),
    Set(Vec<(String, Span)>, Span),
    Call {
        name: String,
        span: Span,
        args: Vec<RawExpr>,
    },
}

impl RawExpr {
    pub(crate) fn span(&self) -> Span {
        match self {
            RawExpr::Name(_, s) | RawExpr::Set(_, s) | RawExpr::Call { span: s, .. } => *s,
        }
    }

    pub(crate) fn uses_operators(&self) -> bool {
        match self {
            RawExpr::Name(..) | RawExpr::Set(..) => false,
            RawExpr::Call { name, args, .. } => {
                matches!(name.as_str(), "K" | "A" | "U") || args.iter().any(RawExpr::uses_operators)
            }
        }
    }
}

pub(crate) struct ExprParser<'a> {
    toks: &'a [Token],
    pos: usize,
    end: Span,
}

impl<'a> ExprParser<'a> {
    pub(crate) fn new(toks: &'a [Token], end: Span) -> Self {
        ExprParser { toks, pos: 0, end }
    }

    pub(crate) fn pos(&self) -> usize {
        self.pos
    }

    fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> Span {
        self.peek().map_or(self.end, |t| t.span)
    }

    fn err(&self, msg: impl Into<String>) -> Diagnostic {
        Diagnostic::new(DiagnosticCode::Syntax, self.here(), msg)
    }

    fn expect(&mut self, tok: Tok) -> Result<Span, Diagnostic> {
        match self.peek() {
            Some(t) if t.tok == tok => {
                self.pos += 1;
                Ok(t.span)
            }
            Some(t) => Err(self.err(format!("expected {}, found {}", tok.describe(), t.tok.describe()))),
            None => Err(self.err(format!("expected {}, found end of line", tok.describe()))),
        }
    }

    pub(crate) fn parse(&mut self) -> Result<RawExpr, Diagnostic> {
        match self.peek() {
            Some(Token {
                tok: Tok::LBrace, ..
            }) => self.parse_set(),
            Some(Token {
                tok: Tok::Ident(name),
                span,
            }) => {
                self.pos += 1;
                if matches!(self.peek(), Some(Token { tok: Tok::LParen, .. })) {
                    self.pos += 1;
                    let mut args = vec![self.parse()?];
                    while matches!(self.peek(), Some(Token { tok: Tok::Comma, .. })) {
                        self.pos += 1;
                        args.push(self.parse()?);
                    }
                    self.expect(Tok::RParen)?;
                    Ok(RawExpr::Call {
                        name: name.clone(),
                        span: *span,
                        args,
                    })
                } else {
                    Ok(RawExpr::Name(name.clone(), *span))
                }
            }
            Some(t) => Err(self.err(format!("expected an event expression, found {}", t.tok.describe()))),
            None => Err(self.err("expected an event expression, found end of line")),
        }
    }

    fn parse_set(&mut self) -> Result<RawExpr, Diagnostic> {
        let open = self.expect(Tok::LBrace)?;
        let mut items = Vec::new();
        loop {
            match self.peek() {
                Some(Token {
                    tok: Tok::RBrace, ..
                }) => {
                    self.pos += 1;
                    return Ok(RawExpr::Set(items, open));
                }
                Some(Token {
                    tok: Tok::Ident(n),
                    span,
                }) => {
                    items.push((n.clone(), *span));
                    self.pos += 1;
                    match self.peek() {
                        Some(Token { tok: Tok::Comma, .. }) => self.pos += 1,
                        Some(Token {
                            tok: Tok::RBrace, ..
                        }) => {}
                        _ => return Err(self.err("expected `,` or `}` in state set")),
                    }
                }
                _ => return Err(self.err("expected a state name or `}`")),
            }
        }
    }
}

/// Name lookup used to bind expressions.
pub(crate) trait Names {
    fn space(&self, name: &str) -> Option<SpaceId>;
    fn state(&self, name: &str) -> Option<StateId>;
    fn space_of(&self, state: StateId) -> SpaceId;
    fn all_states(&self, space: SpaceId) -> StateSet;
}

impl Names for Lattice {
    fn space(&self, name: &str) -> Option<SpaceId> {
        self.space_by_name(name)
    }

    fn state(&self, name: &str) -> Option<StateId> {
        self.state_by_name(name)
    }

    fn space_of(&self, state: StateId) -> SpaceId {
        Lattice::space_of(self, state)
    }

    fn all_states(&self, space: SpaceId) -> StateSet {
        self.space_set(space).clone()
    }
}

fn unknown(span: Span, msg: String) -> Diagnostic {
    Diagnostic::new(DiagnosticCode::UnknownIdentifier, span, msg)
}

fn arity(name: &str, span: Span, args: &[RawExpr], n: usize) -> Result<(), Diagnostic> {
    if args.len() == n {
        Ok(())
    } else {
        Err(Diagnostic::new(
            DiagnosticCode::Syntax,
            span,
            format!("`{name}` takes {n} argument(s), got {}", args.len()),
        ))
    }
}

fn space_arg<N: Names>(names: &N, e: &RawExpr) -> Result<SpaceId, Diagnostic> {
    match e {
        RawExpr::Name(n, span) => names
            .space(n)
            .ok_or_else(|| unknown(*span, format!("unknown space `{n}`"))),
        other => Err(Diagnostic::new(
            DiagnosticCode::Syntax,
            other.span(),
            "expected a space name",
        )),
    }
}

/// Resolve names in a raw expression. `events` holds earlier named events.
pub(crate) fn bind<N: Names>(
    names: &N,
    events: &HashMap<String, EventExpr>,
    e: &RawExpr,
) -> Result<EventExpr, Diagnostic> {
    match e {
        RawExpr::Name(n, span) => {
            if n == "omega" {
                Ok(EventExpr::Omega)
            } else {
                events
                    .get(n)
                    .cloned()
                    .ok_or_else(|| unknown(*span, format!("unknown event `{n}`")))
            }
        }
        RawExpr::Set(_, span) => Err(Diagnostic::new(
            DiagnosticCode::Syntax,
            *span,
            "a state set is not an event; use up(SPACE, {...})",
        )),
        RawExpr::Call { name, span, args } => {
            let one = |args: &[RawExpr]| -> Result<Box<EventExpr>, Diagnostic> {
                arity(name, *span, args, 1)?;
                Ok(Box::new(bind(names, events, &args[0])?))
            };
            let many = |args: &[RawExpr]| -> Result<Vec<EventExpr>, Diagnostic> {
                args.iter().map(|a| bind(names, events, a)).collect()
            };
            match name.as_str() {
                "up" | "base" => {
                    arity(name, *span, args, 2)?;
                    let space = space_arg(names, &args[0])?;
                    let RawExpr::Set(items, _) = &args[1] else {
                        return Err(Diagnostic::new(
                            DiagnosticCode::Syntax,
                            args[1].span(),
                            "expected a state set `{ ... }`",
                        ));
                    };
                    let mut states = StateSet::new();
                    for (s, sspan) in items {
                        let id = names
                            .state(s)
                            .ok_or_else(|| unknown(*sspan, format!("unknown state `{s}`")))?;
                        if names.space_of(id) != space {
                            return Err(unknown(*sspan, format!("state `{s}` is not in the given space")));
                        }
                        states.insert(id);
                    }
                    Ok(EventExpr::Up { space, states })
                }
                "space" => {
                    arity(name, *span, args, 1)?;
                    let space = space_arg(names, &args[0])?;
                    Ok(EventExpr::Up {
                        space,
                        states: names.all_states(space),
                    })
                }
                "not" => Ok(EventExpr::Not(one(args)?)),
                "and" => Ok(EventExpr::And(many(args)?)),
                "or" => Ok(EventExpr::Or(many(args)?)),
                "K" => Ok(EventExpr::K(one(args)?)),
                "A" => Ok(EventExpr::A(one(args)?)),
                "U" => Ok(EventExpr::U(one(args)?)),
                other => Err(unknown(*span, format!("unknown operator `{other}`"))),
            }
        }
    }
}
