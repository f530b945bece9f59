//! Clique-width verdicts for classes with two forbidden induced subgraphs, and the
//! colouring dichotomy for `(diamond, H)`-free graphs with small `H`.

use std::fmt;

use thiserror::Error;

use crate::gen::isomorphic;
use crate::graph::Graph;
use crate::patterns::{self, parse_pattern, Pattern, PatternError};

pub const CLASSIFY_MAX_N: usize = 8;
pub const COLOURING_MAX_N: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Clause {
    A1,
    A2,
    A3,
    A4,
    A5,
    A6,
    A7,
    B1,
    B2,
    B3,
    B4,
    B5,
    B6,
}

impl Clause {
    pub const ALL: [Clause; 13] = [
        Clause::A1,
        Clause::A2,
        Clause::A3,
        Clause::A4,
        Clause::A5,
        Clause::A6,
        Clause::A7,
        Clause::B1,
        Clause::B2,
        Clause::B3,
        Clause::B4,
        Clause::B5,
        Clause::B6,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Clause::A1 => "a1",
            Clause::A2 => "a2",
            Clause::A3 => "a3",
            Clause::A4 => "a4",
            Clause::A5 => "a5",
            Clause::A6 => "a6",
            Clause::A7 => "a7",
            Clause::B1 => "b1",
            Clause::B2 => "b2",
            Clause::B3 => "b3",
            Clause::B4 => "b4",
            Clause::B5 => "b5",
            Clause::B6 => "b6",
        }
    }

    /// `a` clauses give bounded clique-width, `b` clauses unbounded.
    pub fn is_bounded(self) -> bool {
        self < Clause::B1
    }

    /// Whether the clause holds for the ordered pair `(h1, h2)`.
    pub fn holds(self, h1: &Graph, h2: &Graph) -> bool {
        let co2 = h2.complement();
        match self {
            Clause::A1 => within(h1, &["P4"]) || within(h2, &["P4"]),
            Clause::A2 => h1.m() == 0 && 2 * h2.m() == h2.n() * (h2.n() - 1),
            Clause::A3 => {
                within(h1, &["P1+P3"])
                    && within(&co2, &["K1,3+3P1", "K1,3+P2", "P1+P2+P3", "P1+P5", "P1+S112", "P6", "S113", "S122"])
            }
            Clause::A4 => within(h1, &["2P1+P2"]) && within(&co2, &["P1+2P2", "2P1+P3", "3P1+P2", "P2+P3"]),
            Clause::A5 => within(h1, &["P1+P4"]) && within(&co2, &["P1+P4", "P5"]),
            Clause::A6 => within(h1, &["4P1"]) && within(&co2, &["2P1+P3"]),
            Clause::A7 => within(h1, &["K1,3"]) && within(&co2, &["K1,3"]),
            Clause::B1 => !patterns::is_in_class_s(h1) && !patterns::is_in_class_s(h2),
            Clause::B2 => !patterns::is_in_class_s(&h1.complement()) && !patterns::is_in_class_s(&co2),
            Clause::B3 => contains_one(h1, &["K1,3", "2P2"]) && contains_one(&co2, &["4P1", "2P2"]),
            Clause::B4 => contains_one(h1, &["2P1+P2"]) && contains_one(&co2, &["K1,3", "5P1", "P2+P4", "P6"]),
            Clause::B5 => contains_one(h1, &["3P1"]) && contains_one(&co2, &["2P1+2P2", "2P1+P4", "4P1+P2", "3P2", "2P3"]),
            Clause::B6 => contains_one(h1, &["4P1"]) && contains_one(&co2, &["P1+P4", "3P1+P2"]),
        }
    }
}

fn library(name: &str) -> Graph {
    parse_pattern(name).expect("built-in pattern")
}

fn within(h: &Graph, hosts: &[&str]) -> bool {
    hosts.iter().any(|x| patterns::contains_induced(&library(x), h))
}

fn contains_one(h: &Graph, guests: &[&str]) -> bool {
    guests.iter().any(|x| patterns::contains_induced(h, &library(x)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquivalenceOp {
    ComplementBoth,
    /// Replace the graph at this position, `K3` by `co-(P1+P3)` or back.
    SwapTriangle(usize),
}

impl fmt::Display for EquivalenceOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquivalenceOp::ComplementBoth => write!(f, "complement-both"),
            EquivalenceOp::SwapTriangle(i) => write!(f, "swap-triangle({})", i + 1),
        }
    }
}

/// A pair reachable from the input, with the operations that reach it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitMember {
    pub pair: [Pattern; 2],
    pub ops: Vec<EquivalenceOp>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseMatch {
    pub clause: Clause,
    pub ops: Vec<EquivalenceOp>,
    /// The pair in the order the clause reads it.
    pub h1: Pattern,
    pub h2: Pattern,
}

impl fmt::Display for ClauseMatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "clause {} on ({}, {})", self.clause.id(), self.h1.name, self.h2.name)?;
        if !self.ops.is_empty() {
            let ops: Vec<String> = self.ops.iter().map(ToString::to_string).collect();
            write!(f, " via {}", ops.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassificationVerdict {
    Bounded(ClauseMatch),
    Unbounded(ClauseMatch),
    Open,
}

impl ClassificationVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            ClassificationVerdict::Bounded(_) => "bounded",
            ClassificationVerdict::Unbounded(_) => "unbounded",
            ClassificationVerdict::Open => "open",
        }
    }

    pub fn is_open(&self) -> bool {
        matches!(self, ClassificationVerdict::Open)
    }

    pub fn clause(&self) -> Option<Clause> {
        match self {
            ClassificationVerdict::Bounded(m) | ClassificationVerdict::Unbounded(m) => Some(m.clause),
            ClassificationVerdict::Open => None,
        }
    }
}

impl fmt::Display for ClassificationVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassificationVerdict::Bounded(m) | ClassificationVerdict::Unbounded(m) => write!(f, "{}: {m}", self.name()),
            ClassificationVerdict::Open => write!(f, "open"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("graph has {size} vertices, cap is {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("forbidden graphs must have at least one vertex")]
    Empty,
    #[error("contradictory clauses: {bounded} and {unbounded}")]
    Contradiction { bounded: Box<ClauseMatch>, unbounded: Box<ClauseMatch> },
    #[error(transparent)]
    Pattern(#[from] PatternError),
}

fn complement_name(name: &str) -> String {
    if let Some(rest) = name.strip_prefix("co-") {
        return rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(rest).to_string();
    }
    if name.contains('+') {
        format!("co-({name})")
    } else {
        format!("co-{name}")
    }
}

fn same_pair(a: &[Pattern; 2], b: &[Pattern; 2]) -> bool {
    let iso = |x: &Pattern, y: &Pattern| isomorphic(&x.graph, &y.graph);
    (iso(&a[0], &b[0]) && iso(&a[1], &b[1])) || (iso(&a[0], &b[1]) && iso(&a[1], &b[0]))
}

/// Every pair equivalent to `(a, b)`, breadth first from the input, up to isomorphism
/// and order.
pub fn equivalence_orbit(a: &Pattern, b: &Pattern) -> Vec<OrbitMember> {
    let triangle = Pattern::new("K3", library("K3"));
    let paw = Pattern::new("co-(P1+P3)", library("co-(P1+P3)"));
    let mut orbit = vec![OrbitMember { pair: [a.clone(), b.clone()], ops: Vec::new() }];
    let mut next = 0;
    while next < orbit.len() {
        let OrbitMember { pair, ops } = orbit[next].clone();
        next += 1;
        let mut moves = vec![(
            EquivalenceOp::ComplementBoth,
            pair.clone().map(|p| Pattern::new(complement_name(&p.name), p.graph.complement())),
        )];
        for i in 0..2 {
            let swapped = if isomorphic(&pair[i].graph, &triangle.graph) {
                &paw
            } else if isomorphic(&pair[i].graph, &paw.graph) {
                &triangle
            } else {
                continue;
            };
            let mut p = pair.clone();
            p[i] = swapped.clone();
            moves.push((EquivalenceOp::SwapTriangle(i), p));
        }
        for (op, p) in moves {
            if orbit.iter().any(|m| same_pair(&m.pair, &p)) {
                continue;
            }
            let mut path = ops.clone();
            path.push(op);
            orbit.push(OrbitMember { pair: p, ops: path });
        }
    }
    orbit
}

pub fn equivalent(a: (&Graph, &Graph), b: (&Graph, &Graph)) -> bool {
    let target = [Pattern::new("", b.0.clone()), Pattern::new("", b.1.clone())];
    equivalence_orbit(&Pattern::new("", a.0.clone()), &Pattern::new("", a.1.clone()))
        .iter()
        .any(|m| same_pair(&m.pair, &target))
}

/// Clause verdict for the class of `(a, b)`-free graphs. The first matching clause in
/// orbit order wins; a bounded and an unbounded match together is an error.
pub fn classify_patterns(a: &Pattern, b: &Pattern) -> Result<ClassificationVerdict, ClassifyError> {
    for p in [a, b] {
        if p.graph.n() == 0 {
            return Err(ClassifyError::Empty);
        }
        if p.graph.n() > CLASSIFY_MAX_N {
            return Err(ClassifyError::TooLarge { size: p.graph.n(), cap: CLASSIFY_MAX_N });
        }
    }
    let mut bounded = None;
    let mut unbounded = None;
    for m in equivalence_orbit(a, b) {
        for (x, y) in [(0, 1), (1, 0)] {
            for clause in Clause::ALL {
                let slot = if clause.is_bounded() { &mut bounded } else { &mut unbounded };
                if slot.is_none() && clause.holds(&m.pair[x].graph, &m.pair[y].graph) {
                    *slot = Some(ClauseMatch { clause, ops: m.ops.clone(), h1: m.pair[x].clone(), h2: m.pair[y].clone() });
                }
            }
        }
    }
    match (bounded, unbounded) {
        (Some(b), Some(u)) => Err(ClassifyError::Contradiction { bounded: Box::new(b), unbounded: Box::new(u) }),
        (Some(b), None) => Ok(ClassificationVerdict::Bounded(b)),
        (None, Some(u)) => Ok(ClassificationVerdict::Unbounded(u)),
        (None, None) => Ok(ClassificationVerdict::Open),
    }
}

pub fn classify_pair(h1: &Graph, h2: &Graph) -> Result<ClassificationVerdict, ClassifyError> {
    classify_patterns(&Pattern::new("H1", h1.clone()), &Pattern::new("H2", h2.clone()))
}

pub fn classify_named(a: &str, b: &str) -> Result<ClassificationVerdict, ClassifyError> {
    classify_patterns(&Pattern::named(a)?, &Pattern::named(b)?)
}

/// Complexity of colouring `(diamond, H)`-free graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColouringStatus {
    Polynomial,
    NpComplete,
}

impl ColouringStatus {
    pub fn name(self) -> &'static str {
        match self {
            ColouringStatus::Polynomial => "polynomial",
            ColouringStatus::NpComplete => "np-complete",
        }
    }
}

pub fn colouring_status(h: &Graph) -> Result<ColouringStatus, ClassifyError> {
    if h.n() == 0 {
        return Err(ClassifyError::Empty);
    }
    if h.n() > COLOURING_MAX_N {
        return Err(ClassifyError::TooLarge { size: h.n(), cap: COLOURING_MAX_N });
    }
    Ok(if patterns::is_linear_forest(h) { ColouringStatus::Polynomial } else { ColouringStatus::NpComplete })
}
