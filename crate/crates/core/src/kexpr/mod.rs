//! Clique-width expressions: the four-operation IR, evaluation, text form and rewrites.

mod build;
mod colour;
mod exact;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::graph::Graph;

pub use build::{
    clique_expr, disjoint_union_expr, distinct_label_expr, edgeless_expr, expr_for_max_degree_2, extend_expression, star_forest_expr,
    Extension,
};
pub use colour::{
    chromatic_oracle, chromatic_oracle_capped, chromatic_via_expression, colour_via_expression,
    colour_via_expression_capped, DEFAULT_DP_WIDTH_CAP, DEFAULT_ORACLE_CAP,
};
pub use exact::{exact_cliquewidth, EXACT_CW_MAX_N};

pub type Label = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error("join with equal labels {0}")]
    JoinSameLabel(Label),
    #[error("label 0 is not allowed")]
    ZeroLabel,
    #[error("vertex {0} is created more than once")]
    DuplicateVertex(usize),
    #[error("vertex {0} does not occur in the expression")]
    UnknownVertex(usize),
    #[error("expression width {width} exceeds cap {cap}")]
    WidthCap { width: usize, cap: usize },
    #[error("graph has {n} vertices, cap is {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("graph has a vertex of degree {0}")]
    DegreeTooHigh(usize),
    #[error("the empty graph has no expression")]
    EmptyGraph,
    #[error("parse error: {0}")]
    Parse(String),
}

/// A clique-width expression tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum KExpr {
    Create { label: Label, vertex: usize },
    Union(Box<KExpr>, Box<KExpr>),
    Join { i: Label, j: Label, child: Box<KExpr> },
    Relabel { from: Label, to: Label, child: Box<KExpr> },
}

impl KExpr {
    pub fn create(label: Label, vertex: usize) -> KExpr {
        KExpr::Create { label, vertex }
    }

    pub fn union(a: KExpr, b: KExpr) -> KExpr {
        KExpr::Union(Box::new(a), Box::new(b))
    }

    pub fn join(i: Label, j: Label, child: KExpr) -> KExpr {
        KExpr::Join { i, j, child: Box::new(child) }
    }

    pub fn relabel(from: Label, to: Label, child: KExpr) -> KExpr {
        KExpr::Relabel { from, to, child: Box::new(child) }
    }

    /// Union of a non-empty list, left-nested.
    pub fn union_all(parts: Vec<KExpr>) -> Option<KExpr> {
        parts.into_iter().reduce(KExpr::union)
    }

    /// Distinct labels mentioned anywhere.
    pub fn labels(&self) -> BTreeSet<Label> {
        let mut out = BTreeSet::new();
        self.visit(&mut |e| match e {
            KExpr::Create { label, .. } => {
                out.insert(*label);
            }
            KExpr::Join { i, j, .. } => {
                out.insert(*i);
                out.insert(*j);
            }
            KExpr::Relabel { from, to, .. } => {
                out.insert(*from);
                out.insert(*to);
            }
            KExpr::Union(..) => {}
        });
        out
    }

    pub fn width(&self) -> usize {
        self.labels().len()
    }

    pub fn max_label(&self) -> Label {
        self.labels().into_iter().next_back().unwrap_or(0)
    }

    /// Created vertex ids in left-to-right order.
    pub fn vertices(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.visit(&mut |e| {
            if let KExpr::Create { vertex, .. } = e {
                out.push(*vertex);
            }
        });
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices().len()
    }

    fn visit<F: FnMut(&KExpr)>(&self, f: &mut F) {
        let mut stack = vec![self];
        while let Some(e) = stack.pop() {
            f(e);
            match e {
                KExpr::Create { .. } => {}
                KExpr::Union(a, b) => {
                    stack.push(b);
                    stack.push(a);
                }
                KExpr::Join { child, .. } | KExpr::Relabel { child, .. } => stack.push(child),
            }
        }
    }

    /// Rename every label through `f`; `f` must be injective on the labels used.
    pub fn map_labels<F: Fn(Label) -> Label + Copy>(&self, f: F) -> KExpr {
        match self {
            KExpr::Create { label, vertex } => KExpr::create(f(*label), *vertex),
            KExpr::Union(a, b) => KExpr::union(a.map_labels(f), b.map_labels(f)),
            KExpr::Join { i, j, child } => KExpr::join(f(*i), f(*j), child.map_labels(f)),
            KExpr::Relabel { from, to, child } => KExpr::relabel(f(*from), f(*to), child.map_labels(f)),
        }
    }

    pub fn map_vertices<F: Fn(usize) -> usize + Copy>(&self, f: F) -> KExpr {
        match self {
            KExpr::Create { label, vertex } => KExpr::create(*label, f(*vertex)),
            KExpr::Union(a, b) => KExpr::union(a.map_vertices(f), b.map_vertices(f)),
            KExpr::Join { i, j, child } => KExpr::join(*i, *j, child.map_vertices(f)),
            KExpr::Relabel { from, to, child } => KExpr::relabel(*from, *to, child.map_vertices(f)),
        }
    }

    pub fn evaluate(&self) -> Result<LabelledGraph, ExprError> {
        let ids = self.vertices();
        let mut sorted = ids.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(ExprError::DuplicateVertex(w[0]));
        }
        let pos: HashMap<usize, usize> = sorted.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut graph = Graph::empty(sorted.len());
        let members = eval_rec(self, &pos, &mut graph)?;
        let mut labels = vec![0; sorted.len()];
        for (p, l) in members {
            labels[p] = l;
        }
        Ok(LabelledGraph { ids: sorted, graph, labels, width: self.width() })
    }

    /// True iff the expression evaluates to exactly `g` with vertex ids `0..n`.
    pub fn validate_against(&self, g: &Graph) -> bool {
        match self.evaluate() {
            Ok(lg) => lg.ids.iter().copied().eq(0..g.n()) && lg.graph == *g,
            Err(_) => false,
        }
    }

    /// Final label of each vertex, keyed by vertex id.
    pub fn final_labels(&self) -> Result<HashMap<usize, Label>, ExprError> {
        let lg = self.evaluate()?;
        Ok(lg.ids.iter().copied().zip(lg.labels.iter().copied()).collect())
    }

    pub fn parse(text: &str) -> Result<KExpr, ExprError> {
        let tokens = tokenize(text);
        let mut pos = 0;
        let e = parse_expr(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(ExprError::Parse(format!("trailing input at token {pos}")));
        }
        Ok(e)
    }
}

fn eval_rec(e: &KExpr, pos: &HashMap<usize, usize>, g: &mut Graph) -> Result<Vec<(usize, Label)>, ExprError> {
    match e {
        KExpr::Create { label, vertex } => {
            if *label == 0 {
                return Err(ExprError::ZeroLabel);
            }
            Ok(vec![(pos[vertex], *label)])
        }
        KExpr::Union(a, b) => {
            let mut left = eval_rec(a, pos, g)?;
            left.extend(eval_rec(b, pos, g)?);
            Ok(left)
        }
        KExpr::Join { i, j, child } => {
            if i == j {
                return Err(ExprError::JoinSameLabel(*i));
            }
            if *i == 0 || *j == 0 {
                return Err(ExprError::ZeroLabel);
            }
            let members = eval_rec(child, pos, g)?;
            let a: Vec<usize> = members.iter().filter(|m| m.1 == *i).map(|m| m.0).collect();
            let b: Vec<usize> = members.iter().filter(|m| m.1 == *j).map(|m| m.0).collect();
            for &u in &a {
                for &v in &b {
                    g.add_edge(u, v);
                }
            }
            Ok(members)
        }
        KExpr::Relabel { from, to, child } => {
            if *from == 0 || *to == 0 {
                return Err(ExprError::ZeroLabel);
            }
            let mut members = eval_rec(child, pos, g)?;
            for m in members.iter_mut() {
                if m.1 == *from {
                    m.1 = *to;
                }
            }
            Ok(members)
        }
    }
}

/// The result of evaluating an expression. `graph` is indexed by position in `ids`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelledGraph {
    pub ids: Vec<usize>,
    pub graph: Graph,
    pub labels: Vec<Label>,
    pub width: usize,
}

fn tokenize(text: &str) -> Vec<String> {
    let spaced = text.replace('(', " ( ").replace(')', " ) ");
    spaced.split_whitespace().map(str::to_string).collect()
}

fn parse_num<T: std::str::FromStr>(tokens: &[String], pos: &mut usize) -> Result<T, ExprError> {
    let tok = tokens.get(*pos).ok_or_else(|| ExprError::Parse("unexpected end of input".into()))?;
    *pos += 1;
    tok.parse().map_err(|_| ExprError::Parse(format!("expected a number, found {tok:?}")))
}

fn expect(tokens: &[String], pos: &mut usize, want: &str) -> Result<(), ExprError> {
    match tokens.get(*pos) {
        Some(t) if t == want => {
            *pos += 1;
            Ok(())
        }
        Some(t) => Err(ExprError::Parse(format!("expected {want:?}, found {t:?}"))),
        None => Err(ExprError::Parse(format!("expected {want:?}, found end of input"))),
    }
}

fn parse_expr(tokens: &[String], pos: &mut usize) -> Result<KExpr, ExprError> {
    expect(tokens, pos, "(")?;
    let op = tokens.get(*pos).cloned().ok_or_else(|| ExprError::Parse("unexpected end of input".into()))?;
    *pos += 1;
    let e = match op.as_str() {
        "v" => {
            let label = parse_num(tokens, pos)?;
            let vertex = parse_num(tokens, pos)?;
            KExpr::create(label, vertex)
        }
        "+" => {
            let a = parse_expr(tokens, pos)?;
            let b = parse_expr(tokens, pos)?;
            KExpr::union(a, b)
        }
        "eta" => {
            let i = parse_num(tokens, pos)?;
            let j = parse_num(tokens, pos)?;
            KExpr::join(i, j, parse_expr(tokens, pos)?)
        }
        "rho" => {
            let from = parse_num(tokens, pos)?;
            let to = parse_num(tokens, pos)?;
            KExpr::relabel(from, to, parse_expr(tokens, pos)?)
        }
        other => return Err(ExprError::Parse(format!("unknown operator {other:?}"))),
    };
    expect(tokens, pos, ")")?;
    Ok(e)
}

impl fmt::Display for KExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KExpr::Create { label, vertex } => write!(f, "(v {label} {vertex})"),
            KExpr::Union(a, b) => write!(f, "(+ {a} {b})"),
            KExpr::Join { i, j, child } => write!(f, "(eta {i} {j} {child})"),
            KExpr::Relabel { from, to, child } => write!(f, "(rho {from} {to} {child})"),
        }
    }
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::patterns;

    #[test]
    fn evaluate_examples() {
        let k1 = KExpr::create(1, 0).evaluate().unwrap();
        assert_eq!((k1.graph.n(), k1.width), (1, 1));
        let p2 = KExpr::join(1, 2, KExpr::union(KExpr::create(1, 0), KExpr::create(2, 1)));
        let lg = p2.evaluate().unwrap();
        assert_eq!(lg.graph, patterns::path(2));
        assert_eq!(lg.width, 2);
        assert!(p2.validate_against(&patterns::path(2)));
        assert!(!p2.validate_against(&Graph::empty(2)));
        let bad = KExpr::join(1, 1, KExpr::create(1, 0));
        assert_eq!(bad.evaluate(), Err(ExprError::JoinSameLabel(1)));
        let dup = KExpr::union(KExpr::create(1, 0), KExpr::create(2, 0));
        assert_eq!(dup.evaluate(), Err(ExprError::DuplicateVertex(0)));
        assert_eq!(KExpr::create(0, 0).evaluate(), Err(ExprError::ZeroLabel));
    }

    #[test]
    fn text_roundtrip() {
        let text = "(rho 2 1 (eta 1 2 (+ (v 1 0) (v 2 1))))";
        let e = KExpr::parse(text).unwrap();
        assert_eq!(e.to_string(), text);
        let spaced = KExpr::parse("  ( rho 2 1\n(eta 1 2 (+ (v 1 0)(v 2 1) ) ) )").unwrap();
        assert_eq!(spaced, e);
        assert!(KExpr::parse("(v 1)").is_err());
        assert!(KExpr::parse("(x 1 2)").is_err());
        assert!(KExpr::parse("(v 1 0) (v 1 1)").is_err());
    }

    #[test]
    fn final_labels_follow_relabels() {
        let e = KExpr::parse("(rho 2 3 (+ (v 1 0) (v 2 1)))").unwrap();
        let labels = e.final_labels().unwrap();
        assert_eq!(labels[&0], 1);
        assert_eq!(labels[&1], 3);
        assert_eq!(e.width(), 3);
    }
}
