use std::fmt;

use thiserror::Error;

use crate::graph::{Complementation, Graph, VertexSet};
use crate::kexpr::KExpr;
use crate::patterns::{self, Pattern};

/// How many vertices a deletion step may remove.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Budget {
    Count(usize),
    /// An independent set whose members each have at most one neighbour.
    Pendant,
}

/// The forbidden pair a triangle-free piece avoids besides `K3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TriangleFreeCase {
    P1P5,
    S122,
    P1P2P3,
}

impl TriangleFreeCase {
    pub const ALL: [TriangleFreeCase; 3] = [TriangleFreeCase::P1P5, TriangleFreeCase::S122, TriangleFreeCase::P1P2P3];

    pub fn name(self) -> &'static str {
        match self {
            TriangleFreeCase::P1P5 => "P1+P5",
            TriangleFreeCase::S122 => "S122",
            TriangleFreeCase::P1P2P3 => "P1+P2+P3",
        }
    }

    pub fn pattern(self) -> Pattern {
        Pattern::named(self.name()).expect("built-in pattern name")
    }

    pub fn parse(s: &str) -> Option<TriangleFreeCase> {
        TriangleFreeCase::ALL.into_iter().find(|c| c.name().eq_ignore_ascii_case(s.trim()))
    }
}

/// A class with a known clique-width bound that a leaf may cite instead of an expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundSource {
    DiamondP2P3Free,
    S123FreeBipartite,
    K3HFree(TriangleFreeCase),
}

impl BoundSource {
    pub fn name(self) -> String {
        match self {
            BoundSource::DiamondP2P3Free => "diamond-p2p3-free".into(),
            BoundSource::S123FreeBipartite => "s123-free-bipartite".into(),
            BoundSource::K3HFree(h) => format!("k3-h-free:{}", h.name()),
        }
    }

    pub fn parse(s: &str) -> Option<BoundSource> {
        match s {
            "diamond-p2p3-free" => Some(BoundSource::DiamondP2P3Free),
            "s123-free-bipartite" => Some(BoundSource::S123FreeBipartite),
            _ => s.strip_prefix("k3-h-free:").and_then(TriangleFreeCase::parse).map(BoundSource::K3HFree),
        }
    }

    /// Whether `g` lies in the cited class.
    pub fn admits(self, g: &Graph) -> bool {
        match self {
            BoundSource::DiamondP2P3Free => {
                let pats = [Pattern::new("diamond", patterns::diamond()), Pattern::named("P2+P3").unwrap()];
                patterns::is_free(g, &pats).is_free()
            }
            BoundSource::S123FreeBipartite => {
                g.is_bipartite() && !patterns::contains_induced(g, &patterns::subdivided_claw(1, 2, 3))
            }
            BoundSource::K3HFree(h) => {
                !patterns::contains_induced(g, &patterns::complete(3)) && !patterns::contains_induced(g, &h.pattern().graph)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    DeleteVertices { set: Vec<usize>, budget: Budget },
    SubgraphComplement { set: Vec<usize> },
    BipartiteComplement { s: Vec<usize>, t: Vec<usize> },
    /// Groups with no edges between them; one child per group, in order.
    SplitComponents { groups: Vec<Vec<usize>> },
    /// Each class keeps its least member.
    RemoveFalseTwins { classes: Vec<Vec<usize>> },
    CiteBound { source: BoundSource, bound: Option<usize> },
    Base { expr: KExpr, bound: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StepError {
    #[error("vertex {0} is out of range")]
    OutOfRange(usize),
    #[error("vertex {0} is listed twice")]
    Repeated(usize),
    #[error("deletion of {size} vertices exceeds budget {budget}")]
    OverBudget { size: usize, budget: usize },
    #[error("vertex {0} is not a pendant vertex of an independent set")]
    NotPendant(usize),
    #[error("groups do not cover vertex {0}")]
    Uncovered(usize),
    #[error("edge {0}-{1} joins two groups")]
    CrossingEdge(usize, usize),
    #[error("empty group or child graph")]
    Empty,
    #[error("vertices {0} and {1} are not false twins")]
    NotTwins(usize, usize),
    #[error("twin class has fewer than two vertices")]
    TrivialClass,
    #[error("graph is not in the class {0}")]
    NotInClass(String),
    #[error("expression does not evaluate to the graph")]
    BadExpression,
    #[error("expression width {width} exceeds bound {bound}")]
    WidthOverBound { width: usize, bound: usize },
    #[error("{0} expects {1} children, found {2}")]
    ChildCount(&'static str, usize, usize),
}

fn check_ids(n: usize, ids: &[usize]) -> Result<VertexSet, StepError> {
    let mut set = VertexSet::new(n);
    for &v in ids {
        if v >= n {
            return Err(StepError::OutOfRange(v));
        }
        if set.contains(v) {
            return Err(StepError::Repeated(v));
        }
        set.insert(v);
    }
    Ok(set)
}

/// The child graph after deleting `set`, or an error if nothing would remain.
fn delete(g: &Graph, set: &VertexSet) -> Result<Graph, StepError> {
    if set.len() == g.n() {
        return Err(StepError::Empty);
    }
    Ok(g.delete_vertices(set).expect("checked set").0)
}

impl Step {
    pub fn kind(&self) -> &'static str {
        match self {
            Step::DeleteVertices { .. } => "delete",
            Step::SubgraphComplement { .. } => "complement",
            Step::BipartiteComplement { .. } => "bicomplement",
            Step::SplitComponents { .. } => "split",
            Step::RemoveFalseTwins { .. } => "twins",
            Step::CiteBound { .. } => "cite",
            Step::Base { .. } => "base",
        }
    }

    pub fn child_count(&self) -> usize {
        match self {
            Step::SplitComponents { groups } => groups.len(),
            Step::CiteBound { .. } | Step::Base { .. } => 0,
            _ => 1,
        }
    }

    /// Checks the step against `g` and returns the child graphs in order.
    pub fn apply(&self, g: &Graph) -> Result<Vec<Graph>, StepError> {
        let n = g.n();
        match self {
            Step::DeleteVertices { set, budget } => {
                let s = check_ids(n, set)?;
                match budget {
                    Budget::Count(b) if set.len() > *b => {
                        return Err(StepError::OverBudget { size: set.len(), budget: *b });
                    }
                    Budget::Count(_) => {}
                    Budget::Pendant => {
                        if let Some(v) = s.iter().find(|&v| g.degree(v) > 1 || !g.neighbours(v).is_disjoint(&s)) {
                            return Err(StepError::NotPendant(v));
                        }
                    }
                }
                Ok(vec![delete(g, &s)?])
            }
            Step::SubgraphComplement { set } => {
                let s = check_ids(n, set)?;
                Ok(vec![g.apply_complementation(Complementation::Subgraph(&s)).expect("checked set")])
            }
            Step::BipartiteComplement { s, t } => {
                let a = check_ids(n, s)?;
                let b = check_ids(n, t)?;
                if let Some(v) = a.intersection(&b).first() {
                    return Err(StepError::Repeated(v));
                }
                Ok(vec![g.apply_complementation(Complementation::Bipartite(&a, &b)).expect("checked sets")])
            }
            Step::SplitComponents { groups } => {
                let mut group_of = vec![usize::MAX; n];
                let mut sets = Vec::with_capacity(groups.len());
                for (i, group) in groups.iter().enumerate() {
                    if group.is_empty() {
                        return Err(StepError::Empty);
                    }
                    let s = check_ids(n, group)?;
                    for v in s.iter() {
                        if group_of[v] != usize::MAX {
                            return Err(StepError::Repeated(v));
                        }
                        group_of[v] = i;
                    }
                    sets.push(s);
                }
                if let Some(v) = group_of.iter().position(|&x| x == usize::MAX) {
                    return Err(StepError::Uncovered(v));
                }
                if let Some((u, v)) = g.edges().into_iter().find(|&(u, v)| group_of[u] != group_of[v]) {
                    return Err(StepError::CrossingEdge(u, v));
                }
                Ok(sets.iter().map(|s| g.induced_subgraph(s).expect("checked set").0).collect())
            }
            Step::RemoveFalseTwins { classes } => {
                let mut removed = VertexSet::new(n);
                let mut seen = VertexSet::new(n);
                for class in classes {
                    if class.len() < 2 {
                        return Err(StepError::TrivialClass);
                    }
                    let s = check_ids(n, class)?;
                    if let Some(v) = s.intersection(&seen).first() {
                        return Err(StepError::Repeated(v));
                    }
                    seen.union_with(&s);
                    let keep = s.first().expect("non-empty class");
                    for v in s.iter().skip(1) {
                        if g.neighbours(v) != g.neighbours(keep) {
                            return Err(StepError::NotTwins(keep, v));
                        }
                        removed.insert(v);
                    }
                }
                Ok(vec![delete(g, &removed)?])
            }
            Step::CiteBound { source, .. } => {
                if !source.admits(g) {
                    return Err(StepError::NotInClass(source.name()));
                }
                Ok(Vec::new())
            }
            Step::Base { expr, bound } => {
                if !expr.validate_against(g) {
                    return Err(StepError::BadExpression);
                }
                if expr.width() > *bound {
                    return Err(StepError::WidthOverBound { width: expr.width(), bound: *bound });
                }
                Ok(Vec::new())
            }
        }
    }
}

/// A replayable reduction log: each node records the graph it applies to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub n: usize,
    pub hash: u64,
    pub step: Step,
    /// Children use the ids of their own graphs, which keep the parent's order.
    pub children: Vec<Certificate>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("at node {path:?} ({kind}): {reason}")]
pub struct VerifyFailure {
    /// Child indices from the root to the failing node.
    pub path: Vec<usize>,
    pub kind: &'static str,
    pub reason: String,
}

impl Certificate {
    pub fn leaf(g: &Graph, step: Step) -> Certificate {
        Certificate { n: g.n(), hash: g.fingerprint(), step, children: Vec::new() }
    }

    pub fn node(g: &Graph, step: Step, children: Vec<Certificate>) -> Certificate {
        Certificate { n: g.n(), hash: g.fingerprint(), step, children }
    }

    /// Pre-order traversal of all nodes.
    pub fn nodes(&self) -> Vec<&Certificate> {
        let mut out = vec![self];
        for c in &self.children {
            out.extend(c.nodes());
        }
        out
    }

    /// Widths of all `Base` leaves, in pre-order.
    pub fn base_widths(&self) -> Vec<usize> {
        self.nodes()
            .into_iter()
            .filter_map(|c| match &c.step {
                Step::Base { expr, .. } => Some(expr.width()),
                _ => None,
            })
            .collect()
    }

    pub fn cited_sources(&self) -> Vec<BoundSource> {
        self.nodes()
            .into_iter()
            .filter_map(|c| match &c.step {
                Step::CiteBound { source, .. } => Some(*source),
                _ => None,
            })
            .collect()
    }

    pub fn step_count(&self) -> usize {
        self.nodes().len()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("cwcert 1\n");
        self.write_lines(0, &mut out);
        out
    }

    fn write_lines(&self, depth: usize, out: &mut String) {
        out.push_str(&format!("{depth} {} {:016x} {}", self.n, self.hash, self.step.kind()));
        match &self.step {
            Step::DeleteVertices { set, budget } => match budget {
                Budget::Count(b) => out.push_str(&format!(" count {b} {}", fmt_set(set))),
                Budget::Pendant => out.push_str(&format!(" pendant {}", fmt_set(set))),
            },
            Step::SubgraphComplement { set } => out.push_str(&format!(" {}", fmt_set(set))),
            Step::BipartiteComplement { s, t } => out.push_str(&format!(" {} {}", fmt_set(s), fmt_set(t))),
            Step::SplitComponents { groups } => {
                for g in groups {
                    out.push_str(&format!(" {}", fmt_set(g)));
                }
            }
            Step::RemoveFalseTwins { classes } => {
                for c in classes {
                    out.push_str(&format!(" {}", fmt_set(c)));
                }
            }
            Step::CiteBound { source, bound } => {
                let b = bound.map_or("-".to_string(), |b| b.to_string());
                out.push_str(&format!(" {} {b}", source.name()));
            }
            Step::Base { expr, bound } => out.push_str(&format!(" {bound} {expr}")),
        }
        out.push('\n');
        for c in &self.children {
            c.write_lines(depth + 1, out);
        }
    }

    pub fn parse(text: &str) -> Result<Certificate, CertParseError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        match lines.next() {
            Some((_, l)) if l.trim() == "cwcert 1" => {}
            Some((i, _)) => return Err(CertParseError { line: i + 1, msg: "expected header `cwcert 1`".into() }),
            None => return Err(CertParseError { line: 0, msg: "empty certificate".into() }),
        }
        let parsed: Vec<(usize, usize, Certificate)> =
            lines.map(|(i, l)| parse_line(l).map(|(d, c)| (i + 1, d, c))).collect::<Result<_, _>>()?;
        let mut pos = 0;
        let root = build_tree(&parsed, &mut pos, 0)?;
        if pos != parsed.len() {
            return Err(CertParseError { line: parsed[pos].0, msg: "trailing nodes after the root".into() });
        }
        Ok(root)
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn fmt_set(s: &[usize]) -> String {
    if s.is_empty() {
        return "-".into();
    }
    s.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("certificate line {line}: {msg}")]
pub struct CertParseError {
    pub line: usize,
    pub msg: String,
}

fn parse_set(tok: &str) -> Option<Vec<usize>> {
    if tok == "-" {
        return Some(Vec::new());
    }
    tok.split(',').map(|x| x.parse().ok()).collect()
}

fn parse_line(line: &str) -> Result<(usize, Certificate), CertParseError> {
    let err = |msg: &str| CertParseError { line: 0, msg: format!("{msg} in {line:?}") };
    let toks: Vec<&str> = line.split_whitespace().collect();
    let tok = |i: usize, what: &str| toks.get(i).copied().ok_or_else(|| err(&format!("missing {what}")));
    let set = |t: &str| parse_set(t).ok_or_else(|| err("bad vertex set"));
    let depth: usize = tok(0, "depth")?.parse().map_err(|_| err("bad depth"))?;
    let n: usize = tok(1, "vertex count")?.parse().map_err(|_| err("bad vertex count"))?;
    let hash = u64::from_str_radix(tok(2, "hash")?, 16).map_err(|_| err("bad hash"))?;
    let kind = tok(3, "kind")?;
    let (step, used) = match kind {
        "delete" => match tok(4, "budget")? {
            "count" => {
                let b = tok(5, "count")?.parse().map_err(|_| err("bad count"))?;
                (Step::DeleteVertices { set: set(tok(6, "set")?)?, budget: Budget::Count(b) }, 7)
            }
            "pendant" => (Step::DeleteVertices { set: set(tok(5, "set")?)?, budget: Budget::Pendant }, 6),
            _ => return Err(err("unknown budget")),
        },
        "complement" => (Step::SubgraphComplement { set: set(tok(4, "set")?)? }, 5),
        "bicomplement" => (Step::BipartiteComplement { s: set(tok(4, "set")?)?, t: set(tok(5, "set")?)? }, 6),
        "split" | "twins" => {
            let groups = toks[4..].iter().map(|t| set(t)).collect::<Result<Vec<_>, _>>()?;
            let step = if kind == "split" {
                Step::SplitComponents { groups }
            } else {
                Step::RemoveFalseTwins { classes: groups }
            };
            (step, toks.len())
        }
        "cite" => {
            let source = BoundSource::parse(tok(4, "source")?).ok_or_else(|| err("unknown source"))?;
            let b = tok(5, "bound")?;
            let bound = if b == "-" { None } else { Some(b.parse().map_err(|_| err("bad bound"))?) };
            (Step::CiteBound { source, bound }, 6)
        }
        "base" => {
            let bound = tok(4, "bound")?.parse().map_err(|_| err("bad bound"))?;
            let expr = KExpr::parse(&toks[5.min(toks.len())..].join(" ")).map_err(|e| err(&e.to_string()))?;
            (Step::Base { expr, bound }, toks.len())
        }
        _ => return Err(err("unknown step kind")),
    };
    if used < toks.len() {
        return Err(err("trailing tokens"));
    }
    Ok((depth, Certificate { n, hash, step, children: Vec::new() }))
}

fn build_tree(
    lines: &[(usize, usize, Certificate)],
    pos: &mut usize,
    depth: usize,
) -> Result<Certificate, CertParseError> {
    let Some((line, d, node)) = lines.get(*pos) else {
        return Err(CertParseError { line: 0, msg: "missing child node".into() });
    };
    if *d != depth {
        return Err(CertParseError { line: *line, msg: format!("expected depth {depth}, found {d}") });
    }
    *pos += 1;
    let mut node = node.clone();
    for _ in 0..node.step.child_count() {
        node.children.push(build_tree(lines, pos, depth + 1)?);
    }
    Ok(node)
}

/// Replays `c` from `g`; reports the first failing node.
pub fn verify_certificate_detailed(g: &Graph, c: &Certificate) -> Result<(), VerifyFailure> {
    let mut path = Vec::new();
    verify_rec(g, c, &mut path)
}

pub fn verify_certificate(g: &Graph, c: &Certificate) -> bool {
    verify_certificate_detailed(g, c).is_ok()
}

fn verify_rec(g: &Graph, c: &Certificate, path: &mut Vec<usize>) -> Result<(), VerifyFailure> {
    let fail = |path: &[usize], reason: String| VerifyFailure { path: path.to_vec(), kind: c.step.kind(), reason };
    if c.n != g.n() || c.hash != g.fingerprint() {
        return Err(fail(path, format!("graph hash mismatch (stored n={} {:016x})", c.n, c.hash)));
    }
    let kids = c.step.apply(g).map_err(|e| fail(path, e.to_string()))?;
    if kids.len() != c.children.len() {
        return Err(fail(path, StepError::ChildCount(c.step.kind(), kids.len(), c.children.len()).to_string()));
    }
    for (i, (h, child)) in kids.iter().zip(&c.children).enumerate() {
        path.push(i);
        verify_rec(h, child, path)?;
        path.pop();
    }
    Ok(())
}
