//! Decompositions of graphs with a fixed vertex partition into independent sets.

use std::fmt;

use thiserror::Error;

use crate::graph::{Graph, GraphError, VertexSet};
use crate::kexpr::{KExpr, Label};
use crate::patterns::{self, FreeVerdict, Pattern, Violation};

/// Mixed part pairs beyond this make the relation enumeration too large.
pub const MAX_MIXED_PAIRS: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("vertex {0} is in no part")]
    Uncovered(usize),
    #[error("vertex {0} is in more than one part")]
    Overlap(usize),
    #[error("part {part} contains the edge {u}-{v}")]
    NotIndependent { part: usize, u: usize, v: usize },
    #[error("expected {expected} parts, found {found}")]
    PartCount { expected: usize, found: usize },
    #[error("parts {i} and {j} induce {}", .violation.pattern)]
    ForbiddenPair { i: usize, j: usize, violation: Violation },
    #[error("vertices {triple:?} induce {kind}")]
    ForbiddenTriple { triple: [usize; 3], kind: &'static str },
    #[error("{0} part pairs are neither edgeless nor complete")]
    TooManyMixedPairs(usize),
    #[error("no split of {0} exists although the preconditions hold")]
    NoSplit(VertexSet),
    #[error("the tree does not end in single vertices")]
    IncompleteTree,
}

/// A fixed partition of the vertex set into independent sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KPartition {
    parts: Vec<VertexSet>,
    part_of: Vec<usize>,
}

impl KPartition {
    pub fn new(g: &Graph, parts: &[Vec<usize>]) -> Result<KPartition, DecompError> {
        let n = g.n();
        let mut part_of = vec![usize::MAX; n];
        let mut sets = Vec::with_capacity(parts.len());
        for (i, part) in parts.iter().enumerate() {
            let set = VertexSet::try_from_ids(n, part.iter().copied())?;
            for v in set.iter() {
                if part_of[v] != usize::MAX {
                    return Err(DecompError::Overlap(v));
                }
                part_of[v] = i;
            }
            for u in set.iter() {
                if let Some(v) = g.neighbours_in(u, &set).first() {
                    return Err(DecompError::NotIndependent { part: i, u: u.min(v), v: u.max(v) });
                }
            }
            sets.push(set);
        }
        if let Some(v) = part_of.iter().position(|&p| p == usize::MAX) {
            return Err(DecompError::Uncovered(v));
        }
        Ok(KPartition { parts: sets, part_of })
    }

    /// Builds the partition from a part index per vertex.
    pub fn from_assignment(g: &Graph, assignment: &[usize], k: usize) -> Result<KPartition, DecompError> {
        let mut parts = vec![Vec::new(); k];
        for (v, &p) in assignment.iter().enumerate() {
            if p >= k {
                return Err(DecompError::PartCount { expected: k, found: p + 1 });
            }
            parts[p].push(v);
        }
        if assignment.len() != g.n() {
            return Err(DecompError::Uncovered(assignment.len().min(g.n())));
        }
        KPartition::new(g, &parts)
    }

    pub fn bipartition(g: &Graph) -> Option<KPartition> {
        let colours = g.bipartition()?;
        let assignment: Vec<usize> = colours.iter().map(|&c| c as usize).collect();
        KPartition::from_assignment(g, &assignment, 2).ok()
    }

    pub fn k(&self) -> usize {
        self.parts.len()
    }

    pub fn part(&self, i: usize) -> &VertexSet {
        &self.parts[i]
    }

    pub fn part_of(&self, v: usize) -> usize {
        self.part_of[v]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rel {
    Complete,
    AntiComplete,
}

impl Rel {
    fn code(self) -> char {
        match self {
            Rel::Complete => 'C',
            Rel::AntiComplete => 'A',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionSplit {
    pub primed: Vec<VertexSet>,
    pub double: Vec<VertexSet>,
    /// `rel[i][j]` relates `primed[i]` to `double[j]`; empty pairs read as anti-complete.
    pub rel: Vec<Vec<Rel>>,
}

impl DecompositionSplit {
    fn from_primed(g: &Graph, p: &KPartition, within: &VertexSet, primed: &VertexSet) -> DecompositionSplit {
        let k = p.k();
        let mut pr = Vec::with_capacity(k);
        let mut db = Vec::with_capacity(k);
        for i in 0..k {
            let part = p.part(i).intersection(within);
            pr.push(part.intersection(primed));
            db.push(part.difference(primed));
        }
        let rel = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        if !pr[i].is_empty() && !db[j].is_empty() && g.set_complete_to(&pr[i], &db[j]) {
                            Rel::Complete
                        } else {
                            Rel::AntiComplete
                        }
                    })
                    .collect()
            })
            .collect();
        DecompositionSplit { primed: pr, double: db, rel }
    }

    pub fn primed_union(&self, n: usize) -> VertexSet {
        self.primed.iter().fold(VertexSet::new(n), |acc, s| acc.union(s))
    }

    pub fn double_union(&self, n: usize) -> VertexSet {
        self.double.iter().fold(VertexSet::new(n), |acc, s| acc.union(s))
    }

    /// Re-checks the definition against `g` without trusting the search.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let n = g.n();
        if self.primed_union(n).is_empty() || self.double_union(n).is_empty() {
            return false;
        }
        let k = self.primed.len();
        (0..k).all(|i| {
            (0..k).all(|j| {
                let complete = g.set_complete_to(&self.primed[i], &self.double[j]);
                let anti = g.set_anticomplete_to(&self.primed[i], &self.double[j]);
                match self.rel[i][j] {
                    Rel::Complete => complete,
                    Rel::AntiComplete => anti,
                }
            })
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecompositionTree {
    Leaf { vertex: usize, part: usize },
    Node { split: DecompositionSplit, primed: Box<DecompositionTree>, double: Box<DecompositionTree> },
}

impl DecompositionTree {
    pub fn vertices(&self) -> Vec<usize> {
        match self {
            DecompositionTree::Leaf { vertex, .. } => vec![*vertex],
            DecompositionTree::Node { primed, double, .. } => {
                let mut out = primed.vertices();
                out.extend(double.vertices());
                out
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            DecompositionTree::Leaf { .. } => 1,
            DecompositionTree::Node { primed, double, .. } => primed.leaf_count() + double.leaf_count(),
        }
    }

    pub fn splits(&self) -> Vec<&DecompositionSplit> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            if let DecompositionTree::Node { split, primed, double } = t {
                out.push(split);
                stack.push(double);
                stack.push(primed);
            }
        }
        out
    }
}

impl fmt::Display for DecompositionTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecompositionTree::Leaf { vertex, part } => write!(f, "(leaf {vertex} {})", part + 1),
            DecompositionTree::Node { split, primed, double } => {
                write!(f, "(split")?;
                for s in &split.primed {
                    write!(f, " {s}")?;
                }
                write!(f, " |")?;
                for s in &split.double {
                    write!(f, " {s}")?;
                }
                write!(f, " rel")?;
                for row in &split.rel {
                    let codes: String = row.iter().map(|r| r.code()).collect();
                    write!(f, " {codes}")?;
                }
                write!(f, " {primed} {double})")
            }
        }
    }
}

/// The relation choices worth enumerating: a pair that is edgeless or complete has a forced best choice.
fn relation_candidates(g: &Graph, p: &KPartition, within: &VertexSet) -> Result<Vec<Vec<Vec<Rel>>>, DecompError> {
    let k = p.k();
    let parts: Vec<VertexSet> = (0..k).map(|i| p.part(i).intersection(within)).collect();
    let mut base = vec![vec![Rel::AntiComplete; k]; k];
    let mut mixed = Vec::new();
    for i in 0..k {
        for j in 0..k {
            if i == j || parts[i].is_empty() || parts[j].is_empty() {
                continue;
            }
            if g.set_complete_to(&parts[i], &parts[j]) {
                base[i][j] = Rel::Complete;
            } else if !g.set_anticomplete_to(&parts[i], &parts[j]) {
                mixed.push((i, j));
            }
        }
    }
    if mixed.len() > MAX_MIXED_PAIRS {
        return Err(DecompError::TooManyMixedPairs(mixed.len()));
    }
    let mut out = Vec::with_capacity(1 << mixed.len());
    for code in 0u32..(1 << mixed.len()) {
        let mut rel = base.clone();
        for (bit, &(i, j)) in mixed.iter().enumerate() {
            rel[i][j] = if code >> bit & 1 == 1 { Rel::Complete } else { Rel::AntiComplete };
        }
        out.push(rel);
    }
    Ok(out)
}

/// Vertices forced into the primed side once `a` is primed, under the relation choice `rel`.
fn forced_closure(g: &Graph, p: &KPartition, within: &VertexSet, rel: &[Vec<Rel>], a: usize) -> VertexSet {
    let n = g.n();
    let mut seen = VertexSet::from_ids(n, [a]);
    let mut stack = vec![a];
    while let Some(x) = stack.pop() {
        let px = p.part_of(x);
        for y in within.iter() {
            if seen.contains(y) || p.part_of(y) == px {
                continue;
            }
            let want = rel[px][p.part_of(y)] == Rel::Complete;
            if g.has_edge(x, y) != want {
                seen.insert(y);
                stack.push(y);
            }
        }
    }
    seen
}

fn find_split_within(g: &Graph, p: &KPartition, within: &VertexSet) -> Result<Option<VertexSet>, DecompError> {
    if within.len() < 2 {
        return Ok(None);
    }
    let candidates = relation_candidates(g, p, within)?;
    for a in within.iter() {
        for rel in &candidates {
            let closure = forced_closure(g, p, within, rel, a);
            if closure.len() < within.len() {
                return Ok(Some(closure));
            }
        }
    }
    Ok(None)
}

fn check_partition(g: &Graph, p: &KPartition) -> Result<(), DecompError> {
    if p.part_of.len() != g.n() {
        return Err(DecompError::Uncovered(p.part_of.len().min(g.n())));
    }
    for (i, part) in p.parts.iter().enumerate() {
        for u in part.iter() {
            if let Some(v) = g.neighbours_in(u, part).first() {
                return Err(DecompError::NotIndependent { part: i, u: u.min(v), v: u.max(v) });
            }
        }
    }
    Ok(())
}

/// A split of `g` with respect to `p`, preferring a primed side that holds the least possible vertex.
pub fn find_k_decomposition(g: &Graph, p: &KPartition) -> Result<Option<DecompositionSplit>, DecompError> {
    check_partition(g, p)?;
    let all = g.vertices();
    Ok(find_split_within(g, p, &all)?.map(|primed| DecompositionSplit::from_primed(g, p, &all, &primed)))
}

fn leaf(p: &KPartition, within: &VertexSet) -> DecompositionTree {
    let vertex = within.first().expect("non-empty set");
    DecompositionTree::Leaf { vertex, part: p.part_of(vertex) }
}

fn greedy_tree(g: &Graph, p: &KPartition, within: &VertexSet) -> Result<Option<DecompositionTree>, DecompError> {
    if within.len() == 1 {
        return Ok(Some(leaf(p, within)));
    }
    let Some(primed) = find_split_within(g, p, within)? else {
        return Ok(None);
    };
    let split = DecompositionSplit::from_primed(g, p, within, &primed);
    let rest = within.difference(&primed);
    let (Some(left), Some(right)) = (greedy_tree(g, p, &primed)?, greedy_tree(g, p, &rest)?) else {
        return Ok(None);
    };
    Ok(Some(DecompositionTree::Node { split, primed: Box::new(left), double: Box::new(right) }))
}

/// Recursive splitting down to single vertices; `None` when some piece has no split.
///
/// Splits restrict to induced subgraphs, so total decomposability is hereditary and any
/// sequence of splits succeeds exactly when one does.
pub fn canonical_totally_decompose(g: &Graph, p: &KPartition) -> Result<Option<DecompositionTree>, DecompError> {
    check_partition(g, p)?;
    if g.n() == 0 {
        return Ok(None);
    }
    greedy_tree(g, p, &g.vertices())
}

/// Same as [`canonical_totally_decompose`] for any number of parts.
pub fn totally_k_decompose(g: &Graph, p: &KPartition) -> Result<Option<DecompositionTree>, DecompError> {
    canonical_totally_decompose(g, p)
}

fn p7_s123() -> Vec<Pattern> {
    vec![Pattern::new("P7", patterns::path(7)), Pattern::new("S1,2,3", patterns::subdivided_claw(1, 2, 3))]
}

/// Checks both hypotheses of the three-part total decomposition.
pub fn check_three_part_conditions(g: &Graph, p: &KPartition) -> Result<(), DecompError> {
    check_partition(g, p)?;
    if p.k() != 3 {
        return Err(DecompError::PartCount { expected: 3, found: p.k() });
    }
    let forbidden = p7_s123();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let (h, back) = g.induced_subgraph(&p.part(i).union(p.part(j)))?;
        if let FreeVerdict::Contains(v) = patterns::is_free(&h, &forbidden) {
            let embedding = v.embedding.iter().map(|&x| back[x]).collect();
            return Err(DecompError::ForbiddenPair { i, j, violation: Violation { embedding, ..v } });
        }
    }
    for a in p.part(0).iter() {
        for b in p.part(1).iter() {
            let ab = g.has_edge(a, b);
            for c in p.part(2).iter() {
                let (ac, bc) = (g.has_edge(a, c), g.has_edge(b, c));
                if ab && ac && bc {
                    return Err(DecompError::ForbiddenTriple { triple: [a, b, c], kind: "K3" });
                }
                if !ab && !ac && !bc {
                    return Err(DecompError::ForbiddenTriple { triple: [a, b, c], kind: "3P1" });
                }
            }
        }
    }
    Ok(())
}

fn relation_of(g: &Graph, v: usize, set: &VertexSet, want: Rel) -> bool {
    match want {
        Rel::Complete => g.is_complete_to(v, set),
        Rel::AntiComplete => g.is_anticomplete_to(v, set),
    }
}

/// The constructive split step of the three-part decomposition on the piece `within`.
fn three_part_split(g: &Graph, p: &KPartition, within: &VertexSet) -> Result<VertexSet, DecompError> {
    let parts: Vec<VertexSet> = (0..3).map(|i| p.part(i).intersection(within)).collect();
    if parts.iter().any(VertexSet::is_empty) {
        return find_split_within(g, p, within)?.ok_or_else(|| DecompError::NoSplit(within.clone()));
    }
    let (v1, v2, v3) = (&parts[0], &parts[1], &parts[2]);
    let two = v1.union(v2);
    let candidates = relation_candidates(g, p, &two)?;
    let mut seed = None;
    'search: for a in v1.iter() {
        for rel in &candidates {
            let closure = forced_closure(g, p, &two, rel, a);
            if !v2.is_subset(&closure) {
                seed = Some((closure, rel[0][1]));
                break 'search;
            }
        }
    }
    let Some((closure, r12)) = seed else {
        return Err(DecompError::NoSplit(two));
    };
    let mut v1p = v1.intersection(&closure);
    let mut v2pp = v2.difference(&closure);
    loop {
        let mut moved = false;
        for v in v1.difference(&v1p).iter() {
            if relation_of(g, v, &v2pp, r12) {
                v1p.insert(v);
                moved = true;
            }
        }
        for w in v2.intersection(&closure).iter() {
            if v2pp.contains(w) {
                continue;
            }
            if relation_of(g, w, &v1p, r12) {
                v2pp.insert(w);
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    let v3p: VertexSet = match r12 {
        Rel::Complete => VertexSet::from_ids(g.n(), v3.iter().filter(|&z| g.is_anticomplete_to(z, &v2pp))),
        Rel::AntiComplete => VertexSet::from_ids(g.n(), v3.iter().filter(|&z| g.is_complete_to(z, &v2pp))),
    };
    let v2p = v2.difference(&v2pp);
    Ok(v1p.union(&v2p).union(&v3p))
}

fn three_part_tree(g: &Graph, p: &KPartition, within: &VertexSet) -> Result<DecompositionTree, DecompError> {
    if within.len() == 1 {
        return Ok(leaf(p, within));
    }
    let primed = three_part_split(g, p, within)?;
    let split = DecompositionSplit::from_primed(g, p, within, &primed);
    if !split.is_valid_for(g) {
        return Err(DecompError::NoSplit(within.clone()));
    }
    let rest = within.difference(&primed);
    Ok(DecompositionTree::Node {
        split,
        primed: Box::new(three_part_tree(g, p, &primed)?),
        double: Box::new(three_part_tree(g, p, &rest)?),
    })
}

/// Total decomposition of a three-part graph following the constructive proof.
pub fn total_three_decompose(g: &Graph, p: &KPartition) -> Result<DecompositionTree, DecompError> {
    check_three_part_conditions(g, p)?;
    if g.n() == 0 {
        return Err(DecompError::IncompleteTree);
    }
    three_part_tree(g, p, &g.vertices())
}

/// A width `2k` expression in which every vertex of part `i` ends with label `i + 1`.
pub fn expression_from_tree(t: &DecompositionTree, k: usize) -> Result<KExpr, DecompError> {
    match t {
        DecompositionTree::Leaf { vertex, part } => {
            if *part >= k {
                return Err(DecompError::PartCount { expected: k, found: part + 1 });
            }
            Ok(KExpr::create(*part as Label + 1, *vertex))
        }
        DecompositionTree::Node { split, primed, double } => {
            let kk = k as Label;
            let left = expression_from_tree(primed, k)?;
            let right = expression_from_tree(double, k)?.map_labels(|l| if l <= kk { l + kk } else { l - kk });
            let mut e = KExpr::union(left, right);
            for i in 0..k {
                for j in 0..k {
                    if split.rel[i][j] == Rel::Complete && !split.primed[i].is_empty() && !split.double[j].is_empty() {
                        e = KExpr::join(i as Label + 1, kk + j as Label + 1, e);
                    }
                }
            }
            for (j, part) in split.double.iter().enumerate() {
                if !part.is_empty() {
                    e = KExpr::relabel(kk + j as Label + 1, j as Label + 1, e);
                }
            }
            Ok(e)
        }
    }
}
