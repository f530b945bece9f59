use super::certificate::{Budget, Certificate, Step};
use super::{PipelineError, claim};
use crate::graph::{Graph, VertexSet};
use crate::kexpr::exact_cliquewidth;
use crate::patterns::{self, FreeVerdict, Pattern};

pub(crate) type Res = Result<Certificate, PipelineError>;

/// Largest graph that gets an exact-width `Base` leaf.
pub(crate) const EXACT_BASE_MAX: usize = 6;

pub(crate) fn then(g: &Graph, step: Step, cont: impl FnOnce(&Graph) -> Res) -> Res {
    let kids = step.apply(g)?;
    let child = cont(&kids[0])?;
    Ok(Certificate::node(g, step, vec![child]))
}

pub(crate) fn chain(g: &Graph, mut steps: Vec<Step>, cont: impl FnOnce(&Graph) -> Res) -> Res {
    if steps.is_empty() {
        return cont(g);
    }
    let first = steps.remove(0);
    then(g, first, |h| chain(h, steps, cont))
}

/// Deletes `set` and continues on the child; `back` maps child ids to `g` ids.
pub(crate) fn delete_then(g: &Graph, set: &VertexSet, budget: usize, cont: impl FnOnce(&Graph, &[usize]) -> Res) -> Res {
    let back: Vec<usize> = g.vertices().difference(set).to_vec();
    then(g, Step::DeleteVertices { set: set.to_vec(), budget: Budget::Count(budget) }, |h| cont(h, &back))
}

pub(crate) fn split(g: &Graph, groups: &[VertexSet], mut f: impl FnMut(&Graph, &[usize]) -> Res) -> Res {
    let step = Step::SplitComponents { groups: groups.iter().map(VertexSet::to_vec).collect() };
    let kids = step.apply(g)?;
    let mut children = Vec::with_capacity(kids.len());
    for (h, s) in kids.iter().zip(groups) {
        children.push(f(h, &s.to_vec())?);
    }
    Ok(Certificate::node(g, step, children))
}

/// Complementations, one per neighbourhood class, that remove every edge between
/// `piece` and the rest. Classes are taken on whichever side has fewer of them.
pub(crate) fn cutting_pairs(g: &Graph, piece: &VertexSet) -> Vec<(VertexSet, VertexSet)> {
    let rest = g.vertices().difference(piece);
    let classes = |from: &VertexSet, to: &VertexSet| {
        let mut out: Vec<(VertexSet, VertexSet)> = Vec::new();
        for v in from.iter() {
            let nb = g.neighbours_in(v, to);
            if nb.is_empty() {
                continue;
            }
            match out.iter_mut().find(|(_, n)| *n == nb) {
                Some((c, _)) => c.insert(v),
                None => out.push((VertexSet::from_ids(g.n(), [v]), nb)),
            }
        }
        out
    };
    let a = classes(piece, &rest);
    let b = classes(&rest, piece);
    if b.len() < a.len() {
        b
    } else {
        a
    }
}

pub(crate) fn bicomplement_steps(pairs: &[(VertexSet, VertexSet)]) -> Vec<Step> {
    pairs
        .iter()
        .filter(|(s, t)| !s.is_empty() && !t.is_empty())
        .map(|(s, t)| Step::BipartiteComplement { s: s.to_vec(), t: t.to_vec() })
        .collect()
}

/// Applies `pairs`, then splits off `piece`; the callbacks receive ids back into `g`.
pub(crate) fn separate_with(
    g: &Graph,
    pairs: &[(VertexSet, VertexSet)],
    piece: &VertexSet,
    on_piece: impl FnOnce(&Graph, &[usize]) -> Res,
    on_rest: impl FnOnce(&Graph, &[usize]) -> Res,
) -> Res {
    let all: Vec<usize> = (0..g.n()).collect();
    if piece.len() == g.n() {
        return on_piece(g, &all);
    }
    if piece.is_empty() {
        return on_rest(g, &all);
    }
    let rest = g.vertices().difference(piece);
    chain(g, bicomplement_steps(pairs), |h| {
        let mut on_piece = Some(on_piece);
        let mut on_rest = Some(on_rest);
        split(h, &[piece.clone(), rest], |sub, back| match on_piece.take() {
            Some(f) => f(sub, back),
            None => (on_rest.take().expect("two groups"))(sub, back),
        })
    })
}

pub(crate) fn separate(
    g: &Graph,
    piece: &VertexSet,
    on_piece: impl FnOnce(&Graph, &[usize]) -> Res,
    on_rest: impl FnOnce(&Graph, &[usize]) -> Res,
) -> Res {
    let pairs = cutting_pairs(g, piece);
    separate_with(g, &pairs, piece, on_piece, on_rest)
}

/// `Base` leaf carrying an optimal expression.
pub(crate) fn exact_base(g: &Graph) -> Res {
    if g.n() == 0 {
        return Err(PipelineError::EmptyGraph);
    }
    let (w, e) = exact_cliquewidth(g, g.n())?.expect("n labels always suffice");
    Ok(Certificate::leaf(g, Step::Base { expr: e, bound: w }))
}

pub(crate) fn base(g: &Graph, expr: Option<crate::kexpr::KExpr>, bound: usize, what: &'static str) -> Res {
    match expr {
        Some(e) if e.validate_against(g) => Ok(Certificate::leaf(g, Step::Base { expr: e, bound })),
        _ => Err(claim(what, [], "the final piece does not have the expected shape")),
    }
}

pub(crate) fn require_free(g: &Graph, pats: &[Pattern]) -> Result<(), PipelineError> {
    match patterns::is_free(g, pats) {
        FreeVerdict::Free => Ok(()),
        FreeVerdict::Contains(v) => Err(PipelineError::NotFree(v)),
    }
}

pub(crate) fn named(names: &[&str]) -> Vec<Pattern> {
    names.iter().map(|n| Pattern::named(n).expect("built-in pattern name")).collect()
}

/// Maps `set` (ids of a parent graph) into a child whose ids map back through `back`.
pub(crate) fn restrict(set: &VertexSet, back: &[usize]) -> VertexSet {
    VertexSet::from_ids(back.len(), (0..back.len()).filter(|&i| set.contains(back[i])))
}
