use std::collections::BTreeSet;

use super::{ExprError, KExpr, Label};
use crate::graph::Graph;

/// Ways to grow an expression by one vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extension {
    AddFalseTwin { of: usize, new: usize },
    AddVertex { new: usize, neighbours: Vec<usize> },
}

pub fn edgeless_expr(vertices: &[usize]) -> Option<KExpr> {
    KExpr::union_all(vertices.iter().map(|&v| KExpr::create(1, v)).collect())
}

/// Width 2 for two or more vertices, all finishing with label 1.
pub fn clique_expr(vertices: &[usize]) -> Option<KExpr> {
    let (&first, rest) = vertices.split_first()?;
    let mut e = KExpr::create(1, first);
    for &v in rest {
        e = KExpr::relabel(2, 1, KExpr::join(1, 2, KExpr::union(e, KExpr::create(2, v))));
    }
    Some(e)
}

/// One label per vertex, edges joined as each vertex arrives. Width equals `n`.
pub fn distinct_label_expr(g: &Graph) -> Option<KExpr> {
    let mut e: Option<KExpr> = None;
    for v in 0..g.n() {
        let mut cur = match e {
            None => KExpr::create(v as Label + 1, v),
            Some(prev) => KExpr::union(prev, KExpr::create(v as Label + 1, v)),
        };
        for u in g.neighbours(v).iter().filter(|&u| u < v) {
            cur = KExpr::join(u as Label + 1, v as Label + 1, cur);
        }
        e = Some(cur);
    }
    e
}

pub fn disjoint_union_expr(parts: Vec<KExpr>) -> Option<KExpr> {
    KExpr::union_all(parts)
}

/// Width at most 2 when every component of `g` is a star; `None` otherwise.
pub fn star_forest_expr(g: &Graph) -> Option<KExpr> {
    let mut parts = Vec::new();
    for comp in g.components() {
        let verts = comp.to_vec();
        if verts.len() <= 2 {
            parts.push(clique_expr(&verts)?);
            continue;
        }
        let centre = *verts.iter().find(|&&v| g.degree(v) == verts.len() - 1)?;
        if verts.iter().any(|&v| v != centre && g.degree(v) != 1) {
            return None;
        }
        let leaves: Vec<usize> = verts.iter().copied().filter(|&v| v != centre).collect();
        let star = KExpr::union(edgeless_expr(&leaves)?, KExpr::create(2, centre));
        parts.push(KExpr::relabel(2, 1, KExpr::join(1, 2, star)));
    }
    KExpr::union_all(parts)
}

fn walk(g: &Graph, start: usize) -> Vec<usize> {
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        let next = g.neighbours(cur).iter().find(|&w| w != prev && w != start);
        match next {
            Some(w) if !order.contains(&w) => {
                order.push(w);
                prev = cur;
                cur = w;
            }
            _ => return order,
        }
    }
}

fn path_expr(order: &[usize]) -> KExpr {
    match order {
        [v] => KExpr::create(1, *v),
        [a, b] => KExpr::relabel(2, 1, KExpr::join(1, 2, KExpr::union(KExpr::create(1, *a), KExpr::create(2, *b)))),
        _ => {
            let mut e = KExpr::create(2, order[0]);
            for &v in &order[1..] {
                e = KExpr::join(2, 3, KExpr::union(e, KExpr::create(3, v)));
                e = KExpr::relabel(3, 2, KExpr::relabel(2, 1, e));
            }
            KExpr::relabel(2, 1, e)
        }
    }
}

fn cycle_expr(order: &[usize]) -> KExpr {
    let last = order.len() - 1;
    let mut e = KExpr::join(4, 2, KExpr::union(KExpr::create(4, order[0]), KExpr::create(2, order[1])));
    for (i, &v) in order.iter().enumerate().skip(2) {
        e = KExpr::join(2, 3, KExpr::union(e, KExpr::create(3, v)));
        if i == last {
            e = KExpr::join(4, 3, e);
        }
        e = KExpr::relabel(3, 2, KExpr::relabel(2, 1, e));
    }
    KExpr::relabel(4, 1, KExpr::relabel(2, 1, e))
}

/// Width at most 4 (3 without cycles) expression for a graph of maximum degree 2.
pub fn expr_for_max_degree_2(g: &Graph) -> Result<KExpr, ExprError> {
    if g.max_degree() > 2 {
        return Err(ExprError::DegreeTooHigh(g.max_degree()));
    }
    let mut parts = Vec::new();
    for comp in g.components() {
        let verts = comp.to_vec();
        match verts.iter().copied().find(|&v| g.degree(v) < 2) {
            Some(end) => parts.push(path_expr(&walk(g, end))),
            None => parts.push(cycle_expr(&walk(g, verts[0]))),
        }
    }
    KExpr::union_all(parts).ok_or(ExprError::EmptyGraph)
}

fn add_twin(e: &KExpr, of: usize, new: usize) -> KExpr {
    match e {
        KExpr::Create { label, vertex } if *vertex == of => {
            KExpr::union(KExpr::create(*label, of), KExpr::create(*label, new))
        }
        KExpr::Create { .. } => e.clone(),
        KExpr::Union(a, b) => KExpr::union(add_twin(a, of, new), add_twin(b, of, new)),
        KExpr::Join { i, j, child } => KExpr::join(*i, *j, add_twin(child, of, new)),
        KExpr::Relabel { from, to, child } => KExpr::relabel(*from, *to, add_twin(child, of, new)),
    }
}

fn split_labels(e: &KExpr, inside: &BTreeSet<usize>, off: Label) -> KExpr {
    match e {
        KExpr::Create { label, vertex } => {
            let l = if inside.contains(vertex) { *label } else { label + off };
            KExpr::create(l, *vertex)
        }
        KExpr::Union(a, b) => KExpr::union(split_labels(a, inside, off), split_labels(b, inside, off)),
        KExpr::Join { i, j, child } => {
            let mut c = split_labels(child, inside, off);
            for (a, b) in [(*i, *j), (*i + off, *j), (*i, *j + off), (*i + off, *j + off)] {
                c = KExpr::join(a, b, c);
            }
            c
        }
        KExpr::Relabel { from, to, child } => {
            let c = split_labels(child, inside, off);
            KExpr::relabel(*from, *to, KExpr::relabel(from + off, to + off, c))
        }
    }
}

pub fn extend_expression(e: &KExpr, ext: &Extension) -> Result<KExpr, ExprError> {
    let finals = e.final_labels()?;
    match ext {
        Extension::AddFalseTwin { of, new } => {
            if !finals.contains_key(of) {
                return Err(ExprError::UnknownVertex(*of));
            }
            if finals.contains_key(new) {
                return Err(ExprError::DuplicateVertex(*new));
            }
            Ok(add_twin(e, *of, *new))
        }
        Extension::AddVertex { new, neighbours } => {
            if finals.contains_key(new) {
                return Err(ExprError::DuplicateVertex(*new));
            }
            if let Some(&u) = neighbours.iter().find(|u| !finals.contains_key(u)) {
                return Err(ExprError::UnknownVertex(u));
            }
            let off = e.max_label();
            if neighbours.is_empty() {
                return Ok(KExpr::union(e.clone(), KExpr::create(off + 1, *new)));
            }
            let inside: BTreeSet<usize> = neighbours.iter().copied().collect();
            let fresh = 2 * off + 1;
            let mut out = KExpr::union(split_labels(e, &inside, off), KExpr::create(fresh, *new));
            let in_labels: BTreeSet<Label> = inside.iter().map(|v| finals[v]).collect();
            for l in in_labels {
                out = KExpr::join(fresh, l, out);
            }
            let out_labels: BTreeSet<Label> =
                finals.iter().filter(|(v, _)| !inside.contains(v)).map(|(_, &l)| l).collect();
            for l in out_labels {
                out = KExpr::relabel(l + off, l, out);
            }
            Ok(out)
        }
    }
}
