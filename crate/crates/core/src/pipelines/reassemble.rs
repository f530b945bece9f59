use std::collections::{BTreeMap, BTreeSet};

use super::certificate::{verify_certificate_detailed, Budget, Certificate, Step, VerifyFailure};
use crate::graph::{Graph, VertexSet};
use crate::kexpr::{extend_expression, Extension, KExpr, Label};

/// An explicit expression for `g` rebuilt from a verified certificate, when every
/// step on the way is invertible. Vertex re-addition costs at most `2k + 1` labels
/// per vertex, a pendant deletion costs one extra label.
pub fn reassemble_expression(g: &Graph, c: &Certificate) -> Result<Option<KExpr>, VerifyFailure> {
    verify_certificate_detailed(g, c)?;
    Ok(rebuild(g, c))
}

pub(crate) fn rebuild(g: &Graph, c: &Certificate) -> Option<KExpr> {
    let kids = c.step.apply(g).ok()?;
    match &c.step {
        Step::Base { expr, .. } => Some(expr.clone()),
        Step::CiteBound { .. } => None,
        Step::SubgraphComplement { set } => {
            if set.len() <= 1 {
                rebuild(&kids[0], &c.children[0])
            } else {
                None
            }
        }
        Step::SplitComponents { groups } => {
            let mut parts = Vec::with_capacity(groups.len());
            for ((h, child), group) in kids.iter().zip(&c.children).zip(groups) {
                parts.push(rebuild(h, child)?.map_vertices(|v| group[v]));
            }
            KExpr::union_all(parts)
        }
        Step::DeleteVertices { set, budget } => {
            let gone = VertexSet::from_ids(g.n(), set.iter().copied());
            let kept = g.vertices().difference(&gone).to_vec();
            let e = rebuild(&kids[0], &c.children[0])?.map_vertices(|v| kept[v]);
            match budget {
                Budget::Count(_) => re_add(g, e, &gone),
                Budget::Pendant => Some(add_pendants(g, e, set)),
            }
        }
        Step::RemoveFalseTwins { classes } => {
            let mut gone = VertexSet::new(g.n());
            for class in classes {
                let keep = class.iter().min()?;
                gone.union_with(&VertexSet::from_ids(g.n(), class.iter().copied().filter(|v| v != keep)));
            }
            let kept = g.vertices().difference(&gone).to_vec();
            let mut e = rebuild(&kids[0], &c.children[0])?.map_vertices(|v| kept[v]);
            for class in classes {
                let keep = *class.iter().min()?;
                for &v in class.iter().filter(|&&v| v != keep) {
                    e = extend_expression(&e, &Extension::AddFalseTwin { of: keep, new: v }).ok()?;
                }
            }
            Some(e)
        }
        Step::BipartiteComplement { s, t } => {
            let e = rebuild(&kids[0], &c.children[0])?;
            join_groups(&kids[0], e, s, t)
        }
    }
}

fn classes(e: &KExpr) -> Option<BTreeMap<Label, BTreeSet<usize>>> {
    let mut out: BTreeMap<Label, BTreeSet<usize>> = BTreeMap::new();
    for (v, l) in e.final_labels().ok()? {
        out.entry(l).or_default().insert(v);
    }
    Some(out)
}

/// Labels whose classes exactly tile `set`, if they do.
fn tiling_labels(classes: &BTreeMap<Label, BTreeSet<usize>>, set: &[usize]) -> Option<BTreeSet<Label>> {
    let want: BTreeSet<usize> = set.iter().copied().collect();
    let labels: BTreeSet<Label> = classes.iter().filter(|(_, c)| !c.is_disjoint(&want)).map(|(&l, _)| l).collect();
    labels.iter().all(|l| classes[l].is_subset(&want)).then_some(labels)
}

/// Inverts a complementation of a set pair that the child has no edges across,
/// when both sides are unions of final label classes.
fn join_groups(child: &Graph, e: KExpr, s: &[usize], t: &[usize]) -> Option<KExpr> {
    if s.iter().any(|&a| t.iter().any(|&b| child.has_edge(a, b))) {
        return None;
    }
    let cl = classes(&e)?;
    let ls = tiling_labels(&cl, s)?;
    let lt = tiling_labels(&cl, t)?;
    let mut out = e;
    for &a in &ls {
        for &b in &lt {
            out = KExpr::join(a, b, out);
        }
    }
    Some(out)
}

fn re_add(g: &Graph, mut e: KExpr, gone: &VertexSet) -> Option<KExpr> {
    let mut present = g.vertices().difference(gone);
    for v in gone.iter() {
        let nb = g.neighbours_in(v, &present);
        let twin = present.iter().find(|&w| !g.has_edge(v, w) && g.neighbours_in(w, &present) == nb);
        e = match twin {
            Some(w) => extend_expression(&e, &Extension::AddFalseTwin { of: w, new: v }).ok()?,
            None => add_vertex(e, v, &nb)?,
        };
        present.insert(v);
    }
    Some(e)
}

fn add_vertex(e: KExpr, v: usize, nb: &VertexSet) -> Option<KExpr> {
    let cl = classes(&e)?;
    let nbv = nb.to_vec();
    if let Some(labels) = tiling_labels(&cl, &nbv) {
        let fresh = e.max_label() + 1;
        let mut out = KExpr::union(e, KExpr::create(fresh, v));
        for l in labels {
            out = KExpr::join(fresh, l, out);
        }
        return Some(out);
    }
    extend_expression(&e, &Extension::AddVertex { new: v, neighbours: nbv }).ok()
}

fn hang(e: &KExpr, star: Label, hanging: &BTreeMap<usize, Vec<usize>>) -> KExpr {
    match e {
        KExpr::Create { label, vertex } => match hanging.get(vertex) {
            Some(ps) => {
                let mut u = e.clone();
                for &p in ps {
                    u = KExpr::union(u, KExpr::create(star, p));
                }
                KExpr::join(*label, star, u)
            }
            None => e.clone(),
        },
        KExpr::Union(a, b) => KExpr::union(hang(a, star, hanging), hang(b, star, hanging)),
        KExpr::Join { i, j, child } => KExpr::join(*i, *j, hang(child, star, hanging)),
        KExpr::Relabel { from, to, child } => KExpr::relabel(*from, *to, hang(child, star, hanging)),
    }
}

/// Each pendant vertex is created next to its neighbour with a label used nowhere else.
fn add_pendants(g: &Graph, e: KExpr, set: &[usize]) -> KExpr {
    let star = e.max_label() + 1;
    let mut hanging: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut isolated = Vec::new();
    for &p in set {
        match g.neighbours(p).first() {
            Some(q) => hanging.entry(q).or_default().push(p),
            None => isolated.push(p),
        }
    }
    let mut out = hang(&e, star, &hanging);
    for p in isolated {
        out = KExpr::union(out, KExpr::create(star, p));
    }
    out
}
