use super::basic::{basic_expression, recognize_basic, triangles};
use super::certificate::{BoundSource, Budget, Certificate, Step, TriangleFreeCase};
use super::steps::{base, bicomplement_steps, chain, delete_then, exact_base, named, require_free, restrict, split, then, Res, EXACT_BASE_MAX};
use super::triangle_free::{cite, triangle_free_reduce};
use super::{claim, PipelineError};
use crate::graph::{Graph, VertexSet};
use crate::kexpr::{clique_expr, edgeless_expr, star_forest_expr, KExpr};
use crate::patterns;

/// Certificate for a `(diamond, P1+2P2)`-free graph.
pub fn diamond_reduce(g: &Graph) -> Result<Certificate, PipelineError> {
    require_free(g, &named(&["diamond", "P1+2P2"]))?;
    reduce(g)
}

fn reduce(g: &Graph) -> Res {
    if g.n() == 0 {
        return Err(PipelineError::EmptyGraph);
    }
    if !g.is_connected() {
        return split(g, &g.components(), component);
    }
    if patterns::contains_induced(g, &patterns::complete(4)) {
        with_k4(g)
    } else if triangles(g).is_empty() {
        to_triangle_free(g, &(0..g.n()).collect::<Vec<_>>(), "diamond-triangle-free")
    } else {
        with_triangles(g)
    }
}

/// A component of a disconnected graph in the class is `2P2`-free.
fn component(h: &Graph, back: &[usize]) -> Res {
    if h.n() <= EXACT_BASE_MAX {
        exact_base(h)
    } else {
        cite(h, BoundSource::DiamondP2P3Free, back, "diamond-component")
    }
}

fn to_triangle_free(h: &Graph, back: &[usize], what: &'static str) -> Res {
    if let Some(t) = triangles(h).first() {
        return Err(claim(what, t.map(|x| back[x]), "a triangle survives the deletion"));
    }
    triangle_free_reduce(h, TriangleFreeCase::S122).map_err(|e| match e {
        PipelineError::NotFree(v) => claim(what, v.embedding.iter().map(|&x| back[x]), format!("remaining graph contains {}", v.pattern)),
        other => other,
    })
}

pub(crate) fn max_clique(g: &Graph) -> Vec<usize> {
    fn grow(g: &Graph, current: &mut Vec<usize>, cand: VertexSet, best: &mut Vec<usize>) {
        if current.len() > best.len() {
            *best = current.clone();
        }
        if current.len() + cand.len() <= best.len() {
            return;
        }
        for v in cand.iter() {
            current.push(v);
            let next = VertexSet::from_ids(g.n(), g.neighbours(v).intersection(&cand).iter().filter(|&w| w > v));
            grow(g, current, next, best);
            current.pop();
        }
    }
    let mut best = Vec::new();
    grow(g, &mut Vec::new(), g.vertices(), &mut best);
    best
}

fn clique_plus_edgeless(g: &Graph, clique: &VertexSet) -> Option<KExpr> {
    let rest = g.vertices().difference(clique).to_vec();
    let parts: Vec<KExpr> = clique_expr(&clique.to_vec()).into_iter().chain(edgeless_expr(&rest)).collect();
    KExpr::union_all(parts)
}

fn with_k4(g: &Graph) -> Res {
    let n = g.n();
    let k_list = max_clique(g);
    let k = VertexSet::from_ids(n, k_list.iter().copied());
    if k.len() == n {
        return base(g, clique_expr(&k_list), 2, "k4-clique");
    }
    let outside = g.vertices().difference(&k);
    if let Some(x) = outside.iter().find(|&x| g.neighbours_in(x, &k).len() > 1) {
        return Err(claim("k4-one-neighbour", [x], "outside vertex with two neighbours in the clique"));
    }
    let odeg = |v: usize| g.neighbours(v).difference(&k).len();
    let mut ranked = k_list.clone();
    ranked.sort_by_key(|&v| (std::cmp::Reverse(odeg(v)), v));
    let vs = [ranked[0], ranked[1], ranked[2], ranked[3]];
    let vi: [VertexSet; 4] = vs.map(|v| g.neighbours(v).difference(&k));
    let mut u = outside.clone();
    for s in &vi {
        u.difference_with(s);
    }
    for s in &vi {
        if !g.is_clique(s) && !g.is_independent(s) {
            return Err(claim("k4-v-shape", s.iter(), "V_i is neither a clique nor independent"));
        }
    }
    if let Some(i) = (0..4).find(|&i| vi[i].len() >= 3 && g.is_clique(&vi[i])) {
        return delete_then(g, &VertexSet::from_ids(n, [vs[i]]), 1, |h, _| reduce(h));
    }
    let clique_sets: Vec<&VertexSet> = vi.iter().filter(|s| s.len() >= 2 && g.is_clique(s)).collect();
    let open_sets: Vec<&VertexSet> = vi.iter().filter(|s| g.is_independent(s)).collect();

    if u.len() <= 2 {
        let mut gone = u.clone();
        for s in &clique_sets {
            gone.union_with(s);
        }
        for v in vs {
            gone.insert(v);
        }
        if gone.len() == n {
            gone.remove(vs[0]);
        }
        let pairs = trivial_pairs(g, &open_sets, &[], "k4-v-pairs")?;
        return delete_then(g, &gone, gone.len(), |h, back| {
            let local: Vec<(VertexSet, VertexSet)> = pairs.iter().map(|(s, t)| (restrict(s, back), restrict(t, back))).collect();
            let kk = restrict(&k, back);
            chain(h, bicomplement_steps(&local), |e| base(e, clique_plus_edgeless(e, &kk), 2, "k4-small-u"))
        });
    }

    let active = k_list.iter().filter(|&&v| odeg(v) > 0).count();
    if k_list.iter().all(|&v| odeg(v) <= 1) {
        let v1 = vi[0].clone();
        return then(g, Step::SubgraphComplement { set: k_list.clone() }, |h| {
            then(h, Step::DeleteVertices { set: k_list.clone(), budget: Budget::Pendant }, |h2| {
                let back: Vec<usize> = outside.to_vec();
                if h2.n() <= EXACT_BASE_MAX {
                    return exact_base(h2);
                }
                let local = restrict(&v1, &back);
                if local.is_empty() {
                    return cite(h2, BoundSource::DiamondP2P3Free, &back, "k4-pendant-clique");
                }
                delete_then(h2, &local, 1, |h3, b3| {
                    let b: Vec<usize> = b3.iter().map(|&x| back[x]).collect();
                    cite(h3, BoundSource::DiamondP2P3Free, &b, "k4-pendant-clique")
                })
            })
        });
    }
    if active == 1 {
        return delete_then(g, &VertexSet::from_ids(n, [vs[0]]), 1, |h, _| reduce(h));
    }

    let v12 = vi[0].union(&vi[1]);
    let Some((x, y)) = v12.iter().find_map(|x| v12.iter().find(|&y| y > x && !g.has_edge(x, y)).map(|y| (x, y))) else {
        return Err(claim("k4-nonadjacent-pair", v12.iter(), "V_1 and V_2 are pairwise adjacent"));
    };
    let ends = VertexSet::from_ids(n, [x, y]);
    let mut u1 = VertexSet::from_ids(n, u.iter().filter(|&z| g.is_complete_to(z, &ends)));
    let mut u2 = VertexSet::from_ids(n, u.iter().filter(|&z| g.is_anticomplete_to(z, &ends)));
    if let Some(z) = u.difference(&u1.union(&u2)).first() {
        return Err(claim("k4-u-split", [x, y, z], "far vertex sees exactly one of the pair"));
    }
    if !g.is_independent(&u1) || !g.is_independent(&u2) || !g.set_complete_to(&u1, &u2) {
        return Err(claim("k4-u-bipartite", u.iter(), "far vertices are not complete bipartite"));
    }
    if u1.len() < u2.len() {
        std::mem::swap(&mut u1, &mut u2);
    }
    let mut gone = VertexSet::new(n);
    if u2.len() == 1 {
        gone.union_with(&u2);
        u2 = VertexSet::new(n);
    }
    for s in &clique_sets {
        gone.union_with(s);
    }
    let mut pairs = trivial_pairs(g, &open_sets, &[&u1, &u2], "k4-v-pairs")?;
    if !u1.is_empty() && !u2.is_empty() {
        pairs.push((u1.clone(), u2.clone()));
    }
    let finish = |h: &Graph, back: &[usize]| {
        let mut steps = bicomplement_steps(&pairs.iter().map(|(s, t)| (restrict(s, back), restrict(t, back))).collect::<Vec<_>>());
        steps.push(Step::SubgraphComplement { set: restrict(&k, back).to_vec() });
        chain(h, steps, |e| base(e, star_forest_expr(e), 2, "k4-star-forest"))
    };
    if gone.is_empty() {
        finish(g, &(0..n).collect::<Vec<_>>())
    } else {
        delete_then(g, &gone, gone.len(), finish)
    }
}

/// Complete pairs among `sets`, and between `sets` and `others`; a partial pair is a violation.
fn trivial_pairs(g: &Graph, sets: &[&VertexSet], others: &[&VertexSet], what: &'static str) -> Result<Vec<(VertexSet, VertexSet)>, PipelineError> {
    let mut out = Vec::new();
    let mut check = |s: &VertexSet, t: &VertexSet| {
        if s.is_empty() || t.is_empty() || g.set_anticomplete_to(s, t) {
            Ok(())
        } else if g.set_complete_to(s, t) {
            out.push((s.clone(), t.clone()));
            Ok(())
        } else {
            Err(claim(what, s.iter().chain(t.iter()).take(4), "sets are neither complete nor anticomplete"))
        }
    };
    for (i, s) in sets.iter().enumerate() {
        for t in &sets[i + 1..] {
            check(s, t)?;
        }
        for t in others {
            check(s, t)?;
        }
    }
    Ok(out)
}

struct Around {
    t: [usize; 3],
    v: [VertexSet; 3],
    u: VertexSet,
}

fn with_triangles(g: &Graph) -> Res {
    let n = g.n();
    let all = triangles(g);
    let mut around = Vec::with_capacity(all.len());
    for &t in &all {
        let ts = VertexSet::from_ids(n, t);
        let mut a = Around { t, v: std::array::from_fn(|_| VertexSet::new(n)), u: VertexSet::new(n) };
        for x in g.vertices().difference(&ts).iter() {
            match g.neighbours_in(x, &ts).to_vec().as_slice() {
                [] => a.u.insert(x),
                [y] => a.v[t.iter().position(|z| z == y).expect("in triangle")].insert(x),
                _ => return Err(claim("k3-one-neighbour", [x], "vertex with two neighbours in a triangle")),
            }
        }
        around.push(a);
    }

    for a in &around {
        if let Some(k) = (0..3).find(|&k| a.v[k].len() <= 2) {
            if n <= 5 {
                return exact_base(g);
            }
            let gone = g.neighbours(a.t[k]).clone();
            return delete_then(g, &gone, 4, |h, _| reduce(h));
        }
    }
    for a in &around {
        if let Some(s) = a.v.iter().find(|s| !g.is_independent(s)) {
            return Err(claim("k3-v-independent", s.iter(), "V_i of a triangle has an edge"));
        }
    }
    for (i, a) in around.iter().enumerate() {
        for b in &around[i + 1..] {
            if let Some(&x) = a.t.iter().find(|x| b.t.contains(x)) {
                return Err(claim("k3-disjoint", [x], "two triangles share a vertex"));
            }
        }
    }
    for a in &around {
        if let Some((p, q)) = a.u.iter().find_map(|p| g.neighbours_in(p, &a.u).first().map(|q| (p, q))) {
            let gone = VertexSet::from_ids(n, a.t.iter().copied().chain([p, q]));
            return delete_then(g, &gone, 5, |h, back| to_triangle_free(h, back, "k3-u-edge"));
        }
    }
    for a in &around {
        let Some(p) = a.u.first() else { continue };
        let mut complete = Vec::new();
        for k in 0..3 {
            if g.set_complete_to(&a.u, &a.v[k]) {
                complete.push(k);
            } else if !g.set_anticomplete_to(&a.u, &a.v[k]) {
                return Err(claim("k3-u-trivial", a.t.iter().copied().chain([p]), "far set splits a V_i"));
            }
        }
        match complete.as_slice() {
            [] => return Err(claim("k3-u-attached", [p], "far set has no neighbour among the V_i")),
            [k] => {
                for q in a.u.iter() {
                    let mut want = g.neighbours(q).clone();
                    want.union_with(&VertexSet::from_ids(n, a.t));
                    want.remove(a.t[*k]);
                    if g.neighbours(a.t[*k]) != &want {
                        return Err(claim("k3-u-copy", [q, a.t[*k]], "far vertex does not copy its triangle vertex"));
                    }
                }
            }
            _ => {
                let gone = VertexSet::from_ids(n, a.t.iter().copied().chain([p]));
                return delete_then(g, &gone, 4, |h, back| to_triangle_free(h, back, "k3-u-two-sides"));
            }
        }
    }
    for a in &around {
        if let Some(triple) = independent_triple(g, &a.v) {
            return three_p1(g, a, triple);
        }
    }
    if all.len() < 3 {
        let gone = VertexSet::from_ids(n, all.iter().flatten().copied());
        return delete_then(g, &gone, 6, |h, back| to_triangle_free(h, back, "k3-few-triangles"));
    }
    let b = recognize_basic(g).map_err(|r| claim("basic-recognition", r.witness.clone(), r.to_string()))?;
    let e = basic_expression(g, &b).map_err(|r| claim("basic-expression", r.witness.clone(), r.to_string()))?;
    base(g, Some(e), 9, "basic-expression")
}

fn independent_triple(g: &Graph, v: &[VertexSet; 3]) -> Option<[usize; 3]> {
    for x in v[0].iter() {
        for y in v[1].iter().filter(|&y| !g.has_edge(x, y)) {
            if let Some(z) = v[2].iter().find(|&z| !g.has_edge(x, z) && !g.has_edge(y, z)) {
                return Some([x, y, z]);
            }
        }
    }
    None
}

/// With an independent triple across the three sides, deleting the triangle and nine
/// complementations leave no edges.
fn three_p1(g: &Graph, a: &Around, triple: [usize; 3]) -> Res {
    let what = "k3-3p1";
    let n = g.n();
    if let Some(p) = a.u.first() {
        return Err(claim(what, triple.into_iter().chain([p]), "far set is not empty"));
    }
    let mut far = Vec::with_capacity(3);
    let mut near = Vec::with_capacity(3);
    for k in 0..3 {
        let ends = VertexSet::from_ids(n, (0..3).filter(|&l| l != k).map(|l| triple[l]));
        let anti = VertexSet::from_ids(n, a.v[k].iter().filter(|&x| g.is_anticomplete_to(x, &ends)));
        let comp = VertexSet::from_ids(n, a.v[k].iter().filter(|&x| g.is_complete_to(x, &ends)));
        if let Some(x) = a.v[k].difference(&anti.union(&comp)).first() {
            return Err(claim(what, triple.into_iter().chain([x]), "vertex sees one of the other two"));
        }
        far.push(anti);
        near.push(comp);
    }
    let mut pairs = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                pairs.push((far[i].clone(), near[j].clone()));
            }
            if i < j {
                pairs.push((near[i].clone(), near[j].clone()));
            }
        }
    }
    if let Some((s, t)) = pairs.iter().find(|(s, t)| !g.set_complete_to(s, t)) {
        return Err(claim(what, s.iter().chain(t.iter()).take(2), "sets that must be complete are not"));
    }
    delete_then(g, &VertexSet::from_ids(n, a.t), 3, |h, back| {
        let local: Vec<(VertexSet, VertexSet)> = pairs.iter().map(|(s, t)| (restrict(s, back), restrict(t, back))).collect();
        chain(h, bicomplement_steps(&local), |e| base(e, edgeless_expr(&(0..e.n()).collect::<Vec<_>>()), 1, what))
    })
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::pipelines::{reassemble_expression, verify_certificate};

    #[test]
    fn k4_is_a_base() {
        let g = patterns::complete(4);
        let c = diamond_reduce(&g).unwrap();
        assert!(matches!(c.step, Step::Base { bound: 2, .. }));
        assert_eq!(c.base_widths(), vec![2]);
    }

    #[test]
    fn two_triangles() {
        let g = patterns::complete(3).disjoint_union(&patterns::complete(3));
        let c = diamond_reduce(&g).unwrap();
        assert!(matches!(c.step, Step::SplitComponents { .. }));
        assert!(verify_certificate(&g, &c));
        let e = reassemble_expression(&g, &c).unwrap().unwrap();
        assert!(e.validate_against(&g));
    }

    #[test]
    fn max_clique_finds_k5() {
        let mut edges = patterns::complete(5).edges();
        edges.extend([(5, 0), (6, 5)]);
        let g = Graph::new(7, &edges).unwrap();
        assert_eq!(max_clique(&g), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn k4_with_pendants() {
        let mut edges = patterns::complete(4).edges();
        edges.extend([(0, 4), (1, 5), (2, 6), (3, 7)]);
        let g = Graph::new(8, &edges).unwrap();
        let c = diamond_reduce(&g).unwrap();
        assert!(verify_certificate(&g, &c));
    }

    #[test]
    fn rejects_diamond() {
        assert!(matches!(diamond_reduce(&patterns::diamond()), Err(PipelineError::NotFree(_))));
    }
}
