use super::certificate::{BoundSource, Certificate, Step, TriangleFreeCase};
use super::odd_cycle::reduce_k3_c5_s123;
use super::steps::{base, bicomplement_steps, chain, delete_then, require_free, restrict, separate_with, split, Res};
use super::ten_set::{check_ten_set_conditions, reduce_checked, TenSetPartition};
use super::{claim, PipelineError};
use crate::graph::{Graph, VertexSet};
use crate::kexpr::{edgeless_expr, expr_for_max_degree_2, star_forest_expr};
use crate::patterns::{self, Pattern, Violation};

/// Vertices outside an induced `C5` sorted by their neighbours on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct C5Partition {
    pub cycle: [usize; 5],
    /// No neighbour on the cycle.
    pub u: VertexSet,
    /// `w[i]`: the only cycle neighbour is `cycle[i]`.
    pub w: [VertexSet; 5],
    /// `v[i]`: adjacent to `cycle[i - 1]` and `cycle[i + 1]`.
    pub v: [VertexSet; 5],
}

fn at(i: usize, d: usize) -> usize {
    (i + d) % 5
}

impl C5Partition {
    /// The ten sets as classes of the graph with the cycle deleted.
    fn classes_without_cycle(&self, n: usize) -> Vec<usize> {
        let mut class = vec![usize::MAX; n];
        for (c, s) in self.v.iter().chain(self.w.iter()).enumerate() {
            for x in s.iter() {
                class[x] = c;
            }
        }
        let on_cycle = VertexSet::from_ids(n, self.cycle);
        (0..n).filter(|&x| !on_cycle.contains(x)).map(|x| class[x]).collect()
    }

    fn outside_is_empty(&self) -> bool {
        self.u.is_empty() && self.v.iter().chain(self.w.iter()).all(VertexSet::is_empty)
    }
}

/// Classifies every vertex off the cycle; a vertex seeing two consecutive cycle vertices is a triangle.
pub fn partition_around_c5(g: &Graph, cycle: [usize; 5]) -> Result<C5Partition, PipelineError> {
    let n = g.n();
    for i in 0..5 {
        if cycle[i] >= n || cycle[..i].contains(&cycle[i]) {
            return Err(PipelineError::Precondition(format!("cycle vertex {} is repeated or out of range", cycle[i])));
        }
    }
    for i in 0..5 {
        if !g.has_edge(cycle[i], cycle[at(i, 1)]) || g.has_edge(cycle[i], cycle[at(i, 2)]) {
            return Err(PipelineError::Precondition(format!("{cycle:?} does not induce a C5 in this order")));
        }
    }
    let on_cycle = VertexSet::from_ids(n, cycle);
    let mut p = C5Partition {
        cycle,
        u: VertexSet::new(n),
        w: std::array::from_fn(|_| VertexSet::new(n)),
        v: std::array::from_fn(|_| VertexSet::new(n)),
    };
    for x in g.vertices().difference(&on_cycle).iter() {
        let hits: Vec<usize> = (0..5).filter(|&i| g.has_edge(x, cycle[i])).collect();
        if let Some(&i) = hits.iter().find(|&&i| hits.contains(&at(i, 1))) {
            let embedding = vec![x, cycle[i], cycle[at(i, 1)]];
            return Err(PipelineError::NotFree(Violation { pattern: "K3".into(), embedding }));
        }
        match hits.as_slice() {
            [] => p.u.insert(x),
            &[i] => p.w[i].insert(x),
            &[a, b] => p.v[if b - a == 2 { a + 1 } else { at(b, 1) }].insert(x),
            _ => unreachable!("three cycle neighbours include two consecutive ones"),
        }
    }
    Ok(p)
}

/// Certificate for a `(K3, H)`-free graph with `H` one of the three triangle-free cases.
pub fn triangle_free_reduce(g: &Graph, case: TriangleFreeCase) -> Result<Certificate, PipelineError> {
    require_free(g, &[Pattern::new("K3", patterns::complete(3)), case.pattern()])?;
    reduce(g, case)
}

pub(crate) fn reduce(g: &Graph, case: TriangleFreeCase) -> Res {
    if g.n() == 0 {
        return Err(PipelineError::EmptyGraph);
    }
    if !g.is_connected() {
        return split(g, &g.components(), |h, _| reduce(h, case));
    }
    let found = patterns::find_induced_embedding(g, &patterns::cycle(5)).expect("pattern within cap");
    let Some(emb) = found else {
        return reduce_k3_c5_s123(g);
    };
    let cycle: [usize; 5] = emb.try_into().expect("five vertices");
    let p = partition_around_c5(g, cycle)?;
    if !p.u.is_empty() {
        return match case {
            TriangleFreeCase::S122 => Err(claim("s122-u-empty", p.u.iter().take(1), "vertex far from the C5")),
            TriangleFreeCase::P1P5 => detach_u(g, &p, case),
            TriangleFreeCase::P1P2P3 => delete_u_neighbourhood(g, &p),
        };
    }
    match case {
        TriangleFreeCase::P1P2P3 => {
            let mut budget = 10 * g.n();
            p123_loop(g, cycle, &mut budget)
        }
        _ => finish_with_ten_sets(g, &p),
    }
}

fn cycle_base(g: &Graph) -> Res {
    base(g, expr_for_max_degree_2(g).ok(), 4, "c5-base")
}

/// Deletes the cycle and hands the ten sets over, or stops at the bare cycle.
fn finish_with_ten_sets(g: &Graph, p: &C5Partition) -> Res {
    if p.outside_is_empty() {
        return cycle_base(g);
    }
    let class = p.classes_without_cycle(g.n());
    let on_cycle = VertexSet::from_ids(g.n(), p.cycle);
    delete_then(g, &on_cycle, 5, |h, _| {
        let tp = TenSetPartition::from_classes(h.n(), &class);
        if let Err(e) = check_ten_set_conditions(h, &tp) {
            return Err(claim("ten-set-conditions", e.witness.clone(), e.to_string()));
        }
        reduce_checked(h, &class)
    })
}

fn detach_u(g: &Graph, p: &C5Partition, case: TriangleFreeCase) -> Res {
    let first = p.u.first().expect("non-empty");
    let nb = g.neighbours(first).clone();
    if let Some(x) = p.u.iter().find(|&x| g.neighbours(x) != &nb) {
        return Err(claim("p1p5-u-same-neighbourhood", [first, x], "vertices far from the C5 differ"));
    }
    if !g.is_independent(&p.u) {
        return Err(claim("p1p5-u-independent", p.u.iter(), "far vertices are not independent"));
    }
    separate_with(
        g,
        &[(p.u.clone(), nb)],
        &p.u,
        |h, back| base(h, edgeless_expr(&(0..h.n()).collect::<Vec<_>>()), 1, "p1p5-u-piece").map_err(|_| claim("p1p5-u-piece", back.iter().copied(), "piece has edges")),
        |h, _| reduce(h, case),
    )
}

fn delete_u_neighbourhood(g: &Graph, p: &C5Partition) -> Res {
    if let Some(x) = p.u.iter().find(|&x| !g.neighbours_in(x, &p.u).is_empty()) {
        return Err(claim("p1p2p3-u-independent", [x], "far vertices are adjacent"));
    }
    for x in p.u.iter() {
        for i in 0..5 {
            if g.neighbours_in(x, &p.v[i].union(&p.w[at(i, 1)])).len() > 1 {
                return Err(claim("p1p2p3-u-degree", [x], "two neighbours in one V_i and W_(i+1)"));
            }
        }
    }
    let u = p.u.first().expect("non-empty");
    let mut gone = g.neighbours(u).clone();
    gone.insert(u);
    delete_then(g, &gone, 6, |h, back| cite(h, BoundSource::DiamondP2P3Free, back, "p1p2p3-u-deletion"))
}

pub(crate) fn cite(h: &Graph, source: BoundSource, back: &[usize], what: &'static str) -> Res {
    if !source.admits(h) {
        return Err(claim(what, back.iter().copied(), format!("remaining graph is outside {}", source.name())));
    }
    Ok(Certificate::leaf(h, Step::CiteBound { source, bound: None }))
}

fn map_cycle(cycle: [usize; 5], back: &[usize]) -> [usize; 5] {
    cycle.map(|c| back.iter().position(|&b| b == c).expect("cycle survives"))
}

/// The large-set loop of the `P1+P2+P3` case: small sets are deleted and `W_i`-`W_(i+2)`
/// matchings are split off until neither applies, then the remaining cases run.
fn p123_loop(g: &Graph, cycle: [usize; 5], budget: &mut usize) -> Res {
    if *budget == 0 {
        return Err(claim("p1p2p3-worklist-cap", cycle, "the large-set loop did not settle"));
    }
    *budget -= 1;
    let p = partition_around_c5(g, cycle)?;
    if !p.u.is_empty() {
        return Err(claim("p1p2p3-u-empty", p.u.iter().take(1), "a far vertex reappeared"));
    }
    let mut small = VertexSet::new(g.n());
    for s in p.v.iter().chain(p.w.iter()).filter(|s| s.len() == 1) {
        small.union_with(s);
    }
    if !small.is_empty() {
        return delete_then(g, &small, 10, |h, back| p123_loop(h, map_cycle(cycle, back), budget));
    }
    for i in 0..5 {
        let (a, b) = (&p.w[i], &p.w[at(i, 2)]);
        if g.set_anticomplete_to(a, b) {
            continue;
        }
        return split_matching(g, a, b, cycle, budget);
    }
    if let Some(triple) = find_3p1(g, &p) {
        return three_p1_shortcut(g, &p, triple);
    }
    finish_with_ten_sets(g, &p)
}

fn split_matching(g: &Graph, a: &VertexSet, b: &VertexSet, cycle: [usize; 5], budget: &mut usize) -> Res {
    if let Some(x) = a.iter().chain(b.iter()).find(|&x| g.neighbours_in(x, if a.contains(x) { b } else { a }).len() > 1) {
        return Err(claim("p1p2p3-w-matching", [x], "two neighbours across W_i and W_(i+2)"));
    }
    let a1 = VertexSet::from_ids(g.n(), a.iter().filter(|&x| !g.neighbours_in(x, b).is_empty()));
    let b2 = VertexSet::from_ids(g.n(), b.iter().filter(|&x| !g.neighbours_in(x, a).is_empty()));
    let piece = a1.union(&b2);
    let outside = g.vertices().difference(&piece);
    if let Some(x) = outside.iter().find(|&x| !g.is_trivial_to(x, &a1) || !g.is_trivial_to(x, &b2)) {
        return Err(claim("p1p2p3-w-matching-trivial", [x], "outside vertex splits the matched sets"));
    }
    let complete_to = |s: &VertexSet| VertexSet::from_ids(g.n(), outside.iter().filter(|&x| g.is_complete_to(x, s)));
    let pairs = [(a1.clone(), complete_to(&a1)), (b2.clone(), complete_to(&b2))];
    separate_with(
        g,
        &pairs,
        &piece,
        |h, _| base(h, star_forest_expr(h), 2, "p1p2p3-matching-piece"),
        |h, back| p123_loop(h, map_cycle(cycle, back), budget),
    )
}

fn find_3p1(g: &Graph, p: &C5Partition) -> Option<(usize, [usize; 3])> {
    for i in 0..5 {
        for a in p.v[i].iter() {
            for b in p.v[at(i, 1)].iter().filter(|&b| !g.has_edge(a, b)) {
                if let Some(c) = p.w[at(i, 3)].iter().find(|&c| !g.has_edge(a, c) && !g.has_edge(b, c)) {
                    return Some((i, [a, b, c]));
                }
            }
        }
    }
    None
}

/// With an independent triple across `V_i`, `V_(i+1)`, `W_(i+3)`, the rest of the graph
/// falls apart into six sets and six complementations leave no edges.
fn three_p1_shortcut(g: &Graph, p: &C5Partition, (i, [v, w, x]): (usize, [usize; 3])) -> Res {
    let what = "p1p2p3-3p1-shortcut";
    let empty = [&p.v[at(i, 2)], &p.v[at(i, 3)], &p.v[at(i, 4)], &p.w[i], &p.w[at(i, 1)], &p.w[at(i, 2)], &p.w[at(i, 4)]];
    if let Some(y) = empty.iter().find_map(|s| s.first()) {
        return Err(claim(what, [v, w, x, y], "a set that must be empty is not"));
    }
    let n = g.n();
    let sides = |s: &VertexSet, pair: [usize; 2]| -> Result<(VertexSet, VertexSet), PipelineError> {
        let ends = VertexSet::from_ids(n, pair);
        let anti = VertexSet::from_ids(n, s.iter().filter(|&y| g.is_anticomplete_to(y, &ends)));
        let comp = VertexSet::from_ids(n, s.iter().filter(|&y| g.is_complete_to(y, &ends)));
        match s.difference(&anti.union(&comp)).first() {
            Some(y) => Err(claim(what, [v, w, x, y], "vertex sees exactly one of the triple")),
            None => Ok((anti, comp)),
        }
    };
    let (v1a, v1c) = sides(&p.v[i], [w, x])?;
    let (v2a, v2c) = sides(&p.v[at(i, 1)], [v, x])?;
    let (w4a, w4c) = sides(&p.w[at(i, 3)], [v, w])?;
    let pairs = [(&v1a, &v2c), (&v1a, &w4c), (&v2a, &v1c), (&v2a, &w4c), (&w4a, &v1c), (&w4a, &v2c)];
    if let Some((s, t)) = pairs.iter().find(|(s, t)| !g.set_complete_to(s, t)) {
        let pick = s.iter().chain(t.iter()).take(2);
        return Err(claim(what, pick, "sets that must be complete are not"));
    }
    let on_cycle = VertexSet::from_ids(n, p.cycle);
    delete_then(g, &on_cycle, 5, |h, back| {
        let local: Vec<(VertexSet, VertexSet)> = pairs.iter().map(|(s, t)| (restrict(s, back), restrict(t, back))).collect();
        chain(h, bicomplement_steps(&local), |e| base(e, edgeless_expr(&(0..e.n()).collect::<Vec<_>>()), 1, what))
    })
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::pipelines::verify_certificate;

    #[test]
    fn petersen_partition() {
        let g = patterns::petersen();
        let emb = patterns::find_induced_embedding(&g, &patterns::cycle(5)).unwrap().unwrap();
        let p = partition_around_c5(&g, emb.clone().try_into().unwrap()).unwrap();
        assert!(p.u.is_empty());
        assert!(p.v.iter().all(VertexSet::is_empty));
        let covered: usize = p.w.iter().map(VertexSet::len).sum();
        assert_eq!(covered, 5);
        for (i, s) in p.w.iter().enumerate() {
            for x in s.iter() {
                assert_eq!(g.neighbours_in(x, &VertexSet::from_ids(10, emb.iter().copied())).to_vec(), vec![emb[i]]);
            }
        }
    }

    #[test]
    fn c5_and_isolated_vertex() {
        let c5 = patterns::cycle(5);
        let p = partition_around_c5(&c5, [0, 1, 2, 3, 4]).unwrap();
        assert!(p.outside_is_empty());
        let g = c5.disjoint_union(&Graph::empty(1));
        let p = partition_around_c5(&g, [0, 1, 2, 3, 4]).unwrap();
        assert_eq!(p.u.to_vec(), vec![5]);
        assert!(partition_around_c5(&g, [0, 2, 1, 3, 4]).is_err());
        let mut edges = c5.edges();
        edges.extend([(5, 0), (5, 1)]);
        let k3 = Graph::new(6, &edges).unwrap();
        assert!(matches!(partition_around_c5(&k3, [0, 1, 2, 3, 4]), Err(PipelineError::NotFree(_))));
    }

    #[test]
    fn c5_is_a_base() {
        let g = patterns::cycle(5);
        for case in TriangleFreeCase::ALL {
            let c = triangle_free_reduce(&g, case).unwrap();
            assert!(matches!(c.step, Step::Base { bound: 4, .. }));
            assert!(verify_certificate(&g, &c));
        }
    }

    #[test]
    fn petersen_is_not_p1p5_free() {
        let err = triangle_free_reduce(&patterns::petersen(), TriangleFreeCase::P1P5).unwrap_err();
        match err {
            PipelineError::NotFree(v) => {
                assert_eq!(v.pattern, "P1+P5");
                assert_eq!(v.embedding.len(), 6);
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn blown_up_c5() {
        let mut edges = Vec::new();
        for i in 0..5 {
            for a in 0..2 {
                for b in 0..2 {
                    edges.push((2 * i + a, 2 * ((i + 1) % 5) + b));
                }
            }
        }
        let g = Graph::new(10, &edges).unwrap();
        for case in TriangleFreeCase::ALL {
            let c = triangle_free_reduce(&g, case).unwrap();
            assert!(verify_certificate(&g, &c), "{}", case.name());
        }
    }
}
