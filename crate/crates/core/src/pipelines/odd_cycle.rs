use std::collections::VecDeque;

use super::certificate::{BoundSource, Certificate, Step};
use super::steps::{base, named, require_free, split, then, Res};
use super::{claim, PipelineError};
use crate::graph::{Graph, VertexSet};
use crate::kexpr::expr_for_max_degree_2;

/// A shortest odd cycle, in cyclic order starting from its root, or `None` if `g` is
/// bipartite. Ties go to the least root, then the least closing edge.
pub fn minimum_odd_induced_cycle(g: &Graph) -> Option<Vec<usize>> {
    let n = g.n();
    let edges = g.edges();
    let mut best: Option<(usize, Vec<Option<usize>>, usize, usize)> = None;
    for r in 0..n {
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![None; n];
        dist[r] = 0;
        let mut queue = VecDeque::from([r]);
        while let Some(u) = queue.pop_front() {
            for w in g.neighbours(u).iter() {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = Some(u);
                    queue.push_back(w);
                }
            }
        }
        let found = edges
            .iter()
            .filter(|&&(u, v)| dist[u] != usize::MAX && dist[u] == dist[v])
            .min_by_key(|&&(u, _)| dist[u]);
        if let Some(&(u, v)) = found {
            let len = 2 * dist[u] + 1;
            if best.as_ref().is_none_or(|b| len < b.0) {
                best = Some((len, parent, u, v));
            }
        }
    }
    let (_, parent, u, v) = best?;
    let climb = |mut x: usize| {
        let mut out = vec![x];
        while let Some(p) = parent[x] {
            out.push(p);
            x = p;
        }
        out
    };
    let mut cycle = climb(u);
    cycle.reverse();
    let mut down = climb(v);
    down.pop();
    cycle.extend(down);
    Some(cycle)
}

/// Certificate for a `(K3, C5, S123)`-free graph.
pub fn reduce_k3_c5_s123(g: &Graph) -> Result<Certificate, PipelineError> {
    require_free(g, &named(&["K3", "C5", "S123"]))?;
    reduce(g)
}

fn reduce(g: &Graph) -> Res {
    if g.n() == 0 {
        return Err(PipelineError::EmptyGraph);
    }
    if !g.is_connected() {
        return split(g, &g.components(), |h, _| reduce(h));
    }
    let Some(cycle) = minimum_odd_induced_cycle(g) else {
        return Ok(Certificate::leaf(g, Step::CiteBound { source: BoundSource::S123FreeBipartite, bound: Some(5) }));
    };
    let k = cycle.len();
    if k < 7 {
        return Err(claim("odd-cycle-length", cycle, "shortest odd cycle has fewer than 7 vertices"));
    }
    let on_cycle = VertexSet::from_ids(g.n(), cycle.iter().copied());
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); k];
    for x in g.vertices().difference(&on_cycle).iter() {
        let hits: Vec<usize> = (0..k).filter(|&i| g.has_edge(x, cycle[i])).collect();
        let i = match hits.as_slice() {
            [] => return Err(claim("odd-cycle-u-empty", [x], "vertex with no neighbour on the cycle")),
            &[a, b] if b - a == 2 => a + 1,
            &[0, b] if b == k - 2 => k - 1,
            &[1, b] if b == k - 1 => 0,
            _ => return Err(claim("odd-cycle-two-neighbours", [x], "vertex not adjacent to exactly v_(i-1) and v_(i+1)")),
        };
        if g.neighbours(x) != g.neighbours(cycle[i]) {
            return Err(claim("odd-cycle-false-twin", [x, cycle[i]], "vertex is not a false twin of its cycle vertex"));
        }
        classes[i].push(x);
    }
    let twin_classes: Vec<Vec<usize>> = (0..k)
        .filter(|&i| !classes[i].is_empty())
        .map(|i| {
            let mut c = classes[i].clone();
            c.push(cycle[i]);
            c.sort_unstable();
            c
        })
        .collect();
    let leaf = |h: &Graph| base(h, expr_for_max_degree_2(h).ok(), 4, "odd-cycle-base");
    if twin_classes.is_empty() {
        leaf(g)
    } else {
        then(g, Step::RemoveFalseTwins { classes: twin_classes }, leaf)
    }
}
