use std::fmt;

use super::certificate::{BoundSource, Certificate, Step};
use super::steps::{named, require_free, separate, Res};
use super::{claim, PipelineError};
use crate::decomp::{expression_from_tree, total_three_decompose, KPartition};
use crate::graph::{Graph, VertexSet};
use crate::patterns;

/// Ten independent sets `V_1..V_5`, `W_1..W_5`; index arithmetic is mod 5.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TenSetPartition {
    pub v: [VertexSet; 5],
    pub w: [VertexSet; 5],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TenSetCondition {
    Partition,
    Independent,
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
}

impl TenSetCondition {
    pub fn name(self) -> &'static str {
        match self {
            TenSetCondition::Partition => "partition",
            TenSetCondition::Independent => "independent",
            TenSetCondition::I => "i",
            TenSetCondition::II => "ii",
            TenSetCondition::III => "iii",
            TenSetCondition::IV => "iv",
            TenSetCondition::V => "v",
            TenSetCondition::VI => "vi",
            TenSetCondition::VII => "vii",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TenSetViolation {
    pub condition: TenSetCondition,
    pub witness: Vec<usize>,
}

impl fmt::Display for TenSetViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "condition ({}) fails at {:?}", self.condition.name(), self.witness)
    }
}

fn at(i: usize, d: usize) -> usize {
    (i + d) % 5
}

impl TenSetPartition {
    /// Class `c < 5` puts a vertex in `v[c]`, class `5 + i` in `w[i]`.
    pub fn from_classes(n: usize, class: &[usize]) -> TenSetPartition {
        let sets: Vec<VertexSet> = (0..10).map(|c| VertexSet::from_ids(n, (0..n).filter(|&x| class[x] == c))).collect();
        TenSetPartition {
            v: std::array::from_fn(|i| sets[i].clone()),
            w: std::array::from_fn(|i| sets[5 + i].clone()),
        }
    }

    pub fn sets(&self) -> impl Iterator<Item = &VertexSet> {
        self.v.iter().chain(self.w.iter())
    }

    /// Class index per vertex, or the first vertex covered twice or not at all.
    pub fn classes(&self, n: usize) -> Result<Vec<usize>, usize> {
        let mut class = vec![usize::MAX; n];
        for (c, s) in self.sets().enumerate() {
            for x in s.iter() {
                if x >= n || class[x] != usize::MAX {
                    return Err(x);
                }
                class[x] = c;
            }
        }
        match class.iter().position(|&c| c == usize::MAX) {
            Some(x) => Err(x),
            None => Ok(class),
        }
    }
}

fn fail(condition: TenSetCondition, witness: impl IntoIterator<Item = usize>) -> Result<(), TenSetViolation> {
    Err(TenSetViolation { condition, witness: witness.into_iter().collect() })
}

fn find_edge(g: &Graph, a: &VertexSet, b: &VertexSet) -> Option<(usize, usize)> {
    a.iter().find_map(|x| g.neighbours_in(x, b).first().map(|y| (x, y)))
}

fn find_non_edge(g: &Graph, a: &VertexSet, b: &VertexSet) -> Option<(usize, usize)> {
    a.iter().find_map(|x| b.difference(g.neighbours(x)).iter().find(|&y| y != x).map(|y| (x, y)))
}

fn p7_in(g: &Graph, s: &VertexSet) -> Option<Vec<usize>> {
    let (h, back) = g.induced_subgraph(s).expect("set within range");
    patterns::find_induced_embedding(&h, &patterns::path(7))
        .expect("pattern within cap")
        .map(|e| e.into_iter().map(|x| back[x]).collect())
}

/// Evaluates the seven conditions literally, reporting the first that fails.
pub fn check_ten_set_conditions(g: &Graph, p: &TenSetPartition) -> Result<(), TenSetViolation> {
    use TenSetCondition as C;
    if let Err(x) = p.classes(g.n()) {
        return fail(C::Partition, [x]);
    }
    for s in p.sets() {
        if let Some((x, y)) = find_edge(g, s, s) {
            return fail(C::Independent, [x, y]);
        }
    }
    let (v, w) = (&p.v, &p.w);
    for i in 0..5 {
        for other in [&v[at(i, 3)], &v[at(i, 2)], &w[at(i, 4)], &w[at(i, 1)]] {
            if let Some((x, y)) = find_edge(g, &v[i], other) {
                return fail(C::I, [x, y]);
            }
        }
    }
    for i in 0..5 {
        for other in [&w[at(i, 4)], &w[at(i, 1)]] {
            if let Some((x, y)) = find_non_edge(g, &w[i], other) {
                return fail(C::II, [x, y]);
            }
        }
    }
    for i in 0..5 {
        if let Some(x) = v[i].iter().find(|&x| !g.is_trivial_to(x, &v[at(i, 1)]) && !g.is_trivial_to(x, &v[at(i, 4)])) {
            return fail(C::III, [x]);
        }
    }
    for i in 0..5 {
        if let Some(x) = v[i].iter().find(|&x| !g.is_trivial_to(x, &w[i])) {
            return fail(C::IV, [x]);
        }
    }
    for i in 0..5 {
        for other in [&w[at(i, 3)], &w[at(i, 2)]] {
            if let Some(x) = w[i].iter().find(|&x| !g.is_trivial_to(x, other)) {
                return fail(C::V, [x]);
            }
        }
    }
    for i in 0..5 {
        for j in 0..5 {
            for s in [v[i].union(&v[j]), v[i].union(&w[j])] {
                if let Some(e) = p7_in(g, &s) {
                    return fail(C::VI, e);
                }
            }
        }
    }
    for i in 0..5 {
        for a in v[i].iter() {
            for b in v[at(i, 1)].iter().filter(|&b| !g.has_edge(a, b)) {
                if let Some(c) = w[at(i, 3)].iter().find(|&c| !g.has_edge(a, c) && !g.has_edge(b, c)) {
                    return fail(C::VII, [a, b, c]);
                }
            }
        }
    }
    Ok(())
}

/// Separates the graph piece by piece: first the three-part pieces, each with an
/// explicit expression of width at most 6, then `S123`-free bipartite pieces.
pub fn ten_set_reduce(g: &Graph, p: &TenSetPartition) -> Result<Certificate, PipelineError> {
    check_ten_set_conditions(g, p).map_err(|e| PipelineError::Precondition(e.to_string()))?;
    require_free(g, &named(&["K3", "S123"]))?;
    let class = p.classes(g.n()).expect("checked partition");
    reduce_checked(g, &class)
}

pub(crate) fn reduce_checked(g: &Graph, class: &[usize]) -> Res {
    if g.n() == 0 {
        return Err(PipelineError::EmptyGraph);
    }
    phase_one(g, class)
}

fn pull(class: &[usize], back: &[usize]) -> Vec<usize> {
    back.iter().map(|&x| class[x]).collect()
}

fn non_trivial_to_both(g: &Graph, s: &VertexSet, a: &VertexSet, b: &VertexSet) -> VertexSet {
    VertexSet::from_ids(g.n(), s.iter().filter(|&x| !g.is_trivial_to(x, a) && !g.is_trivial_to(x, b)))
}

struct Primed {
    v1: [VertexSet; 5],
    v2: [VertexSet; 5],
    w1: [VertexSet; 5],
}

fn primed(g: &Graph, p: &TenSetPartition) -> Primed {
    let (v, w) = (&p.v, &p.w);
    Primed {
        v1: std::array::from_fn(|i| non_trivial_to_both(g, &v[i], &v[at(i, 1)], &w[at(i, 3)])),
        v2: std::array::from_fn(|i| non_trivial_to_both(g, &v[i], &v[at(i, 4)], &w[at(i, 2)])),
        w1: std::array::from_fn(|i| non_trivial_to_both(g, &w[i], &v[at(i, 3)], &v[at(i, 2)])),
    }
}

/// Every edge leaving `piece` must have an end in some set of `family` that the other end relates to by `ok`.
fn check_crossing(
    g: &Graph,
    piece: &VertexSet,
    family: &[VertexSet],
    ok: impl Fn(usize, &VertexSet) -> bool,
    what: &'static str,
) -> Result<(), PipelineError> {
    for a in piece.iter() {
        for b in g.neighbours(a).difference(piece).iter() {
            let covered = family.iter().any(|x| (x.contains(a) && ok(b, x)) || (x.contains(b) && ok(a, x)));
            if !covered {
                return Err(claim(what, [a, b], "edge leaving the piece is not removable"));
            }
        }
    }
    Ok(())
}

fn phase_one(g: &Graph, class: &[usize]) -> Res {
    let p = TenSetPartition::from_classes(g.n(), class);
    let pr = primed(g, &p);
    for i in 0..5 {
        let parts = [pr.v1[i].clone(), pr.v2[at(i, 1)].clone(), pr.w1[at(i, 3)].clone()];
        let piece = parts[0].union(&parts[1]).union(&parts[2]);
        if piece.is_empty() {
            continue;
        }
        let family: Vec<VertexSet> = (0..5)
            .flat_map(|j| [p.v[j].clone(), pr.v1[j].clone(), pr.v2[j].clone(), p.w[j].clone(), pr.w1[j].clone()])
            .collect();
        check_crossing(g, &piece, &family, |x, s| g.is_complete_to(x, s), "ten-set-irrelevant-edges")?;
        return separate(
            g,
            &piece,
            |h, back| three_part_base(h, back, &parts),
            |h, back| phase_one(h, &pull(class, back)),
        );
    }
    phase_two(g, class)
}

fn three_part_base(h: &Graph, back: &[usize], parts: &[VertexSet; 3]) -> Res {
    let local: Vec<Vec<usize>> =
        parts.iter().map(|s| (0..back.len()).filter(|&x| s.contains(back[x])).collect()).collect();
    let built = KPartition::new(h, &local)
        .and_then(|kp| total_three_decompose(h, &kp))
        .and_then(|t| expression_from_tree(&t, 3));
    match built {
        Ok(e) if e.validate_against(h) => Ok(Certificate::leaf(h, Step::Base { expr: e, bound: 6 })),
        Ok(_) => Err(claim("ten-set-three-part-piece", back.iter().copied(), "expression does not rebuild the piece")),
        Err(err) => Err(claim("ten-set-three-part-piece", back.iter().copied(), err.to_string())),
    }
}

fn phase_two(g: &Graph, class: &[usize]) -> Res {
    let p = TenSetPartition::from_classes(g.n(), class);
    let (v, w) = (&p.v, &p.w);
    let v_star: [VertexSet; 5] = std::array::from_fn(|i| {
        VertexSet::from_ids(g.n(), v[i].iter().filter(|&x| !g.is_trivial_to(x, &v[at(i, 1)]) || !g.is_trivial_to(x, &w[at(i, 2)])))
    });
    let w_star: [VertexSet; 5] =
        std::array::from_fn(|i| VertexSet::from_ids(g.n(), w[i].iter().filter(|&x| !g.is_trivial_to(x, &v[at(i, 2)]))));
    let v_rest: [VertexSet; 5] = std::array::from_fn(|i| v[i].difference(&v_star[i]));
    let w_rest: [VertexSet; 5] = std::array::from_fn(|i| w[i].difference(&w_star[i]));
    for i in 0..5 {
        let piece = w_star[i].union(&v_rest[at(i, 2)]).union(&v_star[at(i, 1)]).union(&w_rest[at(i, 3)]);
        if piece.is_empty() {
            continue;
        }
        let family: Vec<VertexSet> =
            (0..5).flat_map(|j| [v_star[j].clone(), v_rest[j].clone(), w_star[j].clone(), w_rest[j].clone()]).collect();
        check_crossing(g, &piece, &family, |x, s| g.is_trivial_to(x, s), "ten-set-insignificant-edges")?;
        return separate(
            g,
            &piece,
            |h, back| {
                let source = BoundSource::S123FreeBipartite;
                if !source.admits(h) {
                    return Err(claim("ten-set-bipartite-piece", back.iter().copied(), "piece is not S123-free bipartite"));
                }
                Ok(Certificate::leaf(h, Step::CiteBound { source, bound: Some(5) }))
            },
            |h, back| phase_two(h, &pull(class, back)),
        );
    }
    Err(claim("ten-set-pieces-cover", [], "the bipartite pieces do not cover the graph"))
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::pipelines::verify_certificate;

    fn blow_up(sizes_v: [usize; 5], sizes_w: [usize; 5]) -> (Graph, Vec<usize>) {
        let mut class = Vec::new();
        for (c, &k) in sizes_v.iter().chain(sizes_w.iter()).enumerate() {
            class.extend(std::iter::repeat_n(c, k));
        }
        let n = class.len();
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let (x, y) = (class[a], class[b]);
                if x >= 5 && y >= 5 && ((x + 1 - 5) % 5 == y - 5 || (y + 1 - 5) % 5 == x - 5) {
                    edges.push((a, b));
                }
            }
        }
        (Graph::new(n, &edges).unwrap(), class)
    }

    #[test]
    fn c5_blow_up_of_w_sets() {
        let (g, class) = blow_up([1, 0, 2, 0, 0], [2, 2, 1, 2, 2]);
        let p = TenSetPartition::from_classes(g.n(), &class);
        check_ten_set_conditions(&g, &p).unwrap();
        let c = ten_set_reduce(&g, &p).unwrap();
        assert!(verify_certificate(&g, &c));
        assert!(c.base_widths().iter().all(|&w| w <= 6));
    }

    #[test]
    fn reports_conditions() {
        let (g, class) = blow_up([0; 5], [1, 1, 0, 0, 0]);
        let mut p = TenSetPartition::from_classes(g.n(), &class);
        p.v[0].insert(0);
        assert_eq!(check_ten_set_conditions(&g, &p).unwrap_err().condition, TenSetCondition::Partition);
        let p = TenSetPartition::from_classes(g.n(), &[0, 0]);
        assert_eq!(check_ten_set_conditions(&g, &p).unwrap_err().condition, TenSetCondition::Independent);
        let g2 = Graph::empty(2);
        let p = TenSetPartition::from_classes(2, &[5, 6]);
        let err = check_ten_set_conditions(&g2, &p).unwrap_err();
        assert_eq!(err, TenSetViolation { condition: TenSetCondition::II, witness: vec![0, 1] });
    }

    #[test]
    fn edgeless_is_one_bipartite_piece() {
        let g = Graph::empty(4);
        let p = TenSetPartition::from_classes(4, &[0, 1, 2, 3]);
        let c = ten_set_reduce(&g, &p).unwrap();
        assert!(verify_certificate(&g, &c));
        assert!(c.nodes().iter().all(|n| !matches!(n.step, Step::Base { .. })));
    }
}
