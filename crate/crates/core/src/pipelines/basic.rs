use std::fmt;

use crate::decomp::{expression_from_tree, total_three_decompose, KPartition};
use crate::graph::{Graph, VertexSet};
use crate::kexpr::{KExpr, Label};
use crate::patterns::{self, Pattern};

/// Ordered triangles over a fixed 3-partition, with the blocks between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicStructure {
    pub v: [VertexSet; 3],
    /// `triangles[i][k]` lies in `v[k]`; listed in increasing order.
    pub triangles: Vec<[usize; 3]>,
    /// `w[i]` sits between `triangles[i]` and `triangles[i + 1]`.
    pub w: Vec<VertexSet>,
    /// Vertices with no neighbour in `triangles[i]`.
    pub u: Vec<VertexSet>,
    /// Position in `triangles[i]` of the vertex whose neighbourhood the `u[i]` vertices copy.
    pub anchor: Vec<Option<usize>>,
    pub script_u: VertexSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasicProperty {
    /// The graph is outside the class the recognizer accepts.
    Hypothesis,
    Partition,
    Order,
    WAssignment,
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
    VIII,
    IX,
    X,
    XI,
    Expression,
}

impl BasicProperty {
    pub fn name(self) -> &'static str {
        match self {
            BasicProperty::Hypothesis => "hypothesis",
            BasicProperty::Partition => "partition",
            BasicProperty::Order => "order",
            BasicProperty::WAssignment => "w-assignment",
            BasicProperty::I => "i",
            BasicProperty::II => "ii",
            BasicProperty::III => "iii",
            BasicProperty::IV => "iv",
            BasicProperty::V => "v",
            BasicProperty::VI => "vi",
            BasicProperty::VII => "vii",
            BasicProperty::VIII => "viii",
            BasicProperty::IX => "ix",
            BasicProperty::X => "x",
            BasicProperty::XI => "xi",
            BasicProperty::Expression => "expression",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicRejection {
    pub property: BasicProperty,
    pub witness: Vec<usize>,
}

impl fmt::Display for BasicRejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "property ({}) fails at {:?}", self.property.name(), self.witness)
    }
}

impl std::error::Error for BasicRejection {}

fn reject<T>(property: BasicProperty, witness: impl IntoIterator<Item = usize>) -> Result<T, BasicRejection> {
    Err(BasicRejection { property, witness: witness.into_iter().collect() })
}

pub(crate) fn triangles(g: &Graph) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in 0..g.n() {
        for b in g.neighbours(a).iter().filter(|&b| b > a) {
            for c in g.neighbours(a).intersection(g.neighbours(b)).iter().filter(|&c| c > b) {
                out.push([a, b, c]);
            }
        }
    }
    out
}

fn far_from(g: &Graph, t: &[usize; 3]) -> VertexSet {
    let mut near = VertexSet::from_ids(g.n(), *t);
    for &x in t {
        near.union_with(g.neighbours(x));
    }
    g.vertices().difference(&near)
}

fn succ(k: usize, l: usize) -> bool {
    (k + 1) % 3 == l
}

fn non_edge(g: &Graph, a: &VertexSet, b: &VertexSet) -> Option<[usize; 2]> {
    a.iter().find_map(|x| b.difference(g.neighbours(x)).iter().find(|&y| y != x).map(|y| [x, y]))
}

fn edge(g: &Graph, a: &VertexSet, b: &VertexSet) -> Option<[usize; 2]> {
    a.iter().find_map(|x| g.neighbours_in(x, b).first().map(|y| [x, y]))
}

impl BasicStructure {
    pub fn p(&self) -> usize {
        self.triangles.len()
    }

    fn tri(&self, n: usize, i: usize, k: usize) -> VertexSet {
        VertexSet::from_ids(n, [self.triangles[i][k]])
    }

    fn w_in(&self, i: usize, k: usize) -> VertexSet {
        self.w[i].intersection(&self.v[k])
    }
}

/// Checks every defining property of a basic graph against `b`, literally.
pub fn check_basic_properties(g: &Graph, b: &BasicStructure) -> Result<(), BasicRejection> {
    use BasicProperty as P;
    let n = g.n();
    let p = b.p();
    if p == 0 || b.w.len() != p || b.u.len() != p || b.anchor.len() != p {
        return reject(P::Partition, []);
    }
    let mut seen = b.script_u.clone();
    for k in 0..3 {
        if let Some(x) = b.v[k].intersection(&seen).first() {
            return reject(P::Partition, [x]);
        }
        seen.union_with(&b.v[k]);
    }
    if let Some(x) = g.vertices().difference(&seen).first() {
        return reject(P::Partition, [x]);
    }
    let mut blocks = VertexSet::new(n);
    for (t, w) in b.triangles.iter().zip(&b.w) {
        let t = VertexSet::from_ids(n, *t);
        for s in [&t, w] {
            if let Some(x) = s.intersection(&blocks).first() {
                return reject(P::Partition, [x]);
            }
            blocks.union_with(s);
        }
    }
    if blocks != g.vertices().difference(&b.script_u) {
        return reject(P::Partition, g.vertices().difference(&b.script_u).difference(&blocks).iter().take(1));
    }

    let all = triangles(g);
    let mut union_u = VertexSet::new(n);
    for s in &b.u {
        union_u.union_with(s);
    }
    if union_u != b.script_u {
        return reject(P::I, union_u.difference(&b.script_u).union(&b.script_u.difference(&union_u)).iter().take(1));
    }
    if let Some(t) = all.iter().find(|t| t.iter().any(|&x| b.script_u.contains(x))) {
        return reject(P::I, *t);
    }

    for i in 0..p {
        let t = b.triangles[i];
        if b.u[i] != far_from(g, &t) {
            return reject(P::II, t);
        }
        if let Some(e) = edge(g, &b.u[i], &b.u[i]) {
            return reject(P::II, e);
        }
        if b.u[i].is_empty() {
            continue;
        }
        let Some(k) = b.anchor[i].filter(|&k| k < 3) else {
            return reject(P::II, t);
        };
        let x = t[k];
        for u in b.u[i].iter() {
            let mut want = g.neighbours(u).clone();
            for &y in &t {
                if y != x {
                    want.insert(y);
                }
            }
            if g.neighbours(x) != &want {
                return reject(P::II, [x, u]);
            }
        }
    }

    for k in 0..3 {
        if let Some(e) = edge(g, &b.v[k], &b.v[k]) {
            return reject(P::III, e);
        }
    }

    let mut listed: Vec<[usize; 3]> = b.triangles.iter().map(|t| {
        let mut s = *t;
        s.sort_unstable();
        s
    }).collect();
    listed.sort_unstable();
    if listed != all {
        return reject(P::IV, all.iter().find(|t| !listed.contains(t)).copied().unwrap_or(b.triangles[0]));
    }
    for t in &b.triangles {
        if (0..3).any(|k| !b.v[k].contains(t[k])) {
            return reject(P::IV, *t);
        }
    }

    let forbidden = [Pattern::named("P1+2P2").expect("built-in pattern")];
    for w in &b.w {
        let (h, back) = g.induced_subgraph(w).expect("set in range");
        if let patterns::FreeVerdict::Contains(v) = patterns::is_free(&h, &forbidden) {
            return reject(P::V, v.embedding.iter().map(|&x| back[x]));
        }
        for a in w.intersection(&b.v[0]).iter() {
            for c in w.intersection(&b.v[1]).iter().filter(|&c| !g.has_edge(a, c)) {
                if let Some(d) = w.intersection(&b.v[2]).iter().find(|&d| !g.has_edge(a, d) && !g.has_edge(c, d)) {
                    return reject(P::V, [a, c, d]);
                }
            }
        }
    }

    let anti = |prop: P, x: &VertexSet, y: &VertexSet| match edge(g, x, y) {
        Some(e) => reject(prop, e),
        None => Ok(()),
    };
    let complete = |prop: P, x: &VertexSet, y: &VertexSet| match non_edge(g, x, y) {
        Some(e) => reject(prop, e),
        None => Ok(()),
    };
    for i in 0..p {
        for j in i..p {
            for k in 0..3 {
                for l in 0..3 {
                    let (ti, tj, wi, wj) = (b.tri(n, i, k), b.tri(n, j, l), b.w_in(i, k), b.w_in(j, l));
                    match (i == j, succ(k, l)) {
                        (false, false) => {
                            anti(P::VI, &ti, &tj)?;
                            anti(P::VI, &ti, &wj)?;
                            anti(P::VI, &wi, &tj)?;
                            anti(P::VI, &wi, &wj)?;
                        }
                        (false, true) => {
                            complete(P::VII, &ti, &tj)?;
                            complete(P::VII, &ti, &wj)?;
                            complete(P::VII, &wi, &tj)?;
                            if i + 1 < j {
                                complete(P::VIII, &wi, &wj)?;
                            } else if non_edge(g, &wi, &wj).is_some() {
                                anti(P::IX, &wi, &wj)?;
                            }
                        }
                        (true, true) => complete(P::X, &ti, &wj)?,
                        (true, false) => anti(P::XI, &ti, &wj)?,
                    }
                }
            }
        }
    }
    Ok(())
}

/// Which of two vertex-aligned triangles comes first, if their edges fit either pattern.
fn precedes(g: &Graph, x: &[usize; 3], y: &[usize; 3]) -> Option<bool> {
    let pattern = |shift: usize| (0..3).all(|k| (0..3).all(|l| g.has_edge(x[k], y[l]) == ((k + shift) % 3 == l)));
    if pattern(1) {
        Some(true)
    } else if pattern(2) {
        Some(false)
    } else {
        None
    }
}

/// Recovers the basic structure of `g`, or the first property that fails.
pub fn recognize_basic(g: &Graph) -> Result<BasicStructure, BasicRejection> {
    use BasicProperty as P;
    let n = g.n();
    let hyp = [Pattern::new("diamond", patterns::diamond()), Pattern::named("P1+2P2").expect("built-in"), Pattern::new("K4", patterns::complete(4))];
    if let patterns::FreeVerdict::Contains(v) = patterns::is_free(g, &hyp) {
        return reject(P::Hypothesis, v.embedding);
    }
    if !g.is_connected() {
        return reject(P::Hypothesis, []);
    }
    let all = triangles(g);
    let Some(&first) = all.first() else {
        return reject(P::Hypothesis, []);
    };
    let far: Vec<VertexSet> = all.iter().map(|t| far_from(g, t)).collect();
    let mut script_u = VertexSet::new(n);
    for s in &far {
        script_u.union_with(s);
    }
    if let Some(t) = all.iter().find(|t| t.iter().any(|&x| script_u.contains(x))) {
        return reject(P::I, *t);
    }
    let mut anchors = Vec::with_capacity(all.len());
    for (t, u) in all.iter().zip(&far) {
        if let Some(e) = edge(g, u, u) {
            return reject(P::II, e);
        }
        if u.is_empty() {
            anchors.push(None);
            continue;
        }
        let found = (0..3).find(|&k| {
            u.iter().all(|y| {
                let mut want = g.neighbours(y).clone();
                for &z in t {
                    if z != t[k] {
                        want.insert(z);
                    }
                }
                g.neighbours(t[k]) == &want
            })
        });
        match found {
            Some(k) => anchors.push(Some(k)),
            None => return reject(P::II, *t),
        }
    }

    let [v1, v2, v3] = first;
    let t1 = VertexSet::from_ids(n, first);
    let only = |c: usize| {
        VertexSet::from_ids(n, g.vertices().difference(&t1).iter().filter(|&x| g.neighbours_in(x, &t1).to_vec() == [c]))
    };
    let mut v: [VertexSet; 3] = [only(v1), only(v2), only(v3)];
    v[0].insert(v2);
    v[1].insert(v3);
    v[2].insert(v1);
    for s in v.iter_mut() {
        s.difference_with(&script_u);
    }
    let covered = v[0].union(&v[1]).union(&v[2]);
    if let Some(x) = g.vertices().difference(&script_u).difference(&covered).first() {
        return reject(P::Partition, [x]);
    }
    for part in &v {
        if let Some(e) = edge(g, part, part) {
            return reject(P::III, e);
        }
    }

    let mut aligned = Vec::with_capacity(all.len());
    for t in &all {
        let mut x = [usize::MAX; 3];
        for &y in t {
            if let Some(k) = (0..3).find(|&k| v[k].contains(y)) {
                x[k] = y;
            }
        }
        if x.contains(&usize::MAX) {
            return reject(P::IV, *t);
        }
        aligned.push(x);
    }
    let m = aligned.len();
    let mut rank = vec![0usize; m];
    for a in 0..m {
        for c in a + 1..m {
            match precedes(g, &aligned[a], &aligned[c]) {
                Some(true) => rank[c] += 1,
                Some(false) => rank[a] += 1,
                None => return reject(P::Order, aligned[a].iter().chain(&aligned[c]).copied()),
            }
        }
    }
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&a| rank[a]);
    if order.iter().enumerate().any(|(pos, &a)| rank[a] != pos) {
        let dup = order.windows(2).find(|w| rank[w[0]] == rank[w[1]]).map_or(order[0], |w| w[0]);
        return reject(P::Order, aligned[dup]);
    }
    let tris: Vec<[usize; 3]> = order.iter().map(|&a| aligned[a]).collect();

    let mut in_tri = VertexSet::new(n);
    for t in &tris {
        for &x in t {
            in_tri.insert(x);
        }
    }
    let mut w = vec![VertexSet::new(n); m];
    for x in g.vertices().difference(&script_u).difference(&in_tri).iter() {
        let k = (0..3).find(|&k| v[k].contains(x)).expect("covered");
        let mut before = Vec::new();
        for (j, t) in tris.iter().enumerate() {
            let hits: Vec<usize> = (0..3).filter(|&l| g.has_edge(x, t[l])).collect();
            match hits.as_slice() {
                [l] if *l == (k + 2) % 3 => before.push(j),
                [l] if *l == (k + 1) % 3 => {}
                _ => return reject(P::WAssignment, [x]),
            }
        }
        if before.is_empty() || before.iter().enumerate().any(|(pos, &j)| pos != j) {
            return reject(P::WAssignment, [x]);
        }
        w[before.len() - 1].insert(x);
    }

    let b = BasicStructure {
        v,
        triangles: tris,
        w,
        u: order.iter().map(|&a| far[a].clone()).collect(),
        anchor: order
            .iter()
            .map(|&a| anchors[a].map(|k| (0..3).find(|&l| aligned[a][l] == all[a][k]).expect("same triangle")))
            .collect(),
        script_u,
    };
    check_basic_properties(g, &b)?;
    Ok(b)
}

/// The nine-label construction: triangles and their copies first, then each block
/// between consecutive triangles, with the previous block held on labels 7 to 9.
pub fn basic_expression(g: &Graph, b: &BasicStructure) -> Result<KExpr, BasicRejection> {
    check_basic_properties(g, b)?;
    let n = g.n();
    let mut placed = VertexSet::new(n);
    let mut acc: Option<KExpr> = None;
    let mut prev_w: Option<usize> = None;
    for i in 0..b.p() {
        let [x1, x2, x3] = b.triangles[i];
        let mut t = KExpr::union(KExpr::union(KExpr::create(4, x1), KExpr::create(5, x2)), KExpr::create(6, x3));
        for (a, c) in [(4, 5), (5, 6), (4, 6)] {
            t = KExpr::join(a, c, t);
        }
        if let Some(k) = b.anchor[i] {
            for u in b.u[i].difference(&placed).iter() {
                t = KExpr::union(t, KExpr::create(4 + k as Label, u));
                placed.insert(u);
            }
        }
        let mut e = match acc.take() {
            Some(a) => KExpr::union(a, t),
            None => t,
        };
        for (a, c) in [(1, 5), (2, 6), (3, 4), (7, 5), (8, 6), (9, 4)] {
            e = KExpr::join(a, c, e);
        }
        for (from, to) in [(4, 1), (5, 2), (6, 3)] {
            e = KExpr::relabel(from, to, e);
        }
        if !b.w[i].is_empty() {
            e = KExpr::union(e, w_block(g, b, i)?);
            for (a, c) in [(1, 5), (2, 6), (3, 4)] {
                e = KExpr::join(a, c, e);
            }
            if let Some(pi) = prev_w {
                for k in 0..3 {
                    let cur = b.w_in(i, k);
                    let prev = b.w_in(pi, (k + 2) % 3);
                    if !cur.is_empty() && !prev.is_empty() && g.set_complete_to(&cur, &prev) {
                        e = KExpr::join(4 + k as Label, 7 + ((k + 2) % 3) as Label, e);
                    }
                }
            }
            for (from, to) in [(7, 1), (8, 2), (9, 3), (4, 7), (5, 8), (6, 9)] {
                e = KExpr::relabel(from, to, e);
            }
            prev_w = Some(i);
        } else if prev_w.take().is_some() {
            for (from, to) in [(7, 1), (8, 2), (9, 3)] {
                e = KExpr::relabel(from, to, e);
            }
        }
        acc = Some(e);
    }
    let e = acc.expect("at least one triangle");
    if !e.validate_against(g) || e.width() > 9 {
        return reject(BasicProperty::Expression, []);
    }
    Ok(e)
}

fn w_block(g: &Graph, b: &BasicStructure, i: usize) -> Result<KExpr, BasicRejection> {
    let (h, back) = g.induced_subgraph(&b.w[i]).expect("set in range");
    let parts: Vec<Vec<usize>> = (0..3).map(|k| (0..h.n()).filter(|&x| b.v[k].contains(back[x])).collect()).collect();
    let built = KPartition::new(&h, &parts).and_then(|p| total_three_decompose(&h, &p)).and_then(|t| expression_from_tree(&t, 3));
    match built {
        Ok(e) => Ok(e.map_labels(|l| l + 3).map_vertices(|x| back[x])),
        Err(_) => reject(BasicProperty::V, b.w[i].iter()),
    }
}

#[cfg(test)]
mod test {
    use super::*;

    /// Triangles `T^1 < ... < T^p` joined in the ordered pattern, nothing else.
    pub(crate) fn chain_of_triangles(p: usize) -> Graph {
        let mut edges = Vec::new();
        for i in 0..p {
            edges.extend([(3 * i, 3 * i + 1), (3 * i + 1, 3 * i + 2), (3 * i, 3 * i + 2)]);
            for j in i + 1..p {
                for k in 0..3 {
                    edges.push((3 * i + k, 3 * j + (k + 1) % 3));
                }
            }
        }
        Graph::new(3 * p, &edges).unwrap()
    }

    #[test]
    fn single_triangle() {
        let g = patterns::complete(3);
        let b = recognize_basic(&g).unwrap();
        assert_eq!(b.p(), 1);
        let e = basic_expression(&g, &b).unwrap();
        assert!(e.validate_against(&g));
        assert!(e.width() <= 9);
    }

    #[test]
    fn ordered_triangles() {
        for p in 2..5 {
            let g = chain_of_triangles(p);
            let b = recognize_basic(&g).unwrap();
            assert_eq!(b.p(), p);
            for x in 0..p {
                for y in 0..p {
                    if x != y {
                        assert_eq!(precedes(&g, &b.triangles[x], &b.triangles[y]), Some(x < y));
                    }
                }
            }
            let e = basic_expression(&g, &b).unwrap();
            assert!(e.width() <= 9);
        }
    }

    #[test]
    fn shared_vertex_rejected() {
        let g = Graph::new(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap();
        let err = recognize_basic(&g).unwrap_err();
        assert_ne!(err.property, BasicProperty::Expression);
    }

    #[test]
    fn copy_of_a_triangle_vertex() {
        let g = Graph::new(5, &[(0, 1), (1, 2), (0, 2), (0, 3), (3, 4)]).unwrap();
        let b = recognize_basic(&g).unwrap();
        assert_eq!(b.p(), 1);
        assert_eq!(b.u[0].to_vec(), vec![4]);
        assert_eq!(b.w[0].to_vec(), vec![3]);
        let e = basic_expression(&g, &b).unwrap();
        assert!(e.validate_against(&g));
    }

    #[test]
    fn net() {
        let mut edges = vec![(0, 1), (1, 2), (0, 2)];
        for k in 0..3 {
            edges.push((k, 3 + k));
        }
        let g = Graph::new(6, &edges).unwrap();
        let err = recognize_basic(&g).unwrap_err();
        assert_eq!(err, BasicRejection { property: BasicProperty::V, witness: vec![3, 4, 5] });
        let with_tail = Graph::new(7, &[edges.as_slice(), &[(3, 6)]].concat()).unwrap();
        assert_eq!(recognize_basic(&with_tail).unwrap_err().property, BasicProperty::Hypothesis);
    }
}
