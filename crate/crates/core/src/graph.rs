//! Simple undirected graphs on dense vertex ids with bitset adjacency rows.

use std::fmt;
use std::hash::Hasher;

use fixedbitset::FixedBitSet;
use fnv::FnvHasher;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {v} out of range for graph on {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex sets overlap at vertex {0}")]
    Overlap(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

/// A subset of the vertex ids of some host graph.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    bits: FixedBitSet,
}

impl VertexSet {
    pub fn new(n: usize) -> Self {
        VertexSet { bits: FixedBitSet::with_capacity(n) }
    }

    pub fn full(n: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        VertexSet { bits }
    }

    /// Panics if an id is `>= n`; use [`VertexSet::try_from_ids`] for untrusted input.
    pub fn from_ids<I: IntoIterator<Item = usize>>(n: usize, ids: I) -> Self {
        let mut s = VertexSet::new(n);
        for v in ids {
            s.insert(v);
        }
        s
    }

    pub fn try_from_ids<I: IntoIterator<Item = usize>>(n: usize, ids: I) -> Result<Self, GraphError> {
        let mut s = VertexSet::new(n);
        for v in ids {
            if v >= n {
                return Err(GraphError::VertexOutOfRange { v, n });
            }
            s.insert(v);
        }
        Ok(s)
    }

    pub fn capacity(&self) -> usize {
        self.bits.len()
    }

    pub fn insert(&mut self, v: usize) {
        self.bits.insert(v);
    }

    pub fn remove(&mut self, v: usize) {
        self.bits.set(v, false);
    }

    pub fn contains(&self, v: usize) -> bool {
        self.bits.contains(v)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<usize> {
        self.bits.minimum()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        VertexSet { bits }
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        VertexSet { bits }
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        VertexSet { bits }
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        self.bits.difference_with(&other.bits);
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn intersection_count(&self, other: &VertexSet) -> usize {
        self.bits.intersection_count(&other.bits)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TrivialityKind {
    Complete,
    AntiComplete,
    NonTrivial,
}

impl TrivialityKind {
    pub fn is_trivial(self) -> bool {
        self != TrivialityKind::NonTrivial
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Complementation<'a> {
    Subgraph(&'a VertexSet),
    Bipartite(&'a VertexSet, &'a VertexSet),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub kind: TrivialityKind,
    /// Kind of each vertex of `X` (ascending id order) towards `Y`.
    pub per_vertex: Vec<(usize, TrivialityKind)>,
    pub is_matching: bool,
    pub is_perfect_matching: bool,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<VertexSet>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange { v: u, n });
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange { v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub fn empty(n: usize) -> Graph {
        Graph { n, adj: vec![VertexSet::new(n); n] }
    }

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v);
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    pub(crate) fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u].remove(v);
        self.adj[v].remove(u);
    }

    fn toggle_edge(&mut self, u: usize, v: usize) {
        if self.has_edge(u, v) {
            self.remove_edge(u, v);
        } else {
            self.add_edge(u, v);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.adj.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn neighbours(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m());
        for u in 0..self.n {
            for v in self.adj[u].iter() {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn check_set(&self, s: &VertexSet) -> Result<(), GraphError> {
        if s.capacity() > self.n {
            if let Some(v) = s.iter().find(|&v| v >= self.n) {
                return Err(GraphError::VertexOutOfRange { v, n: self.n });
            }
        }
        Ok(())
    }

    /// Neighbourhood of `v` restricted to `s`.
    pub fn neighbours_in(&self, v: usize, s: &VertexSet) -> VertexSet {
        self.adj[v].intersection(s)
    }

    /// The subgraph induced by `s`; the second component maps new ids to old ids (ascending).
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<(Graph, Vec<usize>), GraphError> {
        self.check_set(s)?;
        let old: Vec<usize> = s.iter().collect();
        let mut new_of_old = vec![usize::MAX; self.n];
        for (i, &v) in old.iter().enumerate() {
            new_of_old[v] = i;
        }
        let mut g = Graph::empty(old.len());
        for (i, &v) in old.iter().enumerate() {
            for w in self.adj[v].iter() {
                let j = new_of_old.get(w).copied().unwrap_or(usize::MAX);
                if j != usize::MAX && i < j {
                    g.add_edge(i, j);
                }
            }
        }
        Ok((g, old))
    }

    /// Shorthand for the induced subgraph on everything outside `s`.
    pub fn delete_vertices(&self, s: &VertexSet) -> Result<(Graph, Vec<usize>), GraphError> {
        self.check_set(s)?;
        let keep = self.vertices().difference(s);
        self.induced_subgraph(&keep)
    }

    pub fn complement(&self) -> Graph {
        let all = self.vertices();
        self.apply_complementation(Complementation::Subgraph(&all)).expect("full set is valid")
    }

    pub fn apply_complementation(&self, mode: Complementation<'_>) -> Result<Graph, GraphError> {
        let mut g = self.clone();
        match mode {
            Complementation::Subgraph(s) => {
                self.check_set(s)?;
                let vs = s.to_vec();
                for (i, &u) in vs.iter().enumerate() {
                    for &v in &vs[i + 1..] {
                        g.toggle_edge(u, v);
                    }
                }
            }
            Complementation::Bipartite(s, t) => {
                self.check_set(s)?;
                self.check_set(t)?;
                if let Some(v) = s.intersection(t).first() {
                    return Err(GraphError::Overlap(v));
                }
                for u in s.iter() {
                    for v in t.iter() {
                        g.toggle_edge(u, v);
                    }
                }
            }
        }
        Ok(g)
    }

    /// How `v` relates to `x \ {v}`. The empty set counts as complete and anti-complete;
    /// this reports `AntiComplete` for it.
    pub fn triviality(&self, v: usize, x: &VertexSet) -> TrivialityKind {
        let mut others = x.clone();
        if v < others.capacity() {
            others.remove(v);
        }
        let total = others.len();
        let hits = self.adj[v].intersection_count(&others);
        if hits == 0 {
            TrivialityKind::AntiComplete
        } else if hits == total {
            TrivialityKind::Complete
        } else {
            TrivialityKind::NonTrivial
        }
    }

    pub fn is_complete_to(&self, v: usize, x: &VertexSet) -> bool {
        let mut others = x.clone();
        if v < others.capacity() {
            others.remove(v);
        }
        others.is_subset(&self.adj[v])
    }

    pub fn is_anticomplete_to(&self, v: usize, x: &VertexSet) -> bool {
        self.adj[v].is_disjoint(x)
    }

    pub fn set_complete_to(&self, x: &VertexSet, y: &VertexSet) -> bool {
        x.iter().all(|v| self.is_complete_to(v, y))
    }

    pub fn set_anticomplete_to(&self, x: &VertexSet, y: &VertexSet) -> bool {
        x.iter().all(|v| self.is_anticomplete_to(v, y))
    }

    /// Vertex `v` is trivial to `x` iff it is complete or anti-complete to it.
    pub fn is_trivial_to(&self, v: usize, x: &VertexSet) -> bool {
        self.triviality(v, x).is_trivial()
    }

    pub fn relation_between(&self, x: &VertexSet, y: &VertexSet) -> Result<Relation, GraphError> {
        self.check_set(x)?;
        self.check_set(y)?;
        if let Some(v) = x.intersection(y).first() {
            return Err(GraphError::Overlap(v));
        }
        let per_vertex: Vec<(usize, TrivialityKind)> = x.iter().map(|v| (v, self.triviality(v, y))).collect();
        let edges: usize = x.iter().map(|v| self.adj[v].intersection_count(y)).sum();
        let kind = if edges == 0 {
            TrivialityKind::AntiComplete
        } else if edges == x.len() * y.len() {
            TrivialityKind::Complete
        } else {
            TrivialityKind::NonTrivial
        };
        let is_matching = x.iter().all(|v| self.adj[v].intersection_count(y) <= 1)
            && y.iter().all(|v| self.adj[v].intersection_count(x) <= 1);
        let is_perfect_matching = x.len() == y.len()
            && x.iter().all(|v| self.adj[v].intersection_count(y) == 1)
            && y.iter().all(|v| self.adj[v].intersection_count(x) == 1);
        Ok(Relation { kind, per_vertex, is_matching, is_perfect_matching })
    }

    /// Classes of vertices with equal neighbourhoods, ordered by least member.
    pub fn false_twin_classes(&self) -> Vec<Vec<usize>> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut rep_of: Vec<usize> = Vec::new();
        for v in 0..self.n {
            match rep_of.iter().position(|&r| self.adj[r] == self.adj[v]) {
                Some(i) => classes[i].push(v),
                None => {
                    rep_of.push(v);
                    classes.push(vec![v]);
                }
            }
        }
        classes
    }

    /// Connected components, ordered by least member.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut seen = VertexSet::new(self.n);
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen.contains(s) {
                continue;
            }
            let comp = self.reach(s, &self.vertices());
            seen.union_with(&comp);
            out.push(comp);
        }
        out
    }

    /// Vertices reachable from `s` inside `within`.
    pub fn reach(&self, s: usize, within: &VertexSet) -> VertexSet {
        let mut comp = VertexSet::new(self.n);
        comp.insert(s);
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for w in self.adj[u].intersection(within).iter() {
                if !comp.contains(w) {
                    comp.insert(w);
                    stack.push(w);
                }
            }
        }
        comp
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.reach(0, &self.vertices()).len() == self.n
    }

    pub fn is_independent(&self, s: &VertexSet) -> bool {
        s.iter().all(|v| self.adj[v].is_disjoint(s))
    }

    pub fn is_clique(&self, s: &VertexSet) -> bool {
        s.iter().all(|v| self.is_complete_to(v, s))
    }

    /// A 2-colouring `side[v] in {0,1}` if one exists (each component's least vertex on side 0).
    pub fn bipartition(&self) -> Option<Vec<u8>> {
        let mut side = vec![u8::MAX; self.n];
        for s in 0..self.n {
            if side[s] != u8::MAX {
                continue;
            }
            side[s] = 0;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for w in self.adj[u].iter() {
                    if side[w] == u8::MAX {
                        side[w] = 1 - side[u];
                        stack.push(w);
                    } else if side[w] == side[u] {
                        return None;
                    }
                }
            }
        }
        Some(side)
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let n = self.n + other.n;
        let mut g = Graph::empty(n);
        for (u, v) in self.edges() {
            g.add_edge(u, v);
        }
        for (u, v) in other.edges() {
            g.add_edge(u + self.n, v + self.n);
        }
        g
    }

    /// Order-independent fingerprint of `(n, sorted edge list)` (FNV-1a).
    pub fn fingerprint(&self) -> u64 {
        let mut h = FnvHasher::default();
        h.write_u64(self.n as u64);
        for (u, v) in self.edges() {
            h.write_u64(u as u64);
            h.write_u64(v as u64);
        }
        h.finish()
    }

    /// Text format: first line `n m`, then one `u v` line per edge.
    pub fn to_text(&self) -> String {
        let edges = self.edges();
        let mut s = format!("{} {}\n", self.n, edges.len());
        for (u, v) in edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<Graph, GraphError> {
        let mut nums = Vec::new();
        for tok in text.split_whitespace() {
            let x: usize = tok.parse().map_err(|_| GraphError::Parse(format!("bad integer {tok:?}")))?;
            nums.push(x);
        }
        if nums.len() < 2 {
            return Err(GraphError::Parse("missing header `n m`".into()));
        }
        let (n, m) = (nums[0], nums[1]);
        if nums.len() != 2 + 2 * m {
            return Err(GraphError::Parse(format!("expected {m} edges, found {} numbers", nums.len() - 2)));
        }
        let edges: Vec<(usize, usize)> = nums[2..].chunks(2).map(|c| (c[0], c[1])).collect();
        Graph::new(n, &edges)
    }

    pub fn to_graph6(&self) -> String {
        let mut out = Vec::new();
        let n = self.n;
        if n < 63 {
            out.push(n as u8 + 63);
        } else if n < 258048 {
            out.push(126);
            for shift in [12, 6, 0] {
                out.push(((n >> shift) & 63) as u8 + 63);
            }
        } else {
            out.push(126);
            out.push(126);
            for shift in [30, 24, 18, 12, 6, 0] {
                out.push(((n >> shift) & 63) as u8 + 63);
            }
        }
        let mut acc = 0u8;
        let mut k = 0;
        for v in 1..n {
            for u in 0..v {
                acc = (acc << 1) | u8::from(self.has_edge(u, v));
                k += 1;
                if k == 6 {
                    out.push(acc + 63);
                    acc = 0;
                    k = 0;
                }
            }
        }
        if k > 0 {
            out.push((acc << (6 - k)) + 63);
        }
        String::from_utf8(out).expect("graph6 is ascii")
    }

    pub fn from_graph6(s: &str) -> Result<Graph, GraphError> {
        let s = s.trim();
        let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
        let bytes: Vec<u8> = s.bytes().collect();
        if bytes.is_empty() || bytes.iter().any(|&b| !(63..=126).contains(&b)) {
            return Err(GraphError::Parse("invalid graph6 string".into()));
        }
        let val = |b: u8| (b - 63) as usize;
        let (n, rest) = if bytes[0] != 126 {
            (val(bytes[0]), &bytes[1..])
        } else if bytes.len() >= 2 && bytes[1] != 126 {
            if bytes.len() < 4 {
                return Err(GraphError::Parse("truncated graph6 size".into()));
            }
            ((val(bytes[1]) << 12) | (val(bytes[2]) << 6) | val(bytes[3]), &bytes[4..])
        } else {
            if bytes.len() < 8 {
                return Err(GraphError::Parse("truncated graph6 size".into()));
            }
            let mut n = 0;
            for &b in &bytes[2..8] {
                n = (n << 6) | val(b);
            }
            (n, &bytes[8..])
        };
        let need = (n * n.saturating_sub(1) / 2).div_ceil(6);
        if rest.len() != need {
            return Err(GraphError::Parse(format!("graph6 body has {} bytes, expected {need}", rest.len())));
        }
        let mut g = Graph::empty(n);
        let mut idx = 0;
        for v in 1..n {
            for u in 0..v {
                let byte = val(rest[idx / 6]);
                if (byte >> (5 - idx % 6)) & 1 == 1 {
                    g.add_edge(u, v);
                }
                idx += 1;
            }
        }
        Ok(g)
    }
}

#[cfg(test)]
mod test {
    use super::*;
    use proptest::prelude::*;

    fn k3() -> Graph {
        Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    fn diamond() -> Graph {
        Graph::new(4, &[(0, 1), (1, 2), (2, 3), (0, 2), (1, 3)]).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &edges).unwrap()
    }

    fn set(n: usize, ids: &[usize]) -> VertexSet {
        VertexSet::from_ids(n, ids.iter().copied())
    }

    #[test]
    fn make_graph_examples() {
        let g = k3();
        assert_eq!((g.n(), g.m()), (3, 3));
        let d = diamond();
        assert_eq!(d.m(), 5);
        assert!(!d.has_edge(0, 3));
        assert_eq!(Graph::new(1, &[]).unwrap().m(), 0);
        let dup = Graph::new(2, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(dup.m(), 1);
        assert_eq!(Graph::new(2, &[(0, 2)]), Err(GraphError::VertexOutOfRange { v: 2, n: 2 }));
        assert_eq!(Graph::new(2, &[(1, 1)]), Err(GraphError::SelfLoop(1)));
    }

    #[test]
    fn induced_examples() {
        let d = diamond();
        let (h, map) = d.induced_subgraph(&set(4, &[0, 1, 2])).unwrap();
        assert_eq!(h.m(), 3);
        assert_eq!(map, vec![0, 1, 2]);
        let (h, _) = d.induced_subgraph(&set(4, &[0, 1, 3])).unwrap();
        assert_eq!(h.m(), 2);
        let (h, _) = d.induced_subgraph(&d.vertices()).unwrap();
        assert_eq!(h, d);
        let (p3, _) = cycle(7).induced_subgraph(&set(7, &[0, 1, 2])).unwrap();
        assert_eq!(p3.edges(), vec![(0, 1), (1, 2)]);
        assert!(d.induced_subgraph(&set(9, &[7])).is_err());
    }

    #[test]
    fn complementation_examples() {
        let g = k3();
        let all = g.vertices();
        assert_eq!(g.apply_complementation(Complementation::Subgraph(&all)).unwrap().m(), 0);
        // 2P1+P2 complemented is the diamond
        let g = Graph::new(4, &[(0, 3)]).unwrap();
        assert_eq!(g.complement(), diamond());
        let s = set(4, &[0]);
        let t = set(4, &[0, 1]);
        assert_eq!(g.apply_complementation(Complementation::Bipartite(&s, &t)), Err(GraphError::Overlap(0)));
    }

    #[test]
    fn relation_examples() {
        let k23 = Graph::new(5, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]).unwrap();
        let x = set(5, &[0, 1]);
        let y = set(5, &[2, 3, 4]);
        let r = k23.relation_between(&x, &y).unwrap();
        assert_eq!(r.kind, TrivialityKind::Complete);
        assert!(!r.is_matching);
        let e = Graph::empty(4);
        let r = e.relation_between(&set(4, &[0, 1]), &set(4, &[2, 3])).unwrap();
        assert_eq!(r.kind, TrivialityKind::AntiComplete);
        assert!(r.is_matching && !r.is_perfect_matching);
        let r = e.relation_between(&set(4, &[]), &set(4, &[])).unwrap();
        assert!(r.is_perfect_matching);
        let m = Graph::new(4, &[(0, 2), (1, 3)]).unwrap();
        let r = m.relation_between(&set(4, &[0, 1]), &set(4, &[2, 3])).unwrap();
        assert!(r.is_matching && r.is_perfect_matching);
        assert!(m.relation_between(&set(4, &[0, 1]), &set(4, &[1])).is_err());
    }

    #[test]
    fn twin_and_component_examples() {
        assert_eq!(Graph::empty(3).false_twin_classes(), vec![vec![0, 1, 2]]);
        assert_eq!(cycle(7).false_twin_classes().len(), 7);
        let mut edges: Vec<_> = (0..7).map(|i| (i, (i + 1) % 7)).collect();
        edges.push((7, 1));
        edges.push((7, 6));
        let g = Graph::new(8, &edges).unwrap();
        assert!(g.false_twin_classes().contains(&vec![0, 7]));
        let two_p2 = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        let comps = two_p2.components();
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.len() == 2));
        assert_eq!(k3().components().len(), 1);
        assert!(Graph::empty(0).components().is_empty());
    }

    #[test]
    fn text_and_graph6_roundtrip() {
        let d = diamond();
        assert_eq!(Graph::parse_text(&d.to_text()).unwrap(), d);
        // K3 and C5 in graph6 as printed by standard tools
        assert_eq!(k3().to_graph6(), "Bw");
        assert_eq!(cycle(5).to_graph6(), "Dhc");
        assert_eq!(Graph::from_graph6("Dhc").unwrap(), cycle(5));
        assert!(Graph::parse_text("2 1\n0 0\n").is_err());
        assert!(Graph::parse_text("2 2\n0 1\n").is_err());
        let big = Graph::empty(70);
        assert_eq!(Graph::from_graph6(&big.to_graph6()).unwrap(), big);
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (0..=max_n).prop_flat_map(|n| {
            let pairs = n * n.saturating_sub(1) / 2;
            proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
                let mut g = Graph::empty(n);
                let mut k = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        if bits[k] {
                            g.add_edge(u, v);
                        }
                        k += 1;
                    }
                }
                g
            })
        })
    }

    proptest! {
        #[test]
        fn complementation_is_involution(g in arb_graph(9), mask in any::<u32>()) {
            let n = g.n();
            let s = VertexSet::from_ids(n, (0..n).filter(|i| mask >> i & 1 == 1));
            let t = VertexSet::from_ids(n, (0..n).filter(|i| mask >> (i + 10) & 1 == 1 && mask >> i & 1 == 0));
            let once = g.apply_complementation(Complementation::Subgraph(&s)).unwrap();
            prop_assert_eq!(&once.apply_complementation(Complementation::Subgraph(&s)).unwrap(), &g);
            let once = g.apply_complementation(Complementation::Bipartite(&s, &t)).unwrap();
            prop_assert_eq!(&once.apply_complementation(Complementation::Bipartite(&s, &t)).unwrap(), &g);
            // pairs outside the toggled region are unchanged
            for (u, v) in (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))) {
                let crosses = (s.contains(u) && t.contains(v)) || (s.contains(v) && t.contains(u));
                prop_assert_eq!(once.has_edge(u, v) != g.has_edge(u, v), crosses);
            }
        }

        #[test]
        fn complete_relation_implies_complete_vertices(g in arb_graph(9), mask in any::<u32>()) {
            let n = g.n();
            let x = VertexSet::from_ids(n, (0..n).filter(|i| mask >> i & 1 == 1));
            let y = g.vertices().difference(&x);
            let r = g.relation_between(&x, &y).unwrap();
            if r.kind == TrivialityKind::Complete {
                prop_assert!(r.per_vertex.iter().all(|&(_, k)| k == TrivialityKind::Complete));
            }
        }

        #[test]
        fn twin_classes_refine_components(g in arb_graph(9)) {
            let comps = g.components();
            let comp_of = |v: usize| comps.iter().position(|c| c.contains(v)).unwrap();
            for class in g.false_twin_classes() {
                let isolated = class.iter().all(|&v| g.degree(v) == 0);
                if !isolated {
                    prop_assert!(class.iter().all(|&v| comp_of(v) == comp_of(class[0])));
                }
                for (i, &u) in class.iter().enumerate() {
                    for &v in &class[i + 1..] {
                        prop_assert!(!g.has_edge(u, v));
                    }
                }
            }
        }

        #[test]
        fn induced_subgraph_composes(g in arb_graph(9), m1 in any::<u16>(), m2 in any::<u16>()) {
            let n = g.n();
            let s = VertexSet::from_ids(n, (0..n).filter(|i| m1 >> i & 1 == 1));
            let s2 = VertexSet::from_ids(n, s.iter().filter(|i| m2 >> i & 1 == 1));
            let (h, map) = g.induced_subgraph(&s).unwrap();
            let local = VertexSet::from_ids(h.n(), (0..h.n()).filter(|&i| s2.contains(map[i])));
            let (h2, _) = h.induced_subgraph(&local).unwrap();
            let (direct, _) = g.induced_subgraph(&s2).unwrap();
            prop_assert_eq!(h2, direct);
        }

        #[test]
        fn graph6_roundtrip(g in arb_graph(12)) {
            prop_assert_eq!(Graph::from_graph6(&g.to_graph6()).unwrap(), g.clone());
            prop_assert_eq!(Graph::parse_text(&g.to_text()).unwrap(), g);
        }
    }
}
