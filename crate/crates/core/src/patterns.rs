//! Named forbidden graphs, induced-subgraph search and the structural class tests.

use thiserror::Error;

use crate::graph::{Graph, VertexSet};

pub const DEFAULT_PATTERN_CAP: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("pattern has {size} vertices, cap is {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("unknown pattern name {0:?}")]
    UnknownName(String),
}

/// A graph with a display name, e.g. `P1+2P2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    pub name: String,
    pub graph: Graph,
}

impl Pattern {
    pub fn new(name: impl Into<String>, graph: Graph) -> Self {
        Pattern { name: name.into(), graph }
    }

    /// Parse a pattern name; see [`parse_pattern`].
    pub fn named(name: &str) -> Result<Pattern, PatternError> {
        Ok(Pattern::new(name, parse_pattern(name)?))
    }
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::new(n, &edges).expect("valid path")
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycles need at least three vertices");
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::new(n, &edges).expect("valid cycle")
}

pub fn complete(n: usize) -> Graph {
    Graph::complete(n)
}

/// `sP1`, the edgeless graph on `s` vertices.
pub fn edgeless(s: usize) -> Graph {
    Graph::empty(s)
}

pub fn biclique(r: usize, s: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..r {
        for v in r..r + s {
            edges.push((u, v));
        }
    }
    Graph::new(r + s, &edges).expect("valid biclique")
}

pub fn claw() -> Graph {
    biclique(1, 3)
}

/// The subdivided claw with legs of `h`, `i` and `j` edges; vertex 0 is the centre.
pub fn subdivided_claw(h: usize, i: usize, j: usize) -> Graph {
    let n = 1 + h + i + j;
    let mut edges = Vec::new();
    let mut next = 1;
    for len in [h, i, j] {
        let mut prev = 0;
        for _ in 0..len {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
    }
    Graph::new(n, &edges).expect("valid subdivided claw")
}

/// K4 minus an edge.
pub fn diamond() -> Graph {
    Graph::new(4, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).expect("valid diamond")
}

pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::new(10, &edges).expect("valid petersen")
}

pub fn disjoint_sum(parts: &[Graph]) -> Graph {
    parts.iter().fold(Graph::empty(0), |acc, g| acc.disjoint_union(g))
}

/// Parse a pattern name.
///
/// Grammar: `[co-]term(+term)*`, optionally `co-(...)`, where a term is an optional multiplicity followed by
/// `P<n>`, `C<n>`, `K<n>`, `K<r>,<s>`, `S<h><i><j>`, `diamond`, `claw`, `petersen`,
/// or the long forms `sP1:<s>`, `K:<t>`, `P:<n>`, `C:<n>`.
pub fn parse_pattern(name: &str) -> Result<Graph, PatternError> {
    let err = || PatternError::UnknownName(name.to_string());
    let trimmed = name.trim();
    if let Some(rest) = trimmed.strip_prefix("co-") {
        let rest = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(rest);
        return Ok(parse_pattern(rest).map_err(|_| err())?.complement());
    }
    let mut parts = Vec::new();
    for term in trimmed.split('+') {
        let term = term.trim();
        if term.is_empty() {
            return Err(err());
        }
        let digits = term.chars().take_while(|c| c.is_ascii_digit()).count();
        let (mult, base) = if digits > 0 && digits < term.len() && !term[digits..].starts_with(':') {
            (term[..digits].parse::<usize>().map_err(|_| err())?, &term[digits..])
        } else {
            (1, term)
        };
        let g = parse_base(base).ok_or_else(err)?;
        for _ in 0..mult {
            parts.push(g.clone());
        }
    }
    Ok(disjoint_sum(&parts))
}

fn parse_base(base: &str) -> Option<Graph> {
    match base {
        "diamond" => return Some(diamond()),
        "claw" => return Some(claw()),
        "petersen" => return Some(petersen()),
        _ => {}
    }
    if let Some(s) = base.strip_prefix("sP1:") {
        return s.parse().ok().map(edgeless);
    }
    let (head, tail) = base.split_at(base.chars().next()?.len_utf8());
    let tail = tail.strip_prefix(':').unwrap_or(tail);
    match head {
        "P" => tail.parse().ok().filter(|&n| n >= 1).map(path),
        "C" => tail.parse().ok().filter(|&n| n >= 3).map(cycle),
        "K" => match tail.split_once(',') {
            Some((r, s)) => Some(biclique(r.parse().ok()?, s.parse().ok()?)),
            None => tail.parse().ok().map(complete),
        },
        "S" if tail.len() == 3 && tail.chars().all(|c| c.is_ascii_digit()) => {
            let d: Vec<usize> = tail.chars().map(|c| c.to_digit(10).unwrap() as usize).collect();
            Some(subdivided_claw(d[0], d[1], d[2]))
        }
        _ => None,
    }
}

/// Search state shared by the ordered backtracking searches.
struct Search<'a> {
    g: &'a Graph,
    h: &'a Graph,
    order: Vec<usize>,
    map: Vec<usize>,
    used: VertexSet,
}

impl Search<'_> {
    fn run(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let hv = self.order[depth];
        let mut cand = self.g.vertices().difference(&self.used);
        for &hu in &self.order[..depth] {
            let gu = self.map[hu];
            if self.h.has_edge(hu, hv) {
                cand.intersect_with(self.g.neighbours(gu));
            } else {
                cand.difference_with(self.g.neighbours(gu));
            }
        }
        let need = self.h.degree(hv);
        for gv in cand.iter() {
            if self.g.degree(gv) < need {
                continue;
            }
            self.map[hv] = gv;
            self.used.insert(gv);
            if self.run(depth + 1) {
                return true;
            }
            self.used.remove(gv);
        }
        false
    }
}

fn search(g: &Graph, h: &Graph, order: Vec<usize>) -> Option<Vec<usize>> {
    if h.n() > g.n() {
        return None;
    }
    let mut s = Search { g, h, order, map: vec![usize::MAX; h.n()], used: VertexSet::new(g.n()) };
    if s.run(0) {
        Some(s.map)
    } else {
        None
    }
}

/// Order that keeps each pattern vertex adjacent to an earlier one where possible,
/// starting each component from its highest-degree vertex.
fn pruning_order(h: &Graph) -> Vec<usize> {
    let mut order = Vec::with_capacity(h.n());
    let mut placed = VertexSet::new(h.n());
    while order.len() < h.n() {
        let start = (0..h.n()).filter(|&v| !placed.contains(v)).max_by_key(|&v| (h.degree(v), usize::MAX - v)).unwrap();
        placed.insert(start);
        order.push(start);
        loop {
            let next = (0..h.n())
                .filter(|&v| !placed.contains(v) && h.neighbours(v).intersection_count(&placed) > 0)
                .max_by_key(|&v| (h.neighbours(v).intersection_count(&placed), h.degree(v), usize::MAX - v));
            match next {
                Some(v) => {
                    placed.insert(v);
                    order.push(v);
                }
                None => break,
            }
        }
    }
    order
}

/// Whether `h` embeds into `g` as an induced subgraph, without a witness.
pub fn contains_induced(g: &Graph, h: &Graph) -> bool {
    search(g, h, pruning_order(h)).is_some()
}

/// Lexicographically least induced embedding `map[h_vertex] = g_vertex`, if any.
pub fn find_induced_embedding(g: &Graph, h: &Graph) -> Result<Option<Vec<usize>>, PatternError> {
    find_induced_embedding_capped(g, h, DEFAULT_PATTERN_CAP)
}

pub fn find_induced_embedding_capped(g: &Graph, h: &Graph, cap: usize) -> Result<Option<Vec<usize>>, PatternError> {
    if h.n() > cap {
        return Err(PatternError::TooLarge { size: h.n(), cap });
    }
    if !contains_induced(g, h) {
        return Ok(None);
    }
    Ok(search(g, h, (0..h.n()).collect()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub pattern: String,
    pub embedding: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FreeVerdict {
    Free,
    Contains(Violation),
}

impl FreeVerdict {
    pub fn is_free(&self) -> bool {
        matches!(self, FreeVerdict::Free)
    }
}

/// Checks patterns in order; the witness names the first pattern that embeds.
pub fn is_free(g: &Graph, patterns: &[Pattern]) -> FreeVerdict {
    for p in patterns {
        if contains_induced(g, &p.graph) {
            let embedding = search(g, &p.graph, (0..p.graph.n()).collect()).expect("embedding exists");
            return FreeVerdict::Contains(Violation { pattern: p.name.clone(), embedding });
        }
    }
    FreeVerdict::Free
}

/// Convenience wrapper that parses the pattern names first.
pub fn is_free_named(g: &Graph, names: &[&str]) -> Result<FreeVerdict, PatternError> {
    let pats = names.iter().map(|n| Pattern::named(n)).collect::<Result<Vec<_>, _>>()?;
    Ok(is_free(g, &pats))
}

pub fn is_induced_subgraph_pair(h1: &Graph, h2: &Graph) -> Result<bool, PatternError> {
    is_induced_subgraph_pair_capped(h1, h2, DEFAULT_PATTERN_CAP)
}

pub fn is_induced_subgraph_pair_capped(h1: &Graph, h2: &Graph, cap: usize) -> Result<bool, PatternError> {
    for h in [h1, h2] {
        if h.n() > cap {
            return Err(PatternError::TooLarge { size: h.n(), cap });
        }
    }
    Ok(contains_induced(h2, h1))
}

fn component_graphs(h: &Graph) -> Vec<Graph> {
    h.components().iter().map(|c| h.induced_subgraph(c).expect("component is valid").0).collect()
}

fn is_tree(g: &Graph) -> bool {
    g.n() >= 1 && g.m() + 1 == g.n() && g.is_connected()
}

pub fn is_path(g: &Graph) -> bool {
    is_tree(g) && g.max_degree() <= 2
}

pub fn is_subdivided_claw(g: &Graph) -> bool {
    is_tree(g) && (0..g.n()).filter(|&v| g.degree(v) == 3).count() == 1 && g.max_degree() == 3
}

pub fn is_linear_forest(h: &Graph) -> bool {
    component_graphs(h).iter().all(is_path)
}

/// Every component is a path or a subdivided claw.
pub fn is_in_class_s(h: &Graph) -> bool {
    component_graphs(h).iter().all(|c| is_path(c) || is_subdivided_claw(c))
}

#[cfg(test)]
mod test {
    use super::*;
    use proptest::prelude::*;

    fn named(s: &str) -> Graph {
        parse_pattern(s).unwrap()
    }

    #[test]
    fn catalogue_sizes() {
        let expect = [
            ("K3", 3, 3),
            ("K4", 4, 6),
            ("diamond", 4, 5),
            ("C4", 4, 4),
            ("C5", 5, 5),
            ("C7", 7, 7),
            ("P2", 2, 1),
            ("P7", 7, 6),
            ("2P2", 4, 2),
            ("3P1", 3, 0),
            ("P1+P2", 3, 1),
            ("P1+2P2", 5, 2),
            ("P1+P5", 6, 4),
            ("P1+P2+P3", 6, 3),
            ("P2+P3", 5, 3),
            ("2P1+P2", 4, 1),
            ("K1,3", 4, 3),
            ("claw", 4, 3),
            ("S122", 6, 5),
            ("S123", 7, 6),
            ("sP1:4", 4, 0),
            ("K:5", 5, 10),
            ("C:7", 7, 7),
            ("petersen", 10, 15),
        ];
        for (name, n, m) in expect {
            let g = named(name);
            assert_eq!((g.n(), g.m()), (n, m), "{name}");
        }
        let co = named("co-2P1+P2");
        assert!(contains_induced(&co, &diamond()) && co.n() == 4);
        assert_eq!(named("co-(2P1+P2)"), co);
        assert!(parse_pattern("Q7").is_err());
        assert!(parse_pattern("P1++P2").is_err());
        // centre of S123 has degree 3 and legs of lengths 1, 2, 3
        let s = named("S123");
        assert_eq!(s.degree(0), 3);
    }

    #[test]
    fn embedding_examples() {
        assert!(find_induced_embedding(&diamond(), &complete(3)).unwrap().is_some());
        // an induced P7 would need all seven vertices, which induce C7 itself
        assert!(find_induced_embedding(&cycle(7), &path(7)).unwrap().is_none());
        assert!(find_induced_embedding(&cycle(7), &path(6)).unwrap().is_some());
        assert!(find_induced_embedding(&cycle(7), &cycle(5)).unwrap().is_none());
        assert!(find_induced_embedding(&petersen(), &complete(3)).unwrap().is_none());
        assert_eq!(
            find_induced_embedding(&complete(9), &complete(9)),
            Err(PatternError::TooLarge { size: 9, cap: 8 })
        );
    }

    #[test]
    fn petersen_triangle_free_by_brute_force() {
        let g = petersen();
        for a in 0..10 {
            for b in a + 1..10 {
                for c in b + 1..10 {
                    assert!(!(g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c)));
                }
            }
        }
    }

    #[test]
    fn is_free_examples() {
        assert!(is_free_named(&cycle(7), &["K3", "C5", "S123"]).unwrap().is_free());
        match is_free_named(&diamond(), &["diamond"]).unwrap() {
            FreeVerdict::Contains(v) => {
                assert_eq!(v.pattern, "diamond");
                assert_eq!(v.embedding, vec![0, 1, 2, 3]);
            }
            FreeVerdict::Free => panic!("diamond contains itself"),
        }
        assert!(is_free_named(&biclique(3, 3), &["K3"]).unwrap().is_free());
        // K4 has no induced diamond
        assert!(is_free_named(&complete(4), &["diamond", "P1+2P2"]).unwrap().is_free());
    }

    #[test]
    fn class_tests() {
        assert!(is_linear_forest(&named("P1+2P2")));
        assert!(!is_linear_forest(&claw()));
        assert!(!is_linear_forest(&cycle(5)));
        assert!(is_in_class_s(&named("S123")));
        assert!(!is_in_class_s(&cycle(4)));
        assert!(is_in_class_s(&named("P6+K1,3")));
        assert!(!is_in_class_s(&named("K1,4")));
        assert!(is_in_class_s(&Graph::empty(0)));
    }

    #[test]
    fn induced_pair_examples() {
        assert!(is_induced_subgraph_pair(&named("P1+2P2"), &named("P1+P2+P3")).unwrap());
        assert!(is_induced_subgraph_pair(&path(4), &path(4)).unwrap());
        assert!(!is_induced_subgraph_pair(&complete(3), &path(7)).unwrap());
    }

    /// Naive oracle: try every injective map.
    fn naive_embeds(g: &Graph, h: &Graph) -> bool {
        fn rec(g: &Graph, h: &Graph, map: &mut Vec<usize>) -> bool {
            let i = map.len();
            if i == h.n() {
                return true;
            }
            for v in 0..g.n() {
                if map.contains(&v) {
                    continue;
                }
                if (0..i).all(|j| h.has_edge(j, i) == g.has_edge(map[j], v)) {
                    map.push(v);
                    if rec(g, h, map) {
                        return true;
                    }
                    map.pop();
                }
            }
            false
        }
        rec(g, h, &mut Vec::new())
    }

    fn graph_from_bits(n: usize, bits: u64) -> Graph {
        let mut edges = Vec::new();
        let mut k = 0;
        for u in 0..n {
            for v in u + 1..n {
                if bits >> k & 1 == 1 {
                    edges.push((u, v));
                }
                k += 1;
            }
        }
        Graph::new(n, &edges).unwrap()
    }

    proptest! {
        #[test]
        fn embedding_agrees_with_naive(gn in 0usize..=7, gbits in any::<u64>(), hn in 1usize..=4, hbits in any::<u64>()) {
            let g = graph_from_bits(gn, gbits);
            let h = graph_from_bits(hn, hbits);
            let found = find_induced_embedding(&g, &h).unwrap();
            prop_assert_eq!(found.is_some(), naive_embeds(&g, &h));
            if let Some(map) = found {
                for a in 0..h.n() {
                    for b in a + 1..h.n() {
                        prop_assert_eq!(h.has_edge(a, b), g.has_edge(map[a], map[b]));
                    }
                }
            }
        }

        #[test]
        fn freeness_is_hereditary(gn in 1usize..=8, gbits in any::<u64>(), hbits in any::<u64>(), mask in any::<u8>()) {
            let g = graph_from_bits(gn, gbits);
            let h = graph_from_bits(4, hbits);
            let keep = VertexSet::from_ids(gn, (0..gn).filter(|i| mask >> i & 1 == 1));
            let (sub, _) = g.induced_subgraph(&keep).unwrap();
            if !contains_induced(&g, &h) {
                prop_assert!(!contains_induced(&sub, &h));
            }
        }

        #[test]
        fn class_s_closed_under_leg_subdivision(h in 1usize..4, i in 1usize..4, j in 1usize..4, which in 0usize..3) {
            let mut legs = [h, i, j];
            legs[which] += 1;
            prop_assert!(is_in_class_s(&subdivided_claw(h, i, j)));
            prop_assert!(is_in_class_s(&subdivided_claw(legs[0], legs[1], legs[2])));
            let g = subdivided_claw(h, i, j).disjoint_union(&path(h + 2));
            for c in component_graphs(&g) {
                prop_assert!(is_in_class_s(&c));
            }
        }
    }
}
