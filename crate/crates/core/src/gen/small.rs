use fnv::FnvHashMap;

use super::GenError;
use crate::graph::Graph;
use crate::patterns::{self, Pattern};

pub const ENUMERATE_MAX_N: usize = 8;

/// Labelled graphs on `0..n` passing the filters, built one vertex at a time so a
/// prefix that already contains a pattern is never extended.
pub struct SmallGraphs {
    n: usize,
    filters: Vec<Pattern>,
    /// `masks[v]`: neighbours of `v` among `0..v`.
    masks: Vec<u32>,
    done: bool,
}

impl SmallGraphs {
    fn prefix(&self) -> Graph {
        let mut edges = Vec::new();
        for (v, &m) in self.masks.iter().enumerate() {
            for u in 0..v {
                if m >> u & 1 == 1 {
                    edges.push((u, v));
                }
            }
        }
        Graph::new(self.masks.len(), &edges).expect("ids in range")
    }

    fn step(&mut self, descend: bool) {
        if descend && self.masks.len() < self.n {
            self.masks.push(0);
            return;
        }
        while !self.masks.is_empty() {
            let v = self.masks.len() - 1;
            self.masks[v] += 1;
            if self.masks[v] < 1 << v {
                return;
            }
            self.masks.pop();
        }
        self.done = true;
    }
}

impl Iterator for SmallGraphs {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        while !self.done {
            if self.n == 0 {
                self.done = true;
                return Some(Graph::empty(0));
            }
            let g = self.prefix();
            let ok = self.filters.is_empty() || patterns::is_free(&g, &self.filters).is_free();
            let full = self.masks.len() == self.n;
            self.step(ok);
            if ok && full {
                return Some(g);
            }
        }
        None
    }
}

pub fn enumerate_small(n: usize, filters: &[Pattern]) -> Result<SmallGraphs, GenError> {
    if n > ENUMERATE_MAX_N {
        return Err(GenError::TooLarge { n, max: ENUMERATE_MAX_N });
    }
    Ok(SmallGraphs { n, filters: filters.to_vec(), masks: vec![0], done: false })
}

type Invariant = (usize, Vec<(usize, Vec<usize>)>);

fn invariant(g: &Graph) -> Invariant {
    let mut rows: Vec<(usize, Vec<usize>)> = (0..g.n())
        .map(|v| {
            let mut nd: Vec<usize> = g.neighbours(v).iter().map(|w| g.degree(w)).collect();
            nd.sort_unstable();
            (g.degree(v), nd)
        })
        .collect();
    rows.sort_unstable();
    (g.m(), rows)
}

pub fn isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.n() != b.n() || invariant(a) != invariant(b) {
        return false;
    }
    matches!(patterns::find_induced_embedding_capped(b, a, a.n().max(1)), Ok(Some(_)))
}

/// One representative per isomorphism class, each the first labelled graph of its class
/// in extension order.
pub fn enumerate_small_unlabelled(n: usize, filters: &[Pattern]) -> Result<Vec<Graph>, GenError> {
    if n > ENUMERATE_MAX_N {
        return Err(GenError::TooLarge { n, max: ENUMERATE_MAX_N });
    }
    let mut level = vec![Graph::empty(0)];
    for size in 1..=n {
        let mut buckets: FnvHashMap<Invariant, Vec<usize>> = FnvHashMap::default();
        let mut next: Vec<Graph> = Vec::new();
        for g in &level {
            let base = g.edges();
            for mask in 0u32..1 << (size - 1) {
                let mut edges = base.clone();
                edges.extend((0..size - 1).filter(|u| mask >> u & 1 == 1).map(|u| (u, size - 1)));
                let h = Graph::new(size, &edges)?;
                if !filters.is_empty() && !patterns::is_free(&h, filters).is_free() {
                    continue;
                }
                let key = invariant(&h);
                let bucket = buckets.entry(key).or_default();
                if bucket.iter().any(|&i| isomorphic(&next[i], &h)) {
                    continue;
                }
                bucket.push(next.len());
                next.push(h);
            }
        }
        level = next;
    }
    Ok(level)
}
