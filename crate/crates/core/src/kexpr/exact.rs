use std::collections::{HashMap, VecDeque};

use super::{ExprError, KExpr, Label};
use crate::graph::Graph;

pub const EXACT_CW_MAX_N: usize = 8;

const ABSENT: u8 = u8::MAX;

/// Class id per vertex, canonical by first occurrence.
type Key = [u8; EXACT_CW_MAX_N];

#[derive(Clone)]
enum Deriv {
    Create(usize),
    Merge { child: Key, cmap: Vec<u8> },
    Union { left: Key, right: Key, lmap: Vec<u8>, rmap: Vec<u8>, joins: Vec<(u8, u8)> },
}

struct Search {
    n: usize,
    k: usize,
    adj: Vec<u16>,
    full: u16,
    found: HashMap<Key, Deriv>,
    by_mask: Vec<Vec<Key>>,
    queue: VecDeque<Key>,
}

fn mask_of(key: &Key) -> u16 {
    key.iter().enumerate().filter(|(_, &c)| c != ABSENT).fold(0, |m, (v, _)| m | 1 << v)
}

fn class_count(key: &Key) -> usize {
    key.iter().filter(|&&c| c != ABSENT).map(|&c| c as usize + 1).max().unwrap_or(0)
}

fn class_masks(key: &Key) -> Vec<u16> {
    let mut out = vec![0u16; class_count(key)];
    for (v, &c) in key.iter().enumerate() {
        if c != ABSENT {
            out[c as usize] |= 1 << v;
        }
    }
    out
}

/// Renumbers raw class ids by first vertex; returns the key and the raw→canonical map.
fn canonical(raw: &[u8; EXACT_CW_MAX_N], raw_classes: usize) -> (Key, Vec<u8>) {
    let mut map = vec![ABSENT; raw_classes];
    let mut next = 0;
    let mut key = [ABSENT; EXACT_CW_MAX_N];
    for v in 0..EXACT_CW_MAX_N {
        let c = raw[v];
        if c == ABSENT {
            continue;
        }
        if map[c as usize] == ABSENT {
            map[c as usize] = next;
            next += 1;
        }
        key[v] = map[c as usize];
    }
    (key, map)
}

impl Search {
    fn uniform_outside(&self, class: u16, inside: u16) -> bool {
        let mut reference = None;
        for v in 0..self.n {
            if class >> v & 1 == 1 {
                let out = self.adj[v] & !inside;
                match reference {
                    None => reference = Some(out),
                    Some(r) if r != out => return false,
                    _ => {}
                }
            }
        }
        true
    }

    fn add(&mut self, key: Key, d: Deriv) -> bool {
        if self.found.contains_key(&key) {
            return false;
        }
        self.found.insert(key, d);
        self.by_mask[mask_of(&key) as usize].push(key);
        self.queue.push_back(key);
        mask_of(&key) == self.full
    }

    fn run(&mut self) -> Option<Key> {
        for v in 0..self.n {
            let mut key = [ABSENT; EXACT_CW_MAX_N];
            key[v] = 0;
            if self.add(key, Deriv::Create(v)) {
                return Some(key);
            }
        }
        while let Some(s) = self.queue.pop_front() {
            if let Some(done) = self.expand_merges(&s) {
                return Some(done);
            }
            let ms = mask_of(&s);
            let rest = self.full & !ms;
            let mut sub = rest;
            while sub != 0 {
                let partners = self.by_mask[sub as usize].clone();
                for t in partners {
                    if let Some(done) = self.expand_union(&s, &t) {
                        return Some(done);
                    }
                }
                sub = (sub - 1) & rest;
            }
        }
        None
    }

    fn expand_merges(&mut self, s: &Key) -> Option<Key> {
        let inside = mask_of(s);
        let classes = class_masks(s);
        for a in 0..classes.len() {
            for b in a + 1..classes.len() {
                if !self.uniform_outside(classes[a] | classes[b], inside) {
                    continue;
                }
                let mut raw = *s;
                for c in raw.iter_mut() {
                    if *c == b as u8 {
                        *c = a as u8;
                    }
                }
                let (key, map) = canonical(&raw, classes.len());
                let cmap = (0..classes.len()).map(|c| if c == b { map[a] } else { map[c] }).collect();
                if self.add(key, Deriv::Merge { child: *s, cmap }) {
                    return Some(key);
                }
            }
        }
        None
    }

    fn expand_union(&mut self, s: &Key, t: &Key) -> Option<Key> {
        let cs = class_masks(s);
        let ct = class_masks(t);
        let inside = mask_of(s) | mask_of(t);
        let mut pairing = vec![ABSENT; cs.len()];
        let mut used = vec![false; ct.len()];
        self.matchings(s, t, &cs, &ct, inside, 0, &mut pairing, &mut used)
    }

    #[allow(clippy::too_many_arguments)]
    fn matchings(
        &mut self,
        s: &Key,
        t: &Key,
        cs: &[u16],
        ct: &[u16],
        inside: u16,
        idx: usize,
        pairing: &mut Vec<u8>,
        used: &mut Vec<bool>,
    ) -> Option<Key> {
        if idx == cs.len() {
            let matched = used.iter().filter(|u| **u).count();
            if cs.len() + ct.len() - matched > self.k {
                return None;
            }
            return self.try_union(s, t, cs, ct, pairing);
        }
        let matched = used.iter().filter(|u| **u).count();
        let left_open = cs.len() - idx;
        if cs.len() + ct.len() - matched - left_open.min(ct.len() - matched) > self.k {
            return None;
        }
        for b in 0..ct.len() {
            if used[b] {
                continue;
            }
            let (a_set, b_set) = (cs[idx], ct[b]);
            let rep_a = a_set.trailing_zeros() as usize;
            let rep_b = b_set.trailing_zeros() as usize;
            let edge_between = (0..self.n).any(|v| a_set >> v & 1 == 1 && self.adj[v] & b_set != 0);
            if edge_between || self.adj[rep_a] & !inside != self.adj[rep_b] & !inside {
                continue;
            }
            used[b] = true;
            pairing[idx] = b as u8;
            if let Some(done) = self.matchings(s, t, cs, ct, inside, idx + 1, pairing, used) {
                return Some(done);
            }
            used[b] = false;
        }
        pairing[idx] = ABSENT;
        self.matchings(s, t, cs, ct, inside, idx + 1, pairing, used)
    }

    fn try_union(&mut self, s: &Key, t: &Key, cs: &[u16], ct: &[u16], pairing: &[u8]) -> Option<Key> {
        let mut lmap_raw = vec![0u8; cs.len()];
        let mut rmap_raw = vec![ABSENT; ct.len()];
        let mut side_s = Vec::new();
        let mut side_t = Vec::new();
        for (a, &set) in cs.iter().enumerate() {
            lmap_raw[a] = side_s.len() as u8;
            side_s.push(set);
            side_t.push(if pairing[a] == ABSENT { 0 } else { ct[pairing[a] as usize] });
            if pairing[a] != ABSENT {
                rmap_raw[pairing[a] as usize] = a as u8;
            }
        }
        for (b, &set) in ct.iter().enumerate() {
            if rmap_raw[b] == ABSENT {
                rmap_raw[b] = side_s.len() as u8;
                side_s.push(0);
                side_t.push(set);
            }
        }
        let r = side_s.len();
        let mut joins = Vec::new();
        for x in 0..r {
            for y in x + 1..r {
                let cross = (0..self.n).any(|v| {
                    (side_s[x] >> v & 1 == 1 && self.adj[v] & side_t[y] != 0)
                        || (side_t[x] >> v & 1 == 1 && self.adj[v] & side_s[y] != 0)
                });
                if !cross {
                    continue;
                }
                let xs = side_s[x] | side_t[x];
                let ys = side_s[y] | side_t[y];
                if (0..self.n).any(|v| xs >> v & 1 == 1 && self.adj[v] & ys != ys) {
                    return None;
                }
                joins.push((x as u8, y as u8));
            }
        }
        let mut raw = [ABSENT; EXACT_CW_MAX_N];
        for v in 0..self.n {
            if s[v] != ABSENT {
                raw[v] = lmap_raw[s[v] as usize];
            } else if t[v] != ABSENT {
                raw[v] = rmap_raw[t[v] as usize];
            }
        }
        let (key, map) = canonical(&raw, r);
        let lmap = lmap_raw.iter().map(|&c| map[c as usize]).collect();
        let rmap = rmap_raw.iter().map(|&c| map[c as usize]).collect();
        let joins = joins.into_iter().map(|(x, y)| (map[x as usize], map[y as usize])).collect();
        if self.add(key, Deriv::Union { left: *s, right: *t, lmap, rmap, joins }) {
            return Some(key);
        }
        None
    }

    fn build(&self, key: &Key, lab: &[Label]) -> KExpr {
        match &self.found[key] {
            Deriv::Create(v) => KExpr::create(lab[0], *v),
            Deriv::Merge { child, cmap } => {
                let target = (0..cmap.len()).rev().find(|&c| cmap[..c].contains(&cmap[c])).unwrap();
                let temp = (1..=self.k as Label).find(|l| !lab.contains(l)).unwrap();
                let child_lab: Vec<Label> =
                    (0..cmap.len()).map(|c| if c == target { temp } else { lab[cmap[c] as usize] }).collect();
                KExpr::relabel(temp, lab[cmap[target] as usize], self.build(child, &child_lab))
            }
            Deriv::Union { left, right, lmap, rmap, joins } => {
                let ll: Vec<Label> = lmap.iter().map(|&c| lab[c as usize]).collect();
                let rl: Vec<Label> = rmap.iter().map(|&c| lab[c as usize]).collect();
                let mut e = KExpr::union(self.build(left, &ll), self.build(right, &rl));
                for &(x, y) in joins {
                    e = KExpr::join(lab[x as usize], lab[y as usize], e);
                }
                e
            }
        }
    }
}

/// Least `k ≤ max_k` with a `k`-expression for `g`, together with a witness.
pub fn exact_cliquewidth(g: &Graph, max_k: usize) -> Result<Option<(usize, KExpr)>, ExprError> {
    let n = g.n();
    if n > EXACT_CW_MAX_N {
        return Err(ExprError::TooLarge { n, cap: EXACT_CW_MAX_N });
    }
    if n == 0 {
        return Err(ExprError::EmptyGraph);
    }
    let adj: Vec<u16> = (0..n).map(|v| g.neighbours(v).iter().fold(0u16, |m, u| m | 1 << u)).collect();
    for k in 1..=max_k.min(n) {
        let mut search = Search {
            n,
            k,
            adj: adj.clone(),
            full: ((1u32 << n) - 1) as u16,
            found: HashMap::new(),
            by_mask: vec![Vec::new(); 1 << n],
            queue: VecDeque::new(),
        };
        if let Some(root) = search.run() {
            let lab: Vec<Label> = (1..=class_count(&root) as Label).collect();
            return Ok(Some((k, search.build(&root, &lab))));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::kexpr::{expr_for_max_degree_2, extend_expression, Extension};
    use crate::patterns;

    fn cw(g: &Graph) -> usize {
        let (k, e) = exact_cliquewidth(g, 8).unwrap().unwrap();
        assert!(e.validate_against(g), "witness {e} does not build the graph");
        assert!(e.width() <= k);
        k
    }

    #[test]
    fn known_values() {
        assert_eq!(cw(&Graph::empty(1)), 1);
        assert_eq!(cw(&Graph::empty(4)), 1);
        assert_eq!(cw(&patterns::biclique(1, 3)), 2);
        assert_eq!(cw(&patterns::complete(5)), 2);
        assert_eq!(cw(&patterns::path(3)), 2);
        assert_eq!(cw(&patterns::path(4)), 3);
        assert_eq!(cw(&patterns::cycle(5)), 3);
        let c7 = cw(&patterns::cycle(7));
        assert!((3..=4).contains(&c7));
        assert_eq!(exact_cliquewidth(&patterns::path(4), 2).unwrap(), None);
        assert!(matches!(exact_cliquewidth(&Graph::empty(9), 3), Err(ExprError::TooLarge { .. })));
    }

    #[test]
    fn oracle_bounds_constructions() {
        for n in 3..=8 {
            let g = patterns::cycle(n);
            let e = expr_for_max_degree_2(&g).unwrap();
            assert!(cw(&g) <= e.width());
        }
    }

    #[test]
    fn twin_keeps_width() {
        let c6 = patterns::cycle(6);
        let (k, e) = exact_cliquewidth(&c6, 6).unwrap().unwrap();
        let t = extend_expression(&e, &Extension::AddFalseTwin { of: 0, new: 6 }).unwrap();
        let g = t.evaluate().unwrap().graph;
        assert_eq!(cw(&g), k);
    }
}
