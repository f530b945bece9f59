use std::collections::{BTreeSet, HashMap};

use super::{ExprError, KExpr, Label};
use crate::graph::{Graph, VertexSet};

pub const DEFAULT_DP_WIDTH_CAP: usize = 10;
pub const DEFAULT_ORACLE_CAP: usize = 16;

/// Sorted label masks of the live colour classes, mapped to the fewest dead classes seen.
type States = HashMap<Vec<u32>, usize>;

struct Dp {
    k: usize,
    index: HashMap<Label, u32>,
}

impl Dp {
    fn bit(&self, l: Label) -> u32 {
        1 << self.index[&l]
    }

    fn insert(out: &mut States, mut masks: Vec<u32>, dead: usize, live: u32) {
        let mut extra = 0;
        masks.retain_mut(|m| {
            *m &= live;
            if *m == 0 {
                extra += 1;
                false
            } else {
                true
            }
        });
        masks.sort_unstable();
        let dead = dead + extra;
        out.entry(masks).and_modify(|d| *d = (*d).min(dead)).or_insert(dead);
    }

    fn run(&self, e: &KExpr, live: u32) -> States {
        let mut out = States::new();
        match e {
            KExpr::Create { label, .. } => {
                if self.k >= 1 {
                    Self::insert(&mut out, vec![self.bit(*label)], 0, live);
                }
            }
            KExpr::Join { i, j, child } => {
                let (bi, bj) = (self.bit(*i), self.bit(*j));
                for (masks, dead) in self.run(child, live | bi | bj) {
                    if masks.iter().all(|m| m & bi == 0 || m & bj == 0) {
                        Self::insert(&mut out, masks, dead, live);
                    }
                }
            }
            KExpr::Relabel { from, to, child } => {
                let (bf, bt) = (self.bit(*from), self.bit(*to));
                let mut child_live = live & !bf;
                if live & bt != 0 {
                    child_live |= bf;
                }
                for (masks, dead) in self.run(child, child_live) {
                    let moved = masks.into_iter().map(|m| if m & bf != 0 { (m & !bf) | bt } else { m }).collect();
                    Self::insert(&mut out, moved, dead, live);
                }
            }
            KExpr::Union(a, b) => {
                let left = self.run(a, live);
                if left.is_empty() {
                    return out;
                }
                let right = self.run(b, live);
                for (lm, &ld) in &left {
                    for (rm, &rd) in &right {
                        let mut used = vec![false; lm.len()];
                        let mut acc = Vec::with_capacity(lm.len() + rm.len());
                        self.merge(lm, rm, rd, 0, &mut used, ld, &mut acc, live, &mut out);
                    }
                }
            }
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn merge(
        &self,
        lm: &[u32],
        rm: &[u32],
        rd: usize,
        idx: usize,
        used: &mut Vec<bool>,
        free_dead: usize,
        acc: &mut Vec<u32>,
        live: u32,
        out: &mut States,
    ) {
        if idx == rm.len() {
            let unused = used.iter().filter(|u| !**u).count();
            let mut masks: Vec<u32> = lm.iter().zip(used.iter()).filter(|(_, u)| !**u).map(|(m, _)| *m).collect();
            masks.extend(acc.iter().copied());
            let absorbed = rd.min(free_dead + unused);
            let dead = free_dead + rd - absorbed;
            if masks.len() + dead <= self.k {
                Self::insert(out, masks, dead, live);
            }
            return;
        }
        let m = rm[idx];
        for t in 0..lm.len() {
            if used[t] || (t > 0 && lm[t] == lm[t - 1] && !used[t - 1]) {
                continue;
            }
            used[t] = true;
            acc.push(lm[t] | m);
            self.merge(lm, rm, rd, idx + 1, used, free_dead, acc, live, out);
            acc.pop();
            used[t] = false;
        }
        acc.push(m);
        self.merge(lm, rm, rd, idx + 1, used, free_dead.saturating_sub(1), acc, live, out);
        acc.pop();
    }
}

/// Decides whether the graph of `e` is `k`-colourable.
pub fn colour_via_expression(e: &KExpr, k: usize) -> Result<bool, ExprError> {
    colour_via_expression_capped(e, k, DEFAULT_DP_WIDTH_CAP)
}

pub fn colour_via_expression_capped(e: &KExpr, k: usize, cap: usize) -> Result<bool, ExprError> {
    let labels: BTreeSet<Label> = e.labels();
    if labels.len() > cap.min(32) {
        return Err(ExprError::WidthCap { width: labels.len(), cap });
    }
    e.evaluate()?;
    let index = labels.iter().enumerate().map(|(i, &l)| (l, i as u32)).collect();
    let dp = Dp { k, index };
    Ok(!dp.run(e, 0).is_empty())
}

pub fn chromatic_via_expression(e: &KExpr) -> Result<usize, ExprError> {
    let n = e.vertex_count();
    for k in 1..=n {
        if colour_via_expression(e, k)? {
            return Ok(k);
        }
    }
    Ok(n)
}

pub fn chromatic_oracle(g: &Graph) -> Result<usize, ExprError> {
    chromatic_oracle_capped(g, DEFAULT_ORACLE_CAP)
}

/// Branch and bound over vertices in decreasing degree order.
pub fn chromatic_oracle_capped(g: &Graph, cap: usize) -> Result<usize, ExprError> {
    let n = g.n();
    if n > cap {
        return Err(ExprError::TooLarge { n, cap });
    }
    if n == 0 {
        return Ok(0);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let lower = greedy_clique(g, &order);
    for k in lower..=n {
        let mut colour = vec![usize::MAX; n];
        if try_colour(g, &order, 0, k, 0, &mut colour) {
            return Ok(k);
        }
    }
    Ok(n)
}

fn greedy_clique(g: &Graph, order: &[usize]) -> usize {
    let mut best = 1;
    for &s in order {
        let mut clique = VertexSet::from_ids(g.n(), [s]);
        for &v in order {
            if !clique.contains(v) && g.is_complete_to(v, &clique) {
                clique.insert(v);
            }
        }
        best = best.max(clique.len());
    }
    best
}

fn try_colour(g: &Graph, order: &[usize], idx: usize, k: usize, used: usize, colour: &mut [usize]) -> bool {
    if idx == order.len() {
        return true;
    }
    let v = order[idx];
    for c in 0..k.min(used + 1) {
        if g.neighbours(v).iter().all(|u| colour[u] != c) {
            colour[v] = c;
            if try_colour(g, order, idx + 1, k, used.max(c + 1), colour) {
                return true;
            }
            colour[v] = usize::MAX;
        }
    }
    false
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::kexpr::{clique_expr, distinct_label_expr, expr_for_max_degree_2};
    use crate::patterns;
    use proptest::prelude::*;

    fn brute_chromatic(g: &Graph) -> usize {
        let n = g.n();
        if n == 0 {
            return 0;
        }
        for k in 1..=n {
            let total = k.pow(n as u32);
            for code in 0..total {
                let mut c = vec![0; n];
                let mut x = code;
                for slot in c.iter_mut() {
                    *slot = x % k;
                    x /= k;
                }
                if g.edges().iter().all(|&(u, v)| c[u] != c[v]) {
                    return k;
                }
            }
        }
        n
    }

    #[test]
    fn small_examples() {
        let c5 = expr_for_max_degree_2(&patterns::cycle(5)).unwrap();
        assert!(!colour_via_expression(&c5, 2).unwrap());
        assert!(colour_via_expression(&c5, 3).unwrap());
        let k4 = clique_expr(&[0, 1, 2, 3]).unwrap();
        assert_eq!(chromatic_via_expression(&k4).unwrap(), 4);
        assert_eq!(chromatic_oracle(&patterns::complete(4)).unwrap(), 4);
        assert_eq!(chromatic_oracle(&patterns::cycle(5)).unwrap(), 3);
        assert_eq!(chromatic_oracle(&patterns::diamond()).unwrap(), 3);
        assert_eq!(chromatic_oracle(&patterns::petersen()).unwrap(), 3);
        assert_eq!(chromatic_oracle(&Graph::empty(17)), Err(ExprError::TooLarge { n: 17, cap: 16 }));
    }

    #[test]
    fn width_cap_enforced() {
        let g = patterns::complete(6);
        let e = distinct_label_expr(&g).unwrap();
        assert!(e.width() > 3);
        assert!(matches!(colour_via_expression_capped(&e, 3, 3), Err(ExprError::WidthCap { .. })));
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
                let mut edges = Vec::new();
                let mut k = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        if bits[k] {
                            edges.push((u, v));
                        }
                        k += 1;
                    }
                }
                Graph::new(n, &edges).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn oracle_matches_brute_force(g in arb_graph(7)) {
            prop_assert_eq!(chromatic_oracle(&g).unwrap(), brute_chromatic(&g));
        }

        #[test]
        fn dp_matches_oracle(g in arb_graph(9)) {
            let e = distinct_label_expr(&g).unwrap();
            prop_assert_eq!(chromatic_via_expression(&e).unwrap(), chromatic_oracle(&g).unwrap());
            let (_, w) = crate::kexpr::exact_cliquewidth(&g.induced_subgraph(&VertexSet::from_ids(g.n(), 0..g.n().min(7))).unwrap().0, 7).unwrap().unwrap();
            let h = w.evaluate().unwrap().graph;
            prop_assert_eq!(chromatic_via_expression(&w).unwrap(), chromatic_oracle(&h).unwrap());
        }
    }
}
