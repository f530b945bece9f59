use rand::seq::SliceRandom;
use rand::Rng;

use super::{GenError, GenMode, GenSpec};
use crate::decomp::{DecompositionSplit, DecompositionTree, KPartition, Rel};
use crate::graph::{Graph, VertexSet};

/// Builds a graph top-down from a random split tree, so the tree is a witness of total
/// `k`-decomposability. With `k = 3` every split also keeps each cross triple from
/// being a `K3` or a `3P1`, which makes the output meet the three-part conditions.
pub fn synthesize_totally_decomposable(spec: &GenSpec) -> Result<(Graph, KPartition, DecompositionTree), GenError> {
    let GenMode::TotallyKDecomposable { k, n } = spec.mode else {
        return Err(GenError::WrongMode { expected: "totally-k-decomposable", found: spec.mode.name() });
    };
    if k == 0 || n == 0 {
        return Err(GenError::Infeasible("need k >= 1 and n >= 1".into()));
    }
    let mut rng = spec.rng();
    let part: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
    let mut edges = Vec::new();
    let tree = split_tree_edges(&mut rng, n, k, &part, (0..n).collect(), &mut edges);
    let g = Graph::new(n, &edges)?;
    let parts: Vec<Vec<usize>> = (0..k).map(|i| (0..n).filter(|&v| part[v] == i).collect()).collect();
    let p = KPartition::new(&g, &parts).map_err(|e| GenError::Infeasible(e.to_string()))?;
    Ok((g, p, tree))
}

pub(super) fn split_tree_edges<R: Rng>(rng: &mut R, n: usize, k: usize, part: &[usize], mut vs: Vec<usize>, edges: &mut Vec<(usize, usize)>) -> DecompositionTree {
    if vs.len() == 1 {
        return DecompositionTree::Leaf { vertex: vs[0], part: part[vs[0]] };
    }
    vs.shuffle(rng);
    let cut = rng.gen_range(1..vs.len());
    let mut left = vs[..cut].to_vec();
    let mut right = vs[cut..].to_vec();
    left.sort_unstable();
    right.sort_unstable();
    let side = |s: &[usize]| -> Vec<VertexSet> { (0..k).map(|i| VertexSet::from_ids(n, s.iter().copied().filter(|&v| part[v] == i))).collect() };
    let primed = side(&left);
    let double = side(&right);
    let complete = choose_relations(rng, k, &primed, &double);
    let mut rel = vec![vec![Rel::AntiComplete; k]; k];
    for i in 0..k {
        for j in 0..k {
            if complete[i][j] && !primed[i].is_empty() && !double[j].is_empty() {
                rel[i][j] = Rel::Complete;
                for a in primed[i].iter() {
                    for b in double[j].iter() {
                        edges.push((a, b));
                    }
                }
            }
        }
    }
    let p = split_tree_edges(rng, n, k, part, left, edges);
    let d = split_tree_edges(rng, n, k, part, right, edges);
    DecompositionTree::Node { split: DecompositionSplit { primed, double, rel }, primed: Box::new(p), double: Box::new(d) }
}

fn choose_relations<R: Rng>(rng: &mut R, k: usize, primed: &[VertexSet], double: &[VertexSet]) -> Vec<Vec<bool>> {
    let random = |rng: &mut R| (0..k).map(|i| (0..k).map(|j| i != j && rng.gen_bool(0.5)).collect()).collect();
    if k != 3 {
        return random(rng);
    }
    let valid = |m: &Vec<Vec<bool>>| {
        (0..3).all(|p| {
            let (q, r) = ((p + 1) % 3, (p + 2) % 3);
            let cross_double = double[q].is_empty() || double[r].is_empty();
            let cross_primed = primed[q].is_empty() || primed[r].is_empty();
            (primed[p].is_empty() || cross_double || m[p][q] != m[p][r])
                && (double[p].is_empty() || cross_primed || m[q][p] != m[r][p])
        })
    };
    let options: Vec<Vec<Vec<bool>>> = (0u32..64)
        .map(|bits| {
            let mut m = vec![vec![false; 3]; 3];
            let mut b = 0;
            for (i, row) in m.iter_mut().enumerate() {
                for (j, cell) in row.iter_mut().enumerate() {
                    if i != j {
                        *cell = bits >> b & 1 == 1;
                        b += 1;
                    }
                }
            }
            m
        })
        .filter(valid)
        .collect();
    options.choose(rng).expect("two alternating patterns always qualify").clone()
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::decomp::{check_three_part_conditions, expression_from_tree, total_three_decompose};

    fn spec(seed: u64, k: usize, n: usize) -> GenSpec {
        GenSpec { seed, stream: 0, mode: GenMode::TotallyKDecomposable { k, n } }
    }

    #[test]
    fn witness_tree_is_valid() {
        for seed in 0..10 {
            for k in [2, 3, 4] {
                let (g, p, t) = synthesize_totally_decomposable(&spec(seed, k, 20)).unwrap();
                assert_eq!(t.leaf_count(), 20);
                assert!(t.splits().iter().all(|s| s.is_valid_for(&g)));
                let e = expression_from_tree(&t, k).unwrap();
                assert!(e.validate_against(&g));
                assert!(e.width() <= 2 * k);
                for v in 0..20 {
                    assert!(p.part(p.part_of(v)).contains(v));
                }
            }
        }
    }

    #[test]
    fn three_parts_meet_the_conditions() {
        for seed in 0..30 {
            let (g, p, _) = synthesize_totally_decomposable(&spec(seed, 3, 30)).unwrap();
            check_three_part_conditions(&g, &p).unwrap();
            let t = total_three_decompose(&g, &p).unwrap();
            let e = expression_from_tree(&t, 3).unwrap();
            assert!(e.validate_against(&g) && e.width() <= 6);
        }
    }

    #[test]
    fn deterministic() {
        let a = synthesize_totally_decomposable(&spec(4, 3, 25)).unwrap();
        let b = synthesize_totally_decomposable(&spec(4, 3, 25)).unwrap();
        assert_eq!(a.0, b.0);
        assert_eq!(a.2, b.2);
    }
}
