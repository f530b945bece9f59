use rand::seq::SliceRandom;
use rand::Rng;

use super::decomposable::split_tree_edges;
use super::{GenError, GenMode, GenSpec};
use crate::graph::{Graph, VertexSet};
use crate::patterns::{self, Pattern};
use crate::pipelines::{check_basic_properties, recognize_basic, BasicStructure};

const ATTEMPTS: usize = 64;

/// A basic graph with `p` triangles. Blocks come in the order `T^1, W_1, ..., T^p, W_p`;
/// a block's part `k` is complete to every later block's part `k + 1` and anticomplete
/// to the rest. Consecutive `W` blocks start complete; each of their part pairs is
/// dropped with probability `1 - w_density` when the graph stays `(diamond, P1+2P2)`-free. Each `W` block is a three-part split-tree graph, and each
/// copy around `T^i` takes the outside neighbourhood of a random vertex of `T^i`, copies
/// of earlier triangles included.
///
/// The returned structure names the parts the way `recognize_basic` does, so the two
/// compare equal. Draws that leave the recognizer's class are redrawn a bounded number
/// of times before the spec is reported infeasible.
pub fn synthesize_basic(spec: &GenSpec) -> Result<(Graph, BasicStructure), GenError> {
    let GenMode::Basic { p, w_sizes, u_sizes, w_density } = &spec.mode else {
        return Err(GenError::WrongMode { expected: "basic", found: spec.mode.name() });
    };
    let p = *p;
    if p == 0 || w_sizes.len() != p || u_sizes.len() != p {
        return Err(GenError::Infeasible(format!("need p >= 1 and {p} entries in w_sizes and u_sizes")));
    }
    let mut rng = spec.rng();
    let mut last = String::new();
    for _ in 0..ATTEMPTS {
        let (g, b) = draw(&mut rng, p, w_sizes, u_sizes, *w_density)?;
        if let Err(r) = check_basic_properties(&g, &b) {
            last = r.to_string();
            continue;
        }
        match recognize_basic(&g) {
            Ok(found) if found == b => return Ok((g, b)),
            Ok(_) => last = "recognizer disagrees with the planted structure".into(),
            Err(r) => last = r.to_string(),
        }
    }
    Err(GenError::Infeasible(format!("no draw in {ATTEMPTS} attempts stays in the class ({last})")))
}

fn draw(rng: &mut impl Rng, p: usize, w_sizes: &[[usize; 3]], u_sizes: &[usize], w_density: f64) -> Result<(Graph, BasicStructure), GenError> {
    let n = 3 * p + w_sizes.iter().flatten().sum::<usize>() + u_sizes.iter().sum::<usize>();
    let mut next = 0;
    let mut fresh = |count: usize| {
        let ids: Vec<usize> = (next..next + count).collect();
        next += count;
        ids
    };
    let mut part = vec![usize::MAX; n];
    // blocks[2i] = T^i, blocks[2i + 1] = W_i, each split by part
    let mut blocks: Vec<[Vec<usize>; 3]> = Vec::with_capacity(2 * p);
    let mut tris = Vec::with_capacity(p);
    let mut copies = Vec::with_capacity(p);
    for i in 0..p {
        let t = fresh(3);
        for k in 0..3 {
            part[t[k]] = k;
        }
        tris.push([t[0], t[1], t[2]]);
        copies.push(fresh(u_sizes[i]));
        let w: [Vec<usize>; 3] = std::array::from_fn(|k| fresh(w_sizes[i][k]));
        for (k, ids) in w.iter().enumerate() {
            for &x in ids {
                part[x] = k;
            }
        }
        blocks.push([vec![t[0]], vec![t[1]], vec![t[2]]]);
        blocks.push(w);
    }

    let mut edges = Vec::new();
    for t in &tris {
        edges.extend([(t[0], t[1]), (t[1], t[2]), (t[0], t[2])]);
    }
    let mut optional: Vec<Vec<(usize, usize)>> = Vec::new();
    for a in 0..blocks.len() {
        for b in a + 1..blocks.len() {
            let consecutive_w = a % 2 == 1 && b == a + 2;
            for k in 0..3 {
                let (xs, ys) = (&blocks[a][k], &blocks[b][(k + 1) % 3]);
                let group: Vec<(usize, usize)> = xs.iter().flat_map(|&x| ys.iter().map(move |&y| (x, y))).collect();
                if group.is_empty() {
                    continue;
                }
                if consecutive_w {
                    optional.push(group);
                } else {
                    edges.extend(group);
                }
            }
        }
    }
    for i in 0..p {
        let w: Vec<usize> = blocks[2 * i + 1].iter().flatten().copied().collect();
        if w.len() > 1 {
            split_tree_edges(rng, n, 3, &part, w, &mut edges);
        }
    }
    let forbidden = [Pattern::named("diamond")?, Pattern::named("P1+2P2")?];
    let mut keep = vec![true; optional.len()];
    let mut order: Vec<usize> = (0..optional.len()).collect();
    order.shuffle(rng);
    for i in order {
        if rng.gen_bool(w_density.clamp(0.0, 1.0)) {
            continue;
        }
        keep[i] = false;
        let mut trial = edges.clone();
        trial.extend(optional.iter().zip(&keep).filter(|(_, &k)| k).flat_map(|(e, _)| e.iter().copied()));
        if !patterns::is_free(&Graph::new(n, &trial)?, &forbidden).is_free() {
            keep[i] = true;
        }
    }
    edges.extend(optional.iter().zip(&keep).filter(|(_, &k)| k).flat_map(|(e, _)| e.iter().copied()));
    let mut anchor = vec![None; p];
    for i in 0..p {
        if copies[i].is_empty() {
            continue;
        }
        let k = rng.gen_range(0..3);
        anchor[i] = Some(k);
        let current = Graph::new(n, &edges)?;
        let t = VertexSet::from_ids(n, tris[i]);
        for y in current.neighbours(tris[i][k]).difference(&t).iter() {
            for &u in &copies[i] {
                edges.push((u, y));
            }
        }
    }
    let g = Graph::new(n, &edges)?;

    let rot = |k: usize| (k + 1) % 3;
    let mut script_u = VertexSet::new(n);
    for c in &copies {
        script_u.union_with(&VertexSet::from_ids(n, c.iter().copied()));
    }
    let b = BasicStructure {
        v: std::array::from_fn(|k| VertexSet::from_ids(n, (0..n).filter(|&x| part[x] == rot(k)))),
        triangles: tris.iter().map(|t| [t[rot(0)], t[rot(1)], t[rot(2)]]).collect(),
        w: (0..p).map(|i| VertexSet::from_ids(n, blocks[2 * i + 1].iter().flatten().copied())).collect(),
        u: copies.iter().map(|c| VertexSet::from_ids(n, c.iter().copied())).collect(),
        anchor: anchor.iter().map(|a| a.map(|k: usize| (k + 2) % 3)).collect(),
        script_u,
    };
    Ok((g, b))
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::pipelines::basic_expression;

    fn spec(seed: u64, p: usize, w: Vec<[usize; 3]>, u: Vec<usize>) -> GenSpec {
        GenSpec { seed, stream: 0, mode: GenMode::Basic { p, w_sizes: w, u_sizes: u, w_density: 0.5 } }
    }

    #[test]
    fn single_triangle() {
        let (g, b) = synthesize_basic(&spec(0, 1, vec![[0; 3]], vec![0])).unwrap();
        assert_eq!(g, crate::patterns::complete(3));
        assert_eq!(b.p(), 1);
    }

    #[test]
    fn round_trip_with_blocks() {
        for seed in 0..20 {
            let s = spec(seed, 3, vec![[1, 1, 0], [0, 2, 1], [1, 0, 1]], vec![0, 0, 0]);
            let (g, b) = synthesize_basic(&s).unwrap();
            assert_eq!(recognize_basic(&g).unwrap(), b);
            let e = basic_expression(&g, &b).unwrap();
            assert!(e.validate_against(&g) && e.width() <= 9);
        }
    }

    #[test]
    fn copies_round_trip() {
        let s = spec(7, 2, vec![[1, 1, 1], [1, 1, 1]], vec![1, 1]);
        let (g, b) = synthesize_basic(&s).unwrap();
        assert!(b.u.iter().any(|u| !u.is_empty()));
        assert!(basic_expression(&g, &b).unwrap().validate_against(&g));
    }

    #[test]
    fn isolated_copy_is_infeasible() {
        let s = spec(0, 1, vec![[0; 3]], vec![1]);
        assert!(matches!(synthesize_basic(&s), Err(GenError::Infeasible(_))));
    }
}
