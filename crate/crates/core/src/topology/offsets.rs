//! Exact intersection tests between translated copies of the attractor.
//!
//! `E ∩ (E + v) ≠ ∅` for an integer `v` exactly when the offset graph on
//! `{−1,0,1}^d`, with edges `w → n·w + b − a` (`a, b ∈ D`), has an infinite
//! path from `v`. Pruning nodes without successors until nothing changes
//! leaves precisely the nodes with infinite paths.

use std::collections::BTreeSet;

use crate::model::DigitSet;

use super::union_find::UnionFind;

#[derive(Debug, Clone)]
pub struct OffsetGraph {
    dim: usize,
    alive: Vec<bool>,
}

impl OffsetGraph {
    pub fn new(digits: &DigitSet) -> Self {
        let dim = digits.dim();
        let n = digits.base() as i64;
        let nodes = 3usize.pow(dim as u32);

        let diffs: BTreeSet<Vec<i64>> = digits
            .digits()
            .flat_map(|a| {
                digits
                    .digits()
                    .map(move |b| b.iter().zip(a).map(|(&x, &y)| x as i64 - y as i64).collect())
            })
            .collect();

        let mut succ: Vec<Vec<u32>> = vec![Vec::new(); nodes];
        let mut pred: Vec<Vec<u32>> = vec![Vec::new(); nodes];
        let mut w = vec![0i64; dim];
        for (node, out) in succ.iter_mut().enumerate() {
            decode(node, &mut w);
            'diffs: for delta in &diffs {
                let mut target = 0usize;
                for axis in (0..dim).rev() {
                    let t = n * w[axis] + delta[axis];
                    if !(-1..=1).contains(&t) {
                        continue 'diffs;
                    }
                    target = target * 3 + (t + 1) as usize;
                }
                out.push(target as u32);
                pred[target].push(node as u32);
            }
        }

        let mut out_degree: Vec<usize> = succ.iter().map(Vec::len).collect();
        let mut alive = vec![true; nodes];
        let mut queue: Vec<usize> = (0..nodes).filter(|&v| out_degree[v] == 0).collect();
        while let Some(v) = queue.pop() {
            if !alive[v] {
                continue;
            }
            alive[v] = false;
            for &p in &pred[v] {
                let p = p as usize;
                out_degree[p] -= 1;
                if out_degree[p] == 0 && alive[p] {
                    queue.push(p);
                }
            }
        }
        Self { dim, alive }
    }

    /// Whether `E ∩ (E + v) ≠ ∅`.
    pub fn intersects(&self, v: &[i64]) -> bool {
        if v.len() != self.dim || v.iter().any(|c| !(-1..=1).contains(c)) {
            return false;
        }
        let node = v.iter().rev().fold(0usize, |acc, &c| acc * 3 + (c + 1) as usize);
        self.alive[node]
    }
}

fn decode(mut node: usize, w: &mut [i64]) {
    for c in w.iter_mut() {
        *c = (node % 3) as i64 - 1;
        node /= 3;
    }
}

/// Decides `E ∩ (E + v) ≠ ∅` exactly.
pub fn piece_intersects(digits: &DigitSet, v: &[i64]) -> bool {
    OffsetGraph::new(digits).intersects(v)
}

/// Connectivity of the graph on digits where `i ~ j` when the first-level
/// pieces `(E + d_i)/n` and `(E + d_j)/n` meet. A connected piece graph
/// means the attractor is connected.
pub fn hata_connected(digits: &DigitSet) -> bool {
    let graph = OffsetGraph::new(digits);
    let count = digits.len();
    let mut uf = UnionFind::new(count);
    let mut components = count;
    for i in 0..count {
        let a = digits.digit(i);
        for j in i + 1..count {
            let b = digits.digit(j);
            let v: Vec<i64> = b.iter().zip(a).map(|(&x, &y)| x as i64 - y as i64).collect();
            if graph.intersects(&v) && uf.find(i as u32) != uf.find(j as u32) {
                uf.union(i as u32, j as u32);
                components -= 1;
            }
        }
    }
    components == 1
}
