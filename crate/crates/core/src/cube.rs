//! Hamilton paths in Q3 and Hamilton cycles in (tree □ Q3).
//!
//! A cube vertex is a 3-bit mask `b1 b2 b3`, with `b1` the most significant
//! bit.

use crate::design::{Point, Triple};
use crate::error::{Error, Result};
use crate::honeycomb::WalkTree;

/// A Gray-code Hamilton cycle of Q3.
pub const CUBE_CYCLE: [u8; 8] = [0, 1, 3, 2, 6, 7, 5, 4];

fn cycle_pos(c: u8) -> usize {
    CUBE_CYCLE.iter().position(|&x| x == c).unwrap()
}

/// Hamilton path of Q3 from `v1` to `v2`, trying lower bits first.
pub fn cube_ham_path(v1: u8, v2: u8) -> Result<[u8; 8]> {
    if v1 > 7 || v2 > 7 {
        return Err(Error::params(format!(
            "cube vertices are 3-bit, got {v1}, {v2}"
        )));
    }
    if (v1 ^ v2).count_ones().is_multiple_of(2) {
        return Err(Error::NoPath { from: v1, to: v2 });
    }
    fn dfs(path: &mut Vec<u8>, used: u8, end: u8) -> bool {
        let u = *path.last().unwrap();
        if path.len() == 8 {
            return u == end;
        }
        for b in 0..3 {
            let w = u ^ (1 << b);
            if used & (1 << w) != 0 || (w == end && path.len() < 7) {
                continue;
            }
            path.push(w);
            if dfs(path, used | (1 << w), end) {
                return true;
            }
            path.pop();
        }
        false
    }
    let mut path = vec![v1];
    if dfs(&mut path, 1 << v1, v2) {
        Ok(path.try_into().unwrap())
    } else {
        Err(Error::construction(format!(
            "no Q3 path {v1:03b} -> {v2:03b}"
        )))
    }
}

/// A cyclic sequence of (tree vertex, cube vertex) pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductCycle {
    pub order: Vec<(usize, u8)>,
}

impl ProductCycle {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Every pair once, consecutive pairs adjacent in tree □ Q3, closed.
    pub fn check(&self, tree_adj: &[Vec<usize>]) -> Result<()> {
        let want = tree_adj.len() * 8;
        if self.order.len() != want {
            return Err(Error::construction(format!(
                "product cycle has {} entries, expected {want}",
                self.order.len()
            )));
        }
        let mut seen = vec![false; want];
        for &(t, c) in &self.order {
            if t >= tree_adj.len()
                || c > 7
                || std::mem::replace(&mut seen[t * 8 + c as usize], true)
            {
                return Err(Error::construction(format!(
                    "pair ({t},{c:03b}) repeated or invalid"
                )));
            }
        }
        for k in 0..self.order.len() {
            let (t1, c1) = self.order[k];
            let (t2, c2) = self.order[(k + 1) % self.order.len()];
            let ok = if t1 == t2 {
                (c1 ^ c2).count_ones() == 1
            } else {
                c1 == c2 && tree_adj[t1].contains(&t2)
            };
            if !ok {
                return Err(Error::construction(format!(
                    "product cycle step {k}: ({t1},{c1:03b}) -> ({t2},{c2:03b})"
                )));
            }
        }
        Ok(())
    }
}

fn check_tree(adj: &[Vec<usize>]) -> Result<()> {
    let n = adj.len();
    if n == 0 {
        return Err(Error::params("empty tree"));
    }
    let edges: usize = adj.iter().map(Vec::len).sum();
    if edges != 2 * (n - 1) {
        return Err(Error::params(format!(
            "{n} vertices and {} edges is not a tree",
            edges / 2
        )));
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if w >= n {
                return Err(Error::params(format!("neighbour {w} out of range")));
            }
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::params("tree is disconnected"));
    }
    if let Some(v) = (0..n).find(|&v| adj[v].len() > 6) {
        return Err(Error::params(format!(
            "vertex {v} has degree {} > 6",
            adj[v].len()
        )));
    }
    Ok(())
}

/// Parent links and breadth-first order from vertex 0.
fn bfs_parents(adj: &[Vec<usize>]) -> (Vec<usize>, Vec<Option<usize>>) {
    let mut order = vec![0];
    let mut parent = vec![None; adj.len()];
    let mut seen = vec![false; adj.len()];
    seen[0] = true;
    let mut k = 0;
    while k < order.len() {
        let v = order[k];
        k += 1;
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some(v);
                order.push(w);
            }
        }
    }
    (order, parent)
}

/// Hamilton cycle of tree □ Q3 by absorbing one child layer at a time.
///
/// The root layer starts as [`CUBE_CYCLE`]. A child `u` of `v` takes over
/// a cycle edge `(v,a) -> (v,b)` inside v's layer, with a, b consecutive on
/// the 8-cycle, and replaces it by `(v,a) -> (u,a)`, the long way round u's
/// 8-cycle, then `(u,b) -> (v,b)`.
pub fn tree_cube_cycle(adj: &[Vec<usize>]) -> Result<ProductCycle> {
    check_tree(adj)?;
    let n = adj.len();
    let node = |t: usize, c: u8| t * 8 + c as usize;
    let mut next = vec![usize::MAX; n * 8];
    for k in 0..8 {
        next[node(0, CUBE_CYCLE[k])] = node(0, CUBE_CYCLE[(k + 1) % 8]);
    }
    let (order, parent) = bfs_parents(adj);
    for &u in order.iter().skip(1) {
        let v = parent[u].unwrap();
        let site = (0..8).find_map(|k| {
            let a = CUBE_CYCLE[k];
            for b in [CUBE_CYCLE[(k + 1) % 8], CUBE_CYCLE[(k + 7) % 8]] {
                if next[node(v, a)] == node(v, b) {
                    return Some((a, b));
                }
            }
            None
        });
        let (a, b) = site
            .ok_or_else(|| Error::construction(format!("no free layer edge at tree vertex {v}")))?;
        // walk u's 8-cycle from a away from b
        let pa = cycle_pos(a);
        let step = if CUBE_CYCLE[(pa + 1) % 8] == b { 7 } else { 1 };
        next[node(v, a)] = node(u, a);
        let mut p = pa;
        for _ in 0..7 {
            let q = (p + step) % 8;
            next[node(u, CUBE_CYCLE[p])] = node(u, CUBE_CYCLE[q]);
            p = q;
        }
        debug_assert_eq!(CUBE_CYCLE[p], b);
        next[node(u, b)] = node(v, b);
    }
    let start = node(0, CUBE_CYCLE[0]);
    let mut out = Vec::with_capacity(n * 8);
    let mut x = start;
    loop {
        out.push((x / 8, (x % 8) as u8));
        x = next[x];
        if x == start || out.len() > n * 8 {
            break;
        }
    }
    let cycle = ProductCycle { order: out };
    cycle.check(adj)?;
    Ok(cycle)
}

/// Residue order for each tree vertex such that tree edges keep the two
/// shared residues in the same positions.
///
/// Mask bit `2-p` then applies to position `p` of the frame, so product
/// edges become pairs of blocks meeting in two points.
pub fn coordinate_frames(tree: &WalkTree) -> Result<Vec<[u32; 3]>> {
    let adj = &tree.adj;
    check_tree(adj)?;
    let (order, parent) = bfs_parents(adj);
    let mut frame = vec![[0u32; 3]; adj.len()];
    frame[0] = tree.vertices[0].residues;
    for &u in order.iter().skip(1) {
        let v = parent[u].unwrap();
        let fv = frame[v];
        let ru = tree.vertices[u].residues;
        let out: Vec<usize> = (0..3).filter(|&p| !ru.contains(&fv[p])).collect();
        let new: Vec<u32> = ru.iter().copied().filter(|x| !fv.contains(x)).collect();
        if out.len() != 1 || new.len() != 1 {
            return Err(Error::construction(format!(
                "tree edge {} -- {} does not share two residues",
                tree.vertices[v], tree.vertices[u]
            )));
        }
        let mut f = fv;
        f[out[0]] = new[0];
        frame[u] = f;
    }
    Ok(frame)
}

/// The Step-1a/1b block of a frame and mask.
pub fn masked_block(frame: [u32; 3], mask: u8) -> Triple {
    let mut pts = [0, 1, 2].map(|p| Point::fin(frame[p], (mask >> (2 - p)) & 1));
    pts.sort_unstable();
    pts
}
