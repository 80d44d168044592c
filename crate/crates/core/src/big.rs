//! Block intersection graphs.

use std::collections::HashMap;
use std::fmt::Write;

use crate::design::{Point, Triple};
use crate::error::{Error, Result};

pub fn intersection_size(a: &Triple, b: &Triple) -> usize {
    a.iter().filter(|p| b.contains(p)).count()
}

/// Undirected graph on blocks, `i ~ j` iff the blocks share exactly `k` points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionGraph {
    pub k: usize,
    pub labels: Vec<String>,
    /// Sorted neighbour lists.
    pub adj: Vec<Vec<usize>>,
}

impl IntersectionGraph {
    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].binary_search(&j).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(i, nb)| nb.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }
}

fn pairs_of(t: &Triple) -> [(Point, Point); 3] {
    [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])]
}

/// Build the k-block-intersection graph for `k` in `0..=2`.
///
/// For `k = 2` neighbours come from a pair index, so the cost is linear in
/// the number of (block, pair) incidences.
pub fn build_kbig(blocks: &[Triple], k: usize) -> Result<IntersectionGraph> {
    if k > 2 {
        return Err(Error::params(format!("k = {k} must be 0, 1 or 2")));
    }
    let mut seen = HashMap::with_capacity(blocks.len());
    for (i, b) in blocks.iter().enumerate() {
        if let Some(&first) = seen.get(b) {
            return Err(Error::DuplicateBlocks { first, second: i });
        }
        seen.insert(*b, i);
    }
    let mut adj = vec![Vec::new(); blocks.len()];
    if k == 2 {
        let mut by_pair: HashMap<(Point, Point), Vec<usize>> = HashMap::new();
        for (i, b) in blocks.iter().enumerate() {
            for pr in pairs_of(b) {
                by_pair.entry(pr).or_default().push(i);
            }
        }
        for members in by_pair.values() {
            for (x, &i) in members.iter().enumerate() {
                for &j in &members[x + 1..] {
                    // distinct blocks share at most one pair
                    adj[i].push(j);
                    adj[j].push(i);
                }
            }
        }
    } else {
        for i in 0..blocks.len() {
            for j in i + 1..blocks.len() {
                if intersection_size(&blocks[i], &blocks[j]) == k {
                    adj[i].push(j);
                    adj[j].push(i);
                }
            }
        }
    }
    for nb in adj.iter_mut() {
        nb.sort_unstable();
    }
    let labels = blocks
        .iter()
        .map(|[a, b, c]| format!("{{{a},{b},{c}}}"))
        .collect();
    Ok(IntersectionGraph { k, labels, adj })
}

pub fn export_dot(graph: &IntersectionGraph) -> String {
    dot_text("big", false, &graph.labels, graph.edges())
}

/// DOT text for a labelled graph; `directed` picks `digraph` and `->`.
pub fn dot_text(
    name: &str,
    directed: bool,
    labels: &[String],
    edges: impl IntoIterator<Item = (usize, usize)>,
) -> String {
    let (kw, op) = if directed {
        ("digraph", "->")
    } else {
        ("graph", "--")
    };
    let mut out = String::new();
    writeln!(out, "{kw} {name} {{").unwrap();
    for (i, l) in labels.iter().enumerate() {
        writeln!(out, "  v{i} [label=\"{}\"];", l.replace('"', "\\\"")).unwrap();
    }
    for (i, j) in edges {
        writeln!(out, "  v{i} {op} v{j};").unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::triple;

    fn f(r: u32, b: u8) -> Point {
        Point::fin(r, b)
    }

    fn step3(g: u32) -> Vec<Triple> {
        vec![
            triple([Point::INF0, Point::INF1, f(g, 0)]),
            triple([Point::INF0, Point::INF1, f(g, 1)]),
            triple([Point::INF0, f(g, 0), f(g, 1)]),
            triple([Point::INF1, f(g, 0), f(g, 1)]),
        ]
    }

    #[test]
    fn sizes() {
        let s = step3(2);
        assert_eq!(intersection_size(&s[0], &s[1]), 2);
        assert_eq!(intersection_size(&s[0], &s[0]), 3);
        let x = triple([f(0, 0), f(1, 0), f(4, 0)]);
        let y = triple([f(0, 0), f(2, 0), f(3, 0)]);
        assert_eq!(intersection_size(&x, &y), 1);
    }

    #[test]
    fn step3_is_k4() {
        let g = build_kbig(&step3(0), 2).unwrap();
        assert_eq!(g.edge_count(), 6);
        let dot = export_dot(&g);
        assert_eq!(dot.matches("label=").count(), 4);
        assert_eq!(dot.matches(" -- ").count(), 6);
    }

    #[test]
    fn same_class_bases_not_adjacent() {
        let x = triple([f(0, 0), f(1, 0), f(4, 0)]);
        let y = triple([f(0, 0), f(2, 0), f(3, 0)]);
        assert_eq!(build_kbig(&[x, y], 2).unwrap().edge_count(), 0);
        assert_eq!(build_kbig(&[x], 2).unwrap().edge_count(), 0);
        assert_eq!(build_kbig(&[x, y], 1).unwrap().edge_count(), 1);
    }

    #[test]
    fn empty_and_duplicates() {
        let g = build_kbig(&[], 2).unwrap();
        assert_eq!(export_dot(&g), "graph big {\n}\n");
        let s = step3(1);
        let err = build_kbig(&[s[0], s[1], s[0]], 2).unwrap_err();
        assert_eq!(
            err,
            Error::DuplicateBlocks {
                first: 0,
                second: 2
            }
        );
        assert!(build_kbig(&s, 3).is_err());
    }

    #[test]
    fn pair_index_matches_brute_force() {
        let mut blocks = Vec::new();
        for a in 0..6usize {
            for b in a + 1..6 {
                for c in b + 1..6 {
                    blocks.push(triple([a, b, c].map(Point::from_index)));
                }
            }
        }
        let g = build_kbig(&blocks, 2).unwrap();
        for i in 0..blocks.len() {
            for j in 0..blocks.len() {
                let want = i != j && intersection_size(&blocks[i], &blocks[j]) == 2;
                assert_eq!(g.has_edge(i, j), want);
            }
        }
    }
}
