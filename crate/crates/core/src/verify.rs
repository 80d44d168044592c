//! Independent checks for designs and Gray codes, and a brute-force
//! Hamilton path oracle.
//!
//! Nothing here calls into the generators; intersections and pair counts are
//! recomputed from raw point triples.

use std::collections::HashSet;
use std::fmt;

use crate::design::{Point, Triple, TripleSystem};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn merge(mut self, other: VerificationReport) -> VerificationReport {
        self.checks.extend(other.checks);
        self
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "ok  " } else { "FAIL" };
            writeln!(f, "{tag} {}: {}", c.name, c.detail)?;
        }
        write!(
            f,
            "overall: {}",
            if self.passed() { "pass" } else { "fail" }
        )
    }
}

fn common(a: &Triple, b: &Triple) -> usize {
    let mut k = 0;
    for p in a {
        for q in b {
            if p == q {
                k += 1;
            }
        }
    }
    k
}

fn point_ok(p: Point, n: u32) -> bool {
    match p {
        Point::Infinity(i) => i < 2,
        Point::Finite { residue, bit } => residue < n && bit < 2,
    }
}

/// Block count, simplicity and exact pair coverage.
pub fn verify_design(ts: &TripleSystem) -> VerificationReport {
    let mut r = VerificationReport::default();
    let v = ts.v as usize;
    r.push(
        "order",
        ts.v == 2 * ts.n + 2,
        format!("v = {}, n = {}", ts.v, ts.n),
    );

    let want = ts.lambda as usize * v * v.saturating_sub(1) / 6;
    r.push(
        "block count",
        ts.blocks.len() == want,
        format!("{} blocks, expected {want}", ts.blocks.len()),
    );

    let bad_points = ts
        .blocks
        .iter()
        .filter(|b| {
            let [x, y, z] = b.points;
            !(point_ok(x, ts.n) && point_ok(y, ts.n) && point_ok(z, ts.n))
                || x == y
                || y == z
                || x == z
        })
        .count();
    r.push(
        "well formed",
        bad_points == 0,
        format!("{bad_points} malformed blocks"),
    );

    let mut keys: Vec<[usize; 3]> = ts
        .blocks
        .iter()
        .map(|b| {
            let mut k = b.points.map(index_of);
            k.sort_unstable();
            k
        })
        .collect();
    keys.sort_unstable();
    let dups = keys.windows(2).filter(|w| w[0] == w[1]).count();
    r.push("simple", dups == 0, format!("{dups} repeated blocks"));

    if bad_points == 0 {
        let mut count = vec![0u32; v * v];
        for k in &keys {
            for (x, y) in [(k[0], k[1]), (k[0], k[2]), (k[1], k[2])] {
                count[x * v + y] += 1;
            }
        }
        let mut wrong = 0usize;
        let mut example = String::new();
        for x in 0..v {
            for y in x + 1..v {
                let c = count[x * v + y];
                if c != ts.lambda {
                    if wrong == 0 {
                        example = format!("; first: pair ({},{}) in {c} blocks", x, y);
                    }
                    wrong += 1;
                }
            }
        }
        r.push(
            "pair coverage",
            wrong == 0,
            format!(
                "{} pairs, {wrong} not covered exactly {} times{example}",
                v * (v - 1) / 2,
                ts.lambda
            ),
        );
    } else {
        r.push("pair coverage", false, "skipped: malformed blocks");
    }
    r
}

fn index_of(p: Point) -> usize {
    match p {
        Point::Infinity(i) => i as usize,
        Point::Finite { residue, bit } => 2 + 2 * residue as usize + bit as usize,
    }
}

/// The listing is a permutation of the blocks and cyclically consecutive
/// blocks meet in exactly two points.
pub fn verify_gray_code(ts: &TripleSystem, code: &[usize]) -> VerificationReport {
    let mut r = VerificationReport::default();
    let nb = ts.blocks.len();
    r.push(
        "code length",
        code.len() == nb,
        format!("{} entries for {nb} blocks", code.len()),
    );
    let in_range = code.iter().all(|&i| i < nb);
    let distinct: HashSet<usize> = code.iter().copied().collect();
    r.push(
        "permutation",
        in_range && distinct.len() == code.len() && code.len() == nb,
        format!("{} distinct indices", distinct.len()),
    );
    if !in_range || code.is_empty() {
        r.push("consecutive intersections", false, "skipped");
        return r;
    }
    let mut bad = Vec::new();
    for i in 0..code.len() {
        let j = (i + 1) % code.len();
        let k = common(&ts.blocks[code[i]].points, &ts.blocks[code[j]].points);
        if k != 2 {
            bad.push((i, k));
        }
    }
    let detail = match bad.first() {
        None => format!("{} junctions, all share 2 points", code.len()),
        Some(&(i, k)) => format!(
            "{} bad junctions; first at position {i} shares {k}",
            bad.len()
        ),
    };
    r.push("consecutive intersections", bad.is_empty(), detail);
    r
}

pub type PathFilter<'a> = dyn Fn(&[usize]) -> bool + 'a;

/// Options for [`oracle_ham_path`].
pub struct OracleQuery<'a> {
    pub start: Option<usize>,
    pub end: Option<usize>,
    /// Require the last vertex to be adjacent to the first.
    pub closed: bool,
    /// Paths may leave out up to this many vertices; fewer omissions are
    /// tried first.
    pub max_skipped: usize,
    /// Limit on explored search nodes.
    pub budget: u64,
    /// Extra acceptance test on a complete candidate path.
    pub accept: Option<&'a PathFilter<'a>>,
}

impl Default for OracleQuery<'_> {
    fn default() -> Self {
        OracleQuery {
            start: None,
            end: None,
            closed: false,
            max_skipped: 0,
            budget: 50_000_000,
            accept: None,
        }
    }
}

struct Search<'a> {
    adj: &'a [Vec<usize>],
    q: &'a OracleQuery<'a>,
    on: Vec<bool>,
    path: Vec<usize>,
    target: usize,
    nodes: u64,
}

impl Search<'_> {
    fn dfs(&mut self, u: usize) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.q.budget {
            return Err(Error::Timeout(self.q.budget));
        }
        let at_end = self.q.end == Some(u);
        if at_end || self.path.len() >= self.target {
            if self.path.len() >= self.target && self.complete() {
                return Ok(true);
            }
            if at_end {
                return Ok(false);
            }
        }
        for idx in 0..self.adj[u].len() {
            let w = self.adj[u][idx];
            if self.on[w] {
                continue;
            }
            self.on[w] = true;
            self.path.push(w);
            if self.dfs(w)? {
                return Ok(true);
            }
            self.path.pop();
            self.on[w] = false;
        }
        Ok(false)
    }

    fn complete(&self) -> bool {
        let last = *self.path.last().unwrap();
        if let Some(e) = self.q.end {
            if e != last {
                return false;
            }
        }
        if self.q.closed && !self.adj[last].contains(&self.path[0]) {
            return false;
        }
        self.q.accept.is_none_or(|f| f(&self.path))
    }
}

/// Exhaustive backtracking for a simple path, visiting neighbours in
/// adjacency-list order.
///
/// Returns `Ok(None)` when the search space is exhausted and
/// `Err(Timeout)` when the node budget runs out first.
pub fn oracle_ham_path(adj: &[Vec<usize>], q: &OracleQuery) -> Result<Option<Vec<usize>>> {
    let n = adj.len();
    if n == 0 {
        return Ok(None);
    }
    let starts: Vec<usize> = match q.start {
        Some(s) => vec![s],
        None => (0..n).collect(),
    };
    let mut search = Search {
        adj,
        q,
        on: vec![false; n],
        path: Vec::with_capacity(n),
        target: n,
        nodes: 0,
    };
    for skipped in 0..=q.max_skipped.min(n - 1) {
        search.target = n - skipped;
        for &s in &starts {
            search.on.iter_mut().for_each(|b| *b = false);
            search.path.clear();
            search.on[s] = true;
            search.path.push(s);
            if search.dfs(s)? {
                return Ok(Some(search.path.clone()));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{union_design, ArcColoring, Block};

    fn cube() -> Vec<Vec<usize>> {
        (0..8)
            .map(|v| (0..3).map(|b| v ^ (1 << b)).collect())
            .collect()
    }

    fn petersen() -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); 10];
        let mut add = |a: usize, b: usize| {
            adj[a].push(b);
            adj[b].push(a);
        };
        for i in 0..5 {
            add(i, (i + 1) % 5);
            add(i, i + 5);
            add(i + 5, (i + 2) % 5 + 5);
        }
        adj
    }

    #[test]
    fn cube_parity() {
        let q = OracleQuery {
            start: Some(0),
            end: Some(0b011),
            ..Default::default()
        };
        assert_eq!(oracle_ham_path(&cube(), &q).unwrap(), None);
        let q = OracleQuery {
            start: Some(0),
            end: Some(0b111),
            ..Default::default()
        };
        let p = oracle_ham_path(&cube(), &q).unwrap().unwrap();
        assert_eq!(p.len(), 8);
    }

    #[test]
    fn petersen_has_path_but_no_cycle() {
        let adj = petersen();
        assert!(oracle_ham_path(&adj, &OracleQuery::default())
            .unwrap()
            .is_some());
        let q = OracleQuery {
            start: Some(0),
            closed: true,
            ..Default::default()
        };
        assert_eq!(oracle_ham_path(&adj, &q).unwrap(), None);
    }

    #[test]
    fn budget_is_enforced() {
        let q = OracleQuery {
            start: Some(0),
            closed: true,
            budget: 5,
            ..Default::default()
        };
        assert_eq!(oracle_ham_path(&petersen(), &q), Err(Error::Timeout(5)));
    }

    #[test]
    fn skipping_vertices() {
        // a star has no Hamilton path, but a 3-vertex path through the centre
        let adj = vec![vec![1, 2, 3], vec![0], vec![0], vec![0]];
        let q = OracleQuery {
            max_skipped: 1,
            ..Default::default()
        };
        let p = oracle_ham_path(&adj, &q).unwrap().unwrap();
        assert_eq!(p, vec![1, 0, 2]);
    }

    #[test]
    fn design_checks() {
        let c = ArcColoring::default_rule(5, 2).unwrap();
        let ts = union_design(5, 4, &c).unwrap();
        let r = verify_design(&ts);
        assert!(r.passed(), "{r}");
        let mut broken = ts.clone();
        broken.blocks.pop();
        let r = verify_design(&broken);
        assert!(!r.passed());
        let failed: Vec<_> = r
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        assert_eq!(failed, vec!["block count", "pair coverage"]);
    }

    #[test]
    fn single_class_is_ts_v_2() {
        let c = ArcColoring::default_rule(7, 1).unwrap();
        let blocks: Vec<Block> = crate::design::schreiber_class(7, 0, &c).unwrap();
        let ts = TripleSystem {
            n: 7,
            v: 16,
            lambda: 2,
            blocks,
        };
        assert!(verify_design(&ts).passed());
    }

    #[test]
    fn gray_code_checks_catch_swaps() {
        // the 4 Step-3 blocks of one class form a K4
        let c = ArcColoring::default_rule(5, 1).unwrap();
        let blocks: Vec<Block> = crate::design::schreiber_class(5, 0, &c)
            .unwrap()
            .into_iter()
            .filter(|b| b.origin.step() == crate::design::Step::S3)
            .collect();
        let ts = TripleSystem {
            n: 5,
            v: 12,
            lambda: 2,
            blocks,
        };
        assert!(verify_gray_code(&ts, &[0, 1, 2, 3]).passed());
        assert!(verify_gray_code(&ts, &[3, 2, 1, 0]).passed());
        assert!(!verify_gray_code(&ts, &[0, 1, 2]).passed());
        assert!(!verify_gray_code(&ts, &[0, 1, 1, 3]).passed());
        assert!(!verify_gray_code(&ts, &[0, 1, 2, 9]).passed());
    }
}
