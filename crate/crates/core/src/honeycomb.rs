//! Step-1a subgraphs of the 2-BIG and spanning walks through them.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::modular::Modulus;
use crate::verify::{oracle_ham_path, OracleQuery};

/// A Step-1a base triple `{a,b,c}` with `a+b+c = 3g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ResidueTriple {
    pub residues: [u32; 3],
    pub class_g: u32,
}

impl ResidueTriple {
    /// Reduce, sort and classify three integers. `None` if two coincide mod n.
    pub fn new(m: Modulus, xs: [i64; 3]) -> Option<ResidueTriple> {
        let mut r = xs.map(|x| m.reduce(x));
        r.sort_unstable();
        if r[0] == r[1] || r[1] == r[2] {
            return None;
        }
        let sum = r.iter().map(|&x| x as u64).sum::<u64>() % m.get() as u64;
        Some(ResidueTriple {
            residues: r,
            class_g: m.class_of_sum(sum as u32),
        })
    }

    pub fn shared(&self, other: &ResidueTriple) -> usize {
        self.residues
            .iter()
            .filter(|x| other.residues.contains(x))
            .count()
    }

    pub fn adjacent(&self, other: &ResidueTriple) -> bool {
        self.shared(other) == 2
    }

    pub fn translate(&self, m: Modulus, by: i64) -> ResidueTriple {
        ResidueTriple::new(m, self.residues.map(|x| x as i64 + by))
            .expect("translation is injective")
    }
}

impl fmt::Display for ResidueTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.residues;
        write!(f, "{{{a},{b},{c}}}_{}", self.class_g)
    }
}

/// The 2-BIG restricted to the Step-1a bases of the given classes.
#[derive(Debug, Clone)]
pub struct HoneycombGraph {
    pub n: u32,
    pub classes: Vec<u32>,
    /// Sorted by class, then residues.
    pub vertices: Vec<ResidueTriple>,
    pub adj: Vec<Vec<usize>>,
    index: HashMap<ResidueTriple, usize>,
}

impl HoneycombGraph {
    pub fn index_of(&self, t: &ResidueTriple) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(i, nb)| nb.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    pub fn to_dot(&self) -> String {
        let labels: Vec<String> = self.vertices.iter().map(|t| t.to_string()).collect();
        crate::big::dot_text("honeycomb", false, &labels, self.edges())
    }
}

pub fn step1a_graph(n: u32, classes: &[u32]) -> Result<HoneycombGraph> {
    Modulus::new(n)?;
    let mut cls = classes.to_vec();
    cls.sort_unstable();
    cls.dedup();
    if let Some(&g) = cls.iter().find(|&&g| g >= n) {
        return Err(Error::params(format!("class {g} not in Z_{n}")));
    }
    let mut vertices = Vec::new();
    for &g in &cls {
        for base in crate::design::step1a_bases(n, g)? {
            vertices.push(ResidueTriple {
                residues: base,
                class_g: g,
            });
        }
    }
    // two bases sharing a pair {x,y} differ in the third residue, hence in class
    let mut by_pair: HashMap<(u32, u32), Vec<usize>> = HashMap::new();
    for (i, t) in vertices.iter().enumerate() {
        let [a, b, c] = t.residues;
        for p in [(a, b), (a, c), (b, c)] {
            by_pair.entry(p).or_default().push(i);
        }
    }
    let mut adj = vec![Vec::new(); vertices.len()];
    for members in by_pair.values() {
        for (x, &i) in members.iter().enumerate() {
            for &j in &members[x + 1..] {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    for nb in adj.iter_mut() {
        nb.sort_unstable();
    }
    let index = vertices.iter().enumerate().map(|(i, t)| (*t, i)).collect();
    Ok(HoneycombGraph {
        n,
        classes: cls,
        vertices,
        adj,
        index,
    })
}

/// `Z1 = {3g1-2g2, g2, -3g1+4g2}` and `Z2 = {-2g1+3g2, g1, 4g1-3g2}`.
pub fn z_endpoints(n: u32, g1: u32, g2: u32) -> Result<(ResidueTriple, ResidueTriple)> {
    let m = Modulus::new(n)?;
    if g1 == g2 || g1 >= n || g2 >= n {
        return Err(Error::params(format!(
            "need distinct classes in Z_{n}, got {g1}, {g2}"
        )));
    }
    let (a, b) = (g1 as i64, g2 as i64);
    let bad = || Error::construction(format!("endpoint triple degenerates for n = {n}"));
    let z1 = ResidueTriple::new(m, [3 * a - 2 * b, b, -3 * a + 4 * b]).ok_or_else(bad)?;
    let z2 = ResidueTriple::new(m, [-2 * a + 3 * b, a, 4 * a - 3 * b]).ok_or_else(bad)?;
    Ok((z1, z2))
}

/// Coordinates of a vertex of H^n_{g-1,g}: `U_{i,j}`, or its mirror image
/// `Ū_{i,j}` under `x -> 2g-1-x` when `bar` is set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Label {
    pub bar: bool,
    pub i: i64,
    pub j: i64,
}

const fn u(i: i64, j: i64) -> Label {
    Label { bar: false, i, j }
}

const fn ub(i: i64, j: i64) -> Label {
    Label { bar: true, i, j }
}

/// Last row index: `(n-7)/3` or `(n-8)/3`; negative when there are no rows.
fn last_row(n: u32) -> i64 {
    let n = n as i64;
    if n % 6 == 1 {
        (n - 7).div_euclid(3)
    } else {
        (n - 8).div_euclid(3)
    }
}

fn row_len(n: u32, i: i64) -> i64 {
    if n % 6 == 1 {
        3 * i + 4
    } else {
        3 * i + 5
    }
}

fn specials(n: u32) -> &'static [(i64, i64)] {
    if n % 6 == 1 {
        &[(0, 5)]
    } else {
        &[(0, 6), (0, 7)]
    }
}

/// Every in-range `(i, j)` including the special coordinates.
pub fn label_coords(n: u32) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for i in 0..=last_row(n) {
        for j in 1..=row_len(n, i) {
            out.push((i, j));
        }
    }
    out.extend_from_slice(specials(n));
    out
}

/// The raw formulas, also used outside the nominal index range.
fn u_raw(n: u32, g: i64, i: i64, j: i64) -> [i64; 3] {
    if n % 6 == 1 {
        if (i, j) == (0, 5) {
            [g + 2, g - 1, g - 4]
        } else if j % 2 != 0 {
            [
                g + 3 * i + 5,
                (2 * g - 3 * j + 6 * i + 7) / 2,
                (2 * g + 3 * j - 12 * i - 23) / 2,
            ]
        } else {
            [
                g + 3 * i + 5,
                (2 * g - 3 * j + 6 * i + 10) / 2,
                (2 * g + 3 * j - 12 * i - 20) / 2,
            ]
        }
    } else if (i, j) == (0, 6) {
        [g + 5, g - 1, g - 4]
    } else if (i, j) == (0, 7) {
        [g + 2, g - 1, g - 4]
    } else if j % 2 != 0 {
        [
            (2 * g - 3 * j + 12 * i + 25) / 2,
            (2 * g + 3 * j - 6 * i - 11) / 2,
            g - 3 * i - 7,
        ]
    } else {
        [
            (2 * g - 3 * j + 12 * i + 22) / 2,
            (2 * g + 3 * j - 6 * i - 14) / 2,
            g - 3 * i - 7,
        ]
    }
}

fn eval_label(m: Modulus, g: u32, l: Label) -> Result<ResidueTriple> {
    let g = g as i64;
    let mut t = u_raw(m.get(), g, l.i, l.j);
    if l.bar {
        t = t.map(|x| 2 * g - 1 - x);
    }
    ResidueTriple::new(m, t).ok_or_else(|| {
        Error::construction(format!(
            "label {}U({},{}) degenerates for n = {}",
            if l.bar { "bar-" } else { "" },
            l.i,
            l.j,
            m.get()
        ))
    })
}

/// `U_{i,j}` (or `Ū_{i,j}`) of H^n_{g-1,g}, for in-range coordinates.
pub fn u_coord(n: u32, g: u32, i: i64, j: i64, complement: bool) -> Result<ResidueTriple> {
    let m = Modulus::new(n)?;
    if g >= n {
        return Err(Error::params(format!("class {g} not in Z_{n}")));
    }
    let in_rows = (0..=last_row(n)).contains(&i) && (1..=row_len(n, i)).contains(&j);
    if !in_rows && !specials(n).contains(&(i, j)) {
        return Err(Error::IndexOutOfRange(format!("({i},{j}) for n = {n}")));
    }
    eval_label(
        m,
        g,
        Label {
            bar: complement,
            i,
            j,
        },
    )
}

/// A walk whose consecutive triples share two residues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HamWalk {
    pub n: u32,
    pub classes: Vec<u32>,
    pub steps: Vec<ResidueTriple>,
}

impl HamWalk {
    pub fn first(&self) -> ResidueTriple {
        self.steps[0]
    }

    pub fn last(&self) -> ResidueTriple {
        *self.steps.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Check adjacency, coverage of `H^n_{classes}`, that the traversed
    /// edges form a spanning tree and that no vertex has tree degree above 6.
    pub fn check(&self) -> Result<()> {
        let graph = step1a_graph(self.n, &self.classes)?;
        check_walk_steps(&graph, &self.steps).map(|_| ())
    }
}

/// Returns the tree degree of every graph vertex.
fn check_walk_steps(graph: &HoneycombGraph, steps: &[ResidueTriple]) -> Result<Vec<usize>> {
    let nv = graph.vertices.len();
    let mut idx = Vec::with_capacity(steps.len());
    for t in steps {
        idx.push(
            graph.index_of(t).ok_or_else(|| {
                Error::construction(format!("walk vertex {t} is not in the graph"))
            })?,
        );
    }
    for (k, w) in idx.windows(2).enumerate() {
        if !graph.vertices[w[0]].adjacent(&graph.vertices[w[1]]) {
            return Err(Error::construction(format!(
                "walk junction {k}: {} and {} do not share two residues",
                graph.vertices[w[0]], graph.vertices[w[1]]
            )));
        }
    }
    let mut seen = vec![false; nv];
    idx.iter().for_each(|&i| seen[i] = true);
    if let Some(miss) = seen.iter().position(|s| !s) {
        return Err(Error::construction(format!(
            "walk misses {}",
            graph.vertices[miss]
        )));
    }
    let mut edges: Vec<(usize, usize)> = idx
        .windows(2)
        .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
        .collect();
    edges.sort_unstable();
    edges.dedup();
    if edges.len() + 1 != nv {
        return Err(Error::construction(format!(
            "walk edges do not form a spanning tree: {} edges on {nv} vertices",
            edges.len()
        )));
    }
    let mut deg = vec![0usize; nv];
    for &(a, b) in &edges {
        deg[a] += 1;
        deg[b] += 1;
    }
    if let Some(v) = deg.iter().position(|&d| d > 6) {
        return Err(Error::construction(format!(
            "tree degree {} at {}",
            deg[v], graph.vertices[v]
        )));
    }
    Ok(deg)
}

fn z_pair(n: u32, g: u32) -> Result<(ResidueTriple, ResidueTriple)> {
    let m = Modulus::new(n)?;
    z_endpoints(n, m.sub(g, 1), g)
}

/// Spine search plus pendant attachment for the base cases, at g = 1, in
/// the order Z2 -> Z1.
fn search_base(n: u32) -> Result<Vec<ResidueTriple>> {
    let graph = step1a_graph(n, &[0, 1])?;
    let (z1, z2) = z_pair(n, 1)?;
    let s = graph.index_of(&z2).unwrap();
    let t = graph.index_of(&z1).unwrap();
    let attachable = |spine: &[usize]| attach(&graph.adj, spine).is_some();
    let q = OracleQuery {
        start: Some(s),
        end: Some(t),
        max_skipped: graph.vertices.len() / 4,
        accept: Some(&attachable),
        ..Default::default()
    };
    let spine = oracle_ham_path(&graph.adj, &q)?
        .ok_or_else(|| Error::SearchExhausted(format!("no spanning walk for n = {n}")))?;
    let walk = attach(&graph.adj, &spine).unwrap();
    Ok(walk.into_iter().map(|i| graph.vertices[i]).collect())
}

/// Hang every vertex off the spine by breadth-first search from its
/// interior vertices, then walk around each hanging subtree.
fn attach(adj: &[Vec<usize>], spine: &[usize]) -> Option<Vec<usize>> {
    let mut on = vec![false; adj.len()];
    spine.iter().for_each(|&v| on[v] = true);
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); adj.len()];
    let interior = &spine[1..spine.len().saturating_sub(1)];
    let mut queue: VecDeque<usize> = interior.iter().copied().collect();
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if !on[w] {
                on[w] = true;
                children[u].push(w);
                queue.push_back(w);
            }
        }
    }
    if on.iter().any(|b| !b) {
        return None;
    }
    fn tour(u: usize, children: &[Vec<usize>], out: &mut Vec<usize>) {
        out.push(u);
        for &c in &children[u] {
            tour(c, children, out);
            out.push(u);
        }
    }
    let mut walk = Vec::new();
    for &v in spine {
        tour(v, &children, &mut walk);
    }
    Some(walk)
}

static BASE: [OnceLock<Result<Vec<ResidueTriple>>>; 4] = [const { OnceLock::new() }; 4];

fn base_slot(n: u32) -> Option<usize> {
    [5, 7, 11, 13].iter().position(|&x| x == n)
}

/// Base walk at g = 1 in formula orientation (Z2 first).
fn base_internal(n: u32) -> Result<Vec<ResidueTriple>> {
    let slot = base_slot(n).ok_or_else(|| Error::params(format!("no base walk for n = {n}")))?;
    BASE[slot].get_or_init(|| search_base(n)).clone()
}

fn translate_walk(m: Modulus, steps: Vec<ResidueTriple>, g: u32) -> Vec<ResidueTriple> {
    let by = g as i64 - 1;
    if by == 0 {
        return steps;
    }
    steps.into_iter().map(|t| t.translate(m, by)).collect()
}

fn finish_pair_walk(n: u32, g: u32, mut steps: Vec<ResidueTriple>) -> Result<HamWalk> {
    let m = Modulus::new(n)?;
    steps.reverse();
    let steps = translate_walk(m, steps, g);
    let walk = HamWalk {
        n,
        classes: vec![m.sub(g, 1), g],
        steps,
    };
    let (z1, z2) = z_pair(n, g)?;
    if walk.first() != z1 || walk.last() != z2 {
        return Err(Error::construction(format!(
            "walk runs {} -> {}, expected {z1} -> {z2}",
            walk.first(),
            walk.last()
        )));
    }
    Ok(walk)
}

/// Base-case walk on H^n_{g-1,g} for n in {5, 7, 11, 13}, from Z1 to Z2.
pub fn base_walk(n: u32, g: u32) -> Result<HamWalk> {
    Modulus::new(n)?;
    if g >= n {
        return Err(Error::params(format!("class {g} not in Z_{n}")));
    }
    let steps = base_internal(n)?;
    let walk = finish_pair_walk(n, g, steps)?;
    walk.check()?;
    Ok(walk)
}

/// Opening, connector and closing label runs for the inductive walk at n.
fn segments(n: u32) -> (Vec<Label>, Vec<Label>) {
    let ni = n as i64;
    let mut pre = Vec::new();
    let close = if n % 6 == 1 {
        pre.extend([u(0, 5), u(0, 4), u(0, 3), u(0, 2), u(0, 1), u(0, 2)]);
        for k in 1..=(ni - 7) / 3 {
            pre.extend([
                u(2 * k - 2, 6 * k - 3),
                u(2 * k - 1, 6 * k),
                u(2 * k - 1, 6 * k + 1),
                u(2 * k, 6 * k + 4),
            ]);
        }
        pre.extend([ub(1, 6), ub(1, 5)]);
        for k in (1..=(2 * ni - 17) / 3).rev() {
            let mut js = [3 * k - 1, 3 * k, 3 * k + 1, 3 * k + 2];
            if k % 2 == 1 {
                js.reverse();
            }
            pre.extend(js.map(|j| u(k, j)));
        }
        vec![
            ub(1, 2),
            ub(1, 3),
            ub(1, 4),
            ub(0, 1),
            ub(0, 2),
            ub(0, 3),
            ub(0, 4),
            ub(0, 5),
        ]
    } else {
        pre.extend([u(0, 7), u(0, 6), u(0, 4), u(0, 5), u(1, 8)]);
        pre.extend([u(0, 5), u(0, 4), u(0, 3), u(0, 2), u(0, 1)]);
        pre.extend([u(1, 4), u(1, 5), u(1, 6)]);
        for k in 1..=(ni - 11) / 3 {
            pre.extend([
                u(2 * k - 1, 6 * k + 1),
                u(2 * k, 6 * k + 4),
                u(2 * k, 6 * k + 5),
                u(2 * k + 1, 6 * k + 8),
            ]);
        }
        pre.extend([ub(2, 10), ub(2, 9)]);
        for k in (1..=(2 * ni - 25) / 3).rev() {
            let r = k + 1;
            let mut js = [3 * r + 3, 3 * r + 2, 3 * r + 1, 3 * r];
            if k % 2 == 0 {
                js.reverse();
            }
            pre.extend(js.map(|j| u(r, j)));
        }
        pre.push(u(1, 3));
        vec![
            ub(1, 3),
            ub(2, 6),
            ub(2, 7),
            ub(2, 8),
            ub(1, 5),
            ub(1, 4),
            ub(0, 1),
            ub(0, 2),
            ub(0, 3),
            ub(1, 6),
            ub(1, 7),
            ub(1, 8),
            ub(0, 5),
            ub(0, 4),
            ub(0, 6),
            ub(0, 7),
        ]
    };
    (pre, close)
}

/// Where a vertex label of H^{n-6} lands inside H^n.
pub fn embed_label(n: u32, l: Label) -> Label {
    let to = |i, j| Label { bar: l.bar, i, j };
    match (n % 6, l.i, l.j) {
        (1, 0, 5) => to(1, 1),
        (5, 0, 6) => to(1, 1),
        (5, 0, 7) => to(1, 2),
        _ => to(l.i + 2, l.j),
    }
}

/// Map from vertex to label for H^n_{g-1,g}, g = 1.
fn label_map(n: u32) -> Result<HashMap<ResidueTriple, Label>> {
    let m = Modulus::new(n)?;
    let mut map = HashMap::new();
    for (i, j) in label_coords(n) {
        for bar in [false, true] {
            let l = Label { bar, i, j };
            let t = eval_label(m, 1, l)?;
            if map.insert(t, l).is_some() {
                return Err(Error::construction(format!(
                    "two labels name {t} for n = {n}"
                )));
            }
        }
    }
    Ok(map)
}

/// Inductive walk at g = 1, formula orientation.
fn inductive_internal(n: u32) -> Result<Vec<ResidueTriple>> {
    if n <= 13 {
        return base_internal(n);
    }
    let m = Modulus::new(n)?;
    let small = inductive_internal(n - 6)?;
    let labels = label_map(n - 6)?;
    let (pre, close) = segments(n);
    let mut out = Vec::with_capacity(pre.len() + small.len() + close.len());
    for l in pre {
        out.push(eval_label(m, 1, l)?);
    }
    for t in &small {
        let l = labels
            .get(t)
            .ok_or_else(|| Error::construction(format!("{t} has no label for n = {}", n - 6)))?;
        out.push(eval_label(m, 1, embed_label(n, *l))?);
    }
    for l in close {
        out.push(eval_label(m, 1, l)?);
    }
    for (k, w) in out.windows(2).enumerate() {
        if !w[0].adjacent(&w[1]) {
            return Err(Error::construction(format!(
                "inductive walk for n = {n}: junction {k} between {} and {}",
                w[0], w[1]
            )));
        }
    }
    Ok(out)
}

/// Spanning walk of H^n_{g-1,g} from `Z1(g-1,g)` to `Z2(g-1,g)`.
pub fn pair_walk(n: u32, g: u32) -> Result<HamWalk> {
    Modulus::new(n)?;
    if g >= n {
        return Err(Error::params(format!("class {g} not in Z_{n}")));
    }
    let steps = inductive_internal(n)?;
    finish_pair_walk(n, g, steps)
}

/// Add every class-(g+1) base as a pendant of a class-g vertex.
///
/// The base `{α,β,γ}` of class g+1 hangs off `{α,β,γ-3}` of class g, using
/// the first residue (in sorted order) for which this is a valid base that
/// is not an endpoint of the walk.
pub fn extend_triple_walk(walk: &HamWalk, g: u32) -> Result<HamWalk> {
    let n = walk.n;
    let m = Modulus::new(n)?;
    let g1 = m.add(g, 1);
    if !walk.classes.contains(&g) || walk.classes.contains(&g1) {
        return Err(Error::params(format!(
            "walk classes {:?} cannot be extended by class {g1}",
            walk.classes
        )));
    }
    let ends = [walk.first(), walk.last()];
    let mut pendants: HashMap<ResidueTriple, Vec<ResidueTriple>> = HashMap::new();
    for base in crate::design::step1a_bases(n, g1)? {
        let t = ResidueTriple {
            residues: base,
            class_g: g1,
        };
        let anchor = (0..3).find_map(|p| {
            let mut xs = base.map(|x| x as i64);
            xs[p] -= 3;
            ResidueTriple::new(m, xs).filter(|u| !ends.contains(u))
        });
        let anchor =
            anchor.ok_or_else(|| Error::construction(format!("no class-{g} neighbour for {t}")))?;
        pendants.entry(anchor).or_default().push(t);
    }
    let mut steps = Vec::with_capacity(walk.len() + 2 * pendants.len());
    for &s in &walk.steps {
        steps.push(s);
        if let Some(ts) = pendants.remove(&s) {
            for t in ts {
                steps.push(t);
                steps.push(s);
            }
        }
    }
    if !pendants.is_empty() {
        return Err(Error::construction("pendant anchor missing from walk"));
    }
    let mut classes = walk.classes.clone();
    classes.push(g1);
    Ok(HamWalk { n, classes, steps })
}

/// Walk over H^n_{0..λ/2-1} from `Z = {n-2,1,4}`.
pub fn multi_walk(n: u32, lambda: u32) -> Result<HamWalk> {
    crate::design::check_params(n, lambda)?;
    let t = lambda / 2;
    let base = pair_walk(n, 1)?;
    let m = Modulus::new(n)?;
    let mut steps = Vec::new();
    let mut classes = Vec::new();
    let pairs = t / 2;
    for p in 0..pairs {
        let g = 2 * p + 1;
        let mut w = HamWalk {
            n,
            classes: vec![g - 1, g],
            steps: translate_walk(m, base.steps.clone(), g),
        };
        if t % 2 == 1 && p + 1 == pairs {
            w = extend_triple_walk(&w, g)?;
        }
        if let Some(prev) = steps.last() {
            let prev: &ResidueTriple = prev;
            if !prev.adjacent(&w.first()) {
                return Err(Error::construction(format!(
                    "pair walks for classes {} and {} do not meet",
                    g - 2,
                    g
                )));
            }
        }
        steps.extend(w.steps);
        classes.extend(w.classes);
    }
    Ok(HamWalk { n, classes, steps })
}

/// `Y`, the last vertex of [`multi_walk`].
pub fn multi_walk_end(n: u32, lambda: u32) -> Result<ResidueTriple> {
    let m = Modulus::new(n)?;
    let t = (lambda / 2) as i64;
    let xs = if t % 2 == 0 {
        [t + 1, t - 2, t - 5]
    } else {
        [t, t - 3, t - 6]
    };
    ResidueTriple::new(m, xs).ok_or_else(|| Error::construction("degenerate end triple"))
}

/// Spanning tree traced by a walk, with its first vertex removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkTree {
    /// Vertices in order of first appearance after the removed start.
    pub vertices: Vec<ResidueTriple>,
    pub adj: Vec<Vec<usize>>,
}

impl WalkTree {
    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }
}

pub fn walk_to_tree(walk: &HamWalk) -> Result<WalkTree> {
    let z = walk.first();
    if walk.steps[1..].contains(&z) {
        return Err(Error::construction(format!(
            "{z} is revisited, so it is not a leaf"
        )));
    }
    let graph = step1a_graph(walk.n, &walk.classes)?;
    check_walk_steps(&graph, &walk.steps)?;
    let rest = &walk.steps[1..];
    let mut index: HashMap<ResidueTriple, usize> = HashMap::new();
    let mut vertices = Vec::new();
    for t in rest {
        index.entry(*t).or_insert_with(|| {
            vertices.push(*t);
            vertices.len() - 1
        });
    }
    let mut adj = vec![Vec::new(); vertices.len()];
    for w in rest.windows(2) {
        let (a, b) = (index[&w[0]], index[&w[1]]);
        if !adj[a].contains(&b) {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    let tree = WalkTree { vertices, adj };
    if tree.max_degree() > 6 {
        return Err(Error::construction(format!(
            "tree degree {} exceeds 6",
            tree.max_degree()
        )));
    }
    Ok(tree)
}

/// The Step-1a bases of H^{n-6}_{g-1,g} mapped into H^n_{g-1,g}, g = 1.
pub fn embedding_image(n: u32) -> Result<Vec<(ResidueTriple, ResidueTriple)>> {
    let m = Modulus::new(n)?;
    if n < 11 {
        return Err(Error::params("the embedding needs n >= 11"));
    }
    let small = step1a_graph(n - 6, &[0, 1])?;
    let labels = label_map(n - 6)?;
    small
        .vertices
        .iter()
        .map(|t| {
            let l = labels
                .get(t)
                .ok_or_else(|| Error::construction(format!("{t} has no label")))?;
            Ok((*t, eval_label(m, 1, embed_label(n, *l))?))
        })
        .collect()
}

/// Violation counts for the label-grid adjacency families of H^n_{g-1,g}:
/// `U(i,j)~U(i,j+1)`, `U(i,j)~U(i+1,j+3)` for odd j, the two mirrored
/// families, and `U(m,j)~Ū(m,j)` on the last row for odd j.
pub fn grid_family_violations(n: u32, g: u32) -> Result<[usize; 5]> {
    let m = Modulus::new(n)?;
    let coords: Vec<(i64, i64)> = label_coords(n);
    let sp = specials(n);
    let regular = |c: &(i64, i64)| coords.contains(c) && !sp.contains(c);
    let adj = |a: Label, b: Label| -> Result<bool> {
        Ok(eval_label(m, g, a)?.adjacent(&eval_label(m, g, b)?))
    };
    let mut bad = [0usize; 5];
    let last = last_row(n);
    for &(i, j) in coords.iter().filter(|c| regular(c)) {
        if regular(&(i, j + 1)) {
            bad[0] += !adj(u(i, j), u(i, j + 1))? as usize;
            bad[2] += !adj(ub(i, j), ub(i, j + 1))? as usize;
        }
        if j % 2 == 1 && regular(&(i + 1, j + 3)) {
            bad[1] += !adj(u(i, j), u(i + 1, j + 3))? as usize;
            bad[3] += !adj(ub(i, j), ub(i + 1, j + 3))? as usize;
        }
        if i == last && j % 2 == 1 {
            bad[4] += !adj(u(i, j), ub(i, j))? as usize;
        }
    }
    Ok(bad)
}
