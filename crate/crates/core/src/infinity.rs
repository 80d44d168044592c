//! The blocks of Steps 1c, 2 and 3: arc digraphs, their Euler tours, and a
//! Hamilton path through the per-arc gadgets.

use std::collections::HashSet;
use std::fmt;

use crate::design::{gadget_blocks, Arc, ArcColoring, Block, Color, Point, Step, Triple};
use crate::error::{Error, Result};
use crate::modular::Modulus;

/// Base -2 digits of `s`, least significant first.
pub fn negabinary(s: i64) -> Vec<u8> {
    let mut s = s as i128;
    let mut out = Vec::new();
    while s != 0 {
        let r = s.rem_euclid(2);
        out.push(r as u8);
        s = (s - r) / -2;
    }
    out
}

pub fn negabinary_value(digits: &[u8]) -> i64 {
    digits
        .iter()
        .rev()
        .fold(0i128, |acc, &d| acc * -2 + d as i128) as i64
}

/// `Alpha` follows D'_g and `Beta` follows D'_{g+1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    Alpha,
    Beta,
}

/// Apply a word to `x`, first letter first.
pub fn apply_word(n: u32, g: u32, x: u32, word: &[Letter]) -> Result<u32> {
    let m = Modulus::new(n)?;
    let mut z = m.sub(x, g);
    for l in word {
        z = frame_step(m, z, *l);
    }
    Ok(m.add(z, g))
}

/// `α(z) = -2z`, `β(z) = -2z + 3` in the frame centred at g.
fn frame_step(m: Modulus, z: u32, l: Letter) -> u32 {
    let base = m.neg(m.mul(2, z));
    match l {
        Letter::Alpha => base,
        Letter::Beta => m.add(base, 3),
    }
}

/// A word in α, β taking x to y in D'_g ∪ D'_{g+1}.
///
/// Each hop `z -> z+1` has length `t`, a multiple of the order of -2 mod n,
/// and spells the base -2 digits of `S = (-6)^{-1} mod n` so that the hop
/// adds `3 · (-2S) = 1`.
pub fn connectivity_walk(n: u32, g: u32, x: u32, y: u32) -> Result<Vec<Letter>> {
    let m = Modulus::new(n)?;
    if g >= n || x >= n || y >= n {
        return Err(Error::params(format!("g, x, y must lie in Z_{n}")));
    }
    let s = m.inv(m.neg(6)).expect("gcd(n, 6) = 1");
    let digits = negabinary(s as i64);
    let ord = m.order_of_minus_two() as usize;
    let t = (digits.len() + 1).div_ceil(ord) * ord;
    // position t-1-K carries y_K, where y_0 = 0 and y_K = digit K-1
    let mut hop = vec![Letter::Alpha; t];
    for (k, &d) in digits.iter().enumerate() {
        if d == 1 {
            hop[t - 2 - k] = Letter::Beta;
        }
    }
    let reps = m.sub(y, x) as usize;
    Ok(hop.repeat(reps))
}

/// Arcs traversed by a word from x, skipping the letters that fix the
/// current vertex (α at g, β at g+1).
pub fn word_arcs(n: u32, g: u32, x: u32, word: &[Letter]) -> Result<Vec<(u32, Arc)>> {
    let m = Modulus::new(n)?;
    let mut z = m.sub(x, g);
    let mut out = Vec::new();
    for &l in word {
        let w = frame_step(m, z, l);
        if w != z {
            let class = match l {
                Letter::Alpha => g,
                Letter::Beta => m.add(g, 1),
            };
            out.push((
                class,
                Arc {
                    tail: m.add(z, g),
                    head: m.add(w, g),
                },
            ));
        }
        z = w;
    }
    Ok(out)
}

/// The arcs of D'_0, ..., D'_{t-1}, sorted by class and tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnionDigraph {
    pub n: u32,
    pub classes: u32,
    pub arcs: Vec<(u32, Arc)>,
}

impl UnionDigraph {
    pub fn new(n: u32, classes: u32) -> Result<UnionDigraph> {
        let m = Modulus::new(n)?;
        if classes == 0 || classes > n {
            return Err(Error::params(format!("class count {classes} out of range")));
        }
        let mut arcs = Vec::with_capacity(classes as usize * (n as usize - 1));
        for g in 0..classes {
            for h in 1..n {
                arcs.push((g, crate::design::arc_for(m, g, h)));
            }
        }
        arcs.sort_by_key(|&(g, a)| (g, a.tail));
        Ok(UnionDigraph { n, classes, arcs })
    }

    pub fn is_balanced(&self) -> bool {
        let mut d = vec![0i64; self.n as usize];
        for (_, a) in &self.arcs {
            d[a.tail as usize] += 1;
            d[a.head as usize] -= 1;
        }
        d.iter().all(|&x| x == 0)
    }

    /// Strong connectivity of the arcs whose class passes `keep`.
    pub fn strongly_connected_on(&self, keep: impl Fn(u32) -> bool) -> bool {
        let n = self.n as usize;
        let mut fwd = vec![Vec::new(); n];
        let mut back = vec![Vec::new(); n];
        for &(g, a) in &self.arcs {
            if keep(g) {
                fwd[a.tail as usize].push(a.head as usize);
                back[a.head as usize].push(a.tail as usize);
            }
        }
        let reach_all = |adj: &Vec<Vec<usize>>| {
            let mut seen = vec![false; n];
            let mut stack = vec![0];
            seen[0] = true;
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            seen.iter().all(|&s| s)
        };
        reach_all(&fwd) && reach_all(&back)
    }

    pub fn to_dot(&self, coloring: Option<&ArcColoring>) -> String {
        let labels: Vec<String> = (0..self.n).map(|x| x.to_string()).collect();
        let mut out = String::from("digraph union {\n");
        for (i, l) in labels.iter().enumerate() {
            out.push_str(&format!("  v{i} [label=\"{l}\"];\n"));
        }
        for &(g, a) in &self.arcs {
            let color = match coloring.map(|c| c.color(g, a.tail)) {
                Some(Color::Red) => ", color=red",
                Some(Color::Blue) => ", color=blue",
                None => "",
            };
            out.push_str(&format!(
                "  v{} -> v{} [label=\"{g}\"{color}];\n",
                a.tail, a.head
            ));
        }
        out.push_str("}\n");
        out
    }
}

/// A closed arc sequence using every arc once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerTour {
    pub arcs: Vec<(u32, Arc)>,
}

impl EulerTour {
    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        (0..self.arcs.len())
            .all(|i| self.arcs[i].1.head == self.arcs[(i + 1) % self.arcs.len()].1.tail)
    }
}

fn joins_terminal(n: u32, a: Arc) -> bool {
    let t = n - 2;
    (a.tail == 4 && a.head == t) || (a.tail == t && a.head == 4)
}

/// Hierholzer's algorithm, then rotated so the last arc joins 4 and n-2.
///
/// `terminal` picks among the arcs joining 4 and n-2, in tour order.
pub fn euler_tour_with(d: &UnionDigraph, terminal: usize) -> Result<EulerTour> {
    if d.classes < 2 {
        return Err(Error::params("the tour needs at least two classes"));
    }
    let n = d.n as usize;
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, (_, a)) in d.arcs.iter().enumerate() {
        out[a.tail as usize].push(i);
    }
    let mut ptr = vec![0usize; n];
    let start = d.arcs[0].1.tail as usize;
    let mut stack: Vec<(usize, Option<usize>)> = vec![(start, None)];
    let mut circuit = Vec::with_capacity(d.arcs.len());
    while let Some(&(v, _)) = stack.last() {
        if ptr[v] < out[v].len() {
            let i = out[v][ptr[v]];
            ptr[v] += 1;
            stack.push((d.arcs[i].1.head as usize, Some(i)));
        } else {
            let (_, a) = stack.pop().unwrap();
            if let Some(i) = a {
                circuit.push(d.arcs[i]);
            }
        }
    }
    circuit.reverse();
    if circuit.len() != d.arcs.len() {
        return Err(Error::construction("arc digraph is not connected"));
    }
    let ends: Vec<usize> = (0..circuit.len())
        .filter(|&i| joins_terminal(d.n, circuit[i].1))
        .collect();
    let &p = ends.get(terminal).ok_or_else(|| {
        Error::construction(format!(
            "no arc joining 4 and {} (choice {terminal} of {})",
            d.n - 2,
            ends.len()
        ))
    })?;
    circuit.rotate_left(p + 1);
    Ok(EulerTour { arcs: circuit })
}

pub fn euler_tour(d: &UnionDigraph) -> Result<EulerTour> {
    euler_tour_with(d, 0)
}

/// Number of arcs joining 4 and n-2 in the digraph.
pub fn terminal_choices(d: &UnionDigraph) -> usize {
    d.arcs
        .iter()
        .filter(|(_, a)| joins_terminal(d.n, *a))
        .count()
}

/// The six blocks of one arc: two Step-1c centres and four Step-2 leaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetBlocks {
    pub g: u32,
    pub arc: Arc,
    pub color: Color,
    pub blocks: [Block; 6],
}

impl GadgetBlocks {
    pub fn new(g: u32, arc: Arc, coloring: &ArcColoring) -> GadgetBlocks {
        let color = coloring.color(g, arc.tail);
        GadgetBlocks {
            g,
            arc,
            color,
            blocks: gadget_blocks(g, arc, color),
        }
    }

    /// Leaves (indices 2..6) meeting the centre `c` (0 or 1) in two points.
    fn leaves_of(&self, c: usize) -> Vec<usize> {
        (2..6)
            .filter(|&l| shared(&self.blocks[c].points, &self.blocks[l].points) == 2)
            .collect()
    }

    /// Each centre has exactly two of the leaves, the centres are adjacent,
    /// and no two leaves are adjacent.
    pub fn is_double_star(&self) -> bool {
        let (l0, l1) = (self.leaves_of(0), self.leaves_of(1));
        let mut all: Vec<usize> = l0.iter().chain(&l1).copied().collect();
        all.sort_unstable();
        let leaves_apart = (2..6).all(|a| {
            (a + 1..6).all(|b| shared(&self.blocks[a].points, &self.blocks[b].points) != 2)
        });
        l0.len() == 2
            && l1.len() == 2
            && all == vec![2, 3, 4, 5]
            && shared(&self.blocks[0].points, &self.blocks[1].points) == 2
            && leaves_apart
    }

    /// The 8 ways to name the blocks `a1..a4, b1, b2`: `b1` is either
    /// centre, `a1, a2` its leaves in either order, `a3, a4` likewise.
    fn labelings(&self) -> Vec<[usize; 6]> {
        let mut out = Vec::with_capacity(8);
        for (b1, b2) in [(0, 1), (1, 0)] {
            let la = self.leaves_of(b1);
            let lb = self.leaves_of(b2);
            for p in [[la[0], la[1]], [la[1], la[0]]] {
                for q in [[lb[0], lb[1]], [lb[1], lb[0]]] {
                    out.push([p[0], p[1], q[0], q[1], b1, b2]);
                }
            }
        }
        out
    }
}

fn shared(a: &Triple, b: &Triple) -> usize {
    a.iter().filter(|p| b.contains(p)).count()
}

const A1: usize = 0;
const A2: usize = 1;
const A3: usize = 2;
const A4: usize = 3;
const B1: usize = 4;
const B2: usize = 5;

type Slot = (usize, usize);

fn pattern(i: i64) -> [usize; 3] {
    match i.rem_euclid(4) {
        0 => [A1, B1, A2],
        1 => [A3, B2, A4],
        2 => [A4, B2, A3],
        _ => [A2, B1, A1],
    }
}

fn closing_three(k: usize) -> [Slot; 14] {
    let (k3, k2, k1) = (k - 3, k - 2, k - 1);
    match k % 4 {
        0 => [
            (A4, k3),
            (A4, k2),
            (A4, k1),
            (B2, k1),
            (A3, k1),
            (A2, k2),
            (B1, k2),
            (B2, k2),
            (A3, k2),
            (A2, k1),
            (B1, k1),
            (A1, k1),
            (A1, k2),
            (A1, k3),
        ],
        1 => [
            (A3, k3),
            (A2, k2),
            (A3, k1),
            (B2, k1),
            (A4, k1),
            (A4, k2),
            (B2, k2),
            (B1, k2),
            (A1, k2),
            (A1, k1),
            (B1, k1),
            (A2, k1),
            (A3, k2),
            (A2, k3),
        ],
        2 => [
            (A1, k3),
            (A1, k2),
            (A1, k1),
            (B1, k1),
            (A2, k1),
            (A3, k2),
            (B2, k2),
            (B1, k2),
            (A2, k2),
            (A3, k1),
            (B2, k1),
            (A4, k1),
            (A4, k2),
            (A4, k3),
        ],
        _ => [
            (A2, k3),
            (A3, k2),
            (A2, k1),
            (B1, k1),
            (A1, k1),
            (A1, k2),
            (B1, k2),
            (B2, k2),
            (A4, k2),
            (A4, k1),
            (B2, k1),
            (A3, k1),
            (A2, k2),
            (A3, k3),
        ],
    }
}

/// `p_0 … p_{k-3}`, the inner part of `P3`, then `p̄_{k-3} … p̄_0`.
fn trail_sequence(k: usize) -> Vec<Slot> {
    let mut s = Vec::with_capacity(6 * k);
    for i in 0..k - 2 {
        s.extend(pattern(i as i64).map(|r| (r, i)));
    }
    s.extend_from_slice(&closing_three(k)[1..13]);
    for i in (0..k - 2).rev() {
        let p = if i % 4 == 1 || i % 4 == 3 {
            pattern(i as i64 - 1)
        } else {
            pattern(i as i64 + 1)
        };
        s.extend(p.map(|r| (r, i)));
    }
    s
}

/// Starts in arc 0 and ends in arc 1.
const TWO_ARC: [Slot; 12] = [
    (A1, 0),
    (B1, 0),
    (A2, 0),
    (A3, 1),
    (B2, 1),
    (A4, 1),
    (A4, 0),
    (B2, 0),
    (A3, 0),
    (A2, 1),
    (B1, 1),
    (A1, 1),
];

/// Starts and ends in arc 0.
const SAME_ARC: [Slot; 12] = [
    (A1, 0),
    (A1, 1),
    (B1, 1),
    (A2, 1),
    (A3, 0),
    (B2, 0),
    (B1, 0),
    (A2, 0),
    (A3, 1),
    (B2, 1),
    (A4, 1),
    (A4, 0),
];

/// Requirement on the first block of a gadget path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StartAt {
    Any,
    Exactly(Triple),
    AdjacentTo(Triple),
}

impl StartAt {
    fn allows(&self, b: &Triple) -> bool {
        match self {
            StartAt::Any => true,
            StartAt::Exactly(t) => t == b,
            StartAt::AdjacentTo(t) => shared(t, b) == 2,
        }
    }
}

/// Pick one labeling per gadget so that every step of `seq` joins blocks
/// sharing two points. Steps only join equal or neighbouring gadgets, so a
/// left-to-right pass over the gadgets decides feasibility.
fn solve(seq: &[Slot], gadgets: &[GadgetBlocks], start: StartAt) -> Option<Vec<Block>> {
    let k = gadgets.len();
    let labs: Vec<Vec<[usize; 6]>> = gadgets.iter().map(GadgetBlocks::labelings).collect();
    let block = |i: usize, lab: &[usize; 6], role: usize| &gadgets[i].blocks[lab[role]];
    let steps: Vec<(Slot, Slot)> = seq.windows(2).map(|w| (w[0], w[1])).collect();
    debug_assert!(steps.iter().all(|((_, a), (_, b))| a.abs_diff(*b) <= 1));
    let inside_ok = |i: usize, lab: &[usize; 6]| {
        let steps_ok = steps.iter().all(|&((x, a), (y, b))| {
            a != i || b != i || shared(&block(i, lab, x).points, &block(i, lab, y).points) == 2
        });
        let (r0, a0) = seq[0];
        steps_ok && (a0 != i || start.allows(&block(i, lab, r0).points))
    };
    let between_ok = |i: usize, l: &[usize; 6], r: &[usize; 6]| {
        steps.iter().all(|&((x, a), (y, b))| {
            let pick = |role, at| {
                if at == i {
                    block(i, l, role)
                } else {
                    block(i + 1, r, role)
                }
            };
            if (a == i && b == i + 1) || (a == i + 1 && b == i) {
                shared(&pick(x, a).points, &pick(y, b).points) == 2
            } else {
                true
            }
        })
    };
    let mut feasible: Vec<Vec<usize>> = Vec::with_capacity(k);
    let mut back: Vec<Vec<usize>> = Vec::with_capacity(k);
    feasible.push((0..8).filter(|&li| inside_ok(0, &labs[0][li])).collect());
    back.push(vec![usize::MAX; 8]);
    for i in 1..k {
        let mut f = Vec::new();
        let mut bk = vec![usize::MAX; 8];
        for mi in 0..8 {
            if !inside_ok(i, &labs[i][mi]) {
                continue;
            }
            if let Some(&li) = feasible[i - 1]
                .iter()
                .find(|&&li| between_ok(i - 1, &labs[i - 1][li], &labs[i][mi]))
            {
                f.push(mi);
                bk[mi] = li;
            }
        }
        feasible.push(f);
        back.push(bk);
    }
    let mut choice = vec![*feasible[k - 1].first()?];
    for i in (1..k).rev() {
        choice.push(back[i][*choice.last().unwrap()]);
    }
    choice.reverse();
    Some(
        seq.iter()
            .map(|&(role, i)| *block(i, &labs[i][choice[i]], role))
            .collect(),
    )
}

fn check_trail(trail: &[(u32, Arc)]) -> Result<()> {
    for w in trail.windows(2) {
        if w[0].1.head != w[1].1.tail {
            return Err(Error::params(format!(
                "arcs {} and {} are not consecutive",
                w[0].1, w[1].1
            )));
        }
    }
    Ok(())
}

fn gadgets_for(trail: &[(u32, Arc)], coloring: &ArcColoring) -> Vec<GadgetBlocks> {
    trail
        .iter()
        .map(|&(g, a)| GadgetBlocks::new(g, a, coloring))
        .collect()
}

/// Hamilton path through the 12 blocks of two consecutive arcs, from a
/// Step-2 block of `e1` to a Step-2 block of `e2`.
pub fn two_arc_path(
    e1: (u32, Arc),
    e2: (u32, Arc),
    coloring: &ArcColoring,
    start: StartAt,
) -> Result<Vec<Block>> {
    check_trail(&[e1, e2])?;
    solve(&TWO_ARC, &gadgets_for(&[e1, e2], coloring), start)
        .ok_or_else(|| Error::construction(format!("no two-arc path for {} {}", e1.1, e2.1)))
}

/// Hamilton path through the blocks of a trail of `k >= 3` arcs, starting
/// and ending at Step-2 blocks of the first arc.
pub fn trail_path(
    trail: &[(u32, Arc)],
    coloring: &ArcColoring,
    start: StartAt,
) -> Result<Vec<Block>> {
    if trail.len() < 3 {
        return Err(Error::params("trail_path needs at least 3 arcs"));
    }
    check_trail(trail)?;
    solve(
        &trail_sequence(trail.len()),
        &gadgets_for(trail, coloring),
        start,
    )
    .ok_or_else(|| Error::construction(format!("no path for a trail of {} arcs", trail.len())))
}

/// Path over the gadgets of `arcs` whose ends both lie in `arcs[0]`.
///
/// `arcs` is a trail read in either direction; two arcs use the short
/// pattern, three or more the trail pattern.
fn looped_segment(
    arcs: &[(u32, Arc)],
    coloring: &ArcColoring,
    start: StartAt,
) -> Result<Vec<Block>> {
    let gadgets = gadgets_for(arcs, coloring);
    let seq: Vec<Slot> = match arcs.len() {
        0 | 1 => return Err(Error::construction("a single arc has no spanning path")),
        2 => SAME_ARC.to_vec(),
        k => trail_sequence(k),
    };
    solve(&seq, &gadgets, start).ok_or_else(|| {
        Error::construction(format!(
            "no looped path over {} arcs starting at {}",
            arcs.len(),
            arcs[0].1
        ))
    })
}

fn paired_segment(
    arcs: &[(u32, Arc)],
    coloring: &ArcColoring,
    mut start: StartAt,
) -> Result<Vec<Block>> {
    let mut out = Vec::with_capacity(6 * arcs.len());
    for pair in arcs.chunks(2) {
        let part = two_arc_path(pair[0], pair[1], coloring, start)?;
        start = StartAt::AdjacentTo(part.last().unwrap().points);
        out.extend(part);
    }
    Ok(out)
}

/// Hamilton path over the Step-1c, 2 and 3 blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RPath {
    pub blocks: Vec<Block>,
    /// Class whose arc closes the tour.
    pub terminal_class: u32,
}

impl RPath {
    pub fn first(&self) -> &Block {
        &self.blocks[0]
    }

    pub fn last(&self) -> &Block {
        self.blocks.last().unwrap()
    }
}

/// Which tour arc and which endpoint block to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RPathOptions {
    /// Required first block; must be a Step-2 block of a used arc.
    pub start: Option<Triple>,
    /// Index among the arcs joining 4 and n-2 that may close the tour.
    pub terminal: usize,
}

/// Step-2 block of a used arc with the given points, if any.
pub fn find_step2(n: u32, lambda: u32, coloring: &ArcColoring, pts: &Triple) -> Option<(u32, Arc)> {
    let m = Modulus::new(n).ok()?;
    let fin: Vec<u32> = pts.iter().filter_map(|p| p.residue()).collect();
    if fin.len() != 2 || fin[0] == fin[1] {
        return None;
    }
    for g in 0..lambda / 2 {
        for (a, b) in [(fin[0], fin[1]), (fin[1], fin[0])] {
            let h = m.sub(a, g);
            if h == 0 {
                continue;
            }
            let arc = crate::design::arc_for(m, g, h);
            if arc.head == b {
                let gad = GadgetBlocks::new(g, arc, coloring);
                if gad.blocks[2..].iter().any(|bl| &bl.points == pts) {
                    return Some((g, arc));
                }
            }
        }
    }
    None
}

pub fn r_path(n: u32, lambda: u32, coloring: &ArcColoring, opts: RPathOptions) -> Result<RPath> {
    crate::design::check_params(n, lambda)?;
    let t = lambda / 2;
    if coloring.n() != n || coloring.classes() < t {
        return Err(Error::params("coloring does not cover the used classes"));
    }
    let d = UnionDigraph::new(n, t)?;
    let tour = euler_tour_with(&d, opts.terminal)?;
    let e = &tour.arcs;
    let k = e.len();
    let terminal_class = e[k - 1].0;

    // position of A's arc, 0-based
    let (l, start) = match opts.start {
        None => (0, StartAt::Any),
        Some(pts) => {
            let arc = find_step2(n, lambda, coloring, &pts).ok_or_else(|| {
                Error::InvalidEndpoint(format!("{pts:?} is not a Step-2 block of a used arc"))
            })?;
            let l = e.iter().position(|x| *x == arc).unwrap();
            (l, StartAt::Exactly(pts))
        }
    };

    let mut path: Vec<Block> = Vec::with_capacity(k * 6 + 4 * t as usize);
    let reversed = |s: &[(u32, Arc)]| s.iter().rev().copied().collect::<Vec<_>>();
    if l == 0 {
        path.extend(looped_segment(&e[..k - 2], coloring, start)?);
        let tail = [e[k - 1], e[k - 2]];
        let next = StartAt::AdjacentTo(path.last().unwrap().points);
        path.extend(looped_segment(&tail, coloring, next)?);
    } else if (k - 1 - l) % 2 == 0 {
        path.extend(looped_segment(&reversed(&e[..=l]), coloring, start)?);
        let next = StartAt::AdjacentTo(path.last().unwrap().points);
        path.extend(paired_segment(&e[l + 1..], coloring, next)?);
    } else {
        path.extend(looped_segment(&reversed(&e[1..=l]), coloring, start)?);
        let next = StartAt::AdjacentTo(path.last().unwrap().points);
        path.extend(paired_segment(&e[l + 1..k - 1], coloring, next)?);
        let next = StartAt::AdjacentTo(path.last().unwrap().points);
        path.extend(looped_segment(&[e[k - 1], e[0]], coloring, next)?);
    }

    for g in 0..t {
        splice_k4(&mut path, g)?;
    }
    let r = RPath {
        blocks: path,
        terminal_class,
    };
    check_r_path(n, lambda, coloring, &r)?;
    Ok(r)
}

fn step3_blocks(g: u32) -> [Triple; 4] {
    let f = |b| Point::fin(g, b);
    [
        [Point::INF0, Point::INF1, f(0)],
        [Point::INF0, Point::INF1, f(1)],
        [Point::INF0, f(0), f(1)],
        [Point::INF1, f(0), f(1)],
    ]
    .map(crate::design::triple)
}

fn k4_orders() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if (0..4).all(|x| p.contains(&x)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Insert the four Step-3 blocks of class g between two consecutive
/// blocks of one gadget whose arc has tail g.
fn splice_k4(path: &mut Vec<Block>, g: u32) -> Result<()> {
    let k4 = step3_blocks(g);
    let same_gadget = |x: &Block, y: &Block| {
        matches!((x.origin.arc(), y.origin.arc()), (Some(a), Some(b))
            if a == b && a.tail == g && x.origin.class() == y.origin.class())
    };
    for i in 0..path.len().saturating_sub(1) {
        if !same_gadget(&path[i], &path[i + 1]) {
            continue;
        }
        let (left, right) = (path[i].points, path[i + 1].points);
        let order = k4_orders()
            .into_iter()
            .find(|o| shared(&left, &k4[o[0]]) == 2 && shared(&k4[o[3]], &right) == 2);
        if let Some(o) = order {
            let blocks = o.map(|x| Block {
                points: k4[x],
                origin: crate::design::BlockOrigin::Step3 {
                    g,
                    variant: x as u8,
                },
            });
            path.splice(i + 1..i + 1, blocks);
            return Ok(());
        }
    }
    Err(Error::construction(format!(
        "no splice site for the Step-3 blocks of class {g}"
    )))
}

/// Coverage of the Step-1c, 2 and 3 blocks, each once, and two shared
/// points at every step.
pub fn check_r_path(n: u32, lambda: u32, coloring: &ArcColoring, r: &RPath) -> Result<()> {
    let mut want: HashSet<Triple> = HashSet::new();
    for g in 0..lambda / 2 {
        for b in crate::design::schreiber_class(n, g, coloring)? {
            if matches!(b.origin.step(), Step::S1c | Step::S2 | Step::S3) {
                want.insert(b.points);
            }
        }
    }
    let got: HashSet<Triple> = r.blocks.iter().map(|b| b.points).collect();
    if got.len() != r.blocks.len() || got != want {
        return Err(Error::construction(format!(
            "path has {} blocks ({} distinct), expected {}",
            r.blocks.len(),
            got.len(),
            want.len()
        )));
    }
    for (i, w) in r.blocks.windows(2).enumerate() {
        if shared(&w[0].points, &w[1].points) != 2 {
            return Err(Error::construction(format!(
                "path step {i}: {} then {}",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Letter::Alpha => "α",
            Letter::Beta => "β",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negabinary_examples() {
        assert_eq!(negabinary(0), Vec::<u8>::new());
        assert_eq!(negabinary(6), vec![0, 1, 0, 1, 1]);
        assert_eq!(negabinary(-1), vec![1, 1]);
        for s in -300..300 {
            assert_eq!(negabinary_value(&negabinary(s)), s);
        }
    }

    #[test]
    fn connectivity_words() {
        for n in [5u32, 7, 11, 13] {
            for g in 0..2 {
                for x in 0..n {
                    for y in 0..n {
                        let w = connectivity_walk(n, g, x, y).unwrap();
                        assert_eq!(apply_word(n, g, x, &w).unwrap(), y);
                    }
                }
            }
        }
        assert!(connectivity_walk(7, 0, 3, 3).unwrap().is_empty());
        let w = connectivity_walk(5, 0, 1, 2).unwrap();
        assert_eq!(w.len() % 4, 0);
    }

    #[test]
    fn word_arcs_exist() {
        let n = 7;
        let w = connectivity_walk(n, 0, 1, 5).unwrap();
        let arcs = word_arcs(n, 0, 1, &w).unwrap();
        let d = UnionDigraph::new(n, 2).unwrap();
        for (g, a) in &arcs {
            assert!(d.arcs.contains(&(*g, *a)));
        }
        for p in arcs.windows(2) {
            assert_eq!(p[0].1.head, p[1].1.tail);
        }
        assert_eq!(arcs.first().unwrap().1.tail, 1);
        assert_eq!(arcs.last().unwrap().1.head, 5);
    }

    #[test]
    fn digraph_properties() {
        for n in [5u32, 7, 11, 13, 17, 19] {
            let d = UnionDigraph::new(n, n).unwrap();
            assert!(d.is_balanced());
            for g in 0..n {
                let g1 = (g + 1) % n;
                assert!(
                    d.strongly_connected_on(|c| c == g || c == g1),
                    "n={n} g={g}"
                );
            }
        }
        let single = UnionDigraph::new(7, 1).unwrap();
        assert!(!single.strongly_connected_on(|_| true));
    }

    #[test]
    fn tours() {
        for (n, t, len) in [(5u32, 2u32, 8usize), (7, 2, 12), (11, 4, 40)] {
            let d = UnionDigraph::new(n, t).unwrap();
            let tour = euler_tour(&d).unwrap();
            assert_eq!(tour.len(), len);
            assert!(tour.is_closed());
            assert!(joins_terminal(n, tour.arcs.last().unwrap().1));
            let mut a = tour.arcs.clone();
            a.sort_by_key(|&(g, a)| (g, a.tail));
            assert_eq!(a, d.arcs);
        }
        let d = UnionDigraph::new(5, 2).unwrap();
        assert_eq!(
            euler_tour(&d).unwrap().arcs.last().unwrap(),
            &(0, Arc { tail: 3, head: 4 })
        );
        assert!(euler_tour(&UnionDigraph::new(5, 1).unwrap()).is_err());
    }

    #[test]
    fn gadgets_are_double_stars() {
        for color in [Color::Red, Color::Blue] {
            let arc = Arc { tail: 1, head: 3 };
            let g = GadgetBlocks {
                g: 0,
                arc,
                color,
                blocks: gadget_blocks(0, arc, color),
            };
            assert!(g.is_double_star());
        }
    }

    #[test]
    fn sequences_cover_every_slot() {
        for k in 3..12 {
            let s = trail_sequence(k);
            let set: HashSet<_> = s.iter().collect();
            assert_eq!(s.len(), 6 * k);
            assert_eq!(set.len(), 6 * k);
            assert_eq!(s[0].1, 0);
            assert_eq!(s.last().unwrap().1, 0);
        }
    }

    fn all_colorings_paths(n: u32) {
        let c = ArcColoring::default_rule(n, 2).unwrap();
        let d = UnionDigraph::new(n, 2).unwrap();
        let tour = euler_tour(&d).unwrap();
        let k = tour.len();
        let e = &tour.arcs;
        for i in 0..k {
            let pair = (e[i], e[(i + 1) % k]);
            let p = two_arc_path(pair.0, pair.1, &c, StartAt::Any).unwrap();
            assert_eq!(p.len(), 12);
            assert!(p
                .windows(2)
                .all(|w| shared(&w[0].points, &w[1].points) == 2));
            assert_eq!(p[0].origin.arc(), Some(pair.0 .1));
            assert_eq!(p[11].origin.arc(), Some(pair.1 .1));
            assert_eq!(p[0].origin.step(), Step::S2);
            assert_eq!(p[11].origin.step(), Step::S2);
        }
        for len in 3..=6 {
            let trail: Vec<_> = (0..len).map(|i| e[i % k]).collect();
            let p = trail_path(&trail, &c, StartAt::Any).unwrap();
            assert_eq!(p.len(), 6 * len);
            assert!(p
                .windows(2)
                .all(|w| shared(&w[0].points, &w[1].points) == 2));
        }
    }

    #[test]
    fn gadget_paths() {
        all_colorings_paths(5);
        all_colorings_paths(7);
    }

    #[test]
    fn r_paths() {
        for (n, lambda, len) in [
            (5u32, 4u32, 56usize),
            (7, 4, 80),
            (11, 6, 3 * 64),
            (13, 8, 4 * 76),
        ] {
            let c = ArcColoring::default_rule(n, lambda / 2).unwrap();
            let r = r_path(n, lambda, &c, RPathOptions::default()).unwrap();
            assert_eq!(r.blocks.len(), len);
            let last = r.last().points;
            let fin: Vec<u32> = last.iter().filter_map(|p| p.residue()).collect();
            assert!(last[0].is_infinite());
            let mut fin = fin;
            fin.sort_unstable();
            assert_eq!(fin, vec![4.min(n - 2), 4.max(n - 2)]);
        }
    }

    #[test]
    fn r_path_from_each_step2_block() {
        let (n, lambda) = (7, 4);
        let c = ArcColoring::default_rule(n, 2).unwrap();
        let mut ok = 0;
        let mut total = 0;
        for g in 0..2 {
            for a in crate::design::arcs_of(n, g).unwrap() {
                let gad = GadgetBlocks::new(g, a, &c);
                for b in &gad.blocks[2..] {
                    total += 1;
                    let opts = RPathOptions {
                        start: Some(b.points),
                        terminal: 0,
                    };
                    if let Ok(r) = r_path(n, lambda, &c, opts) {
                        assert_eq!(r.first().points, b.points);
                        ok += 1;
                    }
                }
            }
        }
        assert!(ok * 4 >= total * 3, "{ok} of {total}");
    }

    #[test]
    fn bad_start_is_rejected() {
        let c = ArcColoring::default_rule(5, 2).unwrap();
        let pts = crate::design::triple([Point::INF0, Point::fin(0, 0), Point::fin(1, 0)]);
        // (0,1) is an arc of class 2 or 3 only
        let err = r_path(
            5,
            4,
            &c,
            RPathOptions {
                start: Some(pts),
                terminal: 0,
            },
        );
        assert!(matches!(err, Err(Error::InvalidEndpoint(_))), "{err:?}");
    }
}
