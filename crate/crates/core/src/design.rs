//! Ground-set types and the class-by-class block construction.

use std::collections::VecDeque;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::modular::Modulus;

/// A point of Z_n x {0,1} together with the two infinity points.
///
/// The derived order puts `Infinity(0) < Infinity(1) <` every finite point,
/// and finite points compare by `(residue, bit)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point {
    Infinity(u8),
    Finite { residue: u32, bit: u8 },
}

impl Point {
    pub const INF0: Point = Point::Infinity(0);
    pub const INF1: Point = Point::Infinity(1);

    #[inline]
    pub fn fin(residue: u32, bit: u8) -> Point {
        Point::Finite { residue, bit }
    }

    pub fn inf(index: u8) -> Point {
        Point::Infinity(index)
    }

    pub fn residue(self) -> Option<u32> {
        match self {
            Point::Finite { residue, .. } => Some(residue),
            Point::Infinity(_) => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Point::Infinity(_))
    }

    /// Dense index in `0..2n+2`, following the point order.
    pub fn index(self) -> usize {
        match self {
            Point::Infinity(i) => i as usize,
            Point::Finite { residue, bit } => 2 + 2 * residue as usize + bit as usize,
        }
    }

    pub fn from_index(idx: usize) -> Point {
        if idx < 2 {
            Point::Infinity(idx as u8)
        } else {
            Point::fin(((idx - 2) / 2) as u32, ((idx - 2) % 2) as u8)
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity(i) => write!(f, "inf{i}"),
            Point::Finite { residue, bit } => write!(f, "{residue}.{bit}"),
        }
    }
}

impl std::str::FromStr for Point {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inf0" => return Ok(Point::INF0),
            "inf1" => return Ok(Point::INF1),
            _ => {}
        }
        let bad = || Error::params(format!("malformed point {s:?}"));
        let (r, b) = s.split_once('.').ok_or_else(bad)?;
        let residue: u32 = r.parse().map_err(|_| bad())?;
        let bit = match b {
            "0" => 0,
            "1" => 1,
            _ => return Err(bad()),
        };
        Ok(Point::fin(residue, bit))
    }
}

/// Three points in increasing order.
pub type Triple = [Point; 3];

/// Sort three points into canonical order. Panics on repeated points.
pub fn triple(mut pts: [Point; 3]) -> Triple {
    pts.sort_unstable();
    assert!(
        pts[0] != pts[1] && pts[1] != pts[2],
        "block points must be distinct: {pts:?}"
    );
    pts
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Color {
    Red,
    Blue,
}

impl Color {
    pub fn flip(self) -> Color {
        match self {
            Color::Red => Color::Blue,
            Color::Blue => Color::Red,
        }
    }
}

/// An arc `tail -> head` of D'_g.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arc {
    pub tail: u32,
    pub head: u32,
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}->{})", self.tail, self.head)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Step {
    S1a,
    S1b,
    S1c,
    S2,
    S3,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Step::S1a => "1a",
            Step::S1b => "1b",
            Step::S1c => "1c",
            Step::S2 => "2",
            Step::S3 => "3",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockOrigin {
    Step1a {
        g: u32,
        base: [u32; 3],
    },
    /// `mask` bit 2 applies to the smallest base residue, bit 0 to the largest.
    Step1b {
        g: u32,
        base: [u32; 3],
        mask: u8,
    },
    Step1c {
        g: u32,
        arc: Arc,
        variant: u8,
    },
    Step2 {
        g: u32,
        arc: Arc,
        color: Color,
        variant: u8,
    },
    Step3 {
        g: u32,
        variant: u8,
    },
}

impl BlockOrigin {
    pub fn step(&self) -> Step {
        match self {
            BlockOrigin::Step1a { .. } => Step::S1a,
            BlockOrigin::Step1b { .. } => Step::S1b,
            BlockOrigin::Step1c { .. } => Step::S1c,
            BlockOrigin::Step2 { .. } => Step::S2,
            BlockOrigin::Step3 { .. } => Step::S3,
        }
    }

    pub fn class(&self) -> u32 {
        match *self {
            BlockOrigin::Step1a { g, .. }
            | BlockOrigin::Step1b { g, .. }
            | BlockOrigin::Step1c { g, .. }
            | BlockOrigin::Step2 { g, .. }
            | BlockOrigin::Step3 { g, .. } => g,
        }
    }

    pub fn arc(&self) -> Option<Arc> {
        match *self {
            BlockOrigin::Step1c { arc, .. } | BlockOrigin::Step2 { arc, .. } => Some(arc),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Block {
    pub points: Triple,
    pub origin: BlockOrigin,
}

impl Block {
    fn new(points: [Point; 3], origin: BlockOrigin) -> Block {
        Block {
            points: triple(points),
            origin,
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        self.points.contains(&p)
    }

    fn sort_key(&self) -> (Step, u32, Triple) {
        (self.origin.step(), self.origin.class(), self.points)
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.points;
        write!(f, "{{{a},{b},{c}}}")
    }
}

/// The arcs of D'_g, indexed by `h = tail - g` in `1..n`.
///
/// Arc `h` runs `h+g -> -2h+g`; its opposite is the arc for `-h`.
pub fn arcs_of(n: u32, g: u32) -> Result<Vec<Arc>> {
    let m = Modulus::new(n)?;
    if g >= n {
        return Err(Error::params(format!("class {g} not in Z_{n}")));
    }
    Ok((1..n).map(|h| arc_for(m, g, h)).collect())
}

pub(crate) fn arc_for(m: Modulus, g: u32, h: u32) -> Arc {
    let tail = m.add(h, g);
    let head = m.add(m.neg(m.mul(2, h)), g);
    Arc { tail, head }
}

/// Opposite arc pairs of D'_g, each pair listed once as `(arc(h), arc(-h))`
/// with `h <= (n-1)/2`.
pub fn opposite_pairs(n: u32, g: u32) -> Result<Vec<(Arc, Arc)>> {
    let m = Modulus::new(n)?;
    if g >= n {
        return Err(Error::params(format!("class {g} not in Z_{n}")));
    }
    Ok((1..=(n - 1) / 2)
        .map(|h| (arc_for(m, g, h), arc_for(m, g, m.neg(h))))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColoringMode {
    Default,
    Seeded(u64),
}

/// Red/blue colors for every arc of D'_0, ..., D'_{t-1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcColoring {
    n: u32,
    mode: ColoringMode,
    /// `colors[g][h]`, entry `h = 0` unused.
    colors: Vec<Vec<Color>>,
}

impl ArcColoring {
    /// Arc `h` is red iff `1 <= h <= (n-1)/2`.
    pub fn default_rule(n: u32, classes: u32) -> Result<ArcColoring> {
        Modulus::new(n)?;
        check_class_count(n, classes)?;
        let half = (n - 1) / 2;
        let row: Vec<Color> = (0..n)
            .map(|h| if h <= half { Color::Red } else { Color::Blue })
            .collect();
        Ok(ArcColoring {
            n,
            mode: ColoringMode::Default,
            colors: vec![row; classes as usize],
        })
    }

    /// A pseudo-random valid coloring.
    ///
    /// Arc `(g,h)` must differ from its opposite `(g,-h)` and from its
    /// reverse `(g-h,-h)` whenever that class is in use. These two matchings
    /// make a bipartite constraint graph, so each component gets one random
    /// coin flip and the rest is forced.
    pub fn seeded(n: u32, classes: u32, seed: u64) -> Result<ArcColoring> {
        let m = Modulus::new(n)?;
        check_class_count(n, classes)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut slot: Vec<Vec<Option<Color>>> = vec![vec![None; n as usize]; classes as usize];
        for g0 in 0..classes {
            for h0 in 1..n {
                if slot[g0 as usize][h0 as usize].is_some() {
                    continue;
                }
                let c0 = if rng.gen::<bool>() {
                    Color::Red
                } else {
                    Color::Blue
                };
                slot[g0 as usize][h0 as usize] = Some(c0);
                let mut queue = VecDeque::from([(g0, h0)]);
                while let Some((g, h)) = queue.pop_front() {
                    let c = slot[g as usize][h as usize].unwrap();
                    for (g2, h2) in constraint_neighbours(m, classes, g, h) {
                        match slot[g2 as usize][h2 as usize] {
                            None => {
                                slot[g2 as usize][h2 as usize] = Some(c.flip());
                                queue.push_back((g2, h2));
                            }
                            Some(c2) => debug_assert_ne!(c2, c),
                        }
                    }
                }
            }
        }
        let colors = slot
            .into_iter()
            .map(|row| row.into_iter().map(|c| c.unwrap_or(Color::Red)).collect())
            .collect();
        Ok(ArcColoring {
            n,
            mode: ColoringMode::Seeded(seed),
            colors,
        })
    }

    /// Build from explicit per-class rows indexed by `h` (entry 0 ignored).
    pub fn from_rows(n: u32, rows: Vec<Vec<Color>>) -> Result<ArcColoring> {
        Modulus::new(n)?;
        check_class_count(n, rows.len() as u32)?;
        if rows.iter().any(|r| r.len() != n as usize) {
            return Err(Error::params("each coloring row needs n entries"));
        }
        let c = ArcColoring {
            n,
            mode: ColoringMode::Default,
            colors: rows,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn mode(&self) -> &ColoringMode {
        &self.mode
    }

    pub fn classes(&self) -> u32 {
        self.colors.len() as u32
    }

    /// Color of the arc of class `g` whose tail is `tail`.
    pub fn color(&self, g: u32, tail: u32) -> Color {
        let m = Modulus::new(self.n).expect("validated modulus");
        self.colors[g as usize][m.sub(tail, g) as usize]
    }

    pub fn color_of_offset(&self, g: u32, h: u32) -> Color {
        self.colors[g as usize][h as usize]
    }

    /// Check both the opposite-arc and the reverse-arc conditions.
    pub fn validate(&self) -> Result<()> {
        let m = Modulus::new(self.n)?;
        let t = self.classes();
        for g in 0..t {
            for h in 1..self.n {
                let c = self.colors[g as usize][h as usize];
                for (g2, h2) in constraint_neighbours(m, t, g, h) {
                    if self.colors[g2 as usize][h2 as usize] == c {
                        return Err(Error::params(format!(
                            "arcs (g={g},h={h}) and (g={g2},h={h2}) share a color"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

fn check_class_count(n: u32, classes: u32) -> Result<()> {
    if classes == 0 || classes > n {
        return Err(Error::params(format!(
            "class count {classes} must lie in 1..={n}"
        )));
    }
    Ok(())
}

fn constraint_neighbours(m: Modulus, t: u32, g: u32, h: u32) -> impl Iterator<Item = (u32, u32)> {
    // the opposite arc and the reverse arc
    let nh = m.neg(h);
    [(g, nh), (m.sub(g, h), nh)]
        .into_iter()
        .filter(move |&(g2, _)| g2 < t)
}

/// Residue triples `{a,b,c}` (distinct, sorted) with `a+b+c = 3g`.
pub fn step1a_bases(n: u32, g: u32) -> Result<Vec<[u32; 3]>> {
    let m = Modulus::new(n)?;
    let target = m.mul(3, g);
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let c = m.sub(target, m.add(a, b));
            if c > b {
                out.push([a, b, c]);
            }
        }
    }
    Ok(out)
}

/// Blocks of the class S_g in canonical order.
pub fn schreiber_class(n: u32, g: u32, coloring: &ArcColoring) -> Result<Vec<Block>> {
    let m = Modulus::new(n)?;
    if g >= n {
        return Err(Error::params(format!("class {g} not in Z_{n}")));
    }
    if coloring.n() != n || g >= coloring.classes() {
        return Err(Error::params(format!("coloring does not cover class {g}")));
    }
    let mut blocks = Vec::new();
    for base in step1a_bases(n, g)? {
        blocks.push(Block::new(
            base.map(|r| Point::fin(r, 0)),
            BlockOrigin::Step1a { g, base },
        ));
        for mask in 1u8..8 {
            let pts = [0, 1, 2].map(|p| Point::fin(base[p], (mask >> (2 - p)) & 1));
            blocks.push(Block::new(pts, BlockOrigin::Step1b { g, base, mask }));
        }
    }
    for h in 1..n {
        let arc = arc_for(m, g, h);
        blocks.extend(gadget_blocks(g, arc, coloring.color_of_offset(g, h)));
    }
    let gp = |b| Point::fin(g, b);
    let step3 = [
        [Point::INF0, Point::INF1, gp(0)],
        [Point::INF0, Point::INF1, gp(1)],
        [Point::INF0, gp(0), gp(1)],
        [Point::INF1, gp(0), gp(1)],
    ];
    for (variant, pts) in step3.into_iter().enumerate() {
        blocks.push(Block::new(
            pts,
            BlockOrigin::Step3 {
                g,
                variant: variant as u8,
            },
        ));
    }
    blocks.sort_by_key(Block::sort_key);
    Ok(blocks)
}

/// The two Step-1c blocks followed by the four Step-2 blocks of one arc.
pub fn gadget_blocks(g: u32, arc: Arc, color: Color) -> [Block; 6] {
    let (a, b) = (arc.tail, arc.head);
    let f = Point::fin;
    let (i0, i1) = match color {
        Color::Red => (Point::INF0, Point::INF1),
        Color::Blue => (Point::INF1, Point::INF0),
    };
    let c = |variant, pts| Block::new(pts, BlockOrigin::Step1c { g, arc, variant });
    let s = |variant, pts| {
        Block::new(
            pts,
            BlockOrigin::Step2 {
                g,
                arc,
                color,
                variant,
            },
        )
    };
    [
        c(0, [f(a, 0), f(b, 0), f(a, 1)]),
        c(1, [f(a, 0), f(b, 1), f(a, 1)]),
        s(0, [i0, f(a, 0), f(b, 0)]),
        s(1, [i0, f(a, 1), f(b, 1)]),
        s(2, [i1, f(a, 0), f(b, 1)]),
        s(3, [i1, f(a, 1), f(b, 0)]),
    ]
}

/// Parameters plus the full block list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleSystem {
    pub n: u32,
    pub v: u32,
    pub lambda: u32,
    pub blocks: Vec<Block>,
}

impl TripleSystem {
    pub fn points(&self) -> impl Iterator<Item = Point> {
        (0..self.v as usize).map(Point::from_index)
    }

    pub fn expected_block_count(&self) -> usize {
        let v = self.v as usize;
        self.lambda as usize * v * (v - 1) / 6
    }
}

/// Check `n` and `lambda` against the constructive range.
pub fn check_params(n: u32, lambda: u32) -> Result<()> {
    Modulus::new(n)?;
    if lambda == 2 {
        return Err(Error::params(
            "λ=2 is not supported; λ must be even and at least 4",
        ));
    }
    if !lambda.is_multiple_of(2) || lambda < 4 || lambda > 2 * n {
        return Err(Error::params(format!(
            "lambda = {lambda} must be even with 4 <= lambda <= {}",
            2 * n
        )));
    }
    Ok(())
}

/// Union of the classes S_0, ..., S_{lambda/2 - 1}.
pub fn union_design(n: u32, lambda: u32, coloring: &ArcColoring) -> Result<TripleSystem> {
    check_params(n, lambda)?;
    let t = lambda / 2;
    if coloring.n() != n || coloring.classes() < t {
        return Err(Error::params(format!(
            "coloring covers {} classes, {t} needed",
            coloring.classes()
        )));
    }
    coloring.validate()?;
    classes_union(n, 0..t, coloring, lambda)
}

/// Union of an arbitrary set of classes, without the lambda range check.
pub fn classes_union(
    n: u32,
    classes: impl IntoIterator<Item = u32>,
    coloring: &ArcColoring,
    lambda: u32,
) -> Result<TripleSystem> {
    let mut blocks = Vec::new();
    for g in classes {
        blocks.extend(schreiber_class(n, g, coloring)?);
    }
    blocks.sort_by_key(Block::sort_key);
    Ok(TripleSystem {
        n,
        v: 2 * n + 2,
        lambda,
        blocks,
    })
}
