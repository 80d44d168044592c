//! Gluing the product cycle, the gadget path and one cube path into a
//! cyclic listing of all blocks.

use std::collections::HashMap;

use crate::cube::{coordinate_frames, cube_ham_path, masked_block, tree_cube_cycle};
use crate::design::{union_design, ArcColoring, Point, Step, Triple, TripleSystem};
use crate::error::{Error, Result};
use crate::honeycomb::{multi_walk, walk_to_tree};
use crate::infinity::{r_path, terminal_choices, GadgetBlocks, RPath, RPathOptions, UnionDigraph};
use crate::modular::Modulus;
use crate::verify::verify_gray_code;

/// A cyclic order of all blocks of `design`, by block index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayCode {
    pub design: TripleSystem,
    pub order: Vec<usize>,
}

impl GrayCode {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn blocks(&self) -> impl Iterator<Item = &crate::design::Block> + '_ {
        self.order.iter().map(|&i| &self.design.blocks[i])
    }
}

/// Block counts by construction step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Census {
    pub step1ab: usize,
    pub step1c: usize,
    pub step2: usize,
    pub step3: usize,
}

impl Census {
    pub fn total(&self) -> usize {
        self.step1ab + self.step1c + self.step2 + self.step3
    }

    /// Closed forms for the union of `lambda/2` classes.
    pub fn expected(n: u32, lambda: u32) -> Census {
        let (n, t) = (n as usize, lambda as usize / 2);
        Census {
            step1ab: t * 8 * (n - 1) * (n - 2) / 6,
            step1c: t * 2 * (n - 1),
            step2: t * 4 * (n - 1),
            step3: t * 4,
        }
    }
}

pub fn component_census(code: &GrayCode) -> Census {
    let mut c = Census::default();
    for b in code.blocks() {
        match b.origin.step() {
            Step::S1a | Step::S1b => c.step1ab += 1,
            Step::S1c => c.step1c += 1,
            Step::S2 => c.step2 += 1,
            Step::S3 => c.step3 += 1,
        }
    }
    c
}

fn shared(a: &Triple, b: &Triple) -> usize {
    a.iter().filter(|p| b.contains(p)).count()
}

fn mask_in_frame(frame: [u32; 3], pts: &Triple) -> u8 {
    let mut mask = 0;
    for p in pts {
        if let Point::Finite { residue, bit } = *p {
            let pos = frame.iter().position(|&r| r == residue).unwrap();
            mask |= bit << (2 - pos);
        }
    }
    mask
}

/// Step-2 blocks of used arcs that contain two of the points of `x`.
fn start_candidates(n: u32, t: u32, coloring: &ArcColoring, x: &Triple) -> Vec<Triple> {
    let m = Modulus::new(n).unwrap();
    let mut out = Vec::new();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let (p, q) = (x[i], x[j]);
        let (Some(rp), Some(rq)) = (p.residue(), q.residue()) else {
            continue;
        };
        for g in 0..t {
            for (a, b) in [(rp, rq), (rq, rp)] {
                let h = m.sub(a, g);
                if h == 0 {
                    continue;
                }
                let arc = crate::design::arc_for(m, g, h);
                if arc.head != b {
                    continue;
                }
                let gad = GadgetBlocks::new(g, arc, coloring);
                if let Some(bl) = gad.blocks[2..]
                    .iter()
                    .find(|bl| bl.contains(p) && bl.contains(q))
                {
                    out.push(bl.points);
                }
            }
        }
    }
    out
}

/// Build the design for `(n, lambda)` and a cyclic Gray code of its blocks.
///
/// The Step-1a/1b blocks other than the cube of `Z = {n-2,1,4}` come from
/// a Hamilton cycle of (tree □ Q3). One edge `x -- x'` of that cycle at the
/// cube of the walk's second vertex is dropped; the gadget path runs from a
/// block next to `x'` to a block B next to the cube of Z, and a Q3 path
/// through the cube of Z closes the cycle back at `x`.
pub fn assemble(n: u32, lambda: u32, coloring: &ArcColoring) -> Result<GrayCode> {
    let design = union_design(n, lambda, coloring)?;
    let t = lambda / 2;
    let index: HashMap<Triple, usize> = design
        .blocks
        .iter()
        .enumerate()
        .map(|(i, b)| (b.points, i))
        .collect();

    let walk = multi_walk(n, lambda)?;
    let z = walk.first();
    let tree = walk_to_tree(&walk)?;
    let frames = coordinate_frames(&tree)?;
    let cycle = tree_cube_cycle(&tree.adj)?;
    let prod: Vec<Triple> = cycle
        .order
        .iter()
        .map(|&(v, c)| masked_block(frames[v], c))
        .collect();
    let len = prod.len();
    for k in 0..len {
        if shared(&prod[k], &prod[(k + 1) % len]) != 2 {
            return Err(Error::construction(format!(
                "product cycle breaks at step {k}"
            )));
        }
    }

    let zf = z.residues;
    let root = tree.vertices[0];
    let free: Vec<usize> = (0..3)
        .filter(|&p| !root.residues.contains(&zf[p]))
        .collect();
    if free.len() != 1 {
        return Err(Error::construction("walk does not start with an edge"));
    }
    let free = free[0];
    let terminals = terminal_choices(&UnionDigraph::new(n, t)?);

    let mut tried = 0usize;
    for p in 0..len {
        if cycle.order[p].0 != 0 {
            continue;
        }
        for forward in [false, true] {
            // P1 runs x = prod[p] ... x' = prod[q], omitting the edge p -- q
            let p1: Vec<Triple> = if forward {
                (0..len).map(|s| prod[(p + s) % len]).collect()
            } else {
                (0..len).map(|s| prod[(p + len - s) % len]).collect()
            };
            let x = p1[0];
            let x_end = *p1.last().unwrap();
            for a in start_candidates(n, t, coloring, &x_end) {
                for terminal in 0..terminals {
                    tried += 1;
                    let opts = RPathOptions {
                        start: Some(a),
                        terminal,
                    };
                    let Ok(rp) = r_path(n, lambda, coloring, opts) else {
                        continue;
                    };
                    if let Some(order) = close_cycle(&index, &p1, &rp, zf, free, x) {
                        let report = verify_gray_code(&design, &order);
                        if report.passed() {
                            return Ok(GrayCode { design, order });
                        }
                    }
                }
            }
        }
    }
    Err(Error::construction(format!(
        "no gluing found for n = {n}, lambda = {lambda} after {tried} candidates"
    )))
}

/// Finish with a Q3 path from `z`, next to the end of the gadget path, to
/// `z'`, next to `x`.
fn close_cycle(
    index: &HashMap<Triple, usize>,
    p1: &[Triple],
    rp: &RPath,
    zf: [u32; 3],
    free: usize,
    x: Triple,
) -> Option<Vec<usize>> {
    let b = rp.last().points;
    if shared(&b, &p1[p1.len() - 1]) == 3 {
        return None;
    }
    let fin: Vec<Point> = b.iter().copied().filter(|p| !p.is_infinite()).collect();
    for i4 in 0..2u8 {
        // z keeps B's two finite points and sets the remaining residue of Z
        let other = zf
            .iter()
            .copied()
            .find(|r| fin.iter().all(|p| p.residue() != Some(*r)))?;
        let mut zp = [fin[0], fin[1], Point::fin(other, i4)];
        zp.sort_unstable();
        if shared(&zp, &b) != 2 {
            continue;
        }
        let zmask = mask_in_frame(zf, &zp);
        let xmask_on_z = (0..3)
            .filter(|&q| q != free)
            .map(|q| {
                let bit = x
                    .iter()
                    .find_map(|pt| match *pt {
                        Point::Finite { residue, bit } if residue == zf[q] => Some(bit),
                        _ => None,
                    })
                    .unwrap();
                bit << (2 - q)
            })
            .fold(0u8, |a, v| a | v);
        let zp_mask = [xmask_on_z, xmask_on_z | 1 << (2 - free)]
            .into_iter()
            .find(|m| (m ^ zmask).count_ones() % 2 == 1)?;
        let path = cube_ham_path(zmask, zp_mask).ok()?;
        let mut order = Vec::with_capacity(index.len());
        for tr in p1 {
            order.push(*index.get(tr)?);
        }
        for bl in &rp.blocks {
            order.push(*index.get(&bl.points)?);
        }
        for c in path {
            order.push(*index.get(&masked_block(zf, c))?);
        }
        return Some(order);
    }
    None
}
