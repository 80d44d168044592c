use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tsgray::cube::tree_cube_cycle;
use tsgray::design::{triple, Arc, Point};
use tsgray::infinity::{
    negabinary, negabinary_value, r_path, trail_path, two_arc_path, GadgetBlocks, RPathOptions,
    StartAt, UnionDigraph,
};
use tsgray::verify::{verify_design, verify_gray_code};
use tsgray::{assemble, union_design, ArcColoring};

fn shares_two(a: &[Point; 3], b: &[Point; 3]) -> bool {
    a.iter().filter(|p| b.contains(p)).count() == 2
}

/// A random tree on `size` vertices with every degree at most 6.
fn random_tree(size: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); size];
    for v in 1..size {
        loop {
            let p = rng.gen_range(0..v);
            if adj[p].len() < 6 {
                adj[p].push(v);
                adj[v].push(p);
                break;
            }
        }
    }
    adj
}

/// A random trail of `k` distinct arcs, or `None` if the walk gets stuck.
fn random_trail(d: &UnionDigraph, k: usize, rng: &mut ChaCha8Rng) -> Option<Vec<(u32, Arc)>> {
    let mut used = vec![false; d.arcs.len()];
    let first = rng.gen_range(0..d.arcs.len());
    used[first] = true;
    let mut trail = vec![d.arcs[first]];
    while trail.len() < k {
        let at = trail.last().unwrap().1.head;
        let next: Vec<usize> = (0..d.arcs.len())
            .filter(|&i| !used[i] && d.arcs[i].1.tail == at)
            .collect();
        if next.is_empty() {
            return None;
        }
        let i = next[rng.gen_range(0..next.len())];
        used[i] = true;
        trail.push(d.arcs[i]);
    }
    Some(trail)
}

#[test]
fn negabinary_round_trips_exhaustively() {
    for s in -(1i64 << 16)..=(1i64 << 16) {
        let d = negabinary(s);
        assert_eq!(negabinary_value(&d), s);
        assert!(d.last() != Some(&0), "leading zero for {s}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn negabinary_round_trips(s in -(1i64 << 40)..(1i64 << 40)) {
        prop_assert_eq!(negabinary_value(&negabinary(s)), s);
    }

    #[test]
    fn seeded_colorings_validate(n in prop::sample::select(vec![5u32, 7, 11, 13, 17, 19]), t in 1u32..6, seed in any::<u64>()) {
        let t = t.min(n);
        let c = ArcColoring::seeded(n, t, seed).unwrap();
        prop_assert!(c.validate().is_ok());
        let lambda = 2 * t;
        if lambda >= 4 {
            prop_assert!(verify_design(&union_design(n, lambda, &c).unwrap()).passed());
        }
    }

    #[test]
    fn product_cycles_on_random_trees(size in 1usize..=80, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let adj = random_tree(size, &mut rng);
        let cycle = tree_cube_cycle(&adj).unwrap();
        prop_assert_eq!(cycle.len(), 8 * size);
        prop_assert!(cycle.check(&adj).is_ok());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn gadget_paths_under_random_colorings(
        n in prop::sample::select(vec![5u32, 7, 11, 13]),
        t in 2u32..5,
        seed in any::<u64>(),
    ) {
        let c = ArcColoring::seeded(n, t, seed).unwrap();
        let d = UnionDigraph::new(n, t).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37);
        if let Some(tr) = random_trail(&d, 2, &mut rng) {
            let p = two_arc_path(tr[0], tr[1], &c, StartAt::Any).unwrap();
            prop_assert_eq!(p.len(), 12);
            prop_assert!(p.windows(2).all(|w| shares_two(&w[0].points, &w[1].points)));
        }
        for k in 3..=10 {
            let Some(tr) = random_trail(&d, k, &mut rng) else { continue };
            let p = trail_path(&tr, &c, StartAt::Any).unwrap();
            prop_assert_eq!(p.len(), 6 * k);
            let distinct: std::collections::HashSet<_> = p.iter().map(|b| b.points).collect();
            prop_assert_eq!(distinct.len(), 6 * k);
            prop_assert!(p.windows(2).all(|w| shares_two(&w[0].points, &w[1].points)));
            prop_assert_eq!(p[0].origin.arc(), Some(tr[0].1));
            prop_assert_eq!(p[6 * k - 1].origin.arc(), Some(tr[0].1));
            // any Step-2 block of e_0 can come first
            let gadget = GadgetBlocks::new(tr[0].0, tr[0].1, &c);
            for b in &gadget.blocks[2..] {
                let q = trail_path(&tr, &c, StartAt::Exactly(b.points)).unwrap();
                prop_assert_eq!(q[0].points, b.points);
            }
        }
    }

    #[test]
    fn r_paths_cover_their_blocks(
        n in prop::sample::select(vec![5u32, 7, 11, 13]),
        t in 2u32..5,
        seed in any::<u64>(),
    ) {
        let t = t.min(n);
        let c = ArcColoring::seeded(n, t, seed).unwrap();
        let r = r_path(n, 2 * t, &c, RPathOptions::default()).unwrap();
        prop_assert_eq!(r.blocks.len(), t as usize * (6 * (n as usize - 1) + 4));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Relabelling points by any permutation keeps both verdicts.
    #[test]
    fn verdicts_survive_relabelling(seed in any::<u64>()) {
        let c = ArcColoring::default_rule(5, 2).unwrap();
        let code = assemble(5, 4, &c).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<usize> = (0..12).collect();
        for i in (1..12).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let mut ts = code.design.clone();
        for b in ts.blocks.iter_mut() {
            b.points = triple(b.points.map(|p| Point::from_index(perm[p.index()])));
        }
        prop_assert!(verify_design(&ts).passed());
        prop_assert!(verify_gray_code(&ts, &code.order).passed());

        // shuffling block storage and re-indexing the code keeps it valid
        let mut where_to: Vec<usize> = (0..ts.blocks.len()).collect();
        for i in (1..where_to.len()).rev() {
            where_to.swap(i, rng.gen_range(0..=i));
        }
        let mut shuffled = ts.clone();
        for (i, &j) in where_to.iter().enumerate() {
            shuffled.blocks[j] = ts.blocks[i];
        }
        let order: Vec<usize> = code.order.iter().map(|&i| where_to[i]).collect();
        prop_assert!(verify_design(&shuffled).passed());
        prop_assert!(verify_gray_code(&shuffled, &order).passed());
    }
}
