use std::collections::HashSet;

use tsgray::design::{classes_union, schreiber_class, Point, Triple};
use tsgray::verify::verify_design;
use tsgray::ArcColoring;

fn all_triples(v: usize) -> HashSet<Triple> {
    let mut out = HashSet::new();
    for a in 0..v {
        for b in a + 1..v {
            for c in b + 1..v {
                out.insert([a, b, c].map(Point::from_index));
            }
        }
    }
    out
}

fn check_partition(n: u32, coloring: &ArcColoring) {
    let v = 2 * n as usize + 2;
    let classes: Vec<HashSet<Triple>> = (0..n)
        .map(|g| {
            schreiber_class(n, g, coloring)
                .unwrap()
                .iter()
                .map(|b| b.points)
                .collect()
        })
        .collect();
    for g in 0..n as usize {
        assert_eq!(classes[g].len(), v * (v - 1) / 3);
        for h in g + 1..n as usize {
            assert!(classes[g].is_disjoint(&classes[h]), "S_{g} and S_{h} meet");
        }
        let ts = classes_union(n, [g as u32], coloring, 2).unwrap();
        assert!(verify_design(&ts).passed(), "S_{g} is not a TS(v,2)");
    }
    let union: HashSet<Triple> = classes.iter().flatten().copied().collect();
    assert_eq!(union, all_triples(v));
}

#[test]
fn classes_partition_all_triples() {
    check_partition(5, &ArcColoring::default_rule(5, 5).unwrap());
    check_partition(7, &ArcColoring::default_rule(7, 7).unwrap());
    assert_eq!(all_triples(12).len(), 220);
    assert_eq!(all_triples(16).len(), 560);
}

#[test]
fn partition_holds_for_seeded_colorings() {
    for seed in 0..5 {
        check_partition(5, &ArcColoring::seeded(5, 5, seed).unwrap());
        check_partition(7, &ArcColoring::seeded(7, 7, seed).unwrap());
    }
}

#[test]
fn consecutive_unions_are_designs() {
    let c = ArcColoring::default_rule(7, 7).unwrap();
    for t in 1..=7 {
        let ts = classes_union(7, 0..t, &c, 2 * t).unwrap();
        assert!(verify_design(&ts).passed(), "t = {t}");
    }
}
