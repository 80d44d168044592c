use std::time::Instant;

use tsgray::verify::{verify_design, verify_gray_code};
use tsgray::{assemble, component_census, ArcColoring, Census};

fn cells() -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for n in [5u32, 7, 11, 13, 17, 19] {
        for lambda in (4..=(2 * n).min(16)).step_by(2) {
            out.push((n, lambda));
        }
    }
    out
}

#[test]
fn default_coloring_matrix() {
    for (n, lambda) in cells() {
        let t0 = Instant::now();
        let c = ArcColoring::default_rule(n, lambda / 2).unwrap();
        let code = assemble(n, lambda, &c).unwrap_or_else(|e| panic!("({n},{lambda}): {e}"));
        assert!(verify_design(&code.design).passed());
        assert!(verify_gray_code(&code.design, &code.order).passed());
        assert_eq!(component_census(&code), Census::expected(n, lambda));
        let v = (2 * n + 2) as usize;
        assert_eq!(code.len(), lambda as usize * v * (v - 1) / 6);
        eprintln!("({n},{lambda}) {:?}", t0.elapsed());
    }
}

#[test]
fn seeded_colorings() {
    for (n, lambda) in cells() {
        for seed in 0..10 {
            let c = ArcColoring::seeded(n, lambda / 2, seed).unwrap();
            let code = assemble(n, lambda, &c)
                .unwrap_or_else(|e| panic!("({n},{lambda}) seed {seed}: {e}"));
            assert!(verify_gray_code(&code.design, &code.order).passed());
        }
    }
}
