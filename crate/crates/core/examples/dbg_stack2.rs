use lch_core::diagram::{Convention, Site};
use lch_core::discs::{enumerate_polygons, PolygonQuery};
use lch_core::resolve_front;
use std::time::Instant;

fn main() {
    let base = resolve_front("L1 L3 X2 X2 X2 R3 R1", Convention::Normal).unwrap();
    let raw =
        lch_core::stack::build_stack_raw(&base, lch_core::stack::StackMode::Far, &[0, 1], None)
            .unwrap();
    let mixed_mask: Vec<bool> = raw
        .vertices
        .iter()
        .map(|v| matches!(v.site, Site::Mixed { .. } | Site::Morse { .. }))
        .collect();
    for (p, cap, mask) in [(1usize, 2usize, false), (1, 2, true), (2, 2, true)] {
        let t = Instant::now();
        let q = PolygonQuery {
            positive_corners: p,
            mixed_corner_cap: Some(cap),
            positive_mask: mask.then(|| mixed_mask.clone()),
            ..Default::default()
        };
        let polys = enumerate_polygons(&raw, &q).unwrap();
        println!(
            "p={p} cap={cap} mask={mask}: {} polygons in {:?}",
            polys.len(),
            t.elapsed()
        );
    }
}
