use lch_core::diagram::Convention;
use lch_core::discs::{enumerate_polygons, PolygonQuery};
use lch_core::resolve_front;
use std::time::Instant;

fn main() {
    let base = resolve_front("L1 L3 X2 X2 X2 R3 R1", Convention::Normal).unwrap();
    let t0 = Instant::now();
    let raw =
        lch_core::stack::build_stack_raw(&base, lch_core::stack::StackMode::Far, &[0, 1], None)
            .unwrap();
    println!(
        "raw stack: {} chords, {} cols, rows_max {}, {:?}",
        raw.n_chords(),
        raw.columns.len(),
        raw.layouts.iter().map(|l| l.len()).max().unwrap(),
        t0.elapsed()
    );
    for p in [1usize, 2] {
        let t = Instant::now();
        let polys = enumerate_polygons(
            &raw,
            &PolygonQuery {
                positive_corners: p,
                ..Default::default()
            },
        )
        .unwrap();
        println!("p={p}: {} polygons in {:?}", polys.len(), t.elapsed());
    }
}
