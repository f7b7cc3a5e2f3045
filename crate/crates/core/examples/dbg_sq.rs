use lch_core::diagram::Convention;
use lch_core::discs::{enumerate_polygons, PolygonQuery};
use lch_core::resolve_front;
use lch_core::stack::{build_stack, StackMode};

fn main() {
    let base = resolve_front("L1 L3 X2 X2 X2 R3 R1", Convention::Normal).unwrap();
    let s = build_stack(&base, StackMode::Far, &[0, 1], None).unwrap();
    let d = &s.diagram;
    let m = d.vertex_by_name("m0:01a").unwrap();
    for (mb, ms, cb) in [(4usize, 8usize, 480usize), (6, 10, 2000)] {
        let q = PolygonQuery {
            positive_corners: 1,
            anchor: Some(m),
            max_births: Some(mb),
            max_slabs: Some(ms),
            cell_budget: Some(cb),
            ..Default::default()
        };
        let polys = enumerate_polygons(d, &q).unwrap();
        println!("births<={mb} slabs<={ms} cells<={cb}: {} discs", polys.len());
        for poly in &polys {
            let desc: Vec<String> = poly
                .corners
                .iter()
                .map(|c| {
                    format!(
                        "{}{}",
                        if d.quadrant_is_positive(c.v, c.q) { "+" } else { "-" },
                        d.vertices[c.v].name
                    )
                })
                .collect();
            println!("  {:?} cells {}", desc, poly.cells);
        }
    }
}
