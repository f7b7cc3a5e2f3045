use lch_core::diagram::Convention;
use lch_core::discs::{enumerate_polygons, PolygonQuery};
use lch_core::resolve_front;

fn main() {
    for (name, front) in [
        ("unknot", "L1 R1"),
        ("trefoil", "L1 L3 X2 X2 X2 R3 R1"),
    ] {
        let base = resolve_front(front, Convention::Normal).unwrap();
        let polys = enumerate_polygons(&base, &PolygonQuery::one_positive()).unwrap();
        let maxc = polys.iter().map(|p| p.cells).max().unwrap_or(0);
        println!("{name} base p=1: {} polys, max cells {}", polys.len(), maxc);
        let raw = lch_core::stack::build_stack_raw(
            &base,
            lch_core::stack::StackMode::Far,
            &[0, 1],
            None,
        )
        .unwrap();
        let rows = raw.layouts.iter().map(|l| l.len()).max().unwrap();
        let cols = raw.columns.len();
        let polys = enumerate_polygons(&raw, &PolygonQuery::one_positive()).unwrap();
        let maxc = polys.iter().map(|p| p.cells).max().unwrap_or(0);
        let maxcorners = polys.iter().map(|p| p.corners.len()).max().unwrap_or(0);
        println!(
            "{name} far2 p=1: {} polys, max cells {} (grid {}x{}={}), max corners {}",
            polys.len(),
            maxc,
            rows,
            cols,
            rows * cols,
            maxcorners
        );
    }
}
