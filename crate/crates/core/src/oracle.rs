//! Independent boundary-first polygon oracle.
//!
//! Candidate polygons are built by tracing their boundary: from a corner the
//! boundary follows strands through crossings and around caps, with the disc
//! kept on the left (top edges travel west, bottom edges east). Between
//! corners the path is deterministic, so a polygon is exactly a cyclic corner
//! word whose trace closes up with total turning one full counterclockwise
//! revolution and everywhere non-negative winding. This is a brute-force
//! cross-check for the slab sweep, quadratic-exponential in the corner bound,
//! intended for small diagrams.

use std::collections::BTreeSet;

use crate::diagram::{ColEvent, Quadrant, ResolvedDiagram, VertexId};

/// A directed location: an edge segment at a column interval (interval i lies
/// between columns i-1 and i). `below` means the disc is below the strand,
/// i.e. this is a top edge, travelling west; otherwise a bottom edge
/// travelling east.
#[derive(Clone, Copy, PartialEq, Eq, Debug, PartialOrd, Ord)]
struct Loc {
    interval: usize,
    row: usize,
    below: bool,
}

fn corner_in(col: usize, r: usize, q: Quadrant) -> Loc {
    match q {
        Quadrant::N => Loc {
            interval: col,
            row: r,
            below: false,
        },
        Quadrant::S => Loc {
            interval: col + 1,
            row: r + 1,
            below: true,
        },
        Quadrant::E => Loc {
            interval: col + 1,
            row: r,
            below: true,
        },
        Quadrant::W => Loc {
            interval: col,
            row: r + 1,
            below: false,
        },
    }
}

fn corner_out(col: usize, r: usize, q: Quadrant) -> Loc {
    match q {
        Quadrant::N => Loc {
            interval: col + 1,
            row: r,
            below: false,
        },
        Quadrant::S => Loc {
            interval: col,
            row: r + 1,
            below: true,
        },
        Quadrant::E => Loc {
            interval: col + 1,
            row: r + 1,
            below: false,
        },
        Quadrant::W => Loc {
            interval: col,
            row: r,
            below: true,
        },
    }
}

enum Step {
    /// continue to this location, with the given half-turn contribution
    Go(Loc, i64),
    /// the next feature is this vertex and the current location matches one
    /// or more corner arrivals there; passing is also possible
    AtVertex(VertexId, Loc),
    Dead,
}

/// Advance to the next feature, without taking corners.
fn next_feature(d: &ResolvedDiagram, loc: Loc) -> Step {
    if loc.below {
        // top edge, west-bound
        if loc.interval == 0 {
            return Step::Dead;
        }
        let col = loc.interval - 1;
        match d.columns[col] {
            ColEvent::Cross { v, row } => {
                if loc.row == row || loc.row == row + 1 {
                    Step::AtVertex(v, loc)
                } else {
                    Step::Go(
                        Loc {
                            interval: col,
                            ..loc
                        },
                        0,
                    )
                }
            }
            ColEvent::CapLeft { row } => {
                if loc.row == row {
                    // smooth birth turn around the cap nose
                    Step::Go(
                        Loc {
                            interval: col + 1,
                            row: row + 1,
                            below: false,
                        },
                        1,
                    )
                } else if loc.row == row + 1 {
                    // outside wrap: the boundary splits around the cap
                    Step::Go(
                        Loc {
                            interval: col + 1,
                            row,
                            below: false,
                        },
                        -1,
                    )
                } else {
                    let row2 = if loc.row > row + 1 {
                        loc.row - 2
                    } else {
                        loc.row
                    };
                    Step::Go(
                        Loc {
                            interval: col,
                            row: row2,
                            below: true,
                        },
                        0,
                    )
                }
            }
            ColEvent::CapRight { row } => {
                // rows at or below the cap gain two when moving west past it
                let row2 = if loc.row >= row { loc.row + 2 } else { loc.row };
                Step::Go(
                    Loc {
                        interval: col,
                        row: row2,
                        below: true,
                    },
                    0,
                )
            }
        }
    } else {
        // bottom edge, east-bound
        if loc.interval >= d.columns.len() {
            return Step::Dead;
        }
        let col = loc.interval;
        match d.columns[col] {
            ColEvent::Cross { v, row } => {
                if loc.row == row || loc.row == row + 1 {
                    Step::AtVertex(v, loc)
                } else {
                    Step::Go(
                        Loc {
                            interval: col + 1,
                            ..loc
                        },
                        0,
                    )
                }
            }
            ColEvent::CapLeft { row } => {
                let row2 = if loc.row >= row { loc.row + 2 } else { loc.row };
                Step::Go(
                    Loc {
                        interval: col + 1,
                        row: row2,
                        below: false,
                    },
                    0,
                )
            }
            ColEvent::CapRight { row } => {
                if loc.row == row + 1 {
                    // smooth death turn
                    Step::Go(
                        Loc {
                            interval: col,
                            row,
                            below: true,
                        },
                        1,
                    )
                } else if loc.row == row {
                    // outside merge wrap
                    Step::Go(
                        Loc {
                            interval: col,
                            row: row + 1,
                            below: true,
                        },
                        -1,
                    )
                } else {
                    let row2 = if loc.row > row + 1 {
                        loc.row - 2
                    } else {
                        loc.row
                    };
                    Step::Go(
                        Loc {
                            interval: col + 1,
                            row: row2,
                            below: false,
                        },
                        0,
                    )
                }
            }
        }
    }
}

/// The pass-through continuation at a crossing.
fn pass_through(d: &ResolvedDiagram, v: VertexId, loc: Loc) -> Loc {
    let info = &d.vertices[v];
    let (col, r) = (info.col, info.row);
    let other = if loc.row == r { r + 1 } else { r };
    if loc.below {
        Loc {
            interval: col,
            row: other,
            below: true,
        }
    } else {
        Loc {
            interval: col + 1,
            row: other,
            below: false,
        }
    }
}

/// All polygons with at most `max_corners` corners, as canonical cyclic
/// corner words paired with their corner-sign counts.
pub fn enumerate_boundary_words(
    d: &ResolvedDiagram,
    max_corners: usize,
    max_steps: usize,
) -> Vec<Vec<(VertexId, Quadrant)>> {
    let mut out: BTreeSet<Vec<(VertexId, Quadrant)>> = BTreeSet::new();
    for v in 0..d.n_chords() {
        for q in [Quadrant::N, Quadrant::E, Quadrant::S, Quadrant::W] {
            let info = &d.vertices[v];
            let start_out = corner_out(info.col, info.row, q);
            search(
                d,
                vec![(v, q)],
                start_out,
                max_corners,
                max_steps,
                &mut out,
            );
        }
    }
    out.into_iter()
        .filter(|w| verify_word(d, w))
        .collect()
}

fn search(
    d: &ResolvedDiagram,
    corners: Vec<(VertexId, Quadrant)>,
    loc: Loc,
    max_corners: usize,
    max_steps: usize,
    out: &mut BTreeSet<Vec<(VertexId, Quadrant)>>,
) {
    let mut cur = loc;
    for _ in 0..max_steps {
        match next_feature(d, cur) {
            Step::Dead => return,
            Step::Go(next, _) => cur = next,
            Step::AtVertex(v, at) => {
                let info = &d.vertices[v];
                // corner options whose arrival matches
                for q in [Quadrant::N, Quadrant::E, Quadrant::S, Quadrant::W] {
                    if corner_in(info.col, info.row, q) != at {
                        continue;
                    }
                    // closing?
                    let (v0, q0) = corners[0];
                    let i0 = &d.vertices[v0];
                    if (v, q) == (v0, q0) {
                        let mut w = corners.clone();
                        canonical(&mut w);
                        out.insert(w);
                        continue;
                    }
                    let _ = i0;
                    if corners.len() < max_corners {
                        let mut w = corners.clone();
                        w.push((v, q));
                        search(
                            d,
                            w,
                            corner_out(info.col, info.row, q),
                            max_corners,
                            max_steps,
                            out,
                        );
                    }
                }
                cur = pass_through(d, v, at);
            }
        }
    }
}

fn canonical(w: &mut Vec<(VertexId, Quadrant)>) {
    let k = (0..w.len())
        .min_by_key(|&i| {
            let mut rot = w[i..].to_vec();
            rot.extend_from_slice(&w[..i]);
            rot
        })
        .unwrap();
    w.rotate_left(k);
}

/// Re-walk a corner word deterministically; accept iff the trace closes with
/// total turning one revolution and non-negative winding everywhere.
pub fn verify_word(d: &ResolvedDiagram, corners: &[(VertexId, Quadrant)]) -> bool {
    let ncols = d.columns.len();
    let max_rows = d.layouts.iter().map(|l| l.len()).max().unwrap_or(0) + 3;
    let mut cover = vec![vec![0i64; max_rows + 2]; ncols + 2];
    let (v0, q0) = corners[0];
    let i0 = &d.vertices[v0];
    let start = corner_out(i0.col, i0.row, q0);
    let mut cur = start;
    let mut turn: i64 = 2 * count_ew(d, corners); // each E/W corner turns half
    let mut ci = 1usize;
    let mut steps = 0usize;
    loop {
        steps += 1;
        if steps > 200_000 {
            return false;
        }
        // record this edge segment's coverage delta
        if cur.interval <= ncols {
            let sgn = if cur.below { 1 } else { -1 };
            cover[cur.interval][cur.row + 1] += sgn;
        }
        match next_feature(d, cur) {
            Step::Dead => return false,
            Step::Go(next, t) => {
                turn += 2 * t;
                cur = next;
            }
            Step::AtVertex(v, at) => {
                let take = if ci < corners.len() {
                    corners[ci]
                } else {
                    corners[0]
                };
                let ti = &d.vertices[take.0];
                if take.0 == v && corner_in(ti.col, ti.row, take.1) == at {
                    if ci == corners.len() {
                        // closing corner
                        return corner_out(ti.col, ti.row, take.1) == start
                            && turn == 4
                            && winding_ok(&cover);
                    }
                    ci += 1;
                    cur = corner_out(ti.col, ti.row, take.1);
                } else {
                    cur = pass_through(d, v, at);
                }
            }
        }
    }
}

fn count_ew(d: &ResolvedDiagram, corners: &[(VertexId, Quadrant)]) -> i64 {
    let _ = d;
    corners
        .iter()
        .filter(|(_, q)| matches!(q, Quadrant::E | Quadrant::W))
        .count() as i64
}

fn winding_ok(cover: &[Vec<i64>]) -> bool {
    let mut any = false;
    for col in cover {
        let mut acc = 0i64;
        for &dlt in col {
            acc += dlt;
            if acc < 0 {
                return false;
            }
            if acc > 0 {
                any = true;
            }
        }
        if acc != 0 {
            return false;
        }
    }
    any
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Convention;
    use crate::discs::{enumerate_polygons, PolygonQuery};
    use crate::resolve_front;

    fn words_from_sweep(d: &ResolvedDiagram, maxp: usize) -> BTreeSet<Vec<(usize, Quadrant)>> {
        let mut out = BTreeSet::new();
        for p in 1..=maxp {
            let polys = enumerate_polygons(
                d,
                &PolygonQuery {
                    positive_corners: p,
                    ..Default::default()
                },
            )
            .unwrap();
            for poly in polys {
                let w: Vec<(usize, Quadrant)> =
                    poly.corners.iter().map(|c| (c.v, c.q)).collect();
                out.insert(w);
            }
        }
        out
    }

    #[test]
    fn oracle_matches_sweep_on_unknot_and_trefoil() {
        for front in ["L1 R1", "L1 L3 X2 X2 X2 R3 R1"] {
            let d = resolve_front(front, Convention::Normal).unwrap();
            let oracle: BTreeSet<Vec<(usize, Quadrant)>> =
                enumerate_boundary_words(&d, 8, 4000).into_iter().collect();
            let sweep = words_from_sweep(&d, 4);
            let sweep_capped: BTreeSet<_> = sweep
                .iter()
                .filter(|w| w.len() <= 8)
                .cloned()
                .collect();
            assert_eq!(oracle, sweep_capped, "front {front}");
        }
    }
}
