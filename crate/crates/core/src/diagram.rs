//! The resolved Lagrangian-projection model of a front.
//!
//! A right cusp resolves into a crossing followed by a small cap; the loop
//! disc at that crossing contributes the constant term to the differential.
//! Every crossing of the resolved diagram is a Reeb chord generator. At each
//! crossing the two positive quadrants are the opposite pair swept
//! counterclockwise from the over-strand (the strand of greater height);
//! the `Mirror` convention flips the pair for audits.

use serde::{Deserialize, Serialize};

use crate::error::DiagramError;
use crate::f2::GradingRing;
use crate::front::AnalyzedFront;
use crate::rational::Ratio;

pub type VertexId = usize;
pub type StrandId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Convention {
    Normal,
    Mirror,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChordKind {
    Crossing,
    Cusp,
    Morse,
}

/// Which diagonal of the local crossing picture carries the over-strand
/// (the strand with greater z). NwSe descends left to right.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Diag {
    NwSe,
    SwNe,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Quadrant {
    N,
    E,
    S,
    W,
}

/// Provenance of a vertex inside a stacked diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Site {
    /// Vertex of an unstacked diagram.
    Base,
    /// Pure crossing of one copy over a base vertex.
    PureCopy { copy: u8, base: u32 },
    /// Mixed crossing over a base vertex between two copies. `aligned` means
    /// the chord joins the sheets the same way the base chord does.
    Mixed {
        copies: (u8, u8),
        base: u32,
        aligned: bool,
    },
    /// Morse wiggle crossing between two copies on a base component; `left`
    /// marks the western crossing of the pair.
    Morse {
        comp: u32,
        copies: (u8, u8),
        left: bool,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VertexInfo {
    pub name: String,
    pub kind: ChordKind,
    /// Column of the crossing event.
    pub col: usize,
    /// The upper of the two rows being crossed, at that column.
    pub row: usize,
    /// (strand entering at the upper row, strand entering at the lower row).
    pub strands: (StrandId, StrandId),
    pub over: Diag,
    pub degree: i64,
    pub action: Ratio,
    /// (start component, end component) of the chord, bottom to top.
    pub comps: (usize, usize),
    pub site: Site,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StrandInfo {
    pub component: usize,
    pub potential: i64,
    pub copy: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ColEvent {
    /// Two strands born at rows (row, row+1).
    CapLeft { row: usize },
    /// The strands at rows (row, row+1) die into a cap.
    CapRight { row: usize },
    /// The strands at rows (row, row+1) cross at the given vertex.
    Cross { v: VertexId, row: usize },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResolvedDiagram {
    pub columns: Vec<ColEvent>,
    /// layouts[i] = strand at each row just before column i; layouts[n] = after.
    pub layouts: Vec<Vec<StrandId>>,
    pub strands: Vec<StrandInfo>,
    pub vertices: Vec<VertexInfo>,
    pub n_components: usize,
    pub ring: GradingRing,
    pub convention: Convention,
    /// True once chord actions have been solved against the polygon family.
    pub actions_assigned: bool,
    /// z-offset of each copy (single zero entry for base diagrams).
    pub copy_offsets: Vec<Ratio>,
}

impl ResolvedDiagram {
    /// The positive quadrant pair at a vertex.
    pub fn positive_pair(&self, v: VertexId) -> [Quadrant; 2] {
        let ew = match (self.vertices[v].over, self.convention) {
            (Diag::NwSe, Convention::Normal) | (Diag::SwNe, Convention::Mirror) => true,
            _ => false,
        };
        if ew {
            [Quadrant::E, Quadrant::W]
        } else {
            [Quadrant::N, Quadrant::S]
        }
    }

    pub fn quadrant_is_positive(&self, v: VertexId, q: Quadrant) -> bool {
        self.positive_pair(v).contains(&q)
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v.name == name)
    }

    pub fn is_pure(&self, v: VertexId) -> bool {
        self.vertices[v].comps.0 == self.vertices[v].comps.1
    }

    pub fn n_chords(&self) -> usize {
        self.vertices.len()
    }

    /// Number of live strand rows just before column i.
    pub fn rows_before(&self, col: usize) -> usize {
        self.layouts[col].len()
    }

    /// Deterministic content key used for caching.
    pub fn content_key(&self) -> String {
        let mut s = String::new();
        for c in &self.columns {
            match c {
                ColEvent::CapLeft { row } => s.push_str(&format!("L{row};")),
                ColEvent::CapRight { row } => s.push_str(&format!("R{row};")),
                ColEvent::Cross { v, row } => {
                    s.push_str(&format!("X{row}@{};", self.vertices[*v].name))
                }
            }
        }
        s.push_str(&format!(
            "|conv={:?}|copies={}",
            self.convention,
            self.copy_offsets.len()
        ));
        s
    }
}

/// Resolve an analyzed front into its Lagrangian-projection diagram.
/// Chord actions are left unassigned; `discs::assign_actions` fills them.
pub fn resolve(front: &AnalyzedFront, convention: Convention) -> Result<ResolvedDiagram, DiagramError> {
    let strands: Vec<StrandInfo> = front
        .strands
        .iter()
        .map(|s| StrandInfo {
            component: s.component,
            potential: s.potential,
            copy: 0,
        })
        .collect();

    let ring = grading_ring(&front.defects);

    let mut columns = Vec::new();
    let mut layouts: Vec<Vec<StrandId>> = vec![Vec::new()];
    let mut vertices: Vec<VertexInfo> = Vec::new();
    let mut live: Vec<StrandId> = Vec::new();
    let mut n_crossings = 0usize;
    let mut n_cusps = 0usize;

    for (i, ev) in front.word.events.iter().enumerate() {
        match *ev {
            crate::front::FrontEvent::LeftCusp(k) => {
                let &(_, (u, l)) = front
                    .left_cusps
                    .iter()
                    .find(|&&(e, _)| e == i)
                    .expect("left cusp recorded");
                live.insert(k - 1, u);
                live.insert(k, l);
                columns.push(ColEvent::CapLeft { row: k - 1 });
                layouts.push(live.clone());
            }
            crate::front::FrontEvent::Crossing(k) => {
                n_crossings += 1;
                let row = k - 1;
                let (u, l) = (live[row], live[row + 1]);
                let deg = strands[u].potential - strands[l].potential;
                let v = vertices.len();
                vertices.push(VertexInfo {
                    name: format!("a{n_crossings}"),
                    kind: ChordKind::Crossing,
                    col: columns.len(),
                    row,
                    strands: (u, l),
                    // resolution convention: the strand of lesser slope (the
                    // descending one) is the over-strand
                    over: Diag::NwSe,
                    degree: deg,
                    action: Ratio::zero(),
                    comps: (strands[l].component, strands[u].component),
                    site: Site::Base,
                });
                columns.push(ColEvent::Cross { v, row });
                live.swap(row, row + 1);
                layouts.push(live.clone());
            }
            crate::front::FrontEvent::RightCusp(k) => {
                n_cusps += 1;
                let row = k - 1;
                let (u, l) = (live[row], live[row + 1]);
                let v = vertices.len();
                vertices.push(VertexInfo {
                    name: format!("b{n_cusps}"),
                    kind: ChordKind::Cusp,
                    col: columns.len(),
                    row,
                    strands: (u, l),
                    over: Diag::NwSe,
                    degree: 1,
                    action: Ratio::zero(),
                    comps: (strands[u].component, strands[u].component),
                    site: Site::Base,
                });
                columns.push(ColEvent::Cross { v, row });
                live.swap(row, row + 1);
                layouts.push(live.clone());
                // the loop cap right after the cusp crossing
                columns.push(ColEvent::CapRight { row });
                live.remove(row + 1);
                live.remove(row);
                layouts.push(live.clone());
            }
        }
    }

    Ok(ResolvedDiagram {
        columns,
        layouts,
        strands,
        vertices,
        n_components: front.n_components,
        ring,
        convention,
        actions_assigned: false,
        copy_offsets: vec![Ratio::zero()],
    })
}

pub fn grading_ring(defects: &[i64]) -> GradingRing {
    let mut g = 0i64;
    for &d in defects {
        if d != 0 {
            g = if g == 0 { d } else { gcd64(g, d) };
        }
    }
    if g == 0 {
        GradingRing::Z
    } else {
        GradingRing::Mod(g as u32)
    }
}

fn gcd64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::front::{analyze, parse_front};

    fn diagram(text: &str) -> ResolvedDiagram {
        let f = analyze(&parse_front(text).unwrap()).unwrap();
        resolve(&f, Convention::Normal).unwrap()
    }

    #[test]
    fn unknot_resolves_to_one_cusp_chord() {
        let d = diagram("L1 R1");
        assert_eq!(d.n_chords(), 1);
        assert_eq!(d.vertices[0].kind, ChordKind::Cusp);
        assert_eq!(d.vertices[0].degree, 1);
        assert_eq!(d.ring, GradingRing::Z);
    }

    #[test]
    fn trefoil_resolves_to_five_chords() {
        let d = diagram("L1 L3 X2 X2 X2 R3 R1");
        assert_eq!(d.n_chords(), 5);
        let degs: Vec<i64> = d.vertices.iter().map(|v| v.degree).collect();
        assert_eq!(degs, vec![0, 0, 0, 1, 1]);
        let names: Vec<&str> = d.vertices.iter().map(|v| v.name.as_str()).collect();
        assert_eq!(names, vec!["a1", "a2", "a3", "b1", "b2"]);
    }

    #[test]
    fn split_union_has_no_mixed_chords() {
        let d = diagram("L1 R1 L1 R1");
        assert_eq!(d.n_chords(), 2);
        assert!(d.vertices.iter().all(|v| v.comps.0 == v.comps.1));
        assert_eq!(d.n_components, 2);
    }

    #[test]
    fn nonzero_rotation_selects_mod_ring() {
        let d = diagram("L1 L1 R2 R1");
        assert_eq!(d.ring, GradingRing::Mod(2));
    }

    #[test]
    fn quadrant_signs_follow_convention() {
        let d = diagram("L1 R1");
        assert_eq!(d.positive_pair(0), [Quadrant::E, Quadrant::W]);
        let f = analyze(&parse_front("L1 R1").unwrap()).unwrap();
        let m = resolve(&f, Convention::Mirror).unwrap();
        assert_eq!(m.positive_pair(0), [Quadrant::N, Quadrant::S]);
    }
}
