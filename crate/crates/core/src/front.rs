//! Plat-position front words for Legendrian links and their classical data.
//!
//! A front is a whitespace-separated event word read left to right. `L<k>`
//! inserts a cusp pair at position k, `R<k>` closes the strands at positions
//! k, k+1 with a right cusp, `X<k>` crosses them. Positions are 1-based from
//! the top of the front. An optional `@c<i>` token after an `L` event pins
//! the component label of that cusp.

use crate::error::FrontError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrontEvent {
    LeftCusp(usize),
    RightCusp(usize),
    Crossing(usize),
}

#[derive(Clone, Debug)]
pub struct FrontWord {
    pub events: Vec<FrontEvent>,
    /// Component tag per event (only meaningful on left cusps).
    pub tags: Vec<Option<usize>>,
    pub text: String,
}

/// One maximal strand of the front: born at a left cusp, dies at a right cusp.
#[derive(Clone, Debug)]
pub struct Strand {
    /// Event index of the birth cusp and whether this is its upper branch.
    pub born: (usize, bool),
    /// Event index of the death cusp and whether this is its upper branch.
    pub dies: (usize, bool),
    pub component: usize,
    /// Maslov potential (normalized per component; meaningful modulo the
    /// grading defect when the rotation number is nonzero).
    pub potential: i64,
    /// Orientation from the component traversal: true if directed +x.
    pub east: bool,
}

/// A crossing of the front: event index plus the two strands involved,
/// recorded as (upper-entering, lower-entering).
#[derive(Clone, Copy, Debug)]
pub struct FrontCrossing {
    pub event: usize,
    pub upper: usize,
    pub lower: usize,
}

/// A right cusp: event index plus (upper, lower) strands that die there.
#[derive(Clone, Copy, Debug)]
pub struct FrontRightCusp {
    pub event: usize,
    pub upper: usize,
    pub lower: usize,
}

#[derive(Clone, Debug)]
pub struct AnalyzedFront {
    pub word: FrontWord,
    pub strands: Vec<Strand>,
    pub crossings: Vec<FrontCrossing>,
    pub right_cusps: Vec<FrontRightCusp>,
    /// Left cusp events as (event index, (upper strand, lower strand)).
    pub left_cusps: Vec<(usize, (usize, usize))>,
    pub n_components: usize,
    /// Per component: (tb, rot).
    pub classical: Vec<(i64, i64)>,
    /// Grading defect per component: 2 * rot picked up around the loop.
    pub defects: Vec<i64>,
}

pub fn parse_front(text: &str) -> Result<FrontWord, FrontError> {
    let mut events = Vec::new();
    let mut tags = Vec::new();
    for tok in text.split_whitespace() {
        if let Some(rest) = tok.strip_prefix("@c") {
            let i: usize = rest
                .parse()
                .map_err(|_| FrontError::MalformedEvent(tok.to_string()))?;
            match tags.last_mut() {
                Some(slot @ None) => *slot = Some(i),
                _ => return Err(FrontError::MalformedEvent(tok.to_string())),
            }
            continue;
        }
        let (kind, num) = tok.split_at(1);
        let k: usize = num
            .parse()
            .map_err(|_| FrontError::MalformedEvent(tok.to_string()))?;
        if k == 0 {
            return Err(FrontError::MalformedEvent(tok.to_string()));
        }
        let ev = match kind {
            "L" => FrontEvent::LeftCusp(k),
            "R" => FrontEvent::RightCusp(k),
            "X" => FrontEvent::Crossing(k),
            _ => return Err(FrontError::MalformedEvent(tok.to_string())),
        };
        events.push(ev);
        tags.push(None);
    }
    let w = FrontWord {
        events,
        tags,
        text: text.split_whitespace().collect::<Vec<_>>().join(" "),
    };
    validate(&w)?;
    Ok(w)
}

fn validate(w: &FrontWord) -> Result<(), FrontError> {
    let mut live = 0usize;
    for (i, ev) in w.events.iter().enumerate() {
        match *ev {
            FrontEvent::LeftCusp(k) => {
                if k > live + 1 {
                    return Err(FrontError::StrandCountMismatch {
                        index: i,
                        detail: format!("L{k} with {live} live strands"),
                    });
                }
                live += 2;
            }
            FrontEvent::RightCusp(k) => {
                if live < 2 || k > live - 1 {
                    return Err(FrontError::StrandCountMismatch {
                        index: i,
                        detail: format!("R{k} with {live} live strands"),
                    });
                }
                live -= 2;
            }
            FrontEvent::Crossing(k) => {
                if live < 2 || k > live - 1 {
                    return Err(FrontError::StrandCountMismatch {
                        index: i,
                        detail: format!("X{k} with {live} live strands"),
                    });
                }
            }
        }
    }
    if live != 0 {
        return Err(FrontError::NotPlatClosable(format!(
            "{live} strands still open at the end of the word"
        )));
    }
    if w.events.is_empty() {
        return Err(FrontError::NotPlatClosable("empty word".into()));
    }
    Ok(())
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let r = self.find(self.0[x]);
            self.0[x] = r;
            r
        } else {
            x
        }
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra] = rb;
        }
    }
}

/// Run the event word, producing strands, crossings, cusps, components,
/// orientations, potentials, and classical invariants.
pub fn analyze(word: &FrontWord) -> Result<AnalyzedFront, FrontError> {
    let mut strands: Vec<Strand> = Vec::new();
    let mut live: Vec<usize> = Vec::new();
    let mut crossings = Vec::new();
    let mut right_cusps = Vec::new();
    let mut left_cusps = Vec::new();

    for (i, ev) in word.events.iter().enumerate() {
        match *ev {
            FrontEvent::LeftCusp(k) => {
                let up = strands.len();
                let lo = strands.len() + 1;
                for (id, upper) in [(up, true), (lo, false)] {
                    strands.push(Strand {
                        born: (i, upper),
                        dies: (usize::MAX, false),
                        component: usize::MAX,
                        potential: 0,
                        east: true,
                    });
                    let _ = id;
                }
                live.insert(k - 1, up);
                live.insert(k, lo);
                left_cusps.push((i, (up, lo)));
            }
            FrontEvent::RightCusp(k) => {
                let up = live[k - 1];
                let lo = live[k];
                strands[up].dies = (i, true);
                strands[lo].dies = (i, false);
                live.remove(k);
                live.remove(k - 1);
                right_cusps.push(FrontRightCusp {
                    event: i,
                    upper: up,
                    lower: lo,
                });
            }
            FrontEvent::Crossing(k) => {
                let up = live[k - 1];
                let lo = live[k];
                crossings.push(FrontCrossing {
                    event: i,
                    upper: up,
                    lower: lo,
                });
                live.swap(k - 1, k);
            }
        }
    }

    // Components: strands joined at cusps.
    let mut uf = UnionFind::new(strands.len());
    for &(_, (u, l)) in &left_cusps {
        uf.union(u, l);
    }
    for rc in &right_cusps {
        uf.union(rc.upper, rc.lower);
    }
    // Component numbering: by first left cusp appearance, unless tags pin it.
    let mut comp_of_root: Vec<(usize, usize)> = Vec::new(); // (root, comp id)
    let mut next = 0usize;
    let mut tagged: Vec<(usize, usize)> = Vec::new();
    for &(ev, (u, _)) in &left_cusps {
        let root = uf.find(u);
        if !comp_of_root.iter().any(|&(r, _)| r == root) {
            if let Some(t) = word.tags[ev] {
                tagged.push((root, t));
            }
            comp_of_root.push((root, next));
            next += 1;
        }
    }
    // Apply explicit tags where given (they must form a prefix-free relabel).
    for &(root, t) in &tagged {
        if t < next {
            // swap labels t and current
            let cur = comp_of_root.iter().find(|&&(r, _)| r == root).unwrap().1;
            for e in comp_of_root.iter_mut() {
                if e.1 == t {
                    e.1 = cur;
                } else if e.0 == root {
                    e.1 = t;
                }
            }
        }
    }
    let n_components = next;
    let comp = |uf: &mut UnionFind, s: usize, table: &[(usize, usize)]| {
        let root = uf.find(s);
        table.iter().find(|&&(r, _)| r == root).unwrap().1
    };
    for s in 0..strands.len() {
        strands[s].component = comp(&mut uf, s, &comp_of_root);
    }

    // Orientation: traverse each component. Each strand's two ends are at its
    // birth and death cusps; cusps pair the branches.
    let mut seen = vec![false; strands.len()];
    let mut up_cusps = vec![0i64; n_components];
    let mut down_cusps = vec![0i64; n_components];
    for start in 0..strands.len() {
        if seen[start] {
            continue;
        }
        let c = strands[start].component;
        // go east along `start`
        let mut cur = start;
        let mut east = true;
        loop {
            seen[cur] = true;
            strands[cur].east = east;
            if east {
                // arrive at the death (right) cusp
                let (ev, upper) = strands[cur].dies;
                let rc = right_cusps.iter().find(|r| r.event == ev).unwrap();
                // arriving on the upper branch sweeps through vertical-down
                if upper {
                    down_cusps[c] += 1;
                } else {
                    up_cusps[c] += 1;
                }
                cur = if upper { rc.lower } else { rc.upper };
                east = false;
            } else {
                // arrive at the birth (left) cusp
                let (ev, upper) = strands[cur].born;
                let &(_, (u, l)) = left_cusps.iter().find(|&&(e, _)| e == ev).unwrap();
                if upper {
                    down_cusps[c] += 1;
                } else {
                    up_cusps[c] += 1;
                }
                cur = if upper { l } else { u };
                east = true;
            }
            if cur == start && east {
                break;
            }
        }
    }

    // Writhe per component pair; tb uses the self-writhe of each component.
    let mut writhe = vec![0i64; n_components];
    for x in &crossings {
        let (u, l) = (x.upper, x.lower);
        if strands[u].component == strands[l].component {
            let sign = if strands[u].east == strands[l].east {
                1
            } else {
                -1
            };
            writhe[strands[u].component] += sign;
        }
    }
    let mut rc_count = vec![0i64; n_components];
    for rc in &right_cusps {
        if strands[rc.upper].component == strands[rc.lower].component {
            rc_count[strands[rc.upper].component] += 1;
        }
    }
    let classical: Vec<(i64, i64)> = (0..n_components)
        .map(|c| {
            let tb = writhe[c] - rc_count[c];
            let rot = (down_cusps[c] - up_cusps[c]) / 2;
            (tb, rot)
        })
        .collect();

    // Maslov potentials: mu(upper) = mu(lower) + 1 at every cusp. BFS per
    // component from the leftmost left cusp, upper branch pinned to 1.
    let mut potential = vec![i64::MIN; strands.len()];
    let mut defects = vec![0i64; n_components];
    for c in 0..n_components {
        let root_cusp = left_cusps
            .iter()
            .find(|&&(_, (u, _))| strands[u].component == c);
        let Some(&(_, (u0, _))) = root_cusp else {
            continue;
        };
        potential[u0] = 1;
        let mut queue = vec![u0];
        while let Some(s) = queue.pop() {
            let p = potential[s];
            // relations at both end cusps of s
            let mut rel = Vec::new();
            {
                let (ev, upper) = strands[s].born;
                let &(_, (u, l)) = left_cusps.iter().find(|&&(e, _)| e == ev).unwrap();
                let other = if upper { l } else { u };
                // mu(u) = mu(l) + 1
                let other_pot = if upper { p - 1 } else { p + 1 };
                rel.push((other, other_pot));
            }
            {
                let (ev, upper) = strands[s].dies;
                let rc = right_cusps.iter().find(|r| r.event == ev).unwrap();
                let other = if upper { rc.lower } else { rc.upper };
                let other_pot = if upper { p - 1 } else { p + 1 };
                rel.push((other, other_pot));
            }
            for (other, pot) in rel {
                if potential[other] == i64::MIN {
                    potential[other] = pot;
                    queue.push(other);
                } else if potential[other] != pot {
                    let d = (potential[other] - pot).abs();
                    defects[c] = if defects[c] == 0 {
                        d
                    } else {
                        gcd64(defects[c], d)
                    };
                }
            }
        }
    }
    for s in 0..strands.len() {
        strands[s].potential = potential[s];
    }

    Ok(AnalyzedFront {
        word: word.clone(),
        strands,
        crossings,
        right_cusps,
        left_cusps,
        n_components,
        classical,
        defects,
    })
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

    #[test]
    fn minimal_unknot_parses() {
        let w = parse_front("L1 R1").unwrap();
        assert_eq!(w.events.len(), 2);
        let a = analyze(&w).unwrap();
        assert_eq!(a.n_components, 1);
        assert_eq!(a.classical, vec![(-1, 0)]);
        assert_eq!(a.crossings.len(), 0);
        assert_eq!(a.right_cusps.len(), 1);
    }

    #[test]
    fn cusp_index_out_of_range() {
        assert!(matches!(
            parse_front("L1 R2"),
            Err(FrontError::StrandCountMismatch { .. })
        ));
    }

    #[test]
    fn unbalanced_word_rejected() {
        assert!(matches!(
            parse_front("L1 L1"),
            Err(FrontError::NotPlatClosable(_))
        ));
        assert!(matches!(
            parse_front("L1 X9 R1"),
            Err(FrontError::StrandCountMismatch { .. })
        ));
        assert!(matches!(
            parse_front("Q1"),
            Err(FrontError::MalformedEvent(_))
        ));
    }

    #[test]
    fn trefoil_classical_invariants() {
        let w = parse_front("L1 L3 X2 X2 X2 R3 R1").unwrap();
        let a = analyze(&w).unwrap();
        assert_eq!(a.n_components, 1);
        assert_eq!(a.crossings.len(), 3);
        assert_eq!(a.right_cusps.len(), 2);
        assert_eq!(a.classical, vec![(1, 0)]);
        // standard plat: all three crossings between strands of equal potential
        for x in &a.crossings {
            assert_eq!(
                a.strands[x.upper].potential,
                a.strands[x.lower].potential
            );
        }
    }

    #[test]
    fn split_union_is_additive() {
        let w = parse_front("L1 R1 L1 R1").unwrap();
        let a = analyze(&w).unwrap();
        assert_eq!(a.n_components, 2);
        assert_eq!(a.classical, vec![(-1, 0), (-1, 0)]);
    }

    #[test]
    fn stabilized_unknot_has_nonzero_rotation() {
        // an unknot with an extra zig-zag: L1 L1 R2 R1 nests a second cusp pair
        let w = parse_front("L1 L1 R2 R1").unwrap();
        let a = analyze(&w).unwrap();
        assert_eq!(a.n_components, 1);
        let (tb, rot) = a.classical[0];
        assert_eq!(tb, -2);
        assert_eq!(rot.abs(), 1);
        assert!(a.defects[0] != 0);
    }
}
