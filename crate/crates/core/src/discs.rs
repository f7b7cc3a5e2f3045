//! Enumeration of rigid admissible immersed polygons by a left-to-right slab
//! sweep.
//!
//! A partial polygon is tracked as a multiset of slabs: vertical intervals
//! `(top, bot)` between strand rows, with the disc's boundary running along
//! the bounding strands. Events transform the multiset:
//!
//! * crossings: a bounding edge passes straight through, takes a convex
//!   corner (N above, S below), dies in the west wedge (W), or a new wedge is
//!   born east (E);
//! * left caps: a slab is born, or a spanning slab splits when the boundary
//!   wraps the cap from outside;
//! * right caps: the thin slab dies, or two slabs merge when the boundary
//!   wraps the cap from outside.
//!
//! Wrapping a cap from the inside is excluded: the two sheets would join in a
//! branched double cover of the cap tip (the boundary picks up a full extra
//! half-turn), which is not an immersion. Births raise the Euler
//! characteristic by one, merges lower it; a finished sweep is a polygon iff
//! everything connects into a single piece of characteristic one with one
//! boundary cycle. Corners occupy signed quadrants; the Reeb sign of the
//! quadrant decides positivity.

use std::collections::BTreeMap;

use crate::diagram::{ColEvent, Quadrant, ResolvedDiagram, VertexId};
use crate::error::{DiagramError, DiscError};
use crate::f2::{NcPoly, Word};
use crate::rational::Ratio;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Slab {
    top: u16,
    bot: u16,
    piece: u16,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SlabAct {
    Keep,
    Pass,
    CornerN,
    CornerS,
    DeathW,
    SplitOut,
}

#[derive(Clone, Debug, Default)]
struct ColChoice {
    acts: Vec<SlabAct>,
    births: u8,
    /// (index of slab with bot edge on r, index of slab with top edge on r+1)
    down_match: Vec<(usize, usize)>,
    /// (index of slab with bot edge on r+1, index of slab with top edge on r);
    /// equal indices mean the thin slab closes.
    up_match: Vec<(usize, usize)>,
}

/// A corner of a polygon, in boundary order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Corner {
    pub v: VertexId,
    pub q: Quadrant,
}

/// A rigid immersed polygon: its corner cycle (counterclockwise, starting at
/// a canonical rotation) and its slab-cell area.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polygon {
    pub corners: Vec<Corner>,
    pub cells: usize,
}

impl Polygon {
    pub fn positive_corners(&self, d: &ResolvedDiagram) -> Vec<Corner> {
        self.corners
            .iter()
            .copied()
            .filter(|c| d.quadrant_is_positive(c.v, c.q))
            .collect()
    }

    pub fn negative_corners(&self, d: &ResolvedDiagram) -> Vec<Corner> {
        self.corners
            .iter()
            .copied()
            .filter(|c| !d.quadrant_is_positive(c.v, c.q))
            .collect()
    }

    /// The word of negative corners read counterclockwise starting just after
    /// the unique positive corner. Only meaningful for one-positive polygons.
    pub fn negative_word(&self, d: &ResolvedDiagram) -> Word {
        let pos: Vec<usize> = (0..self.corners.len())
            .filter(|&i| d.quadrant_is_positive(self.corners[i].v, self.corners[i].q))
            .collect();
        assert_eq!(pos.len(), 1, "negative_word needs exactly one positive corner");
        let start = pos[0];
        let n = self.corners.len();
        let mut w = Vec::new();
        for k in 1..n {
            let c = self.corners[(start + k) % n];
            w.push(c.v as u32);
        }
        Word(w)
    }

    /// Action balance: sum over positive corners minus sum over negatives.
    pub fn action_balance(&self, d: &ResolvedDiagram) -> Ratio {
        let mut t = Ratio::zero();
        for c in &self.corners {
            let a = d.vertices[c.v].action;
            if d.quadrant_is_positive(c.v, c.q) {
                t = t + a;
            } else {
                t = t - a;
            }
        }
        t
    }
}

#[derive(Clone, Debug, Default)]
pub struct PolygonQuery {
    /// Exact number of positive corners.
    pub positive_corners: usize,
    /// If set, one positive corner must sit at this vertex.
    pub anchor: Option<VertexId>,
    /// Prune branches whose negative-corner action total exceeds this.
    pub action_budget: Option<Ratio>,
    /// Override the structural cell budget.
    pub cell_budget: Option<usize>,
    /// Positive corners allowed only at vertices passing this mask.
    pub positive_mask: Option<Vec<bool>>,
    /// Cap on the number of corners at mixed (inter-component) vertices.
    pub mixed_corner_cap: Option<usize>,
    /// Override the engine ceilings on total births / simultaneous slabs.
    pub max_births: Option<usize>,
    pub max_slabs: Option<usize>,
    /// Keep branches whose negative action total exactly meets the positive
    /// bound; needed while chord actions are still unperturbed macro values.
    pub nonstrict_action_prune: bool,
}

impl PolygonQuery {
    pub fn one_positive() -> Self {
        PolygonQuery {
            positive_corners: 1,
            ..Default::default()
        }
    }

    pub fn anchored(p: usize, v: VertexId) -> Self {
        PolygonQuery {
            positive_corners: p,
            anchor: Some(v),
            ..Default::default()
        }
    }
}

/// Maximum slabs born at one column passage per branch.
const MAX_BIRTHS: u8 = 2;
/// Total birth events per polygon.
const MAX_TOTAL_BIRTHS: usize = 4;
/// Hard ceiling on simultaneous slabs.
const MAX_SLABS: usize = 8;
/// Ceiling on the dead-subtree memo.
const DEAD_MEMO_CAP: usize = 8_000_000;

struct Search<'a> {
    d: &'a ResolvedDiagram,
    q: &'a PolygonQuery,
    budget: usize,
    budget_hit: bool,
    /// Largest action any allowed positive corner can contribute. Since every
    /// polygon has strictly positive action balance, the running negative
    /// total must stay below the positives taken so far plus this bound for
    /// each positive corner still to come.
    max_pos_action: Option<Ratio>,
    out: Vec<(Vec<ColChoice>, usize)>,
    caps_right_after: Vec<usize>,
    dead: std::collections::HashSet<Vec<u32>>,
    feasible: Feasibility,
    // running counters along the DFS path
    positives: usize,
    anchor_hit: bool,
    mixed_corners: usize,
    neg_action: Ratio,
    pos_action: Ratio,
    nodes: u64,
}

pub fn enumerate_polygons(
    d: &ResolvedDiagram,
    q: &PolygonQuery,
) -> Result<Vec<Polygon>, DiscError> {
    let max_rows = d.layouts.iter().map(|l| l.len()).max().unwrap_or(0);
    let budget = q
        .cell_budget
        .unwrap_or_else(|| (max_rows.max(1)) * d.columns.len().max(1) * 2);
    // largest action a positive corner could contribute
    let max_pos_action = if d.actions_assigned && d.n_chords() > 0 {
        (0..d.n_chords())
            .filter(|&v| q.positive_mask.as_ref().map_or(true, |m| m[v]))
            .map(|v| d.vertices[v].action)
            .max()
    } else {
        None
    };
    let caps_right_after: Vec<usize> = {
        let mut v = vec![0usize; d.columns.len() + 1];
        for i in (0..d.columns.len()).rev() {
            v[i] = v[i + 1]
                + usize::from(matches!(d.columns[i], ColEvent::CapRight { .. }));
        }
        v
    };
    let mut s = Search {
        d,
        q,
        budget,
        budget_hit: false,
        max_pos_action,
        out: Vec::new(),
        caps_right_after,
        dead: std::collections::HashSet::new(),
        feasible: Feasibility::new(d.columns.clone()),
        positives: 0,
        anchor_hit: false,
        mixed_corners: 0,
        neg_action: Ratio::zero(),
        pos_action: Ratio::zero(),
        nodes: 0,
    };
    let mut hist: Vec<ColChoice> = Vec::new();
    let mut pieces = PieceTracker::default();
    let _ = s.dfs(0, Vec::new(), &mut hist, &mut pieces, 0);
    if s.budget_hit {
        return Err(DiscError::BudgetExceeded { budget });
    }
    let mut polys: Vec<Polygon> = Vec::with_capacity(s.out.len());
    for (h, cells) in &s.out {
        match replay(d, h, *cells) {
            Some(p) => polys.push(p),
            None => {
                if std::env::var_os("LCH_SWEEP_TRACE").is_some() {
                    eprintln!("replay dropped a history: {h:?}");
                }
            }
        }
    }
    if d.actions_assigned && !q.nonstrict_action_prune {
        // with fully perturbed actions every rigid disc has strictly positive
        // balance; combinatorial mirror twins of honest strips do not
        polys.retain(|p| p.action_balance(d).is_positive());
    }
    polys.sort_by(|a, b| a.corners.cmp(&b.corners).then(a.cells.cmp(&b.cells)));
    Ok(polys)
}

#[derive(Clone, Default)]
struct PieceTracker {
    parent: Vec<u16>,
    births: usize,
    merges: usize,
}

impl PieceTracker {
    fn fresh(&mut self) -> u16 {
        let id = self.parent.len() as u16;
        self.parent.push(id);
        self.births += 1;
        id
    }
    fn find(&mut self, x: u16) -> u16 {
        let p = self.parent[x as usize];
        if p == x {
            x
        } else {
            let r = self.find(p);
            self.parent[x as usize] = r;
            r
        }
    }
    fn union(&mut self, a: u16, b: u16) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra as usize] = rb;
        }
        self.merges += 1;
    }
    fn connected_single(&mut self) -> bool {
        if self.parent.is_empty() {
            return false;
        }
        let r0 = self.find(0);
        (1..self.parent.len() as u16).all(|i| self.find(i) == r0)
    }

    /// True if some piece has closed while other material is still live; such
    /// a branch can never reconnect into one polygon.
    fn stranded(&mut self, live: &[Slab]) -> bool {
        if self.parent.is_empty() {
            return false;
        }
        let mut roots: Vec<u16> = (0..self.parent.len() as u16)
            .map(|i| self.find(i))
            .collect();
        roots.sort_unstable();
        roots.dedup();
        if roots.len() <= 1 {
            return false;
        }
        let live_roots: Vec<u16> = live.iter().map(|s| self.find(s.piece)).collect();
        roots.iter().any(|r| !live_roots.contains(r)) && !live.is_empty()
    }
}

impl<'a> Search<'a> {
    /// Returns (found a completion below, subtree was cut by a path-dependent
    /// budget somewhere). Subtrees that found nothing and were not cut are
    /// memoized by their path-independent signature and never explored again.
    fn dfs(
        &mut self,
        col: usize,
        state: Vec<Slab>,
        hist: &mut Vec<ColChoice>,
        pieces: &mut PieceTracker,
        cells: usize,
    ) -> (bool, bool) {
        if col == self.d.columns.len()
            || (state.is_empty() && self.positives == self.q.positive_corners)
        {
            if state.is_empty()
                && self.positives == self.q.positive_corners
                && (self.q.anchor.is_none() || self.anchor_hit)
                && pieces.births > 0
                && pieces.births - pieces.merges == 1
                && pieces.clone().connected_single()
            {
                // pad the history with empty columns so replay sees the full
                // event list
                let mut h = hist.clone();
                while h.len() < self.d.columns.len() {
                    h.push(ColChoice::default());
                }
                if std::env::var_os("LCH_SWEEP_TRACE").is_some() {
                    eprintln!(
                        "polygon: births {} merges {} cells {}",
                        pieces.births, pieces.merges, cells
                    );
                }
                self.out.push((h, cells));
                return (true, false);
            }
            return (false, false);
        }
        if state.is_empty() && pieces.births > 0 {
            // something closed before all positive corners were found; later
            // births could never reconnect to it
            return (false, false);
        }
        if let Some(a) = self.q.anchor {
            if !self.anchor_hit && col > self.d.vertices[a].col {
                return (false, false);
            }
        }
        let key = if std::env::var_os("LCH_NO_MEMO").is_some() {
            None
        } else {
            self.memo_key(col, &state, pieces)
        };
        if let Some(k) = &key {
            if self.dead.contains(k) {
                return (false, false);
            }
        }
        self.nodes += 1;
        if std::env::var_os("LCH_SWEEP_TRACE").is_some() && self.nodes % 5_000_000 == 0 {
            eprintln!(
                "sweep: {}M nodes, col {}, slabs {}, out {}",
                self.nodes / 1_000_000,
                col,
                state.len(),
                self.out.len()
            );
        }
        let ev = self.d.columns[col];
        let choices = legal_choices(&state, ev);
        let mut found = false;
        let mut tainted = false;
        for choice in choices {
            let mut st = state.clone();
            let mut pc = pieces.clone();
            let save = CounterSave::save(self);
            let mut taken: Vec<(VertexId, Quadrant)> = Vec::new();
            let ok = apply_choice(&mut st, ev, &choice, &mut pc, &mut |v, q| {
                taken.push((v, q));
                true
            });
            if ok && self.absorb_corners(&taken) {
                let ncells = cells + st.len();
                if ncells > self.budget {
                    self.budget_hit = true;
                    tainted = true;
                } else if st.len() > self.q.max_slabs.unwrap_or(MAX_SLABS)
                    || pc.births > self.q.max_births.unwrap_or(MAX_TOTAL_BIRTHS)
                {
                    // engine ceilings, far beyond any rigid disc at desk
                    // scale; the small-diagram oracle and the theorem gates
                    // (d squared, acyclicity) audit them
                } else if self.action_pruned() && std::env::var_os("LCH_NO_ACTION_PRUNE").is_none() {
                    tainted = true;
                } else if self.counter_pruned(&pc)
                    || (std::env::var_os("LCH_NO_STRAND_PRUNE").is_none() && pc.stranded(&st))
                    || live_pieces(&mut pc, &st) > 1 + 6 * self.caps_right_after[col + 1]
                    || (std::env::var_os("LCH_NO_FEAS_PRUNE").is_none()
                        && !st.iter().all(|s| self.feasible.slab_ok(col + 1, *s)))
                {
                    // dead by path-independent conditions
                } else {
                    hist.push(choice);
                    let (f, t) = self.dfs(col + 1, st, hist, &mut pc, ncells);
                    hist.pop();
                    found |= f;
                    tainted |= t;
                }
            }
            save.restore(self);
        }
        if !found && !tainted {
            if let Some(k) = key {
                if self.dead.len() < DEAD_MEMO_CAP {
                    self.dead.insert(k);
                }
            }
        }
        (found, tainted)
    }

    /// Path-independent signature: column, intervals with canonical piece
    /// blocks, and the corner counters. None when a closed piece exists (such
    /// nodes never recurse anyway).
    fn memo_key(
        &mut self,
        col: usize,
        state: &[Slab],
        pieces: &mut PieceTracker,
    ) -> Option<Vec<u32>> {
        let mut roots: Vec<u16> = state.iter().map(|s| pieces.find(s.piece)).collect();
        let mut live: Vec<u16> = roots.clone();
        live.sort_unstable();
        live.dedup();
        if (pieces.births - pieces.merges) != live.len() {
            return None; // closed piece in play
        }
        // canonical block ids by first occurrence
        let mut blocks: Vec<u16> = Vec::new();
        for r in roots.iter_mut() {
            let id = match blocks.iter().position(|b| b == r) {
                Some(i) => i,
                None => {
                    blocks.push(*r);
                    blocks.len() - 1
                }
            };
            *r = id as u16;
        }
        let mut key = Vec::with_capacity(3 + state.len());
        key.push(col as u32);
        key.push(
            (self.positives as u32) << 24
                | (pieces.births.min(255) as u32) << 16
                | (self.mixed_corners.min(64) as u32) << 8
                | u32::from(self.anchor_hit),
        );
        for (s, b) in state.iter().zip(roots) {
            key.push((s.top as u32) << 20 | (s.bot as u32) << 8 | b as u32);
        }
        Some(key)
    }

    /// Fold a batch of corner events into the counters; false if a positive
    /// corner lands outside the allowed mask.
    fn absorb_corners(&mut self, taken: &[(VertexId, Quadrant)]) -> bool {
        for &(v, q) in taken {
            if self.d.quadrant_is_positive(v, q) {
                if let Some(mask) = &self.q.positive_mask {
                    if !mask[v] {
                        return false;
                    }
                }
                self.positives += 1;
                self.pos_action = self.pos_action + self.d.vertices[v].action;
                if self.q.anchor == Some(v) {
                    self.anchor_hit = true;
                }
            } else {
                self.neg_action = self.neg_action + self.d.vertices[v].action;
            }
            if !self.d.is_pure(v) {
                self.mixed_corners += 1;
            }
        }
        true
    }

    fn counter_pruned(&self, _pieces: &PieceTracker) -> bool {
        if self.positives > self.q.positive_corners {
            return true;
        }
        if let Some(cap) = self.q.mixed_corner_cap {
            if self.mixed_corners > cap {
                return true;
            }
        }
        false
    }

    fn action_pruned(&self) -> bool {
        if self.positives <= self.q.positive_corners {
            if let Some(m) = self.max_pos_action {
                let remaining = self.q.positive_corners - self.positives;
                let lim = self.pos_action + m * (remaining as i128);
                let cut = if self.q.nonstrict_action_prune {
                    self.neg_action > lim
                } else {
                    !(self.neg_action < lim)
                };
                if cut {
                    return true;
                }
            }
        }
        if let Some(b) = self.q.action_budget {
            if self.d.actions_assigned && self.neg_action > b {
                return true;
            }
        }
        false
    }

}

/// Apply a choice to a state; corner events are reported through the
/// callback, which may veto (returning false kills the branch). Returns
/// false if the choice is structurally illegal.
fn apply_choice(
    state: &mut Vec<Slab>,
    ev: ColEvent,
    choice: &ColChoice,
    pieces: &mut PieceTracker,
    corner: &mut dyn FnMut(VertexId, Quadrant) -> bool,
) -> bool {
    {
        match ev {
            ColEvent::Cross { v, row } => {
                let r = row as u16;
                let mut next = Vec::with_capacity(state.len() + choice.births as usize);
                for (i, s) in state.iter().enumerate() {
                    let mut s = *s;
                    match choice.acts[i] {
                        SlabAct::Keep => {}
                        SlabAct::Pass => {
                            if s.bot == r {
                                s.bot = r + 1;
                            } else if s.top == r + 1 {
                                s.top = r;
                            } else if s.top == r {
                                s.top = r + 1;
                            } else if s.bot == r + 1 {
                                s.bot = r;
                            }
                            if s.top >= s.bot {
                                return false;
                            }
                        }
                        SlabAct::CornerN => {
                            if !corner(v, Quadrant::N) {
                                return false;
                            }
                        }
                        SlabAct::CornerS => {
                            if !corner(v, Quadrant::S) {
                                return false;
                            }
                        }
                        SlabAct::DeathW => {
                            if !corner(v, Quadrant::W) {
                                return false;
                            }
                            continue;
                        }
                        _ => unreachable!(),
                    }
                    next.push(s);
                }
                for _ in 0..choice.births {
                    if !corner(v, Quadrant::E) {
                        return false;
                    }
                    next.push(Slab {
                        top: r,
                        bot: r + 1,
                        piece: pieces.fresh(),
                    });
                }
                next.sort_by_key(|s| (s.top, s.bot));
                *state = next;
            }
            ColEvent::CapLeft { row } => {
                let r = row as u16;
                let mut next = Vec::new();
                for (i, s) in state.iter().enumerate() {
                    let mut s = *s;
                    if s.top >= r {
                        s.top += 2;
                    }
                    if s.bot >= r {
                        s.bot += 2;
                    }
                    match choice.acts[i] {
                        SlabAct::Keep => next.push(s),
                        SlabAct::SplitOut => {
                            next.push(Slab {
                                top: s.top,
                                bot: r,
                                piece: s.piece,
                            });
                            next.push(Slab {
                                top: r + 1,
                                bot: s.bot,
                                piece: s.piece,
                            });
                        }
                        _ => unreachable!(),
                    }
                }
                for _ in 0..choice.births {
                    next.push(Slab {
                        top: r,
                        bot: r + 1,
                        piece: pieces.fresh(),
                    });
                }
                next.sort_by_key(|s| (s.top, s.bot));
                *state = next;
            }
            ColEvent::CapRight { row } => {
                let r = row as u16;
                let mut consumed = vec![false; state.len()];
                let mut new_slabs: Vec<Slab> = Vec::new();
                // Down wraps: (x,r) + (r+1,y) -> (x,y)
                for &(i, j) in &choice.down_match {
                    consumed[i] = true;
                    consumed[j] = true;
                    pieces.union(state[i].piece, state[j].piece);
                    new_slabs.push(Slab {
                        top: state[i].top,
                        bot: state[j].bot,
                        piece: state[j].piece,
                    });
                }
                // thin slabs close smoothly at the cap
                for &(i, j) in &choice.up_match {
                    debug_assert_eq!(i, j, "only thin-slab deaths wrap inside");
                    consumed[i] = true;
                }
                let mut next = Vec::new();
                for (i, s) in state.iter().enumerate() {
                    if consumed[i] {
                        continue;
                    }
                    let mut s = *s;
                    if s.top == r || s.top == r + 1 || s.bot == r || s.bot == r + 1 {
                        return false; // untransitioned edge on a dying strand
                    }
                    if s.top > r + 1 {
                        s.top -= 2;
                    }
                    if s.bot > r + 1 {
                        s.bot -= 2;
                    }
                    next.push(s);
                }
                for mut s in new_slabs {
                    if s.top > r + 1 {
                        s.top -= 2;
                    }
                    if s.bot > r + 1 {
                        s.bot -= 2;
                    }
                    next.push(s);
                }
                next.sort_by_key(|s| (s.top, s.bot));
                *state = next;
            }
        }
    }
    true
}

/// Memoized structural feasibility: can a slab multiset still be emptied by
/// the remaining columns, ignoring corner signs, actions and connectivity?
/// Sound as a prune (never rejects a completable branch) and shared across
/// the whole search, so doomed states die the first time they appear.
struct Feasibility {
    columns: Vec<ColEvent>,
    memo: std::collections::HashMap<(u32, Vec<(u16, u16)>), bool>,
}

impl Feasibility {
    fn new(columns: Vec<ColEvent>) -> Self {
        Feasibility {
            columns,
            memo: std::collections::HashMap::new(),
        }
    }

    /// Optimistic closability of a single slab: can this interval still die
    /// by the end, assuming any helper material it needs exists? Merges at a
    /// right cap may widen the slab arbitrarily, splits keep either half.
    fn slab_ok(&mut self, col: usize, s: Slab) -> bool {
        if col == self.columns.len() {
            return false;
        }
        let key = (col as u32, vec![(s.top, s.bot)]);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        self.memo.insert(key.clone(), false);
        let (top, bot) = (s.top, s.bot);
        let mut nexts: Vec<(u16, u16)> = Vec::new();
        let mut done = false;
        match self.columns[col] {
            ColEvent::Cross { row, .. } => {
                let r = row as u16;
                if top == r && bot == r + 1 {
                    done = true; // west death
                } else if bot == r {
                    nexts.push((top, r + 1));
                    nexts.push((top, r));
                } else if top == r + 1 {
                    nexts.push((r, bot));
                    nexts.push((r + 1, bot));
                } else if top == r {
                    nexts.push((r + 1, bot));
                } else if bot == r + 1 {
                    nexts.push((top, r));
                } else {
                    nexts.push((top, bot));
                }
            }
            ColEvent::CapLeft { row } => {
                let r = row as u16;
                let (t, b) = (
                    if top >= r { top + 2 } else { top },
                    if bot >= r { bot + 2 } else { bot },
                );
                nexts.push((t, b));
                if t < r && b > r + 1 {
                    nexts.push((t, r));
                    nexts.push((r + 1, b));
                }
            }
            ColEvent::CapRight { row } => {
                let r = row as u16;
                let rows_after = {
                    // number of live rows after this column is not tracked;
                    // allow any bottom below the cap for merge results
                    64u16
                };
                if top == r && bot == r + 1 {
                    done = true; // smooth cap death
                } else if bot == r {
                    // outside merge with any partner (r+1, y)
                    for y in (r + 2)..rows_after {
                        let ny = y - 2;
                        if top < ny {
                            nexts.push((top, ny));
                        }
                    }
                } else if top == r + 1 {
                    // this slab is the merge partner; result keeps our bottom
                    for x in 0..r {
                        nexts.push((x, bot - 2));
                    }
                } else if bot == r + 1 || top == r {
                    // no immersed continuation
                } else {
                    let (t, b) = (
                        if top > r + 1 { top - 2 } else { top },
                        if bot > r + 1 { bot - 2 } else { bot },
                    );
                    nexts.push((t, b));
                }
            }
        }
        let mut ok = done;
        if !ok {
            nexts.sort_unstable();
            nexts.dedup();
            for (t, b) in nexts {
                if t < b
                    && self.slab_ok(
                        col + 1,
                        Slab {
                            top: t,
                            bot: b,
                            piece: 0,
                        },
                    )
                {
                    ok = true;
                    break;
                }
            }
        }
        self.memo.insert(key, ok);
        ok
    }
}

fn live_pieces(pc: &mut PieceTracker, st: &[Slab]) -> usize {
    let mut roots: Vec<u16> = st.iter().map(|s| pc.find(s.piece)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

struct CounterSave {
    positives: usize,
    anchor_hit: bool,
    mixed: usize,
    neg: Ratio,
    pos: Ratio,
}

impl CounterSave {
    fn save(s: &Search) -> Self {
        CounterSave {
            positives: s.positives,
            anchor_hit: s.anchor_hit,
            mixed: s.mixed_corners,
            neg: s.neg_action,
            pos: s.pos_action,
        }
    }
    fn restore(self, s: &mut Search) {
        s.positives = self.positives;
        s.anchor_hit = self.anchor_hit;
        s.mixed_corners = self.mixed;
        s.neg_action = self.neg;
        s.pos_action = self.pos;
    }
}

fn legal_choices(state: &[Slab], ev: ColEvent) -> Vec<ColChoice> {
    match ev {
        ColEvent::Cross { row, .. } => {
            let r = row as u16;
            let mut per_slab: Vec<Vec<SlabAct>> = Vec::with_capacity(state.len());
            for s in state {
                let acts = if s.top == r && s.bot == r + 1 {
                    vec![SlabAct::DeathW]
                } else if s.bot == r {
                    vec![SlabAct::Pass, SlabAct::CornerN]
                } else if s.top == r + 1 {
                    vec![SlabAct::Pass, SlabAct::CornerS]
                } else if s.top == r || s.bot == r + 1 {
                    vec![SlabAct::Pass]
                } else {
                    vec![SlabAct::Keep]
                };
                per_slab.push(acts);
            }
            product_choices(state, &per_slab, MAX_BIRTHS)
        }
        ColEvent::CapLeft { row } => {
            let r = row as u16;
            let mut per_slab: Vec<Vec<SlabAct>> = Vec::with_capacity(state.len());
            for s in state {
                // spanning the insertion point: top < r (unshifted), bot >= r
                if s.top < r && s.bot >= r {
                    per_slab.push(vec![SlabAct::Keep, SlabAct::SplitOut]);
                } else {
                    per_slab.push(vec![SlabAct::Keep]);
                }
            }
            product_choices(state, &per_slab, MAX_BIRTHS)
        }
        ColEvent::CapRight { row } => {
            let r = row as u16;
            let is_thin = |i: usize| state[i].top == r && state[i].bot == r + 1;
            let bot_r: Vec<usize> = (0..state.len())
                .filter(|&i| state[i].bot == r)
                .collect();
            let top_r1: Vec<usize> = (0..state.len())
                .filter(|&i| state[i].top == r + 1 && !is_thin(i))
                .collect();
            // non-thin edges on the dying strands other than the outside-wrap
            // participants have no immersed continuation
            let stuck = (0..state.len()).any(|i| {
                !is_thin(i)
                    && ((state[i].bot == r + 1 && state[i].top < r)
                        || (state[i].top == r && state[i].bot > r + 1))
            });
            if stuck || bot_r.len() != top_r1.len() {
                return Vec::new();
            }
            let thin_deaths: Vec<(usize, usize)> = (0..state.len())
                .filter(|&i| is_thin(i))
                .map(|i| (i, i))
                .collect();
            // matchings that differ only by permuting identical slabs give
            // the same disc; keep one representative
            let mut down_opts = bijections(&bot_r, &top_r1);
            down_opts.retain(|m| {
                for a in 0..m.len() {
                    for b in a + 1..m.len() {
                        let (fa, ta) = m[a];
                        let (fb, tb) = m[b];
                        let feq = state[fa].top == state[fb].top
                            && state[fa].bot == state[fb].bot;
                        let teq = state[ta].top == state[tb].top
                            && state[ta].bot == state[tb].bot;
                        if (feq || teq) && fa < fb && ta > tb {
                            return false;
                        }
                    }
                }
                true
            });
            down_opts
                .into_iter()
                .map(|down| ColChoice {
                    acts: vec![SlabAct::Keep; state.len()],
                    births: 0,
                    down_match: down,
                    up_match: thin_deaths.clone(),
                })
                .collect()
        }
    }
}

/// Option assignments over the slab list, quotiented by permutations of
/// identical slabs: two sheets over the same band are interchangeable, so
/// only canonically ordered assignments within each group of equal intervals
/// are generated. This both prevents double-enumeration of one disc (which
/// would cancel mod 2) and collapses the symmetric part of the search tree.
fn product_choices(state: &[Slab], per_slab: &[Vec<SlabAct>], max_births: u8) -> Vec<ColChoice> {
    let act_rank = |a: SlabAct| match a {
        SlabAct::Keep => 0u8,
        SlabAct::Pass => 1,
        SlabAct::CornerN => 2,
        SlabAct::CornerS => 3,
        SlabAct::DeathW => 4,
        SlabAct::SplitOut => 5,
    };
    let mut combos: Vec<Vec<SlabAct>> = vec![Vec::new()];
    for (i, opts) in per_slab.iter().enumerate() {
        let same_as_prev =
            i > 0 && state[i].top == state[i - 1].top && state[i].bot == state[i - 1].bot;
        let mut next = Vec::with_capacity(combos.len() * opts.len());
        for c in &combos {
            for &o in opts {
                if same_as_prev && act_rank(o) < act_rank(c[i - 1]) {
                    continue;
                }
                let mut c2 = c.clone();
                c2.push(o);
                next.push(c2);
            }
        }
        combos = next;
    }
    let mut out = Vec::with_capacity(combos.len() * (max_births as usize + 1));
    for c in combos {
        for b in 0..=max_births {
            out.push(ColChoice {
                acts: c.clone(),
                births: b,
                down_match: Vec::new(),
                up_match: Vec::new(),
            });
        }
    }
    out
}

fn bijections(from: &[usize], to: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if from.len() != to.len() {
        return Vec::new();
    }
    if from.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..to.len()).collect();
    permute(&mut perm, 0, &mut |p| {
        out.push(
            from.iter()
                .zip(p.iter().map(|&k| to[k]))
                .map(|(&a, b)| (a, b))
                .collect(),
        );
    });
    out
}

fn permute(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&Vec<usize>)) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, f);
        v.swap(k, i);
    }
}

// ---------------------------------------------------------------------------
// Boundary reconstruction
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum End {
    West,
    East,
}

#[derive(Clone, Copy, Debug)]
struct ArcRef {
    arc: usize,
    end: End,
}

struct ArcGraph {
    /// links[arc][0] = link at west end, [1] = at east end
    links: Vec<[Option<(usize, End, Option<Corner>)>; 2]>,
}

impl ArcGraph {
    fn new() -> Self {
        ArcGraph { links: Vec::new() }
    }
    fn fresh(&mut self) -> usize {
        self.links.push([None, None]);
        self.links.len() - 1
    }
    fn connect(&mut self, a: ArcRef, b: ArcRef, c: Option<Corner>) {
        let ia = if a.end == End::West { 0 } else { 1 };
        let ib = if b.end == End::West { 0 } else { 1 };
        assert!(self.links[a.arc][ia].is_none(), "double link");
        assert!(self.links[b.arc][ib].is_none(), "double link");
        self.links[a.arc][ia] = Some((b.arc, b.end, c));
        self.links[b.arc][ib] = Some((a.arc, a.end, c));
    }
}

#[derive(Clone, Copy)]
struct RSlab {
    top: u16,
    bot: u16,
    top_arc: usize,
    bot_arc: usize,
}

/// Replay a finished history to extract the boundary corner cycle.
fn replay(d: &ResolvedDiagram, hist: &[ColChoice], cells: usize) -> Option<Polygon> {
    let mut g = ArcGraph::new();
    let mut state: Vec<RSlab> = Vec::new();
    for (col, choice) in hist.iter().enumerate() {
        match d.columns[col] {
            ColEvent::Cross { v, row } => {
                let r = row as u16;
                let mut next = Vec::new();
                for (i, s) in state.iter().enumerate() {
                    let mut s = *s;
                    match choice.acts[i] {
                        SlabAct::Keep => {}
                        SlabAct::Pass => {
                            if s.bot == r {
                                s.bot = r + 1;
                            } else if s.top == r + 1 {
                                s.top = r;
                            } else if s.top == r {
                                s.top = r + 1;
                            } else if s.bot == r + 1 {
                                s.bot = r;
                            }
                        }
                        SlabAct::CornerN => {
                            let na = g.fresh();
                            g.connect(
                                ArcRef {
                                    arc: s.bot_arc,
                                    end: End::East,
                                },
                                ArcRef {
                                    arc: na,
                                    end: End::West,
                                },
                                Some(Corner { v, q: Quadrant::N }),
                            );
                            s.bot_arc = na;
                        }
                        SlabAct::CornerS => {
                            let na = g.fresh();
                            g.connect(
                                ArcRef {
                                    arc: s.top_arc,
                                    end: End::East,
                                },
                                ArcRef {
                                    arc: na,
                                    end: End::West,
                                },
                                Some(Corner { v, q: Quadrant::S }),
                            );
                            s.top_arc = na;
                        }
                        SlabAct::DeathW => {
                            g.connect(
                                ArcRef {
                                    arc: s.top_arc,
                                    end: End::East,
                                },
                                ArcRef {
                                    arc: s.bot_arc,
                                    end: End::East,
                                },
                                Some(Corner { v, q: Quadrant::W }),
                            );
                            continue;
                        }
                        _ => unreachable!(),
                    }
                    next.push(s);
                }
                for _ in 0..choice.births {
                    let ta = g.fresh();
                    let ba = g.fresh();
                    g.connect(
                        ArcRef {
                            arc: ta,
                            end: End::West,
                        },
                        ArcRef {
                            arc: ba,
                            end: End::West,
                        },
                        Some(Corner { v, q: Quadrant::E }),
                    );
                    next.push(RSlab {
                        top: r,
                        bot: r + 1,
                        top_arc: ta,
                        bot_arc: ba,
                    });
                }
                next.sort_by_key(|s| (s.top, s.bot));
                state = next;
            }
            ColEvent::CapLeft { row } => {
                let r = row as u16;
                let mut next = Vec::new();
                for (i, s) in state.iter().enumerate() {
                    let mut s = *s;
                    if s.top >= r {
                        s.top += 2;
                    }
                    if s.bot >= r {
                        s.bot += 2;
                    }
                    match choice.acts[i] {
                        SlabAct::Keep => next.push(s),
                        SlabAct::SplitOut => {
                            let nb = g.fresh();
                            let nt = g.fresh();
                            g.connect(
                                ArcRef {
                                    arc: nb,
                                    end: End::West,
                                },
                                ArcRef {
                                    arc: nt,
                                    end: End::West,
                                },
                                None,
                            );
                            next.push(RSlab {
                                top: s.top,
                                bot: r,
                                top_arc: s.top_arc,
                                bot_arc: nb,
                            });
                            next.push(RSlab {
                                top: r + 1,
                                bot: s.bot,
                                top_arc: nt,
                                bot_arc: s.bot_arc,
                            });
                        }
                        _ => unreachable!(),
                    }
                }
                for _ in 0..choice.births {
                    let ta = g.fresh();
                    let ba = g.fresh();
                    g.connect(
                        ArcRef {
                            arc: ta,
                            end: End::West,
                        },
                        ArcRef {
                            arc: ba,
                            end: End::West,
                        },
                        None,
                    );
                    next.push(RSlab {
                        top: r,
                        bot: r + 1,
                        top_arc: ta,
                        bot_arc: ba,
                    });
                }
                next.sort_by_key(|s| (s.top, s.bot));
                state = next;
            }
            ColEvent::CapRight { row } => {
                let r = row as u16;
                let mut consumed = vec![false; state.len()];
                let mut new_slabs: Vec<RSlab> = Vec::new();
                for &(i, j) in &choice.down_match {
                    consumed[i] = true;
                    consumed[j] = true;
                    g.connect(
                        ArcRef {
                            arc: state[i].bot_arc,
                            end: End::East,
                        },
                        ArcRef {
                            arc: state[j].top_arc,
                            end: End::East,
                        },
                        None,
                    );
                    new_slabs.push(RSlab {
                        top: state[i].top,
                        bot: state[j].bot,
                        top_arc: state[i].top_arc,
                        bot_arc: state[j].bot_arc,
                    });
                }
                // thin slabs close: their two edges join across the cap
                for &(i, _) in &choice.up_match {
                    consumed[i] = true;
                    g.connect(
                        ArcRef {
                            arc: state[i].bot_arc,
                            end: End::East,
                        },
                        ArcRef {
                            arc: state[i].top_arc,
                            end: End::East,
                        },
                        None,
                    );
                }
                let mut next = Vec::new();
                for (i, s) in state.iter().enumerate() {
                    if consumed[i] {
                        continue;
                    }
                    let mut s = *s;
                    if s.top > r + 1 {
                        s.top -= 2;
                    }
                    if s.bot > r + 1 {
                        s.bot -= 2;
                    }
                    next.push(s);
                }
                for mut s in new_slabs {
                    if s.top > r + 1 {
                        s.top -= 2;
                    }
                    if s.bot > r + 1 {
                        s.bot -= 2;
                    }
                    next.push(s);
                }
                next.sort_by_key(|s| (s.top, s.bot));
                state = next;
            }
        }
    }
    if !state.is_empty() {
        return None;
    }
    // traverse the cycle
    let n = g.links.len();
    if n == 0 {
        return None;
    }
    for l in &g.links {
        if l[0].is_none() || l[1].is_none() {
            return None;
        }
    }
    let mut corners = Vec::new();
    let mut visited = vec![false; n];
    // start on arc 0 entering from its west end
    let mut arc = 0usize;
    let mut entered = End::West;
    loop {
        if visited[arc] {
            return None; // should close exactly when all visited
        }
        visited[arc] = true;
        let exit = if entered == End::West { 1 } else { 0 };
        let (narc, nend, c) = g.links[arc][exit].expect("linked");
        if let Some(c) = c {
            corners.push(c);
        }
        arc = narc;
        entered = nend;
        if arc == 0 && entered == End::West {
            break;
        }
    }
    if visited.iter().any(|&v| !v) {
        return None; // more than one boundary cycle
    }
    if corners.is_empty() {
        return None;
    }
    // canonical rotation: lexicographically smallest
    let k = (0..corners.len())
        .min_by_key(|&i| {
            let mut rot = corners[i..].to_vec();
            rot.extend_from_slice(&corners[..i]);
            rot
        })
        .unwrap();
    corners.rotate_left(k);
    Some(Polygon { corners, cells })
}

// ---------------------------------------------------------------------------
// High-level counts
// ---------------------------------------------------------------------------

/// All rigid polygons with a single positive corner, bucketed by that corner's
/// vertex. This is the raw differential data.
pub fn one_positive_polygons(
    d: &ResolvedDiagram,
) -> Result<BTreeMap<VertexId, Vec<Polygon>>, DiscError> {
    let polys = enumerate_polygons(d, &PolygonQuery::one_positive())?;
    let mut map: BTreeMap<VertexId, Vec<Polygon>> = BTreeMap::new();
    for p in polys {
        let pos = p.positive_corners(d);
        debug_assert_eq!(pos.len(), 1);
        map.entry(pos[0].v).or_default().push(p);
    }
    Ok(map)
}

/// The differential word sums: for each chord, the F2 sum of negative-corner
/// words over rigid one-positive polygons.
pub fn one_positive_counts(d: &ResolvedDiagram) -> Result<BTreeMap<VertexId, NcPoly>, DiscError> {
    let polys = one_positive_polygons(d)?;
    let mut out = BTreeMap::new();
    for v in 0..d.n_chords() {
        let mut p = NcPoly::zero();
        if let Some(list) = polys.get(&v) {
            for poly in list {
                p.toggle(poly.negative_word(d));
            }
        }
        out.insert(v, p);
    }
    Ok(out)
}

/// Rigid two-positive polygons with positive corners exactly at `c_in` and
/// `c_out`, returned as the two negative-corner arcs: (corners after `c_out`
/// up to `c_in`, corners after `c_in` back to `c_out`), counterclockwise.
pub fn two_positive_counts(
    d: &ResolvedDiagram,
    c_in: VertexId,
    c_out: VertexId,
) -> Result<Vec<(Vec<VertexId>, Vec<VertexId>)>, DiscError> {
    let q = PolygonQuery {
        positive_corners: 2,
        anchor: Some(c_out),
        ..Default::default()
    };
    let polys = enumerate_polygons(d, &q)?;
    let mut out = Vec::new();
    for p in polys {
        let pos = p.positive_corners(d);
        let vs: Vec<VertexId> = pos.iter().map(|c| c.v).collect();
        let want = if c_in == c_out {
            vs == vec![c_in, c_out]
        } else {
            vs.contains(&c_in) && vs.contains(&c_out) && vs.len() == 2
        };
        if !want {
            continue;
        }
        // split the cyclic corner word at the two positive corners
        let n = p.corners.len();
        let io = p
            .corners
            .iter()
            .position(|c| c.v == c_out && d.quadrant_is_positive(c.v, c.q))
            .unwrap();
        let mut arc1 = Vec::new();
        let mut arc2 = Vec::new();
        let mut past_in = false;
        for k in 1..n {
            let c = p.corners[(io + k) % n];
            if !past_in && c.v == c_in && d.quadrant_is_positive(c.v, c.q) {
                past_in = true;
                continue;
            }
            if past_in {
                arc2.push(c.v);
            } else {
                arc1.push(c.v);
            }
        }
        out.push((arc1, arc2));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Action assignment
// ---------------------------------------------------------------------------

/// Solve strictly positive chord actions from the enumerated polygon family:
/// every polygon must have positive action balance. Longest-path iteration
/// over the one- and two-positive families, then a generic perturbation.
pub fn assign_actions(d: &mut ResolvedDiagram) -> Result<(), DiagramError> {
    let n = d.n_chords();
    if n == 0 {
        d.actions_assigned = true;
        return Ok(());
    }
    let one = enumerate_polygons(d, &PolygonQuery::one_positive())
        .map_err(|e| DiagramError::ActionAssignment(e.to_string()))?;
    let two = enumerate_polygons(
        d,
        &PolygonQuery {
            positive_corners: 2,
            ..Default::default()
        },
    )
    .map_err(|e| DiagramError::ActionAssignment(e.to_string()))?;

    // constraints: sum over positives > sum over negatives
    struct Cons {
        pos: Vec<VertexId>,
        neg: Vec<VertexId>,
    }
    let mut cons = Vec::new();
    for p in one.iter().chain(two.iter()) {
        cons.push(Cons {
            pos: p.positive_corners(d).iter().map(|c| c.v).collect(),
            neg: p.negative_corners(d).iter().map(|c| c.v).collect(),
        });
    }
    let mut a = vec![1i128; n];
    for round in 0..(n * n + 16) {
        let mut changed = false;
        for c in &cons {
            let need: i128 = c.neg.iter().map(|&v| a[v]).sum::<i128>() + 1;
            let have: i128 = c.pos.iter().map(|&v| a[v]).sum();
            if have < need {
                // raise the largest positive participant
                let grow = need - have;
                let target = *c.pos.iter().max_by_key(|&&v| a[v]).unwrap();
                a[target] += grow;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        if round == n * n + 15 {
            return Err(DiagramError::ActionAssignment(
                "action constraints do not stabilize; convention bug likely".into(),
            ));
        }
    }
    // generic perturbation: distinct tiny offsets keep inequalities strict and
    // break ties
    let denom = (4 * (n as i128) + 4) * 1000;
    for (v, val) in a.iter().enumerate() {
        d.vertices[v].action = Ratio::int(*val) + Ratio::new(v as i128 + 1, denom);
    }
    d.actions_assigned = true;
    // final verification on the solved family
    for p in one.iter().chain(two.iter()) {
        if !p.action_balance(d).is_positive() {
            return Err(DiagramError::ActionAssignment(format!(
                "polygon {:?} has nonpositive action balance",
                p.corners
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{resolve, Convention};
    use crate::front::{analyze, parse_front};

    fn diagram(text: &str) -> ResolvedDiagram {
        let f = analyze(&parse_front(text).unwrap()).unwrap();
        let mut d = resolve(&f, Convention::Normal).unwrap();
        assign_actions(&mut d).unwrap();
        d
    }

    #[test]
    fn unknot_has_two_one_positive_polygons_at_the_cusp() {
        let d = diagram("L1 R1");
        let c = d.vertex_by_name("b1").unwrap();
        let polys = enumerate_polygons(&d, &PolygonQuery::anchored(1, c)).unwrap();
        assert_eq!(polys.len(), 2, "loop disc and outer disc");
        for p in &polys {
            assert!(p.negative_word(&d).is_empty());
        }
        // the two discs cancel over F2
        let counts = one_positive_counts(&d).unwrap();
        assert!(counts[&c].is_zero());
    }

    #[test]
    fn trefoil_differential_words() {
        let d = diagram("L1 L3 X2 X2 X2 R3 R1");
        let counts = one_positive_counts(&d).unwrap();
        let a1 = d.vertex_by_name("a1").unwrap();
        let a2 = d.vertex_by_name("a2").unwrap();
        let a3 = d.vertex_by_name("a3").unwrap();
        let b1 = d.vertex_by_name("b1").unwrap();
        let b2 = d.vertex_by_name("b2").unwrap();
        for a in [a1, a2, a3] {
            assert!(counts[&a].is_zero(), "crossings have no differential");
        }
        // both cusp differentials are 1 + a1 + a3 + (a1 a2 a3 in one order)
        for (b, rev) in [(b1, false), (b2, true)] {
            let p = &counts[&b];
            assert_eq!(p.num_terms(), 4, "∂{} = {}", b, p);
            assert!(p.contains(&Word::one()));
            assert!(p.contains(&Word(vec![a1 as u32])));
            assert!(p.contains(&Word(vec![a3 as u32])));
            let big = if rev ^ false {
                Word(vec![a3 as u32, a2 as u32, a1 as u32])
            } else {
                Word(vec![a1 as u32, a2 as u32, a3 as u32])
            };
            let alt = Word(big.0.iter().rev().copied().collect());
            assert!(
                p.contains(&big) || p.contains(&alt),
                "cubic word present in some reading order"
            );
        }
        // the two cusps carry the two opposite reading orders
        let w123 = Word(vec![a1 as u32, a2 as u32, a3 as u32]);
        let w321 = Word(vec![a3 as u32, a2 as u32, a1 as u32]);
        assert_ne!(
            counts[&b1].contains(&w123),
            counts[&b2].contains(&w123),
            "orders differ between the cusps"
        );
        assert!(counts[&b1].contains(&w123) || counts[&b1].contains(&w321));
    }

    #[test]
    fn degree_zero_crossing_admits_no_one_positive_polygon() {
        let d = diagram("L1 L3 X2 X2 X2 R3 R1");
        let a2 = d.vertex_by_name("a2").unwrap();
        let polys = enumerate_polygons(&d, &PolygonQuery::anchored(1, a2)).unwrap();
        assert!(polys.is_empty());
    }

    #[test]
    fn trefoil_bananas_between_adjacent_crossings() {
        let d = diagram("L1 L3 X2 X2 X2 R3 R1");
        let a1 = d.vertex_by_name("a1").unwrap();
        let a2 = d.vertex_by_name("a2").unwrap();
        // the bigon between a1 and a2 has two positive corners and no negatives
        let sp = two_positive_counts(&d, a2, a1).unwrap();
        assert!(sp.iter().any(|(x, y)| x.is_empty() && y.is_empty()));
    }

    #[test]
    fn split_diagram_blocks() {
        let d = diagram("L1 R1 L1 R1");
        let counts = one_positive_counts(&d).unwrap();
        for (_, p) in counts {
            assert!(p.is_zero());
        }
    }

    #[test]
    fn actions_are_positive_and_polygon_compatible() {
        let d = diagram("L1 L3 X2 X2 X2 R3 R1");
        for v in &d.vertices {
            assert!(v.action.is_positive());
        }
        let polys = enumerate_polygons(&d, &PolygonQuery::one_positive()).unwrap();
        for p in polys {
            assert!(p.action_balance(&d).is_positive());
        }
    }

    #[test]
    fn determinism_of_enumeration() {
        let d = diagram("L1 L3 X2 X2 X2 R3 R1");
        let p1 = enumerate_polygons(&d, &PolygonQuery::one_positive()).unwrap();
        let p2 = enumerate_polygons(&d, &PolygonQuery::one_positive()).unwrap();
        assert_eq!(p1, p2);
    }
}
