//! Exact linear and tensor algebra over the two-element field.
//!
//! Everything downstream (differentials, bilinearized complexes, block
//! complexes, A-infinity tensors) reduces to the primitives in this module:
//! noncommutative polynomials with set-semantics coefficients, sparse 0/1
//! matrices with bitset elimination, and graded chain complexes with exact
//! homology ranks.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::F2Error;

/// Generator identifier, an index into some external symbol table.
pub type GenId = u32;

/// A monomial: an ordered word in generator ids. The empty word is the unit.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Word(pub Vec<GenId>);

impl Word {
    pub fn one() -> Self {
        Word(Vec::new())
    }

    pub fn single(g: GenId) -> Self {
        Word(vec![g])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

/// Noncommutative polynomial over F2: a finite set of words. Presence of a
/// word means coefficient 1; addition is symmetric difference.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct NcPoly {
    terms: BTreeSet<Word>,
}

impl NcPoly {
    pub fn zero() -> Self {
        NcPoly {
            terms: BTreeSet::new(),
        }
    }

    pub fn one() -> Self {
        let mut terms = BTreeSet::new();
        terms.insert(Word::one());
        NcPoly { terms }
    }

    pub fn gen(g: GenId) -> Self {
        let mut terms = BTreeSet::new();
        terms.insert(Word::single(g));
        NcPoly { terms }
    }

    pub fn from_words<I: IntoIterator<Item = Word>>(words: I) -> Self {
        let mut p = NcPoly::zero();
        for w in words {
            p.toggle(w);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &Word> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.terms.contains(w)
    }

    /// F2 addition of a single word: insert if absent, cancel if present.
    pub fn toggle(&mut self, w: Word) {
        if !self.terms.remove(&w) {
            self.terms.insert(w);
        }
    }

    pub fn add(&self, other: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for w in &other.terms {
            out.toggle(w.clone());
        }
        out
    }

    pub fn mul(&self, other: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for a in &self.terms {
            for b in &other.terms {
                out.toggle(a.concat(b));
            }
        }
        out
    }

    /// The words of length one, as generator ids.
    pub fn linear_part(&self) -> Vec<GenId> {
        self.terms
            .iter()
            .filter(|w| w.len() == 1)
            .map(|w| w.0[0])
            .collect()
    }

    pub fn render(&self, name: impl Fn(GenId) -> String) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for w in &self.terms {
            if w.is_one() {
                parts.push("1".to_string());
            } else {
                parts.push(
                    w.0.iter()
                        .map(|&g| name(g))
                        .collect::<Vec<_>>()
                        .join("*"),
                );
            }
        }
        parts.join(" + ")
    }
}

impl fmt::Display for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(|g| format!("g{g}")))
    }
}

/// The grading ring of a complex: integers, or integers mod 2r.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GradingRing {
    Z,
    /// Degrees taken modulo the stored (even, positive) value.
    Mod(u32),
}

impl GradingRing {
    pub fn normalize(&self, d: i64) -> i64 {
        match self {
            GradingRing::Z => d,
            GradingRing::Mod(m) => d.rem_euclid(*m as i64),
        }
    }

    pub fn eq_deg(&self, a: i64, b: i64) -> bool {
        self.normalize(a) == self.normalize(b)
    }
}

/// A finite basis of named generators with degrees, over a fixed grading ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedSpace {
    pub ring: GradingRing,
    /// (generator id, degree); ids must be unique.
    pub basis: Vec<(GenId, i64)>,
}

impl GradedSpace {
    pub fn new(ring: GradingRing, basis: Vec<(GenId, i64)>) -> Result<Self, F2Error> {
        let mut seen = BTreeSet::new();
        for (g, _) in &basis {
            if !seen.insert(*g) {
                return Err(F2Error::DuplicateGenerator(*g));
            }
        }
        Ok(GradedSpace { ring, basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree_of_index(&self, i: usize) -> i64 {
        self.ring.normalize(self.basis[i].1)
    }

    pub fn index_of(&self, g: GenId) -> Option<usize> {
        self.basis.iter().position(|&(h, _)| h == g)
    }
}

/// Sparse matrix over F2 stored as a set of (row, col) coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SparseMatF2 {
    pub nrows: usize,
    pub ncols: usize,
    entries: BTreeSet<(u32, u32)>,
}

/// Column width below which elimination runs on dense bitset rows.
const DENSE_LIMIT: usize = 4096;

impl SparseMatF2 {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        SparseMatF2 {
            nrows,
            ncols,
            entries: BTreeSet::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SparseMatF2::zero(n, n);
        for i in 0..n {
            m.set(i, i);
        }
        m
    }

    pub fn set(&mut self, r: usize, c: usize) {
        assert!(r < self.nrows && c < self.ncols, "entry out of bounds");
        self.entries.insert((r as u32, c as u32));
    }

    /// F2 add: toggles the entry.
    pub fn toggle(&mut self, r: usize, c: usize) {
        assert!(r < self.nrows && c < self.ncols, "entry out of bounds");
        let k = (r as u32, c as u32);
        if !self.entries.remove(&k) {
            self.entries.insert(k);
        }
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.entries.contains(&(r as u32, c as u32))
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.entries.iter().map(|&(r, c)| (r as usize, c as usize))
    }

    pub fn num_entries(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn transpose(&self) -> SparseMatF2 {
        let mut t = SparseMatF2::zero(self.ncols, self.nrows);
        for &(r, c) in &self.entries {
            t.entries.insert((c, r));
        }
        t
    }

    pub fn compose(&self, other: &SparseMatF2) -> SparseMatF2 {
        assert_eq!(self.ncols, other.nrows, "composition shape mismatch");
        // rows of other indexed by its row
        let mut rows_of_other: Vec<Vec<u32>> = vec![Vec::new(); other.nrows];
        for &(r, c) in &other.entries {
            rows_of_other[r as usize].push(c);
        }
        let mut out = SparseMatF2::zero(self.nrows, other.ncols);
        for &(r, k) in &self.entries {
            for &c in &rows_of_other[k as usize] {
                out.toggle(r as usize, c as usize);
            }
        }
        out
    }

    pub fn apply(&self, v: &BTreeSet<u32>) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        for &(r, c) in &self.entries {
            if v.contains(&c) {
                if !out.remove(&r) {
                    out.insert(r);
                }
            }
        }
        out
    }

    fn rows_as_bitsets(&self) -> Vec<Vec<u64>> {
        let w = self.ncols.div_ceil(64);
        let mut rows = vec![vec![0u64; w]; self.nrows];
        for &(r, c) in &self.entries {
            rows[r as usize][c as usize / 64] |= 1u64 << (c % 64);
        }
        rows
    }

    fn rows_as_sorted(&self) -> Vec<Vec<u32>> {
        let mut rows: Vec<Vec<u32>> = vec![Vec::new(); self.nrows];
        for &(r, c) in &self.entries {
            rows[r as usize].push(c);
        }
        for row in &mut rows {
            row.sort_unstable();
        }
        rows
    }

    /// GF(2) rank by Gaussian elimination. Dense bitset rows for narrow
    /// matrices, sorted sparse rows otherwise.
    pub fn rank(&self) -> usize {
        if self.ncols < DENSE_LIMIT {
            rank_dense(self.rows_as_bitsets(), self.ncols)
        } else {
            rank_sparse(self.rows_as_sorted())
        }
    }

    /// Basis of the kernel, as column-index sets.
    pub fn kernel_basis(&self) -> Vec<BTreeSet<u32>> {
        // Row-reduce the transpose augmented with an identity: kernel vectors
        // of self are left-null combinations of the transpose's rows.
        let n = self.ncols;
        let w = self.nrows.div_ceil(64);
        let wid = n.div_ceil(64);
        // rows: one per column of self, contents = that column's entries.
        let mut rows = vec![vec![0u64; w]; n];
        for &(r, c) in &self.entries {
            rows[c as usize][r as usize / 64] |= 1u64 << (r % 64);
        }
        let mut id = vec![vec![0u64; wid]; n];
        for (i, row) in id.iter_mut().enumerate() {
            row[i / 64] |= 1u64 << (i % 64);
        }
        let mut pivots: Vec<(usize, usize)> = Vec::new(); // (pivot bit, row idx)
        let mut out = Vec::new();
        for i in 0..n {
            for &(pbit, prow) in &pivots {
                if rows[i][pbit / 64] >> (pbit % 64) & 1 == 1 {
                    let (a, b) = split_two(&mut rows, i, prow);
                    xor_into(a, b);
                    let (a, b) = split_two(&mut id, i, prow);
                    xor_into(a, b);
                }
            }
            match first_bit(&rows[i]) {
                Some(p) => pivots.push((p, i)),
                None => {
                    let mut v = BTreeSet::new();
                    for (bi, wd) in id[i].iter().enumerate() {
                        let mut x = *wd;
                        while x != 0 {
                            let b = x.trailing_zeros() as usize;
                            v.insert((bi * 64 + b) as u32);
                            x &= x - 1;
                        }
                    }
                    out.push(v);
                }
            }
        }
        out
    }

    /// Submatrix keeping the given columns (renumbered in the given order).
    pub fn select_columns(&self, cols: &[usize]) -> SparseMatF2 {
        let mut pos = BTreeMap::new();
        for (i, &c) in cols.iter().enumerate() {
            pos.insert(c as u32, i as u32);
        }
        let mut m = SparseMatF2::zero(self.nrows, cols.len());
        for &(r, c) in &self.entries {
            if let Some(&nc) = pos.get(&c) {
                m.entries.insert((r, nc));
            }
        }
        m
    }
}

fn split_two<'a, T>(v: &'a mut [T], i: usize, j: usize) -> (&'a mut T, &'a T) {
    assert!(i != j);
    if i < j {
        let (a, b) = v.split_at_mut(j);
        (&mut a[i], &b[0])
    } else {
        let (a, b) = v.split_at_mut(i);
        (&mut b[0], &a[j])
    }
}

fn xor_into(dst: &mut Vec<u64>, src: &Vec<u64>) {
    for (d, s) in dst.iter_mut().zip(src.iter()) {
        *d ^= s;
    }
}

fn first_bit(row: &[u64]) -> Option<usize> {
    for (i, w) in row.iter().enumerate() {
        if *w != 0 {
            return Some(i * 64 + w.trailing_zeros() as usize);
        }
    }
    None
}

fn rank_dense(mut rows: Vec<Vec<u64>>, _ncols: usize) -> usize {
    let mut rank = 0;
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for i in 0..rows.len() {
        for &(pbit, prow) in &pivots {
            if rows[i][pbit / 64] >> (pbit % 64) & 1 == 1 {
                let (a, b) = split_two(&mut rows, i, prow);
                xor_into(a, b);
            }
        }
        if let Some(p) = first_bit(&rows[i]) {
            pivots.push((p, i));
            rank += 1;
        }
    }
    rank
}

fn rank_sparse(rows: Vec<Vec<u32>>) -> usize {
    // pivot col -> reduced row
    let mut pivots: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    let mut rank = 0;
    for mut row in rows {
        loop {
            let Some(&lead) = row.first() else { break };
            match pivots.get(&lead) {
                Some(p) => row = xor_sorted(&row, p),
                None => {
                    pivots.insert(lead, row);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

fn xor_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// A chain complex: a graded space with a differential shifting degree by +1
/// or -1. The matrix convention is column-to-row: entry (i, j) means basis
/// element i appears in d(basis element j).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChainComplex {
    pub space: GradedSpace,
    pub differential: SparseMatF2,
    pub degree_shift: i64,
}

impl ChainComplex {
    pub fn new(
        space: GradedSpace,
        differential: SparseMatF2,
        degree_shift: i64,
    ) -> Result<Self, F2Error> {
        assert!(degree_shift == 1 || degree_shift == -1);
        let n = space.dim();
        if differential.nrows != n || differential.ncols != n {
            return Err(F2Error::ShapeMismatch {
                expected: (n, n),
                got: (differential.nrows, differential.ncols),
            });
        }
        let c = ChainComplex {
            space,
            differential,
            degree_shift,
        };
        c.check_degrees()?;
        c.check_square_zero()?;
        Ok(c)
    }

    fn check_degrees(&self) -> Result<(), F2Error> {
        for (i, j) in self.differential.entries() {
            let di = self.space.basis[i].1;
            let dj = self.space.basis[j].1;
            if !self.space.ring.eq_deg(di, dj + self.degree_shift) {
                return Err(F2Error::DegreeViolation {
                    from: self.space.basis[j].0,
                    to: self.space.basis[i].0,
                });
            }
        }
        Ok(())
    }

    pub fn check_square_zero(&self) -> Result<(), F2Error> {
        let sq = self.differential.compose(&self.differential);
        if sq.is_zero() {
            Ok(())
        } else {
            Err(F2Error::SquareNonzero)
        }
    }

    /// Homology ranks per (normalized) degree.
    pub fn homology(&self) -> BTreeMap<i64, usize> {
        let n = self.space.dim();
        let mut by_deg: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            by_deg
                .entry(self.space.degree_of_index(i))
                .or_default()
                .push(i);
        }
        // rank of d restricted to columns of each degree
        let mut rank_out: BTreeMap<i64, usize> = BTreeMap::new();
        for (&d, cols) in &by_deg {
            let sub = self.differential.select_columns(cols);
            rank_out.insert(d, sub.rank());
        }
        let mut h = BTreeMap::new();
        for (&d, cols) in &by_deg {
            let dim = cols.len();
            let r_from = *rank_out.get(&d).unwrap_or(&0);
            let incoming = self.space.ring.normalize(d - self.degree_shift);
            let r_into = *rank_out.get(&incoming).unwrap_or(&0);
            let rank = dim - r_from - r_into;
            if rank > 0 {
                h.insert(d, rank);
            }
        }
        h
    }

    /// Alternating sum of basis dimensions per degree. Only meaningful over Z.
    pub fn euler_characteristic(&self) -> i64 {
        self.space
            .basis
            .iter()
            .map(|&(_, d)| if d.rem_euclid(2) == 0 { 1 } else { -1 })
            .sum()
    }

    pub fn is_acyclic(&self) -> bool {
        self.homology().is_empty()
    }
}

/// Poincare polynomial of a homology rank table, e.g. "2 + t" for {0:2, 1:1}.
pub fn poincare_polynomial(h: &BTreeMap<i64, usize>) -> String {
    if h.is_empty() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (&d, &r) in h {
        let coeff = if r == 1 { String::new() } else { r.to_string() };
        let var = match d {
            0 => {
                if r == 1 {
                    "1".to_string()
                } else {
                    String::new()
                }
            }
            1 => "t".to_string(),
            _ if d < 0 => format!("t^({d})"),
            _ => format!("t^{d}"),
        };
        let part = match (coeff.is_empty(), var.is_empty()) {
            (true, _) => var,
            (_, true) => coeff,
            _ => format!("{coeff}{var}"),
        };
        parts.push(part);
    }
    parts.join(" + ")
}

/// Homology of one degree block with explicit representatives, for induced
/// maps in long exact sequences.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    /// Cycle representatives of a basis of H, as index sets into the basis.
    pub reps: Vec<BTreeSet<u32>>,
    /// A spanning set of the boundaries in this degree.
    pub boundaries: Vec<BTreeSet<u32>>,
}

impl ChainComplex {
    /// Representative-level homology in each degree.
    pub fn homology_with_reps(&self) -> BTreeMap<i64, HomologyBasis> {
        let n = self.space.dim();
        let mut by_deg: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            by_deg
                .entry(self.space.degree_of_index(i))
                .or_default()
                .push(i);
        }
        let mut out = BTreeMap::new();
        for (&d, cols) in &by_deg {
            let sub = self.differential.select_columns(cols);
            // kernel of d on this degree, in local column coordinates
            let ker_local = sub.kernel_basis();
            let ker: Vec<BTreeSet<u32>> = ker_local
                .iter()
                .map(|v| v.iter().map(|&i| cols[i as usize] as u32).collect())
                .collect();
            // boundaries into this degree
            let prev = self.space.ring.normalize(d - self.degree_shift);
            let mut boundaries = Vec::new();
            if let Some(pcols) = by_deg.get(&prev) {
                for &c in pcols {
                    let mut img = BTreeSet::new();
                    for (r, cc) in self.differential.entries() {
                        if cc == c {
                            img.insert(r as u32);
                        }
                    }
                    if !img.is_empty() {
                        boundaries.push(img);
                    }
                }
            }
            // choose representatives: kernel vectors independent mod boundaries
            let reps = complete_basis(&boundaries, &ker, n);
            out.insert(d, HomologyBasis { reps, boundaries });
        }
        out
    }
}

/// Vectors from `candidates` extending span(`base`) to span(base+candidates),
/// greedily. All vectors are index sets into a space of dimension `n`.
pub fn complete_basis(
    base: &[BTreeSet<u32>],
    candidates: &[BTreeSet<u32>],
    n: usize,
) -> Vec<BTreeSet<u32>> {
    let mut echelon: Vec<(u32, Vec<u32>)> = Vec::new(); // (pivot, sorted vec)
    let reduce = |v: &BTreeSet<u32>, echelon: &Vec<(u32, Vec<u32>)>| -> Vec<u32> {
        let mut row: Vec<u32> = v.iter().copied().collect();
        loop {
            let Some(&lead) = row.first() else {
                return row;
            };
            match echelon.iter().find(|(p, _)| *p == lead) {
                Some((_, e)) => row = xor_sorted(&row, e),
                None => return row,
            }
        }
    };
    let _ = n;
    for b in base {
        let r = reduce(b, &echelon);
        if let Some(&lead) = r.first() {
            echelon.push((lead, r));
        }
    }
    let mut out = Vec::new();
    for c in candidates {
        let r = reduce(c, &echelon);
        if let Some(&lead) = r.first() {
            echelon.push((lead, r));
            out.push(c.clone());
        }
    }
    out
}

/// Express `v` in terms of the span of `basis` modulo `mod_out`; returns the
/// coefficient vector over `basis` if representable.
pub fn express_in_basis(
    v: &BTreeSet<u32>,
    basis: &[BTreeSet<u32>],
    mod_out: &[BTreeSet<u32>],
) -> Option<Vec<bool>> {
    // Solve: v = sum coeffs*basis (mod span(mod_out)) by elimination over the
    // stacked system.
    let mut rows: Vec<(Vec<u32>, Vec<bool>)> = Vec::new();
    for (i, b) in basis.iter().enumerate() {
        let mut tag = vec![false; basis.len()];
        tag[i] = true;
        rows.push((b.iter().copied().collect(), tag));
    }
    for m in mod_out {
        rows.push((m.iter().copied().collect(), vec![false; basis.len()]));
    }
    let mut target: Vec<u32> = v.iter().copied().collect();
    let mut target_tag = vec![false; basis.len()];
    // eliminate
    let mut echelon: Vec<(u32, Vec<u32>, Vec<bool>)> = Vec::new();
    for (mut row, mut tag) in rows {
        loop {
            let Some(&lead) = row.first() else { break };
            match echelon.iter().find(|(p, _, _)| *p == lead) {
                Some((_, e, t)) => {
                    row = xor_sorted(&row, e);
                    for (a, b) in tag.iter_mut().zip(t.iter()) {
                        *a ^= b;
                    }
                }
                None => {
                    echelon.push((lead, row, tag));
                    break;
                }
            }
        }
    }
    loop {
        let Some(&lead) = target.first() else {
            return Some(target_tag);
        };
        match echelon.iter().find(|(p, _, _)| *p == lead) {
            Some((_, e, t)) => {
                target = xor_sorted(&target, e);
                for (a, b) in target_tag.iter_mut().zip(t.iter()) {
                    *a ^= b;
                }
            }
            None => return None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f2_cancellation_in_products() {
        // (1+a)(1+a) = 1 + a*a over F2
        let a: GenId = 0;
        let p = NcPoly::one().add(&NcPoly::gen(a));
        let sq = p.mul(&p);
        let mut expected = NcPoly::one();
        expected.toggle(Word(vec![a, a]));
        assert_eq!(sq, expected);
    }

    #[test]
    fn unit_and_bilinearity() {
        let w = NcPoly::from_words([Word(vec![3, 4])]);
        assert_eq!(NcPoly::one().mul(&w), w);
        let a = NcPoly::gen(0).add(&NcPoly::gen(1));
        let c = NcPoly::gen(2);
        let prod = a.mul(&c);
        let expected = NcPoly::from_words([Word(vec![0, 2]), Word(vec![1, 2])]);
        assert_eq!(prod, expected);
    }

    #[test]
    fn addition_is_involution() {
        let p = NcPoly::from_words([Word(vec![0]), Word(vec![1, 2]), Word::one()]);
        assert!(p.add(&p).is_zero());
    }

    #[test]
    fn rank_small_cases() {
        assert_eq!(SparseMatF2::identity(3).rank(), 3);
        assert_eq!(SparseMatF2::zero(4, 5).rank(), 0);
        // [[1,1],[1,1]] has rank 1 (hand row-reduction)
        let mut m = SparseMatF2::zero(2, 2);
        m.set(0, 0);
        m.set(0, 1);
        m.set(1, 0);
        m.set(1, 1);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn rank_equals_transpose_rank() {
        // light deterministic pseudo-random fill
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for trial in 0..20 {
            let rows = 3 + (trial % 7);
            let cols = 2 + (trial % 9);
            let mut m = SparseMatF2::zero(rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    if next() % 3 == 0 {
                        m.set(r, c);
                    }
                }
            }
            assert_eq!(m.rank(), m.transpose().rank());
        }
    }

    #[test]
    fn kernel_basis_matches_rank() {
        let mut m = SparseMatF2::zero(2, 3);
        m.set(0, 0);
        m.set(0, 1);
        m.set(1, 1);
        m.set(1, 2);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 3 - m.rank());
        for v in &k {
            assert!(m.apply(v).is_empty());
        }
    }

    #[test]
    fn homology_zero_differential() {
        let space = GradedSpace::new(GradingRing::Z, vec![(0, 0), (1, 1)]).unwrap();
        let c = ChainComplex::new(space, SparseMatF2::zero(2, 2), -1).unwrap();
        let h = c.homology();
        assert_eq!(h.get(&0), Some(&1));
        assert_eq!(h.get(&1), Some(&1));
    }

    #[test]
    fn homology_acyclic_strip() {
        // d(y) = x with |y|=1, |x|=0
        let space = GradedSpace::new(GradingRing::Z, vec![(0, 0), (1, 1)]).unwrap();
        let mut d = SparseMatF2::zero(2, 2);
        d.set(0, 1);
        let c = ChainComplex::new(space, d, -1).unwrap();
        assert!(c.is_acyclic());
    }

    #[test]
    fn degree_violation_detected() {
        let space = GradedSpace::new(GradingRing::Z, vec![(0, 0), (1, 5)]).unwrap();
        let mut d = SparseMatF2::zero(2, 2);
        d.set(0, 1);
        assert!(matches!(
            ChainComplex::new(space, d, -1),
            Err(F2Error::DegreeViolation { .. })
        ));
    }

    #[test]
    fn square_nonzero_detected() {
        // d(x)=y, d(y)=x cannot even be graded over Z; use Mod(2) grading
        let space = GradedSpace::new(GradingRing::Mod(2), vec![(0, 0), (1, 1)]).unwrap();
        let mut d = SparseMatF2::zero(2, 2);
        d.set(0, 1);
        d.set(1, 0);
        assert!(matches!(
            ChainComplex::new(space, d, -1),
            Err(F2Error::SquareNonzero)
        ));
    }

    #[test]
    fn euler_characteristic_conserved() {
        let space =
            GradedSpace::new(GradingRing::Z, vec![(0, 0), (1, 0), (2, 1), (3, 2)]).unwrap();
        let mut d = SparseMatF2::zero(4, 4);
        d.set(0, 2); // d(g2) = g0
        let c = ChainComplex::new(space, d, -1).unwrap();
        let h = c.homology();
        let chi_h: i64 = h
            .iter()
            .map(|(&deg, &r)| if deg.rem_euclid(2) == 0 { r as i64 } else { -(r as i64) })
            .sum();
        assert_eq!(chi_h, c.euler_characteristic());
    }

    #[test]
    fn poincare_formatting() {
        let mut h = BTreeMap::new();
        h.insert(0, 2usize);
        h.insert(1, 1usize);
        assert_eq!(poincare_polynomial(&h), "2 + t");
        assert_eq!(poincare_polynomial(&BTreeMap::new()), "0");
        let mut h2 = BTreeMap::new();
        h2.insert(1, 1usize);
        assert_eq!(poincare_polynomial(&h2), "t");
    }
}
