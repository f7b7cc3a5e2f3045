//! The Chekanov-Eliashberg algebra of a resolved diagram, its augmentations,
//! and the linearized/bilinearized complexes they produce.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::diagram::ResolvedDiagram;
use crate::discs;
use crate::error::DgaError;
use crate::f2::{ChainComplex, GenId, GradedSpace, GradingRing, NcPoly, SparseMatF2, Word};

/// A differential graded algebra presented by generators: the free unital
/// noncommutative algebra on the generators with the differential given on
/// each generator and extended by the Leibniz rule.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Dga {
    pub names: Vec<String>,
    pub degrees: Vec<i64>,
    pub ring: GradingRing,
    /// Some(component) for a pure chord, None for a mixed one.
    pub pure_comp: Vec<Option<usize>>,
    pub differential: Vec<NcPoly>,
}

impl Dga {
    pub fn n_gens(&self) -> usize {
        self.names.len()
    }

    pub fn gen_by_name(&self, name: &str) -> Option<GenId> {
        self.names.iter().position(|n| n == name).map(|i| i as GenId)
    }

    /// Differential of a word by the Leibniz rule (no signs over F2).
    pub fn d_word(&self, w: &Word) -> NcPoly {
        let mut out = NcPoly::zero();
        for i in 0..w.0.len() {
            let dl = &self.differential[w.0[i] as usize];
            for t in dl.terms() {
                let mut v = Vec::with_capacity(w.0.len() - 1 + t.0.len());
                v.extend_from_slice(&w.0[..i]);
                v.extend_from_slice(&t.0);
                v.extend_from_slice(&w.0[i + 1..]);
                out.toggle(Word(v));
            }
        }
        out
    }

    pub fn d_poly(&self, p: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for w in p.terms() {
            out = out.add(&self.d_word(w));
        }
        out
    }

    pub fn word_degree(&self, w: &Word) -> i64 {
        self.ring
            .normalize(w.0.iter().map(|&g| self.degrees[g as usize]).sum())
    }
}

/// Build the algebra of a diagram: generators are the chords, the differential
/// the one-positive polygon counts. Errors if some rigid polygon violates the
/// degree law, which signals a convention bug.
pub fn build_dga(d: &ResolvedDiagram) -> Result<Dga, DgaError> {
    let counts = discs::one_positive_counts(d)?;
    let dga = Dga {
        names: d.vertices.iter().map(|v| v.name.clone()).collect(),
        degrees: d.vertices.iter().map(|v| v.degree).collect(),
        ring: d.ring,
        pure_comp: d
            .vertices
            .iter()
            .map(|v| {
                if v.comps.0 == v.comps.1 {
                    Some(v.comps.0)
                } else {
                    None
                }
            })
            .collect(),
        differential: (0..d.n_chords())
            .map(|v| counts.get(&v).cloned().unwrap_or_else(NcPoly::zero))
            .collect(),
    };
    for (g, dg) in dga.differential.iter().enumerate() {
        for w in dg.terms() {
            if !dga.ring.eq_deg(dga.degrees[g], dga.word_degree(w) + 1) {
                return Err(DgaError::DegreeViolation {
                    chord: dga.names[g].clone(),
                });
            }
        }
    }
    Ok(dga)
}

/// Validation report: degree-law and d-squared violations, if any.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct DgaReport {
    pub degree_violations: Vec<String>,
    pub square_violations: Vec<String>,
}

impl DgaReport {
    pub fn is_valid(&self) -> bool {
        self.degree_violations.is_empty() && self.square_violations.is_empty()
    }
}

pub fn validate_dga(dga: &Dga) -> DgaReport {
    let mut report = DgaReport::default();
    for g in 0..dga.n_gens() {
        for w in dga.differential[g].terms() {
            if !dga.ring.eq_deg(dga.degrees[g], dga.word_degree(w) + 1) {
                report
                    .degree_violations
                    .push(format!("{}: word of length {}", dga.names[g], w.0.len()));
            }
        }
        let dd = dga.d_poly(&dga.differential[g]);
        if !dd.is_zero() {
            report.square_violations.push(dga.names[g].clone());
        }
    }
    report
}

/// An augmentation: a unital algebra map to F2 vanishing in nonzero degrees,
/// stored by its values on pure generators. Mixed generators are sent to 0.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Augmentation {
    pub values: BTreeMap<GenId, bool>,
}

impl Augmentation {
    pub fn zero() -> Self {
        Augmentation {
            values: BTreeMap::new(),
        }
    }

    pub fn eval_gen(&self, g: GenId) -> bool {
        *self.values.get(&g).unwrap_or(&false)
    }

    pub fn eval_word(&self, w: &Word) -> bool {
        w.0.iter().all(|&g| self.eval_gen(g))
    }

    pub fn eval_poly(&self, p: &NcPoly) -> bool {
        let mut acc = false;
        for w in p.terms() {
            acc ^= self.eval_word(w);
        }
        acc
    }

    /// Check the augmentation equations against a DGA.
    pub fn is_augmentation(&self, dga: &Dga) -> bool {
        for (&g, &v) in &self.values {
            let gi = g as usize;
            if v && (!dga.ring.eq_deg(dga.degrees[gi], 0) || dga.pure_comp[gi].is_none()) {
                return false;
            }
        }
        (0..dga.n_gens()).all(|g| !self.eval_poly(&dga.differential[g]))
    }

    /// Combine per-component augmentations into one augmentation of a link
    /// algebra: pure generators of component c take their value from
    /// `parts[c]`, looked up by generator id.
    pub fn combine(dga: &Dga, parts: &[&Augmentation]) -> Augmentation {
        let mut values = BTreeMap::new();
        for g in 0..dga.n_gens() {
            if let Some(c) = dga.pure_comp[g] {
                if parts[c].eval_gen(g as GenId) {
                    values.insert(g as GenId, true);
                }
            }
        }
        Augmentation { values }
    }
}

/// All augmentations over F2, by constraint-propagating search over the
/// degree-zero pure generators, most-constrained first.
pub fn enumerate_augmentations(dga: &Dga) -> Vec<Augmentation> {
    let mut vars: Vec<GenId> = (0..dga.n_gens() as GenId)
        .filter(|&g| {
            dga.pure_comp[g as usize].is_some() && dga.ring.eq_deg(dga.degrees[g as usize], 0)
        })
        .collect();
    // occurrence count of each variable in the differential images
    let mut occ: BTreeMap<GenId, usize> = vars.iter().map(|&g| (g, 0)).collect();
    for g in 0..dga.n_gens() {
        for w in dga.differential[g].terms() {
            for &l in &w.0 {
                if let Some(c) = occ.get_mut(&l) {
                    *c += 1;
                }
            }
        }
    }
    vars.sort_by_key(|g| std::cmp::Reverse(occ[g]));

    let constraints: Vec<&NcPoly> = dga.differential.iter().collect();
    let mut out = Vec::new();
    let mut partial: BTreeMap<GenId, bool> = BTreeMap::new();
    search(dga, &vars, 0, &constraints, &mut partial, &mut out);
    out.sort();
    out
}

fn search(
    dga: &Dga,
    vars: &[GenId],
    k: usize,
    constraints: &[&NcPoly],
    partial: &mut BTreeMap<GenId, bool>,
    out: &mut Vec<Augmentation>,
) {
    // prune as soon as a fully decided constraint fails
    for c in constraints {
        if eval_partial(c, partial, vars, k) == Some(true) {
            return;
        }
    }
    if k == vars.len() {
        let aug = Augmentation {
            values: partial
                .iter()
                .filter(|&(_, &v)| v)
                .map(|(&g, &v)| (g, v))
                .collect(),
        };
        if aug.is_augmentation(dga) {
            out.push(aug);
        }
        return;
    }
    for v in [false, true] {
        partial.insert(vars[k], v);
        search(dga, vars, k + 1, constraints, partial, out);
        partial.remove(&vars[k]);
    }
}

/// Evaluate a polynomial under a partial assignment: Some(parity) if fully
/// decided, None otherwise. Letters outside the variable set are zero.
fn eval_partial(
    p: &NcPoly,
    partial: &BTreeMap<GenId, bool>,
    vars: &[GenId],
    assigned: usize,
) -> Option<bool> {
    let mut acc = false;
    for w in p.terms() {
        let mut val = Some(true);
        for &l in &w.0 {
            if let Some(&b) = partial.get(&l) {
                if !b {
                    val = Some(false);
                    break;
                }
            } else if vars[assigned..].contains(&l) {
                val = None; // undecided letter
                break;
            } else {
                // not a variable at all: mixed or nonzero degree, value 0
                val = Some(false);
                break;
            }
        }
        match val {
            Some(true) => acc ^= true,
            Some(false) => {}
            None => return None,
        }
    }
    Some(acc)
}

/// The bilinearized differential on the span of the generators: each word of
/// the differential is split at one letter, the prefix fed to the first
/// augmentation and the suffix to the second.
pub fn bilinearize(
    dga: &Dga,
    eps0: &Augmentation,
    eps1: &Augmentation,
) -> Result<ChainComplex, DgaError> {
    for (i, e) in [eps0, eps1].iter().enumerate() {
        if !e.is_augmentation(dga) {
            return Err(DgaError::NotAugmentation(format!("argument {i}")));
        }
    }
    let n = dga.n_gens();
    let mut mat = SparseMatF2::zero(n, n);
    for g in 0..n {
        for w in dga.differential[g].terms() {
            for i in 0..w.0.len() {
                let pre = eps0.eval_word(&Word(w.0[..i].to_vec()));
                let suf = eps1.eval_word(&Word(w.0[i + 1..].to_vec()));
                if pre && suf {
                    mat.toggle(w.0[i] as usize, g);
                }
            }
        }
    }
    let space = GradedSpace::new(
        dga.ring,
        (0..n).map(|i| (i as GenId, dga.degrees[i])).collect(),
    )
    .expect("generator ids are unique");
    ChainComplex::new(space, mat, -1).map_err(|e| DgaError::NotAugmentation(e.to_string()))
}

/// The dual complex: transpose differential of degree +1.
pub fn dualize(c: &ChainComplex) -> ChainComplex {
    ChainComplex::new(c.space.clone(), c.differential.transpose(), -c.degree_shift)
        .expect("transpose of a complex is a complex")
}

/// Marked-letter multilinear extraction: for each word of the differential of
/// `b` and each choice of `d` letters in left-to-right order, the tuple of
/// marked letters with the complementary segments augmented by the given
/// augmentations. Returns the F2-aggregated table of tuples.
pub fn marked_split(dga: &Dga, b: GenId, d: usize, eps: &[&Augmentation]) -> BTreeSet<Vec<GenId>> {
    assert_eq!(eps.len(), d + 1, "need d+1 augmentations");
    let mut table: BTreeSet<Vec<GenId>> = BTreeSet::new();
    if d == 0 {
        return table;
    }
    for w in dga.differential[b as usize].terms() {
        let n = w.0.len();
        if n < d {
            continue;
        }
        let mut idx: Vec<usize> = (0..d).collect();
        loop {
            let mut weight = true;
            let mut prev = 0usize;
            for (k, &i) in idx.iter().enumerate() {
                weight &= eps[k].eval_word(&Word(w.0[prev..i].to_vec()));
                prev = i + 1;
            }
            weight &= eps[d].eval_word(&Word(w.0[prev..].to_vec()));
            if weight {
                let tuple: Vec<GenId> = idx.iter().map(|&i| w.0[i]).collect();
                if !table.remove(&tuple) {
                    table.insert(tuple);
                }
            }
            if !next_combination(&mut idx, n) {
                break;
            }
        }
    }
    table
}

/// Advance idx to the next d-combination of 0..n in lexicographic order.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let d = idx.len();
    let mut k = d;
    while k > 0 {
        k -= 1;
        if idx[k] < n - (d - k) {
            idx[k] += 1;
            for j in k + 1..d {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Convention;
    use crate::resolve_front;

    fn trefoil() -> Dga {
        let d = resolve_front("L1 L3 X2 X2 X2 R3 R1", Convention::Normal).unwrap();
        build_dga(&d).unwrap()
    }

    fn all_ones() -> Augmentation {
        Augmentation {
            values: (0..3).map(|g| (g as GenId, true)).collect(),
        }
    }

    #[test]
    fn unknot_dga() {
        let d = resolve_front("L1 R1", Convention::Normal).unwrap();
        let dga = build_dga(&d).unwrap();
        assert_eq!(dga.n_gens(), 1);
        assert_eq!(dga.degrees[0], 1);
        assert!(dga.differential[0].is_zero());
        assert_eq!(enumerate_augmentations(&dga).len(), 1);
    }

    #[test]
    fn trefoil_has_five_augmentations() {
        let dga = trefoil();
        let augs = enumerate_augmentations(&dga);
        assert_eq!(augs.len(), 5);
        // brute force cross-check over all assignments of the degree-0 gens
        let vars: Vec<GenId> = (0..dga.n_gens() as GenId)
            .filter(|&g| dga.degrees[g as usize] == 0)
            .collect();
        let mut brute = Vec::new();
        for mask in 0u32..(1 << vars.len()) {
            let values: BTreeMap<GenId, bool> = vars
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &g)| (g, true))
                .collect();
            let a = Augmentation { values };
            if a.is_augmentation(&dga) {
                brute.push(a);
            }
        }
        brute.sort();
        assert_eq!(brute, augs);
        // and at least one non-solution exists
        assert!(brute.len() < 1 << vars.len());
    }

    #[test]
    fn obstructed_dga_has_no_augmentations() {
        // d(x) = 1 with |x| = 1
        let dga = Dga {
            names: vec!["x".into()],
            degrees: vec![1],
            ring: GradingRing::Z,
            pure_comp: vec![Some(0)],
            differential: vec![NcPoly::one()],
        };
        assert!(enumerate_augmentations(&dga).is_empty());
    }

    #[test]
    fn validate_catches_square_violation() {
        let dga = Dga {
            names: vec!["x".into(), "y".into()],
            degrees: vec![1, 0],
            ring: GradingRing::Mod(2),
            pure_comp: vec![Some(0), Some(0)],
            differential: vec![NcPoly::gen(1), NcPoly::gen(0)],
        };
        assert!(!validate_dga(&dga).square_violations.is_empty());
    }

    #[test]
    fn trefoil_dga_is_valid() {
        assert!(validate_dga(&trefoil()).is_valid());
    }

    #[test]
    fn trefoil_bilinearized_homology() {
        let dga = trefoil();
        let ones = all_ones();
        assert!(ones.is_augmentation(&dga));
        let c = bilinearize(&dga, &ones, &ones).unwrap();
        let a2 = dga.gen_by_name("a2").unwrap() as usize;
        let b1 = dga.gen_by_name("b1").unwrap() as usize;
        let b2 = dga.gen_by_name("b2").unwrap() as usize;
        for b in [b1, b2] {
            for r in 0..dga.n_gens() {
                assert_eq!(c.differential.get(r, b), r == a2, "entry ({r},{b})");
            }
        }
        assert_eq!(crate::f2::poincare_polynomial(&c.homology()), "2 + t");
        let chi: i64 = c
            .homology()
            .iter()
            .map(|(&d, &r)| if d % 2 == 0 { r as i64 } else { -(r as i64) })
            .sum();
        assert_eq!(chi, c.euler_characteristic());
        assert_eq!(chi, 1);
    }

    #[test]
    fn trefoil_all_pairs_square_zero_and_same_polynomial() {
        let dga = trefoil();
        let augs = enumerate_augmentations(&dga);
        for e0 in &augs {
            for e1 in &augs {
                let c = bilinearize(&dga, e0, e1).unwrap();
                assert!(c.check_square_zero().is_ok());
                if e0 == e1 {
                    assert_eq!(crate::f2::poincare_polynomial(&c.homology()), "2 + t");
                }
            }
        }
    }

    #[test]
    fn unknot_linearized_polynomial() {
        let d = resolve_front("L1 R1", Convention::Normal).unwrap();
        let dga = build_dga(&d).unwrap();
        let aug = &enumerate_augmentations(&dga)[0];
        let c = bilinearize(&dga, aug, aug).unwrap();
        assert_eq!(crate::f2::poincare_polynomial(&c.homology()), "t");
    }

    #[test]
    fn dual_of_trefoil_bilinearized() {
        let dga = trefoil();
        let ones = all_ones();
        let c = bilinearize(&dga, &ones, &ones).unwrap();
        let dual = dualize(&c);
        let a2 = dga.gen_by_name("a2").unwrap() as usize;
        let b1 = dga.gen_by_name("b1").unwrap() as usize;
        let b2 = dga.gen_by_name("b2").unwrap() as usize;
        for g in 0..dga.n_gens() {
            let hits: Vec<usize> = (0..dga.n_gens())
                .filter(|&r| dual.differential.get(r, g))
                .collect();
            if g == a2 {
                assert_eq!(hits, vec![b1.min(b2), b1.max(b2)]);
            } else {
                assert!(hits.is_empty());
            }
        }
        let total1: usize = c.homology().values().sum();
        let total2: usize = dual.homology().values().sum();
        assert_eq!(total1, total2);
    }

    #[test]
    fn marked_split_degenerates_to_bilinearize() {
        let dga = trefoil();
        let ones = all_ones();
        let c = bilinearize(&dga, &ones, &ones).unwrap();
        for b in 0..dga.n_gens() as GenId {
            let table = marked_split(&dga, b, 1, &[&ones, &ones]);
            for g in 0..dga.n_gens() {
                let expected = c.differential.get(g, b as usize);
                assert_eq!(table.contains(&vec![g as GenId]), expected);
            }
        }
    }

    #[test]
    fn marked_split_d2_table() {
        let dga = trefoil();
        let ones = all_ones();
        let b1 = dga.gen_by_name("b1").unwrap();
        let b2 = dga.gen_by_name("b2").unwrap();
        let a1 = dga.gen_by_name("a1").unwrap();
        let a2 = dga.gen_by_name("a2").unwrap();
        let a3 = dga.gen_by_name("a3").unwrap();
        let t1 = marked_split(&dga, b1, 2, &[&ones, &ones, &ones]);
        let t2 = marked_split(&dga, b2, 2, &[&ones, &ones, &ones]);
        let fwd: BTreeSet<Vec<GenId>> =
            [vec![a1, a2], vec![a1, a3], vec![a2, a3]].into_iter().collect();
        let rev: BTreeSet<Vec<GenId>> =
            [vec![a3, a2], vec![a3, a1], vec![a2, a1]].into_iter().collect();
        assert!(
            (t1 == fwd && t2 == rev) || (t1 == rev && t2 == fwd),
            "t1={t1:?} t2={t2:?}"
        );
        assert!(marked_split(&dga, b1, 4, &[&ones; 5]).is_empty());
    }

    #[test]
    fn augmentation_count_invariant_under_relabeling() {
        let dga = trefoil();
        let n = dga.n_gens();
        let perm: Vec<usize> = (0..n).rev().collect();
        let inv: Vec<u32> = {
            let mut v = vec![0u32; n];
            for (new, &old) in perm.iter().enumerate() {
                v[old] = new as u32;
            }
            v
        };
        let relabeled = Dga {
            names: perm.iter().map(|&i| dga.names[i].clone()).collect(),
            degrees: perm.iter().map(|&i| dga.degrees[i]).collect(),
            ring: dga.ring,
            pure_comp: perm.iter().map(|&i| dga.pure_comp[i]).collect(),
            differential: perm
                .iter()
                .map(|&i| {
                    NcPoly::from_words(
                        dga.differential[i]
                            .terms()
                            .map(|w| Word(w.0.iter().map(|&g| inv[g as usize]).collect())),
                    )
                })
                .collect(),
        };
        assert_eq!(
            enumerate_augmentations(&dga).len(),
            enumerate_augmentations(&relabeled).len()
        );
    }
}
