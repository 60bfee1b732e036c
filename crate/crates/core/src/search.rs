//! Exhaustive enumeration of small unital involutive quantales, up to isomorphism, and the
//! search for structures separating the classes of the hierarchy.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::lattice::{self, FinSupLattice, Poset};
use crate::quantale::{self, FinQuantale, QuantaleError};
use crate::tensor;

/// Largest carrier the enumerator accepts.
pub const SEARCH_CAP: usize = 8;

/// The relation between middle elements must fit in 64 bits.
pub const HARD_CAP: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search size {size} exceeds the cap {cap}")]
    CarrierTooLarge { size: usize, cap: usize },
    #[error("unknown target '{0}'")]
    UnknownTarget(String),
    #[error(transparent)]
    Quantale(#[from] QuantaleError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Target {
    NonStableSupport,
    StableNotMultiplicative,
    MultiplicativeNotInverse,
    InverseNotFrame,
}

impl Target {
    pub const ALL: [Target; 4] =
        [Target::NonStableSupport, Target::StableNotMultiplicative, Target::MultiplicativeNotInverse, Target::InverseNotFrame];

    pub fn name(self) -> &'static str {
        match self {
            Target::NonStableSupport => "non-stable-support",
            Target::StableNotMultiplicative => "stable-not-multiplicative",
            Target::MultiplicativeNotInverse => "multiplicative-not-inverse",
            Target::InverseNotFrame => "inverse-not-frame",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Target {
    type Err = SearchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Target::ALL.into_iter().find(|t| t.name() == s).ok_or_else(|| SearchError::UnknownTarget(s.to_string()))
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    fn heap(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(cur.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, cur, out);
            if k.is_multiple_of(2) {
                cur.swap(i, k - 1);
            } else {
                cur.swap(0, k - 1);
            }
        }
    }
    heap(k, &mut cur, &mut out);
    out.sort();
    out.dedup();
    out
}

/// All lattices with `n` elements up to isomorphism; `0` is the bottom and `n - 1` the top,
/// and the order refines the index order.
pub fn lattices_up_to_iso(n: usize) -> Result<Vec<FinSupLattice>, SearchError> {
    lattices_up_to_iso_capped(n, SEARCH_CAP)
}

/// As [`lattices_up_to_iso`] with an explicit size cap (never above [`HARD_CAP`]).
pub fn lattices_up_to_iso_capped(n: usize, cap: usize) -> Result<Vec<FinSupLattice>, SearchError> {
    let cap = cap.min(HARD_CAP);
    if n > cap {
        return Err(SearchError::CarrierTooLarge { size: n, cap });
    }
    match n {
        0 => return Ok(vec![]),
        1 => return Ok(vec![FinSupLattice::chain(1)]),
        2 => return Ok(vec![FinSupLattice::chain(2)]),
        _ => {}
    }
    let m = n - 2;
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    let perms = permutations(m);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for r in 0u64..(1 << pairs.len()) {
        let rel = |i: usize, j: usize| i == j || pairs.iter().position(|&p| p == (i, j)).is_some_and(|b| r >> b & 1 == 1);
        let transitive = (0..m).all(|i| (0..m).all(|j| !rel(i, j) || (0..m).all(|k| !rel(j, k) || rel(i, k))));
        if !transitive {
            continue;
        }
        // canonical code: least relation matrix over relabellings
        let code = perms
            .iter()
            .map(|p| {
                let mut c = 0u64;
                for i in 0..m {
                    for j in 0..m {
                        if rel(i, j) {
                            c |= 1 << (p[i] * m + p[j]);
                        }
                    }
                }
                c
            })
            .min()
            .expect("at least one permutation");
        if !seen.insert(code) {
            continue;
        }
        let mut leq_pairs: Vec<(usize, usize)> = (1..=m).flat_map(|x| [(0, x), (x, n - 1)]).collect();
        leq_pairs.push((0, n - 1));
        for i in 0..m {
            for j in 0..m {
                if i != j && rel(i, j) {
                    leq_pairs.push((i + 1, j + 1));
                }
            }
        }
        let poset = Poset::new(n, &leq_pairs).expect("acyclic by construction");
        if let Ok(l) = FinSupLattice::from_poset(&poset) {
            out.push(l);
        }
    }
    Ok(out)
}

/// Order automorphisms of a lattice.
pub fn automorphisms(l: &FinSupLattice) -> Vec<Vec<usize>> {
    let n = l.size();
    let mut out = Vec::new();
    let mut phi = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let height = |x: usize| (l.below(x).count(), l.above(x).count());
    fn go(
        k: usize,
        l: &FinSupLattice,
        height: &dyn Fn(usize) -> (usize, usize),
        phi: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let n = l.size();
        if k == n {
            out.push(phi.clone());
            return;
        }
        for y in 0..n {
            if used[y] || height(k) != height(y) {
                continue;
            }
            if (0..k).all(|x| l.leq(x, k) == l.leq(phi[x], y) && l.leq(k, x) == l.leq(y, phi[x])) {
                phi[k] = y;
                used[y] = true;
                go(k + 1, l, height, phi, used, out);
                used[y] = false;
                phi[k] = usize::MAX;
            }
        }
    }
    go(0, l, &height, &mut phi, &mut used, &mut out);
    out
}

struct MultSearch<'a> {
    l: &'a FinSupLattice,
    ji: Vec<usize>,
    inv: &'a [usize],
    unit: usize,
    /// position of each join-irreducible in `ji`
    pos: Vec<usize>,
    val: Vec<usize>,
    found: Vec<Vec<usize>>,
}

const UNSET: usize = usize::MAX;

impl MultSearch<'_> {
    fn k(&self) -> usize {
        self.ji.len()
    }

    fn get(&self, i: usize, j: usize) -> usize {
        self.val[i * self.k() + j]
    }

    fn set(&mut self, i: usize, j: usize, v: usize) {
        let k = self.k();
        self.val[i * k + j] = v;
    }

    /// `x · ji[j]` from the join-irreducibles below `x`, if all needed entries are set.
    fn left_product(&self, x: usize, j: usize) -> Option<usize> {
        let mut acc = self.l.bottom();
        for (i, &m) in self.ji.iter().enumerate() {
            if self.l.leq(m, x) {
                let v = self.get(i, j);
                if v == UNSET {
                    return None;
                }
                acc = self.l.join(acc, v);
            }
        }
        Some(acc)
    }

    fn right_product(&self, i: usize, x: usize) -> Option<usize> {
        let mut acc = self.l.bottom();
        for (j, &m) in self.ji.iter().enumerate() {
            if self.l.leq(m, x) {
                let v = self.get(i, j);
                if v == UNSET {
                    return None;
                }
                acc = self.l.join(acc, v);
            }
        }
        Some(acc)
    }

    fn consistent_at(&self, i: usize, j: usize) -> bool {
        let l = self.l;
        let k = self.k();
        let v = self.get(i, j);
        let (a, b) = (self.ji[i], self.ji[j]);
        for i2 in 0..k {
            let w = self.get(i2, j);
            if w != UNSET {
                let a2 = self.ji[i2];
                if (l.leq(a2, a) && !l.leq(w, v)) || (l.leq(a, a2) && !l.leq(v, w)) {
                    return false;
                }
            }
        }
        for j2 in 0..k {
            let w = self.get(i, j2);
            if w != UNSET {
                let b2 = self.ji[j2];
                if (l.leq(b2, b) && !l.leq(w, v)) || (l.leq(b, b2) && !l.leq(v, w)) {
                    return false;
                }
            }
        }
        if l.leq(a, self.unit) && !l.leq(v, b) {
            return false;
        }
        if l.leq(b, self.unit) && !l.leq(v, a) {
            return false;
        }
        true
    }

    fn associative_so_far(&self) -> bool {
        let k = self.k();
        for x in 0..k {
            for y in 0..k {
                let xy = self.get(x, y);
                if xy == UNSET {
                    continue;
                }
                for z in 0..k {
                    let yz = self.get(y, z);
                    if yz == UNSET {
                        continue;
                    }
                    if let (Some(l), Some(r)) = (self.left_product(xy, z), self.right_product(x, yz)) {
                        if l != r {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn run(&mut self, slot: usize) {
        let k = self.k();
        if slot == k * k {
            self.found.push(self.val.clone());
            return;
        }
        let (i, j) = (slot / k, slot % k);
        if self.get(i, j) != UNSET {
            self.run(slot + 1);
            return;
        }
        // (ab)* = b*a*
        let (pi, pj) = (self.pos[self.inv[self.ji[j]]], self.pos[self.inv[self.ji[i]]]);
        let (a, b) = (self.ji[i], self.ji[j]);
        let forced = if a == self.unit {
            Some(b)
        } else if b == self.unit {
            Some(a)
        } else {
            None
        };
        let cands: Vec<usize> = match forced {
            Some(v) => vec![v],
            None => self.l.elements().collect(),
        };
        for v in cands {
            let pv = self.inv[v];
            if (pi, pj) == (i, j) && pv != v {
                continue;
            }
            self.set(i, j, v);
            self.set(pi, pj, pv);
            if self.consistent_at(i, j) && self.consistent_at(pi, pj) && self.associative_so_far() {
                self.run(slot + 1);
            }
            self.set(i, j, UNSET);
            self.set(pi, pj, UNSET);
        }
    }
}

fn canonical_code(q: &FinQuantale, auts: &[Vec<usize>]) -> Vec<usize> {
    let n = q.size();
    auts.iter()
        .map(|p| {
            // relabel x ↦ p[x]
            let mut inv_p = vec![0; n];
            for x in 0..n {
                inv_p[p[x]] = x;
            }
            let mut code = vec![p[q.unit()]];
            code.extend((0..n).map(|y| p[q.star(inv_p[y])]));
            for y1 in 0..n {
                for y2 in 0..n {
                    code.push(p[q.mul(inv_p[y1], inv_p[y2])]);
                }
            }
            code
        })
        .min()
        .expect("identity automorphism")
}

/// All unital involutive quantales on a lattice, one per isomorphism class.
pub fn quantales_on(l: &FinSupLattice) -> Vec<FinQuantale> {
    let n = l.size();
    let auts = automorphisms(l);
    let involutions: Vec<&Vec<usize>> = auts.iter().filter(|p| (0..n).all(|x| p[p[x]] == x)).collect();
    let ji = lattice::join_irreducibles(l);
    let mut pos = vec![UNSET; n];
    for (i, &j) in ji.iter().enumerate() {
        pos[j] = i;
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    if n == 1 {
        return vec![FinQuantale::frame(l.clone())];
    }
    for inv in involutions {
        for unit in 1..n {
            if inv[unit] != unit {
                continue;
            }
            let mut s = MultSearch {
                l,
                ji: ji.clone(),
                inv,
                unit,
                pos: pos.clone(),
                val: vec![UNSET; ji.len() * ji.len()],
                found: Vec::new(),
            };
            s.run(0);
            for val in s.found {
                let k = ji.len();
                let mut mult = vec![0; n * n];
                for a in 0..n {
                    for b in 0..n {
                        let mut acc = l.bottom();
                        for i in 0..k {
                            if !l.leq(ji[i], a) {
                                continue;
                            }
                            for j in 0..k {
                                if l.leq(ji[j], b) {
                                    acc = l.join(acc, val[i * k + j]);
                                }
                            }
                        }
                        mult[a * n + b] = acc;
                    }
                }
                if let Ok(q) = FinQuantale::new(l.clone(), mult, inv.clone(), unit) {
                    if seen.insert(canonical_code(&q, &auts)) {
                        out.push(q);
                    }
                }
            }
        }
    }
    out
}

/// All unital involutive quantales with exactly `n` elements, up to isomorphism.
pub fn enumerate_quantales(n: usize) -> Result<Vec<FinQuantale>, SearchError> {
    enumerate_quantales_capped(n, SEARCH_CAP)
}

pub fn enumerate_quantales_capped(n: usize, cap: usize) -> Result<Vec<FinQuantale>, SearchError> {
    Ok(lattices_up_to_iso_capped(n, cap)?.iter().flat_map(quantales_on).collect())
}

/// Whether `q` separates the two classes named by `target`.
pub fn classify(q: &FinQuantale, target: Target) -> Result<bool, SearchError> {
    Ok(match target {
        Target::NonStableSupport => {
            if q.size() > quantale::SUPPORT_SEARCH_CAP {
                return Err(SearchError::CarrierTooLarge { size: q.size(), cap: quantale::SUPPORT_SEARCH_CAP });
            }
            let supports = quantale::find_supports_exhaustive(q)?;
            !supports.is_empty() && supports.iter().all(|s| !s.is_stable())
        }
        Target::StableNotMultiplicative => {
            quantale::check_stable_quantal_frame(q)?.holds && tensor::check_multiplicative(q)?.is_err()
        }
        Target::MultiplicativeNotInverse => {
            quantale::check_stable_quantal_frame(q)?.holds
                && tensor::check_multiplicative(q)?.is_ok()
                && !quantale::check_inverse_quantale(q, &quantale::stable_support(q)?)?.holds
        }
        Target::InverseNotFrame => match quantale::stable_support(q) {
            Ok(s) => quantale::check_inverse_quantale(q, &s)?.holds && !quantale::check_frame(q).holds,
            Err(_) => false,
        },
    })
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub target: Target,
    pub max_size: usize,
    /// Quantales examined, per size `1..=max_size`.
    pub examined: Vec<usize>,
    pub found: Vec<FinQuantale>,
}

pub fn search(target: Target, max_size: usize) -> Result<SearchResult, SearchError> {
    search_capped(target, max_size, SEARCH_CAP)
}

pub fn search_capped(target: Target, max_size: usize, cap: usize) -> Result<SearchResult, SearchError> {
    let cap = cap.min(HARD_CAP);
    if max_size > cap {
        return Err(SearchError::CarrierTooLarge { size: max_size, cap });
    }
    let mut examined = Vec::new();
    let mut found = Vec::new();
    for n in 1..=max_size {
        let all = enumerate_quantales_capped(n, cap)?;
        examined.push(all.len());
        for q in all {
            if classify(&q, target)? {
                found.push(q);
            }
        }
    }
    Ok(SearchResult { target, max_size, examined, found })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_counts() {
        // OEIS A006966
        let counts: Vec<usize> = (1..=7).map(|n| lattices_up_to_iso(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 5, 15, 53]);
    }

    #[test]
    fn automorphisms_of_the_square() {
        let b = FinSupLattice::powerset(2).unwrap();
        assert_eq!(automorphisms(&b).len(), 2);
    }

    #[test]
    fn small_quantale_counts() {
        assert_eq!(enumerate_quantales(1).unwrap().len(), 1);
        assert_eq!(enumerate_quantales(2).unwrap().len(), 1);
    }

    #[test]
    fn target_names_round_trip() {
        for t in Target::ALL {
            assert_eq!(t.name().parse::<Target>().unwrap(), t);
        }
    }
}
