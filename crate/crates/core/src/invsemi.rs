//! Finite inverse semigroups, the natural order, compatibility and joins.

use thiserror::Error;

use crate::bits::{self, Mask};
use crate::lattice::Poset;
use crate::Verdict;

/// Carrier limit for symmetric inverse monoids.
pub const SYMMETRIC_CAP: usize = 4;

/// Limit on the number of compatible antichains visited by the completeness checks.
pub const ANTICHAIN_CAP: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvSemiError {
    #[error("malformed table: {0}")]
    Malformed(String),
    #[error("multiplication is not associative at ({a}, {b}, {c})")]
    AssocFail { a: usize, b: usize, c: usize },
    #[error("element {x} has no inverse")]
    NotRegular { x: usize },
    #[error("idempotents {e} and {f} do not commute")]
    IdempotentsDontCommute { e: usize, f: usize },
    #[error("{u} is not a two-sided unit (fails at {x})")]
    UnitFail { u: usize, x: usize },
    #[error("semigroup is not a monoid")]
    NotAMonoid,
    #[error("{what} has {size} elements, cap is {cap}")]
    CarrierTooLarge { what: &'static str, size: usize, cap: usize },
    #[error("not an abstract complete pseudogroup: {0}")]
    NotACP(String),
    #[error("internal consistency failure: {0}")]
    EquivalenceBroken(String),
}

/// A finite inverse semigroup, optionally with a unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinInverseSemigroup {
    n: usize,
    mult: Vec<usize>,
    inv: Vec<usize>,
    unit: Option<usize>,
    nat: Vec<bool>,
    labels: Vec<String>,
}

impl FinInverseSemigroup {
    pub fn validate(n: usize, mult: Vec<usize>, unit: Option<usize>) -> Result<Self, InvSemiError> {
        if n == 0 {
            return Err(InvSemiError::Malformed("empty carrier".into()));
        }
        if mult.len() != n * n {
            return Err(InvSemiError::Malformed(format!("table has {} entries, expected {}", mult.len(), n * n)));
        }
        if mult.iter().any(|&x| x >= n) || unit.is_some_and(|u| u >= n) {
            return Err(InvSemiError::Malformed("element index out of range".into()));
        }
        let m = |a: usize, b: usize| mult[a * n + b];
        for a in 0..n {
            for b in 0..n {
                let ab = m(a, b);
                for c in 0..n {
                    if m(ab, c) != m(a, m(b, c)) {
                        return Err(InvSemiError::AssocFail { a, b, c });
                    }
                }
            }
        }
        let inv = (0..n)
            .map(|x| (0..n).find(|&y| m(m(x, y), x) == x && m(m(y, x), y) == y).ok_or(InvSemiError::NotRegular { x }))
            .collect::<Result<Vec<_>, _>>()?;
        let idem: Vec<usize> = (0..n).filter(|&e| m(e, e) == e).collect();
        for &e in &idem {
            for &f in &idem {
                if m(e, f) != m(f, e) {
                    return Err(InvSemiError::IdempotentsDontCommute { e, f });
                }
            }
        }
        if let Some(u) = unit {
            if let Some(x) = (0..n).find(|&x| m(u, x) != x || m(x, u) != x) {
                return Err(InvSemiError::UnitFail { u, x });
            }
        }
        let mut nat = vec![false; n * n];
        for x in 0..n {
            for y in 0..n {
                nat[x * n + y] = m(m(x, inv[x]), y) == x;
            }
        }
        Ok(FinInverseSemigroup { n, mult, inv, unit, nat, labels: (0..n).map(|i| i.to_string()).collect() })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.n, "one label per element");
        self.labels = labels;
        self
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.n + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn unit(&self) -> Option<usize> {
        self.unit
    }

    pub fn mult_table(&self) -> &[usize] {
        &self.mult
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn find(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn is_idempotent(&self, a: usize) -> bool {
        self.mul(a, a) == a
    }

    pub fn idempotents(&self) -> Vec<usize> {
        self.elements().filter(|&a| self.is_idempotent(a)).collect()
    }

    /// `d(a) = aa⁻¹`
    pub fn dom(&self, a: usize) -> usize {
        self.mul(a, self.inv(a))
    }

    /// `r(a) = a⁻¹a`
    pub fn ran(&self, a: usize) -> usize {
        self.mul(self.inv(a), a)
    }

    /// Natural order: `x ≤ y` iff `x = (xx⁻¹)y`.
    pub fn nat_leq(&self, x: usize, y: usize) -> bool {
        self.nat[x * self.n + y]
    }

    /// The natural order as a poset.
    pub fn natural_poset(&self) -> Poset {
        Poset::from_relation(self.n, self.nat.clone())
    }

    /// A zero: `0x = x0 = 0` for all `x`.
    pub fn zero(&self) -> Option<usize> {
        self.elements().find(|&z| self.elements().all(|x| self.mul(z, x) == z && self.mul(x, z) == z))
    }

    /// `st⁻¹` and `s⁻¹t` are idempotent.
    pub fn compatible(&self, s: usize, t: usize) -> bool {
        self.is_idempotent(self.mul(s, self.inv(t))) && self.is_idempotent(self.mul(self.inv(s), t))
    }

    pub fn compatible_set(&self, xs: &[usize]) -> bool {
        xs.iter().all(|&s| xs.iter().all(|&t| self.compatible(s, t)))
    }

    /// Least upper bound in the natural order, if one exists.
    pub fn join(&self, xs: &[usize]) -> Option<usize> {
        let ub: Vec<usize> = self.elements().filter(|&u| xs.iter().all(|&x| self.nat_leq(x, u))).collect();
        ub.iter().copied().find(|&u| ub.iter().all(|&v| self.nat_leq(u, v)))
    }

    /// Greatest lower bound in the natural order, if one exists.
    pub fn nat_meet(&self, xs: &[usize]) -> Option<usize> {
        let lb: Vec<usize> = self.elements().filter(|&l| xs.iter().all(|&x| self.nat_leq(l, x))).collect();
        lb.iter().copied().find(|&l| lb.iter().all(|&v| self.nat_leq(v, l)))
    }

    /// The inverse semigroup of idempotents.
    pub fn idempotent_semigroup(&self) -> FinInverseSemigroup {
        let idem = self.idempotents();
        let k = idem.len();
        let pos = |a: usize| idem.binary_search(&a).expect("idempotents are closed under product");
        let mult = (0..k * k).map(|i| pos(self.mul(idem[i / k], idem[i % k]))).collect();
        let unit = self.unit.map(pos);
        let labels = idem.iter().map(|&a| self.labels[a].clone()).collect();
        FinInverseSemigroup::validate(k, mult, unit).expect("semilattice of idempotents").with_labels(labels)
    }

    /// Compatible antichains of the natural order (including the empty one).
    pub fn compatible_antichains(&self) -> Result<Vec<Vec<usize>>, InvSemiError> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.antichains_from(0, &mut cur, &mut out)?;
        Ok(out)
    }

    fn antichains_from(&self, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) -> Result<(), InvSemiError> {
        out.push(cur.clone());
        if out.len() > ANTICHAIN_CAP {
            return Err(InvSemiError::CarrierTooLarge { what: "compatible antichain family", size: out.len(), cap: ANTICHAIN_CAP });
        }
        for x in start..self.n {
            let ok = cur
                .iter()
                .all(|&y| self.compatible(x, y) && !self.nat_leq(x, y) && !self.nat_leq(y, x));
            if ok {
                cur.push(x);
                self.antichains_from(x + 1, cur, out)?;
                cur.pop();
            }
        }
        Ok(())
    }
}

/// Every compatible subset has a join.
pub fn check_complete(s: &FinInverseSemigroup) -> Result<Verdict, InvSemiError> {
    for xs in s.compatible_antichains()? {
        if s.join(&xs).is_none() {
            return Ok(Verdict::no(xs));
        }
    }
    Ok(Verdict::yes())
}

/// Multiplication distributes over all existing joins of compatible subsets.
/// A failing witness is `[s, x1, x2, ...]`.
pub fn check_infinitely_distributive(s: &FinInverseSemigroup) -> Result<Verdict, InvSemiError> {
    for xs in s.compatible_antichains()? {
        let Some(j) = s.join(&xs) else { continue };
        for t in s.elements() {
            let left: Vec<usize> = xs.iter().map(|&x| s.mul(t, x)).collect();
            let right: Vec<usize> = xs.iter().map(|&x| s.mul(x, t)).collect();
            if s.join(&left) != Some(s.mul(t, j)) || s.join(&right) != Some(s.mul(j, t)) {
                let mut w = vec![t];
                w.extend(&xs);
                return Ok(Verdict::no(w));
            }
        }
    }
    Ok(Verdict::yes())
}

/// Complete and infinitely distributive.
pub fn is_abstract_complete_pseudogroup(s: &FinInverseSemigroup) -> Result<bool, InvSemiError> {
    Ok(check_complete(s)?.holds && check_infinitely_distributive(s)?.holds)
}

/// Meet of a nonempty subset of an abstract complete pseudogroup, computed from idempotents.
pub fn meet(s: &FinInverseSemigroup, xs: &[usize]) -> Result<usize, InvSemiError> {
    if xs.is_empty() {
        return Err(InvSemiError::Malformed("meet of the empty set".into()));
    }
    if !is_abstract_complete_pseudogroup(s)? {
        return Err(InvSemiError::NotACP("not complete and infinitely distributive".into()));
    }
    let agreeing: Vec<usize> = s
        .idempotents()
        .into_iter()
        .filter(|&f| xs.iter().all(|&x| xs.iter().all(|&y| s.mul(f, x) == s.mul(f, y))))
        .collect();
    let f = s.join(&agreeing).ok_or_else(|| InvSemiError::EquivalenceBroken("idempotents have no join".into()))?;
    let m = s.mul(f, xs[0]);
    if s.nat_meet(xs) != Some(m) {
        return Err(InvSemiError::EquivalenceBroken(format!("computed meet {m} is not the greatest lower bound")));
    }
    Ok(m)
}

/// Partial bijections of `0..n`; `map[i]` is the image of `i`.
pub type PartialBijection = Vec<Option<usize>>;

/// The graph of a partial bijection as a mask over pairs, pair `(i, j)` at bit `i * n + j`.
pub fn graph_mask(f: &[Option<usize>]) -> Mask {
    let n = f.len();
    bits::from_iter(f.iter().enumerate().filter_map(|(i, &j)| j.map(|j| i * n + j)))
}

/// All partial bijections of `0..n`, ordered by rank and then by graph.
pub fn partial_bijections(n: usize) -> Result<Vec<PartialBijection>, InvSemiError> {
    if n > SYMMETRIC_CAP {
        return Err(InvSemiError::CarrierTooLarge { what: "symmetric inverse monoid base", size: n, cap: SYMMETRIC_CAP });
    }
    let mut out = Vec::new();
    let mut cur = vec![None; n];
    fn go(i: usize, n: usize, used: Mask, cur: &mut PartialBijection, out: &mut Vec<PartialBijection>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        cur[i] = None;
        go(i + 1, n, used, cur, out);
        for j in 0..n {
            if !bits::has(used, j) {
                cur[i] = Some(j);
                go(i + 1, n, used | bits::bit(j), cur, out);
            }
        }
        cur[i] = None;
    }
    go(0, n, 0, &mut cur, &mut out);
    out.sort_by_key(|f| bits::canonical_key(graph_mask(f)));
    Ok(out)
}

fn bijection_label(f: &[Option<usize>]) -> String {
    let parts: Vec<String> = f.iter().enumerate().filter_map(|(i, &j)| j.map(|j| format!("{i}>{j}"))).collect();
    format!("{{{}}}", parts.join(","))
}

/// `I(n)`, composing left to right: `fg` is "first `f`, then `g`".
pub fn symmetric_inverse_monoid(n: usize) -> Result<FinInverseSemigroup, InvSemiError> {
    let maps = partial_bijections(n)?;
    let index: std::collections::HashMap<Mask, usize> =
        maps.iter().enumerate().map(|(i, f)| (graph_mask(f), i)).collect();
    let k = maps.len();
    let mut mult = vec![0; k * k];
    for (a, f) in maps.iter().enumerate() {
        for (b, g) in maps.iter().enumerate() {
            let h: PartialBijection = f.iter().map(|&x| x.and_then(|x| g[x])).collect();
            mult[a * k + b] = index[&graph_mask(&h)];
        }
    }
    let unit = index[&graph_mask(&(0..n).map(Some).collect::<Vec<_>>())];
    let labels = maps.iter().map(|f| bijection_label(f)).collect();
    Ok(FinInverseSemigroup::validate(k, mult, Some(unit))?.with_labels(labels))
}

/// A finite group from its multiplication table, as an inverse monoid.
pub fn group(table: Vec<usize>, unit: usize) -> Result<FinInverseSemigroup, InvSemiError> {
    let n = (table.len() as f64).sqrt() as usize;
    FinInverseSemigroup::validate(n, table, Some(unit))
}

/// A finite meet-semilattice (with the given order) as an inverse semigroup of idempotents.
pub fn semilattice(meet: Vec<usize>, n: usize) -> Result<FinInverseSemigroup, InvSemiError> {
    let s = FinInverseSemigroup::validate(n, meet, None)?;
    if s.idempotents().len() != n {
        return Err(InvSemiError::Malformed("not idempotent".into()));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn left_zero_band_is_rejected() {
        // xy = x
        let err = FinInverseSemigroup::validate(2, vec![0, 0, 1, 1], None).unwrap_err();
        assert!(matches!(err, InvSemiError::IdempotentsDontCommute { .. }));
    }

    #[test]
    fn null_semigroup_is_not_regular() {
        // {0, a} with every product 0
        let err = FinInverseSemigroup::validate(2, vec![0, 0, 0, 0], None).unwrap_err();
        assert_eq!(err, InvSemiError::NotRegular { x: 1 });
    }

    #[test]
    fn symmetric_inverse_monoid_sizes() {
        let sizes: Vec<usize> = (0..=3).map(|n| symmetric_inverse_monoid(n).unwrap().size()).collect();
        assert_eq!(sizes, vec![1, 2, 7, 34]);
        let i2 = symmetric_inverse_monoid(2).unwrap();
        assert_eq!(i2.label(0), "{}");
        assert_eq!(i2.zero(), Some(0));
        assert_eq!(i2.idempotents().len(), 4);
    }

    #[test]
    fn composition_is_left_to_right() {
        let i2 = symmetric_inverse_monoid(2).unwrap();
        let f = i2.find("{0>1}").unwrap();
        let g = i2.find("{1>0}").unwrap();
        assert_eq!(i2.label(i2.mul(f, g)), "{0>0}");
        assert_eq!(i2.label(i2.mul(g, f)), "{1>1}");
        assert_eq!(i2.dom(f), i2.find("{0>0}").unwrap());
    }

    #[test]
    fn symmetric_inverse_monoids_are_complete_pseudogroups() {
        for n in 0..=2 {
            let s = symmetric_inverse_monoid(n).unwrap();
            assert!(is_abstract_complete_pseudogroup(&s).unwrap());
        }
    }

    #[test]
    fn meets_in_i2() {
        let s = symmetric_inverse_monoid(2).unwrap();
        let id = s.find("{0>0,1>1}").unwrap();
        let swap = s.find("{0>1,1>0}").unwrap();
        let e0 = s.find("{0>0}").unwrap();
        assert_eq!(meet(&s, &[id, swap]).unwrap(), 0);
        assert_eq!(meet(&s, &[id, e0]).unwrap(), e0);
    }

    #[test]
    fn groups_without_zero_are_not_complete() {
        // Z/2: the empty family has no join
        let z2 = group(vec![0, 1, 1, 0], 0).unwrap();
        assert_eq!(check_complete(&z2).unwrap(), Verdict::no(vec![]));
    }
}
