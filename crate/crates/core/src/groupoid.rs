//! Finite discrete groupoids, their powerset quantales and G-sets.

use thiserror::Error;

use crate::bits::{self, Mask};
use crate::envelope::EnvelopeError;
use crate::invsemi::{FinInverseSemigroup, InvSemiError};
use crate::lattice::{FinSupLattice, LatticeError};
use crate::quantale::{self, FinQuantale, QuantaleError};

/// Default arrow limit for [`powerset_quantale`].
pub const POWERSET_CAP: usize = 10;

/// Arrow limit for [`groupoid_isomorphic`].
pub const ISO_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupoidError {
    #[error("malformed groupoid data: {0}")]
    Malformed(String),
    #[error("axiom '{axiom}' fails at {witness:?}")]
    AxiomFail { axiom: &'static str, witness: Vec<usize> },
    #[error("{what} has {size} elements, cap is {cap}")]
    CarrierTooLarge { what: &'static str, size: usize, cap: usize },
    #[error("quantale is not atomic with pointwise products: {reason} at {witness:?}")]
    NotAtomicPointwise { reason: &'static str, witness: Vec<usize> },
    #[error("not a topology: {reason} at {witness:?}")]
    NotATopology { reason: &'static str, witness: Vec<Vec<usize>> },
    #[error("{map} is not continuous at {witness:?}")]
    NotContinuous { map: &'static str, witness: Vec<usize> },
    #[error("topology is not quantal: {reason} at {witness:?}")]
    NotQuantalTopology { reason: &'static str, witness: Vec<Vec<usize>> },
    #[error("quantale is not an inverse quantal frame")]
    NotIQF,
    #[error("not a groupoid morphism: {reason} at {witness:?}")]
    NotAMorphism { reason: &'static str, witness: Vec<usize> },
    #[error("internal consistency failure: {0}")]
    EquivalenceBroken(String),
    #[error(transparent)]
    Quantale(#[from] QuantaleError),
    #[error(transparent)]
    InvSemi(#[from] InvSemiError),
    #[error(transparent)]
    Envelope(#[from] EnvelopeError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A finite groupoid. `comp(x, y)` is defined iff `r(x) = d(y)`; then `d(xy) = d(x)` and
/// `r(xy) = r(y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinGroupoid {
    n: usize,
    units: Vec<usize>,
    dom: Vec<usize>,
    cod: Vec<usize>,
    comp: Vec<Option<usize>>,
    inv: Vec<usize>,
    labels: Vec<String>,
}

impl FinGroupoid {
    pub fn validate(
        n: usize,
        units: &[usize],
        dom: Vec<usize>,
        cod: Vec<usize>,
        comp: &[(usize, usize, usize)],
        inv: Vec<usize>,
    ) -> Result<Self, GroupoidError> {
        if dom.len() != n || cod.len() != n || inv.len() != n {
            return Err(GroupoidError::Malformed("dom, cod and inv need one entry per arrow".into()));
        }
        if n > 64 {
            return Err(GroupoidError::CarrierTooLarge { what: "groupoid", size: n, cap: 64 });
        }
        let in_range = |x: usize| x < n;
        if !units.iter().chain(&dom).chain(&cod).chain(&inv).copied().all(in_range)
            || !comp.iter().all(|&(x, y, z)| in_range(x) && in_range(y) && in_range(z))
        {
            return Err(GroupoidError::Malformed("arrow index out of range".into()));
        }
        let mut sorted_units = units.to_vec();
        sorted_units.sort_unstable();
        sorted_units.dedup();
        let is_unit = |x: usize| sorted_units.binary_search(&x).is_ok();
        for &u in &sorted_units {
            if dom[u] != u || cod[u] != u {
                return Err(GroupoidError::AxiomFail { axiom: "d(u) = r(u) = u for units", witness: vec![u] });
            }
        }
        for x in 0..n {
            if !is_unit(dom[x]) || !is_unit(cod[x]) {
                return Err(GroupoidError::AxiomFail { axiom: "d and r land in units", witness: vec![x] });
            }
        }
        let mut table = vec![None; n * n];
        for &(x, y, z) in comp {
            if cod[x] != dom[y] {
                return Err(GroupoidError::AxiomFail { axiom: "composable iff r(x) = d(y)", witness: vec![x, y] });
            }
            if table[x * n + y].is_some_and(|w| w != z) {
                return Err(GroupoidError::Malformed(format!("two products given for ({x}, {y})")));
            }
            table[x * n + y] = Some(z);
        }
        for x in 0..n {
            for y in 0..n {
                if cod[x] == dom[y] && table[x * n + y].is_none() {
                    return Err(GroupoidError::AxiomFail { axiom: "composable iff r(x) = d(y)", witness: vec![x, y] });
                }
            }
        }
        let g = FinGroupoid {
            n,
            units: sorted_units,
            dom,
            cod,
            comp: table,
            inv,
            labels: (0..n).map(|i| i.to_string()).collect(),
        };
        for x in 0..n {
            for y in 0..n {
                if let Some(z) = g.comp(x, y) {
                    if g.dom[z] != g.dom[x] || g.cod[z] != g.cod[y] {
                        return Err(GroupoidError::AxiomFail { axiom: "d(xy) = d(x), r(xy) = r(y)", witness: vec![x, y] });
                    }
                }
            }
        }
        for x in 0..n {
            if g.comp(g.dom[x], x) != Some(x) || g.comp(x, g.cod[x]) != Some(x) {
                return Err(GroupoidError::AxiomFail { axiom: "unit laws", witness: vec![x] });
            }
        }
        for x in 0..n {
            for y in 0..n {
                let Some(xy) = g.comp(x, y) else { continue };
                for z in 0..n {
                    let Some(yz) = g.comp(y, z) else { continue };
                    if g.comp(xy, z) != g.comp(x, yz) {
                        return Err(GroupoidError::AxiomFail { axiom: "associativity", witness: vec![x, y, z] });
                    }
                }
            }
        }
        for x in 0..n {
            let i = g.inv[x];
            if g.comp(x, i) != Some(g.dom[x]) || g.comp(i, x) != Some(g.cod[x]) {
                return Err(GroupoidError::AxiomFail { axiom: "inversion", witness: vec![x] });
            }
        }
        for x in 0..n {
            if g.inv[g.inv[x]] != x {
                return Err(GroupoidError::EquivalenceBroken(format!("inverse of the inverse of {x}")));
            }
            for y in 0..n {
                if let Some(z) = g.comp(x, y) {
                    if g.comp(g.inv[y], g.inv[x]) != Some(g.inv[z]) {
                        return Err(GroupoidError::EquivalenceBroken(format!("inverse of the product {x}{y}")));
                    }
                }
            }
        }
        Ok(g)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.n, "one label per arrow");
        self.labels = labels;
        self
    }

    /// The empty groupoid.
    pub fn empty() -> Self {
        FinGroupoid::validate(0, &[], vec![], vec![], &[], vec![]).expect("empty groupoid")
    }

    /// A connected groupoid: `k` objects with vertex group given by a group table.
    /// Arrow `(i, g, j)` from `i` to `j` has index `(i * k + j) * h + g`.
    pub fn connected(k: usize, group: &[usize], unit: usize, group_labels: &[&str]) -> Result<Self, GroupoidError> {
        let h = (group.len() as f64).sqrt().round() as usize;
        if h * h != group.len() || h == 0 || unit >= h {
            return Err(GroupoidError::Malformed("group table is not square".into()));
        }
        let n = k * k * h;
        let idx = |i: usize, g: usize, j: usize| (i * k + j) * h + g;
        let ginv: Vec<usize> = (0..h)
            .map(|g| (0..h).find(|&x| group[g * h + x] == unit).ok_or(GroupoidError::Malformed("no group inverse".into())))
            .collect::<Result<_, _>>()?;
        let mut dom = vec![0; n];
        let mut cod = vec![0; n];
        let mut inv = vec![0; n];
        let mut comp = Vec::new();
        let mut labels = vec![String::new(); n];
        for i in 0..k {
            for j in 0..k {
                for g in 0..h {
                    let x = idx(i, g, j);
                    dom[x] = idx(i, unit, i);
                    cod[x] = idx(j, unit, j);
                    inv[x] = idx(j, ginv[g], i);
                    labels[x] = match (k, h) {
                        (1, _) => group_labels.get(g).map_or(g.to_string(), |s| s.to_string()),
                        (_, 1) => format!("({i},{j})"),
                        _ => format!("({i},{},{j})", group_labels.get(g).map_or(g.to_string(), |s| s.to_string())),
                    };
                    for l in 0..k {
                        for g2 in 0..h {
                            comp.push((x, idx(j, g2, l), idx(i, group[g * h + g2], l)));
                        }
                    }
                }
            }
        }
        let units: Vec<usize> = (0..k).map(|i| idx(i, unit, i)).collect();
        Ok(FinGroupoid::validate(n, &units, dom, cod, &comp, inv)?.with_labels(labels))
    }

    /// The cyclic group of order `m` as a one-object groupoid.
    pub fn cyclic(m: usize) -> Self {
        let table: Vec<usize> = (0..m * m).map(|i| (i / m + i % m) % m).collect();
        let labels: Vec<String> =
            (0..m).map(|g| if g == 0 { "e".to_string() } else if g == 1 { "g".to_string() } else { format!("g{g}") }).collect();
        let refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
        Self::connected(1, &table, 0, &refs).expect("cyclic group")
    }

    /// The Klein four-group.
    pub fn klein() -> Self {
        let table: Vec<usize> = (0..16).map(|i| (i / 4) ^ (i % 4)).collect();
        Self::connected(1, &table, 0, &["e", "a", "b", "c"]).expect("Klein group")
    }

    /// The pair groupoid on `k` objects; arrow `(i, j)` has index `i * k + j`.
    pub fn pair(k: usize) -> Self {
        Self::connected(k, &[0], 0, &[]).expect("pair groupoid")
    }

    /// `k` objects and identities only.
    pub fn discrete(k: usize) -> Self {
        let parts: Vec<FinGroupoid> = (0..k).map(|_| Self::pair(1)).collect();
        let g = Self::disjoint_union(&parts);
        let labels = (0..k).map(|i| format!("u{i}")).collect();
        g.with_labels(labels)
    }

    pub fn disjoint_union(parts: &[FinGroupoid]) -> Self {
        let n: usize = parts.iter().map(|p| p.n).sum();
        let mut units = Vec::new();
        let mut dom = Vec::new();
        let mut cod = Vec::new();
        let mut inv = Vec::new();
        let mut comp = Vec::new();
        let mut labels = Vec::new();
        let mut off = 0;
        for (c, p) in parts.iter().enumerate() {
            units.extend(p.units.iter().map(|&u| u + off));
            dom.extend(p.dom.iter().map(|&u| u + off));
            cod.extend(p.cod.iter().map(|&u| u + off));
            inv.extend(p.inv.iter().map(|&u| u + off));
            for x in 0..p.n {
                for y in 0..p.n {
                    if let Some(z) = p.comp(x, y) {
                        comp.push((x + off, y + off, z + off));
                    }
                }
                labels.push(if parts.len() == 1 { p.labels[x].clone() } else { format!("{c}.{}", p.labels[x]) });
            }
            off += p.n;
        }
        FinGroupoid::validate(n, &units, dom, cod, &comp, inv).expect("disjoint union of groupoids").with_labels(labels)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn arrows(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub fn units(&self) -> &[usize] {
        &self.units
    }

    pub fn units_mask(&self) -> Mask {
        bits::from_iter(self.units.iter().copied())
    }

    pub fn is_unit(&self, x: usize) -> bool {
        self.units.binary_search(&x).is_ok()
    }

    pub fn dom(&self, x: usize) -> usize {
        self.dom[x]
    }

    pub fn cod(&self, x: usize) -> usize {
        self.cod[x]
    }

    pub fn inv(&self, x: usize) -> usize {
        self.inv[x]
    }

    pub fn comp(&self, x: usize, y: usize) -> Option<usize> {
        self.comp[x * self.n + y]
    }

    /// All `(x, y, xy)` triples.
    pub fn comp_triples(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.n {
            for y in 0..self.n {
                if let Some(z) = self.comp(x, y) {
                    out.push((x, y, z));
                }
            }
        }
        out
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn set_label(&self, m: Mask) -> String {
        let parts: Vec<&str> = bits::ones(m).map(|x| self.label(x)).collect();
        if parts.is_empty() {
            "∅".into()
        } else {
            format!("{{{}}}", parts.join(","))
        }
    }

    /// `UV = {xy : x ∈ U, y ∈ V, r(x) = d(y)}`.
    pub fn set_product(&self, u: Mask, v: Mask) -> Mask {
        let mut out = 0;
        for x in bits::ones(u) {
            for y in bits::ones(v) {
                if let Some(z) = self.comp(x, y) {
                    out |= bits::bit(z);
                }
            }
        }
        out
    }

    pub fn set_inverse(&self, u: Mask) -> Mask {
        bits::from_iter(bits::ones(u).map(|x| self.inv[x]))
    }

    pub fn set_dom(&self, u: Mask) -> Mask {
        bits::from_iter(bits::ones(u).map(|x| self.dom[x]))
    }

    pub fn set_cod(&self, u: Mask) -> Mask {
        bits::from_iter(bits::ones(u).map(|x| self.cod[x]))
    }

    /// `d` and `r` are injective on `u`.
    pub fn is_gset(&self, u: Mask) -> bool {
        let c = u.count_ones();
        self.set_dom(u).count_ones() == c && self.set_cod(u).count_ones() == c
    }

    /// Connected components, each as a sorted list of arrows.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for &u in &self.units {
            if seen[u] {
                continue;
            }
            let comp: Vec<usize> = self
                .arrows()
                .filter(|&x| {
                    let d = self.dom[x];
                    self.arrows().any(|y| self.dom[y] == u && self.cod[y] == d)
                })
                .collect();
            for &x in &comp {
                seen[x] = true;
            }
            out.push(comp);
        }
        out
    }
}

pub fn powerset_quantale(g: &FinGroupoid) -> Result<FinQuantale, GroupoidError> {
    powerset_quantale_capped(g, POWERSET_CAP)
}

/// `P(G)` with pointwise product; element `m` is the arrow set with bitmask `m`.
pub fn powerset_quantale_capped(g: &FinGroupoid, cap: usize) -> Result<FinQuantale, GroupoidError> {
    let k = g.size();
    if k > cap {
        return Err(GroupoidError::CarrierTooLarge { what: "groupoid for its powerset quantale", size: k, cap });
    }
    let lat = FinSupLattice::powerset(k)?;
    let n = 1usize << k;
    // single[x][V] = {x}V
    let mut single = vec![0 as Mask; k * n];
    for x in 0..k {
        for v in 1..n {
            let low = v & v.wrapping_neg();
            let y = low.trailing_zeros() as usize;
            let prev = single[x * n + (v & (v - 1))];
            single[x * n + v] = prev | g.comp(x, y).map_or(0, bits::bit);
        }
    }
    let mut mult = vec![0usize; n * n];
    for u in 1..n {
        let x = u.trailing_zeros() as usize;
        let rest = u & (u - 1);
        for v in 0..n {
            mult[u * n + v] = mult[rest * n + v] | single[x * n + v] as usize;
        }
    }
    let inv = (0..n).map(|m| g.set_inverse(m as Mask) as usize).collect();
    let labels = (0..n).map(|m| g.set_label(m as Mask)).collect();
    Ok(FinQuantale::from_parts(lat.with_labels(labels), mult, inv, g.units_mask() as usize))
}

/// Checks that `P(G)` is an inverse quantal frame whose support is `U ↦ d(U) = G₀ ∩ UU⁻¹`.
pub fn verify_powerset_quantale(g: &FinGroupoid, q: &FinQuantale) -> Result<(), GroupoidError> {
    if !quantale::check_inverse_quantal_frame(q)?.holds {
        return Err(GroupoidError::EquivalenceBroken("P(G) is not an inverse quantal frame".into()));
    }
    let s = quantale::candidate_support(q)?;
    let g0 = g.units_mask();
    for u in q.elements() {
        let m = u as Mask;
        let d = g.set_dom(m);
        if s.apply(u) as Mask != d || d != g0 & g.set_product(m, g.set_inverse(m)) || d != g0 & g.set_product(m, bits::full(g.size())) {
            return Err(GroupoidError::EquivalenceBroken(format!("support of {} is not its domain image", g.set_label(m))));
        }
    }
    Ok(())
}

/// The inverse monoid of G-sets under pointwise product, ordered by bitmask.
#[derive(Debug, Clone)]
pub struct GSets {
    pub monoid: FinInverseSemigroup,
    pub sets: Vec<Mask>,
}

pub fn gsets(g: &FinGroupoid) -> Result<GSets, GroupoidError> {
    let k = g.size();
    if k > POWERSET_CAP {
        return Err(GroupoidError::CarrierTooLarge { what: "groupoid for G-set enumeration", size: k, cap: POWERSET_CAP });
    }
    let sets: Vec<Mask> = (0..(1 as Mask) << k).filter(|&m| g.is_gset(m)).collect();
    let pos = |m: Mask| sets.binary_search(&m).expect("G-sets are closed under product");
    let s = sets.len();
    let mult = (0..s * s).map(|i| pos(g.set_product(sets[i / s], sets[i % s]))).collect();
    let unit = pos(g.units_mask());
    let labels = sets.iter().map(|&m| g.set_label(m)).collect();
    let monoid = FinInverseSemigroup::validate(s, mult, Some(unit))?.with_labels(labels);
    Ok(GSets { monoid, sets })
}

/// Reads off a groupoid from the atoms of an atomic quantale with pointwise products.
pub fn recover_groupoid_from_atoms(q: &FinQuantale) -> Result<FinGroupoid, GroupoidError> {
    let l = q.lattice();
    let bot = q.bottom();
    let atoms: Vec<usize> = l.elements().filter(|&a| a != bot && l.below(a).count() == 2).collect();
    if q.join_all(atoms.iter().copied()) != q.top() {
        return Err(GroupoidError::NotAtomicPointwise { reason: "top is not a join of atoms", witness: vec![] });
    }
    if q.size() != 1 << atoms.len() {
        return Err(GroupoidError::NotAtomicPointwise { reason: "lattice is not a powerset of its atoms", witness: vec![] });
    }
    let pos = |a: usize| atoms.binary_search(&a).ok();
    let n = atoms.len();
    let mut comp = Vec::new();
    for (i, &x) in atoms.iter().enumerate() {
        for (j, &y) in atoms.iter().enumerate() {
            let p = q.mul(x, y);
            if p == bot {
                continue;
            }
            let k = pos(p).ok_or(GroupoidError::NotAtomicPointwise { reason: "product of atoms is not an atom", witness: vec![x, y] })?;
            comp.push((i, j, k));
        }
    }
    let mut dom = vec![0; n];
    let mut cod = vec![0; n];
    let mut inv = vec![0; n];
    for (i, &x) in atoms.iter().enumerate() {
        let not_atom = GroupoidError::NotAtomicPointwise { reason: "xx* is not a unit atom", witness: vec![x] };
        dom[i] = pos(q.aa_star(x)).ok_or(not_atom.clone())?;
        cod[i] = pos(q.aa_star(q.star(x))).ok_or(not_atom)?;
        inv[i] = pos(q.star(x)).ok_or(GroupoidError::NotAtomicPointwise { reason: "x* is not an atom", witness: vec![x] })?;
    }
    let units: Vec<usize> = (0..n).filter(|&i| q.leq(atoms[i], q.unit())).collect();
    let labels = atoms.iter().map(|&a| q.label(a).to_string()).collect();
    Ok(FinGroupoid::validate(n, &units, dom, cod, &comp, inv)?.with_labels(labels))
}

/// A bijection of arrows preserving units, `d`, `r`, composition and inverses.
pub fn groupoid_isomorphic(a: &FinGroupoid, b: &FinGroupoid) -> Result<Option<Vec<usize>>, GroupoidError> {
    let n = a.size();
    if n > ISO_CAP || b.size() > ISO_CAP {
        return Err(GroupoidError::CarrierTooLarge { what: "groupoid for isomorphism search", size: n.max(b.size()), cap: ISO_CAP });
    }
    if b.size() != n || a.units.len() != b.units.len() {
        return Ok(None);
    }
    let sig = |g: &FinGroupoid, x: usize| {
        let hom = g.arrows().filter(|&y| g.dom(y) == g.dom(x) && g.cod(y) == g.cod(x)).count();
        let objects_reachable = g.arrows().filter(|&y| g.dom(y) == g.dom(x)).count();
        let mut order = 1;
        let mut p = x;
        while g.comp(p, x).is_some() && p != g.dom(x) {
            p = g.comp(p, x).expect("loop");
            order += 1;
            if order > n + 1 {
                break;
            }
        }
        (g.is_unit(x), g.inv(x) == x, hom, objects_reachable, if g.dom(x) == g.cod(x) { order } else { 0 })
    };
    let sa: Vec<_> = a.arrows().map(|x| sig(a, x)).collect();
    let sb: Vec<_> = b.arrows().map(|x| sig(b, x)).collect();
    let mut phi = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn ok(a: &FinGroupoid, b: &FinGroupoid, phi: &[usize], x: usize) -> bool {
        let fx = phi[x];
        for (ax, bx) in [(a.dom(x), b.dom(fx)), (a.cod(x), b.cod(fx)), (a.inv(x), b.inv(fx))] {
            if phi[ax] != usize::MAX && phi[ax] != bx {
                return false;
            }
        }
        for y in a.arrows() {
            let fy = phi[y];
            if fy == usize::MAX {
                continue;
            }
            if (a.dom(y) == x) != (b.dom(fy) == fx) || (a.cod(y) == x) != (b.cod(fy) == fx) || (a.inv(y) == x) != (b.inv(fy) == fx) {
                return false;
            }
            for (p, fp) in [(a.comp(x, y), b.comp(fx, fy)), (a.comp(y, x), b.comp(fy, fx))] {
                match (p, fp) {
                    (None, None) => {}
                    (Some(p), Some(fp)) => {
                        if phi[p] != usize::MAX && phi[p] != fp {
                            return false;
                        }
                    }
                    _ => return false,
                }
            }
            for z in a.arrows() {
                if phi[z] != usize::MAX && a.comp(y, z) == Some(x) && b.comp(fy, phi[z]) != Some(fx) {
                    return false;
                }
            }
        }
        true
    }

    fn go<S: PartialEq>(k: usize, a: &FinGroupoid, b: &FinGroupoid, sa: &[S], sb: &[S], phi: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        if k == a.size() {
            return true;
        }
        for y in b.arrows() {
            if used[y] || sa[k] != sb[y] {
                continue;
            }
            phi[k] = y;
            used[y] = true;
            if ok(a, b, phi, k) && go(k + 1, a, b, sa, sb, phi, used) {
                return true;
            }
            phi[k] = usize::MAX;
            used[y] = false;
        }
        false
    }

    Ok(go(0, a, b, &sa, &sb, &mut phi, &mut used).then_some(phi))
}

/// Preimage behaviour of a groupoid morphism on powerset quantales.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaxReport {
    /// `f⁻¹(U) f⁻¹(V) ⊆ f⁻¹(UV)` for all `U, V`; otherwise a failing pair.
    pub lax: Result<(), (Mask, Mask)>,
    /// First pair where the inclusion is strict.
    pub equality_failure: Option<(Mask, Mask)>,
    pub unit_preserved: bool,
}

/// `f : G' → G` given on arrows; checks the preimage map `P(G) → P(G')`.
pub fn check_lax_morphism(src: &FinGroupoid, tgt: &FinGroupoid, f: &[usize]) -> Result<LaxReport, GroupoidError> {
    if f.len() != src.size() || f.iter().any(|&y| y >= tgt.size()) {
        return Err(GroupoidError::Malformed("morphism has the wrong shape".into()));
    }
    if tgt.size() > POWERSET_CAP {
        return Err(GroupoidError::CarrierTooLarge { what: "morphism target", size: tgt.size(), cap: POWERSET_CAP });
    }
    for x in src.arrows() {
        if src.is_unit(x) && !tgt.is_unit(f[x]) {
            return Err(GroupoidError::NotAMorphism { reason: "unit not sent to a unit", witness: vec![x] });
        }
        if f[src.dom(x)] != tgt.dom(f[x]) || f[src.cod(x)] != tgt.cod(f[x]) {
            return Err(GroupoidError::NotAMorphism { reason: "d or r not preserved", witness: vec![x] });
        }
        if f[src.inv(x)] != tgt.inv(f[x]) {
            return Err(GroupoidError::NotAMorphism { reason: "inverse not preserved", witness: vec![x] });
        }
        for y in src.arrows() {
            if let Some(z) = src.comp(x, y) {
                if tgt.comp(f[x], f[y]) != Some(f[z]) {
                    return Err(GroupoidError::NotAMorphism { reason: "composition not preserved", witness: vec![x, y] });
                }
            }
        }
    }
    let pre = |u: Mask| bits::from_iter(src.arrows().filter(|&x| bits::has(u, f[x])));
    let n = (1 as Mask) << tgt.size();
    let mut lax = Ok(());
    let mut equality_failure = None;
    'outer: for u in 0..n {
        for v in 0..n {
            let lhs = src.set_product(pre(u), pre(v));
            let rhs = pre(tgt.set_product(u, v));
            if lhs & rhs != lhs {
                lax = Err((u, v));
                break 'outer;
            }
            if lhs != rhs && equality_failure.is_none() {
                equality_failure = Some((u, v));
            }
        }
    }
    let unit_preserved = pre(tgt.units_mask()) == src.units_mask();
    Ok(LaxReport { lax, equality_failure, unit_preserved })
}

/// Every arrow map `G' → G` that is a groupoid morphism (small carriers only).
pub fn all_morphisms(src: &FinGroupoid, tgt: &FinGroupoid) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut f = vec![0; src.size()];
    fn go(k: usize, src: &FinGroupoid, tgt: &FinGroupoid, f: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == src.size() {
            let ok = src.arrows().all(|x| {
                f[src.dom(x)] == tgt.dom(f[x])
                    && f[src.cod(x)] == tgt.cod(f[x])
                    && f[src.inv(x)] == tgt.inv(f[x])
                    && src.arrows().all(|y| src.comp(x, y).is_none_or(|z| tgt.comp(f[x], f[y]) == Some(f[z])))
            });
            if ok {
                out.push(f.clone());
            }
            return;
        }
        for y in tgt.arrows() {
            if src.is_unit(k) != tgt.is_unit(y) && src.is_unit(k) {
                continue;
            }
            f[k] = y;
            go(k + 1, src, tgt, f, out);
        }
    }
    go(0, src, tgt, &mut f, &mut out);
    out
}

/// One representative of each isomorphism class of groupoids with `1..=max` arrows.
/// Built from connected components `k² · |H|` with `H` a group of order at most 4.
pub fn groupoids_up_to(max: usize) -> Result<Vec<(String, FinGroupoid)>, GroupoidError> {
    if max > 4 {
        return Err(GroupoidError::CarrierTooLarge { what: "exhaustive groupoid generation", size: max, cap: 4 });
    }
    let blocks: Vec<(&str, FinGroupoid)> = vec![
        ("1", FinGroupoid::pair(1)),
        ("Z2", FinGroupoid::cyclic(2)),
        ("Z3", FinGroupoid::cyclic(3)),
        ("Z4", FinGroupoid::cyclic(4)),
        ("V4", FinGroupoid::klein()),
        ("pair2", FinGroupoid::pair(2)),
    ];
    let mut out = Vec::new();
    fn go(
        start: usize,
        left: usize,
        blocks: &[(&str, FinGroupoid)],
        cur: &mut Vec<usize>,
        out: &mut Vec<(String, FinGroupoid)>,
    ) {
        if !cur.is_empty() {
            let parts: Vec<FinGroupoid> = cur.iter().map(|&i| blocks[i].1.clone()).collect();
            let name = cur.iter().map(|&i| blocks[i].0).collect::<Vec<_>>().join("+");
            out.push((name, FinGroupoid::disjoint_union(&parts)));
        }
        for i in start..blocks.len() {
            if blocks[i].1.size() <= left {
                cur.push(i);
                go(i, left - blocks[i].1.size(), blocks, cur, out);
                cur.pop();
            }
        }
    }
    go(0, max, &blocks, &mut Vec::new(), &mut out);
    out.sort_by_key(|(name, g)| (g.size(), name.clone()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_groupoid_with_bad_inverse() {
        let g = FinGroupoid::pair(2);
        let mut inv: Vec<usize> = g.arrows().map(|x| g.inv(x)).collect();
        inv[1] = 1;
        let err = FinGroupoid::validate(4, g.units(), g.dom.clone(), g.cod.clone(), &g.comp_triples(), inv).unwrap_err();
        assert_eq!(err, GroupoidError::AxiomFail { axiom: "inversion", witness: vec![1] });
    }

    #[test]
    fn cyclic_two() {
        let g = FinGroupoid::cyclic(2);
        assert_eq!(g.units(), &[0]);
        assert_eq!(g.comp(1, 1), Some(0));
        let q = powerset_quantale(&g).unwrap();
        assert_eq!(q.size(), 4);
        assert_eq!(q.mul(0b10, 0b10), 0b01);
        verify_powerset_quantale(&g, &q).unwrap();
    }

    #[test]
    fn gsets_of_small_groupoids() {
        assert_eq!(gsets(&FinGroupoid::cyclic(2)).unwrap().sets, vec![0, 1, 2]);
        assert_eq!(gsets(&FinGroupoid::pair(2)).unwrap().monoid.size(), 7);
        assert_eq!(gsets(&FinGroupoid::discrete(2)).unwrap().monoid.size(), 4);
    }

    #[test]
    fn generated_counts() {
        let all = groupoids_up_to(4).unwrap();
        let counts: Vec<usize> = (1..=4).map(|k| all.iter().filter(|(_, g)| g.size() == k).count()).collect();
        assert_eq!(counts, vec![1, 2, 3, 7]);
    }

    #[test]
    fn iso_search() {
        let z2 = FinGroupoid::cyclic(2);
        let d2 = FinGroupoid::discrete(2);
        assert!(groupoid_isomorphic(&z2, &z2).unwrap().is_some());
        assert!(groupoid_isomorphic(&z2, &d2).unwrap().is_none());
        let back = recover_groupoid_from_atoms(&powerset_quantale(&z2).unwrap()).unwrap();
        assert!(groupoid_isomorphic(&z2, &back).unwrap().is_some());
    }

    #[test]
    fn collapse_on_z2() {
        let g = FinGroupoid::cyclic(2);
        let r = check_lax_morphism(&g, &g, &[0, 0]).unwrap();
        assert!(r.lax.is_ok());
        // U = V⁻¹ = {g}
        let (u, v) = (0b10, 0b10);
        assert_eq!(g.set_product(0, 0), 0);
        assert_eq!(g.set_product(u, v), 0b01);
        assert!(r.equality_failure.is_some());
        assert!(!r.unit_preserved);
    }
}
