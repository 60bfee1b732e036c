//! Finite complete lattices on index carriers `0..n`, maps between them, closure operators,
//! downset completions and frame checks.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::bits::{self, Mask};

/// Largest carrier for which dense `n × n` tables are built.
pub const DENSE_CAP: usize = 4096;

/// Default limit on the number of downsets materialized by [`downset_lattice`].
pub const DOWNSET_CAP: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("not a partial order: {a} and {b} lie on a cycle")]
    NotAPartialOrder { a: usize, b: usize },
    #[error("not complete: subset {subset:?} has no least upper bound")]
    NotComplete { subset: Vec<usize> },
    #[error("index {index} out of range for carrier of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("{what} of size {size} exceeds the cap {cap}")]
    CarrierTooLarge { what: &'static str, size: usize, cap: usize },
    #[error("map is not monotone: {x} <= {y} but images are not ordered")]
    NotMonotone { x: usize, y: usize },
    #[error("map does not preserve the join of {subset:?}")]
    NotJoinPreserving { subset: Vec<usize> },
    #[error("map does not preserve the meet of {subset:?}")]
    NotMeetPreserving { subset: Vec<usize> },
    #[error("not a closure operator: {law} fails at {witness}")]
    NotAClosure { law: &'static str, witness: usize },
    #[error("basis is not down-closed: {below} <= {element} is missing")]
    BasisNotDownClosed { element: usize, below: usize },
    #[error("basis is not join-dense: {element} is not a join of basis elements")]
    BasisNotJoinDense { element: usize },
    #[error("basis injectivity verdicts disagree (restricted {restricted}, global {global})")]
    EquivalenceBroken { restricted: bool, global: bool },
}

/// A finite partial order, stored as its full reflexive-transitive relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    n: usize,
    leq: Vec<bool>,
}

impl Poset {
    /// Takes the reflexive-transitive closure of `pairs` and rejects cycles.
    pub fn new(n: usize, pairs: &[(usize, usize)]) -> Result<Self, LatticeError> {
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(a, b) in pairs {
            for x in [a, b] {
                if x >= n {
                    return Err(LatticeError::IndexOutOfRange { index: x, size: n });
                }
            }
            leq[a * n + b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if leq[a * n + b] && leq[b * n + a] {
                    return Err(LatticeError::NotAPartialOrder { a, b });
                }
            }
        }
        Ok(Poset { n, leq })
    }

    pub(crate) fn from_relation(n: usize, leq: Vec<bool>) -> Self {
        debug_assert_eq!(leq.len(), n * n);
        Poset { n, leq }
    }

    pub fn antichain(n: usize) -> Self {
        Poset::new(n, &[]).expect("discrete order")
    }

    pub fn chain(n: usize) -> Self {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Poset::new(n, &pairs).expect("chain")
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.n + b]
    }

    /// The down-closure of `m` (carriers of at most 64 points).
    pub fn down_closure(&self, m: Mask) -> Mask {
        let mut out = m;
        for x in bits::ones(m) {
            for y in 0..self.n {
                if self.leq(y, x) {
                    out |= bits::bit(y);
                }
            }
        }
        out
    }

    pub fn is_downset(&self, m: Mask) -> bool {
        self.down_closure(m) == m
    }

    /// Covering pairs `(a, b)` with `a < b` and nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a == b || !self.leq(a, b) {
                    continue;
                }
                let between = (0..n).any(|c| c != a && c != b && self.leq(a, c) && self.leq(c, b));
                if !between {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// A finite complete lattice with precomputed joins and meets.
#[derive(Clone, PartialEq, Eq)]
pub struct FinSupLattice {
    n: usize,
    leq: Vec<bool>,
    join: Vec<usize>,
    meet: Vec<usize>,
    bottom: usize,
    top: usize,
    labels: Vec<String>,
}

impl fmt::Debug for FinSupLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinSupLattice")
            .field("size", &self.n)
            .field("labels", &self.labels)
            .finish()
    }
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// Builds a lattice from a generating order relation on `0..n`.
pub fn build_lattice(n: usize, pairs: &[(usize, usize)]) -> Result<FinSupLattice, LatticeError> {
    let poset = Poset::new(n, pairs)?;
    FinSupLattice::from_poset(&poset)
}

impl FinSupLattice {
    pub fn from_poset(p: &Poset) -> Result<Self, LatticeError> {
        let n = p.n;
        if n == 0 {
            return Err(LatticeError::NotComplete { subset: vec![] });
        }
        if n > DENSE_CAP {
            return Err(LatticeError::CarrierTooLarge { what: "lattice", size: n, cap: DENSE_CAP });
        }
        let least = |cands: &[usize], rel: &dyn Fn(usize, usize) -> bool| -> Option<usize> {
            cands.iter().copied().find(|&u| cands.iter().all(|&v| rel(u, v)))
        };
        let le = |a: usize, b: usize| p.leq(a, b);
        let ge = |a: usize, b: usize| p.leq(b, a);
        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        let mut ub = Vec::with_capacity(n);
        for a in 0..n {
            for b in a..n {
                ub.clear();
                ub.extend((0..n).filter(|&u| le(a, u) && le(b, u)));
                let j = least(&ub, &le).ok_or(LatticeError::NotComplete { subset: vec![a, b] })?;
                join[a * n + b] = j;
                join[b * n + a] = j;
            }
        }
        let all: Vec<usize> = (0..n).collect();
        let bottom = least(&all, &le).ok_or(LatticeError::NotComplete { subset: vec![] })?;
        let top = least(&all, &ge).expect("finite lattice with joins has a top");
        for a in 0..n {
            for b in a..n {
                ub.clear();
                ub.extend((0..n).filter(|&u| le(u, a) && le(u, b)));
                let m = least(&ub, &ge).expect("finite complete lattice has meets");
                meet[a * n + b] = m;
                meet[b * n + a] = m;
            }
        }
        Ok(FinSupLattice { n, leq: p.leq.clone(), join, meet, bottom, top, labels: default_labels(n) })
    }

    /// Assembles a lattice from tables already known to be consistent.
    pub(crate) fn from_tables(n: usize, leq: Vec<bool>, join: Vec<usize>, meet: Vec<usize>) -> Self {
        let bottom = (0..n).find(|&a| (0..n).all(|b| leq[a * n + b])).expect("bottom");
        let top = (0..n).find(|&a| (0..n).all(|b| leq[b * n + a])).expect("top");
        FinSupLattice { n, leq, join, meet, bottom, top, labels: default_labels(n) }
    }

    /// The powerset of a `k`-point set; element `m` is the subset with bitmask `m`.
    pub fn powerset(k: usize) -> Result<Self, LatticeError> {
        let n = 1usize << k;
        if n > DENSE_CAP {
            return Err(LatticeError::CarrierTooLarge { what: "powerset lattice", size: n, cap: DENSE_CAP });
        }
        let mut leq = vec![false; n * n];
        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                leq[a * n + b] = a & b == a;
                join[a * n + b] = a | b;
                meet[a * n + b] = a & b;
            }
        }
        Ok(FinSupLattice { n, leq, join, meet, bottom: 0, top: n - 1, labels: default_labels(n) })
    }

    /// A lattice whose elements are subsets (masks) of a small carrier, closed under the
    /// supplied join; order is inclusion and meets are intersections.
    pub(crate) fn of_sets(sets: &[Mask], join_of: impl Fn(Mask, Mask) -> Mask) -> Self {
        let n = sets.len();
        let index: HashMap<Mask, usize> = sets.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let mut leq = vec![false; n * n];
        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let (x, y) = (sets[a], sets[b]);
                leq[a * n + b] = x & y == x;
                join[a * n + b] = index[&join_of(x, y)];
                meet[a * n + b] = index[&(x & y)];
            }
        }
        Self::from_tables(n, leq, join, meet)
    }

    pub fn chain(n: usize) -> Self {
        Self::from_poset(&Poset::chain(n)).expect("chains are complete")
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

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.n + b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.n + b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.n + b]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn join_all<I: IntoIterator<Item = usize>>(&self, it: I) -> usize {
        it.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    pub fn meet_all<I: IntoIterator<Item = usize>>(&self, it: I) -> usize {
        it.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Index of the element carrying `label`, if any.
    pub fn find(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn below(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&x| self.leq(x, a))
    }

    pub fn above(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&x| self.leq(a, x))
    }

    pub fn poset(&self) -> Poset {
        Poset::from_relation(self.n, self.leq.clone())
    }

    /// Covering pairs of the order (the Hasse diagram).
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.lt(a, b) && !(0..n).any(|c| self.lt(a, c) && self.lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Restricts the order to `keep` (which must itself be a complete lattice in the
    /// induced order), preserving labels.
    pub fn sublattice_order(&self, keep: &[usize]) -> Result<Self, LatticeError> {
        let m = keep.len();
        let mut pairs = Vec::new();
        for i in 0..m {
            for j in 0..m {
                if self.leq(keep[i], keep[j]) {
                    pairs.push((i, j));
                }
            }
        }
        let l = build_lattice(m, &pairs)?;
        Ok(l.with_labels(keep.iter().map(|&k| self.labels[k].clone()).collect()))
    }
}

/// An order-preserving map between two lattices.
#[derive(Debug, Clone)]
pub struct MonotoneMap<'a> {
    source: &'a FinSupLattice,
    target: &'a FinSupLattice,
    image: Vec<usize>,
}

impl<'a> MonotoneMap<'a> {
    pub fn new(source: &'a FinSupLattice, target: &'a FinSupLattice, image: Vec<usize>) -> Result<Self, LatticeError> {
        if image.len() != source.size() {
            return Err(LatticeError::IndexOutOfRange { index: image.len(), size: source.size() });
        }
        if let Some(&bad) = image.iter().find(|&&y| y >= target.size()) {
            return Err(LatticeError::IndexOutOfRange { index: bad, size: target.size() });
        }
        for x in source.elements() {
            for y in source.elements() {
                if source.leq(x, y) && !target.leq(image[x], image[y]) {
                    return Err(LatticeError::NotMonotone { x, y });
                }
            }
        }
        Ok(MonotoneMap { source, target, image })
    }

    pub fn identity(l: &'a FinSupLattice) -> Self {
        MonotoneMap { source: l, target: l, image: l.elements().collect() }
    }

    pub fn source(&self) -> &'a FinSupLattice {
        self.source
    }

    pub fn target(&self) -> &'a FinSupLattice {
        self.target
    }

    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// Checks preservation of the empty join and all binary joins.
    pub fn preserves_joins(&self) -> Result<(), Vec<usize>> {
        let (s, t) = (self.source, self.target);
        if self.image[s.bottom()] != t.bottom() {
            return Err(vec![]);
        }
        for a in s.elements() {
            for b in a + 1..s.size() {
                if self.image[s.join(a, b)] != t.join(self.image[a], self.image[b]) {
                    return Err(vec![a, b]);
                }
            }
        }
        Ok(())
    }

    /// Checks preservation of the empty meet and all binary meets.
    pub fn preserves_meets(&self) -> Result<(), Vec<usize>> {
        let (s, t) = (self.source, self.target);
        if self.image[s.top()] != t.top() {
            return Err(vec![]);
        }
        for a in s.elements() {
            for b in a + 1..s.size() {
                if self.image[s.meet(a, b)] != t.meet(self.image[a], self.image[b]) {
                    return Err(vec![a, b]);
                }
            }
        }
        Ok(())
    }

    pub fn is_injective(&self) -> bool {
        injective_on(&self.image, self.source.elements())
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.size()];
        for &y in &self.image {
            hit[y] = true;
        }
        hit.into_iter().all(|h| h)
    }
}

fn injective_on(image: &[usize], dom: impl Iterator<Item = usize>) -> bool {
    let mut seen = std::collections::HashSet::new();
    dom.into_iter().all(|x| seen.insert(image[x]))
}

/// The right adjoint `f*(y) = ⋁{x : f(x) ≤ y}` of a join-preserving map.
pub fn right_adjoint<'a>(f: &MonotoneMap<'a>) -> Result<MonotoneMap<'a>, LatticeError> {
    f.preserves_joins().map_err(|subset| LatticeError::NotJoinPreserving { subset })?;
    let (s, t) = (f.source, f.target);
    let image = t
        .elements()
        .map(|y| s.join_all(s.elements().filter(|&x| t.leq(f.apply(x), y))))
        .collect();
    Ok(MonotoneMap { source: t, target: s, image })
}

/// Checks `f(x) ≤ y ⟺ x ≤ g(y)` for all `x, y`.
pub fn is_adjoint_pair(f: &MonotoneMap<'_>, g: &MonotoneMap<'_>) -> bool {
    let (s, t) = (f.source, f.target);
    s.elements().all(|x| t.elements().all(|y| t.leq(f.apply(x), y) == s.leq(x, g.apply(y))))
}

/// A closure operator on a lattice.
#[derive(Debug, Clone)]
pub struct ClosureOp<'a> {
    lattice: &'a FinSupLattice,
    image: Vec<usize>,
}

impl<'a> ClosureOp<'a> {
    pub fn new(lattice: &'a FinSupLattice, image: Vec<usize>) -> Result<Self, LatticeError> {
        if image.len() != lattice.size() {
            return Err(LatticeError::IndexOutOfRange { index: image.len(), size: lattice.size() });
        }
        for x in lattice.elements() {
            if image[x] >= lattice.size() {
                return Err(LatticeError::IndexOutOfRange { index: image[x], size: lattice.size() });
            }
            if !lattice.leq(x, image[x]) {
                return Err(LatticeError::NotAClosure { law: "extensive", witness: x });
            }
        }
        for x in lattice.elements() {
            if image[image[x]] != image[x] {
                return Err(LatticeError::NotAClosure { law: "idempotent", witness: x });
            }
        }
        for x in lattice.elements() {
            for y in lattice.elements() {
                if lattice.leq(x, y) && !lattice.leq(image[x], image[y]) {
                    return Err(LatticeError::NotAClosure { law: "monotone", witness: x });
                }
            }
        }
        Ok(ClosureOp { lattice, image })
    }

    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn lattice(&self) -> &'a FinSupLattice {
        self.lattice
    }
}

/// The lattice of fixed points of a closure operator together with the projection onto it.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub lattice: FinSupLattice,
    /// `project[x]` is the index in `lattice` of `j(x)`.
    pub project: Vec<usize>,
    /// `fixed[i]` is the element of the original lattice that element `i` stands for.
    pub fixed: Vec<usize>,
}

pub fn closure_quotient(j: &ClosureOp<'_>) -> Quotient {
    let l = j.lattice;
    let fixed: Vec<usize> = l.elements().filter(|&x| j.apply(x) == x).collect();
    let mut pos = vec![usize::MAX; l.size()];
    for (i, &x) in fixed.iter().enumerate() {
        pos[x] = i;
    }
    let m = fixed.len();
    let mut leq = vec![false; m * m];
    let mut join = vec![0; m * m];
    let mut meet = vec![0; m * m];
    for a in 0..m {
        for b in 0..m {
            let (x, y) = (fixed[a], fixed[b]);
            leq[a * m + b] = l.leq(x, y);
            join[a * m + b] = pos[j.apply(l.join(x, y))];
            // fixed points of a closure are closed under meets
            meet[a * m + b] = pos[l.meet(x, y)];
        }
    }
    let labels = fixed.iter().map(|&x| l.label(x).to_string()).collect();
    let lattice = FinSupLattice::from_tables(m, leq, join, meet).with_labels(labels);
    let project = l.elements().map(|x| pos[j.apply(x)]).collect();
    Quotient { lattice, project, fixed }
}

/// Finds `(a, b, c)` with `a ∧ (b ∨ c) ≠ (a ∧ b) ∨ (a ∧ c)`, if any.
pub fn check_frame(l: &FinSupLattice) -> Result<(), (usize, usize, usize)> {
    match frame_violations(l).next() {
        Some(w) => Err(w),
        None => Ok(()),
    }
}

/// All distributivity failures, in index order.
pub fn frame_violations(l: &FinSupLattice) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
    let n = l.size();
    (0..n).flat_map(move |a| {
        (0..n).flat_map(move |b| {
            (b + 1..n)
                .filter(move |&c| l.meet(a, l.join(b, c)) != l.join(l.meet(a, b), l.meet(a, c)))
                .map(move |c| (a, b, c))
        })
    })
}

pub fn join_irreducibles(l: &FinSupLattice) -> Vec<usize> {
    l.elements()
        .filter(|&x| x != l.bottom() && l.join_all(l.elements().filter(|&y| l.lt(y, x))) != x)
        .collect()
}

/// Verdicts of the basis criterion for injectivity of a frame homomorphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisInjectivity {
    pub on_basis: bool,
    pub global: bool,
}

/// For a frame homomorphism `h` and a down-closed join-dense `basis` of its source, compares
/// injectivity of `h` restricted to the basis with injectivity of `h`.
pub fn check_basis_injectivity(h: &MonotoneMap<'_>, basis: &[usize]) -> Result<BasisInjectivity, LatticeError> {
    let s = h.source;
    let mut in_b = vec![false; s.size()];
    for &b in basis {
        if b >= s.size() {
            return Err(LatticeError::IndexOutOfRange { index: b, size: s.size() });
        }
        in_b[b] = true;
    }
    for &b in basis {
        if let Some(below) = s.below(b).find(|&x| !in_b[x]) {
            return Err(LatticeError::BasisNotDownClosed { element: b, below });
        }
    }
    for x in s.elements() {
        if s.join_all(s.below(x).filter(|&y| in_b[y])) != x {
            return Err(LatticeError::BasisNotJoinDense { element: x });
        }
    }
    h.preserves_joins().map_err(|subset| LatticeError::NotJoinPreserving { subset })?;
    h.preserves_meets().map_err(|subset| LatticeError::NotMeetPreserving { subset })?;
    let on_basis = injective_on(&h.image, basis.iter().copied());
    let global = h.is_injective();
    if on_basis != global {
        return Err(LatticeError::EquivalenceBroken { restricted: on_basis, global });
    }
    Ok(BasisInjectivity { on_basis, global })
}

/// The lattice of downsets of a poset, with the subsets that its elements stand for.
#[derive(Debug, Clone)]
pub struct DownsetLattice {
    pub lattice: FinSupLattice,
    pub sets: Vec<Mask>,
    /// `principal[p]` is the index of `↓p`.
    pub principal: Vec<usize>,
}

impl DownsetLattice {
    pub fn index_of(&self, m: Mask) -> Option<usize> {
        self.sets.iter().position(|&s| s == m)
    }
}

/// Enumerates all downsets of `p` (at most `cap` of them), in canonical order.
pub fn enumerate_downsets(p: &Poset, cap: usize) -> Result<Vec<Mask>, LatticeError> {
    let n = p.size();
    if n > 64 {
        return Err(LatticeError::CarrierTooLarge { what: "poset", size: n, cap: 64 });
    }
    // a linear extension: sort by number of elements below
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| (0..n).filter(|&y| p.leq(y, x)).count());
    let strictly_below: Vec<Mask> =
        (0..n).map(|x| bits::from_iter((0..n).filter(|&y| y != x && p.leq(y, x)))).collect();
    let mut out = Vec::new();
    let mut stack = vec![(0usize, 0 as Mask)];
    while let Some((k, m)) = stack.pop() {
        if k == n {
            out.push(m);
            if out.len() > cap {
                return Err(LatticeError::CarrierTooLarge { what: "downset family of a poset", size: n, cap });
            }
            continue;
        }
        let x = order[k];
        stack.push((k + 1, m));
        if strictly_below[x] & m == strictly_below[x] {
            stack.push((k + 1, m | bits::bit(x)));
        }
    }
    out.sort_by_key(|&m| bits::canonical_key(m));
    Ok(out)
}

pub fn downset_lattice(p: &Poset) -> Result<DownsetLattice, LatticeError> {
    downset_lattice_capped(p, DOWNSET_CAP)
}

pub fn downset_lattice_capped(p: &Poset, cap: usize) -> Result<DownsetLattice, LatticeError> {
    let sets = enumerate_downsets(p, cap)?;
    if sets.len() > DENSE_CAP {
        return Err(LatticeError::CarrierTooLarge { what: "downset lattice", size: sets.len(), cap: DENSE_CAP });
    }
    let lattice = FinSupLattice::of_sets(&sets, |a, b| a | b);
    let principal = (0..p.size())
        .map(|x| {
            let d = p.down_closure(bits::bit(x));
            sets.iter().position(|&s| s == d).expect("principal ideal is a downset")
        })
        .collect();
    Ok(DownsetLattice { lattice, sets, principal })
}
