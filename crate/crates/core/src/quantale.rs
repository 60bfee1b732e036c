//! Finite unital involutive quantales: axioms, supports, stability, partial units and the
//! inverse-quantale / quantal-frame hierarchy.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::invsemi::{FinInverseSemigroup, InvSemiError};
use crate::lattice::{self, FinSupLattice, LatticeError};
use crate::Verdict;

/// Default carrier limit for [`find_supports_exhaustive`].
pub const SUPPORT_SEARCH_CAP: usize = 12;

/// Carrier limit for [`quantale_isomorphic`].
pub const ISO_SEARCH_CAP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuantaleError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("malformed tables: {0}")]
    Malformed(String),
    #[error("multiplication is not associative at ({a}, {b}, {c})")]
    AssocFail { a: usize, b: usize, c: usize },
    #[error("unit law fails at {a}")]
    UnitFail { a: usize },
    #[error("{side:?} multiplication by {a} does not preserve the join of {join_of:?}")]
    JoinDistFail { side: Side, a: usize, join_of: Vec<usize> },
    #[error("involution law '{law}' fails at {witness:?}")]
    InvolutionFail { law: &'static str, witness: Vec<usize> },
    #[error("no support: axiom '{axiom}' fails at {witness:?}")]
    NotASupport { axiom: &'static str, witness: Vec<usize> },
    #[error("partition is not a congruence for {operation}: witness {witness:?}")]
    NotACongruence { operation: &'static str, witness: Vec<usize> },
    #[error("partition is malformed: {0}")]
    BadPartition(String),
    #[error("quantale is not stably supported")]
    NotStablySupported,
    #[error("internal consistency failure: {0}")]
    EquivalenceBroken(String),
    #[error("inverse-quantale routes disagree at {0}")]
    RouteDisagreement(usize),
    #[error("carrier of size {size} exceeds the cap {cap}")]
    CarrierTooLarge { size: usize, cap: usize },
    #[error(transparent)]
    InvSemi(#[from] InvSemiError),
}

/// A finite unital involutive quantale.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinQuantale {
    lattice: FinSupLattice,
    mult: Vec<usize>,
    inv: Vec<usize>,
    unit: usize,
}

impl FinQuantale {
    pub fn new(lattice: FinSupLattice, mult: Vec<usize>, inv: Vec<usize>, unit: usize) -> Result<Self, QuantaleError> {
        check_quantale_axioms(lattice, mult, inv, unit)
    }

    /// Assembles tables produced by a construction that guarantees the axioms.
    pub(crate) fn from_parts(lattice: FinSupLattice, mult: Vec<usize>, inv: Vec<usize>, unit: usize) -> Self {
        debug_assert_eq!(mult.len(), lattice.size() * lattice.size());
        FinQuantale { lattice, mult, inv, unit }
    }

    /// A frame as a quantale: multiplication is meet, the unit is the top, trivial involution.
    pub fn frame(lattice: FinSupLattice) -> Self {
        let n = lattice.size();
        let mult = (0..n * n).map(|i| lattice.meet(i / n, i % n)).collect();
        let unit = lattice.top();
        FinQuantale { mult, inv: (0..n).collect(), unit, lattice }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        self.lattice = self.lattice.with_labels(labels);
        self
    }

    pub fn lattice(&self) -> &FinSupLattice {
        &self.lattice
    }

    pub fn size(&self) -> usize {
        self.lattice.size()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.size() + b]
    }

    pub fn mul3(&self, a: usize, b: usize, c: usize) -> usize {
        self.mul(self.mul(a, b), c)
    }

    pub fn star(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn top(&self) -> usize {
        self.lattice.top()
    }

    pub fn bottom(&self) -> usize {
        self.lattice.bottom()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.lattice.leq(a, b)
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.lattice.join(a, b)
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.lattice.meet(a, b)
    }

    pub fn join_all<I: IntoIterator<Item = usize>>(&self, it: I) -> usize {
        self.lattice.join_all(it)
    }

    pub fn label(&self, a: usize) -> &str {
        self.lattice.label(a)
    }

    pub fn find(&self, label: &str) -> Option<usize> {
        self.lattice.find(label)
    }

    pub fn mult_table(&self) -> &[usize] {
        &self.mult
    }

    pub fn inv_table(&self) -> &[usize] {
        &self.inv
    }

    /// `aa*`
    pub fn aa_star(&self, a: usize) -> usize {
        self.mul(a, self.star(a))
    }

    /// Right-sided elements: `a1 ≤ a`.
    pub fn right_sided(&self) -> Vec<usize> {
        self.elements().filter(|&a| self.leq(self.mul(a, self.top()), a)).collect()
    }

    pub fn below_unit(&self) -> Vec<usize> {
        self.lattice.below(self.unit).collect()
    }
}

/// Validates multiplication, involution and unit tables over a lattice.
pub fn check_quantale_axioms(
    lattice: FinSupLattice,
    mult: Vec<usize>,
    inv: Vec<usize>,
    unit: usize,
) -> Result<FinQuantale, QuantaleError> {
    let n = lattice.size();
    if mult.len() != n * n {
        return Err(QuantaleError::Malformed(format!("multiplication table has {} entries, expected {}", mult.len(), n * n)));
    }
    if inv.len() != n {
        return Err(QuantaleError::Malformed(format!("involution has {} entries, expected {n}", inv.len())));
    }
    if unit >= n || mult.iter().chain(&inv).any(|&x| x >= n) {
        return Err(QuantaleError::Malformed("element index out of range".into()));
    }
    let q = FinQuantale { lattice, mult, inv, unit };
    let l = &q.lattice;
    for a in 0..n {
        for b in 0..n {
            let ab = q.mul(a, b);
            for c in 0..n {
                if q.mul(ab, c) != q.mul(a, q.mul(b, c)) {
                    return Err(QuantaleError::AssocFail { a, b, c });
                }
            }
        }
    }
    for a in 0..n {
        if q.mul(unit, a) != a || q.mul(a, unit) != a {
            return Err(QuantaleError::UnitFail { a });
        }
    }
    let bot = l.bottom();
    for a in 0..n {
        if q.mul(a, bot) != bot {
            return Err(QuantaleError::JoinDistFail { side: Side::Left, a, join_of: vec![] });
        }
        if q.mul(bot, a) != bot {
            return Err(QuantaleError::JoinDistFail { side: Side::Right, a, join_of: vec![] });
        }
        for b in 0..n {
            for c in b + 1..n {
                let bc = l.join(b, c);
                if q.mul(a, bc) != l.join(q.mul(a, b), q.mul(a, c)) {
                    return Err(QuantaleError::JoinDistFail { side: Side::Left, a, join_of: vec![b, c] });
                }
                if q.mul(bc, a) != l.join(q.mul(b, a), q.mul(c, a)) {
                    return Err(QuantaleError::JoinDistFail { side: Side::Right, a, join_of: vec![b, c] });
                }
            }
        }
    }
    for a in 0..n {
        if q.star(q.star(a)) != a {
            return Err(QuantaleError::InvolutionFail { law: "a** = a", witness: vec![a] });
        }
    }
    for a in 0..n {
        for b in 0..n {
            if l.leq(a, b) && !l.leq(q.star(a), q.star(b)) {
                return Err(QuantaleError::InvolutionFail { law: "monotone", witness: vec![a, b] });
            }
            if q.star(q.mul(a, b)) != q.mul(q.star(b), q.star(a)) {
                return Err(QuantaleError::InvolutionFail { law: "(ab)* = b*a*", witness: vec![a, b] });
            }
        }
    }
    Ok(q)
}

/// Finds an order-, multiplication-, involution- and unit-preserving bijection `a → b`.
pub fn quantale_isomorphic(a: &FinQuantale, b: &FinQuantale) -> Result<Option<Vec<usize>>, QuantaleError> {
    let n = a.size();
    if n > ISO_SEARCH_CAP {
        return Err(QuantaleError::CarrierTooLarge { size: n, cap: ISO_SEARCH_CAP });
    }
    if b.size() != n {
        return Ok(None);
    }
    let sig = |q: &FinQuantale, x: usize| {
        (
            q.lattice.below(x).count(),
            q.lattice.above(x).count(),
            q.mul(x, x) == x,
            q.star(x) == x,
            q.leq(x, q.unit()),
            q.leq(q.unit(), x),
            q.mul(x, q.top()) == x,
            q.mul(q.top(), x) == x,
        )
    };
    let sa: Vec<_> = a.elements().map(|x| sig(a, x)).collect();
    let sb: Vec<_> = b.elements().map(|x| sig(b, x)).collect();
    {
        let mut ca = sa.clone();
        let mut cb = sb.clone();
        ca.sort();
        cb.sort();
        if ca != cb {
            return Ok(None);
        }
    }
    let mut phi = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| a.lattice.below(x).count());

    fn consistent(a: &FinQuantale, b: &FinQuantale, phi: &[usize], x: usize) -> bool {
        let fx = phi[x];
        if (x == a.unit()) != (fx == b.unit()) {
            return false;
        }
        let sx = a.star(x);
        if phi[sx] != usize::MAX && phi[sx] != b.star(fx) {
            return false;
        }
        for y in a.elements() {
            let fy = phi[y];
            if fy == usize::MAX {
                continue;
            }
            if a.leq(x, y) != b.leq(fx, fy) || a.leq(y, x) != b.leq(fy, fx) {
                return false;
            }
            for (p, fp) in [(a.mul(x, y), b.mul(fx, fy)), (a.mul(y, x), b.mul(fy, fx))] {
                if phi[p] != usize::MAX && phi[p] != fp {
                    return false;
                }
            }
        }
        // products of already-mapped pairs landing on x
        for y in a.elements() {
            if phi[y] == usize::MAX {
                continue;
            }
            for z in a.elements() {
                if phi[z] != usize::MAX && a.mul(y, z) == x && b.mul(phi[y], phi[z]) != fx {
                    return false;
                }
            }
        }
        true
    }

    #[allow(clippy::too_many_arguments)]
    fn go<S: PartialEq>(
        k: usize,
        order: &[usize],
        a: &FinQuantale,
        b: &FinQuantale,
        sa: &[S],
        sb: &[S],
        phi: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let x = order[k];
        for y in b.elements() {
            if used[y] || sa[x] != sb[y] {
                continue;
            }
            phi[x] = y;
            used[y] = true;
            if consistent(a, b, phi, x) && go(k + 1, order, a, b, sa, sb, phi, used) {
                return true;
            }
            phi[x] = usize::MAX;
            used[y] = false;
        }
        false
    }

    if go(0, &order, a, b, &sa, &sb, &mut phi, &mut used) {
        Ok(Some(phi))
    } else {
        Ok(None)
    }
}

/// Checks that `image` is an isomorphism of unital involutive quantales `a → b`.
pub fn is_isomorphism(a: &FinQuantale, b: &FinQuantale, image: &[usize]) -> bool {
    let n = a.size();
    if b.size() != n || image.len() != n {
        return false;
    }
    let mut hit = vec![false; n];
    for &y in image {
        if y >= n || hit[y] {
            return false;
        }
        hit[y] = true;
    }
    image[a.unit()] == b.unit()
        && a.elements().all(|x| image[a.star(x)] == b.star(image[x]))
        && a.elements().all(|x| {
            a.elements().all(|y| {
                a.leq(x, y) == b.leq(image[x], image[y]) && image[a.mul(x, y)] == b.mul(image[x], image[y])
            })
        })
}

// ---------------------------------------------------------------------------------------------
// Supports

/// A verified support `ς` on a quantale.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportMap {
    image: Vec<usize>,
    stable: bool,
}

impl SupportMap {
    /// Verifies the support axioms for `image` and records stability.
    pub fn new(q: &FinQuantale, image: Vec<usize>) -> Result<Self, QuantaleError> {
        if image.len() != q.size() || image.iter().any(|&x| x >= q.size()) {
            return Err(QuantaleError::Malformed("support image has the wrong shape".into()));
        }
        support_axioms(q, &image).map_err(|(axiom, witness)| QuantaleError::NotASupport { axiom, witness })?;
        let stable = stability_witness(q, &image).is_none();
        Ok(SupportMap { image, stable })
    }

    pub fn apply(&self, a: usize) -> usize {
        self.image[a]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn is_stable(&self) -> bool {
        self.stable
    }

    /// The set `ςQ`, sorted.
    pub fn range(&self) -> Vec<usize> {
        self.image.iter().copied().collect::<BTreeSet<_>>().into_iter().collect()
    }
}

fn support_axioms(q: &FinQuantale, s: &[usize]) -> Result<(), (&'static str, Vec<usize>)> {
    let (e, bot) = (q.unit(), q.bottom());
    if s[bot] != bot {
        return Err(("join-preserving", vec![]));
    }
    for a in q.elements() {
        for b in a + 1..q.size() {
            if s[q.join(a, b)] != q.join(s[a], s[b]) {
                return Err(("join-preserving", vec![a, b]));
            }
        }
    }
    for a in q.elements() {
        if !q.leq(s[a], e) {
            return Err(("ςa ≤ e", vec![a]));
        }
        if !q.leq(s[a], q.aa_star(a)) {
            return Err(("ςa ≤ aa*", vec![a]));
        }
        if !q.leq(a, q.mul(s[a], a)) {
            return Err(("a ≤ (ςa)a", vec![a]));
        }
    }
    Ok(())
}

/// First `a` with `ς(a1) ≠ ςa`.
fn stability_witness(q: &FinQuantale, s: &[usize]) -> Option<usize> {
    q.elements().find(|&a| s[q.mul(a, q.top())] != s[a])
}

/// The map `a ↦ e ∧ aa*`, verified to be a support.
pub fn candidate_support(q: &FinQuantale) -> Result<SupportMap, QuantaleError> {
    let image = q.elements().map(|a| q.meet(q.unit(), q.aa_star(a))).collect();
    SupportMap::new(q, image)
}

/// The stable support of `q`, or an error explaining why there is none.
pub fn stable_support(q: &FinQuantale) -> Result<SupportMap, QuantaleError> {
    let s = candidate_support(q)?;
    match stability_witness(q, s.image()) {
        None => Ok(s),
        Some(a) => Err(QuantaleError::NotASupport { axiom: "ς(a1) = ςa", witness: vec![a] }),
    }
}

pub fn find_supports_exhaustive(q: &FinQuantale) -> Result<Vec<SupportMap>, QuantaleError> {
    find_supports_capped(q, SUPPORT_SEARCH_CAP)
}

/// All supports of `q`, by backtracking over values on join-irreducibles.
pub fn find_supports_capped(q: &FinQuantale, cap: usize) -> Result<Vec<SupportMap>, QuantaleError> {
    if q.size() > cap {
        return Err(QuantaleError::CarrierTooLarge { size: q.size(), cap });
    }
    let l = q.lattice();
    let ji = lattice::join_irreducibles(l);
    let cands: Vec<Vec<usize>> = ji
        .iter()
        .map(|&j| {
            let bound = q.meet(q.unit(), q.aa_star(j));
            l.below(bound).filter(|&c| q.leq(j, q.mul(c, j))).collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut val = vec![0usize; ji.len()];

    fn go(
        k: usize,
        q: &FinQuantale,
        ji: &[usize],
        cands: &[Vec<usize>],
        val: &mut Vec<usize>,
        out: &mut Vec<SupportMap>,
    ) {
        if k == ji.len() {
            let l = q.lattice();
            let image: Vec<usize> = q
                .elements()
                .map(|x| l.join_all(ji.iter().zip(val.iter()).filter(|(&j, _)| l.leq(j, x)).map(|(_, &v)| v)))
                .collect();
            if let Ok(s) = SupportMap::new(q, image) {
                out.push(s);
            }
            return;
        }
        for &c in &cands[k] {
            let monotone = (0..k).all(|i| {
                (!q.leq(ji[i], ji[k]) || q.leq(val[i], c)) && (!q.leq(ji[k], ji[i]) || q.leq(c, val[i]))
            });
            if monotone {
                val[k] = c;
                go(k + 1, q, ji, cands, val, out);
            }
        }
    }

    go(0, q, &ji, &cands, &mut val, &mut out);
    Ok(out)
}

/// Verdicts of the eleven equivalent formulations of stability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityReport {
    pub conditions: [bool; 11],
}

impl StabilityReport {
    pub const NAMES: [&'static str; 11] = [
        "ς(ab) = ς(aςb)",
        "ς(ab) ≤ ςa",
        "ς(a1) = ςa",
        "a1 ∧ e = ςa",
        "a1 ∧ b = (ςa)b",
        "(-)1 : ςQ → RS(Q) is an order iso inverse to ς",
        "a ≤ (ςb)a ⟺ ςa ≤ ςb",
        "ςa = ⋀{b ∈ ςQ : a ≤ ba}",
        "ςa ≤ b1 ⟺ ςa ≤ ςb",
        "ςa = ⋁{b ∈ ςQ : b ≤ a1}",
        "(a, f) ↦ ς(af) is a left module action on ςQ",
    ];

    pub fn all(&self) -> bool {
        self.conditions.iter().all(|&c| c)
    }

    pub fn none(&self) -> bool {
        self.conditions.iter().all(|&c| !c)
    }
}

pub fn stability_conditions_report(q: &FinQuantale, s: &SupportMap) -> Result<StabilityReport, QuantaleError> {
    let one = q.top();
    let e = q.unit();
    let sp = |a: usize| s.apply(a);
    let range = s.range();
    let els = || q.elements();
    let all2 = |f: &dyn Fn(usize, usize) -> bool| els().all(|a| els().all(|b| f(a, b)));

    let c1 = all2(&|a, b| sp(q.mul(a, b)) == sp(q.mul(a, sp(b))));
    let c2 = all2(&|a, b| q.leq(sp(q.mul(a, b)), sp(a)));
    let c3 = els().all(|a| sp(q.mul(a, one)) == sp(a));
    let c4 = els().all(|a| q.meet(q.mul(a, one), e) == sp(a));
    let c5 = all2(&|a, b| q.meet(q.mul(a, one), b) == q.mul(sp(a), b));
    let rs = q.right_sided();
    let c6 = range.iter().all(|&f| sp(q.mul(f, one)) == f) && rs.iter().all(|&r| q.mul(sp(r), one) == r);
    let c7 = all2(&|a, b| q.leq(a, q.mul(sp(b), a)) == q.leq(sp(a), sp(b)));
    let c8 = els().all(|a| {
        let m = q.lattice().meet_all(range.iter().copied().filter(|&b| q.leq(a, q.mul(b, a))));
        m == sp(a)
    });
    let c9 = all2(&|a, b| q.leq(sp(a), q.mul(b, one)) == q.leq(sp(a), sp(b)));
    let c10 = els().all(|a| q.join_all(range.iter().copied().filter(|&b| q.leq(b, q.mul(a, one)))) == sp(a));
    let c11 = range.iter().all(|&f| sp(q.mul(e, f)) == f)
        && els().all(|a| {
            els().all(|b| range.iter().all(|&f| sp(q.mul3(a, b, f)) == sp(q.mul(a, sp(q.mul(b, f))))))
        });
    let report = StabilityReport { conditions: [c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11] };
    if !report.all() && !report.none() {
        return Err(QuantaleError::EquivalenceBroken(format!("mixed stability verdicts {:?}", report.conditions)));
    }
    Ok(report)
}

/// A named identity together with its verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    /// The fifteen identities valid for every support.
    pub identities: Vec<IdentityCheck>,
    /// Structural facts about `ςQ` and right-sided elements.
    pub structural: Vec<IdentityCheck>,
    /// Facts that need a stable support.
    pub stable_extras: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn general_hold(&self) -> bool {
        self.identities.iter().chain(&self.structural).all(|c| c.verdict.holds)
    }

    pub fn stable_extras_hold(&self) -> bool {
        self.stable_extras.iter().all(|c| c.verdict.holds)
    }

    pub fn failures(&self) -> Vec<&IdentityCheck> {
        self.identities.iter().chain(&self.structural).chain(&self.stable_extras).filter(|c| !c.verdict.holds).collect()
    }
}

fn forall1(q: &FinQuantale, f: impl Fn(usize) -> bool) -> Verdict {
    match q.elements().find(|&a| !f(a)) {
        None => Verdict::yes(),
        Some(a) => Verdict::no(vec![a]),
    }
}

fn forall2(q: &FinQuantale, f: impl Fn(usize, usize) -> bool) -> Verdict {
    for a in q.elements() {
        for b in q.elements() {
            if !f(a, b) {
                return Verdict::no(vec![a, b]);
            }
        }
    }
    Verdict::yes()
}

pub fn derived_identities_report(q: &FinQuantale, s: &SupportMap) -> IdentityReport {
    let e = q.unit();
    let one = q.top();
    let bot = q.bottom();
    let sp = |a: usize| s.apply(a);
    let m = |a: usize, b: usize| q.mul(a, b);
    let st = |a: usize| q.star(a);
    let leq = |a: usize, b: usize| q.leq(a, b);

    let identities = vec![
        IdentityCheck { name: "ςa = a for a ≤ e", verdict: forall1(q, |a| !leq(a, e) || sp(a) == a) },
        IdentityCheck { name: "ςςa = ςa", verdict: forall1(q, |a| sp(sp(a)) == sp(a)) },
        IdentityCheck { name: "a = (ςb)a if ςa ≤ ςb", verdict: forall2(q, |a, b| !leq(sp(a), sp(b)) || m(sp(b), a) == a) },
        IdentityCheck { name: "a = (ςa)a", verdict: forall1(q, |a| m(sp(a), a) == a) },
        IdentityCheck { name: "(ςa)* = ςa", verdict: forall1(q, |a| st(sp(a)) == sp(a)) },
        IdentityCheck { name: "a = aς(a*)", verdict: forall1(q, |a| m(a, sp(st(a))) == a) },
        IdentityCheck { name: "ςa = 0 ⟺ a = 0", verdict: forall1(q, |a| (sp(a) == bot) == (a == bot)) },
        IdentityCheck { name: "ςa ≤ ς(aa*)", verdict: forall1(q, |a| leq(sp(a), sp(q.aa_star(a)))) },
        IdentityCheck { name: "(ςa)1 = a1", verdict: forall1(q, |a| m(sp(a), one) == m(a, one)) },
        IdentityCheck { name: "a1 = aa*1", verdict: forall1(q, |a| m(a, one) == m(q.aa_star(a), one)) },
        IdentityCheck { name: "ςa = ςaςa", verdict: forall1(q, |a| m(sp(a), sp(a)) == sp(a)) },
        IdentityCheck { name: "a ≤ aa*a", verdict: forall1(q, |a| leq(a, m(q.aa_star(a), a))) },
        IdentityCheck {
            name: "ς(a1)b = a1 ∧ b",
            verdict: forall2(q, |a, b| m(sp(m(a, one)), b) == q.meet(m(a, one), b)),
        },
        IdentityCheck { name: "ς(a1) = a1 ∧ e", verdict: forall1(q, |a| sp(m(a, one)) == q.meet(m(a, one), e)) },
        IdentityCheck { name: "ς(a ∧ b) ≤ ab*", verdict: forall2(q, |a, b| leq(sp(q.meet(a, b)), m(a, st(b)))) },
    ];

    let below_e = q.below_unit();
    let range = s.range();
    let rs = q.right_sided();
    let locale = {
        let mult_is_meet = below_e.iter().all(|&a| below_e.iter().all(|&b| m(a, b) == q.meet(a, b)));
        let distributive = below_e.iter().all(|&a| {
            below_e.iter().all(|&b| {
                below_e.iter().all(|&c| q.meet(a, q.join(b, c)) == q.join(q.meet(a, b), q.meet(a, c)))
            })
        });
        mult_is_meet && distributive
    };
    let structural = vec![
        IdentityCheck { name: "↓e = ςQ", verdict: Verdict::from_bool(below_e == range) },
        IdentityCheck { name: "↓e is a locale with ab = a ∧ b", verdict: Verdict::from_bool(locale) },
        IdentityCheck {
            name: "elements of ςQ are projections",
            verdict: Verdict::first_failure(range.iter().copied(), |f| st(f) == f && m(f, f) == f),
        },
        IdentityCheck {
            name: "(-)1 : ςQ → RS(Q) is a retraction split by ς",
            verdict: Verdict::first_failure(rs.iter().copied(), |r| m(sp(r), one) == r),
        },
        IdentityCheck {
            name: "ς : RS(Q) → ςQ is an order embedding",
            verdict: Verdict::from_bool(
                rs.iter().all(|&r| rs.iter().all(|&t| leq(r, t) == leq(sp(r), sp(t)))),
            ),
        },
        IdentityCheck {
            name: "a = aa*a for right-sided a",
            verdict: Verdict::first_failure(rs.iter().copied(), |r| m(q.aa_star(r), r) == r),
        },
    ];

    let stable_extras = vec![
        IdentityCheck {
            name: "ς(ab) = aςb for a ≤ e",
            verdict: forall2(q, |a, b| !leq(a, e) || sp(m(a, b)) == m(a, sp(b))),
        },
        IdentityCheck {
            name: "b ≤ e, b ≤ aa*, a ≤ ba imply b = ςa",
            verdict: forall2(q, |a, b| !(leq(b, e) && leq(b, q.aa_star(a)) && leq(a, m(b, a))) || b == sp(a)),
        },
    ];

    IdentityReport { identities, structural, stable_extras }
}

// ---------------------------------------------------------------------------------------------
// Partial units

/// The partial units `ipi(Q) = {a : aa* ≤ e, a*a ≤ e}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialUnitSet {
    pub members: Vec<usize>,
}

impl PartialUnitSet {
    pub fn contains(&self, a: usize) -> bool {
        self.members.binary_search(&a).is_ok()
    }
}

pub fn is_partial_unit(q: &FinQuantale, a: usize) -> bool {
    let e = q.unit();
    q.leq(q.mul(a, q.star(a)), e) && q.leq(q.mul(q.star(a), a), e)
}

pub fn partial_units(q: &FinQuantale) -> Result<PartialUnitSet, QuantaleError> {
    let members: Vec<usize> = q.elements().filter(|&a| is_partial_unit(q, a)).collect();
    let set = PartialUnitSet { members };
    if !set.contains(q.unit()) {
        return Err(QuantaleError::EquivalenceBroken("unit is not a partial unit".into()));
    }
    for &a in &set.members {
        if !set.contains(q.star(a)) {
            return Err(QuantaleError::EquivalenceBroken(format!("partial units not closed under involution at {a}")));
        }
        for &b in &set.members {
            if !set.contains(q.mul(a, b)) {
                return Err(QuantaleError::EquivalenceBroken(format!("partial units not closed under product at {a}, {b}")));
            }
        }
    }
    Ok(set)
}

/// The inverse monoid of partial units, with the embedding into the quantale.
#[derive(Debug, Clone)]
pub struct IpiMonoid {
    pub monoid: FinInverseSemigroup,
    /// `members[i]` is the quantale element standing for monoid element `i`.
    pub members: Vec<usize>,
}

impl IpiMonoid {
    pub fn index_of(&self, a: usize) -> Option<usize> {
        self.members.binary_search(&a).ok()
    }
}

pub fn ipi_monoid(q: &FinQuantale, s: &SupportMap) -> Result<IpiMonoid, QuantaleError> {
    let members = partial_units(q)?.members;
    let k = members.len();
    let pos = |a: usize| members.binary_search(&a).expect("closed under product");
    let mult: Vec<usize> = (0..k * k).map(|i| pos(q.mul(members[i / k], members[i % k]))).collect();
    let unit = pos(q.unit());
    let labels = members.iter().map(|&a| q.label(a).to_string()).collect();
    let monoid = FinInverseSemigroup::validate(k, mult, Some(unit))?.with_labels(labels);
    for i in 0..k {
        if monoid.inv(i) != pos(q.star(members[i])) {
            return Err(QuantaleError::EquivalenceBroken(format!("inverse of {} is not its involute", q.label(members[i]))));
        }
        for j in 0..k {
            if monoid.nat_leq(i, j) != q.leq(members[i], members[j]) {
                return Err(QuantaleError::EquivalenceBroken("natural order differs from the quantale order".into()));
            }
        }
    }
    let idempotents: Vec<usize> = monoid.idempotents().into_iter().map(|i| members[i]).collect();
    if idempotents != s.range() {
        return Err(QuantaleError::EquivalenceBroken("idempotent partial units differ from ςQ".into()));
    }
    Ok(IpiMonoid { monoid, members })
}

/// Every element is the join of the partial units below it.
pub fn check_inverse_quantale(q: &FinQuantale, s: &SupportMap) -> Result<Verdict, QuantaleError> {
    let pu = partial_units(q)?;
    let join_of_pu = |a: usize| q.join_all(pu.members.iter().copied().filter(|&x| q.leq(x, a)));
    let direct = forall1(q, |a| join_of_pu(a) == a);

    // second route: a ≤ aa*a and a ↦ ⋁{bb* : b ∈ ipi, b ≤ a} preserves joins and equals ς
    let regular = q.elements().all(|a| q.leq(a, q.mul(q.aa_star(a), a)));
    let sprime: Vec<usize> =
        q.elements().map(|a| q.join_all(pu.members.iter().filter(|&&b| q.leq(b, a)).map(|&b| q.aa_star(b)))).collect();
    let sprime_joins = sprime[q.bottom()] == q.bottom()
        && q.elements().all(|a| q.elements().all(|b| sprime[q.join(a, b)] == q.join(sprime[a], sprime[b])));
    let lemma = direct.holds && regular && sprime_joins && sprime.as_slice() == s.image();
    if lemma != direct.holds {
        return Err(QuantaleError::RouteDisagreement(direct.witness.first().copied().unwrap_or(q.bottom())));
    }
    Ok(direct)
}

/// `⋁ipi(Q)`.
pub fn join_of_partial_units(q: &FinQuantale) -> Result<usize, QuantaleError> {
    Ok(q.join_all(partial_units(q)?.members))
}

pub fn check_frame(q: &FinQuantale) -> Verdict {
    match lattice::check_frame(q.lattice()) {
        Ok(()) => Verdict::yes(),
        Err((a, b, c)) => Verdict::no(vec![a, b, c]),
    }
}

/// Frame with `a1 ∧ e ≤ aa*` and `a ≤ (a1 ∧ e)a` for all `a`.
pub fn check_stable_quantal_frame(q: &FinQuantale) -> Result<Verdict, QuantaleError> {
    let one = q.top();
    let e = q.unit();
    let frame = check_frame(q);
    let verdict = if !frame.holds {
        frame
    } else {
        forall1(q, |a| {
            let r = q.meet(q.mul(a, one), e);
            q.leq(r, q.aa_star(a)) && q.leq(a, q.mul(r, a))
        })
    };
    let via_support = lattice::check_frame(q.lattice()).is_ok() && stable_support(q).is_ok();
    if via_support != verdict.holds {
        return Err(QuantaleError::EquivalenceBroken("stable quantal frame verdicts disagree".into()));
    }
    Ok(verdict)
}

/// Exact and lax forms of the two inversion laws.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InversionReport {
    pub left_exact: Verdict,
    pub right_exact: Verdict,
    pub left_lax: Verdict,
    pub right_lax: Verdict,
    pub ipi_join: usize,
    pub ipi_join_is_top: bool,
}

impl InversionReport {
    pub fn laws_hold(&self) -> bool {
        self.left_exact.holds && self.right_exact.holds
    }
}

pub fn check_inversion_laws(q: &FinQuantale) -> Result<InversionReport, QuantaleError> {
    let n = q.size();
    let one = q.top();
    let e = q.unit();
    // bucket[v] = ⋁{x ∧ y : xy* = v}, then rhs[a] = ⋁{bucket[v] : v ≤ a}
    let mut left_bucket = vec![q.bottom(); n];
    let mut right_bucket = vec![q.bottom(); n];
    for x in 0..n {
        for y in 0..n {
            let w = q.meet(x, y);
            let l = q.mul(x, q.star(y));
            left_bucket[l] = q.join(left_bucket[l], w);
            let r = q.mul(q.star(x), y);
            right_bucket[r] = q.join(right_bucket[r], w);
        }
    }
    let rhs = |bucket: &[usize], a: usize| q.join_all((0..n).filter(|&v| q.leq(v, a)).map(|v| bucket[v]));
    let left_rhs: Vec<usize> = (0..n).map(|a| rhs(&left_bucket, a)).collect();
    let right_rhs: Vec<usize> = (0..n).map(|a| rhs(&right_bucket, a)).collect();
    let left_lhs = |a: usize| q.mul(q.meet(a, e), one);
    let right_lhs = |a: usize| q.mul(one, q.meet(a, e));

    let left_exact = forall1(q, |a| left_lhs(a) == left_rhs[a]);
    let right_exact = forall1(q, |a| right_lhs(a) == right_rhs[a]);
    let left_lax = forall1(q, |a| q.leq(left_lhs(a), left_rhs[a]));
    let right_lax = forall1(q, |a| q.leq(right_lhs(a), right_rhs[a]));
    let ipi_join = join_of_partial_units(q)?;
    let report = InversionReport {
        ipi_join_is_top: ipi_join == one,
        ipi_join,
        left_exact,
        right_exact,
        left_lax,
        right_lax,
    };
    if report.left_exact.holds != report.left_lax.holds || report.right_exact.holds != report.right_lax.holds {
        return Err(QuantaleError::EquivalenceBroken("exact and lax inversion laws disagree".into()));
    }
    if (report.left_lax.holds && report.right_lax.holds) != report.ipi_join_is_top {
        return Err(QuantaleError::EquivalenceBroken("lax inversion laws disagree with ⋁ipi = 1".into()));
    }
    Ok(report)
}

/// A supported quantal frame whose top is a join of partial units.
pub fn check_inverse_quantal_frame(q: &FinQuantale) -> Result<Verdict, QuantaleError> {
    let frame = check_frame(q);
    if !frame.holds {
        return Ok(frame);
    }
    let s = match candidate_support(q) {
        Ok(s) => s,
        Err(QuantaleError::NotASupport { witness, .. }) => return Ok(Verdict::no(witness)),
        Err(e) => return Err(e),
    };
    let top = join_of_partial_units(q)?;
    let verdict = if top == q.top() { Verdict::yes() } else { Verdict::no(vec![top]) };
    if verdict.holds && !check_inverse_quantale(q, &s)?.holds {
        return Err(QuantaleError::EquivalenceBroken("inverse quantal frame that is not an inverse quantale".into()));
    }
    Ok(verdict)
}

// ---------------------------------------------------------------------------------------------
// Quotients and homomorphisms

/// A quotient quantale together with the class of each original element.
#[derive(Debug, Clone)]
pub struct QuantaleQuotient {
    pub quantale: FinQuantale,
    pub class_of: Vec<usize>,
}

pub fn quantale_quotient(q: &FinQuantale, classes: &[Vec<usize>]) -> Result<QuantaleQuotient, QuantaleError> {
    let n = q.size();
    let mut class_of = vec![usize::MAX; n];
    let mut sorted: Vec<Vec<usize>> = classes.iter().filter(|c| !c.is_empty()).cloned().collect();
    for c in &mut sorted {
        c.sort_unstable();
    }
    sorted.sort();
    for (i, c) in sorted.iter().enumerate() {
        for &x in c {
            if x >= n {
                return Err(QuantaleError::BadPartition(format!("element {x} out of range")));
            }
            if class_of[x] != usize::MAX {
                return Err(QuantaleError::BadPartition(format!("element {x} occurs twice")));
            }
            class_of[x] = i;
        }
    }
    if let Some(x) = class_of.iter().position(|&c| c == usize::MAX) {
        return Err(QuantaleError::BadPartition(format!("element {x} is in no class")));
    }
    let support = candidate_support(q).ok();
    for a in 0..n {
        for b in a + 1..n {
            if class_of[a] != class_of[b] {
                continue;
            }
            for c in 0..n {
                if class_of[q.join(a, c)] != class_of[q.join(b, c)] {
                    return Err(QuantaleError::NotACongruence { operation: "join", witness: vec![a, b, c] });
                }
                if class_of[q.mul(a, c)] != class_of[q.mul(b, c)] || class_of[q.mul(c, a)] != class_of[q.mul(c, b)] {
                    return Err(QuantaleError::NotACongruence { operation: "multiplication", witness: vec![a, b, c] });
                }
            }
            if class_of[q.star(a)] != class_of[q.star(b)] {
                return Err(QuantaleError::NotACongruence { operation: "involution", witness: vec![a, b] });
            }
            if let Some(s) = &support {
                if class_of[s.apply(a)] != class_of[s.apply(b)] {
                    return Err(QuantaleError::NotACongruence { operation: "support", witness: vec![a, b] });
                }
            }
        }
    }
    let k = sorted.len();
    let rep: Vec<usize> = sorted.iter().map(|c| q.join_all(c.iter().copied())).collect();
    let mut pairs = Vec::new();
    for i in 0..k {
        for j in 0..k {
            if class_of[q.join(rep[i], rep[j])] == j {
                pairs.push((i, j));
            }
        }
    }
    let lattice = lattice::build_lattice(k, &pairs)?.with_labels(rep.iter().map(|&r| q.label(r).to_string()).collect());
    let mult = (0..k * k).map(|i| class_of[q.mul(rep[i / k], rep[i % k])]).collect();
    let inv = (0..k).map(|i| class_of[q.star(rep[i])]).collect();
    let quantale = FinQuantale::new(lattice, mult, inv, class_of[q.unit()])?;
    Ok(QuantaleQuotient { quantale, class_of })
}

/// Preservation verdicts for a map between quantales.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomReport {
    pub monotone: bool,
    pub joins: Verdict,
    pub mult: Verdict,
    pub unit: bool,
    pub involution: Verdict,
    pub lax_mult: Verdict,
    /// `Some` when the map is a homomorphism, the source is supported and the target is
    /// stably supported.
    pub support_preserved: Option<bool>,
}

impl HomReport {
    pub fn is_homomorphism(&self) -> bool {
        self.joins.holds && self.mult.holds && self.unit && self.involution.holds
    }
}

pub fn check_homomorphism(src: &FinQuantale, tgt: &FinQuantale, h: &[usize]) -> Result<HomReport, QuantaleError> {
    if h.len() != src.size() || h.iter().any(|&y| y >= tgt.size()) {
        return Err(QuantaleError::Malformed("map has the wrong shape".into()));
    }
    let n = src.size();
    let monotone = (0..n).all(|a| (0..n).all(|b| !src.leq(a, b) || tgt.leq(h[a], h[b])));
    let joins = if h[src.bottom()] != tgt.bottom() {
        Verdict::no(vec![])
    } else {
        forall2(src, |a, b| h[src.join(a, b)] == tgt.join(h[a], h[b]))
    };
    let mult = forall2(src, |a, b| h[src.mul(a, b)] == tgt.mul(h[a], h[b]));
    let lax_mult = forall2(src, |a, b| tgt.leq(tgt.mul(h[a], h[b]), h[src.mul(a, b)]));
    let unit = h[src.unit()] == tgt.unit();
    let involution = forall1(src, |a| h[src.star(a)] == tgt.star(h[a]));
    let mut report = HomReport { monotone, joins, mult, unit, involution, lax_mult, support_preserved: None };
    if report.is_homomorphism() {
        if let (Ok(ss), Ok(ts)) = (candidate_support(src), stable_support(tgt)) {
            let preserved = (0..n).all(|a| h[ss.apply(a)] == ts.apply(h[a]));
            if !preserved {
                return Err(QuantaleError::EquivalenceBroken("homomorphism does not preserve the support".into()));
            }
            report.support_preserved = Some(true);
        }
    }
    Ok(report)
}
