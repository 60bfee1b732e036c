//! Quantales of order ideals of an inverse semigroup, the enveloping quantale `L∨(S)`, and the
//! comparison maps between inverse semigroups and inverse quantal frames.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::bits::{self, Mask};
use crate::invsemi::{FinInverseSemigroup, InvSemiError};
use crate::lattice::{self, FinSupLattice, LatticeError, DENSE_CAP};
use crate::quantale::{self, FinQuantale, QuantaleError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnvelopeError {
    #[error(transparent)]
    InvSemi(#[from] InvSemiError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Quantale(#[from] QuantaleError),
    #[error("{what} has {size} elements, cap is {cap}")]
    CarrierTooLarge { what: &'static str, size: usize, cap: usize },
    #[error("semigroup has no unit")]
    NotAMonoid,
    #[error("map does not preserve products at ({s}, {t})")]
    NotAMonoidHom { s: usize, t: usize },
    #[error("map does not send the unit to the unit")]
    UnitNotPreserved,
    #[error("image of {s} is not a partial unit")]
    NotPartialUnit { s: usize },
    #[error("quantale is not an inverse quantal frame")]
    NotIQF,
    #[error("internal consistency failure: {0}")]
    EquivalenceBroken(String),
}

/// A quantale whose elements are subsets of a small carrier.
#[derive(Debug, Clone)]
pub struct SetQuantale {
    pub quantale: FinQuantale,
    /// `sets[i]` is the subset standing for element `i`.
    pub sets: Vec<Mask>,
    /// `principal[s]` is the element `↓s`, when the carrier is a semigroup.
    pub principal: Vec<usize>,
}

impl SetQuantale {
    pub fn index_of(&self, m: Mask) -> Option<usize> {
        self.sets.iter().position(|&s| s == m)
    }
}

fn require_small(s: &FinInverseSemigroup) -> Result<(), EnvelopeError> {
    if s.size() > 64 {
        return Err(EnvelopeError::CarrierTooLarge { what: "inverse semigroup", size: s.size(), cap: 64 });
    }
    Ok(())
}

/// Labels a subset by its maximal elements.
pub(crate) fn set_label(members: Mask, leq: impl Fn(usize, usize) -> bool, name: impl Fn(usize) -> String) -> String {
    let els: Vec<usize> = bits::ones(members).collect();
    let maximal: Vec<String> =
        els.iter().copied().filter(|&x| els.iter().all(|&y| y == x || !leq(x, y))).map(name).collect();
    if maximal.is_empty() {
        "∅".to_string()
    } else {
        maximal.join("∨")
    }
}

fn set_product(s: &FinInverseSemigroup, a: Mask, b: Mask) -> Mask {
    let mut out = 0;
    for u in bits::ones(a) {
        for v in bits::ones(b) {
            out |= bits::bit(s.mul(u, v));
        }
    }
    out
}

fn set_inverse(s: &FinInverseSemigroup, a: Mask) -> Mask {
    bits::from_iter(bits::ones(a).map(|u| s.inv(u)))
}

/// `L(S)`: all order ideals of the natural order, with the pointwise product.
pub fn downset_quantale(s: &FinInverseSemigroup) -> Result<SetQuantale, EnvelopeError> {
    require_small(s)?;
    let p = s.natural_poset();
    let dl = lattice::downset_lattice(&p)?;
    let sets = dl.sets;
    let n = sets.len();
    let index: HashMap<Mask, usize> = sets.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mut mult = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            mult[a * n + b] = index[&set_product(s, sets[a], sets[b])];
        }
    }
    let inv = sets.iter().map(|&m| index[&set_inverse(s, m)]).collect();
    let unit = index[&bits::from_iter(s.idempotents())];
    let labels = sets.iter().map(|&m| set_label(m, |x, y| s.nat_leq(x, y), |x| s.label(x).to_string())).collect();
    let quantale = FinQuantale::from_parts(dl.lattice.with_labels(labels), mult, inv, unit);
    Ok(SetQuantale { quantale, sets, principal: dl.principal })
}

/// Closure of order ideals under joins of compatible subsets.
struct CompatibleClosure {
    down: Vec<Mask>,
    bottom: Mask,
    /// `(members, join)` for every compatible antichain with at least two elements and a join.
    joins: Vec<(Mask, usize)>,
}

impl CompatibleClosure {
    fn new(s: &FinInverseSemigroup) -> Result<Self, EnvelopeError> {
        let down = s.elements().map(|x| bits::from_iter(s.elements().filter(|&y| s.nat_leq(y, x)))).collect();
        let bottom = s.join(&[]).map(bits::bit).unwrap_or(0);
        let joins = s
            .compatible_antichains()?
            .into_iter()
            .filter(|a| a.len() >= 2)
            .filter_map(|a| s.join(&a).map(|j| (bits::from_iter(a.iter().copied()), j)))
            .collect();
        Ok(CompatibleClosure { down, bottom, joins })
    }

    fn close(&self, mut m: Mask) -> Mask {
        m |= self.bottom;
        loop {
            let before = m;
            m = bits::ones(m).fold(m, |acc, x| acc | self.down[x]);
            for &(members, j) in &self.joins {
                if members & m == members {
                    m |= self.down[j];
                }
            }
            if m == before {
                return m;
            }
        }
    }
}

/// `L∨(S)`: order ideals closed under existing joins of compatible subsets.
pub fn enveloping_quantale(s: &FinInverseSemigroup) -> Result<SetQuantale, EnvelopeError> {
    require_small(s)?;
    let cl = CompatibleClosure::new(s)?;
    let k = s.size();
    let start = cl.close(0);
    let mut index: HashMap<Mask, usize> = HashMap::from([(start, 0)]);
    let mut sets = vec![start];
    let mut gen_join: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(w) = queue.pop_front() {
        let row: Vec<usize> = (0..k)
            .map(|x| {
                let m = cl.close(sets[w] | cl.down[x]);
                *index.entry(m).or_insert_with(|| {
                    sets.push(m);
                    queue.push_back(sets.len() - 1);
                    sets.len() - 1
                })
            })
            .collect();
        if gen_join.len() <= w {
            gen_join.resize(w + 1, Vec::new());
        }
        gen_join[w] = row;
        if sets.len() > DENSE_CAP {
            return Err(EnvelopeError::CarrierTooLarge { what: "enveloping quantale", size: sets.len(), cap: DENSE_CAP });
        }
    }
    // canonical order
    let mut order: Vec<usize> = (0..sets.len()).collect();
    order.sort_by_key(|&i| bits::canonical_key(sets[i]));
    let mut rank = vec![0; sets.len()];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }
    let sets: Vec<Mask> = order.iter().map(|&i| sets[i]).collect();
    let gen_join: Vec<Vec<usize>> = order.iter().map(|&i| gen_join[i].iter().map(|&t| rank[t]).collect()).collect();
    let index: HashMap<Mask, usize> = sets.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let n = sets.len();
    let generators: Vec<Vec<usize>> = sets
        .iter()
        .map(|&m| {
            let els: Vec<usize> = bits::ones(m).collect();
            els.iter().copied().filter(|&x| els.iter().all(|&y| y == x || !s.nat_leq(x, y))).collect()
        })
        .collect();
    let mut leq = vec![false; n * n];
    let mut join = vec![0; n * n];
    let mut meet = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            leq[a * n + b] = sets[a] & sets[b] == sets[a];
            join[a * n + b] = generators[b].iter().fold(a, |acc, &x| gen_join[acc][x]);
            meet[a * n + b] = index[&(sets[a] & sets[b])];
        }
    }
    let principal: Vec<usize> = (0..k).map(|x| index[&cl.down[x]]).collect();
    let mut mult = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            mult[a * n + b] = generators[a]
                .iter()
                .flat_map(|&u| generators[b].iter().map(move |&v| (u, v)))
                .fold(0, |acc, (u, v)| gen_join[acc][s.mul(u, v)]);
        }
    }
    let inv = sets.iter().map(|&m| index[&set_inverse(s, m)]).collect();
    let unit = index[&cl.close(bits::from_iter(s.idempotents()))];
    let labels = sets.iter().map(|&m| set_label(m, |x, y| s.nat_leq(x, y), |x| s.label(x).to_string())).collect();
    let lattice = FinSupLattice::from_tables(n, leq, join, meet).with_labels(labels);
    Ok(SetQuantale { quantale: FinQuantale::from_parts(lattice, mult, inv, unit), sets, principal })
}

/// Checks the quantale axioms and the set-level description of a [`SetQuantale`] built from `s`.
pub fn verify_set_quantale(s: &FinInverseSemigroup, q: &SetQuantale, closed: bool) -> Result<(), EnvelopeError> {
    let qq = &q.quantale;
    quantale::check_quantale_axioms(
        qq.lattice().clone(),
        qq.mult_table().to_vec(),
        qq.inv_table().to_vec(),
        qq.unit(),
    )?;
    let cl = if closed { Some(CompatibleClosure::new(s)?) } else { None };
    let close = |m: Mask| cl.as_ref().map_or(m, |c| c.close(m));
    for a in qq.elements() {
        for b in qq.elements() {
            if q.sets[qq.mul(a, b)] != close(set_product(s, q.sets[a], q.sets[b])) {
                return Err(EnvelopeError::EquivalenceBroken(format!("product of {a} and {b}")));
            }
            if q.sets[qq.join(a, b)] != close(q.sets[a] | q.sets[b]) {
                return Err(EnvelopeError::EquivalenceBroken(format!("join of {a} and {b}")));
            }
        }
    }
    Ok(())
}

/// `η : S → L∨(S)`, `s ↦ ↓s`.
#[derive(Debug, Clone)]
pub struct EtaReport {
    pub envelope: SetQuantale,
    pub map: Vec<usize>,
    /// Partial units of `L∨(S)`.
    pub partial_units: Vec<usize>,
    pub injective: bool,
    pub onto_partial_units: bool,
}

impl EtaReport {
    pub fn is_iso(&self) -> bool {
        self.injective && self.onto_partial_units
    }
}

pub fn eta(s: &FinInverseSemigroup) -> Result<EtaReport, EnvelopeError> {
    let envelope = enveloping_quantale(s)?;
    let q = &envelope.quantale;
    let map = envelope.principal.clone();
    for a in s.elements() {
        if !quantale::is_partial_unit(q, map[a]) {
            return Err(EnvelopeError::EquivalenceBroken(format!("↓{a} is not a partial unit")));
        }
        if q.star(map[a]) != map[s.inv(a)] {
            return Err(EnvelopeError::EquivalenceBroken(format!("↓{a} does not commute with inverses")));
        }
        for b in s.elements() {
            if q.mul(map[a], map[b]) != map[s.mul(a, b)] {
                return Err(EnvelopeError::EquivalenceBroken(format!("↓{a}·↓{b} ≠ ↓{a}{b}")));
            }
        }
    }
    let partial_units = quantale::partial_units(q)?.members;
    let mut image = map.clone();
    image.sort_unstable();
    image.dedup();
    let injective = image.len() == s.size();
    let onto_partial_units = image == partial_units;
    Ok(EtaReport { envelope, map, partial_units, injective, onto_partial_units })
}

/// `ε : L∨(ipi(Q)) → Q`, `U ↦ ⋁U`.
#[derive(Debug, Clone)]
pub struct EpsilonReport {
    pub envelope: SetQuantale,
    /// Partial units of `Q`, in the order used as the carrier of the envelope.
    pub partial_units: Vec<usize>,
    pub map: Vec<usize>,
    pub is_iso: bool,
}

pub fn epsilon(q: &FinQuantale) -> Result<EpsilonReport, EnvelopeError> {
    if !quantale::check_inverse_quantal_frame(q)?.holds {
        return Err(EnvelopeError::NotIQF);
    }
    let support = quantale::stable_support(q)?;
    let ipi = quantale::ipi_monoid(q, &support)?;
    let envelope = enveloping_quantale(&ipi.monoid)?;
    let map: Vec<usize> =
        envelope.sets.iter().map(|&m| q.join_all(bits::ones(m).map(|i| ipi.members[i]))).collect();
    let is_iso = quantale::is_isomorphism(&envelope.quantale, q, &map);
    Ok(EpsilonReport { envelope, partial_units: ipi.members, map, is_iso })
}

/// The extension `L(S) → Q` of a monoid map into the partial units of `q`.
#[derive(Debug, Clone)]
pub struct ExtendedHom {
    pub domain: SetQuantale,
    /// `image[i]` is the value on the `i`-th order ideal.
    pub image: Vec<usize>,
}

pub fn extend_hom(s: &FinInverseSemigroup, q: &FinQuantale, h: &[usize]) -> Result<ExtendedHom, EnvelopeError> {
    let u = s.unit().ok_or(EnvelopeError::NotAMonoid)?;
    if h.len() != s.size() || h.iter().any(|&x| x >= q.size()) {
        return Err(EnvelopeError::InvSemi(InvSemiError::Malformed("map has the wrong shape".into())));
    }
    if h[u] != q.unit() {
        return Err(EnvelopeError::UnitNotPreserved);
    }
    for a in s.elements() {
        if !quantale::is_partial_unit(q, h[a]) {
            return Err(EnvelopeError::NotPartialUnit { s: a });
        }
        for b in s.elements() {
            if h[s.mul(a, b)] != q.mul(h[a], h[b]) {
                return Err(EnvelopeError::NotAMonoidHom { s: a, t: b });
            }
        }
    }
    let domain = downset_quantale(s)?;
    let image: Vec<usize> = domain.sets.iter().map(|&m| q.join_all(bits::ones(m).map(|x| h[x]))).collect();
    let report = quantale::check_homomorphism(&domain.quantale, q, &image)?;
    if !report.is_homomorphism() {
        return Err(EnvelopeError::EquivalenceBroken(format!("extension is not a homomorphism: {report:?}")));
    }
    for a in s.elements() {
        if image[domain.principal[a]] != h[a] {
            return Err(EnvelopeError::EquivalenceBroken(format!("extension disagrees with the map at {a}")));
        }
    }
    Ok(ExtendedHom { domain, image })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invsemi::symmetric_inverse_monoid;

    #[test]
    fn envelope_of_i1_is_the_two_element_frame() {
        let s = symmetric_inverse_monoid(1).unwrap();
        let lv = enveloping_quantale(&s).unwrap();
        assert_eq!(lv.quantale.size(), 2);
        assert_eq!(lv.sets, vec![0b01, 0b11]);
        verify_set_quantale(&s, &lv, true).unwrap();
    }

    #[test]
    fn trivial_monoid() {
        let s = FinInverseSemigroup::validate(1, vec![0], Some(0)).unwrap();
        let r = eta(&s).unwrap();
        assert_eq!(r.envelope.quantale.size(), 1);
        assert!(r.is_iso());
        assert_eq!(downset_quantale(&s).unwrap().quantale.size(), 2);
    }

    #[test]
    fn envelope_of_i2_has_sixteen_elements() {
        let s = symmetric_inverse_monoid(2).unwrap();
        let lv = enveloping_quantale(&s).unwrap();
        assert_eq!(lv.quantale.size(), 16);
        verify_set_quantale(&s, &lv, true).unwrap();
        assert!(eta(&s).unwrap().is_iso());
    }
}
