//! Finite topological groupoids, their open-set quantales, the groupoid `S̃` of an inverse
//! quantal frame, and the étale conditions.

use std::collections::HashMap;

use crate::bits::{self, Mask};
use crate::envelope::{self, set_label, SetQuantale};
use crate::groupoid::{FinGroupoid, GroupoidError};
use crate::invsemi::FinInverseSemigroup;
use crate::lattice::{self, FinSupLattice};
use crate::quantale::{self, FinQuantale, IpiMonoid};

/// Largest point count for [`enumerate_topologies`].
pub const TOPOLOGY_ENUM_CAP: usize = 5;

/// A finite groupoid with a topology on its arrows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinTopGroupoid {
    groupoid: FinGroupoid,
    opens: Vec<Mask>,
    nbhd: Vec<Mask>,
}

fn mask_list(m: Mask) -> Vec<usize> {
    bits::ones(m).collect()
}

impl FinTopGroupoid {
    pub fn validate(groupoid: FinGroupoid, opens: Vec<Mask>) -> Result<Self, GroupoidError> {
        let n = groupoid.size();
        let full = bits::full(n);
        let mut opens = opens;
        opens.sort_by_key(|&m| bits::canonical_key(m));
        opens.dedup();
        if let Some(&bad) = opens.iter().find(|&&u| u & !full != 0) {
            return Err(GroupoidError::NotATopology { reason: "open set outside the carrier", witness: vec![mask_list(bad)] });
        }
        let is_open = |m: Mask| opens.binary_search_by_key(&bits::canonical_key(m), |&o| bits::canonical_key(o)).is_ok();
        if !is_open(0) || !is_open(full) {
            return Err(GroupoidError::NotATopology { reason: "∅ and the whole space must be open", witness: vec![] });
        }
        for &u in &opens {
            for &v in &opens {
                if !is_open(u | v) {
                    return Err(GroupoidError::NotATopology { reason: "not closed under unions", witness: vec![mask_list(u), mask_list(v)] });
                }
                if !is_open(u & v) {
                    return Err(GroupoidError::NotATopology {
                        reason: "not closed under intersections",
                        witness: vec![mask_list(u), mask_list(v)],
                    });
                }
            }
        }
        let nbhd: Vec<Mask> =
            (0..n).map(|x| opens.iter().filter(|&&u| bits::has(u, x)).fold(full, |acc, &u| acc & u)).collect();
        let g = &groupoid;
        for &u in &opens {
            let pd = bits::from_iter(g.arrows().filter(|&x| bits::has(u, g.dom(x))));
            if !is_open(pd) {
                return Err(GroupoidError::NotContinuous { map: "d", witness: mask_list(u) });
            }
            let pr = bits::from_iter(g.arrows().filter(|&x| bits::has(u, g.cod(x))));
            if !is_open(pr) {
                return Err(GroupoidError::NotContinuous { map: "r", witness: mask_list(u) });
            }
            if !is_open(g.set_inverse(u)) {
                return Err(GroupoidError::NotContinuous { map: "i", witness: mask_list(u) });
            }
        }
        for (x, y, z) in g.comp_triples() {
            let p = g.set_product(nbhd[x], nbhd[y]);
            if p & nbhd[z] != p {
                return Err(GroupoidError::NotContinuous { map: "m", witness: vec![x, y] });
            }
        }
        Ok(FinTopGroupoid { groupoid, opens, nbhd })
    }

    pub fn discrete(groupoid: FinGroupoid) -> Self {
        let n = groupoid.size();
        let opens = (0..(1 as Mask) << n).collect();
        Self::validate(groupoid, opens).expect("discrete topology")
    }

    pub fn indiscrete(groupoid: FinGroupoid) -> Self {
        let full = bits::full(groupoid.size());
        Self::validate(groupoid, vec![0, full]).expect("indiscrete topology")
    }

    pub fn groupoid(&self) -> &FinGroupoid {
        &self.groupoid
    }

    /// Open sets in canonical order.
    pub fn opens(&self) -> &[Mask] {
        &self.opens
    }

    pub fn is_open(&self, m: Mask) -> bool {
        self.opens.binary_search_by_key(&bits::canonical_key(m), |&o| bits::canonical_key(o)).is_ok()
    }

    /// The least open set containing `x`.
    pub fn neighbourhood(&self, x: usize) -> Mask {
        self.nbhd[x]
    }
}

/// `O(G)`: the open sets under pointwise product, when that is a unital involutive quantale.
pub fn topology_quantale(tg: &FinTopGroupoid) -> Result<SetQuantale, GroupoidError> {
    let g = tg.groupoid();
    let g0 = g.units_mask();
    if !tg.is_open(g0) {
        return Err(GroupoidError::NotQuantalTopology { reason: "unit set not open", witness: vec![mask_list(g0)] });
    }
    let opens = tg.opens().to_vec();
    let index: HashMap<Mask, usize> = opens.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let n = opens.len();
    if n > lattice::DENSE_CAP {
        return Err(GroupoidError::CarrierTooLarge { what: "topology", size: n, cap: lattice::DENSE_CAP });
    }
    let mut mult = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            let p = g.set_product(opens[a], opens[b]);
            mult[a * n + b] = *index.get(&p).ok_or_else(|| GroupoidError::NotQuantalTopology {
                reason: "product of open sets not open",
                witness: vec![mask_list(opens[a]), mask_list(opens[b])],
            })?;
        }
    }
    let inv = opens.iter().map(|&m| index[&g.set_inverse(m)]).collect();
    let labels = opens.iter().map(|&m| g.set_label(m)).collect();
    let lat = FinSupLattice::of_sets(&opens, |a, b| a | b).with_labels(labels);
    let q = FinQuantale::from_parts(lat, mult, inv, index[&g0]);
    Ok(SetQuantale { quantale: q, sets: opens, principal: Vec::new() })
}

/// Checks that `O(G)` is an inverse quantal frame.
pub fn verify_topology_quantale(oq: &SetQuantale) -> Result<(), GroupoidError> {
    let q = &oq.quantale;
    quantale::check_quantale_axioms(q.lattice().clone(), q.mult_table().to_vec(), q.inv_table().to_vec(), q.unit())?;
    if !quantale::check_inverse_quantal_frame(q)?.holds {
        return Err(GroupoidError::EquivalenceBroken("O(G) is not an inverse quantal frame".into()));
    }
    Ok(())
}

/// `S̃` for `S = ipi(Q)`, topologised by the order ideals of `S`.
#[derive(Debug, Clone)]
pub struct Shadow {
    pub top: FinTopGroupoid,
    pub ipi: IpiMonoid,
}

/// The groupoid whose arrows are the elements of an inverse semigroup, `d(s) = ss⁻¹`,
/// `r(s) = s⁻¹s`, with the order ideals as opens.
pub fn semigroup_groupoid(s: &FinInverseSemigroup) -> Result<FinTopGroupoid, GroupoidError> {
    let n = s.size();
    if n > 64 {
        return Err(GroupoidError::CarrierTooLarge { what: "inverse semigroup", size: n, cap: 64 });
    }
    let units = s.idempotents();
    let dom: Vec<usize> = s.elements().map(|x| s.dom(x)).collect();
    let cod: Vec<usize> = s.elements().map(|x| s.ran(x)).collect();
    let mut comp = Vec::new();
    for (x, &cx) in cod.iter().enumerate() {
        for (y, &dy) in dom.iter().enumerate() {
            if cx == dy {
                comp.push((x, y, s.mul(x, y)));
            }
        }
    }
    let inv = s.elements().map(|x| s.inv(x)).collect();
    let g = FinGroupoid::validate(n, &units, dom, cod, &comp, inv)?.with_labels(s.labels().to_vec());
    let opens = lattice::enumerate_downsets(&s.natural_poset(), lattice::DOWNSET_CAP)?;
    FinTopGroupoid::validate(g, opens)
}

pub fn groupoid_of_quantale(q: &FinQuantale) -> Result<Shadow, GroupoidError> {
    if !quantale::check_inverse_quantal_frame(q)?.holds {
        return Err(GroupoidError::NotIQF);
    }
    let support = quantale::stable_support(q)?;
    let ipi = quantale::ipi_monoid(q, &support)?;
    let top = semigroup_groupoid(&ipi.monoid)?;
    Ok(Shadow { top, ipi })
}

/// Checks that `S̃` is étale and that its open-set product is the product of order ideals.
pub fn verify_shadow(shadow: &Shadow) -> Result<(), GroupoidError> {
    let report = check_etale_conditions(&shadow.top)?;
    if !report.etale() {
        return Err(GroupoidError::EquivalenceBroken("S̃ is not étale".into()));
    }
    let s = &shadow.ipi.monoid;
    let g = shadow.top.groupoid();
    for &u in shadow.top.opens() {
        for &v in shadow.top.opens() {
            let pointwise = bits::from_iter(bits::ones(u).flat_map(|x| bits::ones(v).map(move |y| s.mul(x, y))));
            if g.set_product(u, v) != pointwise {
                return Err(GroupoidError::EquivalenceBroken("groupoid product of opens differs from their product".into()));
            }
        }
    }
    Ok(())
}

/// The monoid of least neighbourhoods of arrows under pointwise product, ordered by mask.
pub fn principal_open_monoid(tg: &FinTopGroupoid) -> Result<FinInverseSemigroup, GroupoidError> {
    let g = tg.groupoid();
    let mut sets: Vec<Mask> = g.arrows().map(|x| tg.neighbourhood(x)).collect();
    sets.sort_unstable();
    sets.dedup();
    let k = sets.len();
    let mut mult = vec![0; k * k];
    for a in 0..k {
        for b in 0..k {
            let p = g.set_product(sets[a], sets[b]);
            mult[a * k + b] = sets.binary_search(&p).map_err(|_| {
                GroupoidError::EquivalenceBroken("product of least neighbourhoods is not a least neighbourhood".into())
            })?;
        }
    }
    let unit = sets.binary_search(&g.units_mask()).ok();
    let labels = sets.iter().map(|&m| set_label(m, |x, y| bits::has(tg.neighbourhood(y), x), |x| g.label(x).to_string())).collect();
    Ok(FinInverseSemigroup::validate(k, mult, unit)?.with_labels(labels))
}

/// Outcome of the finite duality round trip starting at an inverse quantal frame.
#[derive(Debug, Clone)]
pub struct QuantaleRoundTrip {
    pub arrows: usize,
    pub opens: usize,
    /// Open-set product coincides with the product of order ideals.
    pub pointwise_product: bool,
    /// `L∨` of the monoid of least neighbourhoods, mapped onto `Q`.
    pub envelope_iso: Option<Vec<usize>>,
}

impl QuantaleRoundTrip {
    pub fn passed(&self) -> bool {
        self.pointwise_product && self.envelope_iso.is_some()
    }
}

pub fn quantale_round_trip(q: &FinQuantale) -> Result<QuantaleRoundTrip, GroupoidError> {
    let shadow = groupoid_of_quantale(q)?;
    let pointwise_product = verify_shadow(&shadow).is_ok();
    let oq = topology_quantale(&shadow.top)?;
    let monoid = principal_open_monoid(&shadow.top)?;
    let lv = envelope::enveloping_quantale(&monoid)?;
    // the least neighbourhood of an arrow s is ↓s; send it to s in Q
    let tg = &shadow.top;
    let nbhds = principal_sets(tg);
    let gen: Vec<usize> = nbhds
        .iter()
        .map(|&nb| {
            let s = tg.groupoid().arrows().find(|&x| tg.neighbourhood(x) == nb).expect("least neighbourhood of an arrow");
            shadow.ipi.members[s]
        })
        .collect();
    let map: Vec<usize> = lv.sets.iter().map(|&m| q.join_all(bits::ones(m).map(|i| gen[i]))).collect();
    let envelope_iso = quantale::is_isomorphism(&lv.quantale, q, &map).then_some(map);
    Ok(QuantaleRoundTrip { arrows: shadow.top.groupoid().size(), opens: oq.sets.len(), pointwise_product, envelope_iso })
}

fn principal_sets(tg: &FinTopGroupoid) -> Vec<Mask> {
    let mut sets: Vec<Mask> = tg.groupoid().arrows().map(|x| tg.neighbourhood(x)).collect();
    sets.sort_unstable();
    sets.dedup();
    sets
}

/// Verdicts of the five equivalent étale conditions, plus side facts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaleReport {
    /// `G₀` open and `d` open; étale; `G₀` open and opens closed under product;
    /// `G₀` open and `UG` open; `G₀` open and `UU⁻¹` open.
    pub conditions: [bool; 5],
    /// When `G₀` is open: whether the open G-sets cover `G`.
    pub gset_cover: Option<bool>,
    /// When the first condition holds: `d(U ∩ d⁻¹(V)) = d(U) ∩ V` for open `U` and open `V ⊆ G₀`.
    pub frobenius: Option<bool>,
}

impl EtaleReport {
    pub const NAMES: [&'static str; 5] = [
        "G₀ open and d open",
        "d is a local homeomorphism",
        "G₀ open and opens closed under product",
        "G₀ open and UG open",
        "G₀ open and UU⁻¹ open",
    ];

    pub fn etale(&self) -> bool {
        self.conditions[1]
    }
}

pub fn check_etale_conditions(tg: &FinTopGroupoid) -> Result<EtaleReport, GroupoidError> {
    let g = tg.groupoid();
    let g0 = g.units_mask();
    let full = bits::full(g.size());
    let opens = tg.opens();
    let g0_open = tg.is_open(g0);
    // open subsets of G₀ in the subspace topology
    let mut traces: Vec<Mask> = opens.iter().map(|&u| u & g0).collect();
    traces.sort_unstable();
    traces.dedup();
    let open_in_g0 = |m: Mask| traces.binary_search(&m).is_ok();

    let d_open = opens.iter().all(|&u| open_in_g0(g.set_dom(u)));
    let c1 = g0_open && d_open;

    let good: Vec<Mask> = opens
        .iter()
        .copied()
        .filter(|&u| {
            g.set_dom(u).count_ones() == u.count_ones()
                && opens.iter().filter(|&&w| w & u == w).all(|&w| open_in_g0(g.set_dom(w)))
        })
        .collect();
    let c2 = good.iter().fold(0, |acc, &u| acc | u) == full;

    let c3 = g0_open && opens.iter().all(|&u| opens.iter().all(|&v| tg.is_open(g.set_product(u, v))));
    let c4 = g0_open && opens.iter().all(|&u| tg.is_open(g.set_product(u, full)));
    let c5 = g0_open && opens.iter().all(|&u| tg.is_open(g.set_product(u, g.set_inverse(u))));

    let gset_cover = g0_open.then(|| opens.iter().filter(|&&u| g.is_gset(u)).fold(0, |acc, &u| acc | u) == full);
    if gset_cover == Some(false) {
        return Err(GroupoidError::EquivalenceBroken("G₀ open but open G-sets do not cover".into()));
    }
    let frobenius = c1.then(|| {
        opens.iter().all(|&u| {
            traces.iter().all(|&v| {
                let pre = bits::from_iter(bits::ones(u).filter(|&x| bits::has(v, g.dom(x))));
                g.set_dom(pre) == g.set_dom(u) & v
            })
        })
    });
    let report = EtaleReport { conditions: [c1, c2, c3, c4, c5], gset_cover, frobenius };
    if report.conditions.iter().any(|&c| c != c1) {
        return Err(GroupoidError::EquivalenceBroken(format!("mixed étale verdicts {:?}", report.conditions)));
    }
    Ok(report)
}

/// All topologies on `n` points, as open-set families (from preorders, opens = up-sets).
pub fn enumerate_topologies(n: usize) -> Result<Vec<Vec<Mask>>, GroupoidError> {
    if n > TOPOLOGY_ENUM_CAP {
        return Err(GroupoidError::CarrierTooLarge { what: "topology enumeration", size: n, cap: TOPOLOGY_ENUM_CAP });
    }
    let off: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    for r in 0u64..(1 << off.len()) {
        let mut rel = vec![false; n * n];
        for i in 0..n {
            rel[i * n + i] = true;
        }
        for (b, &(i, j)) in off.iter().enumerate() {
            if r >> b & 1 == 1 {
                rel[i * n + j] = true;
            }
        }
        let transitive = (0..n).all(|i| (0..n).all(|j| !rel[i * n + j] || (0..n).all(|k| !rel[j * n + k] || rel[i * n + k])));
        if !transitive {
            continue;
        }
        let opens: Vec<Mask> = (0..(1 as Mask) << n)
            .filter(|&u| bits::ones(u).all(|x| (0..n).all(|y| !rel[x * n + y] || bits::has(u, y))))
            .collect();
        out.push(opens);
    }
    Ok(out)
}

/// Every topology on the arrows of `g` that makes it a topological groupoid.
pub fn topological_structures(g: &FinGroupoid) -> Result<Vec<FinTopGroupoid>, GroupoidError> {
    Ok(enumerate_topologies(g.size())?
        .into_iter()
        .filter_map(|opens| FinTopGroupoid::validate(g.clone(), opens).ok())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn topology_counts() {
        let counts: Vec<usize> = (0..=4).map(|n| enumerate_topologies(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 4, 29, 355]);
    }

    #[test]
    fn indiscrete_z2() {
        let tg = FinTopGroupoid::indiscrete(FinGroupoid::cyclic(2));
        let r = check_etale_conditions(&tg).unwrap();
        assert_eq!(r.conditions, [false; 5]);
        assert!(matches!(topology_quantale(&tg), Err(GroupoidError::NotQuantalTopology { reason: "unit set not open", .. })));
    }

    #[test]
    fn discrete_topology_gives_powerset() {
        let g = FinGroupoid::pair(2);
        let tg = FinTopGroupoid::discrete(g.clone());
        let r = check_etale_conditions(&tg).unwrap();
        assert_eq!(r.conditions, [true; 5]);
        assert_eq!(r.frobenius, Some(true));
        let oq = topology_quantale(&tg).unwrap();
        let pg = crate::groupoid::powerset_quantale(&g).unwrap();
        assert!(quantale::quantale_isomorphic(&oq.quantale, &pg).unwrap().is_some());
    }

    #[test]
    fn shadow_of_pz2() {
        let q = crate::groupoid::powerset_quantale(&FinGroupoid::cyclic(2)).unwrap();
        let sh = groupoid_of_quantale(&q).unwrap();
        assert_eq!(sh.top.groupoid().size(), 3);
        assert_eq!(sh.top.groupoid().units().len(), 2);
        assert_eq!(sh.top.opens().len(), 5);
        verify_shadow(&sh).unwrap();
        assert!(quantale_round_trip(&q).unwrap().passed());
    }
}
