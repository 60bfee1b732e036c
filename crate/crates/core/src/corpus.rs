//! Built-in fixtures with expected verdicts, and the cross-module invariant suites.

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::envelope;
use crate::groupoid::{self, GroupoidError};
use crate::invsemi;
use crate::io::Document;
use crate::lattice::{self, FinSupLattice, Poset};
use crate::quantale::{self, FinQuantale, QuantaleError};
use crate::report::{self, ReportError, Structure};
use crate::search;
use crate::tensor;
use crate::topology::{self, FinTopGroupoid};
use crate::{FinGroupoid, FinInverseSemigroup};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("no fixture named '{0}'")]
    UnknownFixture(String),
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error(transparent)]
    Quantale(#[from] QuantaleError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Search(#[from] search::SearchError),
}

/// Where a fixture's expected verdicts come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    /// Data and verdicts as published.
    Literature,
    /// Verdicts computed by an independent brute-force check.
    Oracle,
    /// Verdicts that hold by construction.
    Definition,
}

#[derive(Debug, Clone)]
pub struct CorpusFixture {
    pub name: &'static str,
    pub origin: Origin,
    pub tags: &'static [&'static str],
    pub structure: Structure,
    pub expected: Vec<(&'static str, bool)>,
}

fn labels(ls: &[&str]) -> Vec<String> {
    ls.iter().map(|s| s.to_string()).collect()
}

/// Chain `0 < a < e < 1` with `a² = a* = a` and `a1 = 1`: a support exists but is not stable.
pub fn unstable_support_quantale() -> FinQuantale {
    let (z, a, e, t) = (0, 1, 2, 3);
    let mut mult = vec![0; 16];
    for x in 0..4 {
        for y in 0..4 {
            mult[x * 4 + y] = match (x, y) {
                (0, _) | (_, 0) => z,
                (x, y) if x == e => y,
                (x, y) if y == e => x,
                (1, 1) => a,
                _ => t,
            };
        }
    }
    FinQuantale::new(FinSupLattice::chain(4), mult, vec![0, 1, 2, 3], e)
        .expect("valid quantale")
        .with_labels(labels(&["0", "a", "e", "1"]))
}

/// `P({1, x})` with `e = {1}`, `{x}{x} = {1, x}` and trivial involution.
pub fn fuzzy_quantale() -> FinQuantale {
    // bit 0 is 1, bit 1 is x
    let point = |i: usize, j: usize| if i == 1 && j == 1 { 0b11 } else { 1 << (i ^ j) };
    let mut mult = vec![0; 16];
    for u in 0..4usize {
        for v in 0..4usize {
            let mut m = 0;
            for i in 0..2 {
                for j in 0..2 {
                    if u >> i & 1 == 1 && v >> j & 1 == 1 {
                        m |= point(i, j);
                    }
                }
            }
            mult[u * 4 + v] = m;
        }
    }
    let l = FinSupLattice::powerset(2).expect("small");
    FinQuantale::new(l, mult, vec![0, 1, 2, 3], 1)
        .expect("valid quantale")
        .with_labels(labels(&["∅", "{1}", "{x}", "{1,x}"]))
}

/// Downsets of the idempotent ordered monoid `{1 ≤ x}`: `∅ < {1} < {1, x}`.
pub fn ordered_monoid_quantale() -> FinQuantale {
    let mult = vec![0, 0, 0, 0, 1, 2, 0, 2, 2];
    FinQuantale::new(FinSupLattice::chain(3), mult, vec![0, 1, 2], 1)
        .expect("valid quantale")
        .with_labels(labels(&["∅", "{1}", "{1,x}"]))
}

/// The pseudogroup of partial homeomorphisms of the three-point space with opens
/// `∅, {x, y}, X`: elements `0, f, e, fs, s` with `s² = e`, `E = {0, f, e}`.
pub fn three_point_pseudogroup() -> FinInverseSemigroup {
    // index order 0, f, e, fs, s
    let names = ["0", "f", "e", "fs", "s"];
    let table = [
        [0, 0, 0, 0, 0],
        [0, 1, 1, 3, 3],
        [0, 1, 2, 3, 4],
        [0, 3, 3, 1, 1],
        [0, 3, 4, 1, 2],
    ];
    let mult = table.iter().flatten().copied().collect();
    FinInverseSemigroup::validate(5, mult, Some(2)).expect("valid monoid").with_labels(labels(&names))
}

pub const THREE_POINT_LABELS: [&str; 9] = ["0", "f", "t", "e", "a", "s", "b", "c", "1"];

/// The published commutative table: row `x` lists `x·y` for every `y` from `x` on.
const THREE_POINT_TABLE: &str = "
0 | 0 0 0 0 0 0 0 0 0
f | f t f a t a a a
t | f t a f a a a
e | e a s b c 1
a | a a a a a
s | e c b 1
b | b c 1
c | b 1
1 | 1
";

/// Upper triangle of the published table, as `(x, y, x·y)` label triples.
pub fn three_point_table_entries() -> Vec<(&'static str, &'static str, &'static str)> {
    let mut out = Vec::new();
    for line in THREE_POINT_TABLE.lines().filter(|l| !l.trim().is_empty()) {
        let (row, rest) = line.split_once('|').expect("row separator");
        let x = THREE_POINT_LABELS.iter().position(|&l| l == row.trim()).expect("known row");
        for (k, v) in rest.split_whitespace().enumerate() {
            let v = THREE_POINT_LABELS.iter().find(|&&l| l == v).expect("known entry");
            out.push((THREE_POINT_LABELS[x], THREE_POINT_LABELS[x + k], *v));
        }
    }
    out
}

/// The enveloping quantale of the three-point pseudogroup, as published; elements are
/// `0, f, t = fs, e, a = f∨t, s, b = e∨t, c = f∨s, 1 = e∨s`.
pub fn three_point_envelope_table() -> FinQuantale {
    let ix = |l: &str| THREE_POINT_LABELS.iter().position(|&x| x == l).expect("known label");
    let order = [
        ("0", "f"),
        ("0", "t"),
        ("f", "e"),
        ("f", "a"),
        ("t", "a"),
        ("t", "s"),
        ("e", "b"),
        ("a", "b"),
        ("a", "c"),
        ("s", "c"),
        ("b", "1"),
        ("c", "1"),
    ];
    let pairs: Vec<(usize, usize)> = order.iter().map(|&(a, b)| (ix(a), ix(b))).collect();
    let l = lattice::build_lattice(9, &pairs).expect("published order is a lattice");
    let mut mult = vec![0; 81];
    for (x, y, v) in three_point_table_entries() {
        mult[ix(x) * 9 + ix(y)] = ix(v);
        mult[ix(y) * 9 + ix(x)] = ix(v);
    }
    FinQuantale::new(l, mult, (0..9).collect(), ix("e"))
        .expect("published table is a quantale")
        .with_labels(labels(&THREE_POINT_LABELS))
}

/// The congruence identifying `b`, `c` and `1`.
pub fn three_point_theta() -> Vec<Vec<usize>> {
    vec![vec![0], vec![1], vec![2], vec![3], vec![4], vec![5], vec![6, 7, 8]]
}

/// Covering pairs of the published seven-element quotient order.
pub const THREE_POINT_QUOTIENT_COVERS: [(&str, &str); 9] = [
    ("0", "f"),
    ("0", "t"),
    ("f", "e"),
    ("f", "a"),
    ("t", "a"),
    ("t", "s"),
    ("e", "1"),
    ("a", "1"),
    ("s", "1"),
];

pub fn three_point_quotient() -> FinQuantale {
    quantale::quantale_quotient(&three_point_envelope_table(), &three_point_theta())
        .expect("θ is a congruence")
        .quantale
}

/// The group `Z/3` spread over the diamond `M₃`: `0 < e, g, g² < ⊤`.
pub fn z3_diamond() -> FinQuantale {
    let l = lattice::build_lattice(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).expect("M3");
    let mut mult = vec![0; 25];
    for x in 1..5 {
        for y in 1..5 {
            mult[x * 5 + y] = if x == 4 || y == 4 { 4 } else { 1 + (x - 1 + y - 1) % 3 };
        }
    }
    FinQuantale::new(l, mult, vec![0, 1, 3, 2, 4], 1)
        .expect("valid quantale")
        .with_labels(labels(&["0", "e", "g", "g2", "1"]))
}

/// `Z/2` and its endomorphism collapsing everything onto the unit.
pub fn z2_collapse() -> (FinGroupoid, Vec<usize>) {
    (FinGroupoid::cyclic(2), vec![0, 0])
}

pub fn fixtures() -> Vec<CorpusFixture> {
    use Origin::*;
    let q = Structure::Quantale;
    let mut out = vec![
        CorpusFixture {
            name: "unstable-support",
            origin: Literature,
            tags: &["quantale"],
            structure: q(unstable_support_quantale()),
            expected: vec![("supported", true), ("stably supported", false), ("stable quantal frame", false)],
        },
        CorpusFixture {
            name: "fuzzy",
            origin: Literature,
            tags: &["quantale", "tensor"],
            structure: q(fuzzy_quantale()),
            expected: vec![("stable quantal frame", true), ("multiplicative", false), ("inverse quantale", false)],
        },
        CorpusFixture {
            name: "ordered-monoid",
            origin: Literature,
            tags: &["quantale", "tensor"],
            structure: q(ordered_monoid_quantale()),
            expected: vec![
                ("stable quantal frame", true),
                ("multiplicative", true),
                ("inverse quantale", false),
                ("inversion laws", false),
            ],
        },
        CorpusFixture {
            name: "three-point-pseudogroup",
            origin: Literature,
            tags: &["invsemi"],
            structure: Structure::InvSemi(three_point_pseudogroup()),
            expected: vec![("monoid", true), ("abstract complete pseudogroup", true), ("η iso", true)],
        },
        CorpusFixture {
            name: "three-point-envelope",
            origin: Literature,
            tags: &["quantale"],
            structure: q(three_point_envelope_table()),
            expected: vec![("inverse quantale", true), ("inverse quantal frame", true)],
        },
        CorpusFixture {
            name: "three-point-quotient",
            origin: Literature,
            tags: &["quantale"],
            structure: q(three_point_quotient()),
            expected: vec![("inverse quantale", true), ("frame", false)],
        },
        CorpusFixture {
            name: "z3-diamond",
            origin: Oracle,
            tags: &["quantale", "search"],
            structure: q(z3_diamond()),
            expected: vec![("inverse quantale", true), ("frame", false)],
        },
        CorpusFixture {
            name: "z2",
            origin: Definition,
            tags: &["groupoid"],
            structure: Structure::Groupoid(FinGroupoid::cyclic(2)),
            expected: vec![("P(G) inverse quantal frame", true), ("atoms recover G", true)],
        },
        CorpusFixture {
            name: "z3",
            origin: Definition,
            tags: &["groupoid"],
            structure: Structure::Groupoid(FinGroupoid::cyclic(3)),
            expected: vec![("P(G) inverse quantal frame", true), ("G-sets are the partial units", true)],
        },
        CorpusFixture {
            name: "pz2",
            origin: Definition,
            tags: &["quantale", "roundtrip"],
            structure: q(groupoid::powerset_quantale(&FinGroupoid::cyclic(2)).expect("small")),
            expected: vec![("inverse quantal frame", true), ("inversion laws", true), ("multiplicative", true)],
        },
        CorpusFixture {
            name: "z2-indiscrete",
            origin: Definition,
            tags: &["etale"],
            structure: Structure::TopGroupoid(FinTopGroupoid::indiscrete(FinGroupoid::cyclic(2))),
            expected: vec![("étale", false)],
        },
        CorpusFixture {
            name: "pair2-discrete",
            origin: Definition,
            tags: &["etale"],
            structure: Structure::TopGroupoid(FinTopGroupoid::discrete(FinGroupoid::pair(2))),
            expected: vec![("étale", true), ("Frobenius identity", true)],
        },
    ];
    for n in 1..=3 {
        let names = ["I1", "I2", "I3"];
        out.push(CorpusFixture {
            name: names[n - 1],
            origin: Definition,
            tags: &["invsemi"],
            structure: Structure::InvSemi(invsemi::symmetric_inverse_monoid(n).expect("small")),
            expected: vec![("abstract complete pseudogroup", true), ("η iso", true)],
        });
    }
    for k in 2..=3 {
        let names = ["pair2", "pair3"];
        out.push(CorpusFixture {
            name: names[k - 2],
            origin: Definition,
            tags: &["groupoid"],
            structure: Structure::Groupoid(FinGroupoid::pair(k)),
            expected: vec![("connected", true), ("P(G) inverse quantal frame", true), ("atoms recover G", true)],
        });
    }
    out
}

// ---------------------------------------------------------------------------------------------
// Instance families

/// Groupoids with at most four arrows (exhaustive), with `Z/2`, `Z/3` and the pair groupoids on
/// two and three objects.
pub fn groupoid_family() -> Result<Vec<(String, FinGroupoid)>, GroupoidError> {
    let mut out = vec![("empty".to_string(), FinGroupoid::empty())];
    out.extend(groupoid::groupoids_up_to(4)?);
    out.push(("pair3".into(), FinGroupoid::pair(3)));
    Ok(out)
}

/// Quantales used by the property suites.
pub fn quantale_instances() -> Result<Vec<(String, FinQuantale)>, CorpusError> {
    let mut out = Vec::new();
    for n in 1..=5 {
        for (i, q) in search::enumerate_quantales(n)?.into_iter().enumerate() {
            out.push((format!("enum{n}-{i}"), q));
        }
    }
    for f in fixtures() {
        if let Structure::Quantale(q) = f.structure {
            out.push((f.name.to_string(), q));
        }
    }
    for (name, g) in groupoid::groupoids_up_to(4)? {
        out.push((format!("P({name})"), groupoid::powerset_quantale(&g)?));
        for (i, tg) in topology::topological_structures(&g)?.into_iter().enumerate() {
            if let Ok(oq) = topology::topology_quantale(&tg) {
                out.push((format!("O({name})#{i}"), oq.quantale));
            }
        }
    }
    for n in 1..=2 {
        let s = invsemi::symmetric_inverse_monoid(n).map_err(QuantaleError::from)?;
        let env = envelope::enveloping_quantale(&s).map_err(ReportError::from)?;
        out.push((format!("Lvee(I{n})"), env.quantale));
        let l = envelope::downset_quantale(&s).map_err(ReportError::from)?;
        out.push((format!("L(I{n})"), l.quantale));
    }
    let s = three_point_pseudogroup();
    out.push(("L(three-point)".into(), envelope::downset_quantale(&s).map_err(ReportError::from)?.quantale));
    Ok(out)
}

// ---------------------------------------------------------------------------------------------
// Suites

#[derive(Debug, Clone, Default, Serialize)]
pub struct SuiteOutcome {
    pub tag: &'static str,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl SuiteOutcome {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn error(&mut self, what: String, e: impl std::fmt::Display) {
        self.checked += 1;
        self.failures.push(format!("{what}: {e}"));
    }
}

type Suite = fn(&mut SuiteOutcome) -> Result<(), CorpusError>;

pub const SUITE_TAGS: [&str; 8] = ["lattice", "quantale", "tensor", "invsemi", "groupoid", "etale", "roundtrip", "identities"];

fn suite_for(tag: &str) -> Suite {
    match tag {
        "lattice" => lattice_suite,
        "quantale" => quantale_suite,
        "tensor" => tensor_suite,
        "invsemi" => invsemi_suite,
        "groupoid" => groupoid_suite,
        "etale" => etale_suite,
        "roundtrip" => roundtrip_suite,
        _ => identities_suite,
    }
}

fn lattice_suite(out: &mut SuiteOutcome) -> Result<(), CorpusError> {
    for n in 1..=6 {
        for (i, l) in search::lattices_up_to_iso(n)?.iter().enumerate() {
            let distributive = l.elements().all(|a| {
                l.elements().all(|b| l.elements().all(|c| l.meet(a, l.join(b, c)) == l.join(l.meet(a, b), l.meet(a, c))))
            });
            out.check(lattice::check_frame(l).is_ok() == distributive, || format!("lattice {n}#{i}: frame check"));
            let ji = lattice::join_irreducibles(l);
            out.check(l.elements().all(|x| l.join_all(ji.iter().copied().filter(|&j| l.leq(j, x))) == x), || {
                format!("lattice {n}#{i}: join-irreducibles generate")
            });
        }
    }
    for n in 0..=4 {
        let d = lattice::downset_lattice(&Poset::antichain(n)).map_err(QuantaleError::from)?;
        out.check(d.lattice.size() == 1 << n && lattice::check_frame(&d.lattice).is_ok(), || {
            format!("downsets of the {n}-antichain")
        });
    }
    Ok(())
}

fn quantale_suite(out: &mut SuiteOutcome) -> Result<(), CorpusError> {
    for (name, q) in quantale_instances()? {
        let r = match report::quantale_report(&q) {
            Ok(r) => r,
            Err(e) => {
                out.error(name, e);
                continue;
            }
        };
        let get = |k: &str| r.get(k).unwrap_or(false);
        out.check(!get("stably supported") || get("supported"), || format!("{name}: stable without support"));
        out.check(!get("stable quantal frame") || get("stably supported") && get("frame"), || format!("{name}: SQF"));
        out.check(!get("inverse quantale") || get("stably supported"), || format!("{name}: inverse not stable"));
        out.check(!get("inverse quantal frame") || get("multiplicative"), || format!("{name}: IQF not multiplicative"));
        out.check(!get("multiplicative") || get("stably supported"), || format!("{name}: multiplicative unstable"));
        out.check(get("inverse quantal frame") == (get("inverse quantale") && get("frame")), || {
            format!("{name}: IQF vs inverse ∧ frame")
        });
        if q.size() <= 8 {
            let supports = quantale::find_supports_exhaustive(&q)?;
            out.check(supports.len() <= 1 || supports.iter().all(|s| !s.is_stable()), || {
                format!("{name}: several supports with a stable one")
            });
        }
    }
    Ok(())
}

fn tensor_suite(out: &mut SuiteOutcome) -> Result<(), CorpusError> {
    for (name, q) in quantale_instances()? {
        if q.size() > 16 || quantale::stable_support(&q).is_err() {
            continue;
        }
        match tensor::check_adjunction(&q) {
            Ok(v) => out.check(v.holds, || format!("{name}: μ ⊣ μ* fails at {:?}", v.witness)),
            Err(e) => out.error(name, e),
        }
    }
    let fz = fuzzy_quantale();
    let w = tensor::check_multiplicative(&fz)?;
    out.check(w == Err(tensor::MultiplicativityWitness { c: 1, d: 2, missing: (2, 2) }), || {
        format!("fuzzy multiplicativity witness {w:?}")
    });
    Ok(())
}

fn invsemi_suite(out: &mut SuiteOutcome) -> Result<(), CorpusError> {
    let sizes = [1, 2, 7, 34];
    for (n, &size) in sizes.iter().enumerate() {
        let s = invsemi::symmetric_inverse_monoid(n).map_err(QuantaleError::from)?;
        out.check(s.size() == size, || format!("|I({n})| = {}", s.size()));
        match invsemi::is_abstract_complete_pseudogroup(&s) {
            Ok(v) => out.check(v, || format!("I({n}) is not complete and distributive")),
            Err(e) => out.error(format!("I({n})"), e),
        }
    }
    for n in 0..=2 {
        let s = invsemi::symmetric_inverse_monoid(n).map_err(QuantaleError::from)?;
        match envelope::eta(&s) {
            Ok(r) => out.check(r.is_iso(), || format!("η on I({n})")),
            Err(e) => out.error(format!("η on I({n})"), e),
        }
    }
    let s = three_point_pseudogroup();
    let l = envelope::downset_quantale(&s).map_err(ReportError::from)?;
    let lv = envelope::enveloping_quantale(&s).map_err(ReportError::from)?;
    out.check(l.quantale.size() == 10 && lv.quantale.size() == 9, || "three-point L and L∨ sizes".into());
    Ok(())
}

fn groupoid_suite(out: &mut SuiteOutcome) -> Result<(), CorpusError> {
    let family = groupoid_family()?;
    for (name, g) in &family {
        match report::groupoid_report(g) {
            Ok(r) => {
                for (k, v) in &r.checks {
                    if k != "connected" {
                        out.check(*v, || format!("{name}: {k}"));
                    }
                }
            }
            Err(e) => out.error(name.clone(), e),
        }
    }
    let small: Vec<&(String, FinGroupoid)> = family.iter().filter(|(_, g)| g.size() <= 3).collect();
    for (sn, src) in &small {
        for (tn, tgt) in &small {
            for f in groupoid::all_morphisms(src, tgt) {
                let r = groupoid::check_lax_morphism(src, tgt, &f)?;
                out.check(r.lax.is_ok(), || format!("{sn} → {tn} via {f:?}: not lax"));
                let trivial_kernel = src.arrows().all(|x| !tgt.is_unit(f[x]) || src.is_unit(x));
                out.check(r.unit_preserved == trivial_kernel, || format!("{sn} → {tn} via {f:?}: unit vs kernel"));
            }
        }
    }
    let (z2, h) = z2_collapse();
    let r = groupoid::check_lax_morphism(&z2, &z2, &h)?;
    out.check(r.equality_failure == Some((0b10, 0b10)), || format!("collapse witness {:?}", r.equality_failure));
    Ok(())
}

fn etale_suite(out: &mut SuiteOutcome) -> Result<(), CorpusError> {
    for (name, g) in groupoid_family()? {
        if g.size() > 4 {
            continue;
        }
        for (i, tg) in topology::topological_structures(&g)?.iter().enumerate() {
            match topology::check_etale_conditions(tg) {
                Ok(r) => {
                    out.check(r.frobenius != Some(false), || format!("{name}#{i}: Frobenius"));
                    let quantal = topology::topology_quantale(tg).is_ok();
                    out.check(quantal == r.etale(), || format!("{name}#{i}: opens form a quantale iff étale"));
                }
                Err(e) => out.error(format!("{name}#{i}"), e),
            }
        }
    }
    Ok(())
}

fn roundtrip_suite(out: &mut SuiteOutcome) -> Result<(), CorpusError> {
    for (name, g) in groupoid_family()? {
        if g.size() == 0 {
            continue;
        }
        let pg = groupoid::powerset_quantale(&g)?;
        match envelope::epsilon(&pg) {
            Ok(r) => out.check(r.is_iso, || format!("ε on P({name})")),
            Err(e) => out.error(format!("ε on P({name})"), e),
        }
        let gs = groupoid::gsets(&g)?;
        match envelope::eta(&gs.monoid) {
            Ok(r) => out.check(r.is_iso(), || format!("η on G-sets of {name}")),
            Err(e) => out.error(format!("η on G-sets of {name}"), e),
        }
        if g.size() <= 4 {
            match topology::quantale_round_trip(&pg) {
                Ok(r) => out.check(r.passed(), || format!("round trip on P({name})")),
                Err(e) => out.error(format!("round trip on P({name})"), e),
            }
        }
    }
    Ok(())
}

fn identities_suite(out: &mut SuiteOutcome) -> Result<(), CorpusError> {
    for (name, q) in quantale_instances()? {
        if let Ok(s) = quantale::candidate_support(&q) {
            let r = quantale::derived_identities_report(&q, &s);
            out.check(r.general_hold(), || format!("{name}: {:?}", r.failures()));
            if s.is_stable() {
                out.check(r.stable_extras_hold(), || format!("{name}: stable extras {:?}", r.failures()));
            }
            if let Err(e) = quantale::stability_conditions_report(&q, &s) {
                out.error(format!("{name}: stability conditions"), e);
            }
        }
        if quantale::check_stable_quantal_frame(&q)?.holds {
            if let Err(e) = quantale::check_inversion_laws(&q) {
                out.error(format!("{name}: inversion laws"), e);
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------------------------
// Running

#[derive(Debug, Clone, Serialize)]
pub struct FixtureOutcome {
    pub name: &'static str,
    pub origin: Origin,
    pub passed: bool,
    pub mismatches: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorpusSummary {
    pub passed: usize,
    pub failed: usize,
    pub fixtures: Vec<FixtureOutcome>,
    pub suites: Vec<SuiteOutcome>,
}

impl CorpusSummary {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for f in &self.fixtures {
            let _ = writeln!(s, "{} {} [{}]", if f.passed { "ok  " } else { "FAIL" }, f.name, origin_name(f.origin));
            for m in &f.mismatches {
                let _ = writeln!(s, "       {m}");
            }
        }
        for o in &self.suites {
            let ok = o.failures.is_empty();
            let _ = writeln!(s, "{} suite {} ({} checks)", if ok { "ok  " } else { "FAIL" }, o.tag, o.checked);
            for m in o.failures.iter().take(10) {
                let _ = writeln!(s, "       {m}");
            }
        }
        let _ = writeln!(s, "{} passed, {} failed", self.passed, self.failed);
        s
    }
}

/// The fixture as a file for `check`, expectations and origin included.
pub fn fixture_document(f: &CorpusFixture) -> Document {
    let mut doc = Document::from_structure(&f.structure);
    doc.expect = f.expected.iter().map(|&(k, v)| (k.to_string(), v)).collect();
    doc.origin = Some(origin_name(f.origin).to_string());
    doc
}

pub fn origin_name(o: Origin) -> &'static str {
    match o {
        Origin::Literature => "literature",
        Origin::Oracle => "oracle",
        Origin::Definition => "definition",
    }
}

pub fn check_fixture(f: &CorpusFixture) -> FixtureOutcome {
    let mut mismatches = Vec::new();
    match report::report(&f.structure) {
        Ok(r) => {
            for &(k, want) in &f.expected {
                match r.get(k) {
                    Some(got) if got == want => {}
                    got => mismatches.push(format!("{k}: expected {want}, got {got:?}")),
                }
            }
        }
        Err(e) => mismatches.push(format!("report failed: {e}")),
    }
    FixtureOutcome { name: f.name, origin: f.origin, passed: mismatches.is_empty(), mismatches }
}

/// Runs the fixtures and suites whose tags match `filter`. `corrupt` names a fixture whose
/// first expectation is flipped, to exercise the failure path.
pub fn run_corpus(filter: Option<&str>, corrupt: Option<&str>) -> Result<CorpusSummary, CorpusError> {
    let mut fixtures = fixtures();
    if let Some(name) = corrupt {
        let f = fixtures.iter_mut().find(|f| f.name == name).ok_or_else(|| CorpusError::UnknownFixture(name.into()))?;
        f.expected[0].1 = !f.expected[0].1;
    }
    let selected: Vec<CorpusFixture> =
        fixtures.into_iter().filter(|f| filter.is_none_or(|t| f.tags.contains(&t) || f.name == t)).collect();
    let tags: Vec<&'static str> = SUITE_TAGS.iter().copied().filter(|t| filter.is_none_or(|f| f == *t)).collect();

    let (fixture_results, suite_results) = std::thread::scope(|scope| {
        let fx: Vec<_> = selected.iter().map(|f| scope.spawn(move || check_fixture(f))).collect();
        let sx: Vec<_> = tags
            .iter()
            .map(|&tag| {
                scope.spawn(move || {
                    let mut o = SuiteOutcome { tag, ..Default::default() };
                    if let Err(e) = suite_for(tag)(&mut o) {
                        o.error("suite aborted".into(), e);
                    }
                    o
                })
            })
            .collect();
        (
            fx.into_iter().map(|h| h.join().expect("fixture thread")).collect::<Vec<_>>(),
            sx.into_iter().map(|h| h.join().expect("suite thread")).collect::<Vec<_>>(),
        )
    });
    let passed = fixture_results.iter().filter(|f| f.passed).count()
        + suite_results.iter().filter(|s| s.failures.is_empty()).count();
    let failed = fixture_results.len() + suite_results.len() - passed;
    Ok(CorpusSummary { passed, failed, fixtures: fixture_results, suites: suite_results })
}
