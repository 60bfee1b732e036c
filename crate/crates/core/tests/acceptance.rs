//! The acceptance gate: one PASS/FAIL line per criterion, with timings.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use qgk::bits::{self, Mask};
use qgk::corpus;
use qgk::envelope;
use qgk::groupoid;
use qgk::invsemi;
use qgk::lattice;
use qgk::quantale::{self, FinQuantale};
use qgk::search::{self, Target};
use qgk::tensor::{self, TensorSquare};
use qgk::topology;
use qgk::FinGroupoid;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

// ---------------------------------------------------------------------------------------------
// 1. three-point envelope table

/// Published element names as sets of pseudogroup elements (index order 0, f, e, fs, s).
fn published_sets() -> Vec<(&'static str, Mask)> {
    let (z, f, e, t, s) = (1, 2, 4, 8, 16);
    vec![
        ("0", z),
        ("f", z | f),
        ("t", z | t),
        ("e", z | f | e),
        ("a", z | f | t),
        ("s", z | t | s),
        ("b", z | f | e | t),
        ("c", z | f | t | s),
        ("1", z | f | e | t | s),
    ]
}

fn table_matches(q: &FinQuantale, sets: &[Mask]) -> Result<usize, String> {
    let named = published_sets();
    let ix = |name: &str| -> Result<usize, String> {
        let m = named.iter().find(|(n, _)| *n == name).unwrap().1;
        sets.iter().position(|&s| s == m).ok_or(format!("no element for {name}"))
    };
    let entries = corpus::three_point_table_entries();
    for &(x, y, v) in &entries {
        let got = q.mul(ix(x)?, ix(y)?);
        ensure(got == ix(v)?, || format!("{x}·{y} = {} but published {v}", q.label(got)))?;
    }
    for a in q.elements() {
        for b in q.elements() {
            ensure(q.mul(a, b) == q.mul(b, a), || format!("not commutative at {a},{b}"))?;
        }
    }
    Ok(entries.len())
}

fn criterion_1() -> Outcome {
    let s = corpus::three_point_pseudogroup();
    let lv = envelope::enveloping_quantale(&s).map_err(err)?;
    ensure(lv.quantale.size() == 9, || format!("L∨ has {} elements", lv.quantale.size()))?;
    let entries = table_matches(&lv.quantale, &lv.sets)?;
    ensure(entries == 45, || format!("{entries} upper-triangle entries"))?;

    let l = envelope::downset_quantale(&s).map_err(err)?;
    ensure(l.quantale.size() == 10 && l.sets[0] == 0, || "L is not the table plus ∅".into())?;
    table_matches(&l.quantale, &l.sets)?;
    ensure(l.quantale.elements().all(|x| l.quantale.mul(0, x) == 0), || "∅ is not absorbing in L".into())?;

    // the published table, through the name correspondence, is the built one
    let published = corpus::three_point_envelope_table();
    let map: Vec<usize> = published_sets().iter().map(|(_, m)| lv.index_of(*m).unwrap()).collect();
    ensure(quantale::is_isomorphism(&published, &lv.quantale, &map), || "published order/table differ".into())?;

    let quot = quantale::quantale_quotient(&published, &corpus::three_point_theta()).map_err(err)?.quantale;
    ensure(quot.size() == 7, || format!("quotient has {} elements", quot.size()))?;
    let covers: BTreeSet<(String, String)> = quot
        .lattice()
        .covers()
        .into_iter()
        .map(|(a, b)| (quot.label(a).to_string(), quot.label(b).to_string()))
        .collect();
    let printed: BTreeSet<(String, String)> =
        corpus::THREE_POINT_QUOTIENT_COVERS.iter().map(|&(a, b)| (a.to_string(), b.to_string())).collect();
    ensure(covers == printed, || format!("quotient order {covers:?}"))?;

    let f = |l: &str| quot.find(l).unwrap();
    let (se, sa) = (quot.meet(f("s"), f("e")), quot.meet(f("s"), f("a")));
    ensure(quot.meet(f("s"), quot.join(f("e"), f("a"))) == f("s"), || "s∧(e∨a) ≠ s".into())?;
    ensure(quot.join(se, sa) == f("t"), || "(s∧e)∨(s∧a) ≠ t".into())?;
    ensure(!quantale::check_frame(&quot).holds, || "quotient is a frame".into())?;
    ensure(lattice::frame_violations(quot.lattice()).any(|v| v == (f("s"), f("e"), f("a"))), || {
        "(s, e, a) not reported as a frame violation".into()
    })?;
    let supp = quantale::stable_support(&quot).map_err(err)?;
    ensure(quantale::check_inverse_quantale(&quot, &supp).map_err(err)?.holds, || "quotient not inverse".into())?;
    Ok("L∨ = published 9-element table; L = table plus ∅; 7-element quotient; witness s, e, a".into())
}

// ---------------------------------------------------------------------------------------------
// 2. unstable support

fn criterion_2() -> Outcome {
    let q = corpus::unstable_support_quantale();
    let a = q.find("a").unwrap();
    let supports = quantale::find_supports_exhaustive(&q).map_err(err)?;
    ensure(supports.len() == 1, || format!("{} supports", supports.len()))?;
    let s = &supports[0];
    ensure(s.apply(a) == a, || "ςa ≠ a".into())?;
    ensure(!s.is_stable(), || "support is stable".into())?;
    let one = q.top();
    ensure(s.apply(q.mul(a, one)) == q.unit() && !q.leq(q.unit(), a), || "ς(a1) = e ≤ a".into())?;
    match quantale::stable_support(&q) {
        Err(quantale::QuantaleError::NotASupport { witness, .. }) => {
            ensure(witness == vec![a], || format!("stability witness {witness:?}"))?
        }
        other => return Err(format!("stable support: {other:?}")),
    }
    let report = quantale::stability_conditions_report(&q, s).map_err(err)?;
    ensure(report.none(), || format!("conditions {:?}", report.conditions))?;
    Ok("one support, ς(a1) = e ≰ a, all 11 conditions false".into())
}

// ---------------------------------------------------------------------------------------------
// 3. fuzzy example, with a brute-force bi-ideal closure

/// Least bi-ideal containing `seed`: intersection of all bi-ideals over the 16 pairs.
fn oracle_closure(q: &FinQuantale, seed: u32) -> u32 {
    let n = q.size();
    assert_eq!(n, 4);
    let pair = |a: usize, b: usize| 1u32 << (a * n + b);
    let below_e: Vec<usize> = q.elements().filter(|&z| q.leq(z, q.unit())).collect();
    let is_biideal = |r: u32| {
        let has = |a: usize, b: usize| r & pair(a, b) != 0;
        let mut ok = q.elements().all(|x| has(x, q.bottom()) && has(q.bottom(), x));
        for a in 0..n {
            for b in 0..n {
                if !has(a, b) {
                    continue;
                }
                for a2 in 0..n {
                    for b2 in 0..n {
                        if q.leq(a2, a) && q.leq(b2, b) && !has(a2, b2) {
                            ok = false;
                        }
                    }
                }
                for c in 0..n {
                    if has(c, b) && !has(q.join(a, c), b) {
                        ok = false;
                    }
                    if has(a, c) && !has(a, q.join(b, c)) {
                        ok = false;
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for &z in &below_e {
                    if has(q.mul(a, z), b) != has(a, q.mul(z, b)) {
                        ok = false;
                    }
                }
            }
        }
        ok
    };
    let mut acc = u32::MAX >> (32 - n * n);
    for r in 0..(1u32 << (n * n)) {
        if r & seed == seed && is_biideal(r) {
            acc &= r;
        }
    }
    acc
}

fn criterion_3() -> Outcome {
    let q = corpus::fuzzy_quantale();
    let (one, x) = (q.find("{1}").unwrap(), q.find("{x}").unwrap());
    ensure(quantale::check_stable_quantal_frame(&q).map_err(err)?.holds, || "not a stable quantal frame".into())?;
    let w = tensor::check_multiplicative(&q).map_err(err)?;
    let expected = tensor::MultiplicativityWitness { c: one, d: x, missing: (x, x) };
    ensure(w == Err(expected), || format!("witness {w:?}"))?;
    let n = q.size();
    let star = |c: usize| -> u32 {
        let mut r = 0;
        for a in 0..n {
            for b in 0..n {
                if q.leq(q.mul(a, b), c) {
                    r |= 1 << (a * n + b);
                }
            }
        }
        r
    };
    let joined = oracle_closure(&q, star(one) | star(x));
    let top = star(q.join(one, x));
    let bit = 1u32 << (x * n + x);
    ensure(top & bit != 0 && joined & bit == 0, || "oracle disagrees on ({x},{x})".into())?;
    // and the library's closure agrees with the oracle
    let t = TensorSquare::new(&q).map_err(err)?;
    let lib = t.join(&t.mu_star(one), &t.mu_star(x));
    let lib_bits: u32 = lib.iter().map(|(a, b)| 1u32 << (a * n + b)).sum();
    ensure(lib_bits == joined, || "library closure differs from oracle".into())?;
    let supp = quantale::stable_support(&q).map_err(err)?;
    ensure(!quantale::check_inverse_quantale(&q, &supp).map_err(err)?.holds, || "fuzzy is inverse".into())?;
    Ok("stable quantal frame; μ*({1}) ⊔ μ*({x}) misses ({x},{x}); not inverse".into())
}

// ---------------------------------------------------------------------------------------------
// 4. ordered monoid

fn criterion_4() -> Outcome {
    let q = corpus::ordered_monoid_quantale();
    ensure(tensor::check_multiplicative(&q).map_err(err)?.is_ok(), || "not multiplicative".into())?;
    let supp = quantale::stable_support(&q).map_err(err)?;
    ensure(!quantale::check_inverse_quantale(&q, &supp).map_err(err)?.holds, || "inverse".into())?;
    let j = quantale::join_of_partial_units(&q).map_err(err)?;
    ensure(q.label(j) == "{1}" && j != q.top(), || format!("⋁ipi = {}", q.label(j)))?;
    let inv = quantale::check_inversion_laws(&q).map_err(err)?;
    ensure(!inv.laws_hold(), || "inversion laws hold".into())?;
    Ok("multiplicative, not inverse, ⋁ipi = {1} ≠ ⊤, inversion laws fail".into())
}

// ---------------------------------------------------------------------------------------------
// 5. L∨(I(n)) ≅ P(n × n)

/// Graph of an `I(n)` element from its label `{0>1,1>0}`.
fn graph_of(label: &str, n: usize) -> Mask {
    let inner = label.trim_start_matches('{').trim_end_matches('}');
    inner
        .split(',')
        .filter(|p| !p.is_empty())
        .map(|p| {
            let (i, j) = p.split_once('>').unwrap();
            bits::bit(i.parse::<usize>().unwrap() * n + j.parse::<usize>().unwrap())
        })
        .fold(0, |a, b| a | b)
}

fn compose(r: Mask, s: Mask, n: usize) -> Mask {
    let mut out = 0;
    for (i, j) in bits::ones(r).map(|p| (p / n, p % n)) {
        for l in 0..n {
            if bits::has(s, j * n + l) {
                out |= bits::bit(i * n + l);
            }
        }
    }
    out
}

fn transpose(r: Mask, n: usize) -> Mask {
    bits::ones(r).map(|p| bits::bit((p % n) * n + p / n)).fold(0, |a, b| a | b)
}

fn criterion_5() -> Outcome {
    let mut notes = Vec::new();
    for n in 1..=3 {
        let start = Instant::now();
        let s = invsemi::symmetric_inverse_monoid(n).map_err(err)?;
        let env = envelope::enveloping_quantale(&s).map_err(err)?;
        let q = &env.quantale;
        let graphs: Vec<Mask> = s.elements().map(|x| graph_of(s.label(x), n)).collect();
        // an element of L∨ is a set of partial bijections; send it to the union of their graphs
        let phi: Vec<Mask> = env.sets.iter().map(|&m| bits::ones(m).map(|x| graphs[x]).fold(0, |a, b| a | b)).collect();
        let size = 1usize << (n * n);
        ensure(q.size() == size, || format!("|L∨(I({n}))| = {}", q.size()))?;
        let distinct: BTreeSet<Mask> = phi.iter().copied().collect();
        ensure(distinct.len() == size, || format!("n = {n}: map not bijective"))?;
        for a in q.elements() {
            ensure(phi[q.star(a)] == transpose(phi[a], n), || format!("n = {n}: involution at {a}"))?;
        }
        // generators
        for &x in &env.principal {
            for &y in &env.principal {
                ensure(phi[q.mul(x, y)] == compose(phi[x], phi[y], n), || format!("n = {n}: generator product"))?;
            }
        }
        if n <= 2 {
            let pg = groupoid::powerset_quantale(&FinGroupoid::pair(n)).map_err(err)?;
            let iso = quantale::quantale_isomorphic(q, &pg).map_err(err)?.ok_or(format!("n = {n}: no iso found"))?;
            ensure(quantale::is_isomorphism(q, &pg, &iso), || "iso check".into())?;
            // P(G) indexes elements by arrow mask, which is the pair mask here
            let explicit: Vec<usize> = phi.iter().map(|&m| m as usize).collect();
            ensure(quantale::is_isomorphism(q, &pg, &explicit), || format!("n = {n}: explicit map"))?;
            for a in q.elements() {
                ensure(q.leq(a, q.top()) && phi[a] & phi[q.top()] == phi[a], || "order".into())?;
            }
        } else {
            let mut rng = StdRng::seed_from_u64(0x5eed);
            for _ in 0..10_000 {
                let (a, b, c) = (rng.gen_range(0..size), rng.gen_range(0..size), rng.gen_range(0..size));
                let lhs = phi[q.mul(q.mul(a, b), c)];
                let rhs = compose(compose(phi[a], phi[b], n), phi[c], n);
                ensure(lhs == rhs, || format!("n = 3: product of {a}, {b}, {c}"))?;
                ensure(q.leq(a, b) == (phi[a] & phi[b] == phi[a]), || "n = 3: order".into())?;
            }
            ensure(start.elapsed() < Duration::from_secs(60), || "n = 3 over 60 s".into())?;
        }
        notes.push(format!("n={n}: {} in {:.2?}", q.size(), start.elapsed()));
    }
    Ok(notes.join(", "))
}

// ---------------------------------------------------------------------------------------------
// 6. round trips over the groupoid family

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let family = corpus::groupoid_family().map_err(err)?;
    let by_size: Vec<usize> = (0..=4).map(|k| family.iter().filter(|(_, g)| g.size() == k).count()).collect();
    ensure(by_size == vec![1, 1, 2, 3, 7], || format!("groupoids by size {by_size:?}"))?;
    for (name, g) in &family {
        let pg = groupoid::powerset_quantale(g).map_err(err)?;
        ensure(quantale::check_inverse_quantal_frame(&pg).map_err(err)?.holds, || format!("P({name}) not IQF"))?;
        let back = groupoid::recover_groupoid_from_atoms(&pg).map_err(err)?;
        ensure(groupoid::groupoid_isomorphic(&back, g).map_err(err)?.is_some(), || format!("{name}: atoms"))?;
        let gs = groupoid::gsets(g).map_err(err)?;
        let pu = quantale::partial_units(&pg).map_err(err)?.members;
        ensure(gs.sets.iter().map(|&m| m as usize).eq(pu.iter().copied()), || format!("{name}: G-sets"))?;
        let eps = envelope::epsilon(&pg).map_err(err)?;
        ensure(eps.is_iso, || format!("{name}: ε"))?;
        let eta = envelope::eta(&gs.monoid).map_err(err)?;
        ensure(eta.is_iso(), || format!("{name}: η"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(30), || format!("took {elapsed:.2?}"))?;
    Ok(format!("{} groupoids", family.len()))
}

// ---------------------------------------------------------------------------------------------
// 7. identity suites

fn criterion_7() -> Outcome {
    let instances = corpus::quantale_instances().map_err(err)?;
    let mut supported = 0;
    let mut stable = 0;
    let mut frames = 0;
    for (name, q) in &instances {
        if let Ok(s) = quantale::candidate_support(q) {
            supported += 1;
            let r = quantale::derived_identities_report(q, &s);
            ensure(r.general_hold(), || format!("{name}: {:?}", r.failures()))?;
            if s.is_stable() {
                stable += 1;
                ensure(r.stable_extras_hold(), || format!("{name}: stable extras"))?;
            }
            quantale::stability_conditions_report(q, &s).map_err(|e| format!("{name}: {e}"))?;
        }
        if quantale::check_stable_quantal_frame(q).map_err(err)?.holds {
            frames += 1;
            quantale::check_inversion_laws(q).map_err(|e| format!("{name}: {e}"))?;
        }
    }
    ensure(supported >= 200, || format!("only {supported} supported instances"))?;
    Ok(format!("{} instances: {supported} supported, {stable} stable, {frames} stable quantal frames", instances.len()))
}

// ---------------------------------------------------------------------------------------------
// 8. étale conditions

/// `d` is a local homeomorphism, from the definition: every arrow has an open neighbourhood on
/// which `d` is injective and open into `G₀`.
fn oracle_local_homeo(g: &FinGroupoid, opens: &[Mask]) -> bool {
    let g0 = g.units_mask();
    let open_in_g0 = |m: Mask| opens.iter().any(|&u| u & g0 == m);
    let d_image = |u: Mask| bits::ones(u).map(|x| bits::bit(g.dom(x))).fold(0, |a, b| a | b);
    g.arrows().all(|x| {
        opens.iter().any(|&u| {
            bits::has(u, x)
                && d_image(u).count_ones() == u.count_ones()
                && opens.iter().filter(|&&w| w & !u == 0).all(|&w| open_in_g0(d_image(w)))
        })
    })
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let mut instances = 0;
    let mut etale = 0;
    for (name, g) in corpus::groupoid_family().map_err(err)? {
        if g.size() > 4 {
            continue;
        }
        for tg in topology::topological_structures(&g).map_err(err)? {
            instances += 1;
            let r = topology::check_etale_conditions(&tg).map_err(|e| format!("{name}: {e}"))?;
            ensure(r.conditions.iter().all(|&c| c == r.conditions[0]), || format!("{name}: mixed"))?;
            ensure(r.conditions[1] == oracle_local_homeo(&g, tg.opens()), || format!("{name}: oracle"))?;
            if r.conditions[0] {
                etale += 1;
                ensure(r.frobenius == Some(true), || format!("{name}: Frobenius"))?;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:.2?}"))?;
    Ok(format!("{instances} topological groupoids, {etale} étale, no mixed verdicts"))
}

// ---------------------------------------------------------------------------------------------
// 9. lax morphisms

fn criterion_9() -> Outcome {
    let (z2, h) = corpus::z2_collapse();
    let g = z2.arrows().find(|&x| !z2.is_unit(x)).ok_or("no g")?;
    let u: Mask = bits::bit(g);
    let pre = |m: Mask| bits::from_iter(z2.arrows().filter(|&x| bits::has(m, h[x])));
    let uv = z2.set_product(u, z2.set_inverse(u));
    ensure(z2.set_product(pre(u), pre(z2.set_inverse(u))) == 0, || "preimage product not ∅".into())?;
    ensure(pre(uv) == bits::full(2), || "h⁻¹(UV) ≠ G".into())?;
    let r = groupoid::check_lax_morphism(&z2, &z2, &h).map_err(err)?;
    ensure(r.lax.is_ok() && r.equality_failure.is_some(), || format!("{r:?}"))?;

    let family: Vec<(String, FinGroupoid)> =
        corpus::groupoid_family().map_err(err)?.into_iter().filter(|(_, g)| g.size() <= 4).collect();
    let mut morphisms = 0;
    for (sn, src) in &family {
        for (tn, tgt) in &family {
            for f in groupoid::all_morphisms(src, tgt) {
                morphisms += 1;
                let r = groupoid::check_lax_morphism(src, tgt, &f).map_err(err)?;
                ensure(r.lax.is_ok(), || format!("{sn} → {tn} via {f:?}"))?;
            }
        }
    }
    Ok(format!("collapse: ∅ vs G; {morphisms} morphisms lax"))
}

// ---------------------------------------------------------------------------------------------
// 10. tensor square

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let mut qs: Vec<(String, FinQuantale)> = corpus::fixtures()
        .into_iter()
        .filter_map(|f| match f.structure {
            qgk::report::Structure::Quantale(q) => Some((f.name.to_string(), q)),
            _ => None,
        })
        .collect();
    let i2 = invsemi::symmetric_inverse_monoid(2).map_err(err)?;
    qs.push(("Lvee(I2)".into(), envelope::enveloping_quantale(&i2).map_err(err)?.quantale));
    let mut checked = 0;
    for (name, q) in &qs {
        if q.size() > 16 {
            continue;
        }
        let Ok(t) = TensorSquare::new(q) else { continue };
        checked += 1;
        ensure(tensor::check_adjunction(q).map_err(err)?.holds, || format!("{name}: adjunction"))?;
        let n = q.size();
        let pure: Vec<_> = (0..n * n).map(|i| t.pure_tensor(i / n, i % n)).collect();
        let p = |a: usize, b: usize| &pure[a * n + b];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    ensure(*p(q.join(a, c), b) == t.join(p(a, b), p(c, b)), || format!("{name}: left linearity"))?;
                    ensure(*p(a, q.join(b, c)) == t.join(p(a, b), p(a, c)), || format!("{name}: right linearity"))?;
                }
                for z in q.below_unit() {
                    ensure(p(q.mul(a, z), b) == p(a, q.mul(z, b)), || format!("{name}: middle linearity"))?;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:.2?}"))?;
    Ok(format!("{checked} stably supported fixtures"))
}

// ---------------------------------------------------------------------------------------------
// 11. search

fn criterion_11() -> Outcome {
    let mut notes = Vec::new();
    for (target, fixture) in [
        (Target::StableNotMultiplicative, corpus::fuzzy_quantale()),
        (Target::NonStableSupport, corpus::unstable_support_quantale()),
    ] {
        let start = Instant::now();
        let r = search::search(target, 4).map_err(err)?;
        let hit = r.found.iter().any(|q| quantale::quantale_isomorphic(q, &fixture).ok().flatten().is_some());
        ensure(hit, || format!("{target}: published example not found"))?;
        ensure(start.elapsed() < Duration::from_secs(300), || format!("{target} over 5 min"))?;
        notes.push(format!("{target}: {} found", r.found.len()));
    }
    Ok(notes.join("; "))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("three-point envelope table and quotient", criterion_1, Duration::from_secs(1)),
        ("unstable support", criterion_2, Duration::from_secs(1)),
        ("stable quantal frame that is not multiplicative", criterion_3, Duration::from_secs(1)),
        ("multiplicative but not inverse", criterion_4, Duration::from_secs(1)),
        ("L∨(I(n)) ≅ P(n×n)", criterion_5, Duration::from_secs(60)),
        ("groupoid round trips", criterion_6, Duration::from_secs(30)),
        ("support identity suites", criterion_7, Duration::from_secs(600)),
        ("étale conditions agree", criterion_8, Duration::from_secs(60)),
        ("lax morphisms", criterion_9, Duration::from_secs(1)),
        ("μ ⊣ μ* and bi-ideal linearity", criterion_10, Duration::from_secs(10)),
        ("search rediscovery", criterion_11, Duration::from_secs(600)),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(note) if elapsed > *budget => Err(format!("{note}; over budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(note) => println!("PASS {:>2} {name} ({elapsed:.2?}): {note}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({elapsed:.2?}): {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
