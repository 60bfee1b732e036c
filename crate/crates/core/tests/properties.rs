use std::sync::OnceLock;

use proptest::prelude::*;

use qgk::bits::{self, Mask};
use qgk::lattice::build_lattice;
use qgk::quantale::{self, FinQuantale};
use qgk::report::{self, Structure};
use qgk::{corpus, envelope, groupoid, invsemi, io, tensor, FinGroupoid};

fn instances() -> &'static [(String, FinQuantale)] {
    static CELL: OnceLock<Vec<(String, FinQuantale)>> = OnceLock::new();
    CELL.get_or_init(|| corpus::quantale_instances().unwrap())
}

fn family() -> &'static [(String, FinGroupoid)] {
    static CELL: OnceLock<Vec<(String, FinGroupoid)>> = OnceLock::new();
    CELL.get_or_init(|| corpus::groupoid_family().unwrap())
}

/// The same quantale with its carrier relabelled by `perm`.
fn relabel(q: &FinQuantale, perm: &[usize]) -> FinQuantale {
    let n = q.size();
    let pairs: Vec<(usize, usize)> = q.lattice().covers().into_iter().map(|(a, b)| (perm[a], perm[b])).collect();
    let lattice = build_lattice(n, &pairs).unwrap();
    let mut mult = vec![0; n * n];
    let mut inv = vec![0; n];
    for a in q.elements() {
        inv[perm[a]] = perm[q.star(a)];
        for b in q.elements() {
            mult[perm[a] * n + perm[b]] = perm[q.mul(a, b)];
        }
    }
    FinQuantale::new(lattice, mult, inv, perm[q.unit()]).unwrap()
}

fn small_quantale() -> impl Strategy<Value = (usize, Vec<usize>)> {
    (0..instances().len()).prop_flat_map(|i| {
        let n = instances()[i].1.size();
        (Just(i), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

fn relation(n: usize) -> impl Strategy<Value = Mask> {
    0..(1u64 << (n * n))
}

fn compose(r: Mask, s: Mask, n: usize) -> Mask {
    let mut out = 0;
    for p in bits::ones(r) {
        let (i, j) = (p / n, p % n);
        for l in 0..n {
            if bits::has(s, j * n + l) {
                out |= bits::bit(i * n + l);
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quantale_laws_hold_on_corpus_instances(i in 0..585usize, a in 0..64usize, b in 0..64usize, c in 0..64usize) {
        let (_, q) = &instances()[i % instances().len()];
        let n = q.size();
        let (a, b, c) = (a % n, b % n, c % n);
        prop_assert_eq!(q.mul(q.mul(a, b), c), q.mul(a, q.mul(b, c)));
        prop_assert_eq!(q.mul(a, q.join(b, c)), q.join(q.mul(a, b), q.mul(a, c)));
        prop_assert_eq!(q.mul(q.join(a, b), c), q.join(q.mul(a, c), q.mul(b, c)));
        prop_assert_eq!(q.star(q.mul(a, b)), q.mul(q.star(b), q.star(a)));
        prop_assert_eq!(q.star(q.star(a)), a);
        prop_assert_eq!(q.mul(q.unit(), a), a);
        prop_assert_eq!(q.join(a, q.meet(a, b)), a);
    }

    #[test]
    fn relabelling_preserves_iso_class_and_report((i, perm) in small_quantale()) {
        let q = &instances()[i].1;
        let p = relabel(q, &perm);
        prop_assert!(quantale::is_isomorphism(q, &p, &perm));
        prop_assert!(quantale::quantale_isomorphic(q, &p).unwrap().is_some());
        let r1 = report::report(&Structure::Quantale(q.clone())).unwrap();
        let r2 = report::report(&Structure::Quantale(p)).unwrap();
        prop_assert_eq!(r1, r2);
    }

    #[test]
    fn documents_round_trip(i in 0..585usize) {
        let (_, q) = &instances()[i % instances().len()];
        let doc = io::Document::from_structure(&Structure::Quantale(q.clone()));
        let text = io::render_document(&doc);
        let back = io::parse_document(&text).unwrap();
        prop_assert_eq!(io::render_document(&back), text);
        match back.to_structure().unwrap() {
            Structure::Quantale(p) => prop_assert_eq!(&p, q),
            other => prop_assert!(false, "wrong kind {}", other.kind()),
        }
    }

    #[test]
    fn support_is_determined_when_stable(i in 0..585usize) {
        let (_, q) = &instances()[i % instances().len()];
        if let Ok(s) = quantale::stable_support(q) {
            for a in q.elements() {
                // ςa = aa* ∧ e for a stable support
                prop_assert_eq!(s.apply(a), q.meet(q.aa_star(a), q.unit()));
                prop_assert!(q.leq(s.apply(a), q.unit()));
                prop_assert!(q.leq(a, q.mul(s.apply(a), a)));
            }
        }
    }

    #[test]
    fn pure_tensors_lie_below_mu_star(i in 0..585usize, a in 0..64usize, b in 0..64usize) {
        let (_, q) = &instances()[i % instances().len()];
        prop_assume!(q.size() <= 16);
        let Ok(t) = tensor::TensorSquare::new(q) else { return Ok(()) };
        let (a, b) = (a % q.size(), b % q.size());
        let ab = t.pure_tensor(a, b);
        prop_assert!(t.is_biideal(&ab));
        prop_assert_eq!(t.mu(&ab), q.mul(a, b));
        prop_assert!(ab.is_subset(&t.mu_star(q.mul(a, b))));
    }

    #[test]
    fn groupoid_set_products(i in 0..64usize, u in any::<u64>(), v in any::<u64>(), w in any::<u64>()) {
        let (_, g) = &family()[i % family().len()];
        let all = bits::full(g.size());
        let (u, v, w) = (u & all, v & all, w & all);
        prop_assert_eq!(g.set_product(g.set_product(u, v), w), g.set_product(u, g.set_product(v, w)));
        prop_assert_eq!(g.set_inverse(g.set_product(u, v)), g.set_product(g.set_inverse(v), g.set_inverse(u)));
        prop_assert_eq!(g.set_product(g.units_mask(), u), u);
        if g.is_gset(u) && g.is_gset(v) {
            prop_assert!(g.is_gset(g.set_product(u, v)));
            prop_assert_eq!(g.set_product(u, g.set_inverse(u)), g.set_dom(u));
        }
    }

    #[test]
    fn morphisms_are_lax(i in 0..64usize, j in 0..64usize, pick in any::<usize>()) {
        let small: Vec<&FinGroupoid> = family().iter().map(|(_, g)| g).filter(|g| g.size() <= 4).collect();
        let (src, tgt) = (small[i % small.len()], small[j % small.len()]);
        let ms = groupoid::all_morphisms(src, tgt);
        prop_assume!(!ms.is_empty());
        let f = &ms[pick % ms.len()];
        let r = groupoid::check_lax_morphism(src, tgt, f).unwrap();
        prop_assert!(r.lax.is_ok());
        let trivial_kernel = src.arrows().all(|x| !tgt.is_unit(f[x]) || src.is_unit(x));
        prop_assert_eq!(r.unit_preserved, trivial_kernel);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn symmetric_inverse_monoid_composes_relations(n in 1..=3usize, x in 0..1000usize, y in 0..1000usize) {
        let s = invsemi::symmetric_inverse_monoid(n).unwrap();
        let pbs = invsemi::partial_bijections(n).unwrap();
        let (x, y) = (x % s.size(), y % s.size());
        let g = |a: usize| invsemi::graph_mask(&pbs[a]);
        prop_assert_eq!(g(s.mul(x, y)), compose(g(x), g(y), n));
        prop_assert_eq!(s.nat_leq(x, y), g(x) & g(y) == g(x));
    }

    #[test]
    fn pair_groupoid_products_are_relational_composition(n in 1..=3usize, r in relation(3), t in relation(3)) {
        let g = FinGroupoid::pair(n);
        let all = bits::full(n * n);
        let (r, t) = (r & all, t & all);
        prop_assert_eq!(g.set_product(r, t), compose(r, t, n));
    }
}

#[test]
fn envelope_of_i2_is_closed_under_products() {
    let s = invsemi::symmetric_inverse_monoid(2).unwrap();
    let env = envelope::enveloping_quantale(&s).unwrap();
    envelope::verify_set_quantale(&s, &env, true).unwrap();
}
