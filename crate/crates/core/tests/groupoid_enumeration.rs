//! Brute-force enumeration of groupoid tables on at most four arrows, compared with the
//! library's list of groupoids up to isomorphism.

use qgk::{groupoid, FinGroupoid};

/// A groupoid on `0..n` as raw tables: `dom`, `cod` (unit arrows) and `comp[x*n+y]`.
#[derive(Clone)]
struct Raw {
    n: usize,
    dom: Vec<usize>,
    cod: Vec<usize>,
    comp: Vec<Option<usize>>,
}

impl Raw {
    fn is_groupoid(&self) -> bool {
        let n = self.n;
        let c = |x: usize, y: usize| self.comp[x * n + y];
        for x in 0..n {
            // units act trivially
            if c(self.dom[x], x) != Some(x) || c(x, self.cod[x]) != Some(x) {
                return false;
            }
            if !(0..n).any(|y| c(x, y) == Some(self.dom[x]) && c(y, x) == Some(self.cod[x])) {
                return false;
            }
            for y in 0..n {
                let Some(xy) = c(x, y) else { continue };
                for z in 0..n {
                    if let Some(yz) = c(y, z) {
                        if c(xy, z) != c(x, yz) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn relabel(&self, p: &[usize]) -> Vec<usize> {
        let n = self.n;
        let mut code = vec![0; 2 * n + n * n];
        for x in 0..n {
            code[p[x]] = p[self.dom[x]];
            code[n + p[x]] = p[self.cod[x]];
            for y in 0..n {
                code[2 * n + p[x] * n + p[y]] = self.comp[x * n + y].map_or(n, |z| p[z]);
            }
        }
        code
    }

    fn canonical(&self, perms: &[Vec<usize>]) -> Vec<usize> {
        perms.iter().map(|p| self.relabel(p)).min().unwrap()
    }

    fn build(&self) -> FinGroupoid {
        let n = self.n;
        let mut units: Vec<usize> = self.dom.clone();
        units.sort();
        units.dedup();
        let mut triples = Vec::new();
        let mut inv = vec![0; n];
        for (x, slot) in inv.iter_mut().enumerate() {
            for y in 0..n {
                if let Some(z) = self.comp[x * n + y] {
                    triples.push((x, y, z));
                    if z == self.dom[x] {
                        *slot = y;
                    }
                }
            }
        }
        FinGroupoid::validate(n, &units, self.dom.clone(), self.cod.clone(), &triples, inv).unwrap()
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Every groupoid structure on `0..n`, deduplicated up to relabelling.
fn brute_force(n: usize) -> Vec<Raw> {
    let perms = permutations(n);
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for unit_mask in 1u32..(1 << n) {
        let units: Vec<usize> = (0..n).filter(|&i| unit_mask >> i & 1 == 1).collect();
        let others: Vec<usize> = (0..n).filter(|&i| unit_mask >> i & 1 == 0).collect();
        let k = units.len();
        // endpoints of the non-unit arrows
        for ends in 0..(k * k).pow(others.len() as u32) {
            let mut dom: Vec<usize> = (0..n).collect();
            let mut cod = dom.clone();
            let mut e = ends;
            for &x in &others {
                let pick = e % (k * k);
                e /= k * k;
                dom[x] = units[pick / k];
                cod[x] = units[pick % k];
            }
            let pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| cod[x] == dom[y]).collect();
            let choices: Vec<Vec<usize>> = pairs
                .iter()
                .map(|&(x, y)| match (unit_mask >> x & 1, unit_mask >> y & 1) {
                    (1, _) => vec![y],
                    (_, 1) => vec![x],
                    _ => (0..n).filter(|&z| dom[z] == dom[x] && cod[z] == cod[y]).collect(),
                })
                .collect();
            let mut idx = vec![0usize; pairs.len()];
            loop {
                let mut comp = vec![None; n * n];
                for (p, (&(x, y), c)) in pairs.iter().zip(&choices).enumerate() {
                    comp[x * n + y] = Some(c[idx[p]]);
                }
                let raw = Raw { n, dom: dom.clone(), cod: cod.clone(), comp };
                if raw.is_groupoid() && seen.insert(raw.canonical(&perms)) {
                    out.push(raw);
                }
                // odometer
                let mut p = 0;
                while p < idx.len() {
                    idx[p] += 1;
                    if idx[p] < choices[p].len() {
                        break;
                    }
                    idx[p] = 0;
                    p += 1;
                }
                if p == idx.len() {
                    break;
                }
            }
        }
    }
    out
}

#[test]
fn brute_force_counts_match_the_library() {
    let library = groupoid::groupoids_up_to(4).unwrap();
    for n in 1..=4 {
        let raws = brute_force(n);
        let ours: Vec<&FinGroupoid> = library.iter().map(|(_, g)| g).filter(|g| g.size() == n).collect();
        assert_eq!(raws.len(), ours.len(), "groupoids on {n} arrows");
        for raw in &raws {
            let g = raw.build();
            let matches = ours.iter().filter(|h| groupoid::groupoid_isomorphic(&g, h).unwrap().is_some()).count();
            assert_eq!(matches, 1, "brute-force groupoid on {n} arrows");
        }
    }
    assert_eq!([1, 2, 3, 4].map(|n| brute_force(n).len()), [1, 2, 3, 7]);
}
