//! `Q ⊗_{ςQ} Q` through saturated bi-ideals, the quantal multiplication `μ` and its right
//! adjoint `μ*`.

use crate::quantale::{self, FinQuantale, QuantaleError};
use crate::Verdict;

/// A set of pairs of `Q × Q`, stored densely with pair `(a, b)` at `a * n + b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BiIdeal {
    n: usize,
    pairs: Vec<bool>,
}

impl BiIdeal {
    pub fn empty(n: usize) -> Self {
        BiIdeal { n, pairs: vec![false; n * n] }
    }

    pub fn full(n: usize) -> Self {
        BiIdeal { n, pairs: vec![true; n * n] }
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Self {
        let mut r = Self::empty(n);
        for &(a, b) in pairs {
            r.insert(a, b);
        }
        r
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.pairs[a * self.n + b]
    }

    fn insert(&mut self, a: usize, b: usize) -> bool {
        let slot = &mut self.pairs[a * self.n + b];
        let fresh = !*slot;
        *slot = true;
        fresh
    }

    pub fn len(&self) -> usize {
        self.pairs.iter().filter(|&&p| p).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        self.pairs.iter().enumerate().filter(|(_, &p)| p).map(move |(i, _)| (i / n, i % n))
    }

    pub fn is_subset(&self, other: &BiIdeal) -> bool {
        self.pairs.iter().zip(&other.pairs).all(|(&a, &b)| !a || b)
    }

    pub fn union(&self, other: &BiIdeal) -> BiIdeal {
        BiIdeal { n: self.n, pairs: self.pairs.iter().zip(&other.pairs).map(|(&a, &b)| a || b).collect() }
    }

    /// First pair of `other` missing from `self`.
    pub fn first_missing(&self, other: &BiIdeal) -> Option<(usize, usize)> {
        other.iter().find(|&(a, b)| !self.contains(a, b))
    }
}

/// The tensor square of a stably supported quantale over `ςQ = ↓e`.
#[derive(Debug, Clone)]
pub struct TensorSquare<'q> {
    q: &'q FinQuantale,
    below_e: Vec<usize>,
}

impl<'q> TensorSquare<'q> {
    pub fn new(q: &'q FinQuantale) -> Result<Self, QuantaleError> {
        quantale::stable_support(q).map_err(|_| QuantaleError::NotStablySupported)?;
        Ok(TensorSquare { q, below_e: q.below_unit() })
    }

    pub fn quantale(&self) -> &'q FinQuantale {
        self.q
    }

    pub fn bottom(&self) -> BiIdeal {
        self.close(&BiIdeal::empty(self.q.size()))
    }

    pub fn top(&self) -> BiIdeal {
        BiIdeal::full(self.q.size())
    }

    /// Least bi-ideal containing `seed`.
    pub fn close(&self, seed: &BiIdeal) -> BiIdeal {
        let q = self.q;
        let n = q.size();
        let l = q.lattice();
        let mut r = seed.clone();
        let bot = q.bottom();
        for x in 0..n {
            r.insert(x, bot);
            r.insert(bot, x);
        }
        loop {
            let mut changed = false;
            // down-closure
            let present: Vec<(usize, usize)> = r.iter().collect();
            for (a, b) in present {
                for a2 in l.below(a) {
                    for b2 in l.below(b) {
                        changed |= r.insert(a2, b2);
                    }
                }
            }
            // slot joins
            for b in 0..n {
                let j = l.join_all((0..n).filter(|&a| r.contains(a, b)));
                changed |= r.insert(j, b);
                let j = l.join_all((0..n).filter(|&a| r.contains(b, a)));
                changed |= r.insert(b, j);
            }
            // middle saturation
            for &z in &self.below_e {
                for a in 0..n {
                    for b in 0..n {
                        let (az, zb) = (q.mul(a, z), q.mul(z, b));
                        if r.contains(az, b) {
                            changed |= r.insert(a, zb);
                        }
                        if r.contains(a, zb) {
                            changed |= r.insert(az, b);
                        }
                    }
                }
            }
            if !changed {
                return r;
            }
        }
    }

    pub fn pure_tensor(&self, a: usize, b: usize) -> BiIdeal {
        self.close(&BiIdeal::from_pairs(self.q.size(), &[(a, b)]))
    }

    pub fn join(&self, r: &BiIdeal, s: &BiIdeal) -> BiIdeal {
        self.close(&r.union(s))
    }

    pub fn mu(&self, r: &BiIdeal) -> usize {
        self.q.join_all(r.iter().map(|(a, b)| self.q.mul(a, b)))
    }

    pub fn mu_star(&self, c: usize) -> BiIdeal {
        let q = self.q;
        let n = q.size();
        let mut r = BiIdeal::empty(n);
        for a in 0..n {
            for b in 0..n {
                if q.leq(q.mul(a, b), c) {
                    r.insert(a, b);
                }
            }
        }
        debug_assert_eq!(self.close(&r), r, "μ*(c) is saturated");
        r
    }

    pub fn is_biideal(&self, r: &BiIdeal) -> bool {
        self.close(r) == *r
    }
}

/// Failure of `μ*` to preserve a join.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicativityWitness {
    pub c: usize,
    pub d: usize,
    pub missing: (usize, usize),
}

/// `μ*` preserves the empty join and all binary joins.
pub fn check_multiplicative(q: &FinQuantale) -> Result<Result<(), MultiplicativityWitness>, QuantaleError> {
    let t = TensorSquare::new(q)?;
    let n = q.size();
    let stars: Vec<BiIdeal> = (0..n).map(|c| t.mu_star(c)).collect();
    let bot = q.bottom();
    if let Some(missing) = t.bottom().first_missing(&stars[bot]) {
        return Ok(Err(MultiplicativityWitness { c: bot, d: bot, missing }));
    }
    for c in 0..n {
        for d in c + 1..n {
            let joined = t.join(&stars[c], &stars[d]);
            if let Some(missing) = joined.first_missing(&stars[q.join(c, d)]) {
                return Ok(Err(MultiplicativityWitness { c, d, missing }));
            }
        }
    }
    Ok(Ok(()))
}

/// `μ(R) ≤ c ⟺ R ⊆ μ*(c)` for every pure tensor, the bottom and the top.
pub fn check_adjunction(q: &FinQuantale) -> Result<Verdict, QuantaleError> {
    let t = TensorSquare::new(q)?;
    let n = q.size();
    let stars: Vec<BiIdeal> = (0..n).map(|c| t.mu_star(c)).collect();
    for (c, s) in stars.iter().enumerate() {
        if !t.is_biideal(s) {
            return Ok(Verdict::no(vec![c]));
        }
    }
    let mut sample = vec![t.bottom(), t.top()];
    for a in 0..n {
        for b in 0..n {
            sample.push(t.pure_tensor(a, b));
        }
    }
    for (i, r) in sample.iter().enumerate() {
        let m = t.mu(r);
        for (c, s) in stars.iter().enumerate() {
            if q.leq(m, c) != r.is_subset(s) {
                return Ok(Verdict::no(vec![i, c]));
            }
        }
    }
    Ok(Verdict::yes())
}
