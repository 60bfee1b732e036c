//! Small helpers for subsets of carriers with at most 64 points, stored as `u64` masks.

pub type Mask = u64;

/// Iterates the set bits of `m` in increasing order.
pub fn ones(mut m: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

pub fn bit(i: usize) -> Mask {
    1u64 << i
}

pub fn has(m: Mask, i: usize) -> bool {
    m >> i & 1 == 1
}

pub fn full(n: usize) -> Mask {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub fn from_iter<I: IntoIterator<Item = usize>>(it: I) -> Mask {
    it.into_iter().fold(0, |m, i| m | bit(i))
}

/// Sort key giving "sorted set representation" order: by cardinality, then lexicographically
/// on the increasing list of members.
pub fn canonical_key(m: Mask) -> (u32, Vec<usize>) {
    (m.count_ones(), ones(m).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ones_roundtrip() {
        let m = 0b1011_0010;
        assert_eq!(ones(m).collect::<Vec<_>>(), vec![1, 4, 5, 7]);
        assert_eq!(from_iter(ones(m)), m);
        assert_eq!(full(3), 7);
        assert_eq!(full(64), u64::MAX);
    }
}
