//! Word-packed interval kernel for algebras with at most 64 atoms.
//!
//! The exhaustive routines (interval enumeration, localization filters,
//! closure) run millions to billions of interval operations; they work on
//! bare `u64` masks here and convert to [`Interval`](crate::cubic::Interval)
//! only at the boundary.

use crate::boolean::BoolAlg;
use crate::cubic::Interval;

/// An interval `[lo, hi]` of atom masks with `lo ⊆ hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Packed {
    pub lo: u64,
    pub hi: u64,
}

impl Packed {
    #[inline]
    pub fn new(lo: u64, hi: u64) -> Self {
        debug_assert_eq!(lo & !hi, 0, "not an interval");
        Packed { lo, hi }
    }

    /// Inclusion order.
    #[inline]
    pub fn leq(self, other: Packed) -> bool {
        other.lo & !self.lo == 0 && self.hi & !other.hi == 0
    }

    #[inline]
    pub fn join(self, other: Packed) -> Packed {
        Packed {
            lo: self.lo & other.lo,
            hi: self.hi | other.hi,
        }
    }

    /// `Δ(self, x)`; caller guarantees `x <= self`.
    #[inline]
    pub fn delta(self, x: Packed) -> Packed {
        debug_assert!(x.leq(self));
        self.caret(x)
    }

    /// `self ∧ Δ(self ∨ w, w)`, which is total. On comparable arguments it
    /// coincides with `Δ(self, w)`.
    #[inline]
    pub fn caret(self, w: Packed) -> Packed {
        let (a, b) = (self.lo, self.hi);
        Packed {
            lo: a | (b & !w.hi),
            hi: b & (a | !w.lo),
        }
    }

    #[inline]
    pub fn meet(self, other: Packed) -> Option<Packed> {
        let lo = self.lo | other.lo;
        let hi = self.hi & other.hi;
        (lo & !hi == 0).then_some(Packed { lo, hi })
    }
}

/// The interval algebra `I(B)` of a Boolean algebra with `n <= 64` atoms.
#[derive(Clone, Debug)]
pub struct PackedSpace {
    n: usize,
    full: u64,
    /// `weight[c][byte]` = Σ 3^(8c + i) over the set bits `i` of `byte`.
    weight: Vec<[u64; 256]>,
}

/// Largest atom count for which [`PackedSpace::index`] is available.
pub const MAX_INDEXED_ATOMS: usize = 40;

impl PackedSpace {
    pub fn new(n: usize) -> Self {
        assert!(n <= 64, "packed intervals hold at most 64 atoms");
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let chunks = if n <= MAX_INDEXED_ATOMS {
            n.div_ceil(8)
        } else {
            0
        };
        let weight = (0..chunks)
            .map(|c| {
                let mut row = [0u64; 256];
                for (byte, slot) in row.iter_mut().enumerate() {
                    *slot = (0..8)
                        .filter(|i| byte >> i & 1 == 1 && 8 * c + i < n)
                        .map(|i| 3u64.pow((8 * c + i) as u32))
                        .sum();
                }
                row
            })
            .collect();
        PackedSpace { n, full, weight }
    }

    pub fn atoms(&self) -> usize {
        self.n
    }

    pub fn full(&self) -> u64 {
        self.full
    }

    pub fn top(&self) -> Packed {
        Packed {
            lo: 0,
            hi: self.full,
        }
    }

    /// `3^n`, the number of intervals.
    pub fn size(&self) -> u64 {
        3u64.pow(self.n as u32)
    }

    #[inline]
    fn weigh(&self, mask: u64) -> u64 {
        self.weight
            .iter()
            .enumerate()
            .map(|(c, row)| row[(mask >> (8 * c) & 0xff) as usize])
            .sum()
    }

    /// Dense index in `0..3^n`: atom `i` contributes `0` outside `hi`,
    /// `3^i` in `hi \ lo` and `2·3^i` in `lo`.
    #[inline]
    pub fn index(&self, p: Packed) -> u64 {
        debug_assert!(self.n <= MAX_INDEXED_ATOMS);
        self.weigh(p.lo) + self.weigh(p.hi)
    }

    pub fn from_index(&self, mut idx: u64) -> Packed {
        let (mut lo, mut hi) = (0, 0);
        for i in 0..self.n {
            match idx % 3 {
                1 => hi |= 1 << i,
                2 => {
                    lo |= 1 << i;
                    hi |= 1 << i;
                }
                _ => {}
            }
            idx /= 3;
        }
        Packed { lo, hi }
    }

    /// Every interval, in dense-index order.
    pub fn all(&self) -> impl Iterator<Item = Packed> + '_ {
        (0..self.size()).map(|i| self.from_index(i))
    }

    #[inline]
    pub fn delta_top(&self, x: Packed) -> Packed {
        Packed {
            lo: !x.hi & self.full,
            hi: !x.lo & self.full,
        }
    }

    /// `xy = Δ(1, Δ(x ∨ y, y)) ∨ y`.
    #[inline]
    pub fn implication(&self, x: Packed, y: Packed) -> Packed {
        self.delta_top(x.join(y).delta(y)).join(y)
    }

    /// `a ≼ b` iff `a <= Δ(a ∨ b, b)`.
    #[inline]
    pub fn preceq(&self, a: Packed, b: Packed) -> bool {
        a.leq(a.join(b).delta(b))
    }

    pub fn from_interval(&self, x: &Interval) -> Packed {
        Packed {
            lo: x.lo().bits().expect("packed space needs <= 64 atoms"),
            hi: x.hi().bits().expect("packed space needs <= 64 atoms"),
        }
    }

    pub fn to_interval(&self, alg: &BoolAlg, p: Packed) -> Interval {
        debug_assert_eq!(alg.atom_count(), self.n);
        Interval::new(alg.element_from_bits(p.lo), alg.element_from_bits(p.hi))
            .expect("packed interval has lo <= hi")
    }
}

/// Membership set over `I(B)`: a dense bitmap when the index space is small,
/// otherwise a hash set.
#[derive(Clone, Debug)]
pub enum PackedSet {
    Dense {
        space_atoms: usize,
        bits: Vec<u64>,
        len: usize,
    },
    Sparse(std::collections::HashSet<Packed>),
}

/// Atom count up to which [`PackedSet`] uses a bitmap (3^16 bits ≈ 5.4 MB).
pub const DENSE_SET_ATOMS: usize = 16;

impl PackedSet {
    pub fn new(space: &PackedSpace) -> Self {
        if space.atoms() <= DENSE_SET_ATOMS {
            PackedSet::Dense {
                space_atoms: space.atoms(),
                bits: vec![0; space.size().div_ceil(64) as usize],
                len: 0,
            }
        } else {
            PackedSet::Sparse(Default::default())
        }
    }

    /// Returns `true` if `p` was not yet present.
    #[inline]
    pub fn insert(&mut self, space: &PackedSpace, p: Packed) -> bool {
        match self {
            PackedSet::Dense { bits, len, .. } => {
                let i = space.index(p);
                let (w, b) = ((i / 64) as usize, i % 64);
                let fresh = bits[w] >> b & 1 == 0;
                bits[w] |= 1 << b;
                *len += fresh as usize;
                fresh
            }
            PackedSet::Sparse(s) => s.insert(p),
        }
    }

    #[inline]
    pub fn contains(&self, space: &PackedSpace, p: Packed) -> bool {
        match self {
            PackedSet::Dense {
                bits, space_atoms, ..
            } => {
                debug_assert_eq!(*space_atoms, space.atoms());
                let i = space.index(p);
                bits[(i / 64) as usize] >> (i % 64) & 1 == 1
            }
            PackedSet::Sparse(s) => s.contains(&p),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            PackedSet::Dense { len, .. } => *len,
            PackedSet::Sparse(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trips() {
        let sp = PackedSpace::new(5);
        let mut seen = vec![false; sp.size() as usize];
        for (i, p) in sp.all().enumerate() {
            assert_eq!(p.lo & !p.hi, 0);
            assert_eq!(sp.index(p), i as u64);
            seen[i] = true;
        }
        assert!(seen.into_iter().all(|s| s));
    }

    #[test]
    fn index_wide_space() {
        let sp = PackedSpace::new(20);
        let p = Packed::new(0b1000_0000_0000_0000_0001, 0b1100_0000_0001_0000_0001);
        assert_eq!(sp.from_index(sp.index(p)), p);
    }

    #[test]
    fn set_modes_agree() {
        let small = PackedSpace::new(4);
        let mut dense = PackedSet::new(&small);
        let mut sparse = PackedSet::Sparse(Default::default());
        for p in small.all().step_by(3) {
            assert!(dense.insert(&small, p));
            assert!(sparse.insert(&small, p));
            assert!(!dense.insert(&small, p));
        }
        assert_eq!(dense.len(), sparse.len());
        for p in small.all() {
            assert_eq!(dense.contains(&small, p), sparse.contains(&small, p));
        }
    }

    #[test]
    fn delta_examples() {
        let sp = PackedSpace::new(3);
        let y = Packed::new(0b001, 0b011);
        assert_eq!(y.delta(y), y);
        let x = Packed::new(0b001, 0b001);
        assert_eq!(sp.top().delta(x), Packed::new(0b110, 0b110));
        assert_eq!(y.delta(y.delta(x)), x);
    }
}
