//! Signed sets `⟨A, B⟩` over `{0..k}`: disjoint pairs of index sets.
//!
//! `S(X)` is the cubic algebra with top `⟨∅, ∅⟩`, join `⟨A ∩ C, B ∩ D⟩` and
//! `Δ(⟨A, B⟩, ⟨C, D⟩) = ⟨A ∪ (D \ B), B ∪ (C \ A)⟩` for `⟨C, D⟩ <= ⟨A, B⟩`:
//! the coordinates fixed by `⟨A, B⟩` stay, the others of `⟨C, D⟩` flip. It is
//! isomorphic to `I(℘(X))` via `⟨A, B⟩ ↦ [A, X \ B]`.

use std::fmt;

use crate::boolean::BoolAlg;
use crate::cubic::Interval;
use crate::error::{Error, Result};

/// Index sets are bit masks, so `X` has at most 64 points.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedSet {
    a0: u64,
    a1: u64,
}

impl SignedSet {
    pub fn new(a0: u64, a1: u64) -> Result<Self> {
        if a0 & a1 != 0 {
            return Err(Error::NotDisjoint);
        }
        Ok(SignedSet { a0, a1 })
    }

    pub fn from_indices(
        a0: impl IntoIterator<Item = usize>,
        a1: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let mask = |it: &mut dyn Iterator<Item = usize>| it.fold(0u64, |m, i| m | 1 << i);
        Self::new(mask(&mut a0.into_iter()), mask(&mut a1.into_iter()))
    }

    pub const TOP: SignedSet = SignedSet { a0: 0, a1: 0 };

    pub fn a0(self) -> u64 {
        self.a0
    }

    pub fn a1(self) -> u64 {
        self.a1
    }

    pub fn is_top(self) -> bool {
        self == Self::TOP
    }

    pub fn support(self) -> u64 {
        self.a0 | self.a1
    }

    /// `⟨A, B⟩ <= ⟨C, D⟩` iff `C ⊆ A` and `D ⊆ B`.
    pub fn leq(self, other: SignedSet) -> bool {
        other.a0 & !self.a0 == 0 && other.a1 & !self.a1 == 0
    }

    pub fn join(self, other: SignedSet) -> SignedSet {
        SignedSet {
            a0: self.a0 & other.a0,
            a1: self.a1 & other.a1,
        }
    }

    /// `Δ(self, x)` for `x <= self`.
    pub fn delta(self, x: SignedSet) -> Result<SignedSet> {
        if !x.leq(self) {
            return Err(Error::NotComparable);
        }
        Ok(SignedSet {
            a0: self.a0 | (x.a1 & !self.a1),
            a1: self.a1 | (x.a0 & !self.a0),
        })
    }

    /// `⟨A, B⟩ ↦ ⟨B, A⟩`, which is `Δ(1, ·)`.
    pub fn swap(self) -> SignedSet {
        SignedSet {
            a0: self.a1,
            a1: self.a0,
        }
    }

    /// Every signed set over `{0..n-1}`, `3^n` of them.
    pub fn all(n: usize) -> impl Iterator<Item = SignedSet> {
        assert!(n < 40, "signed-set enumeration limited to 39 points");
        (0..3u64.pow(n as u32)).map(move |mut idx| {
            let mut s = SignedSet::TOP;
            for i in 0..n {
                match idx % 3 {
                    1 => s.a0 |= 1 << i,
                    2 => s.a1 |= 1 << i,
                    _ => {}
                }
                idx /= 3;
            }
            s
        })
    }
}

fn fmt_mask(f: &mut fmt::Formatter<'_>, m: u64) -> fmt::Result {
    write!(f, "{{")?;
    let mut first = true;
    for i in (0..64).filter(|i| m >> i & 1 == 1) {
        if !first {
            write!(f, ",")?;
        }
        write!(f, "{i}")?;
        first = false;
    }
    write!(f, "}}")
}

impl fmt::Debug for SignedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        fmt_mask(f, self.a0)?;
        write!(f, ", ")?;
        fmt_mask(f, self.a1)?;
        write!(f, ">")
    }
}

impl fmt::Display for SignedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The isomorphism `S(X) ≅ I(℘(X))` for `X = {0..n-1}`.
#[derive(Clone, Debug)]
pub struct SignedIso {
    pub powerset: BoolAlg,
}

impl SignedIso {
    pub fn new(n: usize) -> Self {
        SignedIso {
            powerset: BoolAlg::powerset(n),
        }
    }

    fn universe(&self) -> u64 {
        let n = self.powerset.atom_count();
        if n == 64 {
            u64::MAX
        } else {
            (1 << n) - 1
        }
    }

    pub fn to_interval(&self, s: SignedSet) -> Result<Interval> {
        let u = self.universe();
        if s.support() & !u != 0 {
            return Err(Error::IndexOutOfRange {
                index: 63 - s.support().leading_zeros() as usize,
                limit: self.powerset.atom_count(),
            });
        }
        Interval::new(
            self.powerset.element_from_bits(s.a0),
            self.powerset.element_from_bits(u & !s.a1),
        )
    }

    pub fn from_interval(&self, x: &Interval) -> Result<SignedSet> {
        if !self.powerset.owns(x.lo()) {
            return Err(Error::MixedParents);
        }
        let lo = x.lo().bits().expect("powerset fits a word");
        let hi = x.hi().bits().expect("powerset fits a word");
        SignedSet::new(lo, self.universe() & !hi)
    }
}
