//! Interval algebras `I(B)` and the cubic operations on them.
//!
//! `I(B)` is ordered by inclusion, so the top is `[0, 1]` and the vertices
//! `[p, p]` are the minimal elements. Δ is partial: `Δ(y, x)` is only defined
//! for `x <= y`.

use std::collections::BTreeSet;

use crate::boolean::{BoolAlg, Element};
use crate::error::{Error, Result};
use crate::packed::{Packed, PackedSpace};

/// Atom count above which whole-algebra interval enumeration is refused.
pub const MAX_ENUMERATED_ATOMS: usize = 16;

/// `[lo, hi]` with `lo <= hi`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    lo: Element,
    hi: Element,
}

impl Interval {
    pub fn new(lo: Element, hi: Element) -> Result<Self> {
        if !lo.try_leq(&hi)? {
            return Err(Error::NotAnInterval);
        }
        Ok(Interval { lo, hi })
    }

    pub fn top(alg: &BoolAlg) -> Self {
        Interval {
            lo: alg.bottom(),
            hi: alg.top(),
        }
    }

    pub fn vertex(p: Element) -> Self {
        Interval {
            lo: p.clone(),
            hi: p,
        }
    }

    pub fn lo(&self) -> &Element {
        &self.lo
    }

    pub fn hi(&self) -> &Element {
        &self.hi
    }

    pub fn is_top(&self) -> bool {
        self.lo.is_bottom() && self.hi.is_top()
    }

    pub fn is_vertex(&self) -> bool {
        self.lo == self.hi
    }

    fn same_parent(&self, other: &Interval) -> Result<()> {
        if self.lo.alg() == other.lo.alg() {
            Ok(())
        } else {
            Err(Error::MixedParents)
        }
    }

    /// Inclusion: `[a, b] <= [c, d]` iff `c <= a` and `b <= d`.
    pub fn try_leq(&self, other: &Interval) -> Result<bool> {
        Ok(other.lo.try_leq(&self.lo)? && self.hi.try_leq(&other.hi)?)
    }

    pub fn leq(&self, other: &Interval) -> bool {
        self.try_leq(other).expect("comparison across algebras")
    }

    /// `[a, b] ∨ [c, d] = [a ∧ c, b ∨ d]`.
    pub fn try_join(&self, other: &Interval) -> Result<Interval> {
        Ok(Interval {
            lo: self.lo.try_meet(&other.lo)?,
            hi: self.hi.try_join(&other.hi)?,
        })
    }

    pub fn join(&self, other: &Interval) -> Interval {
        self.try_join(other).expect("join across algebras")
    }

    /// Greatest lower bound `[a ∨ c, b ∧ d]`, if the intervals overlap.
    pub fn meet(&self, other: &Interval) -> Result<Option<Interval>> {
        self.same_parent(other)?;
        let lo = &self.lo | &other.lo;
        let hi = &self.hi & &other.hi;
        Ok(lo.leq(&hi).then_some(Interval { lo, hi }))
    }

    /// `Δ(self, x)` with `self = [a, b]`, `x = [c, d]`:
    /// `[a ∨ (b ∧ ¬d), b ∧ (a ∨ ¬c)]`.
    pub fn delta(&self, x: &Interval) -> Result<Interval> {
        if !x.try_leq(self)? {
            return Err(Error::NotComparable);
        }
        Ok(self.caret_unchecked(x))
    }

    /// `Δ(1, self) = [¬hi, ¬lo]`.
    pub fn delta_top(&self) -> Interval {
        Interval {
            lo: self.hi.complement(),
            hi: self.lo.complement(),
        }
    }

    fn caret_unchecked(&self, w: &Interval) -> Interval {
        let (a, b) = (&self.lo, &self.hi);
        Interval {
            lo: a | &(b & &!&w.hi),
            hi: b & &(a | &!&w.lo),
        }
    }

    /// `self ∧ Δ(self ∨ w, w)`, defined for any pair.
    pub fn caret(&self, w: &Interval) -> Result<Interval> {
        self.same_parent(w)?;
        Ok(self.caret_unchecked(w))
    }

    /// `xy = Δ(1, Δ(x ∨ y, y)) ∨ y`.
    pub fn implication(&self, y: &Interval) -> Result<Interval> {
        let xy = self.try_join(y)?;
        let d = xy.delta(y)?;
        Ok(d.delta_top().join(y))
    }

    /// `self ≼ b` iff `self <= Δ(self ∨ b, b)`.
    pub fn preceq(&self, b: &Interval) -> Result<bool> {
        let d = self.try_join(b)?.delta(b)?;
        Ok(self.leq(&d))
    }

    /// `self ≼ b` iff `b = (self ∨ b) ∧ (Δ(1, self) ∨ b)`.
    pub fn preceq_via_meet(&self, b: &Interval) -> Result<bool> {
        let left = self.try_join(b)?;
        let right = self.delta_top().join(b);
        Ok(left.meet(&right)?.as_ref() == Some(b))
    }
}

fn packed_space(alg: &BoolAlg) -> Result<PackedSpace> {
    let n = alg.atom_count();
    if n > MAX_ENUMERATED_ATOMS {
        return Err(Error::TooLarge {
            k: n,
            max: MAX_ENUMERATED_ATOMS,
            what: "interval enumeration (atoms)",
        });
    }
    Ok(PackedSpace::new(n))
}

/// All `3^n` intervals of `I(alg)` in canonical `(lo, hi)` order.
pub fn all_intervals(alg: &BoolAlg) -> Result<Vec<Interval>> {
    let sp = packed_space(alg)?;
    let mut v: Vec<Packed> = sp.all().collect();
    v.sort_unstable();
    Ok(v.into_iter().map(|p| sp.to_interval(alg, p)).collect())
}

/// `L_a = { w : a ≼ w }`.
pub fn localization(alg: &BoolAlg, a: &Interval) -> Result<BTreeSet<Interval>> {
    let sp = packed_space(alg)?;
    if !alg.owns(a.lo()) {
        return Err(Error::MixedParents);
    }
    let pa = sp.from_interval(a);
    Ok(sp
        .all()
        .filter(|&w| sp.preceq(pa, w))
        .map(|w| sp.to_interval(alg, w))
        .collect())
}

/// `L_a = { Δ(y, x) : a <= x <= y }`, straight from the definition.
pub fn localization_by_delta(alg: &BoolAlg, a: &Interval) -> Result<BTreeSet<Interval>> {
    let sp = packed_space(alg)?;
    if !alg.owns(a.lo()) {
        return Err(Error::MixedParents);
    }
    let pa = sp.from_interval(a);
    let above: Vec<Packed> = sp.all().filter(|&x| pa.leq(x)).collect();
    let mut out = BTreeSet::new();
    for &x in &above {
        for &y in &above {
            if x.leq(y) {
                out.insert(sp.to_interval(alg, y.delta(x)));
            }
        }
    }
    Ok(out)
}

/// `a ≼ b` iff `b ∈ L_a`, using [`localization_by_delta`].
pub fn preceq_via_localization(alg: &BoolAlg, a: &Interval, b: &Interval) -> Result<bool> {
    Ok(localization_by_delta(alg, a)?.contains(b))
}
