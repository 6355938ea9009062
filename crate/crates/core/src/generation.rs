//! Cubic closure of the generator intervals, and the atom bookkeeping
//! (`R` map, `J` intervals, association) behind the generation theorem.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::boolean::{BoolAlg, Element};
use crate::cubic::Interval;
use crate::error::{Error, Result};
use crate::free::{restrict_label, FreeInstance, MAX_BUILD_K};
use crate::packed::{Packed, PackedSet, PackedSpace};
use crate::signed::SignedSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosureOptions {
    /// Stop once the set holds more than this many elements.
    pub limit: Option<usize>,
    pub parallel: bool,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        ClosureOptions {
            limit: None,
            parallel: cfg!(feature = "parallel"),
        }
    }
}

/// Progress after one wave of pair expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WaveInfo {
    pub wave: usize,
    pub added: usize,
    pub total: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackedClosure {
    /// Sorted.
    pub elements: Vec<Packed>,
    pub complete: bool,
    pub waves: usize,
}

fn expand(space: &PackedSpace, all: &[Packed], seen: &PackedSet, ix: usize) -> Vec<Packed> {
    let x = all[ix];
    let mut out = Vec::new();
    let mut push = |p: Packed| {
        if !seen.contains(space, p) {
            out.push(p);
        }
    };
    for &y in &all[..=ix] {
        push(x.join(y));
        if y.leq(x) {
            push(x.delta(y));
        }
        if x.leq(y) {
            push(y.delta(x));
        }
    }
    out
}

/// Closure of `seed ∪ {1}` under join and comparable `Δ`.
///
/// Works in waves: every pair with at least one member from the previous
/// wave is expanded, and the new elements are appended in sorted order.
pub fn packed_closure(
    space: &PackedSpace,
    seed: &[Packed],
    opts: ClosureOptions,
    mut on_wave: impl FnMut(WaveInfo),
) -> PackedClosure {
    let mut seen = PackedSet::new(space);
    let mut all: Vec<Packed> = Vec::new();
    let mut start: Vec<Packed> = seed.to_vec();
    start.push(space.top());
    start.sort_unstable();
    for p in start {
        if seen.insert(space, p) {
            all.push(p);
        }
    }
    let mut frontier = 0;
    let mut waves = 0;
    while frontier < all.len() {
        if opts.limit.is_some_and(|l| all.len() > l) {
            all.sort_unstable();
            return PackedClosure {
                elements: all,
                complete: false,
                waves,
            };
        }
        let end = all.len();
        let mut fresh: Vec<Packed> = if opts.parallel {
            expand_parallel(space, &all, &seen, frontier..end)
        } else {
            (frontier..end)
                .flat_map(|ix| expand(space, &all, &seen, ix))
                .collect()
        };
        fresh.sort_unstable();
        fresh.dedup();
        let added = fresh.len();
        for p in fresh {
            seen.insert(space, p);
            all.push(p);
        }
        frontier = end;
        waves += 1;
        on_wave(WaveInfo {
            wave: waves,
            added,
            total: all.len(),
        });
    }
    all.sort_unstable();
    PackedClosure {
        elements: all,
        complete: true,
        waves,
    }
}

#[cfg(feature = "parallel")]
fn expand_parallel(
    space: &PackedSpace,
    all: &[Packed],
    seen: &PackedSet,
    range: std::ops::Range<usize>,
) -> Vec<Packed> {
    use rayon::prelude::*;
    range
        .into_par_iter()
        .map(|ix| {
            let mut v = expand(space, all, seen, ix);
            v.sort_unstable();
            v.dedup();
            v
        })
        .reduce(Vec::new, |mut a, b| {
            a.extend(b);
            a
        })
}

#[cfg(not(feature = "parallel"))]
fn expand_parallel(
    space: &PackedSpace,
    all: &[Packed],
    seen: &PackedSet,
    range: std::ops::Range<usize>,
) -> Vec<Packed> {
    range.flat_map(|ix| expand(space, all, seen, ix)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Closure {
    pub elements: BTreeSet<Interval>,
    pub complete: bool,
}

/// [`packed_closure`] on intervals of an algebra with at most 64 atoms.
pub fn cubic_closure(seed: &[Interval], opts: ClosureOptions) -> Result<Closure> {
    let first = seed.first().ok_or(Error::EmptyGeneratingSet)?;
    let alg_id = first.lo().alg();
    if seed.iter().any(|x| x.lo().alg() != alg_id) {
        return Err(Error::MixedParents);
    }
    let n = first.lo().parent_atom_count();
    if n > 64 {
        return Err(Error::TooLarge {
            k: n,
            max: 64,
            what: "closure over atoms",
        });
    }
    let space = PackedSpace::new(n);
    let packed: Vec<Packed> = seed.iter().map(|x| space.from_interval(x)).collect();
    let c = packed_closure(&space, &packed, opts, |_| {});
    let template = first.lo();
    Ok(Closure {
        elements: c
            .elements
            .into_iter()
            .map(|p| {
                Interval::new(
                    template.sibling_from_bits(p.lo),
                    template.sibling_from_bits(p.hi),
                )
                .expect("packed interval")
            })
            .collect(),
        complete: c.complete,
    })
}

/// An interval as two atom-index lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalJson {
    pub lo: Vec<usize>,
    pub hi: Vec<usize>,
}

impl IntervalJson {
    pub fn from_packed(p: Packed) -> Self {
        let bits = |m: u64| (0..64).filter(|i| m >> i & 1 == 1).collect();
        IntervalJson {
            lo: bits(p.lo),
            hi: bits(p.hi),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenerationReport {
    pub k: usize,
    pub closure_size: usize,
    pub lx_size: usize,
    pub equal: bool,
    pub witness: Option<IntervalJson>,
}

/// Compares the closure of `{I_0..I_k}` with `L(X)`.
pub fn verify_generation(
    inst: &FreeInstance,
    opts: ClosureOptions,
    on_wave: impl FnMut(WaveInfo),
) -> Result<GenerationReport> {
    let space = inst.packed_space_for_enumeration()?;
    let lx = inst.lx_packed()?;
    let gens = inst.packed_generators(&space);
    let c = packed_closure(&space, &gens, opts, on_wave);
    if !c.complete {
        return Err(Error::ClosureLimit(opts.limit.unwrap_or(0)));
    }
    let witness = first_difference(&c.elements, &lx);
    Ok(GenerationReport {
        k: inst.k(),
        closure_size: c.elements.len(),
        lx_size: lx.len(),
        equal: witness.is_none(),
        witness: witness.map(IntervalJson::from_packed),
    })
}

/// Least element of the symmetric difference of two sorted lists.
fn first_difference(a: &[Packed], b: &[Packed]) -> Option<Packed> {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
            std::cmp::Ordering::Less => return Some(a[i]),
            std::cmp::Ordering::Greater => return Some(b[j]),
        }
    }
    a.get(i).or(b.get(j)).copied()
}

fn check_atom(inst: &FreeInstance, atom: &Element) -> Result<()> {
    if !inst.alg().owns(atom) {
        return Err(Error::MixedParents);
    }
    if !atom.is_atom() {
        return Err(Error::NotAnAtom);
    }
    Ok(())
}

/// `R(a) = ⟨{j : a <= s_j}, {j : a <= ¬t_j}⟩`.
pub fn r_map(inst: &FreeInstance, atom: &Element) -> Result<SignedSet> {
    check_atom(inst, atom)?;
    let (mut a0, mut a1) = (0u64, 0u64);
    for j in 0..=inst.k() {
        if atom.leq(inst.s(j)) {
            a0 |= 1 << j;
        }
        if atom.try_meet(inst.t(j))?.is_bottom() {
            a1 |= 1 << j;
        }
    }
    SignedSet::new(a0, a1)
}

/// `R` by induction along the splitting of atoms: for every `B_k` atom in
/// index order. The one atom of `B_0` gets `⟨∅, {0}⟩`; a child `a ∧ s_k`
/// adds `k` to the first set, `a ∧ ¬t_k` adds it to the second,
/// `a ∧ ¬s_k ∧ t_k` keeps `R(a)`, and the new atom gets `⟨{k}, ∅⟩`.
pub fn r_map_inductive(k: usize) -> Result<Vec<SignedSet>> {
    if k > MAX_BUILD_K {
        return Err(Error::TooLarge {
            k,
            max: MAX_BUILD_K,
            what: "free Boolean algebra construction",
        });
    }
    let mut prev = FreeInstance::build(0)?;
    let mut r = vec![SignedSet::from_indices([], [0])?];
    for level in 1..=k {
        let next = FreeInstance::build(level)?;
        let labels = next.alg().atom_labels();
        let (s_pos, t_pos) = (level, 2 * level + 1);
        let mut out = Vec::with_capacity(labels.len());
        for &label in labels {
            let bit = 1u64 << level;
            let rv = match prev.alg().atom_with_label(restrict_label(level, label)) {
                None => SignedSet::new(bit, 0)?,
                Some(parent) => {
                    let base = r[parent];
                    if label.is_positive(s_pos) {
                        SignedSet::new(base.a0() | bit, base.a1())?
                    } else if !label.is_positive(t_pos) {
                        SignedSet::new(base.a0(), base.a1() | bit)?
                    } else {
                        base
                    }
                }
            };
            out.push(rv);
        }
        r = out;
        prev = next;
    }
    Ok(r)
}

fn indices(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask >> i & 1 == 1)
}

/// The atom with the given `R` value, written as an explicit meet. With
/// `j` the least index in either set: for `j > 0`
/// `t_0 ∧ ⋀_{i<j} ¬s_i ∧ ⋀_{p ∈ R_0} s_p ∧ ⋀_{q ∈ R_1} ¬t_q ∧ ⋀_{r > j, r ∉ R_0 ∪ R_1} (¬s_r ∧ t_r)`,
/// and for `j = 0` (so `0 ∈ R_1`) the same without the leading `t_0` factor.
pub fn atom_from_shape(inst: &FreeInstance, s: SignedSet) -> Result<Element> {
    if s.is_top() {
        return Err(Error::TopSignedSet);
    }
    let k = inst.k();
    if s.support() >> (k + 1) != 0 {
        return Err(Error::IndexOutOfRange {
            index: 63 - s.support().leading_zeros() as usize,
            limit: k,
        });
    }
    let j = s.support().trailing_zeros() as usize;
    let mut e = inst.alg().top();
    if j > 0 {
        e = e & inst.t(0);
        for i in 0..j {
            e = e & &!inst.s(i);
        }
    }
    for p in indices(s.a0()) {
        e = e & inst.s(p);
    }
    for q in indices(s.a1()) {
        e = e & &!inst.t(q);
    }
    for r in (j + 1..=k).filter(|r| s.support() >> r & 1 == 0) {
        e = e & &inst.t(r).minus(inst.s(r));
    }
    Ok(e)
}

/// An atom whose `R` value is `s` or its swap. If `0` is in the support it
/// is put on the second side; otherwise the least index goes on the first.
pub fn atom_for_signed_set(inst: &FreeInstance, s: SignedSet) -> Result<Element> {
    if s.is_top() {
        return Err(Error::TopSignedSet);
    }
    let j = s.support().trailing_zeros();
    let oriented = if j == 0 {
        if s.a0() & 1 == 1 {
            s.swap()
        } else {
            s
        }
    } else if s.a0() >> j & 1 == 1 {
        s
    } else {
        s.swap()
    };
    let a = atom_from_shape(inst, oriented)?;
    if !a.is_atom() {
        return Err(Error::NotAnAtom);
    }
    Ok(a)
}

/// `J(A_0, A_1) = ⋁_{j ∈ A_0} I_j ∨ ⋁_{l ∈ A_1} Δ(1, I_l)`; `J(∅, ∅) = 1`.
pub fn j_interval(inst: &FreeInstance, s: SignedSet) -> Result<Interval> {
    let k = inst.k();
    if s.support() >> (k + 1) != 0 {
        return Err(Error::IndexOutOfRange {
            index: 63 - s.support().leading_zeros() as usize,
            limit: k,
        });
    }
    let gens = inst.generator_intervals();
    let terms: Vec<Interval> = indices(s.a0())
        .map(|j| gens[j].clone())
        .chain(indices(s.a1()).map(|l| gens[l].delta_top()))
        .collect();
    Ok(terms
        .into_iter()
        .reduce(|a, b| a.join(&b))
        .unwrap_or_else(|| Interval::top(inst.alg())))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AssociationKind {
    Left,
    Right,
    Both,
    None,
}

impl AssociationKind {
    pub fn is_associated(self) -> bool {
        self != AssociationKind::None
    }
}

/// Left: `a <= lo`; right: `a <= ¬hi`.
pub fn associated(alg: &BoolAlg, atom: &Element, x: &Interval) -> Result<AssociationKind> {
    if !alg.owns(atom) || !alg.owns(x.lo()) {
        return Err(Error::MixedParents);
    }
    if !atom.is_atom() {
        return Err(Error::NotAnAtom);
    }
    let left = atom.leq(x.lo());
    let right = atom.try_meet(x.hi())?.is_bottom();
    Ok(match (left, right) {
        (true, true) => AssociationKind::Both,
        (true, false) => AssociationKind::Left,
        (false, true) => AssociationKind::Right,
        (false, false) => AssociationKind::None,
    })
}
