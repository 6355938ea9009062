//! Finite Boolean algebras in atom-set representation.
//!
//! A [`BoolAlg`] is determined by its atoms; every [`Element`] is the set of
//! atoms below it. Atoms carry sign-vector labels over the algebra's named
//! generators, so a generator is exactly the set of atoms whose label is `+1`
//! at that generator's position.
//!
//! Canonical atom order is lexicographic over the generator-name list with
//! `+1` before `-1`. Quotients keep the relative order of surviving atoms.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{BitAnd, BitOr, Not};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Largest generator list accepted by [`BoolAlg::free`] (2^20 atoms).
pub const MAX_FREE_GENERATORS: usize = 20;

/// Identity of a constructed algebra. Two separately built algebras never
/// share an id, even if they are isomorphic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgId(u64);

static NEXT_ALG_ID: AtomicU64 = AtomicU64::new(1);

impl AlgId {
    fn fresh() -> Self {
        AlgId(NEXT_ALG_ID.fetch_add(1, AtomicOrdering::Relaxed))
    }
}

/// Fixed-width bit set over atom indices. Sets of at most 64 atoms are stored
/// inline in a single word; wider sets spill to the heap.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AtomSet {
    len: usize,
    words: SmallVec<[u64; 1]>,
}

fn word_count(len: usize) -> usize {
    len.div_ceil(64).max(1)
}

fn tail_mask(len: usize) -> u64 {
    match len % 64 {
        0 if len == 0 => 0,
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

impl AtomSet {
    pub fn empty(len: usize) -> Self {
        AtomSet {
            len,
            words: SmallVec::from_elem(0, word_count(len)),
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = AtomSet {
            len,
            words: SmallVec::from_elem(u64::MAX, word_count(len)),
        };
        s.trim();
        s
    }

    /// Builds a set of width `len <= 64` from a packed mask.
    pub fn from_u64(len: usize, bits: u64) -> Self {
        assert!(len <= 64, "packed atom sets hold at most 64 atoms");
        let mut s = AtomSet {
            len,
            words: SmallVec::from_elem(bits, 1),
        };
        s.trim();
        s
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = AtomSet::empty(len);
        for i in indices {
            s.insert(i);
        }
        s
    }

    fn trim(&mut self) {
        let last = self.words.len() - 1;
        self.words[last] &= tail_mask(self.len);
    }

    pub fn len(&self) -> usize {
        self.len
    }

    /// Packed form, when the width fits in one word.
    pub fn as_u64(&self) -> Option<u64> {
        (self.len <= 64).then(|| self.words[0])
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len, "atom index {i} out of range {}", self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &AtomSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    fn zip_with(&self, other: &AtomSet, f: impl Fn(u64, u64) -> u64) -> AtomSet {
        debug_assert_eq!(self.len, other.len);
        AtomSet {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn intersection(&self, other: &AtomSet) -> AtomSet {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn union(&self, other: &AtomSet) -> AtomSet {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn complement(&self) -> AtomSet {
        let mut s = AtomSet {
            len: self.len,
            words: self.words.iter().map(|w| !w).collect(),
        };
        s.trim();
        s
    }
}

/// Numeric order of the bit vector (highest atom index most significant).
impl Ord for AtomSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len
            .cmp(&other.len)
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for AtomSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A member of a finite Boolean algebra: the set of atoms below it, tagged
/// with the identity of its parent algebra.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    alg: AlgId,
    atoms: AtomSet,
}

impl Element {
    pub fn alg(&self) -> AlgId {
        self.alg
    }

    pub fn atoms(&self) -> &AtomSet {
        &self.atoms
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.count()
    }

    /// Atom count of the parent algebra.
    pub fn parent_atom_count(&self) -> usize {
        self.atoms.len()
    }

    /// Another element of the same algebra, from a mask of its first 64 atoms.
    pub fn sibling_from_bits(&self, bits: u64) -> Element {
        Element {
            alg: self.alg,
            atoms: AtomSet::from_u64(self.atoms.len(), bits),
        }
    }

    pub fn is_bottom(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn is_top(&self) -> bool {
        self.atoms.count() == self.atoms.len()
    }

    pub fn is_atom(&self) -> bool {
        self.atoms.count() == 1
    }

    /// Packed atom mask when the parent has at most 64 atoms.
    pub fn bits(&self) -> Option<u64> {
        self.atoms.as_u64()
    }

    fn check(&self, other: &Element) -> Result<()> {
        if self.alg == other.alg {
            Ok(())
        } else {
            Err(Error::MixedParents)
        }
    }

    pub fn try_meet(&self, other: &Element) -> Result<Element> {
        self.check(other)?;
        Ok(Element {
            alg: self.alg,
            atoms: self.atoms.intersection(&other.atoms),
        })
    }

    pub fn try_join(&self, other: &Element) -> Result<Element> {
        self.check(other)?;
        Ok(Element {
            alg: self.alg,
            atoms: self.atoms.union(&other.atoms),
        })
    }

    pub fn try_leq(&self, other: &Element) -> Result<bool> {
        self.check(other)?;
        Ok(self.atoms.is_subset(&other.atoms))
    }

    /// # Panics
    /// If the elements have different parents; see [`Element::try_meet`].
    pub fn meet(&self, other: &Element) -> Element {
        self.try_meet(other).expect("meet across algebras")
    }

    pub fn join(&self, other: &Element) -> Element {
        self.try_join(other).expect("join across algebras")
    }

    pub fn complement(&self) -> Element {
        Element {
            alg: self.alg,
            atoms: self.atoms.complement(),
        }
    }

    pub fn leq(&self, other: &Element) -> bool {
        self.try_leq(other).expect("comparison across algebras")
    }

    /// `self ∧ ¬other`
    pub fn minus(&self, other: &Element) -> Element {
        self.meet(&other.complement())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.atoms)
    }
}

impl BitAnd for &Element {
    type Output = Element;
    fn bitand(self, rhs: &Element) -> Element {
        self.meet(rhs)
    }
}

impl BitOr for &Element {
    type Output = Element;
    fn bitor(self, rhs: &Element) -> Element {
        self.join(rhs)
    }
}

impl BitAnd<&Element> for Element {
    type Output = Element;
    fn bitand(self, rhs: &Element) -> Element {
        self.meet(rhs)
    }
}

impl BitOr<&Element> for Element {
    type Output = Element;
    fn bitor(self, rhs: &Element) -> Element {
        self.join(rhs)
    }
}

impl Not for &Element {
    type Output = Element;
    fn not(self) -> Element {
        self.complement()
    }
}

/// Sign vector of an atom: bit `p` is set iff the sign at generator `p` is `+1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignVector(pub u64);

impl SignVector {
    pub fn is_positive(self, p: usize) -> bool {
        self.0 >> p & 1 == 1
    }

    pub fn sign(self, p: usize) -> i8 {
        if self.is_positive(p) {
            1
        } else {
            -1
        }
    }

    pub fn to_signs(self, n: usize) -> Vec<i8> {
        (0..n).map(|p| self.sign(p)).collect()
    }

    /// Position in the canonical order over `n` generators: the first
    /// generator is most significant and `+1` sorts before `-1`.
    pub fn canonical_rank(self, n: usize) -> u64 {
        (0..n)
            .filter(|&p| !self.is_positive(p))
            .map(|p| 1u64 << (n - 1 - p))
            .sum()
    }
}

/// A finite Boolean algebra with named generators and labelled atoms.
#[derive(Clone, Debug)]
pub struct BoolAlg {
    id: AlgId,
    names: Vec<String>,
    labels: Vec<SignVector>,
    generators: Vec<Element>,
}

/// Serialized form: `{ "generators": [...], "atom_labels": [[±1, ...], ...] }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoolAlgJson {
    pub generators: Vec<String>,
    pub atom_labels: Vec<Vec<i8>>,
}

impl BoolAlg {
    /// Assembles an algebra from atom labels; generator elements are read
    /// off the labels so the two can never disagree.
    fn from_labels(names: Vec<String>, labels: Vec<SignVector>) -> Self {
        let id = AlgId::fresh();
        let n = labels.len();
        let generators = (0..names.len())
            .map(|p| Element {
                alg: id,
                atoms: AtomSet::from_indices(
                    n,
                    labels
                        .iter()
                        .enumerate()
                        .filter(|(_, l)| l.is_positive(p))
                        .map(|(i, _)| i),
                ),
            })
            .collect();
        BoolAlg {
            id,
            names,
            labels,
            generators,
        }
    }

    /// The free Boolean algebra on `names`: one atom per sign vector.
    pub fn free<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_owned()).collect();
        if names.is_empty() {
            return Err(Error::NoGenerators);
        }
        if names.len() > MAX_FREE_GENERATORS {
            return Err(Error::TooManyGenerators {
                count: names.len(),
                max: MAX_FREE_GENERATORS,
            });
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::DuplicateName(n.clone()));
            }
        }
        let n = names.len();
        // Atom i has sign -1 at generator p iff bit (n-1-p) of i is set.
        let labels = (0..1u64 << n)
            .map(|i| {
                SignVector(
                    (0..n)
                        .filter(|&p| i >> (n - 1 - p) & 1 == 0)
                        .map(|p| 1u64 << p)
                        .sum(),
                )
            })
            .collect();
        Ok(Self::from_labels(names, labels))
    }

    /// The power set of an `n`-element set; generator `x{i}` is the singleton
    /// atom `i`.
    pub fn powerset(n: usize) -> Self {
        assert!(n <= 64, "powerset algebras support at most 64 points");
        let names = (0..n).map(|i| format!("x{i}")).collect();
        let labels = (0..n).map(|i| SignVector(1 << i)).collect();
        Self::from_labels(names, labels)
    }

    pub fn id(&self) -> AlgId {
        self.id
    }

    pub fn atom_count(&self) -> usize {
        self.labels.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    pub fn atom_labels(&self) -> &[SignVector] {
        &self.labels
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn generator(&self, name: &str) -> Result<&Element> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|p| &self.generators[p])
            .ok_or_else(|| Error::UnknownGenerator(name.to_owned()))
    }

    pub fn top(&self) -> Element {
        self.element(AtomSet::full(self.atom_count()))
    }

    pub fn bottom(&self) -> Element {
        self.element(AtomSet::empty(self.atom_count()))
    }

    pub fn atom(&self, i: usize) -> Element {
        self.element(AtomSet::from_indices(self.atom_count(), [i]))
    }

    pub fn atoms(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.atom_count()).map(|i| self.atom(i))
    }

    /// Wraps an atom set as an element of this algebra.
    ///
    /// # Panics
    /// If the width does not match the atom count.
    pub fn element(&self, atoms: AtomSet) -> Element {
        assert_eq!(atoms.len(), self.atom_count(), "atom set width mismatch");
        Element {
            alg: self.id,
            atoms,
        }
    }

    pub fn element_from_bits(&self, bits: u64) -> Element {
        self.element(AtomSet::from_u64(self.atom_count(), bits))
    }

    pub fn owns(&self, e: &Element) -> bool {
        e.alg == self.id
    }

    fn check(&self, e: &Element) -> Result<()> {
        if self.owns(e) {
            Ok(())
        } else {
            Err(Error::MixedParents)
        }
    }

    pub fn atoms_below(&self, e: &Element) -> Result<usize> {
        self.check(e)?;
        Ok(e.atom_count())
    }

    /// Index of the atom carrying `label`, if it survives in this algebra.
    pub fn atom_with_label(&self, label: SignVector) -> Option<usize> {
        let n = self.names.len();
        let key = label.canonical_rank(n);
        self.labels
            .binary_search_by_key(&key, |l| l.canonical_rank(n))
            .ok()
    }

    pub fn to_json(&self) -> BoolAlgJson {
        let n = self.names.len();
        BoolAlgJson {
            generators: self.names.clone(),
            atom_labels: self.labels.iter().map(|l| l.to_signs(n)).collect(),
        }
    }

    /// Quotient by the ideal generated by `gens`: the principal ideal of
    /// their join. Atoms below the join die; the rest are renumbered densely.
    pub fn quotient_by_ideal(&self, gens: &[Element]) -> Result<Quotient> {
        let mut killed = AtomSet::empty(self.atom_count());
        for g in gens {
            self.check(g)?;
            killed = killed.union(&g.atoms);
        }
        let surviving: Vec<usize> = (0..self.atom_count())
            .filter(|&i| !killed.contains(i))
            .collect();
        let mut new_index = vec![None; self.atom_count()];
        for (j, &i) in surviving.iter().enumerate() {
            new_index[i] = Some(j);
        }
        let labels = surviving.iter().map(|&i| self.labels[i]).collect();
        Ok(Quotient {
            alg: BoolAlg::from_labels(self.names.clone(), labels),
            parent: self.id,
            surviving,
            new_index,
        })
    }

    /// The subalgebra generated by `elems`. Its atoms are the non-empty
    /// classes of parent atoms that agree on membership in every `elems[p]`,
    /// so they are labelled by sign vectors over `e0, e1, ...`.
    pub fn generated_subalgebra(&self, elems: &[Element]) -> Result<Subalgebra> {
        if elems.len() > 64 {
            return Err(Error::TooManyGenerators {
                count: elems.len(),
                max: 64,
            });
        }
        for e in elems {
            self.check(e)?;
        }
        let n = elems.len();
        let mut classes: Vec<(SignVector, AtomSet)> = Vec::new();
        for a in 0..self.atom_count() {
            let sig = SignVector(
                elems
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| e.atoms.contains(a))
                    .map(|(p, _)| 1u64 << p)
                    .sum(),
            );
            match classes.iter_mut().find(|(s, _)| *s == sig) {
                Some((_, set)) => set.insert(a),
                None => classes.push((sig, AtomSet::from_indices(self.atom_count(), [a]))),
            }
        }
        classes.sort_by_key(|(s, _)| s.canonical_rank(n));
        let names = (0..n).map(|p| format!("e{p}")).collect();
        let labels = classes.iter().map(|(s, _)| *s).collect();
        let atoms_in_parent = classes
            .into_iter()
            .map(|(_, set)| self.element(set))
            .collect();
        Ok(Subalgebra {
            alg: BoolAlg::from_labels(names, labels),
            atoms_in_parent,
        })
    }
}

/// Result of [`BoolAlg::quotient_by_ideal`] together with its projection.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub alg: BoolAlg,
    parent: AlgId,
    surviving: Vec<usize>,
    new_index: Vec<Option<usize>>,
}

impl Quotient {
    /// Parent atom index of each quotient atom, in order.
    pub fn surviving_atoms(&self) -> &[usize] {
        &self.surviving
    }

    /// Restriction of a parent element to the surviving atoms.
    pub fn project(&self, e: &Element) -> Result<Element> {
        if e.alg != self.parent {
            return Err(Error::MixedParents);
        }
        let set = AtomSet::from_indices(
            self.surviving.len(),
            e.atoms.iter().filter_map(|i| self.new_index[i]),
        );
        Ok(self.alg.element(set))
    }

    /// The largest parent element projecting onto `e`'s atoms.
    pub fn lift(&self, e: &Element) -> Result<Element> {
        self.alg.check(e)?;
        let set = AtomSet::from_indices(
            self.new_index.len(),
            e.atoms.iter().map(|j| self.surviving[j]),
        );
        Ok(Element {
            alg: self.parent,
            atoms: set,
        })
    }
}

#[derive(Clone, Debug)]
pub struct Subalgebra {
    pub alg: BoolAlg,
    /// Parent element for each atom of `alg`.
    pub atoms_in_parent: Vec<Element>,
}
