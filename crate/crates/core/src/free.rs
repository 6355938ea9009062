//! Construction of the free cubic implication algebra on `k + 1` generators.
//!
//! `F_k` is the free Boolean algebra on `s_0..s_k, t_0..t_k`. Quotienting by
//! the ideal generated by
//!
//! ```text
//! s_0,   u_i = s_i ∧ ¬t_i,   r_i = t_0 ∧ ¬s_1 ∧ .. ∧ ¬s_i ∧ ¬t_{i+1},   q_k = t_0 ∧ ¬s_0 ∧ .. ∧ ¬s_k
//! ```
//!
//! gives `B_k`. The generator intervals are `I_i = [s_i, t_i]` in `I(B_k)`,
//! and the carrier `L(X)` is the union of the localizations at the `I_i`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::boolean::{BoolAlg, Element, SignVector};
use crate::cubic::Interval;
use crate::error::{Error, Result};
use crate::packed::{Packed, PackedSpace};

/// Largest `k` for which `B_k` is built (`F_7` has 2^16 atoms).
pub const MAX_BUILD_K: usize = 7;
/// Largest `k` for which `I(B_k)` is enumerated (`3^13` intervals at `k = 2`).
pub const MAX_ENUMERATE_K: usize = 2;

/// `s0..sk, t0..tk`.
pub fn generator_names(k: usize) -> Vec<String> {
    (0..=k)
        .map(|i| format!("s{i}"))
        .chain((0..=k).map(|i| format!("t{i}")))
        .collect()
}

/// The free Boolean algebra `F_k`.
pub fn free_algebra(k: usize) -> Result<BoolAlg> {
    if k > MAX_BUILD_K {
        return Err(Error::TooLarge {
            k,
            max: MAX_BUILD_K,
            what: "free Boolean algebra construction",
        });
    }
    BoolAlg::free(&generator_names(k))
}

/// Handles on `s_i`, `t_i` inside some algebra carrying those generator
/// names (either `F_k`, `B_k`, or an intermediate quotient).
#[derive(Clone, Debug)]
pub struct GenSet {
    pub k: usize,
    pub s: Vec<Element>,
    pub t: Vec<Element>,
    top: Element,
    bottom: Element,
}

impl GenSet {
    pub fn of(alg: &BoolAlg, k: usize) -> Result<Self> {
        let get = |prefix: char| -> Result<Vec<Element>> {
            (0..=k)
                .map(|i| alg.generator(&format!("{prefix}{i}")).cloned())
                .collect()
        };
        Ok(GenSet {
            k,
            s: get('s')?,
            t: get('t')?,
            top: alg.top(),
            bottom: alg.bottom(),
        })
    }

    pub fn top(&self) -> &Element {
        &self.top
    }

    pub fn bottom(&self) -> &Element {
        &self.bottom
    }

    /// Join of an iterator; the empty join is bottom.
    pub fn join_all<'a>(&self, it: impl IntoIterator<Item = &'a Element>) -> Element {
        it.into_iter().fold(self.bottom.clone(), |acc, e| &acc | e)
    }

    /// Meet of an iterator; the empty meet is top.
    pub fn meet_all<'a>(&self, it: impl IntoIterator<Item = &'a Element>) -> Element {
        it.into_iter().fold(self.top.clone(), |acc, e| &acc & e)
    }

    /// `⋀_{j=from}^{to} ¬s_j` (top when the range is empty).
    fn not_s_range(&self, from: usize, to_inclusive: Option<usize>) -> Element {
        let Some(to) = to_inclusive else {
            return self.top.clone();
        };
        let negs: Vec<Element> = (from..=to).map(|j| !&self.s[j]).collect();
        self.meet_all(&negs)
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i > self.k {
            Err(Error::IndexOutOfRange {
                index: i,
                limit: self.k,
            })
        } else {
            Ok(())
        }
    }

    fn s_join(&self, l: usize, i: usize) -> Element {
        let range = if l <= i { &self.s[l..=i] } else { &[][..] };
        self.join_all(range)
    }

    /// `R_{l,k,i}(t, α)`: `t <= ⋁_{j=l}^{i} s_j ∨ t_{i+1} ∨ α`.
    pub fn relation_r(&self, l: usize, i: usize, t: &Element, alpha: &Element) -> Result<bool> {
        self.check_index(i + 1)?;
        if l > self.k + 1 {
            return Err(Error::IndexOutOfRange {
                index: l,
                limit: self.k + 1,
            });
        }
        let rhs = &(&self.s_join(l, i) | &self.t[i + 1]) | alpha;
        t.try_leq(&rhs)
    }

    /// `Q_{l,k}(t, α)`: `t <= ⋁_{j=l}^{k} s_j ∨ α`.
    pub fn relation_q(&self, l: usize, t: &Element, alpha: &Element) -> Result<bool> {
        if l > self.k + 1 {
            return Err(Error::IndexOutOfRange {
                index: l,
                limit: self.k + 1,
            });
        }
        let rhs = &self.s_join(l, self.k) | alpha;
        t.try_leq(&rhs)
    }

    /// `(σ_i, τ_i)` for `i = 0..=k`:
    /// `σ_{i+1} = σ_i ∨ (τ_i ∧ ¬t_{i+1})`, `τ_{i+1} = σ_i ∨ (τ_i ∧ ¬s_{i+1})`.
    pub fn sigma_tau(&self) -> Vec<(Element, Element)> {
        let mut out = vec![(self.s[0].clone(), self.t[0].clone())];
        for i in 0..self.k {
            let (sigma, tau) = out.last().expect("seeded");
            let next_sigma = sigma | &tau.minus(&self.t[i + 1]);
            let next_tau = sigma | &tau.minus(&self.s[i + 1]);
            out.push((next_sigma, next_tau));
        }
        out
    }

    /// Whether `s_0 = 0`, every `R_{1,k,j}(t_0, 0)` for `j` in `from..k`,
    /// and `Q_{1,k}(t_0, 0)` hold.
    pub fn defining_relations_hold(&self, from: usize) -> bool {
        let zero = &self.bottom;
        self.s[0].is_bottom()
            && (from..self.k).all(|j| self.relation_r(1, j, &self.t[0], zero).unwrap_or(false))
            && self.relation_q(1, &self.t[0], zero).unwrap_or(false)
    }
}

/// Which family an ideal generator belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IdealKind {
    /// `s_0`
    Z,
    /// `u_i = s_i ∧ ¬t_i`
    U(usize),
    /// `r_i = t_0 ∧ ⋀_{j=1}^{i} ¬s_j ∧ ¬t_{i+1}`
    R(usize),
    /// `q_k = t_0 ∧ ⋀_{j=0}^{k} ¬s_j`
    Q,
}

impl fmt::Display for IdealKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealKind::Z => write!(f, "s0"),
            IdealKind::U(i) => write!(f, "u{i}"),
            IdealKind::R(i) => write!(f, "r{i}"),
            IdealKind::Q => write!(f, "q"),
        }
    }
}

/// The generating set `S_k` of the ideal, evaluated in the algebra that
/// `gens` lives in: `2k + 3` elements.
pub fn ideal_generators(gens: &GenSet) -> Vec<(IdealKind, Element)> {
    let k = gens.k;
    let t0 = &gens.t[0];
    let mut out = vec![(IdealKind::Z, gens.s[0].clone())];
    out.extend((0..=k).map(|i| (IdealKind::U(i), gens.s[i].minus(&gens.t[i]))));
    out.extend((0..k).map(|i| {
        let prefix = gens.not_s_range(1, (i >= 1).then_some(i));
        (IdealKind::R(i), &(t0 & &prefix) & &!&gens.t[i + 1])
    }));
    out.push((IdealKind::Q, t0 & &gens.not_s_range(0, Some(k))));
    out
}

/// `B_k` with its generator intervals.
#[derive(Clone, Debug)]
pub struct FreeInstance {
    k: usize,
    alg: BoolAlg,
    gens: GenSet,
    intervals: Vec<Interval>,
}

/// Serialized summary of a [`FreeInstance`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeInstanceJson {
    pub k: usize,
    pub generators: Vec<String>,
    pub atom_count: usize,
    pub atom_labels: Vec<Vec<i8>>,
    pub generator_images: Vec<GeneratorImage>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lx_size: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorImage {
    pub name: String,
    pub lo: Vec<usize>,
    pub hi: Vec<usize>,
}

impl FreeInstance {
    /// Builds `B_k` as the quotient of `F_k` by the ideal of [`ideal_generators`].
    pub fn build(k: usize) -> Result<Self> {
        let f = free_algebra(k)?;
        let fg = GenSet::of(&f, k)?;
        let ideal: Vec<Element> = ideal_generators(&fg).into_iter().map(|(_, e)| e).collect();
        let q = f.quotient_by_ideal(&ideal)?;
        let alg = q.alg;
        let gens = GenSet::of(&alg, k)?;
        let intervals = (0..=k)
            .map(|i| Interval::new(gens.s[i].clone(), gens.t[i].clone()))
            .collect::<Result<_>>()?;
        Ok(FreeInstance {
            k,
            alg,
            gens,
            intervals,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn alg(&self) -> &BoolAlg {
        &self.alg
    }

    pub fn gens(&self) -> &GenSet {
        &self.gens
    }

    /// `I_i = [s_i, t_i]`.
    pub fn generator_intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn s(&self, i: usize) -> &Element {
        &self.gens.s[i]
    }

    pub fn t(&self, i: usize) -> &Element {
        &self.gens.t[i]
    }

    pub fn sigma_tau(&self) -> Vec<(Element, Element)> {
        self.gens.sigma_tau()
    }

    /// `δ_0 = I_0`, `δ_{i+1} = δ_i ∧ Δ(δ_i ∨ I_{i+1}, I_{i+1})`.
    pub fn delta_sequence(&self) -> Vec<Interval> {
        let mut out = vec![self.intervals[0].clone()];
        for next in &self.intervals[1..] {
            let d = out
                .last()
                .expect("seeded")
                .caret(next)
                .expect("same algebra");
            out.push(d);
        }
        out
    }

    /// `a_k = t_0 ∧ ⋀_{i=1}^{k-1} ¬s_i`, the atom born at stage `k`.
    pub fn new_atom(&self) -> Element {
        let g = &self.gens;
        let negs: Vec<Element> = (1..self.k).map(|i| !&g.s[i]).collect();
        &g.t[0] & &g.meet_all(&negs)
    }

    /// Tree the atom belongs to: `0` for atoms below `¬t_0`, otherwise the
    /// least `j >= 1` with `atom <= s_j`.
    pub fn atom_group(&self, atom: usize) -> usize {
        let a = self.alg.atom(atom);
        if a.leq(&!self.t(0)) {
            return 0;
        }
        (1..=self.k)
            .find(|&j| a.leq(self.s(j)))
            .expect("every atom below t0 lies below some s_j")
    }

    /// `"+s0 -s1 ..."` for an atom's sign vector.
    pub fn atom_label(&self, atom: usize) -> String {
        format_label(self.alg.generator_names(), self.alg.atom_labels()[atom])
    }

    fn packed_space(&self) -> Result<PackedSpace> {
        if self.k > MAX_ENUMERATE_K {
            return Err(Error::TooLarge {
                k: self.k,
                max: MAX_ENUMERATE_K,
                what: "interval enumeration",
            });
        }
        Ok(PackedSpace::new(self.alg.atom_count()))
    }

    pub fn packed_space_for_enumeration(&self) -> Result<PackedSpace> {
        self.packed_space()
    }

    pub fn packed_generators(&self, sp: &PackedSpace) -> Vec<Packed> {
        self.intervals.iter().map(|i| sp.from_interval(i)).collect()
    }

    /// `L(X)` as sorted packed intervals.
    pub fn lx_packed(&self) -> Result<Vec<Packed>> {
        let sp = self.packed_space()?;
        let gens = self.packed_generators(&sp);
        let keep = |w: Packed| gens.iter().any(|&g| sp.preceq(g, w));
        #[cfg(feature = "parallel")]
        let mut out: Vec<Packed> = {
            use rayon::prelude::*;
            (0..sp.size())
                .into_par_iter()
                .map(|i| sp.from_index(i))
                .filter(|&w| keep(w))
                .collect()
        };
        #[cfg(not(feature = "parallel"))]
        let mut out: Vec<Packed> = sp.all().filter(|&w| keep(w)).collect();
        out.sort_unstable();
        Ok(out)
    }

    /// `L(X) = ⋃_i L_{I_i}`, filtered from all of `I(B_k)`.
    pub fn build_lx(&self) -> Result<BTreeSet<Interval>> {
        let sp = self.packed_space()?;
        Ok(self
            .lx_packed()?
            .into_iter()
            .map(|p| sp.to_interval(&self.alg, p))
            .collect())
    }

    pub fn to_json(&self, lx_size: Option<usize>) -> FreeInstanceJson {
        let bool_json = self.alg.to_json();
        FreeInstanceJson {
            k: self.k,
            generators: bool_json.generators,
            atom_count: self.alg.atom_count(),
            atom_labels: bool_json.atom_labels,
            generator_images: (0..=self.k)
                .map(|i| GeneratorImage {
                    name: format!("a{i}"),
                    lo: self.s(i).atoms().iter().collect(),
                    hi: self.t(i).atoms().iter().collect(),
                })
                .collect(),
            lx_size,
        }
    }
}

pub fn format_label(names: &[String], label: SignVector) -> String {
    names
        .iter()
        .enumerate()
        .map(|(p, n)| format!("{}{n}", if label.is_positive(p) { '+' } else { '-' }))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Drops `s_k`, `t_k` from a `B_k` label, giving a `B_{k-1}` label.
pub fn restrict_label(k: usize, label: SignVector) -> SignVector {
    debug_assert!(k >= 1);
    let mut out = 0u64;
    for i in 0..k {
        if label.is_positive(i) {
            out |= 1 << i;
        }
        if label.is_positive(k + 1 + i) {
            out |= 1 << (k + i);
        }
    }
    SignVector(out)
}

/// How the atoms of `B_k` arise from those of `B_{k-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitReport {
    pub k: usize,
    pub previous_atoms: usize,
    pub atoms: usize,
    /// Number of `B_k` atoms restricting to each `B_{k-1}` atom.
    pub children: Vec<usize>,
    /// `B_k` atoms whose restriction is not an atom of `B_{k-1}`.
    pub orphans: Vec<usize>,
    /// Index of `a_k` if it is a single atom.
    pub new_atom: Option<usize>,
}

impl SplitReport {
    /// Every old atom splits into three and the only other atom is `a_k`.
    pub fn holds(&self) -> bool {
        self.children.iter().all(|&c| c == 3)
            && self.new_atom.is_some()
            && self.orphans == self.new_atom.into_iter().collect::<Vec<_>>()
            && self.atoms == 3 * self.previous_atoms + 1
    }
}

pub fn split_report(previous: &FreeInstance, next: &FreeInstance) -> SplitReport {
    let k = next.k;
    assert_eq!(previous.k + 1, k, "consecutive instances required");
    let mut children = vec![0; previous.alg.atom_count()];
    let mut orphans = Vec::new();
    for (i, &label) in next.alg.atom_labels().iter().enumerate() {
        match previous.alg.atom_with_label(restrict_label(k, label)) {
            Some(p) => children[p] += 1,
            None => orphans.push(i),
        }
    }
    let a = next.new_atom();
    SplitReport {
        k,
        previous_atoms: previous.alg.atom_count(),
        atoms: next.alg.atom_count(),
        children,
        orphans,
        new_atom: a
            .is_atom()
            .then(|| a.atoms().iter().next().expect("one atom")),
    }
}

/// One algebra in which the σ/τ criterion was compared with the relations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceCase {
    pub label: String,
    pub sigma_tau_zero: bool,
    /// `Z`, `R_{1,k,j}(t_0, 0)` for `0 <= j < k`, and `Q_{1,k}(t_0, 0)`.
    pub relations_hold: bool,
    /// Same, with `R_j` only for `1 <= j < k`.
    pub relations_hold_from_one: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub k: usize,
    pub exhaustive: bool,
    pub cases: Vec<EquivalenceCase>,
}

impl EquivalenceReport {
    /// `σ_k = τ_k = 0` iff the relations hold, in every case.
    pub fn holds(&self) -> bool {
        self.cases
            .iter()
            .all(|c| c.sigma_tau_zero == c.relations_hold)
    }

    /// The same biconditional with `R_0` left out.
    pub fn holds_without_r0(&self) -> bool {
        self.cases
            .iter()
            .all(|c| c.sigma_tau_zero == c.relations_hold_from_one)
    }
}

/// Largest `k` accepted by [`relations_equivalence_check`].
pub const MAX_EQUIVALENCE_K: usize = 5;

fn equivalence_case(label: String, gens: &GenSet) -> EquivalenceCase {
    let (sigma, tau) = gens.sigma_tau().pop().expect("non-empty");
    EquivalenceCase {
        label,
        sigma_tau_zero: sigma.is_bottom() && tau.is_bottom(),
        relations_hold: gens.defining_relations_hold(0),
        relations_hold_from_one: gens.defining_relations_hold(1),
    }
}

/// Compares `σ_k = τ_k = 0` against the defining relations in `F_k`, `B_k`
/// and quotients of `F_k` by subsets of the ideal generators: all subsets
/// when there are at most 512, otherwise `samples` seeded random ones.
pub fn relations_equivalence_check(k: usize, samples: usize) -> Result<EquivalenceReport> {
    use rand::{Rng, SeedableRng};
    if k > MAX_EQUIVALENCE_K {
        return Err(Error::TooLarge {
            k,
            max: MAX_EQUIVALENCE_K,
            what: "relation equivalence check",
        });
    }
    let f = free_algebra(k)?;
    let fg = GenSet::of(&f, k)?;
    let ideal = ideal_generators(&fg);
    let mut cases = vec![equivalence_case(format!("F_{k}"), &fg)];
    let b = FreeInstance::build(k)?;
    cases.push(equivalence_case(format!("B_{k}"), b.gens()));

    let m = ideal.len();
    let exhaustive = m <= 9;
    let subsets: Vec<u64> = if exhaustive {
        (0..1u64 << m).collect()
    } else {
        let mut rng = rand::rngs::StdRng::seed_from_u64(0xC0FFEE + k as u64);
        (0..samples).map(|_| rng.gen_range(0..1u64 << m)).collect()
    };
    for mask in subsets {
        let chosen: Vec<&(IdealKind, Element)> = (0..m)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| &ideal[i])
            .collect();
        let elems: Vec<Element> = chosen.iter().map(|(_, e)| e.clone()).collect();
        let q = f.quotient_by_ideal(&elems)?;
        let qg = GenSet::of(&q.alg, k)?;
        let label = format!(
            "F_{k}/{{{}}}",
            chosen
                .iter()
                .map(|(kind, _)| kind.to_string())
                .collect::<Vec<_>>()
                .join(",")
        );
        cases.push(equivalence_case(label, &qg));
    }
    Ok(EquivalenceReport {
        k,
        exhaustive,
        cases,
    })
}
