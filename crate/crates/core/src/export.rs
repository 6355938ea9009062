//! Serialized views of `L(X)` and of the atoms of `B_k`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::free::FreeInstance;
use crate::generation::r_map;
use crate::packed::{Packed, PackedSpace};
use crate::table::{hasse_dot, CubicTable};

/// `(lower, upper)` index pairs.
pub type Covers = Vec<(usize, usize)>;

/// A full join table at `k = 2` would hold `56943^2` entries.
pub const TABLE_EXPORT_MAX_K: usize = 1;

/// `L(X)` as an explicit cubic table, elements in canonical order.
pub fn lx_table(inst: &FreeInstance) -> Result<CubicTable> {
    if inst.k() > TABLE_EXPORT_MAX_K {
        return Err(Error::TooLarge {
            k: inst.k(),
            max: TABLE_EXPORT_MAX_K,
            what: "cubic table export",
        });
    }
    CubicTable::from_intervals(&inst.build_lx()?)
}

fn mask_list(m: u64) -> String {
    let items: Vec<String> = (0..64)
        .filter(|i| m >> i & 1 == 1)
        .map(|i| i.to_string())
        .collect();
    format!("{{{}}}", items.join(","))
}

/// `[{lo atoms}, {hi atoms}]`.
pub fn interval_label(p: Packed) -> String {
    format!("[{}, {}]", mask_list(p.lo), mask_list(p.hi))
}

/// Whether every interval containing a member of `set` is in `set`.
/// `set` must be sorted.
pub fn is_up_closed(space: &PackedSpace, set: &[Packed]) -> bool {
    set.iter()
        .all(|&x| single_steps_up(space, x).all(|y| set.binary_search(&y).is_ok()))
}

/// Intervals one atom larger than `x`.
fn single_steps_up(space: &PackedSpace, x: Packed) -> impl Iterator<Item = Packed> + '_ {
    (0..space.atoms()).filter_map(move |i| {
        let bit = 1u64 << i;
        if x.lo & bit != 0 {
            Some(Packed::new(x.lo & !bit, x.hi))
        } else if x.hi & bit == 0 {
            Some(Packed::new(x.lo, x.hi | bit))
        } else {
            None
        }
    })
}

/// Cover pairs `(lower, upper)` of `L(X)` as indices into the sorted list.
/// `L(X)` is an up-set of `I(B_k)`, so its covers are the one-atom steps.
pub fn lx_covers(inst: &FreeInstance) -> Result<(Vec<Packed>, Covers)> {
    let space = inst.packed_space_for_enumeration()?;
    let lx = inst.lx_packed()?;
    let mut covers = Vec::new();
    for (i, &x) in lx.iter().enumerate() {
        for y in single_steps_up(&space, x) {
            let j = lx.binary_search(&y).map_err(|_| Error::NotClosed)?;
            covers.push((i, j));
        }
    }
    Ok((lx, covers))
}

/// DOT Hasse diagram of `L(X)`.
pub fn lx_hasse_dot(inst: &FreeInstance) -> Result<String> {
    let (lx, covers) = lx_covers(inst)?;
    let labels: Vec<String> = lx.iter().map(|&p| interval_label(p)).collect();
    Ok(hasse_dot(lx.len(), &labels, &covers))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AtomEntry {
    pub index: usize,
    pub signs: Vec<i8>,
    /// `{j : a <= s_j}`
    pub r0: Vec<usize>,
    /// `{j : a <= ¬t_j}`
    pub r1: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AtomsExport {
    pub k: usize,
    pub generators: Vec<String>,
    pub atoms: Vec<AtomEntry>,
}

pub fn atoms_export(inst: &FreeInstance) -> Result<AtomsExport> {
    let alg = inst.alg();
    let n = alg.generator_names().len();
    let bits = |m: u64| (0..64).filter(|i| m >> i & 1 == 1).collect::<Vec<_>>();
    let atoms = alg
        .atoms()
        .enumerate()
        .map(|(index, a)| {
            let r = r_map(inst, &a)?;
            Ok(AtomEntry {
                index,
                signs: alg.atom_labels()[index].to_signs(n),
                r0: bits(r.a0()),
                r1: bits(r.a1()),
            })
        })
        .collect::<Result<_>>()?;
    Ok(AtomsExport {
        k: inst.k(),
        generators: alg.generator_names().to_vec(),
        atoms,
    })
}
