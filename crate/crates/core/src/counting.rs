//! Exact counts: atoms of `B_k`, upper intervals, localization sizes, `Φ`,
//! and the inclusion-exclusion size of the free algebra.

use num_bigint::{BigInt, BigUint};
use serde::{Serialize, Serializer};

use crate::boolean::BoolAlg;
use crate::cubic::Interval;
use crate::error::{Error, Result};
use crate::free::FreeInstance;

pub type BigCount = BigUint;

/// Largest generator count for the closed-form sizes; the top term of
/// `|L(X)|` at 12 generators already has about 84000 digits.
pub const MAX_SIZE_GENERATORS: usize = 12;

fn pow3(e: usize) -> BigUint {
    BigUint::from(3u32).pow(e as u32)
}

fn binomial(n: usize, r: usize) -> BigUint {
    let r = r.min(n - r);
    let mut acc = BigUint::from(1u32);
    for i in 0..r {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `(3^{k+1} - 1) / 2`, the number of atoms of `B_k`.
pub fn alpha_total(k: usize) -> BigCount {
    (pow3(k + 1) - 1u32) / 2u32
}

/// Atoms below a meet of `n` terms `¬s_j ∧ t_j` with distinct `j >= 1`:
/// `(3^{k+1-n} - 1) / 2`.
pub fn alpha_distinct_meet(k: usize, n: usize) -> Result<BigCount> {
    if n > k + 1 {
        return Err(Error::IndexOutOfRange {
            index: n,
            limit: k + 1,
        });
    }
    Ok((pow3(k + 1 - n) - 1u32) / 2u32)
}

/// Atoms of the upper interval `[x, 1]` in `I(B)`: all atoms of `B` except
/// those below `¬lo ∧ hi`.
pub fn atoms_in_upper_interval(alg: &BoolAlg, x: &Interval) -> Result<usize> {
    if !alg.owns(x.lo()) {
        return Err(Error::MixedParents);
    }
    let free_part = x.hi().minus(x.lo());
    Ok(alg.atom_count() - free_part.atom_count())
}

/// `3^n` where `n` is [`atoms_in_upper_interval`].
pub fn localization_size(alg: &BoolAlg, x: &Interval) -> Result<BigCount> {
    Ok(pow3(atoms_in_upper_interval(alg, x)?))
}

/// `Φ(k, l) = 3^{k-l} 2^l`, defined for `l <= k`.
pub fn phi(k: usize, l: usize) -> Result<BigCount> {
    if l > k {
        return Err(Error::PhiOutOfRange {
            k: k as u32,
            l: l as u32,
        });
    }
    Ok(pow3(k - l) * BigUint::from(2u32).pow(l as u32))
}

fn check_index_set(inst: &FreeInstance, index_set: &[usize]) -> Result<Vec<usize>> {
    if index_set.is_empty() {
        return Err(Error::EmptyIndexSet);
    }
    let mut j = index_set.to_vec();
    j.sort_unstable();
    j.dedup();
    if let Some(&bad) = j.iter().find(|&&i| i > inst.k()) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            limit: inst.k(),
        });
    }
    Ok(j)
}

/// `η_0 = I_{j_0}`, `η_{i+1} = η_i ∨ Δ(η_i ∨ I_{j_{i+1}}, I_{j_{i+1}})` over the
/// increasing enumeration of `index_set`.
pub fn eta(inst: &FreeInstance, index_set: &[usize]) -> Result<Vec<Interval>> {
    let j = check_index_set(inst, index_set)?;
    let gens = inst.generator_intervals();
    let mut out = vec![gens[j[0]].clone()];
    for &next in &j[1..] {
        let prev = out.last().expect("seeded");
        let g = &gens[next];
        let d = prev.join(g).delta(g)?;
        out.push(prev.join(&d));
    }
    Ok(out)
}

/// Closed form of `η_i`:
/// `[s_{j_0} ∧ ⋀_{p=1}^{i} (s_{j_p} ∨ ¬t_{j_p}), t_{j_0} ∨ ⋁_{p=1}^{i} (¬s_{j_p} ∧ t_{j_p})]`.
pub fn eta_closed_form(inst: &FreeInstance, index_set: &[usize], i: usize) -> Result<Interval> {
    let j = check_index_set(inst, index_set)?;
    if i >= j.len() {
        return Err(Error::IndexOutOfRange {
            index: i,
            limit: j.len() - 1,
        });
    }
    let mut lo = inst.s(j[0]).clone();
    let mut hi = inst.t(j[0]).clone();
    for &p in &j[1..=i] {
        lo = lo & &(inst.s(p) | &!inst.t(p));
        hi = hi | &inst.t(p).minus(inst.s(p));
    }
    Interval::new(lo, hi)
}

/// `|L(X)|` for `m = k + 1` generators:
/// `Σ_{i=1}^{m} C(m, i) (-1)^{i+1} 3^{Φ(k, i-1)}`.
pub fn free_algebra_size(m: usize) -> Result<BigCount> {
    if m == 0 {
        return Err(Error::EmptyGeneratingSet);
    }
    if m > MAX_SIZE_GENERATORS {
        return Err(Error::TooLarge {
            k: m - 1,
            max: MAX_SIZE_GENERATORS - 1,
            what: "free algebra size",
        });
    }
    let k = m - 1;
    let mut total = BigInt::from(0);
    for i in 1..=m {
        let exp: u32 = phi(k, i - 1)?.try_into().expect("bounded by 3^11");
        let term = BigInt::from(binomial(m, i) * BigUint::from(3u32).pow(exp));
        if i % 2 == 1 {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(total
        .to_biguint()
        .expect("inclusion-exclusion sum is positive"))
}

/// `3^{2^{2m}}`, the size of `I(F_{m-1})`.
pub fn embedding_upper_bound(m: usize) -> Result<BigCount> {
    if m == 0 {
        return Err(Error::EmptyGeneratingSet);
    }
    if m > MAX_SIZE_GENERATORS {
        return Err(Error::TooLarge {
            k: m - 1,
            max: MAX_SIZE_GENERATORS - 1,
            what: "embedding upper bound",
        });
    }
    Ok(BigUint::from(3u32).pow(1u32 << (2 * m)))
}

/// `Σ_{j=0}^{i+1} C(i+1, j) (-1)^j (3^{k+1-j} - 1)` compared with
/// `3^{k-i} 2^{i+1}`, for `i <= k`.
pub fn inner_identity_holds(k: usize, i: usize) -> bool {
    assert!(i <= k, "identity stated for i <= k");
    let mut lhs = BigInt::from(0);
    for j in 0..=i + 1 {
        let term = BigInt::from(binomial(i + 1, j)) * BigInt::from(pow3(k + 1 - j) - 1u32);
        if j % 2 == 0 {
            lhs += term;
        } else {
            lhs -= term;
        }
    }
    let rhs = BigInt::from(pow3(k - i) * BigUint::from(2u32).pow(i as u32 + 1));
    lhs == rhs
}

fn as_decimal<S: Serializer>(n: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

/// One row of the size table. Big numbers serialize as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SizeRow {
    pub generators: usize,
    #[serde(serialize_with = "as_decimal")]
    pub atoms: BigUint,
    #[serde(serialize_with = "as_decimal")]
    pub size: BigUint,
    #[serde(serialize_with = "as_decimal")]
    pub upper_bound: BigUint,
}

pub fn size_row(m: usize) -> Result<SizeRow> {
    Ok(SizeRow {
        generators: m,
        atoms: alpha_total(m.checked_sub(1).ok_or(Error::EmptyGeneratingSet)?),
        size: free_algebra_size(m)?,
        upper_bound: embedding_upper_bound(m)?,
    })
}

pub fn size_table(rows: usize) -> Result<Vec<SizeRow>> {
    (1..=rows).map(size_row).collect()
}
