//! The named checks run by `cubal verify`.

use serde::Serialize;

use crate::counting::{
    alpha_total, atoms_in_upper_interval, eta, eta_closed_form, free_algebra_size, phi,
};
use crate::cubic::Interval;
use crate::error::Result;
use crate::export::lx_table;
use crate::free::{relations_equivalence_check, split_report, FreeInstance};
use crate::generation::{
    associated, atom_for_signed_set, atom_from_shape, j_interval, r_map, r_map_inductive,
    verify_generation, ClosureOptions, WaveInfo,
};
use crate::signed::SignedSet;
use crate::table::{check_cubic_axioms, Coverage};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckLine {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn line(name: &'static str, passed: bool, detail: impl Into<String>) -> CheckLine {
    CheckLine {
        name,
        passed,
        detail: detail.into(),
    }
}

/// Largest `k` for the quick suite; `k = 2` adds the 56943-element closure.
pub const QUICK_MAX_K: usize = 1;
pub const LONG_MAX_K: usize = 2;

/// Runs every check for `B_k`. The caller enforces the `k` limits; this
/// needs `k <= 2` for the interval checks.
pub fn run(k: usize, on_wave: impl FnMut(WaveInfo)) -> Result<Vec<CheckLine>> {
    let b = FreeInstance::build(k)?;
    let alg = b.alg();
    let mut out = Vec::new();

    let atoms = alg.atom_count();
    out.push(line(
        "atom-count",
        alpha_total(k) == atoms.into(),
        format!("{atoms} atoms"),
    ));

    let st = b.sigma_tau();
    let (sigma, tau) = st.last().expect("non-empty");
    let deltas = b.delta_sequence();
    let delta_ok = deltas
        .iter()
        .zip(&st)
        .all(|(d, (s, t))| Interval::new(s.clone(), t.clone()).as_ref() == Ok(d));
    out.push(line(
        "sigma-tau",
        sigma.is_bottom() && tau.is_bottom() && delta_ok,
        format!("σ_{k} = τ_{k} = 0, δ_i = [σ_i, τ_i]"),
    ));

    let eq = relations_equivalence_check(k, 256)?;
    out.push(line(
        "relations",
        eq.holds() && b.gens().defining_relations_hold(0),
        format!("{} quotients compared", eq.cases.len()),
    ));

    if k >= 1 {
        let prev = FreeInstance::build(k - 1)?;
        let split = split_report(&prev, &b);
        out.push(line(
            "atom-split",
            split.holds(),
            format!("{} = 3·{} + 1", split.atoms, split.previous_atoms),
        ));
    }

    let rs: Vec<SignedSet> = alg.atoms().map(|a| r_map(&b, &a)).collect::<Result<_>>()?;
    let mut distinct = rs.clone();
    distinct.sort();
    distinct.dedup();
    let shapes_ok = rs
        .iter()
        .enumerate()
        .all(|(i, &r)| atom_from_shape(&b, r).ok() == Some(alg.atom(i)));
    out.push(line(
        "r-map",
        distinct.len() == rs.len() && r_map_inductive(k)? == rs && shapes_ok,
        "injective, inductive = closed form, explicit meets",
    ));

    let mut assoc_ok = true;
    let mut roundtrip_ok = true;
    for s in SignedSet::all(k + 1).filter(|s| !s.is_top()) {
        let j = j_interval(&b, s)?;
        for (i, a) in alg.atoms().enumerate() {
            let expected = rs[i].leq(s) || rs[i].leq(s.swap());
            assoc_ok &= associated(alg, &a, &j)?.is_associated() == expected;
        }
        let a = atom_for_signed_set(&b, s)?;
        let r = r_map(&b, &a)?;
        roundtrip_ok &= r == s || r == s.swap();
    }
    out.push(line(
        "association",
        assoc_ok,
        "atoms associated with J(A0, A1)",
    ));
    out.push(line(
        "signed-set-atoms",
        roundtrip_ok,
        "R(atom for s) ∈ {s, swap s}",
    ));

    let mut eta_ok = true;
    for mask in 1u32..1 << (k + 1) {
        let j: Vec<usize> = (0..=k).filter(|i| mask >> i & 1 == 1).collect();
        for (i, e) in eta(&b, &j)?.iter().enumerate() {
            eta_ok &= *e == eta_closed_form(&b, &j, i)?;
            eta_ok &= phi(k, i)? == atoms_in_upper_interval(alg, e)?.into();
        }
    }
    out.push(line("eta-phi", eta_ok, "closed form and Φ(k, i)"));

    let lx = b.lx_packed()?;
    let expected = free_algebra_size(k + 1)?;
    out.push(line(
        "lx-size",
        expected == lx.len().into(),
        format!("|L(X)| = {}, formula {expected}", lx.len()),
    ));

    if k <= crate::export::TABLE_EXPORT_MAX_K {
        let t = lx_table(&b)?;
        let r = check_cubic_axioms(&t, Coverage::default());
        out.push(line(
            "lx-axioms",
            r.passed(),
            format!("{} elements", t.len()),
        ));
    }

    let g = verify_generation(&b, ClosureOptions::default(), on_wave)?;
    out.push(line(
        "generation",
        g.equal,
        format!("closure {} vs L(X) {}", g.closure_size, g.lx_size),
    ));
    Ok(out)
}
