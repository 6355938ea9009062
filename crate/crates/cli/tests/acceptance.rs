//! Acceptance criteria 1-10. Prints one line per criterion and exits
//! non-zero if any fails.
//!
//! Reference values come from oracles written here against the raw
//! definitions (sign-vector filters, localizations as sets of `Δ(y, x)`,
//! plain big-integer arithmetic), not from the library paths under test.

use std::collections::{BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};

use cubal::boolean::{BoolAlg, Element};
use cubal::counting::{atoms_in_upper_interval, eta, eta_closed_form, free_algebra_size};
use cubal::cubic::{all_intervals, localization, localization_by_delta, Interval};
use cubal::free::{split_report, FreeInstance};
use cubal::generation::{
    associated, atom_for_signed_set, j_interval, packed_closure, r_map, r_map_inductive,
    ClosureOptions,
};
use cubal::packed::Packed;
use cubal::signed::SignedSet;
use cubal::table::{check_cubic_axioms, check_mr_axiom, Coverage, CubicTable};

// Pinned limits. Every criterion tolerates zero failures.
const C1_TIME: Duration = Duration::from_secs(5);
const C3_QUICK_TIME: Duration = Duration::from_secs(1);
const C3_LONG_TIME: Duration = Duration::from_secs(120);
const C4_QUICK_TIME: Duration = Duration::from_secs(5);
const C4_LONG_TIME: Duration = Duration::from_secs(30 * 60);
const C6_RANDOM_PAIRS: usize = 10_000;
const SEED: u64 = 0x0ACC_EE97;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(t <= limit, || {
        format!("{what} took {t:.2?}, limit {limit:?}")
    })
}

// ----- oracles -----------------------------------------------------------

/// Sign vectors of `F_k` (bit `i` = `s_i`, bit `k+1+i` = `t_i`, set = +1)
/// that lie under no ideal generator.
fn surviving_sign_vectors(k: usize) -> Vec<u64> {
    let s = |v: u64, i: usize| v >> i & 1 == 1;
    let t = |v: u64, i: usize| v >> (k + 1 + i) & 1 == 1;
    (0..1u64 << (2 * k + 2))
        .filter(|&v| {
            let z = s(v, 0);
            let u = (0..=k).any(|i| s(v, i) && !t(v, i));
            let r = (0..k).any(|i| t(v, 0) && (1..=i).all(|j| !s(v, j)) && !t(v, i + 1));
            let q = t(v, 0) && (0..=k).all(|j| !s(v, j));
            !(z || u || r || q)
        })
        .collect()
}

/// Per-atom states of an interval: 0 outside `hi`, 1 in `hi \ lo`, 2 in `lo`.
fn state(p: Packed, i: usize) -> u8 {
    if p.lo >> i & 1 == 1 {
        2
    } else if p.hi >> i & 1 == 1 {
        1
    } else {
        0
    }
}

fn with_state(p: &mut Packed, i: usize, st: u8) {
    let bit = 1u64 << i;
    match st {
        2 => {
            p.lo |= bit;
            p.hi |= bit;
        }
        1 => p.hi |= bit,
        _ => {}
    }
}

/// `Δ([a, b], [c, d]) = [a ∨ (b ∧ ¬d), b ∧ (a ∨ ¬c)]` for `[c, d] ⊆ [a, b]`.
fn raw_delta(y: Packed, x: Packed) -> Packed {
    Packed {
        lo: y.lo | (y.hi & !x.hi),
        hi: y.hi & (y.lo | !x.lo),
    }
}

/// `{ Δ(y, x) : a <= x <= y }` over `n` atoms, enumerated atom by atom:
/// containment is per-atom, so the triples factor.
fn localization_oracle(n: usize, a: Packed) -> Vec<Packed> {
    // (x, y) states allowed at an atom where `a` has the given state.
    let options = |sa: u8| -> &'static [(u8, u8)] {
        match sa {
            2 => &[(2, 2), (2, 1), (1, 1)],
            1 => &[(1, 1)],
            _ => &[(0, 0), (0, 1), (1, 1)],
        }
    };
    let mut out = vec![(Packed { lo: 0, hi: 0 }, Packed { lo: 0, hi: 0 })];
    for i in 0..n {
        let opts = options(state(a, i));
        let mut next = Vec::with_capacity(out.len() * opts.len());
        for &(x, y) in &out {
            for &(sx, sy) in opts {
                let (mut x, mut y) = (x, y);
                with_state(&mut x, i, sx);
                with_state(&mut y, i, sy);
                next.push((x, y));
            }
        }
        out = next;
    }
    out.into_iter().map(|(x, y)| raw_delta(y, x)).collect()
}

fn lx_oracle(inst: &FreeInstance) -> BTreeSet<Packed> {
    let n = inst.alg().atom_count();
    let mut set = BTreeSet::new();
    for g in inst.generator_intervals() {
        let a = Packed {
            lo: g.lo().bits().unwrap(),
            hi: g.hi().bits().unwrap(),
        };
        set.extend(localization_oracle(n, a));
    }
    set
}

fn inclusion_exclusion_oracle(m: usize) -> BigUint {
    // Σ_{i=1}^{m} C(m,i) (-1)^{i+1} 3^{3^{m-i} 2^{i-1}}, positive and
    // negative parts kept apart.
    let k = m - 1;
    let (mut pos, mut neg) = (BigUint::from(0u32), BigUint::from(0u32));
    let mut binom = BigUint::from(1u32);
    for i in 1..=m {
        binom = binom * BigUint::from(m - i + 1) / BigUint::from(i);
        let e = 3u32.pow((k - (i - 1)) as u32) * 2u32.pow((i - 1) as u32);
        let term = &binom * BigUint::from(3u32).pow(e);
        if i % 2 == 1 {
            pos += term;
        } else {
            neg += term;
        }
    }
    pos - neg
}

// ----- criteria ----------------------------------------------------------

fn criterion_1() -> Verdict {
    let expected = [1usize, 4, 13, 40, 121, 364, 1093, 3280];
    let start = Instant::now();
    let mut counts = Vec::new();
    for (k, &want) in expected.iter().enumerate() {
        let b = FreeInstance::build(k).map_err(|e| e.to_string())?;
        let oracle = surviving_sign_vectors(k);
        let n = b.alg().atom_count();
        ensure(n == want && oracle.len() == want, || {
            format!("k={k}: {n} atoms, oracle {}, expected {want}", oracle.len())
        })?;
        let labels: HashSet<u64> = b.alg().atom_labels().iter().map(|l| l.0).collect();
        ensure(oracle.iter().all(|v| labels.contains(v)), || {
            format!("k={k}: surviving sign vectors differ from atom labels")
        })?;
        counts.push(n.to_string());
    }
    let t = start.elapsed();
    within(t, C1_TIME, "k = 0..7")?;
    Ok(format!("atoms {} in {t:.2?}", counts.join(", ")))
}

fn criterion_2() -> Verdict {
    let mut prev = FreeInstance::build(0).map_err(|e| e.to_string())?;
    for k in 1..=7 {
        let next = FreeInstance::build(k).map_err(|e| e.to_string())?;
        let r = split_report(&prev, &next);
        ensure(r.atoms == 3 * r.previous_atoms + 1, || {
            format!("k={k}: {} atoms", r.atoms)
        })?;
        ensure(r.children.iter().all(|&c| c == 3), || {
            format!("k={k}: an atom did not split in three")
        })?;
        let a = next.new_atom();
        ensure(a.is_atom(), || {
            format!("k={k}: a_k has {} atoms", a.atom_count())
        })?;
        let idx = a.atoms().iter().next().unwrap();
        ensure(r.orphans == vec![idx], || {
            format!("k={k}: orphans {:?}, a_k = {idx}", r.orphans)
        })?;
        prev = next;
    }
    Ok("k = 1..7: 3 children per atom, a_k the only new atom".into())
}

fn criterion_3() -> Verdict {
    let mut parts = Vec::new();
    for (k, want, limit) in [
        (0, 3usize, C3_QUICK_TIME),
        (1, 45, C3_QUICK_TIME),
        (2, 56943, C3_LONG_TIME),
    ] {
        let b = FreeInstance::build(k).map_err(|e| e.to_string())?;
        let start = Instant::now();
        let lx = b.build_lx().map_err(|e| e.to_string())?;
        let t = start.elapsed();
        within(t, limit, &format!("L(X) at k={k}"))?;
        let formula = free_algebra_size(k + 1).map_err(|e| e.to_string())?;
        let oracle = lx_oracle(&b);
        ensure(
            lx.len() == want && formula == BigUint::from(want) && oracle.len() == want,
            || {
                format!(
                    "k={k}: enumerated {}, formula {formula}, oracle {}",
                    lx.len(),
                    oracle.len()
                )
            },
        )?;
        let packed: BTreeSet<Packed> = lx
            .iter()
            .map(|x| Packed {
                lo: x.lo().bits().unwrap(),
                hi: x.hi().bits().unwrap(),
            })
            .collect();
        ensure(packed == oracle, || {
            format!("k={k}: L(X) differs from the Δ-pair oracle")
        })?;
        parts.push(format!("{want} ({t:.2?})"));
    }
    Ok(format!("|L(X)| = {}", parts.join(", ")))
}

fn criterion_4() -> Verdict {
    let mut parts = Vec::new();
    for (k, limit) in [(0, C4_QUICK_TIME), (1, C4_QUICK_TIME), (2, C4_LONG_TIME)] {
        let b = FreeInstance::build(k).map_err(|e| e.to_string())?;
        let space = b
            .packed_space_for_enumeration()
            .map_err(|e| e.to_string())?;
        let start = Instant::now();
        let c = packed_closure(
            &space,
            &b.packed_generators(&space),
            ClosureOptions::default(),
            |_| {},
        );
        let t = start.elapsed();
        within(t, limit, &format!("closure at k={k}"))?;
        ensure(c.complete, || format!("k={k}: closure incomplete"))?;
        let closure: BTreeSet<Packed> = c.elements.iter().copied().collect();
        let lx = lx_oracle(&b);
        ensure(closure == lx, || {
            format!("k={k}: closure {} vs L(X) {}", closure.len(), lx.len())
        })?;
        parts.push(format!("k={k}: {} ({t:.2?})", closure.len()));
    }
    Ok(format!("closure = L(X): {}", parts.join(", ")))
}

fn criterion_5() -> Verdict {
    let mut localizations = 0;
    for n in 0..=4 {
        let alg = BoolAlg::powerset(n);
        let all: BTreeSet<Interval> = all_intervals(&alg)
            .map_err(|e| e.to_string())?
            .into_iter()
            .collect();
        let t = CubicTable::from_intervals(&all).map_err(|e| e.to_string())?;
        let cubic = check_cubic_axioms(&t, Coverage::default());
        let mr = check_mr_axiom(&t, Coverage::default());
        ensure(cubic.exhaustive && mr.exhaustive, || {
            format!("{n} atoms: not exhaustive")
        })?;
        ensure(cubic.passed() && mr.passed(), || {
            format!("{n} atoms: {cubic:?} {mr:?}")
        })?;
        for a in &all {
            let la = localization(&alg, a).map_err(|e| e.to_string())?;
            let lt = CubicTable::from_intervals(&la).map_err(|e| format!("L_a not closed: {e}"))?;
            let r = check_mr_axiom(&lt, Coverage::default());
            ensure(r.passed(), || {
                format!("{n} atoms: L_a fails MR at a = {a:?}")
            })?;
            localizations += 1;
        }
    }
    Ok(format!(
        "I(B) for 0..4 atoms: cubic + MR exhaustive; {localizations} localizations MR"
    ))
}

fn preceq_three_ways(a: &Interval, b: &Interval, loc_a: &BTreeSet<Interval>) -> Result<(), String> {
    let d1 = a.preceq(b).map_err(|e| e.to_string())?;
    let d2 = loc_a.contains(b);
    let d3 = a.preceq_via_meet(b).map_err(|e| e.to_string())?;
    ensure(d1 == d2 && d2 == d3, || {
        format!("≼ disagrees at {a:?}, {b:?}: {d1} {d2} {d3}")
    })
}

fn intersection_law(
    a: &Interval,
    b: &Interval,
    loc: &dyn Fn(&Interval) -> BTreeSet<Interval>,
) -> Result<(), String> {
    let la = loc(a);
    let lb = loc(b);
    let meet: BTreeSet<Interval> = la.intersection(&lb).cloned().collect();
    let c = a.join(&a.join(b).delta(b).map_err(|e| e.to_string())?);
    ensure(meet == loc(&c), || {
        format!("L_a ∩ L_b ≠ L_c at {a:?}, {b:?}")
    })
}

fn criterion_6() -> Verdict {
    let mut pairs = 0usize;
    for n in 0..=3 {
        let alg = BoolAlg::powerset(n);
        let all = all_intervals(&alg).map_err(|e| e.to_string())?;
        let locs: Vec<BTreeSet<Interval>> = all
            .iter()
            .map(|a| localization_by_delta(&alg, a).unwrap())
            .collect();
        let loc = |x: &Interval| locs[all.binary_search(x).unwrap()].clone();
        for (i, a) in all.iter().enumerate() {
            for b in &all {
                preceq_three_ways(a, b, &locs[i])?;
                intersection_law(a, b, &loc)?;
                pairs += 1;
            }
        }
    }
    let alg = BoolAlg::powerset(4);
    let all = all_intervals(&alg).map_err(|e| e.to_string())?;
    let locs: Vec<BTreeSet<Interval>> = all
        .iter()
        .map(|a| localization_by_delta(&alg, a).unwrap())
        .collect();
    let loc = |x: &Interval| locs[all.binary_search(x).unwrap()].clone();
    let mut rng = rand::rngs::StdRng::seed_from_u64(SEED);
    for _ in 0..C6_RANDOM_PAIRS {
        let i = rng.gen_range(0..all.len());
        let j = rng.gen_range(0..all.len());
        preceq_three_ways(&all[i], &all[j], &locs[i])?;
        intersection_law(&all[i], &all[j], &loc)?;
    }
    Ok(format!(
        "{pairs} exhaustive pairs (≤ 3 atoms), {C6_RANDOM_PAIRS} random at 4 atoms"
    ))
}

fn criterion_7() -> Verdict {
    let mut checked = 0;
    for k in 0..=3 {
        let b = FreeInstance::build(k).map_err(|e| e.to_string())?;
        let alg = b.alg();
        for mask in 1u32..1 << (k + 1) {
            let j: Vec<usize> = (0..=k).filter(|i| mask >> i & 1 == 1).collect();
            let seq = eta(&b, &j).map_err(|e| e.to_string())?;
            ensure(seq.len() == j.len(), || "η length".into())?;
            for (i, e) in seq.iter().enumerate() {
                let closed = eta_closed_form(&b, &j, i).map_err(|e| e.to_string())?;
                ensure(*e == closed, || {
                    format!("k={k} J={j:?} i={i}: η ≠ closed form")
                })?;
                let want = 3usize.pow((k - i) as u32) * 2usize.pow(i as u32);
                // Atoms of [η, 1]: the atoms that can leave lo or join hi.
                let covers = e.lo().atom_count() + (!e.hi()).atom_count();
                let got = atoms_in_upper_interval(alg, e).map_err(|e| e.to_string())?;
                ensure(got == want && covers == want, || {
                    format!("k={k} J={j:?} i={i}: {got} / {covers} atoms, want {want}")
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} η values, all 3^(k-i)·2^i"))
}

fn criterion_8() -> Verdict {
    let mut checks = 0usize;
    for k in 0..=3 {
        let b = FreeInstance::build(k).map_err(|e| e.to_string())?;
        let alg = b.alg();
        let atoms: Vec<Element> = alg.atoms().collect();
        let rs: Vec<SignedSet> = atoms.iter().map(|a| r_map(&b, a).unwrap()).collect();
        let distinct: BTreeSet<&SignedSet> = rs.iter().collect();
        ensure(distinct.len() == rs.len(), || {
            format!("k={k}: R not injective")
        })?;
        let inductive = r_map_inductive(k).map_err(|e| e.to_string())?;
        ensure(inductive == rs, || format!("k={k}: inductive R differs"))?;
        for s in SignedSet::all(k + 1).filter(|s| !s.is_top()) {
            let j = j_interval(&b, s).map_err(|e| e.to_string())?;
            for (a, &r) in atoms.iter().zip(&rs) {
                let by_def = a.leq(j.lo()) || (a & j.hi()).is_bottom();
                let by_lib = associated(alg, a, &j).unwrap().is_associated();
                let by_r = r.leq(s) || r.leq(s.swap());
                ensure(by_def == by_lib && by_lib == by_r, || {
                    format!("k={k} s={s} R(a)={r}: def {by_def}, lib {by_lib}, R {by_r}")
                })?;
                checks += 1;
            }
            let a = atom_for_signed_set(&b, s).map_err(|e| format!("k={k} s={s}: {e}"))?;
            let r = r_map(&b, &a).unwrap();
            ensure(r == s || r == s.swap(), || {
                format!("k={k}: atom for {s} has R = {r}")
            })?;
        }
    }
    Ok(format!(
        "injective, inductive = closed form, {checks} association cases, round trips"
    ))
}

fn criterion_9() -> Verdict {
    for m in 1..=8 {
        let size = free_algebra_size(m).map_err(|e| e.to_string())?;
        let oracle = inclusion_exclusion_oracle(m);
        ensure(size == oracle, || format!("m={m}: formula mismatch"))?;
        let bound = BigUint::from(3u32).pow(4u32.pow(m as u32));
        ensure(size <= bound, || format!("m={m}: size exceeds 3^(2^(2m))"))?;
    }
    ensure(
        inclusion_exclusion_oracle(3) == BigUint::from(56943u32),
        || "m=3 oracle".into(),
    )?;
    Ok("|Fr(m)| <= 3^(2^(2m)) for m = 1..8".into())
}

fn criterion_10() -> Verdict {
    let dir = std::env::temp_dir().join(format!("cubal-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for name in ["first.json", "second.json"] {
        let p = dir.join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_cubal"))
            .args(["export", "--k", "1", "--what", "table", "--out"])
            .arg(&p)
            .status()
            .map_err(|e| e.to_string())?;
        ensure(status.success(), || format!("export exited with {status}"))?;
        outputs.push(std::fs::read(&p).map_err(|e| e.to_string())?);
    }
    let _ = std::fs::remove_dir_all(&dir);
    ensure(outputs[0] == outputs[1], || "exports differ".into())?;
    Ok(format!("two exports, {} identical bytes", outputs[0].len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("atom-count law", criterion_1),
        ("recurrence and splitting", criterion_2),
        ("size formula vs enumeration", criterion_3),
        ("closure equals L(X)", criterion_4),
        ("axiom suites", criterion_5),
        ("≼ equivalence and intersection law", criterion_6),
        ("η and Φ", criterion_7),
        ("R-map suite", criterion_8),
        ("upper bound", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let t = start.elapsed();
        match verdict {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{t:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{t:.2?}]", i + 1);
            }
        }
    }
    if failed == 0 {
        println!("acceptance: 10 of 10 passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 10 failed");
        ExitCode::FAILURE
    }
}
