//! Explicit finite cubic algebras and their axiom checkers.
//!
//! A [`CubicTable`] is a carrier `0..n` with a top element, a total join
//! table and a partial Δ table. The order is the one induced by join:
//! `x <= y` iff `x ∨ y = y`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cubic::Interval;
use crate::error::Error;

/// Carriers up to this size are checked exhaustively.
pub const EXHAUSTIVE_LIMIT: usize = 100;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("invalid table JSON: {0}")]
    Json(String),
    #[error("join table must be {n} rows of {n} entries")]
    JoinShape { n: usize },
    #[error("{what} index {value} out of range for carrier of size {n}")]
    OutOfRange {
        what: &'static str,
        value: usize,
        n: usize,
    },
    #[error("delta({y}, {x}) given twice")]
    DuplicateDelta { y: usize, x: usize },
    #[error("carrier must not be empty")]
    EmptyCarrier,
}

/// On-disk form: `{ "carrier": n, "one": i, "join": [[..]], "delta": [[y, x, d], ..] }`
/// with `delta` rows sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CubicTableJson {
    pub carrier: usize,
    pub one: usize,
    pub join: Vec<Vec<usize>>,
    pub delta: Vec<[usize; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicTable {
    n: usize,
    one: usize,
    join: Vec<usize>,
    delta: Vec<Option<usize>>,
}

impl CubicTable {
    pub fn new(
        n: usize,
        one: usize,
        join: Vec<Vec<usize>>,
        delta: impl IntoIterator<Item = (usize, usize, usize)>,
    ) -> Result<Self, TableError> {
        if n == 0 {
            return Err(TableError::EmptyCarrier);
        }
        let range = |what, value: usize| {
            if value < n {
                Ok(value)
            } else {
                Err(TableError::OutOfRange { what, value, n })
            }
        };
        range("one", one)?;
        if join.len() != n || join.iter().any(|r| r.len() != n) {
            return Err(TableError::JoinShape { n });
        }
        let join: Vec<usize> = join
            .into_iter()
            .flatten()
            .map(|v| range("join", v))
            .collect::<Result<_, _>>()?;
        let mut table = vec![None; n * n];
        for (y, x, d) in delta {
            range("delta", y)?;
            range("delta", x)?;
            range("delta", d)?;
            let slot = &mut table[y * n + x];
            if slot.is_some() {
                return Err(TableError::DuplicateDelta { y, x });
            }
            *slot = Some(d);
        }
        Ok(CubicTable {
            n,
            one,
            join,
            delta: table,
        })
    }

    pub fn from_json_str(s: &str) -> Result<Self, TableError> {
        let raw: CubicTableJson =
            serde_json::from_str(s).map_err(|e| TableError::Json(e.to_string()))?;
        Self::from_json(raw)
    }

    pub fn from_json(raw: CubicTableJson) -> Result<Self, TableError> {
        Self::new(
            raw.carrier,
            raw.one,
            raw.join,
            raw.delta.into_iter().map(|[y, x, d]| (y, x, d)),
        )
    }

    pub fn to_json(&self) -> CubicTableJson {
        let n = self.n;
        CubicTableJson {
            carrier: n,
            one: self.one,
            join: self.join.chunks(n).map(|r| r.to_vec()).collect(),
            delta: (0..n)
                .flat_map(|y| (0..n).map(move |x| (y, x)))
                .filter_map(|(y, x)| self.delta(y, x).map(|d| [y, x, d]))
                .collect(),
        }
    }

    /// Table of a set of intervals closed under join and comparable Δ.
    /// Carrier ids follow the canonical `(lo, hi)` order of the set.
    pub fn from_intervals(set: &BTreeSet<Interval>) -> Result<Self, Error> {
        if set.is_empty() {
            return Err(TableError::EmptyCarrier.into());
        }
        let items: Vec<&Interval> = set.iter().collect();
        let index: BTreeMap<&Interval, usize> =
            items.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let id = |x: &Interval| index.get(x).copied().ok_or(Error::NotClosed);
        let n = items.len();
        let one = items
            .iter()
            .position(|x| x.is_top())
            .ok_or(Error::NotClosed)?;
        let mut join = vec![vec![0; n]; n];
        let mut delta = Vec::new();
        for (i, x) in items.iter().enumerate() {
            for (j, y) in items.iter().enumerate() {
                join[i][j] = id(&x.try_join(y)?)?;
                if y.leq(x) {
                    delta.push((i, j, id(&x.delta(y)?)?));
                }
            }
        }
        Ok(Self::new(n, one, join, delta)?)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn one(&self) -> usize {
        self.one
    }

    #[inline]
    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.n + y]
    }

    #[inline]
    pub fn delta(&self, y: usize, x: usize) -> Option<usize> {
        self.delta[y * self.n + x]
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.join(x, y) == y
    }

    /// `xy = Δ(1, Δ(x ∨ y, y)) ∨ y`; `None` if a needed Δ is missing.
    pub fn implication(&self, x: usize, y: usize) -> Option<usize> {
        let d = self.delta(self.join(x, y), y)?;
        Some(self.join(self.delta(self.one, d)?, y))
    }

    /// Greatest common lower bound, if one exists.
    pub fn meet(&self, a: usize, b: usize) -> Option<usize> {
        let lower: Vec<usize> = (0..self.n)
            .filter(|&z| self.leq(z, a) && self.leq(z, b))
            .collect();
        lower
            .iter()
            .copied()
            .find(|&m| lower.iter().all(|&z| self.leq(z, m)))
    }

    /// Covering pairs `(x, y)` with `x < y`, in lexicographic order.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        let lt = |x: usize, y: usize| x != y && self.leq(x, y);
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if lt(x, y) && !(0..n).any(|z| lt(x, z) && lt(z, y)) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn hasse_dot(&self, labels: &[String]) -> String {
        hasse_dot(self.n, labels, &self.covers())
    }
}

/// DOT digraph of a Hasse diagram, edges drawn from lower to upper element.
pub fn hasse_dot(n: usize, labels: &[String], covers: &[(usize, usize)]) -> String {
    let mut s = String::from("digraph hasse {\n  rankdir=BT;\n  node [shape=box, fontsize=10];\n");
    for i in 0..n {
        let label = labels.get(i).cloned().unwrap_or_else(|| i.to_string());
        let _ = writeln!(s, "  n{i} [label=\"{label}\"];");
    }
    for (x, y) in covers {
        let _ = writeln!(s, "  n{x} -> n{y};");
    }
    s.push_str("}\n");
    s
}

/// Pass/fail record for one axiom.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomOutcome {
    pub axiom: String,
    pub checked: u64,
    pub failures: u64,
    /// Lexicographically least failing tuple seen.
    pub witness: Option<Vec<usize>>,
}

impl AxiomOutcome {
    fn new(axiom: &str) -> Self {
        AxiomOutcome {
            axiom: axiom.to_owned(),
            checked: 0,
            failures: 0,
            witness: None,
        }
    }

    fn record(&mut self, ok: bool, tuple: &[usize]) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.witness.as_deref().is_none_or(|w| tuple < w) {
                self.witness = Some(tuple.to_vec());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub carrier: usize,
    pub exhaustive: bool,
    /// Semilattice laws and the Δ domain. If these fail the order is
    /// meaningless and the axioms proper are not evaluated.
    pub structure: Vec<AxiomOutcome>,
    pub axioms: Vec<AxiomOutcome>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.structure
            .iter()
            .chain(&self.axioms)
            .all(|a| a.passed())
    }

    pub fn structure_ok(&self) -> bool {
        self.structure.iter().all(|a| a.passed())
    }

    pub fn get(&self, axiom: &str) -> Option<&AxiomOutcome> {
        self.structure
            .iter()
            .chain(&self.axioms)
            .find(|a| a.axiom == axiom)
    }
}

/// Tuple source: every tuple in lexicographic order, or a seeded sample.
#[derive(Clone, Copy, Debug)]
pub struct Coverage {
    pub samples: usize,
    pub seed: u64,
}

impl Default for Coverage {
    fn default() -> Self {
        Coverage {
            samples: 200_000,
            seed: 0x5eed,
        }
    }
}

fn tuples(n: usize, arity: usize, cov: Coverage) -> (bool, Box<dyn Iterator<Item = Vec<usize>>>) {
    if n <= EXHAUSTIVE_LIMIT {
        let total = n.pow(arity as u32);
        let it = (0..total).map(move |mut idx| {
            let mut t = vec![0; arity];
            for slot in t.iter_mut().rev() {
                *slot = idx % n;
                idx /= n;
            }
            t
        });
        (true, Box::new(it))
    } else {
        let mut rng = StdRng::seed_from_u64(cov.seed ^ arity as u64);
        let it = (0..cov.samples).map(move |_| (0..arity).map(|_| rng.gen_range(0..n)).collect());
        (false, Box::new(it))
    }
}

fn check_structure(t: &CubicTable, cov: Coverage) -> (bool, Vec<AxiomOutcome>) {
    let n = t.n;
    let mut idem = AxiomOutcome::new("join-idempotent");
    let mut comm = AxiomOutcome::new("join-commutative");
    let mut one = AxiomOutcome::new("join-one");
    let mut dom = AxiomOutcome::new("delta-domain");
    for x in 0..n {
        idem.record(t.join(x, x) == x, &[x]);
        one.record(t.join(x, t.one) == t.one, &[x]);
    }
    for x in 0..n {
        for y in 0..n {
            comm.record(t.join(x, y) == t.join(y, x), &[x, y]);
            dom.record(t.delta(y, x).is_some() == t.leq(x, y), &[y, x]);
        }
    }
    let mut assoc = AxiomOutcome::new("join-associative");
    let (exhaustive, it) = tuples(n, 3, cov);
    for v in it {
        let (x, y, z) = (v[0], v[1], v[2]);
        assoc.record(t.join(t.join(x, y), z) == t.join(x, t.join(y, z)), &v);
    }
    (exhaustive, vec![idem, comm, assoc, one, dom])
}

/// Checks axioms (a)–(f). The exhaustive limit applies to the carrier size;
/// beyond it each axiom is evaluated on `cov.samples` random tuples.
pub fn check_cubic_axioms(t: &CubicTable, cov: Coverage) -> CheckReport {
    let (exhaustive, structure) = check_structure(t, cov);
    let mut report = CheckReport {
        carrier: t.n,
        exhaustive,
        structure,
        axioms: Vec::new(),
    };
    if !report.structure_ok() {
        return report;
    }
    let n = t.n;
    let d = |y: usize, x: usize| t.delta(y, x);
    let mut a = AxiomOutcome::new("a");
    let mut c = AxiomOutcome::new("c");
    let (_, pairs) = tuples(n, 2, cov);
    for v in pairs {
        let (x, y) = (v[0], v[1]);
        if !t.leq(x, y) {
            continue;
        }
        let dyx = d(y, x);
        a.record(dyx.map(|e| t.join(e, x)) == Some(y), &v);
        c.record(dyx.and_then(|e| d(y, e)) == Some(x), &v);
    }
    let mut b = AxiomOutcome::new("b");
    let mut dd = AxiomOutcome::new("d");
    let (_, triples) = tuples(n, 3, cov);
    for v in triples {
        let (x, y, z) = (v[0], v[1], v[2]);
        if !(t.leq(x, y) && t.leq(y, z)) {
            continue;
        }
        let lhs = d(y, x).and_then(|e| d(z, e));
        let rhs = match (d(z, y), d(z, x)) {
            (Some(zy), Some(zx)) => d(zy, zx),
            _ => None,
        };
        b.record(lhs.is_some() && lhs == rhs, &v);
        let mono = match (d(z, x), d(z, y)) {
            (Some(zx), Some(zy)) => t.leq(zx, zy),
            _ => false,
        };
        dd.record(mono, &v);
    }
    let imp = |x: usize, y: usize| t.implication(x, y);
    let mut e = AxiomOutcome::new("e");
    let (_, pairs) = tuples(n, 2, cov);
    for v in pairs {
        let (x, y) = (v[0], v[1]);
        e.record(
            imp(x, y).and_then(|xy| imp(xy, y)) == Some(t.join(x, y)),
            &v,
        );
    }
    let mut f = AxiomOutcome::new("f");
    let (_, triples) = tuples(n, 3, cov);
    for v in triples {
        let (x, y, z) = (v[0], v[1], v[2]);
        let l = imp(y, z).and_then(|yz| imp(x, yz));
        let r = imp(x, z).and_then(|xz| imp(y, xz));
        f.record(l.is_some() && l == r, &v);
    }
    report.axioms = vec![a, b, c, dd, e, f];
    report
}

/// Checks the MR axiom: for `a, b < x`, `Δ(x, a) ∨ b < x` iff `a ∧ b` does
/// not exist. Meets are greatest lower bounds in the join-induced order.
pub fn check_mr_axiom(t: &CubicTable, cov: Coverage) -> CheckReport {
    let (exhaustive, structure) = check_structure(t, cov);
    let mut report = CheckReport {
        carrier: t.n,
        exhaustive,
        structure,
        axioms: Vec::new(),
    };
    if !report.structure_ok() {
        return report;
    }
    let n = t.n;
    let meets: Option<Vec<Option<usize>>> =
        (n <= EXHAUSTIVE_LIMIT).then(|| (0..n * n).map(|i| t.meet(i / n, i % n)).collect());
    let meet = |a: usize, b: usize| match &meets {
        Some(m) => m[a * n + b],
        None => t.meet(a, b),
    };
    let lt = |a: usize, b: usize| a != b && t.leq(a, b);
    let mut mr = AxiomOutcome::new("mr");
    let (_, triples) = tuples(n, 3, cov);
    for v in triples {
        let (x, a, b) = (v[0], v[1], v[2]);
        if !(lt(a, x) && lt(b, x)) {
            continue;
        }
        let lhs = t.delta(x, a).map(|e| lt(t.join(e, b), x));
        mr.record(lhs == Some(meet(a, b).is_none()), &v);
    }
    report.axioms = vec![mr];
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean::BoolAlg;
    use crate::cubic::all_intervals;

    fn interval_table(atoms: usize) -> CubicTable {
        let b = BoolAlg::powerset(atoms);
        CubicTable::from_intervals(&all_intervals(&b).unwrap().into_iter().collect()).unwrap()
    }

    #[test]
    fn interval_algebras_pass_everything() {
        for atoms in 0..=3 {
            let t = interval_table(atoms);
            let r = check_cubic_axioms(&t, Coverage::default());
            assert!(r.exhaustive);
            assert!(r.passed(), "{r:?}");
            assert!(check_mr_axiom(&t, Coverage::default()).passed());
        }
    }

    #[test]
    fn one_element_table_passes_vacuously() {
        let t = CubicTable::new(1, 0, vec![vec![0]], [(0, 0, 0)]).unwrap();
        assert!(check_cubic_axioms(&t, Coverage::default()).passed());
        assert!(check_mr_axiom(&t, Coverage::default()).passed());
    }

    #[test]
    fn two_element_chain_is_not_cubic() {
        // carrier {x = 0, 1 = 1}, Δ(1, x) = x: Δ(1, x) ∨ x = x, not 1.
        let t = CubicTable::new(
            2,
            1,
            vec![vec![0, 1], vec![1, 1]],
            [(0, 0, 0), (1, 0, 0), (1, 1, 1)],
        )
        .unwrap();
        let r = check_cubic_axioms(&t, Coverage::default());
        assert!(r.structure_ok());
        let a = r.get("a").unwrap();
        assert!(!a.passed());
        assert_eq!(a.witness, Some(vec![0, 1]));
        let mr = check_mr_axiom(&t, Coverage::default());
        assert_eq!(mr.get("mr").unwrap().checked, 1);
        assert!(!mr.passed());
    }

    #[test]
    fn two_element_chain_with_swap_is_cubic() {
        // {p, q, 1} with p, q < 1 and Δ(1, p) = q is the smallest non-trivial case.
        let t = CubicTable::new(
            3,
            2,
            vec![vec![0, 2, 2], vec![2, 1, 2], vec![2, 2, 2]],
            [(0, 0, 0), (1, 1, 1), (2, 0, 1), (2, 1, 0), (2, 2, 2)],
        )
        .unwrap();
        assert!(check_cubic_axioms(&t, Coverage::default()).passed());
        assert!(check_mr_axiom(&t, Coverage::default()).passed());
    }

    #[test]
    fn corrupted_delta_breaks_axiom_c() {
        let mut raw = interval_table(1).to_json();
        // Point Δ(y, x) at y for some x < y.
        let row = raw.delta.iter_mut().find(|[y, x, _]| y != x).unwrap();
        row[2] = row[0];
        let t = CubicTable::from_json(raw).unwrap();
        let r = check_cubic_axioms(&t, Coverage::default());
        let c = r.get("c").unwrap();
        assert!(!c.passed());
        assert!(c.witness.is_some());
        assert!(!r.passed());
    }

    #[test]
    fn non_semilattice_is_a_structure_failure() {
        let t =
            CubicTable::new(2, 1, vec![vec![0, 0], vec![1, 1]], [(0, 0, 0), (1, 1, 1)]).unwrap();
        let r = check_cubic_axioms(&t, Coverage::default());
        assert!(!r.structure_ok());
        assert!(r.axioms.is_empty());
    }

    #[test]
    fn json_round_trip_and_sorted_delta() {
        let t = interval_table(2);
        let raw = t.to_json();
        let mut sorted = raw.delta.clone();
        sorted.sort();
        assert_eq!(raw.delta, sorted);
        let text = serde_json::to_string(&raw).unwrap();
        assert_eq!(CubicTable::from_json_str(&text).unwrap(), t);
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = CubicTable::from_json_str("{\"carrier\": 2,\n \"one\": }").unwrap_err();
        match err {
            TableError::Json(msg) => assert!(msg.contains("line 2"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            CubicTable::new(2, 5, vec![vec![0, 1], vec![1, 1]], []).unwrap_err(),
            TableError::OutOfRange {
                what: "one",
                value: 5,
                n: 2
            }
        );
        assert_eq!(
            CubicTable::new(2, 1, vec![vec![0, 1]], []).unwrap_err(),
            TableError::JoinShape { n: 2 }
        );
    }

    #[test]
    fn sampled_mode_on_large_carrier() {
        let t = interval_table(5);
        assert_eq!(t.len(), 243);
        let cov = Coverage {
            samples: 20_000,
            seed: 7,
        };
        let r = check_cubic_axioms(&t, cov);
        assert!(!r.exhaustive);
        assert!(r.passed());
        assert!(r.get("f").unwrap().checked == 20_000);
    }

    #[test]
    fn covers_of_interval_algebra() {
        // I(2) on one atom: two vertices below the top.
        let t = interval_table(1);
        assert_eq!(t.covers().len(), 2);
        let dot = t.hasse_dot(&[]);
        assert!(dot.starts_with("digraph hasse {"));
        assert_eq!(dot.matches("->").count(), 2);
    }
}
