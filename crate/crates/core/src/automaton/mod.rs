//! Synthesis and analysis of the automaton computing n -> C_n mod p.
//!
//! States are closed under the per-digit section operators starting from
//! the Catalan generating function; reading the base-p digits of n
//! least-significant-first ends on a state whose constant term is C_n mod p.

mod state;

pub use state::{cartier_transition, initial_state, output, AutomatonState};

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::Serialize;

use crate::algebra::{digits_lsd, fp_inverse, is_prime, mul_mod, poly_mul, FpPolynomial, Residue};
use crate::oracle::lucas_binomial;
use crate::{Error, Result};

/// Deterministic finite automaton with output. States are numbered in
/// discovery order (digits explored ascending), so synthesis is
/// reproducible bit-for-bit.
#[derive(Clone, Debug)]
pub struct Dfao {
    p: u64,
    states: Vec<AutomatonState>,
    delta: Vec<Vec<u32>>,
    out: Vec<Residue>,
    q0: u32,
}

/// One state inside a scalar-multiple class: `label` is the scalar tying
/// it to the class's normalized representative.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyMember {
    pub state: u32,
    pub label: Residue,
}

/// Partition of the non-zero-series states into scalar-multiple classes,
/// with one class designated as the constant family: the class holding
/// the series c/G for every non-zero c, on which each digit d <= (p-1)/2
/// multiplies the label by binom(2d, d).
#[derive(Clone, Debug)]
pub struct FamilyTable {
    classes: Vec<Vec<FamilyMember>>,
    constant: usize,
    position: HashMap<u32, (usize, usize)>,
}

impl FamilyTable {
    pub fn classes(&self) -> &[Vec<FamilyMember>] {
        &self.classes
    }

    /// Members of the designated constant family, by state index.
    pub fn constant_class(&self) -> &[FamilyMember] {
        &self.classes[self.constant]
    }

    /// (class index, position within class) of a state; None for the
    /// zero-series state, which belongs to no class.
    pub fn locate(&self, state: u32) -> Option<(usize, usize)> {
        self.position.get(&state).copied()
    }

    /// The constant-family member carrying a given label.
    pub fn member_by_label(&self, label: Residue) -> Option<FamilyMember> {
        self.constant_class()
            .iter()
            .copied()
            .find(|m| m.label == label)
    }

    pub fn is_constant_member(&self, state: u32) -> bool {
        matches!(self.locate(state), Some((c, _)) if c == self.constant)
    }
}

/// Digit strings that pump: for every j >= 0 the number with digits
/// w1 w2^j w3 (least-significant-first) evaluates to the same residue.
/// w3 is non-empty and ends with a non-zero digit, so the denoted numbers
/// are pairwise distinct.
#[derive(Clone, Debug, Serialize)]
pub struct PumpingCertificate {
    pub w1: Vec<u32>,
    pub w2: Vec<u32>,
    pub w3: Vec<u32>,
}

impl PumpingCertificate {
    /// The digit string for a given number of pump repetitions.
    pub fn digits(&self, j: usize) -> Vec<u32> {
        let mut s = self.w1.clone();
        for _ in 0..j {
            s.extend_from_slice(&self.w2);
        }
        s.extend_from_slice(&self.w3);
        s
    }

    /// Value of the pumped digit string, if it fits in u128.
    pub fn value(&self, j: usize, p: u64) -> Option<u128> {
        let mut acc = 0u128;
        for &d in self.digits(j).iter().rev() {
            acc = acc.checked_mul(p as u128)?.checked_add(d as u128)?;
        }
        Some(acc)
    }
}

/// Default synthesis cap: generous against the observed closure size,
/// so hitting it means a bug, not a tight budget.
pub fn default_state_cap(p: u64) -> usize {
    (50 * p * p) as usize
}

pub fn synthesize(p: u64) -> Result<Dfao> {
    synthesize_with_cap(p, default_state_cap(p))
}

/// Breadth-first closure of the initial state under all p section
/// operators. Every discovered state is checked pole-free by computing
/// its output eagerly.
pub fn synthesize_with_cap(p: u64, cap: usize) -> Result<Dfao> {
    if p < 5 || !is_prime(p) {
        return Err(Error::InvalidModulus(p));
    }
    let init = initial_state(p);
    let mut states = vec![init.clone()];
    let mut out = vec![output(&init, p)?];
    let mut index: HashMap<AutomatonState, u32> = HashMap::new();
    index.insert(init, 0);
    let mut delta: Vec<Vec<u32>> = Vec::new();
    let mut head = 0usize;
    while head < states.len() {
        let mut row = Vec::with_capacity(p as usize);
        for r in 0..p as u32 {
            let t = cartier_transition(&states[head], r, p);
            let idx = match index.get(&t) {
                Some(&i) => i,
                None => {
                    if states.len() >= cap {
                        return Err(Error::StateCap { p, cap });
                    }
                    let i = states.len() as u32;
                    out.push(output(&t, p)?);
                    index.insert(t.clone(), i);
                    states.push(t);
                    i
                }
            };
            row.push(idx);
        }
        delta.push(row);
        head += 1;
    }
    Ok(Dfao {
        p,
        states,
        delta,
        out,
        q0: 0,
    })
}

impl Dfao {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn q0(&self) -> u32 {
        self.q0
    }

    pub fn states(&self) -> &[AutomatonState] {
        &self.states
    }

    pub fn outputs(&self) -> &[Residue] {
        &self.out
    }

    pub fn output_of(&self, s: u32) -> Residue {
        self.out[s as usize]
    }

    pub fn next(&self, s: u32, d: u32) -> u32 {
        self.delta[s as usize][d as usize]
    }

    /// End state of a digit string read from q0.
    pub fn walk(&self, digits: &[u32]) -> u32 {
        let mut s = self.q0;
        for &d in digits {
            s = self.next(s, d);
        }
        s
    }

    pub fn eval_digits(&self, digits: &[u32]) -> Residue {
        self.out[self.walk(digits) as usize]
    }

    /// C_n mod p through the automaton.
    pub fn eval(&self, n: u64) -> Residue {
        self.eval_digits(&digits_lsd(n, self.p))
    }

    /// Moore partition refinement. The result is language-equivalent with
    /// at most as many states; blocks are numbered by their smallest
    /// original state index, so the result is deterministic.
    pub fn minimize(&self) -> Dfao {
        let n = self.states.len();
        // initial partition: by output value
        let mut ranks: BTreeMap<Residue, u32> = BTreeMap::new();
        for &o in &self.out {
            let next = ranks.len() as u32;
            ranks.entry(o).or_insert(next);
        }
        let mut part: Vec<u32> = self.out.iter().map(|o| ranks[o]).collect();
        loop {
            let mut seen: HashMap<(u32, Vec<u32>), u32> = HashMap::new();
            let mut next_part = vec![0u32; n];
            for s in 0..n {
                let sig = (
                    part[s],
                    self.delta[s].iter().map(|&t| part[t as usize]).collect(),
                );
                let fresh = seen.len() as u32;
                next_part[s] = *seen.entry(sig).or_insert(fresh);
            }
            let stable = next_part == part;
            part = next_part;
            if stable {
                break;
            }
        }
        let block_count = part.iter().max().map_or(0, |&m| m as usize + 1);
        // first state of each block in index order is its representative
        let mut rep = vec![u32::MAX; block_count];
        for s in (0..n).rev() {
            rep[part[s] as usize] = s as u32;
        }
        let states = rep
            .iter()
            .map(|&r| self.states[r as usize].clone())
            .collect();
        let out = rep.iter().map(|&r| self.out[r as usize]).collect();
        let delta = rep
            .iter()
            .map(|&r| {
                self.delta[r as usize]
                    .iter()
                    .map(|&t| part[t as usize])
                    .collect()
            })
            .collect();
        Dfao {
            p: self.p,
            states,
            delta,
            out,
            q0: part[self.q0 as usize],
        }
    }

    /// Group the non-zero-series states into scalar-multiple classes and
    /// designate the constant family: the unique class that has a member
    /// labeled 1 and is closed under every digit d <= (p-1)/2 with label
    /// multiplier binom(2d, d).
    pub fn detect_constant_family(&self) -> Result<FamilyTable> {
        let p = self.p;
        // projective normalization: divide (U, V) by the first non-zero
        // coefficient; that coefficient is the label
        let mut keyed: BTreeMap<AutomatonState, Vec<FamilyMember>> = BTreeMap::new();
        for (i, s) in self.states.iter().enumerate() {
            if s.is_zero_series() {
                continue;
            }
            let label =
                s.u.coeffs()
                    .iter()
                    .chain(s.v.coeffs())
                    .copied()
                    .find(|&c| c != 0)
                    .expect("non-zero series has a non-zero coefficient");
            let inv = fp_inverse(label, p)?;
            let scale = FpPolynomial::constant(inv, p);
            let key = AutomatonState {
                u: poly_mul(&s.u, &scale, p),
                v: poly_mul(&s.v, &scale, p),
                a: s.a,
                b: s.b,
            };
            keyed.entry(key).or_default().push(FamilyMember {
                state: i as u32,
                label,
            });
        }
        let classes: Vec<Vec<FamilyMember>> = keyed.into_values().collect();
        let mut position = HashMap::new();
        for (c, members) in classes.iter().enumerate() {
            for (j, m) in members.iter().enumerate() {
                position.insert(m.state, (c, j));
            }
        }
        let half = ((p - 1) / 2) as u32;
        let qualifying: Vec<usize> = (0..classes.len())
            .filter(|&c| {
                classes[c].iter().any(|m| m.label == 1)
                    && classes[c].iter().all(|m| {
                        (0..=half).all(|d| {
                            let t = self.next(m.state, d);
                            let expected =
                                mul_mod(m.label, lucas_binomial(2 * d as u64, d as u64, p), p);
                            match position.get(&t) {
                                Some(&(tc, tj)) => tc == c && classes[tc][tj].label == expected,
                                None => false,
                            }
                        })
                    })
            })
            .collect();
        let constant = match qualifying.as_slice() {
            [one] => *one,
            [] => return Err(Error::NoQualifyingFamily),
            many => return Err(Error::AmbiguousFamily(many.len())),
        };
        Ok(FamilyTable {
            classes,
            constant,
            position,
        })
    }

    /// Follow one digit d <= (p-1)/2 from a constant-family member. The
    /// designated family is closed under these digits (enforced when the
    /// table is built), and the landing label is label * binom(2d, d).
    pub fn family_step(
        &self,
        table: &FamilyTable,
        member: FamilyMember,
        d: u32,
    ) -> Result<FamilyMember> {
        let half = ((self.p - 1) / 2) as u32;
        if d > half {
            return Err(Error::DigitRange { p: self.p, d, half });
        }
        debug_assert!(table.is_constant_member(member.state));
        let t = self.next(member.state, d);
        match table.locate(t) {
            Some((c, j)) if c == table.constant => Ok(table.classes[c][j]),
            _ => Err(Error::OutsideFamily {
                label: member.label,
                d,
            }),
        }
    }

    /// Exact count of n < p^k per residue: dynamic programming over
    /// length-k digit strings, each n < p^k padded with most-significant
    /// zeros to exactly k digits.
    pub fn transfer_counts(&self, k: u32) -> BTreeMap<Residue, u128> {
        let n = self.states.len();
        let mut cur = vec![0u128; n];
        cur[self.q0 as usize] = 1;
        for _ in 0..k {
            let mut next = vec![0u128; n];
            for (s, &c) in cur.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for &t in &self.delta[s] {
                    next[t as usize] += c;
                }
            }
            cur = next;
        }
        let mut counts: BTreeMap<Residue, u128> = BTreeMap::new();
        for r in 0..self.p {
            counts.insert(r, 0);
        }
        for (s, &c) in cur.iter().enumerate() {
            *counts.get_mut(&self.out[s]).unwrap() += c;
        }
        counts
    }

    /// Shortest digit path q0 -> target, digits explored ascending.
    fn bfs_path(&self, from: u32, to: u32) -> Option<Vec<u32>> {
        if from == to {
            return Some(Vec::new());
        }
        let n = self.states.len();
        let mut parent: Vec<Option<(u32, u32)>> = vec![None; n];
        let mut queue = VecDeque::new();
        queue.push_back(from);
        parent[from as usize] = Some((from, u32::MAX));
        while let Some(s) = queue.pop_front() {
            for d in 0..self.p as u32 {
                let t = self.next(s, d);
                if parent[t as usize].is_none() {
                    parent[t as usize] = Some((s, d));
                    if t == to {
                        let mut path = Vec::new();
                        let mut cur = to;
                        while cur != from {
                            let (prev, digit) = parent[cur as usize].unwrap();
                            path.push(digit);
                            cur = prev;
                        }
                        path.reverse();
                        return Some(path);
                    }
                    queue.push_back(t);
                }
            }
        }
        None
    }

    /// Shortest non-empty cycle at t; ties broken by the smallest first
    /// digit (candidates tried in ascending-digit order).
    fn shortest_cycle(&self, t: u32) -> Option<Vec<u32>> {
        let mut best: Option<Vec<u32>> = None;
        for d in 0..self.p as u32 {
            let succ = self.next(t, d);
            if let Some(rest) = self.bfs_path(succ, t) {
                let mut cand = vec![d];
                cand.extend(rest);
                if best.as_ref().is_none_or(|b| cand.len() < b.len()) {
                    best = Some(cand);
                }
            }
        }
        best
    }

    /// Shortest digit string from t that ends with a non-zero digit and
    /// lands on a state with output r.
    fn suffix_to_output(&self, t: u32, r: Residue) -> Option<Vec<u32>> {
        let n = self.states.len();
        let mut parent: Vec<Option<(u32, u32)>> = vec![None; n];
        let mut queue = VecDeque::new();
        parent[t as usize] = Some((t, u32::MAX));
        queue.push_back(t);
        let path_to = |parent: &[Option<(u32, u32)>], mut cur: u32| {
            let mut path = Vec::new();
            while cur != t {
                let (prev, digit) = parent[cur as usize].unwrap();
                path.push(digit);
                cur = prev;
            }
            path.reverse();
            path
        };
        while let Some(s) = queue.pop_front() {
            // closing digit first: BFS order makes the first hit shortest
            for d in 1..self.p as u32 {
                if self.output_of(self.next(s, d)) == r {
                    let mut path = path_to(&parent, s);
                    path.push(d);
                    return Some(path);
                }
            }
            for d in 0..self.p as u32 {
                let u = self.next(s, d);
                if parent[u as usize].is_none() {
                    parent[u as usize] = Some((s, d));
                    queue.push_back(u);
                }
            }
        }
        None
    }

    /// Find digit strings (w1, w2, w3) such that w1 w2^j w3 evaluates to r
    /// for every j >= 0: w1 reaches a state on a cycle w2, and w3 leaves
    /// the cycle for an r-output state, ending with a non-zero digit so
    /// the pumped strings denote distinct numbers.
    pub fn pumping_certificate(&self, r: Residue) -> Result<PumpingCertificate> {
        for t in 0..self.states.len() as u32 {
            let Some(w1) = self.bfs_path(self.q0, t) else {
                continue;
            };
            let Some(w2) = self.shortest_cycle(t) else {
                continue;
            };
            let Some(w3) = self.suffix_to_output(t, r) else {
                continue;
            };
            let cert = PumpingCertificate { w1, w2, w3 };
            for j in 0..=3 {
                debug_assert_eq!(self.eval_digits(&cert.digits(j)), r);
            }
            return Ok(cert);
        }
        Err(Error::NoCertificate(r))
    }

    /// JSON form {p, q0, outputs, delta}; byte-stable for a fixed input.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Shape<'a> {
            p: u64,
            q0: u32,
            outputs: &'a [Residue],
            delta: &'a [Vec<u32>],
        }
        let mut s = serde_json::to_string_pretty(&Shape {
            p: self.p,
            q0: self.q0,
            outputs: &self.out,
            delta: &self.delta,
        })
        .expect("automaton serialization cannot fail");
        s.push('\n');
        s
    }

    /// GraphViz form: one node per state labeled "s{i}/{out}", one edge
    /// per (source, target) pair labeled with the sorted digit list.
    pub fn to_dot(&self) -> String {
        use std::fmt::Write;
        let mut dot = String::new();
        let _ = writeln!(dot, "digraph dfao_p{} {{", self.p);
        let _ = writeln!(dot, "  rankdir=LR;");
        let _ = writeln!(dot, "  node [shape=circle];");
        for (i, o) in self.out.iter().enumerate() {
            let _ = writeln!(dot, "  s{i} [label=\"s{i}/{o}\"];");
        }
        for (s, row) in self.delta.iter().enumerate() {
            let mut grouped: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
            for (d, &t) in row.iter().enumerate() {
                grouped.entry(t).or_default().push(d as u32);
            }
            for (t, digits) in grouped {
                let label = digits
                    .iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                let _ = writeln!(dot, "  s{s} -> s{t} [label=\"{label}\"];");
            }
        }
        dot.push_str("}\n");
        dot
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::catalan_mod;

    #[test]
    fn synthesize_rejects_bad_moduli() {
        assert_eq!(synthesize(4).unwrap_err(), Error::InvalidModulus(4));
        assert_eq!(synthesize(3).unwrap_err(), Error::InvalidModulus(3));
        assert_eq!(synthesize(9).unwrap_err(), Error::InvalidModulus(9));
    }

    #[test]
    fn synthesize_respects_cap() {
        assert_eq!(
            synthesize_with_cap(5, 3).unwrap_err(),
            Error::StateCap { p: 5, cap: 3 }
        );
    }

    #[test]
    fn eval_matches_oracle_small() {
        for p in [5u64, 7] {
            let a = synthesize(p).unwrap();
            for n in 0..10_000u64 {
                assert_eq!(a.eval(n), catalan_mod(n, p), "p={p} n={n}");
            }
        }
    }

    #[test]
    fn eval_examples() {
        let a5 = synthesize(5).unwrap();
        assert_eq!(a5.eval(0), 1);
        assert_eq!(a5.eval(29), 3);
        let a7 = synthesize(7).unwrap();
        assert_eq!(a7.eval(10), 3);
    }

    #[test]
    fn padding_with_zero_digits_never_changes_output() {
        let p = 5u64;
        let a = synthesize(p).unwrap();
        for n in 0..2_000u64 {
            let mut digits = digits_lsd(n, p);
            let expected = a.eval(n);
            for _ in 0..3 {
                digits.push(0);
                assert_eq!(a.eval_digits(&digits), expected, "n={n}");
            }
        }
    }

    #[test]
    fn synthesis_is_deterministic() {
        let a = synthesize(5).unwrap();
        let b = synthesize(5).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.to_dot(), b.to_dot());
    }

    #[test]
    fn minimize_contracts() {
        let a = synthesize(5).unwrap();
        let m = a.minimize();
        assert!(m.state_count() <= a.state_count());
        assert_eq!(m.minimize().state_count(), m.state_count());
        for n in 0..10_000u64 {
            assert_eq!(m.eval(n), a.eval(n), "n={n}");
        }
    }

    #[test]
    fn constant_family_has_all_nonzero_labels() {
        for p in [5u64, 7] {
            let a = synthesize(p).unwrap();
            let table = a.detect_constant_family().unwrap();
            let mut labels: Vec<u64> = table.constant_class().iter().map(|m| m.label).collect();
            labels.sort_unstable();
            assert_eq!(labels, (1..p).collect::<Vec<_>>(), "p={p}");
            // family labels coincide with outputs on the family
            for m in table.constant_class() {
                assert_eq!(a.output_of(m.state), m.label);
            }
        }
    }

    #[test]
    fn family_step_examples_p5() {
        let a = synthesize(5).unwrap();
        let table = a.detect_constant_family().unwrap();
        let one = table.member_by_label(1).unwrap();
        assert_eq!(a.family_step(&table, one, 0).unwrap().label, 1);
        assert_eq!(a.family_step(&table, one, 1).unwrap().label, 2);
        assert_eq!(a.family_step(&table, one, 2).unwrap().label, 1);
        assert_eq!(
            a.family_step(&table, one, 3),
            Err(Error::DigitRange {
                p: 5,
                d: 3,
                half: 2
            })
        );
    }

    #[test]
    fn family_multipliers_exhaustive() {
        for p in [5u64, 7, 11, 13] {
            let a = synthesize(p).unwrap();
            let table = a.detect_constant_family().unwrap();
            let half = ((p - 1) / 2) as u32;
            for m in table.constant_class() {
                for d in 0..=half {
                    let stepped = a.family_step(&table, *m, d).unwrap();
                    let expected = mul_mod(m.label, lucas_binomial(2 * d as u64, d as u64, p), p);
                    assert_eq!(stepped.label, expected, "p={p} label={} d={d}", m.label);
                }
            }
        }
    }

    #[test]
    fn restricted_digits_stay_in_family() {
        // every n < p^3 with all digits <= (p-1)/2 has non-zero output and
        // ends inside the constant family (p^4 exhaustive runs in the
        // acceptance suite)
        for p in [5u64, 7] {
            let a = synthesize(p).unwrap();
            let table = a.detect_constant_family().unwrap();
            let half = ((p - 1) / 2) as u32;
            for n in 0..p.pow(3) {
                if digits_lsd(n, p).iter().any(|&d| d > half) {
                    continue;
                }
                let end = a.walk(&digits_lsd(n, p));
                assert_ne!(a.output_of(end), 0, "p={p} n={n}");
                assert!(table.is_constant_member(end), "p={p} n={n}");
            }
        }
    }

    #[test]
    fn transfer_counts_examples() {
        let a = synthesize(5).unwrap();
        let k1 = a.transfer_counts(1);
        assert_eq!(k1[&0], 1);
        assert_eq!(k1.values().sum::<u128>(), 5);
        let k2 = a.transfer_counts(2);
        assert_eq!(k2[&0], 13);
        assert_eq!(k2.values().sum::<u128>(), 25);
    }

    #[test]
    fn transfer_counts_match_oracle_scan() {
        for p in [5u64, 7] {
            let a = synthesize(p).unwrap();
            for k in 1..=3u32 {
                let counts = a.transfer_counts(k);
                let mut scan: BTreeMap<u64, u128> = (0..p).map(|r| (r, 0)).collect();
                for v in crate::oracle::catalan_stream(p, p.pow(k)) {
                    *scan.get_mut(&v).unwrap() += 1;
                }
                assert_eq!(counts, scan, "p={p} k={k}");
            }
        }
    }

    #[test]
    fn pumping_certificates_for_all_residues() {
        for p in [5u64, 7] {
            let a = synthesize(p).unwrap();
            for r in 0..p {
                let cert = a.pumping_certificate(r).unwrap();
                assert!(!cert.w2.is_empty());
                assert!(*cert.w3.last().unwrap() > 0);
                let mut values = Vec::new();
                for j in 0..=3 {
                    assert_eq!(a.eval_digits(&cert.digits(j)), r, "p={p} r={r} j={j}");
                    values.push(cert.value(j, p).unwrap());
                }
                // pumped strings denote strictly increasing numbers
                assert!(values.windows(2).all(|w| w[0] < w[1]));
                // cross-check the denoted values against the oracle
                for v in values {
                    if v < 1 << 62 {
                        assert_eq!(catalan_mod(v as u64, p), r);
                    }
                }
            }
        }
    }

    #[test]
    fn json_shape_is_stable() {
        let a = synthesize(5).unwrap();
        let json: serde_json::Value = serde_json::from_str(&a.to_json()).unwrap();
        assert_eq!(json["p"], 5);
        assert_eq!(json["q0"], 0);
        assert_eq!(json["outputs"][0], 1);
        assert_eq!(json["delta"].as_array().unwrap().len(), a.state_count());
    }

    #[test]
    fn dot_mentions_every_state_once() {
        let a = synthesize(5).unwrap();
        let dot = a.to_dot();
        for i in 0..a.state_count() {
            assert!(dot.contains(&format!("s{i} [label=\"s{i}/{}\"];", a.output_of(i as u32))));
        }
        assert!(dot.starts_with("digraph dfao_p5 {"));
        assert!(dot.ends_with("}\n"));
    }
}
