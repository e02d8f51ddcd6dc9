//! The multiplication graph on non-zero residues and the closed walk
//! through all of them.
//!
//! Vertices are 1..p-1. For each generator index d <= (p-1)/2 there is an
//! edge c -> c * binom(2d, d) mod p out of every vertex c, mirroring what
//! one digit d does to a constant-family label in the automaton. Paths are
//! built from residue decompositions, so strong connectivity and the
//! all-vertex closed walk are constructive, not just decided.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{fp_inverse, is_prime, mul_mod, Residue};
use crate::automaton::{Dfao, FamilyTable};
use crate::decomposition::{central_binomial_mod, decompose_residue, flatten};
use crate::{Error, Result};

/// Directed multiplication graph: vertex c has one out-edge per stored
/// multiplier, labeled by the multiplier's index d.
#[derive(Clone, Debug)]
pub struct ConstantGraph {
    p: u64,
    multipliers: Vec<Residue>,
}

/// The graph for a genuine prime p >= 5, with multiplier d = binom(2d, d).
pub fn build_graph(p: u64) -> Result<ConstantGraph> {
    if p < 5 || !is_prime(p) {
        return Err(Error::InvalidModulus(p));
    }
    let multipliers = (0..=((p - 1) / 2) as u32)
        .map(|d| central_binomial_mod(d, p).expect("d <= (p-1)/2"))
        .collect();
    Ok(ConstantGraph { p, multipliers })
}

impl ConstantGraph {
    /// Fixture constructor for tests: any modulus >= 2 and any non-zero
    /// multiplier set, with no claim the result is strongly connected.
    pub fn from_multipliers(p: u64, multipliers: Vec<Residue>) -> Self {
        assert!(p >= 2 && multipliers.iter().all(|&m| m != 0 && m < p));
        Self { p, multipliers }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn multipliers(&self) -> &[Residue] {
        &self.multipliers
    }

    pub fn vertex_count(&self) -> u64 {
        self.p - 1
    }

    pub fn out_degree(&self) -> usize {
        self.multipliers.len()
    }

    /// Target of the edge labeled d out of c.
    pub fn step(&self, c: Residue, d: u32) -> Residue {
        mul_mod(c, self.multipliers[d as usize], self.p)
    }

    fn closure(&self, multipliers: &[Residue]) -> u64 {
        let mut seen = vec![false; self.p as usize];
        seen[1] = true;
        let mut stack = vec![1u64];
        let mut count = 1u64;
        while let Some(c) = stack.pop() {
            for &m in multipliers {
                let t = mul_mod(c, m, self.p);
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    count += 1;
                    stack.push(t);
                }
            }
        }
        count
    }

    /// One strongly connected component covering all p-1 vertices:
    /// everything is reachable from vertex 1 and vertex 1 is reachable
    /// from everything (checked on the reverse graph, whose edges
    /// multiply by the inverse multipliers).
    pub fn strongly_connected(&self) -> bool {
        let inverses: Vec<Residue> = self
            .multipliers
            .iter()
            .map(|&m| fp_inverse(m, self.p).expect("multipliers are non-zero"))
            .collect();
        self.closure(&self.multipliers) == self.p - 1 && self.closure(&inverses) == self.p - 1
    }

    /// GraphViz form: vertices labeled by residue, one edge per
    /// (source, target) pair labeled with its sorted d-list.
    pub fn to_dot(&self) -> String {
        use std::fmt::Write;
        let mut dot = String::new();
        let _ = writeln!(dot, "digraph constant_graph_p{} {{", self.p);
        let _ = writeln!(dot, "  node [shape=circle];");
        for c in 1..self.p {
            let _ = writeln!(dot, "  v{c} [label=\"{c}\"];");
        }
        for c in 1..self.p {
            let mut grouped: BTreeMap<Residue, Vec<u32>> = BTreeMap::new();
            for d in 0..self.multipliers.len() as u32 {
                grouped.entry(self.step(c, d)).or_default().push(d);
            }
            for (t, ds) in grouped {
                let label = ds
                    .iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                let _ = writeln!(dot, "  v{c} -> v{t} [label=\"{label}\"];");
            }
        }
        dot.push_str("}\n");
        dot
    }
}

/// A closed walk in the graph: `vertices[i]` before edge i, and
/// `labels[i]` the d-index of edge i, so `vertices` has one more entry
/// than `labels` and starts and ends at `start`.
#[derive(Clone, Debug, Serialize)]
pub struct WalkCertificate {
    pub p: u64,
    pub start: Residue,
    pub labels: Vec<u32>,
    pub vertices: Vec<Residue>,
}

impl WalkCertificate {
    /// Edge-by-edge validation against a graph: consecutive edges
    /// compose, the walk closes, and every vertex of the graph occurs.
    pub fn validate(&self, g: &ConstantGraph) -> Result<()> {
        let fail = |msg: String| Err(Error::WalkInvalid(msg));
        if self.start == 0 || self.start >= g.p {
            return fail(format!("start {} is not a vertex", self.start));
        }
        if self.vertices.len() != self.labels.len() + 1 {
            return fail(format!(
                "{} vertices do not frame {} edges",
                self.vertices.len(),
                self.labels.len()
            ));
        }
        if self.vertices.first() != Some(&self.start) {
            return fail("walk does not begin at its start vertex".into());
        }
        if self.vertices.last() != Some(&self.start) {
            return fail("walk does not return to its start vertex".into());
        }
        for (i, &d) in self.labels.iter().enumerate() {
            if d as usize >= g.out_degree() {
                return fail(format!("edge {i} label {d} exceeds the generator range"));
            }
            let expected = g.step(self.vertices[i], d);
            if self.vertices[i + 1] != expected {
                return fail(format!(
                    "edge {i}: {} -({d})-> {} but the graph gives {}",
                    self.vertices[i],
                    self.vertices[i + 1],
                    expected
                ));
            }
        }
        for c in 1..g.p {
            if !self.vertices.contains(&c) {
                return fail(format!("vertex {c} is never visited"));
            }
        }
        Ok(())
    }
}

/// Edge labels leading from c1 to c2: the flattened decomposition of
/// c2 * c1^{-1}, since each label d multiplies the vertex by binom(2d,d).
pub fn path_between(c1: Residue, c2: Residue, p: u64) -> Result<Vec<u32>> {
    for c in [c1, c2] {
        if c == 0 {
            return Err(Error::ZeroResidue);
        }
        if c >= p {
            return Err(Error::ResidueRange { r: c, p });
        }
    }
    let ratio = mul_mod(c2, fp_inverse(c1, p)?, p);
    if ratio == 1 {
        return Ok(Vec::new());
    }
    Ok(flatten(&decompose_residue(ratio, p)?))
}

/// Closed walk visiting every vertex: legs between consecutive residues
/// 1, 2, ..., p-1 in ascending order, closed by a final leg back to 1.
/// The certificate is validated before being returned.
pub fn closed_walk_all_vertices(g: &ConstantGraph) -> Result<WalkCertificate> {
    if !g.strongly_connected() {
        return Err(Error::NotStronglyConnected);
    }
    let p = g.p;
    let mut labels = Vec::new();
    let mut vertices = vec![1u64];
    let mut cur = 1u64;
    for target in (2..p).chain(std::iter::once(1)) {
        for d in path_between(cur, target, p)? {
            cur = g.step(cur, d);
            labels.push(d);
            vertices.push(cur);
        }
        if cur != target {
            return Err(Error::WalkInvalid(format!(
                "leg ends at {cur} instead of {target}"
            )));
        }
    }
    let walk = WalkCertificate {
        p,
        start: 1,
        labels,
        vertices,
    };
    walk.validate(g)?;
    Ok(walk)
}

/// Replay a walk inside the synthesized automaton: starting from the
/// constant-family member labeled with the walk's start vertex, each edge
/// label d is one digit-d step, and the member labels must track the
/// walk's vertices exactly.
pub fn replay_walk(a: &Dfao, table: &FamilyTable, walk: &WalkCertificate) -> Result<()> {
    let mut member = table
        .member_by_label(walk.start)
        .ok_or_else(|| Error::ReplayMismatch(format!("no family member labeled {}", walk.start)))?;
    for (i, (&d, &expected)) in walk.labels.iter().zip(&walk.vertices[1..]).enumerate() {
        member = a.family_step(table, member, d)?;
        if member.label != expected {
            return Err(Error::ReplayMismatch(format!(
                "step {i}: family label {} but walk vertex {expected}",
                member.label
            )));
        }
    }
    if member.label != walk.start {
        return Err(Error::ReplayMismatch(format!(
            "walk replay ends at label {} instead of {}",
            member.label, walk.start
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::primes_up_to;
    use crate::automaton::synthesize;

    #[test]
    fn build_rejects_bad_moduli() {
        assert!(matches!(build_graph(4), Err(Error::InvalidModulus(4))));
        assert!(matches!(build_graph(3), Err(Error::InvalidModulus(3))));
    }

    #[test]
    fn p5_graph_shape() {
        let g = build_graph(5).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.out_degree(), 3);
        assert_eq!(g.multipliers(), &[1, 2, 1]);
        // d = 1 doubles: 1 -> 2 -> 4 -> 3 -> 1; d in {0, 2} are self-loops
        assert_eq!(g.step(1, 1), 2);
        assert_eq!(g.step(2, 1), 4);
        assert_eq!(g.step(4, 1), 3);
        assert_eq!(g.step(3, 1), 1);
        for c in 1..5 {
            assert_eq!(g.step(c, 0), c);
            assert_eq!(g.step(c, 2), c);
        }
    }

    #[test]
    fn strong_connectivity_for_small_primes() {
        for p in primes_up_to(61).into_iter().filter(|&p| p >= 5) {
            assert!(build_graph(p).unwrap().strongly_connected(), "p={p}");
        }
    }

    #[test]
    fn proper_subgroup_fixture_is_not_strongly_connected() {
        // {1, 4} generates a proper subgroup of the units mod 5
        let g = ConstantGraph::from_multipliers(5, vec![1, 4]);
        assert!(!g.strongly_connected());
        assert!(closed_walk_all_vertices(&g).is_err());
    }

    #[test]
    fn single_vertex_fixture_is_strongly_connected() {
        let g = ConstantGraph::from_multipliers(2, vec![1]);
        assert!(g.strongly_connected());
    }

    #[test]
    fn path_between_examples() {
        assert!(path_between(3, 3, 5).unwrap().is_empty());
        assert_eq!(path_between(1, 2, 5).unwrap(), vec![1]);
        // the labels come from decomposing the ratio; walking them is
        // what matters
        let g = build_graph(5).unwrap();
        let path = path_between(2, 1, 5).unwrap();
        let mut cur = 2u64;
        for d in path {
            cur = g.step(cur, d);
        }
        assert_eq!(cur, 1);
        assert!(matches!(path_between(0, 2, 5), Err(Error::ZeroResidue)));
    }

    #[test]
    fn closed_walk_small_primes() {
        for p in [5u64, 7, 11, 13] {
            let g = build_graph(p).unwrap();
            let walk = closed_walk_all_vertices(&g).unwrap();
            assert_eq!(walk.start, 1);
            assert_eq!(walk.vertices.len(), walk.labels.len() + 1);
            walk.validate(&g).unwrap();
        }
    }

    #[test]
    fn p5_walk_length_matches_construction() {
        // legs 1->2, 2->3, 3->4, 4->1 decompose to 1 + 2 + 4 + 2 edges
        let g = build_graph(5).unwrap();
        let walk = closed_walk_all_vertices(&g).unwrap();
        assert_eq!(walk.labels.len(), 9);
    }

    #[test]
    fn validation_catches_tampering() {
        let g = build_graph(5).unwrap();
        let mut walk = closed_walk_all_vertices(&g).unwrap();
        walk.vertices[1] = 3;
        assert!(matches!(walk.validate(&g), Err(Error::WalkInvalid(_))));
    }

    #[test]
    fn edge_semantics_recomputed_independently() {
        for p in [5u64, 7, 13] {
            let g = build_graph(p).unwrap();
            for c in 1..p {
                for d in 0..g.out_degree() as u32 {
                    let expected = mul_mod(c, central_binomial_mod(d, p).unwrap(), p);
                    assert_eq!(g.step(c, d), expected, "p={p} c={c} d={d}");
                    assert_ne!(g.step(c, d), 0);
                }
            }
        }
    }

    #[test]
    fn walks_replay_inside_the_automaton() {
        for p in [5u64, 7, 11, 13] {
            let a = synthesize(p).unwrap();
            let table = a.detect_constant_family().unwrap();
            let g = build_graph(p).unwrap();
            let walk = closed_walk_all_vertices(&g).unwrap();
            replay_walk(&a, &table, &walk).unwrap();
        }
    }

    #[test]
    fn replay_detects_label_mismatch() {
        let a = synthesize(5).unwrap();
        let table = a.detect_constant_family().unwrap();
        let g = build_graph(5).unwrap();
        let mut walk = closed_walk_all_vertices(&g).unwrap();
        walk.vertices[1] = 4; // the d=1 edge from 1 lands on 2, not 4
        assert!(matches!(
            replay_walk(&a, &table, &walk),
            Err(Error::ReplayMismatch(_))
        ));
    }

    #[test]
    fn dot_lists_every_vertex() {
        let g = build_graph(5).unwrap();
        let dot = g.to_dot();
        for c in 1..5 {
            assert!(dot.contains(&format!("v{c} [label=\"{c}\"];")));
        }
        assert!(dot.starts_with("digraph constant_graph_p5 {"));
    }
}
