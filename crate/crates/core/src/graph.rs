//! The presentation graph of a right-angled Coxeter system and its pure
//! graph primitives: links, cliques, separation and join decomposition.
//!
//! Generators are identified by their 0-based declaration index; declaration
//! order fixes every lexicographic tie-break downstream, so two runs on the
//! same input always produce identical answers.

use crate::error::{Error, Result};
use std::fmt;

/// Maximum number of generators: `VertexSet` is a fixed-width 64-bit mask.
pub const MAX_VERTICES: usize = 64;

/// A subset of generator indices, packed into a machine word so union and
/// intersection are O(1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn singleton(i: u8) -> VertexSet {
        VertexSet(1 << i)
    }

    pub fn full(n: usize) -> VertexSet {
        debug_assert!(n <= MAX_VERTICES);
        if n == MAX_VERTICES {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn from_bits(bits: u64) -> VertexSet {
        VertexSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, i: u8) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: u8) {
        self.0 |= 1 << i;
    }

    pub fn remove(&mut self, i: u8) {
        self.0 &= !(1 << i);
    }

    pub fn with(self, i: u8) -> VertexSet {
        VertexSet(self.0 | 1 << i)
    }

    pub fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Least member, if any.
    pub fn least(self) -> Option<u8> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as u8)
        }
    }

    /// Members in ascending index order.
    pub fn iter(self) -> impl Iterator<Item = u8> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as u8;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    pub fn members(self) -> Vec<u8> {
        self.iter().collect()
    }
}

impl FromIterator<u8> for VertexSet {
    fn from_iter<T: IntoIterator<Item = u8>>(iter: T) -> Self {
        let mut s = VertexSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

/// Canonical order on vertex sets: cardinality first, then lexicographic on
/// the ascending member list. Every "first certificate" in this crate refers
/// to this order.
pub fn canonical_cmp(a: VertexSet, b: VertexSet) -> std::cmp::Ordering {
    a.len()
        .cmp(&b.len())
        .then_with(|| a.members().cmp(&b.members()))
}

/// All subsets of `universe` in canonical order.
pub fn subsets_canonical(universe: VertexSet) -> Vec<VertexSet> {
    let members = universe.members();
    let mut out = Vec::with_capacity(1 << members.len());
    for k in 0..=members.len() {
        combinations_into(&members, k, &mut out);
    }
    out
}

/// Appends all k-element subsets of `members` (ascending) in lexicographic
/// member-list order.
fn combinations_into(members: &[u8], k: usize, out: &mut Vec<VertexSet>) {
    fn rec(members: &[u8], k: usize, start: usize, acc: &mut VertexSet, out: &mut Vec<VertexSet>) {
        if k == 0 {
            out.push(*acc);
            return;
        }
        for i in start..=members.len().saturating_sub(k) {
            acc.insert(members[i]);
            rec(members, k - 1, i + 1, acc, out);
            acc.remove(members[i]);
        }
    }
    let mut acc = VertexSet::EMPTY;
    rec(members, k, 0, &mut acc, out);
}

/// A generator viewed as (declaration index, name).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub index: u8,
    pub name: String,
}

/// The defining graph Γ(G,S): ordered generators plus the symmetric,
/// irreflexive commutation relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentationGraph {
    names: Vec<String>,
    adj: Vec<VertexSet>,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && name.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

impl PresentationGraph {
    /// Builds a graph from generator names (in declaration order) and edges.
    pub fn new(names: Vec<String>, edges: &[(u8, u8)]) -> Result<PresentationGraph> {
        if names.is_empty() {
            return Err(Error::input("a presentation graph needs at least one generator"));
        }
        if names.len() > MAX_VERTICES {
            return Err(Error::input(format!(
                "at most {MAX_VERTICES} generators are supported, got {}",
                names.len()
            )));
        }
        for (i, a) in names.iter().enumerate() {
            if !valid_name(a) {
                return Err(Error::input(format!("invalid generator name {a:?}")));
            }
            for b in &names[..i] {
                if a == b {
                    return Err(Error::input(format!("duplicate generator name {a:?}")));
                }
            }
        }
        let n = names.len();
        let mut adj = vec![VertexSet::EMPTY; n];
        for &(u, v) in edges {
            if (u as usize) >= n || (v as usize) >= n {
                return Err(Error::input(format!("edge ({u},{v}) out of range")));
            }
            if u == v {
                return Err(Error::input(format!("self-loop on generator {}", names[u as usize])));
            }
            adj[u as usize].insert(v);
            adj[v as usize].insert(u);
        }
        Ok(PresentationGraph { names, adj })
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn full_set(&self) -> VertexSet {
        VertexSet::full(self.names.len())
    }

    pub fn name(&self, i: u8) -> &str {
        &self.names[i as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<u8> {
        self.names.iter().position(|n| n == name).map(|i| i as u8)
    }

    pub fn generator(&self, i: u8) -> Generator {
        Generator {
            index: i,
            name: self.names[i as usize].clone(),
        }
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        (0..self.names.len() as u8).map(|i| self.generator(i))
    }

    pub fn adjacent(&self, i: u8, j: u8) -> bool {
        self.adj[i as usize].contains(j)
    }

    pub fn neighbors(&self, i: u8) -> VertexSet {
        self.adj[i as usize]
    }

    /// Edges as index pairs (u, v) with u < v, ascending.
    pub fn edges(&self) -> Vec<(u8, u8)> {
        let mut out = Vec::new();
        for u in 0..self.names.len() as u8 {
            for v in self.adj[u as usize].iter() {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    fn check_subset(&self, a: VertexSet) -> Result<()> {
        if !a.is_subset(self.full_set()) {
            return Err(Error::input("vertex set contains out-of-range indices"));
        }
        Ok(())
    }

    /// lk(A): the generators adjacent to every member of A. For A = ∅ this is
    /// all of S (empty intersection convention).
    pub fn link(&self, a: VertexSet) -> Result<VertexSet> {
        self.check_subset(a)?;
        let mut acc = self.full_set();
        for i in a.iter() {
            acc = acc.intersection(self.adj[i as usize]);
        }
        Ok(acc)
    }

    /// True iff every pair of distinct members of A is adjacent; ∅ and
    /// singletons count as cliques (⟨A⟩ is finite exactly in this case).
    pub fn is_clique(&self, a: VertexSet) -> Result<bool> {
        self.check_subset(a)?;
        for i in a.iter() {
            let others = a.difference(VertexSet::singleton(i));
            if !others.is_subset(self.adj[i as usize]) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Connected components of the induced subgraph on `within`, ordered by
    /// least member.
    pub fn components_within(&self, within: VertexSet) -> Vec<VertexSet> {
        let mut seen = VertexSet::EMPTY;
        let mut comps = Vec::new();
        for start in within.iter() {
            if seen.contains(start) {
                continue;
            }
            let mut comp = VertexSet::singleton(start);
            let mut frontier = comp;
            while !frontier.is_empty() {
                let mut next = VertexSet::EMPTY;
                for v in frontier.iter() {
                    next = next.union(self.adj[v as usize].intersection(within));
                }
                next = next.difference(comp);
                comp = comp.union(next);
                frontier = next;
            }
            seen = seen.union(comp);
            comps.push(comp);
        }
        comps
    }

    /// Removes C and reports whether the rest falls apart, together with the
    /// components of the induced subgraph on S−C in order of least member.
    /// C = S yields (false, []): removing everything separates nothing.
    pub fn separates(&self, c: VertexSet) -> Result<(bool, Vec<VertexSet>)> {
        self.check_subset(c)?;
        let rest = self.full_set().difference(c);
        let comps = self.components_within(rest);
        Ok((comps.len() >= 2, comps))
    }

    /// The unique maximal join decomposition Γ = A₁ ∗ … ∗ Aₙ, computed as the
    /// connected components of the complement graph, ordered by least member.
    /// A singleton list means Γ is join-irreducible.
    pub fn join_factors(&self) -> Vec<VertexSet> {
        let full = self.full_set();
        let mut seen = VertexSet::EMPTY;
        let mut comps = Vec::new();
        for start in full.iter() {
            if seen.contains(start) {
                continue;
            }
            let mut comp = VertexSet::singleton(start);
            let mut frontier = comp;
            while !frontier.is_empty() {
                let mut next = VertexSet::EMPTY;
                for v in frontier.iter() {
                    let co_nbrs = full
                        .difference(self.adj[v as usize])
                        .difference(VertexSet::singleton(v));
                    next = next.union(co_nbrs);
                }
                next = next.difference(comp);
                comp = comp.union(next);
                frontier = next;
            }
            seen = seen.union(comp);
            comps.push(comp);
        }
        comps
    }

    pub fn is_join_irreducible(&self) -> bool {
        self.join_factors().len() == 1
    }

    /// Full subgraph on A, generator order inherited from the parent.
    pub fn induced(&self, a: VertexSet) -> Result<PresentationGraph> {
        Ok(self.induced_with_map(a)?.0)
    }

    /// Like `induced`, also returning the map from new indices to old ones.
    pub fn induced_with_map(&self, a: VertexSet) -> Result<(PresentationGraph, Vec<u8>)> {
        self.check_subset(a)?;
        if a.is_empty() {
            return Err(Error::input("induced subgraph on the empty set"));
        }
        let map = a.members();
        let names = map.iter().map(|&i| self.names[i as usize].clone()).collect();
        let mut edges = Vec::new();
        for (ni, &oi) in map.iter().enumerate() {
            for (nj, &oj) in map.iter().enumerate().skip(ni + 1) {
                if self.adjacent(oi, oj) {
                    edges.push((ni as u8, nj as u8));
                }
            }
        }
        Ok((PresentationGraph::new(names, &edges)?, map))
    }

    /// Renders a vertex set with generator names, e.g. `{a, c}`.
    pub fn set_to_string(&self, a: VertexSet) -> String {
        let mut s = String::from("{");
        for (k, i) in a.iter().enumerate() {
            if k > 0 {
                s.push_str(", ");
            }
            s.push_str(self.name(i));
        }
        s.push('}');
        s
    }
}

impl fmt::Display for PresentationGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "vertices")?;
        for n in &self.names {
            write!(f, " {n}")?;
        }
        writeln!(f)?;
        for (u, v) in self.edges() {
            writeln!(f, "edge {} {}", self.name(u), self.name(v))?;
        }
        Ok(())
    }
}
