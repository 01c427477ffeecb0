//! Shared test support: an independent element oracle through the standard
//! geometric (reflection) representation over exact integers, plain
//! brute-force graph predicates recoded from the definitions, and seeded
//! sampling helpers.
//!
//! Nothing here calls into the word engine's reduction machinery, so
//! agreement between these objects and the library is meaningful evidence.

#![allow(dead_code)]

use racg_core::graph::{PresentationGraph, VertexSet};
use racg_core::rng::SplitMix64;
use racg_core::word::Letter;
use std::collections::HashMap;

pub type Matrix = Vec<Vec<i128>>;

/// The geometric representation: s acts by x ↦ x − 2B(x, e_s)e_s with
/// B(e_s,e_s) = 1, B(e_s,e_t) = 0 for commuting pairs and −1 otherwise.
/// It is faithful, so matrix equality decides element equality.
pub struct ReflectionRep {
    pub n: usize,
    gens: Vec<Matrix>,
}

fn identity_matrix(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = vec![vec![0i128; n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik == 0 {
                continue;
            }
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

impl ReflectionRep {
    pub fn new(graph: &PresentationGraph) -> ReflectionRep {
        let n = graph.vertex_count();
        let mut gens = Vec::with_capacity(n);
        for s in 0..n as u8 {
            let mut m = identity_matrix(n);
            for t in 0..n as u8 {
                if t == s {
                    m[s as usize][s as usize] = -1;
                } else if !graph.adjacent(s, t) {
                    // e_t ↦ e_t + 2 e_s
                    m[s as usize][t as usize] = 2;
                }
            }
            gens.push(m);
        }
        ReflectionRep { n, gens }
    }

    pub fn word_matrix(&self, w: &[Letter]) -> Matrix {
        let mut m = identity_matrix(self.n);
        for &s in w {
            m = mat_mul(&m, &self.gens[s as usize]);
        }
        m
    }

    pub fn same_element(&self, u: &[Letter], v: &[Letter]) -> bool {
        self.word_matrix(u) == self.word_matrix(v)
    }
}

/// Ball enumerated purely through matrices: distances are BFS layers keyed
/// by the matrix of the element, with no word reduction involved.
pub struct MatrixBall {
    pub radius: usize,
    pub table: HashMap<Matrix, usize>,
    pub sphere_sizes: Vec<usize>,
}

pub fn matrix_ball(graph: &PresentationGraph, radius: usize) -> MatrixBall {
    let rep = ReflectionRep::new(graph);
    let n = graph.vertex_count() as u8;
    let mut table: HashMap<Matrix, usize> = HashMap::new();
    let mut sphere_sizes = vec![1usize];
    let mut frontier = vec![identity_matrix(rep.n)];
    table.insert(frontier[0].clone(), 0);
    for d in 0..radius {
        let mut next = Vec::new();
        for m in &frontier {
            for s in 0..n {
                let child = mat_mul(m, &rep.gens[s as usize]);
                if !table.contains_key(&child) {
                    table.insert(child.clone(), d + 1);
                    next.push(child);
                }
            }
        }
        sphere_sizes.push(next.len());
        frontier = next;
    }
    MatrixBall {
        radius,
        table,
        sphere_sizes,
    }
}

impl MatrixBall {
    /// BFS distance of the element of `w`, when within the radius.
    pub fn distance_of_word(&self, rep: &ReflectionRep, w: &[Letter]) -> Option<usize> {
        self.table.get(&rep.word_matrix(w)).copied()
    }
}

// ---------------------------------------------------------------------------
// Brute-force graph predicates, recoded from the definitions.

pub fn brute_components(graph: &PresentationGraph, within: &[u8]) -> Vec<Vec<u8>> {
    let mut remaining: Vec<u8> = within.to_vec();
    let mut comps = Vec::new();
    while let Some(&start) = remaining.first() {
        let mut comp = vec![start];
        remaining.retain(|&u| u != start);
        let mut frontier = vec![start];
        while let Some(v) = frontier.pop() {
            let adjacent: Vec<u8> = remaining
                .iter()
                .copied()
                .filter(|&u| graph.adjacent(u, v))
                .collect();
            remaining.retain(|u| !adjacent.contains(u));
            for u in adjacent {
                comp.push(u);
                frontier.push(u);
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps.sort();
    comps
}

pub fn brute_separates(graph: &PresentationGraph, c: VertexSet) -> bool {
    let rest: Vec<u8> = (0..graph.vertex_count() as u8)
        .filter(|&v| !c.contains(v))
        .collect();
    brute_components(graph, &rest).len() >= 2
}

pub fn brute_is_clique(graph: &PresentationGraph, s: VertexSet) -> bool {
    let members = s.members();
    for (i, &u) in members.iter().enumerate() {
        for &v in &members[i + 1..] {
            if !graph.adjacent(u, v) {
                return false;
            }
        }
    }
    true
}

fn all_subsets(universe: &[u8]) -> Vec<VertexSet> {
    let mut out = Vec::with_capacity(1 << universe.len());
    for mask in 0u64..(1 << universe.len()) {
        let mut s = VertexSet::EMPTY;
        for (i, &v) in universe.iter().enumerate() {
            if mask >> i & 1 == 1 {
                s.insert(v);
            }
        }
        out.push(s);
    }
    out
}

/// Any product separator, by the definition: disjoint fully-adjacent
/// non-clique sides whose union separates.
pub fn brute_product_separator_exists(graph: &PresentationGraph) -> bool {
    let vertices: Vec<u8> = (0..graph.vertex_count() as u8).collect();
    for a in all_subsets(&vertices) {
        for b in all_subsets(&vertices) {
            if !a.intersection(b).is_empty() || brute_is_clique(graph, a) || brute_is_clique(graph, b)
            {
                continue;
            }
            let fully_adjacent = a
                .members()
                .iter()
                .all(|&u| b.members().iter().all(|&v| graph.adjacent(u, v)));
            if fully_adjacent && brute_separates(graph, a.union(b)) {
                return true;
            }
        }
    }
    false
}

/// ⟨C1⟩ has finite index in ⟨C⟩, recoded: F is the set of C1 members
/// adjacent to all other C1 members; the leftover C−C1 together with F must
/// spanmutually adjacent vertices, and C−C1 must commute with C1−F.
pub fn brute_finite_index(graph: &PresentationGraph, c: VertexSet, c1: VertexSet) -> bool {
    let mut f = VertexSet::EMPTY;
    for u in c1.iter() {
        if c1.iter().all(|v| v == u || graph.adjacent(u, v)) {
            f.insert(u);
        }
    }
    if !brute_is_clique(graph, c.difference(c1).union(f)) {
        return false;
    }
    c.difference(c1)
        .iter()
        .all(|u| c1.difference(f).iter().all(|v| graph.adjacent(u, v)))
}

/// Any (C, C1, K) triple per the definition, with K ranging over all subsets
/// of lk(C1).
pub fn brute_vfs_exists(graph: &PresentationGraph) -> bool {
    let vertices: Vec<u8> = (0..graph.vertex_count() as u8).collect();
    for c in all_subsets(&vertices) {
        if !brute_separates(graph, c) {
            continue;
        }
        for c1 in all_subsets(&c.members()) {
            if !brute_finite_index(graph, c, c1) {
                continue;
            }
            let lk: Vec<u8> = vertices
                .iter()
                .copied()
                .filter(|&v| c1.iter().all(|u| graph.adjacent(u, v)))
                .collect();
            for k in all_subsets(&lk) {
                if !brute_is_clique(graph, k) {
                    return true;
                }
            }
        }
    }
    false
}

/// A factor cover for `letters` exists, by definition.
pub fn brute_cover_exists(graph: &PresentationGraph, letters: VertexSet) -> bool {
    let vertices: Vec<u8> = (0..graph.vertex_count() as u8).collect();
    for a in all_subsets(&vertices) {
        for b in all_subsets(&vertices) {
            if !a.intersection(b).is_empty()
                || brute_is_clique(graph, a)
                || brute_is_clique(graph, b)
                || !letters.is_subset(a.union(b))
            {
                continue;
            }
            let fully_adjacent = a
                .members()
                .iter()
                .all(|&u| b.members().iter().all(|&v| graph.adjacent(u, v)));
            if fully_adjacent {
                return true;
            }
        }
    }
    false
}

// ---------------------------------------------------------------------------
// Seeded sampling.

/// Random graph with n ∈ 3..=size_limit vertices and edge probability
/// num/den; sparse draws surface one-ended specimens far more often than
/// uniform ones.
pub fn random_sparse_graph(
    rng: &mut SplitMix64,
    size_limit: usize,
    num: u64,
    den: u64,
) -> PresentationGraph {
    let n = 3 + rng.below(size_limit as u64 - 2) as usize;
    let names: Vec<String> = (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let mut edges = Vec::new();
    for u in 0..n as u8 {
        for v in u + 1..n as u8 {
            if rng.chance(num, den) {
                edges.push((u, v));
            }
        }
    }
    PresentationGraph::new(names, &edges).expect("well formed")
}

pub fn random_word(rng: &mut SplitMix64, graph: &PresentationGraph, max_len: usize) -> Vec<Letter> {
    let len = rng.below(max_len as u64 + 1) as usize;
    (0..len)
        .map(|_| rng.below(graph.vertex_count() as u64) as Letter)
        .collect()
}

/// A seeded relabeling of a graph: same graph, permuted declaration order.
pub fn permuted_graph(rng: &mut SplitMix64, graph: &PresentationGraph) -> PresentationGraph {
    let n = graph.vertex_count();
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        perm.swap(i, j);
    }
    // position i of the new order holds old generator perm[i]
    let names: Vec<String> = perm
        .iter()
        .map(|&old| graph.name(old as u8).to_string())
        .collect();
    let mut new_index = vec![0u8; n];
    for (new, &old) in perm.iter().enumerate() {
        new_index[old] = new as u8;
    }
    let edges: Vec<(u8, u8)> = graph
        .edges()
        .into_iter()
        .map(|(u, v)| (new_index[u as usize], new_index[v as usize]))
        .collect();
    PresentationGraph::new(names, &edges).expect("permutation preserves well-formedness")
}
