//! The word problem and Cayley-graph geometry of a right-angled Coxeter
//! system: reduction, canonical normal forms, geodesic tests (deletion-based
//! and wall-based), descent sets, coset projection, geodesic extension and
//! factor-path detection.
//!
//! A non-geodesic word always admits a two-letter deletion; in the
//! right-angled case the appended letter deletes with the rightmost earlier
//! occurrence of the same letter that commutes with everything after it.
//! Every routine here reduces to that single scan primitive.

use crate::error::{Error, Result};
use crate::graph::{subsets_canonical, PresentationGraph, VertexSet};
use std::collections::{HashMap, HashSet, VecDeque};

/// A generator index; valid letters are `0..graph.vertex_count()`.
pub type Letter = u8;

/// A finite (possibly empty) sequence of generator indices.
pub type Word = Vec<Letter>;

/// Shortlex order: length first, then lexicographic.
pub fn shortlex_cmp(a: &[Letter], b: &[Letter]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

pub fn validate_word(graph: &PresentationGraph, w: &[Letter]) -> Result<()> {
    let n = graph.vertex_count() as u8;
    for &s in w {
        if s >= n {
            return Err(Error::input(format!("letter index {s} out of range")));
        }
    }
    Ok(())
}

/// Scans a geodesic word right-to-left for the deletion partner of `s`:
/// the rightmost occurrence of `s` that commutes with every letter after it.
fn right_deletion_index(graph: &PresentationGraph, w: &[Letter], s: Letter) -> Option<usize> {
    for j in (0..w.len()).rev() {
        if w[j] == s {
            return Some(j);
        }
        if !graph.adjacent(w[j], s) {
            return None;
        }
    }
    None
}

/// Left-hand mirror image of `right_deletion_index`.
fn left_deletion_index(graph: &PresentationGraph, w: &[Letter], s: Letter) -> Option<usize> {
    for j in 0..w.len() {
        if w[j] == s {
            return Some(j);
        }
        if !graph.adjacent(w[j], s) {
            return None;
        }
    }
    None
}

/// Appends `s` to a geodesic word, keeping it geodesic. Returns true when the
/// word grew and false when `s` deleted with an earlier letter.
pub(crate) fn append_letter(graph: &PresentationGraph, w: &mut Word, s: Letter) -> bool {
    match right_deletion_index(graph, w, s) {
        Some(j) => {
            w.remove(j);
            false
        }
        None => {
            w.push(s);
            true
        }
    }
}

/// Reduces a word to a geodesic word for the same element by left-to-right
/// scanning. Output length has the same parity as the input length.
pub fn reduce(graph: &PresentationGraph, w: &[Letter]) -> Result<Word> {
    validate_word(graph, w)?;
    let mut out = Word::with_capacity(w.len());
    for &s in w {
        append_letter(graph, &mut out, s);
    }
    Ok(out)
}

/// True iff `reduce` does not shorten `w`.
pub fn is_geodesic(graph: &PresentationGraph, w: &[Letter]) -> Result<bool> {
    Ok(reduce(graph, w)?.len() == w.len())
}

/// Right descent set of the element of a geodesic word: letters whose
/// appending shortens it.
pub(crate) fn descents_of_geodesic(graph: &PresentationGraph, w: &[Letter]) -> VertexSet {
    (0..graph.vertex_count() as u8)
        .filter(|&s| right_deletion_index(graph, w, s).is_some())
        .collect()
}

/// Canonical word: the greedy left-descent form. Repeatedly strips the least
/// generator `s` with ℓ(s·g) < ℓ(g); the result is the lexicographically
/// least geodesic word for the element.
fn canonicalize_geodesic(graph: &PresentationGraph, mut w: Word) -> Word {
    let n = graph.vertex_count() as u8;
    let mut out = Word::with_capacity(w.len());
    while !w.is_empty() {
        let mut taken = false;
        for s in 0..n {
            if let Some(j) = left_deletion_index(graph, &w, s) {
                out.push(s);
                w.remove(j);
                taken = true;
                break;
            }
        }
        debug_assert!(taken, "a nonempty geodesic word always has a left descent");
    }
    out
}

/// Canonical shortlex-minimal geodesic representative of a group element.
/// Two words get equal normal forms iff they represent the same element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalForm(Word);

impl NormalForm {
    pub fn identity() -> NormalForm {
        NormalForm(Vec::new())
    }

    /// Wraps a word already known to be canonical (oracle/filter internals).
    pub(crate) fn from_canonical(w: Word) -> NormalForm {
        NormalForm(w)
    }

    pub fn as_slice(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_word(self) -> Word {
        self.0
    }

    pub fn display(&self, graph: &PresentationGraph) -> String {
        word_to_string(graph, &self.0)
    }
}

/// Canonical form of an arbitrary word.
pub fn normal_form(graph: &PresentationGraph, w: &[Letter]) -> Result<NormalForm> {
    let reduced = reduce(graph, w)?;
    Ok(NormalForm(canonicalize_geodesic(graph, reduced)))
}

/// Product of two elements, as a normal form.
pub fn multiply(graph: &PresentationGraph, g: &NormalForm, h: &NormalForm) -> Result<NormalForm> {
    let mut w = g.as_slice().to_vec();
    for &s in h.as_slice() {
        append_letter(graph, &mut w, s);
    }
    Ok(NormalForm(canonicalize_geodesic(graph, w)))
}

/// Inverse of an element. All generators are involutions, so the inverse of a
/// word is the reversed letter sequence.
pub fn inverse(graph: &PresentationGraph, g: &NormalForm) -> NormalForm {
    let rev: Word = g.as_slice().iter().rev().copied().collect();
    NormalForm(canonicalize_geodesic(graph, rev))
}

/// Normal form of g⁻¹·h.
pub fn left_difference(
    graph: &PresentationGraph,
    g: &NormalForm,
    h: &NormalForm,
) -> Result<NormalForm> {
    let mut w: Word = g.as_slice().iter().rev().copied().collect();
    for &s in h.as_slice() {
        append_letter(graph, &mut w, s);
    }
    Ok(NormalForm(canonicalize_geodesic(graph, w)))
}

/// The wall crossed by the i-th edge of a path: the reflection
/// e₁…e_{i−1}·e_i·e_{i−1}…e₁ together with the letter crossed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Wall {
    pub reflection: NormalForm,
    pub letter: Letter,
}

/// Walls crossed by a path, in crossing order. A path is geodesic iff it
/// crosses each wall at most once, i.e. the reflections are pairwise
/// distinct; this is the independent cross-check for `is_geodesic`.
pub fn walls(graph: &PresentationGraph, w: &[Letter]) -> Result<Vec<Wall>> {
    validate_word(graph, w)?;
    let mut out = Vec::with_capacity(w.len());
    for i in 0..w.len() {
        let mut conj: Word = w[..i].to_vec();
        conj.push(w[i]);
        conj.extend(w[..i].iter().rev());
        out.push(Wall {
            reflection: normal_form(graph, &conj)?,
            letter: w[i],
        });
    }
    Ok(out)
}

/// Geodesy via the wall criterion: all crossed walls pairwise distinct.
pub fn is_geodesic_by_walls(graph: &PresentationGraph, w: &[Letter]) -> Result<bool> {
    let ws = walls(graph, w)?;
    let mut seen = HashSet::with_capacity(ws.len());
    Ok(ws.into_iter().all(|wall| seen.insert(wall.reflection)))
}

/// The descent set B(g) = { s : ℓ(g·s) = ℓ(g) − 1 }. It always spans a
/// clique in Γ (it generates a finite subgroup).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DescentSet {
    pub members: VertexSet,
}

pub fn descent_set(graph: &PresentationGraph, g: &NormalForm) -> Result<DescentSet> {
    let members = descents_of_geodesic(graph, g.as_slice());
    if !graph.is_clique(members)? {
        return Err(Error::invariant(format!(
            "descent set {} is not a clique",
            graph.set_to_string(members)
        )));
    }
    Ok(DescentSet { members })
}

/// The unique shortest element of the coset v⟨T⟩: repeatedly strip letters
/// of T that shorten, least first.
pub fn project_to_coset(
    graph: &PresentationGraph,
    v: &NormalForm,
    t: VertexSet,
) -> Result<NormalForm> {
    if !t.is_subset(graph.full_set()) {
        return Err(Error::input("T contains out-of-range indices"));
    }
    let mut w = v.as_slice().to_vec();
    loop {
        let candidates = descents_of_geodesic(graph, &w).intersection(t);
        match candidates.least() {
            Some(s) => {
                append_letter(graph, &mut w, s);
            }
            None => break,
        }
    }
    Ok(NormalForm(canonicalize_geodesic(graph, w)))
}

/// Extends a geodesic word to a geodesic word ending with `v`, appending as
/// few letters as possible (ties broken lexicographically on the extension).
/// Requires a join-irreducible graph, which guarantees such an extension
/// exists. The search is breadth-first over geodesic one-letter extensions;
/// extensions longer than 4·|S| trip an internal error rather than loop.
pub fn extend_to_letter(graph: &PresentationGraph, alpha: &[Letter], v: Letter) -> Result<Word> {
    validate_word(graph, alpha)?;
    if v as usize >= graph.vertex_count() {
        return Err(Error::input(format!("letter index {v} out of range")));
    }
    if !is_geodesic(graph, alpha)? {
        return Err(Error::input("extend_to_letter requires a geodesic word"));
    }
    if !graph.is_join_irreducible() {
        return Err(Error::input(
            "extend_to_letter requires a join-irreducible presentation graph",
        ));
    }
    if alpha.last() == Some(&v) {
        return Ok(alpha.to_vec());
    }
    let cap = 4 * graph.vertex_count();
    let n = graph.vertex_count() as u8;

    // BFS over (element, last letter) states; expanding in lexicographic
    // extension order makes the first hit the lex-least minimal extension.
    let mut seen: HashSet<(NormalForm, Option<Letter>)> = HashSet::new();
    let mut queue: VecDeque<(Word, usize)> = VecDeque::new();
    let start_last = alpha.last().copied();
    seen.insert((normal_form(graph, alpha)?, start_last));
    queue.push_back((alpha.to_vec(), 0));

    while let Some((word, ext_len)) = queue.pop_front() {
        if ext_len >= cap {
            return Err(Error::invariant(format!(
                "geodesic extension search exceeded the 4|S| = {cap} cap"
            )));
        }
        let blocked = descents_of_geodesic(graph, &word);
        for s in 0..n {
            if blocked.contains(s) {
                continue;
            }
            let mut next = word.clone();
            next.push(s);
            if s == v {
                return Ok(next);
            }
            let key = (normal_form(graph, &next)?, Some(s));
            if seen.insert(key) {
                queue.push_back((next, ext_len + 1));
            }
        }
    }
    Err(Error::invariant(
        "geodesic extension search exhausted its state space".to_string(),
    ))
}

/// Looks for disjoint fully-adjacent subsets A, B of S, neither a clique
/// (so both special subgroups are infinite), with L ⊆ A∪B. Candidate pairs
/// are enumerated by |A∪B| ascending then lexicographically; A is the side
/// holding the least member of L. Returns the first hit.
pub fn factor_cover(
    graph: &PresentationGraph,
    l: VertexSet,
) -> Result<Option<(VertexSet, VertexSet)>> {
    if l.is_empty() {
        return Err(Error::input("factor_cover requires a nonempty letter set"));
    }
    if !l.is_subset(graph.full_set()) {
        return Err(Error::input("letter set contains out-of-range indices"));
    }
    Ok(factor_pair_covering(graph, l))
}

/// Non-strict variant of `factor_cover` that accepts the empty set (then any
/// fully-adjacent non-clique pair qualifies).
pub(crate) fn factor_pair_covering(
    graph: &PresentationGraph,
    l: VertexSet,
) -> Option<(VertexSet, VertexSet)> {
    let cross_adjacent = |a: VertexSet, b: VertexSet| -> bool {
        a.iter().all(|i| b.is_subset(graph.neighbors(i)))
    };
    for u in subsets_canonical(graph.full_set()) {
        // Both sides need a non-adjacent pair, so |U| < 4 can never work.
        if u.len() < 4 || !l.is_subset(u) {
            continue;
        }
        let anchor = l.least().unwrap_or_else(|| u.least().unwrap());
        for a in subsets_canonical(u) {
            if !a.contains(anchor) {
                continue;
            }
            let b = u.difference(a);
            if b.is_empty()
                || graph.is_clique(a).unwrap()
                || graph.is_clique(b).unwrap()
                || !cross_adjacent(a, b)
            {
                continue;
            }
            return Some((a, b));
        }
    }
    None
}

/// Start index of the longest terminal factor suffix of a geodesic word:
/// the least i such that the letter set of w[i..] has a factor cover.
/// Returns `w.len()` (the empty suffix) when no nonempty suffix qualifies.
pub fn longest_terminal_factor_suffix(graph: &PresentationGraph, w: &[Letter]) -> Result<usize> {
    if !is_geodesic(graph, w)? {
        return Err(Error::input(
            "longest_terminal_factor_suffix requires a geodesic word",
        ));
    }
    for start in 0..w.len() {
        let letters: VertexSet = w[start..].iter().copied().collect();
        if factor_pair_covering(graph, letters).is_some() {
            return Ok(start);
        }
    }
    Ok(w.len())
}

/// Renders a word as whitespace-separated generator names; the identity is
/// rendered as `(identity)` on the CLI but as an empty string here.
pub fn word_to_string(graph: &PresentationGraph, w: &[Letter]) -> String {
    w.iter()
        .map(|&s| graph.name(s))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Parses whitespace-separated generator names.
pub fn parse_word(graph: &PresentationGraph, text: &str) -> Result<Word> {
    text.split_whitespace()
        .map(|tok| {
            graph
                .index_of(tok)
                .ok_or_else(|| Error::input(format!("unknown generator {tok:?} in word")))
        })
        .collect()
}

/// Memoises factor-cover queries by letter set; the filter construction asks
/// the same handful of sets thousands of times.
#[derive(Debug, Default)]
pub struct CoverCache {
    map: HashMap<u64, Option<(VertexSet, VertexSet)>>,
}

impl CoverCache {
    pub fn new() -> CoverCache {
        CoverCache::default()
    }

    pub fn cover(
        &mut self,
        graph: &PresentationGraph,
        letters: VertexSet,
    ) -> Option<(VertexSet, VertexSet)> {
        *self
            .map
            .entry(letters.bits())
            .or_insert_with(|| factor_pair_covering(graph, letters))
    }

    pub fn suffix_start(&mut self, graph: &PresentationGraph, w: &[Letter]) -> usize {
        for start in 0..w.len() {
            let letters: VertexSet = w[start..].iter().copied().collect();
            if self.cover(graph, letters).is_some() {
                return start;
            }
        }
        w.len()
    }
}
