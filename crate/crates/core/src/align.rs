//! Constructive common-prefix alignment of Cayley geodesics, and the
//! statement-level checker for the divergence-implies-factor-path bound.

use crate::error::{Error, Result};
use crate::graph::{PresentationGraph, VertexSet};
use crate::word::{self, Letter, NormalForm, Word};
use std::ops::Range;

/// Output of `align`: two geodesics to g and h sharing a long common prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignmentResult {
    pub alpha_prime: Word,
    pub beta_prime: Word,
    pub common_prefix_length: usize,
}

fn lcp_len(a: &[Letter], b: &[Letter]) -> usize {
    a.iter().zip(b.iter()).take_while(|(x, y)| x == y).count()
}

/// Rightmost occurrence of `s` in a geodesic word that commutes with every
/// letter after it; exists precisely when `s` is a right descent.
fn rightmost_deletable(graph: &PresentationGraph, w: &[Letter], s: Letter) -> Option<usize> {
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

/// Aligns a geodesic α (to g) with a target element h by induction on
/// n = d(g,h), following the first letter of the canonical geodesic from g
/// to h. Guarantees: both outputs geodesic, they share a prefix of length at
/// least ℓ(g) − n, and every vertex of either output is within n of a vertex
/// of α.
pub fn align(graph: &PresentationGraph, alpha: &[Letter], h: &NormalForm) -> Result<AlignmentResult> {
    if !word::is_geodesic(graph, alpha)? {
        return Err(Error::input("align requires a geodesic word"));
    }
    let g = word::normal_form(graph, alpha)?;
    let diff = word::left_difference(graph, &g, h)?;
    let (alpha_prime, beta_prime) = align_rec(graph, alpha.to_vec(), diff.as_slice());
    let common_prefix_length = lcp_len(&alpha_prime, &beta_prime);
    Ok(AlignmentResult {
        alpha_prime,
        beta_prime,
        common_prefix_length,
    })
}

/// `connector` is a geodesic word from the element of `alpha` to the target.
fn align_rec(graph: &PresentationGraph, alpha: Word, connector: &[Letter]) -> (Word, Word) {
    let Some((&s1, rest)) = connector.split_first() else {
        return (alpha.clone(), alpha);
    };
    match rightmost_deletable(graph, &alpha, s1) {
        None => {
            // ℓ(g·s1) = ℓ(g) + 1: lengthen, recurse, then surgically delete
            // the s1 pair using the commutations the deletion provides.
            let mut alpha1 = alpha;
            alpha1.push(s1);
            let (a1, b1) = align_rec(graph, alpha1, rest);
            let i = rightmost_deletable(graph, &a1, s1)
                .expect("appending s1 to a geodesic of g·s1 must delete");
            let p1 = lcp_len(&a1, &b1);
            let mut alpha_out = a1;
            alpha_out.remove(i);
            let beta_out = if i < p1 {
                // the deleted letter sat inside the common prefix: commute
                // b1's copy of it rightward past the rest of that prefix
                let mut b = b1;
                debug_assert_eq!(b[i], s1);
                b.remove(i);
                b.insert(p1 - 1, s1);
                b
            } else {
                b1
            };
            (alpha_out, beta_out)
        }
        Some(i) => {
            // ℓ(g·s1) = ℓ(g) − 1: rewrite α by the deletion, recurse, and
            // re-append s1 on the α side.
            let mut alpha1 = alpha;
            alpha1.remove(i);
            let (mut a1, b1) = align_rec(graph, alpha1, rest);
            a1.push(s1);
            (a1, b1)
        }
    }
}

/// Least-start contiguous subword of length ≥ k whose letter set has a
/// factor cover; among least-start candidates the shortest end is returned.
/// Growing a window only grows its letter set and covers only get harder,
/// so the length-k window at each start decides that start.
/// Meaningful for geodesic words; k must be at least 1.
pub fn find_factor_subpath(
    graph: &PresentationGraph,
    w: &[Letter],
    k: usize,
) -> Option<Range<usize>> {
    if k == 0 || w.len() < k {
        return None;
    }
    let mut cache = word::CoverCache::new();
    for start in 0..=w.len() - k {
        let letters: VertexSet = w[start..start + k].iter().copied().collect();
        if cache.cover(graph, letters).is_some() {
            return Some(start..start + k);
        }
    }
    None
}

/// Report of one divergence check. The threshold is
/// δ(k) = |S|²·2^|S|·k + 2|S| unless overridden.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivergenceReport {
    pub distance: usize,
    pub threshold: u128,
    pub triggered: bool,
    pub alpha_initial: Option<Range<usize>>,
    pub alpha_terminal: Option<Range<usize>>,
    pub beta_initial: Option<Range<usize>>,
    pub beta_terminal: Option<Range<usize>>,
    pub counterexample: bool,
}

/// δ(k) for the current generator count.
pub fn divergence_threshold(graph: &PresentationGraph, k: usize) -> u128 {
    let n = graph.vertex_count() as u128;
    (n * n)
        .saturating_mul(1u128 << graph.vertex_count().min(100))
        .saturating_mul(k as u128)
        .saturating_add(2 * n)
}

/// Checks the bound "if the two geodesics are ≥ δ(k) apart at time n, both
/// their initial and terminal segments carry factor subpaths of length k".
/// A counterexample is flagged only when the distance threshold fires and a
/// required subpath is missing.
pub fn divergence_bound_check(
    graph: &PresentationGraph,
    alpha: &[Letter],
    beta: &[Letter],
    n: usize,
    k: usize,
    delta_override: Option<u128>,
) -> Result<DivergenceReport> {
    if !word::is_geodesic(graph, alpha)? || !word::is_geodesic(graph, beta)? {
        return Err(Error::input("divergence check requires geodesic words"));
    }
    if word::normal_form(graph, alpha)? != word::normal_form(graph, beta)? {
        return Err(Error::input(
            "divergence check requires words with the same endpoints",
        ));
    }
    if n > alpha.len().min(beta.len()) {
        return Err(Error::input("divergence index exceeds a word length"));
    }
    let at = |w: &[Letter], i: usize| word::normal_form(graph, &w[..i]);
    let d = word::left_difference(graph, &at(alpha, n)?, &at(beta, n)?)?.len();
    let threshold = delta_override.unwrap_or_else(|| divergence_threshold(graph, k));
    let triggered = (d as u128) >= threshold;

    let alpha_initial = find_factor_subpath(graph, &alpha[..n], k);
    let alpha_terminal = find_factor_subpath(graph, &alpha[n..], k);
    let beta_initial = find_factor_subpath(graph, &beta[..n], k);
    let beta_terminal = find_factor_subpath(graph, &beta[n..], k);
    let all_present = alpha_initial.is_some()
        && alpha_terminal.is_some()
        && beta_initial.is_some()
        && beta_terminal.is_some();

    Ok(DivergenceReport {
        distance: d,
        threshold,
        triggered,
        alpha_initial,
        alpha_terminal,
        beta_initial,
        beta_terminal,
        counterexample: triggered && !all_present,
    })
}
