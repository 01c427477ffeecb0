//! Detection of the graph-theoretic splitting hypotheses: product
//! separators, virtual factor separators (VFS), suspended separators,
//! finite-index special subgroups, and the ends classification.

use crate::error::{Error, Result};
use crate::graph::{canonical_cmp, subsets_canonical, PresentationGraph, VertexSet};

/// Witness for one of the separation phenomena. Every constructor in this
/// module re-validates the certificate against its graph before returning it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeparatorCertificate {
    /// C = A ∪ B separates Γ, A and B are disjoint, fully adjacent across,
    /// and neither is a clique (both ⟨A⟩ and ⟨B⟩ are infinite).
    ProductSeparator { a: VertexSet, b: VertexSet },
    /// (C, C₁, K): C separates Γ, ⟨C₁⟩ has finite index in ⟨C⟩,
    /// K ⊆ lk(C₁) and ⟨K⟩ is infinite. `suspended` records whether C is a
    /// suspended separator (S = C ∪ {s,t} with s,t non-adjacent cone points).
    Vfs {
        c: VertexSet,
        c1: VertexSet,
        k: VertexSet,
        suspended: bool,
    },
    /// Q is a clique whose removal disconnects; Q = ∅ witnesses a
    /// disconnected graph.
    SeparatingClique { q: VertexSet },
    /// The maximal visual join decomposition, with at least two factors.
    JoinSplit { factors: Vec<VertexSet> },
}

impl SeparatorCertificate {
    /// Re-validates the certificate's invariants within the induced subgraph
    /// on `active` (pass the full set for whole-graph certificates).
    pub fn validate(&self, graph: &PresentationGraph, active: VertexSet) -> Result<()> {
        let fail = |msg: String| Err(Error::invariant(format!("bad certificate: {msg}")));
        let separates_within = |c: VertexSet| -> bool {
            graph.components_within(active.difference(c)).len() >= 2
        };
        match self {
            SeparatorCertificate::ProductSeparator { a, b } => {
                if !a.union(*b).is_subset(active) || !a.intersection(*b).is_empty() {
                    return fail("product separator sides overlap or leave the graph".into());
                }
                if graph.is_clique(*a)? || graph.is_clique(*b)? {
                    return fail("product separator side is a clique".into());
                }
                for i in a.iter() {
                    if !b.is_subset(graph.neighbors(i)) {
                        return fail("product separator sides are not fully adjacent".into());
                    }
                }
                if !separates_within(a.union(*b)) {
                    return fail("product separator does not separate".into());
                }
            }
            SeparatorCertificate::Vfs { c, c1, k, suspended } => {
                if !c.is_subset(active) || !c1.is_subset(*c) {
                    return fail("VFS triple is not nested".into());
                }
                if !separates_within(*c) {
                    return fail("VFS set C does not separate".into());
                }
                if !finite_index_special_within(graph, active, *c, *c1)? {
                    return fail("VFS subgroup index is not finite".into());
                }
                let lk = graph.link(*c1)?.intersection(active);
                if !k.is_subset(lk) {
                    return fail("VFS witness K does not commute with C1".into());
                }
                if graph.is_clique(*k)? {
                    return fail("VFS witness K generates a finite subgroup".into());
                }
                if *suspended != is_suspended_within(graph, active, *c)? {
                    return fail("VFS suspended flag is wrong".into());
                }
            }
            SeparatorCertificate::SeparatingClique { q } => {
                if !q.is_subset(active) || !graph.is_clique(*q)? {
                    return fail("separating set is not a clique".into());
                }
                if !separates_within(*q) {
                    return fail("clique does not separate".into());
                }
            }
            SeparatorCertificate::JoinSplit { factors } => {
                if factors.len() < 2 {
                    return fail("join split needs at least two factors".into());
                }
                let mut union = VertexSet::EMPTY;
                for f in factors {
                    if f.is_empty() || !f.intersection(union).is_empty() {
                        return fail("join factors must be nonempty and disjoint".into());
                    }
                    union = union.union(*f);
                }
                if union != active {
                    return fail("join factors do not partition the vertex set".into());
                }
                for (i, f) in factors.iter().enumerate() {
                    for g in factors.iter().skip(i + 1) {
                        for v in f.iter() {
                            if !g.is_subset(graph.neighbors(v)) {
                                return fail("cross-factor pair not adjacent".into());
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self, graph: &PresentationGraph) -> serde_json::Value {
        let names = |s: VertexSet| -> Vec<String> {
            s.iter().map(|i| graph.name(i).to_string()).collect()
        };
        match self {
            SeparatorCertificate::ProductSeparator { a, b } => serde_json::json!({
                "type": "ProductSeparator", "a": names(*a), "b": names(*b),
            }),
            SeparatorCertificate::Vfs { c, c1, k, suspended } => serde_json::json!({
                "type": "Vfs", "c": names(*c), "c1": names(*c1), "k": names(*k),
                "suspended": suspended,
            }),
            SeparatorCertificate::SeparatingClique { q } => serde_json::json!({
                "type": "SeparatingClique", "q": names(*q),
            }),
            SeparatorCertificate::JoinSplit { factors } => serde_json::json!({
                "type": "JoinSplit",
                "factors": factors.iter().map(|f| names(*f)).collect::<Vec<_>>(),
            }),
        }
    }

    pub fn display(&self, graph: &PresentationGraph) -> String {
        let s = |v: VertexSet| graph.set_to_string(v);
        match self {
            SeparatorCertificate::ProductSeparator { a, b } => {
                format!("product separator A={} B={}", s(*a), s(*b))
            }
            SeparatorCertificate::Vfs { c, c1, k, suspended } => format!(
                "VFS C={} C1={} K={} suspended={}",
                s(*c),
                s(*c1),
                s(*k),
                suspended
            ),
            SeparatorCertificate::SeparatingClique { q } => {
                format!("separating clique Q={}", s(*q))
            }
            SeparatorCertificate::JoinSplit { factors } => format!(
                "join split {}",
                factors.iter().map(|f| s(*f)).collect::<Vec<_>>().join(" * ")
            ),
        }
    }
}

/// Number-of-ends classification of the group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EndsClass {
    Zero,
    One,
    Two,
    Infinite,
}

impl std::fmt::Display for EndsClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            EndsClass::Zero => "Zero",
            EndsClass::One => "One",
            EndsClass::Two => "Two",
            EndsClass::Infinite => "Infinite",
        };
        write!(f, "{s}")
    }
}

fn cross_adjacent(graph: &PresentationGraph, a: VertexSet, b: VertexSet) -> bool {
    a.iter().all(|i| b.is_subset(graph.neighbors(i)))
}

/// First product separator in canonical enumeration order: candidate unions
/// C = A∪B by cardinality then lex, partitions with the least member of C on
/// the A side.
pub fn find_product_separator(
    graph: &PresentationGraph,
) -> Result<Option<SeparatorCertificate>> {
    let full = graph.full_set();
    for u in subsets_canonical(full) {
        if u.len() < 4 {
            continue;
        }
        if !graph.separates(u)?.0 {
            continue;
        }
        let anchor = u.least().unwrap();
        for a in subsets_canonical(u) {
            if !a.contains(anchor) {
                continue;
            }
            let b = u.difference(a);
            if b.is_empty()
                || graph.is_clique(a)?
                || graph.is_clique(b)?
                || !cross_adjacent(graph, a, b)
            {
                continue;
            }
            let cert = SeparatorCertificate::ProductSeparator { a, b };
            cert.validate(graph, full)?;
            return Ok(Some(cert));
        }
    }
    Ok(None)
}

fn is_suspended_within(
    graph: &PresentationGraph,
    active: VertexSet,
    c: VertexSet,
) -> Result<bool> {
    if !c.is_subset(active) {
        return Err(Error::input("C leaves the active vertex set"));
    }
    let rest = active.difference(c);
    if rest.len() != 2 {
        return Ok(false);
    }
    let mut it = rest.iter();
    let (s, t) = (it.next().unwrap(), it.next().unwrap());
    if graph.adjacent(s, t) {
        return Ok(false);
    }
    Ok(c.is_subset(graph.neighbors(s)) && c.is_subset(graph.neighbors(t)))
}

/// True iff S = C ∪ {s,t} for two distinct non-adjacent vertices that are
/// both adjacent to every member of C.
pub fn is_suspended(graph: &PresentationGraph, c: VertexSet) -> Result<bool> {
    is_suspended_within(graph, graph.full_set(), c)
}

fn finite_index_special_within(
    graph: &PresentationGraph,
    active: VertexSet,
    c: VertexSet,
    c1: VertexSet,
) -> Result<bool> {
    if !c1.is_subset(c) || !c.is_subset(active) {
        return Err(Error::input("finite_index_special requires C1 ⊆ C ⊆ S"));
    }
    // F: members of C1 adjacent to every other member of C1 — the maximal
    // clique join-factor of C1 (automatically a clique).
    let f: VertexSet = c1
        .iter()
        .filter(|&u| c1.difference(VertexSet::singleton(u)).is_subset(graph.neighbors(u)))
        .collect();
    let finite_side = c.difference(c1).union(f);
    if !graph.is_clique(finite_side)? {
        return Ok(false);
    }
    let infinite_side = c1.difference(f);
    Ok(c
        .difference(c1)
        .iter()
        .all(|u| infinite_side.is_subset(graph.neighbors(u))))
}

/// Decides graph-theoretically whether ⟨C1⟩ has finite index in ⟨C⟩:
/// with F the maximal clique join-factor of C1, the index is finite iff
/// (C−C1) ∪ F is a clique and every member of C−C1 is adjacent to every
/// member of C1−F.
pub fn finite_index_special(
    graph: &PresentationGraph,
    c: VertexSet,
    c1: VertexSet,
) -> Result<bool> {
    finite_index_special_within(graph, graph.full_set(), c, c1)
}

/// Least non-adjacent pair inside `within`, as a two-element set.
fn least_non_adjacent_pair(graph: &PresentationGraph, within: VertexSet) -> Option<VertexSet> {
    let members = within.members();
    for (i, &u) in members.iter().enumerate() {
        for &v in &members[i + 1..] {
            if !graph.adjacent(u, v) {
                return Some(VertexSet::singleton(u).with(v));
            }
        }
    }
    None
}

/// Exhaustive virtual-factor-separator search. Separating sets C are tried in
/// canonical order, then C1 ⊆ C in canonical order; the witness K is the
/// least non-adjacent pair inside lk(C1) (a pair is the minimal infinite
/// witness). Non-suspended certificates are preferred: the first
/// non-suspended hit is returned immediately, otherwise the first hit.
pub fn find_vfs(graph: &PresentationGraph) -> Result<Option<SeparatorCertificate>> {
    let full = graph.full_set();
    let mut suspended_hit: Option<SeparatorCertificate> = None;
    for c in subsets_canonical(full) {
        if !graph.separates(c)?.0 {
            continue;
        }
        let suspended = is_suspended(graph, c)?;
        if suspended && suspended_hit.is_some() {
            continue;
        }
        for c1 in subsets_canonical(c) {
            if !finite_index_special(graph, c, c1)? {
                continue;
            }
            let Some(k) = least_non_adjacent_pair(graph, graph.link(c1)?) else {
                continue;
            };
            let cert = SeparatorCertificate::Vfs { c, c1, k, suspended };
            cert.validate(graph, full)?;
            if !suspended {
                return Ok(Some(cert));
            }
            suspended_hit = Some(cert);
            break;
        }
    }
    Ok(suspended_hit)
}

/// The link criterion: on a product-separator-free graph, a VFS exists iff
/// some vertex link sits inside a visual product with infinite factors.
/// Returns the least such vertex. The equivalence with `find_vfs` holds for
/// one-ended join-irreducible graphs and is tested, not assumed; the
/// computation itself runs on any product-separator-free graph.
pub fn has_vfs_via_link_criterion(graph: &PresentationGraph) -> Result<Option<u8>> {
    if find_product_separator(graph)?.is_some() {
        return Err(Error::input(
            "link criterion requires a graph without product separators",
        ));
    }
    for x in 0..graph.vertex_count() as u8 {
        let lk = graph.neighbors(x);
        if crate::word::factor_pair_covering(graph, lk).is_some() {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Least clique (canonical order, ∅ included) separating the graph.
pub fn least_separating_clique(graph: &PresentationGraph) -> Result<Option<VertexSet>> {
    for q in subsets_canonical(graph.full_set()) {
        if graph.is_clique(q)? && graph.separates(q)?.0 {
            return Ok(Some(q));
        }
    }
    Ok(None)
}

/// Ends classification: Zero iff Γ is complete; otherwise strip clique join
/// factors and look at the remainder — exactly two non-adjacent vertices
/// means Two; a disconnected remainder or one with a separating clique means
/// Infinite; everything else is One.
pub fn ends(graph: &PresentationGraph) -> Result<EndsClass> {
    let full = graph.full_set();
    if graph.is_clique(full)? {
        return Ok(EndsClass::Zero);
    }
    let mut remainder = VertexSet::EMPTY;
    for f in graph.join_factors() {
        if !graph.is_clique(f)? {
            remainder = remainder.union(f);
        }
    }
    debug_assert!(!remainder.is_empty());
    if remainder.len() == 2 {
        return Ok(EndsClass::Two);
    }
    let sub = graph.induced(remainder)?;
    if least_separating_clique(&sub)?.is_some() {
        return Ok(EndsClass::Infinite);
    }
    Ok(EndsClass::One)
}

/// Sorts certificates-worth of vertex sets consistently for reports.
pub fn sort_sets_canonical(sets: &mut [VertexSet]) {
    sets.sort_by(|a, b| canonical_cmp(*a, *b));
}
