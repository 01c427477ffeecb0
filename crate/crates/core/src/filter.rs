//! τ-paths, fans, and the leveled planar filter built between two diverging
//! geodesic rays; tree extraction, the seven combinatorial facts, the map
//! into the Cayley graph, the factor-path bound, and DOT export.
//!
//! A fan at a vertex g with pending letters a (left) and b (right) is the
//! gadget of four-sided commutation loops along a path τ from a to b in Γ
//! chosen to avoid C ∪ lk(C) (when the tree word into g ends with a factor
//! path generating an infinite subgroup) or B(g) (otherwise) at its interior
//! vertices. Consecutive fans overlap in the loop apexes, which is where
//! vertices with two downward edges come from.

use crate::error::{Error, Result};
use crate::graph::{PresentationGraph, VertexSet};
use crate::word::{self, CoverCache, Letter, NormalForm, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TauMode {
    /// The terminal factor suffix generates an infinite subgroup; interior
    /// vertices avoid C ∪ lk(C).
    InfiniteCase,
    /// Interior vertices avoid the descent set B(g).
    FiniteCase,
}

/// A path t₀,…,t_m in Γ (repeats allowed) with m ≥ 2, consecutive vertices
/// adjacent, interior vertices outside `forbidden`, and endpoints equal to
/// the prescribed letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauPath {
    pub vertices: Vec<Letter>,
    pub forbidden: VertexSet,
    pub mode: TauMode,
}

impl TauPath {
    /// Edge count m.
    pub fn len(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// A fan: the base element, the designated geodesic word into it, the left
/// and right pending letters, and the τ-path whose consecutive pairs label
/// the fan loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    pub base: NormalForm,
    pub prefix_word: Word,
    pub left_letter: Letter,
    pub right_letter: Letter,
    pub tau: TauPath,
}

/// Chooses the forbidden set for a fan at the end of `prefix`.
fn forbidden_for(
    graph: &PresentationGraph,
    prefix: &[Letter],
    cache: &mut CoverCache,
) -> Result<(VertexSet, TauMode)> {
    let start = cache.suffix_start(graph, prefix);
    if start < prefix.len() {
        let letters: VertexSet = prefix[start..].iter().copied().collect();
        if !graph.is_clique(letters)? {
            let (a, b) = cache.cover(graph, letters).ok_or_else(|| {
                Error::invariant("terminal factor suffix lost its cover".to_string())
            })?;
            let last = *prefix.last().expect("nonempty suffix implies nonempty prefix");
            let (first_side, other_side) = if a.contains(last) { (a, b) } else { (b, a) };
            let c = {
                let ia = letters.intersection(first_side);
                if !graph.is_clique(ia)? {
                    ia
                } else {
                    let ib = letters.intersection(other_side);
                    if graph.is_clique(ib)? {
                        return Err(Error::invariant(
                            "infinite factor suffix with both side intersections finite"
                                .to_string(),
                        ));
                    }
                    ib
                }
            };
            return Ok((c.union(graph.link(c)?), TauMode::InfiniteCase));
        }
    }
    Ok((
        word::descents_of_geodesic(graph, prefix),
        TauMode::FiniteCase,
    ))
}

/// Distance-to-`target` table where paths may only pass through vertices
/// outside `forbidden` (start and target themselves may be inside).
fn reverse_bfs(
    graph: &PresentationGraph,
    target: Letter,
    forbidden: VertexSet,
) -> Vec<Option<usize>> {
    let n = graph.vertex_count();
    let mut dist: Vec<Option<usize>> = vec![None; n];
    dist[target as usize] = Some(0);
    let mut queue = std::collections::VecDeque::from([target]);
    while let Some(x) = queue.pop_front() {
        if x != target && forbidden.contains(x) {
            continue; // may end a path here but not pass through
        }
        for u in graph.neighbors(x).iter() {
            if dist[u as usize].is_none() {
                dist[u as usize] = Some(dist[x as usize].unwrap() + 1);
                queue.push_back(u);
            }
        }
    }
    dist
}

/// Greedy least-vertex descent along a reverse-BFS table.
fn descend_path(
    graph: &PresentationGraph,
    from: Letter,
    target: Letter,
    forbidden: VertexSet,
    dist: &[Option<usize>],
    out: &mut Vec<Letter>,
) -> Result<()> {
    let mut current = from;
    while current != target {
        let d = dist[current as usize]
            .ok_or_else(|| Error::invariant("path reconstruction left the table".to_string()))?;
        let next = graph
            .neighbors(current)
            .iter()
            .find(|&u| {
                (u == target || !forbidden.contains(u))
                    && dist[u as usize] == Some(d - 1)
            })
            .ok_or_else(|| Error::invariant("path reconstruction stalled".to_string()))?;
        out.push(next);
        current = next;
    }
    Ok(())
}

fn least_neighbor_outside(
    graph: &PresentationGraph,
    v: Letter,
    forbidden: VertexSet,
) -> Option<Letter> {
    graph.neighbors(v).difference(forbidden).least()
}

fn tau_path_cached(
    graph: &PresentationGraph,
    prefix: &[Letter],
    a: Letter,
    b: Letter,
    cache: &mut CoverCache,
) -> Result<TauPath> {
    let mut wa = prefix.to_vec();
    wa.push(a);
    let mut wb = prefix.to_vec();
    wb.push(b);
    if !word::is_geodesic(graph, &wa)? || !word::is_geodesic(graph, &wb)? {
        return Err(Error::input(
            "tau path requires (prefix,a) and (prefix,b) to be geodesic",
        ));
    }
    let (forbidden, mode) = forbidden_for(graph, prefix, cache)?;
    let diag = || {
        format!(
            "prefix `{}`, endpoints {}/{}, forbidden {}",
            word::word_to_string(graph, prefix),
            graph.name(a),
            graph.name(b),
            graph.set_to_string(forbidden)
        )
    };

    let vertices: Vec<Letter> = if a == b {
        // (a, v, a) with v the least neighbor of a outside forbidden
        let v = least_neighbor_outside(graph, a, forbidden).ok_or_else(|| {
            Error::invariant(format!("no admissible loop vertex: {}", diag()))
        })?;
        vec![a, v, a]
    } else {
        let dist = reverse_bfs(graph, b, forbidden);
        let d_a = dist[a as usize]
            .ok_or_else(|| Error::invariant(format!("no admissible path: {}", diag())))?;
        if d_a >= 2 {
            let mut path = vec![a];
            descend_path(graph, a, b, forbidden, &dist, &mut path)?;
            path
        } else if !forbidden.contains(b) {
            // adjacent endpoints: extend the edge to (a, b, w, b)
            let w = least_neighbor_outside(graph, b, forbidden).ok_or_else(|| {
                Error::invariant(format!("no admissible extension vertex: {}", diag()))
            })?;
            vec![a, b, w, b]
        } else {
            // adjacent endpoints with b forbidden: the direct edge would put
            // b in the interior, so route through non-forbidden vertices
            let first = graph
                .neighbors(a)
                .iter()
                .filter(|&v| !forbidden.contains(v) && dist[v as usize].is_some())
                .min_by_key(|&v| (dist[v as usize].unwrap(), v))
                .ok_or_else(|| {
                    Error::invariant(format!("no admissible long route: {}", diag()))
                })?;
            let mut path = vec![a, first];
            descend_path(graph, first, b, forbidden, &dist, &mut path)?;
            path
        }
    };

    let tau = TauPath {
        vertices,
        forbidden,
        mode,
    };
    validate_tau(graph, &tau, a, b)?;
    Ok(tau)
}

fn validate_tau(graph: &PresentationGraph, tau: &TauPath, a: Letter, b: Letter) -> Result<()> {
    let vs = &tau.vertices;
    if tau.len() < 2 {
        return Err(Error::invariant("tau path shorter than 2 edges".to_string()));
    }
    if vs[0] != a || *vs.last().unwrap() != b {
        return Err(Error::invariant("tau path endpoints are wrong".to_string()));
    }
    for pair in vs.windows(2) {
        if !graph.adjacent(pair[0], pair[1]) {
            return Err(Error::invariant(format!(
                "tau path steps through the non-edge {}-{}",
                graph.name(pair[0]),
                graph.name(pair[1])
            )));
        }
    }
    for &t in &vs[1..vs.len() - 1] {
        if tau.forbidden.contains(t) {
            return Err(Error::invariant(format!(
                "tau interior vertex {} is forbidden",
                graph.name(t)
            )));
        }
    }
    Ok(())
}

/// Deterministic τ-path selection for a fan at the end of `prefix`.
pub fn tau_path(
    graph: &PresentationGraph,
    prefix: &[Letter],
    a: Letter,
    b: Letter,
) -> Result<TauPath> {
    tau_path_cached(graph, prefix, a, b, &mut CoverCache::new())
}

/// The forbidden set a fan over `prefix` will impose on its τ-path interior,
/// together with which case selected it.
pub fn fan_forbidden(
    graph: &PresentationGraph,
    prefix: &[Letter],
) -> Result<(VertexSet, TauMode)> {
    if !word::is_geodesic(graph, prefix)? {
        return Err(Error::input("fan_forbidden requires a geodesic word"));
    }
    forbidden_for(graph, prefix, &mut CoverCache::new())
}

fn build_fan_cached(
    graph: &PresentationGraph,
    prefix: &[Letter],
    a: Letter,
    b: Letter,
    cache: &mut CoverCache,
) -> Result<Fan> {
    let tau = tau_path_cached(graph, prefix, a, b, cache)?;
    for pair in tau.vertices.windows(2) {
        let mut loop_word = prefix.to_vec();
        loop_word.push(pair[0]);
        loop_word.push(pair[1]);
        if !word::is_geodesic(graph, &loop_word)? {
            return Err(Error::invariant(format!(
                "fan loop ({}, {}) over `{}` is not geodesic",
                graph.name(pair[0]),
                graph.name(pair[1]),
                word::word_to_string(graph, prefix)
            )));
        }
    }
    Ok(Fan {
        base: word::normal_form(graph, prefix)?,
        prefix_word: prefix.to_vec(),
        left_letter: a,
        right_letter: b,
        tau,
    })
}

/// Builds the fan for (prefix, a) and (prefix, b), asserting that every loop
/// path (prefix, tᵢ, tᵢ₊₁) is geodesic.
pub fn build_fan(
    graph: &PresentationGraph,
    prefix: &[Letter],
    a: Letter,
    b: Letter,
) -> Result<Fan> {
    build_fan_cached(graph, prefix, a, b, &mut CoverCache::new())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    Prefix,
    LeftFan,
    Interior,
    RightFan,
}

#[derive(Debug, Clone)]
pub struct FilterEdge {
    /// Lower endpoint (vertex id).
    pub from: usize,
    /// Upper endpoint (vertex id).
    pub to: usize,
    pub label: Letter,
    pub kind: EdgeKind,
    pub is_tree: bool,
    pub on_alpha: bool,
    pub on_beta: bool,
}

#[derive(Debug, Clone)]
pub struct FilterVertex {
    pub element: NormalForm,
    /// The designated geodesic from the base: the unique tree path.
    pub tree_word: Word,
    pub level: usize,
    pub planar_index: usize,
    /// Downward edges, left to right (1 or 2; 0 for the base).
    pub down_edges: Vec<usize>,
    /// Upward edges, left to right.
    pub up_edges: Vec<usize>,
    fan_left: Option<Letter>,
    fan_right: Option<Letter>,
}

/// The leveled planar filter for two geodesic rays.
#[derive(Debug, Clone)]
pub struct Filter {
    graph: PresentationGraph,
    pub vertices: Vec<FilterVertex>,
    pub edges: Vec<FilterEdge>,
    /// Vertex ids per level, in planar (left-to-right) order.
    pub levels: Vec<Vec<usize>>,
    /// Level of the divergence vertex (the shared-prefix column ends here).
    pub divergence_level: usize,
    pub depth: usize,
}

impl Filter {
    pub fn graph(&self) -> &PresentationGraph {
        &self.graph
    }

    pub fn top_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn vertex_name(&self, id: usize) -> String {
        let v = &self.vertices[id];
        format!("v{}_{}", v.level, v.planar_index)
    }

    /// True when the vertex lies on one of the defining rays (the shared
    /// prefix, the leftmost chain α, or the rightmost chain β).
    pub fn on_rays(&self, id: usize) -> bool {
        let v = &self.vertices[id];
        v.level <= self.divergence_level
            || v.planar_index == 0
            || v.planar_index + 1 == self.levels[v.level].len()
    }

    fn add_vertex(&mut self, element: NormalForm, tree_word: Word, level: usize) -> usize {
        let id = self.vertices.len();
        while self.levels.len() <= level {
            self.levels.push(Vec::new());
        }
        let planar_index = self.levels[level].len();
        self.levels[level].push(id);
        self.vertices.push(FilterVertex {
            element,
            tree_word,
            level,
            planar_index,
            down_edges: Vec::new(),
            up_edges: Vec::new(),
            fan_left: None,
            fan_right: None,
        });
        id
    }

    fn add_edge(&mut self, edge: FilterEdge) -> usize {
        let id = self.edges.len();
        self.vertices[edge.from].up_edges.push(id);
        self.vertices[edge.to].down_edges.push(id);
        self.edges.push(edge);
        id
    }
}

fn lcp_len(a: &[Letter], b: &[Letter]) -> usize {
    a.iter().zip(b.iter()).take_while(|(x, y)| x == y).count()
}

/// Builds the filter for two geodesic rays, truncated after `depth` fan
/// levels above the divergence vertex. Rays must be long enough to supply a
/// letter for every constructed level. Rays that agree beyond the reachable
/// depth are accepted; their fans simply start with equal pending letters.
pub fn build_filter(
    graph: &PresentationGraph,
    alpha: &[Letter],
    beta: &[Letter],
    depth: usize,
) -> Result<Filter> {
    if !word::is_geodesic(graph, alpha)? || !word::is_geodesic(graph, beta)? {
        return Err(Error::input("filter rays must be geodesic"));
    }
    let min_len = alpha.len().min(beta.len());
    if depth > min_len {
        return Err(Error::input(format!(
            "depth {depth} exceeds the usable ray length {min_len}"
        )));
    }
    let n = lcp_len(alpha, beta).min(min_len - depth);

    let mut filter = Filter {
        graph: graph.clone(),
        vertices: Vec::new(),
        edges: Vec::new(),
        levels: Vec::new(),
        divergence_level: n,
        depth,
    };

    // Shared prefix column.
    let mut prev = filter.add_vertex(NormalForm::identity(), Word::new(), 0);
    for j in 0..n {
        let prefix = &alpha[..=j];
        let v = filter.add_vertex(
            word::normal_form(graph, prefix)?,
            prefix.to_vec(),
            j + 1,
        );
        filter.add_edge(FilterEdge {
            from: prev,
            to: v,
            label: alpha[j],
            kind: EdgeKind::Prefix,
            is_tree: true,
            on_alpha: true,
            on_beta: true,
        });
        prev = v;
    }
    if depth == 0 {
        return Ok(filter);
    }
    filter.vertices[prev].fan_left = Some(alpha[n]);
    filter.vertices[prev].fan_right = Some(beta[n]);

    let mut cache = CoverCache::new();
    for k in n..n + depth {
        let row = filter.levels[k].clone();
        let next_has_fans = k + 1 < n + depth;
        for (j, &vid) in row.iter().enumerate() {
            let prefix = filter.vertices[vid].tree_word.clone();
            let elem_word = filter.vertices[vid].element.as_slice().to_vec();
            let a = filter.vertices[vid].fan_left.ok_or_else(|| {
                Error::invariant(format!("{} has no left letter", filter.vertex_name(vid)))
            })?;
            let b = filter.vertices[vid].fan_right.ok_or_else(|| {
                Error::invariant(format!("{} has no right letter", filter.vertex_name(vid)))
            })?;
            let fan = build_fan_cached(graph, &prefix, a, b, &mut cache)?;
            let tau = &fan.tau.vertices;
            let m = tau.len() - 1;

            for (idx, &t) in tau.iter().enumerate() {
                let kind = if idx == 0 {
                    EdgeKind::LeftFan
                } else if idx == m {
                    EdgeKind::RightFan
                } else {
                    EdgeKind::Interior
                };
                let on_alpha = j == 0 && idx == 0;
                let on_beta = j + 1 == row.len() && idx == m;
                let is_tree = kind != EdgeKind::RightFan || on_beta;

                if idx == 0 && j > 0 {
                    // Shared loop apex: the previous fan created it as its
                    // last child; this left fan edge is its tree edge.
                    let uid = *filter.levels[k + 1].last().ok_or_else(|| {
                        Error::invariant("missing shared apex row".to_string())
                    })?;
                    let mut w = elem_word.clone();
                    if !word::append_letter(graph, &mut w, t) {
                        return Err(Error::invariant(format!(
                            "left fan letter {} descends at {}",
                            graph.name(t),
                            filter.vertex_name(vid)
                        )));
                    }
                    let expect = word::normal_form(graph, &w)?;
                    if filter.vertices[uid].element != expect {
                        return Err(Error::invariant(format!(
                            "apex element mismatch above {}",
                            filter.vertex_name(vid)
                        )));
                    }
                    filter.add_edge(FilterEdge {
                        from: vid,
                        to: uid,
                        label: t,
                        kind,
                        is_tree,
                        on_alpha,
                        on_beta,
                    });
                    let mut tw = prefix.clone();
                    tw.push(t);
                    filter.vertices[uid].tree_word = tw;
                    if next_has_fans {
                        filter.vertices[uid].fan_right = Some(tau[1]);
                    }
                    continue;
                }

                let mut w = elem_word.clone();
                if !word::append_letter(graph, &mut w, t) {
                    return Err(Error::invariant(format!(
                        "fan letter {} descends at {}",
                        graph.name(t),
                        filter.vertex_name(vid)
                    )));
                }
                let element = word::normal_form(graph, &w)?;
                let tree_word = if is_tree {
                    let mut tw = prefix.clone();
                    tw.push(t);
                    tw
                } else {
                    Word::new() // filled when the right parent attaches
                };
                let uid = filter.add_vertex(element, tree_word, k + 1);
                filter.add_edge(FilterEdge {
                    from: vid,
                    to: uid,
                    label: t,
                    kind,
                    is_tree,
                    on_alpha,
                    on_beta,
                });
                if next_has_fans {
                    filter.vertices[uid].fan_left = if idx == 0 {
                        Some(alpha[k + 1]) // leftmost child of the leftmost fan
                    } else {
                        Some(tau[idx - 1])
                    };
                    filter.vertices[uid].fan_right = if idx == m {
                        if j + 1 == row.len() {
                            Some(beta[k + 1])
                        } else {
                            None // set when the next fan shares this apex
                        }
                    } else {
                        Some(tau[idx + 1])
                    };
                }
            }
        }
        // every pending apex must have been adopted by its right parent
        for &uid in &filter.levels[k + 1] {
            let v = &filter.vertices[uid];
            if v.tree_word.is_empty() && v.level > 0 {
                return Err(Error::invariant(format!(
                    "{} was never attached to a tree edge",
                    filter.vertex_name(uid)
                )));
            }
        }
    }
    Ok(filter)
}

/// The filter minus its non-tree edges.
#[derive(Debug, Clone)]
pub struct TreeView {
    /// For each vertex, its unique tree parent (vertex, edge); None for base.
    pub parent: Vec<Option<(usize, usize)>>,
    /// Tree up-edges per vertex, planar order.
    pub tree_up_edges: Vec<Vec<usize>>,
    pub tree_edge_count: usize,
}

/// Removes the non-tree edges and verifies the result is a tree containing
/// both rays and every interior edge, with no dead ends below the top level.
pub fn extract_tree(filter: &Filter) -> Result<TreeView> {
    let nv = filter.vertices.len();
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; nv];
    let mut tree_up_edges: Vec<Vec<usize>> = vec![Vec::new(); nv];
    let mut count = 0usize;

    for (eid, e) in filter.edges.iter().enumerate() {
        let must_be_tree =
            e.on_alpha || e.on_beta || matches!(e.kind, EdgeKind::Interior | EdgeKind::Prefix);
        if must_be_tree && !e.is_tree {
            return Err(Error::invariant(format!(
                "edge {}→{} should be a tree edge",
                filter.vertex_name(e.from),
                filter.vertex_name(e.to)
            )));
        }
        if e.is_tree {
            count += 1;
            tree_up_edges[e.from].push(eid);
            if parent[e.to].replace((e.from, eid)).is_some() {
                return Err(Error::invariant(format!(
                    "{} has two tree parents",
                    filter.vertex_name(e.to)
                )));
            }
        }
    }
    for (id, v) in filter.vertices.iter().enumerate() {
        if v.level == 0 {
            continue;
        }
        if parent[id].is_none() {
            return Err(Error::invariant(format!(
                "{} has no tree parent",
                filter.vertex_name(id)
            )));
        }
    }
    if count != nv - 1 {
        return Err(Error::invariant(format!(
            "tree has {count} edges for {nv} vertices"
        )));
    }
    // no dead ends strictly below the top level
    let top = filter.top_level();
    for (id, v) in filter.vertices.iter().enumerate() {
        if v.level < top && tree_up_edges[id].is_empty() {
            return Err(Error::invariant(format!(
                "dead end at {} below the top level",
                filter.vertex_name(id)
            )));
        }
    }
    Ok(TreeView {
        parent,
        tree_up_edges,
        tree_edge_count: count,
    })
}

#[derive(Debug, Clone)]
pub struct FactViolation {
    pub fact: u8,
    pub detail: String,
}

/// Outcome of checking the seven combinatorial facts.
#[derive(Debug, Clone, Default)]
pub struct FactsReport {
    pub violations: Vec<FactViolation>,
}

impl FactsReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn fact_passes(&self, fact: u8) -> bool {
        !self.violations.iter().any(|v| v.fact == fact)
    }

    fn fail(&mut self, fact: u8, detail: String) {
        self.violations.push(FactViolation { fact, detail });
    }
}

/// Checks the filter's combinatorial facts:
/// 1. every non-base vertex has one or two downward edges;
/// 2. a single downward edge is an interior edge or lies on a ray;
/// 3. a double-down vertex is a loop apex: right-fan edge on the left,
///    left-fan edge on the right, distinct labels, both from one loop;
/// 4. the upward edges of every fanned vertex are one left fan edge, at
///    least one interior edge and one right fan edge, in planar order;
/// 5. dropping the non-tree edges leaves a tree containing both rays and all
///    interior edges;
/// 6. an edge is a non-tree edge iff it is a right fan edge off β, iff it is
///    the upper-left edge of a fan loop;
/// 7. the tree has no dead ends below the top level.
pub fn verify_facts(filter: &Filter) -> FactsReport {
    let mut report = FactsReport::default();
    let name = |id: usize| filter.vertex_name(id);
    let top = filter.top_level();

    for (id, v) in filter.vertices.iter().enumerate() {
        // (1)
        if v.level == 0 {
            if !v.down_edges.is_empty() {
                report.fail(1, format!("base vertex {} has downward edges", name(id)));
            }
        } else if v.down_edges.is_empty() || v.down_edges.len() > 2 {
            report.fail(
                1,
                format!("{} has {} downward edges", name(id), v.down_edges.len()),
            );
        }
        // (2)
        if v.down_edges.len() == 1 {
            let e = &filter.edges[v.down_edges[0]];
            if !(matches!(e.kind, EdgeKind::Interior) || e.on_alpha || e.on_beta) {
                report.fail(
                    2,
                    format!("single downward edge of {} is a bare fan edge", name(id)),
                );
            }
        }
        // (3)
        if v.down_edges.len() == 2 {
            let l = &filter.edges[v.down_edges[0]];
            let r = &filter.edges[v.down_edges[1]];
            if l.kind != EdgeKind::RightFan || r.kind != EdgeKind::LeftFan {
                report.fail(
                    3,
                    format!("{} is not framed as a loop apex", name(id)),
                );
            }
            if l.label == r.label {
                report.fail(3, format!("loop apex {} has equal edge labels", name(id)));
            }
            let (lo, ro) = (&filter.vertices[l.from], &filter.vertices[r.from]);
            let siblings = lo.level == ro.level && lo.planar_index + 1 == ro.planar_index;
            let common_parent = lo
                .down_edges
                .iter()
                .map(|&e| filter.edges[e].from)
                .any(|p| ro.down_edges.iter().any(|&e| filter.edges[e].from == p));
            if !(siblings && common_parent) {
                report.fail(
                    3,
                    format!("downward edges of {} do not bound one fan loop", name(id)),
                );
            }
        }
        // (4)
        if v.level >= filter.divergence_level && v.level < top {
            let kinds: Vec<EdgeKind> =
                v.up_edges.iter().map(|&e| filter.edges[e].kind).collect();
            let ok = kinds.len() >= 3
                && kinds.first() == Some(&EdgeKind::LeftFan)
                && kinds.last() == Some(&EdgeKind::RightFan)
                && kinds[1..kinds.len() - 1]
                    .iter()
                    .all(|k| *k == EdgeKind::Interior);
            if !ok {
                report.fail(
                    4,
                    format!("upward edges of {} are not a single fan", name(id)),
                );
            }
        }
        // (7)
        if v.level < top {
            let has_tree_up = v.up_edges.iter().any(|&e| filter.edges[e].is_tree);
            if !has_tree_up {
                report.fail(7, format!("dead end at {}", name(id)));
            }
            if v.level >= filter.divergence_level {
                let has_interior = v
                    .up_edges
                    .iter()
                    .any(|&e| filter.edges[e].kind == EdgeKind::Interior);
                if !has_interior {
                    report.fail(7, format!("no interior edge above {}", name(id)));
                }
            }
        }
    }

    // (6) non-tree ⟺ right fan edge off β ⟺ upper-left edge of a loop
    for (eid, e) in filter.edges.iter().enumerate() {
        let off_beta_right_fan = e.kind == EdgeKind::RightFan && !e.on_beta;
        if e.is_tree == off_beta_right_fan {
            report.fail(
                6,
                format!(
                    "edge {}→{} tree flag disagrees with its classification",
                    filter.vertex_name(e.from),
                    filter.vertex_name(e.to)
                ),
            );
        }
        let apex_left_down = filter.vertices[e.to].down_edges.len() == 2
            && filter.vertices[e.to].down_edges[0] == eid;
        if off_beta_right_fan && !apex_left_down {
            report.fail(
                6,
                format!(
                    "non-tree edge {}→{} is not the upper-left edge of a loop",
                    filter.vertex_name(e.from),
                    filter.vertex_name(e.to)
                ),
            );
        }
    }

    // (5)
    if let Err(err) = extract_tree(filter) {
        report.fail(5, err.to_string());
    }

    report
}

/// Report of the natural map into the Cayley graph: every tree path from the
/// base is geodesic and vertex level equals Cayley length; elements per
/// level are returned as a sorted multiset (the map need not be injective).
#[derive(Debug, Clone)]
pub struct CayleyReport {
    pub level_elements: Vec<Vec<NormalForm>>,
}

pub fn map_to_cayley(filter: &Filter) -> Result<CayleyReport> {
    let graph = &filter.graph;
    let mut level_elements: Vec<Vec<NormalForm>> = vec![Vec::new(); filter.levels.len()];
    for (id, v) in filter.vertices.iter().enumerate() {
        if v.tree_word.len() != v.level {
            return Err(Error::invariant(format!(
                "{} has a level-{} tree word at level {}",
                filter.vertex_name(id),
                v.tree_word.len(),
                v.level
            )));
        }
        if !word::is_geodesic(graph, &v.tree_word)? {
            return Err(Error::invariant(format!(
                "tree word of {} is not geodesic",
                filter.vertex_name(id)
            )));
        }
        let nf = word::normal_form(graph, &v.tree_word)?;
        if nf != v.element {
            return Err(Error::invariant(format!(
                "tree word of {} reaches the wrong element",
                filter.vertex_name(id)
            )));
        }
        if nf.len() != v.level {
            return Err(Error::invariant(format!(
                "{} has Cayley length {} at level {}",
                filter.vertex_name(id),
                nf.len(),
                v.level
            )));
        }
        level_elements[v.level].push(nf);
    }
    for row in &mut level_elements {
        row.sort();
    }
    Ok(CayleyReport { level_elements })
}

/// Longest upward directed tree path that meets the rays in at most its
/// initial vertex and is a factor path, together with whether it stays
/// within the 3·|S| bound.
pub fn check_factor_bound(filter: &Filter, tree: &TreeView) -> (usize, bool) {
    let graph = &filter.graph;
    let mut cache = CoverCache::new();
    let mut max_len = 0usize;

    fn dfs(
        filter: &Filter,
        tree: &TreeView,
        cache: &mut CoverCache,
        v: usize,
        letters: VertexSet,
        len: usize,
        max_len: &mut usize,
    ) {
        if len > 0 {
            if cache.cover(filter.graph(), letters).is_none() {
                return; // supersets can never regain a cover
            }
            *max_len = (*max_len).max(len);
        }
        for &eid in &tree.tree_up_edges[v] {
            let e = &filter.edges[eid];
            if filter.on_rays(e.to) {
                continue;
            }
            dfs(
                filter,
                tree,
                cache,
                e.to,
                letters.with(e.label),
                len + 1,
                max_len,
            );
        }
    }

    for v in 0..filter.vertices.len() {
        dfs(filter, tree, &mut cache, v, VertexSet::EMPTY, 0, &mut max_len);
    }
    (max_len, max_len <= 3 * graph.vertex_count())
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DotOptions {
    /// Label vertices with their Cayley elements instead of grid names.
    pub element_labels: bool,
}

/// Renders the filter as a DOT digraph: ranks are levels, edge labels are
/// generator names, non-tree edges are dashed. Byte-for-byte deterministic.
pub fn export_dot(filter: &Filter, options: &DotOptions) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let _ = writeln!(out, "digraph filter {{");
    let _ = writeln!(out, "  rankdir=BT;");
    let _ = writeln!(out, "  node [shape=circle, fontsize=10];");
    for row in &filter.levels {
        let _ = write!(out, "  {{ rank=same;");
        for &id in row {
            let _ = write!(out, " {};", filter.vertex_name(id));
        }
        let _ = writeln!(out, " }}");
    }
    for row in &filter.levels {
        for &id in row {
            let v = &filter.vertices[id];
            let label = if options.element_labels {
                let text = v.element.display(&filter.graph);
                if text.is_empty() {
                    "1".to_string()
                } else {
                    text
                }
            } else {
                filter.vertex_name(id)
            };
            let _ = writeln!(out, "  {} [label=\"{}\"];", filter.vertex_name(id), label);
        }
    }
    for e in &filter.edges {
        let style = if e.is_tree { "" } else { ", style=dashed" };
        let _ = writeln!(
            out,
            "  {} -> {} [label=\"{}\"{}];",
            filter.vertex_name(e.from),
            filter.vertex_name(e.to),
            filter.graph.name(e.label),
            style
        );
    }
    let _ = writeln!(out, "}}");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fixture;
    use crate::word::parse_word;

    fn w(graph: &PresentationGraph, text: &str) -> Word {
        parse_word(graph, text).unwrap()
    }

    fn letters(graph: &PresentationGraph, text: &str) -> Vec<Letter> {
        w(graph, text)
    }

    #[test]
    fn tau_finite_case_adjacent_endpoints() {
        let c5 = fixture("C5").unwrap();
        let (c, d) = (c5.index_of("c").unwrap(), c5.index_of("d").unwrap());
        let tau = tau_path(&c5, &w(&c5, "a"), c, d).unwrap();
        assert_eq!(tau.mode, TauMode::FiniteCase);
        assert_eq!(tau.vertices, letters(&c5, "c d c d"));
        assert_eq!(tau.forbidden, [c5.index_of("a").unwrap()].into_iter().collect());
    }

    #[test]
    fn tau_equal_endpoints() {
        let c5 = fixture("C5").unwrap();
        let c = c5.index_of("c").unwrap();
        let tau = tau_path(&c5, &w(&c5, "a"), c, c).unwrap();
        assert_eq!(tau.vertices, letters(&c5, "c b c"));
    }

    #[test]
    fn tau_rejects_non_geodesic_setup() {
        let c5 = fixture("C5").unwrap();
        let a = c5.index_of("a").unwrap();
        // (a, a) is not geodesic
        assert!(tau_path(&c5, &w(&c5, "a"), a, a).is_err());
    }

    #[test]
    fn fan_examples() {
        let c5 = fixture("C5").unwrap();
        let (c, d) = (c5.index_of("c").unwrap(), c5.index_of("d").unwrap());
        let fan = build_fan(&c5, &w(&c5, "a"), c, d).unwrap();
        let loops: Vec<(Letter, Letter)> = fan
            .tau
            .vertices
            .windows(2)
            .map(|p| (p[0], p[1]))
            .collect();
        assert_eq!(
            loops,
            vec![
                (c, d),
                (d, c),
                (c, d),
            ]
        );

        let fan = build_fan(&c5, &w(&c5, "a"), c, c).unwrap();
        let b = c5.index_of("b").unwrap();
        let loops: Vec<(Letter, Letter)> = fan
            .tau
            .vertices
            .windows(2)
            .map(|p| (p[0], p[1]))
            .collect();
        assert_eq!(loops, vec![(c, b), (b, c)]);
    }

    #[test]
    fn filter_first_row_matches_construction() {
        let c5 = fixture("C5").unwrap();
        let alpha = w(&c5, "a c a c a");
        let beta = w(&c5, "a d a d a");
        let filter = build_filter(&c5, &alpha, &beta, 3).unwrap();
        assert_eq!(filter.divergence_level, 1);
        let row: Vec<String> = filter.levels[2]
            .iter()
            .map(|&id| filter.vertices[id].element.display(&c5))
            .collect();
        assert_eq!(row, vec!["a c", "a d", "a c", "a d"]);
    }

    #[test]
    fn filter_depth_zero_is_prefix_column() {
        let c5 = fixture("C5").unwrap();
        let alpha = w(&c5, "a c a");
        let beta = w(&c5, "a d a");
        let filter = build_filter(&c5, &alpha, &beta, 0).unwrap();
        assert_eq!(filter.levels.len(), 2); // levels 0 and 1
        assert!(filter.levels.iter().all(|row| row.len() == 1));
        let tree = extract_tree(&filter).unwrap();
        let (max_len, pass) = check_factor_bound(&filter, &tree);
        assert_eq!((max_len, pass), (0, true));
    }

    #[test]
    fn filter_accepts_equal_rays() {
        let c5 = fixture("C5").unwrap();
        let alpha = w(&c5, "a c a c a");
        let filter = build_filter(&c5, &alpha, &alpha, 2).unwrap();
        assert_eq!(filter.divergence_level, 3);
        assert!(verify_facts(&filter).pass());
        assert!(map_to_cayley(&filter).is_ok());
    }

    #[test]
    fn filter_rejects_bad_input() {
        let c5 = fixture("C5").unwrap();
        assert!(build_filter(&c5, &w(&c5, "a b a"), &w(&c5, "a"), 0).is_err());
        assert!(build_filter(&c5, &w(&c5, "a c"), &w(&c5, "a d"), 9).is_err());
    }

    #[test]
    fn facts_and_tree_on_c5() {
        let c5 = fixture("C5").unwrap();
        let alpha = w(&c5, "a c a c a c a");
        let beta = w(&c5, "a d a d a d a");
        let filter = build_filter(&c5, &alpha, &beta, 4).unwrap();
        let report = verify_facts(&filter);
        assert!(report.pass(), "violations: {:?}", report.violations);

        let tree = extract_tree(&filter).unwrap();
        assert_eq!(tree.tree_edge_count, filter.vertices.len() - 1);
        for e in &filter.edges {
            if !e.is_tree {
                assert_eq!(e.kind, EdgeKind::RightFan);
                assert!(!e.on_beta);
            }
        }

        let cayley = map_to_cayley(&filter).unwrap();
        assert_eq!(cayley.level_elements[1].len(), 1);

        let (max_len, pass) = check_factor_bound(&filter, &tree);
        assert_eq!(max_len, 0);
        assert!(pass);
    }

    #[test]
    fn corrupted_tree_flag_fails_fact_six() {
        let c5 = fixture("C5").unwrap();
        let alpha = w(&c5, "a c a c a");
        let beta = w(&c5, "a d a d a");
        let mut filter = build_filter(&c5, &alpha, &beta, 2).unwrap();
        let eid = filter
            .edges
            .iter()
            .position(|e| !e.is_tree)
            .expect("depth-2 filter has non-tree edges");
        filter.edges[eid].is_tree = true;
        let report = verify_facts(&filter);
        assert!(!report.fact_passes(6));
    }

    #[test]
    fn dot_export_is_deterministic() {
        let c5 = fixture("C5").unwrap();
        let alpha = w(&c5, "a c a c a");
        let beta = w(&c5, "a d a d a");
        let filter = build_filter(&c5, &alpha, &beta, 2).unwrap();
        let options = DotOptions::default();
        let one = export_dot(&filter, &options);
        let two = export_dot(&filter, &options);
        assert_eq!(one, two);

        // exactly one dashed (upper-left) edge per fan-loop apex
        let dashed = one.matches("style=dashed").count();
        let apexes = filter
            .vertices
            .iter()
            .filter(|v| v.down_edges.len() == 2)
            .count();
        assert_eq!(dashed, apexes);
        assert!(dashed > 0);

        let labeled = export_dot(
            &filter,
            &DotOptions {
                element_labels: true,
            },
        );
        assert!(labeled.contains("label=\"a c\""));
    }
}
