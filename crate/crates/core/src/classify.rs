//! The boundary local-connectivity decision procedure: ends triage, the
//! non-suspended VFS rule, visual join recursion, and the terminal rule for
//! one-ended, join-irreducible, separator-free graphs. Every step records a
//! trace entry with its subgraph and certificate.

use crate::error::Result;
use crate::graph::{PresentationGraph, VertexSet};
use crate::rng::SplitMix64;
use crate::separators::{
    ends, find_product_separator, find_vfs, least_separating_clique, EndsClass,
    SeparatorCertificate,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    LocallyConnected,
    NotLocallyConnected,
    Undetermined(String),
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::LocallyConnected => "LocallyConnected",
            Verdict::NotLocallyConnected => "NotLocallyConnected",
            Verdict::Undetermined(_) => "Undetermined",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Undetermined(reason) => write!(f, "Undetermined ({reason})"),
            other => write!(f, "{}", other.label()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    FiniteGroup,
    TwoEnded,
    InfiniteEnded,
    VfsNonSuspended,
    JoinRecursion,
    MainTheorem,
    Gap,
}

impl std::fmt::Display for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Rule::FiniteGroup => "FiniteGroup",
            Rule::TwoEnded => "TwoEnded",
            Rule::InfiniteEnded => "InfiniteEnded",
            Rule::VfsNonSuspended => "VfsNonSuspended",
            Rule::JoinRecursion => "JoinRecursion",
            Rule::MainTheorem => "MainTheorem",
            Rule::Gap => "Gap",
        };
        write!(f, "{s}")
    }
}

/// One applied rule: the subgraph it fired on (in the original graph's
/// indices) and, for certificate-consuming rules, the witness.
#[derive(Debug, Clone)]
pub struct TraceStep {
    pub subgraph: VertexSet,
    pub rule: Rule,
    pub certificate: Option<SeparatorCertificate>,
}

fn translate_set(s: VertexSet, map: &[u8]) -> VertexSet {
    s.iter().map(|i| map[i as usize]).collect()
}

fn translate_cert(cert: SeparatorCertificate, map: &[u8]) -> SeparatorCertificate {
    match cert {
        SeparatorCertificate::ProductSeparator { a, b } => SeparatorCertificate::ProductSeparator {
            a: translate_set(a, map),
            b: translate_set(b, map),
        },
        SeparatorCertificate::Vfs { c, c1, k, suspended } => SeparatorCertificate::Vfs {
            c: translate_set(c, map),
            c1: translate_set(c1, map),
            k: translate_set(k, map),
            suspended,
        },
        SeparatorCertificate::SeparatingClique { q } => SeparatorCertificate::SeparatingClique {
            q: translate_set(q, map),
        },
        SeparatorCertificate::JoinSplit { factors } => SeparatorCertificate::JoinSplit {
            factors: factors.into_iter().map(|f| translate_set(f, map)).collect(),
        },
    }
}

/// Classifies whether every CAT(0) boundary of the group is locally
/// connected, with a rule trace. Decision order: finite, two-ended,
/// infinite-ended, non-suspended VFS, join recursion, then the terminal rule
/// (locally connected when no product separator and no VFS exist; otherwise
/// the gap the theory leaves open).
pub fn classify(graph: &PresentationGraph) -> Result<(Verdict, Vec<TraceStep>)> {
    let mut trace = Vec::new();
    let map: Vec<u8> = (0..graph.vertex_count() as u8).collect();
    let verdict = classify_rec(graph, &map, &mut trace)?;
    Ok((verdict, trace))
}

/// `map` sends the working graph's indices to the original graph's.
fn classify_rec(
    graph: &PresentationGraph,
    map: &[u8],
    trace: &mut Vec<TraceStep>,
) -> Result<Verdict> {
    let here = translate_set(graph.full_set(), map);

    match ends(graph)? {
        EndsClass::Zero => {
            trace.push(TraceStep {
                subgraph: here,
                rule: Rule::FiniteGroup,
                certificate: None,
            });
            return Ok(Verdict::LocallyConnected);
        }
        EndsClass::Two => {
            trace.push(TraceStep {
                subgraph: here,
                rule: Rule::TwoEnded,
                certificate: None,
            });
            return Ok(Verdict::LocallyConnected);
        }
        EndsClass::Infinite => {
            let q = least_separating_clique(graph)?
                .expect("an infinite-ended graph has a separating clique");
            let cert = SeparatorCertificate::SeparatingClique { q };
            cert.validate(graph, graph.full_set())?;
            trace.push(TraceStep {
                subgraph: here,
                rule: Rule::InfiniteEnded,
                certificate: Some(translate_cert(cert, map)),
            });
            return Ok(Verdict::NotLocallyConnected);
        }
        EndsClass::One => {}
    }

    let vfs = find_vfs(graph)?;
    if let Some(cert @ SeparatorCertificate::Vfs { suspended: false, .. }) = &vfs {
        trace.push(TraceStep {
            subgraph: here,
            rule: Rule::VfsNonSuspended,
            certificate: Some(translate_cert(cert.clone(), map)),
        });
        return Ok(Verdict::NotLocallyConnected);
    }

    let factors = graph.join_factors();
    if factors.len() > 1 {
        trace.push(TraceStep {
            subgraph: here,
            rule: Rule::JoinRecursion,
            certificate: Some(translate_cert(
                SeparatorCertificate::JoinSplit {
                    factors: factors.clone(),
                },
                map,
            )),
        });
        // Finite (clique) join factors do not affect the boundary class;
        // recurse into the infinite ones.
        let mut verdict = Verdict::LocallyConnected;
        for f in factors {
            if graph.is_clique(f)? {
                continue;
            }
            let (sub, sub_map) = graph.induced_with_map(f)?;
            let composed: Vec<u8> = sub_map.iter().map(|&i| map[i as usize]).collect();
            match classify_rec(&sub, &composed, trace)? {
                Verdict::NotLocallyConnected => return Ok(Verdict::NotLocallyConnected),
                Verdict::Undetermined(reason) => {
                    if matches!(verdict, Verdict::LocallyConnected) {
                        verdict = Verdict::Undetermined(reason);
                    }
                }
                Verdict::LocallyConnected => {}
            }
        }
        return Ok(verdict);
    }

    // Join-irreducible, one-ended, no non-suspended VFS (a suspended one is
    // impossible here: it would make the graph a join).
    if find_product_separator(graph)?.is_none() && vfs.is_none() {
        trace.push(TraceStep {
            subgraph: here,
            rule: Rule::MainTheorem,
            certificate: None,
        });
        Ok(Verdict::LocallyConnected)
    } else {
        trace.push(TraceStep {
            subgraph: here,
            rule: Rule::Gap,
            certificate: None,
        });
        Ok(Verdict::Undetermined(
            "product separator without usable VFS — outside the decidable cases".to_string(),
        ))
    }
}

pub fn trace_to_json(graph: &PresentationGraph, trace: &[TraceStep]) -> serde_json::Value {
    let steps: Vec<serde_json::Value> = trace
        .iter()
        .map(|step| {
            serde_json::json!({
                "subgraph": step
                    .subgraph
                    .iter()
                    .map(|i| graph.name(i).to_string())
                    .collect::<Vec<_>>(),
                "rule": step.rule.to_string(),
                "certificate": step
                    .certificate
                    .as_ref()
                    .map(|c| c.to_json(graph))
                    .unwrap_or(serde_json::Value::Null),
            })
        })
        .collect();
    serde_json::Value::Array(steps)
}

pub fn classification_json(
    graph: &PresentationGraph,
    verdict: &Verdict,
    trace: &[TraceStep],
) -> serde_json::Value {
    let mut obj = serde_json::json!({
        "verdict": verdict.label(),
        "trace": trace_to_json(graph, trace),
    });
    if let Verdict::Undetermined(reason) = verdict {
        obj["reason"] = serde_json::Value::String(reason.clone());
    }
    obj
}

/// Summary of a randomized classification survey.
#[derive(Debug, Clone)]
pub struct SurveySummary {
    pub total: usize,
    pub locally_connected: usize,
    pub not_locally_connected: usize,
    pub undetermined: Vec<(String, String)>,
}

impl SurveySummary {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "total": self.total,
            "histogram": {
                "LocallyConnected": self.locally_connected,
                "NotLocallyConnected": self.not_locally_connected,
                "Undetermined": self.undetermined.len(),
            },
            "undetermined": self
                .undetermined
                .iter()
                .map(|(g, r)| serde_json::json!({"graph": g, "reason": r}))
                .collect::<Vec<_>>(),
        })
    }
}

/// Generates a seeded random graph on 1..=size_limit vertices with edge
/// probability 1/2. Names are a, b, c, … in declaration order.
pub fn random_graph(rng: &mut SplitMix64, size_limit: usize) -> PresentationGraph {
    let n = 1 + rng.below(size_limit as u64) as usize;
    let names: Vec<String> = (0..n)
        .map(|i| {
            if n <= 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("g{i}")
            }
        })
        .collect();
    let mut edges = Vec::new();
    for u in 0..n as u8 {
        for v in u + 1..n as u8 {
            if rng.chance(1, 2) {
                edges.push((u, v));
            }
        }
    }
    PresentationGraph::new(names, &edges).expect("random graph construction is well formed")
}

/// Classifies `sample_count` seeded random graphs, re-validating every
/// emitted certificate against its trace subgraph.
pub fn classify_survey(size_limit: usize, sample_count: usize, seed: u64) -> Result<SurveySummary> {
    let mut rng = SplitMix64::new(seed);
    let mut summary = SurveySummary {
        total: 0,
        locally_connected: 0,
        not_locally_connected: 0,
        undetermined: Vec::new(),
    };
    for _ in 0..sample_count {
        let graph = random_graph(&mut rng, size_limit);
        let (verdict, trace) = classify(&graph)?;
        for step in &trace {
            if let Some(cert) = &step.certificate {
                cert.validate(&graph, step.subgraph)?;
            }
        }
        summary.total += 1;
        match &verdict {
            Verdict::LocallyConnected => summary.locally_connected += 1,
            Verdict::NotLocallyConnected => summary.not_locally_connected += 1,
            Verdict::Undetermined(reason) => {
                summary
                    .undetermined
                    .push((graph.to_string().replace('\n', "; "), reason.clone()));
            }
        }
    }
    Ok(summary)
}
