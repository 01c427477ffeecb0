//! Built-in graphs used throughout the test suites and available on the CLI
//! via `--fixture NAME`.

use crate::graph::PresentationGraph;

pub const FIXTURE_NAMES: [&str; 8] = ["C4", "C5", "C6", "K3", "P3", "BOWTIE", "SUS4", "G7"];

fn build(names: &[&str], edges: &[(&str, &str)]) -> PresentationGraph {
    let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    let idx = |n: &str| names.iter().position(|m| m == n).unwrap() as u8;
    let edges: Vec<(u8, u8)> = edges.iter().map(|&(u, v)| (idx(u), idx(v))).collect();
    PresentationGraph::new(names, &edges).expect("fixture must be well formed")
}

/// Looks up a fixture by (case-sensitive) name.
pub fn fixture(name: &str) -> Option<PresentationGraph> {
    let g = match name {
        // cycles
        "C4" => build(&["a", "b", "c", "d"], &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]),
        "C5" => build(
            &["a", "b", "c", "d", "e"],
            &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "a")],
        ),
        "C6" => build(
            &["a", "b", "c", "d", "e", "f"],
            &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "f"), ("f", "a")],
        ),
        // complete triangle and a path
        "K3" => build(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")]),
        "P3" => build(&["a", "b", "c"], &[("a", "b"), ("b", "c")]),
        // two triangles sharing the cut vertex z
        "BOWTIE" => build(
            &["a", "b", "c", "d", "z"],
            &[("a", "b"), ("a", "z"), ("b", "z"), ("c", "d"), ("c", "z"), ("d", "z")],
        ),
        // a 4-cycle suspended by the non-adjacent cone points s, t
        "SUS4" => build(
            &["a", "b", "c", "d", "s", "t"],
            &[
                ("a", "b"),
                ("b", "c"),
                ("c", "d"),
                ("d", "a"),
                ("s", "a"),
                ("s", "b"),
                ("s", "c"),
                ("s", "d"),
                ("t", "a"),
                ("t", "b"),
                ("t", "c"),
                ("t", "d"),
            ],
        ),
        // K(2,2) between {c1,c2} and {k1,k2}, plus x,y coned on the c side
        // and z coned on the k side
        "G7" => build(
            &["c1", "c2", "k1", "k2", "x", "y", "z"],
            &[
                ("c1", "k1"),
                ("c1", "k2"),
                ("c2", "k1"),
                ("c2", "k2"),
                ("x", "c1"),
                ("x", "c2"),
                ("y", "c1"),
                ("y", "c2"),
                ("z", "k1"),
                ("z", "k2"),
            ],
        ),
        _ => return None,
    };
    Some(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fixtures_load() {
        for name in FIXTURE_NAMES {
            let g = fixture(name).unwrap();
            assert!(g.vertex_count() >= 3);
        }
        assert!(fixture("NOPE").is_none());
    }

    #[test]
    fn documented_edge_lists() {
        let g7 = fixture("G7").unwrap();
        assert_eq!(g7.vertex_count(), 7);
        assert_eq!(g7.edges().len(), 10);
        let idx = |n: &str| g7.index_of(n).unwrap();
        for (u, v) in [("c1", "k1"), ("c1", "k2"), ("c2", "k1"), ("c2", "k2")] {
            assert!(g7.adjacent(idx(u), idx(v)));
        }
        assert!(!g7.adjacent(idx("c1"), idx("c2")));
        assert!(!g7.adjacent(idx("k1"), idx("k2")));
        assert!(!g7.adjacent(idx("x"), idx("z")));

        let sus4 = fixture("SUS4").unwrap();
        let idx = |n: &str| sus4.index_of(n).unwrap();
        assert!(!sus4.adjacent(idx("s"), idx("t")));
        assert_eq!(sus4.edges().len(), 12);
    }
}
