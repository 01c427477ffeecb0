//! Command-line surface. Exit codes: 0 success, 1 usage or input error,
//! 2 parse error, 3 internal invariant violation.

use crate::align;
use crate::classify;
use crate::error::{Error, Result};
use crate::filter::{self, DotOptions};
use crate::fixtures::{fixture, FIXTURE_NAMES};
use crate::graph::PresentationGraph;
use crate::oracle;
use crate::parse::parse_graph;
use crate::separators;
use crate::word::{self, parse_word, word_to_string};
use clap::{Args, Parser, Subcommand};
use std::io::Write;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "racg",
    about = "Workbench for right-angled Coxeter systems",
    disable_version_flag = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphSource {
    /// Path to a graph file (`vertices ...` then `edge u v` lines)
    graph: Option<PathBuf>,
    /// Use a built-in graph instead of a file
    #[arg(long, value_name = "NAME")]
    fixture: Option<String>,
}

impl GraphSource {
    /// Resolves a word that may have landed in the graph positional slot
    /// (as in `racg reduce --fixture C5 "a b a"`).
    fn claim_word(&mut self, word: Option<String>) -> Result<String> {
        if let Some(w) = word {
            return Ok(w);
        }
        if self.fixture.is_some() {
            if let Some(path) = self.graph.take() {
                return Ok(path.to_string_lossy().into_owned());
            }
        }
        Err(Error::input("missing word argument"))
    }

    fn load(&self) -> Result<PresentationGraph> {
        match (&self.graph, &self.fixture) {
            (Some(path), None) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
                parse_graph(&text)
            }
            (None, Some(name)) => fixture(name).ok_or_else(|| {
                Error::input(format!(
                    "unknown fixture {name:?}; available: {}",
                    FIXTURE_NAMES.join(", ")
                ))
            }),
            _ => Err(Error::input(
                "provide exactly one of a graph file or --fixture NAME",
            )),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide boundary local connectivity and print the rule trace
    Classify {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long)]
        json: bool,
    },
    /// Search for product separators and virtual factor separators
    Separators {
        #[command(flatten)]
        source: GraphSource,
        /// Only run the product-separator search
        #[arg(long)]
        product: bool,
        /// Only run the VFS search
        #[arg(long)]
        vfs: bool,
        /// Also report whether the VFS separating set is suspended
        #[arg(long)]
        suspended: bool,
        #[arg(long)]
        json: bool,
    },
    /// Reduce a word to a geodesic representative
    Reduce {
        #[command(flatten)]
        source: GraphSource,
        word: Option<String>,
    },
    /// Test whether a word is geodesic
    Geodesic {
        #[command(flatten)]
        source: GraphSource,
        word: Option<String>,
    },
    /// Canonical normal form of a word
    Nf {
        #[command(flatten)]
        source: GraphSource,
        word: Option<String>,
    },
    /// Project an element to the nearest point of a standard coset
    Project {
        #[command(flatten)]
        source: GraphSource,
        word: Option<String>,
        /// Generators of the subgroup, e.g. --letters "a b"
        #[arg(long, value_name = "WORD")]
        letters: String,
    },
    /// Align a geodesic with a nearby target element
    Align {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long, value_name = "WORD")]
        alpha: String,
        #[arg(long, value_name = "WORD")]
        target: String,
    },
    /// Build the filter between two geodesic rays
    Filter {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long, value_name = "WORD")]
        alpha: String,
        #[arg(long, value_name = "WORD")]
        beta: String,
        #[arg(long)]
        depth: usize,
        /// Write a DOT rendering to this file
        #[arg(long, value_name = "FILE")]
        dot: Option<PathBuf>,
        /// Label DOT vertices with their Cayley elements
        #[arg(long)]
        elements: bool,
        /// Verify the combinatorial facts, the Cayley map and the factor bound
        #[arg(long)]
        check: bool,
    },
    /// Brute-force Cayley ball enumeration
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
    /// Classify seeded random graphs and tally the verdicts
    Survey {
        #[arg(long, default_value_t = 8)]
        size_limit: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Seed for the graph sampler (required: surveys must be reproducible)
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Print sphere sizes as CSV
    Ball {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long)]
        radius: usize,
    },
}

fn element_cap() -> Result<usize> {
    match std::env::var("RACG_ELEMENT_CAP") {
        Ok(v) => v
            .parse::<usize>()
            .map_err(|_| Error::input(format!("RACG_ELEMENT_CAP is not a count: {v:?}"))),
        Err(_) => Ok(oracle::DEFAULT_ELEMENT_CAP),
    }
}

fn display_word(graph: &PresentationGraph, w: &[u8]) -> String {
    if w.is_empty() {
        "(identity)".to_string()
    } else {
        word_to_string(graph, w)
    }
}

pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut argv = vec!["racg".to_string()];
    argv.extend_from_slice(args);
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            return if e.use_stderr() {
                let _ = write!(err, "{e}");
                1
            } else {
                let _ = write!(out, "{e}");
                0
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    let mut print = |s: String| -> Result<()> {
        writeln!(out, "{s}").map_err(|e| Error::input(format!("write failed: {e}")))
    };
    match command {
        Command::Classify { source, json } => {
            let graph = source.load()?;
            let (verdict, trace) = classify::classify(&graph)?;
            if json {
                print(classify::classification_json(&graph, &verdict, &trace).to_string())?;
            } else {
                print(format!("{verdict}"))?;
                for step in &trace {
                    let cert = step
                        .certificate
                        .as_ref()
                        .map(|c| format!("  [{}]", c.display(&graph)))
                        .unwrap_or_default();
                    print(format!(
                        "  {} @ {}{}",
                        step.rule,
                        graph.set_to_string(step.subgraph),
                        cert
                    ))?;
                }
            }
            Ok(0)
        }
        Command::Separators {
            source,
            product,
            vfs,
            suspended,
            json,
        } => {
            let graph = source.load()?;
            let all = !product && !vfs && !suspended;
            let mut obj = serde_json::Map::new();
            let mut lines = Vec::new();
            if all || product {
                let cert = separators::find_product_separator(&graph)?;
                lines.push(format!(
                    "product: {}",
                    cert.as_ref()
                        .map(|c| c.display(&graph))
                        .unwrap_or_else(|| "none".into())
                ));
                obj.insert(
                    "product".into(),
                    cert.map(|c| c.to_json(&graph)).unwrap_or(serde_json::Value::Null),
                );
            }
            if all || vfs || suspended {
                let cert = separators::find_vfs(&graph)?;
                if all || vfs {
                    lines.push(format!(
                        "vfs: {}",
                        cert.as_ref()
                            .map(|c| c.display(&graph))
                            .unwrap_or_else(|| "none".into())
                    ));
                }
                if all || suspended {
                    let flag = match &cert {
                        Some(separators::SeparatorCertificate::Vfs { suspended, .. }) => {
                            suspended.to_string()
                        }
                        _ => "none".into(),
                    };
                    lines.push(format!("suspended: {flag}"));
                    obj.insert("suspended".into(), serde_json::Value::String(flag));
                }
                obj.insert(
                    "vfs".into(),
                    cert.map(|c| c.to_json(&graph)).unwrap_or(serde_json::Value::Null),
                );
            }
            if json {
                print(serde_json::Value::Object(obj).to_string())?;
            } else {
                for line in lines {
                    print(line)?;
                }
            }
            Ok(0)
        }
        Command::Reduce { mut source, word } => {
            let word = source.claim_word(word)?;
            let graph = source.load()?;
            let w = parse_word(&graph, &word)?;
            let reduced = word::reduce(&graph, &w)?;
            print(display_word(&graph, &reduced))?;
            Ok(0)
        }
        Command::Geodesic { mut source, word } => {
            let word = source.claim_word(word)?;
            let graph = source.load()?;
            let w = parse_word(&graph, &word)?;
            print(word::is_geodesic(&graph, &w)?.to_string())?;
            Ok(0)
        }
        Command::Nf { mut source, word } => {
            let word = source.claim_word(word)?;
            let graph = source.load()?;
            let w = parse_word(&graph, &word)?;
            let nf = word::normal_form(&graph, &w)?;
            print(display_word(&graph, nf.as_slice()))?;
            Ok(0)
        }
        Command::Project {
            mut source,
            word,
            letters,
        } => {
            let word = source.claim_word(word)?;
            let graph = source.load()?;
            let v = word::normal_form(&graph, &parse_word(&graph, &word)?)?;
            let t = parse_word(&graph, &letters)?.into_iter().collect();
            let w = word::project_to_coset(&graph, &v, t)?;
            print(display_word(&graph, w.as_slice()))?;
            Ok(0)
        }
        Command::Align {
            source,
            alpha,
            target,
        } => {
            let graph = source.load()?;
            let alpha = parse_word(&graph, &alpha)?;
            let target = word::normal_form(&graph, &parse_word(&graph, &target)?)?;
            let result = align::align(&graph, &alpha, &target)?;
            print(format!(
                "alphaPrime: {}",
                display_word(&graph, &result.alpha_prime)
            ))?;
            print(format!(
                "betaPrime: {}",
                display_word(&graph, &result.beta_prime)
            ))?;
            print(format!("commonPrefixLength: {}", result.common_prefix_length))?;
            Ok(0)
        }
        Command::Filter {
            source,
            alpha,
            beta,
            depth,
            dot,
            elements,
            check,
        } => {
            let graph = source.load()?;
            let alpha = parse_word(&graph, &alpha)?;
            let beta = parse_word(&graph, &beta)?;
            let built = filter::build_filter(&graph, &alpha, &beta, depth)?;
            print(format!(
                "filter: {} levels, {} vertices, {} edges (divergence at level {})",
                built.levels.len(),
                built.vertices.len(),
                built.edges.len(),
                built.divergence_level
            ))?;
            if let Some(path) = dot {
                let text = filter::export_dot(
                    &built,
                    &DotOptions {
                        element_labels: elements,
                    },
                );
                std::fs::write(&path, text)
                    .map_err(|e| Error::input(format!("cannot write {}: {e}", path.display())))?;
                print(format!("wrote {}", path.display()))?;
            }
            if check {
                let hypotheses_hold = separators::ends(&graph)? == separators::EndsClass::One
                    && graph.is_join_irreducible()
                    && separators::find_product_separator(&graph)?.is_none()
                    && separators::find_vfs(&graph)?.is_none();
                if !hypotheses_hold {
                    print(
                        "warning: the graph violates the standing hypotheses \
                         (one-ended, join-irreducible, separator-free); \
                         fact checks may legitimately fail"
                            .to_string(),
                    )?;
                }
                let report = filter::verify_facts(&built);
                for fact in 1..=7u8 {
                    print(format!(
                        "fact {}: {}",
                        fact,
                        if report.fact_passes(fact) { "pass" } else { "FAIL" }
                    ))?;
                }
                for v in &report.violations {
                    print(format!("  fact {} violation: {}", v.fact, v.detail))?;
                }
                let cayley = filter::map_to_cayley(&built);
                match &cayley {
                    Ok(_) => print("cayley map: level equals length".to_string())?,
                    Err(e) => print(format!("cayley map: FAIL ({e})"))?,
                }
                let tree = filter::extract_tree(&built);
                let bound = match &tree {
                    Ok(tree) => {
                        let (max_len, pass) = filter::check_factor_bound(&built, tree);
                        print(format!(
                            "factor bound: longest factor path {} (limit {}) {}",
                            max_len,
                            3 * graph.vertex_count(),
                            if pass { "pass" } else { "FAIL" }
                        ))?;
                        pass
                    }
                    Err(e) => {
                        print(format!("tree extraction: FAIL ({e})"))?;
                        false
                    }
                };
                if !(report.pass() && cayley.is_ok() && tree.is_ok() && bound) {
                    return Ok(3);
                }
            }
            Ok(0)
        }
        Command::Oracle { command } => match command {
            OracleCommand::Ball { source, radius } => {
                let graph = source.load()?;
                let ball = oracle::ball_with_cap(&graph, radius, element_cap()?)?;
                print("radius,count".to_string())?;
                for (r, count) in ball.sphere_sizes() {
                    print(format!("{r},{count}"))?;
                }
                Ok(0)
            }
        },
        Command::Survey {
            size_limit,
            samples,
            seed,
            json,
        } => {
            let summary = classify::classify_survey(size_limit, samples, seed)?;
            if json {
                print(summary.to_json().to_string())?;
            } else {
                print(format!(
                    "classified {} graphs: {} locally connected, {} not, {} undetermined",
                    summary.total,
                    summary.locally_connected,
                    summary.not_locally_connected,
                    summary.undetermined.len()
                ))?;
                for (graph, reason) in &summary.undetermined {
                    print(format!("  undetermined: {graph} ({reason})"))?;
                }
            }
            Ok(0)
        }
    }
}
