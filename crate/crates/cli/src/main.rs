//! Command-line front end. Every subcommand reads the interchange formats
//! (edge-list graphs, rotation-line embeddings, JSON trees/certificates),
//! prints a deterministic result, and exits 0 for an affirmative answer,
//! 1 for a negative verdict, 2 for usage or input errors, and 3 when a
//! search refused to run past its budget.

use std::collections::BTreeMap;
use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use strukt_core::generators;
use strukt_core::graph::Ordering;
use strukt_core::{
    admissibility_exact, admissibility_greedy, check_document, compose, converse_ordering,
    find_immersion, find_topological_minor, mf, min_genus, nicify, ordering_admissibility,
    parse_certificate, parse_graph, parse_tree, serialize_graph, AdmError, AdmissibilityReport,
    Budget, Depth, EmbedError, Graph, ImmersionModel, PatternError, Surface, TopMinorModel,
};

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "strukt",
    version,
    about = "Structural graph toolkit: embeddings, admissibility, clique-sums, certificates",
    after_help = "Exit status: 0 affirmative, 1 negative verdict, 2 usage or input error, 3 budget exceeded.\n\
                  Graph arguments take a file path or '-' for standard input.\n\
                  STRUKT_BUDGET sets the default search budget; --budget overrides it."
)]
struct Cli {
    /// Raise every search budget to at least this value
    #[arg(long, global = true)]
    budget: Option<u64>,

    /// Emit machine-readable JSON instead of text
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for parallel search (0 = one per core)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print a generated graph (clique, cycle, path, grid, doublewheel, mgraph, wall, admissibilitywall)
    Gen {
        family: String,
        params: Vec<u32>,
    },
    /// Admissibility of a graph at a given depth
    Adm {
        graph: String,
        /// Path-length bound: a positive integer or 'inf'
        #[arg(long)]
        depth: String,
        /// Exact value by subset dynamic programming (the default)
        #[arg(long)]
        exact: bool,
        /// Greedy upper bound instead of the exact value
        #[arg(long, conflicts_with = "exact")]
        greedy: bool,
        /// Evaluate this comma-separated ordering instead of searching
        #[arg(long, conflicts_with_all = ["exact", "greedy"])]
        eval: Option<String>,
    },
    /// Minimum face cover value mf(H, Σ); prints 'inf' and exits 1 if H does not embed
    Mf {
        graph: String,
        #[arg(long)]
        surface: String,
    },
    /// Minimum euler genus over all cellular embeddings
    Genus {
        graph: String,
        /// Search non-orientable embeddings (crosscap number) instead
        #[arg(long)]
        nonorientable: bool,
    },
    /// Re-embed H triangle-free and closed 2-cell without changing mf
    Nicify {
        graph: String,
        #[arg(long)]
        surface: String,
    },
    /// Does the host contain a subdivision of the pattern?
    Topminor {
        pattern: String,
        host: String,
    },
    /// Does the pattern immerse into the host?
    Immerse {
        pattern: String,
        host: String,
        /// Require path interiors to avoid branch vertices
        #[arg(long)]
        strong: bool,
    },
    /// Compose a clique-sum tree document into its graph
    Compose {
        tree: String,
    },
    /// Ordering with ∞-admissibility ≤ D + a for a degree-profiled tree
    Order {
        tree: String,
        #[arg(long = "D")]
        degree: u32,
        #[arg(long = "a")]
        apexes: u32,
    },
    /// Check a certificate document; exits 1 with reasons when it fails
    Check {
        certificate: String,
    },
}

/// Anything that stops a subcommand, mapped onto the exit contract.
enum Failure {
    Usage(String),
    Negative,
    Budget(String),
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Failure {
        Failure::Usage(msg.into())
    }
}

impl From<EmbedError> for Failure {
    fn from(e: EmbedError) -> Failure {
        match e {
            EmbedError::Domain(m) => Failure::Usage(m),
            EmbedError::Budget(b) => Failure::Budget(b.to_string()),
        }
    }
}

impl From<AdmError> for Failure {
    fn from(e: AdmError) -> Failure {
        match e {
            AdmError::Domain(m) => Failure::Usage(m),
            AdmError::Budget(b) => Failure::Budget(b.to_string()),
        }
    }
}

impl From<PatternError> for Failure {
    fn from(e: PatternError) -> Failure {
        match e {
            PatternError::Domain(m) => Failure::Usage(m),
            PatternError::Budget(b) => Failure::Budget(b.to_string()),
        }
    }
}

/// Print a result line, shrugging off a downstream reader that closed the
/// pipe early (head, grep -m). The verdict exit code still stands.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
    let _ = out.flush();
}

fn read_input(arg: &str) -> Result<String, Failure> {
    if arg == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Failure::usage(format!("reading standard input: {e}")))?;
        Ok(buf)
    } else {
        fs::read_to_string(arg).map_err(|e| Failure::usage(format!("reading {arg}: {e}")))
    }
}

fn read_graph(arg: &str) -> Result<Graph, Failure> {
    let text = read_input(arg)?;
    parse_graph(&text).map_err(|e| Failure::usage(format!("parsing {arg}: {e}")))
}

fn parse_surface(name: &str) -> Result<Surface, Failure> {
    Surface::parse(name).map_err(Failure::Usage)
}

fn parse_depth(text: &str) -> Result<Depth, Failure> {
    text.parse().map_err(Failure::Usage)
}

fn effective_budget(flag: Option<u64>) -> Result<Budget, Failure> {
    if let Some(n) = flag {
        return Ok(Budget::raised(n));
    }
    match std::env::var("STRUKT_BUDGET") {
        Ok(v) => {
            let n: u64 = v
                .parse()
                .map_err(|_| Failure::usage(format!("STRUKT_BUDGET must be a number, got '{v}'")))?;
            Ok(Budget::raised(n))
        }
        Err(_) => Ok(Budget::default()),
    }
}

fn ordering_csv(o: &Ordering) -> String {
    o.sequence.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

fn adm_output(report: &AdmissibilityReport, json: bool) -> String {
    if json {
        let per_vertex: BTreeMap<String, u32> =
            report.per_vertex.iter().map(|(v, b)| (v.to_string(), *b)).collect();
        let doc = json!({
            "value": report.value,
            "ordering": report.ordering.sequence,
            "per_vertex": per_vertex,
        });
        serde_json::to_string_pretty(&doc).unwrap()
    } else {
        format!("value {}\nordering {}", report.value, ordering_csv(&report.ordering))
    }
}

fn model_lines(branch: &BTreeMap<u32, u32>, paths: &BTreeMap<(u32, u32), Vec<u32>>) -> String {
    let mut out = String::from("present");
    for (h, g) in branch {
        out.push_str(&format!("\nbranch {h} {g}"));
    }
    for ((u, v), path) in paths {
        let steps: Vec<String> = path.iter().map(|x| x.to_string()).collect();
        out.push_str(&format!("\npath {u} {v} {}", steps.join(",")));
    }
    out
}

fn model_json(branch: &BTreeMap<u32, u32>, paths: &BTreeMap<(u32, u32), Vec<u32>>) -> serde_json::Value {
    let branch: BTreeMap<String, u32> = branch.iter().map(|(h, g)| (h.to_string(), *g)).collect();
    let paths: Vec<serde_json::Value> =
        paths.iter().map(|(&(u, v), p)| json!({"edge": [u, v], "path": p})).collect();
    json!({"present": true, "branch": branch, "paths": paths})
}

fn run(cli: Cli) -> Result<String, Failure> {
    let budget = effective_budget(cli.budget)?;
    let json = cli.json;
    match cli.cmd {
        Cmd::Gen { family, params } => {
            let g = match (family.as_str(), params.as_slice()) {
                ("clique", [n]) => generators::clique(*n),
                ("cycle", [n]) => generators::cycle(*n),
                ("path", [n]) => generators::path(*n),
                ("grid", [r, c]) => generators::grid(*r, *c),
                ("doublewheel", [n]) => generators::double_wheel(*n),
                ("mgraph", [t]) => generators::m_graph(*t),
                ("wall", [r, c]) => generators::wall(*r, *c),
                ("admissibilitywall", [t]) => generators::admissibility_wall(*t),
                (f @ ("clique" | "cycle" | "path" | "doublewheel" | "mgraph" | "admissibilitywall"), p) => {
                    return Err(Failure::usage(format!("{f} takes 1 parameter, got {}", p.len())))
                }
                (f @ ("grid" | "wall"), p) => {
                    return Err(Failure::usage(format!("{f} takes 2 parameters, got {}", p.len())))
                }
                (f, _) => return Err(Failure::usage(format!(
                    "unknown family '{f}' (clique, cycle, path, grid, doublewheel, mgraph, wall, admissibilitywall)"
                ))),
            }
            .map_err(Failure::Usage)?;
            let text = serialize_graph(&g);
            Ok(if json {
                serde_json::to_string_pretty(&json!({"graph": text})).unwrap()
            } else {
                text.trim_end().to_string()
            })
        }
        Cmd::Adm { graph, depth, exact: _, greedy, eval } => {
            let g = read_graph(&graph)?;
            let d = parse_depth(&depth)?;
            let report = if let Some(seq) = eval {
                let order = Ordering::new(
                    seq.split(',')
                        .map(|t| {
                            t.trim().parse::<u32>().map_err(|_| {
                                Failure::usage(format!("bad vertex id '{t}' in --eval"))
                            })
                        })
                        .collect::<Result<Vec<u32>, Failure>>()?,
                );
                ordering_admissibility(&g, &order, d, &budget)?
            } else if greedy {
                admissibility_greedy(&g, d, &budget)?
            } else {
                admissibility_exact(&g, d, &budget)?
            };
            Ok(adm_output(&report, json))
        }
        Cmd::Mf { graph, surface } => {
            let g = read_graph(&graph)?;
            let s = parse_surface(&surface)?;
            match mf(&g, &s.cap(), &budget)? {
                Some(v) => Ok(if json {
                    serde_json::to_string_pretty(&json!({"mf": v})).unwrap()
                } else {
                    format!("mf {v}")
                }),
                None => {
                    let text = if json {
                        serde_json::to_string_pretty(&json!({"mf": null})).unwrap()
                    } else {
                        "mf inf".to_string()
                    };
                    emit(&text);
                    Err(Failure::Negative)
                }
            }
        }
        Cmd::Genus { graph, nonorientable } => {
            let g = read_graph(&graph)?;
            let found = min_genus(&g, !nonorientable, &budget)?;
            match found {
                Some(v) => Ok(if json {
                    serde_json::to_string_pretty(
                        &json!({"genus": v, "orientable": !nonorientable}),
                    )
                    .unwrap()
                } else {
                    format!("genus {v}")
                }),
                None => Err(Failure::usage(
                    "graph has no cellular embedding of the requested kind".to_string(),
                )),
            }
        }
        Cmd::Nicify { graph, surface } => {
            let g = read_graph(&graph)?;
            let s = parse_surface(&surface)?;
            match nicify(&g, &s.cap(), &budget) {
                Ok(nice) => {
                    let emb = strukt_core::serialize_embedding(&nice.embedding);
                    Ok(if json {
                        let faces: Vec<Vec<u32>> =
                            nice.dominating.iter().map(|f| f.corners()).collect();
                        serde_json::to_string_pretty(&json!({
                            "mf": nice.mf_value,
                            "dominating": faces,
                            "embedding": emb,
                        }))
                        .unwrap()
                    } else {
                        let mut out = format!("# mf {}\n", nice.mf_value);
                        for f in &nice.dominating {
                            let cs: Vec<String> =
                                f.corners().iter().map(|c| c.to_string()).collect();
                            out.push_str(&format!("# dominating {}\n", cs.join(",")));
                        }
                        out.push_str(emb.trim_end());
                        out
                    })
                }
                Err(EmbedError::Domain(m)) if m.contains("does not embed") => {
                    emit(&if json { "{\n  \"embeds\": false\n}".to_string() } else { m });
                    Err(Failure::Negative)
                }
                Err(e) => Err(e.into()),
            }
        }
        Cmd::Topminor { pattern, host } => {
            let h = read_graph(&pattern)?;
            let g = read_graph(&host)?;
            match find_topological_minor(&h, &g, &budget)? {
                Some(TopMinorModel { branch, paths }) => Ok(if json {
                    serde_json::to_string_pretty(&model_json(&branch, &paths)).unwrap()
                } else {
                    model_lines(&branch, &paths)
                }),
                None => {
                    emit(if json { "{\n  \"present\": false\n}" } else { "absent" });
                    Err(Failure::Negative)
                }
            }
        }
        Cmd::Immerse { pattern, host, strong } => {
            let h = read_graph(&pattern)?;
            let g = read_graph(&host)?;
            match find_immersion(&h, &g, strong, &budget)? {
                Some(ImmersionModel { branch, paths, .. }) => Ok(if json {
                    serde_json::to_string_pretty(&model_json(&branch, &paths)).unwrap()
                } else {
                    model_lines(&branch, &paths)
                }),
                None => {
                    emit(if json { "{\n  \"present\": false\n}" } else { "absent" });
                    Err(Failure::Negative)
                }
            }
        }
        Cmd::Compose { tree } => {
            let text = read_input(&tree)?;
            let t = parse_tree(&text).map_err(|e| Failure::usage(e.to_string()))?;
            let g = compose(&t).map_err(|e| Failure::usage(e.to_string()))?;
            let out = serialize_graph(&g);
            Ok(if json {
                serde_json::to_string_pretty(&json!({"graph": out})).unwrap()
            } else {
                out.trim_end().to_string()
            })
        }
        Cmd::Order { tree, degree, apexes } => {
            let text = read_input(&tree)?;
            let t = parse_tree(&text).map_err(|e| Failure::usage(e.to_string()))?;
            let order = converse_ordering(&t, degree, apexes)
                .map_err(|e| Failure::usage(e.to_string()))?;
            Ok(if json {
                serde_json::to_string_pretty(&json!({"ordering": order.sequence})).unwrap()
            } else {
                format!("ordering {}", ordering_csv(&order))
            })
        }
        Cmd::Check { certificate } => {
            let text = read_input(&certificate)?;
            let doc = parse_certificate(&text).map_err(|e| Failure::usage(e.to_string()))?;
            let verdict = check_document(&doc, &budget)?;
            let out = if json {
                serde_json::to_string_pretty(&verdict).unwrap()
            } else {
                let mut lines = vec![if verdict.ok { "ok".to_string() } else { "rejected".to_string() }];
                lines.extend(verdict.reasons.iter().map(|r| format!("reason {r}")));
                lines.extend(verdict.notes.iter().map(|n| format!("note {n}")));
                lines.join("\n")
            };
            if verdict.ok {
                Ok(out)
            } else {
                emit(&out);
                Err(Failure::Negative)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads;
    // A zero thread count keeps rayon's default (one worker per core).
    if threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    match run(cli) {
        Ok(out) => {
            emit(&out);
            ExitCode::from(EXIT_OK)
        }
        Err(Failure::Negative) => ExitCode::from(EXIT_NEGATIVE),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Budget(msg)) => {
            // BudgetExceeded's Display already carries the "budget exceeded" prefix.
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_BUDGET)
        }
    }
}
