use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Parser, Subcommand};

use laakso::cert::{
    reference_weights_d2, reference_weights_l2, search_certificates, verify_certificate,
    weights_from_json, SearchOptions, SearchStrategy,
};
use laakso::cutcone::{embedding_to_json_value, extract_embedding, solve_min_distortion};
use laakso::embed::{
    l1_embed, support_embed, verify_l1_distortion, verify_support_distortion,
};
use laakso::error::{Error, Result};
use laakso::graph::{
    build_graph, export_graph, graph_from_json, parse_csv_metric, DistanceMatrix,
    ExportFormat, Family, LevelGraph,
};
use laakso::manifest::RunManifest;

/// Workbench for Laakso and diamond graphs: exact embeddings, distortion
/// verification, L1 lower-bound certificates, and the cut-cone LP.
#[derive(Parser)]
#[command(name = "laakso", version, disable_help_subcommand = true)]
struct Cli {
    /// Worker threads for the pair scans (1 keeps runs bit-reproducible
    /// by default; any count produces identical results here).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    /// Seed for randomized strategies.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Lift the level-3 cap of the L1 embedding to level 4.
    #[arg(long, global = true)]
    allow_large: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph and write it as json, dot, or csv-metric.
    Graph {
        #[arg(long)]
        family: String,
        #[arg(long)]
        level: u32,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build an embedding of a graph file and verify its distortion
    /// bounds; exits nonzero if any bound fails.
    Embed {
        /// Graph json produced by `graph --format json`.
        #[arg(long)]
        graph: PathBuf,
        /// `support` or `l1`.
        #[arg(long)]
        method: String,
        /// Embedding output path; the report lands next to it unless
        /// --report is given.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Verify a certificate or search for the strongest one.
    Certificate {
        /// csv-metric file.
        #[arg(long)]
        metric: PathBuf,
        #[command(subcommand)]
        mode: CertMode,
    },
    /// Exact minimum L1 distortion of a csv-metric via the cut-cone LP.
    Cutcone {
        #[arg(long)]
        metric: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the witness embedding extracted from the optimal
        /// cut measure.
        #[arg(long)]
        embedding_out: Option<PathBuf>,
    },
    /// Re-export a graph json file in another format.
    Export {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CertMode {
    /// Verify weights against the metric.
    Verify {
        /// Weights json ({"weights": {"<vertex id>": k, ...}}).
        #[arg(long, conflicts_with = "reference")]
        weights: Option<PathBuf>,
        /// Use a built-in weight system: `l2` (laakso level 2) or `d2`
        /// (diamond level 2). The metric must be the canonical metric of
        /// that graph.
        #[arg(long)]
        reference: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for the strongest certificate over a weight range.
    Search {
        /// `exhaustive` or `local`.
        #[arg(long, default_value = "exhaustive")]
        strategy: String,
        /// Symmetric weight range [-range, range].
        #[arg(long, default_value_t = 1)]
        range: i64,
        /// Evaluation budget for the local strategy.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        /// Weights json to seed the local strategy with.
        #[arg(long)]
        start_weights: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let result = run(&cli);
    eprintln!("wall_time_ms={}", started.elapsed().as_millis());
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn new_manifest(seed: Option<u64>) -> RunManifest {
    let command = std::env::args().collect::<Vec<_>>().join(" ");
    RunManifest::new(command).with_seed(seed)
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Graph { family, level, format, out } => {
            let family = Family::from_str(family)?;
            let format = ExportFormat::from_str(format)?;
            let g = build_graph(family, *level)?;
            let manifest = new_manifest(cli.seed);
            write_graph_output(&g, format, out.as_deref(), &manifest)
        }
        Command::Embed { graph, method, out, report } => {
            let (g, mut manifest) = load_graph(graph, cli.seed)?;
            let (embedding_json, report_json) = match method.as_str() {
                "support" => {
                    let emb = support_embed(&g)?;
                    let rep = verify_support_distortion(&g, &emb, cli.threads)?;
                    (emb.to_json_value(), rep.to_json_value())
                }
                "l1" => {
                    let emb = l1_embed(&g, cli.allow_large)?;
                    let rep = verify_l1_distortion(&g, &emb, cli.threads)?;
                    (emb.to_json_value(), rep.to_json_value())
                }
                other => {
                    return Err(Error::Validation(format!(
                        "unknown embedding method `{other}` (expected support or l1)"
                    )))
                }
            };
            manifest.record_input(graph.display().to_string(), &std::fs::read(graph)?);
            let report_path = report.clone().unwrap_or_else(|| derived_report_path(out));
            write_json(Some(out), embedding_json, &manifest)?;
            write_json(Some(&report_path), report_json, &manifest)
        }
        Command::Certificate { metric, mode } => {
            let (d, mut manifest) = load_metric(metric, cli.seed)?;
            manifest.record_input(metric.display().to_string(), &std::fs::read(metric)?);
            match mode {
                CertMode::Verify { weights, reference, out } => {
                    let w = match (weights, reference) {
                        (Some(path), None) => {
                            manifest
                                .record_input(path.display().to_string(), &std::fs::read(path)?);
                            weights_from_json(&std::fs::read_to_string(path)?, d.len())?
                        }
                        (None, Some(name)) => reference_weights(name, &d)?,
                        _ => {
                            return Err(Error::Validation(
                                "pass exactly one of --weights or --reference".into(),
                            ))
                        }
                    };
                    let cert = verify_certificate(&d, &w)?;
                    write_json(out.as_deref(), cert.to_json_value(), &manifest)
                }
                CertMode::Search { strategy, range, budget, start_weights, out } => {
                    let strategy = match strategy.as_str() {
                        "exhaustive" => SearchStrategy::Exhaustive,
                        "local" => SearchStrategy::Local,
                        other => {
                            return Err(Error::Validation(format!(
                                "unknown strategy `{other}` (expected exhaustive or local)"
                            )))
                        }
                    };
                    let start = match start_weights {
                        Some(path) => {
                            manifest
                                .record_input(path.display().to_string(), &std::fs::read(path)?);
                            Some(weights_from_json(&std::fs::read_to_string(path)?, d.len())?)
                        }
                        None => None,
                    };
                    let opts = SearchOptions {
                        strategy,
                        range: (-range, *range),
                        budget: *budget,
                        seed: cli.seed.unwrap_or(0),
                        start,
                    };
                    let result = search_certificates(&d, &opts)?;
                    write_json(out.as_deref(), result.to_json_value(), &manifest)
                }
            }
        }
        Command::Cutcone { metric, out, embedding_out } => {
            let (d, mut manifest) = load_metric(metric, cli.seed)?;
            manifest.record_input(metric.display().to_string(), &std::fs::read(metric)?);
            let (_, measure) = solve_min_distortion(&d)?;
            write_json(out.as_deref(), measure.to_json_value(), &manifest)?;
            if let Some(path) = embedding_out {
                let coords = extract_embedding(&d, &measure)?;
                write_json(Some(path), embedding_to_json_value(&coords), &manifest)?;
            }
            Ok(())
        }
        Command::Export { graph, format, out } => {
            let format = ExportFormat::from_str(format)?;
            let (g, mut manifest) = load_graph(graph, cli.seed)?;
            manifest.record_input(graph.display().to_string(), &std::fs::read(graph)?);
            write_graph_output(&g, format, out.as_deref(), &manifest)
        }
    }
}

fn reference_weights(name: &str, d: &DistanceMatrix) -> Result<laakso::cert::WeightAssignment> {
    let (g, label) = match name {
        "l2" => (build_graph(Family::Laakso, 2)?, "laakso level 2"),
        "d2" => (build_graph(Family::Diamond, 2)?, "diamond level 2"),
        other => {
            return Err(Error::Validation(format!(
                "unknown reference `{other}` (expected l2 or d2)"
            )))
        }
    };
    if *d != g.shortest_path_metric()? {
        return Err(Error::Validation(format!(
            "the metric file is not the canonical {label} metric"
        )));
    }
    match name {
        "l2" => reference_weights_l2(&g),
        _ => reference_weights_d2(&g),
    }
}

fn load_graph(path: &Path, seed: Option<u64>) -> Result<(LevelGraph, RunManifest)> {
    let text = std::fs::read_to_string(path)?;
    Ok((graph_from_json(&text)?, new_manifest(seed)))
}

fn load_metric(path: &Path, seed: Option<u64>) -> Result<(DistanceMatrix, RunManifest)> {
    let text = std::fs::read_to_string(path)?;
    Ok((parse_csv_metric(&text)?, new_manifest(seed)))
}

fn derived_report_path(out: &Path) -> PathBuf {
    match out.extension() {
        Some(ext) => out.with_extension(format!("report.{}", ext.to_string_lossy())),
        None => out.with_extension("report"),
    }
}

fn write_graph_output(
    g: &LevelGraph,
    format: ExportFormat,
    out: Option<&Path>,
    manifest: &RunManifest,
) -> Result<()> {
    match format {
        ExportFormat::Json => {
            let bytes = export_graph(g, format)?;
            let value: serde_json::Value =
                serde_json::from_slice(&bytes).expect("own export parses");
            write_json(out, value, manifest)
        }
        ExportFormat::Dot => {
            let mut bytes = export_graph(g, format)?;
            bytes.extend_from_slice(manifest.to_comment_line("//").as_bytes());
            write_bytes(out, &bytes)
        }
        ExportFormat::CsvMetric => {
            let mut bytes = export_graph(g, format)?;
            bytes.extend_from_slice(manifest.to_comment_line("#").as_bytes());
            write_bytes(out, &bytes)
        }
    }
}

fn write_json(
    out: Option<&Path>,
    mut value: serde_json::Value,
    manifest: &RunManifest,
) -> Result<()> {
    if let Some(obj) = value.as_object_mut() {
        obj.insert("manifest".into(), manifest.to_value());
    }
    let mut text = serde_json::to_string_pretty(&value).expect("json serializes");
    text.push('\n');
    write_bytes(out, text.as_bytes())
}

fn write_bytes(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, bytes)?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(bytes)?;
        }
    }
    Ok(())
}
