//! Command-line front end: every library operation behind stable JSON file
//! formats, with a fixed exit-code contract so scripts can branch on
//! outcomes.
//!
//! Exit codes: 0 success, 1 semantic negative (e.g. no separating pattern),
//! 2 parse error, 3 resource cap exceeded, 4 input contract violation.

use clap::{Parser, Subcommand, ValueEnum};
use ghm::error::{Caps, Error};
use ghm::format::{format_value, parse_dataset, GraphFile, GraphonFile, ModelFile, PatternFile};
use ghm::graph::{shift, LabeledGraph};
use ghm::graphon::{cut_distance, cut_norm, density, density_labeled, sample_graph};
use ghm::hom::{hom, hom_brute, hom_labeled, hom_labeled_brute, Engine};
use ghm::model::{
    fit, fit_equivariant, predict, predict_equivariant, relative_residual, separate,
    separate_labeled, training_sse, FitOptions, Normalization, Separation,
};
use ghm::pattern::{enumerate_labeled_patterns, enumerate_patterns};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "ghm",
    version,
    about = "Weighted graph homomorphism numbers, homomorphism-feature models, and step graphons",
    after_help = "The GHM_WORK_CAP environment variable overrides the default \
                  elementary-work cap (100000000) of the counting engines."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Dp,
    Brute,
}

#[derive(Subcommand)]
enum Command {
    /// Homomorphism number of a pattern into a weighted graph
    Hom {
        /// Pattern JSON file
        pattern: PathBuf,
        /// Graph JSON file
        graph: PathBuf,
        /// Add c to every diagonal entry before counting
        #[arg(long, default_value_t = 0.0)]
        shift: f64,
        /// Pin the pattern's labels to the graph's label tuple
        #[arg(long)]
        labeled: bool,
        #[arg(long, value_enum, default_value_t = EngineArg::Dp)]
        engine: EngineArg,
    },
    /// Enumerate the pattern atlas up to isomorphism
    Atlas {
        #[arg(long)]
        max_m: usize,
        /// Number of labeled vertices (0 = plain patterns)
        #[arg(long, default_value_t = 0)]
        k: usize,
        /// Keep only weakly connected patterns
        #[arg(long)]
        connected: bool,
        /// Write the pattern list here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit a homomorphism-feature model by least squares
    Fit {
        /// Dataset JSON file
        dataset: PathBuf,
        /// Largest pattern size in the feature basis
        #[arg(long)]
        max_m: usize,
        #[arg(long, default_value_t = 2.0)]
        shift: f64,
        #[arg(long, default_value_t = 0.0)]
        ridge: f64,
        /// Drop the intercept column (strict linear combination)
        #[arg(long)]
        no_intercept: bool,
        /// Divide each feature by n^m before fitting
        #[arg(long)]
        density: bool,
        /// Where to write the fitted model
        #[arg(long)]
        out: PathBuf,
        /// Where to write the residual-vs-budget CSV table
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Evaluate a fitted model on a graph
    Predict { model: PathBuf, graph: PathBuf },
    /// Search for a pattern separating two graphs
    Separate {
        graph1: PathBuf,
        graph2: PathBuf,
        #[arg(long)]
        max_m: usize,
        /// Compare as labeled graphs using their label tuples
        #[arg(long)]
        labeled: bool,
    },
    /// Step-graphon operations
    Graphon {
        #[command(subcommand)]
        command: GraphonCommand,
    },
}

#[derive(Subcommand)]
enum GraphonCommand {
    /// Homomorphism density t(F, W)
    Density {
        graphon: PathBuf,
        pattern: PathBuf,
        /// Block indices (1-based) pinning the pattern's labeled vertices
        #[arg(long, value_delimiter = ',')]
        blocks: Vec<usize>,
    },
    /// Cut-norm of a (possibly signed) step function
    Cutnorm { graphon: PathBuf },
    /// Permutation-overlay cut-distance of two step graphons
    Cutdist { graphon1: PathBuf, graphon2: PathBuf },
    /// Draw a W-random weighted graph
    Sample {
        graphon: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        /// Write the graph here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, Error::MixedVertexCount { .. }) {
                eprintln!(
                    "hint: fixed-size models need one vertex count per dataset; \
                     for families of graphs of different sizes see the step-graphon \
                     tools (`ghm graphon`)"
                );
            }
            std::process::exit(exit_code(&e));
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Invalid { .. } => 2,
        Error::CapExceeded { .. } => 3,
        Error::SizeMismatch { .. }
        | Error::ArityMismatch { .. }
        | Error::MixedVertexCount { .. }
        | Error::EmptyDataset => 4,
    }
}

fn caps_from_env() -> Result<Caps, Error> {
    let mut caps = Caps::default();
    if let Ok(raw) = std::env::var("GHM_WORK_CAP") {
        caps.work = raw
            .parse()
            .map_err(|_| Error::invalid("GHM_WORK_CAP", format!("not a number: {raw:?}")))?;
    }
    Ok(caps)
}

fn read_file(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::invalid("file", format!("{}: {e}", path.display())))
}

fn write_output(path: Option<&Path>, content: &str) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, content)
            .map_err(|e| Error::invalid("file", format!("{}: {e}", p.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, Error> {
    serde_json::to_string(value).map_err(|e| Error::invalid("json", e.to_string()))
}

fn to_json_pretty<T: serde::Serialize>(value: &T) -> Result<String, Error> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| Error::invalid("json", e.to_string()))?;
    text.push('\n');
    Ok(text)
}

fn run(cli: Cli) -> Result<i32, Error> {
    let caps = caps_from_env()?;
    match cli.command {
        Command::Hom {
            pattern,
            graph,
            shift: shift_c,
            labeled,
            engine,
        } => {
            let pattern = PatternFile::parse(&read_file(&pattern)?)?.to_labeled_pattern()?;
            let graph_file = GraphFile::parse(&read_file(&graph)?)?;
            let engine = match engine {
                EngineArg::Dp => Engine::Dp,
                EngineArg::Brute => Engine::Brute,
            };
            let value = if labeled {
                let lg = graph_file.to_labeled()?;
                let shifted = LabeledGraph::new(shift(lg.graph(), shift_c), lg.labels().to_vec())?;
                match engine {
                    Engine::Brute => hom_labeled_brute(&pattern, &shifted, &caps)?,
                    Engine::Dp => hom_labeled(&pattern, &shifted, &caps)?,
                }
            } else {
                if pattern.k() != 0 {
                    return Err(Error::invalid(
                        "k",
                        "pattern has labeled vertices; pass --labeled",
                    ));
                }
                let g = shift(&graph_file.to_weighted()?, shift_c);
                match engine {
                    Engine::Brute => hom_brute(pattern.pattern(), &g, &caps)?,
                    Engine::Dp => hom(pattern.pattern(), &g, &caps)?,
                }
            };
            println!("{}", format_value(value));
            Ok(0)
        }

        Command::Atlas {
            max_m,
            k,
            connected,
            out,
        } => {
            let files: Vec<PatternFile> = if k == 0 {
                enumerate_patterns(max_m, connected, &caps)?
                    .iter()
                    .map(|p| PatternFile::from_pattern(p, &caps))
                    .collect()
            } else {
                if connected {
                    return Err(Error::invalid(
                        "connected",
                        "--connected applies to the unlabeled atlas only",
                    ));
                }
                enumerate_labeled_patterns(max_m, k, &caps)?
                    .iter()
                    .map(|p| PatternFile::from_labeled_pattern(p, &caps))
                    .collect()
            };
            for m in 1..=max_m {
                let count = files.iter().filter(|f| f.m == m).count();
                eprintln!("m={m}: {count} classes");
            }
            eprintln!("total: {} classes", files.len());
            write_output(out.as_deref(), &to_json_pretty(&files)?)?;
            Ok(0)
        }

        Command::Fit {
            dataset,
            max_m,
            shift,
            ridge,
            no_intercept,
            density,
            out,
            report,
        } => {
            let data = parse_dataset(&read_file(&dataset)?)?;
            let opts = FitOptions {
                shift,
                ridge,
                intercept: !no_intercept,
                normalization: if density {
                    Normalization::Density
                } else {
                    Normalization::None
                },
            };
            let arity = data.arity();
            let min_budget = arity.max(1);
            if max_m < min_budget {
                return Err(Error::invalid(
                    "max_m",
                    format!("budget {max_m} below the minimum pattern size {min_budget}"),
                ));
            }

            let header = "budget_max_m,num_patterns,sse,relative_residual";
            let mut rows = Vec::new();
            let mut final_model = None;
            println!("{header}");
            for budget in min_budget..=max_m {
                let (model, count) = if arity == 0 {
                    let patterns = enumerate_patterns(budget, false, &caps)?;
                    let count = patterns.len();
                    (fit(&data, &patterns, &opts, &caps)?, count)
                } else {
                    let patterns = enumerate_labeled_patterns(budget, arity, &caps)?;
                    let count = patterns.len();
                    (fit_equivariant(&data, &patterns, &opts, &caps)?, count)
                };
                let sse = training_sse(&model, &data, &caps)?;
                let rel = relative_residual(&model, &data, &caps)?;
                let line = format!("{budget},{count},{},{}", format_value(sse), format_value(rel));
                println!("{line}");
                rows.push(line);
                final_model = Some(model);
            }
            if let Some(path) = report {
                let mut csv = format!("{header}\n");
                for line in &rows {
                    csv.push_str(line);
                    csv.push('\n');
                }
                write_output(Some(&path), &csv)?;
            }
            let model = final_model.expect("at least one budget");
            eprintln!(
                "fitted {} patterns (m <= {max_m}); final relative residual {}",
                model.basis().len(),
                rows.last()
                    .and_then(|l| l.split(',').nth(3))
                    .unwrap_or("n/a")
            );
            write_output(Some(&out), &to_json_pretty(&ModelFile::from_model(&model, &caps))?)?;
            Ok(0)
        }

        Command::Predict { model, graph } => {
            let model = ModelFile::parse(&read_file(&model)?)?.to_model(&caps)?;
            let graph = GraphFile::parse(&read_file(&graph)?)?.to_weighted()?;
            if model.label_arity() == 0 {
                println!("{}", format_value(predict(&model, &graph, &caps)?));
            } else {
                let map = predict_equivariant(&model, &graph, &caps)?;
                let tuples: Vec<Vec<usize>> = map
                    .tuples
                    .iter()
                    .map(|t| t.iter().map(|&x| x + 1).collect())
                    .collect();
                let json = serde_json::json!({ "tuples": tuples, "values": map.values });
                println!("{}", to_json(&json)?);
            }
            Ok(0)
        }

        Command::Separate {
            graph1,
            graph2,
            max_m,
            labeled,
        } => {
            let f1 = GraphFile::parse(&read_file(&graph1)?)?;
            let f2 = GraphFile::parse(&read_file(&graph2)?)?;
            let (outcome, witness_json) = if labeled {
                match separate_labeled(&f1.to_labeled()?, &f2.to_labeled()?, max_m, &caps)? {
                    Separation::Separated { witness, hom1, hom2 } => (
                        Some((hom1, hom2)),
                        Some(to_json(&PatternFile::from_labeled_pattern(&witness, &caps))?),
                    ),
                    Separation::NotSeparated { max_m } => {
                        println!("NOT-SEPARATED max_m={max_m}");
                        (None, None)
                    }
                }
            } else {
                match separate(&f1.to_weighted()?, &f2.to_weighted()?, max_m, &caps)? {
                    Separation::Separated { witness, hom1, hom2 } => (
                        Some((hom1, hom2)),
                        Some(to_json(&PatternFile::from_pattern(&witness, &caps))?),
                    ),
                    Separation::NotSeparated { max_m } => {
                        println!("NOT-SEPARATED max_m={max_m}");
                        (None, None)
                    }
                }
            };
            match (outcome, witness_json) {
                (Some((hom1, hom2)), Some(witness)) => {
                    println!("SEPARATED");
                    println!("{witness}");
                    println!("hom1 = {}", format_value(hom1));
                    println!("hom2 = {}", format_value(hom2));
                    Ok(0)
                }
                _ => Ok(1),
            }
        }

        Command::Graphon { command } => match command {
            GraphonCommand::Density {
                graphon,
                pattern,
                blocks,
            } => {
                let w = GraphonFile::parse(&read_file(&graphon)?)?.to_graphon()?;
                let p = PatternFile::parse(&read_file(&pattern)?)?.to_labeled_pattern()?;
                let value = if p.k() == 0 && blocks.is_empty() {
                    density(p.pattern(), &w, &caps)?
                } else {
                    let zero_based = blocks
                        .iter()
                        .map(|&b| {
                            if b == 0 || b > w.q() {
                                Err(Error::invalid(
                                    "blocks",
                                    format!("block {b} outside 1..{}", w.q()),
                                ))
                            } else {
                                Ok(b - 1)
                            }
                        })
                        .collect::<Result<Vec<_>, Error>>()?;
                    density_labeled(&p, &w, &zero_based, &caps)?
                };
                println!("{}", format_value(value));
                Ok(0)
            }
            GraphonCommand::Cutnorm { graphon } => {
                let w = GraphonFile::parse(&read_file(&graphon)?)?.to_signed_graphon()?;
                println!("{}", format_value(cut_norm(&w, &caps)?));
                Ok(0)
            }
            GraphonCommand::Cutdist { graphon1, graphon2 } => {
                let w1 = GraphonFile::parse(&read_file(&graphon1)?)?.to_signed_graphon()?;
                let w2 = GraphonFile::parse(&read_file(&graphon2)?)?.to_signed_graphon()?;
                let d = cut_distance(&w1, &w2, &caps)?;
                eprintln!(
                    "note: permutation-overlay value, an upper bound on the \
                     infimum over measure-preserving bijections"
                );
                println!("{}", format_value(d));
                Ok(0)
            }
            GraphonCommand::Sample {
                graphon,
                n,
                seed,
                out,
            } => {
                let w = GraphonFile::parse(&read_file(&graphon)?)?.to_graphon()?;
                let g = sample_graph(&w, n, seed)?;
                write_output(out.as_deref(), &to_json_pretty(&GraphFile::from_weighted(&g))?)?;
                Ok(0)
            }
        },
    }
}
