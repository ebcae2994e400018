mod failure;
mod io;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use ultrametric::chains::{realize_spectrum, ultrametric_from_chain};
use ultrametric::dendro::{dendrogram_from_ultrametric, to_newick, ultrametric_from_dendrogram};
use ultrametric::diamfn::{check_axioms_with, check_ball_dichotomy, synthesize_ultrametric, AxiomScan};
use ultrametric::dipgraph::{default_inner, default_outer, dip_graph, dip_report, extend_with_apex, ultrametric_from_partition};
use ultrametric::oracle::random_ultrametric;
use ultrametric::{certify_ultrametric, Dendrogram, DiameterFunction, Error, GraphChain, MatrixFormat, Partition, Scalar};

use crate::failure::Failure;
use crate::io::{pretty, read_input, write_output, MatrixInput};

#[derive(Parser)]
#[command(name = "ultra", version, about = "Finite ultrametric spaces: validate, analyze, synthesize, export")]
struct Cli {
    #[command(flatten)]
    global: Global,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Matrix format; overrides the input file extension and sets the
    /// format of matrix output (default json).
    #[arg(long, global = true)]
    format: Option<MatrixFormat>,

    /// Write the result here instead of stdout.
    #[arg(long, short, global = true, value_name = "PATH")]
    output: Option<String>,

    /// Snap matrix entries closer than E onto a common value before
    /// validation, for matrices written by floating point code (try 1e-9).
    #[arg(long, global = true, value_name = "E")]
    epsilon: Option<Scalar>,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a distance matrix is an ultrametric.
    Validate { input: String },
    /// List the distinct distance values.
    Spectrum { input: String },
    /// Diametrical-pair graph, its parts and the dip count bound.
    Dip { input: String },
    /// Dendrogram JSON of a matrix, or the matrix of a dendrogram.
    Dendrogram {
        input: String,
        /// Read a dendrogram and write its matrix.
        #[arg(long)]
        to_matrix: bool,
    },
    /// Newick text of a matrix or dendrogram JSON.
    Newick {
        input: String,
        /// Write `:length` branch lengths instead of `[level]` heights.
        #[arg(long)]
        branch_lengths: bool,
    },
    /// Graphviz DOT of the diametrical-pair graph, parts as clusters.
    Dot { input: String },
    /// Matrix of a diameter function that satisfies the axioms.
    SynthTau { input: String },
    /// Two-level matrix of a partition given as {"parts": [[..], ..]}.
    SynthPartition {
        input: String,
        #[arg(long, value_name = "P/Q")]
        inner: Option<Scalar>,
        #[arg(long, value_name = "P/Q")]
        outer: Option<Scalar>,
    },
    /// Matrix of a graph chain.
    SynthChain { input: String },
    /// Matrix on the given values with d(x, y) = max(x, y).
    SynthSpectrum {
        #[arg(required = true, value_name = "VALUE")]
        values: Vec<Scalar>,
    },
    /// Add a point at the given distance from every point.
    ExtendApex {
        input: String,
        #[arg(long, value_name = "P/Q")]
        apex_level: Scalar,
    },
    /// Check the diameter-function axioms of a table or matrix.
    CheckAxioms {
        input: String,
        /// Random triples to draw above 6 points.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Check the ball dichotomy of a table or matrix (at most 5 points).
    CheckBalls { input: String },
    /// Random ultrametric matrix.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PartitionDoc {
    parts: Vec<Vec<usize>>,
}

fn parse_json<T: serde::de::DeserializeOwned>(raw: &str) -> Result<T, Failure> {
    serde_json::from_str(raw).map_err(|e| {
        Failure::Lib(Error::Parse { line: Some(e.line()), column: Some(e.column()), message: e.to_string() })
    })
}

/// True when `raw` is a JSON object with any of `keys` at the top level.
fn has_key(raw: &str, keys: &[&str]) -> bool {
    match serde_json::from_str::<Value>(raw) {
        Ok(Value::Object(map)) => keys.iter().any(|k| map.contains_key(*k)),
        _ => false,
    }
}

impl Global {
    fn matrices(&self) -> MatrixInput {
        MatrixInput { format: self.format, epsilon: self.epsilon.clone() }
    }

    fn emit(&self, text: &str) -> Result<(), Failure> {
        write_output(self.output.as_deref(), text)
    }

    fn emit_matrix(&self, m: &ultrametric::DistanceMatrix) -> Result<(), Failure> {
        self.emit(&m.to_format(self.format.unwrap_or(MatrixFormat::Json)))
    }

    /// A diameter table, or the table of a matrix.
    fn diameter_function(&self, path: &str) -> Result<DiameterFunction, Failure> {
        let raw = read_input(path)?;
        if has_key(&raw, &["entries"]) {
            return Ok(DiameterFunction::from_json(&raw)?);
        }
        let m = self.matrices().matrix_from_text(path, &raw)?;
        let s = certify_ultrametric(m).map_err(Error::from)?;
        Ok(DiameterFunction::from_space(&s)?)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = &cli.global;
    let matrices = g.matrices();
    match cli.command {
        Command::Validate { input } => {
            let m = matrices.matrix(&input)?;
            let n = m.n();
            match certify_ultrametric(m) {
                Ok(s) => g.emit(&pretty(&json!({ "ultrametric": true, "n": n, "diameter": s.diameter() }))),
                Err(v) => {
                    g.emit(&pretty(&json!({ "ultrametric": false, "n": n, "violation": v })))?;
                    Err(Error::from(v).into())
                }
            }
        }
        Command::Spectrum { input } => {
            let s = matrices.space(&input)?;
            g.emit(&pretty(&json!({ "spectrum": s.spectrum() })))
        }
        Command::Dip { input } => {
            let s = matrices.space(&input)?;
            let report = dip_report(&s)?;
            let mut doc = serde_json::to_value(&report).expect("report serializes");
            doc["edges"] = json!(dip_graph(&s)?.edges());
            g.emit(&pretty(&doc))
        }
        Command::Dendrogram { input, to_matrix } => {
            if to_matrix {
                let tree = Dendrogram::from_json(&read_input(&input)?)?;
                g.emit_matrix(ultrametric_from_dendrogram(&tree)?.matrix())
            } else {
                g.emit(&pretty(&dendrogram_from_ultrametric(&matrices.space(&input)?)))
            }
        }
        Command::Newick { input, branch_lengths } => {
            let raw = read_input(&input)?;
            let text = if has_key(&raw, &["leaf", "level"]) {
                let tree = Dendrogram::from_json(&raw)?;
                tree.validate()?;
                to_newick(&tree, None, branch_lengths)
            } else {
                let s = certify_ultrametric(matrices.matrix_from_text(&input, &raw)?).map_err(Error::from)?;
                to_newick(&dendrogram_from_ultrametric(&s), s.matrix().labels(), branch_lengths)
            };
            g.emit(&format!("{text}\n"))
        }
        Command::Dot { input } => {
            let s = matrices.space(&input)?;
            let graph = dip_graph(&s)?;
            let parts = s.equiv_partition()?;
            g.emit(&graph.to_dot(s.matrix().labels(), Some(&parts)))
        }
        Command::SynthTau { input } => {
            let t = DiameterFunction::from_json(&read_input(&input)?)?;
            g.emit_matrix(synthesize_ultrametric(&t)?.matrix())
        }
        Command::SynthPartition { input, inner, outer } => {
            let doc: PartitionDoc = parse_json(&read_input(&input)?)?;
            let p = Partition::new(doc.parts)?;
            let s = ultrametric_from_partition(
                &p,
                &inner.unwrap_or_else(default_inner),
                &outer.unwrap_or_else(default_outer),
            )?;
            g.emit_matrix(s.matrix())
        }
        Command::SynthChain { input } => {
            let chain = GraphChain::from_json(&read_input(&input)?)?;
            g.emit_matrix(ultrametric_from_chain(&chain)?.matrix())
        }
        Command::SynthSpectrum { values } => g.emit_matrix(realize_spectrum(&values)?.matrix()),
        Command::ExtendApex { input, apex_level } => {
            let s = matrices.space(&input)?;
            g.emit_matrix(extend_with_apex(&s, &apex_level)?.matrix())
        }
        Command::CheckAxioms { input, samples, seed } => {
            let t = g.diameter_function(&input)?;
            let defaults = AxiomScan::default();
            let scan = AxiomScan {
                samples: samples.unwrap_or(defaults.samples),
                seed: seed.unwrap_or(defaults.seed),
                ..defaults
            };
            let report = check_axioms_with(&t, &scan)?;
            g.emit(&pretty(&report))?;
            if report.ok() {
                Ok(())
            } else {
                Err(Error::AxiomViolation(Box::new(report)).into())
            }
        }
        Command::CheckBalls { input } => {
            let report = check_ball_dichotomy(&g.diameter_function(&input)?)?;
            g.emit(&pretty(&report))?;
            match &report.counterexample {
                None => Ok(()),
                Some(c) => Err(Failure::Check {
                    kind: "BallDichotomyFailure",
                    message: "balls are neither disjoint nor nested, or recentering changes a ball".into(),
                    witness: serde_json::to_value(c).expect("counterexample serializes"),
                }),
            }
        }
        Command::Gen { n, depth, seed } => {
            if n == 0 || depth == 0 {
                return Err(Failure::Usage("--n and --depth must be at least 1".into()));
            }
            g.emit_matrix(random_ultrametric(n, depth, seed).matrix())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("{}", failure.to_json());
            ExitCode::from(failure.exit_code())
        }
    }
}
