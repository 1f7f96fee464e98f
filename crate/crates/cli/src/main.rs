use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use condavg_core::hardness::{gen_bichromatic_instance, gen_shattered_instance, sample_sign_string, InstanceDump};
use condavg_core::harness::{self, ExperimentConfig};
use condavg_core::learner::{choose_k, fit_algorithm1, fit_amplified, fit_erm};
use condavg_core::measure::{draw_sample, risk};
use condavg_core::oig::{OneInclusionPredictor, PatternClass};
use condavg_core::params::param_report;
use condavg_core::{ConceptClass, DirectedGraph, Distribution, Error};

#[derive(Parser)]
#[command(
    name = "condavg",
    version,
    about = "Learning conditional averages over directed graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print alpha, alpha1 and alpha2 with witnesses as JSON.
    Params {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        class: PathBuf,
        /// Search-node budget (defaults to CONDAVG_BUDGET or 10^7).
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Fit a learner on one seeded sample and report its exact risk.
    Learn {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        class: PathBuf,
        #[arg(long)]
        dist: PathBuf,
        #[arg(long)]
        concept_index: u64,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Median-amplify with choose_k(DELTA) blocks.
        #[arg(long, value_name = "DELTA", conflicts_with = "erm")]
        amplify: Option<f64>,
        /// ERM on the first half of the sample, averaging over the second.
        #[arg(long)]
        erm: bool,
        /// Include per-vertex predictions.
        #[arg(long)]
        predictions: bool,
    },
    /// Run a Monte-Carlo sweep and write per-trial CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        plot: Option<PathBuf>,
        /// Worker threads (0 = one per core).
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
    /// Print the canonical orientation of a pattern class.
    Oig {
        #[arg(long)]
        patterns: PathBuf,
    },
    /// Generate a lower-bound instance.
    Hardinstance {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        class: PathBuf,
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Target concept for the bichromatic family.
        #[arg(long, default_value_t = 0)]
        concept_index: u64,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Shattered,
    Bichromatic,
}

enum Failure {
    Core(Error),
    Inexact(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn print_json(value: &impl serde::Serialize) -> Result<(), Failure> {
    println!("{}", serde_json::to_string_pretty(value).map_err(Error::from)?);
    Ok(())
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Params { graph, class, budget } => {
            let g = DirectedGraph::from_json_file(&graph)?;
            let cc = ConceptClass::from_json_file(&class)?;
            let report = param_report(&g, &cc, budget.unwrap_or_else(harness::default_budget))?;
            print_json(&report)?;
            if !report.all_exact() {
                return Err(Failure::Inexact(
                    "budget exhausted; some values are lower bounds".into(),
                ));
            }
        }
        Command::Learn {
            graph,
            class,
            dist,
            concept_index,
            m,
            seed,
            amplify,
            erm,
            predictions,
        } => {
            let g = DirectedGraph::from_json_file(&graph)?;
            let cc = ConceptClass::from_json_file(&class)?;
            let d = Distribution::from_json_file(&dist)?;
            let c = cc.get(concept_index)?;
            let sample = draw_sample(&d, &c, m, seed)?;
            let model = match (amplify, erm) {
                (Some(delta), _) => fit_amplified(&g, &cc, &sample, choose_k(delta)?)?,
                (None, true) => fit_erm(&g, &cc, &sample.slice(0, m / 2), &sample.slice(m / 2, m))?,
                (None, false) => fit_algorithm1(&g, &cc, &sample)?,
            };
            let mut out = json!({
                "risk": risk(&g, &d, &c, &model)?,
                "m": m,
                "mode": model.mode_name(),
            });
            if predictions {
                out["predictions"] = json!(model.predict_all()?);
            }
            print_json(&out)?;
        }
        Command::Sweep {
            config,
            out,
            plot,
            workers,
        } => {
            let cfg = ExperimentConfig::from_json_file(&config)?;
            let result = harness::run_sweep(&cfg, workers)?;
            harness::write_atomic(&out, harness::csv_string(&result.records)?.as_bytes())?;
            if let Some(plot) = plot {
                harness::write_atomic(&plot, harness::emit_plot_data(&[&result])?.as_bytes())?;
            }
            eprintln!("{} trials written to {}", result.records.len(), out.display());
        }
        Command::Oig { patterns } => {
            let pc = PatternClass::from_json_file(&patterns)?;
            let p = OneInclusionPredictor::new(&pc);
            let oig = p.graph();
            let edges: Vec<_> = oig
                .edges()
                .iter()
                .zip(&p.orientation().heads)
                .map(|(e, &h)| {
                    let tail = if h == e.u { e.v } else { e.u };
                    json!({
                        "from": pc.patterns()[tail].to_string(),
                        "to": pc.patterns()[h].to_string(),
                        "coord": e.coord,
                    })
                })
                .collect();
            print_json(&json!({
                "patterns": pc.len(),
                "edges": edges,
                "max_out_degree": p.max_out_degree(),
            }))?;
        }
        Command::Hardinstance {
            graph,
            class,
            family,
            eps,
            seed,
            concept_index,
            budget,
            out,
        } => {
            let g = DirectedGraph::from_json_file(&graph)?;
            let cc = ConceptClass::from_json_file(&class)?;
            let budget = budget.unwrap_or_else(harness::default_budget);
            let dump = match family {
                Family::Shattered => {
                    let instance = gen_shattered_instance(&g, &cc, eps, budget)?;
                    InstanceDump::Shattered {
                        concept: instance.random_target(&cc, seed)?,
                        distribution: instance.distribution(),
                        instance,
                    }
                }
                Family::Bichromatic => {
                    let c = cc.get(concept_index)?;
                    let instance = gen_bichromatic_instance(&g, &c, eps, budget)?;
                    let signs = sample_sign_string(instance.k(), seed)?;
                    InstanceDump::Bichromatic {
                        distribution: instance.perturbed_distribution(&signs)?,
                        signs,
                        instance,
                    }
                }
            };
            let text = serde_json::to_string_pretty(&dump).map_err(Error::from)?;
            harness::write_atomic(&out, text.as_bytes())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Inexact(msg)) => {
            eprintln!("condavg: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Core(e)) => {
            eprintln!("condavg: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            let code = match &e {
                e if e.is_resource_limit() => 3,
                Error::InvalidArgument(_) | Error::InvalidVertex { .. } | Error::Parse(_) | Error::Json(_) => 2,
                Error::Trial { source, .. } if matches!(**source, Error::InvalidArgument(_)) => 2,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}
