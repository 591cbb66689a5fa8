//! `alnrepair`: detect and repair incoherent ontology alignments.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use alnrepair_core::conflicts::{count_incoherent_classes, disjoint_conflict_clusters};
use alnrepair_core::io::{parse_alignment, parse_ontology, write_alignment, write_ontology};
use alnrepair_core::report::{input_sizes, InputSizes, SCHEMA_VERSION};
use alnrepair_core::{
    extract_core_fragments, find_conflict_sets, generate_instance, precision_recall_fmeasure, run_pipeline, Alignment,
    ConflictConfig, ConflictStats, FragmentStats, GeneratorParams, MergedGraph, Ontology, RepairConfig, Side,
};
use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "alnrepair",
    version,
    about = "Detect and repair incoherent ontology alignments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Inputs {
    /// First ontology (mapping sources).
    #[arg(long)]
    onto1: PathBuf,
    /// Second ontology (mapping targets).
    #[arg(long)]
    onto2: PathBuf,
    /// Alignment TSV.
    #[arg(long)]
    align: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Repair an alignment and write the kept mappings.
    Repair {
        #[command(flatten)]
        inputs: Inputs,
        /// Confidence-interval filter width; negative disables the filter.
        #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
        epsilon: f64,
        #[arg(long, default_value_t = 2)]
        search_depth: usize,
        /// Treat all conflict sets as one cluster.
        #[arg(long)]
        no_clusters: bool,
        /// Output alignment TSV.
        #[arg(long)]
        out: PathBuf,
        /// JSON run report; printed to stdout when omitted.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Include per-phase wall times in the report.
        #[arg(long)]
        timings: bool,
    },
    /// Print the number of incoherent classes, then one class per line.
    Check {
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Print core fragment statistics as JSON.
    Fragments {
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Print conflict sets and cluster statistics as JSON.
    Conflicts {
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Score an alignment against a reference.
    Eval {
        #[arg(long)]
        produced: PathBuf,
        #[arg(long)]
        reference: PathBuf,
        /// With --onto2, also count incoherent classes of the produced alignment.
        #[arg(long, requires = "onto2")]
        onto1: Option<PathBuf>,
        #[arg(long, requires = "onto1")]
        onto2: Option<PathBuf>,
        /// Pre-repair alignment, to count removed mappings.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Generate a synthetic instance.
    Gen {
        #[arg(long)]
        classes: usize,
        #[arg(long)]
        mappings: usize,
        #[arg(long)]
        disjoints: usize,
        #[arg(long)]
        noise: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_depth: usize,
        #[arg(long, default_value_t = 3.0)]
        branching: f64,
        /// Probability of an extra parent per class.
        #[arg(long, default_value_t = 0.1)]
        multi_parent: f64,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load_ontology(path: &Path, side: Side) -> Result<Ontology> {
    parse_ontology(&read(path)?, side).with_context(|| format!("in {}", path.display()))
}

fn load_alignment(path: &Path) -> Result<Alignment> {
    parse_alignment(&read(path)?).with_context(|| format!("in {}", path.display()))
}

impl Inputs {
    fn load(&self) -> Result<(Ontology, Ontology, Alignment)> {
        Ok((
            load_ontology(&self.onto1, Side::First)?,
            load_ontology(&self.onto2, Side::Second)?,
            load_alignment(&self.align)?,
        ))
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct FragmentsReport {
    schema_version: u32,
    input: InputSizes,
    fragments: FragmentStats,
}

#[derive(Serialize)]
struct WitnessOut {
    class: String,
    disjoint: (String, String),
}

#[derive(Serialize)]
struct SetOut {
    mappings: Vec<String>,
    witness: Option<WitnessOut>,
}

#[derive(Serialize)]
struct ConflictsReport {
    schema_version: u32,
    input: InputSizes,
    conflicts: ConflictStats,
    clusters: Vec<Vec<usize>>,
    sets: Vec<SetOut>,
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Repair {
            inputs,
            epsilon,
            search_depth,
            no_clusters,
            out,
            report,
            timings,
        } => {
            let (o1, o2, al) = inputs.load()?;
            let cfg = RepairConfig {
                epsilon,
                search_depth,
                use_clusters: !no_clusters,
            };
            let output = run_pipeline(&o1, &o2, &al, &cfg, &ConflictConfig::default(), timings)?;
            write(&out, &write_alignment(&output.result.kept))?;
            let text = json(&output.report);
            match report {
                Some(path) => write(&path, &text)?,
                None => print!("{text}"),
            }
        }
        Command::Check { inputs } => {
            let (o1, o2, al) = inputs.load()?;
            let g = MergedGraph::new(&o1, &o2, &al)?;
            let (count, classes) = count_incoherent_classes(&g);
            println!("{count}");
            for c in classes {
                println!("{}", g.name(c));
            }
        }
        Command::Fragments { inputs } => {
            let (o1, o2, al) = inputs.load()?;
            let frag = extract_core_fragments(&o1, &o2, &al)?;
            print!(
                "{}",
                json(&FragmentsReport {
                    schema_version: SCHEMA_VERSION,
                    input: input_sizes(&o1, &o2, &al),
                    fragments: frag.stats(),
                })
            );
        }
        Command::Conflicts { inputs } => {
            let (o1, o2, al) = inputs.load()?;
            let frag = extract_core_fragments(&o1, &o2, &al)?;
            let list = find_conflict_sets(&frag, &ConflictConfig::default())?;
            let name = |c| frag.class(c).map(|id| id.name.clone()).unwrap_or_default();
            let sets = list
                .iter()
                .map(|s| SetOut {
                    mappings: s
                        .mappings()
                        .iter()
                        .map(|&m| {
                            let m = al.get(m);
                            format!("{} {} {}", m.source, m.relation.symbol(), m.target)
                        })
                        .collect(),
                    witness: s.witness().map(|w| WitnessOut {
                        class: name(w.class),
                        disjoint: (name(w.pair.0), name(w.pair.1)),
                    }),
                })
                .collect();
            print!(
                "{}",
                json(&ConflictsReport {
                    schema_version: SCHEMA_VERSION,
                    input: input_sizes(&o1, &o2, &al),
                    conflicts: list.stats(),
                    clusters: disjoint_conflict_clusters(&list).into_iter().map(|c| c.sets).collect(),
                    sets,
                })
            );
        }
        Command::Eval {
            produced,
            reference,
            onto1,
            onto2,
            input,
        } => {
            let produced = load_alignment(&produced)?;
            let reference = load_alignment(&reference)?;
            let mut report = precision_recall_fmeasure(&produced, &reference);
            if let (Some(p1), Some(p2)) = (onto1, onto2) {
                let o1 = load_ontology(&p1, Side::First)?;
                let o2 = load_ontology(&p2, Side::Second)?;
                let g = MergedGraph::new(&o1, &o2, &produced)?;
                report.incoherent_count = Some(count_incoherent_classes(&g).0);
            }
            if let Some(path) = input {
                let before = load_alignment(&path)?;
                let kept = produced
                    .mappings()
                    .iter()
                    .map(|m| m.key())
                    .collect::<std::collections::HashSet<_>>();
                report.removed_count = Some(before.mappings().iter().filter(|m| !kept.contains(&m.key())).count());
            }
            print!("{}", json(&report));
        }
        Command::Gen {
            classes,
            mappings,
            disjoints,
            noise,
            seed,
            out_dir,
            max_depth,
            branching,
            multi_parent,
        } => {
            let inst = generate_instance(&GeneratorParams {
                classes_per_side: classes,
                max_depth,
                branching,
                disjoint_pairs: disjoints,
                mapping_count: mappings,
                noise_rate: noise,
                multi_parent_rate: multi_parent,
                seed,
            })?;
            fs::create_dir_all(&out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
            write(&out_dir.join("onto1.txt"), &write_ontology(&inst.onto1))?;
            write(&out_dir.join("onto2.txt"), &write_ontology(&inst.onto2))?;
            write(&out_dir.join("align.tsv"), &write_alignment(&inst.alignment))?;
            write(&out_dir.join("reference.tsv"), &write_alignment(&inst.reference))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
