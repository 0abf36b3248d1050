use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use isorealize::io::{self, FileError, SpaceFile};
use isorealize::iso::{enumerate_isometries, naive_enumerate, IsoError, SearchConfig, DEFAULT_NODE_BUDGET};
use isorealize::realize::verify::{provenance_from_records, verify_realization, ProvenanceRecord};
use isorealize::realize::{
    realize, AssemblyOptions, CoverStrategy, MetricChoice, OffsetSchedule, Pipeline, RealizeError, RealizeOptions,
};

const BUDGET_ENV: &str = "ISOGROUP_NODE_BUDGET";

#[derive(Parser)]
#[command(name = "isorealize", version, about = "Realize finite groups as isometry groups of finite metric spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build K from a group and verify Iso(K) = G.
    Realize {
        #[arg(long)]
        group: PathBuf,
        /// discrete, word:<i,j,...> or file:<path>
        #[arg(long, default_value = "discrete")]
        metric: String,
        #[arg(long, value_enum, default_value_t = PipelineArg::Compact)]
        pipeline: PipelineArg,
        #[arg(long, value_enum, default_value_t = CoverArg::Greedy)]
        cover: CoverArg,
        #[arg(long, value_enum, default_value_t = OffsetsArg::Harmonic)]
        offsets: OffsetsArg,
        #[arg(long)]
        include_y_layer: bool,
        /// Space file for K (with provenance); stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        node_budget: Option<u64>,
    },
    /// Enumerate the isometry group of a space.
    Iso {
        #[arg(long)]
        space: PathBuf,
        /// Brute force over all permutations (at most 8 points).
        #[arg(long)]
        naive: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        node_budget: Option<u64>,
    },
    /// Re-verify a stored K against a group.
    Verify {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        group: PathBuf,
        /// Report file; stdout if omitted.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        node_budget: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PipelineArg {
    Compact,
    Polish,
}

#[derive(Clone, Copy, ValueEnum)]
enum CoverArg {
    Greedy,
    Pairs,
}

#[derive(Clone, Copy, ValueEnum)]
enum OffsetsArg {
    Harmonic,
    Dyadic,
}

enum Failure {
    Input(String),
    Verification(String),
    Budget(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Input(_) => 2,
            Failure::Budget(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Verification(m) | Failure::Budget(m) => m,
        }
    }
}

impl From<FileError> for Failure {
    fn from(e: FileError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<IsoError> for Failure {
    fn from(e: IsoError) -> Self {
        match e {
            IsoError::SizeGuardExceeded(_) => Failure::Budget(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<RealizeError> for Failure {
    fn from(e: RealizeError) -> Self {
        use RealizeError::*;
        if e.is_budget_exhausted() {
            return Failure::Budget(e.to_string());
        }
        match e {
            Group(_) | Metric(_) | NotLeftInvariant { .. } | DisconnectedWordMetric | GeneratorOutOfRange(_)
            | ExplicitSizeMismatch { .. } | InvalidProvenance(_) => Failure::Input(e.to_string()),
            _ => Failure::Verification(e.to_string()),
        }
    }
}

/// The environment variable wins over the flag.
fn search_config(flag: Option<u64>) -> Result<SearchConfig, Failure> {
    let node_budget = match std::env::var(BUDGET_ENV) {
        Ok(raw) => raw
            .trim()
            .parse()
            .map_err(|_| Failure::Input(format!("{BUDGET_ENV}={raw:?} is not a non-negative integer")))?,
        Err(_) => flag.unwrap_or(DEFAULT_NODE_BUDGET),
    };
    Ok(SearchConfig { node_budget, ..SearchConfig::default() })
}

fn parse_metric(raw: &str) -> Result<MetricChoice, Failure> {
    if raw == "discrete" {
        return Ok(MetricChoice::Discrete);
    }
    if let Some(list) = raw.strip_prefix("word:") {
        let gens = list
            .split(',')
            .map(|s| s.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| Failure::Input(format!("bad generator list in --metric {raw:?}")))?;
        return Ok(MetricChoice::Word(gens));
    }
    if let Some(path) = raw.strip_prefix("file:") {
        return Ok(MetricChoice::Explicit(io::read_matrix(Path::new(path))?));
    }
    Err(Failure::Input(format!("--metric must be discrete, word:<i,...> or file:<path>, got {raw:?}")))
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => Ok(io::write_text(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Realize { group, metric, pipeline, cover, offsets, include_y_layer, out, report, node_budget } => {
            let search = search_config(node_budget)?;
            let group = io::read_group(&group)?;
            let options = RealizeOptions {
                metric: parse_metric(&metric)?,
                pipeline: match pipeline {
                    PipelineArg::Compact => Pipeline::Compact,
                    PipelineArg::Polish => Pipeline::Polish,
                },
                cover: match cover {
                    CoverArg::Greedy => CoverStrategy::Greedy,
                    CoverArg::Pairs => CoverStrategy::Pairs,
                },
                assembly: AssemblyOptions {
                    offsets: match offsets {
                        OffsetsArg::Harmonic => OffsetSchedule::Harmonic,
                        OffsetsArg::Dyadic => OffsetSchedule::Dyadic,
                    },
                    include_y_layer,
                },
                search,
            };
            let r = realize(&group, &options)?;
            let k = &r.assembly.space;
            let records: Vec<ProvenanceRecord> =
                r.assembly.provenance.iter().enumerate().map(|(p, prov)| ProvenanceRecord::new(k.label(p), prov)).collect();
            emit(out.as_deref(), &io::to_json(&SpaceFile::from_space(k, Some(records))))?;
            if let Some(path) = report {
                io::write_text(&path, &io::to_json(&r.report))?;
            }
            eprintln!(
                "|G| = {}, |K| = {}, |Iso(K)| = {}, cover {}: {}",
                r.report.group_order,
                r.report.k_size,
                r.report.iso_order_of_k,
                r.report.cover_size,
                if r.report.realized { "realized" } else { "NOT realized" }
            );
            if r.report.realized {
                Ok(())
            } else {
                Err(Failure::Verification(r.report.failures.join("; ")))
            }
        }
        Command::Iso { space, naive, out, node_budget } => {
            let search = search_config(node_budget)?;
            let (space, _) = io::read_space(&space)?;
            let iso = if naive { naive_enumerate(&space)? } else { enumerate_isometries(&space, &search)? };
            let mut text = iso.to_json();
            text.push('\n');
            emit(out.as_deref(), &text)
        }
        Command::Verify { space, group, report, node_budget } => {
            let search = search_config(node_budget)?;
            let (k, records) = io::read_space(&space)?;
            let group = io::read_group(&group)?;
            let records =
                records.ok_or_else(|| Failure::Input(format!("{}: no provenance records", space.display())))?;
            let provenance = provenance_from_records(&k, &records)?;
            let rep = verify_realization(&k, &group, &provenance, &search)?;
            emit(report.as_deref(), &io::to_json(&rep))?;
            if rep.realized {
                Ok(())
            } else {
                Err(Failure::Verification(rep.failures.join("; ")))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
