mod commands;

use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use commands::{Command, Record};
use vptree::graph6::parse_graphs;
use vptree::Limits;

/// Records handed to the worker pool at a time; output keeps input order.
const BATCH: usize = 256;

#[derive(Parser, Debug)]
#[command(name = "vptree", version, about = "Host-tree degree tools for path-in-tree intersection graphs")]
struct Cli {
    #[command(subcommand)]
    command: Sub,

    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    /// Largest graph handed to exact colouring.
    #[arg(long, global = true, default_value_t = vptree::coloring::DEFAULT_COLORING_CAP)]
    cap: usize,

    /// Search steps allowed per clique-tree enumeration.
    #[arg(long, global = true, default_value_t = vptree::chordal::DEFAULT_CLIQUE_TREE_BUDGET)]
    budget: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    JsonLines,
}

#[derive(Args, Debug)]
struct Input {
    /// graph6 stream or edge-list file; standard input when absent or `-`.
    input: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Minimum host-tree degree of each graph.
    Classify(Input),
    /// Build G_H from each input graph H.
    BuildGh {
        #[command(flatten)]
        input: Input,
        /// Write results here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Certify minimal non-[h,2,1] graphs.
    Certify {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        h: usize,
    },
    /// Brute-force representation search; without --h, the minimum h.
    Oracle {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        h: Option<usize>,
        /// Largest host tree searched (default: twice the clique count).
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Necessary conditions for minimal non-[h,2,1] graphs.
    Battery {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        h: usize,
    },
    /// Vertex and edge criticality.
    Critical(Input),
    /// Exact chromatic number with a colouring.
    Color(Input),
}

fn read_input(input: &Input) -> Result<String> {
    match &input.input {
        Some(p) if p.as_os_str() != "-" => {
            fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))
        }
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).context("reading standard input")?;
            Ok(s)
        }
    }
}

fn check_h(h: Option<usize>) -> Result<()> {
    if let Some(h) = h {
        if h < 2 {
            bail!("--h must be at least 2");
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    if cli.cap == 0 || cli.budget == 0 {
        bail!("--cap and --budget must be positive");
    }
    let limits = Limits {
        coloring_cap: cli.cap,
        clique_tree_budget: cli.budget,
        ..Limits::default()
    };
    let (command, input, output) = match cli.command {
        Sub::Classify(i) => (Command::Classify, i, None),
        Sub::BuildGh { input, output } => (Command::BuildGh, input, output),
        Sub::Certify { input, h } => (Command::Certify { h }, input, None),
        Sub::Oracle { input, h, bound } => {
            if bound == Some(0) {
                bail!("--bound must be positive");
            }
            (Command::Oracle { h, bound }, input, None)
        }
        Sub::Battery { input, h } => (Command::Battery { h }, input, None),
        Sub::Critical(i) => (Command::Critical, i, None),
        Sub::Color(i) => (Command::Color, i, None),
    };
    check_h(match command {
        Command::Certify { h } | Command::Battery { h } => Some(h),
        Command::Oracle { h, .. } => h,
        _ => None,
    })?;
    let text = read_input(&input)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
        .context("starting worker pool")?;
    let sink: Box<dyn Write> = match &output {
        Some(p) => Box::new(fs::File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut out = BufWriter::new(sink);
    let items: Vec<_> = parse_graphs(&text).collect();
    let mut clean = true;
    for chunk in items.chunks(BATCH) {
        let records: Vec<Record> = pool.install(|| {
            chunk
                .par_iter()
                .map(|item| match item {
                    Ok((line, g)) => commands::run(command, *line, g, &limits),
                    Err(e) => {
                        let line = match e {
                            vptree::Error::Parse { line, .. } => *line,
                            _ => 0,
                        };
                        Record::parse_error(line, e)
                    }
                })
                .collect()
        });
        for r in records {
            if r.is_error() {
                log::warn!("line {}: {}", r.line, r.human);
                clean = false;
            }
            match cli.format {
                // bare graph6 so the output can feed another subcommand
                Format::Human if command == Command::BuildGh => {
                    if !r.is_error() {
                        writeln!(out, "{}", r.human)?;
                    }
                }
                Format::Human => writeln!(out, "line {}: {}", r.line, r.human)?,
                Format::JsonLines => writeln!(out, "{}", serde_json::to_string(&r)?)?,
            }
        }
    }
    out.flush()?;
    Ok(clean)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("vptree: {e:#}");
            ExitCode::from(2)
        }
    }
}
