use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use linkstream_bc::scalar::lattice_step;
use linkstream_bc::{
    contribution, format_decimal, latency_lists, parse_rational, sample_times, vsp, Evaluator, Node, Stream, Time,
};
use linkstream_bc_oracle::{grid_betweenness, grid_contribution, grid_count_shortest, GridSpec};
use rayon::prelude::*;

#[derive(Parser)]
#[command(name = "lsbc", version, about = "Betweenness of temporal nodes in link streams")]
struct Cli {
    /// Print values as decimals with this many fractional digits.
    #[arg(long, global = true, value_name = "N")]
    decimal: Option<usize>,
    /// Check the result against the grid oracle.
    #[arg(long, global = true)]
    verify: bool,
    /// Grid step for --verify (default: the lattice of the input times).
    #[arg(long, global = true, value_name = "STEP", value_parser = rational)]
    step: Option<Time>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Volume and length of the shortest paths between two temporal nodes.
    Volumes {
        #[arg(long)]
        stream: PathBuf,
        #[arg(long, required = true, num_args = 2, value_names = ["TIME", "NODE"])]
        from: Vec<String>,
        #[arg(long, required = true, num_args = 2, value_names = ["TIME", "NODE"])]
        to: Vec<String>,
    },
    /// Latency lists from one node to every other node.
    Latencies {
        #[arg(long)]
        stream: PathBuf,
        #[arg(long)]
        source: String,
    },
    /// Contribution of a node pair to the betweenness of a temporal node.
    Contrib {
        #[arg(long)]
        stream: PathBuf,
        #[arg(long, required = true, num_args = 2, value_names = ["U", "W"])]
        pair: Vec<String>,
        #[arg(long, required = true, num_args = 2, value_names = ["TIME", "NODE"])]
        at: Vec<String>,
    },
    /// Betweenness of one temporal node.
    Betweenness {
        #[arg(long)]
        stream: PathBuf,
        #[arg(long, required = true, num_args = 2, value_names = ["TIME", "NODE"])]
        at: Vec<String>,
    },
    /// Betweenness of every node at evenly spaced times.
    Profile {
        #[arg(long)]
        stream: PathBuf,
        /// Number of intervals between alpha and omega.
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long, env = "LSBC_THREADS")]
        threads: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Text,
}

fn rational(s: &str) -> Result<Time, String> {
    parse_rational(s).ok_or_else(|| format!("invalid number `{s}`"))
}

fn load(path: &PathBuf) -> anyhow::Result<Stream> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Stream::parse(&text).with_context(|| format!("in {}", path.display()))
}

fn temporal_node(stream: &Stream, args: &[String]) -> anyhow::Result<Node> {
    let time = parse_rational(&args[0]).ok_or_else(|| anyhow!("invalid time `{}`", args[0]))?;
    Ok(stream.temporal_node(time, &args[1])?)
}

struct Output {
    decimal: Option<usize>,
}

impl Output {
    fn value(&self, x: &Time) -> String {
        match self.decimal {
            Some(n) => format_decimal(x, n),
            None => x.to_string(),
        }
    }
}

fn grid(stream: &Stream, step: &Option<Time>, times: &[&Time]) -> anyhow::Result<GridSpec> {
    let step = match step {
        Some(s) => s.clone(),
        None => {
            let all = stream
                .event_times()
                .iter()
                .chain([stream.alpha(), stream.omega()])
                .chain(times.iter().copied());
            lattice_step(all).unwrap_or_else(|| Time::from_integer(1.into()))
        }
    };
    Ok(GridSpec::new(step)?)
}

fn check(what: &str, exact: &Time, oracle: &Time, out: &Output) -> anyhow::Result<()> {
    if exact != oracle {
        bail!(
            "oracle disagrees on {what}: {} here, {} on the grid",
            out.value(exact),
            out.value(oracle)
        );
    }
    eprintln!("oracle agrees on {what}");
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<String> {
    let out = Output { decimal: cli.decimal };
    let mut text = String::new();
    match &cli.command {
        Command::Volumes { stream, from, to } => {
            let s = load(stream)?;
            let (src, dst) = (temporal_node(&s, from)?, temporal_node(&s, to)?);
            let paths = vsp(&s, &src, &dst)?;
            writeln!(text, "{} {}", out.value(paths.volume.size()), paths.volume.dim())?;
            match paths.distance {
                Some(d) => writeln!(text, "distance {d}")?,
                None => writeln!(text, "unreachable")?,
            }
            if cli.verify {
                let g = grid(&s, &cli.step, &[&src.time, &dst.time])?;
                let o = grid_count_shortest(&s, &src, &dst, &g)?;
                if o.length != paths.distance || (o.length.is_some() && o.dimension != paths.volume.dim()) {
                    bail!(
                        "oracle disagrees: length {:?} dimension {} on the grid",
                        o.length,
                        o.dimension
                    );
                }
                if paths.distance.is_some() {
                    check("the volume", paths.volume.size(), &o.size(), &out)?;
                }
            }
        }
        Command::Latencies { stream, source } => {
            let s = load(stream)?;
            let u = s.node_id(source)?;
            for (w, list) in latency_lists(&s, u)?.iter().enumerate() {
                if w != u {
                    let pairs: Vec<String> = list
                        .iter()
                        .map(|p| format!("({},{})", out.value(&p.start), out.value(&p.arrival)))
                        .collect();
                    writeln!(text, "{}: {}", s.node_name(w), pairs.join(" "))?;
                }
            }
        }
        Command::Contrib { stream, pair, at } => {
            let s = load(stream)?;
            let (u, w) = (s.node_id(&pair[0])?, s.node_id(&pair[1])?);
            let tv = temporal_node(&s, at)?;
            let c = contribution(&s, u, w, &tv, &latency_lists(&s, u)?[w])?;
            writeln!(text, "{}", out.value(&c.value))?;
            match &c.anchor {
                Some(p) => writeln!(text, "anchor ({},{})", out.value(&p.start), out.value(&p.arrival))?,
                None => writeln!(text, "anchor none")?,
            }
            if cli.verify {
                let g = grid(&s, &cli.step, &[&tv.time])?;
                check(
                    "the contribution",
                    &c.value,
                    &grid_contribution(&s, u, w, &tv, &g, None)?,
                    &out,
                )?;
            }
        }
        Command::Betweenness { stream, at } => {
            let s = load(stream)?;
            let tv = temporal_node(&s, at)?;
            let b = Evaluator::new(&s).betweenness(&tv)?;
            writeln!(text, "{}", out.value(&b))?;
            if cli.verify {
                let g = grid(&s, &cli.step, &[&tv.time])?;
                check("the betweenness", &b, &grid_betweenness(&s, &tv, &g)?, &out)?;
            }
        }
        Command::Profile {
            stream,
            samples,
            format,
            threads,
        } => {
            let s = load(stream)?;
            let times = sample_times(&s, *samples as usize);
            let eval = Evaluator::new(&s);
            let queries: Vec<Node> = (0..s.node_count())
                .flat_map(|v| times.iter().map(move |t| Node::new(t.clone(), v)))
                .collect();
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.unwrap_or(0))
                .build()?;
            let values = pool.install(|| {
                queries
                    .par_iter()
                    .map(|tv| eval.betweenness(tv))
                    .collect::<linkstream_bc::Result<Vec<Time>>>()
            })?;
            if let Format::Csv = format {
                writeln!(text, "node,time,betweenness")?;
            }
            let sep = match format {
                Format::Csv => ",",
                Format::Text => " ",
            };
            for (tv, value) in queries.iter().zip(&values) {
                let name = s.node_name(tv.node);
                writeln!(text, "{name}{sep}{}{sep}{}", out.value(&tv.time), out.value(value))?;
            }
        }
    }
    Ok(text)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
