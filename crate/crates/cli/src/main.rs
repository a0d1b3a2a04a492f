use std::fs;
use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use bindispatch::bench::{ladder_instance, run, Algo, CSV_HEADER};
use bindispatch::format::Instance;
use bindispatch::model::{BridgeSet, ClassTree};
use bindispatch::oracle::{generate_instance, oracle_dispatch, GenConfig, TreeShape};
use bindispatch::{Answer, Counters, FastDispatcher, SweepDispatcher};
use clap::{Parser, Subcommand};

/// Binary method dispatch over a class hierarchy.
///
/// Instance files use 1-based vertex ids; answers name bridges by their
/// 0-based position in the file.
#[derive(Parser)]
#[command(name = "bindispatch", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a random instance.
    Gen {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value = "random")]
        shape: TreeShape,
        #[arg(long, default_value_t = 64)]
        queries: usize,
        #[arg(long, default_value_t = 0.3)]
        share_rate: f64,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build an index and print its counters.
    Build {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "fast", value_parser = engine)]
        algo: Algo,
    },
    /// Answer the instance's queries, one line each.
    Query {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "fast")]
        algo: Algo,
        /// Read `u v` lines from stdin instead of the embedded queries.
        #[arg(long)]
        stdin: bool,
    },
    /// Cross-check sweep, fast and oracle; exit 1 on any mismatch.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        /// Check every vertex pair instead of the embedded queries.
        #[arg(long)]
        all_pairs: bool,
    },
    /// Run the size ladder and write CSV.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "sweep,fast")]
        algos: Vec<Algo>,
        /// `2^a..2^b`, or a comma-separated list of sizes.
        #[arg(long, default_value = "2^10..2^16", value_parser = sizes)]
        sizes: Sizes,
        #[arg(long, default_value_t = 10_000)]
        queries: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV output file; stdout when absent.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Clone)]
struct Sizes(Vec<usize>);

fn size(s: &str) -> Result<usize, String> {
    match s.trim().split_once('^') {
        Some(("2", k)) => k.parse::<u32>().ok().filter(|&k| k < 32).map(|k| 1 << k).ok_or(format!("bad exponent in {s:?}")),
        Some(_) => Err(format!("only powers of two are supported: {s:?}")),
        None => s.trim().parse().map_err(|_| format!("bad size {s:?}")),
    }
}

fn sizes(s: &str) -> Result<Sizes, String> {
    if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (size(a)?, size(b)?);
        if !a.is_power_of_two() || a > b {
            return Err(format!("bad range {s:?}"));
        }
        return Ok(Sizes(std::iter::successors(Some(a), |&m| Some(m * 2)).take_while(|&m| m <= b).collect()));
    }
    s.split(',').map(size).collect::<Result<_, _>>().map(Sizes)
}

fn engine(s: &str) -> Result<Algo, String> {
    match s.parse()? {
        Algo::Oracle => Err("build needs an index: sweep or fast".into()),
        a => Ok(a),
    }
}

enum Failure {
    Mismatch(String),
    Usage(String),
    Malformed(String),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<bindispatch::Error> for Failure {
    fn from(e: bindispatch::Error) -> Self {
        Failure::Malformed(e.to_string())
    }
}

struct Loaded {
    inst: Instance,
    tree: ClassTree,
    bridges: BridgeSet,
}

fn load(path: &PathBuf) -> Result<Loaded, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let inst = Instance::parse(&text)?;
    let tree = inst.tree()?;
    let bridges = inst.bridge_set(&tree)?;
    Ok(Loaded { inst, tree, bridges })
}

enum Engine {
    Sweep(Box<SweepDispatcher>),
    Fast(Box<FastDispatcher>),
    Oracle,
}

impl Engine {
    fn new(algo: Algo, l: &Loaded) -> Result<Self, Failure> {
        Ok(match algo {
            Algo::Sweep => Engine::Sweep(Box::new(SweepDispatcher::build(&l.tree, &l.bridges)?)),
            Algo::Fast => Engine::Fast(Box::new(FastDispatcher::build(&l.tree, &l.bridges)?)),
            Algo::Oracle => Engine::Oracle,
        })
    }

    fn answer(&self, l: &Loaded, u: usize, v: usize, c: &mut Counters) -> Result<Answer, Failure> {
        Ok(match self {
            Engine::Sweep(d) => d.dispatch(u, v, c)?,
            Engine::Fast(d) => d.dispatch(u, v, c)?,
            Engine::Oracle => {
                l.tree.check_vertex(u)?;
                l.tree.check_vertex(v)?;
                oracle_dispatch(&l.tree, &l.bridges, u, v)
            }
        })
    }
}

fn stdin_queries(n: usize) -> Result<Vec<(usize, usize)>, Failure> {
    let mut out = Vec::new();
    for (i, line) in io::stdin().lock().lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let nums: Option<Vec<usize>> = line.split_whitespace().map(|t| t.parse().ok()).collect();
        match nums.as_deref().unwrap_or_default() {
            &[u, v] if (1..=n).contains(&u) && (1..=n).contains(&v) => out.push((u - 1, v - 1)),
            _ => return Err(Failure::Usage(format!("stdin line {}: expected `u v` with ids in 1..={n}", i + 1))),
        }
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match exec(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch(msg)) => {
            eprintln!("mismatch: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Malformed(msg)) => {
            eprintln!("malformed instance: {msg}");
            ExitCode::from(3)
        }
    }
}

fn exec(cmd: Cmd) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    match cmd {
        Cmd::Gen { seed, n, m, shape, queries, share_rate, out: path } => {
            if !(0.0..=1.0).contains(&share_rate) {
                return Err(Failure::Usage("--share-rate must lie in [0, 1]".into()));
            }
            let text = generate_instance(&GenConfig { seed, n, m, shape, share_rate, queries, ..GenConfig::default() }).to_text();
            match path {
                Some(p) => fs::write(p, text)?,
                None => out.write_all(text.as_bytes())?,
            }
        }
        Cmd::Build { input, algo } => {
            let l = load(&input)?;
            let start = Instant::now();
            let c = match Engine::new(algo, &l)? {
                Engine::Sweep(d) => d.build_counters(),
                Engine::Fast(d) => d.build_counters(),
                Engine::Oracle => unreachable!(),
            };
            let ms = start.elapsed().as_secs_f64() * 1e3;
            writeln!(out, "algo {algo}")?;
            writeln!(out, "n {}", l.tree.n())?;
            writeln!(out, "m {}", l.bridges.len())?;
            writeln!(out, "build_ops {}", c.query_ops())?;
            writeln!(out, "nodes {}", c.nodes)?;
            writeln!(out, "bytes {}", c.bytes)?;
            writeln!(out, "build_ms {ms:.1}")?;
        }
        Cmd::Query { input, algo, stdin } => {
            let l = load(&input)?;
            let queries = if stdin { stdin_queries(l.tree.n())? } else { l.inst.queries.clone() };
            let e = Engine::new(algo, &l)?;
            let mut c = Counters::new();
            for (u, v) in queries {
                writeln!(out, "{}", e.answer(&l, u, v, &mut c)?)?;
            }
        }
        Cmd::Verify { input, all_pairs } => {
            let l = load(&input)?;
            let n = l.tree.n();
            let queries: Vec<(usize, usize)> = if all_pairs {
                (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).collect()
            } else {
                l.inst.queries.clone()
            };
            let sweep = Engine::new(Algo::Sweep, &l)?;
            let fast = Engine::new(Algo::Fast, &l)?;
            let mut c = Counters::new();
            for &(u, v) in &queries {
                let want = Engine::Oracle.answer(&l, u, v, &mut c)?;
                let (s, f) = (sweep.answer(&l, u, v, &mut c)?, fast.answer(&l, u, v, &mut c)?);
                if s != want || f != want {
                    return Err(Failure::Mismatch(format!("query {} {}: oracle {want}, sweep {s}, fast {f}", u + 1, v + 1)));
                }
            }
            writeln!(out, "ok {} queries", queries.len())?;
        }
        Cmd::Bench { algos, sizes, queries, seed, csv } => {
            let mut text = format!("{CSV_HEADER}\n");
            for &m in &sizes.0 {
                let inst = ladder_instance(m, seed, queries);
                for &a in &algos {
                    let row = run(a, &inst)?;
                    eprintln!("{a} m={m}: {:.3} ops/query", row.query_ops_mean);
                    text.push_str(&row.csv());
                    text.push('\n');
                }
            }
            match csv {
                Some(p) => fs::write(p, text)?,
                None => out.write_all(text.as_bytes())?,
            }
        }
    }
    Ok(())
}
