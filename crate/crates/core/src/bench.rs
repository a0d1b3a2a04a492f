//! Benchmark rows shared by the command-line tool and the acceptance suite.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::format::Instance;
use crate::oracle::{generate_instance, oracle_dispatch_counted, GenConfig};
use crate::{Counters, Dispatcher, Result, Stabbing};

pub const CSV_HEADER: &str = "algo,n,m,queries,build_ops,build_nodes,query_ops_mean,query_ops_p99,ns_per_query";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algo {
    Sweep,
    Fast,
    Oracle,
}

impl FromStr for Algo {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "sweep" => Ok(Self::Sweep),
            "fast" => Ok(Self::Fast),
            "oracle" => Ok(Self::Oracle),
            _ => Err(format!("unknown algorithm {s:?} (sweep, fast, oracle)")),
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Sweep => "sweep",
            Self::Fast => "fast",
            Self::Oracle => "oracle",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub algo: Algo,
    pub n: usize,
    pub m: usize,
    pub queries: usize,
    pub build_ops: u64,
    pub build_nodes: u64,
    pub query_ops_mean: f64,
    pub query_ops_p99: u64,
    pub ns_per_query: f64,
    /// Query-side totals over the batch.
    pub totals: Counters,
}

impl BenchRow {
    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{:.4},{},{:.1}",
            self.algo,
            self.n,
            self.m,
            self.queries,
            self.build_ops,
            self.build_nodes,
            self.query_ops_mean,
            self.query_ops_p99,
            self.ns_per_query
        )
    }

    pub fn comparisons_mean(&self) -> f64 {
        self.totals.comparisons as f64 / self.queries.max(1) as f64
    }
}

/// The size-ladder instance for `m` bridges: `n = 2m` vertices, random
/// hierarchy.
pub fn ladder_instance(m: usize, seed: u64, queries: usize) -> Instance {
    generate_instance(&GenConfig { seed, n: 2 * m, m, queries, ..GenConfig::default() })
}

/// Builds `algo` over `inst` and runs its queries.
pub fn run(algo: Algo, inst: &Instance) -> Result<BenchRow> {
    let tree = inst.tree()?;
    let bridges = inst.bridge_set(&tree)?;
    let (build, ops) = match algo {
        Algo::Sweep => measure(&Dispatcher::<crate::sweep::SweepIndex>::build(&tree, &bridges)?, inst)?,
        Algo::Fast => measure(&Dispatcher::<crate::fast::FastIndex>::build(&tree, &bridges)?, inst)?,
        Algo::Oracle => {
            let start = Instant::now();
            let mut per = Vec::with_capacity(inst.queries.len());
            let mut totals = Counters::new();
            for &(u, v) in &inst.queries {
                let mut c = Counters::new();
                oracle_dispatch_counted(&tree, &bridges, u, v, &mut c);
                per.push(c.query_ops());
                totals += c;
            }
            let build = Counters { nodes: (tree.n() + bridges.len()) as u64, ..Counters::new() };
            (build, (per, totals, start.elapsed().as_nanos()))
        }
    };
    let (mut per, totals, ns) = ops;
    let q = per.len();
    per.sort_unstable();
    let p99 = if q == 0 { 0 } else { per[(q * 99).div_ceil(100) - 1] };
    Ok(BenchRow {
        algo,
        n: inst.parents.len(),
        m: inst.bridges.len(),
        queries: q,
        build_ops: build.comparisons + build.probes + build.cascade_steps,
        build_nodes: build.nodes,
        query_ops_mean: if q == 0 { 0.0 } else { per.iter().sum::<u64>() as f64 / q as f64 },
        query_ops_p99: p99,
        ns_per_query: if q == 0 { 0.0 } else { ns as f64 / q as f64 },
        totals,
    })
}

type Batch = (Vec<u64>, Counters, u128);

fn measure<E: Stabbing>(d: &Dispatcher<E>, inst: &Instance) -> Result<(Counters, Batch)> {
    let build = d.build_counters();
    let start = Instant::now();
    let mut per = Vec::with_capacity(inst.queries.len());
    let mut totals = Counters::new();
    for &(u, v) in &inst.queries {
        let mut c = Counters::new();
        d.dispatch(u, v, &mut c)?;
        per.push(c.query_ops());
        totals += c;
    }
    Ok((build, (per, totals, start.elapsed().as_nanos())))
}

/// Least-squares fit of `y = a + b·x`; returns `(a, b, R²)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (a, b, r2)
}
