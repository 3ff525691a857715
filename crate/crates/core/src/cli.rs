//! Command-line front end. Exit codes: 0 success, 1 I/O failure, 2 invalid
//! input.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::analysis::{epsilon_pairwise, epsilon_percentiles, mean_rank, RunRecord};
use crate::baselines::BaselineParams;
use crate::domain::{SearchOutcome, TracePoint};
use crate::error::{Result, UvpError};
use crate::instances::{
    load_tabular, write_tabular, HardInstanceSpec, HardVariant, LandscapeKind, LoadOptions,
};
use crate::runner::{run_algorithm, Algorithm, Instance, Sampling};
use crate::solvers::{Predictor, SolverParams};

#[derive(Debug, Parser)]
#[command(name = "uvp", version, about = "Budgeted probing of configurations with unknown value curves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one algorithm on one instance.
    Solve(SolveArgs),
    /// Run instances x algorithms x seeds and aggregate mean ranks.
    Bench(BenchArgs),
    /// Estimate pairwise smoothness constants of a tabular benchmark.
    EstimateEps(EpsArgs),
    /// Materialize an instance as a tabular CSV.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Args)]
pub struct InstanceArgs {
    /// Analytic landscape (radial-decay, off-centre-peak, cosine-ring, radial-ripples, double-rings, multimodal-bumps).
    #[arg(long)]
    pub landscape: Vec<LandscapeKind>,
    /// Adversarial clustered instance (fc or ac).
    #[arg(long)]
    pub hard: Vec<HardVariant>,
    /// Long-format learning-curve table.
    #[arg(long)]
    pub tabular: Vec<PathBuf>,
    /// Landscape sample size, or configurations per cluster for hard instances.
    #[arg(long)]
    pub n: Option<usize>,
    /// Use an m-per-dimension mesh instead of uniform samples for landscapes.
    #[arg(long)]
    pub mesh: Option<usize>,
    /// Seed for sampling and instance layout; defaults to --seed.
    #[arg(long)]
    pub instance_seed: Option<u64>,
    #[arg(long, default_value_t = 2.0)]
    pub beta: f64,
    /// Clusters are sized from k; see the hard instance documentation.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 0.5)]
    pub r: f64,
    /// Decoy plateau fraction for `--hard ac`.
    #[arg(long, default_value_t = 0.5)]
    pub hard_theta: f64,
    /// Keep tabular embeddings as written instead of min-max normalizing them.
    #[arg(long)]
    pub raw_coords: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    /// Total budget B; defaults to 20 T.
    #[arg(long)]
    pub budget: Option<usize>,
    /// Per-configuration horizon T; defaults to the instance horizon (1 for generated instances).
    #[arg(long)]
    pub horizon: Option<usize>,
    #[arg(long, default_value_t = 25)]
    pub p: usize,
    #[arg(long, default_value_t = 0.2)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    #[arg(long, default_value_t = 0.3)]
    pub theta: f64,
    #[arg(long, default_value_t = 3)]
    pub eta: usize,
    /// Hyperband brackets.
    #[arg(long, default_value_t = 6)]
    pub iterations: usize,
    #[arg(long, default_value_t = Predictor::TailFit)]
    pub predictor: Predictor,
    #[arg(long, default_value_t = crate::clustering::DEFAULT_ETA_CAP)]
    pub eta_cap: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub algo: Algorithm,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Comma-separated algorithm names.
    #[arg(long, value_delimiter = ',', required = true)]
    pub algos: Vec<Algorithm>,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub seeds: Vec<u64>,
    /// Budget fractions for the rank table.
    #[arg(long, value_delimiter = ',', default_values_t = (1..=10).map(|i| i as f64 / 10.0).collect::<Vec<_>>())]
    pub fractions: Vec<f64>,
    /// Worker threads; defaults to the number of logical cores.
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct EpsArgs {
    #[arg(long)]
    pub tabular: PathBuf,
    /// Centers used for the clustering radius.
    #[arg(long, default_value_t = 20)]
    pub k: usize,
    #[arg(long, value_delimiter = ',', default_values_t = crate::analysis::DEFAULT_ALPHAS.to_vec())]
    pub alphas: Vec<f64>,
    #[arg(long)]
    pub raw_coords: bool,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long, default_value_t = 1)]
    pub horizon: usize,
    /// Smoothness constant of the hard construction.
    #[arg(long, default_value_t = 0.2)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Destination file; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_io() {
                1
            } else {
                2
            }
        }
    }
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Solve(a) => cmd_solve(&a),
        Command::Bench(a) => cmd_bench(&a),
        Command::EstimateEps(a) => cmd_estimate_eps(&a),
        Command::Gen(a) => cmd_gen(&a),
    }
}

impl InstanceArgs {
    fn count(&self) -> usize {
        self.landscape.len() + self.hard.len() + self.tabular.len()
    }

    fn check_single(&self) -> Result<()> {
        if self.count() != 1 {
            return Err(UvpError::InvalidParams(format!(
                "exactly one of --landscape, --hard, --tabular is required, got {}",
                self.count()
            )));
        }
        Ok(())
    }

    fn build(&self, horizon: Option<usize>, epsilon: f64, seed: u64) -> Result<Vec<Instance>> {
        let seed = self.instance_seed.unwrap_or(seed);
        let t = horizon.unwrap_or(1);
        let mut out = Vec::with_capacity(self.count());
        for &kind in &self.landscape {
            let sampling = match self.mesh {
                Some(m) => Sampling::Mesh { m },
                None => Sampling::Uniform {
                    n: self.n.unwrap_or(10_000),
                    seed,
                },
            };
            out.push(Instance::landscape(kind, sampling, seed, t)?);
        }
        for &variant in &self.hard {
            out.push(Instance::hard(&HardInstanceSpec {
                variant,
                epsilon,
                beta: self.beta,
                theta_frac: self.hard_theta,
                k: self.k,
                n_per_cluster: self.n.unwrap_or(50),
                r: self.r,
                horizon: t,
                seed,
            })?);
        }
        for path in &self.tabular {
            out.push(Instance::tabular(path, LoadOptions { normalize: !self.raw_coords })?);
        }
        Ok(out)
    }
}

impl SolverArgs {
    fn params(&self, horizon: usize) -> SolverParams {
        SolverParams {
            budget: self.budget.unwrap_or(20 * horizon),
            horizon,
            p: self.p,
            epsilon: self.epsilon,
            delta: self.delta,
            theta: self.theta,
            predictor: self.predictor,
            eta_cap: self.eta_cap,
        }
    }

    fn baseline(&self, seed: u64) -> BaselineParams {
        BaselineParams {
            eta: self.eta,
            seed,
            iterations: self.iterations,
        }
    }

    /// Checks everything that does not depend on the instance.
    fn prevalidate(&self) -> Result<()> {
        self.params(self.horizon.unwrap_or(1)).validate()?;
        self.baseline(0).validate()
    }
}

fn write_trace(path: &Path, trace: &[TracePoint]) -> Result<()> {
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
    w.write_record(["spent", "incumbent"])?;
    for p in trace {
        w.write_record([p.spent.to_string(), p.incumbent.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

fn write_outcome(path: &Path, out: &SearchOutcome) -> Result<()> {
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
    w.write_record(["best_id", "best_value", "spent"])?;
    w.write_record([out.best.to_string(), out.best_value.to_string(), out.spent.to_string()])?;
    w.flush()?;
    Ok(())
}

pub fn cmd_solve(a: &SolveArgs) -> Result<()> {
    a.instance.check_single()?;
    a.solver.prevalidate()?;
    let inst = a
        .instance
        .build(a.solver.horizon, a.solver.epsilon, a.seed)?
        .pop()
        .expect("one instance");
    let horizon = a.solver.horizon.unwrap_or(inst.horizon());
    let params = a.solver.params(horizon);
    let out = run_algorithm(a.algo, &params, &a.solver.baseline(a.seed), &inst.points, inst.oracle.as_ref())?;
    fs::create_dir_all(&a.out)?;
    write_outcome(&a.out.join("outcome.csv"), &out)?;
    write_trace(&a.out.join("trace.csv"), &out.trace)?;
    println!("best={} value={} spent={}", out.best, out.best_value, out.spent);
    Ok(())
}

struct Cell {
    dataset: String,
    algorithm: Algorithm,
    seed: u64,
    result: Result<SearchOutcome>,
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

pub fn cmd_bench(a: &BenchArgs) -> Result<()> {
    if a.algos.is_empty() {
        return Err(UvpError::InvalidParams("empty algorithm list".into()));
    }
    if a.instance.count() == 0 {
        return Err(UvpError::InvalidParams("no instance given".into()));
    }
    if a.seeds.is_empty() {
        return Err(UvpError::InvalidParams("empty seed list".into()));
    }
    a.solver.prevalidate()?;
    let mut instances = a.instance.build(a.solver.horizon, a.solver.epsilon, 0)?;
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    for inst in &mut instances {
        let count = seen.entry(inst.name.clone()).or_insert(0);
        *count += 1;
        if *count > 1 {
            inst.name = format!("{}-{}", inst.name, count);
        }
    }

    let jobs: Vec<(usize, Algorithm, u64)> = (0..instances.len())
        .flat_map(|i| a.algos.iter().flat_map(move |&al| a.seeds.iter().map(move |&s| (i, al, s))))
        .collect();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = a.workers {
        pool = pool.num_threads(w);
    }
    let pool = pool
        .build()
        .map_err(|e| UvpError::InvalidParams(format!("thread pool: {e}")))?;
    let solver = &a.solver;
    let mut cells: Vec<Cell> = pool.install(|| {
        jobs.par_iter()
            .map(|&(i, algorithm, seed)| {
                let inst = &instances[i];
                let horizon = solver.horizon.unwrap_or(inst.horizon());
                let result = run_algorithm(
                    algorithm,
                    &solver.params(horizon),
                    &solver.baseline(seed),
                    &inst.points,
                    inst.oracle.as_ref(),
                );
                Cell {
                    dataset: inst.name.clone(),
                    algorithm,
                    seed,
                    result,
                }
            })
            .collect()
    });
    cells.sort_by(|x, y| (&x.dataset, x.algorithm.name(), x.seed).cmp(&(&y.dataset, y.algorithm.name(), y.seed)));

    let traces = a.out.join("traces");
    fs::create_dir_all(&traces)?;
    let mut failed_cells: BTreeMap<(String, u64), ()> = BTreeMap::new();
    let mut failures = csv::Writer::from_writer(BufWriter::new(File::create(a.out.join("failures.csv"))?));
    failures.write_record(["dataset", "algorithm", "seed", "error"])?;
    for c in &cells {
        match &c.result {
            Ok(out) => {
                let file = traces.join(format!("{}__{}__seed{}.csv", c.dataset, c.algorithm, c.seed));
                write_trace(&file, &out.trace)?;
            }
            Err(e) => {
                failures.write_record([c.dataset.clone(), c.algorithm.to_string(), c.seed.to_string(), e.to_string()])?;
                failed_cells.insert((c.dataset.clone(), c.seed), ());
            }
        }
    }
    failures.flush()?;

    let mut records = Vec::new();
    let mut best: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for c in &cells {
        if let Ok(out) = &c.result {
            best.entry(c.algorithm.name()).or_default().push(out.best_value);
            if !failed_cells.contains_key(&(c.dataset.clone(), c.seed)) {
                records.push(RunRecord {
                    dataset: c.dataset.clone(),
                    seed: c.seed,
                    algorithm: c.algorithm.to_string(),
                    cap: out.cap,
                    trace: out.trace.clone(),
                });
            }
        }
    }

    let mut summary = csv::Writer::from_writer(BufWriter::new(File::create(a.out.join("summary.csv"))?));
    summary.write_record(["algorithm", "runs", "mean_best", "std_best"])?;
    for (alg, values) in &best {
        let (m, s) = mean_std(values);
        summary.write_record([alg.to_string(), values.len().to_string(), m.to_string(), s.to_string()])?;
    }
    summary.flush()?;

    let table = mean_rank(&records, &a.fractions)?;
    table.write_csv(BufWriter::new(File::create(a.out.join("mean_rank.csv"))?))?;

    if !failed_cells.is_empty() {
        return Err(UvpError::InvalidParams(format!(
            "{} run(s) failed; see failures.csv",
            cells.iter().filter(|c| c.result.is_err()).count()
        )));
    }
    Ok(())
}

pub fn cmd_estimate_eps(a: &EpsArgs) -> Result<()> {
    let bench = load_tabular(&a.tabular, LoadOptions { normalize: !a.raw_coords })?;
    let report = epsilon_pairwise(&bench);
    for &(i, j) in &report.skipped {
        eprintln!(
            "warning: configurations '{}' and '{}' share an embedding; pair skipped",
            bench.names[i], bench.names[j]
        );
    }
    let report = epsilon_percentiles(report, &bench.configs, a.k, &a.alphas)?;
    fs::create_dir_all(&a.out)?;
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(a.out.join("epsilon.csv"))?));
    w.write_record(["alpha", "value"])?;
    for (alpha, v) in &report.percentiles {
        w.write_record([alpha.to_string(), v.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn cmd_gen(a: &GenArgs) -> Result<()> {
    a.instance.check_single()?;
    if !a.instance.tabular.is_empty() {
        return Err(UvpError::InvalidParams("gen materializes --landscape or --hard instances".into()));
    }
    let inst = a
        .instance
        .build(Some(a.horizon), a.epsilon, a.seed)?
        .pop()
        .expect("one instance");
    match &a.output {
        Some(path) => {
            let file = BufWriter::new(File::create(path)?);
            write_tabular(file, &inst.points, inst.oracle.as_ref(), a.horizon, None)
        }
        None => write_tabular(io::stdout().lock(), &inst.points, inst.oracle.as_ref(), a.horizon, None),
    }?;
    io::stdout().flush()?;
    Ok(())
}
