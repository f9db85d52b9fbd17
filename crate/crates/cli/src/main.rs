use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use netgompertz::analysis::{
    compare_ordering, regime_summary, run_experiment, scalar_fig1, write_gompertz_params,
    write_regime, write_stats, ExperimentConfig,
};
use netgompertz::{
    decompose, load_graph_files, net_gompertz_params, EpidemicParams, Error, GraphStats, Model,
    TimeGrid,
};

#[derive(Debug, Parser)]
#[command(name = "netgompertz", version, about = "Networked SIS simulation and its Gompertz bound")]
struct Cli {
    /// Directory for all output files.
    #[arg(long, global = true, default_value = "out")]
    outdir: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GraphArgs {
    /// Edge list, one `labelA labelB` pair per line.
    graph: PathBuf,
    /// CSV with header `label,sex,group`.
    #[arg(long)]
    attributes: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RateArgs {
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    gamma: f64,
    #[arg(long)]
    p: f64,
}

impl RateArgs {
    fn params(&self) -> netgompertz::Result<EpidemicParams> {
        EpidemicParams::new(self.beta, self.gamma, self.p)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Topological descriptors of a graph.
    Stats(GraphArgs),
    /// Evaluate one or more models and write per-node, mean, density and peak CSVs.
    Simulate(SimulateArgs),
    /// Per-node worst violation of x <= x_hat <= x_bar.
    Compare {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        rates: RateArgs,
        #[arg(long, default_value_t = 50.0)]
        t_max: f64,
        #[arg(long, default_value_t = 0.01)]
        dt: f64,
    },
    /// Threshold tau, the Gompertz boundary q*tau and the regime.
    Threshold {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        rates: RateArgs,
    },
    /// Networked Gompertz parameters and per-node inflection times.
    Inflection {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        rates: RateArgs,
    },
    /// Scalar logistic vs Gompertz curves.
    Scalar(ScalarArgs),
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Edge list; may come from --config instead.
    graph: Option<PathBuf>,
    #[arg(long)]
    attributes: Option<PathBuf>,
    /// key=value experiment file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Models to evaluate: sis, icsis, bound, linearized, gompertz.
    #[arg(long = "model", value_delimiter = ',')]
    models: Vec<Model>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    /// Subsets as `name:a,b,c;name2:d,e`.
    #[arg(long)]
    subsets: Option<String>,
    /// Use the closed-form density for the gompertz model.
    #[arg(long)]
    analytic_density: bool,
    #[arg(long)]
    prominence: Option<f64>,
}

#[derive(Debug, Args)]
struct ScalarArgs {
    /// Use the reference setting N0 = 0.1, beta = 0.2, gamma = 0.04.
    #[arg(long)]
    fig1: bool,
    #[arg(long, default_value_t = 0.1)]
    n0: f64,
    #[arg(long, default_value_t = 0.2)]
    beta: f64,
    #[arg(long, default_value_t = 0.04)]
    gamma: f64,
    #[arg(long, default_value_t = -20.0, allow_hyphen_values = true)]
    t_min: f64,
    #[arg(long, default_value_t = 60.0)]
    t_max: f64,
    #[arg(long, default_value_t = 0.01)]
    dt: f64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}

fn report(files: &[PathBuf]) {
    for f in files {
        println!("wrote {}", f.display());
    }
}

fn ensure_dir(dir: &Path) -> netgompertz::Result<()> {
    std::fs::create_dir_all(dir).map_err(Error::from)
}

fn run(cli: Cli) -> netgompertz::Result<()> {
    let outdir = cli.outdir;
    match cli.command {
        Command::Stats(g) => {
            let graph = load_graph_files(&g.graph, g.attributes.as_deref())?;
            let spectral = decompose(&graph)?;
            let stats = GraphStats::compute(&graph, &spectral);
            ensure_dir(&outdir)?;
            let path = outdir.join("stats.csv");
            write_stats(&path, &stats)?;
            let fmt = |v: Option<f64>| v.map_or("undefined".to_string(), |x| format!("{x:.4}"));
            println!("n         {}", stats.n);
            println!("m         {}", stats.m);
            println!("delta     {:.4}", stats.delta);
            println!("lbar      {:.3}", stats.lbar);
            println!("cbar      {:.4}", stats.cbar);
            println!("rho       {}", fmt(stats.rho));
            println!("lambda1   {:.4}", stats.lambda1);
            println!("r         {}", fmt(stats.r));
            println!("kmin      {}", stats.kmin);
            println!("bipartite {}", stats.bipartite);
            report(&[path]);
        }
        Command::Simulate(args) => {
            let mut config = match &args.config {
                Some(path) => ExperimentConfig::from_file(path)?,
                None => ExperimentConfig::default(),
            };
            config.outdir = outdir;
            if let Some(g) = args.graph {
                config.graph = Some(g);
            }
            if let Some(a) = args.attributes {
                config.attributes = Some(a);
            }
            if !args.models.is_empty() {
                config.models = args.models;
            }
            config.beta = args.beta.or(config.beta);
            config.gamma = args.gamma.or(config.gamma);
            config.p = args.p.or(config.p);
            config.t_max = args.t_max.unwrap_or(config.t_max);
            config.dt = args.dt.unwrap_or(config.dt);
            if let Some(s) = args.subsets {
                config.set("subsets", &s)?;
            }
            config.analytic_density |= args.analytic_density;
            config.prominence = args.prominence.unwrap_or(config.prominence);
            let output = run_experiment(&config)?;
            report(&output.files);
        }
        Command::Compare {
            graph: g,
            rates,
            t_max,
            dt,
        } => {
            let graph = load_graph_files(&g.graph, g.attributes.as_deref())?;
            let spectral = decompose(&graph)?;
            let params = rates.params()?;
            let ordering = compare_ordering(&graph, &spectral, &params, TimeGrid::new(t_max, dt)?)?;
            ensure_dir(&outdir)?;
            let path = outdir.join("compare.csv");
            ordering.write_csv(&path, &graph)?;
            println!("max(x - x_hat)     {:.3e}", ordering.worst_sis_over_bound());
            println!("max(x_hat - x_bar) {:.3e}", ordering.worst_bound_over_linearized());
            report(&[path]);
        }
        Command::Threshold { graph: g, rates } => {
            let graph = load_graph_files(&g.graph, g.attributes.as_deref())?;
            let spectral = decompose(&graph)?;
            let params = rates.params()?;
            print!("{}", regime_summary(&spectral, &params)?);
            ensure_dir(&outdir)?;
            let path = outdir.join("regime.txt");
            write_regime(&path, &spectral, &params)?;
            report(&[path]);
        }
        Command::Inflection { graph: g, rates } => {
            let graph = load_graph_files(&g.graph, g.attributes.as_deref())?;
            let spectral = decompose(&graph)?;
            let params = rates.params()?;
            let gp = net_gompertz_params(&spectral, &params)?;
            let times = gp.inflection_times()?;
            println!("regime {}  R = {:.6}", gp.regime, gp.rate);
            for (i, t) in times.iter().enumerate() {
                println!("{:<12} Q = {:.6e}  t = {:.4}", graph.label(i), gp.shape[i], t);
            }
            ensure_dir(&outdir)?;
            let path = outdir.join("gompertz_params.csv");
            write_gompertz_params(&path, &graph, &gp)?;
            report(&[path]);
        }
        Command::Scalar(args) => {
            let (n0, beta, gamma) = if args.fig1 {
                (0.1, 0.2, 0.04)
            } else {
                (args.n0, args.beta, args.gamma)
            };
            let fig = scalar_fig1(n0, beta, gamma, args.t_min, args.t_max, args.dt)?;
            let (tl, vl) = fig.pair.logistic.inflection();
            let (tg, vg) = fig.pair.gompertz.inflection();
            println!("logistic inflection  t = {tl:.4}  N = {vl:.4}");
            println!("gompertz inflection  t = {tg:.4}  N = {vg:.4}");
            report(&fig.write(&outdir)?);
        }
    }
    Ok(())
}
