use std::fs;
use std::path::{Path, PathBuf};

use super::csv_io::{fmt_num, write_curve_csv, write_records, write_text, write_trajectory_csv};
use super::{cumulative_curve, density_curve, find_peaks, subset_mean, CurveReport, SubsetSpec};
use crate::bound::build_system;
use crate::dynamics::{
    integrate_icsis, integrate_sis, linearized_solution, Model, TimeGrid, Trajectory, DEFAULT_DT,
    DEFAULT_T_MAX,
};
use crate::error::{Error, Result};
use crate::gompertz::{net_gompertz_params, NetGompertzParams, ScalarPair};
use crate::graph::{load_graph_files, Graph, GraphStats};
use crate::params::EpidemicParams;
use crate::spectral::{classify_regime, decompose, threshold_tau, SpectralData};

/// Settings for one experiment run, read from a flat `key=value` file and/or
/// command-line overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub graph: Option<PathBuf>,
    pub attributes: Option<PathBuf>,
    pub models: Vec<Model>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub p: Option<f64>,
    pub t_max: f64,
    pub dt: f64,
    pub subsets: Vec<SubsetSpec>,
    pub outdir: PathBuf,
    pub analytic_density: bool,
    pub prominence: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            graph: None,
            attributes: None,
            models: Vec::new(),
            beta: None,
            gamma: None,
            p: None,
            t_max: DEFAULT_T_MAX,
            dt: DEFAULT_DT,
            subsets: Vec::new(),
            outdir: PathBuf::from("out"),
            analytic_density: false,
            prominence: 0.0,
        }
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("`{key}` expects a number, got `{value}`")))
}

impl ExperimentConfig {
    /// Parses `key=value` lines; `#` starts a comment line. Relative paths
    /// are resolved against `base_dir` when given.
    pub fn parse(text: &str, base_dir: Option<&Path>) -> Result<Self> {
        let mut config = Self::default();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::load(k + 1, format!("expected key=value, got `{line}`")))?;
            config
                .set(key.trim(), value.trim())
                .map_err(|e| Error::load(k + 1, e.to_string()))?;
        }
        if let Some(base) = base_dir {
            for path in [&mut config.graph, &mut config.attributes].into_iter().flatten() {
                if path.is_relative() {
                    *path = base.join(&*path);
                }
            }
            if config.outdir.is_relative() && text.lines().any(|l| l.trim_start().starts_with("outdir")) {
                config.outdir = base.join(&config.outdir);
            }
        }
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::from(e).in_file(path))?;
        Self::parse(&text, path.parent()).map_err(|e| e.in_file(path))
    }

    /// Applies one setting; used by both the file parser and CLI overrides.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "graph" => self.graph = Some(PathBuf::from(value)),
            "attributes" => self.attributes = Some(value).filter(|v| !v.is_empty()).map(PathBuf::from),
            "models" => {
                self.models = value
                    .split(',')
                    .map(str::trim)
                    .filter(|m| !m.is_empty())
                    .map(str::parse)
                    .collect::<Result<_>>()?
            }
            "beta" => self.beta = Some(parse_f64(key, value)?),
            "gamma" => self.gamma = Some(parse_f64(key, value)?),
            "p" => self.p = Some(parse_f64(key, value)?),
            "t_max" => self.t_max = parse_f64(key, value)?,
            "dt" => self.dt = parse_f64(key, value)?,
            "subsets" => self.subsets = SubsetSpec::parse_list(value)?,
            "outdir" => self.outdir = PathBuf::from(value),
            "analytic_density" => {
                self.analytic_density = matches!(value, "1" | "true" | "yes");
            }
            "prominence" => self.prominence = parse_f64(key, value)?,
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    pub fn params(&self) -> Result<EpidemicParams> {
        match (self.beta, self.gamma, self.p) {
            (Some(beta), Some(gamma), Some(p)) => EpidemicParams::new(beta, gamma, p),
            _ => Err(Error::Config("beta, gamma and p are required".into())),
        }
    }

    pub fn grid(&self) -> Result<TimeGrid> {
        TimeGrid::new(self.t_max, self.dt)
    }
}

/// Files and curves produced by [`run_experiment`].
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub files: Vec<PathBuf>,
    pub curves: Vec<(Model, CurveReport)>,
    pub trajectories: Vec<Trajectory>,
}

/// Loads the graph, evaluates every requested model and writes the CSV
/// outputs into `config.outdir`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    if config.models.is_empty() {
        return Err(Error::Config("no models selected".into()));
    }
    let graph_path = config
        .graph
        .as_deref()
        .ok_or_else(|| Error::Config("no graph file given".into()))?;
    let params = config.params()?;
    let grid = config.grid()?;
    let graph = load_graph_files(graph_path, config.attributes.as_deref())?;
    let spectral = decompose(&graph)?;

    fs::create_dir_all(&config.outdir)?;
    let out = |name: &str| config.outdir.join(name);
    let mut files = Vec::new();

    let stats = GraphStats::compute(&graph, &spectral);
    write_stats(&out("stats.csv"), &stats)?;
    files.push(out("stats.csv"));

    write_regime(&out("regime.txt"), &spectral, &params)?;
    files.push(out("regime.txt"));

    let gompertz = if params.gamma() > 0.0 {
        let gp = net_gompertz_params(&spectral, &params)?;
        write_gompertz_params(&out("gompertz_params.csv"), &graph, &gp)?;
        files.push(out("gompertz_params.csv"));
        Some(gp)
    } else {
        None
    };

    let mut subsets = vec![None];
    subsets.extend(config.subsets.iter().cloned().map(Some));
    subsets.extend(SubsetSpec::from_attributes(&graph).into_iter().map(Some));
    for subset in subsets.iter().flatten() {
        subset.resolve(&graph)?;
    }

    let times = grid.times();
    let mut curves = Vec::new();
    let mut trajectories = Vec::new();
    for &model in &config.models {
        let trajectory = match model {
            Model::Sis => integrate_sis(&graph, &params, grid)?,
            Model::IcSis => {
                let info = integrate_icsis(&graph, &params, grid)?;
                let raw = Trajectory {
                    model: Model::IcSis,
                    times: info.times.clone(),
                    values: info.values.clone(),
                };
                let path = out("icsis_surprisal_nodes.csv");
                write_trajectory_csv(&path, &raw, graph.labels())?;
                files.push(path);
                info.to_probability()
            }
            Model::Bound => build_system(&spectral, &params).bound_probability(&times)?,
            Model::Linearized => linearized_solution(&spectral, &params, &times),
            Model::Gompertz => {
                let gp = gompertz.as_ref().ok_or_else(|| {
                    Error::InvalidParams("the Gompertz model needs gamma > 0".into())
                })?;
                gp.net_gompertz_susceptible(&times)?.infected
            }
        };
        let path = out(&format!("{model}_nodes.csv"));
        write_trajectory_csv(&path, &trajectory, graph.labels())?;
        files.push(path);

        let analytic = match (model, config.analytic_density, &gompertz) {
            (Model::Gompertz, true, Some(gp)) => Some(gp.infected_density(&times)?),
            _ => None,
        };
        for subset in &subsets {
            let mut report = density_curve(cumulative_curve(&trajectory, &graph, subset.as_ref())?)?;
            if let Some(density) = &analytic {
                let indices = match subset {
                    Some(s) => s.resolve(&graph)?,
                    None => (0..graph.n()).collect(),
                };
                report.density = Some(subset_mean(density, &indices)?);
            }
            let density = report.density.as_deref().unwrap_or_default();
            report.peaks = find_peaks(&report.times, density, config.prominence);

            let stem = format!("{model}_{}", report.name);
            let cum_path = out(&format!("{stem}_cumulative.csv"));
            write_curve_csv(&cum_path, &report.times, &report.cumulative, "mean")?;
            let den_path = out(&format!("{stem}_density.csv"));
            write_curve_csv(&den_path, &report.times, density, "mean")?;
            let peak_path = out(&format!("{stem}_peaks.csv"));
            write_records(
                &peak_path,
                &["t", "height", "prominence"],
                report
                    .peaks
                    .iter()
                    .map(|p| [fmt_num(p.t), fmt_num(p.height), fmt_num(p.prominence)]),
            )?;
            files.extend([cum_path, den_path, peak_path]);
            curves.push((model, report));
        }
        trajectories.push(trajectory);
    }

    Ok(ExperimentOutput {
        files,
        curves,
        trajectories,
    })
}

fn opt_num(v: Option<f64>) -> String {
    v.map_or_else(|| "undefined".to_string(), fmt_num)
}

/// `property,value` table of the graph descriptors.
pub fn write_stats(path: &Path, stats: &GraphStats) -> Result<()> {
    let rows = [
        ("n", stats.n.to_string()),
        ("m", stats.m.to_string()),
        ("delta", fmt_num(stats.delta)),
        ("lbar", fmt_num(stats.lbar)),
        ("cbar", fmt_num(stats.cbar)),
        ("rho", opt_num(stats.rho)),
        ("lambda1", fmt_num(stats.lambda1)),
        ("r", opt_num(stats.r)),
        ("kmin", stats.kmin.to_string()),
        ("kmax", stats.kmax.to_string()),
        ("bipartite", stats.bipartite.to_string()),
    ];
    write_records(path, &["property", "value"], rows.iter().map(|(k, v)| [*k, v.as_str()]))
}

/// Human-readable threshold summary.
pub fn regime_summary(spectral: &SpectralData, params: &EpidemicParams) -> Result<String> {
    let th = threshold_tau(spectral, params);
    let regime = classify_regime(spectral, params)?;
    let beta_e = params.beta_e().map_or_else(|| "undefined".to_string(), fmt_num);
    Ok(format!(
        "lambda1={}\np={}\nq={}\nbeta_e={beta_e}\ntau={}\nq_tau={}\nregime={regime}\n",
        fmt_num(spectral.lambda1()),
        fmt_num(params.p()),
        fmt_num(params.q()),
        fmt_num(th.tau),
        fmt_num(th.q_tau),
    ))
}

pub fn write_regime(path: &Path, spectral: &SpectralData, params: &EpidemicParams) -> Result<()> {
    write_text(path, &regime_summary(spectral, params)?)
}

/// `label,P,Q,R,t_inflection,zeta1,s_inf`; inflection left empty outside
/// the Gompertz regime.
pub fn write_gompertz_params(path: &Path, graph: &Graph, gp: &NetGompertzParams) -> Result<()> {
    let inflection = gp.inflection_times().ok();
    write_records(
        path,
        &["label", "P", "Q", "R", "t_inflection", "zeta1", "s_inf"],
        (0..graph.n()).map(|i| {
            [
                graph.label(i).to_string(),
                fmt_num(gp.carrying[i]),
                fmt_num(gp.shape[i]),
                fmt_num(gp.rate),
                inflection.as_ref().map_or_else(String::new, |t| fmt_num(t[i])),
                fmt_num(gp.zeta1[i]),
                fmt_num(gp.s_inf[i]),
            ]
        }),
    )
}

/// Worst per-node violations of `x <= x_hat <= x_bar` over a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderingReport {
    /// `max_t (x_i - x_hat_i)`; positive means the bound was violated.
    pub sis_over_bound: Vec<f64>,
    /// `max_t (x_hat_i - x_bar_i)`.
    pub bound_over_linearized: Vec<f64>,
}

impl OrderingReport {
    pub fn worst_sis_over_bound(&self) -> f64 {
        self.sis_over_bound.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn worst_bound_over_linearized(&self) -> f64 {
        self.bound_over_linearized
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn write_csv(&self, path: &Path, graph: &Graph) -> Result<()> {
        write_records(
            path,
            &["label", "max_sis_minus_bound", "max_bound_minus_linearized"],
            (0..graph.n()).map(|i| {
                [
                    graph.label(i).to_string(),
                    fmt_num(self.sis_over_bound[i]),
                    fmt_num(self.bound_over_linearized[i]),
                ]
            }),
        )
    }
}

pub fn compare_ordering(
    graph: &Graph,
    spectral: &SpectralData,
    params: &EpidemicParams,
    grid: TimeGrid,
) -> Result<OrderingReport> {
    let times = grid.times();
    let sis = integrate_sis(graph, params, grid)?;
    let bound = build_system(spectral, params).bound_probability(&times)?;
    let linear = linearized_solution(spectral, params, &times);
    let n = graph.n();
    let mut sis_over_bound = vec![f64::NEG_INFINITY; n];
    let mut bound_over_linearized = vec![f64::NEG_INFINITY; n];
    for k in 0..times.len() {
        for i in 0..n {
            sis_over_bound[i] = sis_over_bound[i].max(sis.values[k][i] - bound.values[k][i]);
            bound_over_linearized[i] =
                bound_over_linearized[i].max(bound.values[k][i] - linear.values[k][i]);
        }
    }
    Ok(OrderingReport {
        sis_over_bound,
        bound_over_linearized,
    })
}

/// Scalar logistic (mean-field SIS) and Gompertz curves with their
/// inflection points.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarFig1 {
    pub pair: ScalarPair,
    pub times: Vec<f64>,
    pub logistic: Vec<f64>,
    pub gompertz: Vec<f64>,
    pub logistic_density: Vec<f64>,
    pub gompertz_density: Vec<f64>,
}

pub fn scalar_fig1(n0: f64, beta: f64, gamma: f64, t_min: f64, t_max: f64, dt: f64) -> Result<ScalarFig1> {
    let pair = ScalarPair::from_rates(beta, gamma, n0)?;
    let grid = TimeGrid::new(t_max - t_min, dt)?;
    let times: Vec<f64> = grid.times().into_iter().map(|t| t + t_min).collect();
    Ok(ScalarFig1 {
        logistic: times.iter().map(|&t| pair.logistic.value(t)).collect(),
        gompertz: times.iter().map(|&t| pair.gompertz.value(t)).collect(),
        logistic_density: times.iter().map(|&t| pair.logistic.density(t)).collect(),
        gompertz_density: times.iter().map(|&t| pair.gompertz.density(t)).collect(),
        pair,
        times,
    })
}

impl ScalarFig1 {
    /// Writes `fig1_curves.csv` and `fig1_inflection.csv` into `outdir`.
    pub fn write(&self, outdir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(outdir)?;
        let curves = outdir.join("fig1_curves.csv");
        write_records(
            &curves,
            &["t", "logistic", "gompertz", "logistic_density", "gompertz_density"],
            (0..self.times.len()).map(|k| {
                [
                    fmt_num(self.times[k]),
                    fmt_num(self.logistic[k]),
                    fmt_num(self.gompertz[k]),
                    fmt_num(self.logistic_density[k]),
                    fmt_num(self.gompertz_density[k]),
                ]
            }),
        )?;
        let inflection = outdir.join("fig1_inflection.csv");
        let (tl, vl) = self.pair.logistic.inflection();
        let (tg, vg) = self.pair.gompertz.inflection();
        write_records(
            &inflection,
            &["model", "t", "value"],
            [
                ["logistic".to_string(), fmt_num(tl), fmt_num(vl)],
                ["gompertz".to_string(), fmt_num(tg), fmt_num(vg)],
            ],
        )?;
        Ok(vec![curves, inflection])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parsing() {
        let text = "# recipe\ngraph = g.txt\nmodels = sis, bound\nbeta=0.03\ngamma=0.02\np=0.0121951\n\
                    t_max=120\ndt=0.05\nsubsets=b1:a,b;b2:c\n";
        let c = ExperimentConfig::parse(text, Some(Path::new("/data"))).unwrap();
        assert_eq!(c.graph.as_deref(), Some(Path::new("/data/g.txt")));
        assert_eq!(c.models, vec![Model::Sis, Model::Bound]);
        assert_eq!(c.subsets.len(), 2);
        assert_eq!(c.outdir, PathBuf::from("out"));
        assert!((c.params().unwrap().beta_e().unwrap() - 1.5).abs() < 1e-12);
        assert_eq!(c.grid().unwrap().steps(), 2400);
    }

    #[test]
    fn config_errors_name_the_line() {
        let err = ExperimentConfig::parse("beta=0.1\nbogus=1\n", None).unwrap_err();
        assert!(matches!(err, Error::Load { line: 2, .. }), "{err}");
        assert!(ExperimentConfig::parse("beta=abc", None).is_err());
        assert!(ExperimentConfig::parse("models=sis,seir", None).is_err());
        assert!(ExperimentConfig::parse("just text", None).is_err());
    }

    #[test]
    fn no_models_is_an_error() {
        let config = ExperimentConfig {
            graph: Some(PathBuf::from("missing.txt")),
            beta: Some(0.1),
            gamma: Some(0.1),
            p: Some(0.1),
            ..Default::default()
        };
        let err = run_experiment(&config).unwrap_err();
        assert!(err.to_string().contains("no models selected"));
    }

    #[test]
    fn fig1_inflections() {
        let fig = scalar_fig1(0.1, 0.2, 0.04, -20.0, 60.0, 0.01).unwrap();
        let (tl, vl) = fig.pair.logistic.inflection();
        let (tg, vg) = fig.pair.gompertz.inflection();
        assert!((tl - 12.16).abs() < 0.01 && (vl - 0.4).abs() < 1e-12);
        assert!((tg - 4.57).abs() < 0.01 && (vg - 0.2943).abs() < 5e-4);
        assert_eq!(fig.times.len(), 8001);
    }
}
