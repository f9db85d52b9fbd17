//! Aggregation of trajectories into cumulative and density curves, peak
//! detection, CSV output and the experiment driver behind the CLI.

mod csv_io;
mod experiment;

pub use csv_io::{read_csv_columns, write_curve_csv, write_trajectory_csv, CsvTable};
pub use experiment::{
    compare_ordering, regime_summary, run_experiment, scalar_fig1, write_gompertz_params,
    write_regime, write_stats, ExperimentConfig, ExperimentOutput, OrderingReport, ScalarFig1,
};

use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::graph::{Graph, Sex};

/// Named set of nodes whose curves are averaged together.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetSpec {
    pub name: String,
    pub members: Vec<String>,
}

impl SubsetSpec {
    pub fn new(name: impl Into<String>, members: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Self {
            name: name.into(),
            members: members.into_iter().map(Into::into).collect(),
        }
    }

    /// Parses `name:label,label,...`.
    pub fn parse(text: &str) -> Result<Self> {
        let (name, members) = text
            .split_once(':')
            .ok_or_else(|| Error::Config(format!("subset `{text}` must look like name:a,b,c")))?;
        let members: Vec<String> = members
            .split(',')
            .map(str::trim)
            .filter(|m| !m.is_empty())
            .map(String::from)
            .collect();
        let name = name.trim();
        if name.is_empty() || members.is_empty() {
            return Err(Error::Config(format!("subset `{text}` needs a name and members")));
        }
        Ok(Self::new(name, members))
    }

    /// Parses `;`-separated subset definitions.
    pub fn parse_list(text: &str) -> Result<Vec<Self>> {
        text.split(';')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(Self::parse)
            .collect()
    }

    pub fn resolve(&self, graph: &Graph) -> Result<Vec<usize>> {
        if self.members.is_empty() {
            return Err(Error::InvalidParams(format!("subset `{}` is empty", self.name)));
        }
        self.members
            .iter()
            .map(|label| {
                graph.index_of(label).ok_or_else(|| {
                    Error::InvalidParams(format!("subset `{}`: unknown label `{label}`", self.name))
                })
            })
            .collect()
    }

    /// One subset per sex value and per group present in the attributes.
    pub fn from_attributes(graph: &Graph) -> Vec<Self> {
        let Some(attrs) = graph.attributes() else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for sex in [Sex::Female, Sex::Male] {
            let members: Vec<&str> = (0..graph.n())
                .filter(|&i| attrs[i].sex == Some(sex))
                .map(|i| graph.label(i))
                .collect();
            if !members.is_empty() {
                out.push(Self::new(format!("sex_{}", sex.as_str()), members));
            }
        }
        let mut groups: Vec<&str> = attrs.iter().filter_map(|a| a.group.as_deref()).collect();
        groups.sort_unstable();
        groups.dedup();
        for group in groups {
            let members: Vec<&str> = (0..graph.n())
                .filter(|&i| attrs[i].group.as_deref() == Some(group))
                .map(|i| graph.label(i))
                .collect();
            out.push(Self::new(format!("group_{group}"), members));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub t: f64,
    pub height: f64,
    pub prominence: f64,
}

/// Mean curve over a node set, with optional density and peaks.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveReport {
    pub name: String,
    pub times: Vec<f64>,
    pub cumulative: Vec<f64>,
    pub density: Option<Vec<f64>>,
    pub peaks: Vec<Peak>,
}

/// Pointwise mean of `trajectory` over `subset` (all nodes when `None`).
pub fn cumulative_curve(
    trajectory: &Trajectory,
    graph: &Graph,
    subset: Option<&SubsetSpec>,
) -> Result<CurveReport> {
    let (name, indices) = match subset {
        Some(s) => (s.name.clone(), s.resolve(graph)?),
        None => ("all".to_string(), (0..graph.n()).collect()),
    };
    Ok(CurveReport {
        name,
        times: trajectory.times.clone(),
        cumulative: subset_mean(trajectory, &indices)?,
        density: None,
        peaks: Vec::new(),
    })
}

pub(crate) fn subset_mean(trajectory: &Trajectory, indices: &[usize]) -> Result<Vec<f64>> {
    if indices.is_empty() {
        return Err(Error::InvalidParams("empty node set".into()));
    }
    let k = indices.len() as f64;
    Ok(trajectory
        .values
        .iter()
        .map(|row| indices.iter().map(|&i| row[i]).sum::<f64>() / k)
        .collect())
}

/// Central differences in the interior, one-sided differences at the ends.
pub fn finite_difference(times: &[f64], values: &[f64]) -> Vec<f64> {
    let n = values.len();
    assert!(n >= 3 && times.len() == n, "need at least three grid points");
    (0..n)
        .map(|k| {
            let (a, b) = match k {
                0 => (0, 1),
                k if k == n - 1 => (n - 2, n - 1),
                k => (k - 1, k + 1),
            };
            (values[b] - values[a]) / (times[b] - times[a])
        })
        .collect()
}

/// Fills `density` with the numeric derivative of the cumulative curve.
pub fn density_curve(mut report: CurveReport) -> Result<CurveReport> {
    if report.times.len() < 3 {
        return Err(Error::InvalidParams("density needs at least three grid points".into()));
    }
    report.density = Some(finite_difference(&report.times, &report.cumulative));
    Ok(report)
}

/// Interior local maxima whose topographic prominence is at least
/// `prominence`, left to right. Flat tops report their first point.
pub fn find_peaks(times: &[f64], series: &[f64], prominence: f64) -> Vec<Peak> {
    let n = series.len();
    let mut peaks = Vec::new();
    let mut k = 1;
    while k + 1 < n {
        if series[k] > series[k - 1] {
            let mut end = k;
            while end + 1 < n && series[end + 1] == series[k] {
                end += 1;
            }
            if end + 1 < n && series[end + 1] < series[k] {
                let prom = peak_prominence(series, k, end);
                if prom >= prominence {
                    peaks.push(Peak {
                        t: times[k],
                        height: series[k],
                        prominence: prom,
                    });
                }
            }
            k = end + 1;
        } else {
            k += 1;
        }
    }
    peaks
}

fn peak_prominence(series: &[f64], start: usize, end: usize) -> f64 {
    let height = series[start];
    let mut left_min = height;
    for &v in series[..start].iter().rev() {
        if v > height {
            break;
        }
        left_min = left_min.min(v);
    }
    let mut right_min = height;
    for &v in &series[end + 1..] {
        if v > height {
            break;
        }
        right_min = right_min.min(v);
    }
    height - left_min.max(right_min)
}

/// Trapezoid rule on a (not necessarily uniform) grid.
pub fn trapezoid(times: &[f64], values: &[f64]) -> f64 {
    times
        .windows(2)
        .zip(values.windows(2))
        .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1]))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Model;
    use crate::graph::{fixtures, load_graph};

    fn grid(n: usize, dt: f64) -> Vec<f64> {
        (0..n).map(|k| k as f64 * dt).collect()
    }

    #[test]
    fn subset_parsing() {
        let subs = SubsetSpec::parse_list("b1:F6,M21 ; b2: F45 ,M33").unwrap();
        assert_eq!(subs[0], SubsetSpec::new("b1", ["F6", "M21"]));
        assert_eq!(subs[1].members, ["F45", "M33"]);
        assert!(SubsetSpec::parse("nocolon").is_err());
        assert!(SubsetSpec::parse("x:").is_err());
    }

    #[test]
    fn singleton_and_all_node_means() {
        let g = fixtures::path(3);
        let traj = Trajectory {
            model: Model::Sis,
            times: vec![0.0, 1.0],
            values: vec![vec![0.1, 0.2, 0.3], vec![0.4, 0.5, 0.9]],
        };
        let one = cumulative_curve(&traj, &g, Some(&SubsetSpec::new("n1", ["1"]))).unwrap();
        assert_eq!(one.cumulative, vec![0.2, 0.5]);
        let all = cumulative_curve(&traj, &g, None).unwrap();
        assert!((all.cumulative[1] - 0.6).abs() < 1e-15);
        assert!(cumulative_curve(&traj, &g, Some(&SubsetSpec::new("bad", ["zz"]))).is_err());
        let empty = SubsetSpec {
            name: "e".into(),
            members: vec![],
        };
        assert!(cumulative_curve(&traj, &g, Some(&empty)).is_err());
    }

    #[test]
    fn attribute_subsets() {
        let g = load_graph(
            "F1 M1\nM1 F2\nF2 M2",
            Some("label,sex,group\nF1,F,north\nM1,M,north\nF2,F,south\nM2,M,south\n"),
        )
        .unwrap();
        let subs = SubsetSpec::from_attributes(&g);
        let names: Vec<&str> = subs.iter().map(|s| s.name.as_str()).collect();
        assert_eq!(names, ["sex_F", "sex_M", "group_north", "group_south"]);
        assert_eq!(subs[0].members, ["F1", "F2"]);
    }

    #[test]
    fn constant_curve_has_zero_density() {
        let times = grid(10, 0.5);
        let d = finite_difference(&times, &[3.0; 10]);
        assert!(d.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn density_integrates_back() {
        let times = grid(2001, 0.01);
        let cum: Vec<f64> = times.iter().map(|t| (t * 1.3).sin() + 0.1 * t * t).collect();
        let d = finite_difference(&times, &cum);
        let integral = trapezoid(&times, &d);
        assert!((integral - (cum[2000] - cum[0])).abs() < 1e-12);
    }

    #[test]
    fn peaks() {
        let times = grid(200, 0.1);
        let falling: Vec<f64> = times.iter().map(|t| (-t).exp()).collect();
        assert!(find_peaks(&times, &falling, 0.0).is_empty());

        let bump: Vec<f64> = times.iter().map(|t| (-(t - 5.0).powi(2)).exp()).collect();
        let p = find_peaks(&times, &bump, 0.1);
        assert_eq!(p.len(), 1);
        assert!((p[0].t - 5.0).abs() < 1e-9);

        let two: Vec<f64> = times
            .iter()
            .map(|t| (-(t - 5.0).powi(2)).exp() + 0.5 * (-(t - 14.0).powi(2)).exp())
            .collect();
        let p = find_peaks(&times, &two, 0.1);
        assert_eq!(p.len(), 2);
        assert!((p[0].height - 1.0).abs() < 1e-6 && (p[1].height - 0.5).abs() < 1e-6);
        assert!(find_peaks(&times, &two, 0.6).len() == 1);
    }

    #[test]
    fn plateau_peak_reports_first_point() {
        let times = grid(6, 1.0);
        let p = find_peaks(&times, &[0.0, 1.0, 2.0, 2.0, 1.0, 0.0], 0.5);
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].t, 2.0);
    }
}
