use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::{map_batch, HarnessError};
use crate::bnb::{greedy_baseline, solve, Limits, SolveOptions};
use crate::grid::{bundled_case, derive, parse_case, PlacementLimits};
use crate::sched::{random_instance, Instance, DEFAULT_WEIGHT_MAX};

/// Benchmark suite file (JSON).
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Suite {
    pub suite_id: String,
    #[serde(default)]
    pub random: Vec<RandomGrid>,
    #[serde(default)]
    pub cases: Vec<CaseSpec>,
    #[serde(default)]
    pub node_cap: Option<u64>,
    #[serde(default)]
    pub time_cap_ms: Option<u64>,
}

/// Every (n, density) pair, once per seed.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RandomGrid {
    pub n: Vec<usize>,
    pub density: Vec<f64>,
    /// Explicit seeds; otherwise `seed .. seed + repetitions`.
    #[serde(default)]
    pub seeds: Option<Vec<u64>>,
    #[serde(default = "one")]
    pub repetitions: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_weight_max")]
    pub weight_max: u64,
}

/// A power network case: a bundled name such as `case14` or a file path, relative
/// paths resolved against the suite file.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CaseSpec {
    pub case: String,
    #[serde(default)]
    pub seeds: Vec<u64>,
}

fn one() -> u64 {
    1
}

fn default_weight_max() -> u64 {
    DEFAULT_WEIGHT_MAX
}

impl Suite {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let suite: Suite =
            serde_json::from_str(text).map_err(|e| HarnessError::Suite(e.to_string()))?;
        for g in &suite.random {
            if g.density.iter().any(|d| !(0.0..=1.0).contains(d)) {
                return Err(HarnessError::Suite("density outside [0, 1]".into()));
            }
            if g.n.is_empty() || g.density.is_empty() {
                return Err(HarnessError::Suite("empty n or density list".into()));
            }
        }
        Ok(suite)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let mut text = String::new();
        std::fs::File::open(path)?.read_to_string(&mut text)?;
        Self::from_json(&text)
    }

    fn limits(&self) -> Limits {
        Limits {
            node_cap: self.node_cap,
            time_cap: self.time_cap_ms.map(Duration::from_millis),
        }
    }
}

/// One CSV row. Solver rows carry integers in the metric columns; aggregate rows
/// carry the group mean or max.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub suite_id: String,
    pub source: String,
    pub n: usize,
    pub density: Option<f64>,
    pub seed: Option<u64>,
    pub solver: String,
    pub objective: f64,
    pub lb: Option<f64>,
    pub nodes: f64,
    pub time_ms: f64,
    pub optimal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotPoint {
    pub solver: String,
    pub n: usize,
    pub count: usize,
    pub mean_time_ms: f64,
    pub mean_nodes: f64,
}

#[derive(Debug, Clone)]
pub struct BenchOutcome {
    /// Solver rows in suite order, then aggregates.
    pub records: Vec<BenchRecord>,
    pub plot: Vec<PlotPoint>,
    /// Instances that could not be built; the run continues without them.
    pub errors: Vec<String>,
}

struct Job {
    source: String,
    density: Option<f64>,
    seed: u64,
    instance: Instance,
}

pub fn run_suite(suite: &Suite, base_dir: &Path) -> BenchOutcome {
    let mut jobs = Vec::new();
    let mut errors = Vec::new();
    for grid in &suite.random {
        let seeds: Vec<u64> = match &grid.seeds {
            Some(s) => s.clone(),
            None => (grid.seed..grid.seed + grid.repetitions).collect(),
        };
        for &n in &grid.n {
            for &density in &grid.density {
                for &seed in &seeds {
                    jobs.push(Job {
                        source: "random".into(),
                        density: Some(density),
                        seed,
                        instance: random_instance(seed, n, density, grid.weight_max),
                    });
                }
            }
        }
    }
    for spec in &suite.cases {
        let text = match bundled_case(&spec.case) {
            Some(t) => Ok(t.to_string()),
            None => std::fs::read_to_string(resolve(base_dir, &spec.case))
                .map_err(|e| format!("{}: {e}", spec.case)),
        };
        let net = text.and_then(|t| parse_case(&t).map_err(|e| format!("{}: {e}", spec.case)));
        let net = match net {
            Ok(n) => n,
            Err(e) => {
                errors.push(e);
                continue;
            }
        };
        let seeds = if spec.seeds.is_empty() {
            vec![0]
        } else {
            spec.seeds.clone()
        };
        for seed in seeds {
            let limits = PlacementLimits {
                node_cap: None,
                time_cap: Some(Duration::from_secs(60)),
            };
            match derive(&net, seed, limits) {
                Ok(d) => jobs.push(Job {
                    source: spec.case.clone(),
                    density: None,
                    seed,
                    instance: d.instance,
                }),
                Err(e) => errors.push(format!("{} seed {seed}: {e}", spec.case)),
            }
        }
    }

    let limits = suite.limits();
    let rows = map_batch(&jobs, |job| {
        let inst = &job.instance;
        let result = solve(
            inst,
            &SolveOptions {
                limits,
                seed: job.seed,
            },
        );
        let started = Instant::now();
        let greedy = greedy_baseline(inst);
        let greedy_ms = started.elapsed().as_secs_f64() * 1e3;
        let row = |solver: &str, objective: u64, lb: Option<u64>, nodes: u64, ms: f64, optimal| {
            BenchRecord {
                suite_id: suite.suite_id.clone(),
                source: job.source.clone(),
                n: inst.n_jobs(),
                density: job.density,
                seed: Some(job.seed),
                solver: solver.into(),
                objective: objective as f64,
                lb: lb.map(|v| v as f64),
                nodes: nodes as f64,
                time_ms: ms,
                optimal,
            }
        };
        [
            row(
                "bnb",
                result.best_objective,
                Some(result.global_lb),
                result.nodes_explored,
                result.wall_time_ms,
                result.proven_optimal,
            ),
            row("greedy", greedy.objective(), None, 0, greedy_ms, false),
        ]
    });
    let mut records: Vec<BenchRecord> = rows.into_iter().flatten().collect();
    let aggregates = aggregate(&records);
    let plot = plot_points(&records);
    records.extend(aggregates);
    BenchOutcome {
        records,
        plot,
        errors,
    }
}

fn resolve(base: &Path, p: &str) -> PathBuf {
    let path = Path::new(p);
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        base.join(path)
    }
}

/// Mean and max rows per (source, n, density, solver) group, in first-seen order.
/// The aggregated solver is named in `source` as `mean:<solver>` / `max:<solver>`.
fn aggregate(rows: &[BenchRecord]) -> Vec<BenchRecord> {
    let mut groups: Vec<(&BenchRecord, Vec<&BenchRecord>)> = Vec::new();
    for r in rows {
        let same = |g: &BenchRecord| {
            g.source == r.source && g.n == r.n && g.density == r.density && g.solver == r.solver
        };
        match groups.iter_mut().find(|(key, _)| same(key)) {
            Some((_, members)) => members.push(r),
            None => groups.push((r, vec![r])),
        }
    }
    let mut out = Vec::new();
    for (key, members) in groups {
        let count = members.len() as f64;
        let mean =
            |f: &dyn Fn(&BenchRecord) -> f64| members.iter().map(|r| f(r)).sum::<f64>() / count;
        let max = |f: &dyn Fn(&BenchRecord) -> f64| {
            members
                .iter()
                .map(|r| f(r))
                .fold(f64::NEG_INFINITY, f64::max)
        };
        let has_lb = members.iter().all(|r| r.lb.is_some());
        let optimal = members.iter().all(|r| r.optimal);
        let lb = |r: &BenchRecord| r.lb.unwrap_or(0.0);
        for (label, reduce) in [
            (
                "mean",
                &mean as &dyn Fn(&dyn Fn(&BenchRecord) -> f64) -> f64,
            ),
            ("max", &max),
        ] {
            out.push(BenchRecord {
                suite_id: key.suite_id.clone(),
                source: format!("{label}:{}", key.solver),
                n: key.n,
                density: key.density,
                seed: None,
                solver: "aggregate".into(),
                objective: reduce(&|r| r.objective),
                lb: has_lb.then(|| reduce(&lb)),
                nodes: reduce(&|r| r.nodes),
                time_ms: reduce(&|r| r.time_ms),
                optimal,
            });
        }
    }
    out
}

/// Mean time and nodes against n, per solver.
fn plot_points(rows: &[BenchRecord]) -> Vec<PlotPoint> {
    let mut points: Vec<PlotPoint> = Vec::new();
    for r in rows {
        match points
            .iter_mut()
            .find(|p| p.solver == r.solver && p.n == r.n)
        {
            Some(p) => {
                p.count += 1;
                p.mean_time_ms += r.time_ms;
                p.mean_nodes += r.nodes;
            }
            None => points.push(PlotPoint {
                solver: r.solver.clone(),
                n: r.n,
                count: 1,
                mean_time_ms: r.time_ms,
                mean_nodes: r.nodes,
            }),
        }
    }
    for p in &mut points {
        p.mean_time_ms /= p.count as f64;
        p.mean_nodes /= p.count as f64;
    }
    points.sort_by(|a, b| a.solver.cmp(&b.solver).then(a.n.cmp(&b.n)));
    points
}

pub fn write_records<W: Write>(out: W, records: &[BenchRecord]) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records<R: Read>(input: R) -> Result<Vec<BenchRecord>, HarnessError> {
    let mut r = csv::Reader::from_reader(input);
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}

pub fn write_plot<W: Write>(out: W, points: &[PlotPoint]) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    for p in points {
        w.serialize(p)?;
    }
    w.flush()?;
    Ok(())
}

/// `results.csv` → `results.plot.csv`.
pub fn plot_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("plot.csv")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn suite(json: &str) -> Suite {
        Suite::from_json(json).unwrap()
    }

    #[test]
    fn twenty_instances_forty_rows() {
        let s = suite(r#"{"suite_id":"t","random":[{"n":[8],"density":[0.3],"repetitions":20}]}"#);
        let out = run_suite(&s, Path::new("."));
        let solver_rows: Vec<_> = out
            .records
            .iter()
            .filter(|r| r.solver != "aggregate")
            .collect();
        assert_eq!(solver_rows.len(), 40);
        assert_eq!(out.records.len(), 44);
        for pair in solver_rows.chunks(2) {
            assert_eq!(
                (pair[0].solver.as_str(), pair[1].solver.as_str()),
                ("bnb", "greedy")
            );
            if pair[0].optimal {
                assert!(pair[0].objective <= pair[1].objective);
            }
        }
        assert_eq!(out.plot.len(), 2);
    }

    #[test]
    fn csv_round_trip() {
        let s = suite(
            r#"{"suite_id":"rt","random":[{"n":[3,5],"density":[0.0,0.5],"seeds":[4,9]}],"cases":[{"case":"case14","seeds":[1]}]}"#,
        );
        let out = run_suite(&s, Path::new("."));
        assert!(out.errors.is_empty());
        let mut buf = Vec::new();
        write_records(&mut buf, &out.records).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(
            "suite_id,source,n,density,seed,solver,objective,lb,nodes,time_ms,optimal\n"
        ));
        assert_eq!(read_records(buf.as_slice()).unwrap(), out.records);
    }

    #[test]
    fn deterministic_apart_from_time() {
        let s = suite(
            r#"{"suite_id":"d","random":[{"n":[6],"density":[0.2],"repetitions":3,"seed":5}]}"#,
        );
        let strip = |mut v: Vec<BenchRecord>| {
            v.iter_mut().for_each(|r| r.time_ms = 0.0);
            v
        };
        let a = strip(run_suite(&s, Path::new(".")).records);
        let b = strip(run_suite(&s, Path::new(".")).records);
        assert_eq!(a, b);
    }

    #[test]
    fn bad_case_logged_run_continues() {
        let s = suite(
            r#"{"suite_id":"e","random":[{"n":[3],"density":[0.0]}],"cases":[{"case":"no/such/file.m"}]}"#,
        );
        let out = run_suite(&s, Path::new("."));
        assert_eq!(out.errors.len(), 1);
        assert_eq!(
            out.records
                .iter()
                .filter(|r| r.solver != "aggregate")
                .count(),
            2
        );
    }

    #[test]
    fn suite_errors() {
        assert!(Suite::from_json("{").is_err());
        assert!(Suite::from_json(r#"{"suite_id":"x","bogus":1}"#).is_err());
        assert!(
            Suite::from_json(r#"{"suite_id":"x","random":[{"n":[3],"density":[2.0]}]}"#).is_err()
        );
    }

    #[test]
    fn aggregates_mean_and_max() {
        let mk = |nodes: f64| BenchRecord {
            suite_id: "a".into(),
            source: "random".into(),
            n: 4,
            density: Some(0.1),
            seed: Some(0),
            solver: "bnb".into(),
            objective: nodes * 10.0,
            lb: Some(nodes),
            nodes,
            time_ms: nodes,
            optimal: true,
        };
        let agg = aggregate(&[mk(1.0), mk(3.0)]);
        assert_eq!(agg.len(), 2);
        assert_eq!(
            (agg[0].source.as_str(), agg[0].nodes, agg[0].objective),
            ("mean:bnb", 2.0, 20.0)
        );
        assert_eq!(
            (agg[1].source.as_str(), agg[1].nodes, agg[1].lb),
            ("max:bnb", 3.0, Some(3.0))
        );
        assert_eq!(agg[0].solver, "aggregate");
    }
}
