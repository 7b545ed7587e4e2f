use std::path::PathBuf;

use jumpga_core::analysis::{
    crossover_decrease_lower_bound, crossover_increase_leading_term, exact_optimum_probability,
    mutation_transition_bounds, optimum_construction_bound, runtime_bound, runtime_constant,
    survival_constant, ParentOverlap, RuntimeBound,
};
use jumpga_core::experiments::{
    default_sweep_ys, estimate_optimum_frequency, plateau_pair, run_bound_sweep, run_comparison,
    run_figure1, run_replicates, run_survival, run_takeover, ArmSummary, ComparisonConfig,
    Figure1Config, OptimumFrequency, SurvivalConfig, SweepConfig, SweepResult, TakeoverConfig,
};
use jumpga_core::{make_rng, GaParams};
use serde::Serialize;

use crate::config::{render_resolved, Command, Settings};
use crate::error::{CliError, Result};
use crate::output::{fmt_f64, run_row, write_series_csv, OutputDir, RUNS_HEADER};
use crate::svg::render_svg;

/// Validated work for one invocation, built before anything is written.
#[derive(Debug, Clone)]
pub enum Job {
    Run {
        params: GaParams,
        replicates: usize,
        max_iterations: u64,
    },
    Takeover(TakeoverConfig),
    Survival(SurvivalConfig),
    Figure1 {
        config: Figure1Config,
        runs: u64,
        svg: bool,
    },
    Compare(ComparisonConfig),
    Bounds(BoundsJob),
    Sweep(SweepConfig),
    Oracle(OracleJob),
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsJob {
    pub n: usize,
    pub k: usize,
    pub chi: f64,
    pub p_c: f64,
    pub lambda: f64,
    pub mus: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleJob {
    pub n: usize,
    pub k: usize,
    pub chi: f64,
    pub distances: Vec<usize>,
    pub trials: u64,
    pub seed: u64,
}

/// What the caller needs to pick an exit status.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    /// Checked sweep cells whose bound failed.
    pub failed_cells: usize,
}

fn need<T: Clone>(value: &Option<T>, key: &str) -> Result<T> {
    value
        .clone()
        .ok_or_else(|| CliError::usage(format!("missing value for `{key}`")))
}

fn usage(e: jumpga_core::Error) -> CliError {
    CliError::usage(e.to_string())
}

fn params(s: &Settings, mu: usize) -> Result<GaParams> {
    GaParams::new(
        need(&s.n, "n")?,
        need(&s.k, "k")?,
        mu,
        need(&s.pc, "pc")?,
        need(&s.chi, "chi")?,
        need(&s.seed, "seed")?,
    )
    .map_err(usage)
}

fn non_negative(value: f64, key: &str) -> Result<f64> {
    if value >= 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(CliError::usage(format!(
            "`{key}` must be a finite non-negative number, got {value}"
        )))
    }
}

fn check_mus(mus: &[usize], key: &str, min: usize) -> Result<()> {
    if mus.is_empty() || mus.iter().any(|&m| m < min) {
        return Err(CliError::usage(format!(
            "`{key}` needs population sizes of at least {min}, got {mus:?}"
        )));
    }
    Ok(())
}

fn positive<T: Copy + PartialOrd + Default + std::fmt::Display>(value: T, key: &str) -> Result<T> {
    if value > T::default() {
        Ok(value)
    } else {
        Err(CliError::usage(format!(
            "`{key}` must be positive, got {value}"
        )))
    }
}

/// Turns resolved settings into a job; every failure is a usage error.
pub fn plan(cmd: Command, s: &Settings) -> Result<Job> {
    let job = match cmd {
        Command::Run => Job::Run {
            params: params(s, need(&s.mu, "mu")?)?,
            replicates: positive(need(&s.replicates, "replicates")?, "replicates")?,
            max_iterations: positive(need(&s.max_iterations, "max_iterations")?, "max_iterations")?,
        },
        Command::Takeover => Job::Takeover(TakeoverConfig {
            params: params(s, need(&s.mu, "mu")?)?,
            replicates: positive(need(&s.replicates, "replicates")?, "replicates")?,
            max_iterations: s
                .max_iterations
                .map(|m| positive(m, "max_iterations"))
                .transpose()?,
        }),
        Command::Survival => {
            let mus = need(&s.mus, "mus")?;
            check_mus(&mus, "mus", 2)?;
            for &mu in &mus {
                params(s, mu)?;
            }
            let lambda = need(&s.lambda, "lambda")?;
            let p = params(s, mus[0])?;
            survival_constant(lambda, p.chi, p.p_c).map_err(usage)?;
            Job::Survival(SurvivalConfig {
                params: p,
                mus,
                replicates: positive(need(&s.replicates, "replicates")?, "replicates")?,
                lambda,
                t_max: need(&s.t_max, "t_max")?,
                takeover_cap: s
                    .takeover_cap
                    .map(|m| positive(m, "takeover_cap"))
                    .transpose()?,
            })
        }
        Command::Figure1 => Job::Figure1 {
            config: Figure1Config {
                params: params(s, need(&s.mu, "mu")?)?,
                stride: s.stride.map(|v| positive(v, "stride")).transpose()?,
                max_iterations: positive(
                    need(&s.max_iterations, "max_iterations")?,
                    "max_iterations",
                )?,
                run: 0,
            },
            runs: positive(need(&s.runs, "runs")?, "runs")?,
            svg: need(&s.svg, "svg")?,
        },
        Command::Compare => Job::Compare(ComparisonConfig {
            params: params(s, need(&s.mu, "mu")?)?,
            replicates: positive(need(&s.replicates, "replicates")?, "replicates")?,
            max_iterations: positive(need(&s.max_iterations, "max_iterations")?, "max_iterations")?,
        }),
        Command::Bounds => {
            let mus = need(&s.grid, "grid")?.mus();
            check_mus(&mus, "grid", 2)?;
            let p = params(s, mus[0])?;
            let lambda = need(&s.lambda, "lambda")?;
            survival_constant(lambda, p.chi, p.p_c).map_err(usage)?;
            Job::Bounds(BoundsJob {
                n: p.n,
                k: p.k,
                chi: p.chi,
                p_c: p.p_c,
                lambda,
                mus,
            })
        }
        Command::Sweep => {
            let mus = need(&s.grid, "grid")?.mus();
            check_mus(&mus, "grid", 3)?;
            for &mu in &mus {
                params(s, mu)?;
            }
            Job::Sweep(SweepConfig {
                params: params(s, mus[0])?,
                mus,
                trials: positive(need(&s.trials, "trials")?, "trials")?,
                o_constant: non_negative(need(&s.o_constant, "o_constant")?, "o_constant")?,
            })
        }
        Command::Oracle => {
            let (n, k, chi) = (need(&s.n, "n")?, need(&s.k, "k")?, need(&s.chi, "chi")?);
            GaParams::new(n, k, 2, 0.0, chi, 0).map_err(usage)?;
            if !(chi > 0.0 && chi < n as f64) {
                return Err(CliError::usage(format!(
                    "`chi` must lie in (0, n), got {chi}"
                )));
            }
            let distances = need(&s.distances, "distances")?;
            if let Some(&d) = distances.iter().find(|&&d| d > k || d > n - k) {
                return Err(CliError::usage(format!(
                    "half distance {d} exceeds min(k, n - k)"
                )));
            }
            Job::Oracle(OracleJob {
                n,
                k,
                chi,
                distances,
                trials: need(&s.trials, "trials")?,
                seed: need(&s.seed, "seed")?,
            })
        }
    };
    Ok(job)
}

impl Job {
    pub fn gap_size(&self) -> (usize, usize) {
        match self {
            Job::Run { params, .. } => (params.n, params.k),
            Job::Takeover(c) => (c.params.n, c.params.k),
            Job::Survival(c) => (c.params.n, c.params.k),
            Job::Figure1 { config, .. } => (config.params.n, config.params.k),
            Job::Compare(c) => (c.params.n, c.params.k),
            Job::Bounds(b) => (b.n, b.k),
            Job::Sweep(c) => (c.params.n, c.params.k),
            Job::Oracle(o) => (o.n, o.k),
        }
    }
}

/// Writes `config.resolved`, runs the job and writes its outputs.
pub fn execute(cmd: Command, settings: &Settings, job: &Job) -> Result<Outcome> {
    let out = OutputDir::create(need(&settings.output_dir, "output_dir")?)?;
    let mut outcome = Outcome::default();
    outcome
        .files
        .push(out.write_text("config.resolved", &render_resolved(cmd, settings)?)?);
    match job {
        Job::Run {
            params,
            replicates,
            max_iterations,
        } => {
            let runs = run_replicates(params, *replicates, *max_iterations)?;
            outcome.files.push(out.write_csv(
                "runs.csv",
                &RUNS_HEADER,
                runs.iter().map(run_row),
            )?);
            outcome
                .files
                .push(out.write_json("summary.json", &ArmSummary::from_runs(params.p_c, runs))?);
        }
        Job::Takeover(config) => {
            let s = run_takeover(config)?;
            let rows = s.replicates.iter().map(|r| {
                vec![
                    r.replicate.to_string(),
                    r.iterations.to_string(),
                    outcome_name(r.outcome).to_string(),
                ]
            });
            outcome.files.push(out.write_csv(
                "takeover.csv",
                &["replicate", "iterations", "outcome"],
                rows,
            )?);
            outcome.files.push(out.write_json("summary.json", &s)?);
        }
        Job::Survival(config) => {
            let s = run_survival(config)?;
            let header = [
                "mu",
                "threshold",
                "monitored",
                "tracked_excursions",
                "max_excursions",
                "tracked_frequency",
                "max_frequency",
                "optimum_stops",
                "analytic_tail",
                "vacuous",
            ];
            let rows = s.points.iter().map(|p| {
                vec![
                    p.mu.to_string(),
                    p.threshold.to_string(),
                    p.monitored.to_string(),
                    p.tracked_excursions.to_string(),
                    p.max_excursions.to_string(),
                    fmt_f64(p.tracked_frequency),
                    fmt_f64(p.max_frequency),
                    p.optimum_stops.to_string(),
                    fmt_f64(p.analytic_tail),
                    p.vacuous.to_string(),
                ]
            });
            outcome
                .files
                .push(out.write_csv("survival.csv", &header, rows)?);
            let header = [
                "mu",
                "replicate",
                "takeover_outcome",
                "takeover_iterations",
                "monitored",
                "tracked_peak",
                "max_peak",
                "optimum_found",
            ];
            let rows = s.replicates.iter().map(|r| {
                vec![
                    r.mu.to_string(),
                    r.replicate.to_string(),
                    outcome_name(r.takeover_outcome).to_string(),
                    r.takeover_iterations.to_string(),
                    r.monitored.to_string(),
                    r.tracked_peak.to_string(),
                    r.max_peak.to_string(),
                    r.optimum_found.to_string(),
                ]
            });
            outcome
                .files
                .push(out.write_csv("survival_replicates.csv", &header, rows)?);
            outcome.files.push(out.write_json("summary.json", &s)?);
        }
        Job::Figure1 { config, runs, svg } => {
            let mut summaries = Vec::new();
            for run in 0..*runs {
                let series = run_figure1(&Figure1Config {
                    run,
                    ..config.clone()
                })?;
                let csv = out.path(&format!("figure1_run{run}.csv"));
                write_series_csv(&series, &csv)?;
                outcome.files.push(csv);
                if *svg {
                    let path = out.path(&format!("figure1_run{run}.svg"));
                    render_svg(&series, &path)?;
                    outcome.files.push(path);
                }
                summaries.push(Figure1Summary::of(run, &series));
            }
            outcome
                .files
                .push(out.write_json("summary.json", &summaries)?);
        }
        Job::Compare(config) => {
            let s = run_comparison(config)?;
            outcome.files.push(out.write_csv(
                "runs_crossover.csv",
                &RUNS_HEADER,
                s.crossover.runs.iter().map(run_row),
            )?);
            outcome.files.push(out.write_csv(
                "runs_mutation_only.csv",
                &RUNS_HEADER,
                s.mutation_only.runs.iter().map(run_row),
            )?);
            outcome.files.push(out.write_json("summary.json", &s)?);
        }
        Job::Bounds(b) => {
            let (rows, summary) = bounds_table(b)?;
            let header = [
                "mu",
                "y",
                "crossover_growth_leading",
                "crossover_growth_o_scale",
                "crossover_shrink_lower",
                "mutation_leading",
                "mutation_o_scale",
            ];
            outcome
                .files
                .push(out.write_csv("bounds.csv", &header, rows)?);
            outcome
                .files
                .push(out.write_json("summary.json", &summary)?);
        }
        Job::Sweep(config) => {
            let r = run_bound_sweep(config)?;
            outcome.failed_cells = r
                .cells
                .iter()
                .filter(|c| c.satisfied == Some(false))
                .count();
            write_sweep(&out, &r, &config.mus, &mut outcome.files)?;
            outcome.files.push(out.write_json("summary.json", &r)?);
        }
        Job::Oracle(o) => {
            let rows = oracle_rows(o)?;
            let header = [
                "half_distance",
                "both_ones",
                "both_zeros",
                "differing",
                "exact",
                "construction_bound",
                "trials",
                "estimate",
                "stderr",
                "within_3_stderr",
            ];
            let csv_rows = rows.iter().map(|r| {
                let (trials, est, se, ok) = match &r.estimate {
                    Some(e) => (
                        e.trials.to_string(),
                        fmt_f64(e.frequency),
                        fmt_f64(e.stderr),
                        ((e.frequency - r.exact).abs() <= 3.0 * e.stderr).to_string(),
                    ),
                    None => ("0".into(), String::new(), String::new(), String::new()),
                };
                vec![
                    r.half_distance.to_string(),
                    r.both_ones.to_string(),
                    r.both_zeros.to_string(),
                    r.differing.to_string(),
                    fmt_f64(r.exact),
                    fmt_f64(r.construction_bound),
                    trials,
                    est,
                    se,
                    ok,
                ]
            });
            outcome
                .files
                .push(out.write_csv("oracle.csv", &header, csv_rows)?);
            outcome.files.push(out.write_json("summary.json", &rows)?);
        }
    }
    Ok(outcome)
}

fn outcome_name(o: jumpga_core::experiments::TakeoverOutcome) -> &'static str {
    use jumpga_core::experiments::TakeoverOutcome::*;
    match o {
        Reached => "reached",
        Censored => "censored",
        OptimumFirst => "optimum_first",
    }
}

#[derive(Debug, Serialize)]
struct Figure1Summary {
    run: u64,
    total_iterations: u64,
    optimum_found: bool,
    snapshots: usize,
    invariant_violations: u64,
    /// First snapshot with frequency above 0.1, per distance `0, 2, …, 2k`.
    first_passage: Vec<Option<u64>>,
    zero_distance_collapses: bool,
    emerges_in_order: bool,
}

impl Figure1Summary {
    fn of(run: u64, s: &jumpga_core::experiments::Figure1Series) -> Self {
        let order: Vec<usize> = (1..s.k).map(|j| 2 * j).collect();
        Self {
            run,
            total_iterations: s.total_iterations,
            optimum_found: s.optimum_found,
            snapshots: s.len(),
            invariant_violations: s.invariant_violations,
            first_passage: (0..=s.k).map(|j| s.first_passage(2 * j, 0.1)).collect(),
            zero_distance_collapses: s.zero_distance_collapses(0.05, 0.1, 0.2),
            emerges_in_order: s.emerges_in_order(&order, 0.1),
        }
    }
}

#[derive(Debug, Serialize)]
struct BoundsSummary {
    inputs: BoundsJob,
    survival_constant: f64,
    runtime_constant: f64,
    /// Only for gap sizes of at least 3.
    runtime_bounds: Vec<(usize, RuntimeBound)>,
}

fn bounds_table(b: &BoundsJob) -> Result<(Vec<Vec<String>>, BoundsSummary)> {
    let mut rows = Vec::new();
    let mut runtime_bounds = Vec::new();
    for &mu in &b.mus {
        for y in default_sweep_ys(mu) {
            let inc = crossover_increase_leading_term(y, mu, b.chi, b.n)?;
            let dec = crossover_decrease_lower_bound(y, mu, b.chi, b.n)?;
            let m = mutation_transition_bounds(y, mu, b.chi, b.n)?;
            rows.push(vec![
                mu.to_string(),
                y.to_string(),
                fmt_f64(inc.leading),
                fmt_f64(inc.o_scale),
                fmt_f64(dec),
                fmt_f64(m.p_minus_lower),
                fmt_f64(m.o_scale),
            ]);
        }
        if b.k >= 3 {
            runtime_bounds.push((mu, runtime_bound(b.n, b.k, mu, b.chi, b.p_c)?));
        }
    }
    let summary = BoundsSummary {
        inputs: b.clone(),
        survival_constant: survival_constant(b.lambda, b.chi, b.p_c)?,
        runtime_constant: runtime_constant(b.chi, b.p_c),
        runtime_bounds,
    };
    Ok((rows, summary))
}

pub const TRANSITIONS_HEADER: [&str; 9] = [
    "event",
    "y",
    "trials",
    "p_plus",
    "p_minus",
    "stderr_plus",
    "stderr_minus",
    "bound",
    "satisfied",
];

fn write_sweep(
    out: &OutputDir,
    r: &SweepResult,
    mus: &[usize],
    files: &mut Vec<PathBuf>,
) -> Result<()> {
    for &mu in mus {
        let rows = r.cells.iter().filter(|c| c.mu == mu).map(|c| {
            let e = &c.estimate;
            let satisfied = match c.satisfied {
                Some(v) => v.to_string(),
                None if e.inconclusive => "inconclusive".into(),
                None => "reported".into(),
            };
            vec![
                c.event.label().to_string(),
                c.y.to_string(),
                e.accepted.to_string(),
                fmt_f64(e.p_plus_hat),
                fmt_f64(e.p_minus_hat),
                fmt_f64(e.stderr_plus),
                fmt_f64(e.stderr_minus),
                c.bound.map(fmt_f64).unwrap_or_default(),
                satisfied,
            ]
        });
        files.push(out.write_csv(
            &format!("transitions_mu{mu}.csv"),
            &TRANSITIONS_HEADER,
            rows,
        )?);
    }
    let header = [
        "name",
        "analytic_value",
        "estimate",
        "stderr",
        "samples",
        "satisfied",
    ];
    let rows = r.cells.iter().flat_map(|c| &c.reports).map(|b| {
        vec![
            b.name.clone(),
            fmt_f64(b.analytic_value),
            fmt_f64(b.estimate),
            fmt_f64(b.stderr),
            b.samples.to_string(),
            b.satisfied.to_string(),
        ]
    });
    files.push(out.write_csv("bound_reports.csv", &header, rows)?);
    let rows = r.fitted.iter().map(|f| {
        vec![
            f.name.clone(),
            f.mu.to_string(),
            f.y.to_string(),
            fmt_f64(f.value),
        ]
    });
    files.push(out.write_csv("fitted_constants.csv", &["name", "mu", "y", "value"], rows)?);
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct OracleRow {
    pub half_distance: usize,
    pub both_ones: usize,
    pub both_zeros: usize,
    pub differing: usize,
    pub exact: f64,
    pub construction_bound: f64,
    pub estimate: Option<OptimumFrequency>,
}

/// Pair `i` is drawn from stream `2i` and simulated on stream `2i + 1`.
pub fn oracle_rows(o: &OracleJob) -> Result<Vec<OracleRow>> {
    let p_m = o.chi / o.n as f64;
    o.distances
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let (a, b) = plateau_pair(o.n, o.k, d, &mut make_rng(o.seed, 2 * i as u64))?;
            let overlap = ParentOverlap::of(&a, &b)?;
            let estimate = if o.trials > 0 {
                Some(estimate_optimum_frequency(
                    &a,
                    &b,
                    p_m,
                    o.trials,
                    o.seed,
                    2 * i as u64 + 1,
                )?)
            } else {
                None
            };
            Ok(OracleRow {
                half_distance: d,
                both_ones: overlap.both_ones,
                both_zeros: overlap.both_zeros,
                differing: overlap.differing,
                exact: exact_optimum_probability(&a, &b, p_m)?,
                construction_bound: optimum_construction_bound(o.n, o.k, d, p_m)?,
                estimate,
            })
        })
        .collect()
}
