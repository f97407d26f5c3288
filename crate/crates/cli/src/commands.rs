//! `run` and `sweep`.

use std::fmt::Write as _;
use std::path::PathBuf;

use qwalk_core::observables::{
    baseline_series, detect_recurrence, fit_sigma_slope, localization_score, observe_run,
    RunOutcome,
};
use qwalk_core::{
    CaseFamily, CaseSpec, CoinParams, CoinTable, InitialState, LocalizationReport, SlopeFit,
    StepWindow, SummarySeries, WalkError,
};
use rayon::prelude::*;

use crate::config::{coin_table, Detectors, RunConfig};
use crate::output::{self, fmt_num, Report};
use crate::plot::{LineChart, Series};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecurrenceReport {
    pub window: StepWindow,
    pub height: f64,
    pub peaks: usize,
}

/// Detector results for one run. Each part fails independently when the
/// run is too short for its window.
#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub localization: Result<LocalizationReport, WalkError>,
    pub recurrence: Result<RecurrenceReport, WalkError>,
    pub slope: Result<SlopeFit, WalkError>,
}

pub fn analyze(
    series: &SummarySeries,
    baseline: &SummarySeries,
    steps: usize,
    detectors: &Detectors,
) -> Analysis {
    let localization = detectors
        .window
        .map(Ok)
        .unwrap_or_else(|| StepWindow::decision(steps))
        .and_then(|w| localization_score(series, w, baseline, detectors.loc_ratio));
    let recurrence = StepWindow::recurrence(steps).and_then(|window| {
        detect_recurrence(series, window, detectors.peak_height).map(|peaks| RecurrenceReport {
            window,
            height: detectors.peak_height,
            peaks,
        })
    });
    let slope = StepWindow::slope(steps).and_then(|w| fit_sigma_slope(series, w));
    Analysis {
        localization,
        recurrence,
        slope,
    }
}

fn init_label(init: &InitialState) -> String {
    match init {
        InitialState::Symmetric => "symmetric".into(),
        InitialState::Asymmetric => "asymmetric".into(),
        InitialState::Custom(s) => format!(
            "custom:{},{},{},{}",
            fmt_num(s.a.re),
            fmt_num(s.a.im),
            fmt_num(s.b.re),
            fmt_num(s.b.im)
        ),
    }
}

fn coin_label(p: Option<CoinParams>, default: &str) -> String {
    match p {
        Some(p) => format!(
            "{},{},{}",
            fmt_num(p.rho()),
            fmt_num(p.theta()),
            fmt_num(p.phi())
        ),
        None => default.to_string(),
    }
}

fn window_entries(report: &mut Report, w: StepWindow) {
    report.int("window_lo", w.lo).int("window_hi", w.hi);
}

fn build_report(config: &RunConfig, outcome: &RunOutcome, analysis: &Analysis) -> Report {
    let steps = config.steps;
    let mut r = Report::new();
    r.text("geometry", &config.geometry.label())
        .text("init", &init_label(&config.init))
        .text("coin_c0", &coin_label(config.coin_c0, "identity"))
        .text("coin_cp", &coin_label(config.coin_cp, "hadamard"))
        .int("steps", steps)
        .num("total_probability", outcome.total_probability)
        .num("final_mean_x", *outcome.series.mean_x.last().unwrap())
        .num("final_sigma", *outcome.series.sigma.last().unwrap())
        .num("final_p0", *outcome.series.p0.last().unwrap());

    r.section("localization");
    match &analysis.localization {
        Ok(loc) => {
            window_entries(&mut r, loc.window);
            r.num("mean_return", loc.mean_return)
                .num("baseline", loc.baseline)
                .num("ratio", loc.ratio)
                .num("threshold", loc.threshold)
                .flag("localized", loc.localized);
        }
        Err(e) => {
            r.text("skipped", &e.to_string());
        }
    }

    r.section("recurrence");
    match &analysis.recurrence {
        Ok(rec) => {
            window_entries(&mut r, rec.window);
            r.num("height", rec.height).int("peaks", rec.peaks);
        }
        Err(e) => {
            r.text("skipped", &e.to_string());
        }
    }

    r.section("slope");
    match &analysis.slope {
        Ok(fit) => {
            window_entries(&mut r, fit.window);
            r.num("slope", fit.slope)
                .num("intercept", fit.intercept)
                .num("r_squared", fit.r_squared);
        }
        Err(e) => {
            r.text("skipped", &e.to_string());
        }
    }
    r
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub outcome: RunOutcome,
    pub analysis: Analysis,
    pub report: Report,
    pub summary_csv: PathBuf,
    pub snapshot_csv: PathBuf,
    pub report_path: PathBuf,
}

/// Runs one walk and writes `summary.csv`, `snapshot.csv`, `report.txt` and
/// two SVG plots into the configured output directory.
pub fn run_case(config: &RunConfig) -> Result<RunOutput, CliError> {
    config.validate()?;
    let (layout, custom) = config.geometry.layout()?;
    let table = coin_table(config.coin_c0, config.coin_cp, custom);

    let outcome = observe_run(&layout, &table, config.init, config.steps)?;
    let baseline = baseline_series(&table, config.init, config.steps)?;
    let analysis = analyze(&outcome.series, &baseline, config.steps, &config.detectors);
    let report = build_report(config, &outcome, &analysis);

    let dir = &config.output_dir;
    output::ensure_dir(dir)?;
    let summary_csv = dir.join("summary.csv");
    let snapshot_csv = dir.join("snapshot.csv");
    let report_path = dir.join("report.txt");
    output::write_file(&summary_csv, &output::summary_csv(&outcome.series))?;
    output::write_file(
        &snapshot_csv,
        &output::snapshot_csv(&outcome.final_distribution),
    )?;
    output::write_file(&report_path, &report.render())?;

    let label = config.geometry.label();
    let series = &outcome.series;
    let sigma_plot =
        LineChart::new(format!("σ(t), {label}"), "t", "σ(t)").with_series(Series::new(
            "σ",
            series
                .steps
                .iter()
                .zip(&series.sigma)
                .map(|(&t, &s)| (t as f64, s))
                .collect(),
        ));
    let p0_plot = LineChart::new(format!("P₀(t), {label}"), "t", "P₀(t)").with_series(Series::new(
        "P₀",
        series
            .steps
            .iter()
            .zip(&series.p0)
            .filter(|(t, _)| *t % 2 == 0)
            .map(|(&t, &p)| (t as f64, p))
            .collect(),
    ));
    output::write_file(&dir.join("sigma.svg"), &sigma_plot.render_svg())?;
    output::write_file(&dir.join("p0.svg"), &p0_plot.render_svg())?;

    Ok(RunOutput {
        outcome,
        analysis,
        report,
        summary_csv,
        snapshot_csv,
        report_path,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub family: CaseFamily,
    pub params: Vec<u32>,
    pub steps: usize,
    pub init: InitialState,
    pub coin_c0: Option<CoinParams>,
    pub coin_cp: Option<CoinParams>,
    pub detectors: Detectors,
}

impl SweepConfig {
    pub fn new(family: CaseFamily, params: Vec<u32>) -> Self {
        Self {
            family,
            params,
            steps: crate::config::DEFAULT_STEPS,
            init: InitialState::Symmetric,
            coin_c0: None,
            coin_cp: None,
            detectors: Detectors::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub param: u32,
    pub sigma: f64,
    pub mean_p0: f64,
    pub ratio: f64,
    pub localized: bool,
}

pub const SWEEP_HEADER: &str = "param,sigma,mean_p0,ratio,localized";

/// One walk per parameter, run in parallel; rows come back in parameter
/// order. The whole parameter list is validated before anything runs.
pub fn sweep(config: &SweepConfig) -> Result<Vec<SweepRow>, CliError> {
    if config.params.is_empty() {
        return Err(CliError::Usage("sweep needs at least one parameter".into()));
    }
    if config.steps == 0 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    config.init.spinor().map_err(CliError::Config)?;
    let specs = config
        .params
        .iter()
        .map(|&p| CaseSpec::new(config.family, p))
        .collect::<Result<Vec<_>, _>>()
        .map_err(CliError::Config)?;
    let window = match config.detectors.window {
        Some(w) if w.hi > config.steps => {
            return Err(CliError::Usage(format!(
                "--window {}:{} extends past --steps",
                w.lo, w.hi
            )))
        }
        Some(w) => w,
        None => StepWindow::decision(config.steps).map_err(CliError::Config)?,
    };

    let table: CoinTable = coin_table(config.coin_c0, config.coin_cp, Vec::new());
    let baseline = baseline_series(&table, config.init, config.steps)?;
    let rows = specs
        .par_iter()
        .map(|spec| {
            let outcome = observe_run(&spec.layout(), &table, config.init, config.steps)?;
            let loc = localization_score(
                &outcome.series,
                window,
                &baseline,
                config.detectors.loc_ratio,
            )?;
            Ok(SweepRow {
                param: spec.param(),
                sigma: *outcome.series.sigma.last().unwrap(),
                mean_p0: loc.mean_return,
                ratio: loc.ratio,
                localized: loc.localized,
            })
        })
        .collect::<Result<Vec<_>, WalkError>>()?;
    Ok(rows)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.param,
            fmt_num(r.sigma),
            fmt_num(r.mean_p0),
            fmt_num(r.ratio),
            r.localized
        );
    }
    out
}
