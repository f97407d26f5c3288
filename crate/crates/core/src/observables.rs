//! Diagnostics of a walk: ⟨x⟩, σ, P₀ per step, plus detectors for linear
//! spreading, localization at the origin and recurrence of P₀.
//!
//! σ is the root of the raw second moment, √⟨x²⟩, not the standard
//! deviation about ⟨x⟩. The two agree for reflection-symmetric walks and
//! differ for the asymmetric initial state.

use rayon::prelude::*;

use crate::engine::WalkRun;
use crate::layout::{CaseFamily, CaseSpec, CoinLayout, CoinSlot, CoinTable};
use crate::state::{InitialState, PositionDistribution};
use crate::{Result, WalkError};

/// Localization threshold on the ratio of late-time mean P₀ to that of the
/// uniform Hadamard walk.
pub const DEFAULT_LOCALIZATION_RATIO: f64 = 10.0;

/// Minimum P₀ for a local maximum to count as a recurrence.
pub const DEFAULT_PEAK_HEIGHT: f64 = 0.05;

/// Minimum number of points in a slope fit.
pub const MIN_FIT_POINTS: usize = 10;

pub fn mean_position(d: &PositionDistribution) -> f64 {
    d.iter().map(|(x, p)| x as f64 * p).sum()
}

/// √⟨x²⟩
pub fn sigma(d: &PositionDistribution) -> f64 {
    d.iter()
        .map(|(x, p)| (x * x) as f64 * p)
        .sum::<f64>()
        .sqrt()
}

/// p(0), or 0 when the origin lies outside the distribution's window.
pub fn origin_probability(d: &PositionDistribution) -> f64 {
    d.get(0)
}

/// Closed step interval [lo, hi] with lo < hi.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepWindow {
    pub lo: usize,
    pub hi: usize,
}

impl StepWindow {
    pub fn new(lo: usize, hi: usize) -> Result<Self> {
        if lo >= hi {
            return Err(WalkError::InvalidWindow {
                lo,
                hi,
                reason: "lower bound must be below upper bound",
            });
        }
        Ok(Self { lo, hi })
    }

    /// Default localization window [T/2, T].
    pub fn decision(total_steps: usize) -> Result<Self> {
        Self::new(total_steps / 2, total_steps)
    }

    /// Default slope-fit window [T/4, T].
    pub fn slope(total_steps: usize) -> Result<Self> {
        Self::new(total_steps / 4, total_steps)
    }

    /// Default recurrence window [T/8, T].
    pub fn recurrence(total_steps: usize) -> Result<Self> {
        Self::new(total_steps / 8, total_steps)
    }

    pub fn contains(&self, t: usize) -> bool {
        (self.lo..=self.hi).contains(&t)
    }
}

/// Per-step scalars of one run. All four vectors have the same length.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SummarySeries {
    pub steps: Vec<usize>,
    pub mean_x: Vec<f64>,
    pub sigma: Vec<f64>,
    pub p0: Vec<f64>,
}

impl SummarySeries {
    pub fn push(&mut self, t: usize, d: &PositionDistribution) {
        self.steps.push(t);
        self.mean_x.push(mean_position(d));
        self.sigma.push(sigma(d));
        self.p0.push(origin_probability(d));
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Index of step `t`, if recorded.
    pub fn index_of(&self, t: usize) -> Option<usize> {
        self.steps.binary_search(&t).ok()
    }

    pub fn sigma_at(&self, t: usize) -> Option<f64> {
        self.index_of(t).map(|i| self.sigma[i])
    }

    pub fn p0_at(&self, t: usize) -> Option<f64> {
        self.index_of(t).map(|i| self.p0[i])
    }

    fn last_step(&self) -> Option<usize> {
        self.steps.last().copied()
    }

    fn covers(&self, window: StepWindow) -> Result<()> {
        match (self.steps.first(), self.last_step()) {
            (Some(&first), Some(last)) if first <= window.lo && window.hi <= last => Ok(()),
            _ => Err(WalkError::InvalidWindow {
                lo: window.lo,
                hi: window.hi,
                reason: "window extends beyond the recorded steps",
            }),
        }
    }

    /// Mean of P₀ over the even steps of `window`.
    pub fn mean_return(&self, window: StepWindow) -> Result<f64> {
        self.covers(window)?;
        let (sum, n) = self
            .steps
            .iter()
            .zip(&self.p0)
            .filter(|(t, _)| window.contains(**t) && *t % 2 == 0)
            .fold((0.0, 0usize), |(s, n), (_, p)| (s + p, n + 1));
        Ok(sum / n as f64)
    }
}

/// Everything recorded from one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub series: SummarySeries,
    pub final_distribution: PositionDistribution,
    pub total_probability: f64,
}

/// Runs a walk for `steps` steps, recording the series from t = 0 and the
/// final distribution.
pub fn observe_run(
    layout: &CoinLayout,
    table: &CoinTable,
    init: InitialState,
    steps: usize,
) -> Result<RunOutcome> {
    let mut run = WalkRun::new(layout.clone(), table.clone(), init, steps.max(1))?;
    let mut series = SummarySeries::default();
    series.push(0, &run.state().distribution());
    run.evolve_with(steps, |s| series.push(s.step(), &s.distribution()))?;
    let state = run.into_state();
    Ok(RunOutcome {
        series,
        final_distribution: state.distribution(),
        total_probability: state.total_probability(),
    })
}

/// Per-step series of length `steps + 1`, starting at t = 0.
pub fn summarize_run(
    layout: &CoinLayout,
    table: &CoinTable,
    init: InitialState,
    steps: usize,
) -> Result<SummarySeries> {
    observe_run(layout, table, init, steps).map(|o| o.series)
}

/// Reference series of the uniform walk with the potential coin everywhere.
pub fn baseline_series(
    table: &CoinTable,
    init: InitialState,
    steps: usize,
) -> Result<SummarySeries> {
    summarize_run(&CoinLayout::uniform(CoinSlot::Cp), table, init, steps)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub window: StepWindow,
}

/// Ordinary least squares of σ(t) on t over the window.
pub fn fit_sigma_slope(series: &SummarySeries, window: StepWindow) -> Result<SlopeFit> {
    series.covers(window)?;
    let points: Vec<(f64, f64)> = series
        .steps
        .iter()
        .zip(&series.sigma)
        .filter(|(t, _)| window.contains(**t))
        .map(|(&t, &s)| (t as f64, s))
        .collect();
    if points.len() < MIN_FIT_POINTS {
        return Err(WalkError::InvalidWindow {
            lo: window.lo,
            hi: window.hi,
            reason: "slope fit needs at least 10 points",
        });
    }
    let (slope, intercept, r_squared) = least_squares(&points);
    Ok(SlopeFit {
        slope,
        intercept,
        r_squared,
        window,
    })
}

fn least_squares(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let ss_res: f64 = points
        .iter()
        .map(|p| (p.1 - slope * p.0 - intercept).powi(2))
        .sum();
    // A constant series is fitted exactly.
    let r_squared = if ss_tot == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    };
    (slope, intercept, r_squared)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalizationReport {
    pub window: StepWindow,
    pub mean_return: f64,
    pub baseline: f64,
    pub ratio: f64,
    pub threshold: f64,
    pub localized: bool,
}

/// Compares late-time mean P₀ (even steps only) against a reference run.
pub fn localization_score(
    series: &SummarySeries,
    window: StepWindow,
    baseline: &SummarySeries,
    threshold: f64,
) -> Result<LocalizationReport> {
    let mean_return = series.mean_return(window)?;
    let base = baseline.mean_return(window)?;
    let ratio = mean_return / base;
    Ok(LocalizationReport {
        window,
        mean_return,
        baseline: base,
        ratio,
        threshold,
        localized: ratio >= threshold,
    })
}

/// Counts even steps t in `window` where P₀(t) ≥ `height` and P₀(t) strictly
/// exceeds both P₀(t−2) and P₀(t+2). Steps whose neighbours were not
/// recorded are skipped.
pub fn detect_recurrence(series: &SummarySeries, window: StepWindow, height: f64) -> Result<usize> {
    if !(height > 0.0 && height < 1.0) {
        return Err(WalkError::InvalidPeakHeight(height));
    }
    let count = series
        .steps
        .iter()
        .enumerate()
        .filter(|(_, &t)| t % 2 == 0 && window.contains(t) && t >= 2)
        .filter(|(i, &t)| {
            let p = series.p0[*i];
            match (series.p0_at(t - 2), series.p0_at(t + 2)) {
                (Some(left), Some(right)) => p >= height && p > left && p > right,
                _ => false,
            }
        })
        .count();
    Ok(count)
}

/// σ at step `t_probe` for each parameter of `family`, in parameter order.
/// Every parameter is validated before any walk runs.
pub fn sigma_at_step_vs_period(
    family: CaseFamily,
    params: &[u32],
    t_probe: usize,
    init: InitialState,
) -> Result<Vec<(u32, f64)>> {
    let specs = params
        .iter()
        .map(|&p| CaseSpec::new(family, p))
        .collect::<Result<Vec<_>>>()?;
    let table = CoinTable::default();
    specs
        .par_iter()
        .map(|spec| {
            let mut run = WalkRun::new(spec.layout(), table.clone(), init, t_probe.max(1))?;
            run.evolve(t_probe)?;
            Ok((spec.param(), sigma(&run.state().distribution())))
        })
        .collect()
}
