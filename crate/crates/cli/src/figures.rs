//! Batch reproduction of the fourteen reference figures.
//!
//! Every figure gets a CSV (`figNN_*.csv`) and an SVG of the same stem. The
//! distinct walks are simulated once, in parallel, and files are written
//! afterwards in a fixed order so the output tree is byte-reproducible.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use qwalk_core::observables::{observe_run, RunOutcome};
use qwalk_core::{CaseFamily, CaseSpec, CoinLayout, CoinSlot, CoinTable, InitialState};
use rayon::prelude::*;

use crate::output::{self, snapshot_csv, wide_csv};
use crate::plot::{LineChart, Series};
use crate::CliError;

pub const FIGURE_STEPS: usize = 400;

/// A walk used by some figure: either a case or the uniform Hadamard walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Walk {
    Hadamard,
    Case(CaseSpec),
}

impl Walk {
    fn case(family: CaseFamily, param: u32) -> Self {
        Walk::Case(CaseSpec::new(family, param).expect("figure parameters are valid"))
    }

    pub fn label(&self) -> String {
        match self {
            Walk::Hadamard => "hadamard".into(),
            Walk::Case(spec) => spec.label(),
        }
    }

    fn layout(&self) -> CoinLayout {
        match self {
            Walk::Hadamard => CoinLayout::uniform(CoinSlot::Cp),
            Walk::Case(spec) => spec.layout(),
        }
    }
}

/// What a figure plots.
#[derive(Debug, Clone)]
pub enum FigureKind {
    /// σ(t) for each walk.
    SigmaSeries(Vec<Walk>),
    /// σ at the final step against the period, one curve per family.
    SigmaVsPeriod(Vec<(CaseFamily, Vec<u32>)>),
    /// Final p(x).
    Snapshot(Vec<Walk>),
    /// P₀(t).
    OriginSeries(Vec<Walk>),
}

#[derive(Debug, Clone)]
pub struct Figure {
    pub stem: &'static str,
    pub title: &'static str,
    pub kind: FigureKind,
}

fn odd(lo: u32, hi: u32) -> Vec<u32> {
    (lo..=hi).filter(|v| v % 2 == 1).collect()
}

fn even(lo: u32, hi: u32) -> Vec<u32> {
    (lo..=hi).filter(|v| v % 2 == 0).collect()
}

/// The reference figure set.
pub fn figure_set() -> Vec<Figure> {
    use CaseFamily::*;
    use FigureKind::*;
    let w = Walk::case;
    vec![
        Figure {
            stem: "fig01_sigma_vs_t",
            title: "σ(t) for the six cases and the Hadamard walk",
            kind: SigmaSeries(vec![
                Walk::Hadamard,
                w(IA, 14),
                w(IB, 14),
                w(IIA, 14),
                w(IIB, 14),
                w(IIIA, 19),
                w(IIIB, 7),
            ]),
        },
        Figure {
            stem: "fig02_sigma_vs_period",
            title: "σ(400) against the period",
            kind: SigmaVsPeriod(vec![
                (IA, (2..=14).collect()),
                (IB, (2..=14).collect()),
                (IIA, even(2, 14)),
                (IIB, even(2, 14)),
                (IIIA, odd(3, 19)),
                (IIIB, odd(3, 19)),
            ]),
        },
        Figure {
            stem: "fig03_snapshot_IA",
            title: "p(x, 400), case IA, N = 14",
            kind: Snapshot(vec![w(IA, 14)]),
        },
        Figure {
            stem: "fig04_p0_IA",
            title: "P₀(t), case IA, N = 14",
            kind: OriginSeries(vec![w(IA, 14)]),
        },
        Figure {
            stem: "fig05_snapshot_IB",
            title: "p(x, 400), case IB",
            kind: Snapshot(vec![w(IB, 3), w(IB, 7), w(IB, 10), w(IB, 14)]),
        },
        Figure {
            stem: "fig06_p0_IB",
            title: "P₀(t), case IB",
            kind: OriginSeries(vec![w(IB, 2), w(IB, 4), w(IB, 7), w(IB, 10), w(IB, 14)]),
        },
        Figure {
            stem: "fig07_snapshot_IIA",
            title: "p(x, 400), case IIA, N = 14",
            kind: Snapshot(vec![w(IIA, 14)]),
        },
        Figure {
            stem: "fig08_p0_IIA",
            title: "P₀(t), case IIA",
            kind: OriginSeries(vec![w(IIA, 4), w(IIA, 6), w(IIA, 8), w(IIA, 14)]),
        },
        Figure {
            stem: "fig09_snapshot_IIB",
            title: "p(x, 400), case IIB, N = 14",
            kind: Snapshot(vec![w(IIB, 14)]),
        },
        Figure {
            stem: "fig10_p0_IIB",
            title: "P₀(t), case IIB, N = 14",
            kind: OriginSeries(vec![w(IIB, 14)]),
        },
        Figure {
            stem: "fig11_snapshot_IIIA",
            title: "p(x, 400), case IIIA, q = 19",
            kind: Snapshot(vec![w(IIIA, 19)]),
        },
        Figure {
            stem: "fig12_p0_IIIA",
            title: "P₀(t), case IIIA",
            kind: OriginSeries(vec![w(IIIA, 13), w(IIIA, 15), w(IIIA, 19)]),
        },
        Figure {
            stem: "fig13_snapshot_IIIB",
            title: "p(x, 400), case IIIB, q = 7",
            kind: Snapshot(vec![w(IIIB, 7)]),
        },
        Figure {
            stem: "fig14_p0_IIIB",
            title: "P₀(t), case IIIB",
            kind: OriginSeries(vec![w(IIIB, 3), w(IIIB, 5), w(IIIB, 7)]),
        },
    ]
}

fn walks_of(figures: &[Figure]) -> Vec<Walk> {
    let mut walks = Vec::new();
    let mut push = |w: Walk| {
        if !walks.contains(&w) {
            walks.push(w);
        }
    };
    for f in figures {
        match &f.kind {
            FigureKind::SigmaSeries(ws)
            | FigureKind::Snapshot(ws)
            | FigureKind::OriginSeries(ws) => ws.iter().copied().for_each(&mut push),
            FigureKind::SigmaVsPeriod(families) => {
                for (family, params) in families {
                    params.iter().for_each(|&p| push(Walk::case(*family, p)))
                }
            }
        }
    }
    walks
}

/// Column header for a single-walk figure, or the walk labels for several.
fn column_names(walks: &[Walk], single: &str) -> Vec<String> {
    if walks.len() == 1 {
        vec![single.to_string()]
    } else {
        walks.iter().map(Walk::label).collect()
    }
}

fn render(fig: &Figure, runs: &HashMap<Walk, RunOutcome>, steps: usize) -> (String, LineChart) {
    let steps_axis: Vec<i64> = (0..=steps as i64).collect();
    match &fig.kind {
        FigureKind::SigmaSeries(walks) => {
            let names = column_names(walks, "sigma");
            let columns: Vec<(String, Vec<f64>)> = walks
                .iter()
                .zip(names)
                .map(|(w, n)| (n, runs[w].series.sigma.clone()))
                .collect();
            let mut chart = LineChart::new(fig.title, "t", "σ(t)");
            for (w, (_, values)) in walks.iter().zip(&columns) {
                let pts = values
                    .iter()
                    .enumerate()
                    .map(|(t, &s)| (t as f64, s))
                    .collect();
                chart = chart.with_series(Series::new(w.label(), pts));
            }
            (wide_csv("t", &steps_axis, &columns), chart)
        }
        FigureKind::OriginSeries(walks) => {
            let names = column_names(walks, "p0");
            let columns: Vec<(String, Vec<f64>)> = walks
                .iter()
                .zip(names)
                .map(|(w, n)| (n, runs[w].series.p0.clone()))
                .collect();
            let mut chart = LineChart::new(fig.title, "t", "P₀(t)");
            for (w, (_, values)) in walks.iter().zip(&columns) {
                // Odd steps are identically zero.
                let pts = values
                    .iter()
                    .enumerate()
                    .filter(|(t, _)| t % 2 == 0)
                    .map(|(t, &p)| (t as f64, p))
                    .collect();
                chart = chart.with_series(Series::new(w.label(), pts));
            }
            (wide_csv("t", &steps_axis, &columns), chart)
        }
        FigureKind::Snapshot(walks) => {
            let csv = if walks.len() == 1 {
                snapshot_csv(&runs[&walks[0]].final_distribution)
            } else {
                let r = steps as i64;
                let xs: Vec<i64> = (-r..=r).collect();
                let columns: Vec<(String, Vec<f64>)> = walks
                    .iter()
                    .map(|w| (w.label(), runs[w].final_distribution.probs().to_vec()))
                    .collect();
                wide_csv("x", &xs, &columns)
            };
            let mut chart = LineChart::new(fig.title, "x", "p(x, t)");
            for w in walks {
                let pts = runs[w]
                    .final_distribution
                    .iter()
                    .filter(|(x, _)| (x + steps as i64) % 2 == 0)
                    .map(|(x, p)| (x as f64, p))
                    .collect();
                chart = chart.with_series(Series::new(w.label(), pts));
            }
            (csv, chart)
        }
        FigureKind::SigmaVsPeriod(families) => {
            let mut csv = String::from("family,param,period,sigma\n");
            let mut chart = LineChart::new(fig.title, "period N", "σ(400)");
            for (family, params) in families {
                let mut pts = Vec::new();
                for &p in params {
                    let walk = Walk::case(*family, p);
                    let Walk::Case(spec) = walk else {
                        unreachable!()
                    };
                    let s = *runs[&walk].series.sigma.last().unwrap();
                    csv.push_str(&format!(
                        "{family},{p},{},{}\n",
                        spec.period(),
                        output::fmt_num(s)
                    ));
                    pts.push((spec.period() as f64, s));
                }
                chart = chart.with_series(Series::new(family.name(), pts));
            }
            (csv, chart)
        }
    }
}

/// Runs the full experiment matrix and writes one CSV and one SVG per
/// figure into `out_dir`. Returns the written paths in figure order.
pub fn reproduce_figures(out_dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    reproduce_figures_with_steps(out_dir, FIGURE_STEPS)
}

/// Same as [`reproduce_figures`] with a custom step count.
pub fn reproduce_figures_with_steps(
    out_dir: &Path,
    steps: usize,
) -> Result<Vec<PathBuf>, CliError> {
    let figures = figure_set();
    let walks = walks_of(&figures);
    let table = CoinTable::default();
    let outcomes = walks
        .par_iter()
        .map(|w| observe_run(&w.layout(), &table, InitialState::Symmetric, steps).map(|o| (*w, o)))
        .collect::<Result<Vec<_>, _>>()?;
    let runs: HashMap<Walk, RunOutcome> = outcomes.into_iter().collect();

    output::ensure_dir(out_dir)?;
    let mut written = Vec::new();
    for fig in &figures {
        let (csv, chart) = render(fig, &runs, steps);
        let csv_path = out_dir.join(format!("{}.csv", fig.stem));
        let svg_path = out_dir.join(format!("{}.svg", fig.stem));
        output::write_file(&csv_path, &csv)?;
        output::write_file(&svg_path, &chart.render_svg())?;
        written.push(csv_path);
        written.push(svg_path);
    }
    Ok(written)
}
