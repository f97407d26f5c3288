//! Acceptance suite. Prints one line per criterion and exits non-zero if any
//! criterion fails. Run with `cargo test -p qwalk-tests --test acceptance`.

use std::collections::BTreeMap;
use std::path::Path;

use qwalk_cli::figures::reproduce_figures;
use qwalk_cli::validate::{oracle_deviation, run_invariants};
use qwalk_core::observables::{
    baseline_series, detect_recurrence, fit_sigma_slope, localization_score, observe_run,
};
use qwalk_core::{
    CaseFamily, CaseSpec, CoinLayout, CoinSlot, CoinTable, InitialState, StepWindow, SummarySeries,
    WalkRun,
};

const T: usize = 400;

struct Outcome {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn spec(family: CaseFamily, p: u32) -> CaseSpec {
    CaseSpec::new(family, p).unwrap()
}

fn series(layout: &CoinLayout) -> SummarySeries {
    observe_run(layout, &CoinTable::default(), InitialState::Symmetric, T)
        .unwrap()
        .series
}

fn hadamard() -> CoinLayout {
    CoinLayout::uniform(CoinSlot::Cp)
}

/// The seven reference walks: pure Hadamard plus the six cases at their
/// figure parameters.
fn reference_runs() -> Vec<(String, CoinLayout)> {
    let mut runs = vec![("hadamard".to_string(), hadamard())];
    for (f, p) in [
        (CaseFamily::IA, 14),
        (CaseFamily::IB, 14),
        (CaseFamily::IIA, 14),
        (CaseFamily::IIB, 14),
        (CaseFamily::IIIA, 19),
        (CaseFamily::IIIB, 7),
    ] {
        let s = spec(f, p);
        runs.push((s.label(), s.layout()));
    }
    runs
}

fn unitarity() -> Outcome {
    let mut worst = 0.0_f64;
    for (_, layout) in reference_runs() {
        let mut run =
            WalkRun::new(layout, CoinTable::default(), InitialState::Symmetric, T).unwrap();
        run.evolve(T).unwrap();
        worst = worst.max((run.state().total_probability() - 1.0).abs());
    }
    verdict(
        worst <= 1e-10,
        format!("max |Σp − 1| at t=400 = {worst:.3e}"),
    )
}

fn oracle_equivalence() -> Outcome {
    let cases = [
        (CaseFamily::IA, 3),
        (CaseFamily::IB, 3),
        (CaseFamily::IIA, 4),
        (CaseFamily::IIB, 4),
        (CaseFamily::IIIA, 3),
        (CaseFamily::IIIB, 3),
    ];
    let worst = cases
        .iter()
        .map(|&(f, p)| oracle_deviation(&spec(f, p).layout(), 8))
        .fold(0.0, f64::max);
    verdict(
        worst <= 1e-12,
        format!("max amplitude deviation over t ≤ 8 = {worst:.3e}"),
    )
}

fn hand_amplitudes() -> Outcome {
    let mut run =
        WalkRun::new(hadamard(), CoinTable::default(), InitialState::Symmetric, 2).unwrap();
    run.step().unwrap();
    let d1 = run.state().distribution();
    run.step().unwrap();
    let d2 = run.state().distribution();
    let err = [
        d1.get(1) - 0.5,
        d1.get(-1) - 0.5,
        d2.get(0) - 0.5,
        d2.get(2) - 0.25,
        d2.get(-2) - 0.25,
    ]
    .into_iter()
    .map(f64::abs)
    .fold(0.0, f64::max);
    verdict(err <= 1e-14, format!("max error = {err:.3e}"))
}

fn parity_symmetry() -> Outcome {
    let (mut parity, mut asym) = (0.0_f64, 0.0_f64);
    for (_, layout) in reference_runs() {
        let (_, p, a) = run_invariants(&layout, T);
        parity = parity.max(p);
        asym = asym.max(a);
    }
    verdict(
        parity == 0.0 && asym <= 1e-12,
        format!("max p at odd x+t = {parity:e}, max |p(x)−p(−x)| = {asym:.3e}"),
    )
}

fn ballistic_overlap(runs: &BTreeMap<String, SummarySeries>) -> Outcome {
    let h = runs["hadamard"].sigma_at(T).unwrap();
    let mut ok = true;
    let mut parts = vec![format!("σ_H = {h:.3}")];
    for label in ["IA_N14", "IIB_N14"] {
        let s = runs[label].sigma_at(T).unwrap();
        let rel = (s - h).abs() / h;
        ok &= rel <= 0.05;
        parts.push(format!("{label} σ = {s:.3} ({:.2}%)", 100.0 * rel));
    }
    verdict(ok, parts.join(", "))
}

fn slopes(runs: &BTreeMap<String, SummarySeries>) -> BTreeMap<String, (f64, f64)> {
    let window = StepWindow::new(100, T).unwrap();
    runs.iter()
        .map(|(k, s)| {
            let fit = fit_sigma_slope(s, window).unwrap();
            (k.clone(), (fit.slope, fit.r_squared))
        })
        .collect()
}

fn linearity(fits: &BTreeMap<String, (f64, f64)>) -> Outcome {
    let (label, min_r2) = fits
        .iter()
        .map(|(k, &(_, r2))| (k.as_str(), r2))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    verdict(min_r2 > 0.995, format!("min r² = {min_r2:.6} ({label})"))
}

fn slope_ordering(fits: &BTreeMap<String, (f64, f64)>) -> Outcome {
    let slowest = fits["IIIB_q7"].0;
    let others = fits
        .iter()
        .filter(|(k, _)| k.as_str() != "IIIB_q7" && k.as_str() != "hadamard")
        .map(|(k, &(s, _))| (k.clone(), s))
        .collect::<Vec<_>>();
    let ok = others.iter().all(|(_, s)| slowest < *s);
    let next = others.iter().map(|(_, s)| *s).fold(f64::INFINITY, f64::min);
    verdict(
        ok,
        format!("slope(IIIB_q7) = {slowest:.4}, next smallest = {next:.4}"),
    )
}

struct FamilyExpectation {
    family: CaseFamily,
    not_localized: &'static [u32],
    localized: &'static [u32],
}

fn localization_onsets() -> Outcome {
    let window = StepWindow::new(200, T).unwrap();
    let baseline = baseline_series(&CoinTable::default(), InitialState::Symmetric, T).unwrap();
    let ratio = |f: CaseFamily, p: u32| {
        let s = series(&spec(f, p).layout());
        localization_score(&s, window, &baseline, 10.0)
            .unwrap()
            .ratio
    };
    let all_n: &'static [u32] = &[2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14];
    let all_even: &'static [u32] = &[2, 4, 6, 8, 10, 12, 14];
    let expectations = [
        FamilyExpectation {
            family: CaseFamily::IB,
            not_localized: &[2, 3],
            localized: &[4, 7, 10, 14],
        },
        FamilyExpectation {
            family: CaseFamily::IIA,
            not_localized: &[2, 4],
            localized: &[6, 8, 14],
        },
        FamilyExpectation {
            family: CaseFamily::IIIA,
            not_localized: &[3, 13],
            localized: &[15, 19],
        },
        FamilyExpectation {
            family: CaseFamily::IIIB,
            not_localized: &[3],
            localized: &[5, 7],
        },
        FamilyExpectation {
            family: CaseFamily::IA,
            not_localized: all_n,
            localized: &[],
        },
        FamilyExpectation {
            family: CaseFamily::IIB,
            not_localized: all_even,
            localized: &[],
        },
    ];

    let mut ok = true;
    let mut notes = Vec::new();
    for e in &expectations {
        // The boundary pair is the last listed non-localized parameter and
        // the first listed localized one.
        let boundary = match (e.not_localized.last(), e.localized.first()) {
            (Some(&a), Some(&b)) => Some((a, b)),
            _ => None,
        };
        let is_boundary = |p: u32| boundary.is_some_and(|(a, b)| p == a || p == b);
        let mut mismatches = Vec::new();
        for (&p, want) in e
            .not_localized
            .iter()
            .map(|p| (p, false))
            .chain(e.localized.iter().map(|p| (p, true)))
        {
            let r = ratio(e.family, p);
            if (r >= 10.0) != want {
                if is_boundary(p) {
                    notes.push(format!("{}{p} boundary ratio {r:.2}", e.family));
                } else {
                    ok = false;
                    mismatches.push(format!("{}{p} ratio {r:.2}", e.family));
                }
            }
        }
        if let Some((a, b)) = boundary {
            let (ra, rb) = (ratio(e.family, a), ratio(e.family, b));
            if rb <= ra {
                ok = false;
                mismatches.push(format!(
                    "{} ratio not growing {a}→{b}: {ra:.2}→{rb:.2}",
                    e.family
                ));
            }
        }
        if !mismatches.is_empty() {
            notes.push(format!("MISMATCH {}", mismatches.join(", ")));
        }
    }
    if notes.is_empty() {
        notes.push("all listed parameters agree".into());
    }
    verdict(ok, notes.join("; "))
}

fn recurrence(runs: &BTreeMap<String, SummarySeries>) -> Outcome {
    let window = StepWindow::new(50, T).unwrap();
    let peaks = |label: &str| detect_recurrence(&runs[label], window, 0.05).unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for label in ["IB_N14", "IIA_N14", "IIIA_q19", "IIIB_q7"] {
        let n = peaks(label);
        ok &= n >= 2;
        parts.push(format!("{label} {n}"));
    }
    for label in ["IA_N14", "IIB_N14"] {
        let n = peaks(label);
        ok &= n == 0;
        parts.push(format!("{label} {n} (want 0)"));
    }
    verdict(ok, format!("peaks: {}", parts.join(", ")))
}

fn critical_drop() -> Outcome {
    let sigma = |f: CaseFamily, p: u32| series(&spec(f, p).layout()).sigma_at(T).unwrap();
    let (ib3, ib4) = (sigma(CaseFamily::IB, 3), sigma(CaseFamily::IB, 4));
    let (iia4, iia6) = (sigma(CaseFamily::IIA, 4), sigma(CaseFamily::IIA, 6));
    verdict(
        ib4 < 0.5 * ib3 && iia6 < 0.5 * iia4,
        format!(
            "IB σ(4)/σ(3) = {:.3} ({ib4:.2}/{ib3:.2}), IIA σ(6)/σ(4) = {:.3} ({iia6:.2}/{iia4:.2}), need < 0.5",
            ib4 / ib3,
            iia6 / iia4
        ),
    )
}

fn csv_tree(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read(&p).unwrap(),
            )
        })
        .collect()
}

fn determinism() -> Outcome {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for d in &dirs {
        if let Err(e) = reproduce_figures(d.path()) {
            return verdict(false, format!("reproduce-figures failed: {e}"));
        }
    }
    let (a, b) = (csv_tree(dirs[0].path()), csv_tree(dirs[1].path()));
    verdict(
        !a.is_empty() && a == b,
        format!("{} CSV files, trees identical: {}", a.len(), a == b),
    )
}

fn main() {
    let runs: BTreeMap<String, SummarySeries> = reference_runs()
        .into_iter()
        .map(|(label, layout)| {
            let s = series(&layout);
            (label, s)
        })
        .collect();
    let fits = slopes(&runs);

    let results = [
        ("unitarity", unitarity()),
        ("oracle equivalence", oracle_equivalence()),
        ("hand-derived amplitudes", hand_amplitudes()),
        ("parity and symmetry", parity_symmetry()),
        ("ballistic overlap", ballistic_overlap(&runs)),
        ("linearity", linearity(&fits)),
        ("slope ordering", slope_ordering(&fits)),
        ("localization onsets", localization_onsets()),
        ("recurrence", recurrence(&runs)),
        ("critical sigma drop", critical_drop()),
        ("determinism", determinism()),
    ];

    let mut failed = 0;
    for (i, (name, o)) in results.iter().enumerate() {
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {status}  {name}: {}", i + 1, o.detail);
        failed += usize::from(!o.passed);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
