//! Invariant checks run by `qwalk validate`.

use std::f64::consts::PI;

use qwalk_core::engine::oracle_vector;
use qwalk_core::{
    dense_step_matrix, CaseFamily, CaseSpec, CoinLayout, CoinOperator, CoinParams, CoinSlot,
    CoinTable, InitialState, WalkRun, DEFAULT_UNITARY_TOL,
};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name,
            passed,
            detail: detail.into(),
        }
    }
}

/// Reference walks: the uniform Hadamard walk and the six cases at their
/// figure parameters.
pub fn reference_layouts() -> Vec<(String, CoinLayout)> {
    let mut out = vec![("hadamard".to_string(), CoinLayout::uniform(CoinSlot::Cp))];
    for (family, p) in [
        (CaseFamily::IA, 14),
        (CaseFamily::IB, 14),
        (CaseFamily::IIA, 14),
        (CaseFamily::IIB, 14),
        (CaseFamily::IIIA, 19),
        (CaseFamily::IIIB, 7),
    ] {
        let spec = CaseSpec::new(family, p).expect("reference parameters are valid");
        out.push((spec.label(), spec.layout()));
    }
    out
}

/// Small parameters for the dense-matrix comparison.
pub fn oracle_cases() -> Vec<CaseSpec> {
    [
        (CaseFamily::IA, 3),
        (CaseFamily::IB, 3),
        (CaseFamily::IIA, 4),
        (CaseFamily::IIB, 4),
        (CaseFamily::IIIA, 3),
        (CaseFamily::IIIB, 3),
    ]
    .into_iter()
    .map(|(f, p)| CaseSpec::new(f, p).expect("oracle parameters are valid"))
    .collect()
}

/// Largest elementwise deviation between the engine and powers of the dense
/// step matrix over `steps` steps.
pub fn oracle_deviation(layout: &CoinLayout, steps: usize) -> f64 {
    let radius = steps + 1;
    let table = CoinTable::default();
    let m = dense_step_matrix(layout, &table, radius).expect("radius within oracle limit");
    let mut run =
        WalkRun::new(layout.clone(), table, InitialState::Symmetric, steps).expect("valid run");
    let mut v = oracle_vector(run.state(), radius);
    let mut worst = 0.0_f64;
    for _ in 0..steps {
        run.step().expect("within budget");
        v = &m * v;
        let got = oracle_vector(run.state(), radius);
        worst = worst.max((&v - &got).iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    worst
}

/// Worst normalisation drift, parity violation (largest p at x+t odd) and
/// reflection asymmetry over a run of `steps` steps.
pub fn run_invariants(layout: &CoinLayout, steps: usize) -> (f64, f64, f64) {
    let mut run = WalkRun::new(
        layout.clone(),
        CoinTable::default(),
        InitialState::Symmetric,
        steps,
    )
    .expect("valid run");
    let (mut drift, mut parity, mut asym) = (0.0_f64, 0.0_f64, 0.0_f64);
    run.evolve_with(steps, |s| {
        let t = s.step() as i64;
        let d = s.distribution();
        drift = drift.max((s.total_probability() - 1.0).abs());
        for (x, p) in d.iter() {
            if (x + t) % 2 != 0 {
                parity = parity.max(p);
            }
            asym = asym.max((p - d.get(-x)).abs());
        }
    })
    .expect("within budget");
    (drift, parity, asym)
}

pub fn run_checks() -> Vec<Check> {
    let mut checks = Vec::new();

    let mut grid_ok = true;
    for i in 0..=10 {
        for j in 0..=8 {
            for k in 0..=8 {
                let p = CoinParams::new(i as f64 / 10.0, PI * j as f64 / 8.0, PI * k as f64 / 8.0)
                    .unwrap();
                grid_ok &= CoinOperator::general(p).is_unitary(DEFAULT_UNITARY_TOL);
            }
        }
    }
    let named_ok = CoinOperator::hadamard().is_unitary(DEFAULT_UNITARY_TOL)
        && CoinOperator::identity().is_unitary(DEFAULT_UNITARY_TOL);
    checks.push(Check::new(
        "coin unitarity",
        grid_ok && named_ok,
        "H, I and an 11×9×9 grid of general coins",
    ));

    let mut run = WalkRun::new(
        CoinLayout::uniform(CoinSlot::Cp),
        CoinTable::default(),
        InitialState::Symmetric,
        2,
    )
    .unwrap();
    run.step().unwrap();
    let d1 = run.state().distribution();
    run.step().unwrap();
    let d2 = run.state().distribution();
    let err = [
        (d1.get(1) - 0.5).abs(),
        (d1.get(-1) - 0.5).abs(),
        (d2.get(0) - 0.5).abs(),
        (d2.get(2) - 0.25).abs(),
        (d2.get(-2) - 0.25).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    checks.push(Check::new(
        "hand-derived Hadamard probabilities",
        err <= 1e-14,
        format!("max error {err:e}"),
    ));

    let worst = oracle_cases()
        .iter()
        .map(|c| oracle_deviation(&c.layout(), 8))
        .fold(0.0, f64::max);
    checks.push(Check::new(
        "engine equals dense matrix powers",
        worst <= 1e-12,
        format!("max deviation {worst:e} over t ≤ 8"),
    ));

    for (label, layout) in reference_layouts() {
        let (drift, parity, asym) = run_invariants(&layout, 400);
        checks.push(Check::new(
            "conservation, parity and symmetry",
            drift <= 1e-10 && parity == 0.0 && asym <= 1e-12,
            format!("{label}: drift {drift:e}, parity {parity:e}, asymmetry {asym:e}"),
        ));
    }
    checks
}
