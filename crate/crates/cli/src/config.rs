//! Run configuration and the parsers behind the command-line flags.

use std::path::PathBuf;

use qwalk_core::observables::{DEFAULT_LOCALIZATION_RATIO, DEFAULT_PEAK_HEIGHT};
use qwalk_core::{
    parse_pattern, CaseFamily, CaseSpec, CoinLayout, CoinOperator, CoinParams, CoinTable,
    InitialState, Spinor, StepWindow, C64,
};

use crate::CliError;

pub const DEFAULT_STEPS: usize = 400;

/// What decides the coin at each site.
#[derive(Debug, Clone, PartialEq)]
pub enum Geometry {
    Case(CaseSpec),
    /// Compact block notation such as `H1I13`.
    Pattern(String),
}

impl Geometry {
    /// Builds the geometry from the `--case/--period/--q/--pattern` flags.
    pub fn from_flags(
        case: Option<CaseFamily>,
        period: Option<u32>,
        q: Option<u32>,
        pattern: Option<String>,
    ) -> Result<Self, CliError> {
        match (case, pattern) {
            (Some(_), Some(_)) => Err(CliError::Usage(
                "--case and --pattern are mutually exclusive".into(),
            )),
            (None, Some(p)) => {
                if period.is_some() || q.is_some() {
                    return Err(CliError::Usage(
                        "--period/--q cannot be combined with --pattern".into(),
                    ));
                }
                parse_pattern(&p).map_err(CliError::Config)?;
                Ok(Geometry::Pattern(p))
            }
            (Some(family), None) => {
                let param = case_param(family, period, q)?;
                CaseSpec::new(family, param)
                    .map(Geometry::Case)
                    .map_err(CliError::Config)
            }
            (None, None) => Err(CliError::Usage(
                "one of --case or --pattern is required".into(),
            )),
        }
    }

    /// Layout plus any inline coins the pattern defines.
    pub fn layout(&self) -> Result<(CoinLayout, Vec<CoinOperator>), CliError> {
        match self {
            Geometry::Case(spec) => Ok((spec.layout(), Vec::new())),
            Geometry::Pattern(p) => {
                let parsed = parse_pattern(p).map_err(CliError::Config)?;
                Ok((parsed.layout, parsed.custom))
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            Geometry::Case(spec) => spec.label(),
            Geometry::Pattern(p) => format!("pattern_{p}"),
        }
    }
}

/// Picks the family's parameter from `--period` (families I, II) or `--q`
/// (family III).
pub fn case_param(
    family: CaseFamily,
    period: Option<u32>,
    q: Option<u32>,
) -> Result<u32, CliError> {
    if family.uses_block_length() {
        match (q, period) {
            (Some(q), None) => Ok(q),
            (_, Some(_)) => Err(CliError::Usage(format!(
                "case {family} is parameterised by --q, not --period"
            ))),
            (None, None) => Err(CliError::Usage(format!("case {family} needs --q"))),
        }
    } else {
        match (period, q) {
            (Some(n), None) => Ok(n),
            (_, Some(_)) => Err(CliError::Usage(format!(
                "case {family} is parameterised by --period, not --q"
            ))),
            (None, None) => Err(CliError::Usage(format!("case {family} needs --period"))),
        }
    }
}

/// Thresholds and windows for the localization, recurrence and slope reports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detectors {
    /// Localization window; defaults to [T/2, T].
    pub window: Option<StepWindow>,
    pub loc_ratio: f64,
    pub peak_height: f64,
}

impl Default for Detectors {
    fn default() -> Self {
        Self {
            window: None,
            loc_ratio: DEFAULT_LOCALIZATION_RATIO,
            peak_height: DEFAULT_PEAK_HEIGHT,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub geometry: Geometry,
    pub init: InitialState,
    pub steps: usize,
    pub coin_c0: Option<CoinParams>,
    pub coin_cp: Option<CoinParams>,
    pub output_dir: PathBuf,
    pub detectors: Detectors,
}

impl RunConfig {
    pub fn new(geometry: Geometry, output_dir: impl Into<PathBuf>) -> Self {
        Self {
            geometry,
            init: InitialState::Symmetric,
            steps: DEFAULT_STEPS,
            coin_c0: None,
            coin_cp: None,
            output_dir: output_dir.into(),
            detectors: Detectors::default(),
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.steps == 0 {
            return Err(CliError::Usage("--steps must be at least 1".into()));
        }
        if let Some(w) = self.detectors.window {
            if w.hi > self.steps {
                return Err(CliError::Usage(format!(
                    "--window {}:{} extends past --steps {}",
                    w.lo, w.hi, self.steps
                )));
            }
        }
        self.init.spinor().map_err(CliError::Config)?;
        self.geometry.layout()?;
        Ok(())
    }
}

/// Coin table with the I/H defaults, optionally overridden.
pub fn coin_table(
    c0: Option<CoinParams>,
    cp: Option<CoinParams>,
    custom: Vec<CoinOperator>,
) -> CoinTable {
    let c0 = c0
        .map(CoinOperator::general)
        .unwrap_or_else(CoinOperator::identity);
    let cp = cp
        .map(CoinOperator::general)
        .unwrap_or_else(CoinOperator::hadamard);
    CoinTable::new(c0, cp).with_custom(custom)
}

fn parse_floats(s: &str, expect: usize, what: &str) -> Result<Vec<f64>, String> {
    let values = s
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|e| format!("{what}: `{v}`: {e}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if values.len() != expect {
        return Err(format!(
            "{what}: expected {expect} comma-separated numbers, got {}",
            values.len()
        ));
    }
    Ok(values)
}

/// `rho,theta,phi`, angles in radians.
pub fn parse_coin_params(s: &str) -> Result<CoinParams, String> {
    let v = parse_floats(s, 3, "coin parameters")?;
    CoinParams::new(v[0], v[1], v[2]).map_err(|e| e.to_string())
}

/// `symmetric`, `asymmetric` or `custom:a_re,a_im,b_re,b_im`.
pub fn parse_init(s: &str) -> Result<InitialState, String> {
    match s.to_ascii_lowercase().as_str() {
        "symmetric" => Ok(InitialState::Symmetric),
        "asymmetric" => Ok(InitialState::Asymmetric),
        other => {
            let body = other
                .strip_prefix("custom:")
                .ok_or_else(|| format!("unknown initial state `{s}`"))?;
            let v = parse_floats(body, 4, "custom initial state")?;
            let init =
                InitialState::Custom(Spinor::new(C64::new(v[0], v[1]), C64::new(v[2], v[3])));
            init.spinor().map_err(|e| e.to_string())?;
            Ok(init)
        }
    }
}

/// `LO:HI`
pub fn parse_window(s: &str) -> Result<StepWindow, String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("window `{s}` must look like LO:HI"))?;
    let lo = lo
        .trim()
        .parse()
        .map_err(|e| format!("window start `{lo}`: {e}"))?;
    let hi = hi
        .trim()
        .parse()
        .map_err(|e| format!("window end `{hi}`: {e}"))?;
    StepWindow::new(lo, hi).map_err(|e| e.to_string())
}

/// Parameter lists for sweeps: `7`, `2,4,6`, `2..14` (inclusive),
/// `2..14(even)` or `3..19(odd)`.
pub fn parse_param_range(s: &str) -> Result<Vec<u32>, String> {
    let s = s.trim();
    let (body, filter) = if let Some(b) = s.strip_suffix("(even)") {
        (b, Some(0))
    } else if let Some(b) = s.strip_suffix("(odd)") {
        (b, Some(1))
    } else {
        (s, None)
    };
    let num = |v: &str| v.trim().parse::<u32>().map_err(|e| format!("`{v}`: {e}"));
    let values: Vec<u32> = if let Some((lo, hi)) = body.split_once("..") {
        let (lo, hi) = (num(lo)?, num(hi.trim_start_matches('='))?);
        if lo > hi {
            return Err(format!("empty range `{s}`"));
        }
        (lo..=hi).collect()
    } else {
        body.split(',').map(num).collect::<Result<_, _>>()?
    };
    let values: Vec<u32> = match filter {
        Some(parity) => values.into_iter().filter(|v| v % 2 == parity).collect(),
        None => values,
    };
    if values.is_empty() {
        return Err(format!("range `{s}` selects no parameters"));
    }
    Ok(values)
}
