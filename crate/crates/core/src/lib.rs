//! Exact simulation of discrete-time coined quantum walks on the integer line
//! where the coin applied at each site follows a periodic pattern.
//!
//! The crate is organised bottom-up:
//!
//! - [`coin`]: 2×2 unitary coin operators and the spinor they act on.
//! - [`state`]: the walker wavefunction on a bounded lattice window and its
//!   position distribution.
//! - [`layout`]: periodic site-to-coin assignments, including the six
//!   standard two-coin case families and a compact pattern notation.
//! - [`engine`]: the coin-then-shift step, multi-step evolution with a
//!   per-step recorder, and a dense-matrix oracle for small windows.
//! - [`observables`]: ⟨x⟩, σ, P₀ series and the localization, recurrence
//!   and slope detectors built on them.
//!
//! ```
//! use qwalk_core::{CaseFamily, CaseSpec, CoinTable, InitialState, observables};
//!
//! let spec = CaseSpec::new(CaseFamily::IIIB, 7).unwrap();
//! let series = observables::summarize_run(
//!     &spec.layout(),
//!     &CoinTable::default(),
//!     InitialState::Symmetric,
//!     40,
//! )
//! .unwrap();
//! assert_eq!(series.len(), 41);
//! assert!((series.p0[0] - 1.0).abs() < 1e-15);
//! ```

pub mod coin;
pub mod engine;
mod error;
pub mod layout;
pub mod observables;
pub mod state;

pub use coin::{CoinOperator, CoinParams, Spinor, C64, DEFAULT_UNITARY_TOL};
pub use engine::{dense_step_matrix, WalkRun};
pub use error::WalkError;
pub use layout::{
    parse_pattern, CaseFamily, CaseSpec, CoinLayout, CoinSlot, CoinTable, ParsedPattern,
};
pub use observables::{LocalizationReport, SlopeFit, StepWindow, SummarySeries};
pub use state::{InitialState, PositionDistribution, WalkState};

pub type Result<T, E = WalkError> = std::result::Result<T, E>;
