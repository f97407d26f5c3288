//! Coin-space algebra: 2×2 unitaries acting on the internal two-level state.
//!
//! Basis order is fixed as (|0⟩, |1⟩); rows index the output component and
//! columns the input component. Coin |0⟩ is the component that the shift
//! moves to x+1.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use crate::{Result, WalkError};

pub type C64 = num_complex::Complex64;

/// Entrywise tolerance used for unitarity checks unless the caller overrides it.
pub const DEFAULT_UNITARY_TOL: f64 = 1e-12;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Parameters (ρ, θ, φ) of the general two-dimensional coin
///
/// ```text
/// ⎡ √ρ           √(1−ρ)·e^{iθ}     ⎤
/// ⎣ √(1−ρ)·e^{iφ}  −√ρ·e^{i(θ+φ)}  ⎦
/// ```
///
/// with 0 ≤ ρ ≤ 1 and both angles in [0, π].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinParams {
    rho: f64,
    theta: f64,
    phi: f64,
}

impl CoinParams {
    pub fn new(rho: f64, theta: f64, phi: f64) -> Result<Self> {
        check_range("rho", rho, 0.0, 1.0)?;
        check_range("theta", theta, 0.0, PI)?;
        check_range("phi", phi, 0.0, PI)?;
        Ok(Self { rho, theta, phi })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

fn check_range(field: &'static str, value: f64, min: f64, max: f64) -> Result<()> {
    // NaN fails both comparisons and is rejected here as well.
    if value >= min && value <= max {
        Ok(())
    } else {
        Err(WalkError::CoinParamOutOfRange {
            field,
            value,
            min,
            max,
        })
    }
}

/// Amplitude pair (a, b) on coin states |0⟩ and |1⟩ at a single site.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Spinor {
    pub a: C64,
    pub b: C64,
}

impl Spinor {
    pub const ZERO: Spinor = Spinor { a: ZERO, b: ZERO };

    pub const fn new(a: C64, b: C64) -> Self {
        Self { a, b }
    }

    /// |a|² + |b|²
    #[inline]
    pub fn norm_sqr(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr()
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite()
    }

    /// Largest componentwise modulus of `self - other`.
    pub fn max_diff(&self, other: &Spinor) -> f64 {
        (self.a - other.a).norm().max((self.b - other.b).norm())
    }
}

/// A 2×2 complex matrix acting on [`Spinor`]s.
///
/// Constructors for the named coins build their entries from exact
/// constants; only [`CoinOperator::general`] goes through trigonometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinOperator {
    entries: [[C64; 2]; 2],
}

impl CoinOperator {
    /// Wraps raw entries without checking unitarity. Use [`is_unitary`]
    /// before evolving with a hand-built matrix.
    ///
    /// [`is_unitary`]: CoinOperator::is_unitary
    pub const fn from_entries(entries: [[C64; 2]; 2]) -> Self {
        Self { entries }
    }

    /// (1/√2)·[[1, 1], [1, −1]]
    pub const fn hadamard() -> Self {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        let mh = C64::new(-FRAC_1_SQRT_2, 0.0);
        Self::from_entries([[h, h], [h, mh]])
    }

    pub const fn identity() -> Self {
        Self::from_entries([[ONE, ZERO], [ZERO, ONE]])
    }

    /// The general parameterised coin. Always unitary for valid parameters.
    pub fn general(params: CoinParams) -> Self {
        let CoinParams { rho, theta, phi } = params;
        let diag = rho.sqrt();
        let off = (1.0 - rho).sqrt();
        Self::from_entries([
            [C64::new(diag, 0.0), C64::from_polar(off, theta)],
            [
                C64::from_polar(off, phi),
                -C64::from_polar(diag, theta + phi),
            ],
        ])
    }

    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.entries[row][col]
    }

    pub fn entries(&self) -> &[[C64; 2]; 2] {
        &self.entries
    }

    #[inline]
    pub fn apply(&self, s: Spinor) -> Spinor {
        let [[m00, m01], [m10, m11]] = self.entries;
        Spinor {
            a: m00 * s.a + m01 * s.b,
            b: m10 * s.a + m11 * s.b,
        }
    }

    pub fn adjoint(&self) -> Self {
        let e = &self.entries;
        Self::from_entries([
            [e[0][0].conj(), e[1][0].conj()],
            [e[0][1].conj(), e[1][1].conj()],
        ])
    }

    pub fn compose(&self, rhs: &CoinOperator) -> Self {
        let mut out = [[ZERO; 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell =
                    self.entries[r][0] * rhs.entries[0][c] + self.entries[r][1] * rhs.entries[1][c];
            }
        }
        Self::from_entries(out)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_diff(&self, other: &CoinOperator) -> f64 {
        let mut worst = 0.0_f64;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.entries[r][c] - other.entries[r][c]).norm());
            }
        }
        worst
    }

    /// True iff every entry of C†C − I has modulus at most `tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        self.adjoint().compose(self).max_diff(&Self::identity()) <= tol
    }
}

impl fmt::Display for CoinOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = &self.entries;
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            e[0][0], e[0][1], e[1][0], e[1][1]
        )
    }
}
