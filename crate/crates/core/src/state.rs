//! Walker wavefunction on the lattice window [−t_max, t_max].
//!
//! A walk that starts at the origin moves one site per step, so after at most
//! `t_max` steps it never reaches the window edge and the infinite line is
//! represented exactly.

use crate::coin::{Spinor, C64};
use crate::{Result, WalkError};

/// Tolerance on the norm of a caller-supplied initial spinor.
pub const INITIAL_NORM_TOL: f64 = 1e-12;

/// Coin state placed at the origin at t = 0.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum InitialState {
    /// (|0⟩ + i|1⟩)/√2, which gives a left-right symmetric Hadamard walk.
    #[default]
    Symmetric,
    /// (|0⟩ + |1⟩)/√2
    Asymmetric,
    Custom(Spinor),
}

impl InitialState {
    pub fn spinor(&self) -> Result<Spinor> {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        match *self {
            InitialState::Symmetric => Ok(Spinor::new(C64::new(r, 0.0), C64::new(0.0, r))),
            InitialState::Asymmetric => Ok(Spinor::new(C64::new(r, 0.0), C64::new(r, 0.0))),
            InitialState::Custom(s) => {
                let norm_sqr = s.norm_sqr();
                if s.is_finite() && (norm_sqr - 1.0).abs() <= INITIAL_NORM_TOL {
                    Ok(s)
                } else {
                    Err(WalkError::NotNormalized {
                        norm_sqr,
                        tol: INITIAL_NORM_TOL,
                    })
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    amplitudes: Vec<Spinor>,
    step: usize,
    t_max: usize,
}

impl WalkState {
    pub fn new(t_max: usize, init: InitialState) -> Result<Self> {
        if t_max == 0 {
            return Err(WalkError::ZeroWindow);
        }
        let spinor = init.spinor()?;
        let mut amplitudes = vec![Spinor::ZERO; 2 * t_max + 1];
        amplitudes[t_max] = spinor;
        Ok(Self {
            amplitudes,
            step: 0,
            t_max,
        })
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn t_max(&self) -> usize {
        self.t_max
    }

    /// Leftmost and rightmost positions of the window.
    pub fn window(&self) -> (i64, i64) {
        (-(self.t_max as i64), self.t_max as i64)
    }

    /// Amplitude pair at `x`; zero outside the window.
    pub fn amplitude(&self, x: i64) -> Spinor {
        self.index_of(x)
            .map(|i| self.amplitudes[i])
            .unwrap_or(Spinor::ZERO)
    }

    /// Raw amplitude buffer, position-major from x = −t_max.
    pub fn amplitudes(&self) -> &[Spinor] {
        &self.amplitudes
    }

    pub fn total_probability(&self) -> f64 {
        self.amplitudes.iter().map(Spinor::norm_sqr).sum()
    }

    /// p(x, t) over x ∈ [−t, t].
    pub fn distribution(&self) -> PositionDistribution {
        let lo = self.t_max - self.step;
        let hi = self.t_max + self.step;
        PositionDistribution {
            probs: self.amplitudes[lo..=hi]
                .iter()
                .map(Spinor::norm_sqr)
                .collect(),
            radius: self.step,
        }
    }

    /// Largest |x| carrying a nonzero amplitude, or `None` for the zero state.
    pub fn support_radius(&self) -> Option<usize> {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, s)| **s != Spinor::ZERO)
            .map(|(i, _)| i.abs_diff(self.t_max))
            .max()
    }

    #[inline]
    fn index_of(&self, x: i64) -> Option<usize> {
        let i = x + self.t_max as i64;
        (0..self.amplitudes.len() as i64)
            .contains(&i)
            .then_some(i as usize)
    }

    pub(crate) fn buffer_mut(&mut self) -> &mut Vec<Spinor> {
        &mut self.amplitudes
    }

    pub(crate) fn advance(&mut self) {
        self.step += 1;
    }

    #[cfg(test)]
    pub(crate) fn zeroed(t_max: usize) -> Self {
        Self {
            amplitudes: vec![Spinor::ZERO; 2 * t_max + 1],
            step: 0,
            t_max,
        }
    }
}

/// Position probabilities p(x) on the symmetric window [−radius, radius].
#[derive(Debug, Clone, PartialEq)]
pub struct PositionDistribution {
    probs: Vec<f64>,
    radius: usize,
}

impl PositionDistribution {
    /// Builds a distribution from probabilities listed from x = −radius upward.
    ///
    /// # Panics
    ///
    /// If `probs.len() != 2 * radius + 1`.
    pub fn from_probs(radius: usize, probs: Vec<f64>) -> Self {
        assert_eq!(probs.len(), 2 * radius + 1, "window length mismatch");
        Self { probs, radius }
    }

    /// Builds a distribution from sparse (x, p) pairs; the window is the
    /// smallest symmetric one covering every listed x.
    pub fn from_points(points: &[(i64, f64)]) -> Self {
        let radius = points
            .iter()
            .map(|(x, _)| x.unsigned_abs() as usize)
            .max()
            .unwrap_or(0);
        let mut probs = vec![0.0; 2 * radius + 1];
        for &(x, p) in points {
            probs[(x + radius as i64) as usize] += p;
        }
        Self { probs, radius }
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn get(&self, x: i64) -> f64 {
        let i = x + self.radius as i64;
        if (0..self.probs.len() as i64).contains(&i) {
            self.probs[i as usize]
        } else {
            0.0
        }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// (x, p(x)) pairs in increasing x.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let r = self.radius as i64;
        self.probs
            .iter()
            .enumerate()
            .map(move |(i, &p)| (i as i64 - r, p))
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_symmetric_state_sits_at_origin() {
        let s = WalkState::new(400, InitialState::Symmetric).unwrap();
        let d = s.distribution();
        assert_eq!(d.radius(), 0);
        assert!((d.get(0) - 1.0).abs() <= 1e-15);
        assert!((s.total_probability() - 1.0).abs() <= 1e-15);
        for x in -400..=400 {
            if x != 0 {
                assert_eq!(s.amplitude(x), Spinor::ZERO);
            }
        }
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(
            s.amplitude(0),
            Spinor::new(C64::new(r, 0.0), C64::new(0.0, r))
        );
    }

    #[test]
    fn asymmetric_state_has_equal_real_components() {
        let s = WalkState::new(400, InitialState::Asymmetric).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(
            s.amplitude(0),
            Spinor::new(C64::new(r, 0.0), C64::new(r, 0.0))
        );
    }

    #[test]
    fn custom_state_is_validated() {
        let up = Spinor::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        let s = WalkState::new(10, InitialState::Custom(up)).unwrap();
        assert_eq!(s.amplitude(0), up);

        let bad = Spinor::new(C64::new(1.0, 0.0), C64::new(0.1, 0.0));
        assert!(matches!(
            WalkState::new(10, InitialState::Custom(bad)),
            Err(WalkError::NotNormalized { .. })
        ));
    }

    #[test]
    fn zero_window_is_rejected() {
        assert_eq!(
            WalkState::new(0, InitialState::Symmetric),
            Err(WalkError::ZeroWindow)
        );
    }

    #[test]
    fn zeroed_state_has_no_probability() {
        let s = WalkState::zeroed(5);
        assert_eq!(s.total_probability(), 0.0);
        assert_eq!(s.support_radius(), None);
    }

    #[test]
    fn out_of_window_amplitude_is_zero() {
        let s = WalkState::new(3, InitialState::Symmetric).unwrap();
        assert_eq!(s.amplitude(4), Spinor::ZERO);
        assert_eq!(s.amplitude(-100), Spinor::ZERO);
    }

    #[test]
    fn distribution_from_points() {
        let d = PositionDistribution::from_points(&[(-2, 0.25), (0, 0.5), (2, 0.25)]);
        assert_eq!(d.radius(), 2);
        assert_eq!(d.get(-2), 0.25);
        assert_eq!(d.get(1), 0.0);
        assert_eq!(d.get(7), 0.0);
        assert_eq!(d.total(), 1.0);
        let xs: Vec<i64> = d.iter().map(|(x, _)| x).collect();
        assert_eq!(xs, vec![-2, -1, 0, 1, 2]);
    }
}
