//! One-step evolution U = Σ_x S_x (C_x ⊗ I) and its iterates.
//!
//! Each step applies the site coin to every occupied spinor, then moves the
//! coin-|0⟩ component to x+1 and the coin-|1⟩ component to x−1. The update
//! writes into a cleared scratch buffer which is then swapped with the
//! state, so no in-place shifting happens. No renormalisation is applied.

use nalgebra::{DMatrix, DVector};

use crate::coin::{CoinOperator, Spinor, C64};
use crate::layout::{CoinLayout, CoinTable};
use crate::state::{InitialState, WalkState};
use crate::{Result, WalkError};

/// Largest window radius accepted by [`dense_step_matrix`].
pub const MAX_ORACLE_RADIUS: usize = 12;

/// A walk in progress: the state plus the coin assignment driving it.
#[derive(Debug, Clone)]
pub struct WalkRun {
    state: WalkState,
    layout: CoinLayout,
    table: CoinTable,
    // coin for each window site, position-major from x = −t_max
    site_coins: Vec<CoinOperator>,
    scratch: Vec<Spinor>,
}

impl WalkRun {
    /// Prepares a run able to take up to `t_max` steps.
    pub fn new(
        layout: CoinLayout,
        table: CoinTable,
        init: InitialState,
        t_max: usize,
    ) -> Result<Self> {
        layout.check_table(&table)?;
        let state = WalkState::new(t_max, init)?;
        let r = t_max as i64;
        let site_coins = (-r..=r)
            .map(|x| layout.coin_at(&table, x).copied())
            .collect::<Result<Vec<_>>>()?;
        let scratch = vec![Spinor::ZERO; state.amplitudes().len()];
        Ok(Self {
            state,
            layout,
            table,
            site_coins,
            scratch,
        })
    }

    pub fn state(&self) -> &WalkState {
        &self.state
    }

    pub fn into_state(self) -> WalkState {
        self.state
    }

    pub fn layout(&self) -> &CoinLayout {
        &self.layout
    }

    pub fn table(&self) -> &CoinTable {
        &self.table
    }

    pub fn remaining_steps(&self) -> usize {
        self.state.t_max() - self.state.step()
    }

    pub fn step(&mut self) -> Result<()> {
        let t = self.state.step();
        let t_max = self.state.t_max();
        if t >= t_max {
            return Err(WalkError::StepBudgetExhausted { step: t, t_max });
        }
        // Occupied sites are x ∈ [−t, t]; targets are [−t−1, t+1], which
        // stays inside the window because t < t_max.
        let (lo, hi) = (t_max - t, t_max + t);
        self.scratch[lo - 1..=hi + 1].fill(Spinor::ZERO);
        {
            let current = self.state.amplitudes();
            let sites = self.site_coins[lo..=hi].iter().zip(&current[lo..=hi]);
            for (i, (coin, &psi)) in (lo..).zip(sites) {
                let flipped = coin.apply(psi);
                self.scratch[i + 1].a = flipped.a;
                self.scratch[i - 1].b = flipped.b;
            }
        }
        std::mem::swap(self.state.buffer_mut(), &mut self.scratch);
        self.state.advance();
        Ok(())
    }

    pub fn evolve(&mut self, steps: usize) -> Result<()> {
        self.evolve_with(steps, |_| {})
    }

    /// Takes `steps` steps, calling `recorder` with the state after each one.
    /// Fails without stepping if the budget does not cover all of them.
    pub fn evolve_with<F>(&mut self, steps: usize, mut recorder: F) -> Result<()>
    where
        F: FnMut(&WalkState),
    {
        if steps > self.remaining_steps() {
            return Err(WalkError::StepBudgetExhausted {
                step: self.state.step() + steps,
                t_max: self.state.t_max(),
            });
        }
        for _ in 0..steps {
            self.step()?;
            recorder(&self.state);
        }
        Ok(())
    }
}

#[inline]
fn oracle_index(radius: usize, x: i64, coin: usize) -> usize {
    2 * (x + radius as i64) as usize + coin
}

/// Dense matrix of one step restricted to the window [−radius, radius].
///
/// Basis order is position-major, coin-minor: index 2·(x + radius) + c.
/// Built as S · Σ_x (|x⟩⟨x| ⊗ C_x) with S the conditional shift; amplitude
/// shifted past the window edge is dropped, so the matrix is an isometry
/// only on states that stay clear of the boundary.
pub fn dense_step_matrix(
    layout: &CoinLayout,
    table: &CoinTable,
    radius: usize,
) -> Result<DMatrix<C64>> {
    if radius > MAX_ORACLE_RADIUS {
        return Err(WalkError::OracleTooLarge {
            radius,
            max: MAX_ORACLE_RADIUS,
        });
    }
    let dim = 2 * (2 * radius + 1);
    let r = radius as i64;

    let mut coins = DMatrix::<C64>::zeros(dim, dim);
    for x in -r..=r {
        let c = layout.coin_at(table, x)?;
        for row in 0..2 {
            for col in 0..2 {
                coins[(oracle_index(radius, x, row), oracle_index(radius, x, col))] =
                    c.entry(row, col);
            }
        }
    }

    let one = C64::new(1.0, 0.0);
    let mut shift = DMatrix::<C64>::zeros(dim, dim);
    for x in -r..=r {
        if x < r {
            shift[(oracle_index(radius, x + 1, 0), oracle_index(radius, x, 0))] = one;
        }
        if x > -r {
            shift[(oracle_index(radius, x - 1, 1), oracle_index(radius, x, 1))] = one;
        }
    }
    Ok(shift * coins)
}

/// Flattens the window [−radius, radius] of a state into the oracle basis.
pub fn oracle_vector(state: &WalkState, radius: usize) -> DVector<C64> {
    let r = radius as i64;
    let mut v = DVector::<C64>::zeros(2 * (2 * radius + 1));
    for x in -r..=r {
        let s = state.amplitude(x);
        v[oracle_index(radius, x, 0)] = s.a;
        v[oracle_index(radius, x, 1)] = s.b;
    }
    v
}
