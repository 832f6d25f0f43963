//! General insertion algorithm for a Farey sequence of Γ0(N), any `N > 3`.
//!
//! Starting from `{0/1, 1/1}` (or from the order-`⌊√N⌋` Farey sequence),
//! repeatedly insert the mediant into the free side of least denominator
//! sum, leftmost on ties, until no free side remains.

use crate::arith::isqrt;
use crate::error::{Error, Result};
use crate::farey::{farey_order_sequence, mediant, FareyFraction, FareySequence};
use crate::gamma0::{index_gamma0, label_all_sides, Level, PairingCounter};

/// Starting sequence for the insertion loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Seed {
    /// `{0/1, 1/1}`.
    #[default]
    Unit,
    /// The Farey sequence of order `⌊√N⌋`.
    OrderR,
}

/// In-progress state of the insertion algorithm.
#[derive(Clone, Debug)]
pub struct ClltState {
    entries: Vec<FareyFraction>,
    level: Level,
    counter: PairingCounter,
    steps: usize,
}

impl ClltState {
    pub fn new(level: &Level, seed: Seed) -> Result<Self> {
        if level.value() <= 3 {
            return Err(Error::InvalidLevel {
                level: level.value(),
                reason: "the insertion algorithm needs N > 3",
            });
        }
        let seq = match seed {
            Seed::Unit => FareySequence::unit(),
            Seed::OrderR => farey_order_sequence(isqrt(level.value()))?,
        };
        let counter = PairingCounter::from_sequence(&seq, level);
        Ok(ClltState {
            entries: seq.into_entries(),
            level: level.clone(),
            counter,
            steps: 0,
        })
    }

    pub fn level(&self) -> &Level {
        &self.level
    }

    pub fn entries(&self) -> &[FareyFraction] {
        &self.entries
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    fn side_dens(&self, i: usize) -> (i64, i64) {
        (self.entries[i].den(), self.entries[i + 1].den())
    }

    /// Current work-set: indices of all free sides, recomputed from scratch.
    pub fn free_sides(&self) -> Vec<usize> {
        (0..self.entries.len() - 1)
            .filter(|&i| {
                let (a, b) = self.side_dens(i);
                self.counter.is_free(a, b)
            })
            .collect()
    }

    /// Performs one insertion. Returns the side that received the mediant,
    /// or `None` when no free side is left.
    pub fn step(&mut self) -> Result<Option<usize>> {
        let chosen = self
            .free_sides()
            .into_iter()
            .min_by_key(|&i| {
                let (a, b) = self.side_dens(i);
                (a as i128 + b as i128, i)
            });
        let Some(i) = chosen else { return Ok(None) };
        let (l, r) = (self.entries[i], self.entries[i + 1]);
        let m = mediant(l, r)?;
        self.counter.remove(l.den(), r.den());
        self.counter.add(l.den(), m.den());
        self.counter.add(m.den(), r.den());
        self.entries.insert(i + 1, m);
        self.steps += 1;
        Ok(Some(i))
    }

    pub fn into_sequence(self) -> FareySequence {
        FareySequence::from_entries_unchecked(self.entries)
    }
}

/// Runs the insertion algorithm to completion and labels the result.
pub fn run_cllt(level: &Level, seed: Seed) -> Result<FareySequence> {
    let mut state = ClltState::new(level, seed)?;
    let cap = 10 * index_gamma0(level) as usize;
    while state.step()?.is_some() {
        if state.steps() > cap {
            return Err(Error::Internal(format!(
                "insertion loop exceeded {cap} steps at level {}",
                level.value()
            )));
        }
    }
    Ok(label_all_sides(&state.into_sequence(), level))
}
