//! Leading-element dichotomous coordinate descent.
//!
//! Solves `Φd = p` approximately with a binary step-size ladder. Every step
//! size is `H·2⁻ᵏ`, so the solution updates only need sign changes, shifts
//! and additions. The floating-point implementation reproduces fixed-point
//! ladder semantics exactly for `d`; the residual subtraction rounds normally.

use crate::complexity::OpCounts;
use crate::error::{check_len, Error, Result};
use crate::linalg::SymMatrix;

/// Design triple of the solver.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DcdParams {
    /// Maximum number of successful coordinate updates (N).
    pub n_max: usize,
    /// Number of bits of the step-size ladder (M).
    pub m_bits: u32,
    /// Amplitude range of the solution entries (H).
    pub h_range: f64,
}

impl DcdParams {
    pub fn new(n_max: usize, m_bits: u32, h_range: f64) -> Result<Self> {
        let p = Self { n_max, m_bits, h_range };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_max == 0 {
            return Err(Error::Config("DCD iteration count N must be positive".into()));
        }
        if !(1..=60).contains(&self.m_bits) {
            return Err(Error::Config(format!("DCD bit count M = {} is outside 1..=60", self.m_bits)));
        }
        if !(self.h_range > 0.0 && self.h_range.is_finite()) {
            return Err(Error::Config(format!("DCD amplitude range H = {} must be positive", self.h_range)));
        }
        Ok(())
    }

    /// Smallest step on the ladder, `H·2⁻ᴹ`.
    pub fn resolution(&self) -> f64 {
        self.h_range * (-(self.m_bits as f64)).exp2()
    }

    /// Worst-case additions of one call, `2NL + N + M`.
    pub fn add_budget(&self, l: usize) -> u64 {
        crate::complexity::dcd_add_budget(l as u64, self.n_max as u64, self.m_bits as u64)
    }
}

impl Default for DcdParams {
    /// `N = 1`, `M = 16`, `H = 1`.
    fn default() -> Self {
        Self { n_max: 1, m_bits: 16, h_range: 1.0 }
    }
}

/// Position on the step-size ladder: `α = H·2⁻ᵋ` while `ε ≤ M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderState {
    pub epsilon: u32,
    pub alpha: f64,
}

impl LadderState {
    pub fn start(params: &DcdParams) -> Self {
        Self { epsilon: 1, alpha: params.h_range / 2.0 }
    }
}

/// How the ladder is handled across calls.
#[derive(Debug)]
pub enum Ladder<'a> {
    /// Start every call from `ε = 1, α = H/2`.
    Reset,
    /// Continue from the given state and leave the final state in it.
    Warm(&'a mut LadderState),
}

/// Bookkeeping of one call.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DcdTally {
    pub updates: usize,
    pub halvings: u32,
    pub adds: u64,
}

impl DcdTally {
    pub fn counts(&self) -> OpCounts {
        OpCounts::adds(self.adds)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DcdResult {
    /// Solution increment; every entry is a multiple of `H·2⁻ᴹ`.
    pub d: Vec<f64>,
    /// Final residual `p − Φd`.
    pub r: Vec<f64>,
    pub updates_done: usize,
    pub halvings_done: u32,
    pub counts: OpCounts,
}

/// Solves `Φd = p`, returning a fresh increment and residual.
pub fn dcd_solve(phi: &SymMatrix, p: &[f64], params: &DcdParams, ladder: Ladder<'_>) -> Result<DcdResult> {
    let l = phi.dim();
    check_len("right-hand side", p.len(), l)?;
    let mut d = vec![0.0; l];
    let mut r = p.to_vec();
    let tally = dcd_solve_in_place(phi, &mut r, &mut d, params, ladder)?;
    Ok(DcdResult {
        d,
        r,
        updates_done: tally.updates,
        halvings_done: tally.halvings,
        counts: tally.counts(),
    })
}

/// Allocation-free variant. `r` holds the right-hand side on entry and the
/// residual on exit; `d` is overwritten with the increment.
pub fn dcd_solve_in_place(
    phi: &SymMatrix,
    r: &mut [f64],
    d: &mut [f64],
    params: &DcdParams,
    ladder: Ladder<'_>,
) -> Result<DcdTally> {
    let l = phi.dim();
    check_len("residual", r.len(), l)?;
    check_len("increment", d.len(), l)?;
    params.validate()?;
    let data = phi.packed();
    let start = |i: usize| i * l - i * i.saturating_sub(1) / 2;
    for i in 0..l {
        let v = data[start(i)];
        if !(v > 0.0) {
            return Err(Error::InvalidInput(format!("diagonal entry {i} is {v}, must be positive")));
        }
    }
    d.iter_mut().for_each(|v| *v = 0.0);

    let (mut state, warm) = match ladder {
        Ladder::Reset => (LadderState::start(params), None),
        Ladder::Warm(s) => (*s, Some(s)),
    };
    let m = params.m_bits;
    let mut tally = DcdTally::default();
    let lu = l as u64;

    for _ in 0..params.n_max {
        let mut lead = 0;
        let mut best = r[0].abs();
        for (k, v) in r.iter().enumerate().skip(1) {
            if v.abs() > best {
                best = v.abs();
                lead = k;
            }
        }
        tally.adds += lu - 1;

        let diag = data[start(lead)];
        loop {
            tally.adds += 1;
            if best <= 0.5 * state.alpha * diag && state.epsilon <= m {
                state.epsilon += 1;
                state.alpha *= 0.5;
                tally.halvings += 1;
            } else {
                break;
            }
        }
        if state.epsilon > m {
            break;
        }

        let step = if r[lead] > 0.0 { state.alpha } else { -state.alpha };
        d[lead] += step;
        // column `lead`: entries above the diagonal sit in earlier rows,
        // the rest is the contiguous tail of row `lead`
        for k in 0..lead {
            r[k] -= step * data[start(k) + lead - k];
        }
        let row = &data[start(lead)..start(lead) + l - lead];
        for (rk, &a) in r[lead..].iter_mut().zip(row) {
            *rk -= step * a;
        }
        tally.adds += 1 + lu;
        tally.updates += 1;
    }

    if let Some(s) = warm {
        *s = state;
    }
    Ok(tally)
}
