use super::{update_stats, AdaptiveFilter, FilterConfig};
use crate::complexity::{OpCounts, StepCounts};
use crate::dcd::{dcd_solve_in_place, DcdParams, Ladder, LadderState};
use crate::error::{check_len, Error, Result};
use crate::linalg::{dot, norm};
use crate::stats::Stats;

/// Recursive TLS filter whose two linear systems are solved by DCD.
///
/// Each step tracks `m₁ ≈ Φₙ⁻¹zₙ` and `m₂ ≈ Φₙ⁻¹wₙ₋₁` through increments
/// solved from residual-recycled right-hand sides, then forms `wₙ` with a
/// single division.
#[derive(Debug, Clone)]
pub struct DcdRtls {
    cfg: FilterConfig,
    stats: Stats,
    dcd: DcdParams,
    gamma_inv: f64,
    m1: Vec<f64>,
    m2: Vec<f64>,
    r1: Vec<f64>,
    r2: Vec<f64>,
    /// `wₙ`
    w: Vec<f64>,
    /// `wₙ₋₁`
    w_prev: Vec<f64>,
    k: Vec<f64>,
    d: Vec<f64>,
    ladders: Option<[LadderState; 2]>,
    last: StepCounts,
    total: StepCounts,
}

impl DcdRtls {
    pub fn new(cfg: FilterConfig, dcd: DcdParams) -> Result<Self> {
        cfg.validate()?;
        dcd.validate()?;
        let l = cfg.order;
        Ok(Self {
            stats: cfg.initial_stats()?,
            cfg,
            dcd,
            gamma_inv: cfg.gamma.recip(),
            m1: vec![0.0; l],
            m2: vec![0.0; l],
            r1: vec![0.0; l],
            r2: vec![0.0; l],
            w: vec![0.0; l],
            w_prev: vec![0.0; l],
            k: vec![0.0; l],
            d: vec![0.0; l],
            ladders: None,
            last: StepCounts::default(),
            total: StepCounts::default(),
        })
    }

    /// Keeps each solver's step-size ladder across time steps instead of
    /// restarting it at `H/2`.
    pub fn with_warm_ladder(mut self) -> Self {
        let s = LadderState::start(&self.dcd);
        self.ladders = Some([s, s]);
        self
    }

    pub fn config(&self) -> &FilterConfig {
        &self.cfg
    }

    pub fn stats(&self) -> &Stats {
        &self.stats
    }

    pub fn m1(&self) -> &[f64] {
        &self.m1
    }

    pub fn m2(&self) -> &[f64] {
        &self.m2
    }

    /// `zₙ − Φₙm₁,ₙ` as left by the solver.
    pub fn r1(&self) -> &[f64] {
        &self.r1
    }

    /// `wₙ₋₁ − Φₙm₂,ₙ` as left by the solver.
    pub fn r2(&self) -> &[f64] {
        &self.r2
    }

    /// `wₙ₋₁`
    pub fn w_prev(&self) -> &[f64] {
        &self.w_prev
    }

    /// Operations of the most recent step.
    pub fn last_counts(&self) -> StepCounts {
        self.last
    }

    /// Operations accumulated over all steps.
    pub fn total_counts(&self) -> StepCounts {
        self.total
    }

    /// One iteration. After an error the filter state is unspecified.
    pub fn step_counted(&mut self, x: &[f64], y: f64) -> Result<StepCounts> {
        let l = self.cfg.order;
        check_len("regressor", x.len(), l)?;
        let lu = l as u64;
        let mut ops = update_stats(&mut self.stats, self.cfg.structured, x, y)?;
        let st = &self.stats;

        // p₁ = λr₁ + (ỹ − x̃ᵀm₁)x̃, built in r₁
        let e1 = y - dot(x, &self.m1);
        for (r, &xi) in self.r1.iter_mut().zip(x) {
            *r = st.scale_by_lambda(*r) + e1 * xi;
        }
        ops += OpCounts::new(2 * lu, 2 * lu, 0, 0) + st.lambda_cost(lu);

        // p₂ = λ(r₂ − wₙ₋₂) + wₙ₋₁ − (x̃ᵀm₂)x̃, built in r₂; `w_prev` still
        // holds wₙ₋₂ and `w` holds wₙ₋₁
        let s2 = dot(x, &self.m2);
        for i in 0..l {
            self.r2[i] = st.scale_by_lambda(self.r2[i] - self.w_prev[i]) + self.w[i] - s2 * x[i];
        }
        ops += OpCounts::new(2 * lu, 4 * lu - 1, 0, 0) + st.lambda_cost(lu);

        let phi = st.phi();
        let mut dcd_adds = 0;
        for (which, (m, r)) in [(&mut self.m1, &mut self.r1), (&mut self.m2, &mut self.r2)]
            .into_iter()
            .enumerate()
        {
            let ladder = match self.ladders.as_mut() {
                Some(states) => Ladder::Warm(&mut states[which]),
                None => Ladder::Reset,
            };
            let tally = dcd_solve_in_place(phi, r, &mut self.d, &self.dcd, ladder)?;
            dcd_adds += tally.adds;
            for (mi, di) in m.iter_mut().zip(&self.d) {
                *mi += di;
            }
        }
        ops += OpCounts::adds(dcd_adds + 2 * lu);

        // k = m₁ + γ⁻¹τm₂
        let c = self.gamma_inv * st.tau();
        for i in 0..l {
            self.k[i] = self.m1[i] + c * self.m2[i];
        }
        ops += OpCounts::new(lu + 1, lu, 0, 0);

        // w = k − (zᵀk / (γ + zᵀm₂)) m₂
        let z = st.z();
        let num = dot(z, &self.k);
        let den = self.cfg.gamma + dot(z, &self.m2);
        let guard = 1e-12 * (self.cfg.gamma + norm(z) * norm(&self.m2));
        if !(den.abs() >= guard) {
            return Err(Error::DegenerateDenominator { value: den, guard });
        }
        let ratio = num / den;
        std::mem::swap(&mut self.w_prev, &mut self.w);
        for i in 0..l {
            self.w[i] = self.k[i] - ratio * self.m2[i];
        }
        ops += OpCounts::new(3 * lu, 3 * lu - 1, 1, 0);

        let counts = StepCounts {
            total: ops,
            dcd_add_actual: dcd_adds,
            dcd_add_budget: 2 * self.dcd.add_budget(l),
        };
        self.last = counts;
        self.total += counts;
        Ok(counts)
    }
}

impl AdaptiveFilter for DcdRtls {
    fn step(&mut self, x: &[f64], y: f64) -> Result<()> {
        self.step_counted(x, y).map(|_| ())
    }

    fn weights(&self) -> &[f64] {
        &self.w
    }
}
