//! Closed-form quantities for the networked UCB rule: the sample threshold
//! `eta`, the per-step tail bound on estimate deviations, and the upper bound
//! on expected group pseudo-regret.
//!
//! Logarithms are natural. `ln(t^(xi+1) K)` is always expanded as
//! `(xi+1) ln t + ln K`.

use crate::env::BanditInstance;
use crate::policy::confidence_log;
use crate::{Error, Result};

pub const DEFAULT_ZETA: f64 = 2.0;

/// The grid searched by [`tightest_zeta`]: 1.1, 1.2, …, 8.0.
pub fn zeta_grid() -> impl Iterator<Item = f64> {
    (11..=80).map(|i| f64::from(i) / 10.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundParams {
    /// Peeling constant of the tail bound, > 1.
    pub zeta: f64,
    pub xi: f64,
    pub agents: usize,
    pub degree: usize,
    pub p: f64,
    pub horizon: u64,
    pub gaps: Vec<f64>,
    pub variance_proxies: Vec<f64>,
}

impl BoundParams {
    pub fn new(
        instance: &BanditInstance,
        agents: usize,
        degree: usize,
        p: f64,
        xi: f64,
        zeta: f64,
        horizon: u64,
    ) -> Self {
        Self {
            zeta,
            xi,
            agents,
            degree,
            p,
            horizon,
            gaps: instance.gaps().to_vec(),
            variance_proxies: instance.arms().iter().map(|a| a.variance_proxy()).collect(),
        }
    }

    pub fn with_horizon(&self, horizon: u64) -> Self {
        Self {
            horizon,
            ..self.clone()
        }
    }

    pub fn with_zeta(&self, zeta: f64) -> Self {
        Self {
            zeta,
            ..self.clone()
        }
    }

    fn validate(&self) -> Result<()> {
        check_zeta_xi(self.zeta, self.xi)?;
        if self.agents == 0 {
            return Err(Error::config("agents", "must be at least 1"));
        }
        if self.horizon == 0 {
            return Err(Error::config("horizon", "must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::InvalidProbability(self.p));
        }
        if self.gaps.len() != self.variance_proxies.len() {
            return Err(Error::config(
                "arms",
                "gaps and variance proxies differ in length",
            ));
        }
        Ok(())
    }
}

fn check_zeta_xi(zeta: f64, xi: f64) -> Result<()> {
    if !(zeta > 1.0) || !zeta.is_finite() {
        return Err(Error::config(
            "zeta",
            format!("{zeta} must be a finite number above 1"),
        ));
    }
    if !(xi > 1.0) || !xi.is_finite() {
        return Err(Error::config(
            "xi",
            format!("{xi} must be a finite number above 1"),
        ));
    }
    Ok(())
}

/// Observation count beyond which the confidence radius of an arm with gap
/// `gap` falls below `gap / 2`: `(8 sigma^2 / gap^2) ln(t^(xi+1) K)`.
pub fn eta(t: u64, sigma: f64, gap: f64, xi: f64, agents: usize) -> Result<f64> {
    if !(gap > 0.0) {
        return Err(Error::UndefinedThreshold);
    }
    if t == 0 {
        return Err(Error::config("t", "steps are 1-based"));
    }
    Ok(8.0 * sigma * sigma / (gap * gap) * confidence_log(t, xi, agents))
}

/// Upper bound on `P(|mu_hat - mu| > C)` at step `t`:
/// `ln((d+1) t) / (ln(zeta) t^(xi+1) K)`.
pub fn tail_bound(t: u64, degree: usize, xi: f64, zeta: f64, agents: usize) -> Result<f64> {
    check_zeta_xi(zeta, xi)?;
    if t == 0 || agents == 0 {
        return Err(Error::config(
            "t",
            "steps and agent counts must be positive",
        ));
    }
    let t = t as f64;
    let numerator = ((degree as f64 + 1.0) * t).ln();
    let denominator = ((xi + 1.0) * t.ln()).exp() * agents as f64;
    Ok(numerator / denominator / zeta.ln())
}

/// `K / (1 + p d)`: how much neighbour samples shrink the logarithmic term.
pub fn bound_first_term_prefactor(agents: usize, p: f64, degree: usize) -> f64 {
    agents as f64 / (1.0 + p * degree as f64)
}

/// Upper bound on expected group pseudo-regret at `params.horizon`.
///
/// Every suboptimal arm contributes
/// `K/(1+pd) * 8 sigma^2/gap * ((xi+1) ln T + ln K)` plus the horizon-free
/// `2 gap / (xi^2 ln zeta) * (xi^2 ln(d+1) + xi ln(d+1) + 1)`.
pub fn regret_bound(params: &BoundParams) -> Result<f64> {
    params.validate()?;
    let (first, second) = bound_terms(
        params,
        bound_first_term_prefactor(params.agents, params.p, params.degree),
        (params.degree as f64 + 1.0).ln(),
    );
    Ok(first + second)
}

/// The two sums of the bound, split out for reporting.
pub fn regret_bound_terms(params: &BoundParams) -> Result<(f64, f64)> {
    params.validate()?;
    Ok(bound_terms(
        params,
        bound_first_term_prefactor(params.agents, params.p, params.degree),
        (params.degree as f64 + 1.0).ln(),
    ))
}

fn bound_terms(params: &BoundParams, prefactor: f64, log_neighbourhood: f64) -> (f64, f64) {
    let xi = params.xi;
    let log_term = confidence_log(params.horizon, xi, params.agents);
    let constant =
        (xi * xi * log_neighbourhood + xi * log_neighbourhood + 1.0) / (xi * xi * params.zeta.ln());
    let mut first = 0.0;
    let mut second = 0.0;
    for (&gap, &var) in params.gaps.iter().zip(&params.variance_proxies) {
        if gap > 0.0 {
            first += prefactor * (8.0 * var / gap) * log_term;
            second += 2.0 * gap * constant;
        }
    }
    (first, second)
}

/// The bound written directly for a complete graph (`d = K - 1`), with
/// `K / (1 + p (K-1))` and `ln K` in place of `ln(d+1)`. `params.degree` is
/// ignored.
pub fn complete_graph_regret_bound(params: &BoundParams) -> Result<f64> {
    params.validate()?;
    let k = params.agents as f64;
    let xi = params.xi;
    let horizon = params.horizon as f64;
    let mut first = 0.0;
    let mut second = 0.0;
    for (&gap, &var) in params.gaps.iter().zip(&params.variance_proxies) {
        if gap <= 0.0 {
            continue;
        }
        first += k / (1.0 + params.p * (k - 1.0))
            * (8.0 * var / gap)
            * ((xi + 1.0) * horizon.ln() + k.ln());
        second +=
            2.0 * gap * ((xi * xi * k.ln() + xi * k.ln() + 1.0) / (xi * xi * params.zeta.ln()));
    }
    Ok(first + second)
}

/// Bound evaluated at every horizon `1..=horizon`.
pub fn bound_curve(params: &BoundParams, horizon: u64) -> Result<Vec<f64>> {
    (1..=horizon)
        .map(|t| regret_bound(&params.with_horizon(t)))
        .collect()
}

/// The smallest bound over [`zeta_grid`], with the zeta achieving it.
pub fn tightest_zeta(params: &BoundParams) -> Result<(f64, f64)> {
    let mut best = (f64::NAN, f64::INFINITY);
    for zeta in zeta_grid() {
        let b = regret_bound(&params.with_zeta(zeta))?;
        if b < best.1 {
            best = (zeta, b);
        }
    }
    Ok(best)
}
