//! The synchronous group simulation and its Monte Carlo aggregation.
//!
//! One step for every agent: choose an arm from its own counters, draw a
//! reward and record it, then hear the step's rewards of every neighbour whose
//! link survived. Group pseudo-regret grows by the gap of every arm chosen.
//!
//! All randomness of replication `r` comes from streams addressed by
//! `(master_seed, r, role, entity)`: agent `k` owns reward stream `k` and
//! decision stream `k`, and each edge (or ordered pair) owns an edge stream.

use rayon::prelude::*;

use crate::env::{sample_reward, BanditInstance};
use crate::network::{
    build_regular_graph, is_feasible_degree, EdgeMode, EdgeRealization, EdgeStreams, RegularGraph,
};
use crate::policy::{AgentState, Message};
use crate::rng::{self, Role, Stream};
use crate::{Error, Result};

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.96;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// K
    pub agents: usize,
    /// T
    pub horizon: u64,
    /// d
    pub degree: usize,
    /// Link survival probability.
    pub p: f64,
    pub xi: f64,
    pub mode: EdgeMode,
    pub replications: usize,
    pub master_seed: u64,
    pub instance: BanditInstance,
}

impl ExperimentConfig {
    pub fn arms(&self) -> usize {
        self.instance.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.agents == 0 {
            return Err(Error::config("agents", "must be at least 1"));
        }
        if self.horizon == 0 {
            return Err(Error::config("horizon", "must be at least 1"));
        }
        if !is_feasible_degree(self.agents, self.degree) {
            return Err(Error::InfeasibleDegree {
                agents: self.agents,
                degree: self.degree,
            });
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::InvalidProbability(self.p));
        }
        if !(self.xi > 1.0) || !self.xi.is_finite() {
            return Err(Error::config(
                "xi",
                format!("{} must be a finite number above 1", self.xi),
            ));
        }
        if self.replications == 0 {
            return Err(Error::config("replications", "must be at least 1"));
        }
        if self.instance.is_empty() {
            return Err(Error::config("arms", "bandit instance has no arms"));
        }
        Ok(())
    }
}

/// One replication's result.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretTrace {
    /// Group pseudo-regret after steps `1..=T`.
    pub cumulative: Vec<f64>,
    /// `n_i^k(T)` indexed `[agent][arm]`.
    pub own_pulls: Vec<Vec<u64>>,
    /// `N_i^k(T)` indexed `[agent][arm]`.
    pub observations: Vec<Vec<u64>>,
}

/// What happened during one call to [`Simulation::step`].
#[derive(Debug)]
pub struct StepView<'a> {
    pub t: u64,
    pub choices: &'a [usize],
    pub rewards: &'a [f64],
    pub links: &'a EdgeRealization,
    pub regret_increment: f64,
    pub cumulative: f64,
}

/// A single replication advanced one step at a time.
pub struct Simulation<'a> {
    config: &'a ExperimentConfig,
    agents: Vec<AgentState>,
    reward_streams: Vec<Stream>,
    decision_streams: Vec<Stream>,
    edges: EdgeStreams,
    links: EdgeRealization,
    choices: Vec<usize>,
    rewards: Vec<f64>,
    t: u64,
    cumulative: f64,
}

impl<'a> Simulation<'a> {
    /// `graph` must be the circulant graph for `(config.agents, config.degree)`.
    pub fn new(config: &'a ExperimentConfig, graph: &RegularGraph, replication: u64) -> Self {
        assert_eq!(graph.agents(), config.agents);
        assert_eq!(graph.degree(), config.degree);
        let k = config.agents;
        let seed = config.master_seed;
        let sigmas = config.instance.sigmas();
        Self {
            config,
            agents: (0..k)
                .map(|id| AgentState::new(id, k, config.xi, sigmas.clone()))
                .collect(),
            reward_streams: (0..k)
                .map(|id| rng::stream(seed, replication, Role::Reward, id as u64))
                .collect(),
            decision_streams: (0..k)
                .map(|id| rng::stream(seed, replication, Role::Decision, id as u64))
                .collect(),
            edges: EdgeStreams::new(graph, config.mode, seed, replication),
            links: EdgeRealization::empty(k, config.mode),
            choices: vec![0; k],
            rewards: vec![0.0; k],
            t: 0,
            cumulative: 0.0,
        }
    }

    pub fn agents(&self) -> &[AgentState] {
        &self.agents
    }

    /// Steps completed so far.
    pub fn elapsed(&self) -> u64 {
        self.t
    }

    pub fn cumulative_regret(&self) -> f64 {
        self.cumulative
    }

    pub fn step(&mut self) -> StepView<'_> {
        self.t += 1;
        let t = self.t;
        let arms = self.config.instance.arms();
        let gaps = self.config.instance.gaps();

        for (k, agent) in self.agents.iter().enumerate() {
            self.choices[k] = agent.select_arm(t, &mut self.decision_streams[k]);
        }
        let mut increment = 0.0;
        for (k, agent) in self.agents.iter_mut().enumerate() {
            let arm = self.choices[k];
            let reward = sample_reward(&arms[arm], &mut self.reward_streams[k]);
            self.rewards[k] = reward;
            agent.update_own(arm, reward);
            increment += gaps[arm];
        }

        self.edges.realize_into(self.config.p, t, &mut self.links);
        for (k, agent) in self.agents.iter_mut().enumerate() {
            for &j in self.links.incoming(k) {
                agent.update_from_message(&Message {
                    sender: j,
                    arm: self.choices[j],
                    reward: self.rewards[j],
                    step: t,
                });
            }
        }

        self.cumulative += increment;
        StepView {
            t,
            choices: &self.choices,
            rewards: &self.rewards,
            links: &self.links,
            regret_increment: increment,
            cumulative: self.cumulative,
        }
    }

    pub fn into_trace(self, cumulative: Vec<f64>) -> RegretTrace {
        RegretTrace {
            cumulative,
            own_pulls: self.agents.iter().map(|a| a.own_pulls().to_vec()).collect(),
            observations: self
                .agents
                .iter()
                .map(|a| a.observations().to_vec())
                .collect(),
        }
    }
}

/// Runs replication `replication` of `config` to the horizon.
pub fn run_replication(
    config: &ExperimentConfig,
    graph: &RegularGraph,
    replication: u64,
) -> RegretTrace {
    let mut sim = Simulation::new(config, graph, replication);
    let mut cumulative = Vec::with_capacity(config.horizon as usize);
    for _ in 0..config.horizon {
        cumulative.push(sim.step().cumulative);
    }
    sim.into_trace(cumulative)
}

/// `sum_k sum_i gap_i * n_i^k` over per-agent pull counts.
///
/// Panics if an agent's count vector does not have one entry per gap.
pub fn group_pseudo_regret(counts: &[Vec<u64>], gaps: &[f64]) -> f64 {
    counts
        .iter()
        .map(|per_arm| {
            assert_eq!(
                per_arm.len(),
                gaps.len(),
                "counts and gaps disagree on the number of arms"
            );
            per_arm
                .iter()
                .zip(gaps)
                .map(|(&n, &g)| n as f64 * g)
                .sum::<f64>()
        })
        .sum()
}

/// Replication-averaged regret curve with 95% normal confidence half-widths.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateTrace {
    pub mean: Vec<f64>,
    pub ci_half_width: Vec<f64>,
    pub replications: usize,
    pub config: ExperimentConfig,
    /// `E[sum_k n_i^k(T)]` per arm.
    pub mean_own_pulls: Vec<f64>,
    /// `E[sum_k N_i^k(T)]` per arm.
    pub mean_observations: Vec<f64>,
}

impl AggregateTrace {
    pub fn final_mean(&self) -> f64 {
        *self.mean.last().expect("horizon >= 1")
    }

    pub fn final_ci(&self) -> f64 {
        *self.ci_half_width.last().expect("horizon >= 1")
    }

    /// Folds traces in the order given.
    pub fn from_traces(config: &ExperimentConfig, traces: &[RegretTrace]) -> Self {
        let r = traces.len();
        assert!(r > 0, "no traces to aggregate");
        let len = traces[0].cumulative.len();
        let rf = r as f64;
        let mut mean = vec![0.0; len];
        for tr in traces {
            for (m, x) in mean.iter_mut().zip(&tr.cumulative) {
                *m += x;
            }
        }
        mean.iter_mut().for_each(|m| *m /= rf);

        let ci_half_width = if r < 2 {
            vec![0.0; len]
        } else {
            let mut ss = vec![0.0; len];
            for tr in traces {
                for ((s, x), m) in ss.iter_mut().zip(&tr.cumulative).zip(&mean) {
                    *s += (x - m) * (x - m);
                }
            }
            ss.iter()
                .map(|s| Z_95 * (s / (rf - 1.0)).sqrt() / rf.sqrt())
                .collect()
        };

        let arms = config.arms();
        let per_arm_mean = |pick: fn(&RegretTrace) -> &Vec<Vec<u64>>| {
            let mut totals = vec![0.0; arms];
            for tr in traces {
                for agent in pick(tr) {
                    for (t, &c) in totals.iter_mut().zip(agent) {
                        *t += c as f64;
                    }
                }
            }
            totals.into_iter().map(|x| x / rf).collect::<Vec<_>>()
        };

        Self {
            mean,
            ci_half_width,
            replications: r,
            config: config.clone(),
            mean_own_pulls: per_arm_mean(|tr| &tr.own_pulls),
            mean_observations: per_arm_mean(|tr| &tr.observations),
        }
    }
}

/// Runs every replication of `config` (in parallel on the current rayon pool)
/// and aggregates them in replication order.
pub fn run_experiment(config: &ExperimentConfig) -> Result<AggregateTrace> {
    config.validate()?;
    let graph = build_regular_graph(config.agents, config.degree)?;
    let traces: Vec<RegretTrace> = (0..config.replications as u64)
        .into_par_iter()
        .map(|r| run_replication(config, &graph, r))
        .collect();
    Ok(AggregateTrace::from_traces(config, &traces))
}
