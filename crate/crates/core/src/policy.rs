//! Per-agent UCB sampling rule.
//!
//! An agent keeps, for every arm, how often it pulled the arm itself (`n`),
//! how many samples of the arm it has seen in total including neighbours'
//! messages (`N`), and the sum of those samples (`S`). Its index for arm `i`
//! at step `t` is
//!
//! ```text
//! Q_i(t) = S_i / N_i + sigma_i * sqrt(2 * ln(t^(xi+1) * K) / N_i)
//! ```
//!
//! and it pulls the arm with the largest index. Arms with `N_i = 0` score
//! `+inf`, so unseen arms are tried first.

use rand::Rng;

/// The last reward one agent obtained, as heard by a neighbour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Message {
    pub sender: usize,
    pub arm: usize,
    pub reward: f64,
    pub step: u64,
}

/// `ln(t^(xi+1) * K)` expanded so large `t` cannot overflow.
#[inline]
pub fn confidence_log(t: u64, xi: f64, agents: usize) -> f64 {
    (xi + 1.0) * (t as f64).ln() + (agents as f64).ln()
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgentState {
    agent_id: usize,
    agents: usize,
    xi: f64,
    sigma: Vec<f64>,
    own_pulls: Vec<u64>,
    observations: Vec<u64>,
    reward_sum: Vec<f64>,
}

impl AgentState {
    /// Fresh state for agent `agent_id` in a group of `agents`, with one
    /// `sigma` (square root of the variance proxy) per arm.
    ///
    /// Panics unless `xi > 1`, `agents >= 1` and every sigma is nonnegative.
    pub fn new(agent_id: usize, agents: usize, xi: f64, sigma: Vec<f64>) -> Self {
        assert!(xi > 1.0, "xi must exceed 1, got {xi}");
        assert!(agents >= 1 && agent_id < agents);
        assert!(sigma.iter().all(|&s| s >= 0.0 && s.is_finite()));
        let n = sigma.len();
        Self {
            agent_id,
            agents,
            xi,
            sigma,
            own_pulls: vec![0; n],
            observations: vec![0; n],
            reward_sum: vec![0.0; n],
        }
    }

    pub fn agent_id(&self) -> usize {
        self.agent_id
    }

    pub fn arms(&self) -> usize {
        self.sigma.len()
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// `n_i`: samples the agent drew itself.
    pub fn own_pulls(&self) -> &[u64] {
        &self.own_pulls
    }

    /// `N_i`: own samples plus samples received from neighbours.
    pub fn observations(&self) -> &[u64] {
        &self.observations
    }

    /// `S_i`: sum of every observed sample.
    pub fn reward_sums(&self) -> &[f64] {
        &self.reward_sum
    }

    /// Sample mean of arm `arm`, if it has been observed.
    pub fn estimate(&self, arm: usize) -> Option<f64> {
        match self.observations[arm] {
            0 => None,
            n => Some(self.reward_sum[arm] / n as f64),
        }
    }

    /// Steps this agent has played.
    pub fn steps(&self) -> u64 {
        self.own_pulls.iter().sum()
    }

    /// UCB index of `arm` when choosing at step `t >= 1`.
    pub fn ucb_index(&self, arm: usize, t: u64) -> f64 {
        assert!(t >= 1, "steps are 1-based");
        self.index_with_log(arm, confidence_log(t, self.xi, self.agents))
    }

    #[inline]
    fn index_with_log(&self, arm: usize, log_term: f64) -> f64 {
        let n = self.observations[arm];
        if n == 0 {
            return f64::INFINITY;
        }
        let n = n as f64;
        self.reward_sum[arm] / n + self.sigma[arm] * (2.0 * log_term / n).sqrt()
    }

    /// Picks the arm with the largest index at step `t`. Ties, including
    /// several unexplored arms, are broken uniformly with `rng`; no draw is
    /// taken when the maximum is unique.
    pub fn select_arm<R: Rng + ?Sized>(&self, t: u64, rng: &mut R) -> usize {
        assert!(t >= 1, "steps are 1-based");
        let log_term = confidence_log(t, self.xi, self.agents);
        let mut best = f64::NEG_INFINITY;
        let mut first = 0;
        let mut tied = 0usize;
        for arm in 0..self.arms() {
            let q = self.index_with_log(arm, log_term);
            if q > best {
                best = q;
                first = arm;
                tied = 1;
            } else if q == best {
                tied += 1;
            }
        }
        if tied <= 1 {
            return first;
        }
        let pick = rng.random_range(0..tied);
        (first..self.arms())
            .filter(|&arm| self.index_with_log(arm, log_term) == best)
            .nth(pick)
            .expect("pick < number of tied arms")
    }

    /// Records the agent's own sample.
    pub fn update_own(&mut self, arm: usize, reward: f64) {
        self.own_pulls[arm] += 1;
        self.observations[arm] += 1;
        self.reward_sum[arm] += reward;
    }

    /// Records a neighbour's sample.
    ///
    /// Panics if the message claims to come from this agent; own samples go
    /// through [`AgentState::update_own`].
    pub fn update_from_message(&mut self, msg: &Message) {
        assert_ne!(
            msg.sender, self.agent_id,
            "agent {} received its own message",
            self.agent_id
        );
        self.observations[msg.arm] += 1;
        self.reward_sum[msg.arm] += msg.reward;
    }
}
