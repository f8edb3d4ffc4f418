//! Fixed d-regular communication graphs and their per-step link realizations.

use std::fmt;
use std::str::FromStr;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::rng::{self, unit_f64, Role, Stream};
use crate::{Error, Result};

/// Whether a link failure silences both directions or just one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeMode {
    /// One Bernoulli draw per graph edge per step; a live edge carries
    /// messages both ways.
    #[default]
    Undirected,
    /// One Bernoulli draw per ordered neighbour pair per step.
    Directed,
}

impl fmt::Display for EdgeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeMode::Undirected => "undirected",
            EdgeMode::Directed => "directed",
        })
    }
}

impl FromStr for EdgeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "undirected" => Ok(EdgeMode::Undirected),
            "directed" => Ok(EdgeMode::Directed),
            other => Err(Error::config(
                "mode",
                format!("`{other}` is not one of undirected, directed"),
            )),
        }
    }
}

/// A circulant d-regular graph on `agents` nodes.
///
/// Node `k` is joined to `k ± 1, …, k ± ⌊d/2⌋ (mod K)`, and also to
/// `k + K/2` when `d` is odd.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularGraph {
    agents: usize,
    degree: usize,
    offsets: Vec<usize>,
    neighbors: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl RegularGraph {
    pub fn agents(&self) -> usize {
        self.agents
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Positive circulant offsets used by the construction.
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    /// Sorted neighbours of `node`.
    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.neighbors[node]
    }

    /// Undirected edges `(u, v)` with `u < v`, sorted. An edge's position
    /// here is its id.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        self.neighbors[a].binary_search(&b).is_ok()
    }

    /// One-line description for run metadata.
    pub fn summary(&self) -> GraphSummary {
        GraphSummary {
            agents: self.agents,
            degree: self.degree,
            edges: self.edges.len(),
            offsets: self.offsets.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub agents: usize,
    pub degree: usize,
    pub edges: usize,
    pub offsets: Vec<usize>,
}

/// Whether a `degree`-regular graph on `agents` nodes exists.
pub fn is_feasible_degree(agents: usize, degree: usize) -> bool {
    agents >= 1 && degree < agents && (degree * agents).is_multiple_of(2)
}

/// Builds the circulant `degree`-regular graph on `agents` nodes.
pub fn build_regular_graph(agents: usize, degree: usize) -> Result<RegularGraph> {
    if !is_feasible_degree(agents, degree) {
        return Err(Error::InfeasibleDegree { agents, degree });
    }
    let mut offsets: Vec<usize> = (1..=degree / 2).collect();
    if degree % 2 == 1 {
        offsets.push(agents / 2);
    }
    circulant(agents, &offsets)
}

/// Circulant graph joining `k` to `k ± o (mod K)` for every offset `o`.
///
/// Offsets must be distinct, in `1..=K/2`; an offset of exactly `K/2`
/// contributes one neighbour instead of two.
pub fn circulant(agents: usize, offsets: &[usize]) -> Result<RegularGraph> {
    let mut sorted = offsets.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if agents == 0
        || sorted.len() != offsets.len()
        || sorted.iter().any(|&o| o == 0 || 2 * o > agents)
    {
        return Err(Error::config(
            "offsets",
            format!("{offsets:?} must be distinct values in 1..={}", agents / 2),
        ));
    }
    let neighbors: Vec<Vec<usize>> = (0..agents)
        .map(|k| {
            let mut adj: Vec<usize> = offsets
                .iter()
                .flat_map(|&o| [(k + o) % agents, (k + agents - o) % agents])
                .collect();
            adj.sort_unstable();
            adj.dedup();
            adj
        })
        .collect();
    let edges = neighbors
        .iter()
        .enumerate()
        .flat_map(|(u, adj)| adj.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
        .collect();
    Ok(RegularGraph {
        agents,
        degree: neighbors.first().map_or(0, Vec::len),
        offsets: offsets.to_vec(),
        neighbors,
        edges,
    })
}

/// The links that carried a message at one step.
///
/// Self-observation `(k, k)` is always present and is not stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeRealization {
    step: u64,
    mode: EdgeMode,
    /// Sorted senders heard by each receiver, excluding itself.
    incoming: Vec<Vec<usize>>,
}

impl EdgeRealization {
    pub fn empty(agents: usize, mode: EdgeMode) -> Self {
        Self {
            step: 0,
            mode,
            incoming: vec![Vec::new(); agents],
        }
    }

    pub fn step(&self) -> u64 {
        self.step
    }

    pub fn mode(&self) -> EdgeMode {
        self.mode
    }

    pub fn agents(&self) -> usize {
        self.incoming.len()
    }

    /// Senders other than `receiver` that `receiver` heard this step.
    pub fn incoming(&self, receiver: usize) -> &[usize] {
        &self.incoming[receiver]
    }

    /// Whether `receiver` observed `sender`'s reward this step.
    pub fn contains(&self, receiver: usize, sender: usize) -> bool {
        receiver == sender || self.incoming[receiver].binary_search(&sender).is_ok()
    }

    /// All realized `(receiver, sender)` pairs including self-pairs.
    pub fn links(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.incoming.iter().enumerate().flat_map(|(k, senders)| {
            std::iter::once((k, k)).chain(senders.iter().map(move |&j| (k, j)))
        })
    }

    /// Number of realized pairs with `receiver != sender`.
    pub fn cross_link_count(&self) -> usize {
        self.incoming.iter().map(Vec::len).sum()
    }
}

/// Every agent that receives `sender`'s reward in `real`, including `sender`.
pub fn receivers_of(real: &EdgeRealization, sender: usize) -> Vec<usize> {
    (0..real.agents())
        .filter(|&k| real.contains(k, sender))
        .collect()
}

/// Per-edge random streams for one replication.
///
/// Undirected mode keys one stream per graph edge; directed mode keys one per
/// ordered neighbour pair `(receiver, sender)` with id `receiver * K + sender`.
/// Step `t` always consumes the `t`-th `u64` of every stream, so a realization
/// depends only on the step and the stream addresses.
pub struct EdgeStreams {
    mode: EdgeMode,
    agents: usize,
    /// (receiver, sender, stream); undirected entries use receiver < sender.
    entries: Vec<(usize, usize, Stream)>,
    next_step: u64,
}

impl EdgeStreams {
    pub fn new(graph: &RegularGraph, mode: EdgeMode, master_seed: u64, replication: u64) -> Self {
        let k = graph.agents();
        let entries = match mode {
            EdgeMode::Undirected => graph
                .edges()
                .iter()
                .enumerate()
                .map(|(id, &(u, v))| {
                    (
                        u,
                        v,
                        rng::stream(master_seed, replication, Role::Edge, id as u64),
                    )
                })
                .collect(),
            EdgeMode::Directed => (0..k)
                .flat_map(|r| graph.neighbors(r).iter().map(move |&s| (r, s)))
                .map(|(r, s)| {
                    let id = (r * k + s) as u64;
                    (r, s, rng::stream(master_seed, replication, Role::Edge, id))
                })
                .collect(),
        };
        Self {
            mode,
            agents: k,
            entries,
            next_step: 1,
        }
    }

    pub fn mode(&self) -> EdgeMode {
        self.mode
    }

    fn seek(&mut self, step: u64) {
        if step != self.next_step {
            // Each step consumes two 32-bit words.
            let pos = 2 * u128::from(step - 1);
            for (_, _, s) in &mut self.entries {
                s.set_word_pos(pos);
            }
        }
        self.next_step = step + 1;
    }

    /// Samples step `step` (1-based) into `out`, reusing its buffers.
    /// `p` must already be validated.
    pub fn realize_into(&mut self, p: f64, step: u64, out: &mut EdgeRealization) {
        assert!(step >= 1, "steps are 1-based");
        self.seek(step);
        out.step = step;
        out.mode = self.mode;
        out.incoming.resize_with(self.agents, Vec::new);
        for senders in &mut out.incoming {
            senders.clear();
        }
        for (r, s, stream) in &mut self.entries {
            if unit_f64(stream.next_u64()) < p {
                out.incoming[*r].push(*s);
                if self.mode == EdgeMode::Undirected {
                    out.incoming[*s].push(*r);
                }
            }
        }
        for senders in &mut out.incoming {
            senders.sort_unstable();
        }
    }
}

/// Samples which links carry a message at `step`.
pub fn realize_edges(
    graph: &RegularGraph,
    p: f64,
    mode: EdgeMode,
    step: u64,
    streams: &mut EdgeStreams,
) -> Result<EdgeRealization> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    assert_eq!(streams.mode(), mode, "edge streams opened for another mode");
    assert_eq!(
        streams.agents,
        graph.agents(),
        "edge streams opened for another graph"
    );
    let mut out = EdgeRealization::empty(graph.agents(), mode);
    streams.realize_into(p, step, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn complete_graph() {
        let g = build_regular_graph(20, 19).unwrap();
        assert_eq!(g.edge_count(), 190);
        for k in 0..20 {
            assert_eq!(g.neighbors(k).len(), 19);
            assert!(!g.neighbors(k).contains(&k));
        }
    }

    #[test]
    fn ring() {
        let g = build_regular_graph(20, 2).unwrap();
        assert_eq!(g.edge_count(), 20);
        assert_eq!(g.offsets(), &[1]);
        // Walking +1 from node 0 visits every node once: a single 20-cycle.
        let mut seen = [false; 20];
        let (mut prev, mut cur) = (19, 0);
        for _ in 0..20 {
            assert!(!seen[cur]);
            seen[cur] = true;
            let next = *g.neighbors(cur).iter().find(|&&n| n != prev).unwrap();
            prev = cur;
            cur = next;
        }
        assert_eq!(cur, 0);
    }

    #[test]
    fn odd_degree_uses_antipode() {
        let g = build_regular_graph(6, 3).unwrap();
        assert_eq!(g.offsets(), &[1, 3]);
        assert_eq!(g.edge_count(), 9);
        assert_eq!(g.neighbors(0), &[1, 3, 5]);
        assert_eq!(g.neighbors(4), &[1, 3, 5]);
    }

    #[test]
    fn explicit_offsets() {
        let g = circulant(20, &[1, 5]).unwrap();
        assert_eq!(g.degree(), 4);
        assert_eq!(g.neighbors(0), &[1, 5, 15, 19]);
        assert_eq!(circulant(20, &[10]).unwrap().degree(), 1);
        assert!(circulant(20, &[0]).is_err());
        assert!(circulant(20, &[11]).is_err());
        assert!(circulant(20, &[2, 2]).is_err());
    }

    #[test]
    fn infeasible_degrees() {
        assert!(matches!(
            build_regular_graph(5, 3),
            Err(Error::InfeasibleDegree { .. })
        ));
        assert!(matches!(
            build_regular_graph(4, 4),
            Err(Error::InfeasibleDegree { .. })
        ));
        assert!(matches!(
            build_regular_graph(0, 0),
            Err(Error::InfeasibleDegree { .. })
        ));
        assert_eq!(build_regular_graph(1, 0).unwrap().edge_count(), 0);
    }

    proptest! {
        #[test]
        fn circulant_is_regular_and_symmetric(k in 1usize..40, d in 0usize..40) {
            prop_assume!(is_feasible_degree(k, d));
            let g = build_regular_graph(k, d).unwrap();
            prop_assert_eq!(g.edge_count() * 2, k * d);
            for a in 0..k {
                prop_assert_eq!(g.neighbors(a).len(), d);
                prop_assert!(!g.is_adjacent(a, a));
                for &b in g.neighbors(a) {
                    prop_assert!(g.is_adjacent(b, a));
                }
            }
        }

        #[test]
        fn realizations_respect_graph_and_mode(
            k in 2usize..16, d in 1usize..15, p in 0.0f64..=1.0, seed in any::<u64>(), directed in any::<bool>()
        ) {
            prop_assume!(is_feasible_degree(k, d));
            let g = build_regular_graph(k, d).unwrap();
            let mode = if directed { EdgeMode::Directed } else { EdgeMode::Undirected };
            let mut streams = EdgeStreams::new(&g, mode, seed, 0);
            for step in 1..=5 {
                let real = realize_edges(&g, p, mode, step, &mut streams).unwrap();
                for a in 0..k {
                    prop_assert!(real.contains(a, a));
                    for &b in real.incoming(a) {
                        prop_assert!(g.is_adjacent(a, b));
                        if mode == EdgeMode::Undirected {
                            prop_assert!(real.contains(b, a));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn extreme_probabilities() {
        let g = build_regular_graph(20, 19).unwrap();
        for mode in [EdgeMode::Undirected, EdgeMode::Directed] {
            let mut streams = EdgeStreams::new(&g, mode, 3, 0);
            for step in 1..=20 {
                let all = realize_edges(&g, 1.0, mode, step, &mut streams).unwrap();
                assert_eq!(all.cross_link_count(), 380);
                assert_eq!(receivers_of(&all, 4), (0..20).collect::<Vec<_>>());
            }
            let none = realize_edges(&g, 0.0, mode, 21, &mut streams).unwrap();
            assert_eq!(none.cross_link_count(), 0);
            assert_eq!(none.links().count(), 20);
            assert_eq!(receivers_of(&none, 7), vec![7]);
        }
    }

    #[test]
    fn undirected_receivers_are_symmetric() {
        let g = build_regular_graph(12, 5).unwrap();
        let mut streams = EdgeStreams::new(&g, EdgeMode::Undirected, 9, 2);
        let real = realize_edges(&g, 0.4, EdgeMode::Undirected, 1, &mut streams).unwrap();
        for j in 0..12 {
            for k in receivers_of(&real, j) {
                assert!(receivers_of(&real, k).contains(&j));
            }
        }
    }

    #[test]
    fn rejects_bad_probability() {
        let g = build_regular_graph(4, 2).unwrap();
        let mut s = EdgeStreams::new(&g, EdgeMode::Undirected, 0, 0);
        assert!(matches!(
            realize_edges(&g, 1.5, EdgeMode::Undirected, 1, &mut s),
            Err(Error::InvalidProbability(_))
        ));
        assert!(realize_edges(&g, -0.1, EdgeMode::Undirected, 1, &mut s).is_err());
    }

    #[test]
    fn realization_is_a_function_of_step() {
        let g = build_regular_graph(10, 4).unwrap();
        for mode in [EdgeMode::Undirected, EdgeMode::Directed] {
            let mut seq = EdgeStreams::new(&g, mode, 77, 1);
            let forward: Vec<_> = (1..=30)
                .map(|t| realize_edges(&g, 0.5, mode, t, &mut seq).unwrap())
                .collect();
            let mut jumpy = EdgeStreams::new(&g, mode, 77, 1);
            for t in [17u64, 3, 30, 1, 2, 18] {
                let r = realize_edges(&g, 0.5, mode, t, &mut jumpy).unwrap();
                assert_eq!(r, forward[t as usize - 1]);
            }
        }
    }

    #[test]
    fn directed_pairs_fail_independently() {
        let g = build_regular_graph(20, 10).unwrap();
        let mut s = EdgeStreams::new(&g, EdgeMode::Directed, 1, 0);
        let mut asymmetric = 0;
        for t in 1..=200 {
            let r = realize_edges(&g, 0.5, EdgeMode::Directed, t, &mut s).unwrap();
            asymmetric += g
                .edges()
                .iter()
                .filter(|&&(u, v)| r.contains(u, v) != r.contains(v, u))
                .count();
        }
        // Expected half of all edge-steps: 0.5 * 100 * 200.
        assert!((9_000..11_000).contains(&asymmetric), "{asymmetric}");
    }

    #[test]
    fn per_edge_frequency_matches_p() {
        let g = build_regular_graph(20, 10).unwrap();
        let mut s = EdgeStreams::new(&g, EdgeMode::Undirected, 11, 0);
        let mut out = EdgeRealization::empty(20, EdgeMode::Undirected);
        let r = 20_000u64;
        let mut hits = 0u64;
        let mut total_edges = 0usize;
        let (u, v) = g.edges()[0];
        for t in 1..=r {
            s.realize_into(0.5, t, &mut out);
            hits += u64::from(out.contains(u, v));
            total_edges += out.cross_link_count() / 2;
        }
        let freq = hits as f64 / r as f64;
        assert!(
            (freq - 0.5).abs() <= 3.0 * (0.25 / r as f64).sqrt(),
            "{freq}"
        );
        let mean_edges = total_edges as f64 / r as f64;
        assert!(
            (mean_edges - 50.0).abs() <= 3.0 * (100.0 * 0.25 / r as f64).sqrt(),
            "{mean_edges}"
        );
    }
}
