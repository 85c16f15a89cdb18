//! Length-distributed, order-aware random walk sampling.
//!
//! A walk distribution vector `w` of length `s` gives the proportion of
//! walks to sample at each length `1..=s`; `nu` walks are drawn per start
//! node with lengths split according to `w` (largest-remainder rounding, so
//! counts always sum to `nu` exactly). Each walk step picks an out-neighbor
//! uniformly and records the visited node together with the step index.
//! Walks truncate at nodes with no out-neighbors.
//!
//! Sampling the whole graph is parallel over nodes; each node's generator
//! is derived from (seed, node index), so output is identical regardless of
//! worker count.

use std::collections::BTreeSet;

use rand::Rng;
use rayon::prelude::*;

use crate::documents::{DocumentSet, NodeDocument, WalkTuple};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::rng::stream_rng;

/// How walk lengths are distributed.
#[derive(Debug, Clone, PartialEq)]
pub enum DistributionKind {
    /// Every length `1..=s` equally likely: `w_i = 1/s`.
    Uniform,
    /// Caller-supplied proportion vector; must be non-negative and sum to 1.
    Explicit(Vec<f64>),
    /// Deterministic breadth-first expansion of order two instead of random
    /// walks.
    Bfs2,
}

impl DistributionKind {
    pub fn name(&self) -> &'static str {
        match self {
            DistributionKind::Uniform => "uniform",
            DistributionKind::Explicit(_) => "explicit",
            DistributionKind::Bfs2 => "bfs2",
        }
    }
}

/// Realized walk-length plan: proportions plus the exact number of walks of
/// each length for one start node.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkDistributionVector {
    weights: Vec<f64>,
    nu: u64,
    counts: Vec<u64>,
}

impl WalkDistributionVector {
    /// Maximum walk length `s`.
    pub fn max_length(&self) -> usize {
        self.weights.len()
    }

    /// Total walks per node.
    pub fn samples_per_node(&self) -> u64 {
        self.nu
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Entry `i` is the number of walks of length `i + 1`; sums to `nu`.
    pub fn realized_counts(&self) -> &[u64] {
        &self.counts
    }

    /// Expected walk length assuming no early truncation.
    pub fn mean_length(&self) -> f64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (i as f64 + 1.0) * c as f64)
            .sum::<f64>()
            / self.nu as f64
    }
}

const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

/// Builds the walk-length plan for one node.
///
/// Proportions are rounded to integer counts by the largest-remainder
/// method, so `sum(counts) == nu` exactly.
pub fn generate_sampling_vector(
    kind: &DistributionKind,
    s: usize,
    nu: u64,
) -> Result<WalkDistributionVector> {
    if s < 1 {
        return Err(Error::validation("maximum walk length s must be >= 1"));
    }
    if nu < 1 {
        return Err(Error::validation("walk samples nu must be >= 1"));
    }
    let weights: Vec<f64> = match kind {
        DistributionKind::Uniform => vec![1.0 / s as f64; s],
        DistributionKind::Explicit(w) => {
            if w.len() != s {
                return Err(Error::validation(format!(
                    "distribution vector has length {}, expected s = {s}",
                    w.len()
                )));
            }
            if let Some(bad) = w.iter().find(|&&x| !(x >= 0.0) || !x.is_finite()) {
                return Err(Error::validation(format!(
                    "distribution entries must be finite and >= 0, got {bad}"
                )));
            }
            let sum: f64 = w.iter().sum();
            if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
                return Err(Error::validation(format!(
                    "distribution vector sums to {sum}, expected 1"
                )));
            }
            w.clone()
        }
        DistributionKind::Bfs2 => {
            return Err(Error::validation(
                "bfs2 sampling is deterministic and has no walk distribution vector",
            ))
        }
    };

    let counts = largest_remainder_counts(&weights, nu);
    debug_assert_eq!(counts.iter().sum::<u64>(), nu);
    Ok(WalkDistributionVector {
        weights,
        nu,
        counts,
    })
}

fn largest_remainder_counts(weights: &[f64], total: u64) -> Vec<u64> {
    let mut counts: Vec<u64> = Vec::with_capacity(weights.len());
    let mut remainders: Vec<(usize, f64)> = Vec::with_capacity(weights.len());
    let mut assigned = 0u64;
    for (i, &w) in weights.iter().enumerate() {
        let exact = w * total as f64;
        let floor = exact.floor() as u64;
        counts.push(floor);
        assigned += floor;
        remainders.push((i, exact - floor as f64));
    }
    let mut leftover = total - assigned;
    // Largest remainder first; ties go to the lower index.
    remainders.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    for (i, _) in remainders {
        if leftover == 0 {
            break;
        }
        counts[i] += 1;
        leftover -= 1;
    }
    counts
}

/// Sampler parameters. `max_length` is `s`, `samples_per_node` is `nu`.
#[derive(Debug, Clone)]
pub struct SamplerConfig {
    pub distribution: DistributionKind,
    pub max_length: usize,
    pub samples_per_node: u64,
    pub seed: u64,
    /// Prefix every walk with a (start, 0) self-token. Ignored by bfs2,
    /// whose output is fully determined by the graph.
    pub include_start_node: bool,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            distribution: DistributionKind::Uniform,
            max_length: 5,
            samples_per_node: 1000,
            seed: 42,
            include_start_node: false,
        }
    }
}

/// Simulates one walk of up to `length` steps from `start`.
///
/// Returns tuples `(o, alpha)` for `alpha = 1..=length`, each `o` drawn
/// uniformly from the out-neighbors of the current node. The start node is
/// not stored. A node with no out-neighbors ends the walk early, so the
/// result may be shorter than `length` (empty when `start` is a dead end).
pub fn walk<R: Rng>(g: &Graph, start: NodeId, length: usize, rng: &mut R) -> Vec<WalkTuple> {
    let mut current = start;
    let mut tuples = Vec::with_capacity(length);
    for alpha in 1..=length {
        let neighbors = g.out_neighbors(current);
        if neighbors.is_empty() {
            break;
        }
        let next = neighbors[rng.random_range(0..neighbors.len())];
        tuples.push(WalkTuple::new(next, alpha as u16));
        current = next;
    }
    tuples
}

/// Samples all walks for one start node according to `dist`.
///
/// For each length `i + 1` with realized count `c`, simulates `c`
/// independent walks; the document stores them in (length ascending,
/// repetition) order.
pub fn sample_node<R: Rng>(
    g: &Graph,
    start: NodeId,
    dist: &WalkDistributionVector,
    include_start: bool,
    rng: &mut R,
) -> NodeDocument {
    let mut walks = Vec::with_capacity(dist.samples_per_node() as usize);
    for (i, &count) in dist.realized_counts().iter().enumerate() {
        let length = i + 1;
        for _ in 0..count {
            let mut tuples = walk(g, start, length, rng);
            if include_start {
                tuples.insert(0, WalkTuple::new(start, 0));
            }
            walks.push(tuples);
        }
    }
    NodeDocument { start, walks }
}

/// Deterministic breadth-first document of order two: `(n, 1)` for every
/// distinct out-neighbor and `(n, 2)` for every distinct node reachable by
/// a two-edge path (multiplicity 1 each, sorted by (order, node)).
pub fn sample_bfs2(g: &Graph, start: NodeId) -> NodeDocument {
    let one_hop: BTreeSet<NodeId> = g.out_neighbors(start).iter().copied().collect();
    let mut two_hop: BTreeSet<NodeId> = BTreeSet::new();
    for &mid in &one_hop {
        two_hop.extend(g.out_neighbors(mid).iter().copied());
    }
    let mut sequence: Vec<WalkTuple> = Vec::with_capacity(one_hop.len() + two_hop.len());
    sequence.extend(one_hop.iter().map(|&n| WalkTuple::new(n, 1)));
    sequence.extend(two_hop.iter().map(|&n| WalkTuple::new(n, 2)));
    let walks = if sequence.is_empty() {
        Vec::new()
    } else {
        vec![sequence]
    };
    NodeDocument { start, walks }
}

/// Samples documents for every node of the graph.
pub fn sample_all(g: &Graph, cfg: &SamplerConfig) -> Result<DocumentSet> {
    let nodes: Vec<NodeId> = g.nodes().collect();
    sample_subset(g, cfg, &nodes)
}

/// Samples documents for a subset of nodes (deduplicated, ordered by node
/// index). Deterministic for a given `cfg.seed` at any worker count.
pub fn sample_subset(g: &Graph, cfg: &SamplerConfig, nodes: &[NodeId]) -> Result<DocumentSet> {
    for &n in nodes {
        if n.index() >= g.num_nodes() {
            return Err(Error::validation(format!(
                "sample subset references node index {} outside the graph",
                n.0
            )));
        }
    }
    let mut subset: Vec<NodeId> = nodes.to_vec();
    subset.sort_unstable();
    subset.dedup();

    let docs: Vec<NodeDocument> = match &cfg.distribution {
        DistributionKind::Bfs2 => {
            if cfg.include_start_node {
                log::warn!("include_start_node is ignored by bfs2 sampling");
            }
            subset
                .par_iter()
                .map(|&start| sample_bfs2(g, start))
                .collect()
        }
        kind => {
            let dist = generate_sampling_vector(kind, cfg.max_length, cfg.samples_per_node)?;
            subset
                .par_iter()
                .map(|&start| {
                    let mut rng = stream_rng(cfg.seed, start.0 as u64);
                    sample_node(g, start, &dist, cfg.include_start_node, &mut rng)
                })
                .collect()
        }
    };

    Ok(DocumentSet {
        node_names: g.names().to_vec(),
        include_start: cfg.include_start_node,
        docs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain() -> Graph {
        // a -> b -> c
        Graph::from_edge_list(vec!["a".into(), "b".into(), "c".into()], &[(0, 1), (1, 2)]).unwrap()
    }

    fn rng() -> impl Rng {
        stream_rng(7, 0)
    }

    #[test]
    fn worked_example_counts() {
        let dist = generate_sampling_vector(
            &DistributionKind::Explicit(vec![0.2, 0.0, 0.5, 0.3]),
            4,
            100,
        )
        .unwrap();
        assert_eq!(dist.realized_counts(), &[20, 0, 50, 30]);
    }

    #[test]
    fn uniform_counts_split_evenly() {
        let dist = generate_sampling_vector(&DistributionKind::Uniform, 4, 100).unwrap();
        assert_eq!(dist.realized_counts(), &[25, 25, 25, 25]);
        assert!(dist.weights().iter().all(|&w| (w - 0.25).abs() < 1e-12));
    }

    #[test]
    fn counts_always_sum_to_nu() {
        for s in 1..=9 {
            for nu in [1u64, 7, 100, 1003] {
                let dist = generate_sampling_vector(&DistributionKind::Uniform, s, nu).unwrap();
                assert_eq!(dist.realized_counts().iter().sum::<u64>(), nu);
            }
        }
        // Remainders force rounding here: 3 * 1/3 summed over 100.
        let dist = generate_sampling_vector(&DistributionKind::Uniform, 3, 100).unwrap();
        assert_eq!(dist.realized_counts().iter().sum::<u64>(), 100);
        assert_eq!(dist.realized_counts(), &[34, 33, 33]);
    }

    #[test]
    fn invalid_explicit_vectors_rejected() {
        assert!(matches!(
            generate_sampling_vector(&DistributionKind::Explicit(vec![0.5, 0.6]), 2, 10),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            generate_sampling_vector(&DistributionKind::Explicit(vec![1.5, -0.5]), 2, 10),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn single_neighbor_chain_is_deterministic() {
        let g = chain();
        let tuples = walk(&g, NodeId(0), 2, &mut rng());
        assert_eq!(
            tuples,
            vec![
                WalkTuple::new(NodeId(1), 1),
                WalkTuple::new(NodeId(2), 2)
            ]
        );
    }

    #[test]
    fn self_loop_walk() {
        let g = Graph::from_edge_list(vec!["n".into()], &[(0, 0)]).unwrap();
        let tuples = walk(&g, NodeId(0), 3, &mut rng());
        let expected: Vec<WalkTuple> = (1..=3).map(|o| WalkTuple::new(NodeId(0), o)).collect();
        assert_eq!(tuples, expected);
    }

    #[test]
    fn dead_end_truncates() {
        let g = Graph::from_edge_list(vec!["a".into(), "b".into()], &[(0, 1)]).unwrap();
        // b has no out-neighbors: a walk of length 5 stops after one step.
        assert_eq!(walk(&g, NodeId(0), 5, &mut rng()).len(), 1);
        // and an isolated start yields nothing at all.
        assert!(walk(&g, NodeId(1), 5, &mut rng()).is_empty());
    }

    #[test]
    fn sample_node_merges_walks() {
        let g = chain();
        let dist =
            generate_sampling_vector(&DistributionKind::Explicit(vec![1.0]), 1, 2).unwrap();
        let doc = sample_node(&g, NodeId(0), &dist, false, &mut rng());
        let counts = doc.tuple_counts();
        assert_eq!(counts.len(), 1);
        assert_eq!(counts[&WalkTuple::new(NodeId(1), 1)], 2);
    }

    #[test]
    fn sample_node_self_loop_lengths() {
        let g = Graph::from_edge_list(vec!["n".into()], &[(0, 0)]).unwrap();
        let dist =
            generate_sampling_vector(&DistributionKind::Explicit(vec![0.0, 1.0]), 2, 1).unwrap();
        let doc = sample_node(&g, NodeId(0), &dist, false, &mut rng());
        let counts = doc.tuple_counts();
        assert_eq!(counts[&WalkTuple::new(NodeId(0), 1)], 1);
        assert_eq!(counts[&WalkTuple::new(NodeId(0), 2)], 1);
    }

    #[test]
    fn histogram_conformance_on_cycle() {
        // No dead ends, so realized walk lengths equal requested lengths.
        let g = Graph::from_edge_list(
            vec!["a".into(), "b".into(), "c".into()],
            &[(0, 1), (1, 2), (2, 0)],
        )
        .unwrap();
        let dist = generate_sampling_vector(
            &DistributionKind::Explicit(vec![0.2, 0.0, 0.5, 0.3]),
            4,
            100,
        )
        .unwrap();
        let doc = sample_node(&g, NodeId(0), &dist, false, &mut rng());
        let mut by_len = [0u64; 4];
        for w in &doc.walks {
            by_len[w.len() - 1] += 1;
        }
        assert_eq!(by_len, [20, 0, 50, 30]);
        assert!(doc.total_tuples() as u64 <= 100 * 4);
    }

    #[test]
    fn include_start_prefixes_every_walk() {
        let g = chain();
        let dist =
            generate_sampling_vector(&DistributionKind::Explicit(vec![1.0]), 1, 3).unwrap();
        let doc = sample_node(&g, NodeId(0), &dist, true, &mut rng());
        for w in &doc.walks {
            assert_eq!(w[0], WalkTuple::new(NodeId(0), 0));
        }
    }

    #[test]
    fn bfs2_star() {
        let g = Graph::from_edge_list(
            vec!["a".into(), "b".into(), "c".into()],
            &[(0, 1), (0, 2)],
        )
        .unwrap();
        let doc = sample_bfs2(&g, NodeId(0));
        assert_eq!(
            doc.walks,
            vec![vec![
                WalkTuple::new(NodeId(1), 1),
                WalkTuple::new(NodeId(2), 1)
            ]]
        );
    }

    #[test]
    fn bfs2_path() {
        let g = chain();
        let doc = sample_bfs2(&g, NodeId(0));
        assert_eq!(
            doc.walks,
            vec![vec![
                WalkTuple::new(NodeId(1), 1),
                WalkTuple::new(NodeId(2), 2)
            ]]
        );
    }

    #[test]
    fn bfs2_isolated() {
        let g = Graph::from_edge_list(vec!["a".into(), "b".into()], &[(1, 0)]).unwrap();
        assert!(sample_bfs2(&g, NodeId(0)).is_empty());
    }

    #[test]
    fn bfs2_two_cycle_reaches_start() {
        let g = Graph::from_edge_list(vec!["a".into(), "b".into()], &[(0, 1), (1, 0)]).unwrap();
        let doc = sample_bfs2(&g, NodeId(0));
        assert_eq!(
            doc.walks,
            vec![vec![
                WalkTuple::new(NodeId(1), 1),
                WalkTuple::new(NodeId(0), 2)
            ]]
        );
    }

    #[test]
    fn sample_all_isolated_nodes_give_empty_docs() {
        let g = Graph::from_edge_list(
            vec!["a".into(), "b".into(), "c".into()],
            &[(2, 2)], // only c has an edge
        )
        .unwrap();
        let cfg = SamplerConfig {
            max_length: 3,
            samples_per_node: 5,
            ..Default::default()
        };
        let set = sample_all(&g, &cfg).unwrap();
        assert_eq!(set.docs.len(), 3);
        assert!(set.docs[0].is_empty());
        assert!(set.docs[1].is_empty());
        assert!(!set.docs[2].is_empty());
    }

    #[test]
    fn sample_all_is_deterministic() {
        let g = Graph::from_edge_list(
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            &[(0, 1), (0, 2), (1, 2), (2, 3), (3, 0), (1, 0)],
        )
        .unwrap();
        let cfg = SamplerConfig {
            max_length: 4,
            samples_per_node: 20,
            seed: 99,
            ..Default::default()
        };
        let a = sample_all(&g, &cfg).unwrap();
        let b = sample_all(&g, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn three_cycle_single_neighbor_document() {
        let g = Graph::from_edge_list(
            vec!["a".into(), "b".into(), "c".into()],
            &[(0, 1), (1, 2), (2, 0)],
        )
        .unwrap();
        let cfg = SamplerConfig {
            max_length: 1,
            samples_per_node: 10,
            ..Default::default()
        };
        let set = sample_subset(&g, &cfg, &[NodeId(0)]).unwrap();
        let counts = set.docs[0].tuple_counts();
        assert_eq!(counts.len(), 1);
        assert_eq!(counts[&WalkTuple::new(NodeId(1), 1)], 10);
    }

    #[test]
    fn subset_is_sorted_and_deduped() {
        let g = chain();
        let cfg = SamplerConfig::default();
        let set = sample_subset(&g, &cfg, &[NodeId(2), NodeId(0), NodeId(2)]).unwrap();
        assert_eq!(set.docs.len(), 2);
        assert_eq!(set.docs[0].start, NodeId(0));
        assert_eq!(set.docs[1].start, NodeId(2));
    }
}
